//! Standard operators, gates and ancilla subspaces.

mod paulis;
mod subspace;

pub use paulis::{
    cnot, cnot_fanout, controlled_phase, failure_rotation, ghz_encoder, hadamard, pauli_x, pauli_y, pauli_z, swap,
    Circuit, QuditPauliSet,
};
pub use subspace::{
    dicke_states_3, projector_all_zero, projector_full, projector_span, projector_symmetric_groups, SubspaceBasis,
    SPAN_DROP_TOL,
};
