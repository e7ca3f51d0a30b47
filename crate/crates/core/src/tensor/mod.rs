//! Dense complex linear algebra on multi-site registers.

mod lattice;
mod norm;
mod operator;
mod spectral;

pub use lattice::{max_dim, set_max_dim, LatticeConfig, DEFAULT_MAX_DIM};
pub use norm::{schatten_from_singular_values, schatten_p_norm, singular_values, SchattenP, ANTI_HERMITIAN_TOL};
pub use operator::{
    commutator, embed_at_sites, hermitian_part, kron, permute_sites, permute_state, DenseOperator, HERMITIAN_TOL,
    UNITARY_TOL,
};
pub use spectral::{eigendecompose_unitary, hermitian_eigen, random_unitary, UnitaryEigenpair, RECONSTRUCTION_TOL};

pub(crate) use lattice::checked_dim;
pub(crate) use operator::max_abs;
