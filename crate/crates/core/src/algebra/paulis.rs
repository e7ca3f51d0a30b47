use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{DenseOperator, LatticeConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Clock and shift operators of one qudit, plus the anticommuting pair used for
/// commutator bounds.
///
/// For even `D` the pair is `X^{D/2}` and the clock `Z`. For odd `D` no
/// full-rank pair anticommutes, so both are taken from the `(D−1)`-level
/// algebra on levels `0..D−2` and vanish on level `D−1`.
#[derive(Debug, Clone)]
pub struct QuditPauliSet {
    local_dim: usize,
    omega: Complex64,
    shift: DenseOperator,
    clock: DenseOperator,
    x_tilde: DenseOperator,
    z_partner: DenseOperator,
}

impl QuditPauliSet {
    pub fn new(local_dim: usize) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::Domain(format!("local dimension must be >= 2, got {local_dim}")));
        }
        let shift = shift_matrix(local_dim);
        let clock = clock_matrix(local_dim);
        let (x_tilde, z_partner) = if local_dim % 2 == 0 {
            (matrix_power(&shift, local_dim / 2), clock.clone())
        } else {
            let inner = local_dim - 1;
            (
                embed_levels(&matrix_power(&shift_matrix(inner), inner / 2), local_dim, ZERO),
                embed_levels(&clock_matrix(inner), local_dim, ZERO),
            )
        };
        Ok(Self {
            local_dim,
            omega: root_of_unity(local_dim),
            shift: DenseOperator::new_unitary(shift)?.with_label("X"),
            clock: DenseOperator::new_unitary(clock)?.with_label("Z"),
            x_tilde: DenseOperator::new(x_tilde)?.with_label("X̃"),
            z_partner: DenseOperator::new(z_partner)?.with_label("Z̃"),
        })
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// `ω = exp(2πi/D)`.
    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    /// Shift `X|j⟩ = |j+1 mod D⟩`.
    pub fn x(&self) -> &DenseOperator {
        &self.shift
    }

    /// Clock `Z|j⟩ = ω^j|j⟩`.
    pub fn z(&self) -> &DenseOperator {
        &self.clock
    }

    pub fn x_tilde(&self) -> &DenseOperator {
        &self.x_tilde
    }

    /// Diagonal partner of `X̃` in the commutator `[U†X̃_fU, Z̃_i]`.
    pub fn z_partner(&self) -> &DenseOperator {
        &self.z_partner
    }

    /// `Ỹ = X̃·Z̃`.
    pub fn y_tilde(&self) -> DenseOperator {
        &self.x_tilde * &self.z_partner
    }
}

fn root_of_unity(d: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / d as f64)
}

fn shift_matrix(d: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + 1) % d, j)] = ONE;
    }
    m
}

fn clock_matrix(d: usize) -> DMatrix<Complex64> {
    let w = root_of_unity(d);
    DMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |j, _| w.powu(j as u32)))
}

fn matrix_power(m: &DMatrix<Complex64>, k: usize) -> DMatrix<Complex64> {
    (0..k).fold(DMatrix::identity(m.nrows(), m.ncols()), |acc, _| acc * m)
}

/// Places `inner` on the first levels of a `d`-level system, `fill` on the rest of the diagonal.
fn embed_levels(inner: &DMatrix<Complex64>, d: usize, fill: Complex64) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(d, d);
    let k = inner.nrows();
    m.view_mut((0, 0), (k, k)).copy_from(inner);
    for j in k..d {
        m[(j, j)] = fill;
    }
    m
}

/// Qudit Fourier transform `F[j,k] = ω^{jk}/√D`; the qubit Hadamard for `D = 2`.
///
/// Satisfies `F† Z F = X` (and `F Z F† = X†`); the two agree for `D = 2`.
pub fn hadamard(local_dim: usize) -> Result<DenseOperator> {
    if local_dim < 2 {
        return Err(Error::Domain(format!("local dimension must be >= 2, got {local_dim}")));
    }
    if local_dim == 2 {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        return Ok(DenseOperator::new_unitary(DMatrix::from_row_slice(2, 2, &[s, s, s, -s]))?.with_label("H"));
    }
    Ok(DenseOperator::new_unitary(fourier_matrix(local_dim))?.with_label("F"))
}

fn fourier_matrix(d: usize) -> DMatrix<Complex64> {
    let w = root_of_unity(d);
    let norm = 1.0 / (d as f64).sqrt();
    DMatrix::from_fn(d, d, |j, k| w.powu(((j * k) % d) as u32) * norm)
}

/// Rotation applied on the initial site in the failure branch of the saturating
/// protocol: it must conjugate `X̃` into a diagonal operator.
///
/// Even `D` uses the Fourier transform. Odd `D` uses the `(D−1)`-level Fourier
/// transform on levels `0..D−2` and leaves level `D−1` alone, because the
/// embedded `X̃` is only diagonalized by the smaller transform.
pub fn failure_rotation(local_dim: usize) -> Result<DenseOperator> {
    if local_dim % 2 == 0 {
        return hadamard(local_dim);
    }
    if local_dim < 3 {
        return Err(Error::Domain(format!("local dimension must be >= 2, got {local_dim}")));
    }
    let inner = if local_dim - 1 == 2 { hadamard(2)?.into_matrix() } else { fourier_matrix(local_dim - 1) };
    Ok(DenseOperator::new_unitary(embed_levels(&inner, local_dim, ONE))?.with_label("F⊕1"))
}

/// Exchange of two qudits.
pub fn swap(local_dim: usize) -> DenseOperator {
    let d = local_dim;
    let mut m = DMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            m[(b * d + a, a * d + b)] = ONE;
        }
    }
    DenseOperator::new_unitary(m).expect("swap is a permutation").with_label("SWAP")
}

/// Controlled-NOT, control on the first listed site.
pub fn cnot() -> DenseOperator {
    let mut m = DMatrix::zeros(4, 4);
    for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(r, c)] = ONE;
    }
    DenseOperator::new_unitary(m).expect("cnot is a permutation").with_label("CNOT")
}

/// `diag(1, 1, 1, e^{iθ})`.
pub fn controlled_phase(theta: f64) -> DenseOperator {
    let mut m = DMatrix::identity(4, 4);
    m[(3, 3)] = Complex64::from_polar(1.0, theta);
    DenseOperator::new_unitary(m).expect("diagonal phases are unitary").with_label("CP")
}

pub fn pauli_x() -> DenseOperator {
    DenseOperator::new_unitary(shift_matrix(2)).expect("pauli").with_label("X")
}

pub fn pauli_y() -> DenseOperator {
    let i = Complex64::new(0.0, 1.0);
    DenseOperator::new_unitary(DMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]))
        .expect("pauli")
        .with_label("Y")
}

pub fn pauli_z() -> DenseOperator {
    DenseOperator::new_unitary(clock_matrix(2)).expect("pauli").with_label("Z")
}

/// Ordered list of gates on a register, each a small operator on listed sites.
#[derive(Debug, Clone)]
pub struct Circuit {
    cfg: LatticeConfig,
    gates: Vec<(DenseOperator, Vec<usize>)>,
}

impl Circuit {
    pub fn new(cfg: LatticeConfig) -> Self {
        Self { cfg, gates: Vec::new() }
    }

    pub fn push(&mut self, gate: DenseOperator, sites: &[usize]) -> &mut Self {
        self.gates.push((gate, sites.to_vec()));
        self
    }

    pub fn append(&mut self, other: &Circuit) -> &mut Self {
        self.gates.extend(other.gates.iter().cloned());
        self
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gates reversed and adjointed.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            cfg: self.cfg,
            gates: self.gates.iter().rev().map(|(g, s)| (g.adjoint(), s.clone())).collect(),
        }
    }

    /// Product of all gates, first gate applied first.
    pub fn unitary(&self) -> Result<DenseOperator> {
        let mut u = DenseOperator::identity(self.cfg.dim());
        for (gate, sites) in &self.gates {
            u = u.apply_local_left(gate, sites, &self.cfg)?;
        }
        Ok(u)
    }
}

/// Cascade of CNOTs from `control` to each of `targets`.
pub fn cnot_fanout(circuit: &mut Circuit, control: usize, targets: &[usize]) {
    for &t in targets {
        circuit.push(cnot(), &[control, t]);
    }
}

/// GHZ encoder on `n_sites` qubits: CNOTs from site 0 to every other site,
/// mapping `(a|0⟩+b|1⟩)|0…0⟩` to `a|0…0⟩ + b|1…1⟩`.
pub fn ghz_encoder(n_sites: usize) -> Result<DenseOperator> {
    if n_sites == 0 {
        return Err(Error::Config("GHZ encoder needs at least one site".into()));
    }
    if n_sites == 1 {
        return Ok(DenseOperator::identity(2));
    }
    let cfg = LatticeConfig::qubit_chain(n_sites)?;
    let mut c = Circuit::new(cfg);
    cnot_fanout(&mut c, 0, &(1..n_sites).collect::<Vec<_>>());
    Ok(c.unitary()?.with_label(format!("GHZ{n_sites}")))
}
