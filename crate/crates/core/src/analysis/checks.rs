use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use super::bounds::{theorem1_bound, BoundQuery, BoundVariant};
use super::stabilizer::{commutator_norms, extract_stabilizers};
use super::subspace::{robustness_subspace, NULL_TOL};
use super::transfer::{verify_transfer, AncillaState};
use crate::algebra::{pauli_x, pauli_y, pauli_z};
use crate::error::{Error, Result};
use crate::protocols::ProtocolInstance;
use crate::tensor::{
    commutator, eigendecompose_unitary, embed_at_sites, hermitian_part, schatten_from_singular_values, DenseOperator,
    LatticeConfig, SchattenP,
};

/// Allowed `|actual − bound|` for a saturating protocol.
pub const SATURATION_TOL: f64 = 1e-9;
/// Phase tolerance for counting `±1` eigenvalues.
pub const PHASE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationRow {
    pub p: SchattenP,
    pub actual: f64,
    pub bound: f64,
    /// `actual − bound`.
    pub gap: f64,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationReport {
    pub computed_dim: usize,
    pub rows: Vec<SaturationRow>,
}

impl SaturationReport {
    pub fn all_saturated(&self) -> bool {
        self.rows.iter().all(|r| r.saturated)
    }
}

/// Compares the commutator norm of `protocol` with the bound evaluated at its
/// computed robustness dimension.
pub fn saturation_check(protocol: &ProtocolInstance, ps: &[SchattenP]) -> Result<SaturationReport> {
    let cfg = &protocol.cfg;
    let computed_dim = robustness_subspace(&protocol.unitary, cfg, NULL_TOL)?.dim();
    if computed_dim == 0 {
        return Err(Error::Numerical(format!("{} has an empty robustness subspace", protocol.name)));
    }
    let actual = commutator_norms(&protocol.unitary, cfg, ps)?;
    let variant = BoundVariant::for_local_dim(cfg.local_dim());
    let rows = ps
        .iter()
        .zip(actual)
        .map(|(&p, actual)| {
            let q = BoundQuery { sites: cfg.sites(), dim_s: computed_dim as f64, p, local_dim: cfg.local_dim(), variant: variant.clone() };
            let bound = theorem1_bound(&q)?;
            let gap = actual - bound;
            Ok(SaturationRow { p, actual, bound, gap, saturated: gap.abs() <= SATURATION_TOL })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SaturationReport { computed_dim, rows })
}

fn require_qubits(cfg: &LatticeConfig) -> Result<()> {
    if cfg.local_dim() != 2 {
        return Err(Error::Domain(format!("qubit identity checked on D = {}", cfg.local_dim())));
    }
    Ok(())
}

/// `V = Y_iS_x`.
pub fn v_operator(u: &DenseOperator, cfg: &LatticeConfig) -> Result<DenseOperator> {
    require_qubits(cfg)?;
    let pair = extract_stabilizers(u, cfg)?;
    pair.s_x.apply_local_left(&pauli_y(), &[cfg.initial()], cfg)
}

/// Max entry of `|[X_iS_x, Z_i] + 2i He(Y_iS_x)|`, with both sides built from generic products.
pub fn lemma_s1_check(u: &DenseOperator, cfg: &LatticeConfig) -> Result<f64> {
    require_qubits(cfg)?;
    let i = cfg.initial();
    let pair = extract_stabilizers(u, cfg)?;
    let xs = embed_at_sites(&pauli_x(), &[i], cfg)?.compose(&pair.s_x)?;
    let z = embed_at_sites(&pauli_z(), &[i], cfg)?;
    let lhs = commutator(&xs, &z)?;
    let v = embed_at_sites(&pauli_y(), &[i], cfg)?.compose(&pair.s_x)?;
    let rhs = hermitian_part(&v).scale(Complex64::new(0.0, -2.0));
    Ok(lhs.max_abs_diff(&rhs))
}

/// Commutator norms recomputed from the eigenphases of `V`: `2(Σ|cos θ_k|^p / 2^L)^{1/p}`.
pub fn norms_from_v_phases(u: &DenseOperator, cfg: &LatticeConfig, ps: &[SchattenP]) -> Result<Vec<f64>> {
    let v = v_operator(u, cfg)?;
    let sv: Vec<f64> = eigendecompose_unitary(&v)?.iter().map(|e| 2.0 * e.phase.cos().abs()).collect();
    Ok(ps.iter().map(|&p| schatten_from_singular_values(&sv, cfg.dim(), p)).collect())
}

/// Numbers of `+1` and `−1` eigenvalues of `V`.
pub fn v_sign_counts(u: &DenseOperator, cfg: &LatticeConfig) -> Result<(usize, usize)> {
    let v = v_operator(u, cfg)?;
    let pairs = eigendecompose_unitary(&v)?;
    let plus = pairs.iter().filter(|e| e.phase.abs() < PHASE_TOL).count();
    let minus = pairs.iter().filter(|e| (e.phase.abs() - PI).abs() < PHASE_TOL).count();
    Ok((plus, minus))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    pub mixture_passes: bool,
    pub components_pass: bool,
    /// Mixture and componentwise verdicts agree.
    pub consistent: bool,
}

/// Transfer for the uniform mixture of `phis` versus transfer for each of them.
pub fn convexity_check(
    u: &DenseOperator,
    cfg: &LatticeConfig,
    phis: &[DVector<Complex64>],
    tol: f64,
) -> Result<ConvexityReport> {
    if phis.is_empty() {
        return Err(Error::Config("convexity check needs at least one ancilla state".into()));
    }
    let mixture_passes = verify_transfer(u, &AncillaState::uniform(phis), cfg, tol)?.passed;
    let mut components_pass = true;
    for phi in phis {
        components_pass &= verify_transfer(u, &AncillaState::Pure(phi.clone()), cfg, tol)?.passed;
    }
    Ok(ConvexityReport { mixture_passes, components_pass, consistent: mixture_passes == components_pass })
}
