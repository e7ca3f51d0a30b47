use num_complex::Complex64;

use crate::algebra::QuditPauliSet;
use crate::error::{Error, Result};
use crate::tensor::{
    max_abs, schatten_from_singular_values, singular_values, DenseOperator, LatticeConfig, SchattenP,
};

/// The unitaries `S_x`, `S_z` defined by `U†X_fU = X_iS_x` and `U†Z_fU = Z_iS_z`.
#[derive(Debug, Clone)]
pub struct StabilizerPair {
    pub s_x: DenseOperator,
    pub s_z: DenseOperator,
    pub cfg: LatticeConfig,
}

impl StabilizerPair {
    /// Max entry of `|X_iS_x − S_x†X_i|`. Qubits only.
    pub fn hermiticity_relation_deviation(&self) -> Result<f64> {
        if self.cfg.local_dim() != 2 {
            return Err(Error::Domain("the X_iS_x = S_x†X_i relation is stated for qubits".into()));
        }
        let x = QuditPauliSet::new(2)?.x().clone();
        let i = self.cfg.initial();
        let lhs = self.s_x.apply_local_left(&x, &[i], &self.cfg)?;
        let rhs = self.s_x.adjoint().apply_local_right(&x, &[i], &self.cfg)?;
        Ok(lhs.max_abs_diff(&rhs))
    }

    /// Larger of the two unitarity deviations.
    pub fn unitarity_deviation(&self) -> f64 {
        self.s_x.unitarity_deviation().max(self.s_z.unitarity_deviation())
    }
}

fn check_register(u: &DenseOperator, cfg: &LatticeConfig) -> Result<()> {
    if u.dim() != cfg.dim() {
        return Err(Error::Dimension(format!("unitary dim {} vs register dim {}", u.dim(), cfg.dim())));
    }
    Ok(())
}

/// `U† O_site U`.
pub fn pullback(u: &DenseOperator, op: &DenseOperator, site: usize, cfg: &LatticeConfig) -> Result<DenseOperator> {
    check_register(u, cfg)?;
    let ou = u.apply_local_left(op, &[site], cfg)?;
    u.adjoint().compose(&ou)
}

/// Extracts `S_x = X_i†(U†X_fU)` and `S_z = Z_i†(U†Z_fU)` with the full clock and shift.
///
/// Does not check that `U` transfers anything.
pub fn extract_stabilizers(u: &DenseOperator, cfg: &LatticeConfig) -> Result<StabilizerPair> {
    let paulis = QuditPauliSet::new(cfg.local_dim())?;
    let i = cfg.initial();
    let f = cfg.target();
    let s_x = pullback(u, paulis.x(), f, cfg)?.apply_local_left(&paulis.x().adjoint(), &[i], cfg)?;
    let s_z = pullback(u, paulis.z(), f, cfg)?.apply_local_left(&paulis.z().adjoint(), &[i], cfg)?;
    Ok(StabilizerPair { s_x, s_z, cfg: *cfg })
}

/// `[U†X̃_fU, Z̃_i]`, using that `Z̃_i` is diagonal: `C_ab = A_ab (z_b − z_a)`.
pub fn commutator_operator(u: &DenseOperator, cfg: &LatticeConfig) -> Result<DenseOperator> {
    let paulis = QuditPauliSet::new(cfg.local_dim())?;
    let a = pullback(u, paulis.x_tilde(), cfg.target(), cfg)?;
    let partner = paulis.z_partner();
    let i = cfg.initial();
    let z: Vec<Complex64> = (0..cfg.dim()).map(|idx| {
        let d = cfg.digit(idx, i);
        partner.entry(d, d)
    }).collect();
    let mut m = a.into_matrix();
    for col in 0..cfg.dim() {
        for row in 0..cfg.dim() {
            m[(row, col)] *= z[col] - z[row];
        }
    }
    DenseOperator::new(m)
}

/// `‖[U†X̃_fU, Z̃_i]‖_p` for each `p`, from one spectral computation.
pub fn commutator_norms(u: &DenseOperator, cfg: &LatticeConfig, ps: &[SchattenP]) -> Result<Vec<f64>> {
    let c = commutator_operator(u, cfg)?;
    if max_abs(c.matrix()) == 0.0 {
        return Ok(vec![0.0; ps.len()]);
    }
    let sv = singular_values(&c);
    Ok(ps.iter().map(|&p| schatten_from_singular_values(&sv, c.dim(), p)).collect())
}

pub fn commutator_norm(u: &DenseOperator, cfg: &LatticeConfig, p: SchattenP) -> Result<f64> {
    Ok(commutator_norms(u, cfg, &[p])?[0])
}
