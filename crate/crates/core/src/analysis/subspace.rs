use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::stabilizer::pullback;
use super::transfer::{split_index_table, verify_transfer, AncillaState};
use crate::algebra::{QuditPauliSet, SubspaceBasis};
use crate::error::Result;
use crate::tensor::{hermitian_eigen, DenseOperator, LatticeConfig};

/// Default singular-value tolerance, scaled by `√(ancilla dim)`.
pub const NULL_TOL: f64 = 1e-8;
/// Fidelity tolerance for the per-vector re-verification.
pub const REVERIFY_TOL: f64 = 1e-8;
/// Gram eigenvalues above this are never null-space candidates.
const CANDIDATE_EIGENVALUE: f64 = 1e-6;

/// Joint (`S_x` and `S_z`) and `S_x`-only robustness subspaces.
#[derive(Debug, Clone)]
pub struct RobustnessReport {
    pub joint: SubspaceBasis,
    pub x_only: SubspaceBasis,
    /// Null vectors of the joint map that failed re-verification.
    pub rejected: usize,
}

/// The linear maps `Φ ↦ (S_σ − I)(|j⟩⊗Φ)` as column blocks, one per basis state `j`
/// of the initial site.
///
/// `S_x = X_i†A_x`, and `X_i†` is unitary, so `‖(S_x − I)v‖ = ‖A_x v − X_i v‖`; the
/// blocks are built in that form to avoid forming `S_x`.
fn stabilizer_blocks(u: &DenseOperator, cfg: &LatticeConfig, include_z: bool) -> Result<Vec<DMatrix<Complex64>>> {
    let paulis = QuditPauliSet::new(cfg.local_dim())?;
    let d = cfg.local_dim();
    let table = split_index_table(cfg, cfg.initial());
    let anc_dim = cfg.ancilla_dim();
    let omega = paulis.omega();

    let mut blocks = Vec::new();
    let a_x = pullback(u, paulis.x(), cfg.target(), cfg)?;
    for j in 0..d {
        // X_i(|j⟩⊗Φ) = |j+1⟩⊗Φ
        let target_row = &table[(j + 1) % d];
        let mut b = DMatrix::<Complex64>::from_fn(cfg.dim(), anc_dim, |r, c| a_x.matrix()[(r, table[j][c])]);
        for (c, &g) in target_row.iter().enumerate() {
            b[(g, c)] -= Complex64::new(1.0, 0.0);
        }
        blocks.push(b);
    }
    if include_z {
        let a_z = pullback(u, paulis.z(), cfg.target(), cfg)?;
        for j in 0..d {
            let phase = omega.powu(j as u32);
            let mut b = DMatrix::<Complex64>::from_fn(cfg.dim(), anc_dim, |r, c| a_z.matrix()[(r, table[j][c])]);
            for (c, &g) in table[j].iter().enumerate() {
                b[(g, c)] -= phase;
            }
            blocks.push(b);
        }
    }
    Ok(blocks)
}

fn gram(blocks: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let n = blocks[0].ncols();
    let mut g = DMatrix::<Complex64>::zeros(n, n);
    for b in blocks {
        g += b.adjoint() * b;
    }
    g
}

/// Orthonormal vectors `v` with `Σ‖B v‖² < (tol·√n)²`, from the Gram matrix `Σ B†B`.
fn common_null_space(blocks: &[DMatrix<Complex64>], gram: &DMatrix<Complex64>, tol: f64) -> Vec<DVector<Complex64>> {
    let n = blocks[0].ncols();
    let (vals, vecs) = hermitian_eigen(gram);
    let threshold = tol * (n as f64).sqrt();
    vals.iter()
        .enumerate()
        .filter(|(_, &lam)| lam <= CANDIDATE_EIGENVALUE)
        .map(|(k, _)| vecs.column(k).into_owned())
        .filter(|v| {
            // the singular value itself, not its square, decides rank
            let sigma = blocks.iter().map(|b| (b * v).norm_squared()).sum::<f64>().sqrt();
            sigma < threshold
        })
        .collect()
}

/// Largest ancilla subspace on which `U` transfers, as the joint null space of
/// the stabilizer conditions. Every vector is re-checked by transfer fidelity.
pub fn robustness_report(u: &DenseOperator, cfg: &LatticeConfig, tol: f64) -> Result<RobustnessReport> {
    let blocks = stabilizer_blocks(u, cfg, true)?;
    let d = cfg.local_dim();
    let anc_dim = cfg.ancilla_dim();

    let gram_x = gram(&blocks[..d]);
    let gram_joint = &gram_x + gram(&blocks[d..]);
    let x_only = SubspaceBasis::from_orthonormal(anc_dim, common_null_space(&blocks[..d], &gram_x, tol))?;
    let candidates = common_null_space(&blocks, &gram_joint, tol);
    let total = candidates.len();
    let mut kept = Vec::with_capacity(total);
    for v in candidates {
        if verify_transfer(u, &AncillaState::Pure(v.clone()), cfg, REVERIFY_TOL)?.passed {
            kept.push(v);
        }
    }
    let rejected = total - kept.len();
    Ok(RobustnessReport { joint: SubspaceBasis::from_orthonormal(anc_dim, kept)?, x_only, rejected })
}

pub fn robustness_subspace(u: &DenseOperator, cfg: &LatticeConfig, tol: f64) -> Result<SubspaceBasis> {
    Ok(robustness_report(u, cfg, tol)?.joint)
}
