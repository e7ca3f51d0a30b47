use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::operator::{max_abs, DenseOperator, UNITARY_TOL};
use crate::error::{Error, Result};

/// Bound on `‖Σ e^{iθ}|χ⟩⟨χ| − U‖_∞` accepted from [`eigendecompose_unitary`].
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// One eigenpair `e^{iθ}|χ⟩` of a unitary.
#[derive(Debug, Clone)]
pub struct UnitaryEigenpair {
    pub phase: f64,
    pub vector: DVector<Complex64>,
}

/// Gap below which eigenvalues of `He U` are treated as one cluster.
const CLUSTER_GAP: f64 = 1e-6;

/// Full eigendecomposition of a unitary.
///
/// `He U` and `(U − U†)/2i` commute. The first is diagonalized, then the second
/// within each near-degenerate cluster of the first, which separates phases
/// `±θ` sharing a cosine. Phases come from the Rayleigh quotients.
pub fn eigendecompose_unitary(u: &DenseOperator) -> Result<Vec<UnitaryEigenpair>> {
    if !u.is_unitary() {
        let dev = u.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
    }
    let n = u.dim();
    let m = u.matrix();
    let (cos_vals, q) = hermitian_eigen(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cos_vals[a].total_cmp(&cos_vals[b]));
    let sin_part = (m - m.adjoint()) * Complex64::new(0.0, -0.5);

    let mut pairs = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cos_vals[order[end]] - cos_vals[order[end - 1]] < CLUSTER_GAP {
            end += 1;
        }
        let block = DMatrix::from_fn(n, end - start, |r, c| q[(r, order[start + c])]);
        let vectors = if end - start == 1 {
            block
        } else {
            let (_, w) = hermitian_eigen(&(block.adjoint() * &sin_part * &block));
            block * w
        };
        for c in 0..vectors.ncols() {
            let v = vectors.column(c).into_owned();
            let rayleigh = (v.adjoint() * m * &v)[(0, 0)];
            pairs.push(UnitaryEigenpair { phase: rayleigh.arg(), vector: v });
        }
        start = end;
    }

    let mut rebuilt = DMatrix::<Complex64>::zeros(n, n);
    for pair in &pairs {
        let ev = Complex64::from_polar(1.0, pair.phase);
        rebuilt += &pair.vector * pair.vector.adjoint() * ev;
    }
    let err = spectral_norm(&(rebuilt - m));
    if err > RECONSTRUCTION_TOL {
        return Err(Error::Numerical(format!("unitary eigendecomposition residual {err:.3e}")));
    }
    Ok(pairs)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix (symmetrized first).
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if max_abs(m) == 0.0 {
        return 0.0;
    }
    m.clone().singular_values().iter().fold(0.0_f64, |a, s| a.max(*s))
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseOperator {
    let g = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) / std::f64::consts::SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    // fix the column phases so the distribution is Haar
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    DenseOperator::assume_unitary(q)
}
