use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{hermitian_eigen, DenseOperator, LatticeConfig};

/// Validation tolerance for normalization, trace and positivity of ancilla states.
pub const STATE_TOL: f64 = 1e-10;

/// An ancilla state on all sites except the initial one, in ascending site order.
#[derive(Debug, Clone)]
pub enum AncillaState {
    Pure(DVector<Complex64>),
    /// Weighted ensemble of pure states; weights sum to one.
    Mixture(Vec<(f64, DVector<Complex64>)>),
    Density(DMatrix<Complex64>),
}

impl AncillaState {
    /// Uniform mixture of the given pure states.
    pub fn uniform(states: &[DVector<Complex64>]) -> Self {
        let w = 1.0 / states.len() as f64;
        AncillaState::Mixture(states.iter().map(|s| (w, s.clone())).collect())
    }

    fn dim(&self) -> usize {
        match self {
            AncillaState::Pure(v) => v.len(),
            AncillaState::Mixture(e) => e.first().map_or(0, |(_, v)| v.len()),
            AncillaState::Density(m) => m.nrows(),
        }
    }

    /// Decomposes the state into a validated pure-state ensemble.
    pub fn ensemble(&self) -> Result<Vec<(f64, DVector<Complex64>)>> {
        let check_norm = |v: &DVector<Complex64>| {
            let n = v.norm();
            if (n - 1.0).abs() > STATE_TOL {
                return Err(Error::InvalidDensity(format!("pure component has norm {n}")));
            }
            Ok(())
        };
        match self {
            AncillaState::Pure(v) => {
                check_norm(v)?;
                Ok(vec![(1.0, v.clone())])
            }
            AncillaState::Mixture(items) => {
                if items.is_empty() {
                    return Err(Error::InvalidDensity("empty mixture".into()));
                }
                let mut total = 0.0;
                for (w, v) in items {
                    if !(*w >= 0.0) {
                        return Err(Error::InvalidDensity(format!("negative weight {w}")));
                    }
                    if v.len() != items[0].1.len() {
                        return Err(Error::Dimension("mixture components differ in length".into()));
                    }
                    check_norm(v)?;
                    total += w;
                }
                if (total - 1.0).abs() > STATE_TOL {
                    return Err(Error::InvalidDensity(format!("weights sum to {total}")));
                }
                Ok(items.clone())
            }
            AncillaState::Density(rho) => {
                if rho.nrows() != rho.ncols() {
                    return Err(Error::InvalidDensity("density matrix is not square".into()));
                }
                let herm = (rho - rho.adjoint()).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
                if herm > STATE_TOL {
                    return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:.3e})")));
                }
                let tr = rho.trace();
                if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
                    return Err(Error::InvalidDensity(format!("trace {tr}")));
                }
                let (vals, vecs) = hermitian_eigen(rho);
                if let Some(min) = vals.iter().copied().reduce(f64::min) {
                    if min < -STATE_TOL {
                        return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
                    }
                }
                Ok(vals
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w > STATE_TOL * 1e-4)
                    .map(|(k, &w)| (w, vecs.column(k).into_owned()))
                    .collect())
            }
        }
    }
}

/// Outcome of [`verify_transfer`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferReport {
    pub passed: bool,
    pub worst_fidelity: f64,
}

/// `table[d][rest]` is the global index with digit `d` on `site` and the other
/// sites, in ascending order, given by `rest`.
pub(crate) fn split_index_table(cfg: &LatticeConfig, site: usize) -> Vec<Vec<usize>> {
    let d = cfg.local_dim();
    let rest_dim = cfg.dim() / d;
    let stride = cfg.stride(site);
    (0..d)
        .map(|digit| {
            (0..rest_dim)
                .map(|r| {
                    // digits above `site` stay in place; digits below shift right by one slot
                    let high = r / stride;
                    let low = r % stride;
                    (high * d + digit) * stride + low
                })
                .collect()
        })
        .collect()
}

/// Tomographically complete single-site test states.
pub fn test_states(local_dim: usize) -> Vec<DVector<Complex64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let basis = |k: usize| {
        let mut v = DVector::zeros(local_dim);
        v[k] = Complex64::new(1.0, 0.0);
        v
    };
    let mut out: Vec<DVector<Complex64>> = (0..local_dim).map(basis).collect();
    let pairs: Vec<(usize, usize)> = if local_dim == 2 {
        vec![(0, 1)]
    } else {
        (0..local_dim).flat_map(|a| (a + 1..local_dim).map(move |b| (a, b))).collect()
    };
    for (a, b) in pairs {
        out.push((basis(a) + basis(b)) * Complex64::new(s, 0.0));
        out.push((basis(a) + basis(b) * Complex64::new(0.0, 1.0)) * Complex64::new(s, 0.0));
    }
    out
}

/// Checks that `U` moves every test state from the initial to the final site
/// when the ancilla is `ancilla`: min fidelity `⟨ψ|ρ_f|ψ⟩ ≥ 1 − tol`.
pub fn verify_transfer(
    u: &DenseOperator,
    ancilla: &AncillaState,
    cfg: &LatticeConfig,
    tol: f64,
) -> Result<TransferReport> {
    if u.dim() != cfg.dim() {
        return Err(Error::Dimension(format!("unitary dim {} vs register dim {}", u.dim(), cfg.dim())));
    }
    if ancilla.dim() != cfg.ancilla_dim() {
        return Err(Error::Dimension(format!("ancilla dim {} vs {}", ancilla.dim(), cfg.ancilla_dim())));
    }
    let ensemble = ancilla.ensemble()?;
    let input_table = split_index_table(cfg, cfg.initial());
    let output_table = split_index_table(cfg, cfg.target());
    let d = cfg.local_dim();

    let mut worst = f64::INFINITY;
    for psi in test_states(d) {
        let mut fidelity = 0.0;
        for (w, phi) in &ensemble {
            let mut input = DVector::<Complex64>::zeros(cfg.dim());
            for (j, row) in input_table.iter().enumerate() {
                if psi[j] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (r, &g) in row.iter().enumerate() {
                    input[g] = psi[j] * phi[r];
                }
            }
            let out = u.matrix() * input;
            let rest_dim = output_table[0].len();
            let overlap: f64 = (0..rest_dim)
                .map(|r| {
                    (0..d)
                        .map(|a| psi[a].conj() * out[output_table[a][r]])
                        .sum::<Complex64>()
                        .norm_sqr()
                })
                .sum();
            fidelity += w * overlap;
        }
        worst = worst.min(fidelity);
    }
    Ok(TransferReport { passed: worst >= 1.0 - tol, worst_fidelity: worst })
}
