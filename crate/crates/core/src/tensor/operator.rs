use std::fmt;
use std::ops::Mul;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::lattice::{check_capacity, checked_dim, LatticeConfig};
use crate::error::{Error, Result};

/// Tolerance on the largest singular value of `O†O − I` for unitary operators.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance on the largest entry of `O − O†` for Hermitian operators.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Square complex matrix acting on a multi-site register.
#[derive(Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
    label: Option<String>,
    unitary: bool,
    hermitian: bool,
}

impl fmt::Debug for DenseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DenseOperator")
            .field("dim", &self.dim())
            .field("label", &self.label)
            .field("unitary", &self.unitary)
            .field("hermitian", &self.hermitian)
            .finish()
    }
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() == 0 {
            return Err(Error::Dimension("operator dimension must be positive".into()));
        }
        check_capacity(matrix.nrows() as u128)?;
        Ok(Self { matrix, label: None, unitary: false, hermitian: false })
    }

    /// Builds from `dim²` entries in row-major order.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Validates `O†O = I` before flagging the result unitary.
    pub fn new_unitary(matrix: DMatrix<Complex64>) -> Result<Self> {
        let mut op = Self::new(matrix)?;
        let dev = op.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        op.unitary = true;
        op.hermitian = op.hermiticity_deviation() <= HERMITIAN_TOL;
        Ok(op)
    }

    pub fn new_hermitian(matrix: DMatrix<Complex64>) -> Result<Self> {
        let mut op = Self::new(matrix)?;
        let dev = op.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::Domain(format!("operator is not Hermitian (deviation {dev:.3e})")));
        }
        op.hermitian = true;
        Ok(op)
    }

    /// Caller guarantees unitarity (products and tensor products of unitaries).
    pub(crate) fn assume_unitary(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix, label: None, unitary: true, hermitian: false }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim), label: None, unitary: true, hermitian: true }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: DMatrix::zeros(dim, dim), label: None, unitary: false, hermitian: true }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        self.matrix.transpose().as_slice().to_vec()
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            label: self.label.as_ref().map(|l| format!("({l})†")),
            unitary: self.unitary,
            hermitian: self.hermitian,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let real_unit = (factor.norm() - 1.0).abs() < 1e-15;
        Self {
            matrix: &self.matrix * factor,
            label: None,
            unitary: self.unitary && real_unit,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
            label: None,
            unitary: false,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            matrix: &self.matrix - &other.matrix,
            label: None,
            unitary: false,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
            label: None,
            unitary: self.unitary && other.unitary,
            hermitian: false,
        })
    }

    pub fn apply(&self, state: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if state.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "state of length {} for operator of dimension {}",
                state.len(),
                self.dim()
            )));
        }
        Ok(&self.matrix * state)
    }

    /// Largest singular value of `O†O − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        let gram = self.matrix.adjoint() * &self.matrix - DMatrix::<Complex64>::identity(n, n);
        let frob = gram.norm();
        // Frobenius dominates the spectral norm, so small values settle it.
        if frob <= UNITARY_TOL {
            return frob;
        }
        let herm = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest entry of `|O − O†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Largest entry of `|O + O†|`.
    pub fn anti_hermiticity_deviation(&self) -> f64 {
        max_abs(&(&self.matrix + self.matrix.adjoint()))
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.matrix - &other.matrix))
    }

    /// `G·self` where `G` is `local` embedded on `sites`, without forming `G`.
    pub fn apply_local_left(&self, local: &DenseOperator, sites: &[usize], cfg: &LatticeConfig) -> Result<Self> {
        let layout = SiteLayout::new(local, sites, cfg, self.dim())?;
        let block = layout.offsets.len();
        let lm = local.matrix();
        let mut out = self.matrix.clone();
        let mut gathered = vec![Complex64::new(0.0, 0.0); block];
        for col in 0..self.dim() {
            let src = self.matrix.column(col);
            let mut dst = out.column_mut(col);
            for &base in &layout.bases {
                for (g, &off) in gathered.iter_mut().zip(&layout.offsets) {
                    *g = src[base + off];
                }
                for (a, &off) in layout.offsets.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (b, g) in gathered.iter().enumerate() {
                        acc += lm[(a, b)] * g;
                    }
                    dst[base + off] = acc;
                }
            }
        }
        Ok(Self {
            matrix: out,
            label: None,
            unitary: self.unitary && local.unitary,
            hermitian: false,
        })
    }

    /// `self·G` where `G` is `local` embedded on `sites`.
    pub fn apply_local_right(&self, local: &DenseOperator, sites: &[usize], cfg: &LatticeConfig) -> Result<Self> {
        let layout = SiteLayout::new(local, sites, cfg, self.dim())?;
        let lm = local.matrix();
        let mut out = DMatrix::<Complex64>::zeros(self.dim(), self.dim());
        for &base in &layout.bases {
            for (a, &off_a) in layout.offsets.iter().enumerate() {
                let mut dst = out.column_mut(base + off_a);
                for (b, &off_b) in layout.offsets.iter().enumerate() {
                    let coeff = lm[(b, a)];
                    if coeff == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    dst.axpy(coeff, &self.matrix.column(base + off_b), Complex64::new(1.0, 0.0));
                }
            }
        }
        Ok(Self {
            matrix: out,
            label: None,
            unitary: self.unitary && local.unitary,
            hermitian: false,
        })
    }
}

impl Mul<&DenseOperator> for &DenseOperator {
    type Output = DenseOperator;

    /// Panics on a dimension mismatch; use [`DenseOperator::compose`] to get an error instead.
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        self.compose(rhs).expect("operator dimensions differ")
    }
}

fn same_dim(a: &DenseOperator, b: &DenseOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("dimensions {} and {} differ", a.dim(), b.dim())));
    }
    Ok(())
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Index bookkeeping for an operator acting on a subset of sites.
///
/// `offsets[m]` is the contribution of local basis index `m` (big-endian over
/// the listed sites, in listed order); `bases` are the global indices whose
/// digits on the listed sites are all zero.
pub(crate) struct SiteLayout {
    pub offsets: Vec<usize>,
    pub bases: Vec<usize>,
}

impl SiteLayout {
    pub fn for_sites(sites: &[usize], cfg: &LatticeConfig) -> Result<Self> {
        for (k, &s) in sites.iter().enumerate() {
            cfg.check_site(s)?;
            if sites[..k].contains(&s) {
                return Err(Error::Config(format!("site {s} listed twice")));
            }
        }
        let d = cfg.local_dim();
        let block = d.pow(sites.len() as u32);
        let offsets = (0..block)
            .map(|m| {
                let mut rem = m;
                let mut off = 0;
                for &s in sites.iter().rev() {
                    off += (rem % d) * cfg.stride(s);
                    rem /= d;
                }
                off
            })
            .collect();
        let bases = (0..cfg.dim())
            .filter(|&idx| sites.iter().all(|&s| cfg.digit(idx, s) == 0))
            .collect();
        Ok(Self { offsets, bases })
    }

    fn new(local: &DenseOperator, sites: &[usize], cfg: &LatticeConfig, dim: usize) -> Result<Self> {
        if dim != cfg.dim() {
            return Err(Error::Dimension(format!(
                "operator of dimension {dim} on a register of dimension {}",
                cfg.dim()
            )));
        }
        let expected = checked_dim(cfg.local_dim(), sites.len())?;
        if local.dim() != expected {
            return Err(Error::Dimension(format!(
                "local operator of dimension {} on {} sites of dimension {}",
                local.dim(),
                sites.len(),
                cfg.local_dim()
            )));
        }
        Self::for_sites(sites, cfg)
    }
}

/// Tensor product `a ⊗ b`, with `a` on the most significant sites.
pub fn kron(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    check_capacity(a.dim() as u128 * b.dim() as u128)?;
    Ok(DenseOperator {
        matrix: a.matrix.kronecker(&b.matrix),
        label: match (&a.label, &b.label) {
            (Some(x), Some(y)) => Some(format!("{x}⊗{y}")),
            _ => None,
        },
        unitary: a.unitary && b.unitary,
        hermitian: a.hermitian && b.hermitian,
    })
}

/// `op` acting on `sites` (in listed order) and identity elsewhere.
pub fn embed_at_sites(op: &DenseOperator, sites: &[usize], cfg: &LatticeConfig) -> Result<DenseOperator> {
    let layout = SiteLayout::new(op, sites, cfg, cfg.dim())?;
    let n = cfg.dim();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for &base in &layout.bases {
        for (a, &oa) in layout.offsets.iter().enumerate() {
            for (b, &ob) in layout.offsets.iter().enumerate() {
                out[(base + oa, base + ob)] = op.matrix[(a, b)];
            }
        }
    }
    Ok(DenseOperator {
        matrix: out,
        label: op.label.as_ref().map(|l| format!("{l}@{sites:?}")),
        unitary: op.unitary,
        hermitian: op.hermitian,
    })
}

/// `(A + A†)/2`.
pub fn hermitian_part(a: &DenseOperator) -> DenseOperator {
    let m = (&a.matrix + a.matrix.adjoint()) * Complex64::new(0.5, 0.0);
    DenseOperator { matrix: m, label: None, unitary: false, hermitian: true }
}

/// `AB − BA`.
pub fn commutator(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    same_dim(a, b)?;
    Ok(DenseOperator {
        matrix: &a.matrix * &b.matrix - &b.matrix * &a.matrix,
        label: None,
        unitary: false,
        hermitian: false,
    })
}

/// Relabels sites: content on site `s` of the input ends up on site `perm[s]`.
pub fn permute_sites(op: &DenseOperator, perm: &[usize], cfg: &LatticeConfig) -> Result<DenseOperator> {
    let map = site_permutation_map(perm, cfg)?;
    if op.dim() != cfg.dim() {
        return Err(Error::Dimension(format!("operator dim {} vs register dim {}", op.dim(), cfg.dim())));
    }
    let n = cfg.dim();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for c in 0..n {
        for r in 0..n {
            out[(map[r], map[c])] = op.matrix[(r, c)];
        }
    }
    Ok(DenseOperator { matrix: out, label: op.label.clone(), unitary: op.unitary, hermitian: op.hermitian })
}

/// Same relabelling as [`permute_sites`] for a state vector.
pub fn permute_state(state: &DVector<Complex64>, perm: &[usize], cfg: &LatticeConfig) -> Result<DVector<Complex64>> {
    let map = site_permutation_map(perm, cfg)?;
    if state.len() != cfg.dim() {
        return Err(Error::Dimension(format!("state length {} vs register dim {}", state.len(), cfg.dim())));
    }
    let mut out = DVector::zeros(state.len());
    for (idx, &target) in map.iter().enumerate() {
        out[target] = state[idx];
    }
    Ok(out)
}

fn site_permutation_map(perm: &[usize], cfg: &LatticeConfig) -> Result<Vec<usize>> {
    let l = cfg.sites();
    let mut seen = vec![false; l];
    if perm.len() != l {
        return Err(Error::Config(format!("permutation of length {} for {l} sites", perm.len())));
    }
    for &p in perm {
        cfg.check_site(p)?;
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::Config(format!("site {p} appears twice in permutation")));
        }
    }
    Ok((0..cfg.dim())
        .map(|idx| (0..l).map(|s| cfg.digit(idx, s) * cfg.stride(perm[s])).sum())
        .collect())
}
