use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{checked_dim, DenseOperator};

/// Residual norm below which a vector is considered dependent on the span so far.
pub const SPAN_DROP_TOL: f64 = 1e-8;

/// Orthonormal basis of a subspace of an ancilla register.
///
/// An empty register has ambient dimension 1 (the scalars); an empty basis is
/// the zero subspace.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<DVector<Complex64>>,
}

impl SubspaceBasis {
    /// Wraps vectors that are already orthonormal; rejects a Gram deviation above `1e-10`.
    pub fn from_orthonormal(ambient_dim: usize, vectors: Vec<DVector<Complex64>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::Dimension(format!("vector of length {} in ambient dimension {ambient_dim}", v.len())));
        }
        let basis = Self { ambient_dim, vectors };
        let dev = basis.gram_deviation();
        if dev > 1e-10 {
            return Err(Error::Numerical(format!("basis is not orthonormal (Gram deviation {dev:.3e})")));
        }
        Ok(basis)
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, vectors: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// `|𝒮|`.
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[DVector<Complex64>] {
        &self.vectors
    }

    /// Columns are the basis vectors.
    pub fn as_matrix(&self) -> DMatrix<Complex64> {
        if self.vectors.is_empty() {
            return DMatrix::zeros(self.ambient_dim, 0);
        }
        DMatrix::from_columns(&self.vectors)
    }

    pub fn projector(&self) -> DenseOperator {
        let b = self.as_matrix();
        DenseOperator::new_hermitian(&b * b.adjoint()).expect("B B† is Hermitian")
    }

    /// `Σ |v⟩⟨v| / |𝒮|`, the uniform mixture over the basis.
    pub fn uniform_mixture(&self) -> Result<DMatrix<Complex64>> {
        if self.vectors.is_empty() {
            return Err(Error::Config("uniform mixture over an empty subspace".into()));
        }
        let b = self.as_matrix();
        Ok(&b * b.adjoint() / Complex64::new(self.dim() as f64, 0.0))
    }

    /// Max entry of `|B†B − I|`.
    pub fn gram_deviation(&self) -> f64 {
        let b = self.as_matrix();
        let gram = b.adjoint() * &b - DMatrix::<Complex64>::identity(self.dim(), self.dim());
        gram.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn residual(&self, v: &DVector<Complex64>) -> f64 {
        let mut r = v.clone();
        for b in &self.vectors {
            let c = b.dotc(&r);
            r -= b * c;
        }
        r.norm()
    }

    /// `𝒮 ⊗ 𝒯` with `self` on the more significant sites.
    pub fn tensor(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        let ambient = self.ambient_dim * other.ambient_dim;
        crate::tensor::checked_dim(ambient, 1)?;
        let vectors = self
            .vectors
            .iter()
            .flat_map(|a| other.vectors.iter().map(move |b| a.kronecker(b)))
            .collect();
        Ok(SubspaceBasis { ambient_dim: ambient, vectors })
    }
}

fn basis_vector(dim: usize, k: usize) -> DVector<Complex64> {
    let mut v = DVector::zeros(dim);
    v[k] = Complex64::new(1.0, 0.0);
    v
}

/// `{|0…0⟩}` on `n_sites` qudits.
pub fn projector_all_zero(n_sites: usize, local_dim: usize) -> Result<SubspaceBasis> {
    let dim = register_dim(n_sites, local_dim)?;
    Ok(SubspaceBasis { ambient_dim: dim, vectors: vec![basis_vector(dim, 0)] })
}

/// The computational basis of the whole register.
pub fn projector_full(n_sites: usize, local_dim: usize) -> Result<SubspaceBasis> {
    let dim = register_dim(n_sites, local_dim)?;
    Ok(SubspaceBasis { ambient_dim: dim, vectors: (0..dim).map(|k| basis_vector(dim, k)).collect() })
}

fn register_dim(n_sites: usize, local_dim: usize) -> Result<usize> {
    if local_dim < 2 {
        return Err(Error::Domain(format!("local dimension must be >= 2, got {local_dim}")));
    }
    checked_dim(local_dim, n_sites)
}

/// The four 3-qubit Dicke states `|D_w⟩`, `w` = number of excitations.
pub fn dicke_states_3() -> [DVector<Complex64>; 4] {
    let s3 = 1.0 / 3.0_f64.sqrt();
    let mut out: [DVector<Complex64>; 4] = std::array::from_fn(|_| DVector::zeros(8));
    for idx in 0..8usize {
        let w = idx.count_ones() as usize;
        out[w][idx] = Complex64::new(if w == 0 || w == 3 { 1.0 } else { s3 }, 0.0);
    }
    out
}

/// Span of products of per-group symmetric states, groups of 3 consecutive qubits.
pub fn projector_symmetric_groups(n_sites: usize) -> Result<SubspaceBasis> {
    if n_sites == 0 || n_sites % 3 != 0 {
        return Err(Error::Config(format!("site count {n_sites} is not a positive multiple of 3")));
    }
    checked_dim(2, n_sites)?;
    let group = SubspaceBasis { ambient_dim: 8, vectors: dicke_states_3().to_vec() };
    let mut acc = group.clone();
    for _ in 1..n_sites / 3 {
        acc = acc.tensor(&group)?;
    }
    Ok(acc)
}

/// Gram–Schmidt orthonormalization of `vectors`, dropping near-dependent ones.
pub fn projector_span(vectors: &[DVector<Complex64>]) -> Result<SubspaceBasis> {
    let first = vectors.first().ok_or_else(|| Error::Config("empty vector list".into()))?;
    let ambient = first.len();
    let mut basis = SubspaceBasis::empty(ambient);
    for v in vectors {
        if v.len() != ambient {
            return Err(Error::Dimension(format!("vector lengths {} and {ambient} differ", v.len())));
        }
        // two passes keep the result orthogonal to working precision
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis.vectors {
                let c = b.dotc(&r);
                r -= b * c;
            }
        }
        let norm = r.norm();
        if norm >= SPAN_DROP_TOL {
            basis.vectors.push(r / Complex64::new(norm, 0.0));
        }
    }
    if basis.vectors.is_empty() {
        return Err(Error::Config("all input vectors vanish".into()));
    }
    Ok(basis)
}
