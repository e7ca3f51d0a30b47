use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::operator::DenseOperator;
use crate::error::{Error, Result};

/// Entry tolerance for routing an operator through the anti-Hermitian path.
pub const ANTI_HERMITIAN_TOL: f64 = 1e-10;

/// Schatten exponent: a finite real `>= 1` or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchattenP {
    Finite(f64),
    Infinity,
}

impl SchattenP {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Domain(format!("Schatten exponent must be >= 1, got {p}")));
        }
        if p.is_infinite() {
            return Ok(SchattenP::Infinity);
        }
        Ok(SchattenP::Finite(p))
    }

    /// `1/p`, zero at infinity.
    pub fn inverse(&self) -> f64 {
        match self {
            SchattenP::Finite(p) => 1.0 / p,
            SchattenP::Infinity => 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            SchattenP::Finite(p) => *p,
            SchattenP::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SchattenP::Infinity)
    }
}

impl fmt::Display for SchattenP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchattenP::Finite(p) => write!(f, "{p}"),
            SchattenP::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for SchattenP {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "infinity" | "∞" => Ok(SchattenP::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::Domain(format!("cannot parse Schatten exponent {other:?}")))?;
                SchattenP::finite(p)
            }
        }
    }
}

/// Singular values of `a`, sorted descending.
///
/// Anti-Hermitian inputs go through the Hermitian eigensolver applied to `iA`
/// (singular values are the absolute eigenvalues); everything else uses an SVD.
pub fn singular_values(a: &DenseOperator) -> Vec<f64> {
    let mut sv: Vec<f64> = if a.anti_hermiticity_deviation() <= ANTI_HERMITIAN_TOL {
        let ia = a.matrix() * Complex64::new(0.0, 1.0);
        let herm = (&ia + ia.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().map(|v| v.abs()).collect()
    } else {
        a.matrix().clone().singular_values().iter().copied().collect()
    };
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Renormalized Schatten norm `|H|^(-1/p) (Σ σ^p)^(1/p)` from precomputed singular values.
pub fn schatten_from_singular_values(sv: &[f64], dim: usize, p: SchattenP) -> f64 {
    let max = sv.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    match p {
        SchattenP::Infinity => max,
        SchattenP::Finite(_) if max == 0.0 => 0.0,
        SchattenP::Finite(p) => {
            // factor out the largest value so σ^p stays representable
            let sum: f64 = sv.iter().map(|s| (s.abs() / max).powf(p)).sum();
            max * (sum / dim as f64).powf(1.0 / p)
        }
    }
}

/// Renormalized Schatten p-norm; `‖I‖_p = 1` for every `p`.
pub fn schatten_p_norm(a: &DenseOperator, p: SchattenP) -> f64 {
    schatten_from_singular_values(&singular_values(a), a.dim(), p)
}
