use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

/// Largest total Hilbert-space dimension accepted by default (12 qubits).
pub const DEFAULT_MAX_DIM: usize = 4096;

static MAX_DIM: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DIM);

/// Current cap on the total dimension of any dense operator.
pub fn max_dim() -> usize {
    MAX_DIM.load(Ordering::Relaxed)
}

/// Override the dimension cap for the whole process.
pub fn set_max_dim(cap: usize) {
    MAX_DIM.store(cap.max(1), Ordering::Relaxed);
}

pub(crate) fn check_capacity(requested: u128) -> Result<()> {
    let cap = max_dim();
    if requested > cap as u128 {
        return Err(Error::Capacity { requested, cap });
    }
    Ok(())
}

/// `base^exp` with overflow reported as a capacity error.
pub(crate) fn checked_dim(base: usize, exp: usize) -> Result<usize> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc > u64::MAX as u128 {
            break;
        }
    }
    check_capacity(acc)?;
    Ok(acc as usize)
}

/// A 1-D chain of `sites` qudits of local dimension `local_dim`, with a
/// designated initial site and final site.
///
/// Basis states are indexed big-endian: site 0 is the most significant digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeConfig {
    sites: usize,
    local_dim: usize,
    initial: usize,
    target: usize,
}

impl LatticeConfig {
    pub fn new(sites: usize, local_dim: usize, initial: usize, target: usize) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::Config(format!("local dimension must be >= 2, got {local_dim}")));
        }
        if sites < 2 {
            return Err(Error::Config(format!("need at least 2 sites, got {sites}")));
        }
        for site in [initial, target] {
            if site >= sites {
                return Err(Error::SiteOutOfRange { site, sites });
            }
        }
        if initial == target {
            return Err(Error::Config("initial and final site must differ".into()));
        }
        checked_dim(local_dim, sites)?;
        Ok(Self { sites, local_dim, initial, target })
    }

    /// Qubit chain transferring from site 0 to site `sites - 1`.
    pub fn qubit_chain(sites: usize) -> Result<Self> {
        Self::chain(sites, 2)
    }

    /// Chain of local dimension `local_dim` transferring end to end.
    pub fn chain(sites: usize, local_dim: usize) -> Result<Self> {
        Self::new(sites, local_dim, 0, sites.saturating_sub(1))
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Total dimension `D^L`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.sites as u32)
    }

    /// Dimension of the ancilla register (every site except the initial one).
    pub fn ancilla_dim(&self) -> usize {
        self.local_dim.pow(self.sites as u32 - 1)
    }

    /// Ancilla sites in ascending order; this is the tensor order of ancilla vectors.
    pub fn ancilla_sites(&self) -> Vec<usize> {
        (0..self.sites).filter(|&s| s != self.initial).collect()
    }

    /// Sites other than the initial and final one, ascending.
    pub fn middle_sites(&self) -> Vec<usize> {
        (0..self.sites)
            .filter(|&s| s != self.initial && s != self.target)
            .collect()
    }

    /// Chain distance between two sites.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        a.abs_diff(b)
    }

    /// Distance between the initial and final site.
    pub fn separation(&self) -> usize {
        self.distance(self.initial, self.target)
    }

    /// Place value of `site` in a basis index.
    pub fn stride(&self, site: usize) -> usize {
        self.local_dim.pow((self.sites - 1 - site) as u32)
    }

    /// Digit of `site` in basis index `index`.
    pub fn digit(&self, index: usize, site: usize) -> usize {
        (index / self.stride(site)) % self.local_dim
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.sites {
            return Err(Error::SiteOutOfRange { site, sites: self.sites });
        }
        Ok(())
    }
}
