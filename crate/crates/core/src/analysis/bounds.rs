use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::tensor::SchattenP;

/// Which form of the robustness–norm bound to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundVariant {
    Qubit,
    QuditEven,
    QuditOdd,
    /// Protocol using a workspace register of dimension `reg_dim`.
    Channel { reg_dim: f64 },
    /// Channel protocol with intermediate measurements of `outcomes[k]` outcomes each.
    Measurement { reg_dim: f64, outcomes: Vec<u64> },
}

impl BoundVariant {
    /// Qubit form for `D = 2`, otherwise the qudit form matching the parity of `D`.
    pub fn for_local_dim(local_dim: usize) -> Self {
        match local_dim {
            2 => BoundVariant::Qubit,
            d if d % 2 == 0 => BoundVariant::QuditEven,
            _ => BoundVariant::QuditOdd,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundVariant::Qubit => "qubit",
            BoundVariant::QuditEven => "qudit-even",
            BoundVariant::QuditOdd => "qudit-odd",
            BoundVariant::Channel { .. } => "channel",
            BoundVariant::Measurement { .. } => "measurement",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundQuery {
    pub sites: usize,
    /// `|𝒮|`; real so that `2^k` for large `k` stays representable.
    pub dim_s: f64,
    pub p: SchattenP,
    pub local_dim: usize,
    pub variant: BoundVariant,
}

impl BoundQuery {
    pub fn qubit(sites: usize, dim_s: f64, p: SchattenP) -> Self {
        Self { sites, dim_s, p, local_dim: 2, variant: BoundVariant::Qubit }
    }

    pub fn with_variant(mut self, variant: BoundVariant) -> Self {
        self.variant = variant;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::Domain(format!("need L >= 2, got {}", self.sites)));
        }
        if self.local_dim < 2 {
            return Err(Error::Domain(format!("need D >= 2, got {}", self.local_dim)));
        }
        let max_ln = (self.sites - 1) as f64 * (self.local_dim as f64).ln();
        if !(self.dim_s >= 1.0) || self.dim_s.ln() > max_ln + 1e-12 {
            return Err(Error::Domain(format!(
                "|𝒮| = {} outside [1, D^(L-1)] for L = {}, D = {}",
                self.dim_s, self.sites, self.local_dim
            )));
        }
        let need_qubit = || {
            if self.local_dim != 2 {
                return Err(Error::Domain(format!("{} bound is a qubit bound, got D = {}", self.variant.name(), self.local_dim)));
            }
            Ok(())
        };
        match &self.variant {
            BoundVariant::Qubit => need_qubit()?,
            BoundVariant::QuditEven if self.local_dim % 2 != 0 => {
                return Err(Error::Domain(format!("even-D bound with D = {}", self.local_dim)));
            }
            BoundVariant::QuditOdd if self.local_dim % 2 == 0 => {
                return Err(Error::Domain(format!("odd-D bound with D = {}", self.local_dim)));
            }
            BoundVariant::Channel { reg_dim } => {
                need_qubit()?;
                check_reg(*reg_dim)?;
            }
            BoundVariant::Measurement { reg_dim, outcomes } => {
                need_qubit()?;
                check_reg(*reg_dim)?;
                if let Some(m) = outcomes.iter().find(|&&m| m < 2) {
                    return Err(Error::Domain(format!("measurement outcome count {m} < 2")));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn check_reg(reg_dim: f64) -> Result<()> {
    if !(reg_dim >= 1.0) {
        return Err(Error::Domain(format!("register dimension {reg_dim} < 1")));
    }
    Ok(())
}

/// The bound split into the base form and the extra factors, for auditing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundFactors {
    /// Qubit or qudit form without register or measurement factors.
    pub base: f64,
    /// `|H_reg|^{−1/p}`, one when absent.
    pub register: f64,
    /// `∏ m_i^{1/p}`, one when absent.
    pub measurement: f64,
    pub value: f64,
}

/// Evaluates the lower bound on `‖[U†X_fU, Z_i]‖_p`, in the log domain.
pub fn theorem1_factors(q: &BoundQuery) -> Result<BoundFactors> {
    q.validate()?;
    let inv_p = q.p.inverse();
    let l = q.sites as f64;
    let ln_d = (q.local_dim as f64).ln();
    let ln_s = q.dim_s.ln();
    let ln_base = match q.variant {
        BoundVariant::QuditEven => (1.0 - l) * ln_d + ln_s,
        BoundVariant::QuditOdd => ((q.local_dim - 1) as f64).ln() - l * ln_d + ln_s,
        _ => (1.0 - l) * LN_2 + ln_s,
    };
    let (ln_reg, ln_meas) = match &q.variant {
        BoundVariant::Channel { reg_dim } => (-reg_dim.ln(), 0.0),
        BoundVariant::Measurement { reg_dim, outcomes } => {
            (-reg_dim.ln(), outcomes.iter().map(|&m| (m as f64).ln()).sum())
        }
        _ => (0.0, 0.0),
    };
    let base = 2.0 * (inv_p * ln_base).exp();
    let register = (inv_p * ln_reg).exp();
    let measurement = (inv_p * ln_meas).exp();
    let value = 2.0 * (inv_p * (ln_base + ln_reg + ln_meas)).exp();
    Ok(BoundFactors { base, register, measurement, value })
}

pub fn theorem1_bound(q: &BoundQuery) -> Result<f64> {
    Ok(theorem1_factors(q)?.value)
}
