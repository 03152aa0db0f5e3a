use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight `w : ℤ⁺ → [0, ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Weight {
    /// `w(n) = n^alpha` for `n ≥ 1`; `w(0) = at_zero`, defaulting to `0^alpha`
    /// (so 1 when `alpha == 0`).
    Power {
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at_zero: Option<f64>,
    },
    /// Explicit values; the last entry extends to all larger `n`.
    Table { values: Vec<f64> },
}

impl Weight {
    pub fn unit() -> Self {
        Weight::Power {
            alpha: 0.0,
            at_zero: None,
        }
    }

    pub fn power(alpha: f64) -> Self {
        Weight::Power {
            alpha,
            at_zero: None,
        }
    }

    pub fn power_with_origin(alpha: f64, at_zero: f64) -> Self {
        Weight::Power {
            alpha,
            at_zero: Some(at_zero),
        }
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v >= 0.0 && v.is_finite()))
        {
            return Err(Error::NegativeWeight { index, value });
        }
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty weight table".into()));
        }
        Ok(Weight::Table { values })
    }

    pub fn eval(&self, n: usize) -> f64 {
        match self {
            Weight::Power { alpha, at_zero } => {
                if n == 0 {
                    at_zero.unwrap_or(if *alpha == 0.0 { 1.0 } else { 0.0 })
                } else {
                    (n as f64).powf(*alpha)
                }
            }
            Weight::Table { values } => values[n.min(values.len() - 1)],
        }
    }

    /// Checks `w ≥ 0` and `w(n) ≤ w(n+1)` for `n < upto`; past a table's end
    /// the weight is constant, so only the stored prefix matters there.
    pub fn check_nondecreasing(&self, upto: usize) -> Result<()> {
        let upto = match self {
            Weight::Table { values } => upto.min(values.len()),
            Weight::Power { alpha, .. } if *alpha >= 0.0 => upto.min(2),
            Weight::Power { .. } => upto,
        };
        for n in 0..=upto {
            let w = self.eval(n);
            if !(w >= 0.0) {
                return Err(Error::NegativeWeight { index: n, value: w });
            }
            if self.eval(n + 1) < w {
                return Err(Error::NonMonotoneWeight(n));
            }
        }
        Ok(())
    }

    pub fn check_positive(&self, upto: usize) -> Result<()> {
        match (0..=upto).find(|&n| !(self.eval(n) > 0.0)) {
            Some(n) => Err(Error::ZeroWeight(n)),
            None => Ok(()),
        }
    }
}
