//! Weighted Hardy inequality on ℤ⁺ for `1 < α ≤ 2`, reduced to the
//! continuum inequality on (0, ∞) through the linear interpolant.

use serde::{Deserialize, Serialize};

use crate::decreasing::{decreasing_rearrangement, weighted_ps_pair};
use crate::error::{Error, Result};
use crate::report::{Pair, PropertyReport};
use crate::sequence::HalfLineSequence;
use crate::weight::Weight;

/// Continuous, piecewise linear on each `[n−1, n]`, agreeing with the
/// generating sequence at the integers and zero past its support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinearFunction {
    values: Vec<f64>,
}

impl PiecewiseLinearFunction {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn at(&self, n: usize) -> f64 {
        self.values.get(n).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !(x >= 0.0) {
            return self.at(0);
        }
        let n = x.ceil() as usize;
        if n == 0 {
            return self.at(0);
        }
        self.at(n) + (x - n as f64) * (self.at(n) - self.at(n - 1))
    }

    /// Slope on `[n−1, n]`.
    pub fn slope(&self, n: usize) -> f64 {
        self.at(n) - self.at(n - 1)
    }

    /// Number of unit intervals where the function can be nonzero.
    pub fn intervals(&self) -> usize {
        self.values.len()
    }
}

/// Moduli are taken for complex input.
pub fn linear_interpolation(u: &HalfLineSequence) -> PiecewiseLinearFunction {
    PiecewiseLinearFunction {
        values: u
            .values()
            .iter()
            .map(|z| if z.im == 0.0 { z.re } else { z.norm() })
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMode {
    /// `∫ f² x^β`
    Function,
    /// `∫ (f')² x^β`
    Derivative,
}

/// `∫₀¹ t^k (a + t)^β dt` for `k = 0, 1, 2`.
///
/// For `a ≤ 4` this expands into antiderivatives of powers of `x`; further out
/// that expansion cancels badly, so the binomial series in `t/a ≤ 1/4` is
/// summed instead.
fn local_moments(a: f64, beta: f64) -> [f64; 3] {
    if a == 0.0 {
        return [0, 1, 2].map(|k| 1.0 / (beta + k as f64 + 1.0));
    }
    if a <= 4.0 {
        let b = a + 1.0;
        let p = |e: f64| (b.powf(e) - a.powf(e)) / e;
        let (p1, p2, p3) = (p(beta + 1.0), p(beta + 2.0), p(beta + 3.0));
        return [p1, p2 - a * p1, p3 - 2.0 * a * p2 + a * a * p1];
    }
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut coeff = 1.0;
        let mut sum = 0.0;
        for m in 0..400 {
            let term = coeff / (k + m + 1) as f64;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() && m as f64 > beta {
                break;
            }
            coeff *= (beta - m as f64) / ((m + 1) as f64 * a);
        }
        *slot = a.powf(beta) * sum;
    }
    out
}

/// `∫₀^∞ f(x)² x^β dx` or `∫₀^∞ f'(x)² x^β dx`, exact per interval.
pub fn weighted_moment_integral(
    f: &PiecewiseLinearFunction,
    beta: f64,
    mode: MomentMode,
) -> Result<f64> {
    if !(beta > -1.0) {
        match mode {
            MomentMode::Function => return Err(Error::NonIntegrableExponent(beta)),
            MomentMode::Derivative if f.slope(1) != 0.0 => return Ok(f64::INFINITY),
            MomentMode::Derivative => {}
        }
    }
    let mut total = 0.0;
    for n in 1..=f.intervals() {
        let (y0, y1) = (f.at(n - 1), f.at(n));
        let a = (n - 1) as f64;
        if mode == MomentMode::Derivative && y0 == y1 {
            continue;
        }
        if mode == MomentMode::Function && y0 == 0.0 && y1 == 0.0 {
            continue;
        }
        let [j0, j1, j2] = local_moments(a, beta);
        total += match mode {
            MomentMode::Function => {
                y0 * y0 * (j0 - 2.0 * j1 + j2) + 2.0 * y0 * y1 * (j1 - j2) + y1 * y1 * j2
            }
            MomentMode::Derivative => (y1 - y0).powi(2) * j0,
        };
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardyPair {
    /// `Σ_{n≥1} |u(n) − u(n−1)|² n^α`.
    pub lhs: f64,
    /// `Σ_{n≥1} |u(n)|² n^{α−2}`.
    pub mass: f64,
    /// `lhs / mass`, infinite when the mass vanishes.
    pub ratio: f64,
}

/// `(α − 1)²/4`.
pub fn hardy_constant(alpha: f64) -> f64 {
    (alpha - 1.0).powi(2) / 4.0
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(())
}

fn check_max_at_origin(u: &HalfLineSequence) -> Result<()> {
    let origin = u.get(0).norm();
    let max = u.moduli_max();
    if origin < max {
        return Err(Error::MaxNotAtOrigin { origin, max });
    }
    Ok(())
}

impl HalfLineSequence {
    fn moduli_max(&self) -> f64 {
        self.values().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn power_difference_energy(u: &HalfLineSequence, alpha: f64) -> f64 {
    (1..=u.len())
        .map(|n| (u.get(n) - u.get(n - 1)).norm_sqr() * (n as f64).powf(alpha))
        .sum()
}

fn power_mass(u: &HalfLineSequence, alpha: f64) -> f64 {
    (1..u.len())
        .map(|n| u.get(n).norm_sqr() * (n as f64).powf(alpha - 2.0))
        .sum()
}

pub fn hardy_pair(u: &HalfLineSequence, alpha: f64) -> Result<HardyPair> {
    check_alpha(alpha)?;
    check_max_at_origin(u)?;
    let lhs = power_difference_energy(u, alpha);
    let mass = power_mass(u, alpha);
    let ratio = if mass > 0.0 {
        lhs / mass
    } else {
        f64::INFINITY
    };
    Ok(HardyPair { lhs, mass, ratio })
}

/// Tolerance on every link of the chain.
pub const CHAIN_TOL: f64 = 1e-12;

/// Each step from the discrete inequality for `u` down to the continuum
/// inequality for the interpolant of `ũ`, plus the inequality itself.
///
/// With `pre_rearrange` the input is replaced by `ũ` first, so the
/// max-at-origin hypothesis is met by construction.
pub fn hardy_chain_report(
    u: &HalfLineSequence,
    alpha: f64,
    pre_rearrange: bool,
) -> Result<Vec<PropertyReport>> {
    check_alpha(alpha)?;
    let u = if pre_rearrange {
        decreasing_rearrangement(u)
    } else {
        check_max_at_origin(u)?;
        u.clone()
    };
    let sorted = decreasing_rearrangement(&u);
    let len = u.len();

    let hl_weight = Weight::power_with_origin(alpha - 2.0, 1.0);
    let weighted_mass = |s: &HalfLineSequence| -> f64 {
        (0..s.len())
            .map(|n| s.get(n).norm_sqr() * hl_weight.eval(n))
            .sum()
    };
    let link_a = Pair::at_most(weighted_mass(&u), weighted_mass(&sorted));

    let shifted = Weight::table((0..len + 2).map(|n| ((n + 1) as f64).powf(alpha)).collect())?;
    let link_b = weighted_ps_pair(&u, &shifted, 2.0)?;

    let interp = linear_interpolation(&sorted);
    let fn_integral = weighted_moment_integral(&interp, alpha - 2.0, MomentMode::Function)?;
    let der_integral = weighted_moment_integral(&interp, alpha, MomentMode::Derivative)?;
    let link_c = Pair::at_most(power_mass(&sorted, alpha), fn_integral);
    let link_d = Pair::at_least(power_difference_energy(&sorted, alpha), der_integral);
    let link_e = Pair::at_least(der_integral, hardy_constant(alpha) * fn_integral);

    let hp = hardy_pair(&u, alpha)?;
    let ratio_bound = Pair::at_least(hp.lhs, hardy_constant(alpha) * hp.mass);

    Ok(vec![
        PropertyReport::from_pair("hardy-chain-hardy-littlewood", link_a, CHAIN_TOL),
        PropertyReport::from_pair("hardy-chain-polya-szego", link_b, CHAIN_TOL),
        PropertyReport::from_pair("hardy-chain-sum-vs-integral", link_c, CHAIN_TOL),
        PropertyReport::from_pair("hardy-chain-difference-vs-derivative", link_d, CHAIN_TOL),
        PropertyReport::from_pair("hardy-chain-continuum", link_e, CHAIN_TOL),
        PropertyReport::from_pair("hardy-ratio", ratio_bound, CHAIN_TOL),
    ])
}
