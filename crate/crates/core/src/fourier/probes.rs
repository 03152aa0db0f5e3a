//! Set rearrangement, the concentration ratio, convexity constants, the
//! Fejér kernel check and the two explicit series attached to the two-point
//! example `u(0) = u(1) = β`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{fourier_rearrange, FourierParams, FourierRearrangement};
use crate::error::{Error, Result};
use crate::sequence::{lp_sum, FiniteSupport, LatticeSequence};

/// First `|E|` integers in the order `0, 1, −1, 2, −2, …`.
pub fn set_rearrangement(e: &BTreeSet<i64>) -> BTreeSet<i64> {
    (0..e.len() as i64)
        .map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRatio {
    pub lhs: f64,
    pub rhs_unscaled: f64,
    pub ratio: f64,
}

/// `Σ_{E} |u|²` over `Σ_{E*} |u^#|²`.
pub fn concentration_ratio(
    u: &LatticeSequence,
    e: &BTreeSet<i64>,
    params: &FourierParams,
) -> Result<ConcentrationRatio> {
    let r = fourier_rearrange(u, params)?;
    concentration_ratio_with(u, &r, e, params.n_max)
}

pub fn concentration_ratio_with(
    u: &LatticeSequence,
    r: &FourierRearrangement,
    e: &BTreeSet<i64>,
    n_max: usize,
) -> Result<ConcentrationRatio> {
    if e.is_empty() {
        return Err(Error::InvalidParameter("E must be nonempty".into()));
    }
    if e.len() > 2 * n_max + 1 {
        return Err(Error::InvalidParameter(format!(
            "|E| = {} exceeds the stored window",
            e.len()
        )));
    }
    let lhs = e.iter().map(|&n| u.get(n).norm_sqr()).sum();
    let rhs_unscaled: f64 = set_rearrangement(e).iter().map(|&n| r.get(n).powi(2)).sum();
    if rhs_unscaled < 1e-300 {
        return Err(Error::Degenerate("Σ over E* of |u^#|² underflows"));
    }
    Ok(ConcentrationRatio {
        lhs,
        rhs_unscaled,
        ratio: lhs / rhs_unscaled,
    })
}

/// Smallest `c > 0` with `Σ φ(a) ≤ Σ φ(c·b)`, by bisection.
///
/// `φ` must be nondecreasing with `φ(0) = 0`, and `b` must have a positive
/// entry so the right side grows without bound in `c`.
pub fn minimal_convex_constant(a: &[f64], b: &[f64], phi: impl Fn(f64) -> f64) -> Result<f64> {
    let target: f64 = a.iter().map(|&x| phi(x)).sum();
    let rhs = |c: f64| b.iter().map(|&x| phi(c * x)).sum::<f64>();
    if target == 0.0 {
        return Ok(0.0);
    }
    if !b.iter().any(|&x| x > 0.0) {
        return Err(Error::Degenerate("rearranged side vanishes"));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while rhs(hi) < target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Degenerate("no finite constant"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rhs(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Minimal `c` in `Σ |u|^p ≤ Σ (c|u^#|²)^{p/2}`, i.e.
/// `(Σ|u|^p / Σ|u^#|^p)^{2/p}`.
pub fn convex_lp_minimal_constant(
    u: &LatticeSequence,
    p: f64,
    params: &FourierParams,
) -> Result<f64> {
    let r = fourier_rearrange(u, params)?;
    convex_lp_minimal_constant_with(u, &r, p)
}

pub fn convex_lp_minimal_constant_with(
    u: &LatticeSequence,
    r: &FourierRearrangement,
    p: f64,
) -> Result<f64> {
    if !(p > 2.0) {
        return Err(Error::ExponentNotAboveTwo(p));
    }
    if u.is_zero() {
        return Err(Error::Degenerate("zero input"));
    }
    let num = lp_sum(u, p);
    let den = lp_sum(&r.sequence, p);
    if !(den > 1e-300) {
        return Err(Error::Degenerate("Σ |u^#|^p underflows"));
    }
    Ok((num / den).powf(2.0 / p))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FejerCheck {
    /// `Σ_{|n|<R} (1 − |n|/R) e^{−inx}`.
    pub direct: f64,
    /// `(1/R) sin²(Rx/2) / sin²(x/2)`.
    pub closed_form: f64,
    /// `4R/π²`.
    pub lower_bound: f64,
    /// `|x| ≤ π/R`, where the closed form must dominate the bound.
    pub in_window: bool,
}

pub fn fejer_kernel_transform_check(r: u32, x: f64) -> Result<FejerCheck> {
    if r == 0 {
        return Err(Error::InvalidParameter("R must be positive".into()));
    }
    if x == 0.0 || !(x.abs() < PI) {
        return Err(Error::InvalidParameter(format!(
            "x = {x} must lie in (−π, π) \\ {{0}}"
        )));
    }
    let rf = r as f64;
    let direct = 1.0
        + 2.0
            * (1..r)
                .map(|n| (1.0 - n as f64 / rf) * (n as f64 * x).cos())
                .sum::<f64>();
    let closed_form = (rf * x / 2.0).sin().powi(2) / (rf * (x / 2.0).sin().powi(2));
    Ok(FejerCheck {
        direct,
        closed_form,
        lower_bound: 4.0 * rf / (PI * PI),
        in_window: x.abs() <= PI / rf,
    })
}

/// `Σ_{|n| ≤ n_max} 1/(4n² − 1)²`, summed from the small terms up.
pub fn sum_identity_partial(n_max: u64) -> f64 {
    let mut s = 0.0;
    for n in (1..=n_max).rev() {
        let d = 4.0 * (n as f64).powi(2) - 1.0;
        s += 2.0 / (d * d);
    }
    s + 1.0
}

/// `1/(12 n³)`, dominating the omitted tail `2 Σ_{n>N} 1/(4n²−1)²`.
pub fn sum_identity_tail_bound(n_max: u64) -> f64 {
    1.0 / (12.0 * (n_max as f64).powi(3))
}

/// `u^#(n) = (4|β|/π)(−1)ⁿ/(1 − 4n²)` for `u(0) = u(1) = β`.
pub fn two_point_sharp(beta: f64, n: i64) -> f64 {
    let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    4.0 * beta.abs() / PI * sign / (1.0 - 4.0 * (n * n) as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedFailureEvidence {
    /// `β²((1/2)^α + (3/2)^α)`.
    pub lhs: f64,
    /// Entry `N` is the weighted energy of `u^#` summed over `|n| ≤ N`.
    pub rhs_partial: Vec<f64>,
    /// First `N` with `rhs_partial[N] > lhs`.
    pub crossing: Option<usize>,
    /// Least-squares slope of `log(term(N))` against `log N` on `[n_max/2, n_max]`,
    /// where `term(N)` collects the `±N` contributions.
    pub tail_slope: f64,
}

/// Power-weighted difference energy of the closed-form two-point
/// rearrangement, which outgrows the input's for `α > 4`.
pub fn weighted_failure_evidence(
    beta: f64,
    alpha: f64,
    n_max: usize,
) -> Result<WeightedFailureEvidence> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::InvalidParameter("beta must be nonzero".into()));
    }
    if n_max < 10 {
        return Err(Error::InvalidParameter("n_max must be at least 10".into()));
    }
    let lhs = beta * beta * (0.5f64.powf(alpha) + 1.5f64.powf(alpha));
    let term = |n: i64| {
        let d = two_point_sharp(beta, n) - two_point_sharp(beta, n - 1);
        d * d * (n.unsigned_abs() as f64).powf(alpha)
    };
    let mut rhs_partial = Vec::with_capacity(n_max + 1);
    let mut terms = Vec::with_capacity(n_max + 1);
    let mut acc = term(0);
    rhs_partial.push(acc);
    terms.push(acc);
    for n in 1..=n_max as i64 {
        let t = term(n) + term(-n);
        acc += t;
        rhs_partial.push(acc);
        terms.push(t);
    }
    let crossing = rhs_partial.iter().position(|&s| s > lhs);

    let pts: Vec<(f64, f64)> = (n_max / 2..=n_max)
        .filter(|&n| n > 0 && terms[n] > 0.0)
        .map(|n| ((n as f64).ln(), terms[n].ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(WeightedFailureEvidence {
        lhs,
        rhs_partial,
        crossing,
        tail_slope: sxy / sxx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> BTreeSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn set_rearrangement_examples() {
        assert_eq!(set_rearrangement(&set(&[-3, 5, 0])), set(&[0, 1, -1]));
        assert!(set_rearrangement(&BTreeSet::new()).is_empty());
        assert_eq!(set_rearrangement(&set(&[7])), set(&[0]));
        assert_eq!(
            set_rearrangement(&set(&[1, 2, 3, 4, 5])),
            set(&[-2, -1, 0, 1, 2])
        );
    }

    #[test]
    fn concentration_examples() {
        let p = FourierParams::default();
        let c = concentration_ratio(&LatticeSequence::delta(0), &set(&[0]), &p).unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-15);
        assert!((c.rhs_unscaled - 1.0).abs() < 1e-10);
        assert!((c.ratio - 1.0).abs() < 1e-10);

        let u = LatticeSequence::from_real(0, &[1.0, 1.0]);
        let c = concentration_ratio(&u, &set(&[0, 1]), &p).unwrap();
        assert_eq!(c.lhs, 2.0);
        assert!((c.rhs_unscaled - 1.801_265_486_974_893_7).abs() < 1e-5);
        assert!((c.ratio - 1.110_330_495_122_552_8).abs() < 1e-5);

        assert!(concentration_ratio(&u, &BTreeSet::new(), &p).is_err());
    }

    #[test]
    fn bisection_matches_power_closed_form() {
        let a = [0.3, 1.2, 0.0, 2.5];
        let b = [2.0, 0.4, 0.1];
        for p in [3.0, 4.0, 6.0] {
            let c = minimal_convex_constant(&a, &b, |x: f64| x.powf(p / 2.0)).unwrap();
            let sa: f64 = a.iter().map(|x: &f64| x.powf(p / 2.0)).sum();
            let sb: f64 = b.iter().map(|x: &f64| x.powf(p / 2.0)).sum();
            let closed = (sa / sb).powf(2.0 / p);
            assert!((c - closed).abs() < 1e-13 * closed, "{c} vs {closed}");
        }
    }

    #[test]
    fn convex_constant_examples() {
        let p = FourierParams::default();
        let c = convex_lp_minimal_constant(&LatticeSequence::delta(0), 4.0, &p).unwrap();
        assert!((c - 1.0).abs() < 1e-10);

        // series oracle: Σ|u^#|⁴ = (4/π)⁴ Σ 1/(1−4n²)⁴ = 2.693090339513422…
        let u = LatticeSequence::from_real(0, &[1.0, 1.0]);
        let c = convex_lp_minimal_constant(&u, 4.0, &p).unwrap();
        assert!((c - 0.861_766_359_795_316_2).abs() < 1e-6, "{c}");
        let c3 = convex_lp_minimal_constant(&u, 3.0, &p).unwrap();
        assert!((c3 - 0.933_257_817_895_177_4).abs() < 1e-6, "{c3}");
        let c6 = convex_lp_minimal_constant(&u, 6.0, &p).unwrap();
        assert!((c6 - 0.776_473_168_287_165_2).abs() < 1e-6, "{c6}");

        assert_eq!(
            convex_lp_minimal_constant(&u, 2.0, &p),
            Err(Error::ExponentNotAboveTwo(2.0))
        );
    }

    #[test]
    fn series_oracle_for_quartic_sum() {
        let s: f64 = (-2000i64..=2000)
            .map(|n| two_point_sharp(1.0, n).powi(4))
            .sum();
        assert!((s - 2.693_090_339_513_422).abs() < 1e-12);
    }

    #[test]
    fn fejer_examples() {
        let f = fejer_kernel_transform_check(2, PI / 2.0).unwrap();
        assert!((f.closed_form - 1.0).abs() < 1e-15);
        assert!((f.direct - f.closed_form).abs() < 1e-10);
        for x in [-2.0, 0.3, 1.1, 3.0] {
            let f = fejer_kernel_transform_check(1, x).unwrap();
            assert_eq!(f.direct, 1.0);
            assert!((f.closed_form - 1.0).abs() < 1e-14);
        }
        let f = fejer_kernel_transform_check(4, PI / 4.0).unwrap();
        assert!(f.in_window);
        assert!((f.closed_form - 1.707_106_781_186_547_5).abs() < 1e-14);
        assert!(f.closed_form >= f.lower_bound);
        assert!((f.lower_bound - 1.621_138_938_277_404_3).abs() < 1e-14);
        assert!(fejer_kernel_transform_check(3, 0.0).is_err());
    }

    #[test]
    fn sum_identity_examples() {
        assert!((sum_identity_partial(1) - (1.0 + 2.0 / 9.0)).abs() < 1e-15);
        let target = PI * PI / 8.0;
        assert!((sum_identity_partial(10) - 1.233_664_621_778_984_5).abs() < 1e-14);
        assert!((sum_identity_partial(10) - target).abs() < 2e-4);
        assert!((sum_identity_partial(1000) - target).abs() < 1e-9);
        for n in [1, 3, 10, 100, 1000] {
            assert!((sum_identity_partial(n) - target).abs() <= sum_identity_tail_bound(n) + 1e-14);
        }
    }

    #[test]
    fn weighted_failure_examples() {
        let e = weighted_failure_evidence(1.0, 5.0, 200).unwrap();
        assert!((e.lhs - 7.625).abs() < 1e-14);
        // direct summation oracle crosses at N = 2 with partial sum 9.7506544467…
        assert_eq!(e.crossing, Some(2));
        assert!((e.rhs_partial[2] - 9.750_654_446_716_665).abs() < 1e-12);
        assert!((e.tail_slope - 1.0).abs() < 0.1, "{}", e.tail_slope);
        assert!(e.rhs_partial.windows(2).all(|w| w[1] >= w[0]));

        let e0 = weighted_failure_evidence(1.0, 0.0, 100).unwrap();
        assert!((e0.tail_slope + 4.0).abs() < 0.1);
        let tail = e0.rhs_partial[100] - e0.rhs_partial[50];
        assert!(tail < 1e-5);

        let e2 = weighted_failure_evidence(2.0, 5.0, 200).unwrap();
        assert!((e2.lhs / e.lhs - 4.0).abs() < 1e-14);
        assert!((e2.rhs_partial[200] / e.rhs_partial[200] - 4.0).abs() < 1e-12);

        assert!(weighted_failure_evidence(0.0, 5.0, 200).is_err());
        assert!(weighted_failure_evidence(1.0, 5.0, 5).is_err());
    }
}
