//! Symmetric-decreasing rearrangement `u*`: the decreasing rearrangement of
//! `|u^#|` on `0..=n_max`, reflected to negative indices.

use serde::{Deserialize, Serialize};

use crate::decreasing::sorted_moduli;
use crate::error::Result;
use crate::fourier::{
    convex_lp_minimal_constant_with, forward_difference, fourier_rearrange, ps_fourier_pair_with,
    FourierParams, FourierRearrangement, Order, SPECTRAL_TOL,
};
use crate::report::{Pair, PropertyReport};
use crate::sequence::{lp_sum, LatticeSequence, C64};

#[derive(Clone, Debug)]
pub struct SymmetricRearrangement {
    pub fourier: FourierRearrangement,
    /// `v(n)` for `0 ≤ n ≤ n_max`.
    pub profile: Vec<f64>,
    /// `u*(n) = v(|n|)`.
    pub sequence: LatticeSequence,
}

impl SymmetricRearrangement {
    pub fn get(&self, n: i64) -> f64 {
        self.profile
            .get(n.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }
}

pub fn symmetric_rearrange(
    u: &LatticeSequence,
    params: &FourierParams,
) -> Result<SymmetricRearrangement> {
    let fourier = fourier_rearrange(u, params)?;
    let n_max = params.n_max as i64;
    let profile = sorted_moduli((0..=n_max).map(|n| fourier.get(n).abs()));
    let sequence = LatticeSequence::from_fn(-n_max, n_max + 1, |n| {
        C64::new(profile[n.unsigned_abs() as usize], 0.0)
    });
    Ok(SymmetricRearrangement {
        fourier,
        profile,
        sequence,
    })
}

pub fn symmetric_decreasing_rearrangement(
    u: &LatticeSequence,
    params: &FourierParams,
) -> Result<LatticeSequence> {
    symmetric_rearrange(u, params).map(|r| r.sequence)
}

/// Absolute slack for the l² bookkeeping of the truncated outputs.
pub const L2_TOL: f64 = 1e-6;

fn roundoff(scale: f64) -> f64 {
    1e-12 * (1.0 + scale.abs())
}

/// `u^#(0)² + 2 Σ_{1≤n≤n_max} |u^#(n)|²`.
pub fn reflected_sharp_energy(r: &FourierRearrangement, n_max: usize) -> f64 {
    r.get(0).powi(2) + 2.0 * (1..=n_max as i64).map(|n| r.get(n).powi(2)).sum::<f64>()
}

fn correlation(a: &LatticeSequence, b: &LatticeSequence) -> C64 {
    a.range().map(|n| a.get(n) * b.get(n).conj()).sum()
}

/// Reports for norm preservation, Hardy–Littlewood, contraction, the
/// `p`-norm constant and Pólya–Szegő (with its intermediate steps).
pub fn sds_property_suite(
    u: &LatticeSequence,
    v: &LatticeSequence,
    p: f64,
    params: &FourierParams,
) -> Result<Vec<PropertyReport>> {
    let su = symmetric_rearrange(u, params)?;
    let sv = symmetric_rearrange(v, params)?;
    sds_reports(u, v, &su, &sv, p, params)
}

pub(crate) fn sds_reports(
    u: &LatticeSequence,
    v: &LatticeSequence,
    su: &SymmetricRearrangement,
    sv: &SymmetricRearrangement,
    p: f64,
    params: &FourierParams,
) -> Result<Vec<PropertyReport>> {
    let mut out = Vec::new();
    let energy = u.energy();

    let norm = Pair::equal(energy, su.sequence.energy());
    out.push(PropertyReport::from_pair(
        "l2-preservation",
        norm,
        L2_TOL * energy.max(1.0),
    ));

    let perm = Pair::equal(
        su.sequence.energy(),
        reflected_sharp_energy(&su.fourier, params.n_max),
    );
    out.push(PropertyReport::from_pair(
        "l2-permutation-identity",
        perm,
        roundoff(perm.lhs),
    ));

    let hl = Pair::at_most(
        correlation(u, v).norm(),
        correlation(&su.sequence, &sv.sequence).re,
    );
    out.push(PropertyReport::from_pair("hardy-littlewood", hl, L2_TOL));

    let contraction = Pair::at_most(su.sequence.sub(&sv.sequence).energy(), u.sub(v).energy());
    out.push(PropertyReport::from_pair(
        "l2-contraction",
        contraction,
        L2_TOL,
    ));

    let c = convex_lp_minimal_constant_with(u, &su.fourier, p)?;
    let lp = Pair::equal(lp_sum(u, p), c.powf(p / 2.0) * lp_sum(&su.sequence, p));
    let mut report = PropertyReport::from_pair("lp-constant", lp, roundoff(lp.lhs) * 1e3);
    report.constant = Some(c.powf(p / 2.0));
    report.pass = report.pass && c.is_finite() && c > 0.0;
    out.push(report);

    let d_energy = |s: &LatticeSequence| forward_difference(s).energy();
    let lhs = d_energy(u);
    let star = d_energy(&su.sequence);
    out.push(PropertyReport::from_pair(
        "polya-szego",
        Pair::at_least(lhs, star),
        SPECTRAL_TOL,
    ));

    let fourier_step = ps_fourier_pair_with(u, &su.fourier, 0, Order::Odd);
    out.push(PropertyReport::from_pair(
        "polya-szego-fourier-step",
        fourier_step,
        SPECTRAL_TOL,
    ));

    let sharp = d_energy(&su.fourier.sequence);
    let reflected = Pair::at_least(sharp, star);
    out.push(PropertyReport::from_pair(
        "polya-szego-reflected-step",
        reflected,
        roundoff(sharp) * 100.0,
    ));

    let radial = (0..su.profile.len().saturating_sub(1))
        .all(|n| su.profile[n] >= su.profile[n + 1])
        && su
            .sequence
            .range()
            .all(|n| su.sequence.get(n) == su.sequence.get(-n));
    out.push(PropertyReport {
        property: "radial-decreasing".into(),
        lhs: 0.0,
        rhs: 0.0,
        margin: 0.0,
        pass: radial,
        constant: None,
    });
    Ok(out)
}

/// The two necessary conditions for equality in the Pólya–Szegő inequality
/// for `u*`; together they are not known to be sufficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityConditions {
    /// `|F u| = (F u)*` on the grid.
    pub spectrum_sorted: bool,
    /// `u^# = u*` on the stored window.
    pub sharp_is_star: bool,
}

pub fn equality_conditions(r: &SymmetricRearrangement, tol: f64) -> EqualityConditions {
    let n_max = r.profile.len() as i64 - 1;
    EqualityConditions {
        spectrum_sorted: r.fourier.spectrum.modulus_is_symmetric_decreasing(tol),
        sharp_is_star: (-n_max..=n_max).all(|n| (r.fourier.get(n) - r.get(n)).abs() <= tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::two_point_sharp;

    #[test]
    fn delta_is_fixed() {
        let p = FourierParams::default();
        let s = symmetric_rearrange(&LatticeSequence::delta(0), &p).unwrap();
        assert!((s.get(0) - 1.0).abs() < 1e-12);
        assert!((1..=512).all(|n| s.get(n) < 1e-12));
        let reports = sds_property_suite(
            &LatticeSequence::delta(0),
            &LatticeSequence::delta(0),
            4.0,
            &p,
        )
        .unwrap();
        for r in &reports {
            assert!(r.pass, "{r:?}");
            assert!(r.margin.abs() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn two_point_profile() {
        let p = FourierParams::default();
        let u = LatticeSequence::from_real(0, &[1.0, 1.0]);
        let s = symmetric_rearrange(&u, &p).unwrap();
        for n in 0..=20i64 {
            assert!((s.get(n) - two_point_sharp(1.0, n).abs()).abs() < 1e-6);
            assert_eq!(s.get(n), s.get(-n));
        }
        let reports = sds_property_suite(&u, &u, 4.0, &p).unwrap();
        let l2 = reports
            .iter()
            .find(|r| r.property == "l2-preservation")
            .unwrap();
        assert!((l2.lhs - 2.0).abs() < 1e-15 && (l2.rhs - 2.0).abs() < 1e-6);
        // direct summation oracle over the closed-form profile: 1.6769628312602551
        let ps = reports
            .iter()
            .find(|r| r.property == "polya-szego")
            .unwrap();
        assert_eq!(ps.lhs, 2.0);
        assert!((ps.rhs - 1.676_962_831_260_255).abs() < 1e-6, "{}", ps.rhs);
        assert!(reports.iter().all(|r| r.pass), "{reports:?}");

        let c = equality_conditions(&s, 1e-9);
        assert!(c.spectrum_sorted);
        assert!(!c.sharp_is_star);
    }

    #[test]
    fn non_monotone_sharp_profile_gets_sorted() {
        let p = FourierParams::default();
        let u = LatticeSequence::from_real(-3, &[0.4, -1.0, 0.0, 0.7, 2.0, 0.0, -0.3, 1.1]);
        let s = symmetric_rearrange(&u, &p).unwrap();
        let raw: Vec<f64> = (0..=512).map(|n| s.fourier.get(n).abs()).collect();
        assert!(raw.windows(2).any(|w| w[1] > w[0]));
        assert!(s.profile.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(s.profile[0], s.fourier.get(0).abs());
    }
}
