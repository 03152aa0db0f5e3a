//! Fourier rearrangement `u^# = F⁻¹((F u)*)` on ℤ.
//!
//! `F u` is sampled on a midpoint grid of (−π, π), its modulus is rearranged
//! on the grid, and the result is inverted by the midpoint rule for
//! `|n| ≤ n_max`. Quantities summed over all of ℤ are evaluated spectrally on
//! the grid, where no truncation occurs.

mod grid;
mod probes;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use grid::{
    evaluate_transform, forward_transform, grid_sdr, grid_sdr_with, inverse_transform, node,
    pair_nodes, GridFunction, Pairing, FOURIER_NORM,
};
pub use probes::{
    concentration_ratio, concentration_ratio_with, convex_lp_minimal_constant,
    convex_lp_minimal_constant_with, fejer_kernel_transform_check, minimal_convex_constant,
    set_rearrangement, sum_identity_partial, sum_identity_tail_bound, two_point_sharp,
    weighted_failure_evidence, ConcentrationRatio, FejerCheck, WeightedFailureEvidence,
};

use crate::error::{Error, Result};
use crate::report::Pair;
use crate::sequence::{FiniteSupport, LatticeSequence, C64};

pub const DEFAULT_GRID: usize = 1 << 14;
pub const DEFAULT_N_MAX: usize = 512;
pub const DEFAULT_TAIL_TOL: f64 = 1e-6;
/// Slack for spectral inequality checks.
pub const SPECTRAL_TOL: f64 = 1e-8;

/// Discretization parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierParams {
    pub grid: usize,
    pub n_max: usize,
    /// Relative bound on the Parseval residual of the truncated output.
    pub tail_tol: f64,
}

impl Default for FourierParams {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            n_max: DEFAULT_N_MAX,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

impl FourierParams {
    pub fn validate(&self) -> Result<()> {
        if self.grid < 64 || !self.grid.is_multiple_of(2) {
            return Err(Error::InvalidGridSize(self.grid));
        }
        if self.n_max == 0 || 2 * self.n_max + 1 > self.grid {
            return Err(Error::InvalidParameter(format!(
                "n_max = {} incompatible with grid {}",
                self.n_max, self.grid
            )));
        }
        if !(self.tail_tol >= 0.0) {
            return Err(Error::InvalidParameter(
                "tail_tol must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Same parameters on a grid twice as fine.
    pub fn refined(&self) -> Self {
        Self {
            grid: self.grid * 2,
            ..*self
        }
    }
}

/// Every stage of the rearrangement pipeline.
#[derive(Clone, Debug)]
pub struct FourierRearrangement {
    /// `F(u)` on the grid.
    pub spectrum: GridFunction,
    /// `(F u)*` on the grid; also `F(u^#)` before truncation.
    pub sharp_spectrum: GridFunction,
    /// `u^#(n)` for `|n| ≤ n_max`.
    pub sequence: LatticeSequence,
    pub input_energy: f64,
    pub retained_energy: f64,
}

impl FourierRearrangement {
    pub fn parseval_residual(&self) -> f64 {
        (self.input_energy - self.retained_energy).abs()
    }

    pub fn get(&self, n: i64) -> f64 {
        self.sequence.get(n).re
    }
}

pub fn fourier_rearrange(
    u: &LatticeSequence,
    params: &FourierParams,
) -> Result<FourierRearrangement> {
    params.validate()?;
    let spectrum = forward_transform(u, params.grid)?;
    let sharp_spectrum = grid_sdr(&spectrum);
    let sequence = inverse_transform(&sharp_spectrum, params.n_max)?;
    let input_energy = u.energy();
    let retained_energy = sequence.energy();
    let out = FourierRearrangement {
        spectrum,
        sharp_spectrum,
        sequence,
        input_energy,
        retained_energy,
    };
    let tolerance = params.tail_tol * input_energy;
    if out.parseval_residual() > tolerance {
        return Err(Error::TailResidual {
            residual: out.parseval_residual(),
            tolerance,
        });
    }
    Ok(out)
}

/// `u^#` on `|n| ≤ n_max`.
pub fn fourier_rearrangement(
    u: &LatticeSequence,
    params: &FourierParams,
) -> Result<LatticeSequence> {
    fourier_rearrange(u, params).map(|r| r.sequence)
}

/// `Du(n) = u(n) − u(n−1)`.
pub fn forward_difference(u: &LatticeSequence) -> LatticeSequence {
    if u.is_zero() {
        return LatticeSequence::zero();
    }
    let r = u.range();
    LatticeSequence::from_fn(r.start, r.end + 1, |n| u.get(n) - u.get(n - 1))
}

/// `Δu(n) = 2u(n) − u(n−1) − u(n+1)`.
pub fn laplacian(u: &LatticeSequence) -> LatticeSequence {
    if u.is_zero() {
        return LatticeSequence::zero();
    }
    let r = u.range();
    LatticeSequence::from_fn(r.start - 1, r.end + 1, |n| {
        u.get(n) * 2.0 - u.get(n - 1) - u.get(n + 1)
    })
}

/// Derivative family `Δ^k` (even) or `DΔ^k` (odd).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Even,
    Odd,
}

impl Order {
    /// `|symbol|²`: `4^{2k} sin^{4k}(x/2)` or `4^{2k+1} sin^{4k+2}(x/2)`.
    pub fn symbol_sq(self, k: u32, x: f64) -> f64 {
        let s2 = 4.0 * (x / 2.0).sin().powi(2);
        match self {
            Order::Even => s2.powi(2 * k as i32),
            Order::Odd => s2.powi(2 * k as i32 + 1),
        }
    }

    pub fn apply(self, k: u32, u: &LatticeSequence) -> LatticeSequence {
        let mut v = u.clone();
        for _ in 0..k {
            v = laplacian(&v);
        }
        match self {
            Order::Even => v,
            Order::Odd => forward_difference(&v),
        }
    }
}

/// `Σ |Δ^k u|²` (or `Σ |DΔ^k u|²`) by differencing and by weighted quadrature
/// of `|F u|²`.
pub fn spectral_energy(u: &LatticeSequence, k: u32, order: Order, grid: usize) -> Result<Pair> {
    let direct = order.apply(k, u).energy();
    let f = forward_transform(u, grid)?;
    let spectral = f.weighted_energy(|x| order.symbol_sq(k, x));
    Ok(Pair::equal(direct, spectral))
}

/// Derivative energy of `u` (exact) against that of `u^#` (spectral).
pub fn ps_fourier_pair(
    u: &LatticeSequence,
    k: u32,
    order: Order,
    params: &FourierParams,
) -> Result<Pair> {
    let r = fourier_rearrange(u, params)?;
    Ok(ps_fourier_pair_with(u, &r, k, order))
}

pub fn ps_fourier_pair_with(
    u: &LatticeSequence,
    r: &FourierRearrangement,
    k: u32,
    order: Order,
) -> Pair {
    let lhs = order.apply(k, u).energy();
    let rhs = r.sharp_spectrum.weighted_energy(|x| order.symbol_sq(k, x));
    Pair::at_least(lhs, rhs)
}

/// Fourier multiplier symbol `ω` on (−π, π).
#[derive(Clone)]
pub struct MultiplierSymbol {
    evaluator: Arc<dyn Fn(f64) -> C64 + Send + Sync>,
    radial_increasing: bool,
}

impl std::fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("radial_increasing", &self.radial_increasing)
            .finish_non_exhaustive()
    }
}

impl MultiplierSymbol {
    pub fn new(f: impl Fn(f64) -> C64 + Send + Sync + 'static, radial_increasing: bool) -> Self {
        Self {
            evaluator: Arc::new(f),
            radial_increasing,
        }
    }

    pub fn real(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(move |x| C64::new(f(x), 0.0), true)
    }

    pub fn constant(c: f64) -> Self {
        Self::real(move |_| c)
    }

    /// `|x|`.
    pub fn abs_x() -> Self {
        Self::real(f64::abs)
    }

    /// `1 − e^{−ix}`, the symbol of `D`; modulus `2|sin(x/2)|`.
    pub fn difference() -> Self {
        Self::new(|x| C64::new(1.0, 0.0) - C64::from_polar(1.0, -x), true)
    }

    pub fn eval(&self, x: f64) -> C64 {
        (self.evaluator)(x)
    }

    pub fn is_flagged(&self) -> bool {
        self.radial_increasing
    }

    /// Confirms `|ω(x)| = |ω(−x)|` and `|ω|` nondecreasing in `|x|` on the nodes.
    pub fn validate_on_grid(&self, m: usize) -> Result<Vec<f64>> {
        if !self.radial_increasing {
            return Err(Error::SymbolNotRadialIncreasing(0));
        }
        let mods: Vec<f64> = (0..m).map(|j| self.eval(node(j, m)).norm()).collect();
        let scale = mods
            .iter()
            .copied()
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let slack = 1e-12 * scale;
        let mut prev = 0.0;
        for k in 0..m / 2 {
            let (a, b) = pair_nodes(k, m);
            if !mods[a].is_finite() || (mods[a] - mods[b]).abs() > slack {
                return Err(Error::SymbolNotRadialIncreasing(b));
            }
            if mods[b] + slack < prev {
                return Err(Error::SymbolNotRadialIncreasing(b));
            }
            prev = mods[b];
        }
        Ok(mods)
    }
}

/// `∫ |ω|² |F u|²` against `∫ |ω|² |F u^#|²`, both on the grid.
pub fn multiplier_ps_pair(
    u: &LatticeSequence,
    omega: &MultiplierSymbol,
    params: &FourierParams,
) -> Result<Pair> {
    params.validate()?;
    let mods = omega.validate_on_grid(params.grid)?;
    let f = forward_transform(u, params.grid)?;
    let sharp = grid_sdr(&f);
    Ok(multiplier_pair_on_grid(&f, &sharp, &mods))
}

pub(crate) fn multiplier_pair_on_grid(
    f: &GridFunction,
    sharp: &GridFunction,
    mods: &[f64],
) -> Pair {
    let h = f.spacing();
    let side = |g: &GridFunction| {
        h * g
            .samples()
            .iter()
            .zip(mods)
            .map(|(z, w)| w * w * z.norm_sqr())
            .sum::<f64>()
    };
    Pair::at_least(side(f), side(sharp))
}

/// First-power claim `∫ f g ≥ ∫ f* g` for nonnegative `f` and radially
/// nondecreasing `g ≥ 0`, with the exact excess that root-mean-square pairing
/// adds to the right side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub pair: Pair,
    pub tolerance: f64,
}

impl ClaimCheck {
    pub fn holds(&self) -> bool {
        self.pair.holds(self.tolerance)
    }
}

pub fn increasing_weight_claim(f: &GridFunction, g: &MultiplierSymbol) -> Result<ClaimCheck> {
    let m = f.size();
    if let Some((index, z)) = f
        .samples()
        .iter()
        .enumerate()
        .find(|(_, z)| !(z.re >= 0.0) || z.im != 0.0)
    {
        return Err(Error::NegativeEntry { index, value: z.re });
    }
    let gm = g.validate_on_grid(m)?;
    let h = f.spacing();
    let lhs = h * f
        .samples()
        .iter()
        .zip(&gm)
        .map(|(z, w)| z.re * w)
        .sum::<f64>();
    let sharp = grid_sdr(f);
    let rhs = h * sharp
        .samples()
        .iter()
        .zip(&gm)
        .map(|(z, w)| z.re * w)
        .sum::<f64>();

    let mut s = f.moduli();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut excess = 0.0;
    for k in 0..m / 2 {
        let (neg, pos) = pair_nodes(k, m);
        let mean = (s[2 * k] + s[2 * k + 1]) / 2.0;
        excess += (gm[neg] + gm[pos]) * (sharp.samples()[pos].re - mean);
    }
    let tolerance = h * excess.max(0.0) + 1e-12 * (lhs.abs() + rhs.abs());
    Ok(ClaimCheck {
        pair: Pair::at_least(lhs, rhs),
        tolerance,
    })
}

/// `|F u|` already even and nonincreasing in `|x|`: the equality case.
pub fn spectrum_is_sorted(r: &FourierRearrangement, rel_tol: f64) -> bool {
    r.spectrum.modulus_is_symmetric_decreasing(rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point() -> LatticeSequence {
        LatticeSequence::from_real(0, &[1.0, 1.0])
    }

    #[test]
    fn params_validation_and_json() {
        assert!(FourierParams::default().validate().is_ok());
        assert!(FourierParams {
            grid: 62,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(FourierParams {
            grid: 65,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(FourierParams {
            grid: 64,
            n_max: 32,
            tail_tol: 0.0
        }
        .validate()
        .is_err());
        let p: FourierParams =
            serde_json::from_str(r#"{"grid": 16384, "n_max": 512, "tail_tol": 1e-6}"#).unwrap();
        assert_eq!(p, FourierParams::default());
    }

    #[test]
    fn rearrangement_examples() {
        let p = FourierParams::default();
        let d = fourier_rearrangement(&LatticeSequence::delta(0), &p).unwrap();
        assert!((d.get(0).re - 1.0).abs() < 1e-12);
        assert!((1..=512).all(|n| d.get(n).norm() < 1e-12));

        let r = fourier_rearrange(&two_point(), &p).unwrap();
        for n in -20..=20 {
            assert!(
                (r.get(n) - two_point_sharp(1.0, n)).abs() <= 1e-6,
                "n = {n}"
            );
        }

        let again = fourier_rearrangement(&r.sequence, &p).unwrap();
        for n in -20..=20 {
            assert!((again.get(n).re - r.get(n)).abs() <= 1e-6);
        }
    }

    #[test]
    fn zero_input_gives_zero() {
        let r = fourier_rearrange(&LatticeSequence::zero(), &FourierParams::default()).unwrap();
        assert!(r.sequence.is_zero());
    }

    #[test]
    fn tail_tolerance_is_enforced() {
        // a spike spreads u^# far beyond a tiny window
        let p = FourierParams {
            grid: 64,
            n_max: 1,
            tail_tol: 1e-6,
        };
        let u = LatticeSequence::from_real(0, &[1.0, 0.0, 0.0, 1.0, -1.0]);
        assert!(matches!(
            fourier_rearrange(&u, &p),
            Err(Error::TailResidual { .. })
        ));
    }

    #[test]
    fn difference_operators() {
        let d = forward_difference(&LatticeSequence::delta(0));
        assert_eq!(d, LatticeSequence::from_real(0, &[1.0, -1.0]));
        let l = laplacian(&LatticeSequence::delta(0));
        assert_eq!(l, LatticeSequence::from_real(-1, &[-1.0, 2.0, -1.0]));
        let lin = LatticeSequence::from_fn(-5, 6, |n| C64::new(n as f64, 0.0));
        let l = laplacian(&lin);
        assert!((-4..=4).all(|n| l.get(n) == C64::default()));
    }

    #[test]
    fn spectral_energy_examples() {
        let d = LatticeSequence::delta(0);
        let e = spectral_energy(&d, 0, Order::Odd, 64).unwrap();
        assert_eq!(e.lhs, 2.0);
        assert!((e.rhs - 2.0).abs() < 1e-13);
        let e = spectral_energy(&d, 1, Order::Even, 64).unwrap();
        assert_eq!(e.lhs, 6.0);
        assert!((e.rhs - 6.0).abs() < 1e-13);
        let e = spectral_energy(&LatticeSequence::zero(), 2, Order::Odd, 64).unwrap();
        assert_eq!((e.lhs, e.rhs), (0.0, 0.0));
    }

    #[test]
    fn ps_pair_examples() {
        let p = FourierParams::default();
        let e = ps_fourier_pair(&LatticeSequence::delta(0), 0, Order::Odd, &p).unwrap();
        assert_eq!(e.lhs, 2.0);
        assert!((e.rhs - 2.0).abs() < 1e-10);

        // quadrature oracle value for the two-point rhs: exactly 2
        let e = ps_fourier_pair(&two_point(), 0, Order::Odd, &p).unwrap();
        assert_eq!(e.lhs, 2.0);
        assert!((e.rhs - 2.0).abs() < 1e-10);
        assert!(e.holds(SPECTRAL_TOL));
    }

    #[test]
    fn multiplier_examples() {
        let p = FourierParams {
            grid: 1024,
            n_max: 64,
            tail_tol: 1e-6,
        };
        let u = LatticeSequence::from_real(-2, &[0.3, -1.0, 0.0, 2.0, 0.5, -0.7]);
        let via_symbol = multiplier_ps_pair(&u, &MultiplierSymbol::difference(), &p).unwrap();
        let r = fourier_rearrange(
            &u,
            &FourierParams {
                grid: 1024,
                n_max: 256,
                tail_tol: 1.0,
            },
        )
        .unwrap();
        let via_ps = ps_fourier_pair_with(&u, &r, 0, Order::Odd);
        assert!((via_symbol.lhs - via_ps.lhs).abs() < 1e-12);
        assert!((via_symbol.rhs - via_ps.rhs).abs() < 1e-12);

        let one = multiplier_ps_pair(&u, &MultiplierSymbol::constant(1.0), &p).unwrap();
        assert!((one.lhs - one.rhs).abs() < 1e-12);
        assert!((one.lhs - u.energy()).abs() < 1e-12);

        let x = multiplier_ps_pair(&u, &MultiplierSymbol::abs_x(), &p).unwrap();
        assert!(x.margin > 0.0);

        let bad = MultiplierSymbol::real(|x| x.cos());
        assert!(matches!(
            multiplier_ps_pair(&u, &bad, &p),
            Err(Error::SymbolNotRadialIncreasing(_))
        ));
        let unflagged = MultiplierSymbol::new(|x| C64::new(x.abs(), 0.0), false);
        assert!(multiplier_ps_pair(&u, &unflagged, &p).is_err());
    }

    #[test]
    fn claim_examples() {
        let m = 256;
        let away =
            GridFunction::from_fn(m, |x| C64::new(if x.abs() > 2.0 { 1.0 } else { 0.0 }, 0.0))
                .unwrap();
        let c = increasing_weight_claim(&away, &MultiplierSymbol::abs_x()).unwrap();
        assert!(c.holds());
        assert!(c.pair.margin > 1.0);

        let sorted = GridFunction::from_fn(m, |x| C64::new((x / 2.0).cos(), 0.0)).unwrap();
        let c = increasing_weight_claim(&sorted, &MultiplierSymbol::abs_x()).unwrap();
        assert!(c.pair.margin.abs() <= c.tolerance);

        let rough = GridFunction::from_fn(m, |x| C64::new((7.3 * x).sin().abs() + 0.1 * x, 0.0))
            .map(|g| {
                GridFunction::from_real(
                    &g.samples()
                        .iter()
                        .map(|z| z.re.max(0.0))
                        .collect::<Vec<_>>(),
                )
                .unwrap()
            })
            .unwrap();
        let c = increasing_weight_claim(&rough, &MultiplierSymbol::constant(2.0)).unwrap();
        assert!(c.holds());
        assert!(c.pair.margin.abs() <= c.tolerance);

        let neg = GridFunction::from_real(&[1.0, -1.0, 0.0, 0.0]).unwrap();
        assert!(increasing_weight_claim(&neg, &MultiplierSymbol::abs_x()).is_err());
    }
}
