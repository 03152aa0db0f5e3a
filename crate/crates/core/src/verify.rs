//! Seeded randomized suites over every module, and empirical constants.
//!
//! Trial `i` of a run draws its inputs from a ChaCha stream keyed by
//! `(seed, i)`, so serial and parallel runs see the same inputs and produce
//! identical reports.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decreasing::{
    coarea_both_sides, decreasing_rearrangement, equimeasurability_gap, hardy_littlewood_pair,
    laplacian_counterexample, laplacian_counterexample_closed_forms, lp_contraction_pair,
    ps_equality_witness, weighted_ps_pair, EqualityKind, FiniteGraph,
};
use crate::error::{Error, Result};
use crate::fourier::{
    concentration_ratio_with, convex_lp_minimal_constant_with, evaluate_transform,
    fejer_kernel_transform_check, fourier_rearrange, increasing_weight_claim,
    minimal_convex_constant, multiplier_pair_on_grid, ps_fourier_pair_with, spectral_energy,
    sum_identity_partial, sum_identity_tail_bound, two_point_sharp, weighted_failure_evidence,
    FourierParams, FourierRearrangement, GridFunction, MultiplierSymbol, Order,
};
use crate::hardy::{hardy_chain_report, hardy_constant, hardy_pair};
use crate::levels::{layer_cake_reconstruct, level_decomposition};
use crate::report::{Pair, PropertyReport};
use crate::sequence::{lp_norm, HalfLineSequence, LatticeSequence, SequenceJson, C64};
use crate::symmetric::{sds_reports, symmetric_rearrange, L2_TOL};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    DecreasingBasic,
    DecreasingPs,
    Coarea,
    FourierBasic,
    FourierPs,
    FourierMultiplier,
    Concentration,
    Convexity,
    Symmetric,
    Hardy,
    Counterexamples,
    Identities,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::DecreasingBasic,
        Suite::DecreasingPs,
        Suite::Coarea,
        Suite::FourierBasic,
        Suite::FourierPs,
        Suite::FourierMultiplier,
        Suite::Concentration,
        Suite::Convexity,
        Suite::Symmetric,
        Suite::Hardy,
        Suite::Counterexamples,
        Suite::Identities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DecreasingBasic => "decreasing-basic",
            Suite::DecreasingPs => "decreasing-ps",
            Suite::Coarea => "coarea",
            Suite::FourierBasic => "fourier-basic",
            Suite::FourierPs => "fourier-ps",
            Suite::FourierMultiplier => "fourier-multiplier",
            Suite::Concentration => "concentration",
            Suite::Convexity => "convexity",
            Suite::Symmetric => "symmetric",
            Suite::Hardy => "hardy",
            Suite::Counterexamples => "counterexamples",
            Suite::Identities => "identities",
        }
    }

    /// Suites whose properties depend on the Fourier grid.
    pub fn uses_grid(self) -> bool {
        matches!(
            self,
            Suite::FourierBasic
                | Suite::FourierPs
                | Suite::FourierMultiplier
                | Suite::Concentration
                | Suite::Convexity
                | Suite::Symmetric
        )
    }

    /// Suites with a fixed case list that ignore the trial count.
    pub fn is_fixed(self) -> bool {
        matches!(self, Suite::Counterexamples | Suite::Identities)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// At most 8 nonzeros in a window of width `min(max_support, 64)`.
    Sparse,
    /// Contiguous support; a quarter of draws are quantized to force ties.
    Dense,
    /// Moduli `bound·rank^{−s}` in random order, `s ∈ [0.5, 2]`.
    HeavyTailed,
    /// Sorted nonnegative values.
    Decreasing,
    /// Independent real and imaginary parts, moduli at most `bound`.
    Complex,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 5] = [
        GeneratorKind::Sparse,
        GeneratorKind::Dense,
        GeneratorKind::HeavyTailed,
        GeneratorKind::Decreasing,
        GeneratorKind::Complex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Sparse => "sparse",
            GeneratorKind::Dense => "dense",
            GeneratorKind::HeavyTailed => "heavy-tailed",
            GeneratorKind::Decreasing => "decreasing",
            GeneratorKind::Complex => "complex",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorKind::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))
    }
}

/// Largest support a generator may be asked for.
pub const MAX_SUPPORT_LIMIT: usize = 1024;

fn nonzero_magnitude(rng: &mut impl Rng, bound: f64) -> f64 {
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    sign * bound * rng.gen_range(0.05..=1.0)
}

/// Draws one finitely supported block of values.
pub fn generate(
    kind: GeneratorKind,
    rng: &mut impl Rng,
    max_support: usize,
    bound: f64,
) -> Vec<C64> {
    let len = rng.gen_range(1..=max_support.max(1));
    let real = |v: Vec<f64>| v.into_iter().map(|x| C64::new(x, 0.0)).collect();
    match kind {
        GeneratorKind::Sparse => {
            let window = max_support.clamp(1, 64);
            let k = rng.gen_range(1..=window.min(8));
            let mut v = vec![0.0; window];
            for i in rand::seq::index::sample(rng, window, k) {
                v[i] = nonzero_magnitude(rng, bound);
            }
            real(v)
        }
        GeneratorKind::Dense => {
            let quantize = rng.gen_bool(0.25);
            real(
                (0..len)
                    .map(|_| {
                        let x = nonzero_magnitude(rng, bound);
                        if quantize {
                            (x / bound * 4.0).round() * bound / 4.0
                        } else {
                            x
                        }
                    })
                    .collect(),
            )
        }
        GeneratorKind::HeavyTailed => {
            let s = rng.gen_range(0.5..=2.0);
            let mut ranks: Vec<usize> = (0..len).collect();
            ranks.shuffle(rng);
            real(
                ranks
                    .into_iter()
                    .map(|r| {
                        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        sign * bound * ((r + 1) as f64).powf(-s)
                    })
                    .collect(),
            )
        }
        GeneratorKind::Decreasing => {
            let mut v: Vec<f64> = (0..len).map(|_| bound * rng.gen_range(0.0..=1.0)).collect();
            v.sort_by(|a, b| b.total_cmp(a));
            real(v)
        }
        GeneratorKind::Complex => {
            let side = bound / 2f64.sqrt();
            (0..len)
                .map(|_| C64::new(rng.gen_range(-side..=side), rng.gen_range(-side..=side)))
                .collect()
        }
    }
}

/// The generator stream for one trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    /// Per-property overrides; the key `"*"` applies to every property that
    /// has a nonnegative default.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Fixed generator, or `None` to cycle through all of them by trial index.
    pub generator: Option<GeneratorKind>,
    pub max_support: usize,
    pub bound: f64,
    pub params: FourierParams,
    /// Hardy exponent; `None` runs 1.1, 1.5 and 2.
    pub alpha: Option<f64>,
    /// Exponents; an empty list selects the suite's defaults.
    pub p_values: Vec<f64>,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
}

impl TrialConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            trials: 100,
            seed: 0,
            tolerances: BTreeMap::new(),
            generator: None,
            max_support: 64,
            bound: 1.0,
            params: FourierParams::default(),
            alpha: None,
            p_values: Vec::new(),
            jobs: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_support == 0 || self.max_support > MAX_SUPPORT_LIMIT {
            return Err(Error::InvalidGeneratorBounds(format!(
                "max support {} outside 1..={MAX_SUPPORT_LIMIT}",
                self.max_support
            )));
        }
        if !(self.bound > 0.0 && self.bound.is_finite()) {
            return Err(Error::InvalidGeneratorBounds(format!(
                "bound {} must be positive",
                self.bound
            )));
        }
        if self.suite.uses_grid() {
            self.params.validate()?;
        }
        if let Some(a) = self.alpha {
            if !(a > 1.0 && a <= 2.0) {
                return Err(Error::AlphaOutOfRange(a));
            }
        }
        Ok(())
    }

    fn p_or(&self, default: &[f64]) -> Vec<f64> {
        if self.p_values.is_empty() {
            default.to_vec()
        } else {
            self.p_values.clone()
        }
    }

    fn kind(&self, trial: usize) -> GeneratorKind {
        self.generator
            .unwrap_or(GeneratorKind::ALL[trial % GeneratorKind::ALL.len()])
    }

    fn tolerance(&self, property: &str, default: f64) -> f64 {
        if let Some(&t) = self.tolerances.get(property) {
            return t;
        }
        match self.tolerances.get("*") {
            Some(&t) if default >= 0.0 => t,
            _ => default,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    /// Evaluated on the doubled grid after failing on the configured one.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub refined: bool,
}

/// One property aggregated over all trials; `pass ⇔ min_margin ≥ −tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub suite: Suite,
    pub property: String,
    pub tolerance: f64,
    pub min_margin: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_constant: Option<f64>,
    pub worst_trial: Option<usize>,
    pub worst_input: Option<Value>,
    pub trials: Vec<TrialRecord>,
}

/// One evaluated property within a trial, before tolerance resolution.
#[derive(Clone, Debug)]
struct Check {
    property: String,
    lhs: f64,
    rhs: f64,
    margin: f64,
    tolerance: f64,
    constant: Option<f64>,
}

impl Check {
    fn pair(property: impl Into<String>, pair: Pair, tolerance: f64) -> Self {
        Self {
            property: property.into(),
            lhs: pair.lhs,
            rhs: pair.rhs,
            margin: pair.margin,
            tolerance,
            constant: None,
        }
    }

    /// Margin divided by `scale` (at least 1).
    fn scaled(property: impl Into<String>, pair: Pair, scale: f64, tolerance: f64) -> Self {
        Self::pair(
            property,
            Pair {
                margin: pair.margin / scale.max(1.0),
                ..pair
            },
            tolerance,
        )
    }

    /// Margin relative to `|lhs|`.
    fn relative(property: impl Into<String>, pair: Pair, tolerance: f64) -> Self {
        Self::pair(
            property,
            Pair {
                margin: pair.margin / pair.lhs.abs().max(f64::MIN_POSITIVE),
                ..pair
            },
            tolerance,
        )
    }

    /// Passes only on a strictly positive margin.
    fn strict(property: impl Into<String>, pair: Pair) -> Self {
        Self::pair(property, pair, -f64::MIN_POSITIVE)
    }

    /// Number of mismatches, which must be zero.
    fn count(property: impl Into<String>, mismatches: usize) -> Self {
        Self::pair(property, Pair::at_most(mismatches as f64, 0.0), 0.0)
    }

    /// A finite nonnegative estimate; the margin only flags degenerate values.
    fn estimate(property: impl Into<String>, lhs: f64, rhs: f64, constant: f64) -> Self {
        let ok = constant.is_finite() && constant >= 0.0;
        Self {
            property: property.into(),
            lhs,
            rhs,
            margin: if ok { 0.0 } else { -1.0 },
            tolerance: 0.0,
            constant: Some(constant),
        }
    }
}

struct Outcome {
    input: Value,
    checks: Vec<Check>,
    refined: bool,
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn half_json(u: &HalfLineSequence) -> Value {
    serde_json::to_value(SequenceJson::from(u)).unwrap_or(Value::Null)
}

fn lattice_json(u: &LatticeSequence) -> Value {
    serde_json::to_value(SequenceJson::from(u)).unwrap_or(Value::Null)
}

fn half_line(config: &TrialConfig, kind: GeneratorKind, rng: &mut ChaCha20Rng) -> HalfLineSequence {
    HalfLineSequence::new(generate(kind, rng, config.max_support, config.bound))
}

fn lattice(config: &TrialConfig, kind: GeneratorKind, rng: &mut ChaCha20Rng) -> LatticeSequence {
    let offset = rng.gen_range(-16..=16);
    LatticeSequence::new(
        offset,
        generate(kind, rng, config.max_support, config.bound),
    )
}

fn decreasing_basic(
    config: &TrialConfig,
    kind: GeneratorKind,
    rng: &mut ChaCha20Rng,
) -> Result<Outcome> {
    let u = half_line(config, kind, rng);
    let v = half_line(config, kind, rng);
    let sorted = decreasing_rearrangement(&u);
    let mut checks = vec![Check::count(
        "equimeasurability",
        equimeasurability_gap(&u, &sorted),
    )];

    let squares: Vec<f64> = u.values().iter().map(|z| z.norm().powi(2)).collect();
    let sorted_squares = decreasing_rearrangement(&HalfLineSequence::from_real(&squares));
    let commute = (0..sorted.len())
        .filter(|&n| sorted_squares.get(n).re != sorted.get(n).re.powi(2))
        .count();
    checks.push(Check::count("monotone-commutation", commute));

    let dominating: Vec<f64> = (0..u.len() + 3)
        .map(|n| {
            u.get(n).norm()
                + if rng.gen_bool(0.5) {
                    config.bound * rng.gen::<f64>()
                } else {
                    0.0
                }
        })
        .collect();
    let sorted_dom = decreasing_rearrangement(&HalfLineSequence::from_real(&dominating));
    let order = (0..sorted.len())
        .filter(|&n| sorted.get(n).re > sorted_dom.get(n).re)
        .count();
    checks.push(Check::count("order-preservation", order));

    let rebuilt = layer_cake_reconstruct(&level_decomposition(&u))?;
    let layer = (0..u.len())
        .filter(|&n| rebuilt.get(n as i64).re != u.get(n).norm())
        .count();
    checks.push(Check::count("layer-cake-round-trip", layer));

    for p in [1.0, 1.5, 2.0, 3.0] {
        let pair = Pair::equal(lp_norm(&u, p)?, lp_norm(&sorted, p)?);
        checks.push(Check::relative(
            format!("lp-preservation-p{}", num(p)),
            pair,
            1e-12,
        ));
    }

    let hl = hardy_littlewood_pair(&u, &v);
    checks.push(Check::pair("hardy-littlewood", hl, 1e-12));
    let width = u.len().max(v.len());
    if width <= 7 {
        let a: Vec<f64> = (0..width).map(|n| u.get(n).norm()).collect();
        let b: Vec<f64> = (0..width).map(|n| v.get(n).norm()).collect();
        let brute = (0..width)
            .permutations(width)
            .map(|s| a.iter().zip(&s).map(|(x, &j)| x * b[j]).sum::<f64>())
            .fold(0.0, f64::max);
        checks.push(Check::pair(
            "hardy-littlewood-brute-force",
            Pair::equal(hl.rhs, brute),
            1e-12,
        ));
    }

    for p in [1.0, 2.0, 3.0] {
        checks.push(Check::pair(
            format!("lp-contraction-p{}", num(p)),
            lp_contraction_pair(&u, &v, p)?,
            1e-12,
        ));
    }
    Ok(Outcome {
        input: json!({ "u": half_json(&u), "v": half_json(&v) }),
        checks,
        refined: false,
    })
}

fn random_table(rng: &mut ChaCha20Rng, len: usize) -> Result<Weight> {
    let mut w = rng.gen_range(0.1..=1.0);
    let mut values = Vec::with_capacity(len);
    for _ in 0..len {
        values.push(w);
        if rng.gen_bool(0.7) {
            w += rng.gen_range(0.0..=1.0);
        }
    }
    Weight::table(values)
}

fn decreasing_ps(
    config: &TrialConfig,
    kind: GeneratorKind,
    rng: &mut ChaCha20Rng,
) -> Result<Outcome> {
    let u = half_line(config, kind, rng);
    let sorted_input = u.abs() == decreasing_rearrangement(&u);
    let exponent = rng.gen_range(0.0..=3.0);
    let weights = [
        ("unit", Weight::unit(), true),
        ("power", Weight::power(exponent), false),
        ("table", random_table(rng, u.len() + 2)?, true),
    ];
    let mut checks = Vec::new();
    for p in config.p_or(&[1.0, 2.0, 3.0]) {
        for (name, w, positive) in &weights {
            let pair = weighted_ps_pair(&u, w, p)?;
            let scale = 1.0 + pair.lhs.abs();
            checks.push(Check::scaled(
                format!("weighted-polya-szego-{name}-p{}", num(p)),
                pair,
                scale,
                1e-12,
            ));
            if *positive {
                if !sorted_input {
                    checks.push(Check::strict(
                        format!("strict-margin-{name}-p{}", num(p)),
                        pair,
                    ));
                }
                let diag = ps_equality_witness(&u, w, p, 1e-9)?;
                checks.push(Check::count(
                    format!("equality-witness-{name}-p{}", num(p)),
                    usize::from(diag.kind == EqualityKind::Violation),
                ));
            }
        }
    }
    Ok(Outcome {
        input: json!({ "u": half_json(&u), "power_exponent": exponent, "table": weights[2].1 }),
        checks,
        refined: false,
    })
}

fn coarea(config: &TrialConfig, kind: GeneratorKind, rng: &mut ChaCha20Rng) -> Result<Outcome> {
    let vertices = rng.gen_range(1..=12);
    let density = rng.gen_range(0.1..=0.9);
    let edges: Vec<(usize, usize)> = (0..vertices)
        .tuple_combinations()
        .filter(|_| rng.gen_bool(density))
        .collect();
    let g = FiniteGraph::new(vertices, edges)?;
    let mut u: Vec<f64> = generate(kind, rng, vertices, config.bound)
        .into_iter()
        .map(|z| z.norm())
        .collect();
    u.resize(vertices, 0.0);
    u.shuffle(rng);
    let mut checks = Vec::new();
    for p in config.p_or(&[1.0, 2.0, 3.0]) {
        checks.push(Check::pair(
            format!("coarea-p{}", num(p)),
            coarea_both_sides(&g, &u, p)?,
            1e-10,
        ));
    }
    Ok(Outcome {
        input: json!({ "graph": g, "u": u }),
        checks,
        refined: false,
    })
}

fn correlation(a: &LatticeSequence, b: &LatticeSequence) -> C64 {
    a.range().map(|n| a.get(n) * b.get(n).conj()).sum()
}

const ORDERS: [(Order, &str); 2] = [(Order::Even, "even"), (Order::Odd, "odd")];

fn spectral_checks(
    u: &LatticeSequence,
    ks: std::ops::RangeInclusive<u32>,
    grid: usize,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in ks {
        for (order, name) in ORDERS {
            let pair = spectral_energy(u, k, order, grid)?;
            out.push(Check::relative(
                format!("spectral-equivalence-k{k}-{name}"),
                pair,
                1e-8,
            ));
        }
    }
    Ok(out)
}

fn fourier_basic(
    config: &TrialConfig,
    kind: GeneratorKind,
    rng: &mut ChaCha20Rng,
    params: &FourierParams,
) -> Result<Outcome> {
    let u = lattice(config, kind, rng);
    let v = lattice(config, kind, rng);
    let ru = fourier_rearrange(&u, params)?;
    let rv = fourier_rearrange(&v, params)?;
    let n_max = params.n_max as i64;
    let energy = u.energy();
    let mut checks = vec![Check::scaled(
        "parseval",
        Pair::equal(energy, ru.retained_energy),
        energy,
        params.tail_tol,
    )];
    let asymmetric = (0..=n_max)
        .filter(|&n| ru.sequence.get(n) != ru.sequence.get(-n) || ru.sequence.get(n).im != 0.0)
        .count();
    checks.push(Check::count("radial-real", asymmetric));
    let peak = (1..=n_max).map(|n| ru.get(n).abs()).fold(0.0, f64::max);
    checks.push(Check::pair(
        "max-at-origin",
        Pair::at_most(peak, ru.get(0)),
        1e-12,
    ));
    checks.push(Check::pair(
        "hardy-littlewood",
        Pair::at_most(
            correlation(&u, &v).norm(),
            correlation(&ru.sequence, &rv.sequence).re,
        ),
        1e-6,
    ));
    checks.push(Check::pair(
        "l2-contraction",
        Pair::at_most(ru.sequence.sub(&rv.sequence).energy(), u.sub(&v).energy()),
        1e-6,
    ));
    checks.extend(spectral_checks(&u, 0..=3, params.grid)?);
    Ok(Outcome {
        input: json!({ "u": lattice_json(&u), "v": lattice_json(&v) }),
        checks,
        refined: false,
    })
}

fn fourier_ps(
    config: &TrialConfig,
    kind: GeneratorKind,
    rng: &mut ChaCha20Rng,
    params: &FourierParams,
) -> Result<Outcome> {
    let u = lattice(config, kind, rng);
    let r = fourier_rearrange(&u, params)?;
    let mut checks = Vec::new();
    for k in 0..=2 {
        for (order, name) in ORDERS {
            checks.push(Check::pair(
                format!("polya-szego-k{k}-{name}"),
                ps_fourier_pair_with(&u, &r, k, order),
                1e-8,
            ));
        }
    }
    checks.extend(spectral_checks(&u, 0..=2, params.grid)?);
    Ok(Outcome {
        input: json!({ "u": lattice_json(&u) }),
        checks,
        refined: false,
    })
}

fn symbols() -> Vec<(&'static str, MultiplierSymbol)> {
    vec![
        ("abs-x", MultiplierSymbol::abs_x()),
        ("difference", MultiplierSymbol::difference()),
        ("constant", MultiplierSymbol::constant(1.0)),
        ("x-squared", MultiplierSymbol::real(|x| x * x)),
        (
            "sin-cubed",
            MultiplierSymbol::real(|x| (x / 2.0).sin().abs().powi(3)),
        ),
    ]
}

fn fourier_multiplier(
    config: &TrialConfig,
    kind: GeneratorKind,
    rng: &mut ChaCha20Rng,
    params: &FourierParams,
) -> Result<Outcome> {
    let u = lattice(config, kind, rng);
    let r = fourier_rearrange(&u, params)?;
    let mut checks = Vec::new();
    for (name, omega) in symbols() {
        let mods = omega.validate_on_grid(params.grid)?;
        let pair = multiplier_pair_on_grid(&r.spectrum, &r.sharp_spectrum, &mods);
        checks.push(Check::pair(format!("multiplier-{name}"), pair, 1e-8));
    }
    let f = GridFunction::from_real(&r.spectrum.moduli())?;
    let claim = increasing_weight_claim(&f, &MultiplierSymbol::abs_x())?;
    let allowed = Pair {
        margin: claim.pair.margin + claim.tolerance,
        ..claim.pair
    };
    checks.push(Check::pair("increasing-weight-claim", allowed, 0.0));
    Ok(Outcome {
        input: json!({ "u": lattice_json(&u) }),
        checks,
        refined: false,
    })
}

/// Between 1 and 10 indices drawn from the support of `u` padded by 8 on
/// each side, so the window always has room for 10.
fn random_set(u: &LatticeSequence, rng: &mut ChaCha20Rng) -> BTreeSet<i64> {
    let size = rng.gen_range(1..=10usize);
    let (lo, hi) = (u.offset() - 8, u.offset() + u.width() as i64 + 8);
    let mut e = BTreeSet::new();
    while e.len() < size {
        e.insert(rng.gen_range(lo..hi));
    }
    e
}

/// Indices of the `k` largest moduli, the set maximizing `Σ_E |u|²` for its size.
fn top_set(u: &LatticeSequence, k: usize) -> BTreeSet<i64> {
    let mut idx: Vec<i64> = u.range().collect();
    idx.sort_by(|&a, &b| u.get(b).norm().total_cmp(&u.get(a).norm()).then(a.cmp(&b)));
    idx.into_iter().take(k).collect()
}

fn concentration(
    config: &TrialConfig,
    kind: GeneratorKind,
    rng: &mut ChaCha20Rng,
    params: &FourierParams,
) -> Result<Outcome> {
    let u = lattice(config, kind, rng);
    let r = fourier_rearrange(&u, params)?;
    let e = random_set(&u, rng);
    let cr = concentration_ratio_with(&u, &r, &e, params.n_max)?;
    let mut checks = vec![Check::estimate(
        "concentration-ratio",
        cr.lhs,
        cr.rhs_unscaled,
        cr.ratio,
    )];

    let big_r = rng.gen_range(1..=64u32);
    let x = PI / big_r as f64 * (1.0 - rng.gen::<f64>());
    let fejer = fejer_kernel_transform_check(big_r, x)?;
    checks.push(Check::relative(
        "fejer-closed-form",
        Pair::equal(fejer.direct, fejer.closed_form),
        1e-10,
    ));
    checks.push(Check::pair(
        "fejer-lower-bound",
        Pair::at_least(fejer.closed_form, fejer.lower_bound),
        1e-12,
    ));
    Ok(Outcome {
        input: json!({ "u": lattice_json(&u), "set": e, "fejer_r": big_r, "fejer_x": x }),
        checks,
        refined: false,
    })
}

fn convexity(
    config: &TrialConfig,
    kind: GeneratorKind,
    rng: &mut ChaCha20Rng,
    params: &FourierParams,
) -> Result<Outcome> {
    let u = lattice(config, kind, rng);
    let r = fourier_rearrange(&u, params)?;
    let a: Vec<f64> = u.values().iter().map(|z| z.norm()).collect();
    let b: Vec<f64> = r.sequence.values().iter().map(|z| z.norm()).collect();
    let mut checks = Vec::new();
    for p in config.p_or(&[3.0, 4.0, 6.0]) {
        let c = convex_lp_minimal_constant_with(&u, &r, p)?;
        checks.push(Check::estimate(
            format!("convex-constant-p{}", num(p)),
            c,
            c,
            c,
        ));
        let linear = minimal_convex_constant(&a, &b, |t| t.powf(p))?;
        checks.push(Check::relative(
            format!("convex-constant-bisection-p{}", num(p)),
            Pair::equal(c, linear * linear),
            1e-9,
        ));
    }
    Ok(Outcome {
        input: json!({ "u": lattice_json(&u) }),
        checks,
        refined: false,
    })
}

fn symmetric_check(report: PropertyReport, energy: f64) -> Check {
    let pair = Pair {
        lhs: report.lhs,
        rhs: report.rhs,
        margin: report.margin,
    };
    let name = report.property.clone();
    match name.as_str() {
        "l2-preservation" => Check::scaled(name, pair, energy, L2_TOL),
        "l2-permutation-identity" => Check::scaled(name, pair, 1.0 + pair.lhs.abs(), 1e-12),
        "polya-szego-reflected-step" => Check::scaled(name, pair, 1.0 + pair.lhs.abs(), 1e-10),
        "polya-szego" | "polya-szego-fourier-step" => Check::pair(name, pair, 1e-8),
        "lp-constant" => Check::estimate(
            name,
            pair.lhs,
            pair.rhs,
            report.constant.unwrap_or(f64::NAN),
        ),
        "radial-decreasing" => Check::count(name, usize::from(!report.pass)),
        _ => Check::pair(name, pair, L2_TOL),
    }
}

fn symmetric(
    config: &TrialConfig,
    kind: GeneratorKind,
    rng: &mut ChaCha20Rng,
    params: &FourierParams,
) -> Result<Outcome> {
    let u = lattice(config, kind, rng);
    let v = lattice(config, kind, rng);
    let p = config.p_or(&[4.0])[0];
    let su = symmetric_rearrange(&u, params)?;
    let sv = symmetric_rearrange(&v, params)?;
    let energy = u.energy();
    let checks = sds_reports(&u, &v, &su, &sv, p, params)?
        .into_iter()
        .map(|r| symmetric_check(r, energy))
        .collect();
    Ok(Outcome {
        input: json!({ "u": lattice_json(&u), "v": lattice_json(&v), "p": p }),
        checks,
        refined: false,
    })
}

fn hardy_alphas(config: &TrialConfig) -> Vec<f64> {
    config
        .alpha
        .map_or_else(|| vec![1.1, 1.5, 2.0], |a| vec![a])
}

fn hardy(config: &TrialConfig, kind: GeneratorKind, rng: &mut ChaCha20Rng) -> Result<Outcome> {
    let mut values: Vec<f64> = generate(kind, rng, config.max_support, config.bound)
        .into_iter()
        .map(|z| z.norm())
        .collect();
    let peak = (0..values.len())
        .max_by(|&i, &j| values[i].total_cmp(&values[j]))
        .unwrap_or(0);
    values.swap(0, peak);
    let u = HalfLineSequence::from_real(&values);
    let mut checks = Vec::new();
    for alpha in hardy_alphas(config) {
        let suffix = format!("a{}", num(alpha));
        let hp = hardy_pair(&u, alpha)?;
        let mut check = Check::pair(
            format!("hardy-ratio-{suffix}"),
            Pair::at_least(hp.lhs, hardy_constant(alpha) * hp.mass),
            1e-12,
        );
        check.constant = hp.ratio.is_finite().then_some(hp.ratio);
        checks.push(check);
        for link in hardy_chain_report(&u, alpha, false)? {
            let pair = Pair {
                lhs: link.lhs,
                rhs: link.rhs,
                margin: link.margin,
            };
            if link.property != "hardy-ratio" {
                checks.push(Check::pair(
                    format!("{}-{suffix}", link.property),
                    pair,
                    1e-12,
                ));
            }
        }
    }
    Ok(Outcome {
        input: json!({ "u": half_json(&u) }),
        checks,
        refined: false,
    })
}

fn counterexample_cases() -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for alpha in [1.0, 2.0] {
        for delta in [alpha / 8.0, alpha / 4.0, 3.0 * alpha / 8.0] {
            let e = laplacian_counterexample(alpha, delta)?;
            let c = laplacian_counterexample_closed_forms(alpha, delta);
            out.push(Outcome {
                input: json!({ "alpha": alpha, "delta": delta }),
                checks: vec![
                    Check::strict(
                        "laplacian-rearranged-larger",
                        Pair::at_least(e.energy_rearranged, e.energy_u),
                    ),
                    Check::relative(
                        "laplacian-closed-form-u",
                        Pair::equal(e.energy_u, c.energy_u),
                        1e-12,
                    ),
                    Check::relative(
                        "laplacian-closed-form-rearranged",
                        Pair::equal(e.energy_rearranged, c.energy_rearranged),
                        1e-12,
                    ),
                ],
                refined: false,
            });
        }
        let e = laplacian_counterexample(alpha, alpha / 2.0)?;
        let c = laplacian_counterexample_closed_forms(alpha, alpha / 2.0);
        out.push(Outcome {
            input: json!({ "alpha": alpha, "delta": alpha / 2.0 }),
            checks: vec![
                Check::relative(
                    "laplacian-boundary-closed-forms",
                    Pair::equal(c.energy_u, c.energy_rearranged),
                    1e-12,
                ),
                Check::relative(
                    "laplacian-boundary-energies",
                    Pair::equal(e.energy_u, e.energy_rearranged),
                    1e-12,
                ),
            ],
            refined: false,
        });
    }
    let n_max = 200;
    let w = weighted_failure_evidence(1.0, 5.0, n_max)?;
    let crossing = w.crossing.map_or((n_max + 1) as f64, |n| n as f64);
    out.push(Outcome {
        input: json!({ "beta": 1.0, "alpha": 5.0, "n_max": n_max }),
        checks: vec![
            Check::pair(
                "weighted-failure-crossing",
                Pair::at_most(crossing, n_max as f64),
                0.0,
            ),
            Check::pair(
                "weighted-failure-slope",
                Pair::at_most((w.tail_slope - 1.0).abs(), 0.1),
                0.0,
            ),
        ],
        refined: false,
    });
    Ok(out)
}

fn identity_cases(params: &FourierParams) -> Result<Vec<Outcome>> {
    let n = 1000;
    let s = sum_identity_partial(n);
    let target = PI * PI / 8.0;
    let sums = Outcome {
        input: json!({ "n_max": n }),
        checks: vec![
            Check::pair("sum-identity", Pair::equal(s, target), 1e-9),
            Check::pair(
                "sum-identity-tail-bound",
                Pair::at_most(target - s, sum_identity_tail_bound(n)),
                1e-15,
            ),
        ],
        refined: false,
    };
    let u = LatticeSequence::from_real(0, &[1.0, 1.0]);
    let r = fourier_rearrange(&u, params)?;
    let err = (-20..=20i64)
        .map(|n| (r.get(n) - two_point_sharp(1.0, n)).abs())
        .fold(0.0, f64::max);
    let x = 0.7;
    let direct = evaluate_transform(&u, x).norm();
    let closed = 2.0 * (x / 2.0).cos() / (2.0 * PI).sqrt();
    let two_point = Outcome {
        input: json!({ "u": lattice_json(&u), "grid": params.grid, "n_max": params.n_max }),
        checks: vec![
            Check::pair("two-point-closed-form", Pair::at_most(err, 1e-6), 0.0),
            Check::pair("two-point-transform", Pair::equal(direct, closed), 1e-14),
        ],
        refined: false,
    };
    Ok(vec![sums, two_point])
}

fn evaluate(
    config: &TrialConfig,
    trial: usize,
    rng: &mut ChaCha20Rng,
    params: &FourierParams,
) -> Result<Outcome> {
    let kind = config.kind(trial);
    match config.suite {
        Suite::DecreasingBasic => decreasing_basic(config, kind, rng),
        Suite::DecreasingPs => decreasing_ps(config, kind, rng),
        Suite::Coarea => coarea(config, kind, rng),
        Suite::FourierBasic => fourier_basic(config, kind, rng, params),
        Suite::FourierPs => fourier_ps(config, kind, rng, params),
        Suite::FourierMultiplier => fourier_multiplier(config, kind, rng, params),
        Suite::Concentration => concentration(config, kind, rng, params),
        Suite::Convexity => convexity(config, kind, rng, params),
        Suite::Symmetric => symmetric(config, kind, rng, params),
        Suite::Hardy => hardy(config, kind, rng),
        Suite::Counterexamples | Suite::Identities => {
            unreachable!("fixed suites have no random trials")
        }
    }
}

fn fails(config: &TrialConfig, outcome: &Outcome) -> bool {
    outcome
        .checks
        .iter()
        .any(|c| !(c.margin >= -config.tolerance(&c.property, c.tolerance)))
}

/// Grid suites get one retry on the doubled grid, with the same inputs.
fn run_trial(config: &TrialConfig, trial: usize) -> Result<Outcome> {
    let rng = trial_rng(config.seed, trial);
    let first = evaluate(config, trial, &mut rng.clone(), &config.params);
    if !config.suite.uses_grid() {
        return first;
    }
    match first {
        Ok(o) if !fails(config, &o) => Ok(o),
        Ok(_) | Err(Error::TailResidual { .. }) => {
            let mut o = evaluate(config, trial, &mut rng.clone(), &config.params.refined())?;
            o.refined = true;
            Ok(o)
        }
        Err(e) => Err(e),
    }
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn aggregate(config: &TrialConfig, outcomes: Vec<Outcome>) -> Vec<InequalityReport> {
    let mut order: Vec<String> = Vec::new();
    let mut by_name: HashMap<String, InequalityReport> = HashMap::new();
    let mut worst: HashMap<String, usize> = HashMap::new();
    for (trial, outcome) in outcomes.iter().enumerate() {
        for c in &outcome.checks {
            let tolerance = config.tolerance(&c.property, c.tolerance);
            let report = by_name.entry(c.property.clone()).or_insert_with(|| {
                order.push(c.property.clone());
                InequalityReport {
                    suite: config.suite,
                    property: c.property.clone(),
                    tolerance,
                    min_margin: None,
                    pass: true,
                    min_constant: None,
                    max_constant: None,
                    worst_trial: None,
                    worst_input: None,
                    trials: Vec::new(),
                }
            });
            let pass = c.margin >= -tolerance;
            if report.min_margin.is_none_or(|m| c.margin < m)
                || c.margin.is_nan() && report.worst_trial.is_none()
            {
                report.min_margin = Some(c.margin);
                report.worst_trial = Some(trial);
                worst.insert(c.property.clone(), trial);
            }
            if let Some(k) = c.constant {
                report.min_constant = Some(report.min_constant.map_or(k, |m| m.min(k)));
                report.max_constant = Some(report.max_constant.map_or(k, |m| m.max(k)));
            }
            report.pass &= pass;
            report.trials.push(TrialRecord {
                trial,
                lhs: c.lhs,
                rhs: c.rhs,
                margin: c.margin,
                pass,
                constant: c.constant,
                refined: outcome.refined,
            });
        }
    }
    order
        .into_iter()
        .map(|name| {
            let mut r = by_name
                .remove(&name)
                .expect("every ordered name has a report");
            r.worst_input = worst.get(&name).map(|&t| outcomes[t].input.clone());
            r
        })
        .collect()
}

/// Runs every trial of the configured suite and aggregates per property.
pub fn run_suite(config: &TrialConfig) -> Result<Vec<InequalityReport>> {
    config.validate()?;
    let outcomes = match config.suite {
        Suite::Counterexamples => counterexample_cases()?,
        Suite::Identities => identity_cases(&config.params)?,
        _ => in_pool(config.jobs, || {
            (0..config.trials)
                .into_par_iter()
                .map(|i| run_trial(config, i))
                .collect::<Result<Vec<_>>>()
        })??,
    };
    Ok(aggregate(config, outcomes))
}

pub fn all_pass(reports: &[InequalityReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// A reported constant together with the input that attains it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub value: f64,
    /// `None` for the `δ₀` baseline.
    pub trial: Option<usize>,
    pub input: SequenceJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<BTreeSet<i64>>,
}

impl Witness {
    pub fn sequence(&self) -> LatticeSequence {
        self.input.clone().into()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimates {
    pub trials: usize,
    pub seed: u64,
    pub params: FourierParams,
    pub c_concentration: Witness,
    /// Keyed by the exponent as written.
    pub c_p: BTreeMap<String, Witness>,
}

struct ConstantTrial {
    u: LatticeSequence,
    set: BTreeSet<i64>,
    concentration: f64,
    convex: Vec<f64>,
}

fn constants_for(
    u: LatticeSequence,
    set: BTreeSet<i64>,
    ps: &[f64],
    params: &FourierParams,
) -> Result<ConstantTrial> {
    let r = fourier_rearrange(&u, params)?;
    let concentration = concentration_ratio_with(&u, &r, &set, params.n_max)?.ratio;
    let convex = ps
        .iter()
        .map(|&p| convex_lp_minimal_constant_with(&u, &r, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstantTrial {
        u,
        set,
        concentration,
        convex,
    })
}

fn constant_trial(config: &TrialConfig, trial: usize, ps: &[f64]) -> Option<ConstantTrial> {
    let mut rng = trial_rng(config.seed, trial);
    let kind = config.kind(trial);
    let u = lattice(config, kind, &mut rng);
    let set = top_set(&u, rng.gen_range(1..=u.width().min(10)));
    constants_for(u, set, ps, &config.params).ok()
}

pub const DEFAULT_CONSTANT_P: [f64; 3] = [3.0, 4.0, 6.0];

/// Maxima of the concentration ratio and of the minimal convexity constant
/// over a `δ₀` baseline plus the seeded trials.
///
/// Trials whose evaluation is degenerate are skipped; ties keep the earliest
/// trial, so adding trials never lowers an estimate.
pub fn estimate_constants(config: &TrialConfig) -> Result<ConstantEstimates> {
    config.validate()?;
    config.params.validate()?;
    let ps = config.p_or(&DEFAULT_CONSTANT_P);
    if let Some(&p) = ps.iter().find(|&&p| !(p > 2.0)) {
        return Err(Error::ExponentNotAboveTwo(p));
    }
    let baseline = constants_for(
        LatticeSequence::delta(0),
        BTreeSet::from([0]),
        &ps,
        &config.params,
    )?;
    let trials: Vec<Option<ConstantTrial>> = in_pool(config.jobs, || {
        (0..config.trials)
            .into_par_iter()
            .map(|i| constant_trial(config, i, &ps))
            .collect()
    })?;
    let all = std::iter::once((None, &baseline)).chain(
        trials
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.as_ref().map(|t| (Some(i), t))),
    );

    let mut best_c = (None, &baseline, baseline.concentration);
    let mut best_p: Vec<(Option<usize>, &ConstantTrial, f64)> = baseline
        .convex
        .iter()
        .map(|&c| (None, &baseline, c))
        .collect();
    for (i, t) in all.skip(1) {
        if t.concentration > best_c.2 {
            best_c = (i, t, t.concentration);
        }
        for (slot, &c) in best_p.iter_mut().zip(&t.convex) {
            if c > slot.2 {
                *slot = (i, t, c);
            }
        }
    }
    let witness =
        |(trial, t, value): (Option<usize>, &ConstantTrial, f64), with_set: bool| Witness {
            value,
            trial,
            input: SequenceJson::from(&t.u),
            set: with_set.then(|| t.set.clone()),
        };
    Ok(ConstantEstimates {
        trials: config.trials,
        seed: config.seed,
        params: config.params,
        c_concentration: witness(best_c, true),
        c_p: ps
            .iter()
            .zip(best_p)
            .map(|(&p, b)| (num(p), witness(b, false)))
            .collect(),
    })
}

/// Recomputes a concentration witness from its echoed input.
pub fn reevaluate_concentration(w: &Witness, params: &FourierParams) -> Result<f64> {
    let u = w.sequence();
    let set = w.set.clone().unwrap_or_else(|| BTreeSet::from([0]));
    let r: FourierRearrangement = fourier_rearrange(&u, params)?;
    Ok(concentration_ratio_with(&u, &r, &set, params.n_max)?.ratio)
}

/// Recomputes a convexity witness from its echoed input.
pub fn reevaluate_convex(w: &Witness, p: f64, params: &FourierParams) -> Result<f64> {
    let u = w.sequence();
    let r = fourier_rearrange(&u, params)?;
    convex_lp_minimal_constant_with(&u, &r, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(suite: Suite, trials: usize) -> TrialConfig {
        TrialConfig {
            trials,
            ..TrialConfig::new(suite)
        }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{s}\""));
        }
        for g in GeneratorKind::ALL {
            assert_eq!(g.name().parse::<GeneratorKind>().unwrap(), g);
        }
        assert!(matches!(
            "nope".parse::<Suite>(),
            Err(Error::UnknownSuite(_))
        ));
        assert!(matches!(
            "nope".parse::<GeneratorKind>(),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn generators_respect_bounds() {
        for trial in 0..200 {
            let mut rng = trial_rng(3, trial);
            let d = generate(GeneratorKind::Decreasing, &mut rng, 40, 2.0);
            assert!(d.windows(2).all(|w| w[0].re >= w[1].re) && d.iter().all(|z| z.re >= 0.0));
            let c = generate(GeneratorKind::Complex, &mut rng, 40, 2.0);
            assert!(c.iter().all(|z| z.norm() <= 2.0));
            let s = generate(GeneratorKind::Sparse, &mut rng, 200, 1.0);
            assert!(s.len() <= 64 && s.iter().filter(|z| z.re != 0.0).count() <= 8);
            for kind in GeneratorKind::ALL {
                let v = generate(kind, &mut rng, 30, 1.0);
                assert!(
                    !v.is_empty() && v.len() <= 30 && v.iter().all(|z| z.norm() <= 1.0 + 1e-15)
                );
            }
        }
    }

    #[test]
    fn trial_streams_are_independent_of_order() {
        let a: Vec<f64> = (0..5).map(|i| trial_rng(9, i).gen()).collect();
        let b: Vec<f64> = (0..5).rev().map(|i| trial_rng(9, i).gen()).collect();
        assert_eq!(a, b.into_iter().rev().collect::<Vec<_>>());
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn invalid_bounds_rejected() {
        let mut c = config(Suite::DecreasingBasic, 1);
        c.max_support = 0;
        assert!(matches!(
            run_suite(&c),
            Err(Error::InvalidGeneratorBounds(_))
        ));
        c.max_support = 8;
        c.bound = -1.0;
        assert!(matches!(
            run_suite(&c),
            Err(Error::InvalidGeneratorBounds(_))
        ));
    }

    #[test]
    fn empty_run_passes() {
        let r = run_suite(&config(Suite::DecreasingBasic, 0)).unwrap();
        assert!(r.is_empty() && all_pass(&r));
    }

    #[test]
    fn identities_suite() {
        let r = run_suite(&config(Suite::Identities, 0)).unwrap();
        let sum = r.iter().find(|x| x.property == "sum-identity").unwrap();
        assert!(sum.pass && (sum.trials[0].lhs - PI * PI / 8.0).abs() <= 1e-9);
        assert!(all_pass(&r), "{r:#?}");
    }

    #[test]
    fn counterexamples_suite() {
        let r = run_suite(&config(Suite::Counterexamples, 0)).unwrap();
        assert!(all_pass(&r), "{r:#?}");
        let strict = r
            .iter()
            .find(|x| x.property == "laplacian-rearranged-larger")
            .unwrap();
        assert_eq!(strict.trials.len(), 6);
        assert!(strict.min_margin.unwrap() > 0.0);
    }

    #[test]
    fn small_runs_pass() {
        for suite in Suite::ALL {
            let r = run_suite(&config(suite, 10)).unwrap();
            assert!(
                all_pass(&r),
                "{suite}: {:#?}",
                r.iter().filter(|x| !x.pass).collect::<Vec<_>>()
            );
            for rep in &r {
                assert_eq!(rep.pass, rep.min_margin.is_none_or(|m| m >= -rep.tolerance));
            }
        }
    }

    #[test]
    fn tolerance_overrides() {
        let mut c = config(Suite::DecreasingPs, 20);
        c.tolerances.insert("*".into(), 0.5);
        let r = run_suite(&c).unwrap();
        assert!(r
            .iter()
            .filter(|x| x.property.starts_with("weighted"))
            .all(|x| x.tolerance == 0.5));
        assert!(r
            .iter()
            .filter(|x| x.property.starts_with("strict"))
            .all(|x| x.tolerance < 0.0));
    }

    #[test]
    fn deterministic_across_jobs() {
        let mut c = config(Suite::DecreasingPs, 40);
        c.jobs = 1;
        let a = run_suite(&c).unwrap();
        c.jobs = 4;
        let b = run_suite(&c).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn constants_baseline() {
        let e = estimate_constants(&config(Suite::Concentration, 0)).unwrap();
        assert!((e.c_concentration.value - 1.0).abs() < 1e-12);
        assert_eq!(e.c_concentration.trial, None);
        for p in ["3", "4", "6"] {
            assert!((e.c_p[p].value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constants_are_witnessed_and_monotone() {
        let small = estimate_constants(&config(Suite::Concentration, 20)).unwrap();
        let large = estimate_constants(&config(Suite::Concentration, 40)).unwrap();
        assert!(large.c_concentration.value >= small.c_concentration.value);
        for (p, w) in &large.c_p {
            assert!(w.value >= small.c_p[p].value);
            let again = reevaluate_convex(w, p.parse().unwrap(), &large.params).unwrap();
            assert!((again - w.value).abs() <= 1e-12);
        }
        let again = reevaluate_concentration(&large.c_concentration, &large.params).unwrap();
        assert!((again - large.c_concentration.value).abs() <= 1e-12);
    }

    #[test]
    fn constants_reject_small_p() {
        let mut c = config(Suite::Concentration, 0);
        c.p_values = vec![2.0];
        assert_eq!(
            estimate_constants(&c).unwrap_err(),
            Error::ExponentNotAboveTwo(2.0)
        );
    }
}
