//! Midpoint grid on (−π, π), the transforms to and from it, and the
//! discrete symmetric-decreasing rearrangement of grid samples.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::sequence::{FiniteSupport, LatticeSequence, C64};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// `(2π)^{-1/2}`.
pub const FOURIER_NORM: f64 = 0.398_942_280_401_432_7;

fn check_grid_size(m: usize) -> Result<()> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::InvalidGridSize(m));
    }
    Ok(())
}

/// Node `x_j = −π + (j + ½)·2π/M`, computed so that `x_{M−1−j} = −x_j` bit-exactly.
pub fn node(j: usize, m: usize) -> f64 {
    let h = 2.0 * PI / m as f64;
    let half = m / 2;
    if j >= half {
        ((j - half) as f64 + 0.5) * h
    } else {
        -(((m - 1 - j) - half) as f64 + 0.5) * h
    }
}

/// Grid index of the pair at the `k`-th smallest `|x|`: `(negative, positive)`.
pub fn pair_nodes(k: usize, m: usize) -> (usize, usize) {
    (m / 2 - 1 - k, m / 2 + k)
}

/// Samples on the `M` midpoint nodes of (−π, π).
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    samples: Vec<C64>,
    even: bool,
}

impl GridFunction {
    pub fn new(samples: Vec<C64>) -> Result<Self> {
        check_grid_size(samples.len())?;
        Ok(Self {
            samples,
            even: false,
        })
    }

    pub fn from_real(samples: &[f64]) -> Result<Self> {
        Self::new(samples.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(m: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        check_grid_size(m)?;
        Ok(Self {
            samples: (0..m).map(|j| f(node(j, m))).collect(),
            even: false,
        })
    }

    /// Sets the even flag after confirming `samples(j) = samples(M−1−j)` exactly.
    pub fn into_even(mut self) -> Result<Self> {
        let m = self.size();
        if (0..m / 2).any(|j| self.samples[j] != self.samples[m - 1 - j]) {
            return Err(Error::InvalidParameter("samples are not even".into()));
        }
        self.even = true;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.size() as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        node(j, self.size())
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    /// Midpoint rule for `∫ g(x) |f(x)|² dx`.
    pub fn weighted_energy(&self, g: impl Fn(f64) -> f64) -> f64 {
        let h = self.spacing();
        h * self
            .samples
            .iter()
            .enumerate()
            .map(|(j, z)| g(self.node(j)) * z.norm_sqr())
            .sum::<f64>()
    }

    /// Midpoint rule for `∫ |f|²`.
    pub fn energy(&self) -> f64 {
        self.spacing() * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// `|f|` even and nonincreasing in `|x|` over node pairs, up to `rel_tol`.
    pub fn modulus_is_symmetric_decreasing(&self, rel_tol: f64) -> bool {
        let m = self.size();
        let mods = self.moduli();
        let scale = mods.iter().copied().fold(0.0, f64::max);
        let slack = rel_tol * scale;
        let mut prev = f64::INFINITY;
        for k in 0..m / 2 {
            let (a, b) = pair_nodes(k, m);
            if (mods[a] - mods[b]).abs() > slack {
                return false;
            }
            let v = mods[a].max(mods[b]);
            if v > prev + slack {
                return false;
            }
            prev = v;
        }
        true
    }

    /// CSV with header `x,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re,im\n");
        for (j, z) in self.samples.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", self.node(j), z.re, z.im);
        }
        out
    }
}

/// Samples `F(u)(x) = (2π)^{-1/2} Σ u(n) e^{−inx}` at the `M` nodes.
///
/// Indices are folded modulo `M` before a single FFT, which is exact at the
/// nodes for any support width.
pub fn forward_transform(u: &LatticeSequence, m: usize) -> Result<GridFunction> {
    check_grid_size(m)?;
    let h = 2.0 * PI / m as f64;
    let mut buf = vec![C64::default(); m];
    for (i, &z) in u.stored().iter().enumerate() {
        let n = u.first_index() + i as i64;
        // e^{−in(−π + h/2)} = (−1)^n e^{−inh/2}
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let phase = C64::from_polar(sign, -(n as f64) * h / 2.0);
        buf[n.rem_euclid(m as i64) as usize] += z * phase;
    }
    plan(m, false).process(&mut buf);
    for z in &mut buf {
        *z *= FOURIER_NORM;
    }
    GridFunction::new(buf)
}

/// Direct evaluation of `F(u)(x)` at an arbitrary point.
pub fn evaluate_transform(u: &LatticeSequence, x: f64) -> C64 {
    let mut sum = C64::default();
    for (i, &z) in u.stored().iter().enumerate() {
        let n = (u.first_index() + i as i64) as f64;
        sum += z * C64::from_polar(1.0, -n * x);
    }
    sum * FOURIER_NORM
}

/// Midpoint-rule values of `(2π)^{-1/2} ∫ f(x) e^{inx} dx` for `|n| ≤ n_max`.
///
/// For an even grid function the result is computed for `n ≥ 0`, checked to
/// be real to within `1e−10·max|value|`, and mirrored so `u(−n) = u(n)` exactly.
pub fn inverse_transform(f: &GridFunction, n_max: usize) -> Result<LatticeSequence> {
    let m = f.size();
    if 2 * n_max + 1 > m {
        return Err(Error::InvalidParameter(format!(
            "n_max = {n_max} needs at least {} grid nodes",
            2 * n_max + 1
        )));
    }
    let h = f.spacing();
    let mut buf = f.samples.clone();
    plan(m, true).process(&mut buf);
    let value = |n: i64| -> C64 {
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let phase = C64::from_polar(sign, n as f64 * h / 2.0);
        buf[n.rem_euclid(m as i64) as usize] * phase * (FOURIER_NORM * h)
    };
    let n_max = n_max as i64;
    if !f.even {
        return Ok(LatticeSequence::from_fn(-n_max, n_max + 1, value));
    }
    let half: Vec<C64> = (0..=n_max).map(value).collect();
    let max_mod = half.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let residue = half.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let bound = 1e-10 * max_mod;
    if residue > bound {
        return Err(Error::ImaginaryResidue { residue, bound });
    }
    Ok(LatticeSequence::from_fn(-n_max, n_max + 1, |n| {
        C64::new(half[n.unsigned_abs() as usize].re, 0.0)
    }))
}

/// How sorted moduli are assigned to node pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pairing {
    /// Pair `k` receives `√((s²_{2k} + s²_{2k+1})/2)` at both nodes: exactly
    /// even and exactly energy-preserving.
    #[default]
    RootMeanSquare,
    /// `s_{2k}` at the positive node and `s_{2k+1}` at the negative one:
    /// exactly equimeasurable, even only up to a neighbour gap.
    Direct,
}

/// Discrete symmetric-decreasing rearrangement of `|f|`.
pub fn grid_sdr(f: &GridFunction) -> GridFunction {
    grid_sdr_with(f, Pairing::RootMeanSquare)
}

pub fn grid_sdr_with(f: &GridFunction, pairing: Pairing) -> GridFunction {
    let m = f.size();
    let mut s = f.moduli();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut out = vec![C64::default(); m];
    for k in 0..m / 2 {
        let (neg, pos) = pair_nodes(k, m);
        let (a, b) = (s[2 * k], s[2 * k + 1]);
        match pairing {
            Pairing::RootMeanSquare => {
                let v = C64::new(((a * a + b * b) / 2.0).sqrt(), 0.0);
                out[neg] = v;
                out[pos] = v;
            }
            Pairing::Direct => {
                out[pos] = C64::new(a, 0.0);
                out[neg] = C64::new(b, 0.0);
            }
        }
    }
    let even = pairing == Pairing::RootMeanSquare;
    GridFunction { samples: out, even }
}
