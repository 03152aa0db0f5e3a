//! Decreasing rearrangement on the half-line and the inequalities built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levels::level_decomposition;
use crate::report::Pair;
use crate::sequence::{FiniteSupport, HalfLineSequence};
use crate::weight::Weight;

/// Moduli sorted in nonincreasing order.
pub fn decreasing_rearrangement(u: &HalfLineSequence) -> HalfLineSequence {
    HalfLineSequence::from_real(&sorted_moduli(u.values().iter().map(|z| z.norm())))
}

pub(crate) fn sorted_moduli(it: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut m: Vec<f64> = it.collect();
    m.sort_by(|a, b| b.total_cmp(a));
    m
}

/// `Σ |u||v|` against `Σ ũṽ`; the first never exceeds the second.
pub fn hardy_littlewood_pair(u: &HalfLineSequence, v: &HalfLineSequence) -> Pair {
    let lhs = u
        .values()
        .iter()
        .zip(v.values())
        .map(|(a, b)| a.norm() * b.norm())
        .sum();
    let su = sorted_moduli(u.values().iter().map(|z| z.norm()));
    let sv = sorted_moduli(v.values().iter().map(|z| z.norm()));
    let rhs = su.iter().zip(&sv).map(|(a, b)| a * b).sum();
    Pair::at_most(lhs, rhs)
}

/// `Σ |ũ - ṽ|^p` against `Σ ||u| - |v||^p`.
pub fn lp_contraction_pair(u: &HalfLineSequence, v: &HalfLineSequence, p: f64) -> Result<Pair> {
    if !(p >= 1.0) {
        return Err(Error::ExponentBelowOne(p));
    }
    let n = u.len().max(v.len());
    let rhs = (0..n)
        .map(|i| (u.get(i).norm() - v.get(i).norm()).abs().powf(p))
        .sum();
    let su = decreasing_rearrangement(u);
    let sv = decreasing_rearrangement(v);
    let lhs = (0..n)
        .map(|i| (su.get(i).re - sv.get(i).re).abs().powf(p))
        .sum();
    Ok(Pair::at_most(lhs, rhs))
}

/// Finite simple graph on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct FiniteGraph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for FiniteGraph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        FiniteGraph::new(g.vertices, g.edges.into_iter().map(|[x, y]| (x, y)))
    }
}

impl From<FiniteGraph> for GraphJson {
    fn from(g: FiniteGraph) -> Self {
        GraphJson {
            vertices: g.vertices,
            edges: g.edges.into_iter().map(|(x, y)| [x, y]).collect(),
        }
    }
}

impl FiniteGraph {
    /// Edges are unordered; each is stored with the smaller endpoint first.
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidParameter("graph needs a vertex".into()));
        }
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (x, y) in edges {
            if x == y {
                return Err(Error::InvalidEdge((x, y), "self-loop"));
            }
            if x >= vertices || y >= vertices {
                return Err(Error::InvalidEdge((x, y), "endpoint out of range"));
            }
            let e = (x.min(y), x.max(y));
            if out.contains(&e) {
                return Err(Error::InvalidEdge((x, y), "duplicate"));
            }
            out.push(e);
        }
        Ok(Self {
            vertices,
            edges: out,
        })
    }

    /// Path `0 – 1 – … – (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Both sides of the discrete co-area formula for nonnegative `u`.
///
/// The left side counts every edge in both orientations. The level integral
/// on the right is summed exactly over the bands where its integrand is
/// constant.
pub fn coarea_both_sides(g: &FiniteGraph, u: &[f64], p: f64) -> Result<Pair> {
    if !(p >= 1.0) {
        return Err(Error::ExponentBelowOne(p));
    }
    if u.len() != g.vertices {
        return Err(Error::InvalidParameter(format!(
            "{} values for {} vertices",
            u.len(),
            g.vertices
        )));
    }
    if let Some((index, &value)) = u.iter().enumerate().find(|(_, &x)| !(x >= 0.0)) {
        return Err(Error::NegativeEntry { index, value });
    }
    let lhs: f64 = g
        .edges
        .iter()
        .map(|&(x, y)| 2.0 * (u[x] - u[y]).abs().powf(p))
        .sum();

    let d = level_decomposition(&HalfLineSequence::from_real(u));
    let mut inside = vec![false; g.vertices];
    let mut rhs = 0.0;
    for (upper, lower, set) in d.bands() {
        for &n in set {
            inside[n as usize] = true;
        }
        let boundary: f64 = g
            .edges
            .iter()
            .filter(|&&(x, y)| inside[x] != inside[y])
            .map(|&(x, y)| 2.0 * (u[x] - u[y]).abs().powf(p - 1.0))
            .sum();
        rhs += (upper - lower) * boundary;
    }
    Ok(Pair::equal(lhs, rhs))
}

/// `Σ_{n≥0} |u(n) - u(n+1)|^p w(n)`, with `u` extended by zero.
pub fn weighted_difference_energy(u: &[f64], w: &Weight, p: f64) -> f64 {
    (0..u.len())
        .map(|n| {
            let next = u.get(n + 1).copied().unwrap_or(0.0);
            (u[n] - next).abs().powf(p) * w.eval(n)
        })
        .sum()
}

fn complex_difference_energy(u: &HalfLineSequence, w: &Weight, p: f64) -> f64 {
    (0..u.len())
        .map(|n| (u.get(n) - u.get(n + 1)).norm().powf(p) * w.eval(n))
        .sum()
}

/// Weighted Pólya–Szegő: energy of `u` against energy of `ũ`.
pub fn weighted_ps_pair(u: &HalfLineSequence, w: &Weight, p: f64) -> Result<Pair> {
    if !(p >= 1.0) {
        return Err(Error::ExponentBelowOne(p));
    }
    w.check_nondecreasing(u.len() + 1)?;
    let lhs = complex_difference_energy(u, w, p);
    let rhs = weighted_difference_energy(&decreasing_rearrangement(u).real_parts(), w, p);
    Ok(Pair::at_least(lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityKind {
    EqualAndSorted,
    StrictInequality,
    Violation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityDiagnosis {
    pub kind: EqualityKind,
    pub pair: Pair,
}

/// Classifies `u` against the equality case of the weighted inequality.
///
/// Equality (`|lhs - rhs| ≤ tol·(1 + |lhs|)`) forces `|u| = ũ`; anything else
/// must show a strict gap in the right direction.
pub fn ps_equality_witness(
    u: &HalfLineSequence,
    w: &Weight,
    p: f64,
    tol: f64,
) -> Result<EqualityDiagnosis> {
    w.check_positive(u.len() + 1)?;
    let pair = weighted_ps_pair(u, w, p)?;
    let sorted = u.abs() == decreasing_rearrangement(u);
    let slack = tol * (1.0 + pair.lhs.abs());
    let kind = if pair.margin.abs() <= slack {
        if sorted {
            EqualityKind::EqualAndSorted
        } else {
            EqualityKind::Violation
        }
    } else if pair.margin > slack {
        EqualityKind::StrictInequality
    } else {
        EqualityKind::Violation
    };
    Ok(EqualityDiagnosis { kind, pair })
}

/// Half-line Laplacian energy with `Δu(0) = u(0) - u(1)` and
/// `Δu(n) = 2u(n) - u(n-1) - u(n+1)` for `n ≥ 1`.
pub fn half_line_laplacian_energy(u: &[f64]) -> f64 {
    let at = |n: usize| u.get(n).copied().unwrap_or(0.0);
    if u.is_empty() {
        return 0.0;
    }
    let mut sum = (at(0) - at(1)).powi(2);
    for n in 1..=u.len() {
        sum += (2.0 * at(n) - at(n - 1) - at(n + 1)).powi(2);
    }
    sum
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplacianEnergies {
    pub energy_u: f64,
    pub energy_rearranged: f64,
}

/// Laplacian energies of `(α, α + δ, α)` and its decreasing rearrangement.
pub fn laplacian_counterexample(alpha: f64, delta: f64) -> Result<LaplacianEnergies> {
    if !(alpha > 0.0 && delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha}, delta = {delta} must be positive"
        )));
    }
    let u = HalfLineSequence::from_real(&[alpha, alpha + delta, alpha]);
    Ok(LaplacianEnergies {
        energy_u: half_line_laplacian_energy(&u.real_parts()),
        energy_rearranged: half_line_laplacian_energy(&decreasing_rearrangement(&u).real_parts()),
    })
}

/// `(α² + 5δ² + (α − δ)², 2(α² + δ²))`.
pub fn laplacian_counterexample_closed_forms(alpha: f64, delta: f64) -> LaplacianEnergies {
    LaplacianEnergies {
        energy_u: alpha * alpha + 5.0 * delta * delta + (alpha - delta).powi(2),
        energy_rearranged: 2.0 * (alpha * alpha + delta * delta),
    }
}

/// Sizes of `{|u| > t}` and `{ũ > t}` on every band.
pub fn equimeasurability_gap<S: FiniteSupport>(u: &S, rearranged: &HalfLineSequence) -> usize {
    let du = level_decomposition(u);
    let dr = level_decomposition(rearranged);
    let mut thresholds: Vec<f64> = du.levels().iter().chain(dr.levels()).copied().collect();
    thresholds.push(0.0);
    thresholds
        .iter()
        .map(|&t| du.measure_above(t).abs_diff(dr.measure_above(t)))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::C64;

    fn real(v: &[f64]) -> HalfLineSequence {
        HalfLineSequence::from_real(v)
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(
            decreasing_rearrangement(&real(&[3.0, 1.0, 2.0, 0.0, 5.0])),
            real(&[5.0, 3.0, 2.0, 1.0])
        );
        let u = HalfLineSequence::new(vec![C64::new(-2.0, 0.0), C64::new(0.0, 3.0)]);
        assert_eq!(decreasing_rearrangement(&u), real(&[3.0, 2.0]));
        let s = real(&[5.0, 3.0, 2.0, 1.0]);
        assert_eq!(decreasing_rearrangement(&s), s);
    }

    #[test]
    fn hardy_littlewood_examples() {
        let p = hardy_littlewood_pair(&real(&[1.0, 2.0]), &real(&[3.0, 0.0, 4.0]));
        assert_eq!((p.lhs, p.rhs), (3.0, 11.0));
        let ind = real(&[1.0; 4]);
        let p = hardy_littlewood_pair(&ind, &ind);
        assert_eq!((p.lhs, p.rhs), (4.0, 4.0));
        let p = hardy_littlewood_pair(&real(&[0.0, 1.0]), &real(&[1.0, 0.0]));
        assert_eq!((p.lhs, p.rhs), (0.0, 1.0));
    }

    #[test]
    fn contraction_examples() {
        let p = lp_contraction_pair(&real(&[2.0, 0.0]), &real(&[0.0, 2.0]), 2.0).unwrap();
        assert_eq!((p.lhs, p.rhs), (0.0, 8.0));
        let u = real(&[0.3, 1.7, 0.2]);
        let p = lp_contraction_pair(&u, &u, 3.0).unwrap();
        assert_eq!((p.lhs, p.rhs), (0.0, 0.0));
        let p = lp_contraction_pair(&real(&[1.0]), &real(&[2.0]), 1.0).unwrap();
        assert_eq!((p.lhs, p.rhs), (1.0, 1.0));
        assert!(lp_contraction_pair(&u, &u, 0.9).is_err());
    }

    #[test]
    fn coarea_examples() {
        let p = coarea_both_sides(&FiniteGraph::path(3), &[2.0, 1.0, 0.0], 2.0).unwrap();
        assert_eq!((p.lhs, p.rhs), (4.0, 4.0));
        let tri = FiniteGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = coarea_both_sides(&tri, &[0.0; 3], 2.0).unwrap();
        assert_eq!((p.lhs, p.rhs), (0.0, 0.0));
        let p = coarea_both_sides(&tri, &[1.0, 1.0, 0.0], 1.0).unwrap();
        assert_eq!((p.lhs, p.rhs), (4.0, 4.0));
        assert_eq!(
            coarea_both_sides(&tri, &[1.0, -1.0, 0.0], 1.0),
            Err(Error::NegativeEntry {
                index: 1,
                value: -1.0
            })
        );
    }

    #[test]
    fn graph_validation() {
        assert!(FiniteGraph::new(3, [(0, 0)]).is_err());
        assert!(FiniteGraph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(FiniteGraph::new(3, [(0, 3)]).is_err());
        let g: FiniteGraph =
            serde_json::from_str(r#"{"vertices": 3, "edges": [[0, 1], [2, 1]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(
            serde_json::from_str::<FiniteGraph>(r#"{"vertices": 2, "edges": [[0, 0]]}"#).is_err()
        );
    }

    #[test]
    fn weighted_ps_examples() {
        let u = real(&[0.0, 2.0, 1.0]);
        let p = weighted_ps_pair(&u, &Weight::unit(), 2.0).unwrap();
        assert_eq!((p.lhs, p.rhs), (6.0, 2.0));
        let p = weighted_ps_pair(&u, &Weight::power(1.0), 2.0).unwrap();
        assert_eq!((p.lhs, p.rhs), (3.0, 1.0));
        let s = real(&[4.0, 2.5, 2.5, 0.5]);
        let p = weighted_ps_pair(&s, &Weight::power(1.7), 1.3).unwrap();
        assert_eq!(p.lhs, p.rhs);
        let bad = Weight::table(vec![2.0, 1.0]).unwrap();
        assert_eq!(
            weighted_ps_pair(&u, &bad, 2.0),
            Err(Error::NonMonotoneWeight(0))
        );
    }

    #[test]
    fn equality_witness_examples() {
        let d = ps_equality_witness(&real(&[0.0, 2.0, 1.0]), &Weight::unit(), 2.0, 1e-9).unwrap();
        assert_eq!(d.kind, EqualityKind::StrictInequality);
        assert_eq!(d.pair.margin, 4.0);

        let w = Weight::table(vec![0.5, 1.0, 2.0]).unwrap();
        let d = ps_equality_witness(&real(&[5.0, 3.0]), &w, 1.5, 1e-9).unwrap();
        assert_eq!(d.kind, EqualityKind::EqualAndSorted);

        let w = Weight::table(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let d = ps_equality_witness(&real(&[1.0, 1.0, 2.0]), &w, 1.0, 1e-9).unwrap();
        assert_eq!(d.kind, EqualityKind::StrictInequality);
        assert_eq!((d.pair.lhs, d.pair.rhs), (8.0, 4.0));

        assert_eq!(
            ps_equality_witness(&real(&[1.0]), &Weight::power(1.0), 2.0, 1e-9),
            Err(Error::ZeroWeight(0))
        );
    }

    #[test]
    fn sign_change_with_sorted_moduli_is_strict() {
        let d = ps_equality_witness(&real(&[2.0, -1.0]), &Weight::unit(), 2.0, 1e-9).unwrap();
        assert_eq!(d.kind, EqualityKind::StrictInequality);
        assert_eq!((d.pair.lhs, d.pair.rhs), (10.0, 2.0));
    }

    #[test]
    fn laplacian_counterexample_values() {
        let e = laplacian_counterexample(2.0, 0.5).unwrap();
        assert_eq!((e.energy_u, e.energy_rearranged), (7.5, 8.5));
        let e = laplacian_counterexample(2.0, 1.0).unwrap();
        assert_eq!((e.energy_u, e.energy_rearranged), (10.0, 10.0));
        let e = laplacian_counterexample(1.0, 0.1).unwrap();
        assert!((e.energy_u - 1.86).abs() < 1e-12);
        assert!((e.energy_rearranged - 2.02).abs() < 1e-12);
        assert!(laplacian_counterexample(0.0, 1.0).is_err());
    }
}
