//! Super-level sets and layer-cake reconstruction.

use crate::error::{Error, Result};
use crate::sequence::{FiniteSupport, LatticeSequence, C64};

/// Distinct nonzero moduli `t₁ > t₂ > …` with, for each band
/// `t ∈ [t_{i+1}, t_i)`, the super-level set `{n : |u(n)| > t}`.
///
/// `sets[i]` holds the indices with `|u(n)| ≥ levels[i]`, sorted ascending.
/// Below the last level the band is `(0, t_last)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelDecomposition {
    levels: Vec<f64>,
    sets: Vec<Vec<i64>>,
}

impl LevelDecomposition {
    /// Validates positivity, strict decrease of levels and strict nesting of sets.
    pub fn new(levels: Vec<f64>, mut sets: Vec<Vec<i64>>) -> Result<Self> {
        if levels.len() != sets.len() {
            return Err(Error::InvalidParameter(format!(
                "{} levels but {} sets",
                levels.len(),
                sets.len()
            )));
        }
        if levels.iter().any(|&t| !(t > 0.0 && t.is_finite()))
            || levels.windows(2).any(|w| !(w[0] > w[1]))
        {
            return Err(Error::InvalidLevels);
        }
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::NonNestedSets(i));
            }
            if i > 0 {
                let prev = &sets[i - 1];
                let nested = prev.iter().all(|n| s.binary_search(n).is_ok());
                if !nested || prev.len() == s.len() {
                    return Err(Error::NonNestedSets(i));
                }
            }
        }
        Ok(Self { levels, sets })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn sets(&self) -> &[Vec<i64>] {
        &self.sets
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Bands as `(upper, lower, set)` with `lower = 0` for the last band.
    pub fn bands(&self) -> impl Iterator<Item = (f64, f64, &[i64])> + '_ {
        self.levels.iter().enumerate().map(|(i, &t)| {
            let lower = self.levels.get(i + 1).copied().unwrap_or(0.0);
            (t, lower, self.sets[i].as_slice())
        })
    }

    /// `|{n : |u(n)| > t}|` for `t > 0`.
    pub fn measure_above(&self, t: f64) -> usize {
        match self.levels.iter().rposition(|&level| level > t) {
            Some(i) => self.sets[i].len(),
            None => 0,
        }
    }
}

pub fn level_decomposition<S: FiniteSupport + ?Sized>(u: &S) -> LevelDecomposition {
    let start = u.first_index();
    let mut entries: Vec<(f64, i64)> = u
        .stored()
        .iter()
        .enumerate()
        .map(|(i, z)| (z.norm(), start + i as i64))
        .filter(|&(m, _)| m > 0.0)
        .collect();
    entries.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut levels = Vec::new();
    let mut sets: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let t = entries[i].0;
        while i < entries.len() && entries[i].0 == t {
            current.push(entries[i].1);
            i += 1;
        }
        current.sort_unstable();
        levels.push(t);
        sets.push(current.clone());
    }
    LevelDecomposition { levels, sets }
}

/// Rebuilds the nonnegative sequence with decomposition `d`.
///
/// Each index takes the highest level whose set contains it, which is the
/// telescoped layer-cake sum; values are copied, never re-added.
pub fn layer_cake_reconstruct(d: &LevelDecomposition) -> Result<LatticeSequence> {
    let d = LevelDecomposition::new(d.levels.clone(), d.sets.clone())?;
    let Some(last) = d.sets.last() else {
        return Ok(LatticeSequence::zero());
    };
    let start = last[0];
    let end = *last.last().unwrap() + 1;
    let mut values = vec![C64::default(); (end - start) as usize];
    for (i, set) in d.sets.iter().enumerate().rev() {
        for &n in set {
            values[(n - start) as usize] = C64::new(d.levels[i], 0.0);
        }
    }
    Ok(LatticeSequence::new(start, values))
}
