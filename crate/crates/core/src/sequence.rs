//! Finitely supported sequences on the half-line ℤ⁺ and on ℤ.
//!
//! Both types keep a canonical form with zeros trimmed from the ends, so
//! `==` compares the underlying functions rather than their storage.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Anything exposing a finite block of stored values.
pub trait FiniteSupport {
    /// Index of the first stored value.
    fn first_index(&self) -> i64;
    fn stored(&self) -> &[C64];

    fn moduli(&self) -> Vec<f64> {
        self.stored().iter().map(|z| z.norm()).collect()
    }

    fn is_zero(&self) -> bool {
        self.stored().is_empty()
    }
}

fn is_zero(z: &C64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

/// Sequence on ℤ⁺ = {0, 1, 2, …}; indices past the stored block are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HalfLineSequence {
    values: Vec<C64>,
}

impl HalfLineSequence {
    pub fn new(mut values: Vec<C64>) -> Self {
        while values.last().is_some_and(is_zero) {
            values.pop();
        }
        Self { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Number of stored entries (one past the last nonzero index).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> C64 {
        self.values.get(n).copied().unwrap_or_default()
    }

    /// Real parts, for sequences known to be real.
    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn abs(&self) -> Self {
        Self::from_real(&self.moduli())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.values.iter().map(|&z| z * c).collect())
    }
}

impl FiniteSupport for HalfLineSequence {
    fn first_index(&self) -> i64 {
        0
    }

    fn stored(&self) -> &[C64] {
        &self.values
    }
}

impl TryFrom<LatticeSequence> for HalfLineSequence {
    type Error = Error;

    fn try_from(u: LatticeSequence) -> Result<Self> {
        if u.is_zero() {
            return Ok(Self::zero());
        }
        if u.offset < 0 {
            return Err(Error::NegativeSupport(u.offset));
        }
        let mut values = vec![C64::default(); u.offset as usize];
        values.extend_from_slice(&u.values);
        Ok(Self::new(values))
    }
}

/// Sequence on ℤ stored as a contiguous block starting at `offset`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LatticeSequence {
    offset: i64,
    values: Vec<C64>,
}

impl LatticeSequence {
    pub fn new(offset: i64, values: Vec<C64>) -> Self {
        let Some(first) = values.iter().position(|z| !is_zero(z)) else {
            return Self::default();
        };
        let last = values.iter().rposition(|z| !is_zero(z)).unwrap();
        Self {
            offset: offset + first as i64,
            values: values[first..=last].to_vec(),
        }
    }

    pub fn from_real(offset: i64, values: &[f64]) -> Self {
        Self::new(offset, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn delta(at: i64) -> Self {
        Self::new(at, vec![C64::new(1.0, 0.0)])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds the sequence `n ↦ f(n)` on `start..end`.
    pub fn from_fn(start: i64, end: i64, f: impl Fn(i64) -> C64) -> Self {
        Self::new(start, (start..end).map(f).collect())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Half-open index range covering the support.
    pub fn range(&self) -> std::ops::Range<i64> {
        self.offset..self.offset + self.values.len() as i64
    }

    pub fn width(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, n: i64) -> C64 {
        let i = n - self.offset;
        if i < 0 {
            return C64::default();
        }
        self.values.get(i as usize).copied().unwrap_or_default()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.offset, self.values.iter().map(|&z| z * c).collect())
    }

    /// Entrywise combination `a·self + b·other`.
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Self {
        if self.is_zero() {
            return other.scale(b);
        }
        if other.is_zero() {
            return self.scale(a);
        }
        let start = self.offset.min(other.offset);
        let end = self.range().end.max(other.range().end);
        Self::from_fn(start, end, |n| a * self.get(n) + b * other.get(n))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl FiniteSupport for LatticeSequence {
    fn first_index(&self) -> i64 {
        self.offset
    }

    fn stored(&self) -> &[C64] {
        &self.values
    }
}

impl From<&HalfLineSequence> for LatticeSequence {
    fn from(u: &HalfLineSequence) -> Self {
        Self::new(0, u.values.clone())
    }
}

/// (Σ |u(n)|^p)^{1/p}.
pub fn lp_norm<S: FiniteSupport + ?Sized>(u: &S, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::ExponentBelowOne(p));
    }
    let sum: f64 = u.stored().iter().map(|z| z.norm().powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

/// Σ |u(n)|^p without the root.
pub fn lp_sum<S: FiniteSupport + ?Sized>(u: &S, p: f64) -> f64 {
    u.stored().iter().map(|z| z.norm().powf(p)).sum()
}

/// One entry of the `"values"` array: a real number or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonValue {
    Real(f64),
    Complex([f64; 2]),
}

impl From<JsonValue> for C64 {
    fn from(v: JsonValue) -> Self {
        match v {
            JsonValue::Real(x) => C64::new(x, 0.0),
            JsonValue::Complex([re, im]) => C64::new(re, im),
        }
    }
}

impl From<C64> for JsonValue {
    fn from(z: C64) -> Self {
        if z.im == 0.0 {
            JsonValue::Real(z.re)
        } else {
            JsonValue::Complex([z.re, z.im])
        }
    }
}

/// Wire form shared by both sequence types.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceJson {
    #[serde(default, skip_serializing_if = "is_zero_offset")]
    pub offset: i64,
    pub values: Vec<JsonValue>,
}

fn is_zero_offset(o: &i64) -> bool {
    *o == 0
}

impl From<&LatticeSequence> for SequenceJson {
    fn from(u: &LatticeSequence) -> Self {
        Self {
            offset: u.offset,
            values: u.values.iter().map(|&z| z.into()).collect(),
        }
    }
}

impl From<&HalfLineSequence> for SequenceJson {
    fn from(u: &HalfLineSequence) -> Self {
        Self {
            offset: 0,
            values: u.values.iter().map(|&z| z.into()).collect(),
        }
    }
}

impl From<SequenceJson> for LatticeSequence {
    fn from(j: SequenceJson) -> Self {
        LatticeSequence::new(j.offset, j.values.into_iter().map(C64::from).collect())
    }
}

impl LatticeSequence {
    pub fn from_json(s: &str) -> Result<Self> {
        let j: SequenceJson = serde_json::from_str(s)?;
        Ok(j.into())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SequenceJson::from(self)).expect("finite sequence serializes")
    }
}

impl HalfLineSequence {
    /// Parses sequence JSON; a negative support index is rejected.
    pub fn from_json(s: &str) -> Result<Self> {
        LatticeSequence::from_json(s)?.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SequenceJson::from(self)).expect("finite sequence serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lp_norm_examples() {
        let u = HalfLineSequence::from_real(&[3.0, 4.0]);
        assert_eq!(lp_norm(&u, 2.0).unwrap(), 5.0);
        assert_eq!(lp_norm(&HalfLineSequence::zero(), 1.0).unwrap(), 0.0);
        let u = HalfLineSequence::new(vec![
            C64::new(1.0, 0.0),
            C64::new(-2.0, 0.0),
            C64::new(0.0, 2.0),
        ]);
        let got = lp_norm(&u, 3.0).unwrap();
        assert!((got - 2.571_281_590_658_235_4).abs() < 1e-14, "{got}");
    }

    #[test]
    fn lp_norm_rejects_small_p() {
        let u = HalfLineSequence::from_real(&[1.0]);
        assert_eq!(lp_norm(&u, 0.5), Err(Error::ExponentBelowOne(0.5)));
        assert!(lp_norm(&u, f64::NAN).is_err());
    }

    #[test]
    fn canonical_trimming() {
        let u = HalfLineSequence::from_real(&[1.0, 0.0, 2.0, 0.0, 0.0]);
        assert_eq!(u.len(), 3);
        let v = LatticeSequence::from_real(-3, &[0.0, 0.0, 1.0, 0.0, 5.0, 0.0]);
        assert_eq!(v.offset(), -1);
        assert_eq!(v.width(), 3);
        assert_eq!(v.get(1).re, 5.0);
        assert_eq!(v.get(-7), C64::default());
        assert!(LatticeSequence::from_real(4, &[0.0, 0.0]).is_zero());
    }

    #[test]
    fn json_forms() {
        let u = LatticeSequence::from_json(r#"{"offset": -1, "values": [1, [0, 2], 0]}"#).unwrap();
        assert_eq!(u.offset(), -1);
        assert_eq!(u.get(0), C64::new(0.0, 2.0));
        let back = LatticeSequence::from_json(&u.to_json()).unwrap();
        assert_eq!(back, u);
        let h = HalfLineSequence::from_json(r#"{"values": [3, 1, 2, 0, 5]}"#).unwrap();
        assert_eq!(h.len(), 5);
        assert_eq!(h.to_json(), r#"{"values":[3.0,1.0,2.0,0.0,5.0]}"#);
        assert!(HalfLineSequence::from_json(r#"{"offset": -2, "values": [1]}"#).is_err());
        assert!(LatticeSequence::from_json(r#"{"values": "x"}"#).is_err());
    }

    proptest! {
        #[test]
        fn lp_norm_is_homogeneous(
            vals in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 0..40),
            cr in -5.0f64..5.0, ci in -5.0f64..5.0,
            p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 7.5]),
        ) {
            let u = LatticeSequence::new(-3, vals.iter().map(|&(a, b)| C64::new(a, b)).collect());
            let c = C64::new(cr, ci);
            let lhs = lp_norm(&u.scale(c), p).unwrap();
            let rhs = c.norm() * lp_norm(&u, p).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }
    }
}
