use serde::{Deserialize, Serialize};

/// Which way an inequality between two evaluated sides points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `lhs ≤ rhs`
    AtMost,
    /// `lhs ≥ rhs`
    AtLeast,
    /// `lhs = rhs`
    Equal,
}

/// Two evaluated sides of an inequality or identity.
///
/// `margin` is positive when the relation holds with room to spare; for
/// identities it is `-|lhs - rhs|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl Pair {
    pub fn new(lhs: f64, rhs: f64, relation: Relation) -> Self {
        let margin = match relation {
            Relation::AtMost => rhs - lhs,
            Relation::AtLeast => lhs - rhs,
            Relation::Equal => -(lhs - rhs).abs(),
        };
        Self { lhs, rhs, margin }
    }

    pub fn at_most(lhs: f64, rhs: f64) -> Self {
        Self::new(lhs, rhs, Relation::AtMost)
    }

    pub fn at_least(lhs: f64, rhs: f64) -> Self {
        Self::new(lhs, rhs, Relation::AtLeast)
    }

    pub fn equal(lhs: f64, rhs: f64) -> Self {
        Self::new(lhs, rhs, Relation::Equal)
    }

    pub fn holds(&self, tolerance: f64) -> bool {
        self.margin >= -tolerance
    }
}

/// A single named property evaluated once.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    /// Empirical constant, for properties that estimate one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
}

impl PropertyReport {
    pub fn from_pair(property: impl Into<String>, pair: Pair, tolerance: f64) -> Self {
        Self {
            property: property.into(),
            lhs: pair.lhs,
            rhs: pair.rhs,
            margin: pair.margin,
            pass: pair.holds(tolerance),
            constant: None,
        }
    }
}
