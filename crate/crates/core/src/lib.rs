//! Rearrangements on the one-dimensional integer lattice.
//!
//! * [`decreasing`]: decreasing rearrangement on ℤ⁺ with the co-area formula
//!   and the weighted Pólya–Szegő inequality.
//! * [`fourier`]: Fourier rearrangement on ℤ through a midpoint grid on (−π, π).
//! * [`symmetric`]: radial, nonincreasing rearrangement combining both.
//! * [`hardy`]: weighted Hardy inequality through linear interpolation.
//! * [`verify`]: seeded randomized suites and empirical constants.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decreasing;
pub mod error;
pub mod fourier;
pub mod hardy;
pub mod levels;
pub mod report;
pub mod sequence;
pub mod symmetric;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use levels::{layer_cake_reconstruct, level_decomposition, LevelDecomposition};
pub use report::{Pair, PropertyReport, Relation};
pub use sequence::{lp_norm, FiniteSupport, HalfLineSequence, LatticeSequence, C64};
pub use weight::Weight;
