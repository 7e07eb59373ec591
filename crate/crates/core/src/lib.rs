//! Exact computations for the embedding problem E(1, z) -> P(1, beta):
//! quadratic-field arithmetic, continued fractions and weight expansions,
//! ECH capacities, quasi-perfect exceptional classes, staircase
//! verification and almost toric mutations.

pub mod atf;
pub mod cfweights;
pub mod ech;
pub mod error;
pub mod exactnum;
pub mod perfclass;
pub mod report;
pub mod staircase;

pub use error::{Error, Result};
pub use exactnum::{QuadNum, Rounding};
