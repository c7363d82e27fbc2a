//! Statistical and algebraic kernel for the battery: distribution functions,
//! goodness-of-fit machinery and GF(2) matrix rank.
//!
//! Every operation here is a pure function; the battery calls them from
//! multiple threads without restriction.

mod dist;
pub(crate) mod gf2;
mod ks;
pub(crate) mod sym;

pub use dist::{chisq_pvalue, ln_gamma, normal_cdf, poisson_pmf};
pub use gf2::{gf2_rank, BinaryMatrix};
pub use ks::ks_pvalue;

use serde::{Deserialize, Serialize};

/// A labelled probability in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValue {
    pub label: String,
    pub value: f64,
}

impl PValue {
    /// Build a p-value, clamping round-off spill into [0, 1].
    ///
    /// NaN is a bug in the producing test, never a data artifact, and is
    /// rejected loudly.
    pub fn new(label: impl Into<String>, value: f64) -> Self {
        assert!(!value.is_nan(), "p-value must not be NaN");
        PValue {
            label: label.into(),
            value: value.clamp(0.0, 1.0),
        }
    }
}
