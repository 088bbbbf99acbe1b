//! Shared iteration bounds and the witness seed. Stabilized fixpoints
//! are provably exact; exhausting a bound degrades the result status
//! instead of looping.

use crate::constructible::WitnessConfig;

#[derive(Clone, Debug)]
pub struct Bounds {
    /// Fixpoint iterations for group closures and Algorithm-style loops.
    pub max_group_iter: usize,
    /// Witness-skeleton enrichment steps per recursion level.
    pub max_enrich: usize,
    /// Seed for hyperplane slicing during witness search.
    pub seed: u64,
    /// Retries for positive-dimensional witness slicing.
    pub witness_retries: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_group_iter: 50,
            max_enrich: 25,
            seed: 0,
            witness_retries: 40,
        }
    }
}

impl Bounds {
    pub fn witness_config(&self) -> WitnessConfig {
        WitnessConfig {
            seed: self.seed,
            max_retries: self.witness_retries,
        }
    }
}

/// Result quality: `Exact` is certified; `LowerBound` means a bound was
/// exhausted and the output is contained in the true closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Exact,
    LowerBound,
}

impl Status {
    pub fn meet(self, other: Status) -> Status {
        if self == Status::Exact && other == Status::Exact {
            Status::Exact
        } else {
            Status::LowerBound
        }
    }

    pub fn is_exact(self) -> bool {
        self == Status::Exact
    }
}
