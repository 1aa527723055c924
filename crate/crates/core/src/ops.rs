//! Operation counters shared by the decoders.

use std::ops::AddAssign;

/// Counts of the elementary operations performed by a decoder.
///
/// `additions` covers field additions and additions of log-likelihood
/// values, `comparisons` every comparison against a weight or threshold.
/// Field multiplications are tracked on their own.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub additions: u64,
    pub comparisons: u64,
    pub multiplications: u64,
    /// Distinct candidate codewords whose ellipsoidal weight was evaluated.
    pub candidates: u64,
    /// Codewords constructed from an information set, including those
    /// rejected by the control-band check.
    pub reencodings: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, n: u64) {
        self.additions += n;
    }

    #[inline]
    pub fn cmp(&mut self, n: u64) {
        self.comparisons += n;
    }

    #[inline]
    pub fn mul(&mut self, n: u64) {
        self.multiplications += n;
    }

    /// Summations plus comparisons.
    pub fn sum_and_compare(&self) -> u64 {
        self.additions + self.comparisons
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: Self) {
        self.additions += rhs.additions;
        self.comparisons += rhs.comparisons;
        self.multiplications += rhs.multiplications;
        self.candidates += rhs.candidates;
        self.reencodings += rhs.reencodings;
    }
}
