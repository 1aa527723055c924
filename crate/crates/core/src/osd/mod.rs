//! Soft-decision decoding of Reed-Solomon codes by q-ary order statistics
//! with algebraic matching.
//!
//! The decoder re-encodes from the most reliable information set (MRIS),
//! enumerates test patterns of weight up to `t` on it, and for every pattern
//! additionally constructs the codewords that agree with the hard decisions
//! on `τ` positions of the control band (the `s` most reliable positions
//! outside the MRIS) while `τ` later MRIS positions are released. Candidates
//! are compared by ellipsoidal weight `EW(c) = Σ_i L_i[c_i]`.

mod llr;
mod search;

pub use llr::{LlrTable, Tuple, TupleStream};
pub use search::optimality_delta;

use crate::error::{Error, Result};
use crate::gf::Symbol;
use crate::ops::OpCounter;
use crate::rs::{RsCode, SystematicMatrix};
use search::{tail_sums, Search, SearchParams, Sink};

/// Reprocessing order, control band size and search switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OsdParams {
    pub t: usize,
    pub s: usize,
    pub pruning: bool,
    /// Discard matched codewords with more than `2t - W(P) - τ` control-band
    /// mismatches. Disabling it keeps every matched codeword, which makes
    /// the result non-increasing in `s` at the price of more weight
    /// evaluations.
    pub verify_band: bool,
}

impl OsdParams {
    pub fn new(t: usize, s: usize) -> Self {
        Self {
            t,
            s,
            pruning: true,
            verify_band: true,
        }
    }

    /// Order `t` with the whole redundancy as control band.
    pub fn with_full_band(code: &RsCode, t: usize) -> Self {
        Self::new(t, code.n() - code.k())
    }

    pub fn without_pruning(mut self) -> Self {
        self.pruning = false;
        self
    }

    pub fn without_band_check(mut self) -> Self {
        self.verify_band = false;
        self
    }

    /// Rejects `t > k`, `s > n - k` and `s < t`.
    pub fn validate(&self, code: &RsCode) -> Result<()> {
        if self.t > code.k() {
            return Err(Error::InvalidParameters(format!(
                "reprocessing order t={} exceeds k={}",
                self.t,
                code.k()
            )));
        }
        if self.s > code.n() - code.k() {
            return Err(Error::InvalidParameters(format!(
                "control band s={} exceeds n-k={}",
                self.s,
                code.n() - code.k()
            )));
        }
        if self.s < self.t {
            return Err(Error::InvalidParameters(format!(
                "control band s={} is smaller than t={}",
                self.s, self.t
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderResult {
    pub codeword: Vec<Symbol>,
    /// Ellipsoidal weight of `codeword`.
    pub ew: f64,
    pub ops: OpCounter,
    /// Set when no codeword outside the searched region can have a smaller
    /// ellipsoidal weight.
    pub proven_ml: bool,
}

/// Upper bound `C(k,t)(q-1)^t + C(s,t)C(k,t)` on the number of test
/// patterns quoted for the algorithm.
pub fn candidate_bound(k: usize, t: usize, s: usize, q: usize) -> u128 {
    let ckt = binomial(k, t);
    ckt * ((q - 1) as u128).pow(t as u32) + binomial(s, t) * ckt
}

/// Number of codewords the enumeration re-encodes without pruning: every
/// pattern of weight `w <= t` plus, for a pattern whose last perturbed
/// rank is `a`, all its matches releasing positions after `a`.
pub fn enumeration_size(k: usize, t: usize, s: usize, q: usize) -> u128 {
    let mut total = 1u128;
    for w in 1..=t.min(k) {
        let tau_max = w.min(s).min(2 * t - w);
        let symbols = ((q - 1) as u128).pow(w as u32);
        for a in w - 1..k {
            let per_pattern: u128 = 1
                + (1..=tau_max)
                    .map(|tau| binomial(k - 1 - a, tau) * binomial(s, tau))
                    .sum::<u128>();
            total += binomial(a, w - 1) * symbols * per_pattern;
        }
    }
    total
}

pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Necessary condition of optimality for a test pattern: it can only beat
/// the tentative decision if `pattern_cost + tail_sum < best_ew`, where
/// `tail_sum` adds the `δ` smallest reliabilities. Returns true when the
/// pattern may be skipped.
pub fn optimality_prune(pattern_cost: f64, tail_sum: f64, best_ew: f64) -> bool {
    pattern_cost + tail_sum >= best_ew
}

struct BestSink {
    word: Vec<Symbol>,
    ew: f64,
    distance: Option<usize>,
}

impl Sink for BestSink {
    fn threshold(&self) -> f64 {
        self.ew
    }

    fn reference_distance(&self) -> Option<usize> {
        self.distance
    }

    fn consider(&mut self, word: &[Symbol], ew: f64, hard: &[Symbol], ops: &mut OpCounter) {
        ops.cmp(1);
        if ew < self.ew {
            self.ew = ew;
            self.word.clear();
            self.word.extend_from_slice(word);
            self.distance = Some(word.iter().zip(hard).filter(|(a, b)| a != b).count());
        }
    }
}

fn check_table(table: &LlrTable, code: &RsCode) -> Result<()> {
    if table.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            actual: table.len(),
        });
    }
    if table.q() != code.field().q() {
        return Err(Error::LengthMismatch {
            expected: code.field().q(),
            actual: table.q(),
        });
    }
    Ok(())
}

/// Re-encodes the hard decisions on the MRIS.
pub fn order0(table: &LlrTable, code: &RsCode) -> Result<DecoderResult> {
    check_table(table, code)?;
    let mut ops = OpCounter::new();
    let generator =
        code.mris_generator_matrix_counted(&table.reliability_order()[..code.k()], &mut ops)?;
    let search = Search::new(
        code,
        table,
        &[],
        &generator,
        None,
        SearchParams {
            t: 0,
            s: 0,
            pruning: false,
            verify_band: true,
        },
    );
    let codeword = search.order0_word(&mut ops);
    let ew = table.ellipsoidal_weight(&codeword);
    ops.add(code.n() as u64);
    ops.candidates += 1;
    ops.reencodings += 1;
    let proven_ml = ew <= unsearched_bound(table, code, 0, &codeword);
    Ok(DecoderResult {
        codeword,
        ew,
        ops,
        proven_ml,
    })
}

/// Order-`t` reprocessing with algebraic matching on a control band of
/// size `s`.
pub fn decode(table: &LlrTable, code: &RsCode, params: OsdParams) -> Result<DecoderResult> {
    check_table(table, code)?;
    params.validate(code)?;
    let mut ops = OpCounter::new();
    let generator =
        code.mris_generator_matrix_counted(&table.reliability_order()[..code.k()], &mut ops)?;
    let tuples = table.tuples();
    Ok(decode_with(table, code, &tuples, &generator, params, ops))
}

/// Same as [`decode`] with a caller-provided tuple stream and MRIS matrix.
pub fn decode_with(
    table: &LlrTable,
    code: &RsCode,
    tuples: &TupleStream,
    generator: &SystematicMatrix,
    params: OsdParams,
    mut ops: OpCounter,
) -> DecoderResult {
    let mut sink = BestSink {
        word: Vec::new(),
        ew: f64::INFINITY,
        distance: None,
    };
    let mut search = Search::new(
        code,
        table,
        tuples.as_slice(),
        generator,
        None,
        SearchParams {
            t: params.t,
            s: params.s,
            pruning: params.pruning,
            verify_band: params.verify_band,
        },
    );
    search.run(&mut sink, &mut ops);
    let proven_ml =
        params.t >= code.k() || sink.ew <= unsearched_bound(table, code, params.t, &sink.word);
    DecoderResult {
        codeword: sink.word,
        ew: sink.ew,
        ops,
        proven_ml,
    }
}

/// Lower bound on the weight of any codeword with more than `t` MRIS
/// positions away from the hard decisions.
fn unsearched_bound(table: &LlrTable, code: &RsCode, t: usize, best: &[Symbol]) -> f64 {
    let k = code.k();
    let n = code.n();
    if t >= k {
        return f64::INFINITY;
    }
    let order = table.reliability_order();
    let rel = table.reliabilities();
    let hard = table.hard_decisions();
    let w = best.iter().zip(hard).filter(|(a, b)| a != b).count();
    let tail = tail_sums(table, n - k);
    // j smallest reliabilities inside the MRIS
    let mut head = 0.0;
    for j in 1..=t {
        head += rel[order[k - j]];
    }
    let mut bound = f64::INFINITY;
    for j in t + 1..=k {
        head += rel[order[k - j]];
        bound = bound.min(head + tail[optimality_delta(code.d(), w, j, n - k)]);
    }
    bound
}

/// One phase of a kernel: the coset `offset + C` of an evaluation code `C`
/// whose codewords determine the current kernel input through
/// `inverse_column`.
pub struct CosetProblem<'a> {
    /// The `(l, l - i)` code spanned by kernel rows `i..l`.
    pub code: &'a RsCode,
    /// MRIS-systematic generator matrix of `code`.
    pub generator: &'a SystematicMatrix,
    /// MRIS-systematic generator of the next code in the chain (`None` at
    /// the last phase).
    pub sub_generator: Option<&'a SystematicMatrix>,
    /// Kernel row `i`.
    pub coset_row: &'a [Symbol],
    /// Column `i` of the inverse kernel.
    pub inverse_column: &'a [Symbol],
    /// Contribution of the already decided inputs.
    pub offset: &'a [Symbol],
}

struct CosetSink<'a> {
    field: &'a crate::gf::FieldTable,
    inverse_column: &'a [Symbol],
    entries: Vec<f64>,
    covered: usize,
    worst: f64,
    best_ew: f64,
    distance: Option<usize>,
}

impl Sink for CosetSink<'_> {
    fn threshold(&self) -> f64 {
        if self.covered < self.entries.len() {
            f64::INFINITY
        } else {
            self.worst
        }
    }

    fn reference_distance(&self) -> Option<usize> {
        self.distance
    }

    fn consider(&mut self, word: &[Symbol], ew: f64, hard: &[Symbol], ops: &mut OpCounter) {
        let u = word
            .iter()
            .zip(self.inverse_column)
            .fold(0, |acc, (&c, &g)| acc ^ self.field.mul(c, g));
        ops.mul(word.len() as u64);
        ops.add(word.len() as u64);
        ops.cmp(2);
        let entry = &mut self.entries[u as usize];
        if ew < *entry {
            if entry.is_infinite() {
                self.covered += 1;
            }
            *entry = ew;
            self.worst = self
                .entries
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            ops.cmp(self.entries.len() as u64);
        }
        if ew < self.best_ew {
            self.best_ew = ew;
            self.distance = Some(word.iter().zip(hard).filter(|(a, b)| a != b).count());
        }
    }
}

/// Smallest ellipsoidal weight over the coset for every value of the
/// current kernel input, shifted so the minimum is 0.
///
/// All codewords examined by one run of the decoder contribute to the
/// entry of the input value they carry. Values never reached fall back to
/// re-encoding the hard decisions within their sub-coset.
pub fn coset_decode_all(
    table: &LlrTable,
    tuples: &TupleStream,
    problem: &CosetProblem<'_>,
    params: OsdParams,
    ops: &mut OpCounter,
) -> Vec<f64> {
    let code = problem.code;
    let f = code.field();
    let q = f.q();
    let k = code.k();
    let mut sink = CosetSink {
        field: f,
        inverse_column: problem.inverse_column,
        entries: vec![f64::INFINITY; q],
        covered: 0,
        worst: f64::INFINITY,
        best_ew: f64::INFINITY,
        distance: None,
    };
    let search_params = SearchParams {
        t: params.t.min(k),
        s: params.s.min(code.n() - k),
        pruning: params.pruning,
        verify_band: params.verify_band,
    };
    let mut search = Search::new(
        code,
        table,
        tuples.as_slice(),
        problem.generator,
        Some(problem.offset),
        search_params,
    );
    search.run(&mut sink, ops);
    let mut entries = sink.entries;
    if entries.iter().any(|e| e.is_infinite()) {
        fill_uncovered(table, problem, &mut entries, ops);
    }
    let min = entries.iter().copied().fold(f64::INFINITY, f64::min);
    entries.iter_mut().for_each(|e| *e -= min);
    ops.add(q as u64);
    entries
}

fn fill_uncovered(
    table: &LlrTable,
    problem: &CosetProblem<'_>,
    entries: &mut [f64],
    ops: &mut OpCounter,
) {
    let f = problem.code.field();
    let n = problem.code.n();
    let hard = table.hard_decisions();
    let mut shifted = vec![0; n];
    for (u, entry) in entries.iter_mut().enumerate() {
        if entry.is_finite() {
            continue;
        }
        for ((x, &o), &g) in shifted
            .iter_mut()
            .zip(problem.offset)
            .zip(problem.coset_row)
        {
            *x = o ^ f.mul(u as Symbol, g);
        }
        let mut word = shifted.clone();
        if let Some(sub) = problem.sub_generator {
            for (r, &p) in sub.info_positions().iter().enumerate() {
                let x = hard[p] ^ shifted[p];
                if x == 0 {
                    continue;
                }
                for (w, &g) in word.iter_mut().zip(sub.row(r)) {
                    *w ^= f.mul(x, g);
                }
            }
            ops.mul((sub.k() * n) as u64);
        }
        ops.candidates += 1;
        ops.reencodings += 1;
        *entry = table.ellipsoidal_weight(&word);
        ops.add(2 * n as u64);
    }
}
