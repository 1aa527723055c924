//! Order-`t` reprocessing with algebraic matching over a fixed coset.

use crate::gf::Symbol;
use crate::ops::OpCounter;
use crate::osd::llr::{LlrTable, Tuple};
use crate::rs::{RsCode, SystematicMatrix};

/// Slack used when comparing a lower bound with the current threshold, so
/// rounding in differently ordered sums never discards an improvement.
const BOUND_SLACK: f64 = 1e-9;

/// Receives every candidate codeword produced by the search.
pub(crate) trait Sink {
    /// Candidates whose weight is at least this value cannot change the
    /// outcome.
    fn threshold(&self) -> f64;
    /// Hamming distance of the reference decision from the hard decisions.
    fn reference_distance(&self) -> Option<usize>;
    fn consider(&mut self, word: &[Symbol], ew: f64, hard: &[Symbol], ops: &mut OpCounter);
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SearchParams {
    pub t: usize,
    pub s: usize,
    pub pruning: bool,
    pub verify_band: bool,
}

#[derive(Debug, Clone, Copy)]
struct MrisTuple {
    llr: f64,
    rank: usize,
    delta: Symbol,
}

pub(crate) struct Search<'a> {
    code: &'a RsCode,
    table: &'a LlrTable,
    generator: &'a SystematicMatrix,
    offset: Option<&'a [Symbol]>,
    params: SearchParams,
    k: usize,
    n: usize,
    hard: Vec<Symbol>,
    checks: Vec<usize>,
    /// `tail[δ]`: sum of the `δ` smallest reliabilities.
    tail: Vec<f64>,
    mris: Vec<MrisTuple>,
    levels: Vec<Vec<Symbol>>,
    chosen: Vec<usize>,
    pattern: Vec<Symbol>,
    used: Vec<bool>,
}

/// `δ = max(d - w - j, 0)`, capped at the number of non-MRIS positions.
pub fn optimality_delta(d: usize, w: usize, j: usize, redundancy: usize) -> usize {
    d.saturating_sub(w + j).min(redundancy)
}

/// Sums of the `δ` smallest reliabilities, `δ = 0..=redundancy`.
pub(crate) fn tail_sums(table: &LlrTable, redundancy: usize) -> Vec<f64> {
    let order = table.reliability_order();
    let rel = table.reliabilities();
    let mut tail = Vec::with_capacity(redundancy + 1);
    tail.push(0.0);
    let mut acc = 0.0;
    for &p in order.iter().rev().take(redundancy) {
        acc += rel[p];
        tail.push(acc);
    }
    tail
}

#[inline]
fn bound_exceeds(lb: f64, threshold: f64) -> bool {
    lb >= threshold + BOUND_SLACK * (1.0 + threshold.abs())
}

/// Steps a sorted index combination drawn from `lo..hi`; false when done.
fn next_combination(c: &mut [usize], hi: usize) -> bool {
    let m = c.len();
    for i in (0..m).rev() {
        if c[i] < hi - (m - i) {
            c[i] += 1;
            for j in i + 1..m {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl<'a> Search<'a> {
    pub(crate) fn new(
        code: &'a RsCode,
        table: &'a LlrTable,
        tuples: &'a [Tuple],
        generator: &'a SystematicMatrix,
        offset: Option<&'a [Symbol]>,
        params: SearchParams,
    ) -> Self {
        let k = generator.k();
        let n = code.n();
        debug_assert_eq!(code.k(), k);
        debug_assert!(offset.is_none_or(|o| o.len() == n));
        let hard: Vec<Symbol> = match offset {
            Some(off) => table
                .hard_decisions()
                .iter()
                .zip(off)
                .map(|(&x, &v)| x ^ v)
                .collect(),
            None => table.hard_decisions().to_vec(),
        };
        let hard_orig = table.hard_decisions();
        let mris = tuples
            .iter()
            .filter(|t| table.rank(t.position) < k)
            .map(|t| MrisTuple {
                llr: t.llr,
                rank: table.rank(t.position),
                delta: t.symbol ^ hard_orig[t.position],
            })
            .collect();
        let mut is_info = vec![false; n];
        for &p in generator.info_positions() {
            is_info[p] = true;
        }
        let checks = (0..n).filter(|&p| !is_info[p]).collect();
        Self {
            code,
            table,
            generator,
            offset,
            params,
            k,
            n,
            hard,
            checks,
            tail: tail_sums(table, n - k),
            mris,
            levels: vec![vec![0; n]; params.t + 1],
            chosen: Vec::with_capacity(params.t),
            pattern: vec![0; k],
            used: vec![false; k],
        }
    }

    #[inline]
    fn llr(&self, position: usize, symbol: Symbol) -> f64 {
        match self.offset {
            Some(off) => self.table.llr(position, symbol ^ off[position]),
            None => self.table.llr(position, symbol),
        }
    }

    fn weight(&self, word: &[Symbol], ops: &mut OpCounter) -> f64 {
        ops.add(self.n as u64);
        word.iter().enumerate().map(|(i, &c)| self.llr(i, c)).sum()
    }

    fn delta(&self, sink: &dyn Sink, j: usize) -> usize {
        match sink.reference_distance() {
            Some(w) => optimality_delta(self.code.d(), w, j, self.n - self.k),
            None => 0,
        }
    }

    /// Codeword agreeing with the hard decisions on the information set.
    pub(crate) fn order0_word(&self, ops: &mut OpCounter) -> Vec<Symbol> {
        let f = self.code.field();
        let mut c = vec![0; self.n];
        for (r, &p) in self.generator.info_positions().iter().enumerate() {
            let x = self.hard[p];
            c[p] = x;
            if x == 0 {
                continue;
            }
            let row = self.generator.row(r);
            for &j in &self.checks {
                c[j] ^= f.mul(x, row[j]);
            }
        }
        ops.mul((self.k * self.checks.len()) as u64);
        ops.add((self.k * self.checks.len()) as u64);
        c
    }

    /// Runs phases `w = 0..=t`, feeding every candidate to `sink`.
    pub(crate) fn run(&mut self, sink: &mut dyn Sink, ops: &mut OpCounter) {
        let c0 = self.order0_word(ops);
        let ew = self.weight(&c0, ops);
        ops.candidates += 1;
        ops.reencodings += 1;
        sink.consider(&c0, ew, &self.hard, ops);
        self.levels[0] = c0;
        for wt in 1..=self.params.t.min(self.k) {
            self.chosen.clear();
            self.dfs(0, 0, wt, 0.0, sink, ops);
        }
    }

    fn tau_max(&self, wt: usize) -> usize {
        let s = self.params.s.min(self.n - self.k);
        wt.min(s).min((2 * self.params.t).saturating_sub(wt))
    }

    fn dfs(
        &mut self,
        depth: usize,
        start: usize,
        wt: usize,
        partial: f64,
        sink: &mut dyn Sink,
        ops: &mut OpCounter,
    ) {
        let remaining = wt - depth;
        let tau_max = self.tau_max(wt);
        for j in start..self.mris.len() {
            let tuple = self.mris[j];
            if self.used[tuple.rank] {
                continue;
            }
            if self.params.pruning {
                // matches keep the whole pattern, so their bound is the
                // reprocessing bound with a shorter tail
                let lb = partial
                    + remaining as f64 * tuple.llr
                    + self.tail[self.delta(sink, wt + tau_max)];
                ops.add(2);
                ops.cmp(1);
                if bound_exceeds(lb, sink.threshold()) {
                    // tuples are sorted, later choices only cost more
                    break;
                }
            }
            self.used[tuple.rank] = true;
            self.pattern[tuple.rank] = tuple.delta;
            self.chosen.push(j);
            self.extend_level(depth, tuple, ops);
            let cost = partial + tuple.llr;
            ops.add(1);
            if remaining == 1 {
                self.leaf(depth + 1, wt, cost, sink, ops);
            } else {
                self.dfs(depth + 1, j + 1, wt, cost, sink, ops);
            }
            self.chosen.pop();
            self.pattern[tuple.rank] = 0;
            self.used[tuple.rank] = false;
        }
    }

    fn extend_level(&mut self, depth: usize, tuple: MrisTuple, ops: &mut OpCounter) {
        let f = self.code.field();
        let (lower, upper) = self.levels.split_at_mut(depth + 1);
        let src = &lower[depth];
        let dst = &mut upper[0];
        dst.copy_from_slice(src);
        let p = self.generator.info_positions()[tuple.rank];
        dst[p] ^= tuple.delta;
        let row = self.generator.row(tuple.rank);
        for &j in &self.checks {
            dst[j] ^= f.mul(tuple.delta, row[j]);
        }
        ops.mul(self.checks.len() as u64);
        ops.add(self.checks.len() as u64 + 1);
    }

    fn leaf(
        &mut self,
        level: usize,
        wt: usize,
        cost: f64,
        sink: &mut dyn Sink,
        ops: &mut OpCounter,
    ) {
        let skip = self.params.pruning && {
            ops.add(1);
            ops.cmp(1);
            bound_exceeds(cost + self.tail[self.delta(sink, wt)], sink.threshold())
        };
        if !skip {
            let word = std::mem::take(&mut self.levels[level]);
            let ew = self.weight(&word, ops);
            ops.candidates += 1;
            ops.reencodings += 1;
            sink.consider(&word, ew, &self.hard, ops);
            self.levels[level] = word;
        }
        for tau in 1..=self.tau_max(wt) {
            self.match_patterns(wt, tau, cost, sink, ops);
        }
    }

    /// Re-encodes from the information set with `τ` MRIS positions after the
    /// perturbed ones released and `τ` control-band positions pinned to
    /// their hard decisions.
    ///
    /// A codeword is evaluated only from its canonical construction: the
    /// released positions all differ from the hard decisions and the pinned
    /// positions are the first `τ` band positions agreeing with them, so
    /// every codeword reaches the sink at most once.
    fn match_patterns(
        &mut self,
        wt: usize,
        tau: usize,
        cost: f64,
        sink: &mut dyn Sink,
        ops: &mut OpCounter,
    ) {
        let k = self.k;
        let s = self.params.s.min(self.n - k);
        let last_rank = self
            .chosen
            .iter()
            .map(|&j| self.mris[j].rank)
            .max()
            .expect("patterns have positive weight");
        if last_rank + tau >= k {
            return;
        }
        let skip = self.params.pruning && {
            ops.add(1);
            ops.cmp(1);
            bound_exceeds(
                cost + self.tail[self.delta(sink, wt + tau)],
                sink.threshold(),
            )
        };
        if skip {
            return;
        }
        let budget = 2 * self.params.t - wt - tau;
        let order = self.table.reliability_order();
        let mut released: Vec<usize> = (last_rank + 1..last_rank + 1 + tau).collect();
        let mut positions = Vec::with_capacity(k);
        let mut values = Vec::with_capacity(k);
        loop {
            let mut pinned: Vec<usize> = (k..k + tau).collect();
            loop {
                positions.clear();
                values.clear();
                for r in (0..k).filter(|r| !released.contains(r)) {
                    let p = order[r];
                    positions.push(p);
                    values.push(self.hard[p] ^ self.pattern[r]);
                }
                for &r in &pinned {
                    let p = order[r];
                    positions.push(p);
                    values.push(self.hard[p]);
                }
                let word = self
                    .code
                    .codeword_from_info_set_counted(&positions, &values, ops)
                    .expect("any k positions of an MDS code are an information set");
                ops.reencodings += 1;
                let agrees = |r: usize| word[order[r]] == self.hard[order[r]];
                let canonical = released.iter().all(|&r| !agrees(r))
                    && (k..pinned[tau - 1]).all(|r| !agrees(r) || pinned.contains(&r));
                let mismatches = (k..k + s).filter(|&r| !agrees(r)).count();
                ops.cmp((s + tau) as u64 + 1);
                if canonical && (mismatches <= budget || !self.params.verify_band) {
                    let ew = self.weight(&word, ops);
                    ops.candidates += 1;
                    sink.consider(&word, ew, &self.hard, ops);
                }
                if !next_combination(&mut pinned, k + s) {
                    break;
                }
            }
            if !next_combination(&mut released, k) {
                break;
            }
        }
    }
}
