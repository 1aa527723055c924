//! Polar codes with Reed-Solomon kernels.
//!
//! A code of length `n = l^m` maps the input `u` to `u·B·F^{⊗m}`, where `B`
//! is the base-`l` digit reversal. Two successive-cancellation decoders are
//! provided: an exact one summing probabilities over all kernel suffixes
//! (small kernels only), and an approximate one that replaces each sum by
//! its largest term and obtains it from the order-statistics coset decoder.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldTable, Symbol};
use crate::ops::OpCounter;
use crate::osd::{coset_decode_all, CosetProblem, LlrTable, OsdParams, TupleStream};
use crate::rs::{RsCode, SystematicMatrix};

/// Upper limit on the number of suffix evaluations of the exact decoder.
pub const EXACT_WORK_LIMIT: u128 = 1 << 28;

/// `l × l` kernel whose row `r` evaluates `x^{l-1-r}` at the points
/// `0, 1, α, …, α^{l-2}`, so its last `K` rows generate an `(l, K)`
/// Reed-Solomon code.
#[derive(Debug, Clone)]
pub struct Kernel {
    field: Arc<FieldTable>,
    l: usize,
    rows: Vec<Vec<Symbol>>,
    inverse: Vec<Vec<Symbol>>,
    inverse_columns: Vec<Vec<Symbol>>,
    /// `codes[a]` is spanned by rows `a..l`.
    codes: Vec<RsCode>,
}

/// Reed-Solomon kernel of size `l <= q`.
pub fn rs_kernel(field: Arc<FieldTable>, l: usize) -> Result<Kernel> {
    Kernel::reed_solomon(field, l)
}

impl Kernel {
    pub fn reed_solomon(field: Arc<FieldTable>, l: usize) -> Result<Self> {
        if l < 2 || l > field.q() {
            return Err(Error::InvalidParameters(format!(
                "kernel size {l} must lie in 2..={}",
                field.q()
            )));
        }
        let points: Vec<Symbol> = std::iter::once(0)
            .chain((1..l).map(|j| field.exp(j as i64 - 1)))
            .collect();
        let rows: Vec<Vec<Symbol>> = (0..l)
            .map(|r| {
                points
                    .iter()
                    .map(|&x| field.pow(x, (l - 1 - r) as i64))
                    .collect()
            })
            .collect();
        let inverse = field.invert_matrix(&rows)?;
        let inverse_columns = (0..l)
            .map(|a| inverse.iter().map(|row| row[a]).collect())
            .collect();
        let codes = (0..l)
            .map(|a| RsCode::evaluation(field.clone(), l, l - a))
            .collect::<Result<_>>()?;
        Ok(Self {
            field,
            l,
            rows,
            inverse,
            inverse_columns,
            codes,
        })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldTable> {
        &self.field
    }

    pub fn rows(&self) -> &[Vec<Symbol>] {
        &self.rows
    }

    pub fn row(&self, a: usize) -> &[Symbol] {
        &self.rows[a]
    }

    pub fn inverse(&self) -> &[Vec<Symbol>] {
        &self.inverse
    }

    /// Column `a` of the inverse: `u_a = Σ_j c_j F⁻¹[j][a]` for `c = u·F`.
    pub fn inverse_column(&self, a: usize) -> &[Symbol] {
        &self.inverse_columns[a]
    }

    /// The `(l, l - a)` code spanned by rows `a..l`.
    pub fn phase_code(&self, a: usize) -> &RsCode {
        &self.codes[a]
    }

    /// `u·F`.
    pub fn apply(&self, u: &[Symbol]) -> Vec<Symbol> {
        self.field.vec_mat(u, &self.rows)
    }
}

/// `π(Σ j_i l^i) = Σ j_i l^{m-1-i}`.
pub fn digit_reversal(index: usize, l: usize, m: u32) -> Result<usize> {
    let n = l.pow(m);
    if index >= n {
        return Err(Error::IndexOutOfRange { index, len: n });
    }
    let mut rest = index;
    let mut out = 0;
    for _ in 0..m {
        out = out * l + rest % l;
        rest /= l;
    }
    Ok(out)
}

/// Polar code of length `l^m` with a frozen set of zero inputs.
#[derive(Debug, Clone)]
pub struct PolarCode {
    kernel: Arc<Kernel>,
    m: u32,
    n: usize,
    frozen: Vec<bool>,
}

/// Settings of the approximate decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScParams {
    pub osd: OsdParams,
    /// Skip kernel phases whose whole input sub-block is frozen. Decisions
    /// are unaffected; only the work counters change.
    pub skip_frozen: bool,
}

impl ScParams {
    pub fn new(osd: OsdParams) -> Self {
        Self {
            osd,
            skip_frozen: true,
        }
    }

    /// Order `t` with the whole redundancy of every phase code as control
    /// band.
    pub fn order(t: usize, l: usize) -> Self {
        Self::new(OsdParams::new(t, l))
    }

    /// Exhaustive coset decoding at every phase.
    pub fn exhaustive(l: usize) -> Self {
        Self::order(l, l)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScOutput {
    pub u_hat: Vec<Symbol>,
    /// Table the decision on each input was taken from: normalized
    /// ellipsoidal weights for the approximate decoder. `None` for skipped
    /// frozen inputs.
    pub phase_tables: Vec<Option<Vec<f64>>>,
    pub ops: OpCounter,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutput {
    pub u_hat: Vec<Symbol>,
    /// Unnormalized log-probabilities `ln W^{(i)}(û_0..û_{i-1}, v | y)` for
    /// every input `i` and value `v`, taking `exp(-L)` as channel
    /// likelihoods.
    pub phase_tables: Vec<Vec<f64>>,
}

impl PolarCode {
    pub fn new(kernel: Arc<Kernel>, m: u32, frozen: &[usize]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameters("polar code needs m >= 1".into()));
        }
        let n = kernel.l().pow(m);
        let mut mask = vec![false; n];
        for &i in frozen {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            if std::mem::replace(&mut mask[i], true) {
                return Err(Error::InvalidParameters(format!("index {i} frozen twice")));
            }
        }
        Ok(Self {
            kernel,
            m,
            n,
            frozen: mask,
        })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn kernel_arc(&self) -> &Arc<Kernel> {
        &self.kernel
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.frozen.iter().filter(|&&f| !f).count()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen_set(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.frozen[i]).collect()
    }

    pub fn info_set(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.frozen[i]).collect()
    }

    /// Input vector carrying `info` on the unfrozen indices.
    pub fn embed(&self, info: &[Symbol]) -> Result<Vec<Symbol>> {
        let k = self.k();
        if info.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                actual: info.len(),
            });
        }
        let mut u = vec![0; self.n];
        for (&i, &v) in self.info_set().iter().zip(info) {
            u[i] = v;
        }
        Ok(u)
    }

    /// `u·B·F^{⊗m}` for an input with zeros on the frozen set.
    pub fn encode(&self, u: &[Symbol]) -> Result<Vec<Symbol>> {
        if u.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: u.len(),
            });
        }
        if let Some(i) = (0..self.n).find(|&i| self.frozen[i] && u[i] != 0) {
            return Err(Error::FrozenViolation(i));
        }
        if let Some(&bad) = u.iter().find(|&&v| v as usize >= self.kernel.field().q()) {
            return Err(Error::SymbolOutOfRange(bad as usize));
        }
        Ok(self.transform(u))
    }

    /// `u·B·F^{⊗m}` for any input.
    pub fn transform(&self, u: &[Symbol]) -> Vec<Symbol> {
        transform(&self.kernel, u)
    }

    fn check_table(&self, table: &LlrTable) -> Result<()> {
        if table.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: table.len(),
            });
        }
        if table.q() != self.kernel.field().q() {
            return Err(Error::LengthMismatch {
                expected: self.kernel.field().q(),
                actual: table.q(),
            });
        }
        Ok(())
    }

    /// Approximate SC decoding.
    pub fn sc_decode_approx(&self, table: &LlrTable, params: ScParams) -> Result<ScOutput> {
        self.check_table(table)?;
        let mut dec = Approx::new(self, params, None);
        let rows = flat_rows(table);
        dec.block(0, self.m, rows);
        Ok(dec.finish())
    }

    /// Approximate SC decoding with every decision replaced by the true
    /// input, producing the table of every phase.
    pub fn sc_decode_genie(
        &self,
        table: &LlrTable,
        truth: &[Symbol],
        params: ScParams,
    ) -> Result<ScOutput> {
        self.check_table(table)?;
        if truth.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: truth.len(),
            });
        }
        let mut dec = Approx::new(self, params, Some(truth));
        dec.block(0, self.m, flat_rows(table));
        Ok(dec.finish())
    }

    /// Number of suffix evaluations the exact decoder would need.
    pub fn exact_work(&self) -> u128 {
        let l = self.kernel.l() as u128;
        let q = self.kernel.field().q() as u128;
        let nodes = self.n as u128 / l;
        let per_node: u128 = (0..l).map(|a| q.saturating_pow((l - a) as u32) * l).sum();
        nodes
            .saturating_mul(per_node)
            .saturating_mul(self.m as u128)
    }

    /// Exact SC decoding by summation over all kernel suffixes.
    pub fn sc_decode_exact(&self, table: &LlrTable) -> Result<ExactOutput> {
        self.check_table(table)?;
        let needed = self.exact_work();
        if needed > EXACT_WORK_LIMIT {
            return Err(Error::ResourceGuard {
                needed,
                limit: EXACT_WORK_LIMIT,
            });
        }
        let q = table.q();
        let rows: Vec<f64> = flat_rows(table).into_iter().map(|v| -v).collect();
        let mut dec = Exact {
            code: self,
            q,
            u_hat: vec![0; self.n],
            tables: vec![Vec::new(); self.n],
        };
        dec.block(0, self.m, rows);
        Ok(ExactOutput {
            u_hat: dec.u_hat,
            phase_tables: dec.tables,
        })
    }
}

fn flat_rows(table: &LlrTable) -> Vec<f64> {
    (0..table.len())
        .flat_map(|i| table.row(i).iter().copied())
        .collect()
}

fn transform(kernel: &Kernel, u: &[Symbol]) -> Vec<Symbol> {
    let l = kernel.l();
    if u.len() == 1 {
        return u.to_vec();
    }
    let sub = u.len() / l;
    let parts: Vec<Vec<Symbol>> = u.chunks(sub).map(|c| transform(kernel, c)).collect();
    let f = kernel.field();
    let mut out = vec![0; u.len()];
    for beta in 0..sub {
        for (a, part) in parts.iter().enumerate() {
            let v = part[beta];
            if v == 0 {
                continue;
            }
            for (o, &g) in out[beta * l..(beta + 1) * l].iter_mut().zip(kernel.row(a)) {
                *o ^= f.mul(v, g);
            }
        }
    }
    out
}

fn argmin(row: &[f64]) -> Symbol {
    let mut best = 0;
    for (z, &v) in row.iter().enumerate() {
        if v < row[best] {
            best = z;
        }
    }
    best as Symbol
}

/// Per-node state kept while the decoder visits the node's phases.
struct Node {
    table: LlrTable,
    tuples: TupleStream,
    generator: SystematicMatrix,
    offset: Vec<Symbol>,
}

struct Approx<'a> {
    code: &'a PolarCode,
    params: ScParams,
    genie: Option<&'a [Symbol]>,
    u_hat: Vec<Symbol>,
    tables: Vec<Option<Vec<f64>>>,
    ops: OpCounter,
}

impl<'a> Approx<'a> {
    fn new(code: &'a PolarCode, params: ScParams, genie: Option<&'a [Symbol]>) -> Self {
        Self {
            code,
            params,
            genie,
            u_hat: vec![0; code.n],
            tables: vec![None; code.n],
            ops: OpCounter::new(),
        }
    }

    fn finish(self) -> ScOutput {
        ScOutput {
            u_hat: self.u_hat,
            phase_tables: self.tables,
            ops: self.ops,
        }
    }

    fn skippable(&self, base: usize, len: usize) -> bool {
        self.genie.is_none()
            && self.params.skip_frozen
            && self.code.frozen[base..base + len].iter().all(|&f| f)
    }

    /// Decodes inputs `base..base + l^level` from their channel rows and
    /// returns their transform.
    fn block(&mut self, base: usize, level: u32, rows: Vec<f64>) -> Vec<Symbol> {
        let kernel = &*self.code.kernel;
        let l = kernel.l();
        let q = kernel.field().q();
        if level == 0 {
            let decision = match self.genie {
                Some(truth) => truth[base],
                None if self.code.frozen[base] => 0,
                None => {
                    self.ops.cmp(q as u64 - 1);
                    argmin(&rows)
                }
            };
            self.u_hat[base] = decision;
            self.tables[base] = Some(rows);
            return vec![decision];
        }
        let len = l.pow(level);
        let sub = len / l;
        let mut nodes: Vec<Node> = rows
            .chunks(l * q)
            .map(|chunk| {
                let table =
                    LlrTable::from_flat(q, chunk.to_vec()).expect("decoder tables are finite");
                let tuples = table.tuples();
                let sorted = l * (q - 1);
                self.ops
                    .cmp((sorted as f64 * (sorted as f64).log2()).ceil() as u64);
                self.ops.add((l * q) as u64);
                let generator = SystematicMatrix::identity(table.reliability_order());
                Node {
                    table,
                    tuples,
                    generator,
                    offset: vec![0; l],
                }
            })
            .collect();
        let f = kernel.field();
        for a in 0..l {
            let sub_base = base + a * sub;
            let skip = self.skippable(sub_base, sub);
            let mut child_rows = Vec::new();
            if !skip {
                child_rows.reserve(sub * q);
            }
            for node in nodes.iter_mut() {
                let next = if a + 1 < l {
                    let mut g = node.generator.clone();
                    kernel
                        .phase_code(a)
                        .nested_shrink_in_place(&mut g, &mut self.ops)
                        .expect("kernel rows generate the nested family");
                    Some(g)
                } else {
                    None
                };
                if !skip {
                    let problem = CosetProblem {
                        code: kernel.phase_code(a),
                        generator: &node.generator,
                        sub_generator: next.as_ref(),
                        coset_row: kernel.row(a),
                        inverse_column: kernel.inverse_column(a),
                        offset: &node.offset,
                    };
                    let entries = coset_decode_all(
                        &node.table,
                        &node.tuples,
                        &problem,
                        self.params.osd,
                        &mut self.ops,
                    );
                    child_rows.extend_from_slice(&entries);
                }
                if let Some(g) = next {
                    node.generator = g;
                }
            }
            if skip {
                for i in sub_base..sub_base + sub {
                    self.u_hat[i] = 0;
                    self.tables[i] = None;
                }
                continue;
            }
            let x = self.block(sub_base, level - 1, child_rows);
            for (node, &v) in nodes.iter_mut().zip(&x) {
                if v == 0 {
                    continue;
                }
                for (o, &g) in node.offset.iter_mut().zip(kernel.row(a)) {
                    *o ^= f.mul(v, g);
                }
                self.ops.mul(l as u64);
                self.ops.add(l as u64);
            }
        }
        nodes.into_iter().flat_map(|node| node.offset).collect()
    }
}

struct Exact<'a> {
    code: &'a PolarCode,
    q: usize,
    u_hat: Vec<Symbol>,
    tables: Vec<Vec<f64>>,
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

impl Exact<'_> {
    /// `rows` holds log-likelihoods, `l^level` rows of `q` values.
    fn block(&mut self, base: usize, level: u32, rows: Vec<f64>) -> Vec<Symbol> {
        let kernel = &*self.code.kernel;
        let l = kernel.l();
        let q = self.q;
        if level == 0 {
            let decision = if self.code.frozen[base] {
                0
            } else {
                // argmax with ties to the smallest symbol
                let neg: Vec<f64> = rows.iter().map(|v| -v).collect();
                argmin(&neg)
            };
            self.u_hat[base] = decision;
            self.tables[base] = rows;
            return vec![decision];
        }
        let sub = l.pow(level) / l;
        let f = kernel.field();
        let mut offsets = vec![vec![0 as Symbol; l]; sub];
        for a in 0..l {
            let mut child = Vec::with_capacity(sub * q);
            for (beta, offset) in offsets.iter().enumerate() {
                let lw = &rows[beta * l * q..(beta + 1) * l * q];
                child.extend(phase_log_probs(kernel, lw, q, a, offset));
            }
            let x = self.block(base + a * sub, level - 1, child);
            for (offset, &v) in offsets.iter_mut().zip(&x) {
                for (o, &g) in offset.iter_mut().zip(kernel.row(a)) {
                    *o ^= f.mul(v, g);
                }
            }
        }
        offsets.into_iter().flatten().collect()
    }
}

/// `ln Σ_{suffix} Π_j W_j(c_j)` for every value of input `a`, where
/// `c = offset + u_a·F[a] + Σ_{b>a} u_b·F[b]`.
fn phase_log_probs(kernel: &Kernel, lw: &[f64], q: usize, a: usize, offset: &[Symbol]) -> Vec<f64> {
    let l = kernel.l();
    let f = kernel.field();
    let free = l - 1 - a;
    let count = q.pow(free as u32);
    let mut terms = Vec::with_capacity(count);
    let mut word = vec![0 as Symbol; l];
    (0..q)
        .map(|v| {
            terms.clear();
            let mut suffix = vec![0 as Symbol; free];
            for idx in 0..count {
                let mut rest = idx;
                for s in suffix.iter_mut() {
                    *s = (rest % q) as Symbol;
                    rest /= q;
                }
                word.copy_from_slice(offset);
                let inputs = std::iter::once((a, v as Symbol))
                    .chain(suffix.iter().enumerate().map(|(i, &s)| (a + 1 + i, s)));
                for (row, s) in inputs {
                    if s == 0 {
                        continue;
                    }
                    for (w, &g) in word.iter_mut().zip(kernel.row(row)) {
                        *w ^= f.mul(s, g);
                    }
                }
                terms.push(
                    word.iter()
                        .enumerate()
                        .map(|(j, &c)| lw[j * q + c as usize])
                        .sum(),
                );
            }
            log_sum_exp(&terms)
        })
        .collect()
}
