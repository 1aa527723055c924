//! Reed-Solomon and extended Reed-Solomon codes.
//!
//! Two families are supported:
//!
//! * cyclic `(q-1, k)` codes with generator polynomial
//!   `g(x) = (x - α^b)…(x - α^{b+n-k-1})`, position `j` having locator `α^j`;
//! * extended codes of length `n <= q` with `b = 1`. Slot 0 holds the
//!   extension symbol `c_{-1} = Σ c_i` (locator 0), slot `s >= 1` the symbol
//!   with locator `α^{s-1}`. For `n = q` this is the classical extended code;
//!   for `n < q` the trailing positions are punctured. These are exactly the
//!   codes spanned by the bottom rows of the RS polar kernel.
//!
//! Erasures are filled with the Forney formula
//! `y_j = X_j^{-b} Γ(X_j^{-1}) / Π_{l≠j} (1 - X_l X_j^{-1})` with
//! `Γ = Λ S mod x^{d-1}`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldTable, Symbol};
use crate::ops::OpCounter;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    /// Cyclic code of length `q - 1` with first root `α^b`.
    Cyclic { b: u32 },
    /// Extended (possibly punctured) code with `b = 1`.
    Extended,
}

/// Parameters of an `(n, k, n - k + 1)` Reed-Solomon code.
#[derive(Debug, Clone)]
pub struct RsCode {
    field: Arc<FieldTable>,
    n: usize,
    k: usize,
    kind: CodeKind,
    locators: Vec<Symbol>,
}

impl RsCode {
    /// Cyclic `(q-1, k)` code with roots `α^b, …, α^{b+n-k-1}`.
    pub fn cyclic(field: Arc<FieldTable>, k: usize, b: u32) -> Result<Self> {
        let n = field.order();
        Self::build(field, n, k, CodeKind::Cyclic { b })
    }

    /// Extended `(q, k)` code.
    pub fn extended(field: Arc<FieldTable>, k: usize) -> Result<Self> {
        let n = field.q();
        Self::build(field, n, k, CodeKind::Extended)
    }

    /// Evaluation code of polynomials of degree `< k` at the first `n`
    /// points `0, 1, α, …, α^{n-2}`.
    pub fn evaluation(field: Arc<FieldTable>, n: usize, k: usize) -> Result<Self> {
        Self::build(field, n, k, CodeKind::Extended)
    }

    fn build(field: Arc<FieldTable>, n: usize, k: usize, kind: CodeKind) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidCode(format!(
                "need 1 <= k <= n, got n={n} k={k}"
            )));
        }
        if n > field.q() || n < 2 {
            return Err(Error::InvalidCode(format!(
                "length {n} not supported over GF({})",
                field.q()
            )));
        }
        let locators = match kind {
            CodeKind::Cyclic { .. } => (0..n).map(|j| field.exp(j as i64)).collect(),
            CodeKind::Extended => std::iter::once(0)
                .chain((1..n).map(|s| field.exp(s as i64 - 1)))
                .collect(),
        };
        Ok(Self {
            field,
            n,
            k,
            kind,
            locators,
        })
    }

    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldTable> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum distance `n - k + 1`.
    pub fn d(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn is_extended(&self) -> bool {
        matches!(self.kind, CodeKind::Extended)
    }

    /// First consecutive root exponent.
    pub fn b(&self) -> u32 {
        match self.kind {
            CodeKind::Cyclic { b } => b,
            CodeKind::Extended => 1,
        }
    }

    /// Locator (evaluation point) of each slot.
    pub fn locators(&self) -> &[Symbol] {
        &self.locators
    }

    /// The member of the nested family with dimension `k - 1`.
    pub fn subcode(&self) -> Result<Self> {
        Self::build(self.field.clone(), self.n, self.k - 1, self.kind)
    }

    /// Same code family with a different dimension.
    pub fn with_dimension(&self, k: usize) -> Result<Self> {
        Self::build(self.field.clone(), self.n, k, self.kind)
    }

    fn check_word(&self, word: &[Symbol]) -> Result<()> {
        if word.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: word.len(),
            });
        }
        if let Some(&bad) = word.iter().find(|&&v| v as usize >= self.field.q()) {
            return Err(Error::SymbolOutOfRange(bad as usize));
        }
        Ok(())
    }

    /// Generator polynomial of a cyclic code, ascending coefficients.
    pub fn generator_poly(&self) -> Result<Vec<Symbol>> {
        let CodeKind::Cyclic { b } = self.kind else {
            return Err(Error::InvalidCode(
                "extended codes have no generator polynomial".into(),
            ));
        };
        let f = &self.field;
        let mut g = vec![1];
        for i in 0..(self.n - self.k) {
            let root = f.exp(b as i64 + i as i64);
            g = f.poly_mul(&g, &[root, 1]);
        }
        Ok(g)
    }

    /// Systematic encoding. Cyclic codes place the message on positions
    /// `n-k..n`, extended codes on the last `k` slots.
    pub fn encode(&self, message: &[Symbol]) -> Result<Vec<Symbol>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: message.len(),
            });
        }
        if let Some(&bad) = message.iter().find(|&&v| v as usize >= self.field.q()) {
            return Err(Error::SymbolOutOfRange(bad as usize));
        }
        let r = self.n - self.k;
        match self.kind {
            CodeKind::Cyclic { .. } => {
                let f = &self.field;
                let g = self.generator_poly()?;
                // remainder of x^r m(x) modulo the monic g(x)
                let mut buf = vec![0; self.n];
                buf[r..].copy_from_slice(message);
                for i in (r..self.n).rev() {
                    let coef = buf[i];
                    if coef == 0 {
                        continue;
                    }
                    for (j, &gj) in g.iter().enumerate() {
                        buf[i - r + j] ^= f.mul(coef, gj);
                    }
                }
                let mut cw = buf;
                cw[r..].copy_from_slice(message);
                Ok(cw)
            }
            CodeKind::Extended => {
                let positions: Vec<usize> = (r..self.n).collect();
                self.codeword_from_info_set(&positions, message)
            }
        }
    }

    /// Parity checks of a word; all zero iff the word is a codeword.
    ///
    /// For cyclic codes these are the power sums
    /// `S_i = Σ_j y_j α^{(b+i)j}`, `0 <= i < n-k`. For extended codes the
    /// checks are `Σ_s v_s x_s^r y_s`, `0 <= r < n-k`, with `x_s` the slot
    /// locators and `v_s = 1 / Π_{m≠s}(x_s - x_m)`; when `n = q` all `v_s`
    /// are 1, so check 0 is the overall parity and check `r >= 1` is the
    /// power sum of the inner word at `α^r`.
    pub fn syndromes(&self, received: &[Symbol]) -> Result<Vec<Symbol>> {
        self.check_word(received)?;
        let f = &self.field;
        let r = self.n - self.k;
        let mut out = vec![0; r];
        match self.kind {
            CodeKind::Cyclic { b } => {
                for (j, &y) in received.iter().enumerate() {
                    if y == 0 {
                        continue;
                    }
                    for (i, s) in out.iter_mut().enumerate() {
                        *s ^= f.mul(y, f.exp(((b as usize + i) * j) as i64));
                    }
                }
            }
            CodeKind::Extended => {
                let weights = self.dual_multipliers();
                for (slot, &y) in received.iter().enumerate() {
                    if y == 0 {
                        continue;
                    }
                    let yv = f.mul(y, weights[slot]);
                    let x = self.locators[slot];
                    for (i, s) in out.iter_mut().enumerate() {
                        *s ^= f.mul(yv, f.pow(x, i as i64));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_codeword(&self, word: &[Symbol]) -> bool {
        self.syndromes(word)
            .map(|s| s.iter().all(|&v| v == 0))
            .unwrap_or(false)
    }

    /// Column multipliers `1 / Π_{m≠s}(x_s - x_m)` of the dual code.
    fn dual_multipliers(&self) -> Vec<Symbol> {
        let f = &self.field;
        (0..self.n)
            .map(|s| {
                let prod = (0..self.n)
                    .filter(|&m| m != s)
                    .fold(1, |acc, m| f.mul(acc, self.locators[s] ^ self.locators[m]));
                f.inv_nonzero(prod)
            })
            .collect()
    }

    /// Weights `w` such that the subcode of dimension `k - 1` is
    /// `{c : Σ_s w_s c_s = 0}` within this code.
    pub fn subcode_functional(&self) -> Vec<Symbol> {
        let f = &self.field;
        match self.kind {
            CodeKind::Cyclic { b } => {
                let e = (b as usize + self.n - self.k) as i64;
                (0..self.n).map(|j| f.exp(e * j as i64)).collect()
            }
            CodeKind::Extended => {
                // the coefficient of x^{k-1} of the interpolating polynomial
                let v = self.dual_multipliers();
                let e = (self.n - self.k) as i64;
                (0..self.n)
                    .map(|s| f.mul(v[s], f.pow(self.locators[s], e)))
                    .collect()
            }
        }
    }

    /// Fills erased positions (`None`) of a word whose known symbols agree
    /// with some codeword. Pure erasure filling, no error correction.
    pub fn decode_erasures(&self, received: &[Option<Symbol>]) -> Result<Vec<Symbol>> {
        self.decode_erasures_counted(received, &mut OpCounter::new())
    }

    pub fn decode_erasures_counted(
        &self,
        received: &[Option<Symbol>],
        ops: &mut OpCounter,
    ) -> Result<Vec<Symbol>> {
        if received.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: received.len(),
            });
        }
        if let Some(bad) = received
            .iter()
            .flatten()
            .find(|&&v| v as usize >= self.field.q())
        {
            return Err(Error::SymbolOutOfRange(*bad as usize));
        }
        let erased: Vec<usize> = (0..self.n).filter(|&i| received[i].is_none()).collect();
        let capacity = self.n - self.k;
        if erased.len() > capacity {
            return Err(Error::TooManyErasures {
                erasures: erased.len(),
                capacity,
            });
        }
        let mut out: Vec<Symbol> = received.iter().map(|v| v.unwrap_or(0)).collect();
        if erased.is_empty() {
            return Ok(out);
        }
        let plan = ErasurePlan::new(self, &erased, ops);
        let mut syn = vec![0; plan.num_syndromes()];
        for (slot, v) in received.iter().enumerate() {
            if let Some(y) = *v {
                plan.accumulate(slot, y, &mut syn, ops);
            }
        }
        plan.fill(&syn, &mut out, ops);
        Ok(out)
    }

    /// The unique codeword taking `values` on `positions` (`k` distinct slots).
    pub fn codeword_from_info_set(
        &self,
        positions: &[usize],
        values: &[Symbol],
    ) -> Result<Vec<Symbol>> {
        self.codeword_from_info_set_counted(positions, values, &mut OpCounter::new())
    }

    pub fn codeword_from_info_set_counted(
        &self,
        positions: &[usize],
        values: &[Symbol],
        ops: &mut OpCounter,
    ) -> Result<Vec<Symbol>> {
        if positions.len() != self.k || values.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: positions.len().max(values.len()),
            });
        }
        let mut received = vec![None; self.n];
        for (&p, &v) in positions.iter().zip(values) {
            if p >= self.n || received[p].is_some() {
                return Err(Error::BadPosition(p));
            }
            received[p] = Some(v);
        }
        self.decode_erasures_counted(&received, ops)
    }

    /// Generator matrix that is the identity on `positions` (in the given
    /// order), built row by row from erasure decoding of unit vectors.
    pub fn mris_generator_matrix(&self, positions: &[usize]) -> Result<SystematicMatrix> {
        self.mris_generator_matrix_counted(positions, &mut OpCounter::new())
    }

    pub fn mris_generator_matrix_counted(
        &self,
        positions: &[usize],
        ops: &mut OpCounter,
    ) -> Result<SystematicMatrix> {
        if positions.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: positions.len(),
            });
        }
        let mut is_info = vec![false; self.n];
        for &p in positions {
            if p >= self.n || is_info[p] {
                return Err(Error::BadPosition(p));
            }
            is_info[p] = true;
        }
        let checks: Vec<usize> = (0..self.n).filter(|&i| !is_info[i]).collect();
        let plan = ErasurePlan::new(self, &checks, ops);
        let mut rows = Vec::with_capacity(self.k);
        let mut syn = vec![0; plan.num_syndromes()];
        for &p in positions {
            let mut row = vec![0; self.n];
            row[p] = 1;
            if !checks.is_empty() {
                syn.iter_mut().for_each(|s| *s = 0);
                plan.accumulate(p, 1, &mut syn, ops);
                plan.fill(&syn, &mut row, ops);
            }
            rows.push(row);
        }
        Ok(SystematicMatrix {
            n: self.n,
            info_positions: positions.to_vec(),
            rows,
        })
    }

    /// Turns an information-set-systematic matrix of this code into the one
    /// of the dimension `k - 1` subcode on the first `k - 1` info positions.
    /// The last info position joins the check part.
    pub fn nested_shrink(&self, matrix: &SystematicMatrix) -> Result<SystematicMatrix> {
        let mut m = matrix.clone();
        self.nested_shrink_in_place(&mut m, &mut OpCounter::new())?;
        Ok(m)
    }

    pub fn nested_shrink_in_place(
        &self,
        matrix: &mut SystematicMatrix,
        ops: &mut OpCounter,
    ) -> Result<()> {
        let kk = matrix.rows.len();
        if kk == 0 {
            return Err(Error::InvalidCode(
                "cannot shrink a zero-dimensional matrix".into(),
            ));
        }
        if kk != self.k || matrix.n != self.n {
            return Err(Error::InvalidCode(format!(
                "matrix is {}x{}, code is ({}, {})",
                kk, matrix.n, self.n, self.k
            )));
        }
        if kk == 1 {
            matrix.rows.clear();
            matrix.info_positions.clear();
            return Ok(());
        }
        let f = &self.field;
        let w = self.subcode_functional();
        let mut is_info = vec![false; self.n];
        for &p in &matrix.info_positions {
            is_info[p] = true;
        }
        let checks: Vec<usize> = (0..self.n).filter(|&j| !is_info[j]).collect();
        let phi = |row: &[Symbol], p: usize, ops: &mut OpCounter| {
            let mut acc = w[p];
            for &j in &checks {
                acc ^= f.mul(w[j], row[j]);
            }
            ops.mul(checks.len() as u64);
            ops.add(checks.len() as u64);
            acc
        };
        let last = kk - 1;
        let p_last = matrix.info_positions[last];
        let phi_last = phi(&matrix.rows[last], p_last, ops);
        if phi_last == 0 {
            return Err(Error::SingularMatrix);
        }
        let inv_last = f.inv_nonzero(phi_last);
        let (head, tail) = matrix.rows.split_at_mut(last);
        let last_row = &tail[0];
        for (s, row) in head.iter_mut().enumerate() {
            let p = matrix.info_positions[s];
            let coef = f.mul(phi(row, p, ops), inv_last);
            row[p_last] = coef;
            if coef == 0 {
                continue;
            }
            for &j in &checks {
                row[j] ^= f.mul(coef, last_row[j]);
            }
            ops.mul(checks.len() as u64 + 1);
            ops.add(checks.len() as u64);
        }
        matrix.rows.pop();
        matrix.info_positions.pop();
        Ok(())
    }
}

/// Generator matrix in systematic form on an arbitrary information set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystematicMatrix {
    n: usize,
    info_positions: Vec<usize>,
    rows: Vec<Vec<Symbol>>,
}

impl SystematicMatrix {
    /// Identity matrix of the full space on the given position order.
    pub fn identity(order: &[usize]) -> Self {
        let n = order.len();
        let rows = order
            .iter()
            .map(|&p| {
                let mut r = vec![0; n];
                r[p] = 1;
                r
            })
            .collect();
        Self {
            n,
            info_positions: order.to_vec(),
            rows,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn rows(&self) -> &[Vec<Symbol>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.rows[i]
    }

    /// Codeword with the given values on the info positions.
    pub fn encode(&self, field: &FieldTable, info: &[Symbol]) -> Vec<Symbol> {
        field.vec_mat(info, &self.rows)
    }
}

/// Precomputed Forney machinery for a fixed erasure set.
///
/// Extended codes are reduced to the inner cyclic code of length `q - 1`:
/// punctured slots become extra inner erasures. If the extension slot is
/// erased the inner code with `b = 1` is decoded and the extension filled
/// from the overall parity; otherwise the known extension symbol enters the
/// power sum at `α^0` and the inner code is decoded with `b = 0`.
struct ErasurePlan<'a> {
    code: &'a RsCode,
    b: i64,
    /// Discrete logs of the inner erasure locators.
    exps: Vec<usize>,
    /// Output slot of each inner erasure, `None` for punctured positions.
    slots: Vec<Option<usize>>,
    fill_extension: bool,
    lambda: Vec<Symbol>,
    /// `X_j^{-1}`.
    x_inv: Vec<Symbol>,
    /// `X_j^{-b} / Π_{l≠j}(1 - X_l X_j^{-1})`.
    scale: Vec<Symbol>,
}

impl<'a> ErasurePlan<'a> {
    fn new(code: &'a RsCode, erased: &[usize], ops: &mut OpCounter) -> Self {
        let f = code.field();
        let mut exps = Vec::new();
        let mut slots = Vec::new();
        let mut fill_extension = false;
        let b = match code.kind {
            CodeKind::Cyclic { b } => {
                for &s in erased {
                    exps.push(s);
                    slots.push(Some(s));
                }
                b as i64
            }
            CodeKind::Extended => {
                for &s in erased {
                    if s == 0 {
                        fill_extension = true;
                    } else {
                        exps.push(s - 1);
                        slots.push(Some(s));
                    }
                }
                for e in (code.n - 1)..f.order() {
                    exps.push(e);
                    slots.push(None);
                }
                if fill_extension {
                    1
                } else {
                    0
                }
            }
        };
        let t = exps.len();
        let x: Vec<Symbol> = exps.iter().map(|&e| f.exp(e as i64)).collect();
        let x_inv: Vec<Symbol> = exps.iter().map(|&e| f.exp(-(e as i64))).collect();
        // Λ(x) = Π (1 - X_j x)
        let mut lambda = vec![0; t + 1];
        lambda[0] = 1;
        for (j, &xj) in x.iter().enumerate() {
            for i in (1..=j + 1).rev() {
                lambda[i] ^= f.mul(lambda[i - 1], xj);
            }
        }
        let scale = (0..t)
            .map(|j| {
                let den = (0..t)
                    .filter(|&l| l != j)
                    .fold(1, |acc, l| f.mul(acc, 1 ^ f.mul(x[l], x_inv[j])));
                f.mul(f.exp(-b * exps[j] as i64), f.inv_nonzero(den))
            })
            .collect();
        let tt = t as u64;
        ops.mul(tt * (tt + 1) / 2 + 2 * tt * tt);
        ops.add(tt * (tt + 1) / 2 + tt * tt);
        Self {
            code,
            b,
            exps,
            slots,
            fill_extension,
            lambda,
            x_inv,
            scale,
        }
    }

    /// Number of power sums the key equation needs (`deg Γ < t`).
    fn num_syndromes(&self) -> usize {
        self.exps.len()
    }

    /// Adds the power-sum contributions of a known symbol.
    fn accumulate(&self, slot: usize, y: Symbol, syn: &mut [Symbol], ops: &mut OpCounter) {
        if y == 0 || syn.is_empty() {
            return;
        }
        let f = self.code.field();
        let e = match self.code.kind {
            CodeKind::Cyclic { .. } => slot,
            CodeKind::Extended if slot == 0 => {
                // locator 0 only reaches the α^0 power sum
                if self.b == 0 {
                    syn[0] ^= y;
                    ops.add(1);
                }
                return;
            }
            CodeKind::Extended => slot - 1,
        };
        let log_y = f.log(y) as i64;
        for (i, s) in syn.iter_mut().enumerate() {
            *s ^= f.exp(log_y + (self.b + i as i64) * e as i64);
        }
        ops.mul(syn.len() as u64);
        ops.add(syn.len() as u64);
    }

    /// Writes erased values into `out` given the power sums of the known part.
    fn fill(&self, syn: &[Symbol], out: &mut [Symbol], ops: &mut OpCounter) {
        let f = self.code.field();
        let t = self.exps.len();
        // Γ = Λ S mod x^t
        let gamma: Vec<Symbol> = (0..t)
            .map(|i| (0..=i).fold(0, |acc, a| acc ^ f.mul(self.lambda[a], syn[i - a])))
            .collect();
        let mut punctured_sum = 0;
        for j in 0..t {
            let v = f.mul(f.eval_poly(&gamma, self.x_inv[j]), self.scale[j]);
            match self.slots[j] {
                Some(slot) => out[slot] = v,
                None => punctured_sum ^= v,
            }
        }
        let tt = t as u64;
        ops.mul(tt * (tt + 1) / 2 + tt * (tt + 1));
        ops.add(tt * (tt + 1) / 2 + tt * tt);
        if self.fill_extension {
            // c_{-1} = Σ over every inner position, punctured ones included
            out[0] = out[1..].iter().fold(punctured_sum, |acc, &v| acc ^ v);
            ops.add(self.code.n as u64);
        }
    }
}
