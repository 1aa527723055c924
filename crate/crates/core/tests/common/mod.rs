#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rspolar::channel::{frame_rng, ChannelModel};
use rspolar::osd::LlrTable;
use rspolar::polar::{digit_reversal, rs_kernel, Kernel};
use rspolar::{FieldTable, RsCode, Symbol};

pub fn field(m: u32) -> Arc<FieldTable> {
    Arc::new(FieldTable::new(m).unwrap())
}

/// Every codeword, by encoding all `q^k` messages.
pub fn all_codewords(code: &RsCode) -> Vec<Vec<Symbol>> {
    let q = code.field().q();
    let k = code.k();
    let total = q.pow(k as u32);
    (0..total)
        .map(|mut idx| {
            let msg: Vec<Symbol> = (0..k)
                .map(|_| {
                    let s = (idx % q) as Symbol;
                    idx /= q;
                    s
                })
                .collect();
            code.encode(&msg).unwrap()
        })
        .collect()
}

/// Minimum-weight codeword, first one on ties.
pub fn ml_decode<'a>(table: &LlrTable, codewords: &'a [Vec<Symbol>]) -> (&'a [Symbol], f64) {
    let mut best = (&codewords[0][..], f64::INFINITY);
    for c in codewords {
        let ew = table.ellipsoidal_weight(c);
        if ew < best.1 {
            best = (c, ew);
        }
    }
    best
}

pub fn random_message(code: &RsCode, rng: &mut impl Rng) -> Vec<Symbol> {
    let q = code.field().q();
    (0..code.k())
        .map(|_| rng.random_range(0..q) as Symbol)
        .collect()
}

/// Transmits a random codeword over BPSK/AWGN and returns it with the LLR
/// table of the received frame.
pub fn awgn_frame(code: &RsCode, eb_n0_db: f64, seed: u64, frame: u64) -> (Vec<Symbol>, LlrTable) {
    let rate = code.k() as f64 / code.n() as f64;
    let ch = ChannelModel::awgn(eb_n0_db, rate, code.field().m(), seed).unwrap();
    let mut rng = frame_rng(seed ^ 0x5eed, frame);
    let cw = code.encode(&random_message(code, &mut rng)).unwrap();
    let obs = ch.transmit(&cw, frame);
    let table = ch.symbol_llrs(&obs).unwrap();
    (cw, table)
}

/// Random metric table with a few strongly unreliable positions.
pub fn random_table(n: usize, q: usize, rng: &mut impl Rng) -> LlrTable {
    let raw: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let scale = if rng.random_bool(0.3) { 0.3 } else { 3.0 };
            (0..q).map(|_| rng.random::<f64>() * scale).collect()
        })
        .collect();
    LlrTable::from_metrics(&raw).unwrap()
}

/// Row-reduces `rows` so the columns `positions` form an identity.
pub fn gauss_systematic(
    f: &FieldTable,
    mut rows: Vec<Vec<Symbol>>,
    positions: &[usize],
) -> Vec<Vec<Symbol>> {
    let k = rows.len();
    for (r, &p) in positions.iter().enumerate() {
        let pivot = (r..k).find(|&i| rows[i][p] != 0).expect("information set");
        rows.swap(r, pivot);
        let inv = f.inv(rows[r][p]).unwrap();
        rows[r] = rows[r].iter().map(|&v| f.mul(v, inv)).collect();
        for i in 0..k {
            if i != r && rows[i][p] != 0 {
                let c = rows[i][p];
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x ^= f.mul(c, y);
                }
            }
        }
    }
    rows
}

pub fn unit_generator(code: &RsCode) -> Vec<Vec<Symbol>> {
    (0..code.k())
        .map(|i| {
            let mut msg = vec![0; code.k()];
            msg[i] = 1;
            code.encode(&msg).unwrap()
        })
        .collect()
}

pub fn kernel(m: u32, l: usize) -> Arc<Kernel> {
    Arc::new(rs_kernel(field(m), l).unwrap())
}

/// Dense `B·F^{⊗m}`: entry `(i, j)` is `Π_d F[π(i)_d][j_d]`.
pub fn dense_generator(k: &Kernel, m: u32) -> Vec<Vec<Symbol>> {
    let l = k.l();
    let n = l.pow(m);
    let f = k.field();
    (0..n)
        .map(|i| {
            let pi = digit_reversal(i, l, m).unwrap();
            (0..n)
                .map(|j| {
                    let (mut a, mut b, mut v) = (pi, j, 1);
                    for _ in 0..m {
                        v = f.mul(v, k.rows()[a % l][b % l]);
                        a /= l;
                        b /= l;
                    }
                    v
                })
                .collect()
        })
        .collect()
}

pub fn random_word(len: usize, q: usize, rng: &mut impl Rng) -> Vec<Symbol> {
    (0..len).map(|_| rng.random_range(0..q) as Symbol).collect()
}

pub fn random_llrs(n: usize, q: usize, rng: &mut impl Rng) -> LlrTable {
    let raw: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..q).map(|_| rng.random::<f64>() * 4.0).collect())
        .collect();
    LlrTable::from_metrics(&raw).unwrap()
}

pub fn delta_llrs(word: &[Symbol], q: usize) -> LlrTable {
    let raw: Vec<Vec<f64>> = word
        .iter()
        .map(|&c| {
            (0..q)
                .map(|z| if z == c as usize { 0.0 } else { 50.0 })
                .collect()
        })
        .collect();
    LlrTable::from_metrics(&raw).unwrap()
}

/// All inputs `prefix ‖ v ‖ suffix` of length `n`, grouped by `v`.
pub fn for_each_completion(
    prefix: &[Symbol],
    n: usize,
    q: usize,
    mut visit: impl FnMut(Symbol, &[Symbol]),
) {
    let free = n - prefix.len() - 1;
    let mut u = prefix.to_vec();
    u.resize(n, 0);
    for v in 0..q {
        u[prefix.len()] = v as Symbol;
        for idx in 0..q.pow(free as u32) {
            let mut rest = idx;
            for slot in u[prefix.len() + 1..].iter_mut() {
                *slot = (rest % q) as Symbol;
                rest /= q;
            }
            visit(v as Symbol, &u);
        }
    }
}

pub fn normalized(row: &[f64]) -> Vec<f64> {
    let min = row.iter().copied().fold(f64::INFINITY, f64::min);
    row.iter().map(|v| v - min).collect()
}

pub fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
    }
}

/// Max-approximated SC with a brute-force search over every kernel suffix.
pub fn min_sum_oracle(
    k: &Kernel,
    frozen: &[bool],
    base: usize,
    rows: &[Vec<f64>],
    u_hat: &mut [Symbol],
    tables: &mut [Vec<f64>],
) -> Vec<Symbol> {
    let l = k.l();
    let q = k.field().q();
    if rows.len() == 1 {
        let row = &rows[0];
        let mut best = 0;
        for z in 0..q {
            if row[z] < row[best] {
                best = z;
            }
        }
        let d = if frozen[base] { 0 } else { best as Symbol };
        u_hat[base] = d;
        tables[base] = row.clone();
        return vec![d];
    }
    let sub = rows.len() / l;
    let mut inputs = vec![Vec::<Symbol>::new(); sub];
    for a in 0..l {
        let child: Vec<Vec<f64>> = (0..sub)
            .map(|beta| {
                let node = &rows[beta * l..(beta + 1) * l];
                let mut best = vec![f64::INFINITY; q];
                for_each_completion(&inputs[beta], l, q, |v, u| {
                    let c = k.apply(u);
                    let ew: f64 = c
                        .iter()
                        .enumerate()
                        .map(|(j, &z)| node[j][z as usize])
                        .sum();
                    best[v as usize] = best[v as usize].min(ew);
                });
                normalized(&best)
            })
            .collect();
        let x = min_sum_oracle(k, frozen, base + a * sub, &child, u_hat, tables);
        for (inp, v) in inputs.iter_mut().zip(x) {
            inp.push(v);
        }
    }
    inputs.iter().flat_map(|u| k.apply(u)).collect()
}
