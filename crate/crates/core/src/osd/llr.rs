use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gf::Symbol;

/// Per-position symbol log-likelihood ratios `L_i[z]` with hard decisions,
/// reliabilities and the reliability order.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrTable {
    q: usize,
    len: usize,
    values: Vec<f64>,
    hard: Vec<Symbol>,
    reliability: Vec<f64>,
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl LlrTable {
    /// Builds a table from non-negative per-symbol penalties (smaller means
    /// more likely), one row of `q` values per position.
    ///
    /// Rows are shifted so the hard decision has penalty 0. Ties in the hard
    /// decision go to the smallest symbol, ties in reliability to the
    /// smaller position.
    pub fn from_metrics(raw: &[Vec<f64>]) -> Result<Self> {
        let q = raw.first().map_or(0, Vec::len);
        let flat: Vec<f64> = raw
            .iter()
            .map(|row| {
                if row.len() != q {
                    Err(Error::LengthMismatch {
                        expected: q,
                        actual: row.len(),
                    })
                } else {
                    Ok(row.iter().copied())
                }
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Self::from_flat(q, flat)
    }

    /// Same as [`LlrTable::from_metrics`] with a row-major `len * q` slice.
    pub fn from_flat(q: usize, mut values: Vec<f64>) -> Result<Self> {
        if q < 2 || !values.len().is_multiple_of(q) {
            return Err(Error::LengthMismatch {
                expected: q.max(2),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameters(
                "metric entries must be finite".into(),
            ));
        }
        let len = values.len() / q;
        let mut hard = Vec::with_capacity(len);
        let mut reliability = Vec::with_capacity(len);
        for row in values.chunks_mut(q) {
            let (x, min) = row
                .iter()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |(bi, bv), (i, &v)| {
                        if v < bv {
                            (i, v)
                        } else {
                            (bi, bv)
                        }
                    },
                );
            row.iter_mut().for_each(|v| *v -= min);
            row[x] = 0.0;
            let r = row
                .iter()
                .enumerate()
                .filter(|&(z, _)| z != x)
                .map(|(_, &v)| v)
                .fold(f64::INFINITY, f64::min);
            hard.push(x as Symbol);
            reliability.push(r);
        }
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&a, &b| {
            reliability[b]
                .partial_cmp(&reliability[a])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut rank = vec![0; len];
        for (r, &p) in order.iter().enumerate() {
            rank[p] = r;
        }
        Ok(Self {
            q,
            len,
            values,
            hard,
            reliability,
            order,
            rank,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn llr(&self, position: usize, symbol: Symbol) -> f64 {
        self.values[position * self.q + symbol as usize]
    }

    pub fn row(&self, position: usize) -> &[f64] {
        &self.values[position * self.q..(position + 1) * self.q]
    }

    pub fn hard_decisions(&self) -> &[Symbol] {
        &self.hard
    }

    pub fn reliabilities(&self) -> &[f64] {
        &self.reliability
    }

    /// Positions sorted by non-increasing reliability.
    pub fn reliability_order(&self) -> &[usize] {
        &self.order
    }

    /// Inverse of [`LlrTable::reliability_order`].
    pub fn rank(&self, position: usize) -> usize {
        self.rank[position]
    }

    /// Ellipsoidal weight `Σ_i L_i[c_i]`.
    pub fn ellipsoidal_weight(&self, word: &[Symbol]) -> f64 {
        word.iter().enumerate().map(|(i, &c)| self.llr(i, c)).sum()
    }

    /// All `(L_i[z], i, z)` with `z != x_i` in ascending order.
    pub fn tuples(&self) -> TupleStream {
        let mut tuples = Vec::with_capacity(self.len * (self.q - 1));
        for i in 0..self.len {
            for z in 0..self.q {
                if z as Symbol != self.hard[i] {
                    tuples.push(Tuple {
                        llr: self.llr(i, z as Symbol),
                        position: i,
                        symbol: z as Symbol,
                    });
                }
            }
        }
        tuples.sort_by(|a, b| {
            a.llr
                .partial_cmp(&b.llr)
                .unwrap_or(Ordering::Equal)
                .then(a.position.cmp(&b.position))
                .then(a.symbol.cmp(&b.symbol))
        });
        TupleStream { tuples }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tuple {
    pub llr: f64,
    pub position: usize,
    pub symbol: Symbol,
}

/// Symbol alternatives ordered by increasing penalty.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleStream {
    tuples: Vec<Tuple>,
}

impl TupleStream {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn as_slice(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn get(&self, j: usize) -> Option<&Tuple> {
        self.tuples.get(j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized_table_is_unchanged() {
        let raw = vec![vec![0.0, 1.5, 2.0, 0.25], vec![0.0, 0.5, 3.0, 1.0]];
        let t = LlrTable::from_metrics(&raw).unwrap();
        assert_eq!(t.hard_decisions(), &[0, 0]);
        assert_eq!(t.row(0), &raw[0][..]);
        assert_eq!(t.row(1), &raw[1][..]);
        assert_eq!(t.reliabilities(), &[0.25, 0.5]);
        assert_eq!(t.reliability_order(), &[1, 0]);
    }

    #[test]
    fn shifts_rows_and_breaks_ties() {
        let raw = vec![vec![2.0, 1.0, 1.0, 4.0], vec![3.0; 4]];
        let t = LlrTable::from_metrics(&raw).unwrap();
        assert_eq!(t.hard_decisions(), &[1, 0]);
        assert_eq!(t.row(0), &[1.0, 0.0, 0.0, 3.0]);
        assert_eq!(t.reliabilities(), &[0.0, 0.0]);
        assert_eq!(t.reliability_order(), &[0, 1]);
        let raw = vec![vec![5.0, 1.0, 2.5, 7.0]];
        let t = LlrTable::from_metrics(&raw).unwrap();
        assert_eq!(t.reliabilities(), &[1.5]);
    }

    #[test]
    fn tuple_stream_is_sorted() {
        let raw = vec![vec![0.0, 0.7, 0.2, 0.9], vec![0.4, 0.0, 0.2, 0.1]];
        let t = LlrTable::from_metrics(&raw).unwrap();
        let s = t.tuples();
        assert_eq!(s.len(), 6);
        let llrs: Vec<f64> = s.as_slice().iter().map(|t| t.llr).collect();
        assert_eq!(llrs, vec![0.1, 0.2, 0.2, 0.4, 0.7, 0.9]);
        assert_eq!(s.get(1).unwrap().position, 0);
        assert!(s
            .as_slice()
            .iter()
            .all(|tp| tp.symbol != t.hard_decisions()[tp.position]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LlrTable::from_metrics(&[vec![0.0, 1.0], vec![0.0]]).is_err());
        assert!(LlrTable::from_metrics(&[vec![0.0, f64::NAN]]).is_err());
    }
}
