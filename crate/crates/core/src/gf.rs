//! Arithmetic in GF(2^m) through log/antilog tables.
//!
//! Elements are stored as `u8` in the polynomial basis, bit `b` holding the
//! coefficient of `x^b`. The primitive element α is the class of `x`.

use crate::error::{Error, Result};

/// A field element in polynomial-basis representation.
pub type Symbol = u8;

/// Conventional primitive polynomials, indexed by extension degree.
const PRIMITIVE_POLYS: [(u32, u16); 8] = [
    (1, 0b11),        // x + 1
    (2, 0b111),       // x^2 + x + 1
    (3, 0b1011),      // x^3 + x + 1
    (4, 0b1_0011),    // x^4 + x + 1
    (5, 0b10_0101),   // x^5 + x^2 + 1
    (6, 0b100_0011),  // x^6 + x + 1
    (7, 0b1000_1001), // x^7 + x^3 + 1
    (8, 0x11d),       // x^8 + x^4 + x^3 + x^2 + 1
];

/// Precomputed log/antilog tables for GF(2^m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    m: u32,
    q: usize,
    primitive_poly: u16,
    log: Vec<u16>,
    antilog: Vec<Symbol>,
}

impl FieldTable {
    /// Builds the field of order `2^m` using the default primitive polynomial.
    pub fn new(m: u32) -> Result<Self> {
        let poly = PRIMITIVE_POLYS
            .iter()
            .find(|(deg, _)| *deg == m)
            .map(|(_, p)| *p)
            .ok_or(Error::UnsupportedField(m))?;
        Self::with_polynomial(m, poly)
    }

    /// Builds the field from an explicit primitive polynomial bitmask.
    pub fn with_polynomial(m: u32, primitive_poly: u16) -> Result<Self> {
        if m == 0 || m > 8 || primitive_poly >> m != 1 {
            return Err(Error::UnsupportedField(m));
        }
        let q = 1usize << m;
        let order = q - 1;
        let mut log = vec![0u16; q];
        let mut antilog = vec![0 as Symbol; order];
        let mut seen = vec![false; q];
        let mut x: u16 = 1;
        for (e, slot) in antilog.iter_mut().enumerate() {
            if seen[x as usize] {
                return Err(Error::NotPrimitive(primitive_poly));
            }
            seen[x as usize] = true;
            *slot = x as Symbol;
            log[x as usize] = e as u16;
            x <<= 1;
            if x >> m != 0 {
                x ^= primitive_poly;
            }
        }
        if x != 1 {
            return Err(Error::NotPrimitive(primitive_poly));
        }
        Ok(Self {
            m,
            q,
            primitive_poly,
            log,
            antilog,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order `q = 2^m`.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn primitive_poly(&self) -> u16 {
        self.primitive_poly
    }

    /// Multiplicative group order `q - 1`.
    #[inline]
    pub fn order(&self) -> usize {
        self.q - 1
    }

    /// The antilog table: `antilog()[e] = α^e` for `0 <= e < q - 1`.
    pub fn antilog(&self) -> &[Symbol] {
        &self.antilog
    }

    /// Discrete logarithm of a nonzero element.
    #[inline]
    pub fn log(&self, a: Symbol) -> usize {
        debug_assert!(a != 0, "log of zero");
        self.log[a as usize] as usize
    }

    /// α^e for any integer exponent.
    #[inline]
    pub fn exp(&self, e: i64) -> Symbol {
        self.antilog[e.rem_euclid(self.order() as i64) as usize]
    }

    /// The primitive element α.
    pub fn alpha(&self) -> Symbol {
        self.exp(1)
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.log[a as usize] as usize + self.log[b as usize] as usize;
        let order = self.q - 1;
        self.antilog[if e >= order { e - order } else { e }]
    }

    /// Multiplicative inverse.
    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Symbol) -> Symbol {
        debug_assert!(a != 0);
        let order = self.q - 1;
        self.antilog[(order - self.log[a as usize] as usize) % order]
    }

    /// `a / b`.
    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`; negative exponents require `a != 0`.
    pub fn pow(&self, a: Symbol, e: i64) -> Symbol {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            assert!(e > 0, "negative power of zero");
            return 0;
        }
        self.exp(self.log(a) as i64 * e)
    }

    /// Iterates over all field elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = Symbol> {
        (0..self.q).map(|v| v as Symbol)
    }

    /// Evaluates a polynomial given by ascending coefficients.
    pub fn eval_poly(&self, coeffs: &[Symbol], x: Symbol) -> Symbol {
        coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }

    /// Product of two polynomials with ascending coefficients.
    pub fn poly_mul(&self, a: &[Symbol], b: &[Symbol]) -> Vec<Symbol> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] ^= self.mul(ai, bj);
            }
        }
        out
    }

    /// Inverse of a square matrix by Gauss-Jordan elimination.
    pub fn invert_matrix(&self, matrix: &[Vec<Symbol>]) -> Result<Vec<Vec<Symbol>>> {
        let n = matrix.len();
        let mut a: Vec<Vec<Symbol>> = matrix.to_vec();
        let mut inv: Vec<Vec<Symbol>> = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as Symbol).collect())
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r][col] != 0)
                .ok_or(Error::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = self.inv_nonzero(a[col][col]);
            for j in 0..n {
                a[col][j] = self.mul(a[col][j], scale);
                inv[col][j] = self.mul(inv[col][j], scale);
            }
            for r in 0..n {
                let f = a[r][col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r][j] ^= self.mul(f, a[col][j]);
                    inv[r][j] ^= self.mul(f, inv[col][j]);
                }
            }
        }
        Ok(inv)
    }

    /// Row vector times matrix.
    pub fn vec_mat(&self, v: &[Symbol], matrix: &[Vec<Symbol>]) -> Vec<Symbol> {
        let cols = matrix.first().map_or(0, Vec::len);
        let mut out = vec![0; cols];
        for (row, &vi) in matrix.iter().zip(v) {
            if vi == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o ^= self.mul(vi, g);
            }
        }
        out
    }
}
