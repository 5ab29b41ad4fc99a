//! Binary linear codes: weight distributions and the MacWilliams transform.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::orthopoly;
use crate::rational::{self, Rational};

/// Largest length handled by codeword enumeration.
pub const MAX_LENGTH: usize = 24;

/// A binary linear code given by a reduced basis; words are bitmasks of
/// length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    basis: Vec<u64>,
}

impl LinearCode {
    /// The span of `rows`; dependent rows are dropped.
    pub fn from_generators(n: usize, rows: &[u64]) -> Result<Self> {
        if n == 0 || n > MAX_LENGTH {
            return Err(Error::domain(format!("length must be in 1..={MAX_LENGTH}, got {n}")));
        }
        if let Some(r) = rows.iter().find(|r| **r >> n != 0) {
            return Err(Error::domain(format!("generator {r:#b} is longer than {n}")));
        }
        Ok(LinearCode { n, basis: reduce(rows.to_vec()) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn size(&self) -> u64 {
        1 << self.basis.len()
    }

    pub fn codewords(&self) -> Vec<u64> {
        (0..self.size())
            .map(|m| {
                self.basis.iter().enumerate().filter(|(b, _)| m >> b & 1 == 1).fold(0, |acc, (_, r)| acc ^ r)
            })
            .collect()
    }

    /// Minimum nonzero weight (`n + 1` for the zero code).
    pub fn minimum_distance(&self) -> usize {
        self.codewords().into_iter().filter(|&w| w != 0).map(|w| w.count_ones() as usize).min().unwrap_or(self.n + 1)
    }

    /// `A_w` = number of codewords of weight `w`, `0 ≤ w ≤ n`.
    pub fn weight_distribution(&self) -> Vec<u64> {
        let mut out = vec![0; self.n + 1];
        for w in self.codewords() {
            out[w.count_ones() as usize] += 1;
        }
        out
    }

    /// `C^⊥ = {x : x·c = 0 for all c ∈ C}`, found by elimination.
    pub fn dual(&self) -> LinearCode {
        // Reduced echelon form with pivot columns; the free columns give
        // one dual generator each.
        let mut rows = self.basis.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.n {
            let bit = 1u64 << col;
            let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else { continue };
            rows.swap(r, p);
            for i in 0..rows.len() {
                if i != r && rows[i] & bit != 0 {
                    rows[i] ^= rows[r];
                }
            }
            pivots.push(col);
            r += 1;
        }
        let mut gens = Vec::new();
        for free in (0..self.n).filter(|c| !pivots.contains(c)) {
            let mut v = 1u64 << free;
            for (row, &pc) in rows.iter().zip(&pivots) {
                if row >> free & 1 == 1 {
                    v |= 1 << pc;
                }
            }
            gens.push(v);
        }
        LinearCode { n: self.n, basis: reduce(gens) }
    }
}

fn reduce(rows: Vec<u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for mut r in rows {
        for b in &basis {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// `(1/|C|) Σ_w A_w K_k(w)` for `0 ≤ k ≤ n`, with `K_k` the binary
/// Krawtchouk polynomials. For a linear code this is the weight
/// distribution of its dual.
pub fn macwilliams_transform(n: usize, distribution: &[u64]) -> Result<Vec<Rational>> {
    if distribution.len() != n + 1 {
        return Err(Error::domain(format!("expected {} weights, got {}", n + 1, distribution.len())));
    }
    let size: u64 = distribution.iter().sum();
    if size == 0 {
        return Err(Error::domain("empty distribution"));
    }
    let family = orthopoly::krawtchouk_family(n, 2)?;
    let size = rational::big(BigInt::from(size));
    Ok(family
        .iter()
        .map(|k| {
            let s: Rational = distribution
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != 0)
                .map(|(w, a)| k.eval(&rational::int(w as i64)) * rational::int(*a as i64))
                .fold(Rational::zero(), |acc, v| acc + v);
            s / &size
        })
        .collect())
}
