//! Zonal matrices. Exact `E_k` / `T_k` for the binary Hamming space (and
//! the projective geometry over `F_q`, via the subspace lattice), float
//! `Y_k` matrices for stabilizers of one or several points on the sphere.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::orthopoly::{self, qbinomial_or_zero};
use crate::rational::{self, Rational};

const GRAM_TOL: f64 = 1e-12;

/// Zonal matrices `E_k` of level `k` for the lattice of subsets (`q = 1`,
/// i.e. the binary Hamming space) or of subspaces of `F_q^n`.
///
/// Rows and columns are indexed by weights `i, j ∈ [k, n-k]`; all entries
/// `P_{k,i,j}(u)` are tabulated exactly at construction.
#[derive(Debug, Clone)]
pub struct HammingZonalFamily {
    n: usize,
    q: u64,
    k: usize,
    h_k: Rational,
    space_size: Rational,
    // table[i - k][j - k][meet]
    table: Vec<Vec<Vec<Rational>>>,
}

impl HammingZonalFamily {
    pub fn new(n: usize, q: u64, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("zonal family needs n >= 1"));
        }
        if q == 0 || (q > 1 && !orthopoly::is_prime_power(q)) {
            return Err(Error::domain(format!("q = {q} must be 1 or a prime power")));
        }
        if 2 * k > n {
            return Err(Error::domain(format!("level {k} exceeds n/2 for n = {n}")));
        }
        let (ni, ki) = (n as i64, k as i64);
        let h_k = qbinomial_or_zero(ni, ki, q) - qbinomial_or_zero(ni, ki - 1, q);
        let space_size = if q == 1 {
            rational::big(BigInt::one() << n)
        } else {
            (0..=ni).map(|w| qbinomial_or_zero(ni, w, q)).sum()
        };
        let m = n - 2 * k + 1;
        let mut table = vec![vec![Vec::new(); m]; m];
        for i in k..=n - k {
            for j in i..=n - k {
                let poly = orthopoly::qhahn(n, q, i, j, k)?;
                let pre = Self::prefactor_raw(n, q, k, i, j, &h_k, &space_size);
                let row: Vec<Rational> = (0..=i).map(|meet| &pre * poly.eval_at(i - meet)).collect();
                table[j - k][i - k] = row.clone();
                table[i - k][j - k] = row;
            }
        }
        Ok(HammingZonalFamily { n, q, k, h_k, space_size, table })
    }

    // |X| h_k [j-k, i-k] [n-2k, j-k] / ([n, j] [j, i]) q^{k(j-k)} for i <= j
    fn prefactor_raw(n: usize, q: u64, k: usize, i: usize, j: usize, h_k: &Rational, size: &Rational) -> Rational {
        let qb = |a: usize, b: usize| qbinomial_or_zero(a as i64, b as i64, q);
        let num = qb(j - k, i - k) * qb(n - 2 * k, j - k);
        let den = qb(n, j) * qb(j, i);
        let qpow = rational::pow(&rational::int(q as i64), (k * (j - k)) as u32);
        size * h_k * num / den * qpow
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Side length `m_k = n - 2k + 1`.
    pub fn size(&self) -> usize {
        self.n - 2 * self.k + 1
    }

    pub fn h_k(&self) -> &Rational {
        &self.h_k
    }

    /// `|X|`: `2^n` for subsets, the total number of subspaces for `q > 1`.
    pub fn space_size(&self) -> &Rational {
        &self.space_size
    }

    /// Index range `k..=n-k` of the matrix.
    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.k..=self.n - self.k
    }

    /// `P_{k,i,j}(0)`, the value at `x ⊂ y` (or `y ⊂ x`).
    pub fn value_at_zero(&self, i: usize, j: usize) -> Result<Rational> {
        self.check_indices(i, j)?;
        Ok(self.table[i - self.k][j - self.k][i.min(j)].clone())
    }

    fn check_indices(&self, i: usize, j: usize) -> Result<()> {
        if !self.indices().contains(&i) || !self.indices().contains(&j) {
            return Err(Error::domain(format!(
                "indices ({i}, {j}) outside [{}, {}]",
                self.k,
                self.n - self.k
            )));
        }
        Ok(())
    }

    /// Entry `E_{k,i,j}(x, y)` where `|x| = x_wt`, `|y| = y_wt` and
    /// `|x ∩ y| = meet` (dimensions for `q > 1`).
    pub fn entry(&self, i: usize, j: usize, x_wt: usize, y_wt: usize, meet: usize) -> Result<Rational> {
        self.check_indices(i, j)?;
        if x_wt != i || y_wt != j {
            return Ok(Rational::zero());
        }
        if meet > i.min(j) {
            return Err(Error::domain(format!("meet {meet} exceeds min({i}, {j})")));
        }
        Ok(self.table[i - self.k][j - self.k][meet].clone())
    }

    /// The full matrix `E_k(x, y)` for binary words given as bitmasks.
    pub fn matrix_at(&self, x: u64, y: u64) -> Result<RatMatrix> {
        if self.q != 1 {
            return Err(Error::domain("bitmask evaluation is only defined for q = 1"));
        }
        let (xw, yw) = (x.count_ones() as usize, y.count_ones() as usize);
        let meet = (x & y).count_ones() as usize;
        let mut out = linalg::zeros(self.size(), self.size());
        if self.indices().contains(&xw) && self.indices().contains(&yw) {
            out[xw - self.k][yw - self.k] = self.entry(xw, yw, xw, yw, meet)?;
        }
        Ok(out)
    }

    /// `T_k(a, b, c)`: the matrix `E_k(x - z, y - z)` for `a = d(y,z)`,
    /// `b = d(x,z)`, `c = d(x,y)`. Row index is `b`, column index is `a`.
    pub fn triple_t(&self, orbit: TripleOrbit) -> Result<RatMatrix> {
        if self.q != 1 {
            return Err(Error::domain("triple matrices are built for q = 1 only"));
        }
        if !orbit.in_omega(self.n) {
            return Err(Error::domain(format!("{orbit:?} is not a distance triple for n = {}", self.n)));
        }
        let mut out = linalg::zeros(self.size(), self.size());
        let TripleOrbit { a, b, c } = orbit;
        if self.indices().contains(&a) && self.indices().contains(&b) {
            let meet = (a + b - c) / 2;
            out[b - self.k][a - self.k] = self.table[b - self.k][a - self.k][meet].clone();
        }
        Ok(out)
    }

    /// The single (possibly) nonzero entry of `T_k(a,b,c)` as
    /// `(row, col, value)` in local indices, for sparse assembly.
    pub fn triple_entry(&self, orbit: TripleOrbit) -> Option<(usize, usize, Rational)> {
        let TripleOrbit { a, b, c } = orbit;
        if self.q != 1 || !orbit.in_omega(self.n) || !self.indices().contains(&a) || !self.indices().contains(&b) {
            return None;
        }
        let meet = (a + b - c) / 2;
        let v = self.table[b - self.k][a - self.k][meet].clone();
        (!v.is_zero()).then_some((b - self.k, a - self.k, v))
    }
}

pub fn hamming_e_entry(
    fam: &HammingZonalFamily,
    i: usize,
    j: usize,
    x_wt: usize,
    y_wt: usize,
    meet: usize,
) -> Result<Rational> {
    fam.entry(i, j, x_wt, y_wt, meet)
}

pub fn triple_t(fam: &HammingZonalFamily, orbit: TripleOrbit) -> Result<RatMatrix> {
    fam.triple_t(orbit)
}

/// Distances `(a, b, c) = (d(y,z), d(x,z), d(x,y))` of a triple of words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleOrbit {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl TripleOrbit {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        TripleOrbit { a, b, c }
    }

    pub fn in_omega(&self, n: usize) -> bool {
        let TripleOrbit { a, b, c } = *self;
        a <= n
            && b <= n
            && c <= n
            && (a + b + c) % 2 == 0
            && a + b + c <= 2 * n
            && c <= a + b
            && b <= a + c
            && a <= b + c
    }

    /// Sorted representative of the S_3 orbit.
    pub fn canonical(&self) -> TripleOrbit {
        let mut v = [self.a, self.b, self.c];
        v.sort_unstable();
        TripleOrbit::new(v[0], v[1], v[2])
    }

    /// The distinct permutations of `(a, b, c)`.
    pub fn permutations(&self) -> Vec<TripleOrbit> {
        let (a, b, c) = (self.a, self.b, self.c);
        let mut out = vec![
            TripleOrbit::new(a, b, c),
            TripleOrbit::new(a, c, b),
            TripleOrbit::new(b, a, c),
            TripleOrbit::new(b, c, a),
            TripleOrbit::new(c, a, b),
            TripleOrbit::new(c, b, a),
        ];
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// All of `Ω` for length `n`, in lexicographic order.
pub fn omega_enumerate(n: usize) -> Vec<TripleOrbit> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            for c in 0..=n {
                let t = TripleOrbit::new(a, b, c);
                if t.in_omega(n) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// `t(a,b,c)`: for fixed `x, y` at distance `c`, the number of `z` with
/// `d(x,z) = b` and `d(y,z) = a`.
pub fn t_count(n: usize, orbit: TripleOrbit) -> Result<BigInt> {
    if !orbit.in_omega(n) {
        return Err(Error::domain(format!("{orbit:?} is not a distance triple for n = {n}")));
    }
    let TripleOrbit { a, b, c } = orbit;
    let i = (a + c - b) / 2;
    if i > a {
        return Ok(BigInt::zero());
    }
    Ok(rational::binomial(c as u64, i as u64) * rational::binomial((n - c) as u64, (a - i) as u64))
}

/// `B_k(d) = Σ_z E_k(x - z, y - z)` for any `x, y` at distance `d`,
/// accumulated from `t(a,b,d) T_k(a,b,d)`.
pub fn translate_sum(fam: &HammingZonalFamily, d: usize) -> Result<RatMatrix> {
    let n = fam.n();
    if d > n {
        return Err(Error::domain(format!("distance {d} exceeds n = {n}")));
    }
    let mut acc = linalg::zeros(fam.size(), fam.size());
    for a in 0..=n {
        for b in 0..=n {
            let orbit = TripleOrbit::new(a, b, d);
            if let Some((r, c, v)) = fam.triple_entry(orbit) {
                acc[r][c] += rational::big(t_count(n, orbit)?) * v;
            }
        }
    }
    Ok(acc)
}

fn eval_f64(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `Q_k^m(u·v, |u|², |v|², t)` as a polynomial in `t - u·v` and
/// `W = (1-|u|²)(1-|v|²)`, so no square roots or divisions appear:
/// `Σ_{r ≡ k (2)} c_r (t - u·v)^r W^{(k-r)/2}` with `P_k^m = Σ c_r x^r`.
fn q_polynomial(pk: &[f64], k: usize, uv: f64, uu: f64, vv: f64, t: f64) -> f64 {
    let w = ((1.0 - uu) * (1.0 - vv)).max(0.0);
    let s = t - uv;
    pk.iter()
        .enumerate()
        .filter(|(r, _)| r % 2 == k % 2)
        .map(|(r, c)| c * s.powi(r as i32) * w.powi(((k - r) / 2) as i32))
        .sum()
}

/// Zonal matrices `Y_k^n(u, v, t)` for the stabilizer of one point `e` on
/// `S^{n-1}`, with indices `0 ≤ i, j ≤ d - k` and all `λ_{k,i} = 1`.
#[derive(Debug, Clone)]
pub struct SphereZonalFamily {
    n: usize,
    k: usize,
    degree: usize,
    outer: Vec<Vec<f64>>,
    inner: Vec<f64>,
}

impl SphereZonalFamily {
    pub fn new(n: usize, k: usize, degree: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain(format!("sphere zonal matrices need n >= 3, got {n}")));
        }
        if k > degree {
            return Err(Error::domain(format!("level {k} exceeds degree cap {degree}")));
        }
        let outer = orthopoly::gegenbauer_family(n + 2 * k, degree - k)?
            .iter()
            .map(|p| p.to_f64_coeffs())
            .collect();
        let inner = orthopoly::gegenbauer(n - 1, k)?.to_f64_coeffs();
        Ok(SphereZonalFamily { n, k, degree, outer, inner })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.degree - self.k + 1
    }

    pub fn eval(&self, u: f64, v: f64, t: f64) -> Result<DMatrix<f64>> {
        check_gram(&[u], &[v], t)?;
        let q = q_polynomial(&self.inner, self.k, u * v, u * u, v * v, t);
        let pu: Vec<f64> = self.outer.iter().map(|p| eval_f64(p, u)).collect();
        let pv: Vec<f64> = self.outer.iter().map(|p| eval_f64(p, v)).collect();
        Ok(DMatrix::from_fn(self.size(), self.size(), |i, j| pu[i] * pv[j] * q))
    }
}

pub fn sphere_y(fam: &SphereZonalFamily, u: f64, v: f64, t: f64) -> Result<DMatrix<f64>> {
    fam.eval(u, v, t)
}

fn check_gram(u: &[f64], v: &[f64], t: f64) -> Result<()> {
    let s = u.len();
    if v.len() != s {
        return Err(Error::domain("u and v must have the same length"));
    }
    let all = [u, v].concat();
    if all.iter().chain(std::iter::once(&t)).any(|x| !x.is_finite()) {
        return Err(Error::domain("non-finite inner product"));
    }
    let g = DMatrix::from_fn(s + 2, s + 2, |r, c| match (r, c) {
        (r, c) if r < s && c < s => {
            if r == c {
                1.0
            } else {
                0.0
            }
        }
        (r, c) if r < s => all[r + (c - s) * s],
        (r, c) if c < s => all[c + (r - s) * s],
        (r, c) if r == c => 1.0,
        _ => t,
    });
    let min = linalg::min_eigenvalue(&g);
    if min < -GRAM_TOL {
        return Err(Error::domain(format!(
            "inner products are not realizable by unit vectors (Gram eigenvalue {min:e})"
        )));
    }
    Ok(())
}

/// Multi-indices `l ∈ N^s` with `|l| ≤ max`, graded then lexicographic.
pub fn multi_indices(s: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, s: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == s {
            out.push(prefix.clone());
            return;
        }
        for l in 0..=left {
            prefix.push(l);
            rec(prefix, s, left - l, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), s, max, &mut out);
    out.sort_by_key(|l| (l.iter().sum::<usize>(), std::cmp::Reverse(l.clone())));
    out
}

/// Zonal matrix for the stabilizer of `s` orthonormal points: entry
/// `(l, l')` is `u^l v^{l'} Q_k^{n-s}(u, v, t)`, `|l|, |l'| ≤ deg - k`.
pub fn sphere_multipoint_y(n: usize, s: usize, k: usize, deg: usize, u: &[f64], v: &[f64], t: f64) -> Result<DMatrix<f64>> {
    if s == 0 || u.len() != s || v.len() != s {
        return Err(Error::domain("need s >= 1 coordinates for u and v"));
    }
    if n < s + 2 {
        return Err(Error::domain(format!("need n >= s + 2, got n = {n}, s = {s}")));
    }
    if k > deg {
        return Err(Error::domain(format!("level {k} exceeds degree cap {deg}")));
    }
    check_gram(u, v, t)?;
    let pk = orthopoly::gegenbauer(n - s, k)?.to_f64_coeffs();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let q = q_polynomial(&pk, k, dot(u, v), dot(u, u), dot(v, v), t);
    let idx = multi_indices(s, deg - k);
    let mono = |x: &[f64], l: &[usize]| x.iter().zip(l).map(|(xi, &li)| xi.powi(li as i32)).product::<f64>();
    let mu: Vec<f64> = idx.iter().map(|l| mono(u, l)).collect();
    let mv: Vec<f64> = idx.iter().map(|l| mono(v, l)).collect();
    Ok(DMatrix::from_fn(idx.len(), idx.len(), |i, j| mu[i] * mv[j] * q))
}
