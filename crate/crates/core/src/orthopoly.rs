//! Exact orthogonal polynomial families: q-ary Krawtchouk, Hahn (Johnson
//! space), q-Hahn (subset lattice / projective geometry) and Gegenbauer
//! (unit sphere), together with the q-binomial combinatorics behind them.
//!
//! Everything here is exact. The Hahn, q-Hahn and Gegenbauer families are
//! produced by Gram–Schmidt on the monomial basis against a moment
//! functional, which is deterministic and never touches floating point.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{self, Rational};

/// q-binomial coefficient: the number of `w`-dimensional subspaces of
/// `F_q^n`, or the ordinary binomial coefficient when `q = 1`.
pub fn qbinomial(n: usize, w: usize, q: u64) -> Result<Rational> {
    if q == 0 {
        return Err(Error::domain("q must be at least 1"));
    }
    if w > n {
        return Err(Error::domain(format!("qbinomial({n}, {w}): need w <= n")));
    }
    Ok(rational::big(qbinomial_int(n, w, q)))
}

fn qbinomial_int(n: usize, w: usize, q: u64) -> BigInt {
    if q == 1 {
        return rational::binomial(n as u64, w as u64);
    }
    let q = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..w {
        num *= num_traits::pow(q.clone(), n - i) - 1;
        den *= num_traits::pow(q.clone(), w - i) - 1;
    }
    num / den
}

/// Like [`qbinomial`] but zero outside `0 <= w <= n` (a count of an empty
/// set rather than an error).
pub fn qbinomial_or_zero(n: i64, w: i64, q: u64) -> Rational {
    if n < 0 || w < 0 || w > n {
        Rational::zero()
    } else {
        rational::big(qbinomial_int(n as usize, w as usize, q))
    }
}

/// The bracket variable `[x] = q^{1-x} [x choose 1]_q`: `x` itself when
/// `q = 1`, `(q^{-x} - 1) / (q^{-1} - 1)` otherwise.
pub fn bracket(x: usize, q: u64) -> Result<Rational> {
    match q {
        0 => Err(Error::domain("q must be at least 1")),
        1 => Ok(rational::int(x as i64)),
        _ => {
            let qinv = Rational::new(BigInt::one(), BigInt::from(q));
            let num = rational::pow(&qinv, x as u32) - Rational::one();
            let den = qinv - Rational::one();
            Ok(num / den)
        }
    }
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

/// `binom(expr, i)` as a polynomial, where `expr` is itself a polynomial.
fn binomial_poly(expr: &Polynomial, i: usize) -> Polynomial {
    let mut acc = Polynomial::one();
    for j in 0..i {
        let shifted = expr - &Polynomial::constant(rational::int(j as i64));
        acc = &acc * &shifted;
    }
    let fact: BigInt = (1..=i as u64).map(BigInt::from).product();
    acc.scale(&Rational::new(BigInt::one(), fact))
}

/// q-ary Krawtchouk polynomial `K_k^{n,q}(t) = Σ_i binom(t,i) binom(n-t,k-i) (-1)^i (q-1)^{k-i}`,
/// expanded into monomial coefficients in `t`.
pub fn krawtchouk(n: usize, q: u64, k: usize) -> Result<Polynomial> {
    if q < 2 {
        return Err(Error::domain("Krawtchouk polynomials need q >= 2"));
    }
    if k > n {
        return Err(Error::domain(format!("Krawtchouk level {k} exceeds n = {n}")));
    }
    let t = Polynomial::x();
    let n_minus_t = &Polynomial::constant(rational::int(n as i64)) - &t;
    let qm1 = rational::int(q as i64 - 1);
    let mut acc = Polynomial::zero();
    for i in 0..=k {
        let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
        let c = sign * rational::pow(&qm1, (k - i) as u32);
        let term = &binomial_poly(&t, i) * &binomial_poly(&n_minus_t, k - i);
        acc = &acc + &term.scale(&c);
    }
    Ok(acc)
}

pub fn krawtchouk_family(n: usize, q: u64) -> Result<Vec<Polynomial>> {
    (0..=n).map(|k| krawtchouk(n, q, k)).collect()
}

/// Monic orthogonal polynomials of degree `0..=max_degree` for the moment
/// functional `L(x^r) = moments[r]`. Fails if some candidate has zero norm,
/// which happens when the weight system has too few support points.
pub fn gram_schmidt(moments: &[Rational], max_degree: usize) -> Result<Vec<Polynomial>> {
    assert!(moments.len() > 2 * max_degree, "need moments up to 2 * max_degree");
    let inner = |p: &Polynomial, q: &Polynomial| -> Rational {
        let mut acc = Rational::zero();
        for (i, a) in p.coeffs().iter().enumerate() {
            for (j, b) in q.coeffs().iter().enumerate() {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b * &moments[i + j];
                }
            }
        }
        acc
    };
    let mut basis: Vec<Polynomial> = Vec::with_capacity(max_degree + 1);
    let mut norms: Vec<Rational> = Vec::with_capacity(max_degree + 1);
    for k in 0..=max_degree {
        let xk = Polynomial::monomial(k, Rational::one());
        let mut p = xk.clone();
        for (b, nb) in basis.iter().zip(&norms) {
            let c = inner(&xk, b) / nb;
            p = &p - &b.scale(&c);
        }
        let norm = inner(&p, &p);
        if norm.is_zero() {
            return Err(Error::domain(format!(
                "degenerate weight system: no orthogonal polynomial of degree {k}"
            )));
        }
        basis.push(p);
        norms.push(norm);
    }
    Ok(basis)
}

/// Moments `Σ_u w_u x_u^r` for `r = 0..=max_power` of a discrete measure.
fn discrete_moments(points: &[(Rational, Rational)], max_power: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); max_power + 1];
    for (x, w) in points {
        let mut xp = w.clone();
        for slot in out.iter_mut() {
            *slot += &xp;
            xp *= x;
        }
    }
    out
}

fn normalize_at_zero(p: Polynomial) -> Result<Polynomial> {
    let c0 = p.coeff(0);
    if c0.is_zero() {
        return Err(Error::domain("orthogonal polynomial vanishes at 0"));
    }
    Ok(p.scale(&c0.recip()))
}

/// Number of Hahn levels for the Johnson space `J(n, w)`.
pub fn hahn_levels(n: usize, w: usize) -> usize {
    w.min(n - w)
}

/// Hahn polynomials `Q_0..=Q_max_k` for `J(n, w)` in the variable `i`
/// (half the Johnson distance), orthogonal for `binom(w,i) binom(n-w,i)`
/// and normalized by `Q_k(0) = 1`.
pub fn hahn_johnson_family(n: usize, w: usize, max_k: usize) -> Result<Vec<Polynomial>> {
    if w > n {
        return Err(Error::domain(format!("Johnson weight {w} exceeds n = {n}")));
    }
    if max_k > hahn_levels(n, w) {
        return Err(Error::domain(format!(
            "Hahn level {max_k} exceeds min(w, n-w) = {} for J({n},{w})",
            hahn_levels(n, w)
        )));
    }
    let points: Vec<(Rational, Rational)> = (0..=w)
        .map(|i| {
            let weight = rational::binomial(w as u64, i as u64) * rational::binomial((n - w) as u64, i as u64);
            (rational::int(i as i64), rational::big(weight))
        })
        .filter(|(_, wt)| !wt.is_zero())
        .collect();
    let moments = discrete_moments(&points, 2 * max_k);
    gram_schmidt(&moments, max_k)?.into_iter().map(normalize_at_zero).collect()
}

pub fn hahn_johnson(n: usize, w: usize, k: usize) -> Result<Polynomial> {
    let mut fam = hahn_johnson_family(n, w, k)?;
    Ok(fam.pop().expect("family has k + 1 members"))
}

/// The q-Hahn weight `w(n,i,j;u) = [i,u]_q [n-i, j-i+u]_q q^{u(j-i+u)}`:
/// given `x` with `|x| = i`, the number of `y` with `|y| = j` and
/// `|x ∩ y| = i - u`. Zero outside the admissible range.
pub fn weight_w(n: usize, q: u64, i: usize, j: usize, u: usize) -> Rational {
    let (n, i, j, u) = (n as i64, i as i64, j as i64, u as i64);
    let top = j - i + u;
    if u > i || top < 0 || top > n - i || i > n {
        return Rational::zero();
    }
    let qpow = rational::pow(&rational::int(q as i64), (u * top) as u32);
    qbinomial_or_zero(i, u, q) * qbinomial_or_zero(n - i, top, q) * qpow
}

/// A polynomial in the bracket variable `[x]` for a fixed `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketPolynomial {
    pub poly: Polynomial,
    pub q: u64,
}

impl BracketPolynomial {
    /// Value at the integer argument `x`, i.e. `poly([x])`.
    pub fn eval_at(&self, x: usize) -> Rational {
        self.poly.eval(&bracket(x, self.q).expect("q validated at construction"))
    }
}

fn check_qhahn_params(n: usize, q: u64, i: usize, j: usize) -> Result<()> {
    if q == 0 || (q > 1 && !is_prime_power(q)) {
        return Err(Error::domain(format!("q = {q} must be 1 or a prime power")));
    }
    if !(i <= j && j <= n) {
        return Err(Error::domain(format!("q-Hahn needs 0 <= i <= j <= n, got i={i} j={j} n={n}")));
    }
    Ok(())
}

/// Number of q-Hahn levels for parameters `(n, i, j)`.
pub fn qhahn_levels(n: usize, i: usize, j: usize) -> usize {
    i.min(n - j)
}

/// q-Hahn polynomials `Q_0..=Q_max_k` for `(n, i, j)`, degree `k` in `[x]`,
/// orthogonal for the weights `w(n,i,j;u)`, `u = 0..=i`, and `Q_k(0) = 1`.
pub fn qhahn_family(n: usize, q: u64, i: usize, j: usize, max_k: usize) -> Result<Vec<BracketPolynomial>> {
    check_qhahn_params(n, q, i, j)?;
    if max_k > qhahn_levels(n, i, j) {
        return Err(Error::domain(format!(
            "q-Hahn level {max_k} exceeds min(i, n-j) = {}",
            qhahn_levels(n, i, j)
        )));
    }
    let mut points = Vec::new();
    for u in 0..=i {
        let wt = weight_w(n, q, i, j, u);
        if !wt.is_zero() {
            points.push((bracket(u, q)?, wt));
        }
    }
    let moments = discrete_moments(&points, 2 * max_k);
    gram_schmidt(&moments, max_k)?
        .into_iter()
        .map(|p| normalize_at_zero(p).map(|poly| BracketPolynomial { poly, q }))
        .collect()
}

pub fn qhahn(n: usize, q: u64, i: usize, j: usize, k: usize) -> Result<BracketPolynomial> {
    let mut fam = qhahn_family(n, q, i, j, k)?;
    Ok(fam.pop().expect("family has k + 1 members"))
}

/// Moments of `(1-t²)^{(n-3)/2}` on `[-1,1]` divided by the total mass.
/// Odd moments vanish; even ones follow `m_{2s} = m_{2s-2} (2s-1)/(n+2s-2)`.
fn gegenbauer_moments(n: usize, max_power: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); max_power + 1];
    out[0] = Rational::one();
    let mut s = 1;
    while 2 * s <= max_power {
        let ratio = rational::frac(2 * s as i64 - 1, n as i64 + 2 * s as i64 - 2);
        out[2 * s] = &out[2 * s - 2] * ratio;
        s += 1;
    }
    out
}

/// Gegenbauer polynomials `P_0^n..=P_max_k^n` of the sphere `S^{n-1}`,
/// normalized by `P_k^n(1) = 1`. `n = 2` (the circle, Chebyshev weight) is
/// accepted because the stabilizer matrices of `S^2` need it.
pub fn gegenbauer_family(n: usize, max_k: usize) -> Result<Vec<Polynomial>> {
    if n < 2 {
        return Err(Error::domain(format!("Gegenbauer polynomials need n >= 2, got {n}")));
    }
    let moments = gegenbauer_moments(n, 2 * max_k);
    gram_schmidt(&moments, max_k)?
        .into_iter()
        .map(|p| {
            let at_one = p.eval(&Rational::one());
            Ok(p.scale(&at_one.recip()))
        })
        .collect()
}

pub fn gegenbauer(n: usize, k: usize) -> Result<Polynomial> {
    let mut fam = gegenbauer_family(n, k)?;
    Ok(fam.pop().expect("family has k + 1 members"))
}

/// `binom(k + α, k)` with `α = (n - 3)/2`: the value at 1 of the Jacobi
/// polynomial `P_k^{(α,α)}`, so `P_k^{(α,α)} = jacobi_scale(n, k) · P_k^n`.
/// Tables of sphere certificates are often printed in this normalization.
pub fn jacobi_scale(n: usize, k: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::domain(format!("Gegenbauer polynomials need n >= 2, got {n}")));
    }
    let alpha = Rational::new(BigInt::from(n as i64 - 3), BigInt::from(2));
    Ok((1..=k).fold(Rational::one(), |acc, j| {
        let j = Rational::from_integer(BigInt::from(j));
        acc * (&alpha + &j) / j
    }))
}

/// Parameters selecting one orthogonal family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyParams {
    Krawtchouk { n: usize, q: u64 },
    Hahn { n: usize, w: usize },
    QHahn { n: usize, q: u64, i: usize, j: usize },
    Gegenbauer { n: usize },
}

impl FamilyParams {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilyParams::Krawtchouk { n, q } => {
                if q < 2 || n == 0 {
                    return Err(Error::domain("Krawtchouk needs n >= 1 and q >= 2"));
                }
            }
            FamilyParams::Hahn { n, w } => {
                if n == 0 || w > n {
                    return Err(Error::domain("Hahn needs 1 <= n and w <= n"));
                }
            }
            FamilyParams::QHahn { n, q, i, j } => check_qhahn_params(n, q, i, j)?,
            FamilyParams::Gegenbauer { n } => {
                if n < 2 {
                    return Err(Error::domain("Gegenbauer needs n >= 2"));
                }
            }
        }
        Ok(())
    }

    /// Highest level in the family, `None` when unbounded.
    pub fn max_level(&self) -> Option<usize> {
        match *self {
            FamilyParams::Krawtchouk { n, .. } => Some(n),
            FamilyParams::Hahn { n, w } => Some(hahn_levels(n, w)),
            FamilyParams::QHahn { n, i, j, .. } => Some(qhahn_levels(n, i, j)),
            FamilyParams::Gegenbauer { .. } => None,
        }
    }

    /// Members `0..=upto` as plain polynomials (q-Hahn members are in `[x]`).
    pub fn members(&self, upto: usize) -> Result<Vec<Polynomial>> {
        self.validate()?;
        if let Some(max) = self.max_level() {
            if upto > max {
                return Err(Error::domain(format!("level {upto} exceeds family maximum {max}")));
            }
        }
        match *self {
            FamilyParams::Krawtchouk { n, q } => (0..=upto).map(|k| krawtchouk(n, q, k)).collect(),
            FamilyParams::Hahn { n, w } => hahn_johnson_family(n, w, upto),
            FamilyParams::QHahn { n, q, i, j } => {
                Ok(qhahn_family(n, q, i, j, upto)?.into_iter().map(|b| b.poly).collect())
            }
            FamilyParams::Gegenbauer { n } => gegenbauer_family(n, upto),
        }
    }

    pub fn member(&self, k: usize) -> Result<Polynomial> {
        Ok(self.members(k)?.pop().expect("non-empty family"))
    }
}

/// Coefficients `f_k` with `p = Σ f_k · member_k`, exactly.
pub fn expand_in_family(p: &Polynomial, fam: &FamilyParams) -> Result<Vec<Rational>> {
    let Some(deg) = p.degree() else {
        return Ok(vec![Rational::zero()]);
    };
    let members = fam.members(deg)?;
    let mut rem = p.clone();
    let mut out = vec![Rational::zero(); deg + 1];
    for k in (0..=deg).rev() {
        let lead = members[k].leading();
        if lead.is_zero() || members[k].degree() != Some(k) {
            return Err(Error::domain(format!("family member {k} does not have degree {k}")));
        }
        let c = rem.coeff(k) / lead;
        if !c.is_zero() {
            rem = &rem - &members[k].scale(&c);
        }
        out[k] = c;
    }
    debug_assert!(rem.is_zero());
    Ok(out)
}

/// `Σ f_k · member_k`.
pub fn recombine(coeffs: &[Rational], fam: &FamilyParams) -> Result<Polynomial> {
    if coeffs.is_empty() {
        return Ok(Polynomial::zero());
    }
    let members = fam.members(coeffs.len() - 1)?;
    Ok(coeffs
        .iter()
        .zip(&members)
        .fold(Polynomial::zero(), |acc, (c, m)| &acc + &m.scale(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn qbinomial_values() {
        assert_eq!(qbinomial(4, 2, 1).unwrap(), int(6));
        assert_eq!(qbinomial(2, 1, 2).unwrap(), int(3));
        assert_eq!(qbinomial(7, 0, 3).unwrap(), int(1));
        assert_eq!(qbinomial(4, 2, 2).unwrap(), int(35));
        assert!(qbinomial(2, 3, 2).is_err());
        assert!(qbinomial(2, 1, 0).is_err());
    }

    #[test]
    fn bracket_values() {
        assert_eq!(bracket(5, 1).unwrap(), int(5));
        assert_eq!(bracket(0, 3).unwrap(), int(0));
        assert_eq!(bracket(2, 2).unwrap(), frac(3, 2));
    }

    #[test]
    fn krawtchouk_examples() {
        let k0 = krawtchouk(5, 3, 0).unwrap();
        assert_eq!(k0, Polynomial::one());
        let k22 = krawtchouk(4, 2, 2).unwrap();
        assert_eq!(k22.eval(&int(1)), int(0));
        assert_eq!(k22.degree(), Some(2));
        for q in 2..5u64 {
            for k in 0..=6usize {
                let p = krawtchouk(6, q, k).unwrap();
                let expected = rational::pow(&int(q as i64 - 1), k as u32) * rational::big(rational::binomial(6, k as u64));
                assert_eq!(p.eval(&int(0)), expected);
            }
        }
        assert!(krawtchouk(3, 2, 4).is_err());
        assert!(krawtchouk(3, 1, 1).is_err());
    }

    #[test]
    fn hahn_examples() {
        assert_eq!(hahn_johnson(6, 2, 0).unwrap(), Polynomial::one());
        let q1 = hahn_johnson(6, 2, 1).unwrap();
        let q0 = hahn_johnson(6, 2, 0).unwrap();
        let s: Rational = (0..=2)
            .map(|i| {
                let w = rational::binomial(2, i) * rational::binomial(4, i);
                rational::big(w) * q1.eval(&int(i as i64)) * q0.eval(&int(i as i64))
            })
            .sum();
        assert!(s.is_zero());
        assert!(hahn_johnson(6, 2, 3).is_err());
        // w > n/2 mirrors to min(w, n-w) levels
        assert!(hahn_johnson(6, 5, 1).is_ok());
        assert!(hahn_johnson(6, 5, 2).is_err());
    }

    #[test]
    fn qhahn_matches_hahn_at_q1() {
        for n in 2..=8usize {
            for w in 0..=n {
                for k in 0..=hahn_levels(n, w) {
                    let h = hahn_johnson(n, w, k).unwrap();
                    let qh = qhahn(n, 1, w, w, k).unwrap();
                    assert_eq!(h, qh.poly, "n={n} w={w} k={k}");
                }
            }
        }
    }

    #[test]
    fn weight_w_examples() {
        assert_eq!(weight_w(5, 2, 2, 2, 0), int(1));
        assert_eq!(weight_w(4, 1, 2, 2, 1), int(4));
        assert_eq!(weight_w(3, 2, 1, 1, 1), int(6));
        assert_eq!(weight_w(4, 1, 2, 2, 3), int(0));
    }

    #[test]
    fn gegenbauer_examples() {
        assert_eq!(gegenbauer(5, 0).unwrap(), Polynomial::one());
        assert_eq!(gegenbauer(5, 1).unwrap(), Polynomial::x());
        assert_eq!(
            gegenbauer(3, 2).unwrap(),
            Polynomial::new(vec![frac(-1, 2), int(0), frac(3, 2)])
        );
        // n = 2 gives Chebyshev T_2 = 2t^2 - 1
        assert_eq!(gegenbauer(2, 2).unwrap(), Polynomial::from_i64(&[-1, 0, 2]));
        for k in 0..8 {
            let p = gegenbauer(8, k).unwrap();
            assert_eq!(p.degree(), Some(k));
            assert_eq!(p.eval(&int(1)), int(1));
        }
        assert!(gegenbauer(1, 2).is_err());
    }

    #[test]
    fn expansion_basics() {
        let fam = FamilyParams::Gegenbauer { n: 8 };
        let p3 = gegenbauer(8, 3).unwrap();
        assert_eq!(
            expand_in_family(&p3, &fam).unwrap(),
            vec![int(0), int(0), int(0), int(1)]
        );
        let fam = FamilyParams::Krawtchouk { n: 6, q: 2 };
        let p = Polynomial::from_i64(&[3, -1, 4, 1, -5]);
        let c = expand_in_family(&p, &fam).unwrap();
        assert_eq!(recombine(&c, &fam).unwrap(), p);
        let too_high = Polynomial::monomial(7, int(1));
        assert!(expand_in_family(&too_high, &fam).is_err());
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<u64> = (0..30).filter(|&q| is_prime_power(q)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]);
    }
}
