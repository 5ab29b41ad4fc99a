//! Dense univariate polynomials with exact rational coefficients, plus
//! Sturm-sequence root isolation used to certify sign conditions on
//! intervals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Coefficient vector indexed by degree. Trailing zeros are never stored,
/// so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn monomial(degree: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Polynomial::new(coeffs)
    }

    /// `x - root`.
    pub fn linear_root(root: &Rational) -> Self {
        Polynomial::new(vec![-root.clone(), Rational::one()])
    }

    pub fn from_roots(roots: &[Rational]) -> Self {
        roots
            .iter()
            .fold(Polynomial::one(), |acc, r| &acc * &Polynomial::linear_root(r))
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_f64_coeffs().iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational::to_f64).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rational::int(k as i64))
                .collect(),
        )
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Polynomial) -> Self {
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Polynomial::constant(c.clone());
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Polynomial::zero(), Polynomial::zero());
        };
        if nd < dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let lead = a.leading();
            a.scale(&lead.recip())
        }
    }

    /// Product of the distinct irreducible factors (`p / gcd(p, p')`).
    pub fn squarefree(&self) -> Polynomial {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Writes `Σ c_k x^k` with `x` as the variable name.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let term = match k {
                0 => format!("{c}"),
                1 => format!("({c})*{var}"),
                _ => format!("({c})*{var}^{k}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]", self.display_in("x"))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

/// Sturm chain of a squarefree polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<Polynomial>,
}

impl SturmChain {
    pub fn new(p: &Polynomial) -> Self {
        let mut chain = vec![p.clone()];
        if p.degree().unwrap_or(0) > 0 {
            chain.push(p.derivative());
            loop {
                let n = chain.len();
                let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(-&r);
            }
        }
        SturmChain { chain }
    }

    /// Number of sign changes of the chain at `x` (zeros skipped).
    pub fn sign_changes(&self, x: &Rational) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Distinct roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> usize {
        self.sign_changes(lo).saturating_sub(self.sign_changes(hi))
    }
}

/// A root isolated in the half-open interval `(lo, hi]`; `lo == hi` marks
/// an exactly located root.
#[derive(Debug, Clone, PartialEq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

/// Isolates every distinct real root of `p` in the closed interval `[a, b]`.
/// The returned intervals are disjoint and sorted; interval endpoints are
/// never roots unless the interval is degenerate.
pub fn isolate_roots(p: &Polynomial, a: &Rational, b: &Rational) -> Vec<RootInterval> {
    assert!(a <= b, "empty interval");
    if p.is_zero() {
        return Vec::new();
    }
    let mut sf = p.squarefree();
    let mut exact_ends = Vec::new();
    for end in [a, b] {
        if sf.eval(end).is_zero() {
            exact_ends.push(end.clone());
            sf = sf.div_rem(&Polynomial::linear_root(end)).0;
        }
    }
    let chain = SturmChain::new(&sf);
    let mut out = Vec::new();
    if a < b {
        isolate_rec(&sf, &chain, a.clone(), b.clone(), &mut out);
    }
    for e in exact_ends {
        out.push(RootInterval { lo: e.clone(), hi: e });
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));
    out.dedup();
    out
}

// Precondition: neither `lo` nor `hi` is a root of `sf`.
fn isolate_rec(
    sf: &Polynomial,
    chain: &SturmChain,
    lo: Rational,
    hi: Rational,
    out: &mut Vec<RootInterval>,
) {
    let count = chain.count_roots(&lo, &hi);
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(RootInterval { lo, hi });
        return;
    }
    // Pick a split point that is not itself a root.
    let width = &hi - &lo;
    let mid = (2i64..)
        .flat_map(|den| (1..den).map(move |num| rational::frac(num, den)))
        .map(|f| &lo + &width * f)
        .find(|m| !sf.eval(m).is_zero())
        .expect("finitely many roots leave a non-root split point");
    isolate_rec(sf, chain, lo, mid.clone(), out);
    isolate_rec(sf, chain, mid, hi, out);
}

/// Outcome of an exact sign check on an interval.
#[derive(Debug, Clone, PartialEq)]
pub enum SignCheck {
    Holds,
    /// A rational point where the condition fails, with the offending value.
    Violated { at: Rational, value: Rational },
}

/// Decides exactly whether `p(t) >= 0` for every `t` in `[a, b]`.
///
/// Between consecutive distinct real roots the sign of `p` is constant, so
/// it suffices to sample one rational point strictly inside each gap.
pub fn nonnegative_on(p: &Polynomial, a: &Rational, b: &Rational) -> SignCheck {
    if p.is_zero() {
        return SignCheck::Holds;
    }
    let mut roots = isolate_roots(p, a, b);
    // Shrink each inner isolating interval until it is strictly separated
    // from its neighbours and from the interval ends.
    let sf = p.squarefree();
    let chain = SturmChain::new(&sf);
    for idx in 0..roots.len() {
        if roots[idx].lo == roots[idx].hi {
            continue;
        }
        loop {
            let r = &roots[idx];
            let left_ok = r.lo > *a && (idx == 0 || r.lo > roots[idx - 1].hi);
            let right_ok = r.hi < *b && (idx + 1 == roots.len() || r.hi < roots[idx + 1].lo);
            if left_ok && right_ok {
                break;
            }
            let (lo, hi) = (r.lo.clone(), r.hi.clone());
            let mid = (&lo + &hi) / rational::int(2);
            if sf.eval(&mid).is_zero() {
                roots[idx] = RootInterval { lo: mid.clone(), hi: mid };
                break;
            }
            roots[idx] = if chain.count_roots(&lo, &mid) == 1 {
                RootInterval { lo, hi: mid }
            } else {
                RootInterval { lo: mid, hi }
            };
        }
    }
    let mut samples = vec![a.clone(), b.clone()];
    if roots.is_empty() {
        samples.push((a + b) / rational::int(2));
    }
    // Sample points strictly inside every gap between consecutive roots.
    let mut prev = a.clone();
    for r in &roots {
        if r.lo == r.hi {
            if r.lo > prev {
                samples.push((&prev + &r.lo) / rational::int(2));
            }
            prev = r.hi.clone();
        } else {
            samples.push(r.lo.clone());
            samples.push(r.hi.clone());
            prev = r.hi.clone();
        }
    }
    if prev < *b {
        samples.push((&prev + b) / rational::int(2));
    }
    for s in samples {
        let v = p.eval(&s);
        if v.is_negative() {
            return SignCheck::Violated { at: s, value: v };
        }
    }
    SignCheck::Holds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn arithmetic_and_division() {
        let p = Polynomial::from_i64(&[-1, 0, 1]); // x^2 - 1
        let q = Polynomial::from_i64(&[1, 1]); // x + 1
        let (quot, rem) = p.div_rem(&q);
        assert_eq!(quot, Polynomial::from_i64(&[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(&quot * &q, p);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(p.eval(&int(3)), int(8));
        assert_eq!(p.derivative(), Polynomial::from_i64(&[0, 2]));
    }

    #[test]
    fn gcd_and_squarefree() {
        let p = Polynomial::from_roots(&[int(1), int(1), int(2)]);
        assert_eq!(p.squarefree(), Polynomial::from_roots(&[int(1), int(2)]));
        let g = p.gcd(&Polynomial::from_roots(&[int(1), int(3)]));
        assert_eq!(g, Polynomial::linear_root(&int(1)));
    }

    #[test]
    fn compose_shifts_the_variable() {
        let p = Polynomial::from_i64(&[0, 0, 1]);
        let shifted = p.compose(&Polynomial::from_i64(&[1, 1]));
        assert_eq!(shifted, Polynomial::from_i64(&[1, 2, 1]));
    }

    #[test]
    fn sturm_counts_and_isolation() {
        let p = Polynomial::from_roots(&[frac(-1, 2), int(0), frac(1, 3), int(2)]);
        let roots = isolate_roots(&p, &int(-1), &int(1));
        assert_eq!(roots.len(), 3);
        let roots = isolate_roots(&p, &int(0), &int(2));
        // both endpoints are roots and are reported exactly
        assert_eq!(roots.first().unwrap().lo, int(0));
        assert_eq!(roots.last().unwrap().hi, int(2));
        assert_eq!(roots.len(), 3);
    }

    #[test]
    fn sign_check_detects_double_roots_and_violations() {
        // (x - 1/2) x^2 (x + 1/2)^2 (x + 1) is <= 0 on [-1, 1/2]
        let e8 = Polynomial::from_roots(&[
            frac(1, 2),
            int(0),
            int(0),
            frac(-1, 2),
            frac(-1, 2),
            int(-1),
        ]);
        assert_eq!(nonnegative_on(&-&e8, &int(-1), &frac(1, 2)), SignCheck::Holds);
        match nonnegative_on(&-&e8, &int(-1), &frac(3, 4)) {
            SignCheck::Violated { at, value } => {
                assert!(at > frac(1, 2));
                assert!(value.is_negative());
            }
            SignCheck::Holds => panic!("positive part past 1/2 was missed"),
        }
        // x^2 - 1e-9 dips below zero on a tiny window
        let tiny = Polynomial::new(vec![-frac(1, 1_000_000_000), int(0), int(1)]);
        assert!(matches!(nonnegative_on(&tiny, &int(-1), &int(1)), SignCheck::Violated { .. }));
        assert_eq!(nonnegative_on(&tiny, &int(1), &int(2)), SignCheck::Holds);
    }
}
