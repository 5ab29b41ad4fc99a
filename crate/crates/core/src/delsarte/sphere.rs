//! Sampled Delsarte LP on the sphere.
//!
//! The float LP only proposes coefficients. They are rounded to rationals,
//! `f_0` is lowered by the smallest dyadic `ε` for which an exact Sturm
//! check proves `F - ε ≤ 0` on `[-1, s]`, and the resulting certificate is
//! verified before any bound is returned.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{lp_to_f64, verify_certificate, DelsarteLp, DelsarteOutcome, LpCertificate, LpForm, LpMethod, SpaceSpec, Verdict};
use crate::error::{Error, Result};
use crate::orthopoly;
use crate::poly::{nonnegative_on, Polynomial, SignCheck};
use crate::rational::{self, Rational};
use crate::solvers::simplex::simplex_solve_unchecked;
use crate::solvers::{simplex_solve, LpProblem, Relation, Sense};

pub const DEFAULT_DEGREE: usize = 10;
pub const DEFAULT_GRID: usize = 200;

/// Fractional bits kept when rounding grid points and coefficients.
const GRID_BITS: u32 = 24;
const COEFF_BITS: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereOptions {
    pub degree: usize,
    pub grid: usize,
}

impl Default for SphereOptions {
    fn default() -> Self {
        SphereOptions { degree: DEFAULT_DEGREE, grid: DEFAULT_GRID }
    }
}

/// `count` Chebyshev–Lobatto points of `[-1, s]` (both ends included),
/// rounded to dyadic rationals, ascending and distinct.
pub fn chebyshev_grid(s: &Rational, count: usize) -> Result<Vec<Rational>> {
    let count = count.max(2);
    let lo = -1.0;
    let hi = rational::to_f64(s);
    let mut pts = vec![-Rational::one(), s.clone()];
    for j in 1..count - 1 {
        let c = (std::f64::consts::PI * j as f64 / (count - 1) as f64).cos();
        let t = 0.5 * (lo + hi) - 0.5 * (hi - lo) * c;
        let r = rational::dyadic_nearest(t, GRID_BITS)?;
        if r > -Rational::one() && r < *s {
            pts.push(r);
        }
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Sampled LP in the coefficients: minimize `1 + Σ_{k≥1} f_k` subject to
/// `Σ_k f_k P_k^n(t) ≤ -1` at every grid point `t`.
pub fn build_sphere_lp(n: usize, s: &Rational, degree: usize, grid: usize) -> Result<DelsarteLp> {
    let space = SpaceSpec::sphere(n, s.clone());
    space.validate()?;
    if degree == 0 {
        return Err(Error::domain("the sphere LP needs degree >= 1"));
    }
    let polys = orthopoly::gegenbauer_family(n, degree)?;
    let points = chebyshev_grid(s, grid)?;
    let names = (1..=degree).map(|k| format!("f_{k}")).collect();
    let mut problem = LpProblem::new(names, Sense::Minimize, vec![Rational::one(); degree]);
    problem.offset = Rational::one();
    for t in &points {
        let row = polys[1..].iter().map(|p| p.eval(t)).collect();
        problem.add(row, Relation::Le, -Rational::one());
    }
    Ok(DelsarteLp { space, degree, form: LpForm::Coefficients, problem, points, trivial: false })
}

/// Samples, rounds, repairs and verifies. The returned bound always comes
/// from a certificate that passed [`verify_certificate`].
///
/// Both solves use the LP dual to the coefficient form (weights `x_t ≥ 0`
/// on sample points, one `≤` row per degree), which needs no phase one and
/// whose row multipliers are the `f_k`. The float solve on the full grid
/// only seeds a small working set (its support and neighbours); that set
/// is solved exactly and grown with the local maxima where the candidate
/// `F` is positive, so rounding starts from an exact vertex and the repair
/// margin stays tiny.
pub fn sphere_bound(n: usize, s: &Rational, opts: &SphereOptions) -> Result<DelsarteOutcome> {
    let space = SpaceSpec::sphere(n, s.clone());
    space.validate()?;
    if opts.degree == 0 {
        return Err(Error::domain("the sphere LP needs degree >= 1"));
    }
    let polys = orthopoly::gegenbauer_family(n, opts.degree)?;
    let float_polys: Vec<Vec<f64>> = polys.iter().map(Polynomial::to_f64_coeffs).collect();
    let grid = chebyshev_grid(s, opts.grid)?;
    let mut working: Vec<Rational> = vec![-Rational::one(), s.clone()];
    let mut pivots = 0;
    // The float solve only proposes a support; if it breaks down a uniform
    // subsample of the grid starts the exchange instead.
    match simplex_solve_unchecked(&lp_to_f64(&distribution_lp(&polys, &grid))).and_then(|o| o.optimal()) {
        Ok(seed) => {
            pivots += seed.pivots;
            for (idx, w) in seed.primal.iter().enumerate() {
                if *w > 1e-12 {
                    for j in idx.saturating_sub(1)..=(idx + 1).min(grid.len() - 1) {
                        if !working.contains(&grid[j]) {
                            working.push(grid[j].clone());
                        }
                    }
                }
            }
        }
        Err(_) => {
            let stride = (grid.len() / (4 * opts.degree)).max(1);
            for t in grid.iter().step_by(stride) {
                if !working.contains(t) {
                    working.push(t.clone());
                }
            }
        }
    }

    let mut coefficients = Vec::new();
    for _ in 0..REFINE_ROUNDS {
        let lpw = distribution_lp(&polys, &working);
        let sol = simplex_solve(&lpw)?
            .optimal()
            .map_err(|e| Error::solver(format!("sphere working-set LP at degree {}: {e}", opts.degree)))?;
        pivots += sol.pivots;
        coefficients = std::iter::once(Rational::one()).chain(sol.dual).collect();
        let f: Vec<f64> = coefficients.iter().map(rational::to_f64).collect();
        let mut added = false;
        for t in violations(&f, &float_polys, rational::to_f64(s)) {
            let r = rational::dyadic_nearest(t, GRID_BITS)?;
            if r > -Rational::one() && r < *s && !working.contains(&r) {
                working.push(r);
                added = true;
            }
        }
        if !added {
            break;
        }
    }

    let poly = coefficients
        .iter()
        .zip(&polys)
        .fold(Polynomial::zero(), |acc, (f, p)| &acc + &p.scale(f));
    let eps = repair_margin(&poly, s)?;
    coefficients[0] = Rational::one() - &eps;
    if !coefficients[0].is_positive() {
        return Err(Error::solver(format!(
            "sampled certificate is too far from feasible (needs margin {eps})"
        )));
    }
    let certificate = LpCertificate::new(space, coefficients)?;
    match verify_certificate(&certificate)? {
        Verdict::Valid { bound } => Ok(DelsarteOutcome {
            bound,
            certificate,
            distribution: None,
            method: LpMethod::SampledVerified,
            pivots,
        }),
        Verdict::Invalid { reason, .. } => Err(Error::solver(format!("repaired certificate rejected: {reason}"))),
    }
}

/// maximize `1 + Σ_t x_t` subject to `-Σ_t x_t P_k(t) ≤ 1` for `k ≥ 1`.
fn distribution_lp(polys: &[Polynomial], points: &[Rational]) -> LpProblem<Rational> {
    let names = points.iter().map(|t| format!("x[{t}]")).collect();
    let mut p = LpProblem::new(names, Sense::Maximize, vec![Rational::one(); points.len()]);
    p.offset = Rational::one();
    for poly in &polys[1..] {
        p.add(points.iter().map(|t| -poly.eval(t)).collect(), Relation::Le, Rational::one());
    }
    p
}

const REFINE_ROUNDS: usize = 30;
const DENSE_SAMPLES: usize = 4000;

fn eval_f64(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Local maxima of `F = Σ f_k P_k` on a dense grid of `[-1, s]` where
/// `F > 1e-12`, refined by golden-section search.
fn violations(f: &[f64], polys: &[Vec<f64>], s: f64) -> Vec<f64> {
    let value = |t: f64| f.iter().zip(polys).map(|(c, p)| c * eval_f64(p, t)).sum::<f64>();
    let step = (s + 1.0) / DENSE_SAMPLES as f64;
    let vals: Vec<f64> = (0..=DENSE_SAMPLES).map(|j| value(-1.0 + step * j as f64)).collect();
    let mut out = Vec::new();
    for j in 1..DENSE_SAMPLES {
        if vals[j] > 1e-12 && vals[j] >= vals[j - 1] && vals[j] >= vals[j + 1] {
            let (mut lo, mut hi) = (-1.0 + step * (j - 1) as f64, -1.0 + step * (j + 1) as f64);
            for _ in 0..60 {
                let m1 = lo + (hi - lo) * 0.381_966;
                let m2 = hi - (hi - lo) * 0.381_966;
                if value(m1) < value(m2) {
                    lo = m1;
                } else {
                    hi = m2;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    out
}

/// Smallest tried dyadic `ε ≥ 0` with `F(t) ≤ ε` on `[-1, s]`, proven
/// exactly.
fn repair_margin(poly: &Polynomial, s: &Rational) -> Result<Rational> {
    let hi = rational::to_f64(s);
    let samples = 4000;
    let mut peak = f64::NEG_INFINITY;
    for j in 0..=samples {
        let t = -1.0 + (hi + 1.0) * j as f64 / samples as f64;
        peak = peak.max(poly.eval_f64(t));
    }
    if nonnegative_on(&-poly, &-Rational::one(), s) == SignCheck::Holds {
        return Ok(Rational::zero());
    }
    let mut eps = rational::dyadic_up(peak.max(0.0) * (1.0 + 1e-9) + 1e-15, COEFF_BITS)?;
    if eps.is_zero() {
        eps = Rational::new(BigInt::one(), BigInt::one() << COEFF_BITS);
    }
    for _ in 0..200 {
        let shifted = &Polynomial::constant(eps.clone()) - poly;
        match nonnegative_on(&shifted, &-Rational::one(), s) {
            SignCheck::Holds => return Ok(eps),
            SignCheck::Violated { value, .. } => eps = &eps + &eps + value.abs(),
        }
    }
    Err(Error::solver("could not repair the sampled certificate"))
}
