//! Delsarte's linear programming bound.
//!
//! For the finite spaces the LP is posed in the distance-distribution
//! variables `x_i` of a code and solved exactly; the optimal dual vector is
//! the polynomial certificate `F = Σ f_k P_k` with `f_k ≥ 0` and `F ≤ 0` on
//! the admissible distances, giving `|C| ≤ F(0)/f_0`. On the sphere the LP
//! is only sampled, and a bound is reported only after the rounded
//! certificate passes an exact Sturm check.

mod sos;
mod sphere;

pub use sos::{sos_interval_check, SosVerdict};
pub use sphere::{build_sphere_lp, chebyshev_grid, sphere_bound, SphereOptions, DEFAULT_DEGREE, DEFAULT_GRID};

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthopoly::{self, FamilyParams};
use crate::poly::{nonnegative_on, Polynomial, SignCheck};
use crate::rational::{self, int, Rational};
use crate::solvers::{simplex_solve, LpOutcome, LpProblem, Relation, Sense};

/// A metric space together with the minimum distance of the codes sought.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SpaceSpec {
    Hamming { n: usize, q: u64, delta: usize },
    /// Constant-weight words of length `n` and weight `w`; distances are
    /// Hamming distances and therefore even.
    Johnson { n: usize, w: usize, delta: usize },
    /// Unit sphere in `R^n`; codes have pairwise inner products `≤ max_cos`.
    Sphere {
        n: usize,
        #[serde(with = "rational::as_string")]
        max_cos: Rational,
    },
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Hamming { n, q, delta } => write!(f, "Hamming(n={n}, q={q}, delta={delta})"),
            SpaceSpec::Johnson { n, w, delta } => write!(f, "Johnson(n={n}, w={w}, delta={delta})"),
            SpaceSpec::Sphere { n, max_cos } => write!(f, "Sphere(n={n}, max_cos={max_cos})"),
        }
    }
}

impl SpaceSpec {
    pub fn hamming(n: usize, q: u64, delta: usize) -> Self {
        SpaceSpec::Hamming { n, q, delta }
    }

    pub fn johnson(n: usize, w: usize, delta: usize) -> Self {
        SpaceSpec::Johnson { n, w, delta }
    }

    pub fn sphere(n: usize, max_cos: Rational) -> Self {
        SpaceSpec::Sphere { n, max_cos }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceSpec::Hamming { n, q, delta } => {
                if *n == 0 || *q < 2 || *delta == 0 {
                    return Err(Error::domain("Hamming space needs n >= 1, q >= 2 and delta >= 1"));
                }
            }
            SpaceSpec::Johnson { n, w, delta } => {
                if *n == 0 || w > n {
                    return Err(Error::domain("Johnson space needs n >= 1 and w <= n"));
                }
                if *delta < 2 || delta % 2 != 0 {
                    return Err(Error::domain("Johnson distances are even: delta must be even and >= 2"));
                }
            }
            SpaceSpec::Sphere { n, max_cos } => {
                if *n < 2 {
                    return Err(Error::domain("sphere dimension must be at least 2"));
                }
                if *max_cos < -Rational::one() || *max_cos >= Rational::one() {
                    return Err(Error::domain("max_cos must lie in [-1, 1)"));
                }
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, SpaceSpec::Sphere { .. })
    }

    /// Number of points, for finite spaces.
    pub fn size(&self) -> Option<num_bigint::BigInt> {
        match *self {
            SpaceSpec::Hamming { n, q, .. } => Some(num_traits::pow(num_bigint::BigInt::from(q), n)),
            SpaceSpec::Johnson { n, w, .. } => Some(rational::binomial(n as u64, w as u64)),
            SpaceSpec::Sphere { .. } => None,
        }
    }

    /// Largest level of the zonal family (unbounded on the sphere).
    pub fn max_degree(&self) -> Option<usize> {
        match *self {
            SpaceSpec::Hamming { n, .. } => Some(n),
            SpaceSpec::Johnson { n, w, .. } => Some(orthopoly::hahn_levels(n, w)),
            SpaceSpec::Sphere { .. } => None,
        }
    }

    pub fn family(&self) -> FamilyParams {
        match *self {
            SpaceSpec::Hamming { n, q, .. } => FamilyParams::Krawtchouk { n, q },
            SpaceSpec::Johnson { n, w, .. } => FamilyParams::Hahn { n, w },
            SpaceSpec::Sphere { n, .. } => FamilyParams::Gegenbauer { n },
        }
    }

    /// Zonal polynomials `P_0..=P_degree`, normalized to 1 at the
    /// coincident pair: `K_k/K_k(0)` in the Hamming distance, `Q_k` in half
    /// the Johnson distance, Gegenbauer `P_k^n` in the inner product.
    pub fn zonal_polynomials(&self, degree: usize) -> Result<Vec<Polynomial>> {
        self.validate()?;
        if let Some(max) = self.max_degree() {
            if degree > max {
                return Err(Error::domain(format!("degree {degree} exceeds the maximum level {max} of {self}")));
            }
        }
        let members = self.family().members(degree)?;
        Ok(match self {
            SpaceSpec::Hamming { .. } => members
                .into_iter()
                .map(|p| {
                    let at0 = p.eval(&Rational::zero());
                    p.scale(&at0.recip())
                })
                .collect(),
            _ => members,
        })
    }

    /// Values of the polynomial variable at which a certificate must be
    /// non-positive (finite spaces). Empty when `delta` exceeds the diameter.
    pub fn forbidden_free_points(&self) -> Vec<usize> {
        match *self {
            SpaceSpec::Hamming { n, delta, .. } => (delta.max(1)..=n).collect(),
            SpaceSpec::Johnson { n, w, delta } => {
                let top = orthopoly::hahn_levels(n, w);
                (delta.div_ceil(2).max(1)..=top).collect()
            }
            SpaceSpec::Sphere { .. } => Vec::new(),
        }
    }

    /// Label of the LP variable attached to a point of the polynomial
    /// variable: the distance for Hamming, the intersection size
    /// `|x ∩ y| = w - e` for Johnson.
    fn variable_name(&self, point: usize) -> String {
        match *self {
            SpaceSpec::Johnson { w, .. } => format!("x_{}", w - point),
            _ => format!("x_{point}"),
        }
    }

    /// True when `delta` exceeds the diameter, so only one-point codes exist.
    pub fn is_trivial(&self) -> bool {
        self.is_finite() && self.forbidden_free_points().is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpForm {
    /// Variables are the distance distribution `x_i`, maximized.
    DistanceDistribution,
    /// Variables are the certificate coefficients `f_1..f_d` (`f_0 = 1`),
    /// minimized.
    Coefficients,
}

#[derive(Debug, Clone)]
pub struct DelsarteLp {
    pub space: SpaceSpec,
    pub degree: usize,
    pub form: LpForm,
    pub problem: LpProblem<Rational>,
    /// Polynomial-variable value attached to each variable (finite spaces)
    /// or to each constraint (sampled sphere).
    pub points: Vec<Rational>,
    /// `delta` exceeds the diameter: the bound is 1 without solving.
    pub trivial: bool,
}

/// The Delsarte LP for a finite space: maximize `1 + Σ_i x_i` over
/// `x_i ≥ 0` (`i` an admissible distance) subject to
/// `1 + Σ_i x_i P_k(i) ≥ 0` for `1 ≤ k ≤ degree`. On the sphere this
/// samples the constraints on the default grid.
pub fn build_lp(space: &SpaceSpec, degree_cap: Option<usize>) -> Result<DelsarteLp> {
    space.validate()?;
    if let SpaceSpec::Sphere { n, max_cos } = space {
        return build_sphere_lp(*n, max_cos, degree_cap.unwrap_or(DEFAULT_DEGREE), DEFAULT_GRID);
    }
    let max = space.max_degree().expect("finite space");
    let degree = degree_cap.unwrap_or(max);
    let polys = space.zonal_polynomials(degree)?;
    let points = space.forbidden_free_points();
    let names: Vec<String> = points.iter().map(|&p| space.variable_name(p)).collect();
    let mut problem = LpProblem::new(names, Sense::Maximize, vec![Rational::one(); points.len()]);
    problem.offset = Rational::one();
    for p in polys.iter().skip(1) {
        let row = points.iter().map(|&i| -p.eval(&int(i as i64))).collect();
        problem.add(row, Relation::Le, Rational::one());
    }
    Ok(DelsarteLp {
        space: space.clone(),
        degree,
        form: LpForm::DistanceDistribution,
        trivial: points.is_empty(),
        points: points.iter().map(|&i| int(i as i64)).collect(),
        problem,
    })
}

/// Exact two-phase simplex; primal and dual objectives agree exactly on
/// optimal outcomes.
pub fn solve_lp_exact(p: &LpProblem<Rational>) -> Result<LpOutcome<Rational>> {
    simplex_solve(p)
}

/// Coefficients of `F = Σ f_k P_k` in the normalized zonal basis of the
/// space, and the bound `F(0)/f_0 = Σ f_k / f_0` they claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpCertificate {
    pub space: SpaceSpec,
    #[serde(with = "rational::vec_as_string")]
    pub coefficients: Vec<Rational>,
    #[serde(with = "rational::as_string")]
    pub claimed_bound: Rational,
}

impl LpCertificate {
    /// Certificate with the bound its coefficients imply.
    pub fn new(space: SpaceSpec, coefficients: Vec<Rational>) -> Result<Self> {
        let f0 = coefficients.first().ok_or_else(|| Error::domain("empty coefficient vector"))?;
        if !f0.is_positive() {
            return Err(Error::domain("f_0 must be positive"));
        }
        let total: Rational = coefficients.iter().sum();
        let claimed_bound = total / f0;
        Ok(LpCertificate { space, coefficients, claimed_bound })
    }

    pub fn polynomial(&self) -> Result<Polynomial> {
        let polys = self.space.zonal_polynomials(self.coefficients.len().saturating_sub(1))?;
        Ok(self
            .coefficients
            .iter()
            .zip(&polys)
            .fold(Polynomial::zero(), |acc, (f, p)| &acc + &p.scale(f)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Valid {
        #[serde(with = "rational::as_string")]
        bound: Rational,
    },
    Invalid {
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<String>,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn bound(&self) -> Option<&Rational> {
        match self {
            Verdict::Valid { bound } => Some(bound),
            Verdict::Invalid { .. } => None,
        }
    }

    fn invalid(reason: impl Into<String>, witness: Option<String>) -> Self {
        Verdict::Invalid { reason: reason.into(), witness }
    }
}

/// Checks a certificate exactly: `f_0 > 0`, every `f_k ≥ 0`, `F ≤ 0` at
/// every admissible distance (finite spaces, all points) or on the whole
/// interval `[-1, max_cos]` (sphere, Sturm sequences), and that the
/// claimed bound is exactly `Σ f_k / f_0`.
pub fn verify_certificate(cert: &LpCertificate) -> Result<Verdict> {
    cert.space.validate()?;
    let f = &cert.coefficients;
    let Some(f0) = f.first() else {
        return Ok(Verdict::invalid("no coefficients", None));
    };
    if !f0.is_positive() {
        return Ok(Verdict::invalid("f_0 must be positive", Some(format!("f_0 = {f0}"))));
    }
    if let Some(k) = f.iter().position(Signed::is_negative) {
        return Ok(Verdict::invalid(format!("negative coefficient f_{k}"), Some(format!("f_{k} = {}", f[k]))));
    }
    if let Some(max) = cert.space.max_degree() {
        if f.len() - 1 > max {
            return Ok(Verdict::invalid(format!("degree {} exceeds the maximum level {max}", f.len() - 1), None));
        }
    }
    let poly = cert.polynomial()?;
    match &cert.space {
        SpaceSpec::Sphere { max_cos, .. } => {
            if let SignCheck::Violated { at, value } = nonnegative_on(&-&poly, &-Rational::one(), max_cos) {
                return Ok(Verdict::invalid(
                    "F is positive inside [-1, max_cos]",
                    Some(format!("F({at}) = {}", -value)),
                ));
            }
        }
        space => {
            for i in space.forbidden_free_points() {
                let v = poly.eval(&int(i as i64));
                if v.is_positive() {
                    return Ok(Verdict::invalid(
                        format!("F is positive at admissible point {i}"),
                        Some(format!("F({i}) = {v}")),
                    ));
                }
            }
        }
    }
    let bound: Rational = f.iter().sum::<Rational>() / f0;
    if bound != cert.claimed_bound {
        return Ok(Verdict::invalid(
            format!("claimed bound {} differs from the certified bound {bound}", cert.claimed_bound),
            None,
        ));
    }
    Ok(Verdict::Valid { bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpMethod {
    /// `delta` exceeds the diameter.
    Trivial,
    ExactSimplex,
    /// Float LP on a grid, rounded, repaired and verified with Sturm
    /// sequences.
    SampledVerified,
}

#[derive(Debug, Clone)]
pub struct DelsarteOutcome {
    pub bound: Rational,
    pub certificate: LpCertificate,
    /// Optimal `(variable name, x_i)` pairs, finite spaces only.
    pub distribution: Option<Vec<(String, Rational)>>,
    pub method: LpMethod,
    pub pivots: usize,
}

/// Solves (or, on the sphere, samples and certifies) the Delsarte LP and
/// returns a bound that has passed [`verify_certificate`].
pub fn delsarte_bound(space: &SpaceSpec, degree_cap: Option<usize>) -> Result<DelsarteOutcome> {
    space.validate()?;
    if let SpaceSpec::Sphere { n, max_cos } = space {
        let opts = SphereOptions { degree: degree_cap.unwrap_or(DEFAULT_DEGREE), grid: DEFAULT_GRID };
        return sphere_bound(*n, max_cos, &opts);
    }
    let lp = build_lp(space, degree_cap)?;
    if lp.trivial {
        let certificate = LpCertificate::new(space.clone(), vec![Rational::one()])?;
        return Ok(DelsarteOutcome {
            bound: Rational::one(),
            certificate,
            distribution: Some(Vec::new()),
            method: LpMethod::Trivial,
            pivots: 0,
        });
    }
    let sol = solve_lp_exact(&lp.problem)?.optimal()?;
    let mut coefficients = vec![Rational::one()];
    coefficients.extend(sol.dual.iter().cloned());
    let certificate = LpCertificate::new(space.clone(), coefficients)?;
    match verify_certificate(&certificate)? {
        Verdict::Valid { bound } if bound == sol.value => {}
        other => return Err(Error::solver(format!("LP dual failed verification: {other:?}"))),
    }
    let distribution = lp.problem.variables.iter().cloned().zip(sol.primal.iter().cloned()).collect();
    Ok(DelsarteOutcome {
        bound: sol.value,
        certificate,
        distribution: Some(distribution),
        method: LpMethod::ExactSimplex,
        pivots: sol.pivots,
    })
}

pub(crate) fn lp_to_f64(p: &LpProblem<Rational>) -> LpProblem<f64> {
    let mut out = LpProblem::new(
        p.variables.clone(),
        p.sense,
        p.objective.iter().map(rational::to_f64).collect(),
    );
    out.offset = rational::to_f64(&p.offset);
    for c in &p.constraints {
        out.add(c.row.iter().map(rational::to_f64).collect(), c.relation, rational::to_f64(&c.rhs));
    }
    out
}
