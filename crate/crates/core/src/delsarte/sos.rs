//! Sum-of-squares certificates for `F ≤ 0` on an interval.
//!
//! We look for `-F = g² (σ_0 + (t - a)(b - t) σ_1)` with `σ_0`, `σ_1` sums
//! of squares given by Gram matrices. Repeated factors `g` are split off
//! exactly first: a double root inside the interval forces both Gram
//! matrices onto a face of the cone, where rounding would never land.
//! The Gram matrices come from the interior-point solver and count only
//! after exact rounding and an exact polynomial identity check.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::poly::{nonnegative_on, Polynomial, SignCheck};
use crate::rational::{self, Rational};
use crate::sdp::{BlockKind, BlockSpec, BlockValue, SdpEntry, SdpProblem};
use crate::solvers::ipm_solve;

#[derive(Debug, Clone, PartialEq)]
pub enum SosVerdict {
    /// `-F = factor² · (mᵀ gram m + (t - a)(b - t) mᵀ gram_interval m)`
    /// with `m` the monomial vector of the matching length, exactly.
    Valid { factor: Polynomial, gram: RatMatrix, gram_interval: RatMatrix },
    /// `F` is positive somewhere in the interval.
    Invalid { at: Rational, value: Rational },
    /// No exact certificate found; fall back to a Sturm check.
    Inconclusive { reason: String },
}

/// Quadratic form `mᵀ G m` as a polynomial.
fn gram_poly(g: &RatMatrix) -> Polynomial {
    let size = g.len();
    let mut coeffs = vec![Rational::zero(); (2 * size).max(1)];
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            coeffs[i + j] += v;
        }
    }
    Polynomial::new(coeffs)
}

fn interval_factor(a: &Rational, b: &Rational) -> Polynomial {
    // (t - a)(b - t)
    &Polynomial::linear_root(a) * &(-&Polynomial::linear_root(b))
}

/// Splits `p = g² r` with `g` collecting every repeated factor pair.
fn deflate(p: &Polynomial) -> (Polynomial, Polynomial) {
    let mut rest = p.clone();
    let mut factor = Polynomial::one();
    loop {
        if rest.degree().unwrap_or(0) < 2 {
            break;
        }
        let d = rest.gcd(&rest.derivative());
        if d.degree().unwrap_or(0) == 0 {
            break;
        }
        let r = d.squarefree();
        let sq = &r * &r;
        let (quot, rem) = rest.div_rem(&sq);
        if !rem.is_zero() {
            break;
        }
        rest = quot;
        factor = &factor * &r;
    }
    (factor, rest)
}

pub fn sos_interval_check(f: &Polynomial, a: &Rational, b: &Rational) -> Result<SosVerdict> {
    if a > b {
        return Err(Error::domain("empty interval"));
    }
    let target = -f;
    if let SignCheck::Violated { at, value } = nonnegative_on(&target, a, b) {
        return Ok(SosVerdict::Invalid { at, value: -value });
    }
    let (factor, rest) = deflate(&target);
    let Some(deg) = rest.degree() else {
        return Ok(SosVerdict::Valid { factor: Polynomial::zero(), gram: vec![], gram_interval: vec![] });
    };
    let half = deg.div_ceil(2);
    let rho = interval_factor(a, b);
    let problem = sos_problem(&rest, &rho, half);
    let sol = match ipm_solve(&problem.to_f64(), 1e-11, 150) {
        Ok(s) => s,
        Err(e) => return Ok(SosVerdict::Inconclusive { reason: e.to_string() }),
    };
    let dense = |b: &BlockValue| b.to_dense();
    let x0 = dense(&sol.x[0]);
    let x1 = if half > 0 { Some(dense(&sol.x[1])) } else { None };
    for tol in [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-12] {
        let g1 = match &x1 {
            Some(m) => round_sym(m, tol)?,
            None => vec![],
        };
        if !linalg::is_psd_exact(&g1) {
            continue;
        }
        let residual = &rest - &(&rho * &gram_poly(&g1));
        if residual.degree().is_some_and(|d| d > 2 * half) {
            continue;
        }
        let mut g0 = round_sym(&x0, tol)?;
        project_onto_coefficients(&mut g0, &residual);
        if !linalg::is_psd_exact(&g0) {
            continue;
        }
        let rebuilt = &(&factor * &factor) * &(&gram_poly(&g0) + &(&rho * &gram_poly(&g1)));
        if rebuilt == target {
            return Ok(SosVerdict::Valid { factor, gram: g0, gram_interval: g1 });
        }
    }
    Ok(SosVerdict::Inconclusive { reason: "rounded Gram matrices are not exactly PSD".into() })
}

/// X-side feasibility SDP: blocks `Q` (size `half+1`) and `Q'` (size
/// `half`), one equality per coefficient of `rest`.
fn sos_problem(rest: &Polynomial, rho: &Polynomial, half: usize) -> SdpProblem<Rational> {
    let mut blocks = vec![BlockSpec { size: half + 1, kind: BlockKind::Psd }];
    if half > 0 {
        blocks.push(BlockSpec { size: half, kind: BlockKind::Psd });
    }
    let mut p = SdpProblem::new(blocks, false, Rational::zero());
    for deg in 0..=2 * half {
        let mut entries = Vec::new();
        for i in 0..=half {
            for j in i..=half {
                if i + j == deg {
                    entries.push(SdpEntry { block: 0, i, j, value: Rational::one() });
                }
            }
        }
        for i in 0..half {
            for j in i..half {
                if deg >= i + j {
                    let c = rho.coeff(deg - i - j);
                    if !c.is_zero() {
                        entries.push(SdpEntry { block: 1, i, j, value: c });
                    }
                }
            }
        }
        p.push_matrix(rest.coeff(deg), entries);
    }
    p
}

fn round_sym(m: &nalgebra::DMatrix<f64>, tol: f64) -> Result<RatMatrix> {
    let n = m.nrows();
    let mut out = linalg::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rational::simplest_within(0.5 * (m[(i, j)] + m[(j, i)]), tol)?;
            out[i][j] = v.clone();
            out[j][i] = v;
        }
    }
    Ok(out)
}

/// Orthogonal projection onto `{G : Σ_{i+j=d} G_ij = target_d}`: spread
/// each anti-diagonal's defect evenly over its entries.
fn project_onto_coefficients(g: &mut RatMatrix, target: &Polynomial) {
    let n = g.len();
    if n == 0 {
        return;
    }
    for d in 0..=2 * (n - 1) {
        let cells: Vec<(usize, usize)> = (0..n).filter(|&i| d >= i && d - i < n).map(|i| (i, d - i)).collect();
        let sum: Rational = cells.iter().map(|&(i, j)| g[i][j].clone()).sum();
        let defect = (target.coeff(d) - sum) / rational::int(cells.len() as i64);
        if !defect.is_zero() {
            for (i, j) in cells {
                g[i][j] += &defect;
            }
        }
    }
}
