//! Turning approximate SDP solutions into upper bounds that are safe.
//!
//! For a problem maximizing `offset - cᵀy`, any `X ⪰ 0` gives
//! `offset - cᵀy ≤ offset - F_0•X + Σ_i |F_i•X - c_i| · U_i` for every
//! feasible `y` with `|y_i| ≤ U_i`, because `Z(y)•X ≥ 0`. For a problem
//! minimizing `offset + cᵀy`, a `y` with `Z(y) ⪰ 0` is itself the bound.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{BlockKind, BlockMatrix, BlockValue, SdpEntry, SdpProblem, SdpSolution};
use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct RoundedBound {
    /// Safe (outward-rounded) upper bound on the natural objective.
    pub value: f64,
    /// `⌊value⌋`, present only when the margin does not straddle an integer.
    pub floored: Option<i64>,
    /// Total inflation added on top of the raw objective.
    pub margin: f64,
}

const FLOOR_MARGIN: f64 = 1e-6;

fn floor_if_stable(value: f64) -> Option<i64> {
    let f = value.floor();
    (value < f + 1.0 - FLOOR_MARGIN && f.abs() < 9e15).then_some(f as i64)
}

/// Safe upper bound on the natural objective from a float solution.
/// Maximization problems need a-priori bounds `|y_i| ≤ y_bounds[i]` over
/// the feasible set.
pub fn upper_bound_rounding(p: &SdpProblem<f64>, sol: &SdpSolution, y_bounds: Option<&[f64]>) -> Result<RoundedBound> {
    if p.maximize {
        let bounds = y_bounds.ok_or_else(|| Error::solver("inconclusive: no a-priori bounds on y supplied"))?;
        if bounds.len() != p.c.len() {
            return Err(Error::domain("one a-priori bound per constraint is required"));
        }
        // Shift X into the PSD cone.
        let mut x = sol.x.clone();
        for b in x.iter_mut() {
            let lam = b.min_eigenvalue();
            if lam < 0.0 || !lam.is_finite() {
                let s = -lam + 1e-14 * (1.0 + block_scale(b));
                shift(b, s);
            }
        }
        let mut magnitude = p.offset.abs();
        let f0x = super::sparse_dot(&p.matrices[0], &x);
        magnitude += f0x.abs();
        let mut penalty = 0.0;
        for (i, (ci, ui)) in p.c.iter().zip(bounds).enumerate() {
            let fx = super::sparse_dot(&p.matrices[i + 1], &x);
            penalty += (fx - ci).abs() * ui;
            magnitude += (fx.abs() + ci.abs()) * ui;
        }
        if !penalty.is_finite() {
            return Err(Error::solver("inconclusive: residuals are not finite"));
        }
        let raw = p.offset - f0x;
        let slack = 1e-12 * (1.0 + magnitude);
        let value = raw + penalty + slack;
        Ok(RoundedBound { value, floored: floor_if_stable(value), margin: penalty + slack })
    } else {
        let z = p.slack(&sol.y);
        let lam = z.iter().map(BlockValue::min_eigenvalue).fold(f64::INFINITY, f64::min);
        let zscale = z.iter().map(block_scale).fold(0.0, f64::max);
        if lam < -1e-13 * (1.0 + zscale) {
            return Err(Error::solver(format!("inconclusive: Z(y) has eigenvalue {lam:e}")));
        }
        let raw = p.natural_value(&sol.y);
        let magnitude: f64 = p.offset.abs() + p.c.iter().zip(&sol.y).map(|(c, y)| (c * y).abs()).sum::<f64>();
        let slack = 1e-12 * (1.0 + magnitude);
        let value = raw + slack;
        Ok(RoundedBound { value, floored: floor_if_stable(value), margin: slack })
    }
}

fn block_scale(b: &BlockValue) -> f64 {
    match b {
        BlockValue::Dense(m) => linalg::max_abs(m),
        BlockValue::Diag(d) => d.iter().fold(0.0f64, |a, v| a.max(v.abs())),
    }
}

fn shift(b: &mut BlockValue, s: f64) {
    match b {
        BlockValue::Dense(m) => {
            for i in 0..m.nrows() {
                m[(i, i)] += s;
            }
        }
        BlockValue::Diag(d) => d.iter_mut().for_each(|v| *v += s),
    }
}

/// Exact block of an X-side certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum RatBlock {
    Dense(RatMatrix),
    Diag(Vec<Rational>),
}

impl RatBlock {
    pub fn is_psd(&self) -> bool {
        match self {
            RatBlock::Dense(m) => linalg::is_psd_exact(m),
            RatBlock::Diag(d) => d.iter().all(|v| !v.is_negative()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            RatBlock::Dense(m) => m.len(),
            RatBlock::Diag(d) => d.len(),
        }
    }
}

fn rat_dot(entries: &[SdpEntry<Rational>], x: &[RatBlock]) -> Rational {
    let mut acc = Rational::zero();
    for e in entries {
        match &x[e.block] {
            RatBlock::Dense(m) => {
                let v = &e.value * &m[e.i][e.j];
                if e.i == e.j {
                    acc += v;
                } else {
                    acc += &v + &v;
                }
            }
            RatBlock::Diag(d) => acc += &e.value * &d[e.i],
        }
    }
    acc
}

/// Exact version of the maximization bound for a rational `X`: checks
/// shape, symmetry and positive semidefiniteness, then returns
/// `offset - F_0•X + Σ |F_i•X - c_i| U_i`.
pub fn exact_x_side_bound(p: &SdpProblem<Rational>, x: &[RatBlock], y_bounds: &[Rational]) -> Result<Rational> {
    if !p.maximize {
        return Err(Error::domain("X-side bounds apply to maximization problems"));
    }
    if x.len() != p.blocks.len() || y_bounds.len() != p.c.len() {
        return Err(Error::domain("certificate shape does not match the problem"));
    }
    for (bi, (xb, spec)) in x.iter().zip(&p.blocks).enumerate() {
        let kind_ok = matches!(
            (xb, spec.kind),
            (RatBlock::Dense(_), BlockKind::Psd) | (RatBlock::Diag(_), BlockKind::Diagonal)
        );
        if !kind_ok || xb.size() != spec.size {
            return Err(Error::domain(format!("block {bi} has the wrong shape")));
        }
        if let RatBlock::Dense(m) = xb {
            if !linalg::is_symmetric(m) {
                return Err(Error::domain(format!("block {bi} is not symmetric")));
            }
        }
        if !xb.is_psd() {
            return Err(Error::domain(format!("block {bi} is not positive semidefinite")));
        }
    }
    if y_bounds.iter().any(Signed::is_negative) {
        return Err(Error::domain("a-priori bounds must be nonnegative"));
    }
    let mut bound = &p.offset - rat_dot(&p.matrices[0], x);
    for (i, (ci, ui)) in p.c.iter().zip(y_bounds).enumerate() {
        let r = rat_dot(&p.matrices[i + 1], x) - ci;
        bound += r.abs() * ui;
    }
    Ok(bound)
}

/// Rounds a float X to dyadic rationals with `bits` fractional bits and
/// adds the smallest power-of-two multiple of the identity (per block) that
/// makes it exactly PSD.
pub fn rationalize_x(x: &BlockMatrix, bits: u32) -> Result<Vec<RatBlock>> {
    x.iter()
        .map(|b| match b {
            BlockValue::Dense(m) => rationalize_dense(m, bits).map(RatBlock::Dense),
            BlockValue::Diag(d) => d
                .iter()
                .map(|v| rational::dyadic_nearest(v.max(0.0), bits))
                .collect::<Result<Vec<_>>>()
                .map(RatBlock::Diag),
        })
        .collect()
}

fn rationalize_dense(m: &DMatrix<f64>, bits: u32) -> Result<RatMatrix> {
    let n = m.nrows();
    let mut r: RatMatrix = linalg::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rational::dyadic_nearest(0.5 * (m[(i, j)] + m[(j, i)]), bits)?;
            r[i][j] = v.clone();
            r[j][i] = v;
        }
    }
    if linalg::is_psd_exact(&r) {
        return Ok(r);
    }
    let lam = linalg::min_eigenvalue(&linalg::to_dmatrix(&r)).min(0.0);
    let mut eps = Rational::new(BigInt::from(1), BigInt::from(1) << bits).max(rational::from_f64(-lam)?);
    for _ in 0..64 {
        let mut shifted = r.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += &eps;
        }
        if linalg::is_psd_exact(&shifted) {
            return Ok(shifted);
        }
        eps = &eps + &eps;
    }
    Err(Error::solver("could not round X to an exactly PSD matrix"))
}
