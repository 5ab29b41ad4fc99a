//! Block semidefinite programs in SDPA form, their file formats, and safe
//! rounding of approximate solutions to upper bounds.
//!
//! The y-side program is `minimize cᵀy` subject to
//! `Z(y) = Σ y_i F_i - F_0 ⪰ 0`; the X-side program is
//! `maximize F_0•X` subject to `F_i•X = c_i`, `X ⪰ 0`. Blocks are either
//! dense PSD blocks or nonnegative diagonals.

mod rounding;
pub mod sdpa;

pub use rounding::{exact_x_side_bound, rationalize_x, upper_bound_rounding, RatBlock, RoundedBound};

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    Psd,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub size: usize,
    pub kind: BlockKind,
}

/// One upper-triangle entry (`i <= j`, 0-based) of a block matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpEntry<T> {
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem<T = f64> {
    pub blocks: Vec<BlockSpec>,
    pub c: Vec<T>,
    /// `matrices[0]` is `F_0`, `matrices[i]` is `F_i` for `i = 1..=m`.
    pub matrices: Vec<Vec<SdpEntry<T>>>,
    /// Reporting only. When set, the natural value of a y-feasible point is
    /// `offset - cᵀy` and it is being maximized (so upper bounds come from
    /// the X side); otherwise it is `offset + cᵀy`, minimized.
    pub maximize: bool,
    pub offset: T,
}

pub trait Entry: Clone + PartialEq + std::fmt::Debug {
    fn is_zero_entry(&self) -> bool;
    fn add_entry(&self, other: &Self) -> Self;
    fn to_f64_entry(&self) -> f64;
}

impl Entry for f64 {
    fn is_zero_entry(&self) -> bool {
        *self == 0.0
    }

    fn add_entry(&self, other: &Self) -> Self {
        self + other
    }

    fn to_f64_entry(&self) -> f64 {
        *self
    }
}

impl Entry for Rational {
    fn is_zero_entry(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn add_entry(&self, other: &Self) -> Self {
        self + other
    }

    fn to_f64_entry(&self) -> f64 {
        rational::to_f64(self)
    }
}

impl<T: Entry> SdpProblem<T> {
    pub fn new(blocks: Vec<BlockSpec>, maximize: bool, offset: T) -> Self {
        SdpProblem { blocks, c: Vec::new(), matrices: vec![Vec::new()], maximize, offset }
    }

    pub fn num_constraints(&self) -> usize {
        self.c.len()
    }

    /// Appends `F_i` with cost `c_i`; returns its 1-based index.
    pub fn push_matrix(&mut self, cost: T, entries: Vec<SdpEntry<T>>) -> usize {
        self.c.push(cost);
        self.matrices.push(entries);
        self.c.len()
    }

    pub fn constant_mut(&mut self) -> &mut Vec<SdpEntry<T>> {
        &mut self.matrices[0]
    }

    /// Merges duplicate coordinates, drops zeros and sorts every matrix by
    /// `(block, i, j)`. Lower-triangle coordinates are mirrored.
    pub fn canonicalize(&mut self) {
        for mat in self.matrices.iter_mut() {
            let mut acc: BTreeMap<(usize, usize, usize), T> = BTreeMap::new();
            for e in mat.drain(..) {
                let key = (e.block, e.i.min(e.j), e.i.max(e.j));
                match acc.get_mut(&key) {
                    Some(v) => *v = v.add_entry(&e.value),
                    None => {
                        acc.insert(key, e.value);
                    }
                }
            }
            *mat = acc
                .into_iter()
                .filter(|(_, v)| !v.is_zero_entry())
                .map(|((block, i, j), value)| SdpEntry { block, i, j, value })
                .collect();
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.matrices.len() != self.c.len() + 1 {
            return Err(Error::domain("need one constraint matrix per cost entry plus F_0"));
        }
        for (mi, mat) in self.matrices.iter().enumerate() {
            for e in mat {
                let Some(b) = self.blocks.get(e.block) else {
                    return Err(Error::domain(format!("matrix {mi}: block {} out of range", e.block)));
                };
                if e.i > e.j || e.j >= b.size {
                    return Err(Error::domain(format!(
                        "matrix {mi}: entry ({}, {}) invalid for block {} of size {}",
                        e.i, e.j, e.block, b.size
                    )));
                }
                if b.kind == BlockKind::Diagonal && e.i != e.j {
                    return Err(Error::domain(format!("matrix {mi}: off-diagonal entry in diagonal block {}", e.block)));
                }
                if !e.value.to_f64_entry().is_finite() {
                    return Err(Error::domain(format!("matrix {mi}: non-finite value")));
                }
            }
        }
        Ok(())
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U) -> SdpProblem<U> {
        SdpProblem {
            blocks: self.blocks.clone(),
            c: self.c.iter().map(&f).collect(),
            matrices: self
                .matrices
                .iter()
                .map(|m| m.iter().map(|e| SdpEntry { block: e.block, i: e.i, j: e.j, value: f(&e.value) }).collect())
                .collect(),
            maximize: self.maximize,
            offset: f(&self.offset),
        }
    }

    pub fn to_f64(&self) -> SdpProblem<f64> {
        self.map(Entry::to_f64_entry)
    }
}

/// A block-diagonal symmetric matrix in float arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockValue {
    Dense(DMatrix<f64>),
    Diag(DVector<f64>),
}

impl BlockValue {
    pub fn zeros(spec: &BlockSpec) -> Self {
        match spec.kind {
            BlockKind::Psd => BlockValue::Dense(DMatrix::zeros(spec.size, spec.size)),
            BlockKind::Diagonal => BlockValue::Diag(DVector::zeros(spec.size)),
        }
    }

    pub fn identity(spec: &BlockSpec, scale: f64) -> Self {
        match spec.kind {
            BlockKind::Psd => BlockValue::Dense(DMatrix::identity(spec.size, spec.size) * scale),
            BlockKind::Diagonal => BlockValue::Diag(DVector::from_element(spec.size, scale)),
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        match self {
            BlockValue::Dense(m) => crate::linalg::min_eigenvalue(m),
            BlockValue::Diag(d) => d.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn dot(&self, other: &BlockValue) -> f64 {
        match (self, other) {
            (BlockValue::Dense(a), BlockValue::Dense(b)) => a.dot(b),
            (BlockValue::Diag(a), BlockValue::Diag(b)) => a.dot(b),
            _ => panic!("block kinds differ"),
        }
    }

    /// Full symmetric dense copy (diagonal blocks expanded).
    pub fn to_dense(&self) -> DMatrix<f64> {
        match self {
            BlockValue::Dense(m) => m.clone(),
            BlockValue::Diag(d) => DMatrix::from_diagonal(d),
        }
    }
}

pub type BlockMatrix = Vec<BlockValue>;

/// Adds `scale · F` into `out` (entries are mirrored across the diagonal).
pub fn accumulate(out: &mut BlockMatrix, entries: &[SdpEntry<f64>], scale: f64) {
    for e in entries {
        match &mut out[e.block] {
            BlockValue::Dense(m) => {
                m[(e.i, e.j)] += scale * e.value;
                if e.i != e.j {
                    m[(e.j, e.i)] += scale * e.value;
                }
            }
            BlockValue::Diag(d) => d[e.i] += scale * e.value,
        }
    }
}

/// `F • X` for a sparse `F` (upper triangle stored) and symmetric `X`.
pub fn sparse_dot(entries: &[SdpEntry<f64>], x: &BlockMatrix) -> f64 {
    let mut acc = 0.0;
    for e in entries {
        match &x[e.block] {
            BlockValue::Dense(m) => {
                let w = if e.i == e.j { 1.0 } else { 2.0 };
                acc += w * e.value * m[(e.i, e.j)];
            }
            BlockValue::Diag(d) => acc += e.value * d[e.i],
        }
    }
    acc
}

impl SdpProblem<f64> {
    /// `Z(y) = Σ y_i F_i - F_0`.
    pub fn slack(&self, y: &[f64]) -> BlockMatrix {
        let mut z: BlockMatrix = self.blocks.iter().map(BlockValue::zeros).collect();
        accumulate(&mut z, &self.matrices[0], -1.0);
        for (i, yi) in y.iter().enumerate() {
            if *yi != 0.0 {
                accumulate(&mut z, &self.matrices[i + 1], *yi);
            }
        }
        z
    }

    /// Natural objective value of a y-side point.
    pub fn natural_value(&self, y: &[f64]) -> f64 {
        let cy: f64 = self.c.iter().zip(y).map(|(c, v)| c * v).sum();
        if self.maximize {
            self.offset - cy
        } else {
            self.offset + cy
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdpStatus {
    Optimal,
    MaxIter,
    /// `F_i•X = c_i`, `X ⪰ 0` appears to have no solution.
    XInfeasible,
    /// `Z(y) ⪰ 0` appears to have no solution.
    YInfeasible,
    NumericalFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub mu: f64,
    pub x_objective: f64,
    pub y_objective: f64,
    pub x_infeasibility: f64,
    pub y_infeasibility: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// `F_0 • X`.
    pub x_objective: f64,
    /// `cᵀy`.
    pub y_objective: f64,
    pub x: BlockMatrix,
    pub y: Vec<f64>,
    pub z: BlockMatrix,
    pub gap: f64,
    pub x_infeasibility: f64,
    pub y_infeasibility: f64,
    pub iterations: usize,
    pub log: Vec<IterationLog>,
}

impl SdpSolution {
    /// Natural objective, as defined by the problem's reporting flags.
    pub fn natural_value(&self, p: &SdpProblem<f64>) -> f64 {
        p.natural_value(&self.y)
    }
}
