//! Dense infeasible-start primal-dual path-following method for block SDPs
//! (HKM search direction, Mehrotra predictor-corrector).
//!
//! Rows and columns that no constraint matrix touches are pruned before the
//! solve and restored as zeros afterwards, so structurally empty parts of a
//! block never pin an iterate to the boundary.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::sdp::{
    accumulate, sparse_dot, BlockKind, BlockMatrix, BlockSpec, BlockValue, IterationLog, SdpEntry, SdpProblem,
    SdpSolution, SdpStatus,
};

#[derive(Debug, Clone, Copy)]
pub struct IpmOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub step_fraction: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// Iterates whose norm exceeds this are taken as evidence of
    /// infeasibility of the opposite side.
    pub divergence: f64,
}

impl Default for IpmOptions {
    fn default() -> Self {
        IpmOptions { tol: 1e-8, max_iter: 120, step_fraction: 0.98, sigma_min: 0.01, sigma_max: 0.9, divergence: 1e12 }
    }
}

pub fn ipm_solve(p: &SdpProblem<f64>, tol: f64, max_iter: usize) -> Result<SdpSolution> {
    ipm_solve_with(p, &IpmOptions { tol, max_iter, ..IpmOptions::default() })
}

struct Reduced {
    blocks: Vec<BlockSpec>,
    // original block index and the kept local indices
    origin: Vec<(usize, Vec<usize>)>,
    c: Vec<f64>,
    constant: Vec<SdpEntry<f64>>,
    mats: Vec<Vec<SdpEntry<f64>>>,
    // original constraint index of each kept constraint
    kept: Vec<usize>,
}

fn reduce(p: &SdpProblem<f64>) -> std::result::Result<Reduced, SdpStatus> {
    let mut used: Vec<Vec<bool>> = p.blocks.iter().map(|b| vec![false; b.size]).collect();
    for mat in &p.matrices {
        for e in mat {
            if e.value != 0.0 {
                used[e.block][e.i] = true;
                used[e.block][e.j] = true;
            }
        }
    }
    let mut blocks = Vec::new();
    let mut origin = Vec::new();
    let mut remap: Vec<Vec<Option<(usize, usize)>>> = Vec::new();
    for (bi, b) in p.blocks.iter().enumerate() {
        let idx: Vec<usize> = (0..b.size).filter(|&i| used[bi][i]).collect();
        let mut r = vec![None; b.size];
        if !idx.is_empty() {
            for (new, &old) in idx.iter().enumerate() {
                r[old] = Some((blocks.len(), new));
            }
            blocks.push(BlockSpec { size: idx.len(), kind: b.kind });
            origin.push((bi, idx));
        }
        remap.push(r);
    }
    let map = |mat: &[SdpEntry<f64>]| -> Vec<SdpEntry<f64>> {
        mat.iter()
            .filter(|e| e.value != 0.0)
            .map(|e| {
                let (nb, ni) = remap[e.block][e.i].expect("used index");
                let (_, nj) = remap[e.block][e.j].expect("used index");
                SdpEntry { block: nb, i: ni.min(nj), j: ni.max(nj), value: e.value }
            })
            .collect()
    };
    let mut c = Vec::new();
    let mut mats = Vec::new();
    let mut kept = Vec::new();
    for (i, ci) in p.c.iter().enumerate() {
        let m = map(&p.matrices[i + 1]);
        if m.is_empty() {
            if *ci != 0.0 {
                return Err(SdpStatus::XInfeasible);
            }
            continue;
        }
        c.push(*ci);
        mats.push(m);
        kept.push(i);
    }
    Ok(Reduced { blocks, origin, c, constant: map(&p.matrices[0]), mats, kept })
}

fn expand(red: &Reduced, p: &SdpProblem<f64>, reduced: &BlockMatrix) -> BlockMatrix {
    let mut out: BlockMatrix = p.blocks.iter().map(BlockValue::zeros).collect();
    for (rb, (ob, idx)) in red.origin.iter().enumerate() {
        match (&mut out[*ob], &reduced[rb]) {
            (BlockValue::Dense(o), BlockValue::Dense(r)) => {
                for (a, &ia) in idx.iter().enumerate() {
                    for (b, &ib) in idx.iter().enumerate() {
                        o[(ia, ib)] = r[(a, b)];
                    }
                }
            }
            (BlockValue::Diag(o), BlockValue::Diag(r)) => {
                for (a, &ia) in idx.iter().enumerate() {
                    o[ia] = r[a];
                }
            }
            _ => unreachable!("block kinds preserved by reduction"),
        }
    }
    out
}

fn block_norm(b: &BlockValue) -> f64 {
    match b {
        BlockValue::Dense(m) => m.norm(),
        BlockValue::Diag(d) => d.norm(),
    }
}

fn matrix_norm(m: &BlockMatrix) -> f64 {
    m.iter().map(|b| block_norm(b).powi(2)).sum::<f64>().sqrt()
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn inverse(b: &BlockValue) -> Option<BlockValue> {
    match b {
        BlockValue::Dense(m) => {
            let ch = m.clone().cholesky()?;
            Some(BlockValue::Dense(sym(&ch.inverse())))
        }
        BlockValue::Diag(d) => {
            if d.iter().any(|v| *v <= 0.0) {
                return None;
            }
            Some(BlockValue::Diag(d.map(|v| 1.0 / v)))
        }
    }
}

/// Largest `α` with `X + α dX ⪰ 0` (infinite when unconstrained).
fn max_step(x: &BlockValue, dx: &BlockValue) -> Option<f64> {
    match (x, dx) {
        (BlockValue::Dense(x), BlockValue::Dense(dx)) => {
            let ch = x.clone().cholesky()?;
            let l = ch.l();
            let a = l.solve_lower_triangular(dx)?;
            let b = l.solve_lower_triangular(&a.transpose())?;
            let lam = crate::linalg::min_eigenvalue(&sym(&b));
            Some(if lam < 0.0 { -1.0 / lam } else { f64::INFINITY })
        }
        (BlockValue::Diag(x), BlockValue::Diag(dx)) => {
            let mut best = f64::INFINITY;
            for (xi, di) in x.iter().zip(dx.iter()) {
                if *di < 0.0 {
                    best = best.min(-xi / di);
                }
            }
            Some(best)
        }
        _ => None,
    }
}

fn axpy(x: &BlockMatrix, alpha: f64, d: &BlockMatrix) -> BlockMatrix {
    x.iter()
        .zip(d)
        .map(|(a, b)| match (a, b) {
            (BlockValue::Dense(a), BlockValue::Dense(b)) => BlockValue::Dense(a + b * alpha),
            (BlockValue::Diag(a), BlockValue::Diag(b)) => BlockValue::Diag(a + b * alpha),
            _ => unreachable!(),
        })
        .collect()
}

fn inner(a: &BlockMatrix, b: &BlockMatrix) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

struct Workspace<'a> {
    red: &'a Reduced,
    // per block, the constraints touching it
    touching: Vec<Vec<usize>>,
    // per diagonal block and index, the (constraint, value) pairs
    diag_cols: Vec<Vec<Vec<(usize, f64)>>>,
}

impl<'a> Workspace<'a> {
    fn new(red: &'a Reduced) -> Self {
        let mut touching = vec![Vec::new(); red.blocks.len()];
        let mut diag_cols: Vec<Vec<Vec<(usize, f64)>>> =
            red.blocks.iter().map(|b| if b.kind == BlockKind::Diagonal { vec![Vec::new(); b.size] } else { Vec::new() }).collect();
        for (i, mat) in red.mats.iter().enumerate() {
            for e in mat {
                if touching[e.block].last() != Some(&i) {
                    touching[e.block].push(i);
                }
                if red.blocks[e.block].kind == BlockKind::Diagonal {
                    diag_cols[e.block][e.i].push((i, e.value));
                }
            }
        }
        for t in touching.iter_mut() {
            t.dedup();
        }
        Workspace { red, touching, diag_cols }
    }

    fn block_entries(&self, i: usize, block: usize) -> impl Iterator<Item = &SdpEntry<f64>> {
        self.red.mats[i].iter().filter(move |e| e.block == block)
    }

    fn dense_of(&self, i: usize, block: usize, size: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(size, size);
        for e in self.block_entries(i, block) {
            m[(e.i, e.j)] += e.value;
            if e.i != e.j {
                m[(e.j, e.i)] += e.value;
            }
        }
        m
    }

    /// Schur complement `M_ij = tr(A_i X A_j Z⁻¹)`.
    fn schur(&self, x: &BlockMatrix, zinv: &BlockMatrix) -> DMatrix<f64> {
        let m = self.red.c.len();
        let mut out = DMatrix::zeros(m, m);
        for (b, spec) in self.red.blocks.iter().enumerate() {
            match (&x[b], &zinv[b]) {
                (BlockValue::Dense(xb), BlockValue::Dense(zb)) => {
                    for &i in &self.touching[b] {
                        let ai = self.dense_of(i, b, spec.size);
                        let g = zb * ai * xb;
                        for &j in &self.touching[b] {
                            let mut acc = 0.0;
                            for e in self.block_entries(j, b) {
                                acc += if e.i == e.j { e.value * g[(e.i, e.i)] } else { e.value * (g[(e.i, e.j)] + g[(e.j, e.i)]) };
                            }
                            out[(i, j)] += acc;
                        }
                    }
                }
                (BlockValue::Diag(xd), BlockValue::Diag(zd)) => {
                    for (d, col) in self.diag_cols[b].iter().enumerate() {
                        let w = xd[d] * zd[d];
                        for &(i, vi) in col {
                            for &(j, vj) in col {
                                out[(i, j)] += w * vi * vj;
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        sym(&out)
    }

    fn apply_a(&self, w: &BlockMatrix) -> DVector<f64> {
        DVector::from_iterator(self.red.mats.len(), self.red.mats.iter().map(|mat| sparse_dot(mat, w)))
    }

    fn combine(&self, coeffs: &DVector<f64>) -> BlockMatrix {
        let mut out: BlockMatrix = self.red.blocks.iter().map(BlockValue::zeros).collect();
        for (i, mat) in self.red.mats.iter().enumerate() {
            if coeffs[i] != 0.0 {
                accumulate(&mut out, mat, coeffs[i]);
            }
        }
        out
    }
}

fn solve_spd(m: &DMatrix<f64>, rhs: &DVector<f64>) -> Option<DVector<f64>> {
    if let Some(ch) = m.clone().cholesky() {
        return Some(ch.solve(rhs));
    }
    let scale = m.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let reg = m + DMatrix::identity(m.nrows(), m.ncols()) * (1e-13 * scale);
    if let Some(ch) = reg.clone().cholesky() {
        return Some(ch.solve(rhs));
    }
    reg.lu().solve(rhs)
}

/// `dX = sym(σμ Z⁻¹ - X - X dZ Z⁻¹ - corr)` blockwise.
fn direction_x(x: &BlockMatrix, zinv: &BlockMatrix, dz: &BlockMatrix, smu: f64, corr: Option<&BlockMatrix>) -> BlockMatrix {
    x.iter()
        .enumerate()
        .map(|(b, xb)| match (xb, &zinv[b], &dz[b]) {
            (BlockValue::Dense(xb), BlockValue::Dense(zi), BlockValue::Dense(dzb)) => {
                let mut r = zi * smu - xb - xb * dzb * zi;
                if let Some(BlockValue::Dense(cb)) = corr.map(|c| &c[b]) {
                    r -= cb;
                }
                BlockValue::Dense(sym(&r))
            }
            (BlockValue::Diag(xb), BlockValue::Diag(zi), BlockValue::Diag(dzb)) => {
                let mut r = zi * smu - xb - xb.component_mul(dzb).component_mul(zi);
                if let Some(BlockValue::Diag(cb)) = corr.map(|c| &c[b]) {
                    r -= cb;
                }
                BlockValue::Diag(r)
            }
            _ => unreachable!(),
        })
        .collect()
}

pub fn ipm_solve_with(p: &SdpProblem<f64>, opts: &IpmOptions) -> Result<SdpSolution> {
    p.validate()?;
    let red = match reduce(p) {
        Ok(r) => r,
        Err(status) => return Ok(failed(p, status)),
    };
    let ws = Workspace::new(&red);
    let m = red.c.len();
    let b = DVector::from_vec(red.c.clone());
    let dim: usize = red.blocks.iter().map(|s| s.size).sum();
    if dim == 0 {
        return Ok(failed(p, SdpStatus::NumericalFailure));
    }

    // F_0 in block form
    let mut cmat: BlockMatrix = red.blocks.iter().map(BlockValue::zeros).collect();
    accumulate(&mut cmat, &red.constant, 1.0);

    let norm_b = b.norm();
    let norm_c = matrix_norm(&cmat);
    let a_norms: Vec<f64> = (0..m).map(|i| ws.combine(&DVector::from_fn(m, |j, _| if i == j { 1.0 } else { 0.0 })))
        .map(|bm| matrix_norm(&bm))
        .collect();
    let mut x: BlockMatrix = Vec::new();
    let mut z: BlockMatrix = Vec::new();
    for spec in &red.blocks {
        let s = spec.size as f64;
        let mut xi = 10.0f64.max(s.sqrt());
        let mut eta = 10.0f64.max(s.sqrt()).max(norm_c);
        for (i, an) in a_norms.iter().enumerate() {
            xi = xi.max(s * (1.0 + b[i].abs()) / (1.0 + an));
            eta = eta.max(*an);
        }
        x.push(BlockValue::identity(spec, xi));
        z.push(BlockValue::identity(spec, eta));
    }
    let mut y = DVector::zeros(m);
    let mut log = Vec::new();
    let mut status = SdpStatus::MaxIter;
    let mut iterations = 0;
    // best iterate by worst relative residual, restored if the method stalls
    let mut best: Option<(f64, BlockMatrix, DVector<f64>, BlockMatrix, usize)> = None;

    let residuals = |x: &BlockMatrix, y: &DVector<f64>, z: &BlockMatrix| {
        let rp = &b - ws.apply_a(x);
        // D = Σ y_i A_i - C - Z
        let mut d = ws.combine(y);
        accumulate(&mut d, &red.constant, -1.0);
        let d = axpy(&d, -1.0, z);
        (rp, d)
    };

    for iter in 0..opts.max_iter {
        let (rp, dres) = residuals(&x, &y, &z);
        let pobj = inner(&cmat, &x);
        let dobj = b.dot(&y);
        let mu = inner(&x, &z) / dim as f64;
        let pinf = rp.norm() / (1.0 + norm_b);
        let dinf = matrix_norm(&dres) / (1.0 + norm_c);
        let gap = (dobj - pobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        log.push(IterationLog { mu, x_objective: pobj, y_objective: dobj, x_infeasibility: pinf, y_infeasibility: dinf });
        iterations = iter;
        let merit = gap.max(pinf).max(dinf);
        if best.as_ref().is_none_or(|b| merit < b.0) {
            best = Some((merit, x.clone(), y.clone(), z.clone(), iter));
        }
        if gap <= opts.tol && pinf <= opts.tol && dinf <= opts.tol {
            status = SdpStatus::Optimal;
            break;
        }
        if matrix_norm(&x) > opts.divergence {
            status = SdpStatus::YInfeasible;
            break;
        }
        if y.norm() > opts.divergence || matrix_norm(&z) > opts.divergence {
            status = SdpStatus::XInfeasible;
            break;
        }

        let Some(zinv) = z.iter().map(inverse).collect::<Option<Vec<_>>>() else {
            status = SdpStatus::NumericalFailure;
            break;
        };
        let schur = ws.schur(&x, &zinv);
        // X D Z⁻¹ term of the right-hand side
        let xdz: BlockMatrix = x
            .iter()
            .enumerate()
            .map(|(bi, xb)| match (xb, &dres[bi], &zinv[bi]) {
                (BlockValue::Dense(a), BlockValue::Dense(d), BlockValue::Dense(zi)) => BlockValue::Dense(sym(&(a * d * zi))),
                (BlockValue::Diag(a), BlockValue::Diag(d), BlockValue::Diag(zi)) => {
                    BlockValue::Diag(a.component_mul(d).component_mul(zi))
                }
                _ => unreachable!(),
            })
            .collect();
        let a_zinv = ws.apply_a(&zinv);
        let a_xdz = ws.apply_a(&xdz);

        let direction = |smu: f64, corr: Option<&BlockMatrix>| -> Option<(BlockMatrix, DVector<f64>, BlockMatrix)> {
            let mut rhs = &a_zinv * smu - &a_xdz - &b;
            if let Some(c) = corr {
                rhs -= ws.apply_a(c);
            }
            let dy = solve_spd(&schur, &rhs)?;
            let dz = {
                let comb = ws.combine(&dy);
                axpy(&comb, 1.0, &dres)
            };
            let dx = direction_x(&x, &zinv, &dz, smu, corr);
            Some((dx, dy, dz))
        };
        let steps = |dx: &BlockMatrix, dz: &BlockMatrix| -> Option<(f64, f64)> {
            let mut ap = f64::INFINITY;
            let mut ad = f64::INFINITY;
            for bi in 0..x.len() {
                ap = ap.min(max_step(&x[bi], &dx[bi])?);
                ad = ad.min(max_step(&z[bi], &dz[bi])?);
            }
            Some(((opts.step_fraction * ap).min(1.0), (opts.step_fraction * ad).min(1.0)))
        };

        let Some((dxa, _dya, dza)) = direction(0.0, None) else {
            status = SdpStatus::NumericalFailure;
            break;
        };
        let Some((apa, ada)) = steps(&dxa, &dza) else {
            status = SdpStatus::NumericalFailure;
            break;
        };
        let mu_aff = inner(&axpy(&x, apa, &dxa), &axpy(&z, ada, &dza)) / dim as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(opts.sigma_min, opts.sigma_max);
        let corr: BlockMatrix = dxa
            .iter()
            .enumerate()
            .map(|(bi, d)| match (d, &dza[bi], &zinv[bi]) {
                // symmetrized: `apply_a` reads the upper triangle only
                (BlockValue::Dense(a), BlockValue::Dense(c), BlockValue::Dense(zi)) => BlockValue::Dense(sym(&(a * c * zi))),
                (BlockValue::Diag(a), BlockValue::Diag(c), BlockValue::Diag(zi)) => {
                    BlockValue::Diag(a.component_mul(c).component_mul(zi))
                }
                _ => unreachable!(),
            })
            .collect();
        let Some((dx, dy, dz)) = direction(sigma * mu, Some(&corr)) else {
            status = SdpStatus::NumericalFailure;
            break;
        };
        let Some((ap, ad)) = steps(&dx, &dz) else {
            status = SdpStatus::NumericalFailure;
            break;
        };
        if ap < 1e-12 && ad < 1e-12 {
            status = SdpStatus::NumericalFailure;
            break;
        }
        x = axpy(&x, ap, &dx);
        y += dy * ad;
        z = axpy(&z, ad, &dz);
        iterations = iter + 1;
    }

    if matches!(status, SdpStatus::MaxIter | SdpStatus::NumericalFailure) {
        if let Some((_, bx, by, bz, it)) = best {
            (x, y, z, iterations) = (bx, by, bz, it);
        }
    }
    let (rp, dres) = residuals(&x, &y, &z);
    let x_objective = inner(&cmat, &x);
    let y_objective = b.dot(&y);
    let mut full_y = vec![0.0; p.c.len()];
    for (k, &orig) in red.kept.iter().enumerate() {
        full_y[orig] = y[k];
    }
    Ok(SdpSolution {
        status,
        x_objective,
        y_objective,
        x: expand(&red, p, &x),
        y: full_y,
        z: expand(&red, p, &z),
        gap: (y_objective - x_objective).abs(),
        x_infeasibility: rp.norm() / (1.0 + norm_b),
        y_infeasibility: matrix_norm(&dres) / (1.0 + norm_c),
        iterations,
        log,
    })
}

fn failed(p: &SdpProblem<f64>, status: SdpStatus) -> SdpSolution {
    SdpSolution {
        status,
        x_objective: f64::NAN,
        y_objective: f64::NAN,
        x: p.blocks.iter().map(BlockValue::zeros).collect(),
        y: vec![0.0; p.c.len()],
        z: p.blocks.iter().map(BlockValue::zeros).collect(),
        gap: f64::NAN,
        x_infeasibility: f64::NAN,
        y_infeasibility: f64::NAN,
        iterations: 0,
        log: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psd(size: usize) -> BlockSpec {
        BlockSpec { size, kind: BlockKind::Psd }
    }

    fn e(block: usize, i: usize, j: usize, value: f64) -> SdpEntry<f64> {
        SdpEntry { block, i, j, value }
    }

    #[test]
    fn scalar_block() {
        // max x s.t. x ≤ 2, x ≥ 0: y-side min 2y s.t. y - 1 ≥ 0 (X-side max X s.t. X = ... )
        // Encoded: F_0 = [1], F_1 = [1], c = 2  -> X-side: max X s.t. X = 2.
        let mut p = SdpProblem::new(vec![psd(1)], false, 0.0);
        p.constant_mut().push(e(0, 0, 0, 1.0));
        p.push_matrix(2.0, vec![e(0, 0, 0, 1.0)]);
        let s = ipm_solve(&p, 1e-9, 100).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert!((s.x_objective - 2.0).abs() < 1e-7);
        assert!((s.y_objective - 2.0).abs() < 1e-7);
    }

    #[test]
    fn min_trace_with_fixed_corner() {
        // X-side: max -tr(X) s.t. X_11 = 1 → -1.
        let mut p = SdpProblem::new(vec![psd(3)], false, 0.0);
        for i in 0..3 {
            p.constant_mut().push(e(0, i, i, -1.0));
        }
        p.push_matrix(1.0, vec![e(0, 0, 0, 1.0)]);
        let s = ipm_solve(&p, 1e-9, 100).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert!((s.x_objective + 1.0).abs() < 1e-7);
    }

    #[test]
    fn mixed_blocks_and_pruning() {
        // max x1 + x2 over a diagonal block, x1 + x2 + x3 = 1 with an unused
        // PSD block that must be pruned.
        let mut p = SdpProblem::new(
            vec![BlockSpec { size: 3, kind: BlockKind::Diagonal }, psd(2)],
            false,
            0.0,
        );
        p.constant_mut().extend([e(0, 0, 0, 1.0), e(0, 1, 1, 1.0)]);
        p.push_matrix(1.0, vec![e(0, 0, 0, 1.0), e(0, 1, 1, 1.0), e(0, 2, 2, 1.0)]);
        let s = ipm_solve(&p, 1e-9, 100).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert!((s.x_objective - 1.0).abs() < 1e-7);
    }

    #[test]
    fn detects_infeasible_x_side() {
        // X_11 = -1 with X ⪰ 0 is impossible.
        let mut p = SdpProblem::new(vec![psd(1)], false, 0.0);
        p.push_matrix(-1.0, vec![e(0, 0, 0, 1.0)]);
        let s = ipm_solve(&p, 1e-9, 200).unwrap();
        assert_ne!(s.status, SdpStatus::Optimal);
    }

    #[test]
    fn strictly_feasible_random_problems_converge() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let blocks = vec![psd(4), psd(3), BlockSpec { size: 3, kind: BlockKind::Diagonal }];
            let mut random_block = |b: usize, spec: &BlockSpec| -> Vec<SdpEntry<f64>> {
                let mut out = Vec::new();
                for i in 0..spec.size {
                    let hi = if spec.kind == BlockKind::Diagonal { i + 1 } else { spec.size };
                    for j in i..hi {
                        out.push(e(b, i, j, rng.gen_range(-1.0..1.0)));
                    }
                }
                out
            };
            let mut p = SdpProblem::new(blocks.clone(), false, 0.0);
            let mut fs = Vec::new();
            for _ in 0..8 {
                let f: Vec<SdpEntry<f64>> = blocks.iter().enumerate().flat_map(|(b, s)| random_block(b, s)).collect();
                fs.push(f);
            }
            // X0 = I and Z0 = I are strictly feasible: c_i = tr F_i and
            // F_0 = Σ y0_i F_i - I for a random y0.
            let x0: BlockMatrix = blocks.iter().map(|s| BlockValue::identity(s, 1.0)).collect();
            let y0: Vec<f64> = (0..fs.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut f0 = Vec::new();
            for (f, yi) in fs.iter().zip(&y0) {
                f0.extend(f.iter().map(|en| e(en.block, en.i, en.j, en.value * yi)));
            }
            for (b, s) in blocks.iter().enumerate() {
                f0.extend((0..s.size).map(|i| e(b, i, i, -1.0)));
            }
            *p.constant_mut() = f0;
            for f in fs {
                let c = sparse_dot(&f, &x0);
                p.push_matrix(c, f);
            }
            p.canonicalize();
            let s = ipm_solve(&p, 1e-9, 60).unwrap();
            assert_eq!(s.status, SdpStatus::Optimal, "{:?}", s.log.last());
            assert!(s.x_infeasibility < 1e-9 && s.iterations < 40);
        }
    }

    #[test]
    fn deterministic_iterates() {
        let mut p = SdpProblem::new(vec![psd(2)], false, 0.0);
        p.constant_mut().extend([e(0, 0, 1, 1.0)]);
        p.push_matrix(1.0, vec![e(0, 0, 0, 1.0)]);
        p.push_matrix(1.0, vec![e(0, 1, 1, 1.0)]);
        let a = ipm_solve(&p, 1e-9, 100).unwrap();
        let b = ipm_solve(&p, 1e-9, 100).unwrap();
        assert_eq!(a.log, b.log);
        assert!((a.x_objective - 2.0).abs() < 1e-7);
    }
}
