//! Three-point semidefinite bound for binary codes.
//!
//! Unknowns are the normalized triple counts `x_{a,b,c}` of a code. The
//! S_3 symmetry is built in by keeping one variable per sorted triple,
//! `x_{0,0,0} = 1` is substituted, and triples with a distance in
//! `]0, δ[` are dropped. What remains is written as one linear matrix
//! inequality `Z(y) = Σ y_i F_i - F_0 ⪰ 0` with
//!
//! * a diagonal block for `x ≥ 0`,
//! * a diagonal block for the (deduplicated) inequalities
//!   `x_{a,b,c} ≤ t(a,b,c) x_{0,c,c}` over all role assignments,
//! * for every `k ≤ n/2` the blocks `Σ T_k(a,b,c) x_{a,b,c}` and
//!   `Σ T_k(a,b,c) (t(a,b,c) x_{0,c,c} - x_{a,b,c})`.
//!
//! The objective `Σ_c x_{0,c,c}` is maximized, so the rigorous upper bound
//! comes from the X side; the a-priori bounds needed there are
//! `x_{a,b,c} ≤ t(a,b,c) binom(n,c)`, which the inequalities above imply.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::rational::{self, Rational};
use crate::sdp::{
    self, exact_x_side_bound, rationalize_x, upper_bound_rounding, BlockKind, BlockSpec, RatBlock, RoundedBound, SdpEntry,
    SdpProblem, SdpSolution, SdpStatus,
};
use crate::solvers::ipm_solve;
use crate::zonal::{omega_enumerate, t_count, HammingZonalFamily, TripleOrbit};

/// Practical size limit for the dense interior-point solver.
pub const MAX_LENGTH: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleVariable {
    /// Sorted representative `a ≤ b ≤ c`.
    pub triple: TripleOrbit,
    /// Number of distinct ordered triples in its S_3 orbit.
    pub orbit_size: usize,
}

/// Linear form `constant + Σ coeffs[i] y_i` over the problem variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Affine {
    constant: Rational,
    coeffs: BTreeMap<usize, Rational>,
}

impl Affine {
    fn add_scaled(&mut self, other: &Affine, s: &Rational) {
        self.constant += &other.constant * s;
        for (i, v) in &other.coeffs {
            let e = self.coeffs.entry(*i).or_insert_with(Rational::zero);
            *e += v * s;
        }
        self.coeffs.retain(|_, v| !v.is_zero());
    }

    fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SchrijverSdp {
    pub n: usize,
    pub delta: usize,
    pub variables: Vec<TripleVariable>,
    /// Maximization in the reporting sense: natural value `1 - cᵀy`.
    pub problem: SdpProblem<Rational>,
    /// `|y_i| ≤ y_bounds[i]` on the whole feasible set.
    pub y_bounds: Vec<Rational>,
    /// Per PSD block: `(k, second condition?)`, in block order after the
    /// two diagonal blocks.
    pub psd_blocks: Vec<(usize, bool)>,
    index: HashMap<TripleOrbit, usize>,
}

fn killed(t: &TripleOrbit, delta: usize) -> bool {
    [t.a, t.b, t.c].iter().any(|&d| d > 0 && d < delta)
}

impl SchrijverSdp {
    /// The affine expression for `x_{a,b,c}` (any order).
    fn var_expr(&self, t: TripleOrbit) -> Affine {
        let canon = t.canonical();
        let mut e = Affine::default();
        if canon == TripleOrbit::new(0, 0, 0) {
            e.constant = Rational::one();
        } else if let Some(&i) = self.index.get(&canon) {
            e.coeffs.insert(i, Rational::one());
        }
        e
    }

    pub fn variable_index(&self, t: TripleOrbit) -> Option<usize> {
        self.index.get(&t.canonical()).copied()
    }

    /// Variable values induced by a code given as bitmask words.
    pub fn point_from_code(&self, code: &[u64]) -> Result<Vec<Rational>> {
        let dist = code_to_feasible_point(code, self.n)?;
        let mut y = vec![Rational::zero(); self.variables.len()];
        for (t, v) in &dist {
            match self.variable_index(*t) {
                Some(i) => y[i] = v.clone(),
                None if *t == TripleOrbit::new(0, 0, 0) => {}
                None => {
                    return Err(Error::domain(format!(
                        "code has a triple {t:?} with a distance below {}",
                        self.delta
                    )))
                }
            }
        }
        Ok(y)
    }

    /// `1 - cᵀy` exactly.
    pub fn objective(&self, y: &[Rational]) -> Rational {
        let cy: Rational = self.problem.c.iter().zip(y).map(|(c, v)| c * v).sum();
        &self.problem.offset - cy
    }

    /// Checks `Z(y) ⪰ 0` exactly; on failure names the first violated
    /// block.
    pub fn check_point(&self, y: &[Rational]) -> std::result::Result<(), String> {
        if y.len() != self.variables.len() {
            return Err(format!("expected {} values, got {}", self.variables.len(), y.len()));
        }
        for (bi, spec) in self.problem.blocks.iter().enumerate() {
            let mut z: RatMatrix = linalg::zeros(spec.size, spec.size);
            let mut add = |entries: &[SdpEntry<Rational>], s: &Rational| {
                for e in entries.iter().filter(|e| e.block == bi) {
                    let v = &e.value * s;
                    z[e.i][e.j] += &v;
                    if e.i != e.j {
                        z[e.j][e.i] += v;
                    }
                }
            };
            add(&self.problem.matrices[0], &-Rational::one());
            for (i, yi) in y.iter().enumerate() {
                if !yi.is_zero() {
                    add(&self.problem.matrices[i + 1], yi);
                }
            }
            let ok = match spec.kind {
                BlockKind::Diagonal => (0..spec.size).all(|i| !z[i][i].is_negative()),
                BlockKind::Psd => linalg::is_psd_exact(&z),
            };
            if !ok {
                let what = match bi {
                    0 => "nonnegativity".to_string(),
                    1 => "triple-count inequalities".to_string(),
                    _ => {
                        let (k, second) = self.psd_blocks[bi - 2];
                        format!("PSD condition {} at k = {k}", if second { "with complements" } else { "on C^3" })
                    }
                };
                return Err(format!("block {bi} ({what}) is violated"));
            }
        }
        Ok(())
    }
}

/// `x_{a,b,c}` for every ordered triple occurring in the code, keyed by
/// `(d(y,z), d(x,z), d(x,y))`.
pub fn code_to_feasible_point(code: &[u64], n: usize) -> Result<BTreeMap<TripleOrbit, Rational>> {
    if code.is_empty() {
        return Err(Error::domain("code must be nonempty"));
    }
    if n < 64 && code.iter().any(|w| w >> n != 0) {
        return Err(Error::domain(format!("word longer than n = {n}")));
    }
    let mut counts: BTreeMap<TripleOrbit, u64> = BTreeMap::new();
    for &x in code {
        for &y in code {
            let c = (x ^ y).count_ones() as usize;
            for &z in code {
                let t = TripleOrbit::new((y ^ z).count_ones() as usize, (x ^ z).count_ones() as usize, c);
                *counts.entry(t).or_insert(0) += 1;
            }
        }
    }
    let size = rational::int(code.len() as i64);
    Ok(counts.into_iter().map(|(t, k)| (t, rational::int(k as i64) / &size)).collect())
}

/// Assembles the exact problem. Requires `2 ≤ δ ≤ n ≤ MAX_LENGTH`.
pub fn build_schrijver(n: usize, delta: usize) -> Result<SchrijverSdp> {
    if delta < 2 || delta > n {
        return Err(Error::domain(format!("need 2 <= delta <= n, got n = {n}, delta = {delta}")));
    }
    if n > MAX_LENGTH {
        return Err(Error::Size(format!("n = {n} exceeds the limit {MAX_LENGTH}")));
    }
    let omega = omega_enumerate(n);
    let mut variables = Vec::new();
    let mut index = HashMap::new();
    for t in &omega {
        if t.a <= t.b && t.b <= t.c && *t != TripleOrbit::new(0, 0, 0) && !killed(t, delta) {
            index.insert(*t, variables.len());
            variables.push(TripleVariable { triple: *t, orbit_size: t.permutations().len() });
        }
    }
    let mut sdp = SchrijverSdp {
        n,
        delta,
        variables,
        problem: SdpProblem::new(Vec::new(), true, Rational::one()),
        y_bounds: Vec::new(),
        psd_blocks: Vec::new(),
        index,
    };
    let m = sdp.variables.len();
    let tc = |t: TripleOrbit| -> Result<Rational> { Ok(rational::big(t_count(n, t)?)) };

    // Objective Σ_c x_{0,c,c}: natural value 1 - cᵀy.
    let mut c = vec![Rational::zero(); m];
    for (i, v) in sdp.variables.iter().enumerate() {
        if v.triple.a == 0 {
            c[i] = -Rational::one();
        }
    }

    // Inequalities x_{a,b,c} ≤ t(p) x_{0,p_c,p_c} over all orderings p.
    let mut ineqs: BTreeSet<Affine> = BTreeSet::new();
    let mut y_bounds = Vec::with_capacity(m);
    for v in &sdp.variables {
        let mut bound: Option<Rational> = None;
        for p in v.triple.permutations() {
            let t = tc(p)?;
            let mut row = sdp.var_expr(TripleOrbit::new(0, p.c, p.c));
            row = scaled(&row, &t);
            row.add_scaled(&sdp.var_expr(p), &-Rational::one());
            if !row.is_zero() {
                ineqs.insert(row);
            }
            let u = &t * rational::big(rational::binomial(n as u64, p.c as u64));
            bound = Some(match bound {
                Some(b) if b <= u => b,
                _ => u,
            });
        }
        y_bounds.push(bound.expect("at least one ordering"));
    }
    let ineqs: Vec<Affine> = ineqs.into_iter().collect();

    // PSD blocks: two per level k.
    let mut psd: Vec<(usize, bool, Vec<Vec<Affine>>)> = Vec::new();
    for k in 0..=n / 2 {
        let fam = HammingZonalFamily::new(n, 1, k)?;
        let size = fam.size();
        let mut first = vec![vec![Affine::default(); size]; size];
        let mut second = vec![vec![Affine::default(); size]; size];
        for t in &omega {
            let Some((r, col, val)) = fam.triple_entry(*t) else { continue };
            let x = sdp.var_expr(*t);
            first[r][col].add_scaled(&x, &val);
            let mut compl = scaled(&sdp.var_expr(TripleOrbit::new(0, t.c, t.c)), &tc(*t)?);
            compl.add_scaled(&x, &-Rational::one());
            second[r][col].add_scaled(&compl, &val);
        }
        psd.push((k, false, first));
        psd.push((k, true, second));
    }

    let mut blocks = vec![
        BlockSpec { size: m, kind: BlockKind::Diagonal },
        BlockSpec { size: ineqs.len().max(1), kind: BlockKind::Diagonal },
    ];
    blocks.extend(psd.iter().map(|(_, _, mat)| BlockSpec { size: mat.len(), kind: BlockKind::Psd }));
    let mut problem = SdpProblem::new(blocks, true, Rational::one());
    let mut mats: Vec<Vec<SdpEntry<Rational>>> = vec![Vec::new(); m + 1];
    let put = |mats: &mut Vec<Vec<SdpEntry<Rational>>>, block: usize, i: usize, j: usize, e: &Affine, scale: &Rational| {
        // Z = Σ y F - F_0, so the constant goes into F_0 with a minus sign.
        if !e.constant.is_zero() {
            mats[0].push(SdpEntry { block, i, j, value: -(&e.constant * scale) });
        }
        for (vi, v) in &e.coeffs {
            mats[vi + 1].push(SdpEntry { block, i, j, value: v * scale });
        }
    };
    for i in 0..m {
        let mut e = Affine::default();
        e.coeffs.insert(i, Rational::one());
        put(&mut mats, 0, i, i, &e, &Rational::one());
    }
    for (r, row) in ineqs.iter().enumerate() {
        put(&mut mats, 1, r, r, row, &Rational::one());
    }
    for (bi, (k, second, mat)) in psd.iter().enumerate() {
        let scale = block_scale(mat);
        for i in 0..mat.len() {
            for j in i..mat.len() {
                debug_assert_eq!(mat[i][j], mat[j][i], "T_k sums must be symmetric");
                put(&mut mats, bi + 2, i, j, &mat[i][j], &scale);
            }
        }
        sdp.psd_blocks.push((*k, *second));
    }
    problem.matrices = mats;
    problem.c = c;
    problem.canonicalize();
    problem.validate()?;
    sdp.problem = problem;
    sdp.y_bounds = y_bounds;
    Ok(sdp)
}

fn scaled(e: &Affine, s: &Rational) -> Affine {
    let mut out = Affine::default();
    out.add_scaled(e, s);
    out
}

/// Power of two bringing the largest coefficient of a block near 1; exact
/// in floating point, so scaling never perturbs the float problem.
fn block_scale(mat: &[Vec<Affine>]) -> Rational {
    let mut max = Rational::zero();
    for row in mat {
        for e in row {
            for v in e.coeffs.values().chain(std::iter::once(&e.constant)) {
                if v.abs() > max {
                    max = v.abs();
                }
            }
        }
    }
    if max.is_zero() {
        return Rational::one();
    }
    let exp = rational::to_f64(&max).log2().floor() as i32;
    if exp >= 0 {
        Rational::new(BigInt::one(), BigInt::one() << exp as u32)
    } else {
        rational::big(BigInt::one() << (-exp) as u32)
    }
}

#[derive(Debug, Clone)]
pub struct SchrijverOutcome {
    pub sdp: SchrijverSdp,
    pub solution: SdpSolution,
    /// Float estimate of the optimum (`1 - cᵀy` at the final iterate).
    pub estimate: f64,
    /// Safe bound from the float X-side rounding.
    pub rounded: RoundedBound,
    /// Exact certificate: rationalized X and the bound it proves.
    pub certificate_x: Vec<RatBlock>,
    pub exact_bound: Rational,
    /// `⌊exact_bound⌋`.
    pub floored: BigInt,
}

/// Interior-point solve of the float image of `p`.
pub fn solve_sdp(p: &SdpProblem<Rational>, tol: f64) -> Result<SdpSolution> {
    ipm_solve(&p.to_f64(), tol, 200)
}

/// Solves the SDP and certifies an upper bound exactly.
pub fn schrijver_bound(n: usize, delta: usize, tol: f64) -> Result<SchrijverOutcome> {
    let sdp = build_schrijver(n, delta)?;
    let float = sdp.problem.to_f64();
    let solution = solve_sdp(&sdp.problem, tol)?;
    // A stalled solve still hands back its best iterate; whatever it is
    // worth is decided by the exact certificate below.
    if matches!(solution.status, SdpStatus::XInfeasible | SdpStatus::YInfeasible) {
        return Err(Error::solver(format!("interior-point status {:?}", solution.status)));
    }
    let ub: Vec<f64> = sdp.y_bounds.iter().map(rational::to_f64).collect();
    let rounded = upper_bound_rounding(&float, &solution, Some(&ub))?;
    let certificate_x = rationalize_x(&solution.x, 40)?;
    let exact_bound = exact_x_side_bound(&sdp.problem, &certificate_x, &sdp.y_bounds)?;
    let floored = exact_bound.floor().to_integer();
    Ok(SchrijverOutcome {
        estimate: sdp::SdpProblem::natural_value(&float, &solution.y),
        sdp,
        solution,
        rounded,
        certificate_x,
        exact_bound,
        floored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn length_four_distance_four() {
        let s = build_schrijver(4, 4).unwrap();
        let triples: Vec<_> = s.variables.iter().map(|v| v.triple).collect();
        assert_eq!(triples, vec![TripleOrbit::new(0, 4, 4)]);
        assert_eq!(s.problem.blocks.iter().filter(|b| b.kind == BlockKind::Psd).count(), 2 * 3);
        assert_eq!(s.y_bounds, vec![int(1)]);
    }

    #[test]
    fn code_points_are_feasible() {
        let s = build_schrijver(5, 2).unwrap();
        let zero = s.point_from_code(&[0]).unwrap();
        assert!(zero.iter().all(Zero::is_zero));
        assert_eq!(s.objective(&zero), int(1));
        s.check_point(&zero).unwrap();

        let pair = s.point_from_code(&[0, 0b11111]).unwrap();
        assert_eq!(pair[s.variable_index(TripleOrbit::new(0, 5, 5)).unwrap()], int(1));
        assert_eq!(s.objective(&pair), int(2));
        s.check_point(&pair).unwrap();

        let even: Vec<u64> = (0..32u64).filter(|w| w.count_ones() % 2 == 0).collect();
        let y = s.point_from_code(&even).unwrap();
        assert_eq!(s.objective(&y), int(16));
        s.check_point(&y).unwrap();
        for (yi, ui) in y.iter().zip(&s.y_bounds) {
            assert!(yi <= ui);
        }
    }

    #[test]
    fn infeasible_points_are_caught() {
        let s = build_schrijver(4, 2).unwrap();
        let mut y = s.point_from_code(&[0, 0b0011]).unwrap();
        let i = s.variable_index(TripleOrbit::new(0, 2, 2)).unwrap();
        y[i] = int(7);
        assert!(s.check_point(&y).is_err());
    }

    #[test]
    fn small_bound() {
        let out = schrijver_bound(5, 3, 1e-8).unwrap();
        assert!(out.exact_bound >= int(4));
        assert_eq!(out.floored, BigInt::from(4));
    }
}
