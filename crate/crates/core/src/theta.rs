//! Lovász θ and θ′ of explicit graphs.
//!
//! `theta_sdp` writes the primal program on the X side of an
//! [`SdpProblem`]: `max J•B` over `B ⪰ 0` with `tr B = 1` and `B_ij = 0` on
//! edges (θ′ adds `B_ij ≥ 0` through a diagonal slack block). The y side
//! is then `min t` with `tI - J + Σ_e y_e E_e ⪰ 0`, so any y-feasible
//! point is itself an upper bound.
//!
//! The dense solver makes the raw program practical only for small
//! graphs. For code graphs the program symmetrizes to a linear program in
//! the distance distribution: for θ′ that is exactly the Delsarte LP, and
//! [`theta_code_symmetrized`] solves it (and its sign-free θ cousin) at
//! any length the LP module supports.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use crate::delsarte::{build_lp, SpaceSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::rational::{self, Rational};
use crate::sdp::{upper_bound_rounding, BlockKind, BlockSpec, BlockValue, SdpEntry, SdpProblem, SdpSolution, SdpStatus};
use crate::solvers::{ipm_solve, simplex_solve, LpProblem, Relation, Sense};

/// Largest graph accepted by [`theta_sdp`].
pub const RAW_VERTEX_CAP: usize = 32;
/// Largest space [`code_graph`] will enumerate.
pub const CODE_GRAPH_CAP: u64 = 1 << 16;
pub const DEFAULT_ALPHA_TIME_CAP: Duration = Duration::from_secs(10);

/// Simple undirected graph on `0..n`; edges are stored as sorted pairs
/// `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::domain(format!("self-loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::domain(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        let len = out.len();
        out.dedup();
        if out.len() != len {
            return Err(Error::domain("duplicate edge"));
        }
        Ok(Graph { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph { n, edges }
    }

    /// The `q`-gon `C_q`.
    pub fn cycle(q: usize) -> Result<Self> {
        if q < 3 {
            return Err(Error::domain(format!("a cycle needs at least 3 vertices, got {q}")));
        }
        Graph::new(q, (0..q).map(|i| (i, (i + 1) % q)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn complement(&self) -> Graph {
        let edges = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.has_edge(i, j))
            .collect();
        Graph { n: self.n, edges }
    }

    /// Pairs `i < j` that are not edges.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        self.complement().edges
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(k, &a)| set[k + 1..].iter().all(|&b| a != b && !self.has_edge(a, b)))
    }

    /// Parses the edge-list format: a line `n m`, then `m` lines `i j`
    /// (0-based). Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let pair = |no: usize, l: &str| -> Result<(usize, usize)> {
            let mut it = l.split_whitespace().map(|t| t.parse::<usize>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
                _ => Err(Error::Parse(format!("line {no}: expected two nonnegative integers, got {l:?}"))),
            }
        };
        let (no, header) = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let (n, m) = pair(no, header)?;
        let mut edges = Vec::with_capacity(m);
        for (no, l) in lines.by_ref() {
            edges.push(pair(no, l)?);
        }
        if edges.len() != m {
            return Err(Error::Parse(format!("header announces {m} edges, found {}", edges.len())));
        }
        Graph::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        self.to_string()
    }

    /// Neighbourhoods as bitsets of `⌈n/64⌉` words.
    fn adjacency_bits(&self) -> Vec<Bits> {
        let mut adj = vec![Bits::new(self.n); self.n];
        for &(a, b) in &self.edges {
            adj[a].set(b);
            adj[b].set(a);
        }
        adj
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for (a, b) in &self.edges {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

/// `Γ(X, δ)`: the elements of a finite space, joined when their distance
/// lies in `]0, δ[`. Hamming words are ordered by their value in base `q`,
/// Johnson words by the value of their indicator bitmask.
pub fn code_graph(space: &SpaceSpec) -> Result<Graph> {
    space.validate()?;
    match *space {
        SpaceSpec::Hamming { n, q, delta } => {
            let size = (q as u128).checked_pow(n as u32).filter(|&s| s <= CODE_GRAPH_CAP as u128);
            let Some(size) = size else {
                return Err(Error::Size(format!("{q}^{n} words exceed the code-graph cap {CODE_GRAPH_CAP}")));
            };
            let words: Vec<Vec<u64>> = (0..size as u64)
                .map(|mut v| {
                    (0..n)
                        .map(|_| {
                            let d = v % q;
                            v /= q;
                            d
                        })
                        .collect()
                })
                .collect();
            let dist = |a: &[u64], b: &[u64]| a.iter().zip(b).filter(|(x, y)| x != y).count();
            pairs_below(words.len(), delta, |i, j| dist(&words[i], &words[j]))
        }
        SpaceSpec::Johnson { n, w, delta } => {
            if n >= 64 || rational::binomial(n as u64, w as u64) > CODE_GRAPH_CAP.into() {
                return Err(Error::Size(format!("J({n}, {w}) exceeds the code-graph cap {CODE_GRAPH_CAP}")));
            }
            let words = constant_weight_words(n, w);
            pairs_below(words.len(), delta, |i, j| (words[i] ^ words[j]).count_ones() as usize)
        }
        SpaceSpec::Sphere { .. } => Err(Error::domain("the sphere has no finite code graph")),
    }
}

/// Weight-`w` masks below `2^n` in increasing order (Gosper's hack).
fn constant_weight_words(n: usize, w: usize) -> Vec<u64> {
    if w == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut x: u64 = (1 << w) - 1;
    while x >> n == 0 {
        out.push(x);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn pairs_below(size: usize, delta: usize, dist: impl Fn(usize, usize) -> usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            let d = dist(i, j);
            if d > 0 && d < delta {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph { n: size, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaVariant {
    Theta,
    ThetaPrime,
}

impl fmt::Display for ThetaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThetaVariant::Theta => "theta",
            ThetaVariant::ThetaPrime => "theta-prime",
        })
    }
}

/// The primal θ (or θ′) program of `g`. Constraint 1 is the trace; then
/// one per edge; for θ′ one per non-edge tying `B_ij` to a slack `≥ 0`.
pub fn theta_sdp(g: &Graph, variant: ThetaVariant) -> Result<SdpProblem<Rational>> {
    if g.n == 0 {
        return Err(Error::domain("θ needs at least one vertex"));
    }
    if g.n > RAW_VERTEX_CAP {
        return Err(Error::Size(format!(
            "{} vertices exceed the raw θ cap of {RAW_VERTEX_CAP}; use the symmetrized LP",
            g.n
        )));
    }
    let n = g.n;
    let entry = |block, i, j, value| SdpEntry { block, i, j, value };
    let non_edges = g.non_edges();
    let mut blocks = vec![BlockSpec { size: n, kind: BlockKind::Psd }];
    if variant == ThetaVariant::ThetaPrime && !non_edges.is_empty() {
        blocks.push(BlockSpec { size: non_edges.len(), kind: BlockKind::Diagonal });
    }
    let mut p = SdpProblem::new(blocks, false, Rational::zero());
    *p.constant_mut() = (0..n).flat_map(|i| (i..n).map(move |j| entry(0, i, j, Rational::one()))).collect();
    p.push_matrix(Rational::one(), (0..n).map(|i| entry(0, i, i, Rational::one())).collect());
    for &(a, b) in &g.edges {
        p.push_matrix(Rational::zero(), vec![entry(0, a, b, Rational::one())]);
    }
    if variant == ThetaVariant::ThetaPrime {
        // 2 B_ab - s_ab = 0 with s_ab ≥ 0
        for (k, &(a, b)) in non_edges.iter().enumerate() {
            p.push_matrix(Rational::zero(), vec![entry(0, a, b, Rational::one()), entry(1, k, k, -Rational::one())]);
        }
    }
    p.validate()?;
    Ok(p)
}

#[derive(Debug, Clone)]
pub struct ThetaOutcome {
    pub variant: ThetaVariant,
    /// `t` at the final y iterate.
    pub value: f64,
    /// `J•B` at the final X iterate.
    pub primal_value: f64,
    /// `t` after nudging the final iterate into the cone, outward rounded;
    /// `None` when the nudged point could not be confirmed.
    pub safe_bound: Option<f64>,
    pub solution: SdpSolution,
}

/// Solves [`theta_sdp`] with the interior-point method.
pub fn theta_bound(g: &Graph, variant: ThetaVariant, tol: f64) -> Result<ThetaOutcome> {
    let p = theta_sdp(g, variant)?.to_f64();
    let solution = ipm_solve(&p, tol, 200)?;
    if matches!(solution.status, SdpStatus::XInfeasible | SdpStatus::YInfeasible) {
        return Err(Error::solver(format!("θ solve ended with status {:?}", solution.status)));
    }
    let safe_bound = repair_theta_point(&p, &solution);
    Ok(ThetaOutcome { variant, value: solution.y_objective, primal_value: solution.x_objective, safe_bound, solution })
}

/// Raises `t` by the most negative eigenvalue of the PSD block (after
/// clamping θ′ multipliers to the cone) and rounds outward.
fn repair_theta_point(p: &SdpProblem<f64>, sol: &SdpSolution) -> Option<f64> {
    let mut y = sol.y.clone();
    let slots = p.blocks.get(1).map_or(0, |b| b.size);
    let first_slot = y.len() - slots;
    for v in &mut y[first_slot..] {
        *v = v.min(0.0);
    }
    let z = p.slack(&y);
    let lam = z[0].min_eigenvalue();
    if lam < 0.0 {
        let BlockValue::Dense(m) = &z[0] else { return None };
        y[0] += -lam * (1.0 + 1e-9) + 1e-12 * (1.0 + linalg::max_abs(m));
    }
    let fixed = SdpSolution { y, ..sol.clone() };
    upper_bound_rounding(p, &fixed, None).ok().map(|r| r.value)
}

/// `q/2` for even `q`, `q cos(π/q) / (1 + cos(π/q))` for odd `q`.
pub fn theta_cycle_closed_form(q: usize) -> Result<f64> {
    if q < 3 {
        return Err(Error::domain(format!("need q >= 3, got {q}")));
    }
    if q % 2 == 0 {
        return Ok(q as f64 / 2.0);
    }
    let c = (std::f64::consts::PI / q as f64).cos();
    Ok(q as f64 * c / (1.0 + c))
}

/// The circulant symmetrization of θ(C_q): maximize `q f_0` over
/// `f_k ≥ 0` (`0 ≤ k ≤ ⌊q/2⌋`) with `Σ f_k = 1` and
/// `Σ f_k cos(2kπ/q) = 0`. The value is read off the optimal support
/// `{0, ⌊q/2⌋}` and cross-checked against a float simplex solve of the
/// full program.
pub fn theta_cycle_symmetrized_lp(q: usize) -> Result<(LpProblem<f64>, f64)> {
    if q < 3 {
        return Err(Error::domain(format!("need q >= 3, got {q}")));
    }
    let m = q / 2;
    let cosines: Vec<f64> = (0..=m).map(|k| (2.0 * std::f64::consts::PI * k as f64 / q as f64).cos()).collect();
    let mut objective = vec![0.0; m + 1];
    objective[0] = q as f64;
    let mut lp = LpProblem::new((0..=m).map(|k| format!("f_{k}")).collect(), Sense::Maximize, objective);
    lp.add(vec![1.0; m + 1], Relation::Eq, 1.0);
    lp.add(cosines.clone(), Relation::Eq, 0.0);

    // f_0 + f_m = 1 and f_0 + f_m c = 0 give f_0 = -c / (1 - c).
    let c = cosines[m];
    let value = q as f64 * -c / (1.0 - c);

    let check = simplex_solve(&lp)?.optimal()?;
    if (check.value - value).abs() > 1e-9 * (1.0 + value) {
        return Err(Error::solver(format!(
            "symmetrized LP disagrees with its optimal support: simplex {} vs {value}",
            check.value
        )));
    }
    Ok((lp, value))
}

/// The symmetrized θ′ (the Delsarte LP) or θ (the same LP with sign-free
/// distance variables) of a code graph, solved exactly.
pub fn theta_code_symmetrized(space: &SpaceSpec, variant: ThetaVariant) -> Result<Rational> {
    if !space.is_finite() {
        return Err(Error::domain("symmetrized θ needs a finite space"));
    }
    let lp = build_lp(space, None)?;
    if lp.trivial {
        return Ok(Rational::one());
    }
    let problem = match variant {
        ThetaVariant::ThetaPrime => lp.problem,
        ThetaVariant::Theta => split_free(&lp.problem),
    };
    Ok(simplex_solve(&problem)?.optimal()?.value)
}

/// Replaces every variable `x` by `x⁺ - x⁻`.
fn split_free(p: &LpProblem<Rational>) -> LpProblem<Rational> {
    let neg = |v: &[Rational]| -> Vec<Rational> { v.iter().cloned().chain(v.iter().map(|a| -a)).collect() };
    let names = p.variables.iter().map(|v| format!("{v}+")).chain(p.variables.iter().map(|v| format!("{v}-"))).collect();
    let mut out = LpProblem::new(names, p.sense, neg(&p.objective));
    out.offset = p.offset.clone();
    for c in &p.constraints {
        out.add(neg(&c.row), c.relation, c.rhs.clone());
    }
    out
}

/// The matrix of the θ dual for `C_5` at level `t`: `t - 1` on the
/// diagonal, `-1` on non-edges and `x` on edges, with `x` picked midway in
/// the interval where all circulant eigenvalues are nonnegative.
pub fn pentagon_dual_matrix(t: &Rational) -> Result<RatMatrix> {
    // Eigenvalues: t - 3 + 2x and t + 2(1 + x) cos(2πj/5), j = 1, 2; the
    // binding one is t - (1 + x)(1 + √5)/2. Rational brackets for
    // (1 + √5)/2 keep the choice exact.
    let phi_hi = rational::frac(1_618_034, 1_000_000);
    let lo = (rational::int(3) - t) / rational::int(2);
    let hi = t / &phi_hi - Rational::one();
    if lo > hi {
        return Err(Error::domain(format!("t = {t} is too small for a C_5 dual certificate")));
    }
    let x = (&lo + &hi) / rational::int(2);
    let g = Graph::cycle(5)?;
    let mut b = linalg::zeros(5, 5);
    for i in 0..5 {
        for j in 0..5 {
            b[i][j] = if i == j {
                t - Rational::one()
            } else if g.has_edge(i, j) {
                x.clone()
            } else {
                -Rational::one()
            };
        }
    }
    Ok(b)
}

/// Checks a θ dual certificate exactly: `B ⪰ 0`, `B_ii = t - 1`,
/// `B_ij = -1` off the edges. On success `θ(g) ≤ t`.
pub fn check_theta_dual(g: &Graph, b: &RatMatrix, t: &Rational) -> std::result::Result<(), String> {
    let n = g.n;
    if b.len() != n || b.iter().any(|r| r.len() != n) {
        return Err(format!("expected a {n}×{n} matrix"));
    }
    if !linalg::is_symmetric(b) {
        return Err("matrix is not symmetric".into());
    }
    let diag = t - Rational::one();
    for i in 0..n {
        if b[i][i] != diag {
            return Err(format!("diagonal entry {i} is {} instead of t - 1 = {diag}", b[i][i]));
        }
        for j in i + 1..n {
            if !g.has_edge(i, j) && b[i][j] != -Rational::one() {
                return Err(format!("non-edge ({i}, {j}) has entry {} instead of -1", b[i][j]));
            }
        }
    }
    if !linalg::is_psd_exact(b) {
        return Err("matrix is not positive semidefinite".into());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaResult {
    Exact(usize),
    /// The time cap hit; `lower` is the best independent set found.
    Inconclusive { lower: usize },
}

impl AlphaResult {
    pub fn exact(&self) -> Option<usize> {
        match self {
            AlphaResult::Exact(a) => Some(*a),
            AlphaResult::Inconclusive { .. } => None,
        }
    }
}

/// Independence number with the default time cap.
pub fn alpha_exhaustive(g: &Graph) -> AlphaResult {
    alpha_exhaustive_with(g, DEFAULT_ALPHA_TIME_CAP)
}

/// Maximum clique of the complement by branch and bound, pruning with a
/// greedy colouring bound.
pub fn alpha_exhaustive_with(g: &Graph, cap: Duration) -> AlphaResult {
    if g.n == 0 {
        return AlphaResult::Exact(0);
    }
    // Renumber by increasing degree in g, so high-degree complement
    // vertices come first in the colouring order.
    let adj = g.adjacency_bits();
    let mut order: Vec<usize> = (0..g.n).collect();
    order.sort_by_key(|&v| (adj[v].count(), v));
    let mut compl = vec![Bits::new(g.n); g.n];
    for (k, &v) in order.iter().enumerate() {
        for (l, &u) in order.iter().enumerate() {
            if k != l && !adj[v].get(u) {
                compl[k].set(l);
            }
        }
    }
    let mut s = CliqueSearch { adj: compl, best: 0, nodes: 0, start: Instant::now(), cap, timed_out: false };
    let mut all = Bits::new(g.n);
    for v in 0..g.n {
        all.set(v);
    }
    s.expand(all, 0);
    if s.timed_out {
        AlphaResult::Inconclusive { lower: s.best }
    } else {
        AlphaResult::Exact(s.best)
    }
}

struct CliqueSearch {
    adj: Vec<Bits>,
    best: usize,
    nodes: u64,
    start: Instant,
    cap: Duration,
    timed_out: bool,
}

impl CliqueSearch {
    fn expand(&mut self, mut cand: Bits, size: usize) {
        self.nodes += 1;
        if self.nodes % 1024 == 0 && self.start.elapsed() > self.cap {
            self.timed_out = true;
        }
        if self.timed_out {
            return;
        }
        let (verts, colors) = self.colour(&cand);
        for k in (0..verts.len()).rev() {
            if size + colors[k] <= self.best || self.timed_out {
                return;
            }
            let v = verts[k];
            let next = cand.and(&self.adj[v]);
            if next.is_empty() {
                self.best = self.best.max(size + 1);
            } else {
                self.expand(next, size + 1);
            }
            cand.clear(v);
        }
    }

    /// Greedy sequential colouring; vertices come back sorted by colour,
    /// with `colors[k]` an upper bound on any clique inside `verts[..=k]`.
    fn colour(&self, cand: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut verts = Vec::with_capacity(cand.count());
        let mut colors = Vec::with_capacity(verts.capacity());
        let mut left = cand.clone();
        let mut colour = 0;
        while !left.is_empty() {
            colour += 1;
            let mut avail = left.clone();
            while let Some(v) = avail.first() {
                avail.clear(v);
                avail = avail.and_not(&self.adj[v]);
                left.clear(v);
                verts.push(v);
                colors.push(colour);
            }
        }
        (verts, colors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::cycle(5).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("5 5\n"));
        assert_eq!(Graph::parse_edge_list(&text).unwrap(), g);
        assert!(Graph::parse_edge_list("3 1\n0 0\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n0 x\n").is_err());
    }

    #[test]
    fn cube_graph() {
        let g = code_graph(&SpaceSpec::hamming(3, 2, 2)).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.edges().len(), 12);
        assert!(g.has_edge(0, 1) && g.has_edge(0, 4) && !g.has_edge(0, 3));
        assert_eq!(alpha_exhaustive(&g), AlphaResult::Exact(4));
        assert!(g.is_independent(&[0, 3, 5, 6]));
    }

    #[test]
    fn distance_one_has_no_edges() {
        let g = code_graph(&SpaceSpec::hamming(3, 3, 1)).unwrap();
        assert_eq!((g.n(), g.edges().len()), (27, 0));
        assert_eq!(alpha_exhaustive(&g), AlphaResult::Exact(27));
    }

    #[test]
    fn johnson_graph_order() {
        let g = code_graph(&SpaceSpec::johnson(4, 2, 4)).unwrap();
        // words 0011, 0101, 0110, 1001, 1010, 1100; complements at distance 4
        assert_eq!(g.n(), 6);
        assert_eq!(constant_weight_words(4, 2), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(g.edges().len(), 12);
        assert!(!g.has_edge(0, 5));
        assert_eq!(alpha_exhaustive(&g).exact(), Some(2));
    }

    #[test]
    fn oversized_spaces_are_rejected() {
        assert!(matches!(code_graph(&SpaceSpec::hamming(17, 2, 3)), Err(Error::Size(_))));
        assert!(theta_sdp(&Graph::empty(RAW_VERTEX_CAP + 1), ThetaVariant::Theta).is_err());
    }

    #[test]
    fn small_alphas() {
        assert_eq!(alpha_exhaustive(&Graph::cycle(5).unwrap()), AlphaResult::Exact(2));
        assert_eq!(alpha_exhaustive(&Graph::empty(9)), AlphaResult::Exact(9));
        assert_eq!(alpha_exhaustive(&Graph::complete(9)), AlphaResult::Exact(1));
        assert_eq!(alpha_exhaustive(&Graph::empty(0)), AlphaResult::Exact(0));
        let g = Graph::empty(70).complement().complement();
        assert_eq!(alpha_exhaustive(&g), AlphaResult::Exact(70));
    }

    #[test]
    fn trivial_thetas() {
        for n in 1..6 {
            let e = theta_bound(&Graph::empty(n), ThetaVariant::Theta, 1e-9).unwrap();
            assert!((e.value - n as f64).abs() < 1e-6, "{}", e.value);
            let k = theta_bound(&Graph::complete(n), ThetaVariant::ThetaPrime, 1e-9).unwrap();
            assert!((k.value - 1.0).abs() < 1e-6, "{}", k.value);
        }
    }

    #[test]
    fn pentagon() {
        let out = theta_bound(&Graph::cycle(5).unwrap(), ThetaVariant::Theta, 1e-10).unwrap();
        assert!((out.value - 5f64.sqrt()).abs() < 1e-6, "{}", out.value);
        let safe = out.safe_bound.unwrap();
        assert!(safe >= 5f64.sqrt() && safe < 5f64.sqrt() + 1e-6, "{safe}");
    }

    #[test]
    fn cycle_forms() {
        assert_eq!(theta_cycle_closed_form(4).unwrap(), 2.0);
        assert!((theta_cycle_closed_form(3).unwrap() - 1.0).abs() < 1e-15);
        assert!((theta_cycle_closed_form(5).unwrap() - 5f64.sqrt()).abs() < 1e-12);
        assert!(theta_cycle_closed_form(2).is_err());
        let (lp, v) = theta_cycle_symmetrized_lp(6).unwrap();
        assert_eq!(lp.num_vars(), 4);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pentagon_dual_is_exact() {
        let g = Graph::cycle(5).unwrap();
        let t = frac(2_795_085, 1_250_000);
        let b = pentagon_dual_matrix(&t).unwrap();
        check_theta_dual(&g, &b, &t).unwrap();
        // just below √5 no certificate exists
        let below = frac(2_236_067, 1_000_000);
        assert!(pentagon_dual_matrix(&below).map_or(true, |b| check_theta_dual(&g, &b, &below).is_err()));
    }

    #[test]
    fn symmetrized_code_thetas() {
        let space = SpaceSpec::hamming(4, 2, 3);
        let prime = theta_code_symmetrized(&space, ThetaVariant::ThetaPrime).unwrap();
        let plain = theta_code_symmetrized(&space, ThetaVariant::Theta).unwrap();
        assert!(plain >= prime);
        let g = code_graph(&space).unwrap();
        let raw = theta_bound(&g, ThetaVariant::Theta, 1e-9).unwrap();
        assert!((raw.value - rational::to_f64(&plain)).abs() < 1e-5, "{} vs {plain}", raw.value);
    }
}
