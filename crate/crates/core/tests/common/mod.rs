//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths being checked beyond plain data types.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use codebounds::linalg::{self, RatMatrix};
use codebounds::rational::{self, int, Rational};
use num_traits::Zero;

/// A graded lattice of subsets of `[n]` (`q = 1`) or of subspaces of
/// `F_2^n` (`q = 2`). Elements are bitsets: positions for subsets, member
/// vectors for subspaces, so meet is `&` and containment is `x & y == x`.
pub struct Lattice {
    pub n: usize,
    pub q: u64,
    pub elems: Vec<u64>,
}

impl Lattice {
    pub fn subsets(n: usize) -> Self {
        Lattice { n, q: 1, elems: (0..1u64 << n).collect() }
    }

    pub fn binary_subspaces(n: usize) -> Self {
        assert!(n <= 6, "member bitsets need 2^n <= 64");
        let full = 1usize << n;
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut frontier = vec![1u64];
        seen.insert(1);
        while let Some(s) = frontier.pop() {
            for v in 0..full {
                if s >> v & 1 == 1 {
                    continue;
                }
                let mut span = s;
                for w in 0..full {
                    if s >> w & 1 == 1 {
                        span |= 1 << (w ^ v);
                    }
                }
                if seen.insert(span) {
                    frontier.push(span);
                }
            }
        }
        Lattice { n, q: 2, elems: seen.into_iter().collect() }
    }

    pub fn rank(&self, x: u64) -> usize {
        let c = x.count_ones() as usize;
        if self.q == 1 {
            c
        } else {
            c.trailing_zeros() as usize
        }
    }

    pub fn level(&self, r: usize) -> Vec<u64> {
        self.elems.iter().copied().filter(|&x| self.rank(x) == r).collect()
    }

    pub fn size(&self) -> usize {
        self.elems.len()
    }
}

/// `E_{k,i,j}(x, y)` for all `x ∈ X_i, y ∈ X_j` built from an explicit
/// basis of `H_{k,k} = ker δ_k` pushed up with `ψ`. Keys are `(x, y)`.
pub fn harmonic_oracle(lat: &Lattice, k: usize, i: usize, j: usize) -> HashMap<(u64, u64), Rational> {
    let xk = lat.level(k);
    let xkm = if k == 0 { Vec::new() } else { lat.level(k - 1) };
    let delta: RatMatrix = xkm
        .iter()
        .map(|&z| xk.iter().map(|&x| if z & x == z { int(1) } else { int(0) }).collect())
        .collect();
    let basis = if xkm.is_empty() {
        linalg::identity(xk.len())
    } else {
        linalg::nullspace(&delta, xk.len())
    };
    // F has the kernel basis as columns
    let f = linalg::transpose(&basis);
    let gram = linalg::matmul(&basis, &f);
    let proj = linalg::matmul(&linalg::matmul(&f, &linalg::inverse(&gram).expect("independent basis")), &basis);
    let size = int(lat.size() as i64);
    let psi = |r: usize| -> (Vec<u64>, RatMatrix) {
        let xr = lat.level(r);
        let m = xr
            .iter()
            .map(|&y| xk.iter().map(|&x| if x & y == x { int(1) } else { int(0) }).collect())
            .collect();
        (xr, m)
    };
    let (xi, pi) = psi(i);
    let (xj, pj) = psi(j);
    let e = linalg::matmul(&linalg::matmul(&pi, &proj), &linalg::transpose(&pj));
    let mut out = HashMap::new();
    for (r, &x) in xi.iter().enumerate() {
        for (c, &y) in xj.iter().enumerate() {
            out.insert((x, y), &size * &e[r][c]);
        }
    }
    out
}

pub fn hamming_distance(x: u64, y: u64) -> usize {
    (x ^ y).count_ones() as usize
}

pub fn min_distance(code: &[u64]) -> usize {
    let mut best = usize::MAX;
    for (a, &x) in code.iter().enumerate() {
        for &y in &code[a + 1..] {
            best = best.min(hamming_distance(x, y));
        }
    }
    best
}

/// Largest binary code of length `n ≤ 8` with minimum distance `delta`
/// (fixing 0 ∈ C). Branch and bound over candidate bitsets, pruned by a
/// greedy partition of the candidates into mutually conflicting classes:
/// a code takes at most one word from each class.
pub fn brute_force_code(n: usize, delta: usize) -> Vec<u64> {
    type Bits = [u64; 4];
    fn take(b: &Bits) -> Option<usize> {
        b.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| 64 * i + w.trailing_zeros() as usize)
    }
    fn clear(b: &mut Bits, v: usize) {
        b[v / 64] &= !(1u64 << (v % 64));
    }
    fn and(a: &Bits, b: &Bits) -> Bits {
        [a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]]
    }
    fn and_not(a: &Bits, b: &Bits) -> Bits {
        [a[0] & !b[0], a[1] & !b[1], a[2] & !b[2], a[3] & !b[3]]
    }
    fn expand(p: Bits, comp: &[Bits], cur: &mut Vec<u64>, best: &mut Vec<u64>) {
        let mut order = Vec::new();
        let mut left = p;
        let mut class = 0;
        while take(&left).is_some() {
            class += 1;
            let mut q = left;
            while let Some(v) = take(&q) {
                clear(&mut left, v);
                clear(&mut q, v);
                q = and_not(&q, &comp[v]);
                order.push((v, class));
            }
        }
        let mut p = p;
        for &(v, bound) in order.iter().rev() {
            if cur.len() + bound <= best.len() {
                return;
            }
            cur.push(v as u64);
            let next = and(&p, &comp[v]);
            if take(&next).is_none() {
                if cur.len() > best.len() {
                    *best = cur.clone();
                }
            } else {
                expand(next, comp, cur, best);
            }
            cur.pop();
            clear(&mut p, v);
        }
    }
    assert!(n <= 8, "candidate bitsets hold 256 words");
    let size = 1usize << n;
    let ok = |a: usize, b: usize| hamming_distance(a as u64, b as u64) >= delta;
    let comp: Vec<Bits> = (0..size)
        .map(|v| {
            let mut b = [0u64; 4];
            for w in (0..size).filter(|&w| ok(v, w)) {
                b[w / 64] |= 1 << (w % 64);
            }
            b
        })
        .collect();
    let bits = |words: &mut dyn Iterator<Item = usize>| {
        let mut b = [0u64; 4];
        for w in words {
            b[w / 64] |= 1 << (w % 64);
        }
        b
    };
    // Coordinate permutations fix 0, so an optimal code may be taken to
    // contain 0 and, as a word of least nonzero weight w, w1 = 1^w 0^(n-w).
    // The stabilizer S_w × S_(n-w) of w1 has orbits keyed by
    // (weight, overlap with w1); the next word is taken key-minimal among
    // the rest and replaced by its orbit representative.
    let mut best = vec![0u64];
    for w in delta..=n {
        let w1 = (1usize << w) - 1;
        if best.len() < 2 {
            best = vec![0, w1 as u64];
        }
        let key = |x: usize| ((x.count_ones() as usize), ((x & w1).count_ones() as usize));
        for t in w..=n {
            for a in t.saturating_sub(n - w)..=t.min(w) {
                let r = ((1usize << a) - 1) | (((1usize << (t - a)) - 1) << w);
                if !ok(r, w1) {
                    continue;
                }
                let p = and(
                    &and(&comp[w1], &comp[r]),
                    &bits(&mut (1..size).filter(|&x| key(x) >= (t, a) && key(x).0 >= w)),
                );
                let mut cur = vec![0, w1 as u64, r as u64];
                if best.len() < 3 {
                    best = cur.clone();
                }
                expand(p, &comp, &mut cur, &mut best);
            }
        }
    }
    best
}

pub fn brute_force_a(n: usize, delta: usize) -> usize {
    brute_force_code(n, delta).len()
}

/// Exact LP optimum by enumerating every vertex of
/// `{x ≥ 0 : A x ≤ b}` and maximizing `c·x` (tiny problems only).
pub fn lp_by_vertices(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Option<Rational> {
    let nv = c.len();
    // every constraint as (row, rhs) with row·x <= rhs, including -x_i <= 0
    let mut rows: Vec<(Vec<Rational>, Rational)> = a.iter().cloned().zip(b.iter().cloned()).collect();
    for i in 0..nv {
        let mut r = vec![Rational::zero(); nv];
        r[i] = int(-1);
        rows.push((r, Rational::zero()));
    }
    let mut best: Option<Rational> = None;
    let mut choose = vec![0usize; nv];
    fn next_combo(c: &mut [usize], m: usize) -> bool {
        let k = c.len();
        for i in (0..k).rev() {
            if c[i] < m - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    for (i, slot) in choose.iter_mut().enumerate() {
        *slot = i;
    }
    if rows.len() < nv {
        return None;
    }
    loop {
        let sys: RatMatrix = choose.iter().map(|&r| rows[r].0.clone()).collect();
        if let Some(inv) = linalg::inverse(&sys) {
            let rhs: RatMatrix = choose.iter().map(|&r| vec![rows[r].1.clone()]).collect();
            let x: Vec<Rational> = linalg::matmul(&inv, &rhs).into_iter().map(|r| r[0].clone()).collect();
            let feasible = rows.iter().all(|(r, rhs)| {
                let lhs: Rational = r.iter().zip(&x).map(|(p, q)| p * q).sum();
                lhs <= *rhs
            });
            if feasible {
                let val: Rational = c.iter().zip(&x).map(|(p, q)| p * q).sum();
                if best.as_ref().map_or(true, |b| val > *b) {
                    best = Some(val);
                }
            }
        }
        if !next_combo(&mut choose, rows.len()) {
            break;
        }
    }
    best
}

pub fn binomial(n: usize, k: usize) -> Rational {
    rational::big(rational::binomial(n as u64, k as u64))
}

/// Krawtchouk value by the defining sum, independent of the polynomial
/// expansion in the library.
pub fn krawtchouk_direct(n: usize, q: u64, k: usize, x: usize) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..=k {
        if i > x || k - i > n - x {
            continue;
        }
        let sign = if i % 2 == 0 { int(1) } else { int(-1) };
        acc += sign * binomial(x, i) * binomial(n - x, k - i) * rational::pow(&int(q as i64 - 1), (k - i) as u32);
    }
    acc
}
