mod common;

use codebounds::zonal::{translate_sum, HammingZonalFamily};
use common::{harmonic_oracle, Lattice};

fn compare_with_oracle(lat: &Lattice, k: usize) {
    let fam = HammingZonalFamily::new(lat.n, lat.q, k).unwrap();
    for i in k..=lat.n - k {
        for j in k..=lat.n - k {
            let oracle = harmonic_oracle(lat, k, i, j);
            for (&(x, y), v) in &oracle {
                let meet = lat.rank(x & y);
                let got = fam.entry(i, j, i, j, meet).unwrap();
                assert_eq!(&got, v, "n={} q={} k={k} i={i} j={j} meet={meet}", lat.n, lat.q);
            }
        }
    }
}

#[test]
fn subset_lattice_matches_harmonic_basis() {
    for n in 1..=6 {
        let lat = Lattice::subsets(n);
        for k in 0..=n / 2 {
            compare_with_oracle(&lat, k);
        }
    }
}

#[test]
fn binary_subspace_lattice_matches_harmonic_basis() {
    for n in 1..=4 {
        let lat = Lattice::binary_subspaces(n);
        for k in 0..=n / 2 {
            compare_with_oracle(&lat, k);
        }
    }
}

#[test]
fn subspace_counts() {
    let lat = Lattice::binary_subspaces(4);
    assert_eq!(lat.size(), 67);
    assert_eq!(lat.level(2).len(), 35);
}

#[test]
fn translate_sum_matches_enumeration() {
    for n in 1..=6usize {
        for k in 0..=n / 2 {
            let fam = HammingZonalFamily::new(n, 1, k).unwrap();
            for d in 0..=n {
                let x = 0u64;
                let y = (1u64 << d) - 1;
                let mut acc = codebounds::linalg::zeros(fam.size(), fam.size());
                for z in 0..1u64 << n {
                    let e = fam.matrix_at(x ^ z, y ^ z).unwrap();
                    for (r, row) in e.iter().enumerate() {
                        for (c, v) in row.iter().enumerate() {
                            acc[r][c] += v;
                        }
                    }
                }
                assert_eq!(acc, translate_sum(&fam, d).unwrap(), "n={n} k={k} d={d}");
            }
        }
    }
}
