//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's linear algebra.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use kcontact_core::graded::{CupPresentation, GradedAbelianGroup};
use kcontact_core::int_linalg::{AbelianGroupInvariants, IntMatrix};
use num_bigint::BigInt;
use rand::Rng;

pub fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Determinantal divisors: `Delta_k` = gcd of all `k x k` minors.
pub fn determinantal_divisors(m: &[Vec<i64>], cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| i128::from(m[r][c])).collect())
                    .collect();
                g = gcd(g, det(&sub));
            }
        }
        out.push(g);
    }
    out
}

/// Nonzero invariant factors `d_k = Delta_k / Delta_{k-1}`.
pub fn invariant_factors_by_minors(m: &[Vec<i64>], cols: usize) -> Vec<i128> {
    let deltas = determinantal_divisors(m, cols);
    let mut prev = 1i128;
    let mut out = Vec::new();
    for d in deltas {
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Rank by fraction-free (Bareiss) elimination in `i128`.
pub fn bareiss_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                a[r][j] = (a[rank][c] * a[r][j] - a[r][c] * a[rank][j]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Total-space groups predicted for an a-sequence: `Z` in degrees `0` and
/// `2n+1`, `Z/(a_k/a_{k-1})` in degree `2k`. Entries are `(degree, rank, torsion)`
/// for the nonzero groups.
pub fn a_sequence_table(a: &[u64]) -> Vec<(usize, usize, Vec<u64>)> {
    let n = a.len() - 1;
    let mut out = vec![(0, 1, vec![])];
    for k in 1..=n {
        let r = a[k] / a[k - 1];
        if r > 1 {
            out.push((2 * k, 0, vec![r]));
        }
    }
    out.push((2 * n + 1, 1, vec![]));
    out
}

/// All a-sequences `a_0 = a_1 = 1 | a_2 | ... | a_n <= max_top` satisfying
/// `a_i a_{n-i} = a_n`.
pub fn duality_valid_sequences(n: usize, max_top: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, n: usize, max_top: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == n + 1 {
            let an = prefix[n];
            if (1..n).all(|i| prefix[i] * prefix[n - i] == an) {
                out.push(prefix.clone());
            }
            return;
        }
        let last = *prefix.last().expect("nonempty");
        let mut next = last;
        while next <= max_top {
            prefix.push(next);
            extend(prefix, n, max_top, out);
            prefix.pop();
            next += last;
        }
    }
    let mut out = Vec::new();
    let mut prefix = if n == 0 { vec![1] } else { vec![1, 1] };
    extend(&mut prefix, n, max_top, &mut out);
    out
}

/// Classical RK4 for `z' = i lambda z` coordinatewise, in real form.
pub fn rk4_flow(lambda: &[f64], z: &[(f64, f64)], t: f64, steps: usize) -> Vec<(f64, f64)> {
    let h = t / steps as f64;
    let field = |s: &[(f64, f64)]| -> Vec<(f64, f64)> {
        s.iter().zip(lambda).map(|(&(x, y), l)| (-l * y, l * x)).collect()
    };
    let add = |s: &[(f64, f64)], k: &[(f64, f64)], c: f64| -> Vec<(f64, f64)> {
        s.iter().zip(k).map(|(&(x, y), &(a, b))| (x + c * a, y + c * b)).collect()
    };
    let mut s = z.to_vec();
    for _ in 0..steps {
        let k1 = field(&s);
        let k2 = field(&add(&s, &k1, h / 2.0));
        let k3 = field(&add(&s, &k2, h / 2.0));
        let k4 = field(&add(&s, &k3, h));
        s = s
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                (
                    x + h / 6.0 * (k1[i].0 + 2.0 * k2[i].0 + 2.0 * k3[i].0 + k4[i].0),
                    y + h / 6.0 * (k1[i].1 + 2.0 * k2[i].1 + 2.0 * k3[i].1 + k4[i].1),
                )
            })
            .collect();
    }
    s
}

/// Speeds of the toric `CP^n` simplex at `0, e_1, ..., e_n`.
pub fn simplex_speeds(xi1: &[f64], xi2: f64) -> Vec<f64> {
    std::iter::once(xi2).chain(xi1.iter().map(|x| x + xi2)).collect()
}

/// A presentation with ranks in `0..=3` in every degree, random cup maps with
/// entries in `[-3, 3]`, and occasionally a cyclic summand in one degree whose
/// adjacent maps are then zero.
pub fn random_presentation<R: Rng>(rng: &mut R) -> CupPresentation {
    let dim = 2 * rng.random_range(1..=4usize);
    let mut ranks: Vec<usize> = (0..=dim).map(|_| rng.random_range(0..=3)).collect();
    ranks[0] = 1;
    let torsion_at = rng.random_bool(0.25).then(|| rng.random_range(1..=dim));
    let mut groups = GradedAbelianGroup::new(dim);
    for (k, &r) in ranks.iter().enumerate() {
        let orders: Vec<BigInt> = if torsion_at == Some(k) {
            vec![BigInt::from(rng.random_range(2..=6))]
        } else {
            vec![]
        };
        groups.set(k, AbelianGroupInvariants::from_cyclic_orders(r, &orders));
    }
    let mut cup = BTreeMap::new();
    for k in 0..=dim {
        let rows = if k + 2 <= dim { ranks[k + 2] } else { 0 };
        let touches = torsion_at.is_some_and(|t| t == k || t == k + 2);
        let entries: Vec<Vec<i64>> = (0..rows)
            .map(|_| {
                (0..ranks[k])
                    .map(|_| if touches { 0 } else { rng.random_range(-3..=3) })
                    .collect()
            })
            .collect();
        cup.insert(k, IntMatrix::from_rows(entries, ranks[k]).expect("rectangular"));
    }
    let euler = cup[&0].column(0);
    CupPresentation::new(dim, groups, cup, euler, BTreeMap::new()).expect("valid random presentation")
}
