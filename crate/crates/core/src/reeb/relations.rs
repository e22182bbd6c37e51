//! Bounded integer relation search.
//!
//! A relation for `v` is a nonzero integer vector `c` with `|c_i| <= B` and
//! `|<c, v>| <= tol |c| |v|`. Candidates come from an LLL-reduced basis of the
//! lattice spanned by the rows `(S e_i, round(S K v_i))`, where
//! `K = 1 / (tol |v|)`: a relation maps to a lattice vector of length at most
//! about `sqrt(2) S |c|`, so relations show up among the short basis vectors.
//! Every reported relation is re-checked in exact arithmetic.
//!
//! When the reported relations are a prefix of the reduced basis and every
//! later Gram-Schmidt vector is longer than the largest lattice vector a
//! bounded relation could produce, no bounded relation exists outside their
//! span; the result is then marked `certified`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::lll::{gram_schmidt, lll_reduce};
use crate::numeric::sqrt_upper;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSearch {
    /// Independent relations, sign-normalized (first nonzero entry positive)
    /// and sorted by squared norm, then lexicographically.
    pub relations: Vec<Vec<BigInt>>,
    pub certified: bool,
}

fn dot(c: &[BigInt], v: &[BigRational]) -> BigRational {
    c.iter()
        .zip(v)
        .fold(BigRational::zero(), |acc, (x, y)| acc + y * x)
}

fn norm2_int(c: &[BigInt]) -> BigInt {
    c.iter().map(|x| x * x).sum()
}

fn norm2(v: &[BigRational]) -> BigRational {
    v.iter().fold(BigRational::zero(), |acc, x| acc + x * x)
}

/// `|<c, v>| <= tol |c| |v|`, decided exactly.
pub fn is_relation(c: &[BigInt], v: &[BigRational], tol: &BigRational) -> bool {
    if c.iter().all(Zero::is_zero) {
        return false;
    }
    let d = dot(c, v);
    let lhs = &d * &d;
    let rhs = tol * tol * BigRational::from_integer(norm2_int(c)) * norm2(v);
    lhs <= rhs
}

fn normalize_sign(mut c: Vec<BigInt>) -> Vec<BigInt> {
    if c.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        for x in &mut c {
            *x = -&*x;
        }
    }
    c
}

fn sort_relations(rels: &mut [Vec<BigInt>]) {
    rels.sort_by(|a, b| norm2_int(a).cmp(&norm2_int(b)).then_with(|| a.cmp(b)));
}

fn round(q: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (q + half).floor().to_integer()
}

/// Searches for integer relations of `v` with entries in `[-bound, bound]`.
///
/// # Panics
///
/// If `v` is empty or `tol` is not positive.
pub fn search_relations(v: &[BigRational], bound: u64, tol: &BigRational) -> RelationSearch {
    assert!(!v.is_empty(), "relation search needs a nonempty vector");
    assert!(tol.is_positive(), "relation tolerance must be positive");
    let m = v.len();
    let b = BigInt::from(bound);

    let max_abs = v.iter().map(Signed::abs).max().expect("nonempty");
    if max_abs.is_zero() {
        let mut relations: Vec<Vec<BigInt>> = (0..m)
            .map(|i| (0..m).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        sort_relations(&mut relations);
        return RelationSearch {
            relations,
            certified: true,
        };
    }
    // the relation condition is homogeneous in v, so normalize to max |v_i| = 1
    let w: Vec<BigRational> = v.iter().map(|x| x / &max_abs).collect();
    let k = (tol * sqrt_upper(&norm2(&w))).recip();
    let s = BigInt::from(1u64 << 32);
    let s_rat = BigRational::from_integer(s.clone());

    let mut basis: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            let mut row = vec![BigInt::zero(); m + 1];
            row[i] = s.clone();
            row[m] = round(&(&s_rat * &k * &w[i]));
            row
        })
        .collect();
    lll_reduce(&mut basis, &BigRational::new(99.into(), 100.into()));

    let mut found: Vec<usize> = Vec::new();
    let mut relations = Vec::new();
    for (idx, row) in basis.iter().enumerate() {
        let c: Vec<BigInt> = row[..m].iter().map(|x| x / &s).collect();
        if c.iter().all(|x| x.abs() <= b) && is_relation(&c, &w, tol) {
            found.push(idx);
            relations.push(normalize_sign(c));
        }
    }

    let prefix = found.iter().enumerate().all(|(i, &j)| i == j);
    let certified = prefix && {
        let gs = gram_schmidt(&basis);
        let mm = BigInt::from(m);
        // |u|^2 <= (2 S^2 + S m + m/4) |c|^2 and |c|^2 <= m B^2
        let per_c = BigRational::from_integer(BigInt::from(2) * &s * &s + &s * &mm)
            + BigRational::new(mm.clone(), BigInt::from(4));
        let limit = per_c * BigRational::from_integer(&mm * &b * &b);
        gs.norms[found.len()..].iter().all(|n| *n > limit)
    };

    sort_relations(&mut relations);
    RelationSearch {
        relations,
        certified,
    }
}

/// Maximal independent set of bounded integer relations of `v`, in
/// deterministic order. See [`search_relations`].
pub fn integer_relations(v: &[BigRational], bound: u64, tol: &BigRational) -> Vec<Vec<BigInt>> {
    search_relations(v, bound, tol).relations
}
