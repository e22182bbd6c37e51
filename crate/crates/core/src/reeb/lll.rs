//! Exact LLL reduction of integer lattice bases.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Gram-Schmidt data: `mu[i][j]` for `j < i` and the squared norms `|b*_i|^2`.
pub struct GramSchmidt {
    pub mu: Vec<Vec<BigRational>>,
    pub norms: Vec<BigRational>,
}

fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn gram_schmidt(basis: &[Vec<BigInt>]) -> GramSchmidt {
    let n = basis.len();
    let mut stars: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let b = to_rational(&basis[i]);
        let mut v = b.clone();
        for j in 0..i {
            if norms[j] == BigRational::zero() {
                continue;
            }
            let m = dot(&b, &stars[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&stars[j]) {
                *x -= &m * s;
            }
            mu[i][j] = m;
        }
        norms.push(dot(&v, &v));
        stars.push(v);
    }
    GramSchmidt { mu, norms }
}

fn round(q: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (q + half).floor().to_integer()
}

/// Reduces `basis` in place with Lovasz constant `delta` (`1/4 < delta < 1`).
/// The rows must be linearly independent.
pub fn lll_reduce(basis: &mut [Vec<BigInt>], delta: &BigRational) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let mut gs = gram_schmidt(basis);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = round(&gs.mu[k][j]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = basis.split_at_mut(k);
            for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                *x -= &q * y;
            }
            let qr = BigRational::from_integer(q);
            for i in 0..j {
                let d = &qr * &gs.mu[j][i];
                gs.mu[k][i] -= d;
            }
            gs.mu[k][j] -= &qr;
        }
        let m = &gs.mu[k][k - 1];
        let lhs = &gs.norms[k];
        let rhs = (delta - m * m) * &gs.norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            gs = gram_schmidt(basis);
            k = (k - 1).max(1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn det2(b: &[Vec<BigInt>]) -> BigInt {
        &b[0][0] * &b[1][1] - &b[0][1] * &b[1][0]
    }

    #[test]
    fn reduces_a_skewed_plane_basis() {
        let mut b = rows(&[&[1, 0], &[1000, 1]]);
        let before = det2(&b);
        lll_reduce(&mut b, &BigRational::new(3.into(), 4.into()));
        assert_eq!(det2(&b).magnitude(), before.magnitude());
        for r in &b {
            assert!(r.iter().all(|x| x.magnitude() <= &1u32.into()));
        }
    }

    #[test]
    fn lovasz_and_size_conditions_hold() {
        let mut b = rows(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        let delta = BigRational::new(99.into(), 100.into());
        lll_reduce(&mut b, &delta);
        let gs = gram_schmidt(&b);
        let half = BigRational::new(1.into(), 2.into());
        for i in 1..3 {
            for j in 0..i {
                assert!(gs.mu[i][j].abs() <= half);
            }
            let m = &gs.mu[i][i - 1];
            assert!(gs.norms[i] >= (&delta - m * m) * &gs.norms[i - 1]);
        }
    }
}
