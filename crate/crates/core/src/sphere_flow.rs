//! The weighted Reeb flow on `S^{2n+1}` in `C^{n+1}`.
//!
//! `alpha = sum_j (x_j dy_j - y_j dx_j)`, so `alpha_z(v) = sum_j Im(conj(z_j) v_j)`.
//! The weighted field `R_lambda(z) = (i lambda_j z_j)_j` is the Reeb field of
//! `alpha' = alpha / sum_j lambda_j |z_j|^2` and its flow rotates coordinate
//! `j` with angular speed `lambda_j`.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

/// Coordinates with `|z_j|` at or below this are treated as zero.
pub const SUPPORT_TOL: f64 = 1e-9;
/// Allowed `| |z|^2 - 1 |` for a point on the sphere.
pub const SPHERE_TOL: f64 = 1e-12;
/// Allowed `|Re <z, v>|` (relative to `max(1, |v|)`) for a tangent vector.
pub const TANGENT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum FlowError {
    #[error("weights must be positive and finite, got {0:?}")]
    BadWeights(Vec<f64>),
    #[error("point is not on the unit sphere: |z|^2 = {0}")]
    OffSphere(f64),
    #[error("dimension mismatch: expected {expected} coordinates, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("vector is not tangent to the sphere: Re<z, v> = {0}")]
    NotTangent(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFlow {
    lambda: Vec<f64>,
}

impl WeightedFlow {
    pub fn new(lambda: Vec<f64>) -> Result<Self, FlowError> {
        if lambda.is_empty() || lambda.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
            return Err(FlowError::BadWeights(lambda));
        }
        Ok(WeightedFlow { lambda })
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Complex dimension minus one.
    pub fn n(&self) -> usize {
        self.lambda.len() - 1
    }

    fn check(&self, p: &SpherePoint) -> Result<(), FlowError> {
        if p.z.len() != self.lambda.len() {
            return Err(FlowError::Dimension {
                expected: self.lambda.len(),
                found: p.z.len(),
            });
        }
        Ok(())
    }

    /// `R_lambda(z)`.
    pub fn reeb_field(&self, p: &SpherePoint) -> Vec<Complex64> {
        p.z.iter()
            .zip(&self.lambda)
            .map(|(z, l)| Complex64::i() * *l * z)
            .collect()
    }

    /// `alpha(R_lambda) = sum_j lambda_j |z_j|^2`.
    pub fn denominator(&self, p: &SpherePoint) -> f64 {
        p.z.iter().zip(&self.lambda).map(|(z, l)| l * z.norm_sqr()).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint {
    z: Vec<Complex64>,
}

impl SpherePoint {
    pub fn new(z: Vec<Complex64>) -> Result<Self, FlowError> {
        let r = norm_sqr(&z);
        if (r - 1.0).abs() > SPHERE_TOL {
            return Err(FlowError::OffSphere(r));
        }
        Ok(SpherePoint { z })
    }

    /// Scales `z` onto the sphere.
    pub fn normalized(z: Vec<Complex64>) -> Result<Self, FlowError> {
        let r = norm_sqr(&z).sqrt();
        if !(r.is_finite() && r > 0.0) {
            return Err(FlowError::OffSphere(r * r));
        }
        SpherePoint::new(z.into_iter().map(|c| c / r).collect())
    }

    /// The unit vector `e_j` in `C^dim`.
    pub fn coordinate(dim: usize, j: usize) -> Self {
        let z = (0..dim)
            .map(|k| if k == j { Complex64::one() } else { Complex64::zero() })
            .collect();
        SpherePoint { z }
    }

    /// Uniform on the sphere.
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> Self {
        loop {
            let z: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(p) = SpherePoint::normalized(z) {
                return p;
            }
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.z
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.z.len())
            .filter(|&j| self.z[j].norm() > SUPPORT_TOL)
            .collect()
    }

    /// `R(z) = i z`, the Reeb field of `alpha`.
    pub fn unit_reeb_field(&self) -> Vec<Complex64> {
        self.z.iter().map(|z| Complex64::i() * z).collect()
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        norm_sqr(
            &self
                .z
                .iter()
                .zip(&other.z)
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        )
        .sqrt()
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

/// `sum_j Re(conj(z_j) v_j)`, the radial component of `v` at `z`.
fn radial(p: &SpherePoint, v: &[Complex64]) -> f64 {
    p.z.iter().zip(v).map(|(z, v)| (z.conj() * v).re).sum()
}

/// Removes the radial component, giving a tangent vector at `p`.
pub fn project_tangent(p: &SpherePoint, v: &[Complex64]) -> Vec<Complex64> {
    let r = radial(p, v);
    v.iter().zip(&p.z).map(|(v, z)| v - z * r).collect()
}

/// Closed-form flow `z_j -> exp(i lambda_j t) z_j`.
pub fn flow(w: &WeightedFlow, p: &SpherePoint, t: f64) -> SpherePoint {
    let z = p
        .z
        .iter()
        .zip(&w.lambda)
        .map(|(z, l)| Complex64::from_polar(1.0, l * t) * z)
        .collect();
    SpherePoint { z }
}

/// Differential of the time-`t` flow applied to `v`.
pub fn flow_differential(w: &WeightedFlow, t: f64, v: &[Complex64]) -> Vec<Complex64> {
    v.iter()
        .zip(&w.lambda)
        .map(|(v, l)| Complex64::from_polar(1.0, l * t) * v)
        .collect()
}

fn alpha_raw(p: &SpherePoint, v: &[Complex64]) -> f64 {
    p.z.iter().zip(v).map(|(z, v)| (z.conj() * v).im).sum()
}

fn check_tangent(p: &SpherePoint, v: &[Complex64]) -> Result<(), FlowError> {
    if v.len() != p.z.len() {
        return Err(FlowError::Dimension {
            expected: p.z.len(),
            found: v.len(),
        });
    }
    let r = radial(p, v);
    let scale = norm_sqr(v).sqrt().max(1.0);
    if r.abs() > TANGENT_TOL * scale {
        return Err(FlowError::NotTangent(r));
    }
    Ok(())
}

/// `alpha_p(v) = sum_j (x_j b_j - y_j a_j)` for `z_j = x_j + i y_j`, `v_j = a_j + i b_j`.
pub fn alpha_eval(p: &SpherePoint, v: &[Complex64]) -> Result<f64, FlowError> {
    check_tangent(p, v)?;
    Ok(alpha_raw(p, v))
}

/// `alpha'_p(v) = alpha_p(v) / sum_j lambda_j |z_j|^2`.
pub fn alpha_prime_eval(w: &WeightedFlow, p: &SpherePoint, v: &[Complex64]) -> Result<f64, FlowError> {
    w.check(p)?;
    Ok(alpha_eval(p, v)? / w.denominator(p))
}

/// Generator of the `j`-th coordinate circle, `X_j(z) = i z_j e_j`.
pub fn coordinate_generator(p: &SpherePoint, j: usize) -> Vec<Complex64> {
    (0..p.z.len())
        .map(|k| if k == j { Complex64::i() * p.z[j] } else { Complex64::zero() })
        .collect()
}

/// Convergent `p/q` of the continued fraction of `r >= 0` with the largest
/// `q <= max_denom`.
pub fn best_approximation(r: &BigRational, max_denom: &BigInt) -> (BigInt, BigInt) {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut x = r.clone();
    loop {
        let a = x.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if &k2 > max_denom {
            break;
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let frac = &x - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    (h1, k1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Closure {
    pub support: Vec<usize>,
    pub closed: bool,
    pub period: Option<f64>,
}

/// Decides whether the orbit through `p` closes up.
///
/// With `r = lambda_ref` the first support weight, the orbit is closed when
/// every ratio `lambda_j / r` over the support has a continued-fraction
/// convergent `p_j / q_j` with `q_j <= max_denom` and `|q_j lambda_j / r - p_j| <= tol`.
/// The ratios are expanded from the exact binary values of the doubles. The
/// period is then `2 pi L / (r g)` with `L = lcm(q_j)` and
/// `g = gcd(p_j L / q_j)`.
pub fn orbit_closure(w: &WeightedFlow, p: &SpherePoint, max_denom: u64, tol: f64) -> Closure {
    let support = p.support();
    let Some(&reference) = support.first() else {
        return Closure {
            support,
            closed: false,
            period: None,
        };
    };
    let lam_ref = w.lambda[reference];
    let q_max = BigInt::from(max_denom);
    let mut fractions = Vec::with_capacity(support.len());
    for &j in &support {
        let ratio = w.lambda[j] / lam_ref;
        let exact = BigRational::from_float(ratio).expect("finite ratio");
        let (pj, qj) = best_approximation(&exact, &q_max);
        if qj.is_zero() {
            return Closure { support, closed: false, period: None };
        }
        let err = (BigRational::from_integer(qj.clone()) * &exact - BigRational::from_integer(pj.clone())).abs();
        if err.to_f64().unwrap_or(f64::INFINITY) > tol || !pj.is_positive() {
            return Closure { support, closed: false, period: None };
        }
        fractions.push((pj, qj));
    }
    let lcm = fractions
        .iter()
        .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q));
    let gcd = fractions
        .iter()
        .fold(BigInt::zero(), |acc, (p, q)| acc.gcd(&(p * &lcm / q)));
    let ratio = BigRational::new(lcm, gcd).to_f64().unwrap_or(f64::NAN);
    Closure {
        support,
        closed: true,
        period: Some(TAU * ratio / lam_ref),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureCensus {
    /// Closure of the orbit through each coordinate point `e_j`.
    pub coordinate: Vec<Closure>,
    pub random_points: usize,
    pub random_closed: usize,
    /// Closed orbits found: closed coordinate circles plus closed random orbits.
    pub closed_orbits: usize,
}

/// Closure over every coordinate point and `random_points` full-support points.
pub fn closure_census(
    w: &WeightedFlow,
    random_points: usize,
    seed: u64,
    max_denom: u64,
    tol: f64,
) -> ClosureCensus {
    let dim = w.lambda.len();
    let coordinate: Vec<Closure> = (0..dim)
        .map(|j| orbit_closure(w, &SpherePoint::coordinate(dim, j), max_denom, tol))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_closed = 0;
    let mut drawn = 0;
    while drawn < random_points {
        let p = SpherePoint::random(dim, &mut rng);
        if p.support().len() != dim {
            continue;
        }
        drawn += 1;
        if orbit_closure(w, &p, max_denom, tol).closed {
            random_closed += 1;
        }
    }
    let closed_coordinates = coordinate.iter().filter(|c| c.closed).count();
    ClosureCensus {
        coordinate,
        random_points,
        random_closed,
        closed_orbits: closed_coordinates + random_closed,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// `max |alpha'(R_lambda) - 1|`.
    pub reeb_normalization: f64,
    /// `max |alpha'_{flow_t(p)}(d flow_t v) - alpha'_p(v)|`.
    pub pullback: f64,
    /// `max |alpha(X_j) - |z_j|^2|` over all `j`.
    pub lift: f64,
    /// `max |alpha(X_j - alpha(X_j) R)|` over all `j`.
    pub horizontal: f64,
    /// `max | |flow_t(p)|^2 - 1 |`.
    pub norm: f64,
    pub passed: bool,
}

/// Samples points, tangent vectors and times `t` in `[0, 1000)` and records
/// the largest deviation of each identity.
pub fn verify_invariance(w: &WeightedFlow, samples: usize, seed: u64, tol: f64) -> InvarianceReport {
    let dim = w.lambda.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = InvarianceReport {
        samples,
        seed,
        tol,
        reeb_normalization: 0.0,
        pullback: 0.0,
        lift: 0.0,
        horizontal: 0.0,
        norm: 0.0,
        passed: true,
    };
    for _ in 0..samples {
        let p = SpherePoint::random(dim, &mut rng);
        let raw: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let v = project_tangent(&p, &raw);
        let t: f64 = rng.random_range(0.0..1000.0);

        let r = w.reeb_field(&p);
        let a = alpha_raw(&p, &r) / w.denominator(&p);
        report.reeb_normalization = report.reeb_normalization.max((a - 1.0).abs());

        let q = flow(w, &p, t);
        let before = alpha_raw(&p, &v) / w.denominator(&p);
        let after = alpha_raw(&q, &flow_differential(w, t, &v)) / w.denominator(&q);
        report.pullback = report.pullback.max((after - before).abs());
        report.norm = report.norm.max((norm_sqr(&q.z) - 1.0).abs());

        let reeb = p.unit_reeb_field();
        for j in 0..dim {
            let x = coordinate_generator(&p, j);
            let phi = alpha_raw(&p, &x);
            report.lift = report.lift.max((phi - p.z[j].norm_sqr()).abs());
            let horizontal: Vec<Complex64> = x.iter().zip(&reeb).map(|(x, r)| x - r * phi).collect();
            report.horizontal = report.horizontal.max(alpha_raw(&p, &horizontal).abs());
        }
    }
    report.passed = [
        report.reeb_normalization,
        report.pullback,
        report.lift,
        report.horizontal,
    ]
    .iter()
    .all(|&d| d <= tol);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn half() -> SpherePoint {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        SpherePoint::new(vec![c(s, 0.0), c(s, 0.0)]).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(WeightedFlow::new(vec![1.0, 0.0]).is_err());
        assert!(WeightedFlow::new(vec![]).is_err());
        assert!(SpherePoint::new(vec![c(1.0, 1.0)]).is_err());
        let p = SpherePoint::coordinate(2, 0);
        assert!(matches!(
            alpha_eval(&p, &[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(FlowError::NotTangent(_))
        ));
    }

    #[test]
    fn periodic_flows_return() {
        let w = WeightedFlow::new(vec![1.0, 1.0]).unwrap();
        let p = SpherePoint::normalized(vec![c(0.3, -0.2), c(0.5, 0.7)]).unwrap();
        assert!(flow(&w, &p, TAU).distance(&p) < 1e-12);
        let w = WeightedFlow::new(vec![1.0, 2.0]).unwrap();
        assert!(flow(&w, &half(), TAU).distance(&half()) < 1e-12);
    }

    #[test]
    fn alpha_values() {
        let w = WeightedFlow::new(vec![2.0, 5.0]).unwrap();
        let p = SpherePoint::normalized(vec![c(0.3, -0.2), c(0.5, 0.7)]).unwrap();
        assert!((alpha_eval(&p, &p.unit_reeb_field()).unwrap() - 1.0).abs() < 1e-15);
        assert!((alpha_prime_eval(&w, &p, &w.reeb_field(&p)).unwrap() - 1.0).abs() < 1e-15);
        let e1 = SpherePoint::coordinate(2, 0);
        assert!((alpha_eval(&e1, &w.reeb_field(&e1)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn convergents() {
        let r = BigRational::from_float(std::f64::consts::SQRT_2).unwrap();
        assert_eq!(
            best_approximation(&r, &BigInt::from(100)),
            (BigInt::from(99), BigInt::from(70))
        );
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(best_approximation(&third, &BigInt::from(10)), (1.into(), 3.into()));
        let two = BigRational::from_integer(2.into());
        assert_eq!(best_approximation(&two, &BigInt::from(1)), (2.into(), 1.into()));
    }

    #[test]
    fn closure_predicate() {
        let w = WeightedFlow::new(vec![1.0, 2.0]).unwrap();
        let cl = orbit_closure(&w, &half(), 1_000_000, 1e-9);
        assert!(cl.closed);
        assert!((cl.period.unwrap() - TAU).abs() < 1e-12);

        let w = WeightedFlow::new(vec![1.0, std::f64::consts::SQRT_2]).unwrap();
        assert!(!orbit_closure(&w, &half(), 1_000_000, 1e-9).closed);
        let e2 = orbit_closure(&w, &SpherePoint::coordinate(2, 1), 1_000_000, 1e-9);
        assert!(e2.closed);
        assert!((e2.period.unwrap() - TAU / std::f64::consts::SQRT_2).abs() < 1e-12);

        // lambda = (2, 3): phases close after 2 pi
        let w = WeightedFlow::new(vec![2.0, 3.0]).unwrap();
        let cl = orbit_closure(&w, &half(), 100, 1e-9);
        assert!((cl.period.unwrap() - TAU).abs() < 1e-12);
        // lambda = (4, 6): after pi
        let w = WeightedFlow::new(vec![4.0, 6.0]).unwrap();
        let cl = orbit_closure(&w, &half(), 100, 1e-9);
        assert!((cl.period.unwrap() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn census_of_independent_weights() {
        let w = WeightedFlow::new(vec![1.0, 2f64.sqrt(), 3f64.sqrt()]).unwrap();
        let census = closure_census(&w, 100, 7, 1000, 1e-9);
        assert_eq!(census.closed_orbits, 3);
        assert_eq!(census.random_closed, 0);
    }

    #[test]
    fn invariance_report_is_tight() {
        let w = WeightedFlow::new(vec![1.0, 2.5, 0.7]).unwrap();
        let r = verify_invariance(&w, 200, 1, 1e-10);
        assert!(r.passed, "{r:?}");
        assert!(r.reeb_normalization <= 1e-12);
    }

    #[test]
    fn lift_at_a_fixed_point() {
        let p = SpherePoint::coordinate(3, 0);
        let x = coordinate_generator(&p, 0);
        assert!((alpha_raw(&p, &x) - 1.0).abs() < 1e-15);
        let h: Vec<Complex64> = x.iter().zip(p.unit_reeb_field()).map(|(a, b)| a - b).collect();
        assert!(norm_sqr(&h) == 0.0);
    }
}
