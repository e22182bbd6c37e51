mod common;

use std::f64::consts::TAU;

use kcontact_core::sphere_flow::{
    alpha_eval, alpha_prime_eval, flow, orbit_closure, project_tangent, SpherePoint, WeightedFlow,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_flow(rng: &mut ChaCha8Rng) -> WeightedFlow {
    let dim = rng.random_range(2..=5usize);
    WeightedFlow::new((0..dim).map(|_| rng.random_range(0.1..8.0)).collect()).unwrap()
}

fn norm(p: &SpherePoint) -> f64 {
    p.coords().iter().map(Complex64::norm_sqr).sum::<f64>()
}

#[test]
fn flow_stays_on_the_sphere() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let w = random_flow(&mut rng);
        let p = SpherePoint::random(w.lambda().len(), &mut rng);
        let t = rng.random_range(-100.0..100.0);
        assert!((norm(&flow(&w, &p, t)) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn flow_is_a_one_parameter_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let w = random_flow(&mut rng);
        let p = SpherePoint::random(w.lambda().len(), &mut rng);
        let (s, t) = (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        let composed = flow(&w, &flow(&w, &p, s), t);
        assert!(composed.distance(&flow(&w, &p, s + t)) < 1e-12);
        assert!(flow(&w, &flow(&w, &p, t), -t).distance(&p) < 1e-12);
    }
}

#[test]
fn closed_form_agrees_with_rk4() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let w = random_flow(&mut rng);
        let p = SpherePoint::random(w.lambda().len(), &mut rng);
        let t = rng.random_range(0.0..3.0);
        let start: Vec<(f64, f64)> = p.coords().iter().map(|z| (z.re, z.im)).collect();
        let numeric = common::rk4_flow(w.lambda(), &start, t, 4000);
        let exact = flow(&w, &p, t);
        for (z, (x, y)) in exact.coords().iter().zip(numeric) {
            assert!((z.re - x).abs() < 1e-9 && (z.im - y).abs() < 1e-9);
        }
    }
}

#[test]
fn rational_weights_recur_with_the_predicted_period() {
    let cases: [(&[f64], f64); 4] = [
        (&[1.0, 2.0], TAU),
        (&[2.0, 3.0], TAU),
        (&[2.0, 4.0], TAU / 2.0),
        (&[1.5, 2.5, 3.5], 2.0 * TAU),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (lambda, period) in cases {
        let w = WeightedFlow::new(lambda.to_vec()).unwrap();
        let p = SpherePoint::random(lambda.len(), &mut rng);
        let c = orbit_closure(&w, &p, 1000, 1e-9);
        let got = c.period.unwrap_or_else(|| panic!("{lambda:?} not closed"));
        assert!((got - period).abs() < 1e-12, "{lambda:?}: {got} vs {period}");
        assert!(flow(&w, &p, got).distance(&p) < 1e-9);
        assert!(flow(&w, &p, got / 2.0).distance(&p) > 1e-3 || lambda.len() == 1);
    }
}

#[test]
fn coordinate_orbits_close_after_their_own_period() {
    let w = WeightedFlow::new(vec![1.0, 2f64.sqrt(), 3f64.sqrt()]).unwrap();
    for j in 0..3 {
        let p = SpherePoint::coordinate(3, j);
        let c = orbit_closure(&w, &p, 1_000_000, 1e-9);
        assert_eq!(c.support, vec![j]);
        let period = c.period.unwrap();
        assert!((period - TAU / w.lambda()[j]).abs() < 1e-12);
        assert!(flow(&w, &p, period).distance(&p) < 1e-12);
    }
}

#[test]
fn reeb_field_is_tangent_and_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let w = random_flow(&mut rng);
        let p = SpherePoint::random(w.lambda().len(), &mut rng);
        let r = w.reeb_field(&p);
        assert!((alpha_eval(&p, &r).unwrap() - w.denominator(&p)).abs() < 1e-12);
        assert!((alpha_prime_eval(&w, &p, &r).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn alpha_rejects_radial_vectors() {
    let p = SpherePoint::coordinate(2, 0);
    let radial = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    assert!(alpha_eval(&p, &radial).is_err());
    let tangent = project_tangent(&p, &radial);
    assert_eq!(alpha_eval(&p, &tangent).unwrap(), 0.0);
}
