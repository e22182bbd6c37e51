//! Closed Reeb orbits of perturbed contact forms on a circle bundle over a
//! Hamiltonian torus manifold.
//!
//! A Reeb direction `xi = (xi_1, xi_2)` in `t x R` has speed
//! `phi^{xi_1}(p) + xi_2` over each fixed point `p`. When every speed is
//! positive, `xi_1` pairs nonzero with every isotropy weight, and the flow of
//! `xi` is not periodic, the closed orbits are exactly the fibers over the
//! fixed points.

mod lll;
pub mod relations;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::int_linalg::{rank, IntMatrix};
use crate::numeric::{parse_real, to_f64, NumericError};
pub use relations::{integer_relations, is_relation, search_relations, RelationSearch};

/// Default tolerance for the relation search; well below the smallest
/// `|<c, v>|` a relation-free vector can reach with entries up to `10^6` in
/// five or six components.
pub const DEFAULT_RELATION_TOL: &str = "1e-50";

pub fn default_relation_tol() -> BigRational {
    parse_real(DEFAULT_RELATION_TOL).expect("valid literal")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MomentError {
    #[error("moment data syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("base dimension must be even and positive, got {0}")]
    BadDimension(usize),
    #[error("torus rank {l} must satisfy 1 <= l <= n = {n}")]
    TorusRank { l: usize, n: usize },
    #[error("no fixed points")]
    NoFixedPoints,
    #[error("duplicate fixed point name {0:?}")]
    DuplicateName(String),
    #[error("fixed point {name:?}: moment has {found} entries, expected {expected}")]
    MomentLength {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("fixed point {name:?}: weight of length {found}, expected {expected}")]
    WeightLength {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("fixed point {name:?}: zero weight")]
    ZeroWeight { name: String },
    #[error("fixed point {name:?}: {found} weights exceed n = {n}")]
    TooManyWeights { name: String, n: usize, found: usize },
    #[error("{count} isolated fixed points, a Hamiltonian action needs at least {required}")]
    TooFewFixedPoints { count: usize, required: usize },
    #[error("fixed point {name:?}: {source}")]
    Moment {
        name: String,
        #[source]
        source: NumericError,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub name: String,
    pub moment: Vec<BigRational>,
    pub weights: Vec<Vec<i64>>,
}

impl FixedPoint {
    pub fn is_isolated(&self, n: usize) -> bool {
        self.weights.len() == n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentData {
    torus_rank: usize,
    base_dim: usize,
    fixed_points: Vec<FixedPoint>,
}

impl MomentData {
    pub fn new(
        torus_rank: usize,
        base_dim: usize,
        fixed_points: Vec<FixedPoint>,
    ) -> Result<Self, MomentError> {
        if base_dim == 0 || base_dim % 2 == 1 {
            return Err(MomentError::BadDimension(base_dim));
        }
        let n = base_dim / 2;
        if torus_rank == 0 || torus_rank > n {
            return Err(MomentError::TorusRank { l: torus_rank, n });
        }
        if fixed_points.is_empty() {
            return Err(MomentError::NoFixedPoints);
        }
        let mut names = BTreeSet::new();
        for p in &fixed_points {
            if !names.insert(p.name.as_str()) {
                return Err(MomentError::DuplicateName(p.name.clone()));
            }
            if p.moment.len() != torus_rank {
                return Err(MomentError::MomentLength {
                    name: p.name.clone(),
                    expected: torus_rank,
                    found: p.moment.len(),
                });
            }
            if p.weights.len() > n {
                return Err(MomentError::TooManyWeights {
                    name: p.name.clone(),
                    n,
                    found: p.weights.len(),
                });
            }
            for w in &p.weights {
                if w.len() != torus_rank {
                    return Err(MomentError::WeightLength {
                        name: p.name.clone(),
                        expected: torus_rank,
                        found: w.len(),
                    });
                }
                if w.iter().all(|&x| x == 0) {
                    return Err(MomentError::ZeroWeight {
                        name: p.name.clone(),
                    });
                }
            }
        }
        if fixed_points.iter().all(|p| p.is_isolated(n)) && fixed_points.len() < n + 1 {
            return Err(MomentError::TooFewFixedPoints {
                count: fixed_points.len(),
                required: n + 1,
            });
        }
        Ok(MomentData {
            torus_rank,
            base_dim,
            fixed_points,
        })
    }

    /// Toric data of `CP^n` with the standard `T^n` action: vertices `0` and
    /// `e_i` of the unit simplex.
    pub fn projective(n: usize) -> Self {
        let unit = |i: usize| -> Vec<i64> { (0..n).map(|j| i64::from(j == i)).collect() };
        let mut points = vec![FixedPoint {
            name: "p0".into(),
            moment: vec![BigRational::zero(); n],
            weights: (0..n).map(unit).collect(),
        }];
        for i in 0..n {
            let ei = unit(i);
            let weights = (0..n)
                .map(|j| {
                    if j == i {
                        ei.iter().map(|x| -x).collect()
                    } else {
                        unit(j).iter().zip(&ei).map(|(a, b)| a - b).collect()
                    }
                })
                .collect();
            points.push(FixedPoint {
                name: format!("p{}", i + 1),
                moment: ei.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
                weights,
            });
        }
        MomentData::new(n, 2 * n, points).expect("simplex data is valid")
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn n(&self) -> usize {
        self.base_dim / 2
    }

    pub fn fixed_points(&self) -> &[FixedPoint] {
        &self.fixed_points
    }

    pub fn weights(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.fixed_points.iter().flat_map(|p| p.weights.iter())
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .fixed_points
            .iter()
            .map(|p| {
                json!({
                    "name": p.name,
                    "moment": p.moment.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "weights": p.weights,
                })
            })
            .collect();
        json!({
            "torus_rank": self.torus_rank,
            "base_dim": self.base_dim,
            "fixed_points": points,
        })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalLit {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointSpec {
    name: String,
    moment: Vec<RationalLit>,
    weights: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentFile {
    torus_rank: usize,
    base_dim: usize,
    fixed_points: Vec<PointSpec>,
}

pub fn parse_moment_data(source: &str) -> Result<MomentData, MomentError> {
    let file: MomentFile = serde_json::from_str(source).map_err(|e| MomentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut points = Vec::with_capacity(file.fixed_points.len());
    for p in file.fixed_points {
        let moment = p
            .moment
            .into_iter()
            .map(|m| match m {
                RationalLit::Int(i) => Ok(BigRational::from_integer(i.into())),
                RationalLit::Str(s) => parse_real(&s),
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|source| MomentError::Moment {
                name: p.name.clone(),
                source,
            })?;
        points.push(FixedPoint {
            name: p.name,
            moment,
            weights: p.weights,
        });
    }
    MomentData::new(file.torus_rank, file.base_dim, points)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum XiError {
    #[error("expected \"x1,...,xl;x2\", got {0:?}")]
    Format(String),
    #[error(transparent)]
    Number(#[from] NumericError),
}

/// `xi = (xi_1, xi_2)` with `xi_1` in the Lie algebra of the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebParameter {
    pub xi1: Vec<BigRational>,
    pub xi2: BigRational,
}

impl ReebParameter {
    pub fn new(xi1: Vec<BigRational>, xi2: BigRational) -> Self {
        ReebParameter { xi1, xi2 }
    }

    /// Parses `"a,b,...;c"`; entries accept any [`parse_real`] literal.
    pub fn parse(s: &str) -> Result<Self, XiError> {
        let (left, right) = s.split_once(';').ok_or_else(|| XiError::Format(s.into()))?;
        if left.trim().is_empty() || right.contains(';') {
            return Err(XiError::Format(s.into()));
        }
        let xi1 = left
            .split(',')
            .map(parse_real)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ReebParameter {
            xi1,
            xi2: parse_real(right)?,
        })
    }

    /// `(xi_1, xi_2)` as one vector.
    pub fn components(&self) -> Vec<BigRational> {
        let mut v = self.xi1.clone();
        v.push(self.xi2.clone());
        v
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        ReebParameter {
            xi1: self.xi1.iter().map(|x| x * c).collect(),
            xi2: &self.xi2 * c,
        }
    }

    /// `phi^{xi_1}(p) + xi_2`.
    pub fn speed_at(&self, p: &FixedPoint) -> BigRational {
        p.moment
            .iter()
            .zip(&self.xi1)
            .fold(self.xi2.clone(), |acc, (m, x)| acc + m * x)
    }
}

impl fmt::Display for ReebParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.xi1.iter().map(ToString::to_string).collect();
        write!(f, "{};{}", xs.join(","), self.xi2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterCheck {
    pub positive: bool,
    pub weight_generic: bool,
    pub closure_rank: usize,
    /// Whether the relation search certified that no further bounded
    /// relation exists.
    pub closure_certified: bool,
    pub relations: Vec<Vec<BigInt>>,
    pub min_speed: BigRational,
    /// First fixed point attaining the minimal speed.
    pub min_speed_point: String,
    /// First (fixed point, weight) pairing to within the tolerance of zero.
    pub degenerate_weight: Option<(String, Vec<i64>)>,
    pub bound: u64,
    pub tol: BigRational,
}

impl ParameterCheck {
    pub fn accepted(&self) -> bool {
        self.positive && self.weight_generic && self.closure_rank >= 2
    }

    pub fn to_json(&self) -> Value {
        json!({
            "positive": self.positive,
            "weight_generic": self.weight_generic,
            "closure_rank": self.closure_rank,
            "closure_certified": self.closure_certified,
            "relations": self
                .relations
                .iter()
                .map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "min_speed": to_f64(&self.min_speed),
            "min_speed_point": self.min_speed_point,
            "degenerate_weight": self.degenerate_weight.as_ref().map(|(n, w)| json!({"point": n, "weight": w})),
            "bound": self.bound,
            "tol": to_f64(&self.tol),
        })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ReebError {
    #[error("xi_1 has {found} entries, torus rank is {expected}")]
    XiLength { expected: usize, found: usize },
    #[error("xi is zero")]
    XiZero,
    #[error("relation tolerance must be positive")]
    Tolerance,
    #[error("parameter rejected: speed {speed} at {point} is not positive")]
    NotPositive { point: String, speed: f64 },
    #[error("parameter rejected: xi_1 pairs to zero with weight {weight:?} at {point}")]
    NotGeneric { point: String, weight: Vec<i64> },
    #[error("parameter rejected: closure rank {rank} < 2, the Reeb flow is periodic")]
    Periodic { rank: usize },
    #[error("census has {found} orbits, fewer than n+1 = {required}")]
    TooFewOrbits { found: usize, required: usize },
    #[error("subtorus rank {k} must satisfy 1 <= k <= {l}")]
    SubtorusRank { k: usize, l: usize },
    #[error("no vector in [-{bound}, {bound}]^l avoids every weight hyperplane")]
    SearchExhausted { bound: u64 },
}

fn pairing(w: &[i64], x: &[BigRational]) -> BigRational {
    w.iter()
        .zip(x)
        .fold(BigRational::zero(), |acc, (&a, b)| acc + b * BigInt::from(a))
}

/// Positivity at the fixed points (the moment image is their convex hull, and
/// the speed is affine on it), weight genericity, and closure rank
/// `(l + 1) - #relations`.
pub fn check_reeb_parameter(
    d: &MomentData,
    xi: &ReebParameter,
    bound: u64,
    tol: &BigRational,
) -> Result<ParameterCheck, ReebError> {
    if xi.xi1.len() != d.torus_rank() {
        return Err(ReebError::XiLength {
            expected: d.torus_rank(),
            found: xi.xi1.len(),
        });
    }
    let components = xi.components();
    if components.iter().all(Zero::is_zero) {
        return Err(ReebError::XiZero);
    }
    if !tol.is_positive() {
        return Err(ReebError::Tolerance);
    }

    let (min_speed_point, min_speed) = d
        .fixed_points()
        .iter()
        .map(|p| (p.name.clone(), xi.speed_at(p)))
        .reduce(|best, cur| if cur.1 < best.1 { cur } else { best })
        .expect("moment data has fixed points");

    let degenerate_weight = d.fixed_points().iter().find_map(|p| {
        p.weights
            .iter()
            .find(|w| pairing(w, &xi.xi1).abs() <= *tol)
            .map(|w| (p.name.clone(), w.clone()))
    });

    let search = search_relations(&components, bound, tol);
    Ok(ParameterCheck {
        positive: min_speed.is_positive(),
        weight_generic: degenerate_weight.is_none(),
        closure_rank: components.len() - search.relations.len(),
        closure_certified: search.certified,
        relations: search.relations,
        min_speed,
        min_speed_point,
        degenerate_weight,
        bound,
        tol: tol.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedOrbit {
    pub fixed_point_name: String,
    pub speed: BigRational,
}

impl ClosedOrbit {
    /// Fiber period is normalized to one.
    pub fn period(&self) -> BigRational {
        self.speed.recip()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.fixed_point_name,
            "speed": to_f64(&self.speed),
            "period": to_f64(&self.period()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub check: ParameterCheck,
    pub orbits: Vec<ClosedOrbit>,
}

impl Census {
    pub fn to_json(&self) -> Value {
        json!({
            "parameter_check": self.check.to_json(),
            "orbit_count": self.orbits.len(),
            "orbits": self.orbits.iter().map(ClosedOrbit::to_json).collect::<Vec<_>>(),
        })
    }
}

fn rejection(check: &ParameterCheck) -> Option<ReebError> {
    if !check.positive {
        return Some(ReebError::NotPositive {
            point: check.min_speed_point.clone(),
            speed: to_f64(&check.min_speed),
        });
    }
    if let Some((point, weight)) = &check.degenerate_weight {
        return Some(ReebError::NotGeneric {
            point: point.clone(),
            weight: weight.clone(),
        });
    }
    if check.closure_rank < 2 {
        return Some(ReebError::Periodic {
            rank: check.closure_rank,
        });
    }
    None
}

/// One closed orbit per fixed point, in input order. On rejection the error
/// names the first failed check; the full record is available from
/// [`check_reeb_parameter`].
pub fn closed_orbit_census(
    d: &MomentData,
    xi: &ReebParameter,
    bound: u64,
    tol: &BigRational,
) -> Result<Census, ReebError> {
    let check = check_reeb_parameter(d, xi, bound, tol)?;
    if let Some(e) = rejection(&check) {
        return Err(e);
    }
    let orbits: Vec<ClosedOrbit> = d
        .fixed_points()
        .iter()
        .map(|p| ClosedOrbit {
            fixed_point_name: p.name.clone(),
            speed: xi.speed_at(p),
        })
        .collect();
    if orbits.len() < d.n() + 1 {
        return Err(ReebError::TooFewOrbits {
            found: orbits.len(),
            required: d.n() + 1,
        });
    }
    Ok(Census { check, orbits })
}

fn avoids_all(d: &MomentData, v: &[i64]) -> bool {
    d.weights()
        .all(|w| w.iter().zip(v).map(|(a, b)| a * b).sum::<i64>() != 0)
}

/// Vectors of `[-r, r]^l` with max-norm exactly `r`, lexicographic.
fn shell(l: usize, r: i64, nonnegative: bool) -> impl Iterator<Item = Vec<i64>> {
    let lo = if nonnegative { 0 } else { -r };
    let width = (r - lo + 1) as u64;
    let total = width.pow(l as u32);
    (0..total).filter_map(move |mut idx| {
        let mut v = vec![0i64; l];
        for slot in v.iter_mut().rev() {
            *slot = lo + (idx % width) as i64;
            idx /= width;
        }
        let is_shell = v.iter().any(|x| x.abs() == r);
        let fresh = nonnegative || v.iter().any(|&x| x < 0);
        (is_shell && fresh).then_some(v)
    })
}

/// A rank-`k` family whose first vector pairs nonzero with every weight, so
/// the circle it generates has the same fixed points as the whole torus.
///
/// The search visits nonnegative vectors of `[0, B]^l` by increasing max-norm,
/// then the rest of `[-B, B]^l` the same way. The family is completed by
/// standard basis vectors.
pub fn subtorus_same_fixed_set(
    d: &MomentData,
    k: usize,
    bound: u64,
) -> Result<Vec<Vec<i64>>, ReebError> {
    let l = d.torus_rank();
    if k == 0 || k > l {
        return Err(ReebError::SubtorusRank { k, l });
    }
    let b = bound as i64;
    let first = [true, false]
        .into_iter()
        .flat_map(|nonneg| (1..=b).flat_map(move |r| shell(l, r, nonneg)))
        .find(|v| avoids_all(d, v))
        .ok_or(ReebError::SearchExhausted { bound })?;

    let mut family = vec![first];
    for i in 0..l {
        if family.len() == k {
            break;
        }
        let e: Vec<i64> = (0..l).map(|j| i64::from(j == i)).collect();
        let mut trial = family.clone();
        trial.push(e);
        let m = IntMatrix::from_rows(trial.clone(), l).expect("rows have length l");
        if rank(&m) == trial.len() {
            family = trial;
        }
    }
    Ok(family)
}
