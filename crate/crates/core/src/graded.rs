//! Cohomology presentations of the base manifold.
//!
//! A [`CupPresentation`] records, for a closed manifold `N` of dimension `2n`,
//! the groups `H^k(N; Z)` for `0 <= k <= 2n` together with integer matrices
//! for cup product with the Euler class `x` on the free parts, in fixed
//! ordered bases. Presentations are read from a small JSON "ring file"
//! format, or built from the a-sequence shorthand for rings freely generated
//! by `1, x, x^2/a_2, ..., x^n/a_n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::int_linalg::{AbelianGroupInvariants, IntMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dimension {0} is not a nonnegative even integer")]
    BadDimension(i64),
    #[error("degree key {0:?} is not a nonnegative integer")]
    BadDegreeKey(String),
    #[error("degree {degree} is outside [0, {dim}]")]
    DegreeOutOfRange { degree: usize, dim: usize },
    #[error("negative rank {rank} in degree {degree}")]
    NegativeRank { degree: usize, rank: i64 },
    #[error("torsion order {value} in degree {degree} must be a positive integer")]
    InvalidTorsion { degree: usize, value: BigInt },
    #[error("integer literal {0:?} is not valid")]
    BadInteger(String),
    #[error(
        "dimension mismatch for cup_x in degree {degree}: expected {}x{}, found {}x{}",
        expected.0, expected.1, found.0, found.1
    )]
    DimensionMismatch {
        degree: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("ragged cup_x matrix in degree {degree}")]
    RaggedMatrix { degree: usize },
    #[error("cup_x is missing in degree {degree} (both H^{degree} and H^{} have free parts)", degree + 2)]
    MissingCupMap { degree: usize },
    #[error("euler_class has {found} coordinates, but H^2 has free rank {expected}")]
    EulerClassLength { expected: usize, found: usize },
    #[error("euler_class is required unless a_sequence is given")]
    MissingEulerClass,
    #[error("cup product with x on the generator of H^0 must equal the Euler class")]
    EulerClassMismatch,
    #[error("unsupported torsion interaction in degree {degree}: torsion meets a nonzero cup map")]
    TorsionInteraction { degree: usize },
    #[error("labels in degree {degree}: expected {expected} names, found {found}")]
    LabelCount {
        degree: usize,
        expected: usize,
        found: usize,
    },
    #[error("a_sequence cannot be combined with groups or cup_x")]
    MixedASequence,
    #[error("groups are required unless a_sequence is given")]
    MissingGroups,
    #[error("a_sequence of length {len} does not match dim {dim}")]
    ASequenceLength { len: usize, dim: usize },
    #[error(transparent)]
    ASequence(#[from] ASequenceError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ASequenceError {
    #[error("a-sequence is empty")]
    Empty,
    #[error("a-sequence must start with a_0 = a_1 = 1")]
    LeadingTerms,
    #[error("a-sequence entries must be positive (index {0})")]
    NonPositive(usize),
    #[error("a_{k} = {lower} does not divide a_{} = {upper}; supply explicit cup matrices", k + 1)]
    NotDivisible { k: usize, lower: u64, upper: u64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("the zero vector has no primitivity")]
pub struct ZeroVectorError;

/// Per-degree finitely generated abelian groups; absent degrees are zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedAbelianGroup {
    pub top_degree: usize,
    groups: BTreeMap<usize, AbelianGroupInvariants>,
}

impl GradedAbelianGroup {
    pub fn new(top_degree: usize) -> Self {
        Self {
            top_degree,
            groups: BTreeMap::new(),
        }
    }

    /// Sets `H^degree`. Panics if `degree > top_degree`.
    pub fn set(&mut self, degree: usize, group: AbelianGroupInvariants) {
        assert!(degree <= self.top_degree, "degree {degree} above top degree");
        if group.is_zero() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, group);
        }
    }

    pub fn get(&self, degree: usize) -> AbelianGroupInvariants {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    pub fn free_rank(&self, degree: usize) -> usize {
        self.groups.get(&degree).map_or(0, |g| g.free_rank)
    }

    pub fn has_torsion(&self, degree: usize) -> bool {
        self.groups.get(&degree).is_some_and(|g| g.has_torsion())
    }

    /// Nonzero degrees in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &AbelianGroupInvariants)> {
        self.groups.iter().map(|(k, g)| (*k, g))
    }

    pub fn free_ranks(&self) -> Vec<usize> {
        (0..=self.top_degree).map(|k| self.free_rank(k)).collect()
    }
}

/// Base cohomology data: groups of `N`, cup product with `x` on free parts,
/// and the coordinates of `x` in the chosen basis of `H^2`.
///
/// `cup_x[k]` is the matrix of `H^k -> H^{k+2}`, of shape
/// `free_rank(k+2) x free_rank(k)`; it is stored for every `0 <= k <= dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupPresentation {
    dim: usize,
    groups: GradedAbelianGroup,
    cup_x: Vec<IntMatrix>,
    euler_class: Vec<BigInt>,
    labels: BTreeMap<usize, Vec<String>>,
}

impl CupPresentation {
    /// Validates and assembles a presentation. Cup maps not given are taken
    /// to be empty when one side has no free part; otherwise they are
    /// required.
    pub fn new(
        dim: usize,
        groups: GradedAbelianGroup,
        cup_x: BTreeMap<usize, IntMatrix>,
        euler_class: Vec<BigInt>,
        labels: BTreeMap<usize, Vec<String>>,
    ) -> Result<Self, PresentationError> {
        if dim % 2 != 0 {
            return Err(PresentationError::BadDimension(dim as i64));
        }
        let mut groups = groups;
        groups.top_degree = dim;
        if let Some((&degree, _)) = groups.groups.range(dim + 1..).next() {
            return Err(PresentationError::DegreeOutOfRange { degree, dim });
        }
        if let Some(&degree) = cup_x.keys().find(|&&k| k > dim) {
            return Err(PresentationError::DegreeOutOfRange { degree, dim });
        }

        let rank = |k: usize| if k <= dim { groups.free_rank(k) } else { 0 };
        let mut maps = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            let expected = (rank(k + 2), rank(k));
            let m = match cup_x.get(&k) {
                Some(m) => {
                    // An empty matrix carries no shape information worth checking
                    // beyond being empty when the expected shape is empty.
                    let empty_ok = m.is_empty() && (expected.0 == 0 || expected.1 == 0);
                    if m.shape() != expected && !empty_ok {
                        return Err(PresentationError::DimensionMismatch {
                            degree: k,
                            expected,
                            found: m.shape(),
                        });
                    }
                    if m.shape() == expected {
                        m.clone()
                    } else {
                        IntMatrix::zeros(expected.0, expected.1)
                    }
                }
                None if expected.0 == 0 || expected.1 == 0 => {
                    IntMatrix::zeros(expected.0, expected.1)
                }
                None => return Err(PresentationError::MissingCupMap { degree: k }),
            };
            maps.push(m);
        }

        if euler_class.len() != rank(2) {
            return Err(PresentationError::EulerClassLength {
                expected: rank(2),
                found: euler_class.len(),
            });
        }
        if rank(0) == 1 && maps[0].column(0) != euler_class {
            return Err(PresentationError::EulerClassMismatch);
        }

        for k in 0..=dim {
            if !groups.has_torsion(k) {
                continue;
            }
            let outgoing = !maps[k].is_zero();
            let incoming = k >= 2 && !maps[k - 2].is_zero();
            if outgoing || incoming {
                return Err(PresentationError::TorsionInteraction { degree: k });
            }
        }

        let mut kept = BTreeMap::new();
        for (k, names) in labels {
            if k > dim {
                return Err(PresentationError::DegreeOutOfRange { degree: k, dim });
            }
            if names.len() != rank(k) {
                return Err(PresentationError::LabelCount {
                    degree: k,
                    expected: rank(k),
                    found: names.len(),
                });
            }
            if !names.is_empty() {
                kept.insert(k, names);
            }
        }

        Ok(Self {
            dim,
            groups,
            cup_x: maps,
            euler_class,
            labels: kept,
        })
    }

    /// Real dimension `2n` of the base.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.dim / 2
    }

    pub fn groups(&self) -> &GradedAbelianGroup {
        &self.groups
    }

    pub fn group(&self, degree: usize) -> AbelianGroupInvariants {
        if degree > self.dim {
            AbelianGroupInvariants::zero()
        } else {
            self.groups.get(degree)
        }
    }

    pub fn free_rank(&self, degree: usize) -> usize {
        if degree > self.dim {
            0
        } else {
            self.groups.free_rank(degree)
        }
    }

    /// Matrix of `x: H^k -> H^{k+2}`; empty outside `[0, dim]`.
    pub fn cup_x(&self, degree: usize) -> IntMatrix {
        match self.cup_x.get(degree) {
            Some(m) => m.clone(),
            None => IntMatrix::zeros(self.free_rank(degree + 2), self.free_rank(degree)),
        }
    }

    pub fn cup_x_ref(&self, degree: usize) -> Option<&IntMatrix> {
        self.cup_x.get(degree)
    }

    pub fn euler_class(&self) -> &[BigInt] {
        &self.euler_class
    }

    pub fn labels(&self) -> &BTreeMap<usize, Vec<String>> {
        &self.labels
    }

    /// Serializes to the ring-file format (explicit `groups` / `cup_x`),
    /// degrees in increasing numeric order.
    pub fn to_json(&self) -> Value {
        let mut groups = Map::new();
        for (k, g) in self.groups.iter() {
            groups.insert(k.to_string(), serde_json::to_value(g).expect("group serializes"));
        }
        let mut cup = Map::new();
        for (k, m) in self.cup_x.iter().enumerate() {
            if m.is_empty() {
                continue;
            }
            let rows: Vec<Value> = m
                .to_rows()
                .iter()
                .map(|r| Value::Array(r.iter().map(int_value).collect()))
                .collect();
            cup.insert(k.to_string(), Value::Array(rows));
        }
        let mut out = Map::new();
        out.insert("dim".into(), json!(self.dim));
        out.insert("groups".into(), Value::Object(groups));
        out.insert("cup_x".into(), Value::Object(cup));
        out.insert(
            "euler_class".into(),
            Value::Array(self.euler_class.iter().map(int_value).collect()),
        );
        if !self.labels.is_empty() {
            let labels: Map<String, Value> = self
                .labels
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            out.insert("labels".into(), Value::Object(labels));
        }
        Value::Object(out)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("json value serializes")
    }
}

fn int_value(x: &BigInt) -> Value {
    use num_traits::ToPrimitive;
    match x.to_i64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

/// Denominators `a_0 = 1, a_1 = 1, a_2, ..., a_n` such that `x^k / a_k`
/// generates `H^{2k}(N; Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASequence {
    a: Vec<u64>,
}

impl ASequence {
    pub fn new(a: Vec<u64>) -> Result<Self, ASequenceError> {
        if a.is_empty() {
            return Err(ASequenceError::Empty);
        }
        if let Some(i) = a.iter().position(|&x| x == 0) {
            return Err(ASequenceError::NonPositive(i));
        }
        if a[0] != 1 || a.get(1).is_some_and(|&x| x != 1) {
            return Err(ASequenceError::LeadingTerms);
        }
        Ok(Self { a })
    }

    /// All ones: the ring of complex projective space.
    pub fn projective(n: usize) -> Self {
        Self { a: vec![1; n + 1] }
    }

    /// `1` up to index `(n-1)/2`, then `2`; `n` odd.
    pub fn half_jump(n: usize) -> Self {
        let a = (0..=n).map(|k| if 2 * k >= n + 1 { 2 } else { 1 }).collect();
        Self { a }
    }

    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    pub fn values(&self) -> &[u64] {
        &self.a
    }

    /// Poincare duality: `a_i * a_{n-i} == a_n` for `1 <= i <= n-1`.
    pub fn validate_duality(&self) -> bool {
        let n = self.n();
        (1..n).all(|i| self.a[i] as u128 * self.a[n - i] as u128 == self.a[n] as u128)
    }
}

/// Presentation with `Z` in each even degree, generated by `x^k / a_k`, and
/// `x` acting by `a_{k+1} / a_k`.
pub fn from_a_sequence(s: &ASequence) -> Result<CupPresentation, PresentationError> {
    let n = s.n();
    let a = s.values();
    let mut groups = GradedAbelianGroup::new(2 * n);
    let mut cup = BTreeMap::new();
    for k in 0..=n {
        groups.set(2 * k, AbelianGroupInvariants::free(1));
        if k < n {
            if a[k + 1] % a[k] != 0 {
                return Err(ASequenceError::NotDivisible {
                    k,
                    lower: a[k],
                    upper: a[k + 1],
                }
                .into());
            }
            let ratio = BigInt::from(a[k + 1] / a[k]);
            cup.insert(2 * k, IntMatrix::new(1, 1, vec![ratio]).expect("1x1"));
        }
    }
    let euler = if n >= 1 { vec![BigInt::one()] } else { Vec::new() };
    CupPresentation::new(2 * n, groups, cup, euler, BTreeMap::new())
}

/// An integral class is primitive when the gcd of its coordinates is 1.
pub fn is_primitive(v: &[BigInt]) -> Result<bool, ZeroVectorError> {
    if v.iter().all(Zero::is_zero) {
        return Err(ZeroVectorError);
    }
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    Ok(g.is_one())
}

// ---------------------------------------------------------------------------
// Ring file format

#[derive(Deserialize)]
#[serde(untagged)]
enum IntLit {
    Num(i64),
    Str(String),
}

impl IntLit {
    fn to_bigint(&self) -> Result<BigInt, PresentationError> {
        match self {
            IntLit::Num(v) => Ok(BigInt::from(*v)),
            IntLit::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| PresentationError::BadInteger(s.clone())),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupSpec {
    rank: i64,
    #[serde(default)]
    torsion: Vec<IntLit>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RingFile {
    dim: i64,
    groups: Option<BTreeMap<String, GroupSpec>>,
    cup_x: Option<BTreeMap<String, Vec<Vec<IntLit>>>>,
    euler_class: Option<Vec<IntLit>>,
    a_sequence: Option<Vec<u64>>,
    labels: Option<BTreeMap<String, Vec<String>>>,
}

fn degree_key(key: &str, dim: usize) -> Result<usize, PresentationError> {
    let k: usize = key
        .trim()
        .parse()
        .map_err(|_| PresentationError::BadDegreeKey(key.to_string()))?;
    if k > dim {
        return Err(PresentationError::DegreeOutOfRange { degree: k, dim });
    }
    Ok(k)
}

/// Parses a ring-description file (JSON).
pub fn parse_presentation(source: &str) -> Result<CupPresentation, PresentationError> {
    let file: RingFile =
        serde_json::from_str(source).map_err(|e| PresentationError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    if file.dim < 0 || file.dim % 2 != 0 {
        return Err(PresentationError::BadDimension(file.dim));
    }
    let dim = file.dim as usize;

    let mut labels = BTreeMap::new();
    for (key, names) in file.labels.unwrap_or_default() {
        labels.insert(degree_key(&key, dim)?, names);
    }

    if let Some(a) = file.a_sequence {
        if file.groups.is_some() || file.cup_x.is_some() {
            return Err(PresentationError::MixedASequence);
        }
        if a.len() != dim / 2 + 1 {
            return Err(PresentationError::ASequenceLength { len: a.len(), dim });
        }
        let p = from_a_sequence(&ASequence::new(a)?)?;
        if let Some(e) = file.euler_class {
            let e = e.iter().map(IntLit::to_bigint).collect::<Result<Vec<_>, _>>()?;
            if e != p.euler_class {
                return Err(PresentationError::EulerClassMismatch);
            }
        }
        if labels.is_empty() {
            return Ok(p);
        }
        return CupPresentation::new(
            p.dim,
            p.groups,
            p.cup_x.into_iter().enumerate().collect(),
            p.euler_class,
            labels,
        );
    }

    let Some(group_specs) = file.groups else {
        return Err(PresentationError::MissingGroups);
    };
    let mut groups = GradedAbelianGroup::new(dim);
    for (key, spec) in group_specs {
        let k = degree_key(&key, dim)?;
        if spec.rank < 0 {
            return Err(PresentationError::NegativeRank {
                degree: k,
                rank: spec.rank,
            });
        }
        let mut orders = Vec::new();
        for t in &spec.torsion {
            let t = t.to_bigint()?;
            if !t.is_positive() {
                return Err(PresentationError::InvalidTorsion { degree: k, value: t });
            }
            orders.push(t);
        }
        groups.set(
            k,
            AbelianGroupInvariants::from_cyclic_orders(spec.rank as usize, &orders),
        );
    }

    let mut cup = BTreeMap::new();
    for (key, rows) in file.cup_x.unwrap_or_default() {
        let k = degree_key(&key, dim)?;
        let expected_cols = groups.free_rank(k);
        let mut parsed = Vec::with_capacity(rows.len());
        for row in &rows {
            parsed.push(row.iter().map(IntLit::to_bigint).collect::<Result<Vec<_>, _>>()?);
        }
        let m = IntMatrix::from_rows(parsed, expected_cols)
            .map_err(|_| PresentationError::RaggedMatrix { degree: k })?;
        cup.insert(k, m);
    }

    let Some(euler) = file.euler_class else {
        return Err(PresentationError::MissingEulerClass);
    };
    let euler = euler.iter().map(IntLit::to_bigint).collect::<Result<Vec<_>, _>>()?;
    CupPresentation::new(dim, groups, cup, euler, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn one_by_one(x: i64) -> IntMatrix {
        IntMatrix::new(1, 1, vec![BigInt::from(x)]).unwrap()
    }

    #[test]
    fn cp3_ring_file() {
        let src = r#"{
            "dim": 6,
            "groups": {"0": {"rank": 1}, "2": {"rank": 1}, "4": {"rank": 1}, "6": {"rank": 1}},
            "cup_x": {"0": [[1]], "2": [[1]], "4": [[1]]},
            "euler_class": [1]
        }"#;
        let p = parse_presentation(src).unwrap();
        assert_eq!(p.n(), 3);
        for k in [0, 2, 4, 6] {
            assert!(p.group(k).is_z());
        }
        for k in [0, 2, 4] {
            assert_eq!(p.cup_x(k), one_by_one(1));
        }
        assert_eq!(p.cup_x(6).shape(), (0, 1));
        assert_eq!(p, from_a_sequence(&ASequence::projective(3)).unwrap());
    }

    #[test]
    fn a_sequence_cup_maps() {
        let p = from_a_sequence(&ASequence::new(vec![1, 1, 3, 6, 18, 18]).unwrap()).unwrap();
        let ratios: Vec<IntMatrix> = (0..5).map(|k| p.cup_x(2 * k)).collect();
        assert_eq!(
            ratios,
            vec![one_by_one(1), one_by_one(3), one_by_one(2), one_by_one(3), one_by_one(1)]
        );
        assert!(p.cup_x(10).is_empty());
        assert_eq!(p.euler_class(), &big(&[1])[..]);

        let cp2 = from_a_sequence(&ASequence::new(vec![1, 1, 1]).unwrap()).unwrap();
        assert!((0..2).all(|k| cp2.cup_x(2 * k) == one_by_one(1)));
    }

    #[test]
    fn half_jump_has_single_doubling() {
        for n in [3usize, 5, 7, 9] {
            let s = ASequence::half_jump(n);
            assert!(s.validate_duality());
            let p = from_a_sequence(&s).unwrap();
            for k in 0..n {
                let expected = if 2 * k == n - 1 { 2 } else { 1 };
                assert_eq!(p.cup_x(2 * k), one_by_one(expected), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn duality() {
        assert!(ASequence::new(vec![1, 1, 3, 6, 18, 18]).unwrap().validate_duality());
        assert!(ASequence::new(vec![1, 1, 5, 5]).unwrap().validate_duality());
        assert!(ASequence::new(vec![1, 1, 22, 22]).unwrap().validate_duality());
        assert!(!ASequence::new(vec![1, 1, 2, 3]).unwrap().validate_duality());
    }

    #[test]
    fn a_sequence_errors() {
        assert_eq!(ASequence::new(vec![]), Err(ASequenceError::Empty));
        assert_eq!(ASequence::new(vec![1, 2]), Err(ASequenceError::LeadingTerms));
        assert_eq!(ASequence::new(vec![1, 1, 0]), Err(ASequenceError::NonPositive(2)));
        let err = from_a_sequence(&ASequence::new(vec![1, 1, 2, 3]).unwrap()).unwrap_err();
        assert_eq!(
            err,
            PresentationError::ASequence(ASequenceError::NotDivisible {
                k: 2,
                lower: 2,
                upper: 3
            })
        );
    }

    #[test]
    fn primitivity() {
        assert_eq!(is_primitive(&big(&[1])), Ok(true));
        assert_eq!(is_primitive(&big(&[2])), Ok(false));
        assert_eq!(is_primitive(&big(&[4, 6, 9])), Ok(true));
        assert_eq!(is_primitive(&big(&[4, 6, 8])), Ok(false));
        assert_eq!(is_primitive(&big(&[0, 0])), Err(ZeroVectorError));
    }

    #[test]
    fn wrong_column_count_is_rejected() {
        let src = r#"{
            "dim": 4,
            "groups": {"0": {"rank": 1}, "2": {"rank": 1}, "4": {"rank": 1}},
            "cup_x": {"0": [[1]], "2": [[1, 0]]},
            "euler_class": [1]
        }"#;
        assert_eq!(
            parse_presentation(src),
            Err(PresentationError::DimensionMismatch {
                degree: 2,
                expected: (1, 1),
                found: (1, 2)
            })
        );
    }

    #[test]
    fn malformed_inputs() {
        let err = parse_presentation("{\"dim\": 4,\n \"groups\": }").unwrap_err();
        assert!(matches!(err, PresentationError::Syntax { line: 2, .. }), "{err:?}");

        let err = parse_presentation(r#"{"dim": 2, "groups": {"0": {"rank": -1}}, "euler_class": []}"#)
            .unwrap_err();
        assert_eq!(err, PresentationError::NegativeRank { degree: 0, rank: -1 });

        let err = parse_presentation(r#"{"dim": 3, "groups": {}, "euler_class": []}"#).unwrap_err();
        assert_eq!(err, PresentationError::BadDimension(3));

        let err = parse_presentation(r#"{"dim": 2, "groups": {}, "euler_class": [], "extra": 1}"#)
            .unwrap_err();
        assert!(matches!(err, PresentationError::Syntax { .. }));

        let err = parse_presentation(
            r#"{"dim": 2, "a_sequence": [1, 1], "groups": {"0": {"rank": 1}}}"#,
        )
        .unwrap_err();
        assert_eq!(err, PresentationError::MixedASequence);

        let err = parse_presentation(
            r#"{"dim": 4, "groups": {"0": {"rank": 1}, "2": {"rank": 1}, "4": {"rank": 1}},
                "cup_x": {"0": [[1]]}, "euler_class": [1]}"#,
        )
        .unwrap_err();
        assert_eq!(err, PresentationError::MissingCupMap { degree: 2 });

        let err = parse_presentation(
            r#"{"dim": 2, "groups": {"0": {"rank": 1}, "2": {"rank": 1}},
                "cup_x": {"0": [[2]]}, "euler_class": [1]}"#,
        )
        .unwrap_err();
        assert_eq!(err, PresentationError::EulerClassMismatch);
    }

    #[test]
    fn torsion_interaction_is_rejected() {
        let src = r#"{
            "dim": 4,
            "groups": {"0": {"rank": 1}, "2": {"rank": 1, "torsion": [2]}, "4": {"rank": 1}},
            "cup_x": {"0": [[1]], "2": [[1]]},
            "euler_class": [1]
        }"#;
        assert_eq!(
            parse_presentation(src),
            Err(PresentationError::TorsionInteraction { degree: 2 })
        );

        // torsion alongside zero cup maps is fine
        let ok = r#"{
            "dim": 4,
            "groups": {"0": {"rank": 1}, "3": {"rank": 0, "torsion": [2, 3]}, "4": {"rank": 1}},
            "cup_x": {},
            "euler_class": []
        }"#;
        let p = parse_presentation(ok).unwrap();
        assert_eq!(p.group(3), AbelianGroupInvariants::cyclic(6));
    }

    #[test]
    fn labels_round_trip() {
        let src = r#"{
            "dim": 2,
            "groups": {"0": {"rank": 1}, "2": {"rank": 1}},
            "cup_x": {"0": [[1]]},
            "euler_class": [1],
            "labels": {"0": ["1"], "2": ["x"]}
        }"#;
        let p = parse_presentation(src).unwrap();
        assert_eq!(p.labels()[&2], vec!["x".to_string()]);
        let again = parse_presentation(&p.to_json_string()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn a_sequence_file() {
        let p = parse_presentation(r#"{"dim": 10, "a_sequence": [1, 1, 3, 6, 18, 18]}"#).unwrap();
        assert_eq!(p.cup_x(2), one_by_one(3));
        let err = parse_presentation(r#"{"dim": 8, "a_sequence": [1, 1, 3]}"#).unwrap_err();
        assert_eq!(err, PresentationError::ASequenceLength { len: 3, dim: 8 });
    }
}
