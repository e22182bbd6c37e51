//! Sphere criteria for the total space of a circle bundle.
//!
//! Verdicts carry a justification chain. Each step is either computed in this
//! run (`checked`) or taken from a hypothesis flag or a cited result
//! (`assumed`).

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{is_primitive, CupPresentation};
use crate::gysin::{total_space_cohomology, GysinError};
use crate::int_linalg::{rank, serialize_bigints};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    True,
    False,
    Unknown,
}

impl TriState {
    pub fn is_true(self) -> bool {
        self == TriState::True
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub pi1_base_trivial: TriState,
    pub h2_base_is_z: bool,
    pub euler_primitive: bool,
    pub hamiltonian_circle_isolated_fixed_points: bool,
    pub fixed_point_count: Option<usize>,
    pub c1_coefficient: Option<i64>,
    pub base_is_kahler: bool,
}

impl Default for Hypotheses {
    fn default() -> Self {
        Hypotheses {
            pi1_base_trivial: TriState::Unknown,
            h2_base_is_z: false,
            euler_primitive: false,
            hamiltonian_circle_isolated_fixed_points: false,
            fixed_point_count: None,
            c1_coefficient: None,
            base_is_kahler: false,
        }
    }
}

impl Hypotheses {
    /// Replaces the `h2_base_is_z` and `euler_primitive` flags by the values
    /// read off the presentation.
    pub fn with_presentation(mut self, p: &CupPresentation) -> Self {
        self.h2_base_is_z = p.group(2).is_z();
        self.euler_primitive = is_primitive(p.euler_class()).unwrap_or(false);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    HomeomorphicToSphere,
    IntegralCohomologySphere,
    RealCohomologySphereOnly,
    NotCohomologySphere,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Checked,
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub step: String,
    pub status: StepStatus,
    #[serde(rename = "ref")]
    pub reference: String,
}

impl Step {
    fn checked(step: impl Into<String>, reference: &str) -> Self {
        Step {
            step: step.into(),
            status: StepStatus::Checked,
            reference: reference.into(),
        }
    }

    fn assumed(step: impl Into<String>, reference: &str) -> Self {
        Step {
            step: step.into(),
            status: StepStatus::Assumed,
            reference: reference.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionWitness {
    pub degree: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub justification: Vec<Step>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub torsion_witnesses: Vec<TorsionWitness>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerdictError {
    #[error("missing hypothesis: {0}")]
    MissingHypothesis(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("a Hamiltonian circle action on a {dim}-manifold has at least {required} fixed points, got {count}")]
    TooFewFixedPoints {
        dim: usize,
        count: usize,
        required: usize,
    },
    #[error(transparent)]
    Gysin(#[from] GysinError),
}

const REF_INTEGRAL_RING: &str = "gysin:integral-ring-criterion";
const REF_REAL_RING: &str = "gysin:real-ring-criterion";
const REF_PI1: &str = "lemma:pi1-circle-bundle";
const REF_PI1_HAMILTONIAN: &str = "lemma:pi1-circle-bundle-hamiltonian";
const REF_POINCARE: &str = "generalized-poincare-conjecture";
const REF_HAMILTONIAN_SPHERE: &str = "hamiltonian-sphere-criterion";
const REF_CHERN: &str = "chern-class-criterion";
const REF_FIXED_POINTS: &str = "hamiltonian-minimal-fixed-points";
const REF_INPUT: &str = "input";
const REF_PRESENTATION: &str = "presentation";

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

/// `H^*(N; Z) = Z[x]/x^{n+1}`: `Z` in even degrees, zero in odd degrees,
/// and every `x: H^{2i} -> H^{2i+2}` (`i < n`) is `[[+-1]]`.
pub fn is_integral_cpn_ring(p: &CupPresentation) -> bool {
    let dim = p.dim();
    (0..=dim).all(|k| {
        let g = p.group(k);
        if k % 2 == 1 {
            return g.is_zero();
        }
        if !g.is_z() {
            return false;
        }
        k == dim || {
            let m = p.cup_x(k);
            m.shape() == (1, 1) && is_unit(m.get(0, 0))
        }
    })
}

/// `H^*(N; R) = R[x]/x^{n+1}`: free rank one in even degrees, zero in odd
/// degrees, and every cup map below the top degree nonzero over `Q`.
pub fn is_real_cpn_ring(p: &CupPresentation) -> bool {
    let dim = p.dim();
    (0..=dim).all(|k| {
        let b = p.free_rank(k);
        if k % 2 == 1 {
            return b == 0;
        }
        b == 1 && (k == dim || rank(&p.cup_x(k)) == 1)
    })
}

/// `pi_1(M) = 1` when `H^2(N) = Z`, `x` is primitive, and either `N` is simply
/// connected or carries a Hamiltonian circle action with isolated fixed points.
/// Never answers `False`.
pub fn pi1_total_space(h: &Hypotheses) -> TriState {
    let base_ok = h.pi1_base_trivial.is_true() || h.hamiltonian_circle_isolated_fixed_points;
    if base_ok && h.h2_base_is_z && h.euler_primitive {
        TriState::True
    } else {
        TriState::Unknown
    }
}

fn pi1_steps(h: &Hypotheses, checked_from_base: bool) -> Vec<Step> {
    let status_step = |text: &str| {
        if checked_from_base {
            Step::checked(text, REF_PRESENTATION)
        } else {
            Step::assumed(text, REF_INPUT)
        }
    };
    let mut steps = Vec::new();
    if h.h2_base_is_z {
        steps.push(status_step("H^2(N;Z) = Z"));
    }
    if h.euler_primitive {
        steps.push(status_step("Euler class x is primitive"));
    }
    if h.pi1_base_trivial.is_true() {
        steps.push(Step::assumed("pi_1(N) = 1", REF_INPUT));
        steps.push(Step::checked("pi_1(M) = 1", REF_PI1));
    } else if h.hamiltonian_circle_isolated_fixed_points {
        steps.push(Step::assumed(
            "N carries a Hamiltonian circle action with isolated fixed points, so pi_1(N) = pi_1(minimum) = 1",
            REF_INPUT,
        ));
        steps.push(Step::checked("pi_1(M) = 1", REF_PI1_HAMILTONIAN));
    }
    steps
}

fn check_fixed_point_count(n: usize, h: &Hypotheses) -> Result<(), VerdictError> {
    match h.fixed_point_count {
        Some(0) => Err(VerdictError::Precondition(
            "fixed_point_count must be at least 1".into(),
        )),
        Some(count) if count < n + 1 => Err(VerdictError::TooFewFixedPoints {
            dim: 2 * n,
            count,
            required: n + 1,
        }),
        _ => Ok(()),
    }
}

/// Combines the ring tests, the Gysin computation and the `pi_1` lemma.
///
/// `h2_base_is_z` and `euler_primitive` are recomputed from `p`; the flags on
/// `h` for those two are ignored.
pub fn sphere_verdict(p: &CupPresentation, h: &Hypotheses) -> Result<Verdict, VerdictError> {
    let n = p.n();
    check_fixed_point_count(n, h)?;
    let h = h.clone().with_presentation(p);
    let cohomology = total_space_cohomology(p)?;
    let torsion_witnesses: Vec<TorsionWitness> = cohomology
        .torsion_witnesses()
        .into_iter()
        .map(|(degree, torsion)| TorsionWitness { degree, torsion })
        .collect();
    let top = 2 * n + 1;
    let mut steps = Vec::new();

    if is_integral_cpn_ring(p) {
        steps.push(Step::checked(
            format!("H^*(N;Z) = Z[x]/x^{} as a ring", n + 1),
            REF_INTEGRAL_RING,
        ));
        if !cohomology.is_integral_sphere() {
            return Err(GysinError::Audit {
                degree: top,
                what: "integral projective ring did not give an integral cohomology sphere".into(),
            }
            .into());
        }
        steps.push(Step::checked(
            format!("H^*(M;Z) = H^*(S^{top};Z)"),
            REF_INTEGRAL_RING,
        ));
        if pi1_total_space(&h).is_true() {
            steps.extend(pi1_steps(&h, true));
            steps.push(Step::assumed(
                format!("simply connected integral cohomology {top}-sphere is homeomorphic to S^{top}"),
                REF_POINCARE,
            ));
            if h.hamiltonian_circle_isolated_fixed_points && h.fixed_point_count == Some(n + 1) {
                steps.push(Step::assumed(
                    format!("with n+1 = {} isolated fixed points the ring condition is also necessary", n + 1),
                    REF_HAMILTONIAN_SPHERE,
                ));
            }
            return Ok(Verdict {
                conclusion: Conclusion::HomeomorphicToSphere,
                justification: steps,
                torsion_witnesses,
            });
        }
        steps.push(Step::checked(
            "pi_1(M) = 1 not established from the given hypotheses",
            REF_PI1,
        ));
        return Ok(Verdict {
            conclusion: Conclusion::IntegralCohomologySphere,
            justification: steps,
            torsion_witnesses,
        });
    }

    steps.push(Step::checked(
        format!("H^*(N;Z) is not Z[x]/x^{} as a ring", n + 1),
        REF_INTEGRAL_RING,
    ));
    if is_real_cpn_ring(p) {
        steps.push(Step::checked(
            format!("H^*(N;R) = R[x]/x^{} as a ring", n + 1),
            REF_REAL_RING,
        ));
        if !cohomology.is_rational_sphere() {
            return Err(GysinError::Audit {
                degree: top,
                what: "real projective ring did not give a rational cohomology sphere".into(),
            }
            .into());
        }
        steps.push(Step::checked(
            format!("H^*(M;R) = H^*(S^{top};R)"),
            REF_REAL_RING,
        ));
        if !torsion_witnesses.is_empty() {
            let degrees: Vec<String> = torsion_witnesses.iter().map(|w| w.degree.to_string()).collect();
            steps.push(Step::checked(
                format!("H^*(M;Z) has torsion in degrees {}", degrees.join(", ")),
                REF_INTEGRAL_RING,
            ));
        }
        return Ok(Verdict {
            conclusion: Conclusion::RealCohomologySphereOnly,
            justification: steps,
            torsion_witnesses,
        });
    }

    steps.push(Step::checked(
        format!("H^*(N;R) is not R[x]/x^{} as a ring", n + 1),
        REF_REAL_RING,
    ));
    let betti = cohomology.free_ranks();
    let extra: Vec<String> = betti
        .iter()
        .enumerate()
        .filter(|&(k, &b)| b != usize::from(k == 0 || k == top))
        .map(|(k, b)| format!("b_{k} = {b}"))
        .collect();
    if !extra.is_empty() {
        steps.push(Step::checked(
            format!("M is not a real cohomology sphere: {}", extra.join(", ")),
            REF_REAL_RING,
        ));
    }
    Ok(Verdict {
        conclusion: Conclusion::NotCohomologySphere,
        justification: steps,
        torsion_witnesses,
    })
}

/// `c_1(N) = (n+1)x` together with a Hamiltonian circle action with exactly
/// `n+1` isolated fixed points gives a sphere. Any other `c_1` is
/// inconclusive.
pub fn chern_criterion(n: usize, h: &Hypotheses) -> Result<Verdict, VerdictError> {
    let c1 = h
        .c1_coefficient
        .ok_or(VerdictError::MissingHypothesis("c1_coefficient"))?;
    if !h.hamiltonian_circle_isolated_fixed_points {
        return Err(VerdictError::MissingHypothesis(
            "hamiltonian_circle_isolated_fixed_points",
        ));
    }
    let count = h
        .fixed_point_count
        .ok_or(VerdictError::MissingHypothesis("fixed_point_count"))?;
    check_fixed_point_count(n, h)?;
    if count != n + 1 {
        return Err(VerdictError::Precondition(format!(
            "fixed_point_count must equal n+1 = {}, got {count}",
            n + 1
        )));
    }

    let mut steps = vec![
        Step::assumed(
            format!("Hamiltonian circle action with {count} isolated fixed points"),
            REF_INPUT,
        ),
        Step::checked(format!("fixed point count {count} = n+1"), REF_FIXED_POINTS),
        Step::assumed(format!("c_1(N) = {c1}x"), REF_INPUT),
    ];
    if h.base_is_kahler {
        steps.push(Step::assumed("N is Kahler", REF_INPUT));
    }
    if c1 != n as i64 + 1 {
        steps.push(Step::checked(
            format!("c_1(N) = {c1}x differs from (n+1)x = {}x; criterion not triggered", n + 1),
            REF_CHERN,
        ));
        return Ok(Verdict {
            conclusion: Conclusion::Inconclusive,
            justification: steps,
            torsion_witnesses: Vec::new(),
        });
    }
    let top = 2 * n + 1;
    steps.extend([
        Step::checked(format!("c_1(N) = (n+1)x = {}x", n + 1), REF_CHERN),
        Step::assumed("Euler class x = [omega] is primitive", REF_INPUT),
        Step::assumed(
            format!("c(N) = (1+x)^{} and H^*(N;Z) = Z[x]/x^{} as a ring", n + 1, n + 1),
            REF_CHERN,
        ),
        Step::assumed(format!("M is homeomorphic to S^{top}"), REF_HAMILTONIAN_SPHERE),
    ]);
    Ok(Verdict {
        conclusion: Conclusion::HomeomorphicToSphere,
        justification: steps,
        torsion_witnesses: Vec::new(),
    })
}
