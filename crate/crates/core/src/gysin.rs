//! Integral cohomology of the total space of a circle bundle.
//!
//! For `pi: M -> N` with Euler class `x`, the Gysin sequence
//!
//! ```text
//! ... -> H^{k-2}(N) --x--> H^k(N) --pi^*--> H^k(M) --pi_*--> H^{k-1}(N) --x--> H^{k+1}(N) -> ...
//! ```
//!
//! splits into short exact sequences
//! `0 -> coker(x on H^{k-2}) -> H^k(M) -> ker(x on H^{k-1}) -> 0`.
//! Each degree is solved from the cokernel and kernel parts. When the kernel
//! part is free the extension splits; when it has torsion and the cokernel
//! part is nonzero the group is not determined by this data and is reported
//! as ambiguous.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::graded::{CupPresentation, GradedAbelianGroup};
use crate::int_linalg::{self, cokernel, kernel, AbelianGroupInvariants};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GysinError {
    #[error("unsupported torsion interaction in degree {degree}")]
    TorsionInteraction { degree: usize },
    #[error("internal audit failed in degree {degree}: {what}")]
    Audit { degree: usize, what: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionStatus {
    /// Kernel part is free, so `H^k(M)` is the direct sum of both parts.
    SplitForced,
    /// Kernel part vanishes; `H^k(M)` is the cokernel part.
    ZeroKernel,
    /// Torsion kernel part over a nonzero cokernel part.
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCohomology {
    pub degree: usize,
    /// `None` exactly when the extension is ambiguous.
    pub group: Option<AbelianGroupInvariants>,
    pub extension: ExtensionStatus,
    pub cokernel_part: AbelianGroupInvariants,
    pub kernel_part: AbelianGroupInvariants,
}

impl DegreeCohomology {
    pub fn free_rank(&self) -> usize {
        self.cokernel_part.free_rank + self.kernel_part.free_rank
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalSpaceCohomology {
    /// `2n + 1`.
    pub dim: usize,
    pub degrees: Vec<DegreeCohomology>,
}

impl TotalSpaceCohomology {
    pub fn group(&self, degree: usize) -> Option<&AbelianGroupInvariants> {
        self.degrees.get(degree).and_then(|d| d.group.as_ref())
    }

    pub fn is_ambiguous(&self) -> bool {
        self.degrees.iter().any(|d| d.extension == ExtensionStatus::Ambiguous)
    }

    /// All groups, or `None` if some degree is ambiguous.
    pub fn groups(&self) -> Option<GradedAbelianGroup> {
        let mut g = GradedAbelianGroup::new(self.dim);
        for d in &self.degrees {
            g.set(d.degree, d.group.clone()?);
        }
        Some(g)
    }

    pub fn free_ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(DegreeCohomology::free_rank).collect()
    }

    /// Degrees carrying torsion, with the torsion orders. Ambiguous degrees
    /// contribute the torsion of both parts.
    pub fn torsion_witnesses(&self) -> Vec<(usize, Vec<BigInt>)> {
        self.degrees
            .iter()
            .filter_map(|d| {
                let t: Vec<BigInt> = match &d.group {
                    Some(g) => g.torsion().to_vec(),
                    None => d
                        .cokernel_part
                        .torsion()
                        .iter()
                        .chain(d.kernel_part.torsion())
                        .cloned()
                        .collect(),
                };
                (!t.is_empty()).then_some((d.degree, t))
            })
            .collect()
    }

    /// `Z` in degrees `0` and `2n+1`, zero in between.
    pub fn is_integral_sphere(&self) -> bool {
        let top = self.dim;
        self.degrees.iter().all(|d| match &d.group {
            Some(g) if d.degree == 0 || d.degree == top => g.is_z(),
            Some(g) => g.is_zero(),
            None => false,
        })
    }

    /// Betti numbers `1, 0, ..., 0, 1`.
    pub fn is_rational_sphere(&self) -> bool {
        let top = self.dim;
        self.free_ranks()
            .iter()
            .enumerate()
            .all(|(k, &b)| b == usize::from(k == 0 || k == top))
    }

    /// Report with per-degree groups, extension flags and provenance, keyed by
    /// degree in increasing order.
    pub fn to_json(&self) -> Value {
        let mut groups = Map::new();
        let mut extension = Map::new();
        let mut provenance = Map::new();
        for d in &self.degrees {
            let key = d.degree.to_string();
            groups.insert(
                key.clone(),
                match &d.group {
                    Some(g) => serde_json::to_value(g).expect("group serializes"),
                    None => Value::Null,
                },
            );
            extension.insert(key.clone(), serde_json::to_value(d.extension).expect("flag"));
            provenance.insert(
                key,
                json!({
                    "cokernel": d.cokernel_part,
                    "kernel": d.kernel_part,
                }),
            );
        }
        json!({
            "dim": self.dim,
            "groups": groups,
            "extension": extension,
            "provenance": provenance,
        })
    }
}

fn torsion_only(g: &AbelianGroupInvariants) -> AbelianGroupInvariants {
    AbelianGroupInvariants::from_cyclic_orders(0, g.torsion())
}

fn check_torsion_interaction(p: &CupPresentation) -> Result<(), GysinError> {
    for k in 0..=p.dim() {
        if !p.group(k).has_torsion() {
            continue;
        }
        let outgoing = !p.cup_x(k).is_zero();
        let incoming = k >= 2 && !p.cup_x(k - 2).is_zero();
        if outgoing || incoming {
            return Err(GysinError::TorsionInteraction { degree: k });
        }
    }
    Ok(())
}

/// Solves the Gysin sequence degree by degree for `0 <= k <= 2n+1`.
///
/// Also runs the rank bookkeeping audit against [`total_space_betti`] and
/// checks that the Euler characteristic vanishes.
pub fn total_space_cohomology(p: &CupPresentation) -> Result<TotalSpaceCohomology, GysinError> {
    check_torsion_interaction(p)?;
    let top = p.dim() + 1;
    let mut degrees = Vec::with_capacity(top + 1);
    for k in 0..=top {
        // coker(x: H^{k-2} -> H^k), torsion of H^k(N) passing through untouched
        let base_k = p.group(k);
        let cokernel_part = if k >= 2 {
            cokernel(&p.cup_x(k - 2)).direct_sum(&torsion_only(&base_k))
        } else {
            base_k
        };
        // ker(x: H^{k-1} -> H^{k+1}), torsion of H^{k-1}(N) lying in the kernel
        let kernel_part = if k >= 1 {
            let (r, _) = kernel(&p.cup_x(k - 1));
            AbelianGroupInvariants::free(r).direct_sum(&torsion_only(&p.group(k - 1)))
        } else {
            AbelianGroupInvariants::zero()
        };

        let (group, extension) = if kernel_part.is_zero() {
            (Some(cokernel_part.clone()), ExtensionStatus::ZeroKernel)
        } else if kernel_part.is_free() || cokernel_part.is_zero() {
            (
                Some(cokernel_part.direct_sum(&kernel_part)),
                ExtensionStatus::SplitForced,
            )
        } else {
            (None, ExtensionStatus::Ambiguous)
        };
        degrees.push(DegreeCohomology {
            degree: k,
            group,
            extension,
            cokernel_part,
            kernel_part,
        });
    }
    let result = TotalSpaceCohomology { dim: top, degrees };
    audit(p, &result)?;
    Ok(result)
}

fn audit(p: &CupPresentation, h: &TotalSpaceCohomology) -> Result<(), GysinError> {
    let betti = total_space_betti(p);
    let mut euler: i64 = 0;
    for d in &h.degrees {
        let k = d.degree;
        if betti[k] != d.free_rank() {
            return Err(GysinError::Audit {
                degree: k,
                what: format!(
                    "betti number {} from elimination ranks vs free rank {} from Smith form",
                    betti[k],
                    d.free_rank()
                ),
            });
        }
        if let Some(g) = &d.group {
            if g.free_rank != betti[k] {
                return Err(GysinError::Audit {
                    degree: k,
                    what: "group free rank disagrees with betti number".into(),
                });
            }
        }
        euler += if k % 2 == 0 { 1 } else { -1 } * betti[k] as i64;
    }
    if euler != 0 {
        return Err(GysinError::Audit {
            degree: h.dim,
            what: format!("euler characteristic {euler} is nonzero"),
        });
    }
    Ok(())
}

/// Rational Betti numbers `b_0(M), ..., b_{2n+1}(M)`:
/// `b_k(M) = b_k(N) - rank(x on H^{k-2}) + b_{k-1}(N) - rank(x on H^{k-1})`.
pub fn total_space_betti(p: &CupPresentation) -> Vec<usize> {
    let top = p.dim() + 1;
    let rank_out = |j: usize| int_linalg::rank(&p.cup_x(j));
    (0..=top)
        .map(|k| {
            let coker = p.free_rank(k) - if k >= 2 { rank_out(k - 2) } else { 0 };
            let ker = if k >= 1 {
                p.free_rank(k - 1) - rank_out(k - 1)
            } else {
                0
            };
            coker + ker
        })
        .collect()
}
