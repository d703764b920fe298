use super::{FilterError, FilterOfSubgroups, IdealRepr};
use crate::groups::MAX_EXPLICIT_ORDER;
use crate::ordinal::{CountableSetDescriptor, OrdClass, Ordinal};

/// A violated filter axiom with its witnesses (explicit regime: subgroup
/// masks; symbolic regime rendered textually).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterViolation {
    MissingFullGroup,
    NotUpwardClosed { member: String, above: String },
    NotIntersectionClosed { left: String, right: String, meet: String },
}

/// Conjugation counterexample: a member whose conjugate left the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalityWitness {
    pub member: String,
    pub conjugator: String,
    pub conjugate: String,
}

/// ω₁-completeness counterexample: a countable member sequence whose
/// intersection escapes. Explicit regime: a stabilizing finite lattice chain;
/// symbolic regime: a countable union of index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Omega1Witness {
    pub sequence: Vec<String>,
    pub intersection: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterAuditReport {
    pub is_filter: bool,
    pub violations: Vec<FilterViolation>,
    pub is_normal: bool,
    pub normality_counterexample: Option<NormalityWitness>,
    pub is_omega1_complete: bool,
    pub omega1_counterexample: Option<Omega1Witness>,
}

impl FilterAuditReport {
    pub fn all_positive(&self) -> bool {
        self.is_filter && self.is_normal && self.is_omega1_complete
    }

    pub fn describe_defect(&self) -> String {
        if !self.is_filter {
            format!("filter axioms fail: {:?}", self.violations.first())
        } else if !self.is_normal {
            format!("normality fails: {:?}", self.normality_counterexample)
        } else if !self.is_omega1_complete {
            format!("omega1-completeness fails: {:?}", self.omega1_counterexample)
        } else {
            "no defect".into()
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "is_filter": self.is_filter,
            "violations": self.violations.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>(),
            "is_normal": self.is_normal,
            "normality_counterexample": self.normality_counterexample.as_ref().map(|w| serde_json::json!({
                "member": w.member, "conjugator": w.conjugator, "conjugate": w.conjugate,
            })),
            "is_omega1_complete": self.is_omega1_complete,
            "omega1_counterexample": self.omega1_counterexample.as_ref().map(|w| serde_json::json!({
                "sequence": w.sequence, "intersection": w.intersection,
            })),
        })
    }
}

pub(super) fn audit(filter: &FilterOfSubgroups) -> Result<FilterAuditReport, FilterError> {
    match filter {
        FilterOfSubgroups::Explicit(f) => {
            if f.group.order() > MAX_EXPLICIT_ORDER {
                return Err(FilterError::Group(crate::groups::GroupError::GroupTooLarge(
                    f.group.order(),
                )));
            }
            let g = &f.group;
            let lattice = g.subgroups_within(f.ambient);
            let members: Vec<u32> =
                lattice.iter().copied().filter(|&k| f.contains_mask(k)).collect();
            let show = |m: u32| format!("{m:#x}");

            let mut violations = Vec::new();
            if !members.contains(&f.ambient) {
                violations.push(FilterViolation::MissingFullGroup);
            }
            'upward: for &k in &members {
                for &above in &lattice {
                    if k & !above == 0 && !members.contains(&above) {
                        violations.push(FilterViolation::NotUpwardClosed {
                            member: show(k),
                            above: show(above),
                        });
                        break 'upward;
                    }
                }
            }
            let mut meet_witness: Option<(u32, u32, u32)> = None;
            'meets: for &a in &members {
                for &b in &members {
                    let m = a & b;
                    if !members.contains(&m) {
                        meet_witness = Some((a, b, m));
                        break 'meets;
                    }
                }
            }
            if let Some((a, b, m)) = meet_witness {
                violations.push(FilterViolation::NotIntersectionClosed {
                    left: show(a),
                    right: show(b),
                    meet: show(m),
                });
            }
            let is_filter = violations.is_empty();

            let mut normality_counterexample = None;
            'normal: for &k in &members {
                for e in g.mask_members(f.ambient) {
                    let conj = g.conjugate_mask(e, k);
                    if !members.contains(&conj) {
                        normality_counterexample = Some(NormalityWitness {
                            member: show(k),
                            conjugator: format!("g{e}"),
                            conjugate: show(conj),
                        });
                        break 'normal;
                    }
                }
            }

            // on a finite lattice countable intersection chains stabilize, so
            // ω₁-completeness is exactly meet closure; reuse its witness as a
            // stabilizing chain K₁ ⊇ K₁∩K₂ ⊇ ...
            let omega1_counterexample = meet_witness.map(|(a, b, m)| Omega1Witness {
                sequence: vec![show(a), show(b), show(a), show(b)],
                intersection: show(m),
            });

            Ok(FilterAuditReport {
                is_filter,
                violations,
                is_normal: normality_counterexample.is_none(),
                normality_counterexample,
                is_omega1_complete: omega1_counterexample.is_none(),
                omega1_counterexample,
            })
        }
        FilterOfSubgroups::SupportIdeal(f) => {
            // upward closure, meet closure and the full group are structural
            // for ideal-backed filters; normality is vacuous (abelian ambient)
            let complete = f.ideal.countable_union_closed(&f.group.table);
            let omega1_counterexample = if complete {
                None
            } else {
                Some(omega1_witness(&f.ideal, &f.group.table))
            };
            Ok(FilterAuditReport {
                is_filter: true,
                violations: Vec::new(),
                is_normal: true,
                normality_counterexample: None,
                is_omega1_complete: complete,
                omega1_counterexample,
            })
        }
    }
}

/// A concrete countable union escaping the ideal.
fn omega1_witness(
    ideal: &IdealRepr,
    table: &std::sync::Arc<crate::ordinal::AtomTable>,
) -> Omega1Witness {
    match ideal {
        IdealRepr::FiniteSubsets { .. } => {
            // Eₙ = {n}: each finite, the union is the whole ω-segment
            let union = CountableSetDescriptor::initial_segment(Ordinal::omega(table));
            Omega1Witness {
                sequence: (0..4).map(|n| format!("K[{{{n}}}]")).collect(),
                intersection: format!("K[{union}]"),
            }
        }
        IdealRepr::Prefixes { bound } => {
            debug_assert_eq!(bound.classify(table), OrdClass::CofOmega);
            Omega1Witness {
                sequence: vec![
                    "K[[0, m_0)]".into(),
                    "K[[0, m_1)]".into(),
                    "K[[0, m_n)] for m_n cofinal in the bound".into(),
                ],
                intersection: format!("K[[0, {bound})] (the union of a cofinal prefix sequence)"),
            }
        }
        _ => Omega1Witness { sequence: vec![], intersection: String::new() },
    }
}
