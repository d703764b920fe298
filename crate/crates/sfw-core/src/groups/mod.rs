//! Explicit finite permutation groups on posets, symbolic abelian iteration
//! groups with countable support, subgroups in both representations,
//! stabilizers, conjugation, restriction homomorphisms and their kernels.

mod explicit;
mod symbolic;

pub use explicit::{zoo, ExplicitGroup, SubgroupMask, MAX_EXPLICIT_ORDER};
pub use symbolic::{SymbolicElement, SymbolicGroup};

use crate::forcing::NameError;
use crate::ordinal::{CountableSetDescriptor, Ordinal};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("explicit group too large: order {0} exceeds the cap")]
    GroupTooLarge(usize),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("ambient groups differ")]
    AmbientMismatch,
    #[error("cannot mix explicit and symbolic subgroup representations")]
    MixedRepresentation,
    #[error("subgroup does not live in the homomorphism codomain")]
    CodomainMismatch,
    #[error("map is not a homomorphism")]
    NotAHomomorphism,
    #[error("homomorphism is not an inclusion")]
    NotAnInclusion,
    #[error(transparent)]
    Name(#[from] NameError),
}

/// A subgroup in one of the two representations: an explicit element set
/// inside a finite group, or a support kernel K_E = {g : g trivial on E}
/// in a symbolic abelian iteration group.
#[derive(Debug, Clone)]
pub enum Subgroup {
    Explicit { group: Arc<ExplicitGroup>, mask: SubgroupMask },
    Kernel { group: Arc<SymbolicGroup>, fixed: CountableSetDescriptor },
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Subgroup::Explicit { group: g1, mask: m1 }, Subgroup::Explicit { group: g2, mask: m2 }) => {
                Arc::ptr_eq(g1, g2) && m1 == m2
            }
            (Subgroup::Kernel { group: g1, fixed: e1 }, Subgroup::Kernel { group: g2, fixed: e2 }) => {
                g1 == g2 && e1 == e2
            }
            _ => false,
        }
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    pub fn full_explicit(group: &Arc<ExplicitGroup>) -> Subgroup {
        Subgroup::Explicit { group: group.clone(), mask: group.full_mask() }
    }

    pub fn trivial_explicit(group: &Arc<ExplicitGroup>) -> Subgroup {
        Subgroup::Explicit { group: group.clone(), mask: group.trivial_mask() }
    }

    pub fn kernel(group: &Arc<SymbolicGroup>, fixed: CountableSetDescriptor) -> Subgroup {
        Subgroup::Kernel { group: group.clone(), fixed }
    }

    pub fn full_symbolic(group: &Arc<SymbolicGroup>) -> Subgroup {
        Subgroup::Kernel { group: group.clone(), fixed: CountableSetDescriptor::empty() }
    }

    /// The trivial subgroup of a symbolic group is the kernel fixing every
    /// stage below the bound.
    pub fn trivial_symbolic(group: &Arc<SymbolicGroup>) -> Subgroup {
        Subgroup::Kernel {
            group: group.clone(),
            fixed: CountableSetDescriptor::initial_segment(group.stage_bound.clone()),
        }
    }

    pub fn is_full(&self) -> bool {
        match self {
            Subgroup::Explicit { group, mask } => *mask == group.full_mask(),
            Subgroup::Kernel { fixed, .. } => fixed.is_empty(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Subgroup::Explicit { group, mask } => *mask == group.trivial_mask(),
            Subgroup::Kernel { group, fixed } => {
                CountableSetDescriptor::initial_segment(group.stage_bound.clone()).subset_of(fixed)
            }
        }
    }

    /// Exact containment: `self ⊇ other` over a common ambient.
    pub fn contains_subgroup(&self, other: &Subgroup) -> Result<bool, GroupError> {
        match (self, other) {
            (Subgroup::Explicit { group: g1, mask: m1 }, Subgroup::Explicit { group: g2, mask: m2 }) => {
                if !Arc::ptr_eq(g1, g2) {
                    return Err(GroupError::AmbientMismatch);
                }
                Ok(m2 & !m1 == 0)
            }
            (Subgroup::Kernel { group: g1, fixed: e1 }, Subgroup::Kernel { group: g2, fixed: e2 }) => {
                if g1 != g2 {
                    return Err(GroupError::AmbientMismatch);
                }
                // K_{E1} ⊇ K_{E2} iff E1 ⊆ E2
                Ok(e1.subset_of(e2))
            }
            _ => Err(GroupError::MixedRepresentation),
        }
    }

    /// Exact intersection; kernels intersect by unioning their index sets.
    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        match (self, other) {
            (Subgroup::Explicit { group: g1, mask: m1 }, Subgroup::Explicit { group: g2, mask: m2 }) => {
                if !Arc::ptr_eq(g1, g2) {
                    return Err(GroupError::AmbientMismatch);
                }
                Ok(Subgroup::Explicit { group: g1.clone(), mask: m1 & m2 })
            }
            (Subgroup::Kernel { group: g1, fixed: e1 }, Subgroup::Kernel { group: g2, fixed: e2 }) => {
                if g1 != g2 {
                    return Err(GroupError::AmbientMismatch);
                }
                Ok(Subgroup::Kernel { group: g1.clone(), fixed: e1.union(e2) })
            }
            _ => Err(GroupError::MixedRepresentation),
        }
    }

    /// Conjugation g·K·g⁻¹. Symbolic ambient groups are abelian, so the
    /// kernel form returns unchanged.
    pub fn conjugate(&self, g: &GroupElement) -> Result<Subgroup, GroupError> {
        match (self, g) {
            (Subgroup::Explicit { group, mask }, GroupElement::Explicit(idx)) => {
                Ok(Subgroup::Explicit { group: group.clone(), mask: group.conjugate_mask(*idx, *mask) })
            }
            (Subgroup::Kernel { .. }, GroupElement::Symbolic(_)) => Ok(self.clone()),
            _ => Err(GroupError::MixedRepresentation),
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subgroup::Explicit { group, mask } => {
                let members: Vec<String> =
                    group.mask_members(*mask).map(|i| format!("g{i}")).collect();
                write!(f, "{{{}}}", members.join(", "))
            }
            Subgroup::Kernel { fixed, .. } => write!(f, "K[{fixed}]"),
        }
    }
}

/// A group element in either representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupElement {
    Explicit(usize),
    Symbolic(SymbolicElement),
}

/// Group homomorphisms: explicit tables, restriction maps ρ_{β,λ} on a
/// symbolic group, and inclusions of explicit subgroups.
#[derive(Debug, Clone)]
pub enum GroupHom {
    Explicit {
        domain: Arc<ExplicitGroup>,
        codomain: Arc<ExplicitGroup>,
        map: Vec<usize>,
    },
    Restriction {
        domain: Arc<SymbolicGroup>,
        below: Ordinal,
        codomain: Arc<SymbolicGroup>,
    },
    Inclusion {
        group: Arc<ExplicitGroup>,
        sub: SubgroupMask,
    },
}

impl GroupHom {
    /// Verified explicit homomorphism.
    pub fn explicit(
        domain: Arc<ExplicitGroup>,
        codomain: Arc<ExplicitGroup>,
        map: Vec<usize>,
    ) -> Result<GroupHom, GroupError> {
        if map.len() != domain.order() || map.iter().any(|&i| i >= codomain.order()) {
            return Err(GroupError::NotAHomomorphism);
        }
        for a in 0..domain.order() {
            for b in 0..domain.order() {
                if map[domain.mul(a, b)] != codomain.mul(map[a], map[b]) {
                    return Err(GroupError::NotAHomomorphism);
                }
            }
        }
        Ok(GroupHom::Explicit { domain, codomain, map })
    }

    /// ρ_{β,λ}: truncation of a symbolic group to stages strictly below β.
    pub fn restriction(domain: Arc<SymbolicGroup>, below: Ordinal) -> GroupHom {
        let codomain =
            SymbolicGroup::new(domain.table.clone(), below.clone(), domain.step_modulus);
        GroupHom::Restriction { domain, below, codomain }
    }

    pub fn inclusion(group: Arc<ExplicitGroup>, sub: SubgroupMask) -> Result<GroupHom, GroupError> {
        if !group.is_subgroup_mask(sub) {
            return Err(GroupError::NotAnInclusion);
        }
        Ok(GroupHom::Inclusion { group, sub })
    }

    /// Exact preimage of a subgroup of the codomain.
    pub fn preimage(&self, h: &Subgroup) -> Result<Subgroup, GroupError> {
        match (self, h) {
            (GroupHom::Explicit { domain, codomain, map }, Subgroup::Explicit { group, mask }) => {
                if !Arc::ptr_eq(codomain, group) {
                    return Err(GroupError::CodomainMismatch);
                }
                let mut out = 0u32;
                for g in 0..domain.order() {
                    if mask & (1 << map[g]) != 0 {
                        out |= 1 << g;
                    }
                }
                Ok(Subgroup::Explicit { group: domain.clone(), mask: out })
            }
            (GroupHom::Restriction { domain, below, codomain }, Subgroup::Kernel { group, fixed }) => {
                if group != codomain {
                    return Err(GroupError::CodomainMismatch);
                }
                // a kernel K_E with E ⊆ [0,β) pulls back to K_E in the larger
                // group: the restriction forgets exactly the stages ≥ β
                if fixed.strict_bound() > *below {
                    return Err(GroupError::CodomainMismatch);
                }
                Ok(Subgroup::Kernel { group: domain.clone(), fixed: fixed.clone() })
            }
            (GroupHom::Inclusion { group, sub }, Subgroup::Explicit { group: g2, mask }) => {
                if !Arc::ptr_eq(group, g2) {
                    return Err(GroupError::CodomainMismatch);
                }
                Ok(Subgroup::Explicit { group: group.clone(), mask: mask & sub })
            }
            _ => Err(GroupError::MixedRepresentation),
        }
    }

    /// Kernel = preimage of the trivial subgroup of the codomain.
    pub fn kernel(&self) -> Result<Subgroup, GroupError> {
        match self {
            GroupHom::Explicit { codomain, .. } => {
                self.preimage(&Subgroup::trivial_explicit(codomain))
            }
            GroupHom::Restriction { codomain, .. } => {
                self.preimage(&Subgroup::trivial_symbolic(codomain))
            }
            GroupHom::Inclusion { group, .. } => self.preimage(&Subgroup::trivial_explicit(group)),
        }
    }
}

/// Stabilizer sym(ẋ) = {g ∈ G : g·ẋ = ẋ} of a name under an explicit group.
pub fn stabilizer(group: &Arc<ExplicitGroup>, name: &crate::forcing::PName) -> Result<Subgroup, GroupError> {
    Ok(Subgroup::Explicit { group: group.clone(), mask: group.stabilizer_mask(name)? })
}
