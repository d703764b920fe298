//! The filter-of-subgroups algebra: axiom audits, ω₁-completion, pullback and
//! restriction along homomorphisms, and generated normal (ω₁-complete)
//! filters. Two representations sit behind one interface: an explicit minimal
//! antichain over a finite subgroup lattice (oracle-grade, exhaustively
//! checkable) and a support ideal over a symbolic abelian iteration group.

mod audit;

pub use audit::{FilterAuditReport, FilterViolation, NormalityWitness, Omega1Witness};

use crate::groups::{
    ExplicitGroup, GroupHom, Subgroup, SubgroupMask, SymbolicGroup,
};
use crate::ordinal::{CountableSetDescriptor, OrdClass, Ordinal};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error("subgroup/filter ambient groups differ")]
    AmbientMismatch,
    #[error("explicit and symbolic representations do not mix")]
    MixedRepresentation,
    #[error("filter is not on the homomorphism codomain")]
    CodomainMismatch,
    #[error("homomorphism is not an inclusion")]
    NotAnInclusion,
    #[error("not a normal filter: {0}")]
    NotAFilter(String),
    #[error(transparent)]
    Group(#[from] crate::groups::GroupError),
}

/// Declared closure level of a support ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureMode {
    FiniteUnions,
    CountableUnions,
}

/// The index-set ideal behind a symbolic filter. Restricted to the shapes the
/// iteration actually produces: a finite union-closed family of descriptors,
/// or one schematic family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealRepr {
    /// Finitely many descriptors, closed under pairwise union.
    Singles(BTreeSet<CountableSetDescriptor>),
    /// All prefixes [0, m) for m < bound.
    Prefixes { bound: Ordinal },
    /// All finite subsets of [0, bound).
    FiniteSubsets { bound: Ordinal },
    /// All (countable) subsets of [0, bound).
    CountableSubsets { bound: Ordinal },
}

impl IdealRepr {
    /// Is the index set `e` below some member of the ideal?
    pub fn covers(&self, e: &CountableSetDescriptor) -> bool {
        match self {
            IdealRepr::Singles(ds) => ds.iter().any(|d| e.subset_of(d)),
            IdealRepr::Prefixes { bound } => e.strict_bound() < *bound,
            IdealRepr::FiniteSubsets { bound } => e.is_finite() && e.strict_bound() <= *bound,
            IdealRepr::CountableSubsets { bound } => e.strict_bound() <= *bound,
        }
    }

    /// Is the family closed under countable unions of its members?
    pub fn countable_union_closed(&self, table: &crate::ordinal::AtomTable) -> bool {
        match self {
            // countably many picks from a finite family collapse to finitely many
            IdealRepr::Singles(_) => true,
            // ⋃ [0, mₙ) = [0, sup mₙ); sup < bound unless countably cofinal
            IdealRepr::Prefixes { bound } => bound.classify(table) != OrdClass::CofOmega,
            // the singletons {n} union to [0, ω) once the bound is infinite
            IdealRepr::FiniteSubsets { bound } => bound.is_finite(),
            IdealRepr::CountableSubsets { .. } => true,
        }
    }
}

/// A filter of subgroups, explicit or symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterOfSubgroups {
    Explicit(ExplicitFilter),
    SupportIdeal(SupportIdealFilter),
}

/// Upward closure of a minimal antichain of subgroups over a finite group;
/// `generate_normal_filter` pre-closes the antichain under conjugation and
/// intersection so the represented family is the generated normal filter.
#[derive(Debug, Clone)]
pub struct ExplicitFilter {
    pub group: Arc<ExplicitGroup>,
    /// Mask of the ambient subgroup (the full group unless restricted).
    pub ambient: SubgroupMask,
    /// Pairwise incomparable minimal members, sorted.
    pub antichain: Vec<SubgroupMask>,
}

impl PartialEq for ExplicitFilter {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            && self.ambient == other.ambient
            && self.antichain == other.antichain
    }
}
impl Eq for ExplicitFilter {}

/// A filter on a symbolic group: K ∈ F iff K ⊇ K_E for some E in the ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportIdealFilter {
    pub group: Arc<SymbolicGroup>,
    pub mode: ClosureMode,
    pub ideal: IdealRepr,
}

/// Reduces a subgroup family to its minimal elements, sorted.
fn minimal_antichain(mut masks: Vec<SubgroupMask>) -> Vec<SubgroupMask> {
    masks.sort_unstable();
    masks.dedup();
    masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&n| n != m && n & !m == 0))
        .collect()
}

impl ExplicitFilter {
    /// Raw antichain family: the upward closure of `generators` within the
    /// ambient subgroup. Not necessarily a filter; `audit` reports.
    pub fn from_generators(
        group: Arc<ExplicitGroup>,
        ambient: SubgroupMask,
        generators: Vec<SubgroupMask>,
    ) -> Result<ExplicitFilter, FilterError> {
        for &g in &generators {
            if g & !ambient != 0 || !group.is_subgroup_mask(g) {
                return Err(FilterError::AmbientMismatch);
            }
        }
        let gens = if generators.is_empty() { vec![ambient] } else { generators };
        Ok(ExplicitFilter { group, ambient, antichain: minimal_antichain(gens) })
    }

    pub fn principal(group: Arc<ExplicitGroup>) -> ExplicitFilter {
        let ambient = group.full_mask();
        ExplicitFilter { group, ambient, antichain: vec![ambient] }
    }

    pub fn contains_mask(&self, mask: SubgroupMask) -> bool {
        self.antichain.iter().any(|&g| g & !mask == 0)
    }

    /// Every member subgroup, by lattice enumeration.
    pub fn member_masks(&self) -> Vec<SubgroupMask> {
        self.group
            .subgroups_within(self.ambient)
            .into_iter()
            .filter(|&k| self.contains_mask(k))
            .collect()
    }
}

impl SupportIdealFilter {
    pub fn principal(group: Arc<SymbolicGroup>) -> SupportIdealFilter {
        let mut singles = BTreeSet::new();
        singles.insert(CountableSetDescriptor::empty());
        SupportIdealFilter {
            group,
            mode: ClosureMode::FiniteUnions,
            ideal: IdealRepr::Singles(singles),
        }
    }

    /// Union-closes a finite descriptor family (the empty set included).
    pub fn from_kernels(
        group: Arc<SymbolicGroup>,
        kernels: Vec<CountableSetDescriptor>,
        mode: ClosureMode,
    ) -> SupportIdealFilter {
        let mut singles: BTreeSet<CountableSetDescriptor> = BTreeSet::new();
        singles.insert(CountableSetDescriptor::empty());
        for k in kernels {
            singles.insert(k);
        }
        loop {
            let mut grew = false;
            let snapshot: Vec<CountableSetDescriptor> = singles.iter().cloned().collect();
            for a in &snapshot {
                for b in &snapshot {
                    if singles.insert(a.union(b)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        SupportIdealFilter { group, mode, ideal: IdealRepr::Singles(singles) }
    }

    /// The head-generator family at a limit: all prefixes [0, β) for β < bound.
    pub fn from_prefixes(
        group: Arc<SymbolicGroup>,
        bound: Ordinal,
        mode: ClosureMode,
    ) -> SupportIdealFilter {
        let ideal = IdealRepr::Prefixes { bound };
        let f = SupportIdealFilter { group, mode, ideal };
        match mode {
            ClosureMode::FiniteUnions => f,
            ClosureMode::CountableUnions => f.omega1_completed(),
        }
    }

    pub fn finite_support(group: Arc<SymbolicGroup>, bound: Ordinal) -> SupportIdealFilter {
        SupportIdealFilter {
            group,
            mode: ClosureMode::FiniteUnions,
            ideal: IdealRepr::FiniteSubsets { bound },
        }
    }

    pub fn contains_kernel(&self, e: &CountableSetDescriptor) -> bool {
        self.ideal.covers(e)
    }

    /// Smallest extension whose ideal is closed under countable unions.
    pub fn omega1_completed(&self) -> SupportIdealFilter {
        let table = &self.group.table;
        let ideal = if self.ideal.countable_union_closed(table) {
            self.ideal.clone()
        } else {
            match &self.ideal {
                IdealRepr::Prefixes { bound } => IdealRepr::Prefixes { bound: bound.succ() },
                IdealRepr::FiniteSubsets { bound } => {
                    IdealRepr::CountableSubsets { bound: bound.clone() }
                }
                other => other.clone(),
            }
        };
        SupportIdealFilter {
            group: self.group.clone(),
            mode: ClosureMode::CountableUnions,
            ideal,
        }
    }
}

impl FilterOfSubgroups {
    pub fn principal_explicit(group: Arc<ExplicitGroup>) -> FilterOfSubgroups {
        FilterOfSubgroups::Explicit(ExplicitFilter::principal(group))
    }

    pub fn principal_symbolic(group: Arc<SymbolicGroup>) -> FilterOfSubgroups {
        FilterOfSubgroups::SupportIdeal(SupportIdealFilter::principal(group))
    }

    /// Membership test: in the explicit regime the antichain is searched
    /// directly (generated filters are pre-closed under conjugated finite
    /// intersections); in the symbolic regime the ideal is consulted.
    pub fn contains(&self, k: &Subgroup) -> Result<bool, FilterError> {
        match (self, k) {
            (FilterOfSubgroups::Explicit(f), Subgroup::Explicit { group, mask }) => {
                if !Arc::ptr_eq(&f.group, group) {
                    return Err(FilterError::AmbientMismatch);
                }
                Ok(f.contains_mask(*mask))
            }
            (FilterOfSubgroups::SupportIdeal(f), Subgroup::Kernel { group, fixed }) => {
                if f.group != *group {
                    return Err(FilterError::AmbientMismatch);
                }
                Ok(f.contains_kernel(fixed))
            }
            _ => Err(FilterError::MixedRepresentation),
        }
    }

    /// The ω₁-completion: identity on explicit filters over finite groups
    /// (countable chains stabilize), ideal completion symbolically. The input
    /// must audit as a normal filter.
    pub fn omega1_completion(&self) -> Result<FilterOfSubgroups, FilterError> {
        let report = self.audit()?;
        if !report.is_filter || !report.is_normal {
            return Err(FilterError::NotAFilter(report.describe_defect()));
        }
        Ok(match self {
            FilterOfSubgroups::Explicit(f) => FilterOfSubgroups::Explicit(f.clone()),
            FilterOfSubgroups::SupportIdeal(f) => {
                FilterOfSubgroups::SupportIdeal(f.omega1_completed())
            }
        })
    }

    /// Pullback π*F = {K : ∃H ∈ F, π⁻¹(H) ≤ K} along a homomorphism into
    /// F's ambient group. The input must be a normal ω₁-complete filter.
    pub fn pullback(&self, hom: &GroupHom) -> Result<FilterOfSubgroups, FilterError> {
        let report = self.audit()?;
        if !report.all_positive() {
            return Err(FilterError::NotAFilter(report.describe_defect()));
        }
        match (self, hom) {
            (FilterOfSubgroups::Explicit(f), GroupHom::Explicit { domain, codomain, map }) => {
                if !Arc::ptr_eq(codomain, &f.group) {
                    return Err(FilterError::CodomainMismatch);
                }
                let mut gens = Vec::new();
                for &h in &f.antichain {
                    let mut pre = 0u32;
                    for g in 0..domain.order() {
                        if h & (1 << map[g]) != 0 {
                            pre |= 1 << g;
                        }
                    }
                    gens.push(pre);
                }
                Ok(FilterOfSubgroups::Explicit(ExplicitFilter {
                    group: domain.clone(),
                    ambient: domain.full_mask(),
                    antichain: minimal_antichain(gens),
                }))
            }
            (
                FilterOfSubgroups::SupportIdeal(f),
                GroupHom::Restriction { domain, codomain, .. },
            ) => {
                if *codomain != f.group {
                    return Err(FilterError::CodomainMismatch);
                }
                // π⁻¹(K_E) = K_E in the longer iteration group
                Ok(FilterOfSubgroups::SupportIdeal(SupportIdealFilter {
                    group: domain.clone(),
                    mode: f.mode,
                    ideal: f.ideal.clone(),
                }))
            }
            (FilterOfSubgroups::Explicit(f), GroupHom::Inclusion { group, sub }) => {
                if !Arc::ptr_eq(group, &f.group) {
                    return Err(FilterError::CodomainMismatch);
                }
                let gens: Vec<SubgroupMask> =
                    f.antichain.iter().map(|&h| h & sub).collect();
                Ok(FilterOfSubgroups::Explicit(ExplicitFilter {
                    group: group.clone(),
                    ambient: *sub,
                    antichain: minimal_antichain(gens),
                }))
            }
            _ => Err(FilterError::MixedRepresentation),
        }
    }

    /// Restriction ι*F to an explicit subgroup: the trace filter generated by
    /// the meets M ∩ H of members with the subgroup.
    pub fn restrict(&self, hom: &GroupHom) -> Result<FilterOfSubgroups, FilterError> {
        match hom {
            GroupHom::Inclusion { .. } => self.pullback(hom),
            _ => Err(FilterError::NotAnInclusion),
        }
    }

    pub fn audit(&self) -> Result<FilterAuditReport, FilterError> {
        audit::audit(self)
    }
}

/// Generator families for `generate_normal_filter`: an explicit list, or the
/// schematic family of head-restriction kernels below a limit.
#[derive(Debug, Clone)]
pub enum GeneratorFamily {
    List(Vec<Subgroup>),
    HeadKernels { group: Arc<SymbolicGroup>, below: Ordinal },
}

/// Ambient group reference for filter generation.
#[derive(Debug, Clone)]
pub enum Ambient {
    Explicit(Arc<ExplicitGroup>),
    Symbolic(Arc<SymbolicGroup>),
}

/// The least normal filter (finite mode) or least normal ω₁-complete filter
/// (countable mode) containing the generators.
pub fn generate_normal_filter(
    ambient: &Ambient,
    generators: &GeneratorFamily,
    mode: ClosureMode,
) -> Result<FilterOfSubgroups, FilterError> {
    match (ambient, generators) {
        (Ambient::Explicit(group), GeneratorFamily::List(gens)) => {
            let mut masks: Vec<SubgroupMask> = Vec::new();
            for g in gens {
                match g {
                    Subgroup::Explicit { group: gg, mask } => {
                        if !Arc::ptr_eq(gg, group) {
                            return Err(FilterError::AmbientMismatch);
                        }
                        masks.push(*mask);
                    }
                    Subgroup::Kernel { .. } => return Err(FilterError::MixedRepresentation),
                }
            }
            if masks.is_empty() {
                return Ok(FilterOfSubgroups::Explicit(ExplicitFilter::principal(group.clone())));
            }
            // close under conjugation and pairwise intersection; on a finite
            // lattice the countable mode coincides with the finite one
            let mut closed: BTreeSet<SubgroupMask> = BTreeSet::new();
            for &m in &masks {
                for e in 0..group.order() {
                    closed.insert(group.conjugate_mask(e, m));
                }
            }
            loop {
                let snapshot: Vec<SubgroupMask> = closed.iter().copied().collect();
                let before = closed.len();
                for &a in &snapshot {
                    for &b in &snapshot {
                        closed.insert(a & b);
                    }
                }
                if closed.len() == before {
                    break;
                }
            }
            Ok(FilterOfSubgroups::Explicit(ExplicitFilter {
                group: group.clone(),
                ambient: group.full_mask(),
                antichain: minimal_antichain(closed.into_iter().collect()),
            }))
        }
        (Ambient::Symbolic(group), GeneratorFamily::List(gens)) => {
            let mut kernels = Vec::new();
            for g in gens {
                match g {
                    Subgroup::Kernel { group: gg, fixed } => {
                        if gg != group {
                            return Err(FilterError::AmbientMismatch);
                        }
                        kernels.push(fixed.clone());
                    }
                    Subgroup::Explicit { .. } => return Err(FilterError::MixedRepresentation),
                }
            }
            Ok(FilterOfSubgroups::SupportIdeal(SupportIdealFilter::from_kernels(
                group.clone(),
                kernels,
                mode,
            )))
        }
        (Ambient::Symbolic(group), GeneratorFamily::HeadKernels { group: gg, below }) => {
            if gg != group {
                return Err(FilterError::AmbientMismatch);
            }
            Ok(FilterOfSubgroups::SupportIdeal(SupportIdealFilter::from_prefixes(
                group.clone(),
                below.clone(),
                mode,
            )))
        }
        (Ambient::Explicit(_), GeneratorFamily::HeadKernels { .. }) => {
            Err(FilterError::MixedRepresentation)
        }
    }
}

impl fmt::Display for FilterOfSubgroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterOfSubgroups::Explicit(x) => {
                write!(f, "antichain[")?;
                for (i, m) in x.antichain.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{m:#x}")?;
                }
                write!(f, "]")
            }
            FilterOfSubgroups::SupportIdeal(x) => {
                let mode = match x.mode {
                    ClosureMode::FiniteUnions => "finite_unions",
                    ClosureMode::CountableUnions => "countable_unions",
                };
                match &x.ideal {
                    IdealRepr::Singles(ds) => {
                        let parts: Vec<String> = ds.iter().map(|d| format!("K[{d}]")).collect();
                        write!(f, "ideal<{mode}>{{{}}}", parts.join(", "))
                    }
                    IdealRepr::Prefixes { bound } => {
                        write!(f, "ideal<{mode}>{{prefixes below {bound}}}")
                    }
                    IdealRepr::FiniteSubsets { bound } => {
                        write!(f, "ideal<{mode}>{{finite subsets of [0, {bound})}}")
                    }
                    IdealRepr::CountableSubsets { bound } => {
                        write!(f, "ideal<{mode}>{{countable subsets of [0, {bound})}}")
                    }
                }
            }
        }
    }
}

/// Canonical JSON form, schema-stable for certificates.
impl FilterOfSubgroups {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            FilterOfSubgroups::Explicit(x) => serde_json::json!({
                "repr": "antichain",
                "ambient": x.ambient,
                "generators": x.antichain,
            }),
            FilterOfSubgroups::SupportIdeal(x) => {
                let mode = match x.mode {
                    ClosureMode::FiniteUnions => "finite_unions",
                    ClosureMode::CountableUnions => "countable_unions",
                };
                let (kind, payload) = match &x.ideal {
                    IdealRepr::Singles(ds) => (
                        "singles",
                        serde_json::Value::Array(ds.iter().map(|d| d.to_json()).collect()),
                    ),
                    IdealRepr::Prefixes { bound } => {
                        ("prefixes", serde_json::Value::String(bound.to_string()))
                    }
                    IdealRepr::FiniteSubsets { bound } => {
                        ("finite_subsets", serde_json::Value::String(bound.to_string()))
                    }
                    IdealRepr::CountableSubsets { bound } => {
                        ("countable_subsets", serde_json::Value::String(bound.to_string()))
                    }
                };
                serde_json::json!({
                    "repr": "support_ideal",
                    "mode": mode,
                    "ideal": { "kind": kind, "descriptors": payload },
                })
            }
        }
    }
}

#[cfg(test)]
mod tests;
