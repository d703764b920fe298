use crate::ordinal::{AtomTable, CountableSetDescriptor, Ordinal};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// The abelian iteration group below a stage bound: elements are finitely
/// supported functions from stages to the step group Z/m (the application
/// uses m = 2 at every stage), composed pointwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicGroup {
    pub table: Arc<AtomTable>,
    pub stage_bound: Ordinal,
    pub step_modulus: u32,
}

impl SymbolicGroup {
    pub fn new(table: Arc<AtomTable>, stage_bound: Ordinal, step_modulus: u32) -> Arc<Self> {
        assert!(step_modulus >= 1);
        Arc::new(SymbolicGroup { table, stage_bound, step_modulus })
    }

    /// The Z/2-per-stage group of the unordered-pairs application.
    pub fn z2_iteration(table: Arc<AtomTable>, stage_bound: Ordinal) -> Arc<Self> {
        Self::new(table, stage_bound, 2)
    }

    pub fn identity(&self) -> SymbolicElement {
        SymbolicElement { values: BTreeMap::new() }
    }

    /// The element acting by the nontrivial swap at `stage` and trivially
    /// elsewhere (step modulus 2), or by residue `value` in general.
    pub fn single_stage(&self, stage: Ordinal, value: u32) -> SymbolicElement {
        let v = value % self.step_modulus;
        let mut values = BTreeMap::new();
        if v != 0 {
            values.insert(stage, v);
        }
        SymbolicElement { values }
    }

    pub fn mul(&self, a: &SymbolicElement, b: &SymbolicElement) -> SymbolicElement {
        let mut values = a.values.clone();
        for (stage, v) in &b.values {
            let entry = values.entry(stage.clone()).or_insert(0);
            *entry = (*entry + v) % self.step_modulus;
            if *entry == 0 {
                values.remove(stage);
            }
        }
        SymbolicElement { values }
    }

    pub fn inverse(&self, a: &SymbolicElement) -> SymbolicElement {
        let values = a
            .values
            .iter()
            .map(|(s, v)| (s.clone(), (self.step_modulus - v) % self.step_modulus))
            .filter(|(_, v)| *v != 0)
            .collect();
        SymbolicElement { values }
    }

    /// Restriction homomorphism ρ_{β,λ}: truncate to stages strictly below β.
    pub fn restrict(&self, a: &SymbolicElement, below: &Ordinal) -> SymbolicElement {
        SymbolicElement {
            values: a
                .values
                .iter()
                .filter(|(s, _)| *s < below)
                .map(|(s, v)| (s.clone(), *v))
                .collect(),
        }
    }
}

/// A finitely supported iteration-group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicElement {
    values: BTreeMap<Ordinal, u32>,
}

impl SymbolicElement {
    pub fn is_identity(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_at(&self, stage: &Ordinal) -> u32 {
        self.values.get(stage).copied().unwrap_or(0)
    }

    pub fn support(&self) -> CountableSetDescriptor {
        CountableSetDescriptor::from_points(self.values.keys().cloned())
    }

    /// Trivial on every stage of the descriptor?
    pub fn trivial_on(&self, e: &CountableSetDescriptor) -> bool {
        self.values.keys().all(|s| !e.contains(s))
    }

    pub fn stages(&self) -> impl Iterator<Item = &Ordinal> {
        self.values.keys()
    }
}

impl fmt::Display for SymbolicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> =
            self.values.iter().map(|(s, v)| format!("{s}:{v}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::parse_ordinal;

    fn setup() -> (Arc<AtomTable>, Arc<SymbolicGroup>) {
        let t = AtomTable::standard();
        let w1 = parse_ordinal(&t, "w1*1").unwrap();
        let g = SymbolicGroup::z2_iteration(t.clone(), w1);
        (t, g)
    }

    #[test]
    fn z2_elements_are_involutions_and_commute() {
        let (t, g) = setup();
        let a = g.single_stage(parse_ordinal(&t, "0").unwrap(), 1);
        let b = g.single_stage(parse_ordinal(&t, "w*1").unwrap(), 1);
        assert!(g.mul(&a, &a).is_identity());
        assert_eq!(g.mul(&a, &b), g.mul(&b, &a));
        assert_eq!(g.inverse(&a), a);
    }

    #[test]
    fn restriction_is_coherent() {
        // ρ_{γ,β} ∘ ρ_{β,λ} = ρ_{γ,λ}
        let (t, g) = setup();
        let o = |s: &str| parse_ordinal(&t, s).unwrap();
        let e = g.mul(
            &g.single_stage(o("1"), 1),
            &g.mul(&g.single_stage(o("w*1"), 1), &g.single_stage(o("w*2 + 3"), 1)),
        );
        let beta = o("w*2");
        let gamma = o("2");
        let two_step = g.restrict(&g.restrict(&e, &beta), &gamma);
        let one_step = g.restrict(&e, &gamma);
        assert_eq!(two_step, one_step);
    }

    #[test]
    fn support_and_kernel_membership() {
        let (t, g) = setup();
        let o = |s: &str| parse_ordinal(&t, s).unwrap();
        let e = g.single_stage(o("w*1 + 5"), 1);
        assert!(e.trivial_on(&CountableSetDescriptor::initial_segment(o("w*1"))));
        assert!(!e.trivial_on(&CountableSetDescriptor::initial_segment(o("w*2"))));
        assert_eq!(e.support(), CountableSetDescriptor::singleton(o("w*1 + 5")));
    }
}
