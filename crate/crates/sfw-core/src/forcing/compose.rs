use super::constructors::check_name;
use super::forces::Semantics;
use super::hset::HSet;
use super::name::PName;
use super::poset::{CondId, Poset};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComposeError {
    #[error("not a poset name: {0}")]
    NotAPosetName(String),
}

/// A name coding a forcing notion: the universe of conditions, the order as a
/// set of ordered pairs ⟨q, q'⟩ (meaning q ≤ q'), and the top condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetName {
    pub universe: PName,
    pub order: PName,
    pub top: PName,
}

impl PosetName {
    /// The check name of a ground-model poset, conditions coded as naturals.
    pub fn check(outer: &Poset, inner: &Poset) -> PosetName {
        let universe = check_name(
            outer,
            &HSet::from_elems(inner.conditions().map(|i| HSet::nat(i as u64))),
        );
        let order = check_name(
            outer,
            &HSet::from_elems(inner.conditions().flat_map(|a| {
                inner
                    .conditions()
                    .filter(move |&b| inner.le(a, b))
                    .map(move |b| HSet::kpair(HSet::nat(a as u64), HSet::nat(b as u64)))
            })),
        );
        let top = check_name(outer, &HSet::nat(inner.top() as u64));
        PosetName { universe, order, top }
    }
}

/// The standard two-step iteration P * Q̇ on a finite head poset. Conditions
/// are pairs (p, q̇) with p ⊩ q̇ ∈ Q̇, quotiented by forced equality of the
/// second coordinate; (p', q̇') ≤ (p, q̇) iff p' ≤ p and p' ⊩ q̇' ≤ q̇.
pub fn two_step_compose(head: &Poset, step: &PosetName) -> Result<Poset, ComposeError> {
    let sem = Semantics::new(head);
    let filters = sem.filter_count();

    // valuate and validate the step poset under every maximal filter
    let mut universes: Vec<HSet> = Vec::with_capacity(filters);
    let mut orders: Vec<Vec<(HSet, HSet)>> = Vec::with_capacity(filters);
    for i in 0..filters {
        let u = sem.value(&step.universe, i);
        let o = sem.value(&step.order, i);
        let t = sem.value(&step.top, i);
        let mut pairs = Vec::with_capacity(o.len());
        for e in o.elements() {
            let Some((a, b)) = e.as_kpair() else {
                return Err(ComposeError::NotAPosetName(format!(
                    "order element {e} is not an ordered pair"
                )));
            };
            pairs.push((a, b));
        }
        let elems: Vec<HSet> = u.elements().cloned().collect();
        let top_idx = elems.iter().position(|e| *e == t).ok_or_else(|| {
            ComposeError::NotAPosetName(format!("top {t} is not in the universe"))
        })?;
        let labels: Vec<String> = (0..elems.len()).map(|k| format!("q{k}")).collect();
        let le_pairs: Vec<(CondId, CondId)> = pairs
            .iter()
            .filter_map(|(a, b)| {
                let ia = elems.iter().position(|e| e == a)?;
                let ib = elems.iter().position(|e| e == b)?;
                Some((ia, ib))
            })
            .collect();
        if le_pairs.len() != pairs.len() {
            return Err(ComposeError::NotAPosetName(
                "order mentions elements outside the universe".into(),
            ));
        }
        let candidate = Poset::from_parts(labels, &le_pairs, top_idx);
        let report = candidate.validate();
        if !report.is_valid() {
            return Err(ComposeError::NotAPosetName(format!(
                "valuation under filter {i} violates {:?}",
                report.violations[0]
            )));
        }
        universes.push(u);
        orders.push(pairs);
    }

    // candidate second coordinates: the constituents of the universe name
    let mut candidates: Vec<PName> =
        step.universe.entries().iter().map(|(c, _)| c.clone()).collect();
    candidates.push(step.top.clone());
    candidates.sort();
    candidates.dedup();

    let filter_indices_containing = |p: CondId| -> Vec<usize> {
        (0..filters)
            .filter(|&i| sem.filters()[i].contains(p))
            .collect()
    };

    // conditions (p, q̇) with p ⊩ q̇ ∈ Q̇, quotiented by forced equality
    let mut conds: Vec<(CondId, PName)> = Vec::new();
    for p in head.conditions() {
        let live = filter_indices_containing(p);
        let mut reprs: Vec<PName> = Vec::new();
        'cand: for y in &candidates {
            for &i in &live {
                if !universes[i].contains(&sem.value(y, i)) {
                    continue 'cand;
                }
            }
            // forced-equality quotient: skip if an earlier candidate matches
            let dup = reprs.iter().any(|r| {
                live.iter().all(|&i| sem.value(r, i) == sem.value(y, i))
            });
            if !dup {
                reprs.push(y.clone());
            }
        }
        for y in reprs {
            conds.push((p, y));
        }
    }

    let label_of = |p: CondId, y: &PName| {
        let k = candidates.iter().position(|c| c == y).expect("representative is a candidate");
        format!("{}*q{}", head.label(p), k)
    };
    let labels: Vec<String> = conds.iter().map(|(p, y)| label_of(*p, y)).collect();

    let le_holds = |a: &(CondId, PName), b: &(CondId, PName)| -> bool {
        let (p2, y2) = a;
        let (p1, y1) = b;
        if !head.le(*p2, *p1) {
            return false;
        }
        filter_indices_containing(*p2).iter().all(|&i| {
            let v2 = sem.value(y2, i);
            let v1 = sem.value(y1, i);
            v2 == v1 || orders[i].iter().any(|(x, y)| *x == v2 && *y == v1)
        })
    };

    let mut le_pairs: Vec<(CondId, CondId)> = Vec::new();
    for (ia, a) in conds.iter().enumerate() {
        for (ib, b) in conds.iter().enumerate() {
            if le_holds(a, b) {
                le_pairs.push((ia, ib));
            }
        }
    }
    let top_idx = conds
        .iter()
        .position(|(p, y)| {
            *p == head.top()
                && filter_indices_containing(head.top())
                    .iter()
                    .all(|&i| sem.value(y, i) == sem.value(&step.top, i))
        })
        .expect("composed top exists");
    Ok(Poset::from_parts(labels, &le_pairs, top_idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_head_gives_the_step_poset() {
        let head = Poset::trivial();
        let inner = Poset::antichain_with_top(2);
        let q = PosetName::check(&head, &inner);
        let composed = two_step_compose(&head, &q).unwrap();
        assert!(composed.validate().is_valid());
        assert_eq!(composed.len(), inner.len());
        assert_eq!(composed.maximal_filters().len(), inner.maximal_filters().len());
    }

    #[test]
    fn trivial_step_gives_the_head_poset() {
        let head = Poset::antichain_with_top(2);
        let q = PosetName::check(&head, &Poset::trivial());
        let composed = two_step_compose(&head, &q).unwrap();
        assert!(composed.validate().is_valid());
        assert_eq!(composed.len(), head.len());
    }

    #[test]
    fn two_atom_square_has_nine_conditions() {
        // oracle: all pairs (p, q̌) modulo forced equality; check names are
        // filter-independent so the quotient is trivial and 3·3 = 9 remain
        let head = Poset::antichain_with_top(2);
        let q = PosetName::check(&head, &Poset::antichain_with_top(2));
        let composed = two_step_compose(&head, &q).unwrap();
        assert!(composed.validate().is_valid());
        assert_eq!(composed.len(), 9);
        // maximal filters: 2 head leaves × 2 step leaves
        assert_eq!(composed.maximal_filters().len(), 4);
    }

    #[test]
    fn defective_order_name_is_rejected() {
        let head = Poset::trivial();
        let inner = Poset::antichain_with_top(1);
        let mut q = PosetName::check(&head, &inner);
        // break the order: drop the reflexive pairs entirely
        q.order = PName::empty();
        match two_step_compose(&head, &q) {
            Err(ComposeError::NotAPosetName(_)) => {}
            other => panic!("expected NotAPosetName, got {other:?}"),
        }
    }

    #[test]
    fn maximal_filters_factor_through_projections() {
        // two-step factorization at desk scale: maximal filters of P * Q̌
        // correspond exactly to pairs of maximal filters
        let head = Poset::antichain_with_top(2);
        let inner = Poset::antichain_with_top(2);
        let q = PosetName::check(&head, &inner);
        let composed = two_step_compose(&head, &q).unwrap();
        let product_count = head.maximal_filters().len() * inner.maximal_filters().len();
        assert_eq!(composed.maximal_filters().len(), product_count);
        // projections of composed maximal filters are maximal on the head
        for f in composed.maximal_filters() {
            let mut head_conds: Vec<CondId> = Vec::new();
            for c in f.members() {
                let label = composed.label(c).to_string();
                let head_label = label.split('*').next().unwrap();
                head_conds.push(head.lookup(head_label).unwrap());
            }
            let projected: std::collections::BTreeSet<CondId> = head_conds.into_iter().collect();
            assert!(head
                .maximal_filters()
                .iter()
                .any(|hf| hf.members().collect::<std::collections::BTreeSet<_>>() == projected));
        }
    }
}
