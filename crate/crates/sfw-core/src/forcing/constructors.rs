use super::forces::{ForcesError, Semantics};
use super::formula::BoundedFormula;
use super::hset::HSet;
use super::name::PName;
use super::poset::{CondId, Poset};

/// Check name: ǎ = {⟨ě, 1⟩ : e ∈ a}, fixed by every automorphism.
pub fn check_name(poset: &Poset, a: &HSet) -> PName {
    let top = poset.top();
    PName::make(a.elements().map(|e| (check_name(poset, e), top)).collect())
}

/// Unordered pair name {⟨ẋ,1⟩, ⟨ẏ,1⟩}.
pub fn unordered_pair_name(poset: &Poset, x: &PName, y: &PName) -> PName {
    let top = poset.top();
    PName::make(vec![(x.clone(), top), (y.clone(), top)])
}

/// Ordered pair name ⟨ẋ,ẏ⟩ in Kuratowski form.
pub fn ordered_pair_name(poset: &Poset, x: &PName, y: &PName) -> PName {
    let fst = unordered_pair_name(poset, x, x);
    let snd = unordered_pair_name(poset, x, y);
    unordered_pair_name(poset, &fst, &snd)
}

/// Structural decomposition of a canonical ordered-pair name.
pub fn as_ordered_pair_name(poset: &Poset, n: &PName) -> Option<(PName, PName)> {
    let top = poset.top();
    let entries = n.entries();
    if !entries.iter().all(|(_, p)| *p == top) {
        return None;
    }
    let comps: Vec<&PName> = entries.iter().map(|(c, _)| c).collect();
    let unwrap_set = |m: &PName| -> Option<Vec<PName>> {
        if m.entries().iter().all(|(_, p)| *p == top) {
            Some(m.entries().iter().map(|(c, _)| c.clone()).collect())
        } else {
            None
        }
    };
    match comps.as_slice() {
        [u] => {
            // {{x}} encodes (x, x)
            match unwrap_set(u)?.as_slice() {
                [x] => Some((x.clone(), x.clone())),
                _ => None,
            }
        }
        [u, v] => {
            let us = unwrap_set(u)?;
            let vs = unwrap_set(v)?;
            let (single, double) = match (us.as_slice(), vs.as_slice()) {
                ([x], [a, b]) => (x.clone(), (a.clone(), b.clone())),
                ([a, b], [x]) => (x.clone(), (a.clone(), b.clone())),
                _ => return None,
            };
            let (a, b) = double;
            if a == single {
                Some((single, b))
            } else if b == single {
                Some((single, a))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Canonical sequence name ⟨ẋ_j : j < n⟩: the graph {⟨⟨ǰ, ẋ_j⟩, 1⟩ : j < n}.
pub fn tuple_name(poset: &Poset, components: &[PName]) -> PName {
    let top = poset.top();
    PName::make(
        components
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let idx = check_name(poset, &HSet::nat(j as u64));
                (ordered_pair_name(poset, &idx, x), top)
            })
            .collect(),
    )
}

/// Union name: ⋃Ȧ = {⟨τ,r⟩ : ∃⟨σ,p⟩∈Ȧ ∃⟨τ,q⟩∈σ (r ≤ p, r ≤ q)}.
pub fn union_name(poset: &Poset, a: &PName) -> PName {
    let mut entries = Vec::new();
    for (sigma, p) in a.entries() {
        for (tau, q) in sigma.entries() {
            for r in poset.conditions() {
                if poset.le(r, *p) && poset.le(r, *q) {
                    entries.push((tau.clone(), r));
                }
            }
        }
    }
    PName::make(entries)
}

/// Separation name: {⟨σ,p⟩ ∈ Ȧ : p ⊩ φ(σ, params)}. The formula sees σ as
/// variable 0 and the parameters as variables 1..=k.
pub fn separation_name(
    sem: &Semantics<'_>,
    a: &PName,
    phi: &BoundedFormula,
    params: &[PName],
) -> Result<PName, ForcesError> {
    let mut entries = Vec::new();
    for (sigma, p) in a.entries() {
        let mut env = Vec::with_capacity(1 + params.len());
        env.push(sigma.clone());
        env.extend(params.iter().cloned());
        if sem.forces(*p, phi, &env)? {
            entries.push((sigma.clone(), *p));
        }
    }
    Ok(PName::make(entries))
}

/// Relational range name: {⟨τ,p⟩ : ∃⟨σ,q⟩∈Ȧ ∃r ≤ p,q (⟨⟨σ,τ⟩, r⟩ ∈ ḟ)},
/// with ⟨σ,τ⟩ matched structurally against the canonical pair name.
pub fn range_name(poset: &Poset, a: &PName, f: &PName) -> PName {
    let mut entries = Vec::new();
    for (chi, r) in f.entries() {
        let Some((sigma, tau)) = as_ordered_pair_name(poset, chi) else { continue };
        for (sigma2, q) in a.entries() {
            if *sigma2 != sigma {
                continue;
            }
            for p in poset.conditions() {
                if poset.le(*r, p) && poset.le(*r, *q) {
                    entries.push((tau.clone(), p));
                }
            }
        }
    }
    PName::make(entries)
}

/// Evaluates "1 ⊩ ẋ ⊆ ȧ" semantically: the valuation of ẋ is a subset of the
/// valuation of ȧ under every maximal filter.
pub fn forced_subset(sem: &Semantics<'_>, x: &PName, a: &PName) -> bool {
    (0..sem.filter_count()).all(|i| {
        let vx = sem.value(x, i);
        let va = sem.value(a, i);
        let ok = vx.elements().all(|e| va.contains(e));
        ok
    })
}

/// All names of rank ≤ `max_rank` whose conditions come from `conds`,
/// by cumulative powerset construction. Errors out (rather than thrashing)
/// when the count would exceed `budget`.
pub fn enumerate_names(
    conds: &[CondId],
    max_rank: u32,
    budget: usize,
) -> Result<Vec<PName>, NameBudgetError> {
    let mut names = vec![PName::empty()];
    for _ in 0..max_rank {
        let pairs = names.len().checked_mul(conds.len()).unwrap_or(usize::MAX);
        if pairs >= usize::BITS as usize || (1usize << pairs) > budget {
            return Err(NameBudgetError { pairs, budget });
        }
        let mut all_entries: Vec<(PName, CondId)> = Vec::with_capacity(pairs);
        for n in &names {
            for &c in conds {
                all_entries.push((n.clone(), c));
            }
        }
        let mut next = Vec::with_capacity(1 << pairs);
        for mask in 0usize..(1 << pairs) {
            let entries: Vec<(PName, CondId)> = all_entries
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| e.clone())
                .collect();
            next.push(PName::make(entries));
        }
        next.sort();
        next.dedup();
        names = next;
    }
    Ok(names)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("name enumeration out of budget: 2^{pairs} candidates exceeds {budget}")]
pub struct NameBudgetError {
    pub pairs: usize,
    pub budget: usize,
}

/// The bounded power-collection name HS(ȧ) = {ẋ ∈ Nm_{≤rank(ȧ)+1} :
/// 1 ⊩ ẋ ⊆ ȧ and ẋ admitted}, materialized as {⟨ẋ, 1⟩ : ...}. The admission
/// predicate is supplied by the caller (hereditary symmetry in practice).
/// Exponential by nature; callers pass a budget and receive an error beyond it.
pub fn power_collection_name(
    poset: &Poset,
    a: &PName,
    admit: &dyn Fn(&PName) -> bool,
    budget: usize,
) -> Result<PName, NameBudgetError> {
    let conds: Vec<CondId> = poset.conditions().collect();
    let candidates = enumerate_names(&conds, a.rank() + 1, budget)?;
    let sem = Semantics::new(poset);
    let top = poset.top();
    let entries: Vec<(PName, CondId)> = candidates
        .into_iter()
        .filter(|x| forced_subset(&sem, x, a) && admit(x))
        .map(|x| (x, top))
        .collect();
    Ok(PName::make(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_of_empty_evaluates_empty_everywhere() {
        let p = Poset::antichain_with_top(2);
        let c = check_name(&p, &HSet::empty());
        assert!(c.is_empty());
        for f in p.maximal_filters() {
            assert_eq!(c.evaluate(&f), HSet::empty());
        }
    }

    #[test]
    fn check_names_are_filter_independent() {
        let p = Poset::antichain_with_top(2);
        let v = HSet::nat(2);
        let c = check_name(&p, &v);
        for f in p.maximal_filters() {
            assert_eq!(c.evaluate(&f), v);
        }
    }

    #[test]
    fn union_of_check_name_unions_the_value() {
        // Ȧ = check({{0},{1}}) evaluates to {0,1} after union, on any filter
        let p = Poset::antichain_with_top(2);
        let zero = HSet::nat(0);
        let one = HSet::nat(1);
        let a = HSet::from_elems([HSet::singleton(zero.clone()), HSet::singleton(one.clone())]);
        let u = union_name(&p, &check_name(&p, &a));
        let expect = HSet::from_elems([zero, one]);
        for f in p.maximal_filters() {
            assert_eq!(u.evaluate(&f), expect);
        }
    }

    #[test]
    fn separation_filters_by_forcing() {
        // oracle: forces computed on the trivial poset entry by entry
        let p = Poset::trivial();
        let a = check_name(&p, &HSet::nat(2)); // {0, 1}
        let sem = Semantics::new(&p);
        // φ(v0) ≡ v0 = ∅̌ with the parameter ∅̌ at slot 1
        let phi = BoundedFormula::equal(0, 1);
        let sep = separation_name(&sem, &a, &phi, &[PName::empty()]).unwrap();
        for f in p.maximal_filters() {
            assert_eq!(sep.evaluate(&f), HSet::singleton(HSet::empty()));
        }
    }

    #[test]
    fn ordered_pair_name_round_trips() {
        let p = Poset::antichain_with_top(2);
        let x = PName::make(vec![(PName::empty(), 0)]);
        let y = PName::make(vec![(PName::empty(), 1)]);
        let op = ordered_pair_name(&p, &x, &y);
        assert_eq!(as_ordered_pair_name(&p, &op), Some((x.clone(), y.clone())));
        let same = ordered_pair_name(&p, &x, &x);
        assert_eq!(as_ordered_pair_name(&p, &same), Some((x.clone(), x)));
    }

    #[test]
    fn tuple_name_evaluates_to_graph() {
        let p = Poset::trivial();
        let x0 = check_name(&p, &HSet::nat(1));
        let x1 = check_name(&p, &HSet::empty());
        let t = tuple_name(&p, &[x0, x1]);
        let f = &p.maximal_filters()[0];
        let v = t.evaluate(f);
        assert_eq!(v.len(), 2);
        let expect0 = HSet::kpair(HSet::nat(0), HSet::nat(1));
        let expect1 = HSet::kpair(HSet::nat(1), HSet::empty());
        assert!(v.contains(&expect0) && v.contains(&expect1));
    }

    #[test]
    fn range_name_extracts_images() {
        // ḟ = {⟨⟨0̌,5̌-ish⟩,1⟩} over the trivial poset; Ȧ = {0}
        let p = Poset::trivial();
        let zero = check_name(&p, &HSet::nat(0));
        let one = check_name(&p, &HSet::nat(1));
        let a = check_name(&p, &HSet::nat(1)); // {0}
        let f = PName::make(vec![(ordered_pair_name(&p, &zero, &one), p.top())]);
        let rng = range_name(&p, &a, &f);
        let filt = &p.maximal_filters()[0];
        assert_eq!(rng.evaluate(filt), HSet::singleton(HSet::nat(1)));
    }

    #[test]
    fn enumeration_counts_and_budget() {
        let names = enumerate_names(&[0, 1], 2, 1 << 20).unwrap();
        // rank ≤ 1: 4 names; rank ≤ 2: subsets of 4×2 entry pairs
        assert_eq!(names.len(), 256);
        assert!(enumerate_names(&[0, 1, 2], 2, 1 << 20).is_err());
    }

    #[test]
    fn power_collection_on_tiny_input() {
        let p = Poset::trivial();
        let a = check_name(&p, &HSet::nat(1)); // {0}
        let pow = power_collection_name(&p, &a, &|_| true, 1 << 20).unwrap();
        // forced subsets of {0}: ∅-like and {0}-like names of rank ≤ 2
        let f = &p.maximal_filters()[0];
        let v = pow.evaluate(f);
        assert!(v.contains(&HSet::empty()));
        assert!(v.contains(&HSet::singleton(HSet::empty())));
        assert_eq!(v.len(), 2);
    }
}
