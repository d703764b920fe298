use super::*;
use crate::groups::{zoo, GroupElement, GroupHom, Subgroup, SymbolicGroup};
use crate::ordinal::{parse_ordinal, AtomTable, CountableSetDescriptor, Ordinal};
use std::sync::Arc;

fn w1_group() -> (Arc<AtomTable>, Arc<SymbolicGroup>) {
    let t = AtomTable::standard();
    let w1 = parse_ordinal(&t, "w1*1").unwrap();
    let g = SymbolicGroup::z2_iteration(t.clone(), w1);
    (t, g)
}

fn o(t: &Arc<AtomTable>, s: &str) -> Ordinal {
    parse_ordinal(t, s).unwrap()
}

#[test]
fn every_filter_contains_the_full_group() {
    let g = zoo::s3();
    let f = FilterOfSubgroups::principal_explicit(g.clone());
    assert!(f.contains(&Subgroup::full_explicit(&g)).unwrap());

    let (_, sym) = w1_group();
    let fs = FilterOfSubgroups::principal_symbolic(sym.clone());
    assert!(fs.contains(&Subgroup::full_symbolic(&sym)).unwrap());
}

#[test]
fn finite_support_ideal_rejects_the_everywhere_kernel() {
    // every element of the finite-support filter fixes only finitely many
    // coordinates' worth of kernel, so K_[0,ω) is not a member
    let (t, sym) = w1_group();
    let w = o(&t, "w*1");
    let f = FilterOfSubgroups::SupportIdeal(SupportIdealFilter::finite_support(
        sym.clone(),
        w.clone(),
    ));
    let k_omega = Subgroup::kernel(&sym, CountableSetDescriptor::initial_segment(w));
    assert!(!f.contains(&k_omega).unwrap());
    // finite kernels are members
    let k_fin = Subgroup::kernel(&sym, CountableSetDescriptor::from_points([o(&t, "2"), o(&t, "5")]));
    assert!(f.contains(&k_fin).unwrap());
}

#[test]
fn principal_z2_filter_excludes_the_trivial_subgroup() {
    let c2 = zoo::cyclic(2);
    let f = FilterOfSubgroups::principal_explicit(c2.clone());
    assert!(!f.contains(&Subgroup::trivial_explicit(&c2)).unwrap());
    assert!(f.contains(&Subgroup::full_explicit(&c2)).unwrap());
}

#[test]
fn ambient_mismatch_is_reported() {
    let f = FilterOfSubgroups::principal_explicit(zoo::s3());
    let other = Subgroup::full_explicit(&zoo::d4());
    assert_eq!(f.contains(&other), Err(FilterError::AmbientMismatch));
    let (_, sym) = w1_group();
    assert_eq!(
        f.contains(&Subgroup::full_symbolic(&sym)),
        Err(FilterError::MixedRepresentation)
    );
}

#[test]
fn audit_principal_filter_is_positive() {
    let f = FilterOfSubgroups::principal_explicit(zoo::s3());
    let r = f.audit().unwrap();
    assert!(r.all_positive(), "{}", r.describe_defect());
}

#[test]
fn audit_flags_non_normal_family_with_conjugator() {
    // oracle: conjugate the order-2 subgroup by a 3-cycle; the conjugate is
    // absent from the upward closure of {S₃, C₂}
    let g = zoo::s3();
    let order2 = *g.all_subgroups().iter().find(|m| m.count_ones() == 2).unwrap();
    let f = FilterOfSubgroups::Explicit(
        ExplicitFilter::from_generators(g.clone(), g.full_mask(), vec![g.full_mask(), order2])
            .unwrap(),
    );
    let r = f.audit().unwrap();
    assert!(r.is_filter, "upward closure of a chain is a filter");
    assert!(!r.is_normal);
    let w = r.normality_counterexample.expect("conjugator witness");
    // replay: the witness conjugate really is outside the family
    let conj = u32::from_str_radix(w.conjugate.trim_start_matches("0x"), 16).unwrap();
    assert!(!f.contains(&Subgroup::Explicit { group: g, mask: conj }).unwrap());
}

#[test]
fn audit_flags_intersection_gap() {
    // two incomparable order-2 subgroups of V₄: meets escape the raw family
    let g = zoo::klein_four();
    let twos: Vec<u32> = g
        .all_subgroups()
        .into_iter()
        .filter(|m| m.count_ones() == 2)
        .take(2)
        .collect();
    let f = FilterOfSubgroups::Explicit(
        ExplicitFilter::from_generators(g.clone(), g.full_mask(), twos).unwrap(),
    );
    let r = f.audit().unwrap();
    assert!(!r.is_filter);
    assert!(r
        .violations
        .iter()
        .any(|v| matches!(v, FilterViolation::NotIntersectionClosed { .. })));
    assert!(!r.is_omega1_complete);
}

#[test]
fn audit_finite_support_ideal_fails_omega1_with_singleton_witness() {
    let (t, sym) = w1_group();
    let f = FilterOfSubgroups::SupportIdeal(SupportIdealFilter::finite_support(
        sym,
        o(&t, "w*1"),
    ));
    let r = f.audit().unwrap();
    assert!(r.is_filter && r.is_normal);
    assert!(!r.is_omega1_complete);
    let w = r.omega1_counterexample.unwrap();
    assert!(w.sequence[0].contains("{0}"));
    assert!(w.intersection.contains("[0, w*1)"));
}

#[test]
fn explicit_completion_is_the_identity() {
    for g in [zoo::s3(), zoo::d4(), zoo::q8(), zoo::klein_four(), zoo::cyclic(8)] {
        let subs = g.all_subgroups();
        let f = generate_normal_filter(
            &Ambient::Explicit(g.clone()),
            &GeneratorFamily::List(vec![Subgroup::Explicit { group: g.clone(), mask: subs[subs.len() / 2] }]),
            ClosureMode::FiniteUnions,
        )
        .unwrap();
        assert_eq!(f.omega1_completion().unwrap(), f);
    }
}

#[test]
fn completion_of_finite_subsets_is_countable_subsets() {
    // oracle: sampled countable unions of finite sets land inside, and the
    // result is exactly the countable-subsets ideal
    let (t, sym) = w1_group();
    let w = o(&t, "w*1");
    let fin = FilterOfSubgroups::SupportIdeal(SupportIdealFilter::finite_support(
        sym.clone(),
        w.clone(),
    ));
    let completed = fin.omega1_completion().unwrap();
    match &completed {
        FilterOfSubgroups::SupportIdeal(f) => {
            assert_eq!(f.mode, ClosureMode::CountableUnions);
            assert_eq!(f.ideal, IdealRepr::CountableSubsets { bound: w.clone() });
        }
        _ => unreachable!(),
    }
    // the union of the singleton chain {0},{1},... is a member now
    let k_omega = Subgroup::kernel(&sym, CountableSetDescriptor::initial_segment(w));
    assert!(completed.contains(&k_omega).unwrap());
    // idempotence
    assert_eq!(completed.omega1_completion().unwrap(), completed);
}

#[test]
fn completion_is_extensive_and_monotone_symbolically() {
    let (t, sym) = w1_group();
    let w = o(&t, "w*1");
    let small = SupportIdealFilter::from_prefixes(sym.clone(), w.clone(), ClosureMode::FiniteUnions);
    let completed = FilterOfSubgroups::SupportIdeal(small.clone())
        .omega1_completion()
        .unwrap();
    // extensive: members survive
    let probe = Subgroup::kernel(&sym, CountableSetDescriptor::initial_segment(o(&t, "3")));
    assert!(FilterOfSubgroups::SupportIdeal(small).contains(&probe).unwrap());
    assert!(completed.contains(&probe).unwrap());
    // and the cofinal union joins
    let k_omega = Subgroup::kernel(&sym, CountableSetDescriptor::initial_segment(w));
    assert!(completed.contains(&k_omega).unwrap());
}

#[test]
fn pullback_along_identity_is_identity() {
    let g = zoo::s3();
    let id = GroupHom::explicit(g.clone(), g.clone(), (0..g.order()).collect()).unwrap();
    let f = FilterOfSubgroups::principal_explicit(g.clone());
    assert_eq!(f.pullback(&id).unwrap(), f);
}

#[test]
fn pullback_of_principal_codomain_filter_is_principal() {
    // sign hom S₃ → Z/2: the preimage of the full group is the full group
    let s3 = zoo::s3();
    let c2 = zoo::cyclic(2);
    let parity = |a: &crate::forcing::PosetAutomorphism| -> usize {
        let mut inversions = 0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if a.apply(i).unwrap() > a.apply(j).unwrap() {
                    inversions += 1;
                }
            }
        }
        inversions % 2
    };
    let map: Vec<usize> = s3.elements().iter().map(parity).collect();
    let hom = GroupHom::explicit(s3.clone(), c2.clone(), map).unwrap();
    let f = FilterOfSubgroups::principal_explicit(c2);
    let pulled = f.pullback(&hom).unwrap();
    assert_eq!(pulled, FilterOfSubgroups::principal_explicit(s3));
}

#[test]
fn pullback_along_restriction_keeps_kernel_generators() {
    let (t, sym) = w1_group();
    let beta = o(&t, "w*1");
    let rho = GroupHom::restriction(sym.clone(), beta.clone());
    let head_group = match &rho {
        GroupHom::Restriction { codomain, .. } => codomain.clone(),
        _ => unreachable!(),
    };
    let f_head = FilterOfSubgroups::SupportIdeal(SupportIdealFilter::from_prefixes(
        head_group,
        beta.clone(),
        ClosureMode::CountableUnions,
    ));
    let pulled = f_head.pullback(&rho).unwrap();
    // kernel-form generators survive the pullback verbatim
    let k = Subgroup::kernel(&sym, CountableSetDescriptor::initial_segment(o(&t, "4")));
    assert!(pulled.contains(&k).unwrap());
    let r = pulled.audit().unwrap();
    assert!(r.all_positive(), "{}", r.describe_defect());
}

#[test]
fn restrict_to_subgroup_traces_the_members() {
    let s3 = zoo::s3();
    let c3_mask = *s3.all_subgroups().iter().find(|m| m.count_ones() == 3).unwrap();
    let incl = GroupHom::inclusion(s3.clone(), c3_mask).unwrap();
    let f = FilterOfSubgroups::principal_explicit(s3.clone());
    let restricted = f.restrict(&incl).unwrap();
    match &restricted {
        FilterOfSubgroups::Explicit(r) => {
            assert_eq!(r.ambient, c3_mask);
            assert_eq!(r.antichain, vec![c3_mask]);
        }
        _ => unreachable!(),
    }
    assert!(restricted.audit().unwrap().all_positive());

    // restriction to the trivial subgroup is the principal filter on it
    let triv = GroupHom::inclusion(s3.clone(), s3.trivial_mask()).unwrap();
    let r2 = f.restrict(&triv).unwrap();
    match r2 {
        FilterOfSubgroups::Explicit(r) => assert_eq!(r.antichain, vec![s3.trivial_mask()]),
        _ => unreachable!(),
    }
}

#[test]
fn restrict_requires_an_inclusion() {
    let (t, sym) = w1_group();
    let rho = GroupHom::restriction(sym, o(&t, "w*1"));
    let f = FilterOfSubgroups::principal_explicit(zoo::s3());
    assert_eq!(f.restrict(&rho), Err(FilterError::NotAnInclusion));
}

#[test]
fn generated_filter_is_conjugation_and_meet_closed() {
    let g = zoo::s3();
    let order2 = *g.all_subgroups().iter().find(|m| m.count_ones() == 2).unwrap();
    let f = generate_normal_filter(
        &Ambient::Explicit(g.clone()),
        &GeneratorFamily::List(vec![Subgroup::Explicit { group: g.clone(), mask: order2 }]),
        ClosureMode::FiniteUnions,
    )
    .unwrap();
    let r = f.audit().unwrap();
    assert!(r.all_positive(), "{}", r.describe_defect());
    // the three conjugate order-2 subgroups meet in the trivial subgroup,
    // so the generated normal filter is everything
    assert!(f.contains(&Subgroup::trivial_explicit(&g)).unwrap());
}

#[test]
fn minimality_against_exhaustive_enumeration_small() {
    // oracle at unit scale (the acceptance suite runs the full sweep): every
    // normal filter family on V₄ containing the generator, intersected
    let g = zoo::klein_four();
    let subs = g.all_subgroups();
    let order2 = *subs.iter().find(|m| m.count_ones() == 2).unwrap();
    let generated = generate_normal_filter(
        &Ambient::Explicit(g.clone()),
        &GeneratorFamily::List(vec![Subgroup::Explicit { group: g.clone(), mask: order2 }]),
        ClosureMode::FiniteUnions,
    )
    .unwrap();
    // enumerate all normal filter families over the lattice
    let n = subs.len();
    let mut best: Option<std::collections::BTreeSet<u32>> = None;
    for pick in 0u32..(1 << n) {
        let family: std::collections::BTreeSet<u32> = (0..n)
            .filter(|i| pick & (1 << i) != 0)
            .map(|i| subs[i])
            .collect();
        if !family.contains(&g.full_mask()) || !family.contains(&order2) {
            continue;
        }
        let upward = family.iter().all(|&k| {
            subs.iter().all(|&a| k & !a != 0 || family.contains(&a))
        });
        let meets = family
            .iter()
            .all(|&a| family.iter().all(|&b| family.contains(&(a & b))));
        let normal = family.iter().all(|&k| {
            (0..g.order()).all(|e| family.contains(&g.conjugate_mask(e, k)))
        });
        if upward && meets && normal {
            best = Some(match best {
                None => family,
                Some(prev) => prev.intersection(&family).copied().collect(),
            });
        }
    }
    let oracle = best.unwrap();
    let generated_members: std::collections::BTreeSet<u32> = match &generated {
        FilterOfSubgroups::Explicit(f) => f.member_masks().into_iter().collect(),
        _ => unreachable!(),
    };
    assert_eq!(generated_members, oracle);
}

#[test]
fn head_kernel_generation_dichotomy_at_omega() {
    let (t, sym) = w1_group();
    let w = o(&t, "w*1");
    let gens = GeneratorFamily::HeadKernels { group: sym.clone(), below: w.clone() };
    let countable = generate_normal_filter(
        &Ambient::Symbolic(sym.clone()),
        &gens,
        ClosureMode::CountableUnions,
    )
    .unwrap();
    let finite =
        generate_normal_filter(&Ambient::Symbolic(sym.clone()), &gens, ClosureMode::FiniteUnions)
            .unwrap();
    let k_omega = Subgroup::kernel(&sym, CountableSetDescriptor::initial_segment(w));
    assert!(countable.contains(&k_omega).unwrap());
    assert!(!finite.contains(&k_omega).unwrap());
}

#[test]
fn empty_generator_set_yields_the_principal_filter() {
    let g = zoo::d4();
    let f = generate_normal_filter(
        &Ambient::Explicit(g.clone()),
        &GeneratorFamily::List(vec![]),
        ClosureMode::FiniteUnions,
    )
    .unwrap();
    assert_eq!(f, FilterOfSubgroups::principal_explicit(g));
}

#[test]
fn interleaving_keeps_countable_mode_closed() {
    // countable-of-countable stays inside: the completed ideal is closed
    // under countable unions of its own members by the concatenation argument
    let (t, sym) = w1_group();
    let completed = SupportIdealFilter::finite_support(sym.clone(), o(&t, "w*1"))
        .omega1_completed();
    assert!(completed.ideal.countable_union_closed(&t));
    // sampled: unions of members stay members
    let parts = [
        CountableSetDescriptor::from_points([o(&t, "1"), o(&t, "3")]),
        CountableSetDescriptor::initial_segment(o(&t, "5")),
        CountableSetDescriptor::initial_segment(o(&t, "w*1")),
    ];
    for a in &parts {
        for b in &parts {
            let u = a.union(b);
            assert!(completed.contains_kernel(&u));
        }
    }
}

#[test]
fn stage_bounding_reduction_at_omega1() {
    // finite and countable modes decide memberships identically below ω₁
    let (t, sym) = w1_group();
    let w1 = o(&t, "w1*1");
    let finite = SupportIdealFilter::from_prefixes(sym.clone(), w1.clone(), ClosureMode::FiniteUnions);
    let countable =
        SupportIdealFilter::from_prefixes(sym.clone(), w1.clone(), ClosureMode::CountableUnions);
    assert_eq!(finite.ideal, countable.ideal, "completion adds nothing at cf >= omega1");
    let probes = [
        CountableSetDescriptor::from_points([o(&t, "0"), o(&t, "w*3 + 1")]),
        CountableSetDescriptor::initial_segment(o(&t, "w^2*1")),
        CountableSetDescriptor::empty().with_cofinal(&t, o(&t, "w^3*1")).unwrap(),
        CountableSetDescriptor::initial_segment(w1.clone()),
    ];
    for e in &probes {
        assert_eq!(finite.contains_kernel(e), countable.contains_kernel(e));
    }
    // the everywhere-kernel stays out in both
    assert!(!finite.contains_kernel(&CountableSetDescriptor::initial_segment(w1)));
}

#[test]
fn generated_symbolic_filter_with_conjugation_vacuous() {
    // abelian ambient: conjugation adds nothing to the generated family
    let (t, sym) = w1_group();
    let e1 = CountableSetDescriptor::singleton(o(&t, "2"));
    let f = generate_normal_filter(
        &Ambient::Symbolic(sym.clone()),
        &GeneratorFamily::List(vec![Subgroup::kernel(&sym, e1.clone())]),
        ClosureMode::FiniteUnions,
    )
    .unwrap();
    let k = Subgroup::kernel(&sym, e1);
    assert!(f.contains(&k).unwrap());
    let g = GroupElement::Symbolic(sym.single_stage(o(&t, "7"), 1));
    assert!(f.contains(&k.conjugate(&g).unwrap()).unwrap());
}
