mod common;

use common::set;
use revkit_core::assignment::{compatibility_check, extract_assignment, faithfulness_report, from_assignment, two_level_assignment};
use revkit_core::critical_loop::{detect_critical_loop, strict_circles};
use revkit_core::encoding::{aiguier_rel, canonical_rel, detached_pairs, km_pair, km_rel, sqrel, Quantifier};
use revkit_core::logic::structure_report;
use revkit_core::operator::semantically_equal;
use revkit_core::postulates::{postulate_report, CheckOptions, Postulate};
use revkit_core::relation::{min_expressibility_witness, property_report};
use revkit_core::tpo::{brute_force_tpo_search, compatible_weak_orders, to_total_preorder, Scope};
use revkit_core::verify::{check_representation, Clause, Verdict};
use revkit_core::{gallery, BaseSpace, BeliefBase, Error, Evaluator, ModelSet, Operator, PreferenceRelation};

fn ex_space() -> BaseSpace {
    BaseSpace::new(gallery::l_ex()).unwrap()
}

fn two_level(n: usize, km: ModelSet) -> PreferenceRelation {
    PreferenceRelation::from_fn(n, |i, j| km.contains(i) || !km.contains(j))
}

#[test]
fn model_sets_of_example_bases() {
    let l = gallery::l_ex();
    assert_eq!(l.models_of(&l.base(&["psi3"]).unwrap()).unwrap(), set(&[3]));
    assert_eq!(l.models_of(&BeliefBase::empty()).unwrap(), l.omega());
    assert_eq!(l.models_of(&l.base(&["phi0", "phi1"]).unwrap()).unwrap(), set(&[1]));
}

#[test]
fn union_of_bases() {
    let l = gallery::l_ex();
    let u = l.union(&l.base(&["psi3"]).unwrap(), &l.base(&["phi0"]).unwrap()).unwrap();
    assert_eq!(u, l.base(&["psi3", "phi0"]).unwrap());

    let pl = gallery::pl(2).unwrap();
    let (p, q) = (gallery::pl_atom(2, 0), gallery::pl_atom(2, 1));
    let u = pl.union(&pl.base(&[&p]).unwrap(), &pl.base(&[&q]).unwrap()).unwrap();
    assert_eq!(u.len(), 1);
    assert_eq!(pl.models_of(&u).unwrap(), gallery::pl_atom_models(2, 0).intersect(gallery::pl_atom_models(2, 1)));
}

#[test]
fn entailment() {
    let l = gallery::l_ex();
    let b = |n: &str| l.base(&[n]).unwrap();
    assert!(l.entails(&b("psi0"), &b("phi0")).unwrap());
    assert!(!l.entails(&b("psi0"), &b("psi1")).unwrap());
    for s in l.sentences() {
        assert!(l.entails(&b(&s.name), &b(&s.name)).unwrap());
    }
}

#[test]
fn consequence_closure() {
    let l = gallery::l_ex();
    let c = l.closure(&l.base(&["psi0"]).unwrap()).unwrap();
    assert_eq!(c, l.base(&["psi0", "phi0", "phi2", "chi", "chi_prime"]).unwrap());
    assert_eq!(l.closure(&c).unwrap(), c);
    let everything = BeliefBase::new(0..l.sentences().len() as u32);
    assert_eq!(l.closure(&l.base(&["psi0", "psi1"]).unwrap()).unwrap(), everything);
}

#[test]
fn example_logic_structure() {
    let l = gallery::l_ex();
    let r = structure_report(&l);
    assert!(!r.is_trio_expressible);
    assert!(r.inexpressible_trios.contains(&set(&[3, 4, 5])));
    assert!(r.has_universal_base);
    assert_eq!(l.models_of(r.universal_base.as_ref().unwrap()).unwrap(), l.omega());
    assert!(structure_report(&gallery::pl(2).unwrap()).is_disjunctive);
}

#[test]
fn enumeration_matches_powerset_oracle() {
    let sp = ex_space();
    let l = sp.logic();
    assert_eq!(sp.len(), 1 << l.sentences().len());
    let distinct: std::collections::BTreeSet<u64> =
        common::all_subsets(l).iter().map(|b| common::models(l, b)).collect();
    assert_eq!(sp.classes().len(), distinct.len());
}

#[test]
fn minima_of_example_relations() {
    let sp = ex_space();
    let op = gallery::example_operator(sp.logic()).unwrap();
    let ev = Evaluator::new(&sp, &op);
    let k = sp.id_of(&sp.logic().base(&["psi3"]).unwrap()).unwrap();
    let rel = canonical_rel(&ev, k, Quantifier::Classes).unwrap();
    assert_eq!(rel.min_models(sp.omega()), set(&[3]));
    assert_eq!(rel.min_models(ModelSet::EMPTY), ModelSet::EMPTY);
    assert_eq!(gallery::rps_relation().min_models(ModelSet::full(3)), ModelSet::EMPTY);

    let l = sp.logic();
    let w = min_expressibility_witness(l, &rel, &l.base(&["phi0"]).unwrap()).unwrap();
    assert_eq!(l.models_of(&w).unwrap(), set(&[0]));
    let w = min_expressibility_witness(l, &rel, &l.base(&["psi0", "psi1"]).unwrap()).unwrap();
    assert_eq!(l.models_of(&w).unwrap(), ModelSet::EMPTY);

    let nb = gallery::b_nb();
    let Ok(rel) = gallery::nb_assignment().relation_for(&nb.base(&["none"]).unwrap(), ModelSet::EMPTY).cloned() else {
        panic!("nb relation")
    };
    let r = min_expressibility_witness(&nb, &rel, &nb.base(&["both"]).unwrap());
    assert!(matches!(r, Err(Error::MinSetInexpressible(m)) if m == set(&[0])));
    let nbs = BaseSpace::new(nb).unwrap();
    let rep = property_report(&nbs, &rel).unwrap();
    assert!(rep.min_friendly && !rep.min_expressible);
}

#[test]
fn trivial_revision_examples() {
    let sp = ex_space();
    let l = sp.logic();
    let op = Operator::trivial();
    let b = |ns: &[&str]| l.base(ns).unwrap();
    assert_eq!(op.revise(l, &b(&["psi3"]), &b(&["phi0"])).unwrap(), b(&["phi0"]));
    assert_eq!(op.revise(l, &b(&["chi"]), &b(&["phi0"])).unwrap(), b(&["chi", "phi0"]));
    let ex = gallery::example_operator(l).unwrap();
    assert_eq!(l.models_of(&ex.revise(l, &b(&["psi3"]), &b(&["phi0"])).unwrap()).unwrap(), set(&[0]));
    let ev = Evaluator::new(&sp, &op);
    assert!(postulate_report(&ev, CheckOptions::default()).unwrap().passes_all(&Postulate::AGM));
}

#[test]
fn plain_union_violates_consistency() {
    let sp = BaseSpace::new(gallery::pl(2).unwrap()).unwrap();
    let l = sp.logic();
    let op = Operator::plain_union();
    let k = l.base(&[gallery::pl_atom(2, 0)]).unwrap();
    let g = l.base(&[gallery::pl_negated_atom(2, 0)]).unwrap();
    assert!(l.models_of(&op.revise(l, &k, &g).unwrap()).unwrap().is_empty());
    let r = postulate_report(&Evaluator::new(&sp, &op), CheckOptions::default()).unwrap();
    assert!(!r.passes(Postulate::G3));
}

#[test]
fn strict_preference_from_phi0() {
    let sp = ex_space();
    let op = gallery::example_operator(sp.logic()).unwrap();
    let ev = Evaluator::new(&sp, &op);
    let k = sp.id_of(&sp.logic().base(&["psi3"]).unwrap()).unwrap();
    let sq = sqrel(&ev, k, Quantifier::Classes).unwrap();
    assert!(sq.leq(0, 1) && !sq.leq(1, 0));
    assert!((0..6).all(|i| sq.leq(i, i)));
}

#[test]
fn detached_pairs_of_four_world_table() {
    let sp = BaseSpace::new(gallery::ex10_12()).unwrap();
    let l = sp.logic();
    let op = gallery::ex10_12_operator(l).unwrap();
    let ev = Evaluator::new(&sp, &op);
    let kb = l.base(&["gamma4"]).unwrap();
    let k = sp.id_of(&kb).unwrap();
    let d = detached_pairs(&ev, k, Quantifier::AllBases).unwrap();
    let pairs: Vec<_> = d.unordered().collect();
    assert_eq!(pairs, common::detached(l, &op, &kb, sp.bases()));
    assert!(d.contains(0, 1) && d.contains(1, 2) && !d.contains(0, 2));
    assert!(pairs.iter().all(|&(a, b)| a != b));
    assert!(strict_circles(&ev, k, None).unwrap().is_empty());
}

#[test]
fn trivial_revision_never_detaches_k_models() {
    let sp = ex_space();
    let op = Operator::trivial();
    let ev = Evaluator::new(&sp, &op);
    for c in sp.classes().iter().filter(|c| !c.models.is_empty()) {
        let d = detached_pairs(&ev, c.representative, Quantifier::Classes).unwrap();
        assert!(d.unordered().all(|(a, b)| !c.models.contains(a) && !c.models.contains(b)));
    }
}

#[test]
fn km_encoding_on_propositional_logic() {
    let sp = BaseSpace::new(gallery::pl(2).unwrap()).unwrap();
    let op = Operator::trivial();
    let ev = Evaluator::new(&sp, &op);
    let k = sp.id_of(&sp.logic().base(&[gallery::pl_atom(2, 0)]).unwrap()).unwrap();
    let km = km_rel(&ev, k).unwrap();
    assert_eq!(km, canonical_rel(&ev, k, Quantifier::Classes).unwrap());
    assert_eq!(km, two_level(4, gallery::pl_atom_models(2, 0)));

    let sp = ex_space();
    let op = gallery::example_operator(sp.logic()).unwrap();
    let ev = Evaluator::new(&sp, &op);
    let k = sp.id_of(&sp.logic().base(&["psi3"]).unwrap()).unwrap();
    assert!(km_pair(&ev, k, 3, 4).unwrap());
    assert!(matches!(km_pair(&ev, k, 4, 3), Err(Error::FormInexpressible(4, 3))));
    assert!(km_rel(&ev, k).is_err());
}

#[test]
fn aiguier_relation_is_reflexive_where_singletons_are_expressible() {
    for name in ["L_Ex", "PL_2", "PL_3"] {
        let e = gallery::load(name).unwrap();
        let op = e.operator.unwrap();
        let sp = BaseSpace::new(e.logic).unwrap();
        let ev = Evaluator::new(&sp, &op);
        for k in sp.representatives() {
            let r = aiguier_rel(&ev, k).unwrap();
            assert!(r.is_reflexive(), "{name} at base {k}");
        }
    }
    // Everything shared with w0 is the tautology, and revising {ge1} by it
    // keeps only the models of {ge1}.
    let sp = BaseSpace::new(gallery::b_four()).unwrap();
    let op = gallery::threshold_operator(sp.logic()).unwrap();
    let ev = Evaluator::new(&sp, &op);
    let k = sp.id_of(&sp.logic().base(&["ge1"]).unwrap()).unwrap();
    assert!(!aiguier_rel(&ev, k).unwrap().leq(0, 0));
}

#[test]
fn two_level_assignment_of_trivial_revision() {
    let sp = ex_space();
    let a = two_level_assignment(&sp);
    let fr = faithfulness_report(&sp, &a).unwrap();
    assert!(fr.faithful && fr.preorder_assignment && fr.min_friendly && fr.min_expressible);
    let op = Operator::trivial();
    let ev = Evaluator::new(&sp, &op);
    assert!(compatibility_check(&ev, &a).unwrap().compatible);
    let extracted = extract_assignment(&ev).unwrap();
    for k in sp.representatives() {
        assert_eq!(extracted.relation_at(&sp, k).unwrap(), &two_level(6, sp.models(k)));
    }
    let back = from_assignment(&sp, &a).unwrap();
    assert_eq!(semantically_equal(&ev, &Evaluator::new(&sp, &back)).unwrap(), None);
}

#[test]
fn extracted_assignment_of_example_operator() {
    let sp = ex_space();
    let op = gallery::example_operator(sp.logic()).unwrap();
    let ev = Evaluator::new(&sp, &op);
    let a = extract_assignment(&ev).unwrap();
    let fr = faithfulness_report(&sp, &a).unwrap();
    assert!(fr.faithful && fr.min_friendly && fr.min_expressible);
    assert!(!fr.preorder_assignment);
    assert!(compatibility_check(&ev, &a).unwrap().compatible);

    let k_ex = sp.logic().base(&["psi3"]).unwrap();
    for k in sp.representatives() {
        if sp.models(k) != set(&[3]) {
            assert_eq!(a.relation_at(&sp, k).unwrap(), &two_level(6, sp.models(k)), "at {}", sp.logic().show_base(sp.base(k)));
        }
    }
    let back = from_assignment(&sp, &a).unwrap();
    assert_eq!(semantically_equal(&ev, &Evaluator::new(&sp, &back)).unwrap(), None);

    let circles = strict_circles(&ev, sp.id_of(&k_ex).unwrap(), None).unwrap();
    assert_eq!(circles.first().map(|c| c.interpretations.clone()), Some(vec![0, 1, 2]));
}

#[test]
fn inexpressible_minimum_blocks_construction() {
    let sp = BaseSpace::new(gallery::b_nb()).unwrap();
    let r = from_assignment(&sp, &gallery::nb_assignment());
    assert!(matches!(r, Err(Error::MinSetInexpressible(m)) if m == set(&[0])));
}

#[test]
fn loop_free_gallery_logics() {
    for l in [gallery::pl(2).unwrap(), gallery::b_four()] {
        let sp = BaseSpace::new(l).unwrap();
        assert!(detect_critical_loop(&sp, None).unwrap().is_none());
    }
}

#[test]
fn trivial_revision_has_no_strict_circles() {
    let sp = ex_space();
    let op = Operator::trivial();
    let ev = Evaluator::new(&sp, &op);
    for k in sp.representatives() {
        assert!(strict_circles(&ev, k, None).unwrap().is_empty());
    }
}

#[test]
fn pipeline_on_propositional_trivial_revision() {
    let sp = BaseSpace::new(gallery::pl(2).unwrap()).unwrap();
    let op = Operator::trivial();
    let ev = Evaluator::new(&sp, &op);
    let km = gallery::pl_atom_models(2, 0);
    let k = sp.id_of(&sp.logic().base(&[gallery::pl_atom(2, 0)]).unwrap()).unwrap();
    let tr = to_total_preorder(&ev, k).unwrap();
    assert_eq!(tr.step2, two_level(4, km));
    assert_eq!(tr.step3, two_level(4, km));
    assert!(tr.minima_agree());
    let found = brute_force_tpo_search(&ev, Scope::One(k)).unwrap().unwrap();
    assert_eq!(found.relation_at(&sp, k).unwrap(), &two_level(4, km));
}

#[test]
fn pipeline_refuses_example_operator() {
    let sp = ex_space();
    let op = gallery::example_operator(sp.logic()).unwrap();
    let ev = Evaluator::new(&sp, &op);
    let k = sp.id_of(&sp.logic().base(&["psi3"]).unwrap()).unwrap();
    assert!(matches!(to_total_preorder(&ev, k), Err(Error::CriticalLoopPresent(_))));
}

#[test]
fn four_world_table_has_compatible_preorder() {
    let sp = BaseSpace::new(gallery::ex10_12()).unwrap();
    let l = sp.logic();
    let op = gallery::ex10_12_operator(l).unwrap();
    let ev = Evaluator::new(&sp, &op);
    let k = sp.id_of(&l.base(&["gamma4"]).unwrap()).unwrap();
    assert!(brute_force_tpo_search(&ev, Scope::One(k)).unwrap().is_some());
    let fits = compatible_weak_orders(&ev, k, false).unwrap();
    assert!(fits.iter().any(|r| r.less(3, 2) && r.less(2, 0) && r.less(2, 1) && r.leq(0, 1) && r.leq(1, 0)));
    let tr = to_total_preorder(&ev, k).unwrap();
    assert_eq!(tr.step3.min_models(l.models_of(&l.base(&["psi"]).unwrap()).unwrap()), set(&[2]));
}

#[test]
fn representation_reports() {
    let sp = ex_space();
    let op = gallery::example_operator(sp.logic()).unwrap();
    let r = check_representation(&Evaluator::new(&sp, &op)).unwrap();
    assert_eq!(r.clauses[&Clause::Agm], Verdict::Pass);
    assert!(matches!(r.clauses[&Clause::TotalPreorder], Verdict::NotApplicable(_)));
    assert!(!r.loop_free);

    let sp = BaseSpace::new(gallery::pl(2).unwrap()).unwrap();
    let op = Operator::trivial();
    let r = check_representation(&Evaluator::new(&sp, &op)).unwrap();
    assert!(r.clauses.values().all(|v| *v == Verdict::Pass), "{:?}", r.clauses);

    let sp = BaseSpace::new(gallery::b_four()).unwrap();
    let op = gallery::threshold_operator(sp.logic()).unwrap();
    let r = check_representation(&Evaluator::new(&sp, &op)).unwrap();
    assert!(r.clauses.values().all(|v| matches!(v, Verdict::NotApplicable(_))), "{:?}", r.clauses);
    assert_eq!(r.postulates.failed(), vec![Postulate::G5, Postulate::G6]);
}
