//! End-to-end acceptance checks, one line of output per criterion.

mod common;

use std::time::{Duration, Instant};

use revkit_core::assignment::{extract_assignment, faithfulness_report, from_assignment};
use revkit_core::critical_loop::{detect_critical_loop, operator_from_loop};
use revkit_core::encoding::{canonical_rel, detached_pairs, Quantifier};
use revkit_core::gallery;
use revkit_core::logic::structure_report;
use revkit_core::operator::semantically_equal;
use revkit_core::postulates::{postulate_report, CheckOptions, Postulate};
use revkit_core::relation::property_report;
use revkit_core::tpo::{brute_force_tpo_search, compatible_weak_orders, to_total_preorder, Scope, WeakOrders};
use revkit_core::verify::{enforcing_sweep, sweep, Profile, Property};
use revkit_core::{BaseSpace, Error, Evaluator, PreferenceRelation};

use common::set;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// The expected preference order at K = {psi3} for the example operator.
fn example_matrix() -> Vec<Vec<bool>> {
    let strict = |i: usize, j: usize| match (i, j) {
        (3, _) => true,
        (4, j) => j != 3,
        (0, 1) | (1, 2) | (2, 0) => true,
        (i, 5) => i < 3,
        _ => false,
    };
    (0..6).map(|i| (0..6).map(|j| i == j || strict(i, j)).collect()).collect()
}

fn matrix_of(r: &PreferenceRelation) -> Vec<Vec<bool>> {
    (0..r.n()).map(|i| (0..r.n()).map(|j| r.leq(i, j)).collect()).collect()
}

fn round_trip() -> Outcome {
    let sp = BaseSpace::new(gallery::l_ex()).map_err(err)?;
    let logic = sp.logic();
    let op = gallery::example_operator(logic).map_err(err)?;
    let ev = Evaluator::new(&sp, &op);
    let rep = postulate_report(&ev, CheckOptions::default()).map_err(err)?;
    ensure!(rep.passes_all(&Postulate::AGM), "failing postulates {:?}", rep.failed());
    let k = logic.base(&["psi3"]).map_err(err)?;
    let a = extract_assignment(&ev).map_err(err)?;
    let rel = a.relation_for(&k, set(&[3])).map_err(err)?;
    let oracle = common::canonical_matrix(logic, &op, &k, &common::all_subsets(logic));
    ensure!(matrix_of(rel) == oracle, "extracted relation differs from the brute-force oracle:\n{rel:?}");
    let expected = example_matrix();
    let off: Vec<(usize, usize)> = (0..6)
        .flat_map(|i| (0..6).map(move |j| (i, j)))
        .filter(|&(i, j)| oracle[i][j] != expected[i][j])
        .collect();
    ensure!(
        off.is_empty(),
        "relation agrees with the brute-force oracle but differs from the expected matrix at {off:?}; \
         no base covers w5 together with w0, w1 or w2 and keeps either in its result, so those pairs compare both ways"
    );
    Ok(format!("{} bases, G1-G6 pass, relation at K matches", sp.len()))
}

fn no_total_preorder() -> Outcome {
    let sp = BaseSpace::new(gallery::l_ex()).map_err(err)?;
    let op = gallery::example_operator(sp.logic()).map_err(err)?;
    let ev = Evaluator::new(&sp, &op);
    let k = sp.id_of(&sp.logic().base(&["psi3"]).map_err(err)?).map_err(err)?;
    let total = WeakOrders::new(6).count();
    ensure!(total == 4683, "{total} weak orders on six points");
    let hits = compatible_weak_orders(&ev, k, false).map_err(err)?;
    ensure!(hits.is_empty(), "{} compatible weak orders found", hits.len());
    ensure!(brute_force_tpo_search(&ev, Scope::One(k)).map_err(err)?.is_none(), "search found an assignment");
    match to_total_preorder(&ev, k) {
        Err(Error::CriticalLoopPresent(_)) => Ok("4683 weak orders rejected, pipeline reports the loop".into()),
        Err(e) => Err(format!("unexpected error {e}")),
        Ok(_) => Err("pipeline succeeded".into()),
    }
}

fn critical_loop() -> Outcome {
    let sp = BaseSpace::new(gallery::l_ex()).map_err(err)?;
    let logic = sp.logic();
    let lp = detect_critical_loop(&sp, None).map_err(err)?.ok_or("no loop found")?;
    ensure!(lp.len() == 3, "loop of length {}", lp.len());
    ensure!(logic.models_of(&lp.k).map_err(err)? == set(&[3]), "K = {}", logic.show_base(&lp.k));
    let mut edges: Vec<_> = lp.edge_bases.iter().map(|b| logic.models_of(b).unwrap()).collect();
    edges.sort();
    let mut want = vec![set(&[0, 1]), set(&[1, 2]), set(&[0, 2])];
    want.sort();
    ensure!(edges == want, "edges {edges:?}");
    let cert = lp
        .certificates
        .iter()
        .find(|c| c.cover_models == set(&[0, 1, 2, 4, 5]))
        .ok_or("no certificate for the cover missing the K-world")?;
    ensure!(cert.witness_models == set(&[4]), "certificate {}", cert.witness_models);
    let loop_op = operator_from_loop(&sp, &lp).map_err(err)?;
    let ex = gallery::example_operator(logic).map_err(err)?;
    let (a, b) = (Evaluator::new(&sp, &loop_op), Evaluator::new(&sp, &ex));
    if let Some((k, g)) = semantically_equal(&a, &b).map_err(err)? {
        return Err(format!("operators differ at K={:?}, Γ={:?}", sp.base(k), sp.base(g)));
    }
    Ok(format!("loop through {{0}},{{1}},{{2}}, certificate {{4}}, {} pairs agree", sp.len() * sp.len()))
}

fn threshold_logic() -> Outcome {
    let sp = BaseSpace::new(gallery::b_four()).map_err(err)?;
    let logic = sp.logic();
    let op = gallery::threshold_operator(logic).map_err(err)?;
    let ev = Evaluator::new(&sp, &op);
    let rep = postulate_report(&ev, CheckOptions::full()).map_err(err)?;
    let want = [Postulate::G1, Postulate::G2, Postulate::G3, Postulate::G4, Postulate::Edf];
    ensure!(rep.passes_all(&want), "failing {:?}", rep.failed());
    let b = |n: &str| logic.base(&[n]).unwrap();
    let g5 = rep.witness(Postulate::G5).ok_or("G5 passes")?;
    ensure!(
        g5.base("K") == Some(&b("ge4")) && g5.base("Γ1") == Some(&b("ge0")) && g5.base("Γ2") == Some(&b("ge1")),
        "G5 witness {g5:?}"
    );
    let g6 = rep.witness(Postulate::G6).ok_or("G6 passes")?;
    // the violation needs the weaker input first
    ensure!(
        g6.base("K") == Some(&b("ge4")) && g6.base("Γ1") == Some(&b("ge1")) && g6.base("Γ2") == Some(&b("ge2")),
        "G6 witness {g6:?}"
    );
    let k = sp.id_of(&b("ge4")).map_err(err)?;
    let r = |n: &str| ev.get(k, sp.id_of(&b(n)).unwrap()).unwrap();
    ensure!(r("ge2") == set(&[2, 3]) && r("ge1") == set(&[3]), "results {} and {}", r("ge2"), r("ge1"));
    ensure!(g6.set("K∘(Γ1⋓Γ2)") == Some(set(&[2, 3])) && g6.set("(K∘Γ1)⋓Γ2") == Some(set(&[3])), "G6 sets {g6:?}");
    Ok("G1-G4 and factoring pass; G5 and G6 fail at K = ge4 with results {2,3} and {3}".into())
}

fn counterexample_logics() -> Outcome {
    let rps = BaseSpace::new(gallery::b_rps()).map_err(err)?;
    let r = property_report(&rps, &gallery::rps_relation()).map_err(err)?;
    ensure!(r.total && !r.transitive && !r.min_complete, "rps report {r:?}");
    let all = rps.logic().base(&["all_three"]).map_err(err)?;
    let w = r.witnesses.min_complete.as_ref().ok_or("no min-completeness witness")?;
    let (wm, am) = (rps.logic().models_of(w).map_err(err)?, rps.logic().models_of(&all).map_err(err)?);
    ensure!(wm == am, "min-completeness witness {w:?} has models {wm}");

    let mr = BaseSpace::new(gallery::b_mr()).map_err(err)?;
    let r1 = property_report(&mr, &gallery::mr_first()).map_err(err)?;
    let w = r1.witnesses.min_retractive.as_ref().ok_or("first relation is min-retractive")?;
    ensure!((w.lower, w.minimal) == (0, 3), "retraction witness {w:?}");
    let r2 = property_report(&mr, &gallery::mr_second()).map_err(err)?;
    ensure!(r2.min_retractive, "second relation fails: {:?}", r2.witnesses.min_retractive);

    let nb = BaseSpace::new(gallery::b_nb()).map_err(err)?;
    let a = gallery::nb_assignment();
    let fr = faithfulness_report(&nb, &a).map_err(err)?;
    ensure!(fr.faithful && fr.min_friendly && !fr.min_expressible, "nb report {fr:?}");
    match from_assignment(&nb, &a) {
        Err(Error::MinSetInexpressible(m)) if m == set(&[0]) => {}
        Err(e) => return Err(format!("unexpected error {e}")),
        Ok(_) => return Err("operator built".into()),
    }
    Ok("rps not min-complete, mr1 retraction (w0, w3), mr2 retractive, nb minimum {w1} inexpressible".into())
}

fn four_world_table() -> Outcome {
    let sp = BaseSpace::new(gallery::ex10_12()).map_err(err)?;
    let logic = sp.logic();
    let op = gallery::ex10_12_operator(logic).map_err(err)?;
    let ev = Evaluator::new(&sp, &op);
    let kb = logic.base(&["gamma4"]).map_err(err)?;
    let k = sp.id_of(&kb).map_err(err)?;
    let rel = canonical_rel(&ev, k, Quantifier::AllBases).map_err(err)?;
    ensure!(rel.leq(0, 1) && rel.leq(1, 2) && !rel.leq(0, 2), "relation {rel:?}");
    let oracle = common::canonical_matrix(logic, &op, &kb, &common::singletons(logic));
    ensure!(matrix_of(&rel) == oracle, "encoding differs from the brute-force oracle");
    let d: Vec<_> = detached_pairs(&ev, k, Quantifier::AllBases).map_err(err)?.unordered().collect();
    ensure!(d == vec![(0, 1), (1, 2)], "detached pairs {d:?}");
    ensure!(common::detached(logic, &op, &kb, &common::singletons(logic)) == d, "oracle detached pairs differ");
    ensure!(brute_force_tpo_search(&ev, Scope::One(k)).map_err(err)?.is_some(), "no weak order fits");
    let tr = to_total_preorder(&ev, k).map_err(err)?;
    ensure!(tr.step3.is_total() && tr.step3.is_preorder(), "output {:?}", tr.step3);
    for g in 0..sp.len() {
        let (m, r) = (sp.models(g), ev.get(k, g).map_err(err)?);
        ensure!(tr.step3.min_models(m) == r, "minimum of {} is {}, revision gives {r}", m, tr.step3.min_models(m));
    }
    let km = sp.models(k);
    ensure!((0..4).all(|j| km.contains(j) || tr.step3.less(3, j)), "K-model not strictly least");
    Ok("non-transitive at w1, w2, w3; detached {w1,w2},{w2,w3}; pipeline output compatible".into())
}

fn disjunctive_logics() -> Outcome {
    let mut parts = Vec::new();
    for n in [2, 3] {
        let logic = gallery::pl(n).map_err(err)?;
        ensure!(structure_report(&logic).is_disjunctive, "PL_{n} not disjunctive");
        // every union of two model sets names a sentence
        let all: Vec<u64> = logic.sentences().iter().map(|s| s.models.bits()).collect();
        ensure!(all.iter().all(|a| all.iter().all(|b| all.contains(&(a | b)))), "PL_{n} oracle");
        let sp = BaseSpace::new(logic).map_err(err)?;
        ensure!(detect_critical_loop(&sp, None).map_err(err)?.is_none(), "PL_{n} has a loop");
        parts.push(format!("PL_{n} ({} bases)", sp.len()));
    }
    Ok(format!("{} disjunctive and loop-free", parts.join(", ")))
}

fn property_sweeps() -> Outcome {
    let r = sweep(Profile::MICRO, 1000, 7);
    ensure!(r.errors.is_empty(), "case errors: {:?}", &r.errors[..r.errors.len().min(3)]);
    let mut parts = Vec::new();
    for p in Property::ALL {
        let t = &r.properties[&p];
        ensure!(t.failed == 0, "{p}: {} violations, first {:?}", t.failed, t.first_failure);
        ensure!(t.passed > 0, "{p}: never applicable");
        parts.push(format!("{p} {}/{}", t.passed, r.cases));
    }
    Ok(parts.join(", "))
}

fn enforcing() -> Outcome {
    let r = enforcing_sweep(Profile::MICRO, 1000, 11);
    ensure!(r.mismatches.is_empty(), "mismatching seeds {:?}", r.mismatches);
    ensure!(r.bad_constructions.is_empty(), "bad constructed witnesses {:?}", r.bad_constructions);
    ensure!(r.trio_expressible > 0 && r.trio_expressible < r.logics, "only one side exercised");
    Ok(format!("{} logics, {} trio-expressible, zero mismatches", r.logics, r.trio_expressible))
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 9] = [
        ("round trip on the six-world example", round_trip, 10),
        ("no compatible total preorder", no_total_preorder, 5),
        ("critical loop and its operator", critical_loop, 30),
        ("threshold logic", threshold_logic, 1),
        ("counterexample logics", counterexample_logics, 1),
        ("four-world table", four_world_table, 1),
        ("disjunctive logics", disjunctive_logics, 60),
        ("property sweeps", property_sweeps, 300),
        ("preorder-enforcing vs trio-expressible", enforcing, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*limit);
        let status = if out.is_ok() && !over { "PASS" } else { "FAIL" };
        if status == "FAIL" {
            failed += 1;
        }
        let detail = match &out {
            Ok(s) if over => format!("{s}; exceeded {limit} s"),
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        println!("criterion {} {status} [{:.2?} / {limit} s] {name}: {detail}", i + 1, took);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
