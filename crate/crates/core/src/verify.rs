//! Instance-level checks of the representation results, the
//! preorder-enforcing scan, seeded generators and property sweeps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assignment::{
    compatibility_check, extract_assignment, faithfulness_report, from_assignment, two_level_assignment, Assignment,
};
use crate::critical_loop::detect_critical_loop;
use crate::encoding::{canonical_rel, detached_pairs, sqrel, Quantifier};
use crate::error::{Error, Result};
use crate::logic::{structure_report, BaseFamily, BaseLogic, FamilyKind, ModelSet, Sentence};
use crate::operator::{semantically_equal, Evaluator, Operator};
use crate::postulates::{postulate_report, CheckOptions, Postulate, PostulateReport};
use crate::relation::PreferenceRelation;
use crate::space::BaseSpace;
use crate::tpo::{compatible_weak_orders, pipeline, MAX_SEARCH_OMEGA};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "detail")]
pub enum Verdict {
    Pass,
    Fail(String),
    NotApplicable(String),
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// G1-G6 give a compatible min-expressible min-friendly faithful assignment.
    Agm,
    /// G1-G3, G5, G6 give the same with quasi-faithfulness.
    Quasi,
    /// Without critical loops, G1-G3, G5, G6 give a compatible total preorder
    /// assignment.
    TotalPreorder,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationReport {
    pub postulates: PostulateReport,
    pub loop_free: bool,
    pub clauses: BTreeMap<Clause, Verdict>,
}

impl RepresentationReport {
    pub fn all_pass_or_na(&self) -> bool {
        !self.clauses.values().any(Verdict::is_fail)
    }
}

fn assignment_problems(ev: &Evaluator, a: &Assignment, faithful: bool) -> Result<Vec<String>> {
    let sp = ev.space();
    let fr = faithfulness_report(sp, a)?;
    let mut bad = Vec::new();
    if faithful && !fr.faithful {
        bad.push(format!("not faithful: {:?}", fr.witnesses));
    }
    if !fr.quasi_faithful {
        bad.push(format!("not quasi-faithful: {:?} {:?}", fr.witnesses.f1, fr.witnesses.f2));
    }
    if !fr.min_friendly {
        bad.push(format!("not min-friendly at {:?}", fr.witnesses.min_friendly));
    }
    if !fr.min_expressible {
        bad.push(format!("not min-expressible: {:?}", fr.witnesses.min_expressible));
    }
    let cc = compatibility_check(ev, a)?;
    if !cc.compatible {
        bad.push(format!("not compatible: {:?}", cc.witness));
    }
    Ok(bad)
}

fn verdict(problems: Vec<String>) -> Verdict {
    if problems.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail(problems.join("; "))
    }
}

/// Runs the postulates and, where they hold, checks the representation
/// claims on this instance.
pub fn check_representation(ev: &Evaluator) -> Result<RepresentationReport> {
    let sp = ev.space();
    let report = postulate_report(ev, CheckOptions::default())?;
    let failed = report.failed();
    let mut clauses = BTreeMap::new();

    let agm = if report.passes_all(&Postulate::AGM) {
        let a = extract_assignment(ev)?;
        let mut bad = assignment_problems(ev, &a, true)?;
        let op2 = from_assignment(sp, &a)?;
        let ev2 = Evaluator::new(sp, &op2);
        if let Some((k, g)) = semantically_equal(ev, &ev2)? {
            bad.push(format!("rebuilt operator differs at K={:?}, Γ={:?}", sp.base(k), sp.base(g)));
        }
        verdict(bad)
    } else {
        Verdict::NotApplicable(format!("failing postulates: {failed:?}"))
    };
    clauses.insert(Clause::Agm, agm);

    let quasi = report.passes_all(&Postulate::QUASI);
    clauses.insert(
        Clause::Quasi,
        if quasi {
            verdict(assignment_problems(ev, &extract_assignment(ev)?, false)?)
        } else {
            Verdict::NotApplicable(format!("failing postulates: {failed:?}"))
        },
    );

    let lp = detect_critical_loop(sp, None)?;
    let tp = match (&lp, quasi) {
        (Some(lp), _) => Verdict::NotApplicable(format!(
            "critical loop at K={} through {} nodes",
            sp.logic().show_base(&lp.k),
            lp.len()
        )),
        (None, false) => Verdict::NotApplicable(format!("failing postulates: {failed:?}")),
        (None, true) => {
            let q = if report.passes(Postulate::G4w) { Quantifier::Classes } else { Quantifier::AllBases };
            let ks: Vec<usize> =
                if report.passes(Postulate::G4) { sp.representatives().collect() } else { (0..sp.len()).collect() };
            let mut map = BTreeMap::new();
            let mut bad = Vec::new();
            for &k in &ks {
                let tr = pipeline(ev, k, q)?;
                if !tr.step3.is_preorder() || !tr.step3.is_total() {
                    bad.push(format!("K={:?}: result is not a total preorder", sp.base(k)));
                }
                map.insert(sp.base(k).clone(), tr.step3);
            }
            let mut a = Assignment::Syntactic(map);
            if report.passes(Postulate::G4) {
                // one relation per class, read through any member
                let sem = sp
                    .classes()
                    .iter()
                    .map(|c| (c.models, a.relation_at(sp, c.representative).cloned()))
                    .map(|(m, r)| r.map(|r| (m, r)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                a = Assignment::Semantic(sem);
            }
            bad.extend(assignment_problems(ev, &a, report.passes(Postulate::G4))?);
            verdict(bad)
        }
    };
    clauses.insert(Clause::TotalPreorder, tp);
    Ok(RepresentationReport { postulates: report, loop_free: lp.is_none(), clauses })
}

#[derive(Clone, Debug, Serialize)]
pub struct PreorderEnforcingReport {
    pub exhaustive: bool,
    pub relations_checked: u64,
    pub preorder_enforcing: bool,
    /// A total min-friendly relation that is not transitive.
    pub witness: Option<PreferenceRelation>,
    pub trio_expressible: bool,
    pub agrees: bool,
    /// The relation built around the first inexpressible triple, when there
    /// is one, and whether it behaves as intended.
    pub constructed: Option<PreferenceRelation>,
    pub constructed_ok: bool,
}

/// Relations over Ω are scanned exhaustively up to this size.
pub const EXHAUSTIVE_OMEGA: usize = 4;

fn min_friendly_on(rel: &PreferenceRelation, sets: &[ModelSet]) -> bool {
    sets.iter().all(|&m| {
        let min = rel.min_models(m);
        !min.is_empty() && m.minus(min).iter().all(|lo| min.iter().all(|v| !rel.leq(lo, v)))
    })
}

/// Total relation that is min-friendly but not transitive, placed on an
/// inexpressible triple `(a, b, c)` with the rest of Ω strictly ordered by
/// index below it.
pub fn trio_witness(n: usize, a: usize, b: usize, c: usize) -> PreferenceRelation {
    let triple = ModelSet::from_indices([a, b, c]);
    let cycle = [(a, b), (a, c), (c, a), (b, c)];
    PreferenceRelation::from_fn(n, |i, j| match (triple.contains(i), triple.contains(j)) {
        (false, false) => i <= j,
        (false, true) => true,
        (true, false) => false,
        (true, true) => i == j || cycle.contains(&(i, j)),
    })
}

/// Exhaustive for |Ω| ≤ 4, otherwise `samples` random total relations.
pub fn check_preorder_enforcing(logic: &BaseLogic, samples: u64, seed: u64) -> PreorderEnforcingReport {
    let n = logic.num_interpretations();
    let sets: Vec<ModelSet> = logic.expressible_model_sets().into_iter().filter(|m| !m.is_empty()).collect();
    let structure = structure_report(logic);
    let mut witness = None;
    let mut checked = 0u64;
    let exhaustive = n <= EXHAUSTIVE_OMEGA;
    if exhaustive {
        let cells = n * n;
        for bits in 0u64..1u64 << cells {
            checked += 1;
            let rel = PreferenceRelation::from_fn(n, |i, j| bits >> (i * n + j) & 1 == 1);
            if rel.is_total() && !rel.is_transitive() && min_friendly_on(&rel, &sets) {
                witness = Some(rel);
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            checked += 1;
            let mut rel = PreferenceRelation::identity(n);
            for i in 0..n {
                for j in i + 1..n {
                    match rng.gen_range(0..3) {
                        0 => rel.set(i, j, true),
                        1 => rel.set(j, i, true),
                        _ => {
                            rel.set(i, j, true);
                            rel.set(j, i, true);
                        }
                    }
                }
            }
            if !rel.is_transitive() && min_friendly_on(&rel, &sets) {
                witness = Some(rel);
                break;
            }
        }
    }
    let constructed = structure.trio_counterexample.map(|t| {
        let v: Vec<usize> = t.iter().collect();
        trio_witness(n, v[0], v[1], v[2])
    });
    let constructed_ok = match &constructed {
        Some(r) => r.is_total() && !r.is_transitive() && min_friendly_on(r, &sets),
        None => true,
    };
    let preorder_enforcing = witness.is_none();
    PreorderEnforcingReport {
        exhaustive,
        relations_checked: checked,
        preorder_enforcing,
        witness,
        trio_expressible: structure.is_trio_expressible,
        agrees: preorder_enforcing == structure.is_trio_expressible,
        constructed,
        constructed_ok,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub name: &'static str,
    pub min_omega: usize,
    pub max_omega: usize,
    pub max_sentences: usize,
}

impl Profile {
    pub const MICRO: Profile = Profile { name: "micro", min_omega: 2, max_omega: 5, max_sentences: 8 };
    pub const SMALL: Profile = Profile { name: "small", min_omega: 2, max_omega: 7, max_sentences: 12 };

    pub fn capped(self, max_omega: usize) -> Profile {
        Profile { max_omega: self.max_omega.min(max_omega), ..self }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Profile> {
        match s {
            "micro" => Ok(Profile::MICRO),
            "small" => Ok(Profile::SMALL),
            _ => Err(Error::Format { path: "profile".into(), msg: format!("unknown profile `{s}`") }),
        }
    }
}

fn close_under_intersection(mut sets: Vec<ModelSet>) -> Vec<ModelSet> {
    loop {
        let mut added = false;
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let m = sets[i].intersect(sets[j]);
                if !sets.contains(&m) {
                    sets.push(m);
                    added = true;
                }
            }
        }
        if !added {
            return sets;
        }
    }
}

/// Random logic within the profile's bounds. Sentence model sets may repeat.
pub fn generate_logic(rng: &mut impl Rng, profile: Profile) -> BaseLogic {
    let n = rng.gen_range(profile.min_omega..=profile.max_omega);
    let count = rng.gen_range(1..=profile.max_sentences);
    let full = ModelSet::full(n).bits();
    let mut sets: Vec<ModelSet> = (0..count).map(|_| ModelSet::from_bits(rng.gen::<u64>() & full)).collect();
    let interpretations: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let roll = rng.gen_range(0..20);
    let kind = match roll {
        0..=2 => FamilyKind::BeliefSets,
        3..=5 => FamilyKind::SingleSentences,
        _ => FamilyKind::ArbitrarySets,
    };
    let sentences = |sets: &[ModelSet]| -> Vec<Sentence> {
        sets.iter().enumerate().map(|(i, &m)| Sentence { name: format!("s{i}"), models: m }).collect()
    };
    if kind == FamilyKind::SingleSentences {
        let closed = close_under_intersection(sets.clone());
        if closed.len() <= profile.max_sentences {
            sets = closed;
            sets.shuffle(rng);
            return BaseLogic::with_semantic_conjunction(
                interpretations,
                sentences(&sets),
                BaseFamily::new(kind, false),
            )
            .expect("closed under intersection");
        }
    }
    let kind = if kind == FamilyKind::SingleSentences { FamilyKind::ArbitrarySets } else { kind };
    let allow_empty = kind == FamilyKind::BeliefSets || rng.gen_bool(0.8);
    BaseLogic::new(interpretations, sentences(&sets), BaseFamily::new(kind, allow_empty), None).expect("valid by construction")
}

fn min_expressible_on(space: &BaseSpace, rel: &PreferenceRelation) -> bool {
    let logic = space.logic();
    space.classes().iter().all(|c| c.models.is_empty() || logic.is_expressible(rel.min_models(c.models)))
}

/// Weak order with K's models alone on the bottom level; falls back to the
/// two-level order when no sampled candidate is min-expressible.
fn faithful_weak_order(rng: &mut impl Rng, space: &BaseSpace, km: ModelSet, tries: usize) -> PreferenceRelation {
    let n = space.n();
    for _ in 0..tries {
        let top = rng.gen_range(1..=n);
        let levels: Vec<usize> = (0..n)
            .map(|i| {
                if km.contains(i) {
                    0
                } else if km.is_empty() {
                    rng.gen_range(0..top)
                } else {
                    rng.gen_range(1..=top)
                }
            })
            .collect();
        let rel = PreferenceRelation::from_levels(&levels);
        if min_expressible_on(space, &rel) {
            return rel;
        }
    }
    PreferenceRelation::from_fn(n, |i, j| km.contains(i) || !km.contains(j))
}

/// Faithful min-expressible total preorder assignment keyed by model set.
pub fn generate_assignment(rng: &mut impl Rng, space: &BaseSpace) -> Assignment {
    let map = space.classes().iter().map(|c| (c.models, faithful_weak_order(rng, space, c.models, 8))).collect();
    Assignment::Semantic(map)
}

/// Quasi-faithful assignment that may give equivalent bases different
/// relations.
pub fn generate_syntactic_assignment(rng: &mut impl Rng, space: &BaseSpace) -> Assignment {
    let map = (0..space.len())
        .map(|k| (space.base(k).clone(), faithful_weak_order(rng, space, space.models(k), 8)))
        .collect();
    Assignment::Syntactic(map)
}

pub struct Generated {
    pub space: BaseSpace,
    pub assignment: Assignment,
    pub operator: Operator,
}

/// Seeded logic, assignment and the operator built from it.
pub fn generate(seed: u64, profile: Profile) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = BaseSpace::new(generate_logic(&mut rng, profile))?;
    let assignment = generate_assignment(&mut rng, &space);
    let operator = from_assignment(&space, &assignment).unwrap_or_else(|_| from_assignment(&space, &two_level_assignment(&space)).expect("two-level minima are expressible"));
    Ok(Generated { space, assignment, operator })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// Operators built from good assignments satisfy G1-G6.
    FromAssignmentAgm,
    /// Extraction from those operators gives a good compatible assignment.
    ExtractRoundTrip,
    /// G1, G5 and G6 together imply G4w.
    WeakSyntaxIndependence,
    /// Every compatible faithful weak order lies inside the canonical relation.
    CanonicalMaximal,
    /// With a base for all of Ω the two encodings coincide.
    EncodingsCoincide,
    /// Transitive closure only re-adds detached pairs.
    ClosureAddsDetached,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::FromAssignmentAgm,
        Property::ExtractRoundTrip,
        Property::WeakSyntaxIndependence,
        Property::CanonicalMaximal,
        Property::EncodingsCoincide,
        Property::ClosureAddsDetached,
    ];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        f.write_str(&s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "detail")]
pub enum Check {
    Pass,
    Fail(String),
    Skip(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub seed: u64,
    pub omega: usize,
    pub bases: usize,
    pub checks: Vec<(Property, Check)>,
}

/// Seed of case `i` in a sweep started from `seed`.
pub fn case_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i)
}

fn check_of(problems: Vec<String>) -> Check {
    if problems.is_empty() {
        Check::Pass
    } else {
        Check::Fail(problems.join("; "))
    }
}

/// One sweep case: a generated logic with a semantic and a syntactic
/// assignment, and every property evaluated on them.
pub fn sweep_case(profile: Profile, seed: u64) -> Result<CaseOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = BaseSpace::new(generate_logic(&mut rng, profile))?;
    let sem = generate_assignment(&mut rng, &space);
    let syn = generate_syntactic_assignment(&mut rng, &space);
    let mut checks = Vec::new();

    let fr = faithfulness_report(&space, &sem)?;
    let good = fr.faithful && fr.min_friendly && fr.min_expressible;
    let op = if good { Some(from_assignment(&space, &sem)?) } else { None };
    let mut agm_ok = false;
    match &op {
        None => {
            checks.push((Property::FromAssignmentAgm, Check::Skip("generated assignment not usable".into())));
            checks.push((Property::ExtractRoundTrip, Check::Skip("no operator".into())));
        }
        Some(op) => {
            let ev = Evaluator::new(&space, op);
            let rep = postulate_report(&ev, CheckOptions::default())?;
            agm_ok = rep.passes_all(&Postulate::AGM);
            checks.push((
                Property::FromAssignmentAgm,
                if agm_ok { Check::Pass } else { Check::Fail(format!("failing {:?}", rep.failed())) },
            ));
            checks.push((
                Property::ExtractRoundTrip,
                if agm_ok {
                    let a = extract_assignment(&ev)?;
                    check_of(assignment_problems(&ev, &a, true)?)
                } else {
                    Check::Skip("operator fails the postulates".into())
                },
            ));
        }
    }

    // syntactic operators exercise the case where G4 may fail
    let mut weak = Vec::new();
    let mut applicable = 0;
    let syn_op = from_assignment(&space, &syn).ok();
    for o in op.iter().chain(syn_op.iter()) {
        let ev = Evaluator::new(&space, o);
        let rep = postulate_report(&ev, CheckOptions::default())?;
        if rep.passes_all(&[Postulate::G1, Postulate::G5, Postulate::G6]) {
            applicable += 1;
            if !rep.passes(Postulate::G4w) {
                weak.push(format!("{} operator fails G4w: {:?}", o.name(), rep.witness(Postulate::G4w)));
            }
        }
    }
    checks.push((
        Property::WeakSyntaxIndependence,
        if applicable == 0 { Check::Skip("no operator satisfies G1, G5, G6".into()) } else { check_of(weak) },
    ));

    match (&op, agm_ok) {
        (Some(op), true) => {
            let ev = Evaluator::new(&space, op);
            let mut bad = Vec::new();
            if space.n() <= MAX_SEARCH_OMEGA {
                for k in space.representatives() {
                    let canon = canonical_rel(&ev, k, Quantifier::Classes)?;
                    for w in compatible_weak_orders(&ev, k, false)? {
                        if !w.is_subset(&canon) {
                            bad.push(format!("K={:?}: weak order {:?} not inside the canonical relation", space.base(k), w));
                            break;
                        }
                    }
                }
                checks.push((Property::CanonicalMaximal, check_of(bad)));
            } else {
                checks.push((Property::CanonicalMaximal, Check::Skip("Ω too large for the weak-order oracle".into())));
            }
            if space.logic().is_expressible(space.omega()) {
                let mut bad = Vec::new();
                for k in space.representatives() {
                    if sqrel(&ev, k, Quantifier::Classes)? != canonical_rel(&ev, k, Quantifier::Classes)? {
                        bad.push(format!("K={:?}: encodings differ", space.base(k)));
                    }
                }
                checks.push((Property::EncodingsCoincide, check_of(bad)));
            } else {
                checks.push((Property::EncodingsCoincide, Check::Skip("no base for all of Ω".into())));
            }
        }
        _ => {
            checks.push((Property::CanonicalMaximal, Check::Skip("operator fails the postulates".into())));
            checks.push((Property::EncodingsCoincide, Check::Skip("operator fails the postulates".into())));
        }
    }

    let loop_free = detect_critical_loop(&space, None)?.is_none();
    let mut bad = Vec::new();
    let mut ran = 0;
    if loop_free {
        for o in op.iter().chain(syn_op.iter()) {
            let ev = Evaluator::new(&space, o);
            let rep = postulate_report(&ev, CheckOptions::default())?;
            if !rep.passes_all(&Postulate::QUASI) {
                continue;
            }
            ran += 1;
            let q = if rep.passes(Postulate::G4w) { Quantifier::Classes } else { Quantifier::AllBases };
            let ks: Vec<usize> = if rep.passes(Postulate::G4) { space.representatives().collect() } else { (0..space.len()).collect() };
            for k in ks {
                let tr = pipeline(&ev, k, q)?;
                let d = detached_pairs(&ev, k, q)?.as_relation(space.n());
                if !tr.step2.minus(&tr.step1).is_subset(&d) || tr.step2.minus(&d) != tr.step0.minus(&d) {
                    bad.push(format!("{} operator, K={:?}", o.name(), space.base(k)));
                    break;
                }
            }
        }
    }
    checks.push((
        Property::ClosureAddsDetached,
        if !loop_free {
            Check::Skip("logic has a critical loop".into())
        } else if ran == 0 {
            Check::Skip("no operator satisfies G1-G3, G5, G6".into())
        } else {
            check_of(bad)
        },
    ));

    Ok(CaseOutcome { seed, omega: space.n(), bases: space.len(), checks })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyTally {
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub first_failure: Option<(u64, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub profile: &'static str,
    pub seed: u64,
    pub cases: u64,
    /// Cases that could not run at all, with the error.
    pub errors: Vec<(u64, String)>,
    pub properties: BTreeMap<Property, PropertyTally>,
}

impl SweepReport {
    pub fn violations(&self) -> u64 {
        self.properties.values().map(|t| t.failed).sum::<u64>() + self.errors.len() as u64
    }
}

/// Folds outcomes in the order given; callers pass them sorted by case index.
pub fn aggregate(profile: Profile, seed: u64, outcomes: Vec<(u64, Result<CaseOutcome>)>) -> SweepReport {
    let mut properties: BTreeMap<Property, PropertyTally> = Property::ALL.iter().map(|&p| (p, PropertyTally::default())).collect();
    let mut errors = Vec::new();
    let cases = outcomes.len() as u64;
    for (s, o) in outcomes {
        match o {
            Err(e) => errors.push((s, e.to_string())),
            Ok(o) => {
                for (p, c) in o.checks {
                    let t = properties.entry(p).or_default();
                    match c {
                        Check::Pass => t.passed += 1,
                        Check::Skip(_) => t.skipped += 1,
                        Check::Fail(msg) => {
                            t.failed += 1;
                            t.first_failure.get_or_insert((s, msg));
                        }
                    }
                }
            }
        }
    }
    SweepReport { profile: profile.name, seed, cases, errors, properties }
}

/// Sequential sweep over `n` cases.
pub fn sweep(profile: Profile, n: u64, seed: u64) -> SweepReport {
    let outcomes = (0..n).map(|i| {
        let s = case_seed(seed, i);
        (s, sweep_case(profile, s))
    });
    aggregate(profile, seed, outcomes.collect())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn junit_xml(r: &SweepReport) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let failures = r.properties.values().filter(|t| t.failed > 0).count() + usize::from(!r.errors.is_empty());
    out += &format!(
        "<testsuite name=\"sweep-{}\" tests=\"{}\" failures=\"{}\">\n",
        r.profile,
        r.properties.len() + 1,
        failures
    );
    for (p, t) in &r.properties {
        out += &format!(
            "  <testcase name=\"{p}\" classname=\"sweep.{}\"><system-out>passed={} skipped={}</system-out>",
            r.profile, t.passed, t.skipped
        );
        if let Some((s, msg)) = &t.first_failure {
            out += &format!("<failure message=\"{} violations\">seed {s}: {}</failure>", t.failed, xml_escape(msg));
        }
        out += "</testcase>\n";
    }
    out += &format!("  <testcase name=\"case_errors\" classname=\"sweep.{}\">", r.profile);
    if let Some((s, msg)) = r.errors.first() {
        out += &format!("<failure message=\"{} errors\">seed {s}: {}</failure>", r.errors.len(), xml_escape(msg));
    }
    out += "</testcase>\n</testsuite>\n";
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct EnforcingSweep {
    pub logics: u64,
    pub mismatches: Vec<u64>,
    pub bad_constructions: Vec<u64>,
    pub trio_expressible: u64,
}

/// Exhaustive preorder-enforcing scan on generated logics with at most
/// four interpretations.
pub fn enforcing_sweep(profile: Profile, n: u64, seed: u64) -> EnforcingSweep {
    let profile = profile.capped(EXHAUSTIVE_OMEGA);
    let mut out = EnforcingSweep { logics: 0, mismatches: Vec::new(), bad_constructions: Vec::new(), trio_expressible: 0 };
    for i in 0..n {
        let s = case_seed(seed, i);
        let logic = generate_logic(&mut ChaCha8Rng::seed_from_u64(s), profile);
        let r = check_preorder_enforcing(&logic, 0, s);
        out.logics += 1;
        if r.trio_expressible {
            out.trio_expressible += 1;
        }
        if !r.agrees {
            out.mismatches.push(s);
        }
        if !r.constructed_ok {
            out.bad_constructions.push(s);
        }
    }
    out
}
