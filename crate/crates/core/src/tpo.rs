//! Turning the canonical relation into a compatible total preorder, and a
//! brute-force search over all weak orders.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::assignment::Assignment;
use crate::critical_loop::detect_critical_loop;
use crate::encoding::{canonical_rel, detached_pairs, DetachedPairs, Quantifier};
use crate::error::{Error, Result};
use crate::logic::{BeliefBase, ModelSet};
use crate::operator::Evaluator;
use crate::postulates::{postulate_report, CheckOptions, Postulate};
use crate::relation::PreferenceRelation;

/// Total preorder extending a preorder: mutual classes are collapsed and
/// placed on their own level in topological order, ties going to the class
/// with the least member.
pub fn linearize(pre: &PreferenceRelation) -> Result<PreferenceRelation> {
    if !pre.is_preorder() {
        return Err(Error::NotAPreorder);
    }
    let n = pre.n();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i] == usize::MAX {
            let members: Vec<usize> = (i..n).filter(|&j| pre.leq(i, j) && pre.leq(j, i)).collect();
            for &j in &members {
                class_of[j] = classes.len();
            }
            classes.push(members);
        }
    }
    let c = classes.len();
    let below = |a: usize, b: usize| a != b && pre.leq(classes[a][0], classes[b][0]);
    let mut placed = vec![false; c];
    let mut level = vec![0usize; c];
    for l in 0..c {
        // classes are ordered by least member, so the first ready one wins ties
        let next = (0..c).find(|&x| !placed[x] && (0..c).all(|y| placed[y] || !below(y, x))).unwrap();
        placed[next] = true;
        level[next] = l;
    }
    let levels: Vec<usize> = (0..n).map(|i| level[class_of[i]]).collect();
    Ok(PreferenceRelation::from_levels(&levels))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinSnapshot {
    pub gamma: BeliefBase,
    pub models: ModelSet,
    /// Minimum under each step's relation.
    pub minima: [ModelSet; 4],
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineTrace {
    pub k: BeliefBase,
    pub step0: PreferenceRelation,
    pub detached: DetachedPairs,
    pub step1: PreferenceRelation,
    pub step2: PreferenceRelation,
    pub step3: PreferenceRelation,
    pub snapshots: Vec<MinSnapshot>,
}

impl PipelineTrace {
    pub fn minima_agree(&self) -> bool {
        self.snapshots.iter().all(|s| s.minima.iter().all(|&m| m == s.minima[0]))
    }
}

/// The pipeline without the precondition checks; fails only if the closed
/// relation is not a preorder.
pub fn pipeline(ev: &Evaluator, k: usize, q: Quantifier) -> Result<PipelineTrace> {
    let sp = ev.space();
    let step0 = canonical_rel(ev, k, q)?;
    let detached = detached_pairs(ev, k, q)?;
    let step1 = step0.minus(&detached.as_relation(sp.n()));
    let step2 = step1.transitive_closure();
    let step3 = linearize(&step2)?;
    let snapshots = sp
        .classes()
        .iter()
        .map(|c| MinSnapshot {
            gamma: sp.base(c.representative).clone(),
            models: c.models,
            minima: [&step0, &step1, &step2, &step3].map(|r| r.min_models(c.models)),
        })
        .collect();
    Ok(PipelineTrace { k: sp.base(k).clone(), step0, detached, step1, step2, step3, snapshots })
}

pub fn to_total_preorder(ev: &Evaluator, k: usize) -> Result<PipelineTrace> {
    let report = postulate_report(ev, CheckOptions::default())?;
    if !report.passes_all(&Postulate::QUASI) {
        return Err(Error::PostulatePrerequisiteFailed(format!(
            "the pipeline needs G1-G3, G5, G6; failing: {:?}",
            report.failed()
        )));
    }
    if let Some(lp) = detect_critical_loop(ev.space(), None)? {
        return Err(Error::CriticalLoopPresent(Box::new(lp)));
    }
    let q = if report.passes(Postulate::G4w) { Quantifier::Classes } else { Quantifier::AllBases };
    pipeline(ev, k, q)
}

/// All weak orders on `n` points as level vectors, in lexicographic order of
/// the vectors. Levels are dense: every level below the maximum is used.
pub struct WeakOrders {
    n: usize,
    levels: Vec<usize>,
    done: bool,
}

impl WeakOrders {
    pub fn new(n: usize) -> Self {
        WeakOrders { n, levels: vec![0; n], done: false }
    }

    fn surjective(&self) -> bool {
        let used = self.levels.iter().fold(0u64, |acc, &l| acc | 1 << l);
        used & (used + 1) == 0
    }

    fn advance(&mut self) -> bool {
        for i in (0..self.n).rev() {
            if self.levels[i] + 1 < self.n {
                self.levels[i] += 1;
                for l in &mut self.levels[i + 1..] {
                    *l = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for WeakOrders {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        while !self.done {
            let cur = self.surjective().then(|| self.levels.clone());
            if !self.advance() {
                self.done = true;
            }
            if cur.is_some() {
                return cur;
            }
        }
        None
    }
}

pub const MAX_SEARCH_OMEGA: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    One(usize),
    AllClasses,
}

/// First weak order (in enumeration order) that is quasi-faithful for K,
/// min-complete and reproduces every revision result at K.
pub fn first_compatible_weak_order(ev: &Evaluator, k: usize) -> Result<Option<PreferenceRelation>> {
    Ok(compatible_weak_orders(ev, k, true)?.into_iter().next())
}

/// Every such weak order, or only the first when `first_only` is set.
pub fn compatible_weak_orders(ev: &Evaluator, k: usize, first_only: bool) -> Result<Vec<PreferenceRelation>> {
    let sp = ev.space();
    let n = sp.n();
    if n > MAX_SEARCH_OMEGA {
        return Err(Error::OmegaTooLarge(n));
    }
    let km = sp.models(k);
    let mut constraints: BTreeMap<ModelSet, ModelSet> = BTreeMap::new();
    for g in 0..sp.len() {
        let r = ev.get(k, g)?;
        let m = sp.models(g);
        if let Some(&prev) = constraints.get(&m) {
            if prev != r {
                // results differ for equivalent bases: no relation fits
                return Ok(Vec::new());
            }
        }
        constraints.insert(m, r);
    }
    let mut out = Vec::new();
    for levels in WeakOrders::new(n) {
        // quasi-faithful: models of K share the bottom level
        if !km.is_empty() {
            let bottom = levels[km.iter().next().unwrap()];
            if km.iter().any(|i| levels[i] != bottom) || (0..n).any(|j| !km.contains(j) && levels[j] <= bottom) {
                continue;
            }
        }
        let rel = PreferenceRelation::from_levels(&levels);
        // weak orders are total, so minima of nonempty sets are nonempty
        if constraints.iter().all(|(&m, &r)| rel.min_models(m) == r) {
            out.push(rel);
            if first_only {
                break;
            }
        }
    }
    Ok(out)
}

pub fn brute_force_tpo_search(ev: &Evaluator, scope: Scope) -> Result<Option<Assignment>> {
    let sp = ev.space();
    if sp.n() > MAX_SEARCH_OMEGA {
        return Err(Error::OmegaTooLarge(sp.n()));
    }
    let ks: Vec<usize> = match scope {
        Scope::One(k) => vec![k],
        Scope::AllClasses => sp.representatives().collect(),
    };
    let mut map = BTreeMap::new();
    for k in ks {
        match first_compatible_weak_order(ev, k)? {
            Some(rel) => {
                map.insert(sp.models(k), rel);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(Assignment::Semantic(map)))
}
