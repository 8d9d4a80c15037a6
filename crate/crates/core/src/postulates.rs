//! Exhaustive checks of the revision postulates over an enumerated family.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{BeliefBase, ModelSet};
use crate::operator::Evaluator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Postulate {
    G1,
    G2,
    G3,
    G4,
    G4w,
    G5,
    G6,
    Edf,
    Acyc,
}

impl Postulate {
    pub const AGM: [Postulate; 6] = [Postulate::G1, Postulate::G2, Postulate::G3, Postulate::G4, Postulate::G5, Postulate::G6];
    /// The postulates of the syntax-dependent regime.
    pub const QUASI: [Postulate; 5] = [Postulate::G1, Postulate::G2, Postulate::G3, Postulate::G5, Postulate::G6];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Full,
    Semantic,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub bases: Vec<(String, BeliefBase)>,
    pub sets: Vec<(String, ModelSet)>,
}

impl Witness {
    pub fn base(&self, role: &str) -> Option<&BeliefBase> {
        self.bases.iter().find(|(r, _)| r == role).map(|(_, b)| b)
    }

    pub fn set(&self, role: &str) -> Option<ModelSet> {
        self.sets.iter().find(|(r, _)| r == role).map(|(_, m)| *m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail(Witness),
    Skipped(String),
}

impl Status {
    pub fn passed(&self) -> bool {
        matches!(self, Status::Pass)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PostulateReport {
    pub mode: CheckMode,
    pub notes: Vec<String>,
    pub results: BTreeMap<Postulate, Status>,
}

impl PostulateReport {
    pub fn passes(&self, p: Postulate) -> bool {
        self.results.get(&p).is_some_and(Status::passed)
    }

    pub fn passes_all(&self, ps: &[Postulate]) -> bool {
        ps.iter().all(|&p| self.passes(p))
    }

    pub fn witness(&self, p: Postulate) -> Option<&Witness> {
        match self.results.get(&p) {
            Some(Status::Fail(w)) => Some(w),
            _ => None,
        }
    }

    pub fn failed(&self) -> Vec<Postulate> {
        self.results.iter().filter(|(_, s)| matches!(s, Status::Fail(_))).map(|(p, _)| *p).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub mode: CheckMode,
    pub acyc: bool,
    /// Longest chain Γ1..Γn considered; defaults to the number of classes.
    pub acyc_max_len: Option<usize>,
    /// Largest number of (K, Γ1, Γ2) triples tolerated when equivalent
    /// bases cannot be collapsed.
    pub triple_budget: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { mode: CheckMode::Semantic, acyc: false, acyc_max_len: None, triple_budget: 200_000_000 }
    }
}

impl CheckOptions {
    pub fn full() -> Self {
        CheckOptions { mode: CheckMode::Full, ..Default::default() }
    }
}

fn fail(bases: Vec<(&str, &BeliefBase)>, sets: Vec<(&str, ModelSet)>) -> Status {
    Status::Fail(Witness {
        bases: bases.into_iter().map(|(r, b)| (r.to_string(), b.clone())).collect(),
        sets: sets.into_iter().map(|(r, m)| (r.to_string(), m)).collect(),
    })
}

pub fn postulate_report(ev: &Evaluator, opts: CheckOptions) -> Result<PostulateReport> {
    let sp = ev.space();
    let n = sp.len();
    let mut notes = Vec::new();
    let mut g1 = None;
    let mut g2 = None;
    let mut g3 = None;
    let mut g4 = None;
    let mut g4w = None;

    let rep = |id: usize| sp.classes()[sp.class_of(id)].representative;
    for k in 0..n {
        let km = sp.models(k);
        for g in 0..n {
            let gm = sp.models(g);
            let r = ev.get(k, g)?;
            let (kb, gb) = (sp.base(k), sp.base(g));
            if g1.is_none() && !r.is_subset(gm) {
                g1 = Some(fail(vec![("K", kb), ("Γ", gb)], vec![("K∘Γ", r), ("Γ", gm)]));
            }
            let u = km.intersect(gm);
            if g2.is_none() && !u.is_empty() && r != u {
                g2 = Some(fail(vec![("K", kb), ("Γ", gb)], vec![("K∘Γ", r), ("K⋓Γ", u)]));
            }
            if g3.is_none() && !gm.is_empty() && r.is_empty() {
                g3 = Some(fail(vec![("K", kb), ("Γ", gb)], vec![("K∘Γ", r), ("Γ", gm)]));
            }
            if g4w.is_none() {
                let g2b = rep(g);
                let other = ev.get(k, g2b)?;
                if other != r {
                    g4w = Some(fail(
                        vec![("K", kb), ("Γ1", sp.base(g2b)), ("Γ2", gb)],
                        vec![("K∘Γ1", other), ("K∘Γ2", r)],
                    ));
                }
            }
            if g4.is_none() {
                let (k1, g1b) = (rep(k), rep(g));
                let other = ev.get(k1, g1b)?;
                if other != r {
                    g4 = Some(fail(
                        vec![("K1", sp.base(k1)), ("Γ1", sp.base(g1b)), ("K2", kb), ("Γ2", gb)],
                        vec![("K1∘Γ1", other), ("K2∘Γ2", r)],
                    ));
                }
            }
        }
    }
    let mut results = BTreeMap::new();
    results.insert(Postulate::G1, g1.unwrap_or(Status::Pass));
    results.insert(Postulate::G2, g2.unwrap_or(Status::Pass));
    results.insert(Postulate::G3, g3.unwrap_or(Status::Pass));
    let g4_ok = g4.is_none();
    let g4w_ok = g4w.is_none();
    results.insert(Postulate::G4, g4.unwrap_or(Status::Pass));
    results.insert(Postulate::G4w, g4w.unwrap_or(Status::Pass));

    let k_domain: Vec<usize> = match opts.mode {
        CheckMode::Semantic if g4_ok => {
            notes.push("K ranges over class representatives for G5, G6, EDF and Acyc; sound because G4 passed".into());
            sp.representatives().collect()
        }
        CheckMode::Semantic => {
            notes.push("G4 failed: semantic mode falls back to all bases for K".into());
            (0..n).collect()
        }
        CheckMode::Full => (0..n).collect(),
    };
    let g_domain: Vec<usize> = if g4w_ok {
        notes.push("Γ1, Γ2 range over class representatives; sound because G4w passed".into());
        sp.representatives().collect()
    } else {
        (0..n).collect()
    };
    let triples = k_domain.len() as u64 * g_domain.len() as u64 * g_domain.len() as u64;
    if triples > opts.triple_budget {
        return Err(Error::EnumerationCapExceeded { bases: triples as u128, cap: opts.triple_budget as u128 });
    }

    let mut unions: HashMap<(usize, usize), usize> = HashMap::new();
    for &a in &g_domain {
        for &b in &g_domain {
            let mut u = sp.union(a, b)?;
            if g4w_ok {
                u = rep(u);
            }
            unions.insert((a, b), u);
        }
    }

    let mut g5 = None;
    let mut g6 = None;
    'k: for &k in &k_domain {
        for &a in &g_domain {
            let ra = ev.get(k, a)?;
            for &b in &g_domain {
                let lhs = ra.intersect(sp.models(b));
                let u = unions[&(a, b)];
                let rhs = ev.get(k, u)?;
                let bases = || vec![("K", sp.base(k)), ("Γ1", sp.base(a)), ("Γ2", sp.base(b))];
                let sets = || vec![("K∘Γ1", ra), ("(K∘Γ1)⋓Γ2", lhs), ("K∘(Γ1⋓Γ2)", rhs)];
                if g5.is_none() && !lhs.is_subset(rhs) {
                    g5 = Some(fail(bases(), sets()));
                }
                if g6.is_none() && !lhs.is_empty() && !rhs.is_subset(lhs) {
                    g6 = Some(fail(bases(), sets()));
                }
                if g5.is_some() && g6.is_some() {
                    break 'k;
                }
            }
        }
    }
    results.insert(Postulate::G5, g5.unwrap_or(Status::Pass));
    results.insert(Postulate::G6, g6.unwrap_or(Status::Pass));
    results.insert(Postulate::Edf, edf(ev, &k_domain, &g_domain)?);
    if opts.acyc {
        notes.push("Acyc is read with the abstract union in place of set union".into());
        results.insert(Postulate::Acyc, acyc(ev, &k_domain, &g_domain, opts.acyc_max_len)?);
    }
    Ok(PostulateReport { mode: opts.mode, notes, results })
}

fn edf(ev: &Evaluator, k_domain: &[usize], g_domain: &[usize]) -> Result<Status> {
    let sp = ev.space();
    let mut by_models: HashMap<ModelSet, Vec<usize>> = HashMap::new();
    for &g in g_domain {
        by_models.entry(sp.models(g)).or_default().push(g);
    }
    for &k in k_domain {
        for (i, &a) in g_domain.iter().enumerate() {
            let ra = ev.get(k, a)?;
            for &b in &g_domain[i..] {
                let Some(covers) = by_models.get(&sp.models(a).union(sp.models(b))) else { continue };
                let rb = ev.get(k, b)?;
                for &g in covers {
                    let r = ev.get(k, g)?;
                    if r != ra && r != rb && r != ra.union(rb) {
                        return Ok(fail(
                            vec![("K", sp.base(k)), ("Γ", sp.base(g)), ("Γ1", sp.base(a)), ("Γ2", sp.base(b))],
                            vec![("K∘Γ", r), ("K∘Γ1", ra), ("K∘Γ2", rb)],
                        ));
                    }
                }
            }
        }
    }
    Ok(Status::Pass)
}

/// A violation is a walk Γ1 → … → Γn together with Γn → Γ1 but not
/// Γ1 → Γn, where `a → b` means Γa is consistent with K∘Γb.
fn acyc(ev: &Evaluator, k_domain: &[usize], g_domain: &[usize], max_len: Option<usize>) -> Result<Status> {
    let sp = ev.space();
    let m = g_domain.len();
    let max_len = max_len.unwrap_or(sp.classes().len()).max(2);
    for &k in k_domain {
        let results: Vec<ModelSet> = g_domain.iter().map(|&g| ev.get(k, g)).collect::<Result<_>>()?;
        let edge = |a: usize, b: usize| sp.models(g_domain[a]).meets(results[b]);
        for start in 0..m {
            // BFS over walks of at most max_len - 1 edges
            let mut parent: Vec<Option<usize>> = vec![None; m];
            let mut dist: Vec<usize> = vec![usize::MAX; m];
            let mut queue = VecDeque::new();
            for b in 0..m {
                if edge(start, b) {
                    dist[b] = 1;
                    parent[b] = Some(start);
                    queue.push_back(b);
                }
            }
            while let Some(x) = queue.pop_front() {
                if dist[x] + 1 >= max_len {
                    continue;
                }
                for y in 0..m {
                    if dist[y] == usize::MAX && edge(x, y) {
                        dist[y] = dist[x] + 1;
                        parent[y] = Some(x);
                        queue.push_back(y);
                    }
                }
            }
            for end in 0..m {
                if dist[end] != usize::MAX && edge(end, start) && !edge(start, end) {
                    let mut path = vec![end];
                    let mut cur = end;
                    while dist[cur] > 1 {
                        cur = parent[cur].unwrap();
                        path.push(cur);
                    }
                    path.push(start);
                    path.reverse();
                    let mut bases = vec![("K".to_string(), sp.base(k).clone())];
                    bases.extend(
                        path.iter().enumerate().map(|(i, &x)| (format!("Γ{}", i + 1), sp.base(g_domain[x]).clone())),
                    );
                    return Ok(Status::Fail(Witness {
                        bases,
                        sets: vec![
                            ("K∘Γ1".into(), results[start]),
                            ("K∘Γn".into(), results[end]),
                            ("Γ1".into(), sp.models(g_domain[start])),
                        ],
                    }));
                }
            }
        }
    }
    Ok(Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::operator::Operator;
    use crate::space::BaseSpace;

    #[test]
    fn trivial_revision_satisfies_agm_on_threshold_logic() {
        let sp = BaseSpace::new(gallery::b_four()).unwrap();
        let op = Operator::trivial();
        let ev = Evaluator::new(&sp, &op);
        let r = postulate_report(&ev, CheckOptions { acyc: true, ..CheckOptions::full() }).unwrap();
        assert!(r.passes_all(&Postulate::AGM), "{r:?}");
        assert!(r.passes(Postulate::Edf) && r.passes(Postulate::Acyc));
    }

    #[test]
    fn plain_union_breaks_consistency() {
        let sp = BaseSpace::new(gallery::b_four()).unwrap();
        let op = Operator::plain_union();
        let ev = Evaluator::new(&sp, &op);
        let r = postulate_report(&ev, CheckOptions::default()).unwrap();
        assert!(!r.passes(Postulate::G3));
        assert!(r.passes(Postulate::G1));
    }
}
