//! Critical loops: base configurations that force a preference cycle, the
//! operator they induce, and strict circles as a per-K diagnostic.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::encoding::{canonical_rel, detached_pairs, Quantifier};
use crate::error::{Error, Result};
use crate::logic::{BaseLogic, BeliefBase, ModelSet};
use crate::operator::{Evaluator, Operator, OperatorKind};
use crate::postulates::{postulate_report, CheckOptions, Postulate};
use crate::space::BaseSpace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// A base consistent with at least three node bases.
    pub cover: BeliefBase,
    pub cover_models: ModelSet,
    /// Consistent base inside the cover but outside every edge base.
    pub witness: BeliefBase,
    pub witness_models: ModelSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalLoop {
    pub k: BeliefBase,
    /// `edge_bases[i]` joins node `i` and node `i+1` (cyclically).
    pub edge_bases: Vec<BeliefBase>,
    pub node_bases: Vec<BeliefBase>,
    pub certificates: Vec<Certificate>,
}

impl CriticalLoop {
    pub fn len(&self) -> usize {
        self.node_bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_bases.is_empty()
    }
}

/// Nonempty expressible model sets with no nonempty expressible proper
/// subset, as class indices.
fn atoms(space: &BaseSpace) -> Vec<usize> {
    let cls = space.classes();
    (0..cls.len())
        .filter(|&c| {
            let m = cls[c].models;
            !m.is_empty() && !cls.iter().any(|o| !o.models.is_empty() && o.models != m && o.models.is_subset(m))
        })
        .collect()
}

/// Checks condition (3) for the given node and edge model sets; returns the
/// certificates, or `None` if some cover has no witness.
fn certify(space: &BaseSpace, nodes: &[ModelSet], edge_union: ModelSet) -> Option<Vec<Certificate>> {
    let cls = space.classes();
    let mut certs = Vec::new();
    for c in cls {
        if nodes.iter().filter(|n| n.meets(c.models)).count() < 3 {
            continue;
        }
        let free = c.models.minus(edge_union);
        let w = cls.iter().find(|o| !o.models.is_empty() && o.models.is_subset(free))?;
        certs.push(Certificate {
            cover: space.base(c.representative).clone(),
            cover_models: c.models,
            witness: space.base(w.representative).clone(),
            witness_models: w.models,
        });
    }
    Some(certs)
}

/// Searches by increasing length, then K class, then node and edge classes in
/// lexicographic order. Node bases are restricted to minimal nonempty model
/// sets, which loses no loops: shrinking nodes keeps all three conditions.
pub fn detect_critical_loop(space: &BaseSpace, max_len: Option<usize>) -> Result<Option<CriticalLoop>> {
    let max_len = max_len.unwrap_or(space.n());
    let cls = space.classes();
    let atoms = atoms(space);
    for len in 3..=max_len {
        for kc in cls {
            let km = kc.models;
            let nodes: Vec<usize> = atoms.iter().copied().filter(|&a| !cls[a].models.meets(km)).collect();
            if nodes.len() < len {
                continue;
            }
            let m = nodes.len();
            // inclusion-minimal edge classes per node pair
            let mut edges: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); m]; m];
            for x in 0..m {
                for y in x + 1..m {
                    let (a, b) = (cls[nodes[x]].models, cls[nodes[y]].models);
                    if a.meets(b) {
                        continue;
                    }
                    let need = a.union(b);
                    let cands: Vec<usize> = (0..cls.len())
                        .filter(|&e| need.is_subset(cls[e].models) && !cls[e].models.meets(km))
                        .collect();
                    let minimal: Vec<usize> = cands
                        .iter()
                        .copied()
                        .filter(|&e| !cands.iter().any(|&o| o != e && cls[o].models.is_subset(cls[e].models)))
                        .collect();
                    edges[x][y] = minimal.clone();
                    edges[y][x] = minimal;
                }
            }
            let mut path = Vec::with_capacity(len);
            if let Some(found) = search_cycles(space, &nodes, &edges, len, &mut path) {
                let (cycle, edge_choice, certificates) = found;
                return Ok(Some(CriticalLoop {
                    k: space.base(kc.representative).clone(),
                    edge_bases: edge_choice.iter().map(|&e| space.base(cls[e].representative).clone()).collect(),
                    node_bases: cycle.iter().map(|&x| space.base(cls[nodes[x]].representative).clone()).collect(),
                    certificates,
                }));
            }
        }
    }
    Ok(None)
}

type Found = (Vec<usize>, Vec<usize>, Vec<Certificate>);

fn search_cycles(
    space: &BaseSpace,
    nodes: &[usize],
    edges: &[Vec<Vec<usize>>],
    len: usize,
    path: &mut Vec<usize>,
) -> Option<Found> {
    let m = nodes.len();
    if path.len() == len {
        let (first, last) = (path[0], path[len - 1]);
        // each undirected cycle once: the second node precedes the last
        if edges[last][first].is_empty() || path[1] > last {
            return None;
        }
        return try_edges(space, nodes, edges, path);
    }
    let start = if path.is_empty() { 0 } else { path[0] + 1 };
    for v in start..m {
        if path.contains(&v) {
            continue;
        }
        if let Some(&prev) = path.last() {
            if edges[prev][v].is_empty() {
                continue;
            }
        }
        path.push(v);
        let r = search_cycles(space, nodes, edges, len, path);
        path.pop();
        if r.is_some() {
            return r;
        }
    }
    None
}

fn try_edges(space: &BaseSpace, nodes: &[usize], edges: &[Vec<Vec<usize>>], cycle: &[usize]) -> Option<Found> {
    let cls = space.classes();
    let len = cycle.len();
    let options: Vec<&Vec<usize>> = (0..len).map(|i| &edges[cycle[i]][cycle[(i + 1) % len]]).collect();
    let node_models: Vec<ModelSet> = cycle.iter().map(|&x| cls[nodes[x]].models).collect();
    let mut choice = vec![0usize; len];
    loop {
        let chosen: Vec<usize> = (0..len).map(|i| options[i][choice[i]]).collect();
        let union = chosen.iter().fold(ModelSet::EMPTY, |acc, &e| acc.union(cls[e].models));
        if let Some(certs) = certify(space, &node_models, union) {
            return Some((cycle.to_vec(), chosen, certs));
        }
        // odometer over edge choices
        let mut i = len;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

pub fn validate_loop(space: &BaseSpace, lp: &CriticalLoop) -> Result<()> {
    let logic = space.logic();
    let bad = |s: String| Err(Error::InvalidLoop(s));
    let n = lp.node_bases.len();
    if n < 3 || lp.edge_bases.len() != n {
        return bad(format!("{n} node bases and {} edge bases; need equal counts of at least 3", lp.edge_bases.len()));
    }
    for b in lp.node_bases.iter().chain(&lp.edge_bases).chain(std::iter::once(&lp.k)) {
        space.id_of(b)?;
    }
    let km = logic.models_of(&lp.k)?;
    let nodes: Vec<ModelSet> = lp.node_bases.iter().map(|b| logic.models_of(b)).collect::<Result<_>>()?;
    let edges: Vec<ModelSet> = lp.edge_bases.iter().map(|b| logic.models_of(b)).collect::<Result<_>>()?;
    for (i, e) in edges.iter().enumerate() {
        if e.meets(km) {
            return bad(format!("edge {i} is consistent with K"));
        }
        if !nodes[i].union(nodes[(i + 1) % n]).is_subset(*e) {
            return bad(format!("edge {i} does not cover its nodes"));
        }
    }
    for i in 0..n {
        if nodes[i].is_empty() {
            return bad(format!("node {i} is inconsistent"));
        }
        for j in i + 1..n {
            if nodes[i].meets(nodes[j]) {
                return bad(format!("nodes {i} and {j} are consistent with each other"));
            }
        }
    }
    let union = edges.iter().fold(ModelSet::EMPTY, |a, &e| a.union(e));
    if certify(space, &nodes, union).is_none() {
        return bad("some base consistent with three nodes has no consistent part outside the edges".into());
    }
    Ok(())
}

/// Revision that realizes a critical loop at K and is trivial elsewhere.
#[derive(Clone, Debug)]
pub struct LoopOperator {
    pub k_models: ModelSet,
    pub nodes: Vec<(BeliefBase, ModelSet)>,
    /// Bases outside the edges and K, in lexicographic id order.
    pub escapes: Vec<(BeliefBase, ModelSet)>,
}

impl LoopOperator {
    pub fn revise(&self, logic: &BaseLogic, k: &BeliefBase, g: &BeliefBase) -> Result<BeliefBase> {
        let gm = logic.models_of(g)?;
        if logic.models_of(k)? != self.k_models {
            let u = logic.union(k, g)?;
            return Ok(if logic.models_of(&u)?.is_empty() { g.clone() } else { u });
        }
        if gm.meets(self.k_models) {
            return logic.union(g, k);
        }
        if let Some((b, _)) = self.escapes.iter().find(|(_, m)| m.meets(gm)) {
            return logic.union(g, b);
        }
        let n = self.nodes.len();
        for i in 0..n {
            let next = (i + 1) % n;
            if gm.meets(self.nodes[i].1)
                && (0..n).filter(|&j| j != i && j != next).all(|j| !gm.meets(self.nodes[j].1))
            {
                return logic.union(g, &self.nodes[i].0);
            }
        }
        Ok(g.clone())
    }
}

pub fn operator_from_loop(space: &BaseSpace, lp: &CriticalLoop) -> Result<Operator> {
    validate_loop(space, lp)?;
    let logic = space.logic();
    let km = logic.models_of(&lp.k)?;
    let nodes: Vec<(BeliefBase, ModelSet)> =
        lp.node_bases.iter().map(|b| Ok((b.clone(), logic.models_of(b)?))).collect::<Result<_>>()?;
    let union = lp.edge_bases.iter().try_fold(ModelSet::EMPTY, |a, b| Ok::<_, Error>(a.union(logic.models_of(b)?)))?;
    let frees: Vec<ModelSet> = space
        .classes()
        .iter()
        .filter(|c| nodes.iter().filter(|(_, m)| m.meets(c.models)).count() >= 3)
        .map(|c| c.models.minus(union))
        .collect();
    let mut escapes: Vec<(BeliefBase, ModelSet)> = (0..space.len())
        .filter(|&b| {
            let m = space.models(b);
            !m.is_empty() && !m.meets(km) && frees.iter().any(|f| m.is_subset(*f))
        })
        .map(|b| (space.base(b).clone(), space.models(b)))
        .collect();
    escapes.sort();
    Ok(Operator::new(OperatorKind::FromLoop(LoopOperator { k_models: km, nodes, escapes })))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrictCircle {
    pub k: BeliefBase,
    /// Starts with the strict step.
    pub interpretations: Vec<usize>,
}

pub fn strict_circles(ev: &Evaluator, k: usize, max_len: Option<usize>) -> Result<Vec<StrictCircle>> {
    let report = postulate_report(ev, CheckOptions::default())?;
    if !report.passes_all(&Postulate::QUASI) {
        return Err(Error::PostulatePrerequisiteFailed(format!(
            "strict circles need G1-G3, G5, G6; failing: {:?}",
            report.failed()
        )));
    }
    let q = if report.passes(Postulate::G4w) { Quantifier::Classes } else { Quantifier::AllBases };
    let rel = canonical_rel(ev, k, q)?;
    let det = detached_pairs(ev, k, q)?;
    let n = rel.n();
    let max_len = max_len.unwrap_or(n);
    let edge = |i: usize, j: usize| i != j && rel.leq(i, j) && !det.contains(i, j);
    let mut found = BTreeSet::new();
    let mut path = Vec::new();
    for s in 0..n {
        path.push(s);
        cycles_from(s, n, &edge, max_len, &mut path, &mut |cyc| {
            let l = cyc.len();
            let best = (0..l)
                .filter(|&r| rel.less(cyc[r], cyc[(r + 1) % l]))
                .map(|r| (0..l).map(|i| cyc[(r + i) % l]).collect::<Vec<_>>())
                .min();
            if let Some(b) = best {
                found.insert(b);
            }
        });
        path.pop();
    }
    let kb = ev.space().base(k).clone();
    Ok(found.into_iter().map(|interpretations| StrictCircle { k: kb.clone(), interpretations }).collect())
}

/// Simple cycles whose least vertex is `path[0]`.
fn cycles_from(
    s: usize,
    n: usize,
    edge: &dyn Fn(usize, usize) -> bool,
    max_len: usize,
    path: &mut Vec<usize>,
    out: &mut dyn FnMut(&[usize]),
) {
    let last = *path.last().unwrap();
    if path.len() >= 2 && edge(last, s) {
        out(path);
    }
    if path.len() == max_len {
        return;
    }
    for v in s + 1..n {
        if !path.contains(&v) && edge(last, v) {
            path.push(v);
            cycles_from(s, n, edge, max_len, path, out);
            path.pop();
        }
    }
}
