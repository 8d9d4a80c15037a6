//! Preference relations read off an operator at a fixed base K.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{BeliefBase, FamilyKind, ModelSet};
use crate::operator::Evaluator;
use crate::relation::PreferenceRelation;

/// Which bases Γ the encodings quantify over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    /// One representative per model set; sound when the operator is
    /// insensitive to the syntax of Γ.
    Classes,
    AllBases,
}

fn gamma_domain(ev: &Evaluator, q: Quantifier) -> Vec<usize> {
    match q {
        Quantifier::Classes => ev.space().representatives().collect(),
        Quantifier::AllBases => (0..ev.space().len()).collect(),
    }
}

/// `ω1 ⊑ ω2` iff every Γ covering both that rewards ω2 also rewards ω1.
pub fn sqrel(ev: &Evaluator, k: usize, q: Quantifier) -> Result<PreferenceRelation> {
    let sp = ev.space();
    let n = sp.n();
    let mut rel = PreferenceRelation::complete(n);
    for g in gamma_domain(ev, q) {
        let m = sp.models(g);
        let r = ev.get(k, g)?;
        for w2 in r.intersect(m).iter() {
            for w1 in m.minus(r).iter() {
                rel.set(w1, w2, false);
            }
        }
    }
    Ok(rel)
}

pub fn canonical_from_sqrel(sq: &PreferenceRelation, k_models: ModelSet) -> PreferenceRelation {
    PreferenceRelation::from_fn(sq.n(), |i, j| {
        k_models.contains(i) || (!k_models.contains(j) && sq.leq(i, j))
    })
}

/// `ω1 ⪯ ω2` iff ω1 ⊨ K, or neither is a model of K and ω1 ⊑ ω2.
pub fn canonical_rel(ev: &Evaluator, k: usize, q: Quantifier) -> Result<PreferenceRelation> {
    Ok(canonical_from_sqrel(&sqrel(ev, k, q)?, ev.space().models(k)))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DetachedPairs {
    /// Unordered pairs stored as `(low, high)`.
    pairs: BTreeSet<(usize, usize)>,
}

impl DetachedPairs {
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }

    pub fn unordered(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Both orientations of every pair.
    pub fn as_relation(&self, n: usize) -> PreferenceRelation {
        PreferenceRelation::from_pairs(n, self.pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]))
    }
}

/// Pairs of distinct interpretations that no revision result covering both
/// ever contains. Pairs touching a model of K are left out: the canonical
/// relation already fixes them, and dropping them would undo the strict
/// preference of K-models.
pub fn detached_pairs(ev: &Evaluator, k: usize, q: Quantifier) -> Result<DetachedPairs> {
    let raw = detached_pairs_unrestricted(ev, k, q)?;
    let km = ev.space().models(k);
    Ok(DetachedPairs { pairs: raw.pairs.into_iter().filter(|&(a, b)| !km.contains(a) && !km.contains(b)).collect() })
}

/// Every pair never rewarded by a base covering it, including pairs with a
/// model of K that no base covers.
pub fn detached_pairs_unrestricted(ev: &Evaluator, k: usize, q: Quantifier) -> Result<DetachedPairs> {
    let sp = ev.space();
    let n = sp.n();
    let mut attached = vec![0u64; n];
    for g in gamma_domain(ev, q) {
        let m = sp.models(g);
        let r = ev.get(k, g)?.intersect(m);
        for a in r.iter() {
            for b in m.iter() {
                attached[a] |= 1 << b;
                attached[b] |= 1 << a;
            }
        }
    }
    let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| attached[a] >> b & 1 == 0).collect();
    Ok(DetachedPairs { pairs })
}

/// The base with exactly the given models, if any.
fn form(ev: &Evaluator, m: ModelSet) -> Option<usize> {
    let sp = ev.space();
    sp.class_with_models(m).map(|c| sp.classes()[c].representative)
}

pub fn km_pair(ev: &Evaluator, k: usize, w1: usize, w2: usize) -> Result<bool> {
    let sp = ev.space();
    if sp.models(k).contains(w1) {
        return Ok(true);
    }
    let g = form(ev, ModelSet::pair(w1, w2)).ok_or(Error::FormInexpressible(w1, w2))?;
    Ok(ev.get(k, g)?.contains(w1))
}

/// Fails on the first pair, in row-major order, without a base for it.
pub fn km_rel(ev: &Evaluator, k: usize) -> Result<PreferenceRelation> {
    let n = ev.space().n();
    let mut rel = PreferenceRelation::empty(n);
    for i in 0..n {
        for j in 0..n {
            rel.set(i, j, km_pair(ev, k, i, j)?);
        }
    }
    Ok(rel)
}

/// Base made of the sentences true at both interpretations, built inside the
/// family. `None` when the family has no such base.
pub fn shared_sentences_base(ev: &Evaluator, w1: usize, w2: usize) -> Option<usize> {
    let sp = ev.space();
    let logic = sp.logic();
    let shared = logic.sentences_above(ModelSet::pair(w1, w2));
    let base = match logic.family().kind {
        FamilyKind::ArbitrarySets | FamilyKind::FiniteSets | FamilyKind::BeliefSets => shared,
        FamilyKind::SingleSentences => {
            let mut ids = shared.ids().iter().copied();
            match ids.next() {
                None => BeliefBase::empty(),
                Some(first) => {
                    let mut acc = first;
                    for id in ids {
                        acc = logic.conjoin(acc, id).ok()?;
                    }
                    BeliefBase::single(acc)
                }
            }
        }
    };
    sp.id_of(&base).ok()
}

/// Transitive closure of the pairs `(ω1, ω2)` with ω1 rewarded when revising
/// by what ω1 and ω2 share.
pub fn dpw_rel(ev: &Evaluator, k: usize) -> Result<PreferenceRelation> {
    let n = ev.space().n();
    let mut rel = PreferenceRelation::empty(n);
    for i in 0..n {
        for j in 0..n {
            if let Some(g) = shared_sentences_base(ev, i, j) {
                if ev.get(k, g)?.contains(i) {
                    rel.set(i, j, true);
                }
            }
        }
    }
    Ok(rel.transitive_closure())
}

pub fn aiguier_rel(ev: &Evaluator, k: usize) -> Result<PreferenceRelation> {
    let sp = ev.space();
    let n = sp.n();
    let km = sp.models(k);
    let mut rel = PreferenceRelation::empty(n);
    for i in 0..n {
        for j in 0..n {
            let v = km.contains(i)
                || match shared_sentences_base(ev, i, j) {
                    Some(g) => ev.get(k, g)?.contains(i),
                    None => false,
                };
            rel.set(i, j, v);
        }
    }
    Ok(rel)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoder {
    Canonical,
    Sqrel,
    Km,
    Dpw,
    Aiguier,
}

pub fn encode(ev: &Evaluator, k: usize, enc: Encoder, q: Quantifier) -> Result<PreferenceRelation> {
    match enc {
        Encoder::Canonical => canonical_rel(ev, k, q),
        Encoder::Sqrel => sqrel(ev, k, q),
        Encoder::Km => km_rel(ev, k),
        Encoder::Dpw => dpw_rel(ev, k),
        Encoder::Aiguier => aiguier_rel(ev, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::operator::Operator;
    use crate::space::BaseSpace;

    #[test]
    fn trivial_revision_gives_two_levels() {
        let sp = BaseSpace::new(gallery::l_ex()).unwrap();
        let op = Operator::trivial();
        let ev = Evaluator::new(&sp, &op);
        for k in sp.representatives() {
            let km = sp.models(k);
            let rel = canonical_rel(&ev, k, Quantifier::Classes).unwrap();
            let expected = PreferenceRelation::from_fn(sp.n(), |i, j| km.contains(i) || !km.contains(j));
            if km.is_empty() {
                assert!(rel.is_total());
            } else {
                assert_eq!(rel, expected, "K = {:?}", sp.base(k));
            }
        }
    }

    #[test]
    fn sqrel_is_reflexive() {
        let sp = BaseSpace::new(gallery::l_ex()).unwrap();
        let op = gallery::example_operator(sp.logic()).unwrap();
        let ev = Evaluator::new(&sp, &op);
        for k in sp.representatives() {
            assert!(sqrel(&ev, k, Quantifier::Classes).unwrap().is_reflexive());
        }
    }

    #[test]
    fn km_needs_pair_bases() {
        let sp = BaseSpace::new(gallery::l_ex()).unwrap();
        let op = Operator::trivial();
        let ev = Evaluator::new(&sp, &op);
        let k = sp.id_of(&sp.logic().base(&["psi0"]).unwrap()).unwrap();
        assert!(matches!(km_pair(&ev, k, 3, 4), Err(Error::FormInexpressible(3, 4))));
        assert!(km_pair(&ev, k, 1, 2).unwrap());
    }
}
