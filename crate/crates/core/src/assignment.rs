//! Assignments of preference relations to belief bases.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::encoding::{canonical_rel, Quantifier};
use crate::error::{Error, Result};
use crate::logic::{BaseLogic, BeliefBase, ModelSet};
use crate::operator::{Evaluator, Operator, OperatorKind};
use crate::postulates::{postulate_report, CheckOptions, Postulate};
use crate::relation::{property_report, PreferenceRelation};
use crate::space::BaseSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Keying {
    Semantic,
    Syntactic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assignment {
    /// One relation per model set of K.
    Semantic(BTreeMap<ModelSet, PreferenceRelation>),
    /// One relation per base.
    Syntactic(BTreeMap<BeliefBase, PreferenceRelation>),
}

impl Assignment {
    pub fn keying(&self) -> Keying {
        match self {
            Assignment::Semantic(_) => Keying::Semantic,
            Assignment::Syntactic(_) => Keying::Syntactic,
        }
    }

    pub fn relation_for(&self, k: &BeliefBase, k_models: ModelSet) -> Result<&PreferenceRelation> {
        let r = match self {
            Assignment::Semantic(m) => m.get(&k_models),
            Assignment::Syntactic(m) => m.get(k),
        };
        r.ok_or_else(|| Error::MissingAssignmentEntry(k.ids().to_vec()))
    }

    pub fn relation_at(&self, space: &BaseSpace, k: usize) -> Result<&PreferenceRelation> {
        self.relation_for(space.base(k), space.models(k))
    }

    /// The revision result this assignment prescribes: the maximal base
    /// expressing the minimum of Γ's models, or Γ itself when inconsistent.
    pub fn select(&self, logic: &BaseLogic, k: &BeliefBase, g: &BeliefBase) -> Result<BeliefBase> {
        let gm = logic.models_of(g)?;
        if gm.is_empty() {
            return Ok(g.clone());
        }
        let rel = self.relation_for(k, logic.models_of(k)?)?;
        let m = rel.min_models(gm);
        logic.expressing_base(m).ok_or(Error::MinSetInexpressible(m))
    }

    /// Bases for which the assignment must be checked: class representatives
    /// for semantic keying, every base otherwise.
    fn k_domain(&self, space: &BaseSpace) -> Vec<usize> {
        match self {
            Assignment::Semantic(_) => space.representatives().collect(),
            Assignment::Syntactic(_) => (0..space.len()).collect(),
        }
    }
}

/// Two-level assignment of trivial revision: models of K below the rest.
pub fn two_level_assignment(space: &BaseSpace) -> Assignment {
    Assignment::Semantic(
        space
            .classes()
            .iter()
            .map(|c| {
                let km = c.models;
                (km, PreferenceRelation::from_fn(space.n(), |i, j| km.contains(i) || !km.contains(j)))
            })
            .collect(),
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FaithfulnessWitnesses {
    /// K, and two models of K with a strict preference.
    pub f1: Option<(BeliefBase, usize, usize)>,
    /// K, a model of K and a non-model not strictly above it.
    pub f2: Option<(BeliefBase, usize, usize)>,
    /// Two equivalent bases with different relations.
    pub f3: Option<(BeliefBase, BeliefBase)>,
    pub preorder: Option<BeliefBase>,
    pub total: Option<BeliefBase>,
    pub min_friendly: Option<BeliefBase>,
    pub min_expressible: Option<(BeliefBase, BeliefBase, ModelSet)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaithfulnessReport {
    pub keying: Keying,
    pub f1: bool,
    pub f2: bool,
    pub f3: bool,
    pub faithful: bool,
    pub quasi_faithful: bool,
    pub total: bool,
    pub preorder_assignment: bool,
    pub min_friendly: bool,
    pub min_expressible: bool,
    pub witnesses: FaithfulnessWitnesses,
}

pub fn faithfulness_report(space: &BaseSpace, a: &Assignment) -> Result<FaithfulnessReport> {
    let mut w = FaithfulnessWitnesses::default();
    for k in a.k_domain(space) {
        let rel = a.relation_at(space, k)?;
        rel.check_dimension(space.n())?;
        let kb = space.base(k);
        let km = space.models(k);
        if w.f1.is_none() {
            w.f1 = km.iter().flat_map(|i| km.iter().map(move |j| (i, j))).find(|&(i, j)| rel.less(i, j)).map(|(i, j)| (kb.clone(), i, j));
        }
        if w.f2.is_none() {
            let rest = space.omega().minus(km);
            w.f2 = km.iter().flat_map(|i| rest.iter().map(move |j| (i, j))).find(|&(i, j)| !rel.less(i, j)).map(|(i, j)| (kb.clone(), i, j));
        }
        if w.f3.is_none() {
            if let Assignment::Syntactic(_) = a {
                let rep = space.classes()[space.class_of(k)].representative;
                if a.relation_at(space, rep)? != rel {
                    w.f3 = Some((space.base(rep).clone(), kb.clone()));
                }
            }
        }
        if w.preorder.is_none() && !rel.is_preorder() {
            w.preorder = Some(kb.clone());
        }
        if w.total.is_none() && !rel.is_total() {
            w.total = Some(kb.clone());
        }
        if w.min_friendly.is_some() && w.min_expressible.is_some() {
            continue;
        }
        let pr = property_report(space, rel)?;
        if w.min_friendly.is_none() && !pr.min_friendly {
            w.min_friendly = Some(kb.clone());
        }
        if w.min_expressible.is_none() {
            if let Some((g, m)) = pr.witnesses.min_expressible {
                w.min_expressible = Some((kb.clone(), g, m));
            }
        }
    }
    let (f1, f2, f3) = (w.f1.is_none(), w.f2.is_none(), w.f3.is_none());
    Ok(FaithfulnessReport {
        keying: a.keying(),
        f1,
        f2,
        f3,
        faithful: f1 && f2 && f3,
        quasi_faithful: f1 && f2,
        total: w.total.is_none(),
        preorder_assignment: w.preorder.is_none(),
        min_friendly: w.min_friendly.is_none(),
        min_expressible: w.min_expressible.is_none(),
        witnesses: w,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityWitness {
    pub k: BeliefBase,
    pub gamma: BeliefBase,
    pub revision: ModelSet,
    pub minimum: ModelSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub witness: Option<CompatibilityWitness>,
}

/// Exhaustive over every pair of bases.
pub fn compatibility_check(ev: &Evaluator, a: &Assignment) -> Result<CompatibilityReport> {
    let sp = ev.space();
    for k in 0..sp.len() {
        let rel = a.relation_at(sp, k)?;
        for g in 0..sp.len() {
            let r = ev.get(k, g)?;
            let min = rel.min_models(sp.models(g));
            if r != min {
                return Ok(CompatibilityReport {
                    compatible: false,
                    witness: Some(CompatibilityWitness {
                        k: sp.base(k).clone(),
                        gamma: sp.base(g).clone(),
                        revision: r,
                        minimum: min,
                    }),
                });
            }
        }
    }
    Ok(CompatibilityReport { compatible: true, witness: None })
}

/// Builds the operator selecting minima; every minimum must be expressible.
pub fn from_assignment(space: &BaseSpace, a: &Assignment) -> Result<Operator> {
    let logic = space.logic();
    for k in a.k_domain(space) {
        let rel = a.relation_at(space, k)?;
        rel.check_dimension(space.n())?;
        for c in space.classes() {
            if c.models.is_empty() {
                continue;
            }
            let m = rel.min_models(c.models);
            if !logic.is_expressible(m) {
                return Err(Error::MinSetInexpressible(m));
            }
        }
    }
    Ok(Operator::new(OperatorKind::FromAssignment(a.clone())))
}

/// The canonical assignment of an operator satisfying G5 and G6; keyed by
/// model set when the operator also satisfies G4.
pub fn extract_assignment(ev: &Evaluator) -> Result<Assignment> {
    let report = postulate_report(ev, CheckOptions::default())?;
    if !report.passes_all(&[Postulate::G5, Postulate::G6]) {
        return Err(Error::PostulatePrerequisiteFailed(format!(
            "extraction needs G5 and G6; failing: {:?}",
            report.failed()
        )));
    }
    let sp = ev.space();
    let q = if report.passes(Postulate::G4w) { Quantifier::Classes } else { Quantifier::AllBases };
    if report.passes(Postulate::G4) {
        let mut map = BTreeMap::new();
        for c in sp.classes() {
            map.insert(c.models, canonical_rel(ev, c.representative, q)?);
        }
        Ok(Assignment::Semantic(map))
    } else {
        let mut map = BTreeMap::new();
        for k in 0..sp.len() {
            map.insert(sp.base(k).clone(), canonical_rel(ev, k, q)?);
        }
        Ok(Assignment::Syntactic(map))
    }
}

/// Re-keys a syntactic assignment by model set, keeping the relation of each
/// class representative.
pub fn faithfulize(ev: &Evaluator, a: &Assignment) -> Result<Assignment> {
    let sp = ev.space();
    let report = postulate_report(ev, CheckOptions::default())?;
    if !report.passes(Postulate::G4) {
        return Err(Error::PostulatePrerequisiteFailed("operator does not satisfy G4".into()));
    }
    let fr = faithfulness_report(sp, a)?;
    if !fr.quasi_faithful || !fr.preorder_assignment {
        return Err(Error::PostulatePrerequisiteFailed("assignment must be a quasi-faithful preorder assignment".into()));
    }
    for k in a.k_domain(sp) {
        if !property_report(sp, a.relation_at(sp, k)?)?.min_complete {
            return Err(Error::PostulatePrerequisiteFailed("assignment must be min-complete".into()));
        }
    }
    if !compatibility_check(ev, a)?.compatible {
        return Err(Error::PostulatePrerequisiteFailed("assignment is not compatible with the operator".into()));
    }
    match a {
        Assignment::Semantic(_) => Ok(a.clone()),
        Assignment::Syntactic(_) => {
            let mut map = BTreeMap::new();
            for c in sp.classes() {
                map.insert(c.models, a.relation_at(sp, c.representative)?.clone());
            }
            Ok(Assignment::Semantic(map))
        }
    }
}
