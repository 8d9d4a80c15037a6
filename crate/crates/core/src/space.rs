//! Enumerated base families and their semantic classes.

use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{BaseLogic, BeliefBase, FamilyKind, ModelSet};

pub const DEFAULT_ENUM_CAP: u32 = 12;

/// Cap from `REVKIT_ENUM_CAP`, else the default. The family may hold at most
/// `2^cap` bases.
pub fn enum_cap() -> u32 {
    std::env::var("REVKIT_ENUM_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_ENUM_CAP)
}

#[derive(Clone, Debug, Serialize)]
pub struct SemanticClass {
    pub models: ModelSet,
    /// Index of the member with fewest sentences, then lowest ids.
    pub representative: usize,
    pub members: Vec<usize>,
}

/// A logic together with every base of its family, in canonical order.
#[derive(Clone, Debug)]
pub struct BaseSpace {
    logic: BaseLogic,
    bases: Vec<BeliefBase>,
    models: Vec<ModelSet>,
    index: HashMap<BeliefBase, usize>,
    classes: Vec<SemanticClass>,
    class_of: Vec<usize>,
    class_index: HashMap<ModelSet, usize>,
}

impl BaseSpace {
    pub fn new(logic: BaseLogic) -> Result<Self> {
        Self::with_cap(logic, enum_cap())
    }

    pub fn with_cap(logic: BaseLogic, cap: u32) -> Result<Self> {
        let limit: u128 = 1u128 << cap.min(100);
        let n = logic.sentences().len();
        let family = logic.family();
        let count: u128 = match family.kind {
            FamilyKind::ArbitrarySets | FamilyKind::FiniteSets => {
                if n >= 100 {
                    u128::MAX
                } else {
                    (1u128 << n) - u128::from(!family.allow_empty)
                }
            }
            FamilyKind::SingleSentences => n as u128 + u128::from(family.allow_empty),
            FamilyKind::BeliefSets => logic.expressible_model_sets().len() as u128,
        };
        if count > limit {
            return Err(Error::EnumerationCapExceeded { bases: count, cap: limit });
        }

        let mut bases: Vec<BeliefBase> = match family.kind {
            FamilyKind::ArbitrarySets | FamilyKind::FiniteSets => (0..=n)
                .flat_map(|k| (0..n as u32).combinations(k))
                .map(BeliefBase::new)
                .filter(|b| family.allow_empty || !b.is_empty())
                .collect(),
            FamilyKind::SingleSentences => {
                let mut v = Vec::new();
                if family.allow_empty {
                    v.push(BeliefBase::empty());
                }
                v.extend((0..n as u32).map(BeliefBase::single));
                v
            }
            FamilyKind::BeliefSets => logic
                .expressible_model_sets()
                .into_iter()
                .map(|m| logic.sentences_above(m))
                .filter(|b| family.allow_empty || !b.is_empty())
                .collect(),
        };
        bases.sort_by(|a, b| a.canonical_cmp(b));
        bases.dedup();

        let models: Vec<ModelSet> = bases.iter().map(|b| logic.models_of(b)).collect::<Result<_>>()?;
        let index = bases.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let mut classes: Vec<SemanticClass> = Vec::new();
        let mut class_index: HashMap<ModelSet, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(bases.len());
        for (i, &m) in models.iter().enumerate() {
            let c = *class_index.entry(m).or_insert_with(|| {
                classes.push(SemanticClass { models: m, representative: i, members: Vec::new() });
                classes.len() - 1
            });
            classes[c].members.push(i);
            class_of.push(c);
        }
        Ok(BaseSpace { logic, bases, models, index, classes, class_of, class_index })
    }

    pub fn logic(&self) -> &BaseLogic {
        &self.logic
    }

    pub fn omega(&self) -> ModelSet {
        self.logic.omega()
    }

    pub fn n(&self) -> usize {
        self.logic.num_interpretations()
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[BeliefBase] {
        &self.bases
    }

    pub fn base(&self, id: usize) -> &BeliefBase {
        &self.bases[id]
    }

    pub fn models(&self, id: usize) -> ModelSet {
        self.models[id]
    }

    pub fn id_of(&self, base: &BeliefBase) -> Result<usize> {
        self.index.get(base).copied().ok_or_else(|| {
            self.logic
                .validate_base(base)
                .err()
                .unwrap_or_else(|| Error::InvalidBase { base: base.ids().to_vec(), reason: "not in family".into() })
        })
    }

    pub fn classes(&self) -> &[SemanticClass] {
        &self.classes
    }

    pub fn class_of(&self, id: usize) -> usize {
        self.class_of[id]
    }

    pub fn class_with_models(&self, m: ModelSet) -> Option<usize> {
        self.class_index.get(&m).copied()
    }

    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().map(|c| c.representative)
    }

    /// Id of `b1 ⋓ b2`.
    pub fn union(&self, b1: usize, b2: usize) -> Result<usize> {
        let u = self.logic.union(&self.bases[b1], &self.bases[b2])?;
        self.id_of(&u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{BaseFamily, Sentence};

    fn logic(kind: FamilyKind, allow_empty: bool) -> BaseLogic {
        let s = |name: &str, m: &[usize]| Sentence { name: name.into(), models: ModelSet::from_indices(m.iter().copied()) };
        BaseLogic::with_semantic_conjunction(
            vec!["a".into(), "b".into(), "c".into()],
            vec![s("x", &[0, 1]), s("y", &[1, 2]), s("z", &[1]), s("t", &[0, 1, 2])],
            BaseFamily::new(kind, allow_empty),
        )
        .unwrap()
    }

    #[test]
    fn arbitrary_sets_are_the_powerset() {
        let sp = BaseSpace::new(logic(FamilyKind::ArbitrarySets, true)).unwrap();
        assert_eq!(sp.len(), 16);
        assert!(sp.base(0).is_empty());
        let sp = BaseSpace::new(logic(FamilyKind::ArbitrarySets, false)).unwrap();
        assert_eq!(sp.len(), 15);
    }

    #[test]
    fn representatives_are_smallest() {
        let sp = BaseSpace::new(logic(FamilyKind::ArbitrarySets, true)).unwrap();
        for c in sp.classes() {
            for &m in &c.members {
                assert!(sp.base(c.representative).canonical_cmp(sp.base(m)).is_le());
                assert_eq!(sp.models(m), c.models);
            }
        }
        // {} and {t} share Ω
        let omega = sp.class_with_models(sp.omega()).unwrap();
        assert_eq!(sp.classes()[omega].representative, 0);
    }

    #[test]
    fn belief_sets_are_closed() {
        let sp = BaseSpace::new(logic(FamilyKind::BeliefSets, true)).unwrap();
        for b in sp.bases() {
            assert_eq!(&sp.logic().closure(b).unwrap(), b);
        }
        assert_eq!(sp.len(), sp.classes().len());
    }

    #[test]
    fn cap_is_enforced() {
        let r = BaseSpace::with_cap(logic(FamilyKind::ArbitrarySets, true), 3);
        assert!(matches!(r, Err(Error::EnumerationCapExceeded { .. })));
        assert!(BaseSpace::with_cap(logic(FamilyKind::SingleSentences, false), 2).is_ok());
    }
}
