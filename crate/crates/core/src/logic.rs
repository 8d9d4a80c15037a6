//! Finite base logics: sentences with model sets, base families and the
//! abstract union.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on |Ω|; model sets are single machine words.
pub const MAX_INTERPRETATIONS: usize = 63;

/// A subset of Ω as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ModelSet(u64);

impl ModelSet {
    pub const EMPTY: ModelSet = ModelSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ModelSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ModelSet(u64::MAX)
        } else {
            ModelSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        ModelSet(1u64 << i)
    }

    pub fn pair(i: usize, j: usize) -> Self {
        ModelSet((1u64 << i) | (1u64 << j))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        ModelSet(it.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn intersect(self, other: ModelSet) -> ModelSet {
        ModelSet(self.0 & other.0)
    }

    pub fn union(self, other: ModelSet) -> ModelSet {
        ModelSet(self.0 | other.0)
    }

    pub fn minus(self, other: ModelSet) -> ModelSet {
        ModelSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ModelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: ModelSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn with(self, i: usize) -> ModelSet {
        ModelSet(self.0 | (1u64 << i))
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ModelSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ModelSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&i| i >= MAX_INTERPRETATIONS) {
            return Err(serde::de::Error::custom(format!("interpretation index {bad} out of range")));
        }
        Ok(ModelSet::from_indices(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub name: String,
    pub models: ModelSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    #[serde(alias = "ArbitrarySets")]
    ArbitrarySets,
    #[serde(alias = "FiniteSets")]
    FiniteSets,
    #[serde(alias = "SingleSentences")]
    SingleSentences,
    #[serde(alias = "BeliefSets")]
    BeliefSets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFamily {
    pub kind: FamilyKind,
    pub allow_empty: bool,
}

impl BaseFamily {
    pub fn new(kind: FamilyKind, allow_empty: bool) -> Self {
        BaseFamily { kind, allow_empty }
    }
}

/// Sorted, duplicate-free sentence ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BeliefBase(Vec<u32>);

impl BeliefBase {
    pub fn new<I: IntoIterator<Item = u32>>(ids: I) -> Self {
        let mut v: Vec<u32> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        BeliefBase(v)
    }

    pub fn empty() -> Self {
        BeliefBase(Vec::new())
    }

    pub fn single(id: u32) -> Self {
        BeliefBase(vec![id])
    }

    pub fn ids(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn set_union(&self, other: &BeliefBase) -> BeliefBase {
        BeliefBase::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Enumeration order: fewer sentences first, then lexicographic ids.
    pub fn canonical_cmp(&self, other: &BeliefBase) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for BeliefBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite logic together with a base family and its abstract union.
#[derive(Clone, Debug)]
pub struct BaseLogic {
    interpretations: Vec<String>,
    sentences: Vec<Sentence>,
    family: BaseFamily,
    conjunction: BTreeMap<(u32, u32), u32>,
    /// When set, conjunction picks the lowest id with the intersected models.
    semantic_conjunction: Option<HashMap<ModelSet, u32>>,
    by_name: HashMap<String, u32>,
}

impl BaseLogic {
    pub fn new(
        interpretations: Vec<String>,
        sentences: Vec<Sentence>,
        family: BaseFamily,
        conjunction: Option<Vec<(u32, u32, u32)>>,
    ) -> Result<Self> {
        let n = interpretations.len();
        if n == 0 {
            return Err(Error::InvalidLogic("no interpretations".into()));
        }
        if n > MAX_INTERPRETATIONS {
            return Err(Error::InvalidLogic(format!(
                "{n} interpretations, at most {MAX_INTERPRETATIONS} supported"
            )));
        }
        let mut seen = BTreeSet::new();
        for (i, l) in interpretations.iter().enumerate() {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidLogic(format!("interpretations[{i}]: duplicate label `{l}`")));
            }
        }
        if sentences.len() > u32::MAX as usize {
            return Err(Error::InvalidLogic("too many sentences".into()));
        }
        let full = ModelSet::full(n);
        let mut by_name = HashMap::new();
        for (i, s) in sentences.iter().enumerate() {
            if by_name.insert(s.name.clone(), i as u32).is_some() {
                return Err(Error::InvalidLogic(format!("sentences[{i}]: duplicate name `{}`", s.name)));
            }
            if !s.models.is_subset(full) {
                return Err(Error::InvalidLogic(format!("sentences[{i}]: models outside Ω")));
            }
        }
        let mut table = BTreeMap::new();
        for (row, &(a, b, c)) in conjunction.iter().flatten().enumerate() {
            for id in [a, b, c] {
                if id as usize >= sentences.len() {
                    return Err(Error::InvalidLogic(format!("conjunction[{row}]: unknown sentence id {id}")));
                }
            }
            let want = sentences[a as usize].models.intersect(sentences[b as usize].models);
            if sentences[c as usize].models != want {
                return Err(Error::InvalidLogic(format!(
                    "conjunction[{row}]: models of `{}` differ from the intersection of `{}` and `{}`",
                    sentences[c as usize].name, sentences[a as usize].name, sentences[b as usize].name
                )));
            }
            table.insert((a, b), c);
        }
        let logic = BaseLogic { interpretations, sentences, family, conjunction: table, semantic_conjunction: None, by_name };
        logic.check_conjunction()?;
        Ok(logic)
    }

    fn check_conjunction(&self) -> Result<()> {
        let logic = self;
        if logic.family.kind != FamilyKind::SingleSentences {
            return Ok(());
        }
        if let Some(by_models) = &logic.semantic_conjunction {
            if by_models.len() == 1usize.checked_shl(logic.num_interpretations() as u32).unwrap_or(0) {
                return Ok(());
            }
            let sets: Vec<ModelSet> = by_models.keys().copied().collect();
            for (i, a) in sets.iter().enumerate() {
                for b in &sets[i + 1..] {
                    if !by_models.contains_key(&a.intersect(*b)) {
                        return Err(Error::InvalidLogic(format!(
                            "single-sentence family needs a sentence with models {}",
                            logic.show_models(a.intersect(*b))
                        )));
                    }
                }
            }
            return Ok(());
        }
        {
            for a in 0..logic.sentences.len() as u32 {
                for b in 0..logic.sentences.len() as u32 {
                    logic.conjoin(a, b).map_err(|_| {
                        Error::InvalidLogic(format!(
                            "single-sentence family needs a conjunction of `{}` and `{}`",
                            logic.sentences[a as usize].name, logic.sentences[b as usize].name
                        ))
                    })?;
                }
            }
        }
        Ok(())
    }

    /// Conjunction of two sentences is the lowest-id sentence whose model set
    /// is the intersection.
    pub fn with_semantic_conjunction(
        interpretations: Vec<String>,
        sentences: Vec<Sentence>,
        family: BaseFamily,
    ) -> Result<Self> {
        let mut logic = BaseLogic::new(interpretations, sentences, BaseFamily::new(FamilyKind::ArbitrarySets, true), None)?;
        let mut first: HashMap<ModelSet, u32> = HashMap::new();
        for (i, s) in logic.sentences.iter().enumerate() {
            first.entry(s.models).or_insert(i as u32);
        }
        logic.family = family;
        logic.semantic_conjunction = Some(first);
        logic.check_conjunction()?;
        Ok(logic)
    }

    pub fn has_semantic_conjunction(&self) -> bool {
        self.semantic_conjunction.is_some()
    }

    pub fn num_interpretations(&self) -> usize {
        self.interpretations.len()
    }

    pub fn interpretations(&self) -> &[String] {
        &self.interpretations
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn family(&self) -> BaseFamily {
        self.family
    }

    pub fn conjunction_table(&self) -> &BTreeMap<(u32, u32), u32> {
        &self.conjunction
    }

    pub fn omega(&self) -> ModelSet {
        ModelSet::full(self.interpretations.len())
    }

    pub fn sentence_id(&self, name: &str) -> Result<u32> {
        self.by_name.get(name).copied().ok_or_else(|| Error::UnknownSentenceId(name.to_string()))
    }

    pub fn interpretation_id(&self, label: &str) -> Option<usize> {
        self.interpretations.iter().position(|l| l == label)
    }

    pub fn base<S: AsRef<str>>(&self, names: &[S]) -> Result<BeliefBase> {
        names.iter().map(|n| self.sentence_id(n.as_ref())).collect::<Result<Vec<_>>>().map(BeliefBase::new)
    }

    pub fn names(&self, base: &BeliefBase) -> Vec<String> {
        base.ids().iter().map(|&i| self.sentences[i as usize].name.clone()).collect()
    }

    pub fn show_base(&self, base: &BeliefBase) -> String {
        format!("{{{}}}", self.names(base).join(", "))
    }

    pub fn show_models(&self, m: ModelSet) -> String {
        let labels: Vec<&str> = m.iter().map(|i| self.interpretations[i].as_str()).collect();
        format!("{{{}}}", labels.join(", "))
    }

    pub fn models_of(&self, base: &BeliefBase) -> Result<ModelSet> {
        let mut m = self.omega();
        for &id in base.ids() {
            let s = self.sentences.get(id as usize).ok_or_else(|| Error::UnknownSentenceId(id.to_string()))?;
            m = m.intersect(s.models);
        }
        Ok(m)
    }

    pub fn conjoin(&self, a: u32, b: u32) -> Result<u32> {
        if let Some(&c) = self.conjunction.get(&(a, b)).or_else(|| self.conjunction.get(&(b, a))) {
            return Ok(c);
        }
        if let Some(by_models) = &self.semantic_conjunction {
            let (ma, mb) = (self.sentences.get(a as usize), self.sentences.get(b as usize));
            if let (Some(x), Some(y)) = (ma, mb) {
                if let Some(&c) = by_models.get(&x.models.intersect(y.models)) {
                    return Ok(c);
                }
            }
        }
        if a == b {
            return Ok(a);
        }
        Err(Error::ConjunctionUnavailable(a, b))
    }

    pub fn union(&self, b1: &BeliefBase, b2: &BeliefBase) -> Result<BeliefBase> {
        match self.family.kind {
            FamilyKind::ArbitrarySets | FamilyKind::FiniteSets => Ok(b1.set_union(b2)),
            FamilyKind::BeliefSets => self.closure(&b1.set_union(b2)),
            FamilyKind::SingleSentences => match (b1.ids(), b2.ids()) {
                ([], _) => Ok(b2.clone()),
                (_, []) => Ok(b1.clone()),
                ([a], [b]) => Ok(BeliefBase::single(self.conjoin(*a, *b)?)),
                _ => Err(Error::InvalidBase {
                    base: if b1.len() > 1 { b1.ids().to_vec() } else { b2.ids().to_vec() },
                    reason: "single-sentence family".into(),
                }),
            },
        }
    }

    pub fn entails(&self, b1: &BeliefBase, b2: &BeliefBase) -> Result<bool> {
        Ok(self.models_of(b1)?.is_subset(self.models_of(b2)?))
    }

    pub fn equivalent(&self, b1: &BeliefBase, b2: &BeliefBase) -> Result<bool> {
        Ok(self.models_of(b1)? == self.models_of(b2)?)
    }

    pub fn consistent(&self, b: &BeliefBase) -> Result<bool> {
        Ok(!self.models_of(b)?.is_empty())
    }

    pub fn consistent_with(&self, b1: &BeliefBase, b2: &BeliefBase) -> Result<bool> {
        Ok(self.models_of(b1)?.meets(self.models_of(b2)?))
    }

    /// All sentences whose model set includes `m`.
    pub fn sentences_above(&self, m: ModelSet) -> BeliefBase {
        BeliefBase::new(
            self.sentences.iter().enumerate().filter(|(_, s)| m.is_subset(s.models)).map(|(i, _)| i as u32),
        )
    }

    pub fn closure(&self, base: &BeliefBase) -> Result<BeliefBase> {
        Ok(self.sentences_above(self.models_of(base)?))
    }

    pub fn validate_base(&self, base: &BeliefBase) -> Result<()> {
        let bad = |reason: &str| Err(Error::InvalidBase { base: base.ids().to_vec(), reason: reason.into() });
        if let Some(&id) = base.ids().iter().find(|&&id| id as usize >= self.sentences.len()) {
            return Err(Error::UnknownSentenceId(id.to_string()));
        }
        if base.is_empty() && !self.family.allow_empty {
            return bad("empty base not allowed");
        }
        match self.family.kind {
            FamilyKind::SingleSentences if base.len() > 1 => bad("single-sentence family"),
            FamilyKind::BeliefSets if self.closure(base)? != *base => bad("not closed under consequence"),
            _ => Ok(()),
        }
    }

    /// The unique largest candidate base with model set `m`, if it lies in the
    /// family and actually has that model set.
    pub fn expressing_base(&self, m: ModelSet) -> Option<BeliefBase> {
        match self.family.kind {
            FamilyKind::SingleSentences => {
                if let Some(i) = self.sentences.iter().position(|s| s.models == m) {
                    Some(BeliefBase::single(i as u32))
                } else if m == self.omega() && self.family.allow_empty {
                    Some(BeliefBase::empty())
                } else {
                    None
                }
            }
            _ => {
                let b = self.sentences_above(m);
                if b.is_empty() && !self.family.allow_empty {
                    return None;
                }
                (self.models_of(&b).ok()? == m).then_some(b)
            }
        }
    }

    /// Model sets of all bases in the family, computed without enumerating
    /// bases.
    pub fn expressible_model_sets(&self) -> BTreeSet<ModelSet> {
        let mut out = BTreeSet::new();
        if self.family.allow_empty {
            out.insert(self.omega());
        }
        match self.family.kind {
            FamilyKind::SingleSentences => out.extend(self.sentences.iter().map(|s| s.models)),
            _ => {
                let atoms: BTreeSet<ModelSet> = self.sentences.iter().map(|s| s.models).collect();
                let mut closed: BTreeSet<ModelSet> = atoms.clone();
                let mut frontier: Vec<ModelSet> = closed.iter().copied().collect();
                while let Some(m) = frontier.pop() {
                    for &a in &atoms {
                        let x = m.intersect(a);
                        if closed.insert(x) {
                            frontier.push(x);
                        }
                    }
                }
                out.extend(closed);
            }
        }
        out
    }

    pub fn is_expressible(&self, m: ModelSet) -> bool {
        self.expressing_base(m).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub supports_conjunction: bool,
    /// Two sentences without a sentence for their joint models.
    pub conjunction_counterexample: Option<(u32, u32)>,
    pub is_disjunctive: bool,
    /// Two expressible model sets whose union is not expressible.
    pub disjunction_counterexample: Option<(ModelSet, ModelSet)>,
    pub has_universal_base: bool,
    pub universal_base: Option<BeliefBase>,
    pub is_trio_expressible: bool,
    pub trio_counterexample: Option<ModelSet>,
    pub inexpressible_trios: Vec<ModelSet>,
}

pub fn structure_report(logic: &BaseLogic) -> StructureReport {
    let n = logic.sentences.len();
    let mut by_models: HashMap<ModelSet, u32> = HashMap::new();
    for (i, s) in logic.sentences.iter().enumerate() {
        by_models.entry(s.models).or_insert(i as u32);
    }
    let conjunction_counterexample = (0..n as u32)
        .flat_map(|a| (a..n as u32).map(move |b| (a, b)))
        .find(|&(a, b)| {
            let m = logic.sentences[a as usize].models.intersect(logic.sentences[b as usize].models);
            !by_models.contains_key(&m)
        });

    let expressible = logic.expressible_model_sets();
    let list: Vec<ModelSet> = expressible.iter().copied().collect();
    let mut disjunction_counterexample = None;
    'outer: for (i, &a) in list.iter().enumerate() {
        for &b in &list[i..] {
            if !expressible.contains(&a.union(b)) {
                disjunction_counterexample = Some((a, b));
                break 'outer;
            }
        }
    }

    let universal_base = logic.expressing_base(logic.omega());
    let k = logic.num_interpretations();
    let mut inexpressible_trios = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let t = ModelSet::from_indices([a, b, c]);
                if !expressible.contains(&t) {
                    inexpressible_trios.push(t);
                }
            }
        }
    }
    StructureReport {
        supports_conjunction: conjunction_counterexample.is_none(),
        conjunction_counterexample,
        is_disjunctive: disjunction_counterexample.is_none(),
        disjunction_counterexample,
        has_universal_base: universal_base.is_some(),
        universal_base,
        is_trio_expressible: inexpressible_trios.is_empty(),
        trio_counterexample: inexpressible_trios.first().copied(),
        inexpressible_trios,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> BaseLogic {
        let s = |name: &str, m: &[usize]| Sentence { name: name.into(), models: ModelSet::from_indices(m.iter().copied()) };
        BaseLogic::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![s("x", &[0, 1]), s("y", &[1, 2]), s("z", &[1])],
            BaseFamily::new(FamilyKind::ArbitrarySets, true),
            None,
        )
        .unwrap()
    }

    #[test]
    fn model_set_ops() {
        let m = ModelSet::from_indices([0, 2, 5]);
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(m.len(), 3);
        assert!(ModelSet::singleton(2).is_subset(m));
        assert_eq!(m.to_string(), "{0,2,5}");
        assert_eq!(ModelSet::full(3).bits(), 0b111);
    }

    #[test]
    fn empty_base_has_all_models() {
        let l = tiny();
        assert_eq!(l.models_of(&BeliefBase::empty()).unwrap(), l.omega());
    }

    #[test]
    fn closure_collects_weaker_sentences() {
        let l = tiny();
        let z = l.base(&["z"]).unwrap();
        assert_eq!(l.closure(&z).unwrap(), l.base(&["x", "y", "z"]).unwrap());
    }

    #[test]
    fn single_sentence_family_requires_conjunction() {
        let s = |name: &str, m: &[usize]| Sentence { name: name.into(), models: ModelSet::from_indices(m.iter().copied()) };
        let err = BaseLogic::new(
            vec!["a".into(), "b".into()],
            vec![s("x", &[0]), s("y", &[1])],
            BaseFamily::new(FamilyKind::SingleSentences, false),
            None,
        );
        assert!(matches!(err, Err(Error::InvalidLogic(_))));
    }

    #[test]
    fn bad_conjunction_entry_is_rejected() {
        let s = |name: &str, m: &[usize]| Sentence { name: name.into(), models: ModelSet::from_indices(m.iter().copied()) };
        let err = BaseLogic::new(
            vec!["a".into(), "b".into()],
            vec![s("x", &[0]), s("y", &[0, 1])],
            BaseFamily::new(FamilyKind::SingleSentences, false),
            Some(vec![(0, 1, 1)]),
        );
        assert!(err.is_err());
    }

    #[test]
    fn expressing_base_is_maximal() {
        let l = tiny();
        assert_eq!(l.expressing_base(ModelSet::singleton(1)), Some(l.base(&["x", "y", "z"]).unwrap()));
        assert_eq!(l.expressing_base(ModelSet::singleton(0)), None);
    }

    #[test]
    fn structure_of_tiny() {
        let r = structure_report(&tiny());
        assert!(r.supports_conjunction);
        // {0,1}, {1,2}, {1} and the whole set are closed under union
        assert!(r.is_disjunctive);
        assert!(r.has_universal_base);
        assert_eq!(r.universal_base, Some(BeliefBase::empty()));
        assert!(r.is_trio_expressible);
    }

    #[test]
    fn separated_points_are_not_disjunctive() {
        let s = |name: &str, m: &[usize]| Sentence { name: name.into(), models: ModelSet::from_indices(m.iter().copied()) };
        let l = BaseLogic::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![s("x", &[0]), s("y", &[2])],
            BaseFamily::new(FamilyKind::ArbitrarySets, true),
            None,
        )
        .unwrap();
        let r = structure_report(&l);
        assert!(!r.is_disjunctive);
        let (a, b) = r.disjunction_counterexample.unwrap();
        assert!(!l.is_expressible(a.union(b)));
    }
}
