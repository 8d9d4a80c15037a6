//! Multiple base change operators and a cached evaluator over an enumerated
//! base family.

use std::cell::{Cell, OnceCell};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::assignment::Assignment;
use crate::critical_loop::LoopOperator;
use crate::error::{Error, Result};
use crate::logic::{BaseLogic, BeliefBase, ModelSet};
use crate::space::BaseSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fallback {
    Error,
    Trivial,
}

type RuleFn = dyn Fn(&BaseLogic, &BeliefBase, &BeliefBase) -> Result<BeliefBase> + Send + Sync;

/// A user-supplied revision rule.
#[derive(Clone)]
pub struct External(pub Arc<RuleFn>);

impl fmt::Debug for External {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("External")
    }
}

/// Rule-based operator on the six-world example logic: a fixed preference
/// cycle among three worlds for one belief base, trivial revision elsewhere.
#[derive(Clone, Debug)]
pub struct ExampleRule {
    pub k: BeliefBase,
    pub k_models: ModelSet,
    /// Sentence ids tried in order after the consistent case.
    pub fallback: u32,
    pub cycle: [u32; 3],
}

impl ExampleRule {
    pub fn new(logic: &BaseLogic) -> Result<Self> {
        let id = |n: &str| logic.sentence_id(n);
        let k = BeliefBase::single(id("psi3")?);
        Ok(ExampleRule {
            k_models: logic.models_of(&k)?,
            k,
            fallback: id("psi4")?,
            cycle: [id("psi0")?, id("psi1")?, id("psi2")?],
        })
    }

    fn revise(&self, logic: &BaseLogic, k: &BeliefBase, g: &BeliefBase) -> Result<BeliefBase> {
        if logic.models_of(k)? != self.k_models {
            return trivial(logic, k, g);
        }
        let gm = logic.models_of(g)?;
        let meets = |id: u32| gm.meets(logic.sentences()[id as usize].models);
        let add = |id: u32| logic.union(g, &BeliefBase::single(id));
        if gm.meets(self.k_models) {
            return logic.union(&self.k, g);
        }
        if meets(self.fallback) {
            return add(self.fallback);
        }
        let [a, b, c] = self.cycle;
        if meets(a) && !meets(c) {
            return add(a);
        }
        if meets(b) && !meets(a) {
            return add(b);
        }
        if meets(c) && !meets(b) {
            return add(c);
        }
        Ok(g.clone())
    }
}

/// Rule on the threshold logic: trivial revision, except that revising by
/// the weakest nontrivial threshold jumps to a stronger one.
#[derive(Clone, Debug)]
pub struct ThresholdRule {
    pub trigger: u32,
    pub target: u32,
}

impl ThresholdRule {
    pub fn new(logic: &BaseLogic) -> Result<Self> {
        Ok(ThresholdRule { trigger: logic.sentence_id("ge1")?, target: logic.sentence_id("ge3")? })
    }

    fn revise(&self, logic: &BaseLogic, k: &BeliefBase, g: &BeliefBase) -> Result<BeliefBase> {
        let u = logic.union(k, g)?;
        if !logic.models_of(&u)?.is_empty() {
            Ok(u)
        } else if g.ids() == [self.trigger] {
            Ok(BeliefBase::single(self.target))
        } else {
            Ok(g.clone())
        }
    }
}

#[derive(Clone, Debug)]
pub enum OperatorKind {
    Table { entries: BTreeMap<(BeliefBase, BeliefBase), BeliefBase>, fallback: Fallback },
    Trivial,
    PlainUnion,
    Example(ExampleRule),
    Threshold(ThresholdRule),
    FromAssignment(Assignment),
    FromLoop(LoopOperator),
    External(External),
}

#[derive(Clone, Debug)]
pub struct Operator {
    pub kind: OperatorKind,
}

fn trivial(logic: &BaseLogic, k: &BeliefBase, g: &BeliefBase) -> Result<BeliefBase> {
    let u = logic.union(k, g)?;
    if logic.models_of(&u)?.is_empty() {
        Ok(g.clone())
    } else {
        Ok(u)
    }
}

impl Operator {
    pub fn new(kind: OperatorKind) -> Self {
        Operator { kind }
    }

    pub fn trivial() -> Self {
        Operator::new(OperatorKind::Trivial)
    }

    pub fn plain_union() -> Self {
        Operator::new(OperatorKind::PlainUnion)
    }

    pub fn table(entries: BTreeMap<(BeliefBase, BeliefBase), BeliefBase>, fallback: Fallback) -> Self {
        Operator::new(OperatorKind::Table { entries, fallback })
    }

    pub fn external(f: impl Fn(&BaseLogic, &BeliefBase, &BeliefBase) -> Result<BeliefBase> + Send + Sync + 'static) -> Self {
        Operator::new(OperatorKind::External(External(Arc::new(f))))
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            OperatorKind::Table { .. } => "table",
            OperatorKind::Trivial => "trivial",
            OperatorKind::PlainUnion => "union",
            OperatorKind::Example(_) => "example",
            OperatorKind::Threshold(_) => "threshold",
            OperatorKind::FromAssignment(_) => "from_assignment",
            OperatorKind::FromLoop(_) => "from_loop",
            OperatorKind::External(_) => "external",
        }
    }

    pub fn revise(&self, logic: &BaseLogic, k: &BeliefBase, g: &BeliefBase) -> Result<BeliefBase> {
        match &self.kind {
            OperatorKind::Trivial => trivial(logic, k, g),
            OperatorKind::PlainUnion => logic.union(k, g),
            OperatorKind::Table { entries, fallback } => match entries.get(&(k.clone(), g.clone())) {
                Some(r) => Ok(r.clone()),
                None => match fallback {
                    Fallback::Trivial => trivial(logic, k, g),
                    Fallback::Error => {
                        Err(Error::OperatorUndefined { k: k.ids().to_vec(), gamma: g.ids().to_vec() })
                    }
                },
            },
            OperatorKind::Example(r) => r.revise(logic, k, g),
            OperatorKind::Threshold(r) => r.revise(logic, k, g),
            OperatorKind::FromAssignment(a) => a.select(logic, k, g),
            OperatorKind::FromLoop(l) => l.revise(logic, k, g),
            OperatorKind::External(f) => (f.0)(logic, k, g),
        }
    }

    /// Model set of `K ∘ Γ`; skips building the result base where the rule
    /// only depends on model sets.
    pub fn revise_models(&self, space: &BaseSpace, k: usize, g: usize) -> Result<ModelSet> {
        let (km, gm) = (space.models(k), space.models(g));
        match &self.kind {
            OperatorKind::Trivial => {
                let u = km.intersect(gm);
                Ok(if u.is_empty() { gm } else { u })
            }
            OperatorKind::PlainUnion => Ok(km.intersect(gm)),
            OperatorKind::FromAssignment(a) => {
                if gm.is_empty() {
                    return Ok(gm);
                }
                let rel = a.relation_for(space.base(k), km)?;
                Ok(rel.min_models(gm))
            }
            _ => {
                let logic = space.logic();
                let r = self.revise(logic, space.base(k), space.base(g))?;
                logic.models_of(&r)
            }
        }
    }
}

const UNSET: u64 = u64::MAX;

/// Memoizes `Mod(K ∘ Γ)` for every pair of enumerated bases.
pub struct Evaluator<'a> {
    space: &'a BaseSpace,
    op: &'a Operator,
    rows: Vec<OnceCell<Box<[Cell<u64>]>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(space: &'a BaseSpace, op: &'a Operator) -> Self {
        Evaluator { space, op, rows: (0..space.len()).map(|_| OnceCell::new()).collect() }
    }

    pub fn space(&self) -> &'a BaseSpace {
        self.space
    }

    pub fn operator(&self) -> &'a Operator {
        self.op
    }

    pub fn get(&self, k: usize, g: usize) -> Result<ModelSet> {
        let row = self.rows[k].get_or_init(|| (0..self.space.len()).map(|_| Cell::new(UNSET)).collect());
        let v = row[g].get();
        if v != UNSET {
            return Ok(ModelSet::from_bits(v));
        }
        let m = self.op.revise_models(self.space, k, g)?;
        row[g].set(m.bits());
        Ok(m)
    }

    pub fn revise(&self, k: usize, g: usize) -> Result<BeliefBase> {
        self.op.revise(self.space.logic(), self.space.base(k), self.space.base(g))
    }
}

/// True when both operators give equivalent results on every pair.
pub fn semantically_equal(a: &Evaluator, b: &Evaluator) -> Result<Option<(usize, usize)>> {
    let n = a.space().len();
    for k in 0..n {
        for g in 0..n {
            if a.get(k, g)? != b.get(k, g)? {
                return Ok(Some((k, g)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn trivial_revision_cases() {
        let sp = BaseSpace::new(gallery::l_ex()).unwrap();
        let l = sp.logic();
        let op = Operator::trivial();
        let psi3 = l.base(&["psi3"]).unwrap();
        let phi0 = l.base(&["phi0"]).unwrap();
        let chi = l.base(&["chi"]).unwrap();
        assert_eq!(op.revise(l, &psi3, &phi0).unwrap(), phi0);
        assert_eq!(op.revise(l, &chi, &phi0).unwrap(), l.base(&["chi", "phi0"]).unwrap());
    }

    #[test]
    fn fast_path_matches_full_revision() {
        let sp = BaseSpace::new(gallery::l_ex()).unwrap();
        for op in [Operator::trivial(), Operator::plain_union(), gallery::example_operator(sp.logic()).unwrap()] {
            for k in (0..sp.len()).step_by(37) {
                for g in 0..sp.len() {
                    let full = sp.logic().models_of(&op.revise(sp.logic(), sp.base(k), sp.base(g)).unwrap()).unwrap();
                    assert_eq!(op.revise_models(&sp, k, g).unwrap(), full);
                }
            }
        }
    }

    #[test]
    fn strict_table_reports_gaps() {
        let sp = BaseSpace::new(gallery::l_ex()).unwrap();
        let op = Operator::table(BTreeMap::new(), Fallback::Error);
        assert!(matches!(op.revise_models(&sp, 1, 2), Err(Error::OperatorUndefined { .. })));
        let op = Operator::table(BTreeMap::new(), Fallback::Trivial);
        let ev = Evaluator::new(&sp, &op);
        let triv = Operator::trivial();
        assert_eq!(semantically_equal(&ev, &Evaluator::new(&sp, &triv)).unwrap(), None);
    }
}
