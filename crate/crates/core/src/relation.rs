//! Binary relations over interpretations and their minimality properties.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{BaseLogic, BeliefBase, ModelSet};
use crate::space::BaseSpace;

/// `rows[i]` holds every `j` with `i ⪯ j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceRelation {
    n: usize,
    rows: Vec<u64>,
}

impl PreferenceRelation {
    pub fn empty(n: usize) -> Self {
        PreferenceRelation { n, rows: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        PreferenceRelation { n, rows: vec![ModelSet::full(n).bits(); n] }
    }

    pub fn identity(n: usize) -> Self {
        PreferenceRelation { n, rows: (0..n).map(|i| 1u64 << i).collect() }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Self {
        let mut r = Self::empty(n);
        for (i, j) in pairs {
            r.set(i, j, true);
        }
        r
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        Self::from_pairs(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| f(i, j)))
    }

    /// Weak order from levels: lower level is preferred.
    pub fn from_levels(levels: &[usize]) -> Self {
        Self::from_fn(levels.len(), |i, j| levels[i] <= levels[j])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) && !self.leq(j, i)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i] |= 1u64 << j;
        } else {
            self.rows[i] &= !(1u64 << j);
        }
    }

    /// Everything `i` is below or equal to.
    pub fn above(&self, i: usize) -> ModelSet {
        ModelSet::from_bits(self.rows[i])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.above(i).iter().map(move |j| (i, j)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn is_subset(&self, other: &PreferenceRelation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn minus(&self, other: &PreferenceRelation) -> PreferenceRelation {
        PreferenceRelation { n: self.n, rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a & !b).collect() }
    }

    pub fn min_models(&self, m: ModelSet) -> ModelSet {
        ModelSet::from_indices(m.iter().filter(|&i| m.is_subset(self.above(i))))
    }

    pub fn transitive_closure(&self) -> PreferenceRelation {
        let mut rows = self.rows.clone();
        for k in 0..self.n {
            for i in 0..self.n {
                if rows[i] >> k & 1 == 1 {
                    rows[i] |= rows[k];
                }
            }
        }
        PreferenceRelation { n: self.n, rows }
    }

    pub fn non_total_pair(&self) -> Option<(usize, usize)> {
        (0..self.n).flat_map(|i| (i..self.n).map(move |j| (i, j))).find(|&(i, j)| !self.leq(i, j) && !self.leq(j, i))
    }

    pub fn is_total(&self) -> bool {
        self.non_total_pair().is_none()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.leq(i, i))
    }

    /// First `(a, b, c)` with `a ⪯ b ⪯ c` but not `a ⪯ c`.
    pub fn transitivity_violation(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.n {
            for b in self.above(a).iter() {
                let missing = self.above(b).minus(self.above(a));
                if let Some(c) = missing.iter().next() {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    pub fn is_transitive(&self) -> bool {
        self.transitivity_violation().is_none()
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    pub fn check_dimension(&self, n: usize) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: n, found: self.n })
        }
    }
}

impl fmt::Debug for PreferenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PreferenceRelation({})", self.n)?;
        for i in 0..self.n {
            let row: String = (0..self.n).map(|j| if self.leq(i, j) { '1' } else { '.' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

impl Serialize for PreferenceRelation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.pairs().map(|(i, j)| [i, j]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RetractionWitness {
    pub base: BeliefBase,
    /// Below `minimal` but not itself minimal.
    pub lower: usize,
    pub minimal: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationWitnesses {
    pub total: Option<(usize, usize)>,
    pub reflexive: Option<usize>,
    pub transitive: Option<(usize, usize, usize)>,
    /// Consistent base with no minimal model.
    pub min_complete: Option<BeliefBase>,
    pub min_retractive: Option<RetractionWitness>,
    /// Base whose minimum is not expressible, and that minimum.
    pub min_expressible: Option<(BeliefBase, ModelSet)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub total: bool,
    pub reflexive: bool,
    pub transitive: bool,
    pub min_complete: bool,
    pub min_retractive: bool,
    pub min_friendly: bool,
    pub min_expressible: bool,
    pub witnesses: RelationWitnesses,
    pub expressibility_witnesses: BTreeMap<ModelSet, BeliefBase>,
}

/// Quantifies bases over semantic class representatives.
pub fn property_report(space: &BaseSpace, rel: &PreferenceRelation) -> Result<RelationReport> {
    rel.check_dimension(space.n())?;
    let logic = space.logic();
    let mut w = RelationWitnesses {
        total: rel.non_total_pair(),
        reflexive: (0..rel.n()).find(|&i| !rel.leq(i, i)),
        transitive: rel.transitivity_violation(),
        ..Default::default()
    };
    let mut expressibility_witnesses = BTreeMap::new();
    for class in space.classes() {
        let m = class.models;
        let base = space.base(class.representative);
        let min = rel.min_models(m);
        if w.min_complete.is_none() && !m.is_empty() && min.is_empty() {
            w.min_complete = Some(base.clone());
        }
        if w.min_retractive.is_none() {
            'search: for minimal in min.iter() {
                for lower in m.minus(min).iter() {
                    if rel.leq(lower, minimal) {
                        w.min_retractive = Some(RetractionWitness { base: base.clone(), lower, minimal });
                        break 'search;
                    }
                }
            }
        }
        match logic.expressing_base(min) {
            Some(b) => {
                expressibility_witnesses.insert(min, b);
            }
            None => {
                if w.min_expressible.is_none() {
                    w.min_expressible = Some((base.clone(), min));
                }
            }
        }
    }
    let min_complete = w.min_complete.is_none();
    let min_retractive = w.min_retractive.is_none();
    Ok(RelationReport {
        total: w.total.is_none(),
        reflexive: w.reflexive.is_none(),
        transitive: w.transitive.is_none(),
        min_complete,
        min_retractive,
        min_friendly: min_complete && min_retractive,
        min_expressible: w.min_expressible.is_none(),
        witnesses: w,
        expressibility_witnesses,
    })
}

pub fn min_expressibility_witness(
    logic: &BaseLogic,
    rel: &PreferenceRelation,
    gamma: &BeliefBase,
) -> Result<BeliefBase> {
    rel.check_dimension(logic.num_interpretations())?;
    let m = rel.min_models(logic.models_of(gamma)?);
    logic.expressing_base(m).ok_or(Error::MinSetInexpressible(m))
}
