//! Brute-force oracles that only read sentence model sets and call the
//! operator directly.

#![allow(dead_code)]

use revkit_core::{BaseLogic, BeliefBase, ModelSet, Operator};

pub fn models(logic: &BaseLogic, base: &BeliefBase) -> u64 {
    let full = (1u64 << logic.num_interpretations()) - 1;
    base.ids().iter().fold(full, |acc, &id| acc & logic.sentences()[id as usize].models.bits())
}

/// Every subset of the sentences.
pub fn all_subsets(logic: &BaseLogic) -> Vec<BeliefBase> {
    let n = logic.sentences().len();
    (0u64..1 << n).map(|mask| BeliefBase::new((0..n as u32).filter(|i| mask >> i & 1 == 1))).collect()
}

pub fn singletons(logic: &BaseLogic) -> Vec<BeliefBase> {
    (0..logic.sentences().len() as u32).map(BeliefBase::single).collect()
}

pub fn revise_models(logic: &BaseLogic, op: &Operator, k: &BeliefBase, g: &BeliefBase) -> u64 {
    models(logic, &op.revise(logic, k, g).expect("operator defined"))
}

/// `m[i][j]` iff i ⊨ K, or neither is a model and every base covering both
/// that keeps j in the result keeps i too.
pub fn canonical_matrix(logic: &BaseLogic, op: &Operator, k: &BeliefBase, bases: &[BeliefBase]) -> Vec<Vec<bool>> {
    let n = logic.num_interpretations();
    let km = models(logic, k);
    let results: Vec<(u64, u64)> = bases.iter().map(|g| (models(logic, g), revise_models(logic, op, k, g))).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    km >> i & 1 == 1
                        || (km >> j & 1 == 0
                            && results.iter().all(|&(gm, r)| {
                                let covers = gm >> i & 1 == 1 && gm >> j & 1 == 1;
                                !covers || r >> j & 1 == 0 || r >> i & 1 == 1
                            }))
                })
                .collect()
        })
        .collect()
}

/// Unordered pairs of non-models of K that no result of a covering base
/// contains either of.
pub fn detached(logic: &BaseLogic, op: &Operator, k: &BeliefBase, bases: &[BeliefBase]) -> Vec<(usize, usize)> {
    let n = logic.num_interpretations();
    let km = models(logic, k);
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if km >> a & 1 == 1 || km >> b & 1 == 1 {
                continue;
            }
            let attached = bases.iter().any(|g| {
                let gm = models(logic, g);
                let r = revise_models(logic, op, k, g) & gm;
                gm >> a & 1 == 1 && gm >> b & 1 == 1 && (r >> a & 1 == 1 || r >> b & 1 == 1)
            });
            if !attached {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn set(indices: &[usize]) -> ModelSet {
    ModelSet::from_indices(indices.iter().copied())
}
