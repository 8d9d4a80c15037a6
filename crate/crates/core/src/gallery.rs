//! Built-in base logics, operators and relations.

use std::collections::BTreeMap;

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::logic::{BaseFamily, BaseLogic, BeliefBase, FamilyKind, ModelSet, Sentence};
use crate::operator::{ExampleRule, Fallback, Operator, OperatorKind, ThresholdRule};
use crate::relation::PreferenceRelation;

pub struct GalleryEntry {
    pub name: String,
    pub logic: BaseLogic,
    pub operator: Option<Operator>,
    pub assignment: Option<Assignment>,
    /// Named relations over Ω that come with the logic.
    pub relations: Vec<(String, PreferenceRelation)>,
}

const FINITE: &[&str] = &["L_Ex", "B_mr", "B_rps", "B_nb", "B_four", "ex10_12", "PL_1", "PL_2", "PL_3", "PL_4"];
const INFINITE: &[&str] = &["PL_inf", "B_Z_le", "B_Z_ge", "B_f1", "B_f2"];

pub fn list() -> Vec<&'static str> {
    FINITE.to_vec()
}

pub fn reserved_infinite() -> Vec<&'static str> {
    INFINITE.to_vec()
}

fn sentence(name: &str, models: &[usize]) -> Sentence {
    Sentence { name: name.to_string(), models: ModelSet::from_indices(models.iter().copied()) }
}

fn labels(prefix: &str, range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// Six worlds, no connectives: singletons, three overlapping pairs, the
/// tautology and the tautology minus one world.
pub fn l_ex() -> BaseLogic {
    let mut s: Vec<Sentence> = (0..6).map(|i| sentence(&format!("psi{i}"), &[i])).collect();
    s.push(sentence("phi0", &[0, 1]));
    s.push(sentence("phi1", &[1, 2]));
    s.push(sentence("phi2", &[2, 0]));
    s.push(sentence("chi", &[0, 1, 2, 3, 4, 5]));
    s.push(sentence("chi_prime", &[0, 1, 2, 4, 5]));
    BaseLogic::new(labels("w", 0..6), s, BaseFamily::new(FamilyKind::ArbitrarySets, true), None)
        .expect("built-in logic")
}

pub fn example_operator(logic: &BaseLogic) -> Result<Operator> {
    Ok(Operator::new(OperatorKind::Example(ExampleRule::new(logic)?)))
}

pub fn b_mr() -> BaseLogic {
    BaseLogic::new(
        labels("w", 0..4),
        vec![sentence("gamma_mr", &[0, 1, 2, 3])],
        BaseFamily::new(FamilyKind::SingleSentences, false),
        Some(vec![(0, 0, 0)]),
    )
    .expect("built-in logic")
}

/// Total relation where the last world ties with all others and the rest
/// form a strict cycle.
pub fn mr_first() -> PreferenceRelation {
    let mut pairs: Vec<(usize, usize)> = (0..4).map(|i| (i, i)).collect();
    for i in 0..3 {
        pairs.push((3, i));
        pairs.push((i, 3));
    }
    pairs.extend([(0, 1), (1, 2), (2, 0)]);
    PreferenceRelation::from_pairs(4, pairs)
}

pub fn mr_second() -> PreferenceRelation {
    let strict_top = PreferenceRelation::from_pairs(4, (0..3).map(|i| (i, 3)));
    mr_first().minus(&strict_top)
}

pub fn b_rps() -> BaseLogic {
    BaseLogic::new(
        vec!["rock".into(), "paper".into(), "scissors".into()],
        vec![sentence("all_three", &[0, 1, 2])],
        BaseFamily::new(FamilyKind::ArbitrarySets, true),
        None,
    )
    .expect("built-in logic")
}

/// Paper beats rock, scissors beat paper, rock beats scissors.
pub fn rps_relation() -> PreferenceRelation {
    PreferenceRelation::from_pairs(3, [(0, 0), (1, 1), (2, 2), (1, 0), (2, 1), (0, 2)])
}

pub fn b_nb() -> BaseLogic {
    BaseLogic::new(
        vec!["w1".into(), "w2".into()],
        vec![sentence("none", &[]), sentence("both", &[0, 1])],
        BaseFamily::new(FamilyKind::ArbitrarySets, true),
        None,
    )
    .expect("built-in logic")
}

/// Faithful and min-friendly, but prescribes a result with no base.
pub fn nb_assignment() -> Assignment {
    let mut m = BTreeMap::new();
    m.insert(ModelSet::full(2), PreferenceRelation::complete(2));
    m.insert(ModelSet::EMPTY, PreferenceRelation::from_pairs(2, [(0, 0), (0, 1), (1, 1)]));
    Assignment::Semantic(m)
}

/// Thresholds over four worlds: `ge{i}` holds at the worlds numbered at
/// least `i`, so `ge4` is unsatisfiable.
pub fn b_four() -> BaseLogic {
    let s = (0..=4).map(|i| sentence(&format!("ge{i}"), &(i..4).collect::<Vec<_>>())).collect();
    BaseLogic::with_semantic_conjunction(
        labels("", 0..4),
        s,
        BaseFamily::new(FamilyKind::SingleSentences, false),
    )
    .expect("built-in logic")
}

pub fn threshold_operator(logic: &BaseLogic) -> Result<Operator> {
    Ok(Operator::new(OperatorKind::Threshold(ThresholdRule::new(logic)?)))
}

const EX_NAMES: [&str; 7] = ["bot", "phi", "psi", "gamma1", "gamma2", "gamma3", "gamma4"];

/// Rows are K, columns Γ, both in the order of `EX_NAMES`.
const EX_TABLE: [[&str; 7]; 7] = [
    ["bot", "phi", "psi", "gamma1", "gamma2", "gamma3", "gamma4"],
    ["bot", "phi", "gamma1", "gamma1", "gamma2", "gamma3", "gamma4"],
    ["bot", "gamma1", "psi", "gamma1", "gamma2", "gamma3", "gamma4"],
    ["bot", "gamma1", "gamma1", "gamma1", "gamma2", "gamma3", "gamma4"],
    ["bot", "gamma2", "psi", "gamma1", "gamma2", "gamma3", "gamma4"],
    ["bot", "phi", "gamma3", "gamma1", "gamma2", "gamma3", "gamma4"],
    ["bot", "gamma4", "gamma3", "gamma1", "gamma2", "gamma3", "gamma4"],
];

/// Four worlds `w1..w4` with single-sentence bases; the operator reads off a
/// fixed table.
pub fn ex10_12() -> BaseLogic {
    let s = vec![
        sentence("bot", &[]),
        sentence("phi", &[0, 1, 3]),
        sentence("psi", &[0, 2]),
        sentence("gamma1", &[0]),
        sentence("gamma2", &[1]),
        sentence("gamma3", &[2]),
        sentence("gamma4", &[3]),
    ];
    BaseLogic::with_semantic_conjunction(
        labels("w", 1..5),
        s,
        BaseFamily::new(FamilyKind::SingleSentences, false),
    )
    .expect("built-in logic")
}

pub fn ex10_12_operator(logic: &BaseLogic) -> Result<Operator> {
    let mut entries = BTreeMap::new();
    for (k, row) in EX_NAMES.iter().zip(EX_TABLE.iter()) {
        for (g, r) in EX_NAMES.iter().zip(row.iter()) {
            entries.insert((logic.base(&[k])?, logic.base(&[g])?), logic.base(&[r])?);
        }
    }
    Ok(Operator::table(entries, Fallback::Error))
}

/// Name of the sentence with the given models in the `n`-atom logic: one
/// character per interpretation, `1` for models.
pub fn pl_name(n: usize, models: ModelSet) -> String {
    let worlds = 1usize << n;
    let mut s = String::with_capacity(worlds + 1);
    s.push('t');
    for w in 0..worlds {
        s.push(if models.contains(w) { '1' } else { '0' });
    }
    s
}

/// Models of atom `j` (0-based): interpretations with bit `j` set.
pub fn pl_atom_models(n: usize, j: usize) -> ModelSet {
    ModelSet::from_indices((0..1usize << n).filter(|w| w >> j & 1 == 1))
}

pub fn pl_atom(n: usize, j: usize) -> String {
    pl_name(n, pl_atom_models(n, j))
}

pub fn pl_negated_atom(n: usize, j: usize) -> String {
    pl_name(n, ModelSet::full(1 << n).minus(pl_atom_models(n, j)))
}

/// Propositional logic over `n` atoms, one sentence per truth table. The
/// sentence id of a truth table equals its bitmask.
pub fn pl(n: usize) -> Result<BaseLogic> {
    if !(1..=4).contains(&n) {
        return Err(Error::UnknownGalleryName(format!("PL_{n}")));
    }
    let worlds = 1usize << n;
    let interpretations = (0..worlds)
        .map(|w| {
            let bits: String = (0..n).map(|j| if w >> j & 1 == 1 { '1' } else { '0' }).collect();
            format!("v{bits}")
        })
        .collect();
    let sentences = (0..1u64 << worlds)
        .map(|m| {
            let models = ModelSet::from_bits(m);
            Sentence { name: pl_name(n, models), models }
        })
        .collect();
    BaseLogic::with_semantic_conjunction(interpretations, sentences, BaseFamily::new(FamilyKind::SingleSentences, false))
}

pub fn load(name: &str) -> Result<GalleryEntry> {
    if INFINITE.contains(&name) {
        return Err(Error::OutOfScopeInfinite(name.to_string()));
    }
    let entry = |logic: BaseLogic| GalleryEntry {
        name: name.to_string(),
        logic,
        operator: None,
        assignment: None,
        relations: Vec::new(),
    };
    Ok(match name {
        "L_Ex" | "B_Ex" => {
            let mut e = entry(l_ex());
            e.operator = Some(example_operator(&e.logic)?);
            e
        }
        "B_mr" => {
            let mut e = entry(b_mr());
            e.relations = vec![("mr1".into(), mr_first()), ("mr2".into(), mr_second())];
            e
        }
        "B_rps" => {
            let mut e = entry(b_rps());
            e.relations = vec![("rps".into(), rps_relation())];
            e
        }
        "B_nb" => {
            let mut e = entry(b_nb());
            e.assignment = Some(nb_assignment());
            e
        }
        "B_four" => {
            let mut e = entry(b_four());
            e.operator = Some(threshold_operator(&e.logic)?);
            e
        }
        "ex10_12" => {
            let mut e = entry(ex10_12());
            e.operator = Some(ex10_12_operator(&e.logic)?);
            e
        }
        _ => match name.strip_prefix("PL_").and_then(|s| s.parse::<usize>().ok()) {
            Some(n @ 1..=4) => {
                let mut e = entry(pl(n)?);
                e.operator = Some(Operator::trivial());
                e
            }
            _ => return Err(Error::UnknownGalleryName(name.to_string())),
        },
    })
}

/// Convenience for tests: the base made of one named sentence.
pub fn single(logic: &BaseLogic, name: &str) -> Result<BeliefBase> {
    logic.base(&[name])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_logic_shape() {
        let l = l_ex();
        assert_eq!(l.num_interpretations(), 6);
        assert_eq!(l.sentences().len(), 11);
        let b = l.base(&["phi0", "phi1"]).unwrap();
        assert_eq!(l.models_of(&b).unwrap(), ModelSet::singleton(1));
    }

    #[test]
    fn pl2_has_sixteen_sentences() {
        let l = pl(2).unwrap();
        assert_eq!(l.num_interpretations(), 4);
        assert_eq!(l.sentences().len(), 16);
        let p = l.sentence_id(&pl_atom(2, 0)).unwrap();
        let q = l.sentence_id(&pl_atom(2, 1)).unwrap();
        let pq = l.conjoin(p, q).unwrap();
        assert_eq!(l.sentences()[pq as usize].models, ModelSet::singleton(3));
        assert_eq!(pq, 0b1000);
    }

    #[test]
    fn table_rows() {
        let l = ex10_12();
        let op = ex10_12_operator(&l).unwrap();
        let k = l.base(&["gamma4"]).unwrap();
        let r = |g: &str| op.revise(&l, &k, &l.base(&[g]).unwrap()).unwrap();
        assert_eq!(r("phi"), k);
        assert_eq!(r("psi"), l.base(&["gamma3"]).unwrap());
        for g in ["gamma1", "gamma2", "gamma3", "gamma4"] {
            assert_eq!(r(g), l.base(&[g]).unwrap());
        }
    }

    #[test]
    fn names_resolve() {
        for n in list() {
            assert!(load(n).is_ok(), "{n}");
        }
        assert!(matches!(load("PL_inf"), Err(Error::OutOfScopeInfinite(_))));
        assert!(matches!(load("nope"), Err(Error::UnknownGalleryName(_))));
    }

    #[test]
    fn mr_relations() {
        let (a, b) = (mr_first(), mr_second());
        assert!(a.leq(0, 3) && !b.leq(0, 3) && b.leq(3, 0));
        assert!(a.is_total() && b.is_total());
    }
}
