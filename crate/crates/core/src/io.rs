//! JSON file formats for logics, relations, operators, assignments and loops.
//! Sentences and interpretations are referred to by name; indices are also
//! accepted wherever an interpretation is expected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::assignment::{Assignment, Keying};
use crate::critical_loop::{operator_from_loop, CriticalLoop};
use crate::error::{Error, Result};
use crate::logic::{BaseFamily, BaseLogic, BeliefBase, ModelSet, Sentence};
use crate::operator::{ExampleRule, Fallback, Operator, OperatorKind, ThresholdRule};
use crate::relation::PreferenceRelation;
use crate::space::BaseSpace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref {
    Index(u64),
    Name(String),
}

impl Ref {
    fn interpretation(&self, logic_labels: &[String], at: &str) -> Result<usize> {
        match self {
            Ref::Index(i) if (*i as usize) < logic_labels.len() => Ok(*i as usize),
            Ref::Index(i) => Err(fmt_err(at, format!("interpretation index {i} out of range"))),
            Ref::Name(n) => logic_labels
                .iter()
                .position(|l| l == n)
                .ok_or_else(|| fmt_err(at, format!("unknown interpretation `{n}`"))),
        }
    }

    fn sentence(&self, logic: &BaseLogic, at: &str) -> Result<u32> {
        match self {
            Ref::Index(i) if (*i as usize) < logic.sentences().len() => Ok(*i as u32),
            Ref::Index(i) => Err(fmt_err(at, format!("sentence id {i} out of range"))),
            Ref::Name(n) => logic.sentence_id(n).map_err(|_| fmt_err(at, format!("unknown sentence `{n}`"))),
        }
    }
}

fn fmt_err(path: &str, msg: impl Into<String>) -> Error {
    Error::Format { path: path.to_string(), msg: msg.into() }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| fmt_err(&path.display().to_string(), e.to_string()))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, path: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| fmt_err(path, e.to_string()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SentenceFile {
    pub name: String,
    pub models: Vec<Ref>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConjunctionFile {
    /// `"semantic"`: the lowest sentence with the intersected models.
    Mode(String),
    Table(Vec<[Ref; 3]>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogicFile {
    pub interpretations: Vec<String>,
    pub sentences: Vec<SentenceFile>,
    pub family: BaseFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjunction: Option<ConjunctionFile>,
}

impl LogicFile {
    pub fn from_logic(logic: &BaseLogic) -> Self {
        let names = |id: u32| Ref::Name(logic.sentences()[id as usize].name.clone());
        let conjunction = if logic.has_semantic_conjunction() {
            Some(ConjunctionFile::Mode("semantic".into()))
        } else if logic.conjunction_table().is_empty() {
            None
        } else {
            Some(ConjunctionFile::Table(
                logic.conjunction_table().iter().map(|(&(a, b), &c)| [names(a), names(b), names(c)]).collect(),
            ))
        };
        LogicFile {
            interpretations: logic.interpretations().to_vec(),
            sentences: logic
                .sentences()
                .iter()
                .map(|s| SentenceFile {
                    name: s.name.clone(),
                    models: s.models.iter().map(|i| Ref::Name(logic.interpretations()[i].clone())).collect(),
                })
                .collect(),
            family: logic.family(),
            conjunction,
        }
    }

    pub fn build(&self) -> Result<BaseLogic> {
        let mut sentences = Vec::with_capacity(self.sentences.len());
        for (i, s) in self.sentences.iter().enumerate() {
            let mut m = ModelSet::EMPTY;
            for (j, r) in s.models.iter().enumerate() {
                m = m.with(r.interpretation(&self.interpretations, &format!("sentences[{i}].models[{j}]"))?);
            }
            sentences.push(Sentence { name: s.name.clone(), models: m });
        }
        let invalid = |e: Error| match e {
            Error::InvalidLogic(msg) => fmt_err("$", msg),
            e => e,
        };
        match &self.conjunction {
            None => BaseLogic::new(self.interpretations.clone(), sentences, self.family, None).map_err(invalid),
            Some(ConjunctionFile::Mode(m)) if m == "semantic" => {
                BaseLogic::with_semantic_conjunction(self.interpretations.clone(), sentences, self.family)
                    .map_err(invalid)
            }
            Some(ConjunctionFile::Mode(m)) => Err(fmt_err("conjunction", format!("unknown mode `{m}`"))),
            Some(ConjunctionFile::Table(rows)) => {
                // resolve names against a table-free copy first
                let plain = BaseLogic::new(
                    self.interpretations.clone(),
                    sentences.clone(),
                    BaseFamily::new(crate::logic::FamilyKind::ArbitrarySets, true),
                    None,
                )
                .map_err(invalid)?;
                let mut table = Vec::with_capacity(rows.len());
                for (row, [a, b, c]) in rows.iter().enumerate() {
                    let at = |k: usize| format!("conjunction[{row}][{k}]");
                    table.push((a.sentence(&plain, &at(0))?, b.sentence(&plain, &at(1))?, c.sentence(&plain, &at(2))?));
                }
                BaseLogic::new(self.interpretations.clone(), sentences, self.family, Some(table)).map_err(invalid)
            }
        }
    }
}

pub fn logic_to_json(logic: &BaseLogic) -> String {
    serde_json::to_string_pretty(&LogicFile::from_logic(logic)).expect("serializable")
}

pub fn logic_from_str(text: &str, path: &str) -> Result<BaseLogic> {
    parse::<LogicFile>(text, path)?.build().map_err(|e| prefix(e, path))
}

pub fn load_logic(path: &Path) -> Result<BaseLogic> {
    logic_from_str(&read(path)?, &path.display().to_string())
}

fn prefix(e: Error, path: &str) -> Error {
    match e {
        Error::Format { path: p, msg } => fmt_err(path, format!("{p}: {msg}")),
        e => fmt_err(path, e.to_string()),
    }
}

fn base_from_names(logic: &BaseLogic, names: &[Ref], at: &str) -> Result<BeliefBase> {
    let ids = names
        .iter()
        .enumerate()
        .map(|(i, r)| r.sentence(logic, &format!("{at}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let b = BeliefBase::new(ids);
    logic.validate_base(&b).map_err(|e| fmt_err(at, e.to_string()))?;
    Ok(b)
}

fn names_of(logic: &BaseLogic, b: &BeliefBase) -> Vec<Ref> {
    logic.names(b).into_iter().map(Ref::Name).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub for_base: Option<Vec<Ref>>,
    pub pairs: Vec<[Ref; 2]>,
    /// Row `i` has `1` at column `j` iff `i ⪯ j`; written for reading only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<String>>,
}

pub fn relation_matrix(rel: &PreferenceRelation) -> Vec<String> {
    (0..rel.n()).map(|i| (0..rel.n()).map(|j| if rel.leq(i, j) { '1' } else { '0' }).collect()).collect()
}

fn pairs_of(rel: &PreferenceRelation) -> Vec<[Ref; 2]> {
    rel.pairs().map(|(i, j)| [Ref::Index(i as u64), Ref::Index(j as u64)]).collect()
}

fn relation_from_pairs(logic: &BaseLogic, pairs: &[[Ref; 2]], at: &str) -> Result<PreferenceRelation> {
    let labels = logic.interpretations();
    let mut rel = PreferenceRelation::empty(labels.len());
    for (k, [a, b]) in pairs.iter().enumerate() {
        let i = a.interpretation(labels, &format!("{at}[{k}][0]"))?;
        let j = b.interpretation(labels, &format!("{at}[{k}][1]"))?;
        rel.set(i, j, true);
    }
    Ok(rel)
}

pub fn relation_to_json(logic: &BaseLogic, rel: &PreferenceRelation, for_base: Option<&BeliefBase>) -> String {
    let file = RelationFile {
        for_base: for_base.map(|b| names_of(logic, b)),
        pairs: pairs_of(rel),
        matrix: Some(relation_matrix(rel)),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

/// The relation and the base it was written for, if recorded.
pub fn relation_from_str(logic: &BaseLogic, text: &str, path: &str) -> Result<(PreferenceRelation, Option<BeliefBase>)> {
    let file: RelationFile = parse(text, path)?;
    let rel = relation_from_pairs(logic, &file.pairs, "pairs").map_err(|e| prefix(e, path))?;
    let base = match &file.for_base {
        Some(names) => Some(base_from_names(logic, names, "for_base").map_err(|e| prefix(e, path))?),
        None => None,
    };
    Ok((rel, base))
}

pub fn load_relation(logic: &BaseLogic, path: &Path) -> Result<(PreferenceRelation, Option<BeliefBase>)> {
    relation_from_str(logic, &read(path)?, &path.display().to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssignmentEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<Ref>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_of: Option<Vec<Ref>>,
    pub pairs: Vec<[Ref; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssignmentFile {
    pub keying: Keying,
    pub entries: Vec<AssignmentEntry>,
}

impl AssignmentFile {
    pub fn from_assignment(logic: &BaseLogic, a: &Assignment) -> Self {
        match a {
            Assignment::Semantic(m) => AssignmentFile {
                keying: Keying::Semantic,
                entries: m
                    .iter()
                    .map(|(&models, rel)| AssignmentEntry {
                        base: None,
                        // every stored class is expressible, so a base exists
                        class_of: Some(names_of(logic, &logic.expressing_base(models).unwrap_or_default())),
                        pairs: pairs_of(rel),
                    })
                    .collect(),
            },
            Assignment::Syntactic(m) => AssignmentFile {
                keying: Keying::Syntactic,
                entries: m
                    .iter()
                    .map(|(b, rel)| AssignmentEntry { base: Some(names_of(logic, b)), class_of: None, pairs: pairs_of(rel) })
                    .collect(),
            },
        }
    }

    pub fn build(&self, logic: &BaseLogic) -> Result<Assignment> {
        let mut sem = BTreeMap::new();
        let mut syn = BTreeMap::new();
        for (i, e) in self.entries.iter().enumerate() {
            let at = format!("entries[{i}]");
            let rel = relation_from_pairs(logic, &e.pairs, &format!("{at}.pairs"))?;
            let (names, field) = match (&e.base, &e.class_of) {
                (Some(b), None) => (b, "base"),
                (None, Some(b)) => (b, "class_of"),
                _ => return Err(fmt_err(&at, "exactly one of `base` and `class_of` is required")),
            };
            let base = base_from_names(logic, names, &format!("{at}.{field}"))?;
            match self.keying {
                Keying::Semantic => {
                    if sem.insert(logic.models_of(&base)?, rel).is_some() {
                        return Err(fmt_err(&at, "second entry for the same model set"));
                    }
                }
                Keying::Syntactic => {
                    if field == "class_of" {
                        return Err(fmt_err(&at, "syntactic keying needs `base`"));
                    }
                    if syn.insert(base, rel).is_some() {
                        return Err(fmt_err(&at, "second entry for the same base"));
                    }
                }
            }
        }
        Ok(match self.keying {
            Keying::Semantic => Assignment::Semantic(sem),
            Keying::Syntactic => Assignment::Syntactic(syn),
        })
    }
}

pub fn assignment_to_json(logic: &BaseLogic, a: &Assignment) -> String {
    serde_json::to_string_pretty(&AssignmentFile::from_assignment(logic, a)).expect("serializable")
}

pub fn assignment_from_str(logic: &BaseLogic, text: &str, path: &str) -> Result<Assignment> {
    parse::<AssignmentFile>(text, path)?.build(logic).map_err(|e| prefix(e, path))
}

pub fn load_assignment(logic: &BaseLogic, path: &Path) -> Result<Assignment> {
    assignment_from_str(logic, &read(path)?, &path.display().to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub cover: Vec<Ref>,
    pub cover_models: Vec<Ref>,
    pub witness: Vec<Ref>,
    pub witness_models: Vec<Ref>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LoopFile {
    pub k: Vec<Ref>,
    pub edges: Vec<Vec<Ref>>,
    pub nodes: Vec<Vec<Ref>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateFile>,
}

fn labels_of(logic: &BaseLogic, m: ModelSet) -> Vec<Ref> {
    m.iter().map(|i| Ref::Name(logic.interpretations()[i].clone())).collect()
}

impl LoopFile {
    pub fn from_loop(logic: &BaseLogic, lp: &CriticalLoop) -> Self {
        LoopFile {
            k: names_of(logic, &lp.k),
            edges: lp.edge_bases.iter().map(|b| names_of(logic, b)).collect(),
            nodes: lp.node_bases.iter().map(|b| names_of(logic, b)).collect(),
            certificates: lp
                .certificates
                .iter()
                .map(|c| CertificateFile {
                    cover: names_of(logic, &c.cover),
                    cover_models: labels_of(logic, c.cover_models),
                    witness: names_of(logic, &c.witness),
                    witness_models: labels_of(logic, c.witness_models),
                })
                .collect(),
        }
    }

    /// Certificates are recomputed when the loop is validated, so the file's
    /// copies are not read back.
    pub fn build(&self, logic: &BaseLogic) -> Result<CriticalLoop> {
        let list = |v: &[Vec<Ref>], f: &str| {
            v.iter().enumerate().map(|(i, b)| base_from_names(logic, b, &format!("{f}[{i}]"))).collect::<Result<Vec<_>>>()
        };
        Ok(CriticalLoop {
            k: base_from_names(logic, &self.k, "k")?,
            edge_bases: list(&self.edges, "edges")?,
            node_bases: list(&self.nodes, "nodes")?,
            certificates: Vec::new(),
        })
    }
}

pub fn loop_to_json(logic: &BaseLogic, lp: &CriticalLoop) -> String {
    serde_json::to_string_pretty(&LoopFile::from_loop(logic, lp)).expect("serializable")
}

pub fn loop_from_str(logic: &BaseLogic, text: &str, path: &str) -> Result<CriticalLoop> {
    parse::<LoopFile>(text, path)?.build(logic).map_err(|e| prefix(e, path))
}

pub fn load_loop(logic: &BaseLogic, path: &Path) -> Result<CriticalLoop> {
    loop_from_str(logic, &read(path)?, &path.display().to_string())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub k: Vec<Ref>,
    pub gamma: Vec<Ref>,
    pub result: Vec<Ref>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<TableEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<AssignmentFile>,
    #[serde(rename = "loop", default, skip_serializing_if = "Option::is_none")]
    pub critical_loop: Option<LoopFile>,
}

impl OperatorFile {
    fn plain(kind: &str) -> Self {
        OperatorFile { kind: kind.into(), fallback: None, entries: Vec::new(), assignment: None, critical_loop: None }
    }

    /// `None` for operators that only exist in code.
    pub fn from_operator(logic: &BaseLogic, op: &Operator) -> Option<Self> {
        Some(match &op.kind {
            OperatorKind::Trivial => Self::plain("trivial"),
            OperatorKind::PlainUnion => Self::plain("union"),
            OperatorKind::Example(_) => Self::plain("example"),
            OperatorKind::Threshold(_) => Self::plain("threshold"),
            OperatorKind::Table { entries, fallback } => OperatorFile {
                fallback: Some(match fallback {
                    Fallback::Error => "error".into(),
                    Fallback::Trivial => "trivial".into(),
                }),
                entries: entries
                    .iter()
                    .map(|((k, g), r)| TableEntry { k: names_of(logic, k), gamma: names_of(logic, g), result: names_of(logic, r) })
                    .collect(),
                ..Self::plain("table")
            },
            OperatorKind::FromAssignment(a) => OperatorFile {
                assignment: Some(AssignmentFile::from_assignment(logic, a)),
                ..Self::plain("from_assignment")
            },
            OperatorKind::FromLoop(_) | OperatorKind::External(_) => return None,
        })
    }

    pub fn build(&self, logic: &BaseLogic) -> Result<Operator> {
        match self.kind.as_str() {
            "trivial" => Ok(Operator::trivial()),
            "union" => Ok(Operator::plain_union()),
            "example" => Ok(Operator::new(OperatorKind::Example(ExampleRule::new(logic)?))),
            "threshold" => Ok(Operator::new(OperatorKind::Threshold(ThresholdRule::new(logic)?))),
            "table" => {
                let fallback = match self.fallback.as_deref() {
                    None | Some("error") => Fallback::Error,
                    Some("trivial") => Fallback::Trivial,
                    Some(other) => return Err(fmt_err("fallback", format!("unknown fallback `{other}`"))),
                };
                let mut entries = BTreeMap::new();
                for (i, e) in self.entries.iter().enumerate() {
                    let at = |f: &str| format!("entries[{i}].{f}");
                    let k = base_from_names(logic, &e.k, &at("k"))?;
                    let g = base_from_names(logic, &e.gamma, &at("gamma"))?;
                    let r = base_from_names(logic, &e.result, &at("result"))?;
                    if entries.insert((k, g), r).is_some() {
                        return Err(fmt_err(&format!("entries[{i}]"), "duplicate (k, gamma) pair"));
                    }
                }
                Ok(Operator::table(entries, fallback))
            }
            "from_assignment" => {
                let a = self.assignment.as_ref().ok_or_else(|| fmt_err("assignment", "missing"))?.build(logic)?;
                let space = BaseSpace::new(logic.clone())?;
                crate::assignment::from_assignment(&space, &a)
            }
            "from_loop" => {
                let lp = self.critical_loop.as_ref().ok_or_else(|| fmt_err("loop", "missing"))?.build(logic)?;
                let space = BaseSpace::new(logic.clone())?;
                operator_from_loop(&space, &lp)
            }
            other => Err(fmt_err("kind", format!("unknown operator kind `{other}`"))),
        }
    }
}

pub fn operator_to_json(logic: &BaseLogic, op: &Operator) -> Option<String> {
    OperatorFile::from_operator(logic, op).map(|f| serde_json::to_string_pretty(&f).expect("serializable"))
}

pub fn operator_from_str(logic: &BaseLogic, text: &str, path: &str) -> Result<Operator> {
    parse::<OperatorFile>(text, path)?.build(logic).map_err(|e| prefix(e, path))
}

pub fn load_operator(logic: &BaseLogic, path: &Path) -> Result<Operator> {
    operator_from_str(logic, &read(path)?, &path.display().to_string())
}
