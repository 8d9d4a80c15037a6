use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use revkit_core::assignment::{compatibility_check, extract_assignment, faithfulness_report};
use revkit_core::critical_loop::{detect_critical_loop, operator_from_loop, validate_loop};
use revkit_core::encoding::{encode, Encoder, Quantifier};
use revkit_core::io::{self, LoopFile, OperatorFile};
use revkit_core::postulates::{postulate_report, CheckMode, CheckOptions, Postulate, PostulateReport, Status, Witness};
use revkit_core::tpo::to_total_preorder;
use revkit_core::verify::{self, check_preorder_enforcing, check_representation, Profile, Verdict};
use revkit_core::{gallery, BaseLogic, BaseSpace, BeliefBase, Error, Evaluator, ModelSet, Operator, PreferenceRelation};

use crate::{Command, EncoderArg, GalleryAction, Mode, QuantifierArg, SweepKind, Theorems};

/// What a command produced: `ok` is false when a checked property failed.
pub struct Outcome {
    pub ok: bool,
    pub text: String,
    pub json: Value,
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::CheckPostulates { io, mode, acyc } => check_postulates(&io.logic, &io.operator, *mode, *acyc),
        Command::Extract { io, base, encoder, quantifier, out } => {
            extract(&io.logic, &io.operator, base.as_deref(), *encoder, *quantifier, out.as_deref())
        }
        Command::CheckAssignment { logic, assignment, operator } => check_assignment(logic, assignment, operator.as_deref()),
        Command::DetectLoop { logic, max_len, out } => detect_loop(logic, *max_len, out.as_deref()),
        Command::SynthFromLoop { logic, loop_file, out } => synth_from_loop(logic, loop_file, out.as_deref()),
        Command::Tpo { io, base, trace } => tpo(&io.logic, &io.operator, base, trace.as_deref()),
        Command::Verify { logic, operator, theorems, samples, seed } => {
            verify_instance(logic, operator.as_deref(), *theorems, *samples, *seed)
        }
        Command::Sweep { profile, n, seed, kind, junit } => sweep(profile, *n, *seed, *kind, junit.as_deref()),
        Command::Gallery { action: GalleryAction::List } => Ok(gallery_list()),
        Command::Gallery { action: GalleryAction::Export { name, out } } => gallery_export(name, out),
    }
}

fn load(logic: &Path, operator: &Path) -> Result<(BaseSpace, Operator)> {
    let logic = io::load_logic(logic)?;
    let op = io::load_operator(&logic, operator)?;
    Ok((BaseSpace::new(logic)?, op))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Comma-separated sentence names; the empty string is the empty base.
fn parse_base(logic: &BaseLogic, list: &str) -> Result<BeliefBase> {
    let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let b = logic.base(&names)?;
    logic.validate_base(&b)?;
    Ok(b)
}

fn labels(logic: &BaseLogic, m: ModelSet) -> Vec<String> {
    m.iter().map(|i| logic.interpretations()[i].clone()).collect()
}

fn matrix_text(logic: &BaseLogic, rel: &PreferenceRelation) -> String {
    let width = logic.interpretations().iter().map(String::len).max().unwrap_or(1);
    let mut s = String::new();
    for (i, row) in io::relation_matrix(rel).iter().enumerate() {
        let _ = writeln!(s, "  {:>width$}  {row}", logic.interpretations()[i]);
    }
    s
}

fn witness_json(logic: &BaseLogic, w: &Witness) -> Value {
    let bases: serde_json::Map<String, Value> = w.bases.iter().map(|(r, b)| (r.clone(), json!(logic.names(b)))).collect();
    let sets: serde_json::Map<String, Value> = w.sets.iter().map(|(r, m)| (r.clone(), json!(labels(logic, *m)))).collect();
    json!({ "bases": bases, "sets": sets })
}

fn witness_text(logic: &BaseLogic, w: &Witness) -> String {
    let mut parts: Vec<String> = w.bases.iter().map(|(r, b)| format!("{r} = {}", logic.show_base(b))).collect();
    parts.extend(w.sets.iter().map(|(r, m)| format!("Mod({r}) = {}", logic.show_models(*m))));
    parts.join(", ")
}

fn report_json(logic: &BaseLogic, r: &PostulateReport) -> Value {
    let results: serde_json::Map<String, Value> = r
        .results
        .iter()
        .map(|(p, s)| {
            let v = match s {
                Status::Pass => json!({ "status": "pass" }),
                Status::Fail(w) => json!({ "status": "fail", "witness": witness_json(logic, w) }),
                Status::Skipped(why) => json!({ "status": "skipped", "reason": why }),
            };
            (format!("{p:?}"), v)
        })
        .collect();
    json!({ "mode": r.mode, "notes": r.notes, "results": results })
}

fn report_text(logic: &BaseLogic, r: &PostulateReport) -> String {
    let mut s = String::new();
    for note in &r.notes {
        let _ = writeln!(s, "note: {note}");
    }
    for (p, st) in &r.results {
        let line = match st {
            Status::Pass => "pass".to_string(),
            Status::Fail(w) => format!("FAIL  {}", witness_text(logic, w)),
            Status::Skipped(why) => format!("skipped ({why})"),
        };
        let _ = writeln!(s, "{:<5} {line}", format!("{p:?}"));
    }
    s
}

fn check_postulates(logic: &Path, operator: &Path, mode: Mode, acyc: bool) -> Result<Outcome> {
    let (sp, op) = load(logic, operator)?;
    let ev = Evaluator::new(&sp, &op);
    let mode = match mode {
        Mode::Full => CheckMode::Full,
        Mode::Semantic => CheckMode::Semantic,
    };
    let r = postulate_report(&ev, CheckOptions { mode, acyc, ..Default::default() })?;
    let ok = r.failed().is_empty();
    let lg = sp.logic();
    Ok(Outcome {
        ok,
        text: format!("{} bases, {} classes\n{}", sp.len(), sp.classes().len(), report_text(lg, &r)),
        json: json!({ "command": "check-postulates", "pass": ok, "bases": sp.len(), "report": report_json(lg, &r) }),
    })
}

fn is_property_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::FormInexpressible(..)
            | Error::MinSetInexpressible(_)
            | Error::NotAPreorder
            | Error::PostulatePrerequisiteFailed(_)
            | Error::CriticalLoopPresent(_)
            | Error::OperatorUndefined { .. }
    )
}

/// Turns a property failure into a failed outcome; other errors propagate.
fn failed_or<T>(r: revkit_core::Result<T>, command: &str) -> Result<std::result::Result<T, Outcome>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if is_property_failure(&e) => Ok(Err(Outcome {
            ok: false,
            text: format!("failed: {e}\n"),
            json: json!({ "command": command, "pass": false, "error": e.to_string() }),
        })),
        Err(e) => Err(e.into()),
    }
}

fn extract(
    logic: &Path,
    operator: &Path,
    base: Option<&str>,
    encoder: EncoderArg,
    quantifier: QuantifierArg,
    out: Option<&Path>,
) -> Result<Outcome> {
    let (sp, op) = load(logic, operator)?;
    let ev = Evaluator::new(&sp, &op);
    let lg = sp.logic();
    let Some(base) = base else {
        let a = match failed_or(extract_assignment(&ev), "extract")? {
            Ok(a) => a,
            Err(o) => return Ok(o),
        };
        let text = io::assignment_to_json(lg, &a);
        if let Some(p) = out {
            write_file(p, &text)?;
        }
        let json: Value = serde_json::from_str(&text)?;
        return Ok(Outcome {
            ok: true,
            text: if out.is_some() { format!("assignment over {} bases written\n", sp.len()) } else { text + "\n" },
            json: json!({ "command": "extract", "pass": true, "assignment": json }),
        });
    };
    let kb = parse_base(lg, base)?;
    let k = sp.id_of(&kb)?;
    let (q, q_name) = match quantifier {
        QuantifierArg::Classes => (Quantifier::Classes, "classes"),
        QuantifierArg::All => (Quantifier::AllBases, "all_bases"),
        QuantifierArg::Auto => {
            if postulate_report(&ev, CheckOptions::default())?.passes(Postulate::G4) {
                (Quantifier::Classes, "classes")
            } else {
                (Quantifier::AllBases, "all_bases")
            }
        }
    };
    let enc = match encoder {
        EncoderArg::Canonical => Encoder::Canonical,
        EncoderArg::Sqrel => Encoder::Sqrel,
        EncoderArg::Km => Encoder::Km,
        EncoderArg::Dpw => Encoder::Dpw,
        EncoderArg::Aiguier => Encoder::Aiguier,
    };
    let rel = match failed_or(encode(&ev, k, enc, q), "extract")? {
        Ok(r) => r,
        Err(o) => return Ok(o),
    };
    let file = io::relation_to_json(lg, &rel, Some(&kb));
    if let Some(p) = out {
        write_file(p, &file)?;
    }
    let mut text = format!(
        "{:?} relation at K = {} ({q_name}), total: {}, transitive: {}\n",
        enc,
        lg.show_base(&kb),
        rel.is_total(),
        rel.is_transitive()
    );
    text += &matrix_text(lg, &rel);
    Ok(Outcome {
        ok: true,
        text,
        json: json!({
            "command": "extract",
            "pass": true,
            "encoder": enc,
            "quantifier": q_name,
            "relation": serde_json::from_str::<Value>(&file)?,
        }),
    })
}

fn check_assignment(logic: &Path, assignment: &Path, operator: Option<&Path>) -> Result<Outcome> {
    let lg = io::load_logic(logic)?;
    let a = io::load_assignment(&lg, assignment)?;
    let op = operator.map(|p| io::load_operator(&lg, p)).transpose()?;
    let sp = BaseSpace::new(lg)?;
    let fr = faithfulness_report(&sp, &a)?;
    let compat = match &op {
        Some(op) => Some(compatibility_check(&Evaluator::new(&sp, op), &a)?),
        None => None,
    };
    let ok = fr.quasi_faithful
        && fr.min_friendly
        && fr.min_expressible
        && compat.as_ref().is_none_or(|c| c.compatible);
    let mut text = String::new();
    for (name, v) in [
        ("faithful", fr.faithful),
        ("quasi-faithful", fr.quasi_faithful),
        ("preorders", fr.preorder_assignment),
        ("total", fr.total),
        ("min-friendly", fr.min_friendly),
        ("min-expressible", fr.min_expressible),
    ] {
        let _ = writeln!(text, "{name:<16} {}", if v { "yes" } else { "no" });
    }
    let lg = sp.logic();
    let w = &fr.witnesses;
    if let Some(k) = &w.min_friendly {
        let _ = writeln!(text, "min-friendliness fails at K = {}", lg.show_base(k));
    }
    if let Some((k, g, m)) = &w.min_expressible {
        let _ = writeln!(
            text,
            "minimum of {} at K = {} is {}, which no base expresses",
            lg.show_base(g),
            lg.show_base(k),
            lg.show_models(*m)
        );
    }
    if let Some(c) = &compat {
        let _ = writeln!(text, "{:<16} {}", "compatible", if c.compatible { "yes" } else { "no" });
        if let Some(w) = &c.witness {
            let _ = writeln!(
                text,
                "K = {}, Γ = {}: revision gives {}, minimum is {}",
                lg.show_base(&w.k),
                lg.show_base(&w.gamma),
                lg.show_models(w.revision),
                lg.show_models(w.minimum)
            );
        }
    }
    Ok(Outcome {
        ok,
        text,
        json: json!({ "command": "check-assignment", "pass": ok, "report": fr, "compatibility": compat }),
    })
}

fn detect_loop(logic: &Path, max_len: Option<usize>, out: Option<&Path>) -> Result<Outcome> {
    let sp = BaseSpace::new(io::load_logic(logic)?)?;
    let lg = sp.logic();
    let found = detect_critical_loop(&sp, max_len)?;
    let Some(lp) = found else {
        return Ok(Outcome {
            ok: true,
            text: "no critical loop\n".into(),
            json: json!({ "command": "detect-loop", "pass": true, "loop": null }),
        });
    };
    let file = io::loop_to_json(lg, &lp);
    if let Some(p) = out {
        write_file(p, &file)?;
    }
    Ok(Outcome {
        ok: true,
        text: format!("critical loop of length {} at K = {}\n{file}\n", lp.len(), lg.show_base(&lp.k)),
        json: json!({ "command": "detect-loop", "pass": true, "length": lp.len(), "loop": serde_json::from_str::<Value>(&file)? }),
    })
}

fn synth_from_loop(logic: &Path, loop_file: &Path, out: Option<&Path>) -> Result<Outcome> {
    let lg = io::load_logic(logic)?;
    let lp = io::load_loop(&lg, loop_file)?;
    let sp = BaseSpace::new(lg)?;
    let lg = sp.logic();
    if let Some(o) = failed_or(validate_loop(&sp, &lp), "synth-from-loop")?.err() {
        return Ok(o);
    }
    let op = operator_from_loop(&sp, &lp)?;
    let file = OperatorFile {
        kind: "from_loop".into(),
        fallback: None,
        entries: Vec::new(),
        assignment: None,
        critical_loop: Some(LoopFile::from_loop(lg, &lp)),
    };
    if let Some(p) = out {
        write_file(p, &serde_json::to_string_pretty(&file)?)?;
    }
    let r = postulate_report(&Evaluator::new(&sp, &op), CheckOptions::default())?;
    let ok = r.passes_all(&Postulate::QUASI);
    Ok(Outcome {
        ok,
        text: format!("operator from a loop of length {} at K = {}\n{}", lp.len(), lg.show_base(&lp.k), report_text(lg, &r)),
        json: json!({ "command": "synth-from-loop", "pass": ok, "report": report_json(lg, &r) }),
    })
}

fn tpo(logic: &Path, operator: &Path, base: &str, trace: Option<&Path>) -> Result<Outcome> {
    let (sp, op) = load(logic, operator)?;
    let ev = Evaluator::new(&sp, &op);
    let lg = sp.logic();
    let kb = parse_base(lg, base)?;
    let k = sp.id_of(&kb)?;
    let tr = match to_total_preorder(&ev, k) {
        Err(Error::CriticalLoopPresent(lp)) => {
            let file = io::loop_to_json(lg, &lp);
            return Ok(Outcome {
                ok: false,
                text: format!("failed: critical loop of length {} at K = {}\n{file}\n", lp.len(), lg.show_base(&lp.k)),
                json: json!({ "command": "tpo", "pass": false, "loop": serde_json::from_str::<Value>(&file)? }),
            });
        }
        r => match failed_or(r, "tpo")? {
            Ok(t) => t,
            Err(o) => return Ok(o),
        },
    };
    let trace_json = json!({
        "k": lg.names(&tr.k),
        "step0": io::relation_matrix(&tr.step0),
        "detached": tr.detached.unordered().map(|(a, b)| [labels(lg, ModelSet::singleton(a))[0].clone(), labels(lg, ModelSet::singleton(b))[0].clone()]).collect::<Vec<_>>(),
        "step1": io::relation_matrix(&tr.step1),
        "step2": io::relation_matrix(&tr.step2),
        "step3": io::relation_matrix(&tr.step3),
        "snapshots": tr.snapshots.iter().map(|s| json!({
            "gamma": lg.names(&s.gamma),
            "models": labels(lg, s.models),
            "minima": s.minima.iter().map(|&m| labels(lg, m)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    if let Some(p) = trace {
        write_file(p, &serde_json::to_string_pretty(&trace_json)?)?;
    }
    let ok = tr.minima_agree() && tr.step3.is_total() && tr.step3.is_preorder();
    let mut text = format!(
        "total preorder at K = {} ({} detached pairs), minima {}\n",
        lg.show_base(&kb),
        tr.detached.len(),
        if tr.minima_agree() { "agree on every class" } else { "DIFFER" }
    );
    text += &matrix_text(lg, &tr.step3);
    Ok(Outcome { ok, text, json: json!({ "command": "tpo", "pass": ok, "trace": trace_json }) })
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail(why) => format!("FAIL  {why}"),
        Verdict::NotApplicable(why) => format!("n/a ({why})"),
    }
}

fn verify_instance(logic: &Path, operator: Option<&Path>, theorems: Theorems, samples: u64, seed: u64) -> Result<Outcome> {
    let lg = io::load_logic(logic)?;
    let mut ok = true;
    let mut text = String::new();
    let mut out = json!({ "command": "verify" });
    if theorems != Theorems::Enforcing {
        let Some(operator) = operator else { bail!("--operator is required for the representation checks") };
        let op = io::load_operator(&lg, operator)?;
        let sp = BaseSpace::new(lg.clone())?;
        let rep = check_representation(&Evaluator::new(&sp, &op))?;
        ok &= rep.all_pass_or_na();
        let _ = writeln!(text, "postulates failing: {:?}; loop-free: {}", rep.postulates.failed(), rep.loop_free);
        for (c, v) in &rep.clauses {
            let _ = writeln!(text, "{:<15} {}", format!("{c:?}"), verdict_text(v));
        }
        out["representation"] = json!({
            "postulates": report_json(sp.logic(), &rep.postulates),
            "loop_free": rep.loop_free,
            "clauses": rep.clauses,
        });
    }
    if theorems != Theorems::Representation {
        let r = check_preorder_enforcing(&lg, samples, seed);
        ok &= r.agrees && r.constructed_ok;
        let _ = writeln!(
            text,
            "preorder-enforcing: {} ({} relations, {}), trio-expressible: {}, {}",
            r.preorder_enforcing,
            r.relations_checked,
            if r.exhaustive { "exhaustive" } else { "sampled" },
            r.trio_expressible,
            if r.agrees { "consistent" } else { "MISMATCH" }
        );
        if let Some(w) = &r.witness {
            text += "total min-friendly non-transitive relation:\n";
            text += &matrix_text(&lg, w);
        }
        out["enforcing"] = json!({
            "exhaustive": r.exhaustive,
            "relations_checked": r.relations_checked,
            "preorder_enforcing": r.preorder_enforcing,
            "trio_expressible": r.trio_expressible,
            "agrees": r.agrees,
            "constructed_ok": r.constructed_ok,
            "witness": r.witness.as_ref().map(io::relation_matrix),
        });
    }
    out["pass"] = json!(ok);
    Ok(Outcome { ok, text, json: out })
}

fn sweep(profile: &str, n: u64, seed: u64, kind: SweepKind, junit: Option<&Path>) -> Result<Outcome> {
    let profile: Profile = profile.parse()?;
    if kind == SweepKind::Enforcing {
        let r = verify::enforcing_sweep(profile, n, seed);
        let ok = r.mismatches.is_empty() && r.bad_constructions.is_empty();
        let text = format!(
            "{} logics, {} trio-expressible, {} mismatches, {} bad constructions\n",
            r.logics,
            r.trio_expressible,
            r.mismatches.len(),
            r.bad_constructions.len()
        );
        return Ok(Outcome { ok, text, json: json!({ "command": "sweep", "pass": ok, "report": r }) });
    }
    let outcomes: Vec<_> = (0..n)
        .into_par_iter()
        .map(|i| {
            let s = verify::case_seed(seed, i);
            (s, verify::sweep_case(profile, s))
        })
        .collect();
    let r = verify::aggregate(profile, seed, outcomes);
    if let Some(p) = junit {
        write_file(p, &verify::junit_xml(&r))?;
    }
    let ok = r.violations() == 0;
    let mut text = format!("{} cases, profile {}, seed {seed}\n", r.cases, r.profile);
    for (p, t) in &r.properties {
        let _ = write!(text, "{:<26} passed {:>5}  skipped {:>5}  failed {:>5}", p.to_string(), t.passed, t.skipped, t.failed);
        if let Some((s, msg)) = &t.first_failure {
            let _ = write!(text, "  first at seed {s}: {msg}");
        }
        text.push('\n');
    }
    if let Some((s, msg)) = r.errors.first() {
        let _ = writeln!(text, "{} cases errored, first at seed {s}: {msg}", r.errors.len());
    }
    Ok(Outcome { ok, text, json: json!({ "command": "sweep", "pass": ok, "report": r }) })
}

fn gallery_list() -> Outcome {
    let mut text = String::new();
    let mut entries = Vec::new();
    for name in gallery::list() {
        let e = gallery::load(name).expect("gallery entries load");
        let mut parts = vec![format!("{} interpretations, {} sentences", e.logic.num_interpretations(), e.logic.sentences().len())];
        if e.operator.is_some() {
            parts.push("operator".into());
        }
        if e.assignment.is_some() {
            parts.push("assignment".into());
        }
        for (r, _) in &e.relations {
            parts.push(format!("relation {r}"));
        }
        let _ = writeln!(text, "{name:<10} {}", parts.join(", "));
        entries.push(json!({
            "name": name,
            "interpretations": e.logic.num_interpretations(),
            "sentences": e.logic.sentences().len(),
            "operator": e.operator.is_some(),
            "assignment": e.assignment.is_some(),
            "relations": e.relations.iter().map(|(r, _)| r.clone()).collect::<Vec<_>>(),
        }));
    }
    let reserved = gallery::reserved_infinite();
    let _ = writeln!(text, "reserved (infinite, not loadable): {}", reserved.join(", "));
    Outcome { ok: true, text, json: json!({ "command": "gallery list", "entries": entries, "reserved": reserved }) }
}

/// File name for an entry's operator: `L_Ex` becomes `opEx.json`.
pub fn operator_file_name(name: &str) -> String {
    let stem = name.strip_prefix("L_").or_else(|| name.strip_prefix("B_")).unwrap_or(name);
    format!("op{stem}.json")
}

fn gallery_export(name: &str, dir: &Path) -> Result<Outcome> {
    let e = gallery::load(name)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut emit = |file: String, contents: String| -> Result<()> {
        let p = dir.join(file);
        write_file(&p, &contents)?;
        written.push(p.display().to_string());
        Ok(())
    };
    emit(format!("{name}.json"), io::logic_to_json(&e.logic))?;
    if let Some(op) = &e.operator {
        if let Some(text) = io::operator_to_json(&e.logic, op) {
            emit(operator_file_name(name), text)?;
        }
    }
    if let Some(a) = &e.assignment {
        emit(format!("{name}.assignment.json"), io::assignment_to_json(&e.logic, a))?;
    }
    for (r, rel) in &e.relations {
        emit(format!("{name}.{r}.json"), io::relation_to_json(&e.logic, rel, None))?;
    }
    let text = written.iter().map(|p| format!("wrote {p}\n")).collect();
    Ok(Outcome { ok: true, text, json: json!({ "command": "gallery export", "written": written }) })
}
