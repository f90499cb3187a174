//! The `hql` command line. Exit codes: 0 holds, 1 refuted, 2 usage or
//! resolution error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{derived_algebra, FiniteAlgebra};
use crate::hypersub::{monoid_elements, Hypersubstitution, MonoidSpec};
use crate::proof::{
    check_proof, hyperclose, normalize, saturate, Justification, Logic, NormalizeOptions, Proof,
    SaturationCaps,
};
use crate::semantics::{
    check_absorption_star, hyper_satisfies_theory_with, hyper_satisfies_with, is_m_solid,
    satisfies_quasi, satisfies_theory, CounterExample, TheorySet, Verdict,
};
use crate::syntax::{dump_hypersub, dump_proof, dump_theory, parse_hypersub, parse_quasi};
use crate::term::{QuasiIdentity, Signature};
use crate::workspace::Workspace;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "hql",
    version,
    about = "Check quasi-identities, hypersubstitutions and proofs over finite algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Definition files, loaded in order.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Print a JSON report.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Formula {
    /// A quasi-identity such as `x = y => mul(x, z) = mul(y, z)`.
    #[arg(long)]
    pub quasi: Option<String>,
    /// A theory name.
    #[arg(long)]
    pub theory: Option<String>,
}

#[derive(Debug, Args)]
pub struct DepthLimit {
    /// Refuse monoids enumerated beyond this image depth.
    #[arg(long, default_value_t = 2)]
    pub max_image_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MonoidAction {
    /// Print the enumerated elements.
    List,
    /// Print the elements as hypersubstitution blocks and an explicit monoid.
    Closure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlainLogic {
    Q,
    Hq,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical satisfaction of a quasi-identity or theory.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        formula: Formula,
    },
    /// Satisfaction of every image under a monoid of hypersubstitutions.
    Hypercheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        formula: Formula,
        #[arg(long)]
        monoid: String,
        #[command(flatten)]
        limit: DepthLimit,
    },
    /// The derived algebra; repeated `--sigma` applies them in order.
    Derive {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        algebra: String,
        /// A hypersubstitution name or an inline `{ f(x, y) -> ...; }` body.
        #[arg(long, required = true)]
        sigma: Vec<String>,
        /// Name of the derived algebra; defaults to the source name.
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check one proof, or all of them.
    VerifyProof {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        proof: Option<String>,
    },
    /// Push hypersubstitution steps up to the hypotheses.
    NormalizeProof {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        proof: String,
        /// Replace GE4 steps by their Q-derivations.
        #[arg(long)]
        expand_ge4: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All images of a theory under a monoid.
    Hyperclose {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theory: String,
        #[arg(long)]
        monoid: String,
        #[command(flatten)]
        limit: DepthLimit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded forward chaining with proofs.
    Saturate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theory: String,
        /// Monoid for MHQ; without it `--logic` is used.
        #[arg(long, conflicts_with = "logic")]
        monoid: Option<String>,
        #[arg(long, value_enum, default_value = "q")]
        logic: PlainLogic,
        #[arg(long, default_value_t = 3)]
        term_depth: usize,
        #[arg(long, default_value_t = 3)]
        premises: usize,
        #[arg(long, default_value_t = 3)]
        iterations: usize,
        #[arg(long, default_value_t = 2000)]
        max_items: usize,
        #[command(flatten)]
        limit: DepthLimit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every derived algebra of every witness satisfies the theory.
    SolidCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theory: String,
        #[arg(long, value_delimiter = ',', required = true)]
        witnesses: Vec<String>,
        #[arg(long)]
        monoid: String,
        #[command(flatten)]
        limit: DepthLimit,
        /// Also check zero absorption of all terms, with this meet symbol.
        #[arg(long, requires = "zero")]
        meet: Option<String>,
        #[arg(long, requires = "meet")]
        zero: Option<String>,
        #[arg(long, default_value_t = 2)]
        star_depth: usize,
        #[arg(long, default_value_t = 2)]
        star_vars: usize,
    },
    /// Inspect a monoid.
    Monoid {
        #[arg(value_enum)]
        action: MonoidAction,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        monoid: String,
        #[command(flatten)]
        limit: DepthLimit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of a command that ran to completion.
struct Report {
    check: &'static str,
    inputs: Value,
    holds: bool,
    text: String,
    witness: Option<Value>,
    extra: Option<(&'static str, Value)>,
}

impl Report {
    fn new(check: &'static str, inputs: Value, holds: bool, text: String) -> Self {
        Report {
            check,
            inputs,
            holds,
            text,
            witness: None,
            extra: None,
        }
    }

    fn json(&self) -> Value {
        let mut v = json!({
            "schema": SCHEMA,
            "check": self.check,
            "inputs": self.inputs,
            "result": if self.holds { "holds" } else { "fails" },
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        if let Some((k, x)) = &self.extra {
            v[*k] = x.clone();
        }
        v
    }
}

type CmdResult = Result<Report, String>;

fn color() -> bool {
    std::env::var("HQL_COLOR")
        .map(|v| v == "1")
        .unwrap_or(false)
}

fn verdict_word(holds: bool) -> String {
    let (word, code) = if holds {
        ("HOLDS", "32")
    } else {
        ("FAILS", "31")
    };
    if color() {
        format!("\x1b[{code}m{word}\x1b[0m")
    } else {
        word.to_string()
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn load(common: &Common) -> Result<Workspace, String> {
    Workspace::from_files(&common.files).map_err(err)
}

fn files_json(common: &Common) -> Value {
    json!(common
        .files
        .iter()
        .map(|f| f.display().to_string())
        .collect::<Vec<_>>())
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<(), String> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(())
}

fn limited_monoid(
    ws: &Workspace,
    name: &str,
    sig: &Signature,
    limit: &DepthLimit,
) -> Result<MonoidSpec, String> {
    let def = ws.monoid(name).map_err(err)?;
    if def.sig != sig.name() {
        return Err(format!(
            "monoid `{name}` is over `{}`, not `{}`",
            def.sig,
            sig.name()
        ));
    }
    if let Some(d) = def.spec.depth_bound() {
        if d > limit.max_image_depth {
            return Err(format!(
                "monoid `{name}` is enumerated up to image depth {d}; pass --max-image-depth {d} to allow it"
            ));
        }
    }
    Ok(def.spec.clone())
}

enum Subject {
    One(QuasiIdentity),
    Theory(TheorySet),
}

fn subject(ws: &Workspace, formula: &Formula, sig: &Signature) -> Result<(Subject, Value), String> {
    if let Some(q) = &formula.quasi {
        let e = parse_quasi(q, sig).map_err(|e| format!("--quasi: {e}"))?;
        let shown = e.to_string();
        Ok((Subject::One(e), json!({ "quasi": shown })))
    } else {
        let name = formula.theory.as_deref().unwrap_or_default();
        let t = ws.theory(name).map_err(err)?;
        if t.sig != *sig {
            return Err(format!(
                "theory `{name}` is over `{}`, not `{}`",
                t.sig.name(),
                sig.name()
            ));
        }
        Ok((Subject::Theory(t.clone()), json!({ "theory": name })))
    }
}

fn witness_json(ws: &Workspace, a: &FiniteAlgebra, c: &CounterExample) -> Value {
    let mut w = serde_json::to_value(c.to_json(a)).unwrap_or(Value::Null);
    if let Some(s) = &c.sigma {
        if let Some(n) = ws.name_of(a.signature(), s) {
            w["sigma_name"] = json!(n);
        }
    }
    w
}

fn verdict_report(
    check: &'static str,
    inputs: Value,
    ws: &Workspace,
    a: &FiniteAlgebra,
    subject: &Subject,
    v: Verdict,
) -> Report {
    match v {
        Verdict::Holds => Report::new(check, inputs, true, format!("{}\n", verdict_word(true))),
        Verdict::Fails(c) => {
            let mut text = format!("{}\n", verdict_word(false));
            if let (Subject::Theory(t), Some(i)) = (subject, c.item) {
                text.push_str(&format!("item {i}: {}\n", t.items[i]));
            }
            if let Some(s) = &c.sigma {
                match ws.name_of(a.signature(), s) {
                    Some(n) => text.push_str(&format!("sigma: {n} {s}\n")),
                    None => text.push_str(&format!("sigma: {s}\n")),
                }
            }
            let vals: Vec<String> = c
                .assignment
                .iter()
                .map(|(v, e)| format!("{v} -> {}", a.label(e)))
                .collect();
            text.push_str(&format!("assignment: {}\n", vals.join(", ")));
            text.push_str(&format!(
                "fails: {} ({} vs {})\n",
                c.failed,
                a.label(c.lhs_value),
                a.label(c.rhs_value)
            ));
            let mut r = Report::new(check, inputs, false, text);
            r.witness = Some(witness_json(ws, a, &c));
            r
        }
    }
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(a), Value::Object(b)) = (a.as_object_mut(), b) {
        a.extend(b);
    }
    a
}

fn cmd_check(common: &Common, algebra: &str, formula: &Formula) -> CmdResult {
    let ws = load(common)?;
    let a = ws.algebra(algebra).map_err(err)?;
    let (s, shown) = subject(&ws, formula, a.signature())?;
    let v = match &s {
        Subject::One(e) => satisfies_quasi(a, e),
        Subject::Theory(t) => satisfies_theory(a, t),
    }
    .map_err(err)?;
    let inputs = merge(
        json!({ "files": files_json(common), "algebra": algebra }),
        shown,
    );
    Ok(verdict_report("check", inputs, &ws, a, &s, v))
}

fn cmd_hypercheck(
    common: &Common,
    algebra: &str,
    formula: &Formula,
    monoid: &str,
    limit: &DepthLimit,
) -> CmdResult {
    let ws = load(common)?;
    let a = ws.algebra(algebra).map_err(err)?;
    let (s, shown) = subject(&ws, formula, a.signature())?;
    let spec = limited_monoid(&ws, monoid, a.signature(), limit)?;
    let elements = monoid_elements(&spec, a.signature()).map_err(err)?;
    let v = match &s {
        Subject::One(e) => hyper_satisfies_with(a, e, &elements),
        Subject::Theory(t) => hyper_satisfies_theory_with(a, t, &elements),
    }
    .map_err(err)?;
    let inputs = merge(
        json!({ "files": files_json(common), "algebra": algebra, "monoid": monoid, "monoid_size": elements.len() }),
        shown,
    );
    let mut r = verdict_report("hypercheck", inputs, &ws, a, &s, v);
    if let Some(d) = spec.depth_bound() {
        r.text
            .push_str(&format!("monoid enumerated up to image depth {d}\n"));
    }
    Ok(r)
}

fn resolve_sigma(ws: &Workspace, sig: &Signature, text: &str) -> Result<Hypersubstitution, String> {
    if text.trim_start().starts_with('{') {
        return parse_hypersub(text, sig).map_err(|e| format!("--sigma: {e}"));
    }
    let h = ws.hypersub(text).map_err(err)?;
    if h.sig != sig.name() {
        return Err(format!(
            "hypersub `{text}` is over `{}`, not `{}`",
            h.sig,
            sig.name()
        ));
    }
    Ok(h.sigma.clone())
}

fn cmd_derive(
    common: &Common,
    algebra: &str,
    sigmas: &[String],
    name: &Option<String>,
    out: &Option<PathBuf>,
) -> CmdResult {
    let ws = load(common)?;
    let mut a = ws.algebra(algebra).map_err(err)?.clone();
    for s in sigmas {
        let sigma = resolve_sigma(&ws, a.signature(), s)?;
        a = derived_algebra(&a, &sigma).map_err(err)?;
    }
    if let Some(n) = name {
        a = a.with_name(n.clone());
    }
    let text = Workspace::render_algebra(&a);
    write_out(out, &text)?;
    let inputs = json!({ "files": files_json(common), "algebra": algebra, "sigma": sigmas });
    let mut r = Report::new("derive", inputs, true, text.clone());
    r.extra = Some(("output", json!(text)));
    Ok(r)
}

fn cmd_verify_proof(common: &Common, proof: &Option<String>) -> CmdResult {
    let ws = load(common)?;
    let proofs: Vec<(&String, &Proof)> = match proof {
        Some(n) => vec![
            (ws.proofs
                .get_key_value(n.as_str())
                .ok_or_else(|| format!("unknown proof `{n}`"))?),
        ],
        None => ws.proofs.iter().collect(),
    };
    if proofs.is_empty() {
        return Err("no proofs in the workspace".to_string());
    }
    let mut text = String::new();
    let mut results = Vec::new();
    let mut first_failure = None;
    for (name, p) in proofs {
        match check_proof(p) {
            Ok(()) => {
                let c = p.conclusion().map(|c| c.to_string()).unwrap_or_default();
                text.push_str(&format!("{name}: ok, {} lines, proves {c}\n", p.len()));
                results.push(json!({ "proof": name, "ok": true, "conclusion": c }));
            }
            Err(e) => {
                text.push_str(&format!("{name}: {e}\n"));
                let w = json!({ "proof": name, "line": e.line, "reason": e.kind.to_string() });
                results.push(json!({ "proof": name, "ok": false, "line": e.line, "reason": e.kind.to_string() }));
                first_failure.get_or_insert(w);
            }
        }
    }
    let holds = first_failure.is_none();
    let text = format!("{}\n{text}", verdict_word(holds));
    let inputs = json!({ "files": files_json(common), "proof": proof });
    let mut r = Report::new("verify-proof", inputs, holds, text);
    r.witness = first_failure;
    r.extra = Some(("proofs", json!(results)));
    Ok(r)
}

/// Gives hypersubstitution steps the names registered in `ws`.
fn name_steps(ws: &Workspace, proof: &mut Proof) {
    let sig = proof.theory.sig.clone();
    for line in &mut proof.lines {
        if let Justification::HypSub { sigma, name, .. } = &mut line.just {
            if name.is_none() {
                *name = ws.name_of(&sig, sigma).map(str::to_string);
            }
        }
    }
}

fn cmd_normalize_proof(
    common: &Common,
    proof: &str,
    expand_ge4: bool,
    out: &Option<PathBuf>,
) -> CmdResult {
    let ws = load(common)?;
    let p = ws.proof(proof).map_err(err)?;
    let inputs = json!({ "files": files_json(common), "proof": proof });
    let mut n = match normalize(p, NormalizeOptions { expand_ge4 }) {
        Ok(n) => n,
        Err(e) => {
            let text = format!("{}\n{proof}: {e}\n", verdict_word(false));
            let mut r = Report::new("normalize-proof", inputs, false, text);
            r.witness = Some(json!({ "line": e.line, "reason": e.kind.to_string() }));
            return Ok(r);
        }
    };
    n.name = Some(format!("{proof}_normal"));
    name_steps(&ws, &mut n);
    let rendered = ws.render_proof(&n);
    write_out(out, &rendered)?;
    let text = format!("{}\n{}", verdict_word(true), dump_proof(&n));
    let mut r = Report::new("normalize-proof", inputs, true, text);
    r.extra = Some(("output", json!(rendered)));
    Ok(r)
}

fn cmd_hyperclose(
    common: &Common,
    theory: &str,
    monoid: &str,
    limit: &DepthLimit,
    out: &Option<PathBuf>,
) -> CmdResult {
    let ws = load(common)?;
    let t = ws.theory(theory).map_err(err)?;
    let spec = limited_monoid(&ws, monoid, &t.sig, limit)?;
    let closed = hyperclose(t, &spec).map_err(err)?;
    let rendered = Workspace::render_theory(&closed);
    write_out(out, &rendered)?;
    let inputs = json!({ "files": files_json(common), "theory": theory, "monoid": monoid });
    let items: Vec<String> = closed.items.iter().map(|e| e.to_string()).collect();
    let mut r = Report::new("hyperclose", inputs, true, dump_theory(&closed));
    r.extra = Some(("items", json!(items)));
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn cmd_saturate(
    common: &Common,
    theory: &str,
    monoid: &Option<String>,
    logic: PlainLogic,
    caps: SaturationCaps,
    limit: &DepthLimit,
    out: &Option<PathBuf>,
) -> CmdResult {
    let ws = load(common)?;
    let t = ws.theory(theory).map_err(err)?;
    let logic = match (monoid, logic) {
        (Some(m), _) => Logic::MHQ {
            monoid: m.clone(),
            spec: limited_monoid(&ws, m, &t.sig, limit)?,
        },
        (None, PlainLogic::Q) => Logic::Q,
        (None, PlainLogic::Hq) => Logic::HQ,
    };
    let s = saturate(t, logic, caps).map_err(err)?;
    let items = TheorySet::new(
        format!("{theory}_saturated"),
        t.sig.clone(),
        s.items.iter().map(|(e, _)| e.clone()),
    )
    .map_err(err)?;
    let mut ledger = s.ledger.clone();
    ledger.name = Some(format!("{theory}_ledger"));
    name_steps(&ws, &mut ledger);
    let rendered = format!("{}{}", ws.render_proof(&ledger), dump_theory(&items));
    write_out(out, &rendered)?;
    let mut text = dump_theory(&items);
    text.push_str(&format!(
        "{} items after {} rounds{}{}\n",
        s.items.len(),
        s.rounds,
        if s.saturated { ", saturated" } else { "" },
        if s.truncated {
            ", truncated at max-items"
        } else {
            ""
        }
    ));
    let inputs = json!({
        "files": files_json(common),
        "theory": theory,
        "logic": ledger.logic.to_string(),
        "caps": {
            "term_depth": caps.term_depth,
            "premises": caps.premise_count,
            "iterations": caps.iterations,
            "max_items": caps.max_items,
        },
    });
    let mut r = Report::new("saturate", inputs, true, text);
    let listed: Vec<String> = items.items.iter().map(|e| e.to_string()).collect();
    r.extra = Some((
        "saturation",
        json!({ "items": listed, "rounds": s.rounds, "saturated": s.saturated, "truncated": s.truncated }),
    ));
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solid_check(
    common: &Common,
    theory: &str,
    witnesses: &[String],
    monoid: &str,
    limit: &DepthLimit,
    star: Option<(&str, &str)>,
    star_depth: usize,
    star_vars: usize,
) -> CmdResult {
    let ws = load(common)?;
    let t = ws.theory(theory).map_err(err)?;
    let algebras = witnesses
        .iter()
        .map(|w| ws.algebra(w).cloned().map_err(err))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = limited_monoid(&ws, monoid, &t.sig, limit)?;
    let report = is_m_solid(t, &algebras, &spec).map_err(err)?;
    let mut text = String::new();
    let mut witness = None;
    text.push_str(&format!(
        "{} witnesses, {} hypersubstitutions{}\n",
        report.witnesses,
        report.monoid_size,
        report
            .depth_bound
            .map(|d| format!(" (enumerated up to image depth {d})"))
            .unwrap_or_default()
    ));
    if let Some(f) = report.failures.first() {
        let a = algebras
            .iter()
            .find(|a| a.name() == f.algebra)
            .expect("failure names a witness");
        text.push_str(&format!(
            "derived algebra of {} under {} fails: {}\n",
            f.algebra,
            f.sigma,
            f.counterexample.describe(a)
        ));
        let mut w = witness_json(&ws, a, &f.counterexample);
        w["algebra"] = json!(f.algebra);
        w["sigma"] = json!(f.sigma.to_string());
        witness = Some(w);
    }
    let mut star_ok = true;
    if let Some((meet, zero)) = star {
        for a in &algebras {
            match check_absorption_star(a, meet, zero, star_depth, star_vars).map_err(err)? {
                None => text.push_str(&format!(
                    "{}: zero absorption holds for terms of depth <= {star_depth}\n",
                    a.name()
                )),
                Some(v) => {
                    star_ok = false;
                    text.push_str(&format!(
                        "{}: {} with {} = {zero} is {}\n",
                        a.name(),
                        v.term,
                        v.position,
                        a.label(v.value)
                    ));
                    witness.get_or_insert(json!({
                        "algebra": a.name(),
                        "term": v.term.to_string(),
                        "position": v.position.to_string(),
                        "value": a.label(v.value),
                    }));
                }
            }
        }
    }
    let holds = report.holds() && star_ok;
    let text = format!("{}\n{text}", verdict_word(holds));
    let inputs = json!({
        "files": files_json(common),
        "theory": theory,
        "witnesses": witnesses,
        "monoid": monoid,
        "monoid_size": report.monoid_size,
    });
    let mut r = Report::new("solid-check", inputs, holds, text);
    r.witness = witness;
    Ok(r)
}

fn cmd_monoid(
    common: &Common,
    action: MonoidAction,
    monoid: &str,
    limit: &DepthLimit,
    out: &Option<PathBuf>,
) -> CmdResult {
    let ws = load(common)?;
    let def = ws.monoid(monoid).map_err(err)?;
    let sig = ws.signature(&def.sig).map_err(err)?;
    let spec = limited_monoid(&ws, monoid, sig, limit)?;
    let elements = monoid_elements(&spec, sig).map_err(err)?;
    let names: Vec<String> = elements
        .iter()
        .enumerate()
        .map(|(i, s)| {
            ws.name_of(sig, s)
                .map(str::to_string)
                .unwrap_or_else(|| format!("{monoid}_{i}"))
        })
        .collect();
    let text = match action {
        MonoidAction::List => {
            let mut text = String::new();
            for (n, s) in names.iter().zip(&elements) {
                text.push_str(&format!("{n} {s}\n"));
            }
            text.push_str(&format!("{} elements\n", elements.len()));
            text
        }
        MonoidAction::Closure => {
            let mut text = crate::syntax::dump_signature(sig);
            for (n, s) in names.iter().zip(&elements) {
                text.push_str(&dump_hypersub(n, sig, s));
            }
            text.push_str(&format!(
                "monoid {monoid}_closed over {} {{ elements {} }}\n",
                sig.name(),
                names.join(", ")
            ));
            write_out(out, &text)?;
            text
        }
    };
    let inputs = json!({ "files": files_json(common), "monoid": monoid });
    let listed: Vec<Value> = names
        .iter()
        .zip(&elements)
        .map(|(n, s)| json!({ "name": n, "sigma": s.to_string() }))
        .collect();
    let mut r = Report::new("monoid", inputs, true, text);
    r.extra = Some(("elements", json!(listed)));
    Ok(r)
}

fn dispatch(cmd: &Command) -> (CmdResult, bool) {
    match cmd {
        Command::Check {
            common,
            algebra,
            formula,
        } => (cmd_check(common, algebra, formula), common.json),
        Command::Hypercheck {
            common,
            algebra,
            formula,
            monoid,
            limit,
        } => (
            cmd_hypercheck(common, algebra, formula, monoid, limit),
            common.json,
        ),
        Command::Derive {
            common,
            algebra,
            sigma,
            name,
            out,
        } => (cmd_derive(common, algebra, sigma, name, out), common.json),
        Command::VerifyProof { common, proof } => (cmd_verify_proof(common, proof), common.json),
        Command::NormalizeProof {
            common,
            proof,
            expand_ge4,
            out,
        } => (
            cmd_normalize_proof(common, proof, *expand_ge4, out),
            common.json,
        ),
        Command::Hyperclose {
            common,
            theory,
            monoid,
            limit,
            out,
        } => (
            cmd_hyperclose(common, theory, monoid, limit, out),
            common.json,
        ),
        Command::Saturate {
            common,
            theory,
            monoid,
            logic,
            term_depth,
            premises,
            iterations,
            max_items,
            limit,
            out,
        } => {
            let caps = SaturationCaps {
                term_depth: *term_depth,
                premise_count: *premises,
                iterations: *iterations,
                max_items: *max_items,
            };
            (
                cmd_saturate(common, theory, monoid, *logic, caps, limit, out),
                common.json,
            )
        }
        Command::SolidCheck {
            common,
            theory,
            witnesses,
            monoid,
            limit,
            meet,
            zero,
            star_depth,
            star_vars,
        } => {
            let star = meet.as_deref().zip(zero.as_deref());
            (
                cmd_solid_check(
                    common,
                    theory,
                    witnesses,
                    monoid,
                    limit,
                    star,
                    *star_depth,
                    *star_vars,
                ),
                common.json,
            )
        }
        Command::Monoid {
            action,
            common,
            monoid,
            limit,
            out,
        } => (cmd_monoid(common, *action, monoid, limit, out), common.json),
    }
}

/// Runs one command and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, errs: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { errs } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (result, as_json) = dispatch(&cli.command);
    match result {
        Ok(r) => {
            let _ = if as_json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&r.json()).unwrap_or_default()
                )
            } else {
                write!(out, "{}", r.text)
            };
            if r.holds {
                0
            } else {
                1
            }
        }
        Err(msg) => {
            if as_json {
                let v = json!({ "schema": SCHEMA, "result": "error", "error": msg });
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&v).unwrap_or_default()
                );
            }
            let _ = writeln!(errs, "hql: {msg}");
            2
        }
    }
}
