//! Job files and the session that runs them.
//!
//! One command per line, `#` starts a comment. Fields after the command
//! head are separated by `;`. Steps are numbered in order of appearance.
//!
//! ```text
//! rule RULE differential x | qdilation x Q | shift n
//! let RULE NAME = EXPR
//! expect RULE LHS = RHS               expect-ne RULE LHS = RHS
//! print RULE EXPR [; dbasis | graded | collected NAME | factored ; F1 ; F2 ...]
//! triple NAME [FILE]                  bundled triple when FILE is omitted
//! begin-triple ... end-triple         inline triple file
//! serialize TRI
//! image TRI NAME = WORD               realize TRI NAME = WORD
//! image-check TRI SRCWORD = TGTWORD
//! relation TRI LHS = RHS              relation-fails TRI LHS = RHS
//! twist-source TRI NEW ; SCALE ; WORD twist-target TRI NEW ; SCALE ; EXPR
//! triple-subst TRI NEW ; a=1 ; ...
//! darboux TRI NAME ; L=W ; P=W ; Q=W ; theta=W ; f=W
//! darboux-op RULE NAME ; L ; P ; Q ; THETA
//! chain RULE NAME ; START ; factor P | Q | THETA ; exchange P | NEXT ...
//! exchange RULE ; A ; B ; A2 ; B2     exchange-fails RULE ; A ; B ; A2 ; B2
//! nilpotent RULE ; L ; PROBE ...
//! inst RULE NEW ; a=1 ; ...
//! wave NAME FAMILY key=value ...
//! wave-act W NEW ; RULE ; EXPR
//! wave-check W ; RULE ; EXPR ; RULE ; EXPR
//! triple-wave TRI [; W]
//! ```
//!
//! A triple `T` registers the rules `T.src` and `T.tgt`, with its generators
//! as named operators. `darboux` stores `Lbar` under NAME in `T.src` and
//! `Lambdabar` under NAME in `T.tgt`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::darboux::{
    check_exchange_identity, darboux_chain, darboux_operators, darboux_transform, ChainStep,
    DarbouxInput, DarbouxResult,
};
use crate::error::{Error, Result};
use crate::ore::{OreOperator, OreRule};
use crate::presented::{substitute_op, GenWord};
use crate::scalar::{Scalar, Symbol};
use crate::text::{format_operator, parse_operator_in, parse_word, OpEnv, Style};
use crate::twist::{check_local_nilpotency, twist_source, AdExp, DEFAULT_MAX_ITER};
use crate::wave::{act, check_pair, check_relation, Residual, Wave};

use super::triple::{generator_defs, TripleFile};
use super::wavespec::WaveSpec;
use super::{builtin_triple, parse_rule, parse_scalar, parse_subs, split_eq};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Malformed step; the job stops here.
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepReport {
    pub index: usize,
    pub line: usize,
    pub command: String,
    pub status: Status,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobReport {
    pub name: String,
    pub steps: Vec<StepReport>,
    /// Index of the step that stopped the job, if any.
    pub aborted_at: Option<usize>,
}

impl JobReport {
    pub fn passed(&self) -> bool {
        self.aborted_at.is_none() && self.steps.iter().all(|s| s.status == Status::Pass)
    }

    /// 0 when every step passes, 2 after a malformed step, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.steps.iter().any(|s| s.status == Status::Error) {
            2
        } else if self.passed() {
            0
        } else {
            1
        }
    }

    fn result(&self) -> &'static str {
        match self.exit_code() {
            0 => "PASS",
            2 => "ERROR",
            _ => "FAIL",
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "job {}", self.name);
        for s in &self.steps {
            let _ = writeln!(
                out,
                "step {} [line {}] {}: {}",
                s.index,
                s.line,
                s.command,
                s.status.as_str()
            );
            for d in &s.details {
                for l in d.lines() {
                    let _ = writeln!(out, "  {l}");
                }
            }
        }
        let _ = match self.aborted_at {
            Some(i) => writeln!(out, "result: {} (stopped at step {i})", self.result()),
            None => writeln!(
                out,
                "result: {} ({} steps)",
                self.result(),
                self.steps.len()
            ),
        };
        out
    }

    /// One `key=value` record per line; `text=` always comes last and runs
    /// to the end of the line.
    pub fn to_structured(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "job={}", self.name);
        for s in &self.steps {
            let _ = writeln!(
                out,
                "step={} line={} status={} command={}",
                s.index,
                s.line,
                s.status.as_str(),
                s.command
            );
            for d in &s.details {
                for l in d.lines() {
                    let _ = writeln!(out, "detail step={} text={}", s.index, l.trim_start());
                }
            }
        }
        let _ = writeln!(
            out,
            "result={} steps={} exit={}{}",
            self.result(),
            self.steps.len(),
            self.exit_code(),
            self.aborted_at
                .map(|i| format!(" stopped={i}"))
                .unwrap_or_default()
        );
        out
    }
}

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn pass(details: Vec<String>) -> Outcome {
        Outcome {
            pass: true,
            details,
        }
    }

    fn check(pass: bool, details: Vec<String>) -> Outcome {
        Outcome { pass, details }
    }
}

/// Named rules, operators, triples and waves, plus the log of executed steps.
#[derive(Clone, Debug, Default)]
pub struct Session {
    rules: BTreeMap<String, OreRule>,
    defs: BTreeMap<String, BTreeMap<String, OreOperator>>,
    triples: BTreeMap<String, TripleFile>,
    waves: BTreeMap<String, Wave>,
    base_dir: Option<PathBuf>,
    log: Vec<StepReport>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

fn fields(text: &str) -> Vec<&str> {
    text.split(';').map(str::trim).collect()
}

/// First whitespace-separated word and the rest.
fn head(text: &str) -> (&str, &str) {
    let t = text.trim();
    match t.split_once(char::is_whitespace) {
        Some((a, b)) => (a, b.trim()),
        None => (t, ""),
    }
}

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    /// Directory against which triple file paths are resolved.
    pub fn with_base_dir(mut self, dir: impl Into<PathBuf>) -> Session {
        self.base_dir = Some(dir.into());
        self
    }

    pub fn log(&self) -> &[StepReport] {
        &self.log
    }

    pub fn rule(&self, name: &str) -> Result<&OreRule> {
        self.rules
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(format!("rule {name}")))
    }

    pub fn operator(&self, rule: &str, name: &str) -> Result<&OreOperator> {
        self.defs
            .get(rule)
            .and_then(|d| d.get(name))
            .ok_or_else(|| Error::UnknownSymbol(format!("{rule}:{name}")))
    }

    /// Named operators of a rule, in name order.
    pub fn operators(&self, rule: &str) -> impl Iterator<Item = (&str, &OreOperator)> {
        self.defs
            .get(rule)
            .into_iter()
            .flatten()
            .map(|(k, v)| (k.as_str(), v))
    }

    pub fn triple(&self, name: &str) -> Result<&TripleFile> {
        self.triples
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(format!("triple {name}")))
    }

    pub fn wave(&self, name: &str) -> Result<&Wave> {
        self.waves
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(format!("wave {name}")))
    }

    pub fn eval(&self, rule: &str, expr: &str) -> Result<OreOperator> {
        let r = self.rule(rule)?;
        let env = match self.defs.get(rule) {
            Some(d) => OpEnv::with_defs(r, d),
            None => OpEnv::new(r),
        };
        parse_operator_in(expr, &env)
    }

    fn add_rule(&mut self, name: &str, rule: OreRule) -> Result<()> {
        if name.is_empty() || name.contains(char::is_whitespace) || name.contains(';') {
            return Err(usage(format!("bad rule name '{name}'")));
        }
        if self.rules.contains_key(name) {
            return Err(usage(format!("rule {name} already exists")));
        }
        self.rules.insert(name.to_string(), rule);
        self.defs.insert(name.to_string(), BTreeMap::new());
        Ok(())
    }

    fn define(&mut self, rule: &str, name: &str, op: OreOperator) -> Result<()> {
        let r = self.rule(rule)?;
        if op.rule() != r {
            return Err(Error::RuleMismatch {
                left: r.to_string(),
                right: op.rule().to_string(),
            });
        }
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(usage(format!("bad operator name '{name}'")));
        }
        if crate::text::eval::RESERVED.contains(&name)
            && self.eval(rule, name).ok().as_ref() != Some(&op)
        {
            return Err(usage(format!("'{name}' is reserved")));
        }
        let defs = self.defs.get_mut(rule).expect("rule has defs");
        if defs.contains_key(name) {
            return Err(usage(format!("{rule}:{name} already exists")));
        }
        defs.insert(name.to_string(), op);
        Ok(())
    }

    /// Register a triple with its two rules `NAME.src`, `NAME.tgt`.
    pub fn load_triple(&mut self, t: TripleFile) -> Result<Vec<String>> {
        let name = t.name.clone();
        if self.triples.contains_key(&name) {
            return Err(usage(format!("triple {name} already exists")));
        }
        let mut details = Vec::new();
        for (suffix, r) in [("src", t.b.source()), ("tgt", t.b.target())] {
            let rule_name = format!("{name}.{suffix}");
            self.add_rule(&rule_name, r.rule().clone())?;
            let gens: Vec<String> = r.generators().map(|g| g.to_string()).collect();
            for (g, op) in generator_defs(r) {
                self.define(&rule_name, &g, op)?;
            }
            details.push(format!(
                "{rule_name}: {} with generators {}",
                r.rule(),
                gens.join(", ")
            ));
        }
        for g in t.b.source().generators() {
            details.push(format!("b({g}) = {}", t.b.generator_image(g)?));
        }
        details.push(format!("relations checked: {}", t.b.relations().len()));
        if let Some(w) = &t.witnesses {
            let tr = t.triple()?;
            details.push(format!("L = {}  ->  f = {}", w.spectral, w.f));
            details.push(format!(
                "theta = {}  ->  Lambda = {}",
                w.theta,
                tr.lambda()?
            ));
        }
        self.triples.insert(name, t);
        Ok(details)
    }

    fn src_gens(&self, tri: &str) -> Result<BTreeSet<Symbol>> {
        Ok(self.triple(tri)?.b.source().generators().collect())
    }

    fn tgt_gens(&self, tri: &str) -> Result<BTreeSet<Symbol>> {
        Ok(self.triple(tri)?.b.target().generators().collect())
    }

    /// Run a whole job; stops at the first step that raises an error.
    pub fn run_job(&mut self, name: &str, text: &str) -> JobReport {
        let mut report = JobReport {
            name: name.to_string(),
            steps: Vec::new(),
            aborted_at: None,
        };
        let lines: Vec<&str> = text.lines().collect();
        let mut i = 0;
        while i < lines.len() {
            let line_no = i + 1;
            let line = lines[i].split('#').next().unwrap_or("").trim();
            i += 1;
            if line.is_empty() {
                continue;
            }
            let index = report.steps.len() + 1;
            let (command, result) = if head(line).0 == "begin-triple" {
                let mut block = Vec::new();
                let mut closed = false;
                while i < lines.len() {
                    let l = lines[i];
                    i += 1;
                    if l.split('#').next().unwrap_or("").trim() == "end-triple" {
                        closed = true;
                        break;
                    }
                    block.push(l);
                }
                let text = block.join("\n");
                let title = match TripleFile::parse(&text) {
                    Ok(t) => format!("triple {} (inline)", t.name),
                    Err(_) => "triple (inline)".to_string(),
                };
                let r = if closed {
                    TripleFile::parse(&text)
                        .map_err(|e| at_block(e, line_no))
                        .and_then(|t| self.load_triple(t))
                        .map(Outcome::pass)
                } else {
                    Err(usage("begin-triple without end-triple"))
                };
                (title, r)
            } else {
                (line.to_string(), self.step(line))
            };
            // Errors stop the job: later steps may depend on the failed one.
            let (status, details, stop) = match result {
                Ok(o) => (
                    if o.pass { Status::Pass } else { Status::Fail },
                    o.details,
                    false,
                ),
                Err(e) => (
                    if e.is_usage() {
                        Status::Error
                    } else {
                        Status::Fail
                    },
                    vec![format!("error: {e}")],
                    true,
                ),
            };
            let step = StepReport {
                index,
                line: line_no,
                command,
                status,
                details,
            };
            self.log.push(step.clone());
            report.steps.push(step);
            if stop {
                report.aborted_at = Some(index);
                break;
            }
        }
        report
    }

    fn step(&mut self, line: &str) -> Result<Outcome> {
        let (cmd, rest) = head(line);
        match cmd {
            "rule" => {
                let (name, spec) = head(rest);
                let r = parse_rule(spec)?;
                self.add_rule(name, r.clone())?;
                Ok(Outcome::pass(vec![format!("{name}: {r}")]))
            }
            "let" => {
                let (rule, def) = head(rest);
                let (name, expr) = split_eq(def)?;
                let op = self.eval(rule, expr)?;
                let text = format!("{name} = {op}");
                self.define(rule, name, op)?;
                Ok(Outcome::pass(vec![text]))
            }
            "expect" | "expect-ne" => {
                let (rule, eq) = head(rest);
                let (l, r) = split_eq(eq)?;
                let a = self.eval(rule, l)?;
                let b = self.eval(rule, r)?;
                let equal = a == b;
                let mut details = vec![format!("lhs = {a}")];
                if !equal {
                    details.push(format!("rhs = {b}"));
                    details.push(format!("lhs - rhs = {}", a.sub(&b)?));
                }
                Ok(Outcome::check(equal == (cmd == "expect"), details))
            }
            "print" => {
                let f = fields(rest);
                let (rule, expr) = head(f[0]);
                let op = self.eval(rule, expr)?;
                let style_word = f.get(1).copied().unwrap_or("canonical");
                let (style_name, style_arg) = head(style_word);
                let text = match style_name {
                    "canonical" => format_operator(&op, &Style::Canonical)?,
                    "dbasis" => format_operator(&op, &Style::DBasis)?,
                    "graded" => format_operator(&op, &Style::Graded)?,
                    "collected" => {
                        let l = self.operator(rule, style_arg)?;
                        format_operator(
                            &op,
                            &Style::Collected {
                                name: style_arg,
                                op: l,
                            },
                        )?
                    }
                    "factored" => {
                        let factors = f[2..]
                            .iter()
                            .map(|e| self.eval(rule, e))
                            .collect::<Result<Vec<_>>>()?;
                        format_operator(&op, &Style::Factored(&factors))?
                    }
                    other => return Err(usage(format!("unknown print style '{other}'"))),
                };
                Ok(Outcome::pass(vec![text]))
            }
            "triple" => {
                let (name, file) = head(rest);
                let text = if file.is_empty() {
                    builtin_triple(name)
                        .ok_or_else(|| usage(format!("no bundled triple '{name}'")))?
                        .to_string()
                } else {
                    let path = match &self.base_dir {
                        Some(d) => d.join(file),
                        None => PathBuf::from(file),
                    };
                    std::fs::read_to_string(&path)
                        .map_err(|e| usage(format!("{}: {e}", path.display())))?
                };
                let t = TripleFile::parse(&text)?;
                if t.name != name {
                    return Err(usage(format!(
                        "file defines triple '{}', not '{name}'",
                        t.name
                    )));
                }
                Ok(Outcome::pass(self.load_triple(t)?))
            }
            "serialize" => {
                let t = self.triple(rest)?;
                let text = t.to_text();
                let again = TripleFile::parse(&text)?;
                let stable = again.to_text() == text;
                let mut details: Vec<String> = text.lines().map(str::to_string).collect();
                if !stable {
                    details.push("re-parsed text differs".into());
                }
                Ok(Outcome::check(stable, details))
            }
            "image" | "realize" => {
                let (tri, def) = head(rest);
                let (name, w) = split_eq(def)?;
                let t = self.triple(tri)?;
                let (op, rule) = if cmd == "image" {
                    (
                        t.b.apply(&parse_word(w, &self.src_gens(tri)?)?)?,
                        format!("{tri}.tgt"),
                    )
                } else {
                    (
                        t.b.source()
                            .realize(&parse_word(w, &self.src_gens(tri)?)?)?,
                        format!("{tri}.src"),
                    )
                };
                let text = format!("{name} = {op}");
                self.define(&rule, name, op)?;
                Ok(Outcome::pass(vec![text]))
            }
            "image-check" => {
                let (tri, eq) = head(rest);
                let (l, r) = split_eq(eq)?;
                let t = self.triple(tri)?;
                let lhs = t.b.apply(&parse_word(l, &self.src_gens(tri)?)?)?;
                let rhs =
                    t.b.target()
                        .realize(&parse_word(r, &self.tgt_gens(tri)?)?)?;
                let mut details = vec![format!("b({l}) = {lhs}")];
                if lhs != rhs {
                    details.push(format!("expected {rhs}"));
                }
                Ok(Outcome::check(lhs == rhs, details))
            }
            "relation" | "relation-fails" => {
                let (tri, eq) = head(rest);
                let (l, r) = split_eq(eq)?;
                let gens = self.src_gens(tri)?;
                let holds = self
                    .triple(tri)?
                    .b
                    .check_relation(&parse_word(l, &gens)?, &parse_word(r, &gens)?)?;
                let details = vec![format!(
                    "relation {}",
                    if holds { "holds" } else { "fails" }
                )];
                Ok(Outcome::check(holds == (cmd == "relation"), details))
            }
            "twist-source" | "twist-target" => {
                let f = fields(rest);
                if f.len() != 3 {
                    return Err(usage(format!("{cmd} TRI NEW ; SCALE ; L")));
                }
                let (tri, new) = head(f[0]);
                let c = parse_scalar(f[1])?;
                let t = self.triple(tri)?;
                let b = if cmd == "twist-source" {
                    twist_source(&t.b, &parse_word(f[2], &self.src_gens(tri)?)?, &c)?
                } else {
                    let l = self.eval(&format!("{tri}.tgt"), f[2])?;
                    t.b.push_twist(AdExp::new(l, c))?
                };
                let nt = t.with_b(new, b);
                Ok(Outcome::pass(self.load_triple(nt)?))
            }
            "triple-subst" => {
                let f = fields(rest);
                let (tri, new) = head(f[0]);
                let subs = parse_subs(f[1..].iter().copied())?;
                let nt = self.triple(tri)?.substitute(new, &subs)?;
                Ok(Outcome::pass(self.load_triple(nt)?))
            }
            "darboux" => self.darboux(rest),
            "darboux-op" => {
                let f = fields(rest);
                if f.len() != 5 {
                    return Err(usage("darboux-op RULE NAME ; L ; P ; Q ; THETA"));
                }
                let (rule, name) = head(f[0]);
                let l = self.eval(rule, f[1])?;
                let p = self.eval(rule, f[2])?;
                let q = self.eval(rule, f[3])?;
                let theta = self.eval(rule, f[4])?;
                let theta = theta.as_scalar().ok_or_else(|| {
                    Error::InvalidOperator(format!("theta = {theta} is not a function"))
                })?;
                let res = darboux_operators(&l, &p, &q, &theta)?;
                let details = darboux_details(&res);
                self.define(rule, name, res.l_bar.clone())?;
                Ok(Outcome::check(res.certified(), details))
            }
            "chain" => {
                let f = fields(rest);
                if f.len() < 2 {
                    return Err(usage("chain RULE NAME ; START ; STEP ..."));
                }
                let (rule, name) = head(f[0]);
                let start = self.eval(rule, f[1])?;
                let mut schedule = Vec::new();
                for s in &f[2..] {
                    let (kind, args) = head(s);
                    let parts: Vec<&str> = args.split('|').map(str::trim).collect();
                    schedule.push(match (kind, parts.as_slice()) {
                        ("factor", [p, q, t]) => {
                            let t = self.eval(rule, t)?;
                            ChainStep::Factor {
                                p: self.eval(rule, p)?,
                                q: self.eval(rule, q)?,
                                theta: t.as_scalar().ok_or_else(|| {
                                    Error::InvalidOperator(format!("theta = {t} is not a function"))
                                })?,
                            }
                        }
                        ("exchange", [p, next]) => ChainStep::Exchange {
                            p: self.eval(rule, p)?,
                            next: self.eval(rule, next)?,
                        },
                        _ => return Err(usage(format!("bad chain step '{s}'"))),
                    });
                }
                let chain = darboux_chain(&start, &schedule)?;
                let mut details = Vec::new();
                for (k, op) in chain.operators.iter().enumerate() {
                    details.push(format!("L{k} = {op}"));
                    if k > 0 {
                        details.push(format!("L{k} = {}", format_operator(op, &Style::Graded)?));
                    }
                }
                let n = chain.operators.len();
                for (k, op) in chain.operators.iter().enumerate().skip(1) {
                    let label = if k + 1 == n {
                        name.to_string()
                    } else {
                        format!("{name}_{k}")
                    };
                    self.define(rule, &label, op.clone())?;
                }
                Ok(Outcome::pass(details))
            }
            "exchange" | "exchange-fails" => {
                let f = fields(rest);
                if f.len() != 5 {
                    return Err(usage(format!("{cmd} RULE ; A ; B ; A2 ; B2")));
                }
                let rule = f[0];
                let ops = f[1..]
                    .iter()
                    .map(|e| self.eval(rule, e))
                    .collect::<Result<Vec<_>>>()?;
                let holds = check_exchange_identity(&ops[0], &ops[1], &ops[2], &ops[3])?;
                let mut details = vec![format!(
                    "A*B = B2*A2 {}",
                    if holds { "holds" } else { "fails" }
                )];
                if !holds {
                    let diff = ops[0].mul(&ops[1])?.sub(&ops[3].mul(&ops[2])?)?;
                    details.push(format!("A*B - B2*A2 = {diff}"));
                }
                Ok(Outcome::check(holds == (cmd == "exchange"), details))
            }
            "nilpotent" => {
                let f = fields(rest);
                if f.len() < 3 {
                    return Err(usage("nilpotent RULE ; L ; PROBE ..."));
                }
                let rule = f[0];
                let l = self.eval(rule, f[1])?;
                let probes = f[2..]
                    .iter()
                    .map(|e| self.eval(rule, e))
                    .collect::<Result<Vec<_>>>()?;
                let idx = check_local_nilpotency(&l, &probes, DEFAULT_MAX_ITER)?;
                let details = f[2..]
                    .iter()
                    .zip(&idx)
                    .map(|(p, i)| match i {
                        Some(n) => format!("(ad L)^{n} ({p}) = 0"),
                        None => format!("({p}): no zero within {DEFAULT_MAX_ITER} commutators"),
                    })
                    .collect();
                Ok(Outcome::check(idx.iter().all(Option::is_some), details))
            }
            "inst" => {
                let f = fields(rest);
                let (rule, new) = head(f[0]);
                let subs = parse_subs(f[1..].iter().copied())?;
                let mut r = self.rule(rule)?.clone();
                for (s, v) in &subs {
                    r = r.substitute(*s, v)?;
                }
                let ops: Vec<(String, OreOperator)> = self
                    .operators(rule)
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect();
                self.add_rule(new, r.clone())?;
                for (k, op) in ops {
                    self.define(new, &k, substitute_op(&op, &subs)?)?;
                }
                Ok(Outcome::pass(vec![format!("{new}: {r}")]))
            }
            "wave" => {
                let (name, spec) = head(rest);
                let spec = WaveSpec::parse(spec)?;
                let w = spec.build()?;
                if self.waves.contains_key(name) {
                    return Err(usage(format!("wave {name} already exists")));
                }
                let details = vec![format!("{spec}: {}", w.describe())];
                self.waves.insert(name.to_string(), w);
                Ok(Outcome::pass(details))
            }
            "wave-act" => {
                let f = fields(rest);
                if f.len() != 3 {
                    return Err(usage("wave-act W NEW ; RULE ; EXPR"));
                }
                let (w, new) = head(f[0]);
                let op = self.eval(f[1], f[2])?;
                let out = act(&op, self.wave(w)?)?;
                if self.waves.contains_key(new) {
                    return Err(usage(format!("wave {new} already exists")));
                }
                let details = vec![out.describe()];
                self.waves.insert(new.to_string(), out);
                Ok(Outcome::pass(details))
            }
            "wave-check" => {
                let f = fields(rest);
                if f.len() != 5 {
                    return Err(usage("wave-check W ; RULE ; A ; RULE ; B"));
                }
                let a = self.eval(f[1], f[2])?;
                let b = self.eval(f[3], f[4])?;
                let r = check_relation(
                    &format!("({}) psi = ({}) psi", f[2], f[4]),
                    self.wave(f[0])?,
                    &a,
                    &b,
                )?;
                Ok(Outcome::check(r.passed(), vec![r.to_string()]))
            }
            "triple-wave" => {
                let f = fields(rest);
                let t = self.triple(f[0])?;
                let w = match f.get(1) {
                    Some(name) => self.wave(name)?.clone(),
                    None => t
                        .wave
                        .as_ref()
                        .ok_or_else(|| usage(format!("triple {} has no wave", t.name)))?
                        .build()?,
                };
                let mut results = Vec::new();
                for g in t.b.source().generators() {
                    let lhs = t.b.source().image(g)?;
                    let rhs = t.b.generator_image(g)?;
                    results.push(check_relation(
                        &format!("{g} psi = b({g}) psi"),
                        &w,
                        lhs,
                        rhs,
                    )?);
                }
                if t.witnesses.is_some() {
                    let tr = t.triple()?;
                    results.extend(check_pair(
                        &tr.spectral_op()?,
                        &tr.f_op()?,
                        &tr.lambda()?,
                        &tr.theta_op()?,
                        &w,
                    )?);
                }
                let pass = results.iter().all(Residual::passed);
                Ok(Outcome::check(
                    pass,
                    results.iter().map(Residual::to_string).collect(),
                ))
            }
            other => Err(usage(format!("unknown command '{other}'"))),
        }
    }

    fn darboux(&mut self, rest: &str) -> Result<Outcome> {
        let f = fields(rest);
        let (tri, name) = head(f[0]);
        let mut parts = BTreeMap::new();
        for s in &f[1..] {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| usage(format!("expected KEY = WORD, got '{s}'")))?;
            parts.insert(k.trim(), v.trim());
        }
        let src = self.src_gens(tri)?;
        let tgt = self.tgt_gens(tri)?;
        let get = |k: &str, gens: &BTreeSet<Symbol>| -> Result<GenWord> {
            parse_word(
                parts
                    .get(k)
                    .ok_or_else(|| usage(format!("darboux needs {k}=")))?,
                gens,
            )
        };
        let t = self.triple(tri)?;
        let input = DarbouxInput {
            b: &t.b,
            l: get("L", &src)?,
            p: get("P", &src)?,
            q: get("Q", &src)?,
            theta: get("theta", &src)?,
            f: get("f", &tgt)?,
        };
        let res = darboux_transform(&input)?;
        let details = darboux_details(&res);
        self.define(&format!("{tri}.src"), name, res.l_bar.clone())?;
        if let Some(lb) = &res.lambda_bar {
            self.define(&format!("{tri}.tgt"), name, lb.clone())?;
        }
        Ok(Outcome::check(res.certified(), details))
    }
}

fn at_block(e: Error, start: usize) -> Error {
    match e {
        Error::AtLine { line, source } => Error::AtLine {
            line: line + start,
            source,
        },
        other => other.at_line(start),
    }
}

fn darboux_details(res: &DarbouxResult) -> Vec<String> {
    let mut d = vec![format!("Lbar = {}", res.l_bar)];
    match (&res.lambda_bar, &res.lambda_reason) {
        (Some(lb), _) => d.push(format!("Lambdabar = {lb}")),
        (None, Some(why)) => d.push(format!("Lambdabar not computed: {why}")),
        (None, None) => {}
    }
    d.push(format!(
        "Lbar has polynomial coefficients: {}",
        if res.l_bar_polynomial() { "yes" } else { "no" }
    ));
    d.extend(res.certificate.iter().map(|i| i.to_string()));
    d
}

/// Run a job in a fresh session.
pub fn run_job(name: &str, text: &str) -> JobReport {
    Session::new().run_job(name, text)
}

/// Scalar helper for callers building substitutions by hand.
pub fn subs(pairs: &[(&str, &str)]) -> Result<Vec<(Symbol, Scalar)>> {
    pairs
        .iter()
        .map(|(k, v)| Ok((Symbol::new(k), parse_scalar(v)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_job_passes() {
        let r = run_job("empty", "# nothing\n\n");
        assert!(r.passed());
        assert_eq!(r.exit_code(), 0);
        assert!(r.steps.is_empty());
        assert_eq!(r.to_text(), "job empty\nresult: PASS (0 steps)\n");
    }

    #[test]
    fn expect_and_exit_codes() {
        let ok = run_job(
            "j",
            "rule w differential x\nlet w A = d^2 - x\nexpect w comm(d, A) = -1\n",
        );
        assert_eq!(ok.exit_code(), 0, "{}", ok.to_text());
        let fail = run_job(
            "j",
            "rule w differential x\nexpect w comm(d, x) = -1\nexpect w 1 = 1\n",
        );
        assert_eq!(fail.exit_code(), 1);
        assert_eq!(fail.steps.len(), 3);
        assert_eq!(fail.steps[1].status, Status::Fail);
        let bad = run_job(
            "j",
            "rule w differential x\nexpect w d^ = 1\nexpect w 1 = 1\n",
        );
        assert_eq!(bad.exit_code(), 2);
        assert_eq!(bad.aborted_at, Some(2));
        let unknown = run_job("j", "expect nope 1 = 1\n");
        assert_eq!(unknown.exit_code(), 2);
    }

    #[test]
    fn algebra_errors_stop_with_exit_one() {
        let r = run_job(
            "j",
            "rule w differential x\nnilpotent w ; D ; x\nexpect w 1 = 1\n",
        );
        assert_eq!(r.exit_code(), 1);
        let r = run_job(
            "j",
            "rule w differential x\ndarboux-op w B ; d^2 ; d ; d ; 0\nexpect w 1 = 1\n",
        );
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.aborted_at, Some(2));
    }

    #[test]
    fn reports_are_deterministic() {
        let job = "rule w differential x\nlet w A = x*d + 1\nprint w A ; dbasis\nwave e exp_xz order=8\nrule z differential z\nwave-check e ; w ; d ; z ; z\n";
        let a = run_job("j", job);
        let b = run_job("j", job);
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.to_structured(), b.to_structured());
        assert!(a.passed(), "{}", a.to_text());
        assert!(a.to_text().contains("\n  D + 1\n"));
    }
}
