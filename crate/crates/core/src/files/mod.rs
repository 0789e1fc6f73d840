//! Line-oriented text files: bispectral triples and verification jobs,
//! plus the bundled examples.

pub mod job;
pub mod triple;
pub mod wavespec;

pub use job::{JobReport, Session, Status, StepReport};
pub use triple::{TripleFile, Witnesses};
pub use wavespec::WaveSpec;

use crate::error::{Error, Result};
use crate::ore::OreRule;
use crate::scalar::{Scalar, Symbol};
use crate::text::parse_operator;

/// Bundled triple files by name.
pub const TRIPLES: [(&str, &str); 6] = [
    ("weyl", include_str!("../../assets/triples/weyl.triple")),
    ("airy", include_str!("../../assets/triples/airy.triple")),
    ("bessel", include_str!("../../assets/triples/bessel.triple")),
    ("q_weyl", include_str!("../../assets/triples/q_weyl.triple")),
    (
        "q_bessel",
        include_str!("../../assets/triples/q_bessel.triple"),
    ),
    (
        "hermite",
        include_str!("../../assets/triples/hermite.triple"),
    ),
];

/// Bundled job files by name.
pub const JOBS: [(&str, &str); 9] = [
    ("ex1_3", include_str!("../../assets/jobs/ex1_3.job")),
    ("ex1_4", include_str!("../../assets/jobs/ex1_4.job")),
    ("ex1_5", include_str!("../../assets/jobs/ex1_5.job")),
    ("ex2_2", include_str!("../../assets/jobs/ex2_2.job")),
    ("ex2_3", include_str!("../../assets/jobs/ex2_3.job")),
    ("ex2_6", include_str!("../../assets/jobs/ex2_6.job")),
    ("ex3_3a", include_str!("../../assets/jobs/ex3_3a.job")),
    ("ex3_3b", include_str!("../../assets/jobs/ex3_3b.job")),
    ("ex3_4", include_str!("../../assets/jobs/ex3_4.job")),
];

pub fn builtin_triple(name: &str) -> Option<&'static str> {
    TRIPLES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn builtin_job(name: &str) -> Option<&'static str> {
    JOBS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// A scalar expression: numbers, parameters, `+ - * / ^`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let op = parse_operator(text, &OreRule::differential("_"))?;
    op.as_scalar()
        .ok_or_else(|| Error::Format(format!("'{}' is not a scalar", text.trim())))
}

/// `differential VAR`, `qdilation VAR Q` or `shift VAR`; the printed form of a rule.
pub fn parse_rule(text: &str) -> Result<OreRule> {
    let words: Vec<&str> = text.split_whitespace().collect();
    match words.as_slice() {
        ["differential", v] => Ok(OreRule::differential(*v)),
        ["shift", v] => Ok(OreRule::shift(*v)),
        ["qdilation", v, q @ ..] if !q.is_empty() => {
            Ok(OreRule::q_dilation(*v, parse_scalar(&q.join(" "))?))
        }
        _ => Err(Error::Format(format!("bad rule '{}'", text.trim()))),
    }
}

/// `name=value` pairs; values are scalar expressions.
pub fn parse_subs<'a>(fields: impl IntoIterator<Item = &'a str>) -> Result<Vec<(Symbol, Scalar)>> {
    fields
        .into_iter()
        .map(|f| {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("expected name=value, got '{}'", f.trim())))?;
            Ok((Symbol::new(k.trim()), parse_scalar(v)?))
        })
        .collect()
}

/// Split `lhs = rhs` at the only `=`.
pub(crate) fn split_eq(text: &str) -> Result<(&str, &str)> {
    let mut parts = text.splitn(3, '=');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(l), Some(r), None) => Ok((l.trim(), r.trim())),
        _ => Err(Error::Format(format!(
            "expected 'lhs = rhs' in '{}'",
            text.trim()
        ))),
    }
}
