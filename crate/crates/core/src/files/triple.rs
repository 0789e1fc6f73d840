//! Triple files.
//!
//! ```text
//! name weyl
//! source differential x
//! target differential z
//! gen source x = x              # operator expressions; earlier generators may be used
//! gen target z = z
//! image x = z                   # words in target generators
//! relation d*x = x*d + 1        # words in source generators, checked on load
//! twist -1/3 ; L                # target twist e^{c ad L'}, L' an expression in the target
//! twist-source 1 ; x^2          # source twist, stored as the equivalent target twist
//! theta = x                     # witnesses, all three or none
//! f = z
//! spectral = x
//! wave exp_xz order=20          # optional joint eigenfunction
//! ```

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::ore::{OreOperator, OreRule};
use crate::presented::{AntiIso, BispectralTriple, GenWord, Realization};
use crate::scalar::{Scalar, Symbol};
use crate::text::eval::RESERVED;
use crate::text::{parse_operator_in, parse_word, OpEnv};
use crate::twist::{twist_source, AdExp};

use super::wavespec::WaveSpec;
use super::{parse_rule, parse_scalar, split_eq};

#[derive(Clone, Debug, PartialEq)]
pub struct Witnesses {
    pub theta: GenWord,
    pub f: GenWord,
    pub spectral: GenWord,
}

#[derive(Clone, Debug)]
pub struct TripleFile {
    pub name: String,
    pub b: AntiIso,
    pub witnesses: Option<Witnesses>,
    pub wave: Option<WaveSpec>,
}

enum Twist {
    Target(String, String),
    Source(String, String),
}

#[derive(Default)]
struct Lines<'a> {
    name: Option<(usize, &'a str)>,
    source: Option<(usize, &'a str)>,
    target: Option<(usize, &'a str)>,
    gens: Vec<(usize, bool, &'a str, &'a str)>,
    images: Vec<(usize, &'a str, &'a str)>,
    relations: Vec<(usize, &'a str, &'a str)>,
    twists: Vec<(usize, Twist)>,
    witness: BTreeMap<&'static str, (usize, &'a str)>,
    wave: Option<(usize, &'a str)>,
}

fn once<'a>(slot: &mut Option<(usize, &'a str)>, n: usize, key: &str, v: &'a str) -> Result<()> {
    if slot.is_some() {
        return Err(Error::Format(format!("duplicate '{key}'")).at_line(n));
    }
    *slot = Some((n, v));
    Ok(())
}

fn scan(text: &str) -> Result<Lines<'_>> {
    let mut out = Lines::default();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let bad = |m: &str| Error::Format(m.to_string()).at_line(n);
        match key {
            "name" => once(&mut out.name, n, key, rest)?,
            "source" => once(&mut out.source, n, key, rest)?,
            "target" => once(&mut out.target, n, key, rest)?,
            "wave" => once(&mut out.wave, n, key, rest)?,
            "gen" => {
                let (side, def) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| bad("expected 'gen SIDE NAME = EXPR'"))?;
                let is_source = match side {
                    "source" => true,
                    "target" => false,
                    _ => return Err(bad("generator side must be 'source' or 'target'")),
                };
                let (g, e) = split_eq(def).map_err(|e| e.at_line(n))?;
                out.gens.push((n, is_source, g, e));
            }
            "image" => {
                let (g, w) = split_eq(rest).map_err(|e| e.at_line(n))?;
                out.images.push((n, g, w));
            }
            "relation" => {
                let (l, r) = split_eq(rest).map_err(|e| e.at_line(n))?;
                out.relations.push((n, l, r));
            }
            "twist" | "twist-source" => {
                let (c, e) = rest
                    .split_once(';')
                    .ok_or_else(|| bad("expected 'twist SCALE ; EXPR'"))?;
                let (c, e) = (c.trim().to_string(), e.trim().to_string());
                out.twists.push((
                    n,
                    if key == "twist" {
                        Twist::Target(c, e)
                    } else {
                        Twist::Source(c, e)
                    },
                ));
            }
            "theta" | "f" | "spectral" => {
                let w = rest
                    .strip_prefix('=')
                    .ok_or_else(|| bad("expected '= WORD'"))?
                    .trim();
                let key: &'static str = match key {
                    "theta" => "theta",
                    "f" => "f",
                    _ => "spectral",
                };
                if out.witness.insert(key, (n, w)).is_some() {
                    return Err(bad("duplicate witness"));
                }
            }
            other => return Err(bad(&format!("unknown keyword '{other}'"))),
        }
    }
    Ok(out)
}

fn required<'a>(slot: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    slot.ok_or_else(|| Error::Format(format!("missing '{key}' line")))
}

fn generator_set(r: &Realization) -> BTreeSet<Symbol> {
    r.generators().collect()
}

/// Generators of a realization as named operators, for expression contexts.
pub fn generator_defs(r: &Realization) -> BTreeMap<String, OreOperator> {
    r.generators()
        .map(|g| (g.to_string(), r.image(g).expect("listed generator").clone()))
        .collect()
}

fn realization(rule: OreRule, gens: &[(usize, &str, &str)]) -> Result<Realization> {
    let mut r = Realization::new(rule.clone());
    let mut defs = BTreeMap::new();
    for &(n, g, e) in gens {
        let at = |err: Error| err.at_line(n);
        if g.is_empty() || !g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(at(Error::Format(format!("'{g}' cannot name a generator"))));
        }
        if defs.contains_key(g) {
            return Err(at(Error::Format(format!("generator '{g}' defined twice"))));
        }
        let op = parse_operator_in(e, &OpEnv::with_defs(&rule, &defs)).map_err(at)?;
        // A reserved token may name a generator only with its own meaning.
        if RESERVED.contains(&g)
            && parse_operator_in(g, &OpEnv::new(&rule)).ok().as_ref() != Some(&op)
        {
            return Err(at(Error::Format(format!(
                "'{g}' is reserved and must be defined as itself"
            ))));
        }
        r.insert(Symbol::new(g), op.clone()).map_err(at)?;
        defs.insert(g.to_string(), op);
    }
    Ok(r)
}

impl TripleFile {
    pub fn parse(text: &str) -> Result<TripleFile> {
        let lines = scan(text)?;
        let (_, name) = required(lines.name, "name")?;
        let (ns, src) = required(lines.source, "source")?;
        let (nt, tgt) = required(lines.target, "target")?;
        let src_rule = parse_rule(src).map_err(|e| e.at_line(ns))?;
        let tgt_rule = parse_rule(tgt).map_err(|e| e.at_line(nt))?;
        if src_rule.var() == tgt_rule.var() {
            return Err(
                Error::Format("source and target need different variables".into()).at_line(nt),
            );
        }
        let side = |s: bool| -> Vec<(usize, &str, &str)> {
            lines
                .gens
                .iter()
                .filter(|g| g.1 == s)
                .map(|&(n, _, g, e)| (n, g, e))
                .collect()
        };
        let source = realization(src_rule, &side(true))?;
        let target = realization(tgt_rule.clone(), &side(false))?;
        let src_gens = generator_set(&source);
        let tgt_gens = generator_set(&target);

        let mut images = BTreeMap::new();
        for &(n, g, w) in &lines.images {
            let s = Symbol::new(g);
            if !src_gens.contains(&s) {
                return Err(Error::UnknownGenerator(g.to_string()).at_line(n));
            }
            let word = parse_word(w, &tgt_gens).map_err(|e| e.at_line(n))?;
            if images.insert(s, word).is_some() {
                return Err(Error::Format(format!("image of '{g}' given twice")).at_line(n));
            }
        }
        let first = lines.images.first().map(|i| i.0).unwrap_or(ns);
        let mut b = AntiIso::new(source, target, images).map_err(|e| e.at_line(first))?;
        for &(n, l, r) in &lines.relations {
            let at = |e: Error| e.at_line(n);
            let lw = parse_word(l, &src_gens).map_err(at)?;
            let rw = parse_word(r, &src_gens).map_err(at)?;
            b.add_relation(lw, rw).map_err(at)?;
        }
        let tgt_defs = generator_defs(b.target());
        for (n, t) in &lines.twists {
            let at = |e: Error| e.at_line(*n);
            b = match t {
                Twist::Target(c, e) => {
                    let c = parse_scalar(c).map_err(at)?;
                    let l = parse_operator_in(e, &OpEnv::with_defs(&tgt_rule, &tgt_defs))
                        .map_err(at)?;
                    b.push_twist(AdExp::new(l, c)).map_err(at)?
                }
                Twist::Source(c, w) => {
                    let c = parse_scalar(c).map_err(at)?;
                    let w = parse_word(w, &src_gens).map_err(at)?;
                    twist_source(&b, &w, &c).map_err(at)?
                }
            };
        }

        let witnesses = match lines.witness.len() {
            0 => None,
            3 => {
                let word = |k: &str, gens: &BTreeSet<Symbol>| {
                    let (n, w) = lines.witness[k];
                    parse_word(w, gens).map_err(|e| e.at_line(n))
                };
                Some(Witnesses {
                    theta: word("theta", &src_gens)?,
                    f: word("f", &tgt_gens)?,
                    spectral: word("spectral", &src_gens)?,
                })
            }
            _ => {
                return Err(Error::Format(
                    "give all of theta, f and spectral, or none".into(),
                ))
            }
        };
        let wave = match lines.wave {
            Some((n, w)) => Some(WaveSpec::parse(w).map_err(|e| e.at_line(n))?),
            None => None,
        };
        let out = TripleFile {
            name: name.to_string(),
            b,
            witnesses,
            wave,
        };
        if let Some((n, _)) = lines.witness.get("spectral") {
            out.triple().map_err(|e| e.at_line(*n))?;
        }
        Ok(out)
    }

    /// The checked triple; requires witnesses.
    pub fn triple(&self) -> Result<BispectralTriple> {
        let w = self.witnesses.as_ref().ok_or_else(|| {
            Error::InvalidOperator(format!("triple {} has no theta, f, spectral", self.name))
        })?;
        BispectralTriple::new(
            &self.name,
            self.b.clone(),
            w.theta.clone(),
            w.f.clone(),
            w.spectral.clone(),
        )
    }

    /// New triple from a modified anti-isomorphism. Witnesses and wave are
    /// dropped: they generally do not survive a twist.
    pub fn with_b(&self, name: &str, b: AntiIso) -> TripleFile {
        TripleFile {
            name: name.to_string(),
            b,
            witnesses: None,
            wave: None,
        }
    }

    /// Substitute parameters everywhere, re-checking relations and witnesses.
    pub fn substitute(&self, name: &str, subs: &[(Symbol, Scalar)]) -> Result<TripleFile> {
        let sub = |w: &GenWord| w.map_coeffs(|c| crate::presented::substitute_scalar(c, subs));
        let witnesses = match &self.witnesses {
            Some(w) => Some(Witnesses {
                theta: sub(&w.theta)?,
                f: sub(&w.f)?,
                spectral: sub(&w.spectral)?,
            }),
            None => None,
        };
        let out = TripleFile {
            name: name.to_string(),
            b: self.b.substitute(subs)?,
            witnesses,
            wave: self.wave.clone(),
        };
        if out.witnesses.is_some() {
            out.triple()?;
        }
        Ok(out)
    }

    /// Text that parses back to an equal triple; twists are written in target form.
    pub fn to_text(&self) -> String {
        let b = &self.b;
        let mut out = vec![
            format!("name {}", self.name),
            format!("source {}", b.source().rule()),
            format!("target {}", b.target().rule()),
        ];
        for (side, r) in [("source", b.source()), ("target", b.target())] {
            for g in r.generators() {
                out.push(format!(
                    "gen {side} {g} = {}",
                    r.image(g).expect("listed generator")
                ));
            }
        }
        for g in b.source().generators() {
            if let Ok(w) = b.image_word(g) {
                out.push(format!("image {g} = {w}"));
            }
        }
        for (l, r) in b.relations() {
            out.push(format!("relation {l} = {r}"));
        }
        for t in b.twists() {
            out.push(format!("twist {} ; {}", t.scale(), t.generator()));
        }
        if let Some(w) = &self.witnesses {
            out.push(format!("theta = {}", w.theta));
            out.push(format!("f = {}", w.f));
            out.push(format!("spectral = {}", w.spectral));
        }
        if let Some(w) = &self.wave {
            out.push(format!("wave {w}"));
        }
        out.push(String::new());
        out.join("\n")
    }
}
