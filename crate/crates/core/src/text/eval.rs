//! Evaluation of parsed expressions into operators or generator words.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::ore::families::{build_named, euler, q_derivative, Family};
use crate::ore::{commutator, formal_conjugate, OreKind, OreOperator, OreRule};
use crate::presented::GenWord;
use crate::scalar::{Scalar, Symbol};
use crate::twist::{ad_power, exp_ad, AdExp};

use super::parse::{parse_expr, Expr};

/// Names reserved for operator symbols.
pub const RESERVED: [&str; 5] = ["d", "D", "Dq", "T", "Tinv"];

/// Evaluation context for operators: the rule, plus named operators.
#[derive(Clone, Debug)]
pub struct OpEnv<'a> {
    pub rule: OreRule,
    pub defs: Option<&'a BTreeMap<String, OreOperator>>,
}

impl<'a> OpEnv<'a> {
    pub fn new(rule: &OreRule) -> OpEnv<'a> {
        OpEnv {
            rule: rule.clone(),
            defs: None,
        }
    }

    pub fn with_defs(rule: &OreRule, defs: &'a BTreeMap<String, OreOperator>) -> OpEnv<'a> {
        OpEnv {
            rule: rule.clone(),
            defs: Some(defs),
        }
    }
}

pub fn parse_operator(text: &str, rule: &OreRule) -> Result<OreOperator> {
    eval_operator(&parse_expr(text)?, &OpEnv::new(rule))
}

pub fn parse_operator_in(text: &str, env: &OpEnv<'_>) -> Result<OreOperator> {
    eval_operator(&parse_expr(text)?, env)
}

fn not_here(name: &str, pos: usize, rule: &OreRule) -> Error {
    Error::Parse {
        pos,
        message: format!(
            "'{name}' is not available for the {} rule",
            rule.generator_name()
        ),
    }
}

fn ident_operator(name: &str, pos: usize, env: &OpEnv<'_>) -> Result<OreOperator> {
    let rule = &env.rule;
    if let Some(op) = env.defs.and_then(|d| d.get(name)) {
        return Ok(op.clone());
    }
    match (name, rule.kind()) {
        ("d", OreKind::Differential) => Ok(OreOperator::generator(rule)),
        ("d", OreKind::QDilation { .. }) => q_derivative(rule),
        ("D", OreKind::Differential | OreKind::QDilation { .. }) => euler(rule),
        ("Dq", OreKind::QDilation { .. }) => Ok(OreOperator::generator(rule)),
        ("T", OreKind::Shift) => Ok(OreOperator::generator(rule)),
        ("Tinv", OreKind::Shift) => OreOperator::generator_pow(rule, -1),
        _ if RESERVED.contains(&name) => Err(not_here(name, pos, rule)),
        _ => Ok(OreOperator::scalar(rule, Scalar::sym(name))),
    }
}

fn scalar_arg(op: &OreOperator, pos: usize) -> Result<Scalar> {
    op.as_scalar().ok_or_else(|| Error::Parse {
        pos,
        message: format!("expected a function, got {op}"),
    })
}

fn integer_arg(e: &Expr, pos: usize) -> Result<i64> {
    match e {
        Expr::Num(n) => i64::try_from(n.clone()).map_err(|_| Error::Parse {
            pos,
            message: "integer too large".into(),
        }),
        _ => Err(Error::Parse {
            pos,
            message: "expected an integer literal".into(),
        }),
    }
}

fn arity(name: &str, args: &[Expr], n: usize, pos: usize) -> Result<()> {
    if args.len() != n {
        return Err(Error::Parse {
            pos,
            message: format!("{name} takes {n} arguments"),
        });
    }
    Ok(())
}

fn call_operator(name: &str, args: &[Expr], pos: usize, env: &OpEnv<'_>) -> Result<OreOperator> {
    let rule = &env.rule;
    let ev = |e: &Expr| eval_operator(e, env);
    let scalars = |es: &[Expr]| -> Result<Vec<Scalar>> {
        es.iter().map(|e| scalar_arg(&ev(e)?, pos)).collect()
    };
    match name {
        "comm" => {
            arity(name, args, 2, pos)?;
            commutator(&ev(&args[0])?, &ev(&args[1])?)
        }
        "ad" => {
            if args.len() != 2 && args.len() != 3 {
                return Err(Error::Parse {
                    pos,
                    message: "ad takes 2 or 3 arguments".into(),
                });
            }
            let n = if args.len() == 3 {
                integer_arg(&args[2], pos)?
            } else {
                1
            };
            if n < 0 {
                return Err(Error::Parse {
                    pos,
                    message: "ad power must be nonnegative".into(),
                });
            }
            ad_power(&ev(&args[0])?, &ev(&args[1])?, n as usize)
        }
        "expad" => {
            arity(name, args, 3, pos)?;
            let c = scalar_arg(&ev(&args[0])?, pos)?;
            exp_ad(&AdExp::new(ev(&args[1])?, c), &ev(&args[2])?)
        }
        "conj" => {
            arity(name, args, 1, pos)?;
            formal_conjugate(&ev(&args[0])?)
        }
        "bessel" => match rule.kind() {
            OreKind::Differential => build_named(
                &Family::Bessel {
                    order: args.len(),
                    beta: scalars(args)?,
                },
                rule,
            ),
            OreKind::QDilation { .. } => build_named(
                &Family::QBessel {
                    order: args.len(),
                    u: scalars(args)?,
                },
                rule,
            ),
            OreKind::Shift => Err(not_here(name, pos, rule)),
        },
        "qbessel" => build_named(
            &Family::QBessel {
                order: args.len(),
                u: scalars(args)?,
            },
            rule,
        ),
        "airy" => {
            let (first, rest) = args.split_first().ok_or_else(|| Error::Parse {
                pos,
                message: "airy needs its order".into(),
            })?;
            let order = integer_arg(first, pos)?;
            if order < 0 {
                return Err(Error::Parse {
                    pos,
                    message: "negative order".into(),
                });
            }
            build_named(
                &Family::Airy {
                    order: order as usize,
                    alpha: scalars(rest)?,
                },
                rule,
            )
        }
        "hermite" => {
            arity(name, args, 0, pos)?;
            build_named(&Family::Hermite, rule)
        }
        _ => Err(Error::UnknownSymbol(format!("function {name} at {pos}"))),
    }
}

pub fn eval_operator(e: &Expr, env: &OpEnv<'_>) -> Result<OreOperator> {
    let rule = &env.rule;
    Ok(match e {
        Expr::Num(n) => OreOperator::scalar(
            rule,
            Scalar::from_q(crate::scalar::Q::from_integer(n.clone())),
        ),
        Expr::Ident(name, pos) => ident_operator(name, *pos, env)?,
        Expr::Neg(a) => eval_operator(a, env)?.neg(),
        Expr::Add(a, b) => eval_operator(a, env)?.add(&eval_operator(b, env)?)?,
        Expr::Sub(a, b) => eval_operator(a, env)?.sub(&eval_operator(b, env)?)?,
        Expr::Mul(a, b) => eval_operator(a, env)?.mul(&eval_operator(b, env)?)?,
        Expr::Div(a, b, pos) => {
            let den = eval_operator(b, env)?;
            let den = den.as_scalar().ok_or_else(|| Error::Parse {
                pos: *pos,
                message: format!("cannot divide by the operator {den}"),
            })?;
            let inv = den.inv().map_err(|_| Error::Parse {
                pos: *pos,
                message: "division by zero".into(),
            })?;
            eval_operator(a, env)?.right_scale(&inv)?
        }
        Expr::Pow(a, k, pos) => {
            let base = eval_operator(a, env)?;
            if *k >= 0 {
                base.pow(*k as u32)?
            } else {
                base.inverse()
                    .map_err(|e| Error::Parse {
                        pos: *pos,
                        message: e.to_string(),
                    })?
                    .pow(k.unsigned_abs() as u32)?
            }
        }
        Expr::Call(name, args, pos) => call_operator(name, args, *pos, env)?,
    })
}

/// Evaluate into a generator word. Identifiers in `gens` are generators, all
/// other identifiers are parameters.
pub fn eval_word(e: &Expr, gens: &BTreeSet<Symbol>) -> Result<GenWord> {
    Ok(match e {
        Expr::Num(n) => GenWord::scalar(Scalar::from_q(crate::scalar::Q::from_integer(n.clone()))),
        Expr::Ident(name, pos) => {
            let s = Symbol::new(name);
            if gens.contains(&s) {
                GenWord::gen(s)
            } else if RESERVED.contains(&name.as_str()) {
                return Err(Error::Parse {
                    pos: *pos,
                    message: format!("'{name}' is not a generator here"),
                });
            } else {
                GenWord::scalar(Scalar::var(s))
            }
        }
        Expr::Neg(a) => eval_word(a, gens)?.neg(),
        Expr::Add(a, b) => eval_word(a, gens)?.add(&eval_word(b, gens)?),
        Expr::Sub(a, b) => eval_word(a, gens)?.sub(&eval_word(b, gens)?),
        Expr::Mul(a, b) => eval_word(a, gens)?.mul(&eval_word(b, gens)?),
        Expr::Div(a, b, pos) => {
            let den = eval_word(b, gens)?;
            let c = word_scalar(&den).ok_or_else(|| Error::Parse {
                pos: *pos,
                message: "cannot divide by a word".into(),
            })?;
            let inv = c.inv().map_err(|_| Error::Parse {
                pos: *pos,
                message: "division by zero".into(),
            })?;
            eval_word(a, gens)?.scale(&inv)
        }
        Expr::Pow(a, k, pos) => {
            let base = eval_word(a, gens)?;
            if *k >= 0 {
                base.pow(*k as u32)
            } else {
                let c = word_scalar(&base).ok_or_else(|| Error::Parse {
                    pos: *pos,
                    message: "negative power of a word".into(),
                })?;
                GenWord::scalar(c.pow(*k)?)
            }
        }
        Expr::Call(name, args, pos) if name == "comm" => {
            arity(name, args, 2, *pos)?;
            let a = eval_word(&args[0], gens)?;
            let b = eval_word(&args[1], gens)?;
            a.mul(&b).sub(&b.mul(&a))
        }
        Expr::Call(name, _, pos) => {
            return Err(Error::Parse {
                pos: *pos,
                message: format!("function {name} is not available for words"),
            })
        }
    })
}

fn word_scalar(w: &GenWord) -> Option<Scalar> {
    let mut it = w.terms();
    match (it.next(), it.next()) {
        (None, _) => Some(Scalar::zero()),
        (Some(([], c)), None) => Some(c.clone()),
        _ => None,
    }
}

pub fn parse_word(text: &str, gens: &BTreeSet<Symbol>) -> Result<GenWord> {
    eval_word(&parse_expr(text)?, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_text() {
        let r = OreRule::differential("x");
        let op = parse_operator("d^2 - x", &r).unwrap();
        assert_eq!(
            op,
            build_named(
                &Family::Airy {
                    order: 2,
                    alpha: vec![]
                },
                &r
            )
            .unwrap()
        );
        assert_eq!(parse_operator("airy(2)", &r).unwrap(), op);
    }

    #[test]
    fn q_cubed_text() {
        let r = OreRule::q_dilation("x", Scalar::sym("q"));
        let op = parse_operator("x^-3*(D-1)*(q^-1*D-1)*(q^-2*D-1)", &r).unwrap();
        assert_eq!(op, q_derivative(&r).unwrap().pow(3).unwrap());
        assert_eq!(parse_operator("d^3", &r).unwrap(), op);
    }

    #[test]
    fn p_of_q_bessel_factorization() {
        let q = Scalar::sym("q");
        let r = OreRule::q_dilation("x", q.clone());
        let op = parse_operator("(1+a*x^2)*D - u*(1+a*q^2*x^2)", &r).unwrap();
        let (a, u, x) = (Scalar::sym("a"), Scalar::sym("u"), Scalar::sym("x"));
        let x2 = &x * &x;
        let c1 = &Scalar::one() + &(&a * &x2);
        let c0 = -(&u * &(&Scalar::one() + &(&(&a * &(&q * &q)) * &x2)));
        assert_eq!(
            op,
            OreOperator::from_terms(&r, vec![(1, c1), (0, c0)]).unwrap()
        );
    }

    #[test]
    fn reserved_names_are_rule_specific() {
        let r = OreRule::differential("x");
        assert!(matches!(parse_operator("Dq", &r), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_operator("d/d", &r),
            Err(Error::Parse { .. })
        ));
        let s = OreRule::shift("n");
        let op = parse_operator("T + n/2*Tinv", &s).unwrap();
        assert_eq!(op.degree(), Some(1));
        assert_eq!(op.low_degree(), Some(-1));
    }

    #[test]
    fn words() {
        let gens: BTreeSet<Symbol> = ["x", "d"].iter().map(|s| Symbol::new(s)).collect();
        let w = parse_word("a*d + x*d + 1 - q", &gens).unwrap();
        assert_eq!(w.generators().len(), 2);
        assert!(parse_word("x/d", &gens).is_err());
        assert_eq!(
            parse_word("comm(d, x)", &gens).unwrap(),
            GenWord::word(&["d", "x"]).sub(&GenWord::word(&["x", "d"]))
        );
    }
}
