//! Canonical printing in the generator basis and in Euler-operator bases.

use crate::error::{Error, Result};
use crate::ore::dbasis::{collect_powers, graded, to_d_basis, DPoly};
use crate::ore::OreOperator;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub enum Style<'a> {
    /// `a_k(x)*X^k + ...` by descending `k`; the `Display` form.
    Canonical,
    /// `b_m(x)*D^m + ...` with the Euler operator `D`.
    DBasis,
    /// `x^d*(p_d(D)) + ...` by ascending x-degree.
    Graded,
    /// Graded, with powers of a homogeneous operator collected under a name.
    Collected { name: &'a str, op: &'a OreOperator },
    /// Product of the given factors, after checking that it equals the operator.
    Factored(&'a [OreOperator]),
}

/// Join signed terms as `a + b - c`.
pub(crate) fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        match (i, t.strip_prefix('-')) {
            (0, _) => out.push_str(t),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

/// `c*g`, omitting unit coefficients and bracketing sums.
pub(crate) fn coeff_times(c: &Scalar, g: &str) -> String {
    if g.is_empty() {
        c.to_string()
    } else if c.is_one() {
        g.to_string()
    } else if (-c).is_one() {
        format!("-{g}")
    } else if c.is_sum() {
        format!("({c})*{g}")
    } else {
        format!("{c}*{g}")
    }
}

fn power_name(base: &str, k: i64) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

fn dpoly_terms(p: &DPoly) -> Vec<String> {
    p.coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| coeff_times(c, &power_name("D", m as i64)))
        .collect()
}

pub fn format_dpoly(p: &DPoly) -> String {
    join_terms(&dpoly_terms(p))
}

/// `x^d` times `p(D)`.
fn graded_term(var: &str, d: i64, p: &DPoly) -> String {
    let xd = power_name(var, d);
    let terms = dpoly_terms(p);
    if xd.is_empty() {
        return join_terms(&terms);
    }
    if terms.len() == 1 {
        let m = p.degree().unwrap_or(0) as i64;
        let c = p.coeff(m as usize);
        let dm = power_name("D", m);
        let g = if dm.is_empty() {
            xd
        } else {
            format!("{xd}*{dm}")
        };
        return coeff_times(&c, &g);
    }
    format!("{xd}*({})", join_terms(&terms))
}

pub fn format_operator(a: &OreOperator, style: &Style<'_>) -> Result<String> {
    let var = a.rule().var().as_str();
    match style {
        Style::Canonical => Ok(a.to_string()),
        Style::DBasis => {
            let b = to_d_basis(a)?;
            let terms: Vec<String> = b
                .iter()
                .rev()
                .map(|(m, c)| coeff_times(c, &power_name("D", *m as i64)))
                .collect();
            Ok(join_terms(&terms))
        }
        Style::Graded => {
            let g = graded(a)?;
            let terms: Vec<String> = g.iter().map(|(d, p)| graded_term(var, *d, p)).collect();
            Ok(join_terms(&terms))
        }
        Style::Collected { name, op } => {
            let col = collect_powers(a, op)?;
            let mut terms = Vec::new();
            for (j, c) in &col.powers {
                let lj = power_name(name, *j as i64);
                let t = if c.degree() == Some(0) {
                    coeff_times(&c.coeff(0), &lj)
                } else {
                    format!("({})*{lj}", format_dpoly(c))
                };
                terms.push(t);
            }
            for (d, p) in &col.rest {
                if *d == 0 {
                    terms.extend(dpoly_terms(p));
                } else {
                    terms.push(graded_term(var, *d, p));
                }
            }
            Ok(join_terms(&terms))
        }
        Style::Factored(factors) => {
            let mut prod = OreOperator::one(a.rule());
            for f in factors.iter() {
                prod = prod.mul(f)?;
            }
            if &prod != a {
                return Err(Error::InvalidOperator(
                    "factors do not multiply to the operator".into(),
                ));
            }
            Ok(factors
                .iter()
                .map(|f| format!("({f})"))
                .collect::<Vec<_>>()
                .join("*"))
        }
    }
}
