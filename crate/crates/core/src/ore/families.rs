//! Built-in operator families.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{OreKind, OreOperator, OreRule};

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `d^N + sum_{i=2}^{N-1} alpha_i d^{N-i} - x`; `alpha` has `N - 2` entries.
    Airy { order: usize, alpha: Vec<Scalar> },
    /// `x^-N (D - beta_1) ... (D - beta_N)` with `D = x d`.
    Bessel { order: usize, beta: Vec<Scalar> },
    /// `x^-N (Dq - u_1) ... (Dq - u_N)`, where `u_i` stands for `q^{beta_i}`.
    QBessel { order: usize, u: Vec<Scalar> },
    /// `d^2 - 2 x d`.
    Hermite,
    /// `x d` for the differential rule, `Dq` for the dilation rule.
    Euler,
    /// `Dq^k`.
    DqPower(u32),
}

fn need(rule: &OreRule, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidOperator(format!(
            "{what} is not defined for the {} rule",
            rule.generator_name()
        )))
    }
}

fn check_len(name: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::InvalidOperator(format!(
            "{name} expects {expected} parameters, got {got}"
        )));
    }
    Ok(())
}

/// The Euler operator of the rule: `x d` or `Dq`.
pub fn euler(rule: &OreRule) -> Result<OreOperator> {
    match rule.kind() {
        OreKind::Differential => OreOperator::main_var(rule).mul(&OreOperator::generator(rule)),
        OreKind::QDilation { .. } => Ok(OreOperator::generator(rule)),
        OreKind::Shift => Err(Error::InvalidOperator(
            "no Euler operator for the shift rule".into(),
        )),
    }
}

/// `x^-1 (Dq - 1)`.
pub fn q_derivative(rule: &OreRule) -> Result<OreOperator> {
    need(rule, rule.q().is_some(), "the q-derivative")?;
    let x_inv = Scalar::var(rule.var()).inv()?;
    let dq = OreOperator::generator(rule);
    Ok(dq.sub(&OreOperator::one(rule))?.scale(&x_inv))
}

/// `x^-N (E - r_1) ... (E - r_N)` for the Euler operator `E`.
pub fn euler_product(rule: &OreRule, roots: &[Scalar]) -> Result<OreOperator> {
    let e = euler(rule)?;
    let mut acc = OreOperator::one(rule);
    for r in roots {
        acc = acc.mul(&e.sub(&OreOperator::scalar(rule, r.clone()))?)?;
    }
    let prefactor = Scalar::var(rule.var()).pow(-(roots.len() as i64))?;
    Ok(acc.scale(&prefactor))
}

pub fn build_named(family: &Family, rule: &OreRule) -> Result<OreOperator> {
    match family {
        Family::Airy { order, alpha } => {
            need(rule, rule.is_differential(), "the Airy operator")?;
            if *order < 2 {
                return Err(Error::InvalidOperator(
                    "Airy order must be at least 2".into(),
                ));
            }
            check_len("airy", order - 2, alpha.len())?;
            let n = *order as i64;
            let mut terms = vec![(n, Scalar::one()), (0, -Scalar::var(rule.var()))];
            for (j, a) in alpha.iter().enumerate() {
                terms.push((n - 2 - j as i64, a.clone()));
            }
            OreOperator::from_terms(rule, terms)
        }
        Family::Bessel { order, beta } => {
            need(rule, rule.is_differential(), "the Bessel operator")?;
            check_len("bessel", *order, beta.len())?;
            euler_product(rule, beta)
        }
        Family::QBessel { order, u } => {
            need(rule, rule.q().is_some(), "the q-Bessel operator")?;
            check_len("qbessel", *order, u.len())?;
            euler_product(rule, u)
        }
        Family::Hermite => {
            need(rule, rule.is_differential(), "the Hermite operator")?;
            let x = Scalar::var(rule.var());
            OreOperator::from_terms(
                rule,
                vec![(2, Scalar::one()), (1, &Scalar::from_int(-2) * &x)],
            )
        }
        Family::Euler => euler(rule),
        Family::DqPower(k) => {
            need(rule, rule.q().is_some(), "a power of Dq")?;
            OreOperator::generator_pow(rule, *k as i64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_zero_one_is_second_derivative() {
        let r = OreRule::differential("x");
        let op = build_named(
            &Family::Bessel {
                order: 2,
                beta: vec![Scalar::zero(), Scalar::one()],
            },
            &r,
        )
        .unwrap();
        assert_eq!(op, OreOperator::term(&r, Scalar::one(), 2));
    }

    #[test]
    fn ordinary_airy() {
        let r = OreRule::differential("x");
        let op = build_named(
            &Family::Airy {
                order: 2,
                alpha: vec![],
            },
            &r,
        )
        .unwrap();
        assert_eq!(op.to_string(), "d^2 - x");
        let bad = build_named(
            &Family::Airy {
                order: 3,
                alpha: vec![],
            },
            &r,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn bessel_three_symbolic() {
        // Oracle: expand x^-3 (D-b1)(D-b2)(D-b3) by hand in the d basis.
        // D = x d, D^2 = x^2 d^2 + x d, D^3 = x^3 d^3 + 3 x^2 d^2 + x d.
        let r = OreRule::differential("x");
        let b: Vec<Scalar> = ["b1", "b2", "b3"].iter().map(|s| Scalar::sym(s)).collect();
        let op = build_named(
            &Family::Bessel {
                order: 3,
                beta: b.clone(),
            },
            &r,
        )
        .unwrap();
        let e1 = &(&b[0] + &b[1]) + &b[2];
        let e2 = &(&(&b[0] * &b[1]) + &(&b[0] * &b[2])) + &(&b[1] * &b[2]);
        let e3 = &(&b[0] * &b[1]) * &b[2];
        let x = Scalar::sym("x");
        // D^3 - e1 D^2 + e2 D - e3
        let c3 = Scalar::one();
        let c2 = &Scalar::from_int(3) - &e1;
        let c1 = &(&Scalar::one() - &e1) + &e2;
        let c0 = -&e3;
        let expected = OreOperator::from_terms(
            &r,
            vec![
                (3, c3),
                (2, &c2 * &x.pow(-1).unwrap()),
                (1, &c1 * &x.pow(-2).unwrap()),
                (0, &c0 * &x.pow(-3).unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(op, expected);
    }

    #[test]
    fn q_derivative_cubed() {
        let q = Scalar::sym("q");
        let r = OreRule::q_dilation("x", q.clone());
        let dq = q_derivative(&r).unwrap();
        let roots = [Scalar::one(), q.clone(), &q * &q];
        // x^-3 (D-1)(q^-1 D-1)(q^-2 D-1) = q^-3 x^-3 (D-1)(D-q)(D-q^2)
        let prod = euler_product(&r, &roots)
            .unwrap()
            .scale(&q.pow(-3).unwrap());
        assert_eq!(dq.pow(3).unwrap(), prod);
    }

    #[test]
    fn hermite_operator() {
        let r = OreRule::differential("x");
        assert_eq!(
            build_named(&Family::Hermite, &r).unwrap().to_string(),
            "d^2 - 2*x*d"
        );
    }
}
