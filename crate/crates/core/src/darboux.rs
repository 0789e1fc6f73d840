//! Bispectral Darboux transformations.
//!
//! From `L = Q theta^-1 P` the transformed pair is `Lbar = P Q theta^-1` and
//! `Lambdabar = b(P) b(Q) f^-1`. Factorizations are always inputs.

use std::fmt;

use crate::error::{Error, Result};
use crate::ore::OreOperator;
use crate::presented::{AntiIso, GenWord};
use crate::scalar::Scalar;

/// An identity `lhs = rhs` recorded together with both expanded sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub label: String,
    pub lhs: OreOperator,
    pub rhs: OreOperator,
}

impl Identity {
    fn new(label: &str, lhs: OreOperator, rhs: OreOperator) -> Identity {
        Identity {
            label: label.to_string(),
            lhs,
            rhs,
        }
    }

    /// Re-expand and compare.
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}",
            self.label,
            if self.holds() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug)]
pub struct DarbouxResult {
    pub l_bar: OreOperator,
    pub lambda_bar: Option<OreOperator>,
    /// Why `lambda_bar` is absent.
    pub lambda_reason: Option<String>,
    pub certificate: Vec<Identity>,
}

impl DarbouxResult {
    pub fn certified(&self) -> bool {
        self.certificate.iter().all(Identity::holds)
    }

    /// Whether `Lbar` has polynomial coefficients; informational only.
    pub fn l_bar_polynomial(&self) -> bool {
        self.l_bar.has_polynomial_coefficients()
    }
}

fn inverse_function(theta: &Scalar, rule: &crate::ore::OreRule) -> Result<OreOperator> {
    if theta.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(OreOperator::scalar(rule, theta.inv()?))
}

/// `Q theta^-1 P = L`.
pub fn verify_factorization(
    p: &OreOperator,
    q: &OreOperator,
    theta: &Scalar,
    l: &OreOperator,
) -> Result<bool> {
    let t_inv = inverse_function(theta, p.rule())?;
    Ok(&q.mul(&t_inv)?.mul(p)? == l)
}

/// Operator-level transform: `Lbar = P Q theta^-1` with the factorization and
/// intertwining `Lbar P = P L` certified. No spectral side.
pub fn darboux_operators(
    l: &OreOperator,
    p: &OreOperator,
    q: &OreOperator,
    theta: &Scalar,
) -> Result<DarbouxResult> {
    let t_inv = inverse_function(theta, l.rule())?;
    let product = q.mul(&t_inv)?.mul(p)?;
    if &product != l {
        return Err(Error::FactorizationFailed);
    }
    let l_bar = p.mul(q)?.mul(&t_inv)?;
    let certificate = vec![
        Identity::new("factorization", product, l.clone()),
        Identity::new("intertwining", l_bar.mul(p)?, p.mul(l)?),
    ];
    Ok(DarbouxResult {
        l_bar,
        lambda_bar: None,
        lambda_reason: Some("no anti-isomorphism supplied".into()),
        certificate,
    })
}

/// Word-level input over a presented anti-isomorphism.
#[derive(Clone, Debug)]
pub struct DarbouxInput<'a> {
    pub b: &'a AntiIso,
    pub l: GenWord,
    pub p: GenWord,
    pub q: GenWord,
    pub theta: GenWord,
    pub f: GenWord,
}

pub fn darboux_transform(input: &DarbouxInput<'_>) -> Result<DarbouxResult> {
    let b = input.b;
    let src = b.source();
    let tgt = b.target();
    let theta = src.realize(&input.theta)?;
    let theta_fn = theta
        .as_scalar()
        .ok_or_else(|| Error::InvalidOperator(format!("theta = {theta} is not a function")))?;
    let f = tgt.realize(&input.f)?;
    let f_fn = f
        .as_scalar()
        .ok_or_else(|| Error::InvalidOperator(format!("f = {f} is not a function")))?;
    let l = src.realize(&input.l)?;
    let b_l = b.apply(&input.l)?;
    if b_l != f {
        return Err(Error::SpectralMismatch(format!("b(L) = {b_l}, f = {f}")));
    }
    let p = src.realize(&input.p)?;
    let q = src.realize(&input.q)?;
    let mut result = darboux_operators(&l, &p, &q, &theta_fn)?;

    let bp = b.apply(&input.p)?;
    let bq = b.apply(&input.q)?;
    let f_inv = inverse_function(&f_fn, tgt.rule())?;
    let lambda = b.apply(&input.theta)?;
    let lambda_bar = bp.mul(&bq)?.mul(&f_inv)?;
    result.certificate.push(Identity::new("spectral", b_l, f));
    result.certificate.push(Identity::new(
        "lambda",
        lambda.clone(),
        bq.mul(&f_inv)?.mul(&bp)?,
    ));
    result.certificate.push(Identity::new(
        "intertwining-target",
        lambda_bar.mul(&bp)?,
        bp.mul(&lambda)?,
    ));
    result.lambda_bar = Some(lambda_bar);
    result.lambda_reason = None;
    Ok(result)
}

/// One step of a chain.
#[derive(Clone, Debug)]
pub enum ChainStep {
    /// `L = Q theta^-1 P`, giving `Lbar = P Q theta^-1`.
    Factor {
        p: OreOperator,
        q: OreOperator,
        theta: Scalar,
    },
    /// A claimed `Lbar` with `Lbar P = P L`.
    Exchange { p: OreOperator, next: OreOperator },
}

#[derive(Clone, Debug)]
pub struct Chain {
    /// `operators[0]` is the starting operator, `operators[i]` the result of step `i`.
    pub operators: Vec<OreOperator>,
    pub steps: Vec<DarbouxResult>,
}

impl Chain {
    pub fn last(&self) -> &OreOperator {
        self.operators.last().expect("chain holds its start")
    }
}

pub fn darboux_chain(start: &OreOperator, schedule: &[ChainStep]) -> Result<Chain> {
    let mut chain = Chain {
        operators: vec![start.clone()],
        steps: Vec::new(),
    };
    for (i, step) in schedule.iter().enumerate() {
        let cur = chain.last().clone();
        let res = match step {
            ChainStep::Factor { p, q, theta } => darboux_operators(&cur, p, q, theta),
            ChainStep::Exchange { p, next } => exchange_step(&cur, p, next),
        }
        .map_err(|e| Error::ChainStep {
            index: i + 1,
            source: Box::new(e),
        })?;
        chain.operators.push(res.l_bar.clone());
        chain.steps.push(res);
    }
    Ok(chain)
}

fn exchange_step(l: &OreOperator, p: &OreOperator, next: &OreOperator) -> Result<DarbouxResult> {
    let id = Identity::new("intertwining", next.mul(p)?, p.mul(l)?);
    if !id.holds() {
        return Err(Error::RelationFailed("Lbar P = P L".into()));
    }
    Ok(DarbouxResult {
        l_bar: next.clone(),
        lambda_bar: None,
        lambda_reason: Some("exchange step has no factorization".into()),
        certificate: vec![id],
    })
}

/// `A B = B' A'`.
pub fn check_exchange_identity(
    a: &OreOperator,
    b: &OreOperator,
    a2: &OreOperator,
    b2: &OreOperator,
) -> Result<bool> {
    Ok(a.mul(b)? == b2.mul(a2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::families::{euler_product, q_derivative};
    use crate::ore::OreRule;

    #[test]
    fn trivial_factorization() {
        let r = OreRule::differential("x");
        let one = OreOperator::one(&r);
        assert!(verify_factorization(&one, &one, &Scalar::one(), &one).unwrap());
        let l = OreOperator::generator(&r).pow(2).unwrap();
        let res = darboux_operators(&l, &one, &l, &Scalar::one()).unwrap();
        assert_eq!(res.l_bar, l);
        assert!(res.certified());
        assert!(matches!(
            verify_factorization(&one, &one, &Scalar::zero(), &one),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn exchange_trivial() {
        let r = OreRule::differential("x");
        let one = OreOperator::one(&r);
        assert!(check_exchange_identity(&one, &one, &one, &one).unwrap());
    }

    #[test]
    fn q_cubed_single_step() {
        let q = Scalar::sym("q");
        let r = OreRule::q_dilation("x", q.clone());
        let l = q_derivative(&r).unwrap().pow(3).unwrap();
        let qp = |k: i64| q.pow(k).unwrap();
        let dq = OreOperator::generator(&r);
        let lin = |c: Scalar| dq.scale(&c).sub(&OreOperator::one(&r)).unwrap();
        let (a, b, c) = (0, 1, 2);
        let big_q = lin(qp(3 - a)).mul(&lin(qp(3 - b))).unwrap();
        let p = lin(qp(-c));
        let x3 = Scalar::sym("x").pow(3).unwrap();
        let res = darboux_operators(&l, &p, &big_q, &x3).unwrap();
        assert!(res.certified());
        // x^-3 (q^-a D - 1)(q^-b D - 1)(q^{-c-3} D - 1)
        let roots = [qp(a), qp(b), qp(c + 3)];
        let scale = &(&qp(-a) * &qp(-b)) * &qp(-c - 3);
        let expected = euler_product(&r, &roots).unwrap().scale(&scale);
        assert_eq!(res.l_bar, expected);
    }

    #[test]
    fn chain_reports_failing_step() {
        let r = OreRule::differential("x");
        let l = OreOperator::generator(&r).pow(2).unwrap();
        let one = OreOperator::one(&r);
        let chain = darboux_chain(&l, &[]).unwrap();
        assert_eq!(chain.operators, vec![l.clone()]);
        let bad = ChainStep::Factor {
            p: one.clone(),
            q: one.clone(),
            theta: Scalar::one(),
        };
        let good = ChainStep::Factor {
            p: one.clone(),
            q: l.clone(),
            theta: Scalar::one(),
        };
        match darboux_chain(&l, &[good, bad]) {
            Err(Error::ChainStep { index, .. }) => assert_eq!(index, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
