//! Normal-form operators `sum a_k(x) X^k` in one-generator Ore algebras.
//!
//! Supported commutation rules `X a = sigma(a) X + delta(a)`:
//!
//! | rule          | X     | sigma        | delta  |
//! |---------------|-------|--------------|--------|
//! | differential  | `d`   | identity     | d/dx   |
//! | q-dilation    | `Dq`  | x -> q x     | 0      |
//! | shift         | `T`   | n -> n + 1   | 0      |
//!
//! Coefficients sit to the left of generator powers. Only the shift rule
//! admits negative powers.

pub mod dbasis;
pub mod families;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Symbol, Q};

pub use families::{build_named, Family};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum OreKind {
    Differential,
    QDilation { q: Scalar },
    Shift,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OreRule {
    var: Symbol,
    kind: OreKind,
}

impl OreRule {
    pub fn differential(var: impl Into<Symbol>) -> OreRule {
        OreRule {
            var: var.into(),
            kind: OreKind::Differential,
        }
    }

    pub fn q_dilation(var: impl Into<Symbol>, q: Scalar) -> OreRule {
        OreRule {
            var: var.into(),
            kind: OreKind::QDilation { q },
        }
    }

    pub fn shift(var: impl Into<Symbol>) -> OreRule {
        OreRule {
            var: var.into(),
            kind: OreKind::Shift,
        }
    }

    pub fn var(&self) -> Symbol {
        self.var
    }

    pub fn kind(&self) -> &OreKind {
        &self.kind
    }

    pub fn is_differential(&self) -> bool {
        matches!(self.kind, OreKind::Differential)
    }

    pub fn q(&self) -> Option<&Scalar> {
        match &self.kind {
            OreKind::QDilation { q } => Some(q),
            _ => None,
        }
    }

    pub fn invertible_generator(&self) -> bool {
        matches!(self.kind, OreKind::Shift)
    }

    pub fn generator_name(&self) -> &'static str {
        match self.kind {
            OreKind::Differential => "d",
            OreKind::QDilation { .. } => "Dq",
            OreKind::Shift => "T",
        }
    }

    /// Same rule with a renamed main variable.
    pub fn with_var(&self, var: Symbol) -> OreRule {
        OreRule {
            var,
            kind: self.kind.clone(),
        }
    }

    /// `sigma^k(a)`; negative `k` needs an invertible sigma.
    pub fn sigma_pow(&self, a: &Scalar, k: i64) -> Result<Scalar> {
        if k == 0 {
            return Ok(a.clone());
        }
        match &self.kind {
            OreKind::Differential => Ok(a.clone()),
            OreKind::QDilation { q } => {
                let image = &q.pow(k)? * &Scalar::var(self.var);
                a.substitute(self.var, &image)
            }
            OreKind::Shift => Ok(a.shift(self.var, k)),
        }
    }

    pub fn sigma(&self, a: &Scalar) -> Scalar {
        self.sigma_pow(a, 1)
            .expect("forward sigma is always defined")
    }

    pub fn delta(&self, a: &Scalar) -> Scalar {
        match self.kind {
            OreKind::Differential => a.derivative(self.var),
            _ => Scalar::zero(),
        }
    }

    pub fn instantiate(&self, values: &[(Symbol, Q)]) -> Result<OreRule> {
        Ok(match &self.kind {
            OreKind::QDilation { q } => OreRule::q_dilation(self.var, q.instantiate(values)?),
            _ => self.clone(),
        })
    }

    pub fn substitute(&self, s: Symbol, value: &Scalar) -> Result<OreRule> {
        Ok(match &self.kind {
            OreKind::QDilation { q } => OreRule::q_dilation(self.var, q.substitute(s, value)?),
            _ => self.clone(),
        })
    }
}

impl fmt::Display for OreRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OreKind::Differential => write!(f, "differential {}", self.var),
            OreKind::QDilation { q } => write!(f, "qdilation {} {}", self.var, q),
            OreKind::Shift => write!(f, "shift {}", self.var),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OreOperator {
    rule: OreRule,
    terms: BTreeMap<i64, Scalar>,
}

fn binomial(n: i64, k: i64) -> Q {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

impl OreOperator {
    pub fn zero(rule: &OreRule) -> OreOperator {
        OreOperator {
            rule: rule.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rule: &OreRule) -> OreOperator {
        OreOperator::scalar(rule, Scalar::one())
    }

    pub fn scalar(rule: &OreRule, c: Scalar) -> OreOperator {
        OreOperator::term(rule, c, 0)
    }

    /// `c * X^k`.
    pub fn term(rule: &OreRule, c: Scalar, k: i64) -> OreOperator {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        OreOperator {
            rule: rule.clone(),
            terms,
        }
    }

    /// The main variable as a multiplication operator.
    pub fn main_var(rule: &OreRule) -> OreOperator {
        OreOperator::scalar(rule, Scalar::var(rule.var))
    }

    pub fn generator(rule: &OreRule) -> OreOperator {
        OreOperator::term(rule, Scalar::one(), 1)
    }

    pub fn generator_pow(rule: &OreRule, k: i64) -> Result<OreOperator> {
        if k < 0 && !rule.invertible_generator() {
            return Err(Error::InvalidOperator(format!(
                "negative power of {} is not in the algebra",
                rule.generator_name()
            )));
        }
        Ok(OreOperator::term(rule, Scalar::one(), k))
    }

    /// Build from `(power, coefficient)` pairs, merging repeated powers.
    pub fn from_terms(
        rule: &OreRule,
        terms: impl IntoIterator<Item = (i64, Scalar)>,
    ) -> Result<OreOperator> {
        let mut out = OreOperator::zero(rule);
        for (k, c) in terms {
            if k < 0 && !rule.invertible_generator() {
                return Err(Error::InvalidOperator(format!(
                    "negative power of {} is not in the algebra",
                    rule.generator_name()
                )));
            }
            out.add_term(k, &c);
        }
        Ok(out)
    }

    fn add_term(&mut self, k: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_default();
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn rule(&self) -> &OreRule {
        &self.rule
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Highest power of the generator; `None` for the zero operator.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.terms.values().next_back().cloned().unwrap_or_default()
    }

    /// True for multiplication operators (only a power-zero term).
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|k| *k == 0)
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.is_scalar() {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    /// Every coefficient is a polynomial (no denominators at all).
    pub fn has_polynomial_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_polynomial())
    }

    fn check_rule(&self, other: &OreOperator) -> Result<()> {
        if self.rule != other.rule {
            return Err(Error::RuleMismatch {
                left: self.rule.to_string(),
                right: other.rule.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &OreOperator) -> Result<OreOperator> {
        self.check_rule(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OreOperator) -> Result<OreOperator> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> OreOperator {
        OreOperator {
            rule: self.rule.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    /// Left multiplication by a scalar.
    pub fn scale(&self, c: &Scalar) -> OreOperator {
        if c.is_zero() {
            return OreOperator::zero(&self.rule);
        }
        OreOperator {
            rule: self.rule.clone(),
            terms: self.terms.iter().map(|(k, a)| (*k, c * a)).collect(),
        }
    }

    /// Ring product in normal form.
    pub fn mul(&self, other: &OreOperator) -> Result<OreOperator> {
        self.check_rule(other)?;
        let mut out = OreOperator::zero(&self.rule);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        match self.rule.kind {
            OreKind::Differential => {
                let max_i = self.degree().unwrap_or(0);
                for (j, b) in &other.terms {
                    // Leibniz: d^i b = sum_k C(i,k) b^(k) d^(i-k).
                    let mut derivs = vec![b.clone()];
                    for _ in 0..max_i {
                        let next = self.rule.delta(derivs.last().unwrap());
                        if next.is_zero() {
                            break;
                        }
                        derivs.push(next);
                    }
                    for (i, a) in &self.terms {
                        for (k, dk) in derivs.iter().enumerate().take(*i as usize + 1) {
                            let k = k as i64;
                            let c = (a * dk).scale_q(&binomial(*i, k));
                            out.add_term(i - k + j, &c);
                        }
                    }
                }
            }
            _ => {
                for (i, a) in &self.terms {
                    for (j, b) in &other.terms {
                        let c = a * &self.rule.sigma_pow(b, *i)?;
                        out.add_term(i + j, &c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product computed by commuting one generator at a time with
    /// `X c = sigma(c) X + delta(c)`. Slower; kept as an independent route.
    pub fn mul_generic(&self, other: &OreOperator) -> Result<OreOperator> {
        self.check_rule(other)?;
        let mut out = OreOperator::zero(&self.rule);
        for (i, a) in &self.terms {
            let mut cur = other.clone();
            for _ in 0..i.unsigned_abs() {
                let mut next = OreOperator::zero(&self.rule);
                for (k, c) in &cur.terms {
                    if *i > 0 {
                        next.add_term(k + 1, &self.rule.sigma(c));
                        next.add_term(*k, &self.rule.delta(c));
                    } else {
                        next.add_term(k - 1, &self.rule.sigma_pow(c, -1)?);
                    }
                }
                cur = next;
            }
            out = out.add(&cur.scale(a))?;
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<OreOperator> {
        let mut acc = OreOperator::one(&self.rule);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Right multiplication by a scalar.
    pub fn right_scale(&self, c: &Scalar) -> Result<OreOperator> {
        self.mul(&OreOperator::scalar(&self.rule, c.clone()))
    }

    /// Inverse of a unit: a nonzero scalar, or `c T^k` in the shift algebra.
    pub fn inverse(&self) -> Result<OreOperator> {
        if self.terms.len() != 1 {
            return Err(Error::InvalidOperator(format!("{self} is not invertible")));
        }
        let (k, c) = self
            .terms
            .iter()
            .next()
            .map(|(k, c)| (*k, c.clone()))
            .unwrap();
        if k != 0 && !self.rule.invertible_generator() {
            return Err(Error::InvalidOperator(format!("{self} is not invertible")));
        }
        // (c X^k)^-1 = X^-k c^-1 = sigma^-k(c^-1) X^-k
        let inv = self.rule.sigma_pow(&c.inv()?, -k)?;
        Ok(OreOperator::term(&self.rule, inv, -k))
    }

    /// Apply the operator to a rational function of the main variable.
    pub fn apply_to(&self, g: &Scalar) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (k, a) in &self.terms {
            let image = match self.rule.kind {
                OreKind::Differential => {
                    let mut h = g.clone();
                    for _ in 0..*k {
                        h = h.derivative(self.rule.var);
                    }
                    h
                }
                _ => self.rule.sigma_pow(g, *k)?,
            };
            total = &total + &(a * &image);
        }
        Ok(total)
    }

    /// Substitute values for parameters in every coefficient and in the rule.
    pub fn instantiate(&self, values: &[(Symbol, Q)]) -> Result<OreOperator> {
        let rule = self.rule.instantiate(values)?;
        let mut out = OreOperator::zero(&rule);
        for (k, c) in &self.terms {
            out.add_term(*k, &c.instantiate(values)?);
        }
        Ok(out)
    }

    /// Substitute a scalar expression for a parameter symbol.
    pub fn substitute(&self, s: Symbol, value: &Scalar) -> Result<OreOperator> {
        if s == self.rule.var {
            return Err(Error::InvalidOperator(
                "cannot substitute the main variable".into(),
            ));
        }
        let rule = self.rule.substitute(s, value)?;
        let mut out = OreOperator::zero(&rule);
        for (k, c) in &self.terms {
            out.add_term(*k, &c.substitute(s, value)?);
        }
        Ok(out)
    }

    /// Rename the main variable (e.g. `x` to `z`), carrying coefficients along.
    pub fn rename_var(&self, to: Symbol) -> Result<OreOperator> {
        let from = self.rule.var;
        let rule = self.rule.with_var(to);
        let image = Scalar::var(to);
        let mut out = OreOperator::zero(&rule);
        for (k, c) in &self.terms {
            out.add_term(*k, &c.substitute(from, &image)?);
        }
        Ok(out)
    }
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &OreOperator, b: &OreOperator) -> Result<OreOperator> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Formal adjoint for differential operators: `x -> x`, `d -> -d`,
/// extended anti-multiplicatively, so `(a d^k)* = (-d)^k a`.
pub fn formal_conjugate(a: &OreOperator) -> Result<OreOperator> {
    if !a.rule.is_differential() {
        return Err(Error::InvalidOperator(
            "formal conjugation needs the differential rule".into(),
        ));
    }
    let rule = &a.rule;
    let mut out = OreOperator::zero(rule);
    for (k, c) in &a.terms {
        let sign = if k % 2 == 0 {
            Scalar::one()
        } else {
            Scalar::from_int(-1)
        };
        let dk = OreOperator::term(rule, sign, *k);
        out = out.add(&dk.mul(&OreOperator::scalar(rule, c.clone()))?)?;
    }
    Ok(out)
}

impl fmt::Display for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let g = self.rule.generator_name();
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let gen = match *k {
                0 => String::new(),
                1 => g.to_string(),
                k => format!("{g}^{k}"),
            };
            let text = if gen.is_empty() {
                c.to_string()
            } else if c.is_one() {
                gen
            } else if (-c).is_one() {
                format!("-{gen}")
            } else if c.is_sum() {
                format!("({c})*{gen}")
            } else {
                format!("{c}*{gen}")
            };
            if i == 0 {
                out.push_str(&text);
            } else if let Some(rest) = text.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&text);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OreOperator[{}]({})", self.rule, self)
    }
}
