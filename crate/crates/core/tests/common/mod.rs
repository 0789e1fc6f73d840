//! Shared strategies and an independent normal-ordering oracle.
//!
//! The oracle stores an operator as `(e, k) -> c` meaning `c * v^e * G^k`
//! with rational `c`, and multiplies monomials by closed formulas instead of
//! the crate's Ore recursion:
//!
//! ```text
//! differential  x^a d^k  * x^b d^l  = sum_j C(k,j) (b)_j x^(a+b-j) d^(k+l-j)
//! q-dilation    x^a Dq^k * x^b Dq^l = q^(b k) x^(a+b) Dq^(k+l)
//! shift         n^a T^k  * n^b T^l  = sum_j C(b,j) k^(b-j) n^(a+j) T^(k+l)
//! ```
#![allow(dead_code)]

use std::collections::BTreeMap;

use bispec_core::scalar::{q_frac, q_int, Q};
use bispec_core::{OreOperator, OreRule, Scalar};
use proptest::prelude::*;

pub mod checks;

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    Differential,
    /// Rational q, so the oracle never needs rational functions.
    QDilation(Q),
    Shift,
}

impl Kind {
    pub fn var(&self) -> &'static str {
        match self {
            Kind::Shift => "n",
            _ => "x",
        }
    }

    pub fn rule(&self) -> OreRule {
        match self {
            Kind::Differential => OreRule::differential("x"),
            Kind::QDilation(q) => OreRule::q_dilation("x", Scalar::from_q(q.clone())),
            Kind::Shift => OreRule::shift("n"),
        }
    }

    /// Exponent range for the coefficient variable; shift coefficients stay polynomial.
    fn exp_range(&self) -> std::ops::RangeInclusive<i64> {
        match self {
            Kind::Shift => 0..=2,
            _ => -2..=2,
        }
    }
}

pub fn all_kinds() -> Vec<Kind> {
    vec![
        Kind::Differential,
        Kind::QDilation(q_frac(2, 3)),
        Kind::Shift,
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct Oracle {
    pub kind: Kind,
    pub terms: BTreeMap<(i64, i64), Q>,
}

fn binom(n: i64, k: i64) -> Q {
    (0..k).fold(q_int(1), |acc, i| acc * q_int(n - i) / q_int(i + 1))
}

fn falling(b: i64, j: i64) -> Q {
    (0..j).fold(q_int(1), |acc, i| acc * q_int(b - i))
}

fn qpow(q: &Q, e: i64) -> Q {
    let p = (0..e.abs()).fold(q_int(1), |acc, _| acc * q.clone());
    if e < 0 {
        q_int(1) / p
    } else {
        p
    }
}

impl Oracle {
    pub fn new(kind: Kind) -> Oracle {
        Oracle {
            kind,
            terms: BTreeMap::new(),
        }
    }

    fn push(&mut self, key: (i64, i64), c: Q) {
        let e = self.terms.entry(key).or_insert_with(|| q_int(0));
        *e += c;
        if *e == q_int(0) {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Oracle) -> Oracle {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.push(*k, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Oracle) -> Oracle {
        let mut out = Oracle::new(self.kind.clone());
        for (&(a, k), c1) in &self.terms {
            for (&(b, l), c2) in &other.terms {
                let c = c1.clone() * c2.clone();
                match &self.kind {
                    Kind::Differential => {
                        for j in 0..=k {
                            let f = binom(k, j) * falling(b, j);
                            if f != q_int(0) {
                                out.push((a + b - j, k + l - j), c.clone() * f);
                            }
                        }
                    }
                    Kind::QDilation(q) => out.push((a + b, k + l), c * qpow(q, b * k)),
                    Kind::Shift => {
                        for j in 0..=b {
                            out.push(
                                (a + j, k + l),
                                c.clone() * binom(b, j) * qpow(&q_int(k), b - j),
                            );
                        }
                    }
                }
            }
        }
        out
    }

    /// `(x^a d^k)* = (-d)^k x^a`, expanded by Leibniz; differential only.
    pub fn conj(&self) -> Oracle {
        assert_eq!(self.kind, Kind::Differential);
        let mut out = Oracle::new(Kind::Differential);
        for (&(a, k), c) in &self.terms {
            let sign = if k % 2 == 0 { q_int(1) } else { q_int(-1) };
            for j in 0..=k {
                let f = binom(k, j) * falling(a, j);
                if f != q_int(0) {
                    out.push((a - j, k - j), c.clone() * sign.clone() * f);
                }
            }
        }
        out
    }

    pub fn to_op(&self) -> OreOperator {
        self.to_op_in(&self.kind.rule())
    }

    /// Realize in `rule`, which may rename the variable or make `q` symbolic.
    pub fn to_op_in(&self, rule: &OreRule) -> OreOperator {
        let v = Scalar::var(rule.var());
        let mut by_gen: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (&(e, k), c) in &self.terms {
            let term = &v.pow(e).unwrap() * &Scalar::from_q(c.clone());
            let acc = by_gen.entry(k).or_insert_with(Scalar::zero);
            *acc = &*acc + &term;
        }
        OreOperator::from_terms(rule, by_gen).unwrap()
    }
}

pub fn rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q_frac(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("nonzero", |c| *c != q_int(0))
}

/// Random operator with generator degree `<= max_deg` and at most `terms` monomials.
pub fn oracle(kind: Kind, max_deg: i64, terms: usize) -> impl Strategy<Value = Oracle> {
    let exps = kind.exp_range();
    oracle_with(kind, exps, max_deg, terms)
}

pub fn oracle_with(
    kind: Kind,
    exps: std::ops::RangeInclusive<i64>,
    max_deg: i64,
    terms: usize,
) -> impl Strategy<Value = Oracle> {
    let key = (exps, 0..=max_deg);
    prop::collection::vec((key, nonzero_rational()), 1..=terms).prop_map(move |ts| {
        let mut o = Oracle::new(kind.clone());
        for (k, c) in ts {
            o.push(k, c);
        }
        o
    })
}

pub fn nonzero_oracle(kind: Kind, max_deg: i64, terms: usize) -> impl Strategy<Value = Oracle> {
    oracle(kind, max_deg, terms).prop_filter("nonzero", |o| !o.terms.is_empty())
}

pub fn kind() -> impl Strategy<Value = Kind> {
    prop::sample::select(all_kinds())
}
