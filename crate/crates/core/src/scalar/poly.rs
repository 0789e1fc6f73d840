//! Sparse distributed multivariate polynomials over the rationals.
//!
//! Terms are kept sorted in decreasing graded-lexicographic order with
//! variables compared by name (alphabetically earlier is more significant).

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::symbol::Symbol;

pub type Q = BigRational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[(Symbol, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial {
            exps: SmallVec::new(),
        }
    }

    pub fn var(s: Symbol, e: u32) -> Monomial {
        let mut exps = SmallVec::new();
        if e > 0 {
            exps.push((s, e));
        }
        Monomial { exps }
    }

    pub fn from_pairs(mut pairs: Vec<(Symbol, u32)>) -> Monomial {
        pairs.sort_by_key(|p| p.0);
        let mut exps: SmallVec<[(Symbol, u32); 4]> = SmallVec::new();
        for (s, e) in pairs {
            if e == 0 {
                continue;
            }
            match exps.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => exps.push((s, e)),
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|p| p.1).sum()
    }

    pub fn exp(&self, s: Symbol) -> u32 {
        self.exps
            .iter()
            .find(|p| p.0 == s)
            .map(|p| p.1)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Symbol, u32)] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(Symbol, u32); 4]> = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.exps, &other.exps);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|&(s, e)| other.exp(s) >= e)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(Symbol, u32); 4]> = SmallVec::new();
        for &(s, e) in &self.exps {
            let d = e - other.exp(s);
            if d > 0 {
                out.push((s, d));
            }
        }
        Monomial { exps: out }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(Symbol, u32); 4]> = SmallVec::new();
        for &(s, e) in &self.exps {
            let m = e.min(other.exp(s));
            if m > 0 {
                out.push((s, m));
            }
        }
        Monomial { exps: out }
    }

    pub fn without(&self, s: Symbol) -> Monomial {
        Monomial {
            exps: self.exps.iter().copied().filter(|p| p.0 != s).collect(),
        }
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if x.1 != y.1 {
                            return x.1.cmp(&y.1);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(s, e)| {
                if *e == 1 {
                    s.to_string()
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Polynomial with rational coefficients; terms sorted by decreasing monomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Q)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn from_int(n: i64) -> Poly {
        Poly::constant(Q::from_integer(BigInt::from(n)))
    }

    pub fn var(s: Symbol) -> Poly {
        Poly::term(Monomial::var(s, 1), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    pub fn from_terms(terms: Vec<(Monomial, Q)>) -> Poly {
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Q::zero) += c;
        }
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Monomial, Q)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Q {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.iter().map(|t| t.0.exp(s)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, s: Symbol) -> u32 {
        self.terms.iter().map(|t| t.0.exp(s)).min().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for (m, _) in &self.terms {
            for (s, _) in m.pairs() {
                out.insert(*s);
            }
        }
        out
    }

    pub fn depends_on(&self, s: Symbol) -> bool {
        self.terms.iter().any(|t| t.0.exp(s) > 0)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    /// Multiplication by a single term keeps the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Q> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        let mut terms: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self, s: Symbol) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exp(s);
            if e == 0 {
                continue;
            }
            let reduced = m.div(&Monomial::var(s, 1));
            terms.push((reduced, c * Q::from_integer(BigInt::from(e))));
        }
        Poly::from_terms(terms)
    }

    /// Coefficients with respect to `s`: `result[k]` multiplies `s^k`.
    pub fn coeffs_in(&self, s: Symbol) -> Vec<Poly> {
        let deg = self.degree_in(s) as usize;
        let mut buckets: Vec<Vec<(Monomial, Q)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(s) as usize].push((m.without(s), c.clone()));
        }
        // Removing one variable keeps the relative order inside a bucket only
        // for lex; grlex needs a resort.
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_coeffs_in(s: Symbol, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(s, k as u32);
            for (n, d) in &c.terms {
                terms.push((n.mul(&m), d.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Gcd of all monomials appearing in the polynomial.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.0.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.div(m), c.clone()))
                .collect(),
        }
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Scale to integer coefficients with unit content and positive leading coefficient.
    pub fn primitive_integer(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for (_, c) in &self.terms {
            let v = c.numer() * (&den / c.denom());
            num = num.gcd(&v);
        }
        let mut factor = Q::new(den, num);
        if self.terms[0].1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Exact quotient `self / other` if `other` divides `self`.
    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = other.terms[0].clone();
        if other.terms.len() == 1 {
            if !self.terms.iter().all(|(m, _)| lm.divides(m)) {
                return None;
            }
            let inv = lc.recip();
            return Some(Poly {
                terms: self
                    .terms
                    .iter()
                    .map(|(m, c)| (m.div(&lm), c * &inv))
                    .collect(),
            });
        }
        if other.total_degree() > self.total_degree() {
            return None;
        }
        for s in other.vars() {
            if other.degree_in(s) > self.degree_in(s) {
                return None;
            }
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((rm, rc)) = rem.terms.first().cloned() {
            if !lm.divides(&rm) {
                return None;
            }
            let qm = rm.div(&lm);
            let qc = &rc / &lc;
            rem = rem.sub(&other.mul_term(&qm, &qc));
            quotient.push((qm, qc));
        }
        Some(Poly::from_terms(quotient))
    }

    /// Evaluate `s` at a rational value.
    pub fn eval_var(&self, s: Symbol, value: &Q) -> Poly {
        if !self.depends_on(s) {
            return self.clone();
        }
        let mut powers: Vec<Q> = vec![Q::one()];
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exp(s) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            terms.push((m.without(s), c * &powers[e]));
        }
        Poly::from_terms(terms)
    }

    /// Value at given rational values for every variable.
    pub fn eval_all(&self, values: &dyn Fn(Symbol) -> Option<Q>) -> Option<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(s, e) in m.pairs() {
                let v = values(s)?;
                t *= num_traits::pow(v, e as usize);
            }
            total += t;
        }
        Some(total)
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}*{m:?}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
