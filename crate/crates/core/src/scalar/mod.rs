//! Exact rational functions over the rationals in any number of symbols.
//!
//! A [`Scalar`] is stored as a reduced fraction `num / den` with a monic
//! denominator, so structural equality is field equality.

mod gcd;
mod poly;
mod symbol;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use gcd::gcd;
pub use poly::{Monomial, Poly, Q};
pub use symbol::Symbol;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Scalar {
        Scalar {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar {
            num: Poly::from_int(n),
            den: Poly::one(),
        }
    }

    pub fn from_q(c: Q) -> Scalar {
        Scalar {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::from_q(q_frac(n, d))
    }

    pub fn var(s: Symbol) -> Scalar {
        Scalar {
            num: Poly::var(s),
            den: Poly::one(),
        }
    }

    /// Shorthand for `Scalar::var(Symbol::new(name))`.
    pub fn sym(name: &str) -> Scalar {
        Scalar::var(Symbol::new(name))
    }

    pub fn from_poly(p: Poly) -> Scalar {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_parts(num: Poly, den: Poly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::reduce(num, den))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    fn reduce(num: Poly, den: Poly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.as_constant() {
            return Scalar {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Scalar::with_monic_den(num, den)
    }

    fn with_monic_den(num: Poly, den: Poly) -> Scalar {
        let lc = den.leading_coeff();
        if lc.is_one() {
            return Scalar { num, den };
        }
        let inv = lc.recip();
        let den = den.scale(&inv);
        if den.is_one() {
            return Scalar {
                num: num.scale(&inv),
                den,
            };
        }
        Scalar {
            num: num.scale(&inv),
            den,
        }
    }

    /// Reduction when the only possible common factor is a monomial.
    fn reduce_monomial_only(num: Poly, den: Poly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_monomial(&g), den.div_monomial(&g))
        };
        Scalar::with_monic_den(num, den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value if this scalar is a rational constant.
    pub fn as_q(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        let c = self.as_q()?;
        if c.is_integer() {
            i64::try_from(c.to_integer()).ok()
        } else {
            None
        }
    }

    /// True if the numerator has more than one term (needs parentheses in products).
    pub fn is_sum(&self) -> bool {
        self.num.terms().len() > 1
    }

    pub fn depends_on(&self, s: Symbol) -> bool {
        self.num.depends_on(s) || self.den.depends_on(s)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Symbol> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Ok(Scalar::with_monic_den(self.num.pow(e), self.den.pow(e)))
    }

    pub fn scale_q(&self, c: &Q) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Formal partial derivative.
    pub fn derivative(&self, s: Symbol) -> Scalar {
        if !self.depends_on(s) {
            return Scalar::zero();
        }
        if self.den.is_one() {
            return Scalar::from_poly(self.num.derivative(s));
        }
        let dn = self.num.derivative(s);
        let dd = self.den.derivative(s);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        if num.is_zero() {
            return Scalar::zero();
        }
        // Common factors of num and den^2 divide den, so gcds against den
        // (half the degree of den^2) suffice.
        let mut num = num;
        let mut den = self.den.mul(&self.den);
        loop {
            let g = gcd(&gcd(&num, &self.den), &den);
            if g.is_constant() {
                break;
            }
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        Scalar::with_monic_den(num, den)
    }

    /// Replace `s` by `expr` everywhere.
    pub fn substitute(&self, s: Symbol, expr: &Scalar) -> Result<Scalar> {
        if !self.depends_on(s) {
            return Ok(self.clone());
        }
        if let Some(factor) = expr.unit_multiple_of(s) {
            return self.dilate(s, &factor);
        }
        let (n, d) = (&expr.num, &expr.den);
        let kn = self.num.degree_in(s);
        let kd = self.den.degree_in(s);
        let num = compose(&self.num, s, n, d);
        let den = compose(&self.den, s, n, d);
        if den.is_zero() {
            return Err(Error::VanishingDenominator);
        }
        let (num, den) = if kd >= kn {
            (num.mul(&d.pow(kd - kn)), den)
        } else {
            (num, den.mul(&d.pow(kn - kd)))
        };
        Ok(Scalar::reduce(num, den))
    }

    /// If `self = c * m * s` with `m` a monomial free of `s`, return `c * m`.
    fn unit_multiple_of(&self, s: Symbol) -> Option<(Monomial, Q)> {
        if !self.den.is_monomial() || !self.num.is_monomial() {
            return None;
        }
        let (nm, nc) = self.num.leading()?;
        let (dm, dc) = self.den.leading()?;
        if nm.exp(s) != 1 || dm.exp(s) != 0 {
            return None;
        }
        // Denominator monomials become negative exponents; keep it simple and
        // only take the fast path for polynomial multipliers.
        if !dm.is_one() {
            return None;
        }
        Some((nm.without(s), nc / dc))
    }

    /// `s -> c*m*s`: a unit rescaling, so only monomial factors can cancel.
    fn dilate(&self, s: Symbol, factor: &(Monomial, Q)) -> Result<Scalar> {
        let num = dilate_poly(&self.num, s, factor);
        let den = dilate_poly(&self.den, s, factor);
        if den.is_zero() {
            return Err(Error::VanishingDenominator);
        }
        Ok(Scalar::reduce_monomial_only(num, den))
    }

    /// `s -> s + k`; an automorphism of the polynomial ring, so no cancellation occurs.
    pub fn shift(&self, s: Symbol, k: i64) -> Scalar {
        if k == 0 || !self.depends_on(s) {
            return self.clone();
        }
        let shifted = Poly::var(s).add(&Poly::from_int(k));
        let num = compose(&self.num, s, &shifted, &Poly::one());
        let den = compose(&self.den, s, &shifted, &Poly::one());
        Scalar::with_monic_den(num, den)
    }

    /// Evaluate some symbols at rational values.
    pub fn instantiate(&self, values: &[(Symbol, Q)]) -> Result<Scalar> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        let mut touched = false;
        for (s, v) in values {
            if num.depends_on(*s) || den.depends_on(*s) {
                touched = true;
                num = num.eval_var(*s, v);
                den = den.eval_var(*s, v);
            }
        }
        if !touched {
            return Ok(self.clone());
        }
        if den.is_zero() {
            return Err(Error::VanishingDenominator);
        }
        Ok(Scalar::reduce(num, den))
    }

    /// Numeric value with every symbol assigned.
    pub fn eval(&self, values: &dyn Fn(Symbol) -> Option<Q>) -> Result<Q> {
        let n = self
            .num
            .eval_all(values)
            .ok_or_else(|| Error::Wave(format!("unassigned symbol in {self}")))?;
        let d = self
            .den
            .eval_all(values)
            .ok_or_else(|| Error::Wave(format!("unassigned symbol in {self}")))?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(n / d)
    }
}

fn compose(p: &Poly, s: Symbol, n: &Poly, d: &Poly) -> Poly {
    // p(n/d) * d^deg, Horner in n/d with denominators cleared.
    let coeffs = p.coeffs_in(s);
    let k = coeffs.len() - 1;
    let mut acc = Poly::zero();
    let mut dpow = Poly::one();
    for (i, c) in coeffs.iter().enumerate().rev() {
        // acc = acc * n + c * d^(k - i)
        acc = acc.mul(n);
        if i < k {
            dpow = dpow.mul(d);
        }
        if !c.is_zero() {
            acc = acc.add(&c.mul(&dpow));
        }
    }
    acc
}

fn dilate_poly(p: &Poly, s: Symbol, factor: &(Monomial, Q)) -> Poly {
    let (m, c) = factor;
    let mut terms = Vec::with_capacity(p.terms().len());
    for (mon, coeff) in p.terms() {
        let e = mon.exp(s);
        if e == 0 {
            terms.push((mon.clone(), coeff.clone()));
            continue;
        }
        let mut mm = mon.clone();
        let mut cc = coeff.clone();
        for _ in 0..e {
            mm = mm.mul(m);
            cc *= c;
        }
        terms.push((mm, cc));
    }
    Poly::from_terms(terms)
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let n = self.num.add(&other.num);
            if self.den.is_one() {
                return Scalar {
                    num: n,
                    den: Poly::one(),
                };
            }
            return Scalar::reduce(n, self.den.clone());
        }
        // Henrici: with g = gcd(b, d), the only possible cancellation is by gcd(n, g).
        let g = gcd(&self.den, &other.den);
        let b_g = self.den.div_exact(&g).expect("gcd divides");
        let d_g = other.den.div_exact(&g).expect("gcd divides");
        let n = self.num.mul(&d_g).add(&other.num.mul(&b_g));
        if n.is_zero() {
            return Scalar::zero();
        }
        let h = if g.is_one() { Poly::one() } else { gcd(&n, &g) };
        let (n, d) = if h.is_one() {
            (n, b_g.mul(&other.den))
        } else {
            (
                n.div_exact(&h).expect("gcd divides"),
                b_g.mul(&other.den.div_exact(&h).expect("gcd divides")),
            )
        };
        Scalar::with_monic_den(n, d)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: &Scalar) -> Scalar {
        self + &(-other)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar {
                num: self.num.mul(&other.num),
                den: Poly::one(),
            };
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let div = |p: &Poly, g: &Poly| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = div(&self.num, &g1).mul(&div(&other.num, &g2));
        let den = div(&self.den, &g2).mul(&div(&other.den, &g1));
        Scalar::with_monic_den(num, den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, other: Scalar) -> Scalar {
                (&self).$m(&other)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, other: &Scalar) -> Scalar {
                (&self).$m(other)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, other: Scalar) -> Scalar {
                self.$m(&other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Q> for Scalar {
    fn from(c: Q) -> Self {
        Scalar::from_q(c)
    }
}

impl From<Symbol> for Scalar {
    fn from(s: Symbol) -> Self {
        Scalar::var(s)
    }
}

pub(crate) fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .pairs()
        .iter()
        .map(|(s, e)| {
            if *e == 1 {
                s.to_string()
            } else {
                format!("{s}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

/// Canonical text of a polynomial, e.g. `a*x^2 - 3/2*q + 1`.
pub fn fmt_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        let body = if m.is_one() {
            fmt_q(&a)
        } else if a.is_one() {
            fmt_monomial(m)
        } else {
            format!("{}*{}", fmt_q(&a), fmt_monomial(m))
        };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = fmt_poly(&self.num);
        if self.den.is_one() {
            return f.write_str(&num);
        }
        let num = if self.num.terms().len() > 1 {
            format!("({num})")
        } else {
            num
        };
        let den_simple = self.den.terms().len() == 1
            && self.den.terms()[0].1.is_one()
            && self.den.terms()[0].0.pairs().len() == 1;
        let den = fmt_poly(&self.den);
        if den_simple {
            write!(f, "{num}/{den}")
        } else {
            write!(f, "{num}/({den})")
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(name: &str) -> Scalar {
        Scalar::sym(name)
    }
    fn n(k: i64) -> Scalar {
        Scalar::from_int(k)
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let x = s("x");
        let a = x.checked_div(&(&x - &n(1))).unwrap();
        let b = (&x - &n(1)).checked_div(&x).unwrap();
        assert!((&a * &b).is_one());
    }

    #[test]
    fn add_reciprocals() {
        let inv = s("x").inv().unwrap();
        assert_eq!(&inv + &inv, n(2).checked_div(&s("x")).unwrap());
    }

    #[test]
    fn q_product_expansion_matches_termwise_collection() {
        let (x, a, q) = (s("x"), s("a"), s("q"));
        let x2 = &x * &x;
        let lhs = &(&(&n(1) + &(&a * &x2)) * &(&n(1) + &(&(&a * &(&q * &q)) * &x2))) * &x2;
        // Oracle: expand (1 + a x^2)(1 + a q^2 x^2) x^2 term by term.
        let oracle_terms = vec![
            (Monomial::from_pairs(vec![(Symbol::new("x"), 2)]), q_int(1)),
            (
                Monomial::from_pairs(vec![(Symbol::new("a"), 1), (Symbol::new("x"), 4)]),
                q_int(1),
            ),
            (
                Monomial::from_pairs(vec![
                    (Symbol::new("a"), 1),
                    (Symbol::new("q"), 2),
                    (Symbol::new("x"), 4),
                ]),
                q_int(1),
            ),
            (
                Monomial::from_pairs(vec![
                    (Symbol::new("a"), 2),
                    (Symbol::new("q"), 2),
                    (Symbol::new("x"), 6),
                ]),
                q_int(1),
            ),
        ];
        assert_eq!(lhs, Scalar::from_poly(Poly::from_terms(oracle_terms)));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            s("x").checked_div(&Scalar::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn substitution_examples() {
        let (x, q, a) = (s("x"), s("q"), s("a"));
        let xs = Symbol::new("x");
        assert_eq!(
            (&x * &x).substitute(xs, &(&q * &x)).unwrap(),
            &(&q * &q) * &(&x * &x)
        );
        let f = (&a + &x).inv().unwrap();
        assert_eq!(
            f.substitute(xs, &(&q * &x)).unwrap(),
            (&a + &(&q * &x)).inv().unwrap()
        );
        let (b1, b2, al) = (s("b1"), s("b2"), s("alpha"));
        let g = &b1 + &b2;
        let r = g
            .substitute(Symbol::new("b2"), &(&b1 + &(&n(2) * &al)))
            .unwrap();
        assert_eq!(r, &(&n(2) * &b1) + &(&n(2) * &al));
    }

    #[test]
    fn substitution_can_vanish_denominator() {
        let (x, y) = (s("x"), s("y"));
        let f = (&x - &y).inv().unwrap();
        assert_eq!(
            f.substitute(Symbol::new("x"), &y),
            Err(Error::VanishingDenominator)
        );
    }

    #[test]
    fn derivative_examples() {
        let x = s("x");
        let xs = Symbol::new("x");
        assert_eq!((&(&x * &x) * &x).derivative(xs), &n(3) * &(&x * &x));
        assert_eq!(x.inv().unwrap().derivative(xs), -(&x * &x).inv().unwrap());
        // p(xi) = xi^2 + xi; oracle: power rule term by term gives 2 xi + 1.
        let xi = s("xi");
        let p = &(&xi * &xi) + &xi;
        assert_eq!(p.derivative(Symbol::new("xi")), &(&n(2) * &xi) + &n(1));
        // A denominator factor free of the variable cancels completely.
        let y = s("y");
        let f = (&n(1) - &(&x * &y)).checked_div(&x).unwrap();
        assert_eq!(f.derivative(Symbol::new("y")), n(-1));
    }

    #[test]
    fn shift_and_dilation_keep_canonical_form() {
        let (nn, q, x) = (s("n"), s("q"), s("x"));
        let f = (&nn * &nn).checked_div(&(&nn + &n(3))).unwrap();
        let shifted = f.shift(Symbol::new("n"), 1);
        let via_sub = f.substitute(Symbol::new("n"), &(&nn + &n(1))).unwrap();
        assert_eq!(shifted, via_sub);
        let g = (&x + &q).checked_div(&(&x * &(&x - &n(1)))).unwrap();
        let general = g
            .substitute(Symbol::new("x"), &(&x + &Scalar::zero()))
            .unwrap();
        assert_eq!(general, g);
        let dil = g.substitute(Symbol::new("x"), &(&q * &x)).unwrap();
        let expected = (&(&q * &x) + &q)
            .checked_div(&(&(&q * &x) * &(&(&q * &x) - &n(1))))
            .unwrap();
        assert_eq!(dil, expected);
    }

    #[test]
    fn display_is_parenthesised_for_sums() {
        let (x, a) = (s("x"), s("a"));
        let f = (&a + &x).checked_div(&(&x * &x)).unwrap();
        assert_eq!(f.to_string(), "(a + x)/x^2");
        let g = n(1).checked_div(&(&a + &x)).unwrap();
        assert_eq!(g.to_string(), "1/(a + x)");
        assert_eq!(Scalar::frac(-3, 2).to_string(), "-3/2");
    }
}
