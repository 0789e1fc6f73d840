//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive subresultant remainder sequences, with shortcuts for monomials,
//! exact divisibility, variables present in only one argument, and an
//! evaluation test that proves coprimality cheaply.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Poly, Q};
use super::Symbol;

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a = a.div_monomial(&ma);
    let b = b.div_monomial(&mb);
    let mono = Poly::term(mg, Q::one());
    if a.is_constant() || b.is_constant() {
        return mono;
    }
    mono.mul(&gcd_nonmonomial(&a, &b))
}

fn gcd_nonmonomial(a: &Poly, b: &Poly) -> Poly {
    if a == b {
        return a.monic();
    }
    if a.total_degree() >= b.total_degree() {
        if a.div_exact(b).is_some() {
            return b.monic();
        }
    } else if b.div_exact(a).is_some() {
        return a.monic();
    }
    gcd_core(a, b)
}

fn gcd_core(a: &Poly, b: &Poly) -> Poly {
    let va = a.vars();
    let vb = b.vars();
    if let Some(&s) = va.iter().find(|s| !vb.contains(s)) {
        return gcd_with_coeffs(b, &a.coeffs_in(s));
    }
    if let Some(&s) = vb.iter().find(|s| !va.contains(s)) {
        return gcd_with_coeffs(a, &b.coeffs_in(s));
    }
    if va.is_empty() {
        return Poly::one();
    }
    // Recurse on the variable of smallest maximal degree.
    let s = *va
        .iter()
        .min_by_key(|s| a.degree_in(**s).max(b.degree_in(**s)))
        .expect("nonempty variable set");
    let ua = a.coeffs_in(s);
    let ub = b.coeffs_in(s);
    let ca = content(&ua);
    let cb = content(&ub);
    let cg = gcd(&ca, &cb);
    let pa = divide_all(&ua, &ca);
    let pb = divide_all(&ub, &cb);
    if images_coprime(&pa, &pb) {
        return cg;
    }
    let g = prs_gcd(pa, pb);
    cg.mul(&Poly::from_coeffs_in(s, &g)).monic()
}

fn gcd_with_coeffs(p: &Poly, coeffs: &[Poly]) -> Poly {
    let mut g = p.clone();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g.monic()
}

fn content(u: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for c in u {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.monic() } else { gcd(&g, c) };
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn divide_all(u: &[Poly], c: &Poly) -> Vec<Poly> {
    if c.is_one() {
        return u.to_vec();
    }
    u.iter()
        .map(|p| p.div_exact(c).expect("content divides every coefficient"))
        .collect()
}

fn trim(u: &mut Vec<Poly>) {
    while u.last().is_some_and(|p| p.is_zero()) {
        u.pop();
    }
}

/// `lc(b)^(deg a - deg b + 1) a mod b`; the exact power keeps subresultant divisions exact.
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    let mut missing = (r.len() + 1).saturating_sub(b.len());
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&lr.mul(bj));
        }
        trim(&mut r);
        missing -= 1;
    }
    if missing > 0 && !r.is_empty() {
        let f = lb.pow(missing as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

/// Evaluation points for the coprimality test; fixed so results are reproducible.
fn point(s: Symbol, attempt: i64) -> Q {
    let h = s
        .as_str()
        .bytes()
        .fold(7i64, |acc, b| (acc * 31 + b as i64) % 1009);
    Q::from_integer(BigInt::from(2 + (h + 13 * attempt) % 97))
}

/// Univariate gcd degree over Q.
fn univariate_gcd_degree(mut a: Vec<Q>, mut b: Vec<Q>) -> usize {
    let strip = |v: &mut Vec<Q>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    };
    strip(&mut a);
    strip(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let f = a[a.len() - 1].clone() / b[b.len() - 1].clone();
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                a[j + shift] -= f.clone() * bj;
            }
            strip(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when `a` and `b`, primitive in their main variable, provably have a
/// constant gcd: at a point where neither leading coefficient vanishes the
/// image of the gcd keeps its degree and divides both images.
fn images_coprime(a: &[Poly], b: &[Poly]) -> bool {
    for attempt in 0..3 {
        let at = |s: Symbol| Some(point(s, attempt));
        let ia: Vec<Q> = a
            .iter()
            .map(|c| c.eval_all(&at).expect("all variables valued"))
            .collect();
        let ib: Vec<Q> = b
            .iter()
            .map(|c| c.eval_all(&at).expect("all variables valued"))
            .collect();
        if ia.last().is_some_and(|c| c.is_zero()) || ib.last().is_some_and(|c| c.is_zero()) {
            continue;
        }
        return univariate_gcd_degree(ia, ib) == 0;
    }
    false
}

fn primitive(u: Vec<Poly>) -> Vec<Poly> {
    let c = content(&u);
    let v = divide_all(&u, &c);
    // Keep rational coefficient sizes in check.
    let factor = integer_scale(&v);
    v.iter().map(|p| p.scale(&factor)).collect()
}

/// Factor making all coefficients coprime integers, positive on the top coefficient.
fn integer_scale(u: &[Poly]) -> Q {
    let mut den = BigInt::one();
    for p in u {
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
        }
    }
    let mut num = BigInt::zero();
    for p in u {
        for (_, c) in p.terms() {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
    }
    if num.is_zero() {
        return Q::one();
    }
    let factor = Q::new(den, num);
    match u.last().and_then(|p| p.leading()) {
        Some((_, lc)) if lc.is_negative() => -factor,
        _ => factor,
    }
}

/// Subresultant remainder sequence; `a`, `b` primitive in the main variable.
fn prs_gcd(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    if b.is_empty() {
        return primitive(a);
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        if b.len() == 1 {
            return vec![Poly::one()];
        }
        let delta = (a.len() - b.len()) as u32;
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return primitive(b);
        }
        let divisor = g.mul(&h.pow(delta));
        let r: Vec<Poly> = r
            .iter()
            .map(|c| {
                c.div_exact(&divisor)
                    .expect("subresultant division is exact")
            })
            .collect();
        a = std::mem::replace(&mut b, r);
        g = a.last().expect("nonempty").clone();
        if delta > 0 {
            h = g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Symbol;

    fn v(s: &str) -> Poly {
        Poly::var(Symbol::new(s))
    }
    fn c(n: i64) -> Poly {
        Poly::from_int(n)
    }

    #[test]
    fn univariate_common_factor() {
        let x = v("x");
        let a = x.sub(&c(1)).mul(&x.add(&c(2)));
        let b = x.sub(&c(1)).mul(&x.add(&c(3)));
        assert_eq!(gcd(&a, &b), x.sub(&c(1)));
    }

    #[test]
    fn multivariate_common_factor() {
        let (x, a, q) = (v("x"), v("a"), v("q"));
        let f1 = a.add(&x);
        let f2 = a.add(&q.mul(&x));
        let f3 = a.add(&q.mul(&q).mul(&x));
        let p = f1.mul(&f2).mul(&x);
        let r = f2.mul(&f3).mul(&x).mul(&x);
        let g = gcd(&p, &r);
        assert_eq!(g, f2.mul(&x).monic());
    }

    #[test]
    fn coprime_gives_one() {
        let (x, y) = (v("x"), v("y"));
        let a = x.mul(&x).add(&y);
        let b = x.add(&y.mul(&y)).add(&c(1));
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn squared_denominator_against_derivative_numerator() {
        // Primitive remainder sequences used to stall on this pair.
        let (x, y, a) = (v("x"), v("y"), v("a"));
        let d = a
            .mul(&a)
            .mul(&x.pow(3))
            .mul(&y)
            .add(&c(4).mul(&a).mul(&x.pow(2)).mul(&y))
            .sub(&c(7).mul(&a).mul(&x))
            .sub(&c(10));
        let n = a
            .mul(&x.pow(3))
            .mul(&y.pow(2))
            .sub(&a.mul(&a).mul(&y))
            .add(&c(3).mul(&x));
        let t = n
            .derivative(Symbol::new("x"))
            .mul(&d)
            .sub(&n.mul(&d.derivative(Symbol::new("x"))));
        assert!(gcd(&t, &d.mul(&d)).is_one());
        let f = x.add(&a.mul(&y));
        assert_eq!(gcd(&t.mul(&f), &d.mul(&d).mul(&f)), f.monic());
    }

    #[test]
    fn hidden_content_in_parameters() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let k = y.add(&z);
        let a = k.mul(&x.mul(&x).add(&c(1)));
        let b = k.mul(&y).mul(&x.add(&c(5)));
        assert_eq!(gcd(&a, &b), k.monic());
    }
}
