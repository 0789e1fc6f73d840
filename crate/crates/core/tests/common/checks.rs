//! Property bodies shared by the property suites and the acceptance run.

use bispec_core::files::{builtin_triple, TripleFile};
use bispec_core::ore::{commutator, formal_conjugate};
use bispec_core::presented::{AntiIso, GenWord};
use bispec_core::scalar::{q_int, Q};
use bispec_core::text::{format_operator, parse_operator, Style};
use bispec_core::twist::{exp_ad, twist_source, twist_target, AdExp};
use bispec_core::wave::{act, compare, make_wave, Wave, WaveFamily};
use bispec_core::{OreOperator, OreRule, Scalar, Symbol};
use proptest::prelude::*;

use super::{Kind, Oracle};

pub type Check = Result<(), TestCaseError>;

pub fn ok<T>(r: bispec_core::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

/// The Weyl triple with `psi = e^{xz}`: `x -> dz`, `dx -> z`.
pub const FOURIER: &str = "name fourier
source differential x
target differential z
gen source x = x
gen source dx = d
gen target z = z
gen target dz = d
image x = dz
image dx = z
relation dx*x = x*dx + 1
";

pub fn fourier() -> AntiIso {
    TripleFile::parse(FOURIER).unwrap().b
}

pub fn bundled(name: &str) -> AntiIso {
    TripleFile::parse(builtin_triple(name).unwrap()).unwrap().b
}

/// `(AB)C = A(BC)` in `rule`.
pub fn assoc_in(rule: &OreRule, a: &Oracle, b: &Oracle, c: &Oracle) -> Check {
    let (x, y, z) = (a.to_op_in(rule), b.to_op_in(rule), c.to_op_in(rule));
    let left = ok(ok(x.mul(&y))?.mul(&z))?;
    let right = ok(x.mul(&ok(y.mul(&z))?))?;
    prop_assert_eq!(left, right);
    Ok(())
}

/// Associativity, and agreement with the oracle's closed-form products.
pub fn assoc(a: &Oracle, b: &Oracle, c: &Oracle) -> Check {
    assoc_in(&a.kind.rule(), a, b, c)?;
    let crate_side = ok(ok(a.to_op().mul(&b.to_op()))?.mul(&c.to_op()))?;
    prop_assert_eq!(crate_side, a.mul(b).mul(c).to_op());
    Ok(())
}

pub fn no_zero_divisors(a: &Oracle, b: &Oracle) -> Check {
    let (x, y) = (a.to_op(), b.to_op());
    let p = ok(x.mul(&y))?;
    prop_assert!(!p.is_zero());
    prop_assert_eq!(p.degree(), Some(x.degree().unwrap() + y.degree().unwrap()));
    Ok(())
}

/// `A** = A`, `(AB)* = B* A*`, and the oracle's Leibniz expansion of `A*`.
pub fn conjugation(a: &Oracle, b: &Oracle) -> Check {
    let (x, y) = (a.to_op(), b.to_op());
    let xs = ok(formal_conjugate(&x))?;
    let ys = ok(formal_conjugate(&y))?;
    prop_assert_eq!(&xs, &a.conj().to_op());
    prop_assert_eq!(ok(formal_conjugate(&xs))?, x.clone());
    prop_assert_eq!(ok(formal_conjugate(&ok(x.mul(&y))?))?, ok(ys.mul(&xs))?);
    Ok(())
}

/// `e^{c ad L}` is multiplicative and undone by `e^{-c ad L}`.
pub fn exp_ad_laws(l: &OreOperator, m: &OreOperator, n: &OreOperator, c: &Scalar) -> Check {
    let t = AdExp::new(l.clone(), c.clone());
    let em = ok(exp_ad(&t, m))?;
    let en = ok(exp_ad(&t, n))?;
    prop_assert_eq!(ok(exp_ad(&t, &ok(m.mul(n))?))?, ok(em.mul(&en))?);
    prop_assert_eq!(&ok(exp_ad(&t.inverse(), &em))?, m);
    Ok(())
}

/// Horner evaluation of `sum coeffs[i] * arg^i`.
pub fn horner(coeffs: &[Q], arg: &OreOperator) -> OreOperator {
    let rule = arg.rule();
    let mut acc = OreOperator::zero(rule);
    for c in coeffs.iter().rev() {
        acc = acc
            .mul(arg)
            .unwrap()
            .add(&OreOperator::scalar(rule, Scalar::from_q(c.clone())))
            .unwrap();
    }
    acc
}

pub fn derivative(coeffs: &[Q]) -> Vec<Q> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.clone() * q_int(i as i64))
        .collect()
}

/// `e^{c ad (lambda x)} M(x, d) = M(x, d - c lambda)` and
/// `e^{c ad (lambda d)} M(x, d) = M(x + c lambda, d)`, for polynomial `M`.
pub fn exp_ad_closed_form(m: &Oracle, lambda: &Q, c: &Q) -> Check {
    let rule = OreRule::differential("x");
    let x = OreOperator::main_var(&rule);
    let d = OreOperator::generator(&rule);
    let shift = Scalar::from_q(c.clone() * lambda.clone());
    let sc = |o: &OreOperator, s: &Q| o.scale(&Scalar::from_q(s.clone()));
    let d_moved = d.sub(&OreOperator::scalar(&rule, shift.clone())).unwrap();
    let x_moved = x.add(&OreOperator::scalar(&rule, shift)).unwrap();
    let mut by_x = OreOperator::zero(&rule);
    let mut by_d = OreOperator::zero(&rule);
    for (&(e, k), coeff) in &m.terms {
        let xe = x.pow(e as u32).unwrap();
        by_x = by_x
            .add(&sc(
                &xe.mul(&d_moved.pow(k as u32).unwrap()).unwrap(),
                coeff,
            ))
            .unwrap();
        let xm = x_moved.pow(e as u32).unwrap();
        by_d = by_d
            .add(&sc(&xm.mul(&d.pow(k as u32).unwrap()).unwrap(), coeff))
            .unwrap();
    }
    let mo = m.to_op();
    let cs = Scalar::from_q(c.clone());
    prop_assert_eq!(
        ok(exp_ad(&AdExp::new(sc(&x, lambda), cs.clone()), &mo))?,
        by_x
    );
    prop_assert_eq!(ok(exp_ad(&AdExp::new(sc(&d, lambda), cs), &mo))?, by_d);
    Ok(())
}

/// `sum coeffs[i] * letter^i` as a word.
pub fn poly_word(letter: &str, coeffs: &[Q]) -> GenWord {
    let s = Symbol::new(letter);
    coeffs
        .iter()
        .enumerate()
        .fold(GenWord::zero(), |acc, (i, c)| {
            acc.add(&GenWord::term(vec![s; i], Scalar::from_q(c.clone())))
        })
}

/// A polynomial-coefficient Weyl operator as a word in `x`, `dx`.
pub fn weyl_word(op: &OreOperator) -> GenWord {
    let x = Symbol::new("x");
    let dx = Symbol::new("dx");
    let var = op.rule().var();
    let mut w = GenWord::zero();
    for (k, c) in op.terms() {
        assert!(c.den().is_one(), "polynomial coefficients expected");
        for (mono, q) in c.num().terms() {
            let mut letters = vec![x; mono.exp(var) as usize];
            letters.extend(std::iter::repeat_n(dx, k as usize));
            w = w.add(&GenWord::term(letters, Scalar::from_q(q.clone())));
        }
    }
    w
}

/// Twisting `b` by `e^{c ad p}` on the source agrees with the target-side
/// twist by `-b(p)`, and with mapping `e^{c ad p}(g)` through `b` directly.
pub fn weyl_twist_equivalence(b: &AntiIso, letter: &str, p: &[Q], c: &Q) -> Check {
    let p_word = poly_word(letter, p);
    let c = Scalar::from_q(c.clone());
    let via_source = ok(twist_source(b, &p_word, &c))?;
    let via_target = ok(twist_target(b, AdExp::new(ok(b.apply(&p_word))?, -&c)))?;
    let p_op = ok(b.source().realize(&p_word))?;
    for g in ["x", "dx"] {
        let g = Symbol::new(g);
        let img = ok(via_source.generator_image(g))?;
        prop_assert_eq!(img, ok(via_target.generator_image(g))?);
        let moved = ok(exp_ad(
            &AdExp::new(p_op.clone(), c.clone()),
            ok(b.source().image(g))?,
        ))?;
        prop_assert_eq!(img, &ok(b.apply(&weyl_word(&moved)))?);
    }
    Ok(())
}

pub fn anti_multiplicative(b: &AntiIso, w1: &GenWord, w2: &GenWord) -> Check {
    let lhs = ok(b.apply(&w1.mul(w2)))?;
    let rhs = ok(ok(b.apply(w2))?.mul(&ok(b.apply(w1))?))?;
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Twisting the Fourier triple by `e^{ad p(x)}` then `e^{ad q(dx)}`:
/// `b2(dx) = z - p'(dz)`, `b2(x) = dz + q'(z - p'(dz))`, and the images
/// satisfy `[b2(dx), b2(x)] = -1`. Returns the commutator.
pub fn string_equation(p: &[Q], q: &[Q]) -> Result<OreOperator, TestCaseError> {
    let b = fourier();
    let one = Scalar::one();
    let b1 = ok(twist_source(&b, &poly_word("x", p), &one))?;
    let b2 = ok(twist_source(&b1, &poly_word("dx", q), &one))?;
    let big_p = ok(b2.generator_image(Symbol::new("dx")))?.clone();
    let big_q = ok(b2.generator_image(Symbol::new("x")))?.clone();
    let rule = OreRule::differential("z");
    let z = OreOperator::main_var(&rule);
    let dz = OreOperator::generator(&rule);
    let zp = z.sub(&horner(&derivative(p), &dz)).unwrap();
    prop_assert_eq!(&big_p, &zp);
    prop_assert_eq!(&big_q, &dz.add(&horner(&derivative(q), &zp)).unwrap());
    let c = ok(commutator(&big_p, &big_q))?;
    prop_assert_eq!(&c, &OreOperator::scalar(&rule, Scalar::from_int(-1)));
    Ok(c)
}

fn grid(w: &Wave) -> &bispec_core::wave::Grid {
    match w {
        Wave::Grid(g) => g,
        Wave::Sequence(_) => panic!("grid wave expected"),
    }
}

/// `A(B psi) = B(A psi)` with `A` in x and `B` in z, on `e^{xz}`.
pub fn actions_commute(a: &OreOperator, b: &OreOperator, order: usize) -> Check {
    let w = ok(make_wave(&WaveFamily::ExpXZ, order))?;
    let ab = ok(act(a, &ok(act(b, &w))?))?;
    let ba = ok(act(b, &ok(act(a, &w))?))?;
    let r = ok(compare("A B psi = B A psi", &ab, &ba))?;
    prop_assert!(r.passed(), "{}", r);
    Ok(())
}

/// Every coefficient reported reliable at `order` agrees with the same
/// computation at a larger sentinel order; nothing else is reported.
pub fn window_conservative(
    family: &WaveFamily,
    a: &OreOperator,
    b: &OreOperator,
    order: usize,
) -> Check {
    let run = |n: usize| -> Result<Wave, TestCaseError> {
        let w = ok(make_wave(family, n))?;
        ok(act(a, &ok(act(b, &w))?))
    };
    let small = run(order)?;
    let big = run(order + 8)?;
    let (s, g) = (grid(&small), grid(&big));
    let points = ok(s.window().points())?;
    for &(i, j) in &points {
        let v = s.coeff(i, j);
        prop_assert!(v.is_some());
        prop_assert_eq!(v, g.coeff(i, j), "at ({}, {})", i, j);
    }
    for (i, j) in ok(g.window().points())? {
        if !s.window().known(i, j) {
            prop_assert_eq!(s.coeff(i, j), None);
        }
    }
    Ok(())
}

/// Round trip through every printing style the rule supports.
pub fn parse_format(op: &OreOperator) -> Check {
    let rule = op.rule();
    let mut styles = vec![Style::Canonical];
    if !matches!(rule.kind(), bispec_core::ore::OreKind::Shift) {
        styles.push(Style::DBasis);
        styles.push(Style::Graded);
    }
    for style in &styles {
        let text = ok(format_operator(op, style))?;
        let back = ok(parse_operator(&text, rule))?;
        prop_assert_eq!(&back, op, "{:?}: {}", style, text);
    }
    Ok(())
}

pub fn kind_rule_symbolic(kind: &Kind) -> OreRule {
    match kind {
        Kind::QDilation(_) => OreRule::q_dilation("x", Scalar::sym("q")),
        k => k.rule(),
    }
}
