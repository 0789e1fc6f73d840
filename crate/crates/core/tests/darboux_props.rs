mod common;

use bispec_core::darboux::{check_exchange_identity, darboux_operators, verify_factorization};
use bispec_core::scalar::{q_int, Q};
use bispec_core::text::parse_operator;
use bispec_core::{OreOperator, OreRule, Scalar, Symbol};
use common::checks::ok;
use common::{nonzero_oracle, nonzero_rational, rational, Kind, Oracle};
use proptest::prelude::*;

fn theta(c: &Q, k: i64) -> (Scalar, Oracle) {
    let s = &Scalar::var(Symbol::new("x")).pow(k).unwrap() * &Scalar::from_q(c.clone());
    let mut inv = Oracle::new(Kind::Differential);
    inv.terms.insert((-k, 0), q_int(1) / c.clone());
    (s, inv)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn darboux_step_intertwines(
        p in nonzero_oracle(Kind::Differential, 2, 3),
        q in nonzero_oracle(Kind::Differential, 2, 3),
        c in nonzero_rational(),
        k in 0i64..=2,
    ) {
        let (th, th_inv) = theta(&c, k);
        let (po, qo) = (p.to_op(), q.to_op());
        let l = q.mul(&th_inv).mul(&p);
        let l_op = l.to_op();
        prop_assert!(ok(verify_factorization(&po, &qo, &th, &l_op))?);
        let res = ok(darboux_operators(&l_op, &po, &qo, &th))?;
        prop_assert!(res.certified());
        let l_bar = p.mul(&q).mul(&th_inv);
        prop_assert_eq!(&res.l_bar, &l_bar.to_op());
        prop_assert_eq!(l_bar.mul(&p).to_op(), p.mul(&l).to_op());
        prop_assert_eq!(res.l_bar.degree(), l_op.degree());
    }

    /// Shifting the factorization by a nonzero term breaks it.
    #[test]
    fn perturbed_factorization_is_rejected(
        p in nonzero_oracle(Kind::Differential, 2, 3),
        q in nonzero_oracle(Kind::Differential, 2, 3),
        e in 0i64..=2,
        c in nonzero_rational(),
    ) {
        let (th, th_inv) = theta(&q_int(1), 1);
        let mut bump = Oracle::new(Kind::Differential);
        bump.terms.insert((e, 0), c);
        let l = q.mul(&th_inv).mul(&p).add(&bump);
        prop_assert!(!ok(verify_factorization(&p.to_op(), &q.to_op(), &th, &l.to_op()))?);
        prop_assert!(darboux_operators(&l.to_op(), &p.to_op(), &q.to_op(), &th).is_err());
    }
}

fn xr() -> OreRule {
    OreRule::differential("x")
}

fn op(text: &str) -> OreOperator {
    parse_operator(text, &xr()).unwrap()
}

/// `(L12 - x)(L123 - D - 2) = (Ls - D - 1)(L12 - x)` with `Ls` the shifted Bessel operator.
fn exchange(shift3: &str) -> [OreOperator; 4] {
    let a = op("bessel(b1, b2) - x");
    let b = op("bessel(b1, b2, b3) - D - 2");
    let b2 = op(&format!("bessel(b1 + 1, b2 + 1, b3 {shift3}) - D - 1"));
    [a.clone(), b, a, b2]
}

fn holds([a, b, a2, b2]: &[OreOperator; 4]) -> bool {
    check_exchange_identity(a, b, a2, b2).unwrap()
}

fn on_plane(ops: &[OreOperator; 4]) -> [OreOperator; 4] {
    let b3 =
        &(&Scalar::from_int(3) - &Scalar::var(Symbol::new("b1"))) - &Scalar::var(Symbol::new("b2"));
    ops.clone()
        .map(|o| o.substitute(Symbol::new("b3"), &b3).unwrap())
}

#[test]
fn exchange_identity_holds_symbolically() {
    assert!(holds(&exchange("- 2")));
    assert!(!holds(&exchange("- 1")));
    assert!(holds(&on_plane(&exchange("- 2"))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn exchange_identity_continues_to_rational_points(b1 in rational(), b2 in rational()) {
        let at = |ops: [OreOperator; 4]| {
            let pt = [(Symbol::new("b1"), b1.clone()), (Symbol::new("b2"), b2.clone())];
            ops.map(|o| o.instantiate(&pt).unwrap())
        };
        prop_assert!(holds(&at(on_plane(&exchange("- 2")))));
        prop_assert!(!holds(&at(on_plane(&exchange("- 1")))));
    }
}
