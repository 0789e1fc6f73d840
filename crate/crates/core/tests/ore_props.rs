mod common;

use bispec_core::text::parse_operator;
use bispec_core::OreRule;
use common::checks::{assoc, assoc_in, conjugation, kind_rule_symbolic, no_zero_divisors};
use common::{nonzero_oracle, oracle, Kind};
use proptest::prelude::*;

fn q23() -> Kind {
    common::all_kinds().remove(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn differential_products_associate(a in oracle(Kind::Differential, 4, 3),
                                       b in oracle(Kind::Differential, 4, 3),
                                       c in oracle(Kind::Differential, 4, 3)) {
        assoc(&a, &b, &c)?;
    }

    #[test]
    fn q_dilation_products_associate(a in oracle(q23(), 4, 3), b in oracle(q23(), 4, 3), c in oracle(q23(), 4, 3)) {
        assoc(&a, &b, &c)?;
    }

    #[test]
    fn shift_products_associate(a in oracle(Kind::Shift, 4, 3), b in oracle(Kind::Shift, 4, 3), c in oracle(Kind::Shift, 4, 3)) {
        assoc(&a, &b, &c)?;
    }

    #[test]
    fn conjugation_is_an_involutive_anti_homomorphism(a in oracle(Kind::Differential, 4, 3),
                                                     b in oracle(Kind::Differential, 4, 3)) {
        conjugation(&a, &b)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symbolic_q_products_associate(a in oracle(q23(), 3, 3), b in oracle(q23(), 3, 3), c in oracle(q23(), 3, 3)) {
        assoc_in(&kind_rule_symbolic(&a.kind), &a, &b, &c)?;
    }

    #[test]
    fn no_zero_divisors_in_any_rule((a, b) in common::kind().prop_flat_map(|k| {
        (nonzero_oracle(k.clone(), 4, 3), nonzero_oracle(k, 4, 3))
    })) {
        no_zero_divisors(&a, &b)?;
    }
}

#[test]
fn bessel_times_power_is_a_product_of_shifted_factors() {
    let r = OreRule::differential("x");
    for (lhs, rhs) in [
        ("bessel(b1, b2)*x^2", "(D + 2 - b1)*(D + 2 - b2)"),
        (
            "bessel(b1, b2, b3)*x^3",
            "(D + 3 - b1)*(D + 3 - b2)*(D + 3 - b3)",
        ),
    ] {
        assert_eq!(
            parse_operator(lhs, &r).unwrap(),
            parse_operator(rhs, &r).unwrap(),
            "{lhs}"
        );
    }
}
