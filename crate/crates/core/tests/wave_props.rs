mod common;

use bispec_core::files::Session;
use bispec_core::scalar::{q_frac, q_int, Q};
use bispec_core::wave::WaveFamily;
use bispec_core::{OreRule, Scalar};
use common::checks::{actions_commute, window_conservative};
use common::{oracle_with, Kind, Oracle};
use proptest::prelude::*;

/// Small operator with polynomial coefficients, so it acts on every grid.
fn small(kind: Kind) -> impl Strategy<Value = Oracle> {
    oracle_with(kind, 0..=2, 2, 3)
}

fn in_z(o: &Oracle, rule: OreRule) -> bispec_core::OreOperator {
    o.to_op_in(&rule)
}

fn families() -> Vec<(WaveFamily, Kind, OreRule)> {
    let half = q_frac(1, 2);
    vec![
        (
            WaveFamily::ExpXZ,
            Kind::Differential,
            OreRule::differential("z"),
        ),
        (
            WaveFamily::QExpXZ { q: half.clone() },
            Kind::QDilation(half.clone()),
            OreRule::q_dilation("z", Scalar::from_q(half)),
        ),
        (
            WaveFamily::Airy {
                order: 2,
                alpha: vec![],
            },
            Kind::Differential,
            OreRule::differential("z"),
        ),
        (
            WaveFamily::Bessel {
                order: 2,
                beta: vec![q_int(0), q_frac(1, 3)],
                k: 0,
            },
            Kind::Differential,
            OreRule::differential("z"),
        ),
    ]
}

fn family_case() -> impl Strategy<Value = (WaveFamily, Oracle, Oracle, OreRule)> {
    prop::sample::select(families())
        .prop_flat_map(|(f, kind, zr)| (Just(f), small(kind.clone()), small(kind), Just(zr)))
}

/// Bessel exponents whose pairwise differences are never integers.
fn nonresonant() -> impl Strategy<Value = [Q; 3]> {
    (-3i64..=3, 0i64..=3, 0i64..=3).prop_map(|(a, m, k)| {
        let a = q_int(a);
        [
            a.clone(),
            a.clone() + q_frac(1, 3) + q_int(m),
            a + q_frac(2, 3) + q_int(k),
        ]
    })
}

fn run(text: &str) -> bispec_core::files::JobReport {
    Session::new().run_job("wave", text)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn x_and_z_actions_commute_on_exp(a in small(Kind::Differential), b in small(Kind::Differential)) {
        actions_commute(&a.to_op(), &in_z(&b, OreRule::differential("z")), 15)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reliable_windows_are_conservative((family, a, b, zr) in family_case()) {
        window_conservative(&family, &a.to_op(), &in_z(&b, zr), 12)?;
    }

    #[test]
    fn bessel_generators_match_their_images(beta in nonresonant(), k in 0usize..3) {
        let [b1, b2, b3] = beta;
        let job = format!(
            "triple bessel\n\
             triple-subst bessel h ; b1 = {b1} ; b2 = {b2} ; b3 = {b3}\n\
             wave w bessel beta={b1},{b2},{b3} k={k} order=24\n\
             triple-wave h ; w\n"
        );
        let r = run(&job);
        prop_assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn airy_generators_match_their_images(a in -4i64..=4, d in 1i64..=4) {
        let alpha = q_frac(a, d);
        let job = format!(
            "triple airy\n\
             triple-subst airy h ; a2 = {alpha}\n\
             wave w airy N=3 alpha={alpha} order=24\n\
             triple-wave h ; w\n"
        );
        let r = run(&job);
        prop_assert!(r.passed(), "{}", r.to_text());
    }
}

#[test]
fn triples_hold_on_their_waves() {
    let fourier = format!(
        "begin-triple\n{}end-triple\nwave e exp_xz order=20\ntriple-wave fourier ; e\n",
        common::checks::FOURIER
    );
    let jobs = [
        fourier.as_str(),
        "triple q_weyl\ntriple-subst q_weyl h ; q = 1/3\nwave e q_exp_xz q=1/3 order=20\ntriple-wave h ; e\n",
        "triple q_bessel\ntriple-subst q_bessel h ; q = 1/2 ; u1 = 5 ; u2 = 1/7\n\
         wave w q_bessel q=1/2 u=5,1/7 k=0 order=20\ntriple-wave h ; w\n",
        "triple hermite\ntriple-wave hermite\n",
    ];
    for job in jobs {
        let r = run(job);
        assert!(r.passed(), "{}", r.to_text());
    }
}

#[test]
fn a_wrong_image_is_caught() {
    let r = run(
        "triple q_weyl\ntriple-subst q_weyl h ; q = 1/2\nwave e q_exp_xz q=1/2 order=20\n\
                 wave-check e ; h.src ; d ; h.tgt ; z\n",
    );
    assert!(!r.passed(), "{}", r.to_text());
}
