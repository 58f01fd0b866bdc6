//! Property-based invariants: function-inverse round trips, symmetry
//! extensions, similarity invariance and unit-speed sampling over random
//! parameter draws.

use pelastica::curvekit::{leaf, similarity_transform, wavelike_arc};
use pelastica::geom;
use pelastica::pelliptic::{amplitude_am, incomplete_e, incomplete_f, Modulus, PExponent};
use pelastica::vecn::MatN;
use proptest::prelude::*;

fn pex(v: f64) -> PExponent {
    PExponent::new(v).unwrap()
}

fn modulus(v: f64) -> Modulus {
    Modulus::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn amplitude_inverts_first_kind(
        p in 1.1f64..6.0,
        q in 0.05f64..0.97,
        x in 0.01f64..1.55,
    ) {
        let s = incomplete_f(pex(p), x, modulus(q)).unwrap();
        let back = amplitude_am(pex(p), s, modulus(q)).unwrap();
        prop_assert!((back - x).abs() < 1e-9, "p={p} q={q} x={x}: {back}");
    }

    #[test]
    fn second_kind_extension_and_oddness(
        p in 1.1f64..6.0,
        q in 0.0f64..1.0,
        x in 0.0f64..2.0,
    ) {
        let pe = pex(p);
        let qm = modulus(q);
        let half = incomplete_e(pe, std::f64::consts::FRAC_PI_2, qm).unwrap();
        let base = incomplete_e(pe, x, qm).unwrap();
        let shifted = incomplete_e(pe, x + std::f64::consts::PI, qm).unwrap();
        prop_assert!((shifted - base - 2.0 * half).abs() < 1e-10);
        let neg = incomplete_e(pe, -x, qm).unwrap();
        prop_assert!((neg + base).abs() < 1e-12);
    }

    #[test]
    fn first_kind_monotone_in_x(
        p in 1.1f64..6.0,
        q in 0.0f64..0.95,
        x in 0.05f64..1.5,
    ) {
        let pe = pex(p);
        let qm = modulus(q);
        let lo = incomplete_f(pe, x, qm).unwrap();
        let hi = incomplete_f(pe, x + 0.05, qm).unwrap();
        prop_assert!(hi > lo, "p={p} q={q}: F not increasing at {x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn normalized_energy_invariant_under_random_similarity(
        scale in 0.3f64..3.0,
        angle in 0.0f64..std::f64::consts::TAU,
        tx in -5.0f64..5.0,
        ty in -5.0f64..5.0,
    ) {
        let p = pex(2.0);
        let c = leaf(p, 1e-3).unwrap();
        let before = geom::bending_energy(&c, p).unwrap().normalized;
        let rot = MatN::from_rows(&[
            vec![angle.cos(), -angle.sin()],
            vec![angle.sin(), angle.cos()],
        ]);
        let moved = similarity_transform(&c, scale, &rot, &[tx, ty]).unwrap();
        let after = geom::bending_energy(&moved, p).unwrap().normalized;
        prop_assert!(
            (before - after).abs() <= 1e-10 * before,
            "{before} vs {after}"
        );
    }

    #[test]
    fn wavelike_arcs_are_unit_speed(
        p in 1.2f64..5.0,
        q in 0.2f64..0.95,
        span in 1.0f64..6.0,
    ) {
        let c = wavelike_arc(pex(p), modulus(q), (0.0, span), 1e-3).unwrap();
        let defect = c.unit_speed_defect();
        prop_assert!(defect < 1e-6, "p={p} q={q} span={span}: defect {defect}");
    }
}
