use ncqm::group::*;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn double_composition_hand_value() {
    let g = TransElement::double(1.0, 1.0, 0.0, 0.0, [1.0, 0.0], [0.0, 0.0]);
    let g2 = TransElement::double(1.0, 1.0, 0.0, 0.0, [0.0, 0.0], [1.0, 0.0]);
    let c = compose_double(&g, &g2).unwrap();
    assert_eq!(c.theta(), 0.5);
    assert_eq!(c.phi(), 0.0);
    assert_eq!(c.q, [1.0, 0.0]);
    assert_eq!(c.p, [1.0, 0.0]);
}

#[test]
fn triple_composition_adds_q_wedge() {
    let e = [1.0, 1.0, 2.0];
    let g = TransElement::triple(e, [0.0; 3], [1.0, 0.0], [0.0, 0.0]);
    let g2 = TransElement::triple(e, [0.0; 3], [0.0, 1.0], [0.0, 0.0]);
    // (γ/2) q∧q' = 1
    assert_eq!(compose_triple(&g, &g2).unwrap().psi(), 1.0);
}

#[test]
fn arity_and_extension_mismatch() {
    let d = TransElement::double(1.0, 1.0, 0.0, 0.0, [0.0; 2], [0.0; 2]);
    let t = TransElement::triple([1.0, 1.0, 1.0], [0.0; 3], [0.0; 2], [0.0; 2]);
    assert!(matches!(compose_trans(&d, &t), Err(ncqm::Error::Arity { .. })));
    assert!(compose_double(&t, &t).is_err());
    let d2 = TransElement::double(2.0, 1.0, 0.0, 0.0, [0.0; 2], [0.0; 2]);
    assert_eq!(compose_trans(&d, &d2), Err(ncqm::Error::ExtensionMismatch));
    assert!(TransElement::new(Extension::double(1.0, 1.0), &[0.0], [0.0; 2], [0.0; 2]).is_err());
}

fn galilei_sample(rng: &mut ChaCha8Rng) -> GalileiElement {
    use rand::Rng;
    GalileiElement {
        theta: rng.random_range(-2.0..2.0),
        phi: rng.random_range(-2.0..2.0),
        angle: rng.random_range(-3.0..3.0),
        b: rng.random_range(-2.0..2.0),
        v: [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
        a: [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
    }
}

#[test]
fn galilei_group_laws_on_1000_samples() {
    let params = GalileiParams::new(1.3, 0.7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let e = GalileiElement::identity();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (g, h, k) = (galilei_sample(&mut rng), galilei_sample(&mut rng), galilei_sample(&mut rng));
        let l = compose_galilei(&compose_galilei(&g, &h, &params), &k, &params);
        let r = compose_galilei(&g, &compose_galilei(&h, &k, &params), &params);
        worst = worst.max(l.distance(&r));
        worst = worst.max(compose_galilei(&g, &e, &params).distance(&g));
        worst = worst.max(compose_galilei(&e, &g, &params).distance(&g));
        let gi = inverse_galilei(&g, &params);
        worst = worst.max(compose_galilei(&g, &gi, &params).distance(&e));
        worst = worst.max(compose_galilei(&gi, &g, &params).distance(&e));
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn translation_group_laws_on_1000_samples() {
    for ext in [Extension::double(1.5, -0.5), Extension::triple(0.7, 1.1, -2.0)] {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let e = TransElement::identity(ext);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let (g, h, k) = (sample_trans(&mut rng, ext), sample_trans(&mut rng, ext), sample_trans(&mut rng, ext));
            let l = compose_trans(&compose_trans(&g, &h).unwrap(), &k).unwrap();
            let r = compose_trans(&g, &compose_trans(&h, &k).unwrap()).unwrap();
            worst = worst.max(l.distance(&r));
            worst = worst.max(compose_trans(&g, &e).unwrap().distance(&g));
            let gi = inverse_trans(&g);
            worst = worst.max(compose_trans(&g, &gi).unwrap().distance(&e));
            worst = worst.max(compose_trans(&gi, &g).unwrap().distance(&e));
        }
        assert!(worst < 1e-12, "{ext:?}: {worst}");
    }
}

#[test]
fn all_exponents_satisfy_axioms() {
    for (name, xi) in [
        ("mass", LocalExponent::GalileiMass(1.3)),
        ("plane", LocalExponent::GalileiPlane(0.7)),
        ("xi", LocalExponent::Xi),
        ("xi'", LocalExponent::XiPrime),
        ("xi''", LocalExponent::XiDoublePrime),
    ] {
        let r = check_exponent_axioms(&xi, 1000, 5).unwrap();
        assert!(r.max() < 1e-10, "{name}: {r:?}");
    }
}

fn cubic_corruption(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    0.5 * (a[0] * b[2] + a[1] * b[3] - a[2] * b[0] - a[3] * b[1]) + a[0] * a[0] * b[0]
}

#[test]
fn cubic_corruption_breaks_cocycle_identity() {
    let r = check_exponent_axioms(&LocalExponent::Custom(cubic_corruption), 200, 5).unwrap();
    assert!(r.cocycle > 1e-3, "{r:?}");
}

#[test]
fn symmetric_bilinear_addition_is_still_a_cocycle() {
    // adding q1 q1' is a coboundary, so the axioms keep holding
    let mut m = [[0.0; 4]; 4];
    m[0][0] = 1.0;
    let xi = LocalExponent::Combination(vec![(1.0, LocalExponent::Xi), (1.0, LocalExponent::Bilinear(m))]);
    assert!(check_exponent_axioms(&xi, 200, 5).unwrap().max() < 1e-10);
}

#[test]
fn inequivalence_witnesses() {
    let xs = [LocalExponent::Xi, LocalExponent::XiPrime, LocalExponent::XiDoublePrime];
    for i in 0..3 {
        for j in i + 1..3 {
            let w = antisymmetry_witness(&xs[i], &xs[j], 500).unwrap();
            assert!(w.antisymmetry < 1e-12, "{w:?}");
            assert!(w.witness > 0.1 && !w.degenerate, "{w:?}");
        }
    }
    let same = antisymmetry_witness(&LocalExponent::Xi, &LocalExponent::Xi, 50).unwrap();
    assert!(same.degenerate);
}

#[test]
fn witness_refuses_galilei_exponents() {
    assert!(antisymmetry_witness(&LocalExponent::GalileiMass(1.0), &LocalExponent::Xi, 5).is_err());
}

#[test]
fn exact_rational_golden_values() {
    let a = [rat(1, 2), rat(-1, 3), rat(2, 1), rat(5, 7)];
    let b = [rat(3, 1), rat(1, 4), rat(-1, 2), rat(2, 3)];
    // ½(q1 p1' + q2 p2' - p1 q1' - p2 q2') = ½(-1/4 - 2/9 - 6 - 5/28)
    let xi = evaluate_exponent_exact(&LocalExponent::Xi, &a, &b).unwrap();
    assert_eq!(xi, rat(-419, 126));
    // ½(p1 p2' - p2 p1') = ½(4/3 + 5/14)
    assert_eq!(evaluate_exponent_exact(&LocalExponent::XiPrime, &a, &b).unwrap(), rat(71, 84));
    // ½(q1 q2' - q2 q1') = ½(1/8 + 1)
    assert_eq!(evaluate_exponent_exact(&LocalExponent::XiDoublePrime, &a, &b).unwrap(), rat(9, 16));
    assert!(evaluate_exponent_exact(&LocalExponent::Custom(cubic_corruption), &a, &b).is_err());
}

#[test]
fn exact_cocycle_identity_on_rationals() {
    let comb = LocalExponent::Combination(vec![
        (1.0, LocalExponent::Xi),
        (0.5, LocalExponent::XiPrime),
        (-3.0, LocalExponent::XiDoublePrime),
    ]);
    let g = [rat(1, 3), rat(2, 5), rat(-7, 2), rat(1, 1)];
    let g1 = [rat(-2, 9), rat(3, 1), rat(1, 6), rat(-4, 5)];
    let g2 = [rat(5, 4), rat(-1, 7), rat(2, 3), rat(3, 8)];
    let sum = |a: &[BigRational; 4], b: &[BigRational; 4]| -> [BigRational; 4] {
        std::array::from_fn(|i| &a[i] + &b[i])
    };
    let ev = |a: &[BigRational; 4], b: &[BigRational; 4]| evaluate_exponent_exact(&comb, a, b).unwrap();
    let lhs = ev(&g2, &g1) + ev(&sum(&g2, &g1), &g);
    let rhs = ev(&g2, &sum(&g1, &g)) + ev(&g1, &g);
    assert_eq!(lhs, rhs);
}

#[test]
fn cocycle_values_by_hand() {
    let r = GalileiElement { a: [1.0, 0.0], ..GalileiElement::identity() };
    let r2 = GalileiElement::boost([2.0, 0.0]);
    // (m/2) a·v' = 1 for m = 1
    assert_eq!(galilei_cocycle1(&r, &r2, 1.0), 1.0);
    let s = GalileiElement::boost([1.0, 0.0]);
    let s2 = GalileiElement::boost([0.0, 1.0]);
    // (λ/2) v∧v' = λ/2
    assert_eq!(galilei_cocycle2(&s, &s2, 0.8), 0.4);
}

proptest! {
    #[test]
    fn translation_inverse_roundtrip(q1 in -5.0..5.0f64, q2 in -5.0..5.0f64, p1 in -5.0..5.0f64, p2 in -5.0..5.0f64, th in -3.0..3.0f64) {
        let ext = Extension::triple(1.0, -2.0, 0.5);
        let g = TransElement::triple([1.0, -2.0, 0.5], [th, 0.3, -0.1], [q1, q2], [p1, p2]);
        let e = TransElement::identity(ext);
        prop_assert!(compose_trans(&g, &inverse_trans(&g)).unwrap().distance(&e) < 1e-12);
    }

    #[test]
    fn galilei_inverse_roundtrip(angle in -3.0..3.0f64, b in -2.0..2.0f64, v1 in -2.0..2.0f64, a2 in -2.0..2.0f64) {
        let p = GalileiParams::new(0.8, 1.5).unwrap();
        let g = GalileiElement { theta: 0.2, phi: -0.4, angle, b, v: [v1, 0.5], a: [1.0, a2] };
        let e = GalileiElement::identity();
        prop_assert!(compose_galilei(&g, &inverse_galilei(&g, &p), &p).distance(&e) < 1e-12);
    }

    #[test]
    fn exponent_differences_are_antisymmetric(x in proptest::array::uniform4(-3.0..3.0f64), y in proptest::array::uniform4(-3.0..3.0f64)) {
        let ext = Extension::triple(1.0, 1.0, 1.0);
        let g = TransElement { phases: [0.0; 3], q: [x[0], x[1]], p: [x[2], x[3]], ext };
        let h = TransElement { phases: [0.0; 3], q: [y[0], y[1]], p: [y[2], y[3]], ext };
        for xi in [LocalExponent::Xi, LocalExponent::XiPrime, LocalExponent::XiDoublePrime] {
            let s = evaluate_exponent(&xi, &g, &h).unwrap() + evaluate_exponent(&xi, &h, &g).unwrap();
            prop_assert!(s.abs() < 1e-12);
        }
    }
}
