use ncqm::grid::*;
use ncqm::group::*;
use ncqm::C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec() -> GridSpec {
    GridSpec::default()
}

fn bump(c: [f64; 2], w: f64, k: [f64; 2]) -> GridFunction {
    GridFunction::gaussian(spec(), c, w).mul_fn(|x, y| C64::from_polar(1.0, k[0] * x + k[1] * y))
}

#[test]
fn inner_product_basics() {
    let f = bump([0.3, -0.2], 1.0, [0.4, 0.1]);
    let g = bump([-0.5, 0.6], 0.8, [-0.2, 0.3]);
    assert!((f.inner(&f).unwrap().re - 1.0).abs() < 1e-6);
    assert_eq!(f.inner(&g).unwrap(), g.inner(&f).unwrap().conj());
    let other = GridFunction::zeros(GridSpec::new(64, 10.0).unwrap());
    assert_eq!(f.inner(&other), Err(ncqm::Error::SpecMismatch));
}

#[test]
fn parseval_and_roundtrip() {
    let f = bump([0.3, -0.2], 1.0, [0.4, 0.1]);
    let g = bump([-0.5, 0.6], 0.8, [-0.2, 0.3]);
    let (fh, gh) = (fourier(&f), fourier(&g));
    let a = f.inner(&g).unwrap();
    assert!((a - fh.inner(&gh).unwrap()).norm() < 1e-10 * a.norm());
    assert!(inv_fourier(&fh).max_abs_diff(&f) < 1e-12 * 1.0);
    assert_eq!(fh.spec, spec().dual());
}

#[test]
fn gaussian_is_self_dual() {
    let f = GridFunction::from_fn(spec(), |x, y| C64::new((-(x * x + y * y) / 2.0).exp(), 0.0));
    let fh = fourier(&f);
    let expect = GridFunction::from_fn(fh.spec, |k1, k2| C64::new((-(k1 * k1 + k2 * k2) / 2.0).exp(), 0.0));
    assert!(fh.max_abs_diff(&expect) < 1e-8);
}

#[test]
fn translation_becomes_phase() {
    let a = [0.37, -0.81];
    let f = bump([0.0, 0.0], 1.0, [0.0, 0.0]);
    let shifted = translate(&f, [-a[0], -a[1]]);
    let lhs = fourier(&shifted);
    let rhs = fourier(&f).mul_fn(|k1, k2| C64::from_polar(1.0, -(k1 * a[0] + k2 * a[1])));
    assert!(lhs.max_abs_diff(&rhs) < 1e-8);
    // against the analytic shifted Gaussian
    let direct = GridFunction::gaussian(spec(), a, 1.0);
    assert!(shifted.max_abs_diff(&direct) < 1e-8);
}

#[test]
fn aligned_translation_is_a_roll() {
    let f = bump([0.1, 0.2], 1.0, [0.3, 0.0]);
    let h = spec().h();
    let t = translate(&f, [3.0 * h, -2.0 * h]);
    assert_eq!(t.at(10, 20), f.at(13, 18));
}

#[test]
fn quarter_turn_is_exact_rotation() {
    let f = bump([1.0, 0.5], 0.9, [0.0, 0.0]);
    let r = rotate_quarter(&f, 1);
    // f(R⁻¹x) is centred at R c = (-0.5, 1)
    let expect = GridFunction::gaussian(spec(), [-0.5, 1.0], 0.9);
    assert!(r.max_abs_diff(&expect) < 1e-14);
    assert_eq!(rotate_quarter(&f, 4), f);
}

#[test]
fn bicubic_agrees_with_exact_rotation_roughly() {
    let f = bump([1.0, 0.5], 1.0, [0.0, 0.0]);
    let a = rotate_bicubic(&f, std::f64::consts::FRAC_PI_2);
    assert!(a.rel_diff(&rotate_quarter(&f, 1), &f) < 1e-10);
    let b = rotate_bicubic(&f, 0.3);
    let c = [1.0 * 0.3f64.cos() - 0.5 * 0.3f64.sin(), 1.0 * 0.3f64.sin() + 0.5 * 0.3f64.cos()];
    let expect = GridFunction::gaussian(spec(), c, 1.0);
    assert!(b.rel_diff(&expect, &expect) < 1e-2);
}

#[test]
fn spectral_derivative_of_gaussian() {
    let f = bump([0.0, 0.0], 1.0, [0.0, 0.0]);
    let d = derivative(&f, 0);
    let expect = f.mul_fn(|x, _| C64::new(-x, 0.0));
    assert!(d.max_abs_diff(&expect) < 1e-10);
}

#[test]
fn partial_transform_needs_self_dual_grid() {
    assert!(fourier_axis0(&bump([0.0, 0.0], 1.0, [0.0, 0.0]), false).is_err());
    let s = GridSpec::self_dual(128).unwrap();
    let f = GridFunction::gaussian(s, [0.5, -0.5], 1.0);
    let fh = fourier_axis0(&f, false).unwrap();
    assert!((fh.norm() - f.norm()).abs() < 1e-12);
    assert!(fourier_axis0(&fh, true).unwrap().max_abs_diff(&f) < 1e-12);
}

fn small_galilei(rng: &mut ChaCha8Rng, b: bool, rot: bool) -> GalileiElement {
    GalileiElement {
        theta: rng.random_range(-1.0..1.0),
        phi: rng.random_range(-1.0..1.0),
        angle: if rot { rng.random_range(0..4) as f64 * std::f64::consts::FRAC_PI_2 } else { 0.0 },
        b: if b { rng.random_range(-0.5..0.5) } else { 0.0 },
        v: [rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8)],
        a: [rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8)],
    }
}

#[test]
fn galilei_identity_and_unitarity() {
    let p = GalileiParams::new(1.0, 0.5).unwrap();
    let f = bump([0.2, -0.3], 1.0, [0.2, 0.1]);
    let id = apply_galilei_config(&GalileiElement::identity(), &f, &p).unwrap();
    assert!(id.max_abs_diff(&f) < 1e-14);
    let fh = fourier(&f);
    assert!(apply_galilei_momentum(&GalileiElement::identity(), &fh, &p).unwrap().max_abs_diff(&fh) < 1e-14);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let g = small_galilei(&mut rng, false, false);
        let u = apply_galilei_config(&g, &f, &p).unwrap();
        assert!((u.norm() - f.norm()).abs() < 1e-10);
        let uh = apply_galilei_momentum(&g, &fh, &p).unwrap();
        assert!((uh.norm() - fh.norm()).abs() < 1e-10);
    }
}

#[test]
fn galilei_rejects_generic_angle() {
    let p = GalileiParams::new(1.0, 0.5).unwrap();
    let g = GalileiElement { angle: 0.4, ..GalileiElement::identity() };
    let f = bump([0.0, 0.0], 1.0, [0.0, 0.0]);
    assert_eq!(apply_galilei_config(&g, &f, &p).unwrap_err(), ncqm::Error::Rotation(0.4));
}

#[test]
fn galilei_representation_law_plain() {
    let p = GalileiParams::new(1.2, 0.7).unwrap();
    let f = bump([0.2, -0.3], 1.0, [0.2, 0.1]);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let (g, h) = (small_galilei(&mut rng, false, false), small_galilei(&mut rng, false, false));
        let lhs = apply_galilei_config(&g, &apply_galilei_config(&h, &f, &p).unwrap(), &p).unwrap();
        let rhs = apply_galilei_config(&compose_galilei(&g, &h, &p), &f, &p).unwrap();
        assert!(lhs.rel_diff(&rhs, &f) < 1e-6, "{}", lhs.rel_diff(&rhs, &f));
    }
}

#[test]
fn galilei_representation_law_with_time_and_quarter_turns() {
    let p = GalileiParams::new(0.9, -0.4).unwrap();
    let f = bump([0.2, -0.3], 1.0, [0.2, 0.1]);
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..20 {
        let (g, h) = (small_galilei(&mut rng, true, true), small_galilei(&mut rng, true, true));
        let lhs = apply_galilei_config(&g, &apply_galilei_config(&h, &f, &p).unwrap(), &p).unwrap();
        let rhs = apply_galilei_config(&compose_galilei(&g, &h, &p), &f, &p).unwrap();
        assert!(lhs.rel_diff(&rhs, &f) < 1e-6, "{}", lhs.rel_diff(&rhs, &f));
        let fh = fourier(&f);
        let lhs = apply_galilei_momentum(&g, &apply_galilei_momentum(&h, &fh, &p).unwrap(), &p).unwrap();
        let rhs = apply_galilei_momentum(&compose_galilei(&g, &h, &p), &fh, &p).unwrap();
        assert!(lhs.rel_diff(&rhs, &fh) < 1e-6);
    }
}

#[test]
fn momentum_and_configuration_pictures_agree() {
    let p = GalileiParams::new(1.0, 0.5).unwrap();
    let f = bump([0.2, -0.3], 1.0, [0.2, 0.1]);
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..20 {
        let g = small_galilei(&mut rng, true, true);
        let a = fourier(&apply_galilei_config(&g, &f, &p).unwrap());
        let b = apply_galilei_momentum(&g, &fourier(&f), &p).unwrap();
        assert!(a.rel_diff(&b, &a) < 1e-6, "{g:?}: {}", a.rel_diff(&b, &a));
    }
}

#[test]
fn free_evolution_semigroup() {
    let f = bump([0.2, -0.3], 1.0, [0.2, 0.1]);
    let (b1, b2, m) = (0.3, -0.7, 1.4);
    let a = free_evolution(&free_evolution(&f, b1, m), b2, m);
    let b = free_evolution(&f, b1 + b2, m);
    assert!(a.rel_diff(&b, &f) < 1e-10);
    assert!((free_evolution(&f, 0.9, m).norm() - f.norm()).abs() < 1e-12);
}

fn grid_exact(rng: &mut ChaCha8Rng, ext: Extension) -> TransElement {
    let h = spec().h();
    let mut k = || rng.random_range(-8i32..=8) as f64 * h;
    let (q, p) = ([k(), k()], [k(), k()]);
    let mut phases = [0.0; 3];
    for ph in phases.iter_mut().take(ext.phase_count()) {
        *ph = rng.random_range(-1.0..1.0);
    }
    TransElement { phases, q, p, ext }
}

#[test]
fn translation_group_representations() {
    let f = bump([0.2, -0.3], 1.0, [0.2, 0.1]);
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for ext in [Extension::double(1.3, -0.8), Extension::triple(0.9, 1.7, -1.2)] {
        let apply = |g: &TransElement, f: &GridFunction| {
            if ext.arity == Arity::Double { apply_double(g, f) } else { apply_triple(g, f) }.unwrap()
        };
        assert!(apply(&TransElement::identity(ext), &f).max_abs_diff(&f) < 1e-15);
        for _ in 0..100 {
            let (g, h) = (grid_exact(&mut rng, ext), grid_exact(&mut rng, ext));
            let lhs = apply(&g, &apply(&h, &f));
            let rhs = apply(&compose_trans(&g, &h).unwrap(), &f);
            assert!(lhs.rel_diff(&rhs, &f) < 1e-10, "{ext:?}: {}", lhs.rel_diff(&rhs, &f));
            assert!((apply(&g, &f).norm() - f.norm()).abs() < 1e-12);
        }
    }
}

#[test]
fn wrong_arity_rejected() {
    let f = bump([0.0, 0.0], 1.0, [0.0, 0.0]);
    let t = TransElement::identity(Extension::triple(1.0, 1.0, 1.0));
    assert!(apply_double(&t, &f).is_err());
}

#[test]
fn direction_count_checked() {
    let f = bump([0.0, 0.0], 1.0, [0.0, 0.0]);
    let rep = RepParams::Double(Extension::double(1.0, 1.0));
    assert!(rep.apply_direction(6, 0.1, &f).is_err());
}

#[test]
fn binary_dump_roundtrip_through_io() {
    let f = bump([0.2, -0.3], 1.0, [0.2, 0.1]);
    let mut buf = Vec::new();
    f.write_to(&mut buf).unwrap();
    assert_eq!(buf.len(), 16 + 16 * 128 * 128);
    assert_eq!(&buf[..8], &128u64.to_le_bytes());
    assert_eq!(GridFunction::read_from(buf.as_slice()).unwrap(), f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fourier_roundtrip_random(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = GridSpec::new(32, 4.0).unwrap();
        let mut f = GridFunction::zeros(s);
        for v in f.values.iter_mut() {
            *v = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        prop_assert!(inv_fourier(&fourier(&f)).max_abs_diff(&f) < 1e-12);
        prop_assert!((fourier(&f).norm() - f.norm()).abs() < 1e-10 * f.norm());
    }
}
