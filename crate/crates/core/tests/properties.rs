//! Invariants that must hold for arbitrary inputs.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use polyberg_core::frames::{h_eval, necessary_condition, necessary_threshold, sampling_sum};
use polyberg_core::halfplane::{make_lattice, HalfPlanePoint, IndexRange};
use polyberg_core::laguerre::{laguerre_poly, laguerre_recurrence};
use polyberg_core::multiplex::{decode_coefficients, encode};
use polyberg_core::polyspace::{basis_e, kernel_true, KernelSpec, PolyField};
use polyberg_core::transforms::{true_ber, ChannelSet, RPlusCoeffs};

fn pt(x: f64, s: f64) -> HalfPlanePoint<f64> {
    HalfPlanePoint::new(x, s).unwrap()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn signal(modes: usize) -> impl Strategy<Value = RPlusCoeffs<f64>> {
    prop::collection::vec(complex(), modes).prop_map(|c| RPlusCoeffs::new(c).unwrap())
}

fn channels(n: usize, modes: usize) -> impl Strategy<Value = ChannelSet<f64>> {
    prop::collection::vec(signal(modes), n).prop_map(|c| ChannelSet::new(c).unwrap())
}

fn table(order: usize, modes: usize) -> impl Strategy<Value = Vec<Vec<Complex64>>> {
    prop::collection::vec(prop::collection::vec(complex(), modes), order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laguerre_recurrence_matches_rational_path(n in 0usize..10, num in -40i64..200, den in 1i64..16) {
        let x = BigRational::new(num.into(), den.into());
        let exact = laguerre_recurrence(n, &BigRational::zero(), &x).to_f64().unwrap();
        let float = laguerre_poly(n, 0.0, num as f64 / den as f64).unwrap();
        prop_assert!((float - exact).abs() <= 1e-9 * exact.abs().max(1.0));
    }

    #[test]
    fn true_ber_is_linear(
        f in signal(5), g in signal(5), c in complex(), n in 0usize..4,
        x in -3.0..3.0f64, s in 0.1..4.0f64,
    ) {
        let z = pt(x, s);
        let lhs = true_ber(&f.add(&g.scale(c)), n, z);
        let rhs = true_ber(&f, n, z) + true_ber(&g, n, z) * c;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn codec_superposition_is_exact(f in channels(3, 6), g in channels(3, 6)) {
        let sum = ChannelSet::new(f.channels.iter().zip(&g.channels).map(|(a, b)| a.add(b)).collect()).unwrap();
        let d_sum = decode_coefficients(&encode(&sum).unwrap(), 3, 6).unwrap();
        let d_f = decode_coefficients(&encode(&f).unwrap(), 3, 6).unwrap();
        let d_g = decode_coefficients(&encode(&g).unwrap(), 3, 6).unwrap();
        for k in 0..3 {
            prop_assert_eq!(&d_sum.channels[k], &d_f.channels[k].add(&d_g.channels[k]));
        }
        prop_assert_eq!(d_f, f);
    }

    #[test]
    fn encoded_field_is_the_sum_of_true_components(f in channels(3, 4), x in -2.0..2.0f64, s in 0.2..3.0f64) {
        let z = pt(x, s);
        let via_field = encode(&f).unwrap().eval(z).unwrap();
        let direct: Complex64 = f.channels.iter().enumerate().map(|(k, c)| true_ber(c, k, z)).sum();
        prop_assert!((via_field - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
    }

    #[test]
    fn sampling_sum_is_quadratic_and_additive_over_levels(
        c in table(2, 4), scale in complex(), lo in -3i64..0, hi in 0i64..3,
    ) {
        let field = PolyField::from_coefficients(2, c.clone()).unwrap();
        let scaled = PolyField::from_coefficients(
            2,
            c.iter().map(|row| row.iter().map(|v| v * scale).collect()).collect(),
        )
        .unwrap();
        let ks = IndexRange::symmetric(6);
        let all = make_lattice(2.0, 1.0, IndexRange::new(lo, hi), ks).unwrap();
        let low = make_lattice(2.0, 1.0, IndexRange::new(lo, -1), ks).unwrap();
        let high = make_lattice(2.0, 1.0, IndexRange::new(0, hi), ks).unwrap();
        let base = sampling_sum(&field, &all).unwrap();
        let tol = 1e-12 * (1.0 + base);
        prop_assert!((sampling_sum(&scaled, &all).unwrap() - scale.norm_sqr() * base).abs() <= tol * (1.0 + scale.norm_sqr()));
        prop_assert!((sampling_sum(&field, &low).unwrap() + sampling_sum(&field, &high).unwrap() - base).abs() <= tol);
    }

    #[test]
    fn sampling_sum_grows_under_refinement(c in table(1, 5), extra in 1i64..4) {
        let field = PolyField::from_coefficients(1, c).unwrap();
        let coarse = make_lattice(2.0, 1.0, IndexRange::new(-2, 2), IndexRange::symmetric(4)).unwrap();
        let fine = make_lattice(2.0, 1.0, IndexRange::new(-2 - extra, 2 + extra), IndexRange::symmetric(4 + extra)).unwrap();
        prop_assert!(sampling_sum(&field, &fine).unwrap() >= sampling_sum(&field, &coarse).unwrap());
    }

    #[test]
    fn kernels_are_hermitian(
        n in 0usize..3, x1 in -1.5..1.5f64, s1 in 0.5..2.0f64, x2 in -1.5..1.5f64, s2 in 0.5..2.0f64,
    ) {
        let (z, w) = (pt(x1, s1), pt(x2, s2));
        for spec in [KernelSpec::basis_sum(n, 32).unwrap(), KernelSpec::rodrigues(n)] {
            let a = kernel_true(spec, z, w).unwrap().value;
            let b = kernel_true(spec, w, z).unwrap().value;
            prop_assert!((a - b.conj()).norm() <= 1e-10 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn kernel_diagonal_dominates_basis(n in 0usize..3, m in 0usize..8, x in -1.0..1.0f64, s in 0.6..1.6f64) {
        // |ẽ(z)|² <= K(z, z), since K(z, z) = Σ |ẽ_m(z)|²
        let z = pt(x, s);
        let e = basis_e(n, m, z) / (std::f64::consts::PI * (m + 1) as f64).sqrt();
        let k = kernel_true(KernelSpec::basis_sum(n, 32).unwrap(), z, z).unwrap().value;
        prop_assert!(k.im.abs() <= 1e-12 * k.re);
        prop_assert!(e.norm_sqr() <= k.re * (1.0 + 1e-12));
    }

    #[test]
    fn necessary_condition_is_a_strict_comparison(
        a in 1.01..8.0f64, b in 0.01..30.0f64, n in 0usize..4, alpha in 0.0..3.0f64,
    ) {
        let r = necessary_condition(a, b, n, alpha).unwrap();
        prop_assert_eq!(r.satisfied, r.value < r.threshold);
        prop_assert!((r.margin - (r.threshold - r.value)).abs() <= 1e-12 * r.threshold);
        prop_assert!(necessary_threshold(n + 1, alpha) > necessary_threshold(n, alpha));
    }

    #[test]
    fn h_is_quasi_periodic(x in -2.0..2.0f64, s in 0.3..3.0f64, b in 0.7..1.5f64) {
        let z = pt(x, s);
        let a = 2.0;
        let hz = h_eval(z, a, b, 80).unwrap();
        prop_assume!(hz.norm() > 1e-8);
        let haz = h_eval(z.scaled(a), a, b, 80).unwrap();
        let factor = (-2.0 * std::f64::consts::PI / b).exp();
        prop_assert!((haz + hz * factor).norm() <= 1e-6 * hz.norm());
    }
}
