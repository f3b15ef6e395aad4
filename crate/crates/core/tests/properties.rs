mod common;

use common::{adjoint, random_complex, random_hermitian, random_hpd, rng};
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;
use spectral_filter::filter::{filter_eigs, projection_matrix, Policy, ReferenceSubspace};
use spectral_filter::galerkin::{solve_galerkin, spectral_window, Interval, Pencil};
use spectral_filter::linalg::{
    generalized_eig, hausdorff_distance, hermitian_eig, subspace_gap, symmetric_gap,
    HermitianMatrix, RealSet,
};
use spectral_filter::models::{fem, Model, Refinement};
use spectral_filter::filter::TrialFamily;

fn max_dev_from_identity(g: &Array2<Complex64>) -> f64 {
    g.indexed_iter()
        .map(|((i, j), z)| (z - if i == j { 1.0 } else { 0.0 }).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermitian_eig_residual_and_orthonormality(seed in any::<u64>(), n in 1usize..12) {
        let h = random_hermitian(&mut rng(seed), n);
        let eig = hermitian_eig(&h, 1e-10).unwrap();
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let v = &eig.vectors;
        prop_assert!(max_dev_from_identity(&adjoint(v).dot(v)) < 1e-12);
        let hv = h.as_array().dot(v);
        for (j, &lambda) in eig.values.iter().enumerate() {
            for i in 0..n {
                prop_assert!((hv[(i, j)] - v[(i, j)] * lambda).norm() < 1e-11);
            }
        }
        let trace: f64 = eig.values.iter().sum();
        prop_assert!((trace - h.trace()).abs() < 1e-11 * (1.0 + h.frobenius_norm()) * n as f64);
    }

    #[test]
    fn generalized_eig_is_mass_orthonormal(seed in any::<u64>(), n in 1usize..10) {
        let mut r = rng(seed);
        let a = random_hermitian(&mut r, n);
        let m = random_hpd(&mut r, n);
        let eig = generalized_eig(&a, &m, 1e-10).unwrap();
        let mv = m.as_array().dot(&eig.vectors);
        prop_assert!(max_dev_from_identity(&adjoint(&eig.vectors).dot(&mv)) < 1e-9);
    }

    #[test]
    fn eigensolver_is_deterministic(seed in any::<u64>(), n in 1usize..8) {
        let h = random_hermitian(&mut rng(seed), n);
        let a = hermitian_eig(&h, 1e-10).unwrap();
        let b = hermitian_eig(&h, 1e-10).unwrap();
        prop_assert_eq!(a.values, b.values);
        prop_assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn hausdorff_is_a_metric_on_samples(
        a in prop::collection::vec(-10.0f64..10.0, 1..6),
        b in prop::collection::vec(-10.0f64..10.0, 1..6),
        c in prop::collection::vec(-10.0f64..10.0, 1..6),
    ) {
        let (sa, sb, sc) = (RealSet::new(a), RealSet::new(b), RealSet::new(c));
        let d = |x: &RealSet, y: &RealSet| hausdorff_distance(x, y).unwrap();
        prop_assert_eq!(d(&sa, &sa), 0.0);
        prop_assert_eq!(d(&sa, &sb), d(&sb, &sa));
        prop_assert!(d(&sa, &sc) <= d(&sa, &sb) + d(&sb, &sc) + 1e-12);
    }

    #[test]
    fn gap_is_basis_independent_and_bounded(seed in any::<u64>(), n in 2usize..8) {
        let mut r = rng(seed);
        let g = random_hpd(&mut r, n);
        let k = 1 + (seed as usize) % (n - 1);
        let u = random_complex(&mut r, n, k);
        let v = random_complex(&mut r, n, k);
        let gap = subspace_gap(&u, &v, &g).unwrap();
        prop_assert!((0.0..=1.0).contains(&gap));
        prop_assert!(subspace_gap(&u, &u, &g).unwrap() < 1e-7);
        let mix = random_complex(&mut r, k, k);
        let gap2 = subspace_gap(&u.dot(&mix), &v, &g).unwrap();
        prop_assert!((gap - gap2).abs() < 1e-6);
        let sym = symmetric_gap(&u, &v, &g).unwrap();
        prop_assert!(sym >= gap - 1e-15);
    }

    #[test]
    fn projection_matrix_depends_only_on_the_reference_span(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let pencil = Pencil::new(random_hermitian(&mut r, n), random_hpd(&mut r, n), "p").unwrap();
        let spec = solve_galerkin(&pencil).unwrap();
        let window = spectral_window(&spec, Interval::new(-1e9, 1e9).unwrap(), "p");
        let k = 1 + (seed as usize) % n;
        let b = random_complex(&mut r, n, k);
        let mix = random_complex(&mut r, k, k) + Array2::<Complex64>::eye(k) * Complex64::new(3.0, 0.0);
        let s1 = projection_matrix(
            &window,
            &ReferenceSubspace::from_basis(b.clone(), pencil.mass(), "b").unwrap(),
            pencil.mass(),
        ).unwrap();
        let s2 = projection_matrix(
            &window,
            &ReferenceSubspace::from_basis(b.dot(&mix), pencil.mass(), "bm").unwrap(),
            pencil.mass(),
        ).unwrap();
        for (x, y) in s1.as_array().iter().zip(s2.as_array()) {
            prop_assert!((x - y).norm() < 1e-8);
        }
        // the window is everything, so S is the projector onto L: trace = dim L
        prop_assert!((s1.trace() - k as f64).abs() < 1e-9);
    }

    #[test]
    fn selection_sizes(values in prop::collection::vec(0.0f64..=1.0, 1..10), t in 0.0f64..=1.0) {
        let s = HermitianMatrix::from_diagonal(&values);
        let auto = filter_eigs(&s, Policy::AutoGap).unwrap();
        prop_assert!(auto.d <= values.len());
        prop_assert!(auto.sigma_p.windows(2).all(|w| w[0] >= w[1]));
        let thr = filter_eigs(&s, Policy::Threshold(t)).unwrap();
        prop_assert_eq!(thr.d, values.iter().filter(|&&v| v >= t).count());
        prop_assert!(thr.head().iter().all(|&v| v >= t));
    }

    #[test]
    fn policy_display_roundtrip(d in 1usize..100, t in 0.0f64..=1.0) {
        for p in [Policy::AutoGap, Policy::ExpectedDim(d), Policy::Threshold(t)] {
            prop_assert_eq!(p.to_string().parse::<Policy>().unwrap(), p);
        }
    }
}

#[test]
fn nesting_is_exact_across_levels() {
    for model in [Model::Model2, Model::Model3] {
        for (c, f) in [(2, 4), (2, 32), (8, 64)] {
            let (c, f) = (Refinement::Mesh(c), Refinement::Mesh(f));
            let t = spectral_filter::linalg::complexify(&model.inclusion(&c, &f).unwrap());
            let coarse = model.pencil(&c).unwrap();
            let fine = model.pencil(&f).unwrap();
            for (small, big) in [
                (coarse.mass(), fine.mass()),
                (coarse.stiffness(), fine.stiffness()),
            ] {
                let back = t.dot(&big.as_array().dot(&adjoint(&t)));
                let dev = back
                    .iter()
                    .zip(small.as_array())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                assert!(dev < 1e-12, "{model} {c} -> {f}: {dev:e}");
            }
        }
    }
}

#[test]
fn assembled_matrices_are_hermitian() {
    for model in [Model::Model2, Model::Model3] {
        let spaces: &[fem::Space] = match model {
            Model::Model2 => &[fem::Space::Dirichlet, fem::Space::Free],
            _ => &[fem::Space::Dirichlet, fem::Space::Free, fem::Space::Free],
        };
        let p = model.pencil(&Refinement::Mesh(16)).unwrap();
        assert_eq!(p.dim(), fem::layout(spaces, 16).0);
        // HermitianMatrix::new already rejected anything above 1e-12 relative asymmetry
        let a = p.stiffness().as_array();
        assert_eq!(a, &adjoint(&a.to_owned()));
    }
}
