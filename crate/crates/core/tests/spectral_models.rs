use lupinch_core::catalog::{clifford_family, geodesic_family, standard_models, veronese_family};
use lupinch_core::spectral::{
    main_theorem_check, product_spectrum, rayleigh_quotient, smallest_eigenvalues,
    torus_grid_operator, EigsOptions, GridOperator, SphereSpec,
};

#[test]
fn main_theorem_saturates_on_every_model() {
    for model in standard_models(10, 4).unwrap() {
        let rep = main_theorem_check(&model).unwrap();
        assert_eq!(rep.mu1, rep.spectrum.eigenvalues[0] - rep.sigma);
        if rep.applicable {
            assert!(rep.gap.abs() <= 1e-12, "{}: gap {}", rep.model, rep.gap);
            assert!((rep.mu1 + model.sigma).abs() <= 1e-12);
        } else {
            assert_eq!(rep.mu1, 0.0);
        }
    }
    assert!(main_theorem_check(&geodesic_family(4, 2).unwrap()).unwrap().note.is_some());
    let v = main_theorem_check(&veronese_family(3).unwrap()).unwrap();
    assert!((v.lambda2 - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn clifford_mu1_is_minus_n() {
    for n in 2..=10 {
        for r in 1..n {
            let rep = main_theorem_check(&clifford_family(r, n, 2).unwrap()).unwrap();
            assert!((rep.mu1 + n as f64).abs() <= 1e-12);
        }
    }
}

/// Brute-force sums over level pairs, independent of the merge logic.
#[test]
fn product_spectrum_is_complete_below_threshold() {
    for (k1, r1sq, k2, r2sq) in [(1, 0.5, 1, 0.5), (2, 0.4, 3, 0.6), (1, 1.0, 4, 2.0)] {
        let a = SphereSpec::from_radius_sq(k1, r1sq).unwrap();
        let b = SphereSpec::from_radius_sq(k2, r2sq).unwrap();
        let threshold = 40.0;
        let spec = product_spectrum(&[a, b], threshold).unwrap();
        let mut pairs: Vec<(f64, u64)> = Vec::new();
        for l1 in 0..60u64 {
            for l2 in 0..60u64 {
                let v = a.level_eigenvalue(l1) + b.level_eigenvalue(l2);
                if v <= threshold {
                    pairs.push((v, a.level_multiplicity(l1) * b.level_multiplicity(l2)));
                }
            }
        }
        let total: u64 = pairs.iter().map(|p| p.1).sum();
        assert_eq!(spec.multiplicities.iter().sum::<u64>(), total);
        for (v, _) in &pairs {
            assert!(spec.eigenvalues.iter().any(|e| (e - v).abs() <= 1e-12));
        }
        assert!(spec.eigenvalues.windows(2).all(|w| w[1] > w[0]));
    }
}

#[test]
fn grid_solver_matches_symbol_for_several_sizes() {
    for n in [6usize, 12, 24, 48] {
        let g = torus_grid_operator(n, 2.0).unwrap();
        let exact = g.exact_spectrum();
        let out = smallest_eigenvalues(&g, 3, &EigsOptions::default()).unwrap();
        assert_eq!(out.values.len(), 3);
        for (v, e) in out.values.iter().zip(&exact) {
            assert!((v - e).abs() <= 1e-9, "N={n}");
        }
    }
}

#[test]
fn rayleigh_quotients_never_undercut_the_ground_state() {
    let g: GridOperator = torus_grid_operator(24, 2.0).unwrap();
    let ground = smallest_eigenvalues(&g, 1, &EigsOptions::default()).unwrap().values[0];
    let modes = [(0.0, 1.0), (1.0, 0.0), (2.0, 3.0)];
    for (a, b) in modes {
        let f = g.sample(|u, v| (a * u / g.rho).cos() + (b * v / g.rho).sin() + 0.1);
        assert!(rayleigh_quotient(&g, &f).unwrap() >= ground - 1e-10);
    }
}
