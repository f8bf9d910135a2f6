//! Cross-module integration checks through the public API only: the
//! closed-form moment layer, the quadrature layer, and the eigen-residual
//! layer must all tell one consistent story for every family.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use squeezelab::eigensystem::{apply_ladder, eigenfunction, solve_family};
use squeezelab::moments::{
    closed_form_moments, ground_state_moments, quadrature_moments, squeeze_report, QuadratureSpec,
    SqueezeFlag, ORACLE_REL_TOL,
};
use squeezelab::validator::{gram_matrix, hamiltonian_residual, property_suite};
use squeezelab::{DeformationParams, Family};

fn lambda_grid(family: Family) -> Vec<f64> {
    match family {
        Family::Harmonic => vec![0.0],
        Family::ShiftedCreation => vec![0.25, 0.5, 1.0, 1.5, 2.5],
        Family::FamilyI => vec![-1.5, -0.5, 0.0, 0.5, 1.0, 2.0],
        Family::FamilyII => vec![0.25, 0.5, 1.0, 3.0, 4.0, 9.0, 16.0],
        Family::FamilyIII => vec![-0.8, -0.5, -0.2, 0.2, 0.5, 0.8],
    }
}

#[test]
fn every_family_keeps_its_three_layers_consistent() {
    for family in squeezelab::operator_algebra::ALL_FAMILIES {
        for lambda in lambda_grid(family) {
            for n in 0..=7u32 {
                let solution = solve_family(family, lambda, n)
                    .unwrap_or_else(|e| panic!("{family} λ={lambda} n={n}: {e}"));

                // Residual layer: the state actually solves Hψ = (n+½)ψ.
                let residual = hamiltonian_residual(&solution.coeffs, &solution.state).unwrap();
                assert!(
                    residual.relative_residual < 1e-8,
                    "{family} λ={lambda} n={n}: residual {}",
                    residual.relative_residual
                );

                // Moment layer: quadrature vs closed form, where one exists.
                let quad = quadrature_moments(
                    &solution.state,
                    &QuadratureSpec::default_for_level(n),
                )
                .unwrap();
                assert!(quad.heisenberg_satisfied());
                match closed_form_moments(family, lambda, n) {
                    Ok(closed) => {
                        for (label, c, q) in [
                            ("mean_x", closed.mean_x, quad.mean_x),
                            ("var_x", closed.var_x, quad.var_x),
                            ("var_p", closed.var_p, quad.var_p),
                        ] {
                            assert!(
                                (c - q).abs() <= ORACLE_REL_TOL * c.abs().max(1.0),
                                "{family} λ={lambda} n={n} {label}: {c} vs {q}"
                            );
                        }
                    }
                    Err(squeezelab::Error::NoClosedForm { .. }) => {
                        assert_eq!(family, Family::FamilyIII);
                        assert!(n > 0);
                    }
                    Err(e) => panic!("{family} λ={lambda} n={n}: {e}"),
                }
            }
        }
    }
}

#[test]
fn squeeze_reports_agree_wherever_predictions_exist() {
    for family in squeezelab::operator_algebra::ALL_FAMILIES {
        for lambda in lambda_grid(family) {
            for n in 0..=5u32 {
                let report = squeeze_report(family, lambda, n).unwrap();
                if let Some(agreement) = report.agreement {
                    assert!(
                        agreement,
                        "{family} λ={lambda} n={n}: measured ({}, {}) predicted ({:?}, {:?})",
                        report.flag_x, report.flag_p, report.predicted_x, report.predicted_p
                    );
                }
            }
        }
    }
}

#[test]
fn ladder_images_stay_inside_the_neighbor_span() {
    // For canonical pairs the image of ψ_n under b or b⁺ lies in the span of
    // ψ_{n−1} and ψ_{n+1}; with a single-level fit the leftover is the other
    // neighbor, so the two-fit residual bookkeeping must be consistent:
    // coefficient² + (residual·‖f‖)² recovers ‖f‖² per level.
    for (family, lambda) in [
        (Family::Harmonic, 0.0),
        (Family::FamilyI, 1.0),
        (Family::FamilyII, 4.0),
        (Family::ShiftedCreation, 1.0),
        (Family::FamilyIII, 0.5),
    ] {
        let solution = solve_family(family, lambda, 3).unwrap();
        let (b, bp) = solution.params.ladder_pair();
        for op in [b, bp] {
            let app = apply_ladder(&solution.coeffs, &op, &solution.state).unwrap();
            assert_eq!(app.xs.len(), app.values.len());
            for fit in &app.fits {
                let reconstructed = (fit.coefficient.powi(2)
                    + (fit.relative_residual * app.l2_norm).powi(2))
                .sqrt();
                assert!(
                    (reconstructed - app.l2_norm).abs() <= 1e-6 * app.l2_norm.max(1e-12),
                    "{family} λ={lambda} level {}: ‖f‖ {} vs reconstructed {}",
                    fit.level,
                    app.l2_norm,
                    reconstructed
                );
            }
        }
    }
}

#[test]
fn random_hamiltonians_pass_the_full_stack() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260819);
    for _ in 0..25 {
        let params = DeformationParams::sample_admissible(&mut rng);
        let h = params.hamiltonian_coeffs().unwrap();
        let state = eigenfunction(&h, 3).unwrap();
        let residual = hamiltonian_residual(&h, &state).unwrap();
        assert!(residual.relative_residual < 1e-8);
        let quad = quadrature_moments(&state, &QuadratureSpec::default_for_level(3)).unwrap();
        assert!(quad.heisenberg_satisfied());
        let ground = ground_state_moments(&h).unwrap();
        assert!((ground.product - 0.5).abs() <= 1e-10);
    }
}

#[test]
fn orthonormality_splits_exactly_along_self_adjointness() {
    for family in squeezelab::operator_algebra::ALL_FAMILIES {
        let lambda = family.reference_lambda();
        let h = family.preset(lambda).unwrap().hamiltonian_coeffs().unwrap();
        let gram = gram_matrix(&h, 6).unwrap();
        let deviation = gram.max_identity_deviation();
        if h.is_self_adjoint(1e-12) {
            assert!(deviation <= 1e-10, "{family}: deviation {deviation}");
        } else {
            assert!(deviation > 1e-3, "{family}: deviation {deviation}");
        }
    }
}

#[test]
fn property_suite_passes_from_the_outside() {
    let report = property_suite(30, 7);
    assert!(report.passed, "{:#?}", report.checks.iter().find(|c| !c.passed));
}

#[test]
fn boundary_classification_is_exact_at_the_threshold() {
    // var_x(family II) = (n+½)/λ crosses ½ exactly at λ = 2n+1, and those
    // grid values are representable, so the flag must read "boundary".
    for n in 0..=4u32 {
        let lambda = (2 * n + 1) as f64;
        let report = squeeze_report(Family::FamilyII, lambda, n).unwrap();
        assert_eq!(report.predicted_x, Some(SqueezeFlag::Boundary), "n={n}");
        assert_eq!(report.agreement, Some(true));
        // One step to either side resolves the flag.
        let below = squeeze_report(Family::FamilyII, lambda - 0.5, n).unwrap();
        assert_eq!(below.predicted_x, Some(SqueezeFlag::NotSqueezed));
        let above = squeeze_report(Family::FamilyII, lambda + 0.5, n).unwrap();
        assert_eq!(above.predicted_x, Some(SqueezeFlag::Squeezed));
    }
}
