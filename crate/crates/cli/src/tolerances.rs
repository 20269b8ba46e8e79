//! The single defaults table of check tolerances.
//!
//! Every experiment and every acceptance test looks tolerances up here, so a
//! change to any threshold shows up as a diff of this file. Bump
//! [`VERSION`] whenever an entry changes.

/// Version of the table, recorded in JSON reports.
pub const VERSION: u32 = 1;

/// `(experiment, check, tolerance)`; a check passes when `value <= tolerance`.
pub const TABLE: &[(&str, &str, f64)] = &[
    // Relative errors; the split identities are coefficientwise exact.
    ("algebra-identities", "associativity", 1e-12),
    ("algebra-identities", "reverse_anti_automorphism", 1e-13),
    ("algebra-identities", "conjugate_anti_automorphism", 1e-13),
    ("algebra-identities", "grade_involution_automorphism", 1e-13),
    ("algebra-identities", "hat_automorphism", 1e-13),
    ("algebra-identities", "hat_involution", 0.0),
    ("algebra-identities", "p_split", 0.0),
    ("algebra-identities", "q_split", 0.0),
    ("algebra-identities", "q_prime", 1e-15),
    ("algebra-identities", "pq_reconstruction", 1e-15),
    ("algebra-identities", "vector_inverse", 1e-14),
    ("algebra-identities", "versor_norm", 1e-12),
    ("algebra-identities", "point_source_identity_e", 1e-12),
    ("algebra-identities", "point_source_identity_f", 1e-12),
    // Absolute deviations at unit-scale separations.
    ("kernel-residuals", "p_vs_fd", 1e-7),
    ("kernel-residuals", "h_vs_fd", 1e-7),
    ("kernel-residuals", "q_vs_fd", 1e-7),
    ("kernel-residuals", "dy_e_vs_fd", 1e-7),
    ("kernel-residuals", "dy_f_vs_fd", 1e-7),
    ("kernel-residuals", "m_x_p", 1e-5),
    ("kernel-residuals", "m_y_h", 1e-5),
    ("kernel-residuals", "m_y_point_source", 1e-5),
    ("kernel-residuals", "green_harmonic_x", 1e-4),
    ("kernel-residuals", "green_harmonic_y", 1e-4),
    ("kernel-residuals", "prime_green_y", 1e-4),
    // Relative reconstruction errors, except the exterior check which is
    // relative to the largest boundary value.
    ("cauchy", "full_constant", 1e-6),
    ("cauchy", "full_inversion_image", 1e-6),
    ("cauchy", "p_part", 1e-6),
    ("cauchy", "q_part", 1e-6),
    ("cauchy", "exterior_vanishes", 1e-8),
    ("borel-pompeiu", "full", 1e-5),
    ("borel-pompeiu", "p_part", 1e-5),
    ("green", "hyperbolic_one", 1e-5),
    ("green", "hyperbolic_x1", 1e-5),
    ("green", "hyperbolic_xn_power", 1e-5),
    ("green", "prime_xn_en", 1e-5),
    ("green", "prime_en_with_volume", 1e-5),
    ("teodorescu", "exterior_m", 1e-5),
    ("teodorescu", "interior_recovery", 1e-3),
    ("plemelj", "jump_constant", 2e-3),
    ("plemelj", "half_constant", 2e-3),
    ("plemelj", "jump_smooth", 2e-3),
    ("plemelj", "half_smooth", 2e-3),
    ("plemelj", "hardy_idempotent", 2e-3),
    ("plemelj", "hardy_annihilation", 2e-3),
    ("plemelj", "kerzman_stein_vs_pv", 1e-3),
    ("plemelj", "kerzman_stein_skew", 1e-10),
    ("poisson", "mass", 1e-5),
    ("poisson", "hyperbolic_harmonic", 1e-4),
    ("poisson", "boundary_limit", 1e-3),
    ("conformal", "hypermonogenic_pullback", 1e-5),
    ("conformal", "m_intertwining", 1e-4),
    ("conformal", "hyperbolic_laplacian_intertwining", 1e-4),
    ("conformal", "prime_laplacian_intertwining", 1e-4),
    ("conformal", "transformed_cauchy", 1e-6),
    ("calibrate", "kappa_spread", 1e-6),
    ("calibrate", "kappa_vs_reference", 1e-6),
    // Ratio of residuals at consecutive orders.
    ("convergence", "cauchy_full_ratio", 1.1),
    ("convergence", "borel_pompeiu_ratio", 1.1),
    ("convergence", "greens_hyperbolic_ratio", 1.1),
];

/// Tolerance for `(experiment, check)`.
///
/// # Panics
///
/// If the pair is missing from [`TABLE`]; every emitted check must be listed.
pub fn tolerance(experiment: &str, check: &str) -> f64 {
    TABLE
        .iter()
        .find(|(e, c, _)| *e == experiment && *c == check)
        .map(|t| t.2)
        .unwrap_or_else(|| panic!("no tolerance for {experiment}/{check}"))
}

/// Checks listed for `experiment`, in table order.
pub fn checks(experiment: &str) -> Vec<&'static str> {
    TABLE.iter().filter(|(e, _, _)| *e == experiment).map(|t| t.1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    #[test]
    fn every_experiment_has_checks_and_no_entry_repeats() {
        for e in Experiment::ALL {
            assert!(!checks(e.name()).is_empty(), "{e}");
        }
        for (i, a) in TABLE.iter().enumerate() {
            assert!(a.2 >= 0.0);
            assert!(TABLE[i + 1..].iter().all(|b| (a.0, a.1) != (b.0, b.1)), "{a:?}");
        }
    }
}
