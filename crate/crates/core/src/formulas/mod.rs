//! Integral representation formulas as executable reconstructions.
//!
//! Every formula takes its normalization constant `kappa` explicitly. The
//! constant that makes a formula exact is [`FormulaId::reference_constant`];
//! [`calibrate`] measures it from known solutions and compares it with the
//! constants printed in the literature ([`FormulaId::printed_candidates`]).
//!
//! Orientation conventions (all with `kappa > 0`):
//!
//! | formula | reconstruction |
//! |---|---|
//! | `cauchy_p` | `P(f(y)) = κ P(∮ p n f / x_n^{n-2})` |
//! | `cauchy_full` | `f(y) = κ y_n^{n-2} ∮ (E n f - F n̂ f̂)` |
//! | `cauchy_q` | `Q(f(y)) = κ y_n^{n-2} Q(∮ q n f - ∫ q Mf)` |
//! | `greens_hyperbolic` | `h(y) = κ P(∮ (p n h - G n Mh) / x_n^{n-2})` |
//! | `greens_prime` | `u(y) = κ y_n^{n-2} Q(∮ (q n u - H n Mu) - ∫ H Δ'u) e_n` |
//! | `borel_pompeiu` | `f(y) = κ y_n^{n-2} [∮ (E n f - F n̂ f̂) - ∫ (E Mf - F (Mf)^)]` |
//! | `poisson` | `u(y) = κ ∫_{R^{n-1}} K(x, y) φ(x) dx` |

mod calibrate;
mod cauchy;
mod conformal;
mod green;
mod plemelj;
mod poisson;
mod teodorescu;
mod volume;

pub use calibrate::{calibrate, calibrate_with, CalibrationResult, CalibrationSettings, NO_MATCH};
pub use cauchy::{borel_pompeiu, borel_pompeiu_p, cauchy_full, cauchy_p, cauchy_q, cauchy_q_with_volume};
pub use conformal::{
    conformal_covariance_residual, default_probes, laplacian_covariance_residual, power_function, transformed_cauchy,
    CovarianceMode, LaplacianKind, PowerFunction, TransformedField,
};
pub use green::{greens_hyperbolic, greens_prime, greens_prime_real, greens_prime_with_volume};
pub use plemelj::{
    cauchy_layer, discrete_pairing, hardy_project, kerzman_stein, kerzman_stein_nystrom, kerzman_stein_pv,
    plemelj_boundary, pv_adjoint, pv_value, HardyField, PlemeljConfig, PlemeljResult, Sphere,
};
pub use poisson::{
    poisson_boundary_limit, poisson_extend, poisson_mass, poisson_rule, poisson_tail_bound, PoissonExtension,
};
pub use teodorescu::{teodorescu, teodorescu_constant, teodorescu_m, TeodorescuField};
pub use volume::{
    adapted_rule, green_volume_potential, h_volume_potential, prime_volume_potential, volume_potential, PotentialField,
    PotentialKind,
};

use alloc::vec::Vec;

use num_traits::Float;

use crate::calculus::CliffordField;
use crate::clifford::{Multivector, Point};
use crate::error::{Error, Result};
use crate::kernels::omega;

/// Formulas with a calibrated constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaId {
    CauchyP,
    CauchyFull,
    CauchyQ,
    GreensHyperbolic,
    GreensPrime,
    BorelPompeiu,
    Poisson,
}

impl FormulaId {
    pub const ALL: [FormulaId; 7] = [
        FormulaId::CauchyP,
        FormulaId::CauchyFull,
        FormulaId::CauchyQ,
        FormulaId::GreensHyperbolic,
        FormulaId::GreensPrime,
        FormulaId::BorelPompeiu,
        FormulaId::Poisson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::CauchyP => "cauchy_P",
            FormulaId::CauchyFull => "cauchy_full",
            FormulaId::CauchyQ => "cauchy_Q",
            FormulaId::GreensHyperbolic => "greens_hyperbolic",
            FormulaId::GreensPrime => "greens_prime",
            FormulaId::BorelPompeiu => "borel_pompeiu",
            FormulaId::Poisson => "poisson",
        }
    }

    pub fn from_name(s: &str) -> Option<FormulaId> {
        FormulaId::ALL.iter().copied().find(|f| f.name() == s)
    }

    /// The constant that makes the formula exact in the orientation used here.
    pub fn reference_constant(self, n: usize) -> f64 {
        let w = omega(n);
        let p = 2f64.powi(n as i32 - 2);
        match self {
            FormulaId::CauchyP | FormulaId::GreensHyperbolic => 1.0 / (p * w),
            FormulaId::CauchyFull
            | FormulaId::CauchyQ
            | FormulaId::GreensPrime
            | FormulaId::BorelPompeiu
            | FormulaId::Poisson => p / w,
        }
    }

    /// Constants printed for this formula, expressed in the orientation used
    /// here (printed Green formulas integrate the opposite combination, so
    /// their constants change sign).
    pub fn printed_candidates(self, n: usize) -> Vec<(&'static str, f64)> {
        let w = omega(n);
        let p2 = 2f64.powi(n as i32 - 2);
        let p1 = 2f64.powi(n as i32 - 1);
        match self {
            FormulaId::CauchyP => alloc::vec![
                ("2^(n-2)/omega_n (P-part Cauchy formula)", p2 / w),
                ("1/omega_n (P-part Borel-Pompeiu)", 1.0 / w),
            ],
            FormulaId::CauchyFull => alloc::vec![
                ("2^(n-1)/omega_n (combined P/Q formula)", p1 / w),
                ("2^(n-2)/omega_n (E/F jump relation and Plemelj)", p2 / w),
            ],
            FormulaId::CauchyQ => alloc::vec![
                ("2^(n-2)/omega_n (Q-part Cauchy formula)", p2 / w),
                ("2^(n-1)/omega_n (combined P/Q formula)", p1 / w),
            ],
            FormulaId::GreensHyperbolic => {
                alloc::vec![("-1/omega_n (hyperbolic Green formula, printed orientation)", -1.0 / w)]
            }
            FormulaId::GreensPrime => alloc::vec![
                (
                    "-2^(n-2)/omega_n (Green formula for the primed Laplacian, printed orientation)",
                    -p2 / w
                ),
                ("-1/omega_n (volume-corrected version, printed orientation)", -1.0 / w),
            ],
            FormulaId::BorelPompeiu => alloc::vec![
                ("(2y_n)^(n-2)/omega_n (full Borel-Pompeiu, second form)", p2 / w),
                (
                    "(2y_n)^(n-1)/omega_n at y_n = 1 (full Borel-Pompeiu, first form)",
                    p1 / w
                ),
            ],
            FormulaId::Poisson => alloc::vec![("2^(n-2)/omega_n (Poisson integral)", p2 / w)],
        }
    }
}

/// Outcome of one reconstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionReport {
    pub formula: &'static str,
    pub target: Point,
    pub reconstructed: Multivector,
    pub reference: Multivector,
    pub residual_abs: f64,
    pub residual_rel: f64,
    pub order: usize,
    pub kappa: f64,
}

impl ReconstructionReport {
    pub fn new(
        formula: &'static str,
        target: Point,
        reconstructed: Multivector,
        reference: Multivector,
        order: usize,
        kappa: f64,
    ) -> Self {
        let residual_abs = (&reconstructed - &reference).norm();
        let scale = reference.norm();
        let residual_rel = if scale > 0.0 {
            residual_abs / scale
        } else {
            residual_abs
        };
        ReconstructionReport {
            formula,
            target,
            reconstructed,
            reference,
            residual_abs,
            residual_rel,
            order,
            kappa,
        }
    }
}

/// Evaluate a field, rejecting points outside its domain and non-finite values.
pub(crate) fn eval_field<F: CliffordField + ?Sized>(f: &F, x: &Point) -> Result<Multivector> {
    if f.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: x.dim(),
        });
    }
    if !f.in_domain(x) {
        return Err(Error::Domain("field evaluated outside its domain"));
    }
    let v = f.eval(x);
    if !v.is_finite() {
        return Err(Error::Domain("field returned a non-finite value"));
    }
    Ok(v)
}

/// Extrapolate `v(s) = v0 + a s + b s²` from samples at `4s, 2s, s`.
pub fn richardson_quadratic(v4: &Multivector, v2: &Multivector, v1: &Multivector) -> Multivector {
    (v1.scale(8.0) - v2.scale(6.0) + v4).scale(1.0 / 3.0)
}

/// Extrapolate `v(s) = v0 + a s` from samples at `2s, s`.
pub fn richardson_linear(v2: &Multivector, v1: &Multivector) -> Multivector {
    v1.scale(2.0) - v2
}
