//! Measured normalising constants against the reference ones.

use hypclif_core::formulas::{calibrate_with, CalibrationSettings, FormulaId};

use super::{surface_cap, task, Ctx, Task};
use crate::config::Experiment;

const EXP: Experiment = Experiment::Calibrate;

/// Default settings with the order capped like the surface rules; the
/// Borel-Pompeiu probe also builds a volume rule of the same order.
///
/// Targets must stay three node spacings `πR/order` inside the sphere, so a
/// capped order also pulls the outermost probe in from `R/2`.
pub fn settings(n: usize) -> CalibrationSettings {
    let base = CalibrationSettings::default();
    let order = base.order.min(surface_cap(n));
    let reach = 1.0 - 3.0 * std::f64::consts::PI / order as f64;
    let probe_fractions = if reach >= 0.5 {
        base.probe_fractions.clone()
    } else {
        vec![0.0, 0.1, 0.2, 0.3, 0.4]
    };
    CalibrationSettings {
        order,
        probe_fractions,
        ..base
    }
}

pub(super) fn tasks<'a>(ctx: &'a Ctx<'a>, n: usize) -> Vec<Task<'a>> {
    FormulaId::ALL
        .into_iter()
        .map(|id| {
            task(move || match calibrate_with(id, n, &settings(n)) {
                Ok(r) => {
                    let param = format!(
                        "formula={} kappa={:.12e} reference={:.12e} order={} probes={} match={}",
                        id.name(),
                        r.kappa_measured,
                        r.kappa_reference,
                        settings(n).order,
                        r.probes,
                        r.best_match
                    );
                    let vs_ref = ((r.kappa_measured - r.kappa_reference) / r.kappa_reference).abs();
                    vec![
                        ctx.row(EXP, "kappa_spread", n, None, &param, Ok(r.spread)),
                        ctx.row(EXP, "kappa_vs_reference", n, None, &param, Ok(vs_ref)),
                    ]
                }
                Err(e) => {
                    let param = format!("formula={}", id.name());
                    vec![
                        ctx.row(EXP, "kappa_spread", n, None, &param, Err(e.clone())),
                        ctx.row(EXP, "kappa_vs_reference", n, None, &param, Err(e)),
                    ]
                }
            })
        })
        .collect()
}
