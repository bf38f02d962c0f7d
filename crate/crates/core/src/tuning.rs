//! Data-driven choice of the tuning parameter β: minimize an empirical
//! mean-square-error criterion anchored at a fixed pilot fit.

use crate::error::{Error, Result};
use crate::estimate::{fit_mdpde, FitOptions};
use crate::model::{ModelFamily, Sample, Theta};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct TuningResult {
    pub beta_opt: f64,
    pub grid: Vec<f64>,
    /// Empirical MSE per grid point; `None` where the fit failed (those
    /// points are excluded from the minimization).
    pub mse_curve: Vec<Option<f64>>,
    pub pilot_beta: f64,
    pub theta_pilot: Theta,
}

/// Default β grid: 0 to 1 in steps of 0.01.
pub fn default_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// For each β in the grid, MSE(β) = ‖θ̂_β - θ̂_pilot‖² + trace(Σ(θ̂_β))/n;
/// the squared distance to the pilot proxies the bias and the trace term
/// is the first-order variance. Ties break toward the smaller β.
pub fn select_beta(
    family: &dyn ModelFamily,
    sample: &Sample,
    grid: Option<&[f64]>,
    pilot_beta: f64,
    options: &FitOptions,
) -> Result<TuningResult> {
    let grid: Vec<f64> = match grid {
        Some(g) if !g.is_empty() => g.to_vec(),
        Some(_) => return Err(Error::InvalidInput("empty tuning grid".into())),
        None => default_grid(),
    };
    if grid.iter().any(|b| *b < 0.0) {
        return Err(Error::Domain("tuning grid must be nonnegative".into()));
    }
    let pilot = fit_mdpde(family, sample, pilot_beta, options)?;
    let n = sample.len() as f64;
    let p = family.dim();

    let mut curve = Vec::with_capacity(grid.len());
    let mut best: Option<(f64, f64)> = None;
    let mut warm = options.clone();
    for &beta in &grid {
        let fit = match fit_mdpde(family, sample, beta, &warm) {
            Ok(f) => f,
            Err(e) => {
                log::warn!("tuning grid point beta={beta} failed: {e}");
                curve.push(None);
                continue;
            }
        };
        warm.init = Some(fit.theta_hat.clone());
        let bias2: f64 = (0..p)
            .map(|i| (fit.theta_hat[i] - pilot.theta_hat[i]).powi(2))
            .sum();
        let variance: f64 = (0..p).map(|i| fit.sigma.get(i, i)).sum::<f64>() / n;
        let mse = bias2 + variance;
        curve.push(Some(mse));
        let improves = match best {
            None => true,
            Some((_, cur)) => mse < cur,
        };
        if improves {
            best = Some((beta, mse));
        }
    }
    let (beta_opt, _) = best.ok_or_else(|| {
        Error::NonConvergence {
            best: vec![],
            iterations: 0,
            gradient_norm: f64::NAN,
        }
    })?;
    Ok(TuningResult {
        beta_opt,
        grid,
        mse_curve: curve,
        pilot_beta,
        theta_pilot: pilot.theta_hat,
    })
}
