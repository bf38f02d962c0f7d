//! Minimum density power divergence estimation.
//!
//! The divergence objective for tuning parameter β > 0 is
//!
//! ```text
//! H_n(θ) = ∫ f_θ^{1+β} - (1 + 1/β) n^{-1} Σ_i f_θ^β(X_i)
//! ```
//!
//! whose β → 0 limit is the negative mean log-likelihood. Its stationary
//! points solve the estimating equation
//!
//! ```text
//! n^{-1} Σ_i u_θ(X_i) f_θ^β(X_i) - ∫ u_θ f_θ^{1+β} = 0,
//! ```
//!
//! and the objective gradient is -(1+β) times that residual.
//!
//! Three solver strategies are driven here, selected by the family:
//! a scalar fixed-point iteration (exponential), damped Newton on the
//! residual (normal), and BFGS on the objective in log-parameter space
//! (Weibull).

use crate::error::{Error, Result};
use crate::matrix::{vec_norm, SquareMatrix};
use crate::model::{ModelFamily, Sample, SolverKind, Theta};
use serde::Serialize;

/// Options controlling [`fit_mdpde`].
#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Explicit starting point; defaults to the family's own starts
    /// (maximum likelihood first).
    pub init: Option<Theta>,
    /// Try every family-provided start and keep the converged candidate
    /// with the lowest objective. Off by default; recommended for heavily
    /// contaminated data where the objective can be multimodal.
    pub multistart: bool,
    pub max_iterations: usize,
    /// Convergence threshold on the estimating-residual norm.
    pub residual_tol: f64,
    /// Convergence threshold on the relative step size.
    pub step_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            init: None,
            multistart: false,
            max_iterations: 500,
            residual_tol: 1e-8,
            step_tol: 1e-10,
        }
    }
}

/// One solver run from one starting point.
#[derive(Debug, Clone, Serialize)]
pub struct FitCandidate {
    pub theta: Theta,
    pub objective: f64,
    pub converged: bool,
    pub iterations: usize,
    pub gradient_norm: f64,
}

/// A fitted minimum density power divergence estimate with its sandwich
/// covariance pieces evaluated at the estimate.
#[derive(Debug, Clone, Serialize)]
pub struct MdpdeFit {
    pub family: String,
    pub beta: f64,
    pub n: usize,
    pub theta_hat: Theta,
    pub j: SquareMatrix,
    pub k: SquareMatrix,
    /// Σ = J^{-1} K J^{-1}.
    pub sigma: SquareMatrix,
    pub objective_value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub candidates: Vec<FitCandidate>,
}

fn check_sample(family: &dyn ModelFamily, sample: &Sample) -> Result<()> {
    for &x in sample.values() {
        if !family.support().contains(x) {
            return Err(Error::Support {
                family: family.name().to_string(),
                x,
            });
        }
    }
    Ok(())
}

fn check_theta(family: &dyn ModelFamily, theta: &Theta) -> Result<()> {
    if !family.parameter_in_domain(theta) {
        return Err(Error::Domain(format!(
            "{}: parameter {:?} outside domain",
            family.name(),
            theta.as_slice()
        )));
    }
    Ok(())
}

/// The empirical divergence objective H_n(θ).
pub fn dpd_objective(
    family: &dyn ModelFamily,
    theta: &Theta,
    beta: f64,
    sample: &Sample,
) -> Result<f64> {
    check_theta(family, theta)?;
    check_sample(family, sample)?;
    if beta < 0.0 {
        return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
    }
    let n = sample.len() as f64;
    if beta == 0.0 {
        let mean_log = sample
            .values()
            .iter()
            .map(|&x| family.log_density(theta, x))
            .sum::<f64>()
            / n;
        return Ok(-mean_log);
    }
    let integral = family.density_power_integral(theta, beta)?;
    let mean_power = sample
        .values()
        .iter()
        .map(|&x| (beta * family.log_density(theta, x)).exp())
        .sum::<f64>()
        / n;
    Ok(integral - (1.0 + 1.0 / beta) * mean_power)
}

/// The estimating-equation residual; a zero vector at the fit.
pub fn estimating_residual(
    family: &dyn ModelFamily,
    theta: &Theta,
    beta: f64,
    sample: &Sample,
) -> Result<Vec<f64>> {
    check_theta(family, theta)?;
    check_sample(family, sample)?;
    if beta < 0.0 {
        return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
    }
    let p = family.dim();
    let n = sample.len() as f64;
    let mut acc = vec![0.0; p];
    for &x in sample.values() {
        let w = if beta == 0.0 {
            1.0
        } else {
            (beta * family.log_density(theta, x)).exp()
        };
        let u = family.score(theta, x);
        for i in 0..p {
            acc[i] += u[i] * w;
        }
    }
    let xi = family.score_power_integral(theta, beta)?;
    Ok((0..p).map(|i| acc[i] / n - xi[i]).collect())
}

/// One update of the exponential-family fixed-point iteration
/// θ ← Σ x_i e^{-βx_i/θ} / (Σ e^{-βx_i/θ} - nβ/(1+β)²).
pub fn exp_fixed_point_step(sample: &Sample, beta: f64, theta_current: f64) -> Result<f64> {
    if !(theta_current > 0.0) {
        return Err(Error::Domain(format!(
            "fixed-point step requires theta > 0, got {theta_current}"
        )));
    }
    if beta < 0.0 {
        return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
    }
    let n = sample.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for &x in sample.values() {
        let w = (-beta * x / theta_current).exp();
        num += x * w;
        den += w;
    }
    den -= n * beta / (1.0 + beta).powi(2);
    if den <= 0.0 {
        return Err(Error::StepFailure(format!(
            "nonpositive denominator {den:.3e} at theta = {theta_current}"
        )));
    }
    Ok(num / den)
}

struct SolveRun {
    theta: Theta,
    iterations: usize,
    converged: bool,
}

/// Fixed-point solver with a damped-gradient fallback when a step fails.
fn solve_fixed_point(
    family: &dyn ModelFamily,
    sample: &Sample,
    beta: f64,
    start: &Theta,
    opts: &FitOptions,
) -> Result<SolveRun> {
    let mut theta = start[0];
    for iter in 0..opts.max_iterations {
        let next = match exp_fixed_point_step(sample, beta, theta) {
            Ok(v) if v > 0.0 && v.is_finite() => v,
            _ => {
                // damped gradient descent on the objective
                let t = Theta::new(vec![theta]);
                let grad = -(1.0 + beta) * estimating_residual(family, &t, beta, sample)?[0];
                let mut step = -0.1 * theta * grad.signum();
                let base = dpd_objective(family, &t, beta, sample)?;
                let mut k = 0;
                loop {
                    let cand = theta + step;
                    if cand > 0.0 {
                        let obj = dpd_objective(family, &Theta::new(vec![cand]), beta, sample)?;
                        if obj < base {
                            break cand;
                        }
                    }
                    step *= 0.5;
                    k += 1;
                    if k > 60 {
                        break theta;
                    }
                }
            }
        };
        let moved = (next - theta).abs();
        theta = next;
        if moved <= opts.step_tol * theta.abs().max(1e-300) {
            return Ok(SolveRun {
                theta: Theta::new(vec![theta]),
                iterations: iter + 1,
                converged: true,
            });
        }
    }
    Ok(SolveRun {
        theta: Theta::new(vec![theta]),
        iterations: opts.max_iterations,
        converged: false,
    })
}

/// Damped Newton iteration on the estimating residual, Jacobian by central
/// finite differences. Parameters flagged positive are kept positive by
/// step halving.
fn solve_newton_residual(
    family: &dyn ModelFamily,
    sample: &Sample,
    beta: f64,
    start: &Theta,
    opts: &FitOptions,
) -> Result<SolveRun> {
    let p = family.dim();
    let positive = family.positive_params();
    let mut theta = start.clone();
    let mut res = estimating_residual(family, &theta, beta, sample)?;
    let scale = vec_norm(&res).max(1e-12);
    for iter in 0..opts.max_iterations {
        let rnorm = vec_norm(&res);
        if rnorm <= opts.residual_tol * scale.max(1.0) {
            return Ok(SolveRun {
                theta,
                iterations: iter,
                converged: true,
            });
        }
        // central-difference Jacobian of the residual
        let mut jac = SquareMatrix::zeros(p);
        for j in 0..p {
            let h = 1e-6 * theta[j].abs().max(1e-6);
            let mut tp = theta.0.clone();
            let mut tm = theta.0.clone();
            tp[j] += h;
            tm[j] -= h;
            if positive[j] && tm[j] <= 0.0 {
                tm[j] = 0.5 * theta[j];
            }
            let rp = estimating_residual(family, &Theta::new(tp.clone()), beta, sample)?;
            let rm = estimating_residual(family, &Theta::new(tm.clone()), beta, sample)?;
            for i in 0..p {
                jac.set(i, j, (rp[i] - rm[i]) / (tp[j] - tm[j]));
            }
        }
        let delta = jac.solve(&res)?;
        // backtracking on the residual norm
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand: Vec<f64> = (0..p).map(|i| theta[i] - lambda * delta[i]).collect();
            if cand
                .iter()
                .zip(&positive)
                .all(|(v, &pos)| !pos || *v > 0.0)
            {
                let cand_theta = Theta::new(cand);
                if family.parameter_in_domain(&cand_theta) {
                    let cand_res = estimating_residual(family, &cand_theta, beta, sample)?;
                    if vec_norm(&cand_res) < rnorm || lambda < 1e-8 {
                        let step = vec_norm(
                            &(0..p).map(|i| cand_theta[i] - theta[i]).collect::<Vec<_>>(),
                        );
                        let small_step =
                            step <= opts.step_tol * vec_norm(theta.as_slice()).max(1.0);
                        theta = cand_theta;
                        res = cand_res;
                        accepted = true;
                        if small_step {
                            let converged = vec_norm(&res) <= opts.residual_tol * scale.max(1.0)
                                || vec_norm(&res) <= 1e-6 * scale;
                            return Ok(SolveRun {
                                theta,
                                iterations: iter + 1,
                                converged,
                            });
                        }
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Ok(SolveRun {
                theta,
                iterations: iter + 1,
                converged: false,
            });
        }
    }
    let converged = vec_norm(&res) <= opts.residual_tol * scale.max(1.0);
    Ok(SolveRun {
        theta,
        iterations: opts.max_iterations,
        converged,
    })
}

/// BFGS with backtracking line search on a function of the log/linear
/// transformed parameters. `eval` returns (value, gradient).
pub(crate) fn bfgs_minimize<F>(
    eval: F,
    v0: Vec<f64>,
    max_iterations: usize,
    grad_tol: f64,
    step_tol: f64,
) -> (Vec<f64>, usize, bool)
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let dim = v0.len();
    let mut v = v0;
    let mut h = SquareMatrix::identity(dim);
    let (mut fv, mut g) = match eval(&v) {
        Some(x) => x,
        None => return (v, 0, false),
    };
    let g0 = vec_norm(&g).max(1e-12);
    for iter in 0..max_iterations {
        if vec_norm(&g) <= grad_tol * g0.max(1.0) {
            return (v, iter, true);
        }
        let mut dir: Vec<f64> = h.mul_vec(&g).iter().map(|x| -x).collect();
        let slope = crate::matrix::dot(&dir, &g);
        if slope >= 0.0 {
            h = SquareMatrix::identity(dim);
            dir = g.iter().map(|x| -x).collect();
        }
        let mut t = 1.0;
        let mut found = None;
        for _ in 0..60 {
            let cand: Vec<f64> = v.iter().zip(&dir).map(|(a, d)| a + t * d).collect();
            if let Some((fc, gc)) = eval(&cand) {
                if fc <= fv - 1e-4 * t * vec_norm(&g) * vec_norm(&dir) || fc < fv {
                    found = Some((cand, fc, gc));
                    break;
                }
            }
            t *= 0.5;
        }
        let (vn, fn_, gn) = match found {
            Some(x) => x,
            None => return (v, iter, vec_norm(&g) <= 1e-5 * g0.max(1.0)),
        };
        let s: Vec<f64> = vn.iter().zip(&v).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = crate::matrix::dot(&s, &y);
        if sy > 1e-12 * vec_norm(&s) * vec_norm(&y) {
            // BFGS inverse-Hessian update
            let hy = h.mul_vec(&y);
            let yhy = crate::matrix::dot(&y, &hy);
            let mut hn = h.clone();
            for i in 0..dim {
                for j in 0..dim {
                    let t1 = (sy + yhy) * s[i] * s[j] / (sy * sy);
                    let t2 = (hy[i] * s[j] + s[i] * hy[j]) / sy;
                    hn.set(i, j, h.get(i, j) + t1 - t2);
                }
            }
            h = hn;
        }
        let step = vec_norm(&s);
        v = vn;
        fv = fn_;
        g = gn;
        if step <= step_tol * vec_norm(&v).max(1.0) {
            return (v, iter + 1, true);
        }
    }
    (v, max_iterations, false)
}

/// Quasi-Newton descent on the divergence objective, with positive
/// parameters handled in log space. The analytic gradient comes from the
/// residual: ∇H_n = -(1+β) · residual.
fn solve_quasi_newton(
    family: &dyn ModelFamily,
    sample: &Sample,
    beta: f64,
    start: &Theta,
    opts: &FitOptions,
) -> Result<SolveRun> {
    let positive = family.positive_params();
    let to_v = |theta: &Theta| -> Vec<f64> {
        theta
            .as_slice()
            .iter()
            .zip(&positive)
            .map(|(&t, &pos)| if pos { t.ln() } else { t })
            .collect()
    };
    let to_theta = |v: &[f64]| -> Theta {
        Theta::new(
            v.iter()
                .zip(&positive)
                .map(|(&x, &pos)| if pos { x.exp() } else { x })
                .collect(),
        )
    };
    let eval = |v: &[f64]| -> Option<(f64, Vec<f64>)> {
        if v.iter().any(|x| !x.is_finite() || x.abs() > 700.0) {
            return None;
        }
        let theta = to_theta(v);
        if !family.parameter_in_domain(&theta) {
            return None;
        }
        let obj = dpd_objective(family, &theta, beta, sample).ok()?;
        let res = estimating_residual(family, &theta, beta, sample).ok()?;
        if !obj.is_finite() {
            return None;
        }
        let grad: Vec<f64> = res
            .iter()
            .zip(theta.as_slice())
            .zip(&positive)
            .map(|((&r, &t), &pos)| {
                let g = -(1.0 + beta) * r;
                if pos {
                    g * t
                } else {
                    g
                }
            })
            .collect();
        Some((obj, grad))
    };
    let (v, iterations, converged) = bfgs_minimize(
        eval,
        to_v(start),
        opts.max_iterations,
        opts.residual_tol,
        opts.step_tol,
    );
    Ok(SolveRun {
        theta: to_theta(&v),
        iterations,
        converged,
    })
}

/// Weibull maximum likelihood via the quasi-Newton path at β = 0.
pub(crate) fn weibull_likelihood_fit(
    family: &dyn ModelFamily,
    sample: &Sample,
) -> Result<Theta> {
    check_sample(family, sample)?;
    let start = crate::families::weibull::weibull_moment_start(sample);
    let opts = FitOptions::default();
    let run = solve_quasi_newton(family, sample, 0.0, &start, &opts)?;
    if !run.converged {
        return Err(Error::NonConvergence {
            best: run.theta.0,
            iterations: run.iterations,
            gradient_norm: f64::NAN,
        });
    }
    Ok(run.theta)
}

/// Fit the minimum density power divergence estimate.
///
/// β = 0 returns the maximum likelihood estimate. For β > 0 the family's
/// solver runs from the configured starts; with several starts the
/// converged candidate with the lowest objective wins and all candidates
/// are recorded in the returned diagnostics.
pub fn fit_mdpde(
    family: &dyn ModelFamily,
    sample: &Sample,
    beta: f64,
    options: &FitOptions,
) -> Result<MdpdeFit> {
    if beta < 0.0 {
        return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
    }
    check_sample(family, sample)?;

    let mut candidates = Vec::new();
    if beta == 0.0 {
        let theta = family.mle(sample)?;
        let res = estimating_residual(family, &theta, 0.0, sample)?;
        let obj = dpd_objective(family, &theta, 0.0, sample)?;
        candidates.push(FitCandidate {
            theta,
            objective: obj,
            converged: true,
            iterations: 0,
            gradient_norm: vec_norm(&res),
        });
    } else {
        let starts: Vec<Theta> = if let Some(init) = &options.init {
            check_theta(family, init)?;
            let mut s = vec![init.clone()];
            if options.multistart {
                s.extend(family.fit_starts(sample, beta));
            }
            s
        } else {
            let all = family.fit_starts(sample, beta);
            if all.is_empty() {
                return Err(Error::DegenerateSample(
                    "no valid starting point for this sample".into(),
                ));
            }
            if options.multistart {
                all
            } else {
                vec![all[0].clone()]
            }
        };
        for start in &starts {
            let run = match family.solver() {
                SolverKind::FixedPoint => solve_fixed_point(family, sample, beta, start, options),
                SolverKind::NewtonResidual => {
                    solve_newton_residual(family, sample, beta, start, options)
                }
                SolverKind::QuasiNewtonObjective => {
                    solve_quasi_newton(family, sample, beta, start, options)
                }
            };
            let run = match run {
                Ok(r) => r,
                Err(_) => continue,
            };
            if !family.parameter_in_domain(&run.theta) {
                continue;
            }
            let obj = match dpd_objective(family, &run.theta, beta, sample) {
                Ok(v) if v.is_finite() => v,
                _ => continue,
            };
            let res = estimating_residual(family, &run.theta, beta, sample)?;
            candidates.push(FitCandidate {
                theta: run.theta,
                objective: obj,
                converged: run.converged,
                iterations: run.iterations,
                gradient_norm: vec_norm(&res),
            });
        }
    }

    let best = candidates
        .iter()
        .filter(|c| c.converged)
        .min_by(|a, b| a.objective.total_cmp(&b.objective))
        .cloned();
    let best = match best {
        Some(b) => b,
        None => {
            let fallback = candidates
                .iter()
                .min_by(|a, b| a.gradient_norm.total_cmp(&b.gradient_norm));
            return Err(Error::NonConvergence {
                best: fallback.map(|c| c.theta.0.clone()).unwrap_or_default(),
                iterations: fallback.map(|c| c.iterations).unwrap_or(0),
                gradient_norm: fallback.map(|c| c.gradient_norm).unwrap_or(f64::NAN),
            });
        }
    };

    let j = family.j_matrix(&best.theta, beta)?;
    let k = family.k_matrix(&best.theta, beta)?;
    let j_inv = j.spd_inverse_guarded(&format!("{} J matrix", family.name()))?;
    let sigma = j_inv.mul(&k).mul(&j_inv);
    Ok(MdpdeFit {
        family: family.name().to_string(),
        beta,
        n: sample.len(),
        theta_hat: best.theta.clone(),
        j,
        k,
        sigma,
        objective_value: best.objective,
        converged: best.converged,
        iterations: best.iterations,
        gradient_norm: best.gradient_norm,
        candidates,
    })
}
