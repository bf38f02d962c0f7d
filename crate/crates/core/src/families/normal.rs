//! Normal family, θ = (μ, σ).
//!
//! J and K have closed forms; K carries the ξ ξ^T correction in its second
//! diagonal entry.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::model::{ModelFamily, Sample, SolverKind, Support, Theta};
use crate::special::std_normal_quantile;

#[derive(Debug, Clone, Copy, Default)]
pub struct Normal;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

impl Normal {
    fn params(&self, theta: &Theta) -> (f64, f64) {
        (theta[0], theta[1])
    }
}

impl ModelFamily for Normal {
    fn name(&self) -> &'static str {
        "normal"
    }

    fn dim(&self) -> usize {
        2
    }

    fn support(&self) -> Support {
        Support::AllReals
    }

    fn parameter_in_domain(&self, theta: &Theta) -> bool {
        theta.len() == 2
            && theta[0].is_finite()
            && theta[1].is_finite()
            && theta[1] > 0.0
    }

    fn log_density(&self, theta: &Theta, x: f64) -> f64 {
        let (mu, sigma) = self.params(theta);
        let z = (x - mu) / sigma;
        -0.5 * TWO_PI.ln() - sigma.ln() - 0.5 * z * z
    }

    fn score(&self, theta: &Theta, x: f64) -> Vec<f64> {
        let (mu, sigma) = self.params(theta);
        let z = (x - mu) / sigma;
        vec![z / sigma, (z * z - 1.0) / sigma]
    }

    fn density_power_integral(&self, theta: &Theta, beta: f64) -> Result<f64> {
        let (_, sigma) = self.params(theta);
        Ok(TWO_PI.powf(-0.5 * beta) * sigma.powf(-beta) / (1.0 + beta).sqrt())
    }

    fn score_power_integral(&self, theta: &Theta, beta: f64) -> Result<Vec<f64>> {
        let (_, sigma) = self.params(theta);
        let n = self.density_power_integral(theta, beta)?;
        Ok(vec![0.0, -n * beta / ((1.0 + beta) * sigma)])
    }

    fn j_matrix(&self, theta: &Theta, beta: f64) -> Result<SquareMatrix> {
        if beta < 0.0 {
            return Err(Error::Domain("beta must be >= 0".into()));
        }
        let (_, sigma) = self.params(theta);
        let b = beta;
        let c = 1.0 / ((1.0 + b).sqrt() * TWO_PI.powf(0.5 * b) * sigma.powf(2.0 + b));
        Ok(SquareMatrix::from_rows(&[
            &[c / (1.0 + b), 0.0],
            &[0.0, c * (b * b + 2.0) / (1.0 + b).powi(2)],
        ]))
    }

    fn k_matrix(&self, theta: &Theta, beta: f64) -> Result<SquareMatrix> {
        if beta < 0.0 {
            return Err(Error::Domain("beta must be >= 0".into()));
        }
        let (_, sigma) = self.params(theta);
        let b = beta;
        let scale = 1.0 / (sigma.powf(2.0 + 2.0 * b) * TWO_PI.powf(b));
        let lead = 1.0 / (1.0 + 2.0 * b).powf(1.5);
        let k11 = scale * lead;
        let k22 = scale * (lead * (4.0 * b * b + 2.0) / (1.0 + 2.0 * b) - b * b / (1.0 + b).powi(3));
        Ok(SquareMatrix::from_rows(&[&[k11, 0.0], &[0.0, k22]]))
    }

    fn has_closed_form_jk(&self) -> bool {
        true
    }

    fn quantile(&self, theta: &Theta, u: f64) -> f64 {
        let (mu, sigma) = self.params(theta);
        mu + sigma * std_normal_quantile(u).expect("u in (0,1)")
    }

    fn mle(&self, sample: &Sample) -> Result<Theta> {
        let mean = sample.mean();
        let var = sample
            .values()
            .iter()
            .map(|x| (x - mean).powi(2))
            .sum::<f64>()
            / sample.len() as f64;
        if var <= 0.0 {
            return Err(Error::DegenerateSample(
                "zero variance under the normal model".into(),
            ));
        }
        Ok(Theta::new(vec![mean, var.sqrt()]))
    }

    fn fit_starts(&self, sample: &Sample, _beta: f64) -> Vec<Theta> {
        // five-point grid around the likelihood and median/MAD anchors;
        // the robust pairs reach the dominant mode under contamination
        let mut starts = Vec::new();
        let mle = self.mle(sample).ok();
        if let Some(m) = &mle {
            starts.push(m.clone());
        }
        let mut v = sample.values().to_vec();
        v.sort_by(f64::total_cmp);
        let median = v[v.len() / 2];
        let mut dev: Vec<f64> = v.iter().map(|x| (x - median).abs()).collect();
        dev.sort_by(f64::total_cmp);
        let madn = 1.4826 * dev[dev.len() / 2];
        if madn > 0.0 {
            starts.push(Theta::new(vec![median, madn]));
            starts.push(Theta::new(vec![median, 2.0 * madn]));
            if let Some(m) = &mle {
                starts.push(Theta::new(vec![m[0], madn]));
                starts.push(Theta::new(vec![median, m[1]]));
            }
        }
        starts
    }

    fn solver(&self) -> SolverKind {
        SolverKind::NewtonResidual
    }

    fn positive_params(&self) -> Vec<bool> {
        vec![false, true]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::density;
    use crate::quad::{integrate, QuadratureSpec};

    #[test]
    fn standard_normal_density() {
        let fam = Normal;
        let theta = Theta::new(vec![0.0, 1.0]);
        let f = density(&fam, &theta, 0.0).unwrap();
        assert!((f - 0.398_942_280_401_432_7).abs() < 1e-14);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let fam = Normal;
        let theta = Theta::new(vec![0.4, 1.3]);
        let spec = QuadratureSpec::default();
        // finite window wide enough for machine-precision tails
        let (lo, hi) = (0.4 - 16.0 * 1.3, 0.4 + 16.0 * 1.3);
        for &b in &[0.0, 0.1, 0.25, 0.5, 1.0] {
            let j = fam.j_matrix(&theta, b).unwrap();
            let k = fam.k_matrix(&theta, b).unwrap();
            let xi = fam.score_power_integral(&theta, b).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    let jq = integrate(
                        |x| {
                            let u = fam.score(&theta, x);
                            u[r] * u[c] * (fam.log_density(&theta, x) * (1.0 + b)).exp()
                        },
                        lo,
                        hi,
                        &spec,
                    )
                    .unwrap()
                    .value;
                    let scale = j.get(r, r).max(j.get(c, c));
                    assert!(
                        (j.get(r, c) - jq).abs() < 1e-6 * scale,
                        "J[{r}{c}] beta={b}: {} vs {jq}",
                        j.get(r, c)
                    );
                    let xq = integrate(
                        |x| {
                            let u = fam.score(&theta, x);
                            u[r] * u[c] * (fam.log_density(&theta, x) * (1.0 + 2.0 * b)).exp()
                        },
                        lo,
                        hi,
                        &spec,
                    )
                    .unwrap()
                    .value
                        - xi[r] * xi[c];
                    let kscale = k.get(r, r).max(k.get(c, c));
                    assert!(
                        (k.get(r, c) - xq).abs() < 1e-6 * kscale,
                        "K[{r}{c}] beta={b}: {} vs {xq}",
                        k.get(r, c)
                    );
                }
            }
        }
    }

    #[test]
    fn xi_vanishes_at_beta_zero() {
        let fam = Normal;
        let theta = Theta::new(vec![-2.0, 0.7]);
        let xi = fam.score_power_integral(&theta, 0.0).unwrap();
        assert!(xi.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn degenerate_sample_rejected() {
        let fam = Normal;
        let s = Sample::new(vec![3.0, 3.0, 3.0]).unwrap();
        assert!(matches!(fam.mle(&s), Err(Error::DegenerateSample(_))));
    }
}
