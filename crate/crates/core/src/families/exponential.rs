//! Exponential family with mean parameter θ: f(x) = θ^{-1} e^{-x/θ}, x > 0.
//!
//! Every power integral has a closed form, so J, K and the divergence
//! objective are exact.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::model::{ModelFamily, Sample, SolverKind, Support, Theta};

#[derive(Debug, Clone, Copy, Default)]
pub struct Exponential;

impl Exponential {
    fn theta(&self, theta: &Theta) -> f64 {
        theta[0]
    }
}

/// The asymptotic variance of the minimum divergence estimate of θ is
/// h(β) θ²; h(0) = 1 recovers maximum likelihood.
pub fn exp_h_factor(beta: f64) -> f64 {
    let b = beta;
    let poly = 1.0
        + 4.0 * b
        + 9.0 * b * b
        + 14.0 * b.powi(3)
        + 13.0 * b.powi(4)
        + 8.0 * b.powi(5)
        + 4.0 * b.powi(6);
    (1.0 + b).powi(2) * poly / ((1.0 + b * b).powi(2) * (1.0 + 2.0 * b).powi(3))
}

impl ModelFamily for Exponential {
    fn name(&self) -> &'static str {
        "exponential"
    }

    fn dim(&self) -> usize {
        1
    }

    fn support(&self) -> Support {
        Support::PositiveReals
    }

    fn parameter_in_domain(&self, theta: &Theta) -> bool {
        theta.len() == 1 && theta[0].is_finite() && theta[0] > 0.0
    }

    fn log_density(&self, theta: &Theta, x: f64) -> f64 {
        let t = self.theta(theta);
        -t.ln() - x / t
    }

    fn score(&self, theta: &Theta, x: f64) -> Vec<f64> {
        let t = self.theta(theta);
        vec![(x - t) / (t * t)]
    }

    fn density_power_integral(&self, theta: &Theta, beta: f64) -> Result<f64> {
        let t = self.theta(theta);
        Ok(t.powf(-beta) / (1.0 + beta))
    }

    fn score_power_integral(&self, theta: &Theta, beta: f64) -> Result<Vec<f64>> {
        let t = self.theta(theta);
        Ok(vec![-beta * t.powf(-1.0 - beta) / (1.0 + beta).powi(2)])
    }

    fn j_matrix(&self, theta: &Theta, beta: f64) -> Result<SquareMatrix> {
        if beta < 0.0 {
            return Err(Error::Domain("beta must be >= 0".into()));
        }
        let t = self.theta(theta);
        let b = beta;
        let j = (1.0 + b * b) / ((1.0 + b).powi(3) * t.powf(2.0 + b));
        Ok(SquareMatrix::from_rows(&[&[j]]))
    }

    fn k_matrix(&self, theta: &Theta, beta: f64) -> Result<SquareMatrix> {
        if beta < 0.0 {
            return Err(Error::Domain("beta must be >= 0".into()));
        }
        let t = self.theta(theta);
        let b = beta;
        let second_moment = (1.0 + 4.0 * b * b) / ((1.0 + 2.0 * b).powi(3) * t.powf(2.0 + 2.0 * b));
        let xi = self.score_power_integral(theta, beta)?[0];
        Ok(SquareMatrix::from_rows(&[&[second_moment - xi * xi]]))
    }

    fn has_closed_form_jk(&self) -> bool {
        true
    }

    fn quantile(&self, theta: &Theta, u: f64) -> f64 {
        -self.theta(theta) * (1.0 - u).ln()
    }

    fn mle(&self, sample: &Sample) -> Result<Theta> {
        Ok(Theta::new(vec![sample.mean()]))
    }

    fn fit_starts(&self, sample: &Sample, _beta: f64) -> Vec<Theta> {
        // five-point grid: the mean start plus robust and spread-out
        // alternates covering other basins under gross contamination
        let mean = sample.mean();
        let mut v = sample.values().to_vec();
        v.sort_by(f64::total_cmp);
        let median = v[v.len() / 2];
        let trim = v.len() / 10;
        let trimmed = &v[..v.len() - trim];
        let trimmed_mean = trimmed.iter().sum::<f64>() / trimmed.len() as f64;
        let mut starts = Vec::new();
        for candidate in [
            mean,
            median / std::f64::consts::LN_2,
            trimmed_mean,
            0.5 * mean,
            2.0 * mean,
        ] {
            if candidate > 0.0
                && !starts
                    .iter()
                    .any(|s: &Theta| (s[0] - candidate).abs() < 1e-12 * candidate)
            {
                starts.push(Theta::new(vec![candidate]));
            }
        }
        starts
    }

    fn solver(&self) -> SolverKind {
        SolverKind::FixedPoint
    }

    fn positive_params(&self) -> Vec<bool> {
        vec![true]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{density, sample as draw, score};
    use crate::quad::{integrate, QuadratureSpec};

    #[test]
    fn density_and_score_hand_values() {
        let fam = Exponential;
        let theta = Theta::new(vec![2.0]);
        // f(0+) -> 0.5 for θ = 2 (use a tiny positive x: 0 is outside support)
        let f = density(&fam, &theta, 1e-12).unwrap();
        assert!((f - 0.5).abs() < 1e-9);
        // u(x) = (x - θ)/θ² -> -0.5 at x -> 0
        let u = score(&fam, &theta, 1e-12).unwrap();
        assert!((u[0] + 0.5).abs() < 1e-9);
        assert!(density(&fam, &theta, -1.0).is_err());
    }

    #[test]
    fn h_factor_values() {
        assert!((exp_h_factor(0.0) - 1.0).abs() < 1e-15);
        // 18.28125 / 12.5
        assert!((exp_h_factor(0.5) - 1.4625).abs() < 1e-12);
        for i in 1..=40 {
            let b = i as f64 * 0.05;
            assert!(exp_h_factor(b) > 1.0, "h({b}) = {}", exp_h_factor(b));
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let fam = Exponential;
        let theta = Theta::new(vec![1.7]);
        let spec = QuadratureSpec::default();
        for &b in &[0.0, 0.1, 0.25, 0.5, 1.0] {
            let jq = integrate(
                |x| {
                    let u = fam.score(&theta, x)[0];
                    u * u * fam.log_density(&theta, x).exp().powf(1.0 + b)
                },
                0.0,
                f64::INFINITY,
                &spec,
            )
            .unwrap()
            .value;
            let j = fam.j_matrix(&theta, b).unwrap().get(0, 0);
            assert!(((j - jq) / jq).abs() < 1e-8, "J at beta={b}: {j} vs {jq}");

            let xiq = integrate(
                |x| {
                    let u = fam.score(&theta, x)[0];
                    u * fam.log_density(&theta, x).exp().powf(1.0 + b)
                },
                0.0,
                f64::INFINITY,
                &spec,
            )
            .unwrap()
            .value;
            let xi = fam.score_power_integral(&theta, b).unwrap()[0];
            assert!((xi - xiq).abs() < 1e-9, "xi at beta={b}: {xi} vs {xiq}");

            let kq = integrate(
                |x| {
                    let u = fam.score(&theta, x)[0];
                    u * u * fam.log_density(&theta, x).exp().powf(1.0 + 2.0 * b)
                },
                0.0,
                f64::INFINITY,
                &spec,
            )
            .unwrap()
            .value
                - xiq * xiq;
            let k = fam.k_matrix(&theta, b).unwrap().get(0, 0);
            assert!(((k - kq) / kq).abs() < 1e-8, "K at beta={b}: {k} vs {kq}");
        }
    }

    #[test]
    fn sandwich_reproduces_h_factor() {
        // J^{-1} K J^{-1} = h(β) θ²
        let fam = Exponential;
        let theta = Theta::new(vec![2.3]);
        for &b in &[0.0, 0.1, 0.25, 0.5, 0.8] {
            let j = fam.j_matrix(&theta, b).unwrap().get(0, 0);
            let k = fam.k_matrix(&theta, b).unwrap().get(0, 0);
            let sandwich = k / (j * j);
            let expected = exp_h_factor(b) * 2.3 * 2.3;
            assert!(
                ((sandwich - expected) / expected).abs() < 1e-12,
                "beta={b}: {sandwich} vs {expected}"
            );
        }
    }

    #[test]
    fn sampling_law_of_large_numbers() {
        let fam = Exponential;
        let theta = Theta::new(vec![2.0]);
        let s = draw(&fam, &theta, 1_000_000, 99).unwrap();
        assert!((s.mean() - 2.0).abs() < 0.01);
        let again = draw(&fam, &theta, 1_000_000, 99).unwrap();
        assert_eq!(s, again);
    }
}
