//! Weibull family, θ = (σ, p) with scale σ and shape p:
//! f(x) = (p/σ)(x/σ)^{p-1} exp{-(x/σ)^p}, x > 0.
//!
//! The moment integrals ξ_{α,b} are gamma-function closed forms; the
//! log-weighted integrals η_{α,l,γ} need numerical integration. After the
//! substitution t = y^p every η reduces to core integrals
//! I_j(q) = ∫_0^∞ s^{q-1} (ln s)^j e^{-s} ds, which are evaluated by
//! adaptive quadrature with a log transform below s = 1 to absorb the
//! (ln s)^j endpoint singularity.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::model::{ModelFamily, Sample, SolverKind, Support, Theta};
use crate::quad::{integrate, QuadratureSpec};
use crate::special::{digamma, ln_gamma_unchecked};

/// Which K matrix the family reports.
///
/// `Uncentered` is K_β = ∫ u u^T f^{1+2β}; `Centered` subtracts the
/// ξ_β ξ_β^T outer product, matching the exponential and normal families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KMatrixConvention {
    #[default]
    Uncentered,
    Centered,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Weibull {
    pub k_convention: KMatrixConvention,
}

impl Weibull {
    pub fn new(k_convention: KMatrixConvention) -> Self {
        Weibull { k_convention }
    }

    fn params(&self, theta: &Theta) -> (f64, f64) {
        (theta[0], theta[1])
    }
}

/// Core integrals behind η and κ:
/// I_j(q) = ∫_0^∞ s^{q-1} (ln s)^j e^{-s} ds for j in {0, 1, 2}, q > 0.
/// Two pieces: (0,1] via s = e^{-w/q} (log transform rescaled to unit decay
/// rate), and [1, ∞) directly.
fn core_integral(q: f64, j: u32, spec: &QuadratureSpec) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::Domain(format!(
            "divergent moment integral: exponent q = {q} must be positive"
        )));
    }
    let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
    // ∫_0^1 s^{q-1}(ln s)^j e^{-s} ds = (-1)^j q^{-(j+1)} ∫_0^∞ w^j e^{-w} exp(-e^{-w/q}) dw
    let head = integrate(
        |w: f64| w.powi(j as i32) * (-w).exp() * (-(-w / q).exp()).exp(),
        0.0,
        f64::INFINITY,
        spec,
    )?
    .value;
    let head = sign * q.powi(-(j as i32) - 1) * head;
    let tail = integrate(
        |s: f64| s.powf(q - 1.0) * s.ln().powi(j as i32) * (-s).exp(),
        1.0,
        f64::INFINITY,
        spec,
    )?
    .value;
    Ok(head + tail)
}

/// G(q, l, γ) = ∫_0^∞ t^{q-1} (ln t)^l e^{-γ t} dt, assembled from the
/// unit-rate core integrals by the substitution s = γ t.
fn weighted_gamma_integral(q: f64, l: u32, gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("gamma power {gamma} must be positive")));
    }
    let lg = gamma.ln();
    let scale = (-q * lg).exp();
    let value = match l {
        0 => core_integral(q, 0, spec)?,
        1 => core_integral(q, 1, spec)? - lg * core_integral(q, 0, spec)?,
        2 => {
            core_integral(q, 2, spec)? - 2.0 * lg * core_integral(q, 1, spec)?
                + lg * lg * core_integral(q, 0, spec)?
        }
        _ => {
            return Err(Error::Domain(format!(
                "log power {l} not supported (0, 1, 2 only)"
            )))
        }
    };
    Ok(scale * value)
}

/// ξ_{α,b}(θ) = ∫_0^∞ (x/σ)^α f^b(x) dx, closed form, b > 0.
pub fn weibull_xi(alpha: f64, b: f64, theta: &Theta) -> Result<f64> {
    let (sigma, p) = (theta[0], theta[1]);
    if !(sigma > 0.0 && p > 0.0) {
        return Err(Error::Domain("weibull_xi requires sigma, p > 0".into()));
    }
    if !(b > 0.0) {
        return Err(Error::Domain(format!("weibull_xi requires b > 0, got {b}")));
    }
    let q = (b * p - b + alpha + 1.0) / p;
    if !(q > 0.0) {
        return Err(Error::Domain(format!(
            "weibull_xi divergent: gamma argument {q} must be positive"
        )));
    }
    Ok((p / sigma).powf(b - 1.0) * (-q * b.ln() + ln_gamma_unchecked(q)).exp())
}

/// η_{α,l,γ}(θ) = ∫_0^∞ (x/σ)^α [log(x/σ)]^l f^γ(x) dx by quadrature.
pub fn weibull_eta(alpha: f64, l: u32, gamma: f64, theta: &Theta, spec: &QuadratureSpec) -> Result<f64> {
    let (sigma, p) = (theta[0], theta[1]);
    if !(sigma > 0.0 && p > 0.0) {
        return Err(Error::Domain("weibull_eta requires sigma, p > 0".into()));
    }
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!(
            "weibull_eta requires gamma > 0, got {gamma}"
        )));
    }
    let q = (alpha + gamma * p - gamma + 1.0) / p;
    let g = weighted_gamma_integral(q, l, gamma, spec)?;
    Ok(sigma * (p / sigma).powf(gamma) * g / p.powi(l as i32 + 1))
}

/// ε_{α,γ}(p) = γ^{-q} Γ(q) with q = ((p-1)γ + α + 1)/p; the scale-free
/// factor of ξ: ξ_{α,γ}(θ) = (p/σ)^{γ-1} ε_{α,γ}(p).
pub fn weibull_epsilon(alpha: f64, gamma: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && gamma > 0.0) {
        return Err(Error::Domain("weibull_epsilon requires p, gamma > 0".into()));
    }
    let q = ((p - 1.0) * gamma + alpha + 1.0) / p;
    if !(q > 0.0) {
        return Err(Error::Domain(format!(
            "weibull_epsilon divergent: gamma argument {q} must be positive"
        )));
    }
    Ok((-q * gamma.ln() + ln_gamma_unchecked(q)).exp())
}

/// κ_{α,δ,γ}(p) = p ∫_0^∞ (log y)^δ y^{(p-1)γ+α} e^{-γ y^p} dy; the
/// scale-free factor of η: η_{α,δ,γ}(θ) = (p/σ)^{γ-1} κ_{α,δ,γ}(p).
pub fn weibull_kappa(alpha: f64, delta: u32, gamma: f64, p: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Domain("weibull_kappa requires p > 0".into()));
    }
    let q = ((p - 1.0) * gamma + alpha + 1.0) / p;
    let g = weighted_gamma_integral(q, delta, gamma, spec)?;
    Ok(g / p.powi(delta as i32))
}

/// Scale-free R entries: R_γ(θ) = S R̃_γ(p) S with
/// S = diag((p/σ)^{(γ+1)/2}, (p/σ)^{(γ-1)/2}).
pub fn weibull_r_tilde(gamma: f64, p: f64, spec: &QuadratureSpec) -> Result<SquareMatrix> {
    let e0 = weibull_epsilon(0.0, gamma, p)?;
    let ep = weibull_epsilon(p, gamma, p)?;
    let e2p = weibull_epsilon(2.0 * p, gamma, p)?;
    let k01 = weibull_kappa(0.0, 1, gamma, p, spec)?;
    let kp1 = weibull_kappa(p, 1, gamma, p, spec)?;
    let k2p1 = weibull_kappa(2.0 * p, 1, gamma, p, spec)?;
    let k02 = weibull_kappa(0.0, 2, gamma, p, spec)?;
    let kp2 = weibull_kappa(p, 2, gamma, p, spec)?;
    let k2p2 = weibull_kappa(2.0 * p, 2, gamma, p, spec)?;

    let r11 = e0 - 2.0 * ep + e2p;
    let r12 = -e0 / p + ep / p - k01 + 2.0 * kp1 - k2p1;
    let r22 = e0 / (p * p) + 2.0 * k01 / p - 2.0 * kp1 / p + k02 - 2.0 * kp2 + k2p2;
    Ok(SquareMatrix::from_rows(&[&[r11, r12], &[r12, r22]]))
}

/// R_γ(θ) = ∫_0^∞ u u^T f^γ dx from ξ and η.
pub fn weibull_r_matrix(gamma: f64, theta: &Theta, spec: &QuadratureSpec) -> Result<SquareMatrix> {
    let (sigma, p) = (theta[0], theta[1]);
    if !(sigma > 0.0 && p > 0.0) {
        return Err(Error::Domain("weibull_r_matrix requires sigma, p > 0".into()));
    }
    let r_tilde = weibull_r_tilde(gamma, p, spec)?;
    let ratio = p / sigma;
    let s1 = ratio.powf(0.5 * (gamma + 1.0));
    let s2 = ratio.powf(0.5 * (gamma - 1.0));
    Ok(SquareMatrix::from_rows(&[
        &[s1 * s1 * r_tilde.get(0, 0), s1 * s2 * r_tilde.get(0, 1)],
        &[s1 * s2 * r_tilde.get(0, 1), s2 * s2 * r_tilde.get(1, 1)],
    ]))
}

impl ModelFamily for Weibull {
    fn name(&self) -> &'static str {
        "weibull"
    }

    fn dim(&self) -> usize {
        2
    }

    fn support(&self) -> Support {
        Support::PositiveReals
    }

    fn parameter_in_domain(&self, theta: &Theta) -> bool {
        theta.len() == 2
            && theta[0].is_finite()
            && theta[1].is_finite()
            && theta[0] > 0.0
            && theta[1] > 0.0
    }

    fn log_density(&self, theta: &Theta, x: f64) -> f64 {
        let (sigma, p) = self.params(theta);
        let z = x / sigma;
        (p / sigma).ln() + (p - 1.0) * z.ln() - z.powf(p)
    }

    fn score(&self, theta: &Theta, x: f64) -> Vec<f64> {
        let (sigma, p) = self.params(theta);
        let z = x / sigma;
        let zp = z.powf(p);
        let lz = z.ln();
        vec![(p / sigma) * (zp - 1.0), 1.0 / p + lz - zp * lz]
    }

    fn density_power_integral(&self, theta: &Theta, beta: f64) -> Result<f64> {
        weibull_xi(0.0, 1.0 + beta, theta)
    }

    fn score_power_integral(&self, theta: &Theta, beta: f64) -> Result<Vec<f64>> {
        // (1+β) ξ_β = ∇_θ ∫ f^{1+β}; the p-derivative brings in ψ.
        let (sigma, p) = self.params(theta);
        let x = weibull_xi(0.0, 1.0 + beta, theta)?;
        let q = (1.0 + beta) - beta / p;
        let psi = digamma(q)?;
        let d_sigma = -beta * x / sigma;
        let d_p = x * (beta / p + (beta / (p * p)) * (psi - (1.0 + beta).ln()));
        Ok(vec![d_sigma / (1.0 + beta), d_p / (1.0 + beta)])
    }

    fn j_matrix(&self, theta: &Theta, beta: f64) -> Result<SquareMatrix> {
        if beta < 0.0 {
            return Err(Error::Domain("beta must be >= 0".into()));
        }
        weibull_r_matrix(1.0 + beta, theta, &QuadratureSpec::default())
    }

    fn k_matrix(&self, theta: &Theta, beta: f64) -> Result<SquareMatrix> {
        if beta < 0.0 {
            return Err(Error::Domain("beta must be >= 0".into()));
        }
        let raw = weibull_r_matrix(1.0 + 2.0 * beta, theta, &QuadratureSpec::default())?;
        match self.k_convention {
            KMatrixConvention::Uncentered => Ok(raw),
            KMatrixConvention::Centered => {
                let xi = self.score_power_integral(theta, beta)?;
                Ok(raw.sub(&SquareMatrix::outer(&xi)))
            }
        }
    }

    fn has_closed_form_jk(&self) -> bool {
        // ξ parts are closed form; the log-weighted parts need quadrature.
        false
    }

    fn quantile(&self, theta: &Theta, u: f64) -> f64 {
        let (sigma, p) = self.params(theta);
        sigma * (-(1.0 - u).ln()).powf(1.0 / p)
    }

    fn mle(&self, sample: &Sample) -> Result<Theta> {
        crate::estimate::weibull_likelihood_fit(self, sample)
    }

    fn fit_starts(&self, sample: &Sample, _beta: f64) -> Vec<Theta> {
        // five-point grid: likelihood and log-moment starts plus robust
        // median-anchored scales and shape alternates
        let mut starts = Vec::new();
        if let Ok(mle) = self.mle(sample) {
            starts.push(mle);
        }
        let moment = weibull_moment_start(sample);
        let p0 = moment[1];
        let mut v = sample.values().to_vec();
        v.sort_by(f64::total_cmp);
        let median = v[v.len() / 2];
        let sigma_robust = median / std::f64::consts::LN_2.powf(1.0 / p0);
        starts.push(moment.clone());
        if sigma_robust > 0.0 {
            starts.push(Theta::new(vec![sigma_robust, p0]));
            starts.push(Theta::new(vec![sigma_robust, (0.5 * p0).max(0.05)]));
            starts.push(Theta::new(vec![sigma_robust, 2.0 * p0]));
        }
        starts
    }

    fn solver(&self) -> SolverKind {
        SolverKind::QuasiNewtonObjective
    }

    fn positive_params(&self) -> Vec<bool> {
        vec![true, true]
    }
}

/// Shape/scale start from the mean and variance of log-observations:
/// sd(log X) = π/(p√6) and E log X = log σ - γ_E / p.
pub fn weibull_moment_start(sample: &Sample) -> Theta {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let logs: Vec<f64> = sample.values().iter().map(|x| x.max(1e-300).ln()).collect();
    let n = logs.len() as f64;
    let mean = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    let p = if sd > 1e-12 {
        (std::f64::consts::PI / (sd * 6.0_f64.sqrt())).clamp(0.05, 50.0)
    } else {
        1.0
    };
    let sigma = (mean + EULER / p).exp();
    Theta::new(vec![sigma.max(1e-100), p])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{density, sample as draw, score};
    use crate::special::log_gamma;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn density_and_score_hand_values() {
        let fam = Weibull::default();
        let theta = Theta::new(vec![1.0, 1.0]);
        let f = density(&fam, &theta, 1.0).unwrap();
        assert!((f - (-1.0_f64).exp()).abs() < 1e-14);
        let u = score(&fam, &theta, 1.0).unwrap();
        assert!(u[0].abs() < 1e-14, "first score coordinate {}", u[0]);
        assert!((u[1] - 1.0).abs() < 1e-14);
        assert!(density(&fam, &theta, 0.0).is_err());
    }

    #[test]
    fn xi_exponential_identity() {
        // p = 1, σ = 1: ξ_{α,b} = Γ(α+1)/b^{α+1}
        let theta = Theta::new(vec![1.0, 1.0]);
        for &alpha in &[0.0, 0.7, 1.0, 2.0, 3.5] {
            for &b in &[0.5_f64, 1.0, 1.4, 2.0] {
                let expected = (log_gamma(alpha + 1.0).unwrap()
                    - (alpha + 1.0) * b.ln())
                .exp();
                let got = weibull_xi(alpha, b, &theta).unwrap();
                assert!(
                    ((got - expected) / expected).abs() < 1e-12,
                    "alpha={alpha} b={b}: {got} vs {expected}"
                );
            }
        }
        // α = 0, b = 1: density normalization for any θ
        for &(s, p) in &[(0.5, 0.8), (1.0, 1.0), (2.0, 1.5), (3.0, 2.5)] {
            let theta = Theta::new(vec![s, p]);
            assert!((weibull_xi(0.0, 1.0, &theta).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn xi_matches_quadrature() {
        let grid = [(1.0, 0.9, 0.3), (1.5, 1.5, 0.5), (2.0, 2.2, 1.0), (0.7, 1.2, 0.2)];
        for &(s, p, b) in &grid {
            let theta = Theta::new(vec![s, p]);
            let fam = Weibull::default();
            for &alpha in &[0.0, p, 2.0 * p] {
                let q = integrate(
                    |x: f64| (x / s).powf(alpha) * (fam.log_density(&theta, x) * (1.0 + b)).exp(),
                    0.0,
                    f64::INFINITY,
                    &spec(),
                )
                .unwrap()
                .value;
                let closed = weibull_xi(alpha, 1.0 + b, &theta).unwrap();
                assert!(
                    ((closed - q) / q).abs() < 1e-7,
                    "sigma={s} p={p} beta={b} alpha={alpha}: {closed} vs {q}"
                );
            }
        }
    }

    #[test]
    fn eta_reduces_to_xi_and_euler_integral() {
        let theta = Theta::new(vec![1.3, 1.7]);
        for &alpha in &[0.0, 1.0, 2.5] {
            for &g in &[1.0, 1.5, 2.0] {
                let e = weibull_eta(alpha, 0, g, &theta, &spec()).unwrap();
                let x = weibull_xi(alpha, g, &theta).unwrap();
                assert!(((e - x) / x).abs() < 1e-9, "alpha={alpha} g={g}: {e} vs {x}");
            }
        }
        // ∫ log y · e^{-y} dy = -γ_E
        let theta = Theta::new(vec![1.0, 1.0]);
        let v = weibull_eta(0.0, 1, 1.0, &theta, &spec()).unwrap();
        assert!((v + 0.577_215_664_901_532_9).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn eta_finite_on_grid() {
        for &(s, p) in &[(0.5, 0.85), (1.5, 1.5), (2.0, 2.0)] {
            let theta = Theta::new(vec![s, p]);
            for &g in &[1.0, 1.4, 2.0, 3.0] {
                for l in 0..=2 {
                    let v = weibull_eta(0.0, l, g, &theta, &spec()).unwrap();
                    assert!(v.is_finite());
                }
            }
        }
    }

    #[test]
    fn r_matrix_scale_factorization() {
        let theta = Theta::new(vec![1.5, 1.5]);
        let p = theta[1];
        for &g in &[1.0, 1.4, 2.0] {
            let r = weibull_r_matrix(g, &theta, &spec()).unwrap();
            let rt = weibull_r_tilde(g, p, &spec()).unwrap();
            let ratio = p / theta[0];
            let s1 = ratio.powf(0.5 * (g + 1.0));
            let s2 = ratio.powf(0.5 * (g - 1.0));
            assert!((r.get(0, 0) - s1 * s1 * rt.get(0, 0)).abs() < 1e-9 * r.get(0, 0).abs());
            assert!((r.get(0, 1) - s1 * s2 * rt.get(0, 1)).abs() < 1e-9 * r.get(0, 0).abs());
            assert!((r.get(1, 1) - s2 * s2 * rt.get(1, 1)).abs() < 1e-9 * r.get(1, 1).abs());
            assert_eq!(r.get(0, 1), r.get(1, 0));
            assert!(r.get(0, 0) > 0.0 && r.get(1, 1) > 0.0);
        }
    }

    #[test]
    fn r_matrix_gamma_one_is_fisher_information() {
        // quadrature oracle: ∫ u u^T f dx entry by entry
        let fam = Weibull::default();
        for &(s, p) in &[(1.5, 1.5), (1.0, 0.9), (2.0, 2.3)] {
            let theta = Theta::new(vec![s, p]);
            let r = weibull_r_matrix(1.0, &theta, &spec()).unwrap();
            for a in 0..2 {
                for b in 0..2 {
                    let oracle = integrate(
                        |x| {
                            let u = fam.score(&theta, x);
                            u[a] * u[b] * fam.log_density(&theta, x).exp()
                        },
                        0.0,
                        f64::INFINITY,
                        &spec(),
                    )
                    .unwrap()
                    .value;
                    let scale = r.get(a, a).abs().max(r.get(b, b).abs());
                    assert!(
                        (r.get(a, b) - oracle).abs() < 1e-6 * scale,
                        "sigma={s} p={p} [{a}{b}]: {} vs {oracle}",
                        r.get(a, b)
                    );
                }
            }
        }
    }

    #[test]
    fn score_power_integral_digamma_vs_quadrature() {
        let fam = Weibull::default();
        let theta = Theta::new(vec![1.5, 1.5]);
        for &b in &[0.0, 0.1, 0.3, 0.6, 1.0] {
            let closed = fam.score_power_integral(&theta, b).unwrap();
            // η route for the shape coordinate
            let eta_route = weibull_xi(0.0, 1.0 + b, &theta).unwrap() / theta[1]
                + weibull_eta(0.0, 1, 1.0 + b, &theta, &spec()).unwrap()
                - weibull_eta(theta[1], 1, 1.0 + b, &theta, &spec()).unwrap();
            assert!(
                (closed[1] - eta_route).abs() < 1e-8 * (1.0 + eta_route.abs()),
                "beta={b}: digamma {} vs eta {}",
                closed[1],
                eta_route
            );
            // direct quadrature oracle for both coordinates
            #[allow(clippy::needless_range_loop)]
            for c in 0..2 {
                let oracle = integrate(
                    |x| fam.score(&theta, x)[c] * (fam.log_density(&theta, x) * (1.0 + b)).exp(),
                    0.0,
                    f64::INFINITY,
                    &spec(),
                )
                .unwrap()
                .value;
                assert!(
                    (closed[c] - oracle).abs() < 1e-7 * (1.0 + oracle.abs()),
                    "beta={b} coord {c}: {} vs {oracle}",
                    closed[c]
                );
            }
        }
        // β = 0: score integrates to zero under the model
        let xi0 = fam.score_power_integral(&theta, 0.0).unwrap();
        assert!(xi0.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn unit_shape_matches_exponential_law() {
        // W(σ, 1) and the exponential with mean σ share the quantile map
        let fam = Weibull::default();
        let exp = crate::families::exponential::Exponential;
        let tw = Theta::new(vec![2.5, 1.0]);
        let te = Theta::new(vec![2.5]);
        for i in 1..100 {
            let u = i as f64 / 100.0;
            let a = fam.quantile(&tw, u);
            let b = exp.quantile(&te, u);
            assert!((a - b).abs() < 1e-12);
        }
        let s1 = draw(&fam, &tw, 1000, 5).unwrap();
        let s2 = draw(&fam, &tw, 1000, 5).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn mle_recovers_parameters() {
        let fam = Weibull::default();
        let theta = Theta::new(vec![1.5, 1.5]);
        let s = draw(&fam, &theta, 20_000, 31).unwrap();
        let hat = fam.mle(&s).unwrap();
        assert!((hat[0] - 1.5).abs() < 0.05, "sigma {}", hat[0]);
        assert!((hat[1] - 1.5).abs() < 0.05, "p {}", hat[1]);
    }
}
