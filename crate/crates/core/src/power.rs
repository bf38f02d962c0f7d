//! Asymptotic power approximations, contiguous-alternative noncentral
//! distributions, and sample-size planning for the Wald-type tests.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::model::{ModelFamily, Theta};
use crate::special::{chi2_quantile, noncentral_chi2_cdf, std_normal_cdf, std_normal_quantile};
use crate::wald::Restriction;
use serde::Serialize;

/// Where the sandwich matrices in σ_W² are evaluated.
///
/// `AtAlternative` inverts the full sandwich at θ*; `DeltaMethod` uses the
/// first-order expansion of the quadratic form, which mixes matrices at θ0
/// and θ*. The two disagree whenever Σ(θ0) ≠ Σ(θ*); both are exposed and
/// reported side by side by the acceptance suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceForm {
    AtAlternative,
    DeltaMethod,
}

/// How the planning routine turns a power target into n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleSizeMethod {
    /// The quadratic-formula shortcut n* = (A + B + √(A(A+2B))) / (2 l²).
    ClosedForm,
    /// Smallest n whose normal power approximation reaches the target.
    InvertPower,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerResult {
    pub power: f64,
    pub noncentrality: Option<f64>,
    pub sigma_w: Option<f64>,
    pub l_value: Option<f64>,
}

fn sigma_at(family: &dyn ModelFamily, theta: &Theta, beta: f64) -> Result<SquareMatrix> {
    let j = family.j_matrix(theta, beta)?;
    let k = family.k_matrix(theta, beta)?;
    let j_inv = j.spd_inverse_guarded("power J")?;
    Ok(j_inv.mul(&k).mul(&j_inv))
}

fn check_point(family: &dyn ModelFamily, theta: &Theta, label: &str) -> Result<()> {
    if theta.len() != family.dim() || !family.parameter_in_domain(theta) {
        return Err(Error::Domain(format!(
            "{label} {:?} invalid for family {}",
            theta.as_slice(),
            family.name()
        )));
    }
    Ok(())
}

/// The quadratic drift l(θ) = (θ-θ0)^T Σ(θ0)^{-1} (θ-θ0).
pub fn l_quadratic(
    family: &dyn ModelFamily,
    theta: &Theta,
    theta0: &Theta,
    beta: f64,
) -> Result<f64> {
    check_point(family, theta, "theta")?;
    check_point(family, theta0, "theta0")?;
    let sigma0_inv = sigma_at(family, theta0, beta)?.spd_inverse_guarded("l_quadratic")?;
    let d: Vec<f64> = (0..theta.len()).map(|i| theta[i] - theta0[i]).collect();
    Ok(sigma0_inv.quadratic_form(&d))
}

fn sigma_w_squared(
    family: &dyn ModelFamily,
    theta0: &Theta,
    theta_star: &Theta,
    beta: f64,
    form: VarianceForm,
) -> Result<f64> {
    let d: Vec<f64> = (0..theta0.len())
        .map(|i| theta_star[i] - theta0[i])
        .collect();
    match form {
        VarianceForm::AtAlternative => {
            let inv = sigma_at(family, theta_star, beta)?.spd_inverse_guarded("sigma_w")?;
            Ok(4.0 * inv.quadratic_form(&d))
        }
        VarianceForm::DeltaMethod => {
            let s0_inv = sigma_at(family, theta0, beta)?.spd_inverse_guarded("sigma_w")?;
            let s_star = sigma_at(family, theta_star, beta)?;
            let grad: Vec<f64> = s0_inv.mul_vec(&d).iter().map(|x| 2.0 * x).collect();
            Ok(s_star.quadratic_form(&grad))
        }
    }
}

/// Normal approximation to the power of the simple-null test at a fixed
/// alternative θ*.
pub fn approx_power_simple(
    family: &dyn ModelFamily,
    theta0: &Theta,
    theta_star: &Theta,
    beta: f64,
    n: usize,
    alpha: f64,
    form: VarianceForm,
) -> Result<PowerResult> {
    check_point(family, theta0, "theta0")?;
    check_point(family, theta_star, "theta_star")?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must be in (0,1), got {alpha}")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let l = l_quadratic(family, theta_star, theta0, beta)?;
    let sw2 = sigma_w_squared(family, theta0, theta_star, beta, form)?;
    if !(sw2 > 0.0) {
        return Err(Error::DegenerateQuery(
            "sigma_W vanishes: theta_star equals theta0".into(),
        ));
    }
    let sw = sw2.sqrt();
    let crit = chi2_quantile(1.0 - alpha, family.dim() as f64)?;
    let nf = n as f64;
    let arg = nf.sqrt() / sw * (crit / nf - l);
    Ok(PowerResult {
        power: 1.0 - std_normal_cdf(arg),
        noncentrality: None,
        sigma_w: Some(sw),
        l_value: Some(l),
    })
}

/// Sample size needed for the simple-null test to reach `target_power`.
#[allow(clippy::too_many_arguments)]
pub fn required_sample_size(
    family: &dyn ModelFamily,
    theta0: &Theta,
    theta_star: &Theta,
    beta: f64,
    alpha: f64,
    target_power: f64,
    method: SampleSizeMethod,
    form: VarianceForm,
) -> Result<usize> {
    if !(target_power > 0.0 && target_power < 1.0) {
        return Err(Error::Domain(format!(
            "target power must be in (0,1), got {target_power}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must be in (0,1), got {alpha}")));
    }
    let l = l_quadratic(family, theta_star, theta0, beta)?;
    if !(l > 0.0) {
        return Err(Error::DegenerateQuery("theta_star equals theta0".into()));
    }
    match method {
        SampleSizeMethod::ClosedForm => {
            let sw2 = sigma_w_squared(family, theta0, theta_star, beta, VarianceForm::AtAlternative)
                .and_then(|_| sigma_w_squared(family, theta0, theta_star, beta, form))?;
            let z = std_normal_quantile(1.0 - target_power)?;
            let a = sw2 * z * z;
            let crit = chi2_quantile(1.0 - alpha, family.dim() as f64)?;
            let b = 0.5 * crit * l;
            let n_star = (a + b + (a * (a + 2.0 * b)).sqrt()) / (2.0 * l * l);
            Ok(n_star.floor() as usize + 1)
        }
        SampleSizeMethod::InvertPower => {
            let power_at = |n: usize| -> Result<f64> {
                Ok(approx_power_simple(family, theta0, theta_star, beta, n, alpha, form)?.power)
            };
            let mut hi = 1usize;
            while power_at(hi)? < target_power {
                hi *= 2;
                if hi > 1 << 40 {
                    return Err(Error::DegenerateQuery(
                        "no finite sample size reaches the target power".into(),
                    ));
                }
            }
            let mut lo = 0usize; // power(0) treated as below target
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if mid == 0 || power_at(mid)? < target_power {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(hi)
        }
    }
}

/// Noncentral chi-square power under the contiguous drift θ0 + d/√n.
/// The noncentrality is δ = d^T Σ(θ0)^{-1} d.
pub fn contiguous_power_simple(
    family: &dyn ModelFamily,
    theta0: &Theta,
    d: &[f64],
    beta: f64,
    alpha: f64,
) -> Result<PowerResult> {
    check_point(family, theta0, "theta0")?;
    if d.len() != family.dim() {
        return Err(Error::Domain("drift dimension mismatch".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must be in (0,1), got {alpha}")));
    }
    let inv = sigma_at(family, theta0, beta)?.spd_inverse_guarded("contiguous power")?;
    let delta = inv.quadratic_form(d);
    let p = family.dim() as f64;
    let crit = chi2_quantile(1.0 - alpha, p)?;
    Ok(PowerResult {
        power: 1.0 - noncentral_chi2_cdf(crit, p, delta)?,
        noncentrality: Some(delta),
        sigma_w: None,
        l_value: None,
    })
}

/// Normal approximation to composite-null power at a fixed alternative θ*
/// with m(θ*) ≠ 0. The gradient of l*(·, θ*) is taken by central finite
/// differences with relative step 1e-6.
pub fn composite_power_approx(
    family: &dyn ModelFamily,
    restriction: &Restriction,
    theta_star: &Theta,
    beta: f64,
    n: usize,
    alpha: f64,
) -> Result<PowerResult> {
    check_point(family, theta_star, "theta_star")?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must be in (0,1), got {alpha}")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let sigma_star = sigma_at(family, theta_star, beta)?;
    let m_jac = restriction.jacobian(theta_star)?;
    let bracket_inv = m_jac
        .sandwich(&sigma_star)
        .spd_inverse_guarded("composite power bracket")?;
    let l_of = |theta: &Theta| -> f64 {
        let m = restriction.evaluate(theta);
        bracket_inv.quadratic_form(&m)
    };
    let l_star = l_of(theta_star);
    if !(l_star > 0.0) {
        return Err(Error::DegenerateQuery(
            "m(theta_star) = 0: alternative lies in the null set".into(),
        ));
    }
    let p = family.dim();
    let mut grad = vec![0.0; p];
    for i in 0..p {
        let h = 1e-6 * theta_star[i].abs().max(1e-6);
        let mut tp = theta_star.0.clone();
        let mut tm = theta_star.0.clone();
        tp[i] += h;
        tm[i] -= h;
        grad[i] = (l_of(&Theta::new(tp)) - l_of(&Theta::new(tm))) / (2.0 * h);
    }
    let sw2 = sigma_star.quadratic_form(&grad);
    if !(sw2 > 0.0) {
        return Err(Error::DegenerateQuery("sigma_W vanishes".into()));
    }
    let sw = sw2.sqrt();
    let crit = chi2_quantile(1.0 - alpha, restriction.count() as f64)?;
    let nf = n as f64;
    let arg = nf.sqrt() / sw * (crit / nf - l_star);
    Ok(PowerResult {
        power: 1.0 - std_normal_cdf(arg),
        noncentrality: None,
        sigma_w: Some(sw),
        l_value: Some(l_star),
    })
}

/// Contiguous drift for the composite test, given either a parameter-space
/// direction d (converted through M(θ0)) or a restriction-space shift δ.
#[derive(Debug, Clone)]
pub enum ContiguousShift {
    ParameterDirection(Vec<f64>),
    RestrictionShift(Vec<f64>),
}

pub fn contiguous_power_composite(
    family: &dyn ModelFamily,
    restriction: &Restriction,
    theta0: &Theta,
    shift: &ContiguousShift,
    beta: f64,
    alpha: f64,
) -> Result<PowerResult> {
    check_point(family, theta0, "theta0")?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must be in (0,1), got {alpha}")));
    }
    let m_jac = restriction.jacobian(theta0)?;
    let sigma0 = sigma_at(family, theta0, beta)?;
    let bracket_inv = m_jac
        .sandwich(&sigma0)
        .spd_inverse_guarded("contiguous composite bracket")?;
    let delta_vec = match shift {
        ContiguousShift::ParameterDirection(d) => {
            if d.len() != family.dim() {
                return Err(Error::Domain("drift dimension mismatch".into()));
            }
            m_jac.transpose_mul_vec(d)
        }
        ContiguousShift::RestrictionShift(delta) => {
            if delta.len() != restriction.count() {
                return Err(Error::Domain("shift dimension mismatch".into()));
            }
            delta.clone()
        }
    };
    let nc = bracket_inv.quadratic_form(&delta_vec);
    let r = restriction.count() as f64;
    let crit = chi2_quantile(1.0 - alpha, r)?;
    Ok(PowerResult {
        power: 1.0 - noncentral_chi2_cdf(crit, r, nc)?,
        noncentrality: Some(nc),
        sigma_w: None,
        l_value: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Exponential, Normal};
    use crate::quad::{integrate, QuadratureSpec};

    #[test]
    fn l_quadratic_values() {
        let fam = Exponential;
        let t0 = Theta::new(vec![2.0]);
        assert!(l_quadratic(&fam, &t0, &t0, 0.0).unwrap().abs() < 1e-15);
        let l = l_quadratic(&fam, &Theta::new(vec![1.0]), &t0, 0.0).unwrap();
        assert!((l - 0.25).abs() < 1e-12, "got {l}");
        let l2 = l_quadratic(&fam, &Theta::new(vec![2.6]), &t0, 0.0).unwrap();
        assert!(l2 > 0.0);
    }

    #[test]
    fn approx_power_pieces() {
        let fam = Exponential;
        let t0 = Theta::new(vec![2.0]);
        let ts = Theta::new(vec![1.0]);
        let r = approx_power_simple(&fam, &t0, &ts, 0.0, 53, 0.05, VarianceForm::AtAlternative)
            .unwrap();
        assert!((r.sigma_w.unwrap() - 2.0).abs() < 1e-10);
        assert!((r.l_value.unwrap() - 0.25).abs() < 1e-10);
        // degenerate query
        assert!(matches!(
            approx_power_simple(&fam, &t0, &t0, 0.0, 50, 0.05, VarianceForm::AtAlternative),
            Err(Error::DegenerateQuery(_))
        ));
        // consistency: power -> 1 with n
        let big = approx_power_simple(&fam, &t0, &ts, 0.0, 1_000_000, 0.05, VarianceForm::AtAlternative)
            .unwrap();
        assert!(big.power > 0.999999);
        let mut prev = 0.0;
        for &n in &[10, 30, 53, 100, 300, 1000] {
            let p = approx_power_simple(&fam, &t0, &ts, 0.0, n, 0.05, VarianceForm::AtAlternative)
                .unwrap()
                .power;
            assert!(p > prev, "power not increasing at n={n}");
            prev = p;
        }
    }

    #[test]
    fn sample_size_closed_form_case() {
        // A ≈ 2.8333, B ≈ 0.48019, n* ≈ 52.7
        let fam = Exponential;
        let n = required_sample_size(
            &fam,
            &Theta::new(vec![2.0]),
            &Theta::new(vec![1.0]),
            0.0,
            0.05,
            0.8,
            SampleSizeMethod::ClosedForm,
            VarianceForm::AtAlternative,
        )
        .unwrap();
        assert_eq!(n, 53);
    }

    #[test]
    fn sample_size_half_power_collapse() {
        // target 0.5 makes A = 0 and n* = B/(2l²) = χ²/(4l)
        let fam = Exponential;
        let t0 = Theta::new(vec![2.0]);
        let ts = Theta::new(vec![1.0]);
        let n = required_sample_size(
            &fam,
            &t0,
            &ts,
            0.0,
            0.05,
            0.5,
            SampleSizeMethod::ClosedForm,
            VarianceForm::AtAlternative,
        )
        .unwrap();
        let crit = chi2_quantile(0.95, 1.0).unwrap();
        let l = 0.25;
        let expected = (crit / (4.0 * l)).floor() as usize + 1;
        assert_eq!(n, expected);
    }

    #[test]
    fn sample_size_inversion_round_trip() {
        let fam = Exponential;
        let t0 = Theta::new(vec![2.0]);
        let ts = Theta::new(vec![1.0]);
        for &form in &[VarianceForm::AtAlternative, VarianceForm::DeltaMethod] {
            let n = required_sample_size(
                &fam,
                &t0,
                &ts,
                0.0,
                0.05,
                0.8,
                SampleSizeMethod::InvertPower,
                form,
            )
            .unwrap();
            let p_at = |m: usize| {
                approx_power_simple(&fam, &t0, &ts, 0.0, m, 0.05, form)
                    .unwrap()
                    .power
            };
            assert!(p_at(n) >= 0.8 - 1e-12, "form {form:?}: n={n} power {}", p_at(n));
            if n > 1 {
                assert!(p_at(n - 1) < 0.8, "form {form:?}: n-1 already reaches target");
            }
        }
    }

    #[test]
    fn contiguous_power_null_case_and_monotonicity() {
        let fam = Exponential;
        let t0 = Theta::new(vec![2.0]);
        let at_null = contiguous_power_simple(&fam, &t0, &[0.0], 0.0, 0.05).unwrap();
        assert!((at_null.power - 0.05).abs() < 1e-10);
        let mut prev = at_null.power;
        for k in 1..8 {
            let p = contiguous_power_simple(&fam, &t0, &[0.7 * k as f64], 0.0, 0.05)
                .unwrap()
                .power;
            assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn contiguous_composite_shift_equivalence() {
        let fam = Normal;
        let t0 = Theta::new(vec![0.0, 1.0]);
        let restriction = Restriction::component(2, 0, 0.0);
        let d = vec![1.3, -0.4];
        // no drift: power collapses to the level
        let null = contiguous_power_composite(
            &fam,
            &restriction,
            &t0,
            &ContiguousShift::ParameterDirection(vec![0.0, 0.0]),
            0.2,
            0.05,
        )
        .unwrap();
        assert!((null.power - 0.05).abs() < 1e-10);
        let a = contiguous_power_composite(
            &fam,
            &restriction,
            &t0,
            &ContiguousShift::ParameterDirection(d.clone()),
            0.2,
            0.05,
        )
        .unwrap();
        // δ = M^T d picks out the first coordinate here
        let b = contiguous_power_composite(
            &fam,
            &restriction,
            &t0,
            &ContiguousShift::RestrictionShift(vec![1.3]),
            0.2,
            0.05,
        )
        .unwrap();
        assert_eq!(a.power, b.power);
        assert_eq!(a.noncentrality, b.noncentrality);
    }

    #[test]
    fn contiguous_composite_noncentrality_vs_quadrature_matrices() {
        // closed normal matrices against numerically integrated ones
        let fam = Normal;
        let t0 = Theta::new(vec![0.0, 1.0]);
        let beta = 0.3;
        let restriction = Restriction::component(2, 0, 0.0);
        let d = vec![0.9, 0.0];
        let closed = contiguous_power_composite(
            &fam,
            &restriction,
            &t0,
            &ContiguousShift::ParameterDirection(d.clone()),
            beta,
            0.05,
        )
        .unwrap();
        // scalar bracket = σ²(β+1)³/(2β+1)^{3/2}
        let expected_bracket = (beta + 1.0).powi(3) / (2.0 * beta + 1.0).powf(1.5);
        let expected_nc = d[0] * d[0] / expected_bracket;
        assert!(
            (closed.noncentrality.unwrap() - expected_nc).abs() < 1e-10,
            "{} vs {expected_nc}",
            closed.noncentrality.unwrap()
        );
        // quadrature-built sandwich for the same bracket
        let spec = QuadratureSpec::default();
        let (lo, hi) = (-18.0, 18.0);
        let mut j = SquareMatrix::zeros(2);
        let mut k = SquareMatrix::zeros(2);
        for r in 0..2 {
            for c in 0..2 {
                let jv = integrate(
                    |x| {
                        let u = fam.score(&t0, x);
                        u[r] * u[c] * (fam.log_density(&t0, x) * (1.0 + beta)).exp()
                    },
                    lo,
                    hi,
                    &spec,
                )
                .unwrap()
                .value;
                j.set(r, c, jv);
                let kv = integrate(
                    |x| {
                        let u = fam.score(&t0, x);
                        u[r] * u[c] * (fam.log_density(&t0, x) * (1.0 + 2.0 * beta)).exp()
                    },
                    lo,
                    hi,
                    &spec,
                )
                .unwrap()
                .value;
                k.set(r, c, kv);
            }
        }
        let xi = fam.score_power_integral(&t0, beta).unwrap();
        let k = k.sub(&SquareMatrix::outer(&xi));
        let j_inv = j.inverse().unwrap();
        let sigma_q = j_inv.mul(&k).mul(&j_inv);
        let nc_quad = d[0] * d[0] / sigma_q.get(0, 0);
        assert!(
            (closed.noncentrality.unwrap() - nc_quad).abs() < 1e-6,
            "{} vs {nc_quad}",
            closed.noncentrality.unwrap()
        );
    }

    #[test]
    fn composite_power_matches_known_sigma_simple_case() {
        // normal mean restriction at β = 0 reduces to the known-σ scalar
        // approximation: l = μ*², σ_W² = 4 μ*²
        let fam = Normal;
        let restriction = Restriction::component(2, 0, 0.0);
        let theta_star = Theta::new(vec![0.3, 1.0]);
        let n = 100;
        let got = composite_power_approx(&fam, &restriction, &theta_star, 0.0, n, 0.05).unwrap();
        let l = 0.09_f64;
        let sw = (4.0 * l).sqrt();
        let crit = chi2_quantile(0.95, 1.0).unwrap();
        let arg = (n as f64).sqrt() / sw * (crit / n as f64 - l);
        let expected = 1.0 - std_normal_cdf(arg);
        assert!(
            (got.power - expected).abs() < 0.1 * expected,
            "{} vs {expected}",
            got.power
        );
        // degenerate alternative on the null set
        assert!(matches!(
            composite_power_approx(&fam, &restriction, &Theta::new(vec![0.0, 1.0]), 0.0, n, 0.05),
            Err(Error::DegenerateQuery(_))
        ));
        // consistency in n
        let big = composite_power_approx(&fam, &restriction, &theta_star, 0.0, 100_000, 0.05)
            .unwrap();
        assert!(big.power > 0.99999);
    }

    #[test]
    fn weibull_power_paths_work() {
        // quadrature-backed sandwich matrices feed the same formulas
        let fam = crate::families::Weibull::default();
        let t0 = Theta::new(vec![1.5, 1.5]);
        let ts = Theta::new(vec![1.2, 1.5]);
        let a = approx_power_simple(&fam, &t0, &ts, 0.2, 80, 0.05, VarianceForm::AtAlternative)
            .unwrap();
        assert!(a.power > 0.05 && a.power <= 1.0);
        let restriction = Restriction::component(2, 0, 1.5);
        let cp = composite_power_approx(&fam, &restriction, &ts, 0.2, 80, 0.05).unwrap();
        assert!(cp.power > 0.05 && cp.power <= 1.0);
        let cc = contiguous_power_composite(
            &fam,
            &restriction,
            &t0,
            &ContiguousShift::ParameterDirection(vec![-1.5, 0.0]),
            0.2,
            0.05,
        )
        .unwrap();
        assert!(cc.power > 0.05 && cc.power < 1.0);
    }

    #[test]
    fn powers_stay_in_range() {
        let fam = Exponential;
        let t0 = Theta::new(vec![2.0]);
        for k in 1..20 {
            let ts = Theta::new(vec![2.0 + 0.1 * k as f64]);
            for &form in &[VarianceForm::AtAlternative, VarianceForm::DeltaMethod] {
                for &n in &[5, 50, 500] {
                    let p = approx_power_simple(&fam, &t0, &ts, 0.2, n, 0.05, form)
                        .unwrap()
                        .power;
                    assert!((0.0..=1.0).contains(&p));
                }
            }
            let c = contiguous_power_simple(&fam, &t0, &[0.1 * k as f64], 0.2, 0.05)
                .unwrap()
                .power;
            assert!((0.05 - 1e-3..=1.0).contains(&c));
        }
    }
}
