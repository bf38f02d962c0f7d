//! Wald-type test statistics built on minimum density power divergence
//! fits: the simple-null quadratic form with matrices at θ0, the
//! composite-null form with everything at the fit, closed-form
//! specializations for the exponential, normal and Weibull families, and
//! signed one-sided variants with a t reference.

use crate::error::{Error, Result};
use crate::estimate::{fit_mdpde, FitOptions, MdpdeFit};
use crate::families::exponential::exp_h_factor;
use crate::families::weibull::weibull_r_tilde;
use crate::families::{Exponential, Normal, Weibull};
use crate::matrix::Matrix;
use crate::model::{ModelFamily, Sample, Theta};
use crate::quad::QuadratureSpec;
use crate::special::{chi2_sf, std_normal_cdf, student_t_cdf};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    TwoSided,
    Greater,
    Less,
}

/// Reference distribution for signed one-sided statistics. The t
/// distribution with n-1 degrees of freedom is the conservative default;
/// the standard normal is the large-sample choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailReference {
    StudentT,
    Normal,
}

pub type RestrictionMap = Box<dyn Fn(&Theta) -> Vec<f64> + Send + Sync>;
pub type RestrictionJacobian = Box<dyn Fn(&Theta) -> Matrix + Send + Sync>;

/// Composite null description: r restriction functions m(θ) = 0 together
/// with the p x r Jacobian-transpose matrix M(θ) = ∂m^T/∂θ.
pub struct Restriction {
    count: usize,
    description: String,
    map: RestrictionMap,
    jacobian_t: RestrictionJacobian,
}

impl Restriction {
    pub fn new(
        count: usize,
        description: impl Into<String>,
        map: impl Fn(&Theta) -> Vec<f64> + Send + Sync + 'static,
        jacobian_t: impl Fn(&Theta) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        Restriction {
            count,
            description: description.into(),
            map: Box::new(map),
            jacobian_t: Box::new(jacobian_t),
        }
    }

    /// Scalar restriction pinning one coordinate: `m(θ) = θ[index] - value`.
    pub fn component(dim: usize, index: usize, value: f64) -> Self {
        assert!(index < dim);
        Restriction::new(
            1,
            format!("theta[{index}] = {value}"),
            move |theta: &Theta| vec![theta[index] - value],
            move |_theta: &Theta| {
                let mut m = Matrix::zeros(dim, 1);
                m.set(index, 0, 1.0);
                m
            },
        )
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn evaluate(&self, theta: &Theta) -> Vec<f64> {
        (self.map)(theta)
    }

    /// M(θ) with a full-column-rank check.
    pub fn jacobian(&self, theta: &Theta) -> Result<Matrix> {
        let m = (self.jacobian_t)(theta);
        if m.cols() != self.count {
            return Err(Error::Restriction(format!(
                "jacobian has {} columns, restriction declares {}",
                m.cols(),
                self.count
            )));
        }
        if m.smallest_singular_value() <= 1e-10 {
            return Err(Error::Restriction(format!(
                "restriction jacobian rank-deficient at {:?}",
                theta.as_slice()
            )));
        }
        Ok(m)
    }
}

/// Outcome of a Wald-type test.
#[derive(Debug, Clone, Serialize)]
pub struct WaldTestResult {
    pub statistic: f64,
    pub df: usize,
    pub alternative: Alternative,
    pub p_value: f64,
    pub beta: f64,
    pub null_description: String,
    pub method: String,
}

fn require_converged(fit: &MdpdeFit) -> Result<()> {
    if !fit.converged {
        return Err(Error::Domain(
            "test requires a converged fit; rerun the solver".into(),
        ));
    }
    Ok(())
}

/// Simple null H0: θ = θ0. The sandwich matrices are evaluated at θ0, not
/// at the fit.
pub fn simple_wald(family: &dyn ModelFamily, fit: &MdpdeFit, theta0: &Theta) -> Result<WaldTestResult> {
    require_converged(fit)?;
    if theta0.len() != family.dim() {
        return Err(Error::Domain("theta0 dimension mismatch".into()));
    }
    if !family.parameter_in_domain(theta0) {
        return Err(Error::Domain("theta0 outside the parameter domain".into()));
    }
    let beta = fit.beta;
    let j = family.j_matrix(theta0, beta)?;
    let k = family.k_matrix(theta0, beta)?;
    let j_inv = j.spd_inverse_guarded("simple_wald J(theta0)")?;
    let sigma0 = j_inv.mul(&k).mul(&j_inv);
    let sigma0_inv = sigma0.spd_inverse_guarded("simple_wald Sigma(theta0)")?;
    let diff: Vec<f64> = (0..theta0.len())
        .map(|i| fit.theta_hat[i] - theta0[i])
        .collect();
    let w = fit.n as f64 * sigma0_inv.quadratic_form(&diff);
    let df = family.dim();
    Ok(WaldTestResult {
        statistic: w,
        df,
        alternative: Alternative::TwoSided,
        p_value: chi2_sf(w.max(0.0), df as f64)?,
        beta,
        null_description: format!("theta = {:?}", theta0.as_slice()),
        method: "simple".into(),
    })
}

/// Exponential simple null via the scalar closed form
/// W = n (θ̂_β - θ0)² / (h(β) θ0²).
pub fn exp_simple_wald(
    sample: &Sample,
    beta: f64,
    theta0: f64,
    options: &FitOptions,
) -> Result<WaldTestResult> {
    if !(theta0 > 0.0) {
        return Err(Error::Domain(format!("theta0 must be > 0, got {theta0}")));
    }
    let fit = fit_mdpde(&Exponential, sample, beta, options)?;
    let w = fit.n as f64 * (fit.theta_hat[0] - theta0).powi(2) / (exp_h_factor(beta) * theta0 * theta0);
    Ok(WaldTestResult {
        statistic: w,
        df: 1,
        alternative: Alternative::TwoSided,
        p_value: chi2_sf(w, 1.0)?,
        beta,
        null_description: format!("theta = {theta0}"),
        method: "exponential-closed-form".into(),
    })
}

/// Composite null H0: m(θ) = 0. Every matrix is evaluated at the fit.
pub fn composite_wald(
    family: &dyn ModelFamily,
    fit: &MdpdeFit,
    restriction: &Restriction,
) -> Result<WaldTestResult> {
    require_converged(fit)?;
    if fit.family != family.name() || fit.theta_hat.len() != family.dim() {
        return Err(Error::Domain(format!(
            "fit was produced by '{}', not '{}'",
            fit.family,
            family.name()
        )));
    }
    let m_val = restriction.evaluate(&fit.theta_hat);
    let m_jac = restriction.jacobian(&fit.theta_hat)?;
    let bracket = m_jac.sandwich(&fit.sigma);
    let bracket_inv = bracket.spd_inverse_guarded("composite_wald bracket")?;
    let w = fit.n as f64 * bracket_inv.quadratic_form(&m_val);
    let df = restriction.count();
    Ok(WaldTestResult {
        statistic: w,
        df,
        alternative: Alternative::TwoSided,
        p_value: chi2_sf(w.max(0.0), df as f64)?,
        beta: fit.beta,
        null_description: restriction.description().to_string(),
        method: "composite".into(),
    })
}

/// Normal mean null (σ unknown) via the closed form
/// W = n (μ̂_β - μ0)² (2β+1)^{3/2} / (σ̂_β² (β+1)³).
pub fn normal_mean_wald(
    sample: &Sample,
    beta: f64,
    mu0: f64,
    options: &FitOptions,
) -> Result<WaldTestResult> {
    let fit = fit_mdpde(&Normal, sample, beta, options)?;
    let (mu, sigma) = (fit.theta_hat[0], fit.theta_hat[1]);
    let w = fit.n as f64 * (mu - mu0).powi(2) * (2.0 * beta + 1.0).powf(1.5)
        / (sigma * sigma * (beta + 1.0).powi(3));
    Ok(WaldTestResult {
        statistic: w,
        df: 1,
        alternative: Alternative::TwoSided,
        p_value: chi2_sf(w, 1.0)?,
        beta,
        null_description: format!("mu = {mu0}"),
        method: "normal-closed-form".into(),
    })
}

/// Weibull scale null (shape unknown) assembled from the scale-free
/// R̃ entries, so only the shape estimate enters the integrals:
/// W = n (σ̂-σ0)² (p̂/σ̂)² det(R̃_{β+1})² / [(r̃22, -r̃12) R̃_{2β+1} (r̃22, -r̃12)^T].
pub fn weibull_scale_wald(
    sample: &Sample,
    beta: f64,
    sigma0: f64,
    options: &FitOptions,
) -> Result<WaldTestResult> {
    if !(sigma0 > 0.0) {
        return Err(Error::Domain(format!("sigma0 must be > 0, got {sigma0}")));
    }
    let fit = fit_mdpde(&Weibull::default(), sample, beta, options)?;
    let (sigma, p) = (fit.theta_hat[0], fit.theta_hat[1]);
    let spec = QuadratureSpec::default();
    let r_j = weibull_r_tilde(1.0 + beta, p, &spec)?;
    let r_k = weibull_r_tilde(1.0 + 2.0 * beta, p, &spec)?;
    let det_j = r_j.get(0, 0) * r_j.get(1, 1) - r_j.get(0, 1) * r_j.get(0, 1);
    let v = [r_j.get(1, 1), -r_j.get(0, 1)];
    let denom = r_k.quadratic_form(&v);
    if !(denom > 0.0) {
        return Err(Error::Singular(format!(
            "weibull scale statistic denominator {denom:e}"
        )));
    }
    let w = fit.n as f64 * ((sigma - sigma0) * (p / sigma) * det_j).powi(2) / denom;
    Ok(WaldTestResult {
        statistic: w,
        df: 1,
        alternative: Alternative::TwoSided,
        p_value: chi2_sf(w, 1.0)?,
        beta,
        null_description: format!("sigma = {sigma0}"),
        method: "weibull-closed-form".into(),
    })
}

/// Signed one-sided statistic for a single coordinate:
/// W = √n (θ̂_c - value) / σ̂_c with σ̂_c² the fitted asymptotic variance of
/// that coordinate. Its square is the two-sided composite statistic for
/// the same coordinate restriction.
pub fn signed_wald(
    fit: &MdpdeFit,
    component: usize,
    null_value: f64,
    alternative: Alternative,
    reference: TailReference,
) -> Result<WaldTestResult> {
    require_converged(fit)?;
    if component >= fit.theta_hat.len() {
        return Err(Error::Domain(format!(
            "component {component} out of range for dimension {}",
            fit.theta_hat.len()
        )));
    }
    let var = fit.sigma.get(component, component);
    if !(var > 0.0) {
        return Err(Error::Singular(format!(
            "fitted variance of component {component} is {var:e}"
        )));
    }
    let w = (fit.n as f64).sqrt() * (fit.theta_hat[component] - null_value) / var.sqrt();
    let lower_tail = match reference {
        TailReference::StudentT => {
            let df = (fit.n - 1).max(1) as u32;
            student_t_cdf(w, df)?
        }
        TailReference::Normal => std_normal_cdf(w),
    };
    let p_value = match alternative {
        Alternative::Greater => 1.0 - lower_tail,
        Alternative::Less => lower_tail,
        Alternative::TwoSided => {
            return Err(Error::Domain(
                "signed statistic is one-sided; use greater or less".into(),
            ))
        }
    };
    Ok(WaldTestResult {
        statistic: w,
        df: fit.n.saturating_sub(1).max(1),
        alternative,
        p_value,
        beta: fit.beta,
        null_description: format!("theta[{component}] = {null_value}"),
        method: "signed".into(),
    })
}

/// Classical one-sample Student t test of H0: μ = μ0 (the textbook
/// baseline the robust statistics are compared against).
pub fn one_sample_t_test(sample: &Sample, mu0: f64, alternative: Alternative) -> Result<WaldTestResult> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::DegenerateSample("t test needs n >= 2".into()));
    }
    let mean = sample.mean();
    let ss = sample
        .values()
        .iter()
        .map(|x| (x - mean).powi(2))
        .sum::<f64>();
    let s2 = ss / (n as f64 - 1.0);
    if !(s2 > 0.0) {
        return Err(Error::DegenerateSample("zero sample variance".into()));
    }
    let t = (mean - mu0) / (s2 / n as f64).sqrt();
    let df = (n - 1) as u32;
    let lower = student_t_cdf(t, df)?;
    let p_value = match alternative {
        Alternative::TwoSided => 2.0 * lower.min(1.0 - lower),
        Alternative::Greater => 1.0 - lower,
        Alternative::Less => lower,
    };
    Ok(WaldTestResult {
        statistic: t,
        df: df as usize,
        alternative,
        p_value,
        beta: 0.0,
        null_description: format!("mu = {mu0}"),
        method: "student-t".into(),
    })
}
