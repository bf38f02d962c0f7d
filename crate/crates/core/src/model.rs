//! The parametric-family abstraction. Each family implements the
//! [`ModelFamily`] trait; concrete families live in [`crate::families`] and
//! are looked up by name at runtime through the registry there.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Parameter vector of a family, length p.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theta(pub Vec<f64>);

impl Theta {
    pub fn new(values: Vec<f64>) -> Self {
        Theta(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for Theta {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Observed data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    observations: Vec<f64>,
}

impl Sample {
    pub fn new(observations: Vec<f64>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::DegenerateSample("empty sample".into()));
        }
        if observations.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateSample("non-finite observation".into()));
        }
        Ok(Sample { observations })
    }

    pub fn values(&self) -> &[f64] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.observations.iter().sum::<f64>() / self.len() as f64
    }
}

/// Support of the observation space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    AllReals,
    PositiveReals,
}

impl Support {
    pub fn contains(self, x: f64) -> bool {
        match self {
            Support::AllReals => x.is_finite(),
            Support::PositiveReals => x.is_finite() && x > 0.0,
        }
    }
}

/// Which solver the estimation module should drive for a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Scalar fixed-point iteration (exponential family).
    FixedPoint,
    /// Damped Newton iteration on the estimating residual.
    NewtonResidual,
    /// Quasi-Newton descent on the divergence objective in log-space.
    QuasiNewtonObjective,
}

/// A parametric model family: density, score, the power integrals behind
/// the divergence objective, and the J/K sandwich matrices evaluated at the
/// model. Implementations are immutable and freely shareable across threads.
pub trait ModelFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn dim(&self) -> usize;
    fn support(&self) -> Support;

    /// Is theta inside the open parameter domain?
    fn parameter_in_domain(&self, theta: &Theta) -> bool;

    /// Log density at x; x assumed inside the support.
    fn log_density(&self, theta: &Theta, x: f64) -> f64;

    /// Score u(x) = d/dθ log f(x), length p.
    fn score(&self, theta: &Theta, x: f64) -> Vec<f64>;

    /// ∫ f^{1+β} dx.
    fn density_power_integral(&self, theta: &Theta, beta: f64) -> Result<f64>;

    /// ξ_β = ∫ u f^{1+β} dx.
    fn score_power_integral(&self, theta: &Theta, beta: f64) -> Result<Vec<f64>>;

    /// J_β(θ) = ∫ u u^T f^{1+β} dx.
    fn j_matrix(&self, theta: &Theta, beta: f64) -> Result<SquareMatrix>;

    /// K_β(θ) = ∫ u u^T f^{1+2β} dx - ξ_β ξ_β^T (families may deviate from
    /// the centered form; see the Weibull implementation).
    fn k_matrix(&self, theta: &Theta, beta: f64) -> Result<SquareMatrix>;

    fn has_closed_form_jk(&self) -> bool;

    /// Inverse distribution function for sampling; u in (0, 1).
    fn quantile(&self, theta: &Theta, u: f64) -> f64;

    /// Maximum likelihood estimate.
    fn mle(&self, sample: &Sample) -> Result<Theta>;

    /// Starting points for the β > 0 solver, robust alternates included.
    fn fit_starts(&self, sample: &Sample, beta: f64) -> Vec<Theta>;

    fn solver(&self) -> SolverKind;

    /// Which coordinates are constrained positive (log-reparameterized by
    /// the quasi-Newton solver).
    fn positive_params(&self) -> Vec<bool>;
}

fn check_args(family: &dyn ModelFamily, theta: &Theta, x: f64) -> Result<()> {
    if theta.len() != family.dim() {
        return Err(Error::Domain(format!(
            "{}: parameter length {} != {}",
            family.name(),
            theta.len(),
            family.dim()
        )));
    }
    if !family.parameter_in_domain(theta) {
        return Err(Error::Domain(format!(
            "{}: parameter {:?} outside domain",
            family.name(),
            theta.as_slice()
        )));
    }
    if !family.support().contains(x) {
        return Err(Error::Support {
            family: family.name().to_string(),
            x,
        });
    }
    Ok(())
}

/// Density with argument validation.
pub fn density(family: &dyn ModelFamily, theta: &Theta, x: f64) -> Result<f64> {
    check_args(family, theta, x)?;
    Ok(family.log_density(theta, x).exp())
}

/// Log density with argument validation.
pub fn log_density(family: &dyn ModelFamily, theta: &Theta, x: f64) -> Result<f64> {
    check_args(family, theta, x)?;
    Ok(family.log_density(theta, x))
}

/// Score vector with argument validation.
pub fn score(family: &dyn ModelFamily, theta: &Theta, x: f64) -> Result<Vec<f64>> {
    check_args(family, theta, x)?;
    Ok(family.score(theta, x))
}

/// Draw n i.i.d. observations by inverse transform from a seeded stream.
pub fn sample(family: &dyn ModelFamily, theta: &Theta, n: usize, seed: u64) -> Result<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with_rng(family, theta, n, &mut rng)
}

/// Draw n i.i.d. observations from an arbitrary RNG stream.
pub fn sample_with_rng<R: Rng>(
    family: &dyn ModelFamily,
    theta: &Theta,
    n: usize,
    rng: &mut R,
) -> Result<Sample> {
    if !family.parameter_in_domain(theta) {
        return Err(Error::Domain(format!(
            "{}: parameter {:?} outside domain",
            family.name(),
            theta.as_slice()
        )));
    }
    if n == 0 {
        return Err(Error::DegenerateSample("requested n = 0 draws".into()));
    }
    let values = (0..n)
        .map(|_| {
            // open interval (0, 1)
            let mut u: f64 = rng.gen();
            while u <= 0.0 || u >= 1.0 {
                u = rng.gen();
            }
            family.quantile(theta, u)
        })
        .collect();
    Sample::new(values)
}
