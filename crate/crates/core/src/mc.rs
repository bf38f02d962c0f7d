//! Monte Carlo harness for level/power studies under pure and contaminated
//! data-generating laws.
//!
//! Replications are embarrassingly parallel; every replication derives its
//! own RNG stream from (seed, cell, replication index), so reports are
//! bit-identical regardless of worker count or execution order.

use crate::error::{Error, Result};
use crate::estimate::{fit_mdpde, FitOptions};
use crate::families::create_family;
use crate::model::{sample_with_rng, ModelFamily, Sample, Theta};
use crate::special::chi2_quantile;
use crate::wald::{composite_wald, simple_wald, Restriction};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One mixture component: a family name and its parameter vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub family: String,
    pub theta: Vec<f64>,
}

/// A finite mixture data-generating law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<MixtureComponent>,
    pub weights: Vec<f64>,
}

impl MixtureSpec {
    /// Single-component convenience constructor.
    pub fn single(family: &str, theta: Vec<f64>) -> Self {
        MixtureSpec {
            components: vec![MixtureComponent {
                family: family.to_string(),
                theta,
            }],
            weights: vec![1.0],
        }
    }

    pub fn two(
        family_a: &str,
        theta_a: Vec<f64>,
        weight_a: f64,
        family_b: &str,
        theta_b: Vec<f64>,
    ) -> Self {
        MixtureSpec {
            components: vec![
                MixtureComponent {
                    family: family_a.to_string(),
                    theta: theta_a,
                },
                MixtureComponent {
                    family: family_b.to_string(),
                    theta: theta_b,
                },
            ],
            weights: vec![weight_a, 1.0 - weight_a],
        }
    }

    fn build(&self) -> Result<Vec<(Box<dyn ModelFamily>, Theta)>> {
        if self.components.is_empty() {
            return Err(Error::InvalidInput("mixture needs >= 1 component".into()));
        }
        if self.components.len() != self.weights.len() {
            return Err(Error::InvalidInput(
                "mixture weights and components differ in length".into(),
            ));
        }
        if self.weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidInput("mixture weights must be >= 0".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        self.components
            .iter()
            .map(|c| {
                let fam = create_family(&c.family)?;
                let theta = Theta::new(c.theta.clone());
                if !fam.parameter_in_domain(&theta) {
                    return Err(Error::Domain(format!(
                        "mixture component {:?} outside the {} domain",
                        c.theta, c.family
                    )));
                }
                Ok((fam, theta))
            })
            .collect()
    }
}

/// Which test each replication runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum TestSpec {
    /// Simple null θ = θ0 for the named family.
    Simple { family: String, theta0: Vec<f64> },
    /// Scalar component restriction `theta[index] = value` (composite null).
    Component {
        family: String,
        index: usize,
        value: f64,
    },
}

impl TestSpec {
    pub fn family_name(&self) -> &str {
        match self {
            TestSpec::Simple { family, .. } | TestSpec::Component { family, .. } => family,
        }
    }

    fn df(&self, family: &dyn ModelFamily) -> usize {
        match self {
            TestSpec::Simple { .. } => family.dim(),
            TestSpec::Component { .. } => 1,
        }
    }
}

fn default_replications() -> usize {
    2000
}

/// A complete simulation design.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McScenario {
    pub data_law: MixtureSpec,
    pub test: TestSpec,
    pub beta_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    pub nominal_alpha: f64,
    pub seed: u64,
    /// Multistart fits per replication (slower, sturdier under heavy
    /// contamination).
    #[serde(default)]
    pub multistart: bool,
}

impl McScenario {
    pub fn validate(&self) -> Result<()> {
        self.data_law.build()?;
        create_family(self.test.family_name())?;
        if self.replications < 1 {
            return Err(Error::InvalidInput("replications must be >= 1".into()));
        }
        if !(self.nominal_alpha > 0.0 && self.nominal_alpha < 1.0) {
            return Err(Error::InvalidInput(format!(
                "nominal_alpha {} outside (0,1)",
                self.nominal_alpha
            )));
        }
        if self.beta_grid.is_empty() || self.n_grid.is_empty() {
            return Err(Error::InvalidInput("empty beta or n grid".into()));
        }
        if self.beta_grid.iter().any(|b| *b < 0.0) {
            return Err(Error::InvalidInput("beta grid must be nonnegative".into()));
        }
        if self.n_grid.iter().any(|n| *n < 2) {
            return Err(Error::InvalidInput("each n must be >= 2".into()));
        }
        Ok(())
    }
}

/// Rejection summary for one (β, n) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCell {
    pub beta: f64,
    pub n: usize,
    pub rejection_rate: f64,
    pub mc_se: f64,
    pub failures: usize,
    pub replications: usize,
    /// Set when more than 1% of replications failed to fit.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub cells: Vec<McCell>,
}

impl McReport {
    /// Fixed-column CSV: beta,n,rejection_rate,mc_se,failures.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,n,rejection_rate,mc_se,failures\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.beta, c.n, c.rejection_rate, c.mc_se, c.failures
            ));
        }
        out
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn replication_seed(seed: u64, beta_idx: usize, n_idx: usize, rep: usize) -> u64 {
    let mut s = splitmix64(seed);
    s = splitmix64(s ^ (beta_idx as u64).wrapping_mul(0x9E37_79B9));
    s = splitmix64(s ^ (n_idx as u64).wrapping_mul(0x85EB_CA6B));
    splitmix64(s ^ rep as u64)
}

/// Draw n observations from the mixture: the component is chosen by weight,
/// then the draw is by inverse transform.
pub fn sample_mixture<R: Rng>(spec: &MixtureSpec, n: usize, rng: &mut R) -> Result<Sample> {
    let components = spec.build()?;
    if n == 0 {
        return Err(Error::DegenerateSample("requested n = 0 draws".into()));
    }
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let pick: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = components.len() - 1;
        for (i, w) in spec.weights.iter().enumerate() {
            acc += w;
            if pick < acc {
                chosen = i;
                break;
            }
        }
        let (fam, theta) = &components[chosen];
        let one = sample_with_rng(fam.as_ref(), theta, 1, rng)?;
        values.push(one.values()[0]);
    }
    Sample::new(values)
}

/// Run every (β, n) cell of the scenario. Fit failures are counted and
/// excluded from the rejection denominator, never treated as decisions.
pub fn run_scenario(scenario: &McScenario) -> Result<McReport> {
    scenario.validate()?;
    let family = create_family(scenario.test.family_name())?;
    let df = scenario.test.df(family.as_ref());
    let crit = chi2_quantile(1.0 - scenario.nominal_alpha, df as f64)?;
    let options = FitOptions {
        multistart: scenario.multistart,
        ..FitOptions::default()
    };
    let restriction = match &scenario.test {
        TestSpec::Component { index, value, .. } => {
            if *index >= family.dim() {
                return Err(Error::InvalidInput(format!(
                    "component index {index} out of range"
                )));
            }
            Some(Restriction::component(family.dim(), *index, *value))
        }
        TestSpec::Simple { theta0, .. } => {
            let t = Theta::new(theta0.clone());
            if !family.parameter_in_domain(&t) {
                return Err(Error::InvalidInput("theta0 outside the family domain".into()));
            }
            None
        }
    };

    let mut cells = Vec::new();
    for (bi, &beta) in scenario.beta_grid.iter().enumerate() {
        for (ni, &n) in scenario.n_grid.iter().enumerate() {
            let outcomes: Vec<Option<bool>> = (0..scenario.replications)
                .into_par_iter()
                .map(|rep| {
                    let mut rng =
                        ChaCha8Rng::seed_from_u64(replication_seed(scenario.seed, bi, ni, rep));
                    let sample = match sample_mixture(&scenario.data_law, n, &mut rng) {
                        Ok(s) => s,
                        Err(_) => return None,
                    };
                    let fit = match fit_mdpde(family.as_ref(), &sample, beta, &options) {
                        Ok(f) => f,
                        Err(_) => return None,
                    };
                    let stat = match (&scenario.test, &restriction) {
                        (TestSpec::Simple { theta0, .. }, _) => {
                            match simple_wald(family.as_ref(), &fit, &Theta::new(theta0.clone())) {
                                Ok(r) => r.statistic,
                                Err(_) => return None,
                            }
                        }
                        (TestSpec::Component { .. }, Some(r)) => {
                            match composite_wald(family.as_ref(), &fit, r) {
                                Ok(res) => res.statistic,
                                Err(_) => return None,
                            }
                        }
                        _ => unreachable!(),
                    };
                    Some(stat > crit)
                })
                .collect();

            let failures = outcomes.iter().filter(|o| o.is_none()).count();
            let used = scenario.replications - failures;
            let rejects = outcomes.iter().flatten().filter(|r| **r).count();
            let rate = if used > 0 {
                rejects as f64 / used as f64
            } else {
                f64::NAN
            };
            let se = if used > 0 {
                (rate * (1.0 - rate) / used as f64).sqrt()
            } else {
                f64::NAN
            };
            if failures * 100 > scenario.replications {
                log::warn!(
                    "cell beta={beta} n={n}: {failures}/{} replications failed to fit",
                    scenario.replications
                );
            }
            cells.push(McCell {
                beta,
                n,
                rejection_rate: rate,
                mc_se: se,
                failures,
                replications: scenario.replications,
                flagged: failures * 100 > scenario.replications,
            });
        }
    }
    Ok(McReport { cells })
}
