//! `dpd` — command line driver for density power divergence estimation,
//! Wald-type testing, power analysis, tuning-parameter selection, Monte
//! Carlo studies and the canned example analyses.
//!
//! Results go to stdout as JSON; tabular results can also be written to a
//! CSV file with `--csv`. Exit codes: 0 success, 2 input error, 3 numeric
//! failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dpd_core::data::{load_dataset, run_example, telephone_sweep, AnalysisRun, NamedDataset};
use dpd_core::error::Error as CoreError;
use dpd_core::estimate::{fit_mdpde, FitOptions};
use dpd_core::families::{create_family_with, KMatrixConvention};
use dpd_core::mc::{run_scenario, McScenario};
use dpd_core::model::{ModelFamily, Sample, Theta};
use dpd_core::power::{
    approx_power_simple, composite_power_approx, contiguous_power_composite,
    contiguous_power_simple, required_sample_size, ContiguousShift, SampleSizeMethod, VarianceForm,
};
use dpd_core::tuning::{select_beta, TuningResult};
use dpd_core::wald::{
    composite_wald, exp_simple_wald, normal_mean_wald, signed_wald, simple_wald,
    weibull_scale_wald, Alternative, Restriction, TailReference,
};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dpd",
    about = "Robust estimation and Wald-type testing via the density power divergence",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(alias = "exponential")]
    Exp,
    #[value(alias = "gaussian")]
    Normal,
    Weibull,
}

impl FamilyArg {
    fn name(self) -> &'static str {
        match self {
            FamilyArg::Exp => "exponential",
            FamilyArg::Normal => "normal",
            FamilyArg::Weibull => "weibull",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KConventionArg {
    Uncentered,
    Centered,
}

impl From<KConventionArg> for KMatrixConvention {
    fn from(v: KConventionArg) -> Self {
        match v {
            KConventionArg::Uncentered => KMatrixConvention::Uncentered,
            KConventionArg::Centered => KMatrixConvention::Centered,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VarianceArg {
    /// Sandwich inverted at the alternative.
    AtAlternative,
    /// First-order delta-method form.
    Delta,
}

impl From<VarianceArg> for VarianceForm {
    fn from(v: VarianceArg) -> Self {
        match v {
            VarianceArg::AtAlternative => VarianceForm::AtAlternative,
            VarianceArg::Delta => VarianceForm::DeltaMethod,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleSizeArg {
    /// Closed quadratic formula.
    Formula,
    /// Invert the power approximation numerically.
    Invert,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlternativeArg {
    Greater,
    Less,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReferenceArg {
    /// Student t with n-1 degrees of freedom (conservative).
    T,
    /// Standard normal (large samples).
    Normal,
}

#[derive(Args)]
struct FamilyData {
    /// Model family.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Built-in dataset name (leukemia, telephone, darwin) or a data file
    /// (one value per line; commas allowed; '#' comments).
    #[arg(long)]
    data: String,
    /// Tuning parameter β >= 0.
    #[arg(long)]
    beta: f64,
    /// Try all solver starts and keep the best converged candidate.
    #[arg(long)]
    multistart: bool,
    /// Explicit starting point, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    init: Option<Vec<f64>>,
    /// Weibull K-matrix convention.
    #[arg(long, value_enum, default_value = "uncentered")]
    weibull_k: KConventionArg,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the minimum density power divergence estimate.
    Fit {
        #[command(flatten)]
        common: FamilyData,
        /// Also write the fitted parameters as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Wald-type hypothesis tests.
    #[command(subcommand)]
    Test(TestCommand),
    /// Asymptotic power approximations.
    #[command(subcommand)]
    Power(PowerCommand),
    /// Sample size needed to reach a target power (simple null).
    Samplesize {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        beta: f64,
        /// Null parameter vector, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        theta0: Vec<f64>,
        /// Alternative parameter vector, comma separated.
        #[arg(long = "theta-star", value_delimiter = ',', allow_negative_numbers = true)]
        theta_star: Vec<f64>,
        #[arg(long)]
        alpha: f64,
        /// Target power in (0,1).
        #[arg(long)]
        power: f64,
        #[arg(long, value_enum, default_value = "formula")]
        method: SampleSizeArg,
        #[arg(long, value_enum, default_value = "at-alternative")]
        variance: VarianceArg,
    },
    /// Data-driven choice of the tuning parameter β.
    Tune {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        data: String,
        /// β grid as start:step:stop.
        #[arg(long, default_value = "0:0.01:1")]
        grid: String,
        #[arg(long = "pilot-beta", default_value_t = 0.5)]
        pilot_beta: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a Monte Carlo scenario from a JSON config file.
    Simulate {
        /// Scenario configuration (JSON).
        config: PathBuf,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Reproduce a named analysis over a β grid.
    Example {
        /// leukemia | telephone | darwin | aircond
        name: String,
        /// β grid as start:step:stop.
        #[arg(long = "beta-grid", default_value = "0:0.05:1")]
        beta_grid: String,
        /// Outlier indices to remove (comma separated, 0-based), or "none".
        #[arg(long)]
        outliers: Option<String>,
        /// External data file (required for aircond).
        #[arg(long)]
        data: Option<PathBuf>,
        /// Replace the first telephone observation by each value of this
        /// start:step:stop sweep and report p-value curves.
        #[arg(long = "sweep-first", allow_hyphen_values = true)]
        sweep_first: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TestCommand {
    /// Simple null H0: theta = theta0 (all components pinned).
    Simple {
        #[command(flatten)]
        common: FamilyData,
        /// Null parameter vector, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        theta0: Vec<f64>,
        /// Use the family's closed-form statistic where available.
        #[arg(long)]
        closed: bool,
    },
    /// Composite null pinning one component: `theta[component] = value`.
    Composite {
        #[command(flatten)]
        common: FamilyData,
        #[arg(long)]
        component: usize,
        #[arg(long, allow_negative_numbers = true)]
        value: f64,
        /// Use the family's closed-form statistic where available.
        #[arg(long)]
        closed: bool,
    },
    /// Signed one-sided test on one component.
    Signed {
        #[command(flatten)]
        common: FamilyData,
        #[arg(long)]
        component: usize,
        #[arg(long, allow_negative_numbers = true)]
        value: f64,
        #[arg(long, value_enum)]
        alternative: AlternativeArg,
        #[arg(long, value_enum, default_value = "t")]
        reference: ReferenceArg,
    },
}

#[derive(Subcommand)]
enum PowerCommand {
    /// Normal approximation at a fixed alternative.
    Approx {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        theta0: Vec<f64>,
        #[arg(long = "theta-star", value_delimiter = ',', allow_negative_numbers = true)]
        theta_star: Vec<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "at-alternative")]
        variance: VarianceArg,
        /// Composite instead of simple null: pin `theta[component] = value`.
        #[arg(long)]
        component: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        value: Option<f64>,
    },
    /// Noncentral chi-square power under a contiguous drift.
    Contiguous {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        theta0: Vec<f64>,
        /// Parameter-space drift d, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "delta", allow_negative_numbers = true)]
        d: Option<Vec<f64>>,
        /// Restriction-space shift δ (composite only), comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        delta: Option<Vec<f64>>,
        #[arg(long)]
        alpha: f64,
        /// Composite instead of simple null: pin `theta[component] = value`.
        #[arg(long)]
        component: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        value: Option<f64>,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Numeric(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput(_) | CoreError::Domain(_) | CoreError::Support { .. } => {
                CliError::Input(e.to_string())
            }
            other => CliError::Numeric(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!(
            "grid '{text}' must be start:step:stop"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("grid '{text}': '{p}' is not a number")))
        })
        .collect::<CliResult<_>>()?;
    let (start, step, stop) = (nums[0], nums[1], nums[2]);
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN-robust guard
    if !(step > 0.0) || stop < start {
        return Err(CliError::Input(format!(
            "grid '{text}' needs step > 0 and stop >= start"
        )));
    }
    let count = ((stop - start) / step).round() as i64;
    let count = count.max(0) as usize;
    if count > 100_000 {
        return Err(CliError::Input(format!("grid '{text}' too fine")));
    }
    let mut grid: Vec<f64> = (0..=count)
        .map(|i| start + step * i as f64)
        .filter(|v| *v <= stop + 1e-12 * step.max(1.0))
        .collect();
    if grid.is_empty() {
        grid.push(start);
    }
    Ok(grid)
}

fn load_sample(spec: &str) -> CliResult<(NamedDataset, Sample)> {
    let ds = load_dataset(spec)?;
    let sample = Sample::new(ds.values.clone())?;
    Ok((ds, sample))
}

fn fit_options(common: &FamilyData) -> FitOptions {
    FitOptions {
        init: common.init.clone().map(Theta::new),
        multistart: common.multistart,
        ..FitOptions::default()
    }
}

fn family_of(common: &FamilyData) -> CliResult<Box<dyn ModelFamily>> {
    Ok(create_family_with(
        common.family.name(),
        common.weibull_k.into(),
    )?)
}

fn check_component(family: &dyn ModelFamily, component: usize) -> CliResult<()> {
    if component >= family.dim() {
        return Err(CliError::Input(format!(
            "component {component} out of range for {} (dimension {})",
            family.name(),
            family.dim()
        )));
    }
    Ok(())
}

fn emit(value: &serde_json::Value) -> CliResult<()> {
    println!(
        "{}",
        serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?
    );
    Ok(())
}

fn write_csv(path: &PathBuf, content: &str) -> CliResult<()> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> CliResult<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| CliError::Numeric(e.to_string()))
}

fn run_fit(common: &FamilyData, csv: Option<&PathBuf>) -> CliResult<()> {
    let family = family_of(common)?;
    let (_, sample) = load_sample(&common.data)?;
    let fit = fit_mdpde(family.as_ref(), &sample, common.beta, &fit_options(common))?;
    if let Some(path) = csv {
        let mut text = String::from("beta,component,estimate,asymptotic_variance\n");
        for i in 0..fit.theta_hat.len() {
            text.push_str(&format!(
                "{},{},{},{}\n",
                fit.beta,
                i,
                fit.theta_hat[i],
                fit.sigma.get(i, i)
            ));
        }
        write_csv(path, &text)?;
    }
    emit(&to_json(&fit)?)
}

fn run_test(cmd: &TestCommand) -> CliResult<()> {
    let result = match cmd {
        TestCommand::Simple {
            common,
            theta0,
            closed,
        } => {
            let family = family_of(common)?;
            let (_, sample) = load_sample(&common.data)?;
            if *closed {
                match common.family {
                    FamilyArg::Exp => {
                        if theta0.len() != 1 {
                            return Err(CliError::Input("theta0 must be scalar".into()));
                        }
                        exp_simple_wald(&sample, common.beta, theta0[0], &fit_options(common))?
                    }
                    _ => {
                        return Err(CliError::Input(
                            "closed-form simple test exists only for the exponential family"
                                .into(),
                        ))
                    }
                }
            } else {
                let fit = fit_mdpde(family.as_ref(), &sample, common.beta, &fit_options(common))?;
                simple_wald(family.as_ref(), &fit, &Theta::new(theta0.clone()))?
            }
        }
        TestCommand::Composite {
            common,
            component,
            value,
            closed,
        } => {
            let family = family_of(common)?;
            check_component(family.as_ref(), *component)?;
            let (_, sample) = load_sample(&common.data)?;
            if *closed {
                match (common.family, component) {
                    (FamilyArg::Normal, 0) => {
                        normal_mean_wald(&sample, common.beta, *value, &fit_options(common))?
                    }
                    (FamilyArg::Weibull, 0) => {
                        weibull_scale_wald(&sample, common.beta, *value, &fit_options(common))?
                    }
                    _ => {
                        return Err(CliError::Input(
                            "closed forms: normal component 0 (mean), weibull component 0 (scale)"
                                .into(),
                        ))
                    }
                }
            } else {
                let fit = fit_mdpde(family.as_ref(), &sample, common.beta, &fit_options(common))?;
                let restriction = Restriction::component(family.dim(), *component, *value);
                composite_wald(family.as_ref(), &fit, &restriction)?
            }
        }
        TestCommand::Signed {
            common,
            component,
            value,
            alternative,
            reference,
        } => {
            let family = family_of(common)?;
            check_component(family.as_ref(), *component)?;
            let (_, sample) = load_sample(&common.data)?;
            let fit = fit_mdpde(family.as_ref(), &sample, common.beta, &fit_options(common))?;
            let alt = match alternative {
                AlternativeArg::Greater => Alternative::Greater,
                AlternativeArg::Less => Alternative::Less,
            };
            let reference = match reference {
                ReferenceArg::T => TailReference::StudentT,
                ReferenceArg::Normal => TailReference::Normal,
            };
            signed_wald(&fit, *component, *value, alt, reference)?
        }
    };
    emit(&to_json(&result)?)
}

fn run_power(cmd: &PowerCommand) -> CliResult<()> {
    match cmd {
        PowerCommand::Approx {
            family,
            beta,
            theta0,
            theta_star,
            n,
            alpha,
            variance,
            component,
            value,
        } => {
            let fam = create_family_with(family.name(), KMatrixConvention::default())?;
            let result = match (component, value) {
                (Some(c), Some(v)) => {
                    check_component(fam.as_ref(), *c)?;
                    let restriction = Restriction::component(fam.dim(), *c, *v);
                    composite_power_approx(
                        fam.as_ref(),
                        &restriction,
                        &Theta::new(theta_star.clone()),
                        *beta,
                        *n,
                        *alpha,
                    )?
                }
                (None, None) => approx_power_simple(
                    fam.as_ref(),
                    &Theta::new(theta0.clone()),
                    &Theta::new(theta_star.clone()),
                    *beta,
                    *n,
                    *alpha,
                    (*variance).into(),
                )?,
                _ => {
                    return Err(CliError::Input(
                        "--component and --value must be given together".into(),
                    ))
                }
            };
            emit(&to_json(&result)?)
        }
        PowerCommand::Contiguous {
            family,
            beta,
            theta0,
            d,
            delta,
            alpha,
            component,
            value,
        } => {
            let fam = create_family_with(family.name(), KMatrixConvention::default())?;
            let theta0 = Theta::new(theta0.clone());
            let result = match (component, value) {
                (Some(c), Some(v)) => {
                    check_component(fam.as_ref(), *c)?;
                    let restriction = Restriction::component(fam.dim(), *c, *v);
                    let shift = match (d, delta) {
                        (Some(d), None) => ContiguousShift::ParameterDirection(d.clone()),
                        (None, Some(delta)) => ContiguousShift::RestrictionShift(delta.clone()),
                        _ => {
                            return Err(CliError::Input(
                                "give exactly one of --d and --delta".into(),
                            ))
                        }
                    };
                    contiguous_power_composite(
                        fam.as_ref(),
                        &restriction,
                        &theta0,
                        &shift,
                        *beta,
                        *alpha,
                    )?
                }
                (None, None) => {
                    let d = d.as_ref().ok_or_else(|| {
                        CliError::Input("simple contiguous power needs --d".into())
                    })?;
                    contiguous_power_simple(fam.as_ref(), &theta0, d, *beta, *alpha)?
                }
                _ => {
                    return Err(CliError::Input(
                        "--component and --value must be given together".into(),
                    ))
                }
            };
            emit(&to_json(&result)?)
        }
    }
}

fn tuning_csv(result: &TuningResult) -> String {
    let mut text = String::from("beta,mse\n");
    for (b, m) in result.grid.iter().zip(&result.mse_curve) {
        match m {
            Some(v) => text.push_str(&format!("{b},{v}\n")),
            None => text.push_str(&format!("{b},\n")),
        }
    }
    text
}

fn example_csv(run: &AnalysisRun) -> String {
    let mut text = String::from("variant,beta,theta1,theta2,p_two_sided,p_one_sided\n");
    for (variant, points) in [("full", &run.full), ("filtered", &run.filtered)] {
        for p in points.iter() {
            let t1 = p
                .theta_hat
                .as_ref()
                .and_then(|t| t.first())
                .map(|v| v.to_string())
                .unwrap_or_default();
            let t2 = p
                .theta_hat
                .as_ref()
                .and_then(|t| t.get(1))
                .map(|v| v.to_string())
                .unwrap_or_default();
            let p2 = p.p_two_sided.map(|v| v.to_string()).unwrap_or_default();
            let p1 = p.p_one_sided.map(|v| v.to_string()).unwrap_or_default();
            text.push_str(&format!("{variant},{},{t1},{t2},{p2},{p1}\n", p.beta));
        }
    }
    text
}

fn run_command(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Fit { common, csv } => run_fit(&common, csv.as_ref()),
        Command::Test(cmd) => run_test(&cmd),
        Command::Power(cmd) => run_power(&cmd),
        Command::Samplesize {
            family,
            beta,
            theta0,
            theta_star,
            alpha,
            power,
            method,
            variance,
        } => {
            let fam = create_family_with(family.name(), KMatrixConvention::default())?;
            let method_enum = match method {
                SampleSizeArg::Formula => SampleSizeMethod::ClosedForm,
                SampleSizeArg::Invert => SampleSizeMethod::InvertPower,
            };
            let t0 = Theta::new(theta0);
            let ts = Theta::new(theta_star);
            let n = required_sample_size(
                fam.as_ref(),
                &t0,
                &ts,
                beta,
                alpha,
                power,
                method_enum,
                variance.into(),
            )?;
            let at_n =
                approx_power_simple(fam.as_ref(), &t0, &ts, beta, n, alpha, variance.into())?;
            emit(&json!({
                "n": n,
                "target_power": power,
                "approx_power_at_n": at_n.power,
                "method": match method {
                    SampleSizeArg::Formula => "formula",
                    SampleSizeArg::Invert => "invert",
                },
                "variance": match variance {
                    VarianceArg::AtAlternative => "at-alternative",
                    VarianceArg::Delta => "delta",
                },
            }))
        }
        Command::Tune {
            family,
            data,
            grid,
            pilot_beta,
            csv,
        } => {
            let fam = create_family_with(family.name(), KMatrixConvention::default())?;
            let (_, sample) = load_sample(&data)?;
            let grid = parse_grid(&grid)?;
            let options = FitOptions {
                multistart: true,
                ..FitOptions::default()
            };
            let result = select_beta(fam.as_ref(), &sample, Some(&grid), pilot_beta, &options)?;
            if let Some(path) = csv {
                write_csv(&path, &tuning_csv(&result))?;
            }
            emit(&to_json(&result)?)
        }
        Command::Simulate { config, seed, csv } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", config.display())))?;
            let mut scenario: McScenario = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", config.display())))?;
            if let Some(seed) = seed {
                scenario.seed = seed;
            }
            let report = run_scenario(&scenario)?;
            if let Some(path) = csv {
                write_csv(&path, &report.to_csv())?;
            }
            emit(&to_json(&report)?)
        }
        Command::Example {
            name,
            beta_grid,
            outliers,
            data,
            sweep_first,
            csv,
        } => {
            if let Some(sweep) = sweep_first {
                if name != "telephone" {
                    return Err(CliError::Input(
                        "--sweep-first applies to the telephone example only".into(),
                    ));
                }
                let values = parse_grid(&sweep)?;
                let rows = telephone_sweep(&values)?;
                if let Some(path) = csv {
                    let mut text = String::from("first_value,p_beta0,p_beta015\n");
                    for r in &rows {
                        text.push_str(&format!(
                            "{},{},{}\n",
                            r.first_value,
                            r.p_beta0.map(|v| v.to_string()).unwrap_or_default(),
                            r.p_beta015.map(|v| v.to_string()).unwrap_or_default()
                        ));
                    }
                    write_csv(&path, &text)?;
                }
                return emit(&json!({ "sweep": to_json(&rows)? }));
            }
            let grid = parse_grid(&beta_grid)?;
            let outlier_list: Option<Vec<usize>> = match outliers.as_deref() {
                None => None,
                Some("none") => Some(vec![]),
                Some(text) => Some(
                    text.split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<usize>()
                                .map_err(|_| CliError::Input(format!("bad outlier index '{t}'")))
                        })
                        .collect::<CliResult<_>>()?,
                ),
            };
            let external = match data {
                Some(path) => Some(load_dataset(
                    path.to_str()
                        .ok_or_else(|| CliError::Input("non-UTF8 path".into()))?,
                )?),
                None => None,
            };
            let run = run_example(&name, &grid, outlier_list.as_deref(), external.as_ref())?;
            if let Some(path) = csv {
                write_csv(&path, &example_csv(&run))?;
            }
            emit(&to_json(&run)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run_command(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(3)
        }
    }
}
