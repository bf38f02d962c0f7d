//! Embedded benchmark datasets, external data ingestion, and the canned
//! analyses over a β grid (full data vs. outlier-filtered data).

use crate::error::{Error, Result};
use crate::estimate::{fit_mdpde, FitOptions, MdpdeFit};
use crate::families::{Exponential, Normal, Weibull};
use crate::model::{ModelFamily, Sample, Theta};
use crate::wald::{
    composite_wald, one_sample_t_test, signed_wald, simple_wald, Alternative, Restriction,
    TailReference, WaldTestResult,
};
use serde::Serialize;
use std::path::Path;

/// White blood cell counts (hundreds) for acute myelogenous leukemia
/// patients; two observations of 1000 are gross outliers under an
/// exponential model.
pub const LEUKEMIA: [f64; 16] = [
    23.0, 7.5, 43.0, 26.0, 60.0, 105.0, 100.0, 170.0, 54.0, 70.0, 94.0, 320.0, 350.0, 1000.0,
    520.0, 1000.0,
];

/// Ordered differences of inverse fault rates between matched telephone
/// line pairs; the first observation is a gross outlier under a normal
/// model.
pub const TELEPHONE: [f64; 14] = [
    -988.0, -135.0, -78.0, 3.0, 59.0, 83.0, 93.0, 110.0, 189.0, 197.0, 204.0, 229.0, 289.0, 310.0,
];

/// Paired height differences (cross-fertilized minus self-fertilized) of
/// Zea mays plants; the two negative values sit apart from the rest.
pub const DARWIN: [f64; 15] = [
    -67.0, -48.0, 6.0, 8.0, 14.0, 16.0, 23.0, 24.0, 28.0, 29.0, 41.0, 49.0, 56.0, 60.0, 75.0,
];

#[derive(Debug, Clone, Serialize)]
pub struct NamedDataset {
    pub name: String,
    pub values: Vec<f64>,
    pub source: String,
    pub unit_note: String,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

fn table_hash(values: &[f64]) -> u64 {
    let text: String = values
        .iter()
        .map(|v| format!("{v:.6};"))
        .collect();
    fnv1a(text.as_bytes())
}

/// Self-test: the embedded tables must match their frozen count, sum and
/// content hash exactly. Any drift is a build defect.
pub fn verify_builtin_integrity() -> Result<()> {
    let checks: [(&str, &[f64], usize, f64, u64); 3] = [
        ("leukemia", &LEUKEMIA, 16, 3942.5, 0x2278_2773_89ee_efb9),
        ("telephone", &TELEPHONE, 14, 565.0, 0xb90c_d5b8_e474_eae8),
        ("darwin", &DARWIN, 15, 314.0, 0x4d5c_64ee_5c7d_6726),
    ];
    for (name, values, count, sum, hash) in checks {
        if values.len() != count {
            return Err(Error::InvalidInput(format!("{name}: wrong length")));
        }
        let total: f64 = values.iter().sum();
        if (total - sum).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "{name}: checksum mismatch (sum {total}, expected {sum})"
            )));
        }
        let h = table_hash(values);
        if h != hash {
            return Err(Error::InvalidInput(format!(
                "{name}: content hash {h:#018x} differs from frozen value"
            )));
        }
    }
    Ok(())
}

/// Parse a whitespace/comma separated data file; `#` starts a comment.
pub fn parse_data_file(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: f64 = tok.parse().map_err(|_| {
                Error::InvalidInput(format!(
                    "{}:{}: cannot parse '{tok}' as a number",
                    path.display(),
                    line_no + 1
                ))
            })?;
            values.push(v);
        }
    }
    if values.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{}: no numeric values found",
            path.display()
        )));
    }
    Ok(values)
}

/// Load a built-in dataset by name, or parse a file path.
pub fn load_dataset(spec: &str) -> Result<NamedDataset> {
    verify_builtin_integrity()?;
    match spec.trim().to_ascii_lowercase().as_str() {
        "leukemia" => Ok(NamedDataset {
            name: "leukemia".into(),
            values: LEUKEMIA.to_vec(),
            source: "white blood cell counts, acute myelogenous leukemia patients".into(),
            unit_note: "hundreds of cells".into(),
        }),
        "telephone" => Ok(NamedDataset {
            name: "telephone".into(),
            values: TELEPHONE.to_vec(),
            source: "matched-pair differences of inverse telephone line fault rates".into(),
            unit_note: "difference of inverse rates".into(),
        }),
        "darwin" => Ok(NamedDataset {
            name: "darwin".into(),
            values: DARWIN.to_vec(),
            source: "Darwin's Zea mays paired fertilization heights".into(),
            unit_note: "eighths of an inch".into(),
        }),
        _ => {
            let path = Path::new(spec);
            if path.exists() {
                Ok(NamedDataset {
                    name: path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| "file".into()),
                    values: parse_data_file(path)?,
                    source: path.display().to_string(),
                    unit_note: String::new(),
                })
            } else {
                Err(Error::InvalidInput(format!(
                    "unknown dataset '{spec}' (built-ins: leukemia, telephone, darwin; otherwise a file path)"
                )))
            }
        }
    }
}

/// Per-β outcome of an example analysis.
#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub beta: f64,
    /// None when the fit failed at this grid point (run continues).
    pub theta_hat: Option<Vec<f64>>,
    pub p_two_sided: Option<f64>,
    /// Signed one-sided p (greater alternative), where the analysis has one.
    pub p_one_sided: Option<f64>,
}

/// Classical (maximum-likelihood era) baselines for the normal-model
/// analyses: one-sample Student t tests.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalTests {
    pub two_sided_full: f64,
    pub two_sided_filtered: f64,
    pub one_sided_full: f64,
    pub one_sided_filtered: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisRun {
    pub name: String,
    pub family: String,
    pub null_description: String,
    pub beta_grid: Vec<f64>,
    pub outlier_indices: Vec<usize>,
    pub full: Vec<CurvePoint>,
    pub filtered: Vec<CurvePoint>,
    pub classical: Option<ClassicalTests>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ExampleKind {
    LeukemiaExpMean,
    NormalMean,
    WeibullShape,
}

struct ExampleConfig {
    kind: ExampleKind,
    family: Box<dyn ModelFamily>,
    null_value: f64,
    component: usize,
    default_outliers: Vec<usize>,
    null_description: String,
}

fn example_config(name: &str, data: &NamedDataset) -> Result<ExampleConfig> {
    match name {
        "leukemia" => Ok(ExampleConfig {
            kind: ExampleKind::LeukemiaExpMean,
            family: Box::new(Exponential),
            null_value: 140.0,
            component: 0,
            default_outliers: data
                .values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v == 1000.0)
                .map(|(i, _)| i)
                .collect(),
            null_description: "theta = 140".into(),
        }),
        "telephone" => Ok(ExampleConfig {
            kind: ExampleKind::NormalMean,
            family: Box::new(Normal),
            null_value: 0.0,
            component: 0,
            default_outliers: vec![0],
            null_description: "mu = 0".into(),
        }),
        "darwin" => Ok(ExampleConfig {
            kind: ExampleKind::NormalMean,
            family: Box::new(Normal),
            null_value: 0.0,
            component: 0,
            default_outliers: vec![0, 1],
            null_description: "mu = 0".into(),
        }),
        "aircond" | "air-conditioning" | "aircraft" => Ok(ExampleConfig {
            kind: ExampleKind::WeibullShape,
            family: Box::new(Weibull::default()),
            null_value: 0.85,
            component: 1,
            default_outliers: data
                .values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v > 400.0)
                .map(|(i, _)| i)
                .collect(),
            null_description: "p = 0.85".into(),
        }),
        other => Err(Error::InvalidInput(format!(
            "unknown example '{other}' (leukemia, telephone, darwin, aircond)"
        ))),
    }
}

fn curve_over_grid(
    config: &ExampleConfig,
    sample: &Sample,
    beta_grid: &[f64],
) -> Result<Vec<CurvePoint>> {
    let family = config.family.as_ref();
    let mut points = Vec::with_capacity(beta_grid.len());
    let mut warm: Option<Theta> = None;
    for &beta in beta_grid {
        let options = FitOptions {
            init: warm.clone(),
            multistart: true,
            ..FitOptions::default()
        };
        let fit: Option<MdpdeFit> = match fit_mdpde(family, sample, beta, &options) {
            Ok(f) => Some(f),
            Err(e) => {
                log::warn!("example fit failed at beta={beta}: {e}");
                None
            }
        };
        let point = match fit {
            None => CurvePoint {
                beta,
                theta_hat: None,
                p_two_sided: None,
                p_one_sided: None,
            },
            Some(fit) => {
                warm = Some(fit.theta_hat.clone());
                let two_sided: Result<WaldTestResult> = match config.kind {
                    ExampleKind::LeukemiaExpMean => {
                        simple_wald(family, &fit, &Theta::new(vec![config.null_value]))
                    }
                    ExampleKind::NormalMean | ExampleKind::WeibullShape => {
                        let restriction = Restriction::component(
                            family.dim(),
                            config.component,
                            config.null_value,
                        );
                        composite_wald(family, &fit, &restriction)
                    }
                };
                let one_sided = match config.kind {
                    ExampleKind::NormalMean => signed_wald(
                        &fit,
                        config.component,
                        config.null_value,
                        Alternative::Greater,
                        TailReference::StudentT,
                    )
                    .ok()
                    .map(|r| r.p_value),
                    _ => None,
                };
                CurvePoint {
                    beta,
                    theta_hat: Some(fit.theta_hat.0.clone()),
                    p_two_sided: two_sided.ok().map(|r| r.p_value),
                    p_one_sided: one_sided,
                }
            }
        };
        points.push(point);
    }
    Ok(points)
}

/// Run a named analysis over a β grid for the full data and the
/// outlier-filtered data. Outliers are an explicit index list; `None`
/// selects the example's conventional set.
pub fn run_example(
    name: &str,
    beta_grid: &[f64],
    outlier_filter: Option<&[usize]>,
    data_override: Option<&NamedDataset>,
) -> Result<AnalysisRun> {
    if beta_grid.is_empty() {
        return Err(Error::InvalidInput("empty beta grid".into()));
    }
    let dataset = match data_override {
        Some(d) => d.clone(),
        None => {
            if matches!(name, "aircond" | "air-conditioning" | "aircraft") {
                return Err(Error::InvalidInput(
                    "the air-conditioning analysis needs an external data file".into(),
                ));
            }
            load_dataset(name)?
        }
    };
    let config = example_config(name, &dataset)?;
    let outliers: Vec<usize> = match outlier_filter {
        Some(list) => list.to_vec(),
        None => config.default_outliers.clone(),
    };
    for &i in &outliers {
        if i >= dataset.values.len() {
            return Err(Error::InvalidInput(format!(
                "outlier index {i} out of range (n = {})",
                dataset.values.len()
            )));
        }
    }
    let full_sample = Sample::new(dataset.values.clone())?;
    let filtered_values: Vec<f64> = dataset
        .values
        .iter()
        .enumerate()
        .filter(|(i, _)| !outliers.contains(i))
        .map(|(_, v)| *v)
        .collect();
    if filtered_values.is_empty() {
        return Err(Error::InvalidInput("outlier filter removes everything".into()));
    }
    let filtered_sample = Sample::new(filtered_values)?;

    let full = curve_over_grid(&config, &full_sample, beta_grid)?;
    let filtered = if outliers.is_empty() {
        full.clone()
    } else {
        curve_over_grid(&config, &filtered_sample, beta_grid)?
    };

    let classical = match config.kind {
        ExampleKind::NormalMean => Some(ClassicalTests {
            two_sided_full: one_sample_t_test(&full_sample, config.null_value, Alternative::TwoSided)?
                .p_value,
            two_sided_filtered: one_sample_t_test(
                &filtered_sample,
                config.null_value,
                Alternative::TwoSided,
            )?
            .p_value,
            one_sided_full: one_sample_t_test(&full_sample, config.null_value, Alternative::Greater)?
                .p_value,
            one_sided_filtered: one_sample_t_test(
                &filtered_sample,
                config.null_value,
                Alternative::Greater,
            )?
            .p_value,
        }),
        _ => None,
    };

    Ok(AnalysisRun {
        name: name.to_string(),
        family: config.family.name().to_string(),
        null_description: config.null_description,
        beta_grid: beta_grid.to_vec(),
        outlier_indices: outliers,
        full,
        filtered,
        classical,
    })
}

/// Sensitivity sweep: vary the first telephone observation over a range of
/// replacement values and track the two-sided p-values at β = 0 and
/// β = 0.15.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub first_value: f64,
    pub p_beta0: Option<f64>,
    pub p_beta015: Option<f64>,
}

pub fn telephone_sweep(first_values: &[f64]) -> Result<Vec<SweepPoint>> {
    verify_builtin_integrity()?;
    let mut out = Vec::with_capacity(first_values.len());
    let restriction = Restriction::component(2, 0, 0.0);
    for &v in first_values {
        let mut data = TELEPHONE.to_vec();
        data[0] = v;
        let sample = Sample::new(data)?;
        let options = FitOptions {
            multistart: true,
            ..FitOptions::default()
        };
        let p_at = |beta: f64| -> Option<f64> {
            let fit = fit_mdpde(&Normal, &sample, beta, &options).ok()?;
            composite_wald(&Normal, &fit, &restriction)
                .ok()
                .map(|r| r.p_value)
        };
        out.push(SweepPoint {
            first_value: v,
            p_beta0: p_at(0.0),
            p_beta015: p_at(0.15),
        });
    }
    Ok(out)
}
