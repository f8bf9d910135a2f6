//! Flag/file/default three-layer configuration: command-line flags override
//! config-file values, which override built-in defaults. The config file is a
//! flat key-value JSON document (unknown keys rejected), located via --config
//! or the SQUEEZELAB_CONFIG environment variable.

use clap::{Args, ValueEnum};
use serde::Deserialize;
use squeezelab::{DeformationParams, Family};
use std::path::PathBuf;
use std::str::FromStr;

/// Process exit contract: 0 success, 1 validation/runtime failure,
/// 2 invalid configuration or parameters.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult<T> = Result<T, CliError>;

impl From<squeezelab::Error> for CliError {
    fn from(e: squeezelab::Error) -> Self {
        use squeezelab::Error as E;
        match e {
            // Bad inputs: parameter/domain problems the caller can fix.
            E::NonFiniteParameter { .. }
            | E::ConstraintViolated { .. }
            | E::LambdaOutOfRange { .. }
            | E::Inadmissible(_)
            | E::LevelTooLarge { .. }
            | E::BadQuadratureSpec(_) => CliError::config(e.to_string()),
            // Internal numerical failures.
            E::SingularSecondOrder | E::NotNormalized { .. } | E::NoClosedForm { .. } => {
                CliError::runtime(e.to_string())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Plotdata,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Default, Clone)]
pub struct SharedArgs {
    /// Named family preset: harmonic | shifted_creation | family_I |
    /// family_II | family_III (case-insensitive)
    #[arg(long)]
    pub family: Option<String>,

    /// Raw deformation coefficient (alternative to --family; give all six)
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c4: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c5: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c6: Option<f64>,

    /// Deformation strength λ (single value)
    #[arg(long, allow_negative_numbers = true, conflicts_with = "lambda_range")]
    pub lambda: Option<f64>,

    /// λ sweep START:STOP:STEP, endpoints included within half a step
    #[arg(long = "lambda-range", value_name = "START:STOP:STEP", allow_hyphen_values = true)]
    pub lambda_range: Option<String>,

    /// Level n (single value)
    #[arg(long, conflicts_with = "n_range")]
    pub n: Option<u32>,

    /// Level sweep START:STOP, both ends included
    #[arg(long = "n-range", value_name = "START:STOP")]
    pub n_range: Option<String>,

    /// Tolerance override (analyze: residual verdicts; validate: diagnostic
    /// re-judging of every check)
    #[arg(long)]
    pub tol: Option<f64>,

    /// Gauss–Hermite node count override for moment quadrature
    #[arg(long)]
    pub nodes: Option<usize>,

    /// RNG seed for randomized validation
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output file (csv/json) or directory (plotdata); stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

/// Flat config-file schema; every key optional, unknown keys rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub family: Option<String>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub c3: Option<f64>,
    pub c4: Option<f64>,
    pub c5: Option<f64>,
    pub c6: Option<f64>,
    pub lambda: Option<f64>,
    pub lambda_range: Option<String>,
    pub n: Option<u32>,
    pub n_range: Option<String>,
    pub tol: Option<f64>,
    pub nodes: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub samples: Option<usize>,
    pub preset: Option<String>,
}

pub fn load_file_config(path: Option<&PathBuf>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
}

/// λ sweep with inclusive endpoints: start, start+step, …, up to stop within
/// half a step of slack so boundary values like λ = 2n+1 are hit exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl LambdaRange {
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let value = self.start + self.step * k as f64;
            if value > self.stop + 0.5 * self.step {
                break;
            }
            out.push(value);
            k += 1;
        }
        out
    }
}

impl FromStr for LambdaRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected START:STOP:STEP, got {s:?}"));
        }
        let parse = |label: &str, text: &str| -> Result<f64, String> {
            text.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad {label} in λ-range {s:?}: {e}"))
        };
        let range = LambdaRange {
            start: parse("start", parts[0])?,
            stop: parse("stop", parts[1])?,
            step: parse("step", parts[2])?,
        };
        if !range.start.is_finite() || !range.stop.is_finite() || !range.step.is_finite() {
            return Err(format!("non-finite bound in λ-range {s:?}"));
        }
        if range.step <= 0.0 {
            return Err(format!("step must be > 0 in λ-range {s:?}"));
        }
        if range.stop < range.start {
            return Err(format!("stop < start in λ-range {s:?}"));
        }
        Ok(range)
    }
}

/// Inclusive level sweep START:STOP.
pub fn parse_n_range(s: &str) -> Result<Vec<u32>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("expected START:STOP, got {s:?}"));
    }
    let start: u32 =
        parts[0].trim().parse().map_err(|e| format!("bad start in n-range {s:?}: {e}"))?;
    let stop: u32 =
        parts[1].trim().parse().map_err(|e| format!("bad stop in n-range {s:?}: {e}"))?;
    if stop < start {
        return Err(format!("stop < start in n-range {s:?}"));
    }
    Ok((start..=stop).collect())
}

/// Fully merged settings for one invocation.
#[derive(Debug, Clone)]
pub struct Settings {
    pub family: Option<Family>,
    pub raw_params: Option<DeformationParams>,
    pub lambda: Option<f64>,
    pub lambda_range: Option<LambdaRange>,
    pub ns: Vec<u32>,
    pub tol: Option<f64>,
    pub nodes: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub samples: usize,
    pub preset: Option<Family>,
}

fn parse_family(label: &str, s: &str) -> CliResult<Family> {
    Family::from_str(s).map_err(|e| CliError::config(format!("invalid {label} {s:?}: {e}")))
}

/// Applies the precedence flags > file > defaults and parses compound values.
pub fn resolve(
    shared: &SharedArgs,
    file: &FileConfig,
    samples_flag: Option<usize>,
    preset_flag: Option<&String>,
) -> CliResult<Settings> {
    let family = match shared.family.as_ref().or(file.family.as_ref()) {
        Some(name) => Some(parse_family("--family", name)?),
        None => None,
    };

    let c = [
        shared.c1.or(file.c1),
        shared.c2.or(file.c2),
        shared.c3.or(file.c3),
        shared.c4.or(file.c4),
        shared.c5.or(file.c5),
        shared.c6.or(file.c6),
    ];
    let raw_params = if c.iter().all(Option::is_some) {
        let v: Vec<f64> = c.iter().map(|x| x.unwrap()).collect();
        Some(
            DeformationParams::new(v[0], v[1], v[2], v[3], v[4], v[5])
                .map_err(|e| CliError::config(e.to_string()))?,
        )
    } else if c.iter().any(Option::is_some) {
        let given = c.iter().filter(|x| x.is_some()).count();
        return Err(CliError::config(format!(
            "raw coefficients need all of --c1..--c6 (got {given} of 6)"
        )));
    } else {
        None
    };
    if family.is_some() && raw_params.is_some() {
        return Err(CliError::config(
            "--family and raw --c1..--c6 coefficients are mutually exclusive",
        ));
    }

    // A single-value flag overrides a range key from the file and vice
    // versa; only the file may not set both members of a pair at once.
    // (clap already rejects both flags on one command line.)
    let (lambda, lambda_range_text) = if shared.lambda.is_some() || shared.lambda_range.is_some() {
        (shared.lambda, shared.lambda_range.clone())
    } else {
        if file.lambda.is_some() && file.lambda_range.is_some() {
            return Err(CliError::config("config sets both lambda and lambda_range"));
        }
        (file.lambda, file.lambda_range.clone())
    };
    let lambda_range = match lambda_range_text {
        Some(text) => Some(LambdaRange::from_str(&text).map_err(CliError::config)?),
        None => None,
    };

    let (n_single, n_range_text) = if shared.n.is_some() || shared.n_range.is_some() {
        (shared.n, shared.n_range.clone())
    } else {
        if file.n.is_some() && file.n_range.is_some() {
            return Err(CliError::config("config sets both n and n_range"));
        }
        (file.n, file.n_range.clone())
    };
    let n_range = match n_range_text {
        Some(text) => Some(parse_n_range(&text).map_err(CliError::config)?),
        None => None,
    };
    let ns = n_range.unwrap_or_else(|| vec![n_single.unwrap_or(0)]);

    let tol = shared.tol.or(file.tol);
    if let Some(t) = tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::config(format!("--tol must be finite and > 0, got {t}")));
        }
    }
    let nodes = shared.nodes.or(file.nodes);
    if let Some(k) = nodes {
        if k == 0 {
            return Err(CliError::config("--nodes must be at least 1"));
        }
    }

    let format = match shared.format {
        Some(f) => Some(f),
        None => match file.format.as_deref() {
            Some(text) => Some(
                <OutputFormat as ValueEnum>::from_str(text, true)
                    .map_err(|e| CliError::config(format!("invalid format {text:?}: {e}")))?,
            ),
            None => None,
        },
    };

    let preset = match preset_flag.or(file.preset.as_ref()) {
        Some(name) => Some(parse_family("--preset", name)?),
        None => None,
    };

    Ok(Settings {
        family,
        raw_params,
        lambda,
        lambda_range,
        ns,
        tol,
        nodes,
        seed: shared.seed.or(file.seed).unwrap_or(42),
        out: shared.out.clone().or_else(|| file.out.clone()),
        format,
        samples: samples_flag.or(file.samples).unwrap_or(100),
        preset,
    })
}
