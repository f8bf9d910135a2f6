//! Command-line front end for the squeezelab library: analyze single
//! Hamiltonians, sweep squeezing diagnostics over parameter grids, run the
//! self-check battery, and browse the named deformation families.
//!
//! Exit codes: 0 success, 1 validation/runtime failure, 2 invalid
//! configuration or parameters (clap usage errors also exit 2).

mod analyze;
mod config;
mod emit;
mod presets;
mod scan;
mod validate;

use clap::{Args, Parser, Subcommand};
use config::{load_file_config, resolve, CliError, CliResult, OutputFormat, Settings, SharedArgs};
use squeezelab::eigensystem::{solve_family, SAMPLE_POINTS};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "squeezelab",
    version,
    about = "Squeezing and coherence diagnostics for deformed oscillator Hamiltonians",
    long_about = "Builds Hamiltonians from affine deformations of the harmonic ladder pair,\n\
                  solves them in closed form, and reports position/momentum squeezing,\n\
                  coherence, and validation diagnostics.\n\n\
                  Every flag can also be set in a flat JSON config file given via --config\n\
                  or the SQUEEZELAB_CONFIG environment variable; command-line flags win."
)]
struct Cli {
    /// Flat JSON config file (flags > file > defaults)
    #[arg(long, global = true, env = "SQUEEZELAB_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    shared: SharedArgs,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    shared: SharedArgs,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    shared: SharedArgs,

    /// Number of randomized parameter draws for the property suite
    #[arg(long)]
    samples: Option<usize>,

    /// Restrict the deterministic battery to one named family
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct PresetArgs {
    #[command(flatten)]
    shared: SharedArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients, energies, moments, and residuals for one Hamiltonian
    Analyze(AnalyzeArgs),
    /// Squeezing diagnostics over a (λ, n) grid
    Scan(ScanArgs),
    /// Randomized property suite plus preset residual/Gram battery
    Validate(ValidateArgs),
    /// List the named families or evaluate one at a chosen λ
    Presets(PresetArgs),
}

fn settings_for(
    shared: &SharedArgs,
    config_path: Option<&PathBuf>,
    samples: Option<usize>,
    preset: Option<&String>,
) -> CliResult<Settings> {
    let file = load_file_config(config_path)?;
    resolve(shared, &file, samples, preset)
}

fn run_scan(settings: &Settings) -> CliResult<()> {
    let family = settings.family.ok_or_else(|| {
        CliError::config("scan needs --family (a named one-parameter family to sweep)")
    })?;
    let lambdas: Vec<f64> = match (settings.lambda_range, settings.lambda) {
        (Some(range), _) => range.values(),
        (None, Some(single)) => vec![single],
        (None, None) => vec![family.reference_lambda()],
    };
    let rows = scan::scan_rows(family, &lambdas, &settings.ns, settings.nodes)?;
    let regions = scan::squeeze_regions(&rows);

    match settings.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => {
            let mut content = String::new();
            content.push_str(
                "family,lambda,n,var_x,var_p,product,squeezed_x,squeezed_p,coherent,threshold_prediction,agreement\n",
            );
            for row in &rows {
                let float_cell = |v: Option<f64>| v.map(emit::format_float).unwrap_or_default();
                let text_cell = |v: &Option<String>| v.clone().unwrap_or_default();
                let bool_cell = |v: Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
                let cells = vec![
                    row.family.clone(),
                    emit::format_float(row.lambda),
                    row.n.to_string(),
                    float_cell(row.var_x),
                    float_cell(row.var_p),
                    float_cell(row.product),
                    text_cell(&row.squeezed_x),
                    text_cell(&row.squeezed_p),
                    bool_cell(row.coherent),
                    text_cell(&row.threshold_prediction),
                    bool_cell(row.agreement),
                ];
                content.push_str(&emit::csv_line(&cells));
                content.push('\n');
            }
            emit::write_text(settings.out.as_ref(), &content)?;
            // Keep stdout machine-clean when the table itself goes there.
            if settings.out.is_some() {
                print!("{}", scan::summary_text(family, &rows, &regions));
            } else {
                eprint!("{}", scan::summary_text(family, &rows, &regions));
            }
            Ok(())
        }
        OutputFormat::Json => {
            let output = scan::ScanOutput { rows, regions };
            emit::write_text(settings.out.as_ref(), &emit::to_json_pretty(&output)?)
        }
        OutputFormat::Plotdata => {
            let dir = settings.out.clone().ok_or_else(|| {
                CliError::config("plotdata format needs --out pointing at a directory")
            })?;
            let mut written = 0usize;
            for row in rows.iter().filter(|r| !r.is_skipped()) {
                let solution = solve_family(family, row.lambda, row.n)?;
                let xs = solution.state.waveform.sample_grid(SAMPLE_POINTS);
                let values: Vec<f64> =
                    xs.iter().map(|&x| solution.state.waveform.eval(x)).collect();
                let name = emit::plotdata_file_name(&row.family, row.lambda, row.n);
                emit::write_plotdata(&dir, &name, &xs, &values)?;
                written += 1;
            }
            println!("wrote {written} waveform files to {}", dir.display());
            eprint!("{}", scan::summary_text(family, &rows, &regions));
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Analyze(args) => {
            let settings = settings_for(&args.shared, cli.config.as_ref(), None, None)?;
            analyze::run(&settings)
        }
        Command::Scan(args) => {
            let settings = settings_for(&args.shared, cli.config.as_ref(), None, None)?;
            run_scan(&settings)
        }
        Command::Validate(args) => {
            let settings =
                settings_for(&args.shared, cli.config.as_ref(), args.samples, args.preset.as_ref())?;
            let passed = validate::run(&settings)?;
            if passed {
                Ok(())
            } else {
                Err(CliError::runtime("validation checks failed".to_string()))
            }
        }
        Command::Presets(args) => {
            let settings = settings_for(&args.shared, cli.config.as_ref(), None, None)?;
            presets::run(&settings)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
