//! Single-Hamiltonian analysis: operator coefficients, self-adjointness,
//! per-level energies, moment reports (quadrature plus closed form where one
//! exists), and eigenfunction residuals. Optionally emits waveform sample
//! files for plotting.

use crate::config::{CliError, CliResult, OutputFormat, Settings};
use crate::emit;
use serde::Serialize;
use squeezelab::eigensystem::{eigenfunction, EigenSolution, SAMPLE_POINTS};
use squeezelab::moments::{
    closed_form_moments, ground_state_moments, quadrature_moments, MomentReport, QuadratureSpec,
};
use squeezelab::validator::hamiltonian_residual;
use squeezelab::{DeformationParams, Error as LibError, Family, HamiltonianCoeffs};

/// Default residual tolerance for the per-level verdict (override with --tol).
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Serialize)]
pub struct LevelEntry {
    pub n: u32,
    pub energy: f64,
    pub relative_residual: f64,
    pub residual_ok: bool,
    pub quadrature: MomentReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<MomentReport>,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub params: DeformationParams,
    pub coefficients: HamiltonianCoeffs,
    pub constraint_defect: f64,
    pub self_adjoint: bool,
    pub residual_tolerance: f64,
    pub levels: Vec<LevelEntry>,
}

/// Resolves the target Hamiltonian: a named family at λ (default: the
/// family's reference value) or a raw six-coefficient vector.
fn target(settings: &Settings) -> CliResult<(Option<Family>, Option<f64>, DeformationParams)> {
    match (settings.family, settings.raw_params) {
        (Some(family), None) => {
            let lambda = settings.lambda.unwrap_or_else(|| family.reference_lambda());
            let params = family.preset(lambda)?;
            Ok((Some(family), Some(lambda), params))
        }
        (None, Some(params)) => Ok((None, None, params)),
        (None, None) => Err(CliError::config(
            "analyze needs --family or a full --c1..--c6 coefficient vector",
        )),
        (Some(_), Some(_)) => unreachable!("rejected during config resolution"),
    }
}

fn moment_spec(n: u32, nodes: Option<usize>) -> QuadratureSpec {
    match nodes {
        Some(k) => QuadratureSpec::with_node_count(n, k),
        None => QuadratureSpec::default_for_level(n),
    }
}

fn closed_form_entry(
    family: Option<Family>,
    lambda: Option<f64>,
    h: &HamiltonianCoeffs,
    n: u32,
) -> CliResult<Option<MomentReport>> {
    if let (Some(f), Some(l)) = (family, lambda) {
        match closed_form_moments(f, l, n) {
            Ok(report) => return Ok(Some(report)),
            Err(LibError::NoClosedForm { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        }
    }
    // Raw coefficient vectors still have an exact ground-state description.
    if n == 0 {
        return Ok(Some(ground_state_moments(h)?));
    }
    Ok(None)
}

pub fn build_report(settings: &Settings) -> CliResult<AnalyzeReport> {
    let (family, lambda, params) = target(settings)?;
    let coefficients = params.hamiltonian_coeffs()?;
    let tol = settings.tol.unwrap_or(DEFAULT_RESIDUAL_TOL);

    let mut levels = Vec::with_capacity(settings.ns.len());
    for &n in &settings.ns {
        let state: EigenSolution = eigenfunction(&coefficients, n)?;
        let residual = hamiltonian_residual(&coefficients, &state)?;
        let quadrature = quadrature_moments(&state, &moment_spec(n, settings.nodes))?;
        let closed_form = closed_form_entry(family, lambda, &coefficients, n)?;
        levels.push(LevelEntry {
            n,
            energy: state.energy,
            relative_residual: residual.relative_residual,
            residual_ok: residual.relative_residual <= tol,
            quadrature,
            closed_form,
        });
    }

    Ok(AnalyzeReport {
        family,
        lambda,
        params,
        coefficients,
        constraint_defect: params.canonical_defect(),
        self_adjoint: coefficients.is_self_adjoint(1e-10),
        residual_tolerance: tol,
        levels,
    })
}

fn moment_lines(label: &str, m: &MomentReport, text: &mut String) {
    text.push_str(&format!(
        "    {label}: var_x = {:.12}, var_p = {:.12}, product = {:.12}\n",
        m.var_x, m.var_p, m.product
    ));
    text.push_str(&format!(
        "    {label}: mean_x = {:.12}, squeezed_x = {}, squeezed_p = {}, coherent = {}\n",
        m.mean_x, m.squeezed_x, m.squeezed_p, m.coherent
    ));
}

pub fn human_text(report: &AnalyzeReport) -> String {
    let mut text = String::new();
    match (report.family, report.lambda) {
        (Some(f), Some(l)) => text.push_str(&format!("target: {f} at lambda = {l}\n")),
        _ => text.push_str("target: raw coefficient vector\n"),
    }
    let p = &report.params;
    text.push_str(&format!(
        "coefficients: c1 = {}, c2 = {}, c3 = {}, c4 = {}, c5 = {}, c6 = {}\n",
        p.c1, p.c2, p.c3, p.c4, p.c5, p.c6
    ));
    text.push_str(&format!("constraint defect: {:.3e}\n", report.constraint_defect));
    let h = &report.coefficients;
    text.push_str(&format!(
        "operator: A = {:.12}, B = {:.12}, C = {:.12},\n          D = {:.12}, E = {:.12}, F = {:.12}\n",
        h.a, h.b, h.c, h.d, h.e, h.f
    ));
    text.push_str(&format!(
        "self-adjoint: {}\n",
        if report.self_adjoint { "yes (B = C = 0)" } else { "no" }
    ));
    for level in &report.levels {
        text.push_str(&format!(
            "level n = {}: energy = {:.12}, residual = {:.3e} ({})\n",
            level.n,
            level.energy,
            level.relative_residual,
            if level.residual_ok { "ok" } else { "EXCEEDS TOLERANCE" }
        ));
        moment_lines("quadrature", &level.quadrature, &mut text);
        if let Some(cf) = &level.closed_form {
            moment_lines("closed form", cf, &mut text);
        }
    }
    text
}

/// Writes per-level waveform sample files into the --out directory.
fn write_waveforms(settings: &Settings, report: &AnalyzeReport) -> CliResult<()> {
    let dir = settings.out.as_ref().ok_or_else(|| {
        CliError::config("plotdata format needs --out pointing at a directory")
    })?;
    let coefficients = &report.coefficients;
    let family_label = report
        .family
        .map(|f| f.name().to_string())
        .unwrap_or_else(|| "custom".to_string());
    let lambda_label = report.lambda.unwrap_or(0.0);
    for level in &report.levels {
        let state = eigenfunction(coefficients, level.n)?;
        let xs = state.waveform.sample_grid(SAMPLE_POINTS);
        let values: Vec<f64> = xs.iter().map(|&x| state.waveform.eval(x)).collect();
        let name = emit::plotdata_file_name(&family_label, lambda_label, level.n);
        emit::write_plotdata(dir, &name, &xs, &values)?;
        println!("wrote {}", dir.join(&name).display());
    }
    Ok(())
}

pub fn run(settings: &Settings) -> CliResult<()> {
    let report = build_report(settings)?;
    match settings.format {
        Some(OutputFormat::Json) => emit::write_text(settings.out.as_ref(), &emit::to_json_pretty(&report)?),
        Some(OutputFormat::Plotdata) => write_waveforms(settings, &report),
        Some(OutputFormat::Csv) => Err(CliError::config(
            "analyze does not produce CSV; use json, plotdata, or the default text output",
        )),
        None => emit::write_text(settings.out.as_ref(), &human_text(&report)),
    }
}
