//! Family catalogue: lists the named one-parameter deformation families with
//! their λ domains, or evaluates one family's coefficient vector and operator
//! at a chosen λ.

use crate::config::{CliError, CliResult, OutputFormat, Settings};
use crate::emit;
use serde::Serialize;
use squeezelab::operator_algebra::ALL_FAMILIES;
use squeezelab::{DeformationParams, Family, HamiltonianCoeffs};

#[derive(Debug, Serialize)]
pub struct PresetInfo {
    pub name: &'static str,
    pub lambda_domain: &'static str,
    pub reference_lambda: f64,
    pub lambda: f64,
    pub params: DeformationParams,
    pub coefficients: HamiltonianCoeffs,
    pub self_adjoint: bool,
}

fn info(family: Family, lambda: f64) -> CliResult<PresetInfo> {
    let params = family.preset(lambda)?;
    let coefficients = params.hamiltonian_coeffs()?;
    Ok(PresetInfo {
        name: family.name(),
        lambda_domain: family.lambda_domain(),
        reference_lambda: family.reference_lambda(),
        lambda,
        params,
        coefficients,
        self_adjoint: coefficients.is_self_adjoint(1e-10),
    })
}

fn human_text(infos: &[PresetInfo]) -> String {
    let mut text = String::new();
    for i in infos {
        text.push_str(&format!("{} (λ domain: {}, reference λ = {})\n", i.name, i.lambda_domain, i.reference_lambda));
        let p = &i.params;
        text.push_str(&format!(
            "  at λ = {}: c = ({}, {}, {}, {}, {}, {})\n",
            i.lambda, p.c1, p.c2, p.c3, p.c4, p.c5, p.c6
        ));
        let h = &i.coefficients;
        text.push_str(&format!(
            "  operator: A = {:.6}, B = {:.6}, C = {:.6}, D = {:.6}, E = {:.6}, F = {:.6}; self-adjoint: {}\n",
            h.a, h.b, h.c, h.d, h.e, h.f, if i.self_adjoint { "yes" } else { "no" }
        ));
    }
    text
}

pub fn run(settings: &Settings) -> CliResult<()> {
    let chosen = settings.family.or(settings.preset);
    let selected: Vec<Family> = match chosen {
        Some(family) => vec![family],
        None => ALL_FAMILIES.to_vec(),
    };
    let mut infos = Vec::with_capacity(selected.len());
    for family in selected {
        // --lambda applies only when a single family is named; the full
        // catalogue is shown at each family's reference point.
        let lambda = match chosen {
            Some(_) => settings.lambda.unwrap_or_else(|| family.reference_lambda()),
            None => family.reference_lambda(),
        };
        infos.push(info(family, lambda)?);
    }
    match settings.format {
        Some(OutputFormat::Json) => {
            emit::write_text(settings.out.as_ref(), &emit::to_json_pretty(&infos)?)
        }
        Some(_) => Err(CliError::config(
            "presets output is text or JSON; use --format json or omit --format",
        )),
        None => emit::write_text(settings.out.as_ref(), &human_text(&infos)),
    }
}
