//! Position/momentum statistics of the bound states: means, variances, the
//! uncertainty product, and squeezing classification.
//!
//! Two independent routes produce the same numbers:
//!
//! * **Quadrature** — envelope-matched Gauss–Hermite integration of the
//!   actual waveform, available for every admissible Hamiltonian.
//! * **Closed form** — per-family analytic expressions (Laguerre ratios for
//!   the shifted-creation family, rational functions of λ for the others).
//!
//! Tests require the two routes to agree to [`ORACLE_REL_TOL`]; neither is
//! ever "calibrated" against the other at runtime.
//!
//! Conventions: ħ = ω = 1, squeezing means a variance strictly below the
//! vacuum value ½, and for the real eigenfunctions handled here ⟨p⟩ = 0 and
//! ⟨p²⟩ = ∫ψ′² exactly.

use crate::eigensystem::{
    admissibility, default_node_count, solve_family, EigenSolution, LEVEL_CAP,
};
use crate::error::{Error, Result};
use crate::operator_algebra::{Family, HamiltonianCoeffs};
use crate::quadrature::{integrate_mapped, GaussHermite, MAX_NODES};
use crate::special_functions::laguerre_eval;
use serde::Serialize;
use std::fmt;

/// Relative tolerance to which the quadrature and closed-form routes must
/// agree in tests and validation batteries.
pub const ORACLE_REL_TOL: f64 = 1e-9;

/// Numerical slack allowed below the exact Heisenberg floor ½.
pub const HEISENBERG_SLACK: f64 = 1e-12;

/// Half-width of the neutral band around variance ½ inside which a state is
/// classified as sitting on the squeezing boundary.
pub const SQUEEZE_MARGIN: f64 = 1e-12;

/// |ΔxΔp − ½| below this counts as a minimum-uncertainty (coherent) state.
pub const COHERENCE_TOL: f64 = 1e-10;

/// Allowed drift of ∫ψ² from 1 before moment integration is refused.
pub const NORMALIZATION_CHECK_TOL: f64 = 1e-8;

/// Which route produced a [`MomentReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    Quadrature,
    ClosedForm,
}

/// First and second moments of x and p plus derived squeezing classification.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentReport {
    pub mean_x: f64,
    pub mean_x2: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub var_x: f64,
    pub var_p: f64,
    /// Uncertainty product Δx·Δp.
    pub product: f64,
    /// var_x strictly below the vacuum value ½.
    pub squeezed_x: bool,
    /// var_p strictly below the vacuum value ½.
    pub squeezed_p: bool,
    /// Minimum-uncertainty state: Δx·Δp = ½ within [`COHERENCE_TOL`].
    pub coherent: bool,
    pub source: MomentSource,
}

impl MomentReport {
    fn from_means(mean_x: f64, mean_x2: f64, mean_p: f64, mean_p2: f64, source: MomentSource) -> Self {
        let var_x = mean_x2 - mean_x * mean_x;
        let var_p = mean_p2 - mean_p * mean_p;
        let product = (var_x * var_p).max(0.0).sqrt();
        MomentReport {
            mean_x,
            mean_x2,
            mean_p,
            mean_p2,
            var_x,
            var_p,
            product,
            squeezed_x: var_x < 0.5,
            squeezed_p: var_p < 0.5,
            coherent: (product - 0.5).abs() <= COHERENCE_TOL,
            source,
        }
    }

    pub fn heisenberg_satisfied(&self) -> bool {
        self.product >= 0.5 - HEISENBERG_SLACK
    }
}

/// Gauss–Hermite configuration for moment integration. `center`/`scale`
/// default to the envelope-matched values (making polynomial integrands
/// exact); overrides are for convergence experiments.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub node_count: usize,
    pub center: Option<f64>,
    pub scale: Option<f64>,
}

impl QuadratureSpec {
    pub fn default_for_level(n: u32) -> Self {
        QuadratureSpec { node_count: default_node_count(n), center: None, scale: None }
    }

    pub fn with_node_count(n: u32, node_count: usize) -> Self {
        QuadratureSpec { node_count, ..Self::default_for_level(n) }
    }
}

/// Integrates ⟨x⟩, ⟨x²⟩, ⟨p²⟩ directly from the waveform. Fails loudly if the
/// state is not unit-normalized or the requested rule cannot resolve the
/// integrands.
pub fn quadrature_moments(s: &EigenSolution, spec: &QuadratureSpec) -> Result<MomentReport> {
    let wf = &s.waveform;
    let n = wf.n;
    let min_nodes = 2 * n as usize + 8;
    if spec.node_count < min_nodes {
        return Err(Error::BadQuadratureSpec(format!(
            "node_count {} is below the minimum {min_nodes} for level {n}",
            spec.node_count
        )));
    }
    if spec.node_count > MAX_NODES {
        return Err(Error::BadQuadratureSpec(format!(
            "node_count {} exceeds the supported maximum {MAX_NODES}",
            spec.node_count
        )));
    }
    let center = spec.center.unwrap_or_else(|| wf.envelope_center());
    let scale = spec.scale.unwrap_or_else(|| wf.g2.sqrt());
    if !center.is_finite() || !scale.is_finite() || scale <= 0.0 {
        return Err(Error::BadQuadratureSpec(format!(
            "center {center} / scale {scale} must be finite with scale > 0"
        )));
    }
    if scale * scale > wf.g2 * (1.0 + 1e-9) {
        return Err(Error::BadQuadratureSpec(format!(
            "scale {scale} is steeper than the envelope decay {} and would \
             overflow the node weights",
            wf.g2.sqrt()
        )));
    }
    let rule = GaussHermite::new(spec.node_count);
    let envelope = (wf.g2, wf.g1, wf.g0);
    let density = |x: f64| {
        let (p0, _, _) = wf.polynomial_factor(x);
        p0 * p0
    };
    let i0 = integrate_mapped(center, scale, envelope, &rule, &density);
    if (i0 - 1.0).abs() > NORMALIZATION_CHECK_TOL {
        return Err(Error::NotNormalized { norm_sq: i0 });
    }
    let ix = integrate_mapped(center, scale, envelope, &rule, |x| x * density(x));
    let ixx = integrate_mapped(center, scale, envelope, &rule, |x| x * x * density(x));
    // ψ′ = e^{E}(P′ + E′P), so ⟨p²⟩ = ∫ψ′² shares the squared envelope.
    let ipp = integrate_mapped(center, scale, envelope, &rule, |x| {
        let (p0, p1, _) = wf.polynomial_factor(x);
        let slope = p1 + wf.envelope_exponent_d1(x) * p0;
        slope * slope
    });
    Ok(MomentReport::from_means(ix / i0, ixx / i0, 0.0, ipp / i0, MomentSource::Quadrature))
}

/// Moments of the level-n state from the per-family closed forms.
/// The mixing family ([`Family::FamilyIII`]) only has closed forms at n = 0.
pub fn closed_form_moments(family: Family, lambda: f64, n: u32) -> Result<MomentReport> {
    family.preset(lambda)?; // validates λ against the family domain
    if n > LEVEL_CAP {
        return Err(Error::LevelTooLarge { n, cap: LEVEL_CAP });
    }
    let nf = n as f64;
    let (mean_x, mean_x2, mean_p2) = match family {
        Family::Harmonic => (0.0, nf + 0.5, nf + 0.5),
        Family::ShiftedCreation => {
            let arg = -lambda * lambda;
            let l_n = laguerre_eval(n, 0.0, arg).value;
            let r1 = if n == 0 { 0.0 } else { laguerre_eval(n - 1, 1.0, arg).value / l_n };
            let l01 = if n == 0 { 0.0 } else { laguerre_eval(n - 1, 0.0, arg).value / l_n };
            let l22 = if n < 2 { 0.0 } else { laguerre_eval(n - 2, 2.0, arg).value / l_n };
            let mean_x = std::f64::consts::SQRT_2 * lambda * r1;
            let mean_x2 = 0.5 + nf * l01 + lambda * lambda * l22;
            let mean_p2 = 0.5 + nf * l01 - lambda * lambda * l22;
            (mean_x, mean_x2, mean_p2)
        }
        Family::FamilyI => {
            let mean_x = -std::f64::consts::SQRT_2 * lambda / 3.0;
            let var_x = (nf + 0.5) / 9.0;
            (mean_x, var_x + mean_x * mean_x, 9.0 * (nf + 0.5))
        }
        Family::FamilyII => (0.0, (nf + 0.5) / lambda, lambda * (nf + 0.5)),
        Family::FamilyIII => {
            if n > 0 {
                return Err(Error::NoClosedForm { family: family.name(), n });
            }
            (
                0.0,
                0.5 * (1.0 - lambda) / (1.0 + lambda),
                0.5 * (1.0 + lambda) / (1.0 - lambda),
            )
        }
    };
    Ok(MomentReport::from_means(mean_x, mean_x2, 0.0, mean_p2, MomentSource::ClosedForm))
}

/// Position variance of the level-n shifted-creation state via the corrected
/// Laguerre-ratio expression
///
/// ```text
/// var_x = 2n + ½ − (2λ²+1)·R − 2λ²·R²,   R = L_{n−1}^{(1)}(−λ²) / L_n^{(0)}(−λ²)
/// ```
///
/// (R ≡ 0 at n = 0). Algebraically equal to the moment difference produced by
/// [`closed_form_moments`]; kept as a separate expression so tests can pit
/// the two against each other and against quadrature.
pub fn shifted_creation_var_x(n: u32, lambda: f64) -> f64 {
    let arg = -lambda * lambda;
    let r = if n == 0 {
        0.0
    } else {
        laguerre_eval(n - 1, 1.0, arg).value / laguerre_eval(n, 0.0, arg).value
    };
    2.0 * n as f64 + 0.5 - (2.0 * lambda * lambda + 1.0) * r - 2.0 * lambda * lambda * r * r
}

/// The same expression with the squared ratio indexed L_n^{(1)}/L_n^{(0)}
/// instead of L_{n−1}^{(1)}/L_n^{(0)}. This variant appears in circulation
/// but is wrong: at n = 0, λ = 1 it yields −1.5 (a negative "variance").
/// Kept only as a diagnostic so the test suite can show it disagrees with
/// direct integration while the corrected form agrees.
pub fn shifted_creation_var_x_alt_index(n: u32, lambda: f64) -> f64 {
    let arg = -lambda * lambda;
    let l_n = laguerre_eval(n, 0.0, arg).value;
    let linear = if n == 0 { 0.0 } else { laguerre_eval(n - 1, 1.0, arg).value / l_n };
    let squared = laguerre_eval(n, 1.0, arg).value / l_n;
    2.0 * n as f64 + 0.5
        - (2.0 * lambda * lambda + 1.0) * linear
        - 2.0 * lambda * lambda * squared * squared
}

/// Ground-state moments of any admissible Hamiltonian, straight from the
/// Gaussian envelope: with α = (B−1)/(2A) and β = E − (B−1)C/(2A),
/// ⟨x⟩ = −β/α, var_x = 1/(2α) = A/(B−1), var_p = α/2, so Δx·Δp = ½ always.
pub fn ground_state_moments(h: &HamiltonianCoeffs) -> Result<MomentReport> {
    let report = admissibility(h);
    if !report.admissible {
        return Err(Error::Inadmissible(report.violations.join("; ")));
    }
    let alpha = (h.b - 1.0) / (2.0 * h.a);
    let beta = h.e - (h.b - 1.0) * h.c / (2.0 * h.a);
    let mean_x = -beta / alpha;
    let var_x = 0.5 / alpha;
    Ok(MomentReport::from_means(
        mean_x,
        var_x + mean_x * mean_x,
        0.0,
        0.5 * alpha,
        MomentSource::ClosedForm,
    ))
}

/// Three-way squeezing classification: strictly below ½, strictly above, or
/// on the boundary within [`SQUEEZE_MARGIN`]. Serialized as the strings
/// "true" / "false" / "boundary" so tabular output stays greppable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SqueezeFlag {
    #[serde(rename = "true")]
    Squeezed,
    #[serde(rename = "false")]
    NotSqueezed,
    #[serde(rename = "boundary")]
    Boundary,
}

impl SqueezeFlag {
    pub fn from_variance(var: f64) -> Self {
        if (var - 0.5).abs() <= SQUEEZE_MARGIN {
            SqueezeFlag::Boundary
        } else if var < 0.5 {
            SqueezeFlag::Squeezed
        } else {
            SqueezeFlag::NotSqueezed
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SqueezeFlag::Squeezed => "true",
            SqueezeFlag::NotSqueezed => "false",
            SqueezeFlag::Boundary => "boundary",
        }
    }

    pub fn is_squeezed(&self) -> bool {
        matches!(self, SqueezeFlag::Squeezed)
    }

    /// Two classifications are compatible when equal or when either sits on
    /// the boundary (a boundary value can legitimately land on either side
    /// of ½ under a different rounding of the same quantity).
    pub fn compatible(self, other: SqueezeFlag) -> bool {
        self == other || self == SqueezeFlag::Boundary || other == SqueezeFlag::Boundary
    }
}

impl fmt::Display for SqueezeFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Squeezing analysis of one family member at one level: measured moments
/// (quadrature), three-state flags, and — where a closed form exists — the
/// analytic prediction plus an agreement verdict.
#[derive(Debug, Clone, Serialize)]
pub struct SqueezeReport {
    pub family: Family,
    pub lambda: f64,
    pub n: u32,
    pub moments: MomentReport,
    pub flag_x: SqueezeFlag,
    pub flag_p: SqueezeFlag,
    pub predicted_x: Option<SqueezeFlag>,
    pub predicted_p: Option<SqueezeFlag>,
    /// `Some(true)` when measured flags are compatible with both predictions;
    /// `None` when the family has no closed form at this level.
    pub agreement: Option<bool>,
}

pub fn squeeze_report(family: Family, lambda: f64, n: u32) -> Result<SqueezeReport> {
    let solution = solve_family(family, lambda, n)?;
    let moments = quadrature_moments(&solution.state, &QuadratureSpec::default_for_level(n))?;
    let flag_x = SqueezeFlag::from_variance(moments.var_x);
    let flag_p = SqueezeFlag::from_variance(moments.var_p);
    let (predicted_x, predicted_p) = match closed_form_moments(family, lambda, n) {
        Ok(closed) => (
            Some(SqueezeFlag::from_variance(closed.var_x)),
            Some(SqueezeFlag::from_variance(closed.var_p)),
        ),
        Err(Error::NoClosedForm { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let agreement = match (predicted_x, predicted_p) {
        (Some(px), Some(pp)) => Some(flag_x.compatible(px) && flag_p.compatible(pp)),
        _ => None,
    };
    Ok(SqueezeReport {
        family,
        lambda,
        n,
        moments,
        flag_x,
        flag_p,
        predicted_x,
        predicted_p,
        agreement,
    })
}

/// Ground-state squeezing flags of an arbitrary admissible Hamiltonian.
/// Equivalent inequality form: x-squeezed ⇔ B < 2A + 1 and p-squeezed ⇔
/// B > 2A + 1 (boundary at equality), which tests verify independently.
pub fn ground_state_flags(h: &HamiltonianCoeffs) -> Result<(SqueezeFlag, SqueezeFlag)> {
    let report = ground_state_moments(h)?;
    Ok((
        SqueezeFlag::from_variance(report.var_x),
        SqueezeFlag::from_variance(report.var_p),
    ))
}
