//! Bound states of H = A·d²/dx² + (B·x + C)·d/dx + D·x² + E·x + F.
//!
//! For admissible coefficients (A < 0, B < 1) the spectrum is E_n = n + ½
//! regardless of self-adjointness, and the eigenfunctions are a shared
//! Gaussian envelope times scaled/shifted Hermite polynomials:
//!
//! ```text
//! ψ_n(x) = norm · exp(−½·g2·x² − g1·x − ½·g0) · H_n((x − q)/p)
//! ```
//!
//! with p = √(−2A), q = 2EA − BC, g2 = (B−1)/(2A), g1 = E − (B−1)C/(2A),
//! g0 = −q²/(2A). The canonical pair behind H guarantees B² − 4AD = 1, which
//! is what collapses the envelope exponent to (B−1)/(2A).
//!
//! Normalization is always numerical (envelope-matched Gauss–Hermite rule),
//! never a printed constant; closed-form constants are checked against it in
//! tests rather than trusted.

use crate::error::{Error, Result};
use crate::operator_algebra::{Family, HamiltonianCoeffs, LadderOperator};
use crate::quadrature::{integrate_envelope_product, GaussHermite};
use crate::special_functions::hermite_eval;
use crate::DeformationParams;
use serde::Serialize;

/// Highest supported level. Hermite degree and quadrature sizes are validated
/// comfortably past this; callers wanting more should raise it deliberately.
pub const LEVEL_CAP: u32 = 64;

/// Default quadrature size for a level-n state: integrands seen here are
/// polynomials of degree ≤ 2n+4 against the squared envelope, so 2n+16 nodes
/// leave a wide exactness margin.
pub fn default_node_count(n: u32) -> usize {
    2 * n as usize + 16
}

/// Points in a sampled waveform grid (odd, so the center is included).
pub const SAMPLE_POINTS: usize = 513;

/// Half-width of sample grids in envelope widths 1/√g2.
pub const GRID_HALF_WIDTH_SIGMAS: f64 = 8.0;

/// L² norm below which an operator image is treated as the zero function
/// (e.g. the lowering operator acting on the ground state).
pub const ZERO_FUNCTION_FLOOR: f64 = 1e-12;

/// Outcome of the bound-state admissibility check A < 0, B < 1.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub violations: Vec<String>,
}

pub fn admissibility(h: &HamiltonianCoeffs) -> AdmissibilityReport {
    let mut violations = Vec::new();
    if !(h.a < 0.0) {
        violations.push(format!("A must be negative (A = {})", h.a));
    }
    if !(h.b < 1.0) {
        violations.push(format!("B must be less than 1 (B = {})", h.b));
    }
    AdmissibilityReport { admissible: violations.is_empty(), violations }
}

/// Hermite scale p = √(−2A) (positive root) and shift q = 2EA − BC.
/// These satisfy (p⁴/A)·(D − B²/(4A)) = −1 and
/// q·(D − B²/(4A)) = −(E − BC/(2A))/2 for any canonical-pair Hamiltonian.
pub fn change_of_variable(h: &HamiltonianCoeffs) -> Result<(f64, f64)> {
    let report = admissibility(h);
    if !report.admissible {
        return Err(Error::Inadmissible(report.violations.join("; ")));
    }
    let p = (-2.0 * h.a).sqrt();
    let q = 2.0 * h.e * h.a - h.b * h.c;
    Ok((p, q))
}

/// One bound state in canonical Gaussian × Hermite form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Waveform {
    pub n: u32,
    /// Quadratic envelope coefficient; positive for admissible H.
    pub g2: f64,
    /// Linear envelope coefficient.
    pub g1: f64,
    /// Constant envelope offset (convention g0 = −q²/(2A)).
    pub g0: f64,
    /// Hermite argument scale p > 0.
    pub hermite_scale: f64,
    /// Hermite argument shift q.
    pub hermite_shift: f64,
    /// Numerically determined L² normalization, positive.
    pub norm: f64,
}

impl Waveform {
    /// Envelope exponent E(x) = −½·g2·x² − g1·x − ½·g0.
    pub fn envelope_exponent(&self, x: f64) -> f64 {
        -0.5 * self.g2 * x * x - self.g1 * x - 0.5 * self.g0
    }

    /// E'(x) = −(g2·x + g1).
    pub fn envelope_exponent_d1(&self, x: f64) -> f64 {
        -(self.g2 * x + self.g1)
    }

    /// Center of the Gaussian envelope, −g1/g2.
    pub fn envelope_center(&self) -> f64 {
        -self.g1 / self.g2
    }

    /// Width scale of the envelope: ψ ~ exp(−g2(x−center)²/2), so 1/√g2.
    pub fn envelope_width(&self) -> f64 {
        1.0 / self.g2.sqrt()
    }

    /// Polynomial factor P(x) = norm·H_n((x−q)/p) with its first and second
    /// derivatives, so that ψ = e^{E(x)}·P(x).
    pub fn polynomial_factor(&self, x: f64) -> (f64, f64, f64) {
        let y = (x - self.hermite_shift) / self.hermite_scale;
        let n = self.n;
        let hn = hermite_eval(n, y);
        let (h_minus_1, h_minus_2) = if n == 0 {
            (0.0, 0.0)
        } else {
            let lower = hermite_eval(n - 1, y);
            let two_below = if n >= 2 { lower.derivative / (2.0 * (n - 1) as f64) } else { 0.0 };
            (lower.value, two_below)
        };
        let nf = n as f64;
        let p = self.hermite_scale;
        let p0 = self.norm * hn.value;
        let p1 = self.norm * 2.0 * nf * h_minus_1 / p;
        let p2 = self.norm * 4.0 * nf * (nf - 1.0) * h_minus_2 / (p * p);
        (p0, p1, p2)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (p0, _, _) = self.polynomial_factor(x);
        self.envelope_exponent(x).exp() * p0
    }

    /// (ψ, ψ', ψ'') at x, from the analytic envelope/polynomial split.
    pub fn eval_with_derivatives(&self, x: f64) -> (f64, f64, f64) {
        let (p0, p1, p2) = self.polynomial_factor(x);
        let env = self.envelope_exponent(x).exp();
        let e1 = self.envelope_exponent_d1(x);
        let psi = env * p0;
        let d1 = env * (p1 + e1 * p0);
        let d2 = env * (p2 + 2.0 * e1 * p1 + (e1 * e1 - self.g2) * p0);
        (psi, d1, d2)
    }

    /// Evenly spaced sample grid spanning center ± 8 envelope widths.
    pub fn sample_grid(&self, points: usize) -> Vec<f64> {
        let center = self.envelope_center();
        let half = GRID_HALF_WIDTH_SIGMAS * self.envelope_width();
        let count = points.max(2);
        (0..count)
            .map(|i| center - half + 2.0 * half * i as f64 / (count - 1) as f64)
            .collect()
    }
}

/// A waveform together with its energy; energy is n + ½ by construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EigenSolution {
    pub waveform: Waveform,
    pub energy: f64,
}

/// Builds the normalized level-n bound state of an admissible H.
pub fn eigenfunction(h: &HamiltonianCoeffs, n: u32) -> Result<EigenSolution> {
    if n > LEVEL_CAP {
        return Err(Error::LevelTooLarge { n, cap: LEVEL_CAP });
    }
    let (p, q) = change_of_variable(h)?;
    let g2 = (h.b - 1.0) / (2.0 * h.a);
    let g1 = h.e - (h.b - 1.0) * h.c / (2.0 * h.a);
    let g0 = -q * q / (2.0 * h.a);
    let rule = GaussHermite::new(default_node_count(n));
    let norm_sq_raw = integrate_envelope_product(g2, g1, g0, &rule, |x| {
        let value = hermite_eval(n, (x - q) / p).value;
        value * value
    });
    assert!(
        norm_sq_raw.is_finite() && norm_sq_raw > 0.0,
        "raw norm integral must be positive, got {norm_sq_raw}"
    );
    let waveform = Waveform {
        n,
        g2,
        g1,
        g0,
        hermite_scale: p,
        hermite_shift: q,
        norm: 1.0 / norm_sq_raw.sqrt(),
    };
    Ok(EigenSolution { waveform, energy: n as f64 + 0.5 })
}

/// The general closed-form energy expression, kept verbatim so that its
/// collapse to n + ½ is a checked consequence rather than an assumption:
///
/// ```text
/// E_n = F − B/2 − C²/(4A) − (A/p²)(2n+1) + q²(D − B²/(4A)) + q(E − BC/(2A))
/// ```
pub fn energy_general(h: &HamiltonianCoeffs, p: f64, q: f64, n: u32) -> Result<f64> {
    if h.a == 0.0 || p == 0.0 || !p.is_finite() {
        return Err(Error::SingularSecondOrder);
    }
    let d_shift = h.d - h.b * h.b / (4.0 * h.a);
    Ok(h.f - h.b / 2.0 - h.c * h.c / (4.0 * h.a) - (h.a / (p * p)) * (2.0 * n as f64 + 1.0)
        + q * q * d_shift
        + q * (h.e - h.b * h.c / (2.0 * h.a)))
}

/// Least-squares projection of an applied operator image onto one
/// neighboring level.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NeighborFit {
    pub level: u32,
    pub coefficient: f64,
    pub relative_residual: f64,
}

/// Result of applying a first-order ladder operator to a bound state:
/// the image sampled on the envelope grid plus projections onto the
/// neighboring levels (n−1 and n+1 share the image's Gaussian envelope, so
/// those two fits tell the whole story for a canonical pair).
#[derive(Debug, Clone, Serialize)]
pub struct LadderApplication {
    pub source_level: u32,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub l2_norm: f64,
    pub fits: Vec<NeighborFit>,
}

impl LadderApplication {
    pub fn fit_for(&self, level: u32) -> Option<&NeighborFit> {
        self.fits.iter().find(|f| f.level == level)
    }
}

/// Applies op = u·d/dx + v·x + k to the state and projects the image onto the
/// neighboring eigenfunctions by envelope-exact quadrature. The image is
/// evaluated directly as u·ψ' + (vx+k)·ψ, independent of any raising/lowering
/// bookkeeping, so the fit coefficients are measurements, not assumptions.
pub fn apply_ladder(
    h: &HamiltonianCoeffs,
    op: &LadderOperator,
    s: &EigenSolution,
) -> Result<LadderApplication> {
    let wf = &s.waveform;
    let (u, v, k) = (op.d_coefficient(), op.x_coefficient(), op.constant());
    // Image polynomial factor: f = e^{E}·poly_f with
    // poly_f = u·(P' + E'·P) + (vx + k)·P, degree ≤ n+1.
    let poly_f = |x: f64| {
        let (p0, p1, _) = wf.polynomial_factor(x);
        u * (p1 + wf.envelope_exponent_d1(x) * p0) + (v * x + k) * p0
    };
    let xs = wf.sample_grid(SAMPLE_POINTS);
    let values: Vec<f64> = xs
        .iter()
        .map(|&x| wf.envelope_exponent(x).exp() * poly_f(x))
        .collect();
    let rule = GaussHermite::new(default_node_count(wf.n + 1));
    let norm_sq =
        integrate_envelope_product(wf.g2, wf.g1, wf.g0, &rule, |x| poly_f(x) * poly_f(x));
    let l2_norm = norm_sq.max(0.0).sqrt();
    let mut candidates = Vec::new();
    if wf.n >= 1 {
        candidates.push(wf.n - 1);
    }
    if wf.n + 1 <= LEVEL_CAP {
        candidates.push(wf.n + 1);
    }
    let mut fits = Vec::new();
    for level in candidates {
        let neighbor = eigenfunction(h, level)?;
        let coefficient = integrate_envelope_product(wf.g2, wf.g1, wf.g0, &rule, |x| {
            poly_f(x) * neighbor.waveform.polynomial_factor(x).0
        });
        // Residual of the projection measured pointwise (f − c·ψ_m before
        // squaring), which avoids the √ε floor of the ‖f‖² − c² form.
        let relative_residual = if l2_norm <= ZERO_FUNCTION_FLOOR {
            0.0
        } else {
            let leftover = integrate_envelope_product(wf.g2, wf.g1, wf.g0, &rule, |x| {
                let diff = poly_f(x) - coefficient * neighbor.waveform.polynomial_factor(x).0;
                diff * diff
            });
            leftover.max(0.0).sqrt() / l2_norm
        };
        fits.push(NeighborFit { level, coefficient, relative_residual });
    }
    Ok(LadderApplication { source_level: wf.n, xs, values, l2_norm, fits })
}

/// Everything analyzed for one family member at one level.
#[derive(Debug, Clone, Serialize)]
pub struct FamilySolution {
    pub params: DeformationParams,
    pub coeffs: HamiltonianCoeffs,
    pub state: EigenSolution,
}

/// Preset → parameters → coefficients → eigenfunction in one step.
pub fn solve_family(family: Family, lambda: f64, n: u32) -> Result<FamilySolution> {
    let params = family.preset(lambda)?;
    let coeffs = params.hamiltonian_coeffs()?;
    let state = eigenfunction(&coeffs, n)?;
    Ok(FamilySolution { params, coeffs, state })
}
