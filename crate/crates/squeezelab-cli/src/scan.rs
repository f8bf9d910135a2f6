//! Parameter-grid sweeps: evaluates squeezing diagnostics on a (λ, n) grid,
//! tags every row with measured flags and the closed-form threshold
//! prediction, and summarizes contiguous x-squeezed regions per level.
//!
//! Grid points are evaluated concurrently; the output order is always
//! (λ ascending, then n ascending), independent of scheduling.

use crate::config::{CliError, CliResult};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use squeezelab::moments::{closed_form_moments, quadrature_moments, QuadratureSpec, SqueezeFlag};
use squeezelab::eigensystem::solve_family;
use squeezelab::{Error as LibError, Family};

/// One grid point. Field order is the output-column order. Rows whose λ falls
/// outside the family domain are emitted with `threshold_prediction =
/// "skipped"` and empty measurements, so grids straddling a domain edge stay
/// rectangular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub family: String,
    pub lambda: f64,
    pub n: u32,
    pub var_x: Option<f64>,
    pub var_p: Option<f64>,
    pub product: Option<f64>,
    /// Measured flag: "true" | "false" | "boundary".
    pub squeezed_x: Option<String>,
    pub squeezed_p: Option<String>,
    pub coherent: Option<bool>,
    /// Closed-form x-squeezing prediction ("true"/"false"/"boundary"), the
    /// literal "skipped" for out-of-domain rows, or null when the family has
    /// no closed form at this level.
    pub threshold_prediction: Option<String>,
    /// Prediction vs. measurement, present exactly when a prediction exists.
    pub agreement: Option<bool>,
}

pub const SKIPPED_MARKER: &str = "skipped";

impl ScanRow {
    pub fn is_skipped(&self) -> bool {
        self.threshold_prediction.as_deref() == Some(SKIPPED_MARKER)
    }
}

/// A maximal run of consecutive grid λ values (at fixed n) whose measured
/// x-flag is strictly "true". `lambda_onset` is therefore a one-grid-step
/// estimate of where squeezing switches on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezeRegion {
    pub n: u32,
    pub lambda_onset: f64,
    pub lambda_end: f64,
    pub row_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    pub regions: Vec<SqueezeRegion>,
}

fn flag_cell(flag: SqueezeFlag) -> Option<String> {
    Some(flag.as_str().to_string())
}

fn compute_row(
    family: Family,
    lambda: f64,
    n: u32,
    nodes: Option<usize>,
) -> Result<ScanRow, CliError> {
    let name = family.name().to_string();
    let skipped = || ScanRow {
        family: name.clone(),
        lambda,
        n,
        var_x: None,
        var_p: None,
        product: None,
        squeezed_x: None,
        squeezed_p: None,
        coherent: None,
        threshold_prediction: Some(SKIPPED_MARKER.to_string()),
        agreement: None,
    };

    match family.preset(lambda) {
        Ok(_) => {}
        Err(LibError::LambdaOutOfRange { .. }) => return Ok(skipped()),
        Err(e) => return Err(e.into()),
    }

    let solution = solve_family(family, lambda, n).map_err(CliError::from)?;
    let spec = match nodes {
        Some(k) => QuadratureSpec::with_node_count(n, k),
        None => QuadratureSpec::default_for_level(n),
    };
    let measured = quadrature_moments(&solution.state, &spec).map_err(CliError::from)?;
    let flag_x = SqueezeFlag::from_variance(measured.var_x);
    let flag_p = SqueezeFlag::from_variance(measured.var_p);

    let predicted_x = match closed_form_moments(family, lambda, n) {
        Ok(cf) => Some(SqueezeFlag::from_variance(cf.var_x)),
        Err(LibError::NoClosedForm { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    Ok(ScanRow {
        family: name,
        lambda,
        n,
        var_x: Some(measured.var_x),
        var_p: Some(measured.var_p),
        product: Some(measured.product),
        squeezed_x: flag_cell(flag_x),
        squeezed_p: flag_cell(flag_p),
        coherent: Some(measured.coherent),
        threshold_prediction: predicted_x.map(|f| f.as_str().to_string()),
        agreement: predicted_x.map(|p| p.compatible(flag_x)),
    })
}

/// Evaluates the grid concurrently and returns rows ordered by (λ, n).
pub fn scan_rows(
    family: Family,
    lambdas: &[f64],
    ns: &[u32],
    nodes: Option<usize>,
) -> CliResult<Vec<ScanRow>> {
    let mut levels: Vec<u32> = ns.to_vec();
    levels.sort_unstable();
    levels.dedup();

    let grid: Vec<(f64, u32)> = lambdas
        .iter()
        .flat_map(|&lambda| levels.iter().map(move |&n| (lambda, n)))
        .collect();
    if grid.is_empty() {
        return Err(CliError::config("scan grid is empty"));
    }

    let rows: Vec<ScanRow> = grid
        .par_iter()
        .map(|&(lambda, n)| compute_row(family, lambda, n, nodes))
        .collect::<Result<_, _>>()?;

    if rows.iter().all(ScanRow::is_skipped) {
        return Err(CliError::config(format!(
            "no admissible grid points: every λ lies outside the {} domain {}",
            family.name(),
            family.lambda_domain(),
        )));
    }
    Ok(rows)
}

/// Groups rows by level and extracts maximal strictly-squeezed λ runs.
pub fn squeeze_regions(rows: &[ScanRow]) -> Vec<SqueezeRegion> {
    let mut levels: Vec<u32> = rows.iter().map(|r| r.n).collect();
    levels.sort_unstable();
    levels.dedup();

    let mut regions = Vec::new();
    for &n in &levels {
        let mut open: Option<SqueezeRegion> = None;
        for row in rows.iter().filter(|r| r.n == n) {
            let squeezed = row.squeezed_x.as_deref() == Some("true");
            if squeezed {
                match open.as_mut() {
                    Some(region) => {
                        region.lambda_end = row.lambda;
                        region.row_count += 1;
                    }
                    None => {
                        open = Some(SqueezeRegion {
                            n,
                            lambda_onset: row.lambda,
                            lambda_end: row.lambda,
                            row_count: 1,
                        });
                    }
                }
            } else if let Some(region) = open.take() {
                regions.push(region);
            }
        }
        if let Some(region) = open.take() {
            regions.push(region);
        }
    }
    regions
}

/// Human-readable digest of a finished sweep.
pub fn summary_text(family: Family, rows: &[ScanRow], regions: &[SqueezeRegion]) -> String {
    let skipped = rows.iter().filter(|r| r.is_skipped()).count();
    let mut text = format!(
        "scan {}: {} rows ({} outside domain, skipped)\n",
        family.name(),
        rows.len(),
        skipped
    );
    let mut levels: Vec<u32> = rows.iter().map(|r| r.n).collect();
    levels.sort_unstable();
    levels.dedup();
    for n in levels {
        let of_level: Vec<&SqueezeRegion> = regions.iter().filter(|r| r.n == n).collect();
        if of_level.is_empty() {
            text.push_str(&format!("  n={n}: no x-squeezed rows\n"));
        } else {
            for region in of_level {
                text.push_str(&format!(
                    "  n={}: x-squeezed for λ in [{}, {}] ({} rows, onset estimate {})\n",
                    region.n,
                    region.lambda_onset,
                    region.lambda_end,
                    region.row_count,
                    region.lambda_onset
                ));
            }
        }
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_come_back_in_lambda_then_level_order() {
        let rows = scan_rows(Family::FamilyII, &[1.0, 2.0], &[1, 0], None).unwrap();
        let keys: Vec<(f64, u32)> = rows.iter().map(|r| (r.lambda, r.n)).collect();
        assert_eq!(keys, vec![(1.0, 0), (1.0, 1), (2.0, 0), (2.0, 1)]);
    }

    #[test]
    fn out_of_domain_rows_are_marked_skipped() {
        let rows = scan_rows(Family::FamilyIII, &[0.5, 1.5], &[0], None).unwrap();
        assert!(!rows[0].is_skipped());
        assert!(rows[1].is_skipped());
        assert_eq!(rows[1].var_x, None);
        assert_eq!(rows[1].agreement, None);
    }

    #[test]
    fn fully_out_of_domain_grid_is_an_error() {
        let err = scan_rows(Family::FamilyII, &[-3.0, -1.0], &[0], None).unwrap_err();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("no admissible grid points"));
    }

    #[test]
    fn family_ii_agreement_holds_across_the_threshold() {
        let lambdas: Vec<f64> = (1..=9).map(|k| k as f64).collect();
        let rows = scan_rows(Family::FamilyII, &lambdas, &[0, 1, 2], None).unwrap();
        for row in &rows {
            assert_eq!(row.agreement, Some(true), "row λ={} n={}", row.lambda, row.n);
            let threshold = (2 * row.n + 1) as f64;
            let expected = if row.lambda > threshold {
                "true"
            } else if row.lambda < threshold {
                "false"
            } else {
                "boundary"
            };
            assert_eq!(row.squeezed_x.as_deref(), Some(expected));
        }
    }

    #[test]
    fn regions_detect_the_family_ii_onset_within_one_step() {
        let lambdas: Vec<f64> = (0..=16).map(|k| 1.0 + 0.5 * k as f64).collect();
        let rows = scan_rows(Family::FamilyII, &lambdas, &[0, 1, 2], None).unwrap();
        let regions = squeeze_regions(&rows);
        for n in 0..=2u32 {
            let region = regions.iter().find(|r| r.n == n).expect("one region per level");
            let threshold = (2 * n + 1) as f64;
            assert!(
                region.lambda_onset > threshold && region.lambda_onset - 0.5 <= threshold + 1e-12,
                "n={n}: onset {} should sit within one step above {threshold}",
                region.lambda_onset
            );
            assert_eq!(region.lambda_end, 9.0);
        }
    }

    #[test]
    fn mixing_family_rows_have_no_prediction_above_ground() {
        let rows = scan_rows(Family::FamilyIII, &[0.5], &[0, 1], None).unwrap();
        assert!(rows[0].threshold_prediction.is_some());
        assert_eq!(rows[1].threshold_prediction, None);
        assert_eq!(rows[1].agreement, None);
        assert!(rows[1].var_x.is_some(), "measurement still present");
    }
}
