//! Filter strings accepted on the command line.
//!
//! `uniform`, `ramp11`, `denoise:R`, `background` or `csv:PATH`, where the
//! CSV file holds one coefficient per field (`inf` allowed).

use std::fs;

use ftrpca_core::filter::{background_for, denoise_filter, synthetic_ramp_filter, uniform_for};
use ftrpca_core::FilterVector;

use crate::error::{CliError, Result};

/// Builds the filter named by `spec` for a tensor with `i3` frontal slices.
pub fn parse_filter(spec: &str, i3: usize) -> Result<FilterVector> {
    let filter = match spec.split_once(':') {
        None => match spec {
            "uniform" => uniform_for(i3)?,
            "ramp11" => synthetic_ramp_filter(),
            "background" => background_for(i3)?,
            _ => return Err(CliError::FilterSpec(spec.to_owned())),
        },
        Some(("denoise", ratio)) => {
            let r: f64 = ratio
                .trim()
                .parse()
                .map_err(|_| CliError::FilterSpec(spec.to_owned()))?;
            denoise_filter(r)?
        }
        Some(("csv", path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            FilterVector::new(parse_coefficients(&text).ok_or_else(|| CliError::FilterSpec(spec.to_owned()))?)?
        }
        Some(_) => return Err(CliError::FilterSpec(spec.to_owned())),
    };
    filter.check_for(i3)?;
    Ok(filter)
}

fn parse_coefficients(text: &str) -> Option<Vec<f64>> {
    let coeffs: Option<Vec<f64>> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok())
        .collect();
    coeffs.filter(|c| !c.is_empty())
}
