//! Least-squares fits for critical exponents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of points accepted in a fit window.
pub const MIN_POINTS: usize = 8;

/// `y = slope * x + intercept` with standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
    pub points: usize,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::Fit(format!(
            "{} x values but {} y values",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < MIN_POINTS {
        return Err(Error::Fit(format!(
            "{n} points, need at least {MIN_POINTS}"
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Fit("non-finite data".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::Fit("x values are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    let s2 = ssr / (nf - 2.0);
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr: (s2 / sxx).sqrt(),
        intercept_stderr: (s2 * (1.0 / nf + mx * mx / sxx)).sqrt(),
        rms_residual: (ssr / nf).sqrt(),
        points: n,
    })
}

/// Fitted model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitModel {
    /// `y = A x^p`, fitted as `ln y = p ln x + ln A`.
    Power,
    /// `y = a ln x + b`.
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub model: FitModel,
    /// Exponent p (power) or log coefficient a.
    pub estimate: f64,
    pub stderr: f64,
    /// Amplitude A (power) or offset b (log).
    pub coefficient: f64,
    pub coefficient_stderr: f64,
    pub rms_residual: f64,
    pub points: usize,
}

pub fn fit_exponent(x: &[f64], y: &[f64], model: FitModel) -> Result<ExponentFit> {
    if x.iter().any(|&v| v <= 0.0 || v.is_nan()) {
        return Err(Error::Fit(
            "x must be positive for a logarithmic axis".into(),
        ));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    match model {
        FitModel::Power => {
            if y.iter().any(|&v| v <= 0.0 || v.is_nan()) {
                return Err(Error::Fit("y must be positive for a power-law fit".into()));
            }
            let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
            let f = linear_fit(&lx, &ly)?;
            let amp = f.intercept.exp();
            Ok(ExponentFit {
                model,
                estimate: f.slope,
                stderr: f.slope_stderr,
                coefficient: amp,
                coefficient_stderr: amp * f.intercept_stderr,
                rms_residual: f.rms_residual,
                points: f.points,
            })
        }
        FitModel::Log => {
            let f = linear_fit(&lx, y)?;
            Ok(ExponentFit {
                model,
                estimate: f.slope,
                stderr: f.slope_stderr,
                coefficient: f.intercept,
                coefficient_stderr: f.intercept_stderr,
                rms_residual: f.rms_residual,
                points: f.points,
            })
        }
    }
}
