use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaps at or below this count as zero.
pub const FINITE_GAP_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateFit {
    /// `log gap ~ slope * log d + intercept`.
    Fitted {
        slope: f64,
        intercept: f64,
        r_squared: f64,
        points: usize,
        /// First level whose gap vanished, if any (excluded from the fit).
        finite_convergence: Option<usize>,
    },
    /// Too few positive gaps to fit, and the gap vanished at `level`.
    FiniteConvergence { level: usize },
}

pub fn fit_rate(levels: &[usize], gaps: &[f64]) -> Result<RateFit> {
    fit_rate_with(levels, gaps, FINITE_GAP_TOL)
}

/// Least squares on `(log d, log gap)` over levels `d >= 1` with
/// `gap > zero_tol`.
pub fn fit_rate_with(levels: &[usize], gaps: &[f64], zero_tol: f64) -> Result<RateFit> {
    if levels.len() != gaps.len() {
        return Err(Error::DimensionMismatch {
            expected: levels.len(),
            found: gaps.len(),
        });
    }
    let finite = levels.iter().zip(gaps).find(|(_, &g)| g <= zero_tol).map(|(&d, _)| d);
    let pts: Vec<(f64, f64)> = levels
        .iter()
        .zip(gaps)
        .filter(|(&d, &g)| d >= 1 && g > zero_tol)
        .map(|(&d, &g)| ((d as f64).ln(), g.ln()))
        .collect();
    if pts.len() < 3 {
        return match finite {
            Some(level) => Ok(RateFit::FiniteConvergence { level }),
            None => Err(Error::InsufficientData(format!("{} usable gaps, need 3", pts.len()))),
        };
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all usable levels coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(RateFit::Fitted {
        slope,
        intercept,
        r_squared,
        points: pts.len(),
        finite_convergence: finite,
    })
}
