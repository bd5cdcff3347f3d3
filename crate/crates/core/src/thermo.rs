//! Casimir entropy `S = −∂F/∂T` and a low-temperature Nernst-theorem probe.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lifshitz::{free_energy, LifshitzError, LifshitzOptions, MirrorPair};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("relative temperature step must lie in (0, 0.5), got {0}")]
    InvalidStep(f64),
    #[error("temperature ladder must be strictly decreasing, reach <= {floor} K and hold >= {min_points} points")]
    InvalidLadder { floor: f64, min_points: usize },
    #[error("classification ambiguous: fit residual {residual:e} exceeds the gap {gap:e}")]
    Ambiguous { residual: f64, gap: f64 },
    #[error(transparent)]
    Lifshitz(#[from] LifshitzError),
}

/// Entropy per unit area with its finite-difference error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyEstimate {
    /// J/(m²·K).
    pub entropy: f64,
    /// Estimated error from step halving, J/(m²·K).
    pub err_est: f64,
    /// Relative step h of the coarse difference.
    pub rel_step: f64,
}

fn central_difference(
    pair: &MirrorPair,
    temperature: f64,
    h: f64,
    opts: &LifshitzOptions,
) -> Result<f64, LifshitzError> {
    let up = free_energy(pair, temperature * (1.0 + h), opts)?.free_energy;
    let down = free_energy(pair, temperature * (1.0 - h), opts)?.free_energy;
    Ok(-(up - down) / (2.0 * temperature * h))
}

/// `S(T)` from central differences at steps `h` and `h/2`, combined by one
/// Richardson step.
pub fn entropy(
    pair: &MirrorPair,
    temperature: f64,
    rel_step: f64,
    opts: &LifshitzOptions,
) -> Result<EntropyEstimate, ThermoError> {
    if !(rel_step > 0.0 && rel_step < 0.5) {
        return Err(ThermoError::InvalidStep(rel_step));
    }
    let coarse = central_difference(pair, temperature, rel_step, opts)?;
    let fine = central_difference(pair, temperature, 0.5 * rel_step, opts)?;
    let refined = (4.0 * fine - coarse) / 3.0;
    Ok(EntropyEstimate {
        entropy: refined,
        err_est: (refined - fine).abs(),
        rel_step,
    })
}

/// Entropy sampled on a decreasing temperature ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyCurve {
    pub temperatures: Vec<f64>,
    pub entropy: Vec<f64>,
    pub steps: Vec<f64>,
    pub err_est: Vec<f64>,
    /// Intercept of the linear fit through the three coldest points.
    pub extrapolated_zero: f64,
    pub extrapolated_uncertainty: f64,
}

/// Entropy on every rung of `ladder`, evaluated in parallel and assembled in
/// ladder order.
pub fn entropy_curve(
    pair: &MirrorPair,
    ladder: &[f64],
    rel_step: f64,
    opts: &LifshitzOptions,
) -> Result<EntropyCurve, ThermoError> {
    let points: Vec<Result<EntropyEstimate, ThermoError>> =
        ladder.par_iter().map(|&t| entropy(pair, t, rel_step, opts)).collect();
    let points = points.into_iter().collect::<Result<Vec<_>, _>>()?;
    let entropy: Vec<f64> = points.iter().map(|p| p.entropy).collect();
    let err_est: Vec<f64> = points.iter().map(|p| p.err_est).collect();
    let n = ladder.len();
    let (intercept, residual) = if n >= 3 {
        linear_fit(&ladder[n - 3..], &entropy[n - 3..])
    } else {
        (f64::NAN, f64::NAN)
    };
    let propagated = if n >= 3 {
        err_est[n - 3..].iter().cloned().fold(0.0, f64::max)
    } else {
        f64::NAN
    };
    Ok(EntropyCurve {
        temperatures: ladder.to_vec(),
        entropy,
        steps: vec![rel_step; n],
        err_est,
        extrapolated_zero: intercept,
        extrapolated_uncertainty: residual + propagated,
    })
}

/// Least-squares line `y = c0 + c1 x`; returns `(c0, rms residual)`.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let c0 = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (c0 + slope * a);
            r * r
        })
        .sum();
    (c0, (rss / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NernstVerdict {
    SatisfiesNernst,
    ViolatesNernst { plateau: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NernstReport {
    pub verdict: NernstVerdict,
    /// Entropy at the warmest ladder point, the classification scale.
    pub reference_entropy: f64,
    pub curve: EntropyCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NernstOptions {
    /// `|S(0)| ≤ tol·|S(T_ref)|` counts as vanishing.
    pub tol: f64,
    pub rel_step: f64,
    /// The ladder must reach at or below this temperature (K).
    pub floor: f64,
    pub min_points: usize,
}

impl Default for NernstOptions {
    fn default() -> Self {
        Self {
            tol: 1e-3,
            rel_step: 0.1,
            floor: 2.0,
            min_points: 6,
        }
    }
}

/// Default ladder: 300 K down to 2 K.
pub const DEFAULT_LADDER: [f64; 8] = [300.0, 100.0, 30.0, 10.0, 5.0, 3.0, 2.5, 2.0];

/// Classify whether the entropy extrapolates to zero as `T → 0`.
///
/// The warmest ladder point sets the scale; the intercept of a line through
/// the three coldest points is the extrapolated `S(0)`.
pub fn nernst_probe(
    pair: &MirrorPair,
    ladder: &[f64],
    nernst: &NernstOptions,
    opts: &LifshitzOptions,
) -> Result<NernstReport, ThermoError> {
    let decreasing = ladder.windows(2).all(|w| w[1] < w[0]);
    let reaches = ladder.last().is_some_and(|&t| t <= nernst.floor && t > 0.0);
    if !decreasing || !reaches || ladder.len() < nernst.min_points.max(3) {
        return Err(ThermoError::InvalidLadder {
            floor: nernst.floor,
            min_points: nernst.min_points,
        });
    }
    let curve = entropy_curve(pair, ladder, nernst.rel_step, opts)?;
    let reference = curve.entropy[0];
    let s0 = curve.extrapolated_zero;
    let threshold = nernst.tol * reference.abs();
    let gap = (s0.abs() - threshold).abs();
    if curve.extrapolated_uncertainty > gap {
        return Err(ThermoError::Ambiguous {
            residual: curve.extrapolated_uncertainty,
            gap,
        });
    }
    let verdict = if s0.abs() <= threshold {
        NernstVerdict::SatisfiesNernst
    } else {
        NernstVerdict::ViolatesNernst { plateau: s0 }
    };
    Ok(NernstReport {
        verdict,
        reference_entropy: reference,
        curve,
    })
}
