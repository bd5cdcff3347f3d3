//! Dispersion relations: principal-value quadrature, the standard and
//! generalized Kramers-Kronig transforms, residual reports, and weak-limit
//! pairings of the distributions that appear as γ → 0 limits of the Drude
//! response.
//!
//! Distributions (δ, δ′) are never sampled pointwise. They only enter through
//! smooth mollified families or analytic pairings with test functions.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::{drude_imag_part, Dielectric, DrudeParams, OscillatorSet};
use crate::quad::{self, QuadError, QuadOptions, QuadResult};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DispersionError {
    #[error("pole {pole} must lie strictly inside ({a}, {b})")]
    PoleOutsideInterval { pole: f64, a: f64, b: f64 },
    #[error("principal value did not converge: {0}")]
    NonConvergence(#[from] QuadError),
    #[error("Im χ decays as ω^{exponent:.2}, slower than ω^-2; the dispersion integral diverges")]
    TailDivergence { exponent: f64 },
    #[error("INADMISSIBLE: {0}")]
    Inadmissible(String),
    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("frequency grid needs >= {min} strictly increasing positive nodes")]
    InvalidGrid { min: usize },
    #[error("weak-limit quadrature failed at γ = {gamma:e}: {source}")]
    WeakLimit {
        gamma: f64,
        #[source]
        source: QuadError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KkOptions {
    /// Relative quadrature tolerance.
    pub tol: f64,
    /// Frequencies where the integrand has structure (resonances, edges).
    pub hints: Vec<f64>,
}

impl Default for KkOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            hints: Vec::new(),
        }
    }
}

impl KkOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            hints: Vec::new(),
        }
    }

    fn quad(&self) -> QuadOptions {
        QuadOptions {
            rel_tol: self.tol,
            abs_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

/// `PV ∫_a^b g(x)/(x − c) dx` for smooth `g`.
///
/// The symmetric excision `(c − ε, c + ε)` is folded onto `t = |x − c|`, where
/// the paired integrand `[g(c + t) − g(c − t)]/t` stays bounded as `t → 0`;
/// the `ε → 0` limit is then an ordinary integral. The rest of the interval
/// is integrated directly.
pub fn pv_integral<G>(g: G, pole: f64, a: f64, b: f64, tol: f64) -> Result<QuadResult, DispersionError>
where
    G: Fn(f64) -> f64,
{
    pv_integral_with_breaks(g, pole, a, b, &[], &QuadOptions::relative(tol))
}

pub fn pv_integral_with_breaks<G>(
    g: G,
    pole: f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<QuadResult, DispersionError>
where
    G: Fn(f64) -> f64,
{
    if !(a < pole && pole < b) {
        return Err(DispersionError::PoleOutsideInterval { pole, a, b });
    }
    let half = (pole - a).min(b - pole);
    let mut inner = vec![0.0];
    inner.extend(
        breaks
            .iter()
            .map(|&x| (x - pole).abs())
            .filter(|&t| t > 0.0 && t < half),
    );
    inner.push(half);
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    // The paired difference carries roundoff of order eps·|g|/t, so the
    // symmetric part can only be resolved relative to the size of g itself.
    let scale = (0..=8)
        .map(|k| {
            let t = half * k as f64 / 8.0;
            g(pole + t).abs().max(g(pole - t).abs())
        })
        .fold(0.0, f64::max);
    let sym_opts = QuadOptions {
        abs_tol: opts.abs_tol.max((1e-2 * opts.rel_tol).max(1e4 * f64::EPSILON) * scale),
        ..*opts
    };
    let symmetric = quad::integrate_with_breaks(|t| (g(pole + t) - g(pole - t)) / t, &inner, &sym_opts)?;

    let (lo, hi) = if pole - a > b - pole {
        (a, pole - half)
    } else {
        (pole + half, b)
    };
    if hi <= lo {
        return Ok(symmetric);
    }
    let mut outer = vec![lo];
    outer.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
    outer.push(hi);
    outer.sort_by(f64::total_cmp);
    outer.dedup();
    let rest = quad::integrate_with_breaks(|x| g(x) / (x - pole), &outer, opts)?;
    Ok(symmetric.merge(rest))
}

/// `PV ∫_0^∞ h(x)/(x − c) dx` with `c > 0`.
fn pv_half_line<H>(h: H, pole: f64, breaks: &[f64], opts: &QuadOptions) -> Result<QuadResult, DispersionError>
where
    H: Fn(f64) -> f64,
{
    let near = pv_integral_with_breaks(&h, pole, 0.0, 2.0 * pole, breaks, opts)?;
    let far_breaks: Vec<f64> = breaks.iter().copied().filter(|&x| x > 2.0 * pole).collect();
    let far = quad::integrate_semi_infinite_with_breaks(|x| h(x) / (x - pole), 2.0 * pole, &far_breaks, opts)?;
    Ok(near.merge(far))
}

/// Transform value with quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KkValue {
    pub value: f64,
    pub evals: usize,
    pub err_est: f64,
}

impl KkValue {
    fn exact(value: f64) -> Self {
        Self {
            value,
            evals: 0,
            err_est: 0.0,
        }
    }
}

/// Log-slope of `|f|` between `x` and `10x`.
fn decay_exponent<F: Fn(f64) -> f64>(f: &F, x: f64) -> Option<f64> {
    let lo = f(x).abs();
    let hi = f(10.0 * x).abs();
    if lo == 0.0 || hi == 0.0 {
        None
    } else {
        Some((hi / lo).log10())
    }
}

fn check_tail<F: Fn(f64) -> f64>(imchi: &F, xi: f64, hints: &[f64]) -> Result<(), DispersionError> {
    let scale = hints.iter().copied().fold(xi.max(1.0), f64::max);
    if let Some(p) = decay_exponent(imchi, 1e6 * scale) {
        if p > -2.0 + 0.05 {
            return Err(DispersionError::TailDivergence { exponent: p });
        }
    }
    Ok(())
}

/// Standard relation: `χ(iξ) = (2/π) ∫_0^∞ ω Im χ(ω)/(ω² + ξ²) dω`.
///
/// `imchi` is given on `ω > 0` and understood as odd. The caller vouches that
/// χ has at most a first-order pole at the origin.
pub fn kk_imag_axis_standard<F>(imchi: F, xi: f64, opts: &KkOptions) -> Result<KkValue, DispersionError>
where
    F: Fn(f64) -> f64,
{
    if !(xi > 0.0) {
        return Err(DispersionError::NonPositiveFrequency(xi));
    }
    check_tail(&imchi, xi, &opts.hints)?;
    let mut breaks = opts.hints.clone();
    breaks.push(xi);
    breaks.sort_by(f64::total_cmp);
    let r = quad::integrate_semi_infinite_with_breaks(
        |w| w * imchi(w) / (w * w + xi * xi),
        0.0,
        &breaks,
        &opts.quad(),
    )?;
    Ok(KkValue {
        value: 2.0 / PI * r.value,
        evals: r.evals,
        err_est: 2.0 / PI * r.abs_err,
    })
}

fn resonance_hints(s: &OscillatorSet) -> Vec<f64> {
    let mut h: Vec<f64> = s
        .oscillators
        .iter()
        .flat_map(|o| {
            let w = o.damping.max(1e-6 * o.resonance);
            [o.resonance - w, o.resonance, o.resonance + w]
        })
        .filter(|&x| x > 0.0)
        .collect();
    h.sort_by(f64::total_cmp);
    h.dedup();
    h
}

fn plasma_like(d: &Dielectric) -> Result<OscillatorSet, DispersionError> {
    match d {
        Dielectric::Plasma(p) => Ok(OscillatorSet::from(*p)),
        Dielectric::Generalized(s) => Ok(s.clone()),
        Dielectric::Drude(_) => Err(DispersionError::Inadmissible(
            "the generalized relation applies to plasma-like susceptibilities; use the standard relation for Drude"
                .into(),
        )),
    }
}

/// Generalized relation, imaginary axis:
/// `χ(iξ) = (2/π) ∫_0^∞ ω Im χ(ω)/(ω² + ξ²) dω + ωp²/ξ²`.
pub fn kk_imag_axis_generalized(chi: &Dielectric, xi: f64, opts: &KkOptions) -> Result<KkValue, DispersionError> {
    let s = plasma_like(chi)?;
    if !(xi > 0.0) {
        return Err(DispersionError::NonPositiveFrequency(xi));
    }
    let pole_term = s.plasma_term_sq() / (xi * xi);
    if s.oscillators.is_empty() {
        // Im χ vanishes identically on the real axis.
        return Ok(KkValue::exact(pole_term));
    }
    let mut o = opts.clone();
    o.hints.extend(resonance_hints(&s));
    let integral = kk_imag_axis_standard(|w| s.imag_part(w), xi, &o)?;
    Ok(KkValue {
        value: integral.value + pole_term,
        ..integral
    })
}

/// Generalized relation, real part from imaginary part:
/// `Re χ(ω) = (1/π) P∫ Im χ(ξ)/(ξ − ω) dξ − ωp²/ω²`.
pub fn kk_real_from_imag_generalized(s: &OscillatorSet, omega: f64, opts: &KkOptions) -> Result<KkValue, DispersionError> {
    if !(omega > 0.0) {
        return Err(DispersionError::NonPositiveFrequency(omega));
    }
    let pole_term = -s.plasma_term_sq() / (omega * omega);
    if s.oscillators.is_empty() {
        return Ok(KkValue::exact(pole_term));
    }
    let mut breaks = resonance_hints(s);
    breaks.extend(opts.hints.iter().copied());
    // Odd Im χ folds onto the half line with weight 2ξ/(ξ + ω).
    let r = pv_half_line(
        |x| s.imag_part(x) * 2.0 * x / (x + omega),
        omega,
        &breaks,
        &opts.quad(),
    )?;
    Ok(KkValue {
        value: r.value / PI + pole_term,
        evals: r.evals,
        err_est: r.abs_err / PI,
    })
}

/// Generalized relation, imaginary part from real part, with the numerator
/// `Re χ(ξ) + 1 + ωp²/ξ²` exactly as written in the relation. The constant
/// contributes nothing to a symmetric principal value over the real line.
pub fn kk_imag_from_real_generalized(s: &OscillatorSet, omega: f64, opts: &KkOptions) -> Result<KkValue, DispersionError> {
    if !(omega > 0.0) {
        return Err(DispersionError::NonPositiveFrequency(omega));
    }
    let wp2 = s.plasma_term_sq();
    let numerator = |x: f64| s.real_part(x) + 1.0 + wp2 / (x * x);
    let mut breaks = resonance_hints(s);
    breaks.extend(opts.hints.iter().copied());
    // Even numerator folds onto the half line with weight 2ω/(ξ + ω).
    let r = pv_half_line(
        |x| numerator(x) * 2.0 * omega / (x + omega),
        omega,
        &breaks,
        &opts.quad(),
    )?;
    Ok(KkValue {
        value: -r.value / PI,
        evals: r.evals,
        err_est: r.abs_err / PI,
    })
}

/// Interpolation nodes for residual reports and sampled spectra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGrid {
    nodes: Vec<f64>,
    pub tail: TailPolicy,
}

/// Continuation of sampled data beyond the last node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailPolicy {
    /// Power law fitted to the samples in the last decade of the grid.
    #[default]
    FitLastDecade,
    PowerLaw { exponent: f64 },
}

impl FrequencyGrid {
    pub const MIN_NODES: usize = 16;

    pub fn new(nodes: Vec<f64>, tail: TailPolicy) -> Result<Self, DispersionError> {
        let ok = nodes.len() >= Self::MIN_NODES
            && nodes[0] > 0.0
            && nodes.iter().all(|x| x.is_finite())
            && nodes.windows(2).all(|w| w[1] > w[0]);
        if !ok {
            return Err(DispersionError::InvalidGrid { min: Self::MIN_NODES });
        }
        Ok(Self { nodes, tail })
    }

    pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Result<Self, DispersionError> {
        if !(lo > 0.0 && hi > lo) || count < 2 {
            return Err(DispersionError::InvalidGrid { min: Self::MIN_NODES });
        }
        let step = (hi / lo).ln() / (count - 1) as f64;
        let nodes = (0..count).map(|i| lo * (step * i as f64).exp()).collect();
        Self::new(nodes, TailPolicy::default())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// Piecewise power-law (log-log) interpolation, linear where a sample is zero.
pub fn interpolate_loglog(nodes: &[f64], values: &[f64], x: f64) -> f64 {
    let i = match nodes.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(i) => return values[i],
        Err(0) => return values[0],
        Err(i) if i >= nodes.len() => return values[nodes.len() - 1],
        Err(i) => i - 1,
    };
    let (x0, x1, y0, y1) = (nodes[i], nodes[i + 1], values[i], values[i + 1]);
    if y0 > 0.0 && y1 > 0.0 {
        let p = (y1 / y0).ln() / (x1 / x0).ln();
        y0 * (x / x0).powf(p)
    } else {
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Exponent of `y ∝ x^p` fitted by least squares over the last decade.
pub fn fit_tail_exponent(nodes: &[f64], values: &[f64]) -> Option<f64> {
    let last = *nodes.last()?;
    let pts: Vec<(f64, f64)> = nodes
        .iter()
        .zip(values)
        .filter(|(x, y)| **x >= last / 10.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `(2/π) ∫ ω Im χ(ω)/(ω² + ξ²) dω` over the grid support plus its tail, for
/// samples of Im χ on `grid`. The region below the first node is the caller's.
pub fn kk_imag_axis_sampled(
    grid: &FrequencyGrid,
    values: &[f64],
    xi: f64,
    opts: &KkOptions,
) -> Result<KkValue, DispersionError> {
    if !(xi > 0.0) {
        return Err(DispersionError::NonPositiveFrequency(xi));
    }
    let nodes = grid.nodes();
    let kernel = |w: f64| w / (w * w + xi * xi);
    let body = quad::integrate_with_breaks(
        |w| kernel(w) * interpolate_loglog(nodes, values, w),
        nodes,
        &opts.quad(),
    )?;
    let last = *nodes.last().unwrap_or(&0.0);
    let last_value = *values.last().unwrap_or(&0.0);
    let tail = if last_value == 0.0 {
        QuadResult::default()
    } else {
        let p = match grid.tail {
            TailPolicy::PowerLaw { exponent } => exponent,
            TailPolicy::FitLastDecade => fit_tail_exponent(nodes, values).unwrap_or(0.0),
        };
        if p >= 0.0 {
            return Err(DispersionError::TailDivergence { exponent: p });
        }
        quad::integrate_semi_infinite(
            |w| kernel(w) * last_value * (w / last).powf(p),
            last,
            &opts.quad(),
        )?
    };
    let total = body.merge(tail);
    Ok(KkValue {
        value: 2.0 / PI * total.value,
        evals: total.evals,
        err_est: 2.0 / PI * total.abs_err,
    })
}

/// Which dispersion relation a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Standard,
    Generalized,
}

/// Which closed-form quantity the transform reproduces at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// χ(iξ) with the node read as ξ.
    ImagAxis,
    /// Re χ(ω) from Im χ.
    RealPart,
    /// Im χ(ω) from Re χ.
    ImagPart,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KkRow {
    pub node: f64,
    pub closed_form: f64,
    pub transform: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub quad_evals: usize,
    pub quad_err_est: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KkReport {
    pub relation: Relation,
    pub quantity: Quantity,
    pub rows: Vec<KkRow>,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub failed_nodes: usize,
}

impl KkReport {
    fn assemble(relation: Relation, quantity: Quantity, rows: Vec<KkRow>) -> Self {
        let ok = rows.iter().filter(|r| r.error.is_none());
        let max_abs_residual = ok.clone().map(|r| r.abs_residual).fold(0.0, f64::max);
        let max_rel_residual = ok.map(|r| r.rel_residual).fold(0.0, f64::max);
        let failed_nodes = rows.iter().filter(|r| r.error.is_some()).count();
        Self {
            relation,
            quantity,
            rows,
            max_abs_residual,
            max_rel_residual,
            failed_nodes,
        }
    }

    /// CSV with header
    /// `node_eV,closed_form,transform,abs_residual,rel_residual,quad_evals,quad_err_est`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node_eV,closed_form,transform,abs_residual,rel_residual,quad_evals,quad_err_est\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{},{:e}",
                r.node, r.closed_form, r.transform, r.abs_residual, r.rel_residual, r.quad_evals, r.quad_err_est
            );
        }
        out
    }

    pub fn passes(&self, max_rel: f64) -> bool {
        self.failed_nodes == 0 && self.max_rel_residual <= max_rel
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportOptions {
    pub kk: KkOptions,
    /// Lower bound on the relative-residual denominator.
    pub floor: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            kk: KkOptions::default(),
            floor: 1e-12,
        }
    }
}

fn row(node: f64, closed: f64, t: Result<KkValue, DispersionError>, floor: f64) -> KkRow {
    match t {
        Ok(v) => {
            let abs = (v.value - closed).abs();
            KkRow {
                node,
                closed_form: closed,
                transform: v.value,
                abs_residual: abs,
                rel_residual: abs / closed.abs().max(floor),
                quad_evals: v.evals,
                quad_err_est: v.err_est,
                error: None,
            }
        }
        Err(e) => KkRow {
            node,
            closed_form: closed,
            transform: f64::NAN,
            abs_residual: f64::NAN,
            rel_residual: f64::NAN,
            quad_evals: 0,
            quad_err_est: f64::NAN,
            error: Some(e.to_string()),
        },
    }
}

/// Compare a dispersion transform against the model's closed-form χ(iξ) at
/// every grid node.
///
/// The standard relation is refused for plasma-like models: a second-order
/// pole at ω = 0 is outside its domain of validity.
pub fn kk_residual_report(
    model: &Dielectric,
    grid: &FrequencyGrid,
    relation: Relation,
    opts: &ReportOptions,
) -> Result<KkReport, DispersionError> {
    let rows: Vec<KkRow> = match (relation, model) {
        (Relation::Standard, Dielectric::Drude(p)) => grid
            .nodes()
            .par_iter()
            .map(|&xi| {
                let closed = model.chi_imag_axis(xi).unwrap_or(f64::NAN);
                let mut kk = opts.kk.clone();
                kk.hints.push(p.gamma);
                row(xi, closed, kk_imag_axis_standard(|w| drude_imag_part(p, w), xi, &kk), opts.floor)
            })
            .collect(),
        (Relation::Standard, Dielectric::Generalized(s)) if s.plasma_freq == 0.0 => grid
            .nodes()
            .par_iter()
            .map(|&xi| {
                let closed = model.chi_imag_axis(xi).unwrap_or(f64::NAN);
                let mut kk = opts.kk.clone();
                kk.hints.extend(resonance_hints(s));
                row(xi, closed, kk_imag_axis_standard(|w| s.imag_part(w), xi, &kk), opts.floor)
            })
            .collect(),
        (Relation::Standard, _) => {
            return Err(DispersionError::Inadmissible(
                "the standard Kramers-Kronig relation is not applicable to a susceptibility with a second-order pole at ω = 0 (plasma-like); use the generalized relation".into(),
            ))
        }
        (Relation::Generalized, Dielectric::Drude(_)) => {
            plasma_like(model)?;
            unreachable!()
        }
        (Relation::Generalized, _) => grid
            .nodes()
            .par_iter()
            .map(|&xi| {
                let closed = model.chi_imag_axis(xi).unwrap_or(f64::NAN);
                row(xi, closed, kk_imag_axis_generalized(model, xi, &opts.kk), opts.floor)
            })
            .collect(),
    };
    Ok(KkReport::assemble(relation, Quantity::ImagAxis, rows))
}

/// Real-axis round trip of the generalized relation for an oscillator set:
/// each node is read as ω and either Re χ or Im χ is reconstructed.
pub fn kk_real_axis_report(
    s: &OscillatorSet,
    grid: &FrequencyGrid,
    quantity: Quantity,
    opts: &ReportOptions,
) -> KkReport {
    let rows = grid
        .nodes()
        .par_iter()
        .map(|&w| match quantity {
            Quantity::RealPart => row(w, s.real_part(w), kk_real_from_imag_generalized(s, w, &opts.kk), opts.floor),
            Quantity::ImagPart => row(w, s.imag_part(w), kk_imag_from_real_generalized(s, w, &opts.kk), opts.floor),
            Quantity::ImagAxis => row(
                w,
                crate::models::chi_generalized_imag_axis(s, w).unwrap_or(f64::NAN),
                kk_imag_axis_generalized(&Dielectric::Generalized(s.clone()), w, &opts.kk),
                opts.floor,
            ),
        })
        .collect();
    KkReport::assemble(Relation::Generalized, quantity, rows)
}

// ---------------------------------------------------------------------------
// Weak limits
// ---------------------------------------------------------------------------

/// `φ(ω) = P(ω) · exp(−ω²/(2s²))` with polynomial coefficients `P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction {
    /// Coefficients of `P`, lowest order first.
    pub poly: Vec<f64>,
    pub width: f64,
}

impl TestFunction {
    pub fn new(poly: Vec<f64>, width: f64) -> Self {
        Self { poly, width }
    }

    pub fn eval(&self, w: f64) -> f64 {
        let p = self.poly.iter().rev().fold(0.0, |acc, c| acc * w + c);
        p * (-0.5 * w * w / (self.width * self.width)).exp()
    }

    /// φ′(0); the Gaussian factor has zero slope at the origin.
    pub fn derivative_at_zero(&self) -> f64 {
        self.poly.get(1).copied().unwrap_or(0.0)
    }
}

pub const TEST_SUITE_VERSION: &str = "poly-gauss-v1";

/// The fixed suite of 20 test functions: five polynomials times four widths.
pub fn test_suite() -> Vec<TestFunction> {
    let polys: [&[f64]; 5] = [
        &[0.0, 1.0],
        &[1.0, 1.0],
        &[0.0, 1.0, 0.5],
        &[1.0, 0.0, 0.5],
        &[0.5, -1.0, 0.0, 0.25],
    ];
    let widths = [0.5, 1.0, 2.0, 4.0];
    polys
        .iter()
        .flat_map(|p| widths.iter().map(move |&s| TestFunction::new(p.to_vec(), s)))
        .collect()
}

/// `π ωp² φ′(0)`: the action of `−π ωp² δ′` and of `π ωp² δ(ω)/ω` on φ.
pub fn predicted_weak_limit(plasma_freq: f64, phi_prime_at_zero: f64) -> f64 {
    PI * plasma_freq * plasma_freq * phi_prime_at_zero
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakLimitPoint {
    pub gamma: f64,
    pub value: f64,
    pub err_est: f64,
}

/// `I(γ) = ∫ Im χ_γ(ω) φ(ω) dω` for each γ of a decreasing sequence.
///
/// With ω = γu the Lorentzian core becomes `1/(u² + 1)` and the integral is
/// `ωp² ∫_0^∞ [φ(γu) − φ(−γu)] / (γu (u² + 1)) du`.
pub fn weak_limit_drude<F>(
    plasma_freq: f64,
    phi: F,
    gammas: &[f64],
    tol: f64,
) -> Result<Vec<WeakLimitPoint>, DispersionError>
where
    F: Fn(f64) -> f64,
{
    gammas
        .iter()
        .map(|&gamma| {
            // γ is validated through the Drude constructor.
            let _ = DrudeParams::new(plasma_freq, gamma).map_err(|e| DispersionError::Inadmissible(e.to_string()))?;
            let decades = (1e3 / gamma).log10().ceil().max(1.0) as i32;
            let breaks: Vec<f64> = (0..=decades).map(|k| 10f64.powi(k)).collect();
            let r = quad::integrate_semi_infinite_with_breaks(
                |u| {
                    let x = gamma * u;
                    (phi(x) - phi(-x)) / (x * (u * u + 1.0))
                },
                0.0,
                &breaks,
                &QuadOptions::relative(tol),
            )
            .map_err(|source| DispersionError::WeakLimit { gamma, source })?;
            let wp2 = plasma_freq * plasma_freq;
            Ok(WeakLimitPoint {
                gamma,
                value: wp2 * r.value,
                err_est: wp2 * r.abs_err,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MollifierFamily {
    Lorentzian,
    Gaussian,
}

/// Smooth nascent delta function δ_η of width η.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MollifiedDelta {
    pub width: f64,
    pub family: MollifierFamily,
}

impl MollifiedDelta {
    pub fn new(width: f64, family: MollifierFamily) -> Self {
        Self { width, family }
    }

    /// Unit-width profile at `u = ω/η`: `(δ(u), u δ′(u))`.
    fn unit(&self, u: f64) -> (f64, f64) {
        match self.family {
            MollifierFamily::Lorentzian => {
                let d = 1.0 / (PI * (1.0 + u * u));
                (d, -2.0 * u * u / (1.0 + u * u) * d)
            }
            MollifierFamily::Gaussian => {
                let d = (-0.5 * u * u).exp() / (2.0 * PI).sqrt();
                (d, -u * u * d)
            }
        }
    }

    pub fn delta(&self, w: f64) -> f64 {
        self.unit(w / self.width).0 / self.width
    }

    pub fn delta_prime(&self, w: f64) -> f64 {
        let u = w / self.width;
        if u == 0.0 {
            return 0.0;
        }
        self.unit(u).1 / (u * self.width * self.width)
    }

    fn pair<K: Fn(f64) -> f64>(&self, kernel: K, tol: f64) -> Result<QuadResult, QuadError> {
        // Lorentzian tails decay algebraically, so integrate to ±∞.
        let opts = QuadOptions::relative(tol);
        let eta = self.width;
        let mut breaks = vec![1.0, 10.0, 100.0, 1.0 / eta, 10.0 / eta];
        breaks.sort_by(f64::total_cmp);
        let pos = quad::integrate_semi_infinite_with_breaks(&kernel, 0.0, &breaks, &opts)?;
        let neg = quad::integrate_semi_infinite_with_breaks(|u| kernel(-u), 0.0, &breaks, &opts)?;
        Ok(pos.merge(neg))
    }

    /// `∫ δ_η φ`.
    pub fn pair_delta<F: Fn(f64) -> f64>(&self, phi: F, tol: f64) -> Result<f64, QuadError> {
        let eta = self.width;
        self.pair(|u| self.unit(u).0 * phi(eta * u), tol).map(|r| r.value)
    }

    /// `−∫ δ′_η φ`, the mollified action of `−δ′`.
    pub fn pair_minus_delta_prime<F: Fn(f64) -> f64>(&self, phi: F, tol: f64) -> Result<f64, QuadError> {
        let eta = self.width;
        self.pair(
            |u| {
                if u == 0.0 {
                    0.0
                } else {
                    -self.unit(u).1 / u * phi(eta * u) / eta
                }
            },
            tol,
        )
        .map(|r| r.value)
    }

    /// `∫ δ_η(ω) [φ(ω) − φ(−ω)]/(2ω) dω`, the mollified action of `δ(ω)/ω`.
    pub fn pair_delta_over_omega<F: Fn(f64) -> f64>(&self, phi: F, tol: f64) -> Result<f64, QuadError> {
        let eta = self.width;
        self.pair(
            |u| {
                let x = eta * u;
                self.unit(u).0 * (phi(x) - phi(-x)) / (2.0 * x)
            },
            tol,
        )
        .map(|r| r.value)
    }

    /// `∫ [ω δ′_η(ω) + δ_η(ω)] φ(ω) dω`.
    pub fn pair_identity<F: Fn(f64) -> f64>(&self, phi: F, tol: f64) -> Result<QuadResult, QuadError> {
        let eta = self.width;
        self.pair(
            |u| {
                let (d, ud) = self.unit(u);
                (ud + d) * phi(eta * u)
            },
            tol,
        )
    }
}

/// `∫ [ω δ′_η + δ_η] φ` for each mollifier of a sequence of shrinking width.
pub fn mollified_delta_identity<F>(phi: F, deltas: &[MollifiedDelta], tol: f64) -> Result<Vec<f64>, DispersionError>
where
    F: Fn(f64) -> f64,
{
    deltas
        .iter()
        .map(|d| d.pair_identity(&phi, tol).map(|r| r.value).map_err(DispersionError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Oscillator, PlasmaParams};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn damped_set() -> OscillatorSet {
        OscillatorSet::new(1.0, vec![Oscillator::new(1.0, 0.1, 1.0)]).unwrap()
    }

    #[test]
    fn pv_examples() {
        let r = pv_integral(|_| 1.0, 0.0, -1.0, 1.0, 1e-12).unwrap();
        assert_eq!(r.value, 0.0);
        let r = pv_integral(|x| x * x, 1.0, -2.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(r.value, 4.0 - 3f64.ln(), max_relative = 1e-12);
        let r = pv_integral(|_| 1.0, 1.0, 0.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(matches!(
            pv_integral(|_| 1.0, 3.0, 0.0, 2.0, 1e-12),
            Err(DispersionError::PoleOutsideInterval { .. })
        ));
    }

    #[test]
    fn pv_closed_form_oracle() {
        // PV ∫_0^3 e^x/(x − 1) dx = e·[Ei(2) − Ei(−1)]; Ei values from series.
        fn ei(x: f64) -> f64 {
            let mut sum = 0.0;
            let mut term = 1.0;
            for k in 1..200 {
                term *= x / k as f64;
                sum += term / k as f64;
            }
            0.577_215_664_901_532_9 + x.abs().ln() + sum
        }
        let expected = std::f64::consts::E * (ei(2.0) - ei(-1.0));
        let r = pv_integral(f64::exp, 1.0, 0.0, 3.0, 1e-12).unwrap();
        assert_relative_eq!(r.value, expected, max_relative = 1e-11);
    }

    proptest! {
        #[test]
        fn pv_antisymmetric_under_negation(c in -0.9f64..0.9, k in 0.1f64..3.0) {
            let f = |x: f64| (k * x).sin() + x * x;
            let a = pv_integral(f, c, -1.0, 1.0, 1e-12).unwrap().value;
            let b = pv_integral(|x| -f(x), c, -1.0, 1.0, 1e-12).unwrap().value;
            prop_assert_eq!(a, -b);
        }

        #[test]
        fn pv_vanishes_on_odd_integrand(c in -5.0f64..5.0, h in 0.1f64..4.0, k in 0.1f64..3.0) {
            // g even about c makes g(x)/(x − c) odd about c.
            let r = pv_integral(|x| ((x - c) * k).cos(), c, c - h, c + h, 1e-12).unwrap();
            prop_assert!(r.value.abs() < 1e-13);
        }
    }

    #[test]
    fn standard_relation_on_drude() {
        let p = DrudeParams::new(1.0, 1.0).unwrap();
        let v = kk_imag_axis_standard(|w| drude_imag_part(&p, w), 1.0, &KkOptions::default()).unwrap();
        assert_relative_eq!(v.value, 0.5, max_relative = 1e-9);
        let zero = kk_imag_axis_standard(|_| 0.0, 1.0, &KkOptions::default()).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn standard_relation_narrow_oscillator_limit() {
        let xi = 0.7;
        let mut prev = f64::INFINITY;
        for g in [1e-1, 1e-2, 1e-3] {
            let s = OscillatorSet::new(0.0, vec![Oscillator::new(2.0, g, 3.0)]).unwrap();
            let mut opts = KkOptions::default();
            opts.hints = resonance_hints(&s);
            let v = kk_imag_axis_standard(|w| s.imag_part(w), xi, &opts).unwrap();
            // the exact transform of a damped oscillator is its imaginary-axis form
            assert_relative_eq!(v.value, 3.0 / (4.0 + xi * xi + g * xi), max_relative = 1e-8);
            let gap = (v.value - 3.0 / (4.0 + xi * xi)).abs();
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn standard_relation_rejects_slow_tail() {
        let e = kk_imag_axis_standard(|w| 1.0 / w, 1.0, &KkOptions::default());
        assert!(matches!(e, Err(DispersionError::TailDivergence { .. })));
    }

    #[test]
    fn generalized_imag_axis() {
        let plasma = Dielectric::Plasma(PlasmaParams::new(9.0).unwrap());
        let v = kk_imag_axis_generalized(&plasma, 0.5, &KkOptions::default()).unwrap();
        assert_eq!(v.value, 81.0 / 0.25);
        let empty = Dielectric::Generalized(OscillatorSet::new(9.0, vec![]).unwrap());
        assert_eq!(kk_imag_axis_generalized(&empty, 0.5, &KkOptions::default()).unwrap().value, v.value);

        let s = damped_set();
        let v = kk_imag_axis_generalized(&Dielectric::Generalized(s.clone()), 1.0, &KkOptions::default()).unwrap();
        let closed = crate::models::chi_generalized_imag_axis(&s, 1.0).unwrap();
        assert!((v.value - closed).abs() / closed < 1e-6);
        let drude = Dielectric::Drude(DrudeParams::new(9.0, 0.1).unwrap());
        assert!(matches!(
            kk_imag_axis_generalized(&drude, 1.0, &KkOptions::default()),
            Err(DispersionError::Inadmissible(_))
        ));
    }

    #[test]
    fn real_from_imag() {
        let s = damped_set();
        let v = kk_real_from_imag_generalized(&s, 0.5, &KkOptions::default()).unwrap();
        assert!((v.value - s.real_part(0.5)).abs() / s.real_part(0.5).abs() < 1e-6);
        let k0 = OscillatorSet::new(3.0, vec![]).unwrap();
        assert_eq!(kk_real_from_imag_generalized(&k0, 2.0, &KkOptions::default()).unwrap().value, -9.0 / 4.0);
    }

    #[test]
    fn imag_from_real() {
        let s = OscillatorSet::new(2.0, vec![Oscillator::new(3.0, 0.4, 5.0)]).unwrap();
        let v = kk_imag_from_real_generalized(&s, 3.0, &KkOptions::default()).unwrap();
        let closed = 5.0 / (0.4 * 3.0);
        assert!((v.value - closed).abs() / closed < 1e-6, "{}", v.value);
        let k0 = OscillatorSet::new(3.0, vec![]).unwrap();
        let v = kk_imag_from_real_generalized(&k0, 2.0, &KkOptions::default()).unwrap();
        assert!(v.value.abs() < 1e-8, "{}", v.value);
    }

    #[test]
    fn residual_report_admissibility() {
        let grid = FrequencyGrid::log_spaced(0.01, 100.0, 32).unwrap();
        let plasma = Dielectric::Plasma(PlasmaParams::new(9.0).unwrap());
        assert!(matches!(
            kk_residual_report(&plasma, &grid, Relation::Standard, &ReportOptions::default()),
            Err(DispersionError::Inadmissible(_))
        ));
        let r = kk_residual_report(&plasma, &grid, Relation::Generalized, &ReportOptions::default()).unwrap();
        assert_eq!(r.max_abs_residual, 0.0);
        let drude = Dielectric::Drude(DrudeParams::new(9.0, 0.035).unwrap());
        let r = kk_residual_report(&drude, &grid, Relation::Standard, &ReportOptions::default()).unwrap();
        assert!(r.max_rel_residual <= 1e-5, "{}", r.max_rel_residual);
        assert_eq!(r.rows.len(), 32);
        assert!(kk_residual_report(&drude, &grid, Relation::Generalized, &ReportOptions::default()).is_err());
        let csv = r.to_csv();
        assert!(csv.starts_with("node_eV,closed_form,transform,abs_residual,rel_residual,quad_evals,quad_err_est\n"));
        assert_eq!(csv.lines().count(), 33);
    }

    #[test]
    fn grid_validation() {
        assert!(FrequencyGrid::new(vec![1.0, 2.0, 3.0], TailPolicy::default()).is_err());
        let mut nodes: Vec<f64> = (1..=16).map(|i| i as f64).collect();
        assert!(FrequencyGrid::new(nodes.clone(), TailPolicy::default()).is_ok());
        nodes[5] = nodes[4];
        assert!(FrequencyGrid::new(nodes, TailPolicy::default()).is_err());
    }

    #[test]
    fn loglog_interpolation() {
        let nodes = [1.0, 10.0];
        let vals = [1.0, 1e-3];
        assert_relative_eq!(interpolate_loglog(&nodes, &vals, 10f64.sqrt()), 10f64.powf(-1.5), max_relative = 1e-14);
        let vals = [0.0, 1.0];
        assert_relative_eq!(interpolate_loglog(&nodes, &vals, 5.5), 0.5, max_relative = 1e-14);
        let nodes: Vec<f64> = (0..20).map(|i| 10f64.powf(i as f64 / 5.0)).collect();
        let vals: Vec<f64> = nodes.iter().map(|x| 2.0 * x.powf(-3.0)).collect();
        assert_relative_eq!(fit_tail_exponent(&nodes, &vals).unwrap(), -3.0, max_relative = 1e-12);
    }

    #[test]
    fn sampled_transform_matches_closed_form() {
        // Lorentz oscillator sampled densely; tail is ω^-3.
        let s = OscillatorSet::new(0.0, vec![Oscillator::new(2.0, 0.5, 3.0)]).unwrap();
        let exact = crate::models::chi_generalized_imag_axis(&s, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        // Error is dominated by log-log interpolation across the peak: O(step²).
        for n in [500, 1000, 2000, 4000] {
            let grid = FrequencyGrid::log_spaced(1e-2, 1e2, n).unwrap();
            let vals: Vec<f64> = grid.nodes().iter().map(|&w| s.imag_part(w)).collect();
            let v = kk_imag_axis_sampled(&grid, &vals, 1.0, &KkOptions::default()).unwrap();
            let rel = (v.value - exact).abs() / exact;
            assert!(rel < 0.3 * prev, "{n}: {rel}");
            prev = rel;
        }
        assert!(prev < 2e-5, "{prev}");
    }

    #[test]
    fn mollifiers_are_normalized() {
        for family in [MollifierFamily::Lorentzian, MollifierFamily::Gaussian] {
            for eta in [1.0, 1e-2] {
                let d = MollifiedDelta::new(eta, family);
                assert_relative_eq!(d.pair_delta(|_| 1.0, 1e-12).unwrap(), 1.0, max_relative = 1e-10);
                assert!(d.delta(0.3 * eta) > 0.0);
            }
        }
    }

    #[test]
    fn delta_prime_matches_finite_difference() {
        for family in [MollifierFamily::Lorentzian, MollifierFamily::Gaussian] {
            let d = MollifiedDelta::new(0.3, family);
            for w in [-0.7, -0.1, 0.05, 0.4] {
                let h = 1e-5;
                let fd = (d.delta(w + h) - d.delta(w - h)) / (2.0 * h);
                assert_relative_eq!(d.delta_prime(w), fd, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn identity_is_exact_for_constant() {
        for family in [MollifierFamily::Lorentzian, MollifierFamily::Gaussian] {
            let d = MollifiedDelta::new(0.1, family);
            let v = d.pair_identity(|_| 1.0, 1e-12).unwrap().value;
            assert!(v.abs() < 1e-10, "{v}");
        }
    }

    #[test]
    fn identity_closed_forms() {
        // Gaussian with cos: η² e^{−η²/2}.
        for eta in [0.3, 0.1, 1e-2] {
            let g = MollifiedDelta::new(eta, MollifierFamily::Gaussian).pair_identity(f64::cos, 1e-12).unwrap();
            assert_relative_eq!(g.value, eta * eta * (-0.5 * eta * eta).exp(), max_relative = 1e-7);
        }
        // Lorentzian against a Gaussian: ∫(1−u²)/(π(1+u²)²)·e^{−η²u²/2} du, from mpmath.
        for (eta, expected) in [(0.1, 0.070_538_880_374_535_83), (1e-2, 0.007_879_638_519_061_138)] {
            let l = MollifiedDelta::new(eta, MollifierFamily::Lorentzian)
                .pair_identity(|w: f64| (-0.5 * w * w).exp(), 1e-12)
                .unwrap();
            assert_relative_eq!(l.value, expected, max_relative = 1e-8);
        }
        let widths: Vec<MollifiedDelta> = [0.3, 0.1, 0.03, 0.01]
            .iter()
            .map(|&e| MollifiedDelta::new(e, MollifierFamily::Gaussian))
            .collect();
        let v = mollified_delta_identity(|w: f64| (-w * w).exp(), &widths, 1e-12).unwrap();
        assert!(v.windows(2).all(|p| p[1].abs() < p[0].abs()));
        assert!(v[3].abs() < 1e-3);
    }

    #[test]
    fn weak_limit_examples() {
        let gammas = [1e-2, 1e-3, 1e-4, 1e-5];
        let phi = |w: f64| w * (-w * w).exp();
        let pts = weak_limit_drude(1.0, phi, &gammas, 1e-12).unwrap();
        let errs: Vec<f64> = pts.iter().map(|p| (p.value - PI).abs()).collect();
        assert!(errs.windows(2).all(|e| e[1] < e[0]), "{errs:?}");
        assert!(errs[3] < 1e-4);
        let pts = weak_limit_drude(2.0, phi, &gammas, 1e-12).unwrap();
        assert!((pts[3].value - 4.0 * PI).abs() < 4e-4);
        let even = weak_limit_drude(1.0, |w: f64| (-w * w).exp(), &gammas, 1e-12).unwrap();
        assert!(even.iter().all(|p| p.value == 0.0));
    }

    #[test]
    fn suite_routes_agree() {
        let suite = test_suite();
        assert_eq!(suite.len(), 20);
        for f in &suite {
            let d = MollifiedDelta::new(1e-4, MollifierFamily::Gaussian);
            let a = d.pair_minus_delta_prime(|w| f.eval(w), 1e-12).unwrap();
            let b = d.pair_delta_over_omega(|w| f.eval(w), 1e-12).unwrap();
            let exact = f.derivative_at_zero();
            assert!((a - exact).abs() < 1e-6, "{a} {exact}");
            assert!((b - exact).abs() < 1e-6, "{b} {exact}");
        }
    }
}
