//! Tabulated complex refractive index: loading, ε(iξ) from data through the
//! dispersion integral, and oscillator fits above a frequency cutoff.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Read;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use thiserror::Error;

use crate::dispersion::{self, DispersionError, FrequencyGrid, KkOptions, TailPolicy};
use crate::models::{Dielectric, DrudeParams, ModelError, Oscillator, OscillatorSet, PlasmaParams};
use crate::quad::{self, QuadOptions};

#[derive(Debug, Error)]
pub enum OpticsError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: frequency {omega} is not above the previous row")]
    Monotonicity { line: usize, omega: f64 },
    #[error("table spans {decades:.2} decades; at least {required} are needed for the dispersion integral")]
    Coverage { decades: f64, required: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Dispersion(#[from] DispersionError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NkRow {
    pub omega: f64,
    pub n: f64,
    pub k: f64,
}

impl NkRow {
    pub fn eps_real(&self) -> f64 {
        self.n * self.n - self.k * self.k
    }

    pub fn eps_imag(&self) -> f64 {
        2.0 * self.n * self.k
    }

    pub fn eps(&self) -> Complex64 {
        Complex64::new(self.eps_real(), self.eps_imag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpticalDataTable {
    rows: Vec<NkRow>,
    pub provenance: String,
}

impl OpticalDataTable {
    pub fn new(rows: Vec<NkRow>, provenance: impl Into<String>) -> Result<Self, OpticsError> {
        for (i, r) in rows.iter().enumerate() {
            check_row(r, i + 1)?;
            if i > 0 && r.omega <= rows[i - 1].omega {
                return Err(OpticsError::Monotonicity {
                    line: i + 1,
                    omega: r.omega,
                });
            }
        }
        if rows.is_empty() {
            return Err(OpticsError::Invalid("table has no rows".into()));
        }
        Ok(Self {
            rows,
            provenance: provenance.into(),
        })
    }

    pub fn rows(&self) -> &[NkRow] {
        &self.rows
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.omega).collect()
    }

    pub fn first_omega(&self) -> f64 {
        self.rows[0].omega
    }

    pub fn last_omega(&self) -> f64 {
        self.rows[self.rows.len() - 1].omega
    }

    pub fn decades(&self) -> f64 {
        (self.last_omega() / self.first_omega()).log10()
    }
}

fn check_row(r: &NkRow, line: usize) -> Result<(), OpticsError> {
    let bad = |message: String| OpticsError::Parse { line, message };
    if !(r.omega > 0.0 && r.omega.is_finite()) {
        return Err(bad(format!("frequency must be positive, got {}", r.omega)));
    }
    if !(r.n > 0.0 && r.n.is_finite()) {
        return Err(bad(format!("n must be positive, got {}", r.n)));
    }
    if !(r.k >= 0.0 && r.k.is_finite()) {
        return Err(bad(format!("k must be non-negative, got {}", r.k)));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    /// One row per frequency: `ω n k`.
    ThreeColumn,
    /// Two blocks, `ω n` then `ω k`, each opened by a text header line
    /// (e.g. `omega,n` / `omega,k`), on identical frequencies.
    TwoColumnNk,
}

enum Line {
    Skip,
    Header,
    Numbers(Vec<f64>),
}

fn classify(raw: &str, line: usize) -> Result<Line, OpticsError> {
    let s = raw.trim();
    if s.is_empty() || s.starts_with('#') {
        return Ok(Line::Skip);
    }
    if s.starts_with(|c: char| c.is_ascii_alphabetic()) {
        return Ok(Line::Header);
    }
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|_| OpticsError::Parse {
                line,
                message: format!("cannot parse '{t}' as a number"),
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Line::Numbers)
}

fn expect_columns(v: &[f64], n: usize, line: usize) -> Result<(), OpticsError> {
    if v.len() != n {
        return Err(OpticsError::Parse {
            line,
            message: format!("expected {n} columns, found {}", v.len()),
        });
    }
    Ok(())
}

/// Parse an n/k table. Separators are commas or whitespace; `#` starts a
/// comment line. Rows must be strictly increasing in ω.
pub fn load_nk_table<R: Read>(
    mut source: R,
    format: TableFormat,
    provenance: impl Into<String>,
) -> Result<OpticalDataTable, OpticsError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    match format {
        TableFormat::ThreeColumn => {
            for (i, raw) in text.lines().enumerate() {
                let line = i + 1;
                match classify(raw, line)? {
                    Line::Skip => {}
                    Line::Header => {
                        return Err(OpticsError::Parse {
                            line,
                            message: "unexpected text in a three-column table".into(),
                        })
                    }
                    Line::Numbers(v) => {
                        expect_columns(&v, 3, line)?;
                        rows.push(NkRow {
                            omega: v[0],
                            n: v[1],
                            k: v[2],
                        });
                        lines.push(line);
                    }
                }
            }
        }
        TableFormat::TwoColumnNk => {
            let mut blocks: Vec<Vec<(usize, f64, f64)>> = Vec::new();
            for (i, raw) in text.lines().enumerate() {
                let line = i + 1;
                match classify(raw, line)? {
                    Line::Skip => {}
                    Line::Header => blocks.push(Vec::new()),
                    Line::Numbers(v) => {
                        expect_columns(&v, 2, line)?;
                        match blocks.last_mut() {
                            Some(b) => b.push((line, v[0], v[1])),
                            None => {
                                return Err(OpticsError::Parse {
                                    line,
                                    message: "data before the first block header".into(),
                                })
                            }
                        }
                    }
                }
            }
            if blocks.len() != 2 {
                return Err(OpticsError::Invalid(format!(
                    "two-column format needs an n block and a k block, found {} block(s)",
                    blocks.len()
                )));
            }
            let (nb, kb) = (&blocks[0], &blocks[1]);
            if nb.len() != kb.len() {
                return Err(OpticsError::Invalid(format!(
                    "n block has {} rows but k block has {}",
                    nb.len(),
                    kb.len()
                )));
            }
            for (a, b) in nb.iter().zip(kb) {
                if a.1 != b.1 {
                    return Err(OpticsError::Parse {
                        line: b.0,
                        message: format!("k row frequency {} does not match n row frequency {} (line {})", b.1, a.1, a.0),
                    });
                }
                rows.push(NkRow {
                    omega: a.1,
                    n: a.2,
                    k: b.2,
                });
                lines.push(a.0);
            }
        }
    }
    for (i, r) in rows.iter().enumerate() {
        check_row(r, lines[i])?;
        if i > 0 && r.omega <= rows[i - 1].omega {
            return Err(OpticsError::Monotonicity {
                line: lines[i],
                omega: r.omega,
            });
        }
    }
    OpticalDataTable::new(rows, provenance)
}

/// Response assumed below the first tabulated frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Extrapolation {
    DrudeBelowCutoff(DrudeParams),
    PlasmaBelowCutoff(PlasmaParams),
}

/// Minimum span of the table, in decades of frequency.
pub const MIN_DECADES: f64 = 3.0;

/// `(2/π) ∫_0^w ωp²γ / ((ω² + γ²)(ω² + ξ²)) dω`.
fn drude_below(p: &DrudeParams, xi: f64, w: f64) -> Result<f64, OpticsError> {
    let (wp2, g) = (p.plasma_freq * p.plasma_freq, p.gamma);
    if (xi - g).abs() > 1e-6 * xi {
        let bracket = (w / g).atan() / g - (w / xi).atan() / xi;
        return Ok(2.0 / PI * wp2 * g / (xi * xi - g * g) * bracket);
    }
    let r = quad::integrate(
        |x| wp2 * g / ((x * x + g * g) * (x * x + xi * xi)),
        0.0,
        w,
        &QuadOptions::relative(1e-12),
    )
    .map_err(DispersionError::from)?;
    Ok(2.0 / PI * r.value)
}

/// ε(iξ) from tabulated ε″ = 2nk: the table support is log-log interpolated,
/// the chosen model covers ω below the first row and a power law fitted to
/// the last decade covers the high-frequency tail.
pub fn eps_imag_axis_from_data(
    t: &OpticalDataTable,
    xi: f64,
    extrapolation: &Extrapolation,
    opts: &KkOptions,
) -> Result<f64, OpticsError> {
    if !(xi > 0.0) {
        return Err(DispersionError::NonPositiveFrequency(xi).into());
    }
    let decades = t.decades();
    if decades < MIN_DECADES {
        return Err(OpticsError::Coverage {
            decades,
            required: MIN_DECADES,
        });
    }
    let grid = FrequencyGrid::new(t.omegas(), TailPolicy::FitLastDecade)?;
    let eps2: Vec<f64> = t.rows.iter().map(NkRow::eps_imag).collect();
    let body = dispersion::kk_imag_axis_sampled(&grid, &eps2, xi, opts)?;
    let below = match extrapolation {
        Extrapolation::DrudeBelowCutoff(p) => drude_below(p, xi, t.first_omega())?,
        Extrapolation::PlasmaBelowCutoff(p) => p.plasma_freq * p.plasma_freq / (xi * xi),
    };
    Ok(1.0 + body.value + below)
}

/// `n + ik = √ε` on the principal branch.
pub fn nk_from_eps(eps: Complex64) -> (f64, f64) {
    let s = eps.sqrt();
    (s.re, s.im.abs())
}

/// Table of `n, k` computed from a model on the given frequencies.
pub fn synthetic_table(model: &Dielectric, omegas: &[f64], provenance: &str) -> Result<OpticalDataTable, OpticsError> {
    let rows = omegas
        .iter()
        .map(|&w| {
            let chi = model.chi_real_axis(w)?;
            let (n, k) = nk_from_eps(1.0 + chi);
            Ok(NkRow { omega: w, n, k })
        })
        .collect::<Result<Vec<_>, OpticsError>>()?;
    OpticalDataTable::new(rows, provenance)
}

/// Multiply each `n` and `k` by `1 + rel·N(0,1)`, reproducibly for a seed.
pub fn with_noise(t: &OpticalDataTable, rel: f64, seed: u64) -> Result<OpticalDataTable, OpticsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, rel).map_err(|e| OpticsError::Invalid(e.to_string()))?;
    let rows = t
        .rows
        .iter()
        .map(|r| NkRow {
            omega: r.omega,
            n: r.n * (1.0 + normal.sample(&mut rng)),
            k: (r.k * (1.0 + normal.sample(&mut rng))).max(0.0),
        })
        .collect();
    OpticalDataTable::new(rows, format!("{} + {rel} multiplicative noise (seed {seed})", t.provenance))
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOptions {
    pub oscillators: usize,
    /// Fixed plasma frequency (eV).
    pub plasma_freq: f64,
    pub window_lo: f64,
    /// Defaults to the last table frequency.
    pub window_hi: Option<f64>,
    pub max_iter: usize,
    /// Stop when the relative cost decrease of an accepted step falls below this.
    pub tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            oscillators: 6,
            plasma_freq: 9.0,
            window_lo: 2.0,
            window_hi: None,
            max_iter: 500,
            tol: 1e-15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitStatus {
    Converged,
    NotConverged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamEstimate {
    pub name: String,
    pub value: f64,
    pub std_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub omega: f64,
    pub data: [f64; 2],
    pub model: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub oscillators: OscillatorSet,
    /// `sqrt(Σ|ε_model − ε_data|² / rows)` over the window.
    pub residual_norm: f64,
    pub parameters: Vec<ParamEstimate>,
    pub window: [f64; 2],
    pub status: FitStatus,
    pub iterations: usize,
    pub final_lambda: f64,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<FitRow>,
}

impl FitResult {
    /// Per-row residual CSV.
    pub fn residual_csv(&self) -> String {
        let mut out = String::from("omega_eV,eps_re_data,eps_im_data,eps_re_model,eps_im_model,abs_residual\n");
        for r in &self.rows {
            let d = Complex64::new(r.model[0] - r.data[0], r.model[1] - r.data[1]).norm();
            let _ = writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{:e}",
                r.omega, r.data[0], r.data[1], r.model[0], r.model[1], d
            );
        }
        out
    }
}

struct Problem {
    omega: Vec<f64>,
    target: Vec<Complex64>,
    wp2: f64,
    k: usize,
}

impl Problem {
    /// Oscillator parameters from θ = (ln ω_j, ln g_j, ln f_j).
    fn unpack(&self, theta: &DVector<f64>) -> Vec<Oscillator> {
        (0..self.k)
            .map(|j| Oscillator::new(theta[3 * j].exp(), theta[3 * j + 1].exp(), theta[3 * j + 2].exp()))
            .collect()
    }

    fn model(&self, osc: &[Oscillator], w: f64) -> Complex64 {
        let bound: Complex64 = osc.iter().map(|o| o.real_axis(w)).sum();
        1.0 - self.wp2 / (w * w) + bound
    }

    fn residuals(&self, theta: &DVector<f64>) -> DVector<f64> {
        let osc = self.unpack(theta);
        let n = self.omega.len();
        let mut r = DVector::zeros(2 * n);
        for (i, &w) in self.omega.iter().enumerate() {
            let d = self.model(&osc, w) - self.target[i];
            r[2 * i] = d.re;
            r[2 * i + 1] = d.im;
        }
        r
    }

    fn jacobian(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let osc = self.unpack(theta);
        let n = self.omega.len();
        let mut jac = DMatrix::zeros(2 * n, 3 * self.k);
        for (i, &w) in self.omega.iter().enumerate() {
            for (j, o) in osc.iter().enumerate() {
                let den = Complex64::new(o.resonance * o.resonance - w * w, -o.damping * w);
                let term = o.strength / den;
                let per_den = -term / den;
                let cols = [
                    per_den * (2.0 * o.resonance * o.resonance),
                    per_den * Complex64::new(0.0, -o.damping * w),
                    term,
                ];
                for (c, v) in cols.iter().enumerate() {
                    jac[(2 * i, 3 * j + c)] = v.re;
                    jac[(2 * i + 1, 3 * j + c)] = v.im;
                }
            }
        }
        jac
    }

    /// Strengths by linear least squares at fixed resonances and dampings.
    fn initial_strengths(&self, res: &[f64], damp: &[f64]) -> Vec<f64> {
        let n = self.omega.len();
        let mut a = DMatrix::zeros(2 * n, self.k);
        let mut b = DVector::zeros(2 * n);
        for (i, &w) in self.omega.iter().enumerate() {
            let rhs = self.target[i] - 1.0 + self.wp2 / (w * w);
            b[2 * i] = rhs.re;
            b[2 * i + 1] = rhs.im;
            for j in 0..self.k {
                let v = 1.0 / Complex64::new(res[j] * res[j] - w * w, -damp[j] * w);
                a[(2 * i, j)] = v.re;
                a[(2 * i + 1, j)] = v.im;
            }
        }
        let f = a
            .svd(true, true)
            .solve(&b, 1e-12)
            .unwrap_or_else(|_| DVector::from_element(self.k, 1.0));
        let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
        f.iter().map(|&v| v.max(1e-6 * scale)).collect()
    }
}

const LOG_BOX: f64 = 30.0;

/// Damped least squares on log-parameters. A step is taken only if it lowers
/// the true cost; otherwise the damping grows and the step is retried.
///
/// Each log-parameter is confined to `θ₀ ± LOG_BOX`, so a superfluous
/// oscillator cannot drift to a zero or infinite value.
fn levenberg_marquardt(p: &Problem, mut theta: DVector<f64>, opts: &FitOptions) -> (DVector<f64>, FitStatus, usize, f64) {
    let lower = theta.add_scalar(-LOG_BOX);
    let upper = theta.add_scalar(LOG_BOX);
    let project = |t: DVector<f64>| t.zip_zip_map(&lower, &upper, |v, lo, hi| v.clamp(lo, hi));
    let mut r = p.residuals(&theta);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let m = theta.len();
    for it in 1..=opts.max_iter {
        let jac = p.jacobian(&theta);
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        if grad.amax() <= 1e-15 * cost.max(f64::MIN_POSITIVE).sqrt() || cost == 0.0 {
            return (theta, FitStatus::Converged, it, lambda);
        }
        loop {
            let mut a = jtj.clone();
            for i in 0..m {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
            }
            let step = match a.cholesky() {
                Some(c) => c.solve(&(-&grad)),
                None => {
                    lambda *= 10.0;
                    if lambda > 1e16 {
                        return (theta, FitStatus::NotConverged, it, lambda);
                    }
                    continue;
                }
            };
            let trial = project(&theta + &step);
            let step = &trial - &theta;
            let rt = p.residuals(&trial);
            let ct = rt.norm_squared();
            if ct.is_finite() && ct < cost {
                let gain = (cost - ct) / cost;
                theta = trial;
                r = rt;
                cost = ct;
                lambda = (lambda / 3.0).max(1e-12);
                if gain < opts.tol || step.amax() < 1e-13 {
                    return (theta, FitStatus::Converged, it, lambda);
                }
                break;
            }
            lambda *= 4.0;
            if lambda > 1e16 {
                // No downhill step exists at working precision.
                return (theta, FitStatus::Converged, it, lambda);
            }
        }
    }
    (theta, FitStatus::NotConverged, opts.max_iter, lambda)
}

/// Fit `K` Lorentz oscillators, with ωp held fixed, to the complex
/// permittivity of the table rows inside the window.
pub fn fit_oscillators(t: &OpticalDataTable, opts: &FitOptions) -> Result<FitResult, OpticsError> {
    if opts.oscillators == 0 {
        return Err(OpticsError::Invalid(
            "oscillator count must be >= 1; the plasma term is fixed, so K = 0 leaves nothing to fit".into(),
        ));
    }
    if !(opts.plasma_freq >= 0.0) {
        return Err(OpticsError::Invalid(format!("plasma frequency must be >= 0, got {}", opts.plasma_freq)));
    }
    let lo = opts.window_lo;
    let hi = opts.window_hi.unwrap_or(t.last_omega());
    if !(lo > 0.0 && hi > lo && lo >= t.first_omega() && hi <= t.last_omega()) {
        return Err(OpticsError::Invalid(format!(
            "fit window [{lo}, {hi}] must lie within the table support [{}, {}]",
            t.first_omega(),
            t.last_omega()
        )));
    }
    let used: Vec<&NkRow> = t.rows.iter().filter(|r| r.omega >= lo && r.omega <= hi).collect();
    let k = opts.oscillators;
    if used.len() * 2 < 3 * k {
        return Err(OpticsError::Invalid(format!(
            "{} rows in the window cannot determine {} parameters",
            used.len(),
            3 * k
        )));
    }
    let p = Problem {
        omega: used.iter().map(|r| r.omega).collect(),
        target: used.iter().map(|r| r.eps()).collect(),
        wp2: opts.plasma_freq * opts.plasma_freq,
        k,
    };

    // Log-spaced: the geometric centres of K equal log-width slices of the window.
    let res: Vec<f64> = (0..k).map(|j| lo * (hi / lo).powf((j as f64 + 0.5) / k as f64)).collect();
    let damp: Vec<f64> = res.iter().map(|w| w / 5.0).collect();
    let strength = p.initial_strengths(&res, &damp);
    let theta0 = DVector::from_iterator(
        3 * k,
        (0..k).flat_map(|j| [res[j].ln(), damp[j].ln(), strength[j].ln()]),
    );
    let (theta, status, iterations, final_lambda) = levenberg_marquardt(&p, theta0.clone(), opts);
    let at_bound = theta.iter().zip(theta0.iter()).any(|(a, b)| (a - b).abs() >= LOG_BOX * (1.0 - 1e-12));

    let r = p.residuals(&theta);
    let rows_n = p.omega.len();
    let residual_norm = (r.norm_squared() / rows_n as f64).sqrt();
    let dof = (2 * rows_n).saturating_sub(3 * k).max(1) as f64;
    let sigma2 = r.norm_squared() / dof;
    let jac = p.jacobian(&theta);
    let cov = (jac.transpose() * &jac).try_inverse();

    let mut order: Vec<usize> = (0..k).collect();
    let osc = p.unpack(&theta);
    order.sort_by(|&a, &b| osc[a].resonance.total_cmp(&osc[b].resonance));
    let mut parameters = Vec::with_capacity(3 * k);
    for (rank, &j) in order.iter().enumerate() {
        let vals = [osc[j].resonance, osc[j].damping, osc[j].strength];
        for (c, name) in ["resonance", "damping", "strength"].iter().enumerate() {
            let idx = 3 * j + c;
            let var_log = cov.as_ref().map_or(f64::NAN, |m| m[(idx, idx)] * sigma2);
            parameters.push(ParamEstimate {
                name: format!("{name}[{rank}]"),
                value: vals[c],
                std_err: vals[c] * var_log.max(0.0).sqrt(),
            });
        }
    }
    let sorted: Vec<Oscillator> = order.iter().map(|&j| osc[j]).collect();

    let mut warnings = Vec::new();
    for w in sorted.windows(2) {
        if (w[1].resonance - w[0].resonance) <= 0.01 * w[1].resonance {
            warnings.push(format!(
                "degenerate fit: resonances {:.6} and {:.6} eV coincide within 1%; K may be too large",
                w[0].resonance, w[1].resonance
            ));
        }
    }
    if at_bound {
        warnings.push("degenerate fit: a parameter ran to the edge of its allowed range; K may be too large".into());
    }
    if cov.is_none() {
        warnings.push("normal matrix is singular; parameter errors unavailable".into());
    }
    if status == FitStatus::NotConverged {
        warnings.push(format!("NOT_CONVERGED after {iterations} iterations; returning best parameters found"));
    }

    let rows = p
        .omega
        .iter()
        .zip(&p.target)
        .map(|(&w, d)| {
            let m = p.model(&sorted, w);
            FitRow {
                omega: w,
                data: [d.re, d.im],
                model: [m.re, m.im],
            }
        })
        .collect();

    Ok(FitResult {
        oscillators: OscillatorSet::new(opts.plasma_freq, sorted)?,
        residual_norm,
        parameters,
        window: [lo, hi],
        status,
        iterations,
        final_lambda,
        warnings,
        rows,
    })
}
