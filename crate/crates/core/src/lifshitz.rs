//! Casimir pressure and free energy between two parallel plates from the
//! Lifshitz formula at nonzero temperature.
//!
//! Each Matsubara term is integrated over `y = 2 q_l a / ħc` on
//! `[2 ξ_l a / ħc, ∞)`. The `l = 0` term uses exact static reflection limits
//! chosen by the divergence class of ε, which is where the Drude and plasma
//! descriptions part ways.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::models::{eps_at_matsubara, MaterialModel, MatsubaraPermittivity, ModelError};
use crate::quad::{self, QuadError, QuadOptions};
use crate::units::{thermal_energy, HBAR_C_EV_NM, J_PER_M2_PER_EV_NM2, PA_PER_EV_NM3};

/// Width in `y` beyond which the integrand is dropped; `y² e^{−y}` is below
/// 1e−16 of its peak there.
const Y_SPAN: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LifshitzError {
    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),
    #[error("separation must be positive, got {0} nm")]
    NonPositiveSeparation(f64),
    #[error("permittivity must be positive, got {0}")]
    NonPositivePermittivity(f64),
    #[error("Matsubara sum not converged after l_max cap {cap}")]
    TruncationFailure { cap: u64 },
    #[error("quadrature failed at Matsubara index l = {l}: {source}")]
    Quadrature {
        l: u64,
        #[source]
        source: QuadError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Temperature and Matsubara frequencies `ξ_l = 2π k_B T l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatsubaraGrid {
    pub temperature: f64,
    pub l_max: u64,
    spacing: f64,
}

impl MatsubaraGrid {
    /// ξ_l in eV.
    #[inline]
    pub fn frequency(&self, l: u64) -> f64 {
        self.spacing * l as f64
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.l_max).map(|l| self.frequency(l))
    }
}

pub fn matsubara_frequencies(temperature: f64, l_max: u64) -> Result<MatsubaraGrid, LifshitzError> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(LifshitzError::NonPositiveTemperature(temperature));
    }
    Ok(MatsubaraGrid {
        temperature,
        l_max,
        spacing: 2.0 * std::f64::consts::PI * thermal_energy(temperature),
    })
}

/// Two half-spaces separated by a vacuum gap.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorPair {
    pub left: MaterialModel,
    pub right: MaterialModel,
    /// Gap width a in nm.
    pub separation: f64,
}

impl MirrorPair {
    pub fn symmetric(model: MaterialModel, separation: f64) -> Self {
        Self {
            left: model.clone(),
            right: model,
            separation,
        }
    }

    pub fn at_separation(&self, separation: f64) -> Self {
        Self {
            separation,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<(), LifshitzError> {
        if !(self.separation > 0.0) || !self.separation.is_finite() {
            return Err(LifshitzError::NonPositiveSeparation(self.separation));
        }
        self.left.validate()?;
        self.right.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifshitzOptions {
    /// Relative tolerance of each per-l integral.
    pub quad_rel_tol: f64,
    /// Stop once three consecutive terms fall below this fraction of the sum.
    pub truncation_tol: f64,
    pub l_max_cap: u64,
}

impl Default for LifshitzOptions {
    fn default() -> Self {
        Self {
            quad_rel_tol: 1e-12,
            truncation_tol: 1e-12,
            l_max_cap: 1_000_000,
        }
    }
}

/// Transverse-electric / transverse-magnetic coefficient pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    pub te: f64,
    pub tm: f64,
}

/// Fresnel coefficients at imaginary frequency ξ and transverse wavenumber
/// `k̃ = ħc k` (both eV).
pub fn fresnel_coefficients(eps: f64, mu: f64, xi: f64, k: f64) -> Result<Reflection, LifshitzError> {
    if !(eps > 0.0) {
        return Err(LifshitzError::NonPositivePermittivity(eps));
    }
    let q = (k * k + xi * xi).sqrt();
    Ok(fresnel_q(eps, mu, xi, q))
}

#[inline]
fn fresnel_q(eps: f64, mu: f64, xi: f64, q: f64) -> Reflection {
    let km = (q * q + (eps * mu - 1.0) * xi * xi).sqrt();
    Reflection {
        te: (mu * q - km) / (mu * q + km),
        tm: (eps * q - km) / (eps * q + km),
    }
}

/// Exact `ξ → 0` limits of the reflection coefficients at `k̃ > 0`.
pub fn zero_frequency_coefficients(m: &MaterialModel, k: f64) -> Reflection {
    StaticKind::of(m).at(k)
}

/// Reflection of one mirror at one Matsubara frequency, as a function of q.
#[derive(Debug, Clone, Copy)]
enum SideResponse {
    Static(StaticKind),
    Finite { eps: f64, mu: f64, xi: f64 },
}

#[derive(Debug, Clone, Copy)]
enum StaticKind {
    Fixed(Reflection),
    PlasmaLike { mu: f64, wp2: f64 },
}

impl StaticKind {
    fn of(m: &MaterialModel) -> Self {
        let mu = m.mu(0.0, 0);
        let static_te = (mu - 1.0) / (mu + 1.0);
        match eps_at_matsubara(m, 0.0, 0) {
            Ok(MatsubaraPermittivity::DivergesAsInverseXi(_)) => {
                StaticKind::Fixed(Reflection { te: static_te, tm: 1.0 })
            }
            Ok(MatsubaraPermittivity::DivergesAsInverseXiSquared(wp2)) => StaticKind::PlasmaLike { mu, wp2 },
            Ok(MatsubaraPermittivity::Finite(eps)) => StaticKind::Fixed(Reflection {
                te: static_te,
                tm: (eps - 1.0) / (eps + 1.0),
            }),
            Err(_) => unreachable!("the static class is defined for every model"),
        }
    }

    #[inline]
    fn at(&self, k: f64) -> Reflection {
        match *self {
            StaticKind::Fixed(r) => r,
            StaticKind::PlasmaLike { mu, wp2 } => {
                let km = (k * k + mu * wp2).sqrt();
                Reflection {
                    te: (mu * k - km) / (mu * k + km),
                    tm: 1.0,
                }
            }
        }
    }
}

impl SideResponse {
    fn new(m: &MaterialModel, grid: &MatsubaraGrid, l: u64) -> Result<Self, LifshitzError> {
        let xi = grid.frequency(l);
        let mu = m.mu(xi, l);
        if l == 0 {
            return Ok(SideResponse::Static(StaticKind::of(m)));
        }
        match eps_at_matsubara(m, xi, l)? {
            MatsubaraPermittivity::Finite(eps) => Ok(SideResponse::Finite { eps, mu, xi }),
            _ => unreachable!("l >= 1 is always finite"),
        }
    }

    #[inline]
    fn at(&self, q: f64) -> Reflection {
        match *self {
            SideResponse::Static(s) => s.at(q),
            SideResponse::Finite { eps, mu, xi } => fresnel_q(eps, mu, xi, q),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Observable {
    Pressure,
    FreeEnergy,
}

/// `1 − r_L r_R e^{−y}` without cancellation for perfect reflectors.
#[inline]
fn one_minus(rr: f64, y: f64) -> f64 {
    if rr == 1.0 {
        -(-y).exp_m1()
    } else {
        1.0 - rr * (-y).exp()
    }
}

#[inline]
fn mode_kernel(obs: Observable, rr: f64, y: f64) -> f64 {
    if rr == 0.0 {
        return 0.0;
    }
    match obs {
        Observable::Pressure => rr * (-y).exp() / one_minus(rr, y) * y * y,
        Observable::FreeEnergy => {
            let log = if rr == 1.0 {
                (-(-y).exp_m1()).ln()
            } else {
                (-rr * (-y).exp()).ln_1p()
            };
            log * y
        }
    }
}

/// Unweighted y-integrals of one Matsubara term, split by polarization.
#[derive(Debug, Clone, Copy, Default)]
struct TermIntegrals {
    te: f64,
    tm: f64,
    err: f64,
    evals: usize,
}

fn term_integrals(
    pair: &MirrorPair,
    grid: &MatsubaraGrid,
    l: u64,
    obs: Observable,
    opts: &LifshitzOptions,
) -> Result<TermIntegrals, LifshitzError> {
    let left = SideResponse::new(&pair.left, grid, l)?;
    let right = SideResponse::new(&pair.right, grid, l)?;
    let a = pair.separation;
    let y0 = 2.0 * grid.frequency(l) * a / HBAR_C_EV_NM;
    let q_of = |y: f64| y * HBAR_C_EV_NM / (2.0 * a);
    let breaks = [y0, y0 + 1.0, y0 + 4.0, y0 + 16.0, y0 + Y_SPAN];
    let qopts = QuadOptions::relative(opts.quad_rel_tol);

    let te = quad::integrate_with_breaks(
        |y| {
            let q = q_of(y);
            mode_kernel(obs, left.at(q).te * right.at(q).te, y)
        },
        &breaks,
        &qopts,
    )
    .map_err(|source| LifshitzError::Quadrature { l, source })?;
    let tm = quad::integrate_with_breaks(
        |y| {
            let q = q_of(y);
            mode_kernel(obs, left.at(q).tm * right.at(q).tm, y)
        },
        &breaks,
        &qopts,
    )
    .map_err(|source| LifshitzError::Quadrature { l, source })?;
    Ok(TermIntegrals {
        te: te.value,
        tm: tm.value,
        err: te.abs_err + tm.abs_err,
        evals: te.evals + tm.evals,
    })
}

/// Physical prefactor turning a y-integral into Pa or J/m².
fn prefactor(obs: Observable, temperature: f64, a: f64) -> f64 {
    let kt = thermal_energy(temperature);
    match obs {
        Observable::Pressure => -kt / std::f64::consts::PI / (8.0 * a * a * a) * PA_PER_EV_NM3,
        Observable::FreeEnergy => kt / (2.0 * std::f64::consts::PI) / (4.0 * a * a) * J_PER_M2_PER_EV_NM2,
    }
}

/// Weighted per-l contributions with truncation metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatsubaraSum {
    pub total: f64,
    /// Weighted contribution of each l, in output units.
    pub per_l: Vec<f64>,
    pub l0_te: f64,
    pub l0_tm: f64,
    pub l_max_used: u64,
    pub quad_err_est: f64,
    pub quad_evals: usize,
}

const CONSECUTIVE_SMALL: usize = 3;

fn matsubara_sum(
    pair: &MirrorPair,
    temperature: f64,
    obs: Observable,
    opts: &LifshitzOptions,
) -> Result<MatsubaraSum, LifshitzError> {
    pair.validate()?;
    let grid = matsubara_frequencies(temperature, opts.l_max_cap)?;
    let scale = prefactor(obs, temperature, pair.separation);

    let mut out = MatsubaraSum {
        total: 0.0,
        per_l: Vec::new(),
        l0_te: 0.0,
        l0_tm: 0.0,
        l_max_used: 0,
        quad_err_est: 0.0,
        quad_evals: 0,
    };
    let mut small_run = 0usize;
    let mut next: u64 = 0;
    let mut batch: u64 = 8;
    // Terms are evaluated in parallel batches and reduced in ascending l, so
    // the result does not depend on the worker count.
    while next <= opts.l_max_cap {
        let end = (next + batch).min(opts.l_max_cap + 1);
        let terms: Vec<Result<TermIntegrals, LifshitzError>> = (next..end)
            .into_par_iter()
            .map(|l| term_integrals(pair, &grid, l, obs, opts))
            .collect();
        for (l, t) in (next..end).zip(terms) {
            let t = t?;
            let weight = if l == 0 { 0.5 } else { 1.0 };
            let te = weight * scale * t.te;
            let tm = weight * scale * t.tm;
            let term = te + tm;
            if l == 0 {
                out.l0_te = te;
                out.l0_tm = tm;
            }
            out.total += term;
            out.per_l.push(term);
            out.quad_err_est += weight * scale.abs() * t.err;
            out.quad_evals += t.evals;
            out.l_max_used = l;
            if l > 0 && term.abs() <= opts.truncation_tol * out.total.abs() {
                small_run += 1;
                if small_run >= CONSECUTIVE_SMALL {
                    return Ok(out);
                }
            } else {
                small_run = 0;
            }
        }
        next = end;
        batch = (batch * 2).min(256);
    }
    Err(LifshitzError::TruncationFailure { cap: opts.l_max_cap })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureResult {
    /// Pa; negative means attraction.
    pub pressure: f64,
    pub per_l: Vec<f64>,
    pub l0_te: f64,
    pub l0_tm: f64,
    pub l_max_used: u64,
    pub quad_err_est: f64,
    pub quad_evals: usize,
}

impl From<MatsubaraSum> for PressureResult {
    fn from(s: MatsubaraSum) -> Self {
        Self {
            pressure: s.total,
            per_l: s.per_l,
            l0_te: s.l0_te,
            l0_tm: s.l0_tm,
            l_max_used: s.l_max_used,
            quad_err_est: s.quad_err_est,
            quad_evals: s.quad_evals,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreeEnergyResult {
    /// J/m².
    pub free_energy: f64,
    pub per_l: Vec<f64>,
    pub l0_te: f64,
    pub l0_tm: f64,
    pub l_max_used: u64,
    pub quad_err_est: f64,
}

impl From<MatsubaraSum> for FreeEnergyResult {
    fn from(s: MatsubaraSum) -> Self {
        Self {
            free_energy: s.total,
            per_l: s.per_l,
            l0_te: s.l0_te,
            l0_tm: s.l0_tm,
            l_max_used: s.l_max_used,
            quad_err_est: s.quad_err_est,
        }
    }
}

/// Casimir pressure in Pa at temperature `temperature` (K).
pub fn pressure(pair: &MirrorPair, temperature: f64, opts: &LifshitzOptions) -> Result<PressureResult, LifshitzError> {
    matsubara_sum(pair, temperature, Observable::Pressure, opts).map(Into::into)
}

/// Casimir free energy per unit area in J/m².
pub fn free_energy(
    pair: &MirrorPair,
    temperature: f64,
    opts: &LifshitzOptions,
) -> Result<FreeEnergyResult, LifshitzError> {
    matsubara_sum(pair, temperature, Observable::FreeEnergy, opts).map(Into::into)
}

/// Zero-temperature ideal-metal pressure `−π² ħc / (240 a⁴)` in Pa.
pub fn pressure_ideal_metal(separation: f64) -> f64 {
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    -pi2 * HBAR_C_EV_NM / (240.0 * separation.powi(4)) * PA_PER_EV_NM3
}

/// A named pair entering a comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedModel {
    pub id: String,
    pub left: MaterialModel,
    pub right: MaterialModel,
}

impl NamedModel {
    pub fn symmetric(id: impl Into<String>, model: MaterialModel) -> Self {
        Self {
            id: id.into(),
            left: model.clone(),
            right: model,
        }
    }

    fn pair(&self, separation: f64) -> MirrorPair {
        MirrorPair {
            left: self.left.clone(),
            right: self.right.clone(),
            separation,
        }
    }
}

/// One cell of a comparison table: a value or the reason it is missing.
pub type Cell = Result<f64, String>;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub separation: f64,
    pub model_id: String,
    pub pressure: Cell,
    pub ratio_to_ideal: Cell,
    pub l0_te_share: Cell,
    /// Pressure with the Drude relaxation replaced by each rung of the
    /// γ-ladder; `None` for models without a Drude or plasma dielectric.
    pub gamma_ladder: Vec<Option<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub temperature: f64,
    pub gamma_ladder: Vec<f64>,
    pub rows: Vec<ComparisonRow>,
}

fn drude_rung(model: &MaterialModel, gamma: f64) -> Option<Result<MaterialModel, ModelError>> {
    use crate::models::{Dielectric, DrudeParams};
    let wp = match &model.dielectric {
        Dielectric::Drude(p) => p.plasma_freq,
        Dielectric::Plasma(p) => p.plasma_freq,
        Dielectric::Generalized(_) => return None,
    };
    Some(DrudeParams::new(wp, gamma).map(|p| MaterialModel {
        dielectric: Dielectric::Drude(p),
        permeability: model.permeability,
    }))
}

/// Pressure table over separations and models, with a Drude γ-ladder column
/// block built from each model's plasma frequency. Failures are recorded per
/// cell.
pub fn compare_models(
    separations: &[f64],
    temperature: f64,
    models: &[NamedModel],
    gamma_ladder: &[f64],
    opts: &LifshitzOptions,
) -> ComparisonTable {
    let mut rows = Vec::with_capacity(separations.len() * models.len());
    for &a in separations {
        for m in models {
            let base = pressure(&m.pair(a), temperature, opts);
            let ideal = pressure_ideal_metal(a);
            let (p, ratio, share) = match &base {
                Ok(r) => (
                    Ok(r.pressure),
                    Ok(r.pressure / ideal),
                    Ok(if r.pressure != 0.0 { r.l0_te / r.pressure } else { 0.0 }),
                ),
                Err(e) => (Err(e.to_string()), Err(e.to_string()), Err(e.to_string())),
            };
            let ladder = gamma_ladder
                .iter()
                .map(|&g| {
                    let left = drude_rung(&m.left, g)?;
                    let right = drude_rung(&m.right, g)?;
                    Some(match (left, right) {
                        (Ok(left), Ok(right)) => pressure(
                            &MirrorPair {
                                left,
                                right,
                                separation: a,
                            },
                            temperature,
                            opts,
                        )
                        .map(|r| r.pressure)
                        .map_err(|e| e.to_string()),
                        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
                    })
                })
                .collect();
            rows.push(ComparisonRow {
                separation: a,
                model_id: m.id.clone(),
                pressure: p,
                ratio_to_ideal: ratio,
                l0_te_share: share,
                gamma_ladder: ladder,
            });
        }
    }
    ComparisonTable {
        temperature,
        gamma_ladder: gamma_ladder.to_vec(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{OscillatorSet, PermeabilityModel};
    use approx::assert_relative_eq;

    fn vacuum() -> MaterialModel {
        MaterialModel::generalized(OscillatorSet::new(0.0, vec![]).unwrap()).unwrap()
    }

    #[test]
    fn matsubara_grid() {
        let g = matsubara_frequencies(300.0, 10).unwrap();
        assert!((g.frequency(1) - 0.162_430).abs() < 5e-6);
        assert_relative_eq!(g.frequency(1), 2.0 * std::f64::consts::PI * 8.617_333_262e-5 * 300.0, max_relative = 1e-15);
        assert_eq!(g.frequency(0), 0.0);
        for l in 1..5 {
            assert_eq!(g.frequency(2 * l), 2.0 * g.frequency(l));
        }
        assert!(matsubara_frequencies(0.0, 3).is_err());
        assert!(matsubara_frequencies(-1.0, 3).is_err());
        assert_eq!(g.frequencies().count(), 11);
    }

    #[test]
    fn fresnel_values() {
        let r = fresnel_coefficients(1.0, 1.0, 0.3, 0.7).unwrap();
        assert_eq!((r.te, r.tm), (0.0, 0.0));
        let r = fresnel_coefficients(4.0, 1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(r.tm, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(r.te, -1.0 / 3.0, epsilon = 1e-15);
        let r = fresnel_coefficients(1e12, 1.0, 1.0, 0.5).unwrap();
        assert!((r.tm - 1.0).abs() < 1e-5 && (r.te + 1.0).abs() < 1e-5);
        assert!(fresnel_coefficients(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn zero_frequency_values() {
        let d = MaterialModel::drude(9.0, 0.035).unwrap();
        assert_eq!(zero_frequency_coefficients(&d, 0.3), Reflection { te: 0.0, tm: 1.0 });
        let dm = d.clone().with_permeability(PermeabilityModel::static_only(3.0)).unwrap();
        assert_eq!(zero_frequency_coefficients(&dm, 0.3), Reflection { te: 0.5, tm: 1.0 });
        let p = MaterialModel::plasma(4.0).unwrap();
        assert_eq!(zero_frequency_coefficients(&p, 3.0), Reflection { te: -0.25, tm: 1.0 });
    }

    #[test]
    fn ideal_metal_formula() {
        assert!((pressure_ideal_metal(1000.0) + 1.3001e-3).abs() < 1e-7);
        assert_relative_eq!(pressure_ideal_metal(500.0), 16.0 * pressure_ideal_metal(1000.0), max_relative = 1e-14);
        assert!((pressure_ideal_metal(100.0) + 13.001).abs() < 1e-3);
    }

    #[test]
    fn vacuum_gap_has_no_force() {
        let pair = MirrorPair::symmetric(vacuum(), 500.0);
        let r = pressure(&pair, 300.0, &LifshitzOptions::default()).unwrap();
        assert_eq!(r.pressure, 0.0);
        let f = free_energy(&pair, 300.0, &LifshitzOptions::default()).unwrap();
        assert_eq!(f.free_energy, 0.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let pair = MirrorPair::symmetric(MaterialModel::plasma(9.0).unwrap(), 0.0);
        assert!(matches!(
            pressure(&pair, 300.0, &LifshitzOptions::default()),
            Err(LifshitzError::NonPositiveSeparation(_))
        ));
        let pair = pair.at_separation(100.0);
        assert!(matches!(
            pressure(&pair, 0.0, &LifshitzOptions::default()),
            Err(LifshitzError::NonPositiveTemperature(_))
        ));
    }

    #[test]
    fn truncation_cap_is_reported() {
        let pair = MirrorPair::symmetric(MaterialModel::plasma(9.0).unwrap(), 1000.0);
        let opts = LifshitzOptions {
            l_max_cap: 3,
            ..Default::default()
        };
        assert_eq!(
            pressure(&pair, 10.0, &opts),
            Err(LifshitzError::TruncationFailure { cap: 3 })
        );
    }

    #[test]
    fn last_term_within_truncation_tolerance() {
        let opts = LifshitzOptions::default();
        let pair = MirrorPair::symmetric(MaterialModel::drude(9.0, 0.035).unwrap(), 300.0);
        let r = pressure(&pair, 300.0, &opts).unwrap();
        assert!(r.per_l.last().unwrap().abs() <= opts.truncation_tol * r.pressure.abs());
        assert_eq!(r.per_l.len() as u64, r.l_max_used + 1);
    }

    #[test]
    fn magnetic_static_te_share() {
        let opts = LifshitzOptions::default();
        let nonmag = MaterialModel::drude(9.0, 0.035).unwrap();
        let mag = nonmag.clone().with_permeability(PermeabilityModel::static_only(110.0)).unwrap();
        let table = compare_models(
            &[1000.0],
            300.0,
            &[NamedModel::symmetric("drude", nonmag), NamedModel::symmetric("drude-mag", mag)],
            &[],
            &opts,
        );
        assert_eq!(*table.rows[0].l0_te_share.as_ref().unwrap(), 0.0);
        assert!(*table.rows[1].l0_te_share.as_ref().unwrap() > 0.0);
    }

    #[test]
    fn dissimilar_pair_between_symmetric_ones() {
        let opts = LifshitzOptions::default();
        let d = MaterialModel::drude(9.0, 0.035).unwrap();
        let p = MaterialModel::plasma(9.0).unwrap();
        let dd = pressure(&MirrorPair::symmetric(d.clone(), 800.0), 300.0, &opts).unwrap().pressure;
        let pp = pressure(&MirrorPair::symmetric(p.clone(), 800.0), 300.0, &opts).unwrap().pressure;
        let dp = pressure(
            &MirrorPair {
                left: d,
                right: p,
                separation: 800.0,
            },
            300.0,
            &opts,
        )
        .unwrap();
        assert!(dp.pressure < dd && dp.pressure > pp);
        // Drude TE vanishes at l = 0, so the mixed pair has none either.
        assert_eq!(dp.l0_te, 0.0);
    }
}
