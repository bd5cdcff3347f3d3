//! Dielectric susceptibility and magnetic permeability models.
//!
//! Every model is defined on both the real frequency axis (complex χ(ω)) and
//! the imaginary axis (real χ(iξ)). The static limit is never evaluated
//! directly; [`eps_at_matsubara`] returns a divergence class for `l = 0` that
//! the Lifshitz code turns into exact reflection limits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{what} must be {requirement}, got {value}")]
    InvalidParameter {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("Drude relaxation γ = 0 is not a Drude model; use the plasma model instead")]
    ZeroRelaxation,
    #[error("frequency must be nonzero for {0}")]
    ZeroFrequency(&'static str),
    #[error("imaginary frequency must be positive, got ξ = {0}")]
    NonPositiveXi(f64),
    #[error("undamped resonance pole at ω = {0} eV")]
    UndampedPole(f64),
}

fn require(ok: bool, what: &'static str, requirement: &'static str, value: f64) -> Result<(), ModelError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            what,
            requirement,
            value,
        })
    }
}

/// Drude conduction-electron response `χ = −ωp²/(ω(ω + iγ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrudeParams {
    /// Plasma frequency ωp in eV.
    pub plasma_freq: f64,
    /// Relaxation γ in eV.
    pub gamma: f64,
}

impl DrudeParams {
    pub fn new(plasma_freq: f64, gamma: f64) -> Result<Self, ModelError> {
        let p = Self { plasma_freq, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        require(self.plasma_freq > 0.0, "plasma_freq", "> 0", self.plasma_freq)?;
        require(self.gamma >= 0.0, "gamma", ">= 0", self.gamma)?;
        if self.gamma == 0.0 {
            return Err(ModelError::ZeroRelaxation);
        }
        Ok(())
    }
}

/// Lossless plasma response `χ = −ωp²/ω²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlasmaParams {
    pub plasma_freq: f64,
}

impl PlasmaParams {
    pub fn new(plasma_freq: f64) -> Result<Self, ModelError> {
        let p = Self { plasma_freq };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        require(self.plasma_freq > 0.0, "plasma_freq", "> 0", self.plasma_freq)
    }
}

/// One Lorentz term `f/(ω₀² − ω² − i g ω)` for bound electrons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Oscillator {
    /// Resonance ω_j in eV.
    pub resonance: f64,
    /// Damping g_j in eV.
    pub damping: f64,
    /// Strength f_j in eV².
    pub strength: f64,
}

impl Oscillator {
    pub fn new(resonance: f64, damping: f64, strength: f64) -> Self {
        Self {
            resonance,
            damping,
            strength,
        }
    }

    #[inline]
    pub fn real_axis(&self, omega: f64) -> Complex64 {
        let den = Complex64::new(
            self.resonance * self.resonance - omega * omega,
            -self.damping * omega,
        );
        self.strength / den
    }

    #[inline]
    pub fn imag_axis(&self, xi: f64) -> f64 {
        self.strength / (self.resonance * self.resonance + xi * xi + self.damping * xi)
    }
}

/// Plasma term plus K Lorentz oscillators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSet {
    /// Plasma frequency in eV. Zero is allowed here (pure oscillator response).
    pub plasma_freq: f64,
    #[serde(default)]
    pub oscillators: Vec<Oscillator>,
}

impl OscillatorSet {
    pub fn new(plasma_freq: f64, oscillators: Vec<Oscillator>) -> Result<Self, ModelError> {
        let s = Self {
            plasma_freq,
            oscillators,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        require(self.plasma_freq >= 0.0, "plasma_freq", ">= 0", self.plasma_freq)?;
        for o in &self.oscillators {
            require(o.resonance > 0.0, "oscillator resonance", "> 0", o.resonance)?;
            require(o.damping >= 0.0, "oscillator damping", ">= 0", o.damping)?;
            require(o.strength >= 0.0, "oscillator strength", ">= 0", o.strength)?;
        }
        Ok(())
    }

    pub fn plasma_term_sq(&self) -> f64 {
        self.plasma_freq * self.plasma_freq
    }

    /// Sum of the oscillator terms alone, on the real axis.
    pub fn bound_real_axis(&self, omega: f64) -> Complex64 {
        self.oscillators.iter().map(|o| o.real_axis(omega)).sum()
    }

    /// Closed-form Im χ(ω), valid for any real ω (odd in ω).
    pub fn imag_part(&self, omega: f64) -> f64 {
        self.oscillators
            .iter()
            .map(|o| {
                let d = o.resonance * o.resonance - omega * omega;
                let go = o.damping * omega;
                o.strength * go / (d * d + go * go)
            })
            .sum()
    }

    /// Closed-form Re χ(ω) for ω ≠ 0 (even in ω).
    pub fn real_part(&self, omega: f64) -> f64 {
        let bound: f64 = self
            .oscillators
            .iter()
            .map(|o| {
                let d = o.resonance * o.resonance - omega * omega;
                let go = o.damping * omega;
                o.strength * d / (d * d + go * go)
            })
            .sum();
        -self.plasma_term_sq() / (omega * omega) + bound
    }

    /// `Σ f_j`, the high-frequency tail weight.
    pub fn total_strength(&self) -> f64 {
        self.oscillators.iter().map(|o| o.strength).sum()
    }
}

impl From<PlasmaParams> for OscillatorSet {
    fn from(p: PlasmaParams) -> Self {
        Self {
            plasma_freq: p.plasma_freq,
            oscillators: Vec::new(),
        }
    }
}

/// How μ(iξ) relaxes away from its static value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PermeabilityDecay {
    /// μ(0) at the static Matsubara term, 1 for all `l ≥ 1`.
    #[default]
    ConstantAtZeroOnly,
    /// `1 + (μ(0) − 1)/(1 + ξ²/ω_m²)` with ω_m in eV.
    DebyeCutoff { cutoff: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "PermeabilityDoc",
    into = "PermeabilityDoc"
)]
pub struct PermeabilityModel {
    pub static_mu: f64,
    pub decay: PermeabilityDecay,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum DecayPolicy {
    ConstantAtZeroOnly,
    DebyeCutoff,
}

/// Flat JSON form: `{"static_mu": .., "policy": .., "cutoff": ..}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PermeabilityDoc {
    static_mu: f64,
    #[serde(default = "default_policy")]
    policy: DecayPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cutoff: Option<f64>,
}

fn default_policy() -> DecayPolicy {
    DecayPolicy::ConstantAtZeroOnly
}

impl TryFrom<PermeabilityDoc> for PermeabilityModel {
    type Error = String;

    fn try_from(d: PermeabilityDoc) -> Result<Self, String> {
        let decay = match (d.policy, d.cutoff) {
            (DecayPolicy::ConstantAtZeroOnly, None) => PermeabilityDecay::ConstantAtZeroOnly,
            (DecayPolicy::ConstantAtZeroOnly, Some(_)) => {
                return Err("`cutoff` only applies to policy \"debye_cutoff\"".into())
            }
            (DecayPolicy::DebyeCutoff, Some(cutoff)) => PermeabilityDecay::DebyeCutoff { cutoff },
            (DecayPolicy::DebyeCutoff, None) => {
                return Err("policy \"debye_cutoff\" requires `cutoff` (eV)".into())
            }
        };
        Ok(Self {
            static_mu: d.static_mu,
            decay,
        })
    }
}

impl From<PermeabilityModel> for PermeabilityDoc {
    fn from(m: PermeabilityModel) -> Self {
        match m.decay {
            PermeabilityDecay::ConstantAtZeroOnly => Self {
                static_mu: m.static_mu,
                policy: DecayPolicy::ConstantAtZeroOnly,
                cutoff: None,
            },
            PermeabilityDecay::DebyeCutoff { cutoff } => Self {
                static_mu: m.static_mu,
                policy: DecayPolicy::DebyeCutoff,
                cutoff: Some(cutoff),
            },
        }
    }
}

impl Default for PermeabilityModel {
    fn default() -> Self {
        Self::nonmagnetic()
    }
}

impl PermeabilityModel {
    pub fn nonmagnetic() -> Self {
        Self {
            static_mu: 1.0,
            decay: PermeabilityDecay::ConstantAtZeroOnly,
        }
    }

    pub fn static_only(static_mu: f64) -> Self {
        Self {
            static_mu,
            decay: PermeabilityDecay::ConstantAtZeroOnly,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        require(self.static_mu >= 1.0, "static_mu", ">= 1", self.static_mu)?;
        if let PermeabilityDecay::DebyeCutoff { cutoff } = self.decay {
            require(cutoff > 0.0, "permeability cutoff", "> 0", cutoff)?;
        }
        Ok(())
    }
}

/// Dielectric part of a [`MaterialModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Dielectric {
    Drude(DrudeParams),
    Plasma(PlasmaParams),
    Generalized(OscillatorSet),
}

impl Dielectric {
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            Dielectric::Drude(p) => p.validate(),
            Dielectric::Plasma(p) => p.validate(),
            Dielectric::Generalized(s) => s.validate(),
        }
    }

    pub fn plasma_freq(&self) -> f64 {
        match self {
            Dielectric::Drude(p) => p.plasma_freq,
            Dielectric::Plasma(p) => p.plasma_freq,
            Dielectric::Generalized(s) => s.plasma_freq,
        }
    }

    /// χ(iξ) for ξ > 0.
    pub fn chi_imag_axis(&self, xi: f64) -> Result<f64, ModelError> {
        match self {
            Dielectric::Drude(p) => chi_drude_imag_axis(p, xi),
            Dielectric::Plasma(p) => chi_plasma(p, Axis::Imag(xi)),
            Dielectric::Generalized(s) => chi_generalized_imag_axis(s, xi),
        }
    }

    /// Complex χ(ω) on the real axis.
    pub fn chi_real_axis(&self, omega: f64) -> Result<Complex64, ModelError> {
        match self {
            Dielectric::Drude(p) => chi_drude_real_axis(p, omega),
            Dielectric::Plasma(p) => chi_plasma(p, Axis::Real(omega)).map(Complex64::from),
            Dielectric::Generalized(s) => chi_generalized_real_axis(s, omega),
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            Dielectric::Drude(_) => "drude",
            Dielectric::Plasma(_) => "plasma",
            Dielectric::Generalized(_) => "generalized",
        }
    }
}

/// Dielectric response plus permeability of one mirror.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialModel {
    pub dielectric: Dielectric,
    #[serde(default)]
    pub permeability: PermeabilityModel,
}

impl MaterialModel {
    pub fn new(dielectric: Dielectric, permeability: PermeabilityModel) -> Result<Self, ModelError> {
        let m = Self {
            dielectric,
            permeability,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn drude(plasma_freq: f64, gamma: f64) -> Result<Self, ModelError> {
        Self::new(
            Dielectric::Drude(DrudeParams::new(plasma_freq, gamma)?),
            PermeabilityModel::nonmagnetic(),
        )
    }

    pub fn plasma(plasma_freq: f64) -> Result<Self, ModelError> {
        Self::new(
            Dielectric::Plasma(PlasmaParams::new(plasma_freq)?),
            PermeabilityModel::nonmagnetic(),
        )
    }

    pub fn generalized(set: OscillatorSet) -> Result<Self, ModelError> {
        Self::new(Dielectric::Generalized(set), PermeabilityModel::nonmagnetic())
    }

    pub fn with_permeability(mut self, permeability: PermeabilityModel) -> Result<Self, ModelError> {
        permeability.validate()?;
        self.permeability = permeability;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.dielectric.validate()?;
        self.permeability.validate()
    }

    pub fn mu(&self, xi: f64, index: u64) -> f64 {
        mu_at_matsubara(&self.permeability, xi, index)
    }
}

/// Frequency argument on one of the two axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Real(f64),
    Imag(f64),
}

pub fn chi_drude_real_axis(p: &DrudeParams, omega: f64) -> Result<Complex64, ModelError> {
    if p.gamma == 0.0 {
        return Err(ModelError::ZeroRelaxation);
    }
    if omega == 0.0 {
        return Err(ModelError::ZeroFrequency("the Drude model"));
    }
    let wp2 = p.plasma_freq * p.plasma_freq;
    Ok(-wp2 / (omega * Complex64::new(omega, p.gamma)))
}

pub fn chi_drude_imag_axis(p: &DrudeParams, xi: f64) -> Result<f64, ModelError> {
    if p.gamma == 0.0 {
        return Err(ModelError::ZeroRelaxation);
    }
    if !(xi > 0.0) {
        return Err(ModelError::NonPositiveXi(xi));
    }
    Ok(p.plasma_freq * p.plasma_freq / (xi * (xi + p.gamma)))
}

/// Im χ of the Drude model on the real axis, `ωp²γ/(ω(ω² + γ²))`.
pub fn drude_imag_part(p: &DrudeParams, omega: f64) -> f64 {
    let wp2 = p.plasma_freq * p.plasma_freq;
    wp2 * p.gamma / (omega * (omega * omega + p.gamma * p.gamma))
}

pub fn chi_plasma(p: &PlasmaParams, axis: Axis) -> Result<f64, ModelError> {
    let wp2 = p.plasma_freq * p.plasma_freq;
    match axis {
        Axis::Real(w) if w != 0.0 => Ok(-wp2 / (w * w)),
        Axis::Imag(x) if x != 0.0 => Ok(wp2 / (x * x)),
        _ => Err(ModelError::ZeroFrequency("the plasma model")),
    }
}

pub fn chi_generalized_real_axis(s: &OscillatorSet, omega: f64) -> Result<Complex64, ModelError> {
    if omega == 0.0 {
        return Err(ModelError::ZeroFrequency("the generalized plasma model"));
    }
    if let Some(o) = s
        .oscillators
        .iter()
        .find(|o| o.damping == 0.0 && o.resonance == omega.abs())
    {
        return Err(ModelError::UndampedPole(o.resonance));
    }
    Ok(-s.plasma_term_sq() / (omega * omega) + s.bound_real_axis(omega))
}

pub fn chi_generalized_imag_axis(s: &OscillatorSet, xi: f64) -> Result<f64, ModelError> {
    if !(xi > 0.0) {
        return Err(ModelError::NonPositiveXi(xi));
    }
    let bound: f64 = s.oscillators.iter().map(|o| o.imag_axis(xi)).sum();
    Ok(s.plasma_term_sq() / (xi * xi) + bound)
}

pub fn mu_at_matsubara(m: &PermeabilityModel, xi: f64, index: u64) -> f64 {
    match m.decay {
        PermeabilityDecay::ConstantAtZeroOnly => {
            if index == 0 {
                m.static_mu
            } else {
                1.0
            }
        }
        PermeabilityDecay::DebyeCutoff { cutoff } => {
            1.0 + (m.static_mu - 1.0) / (1.0 + (xi * xi) / (cutoff * cutoff))
        }
    }
}

/// ε at a Matsubara frequency, or its divergence class at `l = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatsubaraPermittivity {
    Finite(f64),
    /// `ξ·χ(iξ) → coefficient` as ξ → 0 (Drude, coefficient ωp²/γ).
    DivergesAsInverseXi(f64),
    /// `ξ²·χ(iξ) → coefficient` as ξ → 0 (plasma-like, coefficient ωp²).
    DivergesAsInverseXiSquared(f64),
}

pub fn eps_at_matsubara(m: &MaterialModel, xi: f64, index: u64) -> Result<MatsubaraPermittivity, ModelError> {
    if index == 0 {
        return Ok(match &m.dielectric {
            Dielectric::Drude(p) => {
                MatsubaraPermittivity::DivergesAsInverseXi(p.plasma_freq * p.plasma_freq / p.gamma)
            }
            Dielectric::Plasma(p) => {
                MatsubaraPermittivity::DivergesAsInverseXiSquared(p.plasma_freq * p.plasma_freq)
            }
            Dielectric::Generalized(s) if s.plasma_freq > 0.0 => {
                MatsubaraPermittivity::DivergesAsInverseXiSquared(s.plasma_term_sq())
            }
            // ωp = 0 leaves a dielectric with finite static permittivity.
            Dielectric::Generalized(s) => MatsubaraPermittivity::Finite(
                1.0 + s
                    .oscillators
                    .iter()
                    .map(|o| o.strength / (o.resonance * o.resonance))
                    .sum::<f64>(),
            ),
        });
    }
    Ok(MatsubaraPermittivity::Finite(1.0 + m.dielectric.chi_imag_axis(xi)?))
}
