//! Physical constants and unit conversions.
//!
//! Frequencies and energies are carried in eV with ħ = 1, distances in nm.
//! Pressures leave the library in Pa and free energies in J/m².

/// ħc in eV·nm (CODATA 2018).
pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

/// Boltzmann constant in eV/K (CODATA 2018).
pub const BOLTZMANN_EV_PER_K: f64 = 8.617_333_262e-5;

/// Elementary charge in J/eV.
pub const JOULE_PER_EV: f64 = 1.602_176_634e-19;

/// 1 eV/nm³ expressed in Pa.
pub const PA_PER_EV_NM3: f64 = JOULE_PER_EV * 1e27;

/// 1 eV/nm² expressed in J/m².
pub const J_PER_M2_PER_EV_NM2: f64 = JOULE_PER_EV * 1e18;

/// Thermal energy k_B T in eV.
#[inline]
pub fn thermal_energy(temperature_k: f64) -> f64 {
    BOLTZMANN_EV_PER_K * temperature_k
}
