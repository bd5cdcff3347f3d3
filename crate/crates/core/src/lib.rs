pub mod cli;
pub mod dispersion;
pub mod lifshitz;
pub mod models;
pub mod optics;
pub mod quad;
pub mod thermo;
pub mod units;
