//! Wide-field NV-magnetometry simulation and inverse analysis for
//! segmented magnetic nanowires.
//!
//! The crate models the imaging chain of a diamond NV microscope observing
//! micron-scale magnetic wires, and inverts such images for material
//! parameters:
//!
//! 1. [`magnetostatics`] — wire geometry, magnetization grids, stray fields
//!    by dipole summation, OVF read/write and MIF export.
//! 2. [`nv`] — NV crystal axes, spin-1 resonance frequencies (third-order
//!    expansion plus an exact-diagonalization oracle), ODMR lineshape, and
//!    least-squares vector-field reconstruction.
//! 3. [`optics`] — Airy point-spread function, the refraction-driven
//!    photon-redistribution kernel, and their convolution.
//! 4. [`imaging`] — forward model from a magnetization grid to a
//!    frequency-resolved ODMR cube and per-pixel fitted field/contrast/
//!    linewidth maps.
//! 5. [`analysis`] — dipole-feature extraction, grid-search recovery of
//!    saturation magnetization and diameter, per-segment magnetization
//!    estimation, and hysteresis/coercivity extraction.
//! 6. [`config`] / [`cli`] — plain-text run configs and the deterministic
//!    batch front end (CSV, 16-bit PGM, OVF, MIF, run reports).
//!
//! Everything is SI internally (m, T, Hz, A/m); config files accept the
//! usual lab units (nm, µm, G, MHz). See `examples/` for one runnable
//! example per capability.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod imaging;
pub mod magnetostatics;
pub mod nv;
pub mod optics;
pub mod report;
pub mod vec3;

pub use error::{Error, Result};

/// Vacuum permeability, T·m/A.
pub const MU_0: f64 = 4.0e-7 * std::f64::consts::PI;

/// `MU_0 / 4π`, the prefactor of the dipole field.
pub const MU_0_OVER_4PI: f64 = 1.0e-7;

/// Tesla per gauss.
pub const TESLA_PER_GAUSS: f64 = 1e-4;
