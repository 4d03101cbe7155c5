//! Design library for line-of-sight MIMO links between planar antenna arrays.
//!
//! The crate models a free-space point-to-point link between two uniform
//! rectangular arrays (URAs) of dual-polarized antennas operating in the
//! radiative near field, where the spherical wavefront gives the channel
//! matrix a rank far beyond one. It provides:
//!
//! - [`geometry`]: antenna indexing, element positions, pairwise distances,
//!   aperture dimensions, optimal-spacing formulas, and near-field
//!   diagnostics.
//! - [`channel`]: exact and Fresnel (paraxial) channel matrices, the
//!   dual-polarized Kronecker composition with imperfect cross-polar
//!   discrimination, and the Dirichlet-kernel closed form for the Gram
//!   off-diagonals.
//! - [`eigencap`]: Gram eigen-spectra, general and two-level water-filling,
//!   and capacity in bits per channel use and bits per second.
//! - [`optimizer`]: aperture length/area minimization over array
//!   factorizations and spacing splits, with a grid-search oracle.
//! - [`scaling`]: antenna counts in a fixed aperture area, capacity versus
//!   carrier frequency, and the asymptotic capacity limit.
//! - [`aperture_gain`]: realistic per-pair antenna gains by numerical
//!   quadrature of the aperture-gain integral.
//!
//! All quantities are SI (meters, hertz, watts, watts per hertz). Every
//! operation is a pure function of its inputs; with the `parallel` feature
//! (default) the data-parallel inner loops run on rayon, and without it the
//! same code runs sequentially with identical results.
//!
//! # Example
//!
//! Capacity of an 8x8 dual-polarized link at the capacity-optimal spacing,
//! 25 dB SNR, exact spherical-wavefront model:
//!
//! ```
//! use losmimo::channel::{channel_gain_far, dual_pol, exact_single_pol, GainModel, XpdModel};
//! use losmimo::eigencap::{capacity, gram_eigenvalues, waterfill};
//! use losmimo::geometry::LinkGeometry;
//!
//! let link = LinkGeometry::symmetric_optimal(8, 8, 0.01, 100.0, 0.005)?;
//! assert!((link.tx().spacing_h() - 0.35355).abs() < 1e-4);
//!
//! let h = exact_single_pol(&link, &GainModel::Isotropic)?;
//! let dual = dual_pol(&h, &XpdModel::from_kappa(0.1)?)?;
//! let spectrum = gram_eigenvalues(&dual)?;
//!
//! let beta = channel_gain_far(&link, &GainModel::Isotropic)?;
//! let power = 10f64.powf(2.5) / beta; // P*beta/sigma^2 = 25 dB
//! let allocation = waterfill(&spectrum, power, 1.0)?;
//! let result = capacity(&spectrum, &allocation, 1.0)?;
//!
//! // 128 spatial dimensions at roughly 7 bits each.
//! assert!(result.bits_per_use() > 880.0);
//! # Ok::<(), losmimo::Error>(())
//! ```

// Validations use `!(x > 0.0)` so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod aperture_gain;
pub mod channel;
pub mod eigencap;
mod error;
pub mod geometry;
pub mod optimizer;
mod par;
pub mod quad;
pub mod scaling;

pub use error::{Error, Result};

/// Exact speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Rounded speed of light, m/s. Gives round wavelengths at round carrier
/// frequencies (10 mm at 30 GHz).
pub const SPEED_OF_LIGHT_APPROX: f64 = 3.0e8;

/// Wavelength in meters for a carrier frequency in hertz.
pub fn wavelength(frequency_hz: f64, c: f64) -> Result<f64> {
    if !(frequency_hz > 0.0) || !(c > 0.0) {
        return Err(Error::domain(format!(
            "wavelength requires frequency_hz > 0 and c > 0 (got {frequency_hz}, {c})"
        )));
    }
    Ok(c / frequency_hz)
}
