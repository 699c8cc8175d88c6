//! Channel models for near-field holographic MIMO links.
//!
//! The crate builds line-of-sight channels from the free-space dyadic Green's
//! function (an integral-form oracle and its reduced-cost approximations),
//! the classical scalar wavefront models, and stochastic NLoS channels, and
//! evaluates them with NMSE, equal-power capacity and effective DoF.
//!
//! ```
//! use hmimo::geometry::{build_placed_aperture, ApertureSpec, Frame, WaveSpec};
//! use hmimo::los::{cicm, pscm};
//! use hmimo::metrics::nmse;
//! use nalgebra::Vector3;
//!
//! let wave = WaveSpec::from_wavelength(1.0)?;
//! let tx = build_placed_aperture(ApertureSpec::gapless(4, 4, 0.05), Vector3::zeros(), Frame::standard())?;
//! let rx = build_placed_aperture(ApertureSpec::gapless(2, 2, 0.05), Vector3::new(0.0, 0.0, 10.0), Frame::standard())?;
//! let reference = cicm(&tx, &rx, &wave)?;
//! let approx = pscm(&tx, &rx, &wave)?;
//! assert!(nmse(&approx, &reference)?.value < 1e-3);
//! # Ok::<(), hmimo::Error>(())
//! ```

pub mod em;
pub mod error;
pub mod geometry;
pub mod io;
pub mod los;
pub mod metrics;
pub mod nlos;
pub mod sweep;

pub use error::{Error, Result};
