//! Pseudo-spectral simulation and verification toolkit for a coupled
//! Schrodinger-Kawahara system on a periodic domain:
//!
//! ```text
//! i u_t + u_xx = alpha u v + beta |u|^2 u
//! v_t + gamma v_xxx - delta v_xxxxx + v v_x = epsilon (|u|^2)_x
//! ```
//!
//! with complex short wave `u`, real long wave `v`, and `delta != 0`
//! throughout. The crate provides:
//!
//! * a Fourier layer with dx-weighted Parseval normalization, spectral
//!   derivatives, dealiasing, and quadrature ([`grid`], [`spectral`]);
//! * exact propagators for the free Schrodinger and fifth-order dispersive
//!   flows ([`propagators`]);
//! * an exponential (ETDRK4) time stepper for the coupled system with
//!   conserved-quantity diagnostics ([`dynamics`]);
//! * the interval-decomposition growth experiment for the long wave
//!   ([`globalization`]);
//! * the dilation symmetry checks ([`scaling`]);
//! * discrete Bourgain-space norms and bilinear-estimate experiments
//!   ([`bourgain`], [`bilinear`]);
//! * a config/snapshot/CSV layer and the `skw` command line ([`io`], [`cli`]);
//! * the invariant check suite behind `skw verify` ([`verify`]).

pub mod bilinear;
pub mod bourgain;
pub mod cli;
pub mod dynamics;
mod error;
pub mod globalization;
pub mod grid;
pub mod io;
pub mod propagators;
pub mod scaling;
pub mod spectral;
pub mod verify;

mod etd;

pub use error::{Error, Result};
pub use grid::{ComplexField, Grid, RealField};
pub use propagators::PhysParams;
pub use rustfft::num_complex::Complex64;
