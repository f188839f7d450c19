//! Numerical library for the stretched non-local (Kilbas-Saigo) calculus.
//!
//! The building blocks, bottom up:
//! - [`special`]: gamma-family special functions on real and complex arguments.
//! - [`double_gamma`]: the Barnes-type double gamma function G(z; tau).
//! - [`kilbas_saigo`]: the three-parameter Kilbas-Saigo function E_{a,m,l}(z)
//!   evaluated by series, Mellin-Barnes quadrature, or asymptotics.
//! - [`fracops`]: the stretched Caputo operator D^(alpha,gamma) and closed-form
//!   solutions of its first- and second-order eigen-equations.
//! - [`pearson_spectral`]: OU/CIR/Jacobi diffusions and spectral series for
//!   classical, stretched, and hyperbolic transition densities.
//! - [`stochastic_sim`]: Monte Carlo samplers of the random time change Z and
//!   of time-changed Pearson diffusions.

pub mod double_gamma;
pub mod error;
pub mod fracops;
pub mod kilbas_saigo;
pub mod pearson_spectral;
pub mod special;
pub mod stats;
pub mod stochastic_sim;

pub use error::{Error, Result};
pub use num_complex::Complex64;
