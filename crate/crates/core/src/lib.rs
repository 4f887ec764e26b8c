//! Field statistics on a rotating worldline in random classical zero-point
//! radiation.
//!
//! A point detector moves on a circle of radius `a` with angular velocity
//! `Ω` through the classical zero-point field (spectral function
//! π²h₀²(ω) = ħω/2). The crate computes what that detector measures:
//!
//! - [`kinematics`] — the worldline, its Frenet-Serret and Fermi-Walker
//!   tetrads, and projection of lab-frame tensors onto tetrad components;
//! - [`field`] — seeded Monte Carlo realizations of the random field
//!   (continuous band or discrete spectrum) and empirical correlation
//!   functions;
//! - [`analytic`] — the continuous-spectrum correlation functions, both by
//!   angular quadrature of the general expressions and in elementary
//!   closed form;
//! - [`spectral`] — the periodic (discrete-spectrum) machinery: Abel-Plana
//!   summation, regularized sums Σnᵖcos(nF), and discrete correlation
//!   functions split into divergent and thermal parts;
//! - [`thermo`] — the rotation temperature T_rot = ħΩ/2πk_B, Planck
//!   energy densities and the anisotropy masking factors.
//!
//! Internal computations are nondimensional: c = ħ = 1 and the base
//! wavenumber k₀ = Ω/c = 1, so β = Ωa/c equals the circle radius and all
//! correlation functions come out in units of ħcΩ⁴/c⁴. [`constants`]
//! carries the CODATA values used by the SI-facing layer in [`thermo`].
//!
//! With the default `parallel` feature, Monte Carlo realization loops and
//! grid sweeps run on rayon; results are bit-identical to the sequential
//! fallback because every reduction happens in a fixed order (see
//! [`exec`]).
//!
//! ```
//! use rotorad::analytic::{em_cf_closed_e11, em_cf_quadrature, CfComponent, CfLag, FieldPair};
//! use rotorad::kinematics::RotationParams;
//!
//! // detector at beta = 0.6, one radian of rotation phase between the
//! // two observation points (delta = Omega*gamma*dtau = 1)
//! let params = RotationParams::from_beta(1.0, 0.6)?;
//! let lag = CfLag::new(&params, 1.0 / (params.omega * params.gamma))?;
//!
//! let closed = em_cf_closed_e11(&lag)?;
//! let e11 = CfComponent::new(FieldPair::Ee, 1, 1)?;
//! let quad = em_cf_quadrature(&e11, &lag, None)?;
//! assert!(((closed - quad.value) / closed).abs() < 1e-8);
//! # Ok::<(), rotorad::Error>(())
//! ```

// indexed loops mirror the tensor-component notation throughout
#![allow(clippy::needless_range_loop)]
// quadrature nodes/weights and frozen oracles keep full printed precision
#![allow(clippy::excessive_precision)]

pub mod analytic;
pub mod constants;
pub mod error;
pub mod exec;
pub mod field;
pub mod kinematics;
pub mod quad;
pub mod spectral;
pub mod summation;
pub mod thermo;
pub mod validate;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
