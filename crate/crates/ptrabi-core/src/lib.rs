//! Quasi-exact Floquet solutions of a harmonically driven two-level system
//! with balanced gain and loss.
//!
//! The model is a two-level system whose Hamiltonian combines an imaginary
//! bias `i*(gamma/2)*sigma_z` with a real harmonic drive
//! `((nu0 + nu1*cos(omega*t))/2)*sigma_x`. In scaled time `tau = omega*t`
//! the amplitudes obey
//!
//! ```text
//! da1/dtau = -i*(nu(tau)/(2*omega))*a2 + (gamma/(2*omega))*a1
//! da2/dtau = -i*(nu(tau)/(2*omega))*a1 - (gamma/(2*omega))*a2
//! ```
//!
//! On the resonance `nu0 = (n+1)*omega` the system admits an `(n+1)`
//! dimensional invariant polynomial subspace generated by an sl(2) algebra
//! of first-order differential operators. Solvable parameter combinations
//! are the zero set of an exact determinant polynomial in the dimensionless
//! couplings `X = nu1^2/omega^2` and `G = gamma^2/omega^2`.
//!
//! The crate is organized in layers:
//!
//! * [`poly`] exact sparse bivariate polynomials over big rationals
//! * [`sl2`] the spin-`n/2` representation and the quadratic operators it generates
//! * [`constraint`] the tridiagonal resonance operator and its determinant polynomial
//! * [`spectrum`] real root isolation, degeneracies, null spaces, curve tracing
//! * [`floquet`] the non-Hermitian ODE system, monodromy, and independent
//!   verification of the constructed solutions
//!
//! Everything except the final floating-point projections is computed in
//! exact rational arithmetic. The crate is `no_std` (with `alloc`); IO and
//! serialization live in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constraint;
mod error;
mod linalg;
pub mod poly;
pub mod sl2;
pub mod spectrum;
mod univariate;
pub mod floquet;

pub use error::{Error, Result};
pub use poly::{BivariatePolynomial, Rational};

/// Complex double-precision scalar used by the Floquet layer.
pub type Complex = num_complex::Complex<f64>;
