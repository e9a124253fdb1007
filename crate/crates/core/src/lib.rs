//! Intelligent and quasi-intelligent spin states, coherent wave packets on
//! the sphere built from them, and their rigid-rotor time evolution including
//! fractional revivals.
//!
//! The crate is organized in four layers:
//!
//! * [`angular`] — special functions and operator matrices in the |l,m⟩
//!   basis: log-factorials, Clebsch-Gordan coefficients, spherical harmonics,
//!   angular-momentum matrices, Gauss-Legendre quadrature.
//! * [`intelligent`] — eigenstates of the non-normal operator Lx + iηLy per
//!   l-block, the deformed SU(2) generators, and squeezing/uncertainty
//!   diagnostics.
//! * [`wavepacket`] — the exponential coherent parent packet, its
//!   partial-wave coefficients, the k-indexed ladder family, and density
//!   evaluation on sphere grids.
//! * [`dynamics`] — rigid-rotor time evolution, autocorrelation, fractional
//!   revival snapshots and clone counting.
//!
//! Conventions fixed throughout: integer angular momenta only, ℏ = 1,
//! Condon-Shortley phase, m-indices ascending (−l..+l) in every vector and
//! matrix.

pub mod angular;
pub mod dynamics;
mod error;
pub mod intelligent;
pub mod wavepacket;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Complex scalar used everywhere in this crate.
pub type Complex = num_complex::Complex<f64>;
