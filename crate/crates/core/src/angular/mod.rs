//! Special functions and operator matrices in the |l,m⟩ basis.

mod clebsch;
mod factorial;
mod operators;
mod quadrature;
mod spherical;

pub use clebsch::{clebsch_gordan, CGKey};
pub use factorial::log_factorial;
pub use operators::{ladder_coeff, operator_matrix, OperatorKind, OperatorMatrix};
pub use quadrature::{sphere_quadrature, GaussLegendre, SphereQuadrature};
pub use spherical::{spherical_harmonic, LegendreTable};

pub(crate) use factorial::lnfac;
pub(crate) use spherical::harmonic_from_table;
