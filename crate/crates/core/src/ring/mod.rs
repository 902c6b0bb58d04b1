//! Exact scalars, multivariate polynomials and grid interpolation.

mod interp;
mod poly;
mod rational;
mod surd;

pub use interp::{coefficient_weight, grid_points, interpolate_from_grid, interpolate_univariate, vandermonde_inverse};
pub use poly::{MonomialRecord, MultiIndex, MultiPoly};
pub use rational::Rational;
pub use surd::{Surd, SurdSum};
