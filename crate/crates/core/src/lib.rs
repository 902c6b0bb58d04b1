//! Exact smooth valuations on convex polytopes.
//!
//! Valuations are built as mixed Minkowski derivatives of polynomial density
//! integrals, evaluated with exact rational arithmetic throughout. Angles of
//! normal cones are the only quantities that may be irrational; they are
//! carried with explicit error bounds.

pub mod density;
pub mod error;
pub mod normal_cycle;
pub mod oracle;
pub mod polytope;
pub mod product;
pub mod ring;
pub mod valuation;

pub use density::{integrate, integrate_over_face, DensityRecord, PolyDensity};
pub use error::{Error, Result};
pub use normal_cycle::{
    build_normal_cycle, curvature_measure, external_angle, intrinsic_volumes, nc_valuation, Angle, AngleConfig,
    AngleMethod, NcValuation, NormalCycle, RealValue,
};
pub use oracle::{mc_integrate, mc_solid_angle, mc_volume, Estimate, RngSpec};
pub use polytope::{Face, NormalCone, Point, Polytope, PolytopeRecord};
pub use product::{alesker_product, exterior_product, fubini_rhs, ProductValuation, SliceEstimate, SliceQuadrature};
pub use ring::{MonomialRecord, MultiIndex, MultiPoly, Rational, Surd, SurdSum};
pub use valuation::{
    default_probes, euler, euler_characteristic, gamma_vanishes, lambda_k, mcmullen_decompose, mixed_volume, w_degree,
    Probe, ThetaTerm, ThetaValuation, TransInvValuation, Valuation,
};
