//! Normal cycles of polytopes, external angles, intrinsic volumes and
//! polynomially weighted curvature measures.
//!
//! A polytope's normal cycle is stratified by pairs (face, normal cone). The
//! external angle of a face is the fraction of the unit sphere of
//! `span(Nor(F))` covered by `Nor(F)`, so orthant cones have angle `2^-c` and
//! the vertex angles of every polytope sum to 1.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::density::relative_integral;
use crate::error::{Error, Result};
use crate::oracle::{is_pointed, mc_solid_angle, orthonormal_span, RngSpec};
use crate::polytope::{cone_constraints, dot_q, Face, NormalCone, Polytope};
use crate::ring::{MultiPoly, Rational, Surd, SurdSum};

/// Accuracy claimed for closed-form floating-point angles.
const CLOSED_FORM_BOUND: f64 = 1e-14;
const GIRARD_BOUND: f64 = 1e-12;
/// Monte-Carlo bounds are this many standard errors.
const MC_SIGMAS: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AngleMethod {
    Exact,
    ClosedForm2d,
    Girard3d,
    MonteCarlo,
}

impl AngleMethod {
    pub fn tag(self) -> &'static str {
        match self {
            AngleMethod::Exact => "exact",
            AngleMethod::ClosedForm2d => "closed_form_2d",
            AngleMethod::Girard3d => "girard_3d",
            AngleMethod::MonteCarlo => "monte_carlo",
        }
    }
}

impl Serialize for AngleMethod {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// An exact surd sum, or a float with an error bound and the weakest method used.
#[derive(Clone, Debug, PartialEq)]
pub enum RealValue {
    Exact(SurdSum),
    Approx { value: f64, error_bound: f64, std_error: f64, method: AngleMethod },
}

impl RealValue {
    pub fn zero() -> Self {
        RealValue::Exact(SurdSum::zero())
    }

    pub fn rational(q: Rational) -> Self {
        RealValue::Exact(SurdSum::from_rational(q))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealValue::Exact(s) => s.to_f64(),
            RealValue::Approx { value, .. } => *value,
        }
    }

    pub fn error_bound(&self) -> f64 {
        match self {
            RealValue::Exact(_) => 0.0,
            RealValue::Approx { error_bound, .. } => *error_bound,
        }
    }

    pub fn as_exact(&self) -> Option<&SurdSum> {
        match self {
            RealValue::Exact(s) => Some(s),
            RealValue::Approx { .. } => None,
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_exact().and_then(SurdSum::as_rational)
    }

    pub fn method(&self) -> AngleMethod {
        match self {
            RealValue::Exact(_) => AngleMethod::Exact,
            RealValue::Approx { method, .. } => *method,
        }
    }

    /// Whether `target` lies within the error bound plus `slack`.
    pub fn agrees_with(&self, target: f64, slack: f64) -> bool {
        (self.to_f64() - target).abs() <= self.error_bound() + slack
    }

    fn parts(&self) -> (f64, f64, f64) {
        match self {
            RealValue::Exact(s) => (s.to_f64(), 0.0, 0.0),
            RealValue::Approx { value, error_bound, std_error, .. } => (*value, *error_bound, *std_error),
        }
    }

    pub fn add(&self, other: &RealValue) -> RealValue {
        if let (RealValue::Exact(a), RealValue::Exact(b)) = (self, other) {
            let mut s = a.clone();
            s.add(b);
            return RealValue::Exact(s);
        }
        let (v1, e1, s1) = self.parts();
        let (v2, e2, s2) = other.parts();
        let v = v1 + v2;
        RealValue::Approx {
            value: v,
            error_bound: e1 + e2 + f64::EPSILON * v.abs(),
            std_error: (s1 * s1 + s2 * s2).sqrt(),
            method: self.method().max(other.method()),
        }
    }

    pub fn sub(&self, other: &RealValue) -> RealValue {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, q: &Rational) -> RealValue {
        self.mul_surd(&Surd::rational(q.clone()))
    }

    pub fn mul_surd(&self, x: &Surd) -> RealValue {
        match self {
            RealValue::Exact(s) => {
                let mut out = SurdSum::zero();
                for (r, c) in s.terms() {
                    let root = Surd::sqrt(&Rational::from(r * &x.radicand));
                    out.add_surd(&root.scale(&(c * &x.coeff)));
                }
                RealValue::Exact(out)
            }
            RealValue::Approx { value, error_bound, std_error, method } => {
                let f = x.to_f64();
                RealValue::Approx {
                    value: value * f,
                    error_bound: error_bound * f.abs() + f64::EPSILON * (value * f).abs(),
                    std_error: std_error * f.abs(),
                    method: *method,
                }
            }
        }
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Exact(s) => write!(f, "{s}"),
            RealValue::Approx { value, error_bound, method, .. } => {
                write!(f, "{value} ± {error_bound:.3e} ({})", method.tag())
            }
        }
    }
}

impl Serialize for RealValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self {
            RealValue::Exact(v) => {
                m.serialize_entry("exact", &v.to_string())?;
                m.serialize_entry("approx", &v.to_f64())?;
                m.serialize_entry("method", AngleMethod::Exact.tag())?;
            }
            RealValue::Approx { value, error_bound, std_error, method } => {
                m.serialize_entry("approx", value)?;
                m.serialize_entry("error_bound", error_bound)?;
                m.serialize_entry("std_error", std_error)?;
                m.serialize_entry("method", method.tag())?;
            }
        }
        m.end()
    }
}

/// Settings for angles of cones of dimension at least 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AngleConfig {
    pub samples: usize,
    pub rng: RngSpec,
}

impl Default for AngleConfig {
    fn default() -> Self {
        AngleConfig { samples: 200_000, rng: RngSpec::new(0x00A1_6E5E) }
    }
}

/// `Nor(F) ∩ S` as a fraction of the unit sphere `S` of its span.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Angle {
    pub value: RealValue,
    pub method: AngleMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl Angle {
    fn exact(q: Rational) -> Self {
        Angle { value: RealValue::rational(q), method: AngleMethod::Exact, seed: None, samples: None }
    }

    fn float(value: f64, bound: f64, method: AngleMethod) -> Self {
        Angle {
            value: RealValue::Approx { value, error_bound: bound, std_error: 0.0, method },
            method,
            seed: None,
            samples: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CycleComponent {
    pub face: Face,
    pub cone: NormalCone,
    pub angle: Angle,
}

#[derive(Clone, Debug)]
pub struct NormalCycle {
    pub polytope: Polytope,
    /// Faces by increasing dimension, one component each.
    pub components: Vec<CycleComponent>,
}

impl NormalCycle {
    pub fn components_of_dim(&self, k: usize) -> impl Iterator<Item = &CycleComponent> {
        self.components.iter().filter(move |c| c.face.dim == k)
    }
}

pub fn build_normal_cycle(p: &Polytope) -> Result<NormalCycle> {
    build_normal_cycle_with(p, &AngleConfig::default())
}

pub fn build_normal_cycle_with(p: &Polytope, cfg: &AngleConfig) -> Result<NormalCycle> {
    p.require_full_dimensional()?;
    relative_cycle(p, cfg)
}

/// Normal cycle of `p` inside its own affine hull.
fn relative_cycle(p: &Polytope, cfg: &AngleConfig) -> Result<NormalCycle> {
    let mut components = Vec::new();
    for k in 0..=p.affine_dim() {
        for (i, face) in p.relative_faces(k).into_iter().enumerate() {
            let cone = p.relative_normal_cone(&face.polytope)?;
            let face_cfg = AngleConfig { samples: cfg.samples, rng: cfg.rng.derive(((k as u64) << 32) | i as u64) };
            let angle = external_angle_with(&cone, &face_cfg)?;
            components.push(CycleComponent { face, cone, angle });
        }
    }
    Ok(NormalCycle { polytope: p.clone(), components })
}

pub fn external_angle(cone: &NormalCone) -> Result<Angle> {
    external_angle_with(cone, &AngleConfig::default())
}

pub fn external_angle_with(cone: &NormalCone, cfg: &AngleConfig) -> Result<Angle> {
    if !is_pointed(cone) {
        return Err(Error::NonPointedCone);
    }
    let c = cone.dim();
    if c == 0 {
        return Ok(Angle::exact(Rational::one()));
    }
    let rays = extreme_rays(cone);
    let orthogonal = rays.len() == c && (0..c).all(|i| (i + 1..c).all(|j| dot_q(&rays[i], &rays[j]).is_zero()));
    if orthogonal {
        return Ok(Angle::exact(Rational::one() / Rational::from(2).pow(c as u32)));
    }
    match c {
        2 => Ok(Angle::float(planar_angle(&rays), CLOSED_FORM_BOUND, AngleMethod::ClosedForm2d)),
        3 => Ok(Angle::float(spherical_area(&rays), GIRARD_BOUND, AngleMethod::Girard3d)),
        _ => {
            let est = mc_solid_angle(cone, cfg.samples, &cfg.rng)?;
            Ok(Angle {
                value: RealValue::Approx {
                    value: est.estimate,
                    error_bound: MC_SIGMAS * est.std_error.max(1.0 / cfg.samples as f64),
                    std_error: est.std_error,
                    method: AngleMethod::MonteCarlo,
                },
                method: AngleMethod::MonteCarlo,
                seed: Some(cfg.rng.seed),
                samples: Some(cfg.samples),
            })
        }
    }
}

/// Generators on at least `dim - 1` independent facets of the cone, one per direction.
fn extreme_rays(cone: &NormalCone) -> Vec<Vec<Rational>> {
    let c = cone.dim();
    let constraints = cone_constraints(cone);
    let mut rays: Vec<Vec<Rational>> = Vec::new();
    for g in &cone.generators {
        if g.iter().all(Rational::is_zero) {
            continue;
        }
        let tight: Vec<Vec<Rational>> = constraints.iter().filter(|a| dot_q(a, g).is_zero()).cloned().collect();
        if crate::polytope::rank(&tight) + 1 < c {
            continue;
        }
        if !rays.iter().any(|r| same_direction(r, g)) {
            rays.push(g.clone());
        }
    }
    rays
}

fn same_direction(a: &[Rational], b: &[Rational]) -> bool {
    let ab = dot_q(a, b);
    ab.is_positive() && &ab * &ab == dot_q(a, a) * dot_q(b, b)
}

/// Rays expressed in an orthonormal basis of their span, normalized.
fn span_coordinates(rays: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    let basis = orthonormal_span(rays);
    rays.iter()
        .map(|r| {
            let v: Vec<f64> = basis.iter().map(|e| e.iter().zip(r).map(|(a, b)| a * b.to_f64()).sum()).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        })
        .collect()
}

/// Opening angle of a planar pointed cone over `2π`.
fn planar_angle(rays: &[Vec<Rational>]) -> f64 {
    let v = span_coordinates(rays);
    let cross = v[0][0] * v[1][1] - v[0][1] * v[1][0];
    let dot = v[0][0] * v[1][0] + v[0][1] * v[1][1];
    cross.abs().atan2(dot) / std::f64::consts::TAU
}

/// Solid angle of a pointed 3-cone over `4π`, as a fan of triangular cones
/// around an interior axis, each measured by the Van Oosterom-Strackee formula.
fn spherical_area(rays: &[Vec<Rational>]) -> f64 {
    let v = span_coordinates(rays);
    let mut axis = [0.0; 3];
    for r in &v {
        for i in 0..3 {
            axis[i] += r[i];
        }
    }
    let norm = (axis.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let axis: Vec<f64> = axis.iter().map(|x| x / norm).collect();
    // Cyclic order by angle around the axis.
    let u = orthogonal_to(&axis);
    let w = cross3(&axis, &u);
    let mut order: Vec<(f64, usize)> = v.iter().enumerate().map(|(i, r)| (dot3(r, &w).atan2(dot3(r, &u)), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    for k in 0..order.len() {
        let a = &v[order[k].1];
        let b = &v[order[(k + 1) % order.len()].1];
        total += triangle_solid_angle(&axis, a, b);
    }
    total / (4.0 * std::f64::consts::PI)
}

fn triangle_solid_angle(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let num = dot3(a, &cross3(b, c)).abs();
    let den = 1.0 + dot3(a, b) + dot3(a, c) + dot3(b, c);
    2.0 * num.atan2(den)
}

fn dot3(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn orthogonal_to(a: &[f64]) -> Vec<f64> {
    let pick = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let c = cross3(a, &pick);
    let n = dot3(&c, &c).sqrt();
    c.iter().map(|x| x / n).collect()
}

/// `Σ_{F ∈ k-faces} angle(F) ∫_F weight dvol_k`.
fn weighted_sum(cycle: &NormalCycle, k: usize, weight: &MultiPoly) -> Result<RealValue> {
    let mut acc = RealValue::zero();
    for comp in cycle.components_of_dim(k) {
        let integral = relative_integral(weight, &comp.face.polytope)?;
        acc = acc.add(&comp.angle.value.mul_surd(&integral));
    }
    Ok(acc)
}

/// `V_0(P), .., V_n(P)` of a full-dimensional polytope.
pub fn intrinsic_volumes(p: &Polytope) -> Result<Vec<RealValue>> {
    let cycle = build_normal_cycle(p)?;
    let one = MultiPoly::one(p.ambient_dim());
    (0..=p.ambient_dim()).map(|k| weighted_sum(&cycle, k, &one)).collect()
}

/// The `k`-th curvature measure of a full-dimensional polytope integrated against `weight`.
pub fn curvature_measure(p: &Polytope, k: usize, weight: &MultiPoly) -> Result<RealValue> {
    p.require_full_dimensional()?;
    let cycle = build_normal_cycle(p)?;
    curvature_on_cycle(&cycle, k, weight)
}

pub fn curvature_on_cycle(cycle: &NormalCycle, k: usize, weight: &MultiPoly) -> Result<RealValue> {
    let n = cycle.polytope.ambient_dim();
    if k > n {
        return Err(Error::InvalidArgument(format!("curvature index {k} exceeds {n}")));
    }
    if weight.nvars() != n {
        return Err(Error::DimensionMismatch { expected: n, found: weight.nvars() });
    }
    weighted_sum(cycle, k, weight)
}

/// `K -> Σ (k, w) curvature_measure(K, k, w)`.
///
/// Lower-dimensional bodies are measured inside their affine hull, where
/// curvature measures are intrinsic; `k > dim K` contributes zero.
#[derive(Clone, Debug)]
pub struct NcValuation {
    pub ambient_dim: usize,
    pub terms: Vec<(usize, MultiPoly)>,
    pub config: AngleConfig,
}

pub fn nc_valuation(ambient_dim: usize, terms: Vec<(usize, MultiPoly)>) -> Result<NcValuation> {
    for (k, w) in &terms {
        if *k > ambient_dim {
            return Err(Error::InvalidArgument(format!("curvature index {k} exceeds {ambient_dim}")));
        }
        if w.nvars() != ambient_dim {
            return Err(Error::DimensionMismatch { expected: ambient_dim, found: w.nvars() });
        }
    }
    Ok(NcValuation { ambient_dim, terms, config: AngleConfig::default() })
}

impl NcValuation {
    pub fn evaluate(&self, p: &Polytope) -> Result<RealValue> {
        if p.ambient_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: p.ambient_dim() });
        }
        let cycle = relative_cycle(p, &self.config)?;
        let mut acc = RealValue::zero();
        for (k, w) in &self.terms {
            if *k <= p.affine_dim() {
                acc = acc.add(&weighted_sum(&cycle, *k, w)?);
            }
        }
        Ok(acc)
    }
}
