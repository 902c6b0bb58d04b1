//! Brute-force Monte-Carlo estimators, kept independent of the exact routines
//! they certify. Every estimator is a deterministic function of its [`RngSpec`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::density::PolyDensity;
use crate::error::{Error, Result};
use crate::polytope::{cone_constraints, rank, rref, NormalCone, Polytope};
use crate::valuation::check_dim;

/// Name of the only supported generator.
pub const CHACHA8: &str = "chacha8";

/// A seeded generator choice; identical specs give identical streams.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub algorithm: String,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec { seed, algorithm: CHACHA8.to_string() }
    }

    /// An independent stream keyed by `key`, for per-item determinism.
    pub fn derive(&self, key: u64) -> RngSpec {
        RngSpec { seed: splitmix64(self.seed ^ splitmix64(key)), algorithm: self.algorithm.clone() }
    }

    pub fn rng(&self) -> Result<ChaCha8Rng> {
        if self.algorithm != CHACHA8 {
            return Err(Error::InvalidArgument(format!("unknown generator {:?}", self.algorithm)));
        }
        Ok(ChaCha8Rng::seed_from_u64(self.seed))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl Estimate {
    /// Whether `exact` lies within `k` standard errors.
    pub fn agrees(&self, exact: f64, k: f64) -> bool {
        (self.estimate - exact).abs() <= k * self.std_error
    }
}

fn mean_and_error(sum: f64, sum_sq: f64, n: usize, scale: f64) -> Estimate {
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 { ((sum_sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0) } else { 0.0 };
    Estimate { estimate: scale * mean, std_error: scale * (var / nf).sqrt(), samples: n }
}

/// Facet inequalities `a . x <= b` in floating point.
fn float_halfspaces(p: &Polytope) -> Result<Vec<(Vec<f64>, f64)>> {
    Ok(p.facet_inequalities()?.into_iter().map(|(a, b)| (a.iter().map(|x| x.to_f64()).collect(), b.to_f64())).collect())
}

fn bounding_box(p: &Polytope) -> (Vec<f64>, Vec<f64>) {
    let n = p.ambient_dim();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for v in p.vertices() {
        for i in 0..n {
            let x = v[i].to_f64();
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    (lo, hi)
}

/// `E[f(X) 1_P(X)] * vol(box)` for `X` uniform in the bounding box.
fn mc_box<F: Fn(&[f64]) -> f64>(p: &Polytope, samples: usize, rng: &RngSpec, f: F) -> Result<Estimate> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional { affine_dim: p.affine_dim(), ambient_dim: p.ambient_dim() });
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let halfspaces = float_halfspaces(p)?;
    let (lo, hi) = bounding_box(p);
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut g = rng.rng()?;
    let mut x = vec![0.0; lo.len()];
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        for i in 0..x.len() {
            x[i] = lo[i] + (hi[i] - lo[i]) * g.random::<f64>();
        }
        let inside = halfspaces.iter().all(|(a, b)| a.iter().zip(&x).map(|(u, v)| u * v).sum::<f64>() <= *b);
        if inside {
            let v = f(&x);
            sum += v;
            sum_sq += v * v;
        }
    }
    Ok(mean_and_error(sum, sum_sq, samples, box_vol))
}

/// Rejection-sampling volume estimate.
pub fn mc_volume(p: &Polytope, samples: usize, rng: &RngSpec) -> Result<Estimate> {
    mc_box(p, samples, rng, |_| 1.0)
}

/// Monte-Carlo estimate of `∫_P F`.
pub fn mc_integrate(mu: &PolyDensity, p: &Polytope, samples: usize, rng: &RngSpec) -> Result<Estimate> {
    check_dim(p.ambient_dim(), mu.ambient_dim())?;
    mc_box(p, samples, rng, |x| mu.poly().eval_f64(x))
}

/// Whether the cone contains no line.
pub fn is_pointed(cone: &NormalCone) -> bool {
    let nonzero: Vec<&Vec<_>> = cone.generators.iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
    match cone.dim() {
        0 => true,
        1 => nonzero.iter().all(|g| crate::polytope::dot_q(g, nonzero[0]).is_positive()),
        c => rank(&cone_constraints(cone)) == c,
    }
}

/// Orthonormal basis of the span of `rows`, by Gram-Schmidt in floating point.
pub(crate) fn orthonormal_span(rows: &[Vec<crate::ring::Rational>]) -> Vec<Vec<f64>> {
    let (basis, _) = rref(rows);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut v: Vec<f64> = b.iter().map(|x| x.to_f64()).collect();
        for _ in 0..2 {
            for e in &out {
                let d: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
                for (vi, ei) in v.iter_mut().zip(e) {
                    *vi -= d * ei;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push(v.into_iter().map(|x| x / norm).collect());
    }
    out
}

/// Fraction of the unit sphere of `span(cone)` lying in the cone.
pub fn mc_solid_angle(cone: &NormalCone, samples: usize, rng: &RngSpec) -> Result<Estimate> {
    if !is_pointed(cone) {
        return Err(Error::NonPointedCone);
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let basis = orthonormal_span(&cone.generators);
    if basis.is_empty() {
        return Ok(Estimate { estimate: 1.0, std_error: 0.0, samples });
    }
    let constraints: Vec<Vec<f64>> =
        cone_constraints(cone).iter().map(|c| c.iter().map(|x| x.to_f64()).collect()).collect();
    let mut g = rng.rng()?;
    let n = cone.ambient_dim;
    let mut y = vec![0.0; n];
    let mut hits = 0usize;
    for _ in 0..samples {
        y.iter_mut().for_each(|v| *v = 0.0);
        for e in &basis {
            let z: f64 = g.sample(StandardNormal);
            for (yi, ei) in y.iter_mut().zip(e) {
                *yi += z * ei;
            }
        }
        if constraints.iter().all(|c| c.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() >= 0.0) {
            hits += 1;
        }
    }
    let h = hits as f64;
    Ok(mean_and_error(h, h, samples, 1.0))
}
