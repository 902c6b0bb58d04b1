//! Smooth valuations in Θ-representation and the operations built on them.
//!
//! A [`ThetaTerm`] `(c, F dy, A_1..A_s)` evaluates on `K` to
//! `c * ∂^s/∂λ_1..∂λ_s |_0 ∫_{K + Σ λ_j A_j} F`.
//!
//! Scaling curves `t -> φ(tK + x)` are computed by polarization. With
//! `F(x + y) = Σ_e G_e(y)` split into homogeneous parts, the map
//! `(t, λ) -> ∫_{tK + Σ λ_j A_j} G_e` is a homogeneous polynomial of degree
//! `N = n + e` on the non-negative orthant. Its coefficient of
//! `t^k λ_1..λ_s` (`k = N - s`) is recovered from values at non-negative integer
//! points by the polarization identity for symmetric multilinear forms:
//!
//! ```text
//! (1/k!) Σ_{a ≤ k} Σ_{b ≤ m} C(k,a) Π_g C(m_g,b_g) (-1)^{N-a-|b|} ∫_{aK + Σ_g b_g B_g} G_e
//! ```
//!
//! where the `B_g` are the distinct bodies with multiplicities `m_g`. One batch
//! of Minkowski sums therefore yields the whole curve. The tensor-grid
//! interpolation route is kept as [`ThetaValuation::evaluate_by_interpolation`].

mod probes;

use std::collections::HashMap;

use crate::density::{integrate_poly, PolyDensity};
use crate::error::{Error, Result};
use crate::polytope::{Point, Polytope};
use crate::ring::{grid_points, interpolate_from_grid, interpolate_univariate, MultiIndex, MultiPoly, Rational};

pub use probes::{default_probes, Probe};

/// An exactly evaluable valuation on polytopes of a fixed ambient dimension.
pub trait Valuation {
    fn ambient_dim(&self) -> usize;

    /// Upper bound for the degree of every scaling curve `t -> φ(tK + x)`.
    fn t_degree_bound(&self) -> usize;

    fn evaluate(&self, k: &Polytope) -> Result<Rational>;

    /// `t -> φ(tK + x)`, by sampling `t = 0..=bound` and interpolating.
    fn scaling_curve(&self, k: &Polytope, x: &[Rational]) -> Result<MultiPoly> {
        check_dim(self.ambient_dim(), k.ambient_dim())?;
        check_dim(self.ambient_dim(), x.len())?;
        let values: Vec<Rational> = (0..=self.t_degree_bound())
            .map(|t| self.evaluate(&k.scale_translate(&Rational::from(t), x)?))
            .collect::<Result<_>>()?;
        Ok(interpolate_univariate(&values))
    }
}

impl<V: Valuation + ?Sized> Valuation for &V {
    fn ambient_dim(&self) -> usize {
        (**self).ambient_dim()
    }
    fn t_degree_bound(&self) -> usize {
        (**self).t_degree_bound()
    }
    fn evaluate(&self, k: &Polytope) -> Result<Rational> {
        (**self).evaluate(k)
    }
    fn scaling_curve(&self, k: &Polytope, x: &[Rational]) -> Result<MultiPoly> {
        (**self).scaling_curve(k, x)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// One summand `c * Θ(F dy; A_1, .., A_s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaTerm {
    pub coeff: Rational,
    pub density: PolyDensity,
    pub bodies: Vec<Polytope>,
}

impl ThetaTerm {
    pub fn new(coeff: Rational, density: PolyDensity, bodies: Vec<Polytope>) -> Result<Self> {
        let n = density.ambient_dim();
        for b in &bodies {
            check_dim(n, b.ambient_dim())?;
        }
        Ok(ThetaTerm { coeff, density, bodies })
    }

    pub fn ambient_dim(&self) -> usize {
        self.density.ambient_dim()
    }

    /// Bodies grouped by equality, in order of first appearance.
    fn groups(&self) -> Vec<(Polytope, u32)> {
        let mut out: Vec<(Polytope, u32)> = Vec::new();
        for b in &self.bodies {
            match out.iter_mut().find(|(p, _)| p == b) {
                Some((_, m)) => *m += 1,
                None => out.push((b.clone(), 1)),
            }
        }
        out
    }

    /// Coefficients of `t^0..t^bound` in `t -> term(tK + x)`.
    fn curve(&self, k: &Polytope, x: &[Rational], bound: usize) -> Result<Vec<Rational>> {
        let n = self.ambient_dim();
        check_dim(n, k.ambient_dim())?;
        check_dim(n, x.len())?;
        let mut coeffs = vec![Rational::zero(); bound + 1];
        if self.coeff.is_zero() || self.density.poly().is_zero() {
            return Ok(coeffs);
        }
        let s = self.bodies.len();
        let shifted = self.density.poly().translate(x)?;
        let parts: Vec<(usize, MultiPoly)> = (0..=shifted.degree() as u32)
            .map(|e| (e as usize, shifted.homogeneous_part(e)))
            .filter(|(e, g)| !g.is_zero() && n + e >= s)
            .collect();
        let Some(kmax) = parts.iter().map(|(e, _)| n + e - s).max() else {
            return Ok(coeffs);
        };
        if kmax > bound {
            return Err(Error::InvalidArgument(format!("scaling curve degree {kmax} exceeds bound {bound}")));
        }
        let groups = self.groups();
        let sums = group_sums(n, &groups)?;
        let mut scaled: Vec<Polytope> = Vec::with_capacity(kmax + 1);
        for a in 0..=kmax {
            scaled.push(if a == 0 { Polytope::origin(n) } else { k.scale(&Rational::from(a)) });
        }
        let mut cache: HashMap<(usize, usize), Polytope> = HashMap::new();
        for (e, g) in &parts {
            let big_n = n + e;
            let kk = big_n - s;
            let mut acc = Rational::zero();
            for (a, ka) in scaled.iter().enumerate().take(kk + 1) {
                for (bi, (b, sb, wb)) in sums.iter().enumerate() {
                    let body = match cache.get(&(a, bi)) {
                        Some(p) => p.clone(),
                        None => {
                            let p = ka.minkowski_sum(sb)?;
                            cache.insert((a, bi), p.clone());
                            p
                        }
                    };
                    let val = integrate_poly(g, &body)?;
                    if val.is_zero() {
                        continue;
                    }
                    let w = Rational::binomial(kk as u32, a as u32) * wb;
                    let sign_odd = (big_n - a - b) % 2 == 1;
                    let term = w * val;
                    if sign_odd {
                        acc -= &term;
                    } else {
                        acc += &term;
                    }
                }
            }
            coeffs[kk] += acc / Rational::factorial(kk as u32);
        }
        for c in coeffs.iter_mut() {
            *c *= &self.coeff;
        }
        Ok(coeffs)
    }

    /// The defining mixed derivative, via the interpolation grid `{0..=n+d}^s`.
    pub fn evaluate_by_interpolation(&self, k: &Polytope) -> Result<Rational> {
        let n = self.ambient_dim();
        check_dim(n, k.ambient_dim())?;
        let s = self.bodies.len();
        let d = self.density.degree().max(0) as usize;
        let bound = n + d;
        let mut samples = Vec::new();
        for point in grid_points(s, bound) {
            let mut body = k.clone();
            for (lam, a) in point.iter().zip(&self.bodies) {
                if *lam > 0 {
                    body = body.minkowski_sum(&a.scale(&Rational::from(*lam)))?;
                }
            }
            samples.push((point, integrate_poly(self.density.poly(), &body)?));
        }
        let poly = interpolate_from_grid(samples, s, bound)?;
        Ok(&self.coeff * &poly.coeff_at(&MultiIndex::all_ones(s)))
    }
}

/// For each `b <= m`: (|b|, Σ_g b_g B_g, Π_g C(m_g, b_g)).
fn group_sums(n: usize, groups: &[(Polytope, u32)]) -> Result<Vec<(usize, Polytope, Rational)>> {
    let mut out = vec![(0usize, Polytope::origin(n), Rational::one())];
    for (body, m) in groups {
        let mut next = Vec::with_capacity(out.len() * (*m as usize + 1));
        for (size, sum, w) in &out {
            let mut cur = sum.clone();
            for b in 0..=*m {
                if b > 0 {
                    cur = cur.minkowski_sum(body)?;
                }
                next.push((size + b as usize, cur.clone(), w * &Rational::binomial(*m, b)));
            }
        }
        out = next;
    }
    Ok(out)
}

/// A finite sum of Θ-terms on `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaValuation {
    ambient_dim: usize,
    terms: Vec<ThetaTerm>,
}

impl ThetaValuation {
    pub fn new(ambient_dim: usize, terms: Vec<ThetaTerm>) -> Result<Self> {
        for t in &terms {
            check_dim(ambient_dim, t.ambient_dim())?;
        }
        Ok(ThetaValuation { ambient_dim, terms })
    }

    pub fn zero(n: usize) -> Self {
        ThetaValuation { ambient_dim: n, terms: Vec::new() }
    }

    pub fn single(term: ThetaTerm) -> Self {
        ThetaValuation { ambient_dim: term.ambient_dim(), terms: vec![term] }
    }

    /// `K -> vol(K)`.
    pub fn lebesgue(n: usize) -> Self {
        Self::density(PolyDensity::lebesgue(n))
    }

    /// `K -> ∫_K F`.
    pub fn density(mu: PolyDensity) -> Self {
        Self::single(ThetaTerm { coeff: Rational::one(), density: mu, bodies: Vec::new() })
    }

    pub fn terms(&self) -> &[ThetaTerm] {
        &self.terms
    }

    pub fn add(&self, other: &ThetaValuation) -> Result<ThetaValuation> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        Ok(ThetaValuation {
            ambient_dim: self.ambient_dim,
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> ThetaValuation {
        let terms = self.terms.iter().map(|t| ThetaTerm { coeff: &t.coeff * c, ..t.clone() }).collect();
        ThetaValuation { ambient_dim: self.ambient_dim, terms }
    }

    /// Fewest bodies over all terms; every term lies in `W_{n - s}` for `s` at most this.
    pub fn max_body_count(&self) -> usize {
        self.terms.iter().map(|t| t.bodies.len()).max().unwrap_or(0)
    }

    /// Every term's density frozen to its value at `x`.
    ///
    /// When all terms carry the same number `s` of bodies this represents
    /// `Λ_{n-s}(φ)(x)`, the lowest nonzero scaling coefficient.
    pub fn frozen_at(&self, x: &[Rational]) -> Result<ThetaValuation> {
        check_dim(self.ambient_dim, x.len())?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let c = t.density.poly().eval(x)?;
                Ok(ThetaTerm {
                    coeff: t.coeff.clone(),
                    density: PolyDensity::new(MultiPoly::constant(self.ambient_dim, c)),
                    bodies: t.bodies.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(ThetaValuation { ambient_dim: self.ambient_dim, terms })
    }

    pub fn evaluate_by_interpolation(&self, k: &Polytope) -> Result<Rational> {
        check_dim(self.ambient_dim, k.ambient_dim())?;
        self.terms.iter().map(|t| t.evaluate_by_interpolation(k)).sum()
    }

    fn curve_coefficients(&self, k: &Polytope, x: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.ambient_dim, k.ambient_dim())?;
        check_dim(self.ambient_dim, x.len())?;
        let bound = self.t_degree_bound();
        let mut acc = vec![Rational::zero(); bound + 1];
        for t in &self.terms {
            for (a, c) in acc.iter_mut().zip(t.curve(k, x, bound)?) {
                *a += c;
            }
        }
        Ok(acc)
    }
}

impl Valuation for ThetaValuation {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn t_degree_bound(&self) -> usize {
        self.ambient_dim + self.terms.iter().map(|t| t.density.degree().max(0) as usize).max().unwrap_or(0)
    }

    fn evaluate(&self, k: &Polytope) -> Result<Rational> {
        let zero = vec![Rational::zero(); self.ambient_dim];
        Ok(self.curve_coefficients(k, &zero)?.into_iter().sum())
    }

    fn scaling_curve(&self, k: &Polytope, x: &[Rational]) -> Result<MultiPoly> {
        Ok(MultiPoly::from_univariate(&self.curve_coefficients(k, x)?))
    }
}

/// `Λ_k(φ)(x)`: `K -> coefficient of t^k in φ(tK + x)`.
#[derive(Clone, Debug)]
pub struct TransInvValuation<V> {
    pub source: V,
    pub degree: usize,
    pub base: Point,
}

pub fn lambda_k<V: Valuation>(phi: V, k: usize, x: &[Rational]) -> Result<TransInvValuation<V>> {
    check_dim(phi.ambient_dim(), x.len())?;
    if k > phi.t_degree_bound() {
        return Err(Error::InvalidArgument(format!("degree {k} exceeds the scaling bound {}", phi.t_degree_bound())));
    }
    Ok(TransInvValuation { source: phi, degree: k, base: x.to_vec() })
}

impl<V: Valuation> Valuation for TransInvValuation<V> {
    fn ambient_dim(&self) -> usize {
        self.source.ambient_dim()
    }

    fn t_degree_bound(&self) -> usize {
        self.degree.max(self.source.ambient_dim())
    }

    fn evaluate(&self, k: &Polytope) -> Result<Rational> {
        let curve = self.source.scaling_curve(k, &self.base)?;
        Ok(curve.coeff_at(&MultiIndex(vec![self.degree as u32])))
    }
}

/// Largest `i` such that `t^0..t^{i-1}` vanish on every probe curve.
///
/// Returns `bound + 1` when every probe curve vanishes identically.
pub fn w_degree<V: Valuation>(phi: &V, probes: &[Probe]) -> Result<usize> {
    let bound = phi.t_degree_bound();
    let mut best = bound + 1;
    for p in probes {
        let curve = phi.scaling_curve(&p.body, &p.base)?;
        if let Some(low) = lowest_nonzero(&curve) {
            best = best.min(low);
        }
    }
    Ok(best)
}

fn lowest_nonzero(curve: &MultiPoly) -> Option<usize> {
    curve.terms().map(|(idx, _)| idx.0[0] as usize).min()
}

/// Whether `φ` vanishes on every probe of dimension below `i`.
pub fn gamma_vanishes<V: Valuation>(phi: &V, i: usize, probes: &[Polytope]) -> Result<bool> {
    for d in 0..i.min(phi.ambient_dim() + 1) {
        if !probes.iter().any(|p| p.affine_dim() == d) {
            return Err(Error::InvalidArgument(format!("no probe of dimension {d}")));
        }
    }
    for p in probes.iter().filter(|p| p.affine_dim() < i) {
        if !phi.evaluate(p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mixed volume `V(K_1, .., K_n)`.
pub fn mixed_volume(bodies: &[Polytope]) -> Result<Rational> {
    let n = bodies.first().ok_or(Error::EmptyInput)?.ambient_dim();
    if bodies.len() != n {
        return Err(Error::InvalidArgument(format!(
            "mixed volume in dimension {n} needs {n} bodies, got {}",
            bodies.len()
        )));
    }
    let term = ThetaTerm::new(Rational::one(), PolyDensity::lebesgue(n), bodies.to_vec())?;
    let value = ThetaValuation::single(term).evaluate(&Polytope::origin(n))?;
    Ok(value / Rational::factorial(n as u32))
}

/// Mixed volume via tensor-grid interpolation of `vol(Σ λ_i K_i)`.
pub fn mixed_volume_by_interpolation(bodies: &[Polytope]) -> Result<Rational> {
    let n = bodies.first().ok_or(Error::EmptyInput)?.ambient_dim();
    if bodies.len() != n {
        return Err(Error::InvalidArgument(format!(
            "mixed volume in dimension {n} needs {n} bodies, got {}",
            bodies.len()
        )));
    }
    let term = ThetaTerm::new(Rational::one(), PolyDensity::lebesgue(n), bodies.to_vec())?;
    Ok(term.evaluate_by_interpolation(&Polytope::origin(n))? / Rational::factorial(n as u32))
}

/// `χ = (1 / (n! vol A)) Θ(vol; A, .., A)`.
pub fn euler_characteristic(n: usize, a: &Polytope) -> Result<ThetaValuation> {
    check_dim(n, a.ambient_dim())?;
    let vol = a.volume();
    if vol.is_zero() {
        return Err(Error::Degenerate("the representing body must have positive volume".into()));
    }
    let c = (Rational::factorial(n as u32) * vol).recip();
    let term = ThetaTerm::new(c, PolyDensity::lebesgue(n), vec![a.clone(); n])?;
    Ok(ThetaValuation::single(term))
}

/// `χ` represented with the unit cube.
pub fn euler(n: usize) -> ThetaValuation {
    euler_characteristic(n, &Polytope::unit_cube(n)).expect("cube has volume 1")
}

/// Homogeneous components `φ_0(K), .., φ_n(K)` of a translation-invariant valuation.
pub fn mcmullen_decompose<V: Valuation>(phi: &V, k: &Polytope) -> Result<Vec<Rational>> {
    let n = phi.ambient_dim();
    check_dim(n, k.ambient_dim())?;
    let zero = vec![Rational::zero(); n];
    let curve = phi.scaling_curve(k, &zero)?;
    if curve.degree() > n as i64 {
        return Err(Error::NotTranslationInvariant(format!("scaling curve has degree {} > {n}", curve.degree())));
    }
    let base = phi.evaluate(k)?;
    for shift in translation_checks(n) {
        if phi.evaluate(&k.translate(&shift)?)? != base {
            return Err(Error::NotTranslationInvariant(format!("value changes under the shift {shift:?}")));
        }
    }
    Ok((0..=n).map(|j| curve.coeff_at(&MultiIndex(vec![j as u32]))).collect())
}

fn translation_checks(n: usize) -> Vec<Point> {
    let a: Point = (0..n).map(|i| Rational::new(i as i64 + 1, 3)).collect();
    let b: Point = (0..n).map(|i| Rational::new(-2 * (i as i64) - 1, 5)).collect();
    vec![a, b]
}
