//! Exterior products, the product of valuations via the diagonal, and the
//! slice-integral representation of exterior products.
//!
//! For Θ-terms `w = (μ; A_i)` on `X` and `g = (ν; B_j)` on `Y` the exterior term
//! has density `μ ⊠ ν` and bodies `A_i × 0`, `0 × B_j`. Its value equals
//!
//! ```text
//! ∂^l/∂θ_1..∂θ_l |_0 ∫_Y w((K + Σ θ_j (0 × B_j)) ∩ (X × {y})) dν(y)
//! ```
//!
//! and the same formula makes sense with `w` replaced by any valuation on `X`.
//! [`slice_exterior`] evaluates it with exact rational quadrature: between
//! consecutive vertex levels the slices move Minkowski-linearly, so the
//! integrand is a polynomial of bounded degree on each piece and a closed
//! Newton-Cotes rule with enough nodes integrates it exactly.

use crate::density::PolyDensity;
use crate::error::{Error, Result};
use crate::polytope::{Point, Polytope};
use crate::ring::{grid_points, interpolate_from_grid, vandermonde_inverse, MultiIndex, MultiPoly, Rational};
use crate::valuation::{check_dim, ThetaTerm, ThetaValuation, Valuation};

/// Cartesian embedding `X × Y`: the first factor's coordinates come first.
pub fn exterior_product(phi: &ThetaValuation, psi: &ThetaValuation) -> ThetaValuation {
    let (p, q) = (phi.ambient_dim(), psi.ambient_dim());
    let total = p + q;
    let mut terms = Vec::with_capacity(phi.terms().len() * psi.terms().len());
    for a in phi.terms() {
        for b in psi.terms() {
            terms.push(exterior_term(a, b, p, q, total));
        }
    }
    ThetaValuation::new(total, terms).expect("embedded dimensions agree")
}

fn exterior_term(a: &ThetaTerm, b: &ThetaTerm, p: usize, q: usize, total: usize) -> ThetaTerm {
    let density = &a.density.poly().embed(total, 0) * &b.density.poly().embed(total, p);
    let mut bodies: Vec<Polytope> = a.bodies.iter().map(|x| x.product(&Polytope::origin(q))).collect();
    bodies.extend(b.bodies.iter().map(|y| Polytope::origin(p).product(y)));
    ThetaTerm { coeff: &a.coeff * &b.coeff, density: PolyDensity::new(density), bodies }
}

/// `Δ(K) = {(x, x)}`.
pub fn diagonal(k: &Polytope) -> Polytope {
    diagonal_power(k, 2)
}

/// `{(x, .., x)}` with `copies` blocks.
pub fn diagonal_power(k: &Polytope, copies: usize) -> Polytope {
    let n = k.ambient_dim();
    let matrix: Vec<Vec<Rational>> = (0..copies * n)
        .map(|r| (0..n).map(|c| if r % n == c { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    k.affine_image(&matrix, &vec![Rational::zero(); copies * n]).expect("dimensions agree")
}

fn diagonal_point(x: &[Rational]) -> Point {
    x.iter().chain(x).cloned().collect()
}

/// `φ · ψ`: the exterior product restricted to the diagonal.
#[derive(Clone, Debug)]
pub struct ProductValuation {
    pub phi: ThetaValuation,
    pub psi: ThetaValuation,
    pub exterior: ThetaValuation,
}

pub fn alesker_product(phi: &ThetaValuation, psi: &ThetaValuation) -> Result<ProductValuation> {
    check_dim(phi.ambient_dim(), psi.ambient_dim())?;
    Ok(ProductValuation { phi: phi.clone(), psi: psi.clone(), exterior: exterior_product(phi, psi) })
}

impl Valuation for ProductValuation {
    fn ambient_dim(&self) -> usize {
        self.phi.ambient_dim()
    }

    fn t_degree_bound(&self) -> usize {
        self.phi.t_degree_bound() + self.psi.t_degree_bound()
    }

    fn evaluate(&self, k: &Polytope) -> Result<Rational> {
        check_dim(self.ambient_dim(), k.ambient_dim())?;
        self.exterior.evaluate(&diagonal(k))
    }

    /// `Δ(tK + x) = tΔ(K) + Δ(x)`, so the exterior curve is the product curve.
    fn scaling_curve(&self, k: &Polytope, x: &[Rational]) -> Result<MultiPoly> {
        check_dim(self.ambient_dim(), k.ambient_dim())?;
        check_dim(self.ambient_dim(), x.len())?;
        self.exterior.scaling_curve(&diagonal(k), &diagonal_point(x))
    }
}

/// Exact quadrature over the slice coordinate(s).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceQuadrature {
    /// Lower bound on the nodes per piece; raised to the degree bound plus one.
    pub min_nodes: usize,
}

impl Default for SliceQuadrature {
    fn default() -> Self {
        SliceQuadrature { min_nodes: 2 }
    }
}

/// A slice-integral value with the discrepancy against a rule with twice the nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceEstimate {
    pub value: Rational,
    pub error_bound: Rational,
    pub evaluations: usize,
}

/// `(α ⊠ g)(L)` for `L ⊂ X × Y` by integrating `α` over the slices `X × {y}`.
///
/// `α` is any valuation on `X`; `g` is a Θ-term on `Y` with `dim Y <= 2`.
pub fn slice_exterior<A: Valuation>(
    alpha: &A,
    g: &ThetaTerm,
    l: &Polytope,
    rule: SliceQuadrature,
) -> Result<SliceEstimate> {
    let p = alpha.ambient_dim();
    let q = g.ambient_dim();
    check_dim(p + q, l.ambient_dim())?;
    if q == 0 || q > 2 {
        return Err(Error::InvalidArgument(format!("slice dimension must be 1 or 2, got {q}")));
    }
    let d_nu = g.density.degree().max(0) as usize;
    let piece_degree = alpha.t_degree_bound() + q + d_nu;
    let nodes = rule.min_nodes.max(piece_degree + 1);
    let (coarse, n1) = mixed_slice_derivative(alpha, g, l, p, nodes)?;
    let (fine, n2) = mixed_slice_derivative(alpha, g, l, p, 2 * nodes)?;
    Ok(SliceEstimate { error_bound: (&coarse - &fine).abs(), value: coarse, evaluations: n1 + n2 })
}

/// `(w ⊠ β)(L)` with the Θ-term on `X` and an arbitrary valuation `β` on `Y`.
pub fn slice_exterior_left<B: Valuation>(
    w: &ThetaTerm,
    beta: &B,
    l: &Polytope,
    rule: SliceQuadrature,
) -> Result<SliceEstimate> {
    let p = w.ambient_dim();
    let q = beta.ambient_dim();
    check_dim(p + q, l.ambient_dim())?;
    // The exterior product is symmetric under swapping the factors.
    let matrix: Vec<Vec<Rational>> = (0..p + q)
        .map(|r| {
            let src = if r < q { p + r } else { r - q };
            (0..p + q).map(|c| if c == src { Rational::one() } else { Rational::zero() }).collect()
        })
        .collect();
    let swapped = l.affine_image(&matrix, &vec![Rational::zero(); p + q])?;
    slice_exterior(beta, w, &swapped, rule)
}

/// Slice-integral value of the exterior term of two Θ-terms.
///
/// Fails when even the thickened body `K + Σ (0 × B_j)` projects to a
/// lower-dimensional subset of `Y`, so that every slice family is null.
pub fn fubini_rhs(w: &ThetaTerm, g: &ThetaTerm, k: &Polytope, rule: SliceQuadrature) -> Result<SliceEstimate> {
    let (p, q) = (w.ambient_dim(), g.ambient_dim());
    check_dim(p + q, k.ambient_dim())?;
    let thick = g.bodies.iter().try_fold(k.clone(), |acc, b| acc.minkowski_sum(&Polytope::origin(p).product(b)))?;
    if q == 0 || project(&thick, p, q)?.affine_dim() < q {
        return Err(Error::DegenerateSliceFamily);
    }
    slice_exterior(&ThetaValuation::single(w.clone()), g, k, rule)
}

/// `(α · ρ)(K)` with an arbitrary left factor and a Θ-valuation right factor.
pub fn slice_product<A: Valuation>(
    alpha: &A,
    rho: &ThetaValuation,
    k: &Polytope,
    rule: SliceQuadrature,
) -> Result<SliceEstimate> {
    check_dim(alpha.ambient_dim(), rho.ambient_dim())?;
    let dk = diagonal(k);
    sum_estimates(rho.terms().iter().map(|t| slice_exterior(alpha, t, &dk, rule)))
}

/// `(φ · β)(K)` with a Θ-valuation left factor and an arbitrary right factor.
pub fn slice_product_left<B: Valuation>(
    phi: &ThetaValuation,
    beta: &B,
    k: &Polytope,
    rule: SliceQuadrature,
) -> Result<SliceEstimate> {
    check_dim(phi.ambient_dim(), beta.ambient_dim())?;
    let dk = diagonal(k);
    sum_estimates(phi.terms().iter().map(|t| slice_exterior_left(t, beta, &dk, rule)))
}

fn sum_estimates(parts: impl Iterator<Item = Result<SliceEstimate>>) -> Result<SliceEstimate> {
    let mut acc = SliceEstimate { value: Rational::zero(), error_bound: Rational::zero(), evaluations: 0 };
    for e in parts {
        let e = e?;
        acc.value += e.value;
        acc.error_bound += e.error_bound;
        acc.evaluations += e.evaluations;
    }
    Ok(acc)
}

fn mixed_slice_derivative<A: Valuation>(
    alpha: &A,
    g: &ThetaTerm,
    l: &Polytope,
    p: usize,
    nodes: usize,
) -> Result<(Rational, usize)> {
    let q = g.ambient_dim();
    let s = g.bodies.len();
    let bound = alpha.t_degree_bound() + q + g.density.degree().max(0) as usize;
    let embedded: Vec<Polytope> = g.bodies.iter().map(|b| Polytope::origin(p).product(b)).collect();
    let weights = newton_cotes(nodes);
    let mut evaluations = 0;
    let mut samples = Vec::new();
    let grid = if s == 0 { vec![Vec::new()] } else { grid_points(s, bound) };
    for point in grid {
        let mut body = l.clone();
        for (lam, b) in point.iter().zip(&embedded) {
            if *lam > 0 {
                body = body.minkowski_sum(&b.scale(&Rational::from(*lam)))?;
            }
        }
        let value = slice_integral(alpha, g.density.poly(), &body, p, &weights, &mut evaluations)?;
        samples.push((point, value));
    }
    let derivative = if s == 0 {
        samples.pop().expect("one sample").1
    } else {
        interpolate_from_grid(samples, s, bound)?.coeff_at(&MultiIndex::all_ones(s))
    };
    Ok((&g.coeff * &derivative, evaluations))
}

/// Weights of the closed Newton-Cotes rule with `nodes` points on `[0, 1]`.
fn newton_cotes(nodes: usize) -> Vec<Rational> {
    let m = nodes - 1;
    if m == 0 {
        return vec![Rational::one()];
    }
    let inv = vandermonde_inverse(m);
    let mq = Rational::from(m as i64);
    // ∫_0^m u^k du / m = m^k / (k + 1)
    let moments: Vec<Rational> = (0..=m).map(|k| mq.pow(k as u32) / Rational::from(k as i64 + 1)).collect();
    (0..=m).map(|i| (0..=m).map(|k| &inv[k][i] * &moments[k]).sum()).collect()
}

/// `∫ α(L ∩ {y}) ν(y) dy` over the trailing `q` coordinates.
fn slice_integral<A: Valuation>(
    alpha: &A,
    nu: &MultiPoly,
    l: &Polytope,
    p: usize,
    weights: &[Rational],
    evaluations: &mut usize,
) -> Result<Rational> {
    let q = nu.nvars();
    let total = p + q;
    if project(l, p, q)?.affine_dim() < q {
        return Ok(Rational::zero());
    }
    let level = |body: &Polytope, coord: usize, y: &Rational| -> Result<Polytope> {
        let normal: Vec<Rational> =
            (0..total).map(|c| if c == coord { Rational::one() } else { Rational::zero() }).collect();
        body.section(&normal, y)
    };
    let inner = |body: &Polytope, prefix: &[Rational], evaluations: &mut usize| -> Result<Rational> {
        let coord = p + prefix.len();
        integrate_pieces(body, coord, weights, |y| {
            let slice = level(body, coord, y)?;
            let mut point = prefix.to_vec();
            point.push(y.clone());
            let density = nu.eval(&point)?;
            if density.is_zero() {
                return Ok(Rational::zero());
            }
            *evaluations += 1;
            Ok(density * alpha.evaluate(&project_front(&slice, p)?)?)
        })
    };
    if q == 1 {
        return inner(l, &[], evaluations);
    }
    integrate_pieces(l, p, weights, |y1| {
        let fibre = level(l, p, y1)?;
        inner(&fibre, std::slice::from_ref(y1), evaluations)
    })
}

/// Composite rule with breakpoints at the vertex levels of `body` in `coord`.
fn integrate_pieces(
    body: &Polytope,
    coord: usize,
    weights: &[Rational],
    mut f: impl FnMut(&Rational) -> Result<Rational>,
) -> Result<Rational> {
    let mut levels: Vec<Rational> = body.vertices().iter().map(|v| v[coord].clone()).collect();
    levels.sort();
    levels.dedup();
    let m = weights.len() - 1;
    let mut total = Rational::zero();
    for w in levels.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let h = b - a;
        let mut piece = Rational::zero();
        for (i, wt) in weights.iter().enumerate() {
            let y = a + &(&h * &Rational::new(i as i64, m.max(1) as i64));
            piece += wt * &f(&y)?;
        }
        total += h * piece;
    }
    Ok(total)
}

/// Projection onto the trailing `q` coordinates.
fn project(l: &Polytope, p: usize, q: usize) -> Result<Polytope> {
    let matrix: Vec<Vec<Rational>> = (0..q)
        .map(|r| (0..p + q).map(|c| if c == p + r { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    l.affine_image(&matrix, &vec![Rational::zero(); q])
}

/// Projection onto the leading `p` coordinates.
fn project_front(l: &Polytope, p: usize) -> Result<Polytope> {
    let total = l.ambient_dim();
    let matrix: Vec<Vec<Rational>> =
        (0..p).map(|r| (0..total).map(|c| if c == r { Rational::one() } else { Rational::zero() }).collect()).collect();
    l.affine_image(&matrix, &vec![Rational::zero(); p])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::euler;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }
    fn unit(n: usize) -> Polytope {
        Polytope::unit_cube(n)
    }

    #[test]
    fn newton_cotes_weights() {
        assert_eq!(newton_cotes(2), vec![Rational::new(1, 2), Rational::new(1, 2)]);
        assert_eq!(newton_cotes(3), vec![Rational::new(1, 6), Rational::new(2, 3), Rational::new(1, 6)]);
    }

    #[test]
    fn exterior_examples() {
        let vol1 = ThetaValuation::lebesgue(1);
        assert_eq!(exterior_product(&vol1, &vol1).evaluate(&unit(2)).unwrap(), q(1));
        let rect = Polytope::cuboid(&[q(0), q(0)], &[q(1), q(2)]).unwrap();
        assert_eq!(exterior_product(&euler(1), &vol1).evaluate(&rect).unwrap(), q(2));
    }

    #[test]
    fn product_examples() {
        let vol1 = ThetaValuation::lebesgue(1);
        assert_eq!(alesker_product(&vol1, &vol1).unwrap().evaluate(&unit(1)).unwrap(), q(0));
        let chi = euler(1);
        let prod = alesker_product(&chi, &vol1).unwrap();
        let seg = Polytope::cuboid(&[q(0)], &[q(3)]).unwrap();
        assert_eq!(prod.evaluate(&seg).unwrap(), q(3));
        assert_eq!(alesker_product(&chi, &chi).unwrap().evaluate(&seg).unwrap(), q(1));
        let curve = prod.scaling_curve(&seg, &[q(1)]).unwrap();
        assert_eq!(curve.univariate_coefficients(), vec![q(0), q(3)]);
    }

    #[test]
    fn fubini_examples() {
        let w = ThetaTerm::new(q(1), PolyDensity::lebesgue(1), vec![]).unwrap();
        let g = ThetaTerm::new(q(1), PolyDensity::lebesgue(1), vec![]).unwrap();
        let sq = unit(2);
        let rule = SliceQuadrature::default();
        let est = fubini_rhs(&w, &g, &sq, rule).unwrap();
        assert_eq!((est.value, est.error_bound), (q(1), q(0)));
        let g1 = ThetaTerm::new(q(1), PolyDensity::lebesgue(1), vec![unit(1)]).unwrap();
        assert_eq!(fubini_rhs(&w, &g1, &sq, rule).unwrap().value, q(1));
        let wx = ThetaTerm::new(q(1), PolyDensity::new(MultiPoly::var(1, 0)), vec![]).unwrap();
        assert_eq!(fubini_rhs(&wx, &g, &sq, rule).unwrap().value, Rational::new(1, 2));
        let pt = Polytope::origin(2);
        assert!(matches!(fubini_rhs(&w, &g, &pt, rule), Err(Error::DegenerateSliceFamily)));
    }

    #[test]
    fn slice_products_match_diagonal_route() {
        let chi = euler(1);
        let x = ThetaValuation::density(PolyDensity::new(MultiPoly::var(1, 0)));
        let seg = Polytope::cuboid(&[q(1)], &[q(3)]).unwrap();
        let direct = alesker_product(&chi, &x).unwrap().evaluate(&seg).unwrap();
        let rule = SliceQuadrature::default();
        assert_eq!(slice_product(&chi, &x, &seg, rule).unwrap().value, direct);
        assert_eq!(slice_product_left(&chi, &x, &seg, rule).unwrap().value, direct);
        assert_eq!(direct, q(4));
    }
}
