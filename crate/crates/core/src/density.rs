//! Exact integrals of polynomial densities over polytopes and their faces.
//!
//! Over a simplex `S = conv(v_0, .., v_m)` and a monomial `x_{j_1} .. x_{j_e}`,
//!
//! ```text
//! ∫_S x_{j_1}..x_{j_e} = vol(S) m! / (m+e)! * sum_{partitions π of [e]} prod_{C ∈ π} (|C|-1)! S[C],
//! S[C] = sum_i prod_{r ∈ C} v_{i, j_r},
//! ```
//!
//! which is the Dirichlet moment formula expanded over permutations grouped by
//! cycle type. Everything runs on the polytope's integer lattice model.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{convert, determinant, dot_q, Face, Int, Polytope};
use crate::ring::{MonomialRecord, MultiPoly, Rational, Surd};

/// A polynomial density `F(y) dy` on `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyDensity {
    ambient_dim: usize,
    poly: MultiPoly,
}

/// JSON record `{"monomials": [{"exponents": [..], "coeff": ".."}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRecord {
    pub monomials: Vec<MonomialRecord>,
}

impl PolyDensity {
    pub fn new(poly: MultiPoly) -> Self {
        PolyDensity { ambient_dim: poly.nvars(), poly }
    }

    /// Lebesgue measure, `F = 1`.
    pub fn lebesgue(n: usize) -> Self {
        PolyDensity::new(MultiPoly::one(n))
    }

    pub fn from_record(ambient_dim: usize, rec: &DensityRecord) -> Result<Self> {
        Ok(PolyDensity { ambient_dim, poly: MultiPoly::from_records(ambient_dim, &rec.monomials)? })
    }

    pub fn to_record(&self) -> DensityRecord {
        DensityRecord { monomials: self.poly.to_records() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn degree(&self) -> i64 {
        self.poly.degree()
    }
}

/// `∫_P F dy`; zero when `P` is lower-dimensional.
pub fn integrate(mu: &PolyDensity, p: &Polytope) -> Result<Rational> {
    integrate_poly(&mu.poly, p)
}

pub fn integrate_poly(f: &MultiPoly, p: &Polytope) -> Result<Rational> {
    check_dims(f, p)?;
    if !p.is_full_dimensional() {
        return Ok(Rational::zero());
    }
    Ok(chart_integral(f, p))
}

/// Integral of `f` against the `k`-dimensional Euclidean measure on `aff(F)`.
pub fn integrate_over_face(f: &MultiPoly, face: &Face) -> Result<Surd> {
    relative_integral(f, &face.polytope)
}

/// Integral of `f` against the Euclidean measure of the affine hull of `p`.
pub fn relative_integral(f: &MultiPoly, p: &Polytope) -> Result<Surd> {
    check_dims(f, p)?;
    let chart = chart_integral(f, p);
    if p.is_full_dimensional() || p.affine_dim() == 0 {
        return Ok(Surd::rational(chart));
    }
    // The chart inverse z -> B z has the frame B with identity pivot block, so
    // the induced measure is sqrt(det B^T B) times chart Lebesgue measure.
    let basis = p.frame();
    let m = basis.len();
    let gram: Vec<Vec<Rational>> = (0..m).map(|i| (0..m).map(|j| dot_q(&basis[i], &basis[j])).collect()).collect();
    Ok(Surd::sqrt(&rational_det(gram)).scale(&chart))
}

/// `vol_k` of a polytope inside its own affine hull.
pub fn relative_volume(p: &Polytope) -> Surd {
    relative_integral(&MultiPoly::one(p.ambient_dim()), p).expect("dimensions agree")
}

fn check_dims(f: &MultiPoly, p: &Polytope) -> Result<()> {
    if f.nvars() != p.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: p.ambient_dim(), found: f.nvars() });
    }
    Ok(())
}

pub(crate) fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            let pivot = m[c].clone();
            for (x, p) in m[r][c..].iter_mut().zip(&pivot[c..]) {
                *x -= &(&f * p);
            }
        }
    }
    det
}

/// Set partitions of `{0..e-1}` as block bitmasks with weight `prod (|C|-1)!`.
fn set_partitions(e: usize) -> Vec<(Vec<u32>, i64)> {
    fn go(i: usize, e: usize, blocks: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, i64)>) {
        if i == e {
            let w = blocks.iter().map(|b| (1..b.count_ones() as i64).product::<i64>()).product();
            out.push((blocks.clone(), w));
            return;
        }
        for k in 0..blocks.len() {
            blocks[k] |= 1 << i;
            go(i + 1, e, blocks, out);
            blocks[k] &= !(1 << i);
        }
        blocks.push(1 << i);
        go(i + 1, e, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, e, &mut Vec::new(), &mut out);
    out
}

/// Integral over the placing triangulation in chart measure.
fn chart_integral(f: &MultiPoly, p: &Polytope) -> Rational {
    if f.is_zero() {
        return Rational::zero();
    }
    let info = p.info();
    let m = info.affine_dim;
    let charts: Vec<Vec<BigInt>> = (0..info.points.len()).map(|i| info.chart(i)).collect();
    let dets = simplex_dets(&charts, &info.simplices);

    let max_deg = f.degree() as usize;
    let partitions: Vec<Vec<(Vec<u32>, i64)>> = (0..=max_deg).map(set_partitions).collect();
    let mut total = Rational::zero();
    for (idx, c) in f.terms() {
        let vars: Vec<usize> =
            idx.0.iter().enumerate().flat_map(|(j, &k)| std::iter::repeat_n(j, k as usize)).collect();
        let e = vars.len();
        let parts = &partitions[e];
        let lam =
            lambda_sum::<i128>(&info.points, &info.simplices, &dets, &vars, parts).map(BigInt::from).unwrap_or_else(
                || lambda_sum::<BigInt>(&info.points, &info.simplices, &dets, &vars, parts).expect("bigint"),
            );
        // Coordinates are scaled by denom: undo denom^(m + e).
        let scale =
            Rational::new(<BigInt as One>::one(), info.denom.pow((m + e) as u32)) / Rational::factorial((m + e) as u32);
        total += c * &Rational::from(lam) * scale;
    }
    total
}

fn simplex_dets(charts: &[Vec<BigInt>], simplices: &[Vec<usize>]) -> Vec<BigInt> {
    fn run<I: Int>(charts: &[Vec<BigInt>], simplices: &[Vec<usize>]) -> Option<Vec<BigInt>> {
        let pts: Vec<Vec<I>> = charts.iter().map(|c| convert::<I>(c)).collect::<Option<_>>()?;
        simplices
            .iter()
            .map(|s| {
                let rows: Vec<Vec<I>> = s[1..]
                    .iter()
                    .map(|&v| pts[v].iter().zip(&pts[s[0]]).map(|(a, b)| a.sub(b)).collect::<Option<_>>())
                    .collect::<Option<_>>()?;
                let d = determinant(rows)?;
                Some(if d.signum() < 0 { d.neg()?.to_big() } else { d.to_big() })
            })
            .collect()
    }
    run::<i128>(charts, simplices).unwrap_or_else(|| run::<BigInt>(charts, simplices).expect("bigint"))
}

/// `sum_S |det_S| * Λ_S(x_{vars})` over the triangulation.
fn lambda_sum<I: Int>(
    points: &[Vec<BigInt>],
    simplices: &[Vec<usize>],
    dets: &[BigInt],
    vars: &[usize],
    partitions: &[(Vec<u32>, i64)],
) -> Option<I> {
    let e = vars.len();
    let mut acc = I::zero();
    let mut sums: Vec<I> = vec![I::zero(); 1 << e];
    for (s, det) in simplices.iter().zip(dets) {
        let det = I::from_big(det)?;
        let verts: Vec<Vec<I>> = s
            .iter()
            .map(|&i| vars.iter().map(|&j| I::from_big(&points[i][j])).collect::<Option<_>>())
            .collect::<Option<_>>()?;
        for mask in 1..(1u32 << e) {
            let mut total = I::zero();
            for v in &verts {
                let mut prod = I::one();
                for (r, x) in v.iter().enumerate() {
                    if mask >> r & 1 == 1 {
                        prod = prod.mul(x)?;
                    }
                }
                total = total.add(&prod)?;
            }
            sums[mask as usize] = total;
        }
        let mut lam = I::zero();
        for (blocks, w) in partitions {
            let mut term = I::from_i64(*w);
            for &b in blocks {
                term = term.mul(&sums[b as usize])?;
            }
            lam = lam.add(&term)?;
        }
        acc = acc.add(&det.mul(&lam)?)?;
    }
    Some(acc)
}
