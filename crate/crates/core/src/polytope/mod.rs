//! Exact convex polytopes in V-representation.
//!
//! A [`Polytope`] stores its extreme points in lexicographic order, so equality
//! is a list comparison. The hull computation also yields an integer-lattice
//! model (common denominator, placing triangulation, facet hyperplanes) that is
//! shared by volume, integration and the face lattice.
//!
//! Lower-dimensional polytopes are first-class. Their hull is computed in a
//! chart: the projection onto `affine_dim` pivot coordinates, which is
//! injective on the affine hull.
//!
//! Normal cones use the outer convention: a cone collects the functionals whose
//! maximum over the polytope is attained on the face.

mod exact;
mod hull;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Rational;

pub(crate) use exact::{convert, determinant, Int};

/// A point of `Q^n`.
pub type Point = Vec<Rational>;

/// Facet of the lattice model, in chart coordinates scaled by the denominator:
/// `normal . (denom * chart(x)) <= offset` on the polytope.
#[derive(Clone, Debug)]
pub(crate) struct ChartFacet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    /// Indices into the polytope's vertex list.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct FaceRecord {
    pub dim: usize,
    pub vertices: Vec<usize>,
    /// Facets containing the face.
    pub facets: Vec<usize>,
}

#[derive(Debug)]
pub(crate) struct HullInfo {
    pub denom: BigInt,
    /// Ambient integer coordinates (times `denom`); the first entries are the
    /// vertices in canonical order, later ones are extra triangulation points.
    pub points: Vec<Vec<BigInt>>,
    pub affine_dim: usize,
    pub pivots: Vec<usize>,
    /// Placing triangulation; each simplex lists `affine_dim + 1` point indices.
    pub simplices: Vec<Vec<usize>>,
    pub facets: Vec<ChartFacet>,
    faces: OnceLock<Vec<Vec<FaceRecord>>>,
}

impl HullInfo {
    pub fn chart(&self, idx: usize) -> Vec<BigInt> {
        self.pivots.iter().map(|&p| self.points[idx][p].clone()).collect()
    }
}

#[derive(Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    info: Arc<HullInfo>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Hash for Polytope {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.vertices.hash(state);
    }
}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("conv")?;
        f.debug_list().entries(self.vertices.iter()).finish()
    }
}

/// A closed face of a polytope.
#[derive(Clone, Debug)]
pub struct Face {
    /// Indices into the parent's vertex list.
    pub vertex_indices: Vec<usize>,
    pub polytope: Polytope,
    pub dim: usize,
    /// Parent facets containing the face.
    pub facet_indices: Vec<usize>,
}

/// Non-negative span of `generators`, apex at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalCone {
    pub ambient_dim: usize,
    pub generators: Vec<Vec<Rational>>,
}

impl NormalCone {
    /// Dimension of the linear span of the generators.
    pub fn dim(&self) -> usize {
        rank(&self.generators)
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        // y is in the cone iff it is a non-negative combination; decided by
        // testing against every facet of the cone within its span.
        cone_constraints(self).iter().all(|c| dot_q(c, y) >= Rational::zero()) && in_span(&self.generators, y)
    }
}

/// JSON record `{"vertices": [[rational, ..], ..]}`; vertices may be redundant.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolytopeRecord {
    pub vertices: Vec<Vec<Rational>>,
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeRecord { vertices: self.vertices.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = PolytopeRecord::deserialize(d)?;
        Polytope::new(&rec.vertices).map_err(serde::de::Error::custom)
    }
}

fn lcm_of_denominators(points: &[Point]) -> BigInt {
    let mut l = <BigInt as One>::one();
    for p in points {
        for c in p {
            if !c.denom().is_one() {
                l = l.lcm(c.denom());
            }
        }
    }
    l
}

fn scale_to_lattice(p: &[Rational], denom: &BigInt) -> Vec<BigInt> {
    p.iter().map(|c| c.numer() * (denom / c.denom())).collect()
}

fn from_lattice(p: &[BigInt], denom: &BigInt) -> Point {
    p.iter().map(|c| Rational::new(c.clone(), denom.clone())).collect()
}

pub(crate) fn dot_q(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row-echelon form of the row space; returns (rows, pivot columns).
pub(crate) fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub(crate) fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).1.len()
}

fn in_span(rows: &[Vec<Rational>], y: &[Rational]) -> bool {
    let mut all = rows.to_vec();
    all.push(y.to_vec());
    rank(&all) == rank(rows)
}

/// Solves the square system `a x = b` exactly; `None` if singular.
pub(crate) fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let rows: Vec<Vec<Rational>> =
        a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect();
    let (red, piv) = rref(&rows);
    if piv.len() != n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.iter().map(|r| r[n].clone()).collect())
}

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Inequalities `c . y >= 0` cutting out a pointed cone inside its span.
///
/// Candidate normals come from `(dim - 1)`-subsets of generators; a candidate
/// is kept when all generators lie weakly on one side.
pub(crate) fn cone_constraints(cone: &NormalCone) -> Vec<Vec<Rational>> {
    let (basis, _) = rref(&cone.generators);
    let c = basis.len();
    if c <= 1 {
        return match c {
            1 => vec![cone.generators.iter().find(|g| g.iter().any(|x| !x.is_zero())).cloned().unwrap()],
            _ => Vec::new(),
        };
    }
    // Work in coordinates of the span: express generators in the RREF basis.
    let (_, piv) = rref(&cone.generators);
    let coords: Vec<Vec<Rational>> =
        cone.generators.iter().map(|g| piv.iter().map(|&p| g[p].clone()).collect()).collect();
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for subset in subsets(coords.len(), c - 1) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| coords[i].clone()).collect();
        if rank(&rows) != c - 1 {
            continue;
        }
        let Some(w) = nullspace_vector(&rows, c) else { continue };
        let signs: Vec<Rational> = coords.iter().map(|g| dot_q(&w, g)).collect();
        let w = if signs.iter().all(|s| !s.is_negative()) {
            w
        } else if signs.iter().all(|s| !s.is_positive()) {
            w.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        // Lift back to ambient: the functional on span coordinates becomes the
        // ambient functional `sum_j w_j e_{piv_j}`, valid on the span.
        let mut amb = vec![Rational::zero(); cone.ambient_dim];
        for (j, &p) in piv.iter().enumerate() {
            amb[p] = w[j].clone();
        }
        if !out.contains(&amb) {
            out.push(amb);
        }
    }
    out
}

/// A nonzero vector orthogonal to the rows (rank `ncols - 1`).
pub(crate) fn nullspace_vector(rows: &[Vec<Rational>], ncols: usize) -> Option<Vec<Rational>> {
    let (red, piv) = rref(rows);
    let free = (0..ncols).find(|c| !piv.contains(c))?;
    let mut v = vec![Rational::zero(); ncols];
    v[free] = Rational::one();
    for (r, &p) in red.iter().zip(&piv) {
        v[p] = -&r[free];
    }
    Some(v)
}

impl Polytope {
    /// Convex hull of a nonempty list of points of equal length.
    pub fn new(points: &[Point]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let dim = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        let denom = lcm_of_denominators(points);
        let mut ints: Vec<Vec<BigInt>> = points.iter().map(|p| scale_to_lattice(p, &denom)).collect();
        ints.sort();
        ints.dedup();
        Ok(Self::from_lattice_points(dim, denom, ints))
    }

    /// Hull of distinct lattice points `ints / denom`.
    fn from_lattice_points(dim: usize, denom: BigInt, ints: Vec<Vec<BigInt>>) -> Self {
        let mut ech = exact::Echelon::<BigInt>::new();
        for p in &ints[1..] {
            if ech.rank() == dim {
                break;
            }
            let diff: Vec<BigInt> = p.iter().zip(&ints[0]).map(|(a, b)| a - b).collect();
            ech.insert(&diff);
        }
        let affine_dim = ech.rank();
        // Canonical pivots: those of the reduced row-echelon form of the span.
        let rows: Vec<Vec<Rational>> =
            ech.rows.iter().map(|r| r.iter().map(|c| Rational::from(c.clone())).collect()).collect();
        let pivots = rref(&rows).1;

        if affine_dim == 0 {
            let vertex = from_lattice(&ints[0], &denom);
            let info = HullInfo {
                denom,
                points: vec![ints[0].clone()],
                affine_dim: 0,
                pivots,
                simplices: vec![vec![0]],
                facets: Vec::new(),
                faces: OnceLock::new(),
            };
            return Polytope { dim, vertices: vec![vertex], info: Arc::new(info) };
        }

        let chart: Vec<Vec<BigInt>> = ints.iter().map(|p| pivots.iter().map(|&i| p[i].clone()).collect()).collect();
        let raw = hull::full_dimensional_hull(&chart);

        let mut extreme = raw.extreme.clone();
        extreme.sort_by(|&a, &b| ints[a].cmp(&ints[b]));
        // Lattice order matches rational lexicographic order (positive scale).
        let mut slot = vec![usize::MAX; ints.len()];
        let mut points = Vec::new();
        for (k, &e) in extreme.iter().enumerate() {
            slot[e] = k;
            points.push(ints[e].clone());
        }
        let mut simplices = Vec::with_capacity(raw.simplices.len());
        for s in &raw.simplices {
            let mapped = s
                .iter()
                .map(|&i| {
                    if slot[i] == usize::MAX {
                        slot[i] = points.len();
                        points.push(ints[i].clone());
                    }
                    slot[i]
                })
                .collect();
            simplices.push(mapped);
        }
        let facets = raw
            .facets
            .into_iter()
            .map(|f| {
                let mut vertices: Vec<usize> = f.vertices.iter().map(|&i| slot[i]).collect();
                vertices.sort_unstable();
                ChartFacet { normal: f.normal, offset: f.offset, vertices }
            })
            .collect();
        let vertices = points[..extreme.len()].iter().map(|p| from_lattice(p, &denom)).collect();
        let info = HullInfo { denom, points, affine_dim, pivots, simplices, facets, faces: OnceLock::new() };
        Polytope { dim, vertices, info: Arc::new(info) }
    }

    pub fn point(p: Point) -> Self {
        Polytope::new(&[p]).expect("single point")
    }

    pub fn segment(a: Point, b: Point) -> Result<Self> {
        Polytope::new(&[a, b])
    }

    /// The axis-parallel box `prod [lo_i, hi_i]`.
    pub fn cuboid(lo: &[Rational], hi: &[Rational]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        let n = lo.len();
        let pts: Vec<Point> = (0..1usize << n)
            .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() }).collect())
            .collect();
        Polytope::new(&pts)
    }

    pub fn unit_cube(n: usize) -> Self {
        Polytope::cuboid(&vec![Rational::zero(); n], &vec![Rational::one(); n]).expect("cube")
    }

    /// `conv(0, e_1, .., e_n)`.
    pub fn standard_simplex(n: usize) -> Self {
        let mut pts = vec![vec![Rational::zero(); n]];
        for i in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            pts.push(e);
        }
        Polytope::new(&pts).expect("simplex")
    }

    pub fn origin(n: usize) -> Self {
        Polytope::point(vec![Rational::zero(); n])
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        self.info.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.info.affine_dim == self.dim
    }

    pub(crate) fn info(&self) -> &HullInfo {
        &self.info
    }

    pub(crate) fn require_full_dimensional(&self) -> Result<()> {
        if self.is_full_dimensional() {
            Ok(())
        } else {
            Err(Error::NotFullDimensional { affine_dim: self.affine_dim(), ambient_dim: self.dim })
        }
    }

    /// `n`-dimensional volume; zero for lower-dimensional polytopes.
    pub fn volume(&self) -> Rational {
        if !self.is_full_dimensional() {
            return Rational::zero();
        }
        let n = self.dim;
        if n == 0 {
            return Rational::one();
        }
        let total = self.simplex_determinant_sum();
        Rational::new(total, self.info.denom.pow(n as u32)) / Rational::factorial(n as u32)
    }

    /// Sum over the triangulation of `|det|` of the chart edge matrices.
    pub(crate) fn simplex_determinant_sum(&self) -> BigInt {
        let info = &*self.info;
        let charts: Vec<Vec<BigInt>> = (0..info.points.len()).map(|i| info.chart(i)).collect();
        fn run<I: Int>(charts: &[Vec<BigInt>], simplices: &[Vec<usize>]) -> Option<BigInt> {
            let pts: Vec<Vec<I>> = charts.iter().map(|c| convert::<I>(c)).collect::<Option<_>>()?;
            let mut acc = I::zero();
            for s in simplices {
                let rows: Vec<Vec<I>> = s[1..]
                    .iter()
                    .map(|&v| pts[v].iter().zip(&pts[s[0]]).map(|(a, b)| a.sub(b)).collect::<Option<_>>())
                    .collect::<Option<_>>()?;
                let d = determinant(rows)?;
                acc = if d.signum() < 0 { acc.sub(&d)? } else { acc.add(&d)? };
            }
            Some(acc.to_big())
        }
        run::<i128>(&charts, &info.simplices)
            .unwrap_or_else(|| run::<BigInt>(&charts, &info.simplices).expect("bigint"))
    }

    /// Simplices with pairwise disjoint relative interiors covering the polytope.
    pub fn triangulate(&self) -> Vec<Polytope> {
        let info = &*self.info;
        info.simplices
            .iter()
            .map(|s| {
                let pts: Vec<Vec<BigInt>> = s.iter().map(|&i| info.points[i].clone()).collect();
                let mut sorted = pts.clone();
                sorted.sort();
                Polytope::from_lattice_points(self.dim, info.denom.clone(), sorted)
            })
            .collect()
    }

    /// Support value `max_v <y, v>`.
    pub fn support(&self, y: &[Rational]) -> Result<Rational> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: y.len() });
        }
        Ok(self.vertices.iter().map(|v| dot_q(y, v)).max().expect("nonempty"))
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let denom = self.info.denom.lcm(&other.info.denom);
        let a: Vec<Vec<BigInt>> = self.lattice_vertices(&denom);
        let b: Vec<Vec<BigInt>> = other.lattice_vertices(&denom);
        let mut ints: Vec<Vec<BigInt>> = Vec::with_capacity(a.len() * b.len());
        for p in &a {
            for q in &b {
                ints.push(p.iter().zip(q).map(|(x, y)| x + y).collect());
            }
        }
        ints.sort();
        ints.dedup();
        Ok(Polytope::from_lattice_points(self.dim, denom, ints))
    }

    /// Minkowski sum of several polytopes of this dimension; `{0}` when empty.
    pub fn minkowski_sum_all<'a>(dim: usize, parts: impl IntoIterator<Item = &'a Polytope>) -> Result<Polytope> {
        let mut acc = Polytope::origin(dim);
        for p in parts {
            acc = acc.minkowski_sum(p)?;
        }
        Ok(acc)
    }

    fn lattice_vertices(&self, denom: &BigInt) -> Vec<Vec<BigInt>> {
        let f = denom / &self.info.denom;
        self.info.points[..self.vertices.len()].iter().map(|p| p.iter().map(|c| c * &f).collect()).collect()
    }

    /// Image under `x -> matrix x + shift`; `matrix` has one row per output coordinate.
    pub fn affine_image(&self, matrix: &[Vec<Rational>], shift: &[Rational]) -> Result<Polytope> {
        if matrix.len() != shift.len() {
            return Err(Error::DimensionMismatch { expected: matrix.len(), found: shift.len() });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: row.len() });
        }
        if matrix.is_empty() {
            return Ok(Polytope::point(Vec::new()));
        }
        let pts: Vec<Point> =
            self.vertices.iter().map(|v| matrix.iter().zip(shift).map(|(r, s)| dot_q(r, v) + s).collect()).collect();
        Polytope::new(&pts)
    }

    pub fn translate(&self, x: &[Rational]) -> Result<Polytope> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let pts: Vec<Point> = self.vertices.iter().map(|v| v.iter().zip(x).map(|(a, b)| a + b).collect()).collect();
        Polytope::new(&pts)
    }

    /// `t K + x`; `t = 0` yields the point `{x}`.
    pub fn scale_translate(&self, t: &Rational, x: &[Rational]) -> Result<Polytope> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let pts: Vec<Point> = self.vertices.iter().map(|v| v.iter().zip(x).map(|(a, b)| t * a + b).collect()).collect();
        Polytope::new(&pts)
    }

    pub fn scale(&self, t: &Rational) -> Polytope {
        self.scale_translate(t, &vec![Rational::zero(); self.dim]).expect("dims agree")
    }

    /// Cartesian product `self x other`.
    pub fn product(&self, other: &Polytope) -> Polytope {
        let pts: Vec<Point> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| a.iter().chain(b).cloned().collect()))
            .collect();
        Polytope::new(&pts).expect("nonempty")
    }

    /// Rational basis of the linear span of `P - P`, in reduced row-echelon form.
    pub(crate) fn direction_basis(&self) -> Vec<Vec<Rational>> {
        let base = &self.vertices[0];
        let diffs: Vec<Vec<Rational>> =
            self.vertices[1..].iter().map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
        if diffs.is_empty() {
            return Vec::new();
        }
        rref(&diffs).0
    }

    /// Facet hyperplanes `a . x <= b` in ambient coordinates (full-dimensional only).
    pub fn facet_inequalities(&self) -> Result<Vec<(Vec<Rational>, Rational)>> {
        self.require_full_dimensional()?;
        let info = &*self.info;
        Ok(info
            .facets
            .iter()
            .map(|f| {
                (
                    f.normal.iter().map(|c| Rational::from(c.clone())).collect(),
                    Rational::new(f.offset.clone(), info.denom.clone()),
                )
            })
            .collect())
    }

    /// Face lattice by dimension: level `k` holds the `k`-faces, relative to the affine hull.
    pub(crate) fn face_records(&self) -> &Vec<Vec<FaceRecord>> {
        self.info.faces.get_or_init(|| build_face_lattice(&self.info, self.vertices.len()))
    }

    /// All closed `k`-faces of a full-dimensional polytope.
    pub fn faces(&self, k: usize) -> Result<Vec<Face>> {
        self.require_full_dimensional()?;
        if k > self.dim {
            return Err(Error::InvalidArgument(format!("face dimension {k} exceeds {}", self.dim)));
        }
        Ok(self.relative_faces(k))
    }

    /// `k`-faces relative to the affine hull; any polytope.
    pub(crate) fn relative_faces(&self, k: usize) -> Vec<Face> {
        let levels = self.face_records();
        levels.get(k).map_or_else(Vec::new, |level| level.iter().map(|r| self.make_face(r)).collect())
    }

    fn make_face(&self, r: &FaceRecord) -> Face {
        let polytope = if r.vertices.len() == self.vertices.len() {
            self.clone()
        } else {
            let pts: Vec<Point> = r.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
            Polytope::new(&pts).expect("nonempty face")
        };
        Face { vertex_indices: r.vertices.clone(), polytope, dim: r.dim, facet_indices: r.facets.clone() }
    }

    /// Outer normal cone of a face of a full-dimensional polytope.
    pub fn normal_cone(&self, face: &Face) -> Result<NormalCone> {
        self.require_full_dimensional()?;
        self.relative_normal_cone(&face.polytope)
    }

    /// Outer normal cone of a face inside `lin(P - P)`.
    pub(crate) fn relative_normal_cone(&self, face: &Polytope) -> Result<NormalCone> {
        if face.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: face.dim });
        }
        let idx: Vec<usize> = face
            .vertices
            .iter()
            .map(|v| self.vertices.binary_search(v).map_err(|_| Error::NotAFace))
            .collect::<Result<_>>()?;
        let info = &*self.info;
        let containing: Vec<usize> = (0..info.facets.len())
            .filter(|&f| idx.iter().all(|i| info.facets[f].vertices.binary_search(i).is_ok()))
            .collect();
        // The face must be the full vertex set on the intersection of its facets.
        let closure: Vec<usize> = if containing.is_empty() {
            (0..self.vertices.len()).collect()
        } else {
            (0..self.vertices.len())
                .filter(|i| containing.iter().all(|&f| info.facets[f].vertices.binary_search(i).is_ok()))
                .collect()
        };
        if closure != idx {
            return Err(Error::NotAFace);
        }
        let generators = containing.iter().map(|&f| self.ambient_normal(f)).collect();
        Ok(NormalCone { ambient_dim: self.dim, generators })
    }

    /// Facet normal as an ambient vector in `lin(P - P)`.
    pub(crate) fn ambient_normal(&self, facet: usize) -> Vec<Rational> {
        let a: Vec<Rational> = self.info.facets[facet].normal.iter().map(|c| Rational::from(c.clone())).collect();
        if self.is_full_dimensional() {
            return a;
        }
        // Frame B with the pivot block equal to the identity; u = B G^{-1} a, G = B^T B.
        let basis = self.frame();
        let m = basis.len();
        let gram: Vec<Vec<Rational>> = (0..m).map(|i| (0..m).map(|j| dot_q(&basis[i], &basis[j])).collect()).collect();
        let w = solve(&gram, &a).expect("Gram matrix is invertible");
        (0..self.dim).map(|c| (0..m).map(|j| &w[j] * &basis[j][c]).sum()).collect()
    }

    /// Basis of `lin(P - P)` whose restriction to the pivot coordinates is the identity.
    pub(crate) fn frame(&self) -> Vec<Vec<Rational>> {
        let basis = self.direction_basis();
        debug_assert_eq!(rref(&basis).1, self.info.pivots);
        basis
    }

    /// Splits by the hyperplane `normal . x = offset` into the parts `<=` and `>=`.
    pub fn split_by_hyperplane(&self, normal: &[Rational], offset: &Rational) -> Result<(Polytope, Polytope)> {
        if normal.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: normal.len() });
        }
        let (below, on, above, cross) = self.classify(normal, offset);
        if on.is_empty() && cross.is_empty() {
            return Err(Error::EmptyIntersection);
        }
        let lower: Vec<Point> = below.iter().chain(&on).chain(&cross).cloned().collect();
        let upper: Vec<Point> = above.iter().chain(&on).chain(&cross).cloned().collect();
        Ok((Polytope::new(&lower)?, Polytope::new(&upper)?))
    }

    /// `P ∩ {normal . x = offset}`.
    pub fn section(&self, normal: &[Rational], offset: &Rational) -> Result<Polytope> {
        if normal.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: normal.len() });
        }
        let (_, on, _, cross) = self.classify(normal, offset);
        let pts: Vec<Point> = on.into_iter().chain(cross).collect();
        if pts.is_empty() {
            return Err(Error::EmptyIntersection);
        }
        Polytope::new(&pts)
    }

    #[allow(clippy::type_complexity)]
    fn classify(&self, normal: &[Rational], offset: &Rational) -> (Vec<Point>, Vec<Point>, Vec<Point>, Vec<Point>) {
        let vals: Vec<Rational> = self.vertices.iter().map(|v| dot_q(normal, v) - offset).collect();
        let (mut below, mut on, mut above) = (Vec::new(), Vec::new(), Vec::new());
        for (v, s) in self.vertices.iter().zip(&vals) {
            match s.signum() {
                std::cmp::Ordering::Less => below.push(v.clone()),
                std::cmp::Ordering::Equal => on.push(v.clone()),
                std::cmp::Ordering::Greater => above.push(v.clone()),
            }
        }
        // Every vertex of the section lies on a segment between a vertex below
        // and one above; using all such pairs overcounts, and the hull prunes.
        let mut cross = Vec::new();
        for (i, si) in vals.iter().enumerate() {
            if !si.is_negative() {
                continue;
            }
            for (j, sj) in vals.iter().enumerate() {
                if !sj.is_positive() {
                    continue;
                }
                let lambda = si / &(si - sj);
                let p: Point =
                    self.vertices[i].iter().zip(&self.vertices[j]).map(|(a, b)| a + &lambda * &(b - a)).collect();
                cross.push(p);
            }
        }
        (below, on, above, cross)
    }

    /// Whether `x` lies in the polytope.
    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let info = &*self.info;
        let lifted = scale_to_lattice_q(x, &info.denom);
        // Membership in the affine hull.
        let base = &self.vertices[0];
        let d: Vec<Rational> = x.iter().zip(base).map(|(a, b)| a - b).collect();
        if !in_span(&self.direction_basis(), &d) {
            return false;
        }
        if info.affine_dim == 0 {
            return true;
        }
        let chart: Vec<Rational> = info.pivots.iter().map(|&p| lifted[p].clone()).collect();
        info.facets.iter().all(|f| {
            let a: Vec<Rational> = f.normal.iter().map(|c| Rational::from(c.clone())).collect();
            dot_q(&a, &chart) <= Rational::from(f.offset.clone())
        })
    }
}

fn scale_to_lattice_q(x: &[Rational], denom: &BigInt) -> Vec<Rational> {
    let d = Rational::from(denom.clone());
    x.iter().map(|c| c * &d).collect()
}

fn build_face_lattice(info: &HullInfo, nverts: usize) -> Vec<Vec<FaceRecord>> {
    let m = info.affine_dim;
    let mut levels: Vec<Vec<FaceRecord>> = vec![Vec::new(); m + 1];
    levels[m].push(FaceRecord { dim: m, vertices: (0..nverts).collect(), facets: Vec::new() });
    if m == 0 {
        return levels;
    }
    let facet_sets: Vec<&Vec<usize>> = info.facets.iter().map(|f| &f.vertices).collect();
    let containing = |verts: &[usize]| -> Vec<usize> {
        (0..facet_sets.len()).filter(|&f| verts.iter().all(|v| facet_sets[f].binary_search(v).is_ok())).collect()
    };
    levels[m - 1] = facet_sets
        .iter()
        .enumerate()
        .map(|(f, verts)| FaceRecord { dim: m - 1, vertices: (*verts).clone(), facets: vec![f] })
        .collect();
    for k in (0..m - 1).rev() {
        let mut found: Vec<Vec<usize>> = Vec::new();
        for g in &levels[k + 1] {
            let mut cands: Vec<Vec<usize>> = Vec::new();
            for (f, fs) in facet_sets.iter().enumerate() {
                if g.facets.contains(&f) {
                    continue;
                }
                let inter: Vec<usize> = g.vertices.iter().copied().filter(|v| fs.binary_search(v).is_ok()).collect();
                if !inter.is_empty() && inter.len() < g.vertices.len() {
                    cands.push(inter);
                }
            }
            cands.sort();
            cands.dedup();
            for c in &cands {
                let maximal = !cands.iter().any(|o| o.len() > c.len() && c.iter().all(|v| o.binary_search(v).is_ok()));
                if maximal && !found.contains(c) {
                    found.push(c.clone());
                }
            }
        }
        found.sort();
        levels[k] = found
            .into_iter()
            .map(|verts| {
                let facets = containing(&verts);
                FaceRecord { dim: k, vertices: verts, facets }
            })
            .collect();
    }
    levels
}
