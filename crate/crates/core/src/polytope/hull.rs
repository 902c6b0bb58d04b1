//! Exact beneath-beyond convex hull on integer points.
//!
//! The hull is built by placing points one at a time. Each point strictly
//! beyond some boundary simplex is coned over every such simplex, which yields
//! a triangulation of the final hull, the "placing triangulation", whatever the
//! degeneracy of the input. Boundary simplices sharing a hyperplane are merged
//! into the true facets afterwards.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::exact::{convert, determinant, dot, primitive, Echelon, Int};

/// A facet hyperplane `normal . x <= offset` with the input points on it.
#[derive(Clone, Debug)]
pub(crate) struct RawFacet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
    /// Indices of extreme input points lying on the facet.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub(crate) struct RawHull {
    /// Indices of the extreme points.
    pub extreme: Vec<usize>,
    /// Simplices of the placing triangulation (indices of `dim + 1` points).
    pub simplices: Vec<Vec<usize>>,
    pub facets: Vec<RawFacet>,
}

/// Hull of points that affinely span their ambient space (dimension >= 1).
pub(crate) fn full_dimensional_hull(points: &[Vec<BigInt>]) -> RawHull {
    let small: Option<Vec<Vec<i128>>> = points.iter().map(|p| convert::<i128>(p)).collect();
    if let Some(small) = small {
        if let Some(h) = run::<i128>(&small) {
            return h;
        }
    }
    run::<BigInt>(points).expect("arbitrary-precision hull cannot overflow")
}

struct Facet<I> {
    verts: Vec<usize>,
    normal: Vec<I>,
    offset: I,
}

fn insertion_order(n: usize) -> Vec<usize> {
    // Fixed-seed Fisher-Yates shuffle; randomized insertion keeps the
    // number of intermediate facets small on structured inputs.
    let mut order: Vec<usize> = (0..n).collect();
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    for i in (1..n).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let j = (state % (i as u64 + 1)) as usize;
        order.swap(i, j);
    }
    order
}

fn hyperplane<I: Int>(points: &[Vec<I>], verts: &[usize], interior_sum: &[I], weight: &I) -> Option<(Vec<I>, I)> {
    let dim = interior_sum.len();
    let base = &points[verts[0]];
    let rows: Vec<Vec<I>> = verts[1..]
        .iter()
        .map(|&v| points[v].iter().zip(base).map(|(a, b)| a.sub(b)).collect::<Option<Vec<I>>>())
        .collect::<Option<_>>()?;
    let mut normal = Vec::with_capacity(dim);
    for col in 0..dim {
        let minor: Vec<Vec<I>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, x)| x.clone()).collect())
            .collect();
        let d = determinant(minor)?;
        normal.push(if col % 2 == 0 { d } else { d.neg()? });
    }
    let mut full = normal;
    let offset = dot(&full, base)?;
    full.push(offset);
    primitive(&mut full);
    let mut offset = full.pop().unwrap();
    let mut normal = full;
    // The interior reference point is interior_sum / weight.
    let side = dot(&normal, interior_sum)?.sub(&offset.mul(weight)?)?;
    debug_assert!(!side.is_zero(), "degenerate facet");
    if side.signum() > 0 {
        normal = normal.iter().map(|x| x.neg()).collect::<Option<_>>()?;
        offset = offset.neg()?;
    }
    Some((normal, offset))
}

fn run<I: Int>(points: &[Vec<I>]) -> Option<RawHull> {
    let dim = points[0].len();
    let n = points.len();
    if dim == 1 {
        let lo = (0..n).min_by(|&a, &b| points[a][0].cmp(&points[b][0]))?;
        let hi = (0..n).max_by(|&a, &b| points[a][0].cmp(&points[b][0]))?;
        return Some(RawHull {
            extreme: vec![lo, hi],
            simplices: vec![vec![lo, hi]],
            facets: vec![
                RawFacet { normal: vec![BigInt::from(-1)], offset: -points[lo][0].to_big(), vertices: vec![lo] },
                RawFacet { normal: vec![BigInt::from(1)], offset: points[hi][0].to_big(), vertices: vec![hi] },
            ],
        });
    }

    let order = insertion_order(n);
    // Initial simplex from the first affinely independent points in order.
    let mut simplex = vec![order[0]];
    let mut ech = Echelon::<I>::new();
    for &idx in &order[1..] {
        if simplex.len() == dim + 1 {
            break;
        }
        let diff: Vec<I> = points[idx].iter().zip(&points[order[0]]).map(|(a, b)| a.sub(b)).collect::<Option<_>>()?;
        if ech.insert(&diff)? {
            simplex.push(idx);
        }
    }
    assert_eq!(simplex.len(), dim + 1, "points do not span the ambient space");

    let mut interior_sum = vec![I::zero(); dim];
    for &v in &simplex {
        for (acc, x) in interior_sum.iter_mut().zip(&points[v]) {
            *acc = acc.add(x)?;
        }
    }
    let weight = I::from_i64(dim as i64 + 1);

    let mut facets: Vec<Facet<I>> = Vec::new();
    for skip in 0..=dim {
        let mut verts: Vec<usize> = simplex.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &v)| v).collect();
        verts.sort_unstable();
        let (normal, offset) = hyperplane(points, &verts, &interior_sum, &weight)?;
        facets.push(Facet { verts, normal, offset });
    }
    let mut simplices = vec![{
        let mut s = simplex.clone();
        s.sort_unstable();
        s
    }];
    let mut in_simplex = vec![false; n];
    for &v in &simplex {
        in_simplex[v] = true;
    }

    let mut ridge_count: HashMap<Vec<usize>, u32> = HashMap::new();
    let mut visible: Vec<bool> = Vec::new();
    for &p in &order {
        if in_simplex[p] {
            continue;
        }
        let pt = &points[p];
        visible.clear();
        let mut any = false;
        for f in &facets {
            let beyond = dot(&f.normal, pt)? > f.offset;
            any |= beyond;
            visible.push(beyond);
        }
        if !any {
            continue;
        }
        ridge_count.clear();
        for (f, _) in facets.iter().zip(&visible).filter(|(_, v)| **v) {
            let mut s = f.verts.clone();
            s.push(p);
            s.sort_unstable();
            simplices.push(s);
            for skip in 0..f.verts.len() {
                let ridge: Vec<usize> =
                    f.verts.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &v)| v).collect();
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut kept: Vec<Facet<I>> = Vec::with_capacity(facets.len());
        for (f, vis) in facets.drain(..).zip(&visible) {
            if !vis {
                kept.push(f);
            }
        }
        facets = kept;
        for (ridge, count) in ridge_count.drain() {
            if count != 1 {
                continue;
            }
            let mut verts = ridge;
            verts.push(p);
            verts.sort_unstable();
            let (normal, offset) = hyperplane(points, &verts, &interior_sum, &weight)?;
            facets.push(Facet { verts, normal, offset });
        }
        in_simplex[p] = true;
    }

    // Merge coplanar boundary simplices into true facets.
    let mut groups: HashMap<(Vec<I>, I), ()> = HashMap::new();
    let mut planes: Vec<(Vec<I>, I)> = Vec::new();
    for f in &facets {
        let key = (f.normal.clone(), f.offset.clone());
        if groups.insert(key.clone(), ()).is_none() {
            planes.push(key);
        }
    }
    let used: Vec<usize> = (0..n).filter(|&i| in_simplex[i]).collect();
    let mut on_plane: Vec<Vec<usize>> = vec![Vec::new(); planes.len()];
    let mut extreme = Vec::new();
    for &q in &used {
        let mut normals = Echelon::<I>::new();
        let mut touching = Vec::new();
        for (k, (a, b)) in planes.iter().enumerate() {
            if &dot(a, &points[q])? == b {
                touching.push(k);
                if normals.rank() < dim {
                    normals.insert(a)?;
                }
            }
        }
        if normals.rank() == dim {
            extreme.push(q);
            for k in touching {
                on_plane[k].push(q);
            }
        }
    }
    let facets = planes
        .into_iter()
        .zip(on_plane)
        .map(|((a, b), vertices)| RawFacet {
            normal: a.iter().map(Int::to_big).collect(),
            offset: b.to_big(),
            vertices,
        })
        .collect();
    Some(RawHull { extreme, simplices, facets })
}
