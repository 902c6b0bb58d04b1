//! The default probe family for probe-relative certificates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::polytope::{Point, Polytope};
use crate::ring::Rational;

/// Fixed seed of the random part of the default family.
const PROBE_SEED: u64 = 0x5EED_0FBA;
const RANDOM_PROBES: usize = 8;

/// A body and a base point for a scaling curve `t -> φ(tK + x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub body: Polytope,
    pub base: Point,
}

fn half(k: i64) -> Rational {
    Rational::new(k, 2)
}

fn base_points(n: usize) -> Vec<Point> {
    let offsets = [0i64, 1, -1, 2, 3];
    offsets
        .iter()
        .enumerate()
        .map(|(k, &o)| (0..n).map(|i| Rational::new(o * (i as i64 + 1) + k as i64 * i as i64, 2 + i as i64)).collect())
        .collect()
}

/// Coordinate boxes with corners in `{0, 1/2, 1}^n` (degenerate boxes included),
/// corner simplices `conv(c, c + h e_1, .., c + h e_n)` inside the unit cube
/// with `c ∈ {0, 1/2}^n`, and 8 seeded random polytopes with coordinates in
/// `{0, 1/8, .., 1}`. Base points cycle through a fixed list.
pub fn default_probes(n: usize) -> Vec<Probe> {
    let mut bodies = Vec::new();
    let intervals: Vec<(i64, i64)> = vec![(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let mut idx = vec![0usize; n];
    loop {
        let lo: Vec<Rational> = idx.iter().map(|&k| half(intervals[k].0)).collect();
        let hi: Vec<Rational> = idx.iter().map(|&k| half(intervals[k].1)).collect();
        bodies.push(Polytope::cuboid(&lo, &hi).expect("ordered corners"));
        if !advance(&mut idx, intervals.len()) {
            break;
        }
    }
    let mut corner = vec![0usize; n];
    loop {
        let c: Vec<Rational> = corner.iter().map(|&k| half(k as i64)).collect();
        for h in [1i64, 2] {
            if corner.iter().any(|&k| k as i64 + h > 2) {
                continue;
            }
            let mut verts = vec![c.clone()];
            for i in 0..n {
                let mut v = c.clone();
                v[i] += half(h);
                verts.push(v);
            }
            bodies.push(Polytope::new(&verts).expect("nonempty"));
        }
        if !advance(&mut corner, 2) {
            break;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED ^ n as u64);
    for _ in 0..RANDOM_PROBES {
        let count = n + 2 + rng.random_range(0..3usize);
        let verts: Vec<Point> =
            (0..count).map(|_| (0..n).map(|_| Rational::new(rng.random_range(0..=8i64), 8)).collect()).collect();
        bodies.push(Polytope::new(&verts).expect("nonempty"));
    }
    let bases = base_points(n);
    bodies.into_iter().enumerate().map(|(k, body)| Probe { body, base: bases[k % bases.len()].clone() }).collect()
}

fn advance(idx: &mut [usize], radix: usize) -> bool {
    for d in idx.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes_and_dimensions() {
        let p1 = default_probes(1);
        assert_eq!(p1.len(), 6 + 3 + RANDOM_PROBES);
        let p2 = default_probes(2);
        assert_eq!(p2.len(), 36 + 5 + RANDOM_PROBES);
        for d in 0..=2 {
            assert!(p2.iter().any(|p| p.body.affine_dim() == d));
        }
        assert_eq!(default_probes(2), p2);
    }
}
