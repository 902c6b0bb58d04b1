//! Exact interpolation on integer tensor grids `{0, 1, .., D}^s`.

use std::collections::HashMap;

use super::{MultiIndex, MultiPoly, Rational};
use crate::error::{Error, Result};

/// Inverse of the Vandermonde matrix `V[i][j] = i^j` on nodes `0..=degree`.
///
/// Row `j` of the result maps the sample vector `(f(0), .., f(D))` to the
/// coefficient of `t^j`.
pub fn vandermonde_inverse(degree: usize) -> Vec<Vec<Rational>> {
    let size = degree + 1;
    let mut aug: Vec<Vec<Rational>> = (0..size)
        .map(|i| {
            let node = Rational::from(i as i64);
            let mut row: Vec<Rational> = (0..size).map(|j| node.pow(j as u32)).collect();
            row.extend((0..size).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !aug[r][col].is_zero()).expect("Vandermonde is invertible");
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for v in aug[col].iter_mut() {
            *v *= &inv;
        }
        let pivot = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &(&factor * p);
                }
            }
        }
    }
    // aug = [I | V^{-1}]; row j of V^{-1} holds the weights of coefficient j.
    aug.into_iter().map(|row| row[size..].to_vec()).collect()
}

/// Recovers the unique polynomial of per-variable degree at most `degree_bound`
/// that agrees with `samples` on the full grid `{0..=degree_bound}^variable_count`.
pub fn interpolate_from_grid<I>(samples: I, variable_count: usize, degree_bound: usize) -> Result<MultiPoly>
where
    I: IntoIterator<Item = (Vec<u32>, Rational)>,
{
    let side = degree_bound + 1;
    let mut table: HashMap<Vec<u32>, Rational> = HashMap::new();
    for (point, value) in samples {
        if point.len() != variable_count {
            return Err(Error::DimensionMismatch { expected: variable_count, found: point.len() });
        }
        if point.iter().any(|&c| c as usize > degree_bound) {
            return Err(Error::InvalidArgument(format!("grid point {point:?} outside 0..={degree_bound}")));
        }
        if let Some(prev) = table.get(&point) {
            if prev != &value {
                return Err(Error::InconsistentSample(point));
            }
        } else {
            table.insert(point, value);
        }
    }

    let total = side.pow(variable_count as u32);
    let mut values: Vec<Rational> = Vec::with_capacity(total);
    for flat in 0..total {
        let point = unflatten(flat, side, variable_count);
        match table.get(&point) {
            Some(v) => values.push(v.clone()),
            None => return Err(Error::MissingGridPoint(point)),
        }
    }

    // Transform one axis at a time from node values to monomial coefficients.
    let weights = vandermonde_inverse(degree_bound);
    let mut stride = 1;
    for _axis in 0..variable_count {
        let mut next = values.clone();
        for flat in 0..total {
            let pos = (flat / stride) % side;
            if pos != 0 {
                continue;
            }
            for (j, row) in weights.iter().enumerate() {
                let mut acc = Rational::zero();
                for (i, w) in row.iter().enumerate() {
                    if !w.is_zero() {
                        acc += w * &values[flat + i * stride];
                    }
                }
                next[flat + j * stride] = acc;
            }
        }
        values = next;
        stride *= side;
    }

    let terms = values
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(flat, v)| (unflatten(flat, side, variable_count), v));
    MultiPoly::from_terms(variable_count, terms)
}

/// Univariate convenience wrapper: samples `f(0), .., f(D)`.
pub fn interpolate_univariate(values: &[Rational]) -> MultiPoly {
    assert!(!values.is_empty());
    let weights = vandermonde_inverse(values.len() - 1);
    let coeffs: Vec<Rational> = weights.iter().map(|row| row.iter().zip(values).map(|(w, v)| w * v).sum()).collect();
    MultiPoly::from_univariate(&coeffs)
}

/// Grid points of `{0..=degree_bound}^variable_count` in axis-0-fastest order.
pub fn grid_points(variable_count: usize, degree_bound: usize) -> Vec<Vec<u32>> {
    let side = degree_bound + 1;
    (0..side.pow(variable_count as u32)).map(|flat| unflatten(flat, side, variable_count)).collect()
}

fn unflatten(mut flat: usize, side: usize, dims: usize) -> Vec<u32> {
    let mut point = Vec::with_capacity(dims);
    for _ in 0..dims {
        point.push((flat % side) as u32);
        flat /= side;
    }
    point
}

/// Weight of grid sample `point` in the coefficient of the monomial `idx`.
pub fn coefficient_weight(weights: &[Vec<Rational>], idx: &MultiIndex, point: &[u32]) -> Rational {
    idx.0.iter().zip(point).map(|(&j, &i)| weights[j as usize][i as usize].clone()).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn univariate_square() {
        let samples = (0..=2u32).map(|i| (vec![i], r((i * i) as i64)));
        let p = interpolate_from_grid(samples, 1, 2).unwrap();
        assert_eq!(p, MultiPoly::var(1, 0).pow(2));
    }

    #[test]
    fn minkowski_square_areas() {
        // Areas of [0,1]^2 + l [0,1]^2 at l = 0, 1, 2, computed directly: 1, 4, 9.
        let samples = vec![(vec![0], r(1)), (vec![1], r(4)), (vec![2], r(9))];
        let p = interpolate_from_grid(samples, 1, 2).unwrap();
        assert_eq!(p, MultiPoly::from_univariate(&[r(1), r(2), r(1)]));
    }

    #[test]
    fn constant_samples() {
        let samples = grid_points(2, 3).into_iter().map(|p| (p, Rational::new(7, 3)));
        let p = interpolate_from_grid(samples, 2, 3).unwrap();
        assert_eq!(p, MultiPoly::constant(2, Rational::new(7, 3)));
    }

    #[test]
    fn missing_and_inconsistent() {
        let samples = vec![(vec![0], r(1)), (vec![2], r(9))];
        assert!(matches!(interpolate_from_grid(samples, 1, 2), Err(Error::MissingGridPoint(p)) if p == vec![1]));
        let samples = vec![(vec![0], r(1)), (vec![0], r(2)), (vec![1], r(3))];
        assert!(matches!(interpolate_from_grid(samples, 1, 1), Err(Error::InconsistentSample(_))));
    }

    #[test]
    fn univariate_helper_matches_grid() {
        let vals: Vec<Rational> = (0..4).map(|t| r(t * t * t - 2 * t + 5)).collect();
        let p = interpolate_univariate(&vals);
        assert_eq!(p.univariate_coefficients(), vec![r(5), r(-2), r(0), r(1)]);
    }
}
