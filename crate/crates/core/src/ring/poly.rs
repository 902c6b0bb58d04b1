//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// Exponent vector of a monomial, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        MultiIndex(e)
    }

    /// The index `(1, 1, ..., 1)` of the multilinear monomial `x_1 x_2 ... x_n`.
    pub fn all_ones(nvars: usize) -> Self {
        MultiIndex(vec![1; nvars])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// A polynomial in `nvars` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

/// Wire form of a single monomial: `{"exponents": [..], "coeff": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialRecord {
    pub exponents: Vec<u32>,
    pub coeff: Rational,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(MultiIndex::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, Rational::one())
    }

    /// The coordinate function `x_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(MultiIndex::unit(nvars, var), Rational::one());
        p
    }

    pub fn monomial(exponents: Vec<u32>, coeff: Rational) -> Self {
        let mut p = MultiPoly::zero(exponents.len());
        p.add_term(MultiIndex(exponents), coeff);
        p
    }

    /// Builds a polynomial from `(exponents, coeff)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = MultiPoly::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::VariableCountMismatch { expected: nvars, found: exps.len() });
            }
            p.add_term(MultiIndex(exps), c);
        }
        Ok(p)
    }

    pub fn from_records(nvars: usize, records: &[MonomialRecord]) -> Result<Self> {
        MultiPoly::from_terms(nvars, records.iter().map(|r| (r.exponents.clone(), r.coeff.clone())))
    }

    pub fn to_records(&self) -> Vec<MonomialRecord> {
        self.terms.iter().map(|(idx, c)| MonomialRecord { exponents: idx.0.clone(), coeff: c.clone() }).collect()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree of a stored term, or `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|k| k.total_degree() as i64).max().unwrap_or(-1)
    }

    /// Degree in a single variable, `-1` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|k| k.0[var] as i64).max().unwrap_or(-1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, idx: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = MultiPoly::zero(self.nvars);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add_term(ka.add(kb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = Rational::zero();
        for (idx, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&idx.0) {
                if e > 0 {
                    term *= &x.pow(e);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Floating-point evaluation, used only by the Monte-Carlo oracles.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(idx, c)| idx.0.iter().zip(point).fold(c.to_f64(), |acc, (&e, &x)| acc * x.powi(e as i32)))
            .sum()
    }

    /// Stored coefficient of `x^idx`, zero when absent.
    pub fn coeff_at(&self, idx: &MultiIndex) -> Rational {
        self.terms.get(idx).cloned().unwrap_or_default()
    }

    /// Component of total degree exactly `degree`.
    pub fn homogeneous_part(&self, degree: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.total_degree() == degree)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Substitutes `x_j = offset_j + sum_i matrix[j][i] z_i`, giving a polynomial in
    /// `matrix[0].len()` variables `z`.
    pub fn compose_affine(&self, offset: &[Rational], matrix: &[Vec<Rational>]) -> Result<MultiPoly> {
        if offset.len() != self.nvars || matrix.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: offset.len() });
        }
        let new_vars = matrix.first().map(|r| r.len()).unwrap_or(0);
        let forms: Vec<MultiPoly> = (0..self.nvars)
            .map(|j| {
                let mut f = MultiPoly::constant(new_vars, offset[j].clone());
                for (i, m) in matrix[j].iter().enumerate() {
                    f.add_term(MultiIndex::unit(new_vars, i), m.clone());
                }
                f
            })
            .collect();
        let max_exp: Vec<u32> = (0..self.nvars).map(|j| self.terms.keys().map(|k| k.0[j]).max().unwrap_or(0)).collect();
        let powers: Vec<Vec<MultiPoly>> = forms
            .iter()
            .zip(&max_exp)
            .map(|(f, &m)| {
                let mut pw = vec![MultiPoly::one(new_vars)];
                for e in 1..=m as usize {
                    let next = &pw[e - 1] * f;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut out = MultiPoly::zero(new_vars);
        for (idx, c) in &self.terms {
            let mut term = MultiPoly::constant(new_vars, c.clone());
            for (j, &e) in idx.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[j][e as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// The polynomial `y -> p(x + y)`.
    pub fn translate(&self, shift: &[Rational]) -> Result<MultiPoly> {
        let identity: Vec<Vec<Rational>> = (0..self.nvars)
            .map(|j| (0..self.nvars).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        self.compose_affine(shift, &identity)
    }

    /// Re-indexes into `total` variables, placing this polynomial's variables at
    /// positions `offset .. offset + nvars`.
    pub fn embed(&self, total: usize, offset: usize) -> MultiPoly {
        assert!(offset + self.nvars <= total);
        MultiPoly {
            nvars: total,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    let mut e = vec![0; total];
                    e[offset..offset + self.nvars].copy_from_slice(&k.0);
                    (MultiIndex(e), v.clone())
                })
                .collect(),
        }
    }

    /// Coefficients `[c_0, .., c_deg]` of a univariate polynomial.
    pub fn univariate_coefficients(&self) -> Vec<Rational> {
        assert_eq!(self.nvars, 1, "univariate_coefficients on a multivariate polynomial");
        let deg = self.degree().max(0) as usize;
        (0..=deg).map(|k| self.coeff_at(&MultiIndex(vec![k as u32]))).collect()
    }

    pub fn from_univariate(coeffs: &[Rational]) -> MultiPoly {
        let mut p = MultiPoly::zero(1);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex(vec![k as u32]), c.clone());
        }
        p
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_records().serialize(serializer)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (var, &e) in idx.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{var}")?,
                    _ => write!(f, "*x{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

macro_rules! poly_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl std::ops::$trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            /// Panics on a variable-count mismatch; use the `try_` form to handle it.
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$try(rhs).expect("polynomial variable-count mismatch")
            }
        }
    };
}
poly_op!(Add, add, try_add);
poly_op!(Sub, sub, try_sub);
poly_op!(Mul, mul, try_mul);

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}
