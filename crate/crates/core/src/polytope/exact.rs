//! Checked integer arithmetic shared by the hull and the simplex integrator.
//!
//! Every routine is written once against [`Int`] and run first with `i128`
//! (overflow surfaces as `None`) and then, if that fails, with `BigInt`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub(crate) trait Int: Clone + Eq + Ord + Hash + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Division that is known to be exact.
    fn div_exact(&self, o: &Self) -> Self;
    fn gcd(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> i32;
}

impl Int for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        // |i128::MIN| never occurs here: callers reject it via checked ops first.
        let (mut a, mut b) = (self.unsigned_abs(), o.unsigned_abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> i32 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }
}

pub(crate) fn dot<I: Int>(a: &[I], b: &[I]) -> Option<I> {
    let mut acc = I::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y)?)?;
    }
    Some(acc)
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
pub(crate) fn determinant<I: Int>(mut m: Vec<Vec<I>>) -> Option<I> {
    let n = m.len();
    if n == 0 {
        return Some(I::one());
    }
    let mut sign_flip = false;
    let mut prev = I::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Some(I::zero());
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k])?.sub(&m[i][k].mul(&m[k][j])?)?;
                m[i][j] = num.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        Some(det)
    }
}

/// Incrementally maintained row-echelon basis of a lattice subspace.
#[derive(Clone, Debug)]
pub(crate) struct Echelon<I> {
    pub rows: Vec<Vec<I>>,
    pub pivots: Vec<usize>,
}

impl<I: Int> Echelon<I> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the (primitive) remainder.
    pub fn reduce(&self, v: &[I]) -> Option<Vec<I>> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let (a, b) = (row[p].clone(), v[p].clone());
            for j in 0..v.len() {
                v[j] = v[j].mul(&a)?.sub(&row[j].mul(&b)?)?;
            }
            primitive(&mut v);
        }
        Some(v)
    }

    /// Adds `v` if it is independent of the basis; reports whether it was.
    pub fn insert(&mut self, v: &[I]) -> Option<bool> {
        let r = self.reduce(v)?;
        match r.iter().position(|x| !x.is_zero()) {
            None => Some(false),
            Some(p) => {
                self.rows.push(r);
                self.pivots.push(p);
                Some(true)
            }
        }
    }
}

/// Divides a vector by the gcd of its entries.
pub(crate) fn primitive<I: Int>(v: &mut [I]) {
    let mut g = I::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = if g.is_zero() { x.gcd(&I::zero()) } else { g.gcd(x) };
        }
    }
    if !g.is_zero() && g != I::one() {
        for x in v.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
}

pub(crate) fn convert<I: Int>(v: &[BigInt]) -> Option<Vec<I>> {
    v.iter().map(I::from_big).collect()
}
