//! Exact sums of rational multiples of square roots.
//!
//! Face measures of non-axis-aligned faces are `q * sqrt(r)` with rational `q`
//! and integer `r`; sums of such values stay exact in [`SurdSum`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::Rational;

/// Trial-division bound for square-part extraction.
const TRIAL_LIMIT: u64 = 1 << 16;

/// Splits `n > 0` as `s^2 * r`, returning `(s, r)`. The radicand `r` is
/// squarefree unless it keeps a cofactor above the trial bound that is not a
/// perfect square.
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut p: u64 = 2;
    while p < TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let p2 = &pb * &pb;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            square *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        square *= root;
        rest = BigInt::one();
    }
    (square, rest)
}

/// `coeff * sqrt(radicand)` with `radicand >= 1` as squarefree as found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub coeff: Rational,
    pub radicand: BigInt,
}

impl Surd {
    pub fn rational(q: Rational) -> Self {
        Surd { coeff: q, radicand: BigInt::one() }
    }

    /// `sqrt(r)` for a rational `r >= 0`.
    pub fn sqrt(r: &Rational) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        if r.is_zero() {
            return Surd::rational(Rational::zero());
        }
        // sqrt(p/q) = sqrt(p q) / q
        let pq = r.numer() * r.denom();
        let (s, rad) = square_part(&pq);
        Surd { coeff: Rational::new(s, r.denom().clone()), radicand: rad }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Surd { coeff: &self.coeff * q, radicand: self.radicand.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64() * self.radicand.to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.radicand.is_one() || self.coeff.is_zero()).then(|| self.coeff.clone())
    }
}

/// `sum_r c_r sqrt(r)` keyed by radicand; zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SurdSum {
    terms: BTreeMap<BigInt, Rational>,
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut s = SurdSum::zero();
        s.add_surd(&Surd::rational(q));
        s
    }

    pub fn add_surd(&mut self, x: &Surd) {
        if x.coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(x.radicand.clone()).or_insert_with(Rational::zero);
        *e += &x.coeff;
        if e.is_zero() {
            self.terms.remove(&x.radicand);
        }
    }

    pub fn add(&mut self, other: &SurdSum) {
        for (r, c) in &other.terms {
            self.add_surd(&Surd { coeff: c.clone(), radicand: r.clone() });
        }
    }

    pub fn sub(&mut self, other: &SurdSum) {
        self.add(&other.scale(&Rational::from(-1)));
    }

    pub fn scale(&self, q: &Rational) -> SurdSum {
        if q.is_zero() {
            return SurdSum::zero();
        }
        SurdSum { terms: self.terms.iter().map(|(r, c)| (r.clone(), c * q)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(r, c)| c.to_f64() * r.to_f64().unwrap_or(f64::INFINITY).sqrt()).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &Rational)> {
        self.terms.iter()
    }
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (r, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if r.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*sqrt({r})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_parts() {
        let s = Surd::sqrt(&Rational::from(8));
        assert_eq!((s.coeff, s.radicand), (Rational::from(2), BigInt::from(2)));
        let s = Surd::sqrt(&Rational::new(9, 4));
        assert_eq!(s.as_rational(), Some(Rational::new(3, 2)));
        let s = Surd::sqrt(&Rational::new(1, 2));
        assert_eq!((s.coeff, s.radicand), (Rational::new(1, 2), BigInt::from(2)));
    }

    #[test]
    fn sums_cancel() {
        let mut a = SurdSum::zero();
        a.add_surd(&Surd::sqrt(&Rational::from(2)));
        a.add_surd(&Surd::rational(Rational::one()));
        assert_eq!(a.as_rational(), None);
        a.add_surd(&Surd::sqrt(&Rational::from(8)).scale(&Rational::new(-1, 2)));
        assert_eq!(a.as_rational(), Some(Rational::one()));
        assert!((a.to_f64() - 1.0).abs() < 1e-15);
    }
}
