//! Values returned by every evaluator: exact cyclotomic or approximate complex.

use core::fmt;

use num_traits::Zero;

use crate::cyclotomic::CyclotomicElement;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub type ApproxComplex = num_complex::Complex64;

/// Tagged exact/approximate value. Mixing tags is an error; conversion
/// from exact to approximate only happens through [`Scalar::embed`].
#[derive(Clone, PartialEq)]
pub enum Scalar {
    Exact(CyclotomicElement),
    Approx(ApproxComplex),
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(e) => write!(f, "Exact({:?})", e),
            Scalar::Approx(z) => write!(f, "Approx({} + {}i)", z.re, z.im),
        }
    }
}

impl Scalar {
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&CyclotomicElement> {
        match self {
            Scalar::Exact(e) => Some(e),
            Scalar::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(e) => e.is_zero(),
            Scalar::Approx(z) => z.is_zero(),
        }
    }

    /// Zero of the same kind (and field) as `self`.
    pub fn zero_like(&self) -> Scalar {
        match self {
            Scalar::Exact(e) => Scalar::Exact(CyclotomicElement::zero(e.field())),
            Scalar::Approx(_) => Scalar::Approx(ApproxComplex::zero()),
        }
    }

    pub fn embed(&self) -> ApproxComplex {
        match self {
            Scalar::Exact(e) => e.embed(),
            Scalar::Approx(z) => *z,
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.checked_add(b)?)),
            (Scalar::Approx(a), Scalar::Approx(b)) => Ok(Scalar::Approx(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.checked_sub(b)?)),
            (Scalar::Approx(a), Scalar::Approx(b)) => Ok(Scalar::Approx(a - b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.checked_mul(b)?)),
            (Scalar::Approx(a), Scalar::Approx(b)) => Ok(Scalar::Approx(a * b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(a) => Ok(Scalar::Exact(a.inv()?)),
            Scalar::Approx(z) if z.is_zero() => Err(Error::ZeroInverse),
            Scalar::Approx(z) => Ok(Scalar::Approx(z.inv())),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.neg()),
            Scalar::Approx(z) => Scalar::Approx(-z),
        }
    }

    pub fn scale(&self, q: &Rational) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.scale(q)),
            Scalar::Approx(z) => Scalar::Approx(z * rational::to_f64(q)),
        }
    }

    /// `self += q * other`, the workhorse of every linear combination.
    pub fn add_scaled(&mut self, q: &Rational, other: &Scalar) -> Result<()> {
        if q.is_zero() {
            return Ok(());
        }
        *self = self.checked_add(&other.scale(q))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CyclotomicField;
    use crate::rational::int;

    #[test]
    fn mixing_tags_is_an_error() {
        let f = CyclotomicField::new(4).unwrap();
        let e = Scalar::Exact(CyclotomicElement::one(&f));
        let a = Scalar::Approx(ApproxComplex::new(1.0, 0.0));
        assert_eq!(e.checked_add(&a), Err(Error::ModeMismatch));
        assert_eq!(a.checked_mul(&e), Err(Error::ModeMismatch));
        assert_eq!(e.embed(), ApproxComplex::new(1.0, 0.0));
    }

    #[test]
    fn approx_inverse_of_zero() {
        assert_eq!(Scalar::Approx(ApproxComplex::zero()).inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn add_scaled_accumulates() {
        let f = CyclotomicField::new(3).unwrap();
        let z = Scalar::Exact(CyclotomicElement::root_of_unity(&f, 1));
        let mut acc = z.zero_like();
        acc.add_scaled(&int(2), &z).unwrap();
        acc.add_scaled(&int(-2), &z).unwrap();
        assert!(acc.is_zero());
    }
}
