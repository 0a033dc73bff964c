//! Exact arithmetic in cyclotomic fields `Q(zeta_r)`.
//!
//! Elements are stored as coordinate vectors in the power basis
//! `1, zeta, .., zeta^(phi(r)-1)`, always fully reduced modulo the
//! cyclotomic polynomial, so structural equality is field equality.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scalar::ApproxComplex;

/// Returns `Phi_r` with coefficients in ascending degree order.
///
/// Computed as `(x^r - 1) / prod_{d | r, d < r} Phi_d` with exact division,
/// memoizing the divisor polynomials along the way.
pub fn cyclotomic_polynomial(r: u64) -> Vec<BigInt> {
    assert!(r >= 1, "cyclotomic polynomial order must be positive");
    let mut memo = BTreeMap::new();
    cyclotomic_memo(r, &mut memo)
}

fn cyclotomic_memo(r: u64, memo: &mut BTreeMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&r) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); r as usize + 1];
    num[0] = -BigInt::one();
    num[r as usize] = BigInt::one();
    for d in 1..r {
        if r.is_multiple_of(d) {
            let phi_d = cyclotomic_memo(d, memo);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    memo.insert(r, num.clone());
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    debug_assert!(den[dn].is_one());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// `Q(zeta_r)` together with its defining polynomial.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    order: u64,
    modulus: Vec<BigInt>,
}

impl CyclotomicField {
    pub fn new(order: u64) -> Result<Arc<Self>> {
        if order == 0 {
            return Err(Error::OutOfRange("cyclotomic order must be at least 1".into()));
        }
        Ok(Arc::new(CyclotomicField { order, modulus: cyclotomic_polynomial(order) }))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Euler totient of the order, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Reduces an arbitrary-length coordinate vector modulo `Phi_r`.
    fn reduce(&self, mut coeffs: Vec<Rational>) -> Vec<Rational> {
        let deg = self.degree();
        while coeffs.len() > deg {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - deg;
            for (j, mj) in self.modulus[..deg].iter().enumerate() {
                coeffs[shift + j] -= &top * mj;
            }
        }
        coeffs.resize(deg, Rational::zero());
        coeffs
    }
}

/// Per-order cache of fields, so that elements built from the same order
/// share one `Arc` and one copy of `Phi_r`.
#[derive(Debug, Default, Clone)]
pub struct FieldCache {
    fields: BTreeMap<u64, Arc<CyclotomicField>>,
}

impl FieldCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, order: u64) -> Result<Arc<CyclotomicField>> {
        if let Some(f) = self.fields.get(&order) {
            return Ok(f.clone());
        }
        let f = CyclotomicField::new(order)?;
        self.fields.insert(order, f.clone());
        Ok(f)
    }
}

#[derive(Clone)]
pub struct CyclotomicElement {
    field: Arc<CyclotomicField>,
    coords: Vec<Rational>,
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coords == other.coords
    }
}

impl Eq for CyclotomicElement {}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})[", self.field.order)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c)?;
        }
        f.write_str("]")
    }
}

impl CyclotomicElement {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CyclotomicElement { field: field.clone(), coords: vec![Rational::zero(); field.degree()] }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, Rational::one())
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: Rational) -> Self {
        let mut e = Self::zero(field);
        e.coords[0] = q;
        e
    }

    /// Builds an element from power-basis coefficients of any length,
    /// reducing modulo `Phi_r`.
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: Vec<Rational>) -> Self {
        CyclotomicElement { field: field.clone(), coords: field.reduce(coeffs) }
    }

    /// `zeta_r^e` for any integer `e`.
    pub fn root_of_unity(field: &Arc<CyclotomicField>, e: i64) -> Self {
        let r = field.order as i64;
        let e = e.rem_euclid(r) as usize;
        let mut coeffs = vec![Rational::zero(); e + 1];
        coeffs[e] = Rational::one();
        Self::from_coeffs(field, coeffs)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field.order != other.field.order {
            return Err(Error::FieldMismatch { left: self.field.order, right: other.field.order });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(CyclotomicElement { field: self.field.clone(), coords })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(CyclotomicElement { field: self.field.clone(), coords })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(CyclotomicElement {
            field: self.field.clone(),
            coords: self.field.reduce(poly_mul(&self.coords, &other.coords)),
        })
    }

    pub fn neg(&self) -> Self {
        CyclotomicElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * q).collect() }
    }

    /// Inverse through the extended Euclidean algorithm on
    /// `(coordinate polynomial, Phi_r)` over `Q[x]`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, q.recip()));
        }
        let modulus: Vec<Rational> =
            self.field.modulus.iter().map(|c| Rational::from_integer(c.clone())).collect();
        // invariant: s_i * a == r_i (mod Phi_r)
        let (mut r0, mut r1) = (modulus, trim(self.coords.clone()));
        let (mut s0, mut s1) = (Vec::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
        }
        // Phi_r is irreducible, so the last nonzero remainder is a unit
        debug_assert_eq!(r1.len(), 1);
        let c = r1[0].recip();
        let coords = s1.into_iter().map(|x| x * &c).collect();
        Ok(Self::from_coeffs(&self.field, coords))
    }

    /// Power by repeated squaring; negative exponents go through `inv`.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(&self.field);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Evaluates the coordinate polynomial at `exp(2 pi i / r)`.
    pub fn embed(&self) -> ApproxComplex {
        let r = self.field.order as f64;
        let mut acc = ApproxComplex::new(0.0, 0.0);
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * core::f64::consts::PI * (j as f64) / r;
            acc += ApproxComplex::new(libm::cos(angle), libm::sin(angle)) * crate::rational::to_f64(c);
        }
        acc
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

fn poly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let den = trim(den.to_vec());
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let lead = den.last().unwrap().recip();
    let mut quot = vec![Rational::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() && !rem.is_empty() {
        let shift = rem.len() - den.len();
        let c = rem.last().unwrap() * &lead;
        for (j, d) in den.iter().enumerate() {
            rem[shift + j] -= &c * d;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (quot, rem)
}

/// Euler totient, used to cross-check `Phi_r`.
pub fn totient(r: u64) -> u64 {
    (1..=r).filter(|k| k.gcd(&r) == 1).count() as u64
}
