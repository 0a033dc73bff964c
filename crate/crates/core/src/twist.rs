//! Twists `mu in (T \ {1})^N` and the one-variable twisted zeta at
//! negative integers, `zeta_mu(-n) = Li_{-n}(mu) = sum_{m>=1} mu^m m^n`
//! (Abel sense).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::{CyclotomicElement, CyclotomicField};
use crate::error::{Error, Result};
use crate::multipoly::MultiIndex;
use crate::rational::Rational;
use crate::scalar::{ApproxComplex, Scalar};

/// One twist `mu`: an exact root of unity `zeta_r^e`, or `exp(i theta)`.
#[derive(Clone, Debug)]
pub enum Twist {
    Root { field: Arc<CyclotomicField>, exponent: i64 },
    Angle(f64),
}

impl Twist {
    pub fn value(&self) -> Scalar {
        match self {
            Twist::Root { field, exponent } => Scalar::Exact(CyclotomicElement::root_of_unity(field, *exponent)),
            Twist::Angle(theta) => Scalar::Approx(ApproxComplex::from_polar(1.0, *theta)),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Twist::Root { field, exponent } => exponent.rem_euclid(field.order() as i64) == 0,
            Twist::Angle(theta) => num_traits::Euclid::rem_euclid(theta, &TAU) == 0.0,
        }
    }

    fn one(&self) -> Scalar {
        match self {
            Twist::Root { field, .. } => Scalar::Exact(CyclotomicElement::one(field)),
            Twist::Angle(_) => Scalar::Approx(ApproxComplex::one()),
        }
    }

    fn key(&self) -> String {
        match self {
            Twist::Root { field, exponent } => format!("z{}^{}", field.order(), exponent.rem_euclid(field.order() as i64)),
            Twist::Angle(theta) => format!("t{:016x}", theta.to_bits()),
        }
    }

    /// Evaluates an integer-coefficient polynomial (ascending) at `mu`.
    fn eval_integer_poly(&self, coeffs: &[BigInt]) -> Scalar {
        match self {
            Twist::Root { field, exponent } => {
                let r = field.order() as i64;
                let mut folded = vec![Rational::zero(); r as usize];
                for (i, c) in coeffs.iter().enumerate() {
                    let slot = (exponent * i as i64).rem_euclid(r) as usize;
                    folded[slot] += Rational::from_integer(c.clone());
                }
                Scalar::Exact(CyclotomicElement::from_coeffs(field, folded))
            }
            Twist::Angle(theta) => {
                let z = ApproxComplex::from_polar(1.0, *theta);
                let mut acc = ApproxComplex::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * z + crate::rational::to_f64(&Rational::from_integer(c.clone()));
                }
                Scalar::Approx(acc)
            }
        }
    }
}

/// The twist tuple of an instance. All exact twists share one field order.
#[derive(Clone, Debug)]
pub enum TwistVector {
    Exact { field: Arc<CyclotomicField>, exponents: Vec<i64> },
    Approx { angles: Vec<f64> },
}

impl TwistVector {
    /// `mu_n = zeta_r^{e_n}`; exponents are reduced mod `r` and none may vanish.
    pub fn exact(field: Arc<CyclotomicField>, exponents: Vec<i64>) -> Result<Self> {
        let r = field.order() as i64;
        let exponents: Vec<i64> = exponents.into_iter().map(|e| e.rem_euclid(r)).collect();
        if let Some(index) = exponents.iter().position(|&e| e == 0) {
            return Err(Error::TwistIsOne { index });
        }
        Ok(TwistVector::Exact { field, exponents })
    }

    /// `mu_n = exp(i theta_n)` with every `theta_n` in `(0, 2 pi)`.
    pub fn approx(angles: Vec<f64>) -> Result<Self> {
        if let Some(index) = angles.iter().position(|&t| !(t > 0.0 && t < TAU)) {
            if angles[index] == 0.0 {
                return Err(Error::TwistIsOne { index });
            }
            return Err(Error::OutOfRange(format!("angle {} outside (0, 2 pi)", angles[index])));
        }
        Ok(TwistVector::Approx { angles })
    }

    pub fn len(&self) -> usize {
        match self {
            TwistVector::Exact { exponents, .. } => exponents.len(),
            TwistVector::Approx { angles } => angles.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TwistVector::Exact { .. })
    }

    pub fn get(&self, n: usize) -> Twist {
        match self {
            TwistVector::Exact { field, exponents } => Twist::Root { field: field.clone(), exponent: exponents[n] },
            TwistVector::Approx { angles } => Twist::Angle(angles[n]),
        }
    }

    /// Sub-vector `(mu_i)_{i in indices}`.
    pub fn select(&self, indices: &[usize]) -> Self {
        match self {
            TwistVector::Exact { field, exponents } => {
                TwistVector::Exact { field: field.clone(), exponents: indices.iter().map(|&i| exponents[i]).collect() }
            }
            TwistVector::Approx { angles } => TwistVector::Approx { angles: indices.iter().map(|&i| angles[i]).collect() },
        }
    }

    /// Explicit embedding of exact twists as angles `2 pi e / r`.
    pub fn to_approx(&self) -> Self {
        match self {
            TwistVector::Exact { field, exponents } => TwistVector::Approx {
                angles: exponents.iter().map(|&e| TAU * e as f64 / field.order() as f64).collect(),
            },
            TwistVector::Approx { .. } => self.clone(),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_rational(Rational::zero())
    }

    pub fn one(&self) -> Scalar {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, q: Rational) -> Scalar {
        match self {
            TwistVector::Exact { field, .. } => Scalar::Exact(CyclotomicElement::from_rational(field, q)),
            TwistVector::Approx { .. } => Scalar::Approx(ApproxComplex::new(crate::rational::to_f64(&q), 0.0)),
        }
    }

    /// Exponent of `mu^a` as a power of `zeta_r` (exact mode only).
    pub fn power_exponent(&self, a: &[u32]) -> Option<i64> {
        match self {
            TwistVector::Exact { field, exponents } => {
                let r = field.order() as i64;
                let s: i64 = exponents.iter().zip(a).map(|(&e, &x)| (e * x as i64).rem_euclid(r)).sum();
                Some(s.rem_euclid(r))
            }
            TwistVector::Approx { .. } => None,
        }
    }

    /// Canonical text used in cache keys.
    pub fn key(&self) -> String {
        match self {
            TwistVector::Exact { field, exponents } => {
                let es: Vec<String> = exponents.iter().map(|e| format!("{}", e)).collect();
                format!("r={};e={}", field.order(), es.join(","))
            }
            TwistVector::Approx { angles } => {
                let ts: Vec<String> = angles.iter().map(|t| format!("{:016x}", t.to_bits())).collect();
                format!("theta={}", ts.join(","))
            }
        }
    }
}

/// `mu^a = prod_n mu_n^{a_n}`.
pub fn mu_power(mus: &TwistVector, a: &[u32]) -> Result<Scalar> {
    if a.len() != mus.len() {
        return Err(Error::DimensionMismatch { expected: mus.len(), found: a.len() });
    }
    Ok(match mus {
        TwistVector::Exact { field, .. } => {
            Scalar::Exact(CyclotomicElement::root_of_unity(field, mus.power_exponent(a).unwrap()))
        }
        TwistVector::Approx { angles } => {
            let theta: f64 = angles.iter().zip(a).map(|(t, &x)| t * x as f64).sum();
            Scalar::Approx(ApproxComplex::from_polar(1.0, theta))
        }
    })
}

/// Numerator of `(z d/dz)^n [z / (1 - z)]` over the denominator
/// `(1 - z)^{n+1}`, by iterating the operator on the pair.
fn operator_numerator(n: u32) -> Vec<BigInt> {
    // F = N / (1 - z)^p  =>  z F' = [z (1 - z) N' + p z N] / (1 - z)^{p+1}
    let mut num = vec![BigInt::zero(), BigInt::one()];
    for p in 1..=n {
        let mut next = vec![BigInt::zero(); num.len() + 1];
        for (i, c) in num.iter().enumerate().skip(1) {
            let d = c * BigInt::from(i);
            next[i] += &d;
            next[i + 1] -= d;
        }
        for (i, c) in num.iter().enumerate() {
            next[i + 1] += c * BigInt::from(p);
        }
        while next.last().is_some_and(Zero::is_zero) {
            next.pop();
        }
        num = next;
    }
    num
}

fn one_minus_power(twist: &Twist, exp: u32) -> Result<Scalar> {
    let one = twist.one();
    let base = one.checked_sub(&twist.value())?;
    let mut acc = one;
    for _ in 0..exp {
        acc = acc.checked_mul(&base)?;
    }
    Ok(acc)
}

/// `Li_{-n}(mu)` by operator iteration on `z / (1 - z)`.
pub fn negapolylog(n: u32, mu: &Twist) -> Result<Scalar> {
    if mu.is_one() {
        return Err(Error::TwistIsOne { index: 0 });
    }
    let denom = one_minus_power(mu, n + 1)?;
    let num = if n == 0 { mu.value() } else { mu.eval_integer_poly(&operator_numerator(n)) };
    num.checked_mul(&denom.inv()?)
}

/// Eulerian numbers `<n, j>`, `0 <= j < n`, from
/// `<n, j> = (j + 1) <n-1, j> + (n - j) <n-1, j-1>`.
pub fn eulerian_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 1..=n {
        let mut next = vec![BigInt::zero(); m as usize];
        for j in 0..m as usize {
            let mut v = BigInt::zero();
            if j < row.len() {
                v += &row[j] * BigInt::from(j + 1);
            }
            if j >= 1 && j - 1 < row.len() {
                v += &row[j - 1] * BigInt::from(m as usize - j);
            }
            next[j] = v;
        }
        row = next;
    }
    row
}

/// `Li_{-n}(mu) = sum_j <n, j> mu^{n-j} / (1 - mu)^{n+1}` for `n >= 1`.
pub fn eulerian_negapolylog(n: u32, mu: &Twist) -> Result<Scalar> {
    if mu.is_one() {
        return Err(Error::TwistIsOne { index: 0 });
    }
    if n == 0 {
        return Err(Error::OutOfRange("the Eulerian form needs n >= 1".into()));
    }
    let z = mu.value();
    let mut numerator = z.zero_like();
    let mut power = mu.one();
    let row = eulerian_row(n);
    let mut powers = Vec::with_capacity(n as usize + 1);
    for _ in 0..=n {
        powers.push(power.clone());
        power = power.checked_mul(&z)?;
    }
    for (j, a) in row.iter().enumerate() {
        numerator.add_scaled(&Rational::from_integer(a.clone()), &powers[n as usize - j])?;
    }
    numerator.checked_mul(&one_minus_power(mu, n + 1)?.inv()?)
}

/// Memo table for `Li_{-n}(mu)` keyed by `(n, mu)`.
#[derive(Clone, Debug, Default)]
pub struct NegaPolylogCache {
    values: BTreeMap<(u32, String), Scalar>,
}

impl NegaPolylogCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, n: u32, mu: &Twist) -> Result<Scalar> {
        let key = (n, mu.key());
        if let Some(v) = self.values.get(&key) {
            return Ok(v.clone());
        }
        let v = negapolylog(n, mu)?;
        self.values.insert(key, v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `prod_n Li_{-alpha_n}(mu_n)`.
    pub fn monomial_sum(&mut self, alpha: &MultiIndex, mus: &TwistVector) -> Result<Scalar> {
        if alpha.len() != mus.len() {
            return Err(Error::DimensionMismatch { expected: mus.len(), found: alpha.len() });
        }
        let mut acc = mus.one();
        for (n, &k) in alpha.exponents().iter().enumerate() {
            let v = self.get(k, &mus.get(n)).map_err(|e| match e {
                Error::TwistIsOne { .. } => Error::TwistIsOne { index: n },
                other => other,
            })?;
            acc = acc.checked_mul(&v)?;
        }
        Ok(acc)
    }
}

/// `prod_n zeta_{mu_n}(-alpha_n)`, the value of the separable series
/// `sum_m mu^m m^alpha`.
pub fn monomial_sum(alpha: &MultiIndex, mus: &TwistVector) -> Result<Scalar> {
    NegaPolylogCache::new().monomial_sum(alpha, mus)
}
