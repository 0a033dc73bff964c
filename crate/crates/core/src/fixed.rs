//! Binary fixed-point reals on top of `BigInt`: `n` stands for `n / 2^FRAC_BITS`.
//! Used where partial sums are huge but must cancel to a small result.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;

pub const FRAC_BITS: usize = 384;

const GUARD_BITS: usize = 64;

pub fn one() -> BigInt {
    BigInt::one() << FRAC_BITS
}

/// Conversion of a finite double; bits below `2^-FRAC_BITS` are dropped.
pub fn from_f64(x: f64) -> BigInt {
    assert!(x.is_finite(), "fixed-point conversion of a non-finite value");
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = BigInt::from(mantissa) * sign;
    let shift = exp + FRAC_BITS as i64;
    if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    }
}

/// Splits a double in `(0, 1]` into `(numerator, shift)` with `x = numerator / 2^shift`.
pub fn dyadic(x: f64) -> (BigInt, usize) {
    let mut num = x;
    let mut shift = 0usize;
    while num != libm::trunc(num) {
        num *= 2.0;
        shift += 1;
    }
    (BigInt::from(num as u64), shift)
}

pub fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> FRAC_BITS
}

pub fn to_rational(n: &BigInt) -> Rational {
    Rational::new(n.clone(), one())
}

pub fn to_f64(n: &BigInt) -> f64 {
    crate::rational::to_f64(&to_rational(n))
}

/// `(cos theta, sin theta)` by Taylor series, for moderate `|theta|`.
pub fn cos_sin(theta: f64) -> (BigInt, BigInt) {
    let wide = |v: BigInt| v << GUARD_BITS;
    let scale = FRAC_BITS + GUARD_BITS;
    let t = wide(from_f64(theta));
    let mut term = BigInt::one() << scale;
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut n: u32 = 0;
    while !term.is_zero() {
        match n % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        n += 1;
        term = ((term * &t) >> scale) / BigInt::from(n);
    }
    (cos >> GUARD_BITS, sin >> GUARD_BITS)
}
