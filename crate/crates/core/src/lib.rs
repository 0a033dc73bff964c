//! Exact special values of twisted multivariable zeta series
//!
//! `Z(Q; P_1..P_T; mu; s) = sum_{m >= 1} mu^m Q(m) prod_t P_t(m)^{-s_t}`
//!
//! evaluated at tuples of negative integers `s = -k`. The primary evaluator
//! is the shift-and-difference ("decalage") recurrence in [`engine`]; the
//! product formula over negative-order polylogarithms in [`oracle`] is an
//! independent reference. All exact values live in a cyclotomic field
//! `Q(zeta_r)`; an approximate complex mode is available for arbitrary
//! unit-modulus twists.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod abel;
pub mod cyclotomic;
pub mod engine;
mod error;
mod fixed;
pub mod multipoly;
pub mod oracle;
pub mod rational;
pub mod scalar;
pub mod twist;

pub use crate::cyclotomic::{cyclotomic_polynomial, CyclotomicElement, CyclotomicField, FieldCache};
pub use crate::engine::{
    special_value, Options, ShiftPolicy, SumForm, ValueCache, ZetaInstance,
};
pub use crate::error::{Error, Result};
pub use crate::multipoly::{MultiIndex, SparsePolynomial};
pub use crate::oracle::closed_value;
pub use crate::rational::Rational;
pub use crate::scalar::{ApproxComplex, Scalar};
pub use crate::twist::{Twist, TwistVector};
