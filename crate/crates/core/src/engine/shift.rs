use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::twist::{mu_power, TwistVector};

/// `|1 - mu^a|` below this is treated as singular in approximate mode.
pub const APPROX_CONDITION_LIMIT: f64 = 1e-9;

/// A shift `a in N^N`, not all zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShiftVector(Vec<u32>);

impl ShiftVector {
    pub fn new(a: Vec<u32>) -> Result<Self> {
        if a.iter().all(|&x| x == 0) {
            return Err(Error::OutOfRange("shift vector must be nonzero".into()));
        }
        Ok(ShiftVector(a))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum ShiftPolicy {
    /// First basis vector, which is valid because `mu_1 != 1`.
    #[default]
    Default,
    AllOnes,
    Explicit(Vec<u32>),
}

/// Whether `a` is usable for `mus`: `mu^a != 1`, and in approximate mode
/// `|1 - mu^a|` is not tiny.
pub fn shift_is_valid(mus: &TwistVector, a: &[u32]) -> Result<bool> {
    if a.len() != mus.len() {
        return Err(Error::DimensionMismatch { expected: mus.len(), found: a.len() });
    }
    if a.iter().all(|&x| x == 0) {
        return Ok(false);
    }
    Ok(match mus.power_exponent(a) {
        Some(e) => e != 0,
        None => (mu_power(mus, a)?.embed() - 1.0).norm() >= APPROX_CONDITION_LIMIT,
    })
}

fn check(mus: &TwistVector, a: Vec<u32>) -> Result<ShiftVector> {
    let a = ShiftVector::new(a)?;
    if shift_is_valid(mus, a.as_slice())? {
        return Ok(a);
    }
    Err(if mus.is_exact() { Error::MuPowerIsOne } else { Error::ApproxIllConditioned })
}

/// Picks the shift used by the recurrence.
///
/// The default policy returns `e_1`; in approximate mode, if `mu_1` is too
/// close to 1 it tries the other basis vectors and then small multiples
/// before giving up.
pub fn choose_shift(mus: &TwistVector, policy: &ShiftPolicy) -> Result<ShiftVector> {
    let n = mus.len();
    match policy {
        ShiftPolicy::Explicit(a) => check(mus, a.clone()),
        ShiftPolicy::AllOnes => check(mus, vec![1; n]),
        ShiftPolicy::Default => {
            for scale in 1..=3u32 {
                for i in 0..n {
                    let mut a = vec![0; n];
                    a[i] = scale;
                    if shift_is_valid(mus, &a)? {
                        return ShiftVector::new(a);
                    }
                }
            }
            Err(if mus.is_exact() { Error::MuPowerIsOne } else { Error::ApproxIllConditioned })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CyclotomicField;

    fn minus_ones(n: usize) -> TwistVector {
        TwistVector::exact(CyclotomicField::new(2).unwrap(), vec![1; n]).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(choose_shift(&minus_ones(2), &ShiftPolicy::Default).unwrap().as_slice(), &[1, 0]);
        assert_eq!(choose_shift(&minus_ones(2), &ShiftPolicy::Explicit(vec![1, 1])), Err(Error::MuPowerIsOne));
        assert_eq!(choose_shift(&minus_ones(1), &ShiftPolicy::Explicit(vec![2])), Err(Error::MuPowerIsOne));
        assert_eq!(choose_shift(&minus_ones(2), &ShiftPolicy::AllOnes), Err(Error::MuPowerIsOne));
        assert!(choose_shift(&minus_ones(2), &ShiftPolicy::Explicit(vec![0, 0])).is_err());
        assert!(choose_shift(&minus_ones(2), &ShiftPolicy::Explicit(vec![1])).is_err());
    }

    #[test]
    fn approx_retries_ill_conditioned_default() {
        let mus = TwistVector::approx(vec![1e-12, 2.0]).unwrap();
        assert_eq!(choose_shift(&mus, &ShiftPolicy::Default).unwrap().as_slice(), &[0, 1]);
        assert_eq!(choose_shift(&mus, &ShiftPolicy::Explicit(vec![1, 0])), Err(Error::ApproxIllConditioned));
        let tiny = TwistVector::approx(vec![1e-12]).unwrap();
        assert_eq!(choose_shift(&tiny, &ShiftPolicy::Default), Err(Error::ApproxIllConditioned));
    }
}
