//! Numerical Abel summation cross-check.
//!
//! For `0 < x < 1` the damped series `sum_m (x mu)^m E(m)`, with
//! `E = Q * prod_t P_t^{k_t}`, converges absolutely; as `x -> 1` it tends to
//! the special value. The sum factors into per-variable sums
//! `S_n(j) = sum_{m=1}^{M} x^m mu_n^m m^j`, which are accumulated in
//! fixed-point arithmetic: the individual partial sums reach `j!/(1-x)^{j+1}`
//! while their twisted combination stays small.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cyclotomic::{CyclotomicElement, CyclotomicField};
use crate::engine::ZetaInstance;
use crate::error::{Error, Result};
use crate::fixed;
use crate::oracle::expand;
use crate::rational::Rational;
use crate::scalar::{ApproxComplex, Scalar};
use crate::twist::TwistVector;

/// Per-axis truncation used when no tail analysis is done.
pub const DEFAULT_TRUNCATION: usize = 20_000;

/// Smallest `M >= floor` past the peak of `x^m m^degree` with
/// `x^M M^degree <= tail`.
pub fn truncation_bound(x: f64, degree: u32, tail: f64, floor: usize) -> usize {
    let rate = -libm::log(x);
    let target = -libm::log(tail);
    let peak = libm::ceil(degree as f64 / rate) as usize;
    let ok = |m: usize| m as f64 * rate - degree as f64 * libm::log(m as f64) >= target;
    let mut lo = peak.max(floor).max(1);
    if ok(lo) {
        return lo;
    }
    let mut hi = lo * 2;
    while !ok(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

type ExactKey = (u64, u64, usize);
type ApproxKey = (u64, u64, usize);

/// Memo of per-axis damped power sums, shared across instances with the
/// same twists and damping.
#[derive(Default)]
pub struct AbelSummer {
    // (order r, x bits, M) -> sums split by residue m mod r: [residue][j]
    exact: BTreeMap<ExactKey, Vec<Vec<BigInt>>>,
    // (theta bits, x bits, M) -> [j] = (re, im)
    approx: BTreeMap<ApproxKey, Vec<(BigInt, BigInt)>>,
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfRange(alloc::format!("damping x = {} outside (0, 1)", x)));
    }
    Ok(())
}

impl AbelSummer {
    pub fn new() -> Self {
        Self::default()
    }

    fn residue_sums(&mut self, r: u64, x: f64, m_max: usize, jmax: usize) -> &Vec<Vec<BigInt>> {
        let key = (r, x.to_bits(), m_max);
        let stale = self.exact.get(&key).is_none_or(|v| v[0].len() <= jmax);
        if stale {
            let (xn, xs) = fixed::dyadic(x);
            let mut w = fixed::one();
            let mut sums = vec![vec![BigInt::zero(); jmax + 1]; r as usize];
            for m in 1..=m_max as u64 {
                w = (w * &xn) >> xs;
                let slot = &mut sums[(m % r) as usize];
                let mut t = w.clone();
                for (j, acc) in slot.iter_mut().enumerate() {
                    *acc += &t;
                    if j < jmax {
                        t *= m;
                    }
                }
            }
            self.exact.insert(key, sums);
        }
        &self.exact[&key]
    }

    /// `S(j) = sum_{m<=M} x^m zeta_r^{e m} m^j` for `j <= jmax`, as exact
    /// elements whose rational coordinates carry the fixed-point sums.
    pub fn axis_sums_exact(
        &mut self,
        field: &alloc::sync::Arc<CyclotomicField>,
        exponent: i64,
        x: f64,
        m_max: usize,
        jmax: usize,
    ) -> Result<Vec<CyclotomicElement>> {
        check_x(x)?;
        let r = field.order();
        let sums = self.residue_sums(r, x, m_max, jmax);
        Ok((0..=jmax)
            .map(|j| {
                let mut coeffs = vec![Rational::zero(); r as usize];
                for (c, row) in sums.iter().enumerate() {
                    let slot = (exponent * c as i64).rem_euclid(r as i64) as usize;
                    coeffs[slot] += fixed::to_rational(&row[j]);
                }
                CyclotomicElement::from_coeffs(field, coeffs)
            })
            .collect())
    }

    /// `S(j) = sum_{m<=M} (x e^{i theta})^m m^j` for `j <= jmax`.
    pub fn axis_sums_approx(&mut self, theta: f64, x: f64, m_max: usize, jmax: usize) -> Result<Vec<ApproxComplex>> {
        check_x(x)?;
        let key = (theta.to_bits(), x.to_bits(), m_max);
        let stale = self.approx.get(&key).is_none_or(|v| v.len() <= jmax);
        if stale {
            let (c, s) = fixed::cos_sin(theta);
            let xf = fixed::from_f64(x);
            let (zr, zi) = (fixed::mul(&xf, &c), fixed::mul(&xf, &s));
            let (mut wr, mut wi) = (fixed::one(), BigInt::zero());
            let mut sums = vec![(BigInt::zero(), BigInt::zero()); jmax + 1];
            for m in 1..=m_max as u64 {
                let nr = fixed::mul(&wr, &zr) - fixed::mul(&wi, &zi);
                let ni = fixed::mul(&wr, &zi) + fixed::mul(&wi, &zr);
                wr = nr;
                wi = ni;
                let (mut tr, mut ti) = (wr.clone(), wi.clone());
                for (j, (ar, ai)) in sums.iter_mut().enumerate() {
                    *ar += &tr;
                    *ai += &ti;
                    if j < jmax {
                        tr *= m;
                        ti *= m;
                    }
                }
            }
            self.approx.insert(key, sums);
        }
        Ok(self.approx[&key][..=jmax]
            .iter()
            .map(|(re, im)| ApproxComplex::new(fixed::to_f64(re), fixed::to_f64(im)))
            .collect())
    }

    /// `sum_{m in [1, M]^N} (x mu)^m Q(m) prod_t P_t(m)^{k_t}`.
    pub fn estimate(&mut self, inst: &ZetaInstance, k: &[u32], x: f64, m_max: usize) -> Result<ApproxComplex> {
        check_x(x)?;
        let e = expand(inst.q(), inst.ps(), k)?;
        if e.is_zero() {
            return Ok(ApproxComplex::zero());
        }
        let n = inst.nvars();
        let jmax: Vec<usize> = (0..n)
            .map(|i| e.terms().map(|(a, _)| a.exponents()[i] as usize).max().unwrap_or(0))
            .collect();
        match inst.mus() {
            TwistVector::Exact { field, exponents } => {
                let mut axes = Vec::with_capacity(n);
                for i in 0..n {
                    axes.push(self.axis_sums_exact(field, exponents[i], x, m_max, jmax[i])?);
                }
                let mut acc = Scalar::Exact(CyclotomicElement::zero(field));
                for (alpha, c) in e.terms() {
                    let mut term = CyclotomicElement::one(field);
                    for (i, &j) in alpha.exponents().iter().enumerate() {
                        term = term.checked_mul(&axes[i][j as usize])?;
                    }
                    acc.add_scaled(c, &Scalar::Exact(term))?;
                }
                Ok(acc.embed())
            }
            TwistVector::Approx { angles } => {
                let mut axes = Vec::with_capacity(n);
                for i in 0..n {
                    axes.push(self.axis_sums_approx(angles[i], x, m_max, jmax[i])?);
                }
                let mut acc = ApproxComplex::zero();
                for (alpha, c) in e.terms() {
                    let mut term = ApproxComplex::new(crate::rational::to_f64(c), 0.0);
                    for (i, &j) in alpha.exponents().iter().enumerate() {
                        term *= axes[i][j as usize];
                    }
                    acc += term;
                }
                Ok(acc)
            }
        }
    }
}

/// One-shot damped sum; see [`AbelSummer::estimate`].
pub fn abel_estimate(inst: &ZetaInstance, k: &[u32], x: f64, m_max: usize) -> Result<ApproxComplex> {
    AbelSummer::new().estimate(inst, k, x, m_max)
}

/// Polynomial (Neville) extrapolation of `f(h)` to `h = 0`.
pub fn richardson(hs: &[f64], values: &[ApproxComplex]) -> ApproxComplex {
    assert_eq!(hs.len(), values.len());
    assert!(!hs.is_empty());
    let mut p = values.to_vec();
    let n = p.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (p[i + 1] * hs[i] - p[i] * hs[i + k]) / (hs[i] - hs[i + k]);
        }
    }
    p[0]
}

/// Abel value extrapolated from `x = 1 - 2^{-j}`, `j` in `levels`, with a
/// per-level truncation keeping the tail below `1e-30` (never below
/// [`DEFAULT_TRUNCATION`]).
pub fn extrapolated_estimate(
    summer: &mut AbelSummer,
    inst: &ZetaInstance,
    k: &[u32],
    levels: core::ops::RangeInclusive<u32>,
) -> Result<ApproxComplex> {
    let e = expand(inst.q(), inst.ps(), k)?;
    let degree = (0..inst.nvars())
        .map(|i| e.terms().map(|(a, _)| a.exponents()[i]).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let mut hs = Vec::new();
    let mut values = Vec::new();
    for j in levels {
        let h = libm::ldexp(1.0, -(j as i32));
        let x = 1.0 - h;
        let m_max = truncation_bound(x, degree, 1e-30, DEFAULT_TRUNCATION);
        hs.push(h);
        values.push(summer.estimate(inst, k, x, m_max)?);
    }
    Ok(richardson(&hs, &values))
}
