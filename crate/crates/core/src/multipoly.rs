//! Sparse multivariate polynomials over exact rationals, with the shift,
//! difference and restriction operators used by the recurrence.
//!
//! Variables are indexed from 0 in the API. Terms are kept in a `BTreeMap`
//! keyed by graded-lexicographic exponent order, which makes iteration and
//! the canonical text form deterministic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exponent vector `alpha` of a monomial `X^alpha`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(MultiIndex::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The variable `X_i` (0-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(MultiIndex(e), Rational::one())
    }

    pub fn monomial(alpha: MultiIndex, c: Rational) -> Self {
        let mut p = Self::zero(alpha.len());
        p.add_term(alpha, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            check_dim(nvars, e.len())?;
            p.add_term(MultiIndex(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, alpha: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&alpha) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&alpha);
                }
            }
            None => {
                self.terms.insert(alpha, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.terms.get(alpha).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree().unwrap_or(0) == 0
    }

    pub fn constant_coeff(&self) -> Rational {
        self.coeff(&MultiIndex::zero(self.nvars))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.plus(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * q)).collect() }
    }

    /// `p^k`, with `p^0 = 1` (also for the zero polynomial).
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut sq = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&sq).expect("same dimension");
            }
            k >>= 1;
            if k > 0 {
                sq = sq.checked_mul(&sq).expect("same dimension");
            }
        }
        acc
    }

    /// `p(X + a)`, expanding each variable with a row of Pascal's triangle.
    pub fn shift(&self, a: &[u32]) -> Result<Self> {
        check_dim(self.nvars, a.len())?;
        let mut current = self.clone();
        for (n, &an) in a.iter().enumerate() {
            if an == 0 {
                continue;
            }
            let an = BigInt::from(an);
            let mut next = Self::zero(self.nvars);
            for (e, c) in &current.terms {
                let deg = e.0[n];
                // (X_n + a_n)^deg = sum_j C(deg, j) a_n^(deg - j) X_n^j
                for j in 0..=deg {
                    let w = rational::binomial(deg, j) * num_traits::pow::pow(an.clone(), (deg - j) as usize);
                    let mut e2 = e.clone();
                    e2.0[n] = j;
                    next.add_term(e2, c * Rational::from_integer(w));
                }
            }
            current = next;
        }
        Ok(current)
    }

    /// `Delta_a p = p(X + a) - p(X)`.
    pub fn delta(&self, a: &[u32]) -> Result<Self> {
        self.shift(a)?.checked_sub(self)
    }

    /// Restriction to one stratum of the boundary set.
    ///
    /// `free` lists the kept variables `i_1 < .. < i_q`, which become
    /// `d_1..d_q` through `X_{i_k} = a_{i_k} + d_k`. `fixed` assigns values
    /// `b_j` in `1..=a_j` to the remaining variables in increasing order.
    pub fn restrict(&self, a: &[u32], free: &[usize], fixed: &[u32]) -> Result<Self> {
        check_dim(self.nvars, a.len())?;
        if free.is_empty() {
            return Err(Error::OutOfRange("restriction needs at least one free variable".into()));
        }
        if free.windows(2).any(|w| w[0] >= w[1]) || free.iter().any(|&i| i >= self.nvars) {
            return Err(Error::OutOfRange("free variables must be increasing and in range".into()));
        }
        let complement: Vec<usize> = (0..self.nvars).filter(|i| !free.contains(i)).collect();
        check_dim(complement.len(), fixed.len())?;
        for (&j, &b) in complement.iter().zip(fixed) {
            if b < 1 || b > a[j] {
                return Err(Error::OutOfRange(alloc::format!("b_{} = {} outside 1..={}", j + 1, b, a[j])));
            }
        }
        let q = free.len();
        let mut projected = Self::zero(q);
        for (e, c) in &self.terms {
            let mut coef = c.clone();
            for (&j, &b) in complement.iter().zip(fixed) {
                coef *= Rational::from_integer(num_traits::pow::pow(BigInt::from(b), e.0[j] as usize));
            }
            projected.add_term(MultiIndex(free.iter().map(|&i| e.0[i]).collect()), coef);
        }
        let offsets: Vec<u32> = free.iter().map(|&i| a[i]).collect();
        projected.shift(&offsets)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        check_dim(self.nvars, point.len())?;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                if k > 0 {
                    t *= rational::pow(x, k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluation at a lattice point.
    pub fn eval_at(&self, point: &[u32]) -> Result<Rational> {
        let pt: Vec<Rational> = point.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        self.eval(&pt)
    }

    /// Maximum total degree, `None` standing for the degree of zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(MultiIndex::degree)
    }

    /// Whether some term has a positive power of `X_n` (0-based).
    pub fn depends_on(&self, n: usize) -> bool {
        self.terms.keys().any(|e| e.0.get(n).copied().unwrap_or(0) >= 1)
    }

    /// Renames variables: new variable `k` is old variable `perm[k]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Result<Self> {
        check_dim(self.nvars, perm.len())?;
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(MultiIndex(perm.iter().map(|&i| e.0[i]).collect()), c.clone());
        }
        Ok(out)
    }

    /// Canonical text: `coef*X1^e1*...*XN^eN` terms joined by ` + `, in
    /// decreasing graded-lex order, coefficients as `p/q`; `0` for zero.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            s.push_str(&rational::canonical(c));
            for (n, k) in e.0.iter().enumerate() {
                s.push_str(&alloc::format!("*X{}^{}", n + 1, k));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}
