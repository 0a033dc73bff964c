//! Fast paths where every `Delta_a P_t` is a constant `delta_t`, so the
//! u-sum collapses to `delta^{k-u}` times lower values with the same `Q = 1`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{box_below, Evaluator, ShiftPolicy, ShiftVector, SumForm, ValueCache, ZetaInstance};
use crate::error::{Error, Result};
use crate::multipoly::SparsePolynomial;
use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::twist::TwistVector;

fn scalar_delta_value(inst: &ZetaInstance, k: &[u32], a: &ShiftVector, deltas: &[Rational]) -> Result<Scalar> {
    if k.len() != inst.nfactors() {
        return Err(Error::DimensionMismatch { expected: inst.nfactors(), found: k.len() });
    }
    let mut cache = ValueCache::new();
    let mut ev = Evaluator::new(SumForm::Decreasing, &mut cache);
    let root = ev.context(inst.ps(), inst.mus(), &ShiftPolicy::Explicit(a.as_slice().to_vec()))?;
    let ctx = ev.get(root);
    let one = SparsePolynomial::one(inst.nvars());

    // values for every u <= k in lexicographic order, so lower ones come first
    let mut values: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
    for target in box_below(k) {
        let mut inner = inst.mus().zero();
        for u in box_below(&target) {
            if u == target {
                continue;
            }
            let mut w = Rational::one();
            for t in 0..target.len() {
                let e = target[t] - u[t];
                w *= Rational::from_integer(rational::binomial(target[t], u[t]));
                if e > 0 {
                    w *= rational::pow(&deltas[t], e);
                }
            }
            if w.is_zero() {
                continue;
            }
            inner.add_scaled(&w, &values[&u])?;
        }
        let total = ctx.mu_a.checked_mul(&inner)?.checked_add(&ev.boundary(root, &one, &target)?)?;
        values.insert(target, total.checked_mul(&ctx.inv_one_minus_mu_a)?);
    }
    let c = inst.q().constant_coeff();
    Ok(values[k].scale(&c))
}

/// `Z(1; L_1..L_T; mu; -k)` for linear forms `L_t` with positive coefficients,
/// using `delta_t = L_t(a)`.
pub fn linear_special_value(inst: &ZetaInstance, k: &[u32], a: &ShiftVector) -> Result<Scalar> {
    let n = inst.nvars();
    for (t, p) in inst.ps().iter().enumerate() {
        let linear = p.terms().all(|(alpha, c)| alpha.degree() == 1 && c.is_positive());
        if !linear {
            return Err(Error::NotLinearForm { factor: t });
        }
    }
    for i in 0..n {
        if !inst.ps().iter().any(|p| p.depends_on(i)) {
            return Err(Error::DependencyConditionViolated { variable: i });
        }
    }
    if !inst.q().is_constant() {
        return Err(Error::InvalidInstance("the linear-form path needs a constant Q".into()));
    }
    let point: Vec<Rational> = a.as_slice().iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
    let deltas = inst.ps().iter().map(|p| p.eval(&point)).collect::<Result<Vec<_>>>()?;
    scalar_delta_value(inst, k, a, &deltas)
}

/// `sum_j <alpha_j, X>^2 + sum_n c_n X_n + d` with `c_n > 0` and `d >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredQuadratic {
    squares: Vec<Vec<Rational>>,
    linear: Vec<Rational>,
    constant: Rational,
}

impl StructuredQuadratic {
    pub fn new(squares: Vec<Vec<Rational>>, linear: Vec<Rational>, constant: Rational) -> Result<Self> {
        let n = linear.len();
        if n == 0 {
            return Err(Error::InvalidInstance("a quadratic needs at least one variable".into()));
        }
        if let Some(s) = squares.iter().find(|s| s.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: s.len() });
        }
        if linear.iter().any(|c| !c.is_positive()) {
            return Err(Error::InvalidInstance("linear coefficients must be positive".into()));
        }
        if constant.is_negative() {
            return Err(Error::InvalidInstance("constant term must be nonnegative".into()));
        }
        Ok(StructuredQuadratic { squares, linear, constant })
    }

    pub fn nvars(&self) -> usize {
        self.linear.len()
    }

    pub fn squares(&self) -> &[Vec<Rational>] {
        &self.squares
    }

    pub fn linear(&self) -> &[Rational] {
        &self.linear
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn expand(&self) -> SparsePolynomial {
        let n = self.nvars();
        let form = |coeffs: &[Rational]| {
            let terms = coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0u32; n];
                e[i] = 1;
                (e, c.clone())
            });
            SparsePolynomial::from_terms(n, terms).expect("dimensions checked")
        };
        let mut p = form(&self.linear).checked_add(&SparsePolynomial::constant(n, self.constant.clone())).expect("same nvars");
        for s in &self.squares {
            let l = form(s);
            p = p.checked_add(&l.checked_mul(&l).expect("same nvars")).expect("same nvars");
        }
        p
    }
}

/// `P(X + a) - P(X)`, which is the constant `sum_n c_n a_n` when every
/// square direction is orthogonal to `a`.
pub fn quadratic_delta(p: &StructuredQuadratic, a: &ShiftVector) -> Result<Rational> {
    let a = a.as_slice();
    if a.len() != p.nvars() {
        return Err(Error::DimensionMismatch { expected: p.nvars(), found: a.len() });
    }
    let dot = |v: &[Rational]| -> Rational { v.iter().zip(a).map(|(c, &x)| c * Rational::from_integer(BigInt::from(x))).sum() };
    if let Some(term) = p.squares.iter().position(|s| !dot(s).is_zero()) {
        return Err(Error::OrthogonalityViolated { term });
    }
    let delta = dot(&p.linear);
    debug_assert_eq!(p.expand().delta(a).ok(), Some(SparsePolynomial::constant(p.nvars(), delta.clone())));
    Ok(delta)
}

/// `Z(1; P_1..P_T; mu; -k)` for structured quadratics through the
/// scalar-delta recurrence.
pub fn quadratic_special_value(factors: &[StructuredQuadratic], mus: &TwistVector, k: &[u32], a: &ShiftVector) -> Result<Scalar> {
    let n = mus.len();
    let ps: Vec<SparsePolynomial> = factors.iter().map(StructuredQuadratic::expand).collect();
    let inst = ZetaInstance::new(SparsePolynomial::one(n), ps, mus.clone())?;
    let deltas = factors.iter().map(|f| quadratic_delta(f, a)).collect::<Result<Vec<_>>>()?;
    scalar_delta_value(&inst, k, a, &deltas)
}
