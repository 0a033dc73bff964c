//! Reference values through the separable product formula.
//!
//! Expanding `E = Q * prod_t P_t^{k_t} = sum_alpha a_alpha X^alpha`, the
//! special value is `sum_alpha a_alpha prod_n zeta_{mu_n}(-alpha_n)`.
//! No hypothesis on the `P_t` is checked here; this is a formal evaluator.

use crate::error::{Error, Result};
use crate::multipoly::SparsePolynomial;
use crate::scalar::Scalar;
use crate::twist::{NegaPolylogCache, TwistVector};

/// `E = Q * prod_t P_t^{k_t}`.
pub fn expand(q: &SparsePolynomial, ps: &[SparsePolynomial], k: &[u32]) -> Result<SparsePolynomial> {
    if ps.len() != k.len() {
        return Err(Error::DimensionMismatch { expected: ps.len(), found: k.len() });
    }
    let mut e = q.clone();
    for (p, &kt) in ps.iter().zip(k) {
        if p.nvars() != q.nvars() {
            return Err(Error::DimensionMismatch { expected: q.nvars(), found: p.nvars() });
        }
        if kt > 0 && !e.is_zero() {
            e = e.checked_mul(&p.pow(kt))?;
        }
    }
    Ok(e)
}

pub fn closed_value(q: &SparsePolynomial, ps: &[SparsePolynomial], k: &[u32], mus: &TwistVector) -> Result<Scalar> {
    closed_value_cached(q, ps, k, mus, &mut NegaPolylogCache::new())
}

pub fn closed_value_cached(
    q: &SparsePolynomial,
    ps: &[SparsePolynomial],
    k: &[u32],
    mus: &TwistVector,
    cache: &mut NegaPolylogCache,
) -> Result<Scalar> {
    if mus.len() != q.nvars() {
        return Err(Error::DimensionMismatch { expected: q.nvars(), found: mus.len() });
    }
    let e = expand(q, ps, k)?;
    let mut acc = mus.zero();
    for (alpha, c) in e.terms() {
        acc.add_scaled(c, &cache.monomial_sum(alpha, mus)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CyclotomicField;
    use crate::rational::{frac, int, Rational};
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn minus_ones(n: usize) -> TwistVector {
        TwistVector::exact(CyclotomicField::new(2).unwrap(), vec![1; n]).unwrap()
    }

    fn rational_of(s: &Scalar) -> Rational {
        s.as_exact().and_then(|e| e.as_rational()).cloned().unwrap()
    }

    fn sum_of_vars(n: usize) -> SparsePolynomial {
        (0..n).fold(SparsePolynomial::zero(n), |acc, i| acc.checked_add(&SparsePolynomial::variable(n, i)).unwrap())
    }

    #[test]
    fn examples() {
        let one1 = SparsePolynomial::one(1);
        let x = SparsePolynomial::variable(1, 0);
        assert_eq!(rational_of(&closed_value(&one1, &[x], &[1], &minus_ones(1)).unwrap()), frac(-1, 4));
        let one2 = SparsePolynomial::one(2);
        let p = sum_of_vars(2);
        assert_eq!(rational_of(&closed_value(&one2, core::slice::from_ref(&p), &[1], &minus_ones(2)).unwrap()), frac(1, 4));
        assert_eq!(rational_of(&closed_value(&one2, core::slice::from_ref(&p), &[0], &minus_ones(2)).unwrap()), frac(1, 4));
        let zero = SparsePolynomial::zero(2);
        assert_eq!(rational_of(&closed_value(&zero, &[p], &[3], &minus_ones(2)).unwrap()), int(0));
    }

    #[test]
    fn dimension_errors() {
        let one = SparsePolynomial::one(2);
        let p = sum_of_vars(2);
        assert!(closed_value(&one, core::slice::from_ref(&p), &[1, 1], &minus_ones(2)).is_err());
        assert!(closed_value(&one, &[p], &[1], &minus_ones(3)).is_err());
    }

    fn arb_poly(n: usize, maxdeg: u32) -> impl Strategy<Value = SparsePolynomial> {
        prop::collection::vec((prop::collection::vec(0..=maxdeg, n), -4i64..=4, 1i64..=3), 1..=5).prop_map(move |ts| {
            SparsePolynomial::from_terms(n, ts.into_iter().map(|(e, p, q)| (e, frac(p, q)))).unwrap()
        })
    }

    fn arb_twist(n: usize) -> impl Strategy<Value = TwistVector> {
        (prop::sample::select(vec![3u64, 4, 6]), prop::collection::vec(1i64..6, n)).prop_map(|(r, es)| {
            let es = es.into_iter().map(|e| 1 + (e - 1) % (r as i64 - 1)).collect();
            TwistVector::exact(CyclotomicField::new(r).unwrap(), es).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn linear_in_q(
            (q1, q2, p, mus) in (1usize..=2).prop_flat_map(|n| (arb_poly(n, 2), arb_poly(n, 2), arb_poly(n, 1), arb_twist(n))),
            k in 0u32..=3, lp in -3i64..=3, lq in 1i64..=3,
        ) {
            let ps = [p];
            let v1 = closed_value(&q1, &ps, &[k], &mus).unwrap();
            let v2 = closed_value(&q2, &ps, &[k], &mus).unwrap();
            let v12 = closed_value(&q1.checked_add(&q2).unwrap(), &ps, &[k], &mus).unwrap();
            prop_assert_eq!(v12, v1.checked_add(&v2).unwrap());
            let lambda = frac(lp, lq);
            prop_assert_eq!(closed_value(&q1.scale(&lambda), &ps, &[k], &mus).unwrap(), v1.scale(&lambda));
        }

        #[test]
        fn exponent_shift_identity(
            (q, p1, p2, mus) in (1usize..=2).prop_flat_map(|n| (arb_poly(n, 2), arb_poly(n, 1), arb_poly(n, 2), arb_twist(n))),
            k1 in 0u32..=2, k2 in 1u32..=3,
        ) {
            let ps = [p1, p2.clone()];
            let lhs = closed_value(&q, &ps, &[k1, k2], &mus).unwrap();
            let rhs = closed_value(&q.checked_mul(&p2).unwrap(), &ps, &[k1, k2 - 1], &mus).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn permutation_equivariant(
            (q, p) in (arb_poly(3, 2), arb_poly(3, 1)),
            es in prop::collection::vec(1i64..6, 3),
            k in 0u32..=3,
            perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        ) {
            let f = CyclotomicField::new(6).unwrap();
            let mus = TwistVector::exact(f.clone(), es.clone()).unwrap();
            let permuted_mus = TwistVector::exact(f, perm.iter().map(|&i| es[i]).collect::<Vec<_>>()).unwrap();
            let lhs = closed_value(&q, core::slice::from_ref(&p), &[k], &mus).unwrap();
            let rhs = closed_value(
                &q.permute_vars(&perm).unwrap(),
                &[p.permute_vars(&perm).unwrap()],
                &[k],
                &permuted_mus,
            ).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
