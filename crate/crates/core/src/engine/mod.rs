//! The shift-and-difference recurrence for special values.
//!
//! For a shift `a` with `mu^a != 1`, splitting the lattice into
//! `{m >= a + 1}` and the boundary `E(a)`, and expanding
//! `P_t(m + a)^{k_t} = (P_t(m) + Delta_a P_t(m))^{k_t}`, gives
//!
//! ```text
//! (1 - mu^a) Z(Q; -k) = mu^a sum_{0 <= u <= k, u != k} C(k, u) Z(Q(X+a) prod_t (Delta_a P_t)^{k_t-u_t}; -u)
//!                     + mu^a Z(Delta_a Q; -k)
//!                     + sum over E(a)
//! ```
//!
//! Each term on the right has fewer variables, a smaller `|k|`, or a
//! lower-degree `Q`, so solving for `Z(Q; -k)` terminates at `Z(0; .) = 0`.
//! Values are linear in `Q`, so the evaluator memoizes per monomial.

mod boundary;
mod conditions;
mod corollary;
mod shift;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::{One, Zero};

pub use self::boundary::{
    box_partition, box_sum, boundary_decompose, piece_box_sum, piece_point_count, summand, BoundaryPiece,
};
pub use self::conditions::{validate_conditions, ConditionReport, FactorReport, HypoRule, Verdict};
pub use self::corollary::{
    linear_special_value, quadratic_delta, quadratic_special_value, StructuredQuadratic,
};
pub use self::shift::{choose_shift, shift_is_valid, ShiftPolicy, ShiftVector, APPROX_CONDITION_LIMIT};

use crate::error::{Error, Result};
use crate::multipoly::{MultiIndex, SparsePolynomial};
use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::twist::{mu_power, TwistVector};

/// The data `(Q, P_1..P_T, mu)` of one series.
#[derive(Clone, Debug)]
pub struct ZetaInstance {
    q: SparsePolynomial,
    ps: Vec<SparsePolynomial>,
    mus: TwistVector,
}

impl ZetaInstance {
    pub fn new(q: SparsePolynomial, ps: Vec<SparsePolynomial>, mus: TwistVector) -> Result<Self> {
        let n = q.nvars();
        if n == 0 {
            return Err(Error::InvalidInstance("at least one variable is required".into()));
        }
        if ps.is_empty() {
            return Err(Error::InvalidInstance("at least one factor P_t is required".into()));
        }
        for p in &ps {
            if p.nvars() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.nvars() });
            }
        }
        if mus.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: mus.len() });
        }
        if let Some(t) = ps.iter().position(SparsePolynomial::is_zero) {
            return Err(Error::InvalidInstance(format!("factor P_{} is the zero polynomial", t + 1)));
        }
        Ok(ZetaInstance { q, ps, mus })
    }

    pub fn nvars(&self) -> usize {
        self.q.nvars()
    }

    pub fn nfactors(&self) -> usize {
        self.ps.len()
    }

    pub fn q(&self) -> &SparsePolynomial {
        &self.q
    }

    pub fn ps(&self) -> &[SparsePolynomial] {
        &self.ps
    }

    pub fn mus(&self) -> &TwistVector {
        &self.mus
    }

    pub fn with_q(&self, q: SparsePolynomial) -> Result<Self> {
        Self::new(q, self.ps.clone(), self.mus.clone())
    }

    /// Same series in approximate mode.
    pub fn to_approx(&self) -> Self {
        ZetaInstance { q: self.q.clone(), ps: self.ps.clone(), mus: self.mus.to_approx() }
    }

    /// Canonical text of `(Q, P_1..P_T, mu)`.
    pub fn canonical_key(&self) -> String {
        format!("Q={}|{}", self.q.canonical_text(), context_key(&self.ps, &self.mus))
    }
}

fn context_key(ps: &[SparsePolynomial], mus: &TwistVector) -> String {
    let ps: Vec<String> = ps.iter().map(SparsePolynomial::canonical_text).collect();
    format!("P=[{}]|mu={}", ps.join("; "), mus.key())
}

fn k_text(k: &[u32]) -> String {
    let parts: Vec<String> = k.iter().map(|x| format!("{}", x)).collect();
    format!("({})", parts.join(","))
}

/// Which of the two equivalent index conventions drives the u-sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SumForm {
    /// `sum_{0 <= u <= k, u != k} C(k, u) Z(Q(X+a) prod Delta^{k-u}; -u)`.
    #[default]
    Decreasing,
    /// `sum_{0 <= u <= k, u != 0} C(k, u) Z(Q(X+a) prod Delta^{u}; -(k-u))`.
    Increasing,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub shift: ShiftPolicy,
    pub form: SumForm,
}

/// Memo of special values keyed by the canonical text of `(Q, P, mu, k)`.
#[derive(Clone, Debug, Default)]
pub struct ValueCache {
    values: BTreeMap<String, Scalar>,
}

impl ValueCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &str) -> Option<&Scalar> {
        self.values.get(key)
    }

    pub fn insert(&mut self, key: String, value: Scalar) {
        self.values.insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Scalar)> {
        self.values.iter()
    }
}

/// `Z(Q; P_1..P_T; mu; -k)` by the recurrence.
pub fn special_value(inst: &ZetaInstance, k: &[u32], options: &Options, cache: &mut ValueCache) -> Result<Scalar> {
    if k.len() != inst.nfactors() {
        return Err(Error::DimensionMismatch { expected: inst.nfactors(), found: k.len() });
    }
    let mut ev = Evaluator::new(options.form, cache);
    let root = ev.context(inst.ps(), inst.mus(), &options.shift)?;
    ev.value(root, inst.q(), k)
}

/// Boundary strata sharing one `mu`-power factor.
pub(crate) struct PieceGroup {
    factor: Scalar,
    restricted: Vec<(Vec<usize>, Vec<u32>, usize)>,
    points: Vec<(Vec<u32>, Vec<Rational>)>,
}

impl PieceGroup {
    fn find_or_insert(groups: &mut Vec<PieceGroup>, factor: Scalar) -> &mut PieceGroup {
        let i = match groups.iter().position(|g| g.factor == factor) {
            Some(i) => i,
            None => {
                groups.push(PieceGroup { factor, restricted: Vec::new(), points: Vec::new() });
                groups.len() - 1
            }
        };
        &mut groups[i]
    }
}

/// Everything about `(P, mu, a)` that does not depend on `Q` or `k`.
pub(crate) struct Context {
    pub(crate) nvars: usize,
    pub(crate) mus: TwistVector,
    pub(crate) shift: Vec<u32>,
    pub(crate) mu_a: Scalar,
    pub(crate) inv_one_minus_mu_a: Scalar,
    deltas: Vec<SparsePolynomial>,
    key: String,
    pub(crate) groups: Vec<PieceGroup>,
}

pub(crate) struct Evaluator<'c> {
    form: SumForm,
    cache: &'c mut ValueCache,
    contexts: Vec<Arc<Context>>,
    by_key: BTreeMap<String, usize>,
    delta_pows: BTreeMap<(usize, usize, u32), SparsePolynomial>,
}

type Metric = (usize, u32, Option<u32>);

impl<'c> Evaluator<'c> {
    pub(crate) fn new(form: SumForm, cache: &'c mut ValueCache) -> Self {
        Evaluator { form, cache, contexts: Vec::new(), by_key: BTreeMap::new(), delta_pows: BTreeMap::new() }
    }

    pub(crate) fn get(&self, ctx: usize) -> Arc<Context> {
        self.contexts[ctx].clone()
    }

    /// Builds (or reuses) the context for `(ps, mus)`, creating the
    /// sub-contexts of every boundary stratum. A sub-context keeps the
    /// parent's shift restricted to its free coordinates when that is still
    /// a valid shift, and falls back to the default policy otherwise.
    pub(crate) fn context(&mut self, ps: &[SparsePolynomial], mus: &TwistVector, policy: &ShiftPolicy) -> Result<usize> {
        let key = context_key(ps, mus);
        if let Some(&i) = self.by_key.get(&key) {
            return Ok(i);
        }
        let n = mus.len();
        let a = choose_shift(mus, policy)?.into_vec();
        let mu_a = mu_power(mus, &a)?;
        let inv_one_minus_mu_a = mus.one().checked_sub(&mu_a)?.inv()?;
        let deltas = ps.iter().map(|p| p.delta(&a)).collect::<Result<Vec<_>>>()?;
        let template = ZetaInstance::new(SparsePolynomial::one(n), ps.to_vec(), mus.clone())?;
        let mut groups: Vec<PieceGroup> = Vec::new();
        for piece in boundary_decompose(&template, &a)? {
            match piece {
                BoundaryPiece::Restricted { free, fixed, sub, prefactor } => {
                    let sub_a: Vec<u32> = free.iter().map(|&i| a[i]).collect();
                    let sub_policy = if shift_is_valid(sub.mus(), &sub_a)? {
                        ShiftPolicy::Explicit(sub_a)
                    } else {
                        ShiftPolicy::Default
                    };
                    let sub = self.context(sub.ps(), sub.mus(), &sub_policy)?;
                    PieceGroup::find_or_insert(&mut groups, prefactor).restricted.push((free, fixed, sub));
                }
                BoundaryPiece::Point { point } => {
                    let factor_values = boundary::point_factor_values(&template, &point)?;
                    let weight = mu_power(mus, &point)?;
                    PieceGroup::find_or_insert(&mut groups, weight).points.push((point, factor_values));
                }
            }
        }
        let ctx = Context { nvars: n, mus: mus.clone(), shift: a, mu_a, inv_one_minus_mu_a, deltas, key: key.clone(), groups };
        self.contexts.push(Arc::new(ctx));
        let idx = self.contexts.len() - 1;
        self.by_key.insert(key, idx);
        Ok(idx)
    }

    fn delta_pow(&mut self, ctx: usize, t: usize, e: u32) -> SparsePolynomial {
        if let Some(p) = self.delta_pows.get(&(ctx, t, e)) {
            return p.clone();
        }
        let p = self.contexts[ctx].deltas[t].pow(e);
        self.delta_pows.insert((ctx, t, e), p.clone());
        p
    }

    pub(crate) fn value(&mut self, ctx: usize, q: &SparsePolynomial, k: &[u32]) -> Result<Scalar> {
        let mut acc = self.contexts[ctx].mus.zero();
        for (alpha, c) in q.terms() {
            let v = self.monomial_value(ctx, alpha, k)?;
            acc.add_scaled(c, &v)?;
        }
        Ok(acc)
    }

    fn monomial_value(&mut self, ctx: usize, alpha: &MultiIndex, k: &[u32]) -> Result<Scalar> {
        let c = self.get(ctx);
        let x = SparsePolynomial::monomial(alpha.clone(), Rational::one());
        let key = format!("{}|Q={}|k={}", c.key, x.canonical_text(), k_text(k));
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let metric: Metric = (c.nvars, k.iter().sum(), Some(alpha.degree()));
        let shifted = x.shift(&c.shift)?;

        let mut inner = c.mus.zero();
        for u in box_below(k) {
            let (exps, arg): (Vec<u32>, Vec<u32>) = match self.form {
                SumForm::Decreasing if u != k => (k.iter().zip(&u).map(|(a, b)| a - b).collect(), u.clone()),
                SumForm::Increasing if u.iter().any(|&x| x > 0) => {
                    (u.clone(), k.iter().zip(&u).map(|(a, b)| a - b).collect())
                }
                _ => continue,
            };
            let mut r = shifted.clone();
            for (t, &e) in exps.iter().enumerate() {
                if e > 0 && !r.is_zero() {
                    r = r.checked_mul(&self.delta_pow(ctx, t, e))?;
                }
            }
            if r.is_zero() {
                continue;
            }
            debug_assert!((c.nvars, arg.iter().sum::<u32>(), r.total_degree()) < metric);
            let weight: num_bigint::BigInt = k.iter().zip(&u).map(|(&kt, &ut)| rational::binomial(kt, ut)).product();
            let v = self.value(ctx, &r, &arg)?;
            inner.add_scaled(&Rational::from_integer(weight), &v)?;
        }

        let dq = shifted.checked_sub(&x)?;
        if !dq.is_zero() {
            debug_assert!((c.nvars, metric.1, dq.total_degree()) < metric);
            inner = inner.checked_add(&self.value(ctx, &dq, k)?)?;
        }

        let total = c.mu_a.checked_mul(&inner)?.checked_add(&self.boundary(ctx, &x, k)?)?;
        let result = total.checked_mul(&c.inv_one_minus_mu_a)?;
        self.cache.insert(key, result.clone());
        Ok(result)
    }

    /// Sum of the series over `E(a)` through the precomputed strata.
    pub(crate) fn boundary(&mut self, ctx: usize, q: &SparsePolynomial, k: &[u32]) -> Result<Scalar> {
        let c = self.get(ctx);
        let mut acc = c.mus.zero();
        for group in &c.groups {
            let mut inner = c.mus.zero();
            for (free, fixed, sub) in &group.restricted {
                let restricted = q.restrict(&c.shift, free, fixed)?;
                if restricted.is_zero() {
                    continue;
                }
                debug_assert!(self.contexts[*sub].nvars < c.nvars);
                inner = inner.checked_add(&self.value(*sub, &restricted, k)?)?;
            }
            let mut points = Rational::zero();
            for (point, factor_values) in &group.points {
                let mut v = q.eval_at(point)?;
                for (f, &kt) in factor_values.iter().zip(k) {
                    if kt > 0 {
                        v *= rational::pow(f, kt);
                    }
                }
                points += v;
            }
            inner.add_scaled(&points, &c.mus.one())?;
            acc = acc.checked_add(&group.factor.checked_mul(&inner)?)?;
        }
        Ok(acc)
    }
}

/// All `u` with `0 <= u_t <= k_t`, in lexicographic order.
pub(crate) fn box_below(k: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = k.iter().map(|_| 0).collect();
    loop {
        out.push(cur.clone());
        let mut i = k.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < k[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CyclotomicField;
    use crate::oracle::closed_value;
    use crate::rational::{frac, int};
    use alloc::vec;

    fn minus_ones(n: usize) -> TwistVector {
        TwistVector::exact(CyclotomicField::new(2).unwrap(), vec![1; n]).unwrap()
    }

    fn rational_of(s: &Scalar) -> Rational {
        s.as_exact().and_then(|e| e.as_rational()).cloned().unwrap()
    }

    fn sv(inst: &ZetaInstance, k: &[u32]) -> Scalar {
        special_value(inst, k, &Options::default(), &mut ValueCache::new()).unwrap()
    }

    fn sum_of_vars(n: usize) -> SparsePolynomial {
        (0..n).fold(SparsePolynomial::zero(n), |acc, i| acc.checked_add(&SparsePolynomial::variable(n, i)).unwrap())
    }

    #[test]
    fn one_variable_examples() {
        let inst = ZetaInstance::new(SparsePolynomial::one(1), vec![SparsePolynomial::variable(1, 0)], minus_ones(1)).unwrap();
        assert_eq!(rational_of(&sv(&inst, &[1])), frac(-1, 4));
        assert_eq!(rational_of(&sv(&inst, &[0])), frac(-1, 2));
        assert_eq!(rational_of(&sv(&inst, &[2])), int(0));
        assert_eq!(rational_of(&sv(&inst, &[3])), frac(1, 8));
    }

    #[test]
    fn two_variable_example_matches_oracle() {
        let inst = ZetaInstance::new(SparsePolynomial::one(2), vec![sum_of_vars(2)], minus_ones(2)).unwrap();
        assert_eq!(rational_of(&sv(&inst, &[1])), frac(1, 4));
        for k in 0..=5 {
            assert_eq!(sv(&inst, &[k]), closed_value(inst.q(), inst.ps(), &[k], inst.mus()).unwrap());
        }
    }

    #[test]
    fn zero_weight_gives_zero() {
        let inst = ZetaInstance::new(SparsePolynomial::zero(2), vec![sum_of_vars(2)], minus_ones(2)).unwrap();
        assert!(sv(&inst, &[4]).is_zero());
    }

    #[test]
    fn instance_validation() {
        let x = SparsePolynomial::variable(1, 0);
        assert!(ZetaInstance::new(SparsePolynomial::one(1), vec![], minus_ones(1)).is_err());
        assert!(ZetaInstance::new(SparsePolynomial::one(1), vec![SparsePolynomial::zero(1)], minus_ones(1)).is_err());
        assert!(ZetaInstance::new(SparsePolynomial::one(1), vec![x.clone()], minus_ones(2)).is_err());
        assert!(ZetaInstance::new(SparsePolynomial::one(2), vec![x], minus_ones(2)).is_err());
        assert!(ZetaInstance::new(SparsePolynomial::one(0), vec![SparsePolynomial::one(0)], minus_ones(0)).is_err());
        let inst = ZetaInstance::new(SparsePolynomial::one(2), vec![sum_of_vars(2)], minus_ones(2)).unwrap();
        assert!(special_value(&inst, &[1, 1], &Options::default(), &mut ValueCache::new()).is_err());
    }

    #[test]
    fn explicit_invalid_shift_is_reported() {
        let inst = ZetaInstance::new(SparsePolynomial::one(2), vec![sum_of_vars(2)], minus_ones(2)).unwrap();
        let opts = Options { shift: ShiftPolicy::Explicit(vec![1, 1]), ..Options::default() };
        assert_eq!(special_value(&inst, &[1], &opts, &mut ValueCache::new()), Err(Error::MuPowerIsOne));
    }

    #[test]
    fn both_sum_forms_agree() {
        let f = CyclotomicField::new(6).unwrap();
        let mus = TwistVector::exact(f, vec![1, 4]).unwrap();
        let p1 = sum_of_vars(2).checked_add(&SparsePolynomial::variable(2, 0).pow(2)).unwrap();
        let p2 = sum_of_vars(2).scale(&frac(1, 2)).checked_add(&SparsePolynomial::one(2)).unwrap();
        let q = SparsePolynomial::variable(2, 1).checked_add(&SparsePolynomial::constant(2, frac(2, 3))).unwrap();
        let inst = ZetaInstance::new(q, vec![p1, p2], mus).unwrap();
        let inc = Options { form: SumForm::Increasing, ..Options::default() };
        for k in box_below(&[2, 2]) {
            let a = sv(&inst, &k);
            let b = special_value(&inst, &k, &inc, &mut ValueCache::new()).unwrap();
            assert_eq!(a, b, "k={k:?}");
            assert_eq!(a, closed_value(inst.q(), inst.ps(), &k, inst.mus()).unwrap(), "k={k:?}");
        }
    }

    #[test]
    fn cache_does_not_change_results() {
        let f = CyclotomicField::new(4).unwrap();
        let mus = TwistVector::exact(f, vec![1, 3]).unwrap();
        let inst = ZetaInstance::new(SparsePolynomial::one(2), vec![sum_of_vars(2)], mus).unwrap();
        let mut shared = ValueCache::new();
        for k in 0..=4 {
            let warm = special_value(&inst, &[k], &Options::default(), &mut shared).unwrap();
            assert_eq!(warm, sv(&inst, &[k]));
        }
        assert!(!shared.is_empty());
    }

    #[test]
    fn approx_mode_tracks_exact() {
        let f = CyclotomicField::new(3).unwrap();
        let mus = TwistVector::exact(f, vec![1, 2]).unwrap();
        let p = sum_of_vars(2).checked_add(&SparsePolynomial::one(2)).unwrap();
        let inst = ZetaInstance::new(SparsePolynomial::variable(2, 0), vec![p], mus).unwrap();
        let approx = inst.to_approx();
        for k in 0..=4 {
            let e = sv(&inst, &[k]).embed();
            let a = sv(&approx, &[k]);
            assert!(!a.is_exact());
            assert!((a.embed() - e).norm() < 1e-9 * (1.0 + e.norm()), "k={k}");
        }
    }

    #[test]
    fn box_below_enumerates() {
        assert_eq!(box_below(&[1, 2]).len(), 6);
        assert_eq!(box_below(&[]), vec![Vec::<u32>::new()]);
    }
}
