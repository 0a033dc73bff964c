//! Sufficient structural checks for positivity, hypoellipticity and growth.
//! A check that does not apply yields `Unknown`, never a guess.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use super::ZetaInstance;
use crate::multipoly::SparsePolynomial;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    fn combine(verdicts: impl Iterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Unknown => out = Verdict::Unknown,
                Verdict::Pass => {}
            }
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypoRule {
    /// Homogeneous of degree one with positive coefficients.
    LinearForm,
    /// Sum of squares of linear forms plus a positive linear part and a
    /// nonnegative constant.
    StructuredQuadratic,
    /// Every stored coefficient is strictly positive. This gives the weak
    /// decreasing hypothesis, under which the recurrence still holds.
    PositiveCoefficients,
}

impl fmt::Display for HypoRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HypoRule::LinearForm => "linear form",
            HypoRule::StructuredQuadratic => "structured quadratic",
            HypoRule::PositiveCoefficients => "positive coefficients",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorReport {
    pub positivity: Verdict,
    pub hypoellipticity: Verdict,
    pub rule: Option<HypoRule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub positivity: Verdict,
    pub hypoellipticity: Verdict,
    pub growth: Verdict,
    pub factors: Vec<FactorReport>,
}

impl ConditionReport {
    /// True when some necessary check failed, so the series is not known to
    /// converge anywhere.
    pub fn has_failure(&self) -> bool {
        [self.positivity, self.hypoellipticity, self.growth].contains(&Verdict::Fail)
    }
}

fn is_linear_form(p: &SparsePolynomial) -> bool {
    p.terms().all(|(alpha, c)| alpha.degree() == 1 && c.is_positive())
}

/// Positive semidefiniteness of a symmetric rational matrix by pivoted
/// elimination.
fn is_psd(mut m: Vec<Vec<Rational>>) -> bool {
    let mut live: Vec<usize> = (0..m.len()).collect();
    while !live.is_empty() {
        if live.iter().any(|&i| m[i][i].is_negative()) {
            return false;
        }
        let Some(pos) = live.iter().position(|&i| m[i][i].is_positive()) else {
            // zero diagonal: PSD only if the rest is zero
            return live.iter().all(|&i| live.iter().all(|&j| m[i][j].is_zero()));
        };
        let p = live.remove(pos);
        let pivot = m[p][p].clone();
        for &i in &live {
            for &j in &live {
                let update = &m[i][p] * &m[p][j] / &pivot;
                m[i][j] -= update;
            }
        }
    }
    true
}

/// Whether `p` has the shape `sum <alpha, X>^2 + sum c_n X_n + d` with every
/// `c_n > 0` and `d >= 0`.
pub(crate) fn is_structured_quadratic(p: &SparsePolynomial) -> bool {
    let n = p.nvars();
    if p.total_degree().is_some_and(|d| d > 2) || p.constant_coeff().is_negative() {
        return false;
    }
    let mut linear = vec![Rational::zero(); n];
    let mut quad = vec![vec![Rational::zero(); n]; n];
    for (alpha, c) in p.terms() {
        let e = alpha.exponents();
        let support: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        match (alpha.degree(), support.as_slice()) {
            (0, _) => {}
            (1, [i]) => linear[*i] = c.clone(),
            (2, [i]) => quad[*i][*i] = c.clone(),
            (2, [i, j]) => {
                let half = c / rational::int(2);
                quad[*i][*j] = half.clone();
                quad[*j][*i] = half;
            }
            _ => return false,
        }
    }
    linear.iter().all(Signed::is_positive) && is_psd(quad)
}

fn factor_report(p: &SparsePolynomial) -> FactorReport {
    let ones = vec![1u32; p.nvars()];
    let at_ones = p.eval_at(&ones).unwrap_or_else(|_| Rational::zero());
    let nonnegative = p.terms().all(|(_, c)| !c.is_negative());
    let structured = is_structured_quadratic(p);
    let positivity = if !at_ones.is_positive() {
        Verdict::Fail
    } else if nonnegative || structured {
        Verdict::Pass
    } else {
        Verdict::Unknown
    };
    let rule = if positivity == Verdict::Fail {
        None
    } else if is_linear_form(p) {
        Some(HypoRule::LinearForm)
    } else if structured {
        Some(HypoRule::StructuredQuadratic)
    } else if p.terms().all(|(_, c)| c.is_positive()) {
        Some(HypoRule::PositiveCoefficients)
    } else {
        None
    };
    let hypoellipticity = if rule.is_some() { Verdict::Pass } else { Verdict::Unknown };
    FactorReport { positivity, hypoellipticity, rule }
}

pub fn validate_conditions(inst: &ZetaInstance) -> ConditionReport {
    let factors: Vec<FactorReport> = inst.ps().iter().map(factor_report).collect();
    let positivity = Verdict::combine(factors.iter().map(|f| f.positivity));
    let hypoellipticity = Verdict::combine(factors.iter().map(|f| f.hypoellipticity));
    let growth = Verdict::combine((0..inst.nvars()).map(|n| {
        let dependent: Vec<usize> = (0..inst.nfactors()).filter(|&t| inst.ps()[t].depends_on(n)).collect();
        if dependent.is_empty() {
            Verdict::Fail
        } else if dependent.iter().any(|&t| factors[t].hypoellipticity == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::Unknown
        }
    }));
    ConditionReport { positivity, hypoellipticity, growth, factors }
}
