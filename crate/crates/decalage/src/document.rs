//! JSON problem documents.
//!
//! ```json
//! {
//!   "nvars": 2, "nfactors": 1,
//!   "twist": {"mode": "exact", "order": 2, "exponents": [1, 1]},
//!   "Q": [{"coef": "1", "exps": [0, 0]}],
//!   "Ps": [[{"coef": "1", "exps": [1, 0]}, {"coef": "1", "exps": [0, 1]}]],
//!   "queries": [[0], [1], {"max": [4]}]
//! }
//! ```

use serde::{Deserialize, Serialize};

use decalage_core::rational;
use decalage_core::{CyclotomicField, SparsePolynomial, TwistVector, ZetaInstance};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub nvars: usize,
    pub nfactors: usize,
    pub twist: TwistSpec,
    #[serde(rename = "Q")]
    pub q: Vec<TermSpec>,
    #[serde(rename = "Ps")]
    pub ps: Vec<Vec<TermSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<u32>>,
    #[serde(default)]
    pub queries: Vec<QuerySpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum TwistSpec {
    Exact { order: u64, exponents: Vec<i64> },
    Approx { angles: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coef: String,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuerySpec {
    Tuple(Vec<u32>),
    Range { max: Vec<u32> },
}

impl ProblemDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Document for an existing instance; every rational is written as `p/q`.
    pub fn from_instance(inst: &ZetaInstance, queries: Vec<QuerySpec>) -> Self {
        let terms = |p: &SparsePolynomial| -> Vec<TermSpec> {
            p.terms()
                .rev()
                .map(|(alpha, c)| TermSpec { coef: rational::canonical(c), exps: alpha.exponents().to_vec() })
                .collect()
        };
        let twist = match inst.mus() {
            TwistVector::Exact { field, exponents } => TwistSpec::Exact { order: field.order(), exponents: exponents.clone() },
            TwistVector::Approx { angles } => TwistSpec::Approx { angles: angles.clone() },
        };
        ProblemDocument {
            nvars: inst.nvars(),
            nfactors: inst.nfactors(),
            twist,
            q: terms(inst.q()),
            ps: inst.ps().iter().map(terms).collect(),
            shift: None,
            queries,
        }
    }
}

/// A validated document.
#[derive(Clone, Debug)]
pub struct Problem {
    pub instance: ZetaInstance,
    pub shift: Option<Vec<u32>>,
    /// Explicit tuples and expanded ranges, in document order.
    pub queries: Vec<Vec<u32>>,
}

fn invalid(msg: String) -> CliError {
    CliError::Invalid(decalage_core::Error::InvalidInstance(msg))
}

fn polynomial(nvars: usize, terms: &[TermSpec], what: &str) -> Result<SparsePolynomial, CliError> {
    let mut parsed = Vec::with_capacity(terms.len());
    for term in terms {
        if term.exps.len() != nvars {
            return Err(invalid(format!("{what}: exponent list {:?} does not have length {nvars}", term.exps)));
        }
        let coef = rational::parse(&term.coef).ok_or_else(|| CliError::Parse(format!("{what}: bad coefficient {:?}", term.coef)))?;
        parsed.push((term.exps.clone(), coef));
    }
    SparsePolynomial::from_terms(nvars, parsed).map_err(CliError::Invalid)
}

/// All `k` with `0 <= k_t <= max_t`, lexicographic.
pub fn expand_range(max: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; max.len()];
    loop {
        out.push(cur.clone());
        let mut i = max.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < max[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

pub fn check_tuple(k: &[u32], nfactors: usize) -> Result<(), CliError> {
    if k.len() != nfactors {
        return Err(invalid(format!("k-tuple {k:?} does not have length {nfactors}")));
    }
    Ok(())
}

impl Problem {
    pub fn from_document(doc: &ProblemDocument) -> Result<Self, CliError> {
        let n = doc.nvars;
        let mus = match &doc.twist {
            TwistSpec::Exact { order, exponents } => {
                if exponents.len() != n {
                    return Err(invalid(format!("twist has {} exponents for {n} variables", exponents.len())));
                }
                let field = CyclotomicField::new(*order).map_err(CliError::Invalid)?;
                TwistVector::exact(field, exponents.clone()).map_err(CliError::Invalid)?
            }
            TwistSpec::Approx { angles } => {
                if angles.len() != n {
                    return Err(invalid(format!("twist has {} angles for {n} variables", angles.len())));
                }
                TwistVector::approx(angles.clone()).map_err(CliError::Invalid)?
            }
        };
        if doc.ps.len() != doc.nfactors {
            return Err(invalid(format!("nfactors is {} but {} factors are given", doc.nfactors, doc.ps.len())));
        }
        let q = polynomial(n, &doc.q, "Q")?;
        let ps = doc
            .ps
            .iter()
            .enumerate()
            .map(|(t, terms)| polynomial(n, terms, &format!("P{}", t + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        let instance = ZetaInstance::new(q, ps, mus).map_err(CliError::Invalid)?;
        if let Some(a) = &doc.shift {
            if a.len() != n {
                return Err(invalid(format!("shift {a:?} does not have length {n}")));
            }
        }
        let mut queries = Vec::new();
        for query in &doc.queries {
            match query {
                QuerySpec::Tuple(k) => {
                    check_tuple(k, doc.nfactors)?;
                    queries.push(k.clone());
                }
                QuerySpec::Range { max } => {
                    check_tuple(max, doc.nfactors)?;
                    queries.extend(expand_range(max));
                }
            }
        }
        Ok(Problem { instance, shift: doc.shift.clone(), queries })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Self::from_document(&ProblemDocument::parse(text)?)
    }
}
