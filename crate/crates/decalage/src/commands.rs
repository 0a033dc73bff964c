use std::collections::BTreeSet;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use decalage_core::abel::{extrapolated_estimate, AbelSummer};
use decalage_core::engine::{choose_shift, shift_is_valid, validate_conditions, ConditionReport, Verdict};
use decalage_core::oracle::closed_value_cached;
use decalage_core::twist::NegaPolylogCache;
use decalage_core::{special_value, Options, Scalar, ShiftPolicy, TwistVector, ValueCache, ZetaInstance};

use crate::cache;
use crate::cli::{Cli, Command, GlobalOptions, Method, Mode};
use crate::document::{check_tuple, expand_range, Problem};
use crate::error::CliError;
use crate::render::{self, ValueRecord};

/// Relative tolerance for agreement of approximate values.
pub const APPROX_TOLERANCE: f64 = 1e-9;
/// Absolute tolerance for the extrapolated Abel sum.
pub const ABEL_TOLERANCE: f64 = 1e-6;
/// Random shifts tried per query by `verify`.
pub const RANDOM_SHIFTS: usize = 10;

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("write failed: {e}"))
}

fn read_document(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<String, CliError> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Io(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut text = String::new();
            stdin.read_to_string(&mut text).map_err(|e| CliError::Io(format!("cannot read standard input: {e}")))?;
            Ok(text)
        }
    }
}

fn values_agree(a: &Scalar, b: &Scalar) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
        _ => {
            let (x, y) = (a.embed(), b.embed());
            (x - y).norm() <= APPROX_TOLERANCE * x.norm().max(1.0)
        }
    }
}

struct Session<'a> {
    opts: &'a GlobalOptions,
    instance: ZetaInstance,
    policy: ShiftPolicy,
    queries: Vec<Vec<u32>>,
    cache: ValueCache,
    polylogs: NegaPolylogCache,
}

impl<'a> Session<'a> {
    fn open(opts: &'a GlobalOptions, text: &str) -> Result<Self, CliError> {
        let problem = Problem::parse(text)?;
        let instance = match (opts.mode, problem.instance.mus().is_exact()) {
            (Some(Mode::Approx), true) => problem.instance.to_approx(),
            (Some(Mode::Exact), false) => {
                return Err(CliError::Usage("an approximate twist cannot be evaluated in exact mode".into()))
            }
            _ => problem.instance,
        };
        let policy = match opts.shift.clone().or(problem.shift) {
            Some(a) => {
                if a.len() != instance.nvars() {
                    return Err(CliError::Usage(format!("shift {a:?} does not have length {}", instance.nvars())));
                }
                ShiftPolicy::Explicit(a)
            }
            None => ShiftPolicy::Default,
        };
        let cache = match &opts.cache {
            Some(path) => cache::load(path)?,
            None => ValueCache::new(),
        };
        Ok(Session { opts, instance, policy, queries: problem.queries, cache, polylogs: NegaPolylogCache::new() })
    }

    fn close(&self) -> Result<(), CliError> {
        match &self.opts.cache {
            Some(path) => cache::save(path, &self.cache),
            None => Ok(()),
        }
    }

    fn fault(&self, v: Scalar) -> Result<Scalar, CliError> {
        if self.opts.inject_fault {
            Ok(v.checked_add(&self.instance.mus().one())?)
        } else {
            Ok(v)
        }
    }

    fn recurrence(&mut self, k: &[u32]) -> Result<Scalar, CliError> {
        let options = Options { shift: self.policy.clone(), ..Options::default() };
        let v = special_value(&self.instance, k, &options, &mut self.cache)?;
        self.fault(v)
    }

    fn recurrence_with(&self, k: &[u32], a: &[u32], cache: &mut ValueCache) -> Result<Scalar, CliError> {
        let options = Options { shift: ShiftPolicy::Explicit(a.to_vec()), ..Options::default() };
        let v = special_value(&self.instance, k, &options, cache)?;
        self.fault(v)
    }

    fn closed(&mut self, k: &[u32]) -> Result<Scalar, CliError> {
        let inst = &self.instance;
        Ok(closed_value_cached(inst.q(), inst.ps(), k, inst.mus(), &mut self.polylogs)?)
    }

    fn record(&mut self, k: &[u32]) -> Result<ValueRecord, CliError> {
        check_tuple(k, self.instance.nfactors())?;
        Ok(match self.opts.method {
            Method::Recurrence => ValueRecord { k: k.to_vec(), value: self.recurrence(k)?, methods: vec!["recurrence"], agree: None },
            Method::Closed => ValueRecord { k: k.to_vec(), value: self.closed(k)?, methods: vec!["closed"], agree: None },
            Method::Both => {
                let rec = self.recurrence(k)?;
                let closed = self.closed(k)?;
                let agree = values_agree(&rec, &closed);
                ValueRecord { k: k.to_vec(), value: rec, methods: vec!["recurrence", "closed"], agree: Some(agree) }
            }
        })
    }

    /// Query list from `--max`, or else from the document.
    fn targets(&self) -> Result<Vec<Vec<u32>>, CliError> {
        if let Some(max) = &self.opts.max {
            check_tuple(max, self.instance.nfactors())?;
            return Ok(expand_range(max));
        }
        if self.queries.is_empty() {
            return Err(CliError::Usage("no queries in the document and no --max given".into()));
        }
        Ok(self.queries.clone())
    }

    fn records(&mut self, ks: &[Vec<u32>]) -> Result<Vec<ValueRecord>, CliError> {
        ks.iter().map(|k| self.record(k)).collect()
    }
}

fn first_disagreement(records: &[ValueRecord]) -> Option<&ValueRecord> {
    records.iter().find(|r| r.agree == Some(false))
}

fn disagreement(r: &ValueRecord) -> CliError {
    CliError::Disagreement(format!("recurrence and closed form differ at k={}", render::tuple(&r.k)))
}

fn cmd_value(opts: &GlobalOptions, text: &str, k: &Option<Vec<u32>>, out: &mut dyn Write) -> Result<(), CliError> {
    let mut s = Session::open(opts, text)?;
    let ks = match k {
        Some(k) => vec![k.clone()],
        None if !s.queries.is_empty() => s.queries.clone(),
        None => return Err(CliError::Usage("give --k or list queries in the document".into())),
    };
    let records = s.records(&ks);
    s.close()?;
    let records = records?;
    for r in &records {
        writeln!(out, "{}", render::machine_line(r)).map_err(io_err)?;
    }
    first_disagreement(&records).map_or(Ok(()), |r| Err(disagreement(r)))
}

fn cmd_table(opts: &GlobalOptions, text: &str, machine: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let mut s = Session::open(opts, text)?;
    let ks = s.targets()?;
    let records = s.records(&ks);
    s.close()?;
    let records = records?;
    if machine {
        for r in &records {
            writeln!(out, "{}", render::machine_line(r)).map_err(io_err)?;
        }
    } else {
        writeln!(out, "{}", render::aligned_table(&records)).map_err(io_err)?;
    }
    first_disagreement(&records).map_or(Ok(()), |r| Err(disagreement(r)))
}

pub fn condition_report(report: &ConditionReport) -> String {
    let mut rules: Vec<String> = Vec::new();
    for f in &report.factors {
        if let Some(rule) = f.rule {
            let name = rule.to_string();
            if !rules.contains(&name) {
                rules.push(name);
            }
        }
    }
    let hypo = if report.hypoellipticity == Verdict::Pass {
        format!("{} ({})", report.hypoellipticity, rules.join(", "))
    } else {
        report.hypoellipticity.to_string()
    };
    let mut lines = vec![
        format!("positivity: {}", report.positivity),
        format!("hypoellipticity: {hypo}"),
        format!("growth: {}", report.growth),
    ];
    for (t, f) in report.factors.iter().enumerate() {
        let rule = f.rule.map_or("none".to_string(), |r| r.to_string());
        lines.push(format!("P{}: positivity={} hypoellipticity={} rule={rule}", t + 1, f.positivity, f.hypoellipticity));
    }
    lines.join("\n")
}

fn cmd_check(opts: &GlobalOptions, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let s = Session::open(opts, text)?;
    writeln!(out, "{}", condition_report(&validate_conditions(&s.instance))).map_err(io_err)
}

/// Default shift, all ones when valid, then random valid shifts with
/// entries at most 3, without repeats.
fn verification_shifts(s: &Session, seed: u64) -> Result<Vec<Vec<u32>>, CliError> {
    let n = s.instance.nvars();
    let mus: &TwistVector = s.instance.mus();
    let mut seen = BTreeSet::new();
    let mut shifts = Vec::new();
    let mut push = |a: Vec<u32>, shifts: &mut Vec<Vec<u32>>| {
        if seen.insert(a.clone()) {
            shifts.push(a);
        }
    };
    push(choose_shift(mus, &s.policy)?.into_vec(), &mut shifts);
    let ones = vec![1; n];
    if shift_is_valid(mus, &ones)? {
        push(ones, &mut shifts);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    for _ in 0..1000 {
        if found == RANDOM_SHIFTS {
            break;
        }
        let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        if shift_is_valid(mus, &a)? {
            found += 1;
            push(a, &mut shifts);
        }
    }
    Ok(shifts)
}

fn cmd_verify(opts: &GlobalOptions, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let mut s = Session::open(opts, text)?;
    let report = validate_conditions(&s.instance);
    if report.has_failure() {
        writeln!(out, "{}", condition_report(&report)).map_err(io_err)?;
        return Err(CliError::Refused("condition (#) fails for this document".into()));
    }
    let ks = s.targets()?;
    let shifts = verification_shifts(&s, opts.seed)?;
    let shift_text: Vec<String> = shifts.iter().map(|a| render::tuple(a)).collect();
    writeln!(out, "shifts: {}", shift_text.join(" ")).map_err(io_err)?;
    let mut shift_caches: Vec<ValueCache> = shifts.iter().map(|_| ValueCache::new()).collect();
    let mut summer = AbelSummer::new();
    let result = (|| {
        for k in &ks {
            check_tuple(k, s.instance.nfactors())?;
            let rec = s.recurrence(k)?;
            let closed = s.closed(k)?;
            if !values_agree(&rec, &closed) {
                writeln!(out, "counterexample: k={} recurrence={} closed={}", render::tuple(k), render::exact_coords(&rec), render::exact_coords(&closed))
                    .map_err(io_err)?;
                return Err(CliError::Disagreement(format!("recurrence and closed form differ at k={}", render::tuple(k))));
            }
            for (a, cache) in shifts.iter().zip(shift_caches.iter_mut()) {
                let other = s.recurrence_with(k, a, cache)?;
                if !values_agree(&rec, &other) {
                    writeln!(out, "counterexample: k={} shift={} value={} default={}", render::tuple(k), render::tuple(a), render::exact_coords(&other), render::exact_coords(&rec))
                        .map_err(io_err)?;
                    return Err(CliError::Disagreement(format!("shift {} changes the value at k={}", render::tuple(a), render::tuple(k))));
                }
            }
            let abel = if s.instance.nvars() <= 2 {
                let estimate = extrapolated_estimate(&mut summer, &s.instance, k, 8..=12)?;
                let residual = (estimate - rec.embed()).norm();
                if residual > ABEL_TOLERANCE {
                    writeln!(out, "counterexample: k={} value={} abel={}", render::tuple(k), render::exact_coords(&rec), render::decimal(estimate)).map_err(io_err)?;
                    return Err(CliError::Disagreement(format!("Abel sum differs by {residual:e} at k={}", render::tuple(k))));
                }
                format!("{residual:.3e}")
            } else {
                "skipped".to_string()
            };
            writeln!(
                out,
                "k={} recurrence={} closed={} shifts={} abel_residual={abel} ok",
                render::tuple(k),
                render::exact_coords(&rec),
                render::exact_coords(&closed),
                shifts.len()
            )
            .map_err(io_err)?;
        }
        writeln!(out, "verified {} values", ks.len()).map_err(io_err)
    })();
    s.close()?;
    result
}

/// Runs one command, writing results to `out`.
pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<(), CliError> {
    let opts = &cli.options;
    match &cli.command {
        Command::Value { document, k } => cmd_value(opts, &read_document(document, stdin)?, k, out),
        Command::Table { document, machine } => cmd_table(opts, &read_document(document, stdin)?, *machine, out),
        Command::Verify { document } => cmd_verify(opts, &read_document(document, stdin)?, out),
        Command::Check { document } => cmd_check(opts, &read_document(document, stdin)?, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    const ONE_VAR: &str = r#"{"nvars": 1, "nfactors": 1,
        "twist": {"mode": "exact", "order": 2, "exponents": [1]},
        "Q": [{"coef": "1", "exps": [0]}], "Ps": [[{"coef": "1", "exps": [1]}]]}"#;

    fn run_args(args: &[&str], doc: &str) -> (Result<(), CliError>, String) {
        let cli = Cli::try_parse_from(args).unwrap();
        let mut out = Vec::new();
        let res = run(&cli, &mut doc.as_bytes(), &mut out);
        (res, String::from_utf8(out).unwrap())
    }

    #[test]
    fn value_both_methods() {
        let (res, out) = run_args(&["decalage", "value", "--k", "1", "--method", "both"], ONE_VAR);
        res.unwrap();
        assert_eq!(out.trim(), "k=(1) exact=[-1/4] approx=-0.25,0 method=recurrence,closed agree=true");
    }

    #[test]
    fn closed_two_variables() {
        let doc = r#"{"nvars": 2, "nfactors": 1,
            "twist": {"mode": "exact", "order": 2, "exponents": [1, 1]},
            "Q": [{"coef": "1", "exps": [0, 0]}],
            "Ps": [[{"coef": "1", "exps": [1, 0]}, {"coef": "1", "exps": [0, 1]}]]}"#;
        let (res, out) = run_args(&["decalage", "value", "--k", "0", "--method", "closed"], doc);
        res.unwrap();
        assert!(out.starts_with("k=(0) exact=[1/4] "));
    }

    #[test]
    fn table_rows() {
        let (res, out) = run_args(&["decalage", "table", "--max", "3", "--machine"], ONE_VAR);
        res.unwrap();
        let exact: Vec<&str> = out.lines().map(|l| l.split(' ').nth(1).unwrap()).collect();
        assert_eq!(exact, ["exact=[-1/2]", "exact=[-1/4]", "exact=[0]", "exact=[1/8]"]);
        let (res, out) = run_args(&["decalage", "table", "--max", "0", "--machine"], ONE_VAR);
        res.unwrap();
        assert_eq!(out.lines().count(), 1);
        let (res, _) = run_args(&["decalage", "table"], ONE_VAR);
        assert_eq!(res.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn fault_flag_causes_disagreement() {
        let (res, _) = run_args(&["decalage", "value", "--k", "2", "--method", "both", "--inject-fault"], ONE_VAR);
        assert_eq!(res.unwrap_err().exit_code(), 3);
    }

    #[test]
    fn approx_mode() {
        let (res, out) = run_args(&["decalage", "value", "--k", "1", "--mode", "approx", "--method", "both"], ONE_VAR);
        res.unwrap();
        assert!(out.contains("exact=null") && out.contains("agree=true"), "{out}");
    }

    #[test]
    fn verify_refuses_on_growth_failure() {
        let doc = r#"{"nvars": 2, "nfactors": 1,
            "twist": {"mode": "exact", "order": 2, "exponents": [1, 1]},
            "Q": [{"coef": "1", "exps": [0, 0]}], "Ps": [[{"coef": "1", "exps": [1, 0]}]],
            "queries": [[1]]}"#;
        let (res, out) = run_args(&["decalage", "verify"], doc);
        assert_eq!(res.unwrap_err().exit_code(), 2);
        assert!(out.contains("growth: fail"));
    }

    #[test]
    fn check_reports() {
        let doc = r#"{"nvars": 2, "nfactors": 1,
            "twist": {"mode": "exact", "order": 3, "exponents": [1, 1]},
            "Q": [{"coef": "1", "exps": [0, 0]}],
            "Ps": [[{"coef": "1", "exps": [2, 0]}, {"coef": "-2", "exps": [1, 1]}, {"coef": "1", "exps": [0, 2]},
                    {"coef": "1", "exps": [1, 0]}, {"coef": "1", "exps": [0, 1]}, {"coef": "1", "exps": [0, 0]}]]}"#;
        let (res, out) = run_args(&["decalage", "check"], doc);
        res.unwrap();
        assert!(out.contains("hypoellipticity: pass (structured quadratic)"), "{out}");
        let unknown = doc.replace(r#"{"coef": "-2", "exps": [1, 1]}, {"coef": "1", "exps": [0, 2]},"#, "").replace(
            r#"{"coef": "1", "exps": [1, 0]}, {"coef": "1", "exps": [0, 1]}, {"coef": "1", "exps": [0, 0]}"#,
            r#"{"coef": "-1", "exps": [0, 1]}"#,
        );
        let (res, out) = run_args(&["decalage", "check"], &unknown);
        res.unwrap();
        assert!(out.contains("hypoellipticity: unknown"), "{out}");
    }
}
