use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use proptest::prelude::*;

use decalage::document::{QuerySpec, TermSpec, TwistSpec};
use decalage::{Problem, ProblemDocument};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_decalage"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(text) = stdin {
        pipe.write_all(text.as_bytes()).unwrap();
    }
    drop(pipe);
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn alternating_values() {
    let doc = example("alternating.json");
    let (code, out) = run(&["value", doc.to_str().unwrap(), "--k", "3", "--method", "both", "--mode", "exact"], None);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "k=(3) exact=[1/8] approx=0.125,0 method=recurrence,closed agree=true");
}

#[test]
fn document_on_stdin() {
    let text = std::fs::read_to_string(example("alternating.json")).unwrap();
    let (code, out) = run(&["value", "--k", "1"], Some(&text));
    assert_eq!(code, 0);
    assert!(out.contains("exact=[-1/4]"), "{out}");
}

#[test]
fn cache_file_is_reused() {
    let dir = std::env::temp_dir().join(format!("decalage-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cache = dir.join("cache.json");
    let _ = std::fs::remove_file(&cache);
    let doc = example("two_variables.json");
    let args = ["table", doc.to_str().unwrap(), "--machine", "--cache", cache.to_str().unwrap()];
    let cold = run(&args, None);
    assert_eq!(cold.0, 0);
    let stored = std::fs::read_to_string(&cache).unwrap();
    assert!(stored.contains("r=3:["));
    let warm = run(&args, None);
    assert_eq!(cold, warm);
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), stored);

    std::fs::write(&cache, "{\"x\": \"garbage\"}").unwrap();
    assert_eq!(run(&args, None).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn approx_mode_matches_exact() {
    let doc = example("two_variables.json");
    let d = doc.to_str().unwrap();
    let exact = run(&["table", d, "--machine", "--mode", "exact"], None);
    let approx = run(&["table", d, "--machine", "--mode", "approx"], None);
    assert_eq!((exact.0, approx.0), (0, 0));
    assert_eq!(exact.1.lines().count(), 9);
    assert_eq!(approx.1.lines().count(), 9);
    for (e, a) in exact.1.lines().zip(approx.1.lines()) {
        let field = |line: &str| -> (f64, f64) {
            let v = line.split_whitespace().find_map(|w| w.strip_prefix("approx=")).unwrap();
            let (re, im) = v.split_once(',').unwrap();
            (re.parse().unwrap(), im.parse().unwrap())
        };
        let (x, y) = (field(e), field(a));
        let scale = 1.0 + x.0.abs() + x.1.abs();
        assert!((x.0 - y.0).abs() < 1e-9 * scale && (x.1 - y.1).abs() < 1e-9 * scale, "{e} vs {a}");
        assert!(a.contains("exact=null"));
    }
}

#[test]
fn check_reports_each_condition() {
    let doc = example("structured_quadratic.json");
    let (code, out) = run(&["check", doc.to_str().unwrap()], None);
    assert_eq!(code, 0);
    assert!(out.contains("positivity: pass"), "{out}");
    assert!(out.contains("hypoellipticity: pass (structured quadratic)"), "{out}");
    assert!(out.contains("growth: pass"), "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["value", "--k", "1"], Some("{not json")).0, 2);
    assert_eq!(run(&["frobnicate"], None).0, 2);
    let doc = example("alternating.json");
    assert_eq!(run(&["table", doc.to_str().unwrap(), "--max", "1,1"], None).0, 2);
}

fn term(n: usize) -> impl Strategy<Value = TermSpec> {
    (-20i64..=20, 1i64..=9, prop::collection::vec(0u32..=3, n))
        .prop_filter("nonzero", |(p, _, _)| *p != 0)
        .prop_map(|(p, q, exps)| TermSpec { coef: format!("{p}/{q}"), exps })
}

fn document() -> impl Strategy<Value = ProblemDocument> {
    (1usize..=3, 1usize..=2).prop_flat_map(|(n, t)| {
        let twist = prop_oneof![
            (3u64..=12).prop_flat_map(move |r| {
                prop::collection::vec(1i64..r as i64, n).prop_map(move |exponents| TwistSpec::Exact { order: r, exponents })
            }),
            prop::collection::vec(0.1f64..6.1, n).prop_map(|angles| TwistSpec::Approx { angles }),
        ];
        let queries = prop_oneof![
            prop::collection::vec(0u32..=4, t).prop_map(QuerySpec::Tuple),
            prop::collection::vec(0u32..=4, t).prop_map(|max| QuerySpec::Range { max }),
        ];
        (
            twist,
            prop::collection::vec(term(n), 1..=4),
            prop::collection::vec(prop::collection::vec(term(n), 1..=4), t),
            prop::option::of(prop::collection::vec(1u32..=3, n)),
            prop::collection::vec(queries, 0..=3),
        )
            .prop_map(move |(twist, q, ps, shift, queries)| ProblemDocument { nvars: n, nfactors: t, twist, q, ps, shift, queries })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn document_round_trip(doc in document()) {
        let text = doc.to_json();
        prop_assert_eq!(ProblemDocument::parse(&text).unwrap(), doc.clone());
        // Parsed problems survive the trip through their canonical document.
        if let Ok(problem) = Problem::from_document(&doc) {
            let again = ProblemDocument::from_instance(&problem.instance, vec![]);
            let reparsed = Problem::from_document(&ProblemDocument::parse(&again.to_json()).unwrap()).unwrap();
            prop_assert_eq!(reparsed.instance.canonical_key(), problem.instance.canonical_key());
        }
    }
}
