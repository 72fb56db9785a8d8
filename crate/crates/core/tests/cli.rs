use brauerlab::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("brauerlab").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn rank_and_tl() {
    assert_eq!(json(&["--json", "rank", "E6"])["rank"], 1440585);
    assert_eq!(json(&["--json", "rank", "E6", "--tl"])["tl_rank"], 662);
    assert_eq!(json(&["--json", "rank", "A3"])["rank"], 105);
}

#[test]
fn reduce_word() {
    let v = json(&["--json", "reduce", "E6", "e2 e3 e3 e6"]);
    assert_eq!(v["delta"], 1);
    assert_eq!(v["tokens"], serde_json::json!(["e2", "e3", "e6"]));
}

#[test]
fn decompose_then_multiply() {
    let a = json(&["--json", "decompose", "E6", "e6 r5 e6"]);
    let b = json(&["--json", "decompose", "E6", "e4 e6"]);
    let both = json(&["--json", "decompose", "E6", "e6 r5 e6 e4 e6"]);
    let prod = json(&["--json", "multiply", "E6", &a.to_string(), &b.to_string()]);
    assert_eq!(prod, both);
}

#[test]
fn canonical_word_text() {
    let (code, set, _) = run(&["action", "E6", "e4 r2 r5 e3 e4 e5 e1 e3 e4 e6"]);
    assert_eq!(code, 0);
    let set = set.trim().trim_start_matches('{').trim_end_matches('}').to_string();
    assert_eq!(set, "a4; 1,1,2,2,1,0");
    let (code, out, _) = run(&["ab", "E6", &set]);
    assert_eq!(code, 0);
    assert!(out.contains("d^-2 e4 r2 r5 e3 e4 e5 e1 e3 e4 e6"), "{out}");
}

#[test]
fn tables_pass() {
    let (code, out, _) = run(&["--no-cache", "tables", "E6"]);
    assert_eq!(code, 0);
    assert!(!out.contains("FAIL"));
}

#[test]
fn small_fuzz_runs() {
    let caps = ["--caps-extra-length", "2", "--caps-visited", "2000", "--seed", "3"];
    let with = |rest: &[&str]| run(&[&caps[..], rest].concat()).0;
    assert_eq!(with(&["--threads", "2", "fuzz", "A4", "--count", "200"]), 0);
    assert_eq!(with(&["fuzz", "E6", "--count", "50", "--max-len", "10"]), 0);
}

#[test]
fn errors_exit_with_one() {
    assert_eq!(run(&["reduce", "E6", "e9"]).0, 1);
    assert_eq!(run(&["rank", "Q3"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}
