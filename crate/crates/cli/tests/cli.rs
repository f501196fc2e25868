use std::process::{Command, Output};

use serde_json::Value;
use sumcomplex::collapse::{CollapseTrace, Outcome};
use sumcomplex::complex::facets;
use sumcomplex::zn::ZSet;

fn sumcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumcx"))
        .args(args)
        .env_remove("SUMCX_THREADS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn integral_homology_of_rp2() {
    let v = json_of(&sumcx(&[
        "homology", "--n", "7", "--k", "2", "--A", "0,1,3", "--field", "z",
    ]));
    assert_eq!(v["groups"]["H_1"], "Z/2");
    assert_eq!(v["groups"]["H_2"], "0");
    assert_eq!(v["f_vector"], serde_json::json!([7, 21, 15]));
}

#[test]
fn rp2_over_f2_and_q() {
    let v = json_of(&sumcx(&[
        "homology", "--n", "7", "--k", "2", "--A", "0,1,3", "--field", "fp:2",
    ]));
    assert_eq!(
        (v["betti"]["h_1"].as_u64(), v["betti"]["h_2"].as_u64()),
        (Some(1), Some(1))
    );
    let v = json_of(&sumcx(&[
        "homology", "--n", "7", "--k", "2", "--A", "0,1,3",
    ]));
    assert_eq!(
        (v["betti"]["h_1"].as_u64(), v["betti"]["h_2"].as_u64()),
        (Some(0), Some(0))
    );
}

#[test]
fn theorem1_cross_check_passes() {
    let v = json_of(&sumcx(&[
        "theorem1",
        "--n",
        "7",
        "--k",
        "2",
        "--A",
        "0,1,3",
        "--field",
        "qomega",
        "--cross-check",
    ]));
    assert_eq!(v["betti"]["h_1"], 0);
    assert_eq!(v["betti"]["h_2"], 0);
    assert_eq!(v["cross_check"]["agree"], true);

    let v = json_of(&sumcx(&[
        "theorem1",
        "--n",
        "7",
        "--k",
        "2",
        "--A",
        "0,1,3",
        "--field",
        "fpext:2",
        "--cross-check",
    ]));
    assert_eq!(v["betti"]["h_1"], 1);
    assert_eq!(v["kernel_sum"], 3);
}

#[test]
fn collapse_certificate_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.txt");
    let v = json_of(&sumcx(&[
        "collapse",
        "--n",
        "7",
        "--k",
        "2",
        "--A",
        "0,1,3",
        "--trace",
        path.to_str().unwrap(),
    ]));
    assert_eq!(v["verdict"], "NO");
    assert_eq!(v["certificate"]["initial_free"], 3);
    assert_eq!(v["certificate"]["after_steps_free"], 0);

    let x = facets(7, 2, &ZSet::parse(7, "0,1,3").unwrap()).unwrap();
    let trace = CollapseTrace::parse(&x, &std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((trace.steps.len(), trace.outcome), (3, Outcome::Stuck));
    trace.replay(&x).unwrap();
}

#[test]
fn progression_trace_replays_to_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.txt");
    let v = json_of(&sumcx(&[
        "collapse",
        "--n",
        "7",
        "--k",
        "3",
        "--A",
        "0,1,2,3",
        "--trace",
        path.to_str().unwrap(),
    ]));
    assert_eq!(v["verdict"], "YES");
    let x = facets(7, 3, &ZSet::parse(7, "0,1,2,3").unwrap()).unwrap();
    let trace = CollapseTrace::parse(&x, &std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(trace.outcome, Outcome::CollapsedToEmpty);
    let w = trace.replay(&x).unwrap();
    assert!(w.is_empty());
}

#[test]
fn chebotarev_reports() {
    let v = json_of(&sumcx(&["chebotarev", "--n", "5"]));
    assert_eq!(v["singular_count"], 0);
    assert_eq!(v["checked"], 252);
    let v = json_of(&sumcx(&["chebotarev", "--n", "6"]));
    assert!(v["singular_count"].as_u64().unwrap() > 0);
}

#[test]
fn survey_rows_and_columns() {
    let out = sumcx(&[
        "survey", "--n", "7", "--k", "2", "--p", "2", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,k,A,canonical_A,is_ap,h_km1_q,h_km1_fp,torsion,collapsible")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 35);
    assert_eq!(rows[1], r#"7,2,"0,1,3","0,1,3",false,0,1,2,NO"#);
    // exactly the progressions collapse
    for r in &rows {
        assert_eq!(r.contains(",true,"), r.ends_with(",YES"), "{r}");
    }

    let out = sumcx(&[
        "survey",
        "--n",
        "7",
        "--k",
        "2",
        "--classes",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2);
}

#[test]
fn output_is_deterministic() {
    let args = |t: &'static str| ["survey", "--n", "7", "--k", "3", "--p", "3", "--threads", t];
    let one = sumcx(&args("1"));
    let four = sumcx(&args("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let again = sumcx(&args("4"));
    assert_eq!(four.stdout, again.stdout);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = sumcx(&[
        "homology",
        "--n",
        "5",
        "--k",
        "1",
        "--A",
        "0,1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "homology");
}

#[test]
fn invalid_input_exits_with_one() {
    for args in [
        &["homology", "--n", "8", "--k", "1", "--A", "0,1"][..],
        &["homology", "--n", "7", "--k", "2", "--A", "0,1"],
        &["homology", "--n", "7", "--k", "2", "--A", "0,1,x"],
        &[
            "homology", "--n", "7", "--k", "2", "--A", "0,1,3", "--field", "fp:7",
        ],
        &[
            "homology", "--n", "7", "--k", "2", "--A", "0,1,3", "--field", "fp:4",
        ],
        &[
            "theorem1", "--n", "7", "--k", "2", "--A", "0,1,3", "--field", "fp:2",
        ],
        &[
            "theorem1", "--n", "7", "--k", "2", "--A", "0,1,3", "--field", "z",
        ],
        &["survey", "--n", "9", "--k", "2"],
        &["chebotarev", "--n", "1"],
        &["homology", "--n", "7"],
        &["frobnicate"],
        &["survey", "--n", "7", "--k", "2", "--threads", "0"],
    ] {
        let out = sumcx(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_with_zero() {
    assert_eq!(sumcx(&["--help"]).status.code(), Some(0));
    assert_eq!(sumcx(&["--version"]).status.code(), Some(0));
}
