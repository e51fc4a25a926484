//! Black-box tests of the `witt` binary: pinned outputs, exit-code
//! discipline, determinism, and graceful failure on malformed input.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_witt"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).trim().to_string(),
    )
}

#[test]
fn pinned_outputs() {
    let cases: &[(&[&str], &str)] = &[
        (&["sign", "--form", "<1,1>", "--field", "Q"], r#"{"signature":2}"#),
        (&["residue", "--form", "<t>", "--at", "t-0"], r#"{"residue":"<1>"}"#),
        (
            &["bounds", "--betti", "1,0,0,0,0,1", "--dim", "5"],
            r#"{"W0":1,"W1":1,"W2":0,"W3":0}"#,
        ),
        (
            &["witt-eq", "--lhs", "<1,2>", "--rhs", "<2,1>", "--field", "Q"],
            r#"{"equal":true}"#,
        ),
        (
            &["witt-eq", "--lhs", "<t>", "--rhs", "<3*t>", "--field", "RalgT"],
            r#"{"equal":true}"#,
        ),
        (
            &["witt-eq", "--lhs", "<t>", "--rhs", "<3*t>", "--field", "Qt"],
            r#"{"equal":false}"#,
        ),
        (
            &["unramified", "--form", "<t>", "--remove", "t-0"],
            r#"{"unramified":true}"#,
        ),
        (&["beta", "--form", "<t>", "--at", "t-0"], r#"{"beta":2}"#),
        (
            &["snf", "--matrix", "[[2,4],[6,8]]"],
            r#"{"d":[[2,0],[0,4]],"diagonal":[2,4],"u":[[1,0],[3,-1]],"v":[[1,-2],[0,1]]}"#,
        ),
    ];
    for (args, want) in cases {
        let (code, out) = run(args);
        assert_eq!(code, 0, "args {args:?} stdout {out}");
        assert_eq!(&out, want, "args {args:?}");
    }
}

#[test]
fn byte_identical_reruns() {
    let argsets: &[&[&str]] = &[
        &["invariants", "--form", "<1,2,3,-5>"],
        &["total-sign", "--form", "pf(t,t-1)", "--field", "RalgT", "--level", "2"],
        &["lens", "--n", "5", "--p", "7", "--affine"],
        &["ss", "--betti", "1,0,1,0,0,1", "--torsion", "4:7", "--dim", "5", "--affine"],
    ];
    for args in argsets {
        let (c1, o1) = run(args);
        let (c2, o2) = run(args);
        assert_eq!(c1, 0);
        assert_eq!((c1, &o1), (c2, &o2), "args {args:?}");
    }
}

#[test]
fn pretty_is_a_rendering_of_the_same_data() {
    let (c1, plain) = run(&["invariants", "--form", "<1,2,3>"]);
    let (c2, pretty) = run(&["invariants", "--form", "<1,2,3>", "--pretty"]);
    assert_eq!((c1, c2), (0, 0));
    let a: serde_json::Value = serde_json::from_str(&plain).unwrap();
    let b: serde_json::Value = serde_json::from_str(&pretty).unwrap();
    assert_eq!(a, b);
    assert_ne!(plain, pretty);
}

#[test]
fn domain_errors_exit_1_with_error_json() {
    let cases: &[&[&str]] = &[
        &["residue", "--form", "<1,0>", "--at", "t-0"],
        &["sign", "--form", "<t>", "--field", "Q"],
        &["residue", "--form", "<t>", "--at", "p:5"],
        &["thmB", "--remove", "t-0", "--level", "1"],
    ];
    for args in cases {
        let (code, out) = run(args);
        assert_eq!(code, 1, "args {args:?} stdout {out}");
        let v: serde_json::Value = serde_json::from_str(&out).expect("error JSON");
        assert!(v["error"].is_string(), "args {args:?}");
    }
}

#[test]
fn malformed_inputs_never_crash() {
    // fuzz corpus: every invocation must exit 1 or 2 and print an error JSON
    let forms = [
        "", "<", "<1", "<1,", "<1,,2>", "<1,0>", "<1>junk", "pf", "pf(", "pf()",
        "H*", "2*", "*<1>", "<t^>", "<t^-1>", "<1/0>", "<(>", "<x>", "<t t>",
        "<1,2>+", "999999999999999999999999*<1>", "<t^99999999999999999999>",
    ];
    for f in forms {
        let (code, out) = run(&["sign", "--form", f, "--field", "Qt", "--at", "+inf"]);
        assert!(code == 1 || code == 2, "form {f:?} exited {code}: {out}");
        let v: serde_json::Value =
            serde_json::from_str(&out).unwrap_or_else(|_| panic!("bad JSON for form {f:?}: {out}"));
        assert!(v["error"].is_string(), "form {f:?}");
    }
    let places = ["", "t^2-1", "p:", "p:x", "p:-3", "quad:", "quad:t-1", "zzz", "in f", "3"];
    for p in places {
        let (code, out) = run(&["residue", "--form", "<t>", "--at", p]);
        assert!(code == 1 || code == 2, "place {p:?} exited {code}: {out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"].is_string(), "place {p:?}");
    }
    let misc: &[&[&str]] = &[
        &["sign", "--form", "<1>", "--field", "Z"],
        &["sign", "--form", "<1>", "--field", "Q", "--at", "middle(1)"],
        &["ss", "--betti", "1,2", "--dim", "3"],
        &["ss", "--betti", "1,2,3,4", "--dim", "3", "--torsion", "9"],
        &["ss", "--betti", "1,2,3,4", "--dim", "3", "--bidegree", "sideways"],
        &["snf", "--matrix", "nope"],
        &["snf", "--matrix", "[[1,2],[3]]"],
        &["snf", "--matrix", "[]"],
        &["bounds", "--betti", "1,x", "--dim", "1"],
        &["total-sign", "--form", "<1>", "--field", "Q"],
    ];
    for args in misc {
        let (code, out) = run(args);
        assert!(code == 1 || code == 2, "args {args:?} exited {code}: {out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"].is_string(), "args {args:?}");
    }
}

#[test]
fn seed_env_controls_trials() {
    let args = ["thmB", "--remove", "t-0", "--level", "2", "--trials", "2"];
    let out1 = Command::new(env!("CARGO_BIN_EXE_witt"))
        .args(args)
        .env("WITT_SEED", "7")
        .output()
        .unwrap();
    let out2 = Command::new(env!("CARGO_BIN_EXE_witt"))
        .args(args)
        .env("WITT_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(out1.stdout, out2.stdout);
    assert!(out1.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_witt"))
        .args(args)
        .env("WITT_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
