use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hopf-comod")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn every_subcommand_runs() {
    let cases: &[&[&str]] = &[
        &["check-algebroid", "--fixture", "F2"],
        &["check-comodule", "--fixture", "F3"],
        &["tensor", "--fixture", "F1", "--input", "M=regular", "--input", "N=mixed"],
        &["chom", "--fixture", "F2", "--input", "M=spread", "--input", "N=line1"],
        &["adjunction", "--fixture", "F3", "--input", "P=odd", "--input", "M=regular", "--input", "N=A_mod_x2"],
        &["dualizable", "--fixture", "F1", "--input", "M=mixed"],
        &["invariants", "--fixture", "F3", "--input", "N=A_mod_x2"],
        &["resolution-witness", "--fixture", "F1", "--input", "M=mixed"],
        &["cobar-ext", "--fixture", "F1", "--input", "M=mixed", "--depth", "2"],
        &["complex-homology", "--fixture", "F2", "--input", "C=shift_pair"],
        &["fixtures"],
        &["oracle-compare", "--fixture", "F2", "--count", "2"],
    ];
    for args in cases {
        let (code, out) = run(args);
        assert_eq!(code, 0, "{args:?}\n{out}");
        assert!(out.starts_with(&format!("hopf-comod {}\nseed: 0\nstatus: pass\n", args[0])), "{out}");
        let mut json_args = args.to_vec();
        json_args.extend(["--format", "json"]);
        let (code, out) = run(&json_args);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], args[0]);
        assert_eq!(v["status"], "pass");
    }
}

#[test]
fn reported_values() {
    let (_, out) = run(&["cobar-ext", "--fixture", "F1", "--input", "M=trivial", "--depth", "4"]);
    assert!(out.contains("ext_dims: [1,1,1,1,1]\n"), "{out}");
    let (_, out) = run(&["invariants", "--fixture", "F3", "--input", "N=A_mod_x2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dim"], 1);
    let (_, out) = run(&["chom", "--fixture", "F3", "--input", "N=A_mod_x2"]);
    assert!(out.contains("kdim: 2\n"), "{out}");
    let (_, out) = run(&["chom", "--fixture", "F2", "--input", "M=line1", "--input", "N=line2"]);
    assert!(out.contains("backend: graded\n"), "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["tensor", "--fixture", "F4"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["tensor", "--fixture", "F1", "--input", "M=nothing"]).0, 2);
    assert_eq!(run(&["tensor", "--fixture", "F1", "--input", "/no/such/file.hopf"]).0, 2);
    assert_eq!(run(&["complex-homology", "--fixture", "F1"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn seed_is_recorded_and_output_is_stable() {
    let a = run(&["oracle-compare", "--fixture", "F2", "--count", "2", "--seed", "99", "--format", "json"]);
    let b = run(&["oracle-compare", "--fixture", "F2", "--count", "2", "--seed", "99", "--format", "json"]);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["seed"], 99);
}
