use std::process::{Command, Output};

use serde_json::Value;

fn bigramsey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bigramsey"))
        .args(args)
        .env_remove("RAMSEY_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bigramsey(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn structured(args: &[&str]) -> Value {
    let mut all = vec!["--format", "structured"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).expect("valid JSON")
}

#[test]
fn degree_examples() {
    assert_eq!(stdout(&["degree", "w^2", "-n", "2"]), "4\n");
    assert_eq!(stdout(&["degree", "w", "-n", "5"]), "1\n");
    assert_eq!(stdout(&["degree", "w^2+w*8", "-n", "2"]), "92\n");
    assert_eq!(stdout(&["degree", "zeta", "-n", "3"]), "8\n");
    assert_eq!(stdout(&["degree", "w^5", "-n", "5"]), "14372713082763\n");
}

#[test]
fn degree_errors() {
    assert_eq!(
        bigramsey(&["degree", "w^", "-n", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bigramsey(&["degree", "w^2", "-n", "-1"]).status.code(),
        Some(2)
    );
    let out = bigramsey(&["degree", "w^2 + w^2", "-n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("more than once"));
}

#[test]
fn table_examples() {
    let text = stdout(&["table", "--max-n", "5", "--max-d", "5"]);
    assert!(text.contains("d=5: 1 1 175 222244 1081112575 14372713082763\n"));
    assert_eq!(
        stdout(&["table", "--max-n", "0", "--max-d", "3"]),
        "d=0: 1\nd=1: 1\nd=2: 1\nd=3: 1\n"
    );
    assert_eq!(
        stdout(&["table", "--max-n", "2", "--max-d", "0"]),
        "d=0: 1 1 0\n"
    );
    let grid = structured(&["table", "--max-n", "5", "--max-d", "5"]);
    assert_eq!(grid[4][5].to_string(), "7244337796");
    assert_eq!(grid[5][5].to_string(), "14372713082763");
}

#[test]
fn rules_examples() {
    let text = stdout(&["rules", "w^2", "-n", "2"]);
    assert_eq!(text.lines().count(), 5);
    assert!(text.ends_with("count: 4\n"));
    let three = stdout(&["rules", "w^2", "-n", "2", "--size", "3"]);
    assert_eq!(
        three,
        "c: 2,2; b: 0,0; a[1,1] = a[2,1] < a[1,0] < a[2,0]\ncount: 1\n"
    );
    let finite = stdout(&["rules", "3", "-n", "2"]);
    assert!(finite.ends_with("count: 3\n"));
    let json = structured(&["rules", "w^2", "-n", "2", "--size", "3"]);
    assert_eq!(json["count"], 1);
    assert_eq!(
        json["rules"][0]["classes"][0],
        serde_json::json!([[1, 1], [2, 1]])
    );
}

#[test]
fn budget_exit_code() {
    let out = bigramsey(&["--budget", "50", "rules", "w^3", "-n", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_bigramsey"))
        .args(["rules", "w^3", "-n", "3"])
        .env("RAMSEY_BUDGET", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_examples() {
    for alpha in ["w^2*2", "w^2+w+1"] {
        let text = stdout(&["verify", alpha, "-n", "2"]);
        assert!(!text.contains("MISMATCH"));
    }
    let text = stdout(&["verify", "w^3", "-n", "2"]);
    assert!(text.ends_with("total recurrence=14 enumerated=14\n"));
    let json = structured(&["verify", "w^2", "-n", "3"]);
    assert_eq!(json["match"], true);
}

#[test]
fn oeis_examples() {
    let a000311 = stdout(&["oeis", "a000311", "--count", "7", "--format", "bfile"]);
    assert_eq!(a000311, "0 0\n1 1\n2 1\n3 4\n4 26\n5 236\n6 2752\n");
    let a079309 = stdout(&["oeis", "a079309", "--count", "5"]);
    assert_eq!(a079309, "1 1\n2 4\n3 14\n4 49\n5 175\n");
    assert_eq!(bigramsey(&["oeis", "a364026"]).status.code(), Some(2));
    let diag = stdout(&["oeis", "a364026", "--order", "d-ascending", "--count", "6"]);
    // antidiagonals d + n = 0, 1, 2 of the table, d running upward
    assert_eq!(diag, "0 1\n1 1\n2 1\n3 0\n4 1\n5 1\n");
    let diag = stdout(&[
        "oeis",
        "a364026",
        "--order",
        "n-ascending",
        "--count",
        "6",
        "--offset",
        "1",
    ]);
    assert_eq!(diag, "1 1\n2 1\n3 1\n4 1\n5 1\n6 0\n");
    assert_eq!(bigramsey(&["oeis", "a000001"]).status.code(), Some(2));
    assert_eq!(
        bigramsey(&["--format", "bfile", "degree", "w", "-n", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn classify_examples() {
    let text = stdout(&["classify", "w^2", "--edge", "w*1+2, w*3+4"]);
    assert!(text.contains("rule: c: 2,2; b: 0,0; a[1,1] < a[1,0] < a[2,1] < a[2,0]\n"));
    let text = stdout(&["classify", "w^2", "--edge", "w*1+4, w*2+4"]);
    assert!(text.ends_with("rule: none\ncolor: 1\n"));
    let text = stdout(&[
        "classify",
        "w^2+w*8",
        "--edge",
        "w*6+2 @origin1, w*1+4 @origin2",
    ]);
    assert!(text.contains("rule: c: 1,2; b: 6,0; a[2,1] < a[1,0] < a[2,0]\n"));
    let text = stdout(&["classify", "w^2", "--edge", "c=2;b=0;a=1,2, c=2;b=0;a=1,3"]);
    assert!(text.contains("a[1,1] = a[2,1] < a[1,0] < a[2,0]"));
    let json = structured(&["classify", "w^2", "--edge", "w*1+4, w*2+4"]);
    assert_eq!(json["rule"], Value::Null);
    assert_eq!(
        bigramsey(&["classify", "w^2", "--edge", "w^2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn witness_examples() {
    let text = stdout(&["witness", "w^2", "-n", "2", "--prefix", "12"]);
    assert!(text.contains("edges: 66\nsatisfied: 66\n"));
    assert!(text.ends_with("verified: yes\n"));
    let json = structured(&["witness", "w*3", "-n", "1", "--prefix", "9"]);
    assert_eq!(json["distinct_rules"], 3);
    assert_eq!(json["ok"], true);

    let dir = std::env::temp_dir().join(format!("bigramsey-ground-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ground = dir.join("ground.txt");
    let values: String = (0..40).map(|i| format!("{}\n", 3 * i + 1)).collect();
    std::fs::write(&ground, values).unwrap();
    let g = ground.to_str().unwrap();
    let text = stdout(&["witness", "w^2", "-n", "2", "--prefix", "6", "--ground", g]);
    assert!(text.starts_with("w*4 + 7 = c=2;b=0;a=4,7\n"));
    let short = bigramsey(&["witness", "w^3", "-n", "2", "--prefix", "12", "--ground", g]);
    assert_eq!(short.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&short.stderr).contains("too short"));
    std::fs::write(&ground, "3\n2\n").unwrap();
    assert_eq!(
        bigramsey(&["witness", "w", "-n", "1", "--ground", g])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn realize_examples() {
    let json = structured(&["realize", "zeta", "-n", "3", "--window", "6"]);
    assert_eq!(
        (json["colors"].as_u64(), json["expected"].as_u64()),
        (Some(8), Some(8))
    );
    let json = structured(&["realize", "omega-k", "-k", "2", "-n", "2", "--span", "4"]);
    assert_eq!(json["colors"], 4);
    let json = structured(&["realize", "rules", "w^2", "-n", "2"]);
    assert_eq!(json["colors"], 4);
    assert_eq!(json["expected"], 4);
}
