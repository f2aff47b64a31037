use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

fn prym() -> Command {
    Command::cargo_bin("prym").unwrap()
}

#[test]
fn check_certifies_anticanonical_on_dp3() {
    let out = prym()
        .args(["check", "--surface", "dp3", "--divisor", "3,1,1,1,1,1,1", "--n", "1"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["verdict"], "IrreducibleSymplectic");
    assert_eq!(v["numerics"]["prymDim"], 6);
    assert_eq!(v["surface"]["nikulin"], serde_json::json!([7, 7, 1]));
    assert_eq!(v["schemaVersion"], 1);
}

#[test]
fn check_certifies_plane_sextic_dimension() {
    let out = prym()
        .args(["check", "--surface", "p2", "--divisor", "3", "--n", "2"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    // C = 3H with n = 2 is the sextic row: dim 6^2 + 3*6
    assert_eq!(v["numerics"]["prymDim"], 54);
    assert_eq!(v["verdict"], "IrreducibleSymplectic");
}

#[test]
fn check_inconclusive_exits_one_with_reason() {
    prym()
        .args(["check", "--surface", "dp2", "--divisor", "3,1,1,1,1,1,1,1", "--human"])
        .assert()
        .code(1)
        .stdout(predicate::str::contains("veryAmpleC"))
        .stdout(predicate::str::contains("fail"))
        .stdout(predicate::str::contains("Inconclusive"));
}

#[test]
fn check_rejects_bad_input_with_exit_two() {
    prym()
        .args(["check", "--surface", "p2", "--divisor", "3,1"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("1 coefficients"));
    prym().args(["check", "--surface", "dp9", "--divisor", "1"]).assert().code(2);
    prym()
        .args(["check", "--surface", "p2", "--divisor", "3", "--n", "0"])
        .assert()
        .code(2);
    prym().args(["check", "--surface", "p2", "--divisor", "x"]).assert().code(2);
}

#[test]
fn catalog_matches_and_exits_zero() {
    prym()
        .arg("catalog")
        .assert()
        .success()
        .stdout(predicate::str::contains("all 50 rows match"));
}

#[test]
fn search_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.jsonl");
    let eight = dir.path().join("eight.jsonl");
    prym()
        .args(["search", "--surface", "dp3", "--max-a", "4", "--max-n", "2", "--jobs", "1"])
        .arg("--out")
        .arg(&one)
        .assert()
        .success();
    prym()
        .args(["search", "--surface", "dp3", "--max-a", "4", "--max-n", "2"])
        .env("PRYM_JOBS", "8")
        .arg("--out")
        .arg(&eight)
        .assert()
        .success();
    let a = std::fs::read(&one).unwrap();
    let b = std::fs::read(&eight).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "output must be byte-identical regardless of --jobs");
}

#[test]
fn search_finds_known_families_and_dedupes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cat.jsonl");
    prym()
        .args(["search", "--surface", "dp3", "--max-a", "4", "--max-n", "2"])
        .arg("--out")
        .arg(&out)
        .assert()
        .success();
    let text = std::fs::read_to_string(&out).unwrap();
    let records: Vec<Value> =
        text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let find = |a: i64, b: &[i64], n: i64| -> &Value {
        records
            .iter()
            .find(|r| {
                r["divisor"]["a"] == a
                    && r["divisor"]["b"] == serde_json::json!(b)
                    && r["divisor"]["n"] == n
            })
            .unwrap_or_else(|| panic!("missing a={a} b={b:?} n={n}"))
    };
    assert_eq!(find(3, &[1, 1, 1, 1, 1, 1], 1)["numerics"]["prymDim"], 6);
    assert_eq!(find(4, &[2, 1, 1, 1, 1, 1], 1)["numerics"]["prymDim"], 12);
    assert_eq!(find(4, &[2, 1, 1, 1, 1, 1], 2)["numerics"]["prymDim"], 38);

    // second run appends nothing
    prym()
        .args(["search", "--surface", "dp3", "--max-a", "4", "--max-n", "2"])
        .arg("--out")
        .arg(&out)
        .assert()
        .success()
        .stderr(predicate::str::contains("0 new record(s)"));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
}

#[test]
fn search_empty_grid_writes_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty.jsonl");
    prym()
        .args(["search", "--surface", "p2", "--max-a", "0"])
        .arg("--out")
        .arg(&out)
        .assert()
        .success();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
}

#[test]
fn search_unwritable_path_exits_two() {
    prym()
        .args(["search", "--surface", "p2", "--max-a", "3", "--out", "/nonexistent/dir/x.jsonl"])
        .assert()
        .code(2);
}

#[test]
fn search_csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cat.csv");
    prym()
        .args(["search", "--surface", "p2", "--max-a", "3", "--format", "csv"])
        .arg("--out")
        .arg(&out)
        .assert()
        .success();
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[1], "surface");
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3); // H, 2H, 3H are all ample
    assert_eq!(&rows[2][2], "3");
    assert_eq!(&rows[2][10], "18");
    assert_eq!(&rows[2][11], "IrreducibleSymplectic");
    assert_eq!(&rows[0][11], "Inconclusive"); // H: D^2 = 2
}

#[test]
fn homology_reports_model_and_generation() {
    let out = prym()
        .args(["homology", "--l", "2", "--m", "1", "--parity", "--generation-test"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["rank"], 10);
    assert_eq!(v["genus"], 5);
    assert_eq!(v["antiInvariantRank"], 6);
    assert_eq!(v["parity"]["kind"], "OddPairingWitness");
    assert_eq!(v["generationTest"]["kind"], "Generates");

    let out = prym()
        .args(["homology", "--l", "3", "--m", "0", "--parity"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["parity"]["kind"], "EvenForm");
    assert_eq!(v["antiInvariantRank"], 6);
}

#[test]
fn homology_rejects_negative_input() {
    prym().args(["homology", "--l", "-1", "--m", "0"]).assert().code(2);
}
