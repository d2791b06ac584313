use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fuzzdyn"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn uniform_rigidity_witness() {
    let dir = TempDir::new().unwrap();
    let o = run(
        &[
            "check",
            "--system",
            "rotation:12,1",
            "--props",
            "uniform-rigidity",
            "--eps",
            "1/24",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path());
    let v = &r["verdicts"][0];
    assert_eq!(v["status"], "holds");
    assert_eq!(v["witnesses"]["n"], 12);
    assert_eq!(r["config"]["eps"], "1/24");
    assert!(r["version"].is_string());
    assert_eq!(csv_rows(&dir.path().join("summary.csv"))[0][1], "holds");
}

#[test]
fn one_point_file_system_is_transitive() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("sys.json");
    std::fs::write(
        &spec,
        r#"{"kind":"finite","points":["a"],"dist":[["0/1"]],"map":["a"]}"#,
    )
    .unwrap();
    let system = format!("file:{}", spec.display());
    let o = run(&["check", "--system", &system, "--props", "transitivity"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(dir.path())["verdicts"][0]["status"], "holds");
}

#[test]
fn failing_verdict_still_exits_zero() {
    let dir = TempDir::new().unwrap();
    let o = run(
        &["check", "--system", "multiply:8,2", "--props", "transitivity"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v = &report(dir.path())["verdicts"][0];
    assert_eq!(v["status"], "fails");
    assert!(v["counterexample"]["U"].is_array() && v["counterexample"]["V"].is_array());
}

#[test]
fn transitivity_matrix_on_two_cycle() {
    let dir = TempDir::new().unwrap();
    let o = run(
        &[
            "verify",
            "--theorem",
            "transitivity",
            "--system",
            "rotation:2,1",
            "--m",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = &report(dir.path())["report"];
    assert_eq!(r["consistent"], true);
    let items = r["items"].as_array().unwrap();
    assert_eq!(items.len(), 5);
    assert!(items.iter().all(|i| i["verdict"]["status"] == "fails"));
}

#[test]
fn proximality_has_f0_row() {
    let dir = TempDir::new().unwrap();
    let o = run(
        &[
            "verify",
            "--theorem",
            "proximality",
            "--system",
            "gridmap:half,8",
            "--m",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = &report(dir.path())["report"];
    assert_eq!(r["consistent"], true);
    let f0 = r["extras"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["level"] == "fuzzy_0")
        .unwrap();
    assert_eq!(f0["verdict"]["status"], "fails");
    assert_eq!(f0["expected"], false);
}

#[test]
fn cut_lemma_table_all_equal() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(
        &g,
        r#"{"grid_m":4,"table":{"0/1":"0/1","1/4":"1/4","1/2":"1/4","3/4":"1/1","1/1":"1/1"}}"#,
    )
    .unwrap();
    let garg = format!("file:{}", g.display());
    let o = run(
        &[
            "verify",
            "--theorem",
            "cut-lemma",
            "--system",
            "multiply:9,2",
            "--m",
            "4",
            "--g",
            &garg,
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = &report(dir.path())["report"]["items"][0]["verdict"];
    assert_eq!(v["status"], "holds");
    let table = v["witnesses"]["table"].as_array().unwrap();
    assert_eq!(table.len(), 11 * 4);
    assert!(table.iter().all(|row| row["equal"] == row["total"]));
}

#[test]
fn plotdata_curves() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        run(
            &["plotdata", "--system", "gridmap:constant,4", "--horizon", "3"],
            dir.path()
        )
        .status
        .code(),
        Some(0)
    );
    let diam = csv_rows(&dir.path().join("diam_decay.csv"));
    assert_eq!(diam[0], ["0", "1/1"]);
    assert_eq!(diam[1], ["1", "0/1"]);

    let dir = TempDir::new().unwrap();
    assert_eq!(
        run(
            &["plotdata", "--system", "rotation:12,1", "--horizon", "25"],
            dir.path()
        )
        .status
        .code(),
        Some(0)
    );
    for row in csv_rows(&dir.path().join("rigidity.csv")) {
        let n: usize = row[0].parse().unwrap();
        assert_eq!(row[1] == "0/1", n.is_multiple_of(12), "{row:?}");
    }
    for row in csv_rows(&dir.path().join("modulus.csv")) {
        assert_eq!(row[0], row[1]);
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        run(&["check", "--system", "rotation:2,x"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "--system", "point", "--props", "entropy"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--system", "point", "--theorem", "nope"], dir.path())
            .status
            .code(),
        Some(2)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_fuzzdyn"))
        .args([
            "verify",
            "--theorem",
            "transitivity",
            "--system",
            "rotation:5,1",
            "--out",
        ])
        .arg(dir.path())
        .env("FUZZDYN_MAX_POINTS", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("base space"));
}

#[test]
fn reports_are_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let args = [
        "verify",
        "--theorem",
        "cut-lemma",
        "--system",
        "multiply:5,2",
        "--m",
        "3",
        "--seed",
        "7",
    ];
    run(&args, a.path());
    run(&args, b.path());
    let read = |d: &TempDir| std::fs::read(d.path().join("report.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn catalog_lists_theorems() {
    let o = Command::new(env!("CARGO_BIN_EXE_fuzzdyn"))
        .args(["catalog", "--json"])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ids: Vec<&str> = v["theorems"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"uniform-rigidity") && ids.contains(&"cut-lemma"));
}
