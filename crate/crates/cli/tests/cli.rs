use std::fs;
use std::process::{Command, Output};

fn qdsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdsim"))
        .args(args)
        .env_remove("QDSIM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bell_example_decodes() {
    let o = qdsim(&[
        "run",
        "--protocol",
        "bell",
        "--alice-bits",
        "10",
        "--bob-bits",
        "01",
        "--n",
        "1",
        "--seed",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "alice_decoded=01 bob_decoded=10");
}

#[test]
fn ghz_example_decodes() {
    let o = qdsim(&[
        "run",
        "--protocol",
        "ghz",
        "--alice-bits",
        "01",
        "--bob-bits",
        "00",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "alice_decoded=00 bob_decoded=01");
}

#[test]
fn intercepted_run_aborts_with_exit_two() {
    let o = qdsim(&[
        "run",
        "--protocol",
        "bell",
        "--adversary",
        "intercept-resend",
        "--delta3",
        "32",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["run", "--protocol", "w", "--alice-bits", "101"][..],
        &["run", "--protocol", "qkd"],
        &["run", "--adversary", "photon-splitting"],
        &["run", "--alice-bits", "10x"],
        &["audit", "--protocol", "bb84"],
        &["attack", "--trials", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(qdsim(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("t{i}.json"))).collect();
    for p in &paths {
        let o = qdsim(&[
            "run",
            "--protocol",
            "w",
            "--adversary",
            "measure-resend",
            "--seed",
            "11",
            "--output",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.code() == Some(0) || o.status.code() == Some(2));
    }
    let a = fs::read(&paths[0]).unwrap();
    assert_eq!(a, fs::read(&paths[1]).unwrap());
    let json: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(json["protocol"], "w");
    assert_eq!(json["seed"], 11);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let (flag, env) = (dir.path().join("flag.json"), dir.path().join("env.json"));
    qdsim(&["run", "--seed", "42", "--output", flag.to_str().unwrap()]);
    let o = Command::new(env!("CARGO_BIN_EXE_qdsim"))
        .args(["run", "--output", env.to_str().unwrap()])
        .env("QDSIM_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(flag).unwrap(), fs::read(env).unwrap());
}

#[test]
fn audit_reports_ghz_entropy() {
    let o = qdsim(&["audit", "--protocol", "ghz"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["unit_entropy_bits"], 4.0);
    assert_eq!(json["mutual_information_bits"], 0.0);
}

#[test]
fn attack_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("attack.json");
    let o = qdsim(&[
        "attack",
        "--protocol",
        "bell",
        "--adversary",
        "measure-resend",
        "--trials",
        "2000",
        "--seed",
        "9",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(json["trials"], 2000);
    let check1 = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "check1")
        .unwrap();
    let rate = check1["per_unit"]["rate"].as_f64().unwrap();
    assert!((rate - 0.25).abs() < 0.04, "{rate}");
}

#[test]
fn table1_lists_the_simulated_rows() {
    let o = qdsim(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let simulated: Vec<_> = text.lines().filter(|l| l.ends_with("simulated")).collect();
    assert_eq!(simulated.len(), 3);
    assert!(simulated[0].contains("100%"));
    assert!(simulated[1].contains("80%"));
    assert!(simulated[2].contains("66.7%"));
}
