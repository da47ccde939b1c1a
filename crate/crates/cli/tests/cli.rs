use std::process::{Command, Output};

fn qdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn qdlab_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdlab"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn qd_witness_is_symmetric() {
    let o = qdlab(&["qd-witness", "--N", "50", "--R", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let (a, b) = (v["norm_comm_a"].as_f64().unwrap(), v["norm_comm_b"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-8);
    assert!((a - 0.8665349718507698).abs() < 1e-10);
    for key in [
        "N",
        "R",
        "regime_ok",
        "norm_comm_a",
        "norm_comm_b",
        "lambda_min_full",
        "lambda_min_S",
        "lambda_min_F_minus_S",
        "paper_bound_sqrt3_2",
        "paper_claim_bound",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn ps_bounds_csv_is_decreasing() {
    let o = qdlab(&["ps-bounds", "--d", "2", "--p-grid", "2:32:1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,p,q,qd_upper,cb_upper"));
    let qd: Vec<f64> = lines
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            assert_eq!(cells.len(), 5);
            assert_eq!(cells[2], "inf");
            cells[3].parse().unwrap()
        })
        .collect();
    assert_eq!(qd.len(), 31);
    assert!(qd.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(qd[0], 0.9194016867619662);
}

#[test]
fn table_audit_passes_with_corrections() {
    let o = qdlab(&["table-audit", "--N", "32", "--R", "1", "--tables", "12", "--strict"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["max_abs_discrepancy"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["table"], "12");
    assert!(!v["printed_discrepancies"].as_array().unwrap().is_empty());
}

#[test]
fn strict_flags_printed_table_errors() {
    let args = ["table-audit", "--N", "16", "--R", "1", "--tables", "34", "--printed"];
    assert_eq!(qdlab(&args).status.code(), Some(0));
    let mut strict = args.to_vec();
    strict.push("--strict");
    let o = qdlab(&strict);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("audit failed"));
    assert!(!o.stdout.is_empty());
}

#[test]
fn validation_errors_exit_with_two() {
    for args in [
        vec!["qd-witness", "--N", "1", "--R", "1"],
        vec!["qd-witness", "--N", "10"],
        vec!["qd-witness", "--N", "10", "--R", "1", "--bogus"],
        vec!["table-audit", "--N", "5", "--R", "1"],
        vec!["table-audit", "--N", "32", "--R", "1", "--tables", "56"],
        vec!["ps-bounds", "--p-grid", "1:4:1"],
        vec!["ps-bounds", "--p-grid", "2:4"],
        vec!["haagerup-check", "--r-grid", "0.5,1.5"],
        vec!["shift-demo", "--dim", "20", "--rank-max", "10"],
        vec!["optimize", "--K", "10", "--window", "12"],
        vec!["sweep", "--N-grid", "1:4:1"],
    ] {
        let o = qdlab(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn unwritable_output_is_rejected() {
    let o = qdlab(&["ps-bounds", "--output", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("qdlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("demo.json");
    let args = ["shift-demo", "--trials", "30", "--seed", "9", "--output", path.to_str().unwrap()];
    assert_eq!(qdlab(&args).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    assert_eq!(qdlab_env(&args, "QDLAB_THREADS", "1").status.code(), Some(0));
    let second = std::fs::read(&path).unwrap();
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["rank_identities_hold"], true);
    assert!(v["min_commutator_norm"].as_f64().unwrap() >= 1.0 - 1e-9);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = qdlab_env(&["ps-bounds"], "QDLAB_THREADS", "0");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn haagerup_check_reports_psd() {
    let o = qdlab(&["haagerup-check", "--R", "2", "--strict"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[2]["r"].as_f64(), Some(0.3));
    assert!(rows.iter().all(|r| r["psd"] == true && r["size"] == 17));
}

#[test]
fn optimize_reports_frozen_fields() {
    let o = qdlab(&["optimize", "--K", "10", "--max-iterations", "30", "--strict"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for key in ["generators", "rank", "window", "seed", "iterations", "value", "baseline_value", "converged"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["generators"], serde_json::json!(["shift"]));
    assert_eq!(v["window"], 40);
    assert!(v["seed"].is_null());
    assert!(v["value"].as_f64().unwrap() <= v["baseline_value"].as_f64().unwrap());
    assert!((v["baseline_value"].as_f64().unwrap() - 10f64.powf(-0.5)).abs() < 1e-12);

    let o = qdlab(&["optimize", "--model", "free", "--N", "6", "--init", "random", "--rank", "3", "--seed", "4", "--max-iterations", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["seed"], 4);
    assert_eq!(v["generators"], serde_json::json!(["a", "b"]));
}

#[test]
fn sweep_is_ordered_by_parameter() {
    let o = qdlab(&["sweep", "--N-grid", "16,8,12", "--R", "1", "--strict"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let ns: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["N"].as_u64().unwrap()).collect();
    assert_eq!(ns, [8, 12, 16]);
}
