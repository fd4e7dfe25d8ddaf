use std::io::Write;
use std::process::{Command, Output};

fn kfib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kfib")).args(args).env_remove("KFIB_PRECISION_BITS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(o.stdout.as_slice()).records().map(Result::unwrap).collect()
}

fn tau(k: f64) -> f64 {
    (k - (k * k + 4.0).sqrt()) / 2.0
}

#[test]
fn fib_tables() {
    let o = kfib(&["fib", "--kappa", "1", "--n", "6"]);
    assert!(o.status.success());
    let vals: Vec<String> = csv_rows(&o).iter().map(|r| r[1].to_owned()).collect();
    assert_eq!(vals, ["0", "1", "1", "2", "3", "5", "8"]);
    let o = kfib(&["fib", "--kappa", "2", "--n", "3", "--binet"]);
    let rows = csv_rows(&o);
    assert_eq!(rows.iter().map(|r| r[1].to_owned()).collect::<Vec<_>>(), ["0", "1", "2", "5"]);
    assert!(rows.iter().all(|r| &r[3] == "true"));
    assert_eq!(csv_rows(&kfib(&["fib", "--n", "0"])).len(), 1);
    let o = kfib(&["fib", "--kappa", "1/2", "--n", "3"]);
    assert_eq!(csv_rows(&o).iter().map(|r| r[1].to_owned()).collect::<Vec<_>>(), ["0", "1", "1/2", "5/4"]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kfib(&["fib", "--kappa", "abc", "--n", "3"]).status.code(), Some(2));
    assert_eq!(kfib(&["bound", "--family", "Q"]).status.code(), Some(2));
    assert_eq!(kfib(&["bound", "--family", "B", "--lambda", "1/2"]).status.code(), Some(2));
    assert_eq!(kfib(&["verify", "--suite", "nope"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_kfib"))
        .args(["ptilde", "--order", "2"])
        .env("KFIB_PRECISION_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ptilde_coefficients() {
    let o = kfib(&["ptilde", "--kappa", "1", "--order", "5"]);
    let rows = csv_rows(&o);
    let t = tau(1.0);
    for (r, m) in rows.iter().zip([1.0, 1.0, 3.0, 4.0, 7.0, 11.0]) {
        let n: i32 = r[0].parse().unwrap();
        let v: f64 = r[2].parse().unwrap();
        assert!((v - m * t.powi(n)).abs() < 1e-14, "n={n}");
    }
    assert_eq!(&rows[1][1], "1/2 - 1/2√5");
    let rows = csv_rows(&kfib(&["ptilde", "--order", "0"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][1], "1");
    let t2 = tau(2.0);
    let rows = csv_rows(&kfib(&["ptilde", "--kappa", "2", "--order", "2"]));
    for (r, want) in rows.iter().zip([1.0, 2.0 * t2, 6.0 * t2 * t2]) {
        assert!((r[2].parse::<f64>().unwrap() - want).abs() < 1e-14);
    }
}

fn bound_json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["bound"];
    full.extend_from_slice(args);
    let o = kfib(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn bound_reports() {
    let v = bound_json(&["--family", "SL", "--kappa", "1"]);
    assert!((v["a2_bound"].as_f64().unwrap() - 0.41331).abs() < 1e-5);
    let t = tau(1.0);
    let v = bound_json(&["--family", "KSL", "--kappa", "1"]);
    let want = t.abs() / (2.0 * (2.0 - 5.0 * t)).sqrt();
    assert!((v["a2_bound"].as_f64().unwrap() - want).abs() < 1e-15);
    let v = bound_json(&["--family", "W", "--kappa", "1", "--gamma", "1", "--alpha", "0", "--lambda", "5"]);
    assert_eq!(v["valid"], false);
    assert!(v["a2_bound"].is_null());
    let v = bound_json(&["--family", "P", "--kappa", "0.5", "--lambda", "0.25"]);
    assert_eq!(v["kappa"], "1/2");
    assert_eq!(v["parameters"]["lambda"], "1/4");
}

#[test]
fn fekete_table_structure_and_format_agreement() {
    let args = ["fekete", "--family", "SL", "--kappa", "1", "--mu-from", "-1", "--mu-to", "3", "--mu-steps", "8"];
    let csv_out = kfib(&args);
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json_out = kfib(&json_args);
    let rows = csv_rows(&csv_out);
    let json: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let arr = json.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let flat = (tau(1.0)).abs() / 2.0;
    let threshold: f64 = rows[0][3].parse().unwrap();
    for (r, o) in rows.iter().zip(arr) {
        let mu: f64 = r[0].parse().unwrap();
        let value: f64 = r[1].parse().unwrap();
        assert_eq!(mu, o["mu"].as_f64().unwrap());
        assert_eq!(value, o["value"].as_f64().unwrap());
        assert_eq!(&r[2], o["branch"].as_str().unwrap());
        let want_branch = if (mu - 1.0).abs() <= threshold { "flat" } else { "slope" };
        assert_eq!(&r[2], want_branch);
        if want_branch == "flat" {
            assert!((value - flat).abs() < 1e-15);
        } else {
            assert!(value > flat);
        }
    }
    assert_eq!(&rows[4][0], "1.0000000000000000e0");
    assert_eq!(&rows[4][2], "flat");
}

#[test]
fn verify_suites() {
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(cfg, "kappa_list = [\"1\", \"2\"]\nspecialization_tuples = 2\nstructure_tuples = 2").unwrap();
    let path = cfg.path().to_str().unwrap();
    let o = kfib(&["verify", "--suite", "specialization", "--config", path]);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2 * 2 * 9 + 10 * 2 * 3 + 1);
    assert!(lines.iter().all(|l| l["suite"] == "summary" || l["pass"] == true));
    assert_eq!(lines.last().unwrap()["pass"], true);

    let o = kfib(&["verify", "--suite", "typos"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.contains("\"discrepancy\"")).count(), 3);
    assert!(text.contains("B.a2-bound-squared"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["verify", "--suite", "typos"];
    assert_eq!(kfib(&args).stdout, kfib(&args).stdout);
    let args = ["bound", "--family", "R", "--kappa", "3", "--gamma", "1/2", "--lambda", "2"];
    assert_eq!(kfib(&args).stdout, kfib(&args).stdout);
}
