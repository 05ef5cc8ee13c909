use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kbonacci"))
        .args(args)
        .env_remove("KBONACCI_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8")
}

/// Column `col` of CSV output, header dropped.
fn csv_column(text: &str, col: usize) -> Vec<String> {
    text.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().to_string()).collect()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn fibonacci_lines(count: usize) -> String {
    let (mut a, mut b) = (1u64, 1u64);
    let mut s = String::new();
    for _ in 0..count {
        s.push_str(&format!("{a}\n"));
        (a, b) = (b, a + b);
    }
    s
}

#[test]
fn gen_tribonacci_row() {
    let out = stdout(&["gen", "3", "1..9", "--format", "csv"]);
    assert_eq!(csv_column(&out, 1), ["1", "1", "2", "4", "7", "13", "24", "44", "81"]);
}

#[test]
fn gen_by_rounding_pentanacci_row() {
    let out = stdout(&["gen", "5", "1..9", "--method", "round", "--format", "csv"]);
    assert!(out.starts_with("n,F_n,precision_bits,proof_gap\n"));
    assert_eq!(csv_column(&out, 1), ["1", "1", "2", "4", "8", "16", "31", "61", "120"]);
}

#[test]
fn gen_methods_agree() {
    let iter = stdout(&["gen", "4", "-2..120", "--format", "csv"]);
    let matrix = stdout(&["gen", "4", "-2..120", "--method", "matrix", "--format", "csv"]);
    let round = stdout(&["gen", "4", "-2..120", "--method", "round", "--format", "csv"]);
    assert_eq!(iter, matrix);
    assert_eq!(csv_column(&iter, 1), csv_column(&round, 1));
}

#[test]
fn low_starting_precision_escalates() {
    let out = stdout(&["gen", "2", "200", "--method", "round", "--precision", "32", "--format", "csv"]);
    assert_eq!(csv_column(&out, 1), ["280571172992510140037611932413038677189525"]);
    let bits: u32 = csv_column(&out, 2)[0].parse().unwrap();
    assert!(bits > 32);
}

#[test]
fn gen_below_domain_is_a_domain_failure() {
    let out = run(&["gen", "2", "-1..3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n >= 2 - k"));
}

#[test]
fn roots_report_dominant_root() {
    let out = stdout(&["roots", "4"]);
    assert!(out.contains("1.92756197548"), "{out}");
    assert!(out.contains("# within_bounds: true"));
    let all = stdout(&["roots", "2", "--all", "--decimals", "6", "--format", "csv"]);
    let re = csv_column(&all, 1);
    assert!(re[0].starts_with("1.618034"));
    assert_eq!(re[1], "-0.618034");
}

#[test]
fn roots_full_set_lies_inside_unit_circle() {
    let out = stdout(&["roots", "7", "--all", "--format", "csv"]);
    let moduli = csv_column(&out, 3);
    assert_eq!(moduli.len(), 7);
    for m in &moduli[1..] {
        assert!(m.parse::<f64>().unwrap() < 1.0, "{m}");
    }
}

#[test]
fn order_below_two_is_usage_error() {
    assert_eq!(run(&["roots", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--k-max", "1"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "3", "5..1"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "3", "1..9", "--method", "binet"]).status.code(), Some(2));
}

#[test]
fn errors_reproduce_order_six_chart() {
    let out = stdout(&["errors", "6", "0..7", "--decimals", "3", "--format", "csv"]);
    assert_eq!(
        out,
        "n,F_n,dominant_term,abs_error\n\
         0,0,0.263,0.263\n1,1,0.522,0.478\n2,1,1.035,0.035\n3,2,2.053,0.053\n\
         4,4,4.072,0.072\n5,8,8.078,0.078\n6,16,16.023,0.023\n7,32,31.782,0.218\n"
    );
}

#[test]
fn errors_reproduce_fibonacci_chart() {
    let out = stdout(&["errors", "2", "0..6", "--format", "csv"]);
    assert_eq!(csv_column(&out, 2), ["0.447", "0.724", "1.171", "1.894", "3.065", "4.960", "8.025"]);
}

#[test]
fn errors_below_domain_exit_one() {
    let out = run(&["errors", "2", "-1..0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n >= 2 - k = 0"));
}

#[test]
fn verify_sweep_passes() {
    let out = stdout(&["verify", "--k-max", "5", "--n-max", "120", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,values_checked,value_mismatches,coefficients,bounds,m_properties");
    assert_eq!(lines[1], "2,121,0,pass,pass,pass");
    assert_eq!(lines.len(), 5);
    let small = stdout(&["verify", "--k-max", "2", "--n-max", "6"]);
    assert!(small.contains("# status: pass"));
}

#[test]
fn threshold_presets() {
    let scaled = stdout(&["threshold", "--preset", "scaled-fib"]);
    assert!(scaled.contains("# threshold: 5\n"), "{scaled}");
    assert!(scaled.contains("# verified_up_to: 40\n"));
    let g = stdout(&["threshold", "--preset", "gn", "--n-max", "40"]);
    assert!(g.contains("# threshold: none\n"), "{g}");
}

#[test]
fn threshold_from_sequence_file() {
    let path = temp_file("fib.txt", &fibonacci_lines(40));
    let p = path.to_str().unwrap();
    let out = stdout(&["threshold", "--coeff", "0.7236067977", "--base", "1.6180339887", "--seq", p]);
    assert!(out.contains("# threshold: 0\n"), "{out}");
    let short = stdout(&["threshold", "--coeff", "0.7236067977", "--base", "1.6180339887", "--seq", p, "--n-max", "9"]);
    assert!(short.contains("# verified_up_to: 9\n"));
}

#[test]
fn threshold_rejects_bad_input() {
    let path = temp_file("bad.txt", "1\n1\ntwo\n");
    let out = run(&["threshold", "--coeff", "1", "--base", "2", "--seq", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":3:"));
    assert_eq!(run(&["threshold"]).status.code(), Some(2));
    assert_eq!(run(&["threshold", "--preset", "gn", "--coeff", "1"]).status.code(), Some(2));
    assert_eq!(run(&["threshold", "--coeff", "1e3", "--base", "2", "--seq", "x"]).status.code(), Some(2));
}

#[test]
fn json_lines_are_deterministic() {
    let args = ["errors", "3", "-1..20", "--format", "json"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let lines: Vec<serde_json::Value> = a.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["command"], "errors");
    assert_eq!(lines.len(), 23);
    assert_eq!(lines[1]["n"], -1);
    assert_eq!(lines[22]["F_n"], "66012");
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_kbonacci"))
        .args(["roots", "3"])
        .env("KBONACCI_PRECISION", "256")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("precision=256"));
    let bad = Command::new(env!("CARGO_BIN_EXE_kbonacci"))
        .args(["roots", "3"])
        .env("KBONACCI_PRECISION", "8")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
