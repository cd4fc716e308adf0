//! End-to-end checks of the batch front end: flag handling, output
//! determinism, exit codes.

use genord::cli::run;

fn capture(args: &[&str]) -> (i32, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut buf = Vec::new();
    let code = run(&argv, &mut buf);
    (code, String::from_utf8(buf).unwrap())
}

#[test]
fn relevant_sets() {
    let (code, out) = capture(&["relevant", "F4"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "{1,2,3,4,6}");
    let (code, out) = capture(&["relevant", "E6"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "{1,2,3,4,5,6,10}");
    let (code, out) = capture(&["relevant", "G2", "--class", "a2t"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "{1,2,6}");
}

#[test]
fn decompose_cases_print_the_table_entries() {
    let (code, out) = capture(&["decompose", "--case", "F4-e4-B2-12_0"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "-(03,2)+(012,23)+(04,1)+(01234,12)");
    let (code, out) = capture(&["decompose", "--case", "F4-e4-B2-01_2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "-(023,12)+(0124,123)+(23,0)+(014,0)");
}

#[test]
fn esplit_lists_levis() {
    let (code, out) = capture(&["esplit", "G2", "--e", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("P3"), "{out}");
    // output is deterministic
    let (_, again) = capture(&["esplit", "G2", "--e", "3"]);
    assert_eq!(out, again);
}

#[test]
fn usage_errors_exit_2() {
    let (code, _) = capture(&["esplit", "G2"]); // missing --e
    assert_eq!(code, 2);
    let (code, _) = capture(&["nonsense"]);
    assert_eq!(code, 2);
    let (code, _) = capture(&[]);
    assert_eq!(code, 2);
}

#[test]
fn verification_failure_exits_1() {
    let (code, out) = capture(&["decompose", "--case", "no-such-case"]);
    assert_eq!(code, 1);
    assert!(out.contains("error"), "{out}");
}

#[test]
fn help_names_the_reproduced_table() {
    let (code, out) = capture(&["cuspidal", "--help", "x"]);
    assert_eq!(code, 0);
    assert!(out.contains("F4"), "{out}");
}

#[test]
fn g2_suite_passes() {
    let (code, out) = capture(&["verify", "--suite", "g2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("pass"), "{out}");
    // CSV output carries the same rows
    let (code, csv) = capture(&["verify", "--suite", "g2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(csv.starts_with("check,status"), "{csv}");
}

#[test]
fn export_csv_is_stable() {
    let (code, a) = capture(&["export-csv"]);
    assert_eq!(code, 0);
    let (_, b) = capture(&["export-csv"]);
    assert_eq!(a, b);
    assert!(a.lines().count() > 130);
}
