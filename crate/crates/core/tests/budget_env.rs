// Separate binary: the budget is read from the process environment.

use fqflats::cli::run;
use serde_json::Value;

#[test]
fn environment_budget_marks_entries_skipped() {
    std::env::set_var("FQFLATS_BUDGET", "max_flats=100");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["fqflats", "verify", "--q", "3", "--d", "4", "--k", "1", "--h", "3", "--samples", "0"];
    let code = run(args, &mut out, &mut err);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["records"][0]["status"], "skipped");
    assert_eq!(v["summary"]["fail"], 0);

    let code = run(["fqflats", "spectrum", "--q", "3", "--d", "4", "--k", "1", "--h", "3"], &mut Vec::new(), &mut err);
    assert_eq!(code, 2);

    std::env::set_var("FQFLATS_BUDGET", "nonsense=");
    assert_eq!(run(["fqflats", "count", "--q", "3", "--d", "2", "--k", "0", "--h", "1"], &mut Vec::new(), &mut Vec::new()), 2);
    std::env::remove_var("FQFLATS_BUDGET");
}
