//! One line per acceptance criterion, each backed by the suite of the same name.
//!
//! Run with `cargo test --release -p itlag --test acceptance -- --nocapture` to see the lines.

use itlag::suites::{run_suite, SuiteOptions, SuiteReport, Verdict, SUITES};

fn summary(index: usize, r: &SuiteReport) -> String {
    let (good, bad, skipped) = r.tally();
    let mut line = format!(
        "[{}] {:>2} {:<21} {good} as expected, {bad} not, {skipped} skipped, checksum {}",
        if r.passed() { "PASS" } else { "FAIL" },
        index + 1,
        r.suite,
        &r.checksum[..16]
    );
    if let Some(c) = r.cases.iter().find(|c| !c.as_expected()) {
        line.push_str(&format!(" | first mismatch {}: {}", c.id, c.witness.as_deref().unwrap_or("no witness")));
    }
    line
}

#[test]
fn acceptance() {
    let opts = SuiteOptions::default();
    let mut failed = Vec::new();
    for (i, name) in SUITES.iter().enumerate() {
        let line = match run_suite(name, &opts) {
            Ok(r) => {
                assert!(
                    r.cases.iter().all(|c| c.verdict != Verdict::Fail || c.witness.is_some()),
                    "{name}: failing case without a witness"
                );
                if !r.passed() {
                    failed.push(*name);
                }
                summary(i, &r)
            }
            Err(e) => {
                failed.push(*name);
                format!("[FAIL] {:>2} {name:<21} could not run: {e}", i + 1)
            }
        };
        println!("{line}");
    }
    assert!(failed.is_empty(), "criteria not met: {failed:?}");
}

#[test]
fn reports_repeat_byte_for_byte() {
    for name in ["constant-holim", "deloop", "lefschetz"] {
        let a = run_suite(name, &SuiteOptions::default()).unwrap();
        let b = run_suite(name, &SuiteOptions::default()).unwrap();
        assert_eq!(a.to_json().to_string(), b.to_json().to_string(), "{name}");
    }
}
