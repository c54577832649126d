//! Runs every acceptance criterion and prints one line per criterion.
//!
//! A2 is a known failure: the oracle gives multiplicity 1 where the cuspidal dichotomy
//! predicts 2 (see the README). The test fails if any other criterion fails, or if A2
//! starts passing, so either change gets noticed.

use ggp_core::verify::{run_suite, Suite, VerifyOptions};
use std::io::Write;

const KNOWN_FAILURES: &[&str] = &["A2"];

#[test]
fn acceptance_criteria() {
    let results = run_suite(Suite::All, &VerifyOptions::default()).expect("suites run");
    // written past the test harness capture so the lines always show
    let mut err = std::io::stderr().lock();
    for r in &results {
        writeln!(err, "{r}").unwrap();
    }
    let ids: Vec<&str> = results.iter().map(|r| r.id).collect();
    assert_eq!(ids, ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10"]);
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert_eq!(failed, KNOWN_FAILURES, "unexpected set of failing criteria");
}

#[test]
fn suites_partition_criteria() {
    let mut ids: Vec<&str> = [Suite::Core, Suite::Weil, Suite::Combinatorics]
        .iter()
        .flat_map(|s| s.criteria().iter().copied())
        .collect();
    ids.sort_by_key(|id| id[1..].parse::<u32>().unwrap());
    assert_eq!(ids, Suite::All.criteria());
}
