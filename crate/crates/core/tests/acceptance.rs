//! Acceptance suite: runs every numbered criterion of the invariant suite
//! and prints one pass/fail line per criterion. All checks are exact
//! arithmetic over finite rings; there are no tolerances to configure.

use sharpflat_core::selftest::{run_selftest, SelftestConfig};

#[test]
fn acceptance_criteria() {
    let cfg = SelftestConfig { seed: 7, extra_sweep: None };
    let report = run_selftest(&cfg).expect("criterion contract violated");
    let mut all_ok = true;
    for o in &report.outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("[criterion {:>2}] {status}: {} ({} cases; {})", o.id, o.name, o.cases, o.detail);
        all_ok &= o.passed;
    }
    assert!(all_ok, "acceptance criteria failed");
}

#[test]
fn acceptance_deterministic_across_runs() {
    let cfg = SelftestConfig { seed: 42, extra_sweep: Some((5, 2, 2)) };
    let a = run_selftest(&cfg).expect("run a");
    let b = run_selftest(&cfg).expect("run b");
    let render = |r: &sharpflat_core::selftest::SelftestReport| {
        r.outcomes
            .iter()
            .map(|o| format!("{}|{}|{}|{}", o.id, o.passed, o.cases, o.detail))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(render(&a), render(&b));
}
