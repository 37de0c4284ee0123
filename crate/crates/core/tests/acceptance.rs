//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::process::ExitCode;

use monopole_lab::audit::{audit_suite, AuditOptions, CRITERION_COUNT};
use monopole_lab::QuadConfig;

fn acceptance() -> bool {
    let report = audit_suite(&AuditOptions::default());
    assert_eq!(report.criteria.len(), CRITERION_COUNT);
    for c in &report.criteria {
        let mark = if c.passed() { "PASS" } else { "FAIL" };
        println!("[{mark}] {:>2} {:<22} {}", c.criterion, c.tag, c.title);
        if !c.passed() {
            println!("       measured: {}", c.measured);
        }
    }
    let failed: Vec<usize> = report.failures().iter().map(|c| c.criterion).collect();
    println!("acceptance: {}/{} criteria passed", CRITERION_COUNT - failed.len(), CRITERION_COUNT);
    failed.is_empty()
}

fn loosened_quadrature_is_detected() -> bool {
    let opts = AuditOptions {
        quad: QuadConfig::default().loosened(1e6),
        ..AuditOptions::default()
    };
    let report = audit_suite(&opts);
    let failed: Vec<&str> = report.failures().iter().map(|c| c.tag.as_str()).collect();
    let detected = !failed.is_empty();
    println!(
        "[{}] sensitivity control: quadrature loosened by 1e6 fails {failed:?}",
        if detected { "PASS" } else { "FAIL" }
    );
    detected
}

fn main() -> ExitCode {
    let ok = acceptance() & loosened_quadrature_is_detected();
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
