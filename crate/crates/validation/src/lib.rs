//! Shared helpers for the acceptance suite in `tests/acceptance.rs`.

use std::io::Write;
use std::time::Duration;

use witnesskit::opalg::ComplexMatrix;

/// The two-qubit witness `(|φ><φ|)^{T_A}`, `φ = (|00> - |11>)/√2`, written out.
pub fn reference_witness() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[0.5, 0.0, 0.0, 0.0],
        &[0.0, 0.0, -0.5, 0.0],
        &[0.0, -0.5, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.5],
    ])
}

/// Prints one `PASS`/`FAIL` line and panics on failure. Exceeding the
/// runtime budget counts as a failure. The line goes to the stdout handle
/// rather than through `println!` so the test harness does not capture it
/// for passing tests.
pub fn report(n: u32, title: &str, ok: bool, elapsed: Duration, budget: Duration, detail: String) {
    let within = elapsed <= budget;
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(
        stdout,
        "{verdict} criterion {n:>2} {title}: {detail} [{:.2}s / {}s]",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    let _ = stdout.flush();
    drop(stdout);
    assert!(ok, "criterion {n} ({title}) failed: {detail}");
    assert!(
        within,
        "criterion {n} ({title}) exceeded its runtime budget"
    );
}
