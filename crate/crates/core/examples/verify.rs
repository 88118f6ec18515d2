//! A reduced run of the seeded invariant suite.
use qcc_lab::suite::{run_suite, Counts, SuiteConfig};

fn main() -> qcc_lab::Result<()> {
    let mut cfg = SuiteConfig::new(42);
    cfg.counts = Counts::default().reduced(20);
    let report = run_suite(&cfg)?;
    print!("{}", report.to_csv());
    println!("all passed: {}", report.passed);
    Ok(())
}
