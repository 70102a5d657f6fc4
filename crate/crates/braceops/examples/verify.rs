//! Run one verification suite and summarize the report.

use braceops::report::{run_suite, Status, Suite};

fn main() {
    let suite: Suite = std::env::args().nth(1).unwrap_or_else(|| "ger-relations".into()).parse().expect("suite name");
    let report = run_suite(suite, 3).expect("run");
    for c in &report.checks {
        println!("{:?} {}", c.status, c.name);
    }
    let failed = report.checks.iter().filter(|c| c.status == Status::Fail).count();
    println!("{} checks, {failed} failed, verdict {}", report.checks.len(), report.passed());
}
