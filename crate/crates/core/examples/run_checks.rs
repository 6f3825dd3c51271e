//! Run a few catalogue checks with a reduced configuration and print the reports.
use chaoslab::verify::{run_check, CheckConfig, CHECKS};

fn main() -> chaoslab::Result<()> {
    let cfg = CheckConfig { samples: 10_000, instances: 20, ..CheckConfig::default() };
    let wanted = std::env::args().skip(1).collect::<Vec<_>>();
    for info in CHECKS.iter().filter(|c| wanted.is_empty() || wanted.iter().any(|w| w == c.id)) {
        let r = run_check(info.id, &cfg)?;
        println!(
            "[{}] {:<20} {:<15} value {:.3e} target {} tol {:.1e}  ({})",
            if r.pass { "PASS" } else { "FAIL" },
            r.check_id,
            r.kind.as_str(),
            r.value,
            r.target,
            r.tolerance,
            info.statement
        );
    }
    Ok(())
}
