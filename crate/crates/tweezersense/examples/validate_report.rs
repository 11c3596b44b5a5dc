//! Run the invariant suite on the reference configuration and print one
//! line per check. The `tweezersense validate` subcommand does the same
//! with a configurable system.
//!
//! ```bash
//! cargo run --release --example validate_report
//! ```

use tweezersense::commands::cmd_validate;
use tweezersense::RunConfig;

fn main() -> Result<(), tweezersense::TweezerError> {
    let run = RunConfig::default();
    let report = cmd_validate(&run)?;
    print!("{}", report.render());
    if report.all_passed() {
        println!("all checks passed");
    }
    Ok(())
}
