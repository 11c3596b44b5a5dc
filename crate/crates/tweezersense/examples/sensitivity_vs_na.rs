//! Minimum detectable displacement of both read-outs versus the numerical
//! aperture of the collection objective. Spatial homodyne sets the quantum
//! limit; split detection trails it by up to an order of magnitude.
//!
//! ```bash
//! cargo run --release --example sensitivity_vs_na
//! ```

use tweezersense::detection::{sensitivity_sweep, DetectionOptions};
use tweezersense::optics::TweezerConfig;

fn main() -> Result<(), tweezersense::TweezerError> {
    let cfg = TweezerConfig::reference();
    let nas = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99];
    let results = sensitivity_sweep(&cfg, &nas, 256, 4.0, DetectionOptions::default())?;

    println!("sensitivities in meters at unit bandwidth (1 s integration), 200 mW trap\n");
    println!("  NA     split (m)     homodyne (m)   ratio");
    for r in &results {
        println!(
            "  {:4.2}   {:.3e}     {:.3e}     {:4.1}",
            r.na,
            r.s_sd,
            r.s_sh,
            r.s_sd / r.s_sh
        );
    }
    let best = results
        .iter()
        .map(|r| r.s_sd / r.s_sh)
        .fold(0.0f64, f64::max);
    println!(
        "\nboth curves fall with NA (more scattered light collected); the\n\
         homodyne advantage peaks at {best:.1}x in this range"
    );
    Ok(())
}
