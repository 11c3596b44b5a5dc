//! SNR of split detection and spatial homodyne detection versus particle
//! displacement, with the local oscillator optimized either for particles
//! near the trap center or for particles around 0.4 µm.
//!
//! ```bash
//! cargo run --release --example snr_vs_displacement
//! ```

use tweezersense::detection::{snr_sweep, DetectionOptions};
use tweezersense::optics::TweezerConfig;

fn main() -> Result<(), tweezersense::TweezerError> {
    let cfg = TweezerConfig::reference();
    let grid = cfg.objective_grid(256, 4.0)?;
    let ps: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.1e-6).collect();

    for lo_p0 in [0.0, 0.4e-6] {
        let sweep = snr_sweep(&cfg, &ps, lo_p0, &grid, DetectionOptions::default())?;
        let nsh = sweep.normalized_sh();
        let nsd = sweep.normalized_sd();

        let (i_peak, _) = sweep
            .records
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.snr_sh.abs().total_cmp(&b.1.snr_sh.abs()))
            .unwrap();
        println!(
            "LO optimized at {:4.1} µm: homodyne SNR peaks at {:+.1} µm",
            lo_p0 * 1e6,
            ps[i_peak] * 1e6
        );

        println!("  p (µm)   SNR_SD/max   SNR_SH/max");
        for i in (0..ps.len()).step_by(4) {
            println!(
                "  {:+5.1}    {:+8.4}    {:+8.4}",
                ps[i] * 1e6,
                nsd[i],
                nsh[i]
            );
        }
        println!();
    }
    println!(
        "split detection reads only the flipped-mode projection of the\n\
         signal; the matched LO captures all of it, and re-optimizing the LO\n\
         moves the maximum-slope (best tracking) point to the new operating\n\
         displacement"
    );
    Ok(())
}
