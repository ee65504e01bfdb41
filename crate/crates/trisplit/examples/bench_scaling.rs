//! Measure per-iteration wall time across grid sizes and fit the scaling
//! exponent against the pixel count.
//!
//! ```bash
//! cargo run --example bench_scaling
//! ```

use trisplit::bench::run_bench;
use trisplit::driver::DecompParams;

fn main() -> trisplit::Result<()> {
    let report = run_bench(&[64, 128, 256], &DecompParams::default(), 3, 6)?;
    println!("{:>8}  {:>16}", "size", "sec/iteration");
    for t in &report.timings {
        println!("{:>8}  {:>16.6}", t.size, t.per_iter_seconds);
    }
    println!(
        "fitted exponent vs pixel count: {:.3} (an FFT-bound loop sits slightly above 1)",
        report.fitted_exponent
    );
    Ok(())
}
