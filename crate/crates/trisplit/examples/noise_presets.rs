//! Pick the oscillation weight from the noise level and decompose the same
//! scene under light, medium, and heavy noise.
//!
//! ```bash
//! cargo run --example noise_presets
//! ```

use trisplit::driver::{decompose, preset_alpha_n, DecompParams};
use trisplit::grid::{add_gaussian_noise, psnr, NoiseSpec};
use trisplit::synth::{generate, Scene};

fn main() -> trisplit::Result<()> {
    let clean = generate(Scene::Globe, 128)?;
    println!("{:>8} {:>10} {:>14} {:>12}", "σ·255", "alpha_n", "psnr(noisy)", "psnr(u*)");
    for sigma255 in [10.0, 40.0, 80.0] {
        let alpha_n = preset_alpha_n(sigma255);
        let noisy = add_gaussian_noise(&clean, NoiseSpec::new(sigma255 / 255.0, 99)?)?;
        let params = DecompParams {
            alpha_n,
            iter_max: 250,
            ..DecompParams::default()
        };
        let result = decompose(&noisy, &params)?;
        println!(
            "{:>8} {:>10.0e} {:>11.2} dB {:>9.2} dB",
            sigma255,
            alpha_n,
            psnr(&clean, &noisy)?,
            psnr(&clean, &result.u)?
        );
    }
    Ok(())
}
