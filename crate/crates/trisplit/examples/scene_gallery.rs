//! Render every synthetic scene, plus its piecewise mask and smooth shade,
//! as 16-bit PNGs under `target/scenes/`.
//!
//! ```bash
//! cargo run --example scene_gallery
//! ```

use trisplit::io::write_gray16;
use trisplit::synth::{generate, scene_mask, scene_shade, Scene};

fn main() -> trisplit::Result<()> {
    let out = std::path::Path::new("target/scenes");
    std::fs::create_dir_all(out)?;
    for scene in Scene::ALL {
        let size = 256;
        write_gray16(&generate(scene, size)?, &out.join(format!("{}.png", scene.name())))?;
        write_gray16(
            &scene_mask(scene, size)?,
            &out.join(format!("{}_mask.png", scene.name())),
        )?;
        write_gray16(
            &scene_shade(scene, size)?,
            &out.join(format!("{}_shade.png", scene.name())),
        )?;
        println!("wrote {}{{,_mask,_shade}}.png", scene.name());
    }
    println!("scenes written to {}", out.display());
    Ok(())
}
