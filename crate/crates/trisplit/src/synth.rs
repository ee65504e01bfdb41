//! Procedural test scenes: convex combinations of piecewise-constant masks
//! and smooth shading fields, in `[0,1]`, fully deterministic.

use crate::error::Error;
use crate::grid::{GridSpec, Image2D};
use crate::Result;

/// Available synthetic scenes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scene {
    /// A bright cross in the dark under a soft radial light.
    CrossLight,
    /// Ellipse silhouettes over a circular intensity wave.
    EllipseWave,
    /// A disc with a smooth directional shade from the top-left.
    Globe,
    /// A square ring over a centered radial shade.
    SquareRing,
}

impl Scene {
    pub const ALL: [Scene; 4] = [
        Scene::CrossLight,
        Scene::EllipseWave,
        Scene::Globe,
        Scene::SquareRing,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scene::CrossLight => "cross-light",
            Scene::EllipseWave => "ellipse-wave",
            Scene::Globe => "globe",
            Scene::SquareRing => "square-ring",
        }
    }
}

impl std::str::FromStr for Scene {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cross-light" => Ok(Scene::CrossLight),
            "ellipse-wave" => Ok(Scene::EllipseWave),
            "globe" => Ok(Scene::Globe),
            "square-ring" => Ok(Scene::SquareRing),
            other => Err(Error::param(
                "scene",
                format!("unknown scene `{other}` (expected cross-light, ellipse-wave, globe, or square-ring)"),
            )),
        }
    }
}

/// The piecewise-constant mask of a scene (structure ground truth).
pub fn scene_mask(scene: Scene, size: usize) -> Result<Image2D> {
    let spec = checked_spec(size)?;
    let s = size as f64;
    let c = (s - 1.0) / 2.0;
    Ok(match scene {
        Scene::CrossLight => {
            let half_thick = 0.08 * s;
            let half_len = 0.33 * s;
            Image2D::from_fn(spec, |i, j| {
                let (x, y) = (i as f64 - c, j as f64 - c);
                let vertical = x.abs() <= half_len && y.abs() <= half_thick;
                let horizontal = y.abs() <= half_len && x.abs() <= half_thick;
                if vertical || horizontal {
                    0.9
                } else {
                    0.1
                }
            })
        }
        Scene::EllipseWave => Image2D::from_fn(spec, |i, j| {
            let (x, y) = (i as f64, j as f64);
            let e1 = {
                let (cx, cy) = (0.36 * s, 0.40 * s);
                let (a, b) = (0.17 * s, 0.11 * s);
                ((x - cx) / a).powi(2) + ((y - cy) / b).powi(2) <= 1.0
            };
            let e2 = {
                let (cx, cy) = (0.64 * s, 0.62 * s);
                let (a, b) = (0.11 * s, 0.19 * s);
                ((x - cx) / a).powi(2) + ((y - cy) / b).powi(2) <= 1.0
            };
            if e1 || e2 {
                0.85
            } else {
                0.15
            }
        }),
        Scene::Globe => {
            let radius = 0.30 * s;
            Image2D::from_fn(spec, |i, j| {
                let (x, y) = (i as f64 - c, j as f64 - c);
                if (x * x + y * y).sqrt() <= radius {
                    0.75
                } else {
                    0.12
                }
            })
        }
        Scene::SquareRing => {
            let outer = 0.36 * s;
            let inner = 0.18 * s;
            Image2D::from_fn(spec, |i, j| {
                let (x, y) = ((i as f64 - c).abs(), (j as f64 - c).abs());
                let in_outer = x <= outer && y <= outer;
                let in_inner = x <= inner && y <= inner;
                if in_outer && !in_inner {
                    0.9
                } else {
                    0.1
                }
            })
        }
    })
}

/// The smooth shading field of a scene (smooth ground truth), in `[0,1]`.
pub fn scene_shade(scene: Scene, size: usize) -> Result<Image2D> {
    let spec = checked_spec(size)?;
    let s = size as f64;
    let c = (s - 1.0) / 2.0;
    Ok(match scene {
        Scene::CrossLight => {
            let sigma = s / 3.0;
            Image2D::from_fn(spec, |i, j| {
                let (x, y) = (i as f64 - c, j as f64 - c);
                (-(x * x + y * y) / (2.0 * sigma * sigma)).exp()
            })
        }
        Scene::EllipseWave => {
            let wavelength = s / 2.5;
            Image2D::from_fn(spec, |i, j| {
                let (x, y) = (i as f64 - c, j as f64 - c);
                let r = (x * x + y * y).sqrt();
                0.5 * (1.0 + (2.0 * std::f64::consts::PI * r / wavelength).cos())
            })
        }
        Scene::Globe => {
            let (px, py) = (0.25 * s, 0.25 * s);
            let sigma = s / 2.0;
            Image2D::from_fn(spec, |i, j| {
                let (x, y) = (i as f64 - px, j as f64 - py);
                (-(x * x + y * y) / (2.0 * sigma * sigma)).exp()
            })
        }
        Scene::SquareRing => {
            // long-wavelength radial luminance wave: smooth ramps that a
            // piecewise-constant fit must staircase
            let wavelength = 0.4 * s;
            Image2D::from_fn(spec, |i, j| {
                let (x, y) = (i as f64 - c, j as f64 - c);
                let r = (x * x + y * y).sqrt();
                0.5 * (1.0 + (2.0 * std::f64::consts::PI * r / wavelength).cos())
            })
        }
    })
}

/// Mixing weight of the piecewise-constant mask in the final scene.
pub fn scene_mix(scene: Scene) -> f64 {
    match scene {
        Scene::CrossLight => 0.70,
        Scene::EllipseWave => 0.65,
        Scene::Globe => 0.70,
        Scene::SquareRing => 0.68,
    }
}

/// Generate a clean scene: `mix·mask + (1−mix)·shade`.
pub fn generate(scene: Scene, size: usize) -> Result<Image2D> {
    let mask = scene_mask(scene, size)?;
    let shade = scene_shade(scene, size)?;
    let mix = scene_mix(scene);
    Ok(Image2D::from_fn(mask.spec(), |i, j| {
        mix * mask.get(i, j) + (1.0 - mix) * shade.get(i, j)
    }))
}

fn checked_spec(size: usize) -> Result<GridSpec> {
    if size < 64 {
        return Err(Error::param("size", format!("scenes need size ≥ 64, got {size}")));
    }
    GridSpec::unit(size, size)
}
