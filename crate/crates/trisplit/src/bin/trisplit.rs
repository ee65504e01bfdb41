//! Command-line front end: decompose an image, synthesize test scenes, or
//! benchmark per-iteration scaling.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use trisplit::driver::{preset_alpha_n, DecompParams, ModelVariant};
use trisplit::io::{run_decompose, write_gray16, RunManifest};
use trisplit::synth::{generate, Scene};
use trisplit::Error;

#[derive(Parser)]
#[command(name = "trisplit", version, about = "Three-component grayscale image decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a grayscale image into structure + smooth + oscillation.
    Decompose(DecomposeArgs),
    /// Generate a deterministic synthetic test scene.
    Synth(SynthArgs),
    /// Measure per-iteration runtime across grid sizes.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Proposed,
    Model1,
    Model2,
    Model3,
}

impl From<VariantArg> for ModelVariant {
    fn from(v: VariantArg) -> ModelVariant {
        match v {
            VariantArg::Proposed => ModelVariant::Proposed,
            VariantArg::Model1 => ModelVariant::ModelI,
            VariantArg::Model2 => ModelVariant::ModelII,
            VariantArg::Model3 => ModelVariant::ModelIII,
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input image (grayscale 8/16-bit PNG or binary PGM).
    input: PathBuf,
    /// Clean reference image for PSNR reporting.
    #[arg(long)]
    clean_ref: Option<PathBuf>,
    /// Output directory for component images and metrics.json.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Gradient-sparsity weight.
    #[arg(long, default_value_t = 2e-3)]
    alpha0: f64,
    /// Level-line curvature weight.
    #[arg(long, default_value_t = 0.1)]
    alpha_curv: f64,
    /// Smooth-part weight.
    #[arg(long, default_value_t = 50.0)]
    alpha_w: f64,
    /// Oscillation weight.
    #[arg(long, default_value_t = 10.0, conflicts_with = "alpha_n_auto")]
    alpha_n: f64,
    /// Pick the oscillation weight from the noise level (needs --noise-sigma).
    #[arg(long, requires = "noise_sigma")]
    alpha_n_auto: bool,
    /// Time step of the splitting scheme.
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    /// Relative-change stopping threshold.
    #[arg(long, default_value_t = 1e-6)]
    rho: f64,
    /// Iteration cap.
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Model variant to run.
    #[arg(long, value_enum, default_value_t = VariantArg::Proposed)]
    variant: VariantArg,
    /// Symmetric padding width.
    #[arg(long, default_value_t = 30)]
    pad: usize,
    /// Additive Gaussian noise σ in 1/255 units (e.g. 20 for σ = 20/255).
    #[arg(long)]
    noise_sigma: Option<f64>,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write 8-bit PNGs instead of 16-bit.
    #[arg(long)]
    eight_bit: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Scene name (cross-light, ellipse-wave, globe, square-ring).
    #[arg(value_parser = parse_scene)]
    scene: Scene,
    /// Square image side length (≥ 64).
    #[arg(long, default_value_t = 256)]
    size: usize,
    /// Output PNG path.
    #[arg(long)]
    out: PathBuf,
}

fn parse_scene(s: &str) -> Result<Scene, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated grid sizes (powers of two, ≥ 64).
    #[arg(long, value_delimiter = ',', default_values_t = [128usize, 256])]
    sizes: Vec<usize>,
    /// Timed repetitions per size.
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    /// Iterations measured per repetition.
    #[arg(long, default_value_t = 8)]
    iters: usize,
    /// Also write the timing table as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 2,
        Error::Divergence { .. } => 3,
        _ => 1,
    }
}

fn cmd_decompose(args: DecomposeArgs) -> Result<(), Error> {
    let alpha_n = if args.alpha_n_auto {
        preset_alpha_n(args.noise_sigma.expect("clap enforces the pairing"))
    } else {
        args.alpha_n
    };
    let params = DecompParams {
        alpha0: args.alpha0,
        alpha_curv: args.alpha_curv,
        alpha_w: args.alpha_w,
        alpha_n,
        tau: args.tau,
        rho: args.rho,
        iter_max: args.max_iters,
        pad_width: args.pad,
        variant: args.variant.into(),
        ..DecompParams::default()
    };
    let manifest = RunManifest {
        input: args.input,
        clean_ref: args.clean_ref,
        params,
        noise_sigma: args.noise_sigma,
        seed: args.seed,
        out_dir: args.out_dir,
        eight_bit: args.eight_bit,
    };
    let report = run_decompose(&manifest)?;
    println!(
        "iterations: {}  elapsed: {:.2}s  std(n): {:.5}",
        report.iterations, report.elapsed_seconds, report.std_n
    );
    if let Some(p) = report.psnr_noisy_input {
        println!("psnr(noisy input): {p:.2} dB");
    }
    if let Some(p) = report.psnr_u {
        println!("psnr(u): {p:.2} dB");
    }
    println!("outputs written to {}", manifest.out_dir.display());
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<(), Error> {
    let img = generate(args.scene, args.size)?;
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_gray16(&img, &args.out)?;
    println!(
        "wrote {} ({} scene, {}x{})",
        args.out.display(),
        args.scene.name(),
        args.size,
        args.size
    );
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Error> {
    let report = trisplit::bench::run_bench(
        &args.sizes,
        &DecompParams::default(),
        args.repeats,
        args.iters,
    )?;
    println!("{:>8}  {:>16}", "size", "sec/iteration");
    for t in &report.timings {
        println!("{:>8}  {:>16.6}", t.size, t.per_iter_seconds);
    }
    println!("fitted exponent vs pixel count: {:.3}", report.fitted_exponent);
    if let Some(path) = args.json {
        let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(&path, json)?;
        println!("timing table written to {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(args) => cmd_decompose(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
