//! `contourseg` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use contourseg::dataset::{self, codec, preview, GenerateOptions, ValidationOptions};
use contourseg::{Canvas, ColorMode, GenerationConfig, MaskType, PerturbSpec, Preset};

#[derive(Parser)]
#[command(
    name = "contourseg",
    version,
    about = "Synthetic segmentation datasets from radial contours"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a dataset to disk.
    Generate {
        #[command(flatten)]
        params: Params,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Keep image/mask pairs already present in --out.
        #[arg(long)]
        resume: bool,
        /// Write config.json only.
        #[arg(long)]
        dry_run: bool,
    },
    /// Check a dataset's structure and regenerate a sample bit-for-bit.
    Validate {
        dir: PathBuf,
        /// Entries to regenerate, spread evenly over the dataset.
        #[arg(long, default_value_t = 100)]
        regenerate: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Category frequencies, foreground coverage and overlap rate (JSON).
    Stats {
        dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Render an n x n grid of image/mask pairs into one PNG.
    Preview {
        #[command(flatten)]
        params: Params,
        /// Output PNG file.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        grid: u32,
    },
}

/// Generation parameters; anything not given comes from the preset.
#[derive(Args)]
struct Params {
    #[arg(long, value_parser = parse_with::<Preset>, default_value = "best")]
    preset: Preset,
    #[arg(long)]
    num_images: Option<u64>,
    /// Instances per image (M).
    #[arg(long)]
    instances: Option<u32>,
    /// m1 (skeleton), m2 (ring) or m3 (fill).
    #[arg(long, value_parser = parse_with::<MaskType>)]
    mask_type: Option<MaskType>,
    /// gray or random-rgb.
    #[arg(long, value_parser = parse_with::<ColorMode>)]
    color: Option<ColorMode>,
    /// Side of the square placement region, in pixels.
    #[arg(long)]
    occlusion_radius: Option<u32>,
    /// Polygon-count range, `LO-HI` or a single value.
    #[arg(long, value_parser = parse_range)]
    polygons: Option<(u32, u32)>,
    #[arg(long)]
    line_width: Option<u32>,
    #[arg(long)]
    categories: Option<u32>,
    /// `WxH` or a single side for a square canvas.
    #[arg(long, value_parser = parse_canvas)]
    canvas: Option<Canvas>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    taxonomy_seed: Option<u64>,
    /// Shift mask vertices by up to this many pixels.
    #[arg(long, conflicts_with = "perturb_inflate")]
    perturb_shift: Option<u32>,
    /// Inflate mask polygons outward by this many pixels.
    #[arg(long)]
    perturb_inflate: Option<u32>,
}

impl Params {
    fn resolve(&self) -> GenerationConfig {
        let mut c = self.preset.config();
        if let Some(v) = self.num_images {
            c.num_images = v;
        }
        if let Some(v) = self.instances {
            c.instances_per_image = v;
        }
        if let Some(v) = self.mask_type {
            c.mask_type = v;
        }
        if let Some(v) = self.color {
            c.color_mode = v;
        }
        if let Some(v) = self.occlusion_radius {
            c.occlusion_radius = v;
        }
        if let Some(v) = self.polygons {
            c.polygons_range = v;
        }
        if let Some(v) = self.line_width {
            c.line_width = v;
        }
        if let Some(v) = self.categories {
            c.num_categories = v;
        }
        if let Some(v) = self.canvas {
            c.canvas = v;
        }
        if let Some(v) = self.seed {
            c.master_seed = v;
        }
        if let Some(v) = self.taxonomy_seed {
            c.taxonomy_seed = v;
        }
        if let Some(m) = self.perturb_shift {
            c.perturb = PerturbSpec::shift(m);
        }
        if let Some(m) = self.perturb_inflate {
            c.perturb = PerturbSpec::inflation(m);
        }
        c
    }
}

fn parse_with<T: std::str::FromStr<Err = contourseg::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: contourseg::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once('-') {
        Some((lo, hi)) => Ok((num(lo)?, num(hi)?)),
        None => num(s).map(|v| (v, v)),
    }
}

fn parse_canvas(s: &str) -> Result<Canvas, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once(['x', 'X']) {
        Some((w, h)) => Ok(Canvas::new(num(w)?, num(h)?)),
        None => num(s).map(Canvas::square),
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate {
            params,
            out,
            workers,
            resume,
            dry_run,
        } => {
            let mut config = params.resolve();
            config.output_dir = out;
            let summary = dataset::generate_dataset(
                &config,
                GenerateOptions {
                    workers,
                    resume,
                    dry_run,
                },
            )?;
            if dry_run {
                println!(
                    "wrote {}",
                    summary.root.join(dataset::CONFIG_FILE).display()
                );
            } else {
                println!(
                    "{} entries in {} ({} rendered, {} reused)",
                    summary.entries,
                    summary.root.display(),
                    summary.rendered,
                    summary.skipped
                );
            }
            Ok(true)
        }
        Command::Validate {
            dir,
            regenerate,
            workers,
            json,
        } => {
            let report = dataset::validate_dataset(
                &dir,
                ValidationOptions {
                    regenerate,
                    workers,
                },
            )?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                for v in &report.violations {
                    println!("{v}");
                }
                println!(
                    "{} entries, {} regenerated, {} violations",
                    report.entries,
                    report.regenerated,
                    report.violations.len()
                );
            }
            Ok(report.is_clean())
        }
        Command::Stats { dir, workers } => {
            let report = dataset::dataset_stats(&dir, workers)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(true)
        }
        Command::Preview { params, out, grid } => {
            let config = params.resolve();
            let sheet = preview::render_preview(&config, grid)?;
            let bytes = codec::encode_image(&sheet)?;
            std::fs::write(&out, bytes).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {}", out.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
