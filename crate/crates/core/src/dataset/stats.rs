//! Dataset statistics: category frequencies, foreground coverage and
//! instance overlap.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{codec, load_dataset_record, read_manifest, ManifestEntry};
use crate::config::GenerationConfig;
use crate::error::{Error, Result};
use crate::raster::{self, BinaryMask};
use crate::scene::{self, SceneRecord};
use crate::taxonomy::CategoryTable;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub min: f64,
    pub mean: f64,
    pub p10: f64,
    pub p50: f64,
    pub p90: f64,
    pub max: f64,
}

impl Distribution {
    fn of(mut values: Vec<f64>) -> Distribution {
        if values.is_empty() {
            return Distribution {
                min: 0.0,
                mean: 0.0,
                p10: 0.0,
                p50: 0.0,
                p90: 0.0,
                max: 0.0,
            };
        }
        values.sort_by(f64::total_cmp);
        let n = values.len();
        let q = |p: f64| values[((p * (n - 1) as f64).round() as usize).min(n - 1)];
        Distribution {
            min: values[0],
            mean: values.iter().sum::<f64>() / n as f64,
            p10: q(0.1),
            p50: q(0.5),
            p90: q(0.9),
            max: values[n - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub images: u64,
    pub num_categories: u32,
    /// Index `c` holds the count for label `c`; index 0 is background.
    pub pixels_per_category: Vec<u64>,
    /// Index `c` holds the instance count of category `c`; index 0 is unused.
    pub instances_per_category: Vec<u64>,
    pub categories_present: u32,
    pub foreground_ratio: Distribution,
    /// Pixels covered by two or more instance supports over pixels covered by
    /// at least one, summed over the dataset.
    pub overlap_rate: f64,
    pub covered_pixels: u64,
    pub overlapped_pixels: u64,
    /// Images with any pixel whose channels differ.
    pub images_with_chroma: u64,
}

/// `(covered by >= 1, covered by >= 2)` supports of the scene's mask type.
pub fn scene_overlap(
    config: &GenerationConfig,
    table: &CategoryTable,
    record: &SceneRecord,
) -> Result<(u64, u64)> {
    let instances = scene::instances_from_record(config, table, record)?;
    let mut counts = vec![0u8; config.canvas.pixel_count()];
    let mut support = BinaryMask::zeros(config.canvas);
    for inst in &instances {
        raster::raster_into(
            inst.mask_geometry(),
            inst.position,
            config.mask_type,
            config.line_width,
            &mut support,
        );
        for (c, &b) in counts.iter_mut().zip(&support.bits) {
            *c = c.saturating_add(b);
        }
    }
    let covered = counts.iter().filter(|&&c| c >= 1).count() as u64;
    let overlapped = counts.iter().filter(|&&c| c >= 2).count() as u64;
    Ok((covered, overlapped))
}

struct ImageStats {
    pixels: Vec<u64>,
    instances: Vec<u64>,
    foreground_ratio: f64,
    covered: u64,
    overlapped: u64,
    chroma: bool,
}

fn image_stats(
    root: &Path,
    config: &GenerationConfig,
    table: &CategoryTable,
    entry: &ManifestEntry,
) -> Result<ImageStats> {
    let c = config.num_categories as usize;
    let mask_path = root.join(&entry.mask);
    let bytes = fs::read(&mask_path)
        .map_err(|e| Error::io(format!("reading {}", mask_path.display()), e))?;
    let mask = codec::decode_mask(&bytes, &mask_path)?.mask;
    let mut pixels = vec![0u64; c + 1];
    for &l in &mask.labels {
        let l = l as usize;
        if l > c {
            return Err(Error::malformed(
                mask_path.display().to_string(),
                format!("label {l} above {c}; run validate"),
            ));
        }
        pixels[l] += 1;
    }
    let total = mask.labels.len() as f64;
    let foreground_ratio = (total - pixels[0] as f64) / total;

    let image_path = root.join(&entry.image);
    let bytes = fs::read(&image_path)
        .map_err(|e| Error::io(format!("reading {}", image_path.display()), e))?;
    let image = codec::decode_image(&bytes, &image_path)?;
    let chroma = image
        .pixels
        .chunks_exact(3)
        .any(|p| p[0] != p[1] || p[1] != p[2]);

    let mut instances = vec![0u64; c + 1];
    for inst in &entry.instances {
        if let Some(slot) = instances.get_mut(inst.category_id as usize) {
            *slot += 1;
        }
    }
    let record = SceneRecord {
        instances: entry.instances.clone(),
    };
    let (covered, overlapped) = scene_overlap(config, table, &record)?;
    Ok(ImageStats {
        pixels,
        instances,
        foreground_ratio,
        covered,
        overlapped,
        chroma,
    })
}

/// Computes statistics over every entry of the dataset at `root`.
pub fn dataset_stats(root: &Path, workers: usize) -> Result<StatsReport> {
    let (record, table) = load_dataset_record(root)?;
    let config = &record.config;
    let entries = read_manifest(root)?;
    let pool = super::thread_pool(workers)?;
    let per_image: Vec<ImageStats> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| image_stats(root, config, &table, e))
            .collect::<Result<Vec<_>>>()
    })?;

    let c = config.num_categories as usize;
    let mut pixels = vec![0u64; c + 1];
    let mut instances = vec![0u64; c + 1];
    let (mut covered, mut overlapped, mut chroma) = (0u64, 0u64, 0u64);
    let mut ratios = Vec::with_capacity(per_image.len());
    for s in per_image {
        for (a, b) in pixels.iter_mut().zip(&s.pixels) {
            *a += b;
        }
        for (a, b) in instances.iter_mut().zip(&s.instances) {
            *a += b;
        }
        covered += s.covered;
        overlapped += s.overlapped;
        chroma += u64::from(s.chroma);
        ratios.push(s.foreground_ratio);
    }
    let categories_present = instances.iter().skip(1).filter(|&&n| n > 0).count() as u32;
    Ok(StatsReport {
        images: entries.len() as u64,
        num_categories: config.num_categories,
        pixels_per_category: pixels,
        instances_per_category: instances,
        categories_present,
        foreground_ratio: Distribution::of(ratios),
        overlap_rate: if covered == 0 {
            0.0
        } else {
            overlapped as f64 / covered as f64
        },
        covered_pixels: covered,
        overlapped_pixels: overlapped,
        images_with_chroma: chroma,
    })
}
