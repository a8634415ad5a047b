//! On-disk datasets: generation, manifests, validation and statistics.
//!
//! Layout of a dataset directory:
//!
//! ```text
//! config.json          resolved configuration + taxonomy table
//! manifest.jsonl       one record per image, in index order
//! images/00000000.png  8-bit RGB
//! masks/00000000.png   8-bit (C <= 255) or 16-bit single-channel labels
//! ```

pub mod codec;
pub mod preview;
pub mod stats;
pub mod validate;

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::GenerationConfig;
use crate::error::{Error, Result};
use crate::scene::{self, InstanceRecord};
use crate::seed;
use crate::taxonomy::{build_taxonomy_with, CategoryTable};

pub use stats::{dataset_stats, StatsReport};
pub use validate::{
    validate_dataset, ValidationOptions, ValidationReport, Violation, ViolationKind,
};

pub const CONFIG_FILE: &str = "config.json";
pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const IMAGES_DIR: &str = "images";
pub const MASKS_DIR: &str = "masks";
pub const FORMAT: &str = "contourseg-dataset/1";

/// Images are produced in blocks of this many indices; each block is
/// rendered in parallel and appended to the manifest in order.
const BLOCK: u64 = 1024;

/// Contents of `config.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub format: String,
    pub config: GenerationConfig,
    /// Category table, one line per category (see [`CategoryTable::to_lines`]).
    pub taxonomy: Vec<String>,
}

impl DatasetRecord {
    pub fn new(config: &GenerationConfig, table: &CategoryTable) -> Self {
        Self {
            format: FORMAT.to_string(),
            config: config.clone(),
            taxonomy: table.to_lines(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}

/// One line of `manifest.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: u64,
    pub seed: u64,
    pub image: String,
    pub mask: String,
    pub instances: Vec<InstanceRecord>,
}

pub fn image_rel_path(index: u64) -> String {
    format!("{IMAGES_DIR}/{index:08}.png")
}

pub fn mask_rel_path(index: u64) -> String {
    format!("{MASKS_DIR}/{index:08}.png")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GenerateOptions {
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
    /// Keep image/mask pairs that already exist instead of re-rendering them.
    pub resume: bool,
    /// Only write `config.json`.
    pub dry_run: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationSummary {
    pub root: PathBuf,
    pub entries: u64,
    pub rendered: u64,
    pub skipped: u64,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(format!("writing {}", tmp.display()), e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(format!("renaming {}", tmp.display()), e))
}

/// Loads `config.json` and rebuilds the taxonomy it names.
pub fn load_dataset_record(root: &Path) -> Result<(DatasetRecord, CategoryTable)> {
    let path = root.join(CONFIG_FILE);
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let record: DatasetRecord = serde_json::from_str(&text)
        .map_err(|e| Error::malformed(path.display().to_string(), e.to_string()))?;
    record.config.validate()?;
    let table = build_taxonomy_with(
        record.config.num_categories,
        record.config.taxonomy_seed,
        &record.config.taxonomy_ranges,
    )?;
    Ok((record, table))
}

/// Reads `manifest.jsonl`. Each line is returned as parsed or as the parse error text.
pub fn read_manifest_lines(root: &Path) -> Result<Vec<std::result::Result<ManifestEntry, String>>> {
    let path = root.join(MANIFEST_FILE);
    let file =
        fs::File::open(&path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str::<ManifestEntry>(&line).map_err(|e| e.to_string()));
    }
    Ok(out)
}

/// Reads `manifest.jsonl`, failing on the first malformed line.
pub fn read_manifest(root: &Path) -> Result<Vec<ManifestEntry>> {
    read_manifest_lines(root)?
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Error::malformed(format!("manifest line {}", i + 1), e)))
        .collect()
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start {workers} workers: {e}")))
}

/// Renders and writes one image/mask pair, or reuses it when resuming.
fn produce_entry(
    config: &GenerationConfig,
    table: &CategoryTable,
    root: &Path,
    index: u64,
    resume: bool,
) -> Result<(ManifestEntry, bool)> {
    let image_rel = image_rel_path(index);
    let mask_rel = mask_rel_path(index);
    let image_path = root.join(&image_rel);
    let mask_path = root.join(&mask_rel);
    let (image_seed, record, rendered) = if resume && image_path.is_file() && mask_path.is_file() {
        let (image_seed, instances) = scene::sample_instances(config, table, index)?;
        (image_seed, scene::record_of(&instances, image_seed), false)
    } else {
        let scene = scene::build_scene(config, table, index)?;
        write_atomic(&image_path, &codec::encode_image(&scene.image)?)?;
        write_atomic(
            &mask_path,
            &codec::encode_mask(&scene.mask, config.mask_bit_depth())?,
        )?;
        (scene.image_seed, scene.record, true)
    };
    let entry = ManifestEntry {
        index,
        seed: image_seed,
        image: image_rel,
        mask: mask_rel,
        instances: record.instances,
    };
    Ok((entry, rendered))
}

/// Generates the dataset described by `config` into `config.output_dir`.
///
/// Output bytes depend only on `config`: every image is a pure function of
/// `(config, index)` and the manifest is written in index order, so the worker
/// count never changes the result.
pub fn generate_dataset(
    config: &GenerationConfig,
    options: GenerateOptions,
) -> Result<GenerationSummary> {
    config.validate()?;
    let table = build_taxonomy_with(
        config.num_categories,
        config.taxonomy_seed,
        &config.taxonomy_ranges,
    )?;
    let root = config.output_dir.clone();
    let record_json = DatasetRecord::new(config, &table).to_json();

    let config_path = root.join(CONFIG_FILE);
    if options.resume && config_path.is_file() {
        let existing = fs::read_to_string(&config_path)
            .map_err(|e| Error::io(format!("reading {}", config_path.display()), e))?;
        if existing != record_json {
            return Err(Error::invalid(format!(
                "cannot resume: {} describes a different configuration",
                config_path.display()
            )));
        }
    }
    for dir in [root.clone(), root.join(IMAGES_DIR), root.join(MASKS_DIR)] {
        fs::create_dir_all(&dir)
            .map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    }
    write_atomic(&config_path, record_json.as_bytes())?;
    if options.dry_run {
        return Ok(GenerationSummary {
            root,
            entries: 0,
            rendered: 0,
            skipped: 0,
        });
    }

    let pool = thread_pool(options.workers)?;
    let total = config.num_images;
    let written = AtomicUsize::new(0);
    let manifest_tmp = root.join(format!("{MANIFEST_FILE}.tmp"));
    let file = fs::File::create(&manifest_tmp)
        .map_err(|e| Error::io(format!("creating {}", manifest_tmp.display()), e))?;
    let mut manifest = BufWriter::new(file);
    let mut rendered = 0u64;

    let abort = |source: Error, written: &AtomicUsize| Error::Aborted {
        written: written.load(Ordering::Relaxed),
        total: total as usize,
        source: Box::new(source),
    };

    let mut start = 0u64;
    while start < total {
        let end = (start + BLOCK).min(total);
        let block: Vec<(ManifestEntry, bool)> = pool
            .install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|index| {
                        let out = produce_entry(config, &table, &root, index, options.resume)?;
                        written.fetch_add(1, Ordering::Relaxed);
                        Ok(out)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .map_err(|e| abort(e, &written))?;
        for (entry, fresh) in &block {
            rendered += u64::from(*fresh);
            let line = serde_json::to_string(entry).expect("manifest entry serializes");
            writeln!(manifest, "{line}")
                .map_err(|e| abort(Error::io("writing manifest", e), &written))?;
        }
        start = end;
    }
    manifest
        .flush()
        .map_err(|e| abort(Error::io("flushing manifest", e), &written))?;
    drop(manifest);
    fs::rename(&manifest_tmp, root.join(MANIFEST_FILE))
        .map_err(|e| abort(Error::io("finalizing manifest", e), &written))?;

    Ok(GenerationSummary {
        root,
        entries: total,
        rendered,
        skipped: total - rendered,
    })
}

/// Image seed of every index, for cross-checking manifests.
pub fn expected_seed(config: &GenerationConfig, index: u64) -> u64 {
    seed::derive_image_seed(config.master_seed, index)
}
