//! Structural and regeneration checks over an on-disk dataset.

use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    codec, expected_seed, image_rel_path, load_dataset_record, mask_rel_path, read_manifest_lines,
    ManifestEntry,
};
use crate::config::GenerationConfig;
use crate::error::Result;
use crate::scene;
use crate::taxonomy::CategoryTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    TaxonomyMismatch,
    EntryCount,
    MalformedEntry,
    IndexSequence,
    SeedMismatch,
    PathMismatch,
    MissingFile,
    UnreadableFile,
    Dimensions,
    BitDepth,
    LabelDomain,
    RecordMismatch,
    ImageMismatch,
    MaskMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: Option<u64>,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "[{:?}] entry {i}: {}", self.kind, self.detail),
            None => write!(f, "[{:?}] {}", self.kind, self.detail),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Number of entries regenerated and compared bit-for-bit, spread evenly
    /// over the dataset. 0 disables regeneration.
    pub regenerate: u64,
    /// Worker threads; 0 uses all available cores.
    pub workers: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            regenerate: 100,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub entries: u64,
    pub regenerated: u64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Evenly spaced sample of `n` indices out of `total`.
pub fn sample_indices(total: u64, n: u64) -> Vec<u64> {
    if n >= total {
        return (0..total).collect();
    }
    (0..n).map(|k| k * total / n).collect()
}

struct Checker<'a> {
    root: &'a Path,
    config: &'a GenerationConfig,
    table: &'a CategoryTable,
}

impl Checker<'_> {
    fn check_entry(&self, entry: &ManifestEntry, regenerate: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        let idx = Some(entry.index);
        let mut push = |kind, detail: String| {
            out.push(Violation {
                index: idx,
                kind,
                detail,
            })
        };
        let config = self.config;

        if entry.seed != expected_seed(config, entry.index) {
            push(
                ViolationKind::SeedMismatch,
                format!("seed {} is not derived from the master seed", entry.seed),
            );
        }
        if entry.image != image_rel_path(entry.index) || entry.mask != mask_rel_path(entry.index) {
            push(
                ViolationKind::PathMismatch,
                format!("unexpected paths {} / {}", entry.image, entry.mask),
            );
        }
        if entry.instances.len() != config.instances_per_image as usize {
            push(
                ViolationKind::RecordMismatch,
                format!(
                    "{} instances recorded, {} configured",
                    entry.instances.len(),
                    config.instances_per_image
                ),
            );
        }

        let read = |rel: &str, push: &mut dyn FnMut(ViolationKind, String)| -> Option<Vec<u8>> {
            let path = self.root.join(rel);
            if !path.is_file() {
                push(ViolationKind::MissingFile, format!("{rel} does not exist"));
                return None;
            }
            match fs::read(&path) {
                Ok(b) => Some(b),
                Err(e) => {
                    push(ViolationKind::UnreadableFile, format!("{rel}: {e}"));
                    None
                }
            }
        };

        let image = read(&entry.image, &mut push).and_then(|bytes| {
            match codec::decode_image(&bytes, Path::new(&entry.image)) {
                Ok(img) => Some(img),
                Err(e) => {
                    push(ViolationKind::UnreadableFile, e.to_string());
                    None
                }
            }
        });
        let mask = read(&entry.mask, &mut push).and_then(|bytes| {
            match codec::decode_mask(&bytes, Path::new(&entry.mask)) {
                Ok(m) => Some(m),
                Err(e) => {
                    push(ViolationKind::UnreadableFile, e.to_string());
                    None
                }
            }
        });

        let (w, h) = (config.canvas.width, config.canvas.height);
        if let Some(img) = &image {
            if (img.width, img.height) != (w, h) {
                push(
                    ViolationKind::Dimensions,
                    format!("image is {}x{}, expected {w}x{h}", img.width, img.height),
                );
            }
        }
        if let Some(decoded) = &mask {
            let m = &decoded.mask;
            if (m.width, m.height) != (w, h) {
                push(
                    ViolationKind::Dimensions,
                    format!("mask is {}x{}, expected {w}x{h}", m.width, m.height),
                );
            }
            if decoded.bit_depth != config.mask_bit_depth() {
                push(
                    ViolationKind::BitDepth,
                    format!(
                        "mask is {}-bit, expected {}-bit",
                        decoded.bit_depth,
                        config.mask_bit_depth()
                    ),
                );
            }
            let c = config.num_categories;
            let bad = m.labels.iter().filter(|&&l| u32::from(l) > c).count();
            if bad > 0 {
                push(
                    ViolationKind::LabelDomain,
                    format!(
                        "{bad} pixels carry labels above {c} (max {})",
                        m.max_label()
                    ),
                );
            }
        }

        if regenerate {
            match scene::build_scene(config, self.table, entry.index) {
                Ok(scene) => {
                    if scene.record.instances != entry.instances || scene.image_seed != entry.seed {
                        push(
                            ViolationKind::RecordMismatch,
                            "recorded draws differ from regeneration".into(),
                        );
                    }
                    if let Some(img) = &image {
                        if *img != scene.image {
                            push(
                                ViolationKind::ImageMismatch,
                                "stored image differs from regeneration".into(),
                            );
                        }
                    }
                    if let Some(decoded) = &mask {
                        if decoded.mask != scene.mask {
                            push(
                                ViolationKind::MaskMismatch,
                                "stored mask differs from regeneration".into(),
                            );
                        }
                    }
                }
                Err(e) => push(
                    ViolationKind::RecordMismatch,
                    format!("cannot regenerate: {e}"),
                ),
            }
        }
        out
    }
}

/// Checks every manifest entry and regenerates a sample of them.
///
/// Returns `Err` only when the dataset cannot be read at all (missing or
/// malformed `config.json`, missing manifest); everything else is reported as
/// a [`Violation`].
pub fn validate_dataset(root: &Path, options: ValidationOptions) -> Result<ValidationReport> {
    let (record, table) = load_dataset_record(root)?;
    let config = &record.config;
    let lines = read_manifest_lines(root)?;
    let mut violations = Vec::new();

    if record.taxonomy != table.to_lines() {
        violations.push(Violation {
            index: None,
            kind: ViolationKind::TaxonomyMismatch,
            detail: "embedded taxonomy differs from the one rebuilt from the seed".into(),
        });
    }
    if lines.len() as u64 != config.num_images {
        violations.push(Violation {
            index: None,
            kind: ViolationKind::EntryCount,
            detail: format!(
                "{} manifest entries, {} images configured",
                lines.len(),
                config.num_images
            ),
        });
    }

    let mut entries = Vec::with_capacity(lines.len());
    for (line_no, line) in lines.into_iter().enumerate() {
        match line {
            Ok(entry) => {
                if entry.index != line_no as u64 {
                    violations.push(Violation {
                        index: Some(entry.index),
                        kind: ViolationKind::IndexSequence,
                        detail: format!("found at manifest line {}", line_no + 1),
                    });
                }
                entries.push(entry);
            }
            Err(e) => violations.push(Violation {
                index: None,
                kind: ViolationKind::MalformedEntry,
                detail: format!("manifest line {}: {e}", line_no + 1),
            }),
        }
    }

    let sample: std::collections::HashSet<u64> =
        sample_indices(config.num_images, options.regenerate)
            .into_iter()
            .collect();
    let checker = Checker {
        root,
        config,
        table: &table,
    };
    let pool = super::thread_pool(options.workers)?;
    let per_entry: Vec<Vec<Violation>> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| {
                let in_range = e.index < config.num_images;
                checker.check_entry(e, in_range && sample.contains(&e.index))
            })
            .collect()
    });
    let regenerated = entries.iter().filter(|e| sample.contains(&e.index)).count() as u64;
    violations.extend(per_entry.into_iter().flatten());

    Ok(ValidationReport {
        entries: entries.len() as u64,
        regenerated,
        violations,
    })
}
