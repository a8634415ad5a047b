//! Generation parameters, validation and the two published presets.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::contour::MAX_POLYGONS;
use crate::error::{Error, Result};
use crate::taxonomy::{TaxonomyRanges, MAX_CATEGORIES};

pub use crate::perturb::{PerturbMode, PerturbSpec};
pub use crate::raster::{Canvas, MaskType};
pub use crate::scene::ColorMode;

/// Full parameter set of one dataset.
///
/// `output_dir` is not part of the serialized record: the dataset root is
/// wherever `config.json` lives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub num_images: u64,
    pub instances_per_image: u32,
    pub mask_type: MaskType,
    pub color_mode: ColorMode,
    pub occlusion_radius: u32,
    /// Inclusive range each instance's polygon count is drawn from.
    pub polygons_range: (u32, u32),
    pub line_width: u32,
    pub num_categories: u32,
    pub canvas: Canvas,
    pub master_seed: u64,
    pub taxonomy_seed: u64,
    pub taxonomy_ranges: TaxonomyRanges,
    pub perturb: PerturbSpec,
    #[serde(skip)]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Investigation baseline: one instance, `K` in 1..=50, `r` = 512.
    Baseline,
    /// Best-performing combination: 32 instances, `K` in 1..=25, `r` = 400.
    Best,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Preset::Baseline),
            "best" => Ok(Preset::Best),
            other => Err(Error::invalid(format!("unknown preset {other:?}"))),
        }
    }
}

impl Preset {
    pub fn config(self) -> GenerationConfig {
        let common = GenerationConfig {
            num_images: 20_000,
            instances_per_image: 1,
            mask_type: MaskType::Skeleton,
            color_mode: ColorMode::Gray,
            occlusion_radius: 512,
            polygons_range: (1, 50),
            line_width: 1,
            num_categories: 255,
            canvas: Canvas::square(512),
            master_seed: 0,
            taxonomy_seed: 0,
            taxonomy_ranges: TaxonomyRanges::default(),
            perturb: PerturbSpec::NONE,
            output_dir: PathBuf::new(),
        };
        match self {
            Preset::Baseline => common,
            Preset::Best => GenerationConfig {
                num_images: 118_000,
                instances_per_image: 32,
                occlusion_radius: 400,
                polygons_range: (1, 25),
                ..common
            },
        }
    }
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Preset::Best.config()
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.num_images == 0 {
            return fail("number of images must be at least 1".into());
        }
        if self.instances_per_image == 0 {
            return fail("instances per image must be at least 1".into());
        }
        let (k_lo, k_hi) = self.polygons_range;
        if !(1 <= k_lo && k_lo <= k_hi && k_hi <= MAX_POLYGONS) {
            return fail(format!(
                "polygon range {k_lo}..={k_hi} must satisfy 1 <= lo <= hi <= {MAX_POLYGONS}"
            ));
        }
        if !(1..=3).contains(&self.line_width) {
            return fail(format!(
                "line width must be 1, 2 or 3 pixels, got {}",
                self.line_width
            ));
        }
        if self.num_categories == 0 || self.num_categories > MAX_CATEGORIES {
            return fail(format!(
                "number of categories must be in 1..={MAX_CATEGORIES}, got {}",
                self.num_categories
            ));
        }
        if self.occlusion_radius == 0 {
            return fail("occlusion radius must be positive".into());
        }
        self.canvas.validate()?;
        self.taxonomy_ranges.validate()?;
        if self.perturb.mode == PerturbMode::None && self.perturb.magnitude != 0 {
            return fail("perturbation magnitude given without a mode".into());
        }
        Ok(())
    }

    /// Factor mapping taxonomy radii (reference canvas) onto this canvas.
    pub fn radius_scale(&self) -> f64 {
        f64::from(self.canvas.width.min(self.canvas.height))
            / f64::from(self.taxonomy_ranges.reference_canvas)
    }

    /// Bit depth of the label PNGs: 8 for at most 255 categories, else 16.
    pub fn mask_bit_depth(&self) -> u8 {
        if self.num_categories <= 255 {
            8
        } else {
            16
        }
    }
}
