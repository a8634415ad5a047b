//! Scene sampling and frontmost-wins composition.

use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::GenerationConfig;
use crate::contour::{build_radial_contour, RadialContour};
use crate::error::{Error, Result};
use crate::raster::{self, BinaryMask, Canvas, MaskType, Position};
use crate::seed::{self, tag};
use crate::taxonomy::CategoryTable;

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ColorMode {
    #[serde(rename = "gray")]
    Gray,
    #[serde(rename = "random-rgb")]
    RandomRgb,
}

impl FromStr for ColorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gray" | "grayscale" => Ok(ColorMode::Gray),
            "random-rgb" | "rgb" | "color" => Ok(ColorMode::RandomRgb),
            other => Err(Error::invalid(format!("unknown color mode {other:?}"))),
        }
    }
}

/// One positioned, labelled contour. `mask_contour`, when set, replaces
/// `contour` for label-mask rasterization (annotation perturbation).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub contour: RadialContour,
    pub mask_contour: Option<RadialContour>,
    pub position: Position,
    pub category: u32,
    /// 1-based, back to front.
    pub depth: u32,
    pub color: Rgb,
}

impl Instance {
    pub fn mask_geometry(&self) -> &RadialContour {
        self.mask_contour.as_ref().unwrap_or(&self.contour)
    }
}

/// Per-pixel category labels, row-major. 0 is background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMask {
    pub width: u32,
    pub height: u32,
    pub labels: Vec<u16>,
}

impl LabelMask {
    pub fn zeros(canvas: Canvas) -> Self {
        Self {
            width: canvas.width,
            height: canvas.height,
            labels: vec![0; canvas.pixel_count()],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> u16 {
        self.labels[y as usize * self.width as usize + x as usize]
    }

    pub fn max_label(&self) -> u16 {
        self.labels.iter().copied().max().unwrap_or(0)
    }
}

/// RGB image, row-major, 3 bytes per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageCanvas {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl ImageCanvas {
    pub fn black(canvas: Canvas) -> Self {
        Self {
            width: canvas.width,
            height: canvas.height,
            pixels: vec![0; canvas.pixel_count() * 3],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> Rgb {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }
}

/// Samples `count` contour centers uniformly from the `r x r` square centered
/// on the canvas, clipped to the canvas. Sequence order is depth order.
pub fn sample_placements<R: Rng + ?Sized>(
    count: u32,
    occlusion_radius: u32,
    canvas: Canvas,
    rng: &mut R,
) -> Result<Vec<Position>> {
    canvas.validate()?;
    let (x0, x1) = placement_span(occlusion_radius, canvas.width)?;
    let (y0, y1) = placement_span(occlusion_radius, canvas.height)?;
    Ok((0..count)
        .map(|_| Position::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1)))
        .collect())
}

/// Half-open integer range of the centered span of length `side`, clipped to `[0, extent)`.
pub fn placement_span(side: u32, extent: u32) -> Result<(i32, i32)> {
    if side == 0 {
        return Err(Error::invalid(
            "occlusion radius must be at least one pixel",
        ));
    }
    let lo = (i64::from(extent) - i64::from(side)).div_euclid(2);
    let hi = lo + i64::from(side);
    let (lo, hi) = (lo.max(0), hi.min(i64::from(extent)));
    if hi <= lo {
        return Err(Error::invalid(format!(
            "placement span of {side} px is empty on a {extent} px axis"
        )));
    }
    Ok((lo as i32, hi as i32))
}

pub fn assign_colors<R: Rng + ?Sized>(count: u32, mode: ColorMode, rng: &mut R) -> Vec<Rgb> {
    match mode {
        ColorMode::Gray => vec![WHITE; count as usize],
        ColorMode::RandomRgb => (0..count)
            .map(|_| [rng.gen(), rng.gen(), rng.gen()])
            .collect(),
    }
}

/// Composes instances (backmost first) into an image and a label mask.
///
/// The label at each pixel is the category of the highest-depth instance
/// whose `mask_type` support covers it. The image always shows skeleton
/// strokes in each instance's color with the same frontmost-wins rule.
pub fn compose_scene(
    instances: &[Instance],
    mask_type: MaskType,
    line_width: u32,
    canvas: Canvas,
) -> Result<(ImageCanvas, LabelMask)> {
    canvas.validate()?;
    if line_width == 0 {
        return Err(Error::invalid("line width must be positive"));
    }
    let mut image = ImageCanvas::black(canvas);
    let mut labels = LabelMask::zeros(canvas);
    let mut stroke = BinaryMask::zeros(canvas);
    let mut support = BinaryMask::zeros(canvas);
    for inst in instances {
        if inst.category == 0 || inst.category > u32::from(u16::MAX) {
            return Err(Error::invalid(format!(
                "instance category {} is not a label",
                inst.category
            )));
        }
        raster::raster_into(
            &inst.contour,
            inst.position,
            MaskType::Skeleton,
            line_width,
            &mut stroke,
        );
        for (px, &bit) in image.pixels.chunks_exact_mut(3).zip(&stroke.bits) {
            if bit != 0 {
                px.copy_from_slice(&inst.color);
            }
        }
        let mask_bits = if mask_type == MaskType::Skeleton && inst.mask_contour.is_none() {
            &stroke
        } else {
            raster::raster_into(
                inst.mask_geometry(),
                inst.position,
                mask_type,
                line_width,
                &mut support,
            );
            &support
        };
        let label = inst.category as u16;
        for (l, &bit) in labels.labels.iter_mut().zip(&mask_bits.bits) {
            if bit != 0 {
                *l = label;
            }
        }
    }
    Ok((image, labels))
}

/// Per-instance draws, sufficient to regenerate the instance exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub depth: u32,
    pub category_id: u32,
    pub position: Position,
    pub polygons: u32,
    pub resize: f64,
    pub color: Rgb,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneRecord {
    pub instances: Vec<InstanceRecord>,
}

/// A generated image, its label mask and the draws that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub image_seed: u64,
    pub image: ImageCanvas,
    pub mask: LabelMask,
    pub record: SceneRecord,
}

/// Samples the instances of image `index` without rendering them.
pub fn sample_instances(
    config: &GenerationConfig,
    table: &CategoryTable,
    index: u64,
) -> Result<(u64, Vec<Instance>)> {
    if index >= config.num_images {
        return Err(Error::invalid(format!(
            "image index {index} out of range for {} images",
            config.num_images
        )));
    }
    if table.num_categories != config.num_categories {
        return Err(Error::invalid(format!(
            "taxonomy has {} categories, configuration expects {}",
            table.num_categories, config.num_categories
        )));
    }
    let image_seed = seed::derive_image_seed(config.master_seed, index);
    let m = config.instances_per_image;
    let (k_lo, k_hi) = config.polygons_range;

    let mut rng = seed::stream(seed::derive(image_seed, tag::CATEGORIES));
    let categories: Vec<u32> = (0..m)
        .map(|_| rng.gen_range(1..=config.num_categories))
        .collect();
    let mut rng = seed::stream(seed::derive(image_seed, tag::POLYGON_COUNTS));
    let polygon_counts: Vec<u32> = (0..m).map(|_| rng.gen_range(k_lo..=k_hi)).collect();
    let positions = sample_placements(
        m,
        config.occlusion_radius,
        config.canvas,
        &mut seed::stream(seed::derive(image_seed, tag::PLACEMENTS)),
    )?;
    let colors = assign_colors(
        m,
        config.color_mode,
        &mut seed::stream(seed::derive(image_seed, tag::COLORS)),
    );

    let scale = config.radius_scale();
    let instances = (0..m as usize)
        .map(|j| {
            let instance_seed = seed::derive(image_seed, j as u64);
            instance_from_draws(
                config,
                table,
                scale,
                j as u32 + 1,
                categories[j],
                polygon_counts[j],
                positions[j],
                colors[j],
                instance_seed,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((image_seed, instances))
}

#[allow(clippy::too_many_arguments)]
fn instance_from_draws(
    config: &GenerationConfig,
    table: &CategoryTable,
    scale: f64,
    depth: u32,
    category: u32,
    polygons: u32,
    position: Position,
    color: Rgb,
    instance_seed: u64,
) -> Result<Instance> {
    let spec = table.lookup(category)?.scaled(scale);
    let contour = build_radial_contour(&spec, polygons, &mut seed::stream(instance_seed))?;
    let mask_contour = if config.perturb.is_identity() {
        None
    } else {
        let mut rng = seed::stream(seed::derive(instance_seed, tag::SHIFT));
        Some(config.perturb.apply(&contour, &mut rng))
    };
    Ok(Instance {
        contour,
        mask_contour,
        position,
        category,
        depth,
        color,
    })
}

/// Rebuilds the instances of a scene from its record.
pub fn instances_from_record(
    config: &GenerationConfig,
    table: &CategoryTable,
    record: &SceneRecord,
) -> Result<Vec<Instance>> {
    let scale = config.radius_scale();
    record
        .instances
        .iter()
        .map(|r| {
            instance_from_draws(
                config,
                table,
                scale,
                r.depth,
                r.category_id,
                r.polygons,
                r.position,
                r.color,
                r.seed,
            )
        })
        .collect()
}

pub fn record_of(instances: &[Instance], image_seed: u64) -> SceneRecord {
    SceneRecord {
        instances: instances
            .iter()
            .enumerate()
            .map(|(j, inst)| InstanceRecord {
                depth: inst.depth,
                category_id: inst.category,
                position: inst.position,
                polygons: inst.contour.polygon_count(),
                resize: inst.contour.resize,
                color: inst.color,
                seed: seed::derive(image_seed, j as u64),
            })
            .collect(),
    }
}

/// Generates image `index` of the dataset described by `config`.
pub fn build_scene(config: &GenerationConfig, table: &CategoryTable, index: u64) -> Result<Scene> {
    let (image_seed, instances) = sample_instances(config, table, index)?;
    let (image, mask) = compose_scene(
        &instances,
        config.mask_type,
        config.line_width,
        config.canvas,
    )?;
    Ok(Scene {
        image_seed,
        image,
        mask,
        record: record_of(&instances, image_seed),
    })
}

#[cfg(test)]
mod tests;
