//! Deterministic, parallel generator of synthetic semantic-segmentation
//! datasets built from radial contours.
//!
//! Every image is composed of `M` instances. An instance is a stack of `K`
//! concentric polygons scaled from one noisy base shape, placed at a sampled
//! position and labelled with a category drawn from a seeded taxonomy. Each
//! image is paired with a label mask where only the frontmost instance's
//! category is visible at every pixel.
//!
//! Modules, bottom-up:
//!
//! - [`seed`]: counter-based seed derivation shared by every stage.
//! - [`noise`]: periodic 1-D gradient noise over the angle.
//! - [`taxonomy`]: category id to shape-parameter table.
//! - [`contour`]: radial contours (nested polygons).
//! - [`raster`]: skeleton / ring / fill rasterizers and their per-pixel oracle.
//! - [`perturb`]: annotation shift and inflation models.
//! - [`scene`]: placements, colors, frontmost-wins composition.
//! - [`config`]: generation parameters and presets.
//! - [`dataset`]: on-disk generation, validation, statistics and previews.

pub mod config;
pub mod contour;
pub mod dataset;
pub mod error;
pub mod noise;
pub mod perturb;
pub mod raster;
pub mod scene;
pub mod seed;
pub mod taxonomy;

pub use config::{Canvas, ColorMode, GenerationConfig, MaskType, PerturbMode, PerturbSpec, Preset};
pub use contour::{Point, Polygon, RadialContour};
pub use error::{Error, Result};
pub use raster::BinaryMask;
pub use raster::Position;
pub use scene::{ImageCanvas, Instance, LabelMask, Scene, SceneRecord};
pub use taxonomy::{CategorySpec, CategoryTable, TaxonomyRanges};
