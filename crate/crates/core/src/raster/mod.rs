//! Binary rasterization of positioned radial contours.
//!
//! Three supports are produced per instance:
//!
//! - skeleton (`m1`): pixels whose center lies within `d/2` of any edge of
//!   any polygon (round caps and joins);
//! - ring (`m2`): the skeleton plus pixels inside-or-on `P_K` and not strictly
//!   inside `P_1`; for `K = 1` it is the skeleton alone;
//! - fill (`m3`): the skeleton plus pixels inside-or-on `P_K`.
//!
//! Interiority is the even-odd rule sampled at pixel centers `(x + 0.5, y + 0.5)`.
//! All predicates are evaluated in the instance-local frame: the local sample
//! point of canvas pixel `(x, y)` for an instance at integer position `p` is
//! `(x - p.x + 0.5, y - p.y + 0.5)`, computed exactly. This makes the output
//! exactly translation-equivariant and lets the scanline paths below agree
//! bit-for-bit with the per-pixel [`oracle`].

pub mod oracle;

use serde::{Deserialize, Serialize};

use crate::contour::{Point, Polygon, RadialContour};
use crate::error::{Error, Result};

/// Canvas dimensions in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Canvas {
    pub width: u32,
    pub height: u32,
}

impl Canvas {
    pub const fn new(width: u32, height: u32) -> Self {
        Self { width, height }
    }

    pub const fn square(side: u32) -> Self {
        Self::new(side, side)
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::invalid(format!(
                "canvas {}x{} has zero area",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Integer pixel position of a contour center on the canvas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Position {
    pub x: i32,
    pub y: i32,
}

impl Position {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }
}

/// Annotation granularity, fine to coarse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MaskType {
    #[serde(rename = "m1")]
    Skeleton,
    #[serde(rename = "m2")]
    Ring,
    #[serde(rename = "m3")]
    Fill,
}

impl MaskType {
    pub const ALL: [MaskType; 3] = [MaskType::Skeleton, MaskType::Ring, MaskType::Fill];

    pub fn as_str(self) -> &'static str {
        match self {
            MaskType::Skeleton => "m1",
            MaskType::Ring => "m2",
            MaskType::Fill => "m3",
        }
    }
}

impl std::str::FromStr for MaskType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m1" | "skeleton" => Ok(MaskType::Skeleton),
            "m2" | "ring" => Ok(MaskType::Ring),
            "m3" | "fill" => Ok(MaskType::Fill),
            other => Err(Error::invalid(format!("unknown mask type {other:?}"))),
        }
    }
}

impl std::fmt::Display for MaskType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `W x H` grid over {0, 1}, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    pub width: u32,
    pub height: u32,
    pub bits: Vec<u8>,
}

impl BinaryMask {
    pub fn zeros(canvas: Canvas) -> Self {
        Self {
            width: canvas.width,
            height: canvas.height,
            bits: vec![0; canvas.pixel_count()],
        }
    }

    pub fn canvas(&self) -> Canvas {
        Canvas::new(self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize] != 0
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32) {
        self.bits[y as usize * self.width as usize + x as usize] = 1;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.bits.len() == other.bits.len()
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| a <= b)
    }

    pub fn clear(&mut self) {
        self.bits.fill(0);
    }
}

/// Local sample coordinate of canvas column/row `c` for an instance at `origin`.
#[inline]
pub(crate) fn local_center(c: i64, origin: i32) -> f64 {
    (c - i64::from(origin)) as f64 + 0.5
}

/// x-coordinate where the line through `a`,`b` meets the horizontal `py`.
/// Callers guarantee `a.y != b.y`.
#[inline]
pub(crate) fn crossing_x(a: Point, b: Point, py: f64) -> f64 {
    a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y)
}

/// Squared distance from `(px, py)` to segment `ab`.
#[inline]
pub(crate) fn segment_dist2(px: f64, py: f64, a: Point, b: Point) -> f64 {
    let ex = b.x - a.x;
    let ey = b.y - a.y;
    let len2 = ex * ex + ey * ey;
    let t = if len2 > 0.0 {
        (((px - a.x) * ex + (py - a.y) * ey) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let dx = px - (a.x + t * ex);
    let dy = py - (a.y + t * ey);
    dx * dx + dy * dy
}

/// Whether sample `(px, py)` lies on edge `ab` under the crossing formula.
#[inline]
pub(crate) fn on_edge(px: f64, py: f64, a: Point, b: Point) -> bool {
    if a.y == b.y {
        py == a.y && px >= a.x.min(b.x) && px <= a.x.max(b.x)
    } else {
        py >= a.y.min(b.y) && py <= a.y.max(b.y) && crossing_x(a, b, py) == px
    }
}

/// Whether edge `ab` toggles even-odd parity for sample `(px, py)`.
#[inline]
pub(crate) fn toggles(px: f64, py: f64, a: Point, b: Point) -> bool {
    (a.y > py) != (b.y > py) && px < crossing_x(a, b, py)
}

/// Squared stroke radius for line width `d`.
#[inline]
pub(crate) fn stroke_radius2(line_width: u32) -> f64 {
    let r = f64::from(line_width) / 2.0;
    r * r
}

fn check_inputs(canvas: Canvas, line_width: u32) -> Result<()> {
    canvas.validate()?;
    if line_width == 0 {
        return Err(Error::invalid("line width must be positive"));
    }
    Ok(())
}

/// Clamped canvas index range `[lo, hi)` covering local coordinates
/// `[min, max]` (pixel centers) for an instance at `origin`.
fn index_range(min: f64, max: f64, origin: i32, extent: u32) -> (i64, i64) {
    if !(min <= max) {
        return (0, 0);
    }
    let lo = (min - 0.5).floor() as i64 - 1 + i64::from(origin);
    let hi = (max - 0.5).ceil() as i64 + 2 + i64::from(origin);
    (lo.max(0), hi.min(i64::from(extent)))
}

/// Scanline rasterizer state reused across rows and polygons.
#[derive(Default)]
struct Scanline {
    crossings: Vec<f64>,
}

impl Scanline {
    /// Writes `value` at every column of `row` whose sample is inside `poly`
    /// by the even-odd rule.
    fn mark_inside(&mut self, poly: &Polygon, py: f64, origin_x: i32, row: &mut [u8], value: u8) {
        self.crossings.clear();
        for (a, b) in poly.edges() {
            if (a.y > py) != (b.y > py) {
                self.crossings.push(crossing_x(a, b, py));
            }
        }
        if self.crossings.is_empty() {
            return;
        }
        self.crossings.sort_by(|p, q| p.total_cmp(q));
        let xs = &self.crossings;
        let n = xs.len();
        let (lo, hi) = index_range(xs[0], xs[n - 1], origin_x, row.len() as u32);
        // `passed` counts crossings at or left of the sample; the oracle
        // toggles once per crossing strictly to the right.
        let mut passed = 0;
        for col in lo..hi {
            let px = local_center(col, origin_x);
            while passed < n && xs[passed] <= px {
                passed += 1;
            }
            if (n - passed) % 2 == 1 {
                row[col as usize] = value;
            }
        }
    }

    /// Writes `value` at every column of `row` whose sample lies on an edge.
    fn mark_on(poly: &Polygon, py: f64, origin_x: i32, row: &mut [u8], value: u8) {
        let width = row.len() as u32;
        for (a, b) in poly.edges() {
            if a.y == b.y {
                if py != a.y {
                    continue;
                }
                let (lo, hi) = index_range(a.x.min(b.x), a.x.max(b.x), origin_x, width);
                for col in lo..hi {
                    if on_edge(local_center(col, origin_x), py, a, b) {
                        row[col as usize] = value;
                    }
                }
            } else if py >= a.y.min(b.y) && py <= a.y.max(b.y) {
                let x = crossing_x(a, b, py);
                let (lo, hi) = index_range(x, x, origin_x, width);
                for col in lo..hi {
                    if local_center(col, origin_x) == x {
                        row[col as usize] = value;
                    }
                }
            }
        }
    }
}

fn row_range(poly: &Polygon, origin_y: i32, height: u32) -> (i64, i64) {
    let (_, y0, _, y1) = poly.bounds();
    index_range(y0, y1, origin_y, height)
}

/// Stroke of every edge of every polygon at width `d`.
pub fn raster_skeleton(
    contour: &RadialContour,
    position: Position,
    line_width: u32,
    canvas: Canvas,
) -> Result<BinaryMask> {
    check_inputs(canvas, line_width)?;
    let mut mask = BinaryMask::zeros(canvas);
    stroke_into(contour, position, line_width, &mut mask);
    Ok(mask)
}

pub(crate) fn stroke_into(
    contour: &RadialContour,
    position: Position,
    line_width: u32,
    mask: &mut BinaryMask,
) {
    let r2 = stroke_radius2(line_width);
    let r = f64::from(line_width) / 2.0;
    let (w, h) = (mask.width, mask.height);
    for poly in &contour.polygons {
        for (a, b) in poly.edges() {
            let (rows_lo, rows_hi) = index_range(a.y.min(b.y) - r, a.y.max(b.y) + r, position.y, h);
            let dy = b.y - a.y;
            for row in rows_lo..rows_hi {
                let py = local_center(row, position.y);
                // Columns whose samples can be within r: the part of the edge
                // with |y - py| <= r + 1, widened by r.
                let (t0, t1) = if dy == 0.0 {
                    (0.0, 1.0)
                } else {
                    let ta = (py - r - 1.0 - a.y) / dy;
                    let tb = (py + r + 1.0 - a.y) / dy;
                    (ta.min(tb).max(0.0), ta.max(tb).min(1.0))
                };
                if t0 > t1 {
                    continue;
                }
                let xa = a.x + t0 * (b.x - a.x);
                let xb = a.x + t1 * (b.x - a.x);
                let (cols_lo, cols_hi) = index_range(xa.min(xb) - r, xa.max(xb) + r, position.x, w);
                let base = row as usize * w as usize;
                for col in cols_lo..cols_hi {
                    let idx = base + col as usize;
                    if mask.bits[idx] == 0
                        && segment_dist2(local_center(col, position.x), py, a, b) <= r2
                    {
                        mask.bits[idx] = 1;
                    }
                }
            }
        }
    }
}

/// Ring support: skeleton plus the region between `P_1` and `P_K`.
pub fn raster_ring(
    contour: &RadialContour,
    position: Position,
    line_width: u32,
    canvas: Canvas,
) -> Result<BinaryMask> {
    check_inputs(canvas, line_width)?;
    let mut mask = BinaryMask::zeros(canvas);
    ring_into(contour, position, line_width, &mut mask);
    Ok(mask)
}

pub(crate) fn ring_into(
    contour: &RadialContour,
    position: Position,
    line_width: u32,
    mask: &mut BinaryMask,
) {
    stroke_into(contour, position, line_width, mask);
    if contour.polygons.len() < 2 {
        return;
    }
    let outer = contour.outermost();
    let inner = contour.innermost();
    let w = mask.width as usize;
    let mut scan = Scanline::default();
    let mut region = vec![0u8; w];
    let mut hole = vec![0u8; w];
    let (lo, hi) = row_range(outer, position.y, mask.height);
    for row in lo..hi {
        let py = local_center(row, position.y);
        region.fill(0);
        hole.fill(0);
        scan.mark_inside(outer, py, position.x, &mut region, 1);
        Scanline::mark_on(outer, py, position.x, &mut region, 1);
        scan.mark_inside(inner, py, position.x, &mut hole, 1);
        Scanline::mark_on(inner, py, position.x, &mut hole, 0);
        let out = &mut mask.bits[row as usize * w..(row as usize + 1) * w];
        for ((o, &r), &h) in out.iter_mut().zip(&region).zip(&hole) {
            *o |= r & !h & 1;
        }
    }
}

/// Fill support: skeleton plus everything inside-or-on `P_K`.
pub fn raster_fill(
    contour: &RadialContour,
    position: Position,
    line_width: u32,
    canvas: Canvas,
) -> Result<BinaryMask> {
    check_inputs(canvas, line_width)?;
    let mut mask = BinaryMask::zeros(canvas);
    fill_into(contour, position, line_width, &mut mask);
    Ok(mask)
}

pub(crate) fn fill_into(
    contour: &RadialContour,
    position: Position,
    line_width: u32,
    mask: &mut BinaryMask,
) {
    stroke_into(contour, position, line_width, mask);
    let outer = contour.outermost();
    let w = mask.width as usize;
    let mut scan = Scanline::default();
    let (lo, hi) = row_range(outer, position.y, mask.height);
    for row in lo..hi {
        let py = local_center(row, position.y);
        let out = &mut mask.bits[row as usize * w..(row as usize + 1) * w];
        scan.mark_inside(outer, py, position.x, out, 1);
        Scanline::mark_on(outer, py, position.x, out, 1);
    }
}

/// Rasterizes the support of the requested mask type.
pub fn raster(
    contour: &RadialContour,
    position: Position,
    mask_type: MaskType,
    line_width: u32,
    canvas: Canvas,
) -> Result<BinaryMask> {
    match mask_type {
        MaskType::Skeleton => raster_skeleton(contour, position, line_width, canvas),
        MaskType::Ring => raster_ring(contour, position, line_width, canvas),
        MaskType::Fill => raster_fill(contour, position, line_width, canvas),
    }
}

/// Like [`raster`] but overwrites a caller-owned mask (cleared first).
pub(crate) fn raster_into(
    contour: &RadialContour,
    position: Position,
    mask_type: MaskType,
    line_width: u32,
    mask: &mut BinaryMask,
) {
    mask.clear();
    match mask_type {
        MaskType::Skeleton => stroke_into(contour, position, line_width, mask),
        MaskType::Ring => ring_into(contour, position, line_width, mask),
        MaskType::Fill => fill_into(contour, position, line_width, mask),
    }
}

#[cfg(test)]
mod tests;
