//! Exhaustive per-pixel rasterizer used as a reference for the scanline paths.
//!
//! Every pixel is classified directly from the vertex lists: distance to every
//! edge for the stroke, and a full crossing-number walk for interiority. Cost
//! is `O(W * H * K * V)`; keep canvases small (128 x 128 or less).

use super::{
    local_center, on_edge, segment_dist2, stroke_radius2, toggles, BinaryMask, Canvas, MaskType,
    Position,
};
use crate::contour::{Polygon, RadialContour};

fn on_stroke(contour: &RadialContour, px: f64, py: f64, r2: f64) -> bool {
    contour
        .polygons
        .iter()
        .any(|poly| poly.edges().any(|(a, b)| segment_dist2(px, py, a, b) <= r2))
}

fn on_boundary(poly: &Polygon, px: f64, py: f64) -> bool {
    poly.edges().any(|(a, b)| on_edge(px, py, a, b))
}

fn even_odd_inside(poly: &Polygon, px: f64, py: f64) -> bool {
    poly.edges().filter(|&(a, b)| toggles(px, py, a, b)).count() % 2 == 1
}

fn inside_or_on(poly: &Polygon, px: f64, py: f64) -> bool {
    even_odd_inside(poly, px, py) || on_boundary(poly, px, py)
}

fn strictly_inside(poly: &Polygon, px: f64, py: f64) -> bool {
    even_odd_inside(poly, px, py) && !on_boundary(poly, px, py)
}

/// Per-pixel classification of one instance's support.
pub fn oracle_rasterize(
    contour: &RadialContour,
    position: Position,
    mask_type: MaskType,
    line_width: u32,
    canvas: Canvas,
) -> BinaryMask {
    let r2 = stroke_radius2(line_width);
    let mut mask = BinaryMask::zeros(canvas);
    for y in 0..canvas.height {
        let py = local_center(i64::from(y), position.y);
        for x in 0..canvas.width {
            let px = local_center(i64::from(x), position.x);
            let stroke = on_stroke(contour, px, py, r2);
            let covered = match mask_type {
                MaskType::Skeleton => stroke,
                MaskType::Fill => stroke || inside_or_on(contour.outermost(), px, py),
                MaskType::Ring if contour.polygons.len() == 1 => stroke,
                MaskType::Ring => {
                    stroke
                        || (inside_or_on(contour.outermost(), px, py)
                            && !strictly_inside(contour.innermost(), px, py))
                }
            };
            if covered {
                mask.set(x, y);
            }
        }
    }
    mask
}
