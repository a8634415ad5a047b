//! Radial contours: `K` nested polygons obtained by scaling one noisy base
//! shape about its center.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::PeriodicNoise;
use crate::taxonomy::CategorySpec;

/// Largest number of polygons per contour.
pub const MAX_POLYGONS: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(s * self.x, s * self.y)
    }
}

/// Closed polygon in the instance-local frame (origin at the contour center).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    /// Edges as `(a, b)` pairs, closing the loop.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// `(min_x, min_y, max_x, max_y)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        self.vertices.iter().fold(
            (
                f64::INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::NEG_INFINITY,
            ),
            |(x0, y0, x1, y1), p| (x0.min(p.x), y0.min(p.y), x1.max(p.x), y1.max(p.y)),
        )
    }

    pub fn scaled(&self, s: f64) -> Polygon {
        Polygon::new(self.vertices.iter().map(|p| p.scale(s)).collect())
    }
}

/// Base polygon of one instance together with the resize factor drawn for it.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseShape {
    pub polygon: Polygon,
    pub resize: f64,
}

/// Samples the noisy base polygon of an instance.
///
/// Vertex `v` sits at angle `2πv/V` and radius
/// `base_radius * resize * (1 + noise_amplitude * noise(θ))`. The resize factor
/// is drawn first, then the noise lattice, so the stream layout is fixed.
pub fn sample_base_polygon<R: Rng + ?Sized>(spec: &CategorySpec, rng: &mut R) -> BaseShape {
    let (lo, hi) = spec.resize_factor_range;
    let resize = rng.gen_range(lo..=hi);
    let noise = PeriodicNoise::sample(spec.noise_frequency, rng);
    let radius = spec.base_radius * resize;
    let n = spec.vertex_count;
    let vertices = (0..n)
        .map(|v| {
            let theta = TAU * f64::from(v) / f64::from(n);
            let r = radius * (1.0 + spec.noise_amplitude * noise.value(theta));
            Point::new(r * theta.cos(), r * theta.sin())
        })
        .collect();
    BaseShape {
        polygon: Polygon::new(vertices),
        resize,
    }
}

/// One instance's geometry: polygons `P_1 ⊂ ... ⊂ P_K`, innermost first.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialContour {
    pub category_id: u32,
    pub resize: f64,
    pub polygons: Vec<Polygon>,
}

impl RadialContour {
    /// Stacks `k/K`-scaled copies of `base` for `k = 1..=K`.
    pub fn from_base(
        category_id: u32,
        base: &Polygon,
        resize: f64,
        polygon_count: u32,
    ) -> Result<Self> {
        check_polygon_count(polygon_count)?;
        let kk = f64::from(polygon_count);
        let polygons = (1..=polygon_count)
            .map(|k| base.scaled(f64::from(k) / kk))
            .collect();
        Ok(Self {
            category_id,
            resize,
            polygons,
        })
    }

    pub fn polygon_count(&self) -> u32 {
        self.polygons.len() as u32
    }

    pub fn innermost(&self) -> &Polygon {
        &self.polygons[0]
    }

    pub fn outermost(&self) -> &Polygon {
        self.polygons
            .last()
            .expect("contour has at least one polygon")
    }

    /// `(min_x, min_y, max_x, max_y)` over all polygons.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        self.polygons.iter().map(Polygon::bounds).fold(
            (
                f64::INFINITY,
                f64::INFINITY,
                f64::NEG_INFINITY,
                f64::NEG_INFINITY,
            ),
            |(a0, b0, a1, b1), (x0, y0, x1, y1)| (a0.min(x0), b0.min(y0), a1.max(x1), b1.max(y1)),
        )
    }
}

fn check_polygon_count(k: u32) -> Result<()> {
    if k == 0 || k > MAX_POLYGONS {
        return Err(Error::invalid(format!(
            "polygon count must be in 1..={MAX_POLYGONS}, got {k}"
        )));
    }
    Ok(())
}

/// Samples a base shape from `spec` and stacks `polygon_count` scaled copies.
pub fn build_radial_contour<R: Rng + ?Sized>(
    spec: &CategorySpec,
    polygon_count: u32,
    rng: &mut R,
) -> Result<RadialContour> {
    check_polygon_count(polygon_count)?;
    let base = sample_base_polygon(spec, rng);
    RadialContour::from_base(spec.category_id, &base.polygon, base.resize, polygon_count)
}
