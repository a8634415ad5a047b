//! Annotation-noise models applied to the geometry used for masks only.
//!
//! Shift displaces every base-shape vertex by independent uniform noise on
//! `[-m, m]^2` and rebuilds the rings from the displaced base, so all rings
//! move coherently and stay nested. Inflation pushes every vertex of every
//! ring radially outward by exactly `m` pixels.

use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::contour::{Point, Polygon, RadialContour};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbMode {
    None,
    Shift,
    Inflation,
}

impl FromStr for PerturbMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(PerturbMode::None),
            "shift" => Ok(PerturbMode::Shift),
            "inflation" | "inflate" => Ok(PerturbMode::Inflation),
            other => Err(Error::invalid(format!(
                "unknown perturbation mode {other:?}"
            ))),
        }
    }
}

/// Perturbation mode and magnitude in pixels. Magnitude is ignored for `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PerturbSpec {
    pub mode: PerturbMode,
    pub magnitude: u32,
}

impl Default for PerturbSpec {
    fn default() -> Self {
        Self::NONE
    }
}

impl PerturbSpec {
    pub const NONE: PerturbSpec = PerturbSpec {
        mode: PerturbMode::None,
        magnitude: 0,
    };

    pub fn shift(magnitude: u32) -> Self {
        Self {
            mode: PerturbMode::Shift,
            magnitude,
        }
    }

    pub fn inflation(magnitude: u32) -> Self {
        Self {
            mode: PerturbMode::Inflation,
            magnitude,
        }
    }

    /// True when masks are generated from the unmodified contour.
    pub fn is_identity(&self) -> bool {
        self.mode == PerturbMode::None || self.magnitude == 0
    }

    /// Applies the perturbation. `rng` is only consumed by `Shift`.
    pub fn apply<R: Rng + ?Sized>(&self, contour: &RadialContour, rng: &mut R) -> RadialContour {
        match self.mode {
            PerturbMode::None => contour.clone(),
            PerturbMode::Shift => shift_vertices(contour, self.magnitude, rng),
            PerturbMode::Inflation => inflate_region(contour, self.magnitude),
        }
    }
}

/// Displaces the base shape's vertices by uniform noise on `[-m, m]^2`, then
/// rescales the rings from the displaced base.
pub fn shift_vertices<R: Rng + ?Sized>(
    contour: &RadialContour,
    magnitude: u32,
    rng: &mut R,
) -> RadialContour {
    if magnitude == 0 {
        return contour.clone();
    }
    let m = f64::from(magnitude);
    let base = contour.outermost();
    let shifted = Polygon::new(
        base.vertices
            .iter()
            .map(|p| Point::new(p.x + rng.gen_range(-m..=m), p.y + rng.gen_range(-m..=m)))
            .collect(),
    );
    RadialContour::from_base(
        contour.category_id,
        &shifted,
        contour.resize,
        contour.polygon_count(),
    )
    .expect("polygon count already validated")
}

/// Moves every vertex of every ring `m` pixels away from the contour center.
pub fn inflate_region(contour: &RadialContour, magnitude: u32) -> RadialContour {
    if magnitude == 0 {
        return contour.clone();
    }
    let m = f64::from(magnitude);
    let polygons = contour
        .polygons
        .iter()
        .map(|poly| {
            Polygon::new(
                poly.vertices
                    .iter()
                    .map(|&p| {
                        let r = p.norm();
                        if r > 0.0 {
                            p.scale((r + m) / r)
                        } else {
                            p
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    RadialContour {
        polygons,
        ..contour.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::build_radial_contour;
    use crate::raster::{raster_fill, Canvas, Position};
    use crate::seed;
    use crate::taxonomy::{build_taxonomy, CategorySpec};

    fn contour(seed_value: u64, k: u32) -> RadialContour {
        let table = build_taxonomy(255, 8).unwrap();
        let spec = table
            .lookup((seed_value % 255) as u32 + 1)
            .unwrap()
            .scaled(0.25);
        build_radial_contour(&spec, k, &mut seed::stream(seed_value)).unwrap()
    }

    #[test]
    fn zero_magnitude_is_identity() {
        for s in 0..20 {
            let c = contour(s, 1 + (s as u32 % 10));
            assert_eq!(shift_vertices(&c, 0, &mut seed::stream(s)), c);
            assert_eq!(inflate_region(&c, 0), c);
            assert_eq!(PerturbSpec::NONE.apply(&c, &mut seed::stream(0)), c);
        }
    }

    #[test]
    fn shift_is_linf_bounded() {
        for s in 0..50 {
            let c = contour(s, 1 + (s as u32 % 25));
            let shifted = shift_vertices(&c, 10, &mut seed::stream(s ^ 0xff));
            assert_eq!(shifted.polygon_count(), c.polygon_count());
            for (p, q) in c.polygons.iter().zip(&shifted.polygons) {
                for (a, b) in p.vertices.iter().zip(&q.vertices) {
                    assert!((a.x - b.x).abs() <= 10.0 + 1e-9);
                    assert!((a.y - b.y).abs() <= 10.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn shift_is_seeded() {
        let c = contour(3, 7);
        let a = shift_vertices(&c, 30, &mut seed::stream(1));
        let b = shift_vertices(&c, 30, &mut seed::stream(1));
        let d = shift_vertices(&c, 30, &mut seed::stream(2));
        assert_eq!(a, b);
        assert_ne!(a, d);
    }

    #[test]
    fn inflation_grows_regular_circumradius_by_magnitude() {
        let spec = CategorySpec {
            category_id: 1,
            vertex_count: 6,
            base_radius: 20.0,
            resize_factor_range: (1.0, 1.0),
            noise_amplitude: 0.0,
            noise_frequency: 1,
        };
        let c = build_radial_contour(&spec, 3, &mut seed::stream(0)).unwrap();
        let inflated = inflate_region(&c, 10);
        for (p, q) in c.polygons.iter().zip(&inflated.polygons) {
            for (a, b) in p.vertices.iter().zip(&q.vertices) {
                assert!((b.norm() - a.norm() - 10.0).abs() < 1e-9);
            }
        }
        assert!((inflated.outermost().vertices[0].norm() - 30.0).abs() < 1e-9);
    }

    #[test]
    fn inflated_fill_contains_original_and_is_monotone() {
        let canvas = Canvas::square(96);
        for s in 0..40 {
            let c = contour(s, 1 + (s as u32 % 12));
            let pos = Position::new(48, 48);
            let mut prev = raster_fill(&c, pos, 1, canvas).unwrap();
            for m in [3, 10, 30] {
                let next = raster_fill(&inflate_region(&c, m), pos, 1, canvas).unwrap();
                assert!(prev.is_subset_of(&next), "seed {s} magnitude {m}");
                prev = next;
            }
        }
    }

    #[test]
    fn parses_modes() {
        assert_eq!("shift".parse::<PerturbMode>().unwrap(), PerturbMode::Shift);
        assert_eq!(
            "inflate".parse::<PerturbMode>().unwrap(),
            PerturbMode::Inflation
        );
        assert!("blur".parse::<PerturbMode>().is_err());
    }
}
