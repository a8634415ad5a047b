use super::oracle::oracle_rasterize;
use super::*;
use crate::contour::build_radial_contour;
use crate::seed;
use crate::taxonomy::{build_taxonomy, CategorySpec};
use proptest::prelude::*;
use rand::Rng;

fn square(half: f64) -> Polygon {
    Polygon::new(vec![
        Point::new(-half, -half),
        Point::new(half, -half),
        Point::new(half, half),
        Point::new(-half, half),
    ])
}

fn contour_of(polys: Vec<Polygon>) -> RadialContour {
    RadialContour {
        category_id: 1,
        resize: 1.0,
        polygons: polys,
    }
}

fn random_case(rng: &mut impl Rng, canvas: Canvas) -> (RadialContour, Position, u32) {
    let table = build_taxonomy(255, 17).unwrap();
    let spec: CategorySpec = table.lookup(rng.gen_range(1..=255)).unwrap().scaled(0.25);
    let k = rng.gen_range(1..=10);
    let contour = build_radial_contour(&spec, k, rng).unwrap();
    let pos = Position::new(
        rng.gen_range(-16..canvas.width as i32 + 16),
        rng.gen_range(-16..canvas.height as i32 + 16),
    );
    (contour, pos, rng.gen_range(1..=3))
}

#[test]
fn zero_area_canvas_rejected() {
    let c = contour_of(vec![square(3.0)]);
    let pos = Position::new(0, 0);
    for canvas in [Canvas::new(0, 8), Canvas::new(8, 0)] {
        assert!(raster_skeleton(&c, pos, 1, canvas).is_err());
        assert!(raster_ring(&c, pos, 1, canvas).is_err());
        assert!(raster_fill(&c, pos, 1, canvas).is_err());
    }
}

#[test]
fn off_canvas_is_empty() {
    let c = contour_of(vec![square(5.0)]);
    let canvas = Canvas::square(32);
    for pos in [
        Position::new(-100, 10),
        Position::new(10, 200),
        Position::new(500, -500),
    ] {
        for t in MaskType::ALL {
            assert_eq!(raster(&c, pos, t, 3, canvas).unwrap().count(), 0);
            assert_eq!(oracle_rasterize(&c, pos, t, 3, canvas).count(), 0);
        }
    }
}

#[test]
fn square_outline_d1_counts_perimeter_pixels() {
    // Square with corners on pixel centers: local (±4.5) around position
    // (10, 10) puts vertices on centers of pixels 5 and 14, a 10x10 outline.
    let c = contour_of(vec![square(4.5)]);
    let mask = raster_skeleton(&c, Position::new(10, 10), 1, Canvas::square(24)).unwrap();
    // Centers within 0.5 of the outline are exactly the 36 border pixels of
    // the 10x10 block; the next row in is 1.0 away.
    assert_eq!(mask.count(), 4 * 10 - 4);
    for y in 5..15 {
        for x in 5..15 {
            let border = x == 5 || x == 14 || y == 5 || y == 14;
            assert_eq!(mask.get(x, y), border, "({x}, {y})");
        }
    }
}

#[test]
fn wider_strokes_are_supersets() {
    let mut rng = seed::stream(4);
    for _ in 0..50 {
        let (c, pos, _) = random_case(&mut rng, Canvas::square(64));
        let thin = raster_skeleton(&c, pos, 1, Canvas::square(64)).unwrap();
        let mid = raster_skeleton(&c, pos, 2, Canvas::square(64)).unwrap();
        let thick = raster_skeleton(&c, pos, 3, Canvas::square(64)).unwrap();
        assert!(thin.is_subset_of(&mid));
        assert!(mid.is_subset_of(&thick));
    }
}

#[test]
fn single_ring_mask_equals_skeleton() {
    let mut rng = seed::stream(5);
    let table = build_taxonomy(255, 1).unwrap();
    for _ in 0..30 {
        let spec = table.lookup(rng.gen_range(1..=255)).unwrap().scaled(0.25);
        let c = build_radial_contour(&spec, 1, &mut rng).unwrap();
        let pos = Position::new(32, 32);
        for d in 1..=3 {
            assert_eq!(
                raster_ring(&c, pos, d, Canvas::square(64)).unwrap(),
                raster_skeleton(&c, pos, d, Canvas::square(64)).unwrap()
            );
        }
    }
}

/// Brute-force area oracle: pixel centers inside-or-on a closed square.
fn centers_in_square(pos: Position, half: f64, canvas: Canvas) -> usize {
    let mut n = 0;
    for y in 0..canvas.height {
        for x in 0..canvas.width {
            let px = f64::from(x) + 0.5 - f64::from(pos.x);
            let py = f64::from(y) + 0.5 - f64::from(pos.y);
            if px.abs() <= half && py.abs() <= half {
                n += 1;
            }
        }
    }
    n
}

fn centers_strictly_in_square(pos: Position, half: f64, canvas: Canvas) -> usize {
    let mut n = 0;
    for y in 0..canvas.height {
        for x in 0..canvas.width {
            let px = f64::from(x) + 0.5 - f64::from(pos.x);
            let py = f64::from(y) + 0.5 - f64::from(pos.y);
            if px.abs() < half && py.abs() < half {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn concentric_square_ring_area() {
    // Outer half-side 10.5, inner 5.25 (half size), d = 1.
    let canvas = Canvas::square(40);
    let pos = Position::new(20, 20);
    let c = contour_of(vec![square(5.25), square(10.5)]);
    let ring = raster_ring(&c, pos, 1, canvas).unwrap();
    let region =
        centers_in_square(pos, 10.5, canvas) - centers_strictly_in_square(pos, 5.25, canvas);
    assert_eq!(region, 22 * 22 - 10 * 10);
    // Centers nearest the inner edge sit at 4.5 (0.75 away, excluded) and 5.5
    // (0.25 away, already in the region); outer-edge centers lie on the
    // boundary. The stroke therefore adds nothing.
    assert_eq!(ring.count(), region);
    assert_eq!(ring, oracle_rasterize(&c, pos, MaskType::Ring, 1, canvas));
}

#[test]
fn triangle_fill_matches_brute_force() {
    // Vertices (0,0), (8,0), (0,8) at the origin on 16x16.
    let tri = Polygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(8.0, 0.0),
        Point::new(0.0, 8.0),
    ]);
    let canvas = Canvas::square(16);
    let pos = Position::new(0, 0);
    // d = 1 stroke plus inside-or-on: brute force over 256 pixel centers.
    let mut expected = 0;
    for y in 0..16 {
        for x in 0..16 {
            let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
            let inside = px >= 0.0 && py >= 0.0 && px + py <= 8.0;
            let near_edge = |ax: f64, ay: f64, bx: f64, by: f64| {
                let (ex, ey) = (bx - ax, by - ay);
                let t = (((px - ax) * ex + (py - ay) * ey) / (ex * ex + ey * ey)).clamp(0.0, 1.0);
                let (dx, dy) = (px - ax - t * ex, py - ay - t * ey);
                dx * dx + dy * dy <= 0.25
            };
            let stroke = near_edge(0.0, 0.0, 8.0, 0.0)
                || near_edge(8.0, 0.0, 0.0, 8.0)
                || near_edge(0.0, 8.0, 0.0, 0.0);
            if inside || stroke {
                expected += 1;
            }
        }
    }
    let c = contour_of(vec![tri]);
    let fill = raster_fill(&c, pos, 1, canvas).unwrap();
    assert_eq!(fill.count(), expected);
    // 36 centers satisfy x + y <= 7; the next diagonal sits 1/sqrt(2) from
    // the hypotenuse, outside the unit-width stroke.
    assert_eq!(expected, 36);
}

#[test]
fn covering_polygon_saturates_canvas() {
    let c = contour_of(vec![square(100.0)]);
    let mask = raster_fill(&c, Position::new(16, 16), 1, Canvas::square(32)).unwrap();
    assert_eq!(mask.count(), 32 * 32);
}

#[test]
fn mask_types_nest_for_unit_width() {
    let mut rng = seed::stream(77);
    for _ in 0..100 {
        let (c, pos, _) = random_case(&mut rng, Canvas::square(64));
        let m1 = raster_skeleton(&c, pos, 1, Canvas::square(64)).unwrap();
        let m2 = raster_ring(&c, pos, 1, Canvas::square(64)).unwrap();
        let m3 = raster_fill(&c, pos, 1, Canvas::square(64)).unwrap();
        assert!(m1.is_subset_of(&m2));
        assert!(m2.is_subset_of(&m3));
    }
}

#[test]
fn fast_paths_match_oracle() {
    let mut rng = seed::stream(2024);
    let canvas = Canvas::square(64);
    for case in 0..100 {
        let (c, pos, d) = random_case(&mut rng, canvas);
        for t in MaskType::ALL {
            let fast = raster(&c, pos, t, d, canvas).unwrap();
            let slow = oracle_rasterize(&c, pos, t, d, canvas);
            assert_eq!(fast, slow, "case {case} type {t} d {d}");
        }
    }
}

#[test]
fn boundary_samples_on_axis_aligned_edges() {
    // Edges pass exactly through pixel centers, exercising the on-edge rule.
    let canvas = Canvas::square(20);
    let pos = Position::new(10, 10);
    let c = contour_of(vec![square(2.5), square(5.5)]);
    for t in MaskType::ALL {
        for d in 1..=3 {
            assert_eq!(
                raster(&c, pos, t, d, canvas).unwrap(),
                oracle_rasterize(&c, pos, t, d, canvas),
                "{t} d={d}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_equivariance(seed_value in any::<u64>(), dx in -20i32..20, dy in -20i32..20) {
        let mut rng = seed::stream(seed_value);
        let canvas = Canvas::square(64);
        let (c, pos, d) = random_case(&mut rng, canvas);
        let moved = Position::new(pos.x + dx, pos.y + dy);
        for t in MaskType::ALL {
            let a = raster(&c, pos, t, d, canvas).unwrap();
            let b = raster(&c, moved, t, d, canvas).unwrap();
            for y in 0..64i32 {
                for x in 0..64i32 {
                    let (sx, sy) = (x - dx, y - dy);
                    if (0..64).contains(&sx) && (0..64).contains(&sy) {
                        prop_assert_eq!(b.get(x as u32, y as u32), a.get(sx as u32, sy as u32));
                    }
                }
            }
        }
    }
}
