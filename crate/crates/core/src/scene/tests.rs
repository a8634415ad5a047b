use super::*;
use crate::contour::{Point, Polygon};
use crate::raster::oracle::oracle_rasterize;
use crate::taxonomy::build_taxonomy;

fn square_instance(half: f64, pos: Position, category: u32, depth: u32) -> Instance {
    let poly = Polygon::new(vec![
        Point::new(-half, -half),
        Point::new(half, -half),
        Point::new(half, half),
        Point::new(-half, half),
    ]);
    Instance {
        contour: RadialContour::from_base(category, &poly, 1.0, 2).unwrap(),
        mask_contour: None,
        position: pos,
        category,
        depth,
        color: WHITE,
    }
}

/// Direct per-pixel evaluation of `label = c_{max{j : b_j = 1} ∪ {0}}`.
fn brute_force_labels(
    instances: &[Instance],
    mask_type: MaskType,
    d: u32,
    canvas: Canvas,
) -> LabelMask {
    let supports: Vec<BinaryMask> = instances
        .iter()
        .map(|i| oracle_rasterize(i.mask_geometry(), i.position, mask_type, d, canvas))
        .collect();
    let mut out = LabelMask::zeros(canvas);
    for y in 0..canvas.height {
        for x in 0..canvas.width {
            let j_star = (0..instances.len())
                .filter(|&j| supports[j].get(x, y))
                .map(|j| j + 1)
                .max()
                .unwrap_or(0);
            let c = if j_star == 0 {
                0
            } else {
                instances[j_star - 1].category
            };
            out.labels[(y * canvas.width + x) as usize] = c as u16;
        }
    }
    out
}

fn small_config(m: u32, mask_type: MaskType) -> GenerationConfig {
    GenerationConfig {
        num_images: 100,
        instances_per_image: m,
        mask_type,
        canvas: Canvas::square(64),
        occlusion_radius: 48,
        polygons_range: (1, 10),
        ..GenerationConfig::default()
    }
}

#[test]
fn front_instance_wins_overlap() {
    let canvas = Canvas::square(40);
    let back = square_instance(8.0, Position::new(15, 15), 7, 1);
    let front = square_instance(8.0, Position::new(24, 24), 9, 2);
    let (_, labels) =
        compose_scene(&[back.clone(), front.clone()], MaskType::Fill, 1, canvas).unwrap();
    let b = raster::raster_fill(&back.contour, back.position, 1, canvas).unwrap();
    let f = raster::raster_fill(&front.contour, front.position, 1, canvas).unwrap();
    let mut overlap = 0;
    for y in 0..40 {
        for x in 0..40 {
            let expected = match (b.get(x, y), f.get(x, y)) {
                (_, true) => 9,
                (true, false) => 7,
                _ => 0,
            };
            overlap += usize::from(b.get(x, y) && f.get(x, y));
            assert_eq!(labels.get(x, y), expected);
        }
    }
    assert!(overlap > 0);
}

#[test]
fn empty_scene_is_background() {
    let canvas = Canvas::square(16);
    let (image, labels) = compose_scene(&[], MaskType::Ring, 1, canvas).unwrap();
    assert!(labels.labels.iter().all(|&l| l == 0));
    assert!(image.pixels.iter().all(|&p| p == 0));
}

#[test]
fn composition_matches_brute_force() {
    let table = build_taxonomy(255, 0).unwrap();
    for mask_type in MaskType::ALL {
        let config = small_config(4, mask_type);
        for index in 0..10 {
            let (_, instances) = sample_instances(&config, &table, index).unwrap();
            let (_, labels) =
                compose_scene(&instances, mask_type, config.line_width, config.canvas).unwrap();
            assert_eq!(
                labels,
                brute_force_labels(&instances, mask_type, config.line_width, config.canvas)
            );
        }
    }
}

#[test]
fn gray_skeleton_image_matches_mask_support() {
    let table = build_taxonomy(255, 3).unwrap();
    let config = small_config(8, MaskType::Skeleton);
    for index in 0..10 {
        let scene = build_scene(&config, &table, index).unwrap();
        for (px, &l) in scene.image.pixels.chunks_exact(3).zip(&scene.mask.labels) {
            assert_eq!(px != BLACK, l != 0);
        }
    }
}

#[test]
fn build_scene_is_deterministic() {
    let table = build_taxonomy(255, 3).unwrap();
    let config = small_config(6, MaskType::Ring);
    let a = build_scene(&config, &table, 42).unwrap();
    let b = build_scene(&config, &table, 42).unwrap();
    assert_eq!(a, b);
    let c = build_scene(&config, &table, 43).unwrap();
    assert_ne!(a.record, c.record);
}

#[test]
fn record_regenerates_scene() {
    let table = build_taxonomy(255, 3).unwrap();
    let mut config = small_config(5, MaskType::Fill);
    config.perturb = crate::perturb::PerturbSpec::shift(10);
    let scene = build_scene(&config, &table, 7).unwrap();
    let instances = instances_from_record(&config, &table, &scene.record).unwrap();
    let (image, mask) = compose_scene(
        &instances,
        config.mask_type,
        config.line_width,
        config.canvas,
    )
    .unwrap();
    assert_eq!(image, scene.image);
    assert_eq!(mask, scene.mask);
}

#[test]
fn index_out_of_range() {
    let table = build_taxonomy(255, 3).unwrap();
    let config = small_config(2, MaskType::Fill);
    assert!(build_scene(&config, &table, 100).is_err());
}

#[test]
fn single_category_labels_everything_one() {
    let table = build_taxonomy(1, 3).unwrap();
    let mut config = small_config(8, MaskType::Fill);
    config.num_categories = 1;
    let scene = build_scene(&config, &table, 0).unwrap();
    assert!(scene.mask.labels.iter().all(|&l| l <= 1));
    assert!(scene.record.instances.iter().all(|i| i.category_id == 1));
}

#[test]
fn placements_cover_canvas_at_full_radius() {
    let canvas = Canvas::square(512);
    assert_eq!(placement_span(512, 512).unwrap(), (0, 512));
    assert_eq!(placement_span(400, 512).unwrap(), (56, 456));
    assert_eq!(placement_span(400, 128).unwrap(), (0, 128));
    assert!(placement_span(0, 512).is_err());
    let positions = sample_placements(10_000, 512, canvas, &mut seed::stream(1)).unwrap();
    let (mut min, mut max) = (i32::MAX, i32::MIN);
    for p in &positions {
        min = min.min(p.x.min(p.y));
        max = max.max(p.x.max(p.y));
    }
    assert!(min < 5 && max > 506, "{min} {max}");
}

#[test]
fn small_radius_concentrates_placements() {
    let canvas = Canvas::square(512);
    let positions = sample_placements(32, 100, canvas, &mut seed::stream(2)).unwrap();
    for p in positions {
        assert!((206..306).contains(&p.x) && (206..306).contains(&p.y));
    }
    assert_eq!(
        sample_placements(1, 3, canvas, &mut seed::stream(2))
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn gray_colors_are_white() {
    assert_eq!(
        assign_colors(3, ColorMode::Gray, &mut seed::stream(0)),
        vec![WHITE; 3]
    );
}

#[test]
fn random_colors_are_reproducible_and_uniform() {
    let a = assign_colors(1, ColorMode::RandomRgb, &mut seed::stream(5));
    let b = assign_colors(1, ColorMode::RandomRgb, &mut seed::stream(5));
    assert_eq!(a, b);
    let colors = assign_colors(10_000, ColorMode::RandomRgb, &mut seed::stream(6));
    for ch in 0..3 {
        let mean = colors.iter().map(|c| f64::from(c[ch])).sum::<f64>() / 10_000.0;
        assert!((mean - 127.5).abs() < 3.0, "channel {ch} mean {mean}");
    }
}

#[test]
fn swapping_depths_only_changes_intersection() {
    let table = build_taxonomy(255, 9).unwrap();
    let config = small_config(4, MaskType::Fill);
    let (_, instances) = sample_instances(&config, &table, 3).unwrap();
    let (_, before) = compose_scene(&instances, MaskType::Fill, 1, config.canvas).unwrap();
    let mut swapped = instances.clone();
    swapped.swap(1, 2);
    let (_, after) = compose_scene(&swapped, MaskType::Fill, 1, config.canvas).unwrap();
    let s1 = raster::raster_fill(
        &instances[1].contour,
        instances[1].position,
        1,
        config.canvas,
    )
    .unwrap();
    let s2 = raster::raster_fill(
        &instances[2].contour,
        instances[2].position,
        1,
        config.canvas,
    )
    .unwrap();
    for i in 0..before.labels.len() {
        if before.labels[i] != after.labels[i] {
            assert!(s1.bits[i] == 1 && s2.bits[i] == 1);
        }
    }
}

#[test]
fn categories_cover_the_taxonomy_evenly() {
    let config = crate::config::Preset::Best.config();
    let table = build_taxonomy(255, 0).unwrap();
    let mut counts = vec![0u64; 256];
    for index in 0..20_000 {
        let (_, instances) = sample_instances(&config, &table, index).unwrap();
        for inst in instances {
            counts[inst.category as usize] += 1;
        }
    }
    let mean = 20_000.0 * 32.0 / 255.0;
    for (c, &n) in counts.iter().enumerate().skip(1) {
        assert!(
            (n as f64 - mean).abs() <= 0.2 * mean,
            "category {c}: {n} vs mean {mean}"
        );
    }
}

#[test]
fn perturbation_changes_masks_only() {
    use crate::perturb::PerturbSpec;
    let table = build_taxonomy(255, 4).unwrap();
    let plain = small_config(6, MaskType::Fill);
    for spec in [PerturbSpec::shift(8), PerturbSpec::inflation(5)] {
        let mut config = plain.clone();
        config.perturb = spec;
        let mut masks_differ = false;
        for index in 0..10 {
            let a = build_scene(&plain, &table, index).unwrap();
            let b = build_scene(&config, &table, index).unwrap();
            assert_eq!(a.image, b.image);
            masks_differ |= a.mask != b.mask;
        }
        assert!(masks_differ, "{spec:?} left every mask unchanged");
    }
}
