//! Contact sheet of image/mask pairs for visual inspection.

use crate::config::GenerationConfig;
use crate::error::{Error, Result};
use crate::scene::{build_scene, ImageCanvas, LabelMask};
use crate::seed::mix64;
use crate::taxonomy::build_taxonomy_with;

/// Display color of a label; background stays black.
pub fn label_color(label: u16) -> [u8; 3] {
    if label == 0 {
        return [0, 0, 0];
    }
    let h = mix64(u64::from(label));
    // Keep every channel away from black so small labels stay visible.
    [
        64 | (h as u8),
        64 | ((h >> 8) as u8),
        64 | ((h >> 16) as u8),
    ]
}

fn blit_image(sheet: &mut ImageCanvas, src: &ImageCanvas, x0: u32, y0: u32) {
    for y in 0..src.height {
        let s = 3 * (y * src.width) as usize;
        let d = 3 * ((y0 + y) * sheet.width + x0) as usize;
        let n = 3 * src.width as usize;
        sheet.pixels[d..d + n].copy_from_slice(&src.pixels[s..s + n]);
    }
}

fn blit_mask(sheet: &mut ImageCanvas, mask: &LabelMask, x0: u32, y0: u32) {
    for y in 0..mask.height {
        for x in 0..mask.width {
            let d = 3 * ((y0 + y) * sheet.width + x0 + x) as usize;
            sheet.pixels[d..d + 3].copy_from_slice(&label_color(mask.get(x, y)));
        }
    }
}

/// Renders the first `grid * grid` scenes as an `grid x grid` sheet; each
/// cell holds the image on the left and the colorized mask on the right.
pub fn render_preview(config: &GenerationConfig, grid: u32) -> Result<ImageCanvas> {
    config.validate()?;
    if grid == 0 {
        return Err(Error::invalid("preview grid must be at least 1x1"));
    }
    let table = build_taxonomy_with(
        config.num_categories,
        config.taxonomy_seed,
        &config.taxonomy_ranges,
    )?;
    let (w, h) = (config.canvas.width, config.canvas.height);
    let gap = 4;
    let cell_w = 2 * w + gap;
    let cell_h = h + gap;
    let mut sheet = ImageCanvas {
        width: grid * cell_w,
        height: grid * cell_h,
        pixels: vec![32; (grid * cell_w * grid * cell_h * 3) as usize],
    };
    let count = u64::from(grid * grid).min(config.num_images);
    for index in 0..count {
        let scene = build_scene(config, &table, index)?;
        let (gx, gy) = (
            (index % u64::from(grid)) as u32,
            (index / u64::from(grid)) as u32,
        );
        blit_image(&mut sheet, &scene.image, gx * cell_w, gy * cell_h);
        blit_mask(&mut sheet, &scene.mask, gx * cell_w + w, gy * cell_h);
    }
    Ok(sheet)
}
