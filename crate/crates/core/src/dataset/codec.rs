//! PNG encoding of images and label masks.
//!
//! Masks are single-channel PNGs: 8-bit when the dataset has at most 255
//! categories, 16-bit otherwise. Images are 8-bit RGB.

use std::io::Cursor;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{DynamicImage, ImageBuffer, ImageEncoder, Luma, Rgb};

use crate::error::{Error, Result};
use crate::scene::{ImageCanvas, LabelMask};

fn codec_err(path: &Path, source: image::ImageError) -> Error {
    Error::Image {
        path: path.to_path_buf(),
        source,
    }
}

pub fn encode_image(image: &ImageCanvas) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    PngEncoder::new(&mut out)
        .write_image(
            &image.pixels,
            image.width,
            image.height,
            image::ExtendedColorType::Rgb8,
        )
        .map_err(|e| codec_err(Path::new("<image>"), e))?;
    Ok(out)
}

/// Encodes `mask` at `bit_depth` (8 or 16). Fails if a label does not fit.
pub fn encode_mask(mask: &LabelMask, bit_depth: u8) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let err = |e| codec_err(Path::new("<mask>"), e);
    match bit_depth {
        8 => {
            if mask.max_label() > 255 {
                return Err(Error::invalid(format!(
                    "label {} does not fit an 8-bit mask",
                    mask.max_label()
                )));
            }
            let bytes: Vec<u8> = mask.labels.iter().map(|&l| l as u8).collect();
            PngEncoder::new(&mut out)
                .write_image(
                    &bytes,
                    mask.width,
                    mask.height,
                    image::ExtendedColorType::L8,
                )
                .map_err(err)?;
        }
        16 => {
            let buf: ImageBuffer<Luma<u16>, Vec<u16>> =
                ImageBuffer::from_raw(mask.width, mask.height, mask.labels.clone())
                    .expect("label buffer matches dimensions");
            buf.write_with_encoder(PngEncoder::new(&mut out))
                .map_err(err)?;
        }
        other => {
            return Err(Error::invalid(format!(
                "unsupported mask bit depth {other}"
            )))
        }
    }
    Ok(out)
}

/// Decoded label mask plus the bit depth it was stored with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedMask {
    pub mask: LabelMask,
    pub bit_depth: u8,
}

pub fn decode_mask(bytes: &[u8], path: &Path) -> Result<DecodedMask> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| codec_err(path, e))?;
    let (width, height) = (img.width(), img.height());
    let (labels, bit_depth) = match img {
        DynamicImage::ImageLuma8(buf) => (buf.into_raw().into_iter().map(u16::from).collect(), 8),
        DynamicImage::ImageLuma16(buf) => (buf.into_raw(), 16),
        other => {
            return Err(Error::malformed(
                format!("mask {}", path.display()),
                format!("expected single-channel PNG, found {:?}", other.color()),
            ))
        }
    };
    Ok(DecodedMask {
        mask: LabelMask {
            width,
            height,
            labels,
        },
        bit_depth,
    })
}

pub fn decode_image(bytes: &[u8], path: &Path) -> Result<ImageCanvas> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| codec_err(path, e))?;
    let rgb: ImageBuffer<Rgb<u8>, Vec<u8>> = match img {
        DynamicImage::ImageRgb8(buf) => buf,
        other => {
            return Err(Error::malformed(
                format!("image {}", path.display()),
                format!("expected 8-bit RGB PNG, found {:?}", other.color()),
            ))
        }
    };
    Ok(ImageCanvas {
        width: rgb.width(),
        height: rgb.height(),
        pixels: rgb.into_raw(),
    })
}

/// Reads only the PNG header: `(width, height)`.
pub fn png_dimensions(bytes: &[u8], path: &Path) -> Result<(u32, u32)> {
    let reader = image::ImageReader::with_format(Cursor::new(bytes), image::ImageFormat::Png);
    reader.into_dimensions().map_err(|e| codec_err(path, e))
}
