//! PNG and binary PNM (P5/P6) decoding into [`RasterImage`], PNG encoding.

use std::path::Path;

use gbsp_core::RasterImage;
use image::{DynamicImage, ImageFormat, ImageReader};

use crate::error::{CliError, Result};

/// Loads an 8-bit gray or RGB image. Alpha is dropped, 16-bit samples are
/// reduced to 8 bits.
pub fn load_image(path: &Path) -> Result<RasterImage> {
    let reader = ImageReader::open(path)
        .map_err(|e| CliError::io(path, e))?
        .with_guessed_format()
        .map_err(|e| CliError::io(path, e))?;
    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Pnm) => {}
        other => {
            return Err(CliError::Decode {
                path: path.into(),
                message: format!("unsupported format {other:?} (expected PNG, PGM or PPM)"),
            })
        }
    }
    let decoded = reader.decode().map_err(|e| CliError::Decode {
        path: path.into(),
        message: e.to_string(),
    })?;
    from_dynamic(decoded).map_err(|e| CliError::Decode {
        path: path.into(),
        message: e.to_string(),
    })
}

pub fn from_dynamic(img: DynamicImage) -> gbsp_core::Result<RasterImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    if img.color().has_color() {
        RasterImage::new(h, w, 3, img.into_rgb8().into_raw())
    } else {
        RasterImage::new(h, w, 1, img.into_luma8().into_raw())
    }
}

pub fn to_dynamic(img: &RasterImage) -> DynamicImage {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let data = img.data().to_vec();
    if img.channels() == 3 {
        DynamicImage::ImageRgb8(image::RgbImage::from_raw(w, h, data).expect("buffer sized by RasterImage"))
    } else {
        DynamicImage::ImageLuma8(image::GrayImage::from_raw(w, h, data).expect("buffer sized by RasterImage"))
    }
}

pub fn save_png(img: &RasterImage, path: &Path) -> Result<()> {
    to_dynamic(img)
        .save_with_format(path, ImageFormat::Png)
        .map_err(|e| match e {
            image::ImageError::IoError(io) => CliError::io(path, io),
            other => CliError::Decode {
                path: path.into(),
                message: other.to_string(),
            },
        })
}
