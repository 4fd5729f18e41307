//! Region-boundary rendering.

use gbsp_core::{LabelMap, RasterImage};

use crate::error::{CliError, Result};

pub const BORDER_COLOR: [u8; 3] = [255, 0, 0];

/// Pixels on the image edge or with a 4-neighbor of a different label.
pub fn border_pixels(labels: &LabelMap) -> Vec<bool> {
    let (h, w) = (labels.height(), labels.width());
    let mut out = vec![false; h * w];
    for row in 0..h {
        for col in 0..w {
            let l = labels.label(row, col);
            out[row * w + col] = row == 0
                || col == 0
                || row + 1 == h
                || col + 1 == w
                || labels.label(row - 1, col) != l
                || labels.label(row + 1, col) != l
                || labels.label(row, col - 1) != l
                || labels.label(row, col + 1) != l;
        }
    }
    out
}

/// RGB copy of `image` with region borders painted in `color`.
pub fn render_overlay(image: &RasterImage, labels: &LabelMap, color: [u8; 3]) -> Result<RasterImage> {
    if image.height() != labels.height() || image.width() != labels.width() {
        return Err(CliError::Dimensions(format!(
            "image is {}x{}, label map is {}x{}",
            image.height(),
            image.width(),
            labels.height(),
            labels.width()
        )));
    }
    let border = border_pixels(labels);
    let w = image.width();
    let out = RasterImage::from_fn(image.height(), w, 3, |row, col, c| {
        if border[row * w + col] {
            color[c]
        } else if image.channels() == 3 {
            image.pixel(row, col)[c]
        } else {
            image.pixel(row, col)[0]
        }
    })?;
    Ok(out)
}
