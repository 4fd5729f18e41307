//! Raster images and input normalization.

use crate::error::{Error, Result};

/// Row-major 8-bit raster with one (gray) or three (RGB) channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<u8>,
}

impl RasterImage {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidImage(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        if height == 0 || width == 0 {
            return Err(Error::InvalidImage(format!("empty image {height}x{width}")));
        }
        let expected = height * width * channels;
        if data.len() != expected {
            return Err(Error::InvalidImage(format!(
                "buffer has {} bytes, expected {height}x{width}x{channels} = {expected}",
                data.len()
            )));
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    /// Image where every pixel holds `value` in all channels.
    pub fn constant(height: usize, width: usize, channels: usize, value: u8) -> Result<Self> {
        Self::new(height, width, channels, vec![value; height * width * channels])
    }

    /// Builds an image by evaluating `f(row, col, channel)` for every sample.
    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> u8,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(height * width * channels);
        for row in 0..height {
            for col in 0..width {
                for c in 0..channels {
                    data.push(f(row, col, c));
                }
            }
        }
        Self::new(height, width, channels, data)
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    /// Side length when the image is square.
    pub fn square_side(&self) -> Option<usize> {
        (self.height == self.width).then_some(self.height)
    }

    /// Channel samples of the pixel at `(row, col)`.
    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> &[u8] {
        let start = (row * self.width + col) * self.channels;
        &self.data[start..start + self.channels]
    }

    /// Contiguous samples of `len` pixels starting at `(row, col)`.
    #[inline]
    pub(crate) fn row_span(&self, row: usize, col: usize, len: usize) -> &[u8] {
        let start = (row * self.width + col) * self.channels;
        &self.data[start..start + len * self.channels]
    }

    /// Pads to a square of the larger side by replicating the last row or column.
    pub fn pad_to_square(&self) -> RasterImage {
        let side = self.height.max(self.width);
        if self.height == self.width {
            return self.clone();
        }
        let c = self.channels;
        let mut data = Vec::with_capacity(side * side * c);
        for row in 0..side {
            let src_row = row.min(self.height - 1);
            for col in 0..side {
                let src_col = col.min(self.width - 1);
                data.extend_from_slice(self.pixel(src_row, src_col));
            }
        }
        RasterImage {
            height: side,
            width: side,
            channels: c,
            data,
        }
    }

    /// Nearest-neighbor resample of a square image to `side`×`side`.
    ///
    /// Destination pixel `d` samples source pixel `floor((2d + 1)·src / (2·side))`.
    pub fn resize_nearest(&self, side: usize) -> Result<RasterImage> {
        if self.height != self.width {
            return Err(Error::ImageMismatch(format!(
                "nearest resize expects a square image, got {}x{}",
                self.height, self.width
            )));
        }
        if side == 0 {
            return Err(Error::InvalidImage("target side is zero".into()));
        }
        let src = self.height;
        if src == side {
            return Ok(self.clone());
        }
        let map: Vec<usize> = (0..side)
            .map(|d| ((2 * d + 1) * src / (2 * side)).min(src - 1))
            .collect();
        let c = self.channels;
        let mut data = Vec::with_capacity(side * side * c);
        for &sr in &map {
            for &sc in &map {
                data.extend_from_slice(self.pixel(sr, sc));
            }
        }
        Ok(RasterImage {
            height: side,
            width: side,
            channels: c,
            data,
        })
    }
}

/// What [`normalize_square`] did to its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Normalization {
    pub original_height: usize,
    pub original_width: usize,
    /// Side after edge-replication padding.
    pub padded_side: usize,
    /// Final side.
    pub side: usize,
}

impl Normalization {
    pub fn padded(&self) -> bool {
        self.original_height != self.original_width
    }

    pub fn resized(&self) -> bool {
        self.padded_side != self.side
    }

    pub fn is_identity(&self) -> bool {
        !self.padded() && !self.resized()
    }
}

/// Pads `image` to a square and resamples it to `side` pixels per edge.
pub fn normalize_square(image: &RasterImage, side: usize) -> Result<(RasterImage, Normalization)> {
    let padded = image.pad_to_square();
    let padded_side = padded.height();
    let out = padded.resize_nearest(side)?;
    Ok((
        out,
        Normalization {
            original_height: image.height(),
            original_width: image.width(),
            padded_side,
            side,
        },
    ))
}

/// Nearest positive multiple of `unit` to `side`; ties round up.
pub fn nearest_valid_side(side: usize, unit: usize) -> usize {
    assert!(unit > 0, "unit must be positive");
    (((side + unit / 2) / unit).max(1)) * unit
}
