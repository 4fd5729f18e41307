//! Center statistics and block purity scores.
//!
//! All pixel-level arithmetic is carried out on integers scaled by the
//! window area `k²`: a pixel `x` is consistent with the center mean
//! `m = S/k²` iff `Σ_c |k²·x_c − S_c| < τ·k²`, and the mean deviation is
//! `Σ_p Σ_c |k²·x_c − S_c| / (k²·|block|)`. Only the final division is
//! done in the scalar type.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::RasterImage;
use crate::scalar::Scalar;
use crate::schedule::ScheduleViolation;

/// Axis-aligned square block of pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockRect {
    pub top: usize,
    pub left: usize,
    pub side: usize,
}

impl BlockRect {
    pub const fn new(top: usize, left: usize, side: usize) -> Self {
        Self { top, left, side }
    }

    /// Cell `(row, col)` of a grid of `side`-pixel cells.
    pub const fn cell(row: usize, col: usize, side: usize) -> Self {
        Self::new(row * side, col * side, side)
    }

    pub const fn area(&self) -> usize {
        self.side * self.side
    }

    /// Top-left corner of the centered `k`×`k` window. Odd slack leans top-left.
    pub const fn window_origin(&self, k: usize) -> (usize, usize) {
        let offset = (self.side - k) / 2;
        (self.top + offset, self.left + offset)
    }

    fn check_within(&self, image: &RasterImage) -> Result<()> {
        if self.side == 0 {
            return Err(Error::DegenerateBlock("block side is zero".into()));
        }
        if self.top + self.side > image.height() || self.left + self.side > image.width() {
            return Err(Error::ImageMismatch(format!(
                "block at ({}, {}) side {} exceeds {}x{} image",
                self.top,
                self.left,
                self.side,
                image.height(),
                image.width()
            )));
        }
        Ok(())
    }
}

/// Per-channel mean over the central window of a block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterStat<T> {
    means: [T; 3],
    sums: [u64; 3],
    channels: usize,
    window: usize,
}

impl<T: Scalar> CenterStat<T> {
    fn from_sums(sums: [u64; 3], channels: usize, window: usize) -> Self {
        let area = T::from_count((window * window) as u64);
        let mut means = [T::zero(); 3];
        for c in 0..channels {
            means[c] = T::from_count(sums[c]) / area;
        }
        Self {
            means,
            sums,
            channels,
            window,
        }
    }

    /// Channel means, one entry per image channel.
    pub fn means(&self) -> &[T] {
        &self.means[..self.channels]
    }

    pub fn mean(&self, channel: usize) -> T {
        self.means()[channel]
    }

    /// Integer channel sums over the window.
    pub fn sums(&self) -> &[u64] {
        &self.sums[..self.channels]
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn window(&self) -> usize {
        self.window
    }
}

/// Which block score drives selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    /// Fraction of pixels whose ℓ₁ deviation from the center mean is below τ.
    /// Higher is purer.
    #[default]
    Indicator,
    /// Mean ℓ₁ deviation from the center mean. Lower is purer.
    Deviation,
}

impl Metric {
    pub fn higher_is_purer(self) -> bool {
        matches!(self, Metric::Indicator)
    }

    /// Maps a score to a value where larger always means purer.
    pub fn preference<T: Scalar>(self, score: T) -> T {
        match self {
            Metric::Indicator => score,
            Metric::Deviation => -score,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Indicator => "indicator",
            Metric::Deviation => "deviation",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "indicator" => Ok(Metric::Indicator),
            "deviation" => Ok(Metric::Deviation),
            other => Err(format!("unknown metric '{other}' (expected indicator|deviation)")),
        }
    }
}

/// Mean of the centered `k`×`k` window of `block`, per channel.
pub fn center_statistic<T: Scalar>(
    image: &RasterImage,
    block: BlockRect,
    k: usize,
) -> Result<CenterStat<T>> {
    block.check_within(image)?;
    if k == 0 {
        return Err(Error::DegenerateBlock("center window is empty".into()));
    }
    if k > block.side {
        return Err(Error::WindowTooLarge {
            window: k,
            side: block.side,
        });
    }
    Ok(center_unchecked(image, block, k))
}

fn center_unchecked<T: Scalar>(image: &RasterImage, block: BlockRect, k: usize) -> CenterStat<T> {
    let channels = image.channels();
    let (top, left) = block.window_origin(k);
    let mut sums = [0u64; 3];
    for row in top..top + k {
        for px in image.row_span(row, left, k).chunks_exact(channels) {
            for (c, &v) in px.iter().enumerate() {
                sums[c] += u64::from(v);
            }
        }
    }
    CenterStat::from_sums(sums, channels, k)
}

/// Smallest integer the scaled ℓ₁ deviation must stay strictly below.
fn scaled_limit<T: Scalar>(tau: T, window: usize) -> i64 {
    let limit = (tau * T::from_count((window * window) as u64)).ceil();
    limit.to_i64().unwrap_or(if limit > T::zero() { i64::MAX } else { 0 })
}

fn signed_sums<T>(m: &CenterStat<T>) -> [i64; 3] {
    let mut out = [0i64; 3];
    for c in 0..m.channels {
        out[c] = m.sums[c] as i64;
    }
    out
}

/// Calls `visit` with `Σ_c |k²·x_c − S_c|` for every pixel of `block`.
#[inline]
fn for_each_scaled_l1<T>(image: &RasterImage, block: BlockRect, m: &CenterStat<T>, visit: impl FnMut(i64)) {
    match image.channels() {
        1 => scan::<T, 1>(image, block, m, visit),
        _ => scan::<T, 3>(image, block, m, visit),
    }
}

#[inline]
fn scan<T, const C: usize>(image: &RasterImage, block: BlockRect, m: &CenterStat<T>, mut visit: impl FnMut(i64)) {
    let scale = (m.window * m.window) as i64;
    let sums = signed_sums(m);
    for row in block.top..block.top + block.side {
        for px in image.row_span(row, block.left, block.side).chunks_exact(C) {
            let mut d = 0i64;
            for c in 0..C {
                d += (i64::from(px[c]) * scale - sums[c]).abs();
            }
            visit(d);
        }
    }
}

/// Number of block pixels whose ℓ₁ deviation from `m` is strictly below `tau`.
fn consistent_count<T: Scalar>(image: &RasterImage, block: BlockRect, m: &CenterStat<T>, tau: T) -> u64 {
    let limit = scaled_limit(tau, m.window);
    let mut count = 0u64;
    for_each_scaled_l1(image, block, m, |d| count += u64::from(d < limit));
    count
}

/// Σ over block pixels of the ℓ₁ deviation from `m`, scaled by `k²`.
fn scaled_deviation_total<T: Scalar>(image: &RasterImage, block: BlockRect, m: &CenterStat<T>) -> u64 {
    let mut total = 0u64;
    for_each_scaled_l1(image, block, m, |d| total += d as u64);
    total
}

fn check_stat<T>(image: &RasterImage, m: &CenterStat<T>) -> Result<()> {
    if m.channels != image.channels() {
        return Err(Error::ImageMismatch(format!(
            "center statistic has {} channels, image has {}",
            m.channels,
            image.channels()
        )));
    }
    if m.window == 0 {
        return Err(Error::DegenerateBlock("center window is empty".into()));
    }
    Ok(())
}

/// Thresholded purity: the fraction of block pixels `p` with
/// `‖x_p − m‖₁ < tau`. Ties at exactly `tau` are inconsistent.
pub fn purity_indicator<T: Scalar>(
    image: &RasterImage,
    block: BlockRect,
    m: &CenterStat<T>,
    tau: T,
) -> Result<T> {
    block.check_within(image)?;
    check_stat(image, m)?;
    let count = consistent_count(image, block, m, tau);
    Ok(T::from_count(count) / T::from_count(block.area() as u64))
}

/// Mean ℓ₁ deviation of block pixels from `m`.
pub fn quality_deviation<T: Scalar>(image: &RasterImage, block: BlockRect, m: &CenterStat<T>) -> Result<T> {
    block.check_within(image)?;
    check_stat(image, m)?;
    let total = scaled_deviation_total(image, block, m);
    let denom = (m.window * m.window * block.area()) as u64;
    Ok(T::from_count(total) / T::from_count(denom))
}

/// Scores of every cell of one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreGrid<T> {
    pub grid_size: usize,
    pub side: usize,
    pub metric: Metric,
    /// Row-major cell scores.
    pub scores: Vec<T>,
    /// Row-major integer tallies behind each score: consistent-pixel counts
    /// for the indicator, `k²`-scaled deviation totals for the deviation metric.
    pub tallies: Vec<u64>,
    pub centers: Vec<CenterStat<T>>,
    /// Pixels read: `k²` for each center window plus every block pixel.
    pub pixel_visits: u64,
}

impl<T: Scalar> ScoreGrid<T> {
    #[inline]
    pub fn score(&self, row: usize, col: usize) -> T {
        self.scores[row * self.grid_size + col]
    }
}

/// Scores every cell of the `grid_size`×`grid_size` partition of a square image.
///
/// Cells are independent and are evaluated in parallel; each pixel is read
/// once for its block plus once more if it lies in a center window.
pub fn purity_grid<T: Scalar>(
    image: &RasterImage,
    grid_size: usize,
    side: usize,
    k: usize,
    tau: T,
    metric: Metric,
) -> Result<ScoreGrid<T>> {
    let image_side = image.square_side().ok_or_else(|| {
        Error::ImageMismatch(format!(
            "image must be square, got {}x{}",
            image.height(),
            image.width()
        ))
    })?;
    if grid_size == 0 || side == 0 || grid_size * side != image_side {
        return Err(ScheduleViolation::Tiling {
            stage: 1,
            grid: grid_size,
            side,
            image_side,
        }
        .into());
    }
    if k == 0 {
        return Err(Error::DegenerateBlock("center window is empty".into()));
    }
    if k > side {
        return Err(Error::WindowTooLarge { window: k, side });
    }

    let cells: Vec<(T, u64, CenterStat<T>)> = (0..grid_size * grid_size)
        .into_par_iter()
        .map(|idx| {
            let block = BlockRect::cell(idx / grid_size, idx % grid_size, side);
            let m = center_unchecked::<T>(image, block, k);
            match metric {
                Metric::Indicator => {
                    let count = consistent_count(image, block, &m, tau);
                    let score = T::from_count(count) / T::from_count(block.area() as u64);
                    (score, count, m)
                }
                Metric::Deviation => {
                    let total = scaled_deviation_total(image, block, &m);
                    let denom = (k * k * block.area()) as u64;
                    (T::from_count(total) / T::from_count(denom), total, m)
                }
            }
        })
        .collect();

    let n = cells.len();
    let mut scores = Vec::with_capacity(n);
    let mut tallies = Vec::with_capacity(n);
    let mut centers = Vec::with_capacity(n);
    for (score, tally, m) in cells {
        scores.push(score);
        tallies.push(tally);
        centers.push(m);
    }
    Ok(ScoreGrid {
        grid_size,
        side,
        metric,
        scores,
        tallies,
        centers,
        pixel_visits: (n * (k * k + side * side)) as u64,
    })
}
