//! Square superpixels, their tiling of the image and the per-pixel label map.

use crate::error::{Error, Result};
use crate::purity::{BlockRect, CenterStat};
use crate::scalar::Scalar;
use crate::schedule::ScaleSchedule;

/// One selected cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superpixel<T> {
    /// 0-based stage index.
    pub stage: usize,
    pub row: usize,
    pub col: usize,
    pub side: usize,
    /// Score of the selection metric on this cell.
    pub purity: T,
    pub center: CenterStat<T>,
}

impl<T> Superpixel<T> {
    pub fn rect(&self) -> BlockRect {
        BlockRect::cell(self.row, self.col, self.side)
    }
}

/// Output of generation: disjoint square regions covering a square image,
/// ordered by stage then row-major cell index.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpixelSet<T> {
    schedule: ScaleSchedule<T>,
    regions: Vec<Superpixel<T>>,
    image_side: usize,
}

impl<T: Scalar> SuperpixelSet<T> {
    pub(crate) fn from_parts(schedule: ScaleSchedule<T>, regions: Vec<Superpixel<T>>) -> Self {
        let image_side = schedule.image_side();
        Self {
            schedule,
            regions,
            image_side,
        }
    }

    pub fn schedule(&self) -> &ScaleSchedule<T> {
        &self.schedule
    }

    pub fn regions(&self) -> &[Superpixel<T>] {
        &self.regions
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn image_side(&self) -> usize {
        self.image_side
    }

    /// Number of regions contributed by each stage.
    pub fn stage_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.schedule.stages()];
        for r in &self.regions {
            counts[r.stage] += 1;
        }
        counts
    }

    /// How many regions cover each pixel, row-major.
    pub fn coverage_counts(&self) -> Vec<u32> {
        let side = self.image_side;
        let mut counts = vec![0u32; side * side];
        for r in &self.regions {
            let rect = r.rect();
            for row in rect.top..rect.top + rect.side {
                for c in &mut counts[row * side + rect.left..row * side + rect.left + rect.side] {
                    *c += 1;
                }
            }
        }
        counts
    }

    /// True if every pixel is covered by exactly one region.
    pub fn is_perfect_tiling(&self) -> bool {
        self.coverage_counts().iter().all(|&c| c == 1)
    }
}

/// Row-major region index per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    height: usize,
    width: usize,
    region_count: usize,
    labels: Vec<u32>,
}

impl LabelMap {
    pub fn new(height: usize, width: usize, region_count: usize, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != height * width {
            return Err(Error::ImageMismatch(format!(
                "label buffer has {} entries, expected {height}x{width}",
                labels.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l as usize >= region_count) {
            return Err(Error::ImageMismatch(format!(
                "label {bad} out of range for {region_count} regions"
            )));
        }
        Ok(Self {
            height,
            width,
            region_count,
            labels,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn region_count(&self) -> usize {
        self.region_count
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    /// Pixel count per label.
    pub fn label_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.region_count];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Recovers each label's square region. `None` where the labeled pixels
    /// do not form a filled square.
    pub fn regroup(&self) -> Vec<Option<BlockRect>> {
        let mut bounds = vec![(usize::MAX, usize::MAX, 0usize, 0usize); self.region_count];
        for row in 0..self.height {
            for col in 0..self.width {
                let b = &mut bounds[self.label(row, col) as usize];
                b.0 = b.0.min(row);
                b.1 = b.1.min(col);
                b.2 = b.2.max(row + 1);
                b.3 = b.3.max(col + 1);
            }
        }
        let sizes = self.label_sizes();
        bounds
            .into_iter()
            .zip(sizes)
            .map(|((top, left, bottom, right), size)| {
                if size == 0 || bottom - top != right - left || size != (bottom - top).pow(2) {
                    None
                } else {
                    Some(BlockRect::new(top, left, bottom - top))
                }
            })
            .collect()
    }
}

/// Paints each region's index onto its pixels.
pub fn to_label_map<T: Scalar>(set: &SuperpixelSet<T>) -> LabelMap {
    let side = set.image_side();
    let mut labels = vec![0u32; side * side];
    for (idx, region) in set.regions().iter().enumerate() {
        let rect = region.rect();
        for row in rect.top..rect.top + rect.side {
            labels[row * side + rect.left..row * side + rect.left + rect.side].fill(idx as u32);
        }
    }
    LabelMap {
        height: side,
        width: side,
        region_count: set.len(),
        labels,
    }
}
