//! Boolean occupancy grids and the coarse-to-fine expansion operator.

use crate::error::Result;
use crate::schedule::ScheduleViolation;

/// Row-major `grid_size`×`grid_size` occupancy grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaleMask {
    grid_size: usize,
    bits: Vec<bool>,
}

impl ScaleMask {
    pub fn empty(grid_size: usize) -> Self {
        Self {
            grid_size,
            bits: vec![false; grid_size * grid_size],
        }
    }

    pub fn full(grid_size: usize) -> Self {
        Self {
            grid_size,
            bits: vec![true; grid_size * grid_size],
        }
    }

    /// Wraps an existing bit vector; `None` if its length is not `grid_size²`.
    pub fn from_bits(grid_size: usize, bits: Vec<bool>) -> Option<Self> {
        (bits.len() == grid_size * grid_size).then_some(Self { grid_size, bits })
    }

    pub fn from_indices(grid_size: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = Self::empty(grid_size);
        for i in indices {
            mask.bits[i] = true;
        }
        mask
    }

    #[inline]
    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    #[inline]
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.grid_size + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.grid_size + col] = value;
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Row-major indices of set cells, ascending.
    pub fn set_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn complement(&self) -> Self {
        Self {
            grid_size: self.grid_size,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Cell-wise OR. Panics if the grids differ.
    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.grid_size, other.grid_size, "mask grids differ");
        Self {
            grid_size: self.grid_size,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a | *b).collect(),
        }
    }

    /// True if no cell is set in both masks.
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.grid_size == other.grid_size && !self.bits.iter().zip(&other.bits).any(|(a, b)| *a && *b)
    }
}

/// Maps a mask on an `r`-grid to the `child_grid`: a child cell is set iff its
/// aligned parent `(⌊i/t⌋, ⌊j/t⌋)`, `t = child_grid / r`, is set.
pub fn expand_mask(mask: &ScaleMask, child_grid: usize) -> Result<ScaleMask> {
    let r = mask.grid_size;
    if r == 0 || child_grid == 0 || !child_grid.is_multiple_of(r) {
        return Err(ScheduleViolation::NotMultiple {
            stage: 2,
            grid: child_grid,
            parent: r,
        }
        .into());
    }
    let t = child_grid / r;
    let mut out = ScaleMask::empty(child_grid);
    for prow in 0..r {
        for pcol in 0..r {
            if !mask.get(prow, pcol) {
                continue;
            }
            for row in prow * t..(prow + 1) * t {
                out.bits[row * child_grid + pcol * t..row * child_grid + (pcol + 1) * t].fill(true);
            }
        }
    }
    Ok(out)
}
