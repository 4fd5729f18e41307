//! Named configurations from the published experiments.
//!
//! Each classification/retrieval preset lists the region counts reported per
//! granularity, coarse to fine. The last count is the finest-stage
//! completion, so the budgets are all counts but the last, and the grids are
//! the ones on which those counts tile the stated input side exactly.

use gbsp_core::{ScaleSchedule, ScheduleViolation, TokenGrid, DEFAULT_CENTER_WINDOW};

/// Purity threshold used by every preset.
pub const DEFAULT_TAU: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub image_side: usize,
    pub grid_sizes: &'static [usize],
    /// Published region counts per granularity, coarse to fine.
    pub published_counts: &'static [usize],
    /// Selection budgets for the non-final stages when no counts are published.
    pub default_budgets: Option<&'static [usize]>,
    pub tau: f64,
    /// Token grid and removal counts for the pruning experiments.
    pub token_grid: Option<TokenGrid>,
    pub removals: &'static [usize],
    pub note: &'static str,
}

impl Preset {
    pub fn side_lengths(&self) -> Vec<usize> {
        self.grid_sizes.iter().map(|r| self.image_side / r).collect()
    }

    pub fn budgets(&self) -> Vec<usize> {
        match self.default_budgets {
            Some(b) => b.to_vec(),
            None => self.published_counts[..self.published_counts.len() - 1].to_vec(),
        }
    }

    pub fn schedule(&self) -> Result<ScaleSchedule<f64>, ScheduleViolation> {
        ScaleSchedule::from_grid_sizes(
            self.image_side,
            self.grid_sizes.to_vec(),
            self.budgets(),
            DEFAULT_CENTER_WINDOW,
            self.tau,
        )
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "mnist",
        image_side: 28,
        grid_sizes: &[7, 14],
        published_counts: &[25, 96],
        default_budgets: None,
        tau: DEFAULT_TAU,
        token_grid: None,
        removals: &[],
        note: "MNIST classification: 25 coarse and 96 fine blocks on 28x28 input",
    },
    Preset {
        name: "cifar10",
        image_side: 32,
        grid_sizes: &[8, 16],
        published_counts: &[45, 76],
        default_budgets: None,
        tau: DEFAULT_TAU,
        token_grid: None,
        removals: &[],
        note: "CIFAR-10 classification: 45 and 76 blocks at two granularities on 32x32 input",
    },
    Preset {
        name: "flip",
        image_side: 224,
        grid_sizes: &[7, 14, 28],
        published_counts: &[24, 50, 200],
        default_budgets: None,
        tau: DEFAULT_TAU,
        token_grid: None,
        removals: &[],
        note: "image-text retrieval: 24, 50 and 200 blocks at three granularities on 224x224 input",
    },
    Preset {
        name: "detection",
        image_side: 640,
        grid_sizes: &[20, 40, 80],
        published_counts: &[],
        default_budgets: Some(&[200, 400]),
        tau: DEFAULT_TAU,
        token_grid: Some(TokenGrid::new(20, 32)),
        removals: &[50, 100, 200],
        note: "detection encoder: 640x640 input, blocks [32, 16, 8], 20x20 tokens; \
               generation budgets are not published and default to 200/400",
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gbsp_core::expected_cardinality;

    #[test]
    fn published_counts_are_reproduced_by_the_schedules() {
        for p in PRESETS.iter().filter(|p| !p.published_counts.is_empty()) {
            let s = p.schedule().unwrap();
            assert_eq!(s.expected_stage_counts(), p.published_counts, "{}", p.name);
            assert_eq!(expected_cardinality(&s).unwrap(), p.published_counts.iter().sum::<usize>());
        }
    }

    #[test]
    fn detection_block_sides() {
        let p = find("detection").unwrap();
        assert_eq!(p.side_lengths(), vec![32, 16, 8]);
        assert_eq!(p.tau, 10.0);
        assert!(p.schedule().is_ok());
        assert_eq!(p.token_grid.unwrap().total(), 400);
    }
}
