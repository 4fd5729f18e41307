//! Coarse-to-fine scale schedules.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default side of the central window used for the center statistic.
pub const DEFAULT_CENTER_WINDOW: usize = 2;

/// The parameters of one generation run.
///
/// Stage `i` (0-based here, 1-based in violation messages) partitions the
/// image into `grid_sizes[i]`² square cells of `side_lengths[i]` pixels.
/// Every stage except the last selects `budgets[i]` cells; the last stage
/// keeps whatever is still uncovered.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSchedule<T> {
    grid_sizes: Vec<usize>,
    side_lengths: Vec<usize>,
    budgets: Vec<usize>,
    center_window: usize,
    tau: T,
}

impl<T: Scalar> ScaleSchedule<T> {
    /// Stores the parameters as given. Use [`validate_schedule`] to check them.
    pub fn new(
        grid_sizes: Vec<usize>,
        side_lengths: Vec<usize>,
        budgets: Vec<usize>,
        center_window: usize,
        tau: T,
    ) -> Self {
        Self {
            grid_sizes,
            side_lengths,
            budgets,
            center_window,
            tau,
        }
    }

    /// Derives grid sizes from block sides for an image of `image_side` pixels.
    pub fn from_block_sides(
        image_side: usize,
        side_lengths: Vec<usize>,
        budgets: Vec<usize>,
        center_window: usize,
        tau: T,
    ) -> Result<Self, ScheduleViolation> {
        let mut grid_sizes = Vec::with_capacity(side_lengths.len());
        for (i, &s) in side_lengths.iter().enumerate() {
            if s == 0 {
                return Err(ScheduleViolation::ZeroSide { stage: i + 1 });
            }
            if !image_side.is_multiple_of(s) {
                return Err(ScheduleViolation::Tiling {
                    stage: i + 1,
                    grid: image_side / s,
                    side: s,
                    image_side,
                });
            }
            grid_sizes.push(image_side / s);
        }
        let schedule = Self::new(grid_sizes, side_lengths, budgets, center_window, tau);
        validate_schedule(&schedule, image_side)?;
        Ok(schedule)
    }

    /// Derives block sides from grid sizes for an image of `image_side` pixels.
    pub fn from_grid_sizes(
        image_side: usize,
        grid_sizes: Vec<usize>,
        budgets: Vec<usize>,
        center_window: usize,
        tau: T,
    ) -> Result<Self, ScheduleViolation> {
        for (i, &r) in grid_sizes.iter().enumerate() {
            if r == 0 {
                return Err(ScheduleViolation::ZeroGrid { stage: i + 1 });
            }
            if i > 0 {
                let parent = grid_sizes[i - 1];
                if r <= parent {
                    return Err(ScheduleViolation::GridsNotAscending { stage: i + 1 });
                }
                if r % parent != 0 {
                    return Err(ScheduleViolation::NotMultiple {
                        stage: i + 1,
                        grid: r,
                        parent,
                    });
                }
            }
        }
        let mut side_lengths = Vec::with_capacity(grid_sizes.len());
        for (i, &r) in grid_sizes.iter().enumerate() {
            if !image_side.is_multiple_of(r) {
                return Err(ScheduleViolation::Tiling {
                    stage: i + 1,
                    grid: r,
                    side: image_side / r,
                    image_side,
                });
            }
            side_lengths.push(image_side / r);
        }
        let schedule = Self::new(grid_sizes, side_lengths, budgets, center_window, tau);
        validate_schedule(&schedule, image_side)?;
        Ok(schedule)
    }

    pub fn stages(&self) -> usize {
        self.grid_sizes.len()
    }

    pub fn grid_sizes(&self) -> &[usize] {
        &self.grid_sizes
    }

    pub fn side_lengths(&self) -> &[usize] {
        &self.side_lengths
    }

    pub fn budgets(&self) -> &[usize] {
        &self.budgets
    }

    pub fn center_window(&self) -> usize {
        self.center_window
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// Image side implied by the coarsest stage, `r₁·s₁`.
    pub fn image_side(&self) -> usize {
        match (self.grid_sizes.first(), self.side_lengths.first()) {
            (Some(r), Some(s)) => r * s,
            _ => 0,
        }
    }

    pub fn finest_grid(&self) -> usize {
        self.grid_sizes.last().copied().unwrap_or(0)
    }

    /// Same schedule with a different selection budget list.
    pub fn with_budgets(&self, budgets: Vec<usize>) -> Self {
        Self {
            budgets,
            ..self.clone()
        }
    }

    /// Same schedule with a different threshold.
    pub fn with_tau(&self, tau: T) -> Self {
        Self { tau, ..self.clone() }
    }

    /// Cells still uncovered when stage `stage` (0-based) starts, assuming every
    /// earlier budget was spent in full.
    pub fn uncovered_available(&self, stage: usize) -> usize {
        let r = self.grid_sizes[stage];
        let claimed: usize = self.budgets[..stage]
            .iter()
            .zip(&self.grid_sizes)
            .map(|(&k, &rj)| k * (r / rj) * (r / rj))
            .sum();
        (r * r).saturating_sub(claimed)
    }

    /// Regions contributed by each stage under budgeted selection.
    pub fn expected_stage_counts(&self) -> Vec<usize> {
        let mut counts = self.budgets.clone();
        counts.push(self.uncovered_available(self.stages() - 1));
        counts
    }
}

/// First invariant a schedule breaks. Stage numbers are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleViolation {
    NoStages,
    LengthMismatch {
        grids: usize,
        sides: usize,
        budgets: usize,
    },
    ZeroGrid {
        stage: usize,
    },
    ZeroSide {
        stage: usize,
    },
    GridsNotAscending {
        stage: usize,
    },
    NotMultiple {
        stage: usize,
        grid: usize,
        parent: usize,
    },
    SidesNotDescending {
        stage: usize,
    },
    Tiling {
        stage: usize,
        grid: usize,
        side: usize,
        image_side: usize,
    },
    ZeroWindow,
    WindowTooLarge {
        window: usize,
        finest_side: usize,
    },
    InvalidTau(f64),
    BudgetExceeds {
        stage: usize,
        budget: usize,
        available: usize,
    },
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ScheduleViolation::*;
        match *self {
            NoStages => write!(f, "schedule has no stages"),
            LengthMismatch {
                grids,
                sides,
                budgets,
            } => write!(
                f,
                "length mismatch: {grids} grid sizes, {sides} side lengths, {budgets} budgets \
                 (need L, L and L-1)"
            ),
            ZeroGrid { stage } => write!(f, "r{stage} must be positive"),
            ZeroSide { stage } => write!(f, "s{stage} must be positive"),
            GridsNotAscending { stage } => {
                write!(f, "r{} not greater than r{}", stage, stage - 1)
            }
            NotMultiple {
                stage,
                grid,
                parent,
            } => write!(
                f,
                "r{} not multiple of r{} ({grid} mod {parent} != 0)",
                stage,
                stage - 1
            ),
            SidesNotDescending { stage } => {
                write!(f, "s{} not smaller than s{}", stage, stage - 1)
            }
            Tiling {
                stage,
                grid,
                side,
                image_side,
            } => write!(
                f,
                "r{stage} x s{stage} = {grid} x {side} = {} does not tile image side {image_side}",
                grid * side
            ),
            ZeroWindow => write!(f, "center window k must be positive"),
            WindowTooLarge {
                window,
                finest_side,
            } => write!(
                f,
                "center window k={window} exceeds finest side s_L={finest_side}"
            ),
            InvalidTau(t) => write!(f, "tau must be finite and non-negative, got {t}"),
            BudgetExceeds {
                stage,
                budget,
                available,
            } => write!(
                f,
                "K{stage} = {budget} exceeds {available} uncovered cells at stage {stage}"
            ),
        }
    }
}

impl std::error::Error for ScheduleViolation {}

/// Checks every schedule invariant against `image_side`, reporting the first
/// one that fails.
pub fn validate_schedule<T: Scalar>(
    schedule: &ScaleSchedule<T>,
    image_side: usize,
) -> Result<(), ScheduleViolation> {
    use ScheduleViolation::*;
    let grids = &schedule.grid_sizes;
    let sides = &schedule.side_lengths;
    let stages = grids.len();
    if stages == 0 {
        return Err(NoStages);
    }
    if sides.len() != stages || schedule.budgets.len() + 1 != stages {
        return Err(LengthMismatch {
            grids: stages,
            sides: sides.len(),
            budgets: schedule.budgets.len(),
        });
    }
    for i in 0..stages {
        if grids[i] == 0 {
            return Err(ZeroGrid { stage: i + 1 });
        }
        if sides[i] == 0 {
            return Err(ZeroSide { stage: i + 1 });
        }
    }
    for i in 1..stages {
        if grids[i] <= grids[i - 1] {
            return Err(GridsNotAscending { stage: i + 1 });
        }
        if !grids[i].is_multiple_of(grids[i - 1]) {
            return Err(NotMultiple {
                stage: i + 1,
                grid: grids[i],
                parent: grids[i - 1],
            });
        }
        if sides[i] >= sides[i - 1] {
            return Err(SidesNotDescending { stage: i + 1 });
        }
    }
    for i in 0..stages {
        if grids[i] * sides[i] != image_side {
            return Err(Tiling {
                stage: i + 1,
                grid: grids[i],
                side: sides[i],
                image_side,
            });
        }
    }
    if schedule.center_window == 0 {
        return Err(ZeroWindow);
    }
    if schedule.center_window > sides[stages - 1] {
        return Err(WindowTooLarge {
            window: schedule.center_window,
            finest_side: sides[stages - 1],
        });
    }
    let tau = schedule.tau.to_f64().unwrap_or(f64::NAN);
    if !tau.is_finite() || tau < 0.0 {
        return Err(InvalidTau(tau));
    }
    for i in 0..stages - 1 {
        let available = schedule.uncovered_available(i);
        if schedule.budgets[i] > available {
            return Err(BudgetExceeds {
                stage: i + 1,
                budget: schedule.budgets[i],
                available,
            });
        }
    }
    Ok(())
}

/// Number of regions produced by budgeted generation, independent of image
/// content: `ΣK + r_L² − ΣK·(r_L/r_ℓ)²`.
pub fn expected_cardinality<T: Scalar>(schedule: &ScaleSchedule<T>) -> Result<usize> {
    validate_schedule(schedule, schedule.image_side()).map_err(Error::from)?;
    let finest = schedule.finest_grid();
    let selected: usize = schedule.budgets.iter().sum();
    let claimed: usize = schedule
        .budgets
        .iter()
        .zip(&schedule.grid_sizes)
        .map(|(&k, &r)| k * (finest / r) * (finest / r))
        .sum();
    Ok(selected + finest * finest - claimed)
}
