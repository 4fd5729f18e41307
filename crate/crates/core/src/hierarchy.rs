//! Coarse-to-fine selection of square superpixels.
//!
//! Each stage scores every cell of its grid, selects a budget of the purest
//! cells among those not yet covered by coarser selections, and pushes the
//! union of coverage and selection down to the next grid. The finest stage
//! keeps every cell that is still uncovered, which completes the tiling.

use crate::error::{Error, Result};
use crate::image::RasterImage;
use crate::mask::{expand_mask, ScaleMask};
use crate::purity::{purity_grid, Metric, ScoreGrid};
use crate::scalar::Scalar;
use crate::schedule::{validate_schedule, ScaleSchedule};
use crate::superpixel::{Superpixel, SuperpixelSet};

/// How each non-final stage picks its cells.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SelectionPolicy<T> {
    /// Exactly `K_ℓ` cells with the best scores. Cardinality depends only on
    /// the schedule.
    #[default]
    TopK,
    /// Every uncovered cell whose score is at least as pure as the threshold
    /// (`score ≥ t` for the indicator, `score ≤ t` for the deviation). Budgets
    /// are ignored and the region count depends on the image.
    Threshold(T),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GenerateOptions<T> {
    pub metric: Metric,
    pub policy: SelectionPolicy<T>,
}

/// Masks of one stage, both on that stage's grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageState {
    pub stage: usize,
    /// Cells already claimed by coarser stages when this stage starts.
    pub covered: ScaleMask,
    /// Cells this stage emitted as superpixels.
    pub selected: ScaleMask,
}

/// Full result of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Generation<T> {
    pub set: SuperpixelSet<T>,
    pub stages: Vec<StageState>,
    /// Pixels read while scoring all stages.
    pub pixel_visits: u64,
}

/// The `k` best cells among `uncovered`, where larger `scores` are better.
/// Ties go to the lower row-major index.
pub fn select_topk<T: Scalar>(scores: &[T], uncovered: &ScaleMask, k: usize) -> Result<ScaleMask> {
    let r = uncovered.grid_size();
    if scores.len() != r * r {
        return Err(Error::ImageMismatch(format!(
            "{} scores for a {r}x{r} grid",
            scores.len()
        )));
    }
    let mut candidates: Vec<usize> = uncovered.set_indices().collect();
    if k > candidates.len() {
        return Err(Error::BudgetOverflow {
            requested: k,
            available: candidates.len(),
        });
    }
    if k == 0 {
        return Ok(ScaleMask::empty(r));
    }
    let order = |a: &usize, b: &usize| {
        scores[*b]
            .partial_cmp(&scores[*a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(b))
    };
    if k < candidates.len() {
        candidates.select_nth_unstable_by(k - 1, order);
    }
    Ok(ScaleMask::from_indices(r, candidates[..k].iter().copied()))
}

fn select_threshold<T: Scalar>(grid: &ScoreGrid<T>, uncovered: &ScaleMask, threshold: T) -> ScaleMask {
    let pick = |s: T| match grid.metric {
        Metric::Indicator => s >= threshold,
        Metric::Deviation => s <= threshold,
    };
    ScaleMask::from_indices(
        uncovered.grid_size(),
        uncovered.set_indices().filter(|&i| pick(grid.scores[i])),
    )
}

/// Budgeted generation with the given metric.
pub fn generate<T: Scalar>(
    image: &RasterImage,
    schedule: &ScaleSchedule<T>,
    metric: Metric,
) -> Result<SuperpixelSet<T>> {
    let options = GenerateOptions {
        metric,
        policy: SelectionPolicy::TopK,
    };
    generate_with(image, schedule, &options).map(|g| g.set)
}

/// Generation returning the per-stage masks and the pixel-visit count.
pub fn generate_with<T: Scalar>(
    image: &RasterImage,
    schedule: &ScaleSchedule<T>,
    options: &GenerateOptions<T>,
) -> Result<Generation<T>> {
    let side = image.square_side().ok_or_else(|| {
        Error::ImageMismatch(format!(
            "expected a square image, got {}x{}",
            image.height(),
            image.width()
        ))
    })?;
    match options.policy {
        SelectionPolicy::TopK => validate_schedule(schedule, side)?,
        SelectionPolicy::Threshold(_) => {
            let unbudgeted = schedule.with_budgets(vec![0; schedule.budgets().len()]);
            validate_schedule(&unbudgeted, side)?
        }
    }

    let stages = schedule.stages();
    let k = schedule.center_window();
    let tau = schedule.tau();
    let mut covered = ScaleMask::empty(schedule.grid_sizes()[0]);
    let mut regions = Vec::new();
    let mut states = Vec::with_capacity(stages);
    let mut pixel_visits = 0u64;

    for stage in 0..stages {
        let r = schedule.grid_sizes()[stage];
        let s = schedule.side_lengths()[stage];
        let grid = purity_grid(image, r, s, k, tau, options.metric)?;
        pixel_visits += grid.pixel_visits;

        let last = stage + 1 == stages;
        let uncovered = covered.complement();
        let selected = if last {
            uncovered
        } else {
            match options.policy {
                SelectionPolicy::TopK => {
                    let pref: Vec<T> = grid.scores.iter().map(|&v| options.metric.preference(v)).collect();
                    select_topk(&pref, &uncovered, schedule.budgets()[stage])?
                }
                SelectionPolicy::Threshold(t) => select_threshold(&grid, &uncovered, t),
            }
        };

        regions.extend(selected.set_indices().map(|idx| Superpixel {
            stage,
            row: idx / r,
            col: idx % r,
            side: s,
            purity: grid.scores[idx],
            center: grid.centers[idx],
        }));

        let next_covered = if last {
            ScaleMask::empty(0)
        } else {
            expand_mask(&covered.union(&selected), schedule.grid_sizes()[stage + 1])?
        };
        states.push(StageState {
            stage,
            covered: std::mem::replace(&mut covered, next_covered),
            selected,
        });
    }

    Ok(Generation {
        set: SuperpixelSet::from_parts(schedule.clone(), regions),
        stages: states,
        pixel_visits,
    })
}

/// Pixel visits [`generate_with`] performs for `schedule`:
/// `Σ_ℓ r_ℓ²·(k² + s_ℓ²) = L·N + k²·Σ_ℓ r_ℓ²`.
pub fn expected_pixel_visits<T: Scalar>(schedule: &ScaleSchedule<T>) -> u64 {
    let k2 = schedule.center_window().pow(2);
    schedule
        .grid_sizes()
        .iter()
        .zip(schedule.side_lengths())
        .map(|(&r, &s)| (r * r * (k2 + s * s)) as u64)
        .sum()
}
