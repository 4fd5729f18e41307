//! Purity-ranked pruning of encoder tokens on a regular grid.
//!
//! A token's redundancy blends the normalized deviation of its own block
//! with the mean redundancy of its sub-blocks at each finer stage:
//!
//! ```text
//! red(block)      = 1 − min(deviation(block) / (C·τ), 1)
//! redundancy(tok) = Σ_ℓ w_ℓ · mean{ red(b) : b a stage-ℓ block inside tok }
//! ```
//!
//! with `C` the channel count. Three stages default to weights
//! `(0.5, 0.3, 0.2)`; other stage counts default to uniform weights.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hierarchy::select_topk;
use crate::image::RasterImage;
use crate::mask::ScaleMask;
use crate::purity::{purity_grid, Metric};
use crate::scalar::Scalar;
use crate::schedule::ScheduleViolation;

/// Regular grid with one token per `token_pixels`-wide cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TokenGrid {
    pub side_tokens: usize,
    pub token_pixels: usize,
}

impl TokenGrid {
    pub const fn new(side_tokens: usize, token_pixels: usize) -> Self {
        Self {
            side_tokens,
            token_pixels,
        }
    }

    pub const fn total(&self) -> usize {
        self.side_tokens * self.side_tokens
    }

    pub const fn image_side(&self) -> usize {
        self.side_tokens * self.token_pixels
    }
}

/// Stage weights used when none are given.
pub fn default_stage_weights<T: Scalar>(stages: usize) -> Vec<T> {
    if stages == 3 {
        vec![T::lit(0.5), T::lit(0.3), T::lit(0.2)]
    } else {
        vec![T::one() / T::from_count(stages as u64); stages]
    }
}

/// Per-token redundancy with the default stage weights. Higher means more
/// redundant; a flat image scores 1 everywhere.
pub fn token_scores<T: Scalar>(
    image: &RasterImage,
    grid: TokenGrid,
    stages: &[usize],
    k: usize,
    tau: T,
) -> Result<Vec<T>> {
    token_scores_weighted(image, grid, stages, &default_stage_weights(stages.len()), k, tau)
}

pub fn token_scores_weighted<T: Scalar>(
    image: &RasterImage,
    grid: TokenGrid,
    stages: &[usize],
    weights: &[T],
    k: usize,
    tau: T,
) -> Result<Vec<T>> {
    check_stages(image, grid, stages, k)?;
    if weights.len() != stages.len() {
        return Err(Error::Domain(format!(
            "{} weights for {} stages",
            weights.len(),
            stages.len()
        )));
    }
    let norm = tau * T::from_count(image.channels() as u64);
    let redundancy = |dev: T| -> T {
        if norm > T::zero() {
            T::one() - (dev / norm).min(T::one())
        } else if dev == T::zero() {
            T::one()
        } else {
            T::zero()
        }
    };

    let n = grid.side_tokens;
    let mut scores = vec![T::zero(); grid.total()];
    for (&side, &w) in stages.iter().zip(weights) {
        let r = grid.image_side() / side;
        let dev = purity_grid(image, r, side, k, tau, Metric::Deviation)?;
        let t = grid.token_pixels / side;
        let per_token = T::from_count((t * t) as u64);
        for (tok, score) in scores.iter_mut().enumerate() {
            let (trow, tcol) = (tok / n, tok % n);
            let mut acc = T::zero();
            for row in trow * t..(trow + 1) * t {
                for col in tcol * t..(tcol + 1) * t {
                    acc = acc + redundancy(dev.score(row, col));
                }
            }
            *score = *score + w * (acc / per_token);
        }
    }
    Ok(scores)
}

fn check_stages(image: &RasterImage, grid: TokenGrid, stages: &[usize], k: usize) -> Result<()> {
    let image_side = image.square_side().ok_or_else(|| {
        Error::ImageMismatch(format!(
            "expected a square image, got {}x{}",
            image.height(),
            image.width()
        ))
    })?;
    if grid.side_tokens == 0 || grid.token_pixels == 0 {
        return Err(ScheduleViolation::ZeroGrid { stage: 1 }.into());
    }
    if grid.image_side() != image_side {
        return Err(ScheduleViolation::Tiling {
            stage: 1,
            grid: grid.side_tokens,
            side: grid.token_pixels,
            image_side,
        }
        .into());
    }
    match stages.first() {
        None => return Err(ScheduleViolation::NoStages.into()),
        Some(&first) if first != grid.token_pixels => {
            return Err(ScheduleViolation::Tiling {
                stage: 1,
                grid: image_side / first.max(1),
                side: first,
                image_side,
            }
            .into())
        }
        _ => {}
    }
    for i in 1..stages.len() {
        if stages[i] == 0 {
            return Err(ScheduleViolation::ZeroSide { stage: i + 1 }.into());
        }
        if stages[i] >= stages[i - 1] {
            return Err(ScheduleViolation::SidesNotDescending { stage: i + 1 }.into());
        }
        if !stages[i - 1].is_multiple_of(stages[i]) {
            return Err(ScheduleViolation::NotMultiple {
                stage: i + 1,
                grid: image_side / stages[i],
                parent: image_side / stages[i - 1],
            }
            .into());
        }
    }
    let finest = *stages.last().expect("non-empty");
    if k == 0 {
        return Err(ScheduleViolation::ZeroWindow.into());
    }
    if k > finest {
        return Err(ScheduleViolation::WindowTooLarge {
            window: k,
            finest_side: finest,
        }
        .into());
    }
    Ok(())
}

/// Tokens kept after pruning.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenRetention<T> {
    pub grid: TokenGrid,
    /// Ascending token indices.
    pub retained: Vec<usize>,
    pub removed_count: usize,
    pub per_token_score: Vec<T>,
}

impl<T: Scalar> TokenRetention<T> {
    pub fn retention_ratio(&self) -> T {
        T::from_count(self.retained.len() as u64) / T::from_count(self.grid.total() as u64)
    }

    /// `tokens=<total> removed=<n>` followed by one retained index per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(8 + self.retained.len() * 4);
        let _ = writeln!(out, "tokens={} removed={}", self.grid.total(), self.removed_count);
        for idx in &self.retained {
            let _ = writeln!(out, "{idx}");
        }
        out
    }
}

/// Parsed form of [`TokenRetention::to_text`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetentionRecord {
    pub tokens: usize,
    pub removed: usize,
    pub retained: Vec<usize>,
}

pub fn parse_retention(text: &str) -> Result<RetentionRecord> {
    let bad = |msg: String| Error::Domain(format!("retention file: {msg}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty".into()))?;
    let mut tokens = None;
    let mut removed = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("tokens", v)) => tokens = v.parse().ok(),
            Some(("removed", v)) => removed = v.parse().ok(),
            _ => return Err(bad(format!("unexpected header field '{field}'"))),
        }
    }
    let (tokens, removed) = match (tokens, removed) {
        (Some(t), Some(r)) => (t, r),
        _ => return Err(bad(format!("malformed header '{header}'"))),
    };
    let retained = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.trim().parse::<usize>().map_err(|e| bad(format!("'{l}': {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if retained.len() + removed != tokens {
        return Err(bad(format!(
            "{} retained + {removed} removed != {tokens} tokens",
            retained.len()
        )));
    }
    if retained.windows(2).any(|w| w[0] >= w[1]) || retained.last().is_some_and(|&l| l >= tokens) {
        return Err(bad("indices must be ascending, unique and in range".into()));
    }
    Ok(RetentionRecord {
        tokens,
        removed,
        retained,
    })
}

/// Removes the `n_remove` most redundant tokens; ties remove the lower index.
pub fn prune_tokens<T: Scalar>(scores: &[T], grid: TokenGrid, n_remove: usize) -> Result<TokenRetention<T>> {
    let total = grid.total();
    if scores.len() != total {
        return Err(Error::ImageMismatch(format!(
            "{} scores for {total} tokens",
            scores.len()
        )));
    }
    let removed = select_topk(scores, &ScaleMask::full(grid.side_tokens), n_remove)?;
    let retained = removed.complement().set_indices().collect();
    Ok(TokenRetention {
        grid,
        retained,
        removed_count: n_remove,
        per_token_score: scores.to_vec(),
    })
}

/// Relative drop in quadratic attention cost, `1 − (after/before)²`.
pub fn attention_reduction<T: Scalar>(n_before: usize, n_after: usize) -> Result<T> {
    if n_after == 0 || n_after > n_before {
        return Err(Error::Domain(format!(
            "attention reduction needs 0 < after <= before, got before={n_before} after={n_after}"
        )));
    }
    let ratio = T::from_count(n_after as u64) / T::from_count(n_before as u64);
    Ok(T::one() - ratio * ratio)
}
