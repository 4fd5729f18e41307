//! Multi-granularity square superpixels by purity-driven coarse-to-fine
//! selection.
//!
//! An image is partitioned at several aligned grid resolutions. At each
//! coarse stage a fixed budget of the purest cells not yet covered becomes
//! superpixels; their area is marked covered on every finer grid. The finest
//! stage keeps what is left, so the output always tiles the image and its
//! size depends only on the schedule. The same scoring ranks and prunes
//! tokens on a regular encoder grid.
//!
//! Scores are generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix the common choice of `f64`.
//!
//! ```
//! use gbsp_core::{generate, expected_cardinality, Metric, RasterImage, Schedule};
//!
//! let image = RasterImage::constant(32, 32, 3, 128).unwrap();
//! let schedule = Schedule::new(vec![4, 8, 16], vec![8, 4, 2], vec![6, 20], 2, 10.0);
//! let set = generate(&image, &schedule, Metric::Indicator).unwrap();
//! assert_eq!(set.len(), expected_cardinality(&schedule).unwrap());
//! assert!(set.is_perfect_tiling());
//! ```

pub mod error;
pub mod hierarchy;
pub mod image;
pub mod mask;
pub mod purity;
pub mod scalar;
pub mod schedule;
pub mod superpixel;
pub mod tokenizer;

pub use error::{Error, Result};
pub use hierarchy::{
    expected_pixel_visits, generate, generate_with, select_topk, GenerateOptions, Generation,
    SelectionPolicy, StageState,
};
pub use image::{nearest_valid_side, normalize_square, Normalization, RasterImage};
pub use mask::{expand_mask, ScaleMask};
pub use purity::{
    center_statistic, purity_grid, purity_indicator, quality_deviation, BlockRect, CenterStat,
    Metric, ScoreGrid,
};
pub use scalar::Scalar;
pub use schedule::{
    expected_cardinality, validate_schedule, ScaleSchedule, ScheduleViolation,
    DEFAULT_CENTER_WINDOW,
};
pub use superpixel::{to_label_map, LabelMap, Superpixel, SuperpixelSet};
pub use tokenizer::{
    attention_reduction, default_stage_weights, parse_retention, prune_tokens, token_scores,
    token_scores_weighted, RetentionRecord, TokenGrid, TokenRetention,
};

pub type Schedule = ScaleSchedule<f64>;
pub type Schedule32 = ScaleSchedule<f32>;
pub type SuperpixelSet64 = SuperpixelSet<f64>;
pub type SuperpixelSet32 = SuperpixelSet<f32>;
pub type Region = Superpixel<f64>;
pub type Region32 = Superpixel<f32>;
pub type Center = CenterStat<f64>;
pub type Retention = TokenRetention<f64>;
pub type Generation64 = Generation<f64>;
