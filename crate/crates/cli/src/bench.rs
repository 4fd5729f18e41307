//! Scaling harness: wall time and pixel visits against image size.

use std::fmt::Write as _;
use std::time::Instant;

use gbsp_core::{
    expected_pixel_visits, generate_with, GenerateOptions, RasterImage, ScaleSchedule,
    ScheduleViolation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FINEST_SIDE: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub side: usize,
    pub pixels: usize,
    pub stages: usize,
    pub mean_ms: f64,
    pub pixel_visits: u64,
    pub expected_visits: u64,
}

/// `stages` dyadic stages ending at 4-pixel cells; each non-final stage
/// spends a quarter of its uncovered cells.
pub fn synthetic_schedule(side: usize, stages: usize) -> Result<ScaleSchedule<f64>, ScheduleViolation> {
    if stages == 0 {
        return Err(ScheduleViolation::NoStages);
    }
    let sides: Vec<usize> = (0..stages).map(|i| FINEST_SIDE << (stages - 1 - i)).collect();
    let base = ScaleSchedule::from_block_sides(side, sides, vec![0; stages - 1], 2, 10.0)?;
    let mut budgets = Vec::with_capacity(stages - 1);
    for stage in 0..stages - 1 {
        let partial = base.with_budgets(
            budgets
                .iter()
                .copied()
                .chain(std::iter::repeat(0))
                .take(stages - 1)
                .collect(),
        );
        budgets.push(partial.uncovered_available(stage) / 4);
    }
    Ok(base.with_budgets(budgets))
}

/// Piecewise-flat RGB noise, fixed by `side`.
pub fn synthetic_image(side: usize) -> RasterImage {
    let mut rng = ChaCha8Rng::seed_from_u64(side as u64);
    let tiles: Vec<u8> = (0..64).map(|_| rng.gen()).collect();
    let mut data = Vec::with_capacity(side * side * 3);
    for row in 0..side {
        for col in 0..side {
            let base = tiles[(row * 8 / side) * 8 + col * 8 / side];
            let jitter: u8 = if (row / 16 + col / 16) % 3 == 0 { rng.gen_range(0..64) } else { 0 };
            data.extend_from_slice(&[base.wrapping_add(jitter); 3]);
        }
    }
    RasterImage::new(side, side, 3, data).expect("sized buffer")
}

pub fn run_bench(sides: &[usize], stages: usize, repeat: usize) -> Result<Vec<BenchRow>, gbsp_core::Error> {
    let repeat = repeat.max(1);
    let options = GenerateOptions::default();
    let mut rows = Vec::with_capacity(sides.len());
    for &side in sides {
        let schedule = synthetic_schedule(side, stages)?;
        let image = synthetic_image(side);
        let warm = generate_with(&image, &schedule, &options)?;
        let mut total = 0.0;
        for _ in 0..repeat {
            let start = Instant::now();
            let run = generate_with(&image, &schedule, &options)?;
            total += start.elapsed().as_secs_f64() * 1e3;
            debug_assert_eq!(run.pixel_visits, warm.pixel_visits);
        }
        rows.push(BenchRow {
            side,
            pixels: side * side,
            stages,
            mean_ms: total / repeat as f64,
            pixel_visits: warm.pixel_visits,
            expected_visits: expected_pixel_visits(&schedule),
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,stages,mean_ms,pixel_visits\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:.4},{}", r.pixels, r.stages, r.mean_ms, r.pixel_visits);
    }
    out
}
