//! Argument parsing and subcommand drivers.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbsp_core::{
    attention_reduction, expected_cardinality, generate_with, nearest_valid_side, normalize_square,
    prune_tokens, to_label_map, token_scores, GenerateOptions, Metric, ScaleSchedule,
    SelectionPolicy, TokenGrid, DEFAULT_CENTER_WINDOW,
};

use crate::error::{CliError, Result};
use crate::{bench, formats, imageio, overlay, preset, report};

pub const THREADS_ENV: &str = "GBSP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "gbsp", version, about = "Purity-driven multi-granularity square superpixels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate superpixels and write labels, per-stage masks and a report.
    Generate(GenerateArgs),
    /// Draw region borders over an image.
    Overlay(OverlayArgs),
    /// Rank encoder tokens by redundancy and drop a fixed number.
    Prune(PruneArgs),
    /// Measure wall time and pixel visits across image sizes.
    Bench(BenchArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Indicator,
    Deviation,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Indicator => Metric::Indicator,
            MetricArg::Deviation => Metric::Deviation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Topk,
    Threshold,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub preset: Option<String>,
    /// Cells per side for each stage, coarse to fine.
    #[arg(long, value_delimiter = ',')]
    pub grids: Option<Vec<usize>>,
    /// Cell side in pixels for each stage, coarse to fine.
    #[arg(long, value_delimiter = ',')]
    pub sides: Option<Vec<usize>>,
    /// Cells selected at each stage except the last.
    #[arg(long, value_delimiter = ',')]
    pub budgets: Option<Vec<usize>>,
    /// Center window side.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, value_enum, default_value = "indicator")]
    pub metric: MetricArg,
    #[arg(long, value_enum, default_value = "topk")]
    pub policy: PolicyArg,
    /// Score cut-off for `--policy threshold`.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OverlayArgs {
    pub input: PathBuf,
    pub labels: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PruneArgs {
    pub input: PathBuf,
    /// Tokens per side.
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    /// Block sides per stage; the first is the token size.
    #[arg(long, value_delimiter = ',', default_value = "32,16,8")]
    pub stages: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_CENTER_WINDOW)]
    pub k: usize,
    #[arg(long, default_value_t = preset::DEFAULT_TAU)]
    pub tau: f64,
    #[arg(long)]
    pub remove: usize,
    #[arg(short, long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "256,512")]
    pub sides: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub stages: usize,
    #[arg(long, default_value_t = 5)]
    pub repeat: usize,
    /// Write the CSV here instead of stdout.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Thread count from `GBSP_THREADS`; 0, unset or unparsable means automatic.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

pub fn run(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Overlay(args) => cmd_overlay(&args),
        Command::Prune(args) => cmd_prune(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Presets => cmd_presets(),
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Resolves the schedule and the side the input is normalized to.
pub fn resolve_schedule(args: &GenerateArgs, height: usize, width: usize) -> Result<ScaleSchedule<f64>> {
    let k = args.k.unwrap_or(DEFAULT_CENTER_WINDOW);
    let side_in = height.max(width);
    let mut schedule = if let Some(name) = &args.preset {
        if args.grids.is_some() || args.sides.is_some() {
            return Err(CliError::Usage("--preset cannot be combined with --grids/--sides".into()));
        }
        let p = preset::find(name).ok_or_else(|| CliError::Usage(format!("unknown preset '{name}'")))?;
        let s = p.schedule()?;
        ScaleSchedule::new(
            s.grid_sizes().to_vec(),
            s.side_lengths().to_vec(),
            s.budgets().to_vec(),
            k,
            s.tau(),
        )
    } else {
        let budgets = args.budgets.clone().unwrap_or_default();
        let tau = args.tau.unwrap_or(preset::DEFAULT_TAU);
        match (&args.grids, &args.sides) {
            (Some(g), Some(s)) => ScaleSchedule::new(g.clone(), s.clone(), budgets, k, tau),
            (Some(g), None) => {
                let unit = *g.last().ok_or_else(|| CliError::Usage("--grids is empty".into()))?;
                if unit == 0 {
                    return Err(CliError::Schedule("grid sizes must be positive".into()));
                }
                ScaleSchedule::from_grid_sizes(nearest_valid_side(side_in, unit), g.clone(), budgets, k, tau)?
            }
            (None, Some(s)) => {
                let unit = *s.first().ok_or_else(|| CliError::Usage("--sides is empty".into()))?;
                if unit == 0 {
                    return Err(CliError::Schedule("side lengths must be positive".into()));
                }
                ScaleSchedule::from_block_sides(nearest_valid_side(side_in, unit), s.clone(), budgets, k, tau)?
            }
            (None, None) => return Err(CliError::Usage("give --preset, --grids or --sides".into())),
        }
    };
    if args.preset.is_some() {
        if let Some(b) = &args.budgets {
            schedule = schedule.with_budgets(b.clone());
        }
        if let Some(t) = args.tau {
            schedule = schedule.with_tau(t);
        }
    }
    Ok(schedule)
}

fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let image = imageio::load_image(&args.input)?;
    let schedule = resolve_schedule(args, image.height(), image.width())?;
    let policy = match (args.policy, args.threshold) {
        (PolicyArg::Topk, None) => SelectionPolicy::TopK,
        (PolicyArg::Threshold, Some(t)) => SelectionPolicy::Threshold(t),
        (PolicyArg::Topk, Some(_)) => return Err(CliError::Usage("--threshold needs --policy threshold".into())),
        (PolicyArg::Threshold, None) => return Err(CliError::Usage("--policy threshold needs --threshold".into())),
    };
    let side = schedule.image_side();
    if side == 0 {
        return Err(CliError::Schedule("schedule has no stages".into()));
    }
    let (normalized, normalization) = normalize_square(&image, side)?;
    let options = GenerateOptions {
        metric: args.metric.into(),
        policy,
    };

    let start = Instant::now();
    let generation = generate_with(&normalized, &schedule, &options)?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let labels = to_label_map(&generation.set);
    write_file(&args.out.join("labels.gbsp"), &formats::encode_label_map(&labels))?;
    for st in &generation.stages {
        let path = args.out.join(format!("mask_stage{}.gbmk", st.stage + 1));
        write_file(&path, &formats::encode_mask(&st.selected))?;
    }
    if !normalization.is_identity() {
        imageio::save_png(&normalized, &args.out.join("normalized.png"))?;
    }

    let run_report = report::RunReport {
        input_height: image.height(),
        input_width: image.width(),
        normalization,
        expected_cardinality: match policy {
            SelectionPolicy::TopK => Some(expected_cardinality(&schedule)?),
            SelectionPolicy::Threshold(_) => None,
        },
        schedule,
        metric: options.metric.name(),
        policy: match policy {
            SelectionPolicy::TopK => "topk".into(),
            SelectionPolicy::Threshold(t) => format!("threshold:{t}"),
        },
        region_count: generation.set.len(),
        selected_per_stage: generation.set.stage_counts(),
        pixel_visits: generation.pixel_visits,
        wall_time_ms,
    };
    let text = run_report.to_text();
    write_file(&args.out.join("report.txt"), text.as_bytes())?;
    print!("{text}");
    Ok(())
}

fn cmd_overlay(args: &OverlayArgs) -> Result<()> {
    let image = imageio::load_image(&args.input)?;
    let bytes = fs::read(&args.labels).map_err(|e| CliError::io(&args.labels, e))?;
    let labels = formats::read_label_map(bytes.as_slice()).map_err(|e| CliError::Format {
        path: args.labels.clone(),
        message: e.to_string(),
    })?;
    let out = overlay::render_overlay(&image, &labels, overlay::BORDER_COLOR)?;
    imageio::save_png(&out, &args.out)
}

fn percent(x: f64) -> String {
    format!("{:.2}%", x * 100.0)
}

fn cmd_prune(args: &PruneArgs) -> Result<()> {
    let image = imageio::load_image(&args.input)?;
    let token_pixels = *args
        .stages
        .first()
        .ok_or_else(|| CliError::Usage("--stages is empty".into()))?;
    let grid = TokenGrid::new(args.grid, token_pixels);
    let (normalized, _) = normalize_square(&image, grid.image_side())?;
    let scores = token_scores(&normalized, grid, &args.stages, args.k, args.tau)?;
    let retention = prune_tokens(&scores, grid, args.remove)?;
    write_file(&args.out, retention.to_text().as_bytes())?;
    println!(
        "tokens={} retained={} removed={}",
        grid.total(),
        retention.retained.len(),
        retention.removed_count
    );
    println!("retention_ratio={}", percent(retention.retention_ratio()));
    match attention_reduction::<f64>(grid.total(), retention.retained.len()) {
        Ok(r) => println!("attention_reduction={}", percent(r)),
        Err(_) => println!("attention_reduction=n/a"),
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let rows = bench::run_bench(&args.sides, args.stages, args.repeat)?;
    let csv = bench::to_csv(&rows);
    match &args.out {
        Some(path) => write_file(path, csv.as_bytes()),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn cmd_presets() -> Result<()> {
    for p in preset::PRESETS {
        let sides = p.side_lengths();
        println!(
            "{:<10} side={} grids={:?} sides={:?} budgets={:?} tau={}  {}",
            p.name,
            p.image_side,
            p.grid_sizes,
            sides,
            p.budgets(),
            p.tau,
            p.note
        );
    }
    Ok(())
}
