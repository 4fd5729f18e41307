use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gbsp_cli::formats::{read_label_map, read_mask};
use gbsp_cli::report::{lookup, parse_key_values};
use gbsp_core::parse_retention;
use image::{GrayImage, RgbImage};

fn gbsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbsp")).args(args).output().expect("spawn gbsp")
}

fn write_rgb(path: &Path, side: u32, f: impl Fn(u32, u32) -> [u8; 3]) {
    RgbImage::from_fn(side, side, |x, y| image::Rgb(f(x, y))).save(path).unwrap();
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(dir: &Path) -> Vec<(String, String)> {
    parse_key_values(&fs::read_to_string(dir.join("report.txt")).unwrap())
}

#[test]
fn constant_image_report_matches_cardinality() {
    let dir = tmp();
    let input = dir.path().join("flat.png");
    write_rgb(&input, 64, |_, _| [40, 80, 120]);
    let out = dir.path().join("out");
    let res = gbsp(&["generate", s(&input), "--grids", "4,8", "--budgets", "4", "-o", s(&out)]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let kv = report(&out);
    assert_eq!(lookup(&kv, "region_count"), Some("52"));
    assert_eq!(lookup(&kv, "expected_cardinality"), Some("52"));
    assert_eq!(lookup(&kv, "selected_per_stage"), Some("4,48"));
    let labels = read_label_map(fs::File::open(out.join("labels.gbsp")).unwrap()).unwrap();
    assert_eq!((labels.height(), labels.width(), labels.region_count()), (64, 64, 52));
    let m1 = read_mask(fs::File::open(out.join("mask_stage1.gbmk")).unwrap()).unwrap();
    assert_eq!(m1.set_indices().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    let m2 = read_mask(fs::File::open(out.join("mask_stage2.gbmk")).unwrap()).unwrap();
    assert_eq!(m2.popcount(), 48);
}

#[test]
fn preset_normalizes_input() {
    let dir = tmp();
    let input = dir.path().join("digit.png");
    GrayImage::from_fn(30, 20, |x, y| image::Luma([((x * 7 + y * 3) % 256) as u8])).save(&input).unwrap();
    let out = dir.path().join("out");
    assert!(gbsp(&["generate", s(&input), "--preset", "mnist", "-o", s(&out)]).status.success());
    let kv = report(&out);
    assert_eq!(lookup(&kv, "image_side"), Some("28"));
    assert_eq!(lookup(&kv, "padded"), Some("true"));
    assert_eq!(lookup(&kv, "resized"), Some("true"));
    assert_eq!(lookup(&kv, "selected_per_stage"), Some("25,96"));
    let normalized = image::open(out.join("normalized.png")).unwrap();
    assert_eq!((normalized.width(), normalized.height()), (28, 28));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tmp();
    let input = dir.path().join("noise.png");
    write_rgb(&input, 96, |x, y| [(x * 13 % 256) as u8, (y * 29 % 256) as u8, ((x ^ y) * 7 % 256) as u8]);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let res = gbsp(&["generate", s(&input), "--sides", "24,12,6,3", "--budgets", "3,20,60", "-o", s(out)]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    }
    for name in ["labels.gbsp", "mask_stage1.gbmk", "mask_stage2.gbmk", "mask_stage3.gbmk", "mask_stage4.gbmk"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn detection_preset_report() {
    let dir = tmp();
    let input = dir.path().join("scene.png");
    write_rgb(&input, 640, |x, y| if (200..400).contains(&x) && y < 300 { [(x % 256) as u8, (y % 256) as u8, 9] } else { [90, 90, 90] });
    let out = dir.path().join("out");
    assert!(gbsp(&["generate", s(&input), "--preset", "detection", "-o", s(&out)]).status.success());
    let kv = report(&out);
    assert_eq!(lookup(&kv, "side_lengths"), Some("32,16,8"));
    assert_eq!(lookup(&kv, "grid_sizes"), Some("20,40,80"));
    assert_eq!(lookup(&kv, "tau"), Some("10"));
    assert_eq!(lookup(&kv, "region_count"), lookup(&kv, "expected_cardinality"));
}

#[test]
fn exit_codes() {
    let dir = tmp();
    let missing = dir.path().join("missing.png");
    assert_eq!(gbsp(&["generate", s(&missing), "--grids", "4,8", "-o", s(dir.path())]).status.code(), Some(2));

    let garbage = dir.path().join("garbage.png");
    fs::write(&garbage, b"not an image").unwrap();
    assert_eq!(gbsp(&["generate", s(&garbage), "--grids", "4", "-o", s(dir.path())]).status.code(), Some(2));

    let input = dir.path().join("in.png");
    write_rgb(&input, 32, |_, _| [0, 0, 0]);
    let res = gbsp(&["generate", s(&input), "--grids", "4,6", "--budgets", "1", "-o", s(dir.path())]);
    assert_eq!(res.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&res.stderr).contains("r2 not multiple of r1"));
    let res = gbsp(&["generate", s(&input), "--grids", "4,8", "--budgets", "17", "-o", s(dir.path())]);
    assert_eq!(res.status.code(), Some(3));

    let out = dir.path().join("o");
    assert!(gbsp(&["generate", s(&input), "--grids", "2", "-o", s(&out)]).status.success());
    let other = dir.path().join("other.png");
    write_rgb(&other, 16, |_, _| [0, 0, 0]);
    let res = gbsp(&["overlay", s(&other), s(&out.join("labels.gbsp")), "-o", s(&dir.path().join("x.png"))]);
    assert_eq!(res.status.code(), Some(4));
}

#[test]
fn overlay_single_region_and_idempotence() {
    let dir = tmp();
    let input = dir.path().join("in.png");
    write_rgb(&input, 16, |_, _| [10, 20, 30]);
    let out = dir.path().join("o");
    assert!(gbsp(&["generate", s(&input), "--grids", "1", "-o", s(&out)]).status.success());
    let labels = out.join("labels.gbsp");
    let png_a: PathBuf = dir.path().join("a.png");
    let png_b: PathBuf = dir.path().join("b.png");
    assert!(gbsp(&["overlay", s(&input), s(&labels), "-o", s(&png_a)]).status.success());
    assert!(gbsp(&["overlay", s(&input), s(&labels), "-o", s(&png_b)]).status.success());
    assert_eq!(fs::read(&png_a).unwrap(), fs::read(&png_b).unwrap());
    let img = image::open(&png_a).unwrap().into_rgb8();
    for (x, y, p) in img.enumerate_pixels() {
        let edge = x == 0 || y == 0 || x == 15 || y == 15;
        assert_eq!(p.0, if edge { [255, 0, 0] } else { [10, 20, 30] });
    }
}

#[test]
fn prune_outputs() {
    let dir = tmp();
    let input = dir.path().join("scene.png");
    write_rgb(&input, 640, |x, y| if x < 320 && y < 320 { [((x * y) % 256) as u8, 0, 0] } else { [50, 60, 70] });
    let run = |n: &str| {
        let out = dir.path().join(format!("r{n}.txt"));
        let res = gbsp(&["prune", s(&input), "--grid", "20", "--stages", "32,16,8", "--tau", "10", "--remove", n, "-o", s(&out)]);
        assert!(res.status.success());
        (String::from_utf8(res.stdout).unwrap(), parse_retention(&fs::read_to_string(out).unwrap()).unwrap())
    };
    let (stdout, rec) = run("200");
    assert!(stdout.contains("attention_reduction=75.00%"));
    assert_eq!(rec.retained.len(), 200);
    let (stdout, rec) = run("0");
    assert!(stdout.contains("attention_reduction=0.00%"));
    assert_eq!(rec.retained, (0..400).collect::<Vec<_>>());
    let (stdout, rec) = run("100");
    assert!(stdout.contains("attention_reduction=43.75%"));
    assert_eq!(rec.retained.len(), 300);
    assert_eq!(rec.tokens, 400);
    // Busy top-left quadrant tokens survive pruning ahead of the flat background.
    assert!((0..10).all(|row| (0..10).all(|col| rec.retained.contains(&(row * 20 + col)))));

    let bad = gbsp(&["prune", s(&input), "--remove", "401", "-o", s(&dir.path().join("bad.txt"))]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn bench_smoke() {
    let res = gbsp(&["bench", "--sides", "64", "--stages", "2", "--repeat", "1"]);
    assert!(res.status.success());
    let out = String::from_utf8(res.stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "n,stages,mean_ms,pixel_visits");
    assert!(lines[1].starts_with("4096,2,"));
}

#[test]
fn reads_binary_pnm() {
    let dir = tmp();
    let pgm = dir.path().join("in.pgm");
    let mut bytes = b"P5\n8 8\n255\n".to_vec();
    bytes.extend((0..64).map(|i| (i * 4) as u8));
    fs::write(&pgm, &bytes).unwrap();
    let ppm = dir.path().join("in.ppm");
    let mut bytes = b"P6\n8 8\n255\n".to_vec();
    bytes.extend(std::iter::repeat_n([1u8, 2, 3], 64).flatten());
    fs::write(&ppm, &bytes).unwrap();
    let a = gbsp_cli::imageio::load_image(&pgm).unwrap();
    assert_eq!((a.channels(), a.pixel(1, 2)[0]), (1, 40));
    let b = gbsp_cli::imageio::load_image(&ppm).unwrap();
    assert_eq!((b.channels(), b.pixel(7, 7)), (3, &[1u8, 2, 3][..]));
    for input in [&pgm, &ppm] {
        let out = dir.path().join("o");
        assert!(gbsp(&["generate", s(input), "--grids", "2,4", "--budgets", "1", "-o", s(&out)]).status.success());
    }
}
