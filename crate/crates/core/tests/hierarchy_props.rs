mod common;

use common::*;
use gbsp_core::{
    expand_mask, expected_cardinality, expected_pixel_visits, generate, generate_with, purity_grid,
    select_topk, to_label_map, GenerateOptions, Metric, RasterImage, ScaleMask, Schedule,
    Schedule32,
};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn cardinality_matches_simulation() {
    assert_eq!(simulate_cardinality(&[4, 8], &[4]), 52);
    assert_eq!(simulate_cardinality(&[4, 8, 16], &[6, 20]), 106);
    let mut rng = rng(11);
    for _ in 0..500 {
        let (grids, sides, budgets, k) = random_schedule(&mut rng, 256);
        let s = Schedule::new(grids.clone(), sides, budgets.clone(), k, 10.0);
        assert_eq!(expected_cardinality(&s).unwrap(), simulate_cardinality(&grids, &budgets));
    }
}

#[test]
fn generation_invariants_on_random_schedules() {
    let mut rng = rng(12);
    for case in 0..150 {
        let (grids, sides, budgets, k) = random_schedule(&mut rng, 96);
        let side = grids[0] * sides[0];
        let sched = Schedule::new(grids.clone(), sides.clone(), budgets.clone(), k, rng.gen_range(0..40) as f64);
        let img = random_image(&mut rng, side, if case % 3 == 0 { 1 } else { 3 });
        let metric = if case % 2 == 0 { Metric::Indicator } else { Metric::Deviation };
        let gen = generate_with(&img, &sched, &GenerateOptions { metric, ..Default::default() }).unwrap();
        let set = &gen.set;

        assert_eq!(set.len(), expected_cardinality(&sched).unwrap());
        assert!(set.is_perfect_tiling());
        assert_eq!(gen.pixel_visits, expected_pixel_visits(&sched));
        assert!(gen.pixel_visits <= 2 * (grids.len() * side * side) as u64);

        // Selections expanded to the finest grid are disjoint and, with the
        // final stage, cover it.
        let fine = *grids.last().unwrap();
        let mut claimed = ScaleMask::empty(fine);
        for st in &gen.stages {
            assert!(st.selected.is_disjoint(&st.covered));
            let mut m = st.selected.clone();
            if m.grid_size() != fine {
                m = expand_mask(&m, fine).unwrap();
            }
            assert!(m.is_disjoint(&claimed));
            claimed = claimed.union(&m);
        }
        assert_eq!(claimed, ScaleMask::full(fine));

        // Every selected cell is at least as pure as every uncovered reject.
        for st in &gen.stages[..gen.stages.len() - 1] {
            let r = grids[st.stage];
            let g = purity_grid::<f64>(&img, r, sides[st.stage], k, sched.tau(), metric).unwrap();
            let pref = |i: usize| metric.preference(g.scores[i]);
            let worst_selected = st.selected.set_indices().map(pref).fold(f64::INFINITY, f64::min);
            let uncovered_rest = st.covered.union(&st.selected).complement();
            let best_rejected = uncovered_rest.set_indices().map(pref).fold(f64::NEG_INFINITY, f64::max);
            assert!(worst_selected >= best_rejected, "case {case} stage {}", st.stage);
        }

        // Label map regroups to exactly the region rectangles.
        let labels = to_label_map(set);
        let rects = labels.regroup();
        assert_eq!(rects.len(), set.len());
        for (region, rect) in set.regions().iter().zip(rects) {
            assert_eq!(rect, Some(region.rect()));
        }
    }
}

#[test]
fn single_precision_gives_identical_regions() {
    let mut rng = rng(13);
    for _ in 0..40 {
        let (grids, sides, budgets, k) = random_schedule(&mut rng, 96);
        let side = grids[0] * sides[0];
        let img = random_image(&mut rng, side, 3);
        let a = generate(&img, &Schedule::new(grids.clone(), sides.clone(), budgets.clone(), k, 10.0), Metric::Indicator).unwrap();
        let b = generate(&img, &Schedule32::new(grids, sides, budgets, k, 10.0), Metric::Indicator).unwrap();
        let pa: Vec<_> = a.regions().iter().map(|r| (r.stage, r.row, r.col)).collect();
        let pb: Vec<_> = b.regions().iter().map(|r| (r.stage, r.row, r.col)).collect();
        assert_eq!(pa, pb);
    }
}

#[test]
fn identical_across_thread_counts() {
    let mut rng = rng(14);
    let img = random_image(&mut rng, 128, 3);
    let sched = Schedule::new(vec![4, 16, 32], vec![32, 8, 4], vec![5, 60], 2, 10.0);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| generate(&img, &sched, Metric::Indicator).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

#[test]
fn detection_scale_tiling() {
    let mut rng = rng(15);
    let img = random_image(&mut rng, 640, 3);
    let sched = Schedule::new(vec![20, 40, 80], vec![32, 16, 8], vec![200, 400], 2, 10.0);
    let set = generate(&img, &sched, Metric::Indicator).unwrap();
    assert!(set.is_perfect_tiling());
    let mut sides: Vec<usize> = set.regions().iter().map(|r| r.side).collect();
    sides.dedup();
    assert_eq!(sides, vec![32, 16, 8]);
}

#[test]
fn flat_image_fills_corner_first() {
    let img = RasterImage::constant(32, 32, 1, 3).unwrap();
    let sched = Schedule::new(vec![4, 8], vec![8, 4], vec![4], 2, 10.0);
    let set = generate(&img, &sched, Metric::Indicator).unwrap();
    let labels = to_label_map(&set);
    assert_eq!(labels.region_count(), 52);
    assert_eq!(*labels.labels().iter().max().unwrap(), 51);
    for col in 0..32 {
        for row in 0..8 {
            assert_eq!(labels.label(row, col) as usize, col / 8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn topk_matches_full_sort(scores in prop::collection::vec(0u8..6, 36), cover in prop::collection::vec(any::<bool>(), 36), k in 0usize..36) {
        let scores: Vec<f64> = scores.into_iter().map(f64::from).collect();
        let uncovered: Vec<bool> = cover.iter().map(|c| !c).collect();
        let available = uncovered.iter().filter(|&&u| u).count();
        let mask = ScaleMask::from_bits(6, uncovered.clone()).unwrap();
        let got = select_topk(&scores, &mask, k);
        if k > available {
            prop_assert!(got.is_err());
        } else {
            let got: Vec<usize> = got.unwrap().set_indices().collect();
            prop_assert_eq!(got, full_sort_topk(&scores, &uncovered, k));
        }
    }

    #[test]
    fn expansion_counts_and_alignment(r in 1usize..12, t in 1usize..5, bits in prop::collection::vec(any::<bool>(), 144)) {
        let mask = ScaleMask::from_bits(r, bits[..r * r].to_vec()).unwrap();
        let out = expand_mask(&mask, r * t).unwrap();
        prop_assert_eq!(out.popcount(), t * t * mask.popcount());
        for i in 0..r * t {
            for j in 0..r * t {
                prop_assert_eq!(out.get(i, j), mask.get(i / t, j / t));
            }
        }
    }
}
