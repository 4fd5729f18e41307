//! Reference implementations that share no code with the library paths.
#![allow(dead_code)]

use gbsp_core::RasterImage;
use num_rational::Ratio;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = Ratio<i64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut impl Rng, side: usize, channels: usize) -> RasterImage {
    // Mix flat patches with noise so both pure and impure cells occur.
    let flat: u8 = rng.gen();
    let noise_amp: u8 = rng.gen_range(0..=255);
    let patch = rng.gen_range(1..=side.max(1));
    let seed: u64 = rng.gen();
    let mut inner = ChaCha8Rng::seed_from_u64(seed);
    RasterImage::from_fn(side, side, channels, |r, c, _| {
        let n: u8 = inner.gen_range(0..=noise_amp);
        if ((r / patch) + (c / patch)) % 2 == 0 {
            flat
        } else {
            flat.wrapping_add(n)
        }
    })
    .unwrap()
}

/// Exact center mean of the centered k×k window, per channel.
pub fn rational_center(img: &RasterImage, top: usize, left: usize, side: usize, k: usize) -> Vec<Q> {
    let off = (side - k) / 2;
    (0..img.channels())
        .map(|c| {
            let mut sum = Q::from_integer(0);
            for r in top + off..top + off + k {
                for col in left + off..left + off + k {
                    sum += Q::from_integer(img.pixel(r, col)[c] as i64);
                }
            }
            sum / Q::from_integer((k * k) as i64)
        })
        .collect()
}

fn rational_l1(px: &[u8], m: &[Q]) -> Q {
    px.iter()
        .zip(m)
        .map(|(&v, &mc)| (Q::from_integer(v as i64) - mc).abs())
        .fold(Q::from_integer(0), |a, b| a + b)
}

/// Consistent-pixel count of one cell by direct per-pixel evaluation.
pub fn naive_consistent(img: &RasterImage, top: usize, left: usize, side: usize, k: usize, tau: f64) -> u64 {
    let m = rational_center(img, top, left, side, k);
    let tau = Q::approximate_float(tau).expect("representable tau");
    let mut count = 0;
    for r in top..top + side {
        for c in left..left + side {
            if rational_l1(img.pixel(r, c), &m) < tau {
                count += 1;
            }
        }
    }
    count
}

/// Mean ℓ₁ deviation of one cell, exact.
pub fn naive_deviation(img: &RasterImage, top: usize, left: usize, side: usize, k: usize) -> Q {
    let m = rational_center(img, top, left, side, k);
    let mut total = Q::from_integer(0);
    for r in top..top + side {
        for c in left..left + side {
            total += rational_l1(img.pixel(r, c), &m);
        }
    }
    total / Q::from_integer((side * side) as i64)
}

/// Region count by claiming cells on a boolean grid at the finest resolution.
pub fn simulate_cardinality(grids: &[usize], budgets: &[usize]) -> usize {
    let fine = *grids.last().unwrap();
    let mut claimed = vec![false; fine * fine];
    let mut regions = 0;
    for (&r, &k) in grids.iter().zip(budgets) {
        let t = fine / r;
        let mut picked = 0;
        for cell in 0..r * r {
            if picked == k {
                break;
            }
            let (cr, cc) = (cell / r, cell % r);
            let free = (cr * t..(cr + 1) * t).all(|i| (cc * t..(cc + 1) * t).all(|j| !claimed[i * fine + j]));
            if free {
                for i in cr * t..(cr + 1) * t {
                    for j in cc * t..(cc + 1) * t {
                        claimed[i * fine + j] = true;
                    }
                }
                picked += 1;
                regions += 1;
            }
        }
        assert_eq!(picked, k, "budget not attainable");
    }
    regions + claimed.iter().filter(|&&c| !c).count()
}

/// Top-k by a full sort, best first, ties to the lower index.
pub fn full_sort_topk(scores: &[f64], uncovered: &[bool], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).filter(|&i| uncovered[i]).collect();
    idx.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
    let mut out = idx[..k].to_vec();
    out.sort_unstable();
    out
}

/// Random valid schedule with image side ≤ `max_side`.
pub fn random_schedule(rng: &mut impl Rng, max_side: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>, usize) {
    loop {
        let stages = rng.gen_range(1..=4);
        let mut grids = vec![rng.gen_range(1..=6)];
        for _ in 1..stages {
            let t = rng.gen_range(2..=3);
            grids.push(grids.last().unwrap() * t);
        }
        let fine = *grids.last().unwrap();
        let unit = rng.gen_range(1..=4);
        let side = fine * unit;
        if side > max_side {
            continue;
        }
        let sides: Vec<usize> = grids.iter().map(|r| side / r).collect();
        let k = rng.gen_range(1..=unit.min(3));
        let mut budgets = Vec::new();
        let mut claimed_fine = 0usize;
        for &r in &grids[..stages - 1] {
            let t = fine / r;
            let available = (fine * fine - claimed_fine) / (t * t);
            let kk = rng.gen_range(0..=available);
            claimed_fine += kk * t * t;
            budgets.push(kk);
        }
        return (grids, sides, budgets, k);
    }
}
