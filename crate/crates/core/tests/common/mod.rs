#![allow(dead_code)]

use std::collections::BTreeMap;

use glyphrec::features::{BoolGrid, Direction};
use glyphrec::rng::stream_rng;
use glyphrec::{BinaryImage, CANVAS};
use rand::Rng;

/// Random nonempty 64x64 glyph: noise of random density inside a random box.
pub fn random_glyph(seed: u64) -> BinaryImage {
    let mut rng = stream_rng(seed, 7);
    let h = rng.random_range(1..=40);
    let w = rng.random_range(1..=40);
    let top = rng.random_range(0..=CANVAS - h);
    let left = rng.random_range(0..=CANVAS - w);
    let p: f64 = rng.random_range(0.05..0.7);
    let mut img = BinaryImage::from_fn(CANVAS, CANVAS, |r, c| {
        r >= top && r < top + h && c >= left && c < left + w && rng.random::<f64>() < p
    });
    img.set(top + h / 2, left + w / 2, true);
    img
}

pub fn random_grid(seed: u64, max: usize) -> BoolGrid {
    let mut rng = stream_rng(seed, 8);
    let rows = rng.random_range(1..=max);
    let cols = rng.random_range(1..=max);
    let p: f64 = rng.random_range(0.1..0.9);
    BoolGrid::from_fn(rows, cols, |_, _| rng.random::<f64>() < p)
}

/// Groups cells into scan lines by a key, walks each line in increasing
/// row order, lists all maximal runs and keeps the longest.
pub fn naive_bar_sum(grid: &BoolGrid, dir: Direction) -> u64 {
    let mut lines: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for r in 0..grid.rows() {
        for c in 0..grid.cols() {
            let key = match dir {
                Direction::Row => r as i64,
                Direction::Column => c as i64,
                Direction::Diagonal => c as i64 - r as i64,
                Direction::AntiDiagonal => c as i64 + r as i64,
            };
            lines.entry(key).or_default().push((r, c));
        }
    }
    let mut total = 0;
    for cells in lines.values_mut() {
        cells.sort();
        let mut runs = Vec::new();
        let mut start = None;
        for (i, &(r, c)) in cells.iter().enumerate() {
            match (grid.get(r, c), start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    runs.push(i - s);
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push(cells.len() - s);
        }
        total += runs.into_iter().max().unwrap_or(0) as u64;
    }
    total
}
