use crate::image::{BinaryImage, MinimalSquare};

use super::LONGEST_RUN_LEN;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolGrid {
    rows: usize,
    cols: usize,
    cells: Vec<bool>,
}

impl BoolGrid {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(rows > 0 && cols > 0, "degenerate grid");
        let mut cells = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                cells.push(f(r, c));
            }
        }
        Self { rows, cols, cells }
    }

    /// Builds a grid from rows of equal length.
    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged grid");
        Self::from_fn(rows.len(), cols, |r, c| rows[r].as_ref()[c])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cells[r * self.cols + c]
    }
}

/// Scan-line direction. `Diagonal` runs down-right, `AntiDiagonal` down-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Row,
    Column,
    Diagonal,
    AntiDiagonal,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Row,
        Direction::Column,
        Direction::Diagonal,
        Direction::AntiDiagonal,
    ];
}

fn longest_run(cells: impl Iterator<Item = bool>) -> u64 {
    let (mut best, mut cur) = (0u64, 0u64);
    for b in cells {
        cur = if b { cur + 1 } else { 0 };
        best = best.max(cur);
    }
    best
}

/// Sum over every scan line in `dir` of the longest run of consecutive ink
/// cells on that line.
pub fn longest_bar_sum(grid: &BoolGrid, dir: Direction) -> u64 {
    let (h, w) = (grid.rows, grid.cols);
    match dir {
        Direction::Row => (0..h)
            .map(|r| longest_run((0..w).map(|c| grid.get(r, c))))
            .sum(),
        Direction::Column => (0..w)
            .map(|c| longest_run((0..h).map(|r| grid.get(r, c))))
            .sum(),
        Direction::Diagonal => (0..h + w - 1)
            .map(|k| {
                // lines start on the left column (bottom up) then the top row
                let (r0, c0) = if k < h { (h - 1 - k, 0) } else { (0, k - h + 1) };
                let len = (h - r0).min(w - c0);
                longest_run((0..len).map(|i| grid.get(r0 + i, c0 + i)))
            })
            .sum(),
        Direction::AntiDiagonal => (0..h + w - 1)
            .map(|k| {
                // r + c == k
                let r0 = k.saturating_sub(w - 1);
                let c0 = k - r0;
                let len = (h - r0).min(c0 + 1);
                longest_run((0..len).map(|i| grid.get(r0 + i, c0 - i)))
            })
            .sum(),
    }
}

/// Sub-window of the minimal square, offsets relative to its top-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub row0: usize,
    pub col0: usize,
    pub height: usize,
    pub width: usize,
}

/// The nine overlapping regions, row-major: corners at
/// `{0, floor(s/4), floor(s/2)}` on each axis, each `ceil(s/2)` square.
pub fn regions(side: usize) -> [Region; 9] {
    let corners = [0, side / 4, 2 * side / 4];
    let ext = side.div_ceil(2);
    std::array::from_fn(|i| Region {
        row0: corners[i / 3],
        col0: corners[i % 3],
        height: ext,
        width: ext,
    })
}

/// 36 longest-run features, each bar sum divided by the region area.
pub fn longest_run_features(img: &BinaryImage, sq: &MinimalSquare) -> [f64; LONGEST_RUN_LEN] {
    let mut out = [0.0; LONGEST_RUN_LEN];
    for (i, reg) in regions(sq.side).iter().enumerate() {
        let grid = BoolGrid::from_fn(reg.height, reg.width, |r, c| {
            img.get(
                sq.row0 + (reg.row0 + r) as i64,
                sq.col0 + (reg.col0 + c) as i64,
            )
        });
        let area = (reg.height * reg.width) as f64;
        for (k, dir) in Direction::ALL.into_iter().enumerate() {
            out[4 * i + k] = longest_bar_sum(&grid, dir) as f64 / area;
        }
    }
    out
}
