use crate::image::{BinaryImage, MinimalSquare, OctantId};

use super::SHADOW_LEN;

/// Bin indices of a doubled offset on the three sides of its octant, in the
/// order edge (a), half-diagonal (b), half-midline (c).
///
/// Each pixel centre is projected perpendicularly onto the side's line and
/// the projection is cut into unit-length bins starting at the end nearest
/// the square centre (the edge midpoint for side a).
#[inline]
pub fn shadow_bins(octant: OctantId, u: i64, v: i64) -> [usize; 3] {
    let (p, q) = octant.to_frame(u, v);
    debug_assert!(0 <= q && q <= p);
    // halve the doubled coordinates, floor
    let a = (q / 2) as usize;
    let c = (p / 2) as usize;
    // floor((p + q) / (2 * sqrt 2)) == floor(sqrt(m^2 / 8)), m = p + q >= 0
    let m = (p + q) as u64;
    let b = (m * m / 8).isqrt() as usize;
    [a, b, c]
}

/// Number of bins per (octant, side) that a fully inked square of side `s`
/// occupies. This is the normalising denominator, so a full octant scores 1
/// on every side.
///
/// An octant that holds no pixel at all (only possible for `s == 1`) has
/// zero bins.
pub fn side_bin_counts(side: usize) -> [[usize; 3]; 8] {
    let s = side as i64;
    // upper bound on any bin index + 1
    let cap = side.div_ceil(2).max((2 * side * side).isqrt() + 1);
    let mut hit = vec![[vec![false; cap], vec![false; cap], vec![false; cap]]; 8];
    for r in 0..s {
        for c in 0..s {
            let u = 2 * c + 1 - s;
            let v = s - 2 * r - 1;
            let o = OctantId::of_offset(u, v);
            for (k, bin) in shadow_bins(o, u, v).into_iter().enumerate() {
                hit[o.index()][k][bin] = true;
            }
        }
    }
    let mut counts = [[0usize; 3]; 8];
    for (o, sides) in hit.iter().enumerate() {
        for k in 0..3 {
            counts[o][k] = sides[k].iter().filter(|&&b| b).count();
        }
    }
    counts
}

/// 24 shadow features: per octant and side, occupied bins over the bins a
/// fully inked octant would occupy.
pub fn shadow_features(img: &BinaryImage, sq: &MinimalSquare) -> [f64; SHADOW_LEN] {
    let s = sq.side;
    let cap = s.div_ceil(2).max((2 * s * s).isqrt() + 1);
    let mut hit = vec![vec![false; cap]; 24];

    let s_i = s as i64;
    let r_lo = sq.row0.max(0);
    let r_hi = (sq.row0 + s_i).min(img.height() as i64);
    let c_lo = sq.col0.max(0);
    let c_hi = (sq.col0 + s_i).min(img.width() as i64);
    for r in r_lo..r_hi {
        for c in c_lo..c_hi {
            if !img.get(r, c) {
                continue;
            }
            let (u, v) = sq.doubled_offset(r, c);
            let o = OctantId::of_offset(u, v);
            for (k, bin) in shadow_bins(o, u, v).into_iter().enumerate() {
                hit[3 * o.index() + k][bin] = true;
            }
        }
    }

    let counts = side_bin_counts(s);
    let mut out = [0.0; SHADOW_LEN];
    for (i, bins) in hit.iter().enumerate() {
        let total = counts[i / 3][i % 3];
        if total > 0 {
            let occupied = bins.iter().filter(|&&b| b).count();
            out[i] = occupied as f64 / total as f64;
        }
    }
    out
}
