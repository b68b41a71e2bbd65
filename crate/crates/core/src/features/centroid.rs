use crate::image::{BinaryImage, MinimalSquare, OctantId};

use super::CENTROID_LEN;

/// Normalised `(row, col)` of the vertex average of an octant's triangle
/// (centre, edge midpoint, corner).
pub fn empty_octant_centroid(octant: OctantId) -> (f64, f64) {
    // in the octant frame with half-side 1/2: vertices (0,0), (1/2,0), (1/2,1/2)
    let (u, v) = octant.from_frame(1.0 / 3.0, 1.0 / 6.0);
    (0.5 - v, 0.5 + u)
}

/// 16 centroid features: per octant the mean pixel-centre position of its
/// ink, square-relative and divided by the side. Octants without ink
/// report [`empty_octant_centroid`].
pub fn centroid_features(img: &BinaryImage, sq: &MinimalSquare) -> [f64; CENTROID_LEN] {
    // (sum of relative rows, sum of relative cols, count)
    let mut acc = [(0i64, 0i64, 0i64); 8];
    for (r, c) in img.foreground() {
        let (r, c) = (r as i64, c as i64);
        if !sq.contains(r, c) {
            continue;
        }
        let (u, v) = sq.doubled_offset(r, c);
        let o = OctantId::of_offset(u, v).index();
        acc[o].0 += r - sq.row0;
        acc[o].1 += c - sq.col0;
        acc[o].2 += 1;
    }

    let s = sq.side as f64;
    let mut out = [0.0; CENTROID_LEN];
    for (o, &(rs, cs, n)) in acc.iter().enumerate() {
        let (row, col) = if n == 0 {
            empty_octant_centroid(OctantId::ALL[o])
        } else {
            let n = n as f64;
            ((rs as f64 / n + 0.5) / s, (cs as f64 / n + 0.5) / s)
        };
        out[2 * o] = row;
        out[2 * o + 1] = col;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::{minimal_square, octant_of};

    #[test]
    fn default_centroids() {
        let (r, c) = empty_octant_centroid(OctantId::ALL[0]);
        assert!((r - 1.0 / 3.0).abs() < 1e-15 && (c - 5.0 / 6.0).abs() < 1e-15);
        let (r, c) = empty_octant_centroid(OctantId::ALL[5]);
        assert!((r - 5.0 / 6.0).abs() < 1e-15 && (c - 1.0 / 3.0).abs() < 1e-15);
        for o in OctantId::ALL {
            let (r, c) = empty_octant_centroid(o);
            let (mr, mc) = empty_octant_centroid(o.mirrored());
            assert!((r - mr).abs() < 1e-15 && (c - (1.0 - mc)).abs() < 1e-15);
        }
    }

    #[test]
    fn single_pixel() {
        let mut img = BinaryImage::blank(64, 64);
        img.set(12, 50, true);
        let sq = minimal_square(&img).unwrap();
        let f = centroid_features(&img, &sq);
        assert_eq!(&f[..2], &[0.5, 0.5]);
        for o in 1..8 {
            let (r, c) = empty_octant_centroid(OctantId::ALL[o]);
            assert_eq!(&f[2 * o..2 * o + 2], &[r, c]);
        }
    }

    #[test]
    fn full_square_matches_population_average() {
        let img = BinaryImage::filled(64, 64, true);
        let sq = minimal_square(&img).unwrap();
        let f = centroid_features(&img, &sq);

        let mut sums = [(0.0f64, 0.0f64, 0usize); 8];
        for r in 0..64i64 {
            for c in 0..64i64 {
                let o = octant_of(r, c, &sq).index();
                sums[o].0 += (r as f64 + 0.5) / 64.0;
                sums[o].1 += (c as f64 + 0.5) / 64.0;
                sums[o].2 += 1;
            }
        }
        for o in 0..8 {
            let n = sums[o].2 as f64;
            assert!((f[2 * o] - sums[o].0 / n).abs() < 1e-12);
            assert!((f[2 * o + 1] - sums[o].1 / n).abs() < 1e-12);
        }

        // Mirror pairs agree up to the half-open boundary assignment, which
        // moves the diagonal pixels into the odd octants: within 1/s.
        for o in OctantId::ALL {
            let m = o.mirrored().index();
            let i = o.index();
            assert!((f[2 * i] - f[2 * m]).abs() <= 1.0 / 64.0);
            assert!((f[2 * i + 1] - (1.0 - f[2 * m + 1])).abs() <= 1.0 / 64.0);
        }
    }

    #[test]
    fn distinguishes_different_shapes() {
        // a ring against a cross of the same bounding box
        let ring = BinaryImage::from_fn(64, 64, |r, c| {
            let (dr, dc) = (r as f64 - 31.5, c as f64 - 31.5);
            let d = (dr * dr + dc * dc).sqrt();
            (26.0..31.5).contains(&d)
        });
        let cross = BinaryImage::from_fn(64, 64, |r, c| (29..35).contains(&r) || (29..35).contains(&c));
        let a = centroid_features(&ring, &minimal_square(&ring).unwrap());
        let b = centroid_features(&cross, &minimal_square(&cross).unwrap());
        assert_ne!(a, b);
    }
}
