//! Pixelwise non-local means with weights `exp(-max(0, d² - 2h) / h)`, where
//! `d²` is the mean squared difference of two 3×3 patches.

use crate::scalar::Real;
use crate::Plane;

/// 7×7 search window.
pub const SEARCH_RADIUS: usize = 3;
/// 3×3 patches.
pub const PATCH_RADIUS: usize = 1;

fn patch_distance<F: Real>(input: &Plane<F>, px: isize, py: isize, qx: isize, qy: isize) -> F {
    let r = PATCH_RADIUS as isize;
    let mut ss = F::zero();
    for oy in -r..=r {
        for ox in -r..=r {
            let d = input.get_clamped(px + ox, py + oy) - input.get_clamped(qx + ox, qy + oy);
            ss = ss + d * d;
        }
    }
    let n = (2 * PATCH_RADIUS + 1) * (2 * PATCH_RADIUS + 1);
    ss / F::of_usize(n)
}

pub(super) fn filter<F: Real>(input: &Plane<F>, h: F) -> Plane<F> {
    let s = SEARCH_RADIUS as isize;
    let two_h = h + h;
    Plane::from_fn(input.width(), input.height(), |x, y| {
        let (px, py) = (x as isize, y as isize);
        let mut wsum = F::zero();
        let mut acc = F::zero();
        for oy in -s..=s {
            for ox in -s..=s {
                let (qx, qy) = (px + ox, py + oy);
                let d2 = patch_distance(input, px, py, qx, qy);
                let w = (-(d2 - two_h).max(F::zero()) / h).exp();
                wsum = wsum + w;
                acc = acc + w * input.get_clamped(qx, qy);
            }
        }
        acc / wsum
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct evaluation of the weight formula for the centre of a 9×9 frame
    /// holding one bright pixel.
    fn centre_oracle(v: f64, h: f64) -> f64 {
        let at = |x: i64, y: i64| if (x, y) == (4, 4) { v } else { 0.0 };
        let clamp = |c: i64| c.clamp(0, 8);
        let mut wsum = 0.0;
        let mut acc = 0.0;
        for qy in 1..=7i64 {
            for qx in 1..=7i64 {
                let mut ss = 0.0;
                for oy in -1..=1i64 {
                    for ox in -1..=1i64 {
                        let a = at(clamp(4 + ox), clamp(4 + oy));
                        let b = at(clamp(qx + ox), clamp(qy + oy));
                        ss += (a - b) * (a - b);
                    }
                }
                let d2 = ss / 9.0;
                let w = (-(d2 - 2.0 * h).max(0.0) / h).exp();
                wsum += w;
                acc += w * at(qx, qy);
            }
        }
        acc / wsum
    }

    #[test]
    fn bright_pixel_matches_oracle_and_is_reduced() {
        let v = 1000.0;
        let input = Plane::from_fn(9, 9, |x, y| if (x, y) == (4, 4) { v } else { 0.0 });
        for h in [1e3, 1e5, 1e7] {
            let out = filter(&input, h);
            let centre = out.get(4, 4);
            assert!((centre - centre_oracle(v, h)).abs() < 1e-9);
            if h >= 1e5 {
                assert!(centre < v, "h={h}");
            }
            for &s in out.samples() {
                assert!((0.0..=v).contains(&s));
            }
        }
    }
}
