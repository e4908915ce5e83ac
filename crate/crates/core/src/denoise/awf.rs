//! Adaptive (Lee-style) Wiener filter: `mean + max(0, var - h) / var * (x - mean)`
//! over a square window.

use super::window_mean;
use crate::scalar::Real;
use crate::Plane;

/// 5×5 window.
pub const WINDOW_RADIUS: usize = 2;

pub(super) fn filter<F: Real>(input: &Plane<F>, h: F) -> Plane<F> {
    let r = WINDOW_RADIUS as isize;
    let n = F::of_usize((2 * WINDOW_RADIUS + 1) * (2 * WINDOW_RADIUS + 1));
    Plane::from_fn(input.width(), input.height(), |x, y| {
        let mean = window_mean(input, x, y, WINDOW_RADIUS);
        let mut ss = F::zero();
        for oy in -r..=r {
            for ox in -r..=r {
                let d = input.get_clamped(x as isize + ox, y as isize + oy) - mean;
                ss = ss + d * d;
            }
        }
        let var = ss / n;
        let v = input.get(x, y);
        if var > F::zero() {
            let gain = (var - h).max(F::zero()) / var;
            mean + gain * (v - mean)
        } else {
            mean
        }
    })
}
