//! Self-guided image filter (He et al.) with regulariser `eps = h`.

use super::window_mean;
use crate::scalar::Real;
use crate::Plane;

/// 9×9 windows.
pub const RADIUS: usize = 4;

pub(super) fn filter<F: Real>(input: &Plane<F>, h: F) -> Plane<F> {
    let (w, ht) = (input.width(), input.height());
    let squared = input.map(|v| v * v);
    let mut a = Plane::filled(w, ht, F::zero());
    let mut b = Plane::filled(w, ht, F::zero());
    for y in 0..ht {
        for x in 0..w {
            let mean = window_mean(input, x, y, RADIUS);
            let mean_sq = window_mean(&squared, x, y, RADIUS);
            let var = (mean_sq - mean * mean).max(F::zero());
            let ak = var / (var + h);
            a.set(x, y, ak);
            b.set(x, y, (F::one() - ak) * mean);
        }
    }
    Plane::from_fn(w, ht, |x, y| {
        window_mean(&a, x, y, RADIUS) * input.get(x, y) + window_mean(&b, x, y, RADIUS)
    })
}
