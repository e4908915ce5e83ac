//! Immerkær's fast noise variance estimate.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::Frame;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseEstimate<F> {
    /// Estimated noise variance in gray levels squared.
    pub sigma_sq: F,
}

impl<F: Real> NoiseEstimate<F> {
    pub fn new(sigma_sq: F) -> Self {
        NoiseEstimate { sigma_sq }
    }

    pub fn zero() -> Self {
        NoiseEstimate {
            sigma_sq: F::zero(),
        }
    }

    pub fn sigma(&self) -> F {
        self.sigma_sq.sqrt()
    }
}

/// Sum of `|L * frame|` over the interior, where `L` is the 3×3 mask
/// `[[1,-2,1],[-2,4,-2],[1,-2,1]]`. Exact integer arithmetic.
pub fn immerkaer_abs_sum(frame: &Frame) -> Result<u64> {
    let (w, h) = (frame.width(), frame.height());
    if w < 3 || h < 3 {
        return Err(Error::param(format!(
            "noise estimation needs at least 3x3 samples, got {w}x{h}"
        )));
    }
    let mut sum = 0u64;
    for y in 1..h - 1 {
        let (up, mid, down) = (frame.row(y - 1), frame.row(y), frame.row(y + 1));
        for x in 1..w - 1 {
            let r = |row: &[i32], a: i64, b: i64, c: i64| {
                a * row[x - 1] as i64 + b * row[x] as i64 + c * row[x + 1] as i64
            };
            let resp = r(up, 1, -2, 1) + r(mid, -2, 4, -2) + r(down, 1, -2, 1);
            sum += resp.unsigned_abs();
        }
    }
    Ok(sum)
}

/// `sigma = sqrt(pi/2) * S / (6 (W-2)(H-2))`, returned squared.
pub fn estimate_noise_variance<F: Real>(frame: &Frame) -> Result<NoiseEstimate<F>> {
    let sum = immerkaer_abs_sum(frame)?;
    let n = 6 * (frame.width() - 2) * (frame.height() - 2);
    let ratio = F::of_f64(sum as f64) / F::of_usize(n);
    Ok(NoiseEstimate::new(F::FRAC_PI_2() * ratio * ratio))
}
