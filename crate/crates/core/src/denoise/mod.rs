//! Deterministic denoising filters and the noise-variance estimator that sets
//! their strength `h = xi * sigma_n^2`.
//!
//! Every filter works on the signed sample workspace, computes in the scalar
//! type `F` with a fixed evaluation order, uses clamp-to-edge borders, and
//! rounds half away from zero at the very end. Encoder and decoder call these
//! on identical inputs, so the outputs must be bit-identical for a given `F`.

mod awf;
mod bm3d;
mod gif;
mod nlm;
mod noise;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::scalar::{round_to_sample, Real};
use crate::{Frame, Plane};

pub use awf::WINDOW_RADIUS as AWF_WINDOW_RADIUS;
pub use bm3d::{
    BLOCK_SIZE as BM3D_BLOCK_SIZE, GROUP_SIZE as BM3D_GROUP_SIZE, STEP as BM3D_STEP,
    THRESHOLD_FACTOR as BM3D_THRESHOLD_FACTOR, WINDOW_SIZE as BM3D_WINDOW_SIZE,
};
pub use gif::RADIUS as GIF_RADIUS;
pub use nlm::{PATCH_RADIUS as NLM_PATCH_RADIUS, SEARCH_RADIUS as NLM_SEARCH_RADIUS};
pub use noise::{estimate_noise_variance, immerkaer_abs_sum, NoiseEstimate};

/// Noise parameter `xi`, an exact non-negative rational.
pub type Xi = Ratio<u16>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum DenoiseKind {
    Identity = 0,
    /// Adaptive Wiener filter.
    Awf = 1,
    /// Non-local means.
    Nlm = 2,
    /// Self-guided image filter.
    Gif = 3,
    /// Single-stage collaborative hard thresholding.
    Bm3dSimplified = 4,
}

impl DenoiseKind {
    pub const ALL: [DenoiseKind; 5] = [
        DenoiseKind::Identity,
        DenoiseKind::Awf,
        DenoiseKind::Nlm,
        DenoiseKind::Gif,
        DenoiseKind::Bm3dSimplified,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DenoiseKind::Identity => "identity",
            DenoiseKind::Awf => "awf",
            DenoiseKind::Nlm => "nlm",
            DenoiseKind::Gif => "gif",
            DenoiseKind::Bm3dSimplified => "bm3d_simplified",
        }
    }
}

impl TryFrom<u8> for DenoiseKind {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        DenoiseKind::ALL
            .into_iter()
            .find(|k| *k as u8 == v)
            .ok_or_else(|| Error::Unknown {
                what: "denoiser kind",
                value: v.to_string(),
            })
    }
}

impl FromStr for DenoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "identity" | "none" => Ok(DenoiseKind::Identity),
            "awf" => Ok(DenoiseKind::Awf),
            "nlm" => Ok(DenoiseKind::Nlm),
            "gif" => Ok(DenoiseKind::Gif),
            "bm3d" | "bm3d_simplified" => Ok(DenoiseKind::Bm3dSimplified),
            _ => Err(Error::Unknown {
                what: "denoiser kind",
                value: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for DenoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DenoiseConfig {
    pub kind: DenoiseKind,
    pub xi: Xi,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        DenoiseConfig::identity()
    }
}

impl DenoiseConfig {
    pub fn new(kind: DenoiseKind, xi: Xi) -> Self {
        DenoiseConfig { kind, xi }
    }

    pub fn identity() -> Self {
        DenoiseConfig {
            kind: DenoiseKind::Identity,
            xi: Xi::from_integer(0),
        }
    }

    pub fn with_integer_xi(kind: DenoiseKind, xi: u16) -> Self {
        DenoiseConfig {
            kind,
            xi: Xi::from_integer(xi),
        }
    }

    pub fn is_noop(&self) -> bool {
        self.kind == DenoiseKind::Identity || *self.xi.numer() == 0
    }

    /// Filter strength `h = xi * sigma_sq`.
    pub fn strength<F: Real>(&self, noise: &NoiseEstimate<F>) -> F {
        let num = F::of_i64(*self.xi.numer() as i64);
        let den = F::of_i64(*self.xi.denom() as i64);
        num / den * noise.sigma_sq
    }
}

/// Applies the configured filter with strength `cfg.xi * noise.sigma_sq`.
///
/// Identity filters and zero strength return the input unchanged.
pub fn denoise<F: Real>(frame: &Frame, cfg: &DenoiseConfig, noise: &NoiseEstimate<F>) -> Frame {
    let h = cfg.strength(noise);
    if cfg.kind == DenoiseKind::Identity || h.partial_cmp(&F::zero()) != Some(std::cmp::Ordering::Greater) {
        return frame.clone();
    }
    let input: Plane<F> = frame.map(|s| F::of_i64(s as i64));
    let out = match cfg.kind {
        DenoiseKind::Identity => unreachable!(),
        DenoiseKind::Awf => awf::filter(&input, h),
        DenoiseKind::Nlm => nlm::filter(&input, h),
        DenoiseKind::Gif => gif::filter(&input, h),
        DenoiseKind::Bm3dSimplified => bm3d::filter(&input, h),
    };
    out.map(round_to_sample)
}

/// Estimates the noise variance on `frame` itself and denoises it.
///
/// Frames too small for the estimator (under 3×3) pass through unchanged with
/// a zero estimate.
pub fn denoise_self_estimated<F: Real>(frame: &Frame, cfg: &DenoiseConfig) -> (Frame, NoiseEstimate<F>) {
    if cfg.is_noop() {
        return (frame.clone(), NoiseEstimate::zero());
    }
    let noise = estimate_noise_variance(frame).unwrap_or_else(|_| NoiseEstimate::zero());
    (denoise(frame, cfg, &noise), noise)
}

/// Mean of a clamp-to-edge square window, summed in raster order.
pub(crate) fn window_mean<F: Real>(plane: &Plane<F>, x: usize, y: usize, radius: usize) -> F {
    let r = radius as isize;
    let mut sum = F::zero();
    for oy in -r..=r {
        for ox in -r..=r {
            sum = sum + plane.get_clamped(x as isize + ox, y as isize + oy);
        }
    }
    let n = (2 * radius + 1) * (2 * radius + 1);
    sum / F::of_usize(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Sample;

    fn noisy(w: usize, h: usize, seed: u64) -> Frame {
        let mut rng = crate::rng::XorShift64Star::new(seed);
        Frame::from_fn(w, h, |_, _| 2000 + round_to_sample(12.0 * rng.next_normal()))
    }

    #[test]
    fn kinds_round_trip_through_u8_and_str() {
        for k in DenoiseKind::ALL {
            assert_eq!(DenoiseKind::try_from(k as u8).unwrap(), k);
            assert_eq!(k.name().parse::<DenoiseKind>().unwrap(), k);
        }
        assert!(DenoiseKind::try_from(9).is_err());
        assert!("median".parse::<DenoiseKind>().is_err());
    }

    #[test]
    fn identity_and_zero_strength_are_noops() {
        let f = noisy(20, 20, 1);
        let noise = NoiseEstimate::<f64>::new(144.0);
        let id = DenoiseConfig::with_integer_xi(DenoiseKind::Identity, 50);
        assert_eq!(denoise(&f, &id, &noise), f);
        for k in DenoiseKind::ALL {
            let cfg = DenoiseConfig::with_integer_xi(k, 0);
            assert_eq!(denoise(&f, &cfg, &noise), f, "{k}");
            let cfg = DenoiseConfig::with_integer_xi(k, 8);
            assert_eq!(denoise(&f, &cfg, &NoiseEstimate::<f64>::zero()), f, "{k}");
        }
    }

    #[test]
    fn constant_frames_pass_through_every_filter() {
        let f = Frame::filled(17, 13, -321);
        let noise = NoiseEstimate::<f64>::new(100.0);
        for k in DenoiseKind::ALL {
            let cfg = DenoiseConfig::with_integer_xi(k, 16);
            assert_eq!(denoise(&f, &cfg, &noise), f, "{k}");
        }
    }

    #[test]
    fn outputs_are_deterministic() {
        let f = noisy(32, 24, 5);
        let noise = estimate_noise_variance::<f64>(&f).unwrap();
        for k in DenoiseKind::ALL {
            let cfg = DenoiseConfig::with_integer_xi(k, 3);
            assert_eq!(denoise(&f, &cfg, &noise), denoise(&f, &cfg, &noise));
        }
    }

    #[test]
    fn convex_filters_stay_in_range() {
        let f = noisy(24, 24, 11);
        let (lo, hi) = f.min_max().unwrap();
        let noise = estimate_noise_variance::<f64>(&f).unwrap();
        for k in [DenoiseKind::Awf, DenoiseKind::Nlm, DenoiseKind::Gif] {
            for xi in [1u16, 8, 100] {
                let out = denoise(&f, &DenoiseConfig::with_integer_xi(k, xi), &noise);
                let (olo, ohi) = out.min_max().unwrap();
                assert!(olo >= lo && ohi <= hi, "{k} xi={xi}: [{olo},{ohi}] vs [{lo},{hi}]");
            }
        }
    }

    #[test]
    fn filters_reduce_noise_variance() {
        let f = noisy(48, 48, 21);
        let var = |p: &Frame| {
            let n = p.len() as f64;
            let m = p.samples().iter().map(|&s| s as f64).sum::<f64>() / n;
            p.samples().iter().map(|&s| (s as f64 - m).powi(2)).sum::<f64>() / n
        };
        let noise = estimate_noise_variance::<f64>(&f).unwrap();
        for k in [
            DenoiseKind::Awf,
            DenoiseKind::Nlm,
            DenoiseKind::Gif,
            DenoiseKind::Bm3dSimplified,
        ] {
            let out = denoise(&f, &DenoiseConfig::with_integer_xi(k, 1), &noise);
            assert!(var(&out) < 0.5 * var(&f), "{k}: {} vs {}", var(&out), var(&f));
        }
    }

    #[test]
    fn f32_instantiation_works() {
        let f = noisy(16, 16, 2);
        let noise = estimate_noise_variance::<f32>(&f).unwrap();
        let out = denoise(&f, &DenoiseConfig::with_integer_xi(DenoiseKind::Gif, 4), &noise);
        assert_eq!(out.width(), 16);
        let _: Sample = out.get(0, 0);
    }

    #[test]
    fn fractional_xi_scales_strength() {
        let cfg = DenoiseConfig::new(DenoiseKind::Awf, Xi::new(3, 2));
        assert_eq!(cfg.strength(&NoiseEstimate::new(10.0f64)), 15.0);
    }
}
