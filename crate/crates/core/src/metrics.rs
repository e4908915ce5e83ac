//! Rate and LP-quality metrics.
//!
//! `PSNR_LP` compares an LP frame against both frames of its pair by averaging
//! the two mean squared errors before taking the logarithm; `SSIM_LP` is the
//! mean of the two SSIM values.

use std::fmt;

use crate::error::Result;
use crate::scalar::Real;
use crate::{Frame, Sample};

/// A PSNR value, or the marker for identical inputs.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum Psnr<F> {
    Lossless,
    Db(F),
}

impl<F: Real> Psnr<F> {
    fn from_mse(max_value: F, mse: F) -> Self {
        if mse == F::zero() {
            Psnr::Lossless
        } else {
            Psnr::Db(F::of_usize(10) * (max_value * max_value / mse).log10())
        }
    }

    pub fn db(&self) -> Option<F> {
        match *self {
            Psnr::Lossless => None,
            Psnr::Db(v) => Some(v),
        }
    }

    /// `+inf` for the lossless marker.
    pub fn as_float(&self) -> F {
        self.db().unwrap_or_else(F::infinity)
    }

    /// Arithmetic mean; any lossless entry makes the mean lossless (infinite).
    pub fn mean(values: &[Psnr<F>]) -> Option<Psnr<F>> {
        if values.is_empty() {
            return None;
        }
        let mut sum = F::zero();
        for v in values {
            match v {
                Psnr::Lossless => return Some(Psnr::Lossless),
                Psnr::Db(d) => sum = sum + *d,
            }
        }
        Some(Psnr::Db(sum / F::of_usize(values.len())))
    }
}

impl<F: Real + fmt::Display> fmt::Display for Psnr<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Lossless => f.write_str("inf"),
            Psnr::Db(v) => write!(f, "{v}"),
        }
    }
}

/// Mean squared error, accumulated exactly in integers.
pub fn mse<F: Real>(a: &Frame, b: &Frame) -> Result<F> {
    a.check_same_dims(b)?;
    let sum: u128 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = (x as i64 - y as i64).unsigned_abs() as u128;
            d * d
        })
        .sum();
    Ok(F::of_f64(sum as f64) / F::of_usize(a.len()))
}

pub fn psnr<F: Real>(a: &Frame, b: &Frame, max_value: Sample) -> Result<Psnr<F>> {
    Ok(Psnr::from_mse(F::of_i64(max_value as i64), mse(a, b)?))
}

pub fn psnr_lp<F: Real>(lp: &Frame, f_odd: &Frame, f_even: &Frame, max_value: Sample) -> Result<Psnr<F>> {
    let m = (mse::<F>(lp, f_odd)? + mse::<F>(lp, f_even)?) / F::of_usize(2);
    Ok(Psnr::from_mse(F::of_i64(max_value as i64), m))
}

pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;
pub const SSIM_WINDOW: usize = 8;

/// Mean SSIM over all `8×8` windows (stride 1, uniform weights, population
/// statistics). Frames narrower than the window use their full extent.
pub fn ssim<F: Real>(a: &Frame, b: &Frame, max_value: Sample) -> Result<F> {
    a.check_same_dims(b)?;
    let (w, h) = (a.width(), a.height());
    let (ww, wh) = (SSIM_WINDOW.min(w), SSIM_WINDOW.min(h));
    let l = F::of_i64(max_value as i64);
    let c1 = (F::of_f64(SSIM_K1) * l).powi(2);
    let c2 = (F::of_f64(SSIM_K2) * l).powi(2);
    let n = F::of_usize(ww * wh);
    let two = F::of_usize(2);

    let mut total = F::zero();
    let mut windows = 0usize;
    for y0 in 0..=h - wh {
        for x0 in 0..=w - ww {
            let (mut sa, mut sb) = (F::zero(), F::zero());
            for y in y0..y0 + wh {
                for x in x0..x0 + ww {
                    sa = sa + F::of_i64(a.get(x, y) as i64);
                    sb = sb + F::of_i64(b.get(x, y) as i64);
                }
            }
            let (ma, mb) = (sa / n, sb / n);
            let (mut vaa, mut vbb, mut vab) = (F::zero(), F::zero(), F::zero());
            for y in y0..y0 + wh {
                for x in x0..x0 + ww {
                    let da = F::of_i64(a.get(x, y) as i64) - ma;
                    let db = F::of_i64(b.get(x, y) as i64) - mb;
                    vaa = vaa + da * da;
                    vbb = vbb + db * db;
                    vab = vab + da * db;
                }
            }
            let (vaa, vbb, vab) = (vaa / n, vbb / n, vab / n);
            let s = ((two * ma * mb + c1) * (two * vab + c2))
                / ((ma * ma + mb * mb + c1) * (vaa + vbb + c2));
            total = total + s;
            windows += 1;
        }
    }
    Ok(total / F::of_usize(windows))
}

pub fn ssim_lp<F: Real>(lp: &Frame, f_odd: &Frame, f_even: &Frame, max_value: Sample) -> Result<F> {
    Ok((ssim::<F>(lp, f_odd, max_value)? + ssim::<F>(lp, f_even, max_value)?) / F::of_usize(2))
}

/// LP quality of a whole decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityReport<F> {
    pub psnr_lp: Psnr<F>,
    pub ssim_lp: F,
    pub per_pair: Vec<(Psnr<F>, F)>,
}

impl<F: Real> QualityReport<F> {
    /// Evaluates each LP frame against the frame pair it was built from.
    pub fn evaluate<'a>(
        lps: impl IntoIterator<Item = &'a Frame>,
        originals: &[Frame],
        max_value: Sample,
    ) -> Result<Self> {
        let mut per_pair = Vec::new();
        for (lp, pair) in lps.into_iter().zip(originals.chunks_exact(2)) {
            per_pair.push((
                psnr_lp::<F>(lp, &pair[0], &pair[1], max_value)?,
                ssim_lp::<F>(lp, &pair[0], &pair[1], max_value)?,
            ));
        }
        let psnrs: Vec<_> = per_pair.iter().map(|p| p.0).collect();
        let psnr_lp = Psnr::mean(&psnrs).unwrap_or(Psnr::Lossless);
        let ssim_lp = if per_pair.is_empty() {
            F::one()
        } else {
            per_pair.iter().fold(F::zero(), |acc, p| acc + p.1) / F::of_usize(per_pair.len())
        };
        Ok(QualityReport {
            psnr_lp,
            ssim_lp,
            per_pair,
        })
    }
}

pub const BYTES_PER_MB: f64 = 1e6;

/// One configuration's sizes and quality, compared against a baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressionReport<F> {
    pub total_bytes: usize,
    pub size_mb: F,
    pub delta_mb: F,
    pub rel_delta_pct: F,
    pub psnr_lp: Psnr<F>,
    /// `None` when either side is lossless.
    pub delta_psnr_db: Option<F>,
    pub ssim_lp: F,
}

/// `(size - base) / base * 100`.
pub fn relative_delta_pct<F: Real>(size: F, base: F) -> F {
    (size - base) / base * F::of_usize(100)
}

pub fn compression_report<F: Real>(
    total_bytes: usize,
    quality: &QualityReport<F>,
    baseline: Option<(usize, &QualityReport<F>)>,
) -> CompressionReport<F> {
    let mb = F::of_f64(BYTES_PER_MB);
    let size_mb = F::of_usize(total_bytes) / mb;
    let (base_bytes, base_quality) = baseline.unwrap_or((total_bytes, quality));
    let base_mb = F::of_usize(base_bytes) / mb;
    let delta_psnr_db = match (quality.psnr_lp.db(), base_quality.psnr_lp.db()) {
        (Some(a), Some(b)) => Some(a - b),
        _ => None,
    };
    CompressionReport {
        total_bytes,
        size_mb,
        delta_mb: size_mb - base_mb,
        rel_delta_pct: relative_delta_pct(F::of_usize(total_bytes), F::of_usize(base_bytes)),
        psnr_lp: quality.psnr_lp,
        delta_psnr_db,
        ssim_lp: quality.ssim_lp,
    }
}
