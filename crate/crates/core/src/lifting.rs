//! One level of motion-compensated Haar lifting along time, with optional
//! in-loop denoising in the prediction and/or update step.
//!
//! For a pair `(f_odd, f_even)` with motion field `mf` estimated once on the
//! original frames:
//!
//! ```text
//! P  = W(f_odd)                     MCTF, WLDU, WLDUr, TRUNCATED, HAAR_PLAIN
//! P  = DN(W(f_odd))                 WLDP, WLDPU
//! HP = f_even - P
//!
//! U  = W⁻¹(HP)                      MCTF, HAAR_PLAIN, WLDP
//! U  = W⁻¹(DN(HP))                  WLDU
//! U  = DN(W⁻¹(HP))                  WLDUr, WLDPU
//! U  = 0                            TRUNCATED
//! LP = f_odd + ⌊U / 2⌋
//! ```
//!
//! `W`/`W⁻¹` are forward/inverse block warps and `DN` estimates the noise
//! variance on its own input before filtering. Every quantity feeding `DN`
//! is available to the decoder, so synthesis recomputes `U` from `HP` and then
//! `P` from the recovered `f_odd`, which makes the transform exactly
//! invertible whatever the filter does.

use std::fmt;
use std::str::FromStr;

use crate::denoise::{denoise_self_estimated, DenoiseConfig, NoiseEstimate};
use crate::error::{Error, Result};
use crate::motion::{estimate_motion, warp, MotionConfig, MotionField, WarpDirection};
use crate::volume::Sequence;
use crate::{Frame, Real, Sample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum LiftingMode {
    Mctf = 0,
    /// Denoised update: DN before the inverse warp.
    Wldu = 1,
    /// Denoised update, reversed order: DN after the inverse warp.
    WlduR = 2,
    /// Denoised prediction.
    Wldp = 3,
    /// Denoised prediction and (reversed-order) update.
    Wldpu = 4,
    /// No update step: LP is the odd frame.
    Truncated = 5,
    /// Plain Haar without motion or denoising.
    HaarPlain = 6,
}

impl LiftingMode {
    pub const ALL: [LiftingMode; 7] = [
        LiftingMode::Mctf,
        LiftingMode::Wldu,
        LiftingMode::WlduR,
        LiftingMode::Wldp,
        LiftingMode::Wldpu,
        LiftingMode::Truncated,
        LiftingMode::HaarPlain,
    ];

    /// The five motion-compensated modes that share the full lifting
    /// structure.
    pub const COMPENSATED: [LiftingMode; 5] = [
        LiftingMode::Mctf,
        LiftingMode::Wldu,
        LiftingMode::WlduR,
        LiftingMode::Wldp,
        LiftingMode::Wldpu,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LiftingMode::Mctf => "MCTF",
            LiftingMode::Wldu => "WLDU",
            LiftingMode::WlduR => "WLDUr",
            LiftingMode::Wldp => "WLDP",
            LiftingMode::Wldpu => "WLDPU",
            LiftingMode::Truncated => "TRUNCATED",
            LiftingMode::HaarPlain => "HAAR_PLAIN",
        }
    }

    /// Whether the mode applies a denoiser anywhere.
    pub fn uses_denoiser(&self) -> bool {
        matches!(
            self,
            LiftingMode::Wldu | LiftingMode::WlduR | LiftingMode::Wldp | LiftingMode::Wldpu
        )
    }

    fn denoised_prediction(&self) -> bool {
        matches!(self, LiftingMode::Wldp | LiftingMode::Wldpu)
    }
}

impl TryFrom<u8> for LiftingMode {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        LiftingMode::ALL
            .into_iter()
            .find(|m| *m as u8 == v)
            .ok_or_else(|| Error::Unknown {
                what: "lifting mode",
                value: v.to_string(),
            })
    }
}

impl FromStr for LiftingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_uppercase().replace('-', "_");
        LiftingMode::ALL
            .into_iter()
            .find(|m| m.name().to_ascii_uppercase() == key)
            .or(match key.as_str() {
                "TRUNC" | "TRUNCATED_WT" => Some(LiftingMode::Truncated),
                "HAAR" => Some(LiftingMode::HaarPlain),
                _ => None,
            })
            .ok_or_else(|| Error::Unknown {
                what: "lifting mode",
                value: s.to_string(),
            })
    }
}

impl fmt::Display for LiftingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Lifting parameters shared by encoder and decoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftingConfig {
    pub mode: LiftingMode,
    pub denoise: DenoiseConfig,
    pub motion: MotionConfig,
}

impl LiftingConfig {
    pub fn new(mode: LiftingMode, denoise: DenoiseConfig, motion: MotionConfig) -> Self {
        LiftingConfig {
            mode,
            denoise,
            motion,
        }
    }

    fn dn_active(&self) -> bool {
        self.mode.uses_denoiser() && !self.denoise.is_noop()
    }
}

/// Where a noise estimate was taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DenoiseSite {
    Prediction,
    Update,
}

/// LP/HP subbands and motion of one temporal pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SubbandPair {
    pub lp: Frame,
    pub hp: Frame,
    pub mf: MotionField,
    /// Noise estimates used by the in-loop filters (diagnostic only).
    pub noise: Vec<(DenoiseSite, NoiseEstimate<Real>)>,
}

struct Lifter<'a> {
    cfg: &'a LiftingConfig,
    noise: Vec<(DenoiseSite, NoiseEstimate<Real>)>,
}

impl Lifter<'_> {
    fn dn(&mut self, frame: Frame, site: DenoiseSite) -> Frame {
        if !self.cfg.dn_active() {
            return frame;
        }
        let (out, est) = denoise_self_estimated::<Real>(&frame, &self.cfg.denoise);
        self.noise.push((site, est));
        out
    }

    fn prediction(&mut self, f_odd: &Frame, mf: &MotionField) -> Result<Frame> {
        let warped = warp(f_odd, mf, WarpDirection::Forward)?;
        Ok(if self.cfg.mode.denoised_prediction() {
            self.dn(warped, DenoiseSite::Prediction)
        } else {
            warped
        })
    }

    fn update(&mut self, hp: &Frame, mf: &MotionField) -> Result<Option<Frame>> {
        use LiftingMode::*;
        let u = match self.cfg.mode {
            Truncated => return Ok(None),
            Mctf | HaarPlain | Wldp => warp(hp, mf, WarpDirection::Inverse)?,
            Wldu => {
                let d = self.dn(hp.clone(), DenoiseSite::Update);
                warp(&d, mf, WarpDirection::Inverse)?
            }
            WlduR | Wldpu => {
                let w = warp(hp, mf, WarpDirection::Inverse)?;
                self.dn(w, DenoiseSite::Update)
            }
        };
        Ok(Some(u))
    }
}

#[inline]
fn half_floor(u: Sample) -> Sample {
    u >> 1
}

fn check_pair(a: &Frame, b: &Frame) -> Result<()> {
    a.check_same_dims(b)
}

fn motion_for(cfg: &LiftingConfig, f_odd: &Frame, f_even: &Frame) -> Result<MotionField> {
    cfg.motion.validate()?;
    if cfg.mode == LiftingMode::HaarPlain {
        Ok(MotionField::zero(f_odd.width(), f_odd.height(), cfg.motion.grid_size))
    } else {
        estimate_motion(f_odd, f_even, &cfg.motion)
    }
}

/// Forward lifting of one pair.
pub fn analyze_pair(f_odd: &Frame, f_even: &Frame, cfg: &LiftingConfig) -> Result<SubbandPair> {
    check_pair(f_odd, f_even)?;
    let mf = motion_for(cfg, f_odd, f_even)?;
    analyze_pair_with_motion(f_odd, f_even, mf, cfg)
}

/// Forward lifting of one pair with a caller-supplied motion field.
pub fn analyze_pair_with_motion(
    f_odd: &Frame,
    f_even: &Frame,
    mf: MotionField,
    cfg: &LiftingConfig,
) -> Result<SubbandPair> {
    check_pair(f_odd, f_even)?;
    if !mf.fits(f_odd.width(), f_odd.height()) {
        return Err(Error::dims("motion field does not tile the frames"));
    }
    let mut lifter = Lifter {
        cfg,
        noise: Vec::new(),
    };

    // P is integer valued under integer-pel warping, so ⌊P⌋ = P.
    let pred = lifter.prediction(f_odd, &mf)?;
    let hp = f_even.zip_map(&pred, |e, p| e - p)?;

    let lp = match lifter.update(&hp, &mf)? {
        Some(u) => f_odd.zip_map(&u, |o, u| o + half_floor(u))?,
        None => f_odd.clone(),
    };

    Ok(SubbandPair {
        lp,
        hp,
        mf,
        noise: lifter.noise,
    })
}

/// Inverse lifting of one pair; returns `(f_odd, f_even)`.
pub fn synthesize_pair(sp: &SubbandPair, cfg: &LiftingConfig) -> Result<(Frame, Frame)> {
    check_pair(&sp.lp, &sp.hp)?;
    if !sp.mf.fits(sp.lp.width(), sp.lp.height()) {
        return Err(Error::dims("motion field does not tile the subband frames"));
    }
    let mut lifter = Lifter {
        cfg,
        noise: Vec::new(),
    };
    let f_odd = match lifter.update(&sp.hp, &sp.mf)? {
        Some(u) => sp.lp.zip_map(&u, |l, u| l - half_floor(u))?,
        None => sp.lp.clone(),
    };
    let pred = lifter.prediction(&f_odd, &sp.mf)?;
    let f_even = sp.hp.zip_map(&pred, |h, p| h + p)?;
    Ok((f_odd, f_even))
}

/// Splits a sequence into pairs `(f1, f2), (f3, f4), …` and analyses each.
pub fn analyze_sequence(seq: &Sequence, cfg: &LiftingConfig) -> Result<Vec<SubbandPair>> {
    check_even_length(seq.len())?;
    seq.frames()
        .chunks_exact(2)
        .map(|p| analyze_pair(&p[0], &p[1], cfg))
        .collect()
}

pub fn synthesize_sequence(pairs: &[SubbandPair], cfg: &LiftingConfig, bit_depth: u8) -> Result<Sequence> {
    let mut frames = Vec::with_capacity(pairs.len() * 2);
    for sp in pairs {
        let (odd, even) = synthesize_pair(sp, cfg)?;
        frames.push(odd);
        frames.push(even);
    }
    Sequence::new(frames, bit_depth)
}

pub(crate) fn check_even_length(t: usize) -> Result<()> {
    if t < 2 || !t.is_multiple_of(2) {
        return Err(Error::param(format!(
            "temporal decomposition needs an even number of frames (at least 2), got {t}"
        )));
    }
    Ok(())
}
