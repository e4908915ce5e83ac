//! Lossless, temporally scalable coding of 12-bit grayscale frame sequences.
//!
//! A sequence is split into frame pairs and transformed with one level of
//! motion-compensated Haar lifting. Denoising filters can be placed inside the
//! prediction and/or update step ([`LiftingMode`]); because each filter only
//! sees signals the decoder can rebuild, reconstruction stays bit-exact. The
//! LP frames form a base layer decodable on its own at half the frame rate,
//! the HP frames an enhancement layer that restores the input exactly.
//!
//! ```text
//! Sequence ─► lifting ─► (LP, HP, MV) ─► 5/3 DWT ─► Rice / Exp-Golomb ─► WLPC
//! ```
//!
//! Integer stages operate on [`Sample`]; floating-point stages (denoisers,
//! metrics) are generic over [`scalar::Real`], and the codec instantiates them
//! with [`Real`].

pub mod codec;
pub mod denoise;
pub mod error;
pub mod lifting;
pub mod metrics;
pub mod motion;
pub mod plane;
pub mod rng;
pub mod scalar;
pub mod volume;

pub use codec::{
    decode_sequence, encode_sequence, encode_subbands, BitstreamHeader, CodecConfig, Decoded,
    EncodedSequence, Layers, SizeBreakdown,
};
pub use denoise::{denoise, estimate_noise_variance, DenoiseConfig, DenoiseKind, Xi};
pub use error::{Error, Result};
pub use lifting::{
    analyze_pair, analyze_sequence, synthesize_pair, synthesize_sequence, LiftingConfig,
    LiftingMode, SubbandPair,
};
pub use motion::{estimate_motion, warp, MotionConfig, MotionField, MotionVector, WarpDirection};
pub use plane::Plane;
pub use volume::{load_raw, save_raw, synthesize_phantom, PhantomSpec, Sequence};

/// Integer sample workspace shared by input frames and subbands.
pub type Sample = i32;

/// Scalar used by the codec's floating-point stages.
pub type Real = f64;

pub type Frame = Plane<Sample>;
pub type RealPlane = Plane<Real>;
pub type NoiseEstimate = denoise::NoiseEstimate<Real>;
pub type Psnr = metrics::Psnr<Real>;
pub type QualityReport = metrics::QualityReport<Real>;
pub type CompressionReport = metrics::CompressionReport<Real>;
