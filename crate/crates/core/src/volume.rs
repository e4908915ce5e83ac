//! Frame sequences, raw file I/O and synthetic phantoms.
//!
//! Raw files are headerless: frames stored back to back, each frame in
//! row-major order, every sample a little-endian `u16`. Dimensions and frame
//! count travel out of band.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::XorShift64Star;
use crate::scalar::round_to_sample;
use crate::{Frame, Sample};

pub const DEFAULT_BIT_DEPTH: u8 = 12;
pub const TEXTURE_LAYOUT_SEED: u64 = 0x5eed;

/// An ordered run of equally sized frames at one slice position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    frames: Vec<Frame>,
    bit_depth: u8,
}

impl Sequence {
    /// Builds a sequence, checking that all frames share dimensions and that
    /// every sample fits `bit_depth` unsigned bits.
    pub fn new(frames: Vec<Frame>, bit_depth: u8) -> Result<Self> {
        if bit_depth == 0 || bit_depth > 16 {
            return Err(Error::param(format!("bit depth {bit_depth} not in 1..=16")));
        }
        if let Some(first) = frames.first() {
            for (i, f) in frames.iter().enumerate() {
                if !f.same_dims(first) {
                    return Err(Error::dims(format!(
                        "frame {i} is {}x{}, frame 0 is {}x{}",
                        f.width(),
                        f.height(),
                        first.width(),
                        first.height()
                    )));
                }
            }
        }
        let max = max_sample(bit_depth);
        for (frame, f) in frames.iter().enumerate() {
            if let Some(index) = f.samples().iter().position(|&s| s < 0 || s > max) {
                return Err(Error::Range {
                    frame,
                    index,
                    value: f.samples()[index] as i64,
                    bit_depth,
                });
            }
        }
        Ok(Sequence { frames, bit_depth })
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<Frame> {
        self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    pub fn width(&self) -> usize {
        self.frames.first().map_or(0, |f| f.width())
    }

    pub fn height(&self) -> usize {
        self.frames.first().map_or(0, |f| f.height())
    }

    pub fn max_value(&self) -> Sample {
        max_sample(self.bit_depth)
    }
}

#[inline]
pub fn max_sample(bit_depth: u8) -> Sample {
    (1 << bit_depth) - 1
}

pub fn decode_raw(
    bytes: &[u8],
    width: usize,
    height: usize,
    frame_count: usize,
    bit_depth: u8,
) -> Result<Sequence> {
    let frame_len = width * height;
    let expected = frame_len * frame_count * 2;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "raw data is {} bytes, expected {expected} for {frame_count} frames of {width}x{height}",
            bytes.len()
        )));
    }
    let max = max_sample(bit_depth.min(16));
    let mut frames = Vec::with_capacity(frame_count);
    for (t, chunk) in bytes.chunks_exact(frame_len * 2).enumerate() {
        let mut samples = Vec::with_capacity(frame_len);
        for (i, pair) in chunk.chunks_exact(2).enumerate() {
            let v = u16::from_le_bytes([pair[0], pair[1]]) as Sample;
            if v > max {
                return Err(Error::Range {
                    frame: t,
                    index: i,
                    value: v as i64,
                    bit_depth,
                });
            }
            samples.push(v);
        }
        frames.push(Frame::new(width, height, samples)?);
    }
    Sequence::new(frames, bit_depth)
}

pub fn encode_raw(seq: &Sequence) -> Vec<u8> {
    let mut out = Vec::with_capacity(seq.len() * seq.width() * seq.height() * 2);
    for f in seq.frames() {
        for &s in f.samples() {
            out.extend_from_slice(&(s as u16).to_le_bytes());
        }
    }
    out
}

pub fn load_raw(
    path: impl AsRef<Path>,
    width: usize,
    height: usize,
    frame_count: usize,
    bit_depth: u8,
) -> Result<Sequence> {
    let bytes = fs::read(path)?;
    decode_raw(&bytes, width, height, frame_count, bit_depth)
}

pub fn save_raw(seq: &Sequence, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_raw(seq))?;
    Ok(())
}

/// Writes one frame as a binary 16-bit PGM (`P5`, big-endian samples).
/// Samples outside `[0, 2^bit_depth - 1]` are clamped.
pub fn write_pgm(frame: &Frame, bit_depth: u8, path: impl AsRef<Path>) -> Result<()> {
    let max = max_sample(bit_depth);
    let mut out = Vec::with_capacity(frame.len() * 2 + 32);
    write!(out, "P5\n{} {}\n{}\n", frame.width(), frame.height(), max)?;
    for &s in frame.samples() {
        out.extend_from_slice(&(s.clamp(0, max) as u16).to_be_bytes());
    }
    fs::write(path, out)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Disk { cx: i64, cy: i64, radius: i64 },
    Rect { x: i64, y: i64, width: i64, height: i64 },
}

impl Shape {
    /// Inclusive bounding box `(x0, y0, x1, y1)` after translating by `(dx, dy)`.
    fn bounds(&self, dx: i64, dy: i64) -> (i64, i64, i64, i64) {
        match *self {
            Shape::Disk { cx, cy, radius } => (
                cx - radius + dx,
                cy - radius + dy,
                cx + radius + dx,
                cy + radius + dy,
            ),
            Shape::Rect {
                x,
                y,
                width,
                height,
            } => (x + dx, y + dy, x + width - 1 + dx, y + height - 1 + dy),
        }
    }

    fn contains(&self, px: i64, py: i64) -> bool {
        match *self {
            Shape::Disk { cx, cy, radius } => {
                let (ex, ey) = (px - cx, py - cy);
                ex * ex + ey * ey <= radius * radius
            }
            Shape::Rect {
                x,
                y,
                width,
                height,
            } => px >= x && px < x + width && py >= y && py < y + height,
        }
    }
}

/// A shape with an additive intensity that moves by `velocity` pixels per
/// frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhantomObject {
    pub shape: Shape,
    pub intensity: i64,
    pub velocity: (i64, i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhantomSpec {
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    pub bit_depth: u8,
    pub background: i64,
    pub objects: Vec<PhantomObject>,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl PhantomSpec {
    /// The default "beating heart" stand-in: a static body with a bright
    /// chamber moving horizontally and a second structure moving
    /// vertically, each at `speed` pixels per frame.
    pub fn moving_heart(width: usize, height: usize, frames: usize, speed: i64) -> Self {
        let (w, h) = (width as i64, height as i64);
        let travel = speed * (frames as i64 - 1).max(0);
        PhantomSpec {
            width,
            height,
            frames,
            bit_depth: DEFAULT_BIT_DEPTH,
            background: 1024,
            objects: vec![
                PhantomObject {
                    shape: Shape::Rect {
                        x: w / 8,
                        y: h / 8,
                        width: w - w / 4,
                        height: h - h / 4,
                    },
                    intensity: 400,
                    velocity: (0, 0),
                },
                PhantomObject {
                    shape: Shape::Disk {
                        cx: (w - travel) / 2,
                        cy: h / 3,
                        radius: h / 8,
                    },
                    intensity: 1200,
                    velocity: (speed, 0),
                },
                PhantomObject {
                    shape: Shape::Disk {
                        cx: 2 * w / 3,
                        cy: (h - travel) / 2,
                        radius: h / 10,
                    },
                    intensity: -300,
                    velocity: (0, speed),
                },
            ],
            noise_sigma: 0.0,
            seed: 0,
        }
    }

    /// Low-contrast textured anatomy: static speckle (small disks of ±100..200
    /// gray levels, about one per 68 pixels) and a textured chamber of +100
    /// moving horizontally at `speed` pixels per frame. The speckle layout is
    /// fixed (drawn from [`TEXTURE_LAYOUT_SEED`]); only the noise depends on
    /// the seed given to [`PhantomSpec::with_noise`].
    ///
    /// Needs at least 32×32 pixels and `speed * (frames - 1) <= width / 3`.
    pub fn textured_heart(width: usize, height: usize, frames: usize, speed: i64) -> Self {
        let (w, h) = (width as i64, height as i64);
        let travel = speed * (frames as i64 - 1).max(0);
        let mut rng = XorShift64Star::new(TEXTURE_LAYOUT_SEED);
        let mut pick = |n: i64| (rng.next_u64() % n.max(1) as u64) as i64;
        let mut objects = Vec::new();
        for _ in 0..(w * h / 68) {
            let r = 1 + pick(4);
            let sign = if pick(2) == 0 { -1 } else { 1 };
            let shape = Shape::Disk {
                cx: r + pick(w - 2 * r),
                cy: r + pick(h - 2 * r),
                radius: r,
            };
            objects.push(PhantomObject {
                shape,
                intensity: sign * (100 + pick(101)),
                velocity: (0, 0),
            });
        }
        let radius = h.min(w) / 5;
        let (cx, cy) = ((w - travel) / 2, h / 2);
        objects.push(PhantomObject {
            shape: Shape::Disk { cx, cy, radius },
            intensity: 100,
            velocity: (speed, 0),
        });
        let spread = radius * 2 / 3;
        for _ in 0..12 {
            let shape = Shape::Disk {
                cx: cx + pick(2 * spread + 1) - spread,
                cy: cy + pick(2 * spread + 1) - spread,
                radius: 1 + pick(3),
            };
            objects.push(PhantomObject {
                shape,
                intensity: if pick(2) == 0 { -50 } else { 50 },
                velocity: (speed, 0),
            });
        }
        PhantomSpec {
            width,
            height,
            frames,
            bit_depth: DEFAULT_BIT_DEPTH,
            background: 1024,
            objects,
            noise_sigma: 0.0,
            seed: 0,
        }
    }

    pub fn with_noise(mut self, sigma: f64, seed: u64) -> Self {
        self.noise_sigma = sigma;
        self.seed = seed;
        self
    }
}

/// Renders a phantom sequence.
///
/// Frame `t` is `clamp(background + Σ objects shifted by t·velocity + noise)`
/// with i.i.d. Gaussian noise drawn in frame-major raster order from
/// [`XorShift64Star`] seeded with `spec.seed`. The noisy value is rounded half
/// away from zero before clamping.
pub fn synthesize_phantom(spec: &PhantomSpec) -> Result<Sequence> {
    if !spec.noise_sigma.is_finite() || spec.noise_sigma < 0.0 {
        return Err(Error::param(format!(
            "noise sigma {} must be finite and non-negative",
            spec.noise_sigma
        )));
    }
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::param("phantom dimensions must be non-zero"));
    }
    let (w, h) = (spec.width as i64, spec.height as i64);
    for (i, obj) in spec.objects.iter().enumerate() {
        for t in 0..spec.frames as i64 {
            let (x0, y0, x1, y1) = obj.shape.bounds(obj.velocity.0 * t, obj.velocity.1 * t);
            if x0 < 0 || y0 < 0 || x1 >= w || y1 >= h {
                return Err(Error::param(format!(
                    "object {i} leaves the {w}x{h} frame at t={t}"
                )));
            }
        }
    }

    let max = max_sample(spec.bit_depth) as i64;
    let mut rng = XorShift64Star::new(spec.seed);
    let mut frames = Vec::with_capacity(spec.frames);
    for t in 0..spec.frames as i64 {
        let mut samples = Vec::with_capacity(spec.width * spec.height);
        for y in 0..h {
            for x in 0..w {
                let mut v = spec.background;
                for obj in &spec.objects {
                    if obj.shape.contains(x - obj.velocity.0 * t, y - obj.velocity.1 * t) {
                        v += obj.intensity;
                    }
                }
                let v = if spec.noise_sigma > 0.0 {
                    round_to_sample(v as f64 + spec.noise_sigma * rng.next_normal()) as i64
                } else {
                    v
                };
                samples.push(v.clamp(0, max) as Sample);
            }
        }
        frames.push(Frame::new(spec.width, spec.height, samples)?);
    }
    Sequence::new(frames, spec.bit_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(w: usize, h: usize, s: &[Sample]) -> Frame {
        Frame::new(w, h, s.to_vec()).unwrap()
    }

    #[test]
    fn decode_known_bytes() {
        let bytes = [
            0x00, 0x00, 0x01, 0x00, 0xFF, 0x0F, 0x00, 0x00, // frame 0
            0x02, 0x00, 0x03, 0x00, 0x04, 0x00, 0x05, 0x00, // frame 1
        ];
        let seq = decode_raw(&bytes, 2, 2, 2, 12).unwrap();
        assert_eq!(seq.frames()[0], frame(2, 2, &[0, 1, 4095, 0]));
        assert_eq!(seq.frames()[1], frame(2, 2, &[2, 3, 4, 5]));
    }

    #[test]
    fn encode_known_frame() {
        let seq = Sequence::new(vec![frame(2, 2, &[0, 1, 4095, 0])], 12).unwrap();
        assert_eq!(
            encode_raw(&seq),
            vec![0x00, 0x00, 0x01, 0x00, 0xFF, 0x0F, 0x00, 0x00]
        );
    }

    #[test]
    fn out_of_range_names_frame() {
        let mut bytes = vec![0u8; 16];
        bytes[12] = 0x00;
        bytes[13] = 0x10; // 4096 in frame 1
        match decode_raw(&bytes, 2, 2, 2, 12) {
            Err(Error::Range { frame, value, .. }) => {
                assert_eq!(frame, 1);
                assert_eq!(value, 4096);
            }
            other => panic!("expected range error, got {other:?}"),
        }
    }

    #[test]
    fn size_mismatch_is_format_error() {
        assert!(matches!(
            decode_raw(&[0u8; 15], 2, 2, 2, 12),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn static_noiseless_phantom_is_constant_in_time() {
        let spec = PhantomSpec {
            width: 32,
            height: 32,
            frames: 4,
            bit_depth: 12,
            background: 100,
            objects: vec![PhantomObject {
                shape: Shape::Disk {
                    cx: 16,
                    cy: 16,
                    radius: 5,
                },
                intensity: 900,
                velocity: (0, 0),
            }],
            noise_sigma: 0.0,
            seed: 1,
        };
        let seq = synthesize_phantom(&spec).unwrap();
        for f in seq.frames() {
            assert_eq!(f, &seq.frames()[0]);
        }
        assert_eq!(seq.frames()[0].get(16, 16), 1000);
        assert_eq!(seq.frames()[0].get(0, 0), 100);
    }

    #[test]
    fn moving_disk_is_pure_translation() {
        let spec = PhantomSpec {
            width: 40,
            height: 24,
            frames: 6,
            bit_depth: 12,
            background: 500,
            objects: vec![PhantomObject {
                shape: Shape::Disk {
                    cx: 10,
                    cy: 12,
                    radius: 6,
                },
                intensity: 1500,
                velocity: (1, 0),
            }],
            noise_sigma: 0.0,
            seed: 0,
        };
        let seq = synthesize_phantom(&spec).unwrap();
        let f0 = &seq.frames()[0];
        for (t, f) in seq.frames().iter().enumerate() {
            for y in 0..24 {
                for x in 0..40 {
                    let expect = if x >= t { f0.get(x - t, y) } else { 500 };
                    assert_eq!(f.get(x, y), expect, "t={t} ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn object_leaving_frame_is_rejected() {
        let mut spec = PhantomSpec::moving_heart(32, 32, 4, 2);
        spec.objects[1].velocity = (20, 0);
        assert!(matches!(
            synthesize_phantom(&spec),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn noise_variance_matches_sigma() {
        let spec = PhantomSpec {
            width: 128,
            height: 128,
            frames: 1,
            bit_depth: 12,
            background: 2048,
            objects: vec![],
            noise_sigma: 10.0,
            seed: 99,
        };
        let seq = synthesize_phantom(&spec).unwrap();
        let s = seq.frames()[0].samples();
        let n = s.len() as f64;
        let mean = s.iter().map(|&v| v as f64).sum::<f64>() / n;
        let var = s.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
        assert!((var - 100.0).abs() <= 10.0, "variance {var}");
    }

    #[test]
    fn phantom_is_reproducible() {
        let spec = PhantomSpec::moving_heart(64, 64, 4, 2).with_noise(5.0, 17);
        assert_eq!(
            synthesize_phantom(&spec).unwrap(),
            synthesize_phantom(&spec).unwrap()
        );
        let other = PhantomSpec::moving_heart(64, 64, 4, 2).with_noise(5.0, 18);
        assert_ne!(
            synthesize_phantom(&spec).unwrap(),
            synthesize_phantom(&other).unwrap()
        );
    }

    #[test]
    fn heart_preset_fits_ten_frames() {
        let seq = synthesize_phantom(&PhantomSpec::moving_heart(64, 64, 10, 2)).unwrap();
        assert_eq!(seq.len(), 10);
    }

    #[test]
    fn textured_preset_fits_and_has_fixed_layout() {
        let a = PhantomSpec::textured_heart(64, 64, 10, 2);
        let b = PhantomSpec::textured_heart(64, 64, 10, 2).with_noise(10.0, 3);
        assert_eq!(a.objects, b.objects);
        assert_eq!(a.objects.len(), 64 * 64 / 68 + 13);
        assert_eq!(synthesize_phantom(&b).unwrap().len(), 10);
        assert!(synthesize_phantom(&PhantomSpec::textured_heart(32, 32, 6, 2)).is_ok());
    }

    #[test]
    fn pgm_header_and_samples() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.pgm");
        write_pgm(&frame(2, 1, &[1, 5000]), 12, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let header = b"P5\n2 1\n4095\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(&bytes[header.len()..], &[0x00, 0x01, 0x0F, 0xFF]);
    }
}
