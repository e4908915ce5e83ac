//! The WLPC container: lifting analysis, spatial 5/3 DWT, Rice coding of the
//! subbands and Exp-Golomb coding of the motion fields, laid out so that the
//! base layer (LP frames plus motion) is a prefix of the stream.
//!
//! ```text
//! offset size  field
//!      0    4  magic "WLPC"
//!      4    1  version (1)
//!      5    2  width            (u16 LE)
//!      7    2  height           (u16 LE)
//!      9    2  frame count T    (u16 LE)
//!     11    1  bit depth
//!     12    1  lifting mode
//!     13    1  denoiser kind
//!     14    2  xi numerator     (u16 LE)
//!     16    2  xi denominator   (u16 LE)
//!     18    1  motion grid size
//!     19    1  motion search range
//!     20    1  spatial DWT levels
//!     21       base layer:        for each pair: [len u32 LE][MV chunk] [len u32 LE][LP chunk]
//!              enhancement layer: for each pair: [len u32 LE][HP chunk]
//! ```
//!
//! Chunks are byte aligned; bits inside a chunk are packed MSB first.

pub mod bits;
pub mod dwt;
pub mod mv;
pub mod rice;

use crate::denoise::{DenoiseConfig, DenoiseKind, Xi};
use crate::error::{Error, Result};
use crate::lifting::{
    analyze_sequence, check_even_length, synthesize_sequence, LiftingConfig, LiftingMode,
    SubbandPair,
};
use crate::motion::{MotionConfig, MotionField};
use crate::volume::Sequence;
use crate::Frame;

use bits::{BitReader, BitWriter};
use dwt::{spatial_dwt_53, DwtDirection};

pub const MAGIC: [u8; 4] = *b"WLPC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 21;
pub const DEFAULT_SPATIAL_LEVELS: u8 = 4;
const CHUNK_PREFIX: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitstreamHeader {
    pub width: u16,
    pub height: u16,
    pub frames: u16,
    pub bit_depth: u8,
    pub mode: LiftingMode,
    pub dn_kind: DenoiseKind,
    pub xi_numerator: u16,
    pub xi_denominator: u16,
    pub grid_size: u8,
    pub search_range: u8,
    pub spatial_levels: u8,
}

impl BitstreamHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(&MAGIC);
        b[4] = VERSION;
        b[5..7].copy_from_slice(&self.width.to_le_bytes());
        b[7..9].copy_from_slice(&self.height.to_le_bytes());
        b[9..11].copy_from_slice(&self.frames.to_le_bytes());
        b[11] = self.bit_depth;
        b[12] = self.mode as u8;
        b[13] = self.dn_kind as u8;
        b[14..16].copy_from_slice(&self.xi_numerator.to_le_bytes());
        b[16..18].copy_from_slice(&self.xi_denominator.to_le_bytes());
        b[18] = self.grid_size;
        b[19] = self.search_range;
        b[20] = self.spatial_levels;
        b
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Truncated {
                offset: bytes.len(),
            });
        }
        let bad = |offset: usize, msg: String| Error::Bitstream { offset, msg };
        if bytes[0..4] != MAGIC {
            let at = (0..4).find(|&i| bytes[i] != MAGIC[i]).unwrap_or(0);
            return Err(bad(at, format!("bad magic {:02X?}", &bytes[0..4])));
        }
        if bytes[4] != VERSION {
            return Err(bad(4, format!("unsupported version {}", bytes[4])));
        }
        let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
        let header = BitstreamHeader {
            width: u16_at(5),
            height: u16_at(7),
            frames: u16_at(9),
            bit_depth: bytes[11],
            mode: LiftingMode::try_from(bytes[12]).map_err(|e| bad(12, e.to_string()))?,
            dn_kind: DenoiseKind::try_from(bytes[13]).map_err(|e| bad(13, e.to_string()))?,
            xi_numerator: u16_at(14),
            xi_denominator: u16_at(16),
            grid_size: bytes[18],
            search_range: bytes[19],
            spatial_levels: bytes[20],
        };
        if header.width == 0 {
            return Err(bad(5, "zero width".into()));
        }
        if header.height == 0 {
            return Err(bad(7, "zero height".into()));
        }
        if header.frames < 2 || !header.frames.is_multiple_of(2) {
            return Err(bad(9, format!("frame count {} is not even", header.frames)));
        }
        if header.bit_depth == 0 || header.bit_depth > 16 {
            return Err(bad(11, format!("bit depth {} not in 1..=16", header.bit_depth)));
        }
        if header.xi_denominator == 0 {
            return Err(bad(16, "zero xi denominator".into()));
        }
        if header.grid_size == 0 {
            return Err(bad(18, "zero motion grid size".into()));
        }
        Ok(header)
    }

    pub fn lifting_config(&self) -> LiftingConfig {
        LiftingConfig {
            mode: self.mode,
            denoise: DenoiseConfig::new(
                self.dn_kind,
                Xi::new(self.xi_numerator, self.xi_denominator),
            ),
            motion: MotionConfig {
                grid_size: self.grid_size as usize,
                search_range: self.search_range as usize,
            },
        }
    }

    pub fn pairs(&self) -> usize {
        self.frames as usize / 2
    }
}

/// Everything needed to encode a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodecConfig {
    pub lifting: LiftingConfig,
    pub spatial_levels: u8,
}

impl CodecConfig {
    pub fn new(mode: LiftingMode, denoise: DenoiseConfig, motion: MotionConfig) -> Self {
        CodecConfig {
            lifting: LiftingConfig::new(mode, denoise, motion),
            spatial_levels: DEFAULT_SPATIAL_LEVELS,
        }
    }

    pub fn header_for(&self, seq: &Sequence) -> Result<BitstreamHeader> {
        let to_u16 = |v: usize, what: &str| {
            u16::try_from(v).map_err(|_| Error::param(format!("{what} {v} exceeds 65535")))
        };
        let to_u8 = |v: usize, what: &str| {
            u8::try_from(v).map_err(|_| Error::param(format!("{what} {v} exceeds 255")))
        };
        let m = &self.lifting.motion;
        m.validate()?;
        Ok(BitstreamHeader {
            width: to_u16(seq.width(), "width")?,
            height: to_u16(seq.height(), "height")?,
            frames: to_u16(seq.len(), "frame count")?,
            bit_depth: seq.bit_depth(),
            mode: self.lifting.mode,
            dn_kind: self.lifting.denoise.kind,
            xi_numerator: *self.lifting.denoise.xi.numer(),
            xi_denominator: *self.lifting.denoise.xi.denom(),
            grid_size: to_u8(m.grid_size, "grid size")?,
            search_range: to_u8(m.search_range, "search range")?,
            spatial_levels: self.spatial_levels,
        })
    }
}

/// Byte counts per stream component; each chunk count includes its 4-byte
/// length prefix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SizeBreakdown {
    pub header_bytes: usize,
    pub lp_bytes: usize,
    pub hp_bytes: usize,
    pub mv_bytes: usize,
}

impl SizeBreakdown {
    pub fn total(&self) -> usize {
        self.header_bytes + self.lp_bytes + self.hp_bytes + self.mv_bytes
    }

    /// Length of the base-layer prefix (header, MV and LP chunks).
    pub fn base_layer_len(&self) -> usize {
        self.header_bytes + self.mv_bytes + self.lp_bytes
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedSequence {
    pub bytes: Vec<u8>,
    pub sizes: SizeBreakdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layers {
    BaseOnly,
    BasePlusEnhancement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoded {
    /// LP frames at half the frame rate.
    Base(Vec<Frame>),
    Full(Sequence),
}

fn encode_subband(frame: &Frame, levels: usize) -> Vec<u8> {
    let coefs = spatial_dwt_53(frame, levels, DwtDirection::Forward);
    let mut w = BitWriter::new();
    rice::encode_plane(&coefs, levels, &mut w);
    w.finish()
}

fn encode_mv(mf: &MotionField) -> Vec<u8> {
    let mut w = BitWriter::new();
    mv::encode_motion_field(mf, &mut w);
    w.finish()
}

fn push_chunk(out: &mut Vec<u8>, chunk: &[u8]) -> Result<usize> {
    let len = u32::try_from(chunk.len()).map_err(|_| Error::param("chunk exceeds 4 GiB"))?;
    out.extend_from_slice(&len.to_le_bytes());
    out.extend_from_slice(chunk);
    Ok(CHUNK_PREFIX + chunk.len())
}

/// Packs already analysed subband pairs behind `header`.
pub fn encode_subbands(header: &BitstreamHeader, pairs: &[SubbandPair]) -> Result<EncodedSequence> {
    if pairs.len() != header.pairs() {
        return Err(Error::param(format!(
            "{} pairs for a {}-frame header",
            pairs.len(),
            header.frames
        )));
    }
    let levels = header.spatial_levels as usize;
    let mut bytes = header.to_bytes().to_vec();
    let mut sizes = SizeBreakdown {
        header_bytes: HEADER_LEN,
        ..Default::default()
    };
    for sp in pairs {
        sizes.mv_bytes += push_chunk(&mut bytes, &encode_mv(&sp.mf))?;
        sizes.lp_bytes += push_chunk(&mut bytes, &encode_subband(&sp.lp, levels))?;
    }
    for sp in pairs {
        sizes.hp_bytes += push_chunk(&mut bytes, &encode_subband(&sp.hp, levels))?;
    }
    debug_assert_eq!(sizes.total(), bytes.len());
    Ok(EncodedSequence { bytes, sizes })
}

/// Full pipeline: lifting analysis, spatial DWT, entropy coding, container.
pub fn encode_sequence(seq: &Sequence, cfg: &CodecConfig) -> Result<EncodedSequence> {
    check_even_length(seq.len())?;
    let header = cfg.header_for(seq)?;
    let pairs = analyze_sequence(seq, &cfg.lifting)?;
    encode_subbands(&header, &pairs)
}

struct ChunkCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ChunkCursor<'a> {
    fn next_chunk(&mut self) -> Result<(usize, &'a [u8])> {
        let start = self.pos;
        let Some(prefix) = self.bytes.get(start..start + CHUNK_PREFIX) else {
            return Err(Error::Truncated {
                offset: self.bytes.len(),
            });
        };
        let len = u32::from_le_bytes(prefix.try_into().unwrap()) as usize;
        let body = start + CHUNK_PREFIX;
        let Some(chunk) = self.bytes.get(body..body + len) else {
            return Err(Error::Truncated {
                offset: self.bytes.len(),
            });
        };
        self.pos = body + len;
        Ok((body, chunk))
    }
}

fn decode_subband(chunk: &[u8], offset: usize, header: &BitstreamHeader) -> Result<Frame> {
    let mut r = BitReader::new(chunk, offset);
    let coefs = rice::decode_plane(
        &mut r,
        header.width as usize,
        header.height as usize,
        header.spatial_levels as usize,
    )?;
    Ok(spatial_dwt_53(
        &coefs,
        header.spatial_levels as usize,
        DwtDirection::Inverse,
    ))
}

/// Decodes a WLPC stream. `Layers::BaseOnly` reads only the header and the
/// base-layer chunks, so it succeeds on a stream cut after its base layer.
pub fn decode_sequence(bytes: &[u8], layers: Layers) -> Result<Decoded> {
    let header = BitstreamHeader::parse(bytes)?;
    let (w, h) = (header.width as usize, header.height as usize);
    let mut cursor = ChunkCursor {
        bytes,
        pos: HEADER_LEN,
    };
    let mut fields = Vec::with_capacity(header.pairs());
    let mut lps = Vec::with_capacity(header.pairs());
    for _ in 0..header.pairs() {
        let (off, chunk) = cursor.next_chunk()?;
        let mut r = BitReader::new(chunk, off);
        fields.push(mv::decode_motion_field(
            &mut r,
            w,
            h,
            header.grid_size as usize,
        )?);
        let (off, chunk) = cursor.next_chunk()?;
        lps.push(decode_subband(chunk, off, &header)?);
    }
    if layers == Layers::BaseOnly {
        return Ok(Decoded::Base(lps));
    }
    let mut pairs = Vec::with_capacity(header.pairs());
    for (lp, mf) in lps.into_iter().zip(fields) {
        let (off, chunk) = cursor.next_chunk()?;
        let hp = decode_subband(chunk, off, &header)?;
        pairs.push(SubbandPair {
            lp,
            hp,
            mf,
            noise: Vec::new(),
        });
    }
    if cursor.pos != bytes.len() {
        return Err(Error::Bitstream {
            offset: cursor.pos,
            msg: format!("{} trailing bytes", bytes.len() - cursor.pos),
        });
    }
    let seq = synthesize_sequence(&pairs, &header.lifting_config(), header.bit_depth)?;
    Ok(Decoded::Full(seq))
}
