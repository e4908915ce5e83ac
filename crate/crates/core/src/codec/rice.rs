//! Per-subband adaptive Rice coding of transform coefficients.
//!
//! Each subband is zigzag-mapped to unsigned values; the Rice parameter
//! `k ∈ [0, 24]` with the smallest exact coded length (ties to the smaller
//! `k`) is written in 5 bits, followed by one Rice codeword per coefficient in
//! raster order: `u >> k` as unary (ones, then a zero) and the low `k` bits.

use super::bits::{BitReader, BitWriter};
use super::dwt::{subband_rects, SubbandRect};
use crate::error::{Error, Result};
use crate::Frame;

pub const MAX_RICE_K: u32 = 24;
const K_BITS: u32 = 5;

#[inline]
pub fn zigzag(v: i32) -> u32 {
    ((v << 1) ^ (v >> 31)) as u32
}

#[inline]
pub fn unzigzag(u: u32) -> i32 {
    ((u >> 1) as i32) ^ -((u & 1) as i32)
}

/// Bits needed for `u` with parameter `k`.
#[inline]
pub fn rice_len(u: u32, k: u32) -> u64 {
    (u as u64 >> k) + 1 + k as u64
}

/// Parameter with the smallest total length over `values`, and that length.
pub fn best_rice_k(values: &[u32]) -> (u32, u64) {
    (0..=MAX_RICE_K)
        .map(|k| (k, values.iter().map(|&u| rice_len(u, k)).sum::<u64>()))
        .min_by_key(|&(k, len)| (len, k))
        .expect("non-empty k range")
}

fn band_values(coefs: &Frame, r: &SubbandRect) -> Vec<u32> {
    let mut v = Vec::with_capacity(r.len());
    for y in r.y0..r.y0 + r.height {
        v.extend(coefs.row(y)[r.x0..r.x0 + r.width].iter().map(|&c| zigzag(c)));
    }
    v
}

/// Codes every subband of a `levels`-deep coefficient plane.
pub fn encode_plane(coefs: &Frame, levels: usize, out: &mut BitWriter) {
    for rect in subband_rects(coefs.width(), coefs.height(), levels) {
        let values = band_values(coefs, &rect);
        let (k, _) = best_rice_k(&values);
        out.put_bits(k as u64, K_BITS);
        for u in values {
            out.put_unary(u as u64 >> k);
            out.put_bits(u as u64, k);
        }
    }
}

pub fn decode_plane(
    input: &mut BitReader<'_>,
    width: usize,
    height: usize,
    levels: usize,
) -> Result<Frame> {
    let mut plane = Frame::filled(width, height, 0);
    for rect in subband_rects(width, height, levels) {
        let k = input.get_bits(K_BITS)? as u32;
        if k > MAX_RICE_K {
            return Err(Error::Bitstream {
                offset: input.byte_offset(),
                msg: format!("Rice parameter {k} exceeds {MAX_RICE_K}"),
            });
        }
        let limit = u32::MAX as u64 >> k;
        for y in rect.y0..rect.y0 + rect.height {
            for x in rect.x0..rect.x0 + rect.width {
                let q = input.get_unary(limit)?;
                let u = (q << k) | input.get_bits(k)?;
                plane.set(x, y, unzigzag(u as u32));
            }
        }
    }
    Ok(plane)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zigzag_mapping() {
        assert_eq!(zigzag(0), 0);
        assert_eq!(zigzag(-1), 1);
        assert_eq!(zigzag(1), 2);
        assert_eq!(zigzag(-3), 5);
        assert_eq!(zigzag(3), 6);
        assert_eq!(zigzag(i32::MIN), u32::MAX);
        for v in [-70000, -2, 0, 5, 123456, i32::MAX, i32::MIN] {
            assert_eq!(unzigzag(zigzag(v)), v);
        }
    }

    #[test]
    fn zero_plane_costs_one_bit_per_sample() {
        let f = Frame::filled(16, 16, 0);
        let mut w = BitWriter::new();
        encode_plane(&f, 0, &mut w);
        assert_eq!(w.bit_len(), 5 + 256);
        let bytes = w.finish();
        assert!(bytes.iter().all(|&b| b == 0));
        let mut r = BitReader::new(&bytes, 0);
        assert_eq!(decode_plane(&mut r, 16, 16, 0).unwrap(), f);
    }

    #[test]
    fn best_k_is_exhaustive_minimum() {
        let values = [0u32, 3, 17, 4, 9, 2, 1, 40, 5];
        let (k, len) = best_rice_k(&values);
        for kk in 0..=MAX_RICE_K {
            let l: u64 = values.iter().map(|&u| rice_len(u, kk)).sum();
            assert!(len <= l);
        }
        let lk: u64 = values.iter().map(|&u| rice_len(u, k)).sum();
        assert_eq!(len, lk);
    }

    #[test]
    fn truncated_plane_fails() {
        let f = Frame::from_fn(8, 8, |x, y| (x as i32 - 4) * (y as i32 + 1));
        let mut w = BitWriter::new();
        encode_plane(&f, 2, &mut w);
        let bytes = w.finish();
        let mut r = BitReader::new(&bytes[..bytes.len() / 2], 0);
        assert!(decode_plane(&mut r, 8, 8, 2).is_err());
    }
}
