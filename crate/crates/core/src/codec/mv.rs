//! Motion field coding: per-block vectors in raster order, each coded as the
//! difference to its left neighbour (first column: the block above; first
//! block: zero). Both components are zigzag-mapped and written as order-0
//! Exp-Golomb codes, `dx` first.

use super::bits::{BitReader, BitWriter};
use crate::error::{Error, Result};
use crate::motion::{MotionField, MotionVector};

#[inline]
fn zigzag64(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

#[inline]
fn unzigzag64(u: u64) -> i64 {
    ((u >> 1) as i64) ^ -((u & 1) as i64)
}

pub fn put_exp_golomb(out: &mut BitWriter, u: u64) {
    let v = u as u128 + 1;
    let nbits = 128 - v.leading_zeros();
    for _ in 0..nbits - 1 {
        out.put_bit(false);
    }
    for i in (0..nbits).rev() {
        out.put_bit((v >> i) & 1 == 1);
    }
}

pub fn get_exp_golomb(input: &mut BitReader<'_>) -> Result<u64> {
    let mut zeros = 0u32;
    while !input.get_bit()? {
        zeros += 1;
        if zeros > 63 {
            return Err(Error::Bitstream {
                offset: input.byte_offset(),
                msg: "Exp-Golomb prefix longer than 63 bits".into(),
            });
        }
    }
    let rest = input.get_bits(zeros)?;
    Ok(((1u64 << zeros) | rest) - 1)
}

fn predictor(mf: &MotionField, bx: usize, by: usize) -> MotionVector {
    if bx > 0 {
        mf.vector(bx - 1, by)
    } else if by > 0 {
        mf.vector(0, by - 1)
    } else {
        MotionVector::ZERO
    }
}

pub fn encode_motion_field(mf: &MotionField, out: &mut BitWriter) {
    for by in 0..mf.blocks_y() {
        for bx in 0..mf.blocks_x() {
            let v = mf.vector(bx, by);
            let p = predictor(mf, bx, by);
            put_exp_golomb(out, zigzag64(v.dx as i64 - p.dx as i64));
            put_exp_golomb(out, zigzag64(v.dy as i64 - p.dy as i64));
        }
    }
}

pub fn decode_motion_field(
    input: &mut BitReader<'_>,
    width: usize,
    height: usize,
    grid_size: usize,
) -> Result<MotionField> {
    let mut mf = MotionField::zero(width, height, grid_size);
    for by in 0..mf.blocks_y() {
        for bx in 0..mf.blocks_x() {
            let p = predictor(&mf, bx, by);
            let dx = p.dx as i64 + unzigzag64(get_exp_golomb(input)?);
            let dy = p.dy as i64 + unzigzag64(get_exp_golomb(input)?);
            let (Ok(dx), Ok(dy)) = (i32::try_from(dx), i32::try_from(dy)) else {
                return Err(Error::Bitstream {
                    offset: input.byte_offset(),
                    msg: format!("motion vector ({dx}, {dy}) out of range"),
                });
            };
            mf.set_vector(bx, by, MotionVector::new(dx, dy));
        }
    }
    Ok(mf)
}
