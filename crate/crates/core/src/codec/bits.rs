//! MSB-first bit packing for byte-aligned chunks.

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    acc: u8,
    used: u8,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn put_bit(&mut self, bit: bool) {
        self.acc = (self.acc << 1) | bit as u8;
        self.used += 1;
        if self.used == 8 {
            self.bytes.push(self.acc);
            self.acc = 0;
            self.used = 0;
        }
    }

    /// Writes the low `n` bits of `value`, most significant first.
    pub fn put_bits(&mut self, value: u64, n: u32) {
        debug_assert!(n <= 64);
        for i in (0..n).rev() {
            self.put_bit((value >> i) & 1 == 1);
        }
    }

    /// `q` one-bits followed by a zero.
    pub fn put_unary(&mut self, q: u64) {
        for _ in 0..q {
            self.put_bit(true);
        }
        self.put_bit(false);
    }

    pub fn bit_len(&self) -> u64 {
        self.bytes.len() as u64 * 8 + self.used as u64
    }

    /// Pads the final byte with zero bits.
    pub fn finish(mut self) -> Vec<u8> {
        if self.used > 0 {
            self.bytes.push(self.acc << (8 - self.used));
        }
        self.bytes
    }
}

#[derive(Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: u64,
    /// Offset of `bytes` inside the enclosing stream, for error messages.
    base: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8], base: usize) -> Self {
        BitReader { bytes, pos: 0, base }
    }

    fn truncated(&self) -> Error {
        Error::Truncated {
            offset: self.base + self.bytes.len(),
        }
    }

    #[inline]
    pub fn get_bit(&mut self) -> Result<bool> {
        let byte = (self.pos / 8) as usize;
        let Some(&b) = self.bytes.get(byte) else {
            return Err(self.truncated());
        };
        let bit = (b >> (7 - (self.pos % 8))) & 1 == 1;
        self.pos += 1;
        Ok(bit)
    }

    pub fn get_bits(&mut self, n: u32) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..n {
            v = (v << 1) | self.get_bit()? as u64;
        }
        Ok(v)
    }

    /// Counts one-bits up to the terminating zero. Fails if the count exceeds
    /// `limit`.
    pub fn get_unary(&mut self, limit: u64) -> Result<u64> {
        let mut q = 0u64;
        while self.get_bit()? {
            q += 1;
            if q > limit {
                return Err(Error::Bitstream {
                    offset: self.byte_offset(),
                    msg: format!("unary run exceeds {limit}"),
                });
            }
        }
        Ok(q)
    }

    pub fn byte_offset(&self) -> usize {
        self.base + (self.pos / 8) as usize
    }
}
