//! MSB-first bit stream primitives shared by every coder.

use crate::{Error, Result};

/// Accumulates bits most-significant-first; `finish` zero-pads the last byte.
#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    buf: Vec<u8>,
    /// Total bits written so far.
    len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write_bit(&mut self, bit: bool) {
        let off = self.len & 7;
        if off == 0 {
            self.buf.push(0);
        }
        if bit {
            *self.buf.last_mut().unwrap() |= 0x80 >> off;
        }
        self.len += 1;
    }

    /// Writes the low `width` bits of `value`, most significant first.
    pub fn write_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value < (1u64 << width));
        for i in (0..width).rev() {
            self.write_bit(value >> i & 1 == 1);
        }
    }

    pub fn bit_len(&self) -> usize {
        self.len
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    buf: &'a [u8],
    /// Next bit to read, counted from the start of `buf`.
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        BitReader { buf, pos: 0 }
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let byte = self.pos >> 3;
        if byte >= self.buf.len() {
            return Err(Error::Truncated);
        }
        let bit = self.buf[byte] & (0x80 >> (self.pos & 7)) != 0;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, width: u32) -> Result<u64> {
        debug_assert!(width <= 64);
        let mut v = 0u64;
        for _ in 0..width {
            v = v << 1 | self.read_bit()? as u64;
        }
        Ok(v)
    }

    /// Bits left before the end of the buffer (including any trailing pad).
    pub fn remaining_bits(&self) -> usize {
        self.buf.len() * 8 - self.pos
    }
}
