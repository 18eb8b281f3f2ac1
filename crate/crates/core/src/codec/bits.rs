//! Big-endian bit packing: the first bit written is the most significant bit of byte 0.

use super::CodecError;
use num_bigint::BigUint;

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bits: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_bit(&mut self, bit: bool) {
        let offset = (self.bits % 8) as u32;
        if offset == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("byte pushed above") |= 0x80 >> offset;
        }
        self.bits += 1;
    }

    /// Writes the low `width` bits of `value`, most significant first.
    pub fn write(&mut self, value: u64, width: u32) {
        debug_assert!(
            width == 64 || value >> width == 0,
            "{value} does not fit in {width} bits"
        );
        for i in (0..width).rev() {
            self.push_bit((value >> i) & 1 == 1);
        }
    }

    pub fn write_big(&mut self, value: &BigUint, width: u64) {
        debug_assert!(value.bits() <= width);
        for i in (0..width).rev() {
            self.push_bit(value.bit(i));
        }
    }

    pub fn bit_len(&self) -> u64 {
        self.bits
    }

    /// Zero-pads to a byte boundary.
    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    pub fn remaining(&self) -> u64 {
        self.bytes.len() as u64 * 8 - self.pos
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn read_bit(&mut self) -> Result<bool, CodecError> {
        if self.pos >= self.bytes.len() as u64 * 8 {
            return Err(CodecError::CorruptStream("truncated bit stream".into()));
        }
        let byte = self.bytes[(self.pos / 8) as usize];
        let bit = byte & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read(&mut self, width: u32) -> Result<u64, CodecError> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | u64::from(self.read_bit()?);
        }
        Ok(v)
    }

    pub fn read_big(&mut self, width: u64) -> Result<BigUint, CodecError> {
        if width > self.remaining() {
            return Err(CodecError::CorruptStream("truncated bit stream".into()));
        }
        let mut v = BigUint::default();
        for _ in 0..width {
            v <<= 1u8;
            if self.read_bit()? {
                v |= BigUint::from(1u8);
            }
        }
        Ok(v)
    }

    /// Accepts only zero padding shorter than a byte.
    pub fn expect_end(&mut self) -> Result<(), CodecError> {
        if self.remaining() >= 8 {
            return Err(CodecError::CorruptStream(
                "trailing bytes after residual".into(),
            ));
        }
        while self.remaining() > 0 {
            if self.read_bit()? {
                return Err(CodecError::CorruptStream("non-zero padding".into()));
            }
        }
        Ok(())
    }
}
