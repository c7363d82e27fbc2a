//! Byte buffers and bit-level views over battery input streams.
//!
//! Stream files are raw bytes with no header. Bit order is MSB-first within
//! a byte; 32-bit words are big-endian.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;

/// Immutable test-input byte sequence, cheaply shareable across threads.
#[derive(Debug, Clone)]
pub struct ByteBuffer {
    bytes: Arc<[u8]>,
}

impl ByteBuffer {
    pub fn new(bytes: Vec<u8>) -> Result<Self> {
        if bytes.is_empty() {
            return Err(Error::Parameter(
                "byte buffer must hold at least one byte".to_string(),
            ));
        }
        Ok(ByteBuffer {
            bytes: bytes.into(),
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        ByteBuffer::new(bytes)
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one byte
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bit_len(&self) -> u64 {
        self.bytes.len() as u64 * 8
    }

    /// Number of whole 32-bit words available.
    pub fn word_count(&self) -> usize {
        self.bytes.len() / 4
    }

    pub fn cursor(&self) -> BitCursor<'_> {
        BitCursor {
            bytes: &self.bytes,
            bit: 0,
        }
    }

    pub fn sha256_hex(&self) -> String {
        let digest = Sha256::digest(&self.bytes);
        let mut s = String::with_capacity(64);
        for b in digest {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

/// Bit-position view over a [`ByteBuffer`]; single-owner, cheap to recreate.
#[derive(Debug, Clone)]
pub struct BitCursor<'a> {
    bytes: &'a [u8],
    bit: u64,
}

impl<'a> BitCursor<'a> {
    pub fn position_bits(&self) -> u64 {
        self.bit
    }

    pub fn remaining_bits(&self) -> u64 {
        self.bytes.len() as u64 * 8 - self.bit
    }

    pub fn seek_bit(&mut self, bit: u64) -> Result<()> {
        if bit > self.bytes.len() as u64 * 8 {
            return Err(self.end_of_stream(0));
        }
        self.bit = bit;
        Ok(())
    }

    fn end_of_stream(&self, requested: u64) -> Error {
        Error::EndOfStream {
            requested_bits: requested,
            position_bits: self.bit,
            length_bits: self.bytes.len() as u64 * 8,
        }
    }

    #[inline]
    pub fn next_bit(&mut self) -> Result<u8> {
        if self.bit >= self.bytes.len() as u64 * 8 {
            return Err(self.end_of_stream(1));
        }
        let byte = self.bytes[(self.bit / 8) as usize];
        let bit = (byte >> (7 - (self.bit % 8))) & 1;
        self.bit += 1;
        Ok(bit)
    }

    /// Next 32 bits as a big-endian word; 4 consecutive bytes when the cursor
    /// is byte-aligned.
    #[inline]
    pub fn next_word32(&mut self) -> Result<u32> {
        if self.remaining_bits() < 32 {
            return Err(self.end_of_stream(32));
        }
        if self.bit.is_multiple_of(8) {
            let i = (self.bit / 8) as usize;
            let w = u32::from_be_bytes([
                self.bytes[i],
                self.bytes[i + 1],
                self.bytes[i + 2],
                self.bytes[i + 3],
            ]);
            self.bit += 32;
            Ok(w)
        } else {
            let mut w = 0u32;
            for _ in 0..32 {
                w = (w << 1) | u32::from(self.next_bit()?);
            }
            Ok(w)
        }
    }
}

/// Pack a bit sequence (values 0/1, MSB-first) into bytes.
pub fn pack_bits(bits: &[u8]) -> Result<ByteBuffer> {
    if bits.is_empty() || !bits.len().is_multiple_of(8) {
        return Err(Error::Size {
            required: (bits.len() as u64).div_ceil(8).max(1) * 8,
            available: bits.len() as u64,
            context: "pack_bits needs a positive multiple of 8 bits".to_string(),
        });
    }
    let mut bytes = Vec::with_capacity(bits.len() / 8);
    for chunk in bits.chunks_exact(8) {
        let mut b = 0u8;
        for &bit in chunk {
            debug_assert!(bit <= 1);
            b = (b << 1) | bit;
        }
        bytes.push(b);
    }
    ByteBuffer::new(bytes)
}

/// Overlapping `width`-bit words sliding one bit per step.
pub fn overlapping_words(cursor: &mut BitCursor<'_>, width: u32, count: usize) -> Result<Vec<u32>> {
    assert!((1..=32).contains(&width));
    let needed = width as u64 + count.saturating_sub(1) as u64;
    if cursor.remaining_bits() < needed {
        return Err(Error::EndOfStream {
            requested_bits: needed,
            position_bits: cursor.position_bits(),
            length_bits: cursor.position_bits() + cursor.remaining_bits(),
        });
    }
    let mask = if width == 32 {
        u32::MAX
    } else {
        (1u32 << width) - 1
    };
    let mut out = Vec::with_capacity(count);
    let mut window = 0u32;
    for _ in 0..width - 1 {
        window = (window << 1) | u32::from(cursor.next_bit()?);
    }
    for _ in 0..count {
        window = ((window << 1) | u32::from(cursor.next_bit()?)) & mask;
        out.push(window);
    }
    Ok(out)
}

/// Write a raw stream file of exactly `nbytes` bytes for the given generator.
pub fn write_stream_file(path: impl AsRef<Path>, spec: &GeneratorSpec, nbytes: u64) -> Result<()> {
    let path = path.as_ref();
    if nbytes < 1 {
        return Err(Error::Parameter("nbytes must be at least 1".to_string()));
    }
    let bytes = spec.stream_bytes(nbytes as usize)?;
    fs::write(path, &bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Mt19937State;
    use proptest::prelude::*;

    #[test]
    fn pack_bits_examples() {
        let b = pack_bits(&[1, 0, 1, 0, 1, 0, 1, 0]).unwrap();
        assert_eq!(b.as_slice(), &[0xAA]);
        let b = pack_bits(&[0; 8]).unwrap();
        assert_eq!(b.as_slice(), &[0x00]);
        let b = pack_bits(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(b.as_slice(), &[0x00, 0x01]);
    }

    #[test]
    fn pack_bits_rejects_ragged_input() {
        assert!(matches!(pack_bits(&[1, 0, 1]), Err(Error::Size { .. })));
        assert!(pack_bits(&[]).is_err());
    }

    #[test]
    fn next_word32_examples() {
        let buf = ByteBuffer::new(vec![0, 0, 0, 1, 0xFF, 0xFF, 0xFF, 0xFF, 0x12, 0x34, 0x56, 0x78])
            .unwrap();
        let mut c = buf.cursor();
        assert_eq!(c.next_word32().unwrap(), 1);
        assert_eq!(c.next_word32().unwrap(), u32::MAX);
        assert_eq!(c.next_word32().unwrap(), 0x1234_5678);
        assert!(matches!(c.next_word32(), Err(Error::EndOfStream { .. })));
    }

    #[test]
    fn unaligned_word_matches_bit_by_bit() {
        let buf = ByteBuffer::new(vec![0b1011_0010, 0x5A, 0xC3, 0x99, 0x7E]).unwrap();
        let mut a = buf.cursor();
        a.next_bit().unwrap();
        a.next_bit().unwrap();
        a.next_bit().unwrap();
        let word = a.next_word32().unwrap();
        let mut b = buf.cursor();
        for _ in 0..3 {
            b.next_bit().unwrap();
        }
        let mut expect = 0u32;
        for _ in 0..32 {
            expect = (expect << 1) | u32::from(b.next_bit().unwrap());
        }
        assert_eq!(word, expect);
    }

    #[test]
    fn overlapping_words_sliding_window() {
        // bits 0101, width 2 -> 01, 10, 01
        let buf = pack_bits(&[0, 1, 0, 1, 0, 0, 0, 0]).unwrap();
        let mut c = buf.cursor();
        assert_eq!(overlapping_words(&mut c, 2, 3).unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn overlapping_words_zero_stream() {
        let buf = ByteBuffer::new(vec![0u8; 16]).unwrap();
        let mut c = buf.cursor();
        assert!(overlapping_words(&mut c, 20, 100)
            .unwrap()
            .iter()
            .all(|&w| w == 0));
    }

    #[test]
    fn overlapping_words_match_naive_slices_on_fixture() {
        // 2^21 + 19 bits of MT output, width 20: compare ends against a
        // naive bit-slice reimplementation
        let nbits = (1usize << 21) + 19;
        let nbytes = nbits.div_ceil(8);
        let mut mt = Mt19937State::new(99);
        let mut bytes = Vec::with_capacity(nbytes);
        while bytes.len() < nbytes {
            bytes.extend_from_slice(&mt.next_word().to_be_bytes());
        }
        bytes.truncate(nbytes);
        let buf = ByteBuffer::new(bytes).unwrap();

        let naive = |start: usize| -> u32 {
            let mut w = 0u32;
            for k in 0..20 {
                let bit = (buf.as_slice()[(start + k) / 8] >> (7 - (start + k) % 8)) & 1;
                w = (w << 1) | u32::from(bit);
            }
            w
        };

        let count = 1 << 21;
        let mut c = buf.cursor();
        let words = overlapping_words(&mut c, 20, count).unwrap();
        assert_eq!(words.len(), count);
        assert_eq!(words[0], naive(0));
        assert_eq!(words[1], naive(1));
        assert_eq!(words[count - 1], naive(count - 1));
        assert_eq!(words[count / 2], naive(count / 2));
    }

    #[test]
    fn overlapping_words_insufficient_bits() {
        let buf = ByteBuffer::new(vec![0u8; 2]).unwrap();
        let mut c = buf.cursor();
        assert!(matches!(
            overlapping_words(&mut c, 20, 100),
            Err(Error::EndOfStream { .. })
        ));
    }

    #[test]
    fn write_stream_file_sizes_and_contents() {
        let dir = std::env::temp_dir().join("randlab_bitstream_test");
        std::fs::create_dir_all(&dir).unwrap();

        // D-sequence m=35, l=8: one byte of the LSB cycle is 0x55
        let d = dir.join("d.bin");
        write_stream_file(&d, &GeneratorSpec::DSequence { range: 10 }, 1).unwrap();
        assert_eq!(std::fs::read(&d).unwrap(), vec![0x55]);

        // MT first word big-endian
        let t = dir.join("t.bin");
        write_stream_file(&t, &GeneratorSpec::Mt19937 { seed: 5489 }, 8).unwrap();
        let bytes = std::fs::read(&t).unwrap();
        assert_eq!(bytes.len(), 8);
        assert_eq!(&bytes[..4], &3_499_211_612u32.to_be_bytes());

        // determinism: identical spec -> identical file hash
        let t2 = dir.join("t2.bin");
        write_stream_file(&t2, &GeneratorSpec::Mt19937 { seed: 5489 }, 8).unwrap();
        assert_eq!(
            ByteBuffer::from_file(&t).unwrap().sha256_hex(),
            ByteBuffer::from_file(&t2).unwrap().sha256_hex()
        );

        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn empty_buffer_rejected() {
        assert!(ByteBuffer::new(vec![]).is_err());
    }

    proptest! {
        /// pack_bits followed by bit-level read-back is the identity.
        #[test]
        fn pack_roundtrip(bits in proptest::collection::vec(0u8..=1, 1..128)) {
            let mut bits = bits;
            let pad = (8 - bits.len() % 8) % 8;
            bits.extend(std::iter::repeat_n(0, pad));
            let buf = pack_bits(&bits).unwrap();
            let mut c = buf.cursor();
            for (i, &bit) in bits.iter().enumerate() {
                prop_assert_eq!(c.next_bit().unwrap(), bit, "bit {}", i);
            }
        }

        /// next_word32 over a packed stream equals packing 32 bits directly.
        #[test]
        fn word_composition(bits in proptest::collection::vec(0u8..=1, 32)) {
            let buf = pack_bits(&bits).unwrap();
            let mut c = buf.cursor();
            let word = c.next_word32().unwrap();
            let direct = bits.iter().fold(0u32, |w, &b| (w << 1) | u32::from(b));
            prop_assert_eq!(word, direct);
        }
    }
}
