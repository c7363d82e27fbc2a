//! Deterministic pseudo-random bit and word streams.
//!
//! Three generators: the D-sequence construction and two baselines, KISS and
//! MT19937. States are single-owner sequential objects; independent
//! generators may run in parallel.

mod dsequence;
mod kiss;
mod mt19937;

pub use dsequence::{
    choose_multiplier, ds_bits, find_modulus, lsb_block, DSequenceParams, DSequenceState,
    DsBitStream, MAX_RANGE,
};
pub use kiss::KissState;
pub use mt19937::Mt19937State;

use crate::error::Result;

/// Which generator to run, with its seeding parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// D-sequence derived from a maximum range.
    DSequence { range: u64 },
    /// KISS with Marsaglia's canonical state, or a state expanded from a seed.
    Kiss { seed: Option<u32> },
    /// MT19937 from a 32-bit seed.
    Mt19937 { seed: u32 },
}

impl GeneratorSpec {
    /// Short label used in reports and comparison tables.
    pub fn label(&self) -> String {
        match self {
            GeneratorSpec::DSequence { range } => format!("dseq(range={range})"),
            GeneratorSpec::Kiss { seed: None } => "kiss".to_string(),
            GeneratorSpec::Kiss { seed: Some(s) } => format!("kiss(seed={s})"),
            GeneratorSpec::Mt19937 { seed } => format!("mt19937(seed={seed})"),
        }
    }

    /// Produce exactly `nbytes` stream bytes.
    ///
    /// The D-sequence contributes one LSB per generated term, packed
    /// MSB-first, 8 terms per byte; KISS and MT19937 contribute 4 big-endian
    /// bytes per 32-bit output.
    pub fn stream_bytes(&self, nbytes: usize) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(nbytes);
        match *self {
            GeneratorSpec::DSequence { range } => {
                let params = DSequenceParams::new(range)?;
                let mut stream = DsBitStream::new(params);
                for _ in 0..nbytes {
                    let mut byte = 0u8;
                    for _ in 0..8 {
                        byte = (byte << 1) | stream.next_bit();
                    }
                    out.push(byte);
                }
            }
            GeneratorSpec::Kiss { seed } => {
                let mut state = match seed {
                    Some(s) => KissState::from_seed(s),
                    None => KissState::new(),
                };
                fill_from_words(&mut out, nbytes, || state.next_word());
            }
            GeneratorSpec::Mt19937 { seed } => {
                let mut state = Mt19937State::new(seed);
                fill_from_words(&mut out, nbytes, || state.next_word());
            }
        }
        Ok(out)
    }
}

fn fill_from_words(out: &mut Vec<u8>, nbytes: usize, mut next: impl FnMut() -> u32) {
    while out.len() < nbytes {
        let bytes = next().to_be_bytes();
        let take = (nbytes - out.len()).min(4);
        out.extend_from_slice(&bytes[..take]);
    }
}
