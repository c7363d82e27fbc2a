//! Decimal-sequence (D-sequence) pseudo-random generator.
//!
//! The sequence is `a(i) = l^i mod m` for a semiprime modulus `m = p·q` and a
//! multiplier `l` coprime to `m`; its binary output is the least significant
//! bit of each term. Parameters come from a single user knob, the *maximum
//! range*: `p` and `q` are the two largest primes not exceeding the range and
//! `l` is the smallest integer ≥ max(2, ⌊m/4⌋) coprime to `m`.
//!
//! Because gcd(l, m) = 1 the sequence is purely periodic with period equal to
//! the multiplicative order of `l` mod `m`; the first repeated value is always
//! `a(1)`.
//!
//! Stream production mirrors the construction's generation loop: terms are
//! generated until either the sequence repeats or `range` terms have been
//! produced, whichever comes first, and the collected block of LSBs is then
//! cycled to fill any requested length. For small ranges the block is exactly
//! one period; for large ranges the cap keeps the generation loop bounded by
//! the same knob that bounds the prime search. Long output streams therefore
//! repeat the block, which is precisely the regime the battery is meant to
//! expose.

use crate::error::{Error, Result};

/// Largest accepted range. Keeps `m = p·q` below 2^62 so the widened
/// multiply-reduce never overflows a u128 and stays exact.
pub const MAX_RANGE: u64 = 1 << 31;

/// Parameters of a D-sequence generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DSequenceParams {
    /// The user's maximum range; bounds the prime search and the generation loop.
    pub range: u64,
    /// Largest prime ≤ range.
    pub p: u64,
    /// Second-largest prime ≤ range.
    pub q: u64,
    /// Modulus, exactly p·q.
    pub m: u64,
    /// Multiplier, smallest integer ≥ max(2, ⌊m/4⌋) coprime to m.
    pub l: u64,
}

impl DSequenceParams {
    /// Derive the full parameter set from a maximum range.
    pub fn new(range: u64) -> Result<Self> {
        let (p, q, m) = find_modulus(range)?;
        let l = choose_multiplier(m);
        debug_assert!(l >= 2 && l < m && gcd(l, m) == 1);
        Ok(DSequenceParams { range, p, q, m, l })
    }
}

/// Find the two largest distinct primes ≤ `range` and their product.
///
/// Returns `(p, q, m)` with `q < p` and `m = p·q`.
pub fn find_modulus(range: u64) -> Result<(u64, u64, u64)> {
    if range < 3 {
        return Err(Error::Parameter(format!(
            "insufficient primes: range {range} holds fewer than two primes, minimum range is 3"
        )));
    }
    if range > MAX_RANGE {
        return Err(Error::Parameter(format!(
            "range {range} exceeds maximum {MAX_RANGE}"
        )));
    }
    let mut primes = [0u64; 2];
    let mut found = 0;
    let mut n = range;
    while found < 2 {
        if is_prime(n) {
            primes[found] = n;
            found += 1;
        }
        // range >= 3 guarantees two primes before n underflows
        n -= 1;
    }
    let (p, q) = (primes[0], primes[1]);
    Ok((p, q, p * q))
}

/// Choose the multiplier for a modulus: the smallest integer ≥ max(2, ⌊m/4⌋)
/// that is coprime to `m`.
pub fn choose_multiplier(m: u64) -> u64 {
    let mut l = (m / 4).max(2);
    while gcd(l, m) != 1 {
        l += 1;
    }
    debug_assert!(l < m, "m - 1 is always coprime to m");
    l
}

/// Evolving state of a D-sequence: the current residue `a(i) = l^i mod m`.
#[derive(Debug, Clone, Copy)]
pub struct DSequenceState {
    pub params: DSequenceParams,
    /// Current residue a(i); a(0) = 1 before the first step.
    a: u64,
    /// Step counter i.
    i: u64,
    /// Multiplicative order of l mod m, set once a(i) returns to a(1).
    period: Option<u64>,
}

impl DSequenceState {
    pub fn new(params: DSequenceParams) -> Self {
        DSequenceState {
            params,
            a: 1,
            i: 0,
            period: None,
        }
    }

    /// Advance one step: returns a(i+1) = a(i)·l mod m.
    ///
    /// The multiply is widened to u128, so the reduction is exact for any
    /// modulus below 2^62. The period is recorded the first time the residue
    /// returns to a(1) = l.
    pub fn next_residue(&mut self) -> u64 {
        let m = self.params.m;
        self.a = (u128::from(self.a) * u128::from(self.params.l) % u128::from(m)) as u64;
        self.i += 1;
        if self.i > 1 && self.a == self.params.l && self.period.is_none() {
            self.period = Some(self.i - 1);
        }
        self.a
    }

    /// Current residue a(i).
    pub fn residue(&self) -> u64 {
        self.a
    }

    /// Current step counter i.
    pub fn step(&self) -> u64 {
        self.i
    }

    /// Detected period (multiplicative order of l mod m), if the sequence has
    /// already wrapped.
    pub fn period(&self) -> Option<u64> {
        self.period
    }
}

/// First `nbits` bits of the raw sequence: b(i) = a(i) mod 2 for i = 1..nbits.
///
/// Iteration simply continues past the period, so streams longer than the
/// period cycle through it naturally.
pub fn ds_bits(params: DSequenceParams, nbits: usize) -> Vec<u8> {
    assert!(nbits >= 1, "nbits must be at least 1");
    let mut state = DSequenceState::new(params);
    (0..nbits).map(|_| (state.next_residue() & 1) as u8).collect()
}

/// The LSB block generated by the bounded generation loop: bits of
/// a(1), a(2), … stopping at the first repeat or after `range` terms,
/// whichever comes first.
///
/// Stream output cycles this block. Its length is min(order of l mod m, range).
pub fn lsb_block(params: DSequenceParams) -> Vec<u8> {
    let mut state = DSequenceState::new(params);
    let mut block = Vec::new();
    for _ in 0..params.range {
        let a = state.next_residue();
        if state.period().is_some() {
            break;
        }
        block.push((a & 1) as u8);
    }
    block
}

/// Infinite bit stream for file production: the `lsb_block` cycled.
///
/// The block is materialized lazily; callers that stop before the block
/// completes never pay for the full block.
pub struct DsBitStream {
    state: DSequenceState,
    block: Vec<u8>,
    /// true once the block is closed (repeat seen or range cap hit)
    closed: bool,
    pos: usize,
    emitted_in_block: u64,
}

impl DsBitStream {
    pub fn new(params: DSequenceParams) -> Self {
        DsBitStream {
            state: DSequenceState::new(params),
            block: Vec::new(),
            closed: false,
            pos: 0,
            emitted_in_block: 0,
        }
    }

    pub fn next_bit(&mut self) -> u8 {
        if !self.closed {
            if self.emitted_in_block == self.state.params.range {
                self.closed = true;
            } else {
                let a = self.state.next_residue();
                if self.state.period().is_some() {
                    self.closed = true;
                } else {
                    let bit = (a & 1) as u8;
                    self.block.push(bit);
                    self.emitted_in_block += 1;
                    return bit;
                }
            }
        }
        // cycle the closed block
        let bit = self.block[self.pos];
        self.pos = (self.pos + 1) % self.block.len();
        bit
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}
