//! D-sequence fundamentals: parameter derivation, the residue sequence, the
//! period, and the LSB bit stream.
//!
//! ```text
//! cargo run --example dsequence_basics -- 10
//! ```

use randlab::generators::{ds_bits, lsb_block, DSequenceParams, DSequenceState};

fn main() {
    let range: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("numeric range"))
        .unwrap_or(10);

    let params = match DSequenceParams::new(range) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("range {range}:");
    println!("  primes        p = {}, q = {}", params.p, params.q);
    println!("  modulus       m = {}", params.m);
    println!("  multiplier    l = {} (~m/4, coprime to m)", params.l);

    // walk the residue sequence until it wraps (or a cap, for large ranges)
    let mut state = DSequenceState::new(params);
    let mut shown = Vec::new();
    for _ in 0..2_000_000 {
        let a = state.next_residue();
        if shown.len() < 12 {
            shown.push(a);
        }
        if state.period().is_some() {
            break;
        }
    }
    println!("  residues      a(i) = {shown:?}...");
    match state.period() {
        Some(t) => println!("  period        {t} (multiplicative order of l mod m)"),
        None => println!("  period        > {} steps", state.step()),
    }

    let bits = ds_bits(params, 32);
    let bit_string: String = bits.iter().map(|b| char::from(b'0' + b)).collect();
    println!("  LSB stream    {bit_string}...");

    let block = lsb_block(params);
    println!(
        "  stream block  {} bits (min of period and range); files cycle this block",
        block.len()
    );
}
