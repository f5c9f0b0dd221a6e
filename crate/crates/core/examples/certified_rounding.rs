//! Certified floor, ceiling and nearest-integer rounding, with the tier that certified each value.
//!
//! `cargo run --example certified_rounding`

use hfl::builtins;
use hfl::correlate::{Rounder, RoundingMode};
use hfl::germ::HardyExpr;
use rug::Rational;

fn main() -> hfl::Result<()> {
    let b = hfl::germ::Basis::new();
    let f = HardyExpr::monomial(1, Rational::from((3, 2)));
    for mode in [RoundingMode::Floor, RoundingMode::Ceil, RoundingMode::Nearest] {
        let r = Rounder::new(&b, &f, mode)?;
        let row: Vec<String> = [4u64, 10, 1_000_000, 4_000_000_000_000]
            .iter()
            .map(|&n| {
                let (v, tier) = r.round_with_tier(n).expect("certified");
                format!("n={n}: {v} ({tier:?})")
            })
            .collect();
        println!("{mode:?} t^(3/2): {}", row.join(", "));
    }

    // f_2 of example 2 has a constant term 1/2 scaled by 1/β; values never sit on a half-integer
    let fam = builtins::example2();
    let r = Rounder::new(&fam.basis, &fam.functions[1], RoundingMode::Nearest)?;
    for n in [1u64, 2, 3, 1000, 123_456] {
        let (v, tier) = r.round_with_tier(n)?;
        println!("[f_2({n})] = {v} ({tier:?})");
    }
    Ok(())
}
