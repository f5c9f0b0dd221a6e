//! Shifted combinations of a family and the search for shifted patterns in a Bohr set.
//!
//! `cargo run --release --example shifted_probe`

use hfl::builtins;
use hfl::correlate::RoundingMode;
use hfl::germ::SymbolicReal;
use hfl::patterns::{cor_a4_probe, shifted_combination, BohrSet, IntegerSet, SearchBounds, EXAMPLE5_COMBINATION};
use rug::Rational;

fn main() -> hfl::Result<()> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let fam = builtins::example5();
    for t in [100u64, 10_000, 1_000_000] {
        let v = shifted_combination(&fam.basis, &fam.functions, &EXAMPLE5_COMBINATION, t, 80)?;
        println!("f1(t+2) - 2 f1(t+1) + f1(t) - f2(t+1) + f2(t) at t = {t}: {:.9} (± {:.1e})", v.mid_f64(), v.width_f64() / 2.0);
    }

    let mut b = fam.basis.clone();
    builtins::declare_builtin(&mut b, "alpha", "sqrt2_minus_1")?;
    for eps in [(1, 100), (1, 10), (1, 4)] {
        let bohr = BohrSet::single(&b, SymbolicReal::symbol("alpha"), Rational::from(eps))?;
        let s = cor_a4_probe(&b, &fam.functions, &[2, 1], &IntegerSet::Bohr(Box::new(bohr)), RoundingMode::Floor, SearchBounds::new(20_000, 20_000), threads)?;
        match s.witness {
            Some(w) => println!("eps = {}/{}: shifted pattern at n = {}, a = {}", eps.0, eps.1, w.n, w.a),
            None => println!("eps = {}/{}: no shifted pattern for n, a <= 20000", eps.0, eps.1),
        }
    }
    Ok(())
}
