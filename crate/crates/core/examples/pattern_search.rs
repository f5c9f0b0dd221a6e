//! Search sets of integers for rounded configurations `{a, a + [f_1(n)], ..., a + [f_k(n)]}`.
//!
//! `cargo run --release --example pattern_search`

use hfl::builtins;
use hfl::correlate::RoundingMode;
use hfl::germ::SymbolicReal;
use hfl::patterns::{find_pattern, BohrSet, IntegerSet, PatternSearch, SearchBounds};
use rug::Rational;

fn show(label: &str, s: &PatternSearch) {
    match &s.witness {
        Some(w) => println!("{label}: n = {}, a = {}, elements {:?}", w.n, w.a, w.elements()),
        None => println!("{label}: none for {} <= n <= {}, a <= {}", s.bounds.n_min, s.bounds.n_max, s.bounds.a_max),
    }
}

fn main() -> hfl::Result<()> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let fam = builtins::example1();
    for mode in [RoundingMode::Floor, RoundingMode::Nearest] {
        let s = find_pattern(&fam.basis, &IntegerSet::Odds, &fam.functions, mode, SearchBounds::new(100_000, 100_000).from_n(3), threads)?;
        show(&format!("odd numbers, t ∓ t^(√2/2), {mode:?}"), &s);
    }

    let fam = builtins::example2();
    let eighth = (Rational::new(), Rational::from((1, 8)));
    let bohr = BohrSet::new(
        &fam.basis,
        vec![SymbolicReal::symbol("alpha"), SymbolicReal::symbol("beta")],
        vec![eighth.clone(), eighth],
    )?;
    let set = IntegerSet::Bohr(Box::new(bohr));
    let s = find_pattern(&fam.basis, &set, &fam.functions, RoundingMode::Nearest, SearchBounds::new(10_000, 10_000), threads)?;
    show("Bohr set {nα}, {nβ} < 1/8, example 2 family", &s);

    let s = find_pattern(&fam.basis, &IntegerSet::Odds, &fam.functions, RoundingMode::Nearest, SearchBounds::new(1_000, 1_000), threads)?;
    show("odd numbers, example 2 family", &s);
    Ok(())
}
