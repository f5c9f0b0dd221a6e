//! Return sets `{n : μ(A ∩ T^{-[f_1(n)]}A ∩ ...) > 0}` on the two-point system, with Banach density probes.
//!
//! `cargo run --release --example return_sets`

use hfl::builtins;
use hfl::correlate::{RoundingMode, SetSpec};
use hfl::patterns::{banach_density_probe, return_set};
use rug::Rational;

fn main() -> hfl::Result<()> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let sys = builtins::two_point();
    let a = SetSpec::Cyclic(vec![true, false]);

    let fam = builtins::example4();
    let r = return_set(&fam.basis, &sys, &a, &fam.functions, RoundingMode::Floor, 10_000, threads)?;
    let members: Vec<u64> = r.members().collect();
    println!("n ± sqrt n: {} returns up to 10^4, first {:?}", members.len(), &members[..10]);
    for row in banach_density_probe(&r, &[100, 1_000, 10_000])? {
        println!("  window {:>6}: max count {:>3}, density {:.4}", row.length, row.max_count, row.density);
    }

    for (alpha, c) in [("sqrt2_minus_1", (1, 20)), ("golden", (1, 2)), ("pi", (3, 1))] {
        let fam = builtins::example8(alpha, &Rational::from(c))?;
        let r = return_set(&fam.basis, &sys, &a, &fam.functions, RoundingMode::Floor, 100_000, threads)?;
        let members: Vec<u64> = r.members().collect();
        println!("2nα - 1/2, 2nα + 1/2 - 2C/n with α = {alpha}, C = {}/{}: {} returns, {:?}", c.0, c.1, members.len(), &members[..members.len().min(8)]);
    }
    Ok(())
}
