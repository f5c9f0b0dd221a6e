//! Weighted Weyl sums of `{f(n)}` and the joint distribution of rounded orbits on a product torus.
//!
//! `cargo run --release --example equidistribution`

use hfl::builtins;
use hfl::correlate::{Rounder, RoundingMode};
use hfl::germ::{parse_rational, Basis, GermTerm, HardyExpr, SymbolicReal, Weight};
use hfl::uniformity::{joint_orbit_discrepancy, weyl_discrepancy};

fn main() -> hfl::Result<()> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut b = Basis::new();
    builtins::declare_builtin(&mut b, "r", "sqrt2")?;
    let seqs = [
        ("n sqrt2", HardyExpr::new(&b, vec![GermTerm::new(SymbolicReal::symbol("r"), SymbolicReal::one())])?),
        ("n^(3/2)", HardyExpr::monomial(1, parse_rational("3/2")?)),
        ("sqrt n", HardyExpr::monomial(1, parse_rational("1/2")?)),
        ("log n", HardyExpr::new(&b, vec![GermTerm::power(1, 0).with_log(1, 1)])?),
    ];
    for w in ["t", "log t"] {
        let weight = Weight::by_name(w).expect("ladder weight");
        for (name, f) in &seqs {
            let r = Rounder::new(&b, f, RoundingMode::Floor)?;
            let d = weyl_discrepancy(&b, |k| if k == 1 { Ok(0.0) } else { r.frac_f64(k) }, &weight, 100_000, 5, threads)?;
            println!("W = {w:<6} {name:<8} max_h |avg e(h f(n))| = {:.2e} at h = {}", d.max, d.argmax);
        }
    }

    let (tb, torus) = builtins::torus_sqrt2();
    let fam = builtins::corollary_a2(&[parse_rational("3/2")?, parse_rational("5/2")?])?;
    let rep = joint_orbit_discrepancy(&tb, &torus, &fam.functions, RoundingMode::Floor, &Weight::t(), 200_000, threads)?;
    println!("([n^(3/2)]α, [n^(5/2)]α): box discrepancy per level {:?}", rep.box_discrepancy);
    Ok(())
}
