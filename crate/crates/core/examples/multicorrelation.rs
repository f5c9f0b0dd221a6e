//! Weighted multicorrelation averages on a circle rotation and on the quadratic skew product.
//!
//! `cargo run --release --example multicorrelation`

use hfl::builtins;
use hfl::correlate::{multicorrelation, Multicorrelation, RoundingMode, SetSpec};
use hfl::germ::{parse_rational, Weight};
use hfl::systems::{Arc, BoxSet};

fn main() -> hfl::Result<()> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let fam = builtins::corollary_a2(&[parse_rational("3/2")?, parse_rational("4/3")?])?;

    let (b, torus) = builtins::torus_sqrt2();
    let a = SetSpec::Box(BoxSet::interval(0.0, 0.3));
    let grid = [1_000, 10_000, 100_000, 1_000_000];
    let rep = multicorrelation(&b, &torus, &a, &fam.functions, RoundingMode::Floor, &Weight::t(), &grid, threads)?;
    println!("rotation by sqrt2 - 1, A = [0, 0.3), mu(A)^3 = {:.4}", 0.3f64.powi(3));
    for p in &rep.points {
        println!("  N = {:>8}  average {:.6}", p.n, p.weighted_average);
    }

    let (b, skew) = builtins::skew_sqrt2();
    let a = SetSpec::Box(BoxSet::new(vec![Arc::new(0.0, 0.5), Arc::new(0.0, 0.5)]));
    let mc = Multicorrelation::new(&b, &skew, &a, &fam.functions, RoundingMode::Floor)?.with_sampling(16_384, 1);
    let rep = mc.run(&b, &Weight::t(), &[1_000, 10_000], threads)?;
    println!("skew product, A = [0, 1/2)^2, mu(A)^3 = {:.4}", 0.25f64.powi(3));
    for p in &rep.points {
        println!("  N = {:>8}  average {:.6} ± {:.1e}", p.n, p.weighted_average, p.stderr.unwrap_or(0.0));
    }
    Ok(())
}
