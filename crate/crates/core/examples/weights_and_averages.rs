//! Weighted averages along the weight ladder: level sets of `g`, arithmetic progressions, van der Corput.
//!
//! `cargo run --release --example weights_and_averages`

use hfl::correlate::{ap_decomposition_check, partition_weights, vdc_check, weighted_avg};
use hfl::germ::{Basis, HardyExpr, Weight};
use num_complex::Complex64;
use rug::Rational;

fn main() -> hfl::Result<()> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let b = Basis::new();
    let g = HardyExpr::monomial(1, Rational::from((1, 2)));
    for w in ["t", "t/log t"] {
        let weight = Weight::by_name(w).expect("ladder weight");
        let rep = partition_weights(&b, &weight, &g, 10_000)?;
        let row = rep.row(100).expect("j = 100");
        println!(
            "W = {w}, g = sqrt t, j = 100: |K_j| = {}, ratios {:.4} {:.4} {:.4}",
            row.size, row.ratio_increment, row.ratio_total, row.ratio_last
        );
    }

    let sign = |n: u64| if n % 2 == 0 { 1.0 } else { -1.0 };
    for (name, w) in Weight::ladder() {
        let rep = weighted_avg(&b, |n| Ok(sign(n) * (n as f64).sin()), &w, &[1_000, 100_000], threads)?;
        let vals: Vec<String> = rep.points.iter().map(|p| format!("{:+.2e}", p.weighted_average)).collect();
        println!("W = {name:<17} avg (-1)^n sin n: {}", vals.join(" "));
    }

    let a = |n: u64| Ok(Complex64::new(sign(n), 0.0));
    let rep = ap_decomposition_check(&b, a, &Weight::t(), 2, 100_000, threads)?;
    println!("AP split of (-1)^n, R = 2: residual {:.1e}", rep.residual);

    let u = |n: u64| vec![hfl::systems::e((n as f64 * n as f64 * std::f64::consts::SQRT_2).fract())];
    let rep = vdc_check(u, |_| 1.0, 20_000, 50)?;
    // both sides tend to zero; the inequality between them only holds in the limit
    println!("van der Corput for e(n^2 sqrt2), N = {}, H = {}: |avg|^2 = {:.2e}, correlation side = {:.2e}", rep.n, rep.h, rep.lhs, rep.rhs);
    Ok(())
}
