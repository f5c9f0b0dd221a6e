//! Uniformity seminorms of observables on cyclic groups, next to the brute-force box average.
//!
//! `cargo run --example gowers_seminorms`

use hfl::uniformity::{gowers_box_oracle, gowers_seminorm, FiniteObservable};
use num_complex::Complex64;

fn main() -> hfl::Result<()> {
    let m = 12;
    let mut ind = vec![0.0; m];
    ind[0] = 1.0;
    let chi = (0..m).map(|x| hfl::systems::e(x as f64 / m as f64)).collect();
    let quad = (0..m).map(|x| hfl::systems::e(((x * x) % m) as f64 / m as f64)).collect::<Vec<Complex64>>();
    let cases = [
        ("1_{0}", FiniteObservable::real(&ind, 1)?),
        ("e(x/m)", FiniteObservable::new(chi, 1)?),
        ("e(x^2/m)", FiniteObservable::new(quad, 1)?),
    ];
    println!("Z/{m}Z, shift 1");
    for (name, h) in &cases {
        for s in 1..=3 {
            println!("  {name:<9} s={s}: {:.6}  (box average {:.6})", gowers_seminorm(h, s), gowers_box_oracle(h, s));
        }
    }
    println!("  m^(-3/4) = {:.6}", (m as f64).powf(-0.75));
    Ok(())
}
