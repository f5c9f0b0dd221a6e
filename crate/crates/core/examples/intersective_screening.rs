//! Screen integer polynomials for (joint) intersectivity modulo prime powers.
//!
//! `cargo run --example intersective_screening`

use hfl::intersective::{is_intersective_up_to, jointly_intersective_up_to, roots_mod, IntPoly};

fn main() {
    let p = |c: i64| IntPoly::from_i64(&[-c, 0, 1]);
    let berend = p(13).mul(&p(17)).mul(&p(221));
    let cases = [
        ("t^2 + 1", vec![IntPoly::from_i64(&[1, 0, 1])]),
        ("t^2", vec![IntPoly::from_i64(&[0, 0, 1])]),
        ("(t^2-13)(t^2-17)(t^2-221)", vec![berend.clone()]),
        ("t - 1, t + 1", vec![IntPoly::from_i64(&[-1, 1]), IntPoly::from_i64(&[1, 1])]),
        ("t^2 + t, t^3", vec![IntPoly::from_i64(&[0, 1, 1]), IntPoly::from_i64(&[0, 0, 0, 1])]),
    ];
    for (name, polys) in &cases {
        let s = if polys.len() == 1 { is_intersective_up_to(&polys[0], 10_000) } else { jointly_intersective_up_to(polys, 10_000) };
        println!("{name:<28} {s:?}");
    }
    println!("roots of {berend} mod 221: {:?}", roots_mod(&berend, 221));
}
