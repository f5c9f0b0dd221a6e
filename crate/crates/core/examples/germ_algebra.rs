//! Growth comparison, derivatives, degree and characteristic vectors of germs.
//!
//! `cargo run --example germ_algebra`

use hfl::germ::{characteristic_vector, compare, degree, shift_expansion, Basis, GermTerm, HardyExpr, SymbolicReal};
use rug::Rational;

fn main() -> hfl::Result<()> {
    let mut b = Basis::new();
    hfl::builtins::declare_builtin(&mut b, "c", "sqrt2_over_2")?;
    let half = Rational::from((1, 2));

    let t_log = HardyExpr::new(&b, vec![GermTerm::power(1, 1).with_log(1, 1)])?;
    let t_c = HardyExpr::new(&b, vec![GermTerm::new(SymbolicReal::one(), SymbolicReal::symbol("c"))])?;
    let t32 = HardyExpr::monomial(1, Rational::from((3, 2)));
    let sqrt = HardyExpr::monomial(3, half.clone());

    for (f, g) in [(&t_log, &t32), (&t_c, &sqrt), (&sqrt, &HardyExpr::monomial(5, half))] {
        println!("{f}  vs  {g}: {:?}", compare(&b, f, g)?);
    }

    // the second derivative of t^c uses c·c = 1/2, which comes with the builtin constant
    println!("d/dt t^c = {}", t_c.derivative(&b)?);
    println!("d²/dt² t^c = {}", t_c.nth_derivative(&b, 2)?);
    println!("d/dt t log t = {}", t_log.derivative(&b)?);

    println!("degree(t^(3/2)) = {}", degree(&b, &t32)?);
    println!("characteristic vector of (t^(3/2), t log t, t^c) = {:?}", characteristic_vector(&b, &[t32.clone(), t_log, t_c])?);

    let e = shift_expansion(&b, &t32, 2, 3)?;
    println!("(t+2)^(3/2) to order 3: {}  (remainder at t=10^4 below {:.1e})", e.expr, e.remainder_bound(&b, 1e4)?);
    Ok(())
}
