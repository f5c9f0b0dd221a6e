//! Decide the two recurrence conditions and property P for the example families.
//!
//! `cargo run --example recurrence_conditions`

use hfl::builtins;
use hfl::germ::{check_condition_inf, check_condition_int, choose_weight, normal_form, poly_span, Family, Verdict};

fn report(name: &str, fam: &Family) -> hfl::Result<()> {
    println!("== {name}");
    for (n, f) in fam.names.iter().zip(&fam.functions) {
        println!("  {n} = {f}");
    }
    let span: Vec<String> = poly_span(&fam.basis, &fam.functions)?.iter().map(|p| p.to_string()).collect();
    println!("  polynomial span: [{}]", span.join(", "));
    let nf = normal_form(&fam.basis, &fam.functions)?;
    println!("  independent members: {:?}", nf.independent.iter().map(|&i| &fam.names[i]).collect::<Vec<_>>());
    match check_condition_inf(&fam.basis, &fam.functions)? {
        Verdict::Fails(w) => println!(
            "  INF fails: c = ({}), q = {}, residual {}",
            w.c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
            hfl::intersective::IntPoly::new(w.q.clone()),
            w.residual
        ),
        v => println!("  INF {}", v.label()),
    }
    println!("  INT {}", check_condition_int(&fam.basis, &fam.functions, 10_000)?.label());
    match choose_weight(&fam.basis, &fam.functions) {
        Ok(w) => println!("  compatible weight: {}", w.name()),
        Err(e) => println!("  no compatible weight: {e}"),
    }
    Ok(())
}

fn main() -> hfl::Result<()> {
    report("example 1", &builtins::example1())?;
    report("example 2", &builtins::example2())?;
    report("example 5", &builtins::example5())?;
    let q = hfl::germ::parse_rational;
    report("t^(3/2), t^(4/3)", &builtins::corollary_a2(&[q("3/2")?, q("4/3")?])?)?;
    Ok(())
}
