//! Named constants, example families and systems.

use rug::{Float, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::{plain_decimal, Basis, Family, GermTerm, HardyExpr, SymbolicReal};
use crate::systems::System;

/// Digits after the point used for builtin constants.
pub const DIGITS: usize = 600;
const PREC: u32 = 2100;

fn sqrt(n: u32) -> Float {
    Float::with_val(PREC, n).sqrt()
}

/// Decimal value of a builtin constant.
pub fn constant_value(name: &str) -> Option<String> {
    let v = match name {
        "sqrt2" => sqrt(2),
        "sqrt3" => sqrt(3),
        "sqrt5" => sqrt(5),
        "sqrt2_minus_1" => sqrt(2) - 1u32,
        "sqrt2_over_2" => sqrt(2) / 2u32,
        "golden" => (sqrt(5) - 1u32) / 2u32,
        "pi" => Float::with_val(PREC, rug::float::Constant::Pi),
        "e" => Float::with_val(PREC, 1).exp(),
        _ => return None,
    };
    Some(plain_decimal(&v, DIGITS))
}

pub const CONSTANTS: [&str; 8] = ["sqrt2", "sqrt3", "sqrt5", "sqrt2_minus_1", "sqrt2_over_2", "golden", "pi", "e"];

/// Declare `name` in `basis` with the value of the builtin constant `value_of`.
pub fn declare_builtin(basis: &mut Basis, name: &str, value_of: &str) -> Result<()> {
    let v = constant_value(value_of).ok_or_else(|| Error::UnknownConstant(value_of.to_string()))?;
    basis.declare(name, &v, true)?;
    if let Some((one, own)) = square_relation(value_of) {
        let sq = SymbolicReal::from_coords([("1".to_string(), one), (name.to_string(), own)].into_iter().filter(|(_, r)| *r != 0));
        basis.declare_product(name, name, sq)?;
    }
    Ok(())
}

/// `x² = a + b·x` for the quadratic irrationals of the catalog.
fn square_relation(value_of: &str) -> Option<(Rational, Rational)> {
    let (a, b) = match value_of {
        "sqrt2" => (q(2, 1), q(0, 1)),
        "sqrt3" => (q(3, 1), q(0, 1)),
        "sqrt5" => (q(5, 1), q(0, 1)),
        "sqrt2_over_2" => (q(1, 2), q(0, 1)),
        "sqrt2_minus_1" => (q(1, 1), q(-2, 1)),
        "golden" => (q(1, 1), q(-1, 1)),
        _ => return None,
    };
    Some((a, b))
}

/// Resolve a constant slot: a builtin name or a decimal literal.
pub fn resolve_value(s: &str) -> Result<String> {
    Ok(constant_value(s).unwrap_or_else(|| s.trim().to_string()))
}

fn expr(basis: &Basis, terms: Vec<GermTerm>) -> HardyExpr {
    HardyExpr::new(basis, terms).expect("builtin germ")
}

/// `f_1 = t - t^c`, `f_2 = t + t^c` with `c = √2/2`.
pub fn example1() -> Family {
    let mut b = Basis::new();
    declare_builtin(&mut b, "c", "sqrt2_over_2").expect("builtin constant");
    let tc = |s: i64| GermTerm::new(SymbolicReal::int(s), SymbolicReal::symbol("c"));
    let f1 = expr(&b, vec![GermTerm::power(1, 1), tc(-1)]);
    let f2 = expr(&b, vec![GermTerm::power(1, 1), tc(1)]);
    Family::new(b, vec![("f1".into(), f1), ("f2".into(), f2)])
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Basis `{α, β, αβ}` with `α = (√2-1)/4`, `β = (√3-1)/8` and their product table.
pub fn example2_basis() -> Basis {
    let mut b = Basis::new();
    let a = (sqrt(2) - 1u32) / 4u32;
    let be = (sqrt(3) - 1u32) / 8u32;
    let ab = Float::with_val(PREC, &a * &be);
    b.declare("alpha", &plain_decimal(&a, DIGITS), true).expect("alpha");
    b.declare("beta", &plain_decimal(&be, DIGITS), true).expect("beta");
    b.declare("alpha_beta", &plain_decimal(&ab, DIGITS), true).expect("alpha_beta");
    let sr = |pairs: &[(&str, Rational)]| SymbolicReal::from_coords(pairs.iter().map(|(s, r)| (s.to_string(), r.clone())));
    // 16α² + 8α = 1 and 32β² + 8β = 1
    let prods = [
        ("alpha", "alpha", sr(&[("1", q(1, 16)), ("alpha", q(-1, 2))])),
        ("beta", "beta", sr(&[("1", q(1, 32)), ("beta", q(-1, 4))])),
        ("alpha", "beta", SymbolicReal::symbol("alpha_beta")),
        ("alpha", "alpha_beta", sr(&[("beta", q(1, 16)), ("alpha_beta", q(-1, 2))])),
        ("beta", "alpha_beta", sr(&[("alpha", q(1, 32)), ("alpha_beta", q(-1, 4))])),
        (
            "alpha_beta",
            "alpha_beta",
            sr(&[("1", q(1, 512)), ("alpha", q(-1, 64)), ("beta", q(-1, 64)), ("alpha_beta", q(1, 8))]),
        ),
    ];
    for (l, r, v) in prods {
        b.declare_product(l, r, v).expect("product entry");
    }
    b
}

/// `f_1 = α^{-1} t² + t`, `f_2 = β^{-1}(t³ - αt + 1/2)`.
pub fn example2() -> Family {
    let b = example2_basis();
    let sr = |pairs: &[(&str, i64)]| SymbolicReal::from_coords(pairs.iter().map(|(s, r)| (s.to_string(), Rational::from(*r))));
    // α^{-1} = 8 + 16α, β^{-1} = 8 + 32β
    let f1 = expr(&b, vec![GermTerm::new(sr(&[("1", 8), ("alpha", 16)]), SymbolicReal::int(2)), GermTerm::power(1, 1)]);
    let f2 = expr(
        &b,
        vec![
            GermTerm::new(sr(&[("1", 8), ("beta", 32)]), SymbolicReal::int(3)),
            GermTerm::new(sr(&[("alpha", -8), ("alpha_beta", -32)]), SymbolicReal::int(1)),
            GermTerm::new(sr(&[("1", 4), ("beta", 16)]), SymbolicReal::zero()),
        ],
    );
    Family::new(b, vec![("f1".into(), f1), ("f2".into(), f2)])
}

/// `f_1 = t + √t`, `f_2 = t - √t`.
pub fn example4() -> Family {
    let b = Basis::new();
    let f1 = expr(&b, vec![GermTerm::power(1, 1), GermTerm::power(1, q(1, 2))]);
    let f2 = expr(&b, vec![GermTerm::power(1, 1), GermTerm::power(-1, q(1, 2))]);
    Family::new(b, vec![("f1".into(), f1), ("f2".into(), f2)])
}

/// `f_1 = t^{5/2}`, `f_2 = (5/2) t^{3/2} + t`.
pub fn example5() -> Family {
    let b = Basis::new();
    let f1 = expr(&b, vec![GermTerm::power(1, q(5, 2))]);
    let f2 = expr(&b, vec![GermTerm::power(q(5, 2), q(3, 2)), GermTerm::power(1, 1)]);
    Family::new(b, vec![("f1".into(), f1), ("f2".into(), f2)])
}

/// `f_1 = 2αt - 1/2`, `f_2 = 2αt + 1/2 - 2C/t`; `alpha` is a builtin name or decimal literal.
pub fn example8(alpha: &str, c: &Rational) -> Result<Family> {
    if *c <= 0 {
        return Err(Error::Precondition("C must be positive".into()));
    }
    let mut b = Basis::new();
    b.declare("alpha", &resolve_value(alpha)?, true)?;
    let two_a = SymbolicReal::term("alpha", 2);
    let f1 = HardyExpr::new(&b, vec![GermTerm::new(two_a.clone(), SymbolicReal::int(1)), GermTerm::power(q(-1, 2), 0)])?;
    let f2 = HardyExpr::new(
        &b,
        vec![
            GermTerm::new(two_a, SymbolicReal::int(1)),
            GermTerm::power(q(1, 2), 0),
            GermTerm::power(Rational::from(-2 * c.clone()), -1),
        ],
    )?;
    Ok(Family::new(b, vec![("f1".into(), f1), ("f2".into(), f2)]))
}

/// `f_i = t^{c_i}` for positive rational `c_i`.
pub fn corollary_a2(exponents: &[Rational]) -> Result<Family> {
    if exponents.is_empty() || exponents.iter().any(|c| *c <= 0) {
        return Err(Error::Precondition("exponents must be positive and non-empty".into()));
    }
    let b = Basis::new();
    let fs = exponents
        .iter()
        .enumerate()
        .map(|(i, c)| (format!("f{}", i + 1), HardyExpr::monomial(1, c.clone())))
        .collect();
    Ok(Family::new(b, fs))
}

/// `x ↦ x + 1` on two points.
pub fn two_point() -> System {
    System::cyclic(2, 1).expect("modulus 2")
}

/// Rotation by `√2 - 1` on the circle.
pub fn torus_sqrt2() -> (Basis, System) {
    let mut b = Basis::new();
    declare_builtin(&mut b, "alpha", "sqrt2_minus_1").expect("builtin constant");
    let s = System::torus(&b, &[SymbolicReal::symbol("alpha")]).expect("torus");
    (b, s)
}

/// `(x, y) ↦ (x + α, y + 2x + α)` with `α = √2 - 1`.
pub fn skew_sqrt2() -> (Basis, System) {
    let mut b = Basis::new();
    declare_builtin(&mut b, "alpha", "sqrt2_minus_1").expect("builtin constant");
    let s = System::skew(&b, &SymbolicReal::symbol("alpha")).expect("skew");
    (b, s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogKind {
    Constant,
    Family,
    System,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: CatalogKind,
    /// parameters the entry accepts
    pub slots: Vec<String>,
    pub description: String,
}

fn entry(name: &str, kind: CatalogKind, slots: &[&str], description: &str) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        kind,
        slots: slots.iter().map(|s| s.to_string()).collect(),
        description: description.into(),
    }
}

/// Catalog entries whose name or description contains `filter`; an empty filter lists everything.
pub fn list_builtins(filter: &str) -> Vec<CatalogEntry> {
    use CatalogKind::*;
    let mut all: Vec<CatalogEntry> = CONSTANTS.iter().map(|c| entry(c, Constant, &[], "builtin real constant, 600 digits")).collect();
    all.extend([
        entry("example1", Family, &[], "t - t^c, t + t^c with c = sqrt2/2; odd numbers avoid floor configurations"),
        entry("example2", Family, &[], "(1/alpha) t^2 + t, (1/beta)(t^3 - alpha t + 1/2); alpha = (sqrt2-1)/4, beta = (sqrt3-1)/8"),
        entry("example4", Family, &[], "t + sqrt t, t - sqrt t; floor parities differ off the squares"),
        entry("example5", Family, &[], "t^(5/2), (5/2) t^(3/2) + t; shifted combination obstructs the shifted pattern"),
        entry("example8", Family, &["alpha", "C"], "2 alpha t - 1/2, 2 alpha t + 1/2 - 2C/t on two points; sparse return set"),
        entry("corollaryA2", Family, &["exponents"], "t^c1, ..., t^ck for positive exponents"),
        entry("two_point", System, &[], "x -> x + 1 on Z/2"),
        entry("torus_sqrt2", System, &[], "rotation by sqrt2 - 1 on the circle"),
        entry("skew_sqrt2", System, &[], "(x, y) -> (x + a, y + 2x + a), a = sqrt2 - 1"),
    ]);
    all.into_iter().filter(|e| filter.is_empty() || e.name.contains(filter) || e.description.contains(filter)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{check_condition_inf, Verdict};

    #[test]
    fn constants_parse() {
        for c in CONSTANTS {
            let mut b = Basis::new();
            declare_builtin(&mut b, "x", c).unwrap();
        }
        assert!(constant_value("sqrt2").unwrap().starts_with("1.41421356237309504880"));
        assert!(constant_value("sqrt2_minus_1").unwrap().starts_with("0.41421356"));
    }

    #[test]
    fn example2_products_are_consistent() {
        let f = example2();
        f.basis.validate_products().unwrap();
        let v = f.functions[0].eval_f64(&f.basis, 10.0).unwrap();
        let a = (2f64.sqrt() - 1.0) / 4.0;
        assert!((v - (100.0 / a + 10.0)).abs() < 1e-9);
    }

    #[test]
    fn example2_fails_inf() {
        let f = example2();
        match check_condition_inf(&f.basis, &f.functions).unwrap() {
            Verdict::Fails(w) => {
                assert_eq!(w.residual.as_rational().map(|r| r.abs()), Some(q(1, 2)));
                assert!(w.samples.iter().all(|s| s.1 < 1e-6));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn catalog() {
        let all = list_builtins("");
        let ex8 = all.iter().find(|e| e.name == "example8").unwrap();
        assert_eq!(ex8.slots, vec!["alpha", "C"]);
        assert!(all.iter().any(|e| e.name == "corollaryA2" && e.slots == vec!["exponents"]));
        assert_eq!(list_builtins("example").len(), 5);
    }

    #[test]
    fn example8_values() {
        let f = example8("sqrt2_minus_1", &q(1, 20)).unwrap();
        let a = 2f64.sqrt() - 1.0;
        let v = f.functions[1].eval_f64(&f.basis, 10.0).unwrap();
        assert!((v - (20.0 * a + 0.5 - 0.01)).abs() < 1e-12);
        assert!(example8("sqrt2_minus_1", &q(-1, 2)).is_err());
    }
}
