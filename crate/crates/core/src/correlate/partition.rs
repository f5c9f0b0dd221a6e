//! Blocks `K_j = {n : j-1 < g(n) ≤ j}` and the weights they carry.

use serde::Serialize;

use super::Neumaier;
use crate::error::{Error, Result};
use crate::germ::{compare, Basis, GrowthComparison, HardyExpr, Weight};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionRow {
    pub j: u64,
    /// `|K_j|`
    pub size: u64,
    /// `p_j = Σ_{n ∈ K_j} w(n)`
    pub p: f64,
    /// `P_j = Σ_{i ≤ j} p_i`
    pub cumulative: f64,
    /// `(W(g⁻¹(j+1)) - W(g⁻¹(j))) / p_j`
    pub ratio_increment: f64,
    /// `W(g⁻¹(j)) / P_j`
    pub ratio_total: f64,
    /// `p_j / P_j`
    pub ratio_last: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub rows: Vec<PartitionRow>,
}

impl PartitionReport {
    pub fn row(&self, j: u64) -> Option<&PartitionRow> {
        self.rows.iter().find(|r| r.j == j)
    }
}

/// `g⁻¹(y)` by bisection on `[1, hi]`, `g` eventually increasing.
fn inverse(basis: &Basis, g: &HardyExpr, y: f64, hi: f64) -> f64 {
    let eval = |t: f64| g.eval_f64(basis, t).unwrap_or(f64::NEG_INFINITY);
    let (mut a, mut b) = (1.0f64, hi);
    while eval(b) < y {
        b *= 2.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if eval(m) < y {
            a = m;
        } else {
            b = m;
        }
    }
    b
}

/// Partition `[1, N]` by the level sets of `g` and tabulate the four diagnostics.
///
/// Requires `log W ≺ g ≪ t`.
pub fn partition_weights(basis: &Basis, weight: &Weight, g: &HardyExpr, n: u64) -> Result<PartitionReport> {
    let log_w = HardyExpr::new(basis, vec![crate::germ::GermTerm {
        coeff: crate::germ::SymbolicReal::one(),
        t_exp: weight.log_signature(basis)?.t_exp,
        logs: weight.log_signature(basis)?.logs,
    }])?;
    if !matches!(compare(basis, g, &log_w)?, GrowthComparison::Dominates) {
        return Err(Error::Precondition(format!("g = {g} must dominate log W")));
    }
    if matches!(compare(basis, g, &HardyExpr::monomial(1, 1))?, GrowthComparison::Dominates) {
        return Err(Error::Precondition(format!("g = {g} must not grow faster than t")));
    }
    let gval = |k: u64| g.eval_f64(basis, k as f64).unwrap_or(f64::NEG_INFINITY);
    let jmax = gval(n).floor().max(0.0) as u64;
    let mut rows = Vec::new();
    let mut cum = Neumaier::default();
    let mut k = 1u64;
    // level sets are consecutive once g is increasing; earlier n with g ≤ 0 are skipped
    while k <= n && gval(k) <= 0.0 {
        k += 1;
    }
    let wfun = |t: f64| weight.eval_f64(basis, t).unwrap_or(f64::NAN);
    for j in 1..=jmax {
        let mut p = Neumaier::default();
        let mut size = 0;
        while k <= n && gval(k) <= j as f64 {
            p.add(weight.increment(basis, k));
            size += 1;
            k += 1;
        }
        cum.add(p.value());
        let gi_j = inverse(basis, g, j as f64, n as f64);
        let gi_next = inverse(basis, g, (j + 1) as f64, n as f64);
        let pv = p.value();
        let cv = cum.value();
        rows.push(PartitionRow {
            j,
            size,
            p: pv,
            cumulative: cv,
            ratio_increment: (wfun(gi_next) - wfun(gi_j)) / pv,
            ratio_total: wfun(gi_j) / cv,
            ratio_last: pv / cv,
        });
    }
    Ok(PartitionReport { n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn square_root_blocks() {
        let b = Basis::new();
        let g = HardyExpr::monomial(1, Rational::from((1, 2)));
        let r = partition_weights(&b, &Weight::t(), &g, 10_000).unwrap();
        let row = r.row(100).unwrap();
        assert!((0.99..=1.01).contains(&row.ratio_total), "{row:?}");
        assert_eq!(r.row(3).unwrap().size, 5);
    }

    #[test]
    fn identity_blocks_are_singletons() {
        let b = Basis::new();
        let r = partition_weights(&b, &Weight::t(), &HardyExpr::monomial(1, 1), 1000).unwrap();
        for row in &r.rows {
            assert_eq!(row.size, 1);
            assert!((row.p - 1.0).abs() < 1e-12);
            assert!((row.ratio_total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn slowly_growing_weight() {
        let b = Basis::new();
        let g = HardyExpr::monomial(1, Rational::from((1, 2)));
        let r = partition_weights(&b, &Weight::by_name("t/log t").unwrap(), &g, 10_000).unwrap();
        assert!(r.row(100).unwrap().ratio_last < 0.05);
    }

    #[test]
    fn sandwich_enforced() {
        let b = Basis::new();
        let g = HardyExpr::monomial(1, 2);
        assert!(partition_weights(&b, &Weight::t(), &g, 100).is_err());
        let lg = HardyExpr::new(&b, vec![crate::germ::GermTerm::power(1, 0).with_log(1, 1)]).unwrap();
        assert!(partition_weights(&b, &Weight::t(), &lg, 100).is_err());
    }
}
