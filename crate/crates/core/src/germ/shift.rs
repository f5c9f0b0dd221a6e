//! Taylor expansion of a germ under an integer shift of its argument.

use rug::{Integer, Rational};

use super::basis::Basis;
use super::expr::HardyExpr;
use super::interval::Interval;
use crate::error::Result;

/// `f(t + j) = Σ_{k<order} j^k f^{(k)}(t) / k! + R(t)`.
#[derive(Clone, Debug)]
pub struct ShiftExpansion {
    pub shift: i64,
    pub order: usize,
    pub expr: HardyExpr,
    /// `f^{(order)}`, used for the remainder bound
    top: HardyExpr,
}

pub fn shift_expansion(basis: &Basis, f: &HardyExpr, shift: i64, order: usize) -> Result<ShiftExpansion> {
    let mut acc = HardyExpr::zero();
    let mut d = f.clone();
    let mut fact = Integer::from(1);
    let mut pow = Integer::from(1);
    for k in 0..order {
        if k > 0 {
            fact *= k as u64;
            pow *= shift;
        }
        let c = Rational::from((pow.clone(), fact.clone()));
        acc = acc.add(basis, &d.scale_rational(&c))?;
        d = d.derivative(basis)?;
    }
    Ok(ShiftExpansion { shift, order, expr: acc, top: d })
}

impl ShiftExpansion {
    /// Bound on `|R(t)|` from `|j|^K / K! · sup |f^{(K)}|` over `[t - |j|, t + |j|]`.
    pub fn remainder_bound(&self, basis: &Basis, t: f64) -> Result<f64> {
        let j = self.shift.unsigned_abs() as f64;
        let prec = 128;
        let lo = Interval::point_f64(prec, t - j);
        let hi = Interval::point_f64(prec, t + j);
        let sup = self.top.eval(basis, &lo.hull(&hi))?.abs_upper_f64();
        let mut fact = 1.0;
        for k in 1..=self.order {
            fact *= k as f64;
        }
        Ok(j.powi(self.order as i32) / fact * sup * (1.0 + 1e-12))
    }

    pub fn eval_f64(&self, basis: &Basis, t: f64) -> Result<f64> {
        self.expr.eval_f64(basis, t)
    }
}
