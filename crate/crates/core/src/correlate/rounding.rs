//! Certified `floor`, `ceil` and nearest-integer rounding of germ values at integers.
//!
//! Tiers, tried in order: a double-precision evaluation with a running error
//! bound; exact rational arithmetic when every term is rational at `n`; MPFR
//! interval evaluation at 64, 128, 256 and 512 decimal digits.

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::germ::{Basis, HardyExpr, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundingMode {
    /// `⌊x⌋`
    Floor,
    /// `⌈x⌉ = -⌊-x⌋`
    Ceil,
    /// `⌊x + 1/2⌋`
    Nearest,
}

impl RoundingMode {
    pub fn apply_f64(self, x: f64) -> f64 {
        match self {
            RoundingMode::Floor => x.floor(),
            RoundingMode::Ceil => -(-x).floor(),
            RoundingMode::Nearest => (x + 0.5).floor(),
        }
    }

    fn apply_rational(self, x: &Rational) -> Integer {
        match self {
            RoundingMode::Floor => x.floor_ref().into(),
            RoundingMode::Ceil => x.ceil_ref().into(),
            RoundingMode::Nearest => Rational::from(x + Rational::from((1, 2))).floor().into_numer_denom().0,
        }
    }

    /// The quantity whose floor is the rounded value, and the sign to apply afterwards.
    fn shift(self, iv: &Interval) -> (Interval, bool) {
        match self {
            RoundingMode::Floor => (iv.clone(), false),
            RoundingMode::Ceil => (iv.neg(), true),
            RoundingMode::Nearest => (iv.add(&Interval::rational(iv.prec(), &Rational::from((1, 2)))), false),
        }
    }
}

/// Which tier certified a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    Fast,
    Exact,
    Mpfr(u32),
}

const ULP: f64 = f64::EPSILON;
/// Multiplier on the accumulated relative error bound of the fast path.
const FAST_SAFETY: f64 = 4.0;
/// Decimal digit levels of the MPFR tier.
const LEVELS: [u32; 4] = [64, 128, 256, 512];

#[derive(Clone, Debug)]
struct FastTerm {
    coeff: f64,
    coeff_rel: f64,
    exp: f64,
    exp_err: f64,
    logs: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
struct ExactTerm {
    coeff: Rational,
    num: u32,
    den: u32,
    negative: bool,
}

/// Per-function rounding state; cheap to share across threads.
#[derive(Clone, Debug)]
pub struct Rounder {
    expr: HardyExpr,
    mode: RoundingMode,
    fast: Option<Vec<FastTerm>>,
    exact: Option<Vec<ExactTerm>>,
    /// coefficient and exponent enclosures per MPFR level
    levels: Vec<(u32, Vec<(Interval, Option<Interval>)>)>,
}

fn bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

impl Rounder {
    pub fn new(basis: &Basis, expr: &HardyExpr, mode: RoundingMode) -> Result<Self> {
        let mut fast = Some(Vec::new());
        let mut exact = Some(Vec::new());
        for t in expr.terms() {
            let (c, cerr) = basis.value_f64_with_error(&t.coeff)?;
            let (e, eerr) = basis.value_f64_with_error(&t.t_exp)?;
            let logs: Vec<(f64, f64)> = t
                .logs
                .iter()
                .map(|r| {
                    let f = r.to_f64();
                    (f, f.abs() * ULP)
                })
                .collect();
            if let Some(v) = fast.as_mut() {
                if c.is_finite() && c != 0.0 && e.is_finite() {
                    v.push(FastTerm { coeff: c, coeff_rel: cerr / c.abs(), exp: e, exp_err: eerr, logs });
                } else {
                    fast = None;
                }
            }
            let ex = match (t.coeff.as_rational(), t.t_exp.as_rational()) {
                (Some(c), Some(e)) if t.logs.is_empty() => {
                    let num = e.numer().clone().abs().to_u32();
                    let den = e.denom().to_u32();
                    match (num, den) {
                        (Some(num), Some(den)) if num <= 64 => {
                            Some(ExactTerm { coeff: c, num, den, negative: e < 0 })
                        }
                        _ => None,
                    }
                }
                _ => None,
            };
            match (ex, exact.as_mut()) {
                (Some(x), Some(v)) => v.push(x),
                _ => exact = None,
            }
        }
        let mut levels = Vec::new();
        for d in LEVELS {
            let p = bits(d);
            let mut v = Vec::new();
            for t in expr.terms() {
                let c = basis.enclose(&t.coeff, p)?;
                let e = if t.t_exp.is_zero() { None } else { Some(basis.enclose(&t.t_exp, p)?) };
                v.push((c, e));
            }
            levels.push((d, v));
        }
        Ok(Rounder { expr: expr.clone(), mode, fast, exact, levels })
    }

    pub fn mode(&self) -> RoundingMode {
        self.mode
    }

    pub fn expr(&self) -> &HardyExpr {
        &self.expr
    }

    /// Value and absolute error bound in double precision, when the fast path applies.
    fn fast_eval(&self, n: u64) -> Option<(f64, f64)> {
        let terms = self.fast.as_ref()?;
        if n == 0 || n > (1u64 << 53) {
            return None;
        }
        let x = n as f64;
        let l1 = x.ln();
        // iterated logs with relative errors
        let depth = terms.iter().map(|t| t.logs.len()).max().unwrap_or(0);
        let mut logs: Vec<(f64, f64)> = Vec::with_capacity(depth);
        let (mut cur, mut cur_rel) = (x, 0.0);
        for _ in 0..depth {
            let l = cur.ln();
            let abs = cur_rel + l.abs() * ULP;
            if !(l > 0.0) || abs >= l {
                return None;
            }
            logs.push((l, abs / l));
            cur = l;
            cur_rel = abs / l;
        }
        let mut sum = 0.0;
        let mut err = 0.0;
        let mut mag = 0.0;
        for t in terms {
            let mut v = t.coeff;
            let mut rel = t.coeff_rel;
            if t.exp != 0.0 {
                v *= x.powf(t.exp);
                rel += (t.exp_err + t.exp.abs() * ULP) * l1 + 2.0 * ULP;
            }
            for (i, (r, rerr)) in t.logs.iter().enumerate() {
                if *r == 0.0 {
                    continue;
                }
                let (l, lrel) = logs[i];
                v *= l.powf(*r);
                rel += r.abs() * lrel + rerr * l.ln().abs() + 2.0 * ULP;
            }
            sum += v;
            mag += v.abs();
            err += v.abs() * rel;
        }
        err += mag * ULP * terms.len() as f64;
        let err = FAST_SAFETY * err + f64::MIN_POSITIVE;
        if sum.is_finite() && err.is_finite() {
            Some((sum, err))
        } else {
            None
        }
    }

    fn fast_round(&self, n: u64) -> Option<i128> {
        let (v, err) = self.fast_eval(n)?;
        let (lo, hi) = match self.mode {
            RoundingMode::Floor => (v - err, v + err),
            RoundingMode::Ceil => (-v - err, -v + err),
            RoundingMode::Nearest => (v + 0.5 - err, v + 0.5 + err),
        };
        if hi.abs() >= 2f64.powi(62) || lo.abs() >= 2f64.powi(62) {
            return None;
        }
        let (a, b) = (lo.floor(), hi.floor());
        if a != b {
            return None;
        }
        let k = a as i128;
        Some(if self.mode == RoundingMode::Ceil { -k } else { k })
    }

    fn exact_value(&self, n: u64) -> Option<Rational> {
        let terms = self.exact.as_ref()?;
        let mut acc = Rational::new();
        for t in terms {
            let p = Integer::from(n).pow(t.num);
            let (root, rem) = p.root_rem(Integer::new(), t.den);
            if rem != 0 {
                return None;
            }
            let v = if t.negative {
                if root == 0 {
                    return None;
                }
                Rational::from((Integer::from(1), root))
            } else {
                Rational::from(root)
            };
            acc += v * &t.coeff;
        }
        Some(acc)
    }

    fn interval_at(&self, level: usize, n: u64) -> Result<Interval> {
        let (_, consts) = &self.levels[level];
        let p = consts.first().map(|c| c.0.prec()).unwrap_or(bits(LEVELS[level]));
        let t = Interval::point_u64(p, n);
        if self.expr.is_zero() {
            return Ok(Interval::zero(p));
        }
        let ln = t.ln().map_err(|_| Error::Domain(format!("germ evaluated at n = {n}")))?;
        let depth = self.expr.terms().iter().map(|x| x.logs.len()).max().unwrap_or(0);
        let mut logs = Vec::with_capacity(depth);
        let mut cur = t.clone();
        for m in 0..depth {
            let l = cur.ln().map_err(|_| Error::Domain(format!("log_{} undefined at n = {n}", m + 1)))?;
            logs.push(l.clone());
            cur = l;
        }
        let mut acc = Interval::zero(p);
        for (term, (c, e)) in self.expr.terms().iter().zip(consts) {
            let mut v = c.clone();
            if let Some(e) = e {
                v = v.mul(&ln.mul(e).exp());
            }
            for (i, r) in term.logs.iter().enumerate() {
                if *r == 0 {
                    continue;
                }
                if logs[i].sign() != Some(Ordering::Greater) {
                    return Err(Error::Domain(format!("log_{} must be positive at n = {n}", i + 1)));
                }
                v = v.mul(&logs[i].pow_rational(r)?);
            }
            acc = acc.add(&v);
        }
        Ok(acc)
    }

    /// Rounded value and the tier that certified it.
    pub fn round_with_tier(&self, n: u64) -> Result<(i128, Tier)> {
        if let Some(k) = self.fast_round(n) {
            return Ok((k, Tier::Fast));
        }
        if let Some(v) = self.exact_value(n) {
            let k = self.mode.apply_rational(&v);
            return k.to_i128().map(|k| (k, Tier::Exact)).ok_or(Error::Overflow(n));
        }
        for (level, &digits) in LEVELS.iter().enumerate() {
            let iv = self.interval_at(level, n)?;
            let (shifted, negate) = self.mode.shift(&iv);
            if let Some(k) = shifted.floor_certified() {
                let k = if negate { Integer::from(-k) } else { k };
                return k.to_i128().map(|k| (k, Tier::Mpfr(digits))).ok_or(Error::Overflow(n));
            }
        }
        Err(Error::UncertifiableRounding { n, digits: *LEVELS.last().unwrap() })
    }

    pub fn round(&self, n: u64) -> Result<i128> {
        Ok(self.round_with_tier(n)?.0)
    }

    /// Value of the germ at `n` in double precision.
    pub fn value_f64(&self, n: u64) -> f64 {
        match self.fast_eval(n) {
            Some((v, _)) => v,
            None => self.interval_at(0, n).map(|i| i.mid_f64()).unwrap_or(f64::NAN),
        }
    }

    /// Fractional part `{f(n)}` in double precision, from a certified enclosure.
    pub fn frac_f64(&self, n: u64) -> Result<f64> {
        if let Some((v, err)) = self.fast_eval(n) {
            if err < 1e-9 && v.abs() < 1e15 {
                return Ok(v - v.floor());
            }
        }
        let iv = self.interval_at(0, n)?;
        let p = iv.prec();
        let mid = rug::Float::with_val(p, &iv.lo + &iv.hi) / 2u32;
        let fl = mid.clone().floor();
        Ok(rug::Float::with_val(p, mid - fl).to_f64())
    }
}

/// Certified rounding of `f(n)`.
pub fn round_value(basis: &Basis, f: &HardyExpr, n: u64, mode: RoundingMode) -> Result<i128> {
    Rounder::new(basis, f, mode)?.round(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{GermTerm, SymbolicReal};
    use proptest::prelude::*;
    use rug::Float;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn modes_on_half_integers() {
        assert_eq!(RoundingMode::Nearest.apply_f64(2.5), 3.0);
        assert_eq!(RoundingMode::Nearest.apply_f64(-2.5), -2.0);
        assert_eq!(RoundingMode::Ceil.apply_f64(-2.5), -2.0);
        assert_eq!(RoundingMode::Floor.apply_f64(-2.5), -3.0);
    }

    #[test]
    fn exact_tier_on_perfect_squares() {
        let b = Basis::new();
        let f = HardyExpr::monomial(1, q(1, 2));
        let r = Rounder::new(&b, &f, RoundingMode::Floor).unwrap();
        for k in [3u64, 1000, 99_999] {
            let (v, tier) = r.round_with_tier(k * k).unwrap();
            assert_eq!(v, k as i128);
            assert_eq!(tier, Tier::Exact);
        }
        let c = Rounder::new(&b, &f, RoundingMode::Ceil).unwrap();
        assert_eq!(c.round(49).unwrap(), 7);
        assert_eq!(c.round(50).unwrap(), 8);
    }

    #[test]
    fn mpfr_tier_for_large_values() {
        let b = Basis::new();
        // t^3 sqrt(t) at 10^6 is 10^21: far beyond the fast path
        let f = HardyExpr::monomial(1, q(7, 2));
        let r = Rounder::new(&b, &f, RoundingMode::Floor).unwrap();
        let (v, tier) = r.round_with_tier(1_000_000).unwrap();
        assert_eq!(v, 10i128.pow(21));
        assert_eq!(tier, Tier::Exact);
        let g = HardyExpr::new(&b, vec![GermTerm::power(1, q(7, 2)), GermTerm::power(q(1, 3), 0)]).unwrap();
        let (v, tier) = Rounder::new(&b, &g, RoundingMode::Floor).unwrap().round_with_tier(1_000_001).unwrap();
        let want = Float::with_val(400, 1_000_001u64).pow(Float::with_val(400, 3.5)) + Float::with_val(400, 1) / 3u32;
        assert_eq!(v, want.floor().to_integer().unwrap().to_i128().unwrap());
        assert!(matches!(tier, Tier::Mpfr(_)));
    }

    #[test]
    fn overflow_reported() {
        let b = Basis::new();
        let f = HardyExpr::monomial(1, 10);
        let r = Rounder::new(&b, &f, RoundingMode::Floor).unwrap();
        assert_eq!(r.round(1u64 << 20).unwrap_err(), Error::Overflow(1 << 20));
    }

    #[test]
    fn symbolic_exponent() {
        let mut b = Basis::new();
        let s = Float::with_val(800, 2).sqrt();
        b.declare("sqrt2", &s.to_string_radix(10, Some(150)), true).unwrap();
        b.declare_product("sqrt2", "sqrt2", SymbolicReal::int(2)).unwrap();
        let c = SymbolicReal::term("sqrt2", q(1, 2));
        let f = HardyExpr::new(&b, vec![GermTerm::new(SymbolicReal::one(), c)]).unwrap();
        let r = Rounder::new(&b, &f, RoundingMode::Floor).unwrap();
        for n in [2u64, 10, 12345] {
            let want = (n as f64).powf(2f64.sqrt() / 2.0).floor() as i128;
            assert_eq!(r.round(n).unwrap(), want);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        // oracle: MPFR at 400 bits, independent of the tiering
        #[test]
        fn agrees_with_high_precision(n in 2u64..5_000_000, pn in 1i64..9, pd in 1i64..5, c in -7i64..8, logr in -1i64..3) {
            let b = Basis::new();
            let f = HardyExpr::new(&b, vec![
                GermTerm::power(1, q(pn, pd)).with_log(1, logr),
                GermTerm::power(q(c, 3), q(1, 3)),
            ]).unwrap();
            let x = Float::with_val(400, n);
            let v = x.clone().pow(Float::with_val(400, pn) / pd) * x.clone().ln().pow(logr as i32)
                + Float::with_val(400, c) / 3u32 * x.clone().cbrt();
            for mode in [RoundingMode::Floor, RoundingMode::Ceil, RoundingMode::Nearest] {
                let r = Rounder::new(&b, &f, mode).unwrap();
                let want = match mode {
                    RoundingMode::Floor => v.clone().floor(),
                    RoundingMode::Ceil => v.clone().ceil(),
                    RoundingMode::Nearest => (v.clone() + 0.5f64).floor(),
                };
                match r.round(n) {
                    Ok(k) => prop_assert_eq!(Integer::from(k), want.to_integer().unwrap()),
                    Err(Error::Overflow(_)) => prop_assert!(v.clone().abs() > 1e37),
                    Err(e) => prop_assert!(false, "{e}"),
                }
            }
        }
    }
}
