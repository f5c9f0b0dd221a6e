//! Closed intervals of MPFR floats with outward rounding.

use rug::float::Round;
use rug::{Float, Integer, Rational};
use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Interval {
    pub lo: Float,
    pub hi: Float,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

impl Interval {
    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    pub fn point_int(prec: u32, v: &Integer) -> Self {
        Interval { lo: down(prec, v), hi: up(prec, v) }
    }

    pub fn point_u64(prec: u32, v: u64) -> Self {
        Interval { lo: down(prec, v), hi: up(prec, v) }
    }

    pub fn point_f64(prec: u32, v: f64) -> Self {
        Interval { lo: down(prec, v), hi: up(prec, v) }
    }

    pub fn rational(prec: u32, q: &Rational) -> Self {
        Interval { lo: down(prec, q), hi: up(prec, q) }
    }

    /// Decimal literal, widened by `err` on both sides.
    pub fn decimal(prec: u32, s: &str, err: &Rational) -> Result<Self> {
        let parse = || Float::parse(s).map_err(|e| Error::Schema(format!("bad decimal `{s}`: {e}")));
        let lo = down(prec, parse()?);
        let hi = up(prec, parse()?);
        let e = Interval::rational(prec, err);
        Ok(Interval { lo: down(prec, &lo - &e.hi), hi: up(prec, &hi + &e.hi) })
    }

    pub fn zero(prec: u32) -> Self {
        Interval::point_u64(prec, 0)
    }

    pub fn one(prec: u32) -> Self {
        Interval::point_u64(prec, 1)
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: down(p, &self.lo + &o.lo), hi: up(p, &self.hi + &o.hi) }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        Interval { lo: down(p, &self.lo - &o.hi), hi: up(p, &self.hi - &o.lo) }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: Float::with_val(self.prec(), -&self.hi), hi: Float::with_val(self.prec(), -&self.lo) }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec().max(o.prec());
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let l = down(p, a * b);
            let h = up(p, a * b);
            lo = Some(match lo {
                Some(x) if x <= l => x,
                _ => l,
            });
            hi = Some(match hi {
                Some(x) if x >= h => x,
                _ => h,
            });
        }
        Interval { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    pub fn mul_rational(&self, q: &Rational) -> Interval {
        self.mul(&Interval::rational(self.prec(), q))
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::PrecisionExhausted("division by an interval containing zero".into()));
        }
        let p = self.prec();
        let one = Float::with_val(p, 1);
        Ok(Interval { lo: down(p, &one / &self.hi), hi: up(p, &one / &self.lo) })
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        Ok(self.mul(&o.recip()?))
    }

    /// Natural logarithm; requires a strictly positive interval.
    pub fn ln(&self) -> Result<Interval> {
        if self.lo.cmp0() != Some(Ordering::Greater) {
            return Err(Error::Domain("logarithm of a non-positive quantity".into()));
        }
        let p = self.prec();
        Ok(Interval { lo: down(p, self.lo.ln_ref()), hi: up(p, self.hi.ln_ref()) })
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        Interval { lo: down(p, self.lo.exp_ref()), hi: up(p, self.hi.exp_ref()) }
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo.cmp0() == Some(Ordering::Less) {
            return Err(Error::Domain("square root of a negative quantity".into()));
        }
        let p = self.prec();
        Ok(Interval { lo: down(p, self.lo.sqrt_ref()), hi: up(p, self.hi.sqrt_ref()) })
    }

    /// `self^e` for a strictly positive base.
    pub fn pow(&self, e: &Interval) -> Result<Interval> {
        Ok(self.ln()?.mul(e).exp())
    }

    /// `self^q` for a strictly positive base and rational exponent.
    pub fn pow_rational(&self, q: &Rational) -> Result<Interval> {
        if *q.denom() == 1 {
            if let Some(k) = q.numer().to_i32() {
                return self.powi(k);
            }
        }
        self.pow(&Interval::rational(self.prec(), q))
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, k: i32) -> Result<Interval> {
        let mut acc = Interval::one(self.prec());
        let mut base = self.clone();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        // even powers of intervals straddling zero: clamp at zero
        if k % 2 == 0 && self.contains_zero() && acc.lo.cmp0() == Some(Ordering::Less) {
            acc.lo = Float::with_val(acc.prec(), 0);
        }
        if k < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.cmp0() != Some(Ordering::Greater) && self.hi.cmp0() != Some(Ordering::Less)
    }

    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64_round(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        let p = self.prec();
        let m: Float = Float::with_val(p, &self.lo + &self.hi) / 2u32;
        m.to_f64()
    }

    /// Sign when certified.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.cmp0() == Some(Ordering::Greater) {
            Some(Ordering::Greater)
        } else if self.hi.cmp0() == Some(Ordering::Less) {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified ordering of two intervals, `None` when they overlap.
    pub fn cmp_certified(&self, o: &Interval) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// `floor` when both endpoints agree.
    pub fn floor_certified(&self) -> Option<Integer> {
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return None;
        }
        let a = self.lo.to_integer_round(Round::Down)?.0;
        let b = self.hi.to_integer_round(Round::Down)?.0;
        if a == b {
            Some(a)
        } else {
            None
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, o: &Interval) -> Interval {
        let lo = if self.lo <= o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi >= o.hi { self.hi.clone() } else { o.hi.clone() };
        Interval { lo, hi }
    }

    pub fn abs_upper_f64(&self) -> f64 {
        let a = self.lo.to_f64_round(Round::Up).abs();
        let b = self.hi.to_f64_round(Round::Up).abs();
        let a2 = self.lo.to_f64_round(Round::Down).abs();
        a.max(b).max(a2)
    }
}
