//! Rotations and skew products on tori, cyclic groups, boxes and observables.
//!
//! Points of the circle are 256-bit fixed-point fractions. Adding a phase or
//! multiplying it by an integer wraps modulo one, so closed forms for `T^m`
//! hold exactly in this arithmetic; the only error is the initial rounding of
//! the rotation numbers.

use num_complex::Complex64;
use rug::float::Round;
use rug::{Float, Integer};
use ruint::aliases::U256;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::germ::{Basis, SymbolicReal};

/// Element of `R/Z` as `k / 2^256`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(pub U256);

const TWO_POW_64: f64 = 18446744073709551616.0;

impl Phase {
    pub const ZERO: Phase = Phase(U256::ZERO);

    /// Nearest representable phase to `x mod 1`.
    pub fn from_f64(x: f64) -> Phase {
        let f = x.rem_euclid(1.0);
        let v = Float::with_val(256, f) << 256u32;
        Phase::from_integer(&v.to_integer_round(Round::Down).unwrap().0)
    }

    fn from_integer(k: &Integer) -> Phase {
        let modulus = Integer::from(1) << 256u32;
        let r = Integer::from(k % &modulus);
        let r = if r < 0 { r + &modulus } else { r };
        let mut limbs = [0u64; 4];
        for (i, l) in limbs.iter_mut().enumerate() {
            *l = Integer::from(&r >> (64 * i as u32)).to_u64_wrapping();
        }
        Phase(U256::from_limbs(limbs))
    }

    /// `x mod 1` for a symbolic real, with error at most the decimal error of its constants plus `2^-256`.
    pub fn from_symbolic(basis: &Basis, x: &SymbolicReal) -> Result<Phase> {
        let prec = 1024;
        let v = basis.float(x, prec)?;
        let fl = v.clone().floor();
        let frac = Float::with_val(prec, &v - &fl) << 256u32;
        Ok(Phase::from_integer(&frac.to_integer_round(Round::Down).unwrap().0))
    }

    pub fn to_f64(self) -> f64 {
        let l = self.0.as_limbs();
        (l[3] as f64 + l[2] as f64 / TWO_POW_64) / TWO_POW_64
    }

    pub fn add(self, o: Phase) -> Phase {
        Phase(self.0.wrapping_add(o.0))
    }

    pub fn sub(self, o: Phase) -> Phase {
        Phase(self.0.wrapping_sub(o.0))
    }

    pub fn neg(self) -> Phase {
        Phase(self.0.wrapping_neg())
    }

    pub fn mul_int(self, m: i128) -> Phase {
        let p = Phase(self.0.wrapping_mul(U256::from(m.unsigned_abs())));
        if m < 0 {
            p.neg()
        } else {
            p
        }
    }

    /// Distance to the nearest integer.
    pub fn norm(self) -> f64 {
        let x = self.to_f64();
        x.min(1.0 - x)
    }
}

fn u256_of_i128(m: i128) -> U256 {
    let u = U256::from(m.unsigned_abs());
    if m < 0 {
        u.wrapping_neg()
    } else {
        u
    }
}

/// A measure-preserving system with an exact closed form for its iterates.
#[derive(Clone, Debug, PartialEq)]
pub enum System {
    /// `x ↦ x + a` on `Z/mZ`
    CyclicRotation { modulus: u64, shift: u64 },
    /// `x ↦ x + α` on `T^d`
    TorusRotation { alpha: Vec<Phase>, alpha_err: f64 },
    /// `(x, y) ↦ (x + α, y + 2x + α)` on `T^2`
    QuadraticSkew { alpha: Phase, alpha_err: f64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Cyclic(u64),
    Torus(Vec<Phase>),
    Skew(Phase, Phase),
}

impl System {
    pub fn cyclic(modulus: u64, shift: u64) -> Result<System> {
        if modulus == 0 {
            return Err(Error::Precondition("modulus must be positive".into()));
        }
        Ok(System::CyclicRotation { modulus, shift: shift % modulus })
    }

    pub fn torus(basis: &Basis, alpha: &[SymbolicReal]) -> Result<System> {
        if alpha.is_empty() {
            return Err(Error::Precondition("torus dimension must be positive".into()));
        }
        let mut ph = Vec::new();
        let mut err: f64 = 0.0;
        for a in alpha {
            ph.push(Phase::from_symbolic(basis, a)?);
            err = err.max(constant_error(basis, a));
        }
        Ok(System::TorusRotation { alpha: ph, alpha_err: err })
    }

    /// Torus rotation from double-precision angles, treated as exact.
    pub fn torus_f64(alpha: &[f64]) -> System {
        System::TorusRotation { alpha: alpha.iter().map(|&a| Phase::from_f64(a)).collect(), alpha_err: 0.0 }
    }

    pub fn skew(basis: &Basis, alpha: &SymbolicReal) -> Result<System> {
        Ok(System::QuadraticSkew { alpha: Phase::from_symbolic(basis, alpha)?, alpha_err: constant_error(basis, alpha) })
    }

    pub fn dimension(&self) -> usize {
        match self {
            System::CyclicRotation { .. } => 1,
            System::TorusRotation { alpha, .. } => alpha.len(),
            System::QuadraticSkew { .. } => 2,
        }
    }

    pub fn origin(&self) -> Point {
        match self {
            System::CyclicRotation { .. } => Point::Cyclic(0),
            System::TorusRotation { alpha, .. } => Point::Torus(vec![Phase::ZERO; alpha.len()]),
            System::QuadraticSkew { .. } => Point::Skew(Phase::ZERO, Phase::ZERO),
        }
    }

    /// `T^m x` by closed form.
    pub fn apply_power(&self, x: &Point, m: i128) -> Result<Point> {
        Ok(match (self, x) {
            (System::CyclicRotation { modulus, shift }, Point::Cyclic(v)) => {
                let md = *modulus as i128;
                let r = ((m.rem_euclid(md)) * (*shift as i128) + *v as i128).rem_euclid(md);
                Point::Cyclic(r as u64)
            }
            (System::TorusRotation { alpha, .. }, Point::Torus(v)) if v.len() == alpha.len() => {
                Point::Torus(v.iter().zip(alpha).map(|(x, a)| x.add(a.mul_int(m))).collect())
            }
            (System::QuadraticSkew { alpha, .. }, Point::Skew(x, y)) => {
                let mu = u256_of_i128(m);
                let x2 = x.add(alpha.mul_int(m));
                let y2 = y
                    .add(Phase(x.0.wrapping_mul(mu.wrapping_mul(U256::from(2u8)))))
                    .add(Phase(alpha.0.wrapping_mul(mu.wrapping_mul(mu))));
                Point::Skew(x2, y2)
            }
            _ => return Err(Error::Precondition("point does not belong to the system".into())),
        })
    }

    /// One step of the map.
    pub fn step(&self, x: &Point) -> Point {
        self.apply_power(x, 1).expect("point of this system")
    }

    /// Bound on the coordinate error of `T^m x` caused by rounding the rotation numbers.
    pub fn position_error(&self, m: i128) -> f64 {
        let a = m.unsigned_abs() as f64;
        match self {
            System::CyclicRotation { .. } => 0.0,
            System::TorusRotation { alpha_err, .. } => a * (alpha_err + 2f64.powi(-256)),
            System::QuadraticSkew { alpha_err, .. } => a * a * (alpha_err + 2f64.powi(-256)),
        }
    }

    /// Normalised measure of a subset of a cyclic group.
    pub fn cyclic_measure(&self, set: &[bool]) -> f64 {
        set.iter().filter(|b| **b).count() as f64 / set.len() as f64
    }
}

fn constant_error(basis: &Basis, x: &SymbolicReal) -> f64 {
    x.coords()
        .iter()
        .map(|(s, q)| basis.symbol_error(s).to_f64() * q.to_f64().abs())
        .sum()
}

/// Arc `[start, start + len)` of the circle, possibly wrapping through zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub len: f64,
}

impl Arc {
    /// `[u, v)` with `u, v ∈ [0, 1]`; `v < u` wraps, `[0, 1)` is the whole circle.
    pub fn new(u: f64, v: f64) -> Arc {
        let len = if v >= u { (v - u).min(1.0) } else { v - u + 1.0 };
        Arc { start: u.rem_euclid(1.0), len }
    }

    pub fn end(&self) -> f64 {
        (self.start + self.len).rem_euclid(1.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.start).rem_euclid(1.0) < self.len
    }

    pub fn shifted(&self, by: f64) -> Arc {
        Arc { start: (self.start + by).rem_euclid(1.0), len: self.len }
    }

    /// Disjoint pieces inside `[0, 1)`.
    fn pieces(&self) -> Vec<(f64, f64)> {
        if self.len >= 1.0 {
            return vec![(0.0, 1.0)];
        }
        let e = self.start + self.len;
        if e <= 1.0 {
            vec![(self.start, e)]
        } else {
            vec![(0.0, e - 1.0), (self.start, 1.0)]
        }
    }
}

/// Product of arcs, one per coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxSet {
    pub arcs: Vec<Arc>,
}

impl BoxSet {
    pub fn new(arcs: Vec<Arc>) -> Self {
        BoxSet { arcs }
    }

    pub fn interval(u: f64, v: f64) -> Self {
        BoxSet { arcs: vec![Arc::new(u, v)] }
    }

    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|a| a.len).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.arcs.iter().zip(x).all(|(a, v)| a.contains(*v))
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        match p {
            Point::Torus(v) => self.arcs.iter().zip(v).all(|(a, x)| a.contains(x.to_f64())),
            Point::Skew(x, y) => {
                self.arcs.len() == 2 && self.arcs[0].contains(x.to_f64()) && self.arcs[1].contains(y.to_f64())
            }
            Point::Cyclic(_) => false,
        }
    }
}

/// `T^{-m} A` for a torus rotation, as a translated box.
pub fn preimage_box(sys: &System, a: &BoxSet, m: i128) -> Result<BoxSet> {
    match sys {
        System::TorusRotation { alpha, .. } => {
            if alpha.len() != a.arcs.len() {
                return Err(Error::Precondition("box dimension does not match the torus".into()));
            }
            let arcs = a.arcs.iter().zip(alpha).map(|(arc, al)| arc.shifted(al.mul_int(m).neg().to_f64())).collect();
            Ok(BoxSet { arcs })
        }
        _ => Err(Error::Precondition("preimages of boxes are boxes only for torus rotations".into())),
    }
}

fn intersect_lists(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(x0, x1) in a {
        for &(y0, y1) in b {
            let lo = x0.max(y0);
            let hi = x1.min(y1);
            if hi > lo {
                out.push((lo, hi));
            }
        }
    }
    out
}

/// Haar measure of an intersection of boxes, computed coordinate by coordinate.
pub fn measure_intersection(boxes: &[BoxSet]) -> f64 {
    let Some(first) = boxes.first() else { return 1.0 };
    let d = first.arcs.len();
    let mut total = 1.0;
    for c in 0..d {
        let mut cur = first.arcs[c].pieces();
        for b in &boxes[1..] {
            cur = intersect_lists(&cur, &b.arcs[c].pieces());
            if cur.is_empty() {
                return 0.0;
            }
        }
        total *= cur.iter().map(|(l, h)| h - l).sum::<f64>();
    }
    total
}

/// Bounded function on the phase space.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    /// `e(h · x)`; on `Z/mZ` this is `e(h x / m)`
    Character(Vec<i64>),
    BoxIndicator(BoxSet),
    /// values on `Z/mZ`
    Tabulated(Vec<Complex64>),
}

pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x)
}

impl Observable {
    pub fn eval(&self, sys: &System, p: &Point) -> Result<Complex64> {
        Ok(match (self, p) {
            (Observable::Character(h), Point::Cyclic(x)) => {
                let System::CyclicRotation { modulus, .. } = sys else { unreachable!() };
                let k = (h.first().copied().unwrap_or(0) as i128 * *x as i128).rem_euclid(*modulus as i128);
                e(k as f64 / *modulus as f64)
            }
            (Observable::Character(h), Point::Torus(v)) => {
                let s = h.iter().zip(v).fold(Phase::ZERO, |acc, (hi, x)| acc.add(x.mul_int(*hi as i128)));
                e(s.to_f64())
            }
            (Observable::Character(h), Point::Skew(x, y)) => {
                let s = x.mul_int(h.first().copied().unwrap_or(0) as i128)
                    .add(y.mul_int(h.get(1).copied().unwrap_or(0) as i128));
                e(s.to_f64())
            }
            (Observable::BoxIndicator(b), Point::Cyclic(x)) => {
                let System::CyclicRotation { modulus, .. } = sys else { unreachable!() };
                Complex64::new(if b.contains(&[*x as f64 / *modulus as f64]) { 1.0 } else { 0.0 }, 0.0)
            }
            (Observable::BoxIndicator(b), _) => Complex64::new(if b.contains_point(p) { 1.0 } else { 0.0 }, 0.0),
            (Observable::Tabulated(t), Point::Cyclic(x)) => t[*x as usize % t.len()],
            (Observable::Tabulated(_), _) => {
                return Err(Error::Precondition("tabulated observables live on cyclic groups".into()))
            }
        })
    }
}

/// Compensated complex sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: crate::correlate::Neumaier,
    im: crate::correlate::Neumaier,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `(1/N) Σ_{n=1}^{N} h(T^n x)`.
pub fn birkhoff_projection(sys: &System, h: &Observable, x: &Point, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    let mut acc = ComplexSum::default();
    let mut p = x.clone();
    for _ in 0..n {
        p = sys.step(&p);
        acc.add(h.eval(sys, &p)?);
    }
    Ok(acc.value() / n as f64)
}
