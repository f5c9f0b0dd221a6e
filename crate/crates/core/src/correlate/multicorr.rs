//! Multicorrelation sequences `α(n) = μ(A ∩ T^{-[f_1(n)]}A ∩ ... ∩ T^{-[f_k(n)]}A)`.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::average::{segment_sums, AvgPoint, CorrelationReport};
use super::rounding::{Rounder, RoundingMode};
use crate::error::{Error, Result};
use crate::germ::{Basis, HardyExpr, Weight};
use crate::systems::{
    birkhoff_projection, measure_intersection, preimage_box, BoxSet, ComplexSum, Observable, Phase, Point, System,
};

/// The set `A`: a subset of a cyclic group or a box.
#[derive(Clone, Debug, PartialEq)]
pub enum SetSpec {
    Cyclic(Vec<bool>),
    Box(BoxSet),
}

/// Default number of stratified samples per `n` for skew products.
pub const DEFAULT_SAMPLES: usize = 4096;

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Evaluates `α(n)` for one system, set and family.
pub struct Multicorrelation {
    sys: System,
    set: SetSpec,
    rounders: Vec<Rounder>,
    samples: usize,
    seed: u64,
}

impl Multicorrelation {
    pub fn new(basis: &Basis, sys: &System, set: &SetSpec, family: &[HardyExpr], mode: RoundingMode) -> Result<Self> {
        match (sys, set) {
            (System::CyclicRotation { modulus, .. }, SetSpec::Cyclic(s)) if s.len() as u64 == *modulus => {}
            (System::TorusRotation { alpha, .. }, SetSpec::Box(b)) if b.arcs.len() == alpha.len() => {}
            (System::QuadraticSkew { .. }, SetSpec::Box(b)) if b.arcs.len() == 2 => {}
            _ => return Err(Error::Precondition("set does not match the system".into())),
        }
        let rounders = family.iter().map(|f| Rounder::new(basis, f, mode)).collect::<Result<Vec<_>>>()?;
        Ok(Multicorrelation { sys: sys.clone(), set: set.clone(), rounders, samples: DEFAULT_SAMPLES, seed: 0 })
    }

    pub fn with_sampling(mut self, samples: usize, seed: u64) -> Self {
        self.samples = samples.max(1);
        self.seed = seed;
        self
    }

    pub fn offsets(&self, n: u64) -> Result<Vec<i128>> {
        self.rounders.iter().map(|r| r.round(n)).collect()
    }

    /// `α(n)` and its standard error (zero for the exact engines).
    pub fn alpha(&self, n: u64) -> Result<(f64, f64)> {
        let r = self.offsets(n)?;
        self.alpha_at_offsets(&r, n)
    }

    /// `α` for explicit offsets; `stream` selects the sampling stream.
    pub fn alpha_at_offsets(&self, r: &[i128], stream: u64) -> Result<(f64, f64)> {
        match (&self.sys, &self.set) {
            (System::CyclicRotation { modulus, shift }, SetSpec::Cyclic(s)) => {
                let m = *modulus as i128;
                let steps: Vec<usize> = r.iter().map(|ri| (ri.rem_euclid(m) * *shift as i128 % m) as usize).collect();
                let md = *modulus as usize;
                let count = (0..md).filter(|&x| s[x] && steps.iter().all(|&st| s[(x + st) % md])).count();
                Ok((count as f64 / md as f64, 0.0))
            }
            (System::TorusRotation { .. }, SetSpec::Box(a)) => {
                let mut boxes = vec![a.clone()];
                for ri in r {
                    boxes.push(preimage_box(&self.sys, a, *ri)?);
                }
                Ok((measure_intersection(&boxes), 0.0))
            }
            (System::QuadraticSkew { .. }, SetSpec::Box(a)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(stream);
                let g = (self.samples as f64).sqrt().ceil() as usize;
                let total = g * g;
                let mut hits = 0usize;
                for i in 0..g {
                    for j in 0..g {
                        let x = (i as f64 + unit(&mut rng)) / g as f64;
                        let y = (j as f64 + unit(&mut rng)) / g as f64;
                        if !a.contains(&[x, y]) {
                            continue;
                        }
                        let p = Point::Skew(Phase::from_f64(x), Phase::from_f64(y));
                        let mut ok = true;
                        for ri in r {
                            if !a.contains_point(&self.sys.apply_power(&p, *ri)?) {
                                ok = false;
                                break;
                            }
                        }
                        if ok {
                            hits += 1;
                        }
                    }
                }
                let p = hits as f64 / total as f64;
                Ok((p, (p * (1.0 - p) / total as f64).sqrt()))
            }
            _ => Err(Error::Precondition("set does not match the system".into())),
        }
    }

    /// Weighted average of `α(n)` on the grid.
    pub fn run(&self, basis: &Basis, weight: &Weight, grid: &[u64], threads: usize) -> Result<CorrelationReport> {
        let sums = segment_sums::<3, _>(grid, threads, |n| {
            let w = weight.increment(basis, n);
            if w == 0.0 {
                return Ok([0.0; 3]);
            }
            let (a, se) = self.alpha(n)?;
            Ok([w * a, w, (w * se) * (w * se)])
        })?;
        let mut points = Vec::with_capacity(grid.len());
        for (&n, s) in grid.iter().zip(sums) {
            if s[1] <= 0.0 {
                return Err(Error::ZeroWeight(n));
            }
            points.push(AvgPoint {
                n,
                weighted_average: s[0] / s[1],
                weight_total: s[1],
                stderr: Some(s[2].sqrt() / s[1]),
            });
        }
        Ok(CorrelationReport { weight: weight.name(), points })
    }
}

/// Weighted average of the multicorrelation sequence.
#[allow(clippy::too_many_arguments)]
pub fn multicorrelation(
    basis: &Basis,
    sys: &System,
    set: &SetSpec,
    family: &[HardyExpr],
    mode: RoundingMode,
    weight: &Weight,
    grid: &[u64],
    threads: usize,
) -> Result<CorrelationReport> {
    Multicorrelation::new(basis, sys, set, family, mode)?.run(basis, weight, grid, threads)
}

/// Monte-Carlo estimate of `μ(A ∩ T^{-r_1}A ∩ ...)` for a torus rotation.
pub fn torus_alpha_monte_carlo(sys: &System, a: &BoxSet, offsets: &[i128], samples: usize, seed: u64) -> Result<(f64, f64)> {
    let System::TorusRotation { alpha, .. } = sys else {
        return Err(Error::Precondition("Monte-Carlo check is for torus rotations".into()));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let x: Vec<Phase> = (0..alpha.len()).map(|_| Phase::from_f64(unit(&mut rng))).collect();
        let p = Point::Torus(x);
        if !a.contains_point(&p) {
            continue;
        }
        let mut ok = true;
        for r in offsets {
            if !a.contains_point(&sys.apply_power(&p, *r)?) {
                ok = false;
                break;
            }
        }
        if ok {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    Ok((p, (p * (1.0 - p) / samples as f64).sqrt().max(1.0 / samples as f64)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductLimitReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub average: [f64; 2],
    pub projection_product: [f64; 2],
    pub distance: f64,
}

/// Compare `Σ w(n) Π h_i(T^{[f_i(n)]} x) / Σ w(n)` with `Π` of the ergodic averages of `h_i`.
#[allow(clippy::too_many_arguments)]
pub fn product_limit_test(
    basis: &Basis,
    sys: &System,
    observables: &[Observable],
    family: &[HardyExpr],
    mode: RoundingMode,
    weight: &Weight,
    x: &Point,
    n: u64,
    threads: usize,
) -> Result<ProductLimitReport> {
    if observables.len() != family.len() {
        return Err(Error::Precondition("one observable per family member".into()));
    }
    let rounders = family.iter().map(|f| Rounder::new(basis, f, mode)).collect::<Result<Vec<_>>>()?;
    let sums = segment_sums::<3, _>(&[n], threads, |k| {
        let w = weight.increment(basis, k);
        if w == 0.0 {
            return Ok([0.0; 3]);
        }
        let mut z = Complex64::new(1.0, 0.0);
        for (r, h) in rounders.iter().zip(observables) {
            z *= h.eval(sys, &sys.apply_power(x, r.round(k)?)?)?;
        }
        Ok([w * z.re, w * z.im, w])
    })?;
    let s = sums[0];
    if s[2] <= 0.0 {
        return Err(Error::ZeroWeight(n));
    }
    let avg = Complex64::new(s[0] / s[2], s[1] / s[2]);
    let mut prod = ComplexSum::default();
    let mut p = Complex64::new(1.0, 0.0);
    for h in observables {
        p *= birkhoff_projection(sys, h, x, n)?;
    }
    prod.add(p);
    let pv = prod.value();
    Ok(ProductLimitReport { n, average: [avg.re, avg.im], projection_product: [pv.re, pv.im], distance: (avg - pv).norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn cyclic_engine_matches_orbit_enumeration() {
        let b = Basis::new();
        let sys = System::cyclic(12, 5).unwrap();
        let set: Vec<bool> = (0..12).map(|x| x % 3 == 0 || x == 7).collect();
        let fam = [HardyExpr::monomial(1, 2), HardyExpr::monomial(Rational::from((1, 3)), 3)];
        let mc = Multicorrelation::new(&b, &sys, &SetSpec::Cyclic(set.clone()), &fam, RoundingMode::Floor).unwrap();
        for n in 1..200u64 {
            let r = mc.offsets(n).unwrap();
            let brute = (0..12u64)
                .filter(|&x| {
                    set[x as usize]
                        && r.iter().all(|&ri| match sys.apply_power(&Point::Cyclic(x), ri).unwrap() {
                            Point::Cyclic(y) => set[y as usize],
                            _ => false,
                        })
                })
                .count() as f64
                / 12.0;
            assert_eq!(mc.alpha(n).unwrap().0, brute);
        }
    }

    #[test]
    fn linear_torus_average() {
        let b = Basis::new();
        let sys = System::torus_f64(&[2f64.sqrt() - 1.0]);
        let set = SetSpec::Box(BoxSet::interval(0.0, 0.5));
        let r = multicorrelation(&b, &sys, &set, &[HardyExpr::monomial(1, 1)], RoundingMode::Floor, &Weight::t(), &[1_000_000], 4)
            .unwrap();
        assert!((r.points[0].weighted_average - 0.25).abs() < 0.01);
    }

    #[test]
    fn skew_sampling_is_seeded() {
        let b = Basis::new();
        let mut basis = b.clone();
        let s = rug::Float::with_val(600, 2).sqrt() - 1u32;
        basis.declare("a", &crate::germ::plain_decimal(&s, 100), true).unwrap();
        let sys = System::skew(&basis, &crate::germ::SymbolicReal::symbol("a")).unwrap();
        let set = SetSpec::Box(BoxSet::new(vec![crate::systems::Arc::new(0.0, 0.5), crate::systems::Arc::new(0.0, 0.5)]));
        let mc = Multicorrelation::new(&basis, &sys, &set, &[HardyExpr::monomial(1, 1)], RoundingMode::Floor)
            .unwrap()
            .with_sampling(1024, 7);
        let (a1, se) = mc.alpha(10).unwrap();
        let (a2, _) = mc.alpha(10).unwrap();
        assert_eq!(a1, a2);
        assert!(se > 0.0 && se < 0.02);
        // product of two quarter-measure events is about 1/16
        let r = mc.run(&basis, &Weight::t(), &[2000], 2).unwrap();
        assert!((r.points[0].weighted_average - 0.0625).abs() < 0.01);
    }

    #[test]
    fn product_limit_for_characters() {
        let b = Basis::new();
        let sys = System::torus_f64(&[2f64.sqrt() - 1.0]);
        let obs = [Observable::Character(vec![1])];
        let fam = [HardyExpr::monomial(1, Rational::from((3, 2)))];
        let rep = product_limit_test(&b, &sys, &obs, &fam, RoundingMode::Floor, &Weight::t(), &sys.origin(), 100_000, 2)
            .unwrap();
        assert!(rep.distance < 0.02, "{rep:?}");
    }
}
