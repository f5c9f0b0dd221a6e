//! Uniformity seminorms on cyclic groups, Weyl sums and joint-orbit discrepancy.

use num_complex::Complex64;
use serde::Serialize;

use crate::correlate::{segment_fold, segment_sums, Neumaier, Rounder, RoundingMode};
use crate::error::{Error, Result};
use crate::germ::{Basis, HardyExpr, Weight};
use crate::systems::{e, Phase, System};

/// A function on `Z_m` together with the rotation `x ↦ x + a`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteObservable {
    values: Vec<Complex64>,
    shift: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FiniteObservable {
    pub fn new(values: Vec<Complex64>, shift: u64) -> Result<Self> {
        let m = values.len() as u64;
        if m == 0 {
            return Err(Error::Precondition("observable needs at least one value".into()));
        }
        if gcd(shift % m, m) != 1 {
            return Err(Error::Precondition(format!("shift {shift} is not invertible modulo {m}")));
        }
        Ok(FiniteObservable { values, shift: shift % m })
    }

    pub fn real(values: &[f64], shift: u64) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect(), shift)
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    /// `T h (x) = h(x + a)`
    pub fn translate(&self) -> Self {
        let m = self.values.len();
        let a = self.shift as usize;
        FiniteObservable { values: (0..m).map(|x| self.values[(x + a) % m]).collect(), shift: self.shift }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        FiniteObservable { values: self.values.iter().map(|v| v * c).collect(), shift: self.shift }
    }
}

fn mean(v: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for z in v {
        re.add(z.re);
        im.add(z.im);
    }
    Complex64::new(re.value(), im.value()) / v.len() as f64
}

/// `|||h|||_s^{2^s}`, complex for `s = 0`.
fn power(h: &[Complex64], a: usize, s: u32) -> Complex64 {
    let m = h.len();
    match s {
        0 => mean(h),
        1 => Complex64::new(mean(h).norm_sqr(), 0.0),
        _ => {
            let mut buf = vec![Complex64::default(); m];
            let mut acc = Neumaier::default();
            for n in 0..m {
                let step = n * a % m;
                for x in 0..m {
                    buf[x] = h[x].conj() * h[(x + step) % m];
                }
                acc.add(power(&buf, a, s - 1).re);
            }
            Complex64::new(acc.value() / m as f64, 0.0)
        }
    }
}

fn root(v: Complex64, s: u32) -> f64 {
    if s == 0 {
        v.norm()
    } else {
        v.re.max(0.0).powf(1.0 / f64::from(1u32 << s))
    }
}

/// `|||h|||_s` by the recursion `|||h|||_s^{2^s} = avg_n |||h̄ · T^n h|||_{s-1}^{2^{s-1}}`.
pub fn gowers_seminorm(h: &FiniteObservable, s: u32) -> f64 {
    root(power(&h.values, h.shift as usize, s), s)
}

/// `|||h|||_s` as the average of `Π_ω C^{s-|ω|} h(x + (ω·n) a)` over all `x` and `n ∈ Z_m^s`.
pub fn gowers_box_oracle(h: &FiniteObservable, s: u32) -> f64 {
    let m = h.values.len();
    let a = h.shift as usize;
    if s == 0 {
        return mean(&h.values).norm();
    }
    let total = m.pow(s + 1);
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    let mut ns = vec![0usize; s as usize];
    for idx in 0..total {
        let x = idx % m;
        let mut r = idx / m;
        for n in ns.iter_mut() {
            *n = r % m;
            r /= m;
        }
        let mut prod = Complex64::new(1.0, 0.0);
        for omega in 0u32..(1 << s) {
            let shift: usize = (0..s as usize).filter(|i| omega >> i & 1 == 1).map(|i| ns[i]).sum::<usize>() * a;
            let v = h.values[(x + shift) % m];
            prod *= if (s - omega.count_ones()) % 2 == 1 { v.conj() } else { v };
        }
        re.add(prod.re);
        im.add(prod.im);
    }
    root(Complex64::new(re.value(), im.value()) / total as f64, s)
}

/// Weighted Weyl sums of a sequence mod 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub h_max: u32,
    /// `|(1/W(N)) Σ w(n) e(h x_n)|` for `h = 1..=H_max`
    pub per_frequency: Vec<f64>,
    pub max: f64,
    pub argmax: u32,
}

/// `max_{1 ≤ |h| ≤ H_max} |Σ w(n) e(h x_n)| / Σ w(n)`; negative `h` are conjugates.
pub fn weyl_discrepancy<X>(basis: &Basis, x: X, weight: &Weight, n: u64, h_max: u32, threads: usize) -> Result<DiscrepancyReport>
where
    X: Fn(u64) -> Result<f64> + Sync,
{
    if h_max == 0 {
        return Err(Error::Precondition("H_max must be at least 1".into()));
    }
    let hm = h_max as usize;
    let sums = segment_fold(
        &[n],
        threads,
        || vec![Neumaier::default(); 2 * hm + 1],
        |acc, k| {
            let w = weight.increment(basis, k);
            if w == 0.0 {
                return Ok(());
            }
            let xk = x(k)?;
            for h in 1..=hm {
                let z = e((h as f64 * xk).fract());
                acc[2 * h - 2].add(w * z.re);
                acc[2 * h - 1].add(w * z.im);
            }
            acc[2 * hm].add(w);
            Ok(())
        },
        |total, part| {
            for (t, p) in total.iter_mut().zip(part) {
                t.add(p.value());
            }
        },
        |total| total.iter().map(|t| t.value()).collect::<Vec<f64>>(),
    )?;
    let s = &sums[0];
    let wt = s[2 * hm];
    if wt <= 0.0 {
        return Err(Error::ZeroWeight(n));
    }
    let per: Vec<f64> = (0..hm).map(|i| Complex64::new(s[2 * i], s[2 * i + 1]).norm() / wt).collect();
    let (argmax, max) = per.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    Ok(DiscrepancyReport { n, h_max, per_frequency: per, max, argmax: argmax as u32 + 1 })
}

/// Dyadic box levels used by the joint-orbit test (side `2^-level`).
pub const BOX_LEVELS: u32 = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointOrbitReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub dimension: usize,
    /// `max_B |ν_N(B) - |B||` over dyadic boxes of side `2^-level`, for `level = 1..=4`
    pub box_discrepancy: Vec<f64>,
    pub max: f64,
    /// smallest sup-distance of `([f_1(n)]α, ..., [f_k(n)]α)` to the origin
    pub min_identity_distance: f64,
    pub argmin_n: u64,
}

struct JointAcc {
    cells: Vec<Vec<f64>>,
    weight: Neumaier,
    best: (f64, u64),
}

/// Weighted distribution of `(T^{[f_1(n)]}0, ..., T^{[f_k(n)]}0)` on the product torus against Haar measure.
#[allow(clippy::too_many_arguments)]
pub fn joint_orbit_discrepancy(
    basis: &Basis,
    sys: &System,
    family: &[HardyExpr],
    mode: RoundingMode,
    weight: &Weight,
    n: u64,
    threads: usize,
) -> Result<JointOrbitReport> {
    let System::TorusRotation { alpha, .. } = sys else {
        return Err(Error::Precondition("joint orbit test needs a torus rotation".into()));
    };
    let dim = alpha.len() * family.len();
    if dim == 0 || dim > 4 {
        return Err(Error::Precondition(format!("product dimension {dim} must be between 1 and 4")));
    }
    let rounders = family.iter().map(|f| Rounder::new(basis, f, mode)).collect::<Result<Vec<_>>>()?;
    let sizes: Vec<usize> = (1..=BOX_LEVELS).map(|l| 1usize << (l as usize * dim)).collect();
    let res = segment_fold(
        &[n],
        threads,
        || JointAcc { cells: sizes.iter().map(|&s| vec![0.0; s]).collect(), weight: Neumaier::default(), best: (f64::INFINITY, 0) },
        |acc, k| {
            let mut coords: Vec<Phase> = Vec::with_capacity(dim);
            for r in &rounders {
                let m = r.round(k)?;
                coords.extend(alpha.iter().map(|a| a.mul_int(m)));
            }
            let dist = coords.iter().map(|p| p.norm()).fold(0.0, f64::max);
            if dist < acc.best.0 {
                acc.best = (dist, k);
            }
            let w = weight.increment(basis, k);
            if w == 0.0 {
                return Ok(());
            }
            acc.weight.add(w);
            let top: Vec<usize> = coords.iter().map(|p| (p.0 >> 256 - BOX_LEVELS as usize).as_limbs()[0] as usize).collect();
            for (li, cells) in acc.cells.iter_mut().enumerate() {
                let l = li + 1;
                let idx = top.iter().fold(0usize, |i, t| (i << l) | (t >> (BOX_LEVELS as usize - l)));
                cells[idx] += w;
            }
            Ok(())
        },
        |total, part| {
            for (t, p) in total.cells.iter_mut().zip(part.cells) {
                for (a, b) in t.iter_mut().zip(p) {
                    *a += b;
                }
            }
            total.weight.add(part.weight.value());
            if part.best.0 < total.best.0 {
                total.best = part.best;
            }
        },
        |total| {
            let wt = total.weight.value();
            let disc: Vec<f64> = total
                .cells
                .iter()
                .map(|cells| {
                    let vol = 1.0 / cells.len() as f64;
                    cells.iter().map(|c| (c / wt - vol).abs()).fold(0.0, f64::max)
                })
                .collect();
            (wt, disc, total.best)
        },
    )?;
    let (wt, disc, best) = res.into_iter().next().expect("one grid point");
    if wt <= 0.0 {
        return Err(Error::ZeroWeight(n));
    }
    let max = disc.iter().cloned().fold(0.0, f64::max);
    Ok(JointOrbitReport { n, dimension: dim, box_discrepancy: disc, max, min_identity_distance: best.0, argmin_n: best.1 })
}

/// `Σ w(n) a(n) / Σ w(n)` for a real sequence at a single `N`; used by the examples.
pub fn weighted_mean<F>(basis: &Basis, a: F, weight: &Weight, n: u64, threads: usize) -> Result<f64>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    let s = segment_sums::<2, _>(&[n], threads, |k| {
        let w = weight.increment(basis, k);
        Ok(if w == 0.0 { [0.0; 2] } else { [w * a(k)?, w] })
    })?[0];
    if s[1] <= 0.0 {
        return Err(Error::ZeroWeight(n));
    }
    Ok(s[0] / s[1])
}
