//! Finite-N check of the weighted van der Corput inequality.

use num_complex::Complex64;
use serde::Serialize;

use super::Neumaier;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VdcReport {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "H")]
    pub h: u64,
    /// `‖(1/P_N) Σ p_n u(n)‖²`
    pub lhs: f64,
    /// `|(1/H) Σ_{m≤H} (1/P_N) Σ p_n ⟨u(n+m), u(n)⟩|`
    pub rhs: f64,
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// `u(n)` is a vector of a finite-dimensional Hilbert space, `p(n) ≥ 0` a weight.
pub fn vdc_check<U, P>(u: U, p: P, n: u64, h: u64) -> Result<VdcReport>
where
    U: Fn(u64) -> Vec<Complex64>,
    P: Fn(u64) -> f64,
{
    if n == 0 || h == 0 {
        return Err(Error::Precondition("N and H must be positive".into()));
    }
    let vecs: Vec<Vec<Complex64>> = (1..=n + h).map(&u).collect();
    let weights: Vec<f64> = (1..=n).map(&p).collect();
    let mut pn = Neumaier::default();
    for w in &weights {
        pn.add(*w);
    }
    let pn = pn.value();
    if pn <= 0.0 {
        return Err(Error::ZeroWeight(n));
    }
    let dim = vecs[0].len();
    let mut mean = vec![(Neumaier::default(), Neumaier::default()); dim];
    for (w, v) in weights.iter().zip(&vecs) {
        for (acc, z) in mean.iter_mut().zip(v) {
            acc.0.add(w * z.re);
            acc.1.add(w * z.im);
        }
    }
    let lhs: f64 = mean.iter().map(|(re, im)| Complex64::new(re.value(), im.value()).norm_sqr()).sum::<f64>() / (pn * pn);
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for m in 1..=h as usize {
        for (i, w) in weights.iter().enumerate() {
            let z = inner(&vecs[i + m], &vecs[i]) * *w;
            re.add(z.re);
            im.add(z.im);
        }
    }
    let rhs = Complex64::new(re.value(), im.value()).norm() / (h as f64 * pn);
    Ok(VdcReport { n, h, lhs, rhs })
}
