//! Weighted averages split along residue classes.

use num_complex::Complex64;
use serde::Serialize;

use super::average::weighted_avg_complex;
use crate::error::{Error, Result};
use crate::germ::{Basis, Weight};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApReport {
    #[serde(rename = "R")]
    pub r: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub full: [f64; 2],
    pub split: [f64; 2],
    pub residual: f64,
}

/// `|avg_{n ≤ RN} a(n) - (1/R) Σ_{d<R} avg_{n ≤ N} a(Rn + d)|`, all averages weighted by `w`.
pub fn ap_decomposition_check<F>(basis: &Basis, a: F, weight: &Weight, r: u64, n: u64, threads: usize) -> Result<ApReport>
where
    F: Fn(u64) -> Result<Complex64> + Sync,
{
    if r == 0 {
        return Err(Error::Precondition("R must be at least 1".into()));
    }
    let full = weighted_avg_complex(basis, &a, weight, &[r * n], threads)?[0].value();
    let mut split = Complex64::new(0.0, 0.0);
    for d in 0..r {
        split += weighted_avg_complex(basis, |k| a(r * k + d), weight, &[n], threads)?[0].value();
    }
    split /= r as f64;
    Ok(ApReport { r, n, full: [full.re, full.im], split: [split.re, split.im], residual: (full - split).norm() })
}
