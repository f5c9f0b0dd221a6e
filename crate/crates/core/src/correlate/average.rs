//! Weighted averages `Σ_{n≤N} w(n) a(n) / Σ_{n≤N} w(n)` on a grid of `N`.
//!
//! The range `[1, N_max]` is cut at multiples of 2^16 and at grid points.
//! Segments are summed independently, possibly in parallel, and reduced in
//! ascending order, so the result does not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::Neumaier;
use crate::error::{Error, Result};
use crate::germ::{Basis, Weight};

const SEGMENT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvgPoint {
    #[serde(rename = "N")]
    pub n: u64,
    pub weighted_average: f64,
    pub weight_total: f64,
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexAvgPoint {
    #[serde(rename = "N")]
    pub n: u64,
    pub re: f64,
    pub im: f64,
    pub weight_total: f64,
}

impl ComplexAvgPoint {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Averages on the grid, with the weight used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub weight: String,
    pub points: Vec<AvgPoint>,
}

fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("grid must be a non-empty increasing list of positive integers".into()));
    }
    Ok(())
}

fn segments(grid: &[u64]) -> Vec<(u64, u64)> {
    let n_max = *grid.last().unwrap();
    let mut cuts: Vec<u64> = (1..).map(|k| k * SEGMENT).take_while(|&c| c < n_max).collect();
    cuts.extend_from_slice(grid);
    cuts.sort_unstable();
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len());
    let mut start = 1;
    for c in cuts {
        out.push((start, c));
        start = c + 1;
    }
    out
}

/// Dedicated worker pool with `threads` workers (at least one).
pub fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))
}

/// Folds `step` over each segment (in parallel), then merges the segment
/// accumulators in ascending order, taking a snapshot at every grid point.
pub fn segment_fold<A, R, I, S, M, P>(grid: &[u64], threads: usize, init: I, step: S, merge: M, snapshot: P) -> Result<Vec<R>>
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, u64) -> Result<()> + Sync,
    M: Fn(&mut A, A),
    P: Fn(&A) -> R,
{
    check_grid(grid)?;
    let segs = segments(grid);
    let partial: Vec<Result<A>> = pool(threads)?.install(|| {
        segs.par_iter()
            .map(|&(a, b)| {
                let mut acc = init();
                for n in a..=b {
                    step(&mut acc, n)?;
                }
                Ok(acc)
            })
            .collect()
    });
    let mut total = init();
    let mut out = Vec::with_capacity(grid.len());
    let mut gi = 0;
    for ((_, b), part) in segs.iter().zip(partial) {
        merge(&mut total, part?);
        if gi < grid.len() && *b == grid[gi] {
            out.push(snapshot(&total));
            gi += 1;
        }
    }
    Ok(out)
}

/// Cumulative compensated sums of a vector-valued sequence at each grid point.
pub fn segment_sums<const K: usize, F>(grid: &[u64], threads: usize, f: F) -> Result<Vec<[f64; K]>>
where
    F: Fn(u64) -> Result<[f64; K]> + Sync,
{
    segment_fold(
        grid,
        threads,
        || [Neumaier::default(); K],
        |acc, n| {
            for (s, x) in acc.iter_mut().zip(f(n)?) {
                s.add(x);
            }
            Ok(())
        },
        |total, part| {
            for (t, p) in total.iter_mut().zip(part) {
                t.add(p.value());
            }
        },
        |total| total.map(|t| t.value()),
    )
}

/// Weighted average of a real sequence with `w(n) = max(0, W(n+1) - W(n))`.
pub fn weighted_avg<F>(basis: &Basis, a: F, weight: &Weight, grid: &[u64], threads: usize) -> Result<CorrelationReport>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    let sums = segment_sums::<2, _>(grid, threads, |n| {
        let w = weight.increment(basis, n);
        if w == 0.0 {
            return Ok([0.0, 0.0]);
        }
        Ok([w * a(n)?, w])
    })?;
    let mut points = Vec::with_capacity(grid.len());
    for (&n, s) in grid.iter().zip(sums) {
        if s[1] <= 0.0 {
            return Err(Error::ZeroWeight(n));
        }
        points.push(AvgPoint { n, weighted_average: s[0] / s[1], weight_total: s[1], stderr: None });
    }
    Ok(CorrelationReport { weight: weight.name(), points })
}

/// Weighted average of a complex sequence.
pub fn weighted_avg_complex<F>(
    basis: &Basis,
    a: F,
    weight: &Weight,
    grid: &[u64],
    threads: usize,
) -> Result<Vec<ComplexAvgPoint>>
where
    F: Fn(u64) -> Result<Complex64> + Sync,
{
    let sums = segment_sums::<3, _>(grid, threads, |n| {
        let w = weight.increment(basis, n);
        if w == 0.0 {
            return Ok([0.0; 3]);
        }
        let z = a(n)?;
        Ok([w * z.re, w * z.im, w])
    })?;
    grid.iter()
        .zip(sums)
        .map(|(&n, s)| {
            if s[2] <= 0.0 {
                Err(Error::ZeroWeight(n))
            } else {
                Ok(ComplexAvgPoint { n, re: s[0] / s[2], im: s[1] / s[2], weight_total: s[2] })
            }
        })
        .collect()
}
