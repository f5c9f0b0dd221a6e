//! Weighted averages along rounded Hardy sequences.

mod ap;
mod average;
mod multicorr;
mod partition;
mod rounding;
mod vdc;

pub use ap::{ap_decomposition_check, ApReport};
pub use average::{pool as thread_pool, segment_fold, segment_sums, weighted_avg, weighted_avg_complex, AvgPoint, ComplexAvgPoint, CorrelationReport};
pub use multicorr::{
    multicorrelation, product_limit_test, torus_alpha_monte_carlo, Multicorrelation, DEFAULT_SAMPLES, ProductLimitReport, SetSpec,
};
pub use partition::{partition_weights, PartitionReport, PartitionRow};
pub use rounding::{round_value, Rounder, RoundingMode, Tier};
pub use vdc::{vdc_check, VdcReport};

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
