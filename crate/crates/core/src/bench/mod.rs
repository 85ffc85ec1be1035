//! Measurement engine: warm-up then a fixed number of timed invocations per
//! operation, median and mean statistics in cycles, conversion to
//! milliseconds at a fixed clock, and speedup rates between backends.
//!
//! Speedups are only computed for schemes that passed
//! [`equivalence_gate`]; the [`Equivalence`] it returns is the proof.

mod campaign;
mod clock;
mod report;
mod stats;

use std::fmt;

use crate::Result;

pub use campaign::{
    bench_classical, bench_pqc, bench_pqc_interleaved, equivalence_gate, pqc_workload, CampaignConfig, Equivalence, MESSAGE_BYTES,
};
pub use clock::{TimeUnit, Timer};
pub use report::{
    render_report, render_views, speedups, views, BenchReport, Format, OpTiming, OpView, ReportView, Shape, SizeEntry, Speedups,
    CSV_HEADER,
};
pub use stats::{
    cycles_to_ms, measure, measure_interleaved, speedup_rate, to_ms, ClockHz, TimingStats, DEFAULT_CLOCK_GHZ, DEFAULT_ITERATIONS,
    WARMUP_ITERATIONS,
};

/// One prepared operation. Each call to [`Workload::invoke`] performs it once
/// on inputs fixed at preparation time.
pub struct Workload(Box<dyn FnMut() -> Result<()>>);

impl Workload {
    pub fn new(f: impl FnMut() -> Result<()> + 'static) -> Self {
        Workload(Box::new(f))
    }

    #[inline]
    pub fn invoke(&mut self) -> Result<()> {
        (self.0)()
    }
}

impl fmt::Debug for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Workload")
    }
}
