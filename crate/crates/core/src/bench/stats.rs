//! Timing statistics and the conversions applied to them.

use serde::{Deserialize, Serialize};

use super::clock::{TimeUnit, Timer};
use super::Workload;
use crate::{Error, Result};

/// Untimed invocations run before recording begins.
pub const WARMUP_ITERATIONS: usize = 100;
pub const DEFAULT_ITERATIONS: usize = 1000;
pub const DEFAULT_CLOCK_GHZ: f64 = 3.3;

/// Summary of the recorded samples of one operation. Fields named `*_cycles`
/// hold nanoseconds when `unit` is [`TimeUnit::Nanos`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub op_name: String,
    pub iterations: usize,
    pub unit: TimeUnit,
    pub median_cycles: f64,
    pub mean_cycles: f64,
    pub min_cycles: u64,
    pub max_cycles: u64,
}

impl TimingStats {
    /// The median of an even-sized sample is the mean of the middle pair.
    pub fn from_samples(op_name: impl Into<String>, unit: TimeUnit, samples: &[u64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("statistics need at least one sample".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2] as f64
        } else {
            (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
        };
        let sum: u128 = sorted.iter().map(|&s| s as u128).sum();
        Ok(TimingStats {
            op_name: op_name.into(),
            iterations: n,
            unit,
            median_cycles: median,
            mean_cycles: sum as f64 / n as f64,
            min_cycles: sorted[0],
            max_cycles: sorted[n - 1],
        })
    }
}

/// A positive, finite clock frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClockHz(f64);

impl ClockHz {
    pub fn new(hz: f64) -> Result<Self> {
        if hz.is_finite() && hz > 0.0 {
            Ok(ClockHz(hz))
        } else {
            Err(Error::InvalidClock(hz))
        }
    }

    pub fn from_ghz(ghz: f64) -> Result<Self> {
        Self::new(ghz * 1e9).map_err(|_| Error::InvalidClock(ghz))
    }

    pub fn hz(self) -> f64 {
        self.0
    }
}

impl Default for ClockHz {
    fn default() -> Self {
        ClockHz(DEFAULT_CLOCK_GHZ * 1e9)
    }
}

pub fn cycles_to_ms(cycles: f64, clock_hz: f64) -> Result<f64> {
    let clock = ClockHz::new(clock_hz)?;
    Ok(cycles * 1e3 / clock.hz())
}

/// Milliseconds for a raw sample statistic: cycles are converted at `clock`,
/// nanoseconds are taken as they are.
pub fn to_ms(value: f64, unit: TimeUnit, clock: ClockHz) -> f64 {
    match unit {
        TimeUnit::Cycles => value * 1e3 / clock.hz(),
        TimeUnit::Nanos => value / 1e6,
    }
}

/// Reference median over accelerated median for the same operation.
pub fn speedup_rate(reference: &TimingStats, accelerated: &TimingStats) -> Result<f64> {
    if reference.op_name != accelerated.op_name {
        return Err(Error::OperationMismatch(format!(
            "cannot compare `{}` with `{}`",
            reference.op_name, accelerated.op_name
        )));
    }
    if reference.unit != accelerated.unit {
        return Err(Error::OperationMismatch("statistics use different time units".into()));
    }
    if accelerated.median_cycles <= 0.0 {
        return Err(Error::OperationMismatch("accelerated median is zero".into()));
    }
    Ok(reference.median_cycles / accelerated.median_cycles)
}

/// Runs `warmup` untimed invocations, then records exactly `iterations`.
pub fn measure(
    op_name: impl Into<String>,
    timer: &Timer,
    work: &mut Workload,
    iterations: usize,
    warmup: usize,
) -> Result<TimingStats> {
    if iterations == 0 {
        return Err(Error::InvalidParameter("iterations must be at least 1".into()));
    }
    for _ in 0..warmup {
        work.invoke()?;
    }
    let mut samples = vec![0u64; iterations];
    for s in samples.iter_mut() {
        let start = timer.now();
        work.invoke()?;
        *s = timer.now().saturating_sub(start);
    }
    TimingStats::from_samples(op_name, timer.unit(), &samples)
}

/// Times several workloads for the same operation, alternating between them
/// every iteration so that host interference lands on all of them alike.
/// Returns one summary per workload, in order.
pub fn measure_interleaved(
    op_name: &str,
    timer: &Timer,
    works: &mut [Workload],
    iterations: usize,
    warmup: usize,
) -> Result<Vec<TimingStats>> {
    if iterations == 0 {
        return Err(Error::InvalidParameter("iterations must be at least 1".into()));
    }
    for _ in 0..warmup {
        for w in works.iter_mut() {
            w.invoke()?;
        }
    }
    let mut samples = vec![vec![0u64; iterations]; works.len()];
    for i in 0..iterations {
        for (w, s) in works.iter_mut().zip(samples.iter_mut()) {
            let start = timer.now();
            w.invoke()?;
            s[i] = timer.now().saturating_sub(start);
        }
    }
    samples.iter().map(|s| TimingStats::from_samples(op_name, timer.unit(), s)).collect()
}
