//! Time sources: the x86 time-stamp counter when present, otherwise a
//! monotonic nanosecond clock.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

/// What a raw sample counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    Cycles,
    Nanos,
}

impl TimeUnit {
    pub fn as_str(self) -> &'static str {
        match self {
            TimeUnit::Cycles => "cycles",
            TimeUnit::Nanos => "nanos",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Timer {
    unit: TimeUnit,
    origin: Instant,
}

impl Timer {
    /// The cycle counter where the architecture has one.
    pub fn detect() -> Self {
        let unit = if cfg!(target_arch = "x86_64") {
            TimeUnit::Cycles
        } else {
            TimeUnit::Nanos
        };
        Timer {
            unit,
            origin: Instant::now(),
        }
    }

    pub fn nanos() -> Self {
        Timer {
            unit: TimeUnit::Nanos,
            origin: Instant::now(),
        }
    }

    pub fn unit(&self) -> TimeUnit {
        self.unit
    }

    #[inline(always)]
    pub fn now(&self) -> u64 {
        match self.unit {
            TimeUnit::Cycles => read_tsc(),
            TimeUnit::Nanos => self.origin.elapsed().as_nanos() as u64,
        }
    }

    /// Counter ticks per second, measured against the wall clock over `window`.
    pub fn calibrate_hz(&self, window: Duration) -> f64 {
        let (w0, t0) = (Instant::now(), self.now());
        while w0.elapsed() < window {
            std::hint::spin_loop();
        }
        let (t1, elapsed) = (self.now(), w0.elapsed());
        (t1 - t0) as f64 / elapsed.as_secs_f64()
    }
}

#[inline(always)]
fn read_tsc() -> u64 {
    #[cfg(target_arch = "x86_64")]
    {
        use std::sync::atomic::{compiler_fence, Ordering};
        compiler_fence(Ordering::SeqCst);
        // SAFETY: RDTSC is part of the x86_64 baseline.
        #[allow(unused_unsafe)]
        let t = unsafe { std::arch::x86_64::_rdtsc() };
        compiler_fence(Ordering::SeqCst);
        t
    }
    #[cfg(not(target_arch = "x86_64"))]
    unreachable!("cycle timer is only selected on x86_64")
}
