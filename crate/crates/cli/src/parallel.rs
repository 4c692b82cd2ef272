//! Multi-threaded unit runner with bit-identical reduction.
//!
//! Work units are claimed from an atomic counter and written into a slot
//! vector indexed by unit, so the combining order — and therefore every
//! floating-point result — is independent of the worker count.

use smalltime_core::mc::{Parallelism, UnitStats};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

/// Thread-pool executor for Monte Carlo units.
pub struct Threads {
    workers: usize,
}

impl Threads {
    /// Runner with an explicit worker count (≥ 1).
    pub fn new(workers: usize) -> Self {
        Threads { workers: workers.max(1) }
    }

    /// Runner sized to the available parallelism.
    pub fn auto() -> Self {
        let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        Threads { workers }
    }
}

impl Parallelism for Threads {
    fn run(&self, n_units: u64, job: &(dyn Fn(u64) -> UnitStats + Sync)) -> Vec<UnitStats> {
        let workers = self.workers.min(n_units.max(1) as usize);
        if workers <= 1 {
            return (0..n_units).map(job).collect();
        }
        let next = AtomicU64::new(0);
        let slots = Mutex::new(vec![UnitStats::default(); n_units as usize]);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let u = next.fetch_add(1, Ordering::Relaxed);
                    if u >= n_units {
                        break;
                    }
                    let stats = job(u);
                    slots.lock().expect("no poisoned workers")[u as usize] = stats;
                });
            }
        });
        slots.into_inner().expect("no poisoned workers")
    }
}
