//! Thread-pool executor for the search and scan jobs.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use mordell_core::mordell::Executor;

/// Runs jobs on scoped threads; results are returned in job order so the output
/// does not depend on the number of workers.
#[derive(Clone, Debug)]
pub struct ThreadedExecutor {
    threads: usize,
    deadline: Option<Instant>,
}

impl ThreadedExecutor {
    pub fn new(threads: usize) -> Self {
        Self { threads: threads.max(1), deadline: None }
    }

    /// Worker count from `MORDELL_THREADS`, else the available parallelism.
    pub fn from_env() -> Self {
        let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
        let threads = std::env::var("MORDELL_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .map_or(avail, |n| n.min(avail.max(1)).max(1));
        Self::new(threads)
    }

    pub fn with_time_limit(mut self, limit: Option<Duration>) -> Self {
        self.deadline = limit.map(|d| Instant::now() + d);
        self
    }

    pub fn threads(&self) -> usize {
        self.threads
    }
}

impl Executor for ThreadedExecutor {
    fn map<T: Send, F: Fn(usize) -> T + Sync>(&self, count: usize, f: F) -> Vec<T> {
        let workers = self.threads.min(count);
        if workers <= 1 {
            return (0..count).map(f).collect();
        }
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= count {
                        break;
                    }
                    let v = f(k);
                    slots.lock().expect("worker panicked")[k] = Some(v);
                });
            }
        });
        slots.into_inner().expect("worker panicked").into_iter().map(|v| v.expect("job finished")).collect()
    }

    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}
