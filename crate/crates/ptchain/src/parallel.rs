use std::sync::Arc;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use ptchain_core::region::GridMap;

/// Worker-thread count for grid evaluations; unset or `0` means one per core.
pub const THREADS_ENV: &str = "PTCHAIN_THREADS";

/// Grid evaluation on a rayon pool. Results keep input order, so output does
/// not depend on the thread count.
#[derive(Clone)]
pub struct Rayon {
    pool: Arc<ThreadPool>,
}

impl Rayon {
    pub fn new(threads: usize) -> Result<Self, String> {
        let pool = ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        Ok(Self { pool: Arc::new(pool) })
    }

    pub fn from_env() -> Result<Self, String> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(v) => v.trim().parse::<usize>().map_err(|_| format!("{THREADS_ENV}={v} is not a thread count"))?,
            Err(_) => 0,
        };
        Self::new(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl GridMap for Rayon {
    fn map<T: Send, F: Fn(f64) -> T + Sync>(&self, xs: &[f64], f: F) -> Vec<T> {
        self.pool.install(|| xs.par_iter().map(|&x| f(x)).collect())
    }
}
