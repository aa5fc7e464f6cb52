//! Node-level data parallelism with a sequential fallback.
//!
//! The mode is process-wide so that library entry points keep plain
//! signatures. Without the `parallel` feature every map runs sequentially
//! whatever the mode says.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

static MODE: AtomicU8 = AtomicU8::new(1);

pub fn set_parallelism(mode: Parallelism) {
    MODE.store(
        match mode {
            Parallelism::Sequential => 0,
            Parallelism::Parallel => 1,
        },
        Ordering::Relaxed,
    );
}

pub fn parallelism() -> Parallelism {
    if cfg!(feature = "parallel") && MODE.load(Ordering::Relaxed) == 1 {
        Parallelism::Parallel
    } else {
        Parallelism::Sequential
    }
}

/// `items.iter().map(f).collect()`, in parallel when enabled.
pub fn par_map<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallelism() == Parallelism::Parallel && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    items.iter().map(f).collect()
}
