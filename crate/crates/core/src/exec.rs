//! Row/slab scheduling. With the `parallel` feature the work runs on rayon;
//! without it, or with one thread, it runs as a plain loop. Results are
//! always collected in index order so the output does not depend on the
//! worker count.

/// Environment variable capping the worker count (`0` or unset = automatic).
pub const THREADS_ENV: &str = "MANDELSTUFF_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Executor {
    threads: usize,
}

impl Executor {
    pub const fn sequential() -> Self {
        Self { threads: 1 }
    }

    /// Let rayon pick the worker count.
    pub const fn auto() -> Self {
        Self { threads: 0 }
    }

    pub const fn with_threads(threads: usize) -> Self {
        Self { threads }
    }

    /// Reads [`THREADS_ENV`]; unparsable values fall back to automatic.
    pub fn from_env() -> Self {
        let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
        Self { threads }
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn is_sequential(&self) -> bool {
        self.threads == 1 || cfg!(not(feature = "parallel"))
    }

    /// `(0..n).map(f)` collected in order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        if self.is_sequential() {
            return (0..n).map(f).collect();
        }
        self.map_parallel(n, f)
    }

    #[cfg(feature = "parallel")]
    fn map_parallel<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        use rayon::prelude::*;
        if self.threads == 0 {
            return (0..n).into_par_iter().map(f).collect();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.threads).build() {
            Ok(pool) => pool.install(|| (0..n).into_par_iter().map(f).collect()),
            Err(_) => (0..n).map(f).collect(),
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn map_parallel<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
