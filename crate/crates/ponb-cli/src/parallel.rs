//! Bounded fan-out for batch work.
//!
//! UL_THREADS caps the worker count; unset means one worker per available
//! core. Results always come back in input order, so concurrency never
//! changes what gets written.

use anyhow::{bail, Context, Result};

pub fn thread_budget() -> Result<usize> {
    match std::env::var("UL_THREADS") {
        Ok(raw) => {
            let n: usize = raw
                .trim()
                .parse()
                .with_context(|| format!("UL_THREADS must be a positive integer, got {raw:?}"))?;
            if n == 0 {
                bail!("UL_THREADS must be at least 1");
            }
            Ok(n)
        }
        Err(std::env::VarError::NotPresent) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
        Err(err) => Err(err).context("reading UL_THREADS"),
    }
}

/// Applies `f` to every item on up to `threads` workers, preserving order.
pub fn map_indexed<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync,
{
    let workers = threads.max(1).min(items.len().max(1));
    if workers <= 1 || items.len() <= 1 {
        return items.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let mut results = Vec::with_capacity(items.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .enumerate()
            .map(|(k, part)| {
                let f = &f;
                scope.spawn(move || {
                    part.iter()
                        .enumerate()
                        .map(|(i, t)| f(k * chunk + i, t))
                        .collect::<Vec<R>>()
                })
            })
            .collect();
        for handle in handles {
            results.extend(handle.join().expect("worker panicked"));
        }
    });
    results
}
