//! Parallel execution switch shared by the matrix kernels.
//!
//! Kernels split their output into fixed-size row chunks. Each output entry
//! is accumulated by exactly one task in a fixed order, so parallel and
//! sequential execution produce bitwise identical results. Deterministic
//! mode only disables the thread pool.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

static DETERMINISTIC: AtomicBool = AtomicBool::new(false);

/// Rows handed to one task.
pub(crate) const ROW_CHUNK: usize = 32;

/// Below this many flops a product runs on the calling thread.
const PAR_FLOP_THRESHOLD: usize = 1 << 20;

/// Force all matrix kernels to run sequentially on the calling thread.
pub fn set_deterministic(on: bool) {
    DETERMINISTIC.store(on, Ordering::Relaxed);
}

pub fn is_deterministic() -> bool {
    DETERMINISTIC.load(Ordering::Relaxed)
}

/// Runs `f(first_row, chunk)` over consecutive chunks of `ROW_CHUNK` rows of
/// a row-major buffer with `width` entries per row.
pub(crate) fn for_row_chunks<F>(out: &mut [f64], width: usize, flops: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    if width == 0 || out.is_empty() {
        return;
    }
    let chunk = ROW_CHUNK * width;
    if is_deterministic() || flops < PAR_FLOP_THRESHOLD {
        out.chunks_mut(chunk)
            .enumerate()
            .for_each(|(c, block)| f(c * ROW_CHUNK, block));
    } else {
        out.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(c, block)| f(c * ROW_CHUNK, block));
    }
}

/// Maps `f` over `0..n` and returns results in index order.
pub(crate) fn map_indexed<T, F>(n: usize, heavy: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if is_deterministic() || !heavy {
        (0..n).map(f).collect()
    } else {
        (0..n).into_par_iter().map(f).collect()
    }
}
