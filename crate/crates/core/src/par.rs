//! Row-partitioned execution. With the `parallel` feature rows are spread over
//! the rayon pool; without it (or when [`Execution::Sequential`] is requested)
//! they are processed in order on the calling thread.

/// Rows per rayon task at minimum.
#[cfg(feature = "parallel")]
const MIN_ROWS: usize = 16;

/// Execution strategy for row-independent kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled, otherwise
    /// falls back to [`Execution::Sequential`].
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Calls `kernel(y, row)` for every `width`-long row of `out`.
pub(crate) fn for_each_row<F>(exec: Execution, out: &mut [u8], width: usize, kernel: F)
where
    F: Fn(usize, &mut [u8]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        out.par_chunks_mut(width).enumerate().with_min_len(MIN_ROWS).for_each(|(y, row)| kernel(y, row));
        return;
    }
    let _ = exec;
    out.chunks_mut(width).enumerate().for_each(|(y, row)| kernel(y, row));
}

pub(crate) type RowSet<'a> = [&'a mut [u8]; 4];

/// Like [`for_each_row`] over four equally-sized planes at once.
pub(crate) fn for_each_row4<F>(exec: Execution, planes: [&mut [u8]; 4], width: usize, kernel: F)
where
    F: Fn(usize, RowSet<'_>) + Sync + Send,
{
    let [a, b, c, d] = planes;
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        a.par_chunks_mut(width)
            .zip(b.par_chunks_mut(width))
            .zip(c.par_chunks_mut(width))
            .zip(d.par_chunks_mut(width))
            .enumerate()
            .with_min_len(MIN_ROWS)
            .for_each(|(y, (((a, b), c), d))| kernel(y, [a, b, c, d]));
        return;
    }
    let _ = exec;
    a.chunks_mut(width)
        .zip(b.chunks_mut(width))
        .zip(c.chunks_mut(width))
        .zip(d.chunks_mut(width))
        .enumerate()
        .for_each(|(y, (((a, b), c), d))| kernel(y, [a, b, c, d]));
}
