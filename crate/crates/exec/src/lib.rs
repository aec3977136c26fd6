//! Execution strategy shared by the numerical crates.
//!
//! Every hot loop in the workspace is an independent map over an index range
//! (grid columns, boxes, symmetry elements, sweep points). These helpers run such
//! a map either on the rayon pool or on the calling thread. Without the
//! `parallel` feature every strategy runs sequentially.

/// How an index-range loop is executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    /// Parallel when the `parallel` feature is compiled in.
    #[default]
    Auto,
    /// Always on the calling thread.
    Sequential,
    /// On the rayon pool; identical to `Sequential` without the feature.
    Parallel,
}

impl Execution {
    /// Whether loops will actually be dispatched to a thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self != Execution::Sequential
    }
}

/// Map `f` over `0..n`, preserving order.
pub fn map_range<R, F>(exec: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Map `f` over a slice, preserving order.
pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_range(exec, items.len(), |i| f(&items[i]))
}

/// Fold `0..n` in contiguous chunks and combine the chunk results.
///
/// Each chunk starts from `init()`; `step` accumulates one index; `merge`
/// combines two accumulators. The chunk order is fixed, so results are
/// deterministic for a given `chunk` size regardless of the strategy.
pub fn fold_chunks<A, I, S, M>(exec: Execution, n: usize, chunk: usize, init: I, step: S, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    S: Fn(&mut A, usize) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    let n_chunks = n.div_ceil(chunk);
    let partials = map_range(exec, n_chunks, |c| {
        let mut acc = init();
        for i in c * chunk..((c + 1) * chunk).min(n) {
            step(&mut acc, i);
        }
        acc
    });
    partials.into_iter().fold(init(), merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        for exec in [Execution::Auto, Execution::Sequential, Execution::Parallel] {
            let v = map_range(exec, 100, |i| i * i);
            assert_eq!(v[7], 49);
            let s = fold_chunks(exec, 1000, 64, || 0u64, |a, i| *a += i as u64, |a, b| a + b);
            assert_eq!(s, 499_500);
        }
    }

    #[test]
    fn sequential_never_parallel() {
        assert!(!Execution::Sequential.is_parallel());
        assert_eq!(Execution::Parallel.is_parallel(), cfg!(feature = "parallel"));
    }
}
