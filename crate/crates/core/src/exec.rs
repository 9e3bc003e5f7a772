//! Execution strategy for the data-parallel loops.
//!
//! Every parallel loop in the crate is written as "map a pure function over
//! `0..n`, collect in index order, then reduce sequentially". The reduction
//! order never depends on how the work was split, so sequential and parallel
//! runs produce bit-identical results.

/// How the data-parallel loops should run.
///
/// `Parallel` falls back to sequential execution when the crate is built
/// without the `parallel` feature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run loops in parallel.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Map `f` over `0..n` and collect the results in index order.
pub(crate) fn map_range<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Split `0..total` into consecutive blocks of `block` indices (the last one
/// possibly shorter) and map `f(start, end)` over them in order.
pub(crate) fn map_blocks<T, F>(exec: Execution, total: u64, block: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    debug_assert!(block > 0);
    let n_blocks = total.div_ceil(block) as usize;
    map_range(exec, n_blocks, |b| {
        let start = b as u64 * block;
        let end = (start + block).min(total);
        f(start, end)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_range_in_order() {
        let blocks = map_blocks(Execution::Parallel, 10, 4, |s, e| (s, e));
        assert_eq!(blocks, vec![(0, 4), (4, 8), (8, 10)]);
        assert!(map_blocks(Execution::Sequential, 0, 4, |s, e| (s, e)).is_empty());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let f = |i: usize| (i as f64).sqrt();
        assert_eq!(
            map_range(Execution::Sequential, 1000, f),
            map_range(Execution::Parallel, 1000, f)
        );
    }
}
