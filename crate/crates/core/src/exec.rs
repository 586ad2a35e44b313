//! Chunked map-reduce driver for the Monte Carlo loops.
//!
//! Work is split into fixed-size chunks keyed by item index, each chunk
//! is accumulated sequentially in item order, and the per-chunk partials
//! are merged in chunk order. Chunk boundaries never depend on the
//! worker count, so parallel and sequential runs produce identical bits.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Items per chunk; large enough to amortize per-chunk overhead, small
/// enough to keep the pool busy on desk-scale budgets.
pub(crate) const CHUNK_ITEMS: u64 = 8192;

/// Applies `work` to every index chunk of `0..n_items` and folds the
/// partials in chunk order.
pub(crate) fn map_reduce<P, W, M>(n_items: u64, work: W, mut merge: M) -> Option<P>
where
    P: Send,
    W: Fn(std::ops::Range<u64>) -> P + Sync,
    M: FnMut(P, P) -> P,
{
    let n_chunks = n_items.div_ceil(CHUNK_ITEMS);
    let chunk_range = |c: u64| {
        let lo = c * CHUNK_ITEMS;
        lo..(lo + CHUNK_ITEMS).min(n_items)
    };

    #[cfg(feature = "parallel")]
    let partials: Vec<P> = (0..n_chunks)
        .into_par_iter()
        .map(|c| work(chunk_range(c)))
        .collect();

    #[cfg(not(feature = "parallel"))]
    let partials: Vec<P> = (0..n_chunks).map(|c| work(chunk_range(c))).collect();

    partials.into_iter().reduce(|a, b| merge(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_every_index_exactly_once() {
        let n = 3 * CHUNK_ITEMS + 17;
        let sum = map_reduce(n, |r| r.sum::<u64>(), |a, b| a + b).unwrap();
        assert_eq!(sum, n * (n - 1) / 2);
    }

    #[test]
    fn empty_input_yields_none() {
        assert!(map_reduce(0, |r| r.count(), |a, b| a + b).is_none());
    }
}
