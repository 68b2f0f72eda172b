//! Parameter-grid evaluation with a deterministic ordered reduction.
//!
//! Work items are split into contiguous chunks across scoped threads and the
//! results are reassembled in input order, so the emitted CSV is identical
//! whatever OKALAB_THREADS says.

pub const THREADS_ENV: &str = "OKALAB_THREADS";
const MAX_THREADS: usize = 64;

/// Thread count from OKALAB_THREADS (default 1).
pub fn thread_count() -> Result<usize, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(1),
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got '{v}'"))?;
            if n == 0 || n > MAX_THREADS {
                return Err(format!(
                    "{THREADS_ENV} must be in 1..={MAX_THREADS}, got {n}"
                ));
            }
            Ok(n)
        }
    }
}

/// Apply `f` to every item, possibly in parallel, preserving input order.
pub fn map_ordered<T, U, F>(items: Vec<T>, threads: usize, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync,
{
    if threads <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let chunk_size = items.len().div_ceil(threads);
    let chunks: Vec<Vec<T>> = {
        let mut chunks = Vec::new();
        let mut iter = items.into_iter();
        loop {
            let chunk: Vec<T> = iter.by_ref().take(chunk_size).collect();
            if chunk.is_empty() {
                break;
            }
            chunks.push(chunk);
        }
        chunks
    };
    let f = &f;
    let mut results: Vec<Vec<U>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| scope.spawn(move || chunk.into_iter().map(f).collect::<Vec<U>>()))
            .collect();
        for h in handles {
            results.push(h.join().expect("sweep worker panicked"));
        }
    });
    results.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_results_match_sequential() {
        let items: Vec<i64> = (0..37).collect();
        let seq = map_ordered(items.clone(), 1, |x| x * x);
        let par = map_ordered(items, 4, |x| x * x);
        assert_eq!(seq, par);
    }
}
