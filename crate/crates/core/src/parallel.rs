use rayon::prelude::*;

/// Environment switch that forces single-threaded grid evaluation.
pub const NO_PARALLEL_ENV: &str = "BK_NO_PARALLEL";

pub fn parallel_enabled() -> bool {
    std::env::var(NO_PARALLEL_ENV).map_or(true, |v| v != "1")
}

/// Maps `f` over a parameter grid, in parallel unless disabled. Output order
/// always matches input order.
pub fn map_grid<T, F>(ts: &[f64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(f64) -> T + Sync + Send,
{
    if parallel_enabled() {
        ts.par_iter().map(|&t| f(t)).collect()
    } else {
        ts.iter().map(|&t| f(t)).collect()
    }
}

/// `n` equally spaced points covering `[lo, hi]` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + h * i as f64 })
                .collect()
        }
    }
}
