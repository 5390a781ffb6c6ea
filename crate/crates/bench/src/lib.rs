//! Benchmark-only crate; see `benches/pipeline.rs`. Kept separate so the
//! library crates build without criterion in their dependency graphs.

/// Deterministic matrix filler for benchmark fixtures. A tiny LCG keeps the
/// inputs stable across runs without pulling a RNG crate into the benches.
pub fn lcg_entries(len: usize, seed: u64, span: f64) -> Vec<f64> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    (0..len)
        .map(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let unit = (state >> 11) as f64 / (1u64 << 53) as f64;
            (2.0 * unit - 1.0) * span
        })
        .collect()
}
