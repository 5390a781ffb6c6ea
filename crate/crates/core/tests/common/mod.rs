//! Independent oracles for the property suite. These deliberately avoid the
//! library's own algorithms: the norm oracle diagonalizes the Gram matrix by
//! cyclic Jacobi rotations, and the word counter recurses letter by letter
//! instead of run by run.

use dwellcert_core::SquareMatrix;

/// Spectral norm via full eigendecomposition of `A^T A` with cyclic Jacobi
/// sweeps. Slow and simple; used only to cross-check the production path.
pub fn jacobi_spectral_norm(a: &SquareMatrix) -> f64 {
    let d = a.dim();
    let scale = a
        .entries()
        .iter()
        .fold(0.0f64, |acc, e| acc.max(e.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    // Gram matrix of the scaled copy, dense symmetric.
    let mut g = vec![0.0f64; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut sum = 0.0;
            for k in 0..d {
                sum += (a.get(k, i) / scale) * (a.get(k, j) / scale);
            }
            g[i * d + j] = sum;
        }
    }
    for _sweep in 0..200 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off += g[p * d + q].abs();
            }
        }
        if off < 1e-15 {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let gpq = g[p * d + q];
                if gpq.abs() < 1e-30 {
                    continue;
                }
                let tau = (g[q * d + q] - g[p * d + p]) / (2.0 * gpq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotate rows and columns p, q of the symmetric matrix.
                for k in 0..d {
                    let gkp = g[k * d + p];
                    let gkq = g[k * d + q];
                    g[k * d + p] = c * gkp - s * gkq;
                    g[k * d + q] = s * gkp + c * gkq;
                }
                for k in 0..d {
                    let gpk = g[p * d + k];
                    let gqk = g[q * d + k];
                    g[p * d + k] = c * gpk - s * gqk;
                    g[q * d + k] = s * gpk + c * gqk;
                }
            }
        }
    }
    let lam = (0..d).fold(0.0f64, |acc, i| acc.max(g[i * d + i]));
    scale * lam.max(0.0).sqrt()
}

/// Admissible-word count by direct letter-at-a-time recursion: extend the
/// current run, or switch once it has lasted the dwell time.
pub fn count_words_by_letters(n: usize, delta: u32, max_len: u32) -> u128 {
    fn rec(n: usize, delta: u32, remaining: u32, run_len: u32, acc: &mut u128) {
        // The word as it stands is admissible (open final run).
        *acc += 1;
        if remaining == 0 {
            return;
        }
        rec(n, delta, remaining - 1, run_len + 1, acc);
        if run_len >= delta {
            for _ in 1..n {
                rec(n, delta, remaining - 1, 1, acc);
            }
        }
    }
    let mut acc = 0u128;
    for _first in 0..n {
        rec(n, delta, max_len - 1, 1, &mut acc);
    }
    acc
}
