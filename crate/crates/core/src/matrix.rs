//! Small dense square matrices with deterministic arithmetic.
//!
//! Everything here is sized for certificate workloads: dimensions in the
//! single digits, millions of multiplications at most. Reductions run in a
//! fixed left-to-right, row-major order so repeated runs produce identical
//! bits on the same platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Start vector reseed used when power iteration stalls on a degenerate
/// spectrum. Fixed so retries are reproducible.
const RESTART_SEED: u64 = 0xC0FFEE;

/// Power iteration stops after the relative Rayleigh change stays below this
/// for three consecutive iterations.
const POWER_TOL: f64 = 1e-14;
const POWER_MAX_ITER: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("dim-mismatch: left operand is {left}x{left}, right is {right}x{right}")]
    DimMismatch { left: usize, right: usize },
    #[error("dim-mismatch: vector length {len} does not match dimension {dim}")]
    VectorDim { dim: usize, len: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix must have at least one row")]
    Empty,
    #[error("rows must all have length {dim}, row {row} has {len}")]
    Ragged { dim: usize, row: usize, len: usize },
    #[error("norm-no-converge: power iteration did not settle in {POWER_MAX_ITER} iterations")]
    NormNoConverge,
}

/// Dense row-major square matrix of `f64`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    /// Builds from nested rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(MatrixError::Ragged {
                    dim,
                    row: r,
                    len: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::from_flat(dim, entries)
    }

    /// Builds from a row-major flat slice of length `dim * dim`.
    pub fn from_flat(dim: usize, entries: Vec<f64>) -> Result<Self, MatrixError> {
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != dim * dim {
            return Err(MatrixError::Ragged {
                dim,
                row: 0,
                len: entries.len(),
            });
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, 1.0)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn scaled_identity(dim: usize, scale: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = scale;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    fn check_dims(&self, other: &Self) -> Result<(), MatrixError> {
        if self.dim != other.dim {
            return Err(MatrixError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Matrix product with row-major accumulation: the inner sum runs over k
    /// in increasing order, so results are reproducible bit for bit.
    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dims(other)?;
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for k in 0..d {
                    acc += self.entries[i * d + k] * other.entries[k * d + j];
                }
                out[i * d + j] = acc;
            }
        }
        Ok(Self { dim: d, entries: out })
    }

    /// k-fold product by left-fold over identity; `pow(0)` is the identity.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            // Unwrap is fine: dimensions always agree with self.
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dims(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_dims(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.entries[i * d + j];
            }
        }
        Self { dim: d, entries: out }
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, MatrixError> {
        if x.len() != self.dim {
            return Err(MatrixError::VectorDim {
                dim: self.dim,
                len: x.len(),
            });
        }
        let d = self.dim;
        let out = self
            .entries
            .chunks_exact(d)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        Ok(out)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    /// Gram matrix `self^T * self`; symmetric positive semidefinite.
    fn gram(&self) -> Self {
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for k in 0..d {
                    acc += self.entries[k * d + i] * self.entries[k * d + j];
                }
                out[i * d + j] = acc;
            }
        }
        Self { dim: d, entries: out }
    }

    /// Induced Euclidean (spectral) norm.
    ///
    /// Dimensions 1 and 2 use the closed-form largest eigenvalue of the Gram
    /// matrix; larger dimensions run symmetric power iteration with a fixed
    /// all-ones start, one seeded restart on stall. Entries are pre-scaled by
    /// the largest magnitude so the Gram products stay well inside range.
    pub fn spectral_norm(&self) -> Result<NormValue, MatrixError> {
        let method = if self.dim <= 2 {
            NormMethod::Exact2x2
        } else {
            NormMethod::PowerIteration
        };
        let scale = self.max_abs_entry();
        if scale == 0.0 {
            return Ok(NormValue {
                value: 0.0,
                method,
                relative_error_bound: 0.0,
            });
        }
        let b = self.scale(1.0 / scale);
        match self.dim {
            1 => Ok(NormValue {
                value: scale * b.entries[0].abs(),
                method,
                relative_error_bound: 1e-15,
            }),
            2 => {
                let g = b.gram();
                let (g11, g12, g22) = (g.entries[0], g.entries[1], g.entries[3]);
                let mid = 0.5 * (g11 + g22);
                let disc = (0.5 * (g11 - g22)).hypot(g12);
                // Largest eigenvalue of a symmetric 2x2; nonnegative since
                // the Gram matrix is PSD.
                let lam = (mid + disc).max(0.0);
                Ok(NormValue {
                    value: scale * lam.sqrt(),
                    method,
                    relative_error_bound: 1e-14,
                })
            }
            _ => {
                let g = b.gram();
                let lam = power_iterate(&g)?;
                Ok(NormValue {
                    value: scale * lam.sqrt(),
                    method,
                    relative_error_bound: 1e-12,
                })
            }
        }
    }
}

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
fn power_iterate(g: &SquareMatrix) -> Result<f64, MatrixError> {
    let d = g.dim;
    let start = vec![1.0 / (d as f64).sqrt(); d];
    // The top eigenvalue dominates every diagonal entry of a PSD matrix;
    // falling short means the start vector was (numerically) orthogonal to
    // the dominant eigenspace, so retry from a seeded random direction.
    let mut floor = 0.0f64;
    for i in 0..d {
        floor = floor.max(g.entries[i * d + i]);
    }
    if let Some(lam) = power_iterate_from(g, start) {
        if lam >= floor * (1.0 - 1e-10) {
            return Ok(lam);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    let restart: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    match power_iterate_from(g, restart) {
        Some(lam) if lam >= floor * (1.0 - 1e-10) => Ok(lam),
        _ => Err(MatrixError::NormNoConverge),
    }
}

fn power_iterate_from(g: &SquareMatrix, mut v: Vec<f64>) -> Option<f64> {
    let norm = |x: &[f64]| x.iter().map(|e| e * e).sum::<f64>().sqrt();
    let nv = norm(&v);
    if nv == 0.0 {
        return None;
    }
    v.iter_mut().for_each(|e| *e /= nv);
    let mut lam_prev = f64::NAN;
    let mut settled = 0;
    for _ in 0..POWER_MAX_ITER {
        let w = g.apply(&v).expect("gram dims agree");
        let lam: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let nw = norm(&w);
        if nw == 0.0 {
            // v lies in the kernel; the caller may restart elsewhere.
            return Some(0.0);
        }
        v = w.iter().map(|e| e / nw).collect();
        if (lam - lam_prev).abs() <= POWER_TOL * lam.abs().max(f64::MIN_POSITIVE) {
            settled += 1;
            if settled == 3 {
                return Some(lam);
            }
        } else {
            settled = 0;
        }
        lam_prev = lam;
    }
    None
}

/// Spectral norm together with how it was obtained and how much to trust it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub method: NormMethod,
    pub relative_error_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    Exact2x2,
    PowerIteration,
}

/// `a^p b^q - b^q a^p`, the product commutator driving every certificate
/// correction term.
pub fn commutator(
    a: &SquareMatrix,
    b: &SquareMatrix,
    p: u32,
    q: u32,
) -> Result<SquareMatrix, MatrixError> {
    let ap = a.pow(p);
    let bq = b.pow(q);
    ap.mul(&bq)?.sub(&bq.mul(&ap)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> SquareMatrix {
        SquareMatrix::from_rows(&[vec![0.02, 0.93], vec![-0.53, -0.92]]).unwrap()
    }

    fn a2() -> SquareMatrix {
        SquareMatrix::from_rows(&[vec![0.04, 0.09], vec![0.08, -0.11]]).unwrap()
    }

    fn assert_entries_close(m: &SquareMatrix, want: &[f64], tol: f64) {
        for (got, want) in m.entries().iter().zip(want) {
            assert!(
                (got - want).abs() <= tol,
                "entry {got} vs {want} beyond {tol}"
            );
        }
    }

    #[test]
    fn mul_identity_is_identity() {
        let i = SquareMatrix::identity(2);
        assert_eq!(i.mul(&i).unwrap(), i);
    }

    #[test]
    fn mul_matches_hand_product() {
        let prod = a1().mul(&a2()).unwrap();
        assert_entries_close(&prod, &[0.0752, -0.1005, -0.0948, 0.0535], 1e-12);
    }

    #[test]
    fn mul_by_zero_annihilates() {
        let z = SquareMatrix::zeros(2);
        assert_eq!(a1().mul(&z).unwrap(), z);
    }

    #[test]
    fn mul_rejects_dim_mismatch() {
        let err = a1().mul(&SquareMatrix::identity(3)).unwrap_err();
        assert_eq!(err, MatrixError::DimMismatch { left: 2, right: 3 });
    }

    #[test]
    fn pow_zero_is_identity() {
        assert_eq!(a1().pow(0), SquareMatrix::identity(2));
    }

    #[test]
    fn pow_norms_match_expected_contraction() {
        // Frozen from an independent reference computation.
        let n3 = a1().pow(3).spectral_norm().unwrap().value;
        assert!((n3 - 0.5404218105).abs() < 1e-9, "|A1^3| = {n3}");
        let n2 = a2().pow(2).spectral_norm().unwrap().value;
        assert!((n2 - 0.0219894076).abs() < 1e-9, "|A2^2| = {n2}");
    }

    #[test]
    fn spectral_norm_zero_matrix() {
        let n = SquareMatrix::zeros(3).spectral_norm().unwrap();
        assert_eq!(n.value, 0.0);
    }

    #[test]
    fn spectral_norm_diagonal_is_max_abs() {
        let d = SquareMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let n = d.spectral_norm().unwrap();
        assert!((n.value - 4.0).abs() < 1e-13);
        assert_eq!(n.method, NormMethod::Exact2x2);
    }

    #[test]
    fn spectral_norm_first_subsystem() {
        let n = a1().spectral_norm().unwrap().value;
        assert!((n - 1.3683383745).abs() < 1e-9, "|A1| = {n}");
    }

    #[test]
    fn spectral_norm_one_by_one() {
        let m = SquareMatrix::from_rows(&[vec![-2.5]]).unwrap();
        assert_eq!(m.spectral_norm().unwrap().value, 2.5);
    }

    #[test]
    fn power_iteration_on_diagonal() {
        let d =
            SquareMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]])
                .unwrap();
        let n = d.spectral_norm().unwrap();
        assert_eq!(n.method, NormMethod::PowerIteration);
        assert!((n.value - 3.0).abs() < 1e-10, "norm = {}", n.value);
    }

    #[test]
    fn power_iteration_handles_repeated_top_eigenvalue() {
        let m = SquareMatrix::scaled_identity(4, 2.0);
        let n = m.spectral_norm().unwrap();
        assert!((n.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn commutator_with_own_powers_vanishes() {
        // Equal powers subtract the very same product, so the zero is exact.
        let c = commutator(&a1(), &a1(), 2, 2).unwrap();
        assert!(c.entries().iter().all(|e| *e == 0.0));
        // Distinct powers associate the factors differently; only rounding
        // noise survives.
        let c = commutator(&a1(), &a1(), 2, 3).unwrap();
        assert!(c.spectral_norm().unwrap().value < 1e-15);
    }

    #[test]
    fn commutator_norms_match_expected() {
        let e11 = commutator(&a1(), &a2(), 1, 1).unwrap();
        let n11 = e11.spectral_norm().unwrap().value;
        assert!((n11 - 0.2108082036).abs() < 1e-9, "eps11 = {n11}");
        let e22 = commutator(&a1(), &a2(), 2, 2).unwrap();
        let n22 = e22.spectral_norm().unwrap().value;
        assert!((n22 - 0.0132809168).abs() < 1e-9, "eps22 = {n22}");
    }

    #[test]
    fn commutator_antisymmetry_is_exact() {
        let fwd = commutator(&a1(), &a2(), 1, 2).unwrap();
        let rev = commutator(&a2(), &a1(), 2, 1).unwrap();
        let sum = fwd.add(&rev).unwrap();
        // Same products subtracted in the opposite order: identical floats.
        assert!(sum.entries().iter().all(|e| *e == 0.0));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert_eq!(
            SquareMatrix::from_rows(&[vec![1.0], vec![2.0, 3.0]]).unwrap_err(),
            MatrixError::Ragged { dim: 2, row: 0, len: 1 }
        );
        assert_eq!(
            SquareMatrix::from_rows(&[vec![f64::NAN]]).unwrap_err(),
            MatrixError::NonFinite
        );
        assert_eq!(SquareMatrix::from_rows(&[]).unwrap_err(), MatrixError::Empty);
    }

    #[test]
    fn scaling_guard_keeps_huge_entries_in_range() {
        let m = SquareMatrix::from_rows(&[vec![1e200, 0.0], vec![0.0, 1e199]]).unwrap();
        let n = m.spectral_norm().unwrap().value;
        assert!((n - 1e200).abs() / 1e200 < 1e-12);
    }
}
