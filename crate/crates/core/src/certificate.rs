//! Dwell-time stability certificates.
//!
//! Given a family of subsystem matrices and a minimum dwell time, the
//! certificate finds a power `m` at which every subsystem is contractive,
//! measures how far the family is from commuting via a small table of
//! commutator norms, and checks a closed-form product bound. When the bound
//! stays at or below one for some positive rate `lambda`, every admissible
//! switching product of length `L` satisfies
//! `norm <= c * exp(-lambda * L)`, which is uniform exponential stability.

use serde::Serialize;
use thiserror::Error;

use crate::matrix::{MatrixError, SquareMatrix};

/// Hard ceiling for the decay-rate search; beyond this the bound's
/// exponentials overflow long before the inequality is informative.
pub const LAMBDA_CAP: f64 = 100.0;

/// Default ceiling for the contraction-power search.
pub const DEFAULT_M_MAX: u32 = 500;

const BISECTION_TOL: f64 = 1e-9;
const BISECTION_MAX_ITER: u32 = 200;

#[derive(Debug, Error, PartialEq)]
pub enum CertError {
    #[error("family needs at least two subsystems")]
    FamilyTooSmall,
    #[error("subsystem {index} has dimension {got}, expected {want}")]
    DimMismatch { index: usize, want: usize, got: usize },
    #[error("expected {want} labels, got {got}")]
    LabelCount { want: usize, got: usize },
    #[error("dwell time must be at least 1")]
    InvalidDwell,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An indexed family of same-dimension subsystem matrices. Indices are
/// 1-based everywhere: subsystem `i` is `matrix(i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsystemFamily {
    dim: usize,
    matrices: Vec<SquareMatrix>,
    labels: Vec<String>,
}

impl SubsystemFamily {
    /// Builds a family with default labels `A1..AN`.
    pub fn new(matrices: Vec<SquareMatrix>) -> Result<Self, CertError> {
        let labels = (1..=matrices.len()).map(|i| format!("A{i}")).collect();
        Self::with_labels(matrices, labels)
    }

    pub fn with_labels(
        matrices: Vec<SquareMatrix>,
        labels: Vec<String>,
    ) -> Result<Self, CertError> {
        if matrices.len() < 2 {
            return Err(CertError::FamilyTooSmall);
        }
        let dim = matrices[0].dim();
        for (i, m) in matrices.iter().enumerate() {
            if m.dim() != dim {
                return Err(CertError::DimMismatch {
                    index: i + 1,
                    want: dim,
                    got: m.dim(),
                });
            }
        }
        if labels.len() != matrices.len() {
            return Err(CertError::LabelCount {
                want: matrices.len(),
                got: labels.len(),
            });
        }
        Ok(Self {
            dim,
            matrices,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Subsystem by 1-based index.
    pub fn matrix(&self, index: usize) -> Option<&SquareMatrix> {
        if index == 0 {
            return None;
        }
        self.matrices.get(index - 1)
    }

    pub fn matrices(&self) -> &[SquareMatrix] {
        &self.matrices
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        if index == 0 {
            return None;
        }
        self.labels.get(index - 1).map(String::as_str)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Per-subsystem result of the contraction screen: the smallest power whose
/// norm drops below one, with that norm, or `None` within the cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScreenEntry {
    pub index: usize,
    pub norm: f64,
    pub contractive_power: Option<(u32, f64)>,
}

/// Finds, for each subsystem separately, the smallest power that is
/// contractive. A quick sanity screen: a subsystem with no such power can
/// never pass the shared-power search below.
pub fn schur_screen(fam: &SubsystemFamily, m_max: u32) -> Result<Vec<ScreenEntry>, CertError> {
    let mut out = Vec::with_capacity(fam.len());
    for (i, a) in fam.matrices().iter().enumerate() {
        let norm = a.spectral_norm()?.value;
        let mut power = a.clone();
        let mut found = None;
        for k in 1..=m_max {
            let nk = if k == 1 {
                norm
            } else {
                power = power.mul(a)?;
                power.spectral_norm()?.value
            };
            if nk < 1.0 {
                found = Some((k, nk));
                break;
            }
        }
        out.push(ScreenEntry {
            index: i + 1,
            norm,
            contractive_power: found,
        });
    }
    Ok(out)
}

/// Smallest shared power `m >= delta` with `max_i norm(A_i^m) < 1`, returned
/// with that max norm. `None` if no power up to `m_max` works.
pub fn find_m(
    fam: &SubsystemFamily,
    delta: u32,
    m_max: u32,
) -> Result<Option<(u32, f64)>, CertError> {
    if delta == 0 {
        return Err(CertError::InvalidDwell);
    }
    let mut powers: Vec<SquareMatrix> = fam.matrices().iter().map(|a| a.pow(delta)).collect();
    for m in delta..=m_max {
        if m > delta {
            for (p, a) in powers.iter_mut().zip(fam.matrices()) {
                *p = p.mul(a)?;
            }
        }
        let mut rho = 0.0f64;
        for p in &powers {
            rho = rho.max(p.spectral_norm()?.value);
        }
        if rho < 1.0 {
            return Ok(Some((m, rho)));
        }
    }
    Ok(None)
}

/// The three counting scalars of the certificate for `n` subsystems,
/// contraction power `m`, and dwell time `delta`:
/// `k1 = floor(m / delta)` delta-blocks fit in the moving power,
/// `k2 = floor((n-1)(m-1) / delta)` delta-blocks fit in the crossed material,
/// `k3 = (n-1)(m-1) - k2 * delta` single factors left over.
pub fn compute_k_scalars(n: usize, m: u32, delta: u32) -> (u64, u64, u64) {
    let m = u64::from(m);
    let delta = u64::from(delta);
    let crossed = (n as u64 - 1) * (m - 1);
    let k1 = m / delta;
    let k2 = crossed / delta;
    let k3 = crossed - k2 * delta;
    (k1, k2, k3)
}

/// Worst commutator norms over ordered subsystem pairs, one entry per
/// (moving power, crossed power) shape. At dwell time 1 all four coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonTable {
    pub delta_delta: f64,
    pub delta_one: f64,
    pub one_delta: f64,
    pub one_one: f64,
}

pub fn epsilon_table(fam: &SubsystemFamily, delta: u32) -> Result<EpsilonTable, CertError> {
    if delta == 0 {
        return Err(CertError::InvalidDwell);
    }
    let deltas: Vec<SquareMatrix> = fam.matrices().iter().map(|a| a.pow(delta)).collect();
    let mut table = EpsilonTable {
        delta_delta: 0.0,
        delta_one: 0.0,
        one_delta: 0.0,
        one_one: 0.0,
    };
    let norm_of = |left: &SquareMatrix, right: &SquareMatrix| -> Result<f64, CertError> {
        let diff = left.mul(right)?.sub(&right.mul(left)?)?;
        Ok(diff.spectral_norm()?.value)
    };
    for i in 0..fam.len() {
        for j in 0..fam.len() {
            if i == j {
                continue;
            }
            let (ai, aj) = (&fam.matrices()[i], &fam.matrices()[j]);
            let (di, dj) = (&deltas[i], &deltas[j]);
            table.delta_delta = table.delta_delta.max(norm_of(di, dj)?);
            table.delta_one = table.delta_one.max(norm_of(di, aj)?);
            table.one_delta = table.one_delta.max(norm_of(ai, dj)?);
            table.one_one = table.one_one.max(norm_of(ai, aj)?);
        }
    }
    Ok(table)
}

/// All scalars the closed-form bound consumes. `max_norm` is
/// `max_i norm(A_i)`; the counting scalars come from [`compute_k_scalars`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarInputs {
    pub n: usize,
    pub delta: u32,
    pub m: u32,
    pub rho: f64,
    pub lambda: f64,
    pub max_norm: f64,
    pub k1: u64,
    pub k2: u64,
    pub k3: u64,
    pub eps: EpsilonTable,
}

impl ScalarInputs {
    /// Longest product the bound reasons about directly; longer words are
    /// handled by splitting off certified segments.
    pub fn basis_horizon(&self) -> u64 {
        self.n as u64 * (u64::from(self.m) - 1) + 1
    }

    fn crossed(&self) -> u64 {
        (self.n as u64 - 1) * (u64::from(self.m) - 1)
    }

    fn singles_budget(&self) -> u64 {
        u64::from(self.m) - self.k1 * u64::from(self.delta)
    }
}

/// The four correction terms inside the bound's bracket, in category order
/// (block-block, block-single, single-block, single-single). Each is
/// `count * worst commutator * max_norm^(surviving factors)`. Terms with a
/// zero count are skipped outright so a zero or huge `max_norm` cannot
/// poison the sum through an irrelevant category.
pub fn bracket_terms(inputs: &ScalarInputs) -> [f64; 4] {
    let crossed = inputs.crossed();
    let m = u64::from(inputs.m);
    let delta = u64::from(inputs.delta);
    let singles = inputs.singles_budget();
    let rows: [(u64, f64, i64); 4] = [
        (
            inputs.k1 * inputs.k2,
            inputs.eps.delta_delta,
            crossed as i64 + m as i64 - 2 * delta as i64,
        ),
        (
            inputs.k1 * inputs.k3,
            inputs.eps.delta_one,
            crossed as i64 + m as i64 - delta as i64 - 1,
        ),
        (
            singles * inputs.k2,
            inputs.eps.one_delta,
            crossed as i64 + m as i64 - delta as i64 - 1,
        ),
        (
            singles * inputs.k3,
            inputs.eps.one_one,
            crossed as i64 + m as i64 - 2,
        ),
    ];
    rows.map(|(count, eps, exponent)| {
        if count == 0 {
            0.0
        } else {
            // count > 0 forces exponent >= 0 for every category.
            count as f64 * eps * inputs.max_norm.powi(exponent as i32)
        }
    })
}

/// The product bound's left-hand side at the given rate; the certificate
/// holds iff this is at most one.
pub fn certificate_lhs(inputs: &ScalarInputs) -> f64 {
    let leading = if inputs.rho > 0.0 {
        inputs.rho * (inputs.lambda * f64::from(inputs.m)).exp()
    } else {
        0.0
    };
    let bracket: f64 = bracket_terms(inputs).iter().sum();
    let tail = if bracket > 0.0 {
        bracket * (inputs.lambda * inputs.basis_horizon() as f64).exp()
    } else {
        0.0
    };
    leading + tail
}

/// Which power of `max_norm` the arbitrary-switching specialization uses.
/// `Printed` is the form the one-term bound is usually stated in; `Derived`
/// is what the dwell-time bound reduces to termwise at dwell 1, two powers
/// lower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentMode {
    Printed,
    Derived,
}

/// The dwell-1 specialization: one correction term with count
/// `m (n-1)(m-1)` and the plain commutator norm.
pub fn arbitrary_switching_lhs(inputs: &ScalarInputs, mode: ExponentMode) -> f64 {
    let leading = if inputs.rho > 0.0 {
        inputs.rho * (inputs.lambda * f64::from(inputs.m)).exp()
    } else {
        0.0
    };
    let count = u64::from(inputs.m) * inputs.crossed();
    if count == 0 {
        return leading;
    }
    let horizon = inputs.basis_horizon();
    // count > 0 forces m >= 2, so both exponents are nonnegative.
    let exponent = match mode {
        ExponentMode::Printed => horizon as i32,
        ExponentMode::Derived => horizon as i32 - 2,
    };
    let coeff = count as f64 * inputs.eps.one_one;
    let tail = if coeff > 0.0 {
        coeff * inputs.max_norm.powi(exponent) * (inputs.lambda * horizon as f64).exp()
    } else {
        0.0
    };
    leading + tail
}

/// How the decay rate is chosen: fixed by the caller, or the largest rate
/// the bound tolerates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaMode {
    Fixed(f64),
    Maximize,
}

/// Largest rate keeping the bound at or below one, by bisection. The bound
/// is nondecreasing in the rate, so the search keeps the invariant
/// `lhs(lo) <= 1 < lhs(hi)`. Returns `None` when no positive rate works.
/// The upper bracket starts at `-ln(rho)/m` (where the leading term alone
/// reaches one) capped at [`LAMBDA_CAP`].
pub fn find_lambda(inputs: &ScalarInputs) -> Option<f64> {
    let at = |lambda: f64| {
        certificate_lhs(&ScalarInputs {
            lambda,
            ..*inputs
        })
    };
    if at(0.0) >= 1.0 {
        return None;
    }
    let mut hi = if inputs.rho > 0.0 {
        (-inputs.rho.ln() / f64::from(inputs.m)).min(LAMBDA_CAP)
    } else {
        LAMBDA_CAP
    };
    if at(hi) <= 1.0 {
        return Some(hi);
    }
    let mut lo = 0.0f64;
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo < BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if at(mid) <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo > 0.0 {
        Some(lo)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    NotCertified,
}

/// Scalars behind a verdict; present whenever a contraction power exists,
/// even for a failing certificate, so reports can show where it failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateDetail {
    pub m: u32,
    pub rho: f64,
    pub lambda: f64,
    pub max_norm: f64,
    pub k1: u64,
    pub k2: u64,
    pub k3: u64,
    pub eps: EpsilonTable,
    pub bracket: [f64; 4],
    pub lhs: f64,
    pub basis_horizon: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub delta: u32,
    pub verdict: Verdict,
    /// Slug-prefixed explanation when not certified.
    pub reason: Option<String>,
    pub screen: Vec<ScreenEntry>,
    pub detail: Option<CertificateDetail>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub lambda_mode: LambdaMode,
    pub m_max: u32,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            lambda_mode: LambdaMode::Maximize,
            m_max: DEFAULT_M_MAX,
        }
    }
}

/// Runs the full certificate pipeline. Total over well-formed inputs: a
/// family that cannot be certified yields a `NotCertified` verdict with a
/// reason, not an error.
pub fn certify(
    fam: &SubsystemFamily,
    delta: u32,
    options: &CertifyOptions,
) -> Result<Certificate, CertError> {
    if delta == 0 {
        return Err(CertError::InvalidDwell);
    }
    let screen = schur_screen(fam, options.m_max)?;
    let max_norm = screen.iter().fold(0.0f64, |acc, e| acc.max(e.norm));

    // All-zero family: every product past the first step vanishes, any rate
    // works; report a representative one.
    if max_norm == 0.0 {
        let (k1, k2, k3) = compute_k_scalars(fam.len(), delta, delta);
        let eps = EpsilonTable {
            delta_delta: 0.0,
            delta_one: 0.0,
            one_delta: 0.0,
            one_one: 0.0,
        };
        let inputs = ScalarInputs {
            n: fam.len(),
            delta,
            m: delta,
            rho: 0.0,
            lambda: 1.0,
            max_norm,
            k1,
            k2,
            k3,
            eps,
        };
        return Ok(Certificate {
            delta,
            verdict: Verdict::Certified,
            reason: None,
            screen,
            detail: Some(CertificateDetail {
                m: delta,
                rho: 0.0,
                lambda: 1.0,
                max_norm,
                k1,
                k2,
                k3,
                eps,
                bracket: [0.0; 4],
                lhs: 0.0,
                basis_horizon: inputs.basis_horizon(),
            }),
        });
    }

    let Some((m, rho)) = find_m(fam, delta, options.m_max)? else {
        return Ok(Certificate {
            delta,
            verdict: Verdict::NotCertified,
            reason: Some(format!(
                "no-contraction-power: no shared power in [{delta}, {}] is contractive",
                options.m_max
            )),
            screen,
            detail: None,
        });
    };

    let (k1, k2, k3) = compute_k_scalars(fam.len(), m, delta);
    let eps = epsilon_table(fam, delta)?;
    let mut inputs = ScalarInputs {
        n: fam.len(),
        delta,
        m,
        rho,
        lambda: 0.0,
        max_norm,
        k1,
        k2,
        k3,
        eps,
    };

    let (lambda, verdict, reason) = match options.lambda_mode {
        LambdaMode::Fixed(l) if l <= 0.0 || !l.is_finite() => (
            0.0,
            Verdict::NotCertified,
            Some(format!("rate-not-positive: lambda must be positive, got {l}")),
        ),
        LambdaMode::Fixed(l) => {
            inputs.lambda = l;
            if certificate_lhs(&inputs) <= 1.0 {
                (l, Verdict::Certified, None)
            } else {
                (
                    l,
                    Verdict::NotCertified,
                    Some(format!(
                        "bound-exceeds-one: product bound is {:.6} at rate {l}",
                        certificate_lhs(&inputs)
                    )),
                )
            }
        }
        LambdaMode::Maximize => match find_lambda(&inputs) {
            Some(l) => (l, Verdict::Certified, None),
            None => (
                0.0,
                Verdict::NotCertified,
                Some(
                    "not-certifiable: product bound exceeds one even as the rate approaches zero"
                        .into(),
                ),
            ),
        },
    };

    inputs.lambda = lambda;
    let detail = CertificateDetail {
        m,
        rho,
        lambda,
        max_norm,
        k1,
        k2,
        k3,
        eps,
        bracket: bracket_terms(&inputs),
        lhs: certificate_lhs(&inputs),
        basis_horizon: inputs.basis_horizon(),
    };

    Ok(Certificate {
        delta,
        verdict,
        reason,
        screen,
        detail: Some(detail),
    })
}
