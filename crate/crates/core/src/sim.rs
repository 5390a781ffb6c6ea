//! Switching signals, trajectory simulation, and exhaustive word checks.
//!
//! Signals live in time order (entry `t` is the subsystem active on step
//! `t`); the matrix product that advances the state reads them right to
//! left, which [`SwitchingSignal::product_word`] handles. Admissible means
//! every completed run lasts at least the dwell time; only the final,
//! possibly still ongoing run may be shorter.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::certificate::{CertError, SubsystemFamily};
use crate::matrix::{MatrixError, SquareMatrix};
use crate::word::{BlockWord, Run, WordError};

/// Default ceiling on exhaustively enumerated words.
pub const DEFAULT_ENUM_GUARD: u64 = 10_000_000;

/// Relative slack for floating-point bound comparisons: a value counts as a
/// violation only when it exceeds the bound by more than this times the
/// bound's scale.
pub const REL_SLACK: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("enumeration-too-large: {predicted} words exceed the guard {guard}")]
    EnumerationTooLarge { predicted: u128, guard: u64 },
    #[error("signals need at least two subsystems")]
    NeedTwoSubsystems,
    #[error("initial state has length {got}, family dimension is {want}")]
    StateDim { want: usize, got: usize },
    #[error("signal names subsystem {index} but the family has {n}")]
    UnknownSubsystem { index: usize, n: usize },
    #[error("empty x0 range: lo {lo} must not exceed hi {hi}")]
    BadRange { lo: f64, hi: f64 },
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A switching signal in time order: `indices[t]` is the 1-based subsystem
/// active on step `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchingSignal {
    pub delta: u32,
    pub indices: Vec<usize>,
}

impl SwitchingSignal {
    pub fn new(delta: u32, indices: Vec<usize>) -> Self {
        Self { delta, indices }
    }

    /// Number of steps the signal drives.
    pub fn horizon(&self) -> usize {
        self.indices.len()
    }

    /// Times `t >= 1` at which the active subsystem changes.
    pub fn switching_instants(&self) -> Vec<usize> {
        self.indices
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] != w[1])
            .map(|(t, _)| t + 1)
            .collect()
    }

    /// Runs earliest first.
    pub fn runs_time_order(&self) -> Vec<Run> {
        let mut runs: Vec<Run> = Vec::new();
        for &index in &self.indices {
            match runs.last_mut() {
                Some(last) if last.index == index => last.power += 1,
                _ => runs.push(Run { index, power: 1 }),
            }
        }
        runs
    }

    /// The product that advances the state over the whole signal, latest
    /// factor leftmost.
    pub fn product_word(&self) -> BlockWord {
        let pairs = self
            .runs_time_order()
            .iter()
            .rev()
            .map(|r| (r.index, r.power))
            .collect();
        BlockWord::new(pairs).expect("signal indices are 1-based")
    }

    /// True iff every completed run lasts at least `delta`; the final run
    /// may still be ongoing and is exempt.
    pub fn is_admissible(&self) -> bool {
        let runs = self.runs_time_order();
        if runs.len() <= 1 {
            return true;
        }
        runs[..runs.len() - 1].iter().all(|r| r.power >= self.delta)
    }
}

/// Draws a random admissible signal. Run lengths are uniform on
/// `delta ..= delta + max_extra`; the first subsystem is uniform over all
/// `n`, later ones uniform over the other `n - 1`. The final run is cut at
/// the horizon.
pub fn generate_signal(
    n: usize,
    delta: u32,
    horizon: usize,
    max_extra: u32,
    seed: u64,
) -> Result<SwitchingSignal, SimError> {
    if n < 2 {
        return Err(SimError::NeedTwoSubsystems);
    }
    if delta == 0 {
        return Err(SimError::Cert(CertError::InvalidDwell));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices = Vec::with_capacity(horizon);
    let mut cur = rng.random_range(1..=n);
    while indices.len() < horizon {
        let len = delta + rng.random_range(0..=max_extra);
        for _ in 0..len {
            if indices.len() == horizon {
                break;
            }
            indices.push(cur);
        }
        if indices.len() == horizon {
            break;
        }
        let r = rng.random_range(0..n - 1);
        cur = if r + 1 < cur { r + 1 } else { r + 2 };
    }
    Ok(SwitchingSignal::new(delta, indices))
}

/// One simulated trajectory: the state norms at `t = 0 ..= horizon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub trial: u64,
    pub x0: Vec<f64>,
    pub norms: Vec<f64>,
}

fn vec_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Runs `x(t+1) = A_{s(t)} x(t)` over the signal and records the norms.
pub fn simulate(
    fam: &SubsystemFamily,
    signal: &SwitchingSignal,
    x0: Vec<f64>,
) -> Result<TrajectoryRecord, SimError> {
    if x0.len() != fam.dim() {
        return Err(SimError::StateDim {
            want: fam.dim(),
            got: x0.len(),
        });
    }
    let mut norms = Vec::with_capacity(signal.horizon() + 1);
    let mut x = x0.clone();
    norms.push(vec_norm(&x));
    for &index in &signal.indices {
        let a = fam.matrix(index).ok_or(SimError::UnknownSubsystem {
            index,
            n: fam.len(),
        })?;
        x = a.apply(&x)?;
        norms.push(vec_norm(&x));
    }
    Ok(TrajectoryRecord {
        trial: 0,
        x0,
        norms,
    })
}

/// Number of admissible words of each length `1..=max_len`, by the run
/// recurrence `v(L) = 1 + (n-1) * sum over r in delta..L of v(L-r)`: a word
/// is a single (possibly short) run, or a completed first run of length `r`
/// followed by a word on a different first letter. Each length contributes
/// `n * v(L)` words. Saturates instead of overflowing.
pub fn count_admissible(n: usize, delta: u32, max_len: u32) -> u128 {
    let delta = delta as usize;
    let max_len = max_len as usize;
    let mut v = vec![0u128; max_len + 1];
    let mut total: u128 = 0;
    for len in 1..=max_len {
        let mut tails: u128 = 0;
        for r in delta..len {
            tails = tails.saturating_add(v[len - r]);
        }
        v[len] = tails.saturating_mul(n as u128 - 1).saturating_add(1);
        total = total.saturating_add(v[len].saturating_mul(n as u128));
    }
    total
}

/// Depth-first walk over all admissible words of length `1..=max_len` in
/// lexicographic time order, carrying the incremental product. The visitor
/// sees each word before its extensions; `runs` are in time order.
struct WordWalker<'a, F> {
    fam: &'a SubsystemFamily,
    delta: u32,
    max_len: u64,
    runs: Vec<(usize, u32)>,
    visit: F,
}

impl<F: FnMut(u64, &SquareMatrix, &[(usize, u32)])> WordWalker<'_, F> {
    fn go(&mut self, product: &SquareMatrix, len: u64) -> Result<(), SimError> {
        (self.visit)(len, product, &self.runs);
        if len == self.max_len {
            return Ok(());
        }
        let (cur, run_len) = *self.runs.last().expect("walker runs are never empty");
        for next in 1..=self.fam.len() {
            if next == cur {
                self.runs.last_mut().expect("nonempty").1 += 1;
                let p = self.fam.matrices()[next - 1].mul(product)?;
                self.go(&p, len + 1)?;
                self.runs.last_mut().expect("nonempty").1 -= 1;
            } else if u64::from(run_len) >= u64::from(self.delta) {
                self.runs.push((next, 1));
                let p = self.fam.matrices()[next - 1].mul(product)?;
                self.go(&p, len + 1)?;
                self.runs.pop();
            }
        }
        Ok(())
    }
}

fn walk_admissible<F>(
    fam: &SubsystemFamily,
    delta: u32,
    max_len: u32,
    guard: u64,
    visit: F,
) -> Result<(), SimError>
where
    F: FnMut(u64, &SquareMatrix, &[(usize, u32)]),
{
    if delta == 0 {
        return Err(SimError::Cert(CertError::InvalidDwell));
    }
    let predicted = count_admissible(fam.len(), delta, max_len);
    if predicted > u128::from(guard) {
        return Err(SimError::EnumerationTooLarge { predicted, guard });
    }
    let mut walker = WordWalker {
        fam,
        delta,
        max_len: u64::from(max_len),
        runs: Vec::new(),
        visit,
    };
    for first in 1..=fam.len() {
        walker.runs.push((first, 1));
        let p = fam.matrices()[first - 1].clone();
        walker.go(&p, 1)?;
        walker.runs.pop();
    }
    Ok(())
}

fn word_from_time_runs(runs: &[(usize, u32)]) -> BlockWord {
    let pairs = runs.iter().rev().copied().collect();
    BlockWord::new(pairs).expect("walker runs are valid")
}

/// All admissible words of length `1..=max_len` in deterministic
/// (time-lexicographic, shorter-prefix-first) order, as product words.
pub fn enumerate_admissible_words(
    fam: &SubsystemFamily,
    delta: u32,
    max_len: u32,
    guard: u64,
) -> Result<Vec<BlockWord>, SimError> {
    let mut out = Vec::new();
    walk_admissible(fam, delta, max_len, guard, |_, _, runs| {
        out.push(word_from_time_runs(runs));
    })?;
    Ok(out)
}

/// The overshoot constant of a certificate: the worst `norm * exp(rate *
/// len)` over all admissible words no longer than the basis horizon, floored
/// at one. Products at least that long split into certified segments, so
/// short words alone set the constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasisConstant {
    pub c: f64,
    pub horizon: u32,
    pub words_checked: u64,
    /// Word attaining the maximum; `None` when the floor of one wins.
    pub attained_at: Option<BlockWord>,
}

pub fn compute_basis_c(
    fam: &SubsystemFamily,
    delta: u32,
    m: u32,
    lambda: f64,
    guard: u64,
) -> Result<BasisConstant, SimError> {
    let horizon_u64 = fam.len() as u64 * (u64::from(m) - 1) + 1;
    let horizon = u32::try_from(horizon_u64).unwrap_or(u32::MAX);
    let mut best = 1.0f64;
    let mut attained: Option<BlockWord> = None;
    let mut words = 0u64;
    let mut norm_failure: Option<MatrixError> = None;
    walk_admissible(fam, delta, horizon, guard, |len, product, runs| {
        words += 1;
        match product.spectral_norm() {
            Ok(norm) => {
                let grown = norm.value * (lambda * len as f64).exp();
                if grown > best {
                    best = grown;
                    attained = Some(word_from_time_runs(runs));
                }
            }
            Err(e) => norm_failure = Some(e),
        }
    })?;
    if let Some(e) = norm_failure {
        return Err(SimError::Matrix(e));
    }
    Ok(BasisConstant {
        c: best,
        horizon,
        words_checked: words,
        attained_at: attained,
    })
}

/// Result of checking `norm(W) <= c * exp(-lambda * len)` over every
/// admissible word up to `max_len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuesBoundReport {
    pub c: f64,
    pub lambda: f64,
    pub max_len: u32,
    pub words_checked: u64,
    /// Worst `norm - c * exp(-lambda * len)` over all words; nonpositive
    /// means the bound held everywhere with room to spare.
    pub max_violation: f64,
    pub worst_word: Option<BlockWord>,
    /// True iff no word exceeded its own bound by more than [`REL_SLACK`]
    /// times the bound.
    pub pass: bool,
}

pub fn brute_force_bound_check(
    fam: &SubsystemFamily,
    delta: u32,
    c: f64,
    lambda: f64,
    max_len: u32,
    guard: u64,
) -> Result<GuesBoundReport, SimError> {
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst: Option<BlockWord> = None;
    let mut words = 0u64;
    let mut pass = true;
    let mut norm_failure: Option<MatrixError> = None;
    walk_admissible(fam, delta, max_len, guard, |len, product, runs| {
        words += 1;
        match product.spectral_norm() {
            Ok(norm) => {
                let allowed = c * (-lambda * len as f64).exp();
                let violation = norm.value - allowed;
                if violation > max_violation {
                    max_violation = violation;
                    worst = Some(word_from_time_runs(runs));
                }
                if violation > REL_SLACK * allowed {
                    pass = false;
                }
            }
            Err(e) => norm_failure = Some(e),
        }
    })?;
    if let Some(e) = norm_failure {
        return Err(SimError::Matrix(e));
    }
    Ok(GuesBoundReport {
        c,
        lambda,
        max_len,
        words_checked: words,
        max_violation: if words == 0 { 0.0 } else { max_violation },
        worst_word: worst,
        pass,
    })
}

/// Decay bound a Monte Carlo run checks trajectories against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSpec {
    pub c: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub horizon: usize,
    pub seed: u64,
    /// Component range for the random initial state.
    pub x0_range: (f64, f64),
    pub max_extra: u32,
    pub bound: Option<BoundSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub trials: u64,
    pub horizon: usize,
    /// `max over trials of norm(t) / norm(0)` for each `t`.
    pub per_t_max_ratio: Vec<f64>,
    pub bound: Option<BoundSpec>,
    /// Worst `norm(x(t)) - c * exp(-lambda t) * norm(x0)` over all samples.
    pub max_violation: Option<f64>,
    pub violations: u64,
    pub pass: Option<bool>,
}

/// Runs seeded random trajectories and, when a bound is supplied, checks
/// every sample point against it. Trial `k` derives its generator from
/// `seed + k`; the initial state uses the same seed on a separate stream,
/// so signal and state draws never interleave.
pub fn monte_carlo(
    fam: &SubsystemFamily,
    delta: u32,
    config: &McConfig,
) -> Result<(Vec<TrajectoryRecord>, McSummary), SimError> {
    let (lo, hi) = config.x0_range;
    // Finiteness first: it also rejects NaN endpoints, so the comparison
    // below only ever sees ordered values.
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(SimError::BadRange { lo, hi });
    }
    let mut records = Vec::with_capacity(config.trials as usize);
    let mut per_t_max_ratio = vec![0.0f64; config.horizon + 1];
    let mut max_violation: Option<f64> = None;
    let mut violations = 0u64;
    for trial in 0..config.trials {
        let trial_seed = config.seed.wrapping_add(trial);
        let signal = generate_signal(fam.len(), delta, config.horizon, config.max_extra, trial_seed)?;
        let mut state_rng = ChaCha8Rng::seed_from_u64(trial_seed);
        state_rng.set_stream(1);
        let x0: Vec<f64> = (0..fam.dim())
            .map(|_| state_rng.random_range(lo..=hi))
            .collect();
        let mut record = simulate(fam, &signal, x0)?;
        record.trial = trial;
        let n0 = record.norms[0];
        for (t, &nt) in record.norms.iter().enumerate() {
            let ratio = if n0 > 0.0 {
                nt / n0
            } else if nt > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            per_t_max_ratio[t] = per_t_max_ratio[t].max(ratio);
            if let Some(bound) = &config.bound {
                let allowed = bound.c * (-bound.lambda * t as f64).exp() * n0;
                let violation = nt - allowed;
                max_violation = Some(max_violation.map_or(violation, |v| v.max(violation)));
                if violation > REL_SLACK * bound.c * n0 {
                    violations += 1;
                }
            }
        }
        records.push(record);
    }
    let summary = McSummary {
        trials: config.trials,
        horizon: config.horizon,
        per_t_max_ratio,
        bound: config.bound,
        max_violation,
        violations,
        pass: config.bound.map(|_| violations == 0),
    };
    Ok((records, summary))
}

/// Writes records as `trial,t,norm` CSV rows with 17 significant digits,
/// enough for bit-exact round trips.
pub fn write_trajectory_csv<W: Write>(records: &[TrajectoryRecord], out: &mut W) -> io::Result<()> {
    writeln!(out, "trial,t,norm")?;
    for record in records {
        for (t, norm) in record.norms.iter().enumerate() {
            writeln!(out, "{},{},{:.16e}", record.trial, t, norm)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use std::collections::BTreeMap;

    #[test]
    fn signal_views_agree() {
        let s = SwitchingSignal::new(2, vec![1, 1, 1, 2, 2, 3, 3]);
        assert_eq!(s.horizon(), 7);
        assert_eq!(s.switching_instants(), vec![3, 5]);
        assert_eq!(
            s.runs_time_order(),
            vec![
                Run { index: 1, power: 3 },
                Run { index: 2, power: 2 },
                Run { index: 3, power: 2 }
            ]
        );
        assert_eq!(s.product_word().to_string(), "3^2 2^2 1^3");
        assert!(s.is_admissible());
        assert!(!SwitchingSignal::new(2, vec![1, 2, 2]).is_admissible());
        // The ongoing final run may be short.
        assert!(SwitchingSignal::new(2, vec![1, 1, 2]).is_admissible());
        assert!(SwitchingSignal::new(5, vec![1]).is_admissible());
    }

    #[test]
    fn generated_signals_are_admissible_and_deterministic() {
        for seed in 0..20 {
            let s = generate_signal(3, 2, 50, 3, seed).unwrap();
            assert_eq!(s.horizon(), 50);
            assert!(s.is_admissible(), "seed {seed}");
            let runs = s.runs_time_order();
            // Completed runs stay within delta ..= delta + max_extra.
            for r in &runs[..runs.len() - 1] {
                assert!(r.power >= 2 && r.power <= 5, "seed {seed}: {:?}", r);
            }
            let again = generate_signal(3, 2, 50, 3, seed).unwrap();
            assert_eq!(s, again);
        }
        assert!(generate_signal(1, 2, 10, 0, 0).is_err());
    }

    #[test]
    fn zero_extra_alternates_exact_runs() {
        let s = generate_signal(2, 3, 30, 0, 11).unwrap();
        let runs = s.runs_time_order();
        for r in &runs[..runs.len() - 1] {
            assert_eq!(r.power, 3);
        }
        for w in runs.windows(2) {
            assert_ne!(w[0].index, w[1].index);
        }
    }

    #[test]
    fn count_recurrence_matches_known_sequence() {
        // Two subsystems at dwell 2: per-length counts are twice the
        // Fibonacci numbers.
        let per_len: Vec<u128> = (1..=12)
            .map(|l| count_admissible(2, 2, l) - count_admissible(2, 2, l - 1))
            .collect();
        assert_eq!(
            per_len,
            vec![2, 2, 4, 6, 10, 16, 26, 42, 68, 110, 178, 288]
        );
        assert_eq!(count_admissible(2, 2, 12), 752);
        // Dwell 1 is all words.
        assert_eq!(count_admissible(2, 1, 10), 2u128.pow(11) - 2);
        assert_eq!(count_admissible(3, 1, 5), 3 + 9 + 27 + 81 + 243);
    }

    #[test]
    fn enumeration_is_lexicographic_in_time_order() {
        let fam = builtin::nominal_family();
        let words = enumerate_admissible_words(&fam, 2, 3, 1000).unwrap();
        let got: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        // Nodes come before their extensions; siblings are ordered by the
        // next letter, so the switch to subsystem 1 lands before the longer
        // run of 2.
        assert_eq!(
            got,
            vec!["1", "1^2", "1^3", "2 1^2", "2", "2^2", "1 2^2", "2^3"]
        );
    }

    #[test]
    fn enumeration_matches_count_and_dwell() {
        let fam = builtin::nominal_family();
        let words = enumerate_admissible_words(&fam, 2, 12, DEFAULT_ENUM_GUARD).unwrap();
        assert_eq!(words.len(), 752);
        let mut by_len: BTreeMap<u64, usize> = BTreeMap::new();
        for w in &words {
            *by_len.entry(w.total_length()).or_default() += 1;
            assert!(crate::word::validate_dwell(w, 2));
        }
        assert_eq!(by_len[&5], 10);
        assert_eq!(by_len[&12], 288);
    }

    #[test]
    fn enumeration_guard_trips() {
        let fam = builtin::nominal_family();
        let err = enumerate_admissible_words(&fam, 1, 40, 1000).unwrap_err();
        match err {
            SimError::EnumerationTooLarge { predicted, guard } => {
                assert_eq!(guard, 1000);
                assert_eq!(predicted, 2u128.pow(41) - 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn basis_constant_matches_frozen_value() {
        let fam = builtin::nominal_family();
        let basis = compute_basis_c(&fam, 2, 3, 0.01, DEFAULT_ENUM_GUARD).unwrap();
        assert_eq!(basis.horizon, 5);
        assert!((basis.c - 1.3820904038374817).abs() < 1e-9, "c {}", basis.c);
        // The worst overshoot is the bare first subsystem.
        assert_eq!(basis.attained_at.unwrap().to_string(), "1");
        assert_eq!(basis.words_checked, 2 + 2 + 4 + 6 + 10);
    }

    #[test]
    fn basis_constant_floors_at_one() {
        let fam = crate::certificate::SubsystemFamily::new(vec![
            SquareMatrix::scaled_identity(2, 0.1),
            SquareMatrix::scaled_identity(2, 0.2),
        ])
        .unwrap();
        let basis = compute_basis_c(&fam, 1, 1, 0.01, DEFAULT_ENUM_GUARD).unwrap();
        assert_eq!(basis.c, 1.0);
        assert!(basis.attained_at.is_none());
    }

    #[test]
    fn brute_force_passes_at_certified_rate() {
        let fam = builtin::nominal_family();
        let basis = compute_basis_c(&fam, 2, 3, 0.01, DEFAULT_ENUM_GUARD).unwrap();
        let report =
            brute_force_bound_check(&fam, 2, basis.c, 0.01, 12, DEFAULT_ENUM_GUARD).unwrap();
        assert_eq!(report.words_checked, 752);
        assert!(report.pass);
        assert!(
            report.max_violation <= REL_SLACK * basis.c,
            "violation {}",
            report.max_violation
        );
    }

    #[test]
    fn brute_force_rejects_absurd_rate() {
        // A huge rate inflates the constant on short words but the bound
        // collapses faster than the products do.
        let fam = builtin::nominal_family();
        let basis = compute_basis_c(&fam, 2, 3, 10.0, DEFAULT_ENUM_GUARD).unwrap();
        assert!((basis.c - 1.7989430318877135e21).abs() < 1e12);
        let report =
            brute_force_bound_check(&fam, 2, basis.c, 10.0, 12, DEFAULT_ENUM_GUARD).unwrap();
        assert!(!report.pass);
        assert!((report.max_violation - 0.23731649709003988).abs() < 1e-9);
    }

    #[test]
    fn simulate_contracts_on_constant_signal() {
        let fam = builtin::nominal_family();
        let signal = SwitchingSignal::new(1, vec![2; 10]);
        let record = simulate(&fam, &signal, vec![3.0, -4.0]).unwrap();
        assert_eq!(record.norms.len(), 11);
        assert!((record.norms[0] - 5.0).abs() < 1e-15);
        let a2_norm = 0.1487131795;
        for w in record.norms.windows(2) {
            assert!(w[1] <= a2_norm * w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn simulate_rejects_bad_inputs() {
        let fam = builtin::nominal_family();
        let signal = SwitchingSignal::new(1, vec![3]);
        assert_eq!(
            simulate(&fam, &signal, vec![1.0, 0.0]).unwrap_err(),
            SimError::UnknownSubsystem { index: 3, n: 2 }
        );
        let signal = SwitchingSignal::new(1, vec![1]);
        assert_eq!(
            simulate(&fam, &signal, vec![1.0]).unwrap_err(),
            SimError::StateDim { want: 2, got: 1 }
        );
    }

    #[test]
    fn monte_carlo_is_deterministic_and_bounded() {
        let fam = builtin::nominal_family();
        let config = McConfig {
            trials: 32,
            horizon: 40,
            seed: 2024,
            x0_range: (-100.0, 100.0),
            max_extra: 3,
            bound: Some(BoundSpec {
                c: 1.3820904038374817,
                lambda: 0.01,
            }),
        };
        let (records, summary) = monte_carlo(&fam, 2, &config).unwrap();
        assert_eq!(records.len(), 32);
        assert_eq!(summary.per_t_max_ratio.len(), 41);
        assert!((summary.per_t_max_ratio[0] - 1.0).abs() < 1e-15);
        assert_eq!(summary.pass, Some(true));
        assert_eq!(summary.violations, 0);
        // Ratios decay overall: the tail sits far below the start.
        assert!(summary.per_t_max_ratio[40] < 0.1);

        let (again, summary2) = monte_carlo(&fam, 2, &config).unwrap();
        assert_eq!(records, again);
        assert_eq!(summary, summary2);

        let mut shifted = config.clone();
        shifted.seed = 2025;
        let (other, _) = monte_carlo(&fam, 2, &shifted).unwrap();
        assert_ne!(records, other);
    }

    #[test]
    fn monte_carlo_rejects_empty_range() {
        let fam = builtin::nominal_family();
        let config = McConfig {
            trials: 1,
            horizon: 1,
            seed: 0,
            x0_range: (1.0, -1.0),
            max_extra: 0,
            bound: None,
        };
        assert!(matches!(
            monte_carlo(&fam, 2, &config),
            Err(SimError::BadRange { .. })
        ));
    }

    #[test]
    fn csv_format_is_fixed_width_and_stable() {
        let records = vec![TrajectoryRecord {
            trial: 3,
            x0: vec![3.0, 4.0],
            norms: vec![5.0, 2.5],
        }];
        let mut buf = Vec::new();
        write_trajectory_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "trial,t,norm\n3,0,5.0000000000000000e0\n3,1,2.5000000000000000e0\n"
        );
    }
}
