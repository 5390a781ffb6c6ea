//! Matrix words in run-block form and the commutator rewrite.
//!
//! A word is stored latest-factor-leftmost, matching the product
//! `A_{s(t-1)} ... A_{s(0)}` that advances a trajectory. The rewrite pulls m
//! copies of a chosen target subsystem to the front of a word, emitting one
//! signed commutator term per adjacent exchange; the result is an exact
//! algebraic identity that the evaluator can check numerically.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::certificate::{compute_k_scalars, SubsystemFamily};
use crate::matrix::{commutator, MatrixError, SquareMatrix};

#[derive(Debug, Error, PartialEq)]
pub enum WordError {
    #[error("parse error at column {column}: {reason}")]
    Parse { column: usize, reason: String },
    #[error("no-dominant-index: no subsystem occurs {m} or more times")]
    NoDominantIndex { m: u32 },
    #[error("target {target} occurs {have} times, need at least {need}")]
    InsufficientTarget { target: usize, have: u64, need: u32 },
    #[error("word names subsystem {index} but the family has {n}")]
    UnknownSubsystem { index: usize, n: usize },
    #[error("dwell time must be at least 1")]
    InvalidDwell,
    #[error("subsystem indices are 1-based; 0 is not a valid target")]
    InvalidTarget,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// One maximal run `A_index^power` of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Run {
    pub index: usize,
    pub power: u32,
}

/// A matrix word as an ordered list of runs, leftmost run first.
///
/// Adjacent runs always carry distinct indices; the constructors merge
/// neighbors to keep that invariant. The empty word (an identity product)
/// is allowed and renders as an empty string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockWord {
    runs: Vec<Run>,
}

impl BlockWord {
    /// Builds a word from `(index, power)` pairs, merging adjacent runs with
    /// equal indices. Zero powers and zero indices are rejected.
    pub fn new(pairs: Vec<(usize, u32)>) -> Result<Self, WordError> {
        let mut runs: Vec<Run> = Vec::with_capacity(pairs.len());
        for (index, power) in pairs {
            if index == 0 {
                return Err(WordError::InvalidTarget);
            }
            if power == 0 {
                return Err(WordError::Parse {
                    column: 0,
                    reason: "run power must be positive".into(),
                });
            }
            match runs.last_mut() {
                Some(last) if last.index == index => last.power += power,
                _ => runs.push(Run { index, power }),
            }
        }
        Ok(Self { runs })
    }

    pub fn empty() -> Self {
        Self { runs: Vec::new() }
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn total_length(&self) -> u64 {
        self.runs.iter().map(|r| u64::from(r.power)).sum()
    }

    /// Occurrences of one subsystem across all runs.
    pub fn count_of(&self, index: usize) -> u64 {
        self.runs
            .iter()
            .filter(|r| r.index == index)
            .map(|r| u64::from(r.power))
            .sum()
    }

    /// The same word read in the opposite direction (time order vs product
    /// order). Used to validate signal prefixes, whose truncated run sits at
    /// the written front.
    pub fn reversed(&self) -> Self {
        Self {
            runs: self.runs.iter().rev().copied().collect(),
        }
    }

    /// Human-oriented rendering: `A3^2 A2^2 A1^3`.
    pub fn pretty(&self) -> String {
        self.runs
            .iter()
            .map(|r| {
                if r.power == 1 {
                    format!("A{}", r.index)
                } else {
                    format!("A{}^{}", r.index, r.power)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for BlockWord {
    /// Grammar rendering: whitespace-separated `idx^pow` tokens, bare `idx`
    /// for power 1. Round-trips through the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for r in &self.runs {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if r.power == 1 {
                write!(f, "{}", r.index)?;
            } else {
                write!(f, "{}^{}", r.index, r.power)?;
            }
        }
        Ok(())
    }
}

impl FromStr for BlockWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pairs = Vec::new();
        let mut token_start = None;
        let bytes = s.as_bytes();
        let mut i = 0;
        while i <= bytes.len() {
            let at_ws = i == bytes.len() || bytes[i].is_ascii_whitespace();
            match (token_start, at_ws) {
                (None, false) => token_start = Some(i),
                (Some(start), true) => {
                    pairs.push(parse_token(&s[start..i], start + 1)?);
                    token_start = None;
                }
                _ => {}
            }
            i += 1;
        }
        if pairs.is_empty() {
            return Err(WordError::Parse {
                column: 1,
                reason: "expected at least one idx^pow token".into(),
            });
        }
        BlockWord::new(pairs)
    }
}

/// Parses one `idx` or `idx^pow` token; `column` is the 1-based position of
/// the token start, used verbatim in error messages.
fn parse_token(token: &str, column: usize) -> Result<(usize, u32), WordError> {
    let (idx_part, pow_part) = match token.split_once('^') {
        Some((i, p)) => (i, Some(p)),
        None => (token, None),
    };
    let index: usize = idx_part.parse().map_err(|_| WordError::Parse {
        column,
        reason: format!("expected a subsystem index, found {idx_part:?}"),
    })?;
    if index == 0 {
        return Err(WordError::Parse {
            column,
            reason: "subsystem indices are 1-based".into(),
        });
    }
    let power: u32 = match pow_part {
        None => 1,
        Some(p) => {
            let pow_column = column + idx_part.len() + 1;
            let power = p.parse().map_err(|_| WordError::Parse {
                column: pow_column,
                reason: format!("expected a positive power, found {p:?}"),
            })?;
            if power == 0 {
                return Err(WordError::Parse {
                    column: pow_column,
                    reason: "power must be positive".into(),
                });
            }
            power
        }
    };
    Ok((index, power))
}

/// True iff every completed run carries at least `delta` factors. The first
/// run in word order is the latest in time and may still be in progress when
/// the word is read off a signal, so only the runs after it are checked.
pub fn validate_dwell(word: &BlockWord, delta: u32) -> bool {
    let runs = word.runs();
    if runs.len() <= 1 {
        return true;
    }
    runs[1..].iter().all(|r| r.power >= delta)
}

/// Smallest subsystem index occurring at least `m` times. Words of length
/// `N(m-1)+1` always have one by pigeonhole.
pub fn choose_target(word: &BlockWord, m: u32) -> Result<usize, WordError> {
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for r in word.runs() {
        *counts.entry(r.index).or_default() += u64::from(r.power);
    }
    counts
        .into_iter()
        .find(|(_, c)| *c >= u64::from(m))
        .map(|(i, _)| i)
        .ok_or(WordError::NoDominantIndex { m })
}

/// Marker for `[A_i^p, A_j^q] = A_i^p A_j^q - A_j^q A_i^p`, with `i` the
/// rewrite target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CommutatorMarker {
    pub i: usize,
    pub j: usize,
    pub p: u32,
    pub q: u32,
}

impl CommutatorMarker {
    /// Bracket rendering, e.g. `[A1^2, A3^2]`.
    pub fn pretty(&self) -> String {
        let side = |index: usize, power: u32| {
            if power == 1 {
                format!("A{index}")
            } else {
                format!("A{index}^{power}")
            }
        };
        format!("[{}, {}]", side(self.i, self.p), side(self.j, self.q))
    }
}

/// Which kinds of moving unit and crossed chunk produced a term. Kinds are
/// assigned when the pieces are formed, so a length-1 block at delta = 1
/// still counts as a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermCategory {
    BlockBlock,
    BlockSingle,
    SingleBlock,
    SingleSingle,
}

/// One summand of a rewrite: `sign * prefix * [commutator] * suffix`.
/// The leading term has no commutator and an empty suffix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionTerm {
    pub sign: i8,
    pub prefix: BlockWord,
    pub commutator: Option<CommutatorMarker>,
    pub suffix: BlockWord,
    pub category: Option<TermCategory>,
}

impl DecompositionTerm {
    pub fn pretty(&self) -> String {
        let sign = if self.sign >= 0 { "+" } else { "-" };
        let mut parts = Vec::new();
        if !self.prefix.is_empty() {
            parts.push(self.prefix.pretty());
        }
        if let Some(c) = &self.commutator {
            parts.push(c.pretty());
        }
        if !self.suffix.is_empty() {
            parts.push(self.suffix.pretty());
        }
        if parts.is_empty() {
            parts.push("I".into());
        }
        format!("{sign} {}", parts.join(" "))
    }
}

/// Per-category tallies of emitted commutator terms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CategoryCounts {
    pub block_block: u64,
    pub block_single: u64,
    pub single_block: u64,
    pub single_single: u64,
}

impl CategoryCounts {
    pub fn total(&self) -> u64 {
        self.block_block + self.block_single + self.single_block + self.single_single
    }

    fn bump(&mut self, category: TermCategory) {
        match category {
            TermCategory::BlockBlock => self.block_block += 1,
            TermCategory::BlockSingle => self.block_single += 1,
            TermCategory::SingleBlock => self.single_block += 1,
            TermCategory::SingleSingle => self.single_single += 1,
        }
    }
}

/// Result of rewriting a word: the original, the leading term, and every
/// emitted commutator term (newest first after the leading term).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub word: BlockWord,
    pub target: usize,
    pub m: u32,
    pub delta: u32,
    pub terms: Vec<DecompositionTerm>,
    pub counts: CategoryCounts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PieceKind {
    /// Non-target material, pre-chunked per run: delta-blocks on the left,
    /// the power-mod-delta singles trailing on the right.
    Chunk { block: bool },
    /// A selected target unit that will move to the front.
    Unit { block: bool },
    /// Unselected target material beyond the first m occurrences; never
    /// crossed because selection is leftmost-first.
    Leftover,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    id: usize,
    index: usize,
    power: u32,
    kind: PieceKind,
}

/// Rewrites `word` so that `m` copies of `target` lead, one adjacent
/// exchange at a time.
///
/// Selection takes the leftmost `m` target occurrences; within a run the
/// trailing `mod delta` singles sit left of the delta-blocks. Units move
/// rightmost run first, singles before blocks, each travelling left across
/// pre-chunked non-target material. An exchange of unit `X^p` across chunk
/// `Y^q` rewrites `Y^q X^p` as `X^p Y^q - [X^p, Y^q]` and emits the bracket
/// as one term. Same-index crossings commute exactly and emit nothing.
/// Dwell validity is not required here; only the count audit cares.
pub fn decompose(
    word: &BlockWord,
    target: usize,
    m: u32,
    delta: u32,
) -> Result<Decomposition, WordError> {
    if delta == 0 {
        return Err(WordError::InvalidDwell);
    }
    if target == 0 {
        return Err(WordError::InvalidTarget);
    }
    if m == 0 {
        return Err(WordError::InsufficientTarget {
            target,
            have: word.count_of(target),
            need: 1,
        });
    }
    let have = word.count_of(target);
    if have < u64::from(m) {
        return Err(WordError::InsufficientTarget {
            target,
            have,
            need: m,
        });
    }

    let mut body: Vec<Piece> = Vec::new();
    // Unit ids grouped by source run, in written run order.
    let mut units_per_run: Vec<Vec<usize>> = Vec::new();
    let mut next_id = 0;
    let mut push = |body: &mut Vec<Piece>, index, power, kind| {
        body.push(Piece {
            id: next_id,
            index,
            power,
            kind,
        });
        next_id += 1;
        next_id - 1
    };

    let mut remaining = m;
    for run in word.runs() {
        if run.index == target && remaining > 0 {
            let take = run.power.min(remaining);
            remaining -= take;
            let blocks = take / delta;
            let singles = take % delta;
            let mut ids = Vec::new();
            for _ in 0..singles {
                ids.push(push(&mut body, target, 1, PieceKind::Unit { block: false }));
            }
            for _ in 0..blocks {
                ids.push(push(
                    &mut body,
                    target,
                    delta,
                    PieceKind::Unit { block: true },
                ));
            }
            units_per_run.push(ids);
            if run.power > take {
                push(&mut body, target, run.power - take, PieceKind::Leftover);
            }
        } else if run.index == target {
            push(&mut body, target, run.power, PieceKind::Leftover);
        } else {
            let blocks = run.power / delta;
            let singles = run.power % delta;
            for _ in 0..blocks {
                push(
                    &mut body,
                    run.index,
                    delta,
                    PieceKind::Chunk { block: true },
                );
            }
            for _ in 0..singles {
                push(&mut body, run.index, 1, PieceKind::Chunk { block: false });
            }
        }
    }

    // Movement order: rightmost target run first; a run's list already
    // places singles before blocks.
    let unit_order: Vec<usize> = units_per_run.into_iter().rev().flatten().collect();

    let mut placed: u32 = 0;
    let mut emitted: Vec<DecompositionTerm> = Vec::new();
    let mut counts = CategoryCounts::default();

    let render = |placed: u32, pieces: &[Piece]| -> BlockWord {
        let mut pairs = Vec::with_capacity(pieces.len() + 1);
        if placed > 0 {
            pairs.push((target, placed));
        }
        pairs.extend(pieces.iter().map(|p| (p.index, p.power)));
        BlockWord::new(pairs).expect("pieces carry valid indices and powers")
    };

    for unit_id in unit_order {
        loop {
            let pos = body
                .iter()
                .position(|p| p.id == unit_id)
                .expect("unit stays in body until placed");
            if pos == 0 {
                let unit = body.remove(0);
                placed += unit.power;
                break;
            }
            let left = body[pos - 1];
            match left.kind {
                PieceKind::Unit { .. } | PieceKind::Leftover => {
                    // Same subsystem on both sides: exchange is exact, no term.
                    body.swap(pos - 1, pos);
                }
                PieceKind::Chunk { block: chunk_block } => {
                    let unit = body[pos];
                    let unit_block = matches!(unit.kind, PieceKind::Unit { block: true });
                    let category = match (unit_block, chunk_block) {
                        (true, true) => TermCategory::BlockBlock,
                        (true, false) => TermCategory::BlockSingle,
                        (false, true) => TermCategory::SingleBlock,
                        (false, false) => TermCategory::SingleSingle,
                    };
                    counts.bump(category);
                    emitted.push(DecompositionTerm {
                        sign: -1,
                        prefix: render(placed, &body[..pos - 1]),
                        commutator: Some(CommutatorMarker {
                            i: target,
                            j: left.index,
                            p: unit.power,
                            q: left.power,
                        }),
                        suffix: render(0, &body[pos + 1..]),
                        category: Some(category),
                    });
                    body.swap(pos - 1, pos);
                }
            }
        }
    }
    debug_assert_eq!(placed, m);

    let leading = DecompositionTerm {
        sign: 1,
        prefix: render(placed, &body),
        commutator: None,
        suffix: BlockWord::empty(),
        category: None,
    };

    let mut terms = Vec::with_capacity(emitted.len() + 1);
    terms.push(leading);
    terms.extend(emitted.into_iter().rev());

    Ok(Decomposition {
        word: word.clone(),
        target,
        m,
        delta,
        terms,
        counts,
    })
}

/// Evaluates a word as a matrix product, leftmost factor first. The empty
/// word is the identity.
pub fn eval_word(word: &BlockWord, fam: &SubsystemFamily) -> Result<SquareMatrix, WordError> {
    let mut acc = SquareMatrix::identity(fam.dim());
    for run in word.runs() {
        let a = subsystem(fam, run.index)?;
        acc = acc.mul(&a.pow(run.power))?;
    }
    Ok(acc)
}

fn subsystem(fam: &SubsystemFamily, index: usize) -> Result<&SquareMatrix, WordError> {
    fam.matrix(index).ok_or(WordError::UnknownSubsystem {
        index,
        n: fam.len(),
    })
}

/// Numeric check of a rewrite: the original product, the signed term sum,
/// and the spectral norm of their difference. The rewrite is an algebraic
/// identity, so the residual is rounding noise only.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCheck {
    pub lhs: SquareMatrix,
    pub rhs: SquareMatrix,
    pub residual_norm: f64,
}

pub fn evaluate_decomposition(
    dec: &Decomposition,
    fam: &SubsystemFamily,
) -> Result<DecompositionCheck, WordError> {
    let lhs = eval_word(&dec.word, fam)?;
    let mut rhs = SquareMatrix::zeros(fam.dim());
    for term in &dec.terms {
        let mut value = eval_word(&term.prefix, fam)?;
        if let Some(c) = &term.commutator {
            let e = commutator(subsystem(fam, c.i)?, subsystem(fam, c.j)?, c.p, c.q)?;
            value = value.mul(&e)?;
        }
        value = value.mul(&eval_word(&term.suffix, fam)?)?;
        rhs = if term.sign >= 0 {
            rhs.add(&value)?
        } else {
            rhs.sub(&value)?
        };
    }
    let residual_norm = lhs.sub(&rhs)?.spectral_norm()?.value;
    Ok(DecompositionCheck {
        lhs,
        rhs,
        residual_norm,
    })
}

/// One row of the count audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CategoryAudit {
    pub category: TermCategory,
    pub actual: u64,
    pub bound: u64,
    pub within_bound: bool,
}

/// Emitted-term tallies against the four certificate budgets.
///
/// The budgets assume the crossed material chunks into whole delta-blocks
/// plus at most the certificate's single allowance; words outside that shape
/// are reported with `within_bound = false` rather than rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountAudit {
    pub categories: [CategoryAudit; 4],
    pub total_actual: u64,
    pub total_bound: u64,
    pub all_within: bool,
}

pub fn audit_counts(dec: &Decomposition, n: usize) -> CountAudit {
    let (k1, k2, k3) = compute_k_scalars(n, dec.m, dec.delta);
    let singles_budget = u64::from(dec.m) - k1 * u64::from(dec.delta);
    let bounds = [
        (TermCategory::BlockBlock, dec.counts.block_block, k1 * k2),
        (TermCategory::BlockSingle, dec.counts.block_single, k1 * k3),
        (
            TermCategory::SingleBlock,
            dec.counts.single_block,
            singles_budget * k2,
        ),
        (
            TermCategory::SingleSingle,
            dec.counts.single_single,
            singles_budget * k3,
        ),
    ];
    let categories = bounds.map(|(category, actual, bound)| CategoryAudit {
        category,
        actual,
        bound,
        within_bound: actual <= bound,
    });
    CountAudit {
        categories,
        total_actual: categories.iter().map(|c| c.actual).sum(),
        total_bound: categories.iter().map(|c| c.bound).sum(),
        all_within: categories.iter().all(|c| c.within_bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn bw(s: &str) -> BlockWord {
        if s.is_empty() {
            BlockWord::empty()
        } else {
            s.parse().unwrap()
        }
    }

    /// Compact view of a term for golden comparisons:
    /// (sign, prefix, commutator indices/powers, suffix).
    type Shape = (i8, String, Option<(usize, usize, u32, u32)>, String);

    fn shape(t: &DecompositionTerm) -> Shape {
        (
            t.sign,
            t.prefix.to_string(),
            t.commutator.map(|c| (c.i, c.j, c.p, c.q)),
            t.suffix.to_string(),
        )
    }

    #[test]
    fn parse_and_display_round_trip() {
        let w = bw("3^2 2^2 1^3");
        assert_eq!(
            w.runs(),
            &[
                Run { index: 3, power: 2 },
                Run { index: 2, power: 2 },
                Run { index: 1, power: 3 }
            ]
        );
        assert_eq!(w.to_string(), "3^2 2^2 1^3");
        assert_eq!(w.total_length(), 7);
        assert_eq!(bw("2").runs(), &[Run { index: 2, power: 1 }]);
        assert_eq!(bw("2").to_string(), "2");
        assert_eq!(w.pretty(), "A3^2 A2^2 A1^3");
    }

    #[test]
    fn parse_merges_adjacent_runs() {
        let w = bw("1 1^2 2");
        assert_eq!(
            w.runs(),
            &[Run { index: 1, power: 3 }, Run { index: 2, power: 1 }]
        );
    }

    #[test]
    fn parse_errors_carry_columns() {
        let err = "3^2 x^2".parse::<BlockWord>().unwrap_err();
        assert_eq!(
            err,
            WordError::Parse {
                column: 5,
                reason: "expected a subsystem index, found \"x\"".into()
            }
        );
        let err = "3^0".parse::<BlockWord>().unwrap_err();
        assert!(matches!(err, WordError::Parse { column: 3, .. }));
        let err = "0^2".parse::<BlockWord>().unwrap_err();
        assert!(matches!(err, WordError::Parse { column: 1, .. }));
        let err = "  ".parse::<BlockWord>().unwrap_err();
        assert!(matches!(err, WordError::Parse { column: 1, .. }));
        let err = "1 2^".parse::<BlockWord>().unwrap_err();
        assert!(matches!(err, WordError::Parse { column: 5, .. }));
    }

    #[test]
    fn dwell_validation_exempts_latest_run() {
        assert!(validate_dwell(&bw("3^2 2^2 1^3"), 2));
        // The leftmost run is the one still in progress; it may be short.
        assert!(validate_dwell(&bw("3 2^2 1^3"), 2));
        assert!(validate_dwell(&bw("2 1^2"), 2));
        // Completed runs may not be.
        assert!(!validate_dwell(&bw("3^2 2 1^3"), 2));
        assert!(!validate_dwell(&bw("2^2 1"), 2));
        assert!(validate_dwell(&bw("3 2 1 2 1^5"), 1));
        assert!(validate_dwell(&bw("1"), 7));
        assert!(validate_dwell(&BlockWord::empty(), 3));
    }

    #[test]
    fn target_choice_prefers_smallest_index() {
        assert_eq!(choose_target(&bw("3^2 2^2 1^3"), 3).unwrap(), 1);
        assert_eq!(choose_target(&bw("1^5"), 3).unwrap(), 1);
        assert_eq!(choose_target(&bw("2^3 1^3"), 3).unwrap(), 1);
        assert_eq!(
            choose_target(&bw("2 1"), 3).unwrap_err(),
            WordError::NoDominantIndex { m: 3 }
        );
    }

    #[test]
    fn decompose_single_run_is_one_term() {
        let dec = decompose(&bw("1^3"), 1, 3, 2).unwrap();
        assert_eq!(dec.terms.len(), 1);
        assert_eq!(shape(&dec.terms[0]), (1, "1^3".into(), None, "".into()));
        assert_eq!(dec.counts.total(), 0);
    }

    #[test]
    fn decompose_dwell_two_golden() {
        // Three subsystems, one target run at the right; reproduces the
        // worked five-term rewrite exactly.
        let dec = decompose(&bw("3^2 2^2 1^3"), 1, 3, 2).unwrap();
        let got: Vec<_> = dec.terms.iter().map(shape).collect();
        let want = vec![
            (1, "1^3 3^2 2^2".into(), None, "".into()),
            (-1, "1".into(), Some((1, 3, 2, 2)), "2^2".into()),
            (-1, "1 3^2".into(), Some((1, 2, 2, 2)), "".into()),
            (-1, "".into(), Some((1, 3, 1, 2)), "2^2 1^2".into()),
            (-1, "3^2".into(), Some((1, 2, 1, 2)), "1^2".into()),
        ];
        assert_eq!(got, want);
        assert_eq!(
            dec.counts,
            CategoryCounts {
                block_block: 2,
                block_single: 0,
                single_block: 2,
                single_single: 0
            }
        );
        let cats: Vec<_> = dec.terms[1..].iter().map(|t| t.category.unwrap()).collect();
        assert_eq!(
            cats,
            vec![
                TermCategory::BlockBlock,
                TermCategory::BlockBlock,
                TermCategory::SingleBlock,
                TermCategory::SingleBlock
            ]
        );
    }

    #[test]
    fn decompose_dwell_one_golden() {
        let dec = decompose(&bw("3^2 2^2 1^3"), 1, 3, 1).unwrap();
        let got: Vec<_> = dec.terms.iter().map(shape).collect();
        let e = |j| Some((1usize, j, 1u32, 1u32));
        let want = vec![
            (1, "1^3 3^2 2^2".into(), None, "".into()),
            (-1, "1^2".into(), e(3), "3 2^2".into()),
            (-1, "1^2 3".into(), e(3), "2^2".into()),
            (-1, "1^2 3^2".into(), e(2), "2".into()),
            (-1, "1^2 3^2 2".into(), e(2), "".into()),
            (-1, "1".into(), e(3), "3 2^2 1".into()),
            (-1, "1 3".into(), e(3), "2^2 1".into()),
            (-1, "1 3^2".into(), e(2), "2 1".into()),
            (-1, "1 3^2 2".into(), e(2), "1".into()),
            (-1, "".into(), e(3), "3 2^2 1^2".into()),
            (-1, "3".into(), e(3), "2^2 1^2".into()),
            (-1, "3^2".into(), e(2), "2 1^2".into()),
            (-1, "3^2 2".into(), e(2), "1^2".into()),
        ];
        assert_eq!(got, want);
        assert_eq!(dec.counts.total(), 12);
        // At dwell 1 every unit and chunk is a block.
        assert_eq!(dec.counts.block_block, 12);
    }

    #[test]
    fn decompose_rejects_scarce_target() {
        let err = decompose(&bw("2^2 1^2"), 1, 3, 2).unwrap_err();
        assert_eq!(
            err,
            WordError::InsufficientTarget {
                target: 1,
                have: 2,
                need: 3
            }
        );
    }

    #[test]
    fn decompose_keeps_unselected_leftover_in_place() {
        let dec = decompose(&bw("2^2 1^4"), 1, 3, 2).unwrap();
        let got: Vec<_> = dec.terms.iter().map(shape).collect();
        let want = vec![
            (1, "1^3 2^2 1".into(), None, "".into()),
            (-1, "1".into(), Some((1, 2, 2, 2)), "1".into()),
            (-1, "".into(), Some((1, 2, 1, 2)), "1^3".into()),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn evaluate_golden_decompositions_to_rounding() {
        let fam = builtin::extended_family();
        for delta in [1, 2] {
            let dec = decompose(&bw("3^2 2^2 1^3"), 1, 3, delta).unwrap();
            let check = evaluate_decomposition(&dec, &fam).unwrap();
            assert!(
                check.residual_norm <= 1e-10,
                "delta {delta}: residual {}",
                check.residual_norm
            );
        }
    }

    #[test]
    fn evaluate_telescopes_with_leftover_material() {
        let fam = builtin::extended_family();
        let dec = decompose(&bw("2^2 1^4"), 1, 3, 2).unwrap();
        let check = evaluate_decomposition(&dec, &fam).unwrap();
        assert!(check.residual_norm <= 1e-12);
    }

    #[test]
    fn evaluate_rejects_foreign_indices() {
        let fam = builtin::nominal_family();
        let dec = decompose(&bw("3^2 2^2 1^3"), 1, 3, 2).unwrap();
        let err = evaluate_decomposition(&dec, &fam).unwrap_err();
        assert_eq!(err, WordError::UnknownSubsystem { index: 3, n: 2 });
    }

    #[test]
    fn audit_worked_example_dwell_two() {
        let dec = decompose(&bw("3^2 2^2 1^3"), 1, 3, 2).unwrap();
        let audit = audit_counts(&dec, 3);
        let rows: Vec<_> = audit.categories.iter().map(|c| (c.actual, c.bound)).collect();
        assert_eq!(rows, vec![(2, 2), (0, 0), (2, 2), (0, 0)]);
        assert!(audit.all_within);
    }

    #[test]
    fn audit_worked_example_dwell_one() {
        let dec = decompose(&bw("3^2 2^2 1^3"), 1, 3, 1).unwrap();
        let audit = audit_counts(&dec, 3);
        assert_eq!(audit.total_actual, 12);
        assert_eq!(audit.total_bound, 12);
        assert!(audit.all_within);
    }

    #[test]
    fn audit_trivial_word() {
        let dec = decompose(&bw("1^3"), 1, 3, 2).unwrap();
        let audit = audit_counts(&dec, 2);
        assert_eq!(audit.total_actual, 0);
        assert!(audit.all_within);
    }

    #[test]
    fn term_pretty_rendering() {
        let dec = decompose(&bw("3^2 2^2 1^3"), 1, 3, 2).unwrap();
        assert_eq!(dec.terms[0].pretty(), "+ A1^3 A3^2 A2^2");
        assert_eq!(dec.terms[1].pretty(), "- A1 [A1^2, A3^2] A2^2");
        assert_eq!(dec.terms[3].pretty(), "- [A1, A3^2] A2^2 A1^2");
    }
}
