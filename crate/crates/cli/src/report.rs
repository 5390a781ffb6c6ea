//! Report structures shared by the text and JSON outputs. Every scalar row
//! carries the formula it instantiates, so a report can be audited without
//! the source at hand.

use serde::Serialize;

use dwellcert_core::certificate::{Certificate, CertificateDetail, ScreenEntry};
use dwellcert_core::sim::{BasisConstant, GuesBoundReport, McSummary};
use dwellcert_core::word::{CountAudit, Decomposition, TermCategory};

fn category_name(c: TermCategory) -> &'static str {
    match c {
        TermCategory::BlockBlock => "block-block",
        TermCategory::BlockSingle => "block-single",
        TermCategory::SingleBlock => "single-block",
        TermCategory::SingleSingle => "single-single",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyInfo {
    pub source: String,
    pub n: usize,
    pub d: usize,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScreenRow {
    pub label: String,
    pub norm: f64,
    pub contractive_power: Option<u32>,
    pub norm_at_power: Option<f64>,
}

pub fn screen_rows(screen: &[ScreenEntry], labels: &[String]) -> Vec<ScreenRow> {
    screen
        .iter()
        .map(|e| ScreenRow {
            label: labels
                .get(e.index - 1)
                .cloned()
                .unwrap_or_else(|| format!("A{}", e.index)),
            norm: e.norm,
            contractive_power: e.contractive_power.map(|(k, _)| k),
            norm_at_power: e.contractive_power.map(|(_, n)| n),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarRow {
    pub name: String,
    pub value: f64,
    pub formula: String,
}

fn row(name: &str, value: f64, formula: &str) -> ScalarRow {
    ScalarRow {
        name: name.into(),
        value,
        formula: formula.into(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BracketRow {
    pub category: String,
    pub count: u64,
    pub count_formula: String,
    pub epsilon: f64,
    pub epsilon_formula: String,
    pub norm_exponent: i64,
    pub value: f64,
}

/// Scalar rows for a certificate's detail block, formulas included. Both
/// readings of the block-budget scalar are reported; the first is the one
/// the pipeline uses.
pub fn scalar_rows(detail: &CertificateDetail, n: usize, delta: u32) -> Vec<ScalarRow> {
    let m = detail.m;
    let singles = u64::from(m) - detail.k1 * u64::from(delta);
    vec![
        row(
            "m",
            f64::from(m),
            "smallest power >= delta with max_i ||A_i^m|| < 1",
        ),
        row("rho", detail.rho, "max_i ||A_i^m||"),
        row("M", detail.max_norm, "max_i ||A_i||"),
        row("k1", detail.k1 as f64, "floor(m/delta)  [in use]"),
        row(
            "k1-alt",
            (u64::from(delta) / u64::from(m).max(1)) as f64,
            "floor(delta/m)  [alternative reading, not used]",
        ),
        row("k2", detail.k2 as f64, "floor((n-1)(m-1)/delta)"),
        row("k3", detail.k3 as f64, "(n-1)(m-1) - k2*delta"),
        row("singles", singles as f64, "m - k1*delta"),
        row(
            "eps(delta,delta)",
            detail.eps.delta_delta,
            "max_{i!=j} ||[A_i^delta, A_j^delta]||",
        ),
        row(
            "eps(delta,1)",
            detail.eps.delta_one,
            "max_{i!=j} ||[A_i^delta, A_j]||",
        ),
        row(
            "eps(1,delta)",
            detail.eps.one_delta,
            "max_{i!=j} ||[A_i, A_j^delta]||",
        ),
        row(
            "eps(1,1)",
            detail.eps.one_one,
            "max_{i!=j} ||[A_i, A_j]||",
        ),
        row("lambda", detail.lambda, "certified decay rate"),
        row(
            "horizon",
            detail.basis_horizon as f64,
            "n(m-1)+1, longest directly bounded word",
        ),
        row("n", n as f64, "number of subsystems"),
    ]
}

pub fn bracket_rows(detail: &CertificateDetail, delta: u32) -> Vec<BracketRow> {
    let m = i64::from(detail.m);
    let d = i64::from(delta);
    let crossed = detail.basis_horizon as i64 - m; // (n-1)(m-1)
    let singles = u64::from(detail.m) - detail.k1 * u64::from(delta);
    let specs = [
        (
            "block-block",
            detail.k1 * detail.k2,
            "k1*k2",
            detail.eps.delta_delta,
            "eps(delta,delta)",
            crossed + m - 2 * d,
        ),
        (
            "block-single",
            detail.k1 * detail.k3,
            "k1*k3",
            detail.eps.delta_one,
            "eps(delta,1)",
            crossed + m - d - 1,
        ),
        (
            "single-block",
            singles * detail.k2,
            "(m-k1*delta)*k2",
            detail.eps.one_delta,
            "eps(1,delta)",
            crossed + m - d - 1,
        ),
        (
            "single-single",
            singles * detail.k3,
            "(m-k1*delta)*k3",
            detail.eps.one_one,
            "eps(1,1)",
            crossed + m - 2,
        ),
    ];
    specs
        .iter()
        .zip(detail.bracket.iter())
        .map(
            |((category, count, cf, eps, ef, exponent), value)| BracketRow {
                category: (*category).into(),
                count: *count,
                count_formula: (*cf).into(),
                epsilon: *eps,
                epsilon_formula: (*ef).into(),
                norm_exponent: *exponent,
                value: *value,
            },
        )
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSection {
    pub lambda: f64,
    pub leading: f64,
    pub leading_formula: String,
    pub bracket_sum: f64,
    pub tail: f64,
    pub tail_formula: String,
    pub lhs: f64,
    pub lhs_formula: String,
    pub certified: bool,
}

pub fn bound_section(detail: &CertificateDetail, certified: bool) -> BoundSection {
    let leading = if detail.rho > 0.0 {
        detail.rho * (detail.lambda * f64::from(detail.m)).exp()
    } else {
        0.0
    };
    let bracket_sum: f64 = detail.bracket.iter().sum();
    BoundSection {
        lambda: detail.lambda,
        leading,
        leading_formula: "rho * exp(lambda*m)".into(),
        bracket_sum,
        tail: detail.lhs - leading,
        tail_formula: "bracket_sum * exp(lambda*(n(m-1)+1))".into(),
        lhs: detail.lhs,
        lhs_formula: "leading + tail, certified iff <= 1".into(),
        certified,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OvershootSection {
    pub c: f64,
    pub horizon: u32,
    pub words_checked: u64,
    pub attained_at: Option<String>,
    pub formula: String,
}

pub fn overshoot_section(basis: &BasisConstant) -> OvershootSection {
    OvershootSection {
        c: basis.c,
        horizon: basis.horizon,
        words_checked: basis.words_checked,
        attained_at: basis.attained_at.as_ref().map(|w| w.pretty()),
        formula: "max(1, max ||W|| * exp(lambda*|W|) over admissible |W| <= n(m-1)+1)".into(),
    }
}

/// The one-term specialization at dwell time 1, evaluated under both norm
/// exponents; `active` names the one selected by `--exponent-mode`.
#[derive(Debug, Clone, Serialize)]
pub struct DwellFreeSection {
    pub m: u32,
    pub rho: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub count: u64,
    pub count_formula: String,
    pub printed_exponent: i64,
    pub printed_lhs: f64,
    pub derived_exponent: i64,
    pub derived_lhs: f64,
    pub active: String,
    pub certified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub family: FamilyInfo,
    pub delta: u32,
    pub rate_mode: String,
    pub exponent_mode: String,
    pub verdict: String,
    pub reason: Option<String>,
    pub screen: Vec<ScreenRow>,
    pub scalars: Vec<ScalarRow>,
    pub bracket: Vec<BracketRow>,
    pub bound: Option<BoundSection>,
    pub overshoot: Option<OvershootSection>,
    pub dwell_free: Option<DwellFreeSection>,
    pub notes: Vec<String>,
}

pub fn verdict_str(cert: &Certificate) -> String {
    if cert.is_certified() {
        "certified".into()
    } else {
        "not-certified".into()
    }
}

fn fmt10(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v}")
    } else {
        format!("{v:.10}")
    }
}

pub fn render_analyze_text(r: &AnalyzeReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(
        &mut out,
        format!(
            "dwell-time certificate  |  family {} (n={}, d={})  |  delta {}",
            r.family.source, r.family.n, r.family.d, r.delta
        ),
    );
    push(
        &mut out,
        format!("rate mode {}  |  exponent mode {}", r.rate_mode, r.exponent_mode),
    );
    push(&mut out, String::new());
    push(&mut out, "subsystem screen".into());
    for s in &r.screen {
        let tail = match (s.contractive_power, s.norm_at_power) {
            (Some(k), Some(nk)) => {
                format!("contractive at power {k} (norm {})", fmt10(nk))
            }
            _ => "no contractive power within the cap".into(),
        };
        push(
            &mut out,
            format!("  {:<6} ||.|| = {:<14} {}", s.label, fmt10(s.norm), tail),
        );
    }
    if !r.scalars.is_empty() {
        push(&mut out, String::new());
        push(&mut out, "certificate scalars".into());
        for s in &r.scalars {
            push(
                &mut out,
                format!("  {:<18} {:<20} {}", s.name, fmt10(s.value), s.formula),
            );
        }
    }
    if !r.bracket.is_empty() {
        push(&mut out, String::new());
        push(&mut out, "bracket terms (count * eps * M^e)".into());
        for b in &r.bracket {
            push(
                &mut out,
                format!(
                    "  {:<14} count {:<4} [{}]  {} = {:<13} M^{:<3} -> {}",
                    b.category,
                    b.count,
                    b.count_formula,
                    b.epsilon_formula,
                    fmt10(b.epsilon),
                    b.norm_exponent,
                    fmt10(b.value)
                ),
            );
        }
    }
    if let Some(b) = &r.bound {
        push(&mut out, String::new());
        push(&mut out, "product bound".into());
        push(
            &mut out,
            format!(
                "  leading   {:<16} {}",
                fmt10(b.leading),
                b.leading_formula
            ),
        );
        push(
            &mut out,
            format!("  tail      {:<16} {}", fmt10(b.tail), b.tail_formula),
        );
        push(
            &mut out,
            format!(
                "  lhs       {:<16} {}  -> {}",
                fmt10(b.lhs),
                b.lhs_formula,
                if b.certified { "holds" } else { "fails" }
            ),
        );
    }
    if let Some(o) = &r.overshoot {
        push(&mut out, String::new());
        push(
            &mut out,
            format!(
                "overshoot constant c = {}  over {} words of length <= {}{}",
                fmt10(o.c),
                o.words_checked,
                o.horizon,
                o.attained_at
                    .as_ref()
                    .map(|w| format!("  (attained at {w})"))
                    .unwrap_or_default()
            ),
        );
    }
    if let Some(d) = &r.dwell_free {
        push(&mut out, String::new());
        push(&mut out, "arbitrary switching (dwell 1 specialization)".into());
        push(
            &mut out,
            format!(
                "  m {}  rho {}  eps {}  count {} [{}]  lambda {}",
                d.m,
                fmt10(d.rho),
                fmt10(d.epsilon),
                d.count,
                d.count_formula,
                fmt10(d.lambda)
            ),
        );
        let mark = |mode: &str| if d.active == mode { "  [active]" } else { "" };
        push(
            &mut out,
            format!(
                "  printed exponent M^{:<3} lhs = {}{}",
                d.printed_exponent,
                fmt10(d.printed_lhs),
                mark("printed")
            ),
        );
        push(
            &mut out,
            format!(
                "  derived exponent M^{:<3} lhs = {}{}",
                d.derived_exponent,
                fmt10(d.derived_lhs),
                mark("derived")
            ),
        );
        push(
            &mut out,
            format!(
                "  verdict under active exponent: {}",
                if d.certified { "holds" } else { "fails" }
            ),
        );
    }
    for n in &r.notes {
        push(&mut out, format!("note: {n}"));
    }
    push(&mut out, String::new());
    push(
        &mut out,
        format!(
            "verdict: {}{}",
            r.verdict,
            r.reason
                .as_ref()
                .map(|m| format!("  ({m})"))
                .unwrap_or_default()
        ),
    );
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct TermRow {
    pub rendering: String,
    pub category: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeReport {
    pub family: FamilyInfo,
    pub word: String,
    pub word_pretty: String,
    pub length: u64,
    pub target: usize,
    pub m: u32,
    pub delta: u32,
    pub dwell_valid: bool,
    pub terms: Vec<TermRow>,
    pub counts: dwellcert_core::word::CategoryCounts,
    pub audit: CountAudit,
    pub residual: f64,
    pub residual_ok: bool,
}

pub fn term_rows(dec: &Decomposition) -> Vec<TermRow> {
    dec.terms
        .iter()
        .map(|t| TermRow {
            rendering: t.pretty(),
            category: t.category.map(|c| category_name(c).to_string()),
        })
        .collect()
}

pub fn render_decompose_text(r: &DecomposeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "word {}  (length {}, dwell {} -> {})\n",
        r.word_pretty,
        r.length,
        r.delta,
        if r.dwell_valid { "admissible" } else { "not admissible" }
    ));
    out.push_str(&format!(
        "target A{}  pulled power m = {}\n\n",
        r.target, r.m
    ));
    out.push_str(&format!("{} terms:\n", r.terms.len()));
    for (i, t) in r.terms.iter().enumerate() {
        let cat = t
            .category
            .as_ref()
            .map(|c| format!("  [{c}]"))
            .unwrap_or_else(|| "  [leading]".into());
        out.push_str(&format!("  {:>3}  {}{}\n", i + 1, t.rendering, cat));
    }
    out.push_str("\nterm counts vs budgets\n");
    for c in &r.audit.categories {
        out.push_str(&format!(
            "  {:<14} {} / {}  {}\n",
            category_name(c.category),
            c.actual,
            c.bound,
            if c.within_bound { "ok" } else { "over budget" }
        ));
    }
    out.push_str(&format!(
        "  total          {} / {}\n",
        r.audit.total_actual, r.audit.total_bound
    ));
    out.push_str(&format!(
        "\nidentity residual {:.3e}  ({})\n",
        r.residual,
        if r.residual_ok {
            "exact up to rounding"
        } else {
            "UNEXPECTEDLY LARGE"
        }
    ));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub family: FamilyInfo,
    pub delta: u32,
    pub trials: u64,
    pub horizon: usize,
    pub seed: u64,
    pub max_extra: u32,
    pub verdict: String,
    pub lambda: Option<f64>,
    pub c: Option<f64>,
    pub summary: McSummary,
    pub csv_path: Option<String>,
    pub svg_path: Option<String>,
}

pub fn render_simulate_text(r: &SimulateReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "simulated {} trials, horizon {}, dwell {}, seed {}, max run slack {}\n",
        r.trials, r.horizon, r.delta, r.seed, r.max_extra
    ));
    out.push_str(&format!("certificate: {}\n", r.verdict));
    if let (Some(lambda), Some(c)) = (r.lambda, r.c) {
        out.push_str(&format!(
            "checking norms against {} * exp(-{} t) * ||x0||\n",
            fmt10(c),
            fmt10(lambda)
        ));
    } else {
        out.push_str("no certified bound; recording norms only\n");
    }
    let last = r
        .summary
        .per_t_max_ratio
        .last()
        .copied()
        .unwrap_or(f64::NAN);
    out.push_str(&format!(
        "worst final ratio ||x(T)||/||x(0)|| = {:.3e}\n",
        last
    ));
    if let Some(violation) = r.summary.max_violation {
        out.push_str(&format!(
            "bound margin: worst violation {:.3e} over {} sample points -> {}\n",
            violation,
            r.summary.per_t_max_ratio.len() as u64 * r.trials,
            if r.summary.pass == Some(true) {
                "bound holds"
            } else {
                "bound violated"
            }
        ));
    }
    if let Some(p) = &r.csv_path {
        out.push_str(&format!("norms written to {p}\n"));
    }
    if let Some(p) = &r.svg_path {
        out.push_str(&format!("chart written to {p}\n"));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerateReport {
    pub family: FamilyInfo,
    pub delta: u32,
    pub lambda: f64,
    pub m: u32,
    pub c: f64,
    pub max_len: u32,
    pub guard: u64,
    pub predicted_words: u128,
    pub verdict: String,
    pub check: GuesBoundReport,
}

pub fn render_enumerate_text(r: &EnumerateReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "exhaustive check  |  dwell {}  lambda {}  c {}  lengths 1..={}\n",
        r.delta,
        fmt10(r.lambda),
        fmt10(r.c),
        r.max_len
    ));
    out.push_str(&format!(
        "{} admissible words (guard {})\n",
        r.check.words_checked, r.guard
    ));
    out.push_str(&format!("certificate: {}\n", r.verdict));
    out.push_str(&format!(
        "worst margin ||W|| - c*exp(-lambda|W|) = {:.6e}{}\n",
        r.check.max_violation,
        r.check
            .worst_word
            .as_ref()
            .map(|w| format!("  at {}", w.pretty()))
            .unwrap_or_default()
    ));
    out.push_str(&format!(
        "bound {} over all {} words\n",
        if r.check.pass { "holds" } else { "VIOLATED" },
        r.check.words_checked
    ));
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: String,
    pub pass: bool,
}

impl CheckRow {
    pub fn abs(name: &str, computed: f64, reference: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            computed,
            reference,
            tolerance: format!("abs {tol:.0e}"),
            pass: (computed - reference).abs() <= tol,
        }
    }

    pub fn rel(name: &str, computed: f64, reference: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            computed,
            reference,
            tolerance: format!("rel {tol:.0e}"),
            pass: (computed - reference).abs() <= tol * reference.abs(),
        }
    }

    pub fn exact(name: &str, computed: f64, reference: f64) -> Self {
        Self {
            name: name.into(),
            computed,
            reference,
            tolerance: "exact".into(),
            pass: computed == reference,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub delta: u32,
    pub lambda: f64,
    pub rows: Vec<CheckRow>,
    pub verdict_expected: String,
    pub verdict_got: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceReport {
    pub cases: Vec<CaseReport>,
    pub all_pass: bool,
}

pub fn render_reproduce_text(r: &ReproduceReport) -> String {
    let mut out = String::new();
    for case in &r.cases {
        out.push_str(&format!(
            "{}  (delta {}, lambda {})\n",
            case.name, case.delta, case.lambda
        ));
        out.push_str(&format!(
            "  {:<22} {:>16} {:>12} {:>10} {:>6}\n",
            "quantity", "computed", "reference", "tol", ""
        ));
        for row in &case.rows {
            out.push_str(&format!(
                "  {:<22} {:>16.10} {:>12} {:>10} {:>6}\n",
                row.name,
                row.computed,
                row.reference,
                row.tolerance,
                if row.pass { "ok" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "  verdict: expected {}, got {}  {}\n\n",
            case.verdict_expected,
            case.verdict_got,
            if case.verdict_expected == case.verdict_got {
                "ok"
            } else {
                "FAIL"
            }
        ));
    }
    out.push_str(&format!(
        "reference check: {}\n",
        if r.all_pass { "all rows pass" } else { "FAILURES present" }
    ));
    out
}
