//! Text tables and CSV for solved scenarios and Taylor studies.
//!
//! All numbers print as `{:.11e}` (twelve significant digits) with negative
//! zero folded to zero, so identical inputs give identical bytes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::saving::{precautionary_report, IndicatorKind, IndicatorReport, PrecautionaryReport, SavingScenario, Sign};
use crate::scenario_file::ReportKind;
use crate::taylor::{ConvergenceTable, ThresholdReport};

pub const CSV_HEADER: &str = "model,situation,s_opt,indicator_kind,indicator_value,predicate_value,taylor_gap,agreement";

/// Cell text for values inside the zero band.
pub const ZERO_CELL: &str = "0 (tol)";

pub fn sci(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn sci_or_zero(x: f64, band: f64) -> String {
    if x.abs() <= band {
        ZERO_CELL.to_string()
    } else {
        sci(x)
    }
}

/// Left-aligned columns separated by two spaces, no trailing blanks.
fn render_columns(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut l = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                l.push_str("  ");
            }
            l.push_str(cell);
            l.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(rule.iter().map(String::as_str).collect());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

fn condition_text(kind: IndicatorKind) -> &'static str {
    match kind {
        IndicatorKind::AddIncome => "v111",
        IndicatorKind::TwoSource => "v111*Var_inc + v122*Var_bg",
        IndicatorKind::AddBackground => "v122",
    }
}

/// PASS/FAIL annotation of the predicate `>= 0` check.
fn predicate_check(ind: &IndicatorReport, threshold: Option<&ThresholdReport>) -> String {
    if let (IndicatorKind::TwoSource, Some(t)) = (ind.kind, threshold) {
        let sum = t.c + t.d;
        return match t.predicate_sign() {
            Sign::Positive => format!("PASS (c+d = {sum} > {})", t.threshold_sum),
            Sign::Zero => format!("TIE (c+d = {sum} = {})", t.threshold_sum),
            Sign::Negative => format!("FAIL (c+d = {sum} < {})", t.threshold_sum),
        };
    }
    let cond = condition_text(ind.kind);
    match ind.predicate_sign {
        Sign::Positive => format!("PASS ({cond} > 0)"),
        Sign::Zero => format!("TIE ({cond} ~ 0)"),
        Sign::Negative => format!("FAIL ({cond} < 0)"),
    }
}

/// Aligned text report: one block of situations, one of indicators.
pub fn render_table(report: &PrecautionaryReport, threshold: Option<&ThresholdReport>) -> String {
    let band = report.zero_band;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "model {}  |  evaluation point (y, x) = ({}, {})  |  Var_inc = {}  Var_bg = {}  |  zero band {}",
        report.kind,
        sci(report.point.0),
        sci(report.point.1),
        sci(report.variances.income),
        sci(report.variances.background),
        sci(band)
    );
    out.push('\n');
    let rows: Vec<Vec<String>> = report
        .solutions
        .iter()
        .map(|s| {
            vec![
                format!("{} ({})", s.situation.label(), s.situation.letter()),
                sci(s.s_opt),
                sci(s.objective),
                sci(s.foc_residual),
                sci(s.second_derivative),
                s.iterations.to_string(),
            ]
        })
        .collect();
    out.push_str(&render_columns(
        &["situation", "s_opt", "objective", "foc_residual", "second_derivative", "iterations"],
        &rows,
    ));
    out.push('\n');
    let rows: Vec<Vec<String>> = report
        .indicators
        .iter()
        .map(|i| {
            vec![
                i.kind.label().to_string(),
                sci_or_zero(i.value, band),
                i.sign.symbol().to_string(),
                if i.predicate_sign == Sign::Zero { ZERO_CELL.to_string() } else { sci(i.predicate) },
                predicate_check(i, threshold),
                sci_or_zero(i.taylor_gap, band),
                sci_or_zero(i.exact_gap, band),
                i.agreement.label().to_string(),
            ]
        })
        .collect();
    out.push_str(&render_columns(
        &["indicator", "value", "sign", "predicate", "check", "taylor_gap", "exact_gap", "agreement"],
        &rows,
    ));
    if let Some(t) = threshold {
        out.push('\n');
        out.push_str(&render_threshold(t));
    }
    out
}

/// Closed-form threshold quantities.
pub fn render_threshold(t: &ThresholdReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "threshold: alpha = {}, gamma = {}, [c, d] = [{}, {}]", t.alpha, t.gamma, t.c, t.d);
    let rows = vec![
        vec!["Var_fuzzy = (c-d)^2/4".to_string(), sci(t.var_fuzzy)],
        vec!["Var_random = (c-d)^2/12".to_string(), sci(t.var_random)],
        vec!["alpha^2/(gamma(1-gamma))".to_string(), sci(t.lhs)],
        vec!["4/(3(c+d)^2)".to_string(), sci(t.rhs)],
        vec!["1/(3 xbar^2)".to_string(), sci(t.rhs_at_mean)],
        vec!["difference".to_string(), format!("{} ({})", sci(t.predicate), t.predicate_sign().symbol())],
        vec!["c+d at the threshold".to_string(), sci(t.threshold_sum)],
    ];
    out.push_str(&render_columns(&["quantity", "value"], &rows));
    if let Some(ts) = t.solved_two_source() {
        let _ = writeln!(out, "solved two_source indicator: {}", sci(ts));
    }
    out
}

/// Errors and empirical orders of an ε study.
pub fn render_convergence(t: &ConvergenceTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "taylor study, model {}", t.kind);
    out.push('\n');
    let rows: Vec<Vec<String>> = t
        .rows
        .iter()
        .map(|r| {
            vec![
                format!("{}", r.eps),
                r.indicator.label().to_string(),
                sci(r.s_star),
                sci(r.exact_gap),
                sci(r.predicted_gap),
                if r.resolved() { sci(r.error) } else { format!("{} (noise)", sci(r.error)) },
            ]
        })
        .collect();
    out.push_str(&render_columns(
        &["eps", "indicator", "s_star", "exact_gap", "predicted_gap", "error"],
        &rows,
    ));
    out.push('\n');
    let rows: Vec<Vec<String>> = t
        .orders
        .iter()
        .map(|o| {
            vec![
                o.indicator.label().to_string(),
                format!("{} -> {}", o.eps_from, o.eps_to),
                o.order.map_or_else(|| "undefined".to_string(), |v| format!("{v:.4}")),
            ]
        })
        .collect();
    out.push_str(&render_columns(&["indicator", "eps", "order"], &rows));
    out
}

/// Values classified as zero print as exact zeros, so roundoff noise never
/// reaches the CSV.
fn snap(x: f64, sign: Sign) -> f64 {
    if sign == Sign::Zero {
        0.0
    } else {
        x
    }
}

/// One CSV row per (situation, indicator).
pub fn render_csv(report: &PrecautionaryReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    w.write_record(&header).expect("writing to memory");
    for s in &report.solutions {
        for i in &report.indicators {
            w.write_record([
                report.kind.label(),
                s.situation.label(),
                &sci(s.s_opt),
                i.kind.label(),
                &sci(snap(i.value, i.sign)),
                &sci(snap(i.predicate, i.predicate_sign)),
                &sci(snap(i.taylor_gap, i.predicate_sign)),
                i.agreement.label(),
            ])
            .expect("writing to memory");
        }
    }
    let bytes = w.into_inner().expect("flushing to memory");
    String::from_utf8(bytes).expect("csv fields are ASCII")
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn emit_csv(report: &PrecautionaryReport, path: &Path) -> Result<()> {
    write_atomic(path, &render_csv(report))
}

/// Output of [`run_report`].
#[derive(Debug, Clone)]
pub struct RenderedReport {
    pub report: PrecautionaryReport,
    pub threshold: Option<ThresholdReport>,
    pub table: Option<String>,
    pub csv: Option<String>,
}

/// Solves `scenario` and renders the requested outputs.
pub fn run_report(scenario: &SavingScenario, outputs: &[ReportKind]) -> Result<RenderedReport> {
    let report = precautionary_report(scenario)?;
    let threshold = ThresholdReport::matching(scenario.config()).transpose()?;
    let table = outputs
        .contains(&ReportKind::Table)
        .then(|| render_table(&report, threshold.as_ref()));
    let csv = outputs.contains(&ReportKind::Csv).then(|| render_csv(&report));
    Ok(RenderedReport {
        report,
        threshold,
        table,
        csv,
    })
}
