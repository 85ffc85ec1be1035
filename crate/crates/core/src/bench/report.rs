//! Benchmark reports and their rendering as text tables, CSV or JSON.
//!
//! All three formats are produced from the same [`ReportView`] values, so
//! every number printed in a text table can be recovered from the CSV or JSON
//! of the same run.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::campaign::{CampaignConfig, Equivalence};
use super::clock::TimeUnit;
use super::stats::{speedup_rate, to_ms, ClockHz, TimingStats};
use crate::classical::ClassicalScheme;
use crate::{Error, PqcScheme, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpTiming {
    pub stats: TimingStats,
    /// How many times the operation counts toward the total.
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeEntry {
    pub label: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    /// Family identifier: kyber, dilithium, ecdh, ecdsa or rsa.
    pub scheme: String,
    /// Parameter set within the family: 512, 3, p384, 2048 and so on.
    pub level: String,
    pub label: String,
    pub security_bits: u32,
    /// reference, accelerated or openssl.
    pub backend: String,
    pub clock_hz: f64,
    pub unit: TimeUnit,
    pub sizes: Vec<SizeEntry>,
    pub rows: Vec<OpTiming>,
    /// Why the scheme could not be measured, if it was not.
    pub unavailable: Option<String>,
    pub footnote: Option<String>,
}

fn classical_ids(scheme: ClassicalScheme) -> (String, String) {
    let name = scheme.name();
    let (family, level) = name.split_once('-').unwrap_or((name, ""));
    (family.to_owned(), level.to_owned())
}

impl BenchReport {
    pub(crate) fn pqc(scheme: PqcScheme, backend: &str, cfg: &CampaignConfig, rows: Vec<(TimingStats, u32)>) -> Self {
        BenchReport {
            scheme: scheme.family().into(),
            level: scheme.level_number().to_string(),
            label: scheme.label(),
            security_bits: scheme.security_bits(),
            backend: backend.into(),
            clock_hz: cfg.clock.hz(),
            unit: cfg.timer.unit(),
            sizes: scheme
                .sizes()
                .into_iter()
                .map(|(label, bytes)| SizeEntry {
                    label: label.into(),
                    bytes,
                })
                .collect(),
            rows: rows
                .into_iter()
                .map(|(stats, multiplicity)| OpTiming { stats, multiplicity })
                .collect(),
            unavailable: None,
            footnote: None,
        }
    }

    pub(crate) fn classical(scheme: ClassicalScheme, cfg: &CampaignConfig, rows: Vec<(TimingStats, u32)>) -> Self {
        let (family, level) = classical_ids(scheme);
        BenchReport {
            scheme: family,
            level,
            label: scheme.label().into(),
            security_bits: scheme.security_bits(),
            backend: "openssl".into(),
            clock_hz: cfg.clock.hz(),
            unit: cfg.timer.unit(),
            sizes: Vec::new(),
            rows: rows
                .into_iter()
                .map(|(stats, multiplicity)| OpTiming { stats, multiplicity })
                .collect(),
            unavailable: None,
            footnote: scheme.label_footnote().map(Into::into),
        }
    }

    pub(crate) fn unavailable(scheme: ClassicalScheme, cfg: &CampaignConfig, reason: String) -> Self {
        let mut r = Self::classical(scheme, cfg, Vec::new());
        r.unavailable = Some(reason);
        r
    }

    pub fn is_available(&self) -> bool {
        self.unavailable.is_none()
    }

    fn clock(&self) -> ClockHz {
        ClockHz::new(self.clock_hz).unwrap_or_default()
    }

    pub fn median_ms(&self, row: &OpTiming) -> f64 {
        to_ms(row.stats.median_cycles, self.unit, self.clock())
    }

    pub fn mean_ms(&self, row: &OpTiming) -> f64 {
        to_ms(row.stats.mean_cycles, self.unit, self.clock())
    }

    /// Sum of per-operation median times, weighted by multiplicity.
    pub fn total_ms(&self) -> f64 {
        self.rows.iter().map(|r| r.multiplicity as f64 * self.median_ms(r)).sum()
    }

    pub fn total_mean_ms(&self) -> f64 {
        self.rows.iter().map(|r| r.multiplicity as f64 * self.mean_ms(r)).sum()
    }

    pub fn op(&self, name: &str) -> Option<&OpTiming> {
        self.rows.iter().find(|r| r.stats.op_name == name)
    }

    fn pqc_scheme(&self) -> Option<PqcScheme> {
        format!("{}{}", self.scheme, self.level).parse().ok()
    }
}

/// Speedup rates of an accelerated report over its reference sibling.
#[derive(Clone, Debug, PartialEq)]
pub struct Speedups {
    pub per_op: Vec<(String, f64)>,
    /// Ratio of total times.
    pub total: f64,
}

/// Pairs two reports that differ only in backend. Requires the equivalence
/// certificate for their scheme.
pub fn speedups(reference: &BenchReport, accelerated: &BenchReport, proof: &Equivalence) -> Result<Speedups> {
    let same_subject = reference.scheme == accelerated.scheme
        && reference.level == accelerated.level
        && reference.unit == accelerated.unit
        && reference.clock_hz == accelerated.clock_hz;
    if !same_subject || reference.backend != "reference" || accelerated.backend != "accelerated" {
        return Err(Error::OperationMismatch(format!(
            "{} ({}) and {} ({}) are not backend siblings",
            reference.label, reference.backend, accelerated.label, accelerated.backend
        )));
    }
    if reference.pqc_scheme() != Some(proof.scheme()) {
        return Err(Error::OperationMismatch(format!(
            "equivalence was established for {}, not {}",
            proof.scheme(),
            reference.label
        )));
    }
    if reference.rows.len() != accelerated.rows.len() {
        return Err(Error::OperationMismatch("reports cover different operations".into()));
    }
    let per_op = reference
        .rows
        .iter()
        .zip(&accelerated.rows)
        .map(|(r, a)| Ok((r.stats.op_name.clone(), speedup_rate(&r.stats, &a.stats)?)))
        .collect::<Result<_>>()?;
    Ok(Speedups {
        per_op,
        total: reference.total_ms() / accelerated.total_ms(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// KEM parameter sets with sizes and per-backend times.
    Table1,
    /// Signature parameter sets with sizes and per-backend times.
    Table2,
    /// Total reference times of every scheme, post-quantum and classical.
    Table3,
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(Shape::Table1),
            "table2" => Ok(Shape::Table2),
            "table3" => Ok(Shape::Table3),
            _ => Err(Error::InvalidParameter(format!("unknown table shape {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParameter(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpView {
    pub op: String,
    pub iterations: usize,
    pub multiplicity: u32,
    pub median_cycles: f64,
    pub mean_cycles: f64,
    pub min_cycles: u64,
    pub max_cycles: u64,
    pub median_ms: f64,
    pub mean_ms: f64,
    pub speedup: Option<f64>,
}

/// One report with every derived value filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportView {
    pub scheme: String,
    pub level: String,
    pub label: String,
    pub security_bits: u32,
    pub backend: String,
    pub unit: TimeUnit,
    pub clock_hz: f64,
    pub sizes: Vec<SizeEntry>,
    pub ops: Vec<OpView>,
    pub total_ms: Option<f64>,
    pub total_mean_ms: Option<f64>,
    pub total_speedup: Option<f64>,
    pub unavailable: Option<String>,
    pub footnote: Option<String>,
}

/// Table order of classical rows.
const CLASSICAL_ORDER: [ClassicalScheme; 8] = [
    ClassicalScheme::EcdsaP256,
    ClassicalScheme::EcdsaP384,
    ClassicalScheme::EcdsaP521,
    ClassicalScheme::Rsa2048,
    ClassicalScheme::Rsa3072,
    ClassicalScheme::EcdhP256,
    ClassicalScheme::EcdhP384,
    ClassicalScheme::EcdhP521,
];

fn select(reports: &[BenchReport], shape: Shape) -> Vec<&BenchReport> {
    let family = |r: &&BenchReport| match shape {
        Shape::Table1 => r.scheme == "kyber",
        Shape::Table2 => r.scheme == "dilithium",
        Shape::Table3 => r.backend != "accelerated",
    };
    let mut chosen: Vec<&BenchReport> = reports.iter().filter(family).collect();
    let rank = |r: &BenchReport| -> usize {
        if let Some(i) = PqcScheme::ALL.iter().position(|s| Some(*s) == r.pqc_scheme()) {
            return i * 2 + usize::from(r.backend == "accelerated");
        }
        let classical = CLASSICAL_ORDER.iter().position(|c| classical_ids(*c) == (r.scheme.clone(), r.level.clone()));
        100 + classical.unwrap_or(100)
    };
    chosen.sort_by_key(|r| rank(r));
    chosen
}

fn view(report: &BenchReport, speedups: Option<&Speedups>) -> ReportView {
    let available = report.is_available();
    ReportView {
        scheme: report.scheme.clone(),
        level: report.level.clone(),
        label: report.label.clone(),
        security_bits: report.security_bits,
        backend: report.backend.clone(),
        unit: report.unit,
        clock_hz: report.clock_hz,
        sizes: report.sizes.clone(),
        ops: report
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| OpView {
                op: r.stats.op_name.clone(),
                iterations: r.stats.iterations,
                multiplicity: r.multiplicity,
                median_cycles: r.stats.median_cycles,
                mean_cycles: r.stats.mean_cycles,
                min_cycles: r.stats.min_cycles,
                max_cycles: r.stats.max_cycles,
                median_ms: report.median_ms(r),
                mean_ms: report.mean_ms(r),
                speedup: speedups.map(|s| s.per_op[i].1),
            })
            .collect(),
        total_ms: available.then(|| report.total_ms()),
        total_mean_ms: available.then(|| report.total_mean_ms()),
        total_speedup: speedups.map(|s| s.total),
        unavailable: report.unavailable.clone(),
        footnote: report.footnote.clone(),
    }
}

/// Builds the views for a shape. Speedups are attached to accelerated
/// reports whose scheme has an equivalence certificate in `proofs`.
pub fn views(reports: &[BenchReport], proofs: &[Equivalence], shape: Shape) -> Result<Vec<ReportView>> {
    let chosen = select(reports, shape);
    let mut out = Vec::with_capacity(chosen.len());
    for r in &chosen {
        let mut sp = None;
        if r.backend == "accelerated" && shape != Shape::Table3 {
            let sibling = chosen
                .iter()
                .find(|o| o.backend == "reference" && o.scheme == r.scheme && o.level == r.level);
            let proof = proofs.iter().find(|p| Some(p.scheme()) == r.pqc_scheme());
            if let (Some(reference), Some(proof)) = (sibling, proof) {
                sp = Some(speedups(reference, r, proof)?);
            }
        }
        out.push(view(r, sp.as_ref()));
    }
    Ok(out)
}

pub fn render_report(reports: &[BenchReport], proofs: &[Equivalence], shape: Shape, format: Format) -> Result<String> {
    render_views(&views(reports, proofs, shape)?, shape, format)
}

/// Renders prepared views. Table 1 and 2 shapes render identically.
pub fn render_views(views: &[ReportView], shape: Shape, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(views).map_err(|e| Error::InvalidParameter(e.to_string())),
        Format::Csv => render_csv(views, shape),
        Format::Text => Ok(match shape {
            Shape::Table3 => render_table3(views),
            _ => render_backend_table(views),
        }),
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "scheme",
    "level",
    "backend",
    "op",
    "iterations",
    "median_cycles",
    "mean_cycles",
    "median_ms",
    "mean_ms",
    "speedup",
];

fn render_csv(views: &[ReportView], shape: Shape) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::InvalidParameter(e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for v in views {
        if shape != Shape::Table3 {
            for op in &v.ops {
                w.write_record([
                    v.scheme.clone(),
                    v.level.clone(),
                    v.backend.clone(),
                    op.op.clone(),
                    op.iterations.to_string(),
                    op.median_cycles.to_string(),
                    op.mean_cycles.to_string(),
                    op.median_ms.to_string(),
                    op.mean_ms.to_string(),
                    opt(op.speedup),
                ])
                .map_err(csv_err)?;
            }
        }
        let weighted = |f: fn(&OpView) -> f64| v.ops.iter().map(|o| o.multiplicity as f64 * f(o)).sum::<f64>();
        let available = v.unavailable.is_none();
        w.write_record([
            v.scheme.clone(),
            v.level.clone(),
            if available { v.backend.clone() } else { "unavailable".into() },
            "total".into(),
            v.ops.first().map(|o| o.iterations.to_string()).unwrap_or_default(),
            opt(available.then(|| weighted(|o| o.median_cycles))),
            opt(available.then(|| weighted(|o| o.mean_cycles))),
            opt(v.total_ms),
            opt(v.total_mean_ms),
            opt(v.total_speedup),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidParameter(e.to_string()))
}

fn ms(v: f64) -> String {
    format!("{v:.3}")
}

fn rate(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "n/a".into())
}

fn write_rows(out: &mut String, rows: &[[String; 4]]) {
    let mut width = [0usize; 4];
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    for row in rows {
        let cells: Vec<String> = row.iter().zip(width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
}

fn render_backend_table(views: &[ReportView]) -> String {
    let mut out = String::new();
    let mut seen = Vec::new();
    for v in views {
        if seen.contains(&(&v.scheme, &v.level)) {
            continue;
        }
        seen.push((&v.scheme, &v.level));
        let reference = views
            .iter()
            .find(|o| o.scheme == v.scheme && o.level == v.level && o.backend == "reference");
        let accelerated = views
            .iter()
            .find(|o| o.scheme == v.scheme && o.level == v.level && o.backend == "accelerated");
        let base = reference.or(accelerated).unwrap_or(v);
        let _ = writeln!(out, "{} {}", v.scheme.to_uppercase(), v.level);
        let mut rows = vec![[
            "Sizes (Bytes)".to_owned(),
            "Reference (ms)".to_owned(),
            "AVX2 (ms)".to_owned(),
            "AVX2 Speedup Rate".to_owned(),
        ]];
        let n = base.ops.len().max(base.sizes.len());
        let cell = |r: Option<&ReportView>, i: usize| {
            r.and_then(|r| r.ops.get(i))
                .map(|o| format!("{}: {}", o.op, ms(o.median_ms)))
                .unwrap_or_else(|| "n/a".into())
        };
        for i in 0..n {
            rows.push([
                base.sizes.get(i).map(|s| format!("{}: {}", s.label, s.bytes)).unwrap_or_default(),
                cell(reference, i),
                cell(accelerated, i),
                rate(accelerated.and_then(|a| a.ops.get(i)).and_then(|o| o.speedup)),
            ]);
        }
        let total = |r: Option<&ReportView>| r.and_then(|r| r.total_ms).map(ms).unwrap_or_else(|| "n/a".into());
        rows.push([
            "Total".to_owned(),
            total(reference),
            total(accelerated),
            rate(accelerated.and_then(|a| a.total_speedup)),
        ]);
        write_rows(&mut out, &rows);
        out.push('\n');
    }
    out
}

fn render_table3(views: &[ReportView]) -> String {
    let mut out = String::new();
    let mut rows = vec![[
        "Algorithm".to_owned(),
        "Security Level".to_owned(),
        "Total Time (ms)".to_owned(),
        String::new(),
    ]];
    let mut notes = Vec::new();
    for v in views {
        let mut label = v.label.clone();
        if let Some(note) = &v.footnote {
            notes.push(note.clone());
            label.push_str(&"*".repeat(notes.len()));
        }
        let time = match (&v.unavailable, v.total_ms) {
            (Some(reason), _) => format!("unavailable ({reason})"),
            (None, Some(t)) => ms(t),
            (None, None) => "n/a".into(),
        };
        rows.push([label, format!("{}-bit", v.security_bits), time, String::new()]);
    }
    let mut width = [0usize; 3];
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    for row in &rows {
        let _ = writeln!(
            out,
            "| {:<a$} | {:<b$} | {:<c$} |",
            row[0],
            row[1],
            row[2],
            a = width[0],
            b = width[1],
            c = width[2]
        );
    }
    for (i, note) in notes.iter().enumerate() {
        let _ = writeln!(out, "{} {note}", "*".repeat(i + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::clock::Timer;

    fn stats(op: &str, median: u64) -> TimingStats {
        TimingStats::from_samples(op, TimeUnit::Cycles, &[median]).unwrap()
    }

    fn cfg() -> CampaignConfig {
        CampaignConfig {
            timer: Timer::detect(),
            ..Default::default()
        }
    }

    #[test]
    fn totals_weight_multiplicity() {
        let r = BenchReport::classical(
            ClassicalScheme::EcdhP256,
            &cfg(),
            vec![(stats("keygen", 3_300_000), 2), (stats("agree", 6_600_000), 2)],
        );
        assert!((r.total_ms() - 6.0).abs() < 1e-12);
        assert_eq!(r.level, "p256");
    }

    #[test]
    fn empty_table3_is_header_only() {
        let text = render_report(&[], &[], Shape::Table3, Format::Text).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.contains("Total Time (ms)"));
        let csv = render_report(&[], &[], Shape::Table3, Format::Csv).unwrap();
        assert_eq!(csv.trim(), CSV_HEADER.join(","));
    }

    #[test]
    fn unknown_shape_rejected() {
        assert!("table4".parse::<Shape>().is_err());
        assert!("xml".parse::<Format>().is_err());
    }
}
