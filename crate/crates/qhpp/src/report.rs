//! Verdict reports and their serialized forms.
//!
//! A report is a list of [`Record`]s, each holding exact values as strings,
//! plus a summary. Three formats are supported:
//!
//! * `jsonl`: one JSON object per record, then one summary object. Lossless;
//!   [`parse_jsonl`] reads it back.
//! * `csv`: a header row and one row per record.
//! * `table`: an aligned text table; transposed when the report asks for it.

use std::fmt::Write as _;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Ordered string-to-string map; every number is an exact rational string.
pub type Values = IndexMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Counterexample,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Counterexample => "counterexample",
            Status::Error => "error",
        }
    }

    /// Process exit code: 0 verified, 1 counterexample, 2 error.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Counterexample => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub item: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub values: Values,
    /// The fixture's expectations for this record; empty when it has none.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub expected: Values,
    pub ok: bool,
}

impl Record {
    pub fn new(item: impl Into<String>) -> Self {
        Record { item: item.into(), group: None, values: Values::new(), expected: Values::new(), ok: true }
    }

    pub fn group(mut self, group: impl Into<String>) -> Self {
        self.group = Some(group.into());
        self
    }

    pub fn value(mut self, key: &str, value: impl ToString) -> Self {
        self.values.insert(key.to_string(), value.to_string());
        self
    }

    /// Keys whose value differs from the expectation.
    pub fn mismatches(&self) -> Vec<(&str, Option<&str>, &str)> {
        self.expected
            .iter()
            .filter(|(k, v)| self.values.get(*k) != Some(v))
            .map(|(k, v)| (k.as_str(), self.values.get(k).map(String::as_str), v.as_str()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    #[default]
    Rows,
    /// One column per record; used for tables that are read across.
    Columns,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub campaign: String,
    /// The statement this campaign reproduces.
    pub statement: String,
    pub params: Values,
    pub records: Vec<Record>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default)]
    pub layout: Layout,
    /// Wall time, only filled in on request so that output stays
    /// reproducible by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerdictReport {
    pub fn mismatched(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.ok)
    }

    /// Human-readable lines for every failed record: the statement, the item
    /// and got/expected values.
    pub fn failure_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(e) = &self.error {
            out.push(format!("{}: error: {e}", self.campaign));
        }
        for r in self.mismatched() {
            for (key, got, expected) in r.mismatches() {
                out.push(format!(
                    "{} [{}] {}: {key} got {} expected {expected}",
                    self.campaign,
                    self.statement,
                    r.item,
                    got.unwrap_or("(missing)")
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
    Table,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            "table" | "text-table" => Ok(Format::Table),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Line {
    Record {
        campaign: String,
        #[serde(flatten)]
        record: Record,
    },
    Summary {
        campaign: String,
        statement: String,
        params: Values,
        status: Status,
        items: usize,
        mismatches: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        error: Option<String>,
        #[serde(default)]
        layout: Layout,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        elapsed_ms: Option<u64>,
    },
}

pub fn emit(report: &VerdictReport, format: Format) -> String {
    match format {
        Format::Jsonl => emit_jsonl(report),
        Format::Csv => emit_csv(report),
        Format::Table => emit_table(report),
    }
}

pub fn emit_jsonl(report: &VerdictReport) -> String {
    let mut out = String::new();
    for r in &report.records {
        let line = Line::Record { campaign: report.campaign.clone(), record: r.clone() };
        out.push_str(&serde_json::to_string(&line).expect("records serialize"));
        out.push('\n');
    }
    let summary = Line::Summary {
        campaign: report.campaign.clone(),
        statement: report.statement.clone(),
        params: report.params.clone(),
        status: report.status,
        items: report.records.len(),
        mismatches: report.mismatched().count(),
        error: report.error.clone(),
        layout: report.layout,
        elapsed_ms: report.elapsed_ms,
    };
    out.push_str(&serde_json::to_string(&summary).expect("summary serializes"));
    out.push('\n');
    out
}

/// Reads back the output of [`emit_jsonl`], possibly several reports
/// concatenated.
pub fn parse_jsonl(text: &str) -> Result<Vec<VerdictReport>, Error> {
    let mut reports = Vec::new();
    let mut pending: Vec<Record> = Vec::new();
    let mut pending_campaign: Option<String> = None;
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let parsed: Line = serde_json::from_str(line).map_err(|e| Error::Jsonl { line: n + 1, reason: e.to_string() })?;
        match parsed {
            Line::Record { campaign, record } => {
                if pending_campaign.as_ref().is_some_and(|c| *c != campaign) {
                    return Err(Error::Jsonl { line: n + 1, reason: "record from another campaign".into() });
                }
                pending_campaign = Some(campaign);
                pending.push(record);
            }
            Line::Summary { campaign, statement, params, status, items, error, layout, elapsed_ms, .. } => {
                if pending_campaign.as_ref().is_some_and(|c| *c != campaign) || items != pending.len() {
                    return Err(Error::Jsonl { line: n + 1, reason: "summary does not match its records".into() });
                }
                reports.push(VerdictReport {
                    campaign,
                    statement,
                    params,
                    records: std::mem::take(&mut pending),
                    status,
                    error,
                    layout,
                    elapsed_ms,
                });
                pending_campaign = None;
            }
        }
    }
    if !pending.is_empty() {
        return Err(Error::Jsonl { line: text.lines().count(), reason: "records without a summary".into() });
    }
    Ok(reports)
}

/// Value columns in first-seen order across all records.
fn value_columns(report: &VerdictReport) -> Vec<String> {
    let mut cols: IndexMap<String, ()> = IndexMap::new();
    for r in &report.records {
        for k in r.values.keys() {
            cols.insert(k.clone(), ());
        }
    }
    cols.into_keys().collect()
}

fn expected_cell(r: &Record) -> String {
    r.mismatches().iter().map(|(k, _, e)| format!("{k}={e}")).collect::<Vec<_>>().join(";")
}

fn rows(report: &VerdictReport) -> (Vec<String>, Vec<Vec<String>>) {
    let cols = value_columns(report);
    let mut header = vec!["item".to_string()];
    header.extend(cols.iter().cloned());
    header.push("ok".into());
    header.push("expected".into());
    let body = report
        .records
        .iter()
        .map(|r| {
            let mut row = vec![r.item.clone()];
            row.extend(cols.iter().map(|c| r.values.get(c).cloned().unwrap_or_default()));
            row.push(r.ok.to_string());
            row.push(expected_cell(r));
            row
        })
        .collect();
    (header, body)
}

pub fn emit_csv(report: &VerdictReport) -> String {
    let (header, body) = rows(report);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for row in body {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn aligned(grid: &[Vec<String>]) -> String {
    let ncols = grid.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| grid.iter().filter_map(|row| row.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in grid.iter().enumerate() {
        let cells: Vec<String> = row.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            let _ = writeln!(out, "|-{}-|", rule.join("-|-"));
        }
    }
    out
}

pub fn emit_table(report: &VerdictReport) -> String {
    let mut out = format!("{}: {}\n", report.campaign, report.statement);
    match report.layout {
        Layout::Rows => {
            let (header, body) = rows(report);
            let mut grid = vec![header];
            grid.extend(body);
            out.push_str(&aligned(&grid));
        }
        Layout::Columns => {
            let mut grid = vec![std::iter::once("item".to_string())
                .chain(report.records.iter().map(|r| r.item.clone()))
                .collect::<Vec<_>>()];
            for c in value_columns(report) {
                let mut row = vec![c.clone()];
                row.extend(report.records.iter().map(|r| r.values.get(&c).cloned().unwrap_or_default()));
                grid.push(row);
            }
            out.push_str(&aligned(&grid));
        }
    }
    let _ = writeln!(out, "status: {}", report.status.as_str());
    out
}
