//! The campaign registry and runner.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::bodies;
use crate::fixture;
use crate::report::{Layout, Record, Status, Values, VerdictReport};
use crate::Error;

/// Range and default of a campaign's `--bound`.
#[derive(Debug, Clone, Copy)]
pub struct BoundSpec {
    pub meaning: &'static str,
    pub default: u64,
    pub min: u64,
    pub max: u64,
}

/// A `--params` key a campaign understands.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub default: u64,
    pub min: u64,
    pub max: u64,
    pub meaning: &'static str,
}

pub type Runner = fn(&Params) -> Result<Vec<Record>, Error>;

#[derive(Clone, Copy)]
pub struct Campaign {
    pub id: &'static str,
    pub bound: Option<BoundSpec>,
    pub params: &'static [ParamSpec],
    pub layout: Layout,
    /// Part of the default suite run by `qhpp all`.
    pub default_suite: bool,
    pub run: Runner,
}

impl std::fmt::Debug for Campaign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Campaign").field("id", &self.id).finish_non_exhaustive()
    }
}

/// Validated parameters: the bound (if the campaign has one) and every
/// declared key with its value.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    pub bound: Option<u64>,
    pub values: BTreeMap<String, u64>,
}

impl Params {
    pub fn bound(&self) -> u64 {
        self.bound.expect("campaign declares a bound")
    }

    pub fn get(&self, key: &str) -> u64 {
        self.values[key]
    }

    /// Parses `k=v,k=v`.
    pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, Error> {
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.split_once('=')
                    .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                    .ok_or_else(|| Error::BadParam(t.to_string()))
            })
            .collect()
    }
}

impl Campaign {
    pub fn statement(&self) -> String {
        fixture::load(self.id).map(|f| f.statement).unwrap_or_default()
    }

    /// Checks `bound` and `pairs` against the campaign's declarations and
    /// fills in defaults.
    pub fn params(&self, bound: Option<u64>, pairs: &[(String, String)]) -> Result<Params, Error> {
        let bound = match (self.bound, bound) {
            (None, Some(_)) => return Err(Error::NoBound(self.id.to_string())),
            (None, None) => None,
            (Some(spec), b) => {
                let value = b.unwrap_or(spec.default);
                if value < spec.min || value > spec.max {
                    return Err(Error::BoundOutOfRange {
                        campaign: self.id.to_string(),
                        value,
                        min: spec.min,
                        max: spec.max,
                    });
                }
                Some(value)
            }
        };
        let mut values: BTreeMap<String, u64> =
            self.params.iter().map(|p| (p.key.to_string(), p.default)).collect();
        for (k, v) in pairs {
            let spec = self
                .params
                .iter()
                .find(|p| p.key == k)
                .ok_or_else(|| Error::UnknownParam { campaign: self.id.to_string(), key: k.clone() })?;
            let value: u64 = v
                .parse()
                .ok()
                .filter(|x| (spec.min..=spec.max).contains(x))
                .ok_or_else(|| Error::BadParamValue { key: k.clone(), value: v.clone() })?;
            values.insert(k.clone(), value);
        }
        Ok(Params { bound, values })
    }

    pub fn run(&self, params: &Params) -> VerdictReport {
        let mut shown = Values::new();
        if let Some(b) = params.bound {
            shown.insert("bound".into(), b.to_string());
        }
        for (k, v) in &params.values {
            shown.insert(k.clone(), v.to_string());
        }
        let mut report = VerdictReport {
            campaign: self.id.to_string(),
            statement: String::new(),
            params: shown,
            records: Vec::new(),
            status: Status::Error,
            error: None,
            layout: self.layout,
            elapsed_ms: None,
        };
        let fixture = match fixture::load(self.id) {
            Ok(f) => f,
            Err(e) => {
                report.error = Some(e.to_string());
                return report;
            }
        };
        report.statement = fixture.statement.clone();
        match (self.run)(params) {
            Ok(mut records) => {
                fixture.apply(&mut records);
                report.status =
                    if records.iter().all(|r| r.ok) { Status::Verified } else { Status::Counterexample };
                report.records = records;
            }
            Err(e) => report.error = Some(e.to_string()),
        }
        report
    }
}

pub fn campaigns() -> &'static [Campaign] {
    bodies::ALL
}

pub fn campaign(id: &str) -> Result<&'static Campaign, Error> {
    campaigns().iter().find(|c| c.id == id).ok_or_else(|| Error::UnknownCampaign(id.to_string()))
}

/// Runs one campaign with a bound and `k=v` parameters. `timing` adds the
/// elapsed wall time to the report.
pub fn run_campaign(id: &str, bound: Option<u64>, pairs: &[(String, String)], timing: bool) -> Result<VerdictReport, Error> {
    let c = campaign(id)?;
    let params = c.params(bound, pairs)?;
    let start = Instant::now();
    let mut report = c.run(&params);
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Runs the default suite with default parameters. Campaigns run on
/// separate threads; reports come back ordered by id.
pub fn run_all(timing: bool) -> Vec<VerdictReport> {
    let mut reports: Vec<VerdictReport> = std::thread::scope(|s| {
        let handles: Vec<_> = campaigns()
            .iter()
            .filter(|c| c.default_suite)
            .map(|c| s.spawn(move || run_campaign(c.id, None, &[], timing).expect("defaults are valid")))
            .collect();
        handles.into_iter().map(|h| h.join().expect("campaign thread panicked")).collect()
    });
    reports.sort_by(|a, b| a.campaign.cmp(&b.campaign));
    reports
}

/// Worst status over a set of reports.
pub fn overall(reports: &[VerdictReport]) -> Status {
    let worst = |s: Status| reports.iter().any(|r| r.status == s);
    if worst(Status::Error) {
        Status::Error
    } else if worst(Status::Counterexample) {
        Status::Counterexample
    } else {
        Status::Verified
    }
}
