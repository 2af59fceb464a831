//! Expected outcomes, one JSON document per campaign under `fixtures/`.
//!
//! ```json
//! { "id": "table1",
//!   "statement": "...",
//!   "expected": { "default": {..}, "groups": {"g": {..}}, "items": {"i": {..}} } }
//! ```
//!
//! A record's expectation merges `default`, then its group's entry, then its
//! item's entry. Every item listed under `items` must be produced.

use indexmap::IndexMap;
use serde::Deserialize;

use crate::report::{Record, Values};
use crate::Error;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default)]
    pub default: Values,
    #[serde(default)]
    pub groups: IndexMap<String, Values>,
    #[serde(default)]
    pub items: IndexMap<String, Values>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub id: String,
    pub statement: String,
    #[serde(default)]
    pub note: Option<String>,
    #[serde(default)]
    pub expected: Expected,
}

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        const SOURCES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../fixtures/", $name, ".json")))),*
        ];
    };
}

fixtures!(
    "table1",
    "hj-examples",
    "continuant-identities",
    "hj-roundtrip",
    "discrepancy",
    "basket-values",
    "k2-case-identities",
    "L13",
    "odd-chain",
    "L11-window",
    "curve-examples",
    "end-end",
    "rdp-case-n3",
    "rdp-case-n4",
    "pair-scan-23719",
    "contraction-identities",
    "ed-ge-2",
    "cascade-demo",
    "fiber-enumeration",
    "fiberD2",
    "fiberD3",
);

pub fn load(id: &str) -> Result<Fixture, Error> {
    let (name, text) = SOURCES
        .iter()
        .find(|(name, _)| *name == id)
        .ok_or_else(|| Error::Fixture { name: id.to_string(), reason: "no fixture".into() })?;
    let fixture: Fixture =
        serde_json::from_str(text).map_err(|e| Error::Fixture { name: name.to_string(), reason: e.to_string() })?;
    if fixture.id != *name {
        return Err(Error::Fixture { name: name.to_string(), reason: format!("id is `{}`", fixture.id) });
    }
    Ok(fixture)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

impl Fixture {
    /// Fills in `expected` and `ok` for every record and appends a failing
    /// record for each expected item that was not produced.
    pub fn apply(&self, records: &mut Vec<Record>) {
        for r in records.iter_mut() {
            let mut exp = self.expected.default.clone();
            if let Some(g) = r.group.as_ref().and_then(|g| self.expected.groups.get(g)) {
                exp.extend(g.clone());
            }
            if let Some(i) = self.expected.items.get(&r.item) {
                exp.extend(i.clone());
            }
            r.expected = exp;
            r.ok = r.mismatches().is_empty();
        }
        for (item, exp) in &self.expected.items {
            if !records.iter().any(|r| &r.item == item) {
                let mut missing = Record::new(item.clone()).value("produced", "false");
                missing.expected = exp.clone();
                missing.expected.insert("produced".into(), "true".into());
                missing.ok = false;
                records.push(missing);
            }
        }
    }
}
