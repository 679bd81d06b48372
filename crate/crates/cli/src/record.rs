//! The JSON exchange format for sets, plus the short command-line forms.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use diffset::{Classification, GroupElement, GroupSpec, Subset};
use serde::{Deserialize, Deserializer, Serialize};

/// A subset of `Z_{n1} x ... x Z_{nr}`. Cyclic sets may list plain
/// integers; they are written back as one-coordinate arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetRecord {
    pub group: Vec<u64>,
    #[serde(deserialize_with = "elements")]
    pub set: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    /// Filled in on output; ignored and recomputed on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawElement {
    Scalar(u64),
    Coords(Vec<u64>),
}

fn elements<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<u64>>, D::Error> {
    let raw = Vec::<RawElement>::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|r| match r {
            RawElement::Scalar(x) => vec![x],
            RawElement::Coords(c) => c,
        })
        .collect())
}

impl SetRecord {
    pub fn from_subset(set: &Subset, label: Option<String>, provenance: Option<String>) -> Self {
        Self {
            group: set.group().orders().to_vec(),
            set: set.elements().into_iter().map(|e| e.coords).collect(),
            label,
            provenance,
            classification: None,
        }
    }

    pub fn classified(mut self) -> Result<Self> {
        self.classification = Some(diffset::classify(&self.to_subset()?));
        Ok(self)
    }

    /// Coordinates must already be reduced and pairwise distinct.
    pub fn to_subset(&self) -> Result<Subset> {
        let group = GroupSpec::new(self.group.clone()).context("bad group")?;
        let mut elems = Vec::with_capacity(self.set.len());
        for coords in &self.set {
            if coords.len() != group.rank() {
                bail!("element {coords:?} has {} coordinates, group {group} needs {}", coords.len(), group.rank());
            }
            if coords.iter().zip(group.orders()).any(|(c, n)| c >= n) {
                bail!("element {coords:?} is not reduced in {group}");
            }
            elems.push(GroupElement::new(coords.clone()));
        }
        Subset::new(group, &elems).context("bad set")
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

pub fn read_record(path: &Path) -> Result<SetRecord> {
    let text = read_text(path)?;
    serde_json::from_str(&text).with_context(|| format!("parsing set record from {}", path.display()))
}

/// A database is a JSON array of records.
pub fn read_database(path: &Path) -> Result<Vec<SetRecord>> {
    let text = read_text(path)?;
    serde_json::from_str(&text).with_context(|| format!("parsing set database {}", path.display()))
}

/// `7`, `4,4`, `4x4`, `Z4xZ4`, `Z2×Z8`.
pub fn parse_group(s: &str) -> Result<GroupSpec> {
    let orders = s
        .split(|c: char| c == 'x' || c == 'X' || c == '×' || c == ',' || c.is_whitespace())
        .map(|t| t.trim().trim_start_matches(['Z', 'z']))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().with_context(|| format!("bad factor {t:?} in group {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupSpec::new(orders)?)
}

/// Cyclic: `1,2,4` or `1 2 4`. Otherwise elements split by `;`, coordinates
/// by `,`, with optional parentheses: `(0,0);(1,0)`.
pub fn parse_elements(s: &str, group: &GroupSpec) -> Result<Vec<Vec<u64>>> {
    let number = |t: &str| t.trim().parse::<u64>().with_context(|| format!("bad coordinate {t:?}"));
    if group.rank() == 1 {
        return s
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| Ok(vec![number(t)?]))
            .collect();
    }
    s.split(';')
        .map(|e| e.trim().trim_start_matches('(').trim_end_matches(')'))
        .filter(|e| !e.is_empty())
        .map(|e| e.split(',').map(number).collect())
        .collect()
}
