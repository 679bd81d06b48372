//! Single-element extensions of a difference set: elements whose addition or
//! removal leaves an almost difference set, and batch scans over set lists.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffcore::{classify, sumset_mask, AdsParams, Classification, DsParams, Subset};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};

fn require_ds(set: &Subset) -> Result<DsParams> {
    match classify(set) {
        Classification::DifferenceSet(p) => Ok(p),
        other => Err(Error::NotDifferenceSet(other.to_string())),
    }
}

/// Candidates `c` with `(c - D) ∩ (D - c) = ∅`, or `= {0}` when `member`
/// (the pair `d1 = d2 = c` is then allowed).
fn general_condition(set: &Subset, candidates: impl Iterator<Item = usize>, member: bool) -> Vec<usize> {
    let g = set.group();
    let v = g.order() as usize;
    let idx = set.indices();
    let mut stamp = vec![usize::MAX; v];
    let mut out = Vec::new();
    for c in candidates {
        // stamp[x] = c marks x ∈ c - D.
        for &d in idx {
            stamp[g.sub_idx(c, d)] = c;
        }
        let clash = idx.iter().any(|&d| {
            let h = g.sub_idx(d, c);
            stamp[h] == c && !(member && h == 0)
        });
        if !clash {
            out.push(c);
        }
    }
    out
}

/// Odd order: `(g - D) ∩ (D - g) = ∅` iff `2g ∉ S(D)`, checked against one
/// sumset table.
fn sumset_condition(set: &Subset, candidates: impl Iterator<Item = usize>) -> Vec<usize> {
    let g = set.group();
    let mask = sumset_mask(set);
    candidates.filter(|&c| !mask[g.add_idx(c, c)]).collect()
}

fn addable_indices(set: &Subset) -> Vec<usize> {
    let v = set.group().order() as usize;
    let outside = (0..v).filter(|&i| !set.contains_index(i));
    if v % 2 == 1 {
        sumset_condition(set, outside)
    } else {
        general_condition(set, outside, false)
    }
}

fn removable_indices(set: &Subset) -> Vec<usize> {
    let inside = set.indices().to_vec().into_iter();
    if set.group().order() % 2 == 1 {
        sumset_condition(set, inside)
    } else {
        general_condition(set, inside, true)
    }
}

fn to_elements(group: &GroupSpec, idx: Vec<usize>) -> Vec<GroupElement> {
    idx.into_iter()
        .map(|i| group.element_at(i).expect("index in range"))
        .collect()
}

/// All `g ∉ D` with `(g - D) ∩ (D - g) = ∅`, in index order. `D` must be a
/// difference set.
pub fn addable_elements(set: &Subset) -> Result<Vec<GroupElement>> {
    require_ds(set)?;
    Ok(to_elements(set.group(), addable_indices(set)))
}

/// All `d ∈ D` with `(d - D) ∩ (D - d) = {0}`. `D` must be a difference set
/// with `λ >= 1`.
pub fn removable_elements(set: &Subset) -> Result<Vec<GroupElement>> {
    let p = require_ds(set)?;
    if p.lambda == 0 {
        return Err(Error::InvalidParameter("removal needs λ >= 1".into()));
    }
    Ok(to_elements(set.group(), removable_indices(set)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub element: GroupElement,
    pub result: Classification,
    /// The result is a perfect difference set, so the predicted `t` is 0
    /// or `v - 1`.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub group: GroupSpec,
    pub base: Classification,
    pub addable: Vec<Extension>,
    pub removable: Vec<Extension>,
}

impl ExtensionReport {
    pub fn is_empty(&self) -> bool {
        self.addable.is_empty() && self.removable.is_empty()
    }
}

fn checked(element: GroupElement, changed: &Subset, expected: AdsParams) -> Result<Extension> {
    let result = classify(changed);
    let degenerate = match result {
        Classification::AlmostDifferenceSet(p) if p == expected => false,
        Classification::DifferenceSet(_) => true,
        _ => {
            return Err(Error::Invariant(format!(
                "changing {element} gave {result}, expected {expected}-ADS"
            )))
        }
    };
    Ok(Extension { element, result, degenerate })
}

/// Addable and removable elements of a difference set, each re-classified:
/// additions give `(v, k+1, λ, v-1-2k)`, removals `(v, k-1, λ-1, 2(k-1))`.
pub fn extension_report(set: &Subset) -> Result<ExtensionReport> {
    let p = require_ds(set)?;
    let group = set.group().clone();
    let mut addable = Vec::new();
    if 2 * p.k < p.v {
        let expected = AdsParams::new(p.v, p.k + 1, p.lambda, p.v - 1 - 2 * p.k);
        for i in addable_indices(set) {
            let e = group.element_at(i)?;
            addable.push(checked(e, &set.with_index(i)?, expected)?);
        }
    }
    let mut removable = Vec::new();
    if p.lambda >= 1 && p.k >= 1 {
        let expected = AdsParams::new(p.v, p.k - 1, p.lambda - 1, 2 * (p.k - 1));
        for i in removable_indices(set) {
            let e = group.element_at(i)?;
            removable.push(checked(e, &set.without_index(i), expected)?);
        }
    }
    Ok(ExtensionReport {
        group,
        base: Classification::DifferenceSet(p),
        addable,
        removable,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanHit {
    /// Position in the input list.
    pub index: usize,
    pub report: ExtensionReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFailure {
    pub index: usize,
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOutcome {
    /// Records with at least one addable or removable element, input order.
    pub hits: Vec<ScanHit>,
    pub failures: Vec<ScanFailure>,
}

/// Tries every single-element addition and removal on each record in
/// parallel; failures are collected rather than aborting the scan.
pub fn scan_database(records: &[Subset]) -> ScanOutcome {
    let results: Vec<Result<ExtensionReport>> = records.par_iter().map(extension_report).collect();
    let mut out = ScanOutcome::default();
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(report) if !report.is_empty() => out.hits.push(ScanHit { index, report }),
            Ok(_) => {}
            Err(e) => out.failures.push(ScanFailure { index, error: e.to_string() }),
        }
    }
    out
}
