//! Modular Golomb rulers: exhaustive search up to affine equivalence,
//! `MGR(k)` spectra, and the link to relative difference sets with a
//! forbidden subgroup of order 2.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, gcd, inv_mod};
use crate::diffcore::{classify, verify_relative_ds, Classification, DsParams, RelativeParams, Subset};
use crate::error::{Error, Result};
use crate::groups::{units, GroupElement};
use crate::search::{with_jobs, Budget, Meter, SearchMode, SearchReport, SearchStatus};

/// Lengths of optimal Golomb rulers with `k = 1..=15` marks.
pub const GOLOMB_LENGTHS: [u64; 15] = [0, 1, 3, 6, 11, 17, 25, 34, 44, 55, 72, 85, 106, 127, 151];

pub fn golomb_length(k: usize) -> Result<u64> {
    if k == 0 || k > GOLOMB_LENGTHS.len() {
        return Err(Error::InvalidParameter(format!("no optimal ruler length stored for k = {k}")));
    }
    Ok(GOLOMB_LENGTHS[k - 1])
}

/// Shortest Golomb ruler with `k` marks, by exhaustive search. Practical for
/// `k <= 8`; used to check the stored table.
pub fn optimal_ruler_length(k: usize) -> u64 {
    fn extend(marks: &mut Vec<u64>, used: &mut [bool], k: usize, len: u64) -> bool {
        if marks.len() == k - 1 {
            // The last mark is pinned at `len`.
            let ok = marks.iter().all(|&m| !used[(len - m) as usize]);
            if ok {
                let ds: Vec<u64> = marks.iter().map(|&m| len - m).collect();
                let mut seen = ds.clone();
                seen.sort_unstable();
                seen.dedup();
                return seen.len() == ds.len();
            }
            return false;
        }
        let last = *marks.last().unwrap_or(&0);
        let left = (k - 1 - marks.len()) as u64;
        for m in last + 1..=len.saturating_sub(left) {
            let mut placed = Vec::with_capacity(marks.len());
            let mut fits = true;
            for &x in marks.iter() {
                let d = (m - x) as usize;
                if used[d] {
                    fits = false;
                    break;
                }
                used[d] = true;
                placed.push(d);
            }
            if fits {
                marks.push(m);
                if extend(marks, used, k, len) {
                    return true;
                }
                marks.pop();
            }
            for d in placed {
                used[d] = false;
            }
        }
        false
    }
    if k <= 1 {
        return 0;
    }
    let mut len = (k * (k - 1) / 2) as u64;
    loop {
        let mut used = vec![false; len as usize + 1];
        if extend(&mut vec![0], &mut used, k, len) {
            return len;
        }
        len += 1;
    }
}

/// All `k(k-1)` ordered differences of `marks` are distinct and nonzero mod `v`.
pub fn is_mgr(marks: &[u64], v: u64) -> bool {
    let mut seen = vec![false; v as usize];
    for (i, &a) in marks.iter().enumerate() {
        for (j, &b) in marks.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = ((a % v + v - b % v) % v) as usize;
            if d == 0 || seen[d] {
                return false;
            }
            seen[d] = true;
        }
    }
    true
}

fn sorted_image(marks: &[u64], a: u64, shift: u64, v: u64) -> Vec<u64> {
    let mut img: Vec<u64> = marks
        .iter()
        .map(|&x| (a as u128 * ((x + v - shift) % v) as u128 % v as u128) as u64)
        .collect();
    img.sort_unstable();
    img
}

/// Lexicographically least sorted image of `set` under `x -> ax + b`,
/// `gcd(a, v) = 1`.
pub fn affine_lex_min(set: &[u64], v: u64) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    for a in units(v) {
        for &p in set {
            let img = sorted_image(set, a, p, v);
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap_or_default()
}

/// No affine map sends `marks` (sorted, containing 0) to a lexicographically
/// smaller sorted tuple. A `false` answer on a prefix rules out every
/// completion whose smallest marks are that prefix.
pub fn is_canonical_affine(marks: &[u64], v: u64) -> bool {
    for a in units(v) {
        for &p in marks {
            if sorted_image(marks, a, p, v).as_slice() < marks {
                return false;
            }
        }
    }
    true
}

/// A modular Golomb ruler.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ruler {
    pub v: u64,
    pub marks: Vec<u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct MgrOptions {
    pub mode: SearchMode,
    /// Affine canonicity pruning; when off only translations are factored out.
    pub pruning: bool,
    pub jobs: Option<usize>,
    pub budget: Budget,
}

impl Default for MgrOptions {
    fn default() -> Self {
        Self {
            mode: SearchMode::Exists,
            pruning: true,
            jobs: None,
            budget: Budget::unlimited(),
        }
    }
}

impl MgrOptions {
    pub fn mode(mode: SearchMode) -> Self {
        Self { mode, ..Self::default() }
    }
}

/// Per-`m1` table: for each difference `d`, the units `a` with `a d = m1`.
fn multipliers_to(m1: u64, v: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new(); v as usize];
    let vp = v / m1;
    for d in 1..v {
        if gcd(d, v) != m1 {
            continue;
        }
        let Some(a0) = inv_mod(d / m1, vp) else { continue };
        out[d as usize] = (0..m1)
            .map(|t| a0 + t * vp)
            .filter(|&a| a < v && gcd(a, v) == 1)
            .collect();
    }
    out
}

struct Outcome {
    count: u64,
    solutions: Vec<Vec<u64>>,
    witness: Option<Vec<u64>>,
}

struct Worker<'a> {
    v: u64,
    k: usize,
    pruning: bool,
    mode: SearchMode,
    meter: &'a Meter,
    multipliers: &'a [Vec<u64>],
    marks: Vec<u64>,
    used: Vec<bool>,
    local: u64,
    count: u64,
    solutions: Vec<Vec<u64>>,
    witness: Option<Vec<u64>>,
    halted: bool,
    cancel: &'a (dyn Fn() -> bool + Sync),
    scratch: Vec<u64>,
}

impl<'a> Worker<'a> {
    fn new(
        v: u64,
        k: usize,
        opts: &MgrOptions,
        meter: &'a Meter,
        multipliers: &'a [Vec<u64>],
        cancel: &'a (dyn Fn() -> bool + Sync),
    ) -> Self {
        let mut used = vec![false; v as usize];
        used[0] = true;
        Self {
            v,
            k,
            pruning: opts.pruning,
            mode: opts.mode,
            meter,
            multipliers,
            marks: vec![0],
            used,
            local: 0,
            count: 0,
            solutions: Vec::new(),
            witness: None,
            halted: false,
            cancel,
            scratch: Vec::with_capacity(k),
        }
    }

    /// Places `m`, marking its new differences; on conflict leaves state untouched.
    fn place(&mut self, m: u64) -> bool {
        let v = self.v;
        let n = self.marks.len();
        for i in 0..n {
            let x = self.marks[i];
            let d1 = ((m + v - x) % v) as usize;
            let d2 = ((x + v - m) % v) as usize;
            if self.used[d1] || self.used[d2] || d1 == d2 {
                self.unmark(m, i);
                return false;
            }
            self.used[d1] = true;
            self.used[d2] = true;
        }
        self.marks.push(m);
        true
    }

    /// Clears differences of `m` with the first `upto` marks.
    fn unmark(&mut self, m: u64, upto: usize) {
        let v = self.v;
        for &x in &self.marks[..upto] {
            self.used[((m + v - x) % v) as usize] = false;
            self.used[((x + v - m) % v) as usize] = false;
        }
    }

    fn remove_last(&mut self) {
        let m = self.marks.pop().expect("nonempty");
        let n = self.marks.len();
        self.unmark(m, n);
    }

    /// Prefix test: no affine image of the current marks sorts below them.
    /// Only maps sending some `p -> 0` and some `q -> m1` can win, and any
    /// difference with `gcd(d, v) < m1` maps below `m1`.
    fn prefix_canonical(&mut self) -> bool {
        let n = self.marks.len();
        if n < 2 {
            return true;
        }
        let v = self.v;
        let m1 = self.marks[1];
        let last = self.marks[n - 1];
        if m1 > 1 && self.marks[..n - 1].iter().any(|&x| gcd(last - x, v) < m1) {
            return false;
        }
        for pi in 0..n {
            let p = self.marks[pi];
            for qi in 0..n {
                if pi == qi {
                    continue;
                }
                let d = (self.marks[qi] + v - p) % v;
                for &a in &self.multipliers[d as usize] {
                    self.scratch.clear();
                    self.scratch.extend(
                        self.marks
                            .iter()
                            .map(|&x| (a as u128 * ((x + v - p) % v) as u128 % v as u128) as u64),
                    );
                    self.scratch.sort_unstable();
                    if self.scratch[2..] < self.marks[2..] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn leaf(&mut self) {
        self.count += 1;
        match self.mode {
            SearchMode::Exists => {
                self.witness = Some(self.marks.clone());
                self.halted = true;
            }
            SearchMode::All => self.solutions.push(self.marks.clone()),
            SearchMode::Count => {
                if self.witness.is_none() {
                    self.witness = Some(self.marks.clone());
                }
            }
        }
        if self.mode == SearchMode::All && self.witness.is_none() {
            self.witness = Some(self.marks.clone());
        }
    }

    /// Tries mark `m` at the next position; recurses when `depth_limit`
    /// allows, otherwise records the prefix through `on_prefix`.
    fn dfs(&mut self, depth_limit: usize, on_prefix: &mut dyn FnMut(&[u64])) {
        if self.halted {
            return;
        }
        let n = self.marks.len();
        if n == depth_limit {
            on_prefix(&self.marks);
            return;
        }
        if n == self.k {
            self.leaf();
            return;
        }
        let last = *self.marks.last().expect("first mark placed");
        let hi = self.v - (self.k - n) as u64;
        for m in last + 1..=hi {
            if !self.meter.tick(&mut self.local) || (self.cancel)() {
                self.halted = true;
                return;
            }
            if !self.place(m) {
                continue;
            }
            let ok = !self.pruning || self.prefix_canonical();
            if ok {
                self.dfs(depth_limit, on_prefix);
            }
            self.remove_last();
            if self.halted {
                return;
            }
        }
    }
}

/// Exhaustive `(v, k)`-MGR search over rulers with first mark 0. With
/// pruning, COUNT/ALL report affine-orbit representatives (lex-least
/// sorted tuples); without it, every ruler containing 0.
pub fn search_mgr(v: u64, k: usize, opts: MgrOptions) -> Result<SearchReport> {
    if k < 1 || (k as u64) > v {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= v, got v = {v}, k = {k}")));
    }
    let meter = Meter::new(opts.budget);
    let none = |nodes: u64, seconds: f64| SearchReport {
        status: SearchStatus::None,
        witness: None,
        count: 0,
        nodes,
        seconds,
        solutions: Vec::new(),
    };
    if (k * (k - 1)) as u64 > v - 1 {
        return Ok(none(0, meter.seconds()));
    }
    if k == 1 {
        return Ok(SearchReport {
            status: SearchStatus::Exists,
            witness: Some(vec![0]),
            count: 1,
            nodes: 1,
            seconds: meter.seconds(),
            solutions: if opts.mode == SearchMode::All { vec![vec![0]] } else { Vec::new() },
        });
    }

    // Split on the second and third marks; each prefix roots an independent
    // subtree, merged afterwards in prefix order.
    let split = k.min(3);
    let tables: Vec<Vec<Vec<u64>>> = (0..v)
        .map(|m1| {
            if opts.pruning && m1 > 0 && v.is_multiple_of(m1) {
                multipliers_to(m1, v)
            } else {
                Vec::new()
            }
        })
        .collect();
    let never = || false;
    let mut prefixes: Vec<Vec<u64>> = Vec::new();
    for m1 in 1..v {
        // A canonical ruler's second mark divides v.
        if opts.pruning && !v.is_multiple_of(m1) {
            continue;
        }
        let mut w = Worker::new(v, k, &opts, &meter, &tables[m1 as usize], &never);
        if w.place(m1) {
            w.dfs(split, &mut |p| prefixes.push(p.to_vec()));
        }
        let mut local = w.local + 1;
        meter.flush(&mut local);
    }

    let best = AtomicUsize::new(usize::MAX);
    let exists = opts.mode == SearchMode::Exists;
    let outcomes: Vec<Outcome> = with_jobs(opts.jobs, || {
        prefixes
            .par_iter()
            .enumerate()
            .map(|(idx, prefix)| {
                let cancel = || exists && best.load(Ordering::Relaxed) < idx;
                let mut w = Worker::new(v, k, &opts, &meter, &tables[prefix[1] as usize], &cancel);
                for &m in &prefix[1..] {
                    let placed = w.place(m);
                    debug_assert!(placed);
                }
                if !meter.is_exhausted() {
                    w.dfs(usize::MAX, &mut |_| {});
                }
                if w.witness.is_some() {
                    best.fetch_min(idx, Ordering::Relaxed);
                }
                let mut local = w.local;
                meter.flush(&mut local);
                Outcome {
                    count: w.count,
                    solutions: w.solutions,
                    witness: w.witness,
                }
            })
            .collect()
    });

    let mut report = none(meter.nodes(), meter.seconds());
    if exists {
        if let Some(witness) = outcomes.into_iter().find_map(|o| o.witness) {
            report.status = SearchStatus::Exists;
            report.witness = Some(witness);
            report.count = 1;
        } else if meter.is_exhausted() {
            report.status = SearchStatus::Timeout;
        }
        return Ok(report);
    }
    for o in outcomes {
        report.count += o.count;
        report.solutions.extend(o.solutions);
        if report.witness.is_none() {
            report.witness = o.witness;
        }
    }
    report.status = if meter.is_exhausted() {
        SearchStatus::Timeout
    } else if report.count > 0 {
        SearchStatus::Exists
    } else {
        SearchStatus::None
    };
    Ok(report)
}


/// `MGR(k)` below the constructive bound `2 L(k) + 1`; every `v` at or
/// above the bound admits a ruler.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub k: usize,
    pub bound: u64,
    /// Members below `bound`, ascending.
    pub members: Vec<u64>,
    pub witnesses: Vec<Ruler>,
    /// Moduli whose search ran out of budget.
    pub timeouts: Vec<u64>,
    pub nodes: u64,
    pub seconds: f64,
}

impl Spectrum {
    /// Smallest `x` with every `v >= x` a member.
    pub fn tail_start(&self) -> u64 {
        let mut x = self.bound;
        while x > 0 && self.members.binary_search(&(x - 1)).is_ok() {
            x -= 1;
        }
        x
    }

    pub fn is_member(&self, v: u64) -> Option<bool> {
        if v >= self.bound {
            return Some(true);
        }
        if self.timeouts.contains(&v) {
            return None;
        }
        Some(self.members.binary_search(&v).is_ok())
    }

    pub fn is_complete(&self) -> bool {
        self.timeouts.is_empty()
    }
}

/// A published spectrum: isolated members below `tail`, then every `v >= tail`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReportedSpectrum {
    pub k: usize,
    pub isolated: &'static [u64],
    pub tail: u64,
}

impl ReportedSpectrum {
    pub fn contains(&self, v: u64) -> bool {
        v >= self.tail || self.isolated.contains(&v)
    }
}

/// Spectra beyond the previously known range, for extended runs.
pub const REPORTED_SPECTRA: [ReportedSpectrum; 4] = [
    ReportedSpectrum { k: 12, isolated: &[133, 156, 158, 159], tail: 161 },
    ReportedSpectrum { k: 13, isolated: &[168, 183], tail: 193 },
    ReportedSpectrum { k: 14, isolated: &[183], tail: 225 },
    ReportedSpectrum { k: 15, isolated: &[255], tail: 267 },
];

impl Spectrum {
    /// Cell-by-cell comparison over `[k, bound)`; `None` while any cell is
    /// undecided.
    pub fn agrees_with(&self, reported: &ReportedSpectrum) -> Option<bool> {
        if reported.k != self.k {
            return Some(false);
        }
        let mut all = true;
        for v in self.k as u64..self.bound {
            all &= self.is_member(v)? == reported.contains(v);
        }
        Some(all)
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail = self.tail_start();
        let sporadic: Vec<String> = self
            .members
            .iter()
            .filter(|&&m| m < tail)
            .map(|m| m.to_string())
            .collect();
        write!(f, "MGR({}) = ", self.k)?;
        if !sporadic.is_empty() {
            write!(f, "{{{}}} ∪ ", sporadic.join(", "))?;
        }
        write!(f, "{{v : v ≥ {tail}}}")?;
        if !self.timeouts.is_empty() {
            write!(f, " (undecided: {:?})", self.timeouts)?;
        }
        Ok(())
    }
}

/// Searches every `v` in `[k, 2 L(k)]` in EXISTS mode.
pub fn spectrum(k: usize, opts: MgrOptions) -> Result<Spectrum> {
    let bound = 2 * golomb_length(k)? + 1;
    let opts = MgrOptions { mode: SearchMode::Exists, ..opts };
    let mut out = Spectrum {
        k,
        bound,
        members: Vec::new(),
        witnesses: Vec::new(),
        timeouts: Vec::new(),
        nodes: 0,
        seconds: 0.0,
    };
    for v in (k as u64).max(1)..bound {
        let r = search_mgr(v, k, opts)?;
        out.nodes += r.nodes;
        out.seconds += r.seconds;
        match r.status {
            SearchStatus::Exists => {
                out.members.push(v);
                out.witnesses.push(Ruler {
                    v,
                    marks: r.witness.expect("witness with EXISTS"),
                });
            }
            SearchStatus::Timeout => out.timeouts.push(v),
            _ => {}
        }
    }
    Ok(out)
}

/// A `(k^2 - k + 2, k)`-MGR read as a relative `((k^2 - k + 2)/2, 2, k, 1)`
/// difference set against `{0, v/2}`.
pub fn mgr_to_relative_ds(marks: &[u64], k: usize) -> Result<(Subset, RelativeParams)> {
    let v = (k * k - k + 2) as u64;
    if marks.len() != k {
        return Err(Error::InvalidParameter(format!("expected {k} marks, got {}", marks.len())));
    }
    if !is_mgr(marks, v) {
        return Err(Error::Verification(format!("{marks:?} is not a ({v},{k})-MGR")));
    }
    let set = Subset::cyclic(v, marks)?;
    let params = RelativeParams { m: v / 2, n: 2, k: k as u64, lambda: 1 };
    let forbidden = [GroupElement::cyclic(0), GroupElement::cyclic(v / 2)];
    if !verify_relative_ds(&set, &forbidden, params)? {
        return Err(Error::Verification(format!("{marks:?} is not a relative {params:?} set")));
    }
    Ok((set, params))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum RyserVerdict {
    Pass,
    Fail(String),
}

/// Necessary conditions for a relative `(m, 2, k, λ)` set: `k - 2λ` square
/// when `m` is even, `k` square when `m` is odd.
pub fn ryser_conditions(m: u64, k: u64, lambda: u64) -> RyserVerdict {
    if m.is_multiple_of(2) {
        match k.checked_sub(2 * lambda) {
            Some(x) if exact_sqrt(x).is_some() => RyserVerdict::Pass,
            Some(x) => RyserVerdict::Fail(format!("m = {m} even and k - 2λ = {x} is not a square")),
            None => RyserVerdict::Fail(format!("m = {m} even and k - 2λ < 0")),
        }
    } else if exact_sqrt(k).is_some() {
        RyserVerdict::Pass
    } else {
        RyserVerdict::Fail(format!("m = {m} odd and k = {k} is not a square"))
    }
}

/// Reduces a relative `(m, 2, k, λ)` set in `Z_{2m}` modulo `m`, which gives
/// an `(m, k, 2λ)` difference set.
pub fn ryser_project(residues: &[u64], m: u64) -> Result<Subset> {
    let v = 2 * m;
    let k = residues.len() as u64;
    if m < 2 || k < 2 {
        return Err(Error::InvalidParameter("projection needs m >= 2 and k >= 2".into()));
    }
    let pairs = k * (k - 1);
    if !pairs.is_multiple_of(v - 2) {
        return Err(Error::Verification(format!("k(k-1) = {pairs} not divisible by 2m - 2")));
    }
    let lambda = pairs / (v - 2);
    let set = Subset::cyclic(v, residues)?;
    let forbidden = [GroupElement::cyclic(0), GroupElement::cyclic(m)];
    let params = RelativeParams { m, n: 2, k, lambda };
    if !verify_relative_ds(&set, &forbidden, params)? {
        return Err(Error::Verification(format!("input is not a relative {params:?} set")));
    }
    let reduced: Vec<u64> = residues.iter().map(|r| r % m).collect();
    let proj = Subset::cyclic(m, &reduced)?;
    let expect = Classification::DifferenceSet(DsParams { v: m, k, lambda: 2 * lambda });
    let got = classify(&proj);
    if got != expect {
        return Err(Error::Verification(format!("projection classified as {got}, expected {expect}")));
    }
    Ok(proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn count(v: u64, k: usize, pruning: bool) -> SearchReport {
        search_mgr(
            v,
            k,
            MgrOptions { mode: SearchMode::All, pruning, ..MgrOptions::default() },
        )
        .unwrap()
    }

    #[test]
    fn mgr_predicate() {
        assert!(is_mgr(&[0, 1, 3], 7));
        assert!(!is_mgr(&[0, 1, 3, 7], 14));
        assert!(is_mgr(&[0, 1, 3], 8));
        assert!(!is_mgr(&[0, 1], 2));
        assert!(is_mgr(&[0], 5));
    }

    #[test]
    fn canonicity_examples() {
        assert!(is_canonical_affine(&[0, 1, 3], 7));
        assert!(!is_canonical_affine(&[0, 2, 6], 7));
        assert!(is_canonical_affine(&[0], 9));
        assert_eq!(affine_lex_min(&[0, 2, 6], 7), vec![0, 1, 3]);
    }

    #[test]
    fn golomb_table_matches_search() {
        for k in 1..=8 {
            assert_eq!(optimal_ruler_length(k), golomb_length(k).unwrap(), "k = {k}");
        }
        assert!(golomb_length(16).is_err());
        // MGR(12) contains every v >= 161 and 161 sits below the bound.
        assert!(161 <= 2 * golomb_length(12).unwrap() + 1);
    }

    #[test]
    fn search_examples() {
        let r = search_mgr(14, 4, MgrOptions::default()).unwrap();
        assert_eq!(r.status, SearchStatus::Exists);
        assert!(is_mgr(r.witness.as_ref().unwrap(), 14));
        let r = search_mgr(22, 5, MgrOptions::default()).unwrap();
        assert_eq!(r.status, SearchStatus::None);
        let r = search_mgr(7, 3, MgrOptions::mode(SearchMode::All)).unwrap();
        assert_eq!(r.solutions, vec![vec![0, 1, 3]]);
        let r = search_mgr(6, 3, MgrOptions::default()).unwrap();
        assert_eq!(r.status, SearchStatus::None);
    }

    #[test]
    fn timeout_is_reported() {
        let opts = MgrOptions {
            mode: SearchMode::Count,
            budget: Budget::nodes(5_000),
            ..MgrOptions::default()
        };
        let r = search_mgr(200, 9, opts).unwrap();
        assert_eq!(r.status, SearchStatus::Timeout);
        assert!(r.nodes >= 5_000);
    }

    /// Representatives from the pruned search equal the orbit minima of all
    /// rulers from the unpruned one.
    #[test]
    fn canonicity_is_sound() {
        for v in 2..=30u64 {
            for k in 2..=5usize {
                if k as u64 > v {
                    continue;
                }
                let pruned: BTreeSet<Vec<u64>> = count(v, k, true).solutions.into_iter().collect();
                let all = count(v, k, false).solutions;
                for r in &all {
                    assert!(is_mgr(r, v));
                }
                let minima: BTreeSet<Vec<u64>> = all.iter().map(|r| affine_lex_min(r, v)).collect();
                assert_eq!(pruned, minima, "v = {v}, k = {k}");
                for r in &pruned {
                    assert!(is_canonical_affine(r, v));
                }
            }
        }
    }

    /// Unpruned enumeration against a plain scan over all subsets containing 0.
    #[test]
    fn unpruned_matches_subset_scan() {
        fn scan(v: u64, k: usize) -> Vec<Vec<u64>> {
            let mut out = Vec::new();
            for mask in 0u32..(1 << (v - 1)) {
                if mask.count_ones() as usize != k - 1 {
                    continue;
                }
                let mut s = vec![0];
                s.extend((1..v).filter(|i| mask >> (i - 1) & 1 == 1));
                if is_mgr(&s, v) {
                    out.push(s);
                }
            }
            out.sort();
            out
        }
        for v in 4..=16 {
            for k in 2..=4 {
                let mut got = count(v, k, false).solutions;
                got.sort();
                assert_eq!(got, scan(v, k), "v = {v}, k = {k}");
            }
        }
    }

    #[test]
    fn jobs_do_not_change_results() {
        for jobs in [1, 2, 3] {
            let opts = |mode| MgrOptions { mode, jobs: Some(jobs), ..MgrOptions::default() };
            let c = search_mgr(57, 8, opts(SearchMode::All)).unwrap();
            let base = search_mgr(57, 8, MgrOptions::mode(SearchMode::All)).unwrap();
            assert_eq!(c.solutions, base.solutions);
            let e = search_mgr(60, 7, opts(SearchMode::Exists)).unwrap();
            let e0 = search_mgr(60, 7, MgrOptions::default()).unwrap();
            assert_eq!(e.witness, e0.witness);
        }
    }

    #[test]
    fn small_spectra() {
        let s3 = spectrum(3, MgrOptions::default()).unwrap();
        assert_eq!(s3.bound, 7);
        assert!(s3.members.is_empty());
        assert_eq!(s3.is_member(7), Some(true));
        let s4 = spectrum(4, MgrOptions::default()).unwrap();
        assert_eq!(s4.bound, 13);
        assert!(s4.members.is_empty());
        assert_eq!(s4.to_string(), "MGR(4) = {v : v ≥ 13}");
        let s5 = spectrum(5, MgrOptions::default()).unwrap();
        assert_eq!(s5.to_string(), "MGR(5) = {21} ∪ {v : v ≥ 23}");
    }

    #[test]
    fn relative_and_ryser() {
        let (set, p) = mgr_to_relative_ds(&[0, 1, 3], 3).unwrap();
        assert_eq!(p, RelativeParams { m: 4, n: 2, k: 3, lambda: 1 });
        assert_eq!(set.residues(), vec![0, 1, 3]);
        let w = search_mgr(14, 4, MgrOptions::default()).unwrap().witness.unwrap();
        let (_, p) = mgr_to_relative_ds(&w, 4).unwrap();
        assert_eq!(p, RelativeParams { m: 7, n: 2, k: 4, lambda: 1 });
        let proj = ryser_project(&w, 7).unwrap();
        assert_eq!(classify(&proj), Classification::DifferenceSet(DsParams { v: 7, k: 4, lambda: 2 }));
        assert_eq!(ryser_project(&[0, 1, 3], 4).unwrap().residues(), vec![0, 1, 3]);
        assert!(ryser_project(&[0, 1, 2], 4).is_err());
        assert!(mgr_to_relative_ds(&[0, 1, 2], 3).is_err());

        assert_eq!(ryser_conditions(7, 4, 1), RyserVerdict::Pass);
        assert_eq!(ryser_conditions(37, 9, 2), RyserVerdict::Pass);
        assert!(matches!(ryser_conditions(11, 5, 2), RyserVerdict::Fail(_)));
        assert_eq!(ryser_conditions(4, 3, 1), RyserVerdict::Pass);
    }

    #[test]
    fn reported_spectrum_comparison() {
        let s5 = spectrum(5, MgrOptions::default()).unwrap();
        let right = ReportedSpectrum { k: 5, isolated: &[21], tail: 23 };
        let wrong = ReportedSpectrum { k: 5, isolated: &[], tail: 21 };
        assert_eq!(s5.agrees_with(&right), Some(true));
        assert_eq!(s5.agrees_with(&wrong), Some(false));
    }

    /// Hours of search; `cargo test -- --ignored`.
    #[test]
    #[ignore]
    fn spectrum_twelve_matches_report() {
        let s = spectrum(12, MgrOptions::default()).unwrap();
        assert_eq!(s.agrees_with(&REPORTED_SPECTRA[0]), Some(true), "{s}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// The difference table after arbitrary place/backtrack sequences
        /// equals a recount from the current marks.
        #[test]
        fn difference_table_undo(v in 8u64..60, ops in proptest::collection::vec((0u64..60, any::<bool>()), 1..40)) {
            let meter = Meter::new(Budget::unlimited());
            let never = || false;
            let opts = MgrOptions { pruning: false, ..MgrOptions::default() };
            let mut w = Worker::new(v, v as usize, &opts, &meter, &[], &never);
            for (m, pop) in ops {
                if pop && w.marks.len() > 1 {
                    w.remove_last();
                } else if !w.marks.contains(&(m % v)) {
                    let _ = w.place(m % v);
                }
                let mut fresh = vec![false; v as usize];
                fresh[0] = true;
                for &a in &w.marks {
                    for &b in &w.marks {
                        if a != b {
                            fresh[((a + v - b) % v) as usize] = true;
                        }
                    }
                }
                prop_assert_eq!(&fresh, &w.used);
                prop_assert!(is_mgr(&w.marks, v));
            }
        }
    }
}
