//! Exhaustive ADS search in `Z_v`, one candidate per translation class.
//!
//! A k-subset containing 0 is written by its cyclic gap sequence
//! `a_1, ..., a_k` (positive, summing to `v`); translates of the set rotate
//! the gaps. Generating each gap necklace once, in its lexicographically
//! least rotation, visits every translation class exactly once. Marks are
//! prefix sums, so appending a gap adds one mark and updates the difference
//! profile in `O(t)`.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffcore::{AdsParams, DiffProfile, Subset};
use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::search::{with_jobs, Budget, Meter, SearchMode, SearchReport, SearchStatus};

/// A published cyclic ADS with its stated parameters.
#[derive(Clone, Copy, Debug)]
pub struct KnownAds {
    pub params: (u64, u64, u64, u64),
    pub set: &'static [u64],
}

impl KnownAds {
    pub fn expected(&self) -> AdsParams {
        let (v, k, lambda, t) = self.params;
        AdsParams::new(v, k, lambda, t)
    }

    pub fn subset(&self) -> Result<Subset> {
        Subset::cyclic(self.params.0, self.set)
    }
}

/// Cyclic almost difference sets once reported as nonexistent.
pub const MISSED_ADS: [KnownAds; 5] = [
    KnownAds {
        params: (39, 17, 7, 32),
        set: &[1, 2, 3, 5, 9, 13, 16, 19, 21, 22, 24, 26, 27, 28, 31, 32, 33],
    },
    KnownAds {
        params: (48, 17, 5, 10),
        set: &[1, 2, 3, 5, 7, 9, 10, 16, 17, 18, 21, 24, 27, 29, 30, 34, 39],
    },
    KnownAds {
        params: (48, 22, 9, 8),
        set: &[1, 2, 3, 5, 6, 13, 19, 20, 21, 24, 25, 27, 28, 29, 31, 33, 34, 37, 39, 40, 42, 44],
    },
    KnownAds {
        params: (48, 23, 10, 11),
        set: &[1, 2, 3, 4, 6, 7, 9, 10, 11, 15, 17, 18, 20, 22, 24, 25, 28, 29, 30, 34, 37, 40, 41],
    },
    KnownAds {
        params: (50, 20, 7, 12),
        set: &[1, 2, 3, 5, 7, 8, 10, 12, 17, 18, 20, 21, 24, 25, 28, 29, 31, 37, 42, 43],
    },
];

/// `λ = ⌊k(k-1)/(v-1)⌋`, `t = (λ+1)(v-1) - k(k-1)` and `t̂`.
pub fn forced_params(v: u64, k: u64) -> AdsParams {
    AdsParams::forced(v, k)
}

/// State of the enumeration at a visited necklace.
#[derive(Clone, Debug)]
pub struct NecklaceCursor {
    v: u64,
    k: usize,
    /// `gaps[1..=k]`; slot 0 is a sentinel.
    gaps: Vec<u64>,
    marks: Vec<u64>,
    counts: Vec<u32>,
    sum: u64,
}

impl NecklaceCursor {
    fn new(v: u64, k: usize) -> Self {
        Self {
            v,
            k,
            gaps: vec![0; k + 1],
            marks: if k == 0 { Vec::new() } else { vec![0] },
            counts: vec![0; v as usize],
            sum: 0,
        }
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Sorted marks, starting at 0: the least translate containing 0.
    pub fn marks(&self) -> &[u64] {
        &self.marks
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps[1..]
    }

    /// Incrementally maintained difference counts, indexed by residue.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn word(&self) -> Vec<bool> {
        let mut w = vec![false; self.v as usize];
        for &m in &self.marks {
            w[m as usize] = true;
        }
        w
    }

    pub fn profile(&self) -> Result<DiffProfile> {
        DiffProfile::from_counts(GroupSpec::cyclic(self.v)?, self.k, self.counts.clone())
    }

    /// Appends gap `x` at position `t < k`, adding mark `sum + x`. Counts
    /// are left to the caller.
    fn push_gap(&mut self, t: usize, x: u64) {
        self.gaps[t] = x;
        self.sum += x;
        self.marks.push(self.sum);
    }

    fn pop_gap(&mut self, t: usize) {
        self.marks.pop();
        self.sum -= self.gaps[t];
    }
}

/// Profile constraint for ADS search: counts never exceed `cap`, and the
/// outstanding deficit below `floor` must fit in the pairs still to come.
#[derive(Clone, Copy, Debug)]
struct Bounds {
    floor: u32,
    cap: u32,
}

struct Walker<'a, F: FnMut(&NecklaceCursor) -> ControlFlow<()>> {
    cur: NecklaceCursor,
    bounds: Option<Bounds>,
    /// `Σ max(0, floor - count)` over nonzero residues.
    deficit: u64,
    meter: Option<&'a Meter>,
    local: u64,
    halted: bool,
    visited: u64,
    visit: F,
    cancel: &'a (dyn Fn() -> bool + Sync),
    /// Stop after `split - 1` gaps and record the prefix with its period.
    split: Option<usize>,
    prefixes: Vec<(Vec<u64>, usize)>,
}

impl<'a, F: FnMut(&NecklaceCursor) -> ControlFlow<()>> Walker<'a, F> {
    fn new(
        v: u64,
        k: usize,
        bounds: Option<Bounds>,
        meter: Option<&'a Meter>,
        visit: F,
        cancel: &'a (dyn Fn() -> bool + Sync),
    ) -> Self {
        let deficit = bounds.map_or(0, |b| b.floor as u64 * (v - 1));
        Self {
            cur: NecklaceCursor::new(v, k),
            bounds,
            deficit,
            meter,
            local: 0,
            halted: false,
            visited: 0,
            visit,
            cancel,
            split: None,
            prefixes: Vec::new(),
        }
    }

    /// Pushes a gap and updates counts; returns false (state rolled back)
    /// when the bounds rule out every completion.
    fn advance(&mut self, t: usize, x: u64) -> bool {
        self.cur.push_gap(t, x);
        let n = self.cur.marks.len() - 1;
        let m = self.cur.marks[n];
        let v = self.cur.v as usize;
        let (floor, cap) = self.bounds.map_or((0, u32::MAX), |b| (b.floor, b.cap));
        let mut over = false;
        for i in 0..n {
            let d = (m - self.cur.marks[i]) as usize;
            for slot in [d, v - d] {
                let c = &mut self.cur.counts[slot];
                *c += 1;
                if *c <= floor {
                    self.deficit -= 1;
                }
                over |= *c > cap;
            }
        }
        if self.bounds.is_some() {
            let placed = (n + 1) as u64;
            let k = self.cur.k as u64;
            let remaining = k * (k - 1) - placed * (placed - 1);
            if over || self.deficit > remaining {
                self.retreat(t);
                return false;
            }
        }
        true
    }

    fn retreat(&mut self, t: usize) {
        let n = self.cur.marks.len() - 1;
        let m = self.cur.marks[n];
        let v = self.cur.v as usize;
        let floor = self.bounds.map_or(0, |b| b.floor);
        for i in (0..n).rev() {
            let d = (m - self.cur.marks[i]) as usize;
            for slot in [v - d, d] {
                let c = &mut self.cur.counts[slot];
                if *c <= floor {
                    self.deficit += 1;
                }
                *c -= 1;
            }
        }
        self.cur.pop_gap(t);
    }

    fn tick(&mut self) -> bool {
        if let Some(meter) = self.meter {
            if !meter.tick(&mut self.local) {
                self.halted = true;
                return false;
            }
        }
        if (self.cancel)() {
            self.halted = true;
            return false;
        }
        true
    }

    /// Extends a prenecklace of `t - 1` gaps with period `p`.
    fn gen(&mut self, t: usize, p: usize) {
        if self.halted {
            return;
        }
        if self.split == Some(t) {
            self.prefixes.push((self.cur.gaps[1..t].to_vec(), p));
            return;
        }
        let k = self.cur.k;
        let v = self.cur.v;
        if t == k {
            // The last gap closes the cycle.
            let last = v - self.cur.sum;
            let prev = self.cur.gaps[k - p];
            if last < prev {
                return;
            }
            let p2 = if last == prev { p } else { k };
            if !k.is_multiple_of(p2) {
                return;
            }
            self.cur.gaps[k] = last;
            self.visited += 1;
            if (self.visit)(&self.cur).is_break() {
                self.halted = true;
            }
            return;
        }
        let (lo, hi) = if t == 1 {
            (1, v / k as u64)
        } else {
            // Every later gap is at least the first one.
            let a1 = self.cur.gaps[1];
            (self.cur.gaps[t - p], v - self.cur.sum - (k - t) as u64 * a1)
        };
        for x in lo..=hi {
            if !self.tick() {
                return;
            }
            let p2 = if t == 1 || x == self.cur.gaps[t - p] { p } else { t };
            if !self.advance(t, x) {
                continue;
            }
            self.gen(t + 1, p2);
            self.retreat(t);
            if self.halted {
                return;
            }
        }
    }

    fn run(&mut self) {
        if self.cur.k <= 1 {
            self.visited += 1;
            if (self.visit)(&self.cur).is_break() {
                self.halted = true;
            }
            return;
        }
        self.gen(1, 1);
    }
}

fn never() -> bool {
    false
}

/// Visits one representative of every translation class of k-subsets of
/// `Z_v`; returns the number visited. The visitor may stop early.
pub fn enumerate_fixed_density(
    v: u64,
    k: usize,
    visit: impl FnMut(&NecklaceCursor) -> ControlFlow<()>,
) -> Result<u64> {
    if v == 0 || k as u64 > v {
        return Err(Error::InvalidParameter(format!("need 0 <= k <= v, v >= 1; got v = {v}, k = {k}")));
    }
    let mut w = Walker::new(v, k, None, None, visit, &never);
    w.run();
    Ok(w.visited)
}

/// Number of binary necklaces of length `v` with `k` ones.
pub fn necklace_count(v: u64, k: u64) -> u128 {
    use crate::arith::{euler_phi, gcd};
    fn binom(n: u64, r: u64) -> u128 {
        let r = r.min(n - r);
        (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    }
    if k > v {
        return 0;
    }
    if k == 0 || k == v {
        return 1;
    }
    let g = gcd(v, k);
    let total: u128 = (1..=g)
        .filter(|d| g.is_multiple_of(*d))
        .map(|d| euler_phi(d) as u128 * binom(v / d, k / d))
        .sum();
    total / v as u128
}

#[derive(Clone, Copy, Debug)]
pub struct AdsOptions {
    pub mode: SearchMode,
    pub jobs: Option<usize>,
    pub budget: Budget,
}

impl Default for AdsOptions {
    fn default() -> Self {
        Self {
            mode: SearchMode::Exists,
            jobs: None,
            budget: Budget::unlimited(),
        }
    }
}

impl AdsOptions {
    pub fn mode(mode: SearchMode) -> Self {
        Self { mode, ..Self::default() }
    }
}

/// Decides whether some k-subset of `Z_v` has every difference count in
/// `{λ, λ+1}` for the forced `λ`. When `(v-1) | k(k-1)` such a set is a
/// perfect difference set and the status is `DS_ONLY`. Witnesses are the
/// least translate containing 0.
pub fn search_ads(v: u64, k: usize, opts: AdsOptions) -> Result<SearchReport> {
    if v < 3 || k < 1 || k as u64 >= v {
        return Err(Error::InvalidParameter(format!("need 1 <= k < v, v >= 3; got v = {v}, k = {k}")));
    }
    let params = forced_params(v, k as u64);
    let lambda = params.lambda as u32;
    let perfect = (k * (k - 1)) as u64 == params.lambda * (v - 1);
    let bounds = Bounds {
        floor: lambda,
        cap: if perfect { lambda } else { lambda + 1 },
    };
    let found = if perfect { SearchStatus::DsOnly } else { SearchStatus::Exists };
    let meter = Meter::new(opts.budget);
    let exists = opts.mode == SearchMode::Exists;

    // Split on the first two gaps.
    let mut prefixes: Vec<(Vec<u64>, usize)> = vec![(Vec::new(), 1)];
    if k > 1 {
        let mut w = Walker::new(v, k, Some(bounds), Some(&meter), |_: &NecklaceCursor| ControlFlow::Continue(()), &never);
        w.split = Some(1 + (k - 1).min(2));
        w.gen(1, 1);
        let mut local = w.local;
        meter.flush(&mut local);
        prefixes = w.prefixes;
    }

    struct Part {
        count: u64,
        first: Option<Vec<u64>>,
        all: Vec<Vec<u64>>,
    }
    let best = AtomicUsize::new(usize::MAX);
    let parts: Vec<Part> = with_jobs(opts.jobs, || {
        prefixes
            .par_iter()
            .enumerate()
            .map(|(idx, (gaps, p))| {
                let cancel = || exists && best.load(Ordering::Relaxed) < idx;
                let mut part = Part { count: 0, first: None, all: Vec::new() };
                let mode = opts.mode;
                let visit = |c: &NecklaceCursor| {
                    part.count += 1;
                    if part.first.is_none() {
                        part.first = Some(c.marks().to_vec());
                    }
                    if mode == SearchMode::All {
                        part.all.push(c.marks().to_vec());
                    }
                    if mode == SearchMode::Exists {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                };
                let mut w = Walker::new(v, k, Some(bounds), Some(&meter), visit, &cancel);
                let mut ok = true;
                for (i, &g) in gaps.iter().enumerate() {
                    ok &= w.advance(i + 1, g);
                }
                debug_assert!(ok);
                if !meter.is_exhausted() {
                    if k == 1 {
                        w.run();
                    } else {
                        w.gen(gaps.len() + 1, *p);
                    }
                }
                let mut local = w.local;
                meter.flush(&mut local);
                drop(w);
                if part.first.is_some() {
                    best.fetch_min(idx, Ordering::Relaxed);
                }
                part
            })
            .collect()
    });

    let mut report = SearchReport {
        status: SearchStatus::None,
        witness: None,
        count: 0,
        nodes: meter.nodes(),
        seconds: meter.seconds(),
        solutions: Vec::new(),
    };
    for part in parts {
        if report.witness.is_none() {
            report.witness = part.first;
        }
        report.count += part.count;
        report.solutions.extend(part.all);
        if exists && report.witness.is_some() {
            break;
        }
    }
    if exists {
        report.count = report.count.min(1);
    }
    report.status = if report.witness.is_some() && (exists || !meter.is_exhausted()) {
        found
    } else if meter.is_exhausted() {
        SearchStatus::Timeout
    } else {
        SearchStatus::None
    };
    Ok(report)
}

/// One `(v, k)` cell of the existence grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub t: u64,
    pub t_hat: u64,
    pub status: SearchStatus,
    pub witness: Option<Vec<u64>>,
    /// Obtained from the complementary cell rather than searched.
    #[serde(default)]
    pub derived: bool,
    #[serde(default)]
    pub nodes: u64,
    #[serde(default)]
    pub seconds: f64,
}

impl GridCell {
    fn from_report(v: u64, k: u64, r: SearchReport) -> Self {
        let p = forced_params(v, k);
        Self {
            v,
            k,
            lambda: p.lambda,
            t: p.t,
            t_hat: p.t_hat,
            status: r.status,
            witness: r.witness,
            derived: false,
            nodes: r.nodes,
            seconds: r.seconds,
        }
    }

    /// The cell `(v, v - k)`: complements keep the two-value property.
    pub fn complement(&self) -> Self {
        let k = self.v - self.k;
        let p = forced_params(self.v, k);
        let witness = self.witness.as_ref().map(|w| least_translate(&complement_residues(w, self.v), self.v));
        Self {
            v: self.v,
            k,
            lambda: p.lambda,
            t: p.t,
            t_hat: p.t_hat,
            status: self.status,
            witness,
            derived: true,
            nodes: 0,
            seconds: 0.0,
        }
    }
}

fn complement_residues(set: &[u64], v: u64) -> Vec<u64> {
    let mut inside = vec![false; v as usize];
    for &x in set {
        inside[x as usize] = true;
    }
    (0..v).filter(|&x| !inside[x as usize]).collect()
}

/// Lexicographically least translate of `set` that contains 0.
pub fn least_translate(set: &[u64], v: u64) -> Vec<u64> {
    set.iter()
        .map(|&s| {
            let mut t: Vec<u64> = set.iter().map(|&x| (x + v - s) % v).collect();
            t.sort_unstable();
            t
        })
        .min()
        .unwrap_or_default()
}

/// Cells for `v` in `v_min..=v_max` and `k` in `k_range ∩ [2, v - 2]`.
/// Cells with `k > v/2` come from their complements; every searched cell
/// gets its own budget, so the grid always completes.
pub fn existence_grid(
    v_min: u64,
    v_max: u64,
    k_range: std::ops::RangeInclusive<u64>,
    opts: AdsOptions,
) -> Result<Vec<GridCell>> {
    let mut cells = Vec::new();
    let opts = AdsOptions { mode: SearchMode::Exists, ..opts };
    for v in v_min.max(4)..=v_max {
        let ks: Vec<u64> = (2..=v - 2).filter(|k| k_range.contains(k)).collect();
        let mut searched: Vec<(u64, GridCell)> = Vec::new();
        let mut needed: Vec<u64> = ks.iter().map(|&k| k.min(v - k)).collect();
        needed.sort_unstable();
        needed.dedup();
        for k in needed {
            let r = search_ads(v, k as usize, opts)?;
            searched.push((k, GridCell::from_report(v, k, r)));
        }
        for k in ks {
            let base = &searched.iter().find(|(kk, _)| *kk == k.min(v - k)).expect("searched").1;
            cells.push(if 2 * k <= v { base.clone() } else { base.complement() });
        }
    }
    Ok(cells)
}

/// Text rendering: one row per `k` (largest first), one column per `v`.
/// `E` exists, `D` only a difference set, `?` out of budget, otherwise `t̂`
/// (digits then letters), `·` for absent cells.
pub fn render_grid(cells: &[GridCell]) -> String {
    let (Some(v_lo), Some(v_hi)) = (cells.iter().map(|c| c.v).min(), cells.iter().map(|c| c.v).max()) else {
        return String::new();
    };
    let k_lo = cells.iter().map(|c| c.k).min().unwrap_or(0);
    let k_hi = cells.iter().map(|c| c.k).max().unwrap_or(0);
    let mut out = String::new();
    for k in (k_lo..=k_hi).rev() {
        out.push_str(&format!("{k:>3} "));
        for v in v_lo..=v_hi {
            let ch = match cells.iter().find(|c| c.v == v && c.k == k) {
                None => '·',
                Some(c) => match c.status {
                    SearchStatus::Exists => 'E',
                    SearchStatus::DsOnly => 'D',
                    SearchStatus::Timeout => '?',
                    SearchStatus::None => std::char::from_digit(c.t_hat.min(35) as u32, 36)
                        .expect("radix-36 digit"),
                },
            };
            out.push(ch);
        }
        out.push('\n');
    }
    out.push_str("    ");
    for v in v_lo..=v_hi {
        out.push(if v % 10 == 0 { '|' } else { ' ' });
    }
    out.push_str(&format!("\n    v = {v_lo}..{v_hi}\n"));
    out
}

/// Subset view of a witness.
pub fn witness_subset(v: u64, witness: &[u64]) -> Result<Subset> {
    Subset::cyclic(v, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcore::{classify, difference_profile, Classification, DsParams};
    use std::collections::HashSet;

    #[test]
    fn small_counts() {
        let mut seen = Vec::new();
        let n = enumerate_fixed_density(4, 2, |c| {
            seen.push(c.marks().to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(n, 2);
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2]]);
        for v in 1..10 {
            assert_eq!(enumerate_fixed_density(v, 1, |_| ControlFlow::Continue(())).unwrap(), 1);
            assert_eq!(enumerate_fixed_density(v, 0, |_| ControlFlow::Continue(())).unwrap(), 1);
            assert_eq!(enumerate_fixed_density(v, v as usize, |_| ControlFlow::Continue(())).unwrap(), 1);
        }
    }

    #[test]
    fn counts_match_burnside_and_classes_are_distinct() {
        for v in 1..=16u64 {
            for k in 0..=v {
                let mut reps = HashSet::new();
                let n = enumerate_fixed_density(v, k as usize, |c| {
                    assert_eq!(c.marks().len(), k as usize);
                    assert_eq!(least_translate(c.marks(), v), c.marks());
                    assert!(reps.insert(c.marks().to_vec()));
                    ControlFlow::Continue(())
                })
                .unwrap();
                assert_eq!(n as u128, necklace_count(v, k), "v = {v}, k = {k}");
            }
        }
    }

    #[test]
    fn incremental_profile_matches_recount() {
        let mut checked = 0;
        for (v, k) in [(12u64, 5usize), (16, 7), (17, 6), (20, 8), (22, 9)] {
            enumerate_fixed_density(v, k, |c| {
                let fresh = difference_profile(&Subset::cyclic(v, c.marks()).unwrap());
                assert_eq!(fresh.counts(), c.counts());
                checked += 1;
                ControlFlow::Continue(())
            })
            .unwrap();
        }
        assert!(checked > 10_000);
    }

    #[test]
    fn forced_examples() {
        let p = forced_params(39, 17);
        assert_eq!((p.lambda, p.t, p.t_hat), (7, 32, 6));
        let p = forced_params(61, 30);
        assert_eq!((p.lambda, p.t, p.t_hat), (14, 30, 30));
        let p = forced_params(48, 17);
        assert_eq!((p.lambda, p.t, p.t_hat), (5, 10, 10));
        let p = forced_params(50, 18);
        assert_eq!((p.lambda, p.t, p.t_hat), (6, 37, 12));
        let p = forced_params(53, 17);
        assert_eq!((p.lambda, p.t, p.t_hat), (5, 40, 12));
        let p = forced_params(56, 17);
        assert_eq!((p.lambda, p.t), (4, 3));
    }

    #[test]
    fn planar_cell_is_ds_only() {
        let r = search_ads(7, 3, AdsOptions::default()).unwrap();
        assert_eq!(r.status, SearchStatus::DsOnly);
        let w = r.witness.unwrap();
        assert_eq!(
            classify(&Subset::cyclic(7, &w).unwrap()),
            Classification::DifferenceSet(DsParams { v: 7, k: 3, lambda: 1 })
        );
    }

    /// Long exhaustive runs; `cargo test -- --ignored` to include them.
    #[test]
    #[ignore]
    fn missed_ads_cells_exist() {
        for (v, k, lambda, t) in [(39u64, 17usize, 7u64, 32u64), (48, 22, 9, 8)] {
            let r = search_ads(v, k, AdsOptions::default()).unwrap();
            assert_eq!(r.status, SearchStatus::Exists);
            let got = classify(&Subset::cyclic(v, r.witness.as_ref().unwrap()).unwrap());
            assert_eq!(got, Classification::AlmostDifferenceSet(AdsParams::new(v, k as u64, lambda, t)));
        }
    }

    #[test]
    fn witnesses_reclassify() {
        let mut exists = 0;
        for v in 19..=26u64 {
            for k in 3..=(v / 2) as usize {
                let r = search_ads(v, k, AdsOptions::default()).unwrap();
                let p = forced_params(v, k as u64);
                assert!(p.satisfies_counting_identity());
                let Some(w) = r.witness else {
                    assert_eq!(r.status, SearchStatus::None);
                    continue;
                };
                assert_eq!(least_translate(&w, v), w);
                let got = classify(&Subset::cyclic(v, &w).unwrap());
                if r.status == SearchStatus::Exists {
                    exists += 1;
                    assert_eq!(got, Classification::AlmostDifferenceSet(p));
                } else {
                    assert_eq!(r.status, SearchStatus::DsOnly);
                    assert!(got.ds().is_some());
                }
            }
        }
        assert!(exists > 20);
    }

    fn naive_status(v: u64, k: usize) -> (SearchStatus, u64) {
        let p = forced_params(v, k as u64);
        let mut status = SearchStatus::None;
        let mut count = 0u64;
        for mask in 0u32..(1 << v) {
            if mask.count_ones() as usize != k || mask & 1 == 0 {
                continue;
            }
            let set: Vec<u64> = (0..v).filter(|i| mask >> i & 1 == 1).collect();
            if least_translate(&set, v) != set {
                continue;
            }
            match classify(&Subset::cyclic(v, &set).unwrap()) {
                Classification::AlmostDifferenceSet(a) => {
                    assert_eq!(a, p);
                    status = SearchStatus::Exists;
                    count += 1;
                }
                Classification::DifferenceSet(d) if d.lambda == p.lambda => {
                    if status == SearchStatus::None {
                        status = SearchStatus::DsOnly;
                    }
                    count += 1;
                }
                _ => {}
            }
        }
        (status, count)
    }

    #[test]
    fn agrees_with_subset_scan_small() {
        for v in 4..=13u64 {
            for k in 2..=(v / 2) as usize {
                let r = search_ads(v, k, AdsOptions::mode(SearchMode::Count)).unwrap();
                assert_eq!((r.status, r.count), naive_status(v, k), "v = {v}, k = {k}");
            }
        }
    }

    #[test]
    fn complement_duality_small() {
        for v in 5..=14u64 {
            for k in 2..=(v / 2) {
                let a = search_ads(v, k as usize, AdsOptions::default()).unwrap();
                let b = search_ads(v, (v - k) as usize, AdsOptions::default()).unwrap();
                assert_eq!(a.status, b.status, "v = {v}, k = {k}");
            }
        }
        let cells = existence_grid(7, 9, 2..=7, AdsOptions::default()).unwrap();
        for c in &cells {
            if let Some(w) = &c.witness {
                let got = classify(&Subset::cyclic(c.v, w).unwrap());
                let p = forced_params(c.v, c.k);
                match c.status {
                    SearchStatus::Exists => assert_eq!(got, Classification::AlmostDifferenceSet(p)),
                    SearchStatus::DsOnly => assert!(got.ds().is_some()),
                    _ => unreachable!(),
                }
            }
        }
        assert!(render_grid(&cells).contains('D'));
    }
}
