//! Difference profiles and the classification algebra.
//!
//! The profile of a subset `D` counts, for every nonzero `g`, the ordered
//! pairs `(d_i, d_j)` with `d_i - d_j = g`. It is the off-identity part of
//! `D D^{-1}` in the group ring. A profile that is constant is a difference
//! set; one that takes exactly the two values `λ` and `λ + 1` is an almost
//! difference set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};

/// A set of distinct group elements, stored as sorted element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    group: GroupSpec,
    indices: Vec<usize>,
}

impl Subset {
    pub fn new(group: GroupSpec, elements: &[GroupElement]) -> Result<Self> {
        let indices = elements
            .iter()
            .map(|g| group.index_of(g))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(group, indices)
    }

    pub fn from_indices(group: GroupSpec, mut indices: Vec<usize>) -> Result<Self> {
        let v = group.order() as usize;
        if let Some(&bad) = indices.iter().find(|&&i| i >= v) {
            return Err(Error::IndexOutOfRange {
                index: bad as u64,
                order: v as u64,
            });
        }
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(group.element_at(w[0])?.coords));
        }
        Ok(Self { group, indices })
    }

    /// A subset of `Z_v` from residues in `[0, v)`.
    pub fn cyclic(v: u64, residues: &[u64]) -> Result<Self> {
        let group = GroupSpec::cyclic(v)?;
        Self::from_indices(group, residues.iter().map(|&r| r as usize).collect())
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.group
            .index_of(g)
            .map(|i| self.contains_index(i))
            .unwrap_or(false)
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.indices
            .iter()
            .map(|&i| self.group.element_at(i).expect("stored index is in range"))
            .collect()
    }

    /// Residues of a subset of a single cyclic factor.
    pub fn residues(&self) -> Vec<u64> {
        self.indices.iter().map(|&i| i as u64).collect()
    }

    pub fn with_index(&self, idx: usize) -> Result<Self> {
        let mut indices = self.indices.clone();
        indices.push(idx);
        Self::from_indices(self.group.clone(), indices)
    }

    pub fn without_index(&self, idx: usize) -> Self {
        Self {
            group: self.group.clone(),
            indices: self.indices.iter().copied().filter(|&i| i != idx).collect(),
        }
    }

    /// `D + g`.
    pub fn translate(&self, by: usize) -> Self {
        let indices = self.indices.iter().map(|&i| self.group.add_idx(i, by)).collect();
        Self::from_indices(self.group.clone(), indices).expect("translation is a bijection")
    }

    /// `aD` for a single cyclic factor and `gcd(a, v) = 1`.
    pub fn scale(&self, a: u64) -> Result<Self> {
        if !self.group.is_single_cyclic() {
            return Err(Error::InvalidParameter("scaling needs a single cyclic factor".into()));
        }
        let v = self.group.order();
        if crate::arith::gcd(a % v, v) != 1 {
            return Err(Error::InvalidParameter(format!("{a} is not a unit mod {v}")));
        }
        let indices = self
            .indices
            .iter()
            .map(|&i| crate::arith::mul_mod(i as u64, a, v) as usize)
            .collect();
        Self::from_indices(self.group.clone(), indices)
    }

    /// `G \ D`.
    pub fn complement_set(&self) -> Self {
        let v = self.group.order() as usize;
        let mut member = vec![false; v];
        for &i in &self.indices {
            member[i] = true;
        }
        Self {
            group: self.group.clone(),
            indices: (0..v).filter(|&i| !member[i]).collect(),
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.group, self.elements())
    }
}

/// Counts of every nonzero element among the ordered differences of a set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffProfile {
    group: GroupSpec,
    k: usize,
    /// Indexed by element index; slot 0 (the identity) is always 0.
    counts: Vec<u32>,
}

impl DiffProfile {
    /// A profile from raw per-index counts (slot 0 ignored and zeroed).
    pub fn from_counts(group: GroupSpec, k: usize, mut counts: Vec<u32>) -> Result<Self> {
        if counts.len() as u64 != group.order() {
            return Err(Error::InvalidParameter(format!(
                "profile length {} != group order {}",
                counts.len(),
                group.order()
            )));
        }
        counts[0] = 0;
        Ok(Self { group, k, counts })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, g: &GroupElement) -> Result<u32> {
        Ok(self.counts[self.group.index_of(g)?])
    }

    /// `(min, max)` over the nonzero elements, `None` for the trivial group.
    pub fn value_range(&self) -> Option<(u32, u32)> {
        let nonzero = &self.counts[1..];
        let min = *nonzero.iter().min()?;
        let max = *nonzero.iter().max()?;
        Some((min, max))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

pub fn difference_profile(set: &Subset) -> DiffProfile {
    let g = set.group();
    let v = g.order() as usize;
    let mut counts = vec![0u32; v];
    let idx = set.indices();
    if g.is_single_cyclic() {
        for &a in idx {
            for &b in idx {
                if a != b {
                    counts[if a >= b { a - b } else { a + v - b }] += 1;
                }
            }
        }
    } else {
        for &a in idx {
            for &b in idx {
                if a != b {
                    counts[g.sub_idx(a, b)] += 1;
                }
            }
        }
    }
    DiffProfile {
        group: g.clone(),
        k: idx.len(),
        counts,
    }
}

/// `(v, k, λ, t)` together with the derived `t̂ = min(t, v - 1 - t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdsParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub t: u64,
    pub t_hat: u64,
}

impl AdsParams {
    pub fn new(v: u64, k: u64, lambda: u64, t: u64) -> Self {
        Self {
            v,
            k,
            lambda,
            t,
            t_hat: t.min((v - 1).saturating_sub(t)),
        }
    }

    /// The only `(λ, t)` a `k`-subset of a group of order `v` could have if
    /// its profile takes at most the two values `λ` and `λ + 1`.
    pub fn forced(v: u64, k: u64) -> Self {
        let pairs = k as u128 * k.saturating_sub(1) as u128;
        let order = (v - 1) as u128;
        let lambda = pairs / order;
        let t = (lambda + 1) * order - pairs;
        Self::new(v, k, lambda as u64, t as u64)
    }

    /// `n = k - λ`.
    pub fn n(&self) -> i64 {
        self.k as i64 - self.lambda as i64
    }

    /// The counting identity `tλ + (v - 1 - t)(λ + 1) = k(k - 1)`.
    pub fn satisfies_counting_identity(&self) -> bool {
        self.t * self.lambda + (self.v - 1 - self.t) * (self.lambda + 1)
            == self.k * self.k.saturating_sub(1)
    }

    /// Parameters of the complement, `(v, v - k, v - 2k + λ, t)`.
    pub fn complement(&self) -> Self {
        Self::new(self.v, self.v - self.k, self.v + self.lambda - 2 * self.k, self.t)
    }
}

impl fmt::Display for AdsParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.k, self.lambda, self.t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DsParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

impl DsParams {
    pub fn complement(&self) -> Self {
        Self {
            v: self.v,
            k: self.v - self.k,
            lambda: self.v + self.lambda - 2 * self.k,
        }
    }
}

impl fmt::Display for DsParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.v, self.k, self.lambda)
    }
}

/// The verdict for a subset. A perfect difference set is always reported as
/// `DifferenceSet`, never as a degenerate ADS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Classification {
    #[serde(rename = "DS")]
    DifferenceSet(DsParams),
    #[serde(rename = "ADS")]
    AlmostDifferenceSet(AdsParams),
    #[serde(rename = "NONE")]
    None { v: u64, k: u64 },
}

impl Classification {
    pub fn is_none(&self) -> bool {
        matches!(self, Classification::None { .. })
    }

    pub fn ds(&self) -> Option<DsParams> {
        match self {
            Classification::DifferenceSet(p) => Some(*p),
            _ => None,
        }
    }

    pub fn ads(&self) -> Option<AdsParams> {
        match self {
            Classification::AlmostDifferenceSet(p) => Some(*p),
            _ => None,
        }
    }

    pub fn v(&self) -> u64 {
        match self {
            Classification::DifferenceSet(p) => p.v,
            Classification::AlmostDifferenceSet(p) => p.v,
            Classification::None { v, .. } => *v,
        }
    }

    pub fn k(&self) -> u64 {
        match self {
            Classification::DifferenceSet(p) => p.k,
            Classification::AlmostDifferenceSet(p) => p.k,
            Classification::None { k, .. } => *k,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::DifferenceSet(p) => write!(f, "{p}-DS"),
            Classification::AlmostDifferenceSet(p) => write!(f, "{p}-ADS"),
            Classification::None { v, k } => write!(f, "none (v={v}, k={k})"),
        }
    }
}

pub fn classify_profile(profile: &DiffProfile) -> Classification {
    let v = profile.group().order();
    let k = profile.k() as u64;
    if k <= 1 {
        return Classification::DifferenceSet(DsParams { v, k, lambda: 0 });
    }
    let Some((min, max)) = profile.value_range() else {
        return Classification::DifferenceSet(DsParams { v, k, lambda: 0 });
    };
    if min == max {
        return Classification::DifferenceSet(DsParams {
            v,
            k,
            lambda: min as u64,
        });
    }
    if max == min + 1 {
        let t = profile.counts()[1..].iter().filter(|&&c| c == min).count() as u64;
        return Classification::AlmostDifferenceSet(AdsParams::new(v, k, min as u64, t));
    }
    Classification::None { v, k }
}

pub fn classify(set: &Subset) -> Classification {
    classify_profile(&difference_profile(set))
}

/// `S(D)`: sums of two distinct elements, as a membership vector over indices.
pub fn sumset_mask(set: &Subset) -> Vec<bool> {
    let g = set.group();
    let mut mask = vec![false; g.order() as usize];
    let idx = set.indices();
    for (i, &a) in idx.iter().enumerate() {
        for &b in &idx[i + 1..] {
            mask[g.add_idx(a, b)] = true;
        }
    }
    mask
}

/// `S(D)` in index order.
pub fn sumset(set: &Subset) -> Vec<GroupElement> {
    let g = set.group();
    sumset_mask(set)
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(i, _)| g.element_at(i).expect("index in range"))
        .collect()
}

/// `G \ D` with its classification, checked against the parameter map
/// `(v, k, λ[, t]) -> (v, v - k, v - 2k + λ[, t])`.
pub fn complement(set: &Subset) -> Result<(Subset, Classification)> {
    let base = classify(set);
    let comp = set.complement_set();
    let got = classify(&comp);
    let expected = match base {
        Classification::DifferenceSet(p) => Classification::DifferenceSet(p.complement()),
        Classification::AlmostDifferenceSet(p) => Classification::AlmostDifferenceSet(p.complement()),
        Classification::None { .. } => return Err(Error::Unclassified),
    };
    if got != expected {
        return Err(Error::Invariant(format!(
            "complement classified as {got}, expected {expected}"
        )));
    }
    Ok((comp, got))
}

/// Parameters `(m, n, k, λ)` of a relative difference set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeParams {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub lambda: u64,
}

/// Checks `DD^{-1} = k + λ(G - N)`: differences avoid `N \ {0}` and hit
/// every element outside `N` exactly `λ` times.
pub fn verify_relative_ds(
    set: &Subset,
    forbidden: &[GroupElement],
    expect: RelativeParams,
) -> Result<bool> {
    let g = set.group();
    let v = g.order() as usize;
    let mut in_n = vec![false; v];
    for e in forbidden {
        in_n[g.index_of(e)?] = true;
    }
    let members: Vec<usize> = (0..v).filter(|&i| in_n[i]).collect();
    if !in_n[0] || members.iter().any(|&a| members.iter().any(|&b| !in_n[g.add_idx(a, b)])) {
        return Err(Error::NotSubgroup);
    }
    if g.order() != expect.m * expect.n
        || members.len() as u64 != expect.n
        || set.len() as u64 != expect.k
    {
        return Ok(false);
    }
    let profile = difference_profile(set);
    Ok(profile.counts()[1..]
        .iter()
        .enumerate()
        .all(|(i, &c)| if in_n[i + 1] { c == 0 } else { c as u64 == expect.lambda }))
}

/// `t̂ = min(t, v - 1 - t)`.
pub fn t_hat(t: u64, v: u64) -> Result<u64> {
    if v == 0 || t > v - 1 {
        return Err(Error::InvalidParameter(format!("t = {t} outside [0, {}]", v.saturating_sub(1))));
    }
    Ok(t.min(v - 1 - t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(c: &[u64]) -> GroupElement {
        GroupElement::new(c.to_vec())
    }

    fn set(orders: &[u64], elems: &[&[u64]]) -> Subset {
        let g = GroupSpec::new(orders.to_vec()).unwrap();
        Subset::new(g, &elems.iter().map(|c| el(c)).collect::<Vec<_>>()).unwrap()
    }

    /// O(k²·v) recount: for each g, scan all ordered pairs.
    fn naive_counts(s: &Subset) -> Vec<u32> {
        let g = s.group();
        let elems = s.elements();
        g.elements()
            .enumerate()
            .map(|(i, target)| {
                if i == 0 {
                    return 0;
                }
                let mut c = 0;
                for a in &elems {
                    for b in &elems {
                        if a != b && g.sub(a, b).unwrap() == target {
                            c += 1;
                        }
                    }
                }
                c
            })
            .collect()
    }

    #[test]
    fn profile_examples() {
        let d = set(&[4, 4], &[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[3, 2], &[0, 3]]);
        let p = difference_profile(&d);
        assert!(p.counts()[1..].iter().all(|&c| c == 2));
        assert_eq!(p.counts().len(), 16);

        let single = Subset::cyclic(9, &[4]).unwrap();
        assert!(difference_profile(&single).counts().iter().all(|&c| c == 0));

        let d = Subset::cyclic(7, &[0, 1, 3]).unwrap();
        let p = difference_profile(&d);
        assert_eq!(&p.counts()[1..], &[1, 1, 1, 1, 1, 1]);
        assert_eq!(naive_counts(&d), p.counts());
    }

    #[test]
    fn duplicates_rejected() {
        let g = GroupSpec::cyclic(7).unwrap();
        assert!(matches!(
            Subset::new(g, &[el(&[1]), el(&[1])]),
            Err(Error::DuplicateElement(_))
        ));
        assert!(Subset::cyclic(7, &[7]).is_err());
    }

    #[test]
    fn classify_examples() {
        let d = Subset::cyclic(39, &[1, 2, 3, 5, 9, 13, 16, 19, 21, 22, 24, 26, 27, 28, 31, 32, 33]).unwrap();
        assert_eq!(
            classify(&d),
            Classification::AlmostDifferenceSet(AdsParams::new(39, 17, 7, 32))
        );
        // fourth powers of the primitive root 2 mod 37
        let q: Vec<u64> = (0..9).map(|s| crate::arith::pow_mod(2, 4 * s, 37)).collect();
        let d = Subset::cyclic(37, &q).unwrap();
        assert_eq!(classify(&d), Classification::DifferenceSet(DsParams { v: 37, k: 9, lambda: 2 }));

        for d in [Subset::cyclic(11, &[]).unwrap(), Subset::cyclic(11, &[5]).unwrap()] {
            assert_eq!(classify(&d).ds().unwrap().lambda, 0);
        }
        assert!(classify(&Subset::cyclic(10, &[0, 1, 2, 3]).unwrap()).is_none());
    }

    #[test]
    fn classification_json() {
        let c = Classification::AlmostDifferenceSet(AdsParams::new(39, 17, 7, 32));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"ADS","v":39,"k":17,"lambda":7,"t":32,"t_hat":6}"#
        );
        let ds = Classification::DifferenceSet(DsParams { v: 7, k: 3, lambda: 1 });
        assert_eq!(serde_json::to_string(&ds).unwrap(), r#"{"kind":"DS","v":7,"k":3,"lambda":1}"#);
        for c in [c, ds, Classification::None { v: 9, k: 4 }] {
            let back: Classification = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn sumset_examples() {
        let d = set(&[2, 8], &[&[0, 0], &[0, 1], &[0, 2], &[0, 5], &[1, 0], &[1, 6]]);
        let s = sumset(&d);
        let g = d.group();
        let missing: Vec<GroupElement> = g.elements().filter(|e| !s.contains(e)).collect();
        assert_eq!(missing, vec![el(&[0, 0]), el(&[0, 4]), el(&[1, 4])]);
        assert!(s.len() <= 15);

        let d = Subset::cyclic(5, &[0, 1]).unwrap();
        assert_eq!(sumset(&d), vec![el(&[1])]);
    }

    #[test]
    fn complement_examples() {
        let d = Subset::cyclic(7, &[1, 2, 4]).unwrap();
        let (c, cls) = complement(&d).unwrap();
        assert_eq!(cls, Classification::DifferenceSet(DsParams { v: 7, k: 4, lambda: 2 }));
        assert_eq!(c.complement_set(), d);

        let d = Subset::cyclic(39, &[1, 2, 3, 5, 9, 13, 16, 19, 21, 22, 24, 26, 27, 28, 31, 32, 33]).unwrap();
        let (_, cls) = complement(&d).unwrap();
        assert_eq!(cls, Classification::AlmostDifferenceSet(AdsParams::new(39, 22, 12, 32)));

        assert_eq!(
            complement(&Subset::cyclic(10, &[0, 1, 2, 3]).unwrap()),
            Err(Error::Unclassified)
        );
    }

    #[test]
    fn relative_examples() {
        let d = Subset::cyclic(8, &[0, 1, 3]).unwrap();
        let n = [el(&[0]), el(&[4])];
        let rp = RelativeParams { m: 4, n: 2, k: 3, lambda: 1 };
        assert!(verify_relative_ds(&d, &n, rp).unwrap());

        let n4 = [el(&[0]), el(&[2]), el(&[4]), el(&[6])];
        let rp4 = RelativeParams { m: 2, n: 4, k: 3, lambda: 1 };
        assert!(!verify_relative_ds(&d, &n4, rp4).unwrap());

        let paley7 = Subset::cyclic(7, &[1, 2, 4]).unwrap();
        let trivial = RelativeParams { m: 7, n: 1, k: 3, lambda: 1 };
        assert!(verify_relative_ds(&paley7, &[el(&[0])], trivial).unwrap());

        assert_eq!(
            verify_relative_ds(&d, &[el(&[0]), el(&[3])], rp),
            Err(Error::NotSubgroup)
        );
    }

    #[test]
    fn t_hat_examples() {
        assert_eq!(t_hat(32, 39).unwrap(), 6);
        assert_eq!(t_hat(37, 50).unwrap(), 12);
        assert_eq!(t_hat(0, 10).unwrap(), 0);
        assert!(t_hat(10, 10).is_err());
    }

    #[test]
    fn forced_params_identity() {
        for v in 3..60u64 {
            for k in 1..=v {
                let p = AdsParams::forced(v, k);
                assert!(p.t >= 1 && p.t < v, "{v} {k}");
                assert!(p.satisfies_counting_identity());
            }
        }
    }

    fn random_subset() -> impl Strategy<Value = Subset> {
        prop::collection::vec(2u64..7, 1..3).prop_flat_map(|orders| {
            let g = GroupSpec::new(orders).unwrap();
            let v = g.order() as usize;
            prop::collection::btree_set(0..v, 0..v.min(12)).prop_map(move |s| {
                Subset::from_indices(g.clone(), s.into_iter().collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn profile_invariants(s in random_subset()) {
            let p = difference_profile(&s);
            let k = s.len() as u64;
            prop_assert_eq!(p.total(), k * k.saturating_sub(1));
            let g = s.group();
            for i in 1..g.order() as usize {
                prop_assert_eq!(p.counts()[i], p.counts()[g.neg_idx(i)]);
            }
            prop_assert_eq!(naive_counts(&s), p.counts().to_vec());
            if let Classification::AlmostDifferenceSet(a) = classify(&s) {
                prop_assert!(a.satisfies_counting_identity());
                prop_assert_eq!(a, AdsParams::forced(a.v, a.k));
            }
        }

        #[test]
        fn classify_is_affine_invariant(v in 5u64..40, raw in prop::collection::btree_set(0u64..40, 1..10), shift in 0usize..40, a in 1u64..40) {
            let residues: Vec<u64> = raw.into_iter().filter(|&r| r < v).collect();
            let s = Subset::cyclic(v, &residues).unwrap();
            let base = classify(&s);
            prop_assert_eq!(classify(&s.translate(shift % v as usize)), base);
            if crate::arith::gcd(a % v, v) == 1 {
                prop_assert_eq!(classify(&s.scale(a).unwrap()), base);
            }
        }

        #[test]
        fn complement_map_holds(s in random_subset()) {
            match classify(&s) {
                Classification::None { .. } => prop_assert!(complement(&s).is_err()),
                _ => { complement(&s).unwrap(); }
            }
        }
    }
}
