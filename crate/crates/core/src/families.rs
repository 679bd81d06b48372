//! Generators for the classical difference-set families used throughout the
//! crate: power residues modulo a prime (with or without zero), Paley sets,
//! Singer planar sets for prime `q`, and a small table of sporadic sets in
//! 2-groups.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, pow_mod, primitive_root};
use crate::diffcore::{DsParams, Subset};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupSpec};

/// `C_0 = {x^e : x in [1, p)}`, ascending; `(p - 1) / e` elements.
pub fn power_residues(p: u64, e: u64) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 || !(p - 1).is_multiple_of(e) {
        return Err(Error::BadExponent {
            divisor: e,
            p_minus_1: p - 1,
        });
    }
    let g = primitive_root(p)?;
    let step = pow_mod(g, e, p);
    let f = (p - 1) / e;
    let mut out = Vec::with_capacity(f as usize);
    let mut x = 1u64;
    for _ in 0..f {
        out.push(x);
        x = x * step % p;
    }
    out.sort_unstable();
    Ok(out)
}

/// `e`-th power residues as a subset of `Z_p`, optionally with 0 adjoined.
pub fn residue_set(p: u64, e: u64, with_zero: bool) -> Result<Subset> {
    let mut r = power_residues(p, e)?;
    if with_zero {
        r.insert(0, 0);
    }
    Subset::cyclic(p, &r)
}

/// Quadratic residues modulo a prime `v ≡ 3 (mod 4)`.
pub fn paley(v: u64) -> Result<Subset> {
    if !is_prime(v) {
        return Err(Error::NotPrime(v));
    }
    if v % 4 != 3 {
        return Err(Error::InvalidParameter(format!("Paley needs v ≡ 3 (mod 4), got {v}")));
    }
    residue_set(v, 2, false)
}

/// Arithmetic in `GF(q^3) = GF(q)[X] / (f)` for a monic irreducible cubic `f`.
#[derive(Clone, Debug)]
struct CubicField {
    q: u64,
    /// `f = X^3 + c[2] X^2 + c[1] X + c[0]`.
    c: [u64; 3],
}

type Elem = [u64; 3];

impl CubicField {
    /// First monic cubic without a root in `GF(q)`, scanning `(c2, c1, c0)`
    /// in ascending lexicographic order. A cubic with no root has no linear
    /// factor and is therefore irreducible.
    fn new(q: u64) -> Result<Self> {
        for c2 in 0..q {
            for c1 in 0..q {
                for c0 in 1..q {
                    let root = (0..q).any(|x| {
                        let x2 = x * x % q;
                        (x2 * x + c2 * x2 + c1 * x + c0).is_multiple_of(q)
                    });
                    if !root {
                        return Ok(Self { q, c: [c0, c1, c2] });
                    }
                }
            }
        }
        Err(Error::Invariant(format!("no irreducible cubic over GF({q})")))
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let q = self.q;
        let mut prod = [0u64; 5];
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % q;
            }
        }
        // X^3 = -(c2 X^2 + c1 X + c0)
        for deg in (3..5).rev() {
            let top = prod[deg];
            if top == 0 {
                continue;
            }
            prod[deg] = 0;
            for (k, &ck) in self.c.iter().enumerate() {
                let slot = deg - 3 + k;
                prod[slot] = (prod[slot] + (q - ck) * top) % q;
            }
        }
        [prod[0], prod[1], prod[2]]
    }

    fn pow(&self, base: &Elem, mut exp: u64) -> Elem {
        let mut acc = [1, 0, 0];
        let mut b = *base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            exp >>= 1;
        }
        acc
    }

    fn primitive_element(&self) -> Result<Elem> {
        let q = self.q;
        let order = q * q * q - 1;
        let primes: Vec<u64> = factorize(order).into_iter().map(|(p, _)| p).collect();
        for n in 1..=order {
            let e = [n % q, (n / q) % q, n / (q * q)];
            if primes.iter().all(|&p| self.pow(&e, order / p) != [1, 0, 0]) {
                return Ok(e);
            }
        }
        Err(Error::Invariant("multiplicative group has no generator".into()))
    }

    /// `Tr(b) = b + b^q + b^{q^2}`, an element of the prime field.
    fn trace(&self, b: &Elem) -> u64 {
        let b1 = self.pow(b, self.q);
        let b2 = self.pow(&b1, self.q);
        debug_assert!(b[1..] .iter().zip(&b1[1..]).zip(&b2[1..]).all(|((x, y), z)| (x + y + z) % self.q == 0));
        (b[0] + b1[0] + b2[0]) % self.q
    }
}

/// Singer `(q^2 + q + 1, q + 1, 1)` difference set for a prime `q`: the
/// logarithms `i mod (q^2 + q + 1)` of the trace-zero elements `α^i` of
/// `GF(q^3)` for a primitive `α`.
pub fn singer_planar(q: u64) -> Result<Subset> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let field = CubicField::new(q)?;
    let alpha = field.primitive_element()?;
    let n = q * q + q + 1;
    // Tr is GF(q)-linear, so precompute it on the basis 1, X, X^2.
    let basis_trace: Vec<u64> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        .iter()
        .map(|b| field.trace(b))
        .collect();
    let mut members = Vec::with_capacity(q as usize + 1);
    let mut power: Elem = [1, 0, 0];
    for i in 0..n {
        let tr = (0..3).map(|j| power[j] * basis_trace[j]).sum::<u64>() % q;
        if tr == 0 {
            members.push(i);
        }
        power = field.mul(&power, &alpha);
    }
    if members.len() as u64 != q + 1 {
        return Err(Error::Invariant(format!(
            "trace-zero hyperplane has {} points, expected {}",
            members.len(),
            q + 1
        )));
    }
    Subset::cyclic(n, &members)
}

/// Named families accepted by [`family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Quadratic residues.
    Paley,
    /// Fourth-power residues (Hall's B, or B0 with zero).
    Quartic,
    /// Eighth-power residues (Hall's O, or O0 with zero).
    Octic,
    Singer,
}

impl FamilyKind {
    pub fn exponent(self) -> Option<u64> {
        match self {
            FamilyKind::Paley => Some(2),
            FamilyKind::Quartic => Some(4),
            FamilyKind::Octic => Some(8),
            FamilyKind::Singer => None,
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "paley" => Ok(FamilyKind::Paley),
            "quartic" | "quartic-b" | "quartic-b0" | "b" | "b0" => Ok(FamilyKind::Quartic),
            "octic" | "octic-o" | "octic-o0" | "o" | "o0" => Ok(FamilyKind::Octic),
            "singer" => Ok(FamilyKind::Singer),
            other => Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::Paley => "paley",
            FamilyKind::Quartic => "quartic",
            FamilyKind::Octic => "octic",
            FamilyKind::Singer => "singer",
        };
        f.write_str(s)
    }
}

/// A family member: `p` is the prime modulus, or the prime order `q` for Singer.
pub fn family(kind: FamilyKind, p: u64, with_zero: bool) -> Result<Subset> {
    match kind {
        FamilyKind::Paley => {
            let d = paley(p)?;
            if with_zero {
                d.with_index(0)
            } else {
                Ok(d)
            }
        }
        FamilyKind::Quartic | FamilyKind::Octic => {
            residue_set(p, kind.exponent().expect("residue family"), with_zero)
        }
        FamilyKind::Singer => {
            if with_zero {
                return Err(Error::InvalidParameter("Singer sets take no zero flag".into()));
            }
            singer_planar(p)
        }
    }
}

/// An embedded sporadic difference set with its documented extension.
#[derive(Clone, Debug)]
pub struct SporadicRecord {
    pub id: &'static str,
    pub params: DsParams,
    pub set: Subset,
    /// An element whose addition yields an ADS, if one is documented.
    pub added: Option<GroupElement>,
}

struct SporadicData {
    id: &'static str,
    orders: &'static [u64],
    params: (u64, u64, u64),
    elements: &'static [&'static [u64]],
    added: Option<&'static [u64]>,
}

// Rows of the table of sporadic sets with an added element forming an ADS,
// followed by the (16,6,2) set in Z2 x Z8 that has no such extension.
const SPORADIC: &[SporadicData] = &[
    SporadicData {
        id: "16-6-2-Z4xZ4",
        orders: &[4, 4],
        params: (16, 6, 2),
        elements: &[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[3, 2], &[0, 3]],
        added: Some(&[1, 1]),
    },
    SporadicData {
        id: "64-28-12-Z8xZ8",
        orders: &[8, 8],
        params: (64, 28, 12),
        elements: &[
            &[0, 0], &[1, 0], &[0, 1], &[2, 0], &[0, 2], &[4, 0], &[0, 4], &[1, 1], &[3, 0], &[1, 2],
            &[1, 4], &[0, 3], &[4, 1], &[4, 4], &[3, 4], &[1, 6], &[2, 3], &[2, 5], &[4, 3], &[6, 4],
            &[4, 6], &[3, 3], &[5, 5], &[7, 2], &[6, 3], &[6, 5], &[7, 6], &[7, 7],
        ],
        added: Some(&[3, 1]),
    },
    SporadicData {
        id: "64-28-12-Z4xZ4xZ4-a",
        orders: &[4, 4, 4],
        params: (64, 28, 12),
        elements: &[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[2, 0, 0], &[0, 2, 0], &[1, 1, 0],
            &[1, 0, 1], &[1, 2, 0], &[1, 0, 2], &[2, 0, 1], &[0, 0, 3], &[2, 2, 0], &[1, 1, 1],
            &[3, 1, 0], &[1, 2, 1], &[1, 2, 2], &[2, 3, 0], &[2, 1, 2], &[0, 3, 2], &[2, 0, 3],
            &[1, 1, 3], &[1, 3, 2], &[3, 0, 3], &[3, 3, 1], &[3, 3, 2], &[3, 2, 3], &[3, 3, 3],
        ],
        added: Some(&[0, 1, 1]),
    },
    SporadicData {
        id: "64-28-12-Z4xZ4xZ4-b",
        orders: &[4, 4, 4],
        params: (64, 28, 12),
        elements: &[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[2, 0, 0], &[0, 2, 0], &[1, 1, 0],
            &[1, 0, 1], &[3, 0, 0], &[1, 0, 2], &[0, 1, 1], &[0, 1, 2], &[2, 0, 1], &[2, 2, 0],
            &[1, 3, 0], &[3, 0, 2], &[0, 3, 1], &[0, 1, 3], &[2, 3, 0], &[0, 2, 3], &[3, 1, 2],
            &[3, 2, 1], &[3, 0, 3], &[1, 2, 3], &[0, 3, 3], &[2, 3, 2], &[2, 2, 3], &[3, 3, 2],
        ],
        added: Some(&[1, 1, 1]),
    },
    SporadicData {
        id: "64-28-12-Z4xZ4xZ4-c",
        orders: &[4, 4, 4],
        params: (64, 28, 12),
        elements: &[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[2, 0, 0], &[0, 2, 0], &[1, 1, 0],
            &[1, 0, 1], &[3, 0, 0], &[1, 0, 2], &[0, 1, 1], &[2, 1, 0], &[0, 2, 1], &[2, 2, 0],
            &[1, 0, 3], &[3, 0, 2], &[0, 3, 1], &[0, 1, 3], &[0, 3, 2], &[2, 0, 3], &[3, 3, 0],
            &[3, 1, 2], &[1, 3, 2], &[3, 2, 1], &[0, 3, 3], &[2, 3, 2], &[2, 2, 3], &[3, 2, 3],
        ],
        added: Some(&[1, 1, 1]),
    },
    SporadicData {
        id: "64-28-12-Z4xZ4xZ4-d",
        orders: &[4, 4, 4],
        params: (64, 28, 12),
        elements: &[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[2, 0, 0], &[0, 2, 0], &[1, 1, 0],
            &[1, 0, 1], &[3, 0, 0], &[1, 0, 2], &[0, 1, 1], &[2, 1, 0], &[0, 2, 1], &[0, 0, 3],
            &[2, 2, 0], &[1, 0, 3], &[3, 0, 2], &[0, 3, 1], &[0, 3, 2], &[0, 2, 3], &[3, 3, 0],
            &[3, 1, 2], &[1, 3, 2], &[3, 2, 1], &[2, 1, 3], &[2, 3, 2], &[3, 2, 3], &[2, 3, 3],
        ],
        added: Some(&[1, 1, 1]),
    },
    SporadicData {
        id: "64-28-12-Z4xZ4xZ4-e",
        orders: &[4, 4, 4],
        params: (64, 28, 12),
        elements: &[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[2, 0, 0], &[0, 2, 0], &[1, 1, 0],
            &[1, 0, 1], &[3, 0, 0], &[1, 0, 2], &[0, 1, 1], &[2, 1, 0], &[0, 2, 1], &[0, 0, 3],
            &[2, 2, 0], &[1, 3, 0], &[1, 0, 3], &[3, 0, 2], &[0, 3, 2], &[0, 2, 3], &[3, 1, 2],
            &[3, 2, 1], &[2, 3, 1], &[2, 1, 3], &[0, 3, 3], &[2, 3, 2], &[3, 3, 2], &[3, 2, 3],
        ],
        added: Some(&[1, 1, 1]),
    },
    SporadicData {
        id: "16-6-2-Z2xZ8",
        orders: &[2, 8],
        params: (16, 6, 2),
        elements: &[&[0, 0], &[0, 1], &[0, 2], &[0, 5], &[1, 0], &[1, 6]],
        added: None,
    },
];

/// Ids of all embedded sporadic sets, table rows first.
pub fn sporadic_ids() -> Vec<&'static str> {
    SPORADIC.iter().map(|s| s.id).collect()
}

/// Ids of the table rows that carry a documented added element.
pub fn sporadic_table_ids() -> Vec<&'static str> {
    SPORADIC.iter().filter(|s| s.added.is_some()).map(|s| s.id).collect()
}

pub fn sporadic(id: &str) -> Result<SporadicRecord> {
    let data = SPORADIC
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownSporadic(id.to_string()))?;
    let group = GroupSpec::new(data.orders.to_vec())?;
    let elements: Vec<GroupElement> = data
        .elements
        .iter()
        .map(|c| GroupElement::new(c.to_vec()))
        .collect();
    let (v, k, lambda) = data.params;
    Ok(SporadicRecord {
        id: data.id,
        params: DsParams { v, k, lambda },
        set: Subset::new(group, &elements)?,
        added: data.added.map(|c| GroupElement::new(c.to_vec())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffcore::{classify, Classification};
    use crate::mgr::affine_lex_min;

    fn ds(v: u64, k: u64, lambda: u64) -> Classification {
        Classification::DifferenceSet(DsParams { v, k, lambda })
    }

    #[test]
    fn residues() {
        assert_eq!(power_residues(7, 2).unwrap(), vec![1, 2, 4]);
        let q37 = power_residues(37, 4).unwrap();
        assert_eq!(q37, vec![1, 7, 9, 10, 12, 16, 26, 33, 34]);
        assert_eq!(classify(&Subset::cyclic(37, &q37).unwrap()), ds(37, 9, 2));
        let o73 = residue_set(73, 8, false).unwrap();
        assert_eq!(o73.len(), 9);
        assert_eq!(classify(&o73), ds(73, 9, 1));
        assert!(matches!(power_residues(37, 5), Err(Error::BadExponent { .. })));
        assert!(matches!(power_residues(35, 2), Err(Error::NotPrime(35))));
    }

    #[test]
    fn residue_closure_and_zero() {
        for (p, e) in [(37u64, 4u64), (73, 8), (41, 8), (101, 4), (13, 2)] {
            let r = power_residues(p, e).unwrap();
            for &s in &r {
                let mut scaled: Vec<u64> = r.iter().map(|&x| x * s % p).collect();
                scaled.sort_unstable();
                assert_eq!(scaled, r);
            }
            let z = residue_set(p, e, true).unwrap();
            assert_eq!(z.len() as u64, (p - 1) / e + 1);
            assert!(z.contains_index(0));
        }
    }

    #[test]
    fn paley_sets() {
        assert_eq!(paley(7).unwrap().residues(), vec![1, 2, 4]);
        assert_eq!(paley(11).unwrap().residues(), vec![1, 3, 4, 5, 9]);
        assert_eq!(classify(&paley(11).unwrap()), ds(11, 5, 2));
        assert_eq!(classify(&paley(19).unwrap()), ds(19, 9, 4));
        for v in [23u64, 31, 43, 47, 59] {
            let n = (v + 1) / 4;
            assert_eq!(classify(&paley(v).unwrap()), ds(v, 2 * n - 1, n - 1));
        }
        assert!(paley(13).is_err());
        assert!(paley(15).is_err());
    }

    #[test]
    fn singer_sets() {
        let s2 = singer_planar(2).unwrap();
        assert_eq!(classify(&s2), ds(7, 3, 1));
        assert_eq!(affine_lex_min(&s2.residues(), 7), affine_lex_min(&[1, 2, 4], 7));
        assert_eq!(classify(&singer_planar(3).unwrap()), ds(13, 4, 1));
        assert_eq!(classify(&singer_planar(5).unwrap()), ds(31, 6, 1));
        for q in [7u64, 11, 13] {
            assert_eq!(classify(&singer_planar(q).unwrap()), ds(q * q + q + 1, q + 1, 1));
        }
        assert!(matches!(singer_planar(4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn sporadic_table() {
        assert_eq!(sporadic_ids().len(), 8);
        for id in sporadic_ids() {
            let rec = sporadic(id).unwrap();
            assert_eq!(classify(&rec.set), Classification::DifferenceSet(rec.params), "{id}");
        }
        let r = sporadic("16-6-2-Z4xZ4").unwrap();
        assert_eq!(r.added, Some(GroupElement::new(vec![1, 1])));
        let r = sporadic("16-6-2-Z2xZ8").unwrap();
        assert!(r.added.is_none());
        let r = sporadic("64-28-12-Z8xZ8").unwrap();
        assert_eq!(r.set.len(), 28);
        assert_eq!(r.added, Some(GroupElement::new(vec![3, 1])));
        assert!(matches!(sporadic("nope"), Err(Error::UnknownSporadic(_))));
    }

    #[test]
    fn family_dispatch() {
        assert_eq!("quartic-b0".parse::<FamilyKind>().unwrap(), FamilyKind::Quartic);
        assert_eq!(family(FamilyKind::Octic, 73, true).unwrap().len(), 10);
        assert_eq!(family(FamilyKind::Paley, 7, true).unwrap().residues(), vec![0, 1, 2, 4]);
        assert!(family(FamilyKind::Singer, 3, true).is_err());
    }
}
