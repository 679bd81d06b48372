//! Finite abelian groups presented as direct products of cyclic groups.
//!
//! Elements are coordinate vectors. Every element also has a row-major
//! mixed-radix index in `[0, v)` (`coords[0]` is the most significant digit);
//! this is the single total order used for lexicographic comparisons and
//! deterministic output elsewhere in the crate. Factor lists are kept exactly
//! as given: `Z2 x Z8` is not merged into `Z16`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

/// `Z_{n1} x ... x Z_{nr}` with every `ni >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GroupSpec {
    orders: Vec<u64>,
    strides: Vec<u64>,
    v: u64,
}

impl GroupSpec {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(format!("factor order {bad} < 2")));
        }
        let v = orders
            .iter()
            .try_fold(1u64, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| Error::InvalidGroup("group order overflows u64".into()))?;
        let mut strides = vec![1u64; orders.len()];
        for i in (0..orders.len() - 1).rev() {
            strides[i] = strides[i + 1] * orders[i + 1];
        }
        Ok(Self { orders, strides, v })
    }

    pub fn cyclic(v: u64) -> Result<Self> {
        Self::new(vec![v])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Group order `v`.
    pub fn order(&self) -> u64 {
        self.v
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Presented with a single factor.
    pub fn is_single_cyclic(&self) -> bool {
        self.orders.len() == 1
    }

    /// Abstractly cyclic: factor orders pairwise coprime.
    pub fn is_cyclic(&self) -> bool {
        self.orders
            .iter()
            .enumerate()
            .all(|(i, &a)| self.orders[i + 1..].iter().all(|&b| gcd(a, b) == 1))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.orders.len()],
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.coords.len() == self.orders.len()
            && g.coords.iter().zip(&self.orders).all(|(&c, &n)| c < n)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::NotInGroup(g.coords.clone(), self.orders.clone()))
        }
    }

    /// Build an element, reducing each coordinate modulo its factor.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.orders.len() {
            return Err(Error::NotInGroup(
                coords.iter().map(|&c| c as u64).collect(),
                self.orders.clone(),
            ));
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        })
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.orders)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn double(&self, a: &GroupElement) -> Result<GroupElement> {
        self.add(a, a)
    }

    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check(g)?;
        Ok(g
            .coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c * s)
            .sum::<u64>() as usize)
    }

    pub fn element_at(&self, index: usize) -> Result<GroupElement> {
        if index as u64 >= self.v {
            return Err(Error::IndexOutOfRange {
                index: index as u64,
                order: self.v,
            });
        }
        let mut rest = index as u64;
        let coords = self
            .strides
            .iter()
            .map(|&s| {
                let c = rest / s;
                rest %= s;
                c
            })
            .collect();
        Ok(GroupElement { coords })
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.v as usize).map(move |i| self.element_at(i).expect("index in range"))
    }

    /// `coord` of the element with index `i`.
    #[inline]
    fn digit(&self, i: u64, pos: usize) -> u64 {
        (i / self.strides[pos]) % self.orders[pos]
    }

    /// Index-level `a - b`. Callers guarantee both indices are `< v`.
    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        if self.orders.len() == 1 {
            let v = self.v as usize;
            return if a >= b { a - b } else { a + v - b };
        }
        let (a, b) = (a as u64, b as u64);
        (0..self.orders.len())
            .map(|pos| {
                let n = self.orders[pos];
                ((self.digit(a, pos) + n - self.digit(b, pos)) % n) * self.strides[pos]
            })
            .sum::<u64>() as usize
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        if self.orders.len() == 1 {
            let v = self.v as usize;
            let s = a + b;
            return if s >= v { s - v } else { s };
        }
        let (a, b) = (a as u64, b as u64);
        (0..self.orders.len())
            .map(|pos| ((self.digit(a, pos) + self.digit(b, pos)) % self.orders[pos]) * self.strides[pos])
            .sum::<u64>() as usize
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        self.sub_idx(0, a)
    }
}

impl TryFrom<Vec<u64>> for GroupSpec {
    type Error = Error;

    fn try_from(orders: Vec<u64>) -> Result<Self> {
        Self::new(orders)
    }
}

impl From<GroupSpec> for Vec<u64> {
    fn from(g: GroupSpec) -> Self {
        g.orders
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

/// A coordinate vector, reduced with respect to its group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        Self { coords }
    }

    pub fn cyclic(x: u64) -> Self {
        Self { coords: vec![x] }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Residues `a` in `[1, v)` with `gcd(a, v) = 1`, ascending.
pub fn units(v: u64) -> Vec<u64> {
    if v == 1 {
        return vec![0];
    }
    (1..v).filter(|&a| gcd(a, v) == 1).collect()
}
