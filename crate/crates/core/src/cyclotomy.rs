//! Cyclotomic numbers and octic residue sets.
//!
//! For a prime `p = ef + 1` and generator `g`, the classes are
//! `C_i = {g^(es+i)}` and `(i,j)_e` counts `x ∈ C_i` with `x + 1 ∈ C_j`.
//! For `e = 8` the numbers have closed forms in `p = x² + 4y² = a² + 2b²`
//! (`x ≡ a ≡ 1 mod 4`), in four cases by `p mod 16` and whether 2 is a
//! quartic residue. The difference count of `C_0` at `z ∈ C_i` is `(i,0)_8`,
//! which turns the question "when are octic residues (with or without 0)
//! an almost difference set" into linear equations in `x, a, y, b`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{
    exact_sqrt, factorize, is_prime, is_primitive_root, isqrt, mul_mod, pow_mod, primality, primes_up_to,
    primitive_root, Primality,
};
use crate::diffcore::{classify, AdsParams, Classification, DsParams, Subset};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicTable {
    pub p: u64,
    pub e: u64,
    pub f: u64,
    /// Generator the classes are defined by; `None` for a closed form
    /// evaluated without reference to one.
    pub g: Option<u64>,
    /// `numbers[i][j] = (i,j)_e`.
    pub numbers: Vec<Vec<u64>>,
}

impl CyclotomicTable {
    pub fn total(&self) -> u64 {
        self.numbers.iter().flatten().sum()
    }

    /// `(i,0)_e` for every `i`.
    pub fn column0(&self) -> Vec<u64> {
        self.numbers.iter().map(|r| r[0]).collect()
    }
}

impl fmt::Display for CyclotomicTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.numbers.iter().flatten().max().map_or(1, |m| m.to_string().len());
        for row in &self.numbers {
            let cells: Vec<String> = row.iter().map(|n| format!("{n:>width$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

fn check_order(p: u64, e: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e < 2 || !(p - 1).is_multiple_of(e) {
        return Err(Error::BadExponent { divisor: e, p_minus_1: p - 1 });
    }
    Ok(())
}

/// Discrete logarithm mod `e` of every nonzero residue.
fn class_index(p: u64, e: u64, g: u64) -> Vec<u8> {
    let mut ind = vec![0u8; p as usize];
    let mut x = 1u64;
    for s in 0..p - 1 {
        ind[x as usize] = (s % e) as u8;
        x = mul_mod(x, g, p);
    }
    ind
}

/// `(i,j)_e` by direct enumeration, `O(p)`.
pub fn cyclotomic_numbers(p: u64, e: u64, g: u64) -> Result<CyclotomicTable> {
    check_order(p, e)?;
    if e > 255 {
        return Err(Error::InvalidParameter(format!("order e = {e} too large")));
    }
    if !is_primitive_root(g, p) {
        return Err(Error::InvalidParameter(format!("{g} is not a primitive root mod {p}")));
    }
    let ind = class_index(p, e, g);
    let mut numbers = vec![vec![0u64; e as usize]; e as usize];
    for x in 1..p - 1 {
        numbers[ind[x as usize] as usize][ind[x as usize + 1] as usize] += 1;
    }
    Ok(CyclotomicTable { p, e, f: (p - 1) / e, g: Some(g), numbers })
}

/// Signs chosen for `y` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignChoice {
    pub y_positive: bool,
    pub b_positive: bool,
    /// Generator the choice was matched against.
    pub generator: u64,
}

/// `p = x² + 4y² = a² + 2b²` with `x ≡ a ≡ 1 (mod 4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadReps {
    pub p: u64,
    pub x: i64,
    pub y: i64,
    pub a: i64,
    pub b: i64,
    /// `None` while `y, b` are bare magnitudes.
    pub signs: Option<SignChoice>,
}

impl QuadReps {
    pub fn with_signs(&self, y_positive: bool, b_positive: bool, generator: u64) -> Self {
        Self {
            y: if y_positive { self.y.abs() } else { -self.y.abs() },
            b: if b_positive { self.b.abs() } else { -self.b.abs() },
            signs: Some(SignChoice { y_positive, b_positive, generator }),
            ..*self
        }
    }
}

fn normalize_mod4(v: i64) -> i64 {
    if v.rem_euclid(4) == 1 {
        v
    } else {
        -v
    }
}

/// Both representations of a prime `p ≡ 1 (mod 8)`, with `y, b >= 0`.
pub fn quad_representations(p: u64) -> Result<QuadReps> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 8 != 1 {
        return Err(Error::InvalidParameter(format!("{p} is not 1 mod 8")));
    }
    let xy = (0..=isqrt(p / 4))
        .find_map(|y| exact_sqrt(p - 4 * y * y).map(|x| (x as i64, y as i64)))
        .ok_or_else(|| Error::Invariant(format!("no x² + 4y² representation of {p}")))?;
    let ab = (0..=isqrt(p / 2))
        .find_map(|b| exact_sqrt(p - 2 * b * b).map(|a| (a as i64, b as i64)))
        .ok_or_else(|| Error::Invariant(format!("no a² + 2b² representation of {p}")))?;
    Ok(QuadReps {
        p,
        x: normalize_mod4(xy.0),
        y: xy.1,
        a: normalize_mod4(ab.0),
        b: ab.1,
        signs: None,
    })
}

/// Which of the four order-8 coefficient systems applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OcticCase {
    /// `p mod 16`, either 1 or 9.
    pub residue16: u8,
    pub two_is_quartic: bool,
}

impl OcticCase {
    pub const ALL: [OcticCase; 4] = [
        OcticCase { residue16: 1, two_is_quartic: true },
        OcticCase { residue16: 1, two_is_quartic: false },
        OcticCase { residue16: 9, two_is_quartic: true },
        OcticCase { residue16: 9, two_is_quartic: false },
    ];

    pub fn of(p: u64) -> Result<Self> {
        if p % 8 != 1 || !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not a prime 1 mod 8")));
        }
        Ok(Self {
            residue16: (p % 16) as u8,
            two_is_quartic: pow_mod(2, (p - 1) / 4, p) == 1,
        })
    }

    /// `f = (p-1)/8` is even exactly when `p ≡ 1 (mod 16)`.
    pub fn f_is_even(&self) -> bool {
        self.residue16 == 1
    }

    fn coefficients(&self) -> &'static [Coef; 15] {
        match (self.residue16, self.two_is_quartic) {
            (1, true) => &COEF_1_Q,
            (1, false) => &COEF_1_N,
            (9, true) => &COEF_9_Q,
            _ => &COEF_9_N,
        }
    }

    fn layout(&self) -> &'static [&'static str; 8] {
        if self.residue16 == 1 {
            &LAYOUT_1
        } else {
            &LAYOUT_9
        }
    }
}

impl fmt::Display for OcticCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p ≡ {} (mod 16), 2 {}a quartic residue",
            self.residue16,
            if self.two_is_quartic { "" } else { "not " }
        )
    }
}

impl std::str::FromStr for OcticCase {
    type Err = Error;

    /// `1q`, `1n`, `9q`, `9n`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let case = match s.as_str() {
            "1q" => OcticCase::ALL[0],
            "1n" => OcticCase::ALL[1],
            "9q" => OcticCase::ALL[2],
            "9n" => OcticCase::ALL[3],
            _ => return Err(Error::InvalidParameter(format!("unknown case {s:?}; use 1q, 1n, 9q or 9n"))),
        };
        Ok(case)
    }
}

/// `64·X = p + c + cx·x + ca·a + cy·y + cb·b`.
#[derive(Clone, Copy, Debug)]
struct Coef {
    c: i64,
    x: i64,
    a: i64,
    y: i64,
    b: i64,
}

const fn k(c: i64, x: i64, a: i64, y: i64, b: i64) -> Coef {
    Coef { c, x, a, y, b }
}

// Letters A..O in order.
const COEF_1_Q: [Coef; 15] = [
    k(-23, -18, -24, 0, 0),
    k(-7, 2, 4, 16, 16),
    k(-7, 6, 0, 16, 0),
    k(-7, 2, 4, -16, 16),
    k(-7, -2, 8, 0, 0),
    k(-7, 2, 4, 16, -16),
    k(-7, 6, 0, -16, 0),
    k(-7, 2, 4, -16, -16),
    k(1, 2, -4, 0, 0),
    k(1, -6, 4, 0, 0),
    k(1, 2, -4, 0, 0),
    k(1, 2, -4, 0, 0),
    k(1, -6, 4, 0, 0),
    k(1, -2, 0, 0, 0),
    k(1, 2, -4, 0, 0),
];

const COEF_1_N: [Coef; 15] = [
    k(-23, 6, 0, 0, 0),
    k(-7, 2, 4, 0, 0),
    k(-7, -2, -8, -16, 0),
    k(-7, 2, 4, 0, 0),
    k(-7, -10, 0, 0, 0),
    k(-7, 2, 4, 0, 0),
    k(-7, -2, -8, 16, 0),
    k(-7, 2, 4, 0, 0),
    k(1, -6, 4, 0, 0),
    k(1, 2, -4, 0, -16),
    k(1, 2, -4, 16, 0),
    k(1, 2, -4, -16, 0),
    k(1, 2, -4, 0, 16),
    k(1, 6, 8, 0, 0),
    k(1, -6, 4, 0, 0),
];

const COEF_9_Q: [Coef; 15] = [
    k(-15, -2, 0, 0, 0),
    k(1, 2, -4, 16, 0),
    k(1, 6, 8, -16, 0),
    k(1, 2, -4, -16, 0),
    k(1, -18, 0, 0, 0),
    k(1, 2, -4, 16, 0),
    k(1, 6, 8, 16, 0),
    k(1, 2, -4, -16, 0),
    k(-7, 2, 4, 0, 0),
    k(-7, 2, 4, 0, 0),
    k(1, -6, 4, 0, 16),
    k(1, 2, -4, 0, 0),
    k(1, -6, 4, 0, -16),
    k(-7, -2, -8, 0, 0),
    k(1, 2, -4, 0, 0),
];

const COEF_9_N: [Coef; 15] = [
    k(-15, -10, -8, 0, 0),
    k(1, 2, -4, 0, -16),
    k(1, -2, 0, 16, 0),
    k(1, 2, -4, 0, -16),
    k(1, 6, 24, 0, 0),
    k(1, 2, -4, 0, 16),
    k(1, -2, 0, -16, 0),
    k(1, 2, -4, 0, 16),
    k(-7, 2, 4, 16, 0),
    k(-7, 2, 4, -16, 0),
    k(1, 2, -4, 0, 0),
    k(1, -6, 4, 0, 0),
    k(1, 2, -4, 0, 0),
    k(-7, 6, 0, 0, 0),
    k(1, -6, 4, 0, 0),
];

const LAYOUT_1: [&str; 8] = [
    "ABCDEFGH", "BHIJKLMI", "CIGMNONJ", "DJMFLOOK", "EKNLEKNL", "FLOOKDJM", "GMNONJCI", "HIJKLMIB",
];

const LAYOUT_9: [&str; 8] = [
    "ABCDEFGH", "IJKLFDLM", "NONMGLCK", "JOOIHMKB", "AINJAINJ", "IHMKBJOO", "NMGLCKNO", "JKLFDLMI",
];

fn letter(ch: u8) -> usize {
    (ch - b'A') as usize
}

/// The order-8 table from the closed forms. Every `64·(i,j)` must be a
/// nonnegative multiple of 64; otherwise the case or signs are wrong.
pub fn octic_closed_form(p: u64, reps: &QuadReps, case: OcticCase) -> Result<CyclotomicTable> {
    let coefs = case.coefficients();
    let mut values = [0u64; 15];
    for (slot, c) in coefs.iter().enumerate() {
        let v64 = p as i64 + c.c + c.x * reps.x + c.a * reps.a + c.y * reps.y + c.b * reps.b;
        if v64 < 0 || v64 % 64 != 0 {
            return Err(Error::Verification(format!(
                "64·{} = {v64} is not a nonnegative multiple of 64 for p = {p}",
                (b'A' + slot as u8) as char
            )));
        }
        values[slot] = (v64 / 64) as u64;
    }
    let numbers = case
        .layout()
        .iter()
        .map(|row| row.bytes().map(|ch| values[letter(ch)]).collect())
        .collect();
    Ok(CyclotomicTable {
        p,
        e: 8,
        f: (p - 1) / 8,
        g: reps.signs.map(|s| s.generator),
        numbers,
    })
}

/// Fixes the signs of `y` and `b` so the closed form reproduces the
/// enumerated table for generator `g`.
pub fn sign_normalization(p: u64, g: u64) -> Result<QuadReps> {
    let reps = quad_representations(p)?;
    let case = OcticCase::of(p)?;
    let table = cyclotomic_numbers(p, 8, g)?;
    for (yp, bp) in [(true, true), (true, false), (false, true), (false, false)] {
        let signed = reps.with_signs(yp, bp, g);
        if let Ok(closed) = octic_closed_form(p, &signed, case) {
            if closed.numbers == table.numbers {
                return Ok(signed);
            }
        }
    }
    Err(Error::Invariant(format!("no sign choice reproduces the order-8 table for p = {p}, g = {g}")))
}

/// Whether the octic residues mod `p` form a difference set: all `(i,0)_8`
/// equal, which needs `p ≡ 9 (mod 16)`. Returns the parameters if so.
pub fn octic_ds_test(p: u64) -> Result<Option<DsParams>> {
    let case = OcticCase::of(p)?;
    if case.residue16 == 1 {
        // One of the (i,0) is odd and the rest even.
        return Ok(None);
    }
    let reps = quad_representations(p)?;
    // Column 0 is A, I, N, J repeated; with 2 a quartic nonresidue I = J
    // forces y = 0, which is impossible, so the sign of y is immaterial.
    let coefs = case.coefficients();
    let col: Vec<i64> = b"AINJ"
        .iter()
        .map(|&ch| {
            let c = coefs[letter(ch)];
            p as i64 + c.c + c.x * reps.x + c.a * reps.a + c.y * reps.y + c.b * reps.b
        })
        .collect();
    if col.iter().all(|&v| v == col[0]) && col[0] >= 0 && col[0] % 64 == 0 {
        let lambda = (col[0] / 64) as u64;
        return Ok(Some(DsParams { v: p, k: (p - 1) / 8, lambda }));
    }
    Ok(None)
}

/// Octic residues without (Type O) or with (Type O₀) zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OcticTarget {
    #[serde(rename = "O")]
    O,
    #[serde(rename = "O0")]
    O0,
}

impl OcticTarget {
    pub const ALL: [OcticTarget; 2] = [OcticTarget::O, OcticTarget::O0];

    pub fn with_zero(self) -> bool {
        self == OcticTarget::O0
    }
}

impl fmt::Display for OcticTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OcticTarget::O => "O",
            OcticTarget::O0 => "O0",
        })
    }
}

impl std::str::FromStr for OcticTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "O" => Ok(OcticTarget::O),
            "O0" | "O₀" => Ok(OcticTarget::O0),
            other => Err(Error::InvalidParameter(format!("unknown target {other:?}; use O or O0"))),
        }
    }
}

/// Largest `f` for which direct verification runs the full `O(k²)` profile;
/// above it one representative per cyclotomic class is counted.
const FULL_PROFILE_MAX_K: u64 = 4096;

/// Classifies the octic residues mod `p` (with 0 when `with_zero`) from
/// the actual set. The profile is constant on each cyclotomic class, so
/// large sets need only one count per class.
pub fn octic_set_classification(p: u64, with_zero: bool) -> Result<Classification> {
    check_order(p, 8)?;
    let f = (p - 1) / 8;
    let g = primitive_root(p)?;
    let step = pow_mod(g, 8, p);
    let mut members = Vec::with_capacity(f as usize + 1);
    let mut x = 1u64;
    for _ in 0..f {
        members.push(x);
        x = mul_mod(x, step, p);
    }
    if with_zero {
        members.push(0);
    }
    let k = members.len() as u64;
    if k <= FULL_PROFILE_MAX_K {
        return Ok(classify(&Subset::cyclic(p, &members)?));
    }
    let mut inside = vec![false; p as usize];
    for &m in &members {
        inside[m as usize] = true;
    }
    let mut per_class = [0u64; 8];
    let mut z = 1u64;
    for count in per_class.iter_mut() {
        *count = members.iter().filter(|&&d| inside[((d + p - z) % p) as usize]).count() as u64;
        z = mul_mod(z, g, p);
    }
    let lo = *per_class.iter().min().expect("eight classes");
    let hi = *per_class.iter().max().expect("eight classes");
    Ok(if lo == hi {
        Classification::DifferenceSet(DsParams { v: p, k, lambda: lo })
    } else if hi == lo + 1 {
        let t = f * per_class.iter().filter(|&&c| c == lo).count() as u64;
        Classification::AlmostDifferenceSet(AdsParams::new(p, k, lo, t))
    } else {
        Classification::None { v: p, k }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OcticVerdict {
    pub p: u64,
    pub target: OcticTarget,
    /// ADS parameters when the arithmetic characterization holds.
    pub ads: Option<AdsParams>,
    /// Whether the set itself was built and classified.
    pub verified: bool,
}

/// Default bound on `p` for building and checking the set directly.
pub const DEFAULT_VERIFY_LIMIT: u64 = 1_000_000;

fn square_root_of(n: i128) -> Option<u64> {
    if n < 0 || n > u64::MAX as i128 {
        return None;
    }
    exact_sqrt(n as u64)
}

/// Arithmetic characterization of the primes whose octic residues, with
/// or without 0, form an ADS.
pub fn type_condition(p: u64, target: OcticTarget) -> bool {
    let p = p as i128;
    match target {
        OcticTarget::O => {
            if p == 17 || p == 41 {
                return true;
            }
            // p = 8t² + 49 = 64u² + 441, t odd, u even.
            (p - 49) % 8 == 0
                && (p - 441) % 64 == 0
                && square_root_of((p - 49) / 8).is_some_and(|t| t % 2 == 1)
                && square_root_of((p - 441) / 64).is_some_and(|u| u % 2 == 0)
        }
        OcticTarget::O0 => {
            if p == 41 {
                return true;
            }
            // p = 8t² + 1 = 64u² + 9, t and u odd.
            (p - 1) % 8 == 0
                && (p - 9) % 64 == 0
                && square_root_of((p - 1) / 8).is_some_and(|t| t % 2 == 1)
                && square_root_of((p - 9) / 64).is_some_and(|u| u % 2 == 1)
        }
    }
}

fn classify_type(p: u64, target: OcticTarget, verify_limit: u64) -> Result<OcticVerdict> {
    check_order(p, 8)?;
    let k = (p - 1) / 8 + target.with_zero() as u64;
    let ads = type_condition(p, target).then(|| AdsParams::forced(p, k));
    let mut verdict = OcticVerdict { p, target, ads, verified: false };
    if p <= verify_limit {
        let direct = octic_set_classification(p, target.with_zero())?;
        let agrees = match (direct, ads) {
            (Classification::AlmostDifferenceSet(d), Some(a)) => d == a,
            (Classification::AlmostDifferenceSet(_), None) => false,
            (_, Some(_)) => false,
            (_, None) => true,
        };
        if !agrees {
            return Err(Error::Invariant(format!(
                "type {target} at p = {p}: characterization gives {ads:?}, the set classifies as {direct}"
            )));
        }
        verdict.verified = true;
    }
    Ok(verdict)
}

/// Type O: octic residues alone. Sets with `p <= verify_limit` are also
/// built and classified; a disagreement is an error.
pub fn classify_type_o(p: u64, verify_limit: u64) -> Result<OcticVerdict> {
    classify_type(p, OcticTarget::O, verify_limit)
}

/// Type O₀: octic residues together with 0.
pub fn classify_type_o0(p: u64, verify_limit: u64) -> Result<OcticVerdict> {
    classify_type(p, OcticTarget::O0, verify_limit)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub p: u64,
    pub type_o: Option<AdsParams>,
    pub type_o0: Option<AdsParams>,
    pub ds: Option<DsParams>,
    pub verified: bool,
}

/// Every prime `p ≡ 1 (mod 8)` up to `max_p` with an octic ADS or DS, in
/// increasing order. Primes up to `verify_limit` are checked directly.
pub fn scan(max_p: u64, verify_limit: u64) -> Result<Vec<ScanRow>> {
    let primes: Vec<u64> = primes_up_to(max_p).into_iter().filter(|p| p % 8 == 1).collect();
    let rows: Result<Vec<Option<ScanRow>>> = primes
        .par_iter()
        .map(|&p| {
            let o = classify_type_o(p, verify_limit)?;
            let o0 = classify_type_o0(p, verify_limit)?;
            let ds = octic_ds_test(p)?;
            if p <= verify_limit {
                let direct = octic_set_classification(p, false)?;
                if direct.ds() != ds {
                    return Err(Error::Invariant(format!(
                        "difference-set test at p = {p} gives {ds:?}, the set classifies as {direct}"
                    )));
                }
            }
            Ok((o.ads.is_some() || o0.ads.is_some() || ds.is_some()).then_some(ScanRow {
                p,
                type_o: o.ads,
                type_o0: o0.ads,
                ds,
                verified: o.verified,
            }))
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// A solution of the order-8 ADS equations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSolution {
    pub a: i64,
    pub x: i64,
    /// `(x² - a²)/2 = b² - 2y²`.
    pub norm: i64,
    pub factors: Vec<(u64, u32)>,
    /// Which classes carry `λ + 1` (1) rather than `λ` (0).
    pub pattern: Vec<u8>,
    /// Set when `y` and `b` are pinned down and give a prime.
    pub prime: Option<u64>,
}

impl SystemSolution {
    /// Some `b + y√2` has this norm: primes `≡ ±3 (mod 8)` occur to even
    /// powers.
    pub fn norm_admits_elements(&self) -> bool {
        norm_admits_elements(self.norm)
    }
}

pub fn norm_admits_elements(n: i64) -> bool {
    n != 0
        && factorize(n.unsigned_abs())
            .iter()
            .all(|&(q, e)| !(q % 8 == 3 || q % 8 == 5) || e % 2 == 0)
}

/// Can the family `p = a² + 2b²` with `b² - 2y² = norm` contain a prime?
/// Needs elements of that norm and an orbit where `gcd(a, b, y) = 1`; the
/// orbit map is unimodular, so the gcd is fixed along each orbit.
pub fn family_viable(a: i64, norm: i64) -> bool {
    if !norm_admits_elements(norm) {
        return false;
    }
    norm_seeds(norm).iter().any(|(b, y)| {
        let g = num_integer::gcd(num_integer::gcd(a.unsigned_abs() as u128, b.unsigned_abs() as u128), y.unsigned_abs() as u128);
        g == 1
    })
}

type Row = [Rational64; 6];

/// Reduced row echelon form; returns pivot columns, or `None` when
/// inconsistent.
fn rref(rows: &mut [Row], nvars: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..nvars {
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, sel);
        let inv = rows[r][col].recip();
        for v in &mut rows[r][..=nvars] {
            *v *= inv;
        }
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col];
                for (v, q) in row[..=nvars].iter_mut().zip(&pivot) {
                    *v -= factor * q;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let inconsistent = rows[r..].iter().any(|row| !row[nvars].is_zero());
    (!inconsistent).then_some(pivots)
}

fn as_integer(q: Rational64) -> Option<i64> {
    q.is_integer().then(|| q.to_integer())
}

/// All assignments of the column-0 entries to `{λ, λ+1}` (not all equal),
/// solved for `w = p - 64λ, x, a, y, b`. Rows where `y, b` drop out are
/// norm families `(a, x, (x² - a²)/2)`; rows that pin every unknown are
/// kept only when they produce a prime of the right case.
pub fn solve_octic_systems(case: OcticCase, target: OcticTarget) -> Vec<SystemSolution> {
    const W: usize = 0;
    const X: usize = 1;
    const A: usize = 2;
    const Y: usize = 3;
    const B: usize = 4;
    let coefs = case.coefficients();
    let column: Vec<Coef> = case.layout().iter().map(|row| coefs[letter(row.as_bytes()[0])]).collect();
    // Adding 0 raises the count at classes containing 1 and -1.
    let mut adjust = [0i64; 8];
    if target.with_zero() {
        if case.f_is_even() {
            adjust[0] = 2;
        } else {
            adjust[0] = 1;
            adjust[4] = 1;
        }
    }
    let mut out: Vec<SystemSolution> = Vec::new();
    for mask in 1u32..255 {
        let eps: Vec<i64> = (0..8).map(|i| (mask >> i & 1) as i64).collect();
        // w + c + cx·x + ca·a + cy·y + cb·b = 64(ε - adj)
        let mut rows: Vec<Row> = column
            .iter()
            .enumerate()
            .map(|(i, c)| {
                [
                    Rational64::one(),
                    Rational64::from_integer(c.x),
                    Rational64::from_integer(c.a),
                    Rational64::from_integer(c.y),
                    Rational64::from_integer(c.b),
                    Rational64::from_integer(64 * (eps[i] - adjust[i]) - c.c),
                ]
            })
            .collect();
        let Some(pivots) = rref(&mut rows, 5) else { continue };
        let free: Vec<usize> = (0..5).filter(|c| !pivots.contains(c)).collect();
        let value = |var: usize| -> Option<Rational64> {
            let r = pivots.iter().position(|&c| c == var)?;
            free.iter().all(|&f| rows[r][f].is_zero()).then_some(rows[r][5])
        };
        let (Some(w), Some(x), Some(a)) = (value(W), value(X), value(A)) else { continue };
        let (Some(w), Some(x), Some(a)) = (as_integer(w), as_integer(x), as_integer(a)) else { continue };
        if x.rem_euclid(4) != 1 || a.rem_euclid(4) != 1 {
            continue;
        }
        let norm2 = x * x - a * a;
        if norm2 % 2 != 0 {
            continue;
        }
        let norm = norm2 / 2;
        let y = value(Y).map(as_integer);
        let b = value(B).map(as_integer);
        if matches!(y, Some(None)) || matches!(b, Some(None)) {
            continue;
        }
        let (y, b) = (y.flatten(), b.flatten());
        let prime = match (y, b) {
            (None, None) => None,
            _ => match pinned_prime(case, w, x, a, y, b) {
                Some(p) => Some(p),
                None => continue,
            },
        };
        let row = SystemSolution {
            a,
            x,
            norm,
            factors: factorize(norm.unsigned_abs()),
            pattern: eps.iter().map(|&e| e as u8).collect(),
            prime,
        };
        let dup = out.iter().any(|o| o.a == row.a && o.x == row.x && o.prime == row.prime);
        if !dup {
            out.push(row);
        }
    }
    out
}

/// The prime fixed by a fully or half determined solution, when it is a
/// genuine prime of the given case with `λ = (p - w)/64 >= 0`.
fn pinned_prime(case: OcticCase, w: i64, x: i64, a: i64, y: Option<i64>, b: Option<i64>) -> Option<u64> {
    let p = match (y, b) {
        (Some(y), _) => x * x + 4 * y * y,
        (None, Some(b)) => a * a + 2 * b * b,
        (None, None) => return None,
    };
    if p <= 2 {
        return None;
    }
    let pu = p as u64;
    let b_sq = p - a * a;
    let y_sq = p - x * x;
    if b_sq < 0 || b_sq % 2 != 0 || y_sq < 0 || y_sq % 4 != 0 {
        return None;
    }
    let bb = exact_sqrt((b_sq / 2) as u64)? as i64;
    let yy = exact_sqrt((y_sq / 4) as u64)? as i64;
    if b.is_some_and(|b| b.abs() != bb) || y.is_some_and(|y| y.abs() != yy) {
        return None;
    }
    if !is_prime(pu) || pu % 16 != case.residue16 as u64 {
        return None;
    }
    if (pow_mod(2, (pu - 1) / 4, pu) == 1) != case.two_is_quartic {
        return None;
    }
    let lambda64 = p - w;
    (lambda64 >= 0 && lambda64 % 64 == 0).then_some(pu)
}

mod decimal {
    use super::*;

    pub fn ser_int<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn de_int<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }

    pub fn ser_uint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn de_uint<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One element `b + y√2` of a given norm, with the prime it yields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormSolution {
    #[serde(serialize_with = "decimal::ser_int", deserialize_with = "decimal::de_int")]
    pub b: BigInt,
    #[serde(serialize_with = "decimal::ser_int", deserialize_with = "decimal::de_int")]
    pub y: BigInt,
    pub norm: i64,
    /// Index of the orbit seed in [`norm_seeds`] order.
    pub seed: usize,
    /// Power of `u² = 3 + 2√2` applied to the seed.
    pub index: u32,
    /// `a² + 2b²`.
    #[serde(serialize_with = "decimal::ser_uint", deserialize_with = "decimal::de_uint")]
    pub p: BigUint,
    pub primality: Primality,
}

/// Orbit representatives `(b, y)`, `b >= 0`, of `b² - 2y² = n` under
/// multiplication by `u² = 3 + 2√2`, found by bounded search.
pub fn norm_seeds(n: i64) -> Vec<(i64, i64)> {
    let mut seeds = Vec::new();
    if n == 0 {
        return seeds;
    }
    let m = n.unsigned_abs();
    let (lo, hi) = if n > 0 { (0, isqrt(m / 2)) } else { (isqrt(m.div_ceil(2)).saturating_sub(1), isqrt(m) + 1) };
    for y in lo..=hi {
        let b_sq = n as i128 + 2 * (y as i128) * (y as i128);
        let Some(b) = square_root_of(b_sq) else { continue };
        let y = y as i64;
        let b = b as i64;
        if n < 0 && !(2 * y * y >= -n && y * y <= -n) {
            continue;
        }
        seeds.push((b, y));
        if y != 0 {
            seeds.push((b, -y));
        }
    }
    seeds
}

/// Solutions of `b² - 2y² = n` in increasing `b`, each orbit advanced by
/// `(b, y) -> (3b + 4y, 2b + 3y)`, paired with `p = a² + 2b²`. Stops after
/// `max_results` solutions.
pub fn enumerate_norm_solutions(n: i64, a: i64, max_results: usize) -> Result<Vec<NormSolution>> {
    if n == 0 {
        return Err(Error::InvalidParameter("norm must be nonzero".into()));
    }
    let target = BigInt::from(n);
    let two = BigInt::from(2);
    let a_sq = BigInt::from(a) * BigInt::from(a);
    let mut heap: BinaryHeap<Reverse<(BigInt, usize, u32, BigInt)>> = norm_seeds(n)
        .into_iter()
        .enumerate()
        .map(|(i, (b, y))| Reverse((BigInt::from(b), i, 0, BigInt::from(y))))
        .collect();
    let mut out = Vec::new();
    while out.len() < max_results {
        let Some(Reverse((b, seed, index, y))) = heap.pop() else { break };
        if &b * &b - &two * &y * &y != target {
            return Err(Error::Invariant(format!("norm drifted at seed {seed}, index {index}")));
        }
        let p_signed = &a_sq + &two * &b * &b;
        let p = p_signed.to_biguint().expect("a² + 2b² is nonnegative");
        let primality = primality(&p);
        let next_b = BigInt::from(3) * &b + BigInt::from(4) * &y;
        let next_y = BigInt::from(2) * &b + BigInt::from(3) * &y;
        out.push(NormSolution { b: b.clone(), y: y.clone(), norm: n, seed, index, p, primality });
        if next_b.sign() != Sign::Minus {
            heap.push(Reverse((next_b, seed, index + 1, next_y)));
        }
    }
    Ok(out)
}

/// Primes among the first `max_results` solutions.
pub fn norm_primes(n: i64, a: i64, max_results: usize) -> Result<Vec<BigUint>> {
    Ok(enumerate_norm_solutions(n, a, max_results)?
        .into_iter()
        .filter(|s| s.primality.is_prime())
        .map(|s| s.p)
        .collect())
}

/// `p` as `u64` when it fits.
pub fn small(p: &BigUint) -> Option<u64> {
    p.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_examples() {
        let t = cyclotomic_numbers(13, 2, 2).unwrap();
        assert_eq!(t.total(), 11);
        let g = primitive_root(73).unwrap();
        let t = cyclotomic_numbers(73, 8, g).unwrap();
        assert_eq!(t.total(), 71);
        assert_eq!(t.column0(), vec![1; 8]);
        assert!(cyclotomic_numbers(73, 8, 8).is_err());
        assert!(cyclotomic_numbers(73, 7, g).is_err());
    }

    #[test]
    fn representations() {
        let r = quad_representations(73).unwrap();
        assert_eq!((r.x.abs(), r.y, r.a.abs(), r.b), (3, 4, 1, 6));
        let r = quad_representations(26041).unwrap();
        assert_eq!((r.x, r.y, r.a, r.b), (21, 80, -7, 114));
        let r = quad_representations(17).unwrap();
        assert_eq!((r.x, r.y, r.a.abs(), r.b), (1, 2, 3, 2));
        assert!(quad_representations(13).is_err());
    }

    #[test]
    fn closed_forms_small() {
        for p in [17u64, 41, 73, 89, 97, 113, 137, 193] {
            let g = primitive_root(p).unwrap();
            let reps = sign_normalization(p, g).unwrap();
            let closed = octic_closed_form(p, &reps, OcticCase::of(p).unwrap()).unwrap();
            assert_eq!(closed.numbers, cyclotomic_numbers(p, 8, g).unwrap().numbers, "p = {p}");
        }
    }

    #[test]
    fn signs_depend_on_generator() {
        let roots: Vec<u64> = (2..73).filter(|&g| is_primitive_root(g, 73)).collect();
        let mut choices = std::collections::HashSet::new();
        for &g in &roots {
            let reps = quad_representations(73).unwrap();
            let table = cyclotomic_numbers(73, 8, g).unwrap();
            let case = OcticCase::of(73).unwrap();
            let matching: Vec<(bool, bool)> = [(true, true), (true, false), (false, true), (false, false)]
                .into_iter()
                .filter(|&(yp, bp)| {
                    octic_closed_form(73, &reps.with_signs(yp, bp, g), case)
                        .is_ok_and(|c| c.numbers == table.numbers)
                })
                .collect();
            assert_eq!(matching.len(), 1, "g = {g}");
            choices.insert(matching[0]);
        }
        assert!(choices.len() > 1);
    }

    #[test]
    fn ds_test() {
        assert_eq!(octic_ds_test(73).unwrap(), Some(DsParams { v: 73, k: 9, lambda: 1 }));
        assert_eq!(octic_ds_test(41).unwrap(), None);
        assert_eq!(octic_ds_test(17).unwrap(), None);
        let big = octic_ds_test(104_411_704_393).unwrap().unwrap();
        assert_eq!(big.k, 13_051_463_049);
    }

    #[test]
    fn type_classification() {
        let ads = |v, k, l, t| Some(AdsParams::new(v, k, l, t));
        let lim = DEFAULT_VERIFY_LIMIT;
        assert_eq!(classify_type_o(17, lim).unwrap().ads, ads(17, 2, 0, 14));
        assert_eq!(classify_type_o(41, lim).unwrap().ads, ads(41, 5, 0, 20));
        assert_eq!(classify_type_o0(41, lim).unwrap().ads, ads(41, 6, 0, 10));
        assert_eq!(classify_type_o0(73, lim).unwrap().ads, ads(73, 10, 1, 54));
        assert_eq!(classify_type_o(73, lim).unwrap().ads, None);
        let big = classify_type_o(26041, lim).unwrap();
        assert!(big.verified);
        assert_eq!(big.ads, ads(26041, 3255, 406, 6510));
        let unverified = classify_type_o(660_279_756_217, lim).unwrap();
        assert!(!unverified.verified);
        assert!(unverified.ads.is_some());
    }

    #[test]
    fn class_representatives_match_full_profile() {
        for p in [73u64, 89, 97, 113, 137, 193, 233, 241, 257, 281] {
            for zero in [false, true] {
                let members = {
                    let mut m = crate::families::power_residues(p, 8).unwrap();
                    if zero {
                        m.insert(0, 0);
                    }
                    m
                };
                let full = classify(&Subset::cyclic(p, &members).unwrap());
                assert_eq!(octic_set_classification(p, zero).unwrap(), full);
            }
        }
    }

    #[test]
    fn scan_small() {
        let rows = scan(30_000, DEFAULT_VERIFY_LIMIT).unwrap();
        let o: Vec<u64> = rows.iter().filter(|r| r.type_o.is_some()).map(|r| r.p).collect();
        let o0: Vec<u64> = rows.iter().filter(|r| r.type_o0.is_some()).map(|r| r.p).collect();
        let ds: Vec<u64> = rows.iter().filter(|r| r.ds.is_some()).map(|r| r.p).collect();
        assert_eq!(o, vec![17, 41, 26041]);
        assert_eq!(o0, vec![41, 73]);
        assert_eq!(ds, vec![73]);
    }

    /// Every prime 1 mod 8 below 10⁶; `cargo test -- --ignored`.
    #[test]
    #[ignore]
    fn characterization_matches_sets_to_1e6() {
        let rows = scan(1_000_000, DEFAULT_VERIFY_LIMIT).unwrap();
        let o: Vec<u64> = rows.iter().filter(|r| r.type_o.is_some()).map(|r| r.p).collect();
        assert_eq!(o, vec![17, 41, 26041]);
    }

    fn rows(case: &str, target: OcticTarget) -> Vec<(i64, i64, i64)> {
        solve_octic_systems(case.parse().unwrap(), target)
            .into_iter()
            .filter(|r| r.prime.is_none())
            .map(|r| (r.a, r.x, r.norm))
            .collect()
    }

    #[test]
    fn solver_reproduces_tables() {
        let mut t3 = rows("9q", OcticTarget::O);
        t3.sort();
        let mut want3 = vec![(-7, 21, 196), (9, -11, 20), (1, 13, 84), (1, -19, 180), (-7, 5, -12), (9, -27, 324)];
        want3.sort();
        assert_eq!(t3, want3);
        let mut t4 = rows("9q", OcticTarget::O0);
        t4.sort();
        let mut want4 = vec![(-15, 45, 900), (1, 13, 84), (-7, 37, 660), (-7, 5, -12), (-15, 29, 308), (1, -3, 4)];
        want4.sort();
        assert_eq!(t4, want4);
        for r in solve_octic_systems(OcticCase::ALL[2], OcticTarget::O) {
            assert_eq!(2 * r.norm, r.x * r.x - r.a * r.a);
        }
    }

    #[test]
    fn solver_isolated_primes() {
        let primes = |c: &str, t| -> Vec<u64> {
            let mut v: Vec<u64> = solve_octic_systems(c.parse().unwrap(), t)
                .into_iter()
                .filter_map(|r| r.prime)
                .collect();
            v.sort();
            v.dedup();
            v
        };
        assert_eq!(primes("1n", OcticTarget::O), vec![17]);
        assert_eq!(primes("9n", OcticTarget::O), vec![41]);
        assert_eq!(primes("9n", OcticTarget::O0), vec![41]);
        assert!(primes("1q", OcticTarget::O).is_empty());
        assert!(primes("1q", OcticTarget::O0).is_empty());
        assert!(primes("1n", OcticTarget::O0).is_empty());
    }

    #[test]
    fn viable_families() {
        let viable3: Vec<i64> = rows("9q", OcticTarget::O)
            .into_iter()
            .filter(|&(a, _, n)| family_viable(a, n))
            .map(|(_, _, n)| n)
            .collect();
        assert_eq!(viable3, vec![196]);
        let viable4: Vec<i64> = rows("9q", OcticTarget::O0)
            .into_iter()
            .filter(|&(a, _, n)| family_viable(a, n))
            .map(|(_, _, n)| n)
            .collect();
        assert_eq!(viable4, vec![4]);
    }

    #[test]
    fn norm_orbits() {
        assert_eq!(norm_seeds(4), vec![(2, 0)]);
        let mut s196 = norm_seeds(196);
        s196.sort();
        assert_eq!(s196, vec![(14, 0), (18, -8), (18, 8)]);
        assert!(norm_seeds(-12).is_empty());
        let sols = enumerate_norm_solutions(4, 1, 10).unwrap();
        assert_eq!((sols[1].b.clone(), sols[1].y.clone()), (BigInt::from(6), BigInt::from(4)));
        let primes = norm_primes(4, 1, 10).unwrap();
        assert_eq!(primes[..2], [BigUint::from(73u32), BigUint::from(104_411_704_393u64)]);
        let p196 = norm_primes(196, -7, 30).unwrap();
        assert!(p196.contains(&BigUint::from(26041u32)));
        assert!(p196.contains(&BigUint::from(660_279_756_217u64)));
        assert!(enumerate_norm_solutions(-12, -7, 10).unwrap().is_empty());
        assert!(enumerate_norm_solutions(0, 1, 10).is_err());
    }

    #[test]
    fn norm_solution_json() {
        let s = &enumerate_norm_solutions(4, 1, 8).unwrap()[7];
        let json = serde_json::to_string(s).unwrap();
        assert!(json.contains("\"b\":\"228486\""));
        assert_eq!(&serde_json::from_str::<NormSolution>(&json).unwrap(), s);
    }
}
