//! Young diagrams, signatures, and the purely combinatorial dimension
//! quantities attached to them.

use crate::scalar::{factorial, rat_int, Int, Nat, Rat};
use crate::symfunc::ThomaConePoint;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// A Young diagram, stored as its weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// The empty diagram.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "zero part in {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    /// Build from parts that may contain trailing zeros (e.g. a nonnegative
    /// signature read as a diagram).
    pub fn from_parts_with_zeros(parts: &[u32]) -> Result<Self> {
        let trimmed: Vec<u32> = parts.iter().copied().take_while(|&p| p > 0).collect();
        if parts[trimmed.len()..].iter().any(|&p| p != 0) {
            return Err(Error::InvalidPartition(format!(
                "zero before a positive part in {parts:?}"
            )));
        }
        Partition::new(trimmed)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of boxes.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Row length with zero padding beyond the last row (1-indexed rows are
    /// the caller's business; this takes a 0-based index).
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Conjugate (transposed) diagram.
    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0] as usize;
        let mut conj = vec![0u32; cols];
        for (j, c) in conj.iter_mut().enumerate() {
            *c = self.parts.iter().filter(|&&p| p as usize > j).count() as u32;
        }
        Partition { parts: conj }
    }

    /// Containment of diagrams: `self_i <= other_i` for all rows.
    pub fn contained_in(&self, other: &Partition) -> bool {
        (0..self.len()).all(|i| self.part(i) <= other.part(i))
    }

    /// Diagrams obtained by removing one box.
    pub fn down_covers(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            if self.part(i) > self.part(i + 1) {
                let mut parts = self.parts.clone();
                parts[i] -= 1;
                if parts[i] == 0 {
                    parts.pop();
                }
                out.push(Partition { parts });
            }
        }
        out
    }

    /// Diagrams obtained by adding one box.
    pub fn up_covers(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..=self.len() {
            let cur = self.part(i);
            let above = if i == 0 { u32::MAX } else { self.part(i - 1) };
            if cur < above {
                let mut parts = self.parts.clone();
                if i == parts.len() {
                    parts.push(1);
                } else {
                    parts[i] += 1;
                }
                out.push(Partition { parts });
            }
        }
        out
    }

    /// Hook length of box `(i, j)` (0-based).
    fn hook(&self, conj: &Partition, i: usize, j: usize) -> u64 {
        (self.part(i) as u64 - j as u64) + (conj.part(j) as u64 - i as u64) - 1
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", display_parts(&self.parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            write!(f, "()")
        } else {
            write!(f, "({})", display_parts(&self.parts))
        }
    }
}

fn display_parts(parts: &[u32]) -> String {
    parts
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

/// Order used everywhere rows of kernels are emitted: by size first, then by
/// decreasing lexicographic parts, matching the enumeration order.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A signature: a weakly decreasing integer vector of length `N >= 1`
/// (negative coordinates allowed).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    coords: Vec<i64>,
}

impl Signature {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidSignature("empty coordinate vector".into()));
        }
        if coords.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSignature(format!(
                "coordinates not weakly decreasing: {coords:?}"
            )));
        }
        Ok(Signature { coords })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// The level `N`.
    pub fn level(&self) -> usize {
        self.coords.len()
    }

    pub fn is_nonnegative(&self) -> bool {
        *self.coords.last().unwrap() >= 0
    }

    /// A nonnegative signature read as a Young diagram (drops zero rows).
    pub fn to_partition(&self) -> Result<Partition> {
        if !self.is_nonnegative() {
            return Err(Error::InvalidSignature(format!(
                "negative coordinate in {self}"
            )));
        }
        Partition::from_parts_with_zeros(
            &self
                .coords
                .iter()
                .map(|&c| c as u32)
                .collect::<Vec<u32>>(),
        )
    }

    /// Embed a diagram at level `N` (requires `len(lambda) <= N`).
    pub fn from_partition(lambda: &Partition, n: usize) -> Result<Self> {
        if lambda.len() > n {
            return Err(Error::LevelMismatch(format!(
                "diagram {lambda} has {} rows, level {n}",
                lambda.len()
            )));
        }
        let mut coords: Vec<i64> = lambda.parts().iter().map(|&p| p as i64).collect();
        coords.resize(n, 0);
        Ok(Signature { coords })
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]", self.coords)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "[{body}]")
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Signature", 1)?;
        st.serialize_field("coords", &self.coords)?;
        st.end()
    }
}

impl Ord for Signature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| other.coords.cmp(&self.coords))
    }
}

impl PartialOrd for Signature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Modified Frobenius coordinates of a diagram. Each entry is a half-integer
/// `k + 1/2`; the doubled values `2a_i`, `2b_i` are stored to stay integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCoords {
    /// Doubled arm coordinates `2a_i`, strictly decreasing odd integers.
    pub a2: Vec<u64>,
    /// Doubled leg coordinates `2b_i`.
    pub b2: Vec<u64>,
}

impl FrobeniusCoords {
    /// Number of diagonal boxes.
    pub fn depth(&self) -> usize {
        self.a2.len()
    }

    pub fn a_rationals(&self) -> Vec<Rat> {
        self.a2.iter().map(|&v| Rat::new(Int::from(v), Int::from(2))).collect()
    }

    pub fn b_rationals(&self) -> Vec<Rat> {
        self.b2.iter().map(|&v| Rat::new(Int::from(v), Int::from(2))).collect()
    }
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn enumerate_partitions(n: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    gen_partitions(n, n, &mut stack, &mut out);
    out
}

fn gen_partitions(remaining: u64, max_part: u64, stack: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: stack.clone(),
        });
        return;
    }
    let hi = remaining.min(max_part);
    for first in (1..=hi).rev() {
        stack.push(first as u32);
        gen_partitions(remaining - first, first, stack, out);
        stack.pop();
    }
}

/// All subdiagrams `mu` of `nu` with `|mu| = m`, in decreasing lexicographic
/// order.
pub fn subdiagrams_of_size(nu: &Partition, m: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    gen_subdiagrams(nu, 0, m, u32::MAX, &mut stack, &mut out);
    out
}

fn gen_subdiagrams(
    nu: &Partition,
    row: usize,
    remaining: u64,
    upper: u32,
    stack: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition {
            parts: stack.clone(),
        });
        return;
    }
    if row >= nu.len() {
        return;
    }
    // Remaining capacity below this row bounds what must still be placed.
    let hi = nu.part(row).min(upper).min(remaining.min(u32::MAX as u64) as u32);
    for p in (1..=hi).rev() {
        // Feasibility: rows row+1.. can hold at most sum(min(nu_k, p)).
        let cap: u64 = (row + 1..nu.len())
            .map(|k| nu.part(k).min(p) as u64)
            .sum();
        if remaining - p as u64 > cap {
            continue;
        }
        stack.push(p);
        gen_subdiagrams(nu, row + 1, remaining - p as u64, p, stack, out);
        stack.pop();
    }
}

/// `mu` is covered by `nu`: containment with exactly one extra box.
pub fn covers(mu: &Partition, nu: &Partition) -> bool {
    mu.contained_in(nu) && nu.size() == mu.size() + 1
}

/// Containment of diagrams.
pub fn contains(mu: &Partition, nu: &Partition) -> bool {
    mu.contained_in(nu)
}

/// `nu/mu` is a horizontal strip: the interlacing `nu_{i+1} <= mu_i <= nu_i`.
pub fn is_horizontal_strip(mu: &Partition, nu: &Partition) -> bool {
    let rows = nu.len().max(mu.len());
    (0..rows).all(|i| nu.part(i + 1) <= mu.part(i) && mu.part(i) <= nu.part(i))
}

/// Number of standard tableaux of shape `lambda`, by the hook formula.
pub fn dim_standard(lambda: &Partition) -> Nat {
    let n = lambda.size();
    let conj = lambda.conjugate();
    let mut denom = Nat::one();
    for i in 0..lambda.len() {
        for j in 0..lambda.part(i) as usize {
            denom *= Nat::from(lambda.hook(&conj, i, j));
        }
    }
    factorial(n) / denom
}

/// Number of standard tableaux of skew shape `nu/mu` (0 when `mu` is not
/// contained in `nu`), by the factorial determinant
/// `(n-m)! det[1/(nu_i - mu_j - i + j)!]`.
pub fn dim_skew(mu: &Partition, nu: &Partition) -> Nat {
    if !mu.contained_in(nu) {
        return Nat::zero();
    }
    let l = nu.len();
    if l == 0 {
        return Nat::one();
    }
    let mut mat = Vec::with_capacity(l);
    for i in 0..l {
        let mut row = Vec::with_capacity(l);
        for j in 0..l {
            let e = nu.part(i) as i64 - mu.part(j) as i64 - i as i64 + j as i64;
            row.push(if e < 0 {
                Rat::zero()
            } else {
                Rat::new(Int::one(), Int::from(factorial(e as u64)))
            });
        }
        mat.push(row);
    }
    let det = crate::scalar::det_rat(mat);
    let scaled = det * Rat::from_integer(Int::from(factorial(nu.size() - mu.size())));
    debug_assert!(scaled.is_integer() && !scaled.is_negative());
    scaled.to_integer().to_biguint().unwrap_or_else(Nat::zero)
}

/// Weyl dimension of the signature `[lambda, N]`:
/// the product over `i < j <= N` of `(lambda_i - lambda_j - i + j)/(j - i)`.
pub fn weyl_dim(lambda: &Partition, n: usize) -> Result<Nat> {
    if lambda.len() > n {
        return Err(Error::LevelMismatch(format!(
            "diagram {lambda} has {} rows > level {n}",
            lambda.len()
        )));
    }
    let mut num = Nat::one();
    let mut den = Nat::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= Nat::from(
                (lambda.part(i) as u64 + j as u64) - (lambda.part(j) as u64 + i as u64),
            );
            den *= Nat::from((j - i) as u64);
        }
    }
    Ok(num / den)
}

/// Weyl dimension of an arbitrary signature (negative coordinates allowed):
/// only coordinate differences enter, so the product is shift-invariant.
pub fn weyl_dim_signature(sigma: &Signature) -> Nat {
    let n = sigma.level();
    let c = sigma.coords();
    let mut num = Nat::one();
    let mut den = Nat::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= Nat::from((c[i] - c[j] + j as i64 - i as i64) as u64);
            den *= Nat::from((j - i) as u64);
        }
    }
    num / den
}

/// Weyl dimension through the hook-content product
/// `prod_{(i,j) in lambda} (N + j - i) / hook(i,j)`.
///
/// Linear in the number of boxes, so usable inside samplers where the level
/// `N` is large; cross-checked against [`weyl_dim`] in the tests.
pub fn weyl_dim_hook_content(lambda: &Partition, n: usize) -> Result<f64> {
    if lambda.len() > n {
        return Err(Error::LevelMismatch(format!(
            "diagram {lambda} has {} rows > level {n}",
            lambda.len()
        )));
    }
    let conj = lambda.conjugate();
    let mut acc = 1.0f64;
    for i in 0..lambda.len() {
        for j in 0..lambda.part(i) as usize {
            let content = n as f64 + j as f64 - i as f64;
            acc *= content / lambda.hook(&conj, i, j) as f64;
        }
    }
    Ok(acc)
}

/// Modified Frobenius coordinates of a diagram.
pub fn frobenius(lambda: &Partition) -> FrobeniusCoords {
    let conj = lambda.conjugate();
    let d = (0..lambda.len())
        .take_while(|&i| lambda.part(i) as usize > i)
        .count();
    let a2 = (0..d)
        .map(|i| 2 * (lambda.part(i) as u64 - i as u64) - 1)
        .collect();
    let b2 = (0..d)
        .map(|i| 2 * (conj.part(i) as u64 - i as u64) - 1)
        .collect();
    FrobeniusCoords { a2, b2 }
}

/// The embedding of a diagram into the Thoma cone:
/// `(a_1, ..., a_d; b_1, ..., b_d; |lambda|)`.
pub fn omega_of(lambda: &Partition) -> ThomaConePoint<Rat> {
    let fc = frobenius(lambda);
    ThomaConePoint::new(
        fc.a_rationals(),
        fc.b_rationals(),
        rat_int(lambda.size() as i64),
    )
    .expect("Frobenius coordinates always give a valid cone point")
}
