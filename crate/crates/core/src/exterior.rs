//! Sparse exterior algebra `Λ•(ℤⁿ)` with arbitrary-precision coefficients.
//!
//! A basis monomial is a bitmask: bit `i` set means generator `e_i` is a
//! factor. Monomials are written in increasing generator order, so
//! `e_i ∧ e_j` with `i > j` is stored as `-e_j e_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Int, IntMatrix, RatMatrix};

pub const MAX_RANK: u32 = 64;

/// Sign applied to the top coefficient under integration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn from_sign(s: i32) -> Self {
        if s < 0 {
            Orientation::Negative
        } else {
            Orientation::Positive
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Orientation::Negative
    }
}

impl Mul for Orientation {
    type Output = Orientation;
    fn mul(self, rhs: Orientation) -> Orientation {
        Orientation::from_sign(self.sign() * rhs.sign())
    }
}

/// Mask with the lowest `rank` bits set.
pub fn full_mask(rank: u32) -> u64 {
    if rank >= 64 {
        u64::MAX
    } else {
        (1u64 << rank) - 1
    }
}

/// Indices of the set bits of `mask`, ascending.
pub fn mask_generators(mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros());
        m &= m - 1;
    }
    out
}

pub fn generators_mask(generators: &[u32]) -> u64 {
    generators.iter().fold(0, |m, &g| m | (1u64 << g))
}

/// True if `e_a ∧ e_b = -e_{a|b}` (the masks must be disjoint).
///
/// Counts pairs `i ∈ a`, `j ∈ b` with `i > j`.
pub fn wedge_sign_negative(a: u64, b: u64) -> bool {
    let mut parity = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = u64::MAX.checked_shl(j + 1).unwrap_or(0);
        parity ^= (a & above).count_ones() & 1;
    }
    parity == 1
}

/// An element of `Λ•(ℤ^rank)`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector {
    rank: u32,
    terms: BTreeMap<u64, Int>,
}

impl Multivector {
    /// Panics if `rank > 64`; use [`Multivector::try_zero`] for a checked version.
    pub fn zero(rank: u32) -> Self {
        Self::try_zero(rank).expect("rank exceeds 64")
    }

    pub fn try_zero(rank: u32) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(Error::RankTooLarge(rank));
        }
        Ok(Multivector {
            rank,
            terms: BTreeMap::new(),
        })
    }

    pub fn scalar(rank: u32, c: impl Into<Int>) -> Self {
        Self::monomial(rank, 0, c)
    }

    pub fn one(rank: u32) -> Self {
        Self::scalar(rank, 1)
    }

    /// The degree-one generator `e_i`.
    pub fn generator(rank: u32, i: u32) -> Self {
        assert!(i < rank, "generator index out of range");
        Self::monomial(rank, 1u64 << i, 1)
    }

    /// Panics if `mask` has bits at or above `rank`.
    pub fn monomial(rank: u32, mask: u64, c: impl Into<Int>) -> Self {
        let mut x = Self::zero(rank);
        assert_eq!(mask & !full_mask(rank), 0, "mask exceeds rank");
        x.add_term(mask, c.into());
        x
    }

    /// The top monomial `e_0 e_1 … e_{rank-1}` with coefficient `c`.
    pub fn top(rank: u32, c: impl Into<Int>) -> Self {
        Self::monomial(rank, full_mask(rank), c)
    }

    /// Sums repeated masks and drops zeros.
    pub fn from_terms(rank: u32, terms: impl IntoIterator<Item = (u64, Int)>) -> Result<Self> {
        let mut x = Self::try_zero(rank)?;
        let full = full_mask(rank);
        for (mask, c) in terms {
            if mask & !full != 0 {
                return Err(Error::Parse(format!(
                    "monomial {:?} does not fit in rank {}",
                    mask_generators(mask),
                    rank
                )));
            }
            x.add_term(mask, c);
        }
        Ok(x)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Int)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coefficient(&self, mask: u64) -> Int {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mask: u64, c: Int) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, -c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Int) -> Self {
        if s.is_zero() {
            return Self::zero(self.rank);
        }
        Multivector {
            rank: self.rank,
            terms: self.terms.iter().map(|(&m, c)| (m, c * s)).collect(),
        }
    }

    pub fn scale_i64(&self, s: i64) -> Self {
        self.scale(&BigInt::from(s))
    }

    /// Multiplication by `(-1)^k`.
    pub fn signed(&self, k: u32) -> Self {
        if k.is_multiple_of(2) {
            self.clone()
        } else {
            -self
        }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let c = ca * cb;
                if wedge_sign_negative(a, b) {
                    out.add_term(a | b, -c);
                } else {
                    out.add_term(a | b, c);
                }
            }
        }
        Ok(out)
    }

    /// `x ∧ x ∧ … ∧ x` (`k` factors); `x^0 = 1`.
    pub fn cup_power(&self, k: u32) -> Self {
        let mut p = Self::one(self.rank);
        for _ in 0..k {
            p = p.wedge(self).expect("same rank");
            if p.is_zero() {
                break;
            }
        }
        p
    }

    pub fn graded_component(&self, k: u32) -> Self {
        Multivector {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() == k)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    /// Degrees that occur, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.count_ones()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The common degree of all terms; `None` for inhomogeneous classes.
    /// The zero class counts as homogeneous of every degree and yields `Some(0)`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        match self.degrees().as_slice() {
            [] => Some(0),
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Keeps only terms of even degree.
    pub fn even_part(&self) -> Self {
        Multivector {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() % 2 == 0)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    /// Orientation sign times the coefficient of the top monomial.
    pub fn integrate(&self, o: Orientation) -> Int {
        let c = self.coefficient(full_mask(self.rank));
        if o.is_negative() {
            -c
        } else {
            c
        }
    }

    /// `y` with `n·y = self`.
    pub fn divide_exact(&self, n: &Int) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut terms = BTreeMap::new();
        for (&m, c) in &self.terms {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return Err(Error::NonDivisible {
                    mask: m,
                    generators: mask_generators(m),
                    coefficient: c.clone(),
                    divisor: n.clone(),
                });
            }
            terms.insert(m, q);
        }
        Ok(Multivector {
            rank: self.rank,
            terms,
        })
    }

    /// `x^k / k!`, failing with the first non-divisible term.
    pub fn divided_power(&self, k: u32) -> Result<Self> {
        let mut p = Self::one(self.rank);
        for j in 1..=k {
            p = p.wedge(self)?.divide_exact(&BigInt::from(j))?;
            if p.is_zero() {
                break;
            }
        }
        Ok(p)
    }

    /// All divided powers `x^k / k!` up to the first vanishing one.
    ///
    /// Computed as `p_k = (p_{k-1} ∧ x) / k`, which as rational classes equals
    /// `x^k / k!`; a failed division therefore witnesses non-integrality of
    /// that very term.
    pub fn divided_powers(&self) -> Result<Vec<Self>> {
        let mut out = vec![Self::one(self.rank)];
        for k in 1..=self.rank + 1 {
            let p = out.last().expect("nonempty").wedge(self)?;
            if p.is_zero() {
                break;
            }
            out.push(p.divide_exact(&BigInt::from(k))?);
        }
        Ok(out)
    }

    /// `Σ_k x^k / k!` for nilpotent `x`.
    pub fn cup_exponential(&self) -> Result<Self> {
        if self.terms.contains_key(&0) {
            return Err(Error::NotNilpotent);
        }
        let mut sum = Self::zero(self.rank);
        for p in self.divided_powers()? {
            sum = sum.try_add(&p)?;
        }
        Ok(sum)
    }

    /// Image under the algebra map extending the integer matrix `m`:
    /// generator `j` of the source maps to `Σ_i m[i][j] e_i`.
    ///
    /// `m` has `rank` columns; the result has rank `m.rows()`.
    pub fn apply_integer(&self, m: &IntMatrix) -> Result<Self> {
        if m.cols() != self.rank as usize {
            return Err(Error::ShapeMismatch(format!(
                "linear map has {} columns, class has rank {}",
                m.cols(),
                self.rank
            )));
        }
        let target = m.rows() as u32;
        if target > MAX_RANK {
            return Err(Error::RankTooLarge(target));
        }
        let columns: Vec<Multivector> = (0..m.cols())
            .map(|j| {
                let mut v = Multivector::zero(target);
                for i in 0..m.rows() {
                    v.add_term(1u64 << i, m[(i, j)].clone());
                }
                v
            })
            .collect();
        let mut out = Multivector::zero(target);
        for (&mask, c) in &self.terms {
            let mut img = Multivector::scalar(target, c.clone());
            for j in mask_generators(mask) {
                img = img.wedge(&columns[j as usize])?;
                if img.is_zero() {
                    break;
                }
            }
            for (&t, v) in &img.terms {
                out.add_term(t, v.clone());
            }
        }
        Ok(out)
    }

    /// Rational version of [`Multivector::apply_integer`]; fails with
    /// `NonIntegralResult` if a fractional coefficient survives.
    pub fn apply_linear(&self, m: &RatMatrix) -> Result<Self> {
        let (num, d) = m.clear_denominators();
        let raw = self.apply_integer(&num)?;
        if d.is_one() {
            return Ok(raw);
        }
        let mut out = Multivector::zero(raw.rank);
        for (&mask, c) in &raw.terms {
            let denom = num_traits::pow(d.clone(), mask.count_ones() as usize);
            let (q, r) = c.div_rem(&denom);
            if !r.is_zero() {
                return Err(Error::NonIntegralResult {
                    generators: mask_generators(mask),
                });
            }
            out.add_term(mask, q);
        }
        Ok(out)
    }

    /// Largest absolute coefficient, zero for the zero class.
    pub fn max_abs_coefficient(&self) -> Int {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Standard basis of `Λ^k`: all masks of popcount `k` in increasing order.
    pub fn basis_masks(rank: u32, k: u32) -> Vec<u64> {
        let mut out = Vec::new();
        if k > rank {
            return out;
        }
        if k == 0 {
            return vec![0];
        }
        // Gosper's hack enumerates k-subsets in increasing numeric order.
        let mut m: u64 = full_mask(k);
        let limit = full_mask(rank);
        loop {
            out.push(m);
            if m == limit & (u64::MAX << (rank - k)) || rank == k {
                break;
            }
            let c = m & m.wrapping_neg();
            let r = m + c;
            m = (((r ^ m) >> 2) / c) | r;
        }
        out
    }

    /// Coordinates of the degree-`k` part in the order of [`Multivector::basis_masks`].
    pub fn coordinates(&self, basis: &[u64]) -> Vec<Int> {
        basis.iter().map(|&m| self.coefficient(m)).collect()
    }

    pub fn from_coordinates(rank: u32, basis: &[u64], coords: &[Int]) -> Self {
        let mut x = Multivector::zero(rank);
        for (&m, c) in basis.iter().zip(coords) {
            x.add_term(m, c.clone());
        }
        x
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[rank {}]({})", self.rank, self)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m == 0 {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            let names: Vec<String> = mask_generators(m).iter().map(|g| format!("e{g}")).collect();
            write!(f, "{}", names.join("^"))?;
        }
        Ok(())
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    /// Panics on rank mismatch; see [`Multivector::try_add`].
    fn add(self, rhs: &Multivector) -> Multivector {
        self.try_add(rhs).expect("rank mismatch in addition")
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in addition");
        for (&m, c) in &rhs.terms {
            self.add_term(m, c.clone());
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.try_sub(rhs).expect("rank mismatch in subtraction")
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        Multivector {
            rank: self.rank,
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}
