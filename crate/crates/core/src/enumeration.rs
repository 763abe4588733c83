//! The enumeration `alpha_1, alpha_2, ...` of degree-`m` algebraic numbers in
//! `[0, 1/2]`, grouped by height and sorted within each height.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::par::{map_slice, Exec};
use crate::poly::IntPolynomial;
use crate::polyenum::{enumerate_sk_with, DEFAULT_GRID_BUDGET};
use crate::realroots::{compare, isolate_in_unit_half, AlgebraicNumber, DyadicInterval};
use crate::rigor::elementary::cos_pi;
use crate::rigor::Ball;

/// Extra bits carried when evaluating `cos(pi alpha)`.
pub const Y_GUARD: u32 = 16;

#[derive(Clone, Debug)]
pub struct Enumeration {
    m: usize,
    items: Vec<AlgebraicNumber>,
    block_sizes: Vec<usize>,
    by_minpoly: HashMap<IntPolynomial, Vec<usize>>,
}

/// One exported item.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumRecord {
    pub index: usize,
    pub height: String,
    pub minpoly: IntPolynomial,
    pub lo: String,
    pub hi: String,
}

/// Sorts numbers with a fallible comparison (merge sort).
fn try_sort(mut v: Vec<AlgebraicNumber>) -> Result<Vec<AlgebraicNumber>> {
    if v.len() <= 1 {
        return Ok(v);
    }
    let right = v.split_off(v.len() / 2);
    let (left, right) = (try_sort(v)?, try_sort(right)?);
    let mut out = Vec::with_capacity(left.len() + right.len());
    let (mut l, mut r) = (left.into_iter().peekable(), right.into_iter().peekable());
    while let (Some(a), Some(b)) = (l.peek(), r.peek()) {
        match compare(a, b)? {
            Ordering::Greater => out.push(r.next().expect("peeked")),
            _ => out.push(l.next().expect("peeked")),
        }
    }
    out.extend(l);
    out.extend(r);
    Ok(out)
}

/// The sorted block `R_k`.
pub fn block(m: usize, k: u64, budget: u128, exec: Exec) -> Result<Vec<AlgebraicNumber>> {
    let polys = enumerate_sk_with(m, k, budget, exec)?;
    let roots: Vec<AlgebraicNumber> = map_slice(exec, &polys, isolate_in_unit_half)
        .into_iter()
        .flatten()
        .collect();
    try_sort(roots)
}

impl Enumeration {
    /// The shortest run of whole height blocks with at least `count` items.
    pub fn build(m: usize, count: usize) -> Result<Self> {
        Self::build_with(m, count, DEFAULT_GRID_BUDGET, Exec::default())
    }

    pub fn build_with(m: usize, count: usize, budget: u128, exec: Exec) -> Result<Self> {
        if m == 0 || count == 0 {
            return Err(Error::Precondition("build needs m >= 1 and count >= 1".into()));
        }
        let mut blocks = Vec::new();
        let mut total = 0;
        let mut k = 0u64;
        while total < count {
            k += 1;
            let b = block(m, k, budget, exec)?;
            total += b.len();
            blocks.push(b);
        }
        Ok(Self::from_blocks(m, blocks))
    }

    /// All items of height at most `max_height`; blocks are computed in parallel.
    pub fn build_to_height(m: usize, max_height: u64, exec: Exec) -> Result<Self> {
        if m == 0 || max_height == 0 {
            return Err(Error::Precondition("build needs m >= 1 and height >= 1".into()));
        }
        let heights: Vec<u64> = (1..=max_height).collect();
        let blocks = map_slice(exec, &heights, |&k| block(m, k, DEFAULT_GRID_BUDGET, exec))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_blocks(m, blocks))
    }

    fn from_blocks(m: usize, blocks: Vec<Vec<AlgebraicNumber>>) -> Self {
        let block_sizes = blocks.iter().map(Vec::len).collect();
        let items: Vec<AlgebraicNumber> = blocks.into_iter().flatten().collect();
        let mut by_minpoly: HashMap<IntPolynomial, Vec<usize>> = HashMap::new();
        for (i, a) in items.iter().enumerate() {
            by_minpoly.entry(a.minpoly().clone()).or_default().push(i);
        }
        Enumeration { m, items, block_sizes, by_minpoly }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[AlgebraicNumber] {
        &self.items
    }

    /// `l_k = |R_k|` for `k = 1..=max_height`.
    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn max_height(&self) -> u64 {
        self.block_sizes.len() as u64
    }

    /// `alpha_n`, 1-based.
    pub fn alpha(&self, n: usize) -> Result<&AlgebraicNumber> {
        if n == 0 || n > self.items.len() {
            return Err(Error::OutOfRange { index: n, len: self.items.len() });
        }
        Ok(&self.items[n - 1])
    }

    /// 1-based position of `a`, if it is enumerated.
    pub fn index_of(&self, a: &AlgebraicNumber) -> Result<Option<usize>> {
        let Some(candidates) = self.by_minpoly.get(a.minpoly()) else {
            return Ok(None);
        };
        for &i in candidates {
            if compare(&self.items[i], a)? == Ordering::Equal {
                return Ok(Some(i + 1));
            }
        }
        Ok(None)
    }

    /// Enclosure of `y_k = cos(pi alpha_k)` with radius at most `2^(-prec + Y_GUARD)`.
    pub fn y(&self, k: usize, prec: u32) -> Result<Ball> {
        let a = self.alpha(k)?;
        if prec < 32 {
            return Err(Error::Precondition("y needs at least 32 bits".into()));
        }
        Ok(cos_pi(&a.to_ball(prec + Y_GUARD), prec + Y_GUARD))
    }

    pub fn records(&self) -> Vec<EnumRecord> {
        self.items
            .iter()
            .enumerate()
            .map(|(i, a)| EnumRecord {
                index: i + 1,
                height: a.height().to_string(),
                minpoly: a.minpoly().clone(),
                lo: a.interval().lo.to_decimal_string(),
                hi: a.interval().hi.to_decimal_string(),
            })
            .collect()
    }

    /// Rebuilds an enumeration from exported records, checking every isolating
    /// interval, the block structure and the order within blocks.
    pub fn from_records(m: usize, records: &[EnumRecord]) -> Result<Self> {
        let mut blocks: Vec<Vec<AlgebraicNumber>> = Vec::new();
        for (i, r) in records.iter().enumerate() {
            if r.index != i + 1 {
                return Err(Error::Parse(format!("record {} has index {}", i + 1, r.index)));
            }
            if r.minpoly.degree() != m {
                return Err(Error::Parse(format!("record {} has degree {}", r.index, r.minpoly.degree())));
            }
            let lo: Dyadic = r.lo.parse()?;
            let hi: Dyadic = r.hi.parse()?;
            let a = AlgebraicNumber::new(r.minpoly.clone(), DyadicInterval::new(lo, hi)?)?;
            let h = a.height().to_usize().unwrap_or(usize::MAX);
            if r.height != a.height().to_string() {
                return Err(Error::Parse(format!("record {} height does not match its polynomial", r.index)));
            }
            if h < blocks.len() {
                return Err(Error::Parse(format!("record {} breaks the height order", r.index)));
            }
            while blocks.len() < h {
                blocks.push(Vec::new());
            }
            let blk = blocks.last_mut().expect("height >= 1");
            if let Some(prev) = blk.last() {
                if compare(prev, &a)? != Ordering::Less {
                    return Err(Error::Parse(format!("record {} breaks the value order", r.index)));
                }
            }
            blk.push(a);
        }
        Ok(Self::from_blocks(m, blocks))
    }

    /// The first `len` items, keeping block sizes consistent.
    pub fn prefix(&self, len: usize) -> Enumeration {
        let mut blocks = Vec::new();
        let mut taken = 0;
        for &s in &self.block_sizes {
            if taken >= len {
                break;
            }
            let end = (taken + s).min(len);
            blocks.push(self.items[taken..end].to_vec());
            taken = end;
        }
        Self::from_blocks(self.m, blocks)
    }
}

/// `(lower, upper)` with `lower <= (1/2)(n/(m+1))^(1/(m+1)) - 2` a rational
/// lower bound and `upper = 2n + 7`.
pub fn index_height_bounds(n: u64, m: usize) -> (BigRational, BigInt) {
    const BITS: u32 = 32;
    let e = m as u32 + 1;
    // floor((n 2^(BITS e) / (m+1))^(1/e)) / 2^BITS <= (n/(m+1))^(1/e)
    let scaled = (BigInt::from(n) << (BITS * e) as usize) / BigInt::from(m + 1);
    let root = num_integer::Roots::nth_root(&scaled, e);
    let lower = BigRational::new(root, BigInt::one() << BITS as usize) / BigInt::from(2)
        - BigRational::from_integer(BigInt::from(2));
    (lower, BigInt::from(2 * n + 7))
}

/// A prefix position where a height estimate fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightViolation {
    pub index: usize,
    pub height: String,
    pub bound: &'static str,
}

/// Checks both estimates for every item; violations are reported, not asserted.
pub fn check_height_bounds(e: &Enumeration) -> Vec<HeightViolation> {
    let mut out = Vec::new();
    for (i, a) in e.items().iter().enumerate() {
        let n = i as u64 + 1;
        let h = a.height();
        let (lower, upper) = index_height_bounds(n, e.m());
        if BigRational::from_integer(h.clone()) < lower {
            out.push(HeightViolation { index: i + 1, height: h.to_string(), bound: "lower" });
        }
        if h >= upper {
            out.push(HeightViolation { index: i + 1, height: h.to_string(), bound: "upper" });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn first_six_rationals() {
        let e = Enumeration::build(1, 6).unwrap();
        let want = [q(0, 1), q(1, 2), q(1, 3), q(1, 4), q(1, 5), q(2, 5)];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(e.alpha(n + 1).unwrap().as_rational().as_ref(), Some(w));
        }
        assert_eq!(e.alpha(1).unwrap().height(), 1.into());
        assert_eq!(e.alpha(2).unwrap().height(), 2.into());
        assert!(e.alpha(0).is_err());
        assert!(e.alpha(e.len() + 1).is_err());
    }

    #[test]
    fn quadratic_first_block_empty() {
        let e = Enumeration::build(2, 1).unwrap();
        assert_eq!(e.block_sizes()[0], 0);
        assert!(e.alpha(1).unwrap().height() > 1.into());
    }

    #[test]
    fn y_values() {
        let e = Enumeration::build(1, 4).unwrap();
        assert!(e.y(1, 64).unwrap().contains_rational(&q(1, 1)));
        assert!(e.y(2, 64).unwrap().contains_rational(&q(0, 1)));
        let y4 = e.y(4, 64).unwrap();
        assert!((y4.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(y4.rad() <= &Dyadic::pow2(-64 + Y_GUARD as i64));
    }

    #[test]
    fn bounds_examples() {
        let (lo, up) = index_height_bounds(5, 1);
        assert!(lo > q(-121, 100) && lo < q(-120, 100));
        assert_eq!(up, 17.into());
        assert_eq!(index_height_bounds(1, 1).1, 9.into());
        let e = Enumeration::build(1, 50).unwrap();
        assert!(check_height_bounds(&e).is_empty());
    }

    #[test]
    fn records_round_trip() {
        let e = Enumeration::build(2, 10).unwrap();
        let back = Enumeration::from_records(2, &e.records()).unwrap();
        assert_eq!(back.records(), e.records());
        assert_eq!(back.block_sizes(), e.block_sizes());
    }

    #[test]
    fn records_reject_tampering() {
        let e = Enumeration::build(1, 6).unwrap();
        let mut r = e.records();
        r.swap(2, 3);
        r[2].index = 3;
        r[3].index = 4;
        assert!(Enumeration::from_records(1, &r).is_err());
    }

    #[test]
    fn index_lookup() {
        let e = Enumeration::build(1, 12).unwrap();
        let a = AlgebraicNumber::from_rational(&q(1, 4));
        assert_eq!(e.index_of(&a).unwrap(), Some(4));
        let b = AlgebraicNumber::from_rational(&q(1, 97));
        assert_eq!(e.index_of(&b).unwrap(), None);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let a = Enumeration::build_with(2, 30, DEFAULT_GRID_BUDGET, Exec::Sequential).unwrap();
        let b = Enumeration::build_with(2, 30, DEFAULT_GRID_BUDGET, Exec::Parallel).unwrap();
        assert_eq!(a.records(), b.records());
        let c = Enumeration::build_to_height(2, a.max_height(), Exec::Parallel).unwrap();
        assert_eq!(a.records(), c.records());
    }
}
