//! Real root isolation by Sturm sequences and exact algebraic numbers given by
//! a minimal polynomial and an isolating dyadic interval.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::Signed;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::rigor::Ball;

/// Default bound on bisection steps in [`compare`].
pub const DEFAULT_COMPARE_CAP: u32 = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if lo > hi {
            return Err(Error::Precondition(format!("interval [{lo}, {hi}] is empty")));
        }
        Ok(DyadicInterval { lo, hi })
    }

    pub fn point(x: Dyadic) -> Self {
        DyadicInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.midpoint(&self.hi)
    }

    pub fn intersect(&self, other: &DyadicInterval) -> Option<DyadicInterval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(DyadicInterval { lo, hi })
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Sturm sequence of a squarefree polynomial, with every member made primitive.
pub fn sturm_chain(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut chain = vec![p.clone()];
    if p.degree() == 0 {
        return chain;
    }
    chain.push(p.derivative());
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.degree() == 0 {
            break;
        }
        let mut r = a.pseudo_rem(b);
        // pseudo_rem multiplies by lc(b)^(da - db + 1); undo a negative factor
        let steps = a.degree() - b.degree() + 1;
        if b.leading().is_negative() && steps % 2 == 1 {
            r = r.neg();
        }
        if r.is_zero() {
            break;
        }
        let r = r.neg();
        let c = r.content().expect("nonzero remainder");
        chain.push(IntPolynomial::new(
            r.coeffs().iter().map(|x| x / &c).collect(),
        ));
    }
    chain
}

fn variations(chain: &[IntPolynomial], x: &Dyadic) -> usize {
    let mut last = Sign::NoSign;
    let mut count = 0;
    for s in chain {
        let v = s.sign_at_dyadic(x);
        if v == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && v != last {
            count += 1;
        }
        last = v;
    }
    count
}

/// Number of distinct real roots of the squarefree `p` in the closed interval
/// `[lo, hi]`. The Sturm difference counts `(lo, hi]`; a root at `lo` is
/// detected by exact evaluation.
pub fn sturm_count(p: &IntPolynomial, iv: &DyadicInterval) -> usize {
    let at_lo = usize::from(p.sign_at_dyadic(&iv.lo) == Sign::NoSign);
    if iv.is_point() || p.degree() == 0 {
        return at_lo;
    }
    let chain = sturm_chain(p);
    sturm_count_with(&chain, iv) + at_lo
}

/// Roots in the half-open `(lo, hi]` for a precomputed chain.
fn sturm_count_with(chain: &[IntPolynomial], iv: &DyadicInterval) -> usize {
    variations(chain, &iv.lo).saturating_sub(variations(chain, &iv.hi))
}

/// A real algebraic number: an irreducible, primitive, sign-normalized minimal
/// polynomial and an interval holding exactly one of its roots. A non-point
/// interval has the root strictly inside.
#[derive(Clone)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    interval: DyadicInterval,
}

impl AlgebraicNumber {
    /// Checks the isolation invariant with a Sturm count.
    pub fn new(minpoly: IntPolynomial, interval: DyadicInterval) -> Result<Self> {
        if minpoly.degree() == 0 || !minpoly.is_normalized() {
            return Err(Error::Precondition(format!(
                "{minpoly} is not a sign-normalized primitive polynomial of degree >= 1"
            )));
        }
        if sturm_count(&minpoly, &interval) != 1 {
            return Err(Error::Precondition(format!(
                "{minpoly} does not have exactly one root in {interval:?}"
            )));
        }
        if !interval.is_point()
            && (minpoly.sign_at_dyadic(&interval.lo) == Sign::NoSign
                || minpoly.sign_at_dyadic(&interval.hi) == Sign::NoSign)
        {
            return Err(Error::Precondition(format!(
                "root of {minpoly} sits on an endpoint of {interval:?}"
            )));
        }
        Ok(AlgebraicNumber { minpoly, interval })
    }

    /// The rational `r` with minimal polynomial `den*x - num`.
    pub fn from_rational(r: &BigRational) -> Self {
        let minpoly = IntPolynomial::new(vec![-r.numer().clone(), r.denom().clone()]);
        let interval = match Dyadic::try_from_rational(r) {
            Some(d) => DyadicInterval::point(d),
            None => {
                let mut bits = 1i64;
                loop {
                    let lo = Dyadic::from_rational_at(r, bits, crate::dyadic::Round::Floor);
                    let hi = lo.add(&Dyadic::pow2(-bits));
                    if &lo.to_rational() < r && r < &hi.to_rational() {
                        break DyadicInterval { lo, hi };
                    }
                    bits += 1;
                }
            }
        };
        AlgebraicNumber { minpoly, interval }
    }

    /// Builds the number from a rational enclosure that must isolate a single
    /// root of `minpoly`.
    pub fn from_enclosure(minpoly: IntPolynomial, lo: &BigRational, hi: &BigRational) -> Result<Self> {
        let lo_d = Dyadic::from_rational_at(lo, 64 + lo.denom().bits() as i64, crate::dyadic::Round::Floor);
        let hi_d = Dyadic::from_rational_at(hi, 64 + hi.denom().bits() as i64, crate::dyadic::Round::Ceil);
        let iv = DyadicInterval::new(lo_d, hi_d)?;
        match sturm_count(&minpoly, &iv) {
            0 => Err(Error::Precondition(format!("no root of {minpoly} in {iv:?}"))),
            1 => AlgebraicNumber::new(minpoly.clone(), iv.clone()).or_else(|_| {
                // an endpoint is a root: that root is the number
                let root = if minpoly.sign_at_dyadic(&iv.lo) == Sign::NoSign { iv.lo } else { iv.hi };
                AlgebraicNumber::new(minpoly, DyadicInterval::point(root))
            }),
            _ => Err(Error::Precondition(format!(
                "enclosure {iv:?} holds several roots of {minpoly}"
            ))),
        }
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn interval(&self) -> &DyadicInterval {
        &self.interval
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    /// Naive height: max |coefficient| of the minimal polynomial.
    pub fn height(&self) -> BigInt {
        self.minpoly.height()
    }

    /// The exact value, when the number is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.degree() == 1).then(|| {
            BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1))
        })
    }

    /// `-self`.
    pub fn neg(&self) -> AlgebraicNumber {
        AlgebraicNumber {
            minpoly: self.minpoly.reflected().normalized(),
            interval: DyadicInterval { lo: self.interval.hi.neg(), hi: self.interval.lo.neg() },
        }
    }

    /// Same number with isolating interval no wider than `width`.
    pub fn refine(&self, width: &Dyadic) -> AlgebraicNumber {
        assert!(width.is_positive(), "refinement width must be positive");
        let mut out = self.clone();
        out.refine_in_place(width);
        out
    }

    fn refine_in_place(&mut self, width: &Dyadic) {
        if self.interval.is_point() {
            return;
        }
        // rational roots are pinned exactly when dyadic
        if self.degree() == 1 {
            if let Some(d) = self.as_rational().and_then(|r| Dyadic::try_from_rational(&r)) {
                self.interval = DyadicInterval::point(d);
                return;
            }
        }
        let lo_sign = self.minpoly.sign_at_dyadic(&self.interval.lo);
        while &self.interval.width() > width {
            self.bisect_once(lo_sign);
            if self.interval.is_point() {
                return;
            }
        }
    }

    fn bisect_once(&mut self, lo_sign: Sign) {
        let mid = self.interval.midpoint();
        let s = self.minpoly.sign_at_dyadic(&mid);
        if s == Sign::NoSign {
            self.interval = DyadicInterval::point(mid);
        } else if s == lo_sign {
            self.interval.lo = mid;
        } else {
            self.interval.hi = mid;
        }
    }

    /// Enclosure with radius at most `2^-prec`.
    pub fn to_ball(&self, prec: u32) -> Ball {
        let refined = self.refine(&Dyadic::pow2(-(prec as i64) - 1));
        Ball::from_interval(&refined.interval.lo, &refined.interval.hi)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_ball(60).to_f64()
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in {:?}", self.minpoly, self.interval)
    }
}

/// All roots of `p` in `[0, 1/2]`, sorted ascending. `p` must be irreducible,
/// primitive and sign-normalized.
pub fn isolate_in_unit_half(p: &IntPolynomial) -> Vec<AlgebraicNumber> {
    isolate_in(p, &Dyadic::zero(), &Dyadic::pow2(-1))
}

/// All roots of the squarefree, normalized `p` in the closed `[lo, hi]`, sorted.
pub fn isolate_in(p: &IntPolynomial, lo: &Dyadic, hi: &Dyadic) -> Vec<AlgebraicNumber> {
    let chain = sturm_chain(p);
    let mut out = Vec::new();
    if p.sign_at_dyadic(lo) == Sign::NoSign {
        out.push(AlgebraicNumber { minpoly: p.clone(), interval: DyadicInterval::point(lo.clone()) });
    }
    let hi_root = lo != hi && p.sign_at_dyadic(hi) == Sign::NoSign;
    if lo < hi {
        let full = DyadicInterval { lo: lo.clone(), hi: hi.clone() };
        let open_count = sturm_count_with(&chain, &full) - usize::from(hi_root);
        isolate_open(p, &chain, full, open_count, &mut out);
    }
    if hi_root {
        out.push(AlgebraicNumber { minpoly: p.clone(), interval: DyadicInterval::point(hi.clone()) });
    }
    out
}

/// Isolates the `count` roots lying in the open interval `(iv.lo, iv.hi)`.
fn isolate_open(
    p: &IntPolynomial,
    chain: &[IntPolynomial],
    iv: DyadicInterval,
    count: usize,
    out: &mut Vec<AlgebraicNumber>,
) {
    if count == 0 {
        return;
    }
    if count == 1
        && p.sign_at_dyadic(&iv.lo) != Sign::NoSign
        && p.sign_at_dyadic(&iv.hi) != Sign::NoSign
    {
        out.push(AlgebraicNumber { minpoly: p.clone(), interval: iv });
        return;
    }
    let mid = iv.midpoint();
    let mid_root = p.sign_at_dyadic(&mid) == Sign::NoSign;
    let left = DyadicInterval { lo: iv.lo.clone(), hi: mid.clone() };
    let right = DyadicInterval { lo: mid.clone(), hi: iv.hi.clone() };
    let left_count = sturm_count_with(chain, &left) - usize::from(mid_root);
    let right_count = count - left_count - usize::from(mid_root);
    isolate_open(p, chain, left, left_count, out);
    if mid_root {
        out.push(AlgebraicNumber { minpoly: p.clone(), interval: DyadicInterval::point(mid) });
    }
    isolate_open(p, chain, right, right_count, out);
}

/// Total order on real algebraic numbers.
pub fn compare(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<Ordering> {
    compare_with_cap(a, b, DEFAULT_COMPARE_CAP)
}

/// As [`compare`], giving up with a refinement-cap error after `cap` bisections
/// of each operand.
pub fn compare_with_cap(a: &AlgebraicNumber, b: &AlgebraicNumber, cap: u32) -> Result<Ordering> {
    if a.minpoly == b.minpoly {
        return Ok(match a.interval.intersect(&b.interval) {
            Some(common) if sturm_count(&a.minpoly, &common) >= 1 => Ordering::Equal,
            _ => order_disjoint(a, b, cap)?,
        });
    }
    order_disjoint(a, b, cap)
}

fn order_disjoint(a: &AlgebraicNumber, b: &AlgebraicNumber, cap: u32) -> Result<Ordering> {
    let (mut a, mut b) = (a.clone(), b.clone());
    let sa = a.minpoly.sign_at_dyadic(&a.interval.lo);
    let sb = b.minpoly.sign_at_dyadic(&b.interval.lo);
    let mut steps = 0u32;
    loop {
        if a.interval.hi < b.interval.lo {
            return Ok(Ordering::Less);
        }
        if b.interval.hi < a.interval.lo {
            return Ok(Ordering::Greater);
        }
        if a.interval.is_point() && b.interval.is_point() {
            // distinct minimal polynomials cannot share a root
            return Ok(a.interval.lo.cmp(&b.interval.lo));
        }
        if steps >= 2 * cap {
            return Err(Error::RefinementCap { what: format!("order of {a:?} and {b:?}"), cap });
        }
        if a.interval.width() >= b.interval.width() {
            a.bisect_once(sa);
        } else {
            b.bisect_once(sb);
        }
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn iv(lo: &str, hi: &str) -> DyadicInterval {
        DyadicInterval::new(d(lo), d(hi)).unwrap()
    }

    #[test]
    fn sturm_count_examples() {
        assert_eq!(sturm_count(&p(&[-1, 2]), &iv("0", "0.5")), 1);
        assert_eq!(sturm_count(&p(&[1, 0, 1]), &iv("0", "0.5")), 0);
        assert_eq!(sturm_count(&p(&[-1, 1, 1]), &iv("0", "0.5")), 0);
        assert_eq!(sturm_count(&p(&[0, 1]), &iv("0", "0.5")), 1);
        assert_eq!(sturm_count(&p(&[-2, 0, 1]), &iv("-2", "2")), 2);
        // negative leading coefficient in the derivative chain
        assert_eq!(sturm_count(&p(&[0, -1, 0, 1]), &iv("-2", "2")), 3);
    }

    #[test]
    fn isolate_examples() {
        let r = isolate_in_unit_half(&p(&[0, 1]));
        assert_eq!(r.len(), 1);
        assert!(r[0].interval().is_point());
        assert!(isolate_in_unit_half(&p(&[-2, 0, 0, 5])).is_empty());
        let r = isolate_in_unit_half(&p(&[-2, 0, 9]));
        assert_eq!(r.len(), 1);
        assert!((r[0].to_f64() - (2f64 / 9.0).sqrt()).abs() < 1e-12);
        let r = isolate_in_unit_half(&p(&[-1, 2]));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].interval().lo, d("0.5"));
    }

    #[test]
    fn isolate_several_roots() {
        // (4x - 1)(8x - 3)(5x - 1) has roots 1/4, 3/8, 1/5
        let q = p(&[-1, 4]).mul(&p(&[-3, 8])).mul(&p(&[-1, 5]));
        let roots = isolate_in_unit_half(&q);
        let vals: Vec<f64> = roots.iter().map(|r| r.to_f64()).collect();
        assert_eq!(vals.len(), 3);
        assert!((vals[0] - 0.2).abs() < 1e-12);
        assert!((vals[1] - 0.25).abs() < 1e-12);
        assert!((vals[2] - 0.375).abs() < 1e-12);
    }

    #[test]
    fn refine_examples() {
        let half = AlgebraicNumber::new(p(&[-1, 2]), iv("0", "1")).unwrap();
        let r = half.refine(&Dyadic::pow2(-10));
        assert!(r.interval().contains(&d("0.5")));
        assert!(r.interval().width() <= Dyadic::pow2(-10));

        let golden = AlgebraicNumber::new(p(&[-1, -1, 1]), iv("1", "2")).unwrap();
        let r = golden.refine(&Dyadic::pow2(-20));
        assert!(r.interval().width() <= Dyadic::pow2(-20));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(r.interval().lo.to_f64() <= phi && phi <= r.interval().hi.to_f64());

        let q = AlgebraicNumber::new(p(&[-2, 0, 9]), iv("0", "0.5")).unwrap();
        let r = q.refine(&Dyadic::pow2(-30));
        assert!((r.interval().lo.to_f64() - 0.471_404_520_791_031_7).abs() < 1e-9);
    }

    #[test]
    fn constructor_rejects_bad_intervals() {
        assert!(AlgebraicNumber::new(p(&[-2, 0, 1]), iv("-2", "2")).is_err());
        assert!(AlgebraicNumber::new(p(&[-1, 2]), iv("0.5", "1")).is_err());
        assert!(AlgebraicNumber::new(p(&[-1, 2]), iv("0.5", "0.5")).is_ok());
    }

    #[test]
    fn compare_examples() {
        let third = AlgebraicNumber::from_rational(&BigRational::new(1.into(), 3.into()));
        let half = AlgebraicNumber::from_rational(&BigRational::new(1.into(), 2.into()));
        assert_eq!(compare(&third, &half).unwrap(), Ordering::Less);
        let q = isolate_in_unit_half(&p(&[-2, 0, 9])).remove(0);
        assert_eq!(compare(&q, &q.refine(&Dyadic::pow2(-40))).unwrap(), Ordering::Equal);
        assert_eq!(compare(&q, &half).unwrap(), Ordering::Less);
        assert_eq!(compare(&half, &q).unwrap(), Ordering::Greater);
    }

    #[test]
    fn compare_distinguishes_conjugates() {
        let q = p(&[-2, 0, 1]);
        let roots = isolate_in(&q, &d("-2"), &d("2"));
        assert_eq!(roots.len(), 2);
        assert_eq!(compare(&roots[0], &roots[1]).unwrap(), Ordering::Less);
        // overlapping hulls, different roots
        let wide = AlgebraicNumber::new(q.clone(), iv("-1.5", "0.5")).unwrap();
        let other = AlgebraicNumber::new(q, iv("0.25", "1.5")).unwrap();
        assert_eq!(compare(&wide, &other).unwrap(), Ordering::Less);
    }

    #[test]
    fn compare_cap_reports() {
        let a = AlgebraicNumber::new(p(&[-2, 0, 1]), iv("1", "2")).unwrap();
        let b = AlgebraicNumber::new(p(&[-200_000_001, 0, 100_000_000]), iv("1", "2")).unwrap();
        assert!(matches!(compare_with_cap(&a, &b, 3), Err(Error::RefinementCap { .. })));
        assert_eq!(compare(&a, &b).unwrap(), Ordering::Less);
    }

    #[test]
    fn negation() {
        let q = isolate_in_unit_half(&p(&[-2, 0, 9])).remove(0);
        let n = q.neg();
        assert_eq!(n.minpoly(), q.minpoly());
        assert!((n.to_f64() + q.to_f64()).abs() < 1e-15);
        let c = isolate_in_unit_half(&p(&[-1, 1, 0, 5])).remove(0).neg();
        assert_eq!(c.minpoly(), &p(&[1, 1, 0, 5]));
        assert!(AlgebraicNumber::new(c.minpoly().clone(), c.interval().clone()).is_ok());
    }

    #[test]
    fn from_rational_non_dyadic() {
        let r = BigRational::new(2.into(), 5.into());
        let a = AlgebraicNumber::from_rational(&r);
        assert!(!a.interval().is_point());
        assert_eq!(a.height(), BigInt::from(5));
        assert_eq!(a.as_rational(), Some(r));
    }

    #[test]
    fn to_ball_contains_value() {
        let q = isolate_in_unit_half(&p(&[-2, 0, 9])).remove(0);
        let b = q.to_ball(200);
        assert!(b.rad() <= &Dyadic::pow2(-200));
        // 9x^2 - 2 changes sign across the ball
        let lo = b.lower().to_rational();
        let hi = b.upper().to_rational();
        assert!(q.minpoly().sign_at(&lo) != q.minpoly().sign_at(&hi));
    }
}
