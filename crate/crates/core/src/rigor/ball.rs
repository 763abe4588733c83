use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Significant bits kept in radii. Radii are always rounded upward.
const RAD_BITS: u32 = 30;

/// Midpoint-radius enclosure `[mid - rad, mid + rad]` of a real number.
#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
}

/// Upward-rounded radius.
fn up(d: Dyadic) -> Dyadic {
    d.round(RAD_BITS, Round::Ceil)
}

/// `a + b` rounded up, for nonnegative operands, without materializing huge
/// exponent gaps.
fn add_up(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (ma, mb) = (a.magnitude().unwrap(), b.magnitude().unwrap());
    let (big, small_mag) = if ma >= mb { (a, mb) } else { (b, ma) };
    let big_mag = ma.max(mb);
    if big_mag - small_mag > RAD_BITS as i64 + 4 {
        // small < 2^(small_mag+1) <= one unit at RAD_BITS below big
        return up(big.add(&Dyadic::pow2(big_mag - RAD_BITS as i64)));
    }
    up(a.add(b))
}

fn mul_up(a: &Dyadic, b: &Dyadic) -> Dyadic {
    up(a.mul(b))
}

/// Upper bound of `a / b` for `a >= 0`, `b > 0`.
fn div_up(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if a.is_zero() {
        return Dyadic::zero();
    }
    match div_trunc(a, b, RAD_BITS + 2) {
        (q, None) => up(q),
        (q, Some(e)) => up(q.add(&Dyadic::pow2(e))),
    }
}

/// Truncated quotient with about `prec` significant bits, plus the exponent
/// `e` with truncation error below `2^e` (`None` when exact).
fn div_trunc(a: &Dyadic, b: &Dyadic, prec: u32) -> (Dyadic, Option<i64>) {
    let (am, bm) = (a.mantissa(), b.mantissa());
    let shift = prec as i64 + bm.bits() as i64 - am.bits() as i64 + 1;
    let num = if shift >= 0 {
        am << (shift as usize)
    } else {
        am >> ((-shift) as usize)
    };
    let (q, r) = num.div_rem(bm);
    let e = a.exponent() - b.exponent() - shift;
    let exact = r.is_zero() && shift >= 0;
    (Dyadic::new(q, e), if exact { None } else { Some(e) })
}

impl Ball {
    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        assert!(!rad.is_negative(), "ball radius must be nonnegative");
        Ball { mid, rad: up(rad) }
    }

    pub fn exact(mid: Dyadic) -> Self {
        Ball { mid, rad: Dyadic::zero() }
    }

    pub fn zero() -> Self {
        Ball::exact(Dyadic::zero())
    }

    pub fn one() -> Self {
        Ball::exact(Dyadic::one())
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Ball::exact(Dyadic::from_int(v))
    }

    /// Enclosure of a rational with a midpoint of about `prec` significant bits.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if let Some(d) = Dyadic::try_from_rational(r) {
            if d.bits() <= prec as u64 {
                return Ball::exact(d);
            }
        }
        if r.is_zero() {
            return Ball::zero();
        }
        let mag = r.numer().bits() as i64 - r.denom().bits() as i64;
        let bits = prec as i64 - mag + 1;
        let mid = Dyadic::from_rational_at(r, bits, Round::Nearest);
        Ball::new(mid, Dyadic::pow2(-bits))
    }

    /// Ball spanning the closed interval `[lo, hi]`.
    pub fn from_interval(lo: &Dyadic, hi: &Dyadic) -> Self {
        debug_assert!(lo <= hi);
        let mid = lo.midpoint(hi);
        let rad = hi.sub(lo).shl(-1);
        Ball::new(mid, rad)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Radius replaced by a power of two no finer than 64 bits below the
    /// midpoint's last bit, so that endpoint arithmetic stays small when the
    /// radius is negligible against a huge midpoint.
    fn coarse_rad(&self) -> Dyadic {
        match (self.mid.magnitude(), self.rad.magnitude()) {
            (Some(_), Some(mr)) if mr < self.mid.exponent() - 128 => {
                Dyadic::pow2((mr + 1).max(self.mid.exponent() - 64))
            }
            _ => self.rad.clone(),
        }
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.coarse_rad())
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.coarse_rad())
    }

    /// Upper bound of `|x|` over the ball.
    pub fn abs_upper(&self) -> Dyadic {
        add_up(&self.mid.abs(), &self.rad)
    }

    /// Lower bound of `|x|` over the ball (zero when the ball straddles zero).
    pub fn abs_lower(&self) -> Dyadic {
        let m = self.mid.abs();
        if m <= self.rad {
            Dyadic::zero()
        } else {
            m.sub(&self.coarse_rad()).max(Dyadic::zero())
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && self.mid.abs() > self.rad
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        x.sub(&self.mid).abs() <= self.rad
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        let diff = (r - self.mid.to_rational()).abs();
        diff <= self.rad.to_rational()
    }

    /// Whether `other` lies inside `self`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        !(self.upper() < other.lower() || other.upper() < self.lower())
    }

    /// Certified ordering: `Some` only when the balls are disjoint.
    pub fn certified_cmp(&self, other: &Ball) -> Option<Ordering> {
        if self.upper() < other.lower() {
            Some(Ordering::Less)
        } else if other.upper() < self.lower() {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn certified_lt(&self, other: &Ball) -> bool {
        self.upper() < other.lower()
    }

    /// Whether every point of the ball is strictly below the rational `r`.
    pub fn lt_rational(&self, r: &BigRational) -> bool {
        self.upper().to_rational() < *r
    }

    pub fn gt_rational(&self, r: &BigRational) -> bool {
        self.lower().to_rational() > *r
    }

    fn rounded(exact: Dyadic, prec: u32, rad: Dyadic) -> Ball {
        let mid = exact.round(prec, Round::Nearest);
        let err = exact.sub(&mid).abs();
        Ball { mid, rad: add_up(&rad, &up(err)) }
    }

    /// Shortens the midpoint to `prec` bits, folding the error into the radius.
    pub fn round_to(&self, prec: u32) -> Ball {
        Ball::rounded(self.mid.clone(), prec, self.rad.clone())
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad.clone() }
    }

    pub fn abs(&self) -> Ball {
        if self.contains_zero() {
            let u = self.abs_upper();
            let half = u.shl(-1);
            Ball::new(half.clone(), half)
        } else if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Ball {
        Ball { mid: self.mid.shl(k), rad: self.rad.shl(k) }
    }

    pub fn add(&self, other: &Ball, prec: u32) -> Ball {
        let rad = add_up(&self.rad, &other.rad);
        match (self.mid.magnitude(), other.mid.magnitude()) {
            (Some(ma), Some(mb)) if (ma - mb).abs() > prec as i64 + 64 => {
                let (big, small) = if ma > mb { (self, other) } else { (other, self) };
                let absorbed = add_up(&rad, &up(small.mid.abs()));
                Ball::rounded(big.mid.clone(), prec, absorbed)
            }
            _ => Ball::rounded(self.mid.add(&other.mid), prec, rad),
        }
    }

    pub fn sub(&self, other: &Ball, prec: u32) -> Ball {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Ball, prec: u32) -> Ball {
        let mut rad = mul_up(&self.mid.abs(), &other.rad);
        rad = add_up(&rad, &mul_up(&other.mid.abs(), &self.rad));
        rad = add_up(&rad, &mul_up(&self.rad, &other.rad));
        Ball::rounded(self.mid.mul(&other.mid), prec, rad)
    }

    pub fn sqr(&self, prec: u32) -> Ball {
        self.mul(self, prec)
    }

    pub fn mul_int(&self, k: &BigInt, prec: u32) -> Ball {
        self.mul(&Ball::from_int(k.clone()), prec)
    }

    pub fn div(&self, other: &Ball, prec: u32) -> Result<Ball> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.mid.is_zero() && self.rad.is_zero() {
            return Ok(Ball::zero());
        }
        // mid quotient, truncated, plus one unit of error
        let (q, err_exp) = if self.mid.is_zero() {
            (Dyadic::zero(), None)
        } else {
            div_trunc(&self.mid, &other.mid, prec + 2)
        };
        let q_err = err_exp.map_or_else(Dyadic::zero, Dyadic::pow2);
        // |a/b - ma/mb| <= (ra + |ma/mb| rb) / (|mb| - rb)
        let q_abs_up = add_up(&q.abs(), &q_err);
        let num = add_up(&self.rad, &mul_up(&q_abs_up, &other.rad));
        let den = other.abs_lower().round(RAD_BITS, Round::Floor);
        let prop = if num.is_zero() {
            Dyadic::zero()
        } else {
            div_up(&num, &den)
        };
        Ok(Ball::rounded(q, prec, add_up(&prop, &q_err)))
    }

    pub fn div_int(&self, k: u64, prec: u32) -> Ball {
        self.div(&Ball::from_int(k), prec)
            .expect("division by a nonzero integer")
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut e: u64, prec: u32) -> Ball {
        let mut base = self.clone();
        let mut acc = Ball::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    /// Widens the radius by `extra`.
    pub fn widen(&self, extra: &Dyadic) -> Ball {
        Ball { mid: self.mid.clone(), rad: add_up(&self.rad, &up(extra.abs())) }
    }

    /// Smallest ball containing both.
    pub fn hull(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Ball::from_interval(&lo, &hi)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// `mid ± rad` with exact decimal strings.
    pub fn to_exact_string(&self) -> String {
        format!("{} ± {}", self.mid.to_decimal_string(), self.rad.to_decimal_string())
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e} ± {:e}]", self.mid.to_f64(), self.rad.to_f64())
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} ± {:.3e}", self.mid.to_f64(), self.rad.to_f64())
    }
}

/// Exact rational `num / den` as a helper for tests and callers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `1 / n^n` as an exact rational.
pub fn inv_self_power(n: u64) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(n), n as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: f64) -> Ball {
        Ball::exact(Dyadic::from_f64(x).unwrap())
    }

    #[test]
    fn exact_small_ops() {
        let s = b(1.5).add(&b(2.25), 64);
        assert!(s.is_exact());
        assert_eq!(s.to_f64(), 3.75);
        let p = b(1.5).mul(&b(-2.0), 64);
        assert_eq!(p.to_f64(), -3.0);
    }

    #[test]
    fn division_encloses_third() {
        let q = Ball::one().div(&Ball::from_int(3), 64).unwrap();
        assert!(q.contains_rational(&ratio(1, 3)));
        assert!(q.rad().to_f64() < 1e-18);
    }

    #[test]
    fn division_by_zero_ball_rejected() {
        let z = Ball::new(Dyadic::one(), Dyadic::from_int(2));
        assert_eq!(Ball::one().div(&z, 64), Err(Error::DivisionByZero));
    }

    #[test]
    fn rational_enclosure() {
        for (n, d) in [(1, 3), (-7, 10), (22, 7), (1, 1_000_003)] {
            let r = ratio(n, d);
            let ball = Ball::from_rational(&r, 80);
            assert!(ball.contains_rational(&r));
            assert!(ball.rad().to_f64() <= 2f64.powi(-70) * (n as f64 / d as f64).abs().max(1.0));
        }
    }

    #[test]
    fn huge_gap_addition_is_absorbed() {
        let big = Ball::exact(Dyadic::pow2(1_000_000_000));
        let s = big.add(&Ball::one(), 64);
        assert!(s.mid().bits() <= 64);
        assert!(s.contains(&Dyadic::pow2(1_000_000_000)));
        assert!(s.rad() >= &Dyadic::one());
    }

    #[test]
    fn interval_wrapping() {
        let x = Ball::from_interval(&Dyadic::from_int(1), &Dyadic::from_int(3));
        assert_eq!(x.mid(), &Dyadic::from_int(2));
        assert_eq!(x.rad(), &Dyadic::one());
        assert!(x.is_positive());
        assert!(!x.neg().is_positive());
    }
}
