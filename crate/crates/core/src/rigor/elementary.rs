//! Certified elementary functions on balls.
//!
//! Constants come from fixed-point Machin / atanh series with explicit
//! unit-in-last-place error counts. Everything else is evaluated in ball
//! arithmetic, so rounding errors are tracked by the ball operations and only
//! the series truncation has to be added by hand.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ball::Ball;
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

const GUARD: u32 = 32;

/// Largest `|k|` accepted for `exp` argument reduction by `k ln 2`.
const MAX_BINARY_EXPONENT: i64 = 1 << 61;

/// `sum_k (-1)^k floor(2^w / ((2k+1) x^(2k+1)))`, with the number of terms.
fn atan_inv_fixed(x: u64, w: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x) * x;
    let mut power = (BigInt::one() << w as usize) / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    (sum, k)
}

/// `sum_k floor(2^w / ((2k+1) 3^(2k+1)))`, with the number of terms.
fn atanh_third_fixed(w: u64) -> (BigInt, u64) {
    let mut power = (BigInt::one() << w as usize) / 3u32;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        sum += &power / (2 * k + 1);
        power /= 9u32;
        k += 1;
    }
    (sum, k)
}

fn compute_pi(prec: u32) -> Ball {
    let w = (prec + GUARD) as u64;
    let (a5, t5) = atan_inv_fixed(5, w);
    let (a239, t239) = atan_inv_fixed(239, w);
    let value = a5 * 16u32 - a239 * 4u32;
    // each series is off by at most (terms + 1) units
    let err_units = 16 * (t5 + 1) + 4 * (t239 + 1);
    Ball::new(
        Dyadic::new(value, -(w as i64)),
        Dyadic::new(BigInt::from(err_units), -(w as i64)),
    )
}

fn compute_ln2(prec: u32) -> Ball {
    let w = (prec + GUARD) as u64;
    let (s, t) = atanh_third_fixed(w);
    let err_units = 2 * (t + 2);
    Ball::new(
        Dyadic::new(s * 2u32, -(w as i64)),
        Dyadic::new(BigInt::from(err_units), -(w as i64)),
    )
}

type ConstCache = OnceLock<Mutex<Option<(u32, Ball)>>>;

fn cached(cache: &ConstCache, prec: u32, compute: fn(u32) -> Ball) -> Ball {
    let slot = cache.get_or_init(|| Mutex::new(None));
    {
        let guard = slot.lock().expect("constant cache poisoned");
        if let Some((p, ball)) = guard.as_ref() {
            if *p >= prec {
                return ball.round_to(prec + GUARD);
            }
        }
    }
    // round the request up so that nearby precisions share one computation
    let target = prec.next_multiple_of(256).max(256);
    let ball = compute(target);
    let mut guard = slot.lock().expect("constant cache poisoned");
    if guard.as_ref().is_none_or(|(p, _)| *p < target) {
        *guard = Some((target, ball.clone()));
    }
    ball.round_to(prec + GUARD)
}

/// Enclosure of pi.
pub fn pi(prec: u32) -> Ball {
    static CACHE: ConstCache = OnceLock::new();
    cached(&CACHE, prec, compute_pi)
}

/// Enclosure of ln 2.
pub fn ln2(prec: u32) -> Ball {
    static CACHE: ConstCache = OnceLock::new();
    cached(&CACHE, prec, compute_ln2)
}

fn nearest_integer(b: &Ball) -> BigInt {
    b.mid().round_at(0, Round::Nearest).floor()
}

fn exp_point(x: &Dyadic, prec: u32) -> Result<Ball> {
    if x.is_zero() {
        return Ok(Ball::one());
    }
    let wp = prec + GUARD;
    let mag = x.magnitude().unwrap();
    if mag > 62 {
        return Err(Error::ExponentOverflow("exp"));
    }
    let (k, r) = if mag < -1 {
        (0i64, Ball::exact(x.clone()))
    } else {
        let est = mag.max(0) as u32 + 64;
        let q = Ball::exact(x.clone()).div(&ln2(est), est)?;
        let k = nearest_integer(&q)
            .to_i64()
            .filter(|k| k.abs() < MAX_BINARY_EXPONENT)
            .ok_or(Error::ExponentOverflow("exp"))?;
        let kbits = 64 - k.unsigned_abs().leading_zeros();
        let p = wp + kbits + 8;
        let r = Ball::exact(x.clone()).sub(&ln2(p).mul(&Ball::from_int(k), p), p);
        (k, r)
    };
    // halve the argument s times, sum the series, square back
    let s = ((wp as f64).sqrt() / 2.0) as i64 + 2;
    let wp2 = wp + s as u32 + 16;
    let rs = r.shl(-s);
    let tiny = Dyadic::pow2(-(wp2 as i64) - 4);
    let mut sum = Ball::one();
    let mut term = Ball::one();
    let mut j = 1u64;
    loop {
        term = term.mul(&rs, wp2).div_int(j, wp2);
        sum = sum.add(&term, wp2);
        if term.abs_upper() < tiny {
            break;
        }
        j += 1;
    }
    // |rs| <= 1/2, so the tail is dominated by the last term
    sum = sum.widen(&term.abs_upper());
    for _ in 0..s {
        sum = sum.sqr(wp2);
    }
    let out = sum.shl(k).round_to(prec + 16);
    Ok(out)
}

/// `e^x`.
pub fn exp(x: &Ball, prec: u32) -> Result<Ball> {
    let e = exp_point(x.mid(), prec)?;
    if x.is_exact() {
        return Ok(e);
    }
    let r = x.rad();
    // e^r - 1 <= r (1 + r) for r <= 1/2
    let factor = if *r <= Dyadic::pow2(-1) {
        r.mul(&Dyadic::one().add(r))
    } else {
        exp_point(r, 64)?.upper().sub(&Dyadic::one())
    };
    Ok(e.widen(&e.abs_upper().mul(&factor)))
}

fn ln_point(x: &Dyadic, prec: u32) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::LogNonPositive);
    }
    let wp = prec + GUARD;
    let mut e = x.magnitude().unwrap();
    let mut m = x.shl(-e); // in [1, 2)
    if m >= Dyadic::new(BigInt::from(3), -1) {
        m = m.shl(-1);
        e += 1;
    }
    // ln m = 2 atanh(z), z = (m-1)/(m+1), |z| <= 1/5
    let z = Ball::exact(m.sub(&Dyadic::one())).div(&Ball::exact(m.add(&Dyadic::one())), wp)?;
    let z2 = z.sqr(wp);
    let tiny = Dyadic::pow2(-(wp as i64) - 4);
    let mut sum = z.clone();
    let mut power = z;
    let mut k = 1u64;
    while power.abs_upper() >= tiny {
        power = power.mul(&z2, wp);
        sum = sum.add(&power.div_int(2 * k + 1, wp), wp);
        k += 1;
    }
    // remaining terms are below |power| * z^2 / (1 - z^2) < |power|
    sum = sum.widen(&power.abs_upper()).shl(1);
    if e != 0 {
        let ebits = 64 - e.unsigned_abs().leading_zeros();
        let p = wp + ebits + 8;
        sum = sum.add(&ln2(p).mul(&Ball::from_int(e), p), wp);
    }
    Ok(sum.round_to(prec + 16))
}

/// Natural logarithm of a strictly positive ball.
pub fn ln(x: &Ball, prec: u32) -> Result<Ball> {
    if !x.is_positive() {
        return Err(Error::LogNonPositive);
    }
    let l = ln_point(x.mid(), prec)?;
    if x.is_exact() {
        return Ok(l);
    }
    // |ln(m + d) - ln m| <= |d| / (m - r)
    let lower = Ball::exact(x.abs_lower());
    let extra = Ball::exact(x.rad().clone()).div(&lower, 64)?;
    Ok(l.widen(&extra.abs_upper()))
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(r: &BigRational, prec: u32) -> Result<Ball> {
    if !r.is_positive() {
        return Err(Error::LogNonPositive);
    }
    let num = ln_point(&Dyadic::from_int(r.numer().clone()), prec + 4)?;
    if r.denom().is_one() {
        return Ok(num);
    }
    let den = ln_point(&Dyadic::from_int(r.denom().clone()), prec + 4)?;
    Ok(num.sub(&den, prec + 16))
}

fn sin_cos_taylor(r: &Ball, wp: u32) -> (Ball, Ball) {
    let r2 = r.sqr(wp);
    let tiny = Dyadic::pow2(-(wp as i64) - 4);
    // sin
    let mut term = r.clone();
    let mut s = r.clone();
    let mut j = 1u64;
    while term.abs_upper() >= tiny {
        term = term.mul(&r2, wp).div_int((2 * j) * (2 * j + 1), wp).neg();
        s = s.add(&term, wp);
        j += 1;
    }
    let s = s.widen(&term.abs_upper());
    // cos
    let mut term = Ball::one();
    let mut c = Ball::one();
    let mut j = 1u64;
    while term.abs_upper() >= tiny {
        term = term.mul(&r2, wp).div_int((2 * j - 1) * (2 * j), wp).neg();
        c = c.add(&term, wp);
        j += 1;
    }
    let c = c.widen(&term.abs_upper());
    (s, c)
}

fn sin_cos_point(x: &Dyadic, prec: u32) -> (Ball, Ball) {
    if x.is_zero() {
        return (Ball::zero(), Ball::one());
    }
    let wp = prec + GUARD;
    let mag = x.magnitude().unwrap();
    let (quadrant, r) = if mag < -1 {
        (0u8, Ball::exact(x.clone()))
    } else {
        let p = wp + mag.max(0) as u32 + 16;
        let half_pi = pi(p).shl(-1);
        let q = Ball::exact(x.clone())
            .div(&half_pi, mag.max(0) as u32 + 64)
            .expect("pi/2 excludes zero");
        let k = nearest_integer(&q);
        let r = Ball::exact(x.clone()).sub(&half_pi.mul_int(&k, p), p);
        let quadrant = k.mod_floor(&BigInt::from(4)).to_u8().unwrap();
        (quadrant, r)
    };
    let (s, c) = sin_cos_taylor(&r, wp);
    let (s, c) = match quadrant {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    };
    (s.round_to(prec + 16), c.round_to(prec + 16))
}

fn clamp_unit(b: Ball) -> Ball {
    if *b.rad() >= Dyadic::one() {
        let lo = b.lower().max(Dyadic::from_int(-1));
        let hi = b.upper().min(Dyadic::one());
        Ball::from_interval(&lo, &hi)
    } else {
        b
    }
}

/// `(sin x, cos x)`.
pub fn sin_cos(x: &Ball, prec: u32) -> (Ball, Ball) {
    let (s, c) = sin_cos_point(x.mid(), prec);
    if x.is_exact() {
        return (s, c);
    }
    (clamp_unit(s.widen(x.rad())), clamp_unit(c.widen(x.rad())))
}

pub fn sin(x: &Ball, prec: u32) -> Ball {
    sin_cos(x, prec).0
}

pub fn cos(x: &Ball, prec: u32) -> Ball {
    sin_cos(x, prec).1
}

/// `cos(pi x)`.
pub fn cos_pi(x: &Ball, prec: u32) -> Ball {
    let p = prec + 8 + x.mid().magnitude().unwrap_or(0).max(0) as u32;
    cos(&pi(p).mul(x, p), prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::ball::ratio;

    fn assert_close(b: &Ball, expected: f64, tol: f64) {
        assert!(
            (b.to_f64() - expected).abs() <= tol,
            "got {b:?}, expected {expected}"
        );
        assert!(b.rad().to_f64() <= tol);
    }

    #[test]
    fn pi_digits() {
        let p = pi(200);
        assert_close(&p, std::f64::consts::PI, 1e-15);
        // 50 digits of pi
        let digits = "3.14159265358979323846264338327950288419716939937510";
        let r = crate::dyadic::parse_decimal(digits).unwrap();
        assert!(p.widen(&Dyadic::pow2(-160)).contains_rational(&r));
        assert!(p.rad().to_f64() < 1e-55);
    }

    #[test]
    fn ln2_digits() {
        let l = ln2(128);
        assert_close(&l, std::f64::consts::LN_2, 1e-16);
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        for x in [0.5f64, -3.25, 10.0, 1e-5, 100.0] {
            let b = Ball::exact(Dyadic::from_f64(x).unwrap());
            let e = exp(&b, 128).unwrap();
            let back = ln(&e, 128).unwrap();
            assert!(back.contains(b.mid()), "x = {x}: {back:?}");
            assert!(back.rad().to_f64() < 1e-30);
        }
    }

    #[test]
    fn exp_of_large_argument_keeps_relative_precision() {
        let x = Ball::from_int(2981);
        let e = exp(&x, 64).unwrap();
        assert!(e.mid().magnitude().unwrap() > 4000);
        let rel = e.rad().to_f64().log2() - e.mid().magnitude().unwrap() as f64;
        assert!(rel < -60.0 || e.rad().magnitude().unwrap() - e.mid().magnitude().unwrap() < -60);
    }

    #[test]
    fn exp_rejects_exponent_overflow() {
        let x = Ball::exact(Dyadic::pow2(70));
        assert_eq!(exp(&x, 64), Err(Error::ExponentOverflow("exp")));
    }

    #[test]
    fn ln_of_nonpositive_rejected() {
        assert_eq!(ln(&Ball::zero(), 64), Err(Error::LogNonPositive));
        let straddle = Ball::new(Dyadic::one(), Dyadic::from_int(2));
        assert_eq!(ln(&straddle, 64), Err(Error::LogNonPositive));
    }

    #[test]
    fn sin_of_exact_zero() {
        let s = sin(&Ball::zero(), 64);
        assert!(s.contains(&Dyadic::zero()));
        assert!(s.rad().to_f64() <= 2f64.powi(-64 + 8));
    }

    #[test]
    fn cos_quarter_pi() {
        let c = cos_pi(&Ball::from_rational(&ratio(1, 4), 64), 64);
        assert_close(&c, std::f64::consts::FRAC_1_SQRT_2, 1e-16);
    }

    #[test]
    fn sin_two_over_two_exceeds_third() {
        let v = sin(&Ball::from_int(2), 64).div_int(2, 64);
        assert!(v.gt_rational(&ratio(1, 3)));
    }

    #[test]
    fn large_argument_reduction() {
        let x = Ball::from_int(1_000_000);
        let (s, c) = sin_cos(&x, 96);
        assert_close(&s, 1_000_000f64.sin(), 1e-9);
        assert_close(&c, 1_000_000f64.cos(), 1e-9);
    }

    #[test]
    fn wide_input_is_clamped() {
        let x = Ball::new(Dyadic::zero(), Dyadic::from_int(10));
        let s = sin(&x, 64);
        assert!(s.lower() >= Dyadic::from_int(-1) && s.upper() <= Dyadic::one());
    }
}
