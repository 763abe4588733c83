//! Exact dyadic rationals `man * 2^exp`.
//!
//! The mantissa is an arbitrary-precision integer; the exponent is an `i64`.
//! Values are kept normalized (odd mantissa, or the canonical zero), so
//! structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Rounding direction used when a dyadic is shortened to a given number of bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
    Nearest,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz as usize;
                self.exp = self
                    .exp
                    .checked_add(tz as i64)
                    .expect("dyadic exponent overflow");
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: k }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// `floor(log2 |x|)` for nonzero `x`.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64 - 1)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Multiplication by `2^k`; exact.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp.checked_add(k).expect("dyadic exponent overflow"),
        }
    }

    /// Exact sum. Callers with operands of wildly different magnitude should
    /// go through ball arithmetic, which rounds instead of materializing the gap.
    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << ((self.exp - e) as usize);
        let b = &other.man << ((other.exp - e) as usize);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            man: &self.man * &other.man,
            exp: self
                .exp
                .checked_add(other.exp)
                .expect("dyadic exponent overflow"),
        }
    }

    /// Midpoint of two dyadics (exact).
    pub fn midpoint(&self, other: &Dyadic) -> Dyadic {
        self.add(other).shl(-1)
    }

    /// Shortens the mantissa to at most `prec` bits.
    pub fn round(&self, prec: u32, mode: Round) -> Dyadic {
        let prec = prec.max(2) as u64;
        let bits = self.man.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        self.round_at(self.exp + shift as i64, mode)
    }

    /// Rounds to an integer multiple of `2^e`.
    pub fn round_at(&self, e: i64, mode: Round) -> Dyadic {
        if self.is_zero() || self.exp >= e {
            return self.clone();
        }
        let shift = (e - self.exp) as usize;
        let den = BigInt::one() << shift;
        let (q, r) = self.man.div_mod_floor(&den);
        let q = match mode {
            Round::Floor => q,
            Round::Ceil => {
                if r.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
            Round::Nearest => {
                let twice: BigInt = &r << 1usize;
                if twice >= den {
                    q + 1
                } else {
                    q
                }
            }
        };
        Dyadic::new(q, e)
    }

    /// `floor(x)` as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << (self.exp as usize)
        } else {
            self.man.div_floor(&(BigInt::one() << ((-self.exp) as usize)))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << (self.exp as usize))
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    /// Largest dyadic with denominator `2^bits` not exceeding `r` (`Floor`),
    /// or the analogous ceiling / nearest.
    pub fn from_rational_at(r: &BigRational, bits: i64, mode: Round) -> Dyadic {
        let (num, den) = (r.numer(), r.denom());
        let scaled_num = if bits >= 0 {
            num << (bits as usize)
        } else {
            num.clone()
        };
        let scaled_den = if bits >= 0 {
            den.clone()
        } else {
            den << ((-bits) as usize)
        };
        let (q, rem) = scaled_num.div_mod_floor(&scaled_den);
        let q = match mode {
            Round::Floor => q,
            Round::Ceil => {
                if rem.is_zero() {
                    q
                } else {
                    q + 1
                }
            }
            Round::Nearest => {
                if (&rem << 1usize) >= scaled_den {
                    q + 1
                } else {
                    q
                }
            }
        };
        Dyadic::new(q, -bits)
    }

    /// Returns the dyadic equal to `r`, if `r` has a power-of-two denominator.
    pub fn try_from_rational(r: &BigRational) -> Option<Dyadic> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> (tz as usize)) != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(r.numer().clone(), -(tz as i64)))
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let keep = 60i64.min(bits);
        let shift = bits - keep;
        let top = (&self.man >> (shift as usize)).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        let half = (e / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// Exact conversion of an `f64`.
    pub fn from_f64(x: f64) -> Option<Dyadic> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(man) * sign, exp))
    }

    /// Exact decimal expansion (every dyadic has a finite one).
    pub fn to_decimal_string(&self) -> String {
        if self.exp >= 0 {
            return (&self.man << (self.exp as usize)).to_string();
        }
        let places = (-self.exp) as usize;
        let scaled = &self.man * num_traits::pow(BigInt::from(5), places);
        let neg = scaled.is_negative();
        let digits = scaled.abs().to_string();
        let (int_part, frac_part) = if digits.len() > places {
            let (a, b) = digits.split_at(digits.len() - places);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(places - digits.len()), digits))
        };
        let frac_part = frac_part.trim_end_matches('0');
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&int_part);
        if !frac_part.is_empty() {
            s.push('.');
            s.push_str(frac_part);
        }
        s
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.man.sign(), other.man.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let ma = self.magnitude().unwrap();
        let mb = other.magnitude().unwrap();
        let by_abs = if ma != mb {
            ma.cmp(&mb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.man.abs() << ((self.exp - e) as usize);
            let b = other.man.abs() << ((other.exp - e) as usize);
            a.cmp(&b)
        };
        if sa == Sign::Minus {
            by_abs.reverse()
        } else {
            by_abs
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

/// Parses an exact decimal string such as `-0.375` or `12`.
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let r = parse_decimal(s)?;
        Dyadic::try_from_rational(&r)
            .ok_or_else(|| Error::Parse(format!("`{s}` is not a dyadic rational")))
    }
}

/// Parses a decimal literal (`-12.5`) or a fraction (`3/8`) into a rational.
pub fn parse_decimal(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid number `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{}{}", int_part, frac_part);
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}
