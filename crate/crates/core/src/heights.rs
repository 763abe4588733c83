//! Height functions, closed-form height bounds and `HugeNumber`, a positive
//! real stored through an expression for its natural logarithm.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realroots::AlgebraicNumber;
use crate::rigor::elementary::{exp, ln_rational, pi};
use crate::rigor::{refine, Ball, Outcome, Schedule};

/// Max |coefficient| of the minimal polynomial.
pub fn naive_height(a: &AlgebraicNumber) -> BigInt {
    a.height()
}

/// `2^-d W^d <= H <= 2^d W^d` with `d = 1`, where `W(p/q) = max(|p|, q)`.
pub fn weil_sandwich_check(a: &AlgebraicNumber) -> Result<bool> {
    let Some(r) = a.as_rational() else {
        return Err(Error::UnsupportedDegree {
            degree: a.degree(),
            context: "exact Weil height is only computed for rationals",
        });
    };
    let w = r.numer().abs().max(r.denom().clone());
    let h = naive_height(a);
    Ok(w <= &h * 2 && h <= &w * 2)
}

/// `2^(4 m^2) hx^m hy^m`.
pub fn diff_height_bound(hx: &BigInt, hy: &BigInt, m: usize) -> BigInt {
    (BigInt::one() << (4 * m * m)) * num_traits::pow(hx.clone(), m) * num_traits::pow(hy.clone(), m)
}

/// `1 / (2h)`.
pub fn modulus_lower_bound(h: &BigInt) -> BigRational {
    BigRational::new(BigInt::one(), h * 2)
}

/// Enclosure of `pi / (2^(4 m^2 + 1) n^(2m + 1))`.
pub fn cos_separation_bound(n: u64, m: usize, prec: u32) -> Ball {
    let den = (BigInt::one() << (4 * m * m + 1)) * num_traits::pow(BigInt::from(n), 2 * m + 1);
    pi(prec)
        .div(&Ball::from_int(den), prec)
        .expect("positive divisor")
}

/// `2^(6m) q^3`.
pub fn psi_height_bound(q: &BigInt, m: usize) -> BigInt {
    (BigInt::one() << (6 * m)) * q * q * q
}

mod as_string {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Recipe for a real number, evaluated to balls on demand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogExpr {
    Int(#[serde(with = "as_string")] BigInt),
    Rational(#[serde(with = "as_string")] BigRational),
    /// `ln r` for a positive rational `r`.
    Ln(#[serde(with = "as_string")] BigRational),
    Exp(Box<LogExpr>),
    Add(Vec<LogExpr>),
    Mul(Vec<LogExpr>),
    Neg(Box<LogExpr>),
}

impl LogExpr {
    pub fn int<T: Into<BigInt>>(v: T) -> Self {
        LogExpr::Int(v.into())
    }

    pub fn ln_int<T: Into<BigInt>>(v: T) -> Self {
        LogExpr::Ln(BigRational::from_integer(v.into()))
    }

    pub fn exp(self) -> Self {
        LogExpr::Exp(Box::new(self))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        LogExpr::Neg(Box::new(self))
    }

    pub fn times(self, other: LogExpr) -> Self {
        LogExpr::Mul(vec![self, other])
    }

    pub fn plus(self, other: LogExpr) -> Self {
        LogExpr::Add(vec![self, other])
    }

    /// Enclosure of the value; intermediate steps carry extra guard bits.
    pub fn eval(&self, prec: u32) -> Result<Ball> {
        let wp = prec + 32;
        let b = match self {
            LogExpr::Int(v) => Ball::from_int(v.clone()),
            LogExpr::Rational(r) => Ball::from_rational(r, wp),
            LogExpr::Ln(r) => ln_rational(r, wp)?,
            LogExpr::Exp(x) => {
                let inner = x.eval(wp)?;
                // the argument's own magnitude eats into relative accuracy
                let extra = inner.mid().magnitude().unwrap_or(0).max(0) as u32 + 8;
                exp(&x.eval(wp + extra)?, wp)?
            }
            LogExpr::Add(xs) => {
                let mut acc = Ball::zero();
                for x in xs {
                    acc = acc.add(&x.eval(wp)?, wp);
                }
                acc
            }
            LogExpr::Mul(xs) => {
                let mut acc = Ball::one();
                for x in xs {
                    acc = acc.mul(&x.eval(wp)?, wp);
                }
                acc
            }
            LogExpr::Neg(x) => x.eval(wp)?.neg(),
        };
        Ok(b)
    }
}

impl fmt::Display for LogExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogExpr::Int(v) => write!(f, "{v}"),
            LogExpr::Rational(r) => write!(f, "({r})"),
            LogExpr::Ln(r) => write!(f, "ln({r})"),
            LogExpr::Exp(x) => write!(f, "exp({x})"),
            LogExpr::Neg(x) => write!(f, "-({x})"),
            LogExpr::Add(xs) | LogExpr::Mul(xs) => {
                let op = if matches!(self, LogExpr::Add(_)) { " + " } else { " * " };
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A positive real `x` held as an expression for `ln x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HugeNumber {
    pub log: LogExpr,
}

/// Exponent argument of [`huge_from_power`].
#[derive(Clone, Debug)]
pub enum Exponent {
    Int(BigInt),
    Huge(HugeNumber),
}

impl HugeNumber {
    pub fn from_log(log: LogExpr) -> Self {
        HugeNumber { log }
    }

    /// The positive integer `n`.
    pub fn from_int<T: Into<BigInt>>(n: T) -> Result<Self> {
        let n = n.into();
        if !n.is_positive() {
            return Err(Error::Precondition("HugeNumber needs a positive value".into()));
        }
        Ok(HugeNumber { log: LogExpr::Ln(BigRational::from_integer(n)) })
    }

    /// Enclosure of `ln x`.
    pub fn log_value(&self, prec: u32) -> Result<Ball> {
        self.log.eval(prec)
    }

    /// `self^k`.
    pub fn pow_int<T: Into<BigInt>>(&self, k: T) -> Self {
        HugeNumber { log: LogExpr::int(k).times(self.log.clone()) }
    }

    /// `self * other`.
    pub fn mul(&self, other: &HugeNumber) -> Self {
        HugeNumber { log: self.log.clone().plus(other.log.clone()) }
    }

    /// `1 / self`.
    pub fn recip(&self) -> Self {
        HugeNumber { log: self.log.clone().neg() }
    }
}

/// `base^exponent` for a rational `base > 1` and a positive exponent.
pub fn huge_from_power(base: &BigRational, exponent: Exponent) -> Result<HugeNumber> {
    if base <= &BigRational::one() {
        return Err(Error::Precondition(format!("power base {base} must exceed 1")));
    }
    let e = match exponent {
        Exponent::Int(k) => {
            if !k.is_positive() {
                return Err(Error::Precondition(format!("power exponent {k} must be positive")));
            }
            LogExpr::Int(k)
        }
        Exponent::Huge(h) => h.log.exp(),
    };
    Ok(HugeNumber { log: e.times(LogExpr::Ln(base.clone())) })
}

/// `exp(exp(exp(t)))`, so `ln` of it is `e^(e^t)`.
pub fn huge_exp3(t: u64) -> Result<HugeNumber> {
    if t == 0 {
        return Err(Error::Precondition("exp3 needs t >= 1".into()));
    }
    Ok(HugeNumber { log: LogExpr::int(t).exp().exp() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HugeOrdering {
    Less,
    Greater,
    UndecidedAtCap,
}

/// Compares by refining both log balls until they separate or the cap is hit.
pub fn huge_compare(a: &HugeNumber, b: &HugeNumber, schedule: Schedule) -> Result<(HugeOrdering, u32)> {
    compare_logs(&a.log, &b.log, schedule)
}

/// Certified comparison of two expressions.
pub fn compare_logs(a: &LogExpr, b: &LogExpr, schedule: Schedule) -> Result<(HugeOrdering, u32)> {
    let out = refine(schedule, |prec| {
        let (x, y) = (a.eval(prec)?, b.eval(prec)?);
        Ok(x.certified_cmp(&y).map(|o| match o {
            std::cmp::Ordering::Less => HugeOrdering::Less,
            _ => HugeOrdering::Greater,
        }))
    })?;
    Ok(match out {
        Outcome::Decided { value, precision } => (value, precision),
        Outcome::Undecided { cap } => (HugeOrdering::UndecidedAtCap, cap),
    })
}

/// Certified sign of an expression: `Some(true)` positive, `Some(false)`
/// negative, `None` undecided at the cap.
pub fn certified_sign(a: &LogExpr, schedule: Schedule) -> Result<(Option<bool>, u32)> {
    let zero = LogExpr::int(0);
    let (o, p) = compare_logs(a, &zero, schedule)?;
    Ok(match o {
        HugeOrdering::Less => (Some(false), p),
        HugeOrdering::Greater => (Some(true), p),
        HugeOrdering::UndecidedAtCap => (None, p),
    })
}

impl HugeOrdering {
    pub fn is_less(self) -> bool {
        self == HugeOrdering::Less
    }
}

/// `ln` of `(2q)^(450 m^5 2^(18 m^2) q^(6m))`.
pub fn eq1_bound(q: &BigInt, m: usize) -> Result<HugeNumber> {
    let k = BigInt::from(450u32)
        * num_traits::pow(BigInt::from(m), 5)
        * (BigInt::one() << (18 * m * m))
        * num_traits::pow(q.clone(), 6 * m);
    huge_from_power(&BigRational::from_integer(q * 2), Exponent::Int(k))
}

/// `(72 m^2 (6q)^(4m))^(10 m^3 (6q)^(2m))`.
pub fn chain_tail_bound(q: &BigInt, m: usize) -> Result<HugeNumber> {
    let six_q: BigInt = q * 6;
    let base = BigInt::from(72 * m * m) * num_traits::pow(six_q.clone(), 4 * m);
    let e = BigInt::from(10 * m * m * m) * num_traits::pow(six_q, 2 * m);
    huge_from_power(&BigRational::from_integer(base), Exponent::Int(e))
}

/// `n^n 2^(n(4m^2+1)) (2n+9)^(3mn)`, exactly.
pub fn denominator_bound(n: u64, m: usize) -> BigInt {
    let nb = BigInt::from(n);
    num_traits::pow(nb.clone(), n as usize)
        * (BigInt::one() << (n as usize * (4 * m * m + 1)))
        * num_traits::pow(BigInt::from(2 * n + 9), 3 * m * n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn rat(a: i64, b: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_rational(&q(a, b))
    }

    #[test]
    fn naive_heights() {
        assert_eq!(naive_height(&rat(1, 2)), 2.into());
        assert_eq!(naive_height(&rat(2, 5)), 5.into());
        let r = crate::realroots::isolate_in_unit_half(&crate::poly::IntPolynomial::from_i64(&[-2, 0, 9])).remove(0);
        assert_eq!(naive_height(&r), 9.into());
    }

    #[test]
    fn weil_examples() {
        assert!(weil_sandwich_check(&rat(1, 2)).unwrap());
        assert!(weil_sandwich_check(&rat(0, 1)).unwrap());
        assert!(weil_sandwich_check(&rat(2, 5)).unwrap());
        let r = crate::realroots::isolate_in_unit_half(&crate::poly::IntPolynomial::from_i64(&[-2, 0, 9])).remove(0);
        assert!(matches!(weil_sandwich_check(&r), Err(Error::UnsupportedDegree { .. })));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(diff_height_bound(&2.into(), &3.into(), 1), 96.into());
        assert_eq!(diff_height_bound(&1.into(), &1.into(), 1), 16.into());
        assert_eq!(diff_height_bound(&2.into(), &2.into(), 2), 1_048_576.into());
        assert_eq!(modulus_lower_bound(&1.into()), q(1, 2));
        assert_eq!(modulus_lower_bound(&6.into()), q(1, 12));
        assert_eq!(modulus_lower_bound(&5.into()), q(1, 10));
        assert_eq!(psi_height_bound(&1.into(), 1), 64.into());
        assert_eq!(psi_height_bound(&2.into(), 1), 512.into());
        assert_eq!(psi_height_bound(&1.into(), 2), 4096.into());
        assert_eq!(denominator_bound(6, 1), BigInt::from(46656) * (BigInt::one() << 30usize) * num_traits::pow(BigInt::from(21), 18));
    }

    #[test]
    fn cos_separation_values() {
        let b = cos_separation_bound(2, 1, 64);
        assert!((b.to_f64() - std::f64::consts::PI / 256.0).abs() < 1e-15);
        let b = cos_separation_bound(3, 1, 64);
        assert!((b.to_f64() - std::f64::consts::PI / 864.0).abs() < 1e-15);
        let b = cos_separation_bound(1, 1, 64);
        assert!((b.to_f64() - std::f64::consts::PI / 32.0).abs() < 1e-15);
    }

    #[test]
    fn power_logs() {
        let h = huge_from_power(&q(2, 1), Exponent::Int(10.into())).unwrap();
        assert!((h.log_value(64).unwrap().to_f64() - 10.0 * 2f64.ln()).abs() < 1e-12);
        let k = BigInt::from(450u64 * 262_144 * 262_144);
        assert_eq!(k, BigInt::from(30_923_764_531_200u64));
        let h = huge_from_power(&q(16, 1), Exponent::Int(k)).unwrap();
        let v = h.log_value(64).unwrap().to_f64();
        assert!((v / 8.577e13 - 1.0).abs() < 1e-3, "{v}");
        assert!(huge_from_power(&q(16, 1), Exponent::Int(0.into())).is_err());
        assert!(huge_from_power(&q(1, 1), Exponent::Int(3.into())).is_err());
        assert_eq!(eq1_bound(&8.into(), 1).unwrap(), h);
    }

    #[test]
    fn exp3_logs() {
        let v = huge_exp3(1).unwrap().log_value(64).unwrap();
        assert!((v.to_f64() - std::f64::consts::E.exp()).abs() < 1e-12);
        let v = huge_exp3(8).unwrap().log_value(64).unwrap();
        // e^(e^8) = 10^1294.6...
        let log10 = v.mid().magnitude().unwrap() as f64 * 2f64.log10();
        assert!((log10 - 1294.6).abs() < 0.5, "{log10}");
        assert!(huge_exp3(0).is_err());
    }

    #[test]
    fn compare_examples() {
        let s = Schedule::with_cap(4096);
        let a = eq1_bound(&8.into(), 1).unwrap();
        let b = huge_exp3(8).unwrap();
        assert_eq!(huge_compare(&a, &b, s).unwrap().0, HugeOrdering::Less);
        assert_eq!(huge_compare(&b, &a, s).unwrap().0, HugeOrdering::Greater);
        let c = huge_exp3(9).unwrap();
        assert_eq!(huge_compare(&b, &c, s).unwrap().0, HugeOrdering::Less);
        let d = huge_from_power(&q(2, 1), Exponent::Int(10.into())).unwrap();
        assert_eq!(huge_compare(&d, &d.clone(), Schedule::with_cap(512)).unwrap().0, HugeOrdering::UndecidedAtCap);
    }

    #[test]
    fn exp3_at_twenty_is_representable() {
        let v = huge_exp3(20).unwrap().log_value(64).unwrap();
        assert!(v.mid().magnitude().unwrap() > 690_000_000);
    }

    #[test]
    fn serde_round_trip() {
        let h = eq1_bound(&9.into(), 2).unwrap().mul(&huge_exp3(8).unwrap().recip());
        let s = serde_json::to_string(&h).unwrap();
        let back: HugeNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
