//! Dense univariate polynomials over the integers.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::rigor::Ball;

/// Integer polynomial, coefficients indexed by power (low to high), with no
/// trailing zero coefficients. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPolynomial::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        IntPolynomial::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Naive height: the largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Gcd of all coefficients.
    pub fn content(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Err(Error::Precondition(
                "content of the zero polynomial".into(),
            ));
        }
        Ok(self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c)))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_ok_and(|c| c.is_one())
    }

    /// Primitive part with positive leading coefficient.
    pub fn normalized(&self) -> IntPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content().unwrap();
        if self.leading().is_negative() {
            c = -c;
        }
        IntPolynomial::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn is_normalized(&self) -> bool {
        !self.is_zero() && self.leading().is_positive() && self.is_primitive()
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `p(x + c)` by repeated synthetic division.
    pub fn shift(&self, c: &BigInt) -> IntPolynomial {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        IntPolynomial::new(a)
    }

    /// `x^d p(1/x)`.
    pub fn reversed(&self) -> IntPolynomial {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPolynomial::new(c)
    }

    /// `p(-x)`.
    pub fn reflected(&self) -> IntPolynomial {
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let (num, den) = (x.numer(), x.denom());
        // sum c_i num^i den^(d-i), divided by den^d
        let d = self.degree();
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        BigRational::new(acc, num_traits::pow(den.clone(), d))
    }

    /// Sign of `p(x)` at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> Sign {
        let (num, den) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        acc.sign()
    }

    pub fn sign_at_dyadic(&self, x: &Dyadic) -> Sign {
        let (man, exp) = (x.mantissa(), x.exponent());
        if exp >= 0 {
            return self.sign_at(&x.to_rational());
        }
        // den = 2^-exp; Horner in scaled integers
        let shift = (-exp) as usize;
        let mut acc = BigInt::zero();
        for (k, c) in self.coeffs.iter().rev().enumerate() {
            acc = acc * man + (c << (shift * k));
        }
        acc.sign()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_ball(&self, x: &Ball, prec: u32) -> Ball {
        self.coeffs.iter().rev().fold(Ball::zero(), |acc, c| {
            acc.mul(x, prec).add(&Ball::from_int(c.clone()), prec)
        })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn pseudo_rem(&self, b: &IntPolynomial) -> IntPolynomial {
        assert!(!b.is_zero(), "pseudo-remainder by zero");
        let mut r = self.coeffs.clone();
        let db = b.degree();
        let lb = b.leading();
        if self.is_zero() || self.degree() < db {
            return self.clone();
        }
        let steps = self.degree() - db + 1;
        let mut done = 0;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[dr - db + j] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            done += 1;
        }
        let mut out = IntPolynomial::new(r);
        for _ in done..steps {
            out = out.scale(&lb);
        }
        out
    }

    /// Exact quotient over the integers, if `other` divides `self`.
    pub fn div_exact(&self, other: &IntPolynomial) -> Option<IntPolynomial> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        if self.degree() < other.degree() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let db = other.degree();
        let lb = other.leading();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for i in (0..q.len()).rev() {
            let (qi, rem) = r[i + db].div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in other.coeffs.iter().enumerate() {
                r[i + j] -= &qi * bc;
            }
            q[i] = qi;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPolynomial::new(q))
        } else {
            None
        }
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.normalized(), other.normalized())
        } else {
            (other.normalized(), self.normalized())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.normalized();
        }
        a.normalized()
    }

    /// `p / gcd(p, p')`, normalized.
    pub fn squarefree_part(&self) -> IntPolynomial {
        if self.degree() == 0 {
            return self.normalized();
        }
        let g = self.gcd(&self.derivative());
        self.normalized()
            .div_exact(&g)
            .expect("gcd divides its argument")
            .normalized()
    }
}

/// Resultant of two polynomials via the Sylvester matrix and fraction-free
/// (Bareiss) elimination. Formal degrees are taken from the coefficient vectors.
pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> BigInt {
    let (m, n) = (p.degree(), q.degree());
    if p.is_zero() || q.is_zero() {
        return BigInt::zero();
    }
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            a[i][i + j] = p.coeff(m - j);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            a[n + i][i + j] = q.coeff(n - j);
        }
    }
    bareiss_det(a)
}

/// Determinant by fraction-free Gaussian elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Integer polynomial of degree at most `values.len() - 1` through
/// `(x_i, values[i])`, `x_i = i`. Fails if the interpolant is not integral.
pub fn interpolate_integer(values: &[BigInt]) -> Option<IntPolynomial> {
    // Newton divided differences over the rationals, nodes 0, 1, 2, ...
    let n = values.len();
    let mut dd: Vec<BigRational> = values.iter().cloned().map(BigRational::from_integer).collect();
    let mut newton = Vec::with_capacity(n);
    for level in 0..n {
        newton.push(dd[0].clone());
        for i in 0..n - level - 1 {
            dd[i] = (&dd[i + 1] - &dd[i]) / BigRational::from_integer(BigInt::from(level + 1));
        }
        dd.truncate(n - level - 1);
    }
    // expand sum newton[k] prod_{j<k} (x - j)
    let mut coeffs = vec![BigRational::zero(); n];
    let mut basis = vec![BigRational::one()];
    for (k, c) in newton.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            coeffs[i] += c * b;
        }
        // basis *= (x - k)
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b;
            next[i] -= b * BigRational::from_integer(BigInt::from(k));
        }
        basis = next;
    }
    let ints: Option<Vec<BigInt>> = coeffs
        .into_iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect();
    ints.map(IntPolynomial::new)
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl From<IntPolynomial> for Vec<String> {
    fn from(p: IntPolynomial) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for IntPolynomial {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        let coeffs = v
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::ball::ratio;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn content_examples() {
        assert_eq!(p(&[4, 2]).content().unwrap(), BigInt::from(2));
        assert_eq!(p(&[1, -1, 3]).content().unwrap(), BigInt::from(1));
        assert_eq!(p(&[0, 9, 0, 6]).content().unwrap(), BigInt::from(3));
        assert!(IntPolynomial::zero().content().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-2, 0, 0, 5]).to_string(), "5x^3 - 2");
        assert_eq!(p(&[1, -1, 1]).to_string(), "x^2 - x + 1");
        assert_eq!(p(&[0, 1]).to_string(), "x");
    }

    #[test]
    fn evaluation() {
        let q = p(&[-2, 0, 9]);
        assert_eq!(q.eval_rational(&ratio(1, 3)), ratio(-1, 1));
        assert_eq!(q.sign_at(&ratio(1, 2)), Sign::Plus);
        assert_eq!(q.sign_at_dyadic(&Dyadic::pow2(-2)), Sign::Minus);
        assert_eq!(p(&[-1, 2]).sign_at(&ratio(1, 2)), Sign::NoSign);
    }

    #[test]
    fn shift_and_division() {
        let q = p(&[-1, 0, 1]); // x^2 - 1
        assert_eq!(q.shift(&BigInt::from(1)), p(&[0, 2, 1]));
        assert_eq!(q.div_exact(&p(&[-1, 1])), Some(p(&[1, 1])));
        assert_eq!(q.div_exact(&p(&[-2, 1])), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]).mul(&p(&[1, 1])).mul(&p(&[1, 1]));
        assert_eq!(a.gcd(&a.derivative()), p(&[1, 1]));
        assert_eq!(a.squarefree_part(), p(&[-1, 0, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[1, 1, 1])), p(&[1]));
    }

    #[test]
    fn resultant_of_linear_factors() {
        // monic: prod (a_i - b_j)
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-5, 1])), BigInt::from(-3));
        // shared root gives zero
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[-1, 1])), BigInt::zero());
        // Res(x^2 + 1, x^2 - 2) = prod over +-i of (i^2 - 2) = 9
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[-2, 0, 1])), BigInt::from(9));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = p(&[3, -1, 0, 2]);
        let values: Vec<BigInt> = (0..5).map(|i| q.eval_int(&BigInt::from(i))).collect();
        assert_eq!(interpolate_integer(&values), Some(q));
    }

    #[test]
    fn serde_round_trip() {
        let q = p(&[-2, 0, 9]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"["-2","0","9"]"#);
        assert_eq!(serde_json::from_str::<IntPolynomial>(&s).unwrap(), q);
    }
}
