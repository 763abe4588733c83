//! The sets `S_k`: irreducible, primitive integer polynomials of a fixed
//! degree and exact naive height `k`, one sign-normalized representative each.

use num_bigint::BigInt;
use num_integer::{binomial, Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::par::{map_range, Exec};
use crate::poly::IntPolynomial;

/// Largest coefficient grid `(2k+1)^(m+1)` that [`enumerate_sk`] will scan.
pub const DEFAULT_GRID_BUDGET: u128 = 50_000_000;

/// Largest number of candidate factors tried by the degree >= 4 factor search.
pub const DEFAULT_FACTOR_BUDGET: u128 = 2_000_000;

/// Largest integer whose divisors are listed by trial division.
const DIVISOR_LIMIT: u128 = 1 << 62;

/// Gcd of all coefficients; rejects the zero polynomial.
pub fn content(p: &IntPolynomial) -> Result<BigInt> {
    p.content()
}

/// Positive divisors of `n != 0` by trial division.
pub fn divisors_of(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n
        .abs()
        .to_u128()
        .filter(|&v| v <= DIVISOR_LIMIT)
        .ok_or(Error::ResourceCap {
            what: "divisor enumeration",
            needed: u128::MAX,
            budget: DIVISOR_LIMIT,
        })?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let r = n.sqrt();
    for d in 1..=r {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d != n / d {
                large.push(BigInt::from(n / d));
            }
        }
    }
    large.reverse();
    small.extend(large);
    Ok(small)
}

/// Whether `p` has a rational root (rational root theorem).
pub fn has_rational_root(p: &IntPolynomial) -> Result<bool> {
    if p.degree() == 0 {
        return Ok(false);
    }
    let a0 = p.coeff(0);
    if a0.is_zero() {
        return Ok(true);
    }
    let num_divs = divisors_of(&a0)?;
    let den_divs = divisors_of(&p.leading())?;
    for q in &den_divs {
        for n in &num_divs {
            if !n.gcd(q).is_one() {
                continue;
            }
            for sign in [1, -1] {
                let r = BigRational::new(n * sign, q.clone());
                if p.sign_at(&r) == num_bigint::Sign::NoSign {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Irreducibility over the rationals for primitive `p` of degree >= 1.
/// Degree >= 4 tries a modular factor-degree certificate before a bounded
/// brute-force factor search.
pub fn is_irreducible(p: &IntPolynomial) -> Result<bool> {
    is_irreducible_with_budget(p, DEFAULT_FACTOR_BUDGET)
}

pub fn is_irreducible_with_budget(p: &IntPolynomial, budget: u128) -> Result<bool> {
    let d = p.degree();
    if p.is_zero() || d == 0 {
        return Err(Error::Precondition(
            "irreducibility needs degree >= 1".into(),
        ));
    }
    if d == 1 {
        return Ok(true);
    }
    if has_rational_root(p)? {
        return Ok(false);
    }
    if d <= 3 || crate::modp::certify_irreducible(p) {
        return Ok(true);
    }
    for fd in 2..=d / 2 {
        if find_factor_of_degree(p, fd, budget)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Brute-force search for an integer factor of degree `fd`, with coefficient
/// magnitudes limited by the Mignotte bound `C(fd, j) * ||p||_2`.
pub fn find_factor_of_degree(
    p: &IntPolynomial,
    fd: usize,
    budget: u128,
) -> Result<Option<IntPolynomial>> {
    let norm2 = p
        .coeffs()
        .iter()
        .map(|c| c * c)
        .fold(BigInt::zero(), |a, b| a + b);
    let norm = norm2.sqrt() + 1u32;
    let leads = divisors_of(&p.leading())?;
    let consts = divisors_of(&p.coeff(0))?;
    let bounds: Vec<BigInt> = (1..fd)
        .map(|j| binomial(BigInt::from(fd), BigInt::from(j)) * &norm)
        .collect();
    let mut count: u128 = (leads.len() as u128) * (2 * consts.len() as u128);
    for b in &bounds {
        let width = (b * 2u32 + 1u32).to_u128().unwrap_or(u128::MAX);
        count = count.saturating_mul(width);
    }
    if count > budget {
        return Err(Error::ResourceCap {
            what: "factor search",
            needed: count,
            budget,
        });
    }
    let f1 = p.eval_int(&BigInt::one());
    let fm1 = p.eval_int(&BigInt::from(-1));
    let mut middle: Vec<BigInt> = bounds.iter().map(|b| -b).collect();
    loop {
        for lead in &leads {
            for c0 in &consts {
                for c0 in [c0.clone(), -c0] {
                    let mut coeffs = Vec::with_capacity(fd + 1);
                    coeffs.push(c0);
                    coeffs.extend(middle.iter().cloned());
                    coeffs.push(lead.clone());
                    let g = IntPolynomial::new(coeffs);
                    let g1 = g.eval_int(&BigInt::one());
                    if g1.is_zero() || !f1.is_multiple_of(&g1) {
                        continue;
                    }
                    let gm1 = g.eval_int(&BigInt::from(-1));
                    if gm1.is_zero() || !fm1.is_multiple_of(&gm1) {
                        continue;
                    }
                    if p.div_exact(&g).is_some() {
                        return Ok(Some(g));
                    }
                }
            }
        }
        // odometer over the middle coefficients
        let mut i = 0;
        loop {
            if i == middle.len() {
                return Ok(None);
            }
            if middle[i] < bounds[i] {
                middle[i] += 1;
                break;
            }
            middle[i] = -bounds[i].clone();
            i += 1;
        }
    }
}

/// `S_k` for degree `m`: sign-normalized, primitive, irreducible polynomials of
/// degree `m` and height exactly `k`, sorted.
pub fn enumerate_sk(m: usize, k: u64) -> Result<Vec<IntPolynomial>> {
    enumerate_sk_with(m, k, DEFAULT_GRID_BUDGET, Exec::default())
}

pub fn enumerate_sk_with(m: usize, k: u64, budget: u128, exec: Exec) -> Result<Vec<IntPolynomial>> {
    if m == 0 || k == 0 {
        return Err(Error::Precondition("enumerate_sk needs m >= 1 and k >= 1".into()));
    }
    let side = 2 * k as u128 + 1;
    let grid = side
        .checked_pow(m as u32 + 1)
        .unwrap_or(u128::MAX);
    if grid > budget {
        return Err(Error::ResourceCap {
            what: "coefficient grid",
            needed: grid,
            budget,
        });
    }
    let k = k as i64;
    // one task per leading coefficient: lexicographic scan of the rest
    let rest = (2 * k + 1).pow(m as u32) as u64;
    let chunks = map_range(exec, 1..(k as u64 + 1), |lead| -> Result<Vec<IntPolynomial>> {
        let mut found = Vec::new();
        let mut coeffs = vec![0i64; m + 1];
        coeffs[m] = lead as i64;
        for idx in 0..rest {
            let mut t = idx;
            for c in coeffs.iter_mut().take(m) {
                *c = (t % (2 * k as u64 + 1)) as i64 - k;
                t /= 2 * k as u64 + 1;
            }
            if coeffs.iter().map(|c| c.abs()).max() != Some(k) {
                continue;
            }
            if coeffs.iter().fold(0i64, |g, &c| g.gcd(&c)) != 1 {
                continue;
            }
            let p = IntPolynomial::from_i64(&coeffs);
            if is_irreducible(&p)? {
                found.push(p);
            }
        }
        Ok(found)
    });
    let mut all = Vec::new();
    for chunk in chunks {
        all.extend(chunk?);
    }
    all.sort();
    Ok(all)
}

/// The bound `(m+1)(2k+1)^m` on `|S_k|`. It holds for the sign-normalized
/// count but not always for the count with both signs (`m = 1`, `k` prime).
pub fn sk_size_bound(m: usize, k: u64) -> BigInt {
    BigInt::from(m + 1) * num_traits::pow(BigInt::from(2 * k + 1), m)
}
