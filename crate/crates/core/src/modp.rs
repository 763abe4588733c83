//! Polynomials over small prime fields and a factor-degree irreducibility
//! certificate: if the possible degrees of rational factors, read off from the
//! distinct-degree factorizations modulo several primes, have no common value
//! strictly between 0 and `deg p`, then `p` is irreducible over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::poly::IntPolynomial;

const PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Dense polynomial over `Z/pZ`, low-to-high, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Fp {
    c: Vec<u64>,
}

fn inv(a: u64, p: u64) -> u64 {
    let (mut r, mut e, mut b) = (1u64, p - 2, a % p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl Fp {
    fn new(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Fp { c }
    }

    fn from_int(p: &IntPolynomial, m: u64) -> Self {
        let mb = BigInt::from(m);
        Fp::new(
            p.coeffs()
                .iter()
                .map(|x| x.mod_floor(&mb).to_u64().expect("residue fits"))
                .collect(),
        )
    }

    fn x() -> Self {
        Fp { c: vec![0, 1] }
    }

    fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn derivative(&self, p: u64) -> Self {
        Fp::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * (i as u64 % p) % p)
                .collect(),
        )
    }

    fn sub(&self, o: &Fp, p: u64) -> Self {
        let n = self.c.len().max(o.c.len());
        Fp::new(
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).copied().unwrap_or(0);
                    let b = o.c.get(i).copied().unwrap_or(0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    fn mul(&self, o: &Fp, p: u64) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return Fp { c: vec![] };
        }
        let mut r = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = (r[i + j] + a * b) % p;
            }
        }
        Fp::new(r)
    }

    fn divrem(&self, d: &Fp, p: u64) -> (Fp, Fp) {
        let dd = d.deg().expect("division by zero polynomial");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Fp { c: vec![] }, self.clone());
        }
        let li = inv(d.c[dd], p);
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = r[i + dd] * li % p;
            q[i] = coef;
            if coef != 0 {
                for (j, &b) in d.c.iter().enumerate() {
                    r[i + j] = (r[i + j] + p - coef * b % p) % p;
                }
            }
        }
        r.truncate(dd);
        (Fp::new(q), Fp::new(r))
    }

    fn rem(&self, d: &Fp, p: u64) -> Fp {
        self.divrem(d, p).1
    }

    fn gcd(&self, o: &Fp, p: u64) -> Fp {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.c.is_empty() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a
    }

    fn powmod(&self, mut e: u64, m: &Fp, p: u64) -> Fp {
        let mut r = Fp { c: vec![1] };
        let mut b = self.rem(m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, p).rem(m, p);
            }
            b = b.mul(&b, p).rem(m, p);
            e >>= 1;
        }
        r
    }
}

/// Degrees of the irreducible factors of squarefree `f` over `F_p`, by
/// distinct-degree factorization.
fn factor_degrees(f: &Fp, p: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = Fp::x();
    let mut i = 0;
    while let Some(d) = f.deg() {
        if d == 0 {
            break;
        }
        i += 1;
        if 2 * i > d {
            out.push(d);
            break;
        }
        h = h.powmod(p, &f, p);
        let g = f.gcd(&h.sub(&Fp::x(), p), p);
        let gd = g.deg().unwrap_or(0);
        if gd > 0 {
            out.extend(std::iter::repeat_n(i, gd / i));
            f = f.divrem(&g, p).0;
            h = h.rem(&f, p);
        }
    }
    out
}

/// Subset sums of factor degrees: the degrees a rational factor may have.
fn possible_degrees(degrees: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// `true` certifies irreducibility of the primitive `p` over the rationals;
/// `false` means the certificate was inconclusive.
pub fn certify_irreducible(p: &IntPolynomial) -> bool {
    let n = p.degree();
    if n <= 1 {
        return n == 1;
    }
    let mut allowed = vec![true; n + 1];
    let mut used = 0;
    for &q in &PRIMES {
        if (p.leading() % q).is_zero() {
            continue;
        }
        let f = Fp::from_int(p, q);
        if f.gcd(&f.derivative(q), q).deg() != Some(0) {
            continue;
        }
        let reach = possible_degrees(&factor_degrees(&f, q), n);
        for (a, r) in allowed.iter_mut().zip(&reach) {
            *a &= *r;
        }
        used += 1;
        if (1..n).all(|d| !allowed[d]) {
            return true;
        }
        if used >= 12 {
            break;
        }
    }
    false
}
