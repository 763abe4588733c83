//! Minimal polynomials of `psi(a)` and of differences `y - x`, via resultants
//! interpolated at integer nodes and a certified factor recombination over
//! complex root inclusion disks.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::modp::certify_irreducible;
use crate::poly::{interpolate_integer, resultant, IntPolynomial};
use crate::polyenum::{divisors_of, is_irreducible};
use crate::realroots::{sturm_count, AlgebraicNumber, DyadicInterval};
use crate::rigor::{refine, Ball, Outcome, Schedule};

/// Largest input degree accepted by the elimination routines.
pub const MAX_DEGREE: usize = 3;

/// Precision schedule for isolating roots of eliminants.
const ISOLATION: Schedule = Schedule { start: 64, cap: 8192 };

/// Exact `x / (2(1 + x^2))`.
pub fn psi_rational(x: &BigRational) -> BigRational {
    let one = BigRational::one();
    x / (BigRational::from_integer(2.into()) * (one + x * x))
}

/// Ball enclosure of `x / (2(1 + x^2))`.
pub fn psi_ball(x: &Ball, prec: u32) -> Result<Ball> {
    let den = Ball::one().add(&x.sqr(prec), prec).shl(1);
    x.div(&den, prec)
}

/// `R(z)` from values at `z = start, start + 1, ..., start + deg`.
fn interpolate_from(start: i64, values: &[BigInt]) -> IntPolynomial {
    let r = interpolate_integer(values).expect("resultant values come from an integer polynomial");
    r.shift(&BigInt::from(-start))
}

/// The algebraic number `psi(a)`.
pub fn psi_algebraic(a: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if let Some(r) = a.as_rational() {
        return Ok(AlgebraicNumber::from_rational(&psi_rational(&r)));
    }
    let m = a.degree();
    if m > MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree: m, context: "psi elimination supports degree <= 3" });
    }
    let p = a.minpoly();
    // R(z) = Res_x(p(x), 2z x^2 - x + 2z); nodes avoid z = 0 where the
    // second argument drops degree
    let values: Vec<BigInt> = (1..=(m as i64 + 1))
        .map(|z| {
            let q = IntPolynomial::from_i64(&[2 * z, -1, 2 * z]);
            resultant(p, &q)
        })
        .collect();
    let r = interpolate_from(1, &values);
    let target = |prec: u32| psi_ball(&a.to_ball(prec), prec);
    minimal_factor(&r, &target)
}

/// The algebraic number `y - x`.
pub fn difference(x: &AlgebraicNumber, y: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if let (Some(a), Some(b)) = (x.as_rational(), y.as_rational()) {
        return Ok(AlgebraicNumber::from_rational(&(b - a)));
    }
    let (mp, mq) = (x.degree(), y.degree());
    if mp.max(mq) > MAX_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree: mp.max(mq),
            context: "difference elimination supports degree <= 3",
        });
    }
    let (p, q) = (x.minpoly(), y.minpoly());
    // R(z) = Res_w(q(w), p(w - z)), of degree mp * mq in z
    let values: Vec<BigInt> = (0..=(mp * mq) as i64)
        .map(|z| resultant(q, &p.shift(&BigInt::from(-z))))
        .collect();
    let r = interpolate_from(0, &values);
    let target = |prec: u32| Ok(y.to_ball(prec).sub(&x.to_ball(prec), prec));
    minimal_factor(&r, &target)
}

/// Minimal polynomial of the root of `r` enclosed by `target`, together with an
/// isolating interval.
///
/// Complex roots of `r` are approximated numerically and then enclosed in
/// disjoint inclusion disks of radius `n |W_i|` (Weierstrass corrections), each
/// holding exactly one root. Any integer factor vanishing at the target has
/// coefficients `c * e_k(S)` for a root subset `S` containing the target and a
/// divisor `c` of the leading coefficient; subsets are tried by size, and a
/// subset is excluded when some coefficient disk holds no integer.
pub fn minimal_factor(
    r: &IntPolynomial,
    target: &dyn Fn(u32) -> Result<Ball>,
) -> Result<AlgebraicNumber> {
    if r.is_zero() {
        return Err(Error::Precondition("eliminant vanished identically".into()));
    }
    let r = r.squarefree_part();
    if r.degree() == 0 {
        return Err(Error::Precondition("eliminant has no roots".into()));
    }
    if r.degree() == 1 || certify_irreducible(&r) || r.degree() <= 3 && is_irreducible(&r)? {
        return isolate_target(r, target);
    }
    let n = r.degree();
    if n > 16 {
        return Err(Error::UnsupportedDegree { degree: n, context: "factor recombination" });
    }
    let disks = root_disks(&r)?;
    let near = identify_target(&disks, target)?;
    let leads = divisors_of(&r.leading())?;
    for size in 1..n {
        let mut inconclusive = false;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size || mask & (1 << near) == 0 {
                continue;
            }
            let mut prod = vec![CDisk::exact(Dyadic::one(), Dyadic::zero())];
            for (i, s) in disks.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod = mul_linear(&prod, s);
                }
            }
            for c in &leads {
                match integer_point(&prod, c) {
                    Lattice::Empty => {}
                    Lattice::Ambiguous => inconclusive = true,
                    Lattice::Unique(g) => {
                        if let Some(h) = r.div_exact(&g) {
                            if excludes_target(&h, target)? {
                                return isolate_target(g.normalized(), target);
                            }
                        }
                    }
                }
            }
        }
        if inconclusive {
            return Err(Error::RefinementCap {
                what: format!("factor recombination for {r}"),
                cap: 53,
            });
        }
    }
    isolate_target(r, target)
}

fn enclosure(b: &Ball) -> DyadicInterval {
    DyadicInterval { lo: b.lower(), hi: b.upper() }
}

/// Whether `h` certifiably has no root at the target.
fn excludes_target(h: &IntPolynomial, target: &dyn Fn(u32) -> Result<Ball>) -> Result<bool> {
    let out = refine(ISOLATION, |prec| {
        let iv = enclosure(&target(prec)?);
        Ok((sturm_count(h, &iv) == 0).then_some(()))
    })?;
    Ok(out.is_decided())
}

fn isolate_target(g: IntPolynomial, target: &dyn Fn(u32) -> Result<Ball>) -> Result<AlgebraicNumber> {
    if g.degree() == 1 {
        let root = BigRational::new(-g.coeff(0), g.coeff(1));
        return Ok(AlgebraicNumber::from_rational(&root));
    }
    match refine(ISOLATION, |prec| {
        let iv = enclosure(&target(prec)?);
        Ok(AlgebraicNumber::new(g.clone(), iv).ok())
    })? {
        Outcome::Decided { value, .. } => Ok(value),
        Outcome::Undecided { cap } => Err(Error::RefinementCap { what: format!("isolating a root of {g}"), cap }),
    }
}

fn up(d: Dyadic) -> Dyadic {
    d.round(30, Round::Ceil)
}

/// Closed complex disk with exact dyadic center.
#[derive(Clone, Debug)]
struct CDisk {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
}

impl CDisk {
    fn exact(re: Dyadic, im: Dyadic) -> Self {
        CDisk { re, im, rad: Dyadic::zero() }
    }

    /// Upper bound on the modulus of the center.
    fn norm_upper(&self) -> Dyadic {
        self.re.abs().add(&self.im.abs())
    }

    fn mul(&self, o: &CDisk) -> CDisk {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        let rad = self
            .norm_upper()
            .mul(&o.rad)
            .add(&o.norm_upper().mul(&self.rad))
            .add(&self.rad.mul(&o.rad));
        CDisk { re, im, rad: up(rad) }
    }

    fn add(&self, o: &CDisk) -> CDisk {
        CDisk { re: self.re.add(&o.re), im: self.im.add(&o.im), rad: up(self.rad.add(&o.rad)) }
    }

    fn neg(&self) -> CDisk {
        CDisk { re: self.re.neg(), im: self.im.neg(), rad: self.rad.clone() }
    }

    /// Whether the real point `x` lies in the disk.
    fn contains_real(&self, x: &Dyadic) -> bool {
        let dx = x.sub(&self.re);
        dx.mul(&dx).add(&self.im.mul(&self.im)) <= self.rad.mul(&self.rad)
    }
}

/// `prod * (x - s)` in disk arithmetic.
fn mul_linear(prod: &[CDisk], s: &CDisk) -> Vec<CDisk> {
    let zero = CDisk::exact(Dyadic::zero(), Dyadic::zero());
    let mut next = vec![zero; prod.len() + 1];
    for (k, c) in prod.iter().enumerate() {
        next[k + 1] = next[k + 1].add(c);
        next[k] = next[k].add(&c.mul(s).neg());
    }
    next
}

enum Lattice {
    Empty,
    Unique(IntPolynomial),
    Ambiguous,
}

/// The integer vectors inside `c * prod`, coefficientwise.
fn integer_point(prod: &[CDisk], c: &BigInt) -> Lattice {
    let cd = Dyadic::from_int(c.clone());
    let mut coeffs = Vec::with_capacity(prod.len());
    let mut unique = true;
    for z in prod {
        let re = z.re.mul(&cd);
        let im = z.im.mul(&cd);
        let rad = z.rad.mul(&cd.abs());
        if im.abs() > rad {
            return Lattice::Empty;
        }
        let lo = re.sub(&rad).ceil();
        let hi = re.add(&rad).floor();
        if lo > hi {
            return Lattice::Empty;
        }
        unique &= lo == hi;
        coeffs.push(lo);
    }
    if unique {
        Lattice::Unique(IntPolynomial::new(coeffs))
    } else {
        Lattice::Ambiguous
    }
}

/// Disjoint inclusion disks, one per complex root of the squarefree `p`.
fn root_disks(p: &IntPolynomial) -> Result<Vec<CDisk>> {
    let n = p.degree();
    let approx = complex_roots(p);
    let centers: Vec<(Dyadic, Dyadic)> = approx
        .iter()
        .map(|z| {
            let re = Dyadic::from_f64(z.re).unwrap_or_else(Dyadic::zero);
            let im = Dyadic::from_f64(z.im).unwrap_or_else(Dyadic::zero);
            (re, im)
        })
        .collect();
    let lead = Dyadic::from_int(p.leading()).abs();
    let mut disks = Vec::with_capacity(n);
    for (i, (re, im)) in centers.iter().enumerate() {
        let z = CDisk::exact(re.clone(), im.clone());
        // exact value p(z_i)
        let mut v = CDisk::exact(Dyadic::zero(), Dyadic::zero());
        for c in p.coeffs().iter().rev() {
            v = v.mul(&z).add(&CDisk::exact(Dyadic::from_int(c.clone()), Dyadic::zero()));
        }
        let num = v.norm_upper().mul(&Dyadic::from_int(n as u64));
        let mut den = lead.clone();
        for (j, (re2, im2)) in centers.iter().enumerate() {
            if i != j {
                let lower = re.sub(re2).abs().max(im.sub(im2).abs());
                den = den.mul(&lower);
            }
        }
        if den.is_zero() {
            return Err(Error::RefinementCap { what: format!("separating the roots of {p}"), cap: 53 });
        }
        let rad = Dyadic::from_rational_at(&(num.to_rational() / den.to_rational()), 80, Round::Ceil);
        disks.push(CDisk { re: re.clone(), im: im.clone(), rad: up(rad) });
    }
    for i in 0..n {
        for j in i + 1..n {
            let sep = disks[i].re.sub(&disks[j].re).abs().max(disks[i].im.sub(&disks[j].im).abs());
            if disks[i].rad.add(&disks[j].rad) >= sep {
                return Err(Error::RefinementCap { what: format!("separating the roots of {p}"), cap: 53 });
            }
        }
    }
    Ok(disks)
}

/// Index of the disk containing the (real) target root.
fn identify_target(disks: &[CDisk], target: &dyn Fn(u32) -> Result<Ball>) -> Result<usize> {
    let out = refine(ISOLATION, |prec| {
        let iv = enclosure(&target(prec)?);
        Ok(disks
            .iter()
            .position(|d| d.contains_real(&iv.lo) && d.contains_real(&iv.hi)))
    })?;
    match out {
        Outcome::Decided { value, .. } => Ok(value),
        Outcome::Undecided { cap } => Err(Error::RefinementCap { what: "locating the target root".into(), cap }),
    }
}

/// Complex roots by the Aberth-Ehrlich iteration in double precision.
pub fn complex_roots(p: &IntPolynomial) -> Vec<Complex64> {
    let n = p.degree();
    let lead = p.leading().to_string().parse::<f64>().unwrap_or(f64::MAX);
    let a: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|c| Complex64::new(c.to_string().parse::<f64>().unwrap_or(f64::MAX) / lead, 0.0))
        .collect();
    let radius = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            d = d * x + v;
            v = v * x + c;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v == Complex64::zero() {
                continue;
            }
            let ratio = v / d;
            let sum: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realroots::isolate_in_unit_half;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn psi_rational_examples() {
        assert_eq!(psi_rational(&q(0, 1)), q(0, 1));
        assert_eq!(psi_rational(&q(1, 1)), q(1, 4));
        assert_eq!(psi_rational(&q(1, 2)), q(1, 5));
    }

    #[test]
    fn psi_of_quadratic() {
        let a = isolate_in_unit_half(&p(&[-2, 0, 9])).remove(0);
        let b = psi_algebraic(&a).unwrap();
        assert_eq!(b.degree(), 2);
        let x = (2f64 / 9.0).sqrt();
        let expect = x / (2.0 * (1.0 + x * x));
        assert!((b.to_f64() - expect).abs() < 1e-12);
        assert!((b.to_f64() - 0.192_85).abs() < 1e-5);
        assert!(b.height() <= BigInt::from(4096 * 729));
        // independent check: psi(x) is a root of the returned polynomial
        assert!(b.minpoly().eval_f64(expect).abs() < 1e-6 * b.height().to_string().parse::<f64>().unwrap());
    }

    #[test]
    fn psi_can_drop_degree() {
        // 2 + sqrt(3) has minimal polynomial x^2 - 4x + 1 and maps to 1/8
        let a = AlgebraicNumber::new(p(&[1, -4, 1]), DyadicInterval::new("3".parse().unwrap(), "4".parse().unwrap()).unwrap()).unwrap();
        let b = psi_algebraic(&a).unwrap();
        assert_eq!(b.as_rational(), Some(q(1, 8)));
    }

    #[test]
    fn differences() {
        let half = AlgebraicNumber::from_rational(&q(1, 2));
        let third = AlgebraicNumber::from_rational(&q(1, 3));
        assert_eq!(difference(&half, &third).unwrap().as_rational(), Some(q(-1, 6)));

        let r2 = isolate_in_unit_half(&p(&[-2, 0, 9])).remove(0);
        let d = difference(&half, &r2).unwrap();
        assert_eq!(d.degree(), 2);
        assert!((d.to_f64() - ((2f64 / 9.0).sqrt() - 0.5)).abs() < 1e-12);
        // sqrt(2)/3 - sqrt(2)/4 = sqrt(2)/12 stays quadratic though the
        // eliminant has degree 4
        let r3 = AlgebraicNumber::new(p(&[-1, 0, 8]), DyadicInterval::new("0".parse().unwrap(), "0.5".parse().unwrap()).unwrap()).unwrap();
        let d = difference(&r3, &r2).unwrap();
        assert_eq!(d.degree(), 2);
        assert_eq!(d.minpoly(), &p(&[-1, 0, 72]));
    }

    #[test]
    fn cubic_difference_degree() {
        let a = isolate_in_unit_half(&p(&[-1, 0, 0, 9])).remove(0);
        let b = isolate_in_unit_half(&p(&[-1, 1, 0, 5])).remove(0);
        let d = difference(&a, &b).unwrap();
        assert_eq!(d.degree(), 9);
        assert!((d.to_f64() - (b.to_f64() - a.to_f64())).abs() < 1e-12);
    }

    #[test]
    fn aberth_finds_roots() {
        let r = complex_roots(&p(&[-6, 11, -6, 1]));
        let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (x, e) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-9);
        }
    }
}
