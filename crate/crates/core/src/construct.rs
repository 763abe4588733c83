//! Inductive construction of `f(x) = sum_n c_n g_n(cos(pi x))` and evaluation
//! of `f` and `phi = f o psi`.
//!
//! The coefficients `c_n` are never stored. A state keeps the exact rational
//! targets `r_n = f(alpha_{n+1})`, and each `c_n` is recovered on demand from
//! `c_n = (r_n - sum_{k<n} c_k g_k(y_{n+1})) / g_n(y_{n+1})`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{psi_algebraic, psi_ball, psi_rational};
use crate::dyadic::{Dyadic, Round};
use crate::enumeration::Enumeration;
use crate::error::{Error, Result};
use crate::heights::denominator_bound;
use crate::realroots::AlgebraicNumber;
use crate::rigor::ball::inv_self_power;
use crate::rigor::elementary::{cos_pi, pi, sin};
use crate::rigor::{Ball, Schedule};

/// First index with a free coefficient; `c_1 = ... = c_5 = 0`.
pub const FIRST_FREE: usize = 6;

/// Bit `n - 6` of the seed selects between the two candidates for `c_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Override {
    pub n: usize,
    pub requested: u8,
    pub used: u8,
}

/// Node and coefficient enclosures at one working precision.
#[derive(Debug)]
struct Prepared {
    ys: Vec<Ball>,
    cs: Vec<Ball>,
}

#[derive(Clone)]
pub struct FunctionState {
    m: usize,
    n_max: usize,
    bits: Vec<u8>,
    targets: BTreeMap<usize, BigRational>,
    moduli: BTreeMap<usize, BigInt>,
    overrides: Vec<Override>,
    denominators_certified: bool,
    schedule: Schedule,
    enumeration: Arc<Enumeration>,
    cache: Arc<Mutex<HashMap<u32, Arc<Prepared>>>>,
}

impl std::fmt::Debug for FunctionState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionState")
            .field("m", &self.m)
            .field("N", &self.n_max)
            .field("bits", &self.bits_string())
            .field("targets", &self.targets)
            .field("overrides", &self.overrides)
            .finish()
    }
}

impl PartialEq for FunctionState {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m
            && self.n_max == o.n_max
            && self.bits == o.bits
            && self.targets == o.targets
            && self.moduli == o.moduli
            && self.overrides == o.overrides
            && self.denominators_certified == o.denominators_certified
            && self.schedule == o.schedule
            && self.enumeration.records() == o.enumeration.records()
    }
}

/// Decodes a hex seed (optional `0x` prefix) into bits, most significant first.
pub fn seed_bits(hex: &str) -> Result<Vec<u8>> {
    let h = hex.trim();
    let h = h.strip_prefix("0x").or_else(|| h.strip_prefix("0X")).unwrap_or(h);
    let mut bits = Vec::with_capacity(4 * h.len());
    for ch in h.chars() {
        let v = ch
            .to_digit(16)
            .ok_or_else(|| Error::Parse(format!("`{hex}` is not a hex string")))?;
        for s in (0..4).rev() {
            bits.push(((v >> s) & 1) as u8);
        }
    }
    Ok(bits)
}

/// Lower bound on `|x|` as an exact rational.
fn abs_lower_rational(b: &Ball) -> BigRational {
    b.abs_lower().to_rational()
}

fn ceil_rational(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

fn floor_rational(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// `sum_{n > N} n^-n <= 2 (N+1)^-(N+1)`.
pub fn tail_bound(n_max: usize) -> BigRational {
    inv_self_power(n_max as u64 + 1) * BigInt::from(2)
}

impl FunctionState {
    /// The state with no coefficient chosen yet (`N = 5`).
    pub fn fresh(enumeration: Enumeration, schedule: Schedule) -> Self {
        FunctionState {
            m: enumeration.m(),
            n_max: FIRST_FREE - 1,
            bits: Vec::new(),
            targets: BTreeMap::new(),
            moduli: BTreeMap::new(),
            overrides: Vec::new(),
            denominators_certified: true,
            schedule,
            enumeration: Arc::new(enumeration),
            cache: Arc::default(),
        }
    }

    /// Builds the enumeration and selects `c_6, ..., c_N` from the given bits
    /// (missing bits are 0).
    pub fn construct(m: usize, n_max: usize, bits: &[u8], schedule: Schedule) -> Result<Self> {
        let e = Enumeration::build(m, n_max + 1)?;
        let mut s = FunctionState::fresh(e, schedule);
        for n in FIRST_FREE..=n_max {
            let bit = bits.get(n - FIRST_FREE).copied().unwrap_or(0);
            s = s.select_coefficient(n, bit)?;
        }
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Largest `n` with `c_n` chosen.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn bits_string(&self) -> String {
        self.bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
    }

    /// Candidate actually used for each `n`, after overrides.
    pub fn effective_bits(&self) -> Vec<u8> {
        let mut out = self.bits.clone();
        for o in &self.overrides {
            out[o.n - FIRST_FREE] = o.used;
        }
        out
    }

    pub fn targets(&self) -> &BTreeMap<usize, BigRational> {
        &self.targets
    }

    /// The candidate spacing denominator `M` used for `c_n`.
    pub fn modulus(&self, n: usize) -> Option<&BigInt> {
        self.moduli.get(&n)
    }

    pub fn overrides(&self) -> &[Override] {
        &self.overrides
    }

    pub fn denominators_certified(&self) -> bool {
        self.denominators_certified
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    pub fn enumeration(&self) -> &Enumeration {
        &self.enumeration
    }

    /// Node enclosures `y_1..y_count` and coefficient enclosures for
    /// `c_6..c_upto`, or `None` if some `g_n(y_{n+1})` is not yet separated
    /// from zero at this precision.
    fn prepare(&self, upto: usize, count: usize, prec: u32) -> Result<Option<Prepared>> {
        let ys = (1..=count)
            .map(|k| self.enumeration.y(k, prec))
            .collect::<Result<Vec<_>>>()?;
        let mut cs: Vec<Ball> = Vec::new();
        for n in FIRST_FREE..=upto {
            let (base, g) = base_and_g(&ys, &cs, n, prec);
            if g.contains_zero() {
                return Ok(None);
            }
            let r = Ball::from_rational(&self.targets[&n], prec);
            cs.push(r.sub(&base, prec).div(&g, prec)?);
        }
        Ok(Some(Prepared { ys, cs }))
    }

    /// Cached enclosures of all chosen coefficients with radius at most `2^-prec`.
    fn prepared(&self, prec: u32) -> Result<Arc<Prepared>> {
        if let Some(p) = self.cache.lock().expect("cache lock").get(&prec) {
            return Ok(p.clone());
        }
        let goal = Dyadic::pow2(-(prec as i64));
        let mut wp = prec.max(self.schedule.start);
        loop {
            if let Some(p) = self.prepare(self.n_max, self.n_max + 1, wp)? {
                if p.cs.iter().all(|c| c.rad() <= &goal) {
                    let p = Arc::new(p);
                    self.cache.lock().expect("cache lock").insert(prec, p.clone());
                    return Ok(p);
                }
            }
            if wp >= self.schedule.cap {
                return Err(Error::RefinementCap { what: "coefficient enclosures".into(), cap: self.schedule.cap });
            }
            wp = (wp * 2).min(self.schedule.cap);
        }
    }

    /// Chooses `c_n` for `n = N + 1`; see the module documentation.
    pub fn select_coefficient(&self, n: usize, bit: u8) -> Result<FunctionState> {
        if n != self.n_max + 1 {
            return Err(Error::Ordering { expected: self.n_max + 1, got: n });
        }
        if n < FIRST_FREE {
            return Err(Error::Precondition("c_1, ..., c_5 are fixed at zero".into()));
        }
        if self.enumeration.len() < n + 1 {
            return Err(Error::Precondition(format!(
                "enumeration has {} items, selecting c_{n} needs {}",
                self.enumeration.len(),
                n + 1
            )));
        }
        let bit = u8::from(bit != 0);
        let inv_nn = inv_self_power(n as u64);
        for prec in self.schedule.precisions() {
            let Some(prep) = self.prepare(n - 1, n + 1, prec)? else { continue };
            let (base, g) = base_and_g(&prep.ys, &prep.cs, n, prec);
            if g.contains_zero() {
                continue;
            }
            let glow = abs_lower_rational(&g);
            // rho = |g|_low (1 - 2^-10) / n^n
            let rho = &glow * BigRational::new(1023.into(), 1024.into()) * &inv_nn;
            let big_m = ceil_rational(&(BigRational::from_integer(2.into()) / &rho));
            let rad = base.rad().to_rational();
            if rad >= &glow * BigRational::new(1.into(), 2048.into()) * &inv_nn
                || rad * BigInt::from(4) * &big_m >= BigRational::one()
            {
                continue;
            }
            let a = base.mid().to_rational() - &rho;
            let k: BigInt = floor_rational(&(&a * &big_m)) + 1;
            let cands = [
                BigRational::new(k.clone(), big_m.clone()),
                BigRational::new(k + 1, big_m.clone()),
            ];
            let check = |r: &BigRational| -> Result<(bool, bool)> {
                let num = Ball::from_rational(r, prec).sub(&base, prec);
                let c = num.div(&g, prec)?;
                let nonzero = num.excludes_zero();
                let small = c.abs_upper().to_rational() < inv_nn;
                Ok((nonzero, small))
            };
            let want = check(&cands[bit as usize])?;
            let used = if want == (true, true) {
                bit
            } else if !want.0 && check(&cands[1 - bit as usize])? == (true, true) {
                1 - bit
            } else {
                continue;
            };
            let r = cands[used as usize].clone();
            let mut next = self.clone();
            next.cache = Arc::default();
            next.n_max = n;
            next.bits.push(bit);
            if used != bit {
                next.overrides.push(Override { n, requested: bit, used });
            }
            next.denominators_certified &= r.denom() <= &denominator_bound(n as u64, self.m);
            next.targets.insert(n, r);
            next.moduli.insert(n, big_m);
            return Ok(next);
        }
        Err(Error::RefinementCap { what: format!("selection of c_{n}"), cap: self.schedule.cap })
    }

    /// Exact `f(alpha_k)` for `1 <= k <= N + 1`.
    pub fn f_at_alpha(&self, k: usize) -> Result<BigRational> {
        if k == 0 || k > self.n_max + 1 {
            return Err(Error::OutOfRange { index: k, len: self.n_max + 1 });
        }
        if k <= FIRST_FREE {
            return Ok(BigRational::zero());
        }
        Ok(self.targets[&(k - 1)].clone())
    }

    /// Enclosure of `c_n` with radius at most `2^-prec`.
    pub fn coefficient_ball(&self, n: usize, prec: u32) -> Result<Ball> {
        if n == 0 || n > self.n_max {
            return Err(Error::OutOfRange { index: n, len: self.n_max });
        }
        if n < FIRST_FREE {
            return Ok(Ball::zero());
        }
        Ok(self.prepared(prec)?.cs[n - FIRST_FREE].clone())
    }

    /// Enclosure of `f(x)`, widened by the tail bound for the coefficients not
    /// yet chosen.
    pub fn evaluate_f(&self, x: &Ball, prec: u32) -> Result<Ball> {
        let prep = self.prepared(prec)?;
        let y = cos_pi(x, prec);
        let mut g = Ball::one();
        let mut acc = Ball::zero();
        for (j, yj) in prep.ys.iter().enumerate().take(self.n_max) {
            g = g.mul(&sin(&y.sub(yj, prec), prec), prec);
            let n = j + 1;
            if n >= FIRST_FREE {
                acc = acc.add(&prep.cs[n - FIRST_FREE].mul(&g, prec), prec);
            }
        }
        let tail = Dyadic::from_rational_at(&tail_bound(self.n_max), prec as i64 + 64, Round::Ceil);
        Ok(acc.widen(&tail))
    }

    pub fn evaluate_f_rational(&self, x: &BigRational, prec: u32) -> Result<Ball> {
        self.evaluate_f(&Ball::from_rational(x, prec + 32), prec)
    }

    /// `phi(x) = f(psi(x))` for rational `x`, with the exact value when `|psi(x)|`
    /// is one of the first `N + 1` enumerated numbers.
    pub fn evaluate_phi(&self, x: &BigRational, prec: u32) -> Result<PhiValue> {
        let t = psi_rational(x);
        let ball = self.evaluate_f_rational(&t, prec)?;
        let exact = self.exact_at(&AlgebraicNumber::from_rational(&t.abs()))?;
        Ok(PhiValue { ball, exact })
    }

    /// `phi(a)` for an algebraic `a` of degree at most 3.
    pub fn evaluate_phi_algebraic(&self, a: &AlgebraicNumber, prec: u32) -> Result<PhiValue> {
        let t = psi_algebraic(a)?;
        let ball = self.evaluate_f(&psi_ball(&a.to_ball(prec + 32), prec + 32)?, prec)?;
        // f is even, so a negative image is looked up by its absolute value
        let t = if t.interval().hi.is_negative() { t.neg() } else { t };
        let exact = self.exact_at(&t)?;
        Ok(PhiValue { ball, exact })
    }

    /// `f(t)` exactly, when `t` is `alpha_k` with `k <= N + 1`.
    pub fn exact_at(&self, t: &AlgebraicNumber) -> Result<Option<BigRational>> {
        if t.degree() != self.m {
            // only 0 is shared with lower degrees, and it is alpha_1 for m = 1
            return Ok(None);
        }
        match self.enumeration.index_of(t)? {
            Some(k) if k <= self.n_max + 1 => Ok(Some(self.f_at_alpha(k)?)),
            _ => Ok(None),
        }
    }

    /// Certified upper bounds on `sup |f'|` and `sup |phi'|`.
    pub fn derivative_bound(&self) -> Result<DerivativeBounds> {
        const PREC: u32 = 128;
        let mut s = Ball::zero();
        for n in FIRST_FREE..=self.n_max {
            let c = self.coefficient_ball(n, PREC)?;
            s = s.add(&Ball::exact(c.abs_upper()).mul_int(&BigInt::from(n), PREC), PREC);
        }
        // explicit terms n^(1-n) for N < n < K, then sum_{n >= K} <= K^(1-K) K/(K-1)
        let k_end = self.n_max + 40;
        let mut tail = BigRational::zero();
        for n in self.n_max + 1..k_end {
            tail += inv_self_power(n as u64) * BigInt::from(n);
        }
        let k = BigInt::from(k_end);
        tail += inv_self_power(k_end as u64) * &k * &k / (&k - 1);
        let total = s.add(&Ball::from_rational(&tail, PREC), PREC);
        let f_ball = pi(PREC).mul(&total, PREC);
        let bound_f = f_ball.upper();
        // |psi'(x)| = |1 - x^2| / (2 (1 + x^2)^2) <= 1/2, with equality at 0
        let bound_phi = bound_f.shl(-1);
        let f_constant = BigRational::new(2.into(), 10_000.into());
        let phi_constant = BigRational::new(1.into(), 10_000.into());
        Ok(DerivativeBounds {
            below_f_constant: bound_f.to_rational() < f_constant,
            below_phi_constant: bound_phi.to_rational() < phi_constant,
            bound_f,
            bound_phi,
        })
    }
}

/// `(sum_{k<n} c_k g_k(y_{n+1}), g_n(y_{n+1}))` from node and coefficient balls.
fn base_and_g(ys: &[Ball], cs: &[Ball], n: usize, prec: u32) -> (Ball, Ball) {
    let at = &ys[n];
    let mut g = Ball::one();
    let mut base = Ball::zero();
    for j in 1..=n {
        g = g.mul(&sin(&at.sub(&ys[j - 1], prec), prec), prec);
        if j >= FIRST_FREE && j < n {
            base = base.add(&cs[j - FIRST_FREE].mul(&g, prec), prec);
        }
    }
    (base, g)
}

#[derive(Clone, Debug)]
pub struct PhiValue {
    pub ball: Ball,
    pub exact: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeBounds {
    pub bound_f: Dyadic,
    pub bound_phi: Dyadic,
    /// Whether `bound_f < 0.0002`.
    pub below_f_constant: bool,
    /// Whether `bound_phi < 0.0001`.
    pub below_phi_constant: bool,
}

/// Current state file format tag.
pub const FORMAT_VERSION: &str = "liouville-state/1";

/// On-disk form of a [`FunctionState`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: String,
    pub m: usize,
    #[serde(rename = "N")]
    pub n_max: usize,
    pub bits: String,
    pub targets: Vec<String>,
    pub moduli: Vec<String>,
    pub enumeration: Vec<crate::enumeration::EnumRecord>,
    pub overrides: Vec<Override>,
    pub denominators_certified: bool,
    pub precision: Schedule,
    pub timestamp: u64,
}

impl FunctionState {
    pub fn to_file(&self, timestamp: u64) -> StateFile {
        StateFile {
            format_version: FORMAT_VERSION.into(),
            m: self.m,
            n_max: self.n_max,
            bits: self.bits_string(),
            targets: self.targets.values().map(|r| format!("{}/{}", r.numer(), r.denom())).collect(),
            moduli: self.moduli.values().map(|v| v.to_string()).collect(),
            enumeration: self.enumeration.records(),
            overrides: self.overrides.clone(),
            denominators_certified: self.denominators_certified,
            precision: self.schedule,
            timestamp,
        }
    }

    pub fn to_json(&self, timestamp: u64) -> String {
        serde_json::to_string_pretty(&self.to_file(timestamp)).expect("state serializes") + "\n"
    }

    /// Validates and loads a state file. Targets are taken as stored; use
    /// the certification checks to re-verify them.
    pub fn from_file(f: &StateFile) -> Result<Self> {
        if f.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch { found: f.format_version.clone(), expected: FORMAT_VERSION.into() });
        }
        let count = f.n_max + 1 - FIRST_FREE;
        if f.n_max + 1 < FIRST_FREE || f.bits.len() != count || f.targets.len() != count || f.moduli.len() != count {
            return Err(Error::Parse("bits, targets and moduli must have one entry per chosen coefficient".into()));
        }
        let bits = f
            .bits
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("bad bit `{c}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        let mut targets = BTreeMap::new();
        let mut moduli = BTreeMap::new();
        for (i, (t, mstr)) in f.targets.iter().zip(&f.moduli).enumerate() {
            let n = FIRST_FREE + i;
            let (a, b) = t.split_once('/').ok_or_else(|| Error::Parse(format!("target `{t}` is not num/den")))?;
            let a: BigInt = a.parse().map_err(|_| Error::Parse(format!("bad numerator in `{t}`")))?;
            let b: BigInt = b.parse().map_err(|_| Error::Parse(format!("bad denominator in `{t}`")))?;
            if !b.is_positive() || !a.gcd(&b).is_one() {
                return Err(Error::Parse(format!("target `{t}` is not in lowest terms")));
            }
            targets.insert(n, BigRational::new(a, b));
            let mv: BigInt = mstr.parse().map_err(|_| Error::Parse(format!("bad modulus `{mstr}`")))?;
            moduli.insert(n, mv);
        }
        for o in &f.overrides {
            if o.n < FIRST_FREE || o.n > f.n_max || bits[o.n - FIRST_FREE] != o.requested || o.used == o.requested {
                return Err(Error::Parse(format!("inconsistent override for n = {}", o.n)));
            }
        }
        if f.precision.start == 0 || f.precision.start > f.precision.cap {
            return Err(Error::Parse("precision start must not exceed cap".into()));
        }
        let e = Enumeration::from_records(f.m, &f.enumeration)?;
        if e.len() < f.n_max + 1 {
            return Err(Error::Parse("enumeration snapshot is shorter than N + 1".into()));
        }
        Ok(FunctionState {
            m: f.m,
            n_max: f.n_max,
            bits,
            targets,
            moduli,
            overrides: f.overrides.clone(),
            denominators_certified: f.denominators_certified,
            schedule: f.precision,
            enumeration: Arc::new(e),
            cache: Arc::default(),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: StateFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&f)
    }
}

/// Bound helper for reporting: `log2` of a positive rational, as `f64`.
pub fn log2_approx(r: &BigRational) -> f64 {
    let top = |x: &BigInt| {
        let shift = x.bits().saturating_sub(53);
        (x.abs() >> shift as usize).to_f64().unwrap_or(f64::NAN).log2() + shift as f64
    };
    top(r.numer()) - top(r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::ball::ratio;

    fn small_state(m: usize, n: usize, bits: &[u8]) -> FunctionState {
        FunctionState::construct(m, n, bits, Schedule::with_cap(4096)).unwrap()
    }

    #[test]
    fn seed_decoding() {
        assert_eq!(seed_bits("0xA").unwrap(), vec![1, 0, 1, 0]);
        assert_eq!(seed_bits("ff").unwrap(), vec![1; 8]);
        assert!(seed_bits("0xZZ").is_err());
    }

    #[test]
    fn first_selection_and_sibling() {
        let s0 = small_state(1, 6, &[0]);
        let s1 = small_state(1, 6, &[1]);
        let r0 = s0.f_at_alpha(7).unwrap();
        let r1 = s1.f_at_alpha(7).unwrap();
        assert_ne!(r0, r1);
        let m = s0.modulus(6).unwrap().clone();
        assert_eq!((&r1 - &r0).abs(), BigRational::new(1.into(), m));
        assert!(r0.denom() <= &denominator_bound(6, 1));
        assert!(s0.denominators_certified());
        let c = s0.coefficient_ball(6, 256).unwrap();
        assert!(c.excludes_zero());
        assert!(c.abs_upper().to_rational() < inv_self_power(6));
    }

    #[test]
    fn ordering_errors() {
        let s = small_state(1, 6, &[0]);
        assert!(matches!(s.select_coefficient(8, 0), Err(Error::Ordering { expected: 7, got: 8 })));
        assert!(s.coefficient_ball(7, 64).is_err());
        assert_eq!(s.coefficient_ball(5, 64).unwrap(), Ball::zero());
        assert_eq!(s.f_at_alpha(3).unwrap(), BigRational::zero());
        assert!(s.f_at_alpha(8).is_err());
    }

    #[test]
    fn evaluation_paths_agree() {
        let s = small_state(1, 8, &[1, 0, 1]);
        for k in 1..=9 {
            let a = s.enumeration().alpha(k).unwrap();
            let b = s.evaluate_f(&a.to_ball(256), 128).unwrap();
            assert!(b.contains_rational(&s.f_at_alpha(k).unwrap()), "k = {k}");
        }
        let x = ratio(3, 7);
        let b1 = s.evaluate_f_rational(&x, 96).unwrap();
        let b2 = s.evaluate_f_rational(&(&x + BigRational::from_integer(2.into())), 96).unwrap();
        assert!(b1.overlaps(&b2));
    }

    #[test]
    fn phi_examples() {
        let s = small_state(1, 8, &[0, 0, 0]);
        let v = s.evaluate_phi(&ratio(0, 1), 64).unwrap();
        assert_eq!(v.exact, Some(BigRational::zero()));
        assert!(v.ball.contains_zero());
        let v = s.evaluate_phi(&ratio(1, 1), 64).unwrap();
        assert_eq!(v.exact, Some(BigRational::zero()));
        let v = s.evaluate_phi(&ratio(1, 2), 64).unwrap();
        assert_eq!(v.exact, Some(BigRational::zero()));
        assert!(v.ball.contains_zero());
        // psi(-1) = -1/4 and f is even
        let v = s.evaluate_phi(&ratio(-1, 1), 64).unwrap();
        assert_eq!(v.exact, Some(BigRational::zero()));
    }

    #[test]
    fn fresh_derivative_bound() {
        let e = Enumeration::build(1, 6).unwrap();
        let s = FunctionState::fresh(e, Schedule::default());
        let d = s.derivative_bound().unwrap();
        let v = d.bound_f.to_f64();
        assert!((v - 4.32e-4).abs() < 0.01e-4, "{v}");
        assert!(!d.below_f_constant);
        assert_eq!(d.bound_phi, d.bound_f.shl(-1));
    }

    #[test]
    fn psi_derivative_at_most_half() {
        for i in -400..=400 {
            let x = i as f64 / 40.0;
            let d = (1.0 - x * x) / (2.0 * (1.0 + x * x).powi(2));
            assert!(d.abs() <= 0.5 + 1e-15);
        }
    }

    #[test]
    fn json_round_trip() {
        let s = small_state(1, 7, &[1, 1]);
        let text = s.to_json(0);
        let back = FunctionState::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(0), text);
        let bad = text.replace(FORMAT_VERSION, "liouville-state/99");
        assert!(matches!(FunctionState::from_json(&bad), Err(Error::VersionMismatch { .. })));
        assert!(matches!(FunctionState::from_json(&text[..text.len() / 2]), Err(Error::Parse(_))));
    }
}
