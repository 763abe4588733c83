//! Executable checks: the four auxiliary facts, the denominator chain of a
//! constructed state, the Liouville certificate built from an ultra witness,
//! and state-level suites.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::difference;
use crate::construct::{log2_approx, FunctionState, FIRST_FREE};
use crate::dyadic::Dyadic;
use crate::enumeration::Enumeration;
use crate::error::{Error, Result};
use crate::heights::{
    chain_tail_bound, compare_logs, cos_separation_bound, denominator_bound, diff_height_bound, eq1_bound,
    huge_exp3, psi_height_bound, HugeOrdering, LogExpr,
};
use crate::par::{map_range, map_slice, Exec};
use crate::poly::IntPolynomial;
use crate::realroots::{AlgebraicNumber, DyadicInterval};
use crate::report::Report;
use crate::rigor::ball::inv_self_power;
use crate::rigor::elementary::{cos, cos_pi, exp, ln, sin};
use crate::rigor::{refine, Ball, Outcome, Schedule};

pub const DEFAULT_SEED: u64 = 0x5eed_1e55;

fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform rational in `[lo, hi]` with denominator `2^40`.
fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> BigRational {
    const D: i64 = 1 << 40;
    BigRational::new(rng.gen_range(lo * D..=hi * D).into(), D.into())
}

fn rat_json(r: &BigRational) -> serde_json::Value {
    json!(r.to_string())
}

// ---------------------------------------------------------------------------
// fact 1: |sin(y - b)| > |y - b| / 3 on [-1, 1]

/// `Some(true)` certified, `Some(false)` certified violation, `None` undecided.
pub fn sin_inequality(y: &BigRational, b: &BigRational, schedule: Schedule) -> Result<(Option<bool>, u32)> {
    let d = (y - b).abs();
    if d.is_zero() {
        return Err(Error::Precondition("sin inequality needs y != b".into()));
    }
    let out = refine(schedule, |prec| {
        let s = sin(&Ball::from_rational(&d, prec), prec).mul_int(&BigInt::from(3), prec);
        if s.gt_rational(&d) {
            Ok(Some(true))
        } else if s.lt_rational(&d) || s.upper().to_rational() == d {
            Ok(Some(false))
        } else {
            Ok(None)
        }
    })?;
    Ok(match out {
        Outcome::Decided { value, precision } => (Some(value), precision),
        Outcome::Undecided { cap } => (None, cap),
    })
}

pub fn lemma_sin(samples: u64, seed: u64, schedule: Schedule, exec: Exec) -> Result<Report> {
    let mut report = Report::new("fact1-sin");
    let fixed = [(1, -1), (-1, 1), (1, 0)];
    for (y, b) in fixed {
        let (y, b) = (BigRational::from_integer(y.into()), BigRational::from_integer(b.into()));
        let (ok, p) = sin_inequality(&y, &b, schedule)?;
        report.used(p);
        if ok != Some(true) {
            report.fail(json!({"y": rat_json(&y), "b": rat_json(&b)}));
        }
    }
    let results = map_range(exec, 0..samples, |i| -> Result<(Option<bool>, u32, BigRational, BigRational, u32)> {
        let mut rng = sample_rng(seed, i);
        let mut resampled = 0;
        loop {
            let y = random_rational(&mut rng, -1, 1);
            let b = random_rational(&mut rng, -1, 1);
            if y == b {
                continue;
            }
            let (ok, p) = sin_inequality(&y, &b, schedule)?;
            if ok.is_some() || resampled >= 8 {
                return Ok((ok, p, y, b, resampled));
            }
            resampled += 1;
        }
    });
    let mut resamples = 0u64;
    for r in results {
        let (ok, p, y, b, rs) = r?;
        report.used(p);
        resamples += rs as u64;
        match ok {
            Some(true) => {}
            Some(false) => report.fail(json!({"y": rat_json(&y), "b": rat_json(&b)})),
            None => report.undecided(json!({"y": rat_json(&y), "b": rat_json(&b), "note": "undecided at cap"})),
        }
    }
    report.detail("samples", samples);
    report.detail("resampled", resamples);
    Ok(report)
}

// ---------------------------------------------------------------------------
// fact 4: two rationals of bounded denominator in (a, b)

/// `k/M` and `(k+1)/M` with `M = ceil(2/eps)` and `k = floor(M a) + 1`.
pub fn lemma_two_rationals(a: &BigRational, b: &BigRational, eps: &BigRational) -> Result<(BigRational, BigRational)> {
    if b <= a {
        return Err(Error::Precondition(format!("empty interval ({a}, {b})")));
    }
    if !eps.is_positive() || eps > &(b - a) {
        return Err(Error::Precondition(format!("length parameter {eps} must lie in (0, b - a]")));
    }
    let m = (BigRational::from_integer(2.into()) / eps).ceil().to_integer();
    let k: BigInt = (a * &m).floor().to_integer() + 1;
    let r1 = BigRational::new(k.clone(), m.clone());
    let r2 = BigRational::new(k + 1, m);
    if &r1 > a && &r2 < b {
        Ok((r1, r2))
    } else {
        Err(Error::Precondition(format!("{r2} reaches the right end {b}; use a length below b - a")))
    }
}

pub fn lemma_two_rationals_suite(samples: u64, seed: u64, exec: Exec) -> Report {
    let mut report = Report::new("fact4-two-rationals");
    let fails = map_range(exec, 0..samples, |i| {
        let mut rng = sample_rng(seed, i);
        let a = random_rational(&mut rng, -1, 1);
        let mut w = random_rational(&mut rng, 0, 1);
        if w.is_zero() {
            w = BigRational::new(1.into(), 3.into());
        }
        let b = &a + &w;
        let mut u = random_rational(&mut rng, 0, 1);
        if u.is_zero() || u.is_one() {
            u = BigRational::new(1.into(), 2.into());
        }
        let eps = &w * &u;
        let bound = (BigRational::from_integer(2.into()) / &eps).ceil().to_integer();
        match lemma_two_rationals(&a, &b, &eps) {
            Ok((r1, r2)) if r1 > a && r2 < b && r1 < r2 && r1.denom() <= &bound && r2.denom() <= &bound => None,
            other => Some(json!({
                "a": rat_json(&a), "b": rat_json(&b), "eps": rat_json(&eps),
                "result": format!("{other:?}"),
            })),
        }
    });
    for f in fails.into_iter().flatten() {
        report.fail(f);
    }
    report.detail("samples", samples);
    report
}

// ---------------------------------------------------------------------------
// fact 3 consequence: separation of cos(pi x) over heights <= n

/// Checks `|cos(pi x) - cos(pi y)| >= pi / (2^(4m^2+1) n^(2m+1))` for all
/// distinct pairs of height at most `n`.
pub fn lemma_cos_separation(e: &Enumeration, n: u64, schedule: Schedule, exec: Exec) -> Result<Report> {
    let mut report = Report::new("fact3-cos-separation");
    let m = e.m();
    let full = Enumeration::build_to_height(m, n, exec)?;
    if full.len() > e.len() || e.items()[..full.len()].iter().zip(full.items()).any(|(a, b)| a.minpoly() != b.minpoly() || a.interval() != b.interval()) {
        return Err(Error::Precondition(format!("enumeration does not contain every member of height <= {n}")));
    }
    let items = full.items();
    let pairs: Vec<(usize, usize)> =
        (0..items.len()).flat_map(|i| (i + 1..items.len()).map(move |j| (i, j))).collect();
    let results = map_slice(exec, &pairs, |&(i, j)| -> Result<(Option<bool>, u32)> {
        let out = refine(schedule, |prec| {
            let yi = cos_pi(&items[i].to_ball(prec + 8), prec);
            let yj = cos_pi(&items[j].to_ball(prec + 8), prec);
            let d = yi.sub(&yj, prec).abs();
            let bound = cos_separation_bound(n, m, prec);
            Ok(match d.certified_cmp(&bound) {
                Some(Ordering::Greater) => Some(true),
                Some(Ordering::Less) => Some(false),
                _ => None,
            })
        })?;
        Ok(match out {
            Outcome::Decided { value, precision } => (Some(value), precision),
            Outcome::Undecided { cap } => (None, cap),
        })
    });
    for (&(i, j), r) in pairs.iter().zip(results) {
        let (ok, p) = r?;
        report.used(p);
        let ce = json!({"x": i + 1, "y": j + 1});
        match ok {
            Some(true) => {}
            Some(false) => report.fail(ce),
            None => report.undecided(ce),
        }
    }
    report.detail("m", m);
    report.detail("height", n);
    report.detail("members", items.len());
    report.detail("pairs", pairs.len());
    Ok(report)
}

// ---------------------------------------------------------------------------
// fact 2: H(y - x) <= 2^(4m^2) H(x)^m H(y)^m

/// `(H(y - x), bound)` for distinct `x`, `y` of degree at most 3.
pub fn diff_height_pair(x: &AlgebraicNumber, y: &AlgebraicNumber, m: usize) -> Result<(BigInt, BigInt)> {
    let d = difference(y, x)?;
    Ok((d.height(), diff_height_bound(&x.height(), &y.height(), m)))
}

pub fn lemma_diff_height(e: &Enumeration, pairs: u64, seed: u64, exec: Exec) -> Result<Report> {
    let m = e.m();
    if m > crate::algebra::MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree: m, context: "difference heights are implemented for m <= 3" });
    }
    if e.len() < 2 {
        return Err(Error::Precondition("need at least two enumerated numbers".into()));
    }
    let mut report = Report::new(format!("fact2-diff-height-m{m}"));
    let len = e.len();
    let results = map_range(exec, 0..pairs, |i| -> Result<Option<serde_json::Value>> {
        let mut rng = sample_rng(seed, i);
        let a = rng.gen_range(0..len);
        let mut b = rng.gen_range(0..len - 1);
        if b >= a {
            b += 1;
        }
        let (x, y) = (&e.items()[a], &e.items()[b]);
        let (h, bound) = diff_height_pair(x, y, m)?;
        Ok((h > bound).then(|| json!({"x": a + 1, "y": b + 1, "height": h.to_string(), "bound": bound.to_string()})))
    });
    for r in results {
        if let Some(ce) = r? {
            report.fail(ce);
        }
    }
    report.detail("pairs", pairs);
    report.detail("pool", len);
    Ok(report)
}

// ---------------------------------------------------------------------------
// symbolic comparisons

fn terms(e: &LogExpr) -> Vec<LogExpr> {
    match e {
        LogExpr::Add(xs) => xs.iter().flat_map(terms).collect(),
        other => vec![other.clone()],
    }
}

fn sum(mut xs: Vec<LogExpr>) -> LogExpr {
    match xs.len() {
        0 => LogExpr::int(0),
        1 => xs.pop().expect("one term"),
        _ => LogExpr::Add(xs),
    }
}

/// Certified comparison of `a` and `b` after cancelling summands that occur
/// on both sides.
pub fn compare_cancelled(a: &LogExpr, b: &LogExpr, schedule: Schedule) -> Result<(HugeOrdering, u32)> {
    let mut lhs = terms(a);
    let mut rhs = Vec::new();
    for t in terms(b) {
        if let Some(pos) = lhs.iter().position(|x| *x == t) {
            lhs.remove(pos);
        } else {
            rhs.push(t);
        }
    }
    compare_logs(&sum(lhs), &sum(rhs), schedule)
}

/// `ln` of the Definition-1 error bound `exp3(t)^-n`, that is `-n e^(e^t)`.
pub fn ultra_log(n: u64, t: u64) -> Result<LogExpr> {
    Ok(LogExpr::int(n).times(huge_exp3(t)?.log).neg())
}

// ---------------------------------------------------------------------------
// q <= exp3(t)

#[derive(Clone, Debug)]
pub struct QExp3Check {
    pub m: usize,
    pub t: u64,
    pub ordering: HugeOrdering,
    /// Enclosure of `ln (2t)^(450 m^5 2^(18 m^2) t^(6m))`.
    pub ln_lhs: Ball,
    /// Enclosure of `ln exp3(t) = e^(e^t)`.
    pub ln_rhs: Ball,
    pub precision: u32,
}

impl QExp3Check {
    pub fn holds(&self) -> bool {
        self.ordering.is_less()
    }
}

pub fn check_q_le_exp3(m: usize, t: u64, schedule: Schedule) -> Result<QExp3Check> {
    if t < (m as u64).max(8) {
        return Err(Error::Precondition(format!("t = {t} is below max(m, 8) = {}", m.max(8))));
    }
    let lhs = eq1_bound(&BigInt::from(t), m)?;
    let rhs = huge_exp3(t)?;
    let (ordering, precision) = compare_logs(&lhs.log, &rhs.log, schedule)?;
    Ok(QExp3Check {
        m,
        t,
        ordering,
        ln_lhs: lhs.log_value(precision)?,
        ln_rhs: rhs.log_value(precision)?,
        precision,
    })
}

pub fn q_le_exp3_suite(max_t: u64, schedule: Schedule) -> Result<Report> {
    let mut report = Report::new("q-le-exp3");
    for m in 1..=3usize {
        for t in (m as u64).max(8)..=max_t {
            let c = check_q_le_exp3(m, t, schedule)?;
            report.used(c.precision);
            match c.ordering {
                HugeOrdering::Less => {}
                HugeOrdering::Greater => report.fail(json!({"m": m, "t": t})),
                HugeOrdering::UndecidedAtCap => report.undecided(json!({"m": m, "t": t})),
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// denominator chain

/// `ln` of `k^k 2^(k(4m^2+1)) (2k+7)^(3mk)`.
fn k_form_log(k: &BigInt, m: usize) -> LogExpr {
    let mm = 4 * m * m + 1;
    LogExpr::Int(k.clone())
        .times(LogExpr::Ln(BigRational::from_integer(k.clone())))
        .plus(LogExpr::Int(k * mm).times(LogExpr::ln_int(2)))
        .plus(LogExpr::Int(k * (3 * m)).times(LogExpr::Ln(BigRational::from_integer(k * 2 + 7))))
}

fn k_form(k: u64, m: usize) -> BigInt {
    let kb = BigInt::from(k);
    num_traits::pow(kb, k as usize)
        * (BigInt::one() << (k as usize * (4 * m * m + 1)))
        * num_traits::pow(BigInt::from(2 * k + 7), 3 * m * k as usize)
}

/// Checks, for every `k <= N + 1`,
/// `den f(alpha_k) <= (k-1)^(k-1) 2^((k-1)(4m^2+1)) (2k+7)^(3m(k-1)) < k^k 2^(k(4m^2+1)) (2k+7)^(3mk)`,
/// then `k <= K = (2q+4)^(m+1)(m+1)` with `q = H(alpha_k)` and the `K` form
/// below `(72 m^2 (6q)^(4m))^(10 m^3 (6q)^(2m))`. For enumerated preimages
/// `alpha` whose `psi(alpha)` lands in the snapshot, also checks
/// `den phi(alpha) <= (2q)^(450 m^5 2^(18 m^2) q^(6m))` with `q = H(alpha)`.
pub fn check_denominator_chain(state: &FunctionState, schedule: Schedule) -> Result<Report> {
    let mut report = Report::new("denominator-chain");
    let m = state.m();
    let e = state.enumeration();
    let mut rows = Vec::new();
    for k in 1..=state.n_max() + 1 {
        let v = state.f_at_alpha(k)?;
        let den = v.denom().clone();
        let q = e.alpha(k)?.height();
        let ku = k as u64;
        let direct = denominator_bound(ku - 1, m);
        let kf = k_form(ku, m);
        if den > direct {
            report.fail(json!({"k": k, "step": "den <= (k-1) form", "den": den.to_string()}));
        }
        if direct >= kf {
            report.fail(json!({"k": k, "step": "(k-1) form < k form"}));
        }
        let big_k = num_traits::pow(&q * 2 + 4, m + 1) * (m + 1);
        if BigInt::from(k) > big_k {
            report.fail(json!({"k": k, "step": "k <= (2q+4)^(m+1)(m+1)", "q": q.to_string()}));
        }
        let (o, p) = compare_logs(&k_form_log(&big_k, m), &chain_tail_bound(&q, m)?.log, schedule)?;
        report.used(p);
        match o {
            HugeOrdering::Less => {}
            HugeOrdering::Greater => report.fail(json!({"k": k, "step": "K form < tail bound", "q": q.to_string()})),
            HugeOrdering::UndecidedAtCap => report.undecided(json!({"k": k, "step": "K form < tail bound"})),
        }
        rows.push(json!({
            "k": k,
            "height": q.to_string(),
            "log2_den": log2_approx(&BigRational::from_integer(den)),
            "log2_bound": log2_approx(&BigRational::from_integer(direct)),
        }));
    }
    report.detail("entries", rows);

    // preimages
    let mut resolved = 0usize;
    let mut preimages: Vec<AlgebraicNumber> = e.items()[..=state.n_max()].to_vec();
    if m == 1 {
        preimages.extend((1..=4).map(|i| AlgebraicNumber::from_rational(&BigRational::from_integer(i.into()))));
    }
    for a in &preimages {
        let h = a.height();
        let (o, p) = compare_logs(&chain_tail_bound(&psi_height_bound(&h, m), m)?.log, &eq1_bound(&h, m)?.log, schedule)?;
        report.used(p);
        if !o.is_less() {
            report.fail(json!({"preimage": a.to_f64(), "step": "tail(psi height) <= Eq1", "ordering": o}));
        }
        if m > crate::algebra::MAX_DEGREE {
            continue;
        }
        let t = crate::algebra::psi_algebraic(a)?;
        if t.height() > psi_height_bound(&h, m) {
            report.fail(json!({"preimage": a.to_f64(), "step": "H(psi) <= 2^(6m) q^3"}));
        }
        let exact = match a.as_rational() {
            Some(x) => state.evaluate_phi(&x, 64)?.exact,
            None => state.evaluate_phi_algebraic(a, 64)?.exact,
        };
        if let Some(v) = exact {
            resolved += 1;
            let lhs = LogExpr::Ln(BigRational::from_integer(v.denom().clone()));
            let (o, p) = compare_logs(&lhs, &eq1_bound(&h, m)?.log, schedule)?;
            report.used(p);
            if !o.is_less() {
                report.fail(json!({"preimage": a.to_f64(), "step": "den phi <= Eq1", "ordering": o}));
            }
        }
    }
    report.detail("preimages", preimages.len());
    report.detail("preimages_resolved", resolved);
    Ok(report)
}

// ---------------------------------------------------------------------------
// ultra witnesses and the Liouville certificate

/// Serializable form of an algebraic number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicRecord {
    pub minpoly: IntPolynomial,
    pub lo: String,
    pub hi: String,
}

impl AlgebraicRecord {
    pub fn from_algebraic(a: &AlgebraicNumber) -> Self {
        AlgebraicRecord {
            minpoly: a.minpoly().clone(),
            lo: a.interval().lo.to_decimal_string(),
            hi: a.interval().hi.to_decimal_string(),
        }
    }

    pub fn to_algebraic(&self) -> Result<AlgebraicNumber> {
        let lo: Dyadic = self.lo.parse()?;
        let hi: Dyadic = self.hi.parse()?;
        AlgebraicNumber::new(self.minpoly.clone(), DyadicInterval::new(lo, hi)?)
    }
}

#[derive(Clone, Debug)]
pub struct WitnessEntry {
    pub n: u64,
    pub approx: AlgebraicNumber,
    pub t: u64,
    /// Upper bound on `ln |xi - alpha_n|`.
    pub err_log: LogExpr,
}

/// Symbolic data for an `m`-ultra number `xi`: approximants `alpha_n` of
/// height `t_n` with `|xi - alpha_n| <= exp(err_log_n)`.
#[derive(Clone, Debug)]
pub struct UltraWitness {
    pub m: usize,
    pub chain: Vec<WitnessEntry>,
}

pub const WITNESS_VERSION: &str = "liouville-witness/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntryFile {
    pub n: u64,
    pub approx: AlgebraicRecord,
    pub t: u64,
    pub err_log: LogExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub format_version: String,
    pub m: usize,
    pub chain: Vec<WitnessEntryFile>,
}

/// Degree-`m` number of height exactly `t`: `1/t` for `m = 1`, otherwise the
/// positive root of the first irreducible `t x^m - a x - 1`.
fn synthetic_approximant(m: usize, t: u64) -> Result<AlgebraicNumber> {
    if m == 1 {
        return Ok(AlgebraicNumber::from_rational(&BigRational::new(1.into(), t.into())));
    }
    for a in 1..=t as i64 {
        let mut c = vec![0i64; m + 1];
        c[0] = -1;
        c[1] = -a;
        c[m] = t as i64;
        let p = IntPolynomial::from_i64(&c);
        if crate::polyenum::is_irreducible(&p)? {
            let big = Dyadic::from_int(a + 2);
            let roots = crate::realroots::isolate_in(&p, &Dyadic::zero(), &big);
            if let Some(r) = roots.into_iter().next() {
                return Ok(r);
            }
        }
    }
    Err(Error::Precondition(format!("no synthetic approximant of degree {m} and height {t}")))
}

impl UltraWitness {
    /// Witness with `t_n = max(m, 8) + n - 1` and `err_log_n = -n e^(e^(t_n))`.
    pub fn synthetic(m: usize, count: u64) -> Result<Self> {
        let t0 = (m as u64).max(8);
        let chain = (1..=count)
            .map(|n| {
                let t = t0 + n - 1;
                Ok(WitnessEntry { n, approx: synthetic_approximant(m, t)?, t, err_log: ultra_log(n, t)? })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UltraWitness { m, chain })
    }

    pub fn to_file(&self) -> WitnessFile {
        WitnessFile {
            format_version: WITNESS_VERSION.into(),
            m: self.m,
            chain: self
                .chain
                .iter()
                .map(|e| WitnessEntryFile {
                    n: e.n,
                    approx: AlgebraicRecord::from_algebraic(&e.approx),
                    t: e.t,
                    err_log: e.err_log.clone(),
                })
                .collect(),
        }
    }

    pub fn from_file(f: &WitnessFile) -> Result<Self> {
        if f.format_version != WITNESS_VERSION {
            return Err(Error::VersionMismatch { found: f.format_version.clone(), expected: WITNESS_VERSION.into() });
        }
        let chain = f
            .chain
            .iter()
            .map(|e| Ok(WitnessEntry { n: e.n, approx: e.approx.to_algebraic()?, t: e.t, err_log: e.err_log.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Ok(UltraWitness { m: f.m, chain })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("witness serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: WitnessFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&f)
    }
}

/// The chain step at which a certificate was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Step {
    Precondition,
    HeightMismatch,
    Monotone,
    DenominatorBound,
    MeanValue,
    UltraBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub step: Step,
    pub n: Option<u64>,
    pub reason: String,
}

impl Rejection {
    fn at(step: Step, n: u64, reason: impl Into<String>) -> Self {
        Rejection { step, n: Some(n), reason: reason.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Separation {
    pub step: Step,
    pub precision: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateEntry {
    pub n: u64,
    pub t: u64,
    /// `p_n / q_n = phi(alpha_n)` written with `q_n >= 2`, when resolved exactly.
    pub p: Option<String>,
    pub q: Option<String>,
    /// Enclosure of `phi(alpha_n)` as `mid ± rad`.
    pub value: String,
    /// Upper bound on `ln q_n`.
    pub ln_q: LogExpr,
    pub err_log: LogExpr,
    /// Upper bound on `ln |phi(xi) - p_n/q_n|`.
    pub gap_log: LogExpr,
    pub separations: Vec<Separation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiouvilleCertificate {
    pub m: usize,
    /// Certified `sup |phi'|` used in the mean value step.
    pub bound_phi: String,
    pub entries: Vec<CertificateEntry>,
}

#[derive(Clone, Default, Copy, Debug)]
pub struct CertifyOptions {
    pub schedule: Schedule,
    /// Drop entries with `t_n < max(m, 8)` instead of rejecting.
    pub trim: bool,
}


/// Writes `v` as `p/q` with `q >= 2`.
fn with_q_above_one(v: &BigRational) -> (BigInt, BigInt) {
    if v.denom().is_one() {
        (v.numer() * 2, BigInt::from(2))
    } else {
        (v.numer().clone(), v.denom().clone())
    }
}

/// Checks preconditions and heights, evaluates `phi(alpha_n)` and sets up
/// `ln q_n` and `gap_log` for every entry.
pub fn resolve_entries(
    state: &FunctionState,
    w: &UltraWitness,
    opts: CertifyOptions,
) -> Result<std::result::Result<(Dyadic, Vec<CertificateEntry>), Rejection>> {
    let m = w.m;
    if m != state.m() {
        return Ok(Err(Rejection {
            step: Step::Precondition,
            n: None,
            reason: format!("witness degree {m} differs from state degree {}", state.m()),
        }));
    }
    let floor_t = (m as u64).max(8);
    let bound_phi = state.derivative_bound()?.bound_phi;
    let ln_b = LogExpr::Ln(bound_phi.to_rational());
    let mut out = Vec::new();
    let mut last_n = 0;
    for e in &w.chain {
        if e.t < floor_t {
            if opts.trim {
                continue;
            }
            return Ok(Err(Rejection::at(Step::Precondition, e.n, format!("t = {} is below max(m, 8) = {floor_t}", e.t))));
        }
        if e.n <= last_n {
            return Ok(Err(Rejection::at(Step::Precondition, e.n, "exponents must increase")));
        }
        last_n = e.n;
        if e.approx.degree() != m {
            return Ok(Err(Rejection::at(Step::Precondition, e.n, format!("approximant has degree {}", e.approx.degree()))));
        }
        if e.approx.height() != BigInt::from(e.t) {
            return Ok(Err(Rejection::at(
                Step::HeightMismatch,
                e.n,
                format!("H(alpha) = {} but t = {}", e.approx.height(), e.t),
            )));
        }
        let prec = 128;
        let (ball, exact) = match e.approx.as_rational() {
            Some(x) => {
                let v = state.evaluate_phi(&x, prec)?;
                (v.ball, v.exact)
            }
            None if m <= crate::algebra::MAX_DEGREE => {
                let v = state.evaluate_phi_algebraic(&e.approx, prec)?;
                (v.ball, v.exact)
            }
            None => {
                let x = crate::algebra::psi_ball(&e.approx.to_ball(prec + 32), prec + 32)?;
                (state.evaluate_f(&x, prec)?, None)
            }
        };
        let (p, q, ln_q) = match &exact {
            Some(v) => {
                let (p, q) = with_q_above_one(v);
                let lq = LogExpr::Ln(BigRational::from_integer(q.clone()));
                (Some(p.to_string()), Some(q.to_string()), lq)
            }
            None => (None, None, eq1_bound(&BigInt::from(e.t), m)?.log),
        };
        let gap_log = ln_b.clone().plus(e.err_log.clone());
        out.push(CertificateEntry {
            n: e.n,
            t: e.t,
            p,
            q,
            value: ball.to_exact_string(),
            ln_q,
            err_log: e.err_log.clone(),
            gap_log,
            separations: Vec::new(),
        });
    }
    if out.is_empty() {
        return Ok(Err(Rejection { step: Step::Precondition, n: None, reason: "empty witness chain".into() }));
    }
    Ok(Ok((bound_phi, out)))
}

/// Certifies the chain for resolved entries, filling in separation precisions:
/// monotone errors, `q_n <= exp3(t_n)`, the mean value step
/// `gap_log < -n e^(e^(t_n)) <= -n ln q_n`, and the Definition-1 bound.
pub fn check_chain(
    m: usize,
    entries: &mut [CertificateEntry],
    schedule: Schedule,
) -> Result<std::result::Result<(), Rejection>> {
    let strictly_less = |a: &LogExpr, b: &LogExpr| -> Result<(HugeOrdering, u32)> { compare_cancelled(a, b, schedule) };
    let reject = |step, n, o: HugeOrdering, what: &str| {
        let why = match o {
            HugeOrdering::UndecidedAtCap => format!("{what}: undecided at precision cap {}", schedule.cap),
            _ => format!("{what}: fails"),
        };
        Rejection::at(step, n, why)
    };
    for i in 1..entries.len() {
        let (o, p) = strictly_less(&entries[i].err_log, &entries[i - 1].err_log)?;
        if !o.is_less() {
            return Ok(Err(reject(Step::Monotone, entries[i].n, o, "err_log must strictly decrease")));
        }
        entries[i].separations.push(Separation { step: Step::Monotone, precision: p });
    }
    for e in entries.iter_mut() {
        let exp3 = huge_exp3(e.t)?.log;
        let check = check_q_le_exp3(m, e.t, schedule)?;
        if !check.holds() {
            return Ok(Err(reject(Step::DenominatorBound, e.n, check.ordering, "Eq1 bound <= exp3(t)")));
        }
        let (o, p) = strictly_less(&e.ln_q, &exp3)?;
        if !o.is_less() {
            return Ok(Err(reject(Step::DenominatorBound, e.n, o, "q_n <= exp3(t_n)")));
        }
        e.separations.push(Separation { step: Step::DenominatorBound, precision: p.max(check.precision) });

        let n_exp3 = LogExpr::int(e.n).times(exp3).neg();
        let (o, p) = strictly_less(&e.gap_log, &n_exp3)?;
        if !o.is_less() {
            return Ok(Err(reject(Step::MeanValue, e.n, o, "gap_log < -n ln exp3(t_n)")));
        }
        let n_lnq = LogExpr::int(e.n).times(e.ln_q.clone()).neg();
        let (o2, p2) = strictly_less(&e.gap_log, &n_lnq)?;
        if !o2.is_less() {
            return Ok(Err(reject(Step::MeanValue, e.n, o2, "gap_log < -n ln q_n")));
        }
        e.separations.push(Separation { step: Step::MeanValue, precision: p.max(p2) });

        let target = ultra_log(e.n, e.t)?;
        if e.err_log != target {
            let (o, p) = strictly_less(&e.err_log, &target)?;
            if !o.is_less() {
                return Ok(Err(reject(Step::UltraBound, e.n, o, "err_log <= -n e^(e^t)")));
            }
            e.separations.push(Separation { step: Step::UltraBound, precision: p });
        }
    }
    Ok(Ok(()))
}

/// Builds and certifies the Liouville certificate for `phi(xi)`.
pub fn liouville_certificate(
    state: &FunctionState,
    w: &UltraWitness,
    opts: CertifyOptions,
) -> Result<std::result::Result<LiouvilleCertificate, Rejection>> {
    let (bound_phi, mut entries) = match resolve_entries(state, w, opts)? {
        Ok(v) => v,
        Err(r) => return Ok(Err(r)),
    };
    if let Err(r) = check_chain(w.m, &mut entries, opts.schedule)? {
        return Ok(Err(r));
    }
    Ok(Ok(LiouvilleCertificate { m: w.m, bound_phi: bound_phi.to_decimal_string(), entries }))
}

// ---------------------------------------------------------------------------
// divergence

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub index: usize,
    pub gap: BigRational,
    pub modulus: BigInt,
}

/// First index where the effective bits of two states differ, with the
/// certified target gap there; `None` if no chosen coefficient differs.
pub fn divergence_check(a: &FunctionState, b: &FunctionState) -> Result<(Option<Divergence>, Report)> {
    let mut report = Report::new("divergence");
    if a.m() != b.m() {
        return Err(Error::Precondition("states have different degrees".into()));
    }
    let shared = a.n_max().min(b.n_max()) + 1;
    let (ra, rb) = (a.enumeration().prefix(shared).records(), b.enumeration().prefix(shared).records());
    if ra != rb {
        return Err(Error::Precondition("states use different enumerations".into()));
    }
    let (ea, eb) = (a.effective_bits(), b.effective_bits());
    let j = ea.iter().zip(&eb).position(|(x, y)| x != y).map(|i| i + FIRST_FREE);
    let upto = j.unwrap_or(a.n_max().min(b.n_max()) + 1);
    for n in FIRST_FREE..upto {
        if a.targets()[&n] != b.targets()[&n] {
            report.fail(json!({"n": n, "step": "shared prefix targets equal"}));
        }
    }
    let Some(j) = j else {
        report.detail("divergence", serde_json::Value::Null);
        return Ok((None, report));
    };
    let (ta, tb) = (&a.targets()[&j], &b.targets()[&j]);
    let gap = (ta - tb).abs();
    let modulus = a.modulus(j).cloned().unwrap_or_default();
    if gap.is_zero() {
        report.fail(json!({"n": j, "step": "targets differ"}));
    }
    if b.modulus(j) != Some(&modulus) || gap != BigRational::new(BigInt::one(), modulus.clone()) {
        report.fail(json!({"n": j, "step": "gap equals 1/M", "gap": rat_json(&gap)}));
    }
    report.detail("divergence", j);
    report.detail("gap", rat_json(&gap));
    Ok((Some(Divergence { index: j, gap, modulus }), report))
}

// ---------------------------------------------------------------------------
// state suites

/// Every chosen `c_n` certified in `(-1/n^n, 1/n^n) \ {0}`.
pub fn coefficient_check(state: &FunctionState, prec: u32) -> Result<Report> {
    let mut report = Report::new("coefficients");
    for n in FIRST_FREE..=state.n_max() {
        let c = state.coefficient_ball(n, prec)?;
        if !c.excludes_zero() || !(c.abs_upper().to_rational() < inv_self_power(n as u64)) {
            report.fail(json!({"n": n, "ball": c.to_exact_string()}));
        }
    }
    report.used(prec);
    Ok(report)
}

/// `evaluate_f` at each enumerated `alpha_k` contains the exact target.
pub fn exactness_check(state: &FunctionState, prec: u32) -> Result<Report> {
    let mut report = Report::new("exact-values");
    for k in 1..=state.n_max() + 1 {
        let a = state.enumeration().alpha(k)?;
        let b = state.evaluate_f(&a.to_ball(prec + 32), prec)?;
        if !b.contains_rational(&state.f_at_alpha(k)?) {
            report.fail(json!({"k": k, "ball": b.to_exact_string()}));
        }
    }
    report.used(prec);
    Ok(report)
}

pub fn derivative_check(state: &FunctionState) -> Result<Report> {
    let mut report = Report::new("derivative-bounds");
    let d = state.derivative_bound()?;
    if !(d.bound_f.to_rational() < BigRational::new(1.into(), 1000.into())) {
        report.fail(json!({"bound_f": d.bound_f.to_decimal_string()}));
    }
    if !(d.bound_phi.to_rational() < BigRational::new(5.into(), 10_000.into())) {
        report.fail(json!({"bound_phi": d.bound_phi.to_decimal_string()}));
    }
    report.detail("bound_f", d.bound_f.to_f64());
    report.detail("bound_phi", d.bound_phi.to_f64());
    report.detail("below_0.0002", d.below_f_constant);
    report.detail("phi_below_0.0001", d.below_phi_constant);
    Ok(report)
}

/// `f(x)` and `f(x + 2t)` enclosures overlap.
pub fn periodicity_check(state: &FunctionState, samples: u64, seed: u64, exec: Exec) -> Result<Report> {
    let mut report = Report::new("periodicity");
    let prec = 96;
    let fails = map_range(exec, 0..samples, |i| -> Result<Option<serde_json::Value>> {
        let mut rng = sample_rng(seed, i);
        let x = random_rational(&mut rng, -2, 2);
        let t: i64 = rng.gen_range(-5..=5);
        let y = &x + BigRational::from_integer((2 * t).into());
        let (a, b) = (state.evaluate_f_rational(&x, prec)?, state.evaluate_f_rational(&y, prec)?);
        Ok((!a.overlaps(&b)).then(|| json!({"x": rat_json(&x), "t": t})))
    });
    for f in fails {
        if let Some(ce) = f? {
            report.fail(ce);
        }
    }
    report.used(prec);
    report.detail("samples", samples);
    Ok(report)
}

/// At least two distinct values among `f(alpha_k)` once `N >= 6`.
pub fn distinct_values_check(state: &FunctionState) -> Result<Report> {
    let mut report = Report::new("distinct-values");
    let mut vals: Vec<BigRational> = (1..=state.n_max() + 1).map(|k| state.f_at_alpha(k)).collect::<Result<_>>()?;
    vals.sort();
    vals.dedup();
    if state.n_max() >= FIRST_FREE && vals.len() < 2 {
        report.fail(json!({"distinct": vals.len()}));
    }
    report.detail("distinct", vals.len());
    Ok(report)
}

/// All state-level certifications.
pub fn verify_state(state: &FunctionState, exec: Exec) -> Result<Report> {
    let schedule = state.schedule();
    Ok(Report::merge(
        "construction",
        vec![
            coefficient_check(state, 128)?,
            exactness_check(state, 128)?,
            check_denominator_chain(state, schedule)?,
            derivative_check(state)?,
            distinct_values_check(state)?,
            periodicity_check(state, 64, DEFAULT_SEED, exec)?,
        ],
    ))
}

// ---------------------------------------------------------------------------
// enumeration suites

/// `2 |S_k| < (m+1)(2k+1)^m`, counting both signs. The sign-normalized
/// count `|S_k| < (m+1)(2k+1)^m` is reported alongside.
pub fn tk_bound_check(m: usize, kmax: u64, exec: Exec) -> Result<Report> {
    let mut report = Report::new(format!("tk-bound-m{m}"));
    let mut sizes = Vec::new();
    let mut one_sign = true;
    for k in 1..=kmax {
        let s = crate::polyenum::enumerate_sk_with(m, k, crate::polyenum::DEFAULT_GRID_BUDGET, exec)?.len();
        let bound = (m as u128 + 1) * (2 * k as u128 + 1).pow(m as u32);
        if 2 * s as u128 >= bound {
            report.fail(json!({"k": k, "size": s, "bound": bound.to_string()}));
        }
        one_sign &= (s as u128) < bound;
        sizes.push(s);
    }
    report.detail("sizes", sizes);
    report.detail("sign_normalized_bound_holds", one_sign);
    Ok(report)
}

pub fn height_bounds_check(e: &Enumeration) -> Report {
    let mut report = Report::new(format!("index-height-bounds-m{}", e.m()));
    for v in crate::enumeration::check_height_bounds(e) {
        report.fail(json!({"index": v.index, "height": v.height.to_string(), "bound": v.bound}));
    }
    report.detail("items", e.len());
    report
}

// ---------------------------------------------------------------------------
// ball containment fuzzing

/// Evaluates elementary functions on random balls at `prec` bits and checks
/// that each result contains the value at a random inner point computed at
/// `4 prec` bits.
pub fn ball_fuzz(samples: u64, prec: u32, seed: u64, exec: Exec) -> Result<Report> {
    let mut report = Report::new("ball-containment");
    let fails = map_range(exec, 0..samples, |i| -> Result<Option<serde_json::Value>> {
        let mut rng = sample_rng(seed, i);
        let kind = i % 6;
        let mid = random_rational(&mut rng, -8, 8);
        let rad_exp: i64 = rng.gen_range(-(prec as i64)..=-4);
        let rad = if rng.gen_bool(0.25) { Dyadic::zero() } else { Dyadic::pow2(rad_exp) };
        // keep ln and the reciprocal away from 0; radii are at most 1/16
        let eighth = BigRational::new(1.into(), 8.into());
        let mid = match kind {
            4 => mid.abs() + eighth,
            5 if mid.is_negative() => mid - eighth,
            5 => mid + eighth,
            _ => mid,
        };
        let xm = Ball::from_rational(&mid, prec);
        let x = Ball::new(xm.mid().clone(), xm.rad().add(&rad));
        // inner point
        let u = random_rational(&mut rng, -1, 1);
        let inner = &mid + u * rad.to_rational();
        let hp = 4 * prec;
        let z = Ball::from_rational(&inner, hp);
        let eval = |b: &Ball, p: u32| -> Result<Option<Ball>> {
            Ok(Some(match kind {
                0 => exp(b, p)?,
                1 => sin(b, p),
                2 => cos(b, p),
                3 => cos_pi(b, p),
                4 => {
                    if !b.is_positive() {
                        return Ok(None);
                    }
                    ln(b, p)?
                }
                _ => b.sqr(p).add(&Ball::one(), p).div(&b.mul_int(&BigInt::from(2), p), p)?,
            }))
        };
        let (Some(lo), Some(hi)) = (eval(&x, prec)?, eval(&z, hp)?) else {
            return Err(Error::DivisionByZero);
        };
        if x.contains(z.mid()) && !lo.contains(hi.mid()) {
            return Ok(Some(json!({"kind": kind, "x": x.to_exact_string(), "inner": rat_json(&inner)})));
        }
        Ok(None)
    });
    let mut bad = 0usize;
    for f in fails {
        match f {
            Ok(Some(ce)) => report.fail(ce),
            Ok(None) => {}
            Err(Error::DivisionByZero) => bad += 1,
            Err(e) => return Err(e),
        }
    }
    if bad > 0 {
        report.undecided(json!({"skipped": bad, "reason": "input ball meets the domain boundary"}));
    }
    report.used(4 * prec);
    report.detail("samples", samples);
    report.detail("skipped", bad);
    Ok(report)
}

/// Runs a named suite at desk scale.
pub fn lemma_suite(m_max: usize, samples: u64, seed: u64, schedule: Schedule, exec: Exec) -> Result<Report> {
    let mut parts = vec![lemma_sin(samples, seed, schedule, exec)?, lemma_two_rationals_suite(samples, seed, exec)];
    let per_m = samples.div_ceil(m_max.min(3) as u64);
    for m in 1..=m_max.min(3) {
        let e = Enumeration::build(m, 120)?;
        parts.push(lemma_diff_height(&e, per_m, seed, exec)?);
    }
    for m in 1..=m_max.min(2) {
        let e = Enumeration::build_to_height(m, 5, exec)?;
        parts.push(lemma_cos_separation(&e, 5, schedule, exec)?);
    }
    Ok(Report::merge("lemmas", parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::ball::ratio;

    #[test]
    fn sin_examples() {
        let s = Schedule::with_cap(1024);
        assert_eq!(sin_inequality(&ratio(1, 1), &ratio(-1, 1), s).unwrap().0, Some(true));
        assert_eq!(sin_inequality(&ratio(1, 10), &ratio(0, 1), s).unwrap().0, Some(true));
        // far outside [-1, 1] the inequality fails: sin(3) < 1
        assert_eq!(sin_inequality(&ratio(3, 1), &ratio(0, 1), s).unwrap().0, Some(false));
        assert!(sin_inequality(&ratio(1, 3), &ratio(1, 3), s).is_err());
    }

    #[test]
    fn two_rationals_examples() {
        let (a, b) = lemma_two_rationals(&ratio(3, 10), &ratio(7, 10), &ratio(4, 10)).unwrap();
        assert_eq!((a, b), (ratio(2, 5), ratio(3, 5)));
        let (a, b) = lemma_two_rationals(&ratio(0, 1), &ratio(35, 100), &ratio(3, 10)).unwrap();
        assert_eq!((a, b), (ratio(1, 7), ratio(2, 7)));
        let (a, b) = lemma_two_rationals(&ratio(-1, 1), &ratio(1, 1), &ratio(1, 1)).unwrap();
        assert_eq!((a, b), (ratio(-1, 2), ratio(0, 1)));
        assert!(lemma_two_rationals(&ratio(1, 1), &ratio(1, 1), &ratio(1, 1)).is_err());
        // length equal to b - a can land on b
        assert!(lemma_two_rationals(&ratio(0, 1), &ratio(1, 1), &ratio(1, 1)).is_err());
    }

    #[test]
    fn diff_height_examples() {
        let x = AlgebraicNumber::from_rational(&ratio(1, 3));
        let y = AlgebraicNumber::from_rational(&ratio(1, 2));
        assert_eq!(diff_height_pair(&x, &y, 1).unwrap(), (6.into(), 96.into()));
        let z = AlgebraicNumber::from_rational(&ratio(0, 1));
        assert_eq!(diff_height_pair(&z, &y, 1).unwrap(), (2.into(), 32.into()));
    }

    #[test]
    fn cos_separation_small() {
        let s = Schedule::with_cap(1024);
        for n in 1..=3 {
            let e = Enumeration::build_to_height(1, n, Exec::default()).unwrap();
            let r = lemma_cos_separation(&e, n, s, Exec::default()).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let e = Enumeration::build(1, 2).unwrap();
        assert!(lemma_cos_separation(&e, 3, s, Exec::default()).is_err());
    }

    #[test]
    fn q_le_exp3_examples() {
        let c = check_q_le_exp3(1, 8, Schedule::default()).unwrap();
        assert!(c.holds());
        let l = c.ln_lhs.to_f64();
        assert!((l / 8.58e13 - 1.0).abs() < 1e-3, "{l}");
        let r = c.ln_rhs.to_f64();
        assert!(r.is_infinite() || r > 1e300);
        assert!(check_q_le_exp3(2, 8, Schedule::default()).unwrap().holds());
        assert!(check_q_le_exp3(1, 7, Schedule::default()).is_err());
    }

    #[test]
    fn cancellation() {
        let a = LogExpr::ln_int(3).plus(ultra_log(2, 9).unwrap());
        let b = ultra_log(2, 9).unwrap();
        let (o, p) = compare_cancelled(&a, &b, Schedule::with_cap(256)).unwrap();
        assert_eq!(o, HugeOrdering::Greater);
        assert!(p <= 64);
    }

    #[test]
    fn synthetic_approximants() {
        for m in 1..=3 {
            for t in 8..=10 {
                let a = synthetic_approximant(m, t).unwrap();
                assert_eq!(a.degree(), m);
                assert_eq!(a.height(), BigInt::from(t));
            }
        }
    }

    fn state(bits: &[u8]) -> FunctionState {
        FunctionState::construct(1, 8, bits, Schedule::with_cap(4096)).unwrap()
    }

    #[test]
    fn synthetic_certificate_accepted() {
        let s = state(&[0, 1, 0]);
        let w = UltraWitness::synthetic(1, 3).unwrap();
        let cert = liouville_certificate(&s, &w, CertifyOptions::default()).unwrap().unwrap();
        assert_eq!(cert.entries.len(), 3);
        for e in &cert.entries {
            let steps: Vec<Step> = e.separations.iter().map(|s| s.step).collect();
            assert!(steps.contains(&Step::DenominatorBound) && steps.contains(&Step::MeanValue));
        }
        let back = UltraWitness::from_json(&w.to_json()).unwrap();
        assert_eq!(back.to_file(), w.to_file());
    }

    #[test]
    fn corruptions_rejected() {
        let s = state(&[0, 0, 0]);
        let opts = CertifyOptions::default();
        let w = UltraWitness::synthetic(1, 3).unwrap();

        let mut low = w.clone();
        low.chain[0].t = 7;
        low.chain[0].approx = AlgebraicNumber::from_rational(&ratio(1, 7));
        let r = liouville_certificate(&s, &low, opts).unwrap().unwrap_err();
        assert_eq!(r.step, Step::Precondition);
        let trimmed = liouville_certificate(&s, &low, CertifyOptions { trim: true, ..opts }).unwrap().unwrap();
        assert_eq!(trimmed.entries.len(), 2);

        let mut weak = w.clone();
        weak.chain[0].err_log = LogExpr::int(-1);
        assert_eq!(liouville_certificate(&s, &weak, opts).unwrap().unwrap_err().step, Step::MeanValue);
        let mut weak2 = w.clone();
        weak2.chain[1].err_log = LogExpr::int(-1);
        assert_eq!(liouville_certificate(&s, &weak2, opts).unwrap().unwrap_err().step, Step::Monotone);

        let (_, mut entries) = resolve_entries(&s, &w, opts).unwrap().unwrap();
        entries[1].ln_q = huge_exp3(entries[1].t).unwrap().log.plus(LogExpr::ln_int(2));
        let r = check_chain(1, &mut entries, opts.schedule).unwrap().unwrap_err();
        assert_eq!((r.step, r.n), (Step::DenominatorBound, Some(2)));

        let mut wrong = w.clone();
        wrong.chain[2].approx = AlgebraicNumber::from_rational(&ratio(1, 3));
        assert_eq!(liouville_certificate(&s, &wrong, opts).unwrap().unwrap_err().step, Step::HeightMismatch);
    }

    #[test]
    fn strengthening_keeps_acceptance() {
        let s = state(&[1, 1, 1]);
        let mut w = UltraWitness::synthetic(1, 2).unwrap();
        for e in &mut w.chain {
            e.err_log = e.err_log.clone().plus(LogExpr::int(-5));
        }
        assert!(liouville_certificate(&s, &w, CertifyOptions::default()).unwrap().is_ok());
    }

    #[test]
    fn divergence() {
        let a = state(&[0, 0, 0]);
        let b = state(&[0, 0, 1]);
        let (d, r) = divergence_check(&a, &b).unwrap();
        assert!(r.passed(), "{r:?}");
        let d = d.unwrap();
        assert_eq!(d.index, 8);
        assert_eq!(d.gap, BigRational::new(1.into(), d.modulus.clone()));
        let (none, r) = divergence_check(&a, &a).unwrap();
        assert!(none.is_none() && r.passed());
    }

    #[test]
    fn state_suite_passes() {
        let s = state(&[1, 0, 1]);
        let r = verify_state(&s, Exec::default()).unwrap();
        assert!(r.passed(), "{}", serde_json::to_string_pretty(&r).unwrap());
    }
}
