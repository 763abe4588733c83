//! Precision-doubling refinement driver.

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Start and cap of a precision-doubling schedule, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub start: u32,
    pub cap: u32,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { start: 64, cap: 1 << 16 }
    }
}

impl Schedule {
    pub fn new(start: u32, cap: u32) -> Self {
        assert!(start >= 1 && start <= cap, "precision start must not exceed cap");
        Schedule { start, cap }
    }

    pub fn with_cap(cap: u32) -> Self {
        Schedule { start: 64.min(cap), cap }
    }

    /// Precisions visited: `start, 2 start, ...`, with the cap as the final step.
    pub fn precisions(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap;
        let mut next = Some(self.start);
        std::iter::from_fn(move || {
            let p = next?;
            next = if p >= cap {
                None
            } else {
                Some(p.saturating_mul(2).min(cap))
            };
            Some(p)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Decided { value: T, precision: u32 },
    Undecided { cap: u32 },
}

impl<T> Outcome<T> {
    pub fn decided(self) -> Option<T> {
        match self {
            Outcome::Decided { value, .. } => Some(value),
            Outcome::Undecided { .. } => None,
        }
    }

    pub fn is_decided(&self) -> bool {
        matches!(self, Outcome::Decided { .. })
    }

    pub fn precision(&self) -> u32 {
        match self {
            Outcome::Decided { precision, .. } => *precision,
            Outcome::Undecided { cap } => *cap,
        }
    }
}

/// Runs `step` at doubling precisions until it returns `Some` or the cap is reached.
pub fn refine<T, F>(schedule: Schedule, mut step: F) -> Result<Outcome<T>>
where
    F: FnMut(u32) -> Result<Option<T>>,
{
    for p in schedule.precisions() {
        if let Some(value) = step(p)? {
            return Ok(Outcome::Decided { value, precision: p });
        }
    }
    Ok(Outcome::Undecided { cap: schedule.cap })
}

/// Like [`refine`] for infallible steps.
pub fn refine_with<T, F>(schedule: Schedule, mut step: F) -> Outcome<T>
where
    F: FnMut(u32) -> Option<T>,
{
    refine(schedule, |p| Ok(step(p))).expect("infallible step")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;
    use crate::rigor::ball::{ratio, Ball};
    use crate::rigor::elementary::{cos_pi, sin};
    use std::cmp::Ordering;

    #[test]
    fn schedule_doubles_to_cap() {
        let ps: Vec<_> = Schedule::new(64, 300).precisions().collect();
        assert_eq!(ps, vec![64, 128, 256, 300]);
    }

    #[test]
    fn tiny_sine_is_separated_from_zero() {
        let x = Ball::from_rational(&ratio(1, 1_000_000_000), 128);
        let out = refine_with(Schedule::new(64, 4096), |p| {
            sin(&x, p).excludes_zero().then_some(())
        });
        assert!(out.is_decided());
        assert!(out.precision() <= 128);
    }

    #[test]
    fn sine_of_zero_stays_undecided() {
        let out = refine_with(Schedule::new(64, 1024), |p| {
            sin(&Ball::zero(), p).excludes_zero().then_some(())
        });
        assert_eq!(out, Outcome::Undecided { cap: 1024 });
    }

    #[test]
    fn cosines_ordered() {
        let out = refine_with(Schedule::default(), |p| {
            let a = cos_pi(&Ball::from_rational(&ratio(1, 3), p), p);
            let b = cos_pi(&Ball::exact(Dyadic::pow2(-2)), p);
            a.certified_cmp(&b)
        });
        assert_eq!(out.decided(), Some(Ordering::Less));
    }
}
