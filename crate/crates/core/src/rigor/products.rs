//! The products `g_n(y) = prod_{j <= n} sin(y - y_j)`.

use crate::enumeration::Enumeration;
use crate::error::Result;
use crate::rigor::elementary::sin;
use crate::rigor::Ball;

/// The factors `sin(at - y_j)` for the given nodes.
pub fn sine_factors(nodes: &[Ball], at: &Ball, prec: u32) -> Vec<Ball> {
    nodes.iter().map(|y| sin(&at.sub(y, prec), prec)).collect()
}

/// `prod_j sin(at - y_j)` over the given nodes.
pub fn gn_from_nodes(nodes: &[Ball], at: &Ball, prec: u32) -> Ball {
    sine_factors(nodes, at, prec)
        .iter()
        .fold(Ball::one(), |acc, f| acc.mul(f, prec))
}

/// `g_n(at)` with nodes `y_1, ..., y_n` taken from the enumeration.
pub fn gn_value(e: &Enumeration, n: usize, at: &Ball, prec: u32) -> Result<Ball> {
    let nodes = (1..=n).map(|j| e.y(j, prec)).collect::<Result<Vec<_>>>()?;
    Ok(gn_from_nodes(&nodes, at, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::ball::ratio;

    #[test]
    fn vanishes_at_own_nodes() {
        let e = Enumeration::build(1, 6).unwrap();
        for n in 1..=5 {
            for j in 1..=n {
                let at = e.y(j, 128).unwrap();
                assert!(gn_value(&e, n, &at, 128).unwrap().contains_zero());
            }
        }
    }

    #[test]
    fn g2_at_y3() {
        let e = Enumeration::build(1, 3).unwrap();
        let at = e.y(3, 128).unwrap();
        assert!(at.contains_rational(&ratio(1, 2)));
        let g = gn_value(&e, 2, &at, 128).unwrap();
        let expect = -(0.5f64.sin()).powi(2);
        assert!((g.to_f64() - expect).abs() < 1e-15);
        assert!((g.to_f64() + 0.229_85).abs() < 1e-5);
    }

    #[test]
    fn g6_lower_bound() {
        // |g_n(y_{n+1})| > ((pi/3) / (2^(4m^2+1) (2n+9)^(2m+1)))^n for n = 6, m = 1
        let e = Enumeration::build(1, 7).unwrap();
        let at = e.y(7, 128).unwrap();
        let g = gn_value(&e, 6, &at, 128).unwrap().abs();
        let pi3 = crate::rigor::elementary::pi(128).div_int(3, 128);
        let base = pi3.div(&Ball::from_int(32 * 21i64.pow(3)), 128).unwrap();
        let bound = base.pow(6, 128);
        assert!(bound.certified_lt(&g));
    }
}
