//! First and second Taylor approximations at the origin, and the two-sided
//! inequality chains they form.
//!
//! For a series-defined `f` the first approximation `T_n` is the truncated
//! Maclaurin polynomial. The second approximation on `[0, β]` is
//!
//! ```text
//! 𝕋_0(x) = f(β)
//! 𝕋_n(x) = T_{n-1}(x) + (x/β)ⁿ (f(β) - T_{n-1}(β)),   n >= 1
//! ```
//!
//! which matches `f` at `β`. For the four targets here the `T_n` and `𝕋_n`
//! squeeze `f` monotonically from opposite sides.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::elliptic::{rational_to_f64, SeriesTarget};
use crate::error::{Error, Result};
use crate::format;

/// β substituted when a second approximation of `K` or `D` is requested at 1.
pub const DIVERGENT_ENDPOINT_BETA: f64 = 0.999_999;

/// Rounding slack allowed when checking inequality chains.
pub const CHAIN_SLACK: f64 = 1e-14;

/// A polynomial coefficient `rational + pi·π + inexact`.
///
/// The exact parts come from the series; `inexact` holds contributions known
/// only numerically, such as `K(β)/βⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub rational: BigRational,
    pub pi: BigRational,
    pub inexact: f64,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient {
            rational: BigRational::zero(),
            pi: BigRational::zero(),
            inexact: 0.0,
        }
    }

    pub fn pi_multiple(pi: BigRational) -> Self {
        Coefficient {
            pi,
            ..Coefficient::zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.pi.is_zero() && self.inexact == 0.0
    }

    pub fn is_exact(&self) -> bool {
        self.inexact == 0.0
    }

    pub fn value(&self) -> f64 {
        rational_to_f64(&self.rational) + rational_to_f64(&self.pi) * std::f64::consts::PI + self.inexact
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::pi_linear(&self.rational, &self.pi, self.inexact))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApproxKind {
    First,
    Second { beta: f64 },
}

/// An approximating polynomial of degree `degree` anchored at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorApprox {
    target: SeriesTarget,
    kind: ApproxKind,
    degree: usize,
    coeffs: Vec<Coefficient>,
    values: Vec<f64>,
}

impl TaylorApprox {
    fn new(target: SeriesTarget, kind: ApproxKind, degree: usize, coeffs: Vec<Coefficient>) -> Self {
        let values = coeffs.iter().map(Coefficient::value).collect();
        TaylorApprox {
            target,
            kind,
            degree,
            coeffs,
            values,
        }
    }

    pub fn target(&self) -> SeriesTarget {
        self.target
    }

    pub fn kind(&self) -> ApproxKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Anchor of the expansion; always the origin.
    pub fn anchor(&self) -> f64 {
        0.0
    }

    pub fn beta(&self) -> Option<f64> {
        match self.kind {
            ApproxKind::First => None,
            ApproxKind::Second { beta } => Some(beta),
        }
    }

    /// Coefficients of `x⁰ … xⁿ`.
    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let ax = x.abs();
        let ok = match self.kind {
            ApproxKind::First => {
                ax < self.target.radius() || (ax == self.target.radius() && self.target.value_at_one().is_some())
            }
            ApproxKind::Second { beta } => ax <= beta,
        };
        if !ok || !x.is_finite() {
            return Err(Error::domain("Taylor approximation", x, "the approximation interval"));
        }
        Ok(self.eval_unchecked(x))
    }

    pub fn eval_unchecked(&self, x: f64) -> f64 {
        self.values.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

pub fn first_taylor(target: SeriesTarget, n: usize) -> TaylorApprox {
    let mut coeffs = vec![Coefficient::zero(); n + 1];
    for (i, c) in target.coeffs(n / 2).into_iter().enumerate() {
        coeffs[2 * i] = Coefficient::pi_multiple(c);
    }
    TaylorApprox::new(target, ApproxKind::First, n, coeffs)
}

/// Resolves the β actually used for `target`; `β = 1` maps to
/// [`DIVERGENT_ENDPOINT_BETA`] when `target` diverges at 1.
pub fn effective_beta(target: SeriesTarget, beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0 && beta <= target.radius()) {
        return Err(Error::domain("β", beta, "(0, 1]"));
    }
    if beta == target.radius() && target.value_at_one().is_none() {
        return Ok(DIVERGENT_ENDPOINT_BETA);
    }
    Ok(beta)
}

pub fn second_taylor(target: SeriesTarget, n: usize, beta: f64) -> Result<TaylorApprox> {
    let beta = effective_beta(target, beta)?;
    let endpoint = if beta == 1.0 { target.value_at_one() } else { None };
    let f_beta = match endpoint {
        Some(_) => None,
        None => Some(target.value(beta)?),
    };

    if n == 0 {
        let c = match (&endpoint, f_beta) {
            (Some(exact), _) => Coefficient {
                rational: exact.clone(),
                ..Coefficient::zero()
            },
            (None, Some(v)) => Coefficient {
                inexact: v,
                ..Coefficient::zero()
            },
            (None, None) => unreachable!(),
        };
        return Ok(TaylorApprox::new(target, ApproxKind::Second { beta }, 0, vec![c]));
    }

    let mut coeffs = first_taylor(target, n - 1).coeffs;
    coeffs.push(Coefficient::zero());

    // β is a dyadic rational, so T_{n-1}(β)/βⁿ stays exact.
    let beta_exact = BigRational::from_float(beta).expect("finite β");
    let beta_n = pow(&beta_exact, n);
    let mut pi_part = BigRational::zero();
    let mut beta_pow = BigRational::one();
    for c in coeffs.iter().take(n) {
        pi_part -= &c.pi * &beta_pow;
        beta_pow *= &beta_exact;
    }
    let correction = match endpoint {
        Some(exact) => Coefficient {
            rational: exact / &beta_n,
            pi: pi_part / &beta_n,
            inexact: 0.0,
        },
        None => Coefficient {
            rational: BigRational::zero(),
            pi: pi_part / &beta_n,
            inexact: f_beta.expect("direct value") / beta.powi(n as i32),
        },
    };
    coeffs[n] = correction;
    Ok(TaylorApprox::new(target, ApproxKind::Second { beta }, n, coeffs))
}

fn pow(base: &BigRational, n: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..n {
        out *= base;
    }
    out
}

/// Values of the chain members at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainPoint {
    pub x: f64,
    pub f: f64,
    /// `T_0(x) … T_n(x)`
    pub first: Vec<f64>,
    /// `𝕋_0(x) … 𝕋_n(x)`
    pub second: Vec<f64>,
    /// Smallest gap between neighbouring members, oriented so that it is >= 0.
    pub min_margin: f64,
}

impl ChainPoint {
    /// `|f - T_j|`, non-increasing in `j` when the chain holds.
    pub fn first_errors(&self) -> Vec<f64> {
        self.first.iter().map(|t| (self.f - t).abs()).collect()
    }

    /// `|𝕋_j - f|`, non-increasing in `j` when the chain holds.
    pub fn second_errors(&self) -> Vec<f64> {
        self.second.iter().map(|t| (t - self.f).abs()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub target: SeriesTarget,
    pub beta: f64,
    pub max_degree: usize,
    pub points: Vec<ChainPoint>,
}

impl ChainReport {
    pub fn min_margin(&self) -> f64 {
        self.points.iter().map(|p| p.min_margin).fold(f64::INFINITY, f64::min)
    }
}

/// Checks, at every grid point, the full ordering
///
/// ```text
/// T_0 ≤ T_1 ≤ … ≤ T_n ≤ f ≤ 𝕋_n ≤ … ≤ 𝕋_1 ≤ 𝕋_0      (K, D)
/// ```
///
/// and the mirrored ordering for `E` and the area. Fails on the first pair
/// out of order by more than [`CHAIN_SLACK`].
pub fn verify_chain(target: SeriesTarget, max_degree: usize, beta: f64, grid: &[f64]) -> Result<ChainReport> {
    let beta = effective_beta(target, beta)?;
    let firsts: Vec<TaylorApprox> = (0..=max_degree).map(|n| first_taylor(target, n)).collect();
    let seconds = (0..=max_degree)
        .map(|n| second_taylor(target, n, beta))
        .collect::<Result<Vec<_>>>()?;
    let sign = if target.is_increasing() { 1.0 } else { -1.0 };

    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        if !(x > 0.0 && x <= beta) {
            return Err(Error::domain("chain grid point", x, "(0, β]"));
        }
        let f = target.value(x)?;
        let first = firsts.iter().map(|t| t.eval(x)).collect::<Result<Vec<_>>>()?;
        let second = seconds.iter().map(|t| t.eval(x)).collect::<Result<Vec<_>>>()?;

        // Lowest to highest after orientation.
        let mut chain: Vec<(&'static str, usize, f64)> = Vec::with_capacity(2 * max_degree + 3);
        chain.extend(first.iter().enumerate().map(|(j, &v)| ("T", j, v)));
        chain.push(("f", 0, f));
        chain.extend(second.iter().enumerate().rev().map(|(j, &v)| ("𝕋", j, v)));

        let mut min_margin = f64::INFINITY;
        for pair in chain.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let gap = sign * (hi.2 - lo.2);
            if gap < -CHAIN_SLACK {
                return Err(Error::ChainViolation {
                    x,
                    lhs: lo.0,
                    lhs_degree: lo.1,
                    rhs: hi.0,
                    rhs_degree: hi.1,
                    excess: -gap,
                });
            }
            min_margin = min_margin.min(gap);
        }
        for j in (0..max_degree).step_by(2) {
            let d = (first[j] - first[j + 1]).abs();
            if d > CHAIN_SLACK {
                return Err(Error::ChainViolation {
                    x,
                    lhs: "T",
                    lhs_degree: j,
                    rhs: "T",
                    rhs_degree: j + 1,
                    excess: d,
                });
            }
        }
        points.push(ChainPoint {
            x,
            f,
            first,
            second,
            min_margin,
        });
    }
    Ok(ChainReport {
        target,
        beta,
        max_degree,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{complete_k, ratio};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pi_coeffs(t: &TaylorApprox) -> Vec<BigRational> {
        t.coefficients().iter().map(|c| c.pi.clone()).collect()
    }

    #[test]
    fn first_k_degree_four() {
        let t = first_taylor(SeriesTarget::K, 4);
        let z = BigRational::zero();
        assert_eq!(
            pi_coeffs(&t),
            vec![ratio(1, 2), z.clone(), ratio(1, 8), z, ratio(9, 128)]
        );
        assert_eq!(t.eval(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn first_e_degree_one_is_constant() {
        let t = first_taylor(SeriesTarget::E, 1);
        assert_eq!(pi_coeffs(&t), vec![ratio(1, 2), BigRational::zero()]);
    }

    #[test]
    fn first_d_degree_ten() {
        let t = first_taylor(SeriesTarget::D, 10);
        let even: Vec<_> = t.coefficients().iter().step_by(2).map(|c| c.pi.clone()).collect();
        assert_eq!(
            even,
            vec![
                ratio(1, 4),
                ratio(3, 32),
                ratio(15, 256),
                ratio(175, 4096),
                ratio(2205, 65536),
                ratio(14553, 524288)
            ]
        );
        assert!(t.coefficients().iter().skip(1).step_by(2).all(Coefficient::is_zero));
    }

    #[test]
    fn second_e_at_one() {
        let t0 = second_taylor(SeriesTarget::E, 0, 1.0).unwrap();
        assert_eq!(t0.coefficients()[0].rational, BigRational::one());
        let t3 = second_taylor(SeriesTarget::E, 3, 1.0).unwrap();
        let c = t3.coefficients();
        assert_eq!(c[0].pi, ratio(1, 2));
        assert_eq!(c[2].pi, ratio(-1, 8));
        assert_eq!((c[3].rational.clone(), c[3].pi.clone()), (ratio(1, 1), ratio(-3, 8)));
        assert!(c[3].is_exact());
        assert_eq!(c[3].to_string(), "1 - 3/8·π");
        assert!((t3.eval(1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn second_k_degree_one() {
        let t = second_taylor(SeriesTarget::K, 1, 0.5).unwrap();
        let k = complete_k(0.5).unwrap();
        let slope = t.coefficients()[1].value();
        assert!((slope - (k - FRAC_PI_2) / 0.5).abs() < 1e-14);
        assert!((t.eval(0.5).unwrap() - k).abs() < 1e-12);
        assert!(t.eval(0.6).is_err());
    }

    #[test]
    fn area_first_at_one() {
        let t = first_taylor(SeriesTarget::Area, 2);
        assert!((t.eval(1.0).unwrap() - 7.0 * PI / 8.0).abs() < 1e-15);
        assert!(first_taylor(SeriesTarget::K, 2).eval(1.0).is_err());
    }

    #[test]
    fn beta_handling() {
        assert_eq!(effective_beta(SeriesTarget::K, 1.0).unwrap(), DIVERGENT_ENDPOINT_BETA);
        assert_eq!(effective_beta(SeriesTarget::E, 1.0).unwrap(), 1.0);
        assert!(second_taylor(SeriesTarget::E, 2, 1.5).is_err());
        assert!(second_taylor(SeriesTarget::Area, 2, 0.0).is_err());
        let t = second_taylor(SeriesTarget::D, 4, 1.0).unwrap();
        assert_eq!(t.beta(), Some(DIVERGENT_ENDPOINT_BETA));
    }

    #[test]
    fn endpoint_interpolation_all_targets() {
        for target in SeriesTarget::ALL {
            for &beta in &[0.3, 0.8, 0.95, 1.0] {
                for n in 1..=10 {
                    let t = second_taylor(target, n, beta).unwrap();
                    let b = t.beta().unwrap();
                    let f = target.value(b).unwrap();
                    assert!(
                        (t.eval(b).unwrap() - f).abs() <= 1e-12 * f.abs().max(1.0),
                        "{} n={n} β={b}",
                        target.name()
                    );
                }
            }
        }
    }

    #[test]
    fn even_degree_collapse() {
        for target in SeriesTarget::ALL {
            for i in 0..6 {
                let a = first_taylor(target, 2 * i);
                let b = first_taylor(target, 2 * i + 1);
                for x in [0.0, 0.3, 0.77, 0.99] {
                    assert_eq!(a.eval(x).unwrap(), b.eval(x).unwrap());
                }
            }
        }
    }

    #[test]
    fn chains_hold() {
        let grid: Vec<f64> = (1..=9).map(|j| j as f64 / 10.0).collect();
        let e = verify_chain(SeriesTarget::E, 10, 1.0, &grid).unwrap();
        assert!(e.min_margin() >= -CHAIN_SLACK);
        let k = verify_chain(SeriesTarget::K, 10, 0.9, &grid[..8]).unwrap();
        assert_eq!(k.points.len(), 8);
        let a = verify_chain(SeriesTarget::Area, 10, 1.0, &[0.25, 0.5, 0.75]).unwrap();
        for p in &a.points {
            assert!((p.second[0] - 8.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn chain_errors_shrink_with_degree() {
        let grid = [0.2, 0.5, 0.8];
        for target in SeriesTarget::ALL {
            let r = verify_chain(target, 10, 0.9, &grid).unwrap();
            for p in &r.points {
                for errs in [p.first_errors(), p.second_errors()] {
                    for w in errs.windows(2) {
                        assert!(w[1] <= w[0] + CHAIN_SLACK);
                    }
                }
            }
        }
    }

    #[test]
    fn chain_rejects_points_outside_beta() {
        assert!(verify_chain(SeriesTarget::K, 4, 0.5, &[0.6]).is_err());
        assert!(verify_chain(SeriesTarget::K, 4, 0.5, &[0.0]).is_err());
    }
}
