//! Brute-force quadrature used to check every closed form in the crate.
//!
//! Nothing here calls into [`crate::elliptic`] or [`crate::area`]; the
//! oracle only integrates the defining integrands directly.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::curve::{self, CurveParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    AdaptiveSimpson,
    /// Adaptive bisection driven by an `n`-point Gauss–Legendre rule.
    GaussLegendre(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub max_depth: u32,
    pub rule: Rule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-11,
            max_depth: 40,
            rule: Rule::AdaptiveSimpson,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, max_depth: u32, rule: Rule) -> Result<Self> {
        let spec = QuadratureSpec {
            abs_tol,
            max_depth,
            rule,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tol(abs_tol: f64) -> Result<Self> {
        Self::new(abs_tol, 40, Rule::AdaptiveSimpson)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol.is_finite() && self.abs_tol >= 1e-15) {
            return Err(Error::InvalidSpec(format!("abs_tol {} must be >= 1e-15", self.abs_tol)));
        }
        if self.max_depth == 0 || self.max_depth > 60 {
            return Err(Error::InvalidSpec(format!(
                "max_depth {} must be in 1..=60",
                self.max_depth
            )));
        }
        if let Rule::GaussLegendre(n) = self.rule {
            if n == 0 || n > 128 {
                return Err(Error::InvalidSpec(format!(
                    "Gauss–Legendre order {n} must be in 1..=128"
                )));
            }
        }
        Ok(())
    }
}

/// Integrates `f` over `[lo, hi]` to within `spec.abs_tol`.
///
/// When some subinterval reaches `spec.max_depth` without meeting its share
/// of the tolerance, the result is [`Error::DepthExhausted`] carrying the
/// best estimate and the accumulated error bound.
pub fn quad<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if lo == hi {
        return Ok(0.0);
    }
    let mut acc = Accumulator::default();
    match spec.rule {
        Rule::AdaptiveSimpson => {
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            let levels = Levels::new(spec.max_depth);
            simpson_step(&f, lo, fa, hi, fb, fm, whole, spec.abs_tol, levels, &mut acc);
        }
        Rule::GaussLegendre(n) => {
            let rule = GaussLegendre::new(n);
            let whole = rule.integrate(&f, lo, hi);
            let levels = Levels::new(spec.max_depth);
            gauss_step(&f, &rule, lo, hi, whole, spec.abs_tol, levels, &mut acc);
        }
    }
    if !acc.value.is_finite() {
        return Err(Error::domain("quadrature", acc.value, "finite integrand values"));
    }
    if acc.exhausted {
        Err(Error::DepthExhausted {
            estimate: acc.value,
            error_bound: acc.error,
        })
    } else {
        Ok(acc.value)
    }
}

/// Bisection levels always taken before the error test may accept a panel.
const MIN_LEVELS: u32 = 4;

/// Remaining bisection budget and the forced levels still to take.
#[derive(Debug, Clone, Copy)]
struct Levels {
    remaining: u32,
    forced: u32,
}

impl Levels {
    fn new(max_depth: u32) -> Self {
        Levels {
            remaining: max_depth,
            forced: MIN_LEVELS.min(max_depth),
        }
    }

    fn next(self) -> Self {
        Levels {
            remaining: self.remaining - 1,
            forced: self.forced.saturating_sub(1),
        }
    }
}

#[derive(Debug, Default)]
struct Accumulator {
    value: f64,
    error: f64,
    exhausted: bool,
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    levels: Levels,
    acc: &mut Accumulator,
) {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol && levels.forced == 0 {
        acc.value += left + right + delta / 15.0;
        acc.error += delta.abs() / 15.0;
    } else if levels.remaining == 0 {
        acc.value += left + right + delta / 15.0;
        acc.error += delta.abs() / 15.0;
        acc.exhausted = true;
    } else {
        simpson_step(f, a, fa, m, fm, flm, left, 0.5 * tol, levels.next(), acc);
        simpson_step(f, m, fm, b, fb, frm, right, 0.5 * tol, levels.next(), acc);
    }
}

#[allow(clippy::too_many_arguments)]
fn gauss_step<F: Fn(f64) -> f64>(
    f: &F,
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    levels: Levels,
    acc: &mut Accumulator,
) {
    let m = 0.5 * (a + b);
    let left = rule.integrate(f, a, m);
    let right = rule.integrate(f, m, b);
    let delta = left + right - whole;
    if (delta.abs() <= tol && levels.forced == 0) || levels.remaining == 0 {
        acc.value += left + right;
        acc.error += delta.abs();
        acc.exhausted |= delta.abs() > tol;
    } else {
        gauss_step(f, rule, a, m, left, 0.5 * tol, levels.next(), acc);
        gauss_step(f, rule, m, b, right, 0.5 * tol, levels.next(), acc);
    }
}

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipticKind {
    K,
    E,
}

/// Quadrature of the defining integrals of `K(k)` (`k < 1`) and `E(k)` (`k <= 1`).
pub fn quad_elliptic(kind: EllipticKind, k: f64, spec: &QuadratureSpec) -> Result<f64> {
    let ok = match kind {
        EllipticKind::K => (0.0..1.0).contains(&k),
        EllipticKind::E => (0.0..=1.0).contains(&k),
    };
    if !ok {
        return Err(Error::domain("elliptic quadrature", k, "the integral's domain"));
    }
    // 1 - k² sin²θ factored to keep accuracy where it nearly vanishes
    let radicand = move |t: f64| {
        let ks = k * t.sin();
        (1.0 - ks) * (1.0 + ks)
    };
    match kind {
        EllipticKind::K => quad(|t| 1.0 / radicand(t).sqrt(), 0.0, FRAC_PI_2, spec),
        EllipticKind::E => quad(|t| radicand(t).max(0.0).sqrt(), 0.0, FRAC_PI_2, spec),
    }
}

/// How `x'(t)` is obtained inside the area integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivative {
    Analytic,
    /// Central difference of the sampled parametrisation with step `h`.
    FiniteDifference {
        h: f64,
    },
}

/// Oracle value of the egg area and its halves split at `t = π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleArea {
    pub total: f64,
    /// `-2∫₀^{π/2} y x' dt`
    pub part2: f64,
    /// `-2∫_{π/2}^{π} y x' dt`
    pub part1: f64,
}

pub fn quad_area(params: &CurveParams, spec: &QuadratureSpec) -> Result<OracleArea> {
    quad_area_with(params, spec, Derivative::Analytic)
}

pub fn quad_area_with(params: &CurveParams, spec: &QuadratureSpec, derivative: Derivative) -> Result<OracleArea> {
    let integrand = |t: f64| {
        let y = curve::point_at(params, t).y;
        -2.0 * y * x_prime(params, t, derivative)
    };
    let part2 = quad(integrand, 0.0, FRAC_PI_2, spec)?;
    let part1 = quad(integrand, FRAC_PI_2, PI, spec)?;
    Ok(OracleArea {
        total: part2 + part1,
        part2,
        part1,
    })
}

/// `x'(t) = -2q²w sin t cos t - sin t R - q⁴w² sin t cos²t / R`, `R = √(a² - q⁴w² sin²t)`.
fn x_prime(params: &CurveParams, t: f64, derivative: Derivative) -> f64 {
    match derivative {
        Derivative::Analytic => {
            let q = params.derive().q;
            let qqw = q * q * params.w();
            let (s, c) = t.sin_cos();
            let r = curve::radical(params.a(), qqw, s);
            // At k = 1 and t = π/2 both R and cos t vanish; the quotient's limit is 0.
            let last = if r > 0.0 { qqw * qqw * s * c * c / r } else { 0.0 };
            -2.0 * qqw * s * c - s * r - last
        }
        Derivative::FiniteDifference { h } => {
            let fwd = curve::point_at(params, t + h).x;
            let back = curve::point_at(params, t - h).x;
            (fwd - back) / (2.0 * h)
        }
    }
}
