//! Complete elliptic integrals of the first and second kind, the derived
//! integral `D(k) = (K(k) - E(k)) / k²`, and the power series behind them.
//!
//! Everything is parametrised by the modulus `k` (not the parameter `m = k²`).
//!
//! Direct evaluation uses the arithmetic-geometric mean:
//!
//! ```text
//! K(k) = π / (2 · AGM(1, √(1 - k²)))
//! E(k) = K(k) · (1 - Σₙ 2ⁿ⁻¹ cₙ²),   c₀ = k,  cₙ₊₁ = (aₙ - bₙ) / 2
//! ```
//!
//! The series side is handled by [`SeriesTarget`], which generates exact
//! rational coefficients (with the factor π kept symbolic) through a
//! term-ratio recurrence, and sums the series in floating point.

use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// AGM iterations stop once `|a - b| <= AGM_TOL * a`.
const AGM_TOL: f64 = 1e-16;
const AGM_MAX_ITER: usize = 40;

/// Below this modulus `D(k)` is taken from its series instead of `(K - E)/k²`.
pub const D_SERIES_THRESHOLD: f64 = 0.25;

/// Hard cap on the number of series terms summed by [`series_eval`].
pub const MAX_SERIES_TERMS: usize = 10_000_000;

/// Elliptic modulus `k` with `0 <= k <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Modulus(f64);

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && (0.0..=1.0).contains(&k) {
            Ok(Modulus(k))
        } else {
            Err(Error::domain("modulus", k, "[0, 1]"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `k' = √(1 - k²)`, computed as `√((1 - k)(1 + k))` to keep digits near `k = 1`.
    pub fn complement(self) -> f64 {
        ((1.0 - self.0) * (1.0 + self.0)).sqrt()
    }
}

impl TryFrom<f64> for Modulus {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        Modulus::new(k)
    }
}

/// Runs the AGM on `(1, k')` and returns the mean together with `Σ 2ⁿ⁻¹ cₙ²`.
fn agm(k: f64, kp: f64) -> (f64, f64) {
    let mut a = 1.0_f64;
    let mut b = kp;
    let mut weight = 0.5_f64;
    let mut sum = weight * k * k;
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let c = 0.5 * (a - b);
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
        weight *= 2.0;
        sum += weight * c * c;
    }
    (a, sum)
}

/// Complete elliptic integral of the first kind, `K(k) = ∫₀^{π/2} dθ / √(1 - k² sin²θ)`.
///
/// Defined for `0 <= k < 1`; `K` diverges logarithmically at `k = 1`.
pub fn complete_k(k: f64) -> Result<f64> {
    let m = Modulus::new(k).map_err(|_| Error::domain("K(k)", k, "[0, 1)"))?;
    if k >= 1.0 {
        return Err(Error::domain("K(k)", k, "[0, 1)"));
    }
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let (mean, _) = agm(k, m.complement());
    Ok(PI / (2.0 * mean))
}

/// Complete elliptic integral of the second kind, `E(k) = ∫₀^{π/2} √(1 - k² sin²θ) dθ`.
///
/// Defined for `0 <= k <= 1` with `E(1) = 1`.
pub fn complete_e(k: f64) -> Result<f64> {
    let m = Modulus::new(k).map_err(|_| Error::domain("E(k)", k, "[0, 1]"))?;
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    let (mean, sum) = agm(k, m.complement());
    Ok(PI / (2.0 * mean) * (1.0 - sum))
}

/// `D(k) = (K(k) - E(k)) / k²` with the removable singularity filled in: `D(0) = π/4`.
///
/// Below [`D_SERIES_THRESHOLD`] the difference `K - E` cancels badly, so the
/// power series is summed instead.
pub fn complete_d(k: f64) -> Result<f64> {
    if !(k.is_finite() && (0.0..1.0).contains(&k)) {
        return Err(Error::domain("D(k)", k, "[0, 1)"));
    }
    if k < D_SERIES_THRESHOLD {
        return Ok(SeriesTarget::D.sum_to_precision(k));
    }
    let kk = complete_k(k)?;
    let ee = complete_e(k)?;
    Ok((kk - ee) / (k * k))
}

/// A function given by an even power series `Σ cᵢ x²ⁱ` with radius 1.
///
/// Coefficients are multiples of π; [`SeriesTarget::coeff`] returns the
/// rational multiplier. `Area` is the scale-free egg area `A(k) / (abq)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesTarget {
    K,
    E,
    D,
    Area,
}

impl SeriesTarget {
    pub const ALL: [SeriesTarget; 4] = [SeriesTarget::K, SeriesTarget::E, SeriesTarget::D, SeriesTarget::Area];

    pub fn name(self) -> &'static str {
        match self {
            SeriesTarget::K => "K",
            SeriesTarget::E => "E",
            SeriesTarget::D => "D",
            SeriesTarget::Area => "A",
        }
    }

    /// Rational multiplier of π in the constant term.
    pub fn leading(self) -> BigRational {
        match self {
            SeriesTarget::K | SeriesTarget::E => ratio(1, 2),
            SeriesTarget::D => ratio(1, 4),
            SeriesTarget::Area => BigRational::one(),
        }
    }

    /// `coeff(i + 1) / coeff(i)` as an integer pair `(num, den)`.
    pub fn term_ratio(self, i: u64) -> (i128, i128) {
        let i = i as i128;
        match self {
            SeriesTarget::K => ((2 * i + 1) * (2 * i + 1), (2 * i + 2) * (2 * i + 2)),
            SeriesTarget::E => ((2 * i - 1) * (2 * i + 1), (2 * i + 2) * (2 * i + 2)),
            SeriesTarget::D => ((2 * i + 1) * (2 * i + 3), 4 * (i + 1) * (i + 2)),
            SeriesTarget::Area => ((2 * i - 1) * (2 * i + 1), 4 * (i + 1) * (i + 2)),
        }
    }

    fn term_ratio_f64(self, i: usize) -> f64 {
        let (n, d) = self.term_ratio(i as u64);
        n as f64 / d as f64
    }

    /// Exact rational multiplier of `π x²ⁱ`.
    pub fn coeff(self, i: usize) -> BigRational {
        let mut c = self.leading();
        for j in 0..i as u64 {
            let (n, d) = self.term_ratio(j);
            c *= BigRational::new(BigInt::from(n), BigInt::from(d));
        }
        c
    }

    /// Exact multipliers of π for `x⁰, x², …, x²ⁿ`.
    pub fn coeffs(self, n: usize) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(n + 1);
        let mut c = self.leading();
        for j in 0..=n {
            out.push(c.clone());
            let (num, den) = self.term_ratio(j as u64);
            c *= BigRational::new(BigInt::from(num), BigInt::from(den));
        }
        out
    }

    pub fn radius(self) -> f64 {
        1.0
    }

    /// Exact value at `x = 1` when the series converges there (no π factor).
    pub fn value_at_one(self) -> Option<BigRational> {
        match self {
            SeriesTarget::E => Some(BigRational::one()),
            SeriesTarget::Area => Some(ratio(8, 3)),
            SeriesTarget::K | SeriesTarget::D => None,
        }
    }

    /// Terms decay like `i^-p` at `x = 1`; `p` is read off the term ratio `1 - p/i + O(i⁻²)`.
    pub fn endpoint_decay(self) -> u32 {
        match self {
            SeriesTarget::K | SeriesTarget::D => 1,
            SeriesTarget::E => 2,
            SeriesTarget::Area => 3,
        }
    }

    /// `f` increases with `|x|` (K, D) or decreases (E, Area).
    pub fn is_increasing(self) -> bool {
        matches!(self, SeriesTarget::K | SeriesTarget::D)
    }

    /// Direct (non-series) value of the function at `x ∈ [0, 1]`.
    pub fn value(self, x: f64) -> Result<f64> {
        match self {
            SeriesTarget::K => complete_k(x.abs()),
            SeriesTarget::E => complete_e(x.abs()),
            SeriesTarget::D => complete_d(x.abs()),
            SeriesTarget::Area => crate::area::area_function(x.abs()),
        }
    }

    /// Sum of the first `n_terms` terms (`i = 0..n_terms`) at `x`, no domain checks.
    pub fn partial_sum(self, x: f64, n_terms: usize) -> f64 {
        let xx = x * x;
        let mut term = PI * self.leading().to_f64().unwrap_or(f64::NAN);
        let mut acc = NeumaierSum::default();
        for i in 0..n_terms {
            acc.add(term);
            term *= self.term_ratio_f64(i) * xx;
        }
        acc.value()
    }

    /// Sums until terms drop below `f64::EPSILON` relative to the running sum.
    /// Only used well inside the disc of convergence.
    fn sum_to_precision(self, x: f64) -> f64 {
        let xx = x * x;
        let mut term = PI * self.leading().to_f64().unwrap_or(f64::NAN);
        let mut acc = NeumaierSum::default();
        let mut i = 0;
        loop {
            acc.add(term);
            if term.abs() <= 0.25 * f64::EPSILON * acc.value().abs() || i >= MAX_SERIES_TERMS {
                return acc.value();
            }
            term *= self.term_ratio_f64(i) * xx;
            i += 1;
        }
    }
}

/// Outcome of [`series_eval`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Number of terms summed, constant term included.
    pub terms: usize,
    /// Magnitude of the last term added.
    pub last_term: f64,
    /// For `|x| < 1`: an upper bound on the neglected tail, `|last| x² / (1 - x²)`.
    /// At `|x| = 1`: the asymptotic tail estimate that was added into `value`.
    pub tail: f64,
    /// False when [`MAX_SERIES_TERMS`] was reached before the term fell below `tol`.
    pub converged: bool,
}

/// Sums the series of `target` at `x` until a term's magnitude drops below `tol`.
///
/// Admissible `x`: `|x| < 1`, or `|x| = 1` when the target converges there.
/// At the endpoint the terms decay only polynomially, so the partial sum is
/// completed with the Euler–Maclaurin estimate of the remaining tail,
/// `t_N (N/(p-1) - 1/2 + p/(12N))`.
pub fn series_eval(target: SeriesTarget, x: f64, tol: f64) -> Result<SeriesSum> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain("series tolerance", tol, "(0, ∞)"));
    }
    let ax = x.abs();
    let endpoint = ax == target.radius();
    let admissible = ax.is_finite() && (ax < target.radius() || (endpoint && target.value_at_one().is_some()));
    if !admissible {
        return Err(Error::domain("series argument", x, "the disc of convergence"));
    }

    let xx = x * x;
    let mut term = PI * target.leading().to_f64().unwrap_or(f64::NAN);
    let mut acc = NeumaierSum::default();
    let mut i = 0usize;
    let converged = loop {
        acc.add(term);
        if term.abs() < tol {
            break true;
        }
        if i + 1 >= MAX_SERIES_TERMS {
            break false;
        }
        term *= target.term_ratio_f64(i) * xx;
        i += 1;
    };
    let terms = i + 1;

    let tail = if endpoint {
        let p = f64::from(target.endpoint_decay());
        let n = i.max(1) as f64;
        let estimate = term * (n / (p - 1.0) - 0.5 + p / (12.0 * n));
        acc.add(estimate);
        estimate.abs()
    } else {
        term.abs() * xx / (1.0 - xx)
    };

    Ok(SeriesSum {
        value: acc.value(),
        terms,
        last_term: term.abs(),
        tail,
        converged,
    })
}

/// Exact rational coefficient of `π x²ⁱ`.
pub fn series_coeff(target: SeriesTarget, i: usize) -> BigRational {
    target.coeff(i)
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Signed zero-safe conversion of an exact rational to the nearest `f64`.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
