//! Area of the egg part of a Hügelschäffer curve.
//!
//! With `k = q²w/a` and scale `abq` the area is
//!
//! ```text
//! A = (4/3) abq ((1 - 1/k²) K(k) + (1 + 1/k²) E(k)) = (4/3) abq (K + E - D)
//!   = abq π (1 - Σ_{i≥1} ((2i-1)!!/(2i)!!)² k²ⁱ / ((2i-1)(i+1)))
//! ```
//!
//! running from `abqπ` (ellipse, `k → 0`) down to `8abq/3` (parabolic
//! segment, `k = 1`). The part of the area under the arc left of the egg's
//! top exceeds the right part by exactly `(8/3) abq k`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::curve::{CurveParams, DerivedShape};
use crate::elliptic::{self, complete_d, complete_e, complete_k, series_eval, SeriesTarget, D_SERIES_THRESHOLD};
use crate::error::{Error, Result};
use crate::oracle::{self, QuadratureSpec};
use crate::taylor::{first_taylor, second_taylor, ApproxKind, CHAIN_SLACK};

/// Above this modulus the closed form is replaced by the power series.
pub const NEAR_DEGENERATE_K: f64 = 0.99;

const SERIES_TOL: f64 = 1e-17;

/// Scale-free area `A(k) / (abq)` for `k ∈ [0, 1]`.
pub fn area_function(k: f64) -> Result<f64> {
    if !(k.is_finite() && (0.0..=1.0).contains(&k)) {
        return Err(Error::domain("A(k)", k, "[0, 1]"));
    }
    if k == 0.0 {
        return Ok(PI);
    }
    if k == 1.0 {
        return Ok(8.0 / 3.0);
    }
    if k > NEAR_DEGENERATE_K {
        return Ok(series_eval(SeriesTarget::Area, k, SERIES_TOL)?.value);
    }
    Ok(4.0 / 3.0 * (complete_k(k)? + complete_e(k)? - complete_d(k)?))
}

/// `I₁ = ∫₀^{π/2} sin²t cos t dt`, `I₂ = ∫ sin²t √(1 - k²sin²t) dt`,
/// `I₃ = ∫ sin²t cos²t / √(1 - k²sin²t) dt`, in closed form.
///
/// `I₂` is evaluated as `(D - K + 2E)/3` and `I₃` as `(2K - E - 2D)/(3k²)`,
/// the same expressions regrouped so that nothing cancels as `k → 0`; below
/// the D-series threshold `I₃` is summed from the combined series.
pub fn integral_i(index: u8, k: f64) -> Result<f64> {
    match index {
        1 => Ok(1.0 / 3.0),
        2 | 3 => {
            if !(k > 0.0 && k < 1.0) {
                return Err(Error::domain("I₂/I₃", k, "(0, 1)"));
            }
            let (kk, ee, dd) = (complete_k(k)?, complete_e(k)?, complete_d(k)?);
            if index == 2 {
                Ok((dd - kk + 2.0 * ee) / 3.0)
            } else if k < D_SERIES_THRESHOLD {
                Ok(i3_series(k))
            } else {
                Ok((2.0 * kk - ee - 2.0 * dd) / (3.0 * k * k))
            }
        }
        _ => Err(Error::domain("integral index", f64::from(index), "{1, 2, 3}")),
    }
}

/// `(π/3) Σ_{i≥1} (2κᵢ - εᵢ - 2dᵢ) k^{2i-2}` from the K, E, D coefficient recurrences.
fn i3_series(k: f64) -> f64 {
    let xx = k * k;
    let ratio = |t: SeriesTarget, i: usize| {
        let (n, d) = t.term_ratio(i as u64);
        n as f64 / d as f64
    };
    let (mut kap, mut eps, mut d) = (0.5, 0.5, 0.25);
    let mut pow = 1.0;
    let mut sum = 0.0;
    for i in 0..200 {
        kap *= ratio(SeriesTarget::K, i);
        eps *= ratio(SeriesTarget::E, i);
        d *= ratio(SeriesTarget::D, i);
        let term = (2.0 * kap - eps - 2.0 * d) * pow;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        pow *= xx;
    }
    PI / 3.0 * sum
}

/// Quadrature-vs-closed-form gaps for the `I` and `J` integrals at one `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralMargins {
    pub k: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
}

impl IntegralMargins {
    pub fn max_i(&self) -> f64 {
        self.i1.max(self.i2).max(self.i3)
    }

    pub fn max_j(&self) -> f64 {
        self.j1.max(self.j2).max(self.j3)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max_i() <= tol && self.max_j() <= tol
    }
}

/// Integrates `I₁..I₃` over `[0, π/2]` and `J₁..J₃` over `[π/2, π]` and
/// compares them with `I₁ = 1/3`, `J₁ = -1/3`, `J₂ = I₂`, `J₃ = I₃`.
pub fn check_integrals(k: f64, spec: &QuadratureSpec) -> Result<IntegralMargins> {
    let i2 = integral_i(2, k)?;
    let i3 = integral_i(3, k)?;
    let radicand = |t: f64| {
        let ks = k * t.sin();
        (1.0 - ks) * (1.0 + ks)
    };
    let f1 = |t: f64| t.sin().powi(2) * t.cos();
    let f2 = |t: f64| t.sin().powi(2) * radicand(t).sqrt();
    let f3 = |t: f64| t.sin().powi(2) * t.cos().powi(2) / radicand(t).sqrt();
    let gap = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, expected: f64| -> Result<f64> {
        Ok((oracle::quad(f, lo, hi, spec)? - expected).abs())
    };
    Ok(IntegralMargins {
        k,
        i1: gap(&f1, 0.0, FRAC_PI_2, 1.0 / 3.0)?,
        i2: gap(&f2, 0.0, FRAC_PI_2, i2)?,
        i3: gap(&f3, 0.0, FRAC_PI_2, i3)?,
        j1: gap(&f1, FRAC_PI_2, PI, -1.0 / 3.0)?,
        j2: gap(&f2, FRAC_PI_2, PI, i2)?,
        j3: gap(&f3, FRAC_PI_2, PI, i3)?,
    })
}

/// [`check_integrals`] with the default oracle spec.
pub fn check_j_relations(k: f64) -> Result<IntegralMargins> {
    check_integrals(k, &QuadratureSpec::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaBreakdown {
    pub total: f64,
    /// Area under the arc from the top to `(-a, 0)`.
    pub part1: f64,
    /// Area under the arc from `(a, 0)` to the top.
    pub part2: f64,
    /// `abq`
    pub scale: f64,
    pub k: f64,
}

impl AreaBreakdown {
    /// Splits `total` using `part2 - part1 = (8/3) abq k`.
    pub fn from_total(total: f64, scale: f64, k: f64) -> Self {
        let half_gap = 4.0 / 3.0 * scale * k;
        AreaBreakdown {
            total,
            part1: 0.5 * total - half_gap,
            part2: 0.5 * total + half_gap,
            scale,
            k,
        }
    }
}

fn shape(params: &CurveParams) -> (DerivedShape, f64) {
    let d = params.derive();
    (d, d.scale(params))
}

/// Closed-form area and subareas.
///
/// `part2 = (2/3) abq (G + 2k)`, `part1 = (2/3) abq (G - 2k)` with
/// `G = (1 - 1/k²)K + (1 + 1/k²)E`; at `k = 1` this gives `8abq/3` and `0`.
pub fn area_exact(params: &CurveParams) -> Result<AreaBreakdown> {
    let (d, scale) = shape(params);
    let g = 0.75 * area_function(d.k)?;
    Ok(AreaBreakdown {
        total: 4.0 / 3.0 * scale * g,
        part1: 2.0 / 3.0 * scale * (g - 2.0 * d.k),
        part2: 2.0 / 3.0 * scale * (g + 2.0 * d.k),
        scale,
        k: d.k,
    })
}

/// Area from the modulus series, summed until terms fall below `tol` (relative to `abq`).
pub fn area_series(params: &CurveParams, tol: f64) -> Result<f64> {
    let (d, scale) = shape(params);
    Ok(scale * area_series_at(d.k, tol)?)
}

/// Scale-free series value on `[0, 1]`; `k = 0` gives `π`.
pub fn area_series_at(k: f64, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain("area series", k, "[0, 1]"));
    }
    Ok(series_eval(SeriesTarget::Area, k, tol)?.value)
}

/// Sum of the first `terms` terms of the scale-free series at `k`.
pub fn area_series_terms(k: f64, terms: usize) -> f64 {
    SeriesTarget::Area.partial_sum(k, terms)
}

/// Degree-`n` Taylor approximation of the area. First kind bounds it from
/// above, second kind (on `(0, β]`, `β ≤ 1`) from below.
pub fn area_taylor(params: &CurveParams, n: usize, kind: ApproxKind) -> Result<f64> {
    let (d, scale) = shape(params);
    area_taylor_at(scale, d.k, n, kind)
}

/// [`area_taylor`] for an explicit scale `abq` and modulus, `k ∈ [0, 1]`.
pub fn area_taylor_at(scale: f64, k: f64, n: usize, kind: ApproxKind) -> Result<f64> {
    let approx = match kind {
        ApproxKind::First => first_taylor(SeriesTarget::Area, n),
        ApproxKind::Second { beta } => second_taylor(SeriesTarget::Area, n, beta)?,
    };
    Ok(scale * approx.eval(k)?)
}

/// Two-sided area bounds for one curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsCertificate {
    /// `8abq/3`
    pub lower_coarse: f64,
    /// `πabq`
    pub upper_coarse: f64,
    /// `8abq/3 + Δ_q = abqπ + abq(8/3 - π)k`, the degree-1 second approximation.
    pub lower_refined: f64,
    /// `πabq - ∇_q = πabq(1 - k²/8)`, the degree-2 first approximation.
    pub upper_refined: f64,
    /// `abq(π - 8/3)(1 - k)`
    pub delta_q: f64,
    /// `(π/8) abq k²`
    pub nabla_q: f64,
    /// `πbw²/(8a)` for `w <= a`, `πa⁴b/(8w³)` for `w > a`.
    pub nabla_q_piecewise: f64,
    /// The alternative margin `abqπ(1 - k)`.
    pub delta_q_alt: f64,
    /// `8abq/3 + abqπ(1 - k)`
    pub lower_alt: f64,
}

impl BoundsCertificate {
    /// `lower_coarse ≤ lower_refined ≤ area ≤ upper_refined ≤ upper_coarse`,
    /// up to [`CHAIN_SLACK`] relative to `upper_coarse`.
    pub fn orders(&self, area: f64) -> bool {
        let slack = CHAIN_SLACK * self.upper_coarse;
        [
            self.lower_coarse,
            self.lower_refined,
            area,
            self.upper_refined,
            self.upper_coarse,
        ]
        .windows(2)
        .all(|w| w[0] <= w[1] + slack)
    }

    /// Same chain with every inequality strict.
    pub fn orders_strictly(&self, area: f64) -> bool {
        self.lower_coarse < self.lower_refined
            && self.lower_refined < area
            && area < self.upper_refined
            && self.upper_refined < self.upper_coarse
    }

    /// Whether the alternative margin `abqπ(1 - k)` still yields a lower bound.
    pub fn alt_consistent(&self, area: f64) -> bool {
        self.lower_alt <= area
    }
}

pub fn bounds(params: &CurveParams) -> Result<BoundsCertificate> {
    let (d, scale) = shape(params);
    let k = d.k;
    let (a, b, w) = (params.a(), params.b(), params.w());
    let delta_q = scale * (PI - 8.0 / 3.0) * (1.0 - k);
    let nabla_q = PI / 8.0 * scale * k * k;
    let nabla_q_piecewise = if w <= a {
        PI * b * w * w / (8.0 * a)
    } else {
        PI * a.powi(4) * b / (8.0 * w.powi(3))
    };
    let delta_q_alt = scale * PI * (1.0 - k);
    Ok(BoundsCertificate {
        lower_coarse: 8.0 / 3.0 * scale,
        upper_coarse: PI * scale,
        lower_refined: area_taylor_at(scale, k, 1, ApproxKind::Second { beta: 1.0 })?,
        upper_refined: area_taylor_at(scale, k, 2, ApproxKind::First)?,
        delta_q,
        nabla_q,
        nabla_q_piecewise,
        delta_q_alt,
        lower_alt: 8.0 / 3.0 * scale + delta_q_alt,
    })
}

/// `i`-th term `((2i-1)!!/(2i)!!)² / ((2i-1)(i+1))` of the 1/π series, `i ≥ 1`.
pub fn inv_pi_term(i: usize) -> f64 {
    let mut t = 1.0;
    for j in 0..i {
        let (n, d) = SeriesTarget::Area.term_ratio(j as u64);
        t *= n as f64 / d as f64;
    }
    t.abs()
}

/// `(3/8)(1 - Σ_{i=1}^{N} ((2i-1)!!/(2i)!!)² / ((2i-1)(i+1)))`, decreasing to `1/π`.
pub fn inv_pi_partial(n: usize) -> Result<f64> {
    Ok(inv_pi_partial_with_last(n)?.0)
}

/// Partial sum together with the magnitude of its last term.
pub fn inv_pi_partial_with_last(n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::domain("1/π series terms", 0.0, "N >= 1"));
    }
    let mut term = 1.0;
    let mut tail = elliptic::NeumaierSum::default();
    for j in 0..n {
        let (num, den) = SeriesTarget::Area.term_ratio(j as u64);
        term *= num as f64 / den as f64;
        tail.add(term);
    }
    Ok((0.375 * (1.0 + tail.value()), term.abs()))
}

/// Exact rational partial sum.
pub fn inv_pi_partial_exact(n: usize) -> BigRational {
    let sum = SeriesTarget::Area
        .coeffs(n)
        .into_iter()
        .fold(BigRational::zero(), |acc, c| acc + c);
    sum * elliptic::ratio(3, 8)
}
