//! Hügelschäffer curve geometry.
//!
//! The cubic `2wxy² + b²x² + (a² + w²)y² - a²b² = 0` splits into an egg-shaped
//! oval over `[-a, a]` and a hyperbolic part left of `γ = -(a² + w²)/(2w)`.
//! Both construction regimes (`w < a` and `w > a`) are folded into one curve
//! through the parameter `q`, and the egg is traced by
//!
//! ```text
//! x(t) = -q²w sin²t + cos t √(a² - q⁴w² sin²t)
//! y(t) = q b sin t,            t ∈ [0, 2π]
//! ```

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};

/// The three positive curve parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveParams {
    a: f64,
    b: f64,
    w: f64,
}

impl CurveParams {
    /// `a`: half-width of the egg along x; `b`: half-height scale;
    /// `w`: distance between the two construction-circle centres.
    pub fn new(a: f64, b: f64, w: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("b", b), ("w", w)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(CurveParams { a, b, w })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn derive(&self) -> DerivedShape {
        derive(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    WLessA,
    WGreaterA,
    /// `w = a`: the egg degenerates into a parabolic segment, `k = 1`.
    Degenerate,
}

/// Quantities derived from [`CurveParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedShape {
    /// `1` for `w <= a`, `a/w` for `w > a`.
    pub q: f64,
    /// Elliptic modulus `q²w/a ∈ (0, 1]`.
    pub k: f64,
    /// Abscissa of the egg's highest point, `-q²w`.
    pub u: f64,
    /// Right end of the hyperbolic part's x-range.
    pub gamma: f64,
    pub regime: Regime,
}

impl DerivedShape {
    /// Area scale `abq`.
    pub fn scale(&self, params: &CurveParams) -> f64 {
        params.a * params.b * self.q
    }
}

pub fn derive(params: &CurveParams) -> DerivedShape {
    let CurveParams { a, b: _, w } = *params;
    let (q, regime) = if w < a {
        (1.0, Regime::WLessA)
    } else if w > a {
        (a / w, Regime::WGreaterA)
    } else {
        (1.0, Regime::Degenerate)
    };
    let k = match regime {
        Regime::WLessA => w / a,
        Regime::WGreaterA => a / w,
        Regime::Degenerate => 1.0,
    };
    DerivedShape {
        q,
        k,
        u: -q * q * w,
        gamma: -(a * a + w * w) / (2.0 * w),
        regime,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Self {
        PlanePoint { x, y }
    }
}

/// Left-hand side of the original cubic; zero exactly on the curve.
pub fn implicit_f(params: &CurveParams, p: PlanePoint) -> f64 {
    let CurveParams { a, b, w } = *params;
    let (x, y) = (p.x, p.y);
    let yy = y * y;
    2.0 * w * x * yy + b * b * x * x + (a * a + w * w) * yy - a * a * b * b
}

/// Left-hand side of the q-unified cubic `2q²wxy² + q²b²x² + (a² + q⁴w²)y² - a²b²q²`.
pub fn implicit_fq(params: &CurveParams, p: PlanePoint) -> f64 {
    let CurveParams { a, b, w } = *params;
    let q = derive(params).q;
    let qq = q * q;
    let (x, y) = (p.x, p.y);
    let yy = y * y;
    2.0 * qq * w * x * yy + qq * b * b * x * x + (a * a + qq * qq * w * w) * yy - a * a * b * b * qq
}

/// Point `P_t` of the egg. `t = 0` gives `(a, 0)`, `t = π/2` the top `(-q²w, qb)`,
/// `t = π` gives `(-a, 0)`.
pub fn point_at(params: &CurveParams, t: f64) -> PlanePoint {
    let d = derive(params);
    let (s, c) = t.sin_cos();
    let qqw = d.q * d.q * params.w;
    PlanePoint {
        x: -qqw * s * s + c * radical(params.a, qqw, s),
        y: d.q * params.b * s,
    }
}

/// `√(a² - q⁴w² sin²t)`, clamped at zero against rounding when `k = 1`.
pub(crate) fn radical(a: f64, qqw: f64, s: f64) -> f64 {
    ((a - qqw * s) * (a + qqw * s)).max(0.0).sqrt()
}

/// Uniform t-grid of `n >= 2` points over `[0, 2π]`.
pub fn egg_parameters(n: usize) -> Vec<f64> {
    assert!(n >= 2, "need at least two samples");
    let last = (n - 1) as f64;
    (0..n)
        .map(|j| if j + 1 == n { TAU } else { TAU * j as f64 / last })
        .collect()
}

/// `n >= 2` egg points on the uniform t-grid; the first and last are both `(a, 0)`.
pub fn sample_egg(params: &CurveParams, n: usize) -> Vec<PlanePoint> {
    let ts = egg_parameters(n);
    let mut pts: Vec<PlanePoint> = ts.iter().map(|&t| point_at(params, t)).collect();
    pts[n - 1] = pts[0];
    pts
}

/// The two construction circles on the uniform t-grid: `K₁` centred at the
/// origin with radius `a`, `K₂` centred at `(-q²w, 0)` with radius `qb`.
pub fn construction_circles(params: &CurveParams, n: usize) -> (Vec<PlanePoint>, Vec<PlanePoint>) {
    let d = derive(params);
    let ts = egg_parameters(n);
    let k1 = ts
        .iter()
        .map(|&t| PlanePoint::new(params.a * t.cos(), params.a * t.sin()))
        .collect();
    let k2 = ts
        .iter()
        .map(|&t| {
            PlanePoint::new(
                -d.q * d.q * params.w + d.q * params.b * t.cos(),
                d.q * params.b * t.sin(),
            )
        })
        .collect();
    (k1, k2)
}

/// The two arcs of the upper half of the egg, split at its top point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EggPortion {
    /// `t ∈ [π/2, π]`, from the top to `(-a, 0)`.
    Left,
    /// `t ∈ [0, π/2)`, from `(a, 0)` to the top.
    Right,
}

impl EggPortion {
    pub fn contains(self, t: f64) -> bool {
        match self {
            EggPortion::Left => (FRAC_PI_2..=PI).contains(&t),
            EggPortion::Right => (0.0..FRAC_PI_2).contains(&t),
        }
    }
}

/// Exact-arithmetic view of the q-unification, for rational parameters.
pub mod exact {
    use super::*;

    pub fn q(a: &BigRational, w: &BigRational) -> BigRational {
        if w < a {
            BigRational::one()
        } else {
            a / w
        }
    }

    /// Coefficient ratios between the unified and the original cubic, term by
    /// term: `2q²w / 2w`, `q²b² / b²`, `(a² + q⁴w²) / (a² + w²)`, `a²b²q² / a²b²`.
    /// The curves coincide iff all four agree.
    pub fn coefficient_ratios(a: &BigRational, b: &BigRational, w: &BigRational) -> [BigRational; 4] {
        let q = q(a, w);
        let qq = &q * &q;
        let two = BigRational::from_integer(2.into());
        let aa = a * a;
        let bb = b * b;
        let ww = w * w;
        [
            (&two * &qq * w) / (&two * w),
            (&qq * &bb) / &bb,
            (&aa + &qq * &qq * &ww) / (&aa + &ww),
            (&aa * &bb * &qq) / (&aa * &bb),
        ]
    }

    /// `(q² - 1)(q²w² - a²)`, which vanishes exactly for admissible `q`.
    pub fn unification_residual(q: &BigRational, a: &BigRational, w: &BigRational) -> BigRational {
        let qq = q * q;
        (&qq - BigRational::one()) * (&qq * w * w - a * a)
    }

    pub fn is_unified(a: &BigRational, b: &BigRational, w: &BigRational) -> bool {
        let r = coefficient_ratios(a, b, w);
        r.iter().all(|x| x == &r[0]) && !r[0].is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(CurveParams::new(0.0, 1.0, 1.0).is_err());
        assert!(CurveParams::new(1.0, -1.0, 1.0).is_err());
        assert!(CurveParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(CurveParams::new(1.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn derive_w_less_a() {
        let d = derive(&CurveParams::new(3.0, 2.0, 2.0).unwrap());
        assert_eq!(d.q, 1.0);
        assert!(close(d.k, 2.0 / 3.0, 1e-15));
        assert_eq!(d.u, -2.0);
        assert_eq!(d.gamma, -13.0 / 4.0);
        assert_eq!(d.regime, Regime::WLessA);
    }

    #[test]
    fn derive_w_greater_a() {
        let d = derive(&CurveParams::new(2.0, 2.0, 4.0).unwrap());
        assert_eq!(d.q, 0.5);
        assert_eq!(d.k, 0.5);
        assert_eq!(d.u, -1.0);
        assert_eq!(d.gamma, -2.5);
        assert_eq!(d.regime, Regime::WGreaterA);
        // u also equals -a²/w in this regime
        assert_eq!(d.u, -4.0 / 4.0);
    }

    #[test]
    fn derive_degenerate() {
        let d = derive(&CurveParams::new(2.0, 1.0, 2.0).unwrap());
        assert_eq!((d.q, d.k, d.regime), (1.0, 1.0, Regime::Degenerate));
        assert_eq!(d.gamma, -2.0);
    }

    #[test]
    fn implicit_f_values() {
        let p = CurveParams::new(3.0, 2.0, 2.0).unwrap();
        assert_eq!(implicit_f(&p, PlanePoint::new(3.0, 0.0)), 0.0);
        assert_eq!(implicit_f(&p, PlanePoint::new(-3.0, 0.0)), 0.0);
        assert_eq!(implicit_f(&p, PlanePoint::new(0.0, 0.0)), -36.0);
        assert_eq!(implicit_fq(&p, PlanePoint::new(3.0, 0.0)), 0.0);
    }

    #[test]
    fn unified_cubic_vanishes_on_original_roots() {
        // For fixed x solve the original cubic for y² and substitute into the unified one.
        let p = CurveParams::new(2.0, 2.0, 4.0).unwrap();
        let (a, b, w) = (2.0, 2.0, 4.0);
        for j in 1..40 {
            let x = -a + 2.0 * a * j as f64 / 40.0;
            let yy = (a * a * b * b - b * b * x * x) / (2.0 * w * x + a * a + w * w);
            if yy <= 0.0 {
                continue;
            }
            let pt = PlanePoint::new(x, yy.sqrt());
            assert!(implicit_f(&p, pt).abs() < 1e-10);
            assert!(implicit_fq(&p, pt).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn landmark_points() {
        for (a, b, w) in [(3.0, 2.0, 2.0), (2.0, 2.0, 4.0), (2.0, 1.0, 2.0)] {
            let p = CurveParams::new(a, b, w).unwrap();
            let d = derive(&p);
            let p0 = point_at(&p, 0.0);
            assert_eq!((p0.x, p0.y), (a, 0.0));
            let top = point_at(&p, FRAC_PI_2);
            assert!(close(top.x, -d.q * d.q * w, 1e-14));
            assert_eq!(top.y, d.q * b);
            let left = point_at(&p, PI);
            assert!(close(left.x, -a, 1e-14) && close(left.y, 0.0, 1e-14));
        }
    }

    #[test]
    fn sampling_endpoints() {
        let p = CurveParams::new(3.0, 2.0, 2.0).unwrap();
        let two = sample_egg(&p, 2);
        assert_eq!(two, vec![PlanePoint::new(3.0, 0.0); 2]);
        let five = sample_egg(&p, 5);
        assert!(close(five[1].x, -2.0, 1e-14) && five[1].y == 2.0);
        assert!(close(five[3].x, -2.0, 1e-14) && five[3].y == -2.0);
        assert_eq!(five[0], five[4]);
    }

    #[test]
    fn circles() {
        let p = CurveParams::new(3.0, 2.0, 2.0).unwrap();
        let (k1, k2) = construction_circles(&p, 5);
        assert_eq!(k1[0], PlanePoint::new(3.0, 0.0));
        assert_eq!(k2[0], PlanePoint::new(0.0, 0.0));
        assert!(close(k2[1].x, -2.0, 1e-15) && k2[1].y == 2.0);
    }

    #[test]
    fn portions_split_upper_half() {
        assert!(EggPortion::Right.contains(0.0));
        assert!(!EggPortion::Right.contains(FRAC_PI_2));
        assert!(EggPortion::Left.contains(FRAC_PI_2));
        assert!(EggPortion::Left.contains(PI));
    }

    #[test]
    fn exact_unification_both_regimes() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        for (a, b, w) in [
            (r(4, 1), r(3, 1), r(2, 1)),
            (r(2, 1), r(3, 1), r(7, 2)),
            (r(5, 3), r(1, 7), r(5, 3)),
        ] {
            assert!(exact::is_unified(&a, &b, &w));
            let q = exact::q(&a, &w);
            assert_eq!(exact::unification_residual(&q, &a, &w), r(0, 1));
        }
        // q = 1/2 with a = 2, w = 4
        let q = r(1, 2);
        assert_eq!(exact::unification_residual(&q, &r(2, 1), &r(4, 1)), r(0, 1));
        // a wrong q breaks proportionality
        assert_ne!(exact::unification_residual(&r(1, 3), &r(2, 1), &r(4, 1)), r(0, 1));
    }

    proptest! {
        #[test]
        fn on_curve_and_in_range(a in 0.1f64..10.0, b in 0.1f64..10.0, w in 0.1f64..10.0, t in 0.0f64..TAU) {
            let p = CurveParams::new(a, b, w).unwrap();
            let d = derive(&p);
            let pt = point_at(&p, t);
            let scale = a * a * b * b * d.q * d.q;
            prop_assert!(implicit_fq(&p, pt).abs() <= 1e-9 * scale);
            prop_assert!(pt.x.abs() <= a * (1.0 + 1e-12));
            prop_assert!(pt.y.abs() <= d.q * b);
        }

        #[test]
        fn reflection_symmetry(a in 0.1f64..10.0, b in 0.1f64..10.0, w in 0.1f64..10.0, t in 0.0f64..TAU) {
            let p = CurveParams::new(a, b, w).unwrap();
            let p1 = point_at(&p, t);
            let p2 = point_at(&p, TAU - t);
            prop_assert!((p1.x - p2.x).abs() <= 1e-12 * a.max(w));
            prop_assert!((p1.y + p2.y).abs() <= 1e-12 * b);
        }
    }
}
