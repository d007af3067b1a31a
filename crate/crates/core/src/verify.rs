//! Cross-check battery: every closed form against the quadrature oracle,
//! series against direct evaluation, exact table fixtures, inequality chains
//! and geometric identities, on fixed seeds and grids.

use std::f64::consts::{PI, TAU};

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::area::{self, check_integrals};
use crate::curve::{self, exact, CurveParams, PlanePoint};
use crate::elliptic::{complete_d, complete_e, complete_k, ratio, series_eval, SeriesTarget};
use crate::error::Result;
use crate::oracle::{quad_area, quad_elliptic, EllipticKind, QuadratureSpec};
use crate::taylor::{first_taylor, second_taylor, verify_chain, ApproxKind, CHAIN_SLACK};

/// Seed of the random parameter triples.
pub const TRIPLE_SEED: u64 = 0x0045_6767_6172_6561;
/// Seed of the random `(params, t)` pairs of the geometry check.
pub const GEOMETRY_SEED: u64 = 0x0063_7572_7665;

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation.
    pub margin: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn within(name: &'static str, margin: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed: margin <= tolerance,
            margin,
            tolerance,
            detail: detail.into(),
        }
    }

    fn failed(name: &'static str, tolerance: f64, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed: false,
            margin: f64::INFINITY,
            tolerance,
            detail: detail.into(),
        }
    }
}

/// `n_each` triples with `w < a` followed by `n_each` with `w > a`.
pub fn random_triples(seed: u64, n_each: usize) -> Vec<CurveParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * n_each);
    for wide in [false, true] {
        for _ in 0..n_each {
            let a = rng.gen_range(0.5..5.0);
            let b = rng.gen_range(0.5..5.0);
            let w = if wide {
                a * rng.gen_range(1.05..4.0)
            } else {
                a * rng.gen_range(0.05..0.95)
            };
            out.push(CurveParams::new(a, b, w).expect("positive parameters"));
        }
    }
    out
}

/// The grid `{0.1, 0.2, …, 0.9}`.
pub fn decile_grid() -> Vec<f64> {
    (1..=9).map(|j| j as f64 / 10.0).collect()
}

/// Expected coefficient of `x^{2i}`, as a multiple of π, for `i = 0..=5`.
pub fn table_first_kind(target: SeriesTarget) -> [BigRational; 6] {
    let r = ratio;
    match target {
        SeriesTarget::K => [r(1, 2), r(1, 8), r(9, 128), r(25, 512), r(1225, 32768), r(3969, 131072)],
        SeriesTarget::E => [
            r(1, 2),
            r(-1, 8),
            r(-3, 128),
            r(-5, 512),
            r(-175, 32768),
            r(-441, 131072),
        ],
        SeriesTarget::D => [
            r(1, 4),
            r(3, 32),
            r(15, 256),
            r(175, 4096),
            r(2205, 65536),
            r(14553, 524288),
        ],
        SeriesTarget::Area => [
            r(1, 1),
            r(-1, 8),
            r(-1, 64),
            r(-5, 1024),
            r(-35, 16384),
            r(-147, 131072),
        ],
    }
}

/// Expected π-part of the leading coefficient of the scale-free area's `𝕋_n`
/// at `β = 1` for `n = 1, 3, 5, 7, 9`; the rational part is `8/3` throughout.
pub fn table_area_corrections() -> [(usize, BigRational); 5] {
    [
        (1, ratio(-1, 1)),
        (3, ratio(-7, 8)),
        (5, ratio(-55, 64)),
        (7, ratio(-875, 1024)),
        (9, ratio(-13965, 16384)),
    ]
}

/// Number of generated coefficients (first kind to degree 10 for all targets,
/// area corrections to degree 9) that differ from the fixtures.
pub fn table_mismatches() -> Result<(usize, usize)> {
    let mut checked = 0;
    let mut bad = 0;
    for target in SeriesTarget::ALL {
        let t = first_taylor(target, 10);
        for (i, expected) in table_first_kind(target).iter().enumerate() {
            let c = &t.coefficients()[2 * i];
            checked += 1;
            if &c.pi != expected || !c.rational.is_zero() || c.inexact != 0.0 {
                bad += 1;
            }
        }
        for odd in (1..=9).step_by(2) {
            checked += 1;
            if !t.coefficients()[odd].is_zero() {
                bad += 1;
            }
        }
    }
    for (n, pi) in table_area_corrections() {
        let t = second_taylor(SeriesTarget::Area, n, 1.0)?;
        let c = &t.coefficients()[n];
        checked += 1;
        if c.rational != ratio(8, 3) || c.pi != pi || c.inexact != 0.0 {
            bad += 1;
        }
    }
    Ok((checked, bad))
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

/// `|K - E - k²D|` on `{0.05, 0.10, …, 0.95}`.
pub fn identity_margin() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 1..=19 {
        let k = j as f64 * 0.05;
        worst = worst.max((complete_k(k)? - complete_e(k)? - k * k * complete_d(k)?).abs());
    }
    Ok(worst)
}

/// Worst relative gap between the closed-form area and the oracle.
pub fn oracle_area_margin(triples: &[CurveParams], spec: &QuadratureSpec) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in triples {
        let exact = area::area_exact(p)?.total;
        worst = worst.max(rel(quad_area(p, spec)?.total, exact));
    }
    Ok(worst)
}

/// Worst relative error of `part1 + part2 = total` and of
/// `part2 - part1 = 8wb/3` (w < a), `8a³b/(3w²)` (w > a).
pub fn decomposition_margins(triples: &[CurveParams]) -> Result<(f64, f64)> {
    let (mut sum, mut gap): (f64, f64) = (0.0, 0.0);
    for p in triples {
        let r = area::area_exact(p)?;
        let (a, b, w) = (p.a(), p.b(), p.w());
        let expected = if w <= a {
            8.0 * w * b / 3.0
        } else {
            8.0 * a.powi(3) * b / (3.0 * w * w)
        };
        sum = sum.max(rel(r.part1 + r.part2, r.total));
        gap = gap.max(rel(r.part2 - r.part1, expected));
    }
    Ok((sum, gap))
}

/// Worst excess over the chain slack for all four targets on the decile grid,
/// with `β = 0.95` for K and D and `β = 1` for E and the area.
pub fn chain_margin(max_degree: usize) -> std::result::Result<f64, String> {
    let grid = decile_grid();
    let mut worst: f64 = 0.0;
    for (target, beta) in [
        (SeriesTarget::K, 0.95),
        (SeriesTarget::E, 1.0),
        (SeriesTarget::D, 0.95),
        (SeriesTarget::Area, 1.0),
    ] {
        let report = verify_chain(target, max_degree, beta, &grid).map_err(|e| format!("{}: {e}", target.name()))?;
        for p in &report.points {
            for errs in [p.first_errors(), p.second_errors()] {
                for w in errs.windows(2) {
                    if w[1] > w[0] + CHAIN_SLACK {
                        return Err(format!("{}: error grows at x = {}", target.name(), p.x));
                    }
                }
            }
        }
        worst = worst.max(-report.min_margin());
    }
    Ok(worst.max(0.0))
}

/// Worst `|F_q(P_t)| / (a²b²q²)` over `count` random `(params, t)` pairs.
pub fn geometry_margin(seed: u64, count: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let a = rng.gen_range(0.1..10.0);
        let b = rng.gen_range(0.1..10.0);
        let w = a * rng.gen_range(0.01..5.0);
        let t = rng.gen_range(0.0..TAU);
        let p = CurveParams::new(a, b, w).expect("positive parameters");
        let q = p.derive().q;
        let pt: PlanePoint = curve::point_at(&p, t);
        let norm = a * a * b * b * q * q;
        worst = worst.max(curve::implicit_fq(&p, pt).abs() / norm);
    }
    worst
}

/// Number of rational triples for which the unified cubic is not an exact
/// multiple of the original one.
pub fn unification_failures() -> usize {
    let mut bad = 0;
    for a in 1..=6i64 {
        for w in 1..=9i64 {
            for b in [1i64, 3, 7] {
                let (a, b, w) = (ratio(a, 2), ratio(b, 3), ratio(w, 3));
                let q = exact::q(&a, &w);
                if !exact::is_unified(&a, &b, &w) || !exact::unification_residual(&q, &a, &w).is_zero() {
                    bad += 1;
                }
            }
        }
    }
    bad
}

/// Runs the battery. Each check's tolerance is `max(pinned, tol)`.
pub fn run(tol: Option<f64>) -> Vec<Check> {
    let loosen = |pinned: f64| tol.map_or(pinned, |t| pinned.max(t));
    let spec = QuadratureSpec::default();
    let triples = random_triples(TRIPLE_SEED, 10);
    let mut out = Vec::new();

    out.push(match table_mismatches() {
        Ok((n, bad)) => Check::within(
            "table_fixtures",
            bad as f64,
            0.0,
            format!("{bad} of {n} coefficients differ"),
        ),
        Err(e) => Check::failed("table_fixtures", 0.0, e.to_string()),
    });

    out.push(match identity_margin() {
        Ok(m) => Check::within("identity_k_e_d", m, loosen(1e-12), "|K - E - k²D| on 0.05..0.95"),
        Err(e) => Check::failed("identity_k_e_d", loosen(1e-12), e.to_string()),
    });

    out.push(match dual_method_margin(&spec) {
        Ok(m) => Check::within(
            "elliptic_vs_quadrature",
            m,
            loosen(1e-11),
            "AGM K, E vs direct quadrature",
        ),
        Err(e) => Check::failed("elliptic_vs_quadrature", loosen(1e-11), e.to_string()),
    });

    out.push(match series_direct_margin() {
        Ok(m) => Check::within(
            "series_vs_direct",
            m,
            loosen(1e-11),
            "K, E, D series vs direct, k <= 0.9",
        ),
        Err(e) => Check::failed("series_vs_direct", loosen(1e-11), e.to_string()),
    });

    out.push(match oracle_area_margin(&triples, &spec) {
        Ok(m) => Check::within("area_vs_oracle", m, loosen(1e-8), "20 random triples, relative"),
        Err(e) => Check::failed("area_vs_oracle", loosen(1e-8), e.to_string()),
    });

    for (name, k, pinned) in [
        ("integrals_k0.1", 0.1, 1e-9),
        ("integrals_k0.5", 0.5, 1e-9),
        ("integrals_k0.9", 0.9, 1e-8),
    ] {
        out.push(match check_integrals(k, &spec) {
            Ok(m) => Check::within(
                name,
                m.max_i().max(m.max_j()),
                loosen(pinned),
                "I₁..I₃, J₁..J₃ vs quadrature",
            ),
            Err(e) => Check::failed(name, loosen(pinned), e.to_string()),
        });
    }

    out.push(match decomposition_margins(&triples) {
        Ok((s, g)) => Check::within(
            "subarea_decomposition",
            s.max(g),
            loosen(1e-11),
            "sum and gap of the subareas",
        ),
        Err(e) => Check::failed("subarea_decomposition", loosen(1e-11), e.to_string()),
    });

    out.push(match series_exact_margin() {
        Ok(m) => Check::within("area_series_vs_exact", m, loosen(1e-11), "k <= 0.95, relative"),
        Err(e) => Check::failed("area_series_vs_exact", loosen(1e-11), e.to_string()),
    });

    out.push(match chain_margin(10) {
        Ok(m) => Check::within("sandwich_chains", m, CHAIN_SLACK, "K, E, D, A to degree 10"),
        Err(e) => Check::failed("sandwich_chains", CHAIN_SLACK, e),
    });

    out.push(match monotone_violations() {
        Ok(v) => Check::within("area_decreasing_in_k", v as f64, 0.0, "violations on a 0.01 grid"),
        Err(e) => Check::failed("area_decreasing_in_k", 0.0, e.to_string()),
    });

    out.push(match degenerate_margin() {
        Ok(m) => Check::within("degenerate_limits", m, loosen(1e-8), "k = 1 branch, series at 1, k = 0"),
        Err(e) => Check::failed("degenerate_limits", loosen(1e-8), e.to_string()),
    });

    out.push(match area::inv_pi_partial(1) {
        Ok(v) => Check::within("inv_pi_n1", (v - 21.0 / 64.0).abs(), 0.0, "N = 1 equals 21/64"),
        Err(e) => Check::failed("inv_pi_n1", 0.0, e.to_string()),
    });
    out.push(match area::inv_pi_partial(10_000) {
        Ok(v) => Check::within("inv_pi_n1e4", (v - 1.0 / PI).abs(), loosen(1e-8), "N = 10⁴"),
        Err(e) => Check::failed("inv_pi_n1e4", loosen(1e-8), e.to_string()),
    });

    out.push(match bounds_violations(&triples) {
        Ok(v) => Check::within("bounds_ordering", v as f64, 0.0, "strict ordering on 20 triples"),
        Err(e) => Check::failed("bounds_ordering", 0.0, e.to_string()),
    });

    out.push(Check::within(
        "geometry_residual",
        geometry_margin(GEOMETRY_SEED, 10_000),
        loosen(1e-9),
        "|F_q(P_t)| / (a²b²q²), 10⁴ random pairs",
    ));
    out.push(Check::within(
        "q_unification_exact",
        unification_failures() as f64,
        0.0,
        "rational triples",
    ));
    out
}

fn dual_method_margin(spec: &QuadratureSpec) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in [0.1, 0.3, 0.5, 0.7, 0.9] {
        worst = worst.max((quad_elliptic(EllipticKind::K, k, spec)? - complete_k(k)?).abs());
        worst = worst.max((quad_elliptic(EllipticKind::E, k, spec)? - complete_e(k)?).abs());
    }
    worst = worst.max((quad_elliptic(EllipticKind::E, 1.0, spec)? - 1.0).abs());
    Ok(worst)
}

fn series_direct_margin() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in decile_grid() {
        for (target, direct) in [
            (SeriesTarget::K, complete_k(k)?),
            (SeriesTarget::E, complete_e(k)?),
            (SeriesTarget::D, complete_d(k)?),
        ] {
            worst = worst.max((series_eval(target, k, 1e-17)?.value - direct).abs());
        }
    }
    Ok(worst)
}

fn series_exact_margin() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 1..=19 {
        let k = j as f64 * 0.05;
        let exact = area::area_function(k)?;
        worst = worst.max(rel(area::area_series_at(k, 1e-14)?, exact));
    }
    Ok(worst)
}

fn monotone_violations() -> Result<usize> {
    let mut prev = f64::INFINITY;
    let mut bad = 0;
    for j in 0..=100 {
        let v = area::area_function(j as f64 / 100.0)?;
        if v >= prev {
            bad += 1;
        }
        prev = v;
    }
    Ok(bad)
}

fn degenerate_margin() -> Result<f64> {
    let p = CurveParams::new(2.0, 2.0, 2.0)?;
    let branch = area::area_exact(&p)?.total;
    let expected = 8.0 * 2.0 * 2.0 / 3.0;
    let series = area::area_series_terms(1.0, 1_000_000) * 4.0;
    let at_zero = area::area_series_at(0.0, 1e-15)?;
    let first = area::area_taylor_at(1.0, 0.0, 2, ApproxKind::First)?;
    Ok(rel(branch, expected)
        .max(rel(series, expected))
        .max(rel(at_zero, PI))
        .max(rel(first, PI)))
}

fn bounds_violations(triples: &[CurveParams]) -> Result<usize> {
    let mut bad = 0;
    for p in triples {
        let area = area::area_exact(p)?.total;
        if !area::bounds(p)?.orders_strictly(area) {
            bad += 1;
        }
    }
    Ok(bad)
}
