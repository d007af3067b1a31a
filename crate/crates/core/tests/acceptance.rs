//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};

use num_bigint::BigInt;
use num_rational::BigRational;

use eggarea::area::{self, area_exact, area_function, bounds, check_j_relations, inv_pi_partial, inv_pi_partial_exact};
use eggarea::curve::CurveParams;
use eggarea::elliptic::{complete_d, complete_e, complete_k, SeriesTarget};
use eggarea::oracle::{quad, quad_area, QuadratureSpec};
use eggarea::taylor::{first_taylor, second_taylor, verify_chain, CHAIN_SLACK};
use eggarea::verify::{self, GEOMETRY_SEED, TRIPLE_SEED};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rat(s: &str) -> BigRational {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    BigRational::new(n.parse::<BigInt>().unwrap(), d.parse::<BigInt>().unwrap())
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn triples() -> Vec<CurveParams> {
    verify::random_triples(TRIPLE_SEED, 10)
}

/// 1. Generated coefficients equal the reference coefficients exactly.
fn tables() -> Outcome {
    let first: [(SeriesTarget, [&str; 6]); 4] = [
        (
            SeriesTarget::K,
            ["1/2", "1/8", "9/128", "25/512", "1225/32768", "3969/131072"],
        ),
        (
            SeriesTarget::E,
            ["1/2", "-1/8", "-3/128", "-5/512", "-175/32768", "-441/131072"],
        ),
        (
            SeriesTarget::D,
            ["1/4", "3/32", "15/256", "175/4096", "2205/65536", "14553/524288"],
        ),
        (
            SeriesTarget::Area,
            ["1", "-1/8", "-1/64", "-5/1024", "-35/16384", "-147/131072"],
        ),
    ];
    let mut checked = 0;
    for (target, expected) in first {
        for n in 0..=10 {
            let t = first_taylor(target, n);
            for (j, c) in t.coefficients().iter().enumerate() {
                let want = if j % 2 == 0 { rat(expected[j / 2]) } else { rat("0") };
                if c.pi != want || c.rational != rat("0") || !c.is_exact() {
                    return Err(format!("{} T_{n}: x^{j} is {c}, expected {want}·π", target.name()));
                }
                checked += 1;
            }
        }
    }
    let corrections = [
        (1, "-1"),
        (3, "-7/8"),
        (5, "-55/64"),
        (7, "-875/1024"),
        (9, "-13965/16384"),
    ];
    for (n, pi) in corrections {
        for m in [n, n + 1] {
            let t = second_taylor(SeriesTarget::Area, m, 1.0).map_err(|e| e.to_string())?;
            let c = &t.coefficients()[m];
            if c.rational != rat("8/3") || c.pi != rat(pi) || !c.is_exact() {
                return Err(format!("A 𝕋_{m}: leading coefficient {c}, expected 8/3 + {pi}·π"));
            }
            checked += 1;
        }
    }
    let t0 = second_taylor(SeriesTarget::Area, 0, 1.0).map_err(|e| e.to_string())?;
    if t0.coefficients()[0].rational != rat("8/3") {
        return Err("A 𝕋_0 is not 8/3".into());
    }
    Ok(format!("{} coefficients equal", checked + 1))
}

/// 2. `|K - E - k²D| ≤ 1e-12` on `{0.05, …, 0.95}`.
fn identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for j in 1..=19 {
        let k = 0.05 * j as f64;
        let r = complete_k(k).unwrap() - complete_e(k).unwrap() - k * k * complete_d(k).unwrap();
        worst = worst.max(r.abs());
    }
    if worst <= 1e-12 {
        Ok(format!("max residual {worst:.3e}"))
    } else {
        Err(format!("max residual {worst:.3e} > 1e-12"))
    }
}

/// 3. Closed forms against the quadrature oracle.
fn oracle() -> Outcome {
    let spec = QuadratureSpec::default();
    let mut worst_area: f64 = 0.0;
    for p in triples() {
        let exact = area_exact(&p).unwrap().total;
        let q = quad_area(&p, &spec).map_err(|e| e.to_string())?.total;
        worst_area = worst_area.max(rel(q, exact));
    }
    if worst_area > 1e-8 {
        return Err(format!("area vs oracle {worst_area:.3e} > 1e-8"));
    }
    let mut worst_int: f64 = 0.0;
    for (k, tol) in [(0.1, 1e-9), (0.5, 1e-9), (0.9, 1e-8)] {
        let m = check_j_relations(k).map_err(|e| e.to_string())?;
        if !m.within(tol) {
            return Err(format!("integrals at k = {k}: {m:?}"));
        }
        worst_int = worst_int.max(m.max_i()).max(m.max_j());
    }
    let i1 = quad(|t: f64| t.sin().powi(2) * t.cos(), 0.0, PI / 2.0, &spec).unwrap();
    if (i1 - area::integral_i(1, 0.5).unwrap()).abs() > 1e-9 {
        return Err("I₁ quadrature".into());
    }
    Ok(format!("area rel {worst_area:.3e}, I/J max {worst_int:.3e}"))
}

/// 4. Subarea sum and gap.
fn subareas() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in triples() {
        let r = area_exact(&p).unwrap();
        let (a, b, w) = (p.a(), p.b(), p.w());
        let gap = if w < a {
            8.0 * w * b / 3.0
        } else {
            8.0 * a.powi(3) * b / (3.0 * w * w)
        };
        worst = worst
            .max(rel(r.part1 + r.part2, r.total))
            .max(rel(r.part2 - r.part1, gap))
            .max(rel(r.part2 - r.part1, 8.0 / 3.0 * r.scale * r.k));
    }
    if worst <= 1e-11 {
        Ok(format!("max rel {worst:.3e}"))
    } else {
        Err(format!("max rel {worst:.3e} > 1e-11"))
    }
}

/// 5. Two-sided Taylor chains to degree 10.
fn chains() -> Outcome {
    let grid: Vec<f64> = (1..=9).map(|j| j as f64 / 10.0).collect();
    let mut worst = f64::INFINITY;
    for (target, beta) in [
        (SeriesTarget::K, 0.95),
        (SeriesTarget::E, 1.0),
        (SeriesTarget::D, 0.95),
        (SeriesTarget::Area, 1.0),
    ] {
        let report = verify_chain(target, 10, beta, &grid).map_err(|e| format!("{}: {e}", target.name()))?;
        for p in &report.points {
            for errs in [p.first_errors(), p.second_errors()] {
                if errs.windows(2).any(|w| w[1] > w[0] + CHAIN_SLACK) {
                    return Err(format!("{}: margin grows with degree at x = {}", target.name(), p.x));
                }
            }
        }
        worst = worst.min(report.min_margin() + 0.0);
    }
    Ok(format!("no violations, smallest oriented gap {worst:.3e}"))
}

/// 6. `k = 1` and `k → 0` limits.
fn degenerate() -> Outcome {
    let p = CurveParams::new(2.0, 2.0, 2.0).unwrap();
    let branch = area_exact(&p).unwrap().total;
    let expected = 8.0 * 2.0 * 2.0 / 3.0;
    if rel(branch, expected) > 1e-15 {
        return Err(format!("branch value {branch} vs {expected}"));
    }
    let series = 4.0 * area::area_series_terms(1.0, 1_000_000);
    let e1 = rel(series, expected);
    if e1 > 1e-8 {
        return Err(format!("series at k = 1: rel {e1:.3e} > 1e-8"));
    }
    let at_zero = area::area_series_at(0.0, 1e-15).unwrap();
    let near_zero = area_function(1e-9).unwrap();
    if at_zero != PI || rel(near_zero, PI) > 1e-15 {
        return Err(format!("k → 0 limit {at_zero}, {near_zero}"));
    }
    Ok(format!("A(1) = 32/3, series rel {e1:.3e}, A(0) = π"))
}

/// 7. The 1/π partial sums.
fn inv_pi() -> Outcome {
    if inv_pi_partial_exact(1) != rat("21/64") || inv_pi_partial(1).unwrap() != 0.328125 {
        return Err("N = 1 is not 21/64".into());
    }
    // Terms decay like 1/(2πi³), predicting an error of 3/(32πN²) after N terms.
    for n in [100usize, 1_000] {
        let err = inv_pi_partial(n).unwrap() - 1.0 / PI;
        let predicted = 3.0 / (32.0 * PI * (n * n) as f64);
        if (err / predicted - 1.0).abs() > 0.05 {
            return Err(format!("tail estimate off at N = {n}: {err:.3e} vs {predicted:.3e}"));
        }
    }
    let err = (inv_pi_partial(10_000).unwrap() - 1.0 / PI).abs();
    if err <= 1e-8 {
        Ok(format!("N = 1 is 21/64, N = 10⁴ error {err:.3e}"))
    } else {
        Err(format!("N = 10⁴ error {err:.3e} > 1e-8"))
    }
}

/// 8. Strict bound ordering, and the alternative margin flagged at small k.
fn certificate() -> Outcome {
    for p in triples() {
        let total = area_exact(&p).unwrap().total;
        let c = bounds(&p).unwrap();
        if !c.orders_strictly(total) {
            return Err(format!("ordering fails for {p:?}: {c:?}, area {total}"));
        }
    }
    let mut flagged = 0;
    for j in 1..30 {
        let k = j as f64 / 100.0;
        let p = CurveParams::new(1.0, 1.0, k).unwrap();
        let total = area_exact(&p).unwrap().total;
        if bounds(&p).unwrap().alt_consistent(total) {
            return Err(format!("alternative margin not flagged at k = {k}"));
        }
        flagged += 1;
    }
    Ok(format!(
        "20 triples strictly ordered, alternative margin flagged at {flagged} of {flagged} k < 0.3"
    ))
}

/// 9. Points on the curve and exact q-unification.
fn geometry() -> Outcome {
    let worst = verify::geometry_margin(GEOMETRY_SEED, 10_000);
    if worst > 1e-9 {
        return Err(format!("residual {worst:.3e} > 1e-9"));
    }
    let bad = verify::unification_failures();
    if bad > 0 {
        return Err(format!("{bad} rational triples not unified"));
    }
    Ok(format!("max scaled residual {worst:.3e}, unification exact"))
}

/// 10. Byte-identical CLI output across runs and against the golden files.
fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_eggarea");
    let golden_dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
    let cases: [(&[&str], &str); 2] = [
        (
            &[
                "sample", "--a", "3", "--b", "2", "--w", "2", "--n", "64", "--format", "csv",
            ],
            "sample_a3_b2_w2_n64.csv",
        ),
        (
            &["pi-series", "--terms", "100", "--format", "json"],
            "pi_series_100.json",
        ),
    ];
    for (args, golden) in cases {
        let run = || Command::new(exe).args(args).output().map_err(|e| e.to_string());
        let (first, second) = (run()?, run()?);
        if !first.status.success() {
            return Err(format!("{args:?} exited with {}", first.status));
        }
        if first.stdout != second.stdout {
            return Err(format!("{args:?} differs between runs"));
        }
        let expected = std::fs::read(format!("{golden_dir}/{golden}")).map_err(|e| e.to_string())?;
        if first.stdout != expected {
            return Err(format!("{args:?} differs from {golden}"));
        }
    }
    Ok("sample csv and pi-series json match golden bytes".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("table fixtures", tables),
        ("identity K - E = k²D", identity),
        ("oracle equivalence", oracle),
        ("subarea algebra", subareas),
        ("sandwich chains", chains),
        ("degenerate limits", degenerate),
        ("1/π representation", inv_pi),
        ("bounds certificate", certificate),
        ("geometry", geometry),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[{:>2}] PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[{:>2}] FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
