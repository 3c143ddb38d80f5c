//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use nearfield::array::{fresnel_switch_function, AngleMode};
use nearfield::atlas::{figure_preset, parse_csv, sweep, to_csv, to_json, SweepRow};
use nearfield::oracle::{defining_equation_residual, validate_all};
use nearfield::single::{fraunhofer_single, fresnel_single, max_fraunhofer_single, max_fresnel_single};
use nearfield::{ApertureSpec, ObservationAngle, PhasedArray};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

const APERTURES: [f64; 4] = [0.5, 1.0, 4.5, 19.5];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn norm(a: f64) -> ApertureSpec {
    ApertureSpec::normalized(a).unwrap()
}

fn array(a: f64) -> PhasedArray {
    PhasedArray::new(&norm(a)).unwrap()
}

fn rad(t: f64) -> ObservationAngle {
    ObservationAngle::new(t).unwrap()
}

fn fresnel_max_constant() -> Outcome {
    let (s, c) = (2f64.sqrt().atan()).sin_cos();
    let derived = (8.0 * c * s * s).sqrt();
    let ratios: Vec<f64> = APERTURES.iter().map(|&a| array(a).max_fresnel() / (a * a * a).sqrt()).collect();
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let near_175 = ratios.iter().all(|r| (r - 1.75).abs() <= 0.01);
    let consistent = hi - lo <= 1e-6 && (lo - derived).abs() <= 1e-6;
    outcome(
        near_175 && consistent,
        format!("ratio in [{lo:.9}, {hi:.9}], constant {derived:.9}, spread {:.1e}", hi - lo),
    )
}

fn sqrt8_ratio() -> Outcome {
    let worst = APERTURES
        .iter()
        .map(|&a| (array(a).max_fresnel() / max_fresnel_single(&norm(a)) - 8f64.sqrt()).abs())
        .fold(0.0, f64::max);
    outcome(worst <= 1e-9, format!("max |ratio - sqrt 8| = {worst:.2e}"))
}

fn fourfold_fraunhofer() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for a in APERTURES {
        let arr = array(a);
        let ratio = arr.max_fraunhofer() / max_fraunhofer_single(&norm(a));
        let c = arr.array_angle(AngleMode::Exact).cos();
        let floor = 4.0 * c * c;
        pass &= ratio >= floor * (1.0 - 1e-12) && ratio <= 4.0 * (1.0 + 1e-12);
        if a == 19.5 {
            pass &= (ratio - 4.0).abs() <= 1e-4;
        }
        detail.push(format!("{a}:{ratio:.6}"));
    }
    outcome(pass, format!("ratios {}", detail.join(" ")))
}

fn constants() -> Outcome {
    let arr = array(0.5);
    let f_inv = 90.0 - arr.array_angle(AngleMode::Exact).to_degrees();
    let sw = arr.switch_angles();
    let (n1, n2) = (sw.theta_n1.to_degrees(), sw.theta_n2.to_degrees());
    let spec = norm(1.0);
    let steps = 1_000_000;
    let (mut best, mut best_d) = (0.0, f64::NEG_INFINITY);
    for i in 1..steps {
        let t = FRAC_PI_2 * i as f64 / steps as f64;
        let d = fresnel_single(rad(t), &spec).distance;
        if d > best_d {
            (best, best_d) = (t, d);
        }
    }
    let star = best.to_degrees();
    let checks = [
        ((f_inv - 82.7).abs() <= 0.1, format!("F^-1(1)={f_inv:.4}")),
        ((n1 - 15.1).abs() <= 0.1, format!("G^-1(1)_1={n1:.4} (want 15.1+/-0.1)")),
        ((n2 - 65.0).abs() <= 0.5, format!("G^-1(1)_2={n2:.4}")),
        ((star - 54.74).abs() <= 0.01, format!("theta*={star:.5}")),
    ];
    let pass = checks.iter().all(|c| c.0);
    let detail = checks
        .iter()
        .map(|(ok, s)| format!("{s}{}", if *ok { "" } else { " [off]" }))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, detail)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for a in APERTURES {
        let r = validate_all(&norm(a), 1000).unwrap();
        pass &= r.pass;
        worst = worst.max(r.fraunhofer.max_rel_error).max(r.fresnel.max_rel_error);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(pass && worst <= 1e-9 && secs < 10.0, format!("max rel error {worst:.2e}, {secs:.2}s"))
}

fn jump(f: impl Fn(f64) -> f64, at: f64, eps: f64) -> f64 {
    let (lo, hi) = (f(at - eps), f(at + eps));
    (hi - lo).abs() / lo.abs().max(hi.abs())
}

fn branch_continuity() -> Outcome {
    let eps = 1e-8;
    let (mut worst_f, mut worst_n): (f64, f64) = (0.0, 0.0);
    for a in APERTURES {
        let arr = array(a);
        let tf = arr.array_angle(AngleMode::Exact);
        let df = |t: f64| arr.fraunhofer(rad(t)).unwrap().distance;
        for at in [FRAC_PI_2 - tf, FRAC_PI_2 + tf] {
            worst_f = worst_f.max(jump(df, at, eps));
        }
        let sw = arr.switch_angles();
        let dn = |t: f64| arr.fresnel(rad(t)).unwrap().distance;
        for at in [sw.theta_n1, sw.theta_n2, sw.theta_n1_mirror, sw.theta_n2_mirror] {
            worst_n = worst_n.max(jump(dn, at, eps));
        }
    }
    outcome(
        worst_f <= 1e-6 && worst_n <= 1e-6,
        format!("max jump fraunhofer {worst_f:.2e}, fresnel {worst_n:.2e} (limit 1e-6)"),
    )
}

fn row_at(rows: &[SweepRow], theta: f64) -> Option<SweepRow> {
    rows.iter().find(|r| (r.theta_deg - theta).abs() < 1e-9).copied()
}

fn figure_reproduction() -> Outcome {
    let mut failures = Vec::new();
    for n in [1u32, 3, 10, 40] {
        let spec = figure_preset(n, 0.5, 1.0).unwrap();
        let a = spec.d_over_lambda();
        let csv = to_csv(&sweep(&spec, 0.0, 180.0, 721).unwrap());
        let rows = parse_csv(&csv).unwrap();
        let (Some(r90), Some(r45)) = (row_at(&rows, 90.0), row_at(&rows, 45.0)) else {
            failures.push(format!("N={n}: missing 45/90 rows"));
            continue;
        };
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
        if rel(r90.df_array, 2.0 * a * a) > 1e-10 {
            failures.push(format!("N={n}: dF_array(90)={}", r90.df_array));
        }
        if rel(r45.df_array, 4.0 * r45.df_single) > 1e-10 {
            failures.push(format!("N={n}: dF_array(45)/dF_single(45)={}", r45.df_array / r45.df_single));
        }
        if r90.dn_array != 0.0 {
            failures.push(format!("N={n}: dN_array(90)={}", r90.dn_array));
        }
        let slack = 1.0 + 1e-11;
        let dominated = rows
            .iter()
            .all(|r| r.df_array * slack >= r.df_single && r.dn_array * slack >= r.dn_single);
        if !dominated {
            failures.push(format!("N={n}: array below single somewhere"));
        }
    }
    let detail = if failures.is_empty() { "N = 1, 3, 10, 40 over 721 rows".to_string() } else { failures.join("; ") };
    outcome(failures.is_empty(), detail)
}

fn approximation_bound() -> Outcome {
    let worst = (0..50)
        .map(|i| {
            let a = 0.5 * 200f64.powf(i as f64 / 49.0);
            let arr = array(a);
            (arr.array_angle(AngleMode::Exact) - arr.array_angle(AngleMode::Approximate)).abs().to_degrees()
        })
        .fold(0.0, f64::max);
    outcome(worst <= 0.2, format!("max |exact - approx| = {worst:.4} deg"))
}

fn a_strategy() -> impl Strategy<Value = f64> {
    (0.0f64..1.0).prop_map(|u| 0.5 * 200f64.powf(u))
}

fn theta_strategy() -> impl Strategy<Value = f64> {
    1e-6..(PI - 1e-6)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}

/// Relative tolerance for comparing `f(t)` with `f(pi - t)`: `pi - t` is
/// rounded, which perturbs `sin` by about `ulp(pi) / sin t` relative.
fn mirror_tol(t: f64) -> f64 {
    1e-12 + 8.0 * f64::EPSILON * PI / t.sin()
}

fn property_suites() -> Outcome {
    const CASES: u32 = 10_000;
    let runner = |name: &str, test: &dyn Fn(f64, f64, u64) -> Result<(), TestCaseError>| {
        let mut r = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
        r.run(&(a_strategy(), theta_strategy(), any::<u64>()), |(a, t, seed)| test(a, t, seed))
            .map_err(|e| format!("{name}: {e}"))
    };
    let suites: Vec<Result<(), String>> = vec![
        runner("mirror symmetry", &|a, t, _| {
            let (spec, arr) = (norm(a), array(a));
            let (x, m) = (rad(t), rad(t).mirror());
            let pairs = [
                (arr.fraunhofer(x).unwrap().distance, arr.fraunhofer(m).unwrap().distance),
                (arr.fresnel(x).unwrap().distance, arr.fresnel(m).unwrap().distance),
                (fraunhofer_single(x, &spec).distance, fraunhofer_single(m, &spec).distance),
                (fresnel_single(x, &spec).distance, fresnel_single(m, &spec).distance),
            ];
            ensure(pairs.iter().all(|(p, q)| close(*p, *q, mirror_tol(t))), || format!("a={a} t={t}: {pairs:?}"))
        }),
        runner("sandwich bounds", &|a, t, _| {
            let (spec, arr) = (norm(a), array(a));
            let x = rad(t);
            let (fa, fs) = (arr.fraunhofer(x).unwrap().distance, fraunhofer_single(x, &spec).distance);
            let (na, ns) = (arr.fresnel(x).unwrap().distance, fresnel_single(x, &spec).distance);
            let slack = 1.0 + 1e-12;
            ensure(
                fs <= fa * slack && fa <= 4.0 * fs * slack && ns <= na * slack && na <= 8f64.sqrt() * ns * slack,
                || format!("a={a} t={t}: F {fs} {fa}, N {ns} {na}"),
            )
        }),
        runner("defining-equation round-trips", &|a, t, _| {
            let (spec, arr) = (norm(a), array(a));
            let x = rad(t);
            let values = [
                fraunhofer_single(x, &spec),
                fresnel_single(x, &spec),
                arr.fraunhofer(x).unwrap(),
                arr.fresnel(x).unwrap(),
            ];
            for v in values {
                let r = defining_equation_residual(v.kind, x, &spec, v.distance);
                ensure(r.abs() <= 1e-9, || format!("a={a} t={t} {:?}: residual {r:e}", v.kind))?;
            }
            Ok(())
        }),
        runner("serialization determinism and round-trips", &|a, t, seed| {
            let steps = 2 + (seed % 7) as usize;
            let start = (t.to_degrees() * 0.5).min(170.0);
            let rows = sweep(&norm(a), start, 180.0, steps).unwrap();
            let csv = to_csv(&rows);
            let json = to_json(&rows).unwrap();
            ensure(csv == to_csv(&rows) && json == to_json(&rows).unwrap(), || "non-deterministic output".into())?;
            let back: Vec<SweepRow> = serde_json::from_str(&json).unwrap();
            ensure(back == rows, || format!("json round-trip changed rows for a={a}"))?;
            let parsed = parse_csv(&csv).unwrap();
            ensure(parsed.len() == rows.len(), || "csv row count".into())?;
            for (p, r) in parsed.iter().zip(&rows) {
                let nums = [
                    (p.theta_deg, r.theta_deg),
                    (p.df_array, r.df_array),
                    (p.dn_array, r.dn_array),
                    (p.df_single, r.df_single),
                    (p.dn_single, r.dn_single),
                ];
                ensure(
                    nums.iter().all(|(x, y)| close(*x, *y, 1e-11)) && (p.branch_f, p.branch_n) == (r.branch_f, r.branch_n),
                    || format!("csv round-trip a={a}: {p:?} vs {r:?}"),
                )?;
            }
            Ok(())
        }),
        runner("switch function symmetry", &|_, t, _| {
            let (g, gm) = (fresnel_switch_function(rad(t)), fresnel_switch_function(rad(t).mirror()));
            ensure(close(g, gm, mirror_tol(t)), || format!("t={t}: {g} vs {gm}"))
        }),
    ];
    let failures: Vec<String> = suites.into_iter().filter_map(Result::err).collect();
    let detail = if failures.is_empty() {
        format!("5 suites x {CASES} cases, 0 failures")
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("fresnel maximum constant", fresnel_max_constant),
        ("sqrt 8 fresnel ratio", sqrt8_ratio),
        ("fourfold fraunhofer ratio", fourfold_fraunhofer),
        ("switch and maximizer angles", constants),
        ("oracle equivalence", oracle_equivalence),
        ("branch continuity", branch_continuity),
        ("figure reproduction", figure_reproduction),
        ("array angle approximation", approximation_bound),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
