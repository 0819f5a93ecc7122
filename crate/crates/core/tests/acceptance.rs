//! Acceptance criteria 1–10, one line each. Runs without the test harness so
//! the lines always print; exits nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use common::all_specs;
use solab::cli::RunReport;
use solab::comparison::{
    derive_setup, diameter_bound, f_parabolic_test, laplacian_comparison_check, volest_constants,
    volume_bound_check, ParabolicVerdict,
};
use solab::factory::{
    build_classified, build_einstein_family, build_gaussian, ClassifiedCase, Family,
    QUADRATURE_TOL,
};
use solab::kernel::{Grid, GridFn, DEFAULT_SAMPLES};
use solab::verify::{
    audit_theorem, check_oy_hypotheses, identity_residual, nabla_t_norm2, okumura_check,
    okumura_sample, soliton_residual, AuditParamsA, IdentityId, TheoremId, Verdict,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn defining_equation() -> Outcome {
    let (mut closed, mut quad) = (0.0f64, 0.0f64);
    let mut ok = true;
    for (name, s) in all_specs() {
        let r = soliton_residual(&s).map_err(|e| format!("{name}: {e}"))?;
        let general = s.family == Family::GeneralWarped;
        let limit = if general { QUADRATURE_TOL } else { 1e-8 };
        ok &= r.sup_norm < limit;
        if general {
            quad = quad.max(r.sup_norm);
        } else {
            closed = closed.max(r.sup_norm);
        }
    }
    check(ok, format!("closed form sup {closed:.2e} < 1e-8, general sup {quad:.2e} < 1e-6"))
}

fn identity_suite() -> Outcome {
    let (mut worst, mut min_r, mut defect) = (0.0f64, f64::INFINITY, 0.0f64);
    for (name, s) in all_specs() {
        for id in IdentityId::ALL {
            if id == IdentityId::I2_26R {
                if !s.profile.conformally_flat() {
                    continue;
                }
                let r = identity_residual(&s, id).map_err(|e| format!("{name}: {e}"))?;
                min_r = min_r.min(r.min);
                let nt = nabla_t_norm2(&s).map_err(|e| e.to_string())?;
                for i in s.grid().interior() {
                    defect = defect.max((r.per_point.get(i) - nt.get(i)).abs());
                }
            } else {
                let r = identity_residual(&s, id).map_err(|e| format!("{name}: {e}"))?;
                worst = worst.max(r.sup_norm);
            }
        }
    }
    check(
        worst < 1e-5 && min_r >= -1e-5 && defect < 2e-5,
        format!("sup {worst:.2e} < 1e-5, min R {min_r:.2e} >= -1e-5, |R - |nabla T|^2| {defect:.2e} < 2e-5"),
    )
}

fn okumura() -> Outcome {
    let mut failures = 0;
    let mut eq_gap = 0.0f64;
    for n in 3..=8 {
        failures += okumura_sample(n, 10_000, 42).map_err(|e| e.to_string())?.failures;
        for s in [0.5, 1.0, 2.0] {
            let mut t = vec![s; n - 1];
            t.push(-((n - 1) as f64) * s);
            let c = okumura_check(&t).map_err(|e| e.to_string())?;
            eq_gap = eq_gap.max((c.lhs - c.rhs).abs());
        }
    }
    check(
        failures == 0 && eq_gap < 1e-10,
        format!("{failures} failures in 60000 tuples, equality gap {eq_gap:.2e} < 1e-10"),
    )
}

fn comparison_sharpness() -> Outcome {
    let grid = Grid::new(0.0, 3.0, DEFAULT_SAMPLES).unwrap();
    let mut worst = 0.0f64;
    for n in [2, 3, 4] {
        let hyp = build_classified(ClassifiedCase::SpaceForm { c: 1.0, a: 0.0, b: 0.0 }, n, grid)
            .map_err(|e| e.to_string())?;
        let euc = build_gaussian(0.0, n, 3.0, DEFAULT_SAMPLES).map_err(|e| e.to_string())?;
        for s in [hyp, euc] {
            let cs = derive_setup(&s).map_err(|e| e.to_string())?;
            let lap = laplacian_comparison_check(&s, &cs).map_err(|e| e.to_string())?;
            for r in [0.5, 1.0, 2.0] {
                let i = grid.nearest_index(r);
                let bound = lap.per_point.get(i);
                let v = volume_bound_check(&s, &cs, r).map_err(|e| e.to_string())?;
                // relative to Δ_f r ≈ (n−1)/r and to the volume
                worst = worst.max(bound.abs() * r / (n - 1) as f64);
                worst = worst.max(((v.bound - v.actual) / v.actual).abs());
            }
        }
    }
    let hyp = build_classified(ClassifiedCase::SpaceForm { c: 1.0, a: 0.0, b: 0.0 }, 3, grid)
        .map_err(|e| e.to_string())?;
    let mut vol_err = 0.0f64;
    for r in [0.5, 1.0, 2.0] {
        let v = hyp.profile.weighted_ball_volume(&hyp.f, r).map_err(|e| e.to_string())?;
        vol_err = vol_err.max((v - PI * ((2.0 * r).sinh() - 2.0 * r)).abs());
    }
    check(
        worst < 1e-6 && vol_err < 1e-8,
        format!("relative gap {worst:.2e} < 1e-6, hyperbolic ball volume error {vol_err:.2e} < 1e-8"),
    )
}

fn volume_estimate() -> Outcome {
    let s = build_gaussian(1.0, 3, 8.0, DEFAULT_SAMPLES).map_err(|e| e.to_string())?;
    let k = volest_constants(&s, 1.0, 0.0).map_err(|e| e.to_string())?;
    let mut min_ratio = f64::INFINITY;
    for i in 0..=600 {
        let r = 2.0 + 0.01 * i as f64;
        let actual = 4.0 * PI * r * r * (-0.5 * r * r).exp();
        let b = k.bound(r).map_err(|e| e.to_string())?.sphere_bound;
        min_ratio = min_ratio.min(b / actual);
    }
    let total = s.profile.weighted_ball_volume(&s.f, 8.0).map_err(|e| e.to_string())?;
    let err = (total - (2.0 * PI).powf(1.5)).abs();
    check(
        min_ratio >= 1.0 && err < 1e-6,
        format!("min bound/actual on [2, 8] {min_ratio:.3}, total volume error {err:.2e} < 1e-6"),
    )
}

fn theorem_b() -> Outcome {
    let g = build_gaussian(1.0, 3, 8.0, DEFAULT_SAMPLES).map_err(|e| e.to_string())?;
    let rg = audit_theorem(&g, TheoremId::B, None).map_err(|e| e.to_string())?;
    let s_g = rg.conclusion("0 <= S_*").and_then(|f| f.measured).unwrap_or(f64::NAN);
    let gaussian_ok = rg.verdict == Verdict::ConsistentWithPaper
        && rg.conclusions.iter().all(|f| f.passed)
        && s_g.abs() < 1e-8;

    let grid = Grid::new(0.0, 4.0, DEFAULT_SAMPLES).unwrap();
    let cyl = build_einstein_family(0.0, 1.0, 0.0, 1.0, 0.0, 3, grid).map_err(|e| e.to_string())?;
    let rc = audit_theorem(&cyl, TheoremId::B, None).map_err(|e| e.to_string())?;
    let cylinder_ok = rc.verdict == Verdict::ConsistentWithPaper
        && rc.conclusion("S_* = 0").is_some_and(|f| f.passed);

    let params = AuditParamsA { alpha: 0.0, sigma: 0.0, mu: 0.0, a: 0.5, b: 2.0 };
    let mut violations = Vec::new();
    for (name, s) in all_specs() {
        for th in [TheoremId::A, TheoremId::B, TheoremId::D] {
            let r = audit_theorem(&s, th, Some(&params)).map_err(|e| e.to_string())?;
            if r.verdict == Verdict::Violation {
                violations.push(format!("{name}/{th:?}"));
            }
        }
    }
    check(
        gaussian_ok && cylinder_ok && violations.is_empty(),
        format!(
            "gaussian case (iii) S_* = {s_g:.1e}, cylinder case (ii) {}, violations [{}]",
            if cylinder_ok { "ok" } else { "failed" },
            violations.join(", ")
        ),
    )
}

fn diameter() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=8 {
        let m = (n - 1) as f64;
        let b = diameter_bound(m, 0.0, m, n).map_err(|e| e.to_string())?;
        worst = worst.max((b - PI).abs());
    }
    check(worst < 1e-12, format!("max |bound - pi| {worst:.1e} < 1e-12"))
}

fn parabolicity() -> Outcome {
    let verdict = |lambda0: f64, n: usize| -> Result<ParabolicVerdict, String> {
        let s = build_gaussian(lambda0, n, 20.0, DEFAULT_SAMPLES).map_err(|e| e.to_string())?;
        Ok(f_parabolic_test(&s, 20.0).map_err(|e| e.to_string())?.verdict)
    };
    let (g3, e3, e2) = (verdict(1.0, 3)?, verdict(0.0, 3)?, verdict(0.0, 2)?);
    check(
        g3 == ParabolicVerdict::LikelyParabolic
            && e3 == ParabolicVerdict::LikelyNonParabolic
            && e2 == ParabolicVerdict::LikelyParabolic,
        format!("gaussian n=3 {g3:?}, euclidean n=3 {e3:?}, euclidean n=2 {e2:?}"),
    )
}

fn omori_yau() -> Outcome {
    let grid = Grid::new(0.0, 20.0, DEFAULT_SAMPLES).unwrap();
    let quad = GridFn::from_fn(grid, |t| t * t + 1.0).map_err(|e| e.to_string())?;
    let gauss = GridFn::from_fn(grid, |t| (t * t).exp()).map_err(|e| e.to_string())?;
    let rq = check_oy_hypotheses(&quad).map_err(|e| e.to_string())?;
    let rg = check_oy_hypotheses(&gauss).map_err(|e| e.to_string())?;
    let quad_ok = rq.hypotheses.len() == 4 && rq.hypotheses.iter().all(|f| f.passed);
    let gauss_fails = rg.hypothesis("G^(-1/2) not integrable").is_some_and(|f| !f.passed);
    check(
        quad_ok && gauss_fails,
        format!(
            "t^2 + 1 passes {}/4, e^(t^2) fails (iii): {gauss_fails}",
            rq.hypotheses.iter().filter(|f| f.passed).count()
        ),
    )
}

fn cli() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_solab"))
            .args(args)
            .current_dir(dir.path())
            .env_remove("SOLAB_RESOLUTION")
            .output()
            .map_err(|e| e.to_string())
    };
    run(&["demo"])?;
    let mut problems = Vec::new();
    for stem in ["gaussian", "einstein-cosh", "general-sine", "hyperbolic-model", "cylinder"] {
        let file = format!("{stem}.json");
        let a = run(&["run", &file, "--format", "json", "--no-timings"])?;
        let b = run(&["run", &file, "--format", "json", "--no-timings"])?;
        let pass = serde_json::from_slice::<RunReport>(&a.stdout).is_ok_and(|r| r.overall_pass);
        if a.status.code() != Some(0) || !pass {
            problems.push(format!("{stem} failed"));
        }
        if a.stdout != b.stdout {
            problems.push(format!("{stem} not deterministic"));
        }
    }
    let text = std::fs::read_to_string(dir.path().join("gaussian.json")).map_err(|e| e.to_string())?;
    let corrupted = text.replace("\"n\": 3.0", "\"n\": 3.0,\n    \"lambda_offset\": 0.01");
    std::fs::write(dir.path().join("corrupted.json"), corrupted).map_err(|e| e.to_string())?;
    std::fs::write(dir.path().join("malformed.json"), "{\"version\": ").map_err(|e| e.to_string())?;
    let c = run(&["run", "corrupted.json"])?.status.code();
    let m = run(&["run", "malformed.json"])?.status.code();
    if c != Some(1) {
        problems.push(format!("corrupted exit {c:?}"));
    }
    if m != Some(2) {
        problems.push(format!("malformed exit {m:?}"));
    }
    check(
        problems.is_empty(),
        if problems.is_empty() {
            "five demos pass with identical json, corrupted lambda exits 1, malformed exits 2".into()
        } else {
            problems.join("; ")
        },
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("defining-equation residual", defining_equation),
        ("identity suite", identity_suite),
        ("Okumura inequality", okumura),
        ("comparison sharpness", comparison_sharpness),
        ("volume estimate on the Gaussian", volume_estimate),
        ("scalar curvature audit", theorem_b),
        ("diameter bound", diameter),
        ("f-parabolicity", parabolicity),
        ("Omori-Yau hypotheses", omori_yau),
        ("command line", cli),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {:>2} {tag}  {name}: {detail} ({secs:.2}s)", i + 1);
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
