use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::manifest::{validate_tolerance, Manifest, OySettings, Suite};
use crate::comparison::{
    derive_setup, f_parabolic_test, LAPLACIAN_TOL, laplacian_comparison_check, volume_bound_check, ParabolicTest,
};
use crate::error::{Error, Result};
use crate::factory::{Family, SolitonSpec};
use crate::kernel::{ClosedForm, Grid, GridFn};
use crate::verify::{
    audit_theorem, check_oy_hypotheses, classify_soliton, okumura_check, okumura_sample,
    identity_residual_with_tol, soliton_residual, AuditReport, Classification, Criterion,
    IdentityId, OkumuraSample, ResidualReport, TheoremId, Verdict, IDENTITY_TOL,
};

/// Random trace-free tuples drawn by the okumura suite.
pub const OKUMURA_COUNT: usize = 10_000;

/// Command-line adjustments applied on top of a manifest.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub default_resolution: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub timings: bool,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// A pointwise check without its per-point grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    pub sup_norm: Option<f64>,
    pub argmax_t: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub criterion: Criterion,
    pub tolerance: f64,
    pub passed: bool,
}

impl From<&ResidualReport> for CheckSummary {
    fn from(r: &ResidualReport) -> Self {
        CheckSummary {
            check: r.check.clone(),
            sup_norm: finite(r.sup_norm),
            argmax_t: finite(r.argmax_t),
            min: finite(r.min),
            max: finite(r.max),
            criterion: r.criterion,
            tolerance: r.tolerance_used,
            passed: r.passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeSummary {
    pub r: f64,
    pub actual: Option<f64>,
    pub bound: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub audits: Vec<AuditReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub volumes: Vec<VolumeSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parabolicity: Option<ParabolicTest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub okumura: Option<OkumuraSample>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteResult {
    fn new(suite: Suite) -> Self {
        SuiteResult {
            suite,
            passed: true,
            checks: vec![],
            audits: vec![],
            volumes: vec![],
            parabolicity: None,
            okumura: None,
            notes: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecSummary {
    pub family: Family,
    pub n: usize,
    pub interval: [f64; 2],
    pub resolution: usize,
    pub pole: bool,
    pub classification: Classification,
    /// `inf S`.
    pub s_inf: Option<f64>,
    /// `inf λ`.
    pub lambda_inf: Option<f64>,
    /// `sup λ`.
    pub lambda_sup: Option<f64>,
    /// `sup |T|`.
    pub t_sup: Option<f64>,
}

/// One row of the profile table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub t: f64,
    pub g: Option<f64>,
    pub f: Option<f64>,
    pub lambda: Option<f64>,
    pub s: Option<f64>,
    pub ric_norm2: Option<f64>,
    pub t_norm2: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub manifest: Manifest,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub spec: SpecSummary,
    pub suites: Vec<SuiteResult>,
    pub overall_pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    pub profile: Vec<ProfileRow>,
}

struct Context<'a> {
    spec: &'a SolitonSpec,
    manifest: &'a Manifest,
    tol: &'a BTreeMap<String, f64>,
    seed: u64,
}

fn summarize(s: &SolitonSpec) -> Result<SpecSummary> {
    let curv = s.profile.curvature_samples()?;
    let lam = s.lambda_jet()?.v;
    let grid = s.grid();
    let min = |v: &mut dyn Iterator<Item = f64>| finite(v.fold(f64::INFINITY, f64::min));
    let max = |v: &mut dyn Iterator<Item = f64>| finite(v.fold(f64::NEG_INFINITY, f64::max));
    Ok(SpecSummary {
        family: s.family,
        n: s.n(),
        interval: [grid.t0, grid.t1],
        resolution: grid.n,
        pole: s.profile.pole(),
        classification: classify_soliton(s)?,
        s_inf: min(&mut curv.iter().map(|c| c.s)),
        lambda_inf: min(&mut lam.iter().copied()),
        lambda_sup: max(&mut lam.iter().copied()),
        t_sup: max(&mut curv.iter().map(|c| c.t_norm2.max(0.0).sqrt())),
    })
}

fn profile(s: &SolitonSpec, residual: Option<&GridFn>) -> Result<Vec<ProfileRow>> {
    let curv = s.profile.curvature_samples()?;
    let g = &s.profile.g_jet().v;
    let f = s.f_jet()?.v;
    let lam = s.lambda_jet()?.v;
    Ok(s
        .grid()
        .points()
        .enumerate()
        .map(|(i, t)| ProfileRow {
            t,
            g: finite(g[i]),
            f: finite(f[i]),
            lambda: finite(lam[i]),
            s: finite(curv[i].s),
            ric_norm2: finite(curv[i].ric_norm2),
            t_norm2: finite(curv[i].t_norm2),
            residual: residual.and_then(|r| finite(r.get(i))),
        })
        .collect())
}

fn run_residual(cx: &Context, out: &mut SuiteResult) -> Result<GridFn> {
    let mut spec = cx.spec.clone();
    if let Some(t) = cx.tol.get("residual") {
        spec.tolerance = *t;
    }
    let r = soliton_residual(&spec)?;
    out.passed = r.passed;
    out.checks.push((&r).into());
    Ok(r.per_point)
}

fn run_identities(cx: &Context, out: &mut SuiteResult) -> Result<()> {
    let tol = cx.tol.get("identities").copied().unwrap_or(IDENTITY_TOL);
    for id in IdentityId::ALL {
        if id == IdentityId::I2_26R && !cx.spec.profile.conformally_flat() {
            out.notes
                .push(format!("{} skipped: profile is not conformally flat", id.name()));
            continue;
        }
        let r = identity_residual_with_tol(cx.spec, id, tol)?;
        out.passed &= r.passed;
        out.checks.push((&r).into());
    }
    Ok(())
}

fn run_audits(cx: &Context, out: &mut SuiteResult) -> Result<()> {
    for th in [TheoremId::A, TheoremId::B, TheoremId::D] {
        let report = match (th, cx.manifest.audit_params.as_ref()) {
            (TheoremId::A, None) => {
                out.notes
                    .push("theorem A skipped: no audit_params in the manifest".into());
                continue;
            }
            (_, p) => audit_theorem(cx.spec, th, p)?,
        };
        out.passed &= report.verdict != Verdict::Violation;
        out.audits.push(report);
    }
    Ok(())
}

fn run_comparison(cx: &Context, out: &mut SuiteResult) -> Result<()> {
    let s = cx.spec;
    let cs = derive_setup(s)?;
    let mut lap = laplacian_comparison_check(s, &cs)?;
    if let Some(t) = cx.tol.get("comparison") {
        lap = ResidualReport::new(lap.check, lap.per_point, Criterion::MaxAtMost, *t);
    } else {
        debug_assert_eq!(lap.tolerance_used, LAPLACIAN_TOL);
    }
    out.passed = lap.passed;
    out.checks.push((&lap).into());
    let t1 = s.grid().t1;
    for r in [0.25 * t1, 0.5 * t1, t1] {
        let v = volume_bound_check(s, &cs, r)?;
        out.passed &= v.passed;
        out.volumes.push(VolumeSummary {
            r,
            actual: finite(v.actual),
            bound: finite(v.bound),
            passed: v.passed,
        });
    }
    if t1 > 8.0 {
        out.parabolicity = Some(f_parabolic_test(s, t1)?);
    } else {
        out.notes
            .push("f-parabolicity skipped: needs the window to extend past r = 8".into());
    }
    Ok(())
}

fn run_okumura(cx: &Context, out: &mut SuiteResult) -> Result<()> {
    let n = cx.spec.n();
    let sample = okumura_sample(n, OKUMURA_COUNT, cx.seed)?;
    out.passed = sample.failures == 0;
    out.okumura = Some(sample);
    // T of a warped product has the pattern (x, …, x, −d x), Okumura's
    // equality case; the margin should vanish to roundoff
    let d = n - 1;
    let curv = cx.spec.profile.curvature_samples()?;
    let mut margin = Vec::with_capacity(curv.len());
    for c in &curv {
        let mut eig = vec![c.tau_f; d];
        eig.push(-(d as f64) * c.tau_f);
        let k = okumura_check(&eig)?;
        let norm3 = eig.iter().map(|x| x * x).sum::<f64>().powf(1.5);
        margin.push(if norm3 > 0.0 { (k.lhs - k.rhs) / norm3 } else { 0.0 });
    }
    let r = ResidualReport::new(
        "okumura_on_T",
        GridFn::on(cx.spec.grid(), margin)?,
        Criterion::MinAtLeast,
        1e-10,
    );
    out.passed &= r.passed;
    out.checks.push((&r).into());
    Ok(())
}

fn run_oy(cx: &Context, out: &mut SuiteResult) -> Result<()> {
    let settings = cx.manifest.oy.clone().unwrap_or_default();
    let OySettings { coefficients, t_max } = settings;
    let grid = Grid::new(0.0, t_max, cx.spec.grid().n.max(2001))?;
    let g = ClosedForm::Polynomial(coefficients).sample(grid)?;
    let report = check_oy_hypotheses(&g)?;
    out.passed = report.verdict == Verdict::ConsistentWithPaper;
    out.audits.push(report);
    Ok(())
}

/// Builds the spec and runs every requested suite in order.
pub fn run_suite(m: &Manifest, opts: &RunOptions) -> Result<RunReport> {
    let mut tol = m.tolerances.clone();
    for (k, v) in &opts.tolerances {
        validate_tolerance(&format!("--tol {k}"), k, *v)?;
        tol.insert(k.clone(), *v);
    }
    let default_res = match opts.default_resolution {
        Some(r) => r,
        None => super::manifest::default_resolution()?,
    };
    let spec = m.build_spec(default_res).map_err(|e| e.context("build"))?;
    let seed = opts.seed.unwrap_or_else(|| m.seed());
    let cx = Context {
        spec: &spec,
        manifest: m,
        tol: &tol,
        seed,
    };
    let mut timings = BTreeMap::new();
    let mut suites = Vec::new();
    let mut residual_grid = None;
    for &suite in &m.suites {
        let start = Instant::now();
        let mut out = SuiteResult::new(suite);
        let res = match suite {
            Suite::Residual => run_residual(&cx, &mut out).map(|g| residual_grid = Some(g)),
            Suite::Identities => run_identities(&cx, &mut out),
            Suite::Audits => run_audits(&cx, &mut out),
            Suite::Comparison => run_comparison(&cx, &mut out),
            Suite::Okumura => run_okumura(&cx, &mut out),
            Suite::Oy => run_oy(&cx, &mut out),
        };
        res.map_err(|e: Error| e.context(suite.name()))?;
        timings.insert(suite.name().to_string(), start.elapsed().as_secs_f64());
        suites.push(out);
    }
    Ok(RunReport {
        manifest: m.clone(),
        seed,
        tolerances: tol,
        spec: summarize(&spec)?,
        overall_pass: suites.iter().all(|s| s.passed),
        suites,
        timings: opts.timings.then_some(timings),
        profile: profile(&spec, residual_grid.as_ref())?,
    })
}
