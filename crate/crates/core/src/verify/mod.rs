//! Residual checks, Okumura's inequality, classification and theorem audits.

mod audit;
mod classify;
mod okumura;
mod oy;
mod residual;

pub use audit::{audit_theorem, AuditParamsA};
pub use classify::{classify_soliton, lambda_sign, Classification};
pub use okumura::{okumura_check, okumura_sample, OkumuraCheck, OkumuraSample};
pub use oy::check_oy_hypotheses;
pub(crate) use residual::identity_residual_with_tol;
pub use residual::{identity_residual, nabla_t_norm2, soliton_residual, IdentityId};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::factory::SolitonSpec;
use crate::geometry::CurvatureSample;
use crate::kernel::{Grid, GridFn, Jet};

/// Tolerance for identities that involve one extra differentiation.
pub const IDENTITY_TOL: f64 = 1e-5;

/// How a residual grid is turned into pass/fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `sup |r| < tol`.
    SupNorm,
    /// `min r ≥ −tol`.
    MinAtLeast,
    /// `max r ≤ tol`.
    MaxAtMost,
}

/// Outcome of a pointwise check on the interior samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub check: String,
    pub sup_norm: f64,
    pub argmax_t: f64,
    pub min: f64,
    pub max: f64,
    pub per_point: GridFn,
    pub criterion: Criterion,
    pub tolerance_used: f64,
    pub passed: bool,
}

impl ResidualReport {
    /// Summarises `per_point` over the grid interior (boundary stencil
    /// samples excluded).
    pub fn new(check: impl Into<String>, per_point: GridFn, criterion: Criterion, tol: f64) -> Self {
        let grid = per_point.grid();
        let range = grid.interior();
        let (sup_norm, imax) = per_point.sup_abs_over(range.clone());
        let vals = &per_point.values()[range];
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let passed = match criterion {
            Criterion::SupNorm => sup_norm < tol,
            Criterion::MinAtLeast => min >= -tol,
            Criterion::MaxAtMost => max <= tol,
        };
        ResidualReport {
            check: check.into(),
            sup_norm,
            argmax_t: grid.point(imax),
            min,
            max,
            per_point,
            criterion,
            tolerance_used: tol,
            passed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremId {
    A,
    B,
    D,
    OY,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ConsistentWithPaper,
    HypothesesNotMet,
    #[serde(rename = "VIOLATION")]
    Violation,
}

/// A named boolean with the number behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub name: String,
    pub passed: bool,
    pub measured: Option<f64>,
}

impl Flag {
    pub fn new(name: &str, passed: bool, measured: f64) -> Self {
        Flag {
            name: name.to_string(),
            passed,
            measured: measured.is_finite().then_some(measured),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub theorem: TheoremId,
    pub hypotheses: Vec<Flag>,
    pub conclusions: Vec<Flag>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn new(
        theorem: TheoremId,
        hypotheses: Vec<Flag>,
        conclusions: Vec<Flag>,
        notes: Vec<String>,
    ) -> Self {
        let verdict = if !hypotheses.iter().all(|f| f.passed) {
            Verdict::HypothesesNotMet
        } else if conclusions.iter().all(|f| f.passed) {
            Verdict::ConsistentWithPaper
        } else {
            Verdict::Violation
        };
        AuditReport {
            theorem,
            hypotheses,
            conclusions,
            verdict,
            notes,
        }
    }

    pub fn hypothesis(&self, name: &str) -> Option<&Flag> {
        self.hypotheses.iter().find(|f| f.name == name)
    }

    pub fn conclusion(&self, name: &str) -> Option<&Flag> {
        self.conclusions.iter().find(|f| f.name == name)
    }
}

/// Everything the pointwise checks need, sampled once.
pub(crate) struct Sampled<'a> {
    pub spec: &'a SolitonSpec,
    pub grid: Grid,
    pub n: f64,
    pub d: f64,
    pub f: Jet,
    pub lam: Jet,
    pub curv: Vec<CurvatureSample>,
    /// `g'/g`; infinite at a pole sample.
    pub lg: Vec<f64>,
}

impl<'a> Sampled<'a> {
    pub fn new(spec: &'a SolitonSpec) -> Result<Self> {
        let p = &spec.profile;
        let g = p.g_jet();
        Ok(Sampled {
            spec,
            grid: p.grid(),
            n: p.n() as f64,
            d: p.d() as f64,
            f: spec.f_jet()?,
            lam: spec.lambda_jet()?,
            curv: p.curvature_samples()?,
            lg: (0..g.len()).map(|i| g.d1[i] / g.v[i]).collect(),
        })
    }

    pub fn column(&self, field: impl Fn(&CurvatureSample) -> f64) -> Vec<f64> {
        self.curv.iter().map(field).collect()
    }

    /// Wraps pointwise values; a non-finite pole sample gets its limit.
    pub fn grid_fn(&self, mut v: Vec<f64>) -> Result<GridFn> {
        self.spec.profile.fill_pole_lenient(&mut v);
        GridFn::on(self.grid, v)
    }
}
