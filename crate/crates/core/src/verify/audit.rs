use serde::{Deserialize, Serialize};

use super::{AuditReport, Flag, Sampled, TheoremId};
use crate::error::{Error, Result};
use crate::factory::SolitonSpec;

/// Slack for pointwise sign hypotheses.
const SIGN_TOL: f64 = 1e-10;
/// Slack for the extremal-value conclusions.
const BOUND_TOL: f64 = 1e-8;
/// Slack for the one-sided hypothesis on `⟨Hess λ, T⟩`.
const ONE_SIDED_TOL: f64 = 1e-5;

/// Constants of the triviality theorem for expanding almost solitons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditParamsA {
    pub alpha: f64,
    pub sigma: f64,
    pub mu: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

impl AuditParamsA {
    /// Upper end of the admissible `μ` range.
    pub fn mu_max(&self) -> f64 {
        if self.sigma >= self.alpha {
            1.0 - 1.5 * self.sigma
        } else {
            1.0 - self.sigma - 0.5 * self.alpha
        }
    }

    pub fn admissible(&self) -> bool {
        self.alpha > -2.0
            && (0.0..=2.0 / 3.0).contains(&self.sigma)
            && (0.0f64).min(-self.alpha) <= self.mu
            && self.mu <= self.mu_max()
            && self.b >= self.a
            && self.a > 0.0
    }
}

pub fn audit_theorem(
    s: &SolitonSpec,
    theorem: TheoremId,
    params: Option<&AuditParamsA>,
) -> Result<AuditReport> {
    let sm = Sampled::new(s)?;
    match theorem {
        TheoremId::A => {
            let p = params.ok_or_else(|| {
                Error::MissingParams("alpha, sigma, mu, A, B are required for theorem A".into())
            })?;
            audit_a(&sm, p)
        }
        TheoremId::B => Ok(audit_b(&sm)),
        TheoremId::D => Ok(audit_d(&sm)),
        TheoremId::OY => Err(Error::param(
            "theorem",
            "the Omori-Yau conditions are checked on G, not on a spec",
        )),
    }
}

fn max_of(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(f64::INFINITY, f64::min)
}

/// Indices that carry genuine pointwise values (the pole sample is a limit).
fn regular(sm: &Sampled) -> std::ops::Range<usize> {
    let start = usize::from(sm.spec.profile.pole());
    start..sm.grid.n
}

/// Least-squares slope of `ln q` against `ln r` over the final third.
fn growth_exponent(sm: &Sampled, q: &[f64]) -> f64 {
    let n = sm.grid.n;
    let pts: Vec<(f64, f64)> = (2 * n / 3..n)
        .filter_map(|i| {
            let r = sm.grid.point(i) - sm.grid.t0;
            (r > 0.0).then(|| (r.ln(), q[i].max(1e-300).ln()))
        })
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in &pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

fn audit_a(sm: &Sampled, p: &AuditParamsA) -> Result<AuditReport> {
    let lam = &sm.lam.v;
    let fp = &sm.f.d1;
    let idx = regular(sm);

    let admissible = Flag::new("parameters admissible", p.admissible(), p.mu_max());

    let lam_max = max_of(idx.clone().map(|i| lam[i]));
    let expanding = Flag::new("expanding", lam_max < 0.0, lam_max);

    let q: Vec<f64> = fp.iter().map(|x| x * x).collect();
    let slope = growth_exponent(sm, &q);
    let growth_ok = if p.sigma > 0.0 { slope < p.sigma } else { slope <= 0.05 };
    let growth = Flag::new("gradient growth exponent", growth_ok, slope);

    let m1 = sm.n - 1.0;
    let margin = min_of(idx.clone().map(|i| {
        let r = sm.grid.point(i) - sm.grid.t0;
        let w = 1.0 + r * r;
        let lower = -m1 * p.b * p.b * w.powf(0.5 * p.alpha);
        let upper = -m1 * p.a * p.a * w.powf(-0.5 * p.mu);
        (lam[i] - lower).min(upper - lam[i])
    }));
    let bounds = Flag::new("lambda between power bounds", margin >= 0.0, margin);

    let cross = max_of(idx.clone().map(|i| sm.lam.d1[i] * fp[i]));
    let sign = Flag::new(
        "grad f . grad lambda <= 0 or n = 2",
        sm.n == 2.0 || cross <= SIGN_TOL,
        cross,
    );

    let sup_fp = max_of(fp.iter().map(|x| x.abs()));
    let trivial = Flag::new("trivial", sup_fp < BOUND_TOL, sup_fp);

    Ok(AuditReport::new(
        TheoremId::A,
        vec![admissible, expanding, growth, bounds, sign],
        vec![trivial],
        vec!["gradient growth is a log-log fit over the final third of the grid".into()],
    ))
}

fn audit_b(sm: &Sampled) -> AuditReport {
    let idx = regular(sm);
    let lam = &sm.lam;
    let lap_max = max_of(
        idx.clone()
            .map(|i| lam.d2[i] + sm.d * sm.lg[i] * lam.d1[i]),
    );
    let superharmonic = Flag::new("laplacian of lambda <= 0", lap_max <= SIGN_TOL, lap_max);

    let s_min = min_of(sm.curv.iter().map(|c| c.s));
    let lam_min = min_of(lam.v.iter().copied());
    let lam_max = max_of(lam.v.iter().copied());
    let n = sm.n;

    let nonpos = lam.v.iter().all(|&l| l <= SIGN_TOL);
    let nonneg = lam.v.iter().all(|&l| l >= -SIGN_TOL);
    let mut hyps = vec![superharmonic];
    let mut concl = Vec::new();
    let mut notes = vec![format!(
        "S_* = {s_min:e}, lambda_* = {lam_min:e}, lambda^* = {lam_max:e} over the sampled window"
    )];
    match (nonpos, nonneg) {
        (true, true) => {
            notes.push("case (ii): steady".into());
            hyps.push(Flag::new("steady", true, lam_max));
            concl.push(Flag::new("S_* = 0", s_min.abs() <= BOUND_TOL, s_min));
        }
        (true, false) => {
            notes.push("case (i): expanding".into());
            hyps.push(Flag::new("lambda_* <= lambda <= 0, not identically 0", true, lam_min));
            concl.push(Flag::new(
                "n lambda_* <= S_*",
                n * lam_min <= s_min + BOUND_TOL,
                s_min - n * lam_min,
            ));
            // the argument yields S_* <= 0 only; the Gaussian expander has S = 0
            concl.push(Flag::new("S_* <= 0", s_min <= BOUND_TOL, s_min));
            if s_min >= -BOUND_TOL {
                notes.push("S_* = 0: the strict bound S_* < 0 is not attained".into());
            }
        }
        (false, true) => {
            notes.push("case (iii): shrinking".into());
            hyps.push(Flag::new("0 <= lambda <= lambda^*, not identically 0", true, lam_max));
            concl.push(Flag::new("0 <= S_*", s_min >= -BOUND_TOL, s_min));
            concl.push(Flag::new(
                "S_* <= n lambda^*",
                s_min <= n * lam_max + BOUND_TOL,
                n * lam_max - s_min,
            ));
        }
        (false, false) => {
            notes.push("lambda changes sign; no case applies".into());
            hyps.push(Flag::new("lambda has a sign", false, lam_min));
        }
    }
    AuditReport::new(TheoremId::B, hyps, concl, notes)
}

fn audit_d(sm: &Sampled) -> AuditReport {
    let idx = regular(sm);
    let (n, d) = (sm.n, sm.d);
    let lam = &sm.lam;
    let hess_t = min_of(idx.clone().map(|i| {
        let c = &sm.curv[i];
        d * lam.d1[i] * sm.lg[i] * c.tau_f + lam.d2[i] * c.tau_r
    }));
    let s_max = max_of(sm.curv.iter().map(|c| c.s));
    let lam_min = min_of(lam.v.iter().copied());
    let t_sup = max_of(sm.curv.iter().map(|c| c.t_norm2.max(0.0).sqrt()));

    let hyps = vec![
        Flag::new("n >= 3", n >= 3.0, n),
        Flag::new(
            "conformally flat",
            sm.spec.profile.conformally_flat(),
            f64::NAN,
        ),
        Flag::new("<Hess lambda, T> >= 0", hess_t >= -ONE_SIDED_TOL, hess_t),
        Flag::new("S^* finite", s_max.is_finite(), s_max),
        Flag::new("lambda_* finite", lam_min.is_finite(), lam_min),
    ];
    let root = (n * (n - 1.0)).sqrt();
    let gap = 0.5 * (root * lam_min - s_max * (n - 2.0) / root);
    let einstein = t_sup < BOUND_TOL;
    let concl = vec![Flag::new(
        "Einstein or |T|^* above the gap",
        einstein || t_sup >= gap - BOUND_TOL,
        t_sup - gap,
    )];
    let notes = vec![if einstein {
        format!("Einstein branch: |T|^* = {t_sup:e}")
    } else {
        format!("gap branch: |T|^* = {t_sup:e}, bound = {gap:e}")
    }];
    AuditReport::new(TheoremId::D, hyps, concl, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{build_classified, build_einstein_family, build_gaussian, ClassifiedCase};
    use crate::kernel::{Grid, DEFAULT_SAMPLES};
    use crate::verify::Verdict;

    #[test]
    fn b_on_gaussian_is_case_iii() {
        let s = build_gaussian(1.0, 3, 8.0, DEFAULT_SAMPLES).unwrap();
        let r = audit_theorem(&s, TheoremId::B, None).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithPaper);
        let s_min = r.conclusion("0 <= S_*").unwrap().measured.unwrap();
        assert!(s_min.abs() < 1e-9, "{s_min}");
        assert!(r.conclusion("S_* <= n lambda^*").unwrap().passed);
    }

    #[test]
    fn b_on_gaussian_expander_is_case_i_with_zero_curvature() {
        let s = build_gaussian(-1.0, 3, 6.0, DEFAULT_SAMPLES).unwrap();
        let r = audit_theorem(&s, TheoremId::B, None).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithPaper);
        assert!(r.conclusion("n lambda_* <= S_*").unwrap().passed);
        assert!(r.conclusion("S_* <= 0").unwrap().passed);
        assert!(r.notes.iter().any(|n| n.contains("not attained")));
    }

    #[test]
    fn b_on_hyperbolic_expander_is_strict() {
        let grid = Grid::new(0.0, 3.0, DEFAULT_SAMPLES).unwrap();
        let s = build_classified(ClassifiedCase::SpaceForm { c: 1.0, a: 0.0, b: 0.0 }, 3, grid).unwrap();
        let r = audit_theorem(&s, TheoremId::B, None).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithPaper);
        // S = n λ = −6: the lower bound is attained
        let gap = r.conclusion("n lambda_* <= S_*").unwrap().measured.unwrap();
        assert!(gap.abs() < 1e-8, "{gap}");
        assert!(!r.notes.iter().any(|n| n.contains("not attained")));
    }

    #[test]
    fn b_on_cylinder_is_case_ii() {
        let grid = Grid::new(0.0, 4.0, DEFAULT_SAMPLES).unwrap();
        let s = build_einstein_family(0.0, 1.0, 0.0, 2.0, 0.0, 3, grid).unwrap();
        let r = audit_theorem(&s, TheoremId::B, None).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithPaper);
        assert!(r.conclusion("S_* = 0").unwrap().passed);
    }

    #[test]
    fn a_on_hyperbolic_expander_misses_growth() {
        let grid = Grid::new(0.0, 4.0, DEFAULT_SAMPLES).unwrap();
        let s = build_classified(ClassifiedCase::SpaceForm { c: 1.0, a: -0.5, b: 0.0 }, 4, grid)
            .unwrap();
        let p = AuditParamsA {
            alpha: 0.0,
            sigma: 0.0,
            mu: 0.0,
            a: 0.5,
            b: 2.0,
        };
        let r = audit_theorem(&s, TheoremId::A, Some(&p)).unwrap();
        let growth = r.hypothesis("gradient growth exponent").unwrap();
        assert!(!growth.passed && growth.measured.unwrap() > 2.0 / 3.0);
        assert_eq!(r.verdict, Verdict::HypothesesNotMet);
        assert!(matches!(
            audit_theorem(&s, TheoremId::A, None),
            Err(Error::MissingParams(_))
        ));
    }

    #[test]
    fn a_on_trivial_expander_is_consistent() {
        // hyperbolic space with constant potential: all hypotheses hold
        let grid = Grid::new(0.0, 4.0, DEFAULT_SAMPLES).unwrap();
        let s = build_classified(ClassifiedCase::SpaceForm { c: 1.0, a: 0.0, b: 0.0 }, 3, grid)
            .unwrap();
        let p = AuditParamsA {
            alpha: 0.0,
            sigma: 0.0,
            mu: 0.0,
            a: 1.0,
            b: 1.0,
        };
        let r = audit_theorem(&s, TheoremId::A, Some(&p)).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithPaper, "{r:?}");
    }

    #[test]
    fn d_on_einstein_takes_einstein_branch() {
        let grid = Grid::new(0.0, 2.0, DEFAULT_SAMPLES).unwrap();
        let s = build_einstein_family(1.0, 1.0, 0.0, 1.0, 0.0, 4, grid).unwrap();
        let r = audit_theorem(&s, TheoremId::D, None).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentWithPaper);
        assert!(r.notes[0].starts_with("Einstein"));
    }

    #[test]
    fn admissible_parameters() {
        let ok = AuditParamsA { alpha: 0.0, sigma: 0.5, mu: 0.25, a: 1.0, b: 2.0 };
        assert!(ok.admissible());
        assert!(!AuditParamsA { mu: 0.3, ..ok }.admissible());
        assert!(!AuditParamsA { a: 3.0, ..ok }.admissible());
        assert!(!AuditParamsA { alpha: -2.0, ..ok }.admissible());
    }
}
