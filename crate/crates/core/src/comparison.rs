//! Weighted Laplacian and volume comparison on model manifolds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factory::SolitonSpec;
use crate::kernel::{integrate_fn, solve_linear_ode2_with_derivative, GridFn, Order, Radial};
use crate::verify::{Criterion, ResidualReport};

/// Tolerance of the pointwise Laplacian comparison.
pub const LAPLACIAN_TOL: f64 = 1e-7;
/// Relative slack of the volume comparisons.
pub const VOLUME_REL_TOL: f64 = 1e-6;

/// Comparison data derived from a pole model.
#[derive(Debug, Clone)]
pub struct ComparisonSetup {
    /// Nondecreasing `G` with `Ric_f ≥ −(n−1)G`.
    pub g_bound: GridFn,
    /// Nondecreasing `θ` with `⟨∇r, ∇f⟩ ≥ −θ`.
    pub theta: GridFn,
    /// `h'' = G h`, `h(0) = 0`, `h'(0) = 1`.
    pub h: GridFn,
    pub h_prime: GridFn,
    /// `ω − ξ` once an envelope has been supplied.
    pub omega_tilde: Option<GridFn>,
    /// `|Σ| e^{−f(pole)}`, matching the bound's density to the actual one at the pole.
    pub d_calibration: f64,
}

fn running_max(v: &mut [f64]) {
    let mut m = f64::NEG_INFINITY;
    for x in v.iter_mut() {
        m = m.max(*x);
        *x = m;
    }
}

/// Eigenvalues of `Ric + Hess f` (fiber, radial) on the grid.
pub fn bakry_emery_eigenvalues(s: &SolitonSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = &s.profile;
    let gj = p.g_jet();
    let fj = s.f_jet()?;
    let curv = p.curvature_samples()?;
    let mut fib: Vec<f64> = (0..gj.len())
        .map(|i| curv[i].rho_fib + fj.d1[i] * gj.d1[i] / gj.v[i])
        .collect();
    p.fill_pole_lenient(&mut fib);
    let rad = (0..gj.len()).map(|i| curv[i].rho_rad + fj.d2[i]).collect();
    Ok((fib, rad))
}

pub fn derive_setup(s: &SolitonSpec) -> Result<ComparisonSetup> {
    let p = &s.profile;
    if !p.pole() {
        return Err(Error::NotAModel);
    }
    let grid = p.grid();
    let m1 = (p.n() - 1) as f64;
    let (fib, rad) = bakry_emery_eigenvalues(s)?;
    let mut g: Vec<f64> = fib
        .iter()
        .zip(&rad)
        .map(|(a, b)| (-a.min(*b) / m1).max(0.0))
        .collect();
    running_max(&mut g);
    let mut theta: Vec<f64> = s.f_jet()?.d1.iter().map(|fp| (-fp).max(0.0)).collect();
    running_max(&mut theta);
    let g_bound = GridFn::on(grid, g)?;
    let (h, h_prime) = solve_linear_ode2_with_derivative(&g_bound, 0.0, 1.0)?;
    Ok(ComparisonSetup {
        g_bound,
        theta: GridFn::on(grid, theta)?,
        h,
        h_prime,
        omega_tilde: None,
        d_calibration: p.fiber_volume() * (-s.f.eval(grid.t0)?).exp(),
    })
}

/// `Δ_f r − [(n−1)h'/h + θ]` must stay `≤ 0`.
pub fn laplacian_comparison_check(s: &SolitonSpec, cs: &ComparisonSetup) -> Result<ResidualReport> {
    let p = &s.profile;
    if !p.pole() {
        return Err(Error::NotAModel);
    }
    let gj = p.g_jet();
    let fj = s.f_jet()?;
    let (d, m1) = (p.d() as f64, (p.n() - 1) as f64);
    let mut v: Vec<f64> = (0..gj.len())
        .map(|i| {
            let actual = d * gj.d1[i] / gj.v[i] - fj.d1[i];
            let bound = m1 * cs.h_prime.get(i) / cs.h.get(i) + cs.theta.get(i);
            actual - bound
        })
        .collect();
    p.fill_pole_lenient(&mut v);
    Ok(ResidualReport::new(
        "laplacian_comparison",
        GridFn::on(p.grid(), v)?,
        Criterion::MaxAtMost,
        LAPLACIAN_TOL,
    ))
}

/// An actual weighted volume against its comparison bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeCheck {
    pub r: f64,
    pub actual: f64,
    pub bound: f64,
    pub passed: bool,
}

impl VolumeCheck {
    fn new(r: f64, actual: f64, bound: f64) -> Self {
        VolumeCheck {
            r,
            actual,
            bound,
            passed: actual <= bound * (1.0 + VOLUME_REL_TOL),
        }
    }
}

/// `∫_{t0}^r` of a sampled integrand, read off its running integral.
fn integral_to(integrand: &GridFn, r: f64) -> Result<f64> {
    let grid = integrand.grid();
    integrand
        .integrate_cumulative()
        .value_at(r)
        .ok_or(Error::OutOfDomain {
            t: r,
            t0: grid.t0,
            t1: grid.t1,
        })
}

/// `vol_f(B_r) ≤ D ∫₀^r h^{n−1} e^{∫₀ᵗθ}`.
pub fn volume_bound_check(s: &SolitonSpec, cs: &ComparisonSetup, r: f64) -> Result<VolumeCheck> {
    let p = &s.profile;
    let actual = p.weighted_ball_volume(&s.f, r)?;
    let theta_int = cs.theta.integrate_cumulative();
    let m1 = (p.n() - 1) as i32;
    let integrand = cs.h.zip_with(&theta_int, |h, th| h.powi(m1) * th.exp())?;
    let bound = cs.d_calibration * integral_to(&integrand, r)?;
    Ok(VolumeCheck::new(r, actual, bound))
}

/// Volume bound for potentials squeezed as `ξ ≤ f ≤ ω`, calibrated at `r0`:
/// `vol_f(B_r) ≤ C + B ∫_{r0}^r h^{(n−1)+2ω̃}`, `ω̃ = ω − ξ`.
pub fn volume_bound_omega(
    s: &SolitonSpec,
    cs: &mut ComparisonSetup,
    xi: &GridFn,
    omega: &GridFn,
    r0: f64,
    r: f64,
) -> Result<VolumeCheck> {
    let p = &s.profile;
    let grid = p.grid();
    if xi.grid() != grid || omega.grid() != grid {
        return Err(Error::InvalidGrid("envelope must share the profile grid".into()));
    }
    let fj = s.f_jet()?;
    for i in 0..grid.n {
        let slack = 1e-12 * (1.0 + fj.v[i].abs());
        if xi.get(i) > fj.v[i] + slack || fj.v[i] > omega.get(i) + slack {
            return Err(Error::EnvelopeViolation(format!(
                "xi <= f <= omega fails at t = {}",
                grid.point(i)
            )));
        }
    }
    let ov = omega.values();
    if let Some(i) = (1..grid.n).find(|&i| ov[i] < ov[i - 1] - 1e-12 * (1.0 + ov[i].abs())) {
        return Err(Error::EnvelopeViolation(format!(
            "omega decreases at t = {}",
            grid.point(i)
        )));
    }
    let dxi = xi.derivative(Order::First);
    let dom = omega.derivative(Order::First);
    if let Some(i) = (0..grid.n).find(|&i| dxi.get(i) > dom.get(i) + 1e-8) {
        return Err(Error::EnvelopeViolation(format!(
            "xi' <= omega' fails at t = {}",
            grid.point(i)
        )));
    }
    if !(r0 < r) {
        return Err(Error::param("r", "must exceed the calibration radius r0"));
    }
    let h0 = cs
        .h
        .value_at(r0)
        .ok_or(Error::OutOfDomain { t: r0, t0: grid.t0, t1: grid.t1 })?;
    if h0 < 1.0 {
        return Err(Error::param("r0", format!("needs h(r0) >= 1, found {h0}")));
    }
    let wt = omega.zip_with(xi, |o, x| o - x)?;
    let m1 = (p.n() - 1) as f64;
    let c = p.weighted_ball_volume(&s.f, r0)?;
    let wt0 = wt.value_at(r0).expect("r0 checked above");
    let b = p.weighted_sphere_volume(&s.f, r0)? / h0.powf(m1 + 2.0 * wt0);
    let integrand = cs.h.zip_with(&wt, |h, w| h.max(0.0).powf(m1 + 2.0 * w))?;
    let tail = integral_to(&integrand, r)? - integral_to(&integrand, r0)?;
    let actual = p.weighted_ball_volume(&s.f, r)?;
    cs.omega_tilde = Some(wt);
    Ok(VolumeCheck::new(r, actual, c + b * tail))
}

/// Shape of the sphere-volume bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VolestRegime {
    /// Sphere `C₁e^{−C₂r^p}`, ball `C₃`.
    DecayPower { p: f64 },
    /// Sphere `C₁e^{−C₂ r ln(1+r)}`, ball `C₃`.
    DecayLog,
    /// Sphere `C₁e^{C₂r}`, ball `C₃e^{C₂r}`.
    Exponential,
    /// Sphere `C₁e^{C₂ r ln r}`, ball `C₃e^{C₂ r ln r}/ln r`.
    GrowthLog,
    /// Sphere `C₁e^{C₂r^p}`, ball `C₃e^{C₂r^p}/r^{p−1}`.
    GrowthPower { p: f64 },
}

/// Constants of the sphere and ball bounds under `Ric_f ≥ D(1+r)^{−μ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolestConstants {
    pub d: f64,
    pub mu: f64,
    pub regime: VolestRegime,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `Δ_f r` on `∂B_ε`.
    pub c_eps: f64,
    pub eps: f64,
    pub r0: f64,
    /// Whether `Ric_f ≥ D(1+r)^{−μ}` holds on the sampled window.
    pub hypothesis_holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolestBound {
    pub sphere_bound: f64,
    pub ball_bound: f64,
}

/// Radius where the lower curvature bound starts being integrated.
pub const VOLEST_EPS: f64 = 1.0;
/// Radius where the bounds are calibrated.
pub const VOLEST_R0: f64 = 2.0;

/// Level-set volume `|Σ| g^d e^{−f}` and its integral from the left end.
fn level_volume(s: &SolitonSpec, t: f64) -> Result<f64> {
    let p = &s.profile;
    Ok(p.fiber_volume() * p.g().value(t)?.powi(p.d() as i32) * (-s.f.eval(t)?).exp())
}

fn level_ball(s: &SolitonSpec, r: f64) -> Result<f64> {
    let p = &s.profile;
    let err = std::cell::RefCell::new(None);
    let v = integrate_fn(p.grid().t0, r, 8001, |t| {
        level_volume(s, t).unwrap_or_else(|e| {
            err.borrow_mut().get_or_insert(e);
            0.0
        })
    });
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// `∫_{a}^{b} Φ`, `Φ(t) = ∫_ε^t (1+s)^{−μ} ds`.
fn phi_integral(mu: f64, eps: f64, a: f64, b: f64) -> f64 {
    let prim = |t: f64| -> f64 {
        if mu == 1.0 {
            (1.0 + t) * (1.0 + t).ln() - (1.0 + t) - t * (1.0 + eps).ln()
        } else if mu == 2.0 {
            t / (1.0 + eps) - (1.0 + t).ln()
        } else {
            let q = 1.0 - mu;
            (1.0 + t).powf(2.0 - mu) / (q * (2.0 - mu)) - (1.0 + eps).powf(q) * t / q
        }
    };
    prim(b) - prim(a)
}

fn phi(mu: f64, eps: f64, t: f64) -> f64 {
    if mu == 1.0 {
        ((1.0 + t) / (1.0 + eps)).ln()
    } else {
        ((1.0 + t).powf(1.0 - mu) - (1.0 + eps).powf(1.0 - mu)) / (1.0 - mu)
    }
}

/// `C₁` for a decaying regime: `V(r0)·exp(sup_{[r0, r*]} (E + C₂φ))`, with a
/// Lipschitz margin for the sampling.
fn decay_c1(v0: f64, r0: f64, r_star: f64, psi: impl Fn(f64) -> f64, lipschitz: f64) -> f64 {
    let top = r_star.max(r0);
    let samples = 20001;
    let step = (top - r0) / (samples - 1) as f64;
    let sup = (0..samples)
        .map(|i| psi(r0 + i as f64 * step))
        .fold(f64::NEG_INFINITY, f64::max);
    v0 * (sup + step * lipschitz + 1e-9).exp()
}

/// Computes the case-table constants from the spec's data at `ε` and `r0`.
pub fn volest_constants(s: &SolitonSpec, d: f64, mu: f64) -> Result<VolestConstants> {
    if !(d.is_finite() && mu.is_finite()) {
        return Err(Error::param("D, mu", "must be finite"));
    }
    if mu < 0.0 {
        return Err(Error::InvalidRegime(format!("mu must be nonnegative, got {mu}")));
    }
    if d > 0.0 && mu > 1.0 {
        return Err(Error::InvalidRegime(
            "positive D with mu > 1 is outside the case table".into(),
        ));
    }
    let (eps, r0) = (VOLEST_EPS, VOLEST_R0);
    let p = &s.profile;
    let grid = p.grid();
    if grid.t0 > 0.0 || grid.t1 < r0 {
        return Err(Error::InvalidGrid(format!(
            "the window must contain [0, {r0}] for the calibration"
        )));
    }
    let [g, g1, _] = p.g().derivs_at(eps)?;
    let [_, f1, _] = s.f.derivs_at(eps)?;
    let c_eps = p.d() as f64 * g1 / g - f1;
    let cp = c_eps.max(0.0);
    let v0 = level_volume(s, r0)?;
    let b0 = level_ball(s, r0)?;

    let (fib, rad) = bakry_emery_eigenvalues(s)?;
    let start = usize::from(p.pole());
    let hypothesis_holds = (start..grid.n).all(|i| {
        let r = grid.point(i);
        let lower = d * (1.0 + r).powf(-mu);
        fib[i].min(rad[i]) >= lower - 1e-8
    });

    // exact exponent of the sphere volume relative to r0
    let e = |r: f64| c_eps * (r - r0) - d * phi_integral(mu, eps, r0, r);
    let (regime, c1, c2, c3) = if d > 0.0 && mu < 1.0 {
        let p_exp = 2.0 - mu;
        let q = 1.0 - mu;
        let c2 = d / (2.0 * p_exp * q);
        let k = 2.0 * q * (cp + d * (1.0 + eps).powf(q) / q) / d;
        let r_star = k.powf(1.0 / q);
        let lip = c_eps.abs() + d * phi(mu, eps, r_star.max(r0)) + c2 * p_exp * r_star.max(r0).powf(p_exp - 1.0);
        let c1 = decay_c1(v0, r0, r_star, |r| e(r) + c2 * r.powf(p_exp), lip);
        let c3 = b0 + c1 * (-c2 * r0.powf(p_exp)).exp() / (c2 * p_exp * r0.powf(p_exp - 1.0));
        (VolestRegime::DecayPower { p: p_exp }, c1, c2, c3)
    } else if d > 0.0 {
        // mu == 1
        let c2 = 0.5 * d;
        let r_star = (2.0 * (cp + d * (1.0 + eps).ln()) / d + 1.0).exp() - 1.0;
        let top = r_star.max(r0);
        let lip = c_eps.abs() + d * phi(mu, eps, top) + c2 * ((1.0 + top).ln() + 1.0);
        let c1 = decay_c1(v0, r0, r_star, |r| e(r) + c2 * r * (1.0 + r).ln(), lip);
        let c3 = b0 + c1 * (-c2 * r0 * (1.0 + r0).ln()).exp() / (c2 * (1.0 + r0).ln());
        (VolestRegime::DecayLog, c1, c2, c3)
    } else if d == 0.0 {
        let kappa = c_eps.max(1.0);
        let c1 = v0 * (-kappa * r0).exp();
        let c3 = b0 * (-kappa * r0).exp() + c1 / kappa;
        (VolestRegime::Exponential, c1, kappa, c3)
    } else {
        let delta = -d;
        if mu > 1.0 {
            let c2 = cp + delta * (1.0 + eps).powf(1.0 - mu) / (mu - 1.0);
            let c1 = v0 * (-c2 * r0).exp();
            let c3 = b0 * (-c2 * r0).exp() + c1 / c2;
            (VolestRegime::Exponential, c1, c2, c3)
        } else if mu == 1.0 {
            let l = r0.ln();
            let floor = 1.0 / (r0 * l * l);
            let c2 = delta.max(cp + 0.5 * delta).max(2.0 * floor);
            let c1 = v0 * (-c2 * r0 * l).exp();
            let psi0 = (c2 * r0 * l).exp() / l;
            let c3 = b0 / psi0 + c1 / (c2 - floor);
            (VolestRegime::GrowthLog, c1, c2, c3)
        } else {
            let p_exp = 2.0 - mu;
            let q = 1.0 - mu;
            let c2 = ((1.5 * delta / q + cp / r0.powf(q)) / p_exp)
                .max(2.0 * (p_exp - 1.0) / (p_exp * r0.powf(p_exp)));
            let c1 = v0 * (-c2 * r0.powf(p_exp)).exp();
            let psi0 = r0.powf(mu - 1.0) * (c2 * r0.powf(p_exp)).exp();
            let c3 = b0 / psi0 + c1 / (c2 * p_exp - (p_exp - 1.0) * r0.powf(-p_exp));
            (VolestRegime::GrowthPower { p: p_exp }, c1, c2, c3)
        }
    };
    Ok(VolestConstants {
        d,
        mu,
        regime,
        c1,
        c2,
        c3,
        c_eps,
        eps,
        r0,
        hypothesis_holds,
    })
}

impl VolestConstants {
    /// Sphere and ball bounds at `r ≥ r0`.
    pub fn bound(&self, r: f64) -> Result<VolestBound> {
        if !(r >= self.r0) {
            return Err(Error::param("r", format!("must be at least {}", self.r0)));
        }
        let (c1, c2, c3) = (self.c1, self.c2, self.c3);
        let (sphere, ball) = match self.regime {
            VolestRegime::DecayPower { p } => (c1 * (-c2 * r.powf(p)).exp(), c3),
            VolestRegime::DecayLog => (c1 * (-c2 * r * (1.0 + r).ln()).exp(), c3),
            VolestRegime::Exponential => {
                let e = (c2 * r).exp();
                (c1 * e, c3 * e)
            }
            VolestRegime::GrowthLog => {
                let e = (c2 * r * r.ln()).exp();
                (c1 * e, c3 * e / r.ln())
            }
            VolestRegime::GrowthPower { p } => {
                let e = (c2 * r.powf(p)).exp();
                (c1 * e, c3 * e / r.powf(p - 1.0))
            }
        };
        Ok(VolestBound {
            sphere_bound: sphere,
            ball_bound: ball,
        })
    }
}

/// Evaluates the bounds for `Ric_f ≥ D(1+r)^{−μ}` at `r`.
pub fn volest_bound(constants: &VolestConstants, r: f64) -> Result<VolestBound> {
    constants.bound(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParabolicVerdict {
    LikelyParabolic,
    LikelyNonParabolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParabolicTest {
    /// `∫₂^T dt / vol_f(∂B_t)` at `T = r_max/4, r_max/2, r_max`.
    pub integral_growth: [f64; 3],
    pub verdict: ParabolicVerdict,
}

/// Divergence heuristic for `∫ dt / vol_f(∂B_t)`: still diverging if the
/// last half contributes more than a quarter of the total.
pub fn f_parabolic_test(s: &SolitonSpec, r_max: f64) -> Result<ParabolicTest> {
    let p = &s.profile;
    if !p.pole() {
        return Err(Error::NotAModel);
    }
    if !(r_max > 8.0) {
        return Err(Error::param("r_max", "must exceed 8 so that r_max/4 > 2"));
    }
    let grid = p.grid();
    if r_max > grid.t1 {
        return Err(Error::OutOfDomain {
            t: r_max,
            t0: grid.t0,
            t1: grid.t1,
        });
    }
    let partial = |t: f64| -> Result<f64> {
        let err = std::cell::RefCell::new(None);
        let v = integrate_fn(2.0, t, 8001, |x| match p.weighted_sphere_volume(&s.f, x) {
            Ok(v) => 1.0 / v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        });
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    };
    let growth = [partial(0.25 * r_max)?, partial(0.5 * r_max)?, partial(r_max)?];
    let verdict = if growth[2] - growth[1] > 0.25 * growth[2] {
        ParabolicVerdict::LikelyParabolic
    } else {
        ParabolicVerdict::LikelyNonParabolic
    };
    Ok(ParabolicTest {
        integral_growth: growth,
        verdict,
    })
}

/// `(1/μ₀)[2F + √(4F² + π²(n−1)c)]`.
pub fn diameter_bound(mu0: f64, f_bound: f64, c: f64, n: usize) -> Result<f64> {
    if !(mu0 > 0.0) {
        return Err(Error::param("mu0", "must be positive"));
    }
    let rad = 4.0 * f_bound * f_bound + std::f64::consts::PI.powi(2) * (n as f64 - 1.0) * c;
    if rad < 0.0 {
        return Err(Error::NegativeRadicand(rad));
    }
    Ok((2.0 * f_bound + rad.sqrt()) / mu0)
}
