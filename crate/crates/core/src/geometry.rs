//! Curvature and weighted calculus on warped products `I ×_g Σ^d`, `d = n − 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{integrate_fn, unit_sphere_area, ClosedForm, Grid, GridFn, Jet, Radial};

/// Relative disagreement between the two Richardson estimates that is still
/// accepted as a converged pole limit.
const POLE_AGREEMENT: f64 = 1e-4;

/// Tolerance on the pole conditions `g(t0) = 0`, `g'(t0) = 1`.
const POLE_TOL: f64 = 1e-10;

/// Curvature scalars at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub t: f64,
    /// Ricci eigenvalue on the fiber directions.
    pub rho_fib: f64,
    /// Ricci eigenvalue on the radial direction.
    pub rho_rad: f64,
    pub s: f64,
    pub ric_norm2: f64,
    pub tau_f: f64,
    pub tau_r: f64,
    pub t_norm2: f64,
    pub tr_t3: f64,
}

impl CurvatureSample {
    /// Builds the sample from `g, g', g''` at `t`.
    pub fn from_warp(n: usize, rho_sigma: f64, t: f64, g: f64, g1: f64, g2: f64) -> Self {
        let d = (n - 1) as f64;
        let rho_fib = -(d - 1.0) * (g1 / g).powi(2) - g2 / g + rho_sigma / (g * g);
        let rho_rad = -d * g2 / g;
        Self::from_eigenvalues(n, t, rho_fib, rho_rad)
    }

    pub fn from_eigenvalues(n: usize, t: f64, rho_fib: f64, rho_rad: f64) -> Self {
        let d = (n - 1) as f64;
        let s = d * rho_fib + rho_rad;
        let tau_f = rho_fib - s / n as f64;
        let tau_r = rho_rad - s / n as f64;
        CurvatureSample {
            t,
            rho_fib,
            rho_rad,
            s,
            ric_norm2: d * rho_fib * rho_fib + rho_rad * rho_rad,
            tau_f,
            tau_r,
            t_norm2: d * tau_f * tau_f + tau_r * tau_r,
            tr_t3: d * tau_f.powi(3) + tau_r.powi(3),
        }
    }

    fn fields(&self) -> [f64; 8] {
        [
            self.rho_fib,
            self.rho_rad,
            self.s,
            self.ric_norm2,
            self.tau_f,
            self.tau_r,
            self.t_norm2,
            self.tr_t3,
        ]
    }
}

/// Limit at the pole from samples at `5h, 10h, 20h` (error assumed `O(t²)`).
pub(crate) fn pole_limit(t0: f64, q5: f64, q10: f64, q20: f64) -> Result<f64> {
    let r1 = (4.0 * q5 - q10) / 3.0;
    let r2 = (4.0 * q10 - q20) / 3.0;
    if !(r1.is_finite() && r2.is_finite()) || (r1 - r2).abs() > POLE_AGREEMENT * (1.0 + r1.abs())
    {
        return Err(Error::PoleSingularity { t: t0 });
    }
    Ok(r1)
}

/// A warped product `I ×_g Σ^d` with Einstein fiber `Ric_Σ = ρ_Σ⟨,⟩_Σ`.
#[derive(Debug, Clone)]
pub struct WarpProfile {
    n: usize,
    rho_sigma: f64,
    fiber_constant_curvature: bool,
    g: ClosedForm,
    grid: Grid,
    pole: bool,
    fiber_volume: f64,
    gj: Jet,
}

impl WarpProfile {
    /// A warped product with `g > 0` on the whole closed interval.
    pub fn new(
        n: usize,
        rho_sigma: f64,
        fiber_constant_curvature: bool,
        g: ClosedForm,
        grid: Grid,
        fiber_volume: f64,
    ) -> Result<Self> {
        check_dims(n, rho_sigma)?;
        if !(fiber_volume > 0.0 && fiber_volume.is_finite()) {
            return Err(Error::param("fiber_volume", "must be positive"));
        }
        let gj = g.jet(grid)?;
        check_positive(&gj, grid, 0)?;
        Ok(WarpProfile {
            n,
            rho_sigma,
            fiber_constant_curvature,
            g,
            grid,
            pole: false,
            fiber_volume,
            gj,
        })
    }

    /// A model manifold: pole at `t0` with unit round sphere fiber.
    pub fn model(n: usize, g: ClosedForm, grid: Grid) -> Result<Self> {
        let d = n.saturating_sub(1);
        check_dims(n, d as f64 - 1.0)?;
        if grid.n < 41 {
            return Err(Error::InvalidGrid(
                "pole models need at least 41 samples".into(),
            ));
        }
        let gj = g.jet(grid)?;
        if gj.v[0].abs() > POLE_TOL || (gj.d1[0] - 1.0).abs() > POLE_TOL {
            return Err(Error::InvalidWarp(format!(
                "a pole needs g(t0) = 0 and g'(t0) = 1, found {} and {}",
                gj.v[0], gj.d1[0]
            )));
        }
        check_positive(&gj, grid, 1)?;
        Ok(WarpProfile {
            n,
            rho_sigma: d as f64 - 1.0,
            fiber_constant_curvature: true,
            g,
            grid,
            pole: true,
            fiber_volume: unit_sphere_area(d),
            gj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.n - 1
    }

    pub fn rho_sigma(&self) -> f64 {
        self.rho_sigma
    }

    /// The constant `a = −ρ_Σ/(d−1)` of the fiber normalisation (undefined for d = 1).
    pub fn fiber_constant_a(&self) -> Option<f64> {
        (self.d() > 1).then(|| -self.rho_sigma / (self.d() as f64 - 1.0))
    }

    pub fn fiber_constant_curvature(&self) -> bool {
        self.fiber_constant_curvature
    }

    /// Conformally flat: space-form fiber in dimension at least 3.
    pub fn conformally_flat(&self) -> bool {
        self.fiber_constant_curvature && self.n >= 3
    }

    pub fn g(&self) -> &ClosedForm {
        &self.g
    }

    pub fn g_jet(&self) -> &Jet {
        &self.gj
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn pole(&self) -> bool {
        self.pole
    }

    pub fn fiber_volume(&self) -> f64 {
        self.fiber_volume
    }

    fn require_model(&self) -> Result<()> {
        if self.pole {
            Ok(())
        } else {
            Err(Error::NotAModel)
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if self.grid.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                t,
                t0: self.grid.t0,
                t1: self.grid.t1,
            })
        }
    }

    fn at_pole(&self, t: f64) -> bool {
        self.pole && (t - self.grid.t0).abs() <= 1e-12 * (self.grid.t1 - self.grid.t0)
    }

    /// Interior probe points used for pole limits.
    fn pole_probes(&self) -> [f64; 3] {
        let h = self.grid.spacing();
        let t0 = self.grid.t0;
        [t0 + 5.0 * h, t0 + 10.0 * h, t0 + 20.0 * h]
    }

    /// Curvature at `t`; at a pole, the one-sided limit.
    pub fn curvature_at(&self, t: f64) -> Result<CurvatureSample> {
        self.check_domain(t)?;
        if self.at_pole(t) {
            let [a, b, c] = self.pole_probes();
            let (sa, sb, sc) = (self.curvature_raw(a)?, self.curvature_raw(b)?, self.curvature_raw(c)?);
            let (fa, fb, fc) = (sa.fields(), sb.fields(), sc.fields());
            let mut lim = [0.0; 8];
            for i in 0..8 {
                lim[i] = pole_limit(t, fa[i], fb[i], fc[i])?;
            }
            let mut out = CurvatureSample::from_eigenvalues(self.n, t, lim[0], lim[1]);
            out.t = t;
            return Ok(out);
        }
        self.curvature_raw(t)
    }

    fn curvature_raw(&self, t: f64) -> Result<CurvatureSample> {
        let [g, g1, g2] = self.g.derivs_at(t)?;
        Ok(CurvatureSample::from_warp(self.n, self.rho_sigma, t, g, g1, g2))
    }

    /// Curvature on every grid sample (pole sample filled with its limit).
    pub fn curvature_samples(&self) -> Result<Vec<CurvatureSample>> {
        let gj = &self.gj;
        let mut out: Vec<CurvatureSample> = self
            .grid
            .points()
            .enumerate()
            .map(|(i, t)| {
                CurvatureSample::from_warp(self.n, self.rho_sigma, t, gj.v[i], gj.d1[i], gj.d2[i])
            })
            .collect();
        if self.pole {
            let (a, b, c) = (out[5].fields(), out[10].fields(), out[20].fields());
            let mut lim = [0.0; 8];
            for i in 0..8 {
                lim[i] = pole_limit(self.grid.t0, a[i], b[i], c[i])?;
            }
            out[0] = CurvatureSample::from_eigenvalues(self.n, self.grid.t0, lim[0], lim[1]);
        }
        Ok(out)
    }

    /// `g'/g` on the grid; `None` at the pole sample.
    pub fn log_derivative(&self) -> Vec<Option<f64>> {
        (0..self.grid.n)
            .map(|i| {
                if self.pole && i == 0 {
                    None
                } else {
                    Some(self.gj.d1[i] / self.gj.v[i])
                }
            })
            .collect()
    }

    /// Eigenvalues `(u' g'/g, u'')` of `Hess u` for radial `u`.
    pub fn radial_hessian(&self, u: &dyn Radial, t: f64) -> Result<(f64, f64)> {
        self.check_domain(t)?;
        let raw = |t: f64| -> Result<(f64, f64)> {
            let [_, u1, u2] = u.derivs_at(t)?;
            let [g, g1, _] = self.g.derivs_at(t)?;
            Ok((u1 * g1 / g, u2))
        };
        if self.at_pole(t) {
            let [a, b, c] = self.pole_probes();
            let (pa, pb, pc) = (raw(a)?, raw(b)?, raw(c)?);
            return Ok((
                pole_limit(t, pa.0, pb.0, pc.0)?,
                pole_limit(t, pa.1, pb.1, pc.1)?,
            ));
        }
        raw(t)
    }

    /// `Δ_f u = u'' + d (g'/g) u' − f' u'` on the grid. The pole sample
    /// holds an extrapolated value and is never used by residual norms.
    pub fn f_laplacian(&self, f: &dyn Radial, u: &dyn Radial) -> Result<GridFn> {
        let fj = f.jet(self.grid)?;
        let uj = u.jet(self.grid)?;
        Ok(self.f_laplacian_jets(&fj, &uj))
    }

    pub(crate) fn f_laplacian_jets(&self, fj: &Jet, uj: &Jet) -> GridFn {
        let d = self.d() as f64;
        let mut v: Vec<f64> = (0..self.grid.n)
            .map(|i| {
                let lg = self.gj.d1[i] / self.gj.v[i];
                uj.d2[i] + d * lg * uj.d1[i] - fj.d1[i] * uj.d1[i]
            })
            .collect();
        self.fill_pole_lenient(&mut v);
        GridFn::on(self.grid, v).expect("finite values on the profile grid")
    }

    /// Replaces the pole sample with a Richardson limit (or the nearest
    /// finite neighbour if that is not available).
    pub(crate) fn fill_pole_lenient(&self, v: &mut [f64]) {
        if !self.pole {
            return;
        }
        let lim = (4.0 * v[5] - v[10]) / 3.0;
        v[0] = if lim.is_finite() { lim } else { v[1] };
    }

    /// `vol_f(∂B_r) = |Σ| g(r)^d e^{−f(r)}` about the pole.
    pub fn weighted_sphere_volume(&self, f: &dyn Radial, r: f64) -> Result<f64> {
        self.require_model()?;
        self.check_domain(r)?;
        self.sphere_density(f, r)
    }

    fn sphere_density(&self, f: &dyn Radial, r: f64) -> Result<f64> {
        let g = self.g.value(r)?;
        Ok(self.fiber_volume * g.powi(self.d() as i32) * (-f.eval(r)?).exp())
    }

    /// `vol_f(B_r)` about the pole, by composite Simpson.
    pub fn weighted_ball_volume(&self, f: &dyn Radial, r: f64) -> Result<f64> {
        self.require_model()?;
        self.check_domain(r)?;
        let r = r.min(self.grid.t1);
        let nodes = self.quadrature_nodes(r);
        let err = std::cell::RefCell::new(None);
        let v = integrate_fn(self.grid.t0, r, nodes, |t| {
            self.sphere_density(f, t.min(self.grid.t1)).unwrap_or_else(|e| {
                err.borrow_mut().get_or_insert(e);
                0.0
            })
        });
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// Simpson node count for `[t0, r]`: at least the grid density.
    pub(crate) fn quadrature_nodes(&self, r: f64) -> usize {
        let frac = (r - self.grid.t0) / (self.grid.t1 - self.grid.t0);
        ((frac * 4.0 * self.grid.n as f64) as usize).max(401)
    }
}

fn check_dims(n: usize, rho_sigma: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::param("n", format!("dimension must be at least 2, got {n}")));
    }
    if !rho_sigma.is_finite() {
        return Err(Error::param("rho_sigma", "must be finite"));
    }
    if n == 2 && rho_sigma != 0.0 {
        return Err(Error::param(
            "rho_sigma",
            "a one-dimensional fiber has zero Ricci curvature",
        ));
    }
    Ok(())
}

fn check_positive(gj: &Jet, grid: Grid, skip: usize) -> Result<()> {
    for i in skip..grid.n {
        if !(gj.v[i] > 0.0) {
            return Err(Error::InvalidWarp(format!(
                "g must be positive, found {} at t = {}",
                gj.v[i],
                grid.point(i)
            )));
        }
    }
    Ok(())
}
