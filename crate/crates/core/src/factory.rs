//! Constructors for the explicit almost-soliton families.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::WarpProfile;
use crate::kernel::{unit_sphere_area, ClosedForm, Grid, GridFn, Jet, Radial};

/// Residual tolerance for families with analytic derivatives.
pub const CLOSED_FORM_TOL: f64 = 1e-8;
/// Residual tolerance for quadrature-built families.
pub const QUADRATURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    EinsteinWarped,
    GeneralWarped,
    ClassifiedFlat,
    ClassifiedSpaceForm,
    ClassifiedHyperbolicWarped,
    Gaussian,
    Custom,
}

/// A warped product with potential `f` and soliton function `λ`.
#[derive(Debug, Clone)]
pub struct SolitonSpec {
    pub profile: WarpProfile,
    pub f: ClosedForm,
    pub lambda: ClosedForm,
    pub family: Family,
    pub params: BTreeMap<String, f64>,
    /// Advertised bound on the defining-equation residual.
    pub tolerance: f64,
}

impl SolitonSpec {
    pub fn grid(&self) -> Grid {
        self.profile.grid()
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn f_jet(&self) -> Result<Jet> {
        self.f.jet(self.grid())
    }

    pub fn lambda_jet(&self) -> Result<Jet> {
        self.lambda.jet(self.grid())
    }

    /// Shifts `λ` by a constant, producing a spec that is no longer a soliton.
    pub fn with_lambda_offset(mut self, offset: f64) -> Self {
        if offset != 0.0 {
            self.lambda = self.lambda.plus(ClosedForm::constant(offset));
            self.params.insert("lambda_offset".into(), offset);
        }
        self
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn require_finite(pairs: &[(&str, f64)]) -> Result<()> {
    for (k, v) in pairs {
        if !v.is_finite() {
            return Err(Error::param(k, "must be finite"));
        }
    }
    Ok(())
}

fn require_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::param("n", format!("must be at least {min}, got {n}")))
    } else {
        Ok(())
    }
}

/// Volume of a round `d`-sphere with Ricci constant `ρ` (nominal 1 when
/// the fiber is not positively curved and its size is unspecified).
fn fiber_volume(d: usize, rho: f64) -> f64 {
    if rho > 0.0 && d > 1 {
        let radius = ((d as f64 - 1.0) / rho).sqrt();
        unit_sphere_area(d) * radius.powi(d as i32)
    } else {
        1.0
    }
}

/// A pole model when `g` vanishes at the left endpoint, otherwise a plain
/// warped product.
fn profile_for(n: usize, rho_sigma: f64, g: ClosedForm, grid: Grid) -> Result<WarpProfile> {
    let g0 = g.value(grid.t0)?;
    if g0.abs() <= 1e-10 {
        let p = WarpProfile::model(n, g, grid)?;
        if (p.rho_sigma() - rho_sigma).abs() > 1e-10 {
            return Err(Error::InvalidWarp(format!(
                "g vanishes at t0 but the fiber constant {rho_sigma} is not that of the unit sphere"
            )));
        }
        return Ok(p);
    }
    WarpProfile::new(
        n,
        rho_sigma,
        true,
        g,
        grid,
        fiber_volume(n - 1, rho_sigma),
    )
}

/// Einstein warped products with `g'' = c g`:
/// `g = gp0·sn_{−c} + g0·cn_{−c}`, `f = a∫₀ᵗg + b`, `λ = a g' − d c`.
pub fn build_einstein_family(
    c: f64,
    g0: f64,
    gp0: f64,
    a: f64,
    b: f64,
    n: usize,
    grid: Grid,
) -> Result<SolitonSpec> {
    let pairs = [("c", c), ("g0", g0), ("gp0", gp0), ("a", a), ("b", b)];
    require_finite(&pairs)?;
    require_n(n, 3)?;
    let d = (n - 1) as f64;
    let g = ClosedForm::SnCombination {
        k: -c,
        c1: gp0,
        c2: g0,
    };
    let rho_sigma = (d - 1.0) * (gp0 * gp0 - c * g0 * g0);
    let f = g.antiderivative().scaled(a)?.plus(ClosedForm::constant(b));
    let lambda = g.derivative().scaled(a)?.plus(ClosedForm::constant(-d * c));
    let profile = profile_for(n, rho_sigma, g, grid)?;
    let mut params = params(&pairs);
    params.insert("n".into(), n as f64);
    Ok(SolitonSpec {
        profile,
        f,
        lambda,
        family: Family::EinsteinWarped,
        params,
        tolerance: CLOSED_FORM_TOL,
    })
}

/// Warped products over an arbitrary positive `g`. With
/// `K(t) = ∫ (d−1)(g''g − g'² − a)/g³`, the potential satisfies
/// `f' = g (A + K)` and `f(t0) = B`; all integrals start at the left endpoint.
pub fn build_general_family(
    g: ClosedForm,
    rho_sigma: f64,
    a_const: f64,
    b_const: f64,
    n: usize,
    grid: Grid,
) -> Result<SolitonSpec> {
    require_n(n, 3)?;
    build_general_family_with_coefficient(g, rho_sigma, a_const, b_const, n, grid, (n - 2) as f64)
}

/// As [`build_general_family`] with the prefactor of `K` left free.
pub(crate) fn build_general_family_with_coefficient(
    g: ClosedForm,
    rho_sigma: f64,
    a_const: f64,
    b_const: f64,
    n: usize,
    grid: Grid,
    coefficient: f64,
) -> Result<SolitonSpec> {
    let pairs = [("rho_sigma", rho_sigma), ("A", a_const), ("B", b_const)];
    require_finite(&pairs)?;
    require_n(n, 3)?;
    let d = (n - 1) as f64;
    let profile = WarpProfile::new(n, rho_sigma, true, g, grid, fiber_volume(n - 1, rho_sigma))?;
    let gj = profile.g_jet();
    let fiber_a = -rho_sigma / (d - 1.0);
    let h: Vec<f64> = (0..grid.n)
        .map(|i| {
            let (g, g1, g2) = (gj.v[i], gj.d1[i], gj.d2[i]);
            coefficient * (g2 * g - g1 * g1 - fiber_a) / (g * g * g)
        })
        .collect();
    let k = GridFn::on(grid, h)?.integrate_cumulative();
    let fp: Vec<f64> = (0..grid.n)
        .map(|i| gj.v[i] * (a_const + k.get(i)))
        .collect();
    let f = GridFn::on(grid, fp)?
        .integrate_cumulative()
        .map(|v| v + b_const)?;
    let lambda: Vec<f64> = (0..grid.n)
        .map(|i| {
            let (g, g1, g2) = (gj.v[i], gj.d1[i], gj.d2[i]);
            -((d - 1.0) * g1 * g1 - rho_sigma) / (g * g) - g2 / g + g1 * (a_const + k.get(i))
        })
        .collect();
    let lambda = GridFn::on(grid, lambda)?;
    let mut params = params(&pairs);
    params.insert("n".into(), n as f64);
    Ok(SolitonSpec {
        profile,
        f: ClosedForm::Custom(f),
        lambda: ClosedForm::Custom(lambda),
        family: Family::GeneralWarped,
        params,
        tolerance: QUADRATURE_TOL,
    })
}

/// The radial solutions of the classification theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClassifiedCase {
    /// Euclidean space, `f = λ₀r²/2 + b`, `λ ≡ λ₀`.
    Flat { lambda0: f64, b: f64 },
    /// Space form of curvature `−c`, `λ = a cn_{−c} − (n−1)c`, `f = (a/c) cn_{−c} + b`.
    SpaceForm { c: f64, a: f64, b: f64 },
    /// `ℝ ×_g Σ` with `g'' = c g`, `c > 0`.
    HyperbolicWarped {
        c: f64,
        g0: f64,
        gp0: f64,
        a: f64,
        b: f64,
    },
}

pub fn build_classified(case: ClassifiedCase, n: usize, grid: Grid) -> Result<SolitonSpec> {
    match case {
        ClassifiedCase::Flat { lambda0, b } => {
            let pairs = [("lambda0", lambda0), ("b", b)];
            require_finite(&pairs)?;
            require_n(n, 2)?;
            let profile = WarpProfile::model(n, ClosedForm::identity(), grid)?;
            let mut params = params(&pairs);
            params.insert("n".into(), n as f64);
            Ok(SolitonSpec {
                profile,
                f: ClosedForm::Polynomial(vec![b, 0.0, 0.5 * lambda0]),
                lambda: ClosedForm::constant(lambda0),
                family: Family::ClassifiedFlat,
                params,
                tolerance: CLOSED_FORM_TOL,
            })
        }
        ClassifiedCase::SpaceForm { c, a, b } => {
            let pairs = [("c", c), ("a", a), ("b", b)];
            require_finite(&pairs)?;
            require_n(n, 2)?;
            if c == 0.0 {
                return Err(Error::InvalidCase(
                    "the space-form case needs c != 0 (c = 0 is the flat case)".into(),
                ));
            }
            let profile = WarpProfile::model(n, ClosedForm::sn(-c), grid)?;
            let cn = ClosedForm::cn(-c);
            let mut params = params(&pairs);
            params.insert("n".into(), n as f64);
            Ok(SolitonSpec {
                profile,
                f: cn.scaled(a / c)?.plus(ClosedForm::constant(b)),
                lambda: cn
                    .scaled(a)?
                    .plus(ClosedForm::constant(-((n - 1) as f64) * c)),
                family: Family::ClassifiedSpaceForm,
                params,
                tolerance: CLOSED_FORM_TOL,
            })
        }
        ClassifiedCase::HyperbolicWarped { c, g0, gp0, a, b } => {
            if !(c > 0.0) {
                return Err(Error::InvalidCase(format!(
                    "the hyperbolic warped case needs c > 0, got {c}"
                )));
            }
            let mut spec = build_einstein_family(c, g0, gp0, a, b, n, grid)?;
            spec.family = Family::ClassifiedHyperbolicWarped;
            Ok(spec)
        }
    }
}

/// The Gaussian soliton on `ℝⁿ` sampled on `[0, r_max]`.
pub fn build_gaussian(lambda0: f64, n: usize, r_max: f64, resolution: usize) -> Result<SolitonSpec> {
    let grid = Grid::new(0.0, r_max, resolution)?;
    let mut spec = build_classified(ClassifiedCase::Flat { lambda0, b: 0.0 }, n, grid)?;
    spec.family = Family::Gaussian;
    Ok(spec)
}
