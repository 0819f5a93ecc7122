use serde::{Deserialize, Serialize};

use super::{Criterion, ResidualReport, Sampled, IDENTITY_TOL};
use crate::error::{Error, Result};
use crate::factory::SolitonSpec;
use crate::kernel::{GridFn, Order};

/// The differential identities checked on radial profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    /// Weighted Bochner formula for `|∇f|²`.
    I2_1,
    /// Trace of the defining equation, `S = nλ − Δf`.
    I2_6_1,
    /// `∇S = 2(n−1)∇λ + 2 Ric(∇f)`.
    I2_7,
    /// Weighted Laplacian of the scalar curvature.
    I2_14,
    /// Weighted Laplacian of `|T|²`; the remainder is `|∇T|² ≥ 0`.
    I2_26R,
}

impl IdentityId {
    pub const ALL: [IdentityId; 5] = [
        IdentityId::I2_1,
        IdentityId::I2_6_1,
        IdentityId::I2_7,
        IdentityId::I2_14,
        IdentityId::I2_26R,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::I2_1 => "I2_1",
            IdentityId::I2_6_1 => "I2_6_1",
            IdentityId::I2_7 => "I2_7",
            IdentityId::I2_14 => "I2_14",
            IdentityId::I2_26R => "I2_26R",
        }
    }
}

/// `max(|ρ_fib + f'g'/g − λ|, |ρ_rad + f'' − λ|)` at every sample.
pub fn soliton_residual(s: &SolitonSpec) -> Result<ResidualReport> {
    let sm = Sampled::new(s)?;
    let v = (0..sm.grid.n)
        .map(|i| {
            let c = &sm.curv[i];
            let fib = c.rho_fib + sm.f.d1[i] * sm.lg[i] - sm.lam.v[i];
            let rad = c.rho_rad + sm.f.d2[i] - sm.lam.v[i];
            fib.abs().max(rad.abs())
        })
        .collect();
    Ok(ResidualReport::new(
        "soliton_residual",
        sm.grid_fn(v)?,
        Criterion::SupNorm,
        s.tolerance,
    ))
}

fn derivs(sm: &Sampled, v: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let q = sm.grid_fn(v)?;
    Ok((
        q.derivative(Order::First).into_values(),
        q.derivative(Order::Second).into_values(),
    ))
}

/// Residual of one identity at the default tolerance.
pub fn identity_residual(s: &SolitonSpec, id: IdentityId) -> Result<ResidualReport> {
    identity_residual_with_tol(s, id, IDENTITY_TOL)
}

pub(crate) fn identity_residual_with_tol(
    s: &SolitonSpec,
    id: IdentityId,
    tol: f64,
) -> Result<ResidualReport> {
    if id == IdentityId::I2_26R && !s.profile.conformally_flat() {
        return Err(Error::NotConformallyFlat);
    }
    let sm = Sampled::new(s)?;
    let (n, d) = (sm.n, sm.d);
    let (f, lam, lg) = (&sm.f, &sm.lam, &sm.lg);
    let len = sm.grid.n;
    // ½Δ_f q for a sampled radial quantity q
    let half_f_lap = |q: Vec<f64>| -> Result<Vec<f64>> {
        let (q1, q2) = derivs(&sm, q)?;
        Ok((0..len)
            .map(|i| 0.5 * (q2[i] + d * lg[i] * q1[i] - f.d1[i] * q1[i]))
            .collect())
    };
    let (v, criterion) = match id {
        IdentityId::I2_1 => {
            let lap = half_f_lap(f.d1.iter().map(|x| x * x).collect())?;
            let v = (0..len)
                .map(|i| {
                    let fp = f.d1[i];
                    let hess2 = f.d2[i].powi(2) + d * (fp * lg[i]).powi(2);
                    lap[i] - hess2 + lam.v[i] * fp * fp + (n - 2.0) * lam.d1[i] * fp
                })
                .collect();
            (v, Criterion::SupNorm)
        }
        IdentityId::I2_6_1 => {
            let v = (0..len)
                .map(|i| sm.curv[i].s - n * lam.v[i] + f.d2[i] + d * lg[i] * f.d1[i])
                .collect();
            (v, Criterion::SupNorm)
        }
        IdentityId::I2_7 => {
            let (s1, _) = derivs(&sm, sm.column(|c| c.s))?;
            let v = (0..len)
                .map(|i| s1[i] - 2.0 * (n - 1.0) * lam.d1[i] - 2.0 * f.d1[i] * sm.curv[i].rho_rad)
                .collect();
            (v, Criterion::SupNorm)
        }
        IdentityId::I2_14 => {
            let lap = half_f_lap(sm.column(|c| c.s))?;
            let v = (0..len)
                .map(|i| {
                    let c = &sm.curv[i];
                    lap[i] - lam.v[i] * c.s + c.ric_norm2
                        - (n - 1.0) * (lam.d2[i] + d * lg[i] * lam.d1[i])
                })
                .collect();
            (v, Criterion::SupNorm)
        }
        IdentityId::I2_26R => {
            let lap = half_f_lap(sm.column(|c| c.t_norm2))?;
            let v = (0..len)
                .map(|i| {
                    let c = &sm.curv[i];
                    let hess_t = d * lam.d1[i] * lg[i] * c.tau_f + lam.d2[i] * c.tau_r;
                    lap[i]
                        - 2.0 * (lam.v[i] - c.s * (n - 2.0) / (n * (n - 1.0))) * c.t_norm2
                        - (n - 2.0) * hess_t
                        - 4.0 / (n - 2.0) * c.tr_t3
                })
                .collect();
            (v, Criterion::MinAtLeast)
        }
    };
    Ok(ResidualReport::new(id.name(), sm.grid_fn(v)?, criterion, tol))
}

/// `|∇T|² = d(τ_f')² + (τ_r')² + 2d(g'/g)²(τ_f − τ_r)²` for radial profiles.
pub fn nabla_t_norm2(s: &SolitonSpec) -> Result<GridFn> {
    let sm = Sampled::new(s)?;
    let d = sm.d;
    let (tf1, _) = derivs(&sm, sm.column(|c| c.tau_f))?;
    let (tr1, _) = derivs(&sm, sm.column(|c| c.tau_r))?;
    let v = (0..sm.grid.n)
        .map(|i| {
            let c = &sm.curv[i];
            d * tf1[i] * tf1[i]
                + tr1[i] * tr1[i]
                + 2.0 * d * sm.lg[i].powi(2) * (c.tau_f - c.tau_r).powi(2)
        })
        .collect();
    sm.grid_fn(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{build_einstein_family, build_gaussian};
    use crate::kernel::{Grid, DEFAULT_SAMPLES};

    #[test]
    fn gaussian_residual_is_tiny() {
        let s = build_gaussian(1.0, 3, 8.0, DEFAULT_SAMPLES).unwrap();
        let r = soliton_residual(&s).unwrap();
        assert!(r.sup_norm < 1e-10, "{}", r.sup_norm);
        assert!(r.passed);
    }

    #[test]
    fn corrupted_lambda_is_detected() {
        let s = build_gaussian(1.0, 3, 8.0, DEFAULT_SAMPLES)
            .unwrap()
            .with_lambda_offset(0.1);
        let r = soliton_residual(&s).unwrap();
        assert!((r.sup_norm - 0.1).abs() < 1e-10);
        assert!(!r.passed);
    }

    #[test]
    fn einstein_identities() {
        let grid = Grid::new(0.0, 2.0, DEFAULT_SAMPLES).unwrap();
        let s = build_einstein_family(1.0, 1.0, 0.0, 1.0, 0.0, 4, grid).unwrap();
        assert!(soliton_residual(&s).unwrap().sup_norm < 1e-8);
        for id in IdentityId::ALL {
            let r = identity_residual(&s, id).unwrap();
            assert!(r.passed, "{id:?}: {} / min {}", r.sup_norm, r.min);
        }
    }

    #[test]
    fn trace_identity_on_gaussian_is_exact() {
        let s = build_gaussian(2.0, 5, 6.0, 401).unwrap();
        let r = identity_residual(&s, IdentityId::I2_6_1).unwrap();
        assert!(r.sup_norm < 1e-12);
    }

    #[test]
    fn i2_26r_needs_conformal_flatness() {
        let s = build_gaussian(1.0, 2, 4.0, 201).unwrap();
        assert!(matches!(
            identity_residual(&s, IdentityId::I2_26R),
            Err(Error::NotConformallyFlat)
        ));
    }
}
