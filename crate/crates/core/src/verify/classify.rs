use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::factory::SolitonSpec;

/// Threshold below which `λ` counts as zero.
const NULL_LAMBDA: f64 = 1e-10;
/// Threshold below which `sup |f'|` counts as a constant potential.
const TRIVIAL_F: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    Shrinking,
    Steady,
    Expanding,
    Indefinite,
    Trivial,
}

/// Sign census of `λ` over the grid, ignoring the potential.
pub fn lambda_sign(s: &SolitonSpec) -> Result<Classification> {
    let lam = s.lambda_jet()?.v;
    let pos = lam.iter().all(|&l| l > NULL_LAMBDA);
    let neg = lam.iter().all(|&l| l < -NULL_LAMBDA);
    let null = lam.iter().all(|&l| l.abs() <= NULL_LAMBDA);
    Ok(if pos {
        Classification::Shrinking
    } else if neg {
        Classification::Expanding
    } else if null {
        Classification::Steady
    } else {
        Classification::Indefinite
    })
}

/// Trivial when the potential is constant, otherwise the sign of `λ`.
pub fn classify_soliton(s: &SolitonSpec) -> Result<Classification> {
    let fp = s.f_jet()?.d1;
    if fp.iter().all(|v| v.abs() < TRIVIAL_F) {
        return Ok(Classification::Trivial);
    }
    lambda_sign(s)
}
