use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factory::{
    build_classified, build_einstein_family, build_gaussian, build_general_family, ClassifiedCase,
    SolitonSpec,
};
use crate::kernel::{ClosedForm, Grid, DEFAULT_SAMPLES};
use crate::verify::AuditParamsA;

pub const MANIFEST_VERSION: &str = "1";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Residual,
    Identities,
    Audits,
    Comparison,
    Okumura,
    Oy,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Residual => "residual",
            Suite::Identities => "identities",
            Suite::Audits => "audits",
            Suite::Comparison => "comparison",
            Suite::Okumura => "okumura",
            Suite::Oy => "oy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub interval: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
}

/// Growth function for the Omori-Yau check, `G(t) = Σ cₖ tᵏ` on `[0, t_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OySettings {
    #[serde(default = "OySettings::default_coefficients")]
    pub coefficients: Vec<f64>,
    #[serde(default = "OySettings::default_t_max")]
    pub t_max: f64,
}

impl OySettings {
    fn default_coefficients() -> Vec<f64> {
        vec![1.0, 0.0, 1.0]
    }

    fn default_t_max() -> f64 {
        20.0
    }
}

impl Default for OySettings {
    fn default() -> Self {
        OySettings {
            coefficients: Self::default_coefficients(),
            t_max: Self::default_t_max(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub grid: GridSpec,
    pub suites: Vec<Suite>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit_params: Option<AuditParamsA>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oy: Option<OySettings>,
}

/// Tolerance keys a manifest or `--tol` may override.
pub const TOLERANCE_KEYS: [&str; 3] = ["residual", "identities", "comparison"];

/// A constructor reachable from a manifest.
pub struct FamilyInfo {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub summary: &'static str,
}

pub const FAMILIES: [FamilyInfo; 6] = [
    FamilyInfo {
        name: "gaussian",
        params: &["lambda0", "n"],
        summary: "Gaussian soliton on R^n, f = lambda0 r^2/2, sampled from the origin",
    },
    FamilyInfo {
        name: "flat",
        params: &["lambda0", "b", "n"],
        summary: "Euclidean model, f = lambda0 r^2/2 + b, lambda = lambda0",
    },
    FamilyInfo {
        name: "space_form",
        params: &["c", "a", "b", "n"],
        summary: "model of curvature -c, g = sn_{-c}, f = (a/c) cn_{-c} + b",
    },
    FamilyInfo {
        name: "hyperbolic_warped",
        params: &["c", "g0", "gp0", "a", "b", "n"],
        summary: "R x_g Sigma with g'' = c g, c > 0",
    },
    FamilyInfo {
        name: "einstein",
        params: &["c", "g0", "gp0", "a", "b", "n"],
        summary: "Einstein warped product, g = gp0 sn_{-c} + g0 cn_{-c}, lambda = a g' - (n-1) c",
    },
    FamilyInfo {
        name: "general",
        params: &["g_mean", "g_amp", "g_freq", "rho_sigma", "A", "B", "n"],
        summary: "quadrature family on g = g_mean + g_amp sin(g_freq t)",
    },
];

/// Parameters every family accepts on top of its own.
const COMMON_OPTIONAL: [&str; 1] = ["lambda_offset"];

impl Manifest {
    pub fn family_info(&self) -> Result<&'static FamilyInfo> {
        FAMILIES
            .iter()
            .find(|f| f.name == self.family)
            .ok_or_else(|| {
                let known: Vec<_> = FAMILIES.iter().map(|f| f.name).collect();
                Error::schema(
                    "family",
                    format!("unknown family `{}`, expected one of {}", self.family, known.join(", ")),
                )
            })
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn validate(&self) -> Result<()> {
        if self.version != MANIFEST_VERSION {
            return Err(Error::schema(
                "version",
                format!("unsupported version `{}`, expected `{MANIFEST_VERSION}`", self.version),
            ));
        }
        let info = self.family_info()?;
        for key in self.params.keys() {
            if !info.params.contains(&key.as_str()) && !COMMON_OPTIONAL.contains(&key.as_str()) {
                return Err(Error::schema(
                    format!("params.{key}"),
                    format!("not a parameter of `{}`", info.name),
                ));
            }
        }
        for key in info.params {
            if !self.params.contains_key(*key) {
                return Err(Error::schema(format!("params.{key}"), "missing"));
            }
        }
        for (key, v) in &self.params {
            if !v.is_finite() {
                return Err(Error::schema(format!("params.{key}"), "must be finite"));
            }
        }
        let n = self.params["n"];
        if n.fract() != 0.0 || n < 2.0 {
            return Err(Error::schema("params.n", "must be an integer >= 2"));
        }
        let [a, b] = self.grid.interval;
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && a < b) {
            return Err(Error::schema("grid.interval", "need finite 0 <= t0 < t1"));
        }
        if self.suites.is_empty() {
            return Err(Error::schema("suites", "at least one suite is required"));
        }
        for (key, v) in &self.tolerances {
            validate_tolerance(&format!("tolerances.{key}"), key, *v)?;
        }
        if let Some(oy) = &self.oy {
            if oy.coefficients.is_empty() || oy.coefficients.iter().any(|c| !c.is_finite()) {
                return Err(Error::schema("oy.coefficients", "need finite coefficients"));
            }
            if !(oy.t_max.is_finite() && oy.t_max > 10.0) {
                return Err(Error::schema("oy.t_max", "must exceed 10"));
            }
        }
        Ok(())
    }

    /// Whether the family is sampled from its pole regardless of `interval[0]`.
    pub fn samples_from_pole(&self) -> bool {
        matches!(self.family.as_str(), "gaussian" | "flat" | "space_form")
    }

    /// Builds the spec; `default_resolution` applies when the manifest has none.
    pub fn build_spec(&self, default_resolution: usize) -> Result<SolitonSpec> {
        let p = |k: &str| self.params[k];
        let n = p("n") as usize;
        let res = self.grid.resolution.unwrap_or(default_resolution);
        let [t0, t1] = self.grid.interval;
        let t0 = if self.samples_from_pole() { 0.0 } else { t0 };
        let grid = Grid::new(t0, t1, res)?;
        let spec = match self.family.as_str() {
            "gaussian" => build_gaussian(p("lambda0"), n, t1, res)?,
            "flat" => build_classified(
                ClassifiedCase::Flat {
                    lambda0: p("lambda0"),
                    b: p("b"),
                },
                n,
                grid,
            )?,
            "space_form" => build_classified(
                ClassifiedCase::SpaceForm {
                    c: p("c"),
                    a: p("a"),
                    b: p("b"),
                },
                n,
                grid,
            )?,
            "hyperbolic_warped" => build_classified(
                ClassifiedCase::HyperbolicWarped {
                    c: p("c"),
                    g0: p("g0"),
                    gp0: p("gp0"),
                    a: p("a"),
                    b: p("b"),
                },
                n,
                grid,
            )?,
            "einstein" => build_einstein_family(p("c"), p("g0"), p("gp0"), p("a"), p("b"), n, grid)?,
            "general" => {
                let w = p("g_freq");
                if w == 0.0 {
                    return Err(Error::param("g_freq", "must be nonzero"));
                }
                // sin(wt) = w sn_{w²}(t)
                let g = ClosedForm::constant(p("g_mean"))
                    .plus(ClosedForm::sn(w * w).scaled(p("g_amp") * w)?);
                build_general_family(g, p("rho_sigma"), p("A"), p("B"), n, grid)?
            }
            _ => unreachable!("family validated"),
        };
        Ok(spec.with_lambda_offset(self.params.get("lambda_offset").copied().unwrap_or(0.0)))
    }
}

pub(crate) fn validate_tolerance(path: &str, key: &str, v: f64) -> Result<()> {
    if !TOLERANCE_KEYS.contains(&key) {
        return Err(Error::schema(
            path,
            format!("unknown tolerance, expected one of {}", TOLERANCE_KEYS.join(", ")),
        ));
    }
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::schema(path, "must be positive and finite"));
    }
    Ok(())
}

/// Resolution used when a manifest leaves it out: `SOLAB_RESOLUTION` or the
/// library default.
pub fn default_resolution() -> Result<usize> {
    match std::env::var("SOLAB_RESOLUTION") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::schema("SOLAB_RESOLUTION", format!("not a sample count: `{v}`"))),
        Err(_) => Ok(DEFAULT_SAMPLES),
    }
}

/// Parses and validates a manifest, including the family's constructor
/// preconditions.
pub fn parse_manifest(text: &[u8]) -> Result<Manifest> {
    let mut de = serde_json::Deserializer::from_slice(text);
    let m: Manifest = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() {
            Error::schema(path, inner.to_string())
        } else {
            Error::Parse {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        }
    })?;
    de.end().map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    m.validate()?;
    m.build_spec(m.grid.resolution.unwrap_or(DEFAULT_SAMPLES))
        .map_err(|e| Error::schema("params", e.to_string()))?;
    Ok(m)
}
