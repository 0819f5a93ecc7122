use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use super::manifest::{GridSpec, Manifest, Suite, MANIFEST_VERSION};
use crate::error::Result;

fn manifest(family: &str, params: &[(&str, f64)], interval: [f64; 2], suites: &[Suite]) -> Manifest {
    Manifest {
        version: MANIFEST_VERSION.into(),
        family: family.into(),
        params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
        grid: GridSpec {
            interval,
            resolution: None,
        },
        suites: suites.to_vec(),
        tolerances: BTreeMap::new(),
        seed: None,
        audit_params: None,
        oy: None,
    }
}

/// The canonical manifests, keyed by file stem.
pub fn demo_manifests() -> Vec<(&'static str, Manifest)> {
    use Suite::*;
    vec![
        (
            "gaussian",
            manifest(
                "gaussian",
                &[("lambda0", 1.0), ("n", 3.0)],
                [0.0, 8.0],
                &[Residual, Identities, Audits, Comparison, Okumura, Oy],
            ),
        ),
        (
            "einstein-cosh",
            manifest(
                "einstein",
                &[("c", 1.0), ("g0", 1.0), ("gp0", 0.0), ("a", 1.0), ("b", 0.0), ("n", 4.0)],
                [0.0, 2.0],
                &[Residual, Identities, Audits, Okumura],
            ),
        ),
        (
            "general-sine",
            manifest(
                "general",
                &[
                    ("g_mean", 2.0),
                    ("g_amp", 1.0),
                    ("g_freq", 1.0),
                    ("rho_sigma", 1.0),
                    ("A", 0.5),
                    ("B", 0.0),
                    ("n", 3.0),
                ],
                [0.0, 2.0 * PI],
                &[Residual, Identities, Audits, Okumura],
            ),
        ),
        (
            "hyperbolic-model",
            manifest(
                "space_form",
                &[("c", 1.0), ("a", 0.0), ("b", 0.0), ("n", 3.0)],
                [0.0, 3.0],
                &[Residual, Identities, Audits, Comparison, Okumura],
            ),
        ),
        (
            "cylinder",
            manifest(
                "einstein",
                &[("c", 0.0), ("g0", 1.0), ("gp0", 0.0), ("a", 1.0), ("b", 0.0), ("n", 3.0)],
                [0.0, 8.0],
                &[Residual, Identities, Audits, Okumura],
            ),
        ),
    ]
}

/// Writes the demo manifests into `dir` and returns their paths.
pub fn write_demo(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for (stem, m) in demo_manifests() {
        let path = dir.join(format!("{stem}.json"));
        let mut text = serde_json::to_string_pretty(&m).map_err(std::io::Error::other)?;
        text.push('\n');
        std::fs::write(&path, text)?;
        paths.push(path);
    }
    Ok(paths)
}
