//! Manifests, suite orchestration and report rendering behind the `solab` binary.

mod demo;
mod manifest;
mod report;
mod run;

pub use demo::{demo_manifests, write_demo};
pub use manifest::{
    default_resolution, parse_manifest, FamilyInfo, GridSpec, Manifest, OySettings, Suite,
    DEFAULT_SEED, FAMILIES, MANIFEST_VERSION, TOLERANCE_KEYS,
};
pub use report::{emit_report, format_sig12, render, Format, CSV_HEADER};
pub use run::{
    run_suite, CheckSummary, ProfileRow, RunOptions, RunReport, SpecSummary, SuiteResult,
    VolumeSummary, OKUMURA_COUNT,
};
