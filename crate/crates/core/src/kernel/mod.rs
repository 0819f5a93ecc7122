//! One-dimensional numerical substrate.

pub mod closed_form;
pub mod grid;
pub mod ode;
pub mod special;

pub use closed_form::{ClosedForm, Jet, Radial};
pub use grid::{integrate_fn, simpson, Grid, GridFn, Order, DEFAULT_SAMPLES};
pub use ode::{solve_linear_ode2, solve_linear_ode2_with_derivative};
pub use special::{cn, sn, sn_integral, unit_sphere_area};
