//! Shared fixtures for the integration tests.

use solab::factory::{
    build_classified, build_einstein_family, build_gaussian, build_general_family, ClassifiedCase,
    SolitonSpec,
};
use solab::kernel::{ClosedForm, Grid, DEFAULT_SAMPLES};

pub fn grid(t0: f64, t1: f64) -> Grid {
    Grid::new(t0, t1, DEFAULT_SAMPLES).unwrap()
}

/// Every constructor at a few parameter points, labelled.
pub fn all_specs() -> Vec<(String, SolitonSpec)> {
    let mut v = Vec::new();
    for c in [-1.0, 0.0, 1.0] {
        for n in [3, 4, 5] {
            let (t1, gp0) = if c < 0.0 { (1.4, 0.5) } else { (3.0, 0.5) };
            v.push((
                format!("einstein c={c} n={n}"),
                build_einstein_family(c, 1.0, gp0, 0.7, -0.2, n, grid(0.0, t1)).unwrap(),
            ));
        }
    }
    v.push((
        "einstein pole c=1".into(),
        build_einstein_family(1.0, 0.0, 1.0, 0.4, 0.0, 3, grid(0.0, 3.0)).unwrap(),
    ));
    for (lambda0, n) in [(1.0, 3), (-1.0, 2), (0.5, 5)] {
        v.push((
            format!("flat lambda0={lambda0} n={n}"),
            build_classified(ClassifiedCase::Flat { lambda0, b: 0.3 }, n, grid(0.0, 6.0)).unwrap(),
        ));
    }
    for (c, a) in [(1.0, 0.0), (1.0, 0.5), (-1.0, 0.5)] {
        v.push((
            format!("space form c={c} a={a}"),
            build_classified(ClassifiedCase::SpaceForm { c, a, b: 0.1 }, 3, grid(0.0, 2.5)).unwrap(),
        ));
    }
    v.push((
        "hyperbolic warped".into(),
        build_classified(
            ClassifiedCase::HyperbolicWarped { c: 1.0, g0: 1.0, gp0: -0.3, a: 0.5, b: 0.0 },
            4,
            grid(-1.0, 2.0),
        )
        .unwrap(),
    ));
    v.push(("gaussian".into(), build_gaussian(1.0, 3, 8.0, DEFAULT_SAMPLES).unwrap()));
    let sine = ClosedForm::constant(2.0).plus(ClosedForm::sn(1.0));
    v.push((
        "general sine".into(),
        build_general_family(sine, 1.0, 0.5, 0.0, 3, grid(0.0, 2.0 * std::f64::consts::PI)).unwrap(),
    ));
    let poly = ClosedForm::Polynomial(vec![1.0, 0.2, 0.1]);
    v.push((
        "general quadratic n=4".into(),
        build_general_family(poly, 2.0, -0.3, 1.0, 4, grid(0.0, 3.0)).unwrap(),
    ));
    v
}
