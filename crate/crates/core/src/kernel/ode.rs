use crate::error::{Error, Result};
use crate::kernel::grid::GridFn;

const OVERFLOW: f64 = 1e300;

/// Solves `y'' = Q(t)·y` with `y(t0) = y0`, `y'(t0) = yp0` by classical RK4
/// on the grid of `q`. Returns `y` on that grid.
pub fn solve_linear_ode2(q: &GridFn, y0: f64, yp0: f64) -> Result<GridFn> {
    Ok(solve_linear_ode2_with_derivative(q, y0, yp0)?.0)
}

/// As [`solve_linear_ode2`], also returning `y'`.
pub fn solve_linear_ode2_with_derivative(
    q: &GridFn,
    y0: f64,
    yp0: f64,
) -> Result<(GridFn, GridFn)> {
    let qv = q.values();
    let n = qv.len();
    let h = q.spacing();
    let mut y = Vec::with_capacity(n);
    let mut yp = Vec::with_capacity(n);
    let (mut u, mut v) = (y0, yp0);
    y.push(u);
    yp.push(v);
    for i in 0..n - 1 {
        let (qa, qm, qb) = (qv[i], midpoint(qv, i), qv[i + 1]);
        let (k1u, k1v) = (v, qa * u);
        let (k2u, k2v) = (v + 0.5 * h * k1v, qm * (u + 0.5 * h * k1u));
        let (k3u, k3v) = (v + 0.5 * h * k2v, qm * (u + 0.5 * h * k2u));
        let (k4u, k4v) = (v + h * k3v, qb * (u + h * k3u));
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if !(u.abs() <= OVERFLOW && v.abs() <= OVERFLOW) {
            return Err(Error::OverflowDetected {
                t: q.grid().point(i + 1),
            });
        }
        y.push(u);
        yp.push(v);
    }
    Ok((GridFn::on(q.grid(), y)?, GridFn::on(q.grid(), yp)?))
}

/// Cubic interpolation of the samples at the midpoint of `[x_i, x_{i+1}]`.
fn midpoint(v: &[f64], i: usize) -> f64 {
    let n = v.len();
    if i == 0 {
        (5.0 * v[0] + 15.0 * v[1] - 5.0 * v[2] + v[3]) / 16.0
    } else if i == n - 2 {
        (5.0 * v[n - 1] + 15.0 * v[n - 2] - 5.0 * v[n - 3] + v[n - 4]) / 16.0
    } else {
        (-v[i - 1] + 9.0 * v[i] + 9.0 * v[i + 1] - v[i + 2]) / 16.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::grid::Grid;
    use std::f64::consts::PI;

    #[test]
    fn zero_potential_gives_line() {
        let q = GridFn::constant(Grid::new(0.0, 3.0, 301).unwrap(), 0.0).unwrap();
        let y = solve_linear_ode2(&q, 0.0, 1.0).unwrap();
        for (t, v) in q.grid().points().zip(y.values()) {
            assert!((v - t).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_potential_gives_sinh() {
        let q = GridFn::constant(Grid::new(0.0, 2.0, 2001).unwrap(), 1.0).unwrap();
        let (y, yp) = solve_linear_ode2_with_derivative(&q, 0.0, 1.0).unwrap();
        assert!((y.last() - 2f64.sinh()).abs() < 1e-9);
        assert!((yp.last() - 2f64.cosh()).abs() < 1e-9);
    }

    #[test]
    fn negative_potential_gives_cos() {
        let q = GridFn::constant(Grid::new(0.0, PI, 2001).unwrap(), -1.0).unwrap();
        let y = solve_linear_ode2(&q, 1.0, 0.0).unwrap();
        assert!((y.last() + 1.0).abs() < 1e-8);
    }

    #[test]
    fn variable_potential_airy_like() {
        // y = exp(t²/2) solves y'' = (1 + t²) y
        let grid = Grid::new(0.0, 2.0, 2001).unwrap();
        let q = GridFn::from_fn(grid, |t| 1.0 + t * t).unwrap();
        let y = solve_linear_ode2(&q, 1.0, 0.0).unwrap();
        assert!((y.last() - 2f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn overflow_is_reported() {
        let q = GridFn::constant(Grid::new(0.0, 1000.0, 1001).unwrap(), 1.0).unwrap();
        assert!(matches!(
            solve_linear_ode2(&q, 0.0, 1.0),
            Err(Error::OverflowDetected { .. })
        ));
    }
}
