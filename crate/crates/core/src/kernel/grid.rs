use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest sample count the 5- and 6-point stencils can work with.
pub const MIN_SAMPLES: usize = 9;

/// Default resolution for every sampled profile.
pub const DEFAULT_SAMPLES: usize = 2001;

/// Number of samples at each end treated as boundary stencil points.
pub const BOUNDARY_POINTS: usize = 4;

/// A uniform grid `t0 = x_0 < x_1 < ... < x_{n-1} = t1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t0: f64,
    pub t1: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(t0: f64, t1: f64, n: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(Error::InvalidGrid("endpoints must be finite".into()));
        }
        if t1 <= t0 {
            return Err(Error::InvalidGrid(format!("empty interval [{t0}, {t1}]")));
        }
        if n < MIN_SAMPLES {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_SAMPLES} samples, got {n}"
            )));
        }
        Ok(Grid { t0, t1, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.t1 - self.t0) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.t1
        } else {
            self.t0 + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * (self.t1 - self.t0);
        t >= self.t0 - slack && t <= self.t1 + slack
    }

    /// Index of the sample nearest to `t` (clamped).
    pub fn nearest_index(&self, t: f64) -> usize {
        let x = ((t - self.t0) / self.spacing()).round();
        x.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Indices away from the boundary stencils.
    pub fn interior(&self) -> std::ops::Range<usize> {
        BOUNDARY_POINTS..self.n - BOUNDARY_POINTS
    }
}

/// Derivative order supported by [`GridFn::derivative`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

/// A real function sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFn {
    pub fn new(t0: f64, t1: f64, values: Vec<f64>) -> Result<Self> {
        let grid = Grid::new(t0, t1, values.len())?;
        Self::on(grid, values)
    }

    pub fn on(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.n
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite value {} at t = {}",
                values[i],
                grid.point(i)
            )));
        }
        Ok(GridFn { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::on(grid, grid.points().map(f).collect())
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::on(grid, vec![c; grid.n])
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn t0(&self) -> f64 {
        self.grid.t0
    }

    pub fn t1(&self) -> f64 {
        self.grid.t1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.grid.spacing()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::on(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &GridFn, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("grids differ".into()));
        }
        Self::on(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// Fourth-order finite differences: 5-point centered stencils inside,
    /// off-centered 5-point (first order) or 6-point (second order)
    /// stencils on the two outermost samples of each side.
    pub fn derivative(&self, order: Order) -> GridFn {
        let v = &self.values;
        let n = v.len();
        let h = self.spacing();
        let mut out = vec![0.0; n];
        match order {
            Order::First => {
                let s = 1.0 / (12.0 * h);
                for i in 2..n - 2 {
                    out[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) * s;
                }
                out[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) * s;
                out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) * s;
                let m = n - 1;
                out[m] = -(-25.0 * v[m] + 48.0 * v[m - 1] - 36.0 * v[m - 2] + 16.0 * v[m - 3]
                    - 3.0 * v[m - 4])
                    * s;
                out[m - 1] = -(-3.0 * v[m] - 10.0 * v[m - 1] + 18.0 * v[m - 2] - 6.0 * v[m - 3]
                    + v[m - 4])
                    * s;
            }
            Order::Second => {
                let s = 1.0 / (12.0 * h * h);
                for i in 2..n - 2 {
                    out[i] = (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1]
                        - v[i + 2])
                        * s;
                }
                let fwd0 = |w: [f64; 6]| {
                    45.0 * w[0] - 154.0 * w[1] + 214.0 * w[2] - 156.0 * w[3] + 61.0 * w[4]
                        - 10.0 * w[5]
                };
                let fwd1 = |w: [f64; 6]| {
                    10.0 * w[0] - 15.0 * w[1] - 4.0 * w[2] + 14.0 * w[3] - 6.0 * w[4] + w[5]
                };
                let head = [v[0], v[1], v[2], v[3], v[4], v[5]];
                let m = n - 1;
                let tail = [v[m], v[m - 1], v[m - 2], v[m - 3], v[m - 4], v[m - 5]];
                out[0] = fwd0(head) * s;
                out[1] = fwd1(head) * s;
                out[m] = fwd0(tail) * s;
                out[m - 1] = fwd1(tail) * s;
            }
        }
        GridFn {
            grid: self.grid,
            values: out,
        }
    }

    /// Running integral `F(t) = ∫_{t0}^t f` with `F(t0) = 0`.
    ///
    /// Each subinterval uses the cubic through the four nearest samples, so
    /// the rule is exact on cubics and its O(h⁴) error varies smoothly in t
    /// (the result can be differentiated again without odd/even ripple).
    pub fn integrate_cumulative(&self) -> GridFn {
        let v = &self.values;
        let n = v.len();
        let h = self.spacing();
        let mut out = vec![0.0; n];
        for i in 0..n - 1 {
            let piece = if i == 0 {
                9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]
            } else if i == n - 2 {
                9.0 * v[n - 1] + 19.0 * v[n - 2] - 5.0 * v[n - 3] + v[n - 4]
            } else {
                -v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]
            };
            out[i + 1] = out[i] + piece * h / 24.0;
        }
        GridFn {
            grid: self.grid,
            values: out,
        }
    }

    /// `∫_{t0}^{t1} f` by composite Simpson (3/8 rule on the last three
    /// subintervals when the subinterval count is odd).
    pub fn integral(&self) -> f64 {
        simpson(&self.values, self.spacing())
    }

    /// Sixth-order local Lagrange interpolation. `None` outside the grid.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        if !self.grid.contains(t) {
            return None;
        }
        Some(lagrange6(&self.values, self.grid, t))
    }

    /// Largest |value| over `range`, with the argmax sample.
    pub fn sup_abs_over(&self, range: std::ops::Range<usize>) -> (f64, usize) {
        let mut best = (0.0, range.start);
        for i in range {
            let a = self.values[i].abs();
            if a > best.0 || a.is_nan() {
                best = (a, i);
            }
        }
        best
    }
}

/// Composite Simpson on uniformly spaced samples.
pub fn simpson(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (v[0] + v[1]),
        3 => h / 3.0 * (v[0] + 4.0 * v[1] + v[2]),
        _ => {
            let intervals = n - 1;
            let simpson_end = if intervals.is_multiple_of(2) { n - 1 } else { n - 4 };
            let mut s = 0.0;
            let mut i = 0;
            while i + 2 <= simpson_end {
                s += v[i] + 4.0 * v[i + 1] + v[i + 2];
                i += 2;
            }
            s *= h / 3.0;
            if simpson_end != n - 1 {
                let j = simpson_end;
                s += 3.0 * h / 8.0 * (v[j] + 3.0 * v[j + 1] + 3.0 * v[j + 2] + v[j + 3]);
            }
            s
        }
    }
}

/// Simpson quadrature of a closure on `[a, b]` with `n` (odd) nodes.
pub fn integrate_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    if b == a {
        return 0.0;
    }
    let n = if n.is_multiple_of(2) { n + 1 } else { n.max(3) };
    let h = (b - a) / (n - 1) as f64;
    let samples: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { f(b) } else { f(a + i as f64 * h) })
        .collect();
    simpson(&samples, h)
}

fn lagrange6(v: &[f64], grid: Grid, t: f64) -> f64 {
    let h = grid.spacing();
    let n = v.len();
    let x = (t - grid.t0) / h;
    let base = (x.floor() as isize - 2).clamp(0, n as isize - 6) as usize;
    let mut sum = 0.0;
    for j in 0..6 {
        let xj = (base + j) as f64;
        if (x - xj).abs() < 1e-13 {
            return v[base + j];
        }
        let mut w = 1.0;
        for m in 0..6 {
            if m != j {
                let xm = (base + m) as f64;
                w *= (x - xm) / (xj - xm);
            }
        }
        sum += w * v[base + j];
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sampled(t0: f64, t1: f64, n: usize, f: impl Fn(f64) -> f64) -> GridFn {
        GridFn::from_fn(Grid::new(t0, t1, n).unwrap(), f).unwrap()
    }

    fn sup_err(a: &GridFn, f: impl Fn(f64) -> f64) -> f64 {
        a.grid()
            .points()
            .zip(a.values())
            .map(|(t, v)| (v - f(t)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridFn::new(0.0, 1.0, vec![0.0; 8]).is_err());
        assert!(GridFn::new(1.0, 1.0, vec![0.0; 9]).is_err());
        let mut v = vec![0.0; 9];
        v[3] = f64::NAN;
        assert!(GridFn::new(0.0, 1.0, v).is_err());
    }

    #[test]
    fn first_derivative_of_square_is_exact() {
        let f = sampled(0.0, 1.0, 101, |t| t * t);
        let d = f.derivative(Order::First);
        assert!(sup_err(&d, |t| 2.0 * t) < 1e-10);
    }

    #[test]
    fn second_derivative_of_sine() {
        let f = sampled(0.0, PI, 400, f64::sin);
        let d = f.derivative(Order::Second);
        assert!(sup_err(&d, |t| -t.sin()) < 1e-8);
    }

    #[test]
    fn constant_has_zero_derivative() {
        let f = sampled(-1.0, 2.0, 50, |_| 3.0);
        assert!(f.derivative(Order::First).values().iter().all(|&v| v.abs() < 1e-12));
        assert!(f.derivative(Order::Second).values().iter().all(|&v| v.abs() < 1e-9));
    }

    #[test]
    fn stencils_exact_on_quartics() {
        let p = |t: f64| 1.0 - 2.0 * t + 0.5 * t.powi(3) + 0.25 * t.powi(4);
        let f = sampled(-1.0, 1.5, 41, p);
        let d1 = f.derivative(Order::First);
        let d2 = f.derivative(Order::Second);
        assert!(sup_err(&d1, |t| -2.0 + 1.5 * t * t + t.powi(3)) < 1e-11);
        assert!(sup_err(&d2, |t| 3.0 * t + 3.0 * t * t) < 1e-9);
    }

    #[test]
    fn cumulative_integral_examples() {
        let one = sampled(0.0, 2.0, 9, |_| 1.0);
        assert!((one.integrate_cumulative().last() - 2.0).abs() < 1e-14);

        let c = sampled(0.0, PI / 2.0, 401, f64::cos);
        let big = c.integrate_cumulative();
        assert!((big.last() - 1.0).abs() < 1e-10);
        assert!(sup_err(&big, f64::sin) < 1e-10);

        let cube = sampled(0.0, 1.0, 11, |t| t.powi(3));
        assert!((cube.integrate_cumulative().last() - 0.25).abs() < 1e-12);
        assert!((cube.integral() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn simpson_parity_handling() {
        for n in [9, 10, 11, 12] {
            let f = sampled(0.0, 1.0, n, |t| t.powi(3) - t);
            assert!((f.integral() - (-0.25)).abs() < 1e-13, "n={n}");
        }
        assert!((integrate_fn(0.0, PI, 2000, f64::sin) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn interpolation_reproduces_quintics() {
        let p = |t: f64| t.powi(5) - 3.0 * t.powi(2) + 1.0;
        let f = sampled(0.0, 2.0, 21, p);
        for &t in &[0.0, 0.013, 0.77, 1.999, 2.0] {
            assert!((f.value_at(t).unwrap() - p(t)).abs() < 1e-11, "t={t}");
        }
        assert!(f.value_at(2.1).is_none());
    }

    #[test]
    fn derivative_of_cumulative_recovers_integrand() {
        let f = sampled(0.0, 3.0, 2001, |t| (2.0 * t).sin() * (-t).exp());
        let back = f.integrate_cumulative().derivative(Order::First);
        let err = back
            .values()
            .iter()
            .zip(f.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "err={err}");
    }
}
