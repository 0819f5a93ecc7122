use crate::error::{Error, Result};
use crate::kernel::grid::{Grid, GridFn, Order};
use crate::kernel::special::{cn, sn};

/// Value, first and second derivative sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub v: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

impl Jet {
    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    fn from_grid_fn(f: &GridFn) -> Jet {
        Jet {
            v: f.values().to_vec(),
            d1: f.derivative(Order::First).into_values(),
            d2: f.derivative(Order::Second).into_values(),
        }
    }
}

/// A radial function the geometry engine can sample.
pub trait Radial {
    /// Value at `t`.
    fn eval(&self, t: f64) -> Result<f64>;

    /// `(u, u', u'')` at `t`.
    fn derivs_at(&self, t: f64) -> Result<[f64; 3]>;

    /// Value and derivatives on every sample of `grid`.
    fn jet(&self, grid: Grid) -> Result<Jet>;
}

/// A function with an explicit formula, or tabulated samples as fallback.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// `t ↦ c1·sn_k(t) + c2·cn_k(t)`.
    SnCombination { k: f64, c1: f64, c2: f64 },
    /// `Σ coeffs[i]·tⁱ`.
    Polynomial(Vec<f64>),
    Sum(Vec<ClosedForm>),
    /// Samples; derivatives by finite differences.
    Custom(GridFn),
}

impl ClosedForm {
    pub fn constant(c: f64) -> Self {
        ClosedForm::Polynomial(vec![c])
    }

    pub fn identity() -> Self {
        ClosedForm::Polynomial(vec![0.0, 1.0])
    }

    pub fn sn(k: f64) -> Self {
        ClosedForm::SnCombination { k, c1: 1.0, c2: 0.0 }
    }

    pub fn cn(k: f64) -> Self {
        ClosedForm::SnCombination { k, c1: 0.0, c2: 1.0 }
    }

    pub fn is_tabulated(&self) -> bool {
        match self {
            ClosedForm::Custom(_) => true,
            ClosedForm::Sum(parts) => parts.iter().any(ClosedForm::is_tabulated),
            _ => false,
        }
    }

    /// `self + other`, flattening nested sums.
    pub fn plus(self, other: ClosedForm) -> ClosedForm {
        let mut parts = Vec::new();
        for p in [self, other] {
            match p {
                ClosedForm::Sum(inner) => parts.extend(inner),
                p => parts.push(p),
            }
        }
        ClosedForm::Sum(parts)
    }

    /// `c·self`.
    pub fn scaled(&self, c: f64) -> Result<ClosedForm> {
        Ok(match self {
            ClosedForm::SnCombination { k, c1, c2 } => ClosedForm::SnCombination {
                k: *k,
                c1: c * c1,
                c2: c * c2,
            },
            ClosedForm::Polynomial(p) => ClosedForm::Polynomial(p.iter().map(|x| c * x).collect()),
            ClosedForm::Sum(parts) => ClosedForm::Sum(
                parts
                    .iter()
                    .map(|p| p.scaled(c))
                    .collect::<Result<Vec<_>>>()?,
            ),
            ClosedForm::Custom(g) => ClosedForm::Custom(g.map(|x| c * x)?),
        })
    }

    /// Evaluates the formula. Tabulated parts interpolate and fail outside
    /// their grid.
    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.derivs(t)?[0])
    }

    fn derivs(&self, t: f64) -> Result<[f64; 3]> {
        Ok(match self {
            ClosedForm::SnCombination { k, c1, c2 } => {
                let (s, c) = (sn(*k, t), cn(*k, t));
                // sn' = cn, cn' = -k sn
                [
                    c1 * s + c2 * c,
                    c1 * c - k * c2 * s,
                    -k * (c1 * s + c2 * c),
                ]
            }
            ClosedForm::Polynomial(p) => poly_derivs(p, t),
            ClosedForm::Sum(parts) => {
                let mut acc = [0.0; 3];
                for p in parts {
                    let d = p.derivs(t)?;
                    for i in 0..3 {
                        acc[i] += d[i];
                    }
                }
                acc
            }
            ClosedForm::Custom(g) => {
                let out = |g: &GridFn| {
                    g.value_at(t).ok_or(Error::OutOfDomain {
                        t,
                        t0: g.t0(),
                        t1: g.t1(),
                    })
                };
                [
                    out(g)?,
                    out(&g.derivative(Order::First))?,
                    out(&g.derivative(Order::Second))?,
                ]
            }
        })
    }

    /// Symbolic derivative (finite differences for tabulated parts).
    pub fn derivative(&self) -> ClosedForm {
        match self {
            ClosedForm::SnCombination { k, c1, c2 } => ClosedForm::SnCombination {
                k: *k,
                c1: -k * c2,
                c2: *c1,
            },
            ClosedForm::Polynomial(p) => ClosedForm::Polynomial(
                p.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| i as f64 * c)
                    .collect(),
            ),
            ClosedForm::Sum(parts) => ClosedForm::Sum(parts.iter().map(|p| p.derivative()).collect()),
            ClosedForm::Custom(g) => ClosedForm::Custom(g.derivative(Order::First)),
        }
    }

    /// `t ↦ ∫₀ᵗ self`. Tabulated parts integrate from their grid start.
    pub fn antiderivative(&self) -> ClosedForm {
        match self {
            ClosedForm::SnCombination { k, c1, c2 } => {
                if *k == 0.0 {
                    // integrand is c1 t + c2
                    ClosedForm::Polynomial(vec![0.0, *c2, 0.5 * c1])
                } else {
                    // ∫ sn = (1 - cn)/k, ∫ cn = sn
                    ClosedForm::Sum(vec![
                        ClosedForm::Polynomial(vec![c1 / k]),
                        ClosedForm::SnCombination {
                            k: *k,
                            c1: *c2,
                            c2: -c1 / k,
                        },
                    ])
                }
            }
            ClosedForm::Polynomial(p) => {
                let mut q = vec![0.0];
                q.extend(p.iter().enumerate().map(|(i, c)| c / (i + 1) as f64));
                ClosedForm::Polynomial(q)
            }
            ClosedForm::Sum(parts) => {
                ClosedForm::Sum(parts.iter().map(|p| p.antiderivative()).collect())
            }
            ClosedForm::Custom(g) => ClosedForm::Custom(g.integrate_cumulative()),
        }
    }

    /// Samples the function on `grid`.
    pub fn sample(&self, grid: Grid) -> Result<GridFn> {
        GridFn::on(grid, self.jet(grid)?.v)
    }
}

fn poly_derivs(p: &[f64], t: f64) -> [f64; 3] {
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for &c in p.iter().rev() {
        d2 = d2 * t + 2.0 * d1;
        d1 = d1 * t + v;
        v = v * t + c;
    }
    [v, d1, d2]
}

impl Radial for ClosedForm {
    fn eval(&self, t: f64) -> Result<f64> {
        self.value(t)
    }

    fn derivs_at(&self, t: f64) -> Result<[f64; 3]> {
        self.derivs(t)
    }

    fn jet(&self, grid: Grid) -> Result<Jet> {
        match self {
            ClosedForm::Custom(g) => {
                same_grid(g.grid(), grid)?;
                Ok(Jet::from_grid_fn(g))
            }
            ClosedForm::Sum(parts) => {
                let mut acc = Jet {
                    v: vec![0.0; grid.n],
                    d1: vec![0.0; grid.n],
                    d2: vec![0.0; grid.n],
                };
                for p in parts {
                    let j = p.jet(grid)?;
                    for i in 0..grid.n {
                        acc.v[i] += j.v[i];
                        acc.d1[i] += j.d1[i];
                        acc.d2[i] += j.d2[i];
                    }
                }
                Ok(acc)
            }
            _ => {
                let mut j = Jet {
                    v: Vec::with_capacity(grid.n),
                    d1: Vec::with_capacity(grid.n),
                    d2: Vec::with_capacity(grid.n),
                };
                for t in grid.points() {
                    let [v, d1, d2] = self.derivs(t)?;
                    j.v.push(v);
                    j.d1.push(d1);
                    j.d2.push(d2);
                }
                Ok(j)
            }
        }
    }
}

impl Radial for GridFn {
    fn eval(&self, t: f64) -> Result<f64> {
        self.value_at(t).ok_or(Error::OutOfDomain {
            t,
            t0: self.t0(),
            t1: self.t1(),
        })
    }

    fn derivs_at(&self, t: f64) -> Result<[f64; 3]> {
        ClosedForm::Custom(self.clone()).derivs(t)
    }

    fn jet(&self, grid: Grid) -> Result<Jet> {
        same_grid(self.grid(), grid)?;
        Ok(Jet::from_grid_fn(self))
    }
}

fn same_grid(a: Grid, b: Grid) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!(
            "tabulated function lives on [{}, {}] with {} samples, requested [{}, {}] with {}",
            a.t0, a.t1, a.n, b.t0, b.t1, b.n
        )))
    }
}
