use super::{AuditReport, Flag, TheoremId};
use crate::error::{Error, Result};
use crate::kernel::GridFn;

/// Checks the growth conditions on `G` over `[0, t_max]`, `t_max = G.t1()`.
///
/// (iii) and (iv) are finite-domain proxies: divergence of `∫G^{−1/2}` is
/// read from the increment over the last half, and the limsup of
/// `tG(√t)/G(t)` from comparing its maxima over the last two decades.
pub fn check_oy_hypotheses(g: &GridFn) -> Result<AuditReport> {
    let grid = g.grid();
    let t_max = grid.t1;
    if grid.t0 != 0.0 {
        return Err(Error::param("G", "must be sampled from t = 0"));
    }
    if t_max <= 10.0 {
        return Err(Error::param("t_max", "must exceed 10 to have two decades"));
    }
    let v = g.values();
    if let Some(i) = v.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::NonPositiveG {
            t: grid.point(i),
            value: v[i],
        });
    }

    let positive = Flag::new("G(0) > 0", v[0] > 0.0, v[0]);

    let worst_drop = v
        .windows(2)
        .map(|w| (w[1] - w[0]) / (1.0 + w[0].abs()))
        .fold(f64::INFINITY, f64::min);
    let monotone = Flag::new("G nondecreasing", worst_drop >= -1e-10, worst_drop);

    let inv_sqrt = g.map(|x| x.powf(-0.5))?.integrate_cumulative();
    let half = inv_sqrt.value_at(0.5 * t_max).expect("midpoint inside grid");
    let full = inv_sqrt.last();
    let growth = (full - half) / half;
    let divergent = Flag::new("G^(-1/2) not integrable", growth > 0.05, growth);

    let ratio = |t: f64| -> f64 {
        let num = g.value_at(t.sqrt()).expect("sqrt(t) inside grid");
        t * num / g.value_at(t).expect("t inside grid")
    };
    let sup_over = |a: f64, b: f64| -> f64 {
        let ia = grid.nearest_index(a).max(1);
        let ib = grid.nearest_index(b);
        (ia..=ib).map(|i| ratio(grid.point(i))).fold(0.0, f64::max)
    };
    let mid = sup_over((t_max / 100.0).max(1.0), t_max / 10.0);
    let last = sup_over(t_max / 10.0, t_max);
    let stable = last.is_finite() && last <= 2.0 * mid;
    let doubling = Flag::new("t G(sqrt t)/G(t) bounded", stable, last / mid);

    Ok(AuditReport::new(
        TheoremId::OY,
        vec![positive, monotone, divergent, doubling],
        vec![],
        vec!["conditions (iii) and (iv) are finite-domain heuristics".into()],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Grid;
    use crate::verify::Verdict;

    fn sampled(f: impl Fn(f64) -> f64) -> GridFn {
        GridFn::from_fn(Grid::new(0.0, 20.0, 2001).unwrap(), f).unwrap()
    }

    #[test]
    fn quadratic_passes_all() {
        let r = check_oy_hypotheses(&sampled(|t| t * t + 1.0)).unwrap();
        assert!(r.hypotheses.iter().all(|f| f.passed), "{r:?}");
        assert_eq!(r.verdict, Verdict::ConsistentWithPaper);
    }

    #[test]
    fn gaussian_growth_fails_divergence() {
        let r = check_oy_hypotheses(&sampled(|t| (t * t).exp())).unwrap();
        assert!(!r.hypothesis("G^(-1/2) not integrable").unwrap().passed);
        assert_eq!(r.verdict, Verdict::HypothesesNotMet);
    }

    #[test]
    fn constant_fails_doubling() {
        let r = check_oy_hypotheses(&sampled(|_| 1.0)).unwrap();
        assert!(r.hypotheses[..3].iter().all(|f| f.passed));
        assert!(!r.hypothesis("t G(sqrt t)/G(t) bounded").unwrap().passed);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(
            check_oy_hypotheses(&sampled(|t| 1.0 - t)),
            Err(Error::NonPositiveG { .. })
        ));
    }
}
