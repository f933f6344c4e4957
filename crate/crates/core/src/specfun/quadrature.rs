//! Gauss-Legendre quadrature with geometrically graded end panels.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("Gauss-Legendre needs >= 2 nodes, got {n}")));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// One panel `[lo, hi]`.
    pub fn panel<F: Fn(f64) -> f64>(&self, f: &F, lo: f64, hi: f64) -> Result<f64> {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let at = mid + half * x;
            let v = f(at);
            if !v.is_finite() {
                return Err(Error::NonFinite { x: at, value: v });
            }
            sum += w * v;
        }
        Ok(half * sum)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const GRADING_RATIO: f64 = 0.15;
const MAX_GRADING_LEVELS: usize = 200;
const INTERIOR_PANELS: usize = 8;

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::Parameter(format!("integration interval [{lo}, {hi}] is empty or non-finite")))
    }
}

/// Panels of `[a, b]` refined geometrically toward `a` (`toward_lo`) or `b`.
fn graded_breaks(a: f64, b: f64, toward_lo: bool) -> Vec<(f64, f64)> {
    let width = b - a;
    let anchor = if toward_lo { a } else { b };
    // Below this offset the abscissae can no longer be resolved next to the anchor.
    let floor = 4.0 * f64::EPSILON * anchor.abs();
    let mut panels = Vec::new();
    let mut outer = width;
    for _ in 0..MAX_GRADING_LEVELS {
        let inner = outer * GRADING_RATIO;
        if inner <= floor || inner < f64::MIN_POSITIVE * 1e10 {
            break;
        }
        panels.push((inner, outer));
        outer = inner;
    }
    panels.push((0.0, outer));
    panels.into_iter().map(|(near, far)| if toward_lo { (a + near, a + far) } else { (b - far, b - near) }).collect()
}

/// Composite Gauss-Legendre estimate of `f` over `[lo, hi]` using `nodes` points per panel.
///
/// The interval is cut into equal panels; the two end panels are refined
/// geometrically so that integrable endpoint singularities such as
/// `z^{-0.9}` at `lo = 0` converge. Near a nonzero endpoint the refinement
/// stops at the resolution of `f64` around that endpoint.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, nodes: usize) -> Result<f64> {
    check_interval(lo, hi)?;
    let rule = GaussLegendre::new(nodes)?;
    let step = (hi - lo) / INTERIOR_PANELS as f64;
    let mut total = 0.0;
    for i in 0..INTERIOR_PANELS {
        let a = lo + step * i as f64;
        let b = if i + 1 == INTERIOR_PANELS { hi } else { lo + step * (i + 1) as f64 };
        if i == 0 || i + 1 == INTERIOR_PANELS {
            for (pa, pb) in graded_breaks(a, b, i == 0) {
                if pb > pa {
                    total += rule.panel(&f, pa, pb)?;
                }
            }
        } else {
            total += rule.panel(&f, a, b)?;
        }
    }
    Ok(total)
}

/// Plain composite Gauss-Legendre with `panels` equal panels.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, nodes: usize, panels: usize) -> Result<f64> {
    check_interval(lo, hi)?;
    if panels == 0 {
        return Err(Error::Parameter("at least one panel is required".into()));
    }
    let rule = GaussLegendre::new(nodes)?;
    let step = (hi - lo) / panels as f64;
    (0..panels).try_fold(0.0, |acc, i| {
        let a = lo + step * i as f64;
        let b = if i + 1 == panels { hi } else { lo + step * (i + 1) as f64 };
        Ok(acc + rule.panel(&f, a, b)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::ln_beta;

    #[test]
    fn rule_weights_sum_to_two() {
        for n in [2, 3, 10, 64, 200] {
            let rule = GaussLegendre::new(n).unwrap();
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
        }
        assert!(GaussLegendre::new(1).is_err());
    }

    #[test]
    fn constant_and_polynomial_exactness() {
        assert!((integrate(|_| 1.0, 0.0, 1.0, 2).unwrap() - 1.0).abs() < 1e-14);
        assert!((integrate(|x| x * x, 0.0, 1.0, 2).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        let one_panel = GaussLegendre::new(3).unwrap();
        let v = one_panel.panel(&|x: f64| x.powi(5), 0.0, 1.0).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn beta_integrand() {
        let got = integrate(|z| z.powf(1.2) * (1.0 - z).powf(2.4), 0.0, 1.0, 200).unwrap();
        let expected = ln_beta(2.2, 3.4).unwrap().exp();
        assert!(((got - expected) / expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn strong_singularity_at_origin() {
        // integral of z^{-0.9} over [0, 1] is 10
        let got = integrate(|z| z.powf(-0.9), 0.0, 1.0, 20).unwrap();
        assert!((got - 10.0).abs() < 1e-10, "{got}");
    }

    #[test]
    fn non_finite_sample_reported() {
        let err = integrate(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, 4).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(integrate(|x| x, 1.0, 1.0, 4).is_err());
        assert!(integrate_panels(|x| x, 0.0, 1.0, 4, 0).is_err());
    }
}
