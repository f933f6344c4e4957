//! Terminating Gauss hypergeometric series `2F1(-n, b; c; z)`.

use crate::error::{Error, Result};

/// The degree-`n` polynomial `2F1(-n, b; c; z)` with its power-series coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminatingHypergeometric {
    n: usize,
    b: f64,
    c: f64,
    coeffs: Vec<f64>,
}

impl TerminatingHypergeometric {
    pub fn new(n: usize, b: f64, c: f64) -> Result<Self> {
        if !(b.is_finite() && c.is_finite()) {
            return Err(Error::Parameter(format!("2F1 parameters must be finite (b={b}, c={c})")));
        }
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(1.0);
        for k in 1..=n {
            let km1 = (k - 1) as f64;
            let denom = c + km1;
            if denom.abs() <= 64.0 * f64::EPSILON * c.abs().max(1.0) {
                return Err(Error::Parameter(format!("2F1 denominator (c)_k vanishes: c = {c}, k = {}", k - 1)));
            }
            let prev = coeffs[k - 1];
            coeffs.push(prev * (km1 - n as f64) * (b + km1) / (denom * k as f64));
        }
        Ok(Self { n, b, c, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * z + a)
    }

    pub fn derivative(&self, z: f64) -> f64 {
        self.coeffs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &a)| acc * z + k as f64 * a)
    }

    /// Number of distinct real zeros in the open interval `(lo, hi)`.
    pub fn count_roots_in(&self, lo: f64, hi: f64) -> usize {
        sturm_count(&self.coeffs, lo, hi)
    }
}

pub fn hyp2f1_terminating(n: usize, b: f64, c: f64, z: f64) -> Result<f64> {
    Ok(TerminatingHypergeometric::new(n, b, c)?.eval(z))
}

pub fn hyp2f1_derivative(n: usize, b: f64, c: f64, z: f64) -> Result<f64> {
    Ok(TerminatingHypergeometric::new(n, b, c)?.derivative(z))
}

// Polynomials below are stored low-order first.

fn trim(mut p: Vec<f64>) -> Vec<f64> {
    let scale = p.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    while p.len() > 1 && p.last().is_some_and(|a| a.abs() <= 1e-13 * scale) {
        p.pop();
    }
    if scale > 0.0 {
        p.iter_mut().for_each(|a| *a /= scale);
    }
    p
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn remainder(num: &[f64], den: &[f64]) -> Vec<f64> {
    let mut r = num.to_vec();
    let dl = den.len();
    let lead = den[dl - 1];
    while r.len() >= dl {
        let factor = r[r.len() - 1] / lead;
        let shift = r.len() - dl;
        for (i, &d) in den.iter().enumerate() {
            r[shift + i] -= factor * d;
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0.0);
    }
    r
}

fn sign_changes(chain: &[Vec<f64>], x: f64) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for p in chain {
        let v = poly_eval(p, x);
        if v != 0.0 {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
    }
    count
}

fn sturm_count(coeffs: &[f64], lo: f64, hi: f64) -> usize {
    let p0 = trim(coeffs.to_vec());
    if p0.len() < 2 {
        return 0;
    }
    let p1 = trim(p0.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect());
    let mut chain = vec![p0, p1];
    loop {
        let len = chain.len();
        let prev = &chain[len - 1];
        if prev.len() < 2 {
            break;
        }
        let r = trim(remainder(&chain[len - 2], prev).iter().map(|a| -a).collect());
        if r.iter().all(|&a| a == 0.0) {
            break;
        }
        chain.push(r);
    }
    // Nudge the endpoints inward so roots sitting exactly on them are excluded.
    let width = hi - lo;
    let a = lo + 1e-14 * width;
    let b = hi - 1e-14 * width;
    sign_changes(&chain, a).saturating_sub(sign_changes(&chain, b))
}
