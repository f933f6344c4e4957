//! Numerov shooting solver for the approximated radial equation
//!
//! ```text
//! u'' = W(r; E) u,
//! W = -Q^2 (E^2 - m0^2 c^4) + 2 Q^2 (E + m0 c^2) V(r) + L C(r),
//! ```
//!
//! where `L` is the angular barrier and `C(r)` is either the exponential
//! surrogate `b^2 e^{-br} / (1 - q e^{-br})^2` or the exact `1/r^2`.
//!
//! The equation is integrated on a logarithmic grid `x = ln r` for
//! `y = u / sqrt(r)`, which satisfies `y'' = (r^2 W + 1/4) y`. The outward
//! solution starts from the regular power law at `r_min`, the inward one
//! vanishes at `r_max`, and the two are compared through a normalized
//! discrete Wronskian at the matching point. The Wronskian is continuous in
//! `E` and vanishes exactly at the discrete eigenvalues.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{centrifugal_approx, potential_value, PotentialSpec, QuantumNumbers, UnitSystem};
use crate::spectrum::brent;

pub const DEFAULT_STEPS: usize = 200_000;
pub const MIN_STEPS: usize = 10_000;
/// Default number of energies probed across the bound-state window.
pub const DEFAULT_SCAN_POINTS: usize = 192;
/// Target for `|E(h) - E(h/2)|` in the step-halving loop.
pub const REFINE_TOLERANCE: f64 = 1e-8;
const MAX_HALVINGS: usize = 4;
const MAX_RANGE_EXTENSIONS: usize = 3;
const RESCALE_ABOVE: f64 = 1e100;
/// Decay exponent required between the outer turning point and `r_max`.
const DECAY_LENGTHS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centrifugal {
    /// The exponential surrogate the closed forms are exact for.
    #[default]
    Approximate,
    /// The true `1/r^2` barrier, for measuring the approximation error.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingProblem {
    pub spec: PotentialSpec,
    pub units: UnitSystem,
    pub quantum: QuantumNumbers,
    pub r_min: f64,
    pub r_max: f64,
    pub steps: usize,
    pub match_r: f64,
    pub centrifugal: Centrifugal,
    pub scan_points: usize,
}

impl ShootingProblem {
    /// Defaults: `r_min = 1e-6/b`, `r_max = 30/b`, `2e5` steps, matching at
    /// the minimum of `2 Q^2 m0 c^2 V + L C` over `r >= 0.1/b`.
    pub fn new(spec: PotentialSpec, units: UnitSystem, quantum: QuantumNumbers) -> Result<Self> {
        spec.validate()?;
        units.validate()?;
        quantum.validate()?;
        let mut prob = Self {
            spec,
            units,
            quantum,
            r_min: 1e-6 / spec.beta,
            r_max: 30.0 / spec.beta,
            steps: DEFAULT_STEPS,
            match_r: 1.0 / spec.beta,
            centrifugal: Centrifugal::Approximate,
            scan_points: DEFAULT_SCAN_POINTS,
        };
        prob.match_r = prob.effective_minimum()?;
        prob.validate()?;
        Ok(prob)
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_centrifugal(mut self, centrifugal: Centrifugal) -> Self {
        self.centrifugal = centrifugal;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        self.units.validate()?;
        self.quantum.validate()?;
        if !(self.r_min > 0.0 && self.r_min < self.match_r && self.match_r < self.r_max) {
            return Err(Error::Parameter(format!(
                "need 0 < r_min < match_r < r_max, got {} / {} / {}",
                self.r_min, self.match_r, self.r_max
            )));
        }
        if !self.r_max.is_finite() {
            return Err(Error::Parameter("r_max must be finite".into()));
        }
        if self.steps < MIN_STEPS {
            return Err(Error::Parameter(format!("need >= {MIN_STEPS} steps, got {}", self.steps)));
        }
        if self.r_max * self.spec.beta < 25.0 {
            return Err(Error::Parameter(format!("r_max * beta = {} must be >= 25", self.r_max * self.spec.beta)));
        }
        if self.scan_points < 16 {
            return Err(Error::Parameter("energy scan needs >= 16 points".into()));
        }
        if let Some(pole) = self.spec.pole_radius() {
            if pole >= self.r_min {
                return Err(Error::Pole { r: pole });
            }
        }
        Ok(())
    }

    fn effective_minimum(&self) -> Result<f64> {
        let q = self.units.q_factor();
        let mc2 = self.units.rest_energy(self.spec.m0);
        let lambda = self.quantum.barrier();
        let lo = (0.1 / self.spec.beta).ln();
        let hi = (0.5 * self.r_max).ln();
        let mut best = (f64::INFINITY, self.match_r);
        for k in 0..=2000 {
            let r = (lo + (hi - lo) * k as f64 / 2000.0).exp();
            let v = 2.0 * q * q * mc2 * potential_value(&self.spec, r)? + lambda * self.barrier_profile(r)?;
            if v < best.0 {
                best = (v, r);
            }
        }
        Ok(best.1)
    }

    fn barrier_profile(&self, r: f64) -> Result<f64> {
        match self.centrifugal {
            Centrifugal::Approximate => centrifugal_approx(&self.spec, r),
            Centrifugal::Exact => Ok(1.0 / (r * r)),
        }
    }
}

/// Energy-independent samples of the equation on the logarithmic grid.
struct Grid {
    h: f64,
    r: Vec<f64>,
    r2: Vec<f64>,
    r2v: Vec<f64>,
    r2c: Vec<f64>,
    match_idx: usize,
    q2: f64,
    mc2: f64,
    lambda: f64,
}

impl Grid {
    fn new(prob: &ShootingProblem) -> Result<Self> {
        prob.validate()?;
        let n = prob.steps;
        let x0 = prob.r_min.ln();
        let h = (prob.r_max.ln() - x0) / n as f64;
        let mut r = Vec::with_capacity(n + 1);
        let mut r2 = Vec::with_capacity(n + 1);
        let mut r2v = Vec::with_capacity(n + 1);
        let mut r2c = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let rk = if k == n { prob.r_max } else { (x0 + h * k as f64).exp() };
            let rr = rk * rk;
            r.push(rk);
            r2.push(rr);
            r2v.push(rr * potential_value(&prob.spec, rk)?);
            r2c.push(rr * prob.barrier_profile(rk)?);
        }
        let match_idx = (((prob.match_r.ln() - x0) / h).round() as usize).clamp(2, n - 3);
        let q = prob.units.q_factor();
        Ok(Self {
            h,
            r,
            r2,
            r2v,
            r2c,
            match_idx,
            q2: q * q,
            mc2: prob.units.rest_energy(prob.spec.m0),
            lambda: prob.quantum.barrier(),
        })
    }

    fn len(&self) -> usize {
        self.r.len()
    }

    /// Energy-dependent factors `(a, b)` with `r^2 W = a r^2 + b r^2 V + L r^2 C`.
    fn energy_terms(&self, energy: f64) -> (f64, f64) {
        (-self.q2 * (energy * energy - self.mc2 * self.mc2), 2.0 * self.q2 * (energy + self.mc2))
    }

    /// `r^2 W` at index `k`.
    fn r2w(&self, k: usize, terms: (f64, f64)) -> f64 {
        terms.0 * self.r2[k] + terms.1 * self.r2v[k] + self.lambda * self.r2c[k]
    }

    /// Numerov factor `h^2 F / 12` with `F = r^2 W + 1/4`.
    fn t(&self, k: usize, terms: (f64, f64)) -> Result<f64> {
        let f = self.r2w(k, terms) + 0.25;
        if !f.is_finite() {
            return Err(Error::NonFinite { x: self.r[k], value: f });
        }
        Ok(self.h * self.h * f / 12.0)
    }

    fn sweep(&self, energy: f64) -> Result<Sweep> {
        let terms = self.energy_terms(energy);
        let n = self.len() - 1;
        let m = self.match_idx;

        // Regular power law y ~ r^{sqrt(F)} at the inner edge.
        let f0 = (self.r2w(0, terms) + 0.25).max(0.0);
        let mut t_prev = self.t(0, terms)?;
        let mut t_cur = self.t(1, terms)?;
        let mut y_prev = 1.0;
        let mut y_cur = (self.h * f0.sqrt()).exp();
        let mut out_nodes = 0usize;
        for k in 1..=m {
            let t_next = self.t(k + 1, terms)?;
            let y_next = ((2.0 + 10.0 * t_cur) * y_cur - (1.0 - t_prev) * y_prev) / (1.0 - t_next);
            if k < m && y_next != 0.0 && (y_next > 0.0) != (y_cur > 0.0) {
                out_nodes += 1;
            }
            y_prev = y_cur;
            y_cur = y_next;
            t_prev = t_cur;
            t_cur = t_next;
            if y_cur.abs() > RESCALE_ABOVE {
                y_prev /= RESCALE_ABOVE;
                y_cur /= RESCALE_ABOVE;
            }
        }
        let (o_m, o_m1) = (y_prev, y_cur);

        let mut t_prev = self.t(n, terms)?;
        let mut t_cur = self.t(n - 1, terms)?;
        let mut y_prev = 0.0;
        let mut y_cur = 1.0;
        let mut in_nodes = 0usize;
        for k in (m..n - 1).rev() {
            let t_next = self.t(k, terms)?;
            let y_next = ((2.0 + 10.0 * t_cur) * y_cur - (1.0 - t_prev) * y_prev) / (1.0 - t_next);
            if y_next != 0.0 && (y_next > 0.0) != (y_cur > 0.0) {
                in_nodes += 1;
            }
            y_prev = y_cur;
            y_cur = y_next;
            t_prev = t_cur;
            t_cur = t_next;
            if y_cur.abs() > RESCALE_ABOVE {
                y_prev /= RESCALE_ABOVE;
                y_cur /= RESCALE_ABOVE;
            }
        }
        let (i_m, i_m1) = (y_cur, y_prev);

        let (o_scale, i_scale) = (o_m.hypot(o_m1), i_m.hypot(i_m1));
        let mismatch = (o_m / o_scale) * (i_m1 / i_scale) - (o_m1 / o_scale) * (i_m / i_scale);
        if !mismatch.is_finite() {
            return Err(Error::NonFinite { x: self.r[m], value: mismatch });
        }
        Ok(Sweep { mismatch, nodes: out_nodes + in_nodes })
    }

    /// Largest radius where the solution at `energy` is still oscillatory.
    fn outer_turning_point(&self, energy: f64) -> Option<f64> {
        let terms = self.energy_terms(energy);
        (0..self.len()).rev().find(|&k| self.r2w(k, terms) < 0.0).map(|k| self.r[k])
    }
}

struct Sweep {
    mismatch: f64,
    nodes: usize,
}

/// Normalized Wronskian mismatch between the outward and inward solutions.
pub fn numerov_sweep(prob: &ShootingProblem, energy: f64) -> Result<f64> {
    Ok(Grid::new(prob)?.sweep(energy)?.mismatch)
}

/// Interior nodes of the matched outward/inward solution at `energy`.
pub fn sweep_nodes(prob: &ShootingProblem, energy: f64) -> Result<usize> {
    Ok(Grid::new(prob)?.sweep(energy)?.nodes)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleLevel {
    pub energy: f64,
    pub nodes: usize,
    /// Step count of the finest sweep.
    pub steps: usize,
    /// Last `|E(h) - E(h/2)|`.
    pub step_change: f64,
    pub match_r: f64,
    pub r_max: f64,
}

fn window(grid: &Grid) -> (f64, f64) {
    let margin = 1e-9 * grid.mc2;
    (-grid.mc2 + margin, grid.mc2 - margin)
}

/// Walks the window upward and refines sign changes until a root with at
/// least `n` nodes turns up. Returns the roots visited as `(energy, nodes)`.
fn scan_roots(grid: &Grid, points: usize, n: usize) -> Result<Vec<(f64, usize)>> {
    let (lo, hi) = window(grid);
    let energy = |k: usize| lo + (hi - lo) * k as f64 / (points - 1) as f64;
    let mut roots = Vec::new();
    let mut fa = grid.sweep(lo)?.mismatch;
    for k in 1..points {
        let (a, b) = (energy(k - 1), energy(k));
        let fb = grid.sweep(b)?.mismatch;
        if fa == 0.0 || (fb != 0.0 && (fa > 0.0) != (fb > 0.0)) {
            let e = brent(|e| Ok(grid.sweep(e)?.mismatch), a, b, fa, fb, 0.0)?;
            let nodes = grid.sweep(e)?.nodes;
            roots.push((e, nodes));
            if nodes >= n {
                break;
            }
        }
        fa = fb;
    }
    Ok(roots)
}

/// Root of the mismatch with `n` nodes next to `guess`.
fn root_near(grid: &Grid, guess: f64, n: usize) -> Result<f64> {
    let (lo, hi) = window(grid);
    let mut delta = 1e-7 * grid.mc2;
    while delta < 1e-2 * grid.mc2 {
        let (a, b) = ((guess - delta).max(lo), (guess + delta).min(hi));
        let (fa, fb) = (grid.sweep(a)?.mismatch, grid.sweep(b)?.mismatch);
        if (fa > 0.0) != (fb > 0.0) {
            let e = brent(|e| Ok(grid.sweep(e)?.mismatch), a, b, fa, fb, 0.0)?;
            if grid.sweep(e)?.nodes == n {
                return Ok(e);
            }
        }
        delta *= 4.0;
    }
    Err(Error::NonConvergence(format!("lost the {n}-node root near E = {guess}")))
}

/// Coarse-resolution root with `n` nodes.
fn locate(prob: &ShootingProblem, n: usize) -> Result<f64> {
    let coarse = ShootingProblem { steps: (prob.steps / 8).max(MIN_STEPS), ..*prob };
    let grid = Grid::new(&coarse)?;
    let mut points = prob.scan_points;
    for _ in 0..3 {
        let roots = scan_roots(&grid, points, n)?;
        if roots.is_empty() {
            break;
        }
        if let Some(&(e, _)) = roots.iter().find(|&&(_, nodes)| nodes == n) {
            return Ok(e);
        }
        points *= 2;
    }
    Err(Error::NoBoundState)
}

/// Single-resolution eigenvalue with `n` nodes at `prob.steps`.
pub fn eigenvalue_at_resolution(prob: &ShootingProblem, n: u32) -> Result<f64> {
    let guess = locate(prob, n as usize)?;
    root_near(&Grid::new(prob)?, guess, n as usize)
}

/// Eigenvalue with `n` interior nodes, refined by step halving.
///
/// The coarse scan uses `prob` as given. Once a root is found, the matching
/// point moves to the outer turning point at that energy, `r_max` is grown
/// until the classically forbidden tail spans enough decay lengths, and the
/// step count is doubled until consecutive energies differ by less than
/// [`REFINE_TOLERANCE`]. The returned energy is Richardson-extrapolated.
pub fn oracle_eigenvalue(prob: &ShootingProblem, n: u32) -> Result<OracleLevel> {
    let n = n as usize;
    let mut prob = *prob;
    let mut located = None;
    for _ in 0..=MAX_RANGE_EXTENSIONS {
        let e0 = locate(&prob, n)?;
        let grid = Grid::new(&ShootingProblem { steps: (prob.steps / 8).max(MIN_STEPS), ..prob })?;
        let Some(turning) = grid.outer_turning_point(e0) else {
            return Err(Error::NoBoundState);
        };
        let decay = grid.q2.sqrt() * (grid.mc2 * grid.mc2 - e0 * e0).max(0.0).sqrt();
        let needed = turning + DECAY_LENGTHS / decay;
        if needed <= prob.r_max {
            located = Some((e0, turning));
            break;
        }
        let r_max = 1.25 * needed;
        let widen = r_max.ln() - prob.r_min.ln();
        let steps = (prob.steps as f64 * widen / (prob.r_max.ln() - prob.r_min.ln())).ceil();
        prob.r_max = r_max;
        prob.steps = steps as usize;
    }
    // A root whose tail never fits in the box is an artefact of the outer wall.
    let Some((e0, turning)) = located else { return Err(Error::NoBoundState) };
    if turning > prob.r_min && turning < prob.r_max {
        prob.match_r = turning;
    }

    let mut previous = root_near(&Grid::new(&prob)?, e0, n)?;
    for _ in 0..MAX_HALVINGS {
        prob.steps *= 2;
        let current = root_near(&Grid::new(&prob)?, previous, n)?;
        let change = (current - previous).abs();
        if change < REFINE_TOLERANCE {
            return Ok(OracleLevel {
                energy: current + (current - previous) / 15.0,
                nodes: n,
                steps: prob.steps,
                step_change: change,
                match_r: prob.match_r,
                r_max: prob.r_max,
            });
        }
        previous = current;
    }
    Err(Error::NonConvergence(format!("step halving did not settle the {n}-node level below {REFINE_TOLERANCE}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Component;
    use crate::spectrum::{solve_level, SolverConfig};

    fn problem(v0: f64, v1: f64, beta: f64, q: QuantumNumbers) -> ShootingProblem {
        let spec = PotentialSpec::new(v0, v1, beta, 1.0, 1.0).unwrap();
        ShootingProblem::new(spec, UnitSystem::natural(), q).unwrap()
    }

    fn analytic(prob: &ShootingProblem) -> f64 {
        solve_level(&prob.spec, &prob.units, &prob.quantum, &SolverConfig::default()).unwrap().energy
    }

    #[test]
    fn default_problem_layout() {
        let p = problem(1.0, 0.0, 0.2, QuantumNumbers::kg(0, 0));
        assert_eq!(p.steps, DEFAULT_STEPS);
        assert!((p.r_min - 5e-6).abs() < 1e-18);
        assert!((p.r_max - 150.0).abs() < 1e-12);
        assert!(p.r_min < p.match_r && p.match_r < p.r_max);
        assert!(p.with_steps(100).validate().is_err());
    }

    #[test]
    fn free_equation_has_no_bound_state() {
        let p = problem(0.0, 0.0, 0.2, QuantumNumbers::kg(0, 0));
        let grid = Grid::new(&p).unwrap();
        assert!(scan_roots(&grid, 64, 0).unwrap().is_empty());
        assert_eq!(oracle_eigenvalue(&p, 0), Err(Error::NoBoundState));
    }

    #[test]
    fn s_wave_ground_state_matches_analytic() {
        let p = problem(1.0, 0.0, 0.2, QuantumNumbers::kg(0, 0));
        let level = oracle_eigenvalue(&p, 0).unwrap();
        assert!((level.energy - analytic(&p)).abs() < 1e-6);
        assert!(numerov_sweep(&p, analytic(&p)).unwrap().abs() < 1e-6);
    }

    #[test]
    fn p_wave_ground_state_matches_analytic() {
        let p = problem(1.0, 0.0, 0.2, QuantumNumbers::kg(0, 1));
        let level = oracle_eigenvalue(&p, 0).unwrap();
        assert!((level.energy - analytic(&p)).abs() < 1e-6);
    }

    #[test]
    fn dirac_upper_component() {
        let q = QuantumNumbers::dirac(1, 2, Component::Upper).unwrap();
        let p = problem(1.0, 0.5, 0.2, q);
        let level = oracle_eigenvalue(&p, 1).unwrap();
        assert!((level.energy - analytic(&p)).abs() < 1e-6);
    }

    #[test]
    fn energies_increase_with_node_count() {
        let p = problem(1.0, 0.5, 0.1, QuantumNumbers::kg(0, 1));
        let e: Vec<f64> = (0..3).map(|n| oracle_eigenvalue(&p, n).unwrap().energy).collect();
        assert!(e.windows(2).all(|w| w[0] < w[1]), "{e:?}");
    }

    #[test]
    fn mismatch_is_continuous_between_samples() {
        let p = problem(1.0, 0.5, 0.2, QuantumNumbers::kg(0, 0)).with_steps(20_000);
        let grid = Grid::new(&p).unwrap();
        let coarse = scan_roots(&grid, 64, 9).unwrap();
        let fine = scan_roots(&grid, 256, 9).unwrap();
        assert_eq!(coarse.len(), fine.len());
        assert!(coarse.iter().zip(&fine).all(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() < 1e-12));
    }

    #[test]
    fn exact_barrier_differs_from_surrogate() {
        let base = problem(1.0, 0.0, 0.2, QuantumNumbers::kg(0, 1));
        let approx = eigenvalue_at_resolution(&base, 0).unwrap();
        let exact = eigenvalue_at_resolution(&base.with_centrifugal(Centrifugal::Exact), 0).unwrap();
        assert!((approx - exact).abs() > 1e-6);
        assert!((approx - exact).abs() < 0.1);
    }

    #[test]
    fn unbound_high_level_is_rejected() {
        let p = problem(0.2, 0.0, 0.5, QuantumNumbers::kg(6, 0));
        assert!(oracle_eigenvalue(&p, 6).is_err());
    }
}
