//! The acceptance suite: analytic results checked against the shooting
//! oracle, limiting cases, normalization, node counts and the numerical
//! kernels.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{eigenvalue_at_resolution, oracle_eigenvalue, ShootingProblem};
use crate::potential::{coulomb_limit_spec, Component, PotentialSpec, QuantumNumbers, UnitSystem};
use crate::specfun::{hyp2f1_terminating, ln_gamma};
use crate::spectrum::{
    angular_label, closed_form_residual_dirac, closed_form_residual_kg, coulomb_energy, hulthen_residual,
    manning_rosen_residual, solve_level, DBranch, EnergyLevel, SolverConfig,
};
use crate::wavefunction::{dirac_pair, kg_wavefunction, norm_integral_identity, norm_integral_quadrature, NormSource};

/// Deliberate corruptions used to prove that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Solve the analytic spectrum on the unphysical branch of `D`.
    NegativeDBranch,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub fault: Option<Fault>,
    /// Criterion ids to run; empty runs all of them.
    pub criteria: Vec<u8>,
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "oracle equivalence (Klein-Gordon)"),
    (2, "oracle equivalence (Dirac upper)"),
    (3, "Coulomb limit"),
    (4, "closed-form consistency"),
    (5, "normalization"),
    (6, "node theorem"),
    (7, "Dirac/Klein-Gordon degeneracy"),
    (8, "special-function kernel"),
    (9, "Dirac coupled-equation residual"),
];

pub fn criterion_name(id: u8) -> Option<&'static str> {
    CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, name)| *name)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    /// Worst value of the measured quantity.
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
    pub elapsed_s: f64,
}

impl CriterionOutcome {
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] criterion {} {}: measured {:.3e} (threshold {:.1e}) in {:.2} s; {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.threshold,
            self.elapsed_s,
            self.detail
        )
    }
}

/// Analytic and oracle energies for one level of the acceptance grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub equation: String,
    pub beta: f64,
    pub v0: f64,
    pub v1: f64,
    pub n: u32,
    pub angular: i64,
    pub analytic: Option<f64>,
    pub oracle: Option<f64>,
    pub difference: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub outcomes: Vec<CriterionOutcome>,
    pub oracle_rows: Vec<OracleRow>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CriterionOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

/// `(V0, V1)` pairs of the acceptance grid.
pub const DEPTHS: [(f64, f64); 3] = [(1.0, 0.0), (1.0, 0.5), (0.5, 0.25)];
pub const BETAS: [f64; 2] = [0.1, 0.2];
pub const KAPPAS: [i32; 3] = [1, -1, 2];

/// Every `q = 1`, `m0 = 1` potential of the acceptance grid.
pub fn acceptance_potentials() -> Vec<PotentialSpec> {
    BETAS
        .iter()
        .flat_map(|&beta| {
            DEPTHS
                .iter()
                .map(move |&(v0, v1)| PotentialSpec::new(v0, v1, beta, 1.0, 1.0).expect("acceptance grid is valid"))
        })
        .collect()
}

pub fn kg_grid() -> Vec<(PotentialSpec, QuantumNumbers)> {
    let mut out = Vec::new();
    for spec in acceptance_potentials() {
        for ell in 0..2 {
            for n in 0..3 {
                out.push((spec, QuantumNumbers::kg(n, ell)));
            }
        }
    }
    out
}

pub fn dirac_grid() -> Vec<(PotentialSpec, QuantumNumbers)> {
    let mut out = Vec::new();
    for spec in acceptance_potentials() {
        for kappa in KAPPAS {
            for n in 0..3 {
                let q = QuantumNumbers::dirac(n, kappa, Component::Upper).expect("kappa != 0");
                out.push((spec, q));
            }
        }
    }
    out
}

fn solver_config(options: &VerifyOptions) -> SolverConfig {
    let mut config = SolverConfig::default();
    if options.fault == Some(Fault::NegativeDBranch) {
        config.d_branch = DBranch::Negative;
    }
    config
}

fn describe(spec: &PotentialSpec, q: &QuantumNumbers) -> String {
    let angular = if q.is_dirac() { "kappa" } else { "l" };
    format!("(beta={}, V0={}, V1={}, {angular}={}, n={})", spec.beta, spec.v0, spec.v1, angular_label(q), q.n)
}

/// Collects a worst-case metric and the first few offending cases.
struct Tally {
    worst: f64,
    failures: Vec<String>,
    checked: usize,
}

impl Tally {
    fn new() -> Self {
        Self { worst: 0.0, failures: Vec::new(), checked: 0 }
    }

    fn record(&mut self, value: f64, threshold: f64, label: impl FnOnce() -> String) {
        self.checked += 1;
        let bad = value.is_nan() || value > threshold;
        self.worst = if value.is_nan() { f64::INFINITY } else { self.worst.max(value) };
        if bad {
            self.failures.push(format!("{} -> {value:.3e}", label()));
        }
    }

    fn error(&mut self, label: String, err: &Error) {
        self.checked += 1;
        self.worst = f64::INFINITY;
        self.failures.push(format!("{label} -> {err}"));
    }

    fn finish(self, id: u8, threshold: f64, started: Instant, time_limit: Option<f64>) -> CriterionOutcome {
        let elapsed = started.elapsed().as_secs_f64();
        let in_time = time_limit.is_none_or(|limit| elapsed < limit);
        let mut detail = if self.failures.is_empty() {
            format!("{} cases", self.checked)
        } else {
            let shown: Vec<_> = self.failures.iter().take(3).cloned().collect();
            format!("{} of {} cases failed: {}", self.failures.len(), self.checked, shown.join("; "))
        };
        if let (false, Some(limit)) = (in_time, time_limit) {
            detail.push_str(&format!("; runtime exceeded {limit} s"));
        }
        CriterionOutcome {
            id,
            name: criterion_name(id).unwrap_or("unknown").to_string(),
            passed: self.failures.is_empty() && in_time,
            measured: self.worst,
            threshold,
            detail,
            elapsed_s: elapsed,
        }
    }
}

fn oracle_equivalence(
    id: u8,
    grid: Vec<(PotentialSpec, QuantumNumbers)>,
    options: &VerifyOptions,
    rows: &mut Vec<OracleRow>,
) -> CriterionOutcome {
    const THRESHOLD: f64 = 1e-6;
    let started = Instant::now();
    let units = UnitSystem::natural();
    let config = solver_config(options);
    let results: Vec<_> = grid
        .par_iter()
        .map(|(spec, q)| {
            let analytic = solve_level(spec, &units, q, &config).map(|l| l.energy);
            let oracle =
                ShootingProblem::new(*spec, units, *q).and_then(|p| oracle_eigenvalue(&p, q.n)).map(|l| l.energy);
            (spec, q, analytic, oracle)
        })
        .collect();
    let mut tally = Tally::new();
    for (spec, q, analytic, oracle) in results {
        let label = describe(spec, q);
        let difference = match (&analytic, &oracle) {
            (Ok(a), Ok(o)) => {
                let d = (a - o).abs();
                tally.record(d, THRESHOLD, || label.clone());
                Some(d)
            }
            (Err(e), _) => {
                tally.error(format!("{label} analytic"), e);
                None
            }
            (_, Err(e)) => {
                tally.error(format!("{label} oracle"), e);
                None
            }
        };
        rows.push(OracleRow {
            equation: if q.is_dirac() { "dirac" } else { "kg" }.to_string(),
            beta: spec.beta,
            v0: spec.v0,
            v1: spec.v1,
            n: q.n,
            angular: angular_label(q),
            analytic: analytic.ok(),
            oracle: oracle.ok(),
            difference,
        });
    }
    tally.finish(id, THRESHOLD, started, Some(30.0))
}

fn coulomb_limit() -> CriterionOutcome {
    const THRESHOLD: f64 = 1e-4;
    const ZETA: f64 = 0.15;
    let started = Instant::now();
    let units = UnitSystem::natural();
    let mut tally = Tally::new();
    for ell in 0..2 {
        for n in 0..2 {
            let q = QuantumNumbers::kg(n, ell);
            let label = format!("(l={ell}, n={n})");
            let target = match coulomb_energy(ZETA, n, ell, 1.0) {
                Ok(t) => t,
                Err(e) => {
                    tally.error(label, &e);
                    continue;
                }
            };
            let errors: Result<Vec<f64>> = [1e-2, 1e-3, 1e-4]
                .iter()
                .map(|&beta| {
                    let spec = coulomb_limit_spec(ZETA, beta, 1.0, &units)?;
                    let level = solve_level(&spec, &units, &q, &SolverConfig::default())?;
                    Ok((level.energy - target).abs())
                })
                .collect();
            match errors {
                Ok(errs) => {
                    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
                    if !monotone {
                        tally.failures.push(format!("{label} not decreasing: {errs:?}"));
                    }
                    tally.record(errs[2], THRESHOLD, || label.clone());
                }
                Err(e) => tally.error(label, &e),
            }
        }
    }
    tally.finish(3, THRESHOLD, started, Some(5.0))
}

fn solved(
    grid: &[(PotentialSpec, QuantumNumbers)],
    config: &SolverConfig,
) -> Vec<(PotentialSpec, QuantumNumbers, Result<EnergyLevel>)> {
    let units = UnitSystem::natural();
    grid.par_iter().map(|(s, q)| (*s, *q, solve_level(s, &units, q, config))).collect()
}

fn closed_form_consistency(options: &VerifyOptions) -> CriterionOutcome {
    const THRESHOLD: f64 = 1e-9;
    let started = Instant::now();
    let units = UnitSystem::natural();
    let config = solver_config(options);
    let mut tally = Tally::new();
    for (spec, q, level) in solved(&kg_grid(), &config) {
        let label = describe(&spec, &q);
        let level = match level {
            Ok(l) => l,
            Err(e) => {
                tally.error(label, &e);
                continue;
            }
        };
        let (e, n) = (level.energy, q.n);
        let ell = angular_label(&q) as u32;
        match closed_form_residual_kg(&spec, &units, &q, e) {
            Ok(r) => tally.record(r.abs(), THRESHOLD, || format!("{label} kg")),
            Err(err) => tally.error(format!("{label} kg"), &err),
        }
        let b = 1.0 / spec.beta;
        let alpha = 0.5 + (0.25 + 2.0 * b * b * spec.v1).sqrt();
        match manning_rosen_residual(2.0 * b * b * spec.v0, alpha, b, spec.m0, n, ell, e) {
            Ok(r) => tally.record(r.abs(), THRESHOLD, || format!("{label} manning-rosen")),
            Err(err) => tally.error(format!("{label} manning-rosen"), &err),
        }
        if spec.v1 == 0.0 {
            let r = hulthen_residual(spec.v0, spec.beta, spec.m0, n, ell, e);
            tally.record(r.abs(), THRESHOLD, || format!("{label} hulthen"));
        }
    }
    for (spec, q, level) in solved(&dirac_grid(), &config) {
        let label = describe(&spec, &q);
        match level.and_then(|l| closed_form_residual_dirac(&spec, &units, &q, l.energy)) {
            Ok(r) => tally.record(r.abs(), THRESHOLD, || format!("{label} dirac")),
            Err(err) => tally.error(label, &err),
        }
    }
    tally.finish(4, THRESHOLD, started, None)
}

fn normalization(options: &VerifyOptions) -> CriterionOutcome {
    const THRESHOLD: f64 = 1e-8;
    let started = Instant::now();
    let units = UnitSystem::natural();
    let config = solver_config(options);
    let mut tally = Tally::new();
    for (spec, q, level) in solved(&kg_grid(), &config) {
        let label = describe(&spec, &q);
        let norm = level.and_then(|l| kg_wavefunction(&spec, &units, &l)).and_then(|u| {
            if u.norm_source() != NormSource::ClosedForm {
                return Err(Error::NonNormalizable("closed-form constant was replaced".into()));
            }
            u.norm_integral()
        });
        match norm {
            Ok(v) => tally.record((v - 1.0).abs(), THRESHOLD, || label.clone()),
            Err(e) => tally.error(label, &e),
        }
    }
    // The integral identity for degrees 0..3 at the exponents of each level.
    for (spec, q, level) in solved(&kg_grid(), &config) {
        let Ok(level) = level else { continue };
        let (p, qq) = (2.0 * level.coeffs.a1 - 1.0, 2.0 + 2.0 * level.coeffs.d);
        for degree in 0..4 {
            let label = format!("identity degree {degree} at {}", describe(&spec, &q));
            let rel = norm_integral_identity(degree, p, qq).and_then(|closed| {
                let quad = norm_integral_quadrature(degree, p, qq)?;
                Ok(((closed - quad) / closed).abs())
            });
            match rel {
                Ok(v) => tally.record(v, THRESHOLD, || label.clone()),
                Err(e) => tally.error(label, &e),
            }
        }
    }
    tally.finish(5, THRESHOLD, started, None)
}

fn node_theorem(options: &VerifyOptions) -> CriterionOutcome {
    let started = Instant::now();
    let units = UnitSystem::natural();
    let config = solver_config(options);
    let mut tally = Tally::new();
    let mut grid = kg_grid();
    grid.extend(dirac_grid());
    for (spec, q, level) in solved(&grid, &config) {
        let label = describe(&spec, &q);
        let nodes = level.and_then(|l| {
            if q.is_dirac() {
                Ok(dirac_pair(&spec, &units, &l, false)?.0.count_nodes())
            } else {
                Ok(kg_wavefunction(&spec, &units, &l)?.count_nodes())
            }
        });
        match nodes {
            Ok(count) => {
                let off = (count as f64 - f64::from(q.n)).abs();
                tally.record(off, 0.0, || format!("{label} has {count} nodes"));
            }
            Err(e) => tally.error(label, &e),
        }
    }
    tally.finish(6, 0.0, started, None)
}

fn degeneracy(options: &VerifyOptions) -> CriterionOutcome {
    const THRESHOLD: f64 = 1e-12;
    let started = Instant::now();
    let units = UnitSystem::natural();
    let config = solver_config(options);
    let mut tally = Tally::new();
    for (spec, q, level) in solved(&kg_grid(), &config) {
        let ell = angular_label(&q) as i32;
        let label = describe(&spec, &q);
        let kg = match level {
            Ok(l) => l.energy,
            Err(e) => {
                tally.error(label, &e);
                continue;
            }
        };
        let kappas = if ell == 0 { vec![1] } else { vec![ell + 1, -ell] };
        for kappa in kappas {
            let dq = QuantumNumbers::dirac(q.n, kappa, Component::Upper)
                .and_then(|dq| solve_level(&spec, &units, &dq, &config));
            match dq {
                Ok(d) => tally.record((d.energy - kg).abs(), THRESHOLD, || format!("{label} kappa={kappa}")),
                Err(e) => tally.error(format!("{label} kappa={kappa}"), &e),
            }
        }
    }
    tally.finish(7, THRESHOLD, started, None)
}

/// `(a)_k` by direct multiplication.
fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).map(|j| a + j as f64).product()
}

/// Term-by-term summation with every Pochhammer symbol rebuilt from scratch.
/// Returns the sum and the sum of term magnitudes.
fn naive_hyp2f1(n: usize, b: f64, c: f64, z: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut size = 0.0;
    for k in 0..=n {
        let factorial: f64 = (1..=k).map(|j| j as f64).product();
        let term = pochhammer(-(n as f64), k) * pochhammer(b, k) / (pochhammer(c, k) * factorial) * z.powi(k as i32);
        sum += term;
        size += term.abs();
    }
    (sum, size)
}

/// Worst `|F - F_naive| / sum |t_k|` over `cases` seeded random draws, plus
/// the worst plain relative difference for reference.
pub fn hypergeometric_agreement(cases: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut scaled, mut plain) = (0.0f64, 0.0f64);
    for _ in 0..cases {
        let n = rng.gen_range(0..=12usize);
        let b = rng.gen_range(-20.0..20.0);
        let c = rng.gen_range(0.5..=20.0);
        let z = rng.gen_range(0.0..=1.0);
        let fast = hyp2f1_terminating(n, b, c, z)?;
        let (naive, size) = naive_hyp2f1(n, b, c, z);
        scaled = scaled.max((fast - naive).abs() / size);
        if naive != 0.0 {
            plain = plain.max(((fast - naive) / naive).abs());
        }
    }
    Ok((scaled, plain))
}

/// Worst `|lnG(x+1) - lnG(x) - ln x|` relative to `max(1, |lnG(x+1)|)`.
pub fn ln_gamma_recurrence(samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..samples {
        let x = 0.05 + 150.0 * (k as f64 / samples as f64).powi(2);
        let next = ln_gamma(x + 1.0)?;
        let err = (next - ln_gamma(x)? - x.ln()).abs() / next.abs().max(1.0);
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Ratios `|E(h) - E(h/2)| / |E(h/2) - E(h/4)|` from the coarsest resolution
/// up. Fourth-order convergence gives ratios near 16.
pub fn numerov_order_ratios(prob: &ShootingProblem, n: u32, halvings: usize) -> Result<Vec<f64>> {
    let energies = (0..=halvings)
        .map(|k| eigenvalue_at_resolution(&prob.with_steps(prob.steps << k), n))
        .collect::<Result<Vec<f64>>>()?;
    let diffs: Vec<f64> = energies.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    Ok(diffs.windows(2).map(|w| w[0] / w[1]).collect())
}

/// A problem whose discretization error stays well above rounding at the
/// minimum step count: the logarithmic grid is stretched by a tiny `r_min`.
pub fn numerov_order_problem() -> Result<(ShootingProblem, u32)> {
    let spec = PotentialSpec::new(1.0, 0.5, 0.2, 1.0, 1.0)?;
    let mut prob = ShootingProblem::new(spec, UnitSystem::natural(), QuantumNumbers::kg(1, 1))?
        .with_steps(crate::oracle::MIN_STEPS);
    prob.r_min = 1e-100 / spec.beta;
    Ok((prob, 1))
}

fn special_functions() -> CriterionOutcome {
    let started = Instant::now();
    let mut tally = Tally::new();
    let mut parts = Vec::new();
    match hypergeometric_agreement(1000, 0x5eed) {
        Ok((scaled, _)) => {
            parts.push(format!("2F1 {scaled:.2e}/1e-13"));
            tally.record(scaled / 1e-13, 1.0, || format!("2F1 agreement {scaled:.3e}"));
        }
        Err(e) => tally.error("2F1".into(), &e),
    }
    match ln_gamma_recurrence(2000) {
        Ok(err) => {
            parts.push(format!("lnGamma {err:.2e}/1e-12"));
            tally.record(err / 1e-12, 1.0, || format!("lnGamma recurrence {err:.3e}"));
        }
        Err(e) => tally.error("lnGamma".into(), &e),
    }
    match numerov_order_problem().and_then(|(p, n)| numerov_order_ratios(&p, n, 3)) {
        Ok(ratios) => {
            parts.push(format!("Numerov ratios {ratios:.2?} in [12, 20]"));
            let worst = ratios.iter().map(|r| (r - 16.0).abs() / 4.0).fold(0.0, f64::max);
            tally.record(worst, 1.0, || format!("Numerov ratios {ratios:.2?}"));
        }
        Err(e) => tally.error("Numerov order".into(), &e),
    }
    let mut outcome = tally.finish(8, 1.0, started, None);
    outcome.detail = format!("{}; {} (measured is worst error / tolerance)", outcome.detail, parts.join(", "));
    outcome
}

fn dirac_residual(options: &VerifyOptions) -> CriterionOutcome {
    const THRESHOLD: f64 = 1e-8;
    const H: f64 = 1e-3;
    let started = Instant::now();
    let units = UnitSystem::natural();
    let config = solver_config(options);
    let mut tally = Tally::new();
    for (spec, q, level) in solved(&dirac_grid(), &config) {
        let label = describe(&spec, &q);
        let kappa = f64::from(q.kappa().unwrap_or(0));
        let worst = level.and_then(|l| {
            let (f, g) = dirac_pair(&spec, &units, &l, false)?;
            let mut worst = 0.0f64;
            for k in 0..=600 {
                let r = 0.1 + (30.0 - 0.1) * f64::from(k) / 600.0;
                let fr = |x: f64| f.value_at(x);
                let df = (-fr(r + 2.0 * H)? + 8.0 * fr(r + H)? - 8.0 * fr(r - H)? + fr(r - 2.0 * H)?) / (12.0 * H);
                let lhs = units.hbar_c() * (df - kappa * fr(r)? / r);
                let rhs = (units.rest_energy(spec.m0) + l.energy) * g.value_at(r)?;
                worst = worst.max((lhs - rhs).abs());
            }
            Ok(worst)
        });
        match worst {
            Ok(v) => tally.record(v, THRESHOLD, || label.clone()),
            Err(e) => tally.error(label, &e),
        }
    }
    tally.finish(9, THRESHOLD, started, None)
}

/// Runs the selected criteria in id order.
pub fn run(options: &VerifyOptions) -> Report {
    let selected = |id: u8| options.criteria.is_empty() || options.criteria.contains(&id);
    let mut report = Report::default();
    for (id, _) in CRITERIA {
        if !selected(id) {
            continue;
        }
        let outcome = match id {
            1 => oracle_equivalence(1, kg_grid(), options, &mut report.oracle_rows),
            2 => oracle_equivalence(2, dirac_grid(), options, &mut report.oracle_rows),
            3 => coulomb_limit(),
            4 => closed_form_consistency(options),
            5 => normalization(options),
            6 => node_theorem(options),
            7 => degeneracy(options),
            8 => special_functions(),
            _ => dirac_residual(options),
        };
        report.outcomes.push(outcome);
    }
    report
}
