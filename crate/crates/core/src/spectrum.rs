//! Bound-state energies from the hypergeometric quantization condition
//! `A1 - A2 + 1 + D = -n`, plus the closed-form energy relations used as
//! cross-checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Angular, PotentialSpec, QuantumNumbers, UnitSystem};
use crate::specfun::TerminatingHypergeometric;

/// Which square-root branch `D` takes. Only `Principal` is physical; the
/// other exists so verification can be fed a deliberately wrong solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DBranch {
    #[default]
    Principal,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Uniform scan points across the bound-state window.
    pub grid_points: usize,
    /// Root tolerance in units of `m0 c^2`.
    pub tolerance: f64,
    /// Distance kept from `+-m0 c^2`, in units of `m0 c^2`.
    pub window_margin: f64,
    pub d_branch: DBranch,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { grid_points: 512, tolerance: 1e-12, window_margin: 1e-9, d_branch: DBranch::Principal }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 64 {
            return Err(Error::Parameter(format!("scan grid needs >= 64 points, got {}", self.grid_points)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::Parameter(format!("tolerance must be > 0, got {}", self.tolerance)));
        }
        if !(self.window_margin > 0.0 && self.window_margin < 0.5) {
            return Err(Error::Parameter(format!("window margin must lie in (0, 0.5), got {}", self.window_margin)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub a1_real: bool,
    pub a2_real: bool,
    pub d_real: bool,
}

impl Validity {
    pub fn all(&self) -> bool {
        self.a1_real && self.a2_real && self.d_real
    }

    fn first_failure(&self) -> Option<&'static str> {
        if !self.a1_real {
            Some("A1")
        } else if !self.a2_real {
            Some("A2")
        } else if !self.d_real {
            Some("D")
        } else {
            None
        }
    }
}

/// Energy-dependent coefficients of the reduced hypergeometric equation.
/// Invalid square roots are flagged and stored as NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub a1: f64,
    pub a2: f64,
    pub a2sq: f64,
    pub a3sq: f64,
    pub d: f64,
    pub valid: Validity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub energy: f64,
    pub quantum: QuantumNumbers,
    pub residual: f64,
    pub coeffs: CoefficientSet,
    pub bracket: (f64, f64),
}

impl EnergyLevel {
    /// `2F1(-n, -n + 2 A2; 1 + 2 A1; z)` at this level.
    pub fn polynomial(&self) -> Result<TerminatingHypergeometric> {
        let n = self.quantum.n as usize;
        TerminatingHypergeometric::new(n, 2.0 * self.coeffs.a2 - n as f64, 1.0 + 2.0 * self.coeffs.a1)
    }
}

pub fn coefficients(spec: &PotentialSpec, units: &UnitSystem, quantum: &QuantumNumbers, energy: f64) -> CoefficientSet {
    coefficients_with_branch(spec, units, quantum, energy, DBranch::Principal)
}

pub fn coefficients_with_branch(
    spec: &PotentialSpec,
    units: &UnitSystem,
    quantum: &QuantumNumbers,
    energy: f64,
    branch: DBranch,
) -> CoefficientSet {
    let qf = units.q_factor();
    let mc2 = units.rest_energy(spec.m0);
    let scale = qf / spec.beta;
    let a1sq = scale * scale * (mc2 - energy) * (mc2 + energy);
    let coupling = 2.0 * scale * scale * (energy + mc2) / spec.q;
    let a2sq = a1sq + coupling * spec.effective_depth();
    let a3sq = quantum.barrier() + coupling * spec.v1;
    let disc = 0.25 + a3sq / spec.q;

    let valid = Validity { a1_real: a1sq >= 0.0, a2_real: a2sq >= 0.0, d_real: disc >= 0.0 };
    let a1 = if valid.a1_real { a1sq.sqrt() } else { f64::NAN };
    let a2 = if valid.a2_real { a2sq.sqrt() } else { f64::NAN };
    let d = if valid.d_real {
        match branch {
            DBranch::Principal => -0.5 + disc.sqrt(),
            DBranch::Negative => -0.5 - disc.sqrt(),
        }
    } else {
        f64::NAN
    };
    CoefficientSet { a1, a2, a2sq, a3sq, d, valid }
}

fn require_valid(coeffs: &CoefficientSet, energy: f64) -> Result<()> {
    match coeffs.valid.first_failure() {
        Some(flag) => Err(Error::InvalidCoefficients { energy, flag }),
        None => Ok(()),
    }
}

fn residual_of(coeffs: &CoefficientSet, n: u32) -> f64 {
    coeffs.a1 - coeffs.a2 + 1.0 + coeffs.d + f64::from(n)
}

/// `A1 - A2 + 1 + D + n`; bound states are its zeros.
pub fn quantization_residual(
    spec: &PotentialSpec,
    units: &UnitSystem,
    quantum: &QuantumNumbers,
    energy: f64,
) -> Result<f64> {
    let coeffs = coefficients(spec, units, quantum, energy);
    require_valid(&coeffs, energy)?;
    Ok(residual_of(&coeffs, quantum.n))
}

/// Energy relation with `A1` eliminated:
/// `E^2 - m^2c^4 = (E+mc^2) W / q - [Q (E+mc^2) W / (q b M)]^2 - (M b / 2Q)^2`
/// with `W = V0 + V1/q` and `M = n + 1 + D`. Returns left minus right.
fn eliminated_residual(spec: &PotentialSpec, units: &UnitSystem, quantum: &QuantumNumbers, energy: f64) -> Result<f64> {
    let coeffs = coefficients(spec, units, quantum, energy);
    require_valid(&coeffs, energy)?;
    let qf = units.q_factor();
    let mc2 = units.rest_energy(spec.m0);
    let w = spec.effective_depth();
    let m = f64::from(quantum.n) + 1.0 + coeffs.d;
    let lhs = (energy - mc2) * (energy + mc2);
    let drive = qf / (spec.q * spec.beta) * (energy + mc2) * w / m;
    let barrier = m * spec.beta / (2.0 * qf);
    let rhs = (energy + mc2) * w / spec.q - drive * drive - barrier * barrier;
    Ok(lhs - rhs)
}

/// Closed-form Klein-Gordon energy relation, left minus right.
pub fn closed_form_residual_kg(
    spec: &PotentialSpec,
    units: &UnitSystem,
    quantum: &QuantumNumbers,
    energy: f64,
) -> Result<f64> {
    if quantum.is_dirac() {
        return Err(Error::Parameter("Klein-Gordon relation needs an orbital quantum number".into()));
    }
    eliminated_residual(spec, units, quantum, energy)
}

/// Closed-form Dirac energy relation with `D` built from `k(k-1)` (upper) or
/// `k(k+1)` (lower), left minus right.
pub fn closed_form_residual_dirac(
    spec: &PotentialSpec,
    units: &UnitSystem,
    quantum: &QuantumNumbers,
    energy: f64,
) -> Result<f64> {
    quantum.validate()?;
    if !quantum.is_dirac() {
        return Err(Error::Parameter("Dirac relation needs a spin-orbit quantum number".into()));
    }
    eliminated_residual(spec, units, quantum, energy)
}

/// Manning-Rosen energy relation in natural units, left minus right, with
/// `Gamma = n + 1/2 + sqrt(1/4 + l(l+1) + (E+m) alpha(alpha-1))`.
pub fn manning_rosen_residual(a: f64, alpha: f64, b: f64, m0: f64, n: u32, ell: u32, energy: f64) -> Result<f64> {
    let l = f64::from(ell);
    let mix = alpha * (alpha - 1.0);
    let disc = 0.25 + l * (l + 1.0) + (energy + m0) * mix;
    if disc < 0.0 {
        return Err(Error::InvalidCoefficients { energy, flag: "D" });
    }
    let gamma = f64::from(n) + 0.5 + disc.sqrt();
    let depth = a + mix;
    let lhs = (energy - m0) * (energy + m0);
    let drive = (energy + m0) * depth / (2.0 * b * gamma);
    let barrier = gamma / (2.0 * b);
    let rhs = (energy + m0) * depth / (2.0 * b * b) - drive * drive - barrier * barrier;
    Ok(lhs - rhs)
}

/// Hulthen energy relation in natural units, left minus right.
pub fn hulthen_residual(v0: f64, beta: f64, m0: f64, n: u32, ell: u32, energy: f64) -> f64 {
    let m = f64::from(n + ell + 1);
    let lhs = (energy - m0) * (energy + m0);
    let drive = (energy + m0) * v0 / (beta * m);
    let rhs = (energy + m0) * v0 - drive * drive - beta * beta * m * m / 4.0;
    lhs - rhs
}

/// Klein-Gordon Coulomb energy `m0 c^2 (1 - g)/(1 + g)`, `g = zeta^2 / (n + l + 1)^2`.
pub fn coulomb_energy(zeta: f64, n: u32, ell: u32, rest_energy: f64) -> Result<f64> {
    if !(zeta.is_finite() && zeta >= 0.0) {
        return Err(Error::Domain(format!("zeta must be >= 0, got {zeta}")));
    }
    let m = f64::from(n + ell + 1);
    let g = zeta * zeta / (m * m);
    if g >= 1.0 {
        return Err(Error::Domain(format!("zeta^2/(n+l+1)^2 = {g} must be < 1")));
    }
    Ok(rest_energy * (1.0 - g) / (1.0 + g))
}

/// Brent's method on a bracket with `f(a) f(b) < 0`.
pub(crate) fn brent<F>(mut f: F, a: f64, b: f64, fa: f64, fb: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    const MAX_ITER: usize = 200;
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Err(Error::Parameter(format!("root not bracketed in [{a}, {b}]")));
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..MAX_ITER {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(Error::NonConvergence(format!("Brent iteration did not converge near {b}")))
}

/// Solves the quantization condition for one `(n, angular)` pair.
///
/// The window `(-m0c^2, m0c^2)` is scanned uniformly; every sign change of
/// the residual between valid neighbours is refined, and roots whose
/// hypergeometric polynomial has exactly `n` zeros on `(0, q)` are kept.
pub fn solve_level(
    spec: &PotentialSpec,
    units: &UnitSystem,
    quantum: &QuantumNumbers,
    config: &SolverConfig,
) -> Result<EnergyLevel> {
    spec.validate()?;
    units.validate()?;
    quantum.validate()?;
    config.validate()?;

    let mc2 = units.rest_energy(spec.m0);
    let lo = -mc2 * (1.0 - config.window_margin);
    let hi = mc2 * (1.0 - config.window_margin);
    let tol = config.tolerance * mc2;
    let branch = config.d_branch;
    let n = quantum.n;

    let eval = |e: f64| -> Option<f64> {
        let c = coefficients_with_branch(spec, units, quantum, e, branch);
        c.valid.all().then(|| residual_of(&c, n))
    };

    let points = config.grid_points;
    let grid: Vec<f64> = (0..points)
        .map(|k| if k + 1 == points { hi } else { lo + (hi - lo) * k as f64 / (points - 1) as f64 })
        .collect();
    let values: Vec<Option<f64>> = grid.iter().map(|&e| eval(e)).collect();

    let mut roots = Vec::new();
    for k in 0..points {
        let Some(fk) = values[k] else { continue };
        if fk == 0.0 {
            roots.push((grid[k], (grid[k], grid[k])));
            continue;
        }
        if k + 1 == points {
            continue;
        }
        let Some(fnext) = values[k + 1] else { continue };
        if fnext != 0.0 && (fk > 0.0) != (fnext > 0.0) {
            let root = brent(
                |e| eval(e).ok_or(Error::InvalidCoefficients { energy: e, flag: "A2 or D" }),
                grid[k],
                grid[k + 1],
                fk,
                fnext,
                tol,
            )?;
            roots.push((root, (grid[k], grid[k + 1])));
        }
    }

    let mut accepted = Vec::new();
    for (energy, bracket) in roots {
        let coeffs = coefficients_with_branch(spec, units, quantum, energy, branch);
        if coeffs.a1.is_nan() || coeffs.a1 <= 0.0 {
            continue;
        }
        let level = EnergyLevel { energy, quantum: *quantum, residual: residual_of(&coeffs, n), coeffs, bracket };
        let nodes = match level.polynomial() {
            Ok(poly) => poly.count_roots_in(0.0, spec.q),
            Err(_) => continue,
        };
        if nodes == n as usize {
            accepted.push(level);
        }
    }

    if accepted.is_empty() && values.iter().all(Option::is_none) {
        let energy = grid[points / 2];
        let valid = coefficients_with_branch(spec, units, quantum, energy, branch).valid;
        return Err(Error::InvalidCoefficients { energy, flag: valid.first_failure().unwrap_or("A2 or D") });
    }
    match accepted.len() {
        0 => Err(Error::NoBoundState),
        1 => Ok(accepted.remove(0)),
        _ => Err(Error::MultipleRoots { energies: accepted.iter().map(|l| l.energy).collect() }),
    }
}

/// Convenience: `Angular::Orbital` or `Angular::SpinOrbit` label as a signed integer.
pub fn angular_label(quantum: &QuantumNumbers) -> i64 {
    match quantum.angular {
        Angular::Orbital { ell } => i64::from(ell),
        Angular::SpinOrbit { kappa, .. } => i64::from(kappa),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{hulthen_spec, Component};

    fn natural() -> UnitSystem {
        UnitSystem::natural()
    }

    fn spec(v0: f64, v1: f64, beta: f64) -> PotentialSpec {
        PotentialSpec::new(v0, v1, beta, 1.0, 1.0).unwrap()
    }

    #[test]
    fn coefficients_direct_substitution() {
        let c = coefficients(&spec(1.0, 0.0, 1.0), &natural(), &QuantumNumbers::kg(0, 0), 0.0);
        assert_eq!((c.a1, c.a2sq, c.a3sq, c.d), (1.0, 3.0, 0.0, 0.0));
        assert!(c.valid.all());

        let c = coefficients(&spec(0.0, 0.0, 1.0), &natural(), &QuantumNumbers::kg(0, 0), 0.0);
        assert_eq!((c.a1, c.a2sq, c.a3sq, c.d), (1.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn dirac_kappa_one_matches_kg_s_wave() {
        let s = spec(1.0, 0.0, 0.7);
        let kg = coefficients(&s, &natural(), &QuantumNumbers::kg(0, 0), 0.3);
        let q = QuantumNumbers::dirac(0, 1, Component::Upper).unwrap();
        let dirac = coefficients(&s, &natural(), &q, 0.3);
        assert_eq!(kg, dirac);
        assert_eq!(dirac.a3sq, 0.0);
    }

    #[test]
    fn lower_component_uses_kappa_plus_one() {
        let s = spec(1.0, 0.3, 0.5);
        let lower = QuantumNumbers::dirac(0, 2, Component::Lower).unwrap();
        let kg = QuantumNumbers::kg(0, 2);
        assert_eq!(coefficients(&s, &natural(), &lower, 0.1).a3sq, coefficients(&s, &natural(), &kg, 0.1).a3sq);
    }

    #[test]
    fn invalid_flags_instead_of_panics() {
        let c = coefficients(&spec(1.0, 0.0, 1.0), &natural(), &QuantumNumbers::kg(0, 0), 1.5);
        assert!(!c.valid.a1_real);
        assert!(c.a1.is_nan());
        let err = quantization_residual(&spec(1.0, 0.0, 1.0), &natural(), &QuantumNumbers::kg(0, 0), 1.5).unwrap_err();
        assert_eq!(err, Error::InvalidCoefficients { energy: 1.5, flag: "A1" });

        // strongly attractive V1 makes the barrier discriminant negative
        let s = spec(0.0, -10.0, 1.0);
        let c = coefficients(&s, &natural(), &QuantumNumbers::kg(0, 0), 0.0);
        assert!(!c.valid.d_real);
        let err = solve_level(&s, &natural(), &QuantumNumbers::kg(0, 0), &SolverConfig::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidCoefficients { .. }), "{err:?}");
    }

    #[test]
    fn residual_arithmetic() {
        let f = quantization_residual(&spec(1.0, 0.0, 1.0), &natural(), &QuantumNumbers::kg(0, 0), 0.0).unwrap();
        assert!((f - (2.0 - 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn residual_changes_sign_across_window() {
        let s = spec(1.0, 0.0, 0.2);
        let q = QuantumNumbers::kg(0, 0);
        let near_top = quantization_residual(&s, &natural(), &q, 1.0 - 1e-9).unwrap();
        let near_bottom = quantization_residual(&s, &natural(), &q, -1.0 + 1e-9).unwrap();
        assert!(near_top < 0.0 && near_bottom > 0.0);
    }

    // Roots frozen from 50-digit mpmath bisection of the same condition at the
    // binary values of the inputs.
    #[test]
    #[allow(clippy::excessive_precision)]
    fn frozen_roots() {
        let cases = [
            (spec(1.0, 0.0, 0.2), 0, 0, -0.888_051_015_462_823_51),
            (spec(1.0, 0.5, 0.2), 0, 0, 0.312_392_313_843_178_30),
            (spec(1.0, 0.0, 0.2), 1, 0, -0.6),
            (spec(1.0, 0.0, 0.1), 2, 1, -0.6),
            (spec(0.5, 0.25, 0.2), 2, 1, 0.980_741_011_901_918_67),
        ];
        for (s, n, ell, expected) in cases {
            let level = solve_level(&s, &natural(), &QuantumNumbers::kg(n, ell), &SolverConfig::default()).unwrap();
            assert!((level.energy - expected).abs() < 1e-12, "{n} {ell}: {}", level.energy);
            assert!(level.residual.abs() < 1e-10);
            assert!(level.bracket.0 <= level.energy && level.energy <= level.bracket.1);
        }
    }

    #[test]
    fn zero_potential_has_no_bound_state() {
        let err = solve_level(&spec(0.0, 0.0, 0.5), &natural(), &QuantumNumbers::kg(0, 0), &SolverConfig::default())
            .unwrap_err();
        assert_eq!(err, Error::NoBoundState);
    }

    #[test]
    fn closed_form_vanishes_at_root() {
        let s = spec(1.0, 0.5, 0.2);
        for ell in 0..2 {
            for n in 0..3 {
                let q = QuantumNumbers::kg(n, ell);
                let level = solve_level(&s, &natural(), &q, &SolverConfig::default()).unwrap();
                let r = closed_form_residual_kg(&s, &natural(), &q, level.energy).unwrap();
                assert!(r.abs() < 1e-9, "n={n} l={ell}: {r}");
            }
        }
    }

    #[test]
    fn closed_form_rejects_wrong_equation() {
        let s = spec(1.0, 0.0, 0.2);
        let dirac = QuantumNumbers::dirac(0, 1, Component::Upper).unwrap();
        assert!(closed_form_residual_kg(&s, &natural(), &dirac, 0.0).is_err());
        assert!(closed_form_residual_dirac(&s, &natural(), &QuantumNumbers::kg(0, 0), 0.0).is_err());
    }

    #[test]
    fn dirac_closed_form_equals_kg_for_matching_barrier() {
        let s = spec(1.0, 0.0, 0.3);
        for ell in 1..3u32 {
            let kg = closed_form_residual_kg(&s, &natural(), &QuantumNumbers::kg(0, ell), 0.2).unwrap();
            for kappa in [ell as i32 + 1, -(ell as i32)] {
                let q = QuantumNumbers::dirac(0, kappa, Component::Upper).unwrap();
                let d = closed_form_residual_dirac(&s, &natural(), &q, 0.2).unwrap();
                assert_eq!(kg, d);
            }
        }
    }

    #[test]
    fn hulthen_relation_structure() {
        // with V1 = 0 and q = 1, D = l and the general relation reduces to the Hulthen one
        let s = hulthen_spec(1.0, 0.2, 1.0).unwrap();
        for (n, ell) in [(0, 0), (1, 1), (2, 0)] {
            let q = QuantumNumbers::kg(n, ell);
            assert_eq!(coefficients(&s, &natural(), &q, 0.1).d, f64::from(ell));
            let general = closed_form_residual_kg(&s, &natural(), &q, 0.1).unwrap();
            let special = hulthen_residual(1.0, 0.2, 1.0, n, ell, 0.1);
            assert!((general - special).abs() < 1e-12);
        }
    }

    #[test]
    fn coulomb_closed_values() {
        assert!((coulomb_energy(0.5, 0, 0, 1.0).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(coulomb_energy(0.0, 3, 2, 1.0).unwrap(), 1.0);
        let e = coulomb_energy(0.3, 1, 1, 1.0).unwrap();
        assert!((e - 0.99 / 1.01).abs() < 1e-15);
        assert!(coulomb_energy(1.0, 0, 0, 1.0).is_err());
        assert!(coulomb_energy(-0.1, 0, 0, 1.0).is_err());
    }

    #[test]
    fn solver_config_validation() {
        let mut cfg = SolverConfig { grid_points: 10, ..SolverConfig::default() };
        assert!(cfg.validate().is_err());
        cfg.grid_points = 64;
        cfg.tolerance = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn brent_finds_cubic_root() {
        let f = |x: f64| Ok(x * x * x - 2.0);
        let r = brent(f, 0.0, 2.0, -2.0, 6.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
        assert!(brent(f, 0.0, 1.0, -2.0, -1.0, 1e-14).is_err());
    }

    #[test]
    fn solve_is_deterministic() {
        let s = spec(1.0, 0.5, 0.2);
        let q = QuantumNumbers::kg(1, 1);
        let a = solve_level(&s, &natural(), &q, &SolverConfig::default()).unwrap();
        let b = solve_level(&s, &natural(), &q, &SolverConfig::default()).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a, b);
    }
}
