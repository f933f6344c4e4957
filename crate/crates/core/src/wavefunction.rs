//! Normalized closed-form radial functions.
//!
//! With `z = q e^{-br}` every level is
//!
//! ```text
//! u(z) = N z^{A1} (1 - z)^{1 + D} 2F1(-n, -n + 2 A2; 1 + 2 A1; z)
//! ```
//!
//! for both the Klein-Gordon `u` and the Dirac upper component `f`. The
//! lower component `g` is rebuilt from `f` through
//! `g = hbar c / (m0 c^2 + E) (d/dr - k/r) f`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{Angular, Component, PotentialSpec, UnitSystem};
use crate::specfun::{integrate, integrate_panels, ln_gamma, TerminatingHypergeometric};
use crate::spectrum::EnergyLevel;

/// Tolerance on `|norm - 1|` above which the closed-form constant is replaced.
pub const NORM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialKind {
    KleinGordon,
    DiracUpper,
    DiracLower,
}

/// Where the normalization constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormSource {
    ClosedForm,
    /// Quadrature was used: `q != 1`, or the closed form missed the norm check.
    Numerical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct LowerFactor {
    kappa: f64,
    /// `hbar c / (m0 c^2 + E)`
    scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    kind: RadialKind,
    energy: f64,
    a1: f64,
    d: f64,
    poly: TerminatingHypergeometric,
    norm: f64,
    norm_source: NormSource,
    beta: f64,
    q: f64,
    lower: Option<LowerFactor>,
}

impl RadialFunction {
    pub fn kind(&self) -> RadialKind {
        self.kind
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Power of `z`.
    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Power of `1 - z`.
    pub fn exponent_one_minus_z(&self) -> f64 {
        1.0 + self.d
    }

    pub fn polynomial(&self) -> &TerminatingHypergeometric {
        &self.poly
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn norm_source(&self) -> NormSource {
        self.norm_source
    }

    pub fn z_of(&self, r: f64) -> f64 {
        self.q * (-self.beta * r).exp()
    }

    pub fn r_of(&self, z: f64) -> f64 {
        (self.q / z).ln() / self.beta
    }

    fn one_minus_z(&self, r: f64) -> f64 {
        (1.0 - self.q) - self.q * (-self.beta * r).exp_m1()
    }

    /// `z^{A1} (1-z)^{1+D}`, the strictly positive envelope.
    fn envelope(&self, r: f64) -> Result<(f64, f64, f64)> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!("radius must be finite and > 0, got {r}")));
        }
        let z = self.z_of(r);
        let omz = self.one_minus_z(r);
        if omz <= 0.0 {
            return Err(Error::Pole { r });
        }
        let env = (self.a1 * (self.q.ln() - self.beta * r)).exp() * omz.powf(1.0 + self.d);
        Ok((z, omz, env))
    }

    /// Closed-form `f(r)` and `df/dr` of the upper (or Klein-Gordon) function.
    fn upper_with_derivative(&self, r: f64) -> Result<(f64, f64)> {
        let (z, omz, env) = self.envelope(r)?;
        let p = self.poly.eval(z);
        let dp = self.poly.derivative(z);
        let value = self.norm * env * p;
        // dz/dr = -b z
        let bracket = self.a1 * p - (1.0 + self.d) * z / omz * p + z * dp;
        Ok((value, -self.beta * self.norm * env * bracket))
    }

    pub fn value_at(&self, r: f64) -> Result<f64> {
        let (f, df) = self.upper_with_derivative(r)?;
        Ok(match self.lower {
            None => f,
            Some(LowerFactor { kappa, scale }) => scale * (df - kappa * f / r),
        })
    }

    /// Analytic `d/dr` of the closed form. For the lower component the
    /// derivative is not available in closed form and an error is returned.
    pub fn derivative_at(&self, r: f64) -> Result<f64> {
        if self.lower.is_some() {
            return Err(Error::Unsupported("derivative of the reconstructed lower component".into()));
        }
        Ok(self.upper_with_derivative(r)?.1)
    }

    pub fn evaluate_on_grid(&self, r_grid: &[f64]) -> Result<Vec<f64>> {
        r_grid.iter().map(|&r| self.value_at(r)).collect()
    }

    /// Interior zeros. For `u` and `f` these are the zeros of the polynomial
    /// factor on `(0, q)` (the envelope is positive there); for `g` they are
    /// sign changes on a dense logarithmic radial grid.
    pub fn count_nodes(&self) -> usize {
        match self.lower {
            None => self.poly.count_roots_in(0.0, self.q),
            Some(_) => self.sampled_sign_changes(),
        }
    }

    fn sampled_sign_changes(&self) -> usize {
        const POINTS: usize = 20_000;
        let lo = (1e-6 / self.beta).ln();
        let hi = self.decay_radius().ln();
        let mut last = 0.0f64;
        let mut count = 0;
        for k in 0..POINTS {
            let r = (lo + (hi - lo) * k as f64 / (POINTS - 1) as f64).exp();
            let Ok(v) = self.value_at(r) else { continue };
            if v != 0.0 && v.is_finite() {
                if last != 0.0 && (v > 0.0) != (last > 0.0) {
                    count += 1;
                }
                last = v;
            }
        }
        count
    }

    /// Radius beyond which the `z^{A1}` envelope is below `e^{-80}`.
    pub fn decay_radius(&self) -> f64 {
        let inner = if self.q > 1.0 { self.q.ln() / self.beta } else { 0.0 };
        inner + (40.0 / self.a1).max(30.0) / self.beta
    }

    /// `int_0^inf value(r)^2 dr` by composite quadrature in `r`.
    pub fn norm_integral(&self) -> Result<f64> {
        let r_max = self.decay_radius();
        radial_integral(|r| self.value_at(r).map_or(f64::NAN, |v| v * v), r_max)
    }
}

/// `int_0^{r_max} f(r) dr`: graded near the origin, uniform panels beyond.
pub(crate) fn radial_integral<F: Fn(f64) -> f64>(f: F, r_max: f64) -> Result<f64> {
    const SEGMENTS: usize = 64;
    let head = r_max / SEGMENTS as f64;
    let near_origin = integrate(&f, 0.0, head, 24)?;
    Ok(near_origin + integrate_panels(&f, head, r_max, 24, SEGMENTS - 1)?)
}

/// Closed-form right side of
/// `int_0^1 z^P (1-z)^Q [2F1(-n, n+P+Q+1; P+2; z)]^2 dz`
/// `= n! (n + Q/2) G(n+Q) G(P+1) G(P+2) / ((n + (P+Q+1)/2) G(n+P+2) G(n+P+Q+1))`.
pub fn norm_integral_identity(n: u32, p: f64, q: f64) -> Result<f64> {
    if !(p > -1.0 && q > -1.0) {
        return Err(Error::Domain(format!("identity needs P > -1 and Q > -1, got P={p}, Q={q}")));
    }
    let nf = f64::from(n);
    let log_num = ln_gamma(nf + 1.0)? + ln_gamma(nf + q)? + ln_gamma(p + 1.0)? + ln_gamma(p + 2.0)?;
    let log_den = ln_gamma(nf + p + 2.0)? + ln_gamma(nf + p + q + 1.0)?;
    Ok((nf + 0.5 * q) / (nf + 0.5 * (p + q + 1.0)) * (log_num - log_den).exp())
}

/// Left side of the same identity by direct quadrature.
pub fn norm_integral_quadrature(n: u32, p: f64, q: f64) -> Result<f64> {
    let nf = f64::from(n);
    let poly = TerminatingHypergeometric::new(n as usize, nf + p + q + 1.0, p + 2.0)?;
    integrate(
        |z| {
            let f = poly.eval(z);
            z.powf(p) * (1.0 - z).powf(q) * f * f
        },
        0.0,
        1.0,
        48,
    )
}

/// Closed-form normalization constant for `q = 1`:
/// `N^2 = b (n+A1+D+1) G(n+2A1+1) G(n+2A1+2D+2) / (n! (n+1+D) G(n+2+2D) G(2A1) G(1+2A1))`.
pub fn closed_form_norm(n: u32, a1: f64, d: f64, beta: f64) -> Result<f64> {
    let nf = f64::from(n);
    let log_num = ln_gamma(nf + 2.0 * a1 + 1.0)? + ln_gamma(nf + 2.0 * a1 + 2.0 * d + 2.0)?;
    let log_den = ln_gamma(nf + 1.0)? + ln_gamma(nf + 2.0 + 2.0 * d)? + ln_gamma(2.0 * a1)? + ln_gamma(1.0 + 2.0 * a1)?;
    let ratio = (nf + a1 + d + 1.0) / (nf + 1.0 + d);
    Ok((beta * ratio * (log_num - log_den).exp()).sqrt())
}

fn build(spec: &PotentialSpec, level: &EnergyLevel, kind: RadialKind) -> Result<RadialFunction> {
    spec.validate()?;
    if spec.q > 1.0 + 1e-12 {
        return Err(Error::Unsupported(format!("q = {} > 1 puts the potential pole inside the radial domain", spec.q)));
    }
    let a1 = level.coeffs.a1;
    let d = level.coeffs.d;
    if a1.is_nan() || a1 <= 0.0 {
        return Err(Error::NonNormalizable(format!("A1 = {a1} must be > 0")));
    }
    if d.is_nan() || d <= -1.0 {
        return Err(Error::NonNormalizable(format!("D = {d} must be > -1")));
    }
    let mut rf = RadialFunction {
        kind,
        energy: level.energy,
        a1,
        d,
        poly: level.polynomial()?,
        norm: 1.0,
        norm_source: NormSource::Numerical,
        beta: spec.beta,
        q: spec.q,
        lower: None,
    };

    if spec.is_unit_q() {
        rf.norm = closed_form_norm(level.quantum.n, a1, d, spec.beta)?;
        let check = rf.z_norm_integral()?;
        if (check - 1.0).abs() <= NORM_TOLERANCE {
            rf.norm_source = NormSource::ClosedForm;
            return Ok(rf);
        }
        rf.norm /= check.sqrt();
    } else {
        rf.norm = 1.0 / rf.z_norm_integral()?.sqrt();
    }
    rf.norm_source = NormSource::Numerical;
    Ok(rf)
}

impl RadialFunction {
    /// `(N^2 / b) int_0^q z^{2A1-1} (1-z)^{2+2D} F(z)^2 dz`.
    fn z_norm_integral(&self) -> Result<f64> {
        let (p, qq) = (2.0 * self.a1 - 1.0, 2.0 + 2.0 * self.d);
        let integral = integrate(
            |z| {
                let f = self.poly.eval(z);
                z.powf(p) * (1.0 - z).powf(qq) * f * f
            },
            0.0,
            self.q.min(1.0),
            32,
        )?;
        Ok(self.norm * self.norm * integral / self.beta)
    }
}

pub fn kg_wavefunction(spec: &PotentialSpec, units: &UnitSystem, level: &EnergyLevel) -> Result<RadialFunction> {
    units.validate()?;
    if !matches!(level.quantum.angular, Angular::Orbital { .. }) {
        return Err(Error::Parameter("Klein-Gordon wavefunction needs an orbital level".into()));
    }
    build(spec, level, RadialKind::KleinGordon)
}

pub fn dirac_upper(spec: &PotentialSpec, units: &UnitSystem, level: &EnergyLevel) -> Result<RadialFunction> {
    units.validate()?;
    match level.quantum.angular {
        Angular::SpinOrbit { component: Component::Upper, .. } => build(spec, level, RadialKind::DiracUpper),
        _ => Err(Error::Parameter("upper component needs a Dirac level solved for Upper".into())),
    }
}

/// Lower component rebuilt from `f`. It shares `f`'s normalization constant
/// and is not renormalized on its own.
pub fn dirac_lower(
    spec: &PotentialSpec,
    units: &UnitSystem,
    level: &EnergyLevel,
    upper: &RadialFunction,
) -> Result<RadialFunction> {
    units.validate()?;
    if upper.kind != RadialKind::DiracUpper {
        return Err(Error::Parameter("lower component must be built from a Dirac upper component".into()));
    }
    let Some(kappa) = level.quantum.kappa() else {
        return Err(Error::Parameter("lower component needs a Dirac level".into()));
    };
    let mc2 = units.rest_energy(spec.m0);
    let denom = mc2 + level.energy;
    if denom.abs() <= 1e-12 * mc2 {
        return Err(Error::DegenerateEnergy(denom));
    }
    Ok(RadialFunction {
        kind: RadialKind::DiracLower,
        lower: Some(LowerFactor { kappa: f64::from(kappa), scale: units.hbar_c() / denom }),
        ..upper.clone()
    })
}

/// Upper and lower components together. With `joint_norm` both are rescaled
/// so that `int (f^2 + g^2) dr = 1`; otherwise `f` alone is unit-normalized.
pub fn dirac_pair(
    spec: &PotentialSpec,
    units: &UnitSystem,
    level: &EnergyLevel,
    joint_norm: bool,
) -> Result<(RadialFunction, RadialFunction)> {
    let mut f = dirac_upper(spec, units, level)?;
    let mut g = dirac_lower(spec, units, level, &f)?;
    if joint_norm {
        let total = f.norm_integral()? + g.norm_integral()?;
        let rescale = total.sqrt().recip();
        f.norm *= rescale;
        g.norm *= rescale;
        f.norm_source = NormSource::Numerical;
        g.norm_source = NormSource::Numerical;
    }
    Ok((f, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::QuantumNumbers;
    use crate::spectrum::{solve_level, SolverConfig};

    fn natural() -> UnitSystem {
        UnitSystem::natural()
    }

    fn spec(v0: f64, v1: f64, beta: f64) -> PotentialSpec {
        PotentialSpec::new(v0, v1, beta, 1.0, 1.0).unwrap()
    }

    fn level(s: &PotentialSpec, q: QuantumNumbers) -> EnergyLevel {
        solve_level(s, &natural(), &q, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn ground_state_norm_is_beta_function() {
        let s = spec(1.0, 0.0, 0.2);
        let lv = level(&s, QuantumNumbers::kg(0, 0));
        let u = kg_wavefunction(&s, &natural(), &lv).unwrap();
        assert_eq!(u.polynomial().degree(), 0);
        let (a1, d) = (lv.coeffs.a1, lv.coeffs.d);
        let beta_fn = (ln_gamma(2.0 * a1).unwrap() + ln_gamma(3.0 + 2.0 * d).unwrap()
            - ln_gamma(2.0 * a1 + 3.0 + 2.0 * d).unwrap())
        .exp();
        let expected = (0.2 / beta_fn).sqrt();
        assert!((u.norm() - expected).abs() < 1e-12 * expected);
        assert_eq!(u.norm_source(), NormSource::ClosedForm);
    }

    #[test]
    fn first_excited_state_has_one_node() {
        let s = spec(1.0, 0.0, 0.2);
        let lv = level(&s, QuantumNumbers::kg(1, 0));
        let u = kg_wavefunction(&s, &natural(), &lv).unwrap();
        assert_eq!(u.count_nodes(), 1);
        // the single zero of 1 - (b/c) z
        let p = u.polynomial();
        let z0 = p.c() / p.b();
        assert!(z0 > 0.0 && z0 < 1.0);
        let grid: Vec<f64> = (1..4000).map(|k| k as f64 * 0.02).collect();
        let vals = u.evaluate_on_grid(&grid).unwrap();
        let changes = vals.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
        assert_eq!(changes, 1);
    }

    #[test]
    fn identity_matches_quadrature() {
        for n in 0..4 {
            for (p, q) in [(1.3, 2.4), (-0.4, 3.0), (6.0, 2.2)] {
                let closed = norm_integral_identity(n, p, q).unwrap();
                let quad = norm_integral_quadrature(n, p, q).unwrap();
                assert!(((closed - quad) / closed).abs() < 1e-10, "n={n} P={p} Q={q}");
            }
        }
    }

    #[test]
    fn norm_and_decay() {
        let s = spec(1.0, 0.5, 0.2);
        for n in 0..3 {
            let lv = level(&s, QuantumNumbers::kg(n, 1));
            let u = kg_wavefunction(&s, &natural(), &lv).unwrap();
            assert_eq!(u.norm_source(), NormSource::ClosedForm);
            assert!((u.norm_integral().unwrap() - 1.0).abs() < 1e-9);
            assert_eq!(u.count_nodes(), n as usize);
        }
    }

    #[test]
    fn grid_evaluation_edge_cases() {
        let s = spec(1.0, 0.0, 0.2);
        let lv = level(&s, QuantumNumbers::kg(0, 0));
        let u = kg_wavefunction(&s, &natural(), &lv).unwrap();
        assert!(u.evaluate_on_grid(&[]).unwrap().is_empty());
        let r = 3.0;
        let z = u.z_of(r);
        let expected = u.norm() * z.powf(u.a1()) * (1.0 - z).powf(1.0 + u.d());
        let got = u.evaluate_on_grid(&[r]).unwrap()[0];
        assert!((got - expected).abs() < 1e-13 * expected.abs());
        for r in [0.01, 1.0, 17.0, 80.0] {
            let z = u.z_of(r);
            assert!((u.z_of(u.r_of(z)) - z).abs() <= 1e-14 * z);
        }
        assert!(u.value_at(0.0).is_err());
    }

    #[test]
    fn analytic_derivative_matches_finite_difference() {
        let s = spec(1.0, 0.5, 0.2);
        let lv = level(&s, QuantumNumbers::kg(2, 1));
        let u = kg_wavefunction(&s, &natural(), &lv).unwrap();
        let h = 1e-4;
        for r in [0.3, 2.0, 7.5, 15.0] {
            let fd = (u.value_at(r + h).unwrap() - u.value_at(r - h).unwrap()) / (2.0 * h);
            assert!((u.derivative_at(r).unwrap() - fd).abs() < 1e-7, "r={r}");
        }
    }

    #[test]
    fn dirac_kappa_one_matches_kg() {
        let s = spec(1.0, 0.0, 0.2);
        let kg = kg_wavefunction(&s, &natural(), &level(&s, QuantumNumbers::kg(0, 0))).unwrap();
        let dq = QuantumNumbers::dirac(0, 1, Component::Upper).unwrap();
        let f = dirac_upper(&s, &natural(), &level(&s, dq)).unwrap();
        for r in [0.5, 3.0, 10.0] {
            assert_eq!(kg.value_at(r).unwrap(), f.value_at(r).unwrap());
        }
        assert_eq!(f.count_nodes(), 0);
        assert!((f.norm_integral().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn lower_component_kappa_flip() {
        let s = spec(1.0, 0.5, 0.2);
        let q = QuantumNumbers::dirac(1, 2, Component::Upper).unwrap();
        let lv = level(&s, q);
        let f = dirac_upper(&s, &natural(), &lv).unwrap();
        let g = dirac_lower(&s, &natural(), &lv, &f).unwrap();
        let mut flipped = lv.clone();
        flipped.quantum = QuantumNumbers::dirac(1, -2, Component::Upper).unwrap();
        let g_flip = dirac_lower(&s, &natural(), &flipped, &f).unwrap();
        let scale = 1.0 / (1.0 + lv.energy);
        for r in [0.2, 1.0, 6.0] {
            let diff = g.value_at(r).unwrap() - g_flip.value_at(r).unwrap();
            let expected = -2.0 * 2.0 * scale * f.value_at(r).unwrap() / r;
            assert!((diff - expected).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn joint_norm_option() {
        let s = spec(1.0, 0.5, 0.2);
        let q = QuantumNumbers::dirac(0, -1, Component::Upper).unwrap();
        let lv = level(&s, q);
        let (f, g) = dirac_pair(&s, &natural(), &lv, true).unwrap();
        let total = f.norm_integral().unwrap() + g.norm_integral().unwrap();
        assert!((total - 1.0).abs() < 1e-9);
        let (f, _) = dirac_pair(&s, &natural(), &lv, false).unwrap();
        assert!((f.norm_integral().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn wrong_equation_rejected() {
        let s = spec(1.0, 0.0, 0.2);
        let lv = level(&s, QuantumNumbers::kg(0, 0));
        assert!(dirac_upper(&s, &natural(), &lv).is_err());
        let u = kg_wavefunction(&s, &natural(), &lv).unwrap();
        assert!(dirac_lower(&s, &natural(), &lv, &u).is_err());
    }

    #[test]
    fn non_normalizable_level_rejected() {
        let s = spec(1.0, 0.0, 0.2);
        let mut lv = level(&s, QuantumNumbers::kg(0, 0));
        lv.coeffs.a1 = 0.0;
        assert!(matches!(kg_wavefunction(&s, &natural(), &lv), Err(Error::NonNormalizable(_))));
        let mut lv = level(&s, QuantumNumbers::kg(0, 0));
        lv.coeffs.d = -1.0;
        assert!(matches!(kg_wavefunction(&s, &natural(), &lv), Err(Error::NonNormalizable(_))));
    }

    #[test]
    fn q_below_one_uses_numerical_norm() {
        let s = PotentialSpec::new(1.0, 0.0, 0.2, 0.9, 1.0).unwrap();
        let lv = level(&s, QuantumNumbers::kg(0, 0));
        let u = kg_wavefunction(&s, &natural(), &lv).unwrap();
        assert_eq!(u.norm_source(), NormSource::Numerical);
        assert!((u.norm_integral().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn q_above_one_unsupported() {
        let s = PotentialSpec::new(1.0, 0.0, 0.2, 1.2, 1.0).unwrap();
        let lv = EnergyLevel {
            energy: 0.0,
            quantum: QuantumNumbers::kg(0, 0),
            residual: 0.0,
            coeffs: crate::spectrum::coefficients(&s, &natural(), &QuantumNumbers::kg(0, 0), 0.0),
            bracket: (0.0, 0.0),
        };
        assert!(matches!(kg_wavefunction(&s, &natural(), &lv), Err(Error::Unsupported(_))));
    }
}
