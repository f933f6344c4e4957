//! The physical model: unit system, the two-term exponential potential,
//! its Manning-Rosen and Hulthen specialisations, quantum-number labels and
//! the exponential surrogate for the centrifugal barrier.
//!
//! The potential is
//!
//! ```text
//! V(r) = -V0 e^{-br} / (1 - q e^{-br}) + V1 e^{-2br} / (1 - q e^{-br})^2
//! ```
//!
//! and `1/r^2` is replaced by `b^2 e^{-br} / (1 - q e^{-br})^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Action and speed units. Natural units (`hbar = c = 1`) by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub c: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

impl UnitSystem {
    pub const fn natural() -> Self {
        Self { hbar: 1.0, c: 1.0 }
    }

    pub fn new(hbar: f64, c: f64) -> Result<Self> {
        let units = Self { hbar, c };
        units.validate()?;
        Ok(units)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(Error::Parameter(format!("hbar must be > 0, got {}", self.hbar)));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::Parameter(format!("c must be > 0, got {}", self.c)));
        }
        Ok(())
    }

    /// `Q = 1/(hbar c)`.
    pub fn q_factor(&self) -> f64 {
        1.0 / (self.hbar * self.c)
    }

    /// `hbar c`.
    pub fn hbar_c(&self) -> f64 {
        self.hbar * self.c
    }

    /// `m0 c^2`.
    pub fn rest_energy(&self, m0: f64) -> f64 {
        m0 * self.c * self.c
    }
}

/// Parameters of the two-term potential plus the particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub v0: f64,
    pub v1: f64,
    pub beta: f64,
    pub q: f64,
    pub m0: f64,
}

impl PotentialSpec {
    pub fn new(v0: f64, v1: f64, beta: f64, q: f64, m0: f64) -> Result<Self> {
        let spec = Self { v0, v1, beta, q, m0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v0.is_finite() && self.v1.is_finite()) {
            return Err(Error::Parameter("V0 and V1 must be finite".into()));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::Parameter(format!("beta must be > 0, got {}", self.beta)));
        }
        if !(self.q.is_finite() && self.q > 0.0) {
            return Err(Error::Parameter(format!("q must be > 0, got {}", self.q)));
        }
        if !(self.m0.is_finite() && self.m0 > 0.0) {
            return Err(Error::Parameter(format!("m0 must be > 0, got {}", self.m0)));
        }
        Ok(())
    }

    /// True when `q` is 1 to within rounding; several closed forms hold only there.
    pub fn is_unit_q(&self) -> bool {
        (self.q - 1.0).abs() <= 1e-12
    }

    /// `V0 + V1/q`, the combination that drives binding.
    pub fn effective_depth(&self) -> f64 {
        self.v0 + self.v1 / self.q
    }

    /// Radius of the pole `q e^{-br} = 1`, present only for `q > 1`.
    pub fn pole_radius(&self) -> Option<f64> {
        (self.q > 1.0).then(|| self.q.ln() / self.beta)
    }
}

/// Dirac component selector: `Upper` uses `kappa(kappa-1)`, `Lower` uses `kappa(kappa+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angular {
    /// Klein-Gordon orbital quantum number.
    Orbital { ell: u32 },
    /// Dirac spin-orbit quantum number (nonzero).
    SpinOrbit { kappa: i32, component: Component },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub angular: Angular,
}

impl QuantumNumbers {
    pub fn kg(n: u32, ell: u32) -> Self {
        Self { n, angular: Angular::Orbital { ell } }
    }

    pub fn dirac(n: u32, kappa: i32, component: Component) -> Result<Self> {
        let quantum = Self { n, angular: Angular::SpinOrbit { kappa, component } };
        quantum.validate()?;
        Ok(quantum)
    }

    pub fn validate(&self) -> Result<()> {
        match self.angular {
            Angular::SpinOrbit { kappa: 0, .. } => Err(Error::Parameter("kappa must be nonzero".into())),
            _ => Ok(()),
        }
    }

    /// Coefficient of the centrifugal barrier: `l(l+1)`, `k(k-1)` or `k(k+1)`.
    pub fn barrier(&self) -> f64 {
        match self.angular {
            Angular::Orbital { ell } => {
                let l = f64::from(ell);
                l * (l + 1.0)
            }
            Angular::SpinOrbit { kappa, component } => {
                let k = f64::from(kappa);
                match component {
                    Component::Upper => k * (k - 1.0),
                    Component::Lower => k * (k + 1.0),
                }
            }
        }
    }

    pub fn is_dirac(&self) -> bool {
        matches!(self.angular, Angular::SpinOrbit { .. })
    }

    pub fn kappa(&self) -> Option<i32> {
        match self.angular {
            Angular::SpinOrbit { kappa, .. } => Some(kappa),
            Angular::Orbital { .. } => None,
        }
    }
}

/// `1 - q e^{-br}` without cancellation for small `r`.
pub(crate) fn screening_factor(spec: &PotentialSpec, r: f64) -> f64 {
    (1.0 - spec.q) - spec.q * (-spec.beta * r).exp_m1()
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be finite and > 0, got {r}")))
    }
}

fn checked_screening(spec: &PotentialSpec, r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let e = (-spec.beta * r).exp();
    let s = screening_factor(spec, r);
    let cancelling = (1.0 - spec.q).abs() + spec.q * (-spec.beta * r).exp_m1().abs();
    if s.abs() <= 8.0 * f64::EPSILON * cancelling {
        return Err(Error::Pole { r });
    }
    Ok((e, s))
}

pub fn potential_value(spec: &PotentialSpec, r: f64) -> Result<f64> {
    let (e, s) = checked_screening(spec, r)?;
    let ratio = e / s;
    Ok(-spec.v0 * ratio + spec.v1 * ratio * ratio)
}

/// Exponential surrogate for `1/r^2`.
pub fn centrifugal_approx(spec: &PotentialSpec, r: f64) -> Result<f64> {
    let (e, s) = checked_screening(spec, r)?;
    Ok(spec.beta * spec.beta * e / (s * s))
}

/// Manning-Rosen parameterisation in natural units.
pub fn manning_rosen_spec(a: f64, alpha: f64, b: f64, m0: f64) -> Result<PotentialSpec> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::Parameter(format!("Manning-Rosen range b must be > 0, got {b}")));
    }
    let scale = 2.0 * b * b;
    PotentialSpec::new(a / scale, alpha * (alpha - 1.0) / scale, 1.0 / b, 1.0, m0)
}

pub fn hulthen_spec(v0: f64, beta: f64, m0: f64) -> Result<PotentialSpec> {
    PotentialSpec::new(v0, 0.0, beta, 1.0, m0)
}

/// Hulthen potential whose small-`br` limit is `-zeta/(Q r)`, i.e. `V0 = zeta beta / Q`
/// with dimensionless coupling `zeta = Z e^2 Q`.
pub fn coulomb_limit_spec(zeta: f64, beta: f64, m0: f64, units: &UnitSystem) -> Result<PotentialSpec> {
    hulthen_spec(zeta * beta / units.q_factor(), beta, m0)
}
