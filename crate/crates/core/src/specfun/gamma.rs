use crate::error::{Error, Result};

// Lanczos series, g = 607/128, 15 terms (Numerical Recipes, 3rd ed.).
const LANCZOS_G_HALF: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma needs x > 0, got {x}")));
    }
    // Exact anchors keep ln_gamma(1) and ln_gamma(2) at zero.
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let t = x + LANCZOS_G_HALF;
    let head = (x + 0.5) * t.ln() - t;
    let mut series = LANCZOS_C0;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        series += c / y;
    }
    Ok(head + (SQRT_2PI * series / x).ln())
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}
