//! Airy functions Ai, Bi and their derivatives on the non-negative real axis.
//!
//! Every integrand in this crate evaluates Airy functions at arguments of the
//! form κ² + (|x|/a)·η^{1/3} ≥ 0, so negative arguments are rejected. Unscaled
//! Bi overflows near z ≈ 104 (ζ ≈ 709), so all ratios are built from the
//! exponentially scaled values where the e^{±ζ} factors cancel symbolically.

mod oracle;
pub(crate) mod series;

pub use oracle::airy_via_ode_oracle;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use series::{ASYMPTOTIC_FROM, MACLAURIN_AI_MAX};

/// Ai(0) = 3^{-2/3} / Γ(2/3).
pub const AI0: f64 = 0.355_028_053_887_817_24;
/// Ai'(0) = -3^{-1/3} / Γ(1/3).
pub const AIP0: f64 = -0.258_819_403_792_806_8;
/// Bi(0) = 3^{-1/6} / Γ(2/3).
pub const BI0: f64 = 0.614_926_627_446_000_7;
/// Bi'(0) = 3^{1/6} / Γ(1/3).
pub const BIP0: f64 = 0.448_288_357_353_826_36;

/// Ai, Bi and derivatives at one argument, with exponentially scaled copies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryValues {
    pub z: f64,
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
    /// ζ = (2/3) z^{3/2}.
    pub zeta: f64,
    /// Ai·e^{ζ}
    pub ai_s: f64,
    /// Ai'·e^{ζ}
    pub aip_s: f64,
    /// Bi·e^{-ζ}
    pub bi_s: f64,
    /// Bi'·e^{-ζ}
    pub bip_s: f64,
}

impl AiryValues {
    /// Wronskian Ai·Bi' − Ai'·Bi from the scaled values; equals 1/π.
    pub fn wronskian(&self) -> f64 {
        self.ai_s * self.bip_s - self.aip_s * self.bi_s
    }

    fn from_scaled(z: f64, zeta: f64, s: series::Quad) -> Self {
        let down = (-zeta).exp();
        let up = zeta.exp();
        AiryValues {
            z,
            ai: s.ai * down,
            aip: s.aip * down,
            bi: s.bi * up,
            bip: s.bip * up,
            zeta,
            ai_s: s.ai,
            aip_s: s.aip,
            bi_s: s.bi,
            bip_s: s.bip,
        }
    }

    fn from_unscaled(z: f64, zeta: f64, u: series::Quad) -> Self {
        let down = (-zeta).exp();
        let up = zeta.exp();
        AiryValues {
            z,
            ai: u.ai,
            aip: u.aip,
            bi: u.bi,
            bip: u.bip,
            zeta,
            ai_s: u.ai * up,
            aip_s: u.aip * up,
            bi_s: u.bi * down,
            bip_s: u.bip * down,
        }
    }
}

/// ζ = (2/3) z^{3/2}
pub fn zeta(z: f64) -> f64 {
    2.0 / 3.0 * z * z.sqrt()
}

fn check_arg(z: f64) -> Result<()> {
    if z.is_finite() && z >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("Airy argument must be finite and >= 0, got {z}")))
    }
}

/// Evaluate Ai, Ai', Bi, Bi' (plain and scaled) at `z >= 0`.
pub fn airy_eval(z: f64) -> Result<AiryValues> {
    check_arg(z)?;
    let zeta = zeta(z);
    if z >= ASYMPTOTIC_FROM {
        return Ok(AiryValues::from_scaled(z, zeta, series::asymptotic_scaled(z)));
    }
    let mut q = series::maclaurin(z);
    if z > MACLAURIN_AI_MAX {
        let (ai, aip) = series::ai_mid(z);
        q.ai = ai;
        q.aip = aip;
    }
    Ok(AiryValues::from_unscaled(z, zeta, q))
}

/// Ai'(z)/Ai(z), strictly negative; ≈ −√z − 1/(4z) for large z.
pub fn log_deriv_ai(z: f64) -> Result<f64> {
    let v = airy_eval(z)?;
    Ok(v.aip_s / v.ai_s)
}

/// Bi'(z)/Bi(z), strictly positive; ≈ √z − 1/(4z) for large z.
pub fn log_deriv_bi(z: f64) -> Result<f64> {
    let v = airy_eval(z)?;
    Ok(v.bip_s / v.bi_s)
}

/// (Ai·Bi)'(z) = Ai(z)Bi'(z) + Ai'(z)Bi(z) at the values' argument.
///
/// Negative for z > 0 and of order z^{-3/2}, while each product is ≈ ±1/(2π),
/// so large arguments use a dedicated expansion.
pub fn product_derivative(v: &AiryValues) -> f64 {
    if v.z >= ASYMPTOTIC_FROM {
        series::product_derivative_asymptotic(v.z)
    } else {
        v.ai_s * v.bip_s + v.aip_s * v.bi_s
    }
}
