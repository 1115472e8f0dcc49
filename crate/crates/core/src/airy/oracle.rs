//! Independent ODE-integration oracle for the Airy functions.
//!
//! Works on the Riccati form of w'' = t w: L = w'/w obeys L' = t − L².
//!
//! * Bi: L starts at Bi'(0)/Bi(0) (closed form) and is integrated forward;
//!   ln Bi(z) = ln Bi(0) + ∫₀^z L. Forward is the stable direction for the
//!   dominant solution.
//! * Ai: forward integration of the recessive solution amplifies rounding by
//!   Bi(z)/Ai(z) (≈ 4e18 at z = 10), so L is seeded with the two-term WKB
//!   value at a point T well beyond z and integrated backwards, where the
//!   flow contracts onto Ai'/Ai and forgets the seed error like
//!   e^{-2(ζ(T)-ζ(t))}. The amplitude is anchored by the closed-form Ai(0):
//!   ln Ai(z) = ln Ai(0) + ∫₀^z L.
//!
//! The integrator is an adaptive high-order Taylor method; coefficients of L
//! follow from the Cauchy product of the Riccati right-hand side.

use super::{zeta, AiryValues, AI0, AIP0, BI0, BIP0};
use crate::error::{Error, Result};

const ORDER: usize = 28;
/// Upper end of the oracle's range.
pub const ORACLE_MAX_Z: f64 = 50.0;

/// Taylor coefficients of L around `t0` with L(t0) = `l0`.
fn riccati_coefficients(t0: f64, l0: f64) -> [f64; ORDER + 1] {
    let mut c = [0.0; ORDER + 1];
    c[0] = l0;
    for n in 0..ORDER {
        let forcing = match n {
            0 => t0,
            1 => 1.0,
            _ => 0.0,
        };
        let conv: f64 = (0..=n).map(|k| c[k] * c[n - k]).sum();
        c[n + 1] = (forcing - conv) / (n + 1) as f64;
    }
    c
}

/// Integrate L from `t0` to `t1` (either direction). Returns L(t1) and
/// ∫_{t0}^{t1} L dt.
fn integrate(t0: f64, l0: f64, t1: f64) -> Result<(f64, f64)> {
    let dir = (t1 - t0).signum();
    let mut t = t0;
    let mut l = l0;
    let mut integral = 0.0;
    let mut comp = 0.0;
    let mut steps = 0;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > 100_000 {
            return Err(Error::Oracle(format!("step budget exhausted at t = {t}")));
        }
        let c = riccati_coefficients(t, l);
        let scale = c[0].abs().max(1.0);
        let mut h = f64::INFINITY;
        for n in [ORDER - 1, ORDER] {
            if c[n] != 0.0 {
                h = h.min((1e-18 * scale / c[n].abs()).powf(1.0 / n as f64));
            }
        }
        // Keep |2L h| small so the truncated series stays stable on the
        // stiff perturbation mode δ' = −2Lδ.
        h = h.min(2.0 / (2.0 * l.abs()).max(1e-3)).min(1.0);
        if !(h.is_finite() && h > 1e-12) {
            return Err(Error::Oracle(format!("step size collapsed at t = {t}")));
        }
        let h = if (t1 - t).abs() <= h { t1 - t } else { dir * h };

        let mut val = 0.0;
        let mut int = 0.0;
        for n in (0..=ORDER).rev() {
            val = val * h + c[n];
            int = int * h + c[n] / (n + 1) as f64;
        }
        int *= h;

        let y = int - comp;
        let s = integral + y;
        comp = (s - integral) - y;
        integral = s;

        l = val;
        t = if (t1 - t).abs() <= h.abs() { t1 } else { t + h };
        if !l.is_finite() {
            return Err(Error::Oracle(format!("solution blew up near t = {t}")));
        }
    }
    Ok((l, integral))
}

/// Airy values at `z ∈ [0, 50]` by direct integration of the mode equation.
pub fn airy_via_ode_oracle(z: f64) -> Result<AiryValues> {
    if !(z.is_finite() && (0.0..=ORACLE_MAX_Z).contains(&z)) {
        return Err(Error::Domain(format!("oracle range is [0, {ORACLE_MAX_Z}], got {z}")));
    }
    if z == 0.0 {
        return Ok(AiryValues {
            z,
            ai: AI0,
            aip: AIP0,
            bi: BI0,
            bip: BIP0,
            zeta: 0.0,
            ai_s: AI0,
            aip_s: AIP0,
            bi_s: BI0,
            bip_s: BIP0,
        });
    }
    let zt = zeta(z);

    // Bi, forward from the origin.
    let (mb, ib) = integrate(0.0, BIP0 / BI0, z)?;
    let bi_s = BI0 * (ib - zt).exp();
    let bip_s = mb * bi_s;

    // Ai, backwards from T with ζ(T) = ζ(z) + 25.
    let t_seed = (1.5 * (zt + 25.0)).powf(2.0 / 3.0);
    let seed = -t_seed.sqrt() - 0.25 / t_seed;
    let (la, _) = integrate(t_seed, seed, z)?;
    let (_, back) = integrate(z, la, 0.0)?;
    let ai_s = AI0 * (zt - back).exp();
    let aip_s = la * ai_s;

    let down = (-zt).exp();
    let up = zt.exp();
    Ok(AiryValues {
        z,
        ai: ai_s * down,
        aip: aip_s * down,
        bi: bi_s * up,
        bip: bip_s * up,
        zeta: zt,
        ai_s,
        aip_s,
        bi_s,
        bip_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_PI;

    #[test]
    fn origin_returns_initial_values() {
        let v = airy_via_ode_oracle(0.0).unwrap();
        assert_eq!(v.bi, BI0);
        assert_eq!(v.bip, BIP0);
        assert_eq!(v.ai, AI0);
        assert_eq!(v.aip, AIP0);
    }

    #[test]
    fn value_at_one() {
        let v = airy_via_ode_oracle(1.0).unwrap();
        assert!((v.ai - 0.135_292_416_3).abs() < 1e-10);
    }

    #[test]
    fn wronskian_at_ten() {
        let v = airy_via_ode_oracle(10.0).unwrap();
        assert!((v.wronskian() - FRAC_1_PI).abs() < 1e-9);
    }

    #[test]
    fn out_of_range() {
        assert!(airy_via_ode_oracle(50.5).is_err());
        assert!(airy_via_ode_oracle(-1.0).is_err());
    }
}
