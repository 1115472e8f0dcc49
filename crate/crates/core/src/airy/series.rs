//! The three evaluation regimes behind [`super::airy_eval`].
//!
//! * Maclaurin sums for Bi on `[0, ASYMPTOTIC_FROM)` and for Ai on
//!   `[0, MACLAURIN_AI_MAX]`. The Bi sums have only positive terms; the Ai
//!   combination cancels and is only used where the cancellation is mild.
//! * Taylor continuation of Ai from a table of centres on
//!   `(MACLAURIN_AI_MAX, ASYMPTOTIC_FROM)`. The table is filled once by
//!   stepping w'' = z w backwards from the asymptotic regime, which is the
//!   stable direction for the recessive solution.
//! * Exponentially scaled asymptotic expansions for `z >= ASYMPTOTIC_FROM`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{AI0, AIP0};

/// Start of the asymptotic regime. At ζ(9) = 18 the optimally truncated
/// series is accurate to roughly e^{-2ζ} ≈ 2e-16.
pub const ASYMPTOTIC_FROM: f64 = 9.0;

/// Upper end of the Ai Maclaurin regime (Bi(1.5)/Ai(1.5) ≈ 30).
pub const MACLAURIN_AI_MAX: f64 = 1.5;

const TABLE_STEP: f64 = 0.25;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Unscaled (Ai, Ai', Bi, Bi').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
}

/// Maclaurin evaluation of all four functions.
pub fn maclaurin(z: f64) -> Quad {
    let z3 = z * z * z;

    // f = Σ v_k, v_k = z^{3k} / (2·3)(5·6)…((3k-1)·3k); f' = z² Σ_{k≥1} 3k s_k, s_k = v_k / z³.
    let mut f = 1.0;
    let mut fp = 0.0;
    let mut s = 1.0 / 6.0;
    // g = z Σ w_k, w_k = z^{3k} / (3·4)(6·7)…(3k·(3k+1)); g' = Σ (3k+1) w_k.
    let mut w = 1.0;
    let mut gsum = 1.0;
    let mut gp = 1.0;

    for k in 1..200 {
        let kf = k as f64;
        if k > 1 {
            s *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        }
        let v = s * z3;
        w *= z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        f += v;
        fp += 3.0 * kf * s;
        gsum += w;
        gp += (3.0 * kf + 1.0) * w;
        if v <= 1e-18 * f && w <= 1e-18 * gsum {
            break;
        }
    }
    let fp = fp * z * z;
    let g = z * gsum;

    let c1 = AI0;
    let c2 = -AIP0;
    Quad {
        ai: c1 * f - c2 * g,
        aip: c1 * fp - c2 * gp,
        bi: SQRT3 * (c1 * f + c2 * g),
        bip: SQRT3 * (c1 * fp + c2 * gp),
    }
}

/// Scaled values (Ai e^ζ, Ai' e^ζ, Bi e^{-ζ}, Bi' e^{-ζ}) from the large-z
/// expansions, truncated at the smallest term. Intended for z ≥ 9; valid
/// (with degraded accuracy) somewhat below that.
pub fn asymptotic_scaled(z: f64) -> Quad {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let inv = 1.0 / zeta;
    let z14 = z.sqrt().sqrt();

    let mut u = 1.0_f64;
    let mut pow = 1.0_f64;
    let mut sum_u_alt = 1.0;
    let mut sum_v_alt = 1.0;
    let mut sum_u = 1.0;
    let mut sum_v = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -u * (6.0 * kf + 1.0) / (6.0 * kf - 1.0);
        pow *= inv;
        let tu = u * pow;
        let tv = v * pow;
        let mag = tu.abs().max(tv.abs());
        if mag > last {
            break;
        }
        last = mag;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum_u_alt += sign * tu;
        sum_v_alt += sign * tv;
        sum_u += tu;
        sum_v += tv;
        if mag < 1e-17 {
            break;
        }
    }

    let rpi = PI.sqrt();
    Quad {
        ai: sum_u_alt / (2.0 * rpi * z14),
        aip: -z14 * sum_v_alt / (2.0 * rpi),
        bi: sum_u / (rpi * z14),
        bip: z14 * sum_v / rpi,
    }
}

/// (Ai·Bi)'(z) for z ≥ 9. The product M = Ai·Bi solves M''' = 4zM' + 2M,
/// which gives M ~ (2π√z)^{-1} Σ c_k z^{-3k} with
/// c_{k+1} = c_k (3k + 1/2)(3k + 3/2)(3k + 5/2) / (12(k + 1)).
/// Summing the derivative directly avoids the cancellation in
/// Ai·Bi' + Ai'·Bi, whose two terms are each ≈ ±1/(2π).
pub fn product_derivative_asymptotic(z: f64) -> f64 {
    let z3 = z * z * z;
    let mut c = 1.0_f64;
    let mut pw = 1.0_f64;
    let mut sum = -0.5;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        let kf = k as f64;
        c *= (3.0 * kf + 0.5) * (3.0 * kf + 1.5) * (3.0 * kf + 2.5) / (12.0 * (kf + 1.0));
        pw /= z3;
        let term = c * pw * -(3.0 * kf + 3.5);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        sum += term;
        if last < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * PI * z * z.sqrt())
}

/// Taylor step of a solution of w'' = z w from centre `c` by offset `t`.
pub fn taylor_step(c: f64, w: f64, wp: f64, t: f64) -> (f64, f64) {
    // a_{n+2} = (c a_n + a_{n-1}) / ((n+2)(n+1))
    let mut a_nm1 = 0.0;
    let mut a_n = w;
    let mut a_np1 = wp;
    let mut val = w + wp * t;
    let mut der = wp;
    let mut tn = t; // t^{n+1}
    let scale = w.abs().max(wp.abs());
    for n in 0..80 {
        let nf = n as f64;
        let a_np2 = (c * a_n + a_nm1) / ((nf + 2.0) * (nf + 1.0));
        der += (nf + 2.0) * a_np2 * tn;
        tn *= t;
        let term = a_np2 * tn;
        val += term;
        if term.abs() < 1e-18 * scale && n > 4 {
            break;
        }
        a_nm1 = a_n;
        a_n = a_np1;
        a_np1 = a_np2;
    }
    (val, der)
}

struct AiTable {
    /// (Ai, Ai') at MACLAURIN_AI_MAX + i·TABLE_STEP.
    nodes: Vec<(f64, f64)>,
}

fn ai_table() -> &'static AiTable {
    static TABLE: OnceLock<AiTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = ((ASYMPTOTIC_FROM - MACLAURIN_AI_MAX) / TABLE_STEP).round() as usize;
        let top = asymptotic_scaled(ASYMPTOTIC_FROM);
        let e = (-(2.0 / 3.0) * ASYMPTOTIC_FROM * ASYMPTOTIC_FROM.sqrt()).exp();
        let mut nodes = vec![(0.0, 0.0); n + 1];
        nodes[n] = (top.ai * e, top.aip * e);
        for i in (0..n).rev() {
            let c = MACLAURIN_AI_MAX + (i + 1) as f64 * TABLE_STEP;
            let (w, wp) = nodes[i + 1];
            nodes[i] = taylor_step(c, w, wp, -TABLE_STEP);
        }
        AiTable { nodes }
    })
}

/// Unscaled (Ai, Ai') by Taylor continuation from the nearest table centre.
pub fn ai_mid(z: f64) -> (f64, f64) {
    let table = ai_table();
    let last = table.nodes.len() - 1;
    let i = (((z - MACLAURIN_AI_MAX) / TABLE_STEP).round().max(0.0) as usize).min(last);
    let c = MACLAURIN_AI_MAX + i as f64 * TABLE_STEP;
    let (w, wp) = table.nodes[i];
    taylor_step(c, w, wp, z - c)
}
