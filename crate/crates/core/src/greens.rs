//! Closed-form Green's functions of the Euclidean mode equation
//!
//! ```text
//!     [d²/dx² − K² − V(x)] G(x, x') = −δ(x − x'),     V(x) = b|x|,
//! ```
//!
//! i.e. the real-momentum equation after k → iK. For the linear potential the
//! momentum is measured in units of b^{1/3}: K = b^{1/3} κ, and the Airy
//! argument at height x is y(x) = κ² + b^{1/3}|x| = κ² + (|x|/a) η^{1/3}.
//!
//! Rotated free-field forms (k → iK on the real-k expressions):
//!
//! * between plates at 0 and a, x' ≤ x:
//!   sin(kx') sin(k(a−x)) csc(ka)/k  →  sinh(Kx') sinh(K(a−x)) / (K sinh(Ka))
//! * above the plate, x ≤ x':
//!   e^{ik(x'−a)} sin(k(x−a))/k  →  e^{−K(x'−a)} sinh(K(x−a)) / K
//!
//! Every constructor accepts either argument order and evaluates its closed
//! form in the canonical order, so G(x, x') = G(x', x) holds by construction.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::airy::{airy_eval, AiryValues};
use crate::error::{domain, Result};
use crate::scaled::Scaled;

/// Plate height `a`, potential slope `b`, and η = b·a³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateConfig {
    a: f64,
    b: f64,
    eta: f64,
}

impl PlateConfig {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(domain(format!("plate height a must be > 0, got {a}")));
        }
        if !(b >= 0.0 && b.is_finite()) {
            return Err(domain(format!("potential slope b must be >= 0, got {b}")));
        }
        let eta = b * a * a * a;
        if !eta.is_finite() {
            return Err(domain("eta = b·a³ overflows"));
        }
        Ok(PlateConfig { a, b, eta })
    }

    /// Configuration with the given η at height `a` (b = η/a³).
    pub fn from_eta(eta: f64, a: f64) -> Result<Self> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(domain(format!("eta must be >= 0, got {eta}")));
        }
        Self::new(a, eta / (a * a * a))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Inverse Airy length b^{1/3}.
    pub fn airy_scale(&self) -> f64 {
        self.b.cbrt()
    }

    /// Airy argument κ² + b^{1/3}|x|.
    pub fn airy_arg(&self, kappa: f64, x: f64) -> f64 {
        kappa * kappa + self.airy_scale() * x.abs()
    }
}

/// One Green's function evaluation. `momentum` is κ for the linear-potential
/// forms and K for the free forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreensSample {
    pub x: f64,
    pub xp: f64,
    pub momentum: f64,
    pub value: f64,
}

fn ordered(x: f64, xp: f64) -> (f64, f64) {
    if x <= xp {
        (x, xp)
    } else {
        (xp, x)
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be > 0, got {v}")))
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa >= 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("kappa must be >= 0, got {kappa}")))
    }
}

fn check_linear(cfg: &PlateConfig) -> Result<()> {
    if cfg.eta > 0.0 {
        Ok(())
    } else {
        Err(domain(
            "linear-potential Green's function needs eta > 0; use the free form at eta = 0",
        ))
    }
}

/// Free Green's function between Dirichlet plates at 0 and `a`.
pub fn greens_free_between(x: f64, xp: f64, k: f64, a: f64) -> Result<f64> {
    check_positive("K", k)?;
    check_positive("a", a)?;
    let (lo, hi) = ordered(x, xp);
    if !(lo >= 0.0 && hi <= a) {
        return Err(domain(format!("points ({x}, {xp}) outside [0, {a}]")));
    }
    // sinh(K lo) sinh(K(a−hi)) / (K sinh(Ka)), written with decaying exponentials.
    let num = (-(k * (hi - lo))).exp() * (-(-2.0 * k * lo).exp_m1()) * (-(-2.0 * k * (a - hi)).exp_m1());
    Ok(num / (2.0 * k * -(-2.0 * k * a).exp_m1()))
}

/// Free Green's function above a single plate at `a`, decaying as x → ∞.
pub fn greens_free_above(x: f64, xp: f64, k: f64, a: f64) -> Result<f64> {
    check_positive("K", k)?;
    check_positive("a", a)?;
    let (lo, hi) = ordered(x, xp);
    if lo < a || !hi.is_finite() {
        return Err(domain(format!("points ({x}, {xp}) not in [{a}, ∞)")));
    }
    Ok((-(k * (hi - lo))).exp() * -(-2.0 * k * (lo - a)).exp_m1() / (2.0 * k))
}

/// Airy Green's function above the plate (x, x' ≥ a), decaying as x → ∞.
pub fn greens_linear_above(x: f64, xp: f64, kappa: f64, cfg: &PlateConfig) -> Result<f64> {
    check_kappa(kappa)?;
    check_linear(cfg)?;
    let a = cfg.a;
    let (near, far) = ordered(x, xp);
    if near < a || !far.is_finite() {
        return Err(domain(format!("points ({x}, {xp}) not in [{a}, ∞)")));
    }
    let va = airy_eval(cfg.airy_arg(kappa, a))?;
    let vn = airy_eval(cfg.airy_arg(kappa, near))?;
    let vf = airy_eval(cfg.airy_arg(kappa, far))?;

    // π b^{-1/3} Ai(y_far) [Ai(y_a) Bi(y_near) − Ai(y_near) Bi(y_a)] / Ai(y_a)
    //   = π b^{-1/3} ai_s(far) [ai_s(a) bi_s(near) − ai_s(near) bi_s(a) e^{−2(ζn−ζa)}] / ai_s(a)
    //     · e^{ζn − ζf}
    let e_bracket = (-2.0 * (vn.zeta - va.zeta)).exp();
    let bracket = va.ai_s * vn.bi_s - vn.ai_s * va.bi_s * e_bracket;
    Ok(PI / cfg.airy_scale() * vf.ai_s * bracket / va.ai_s * (vn.zeta - vf.zeta).exp())
}

/// Homogeneous solutions used below the plate, as functions of x.
///
/// * `left` decays as x → −∞: Ai(y) for x ≤ 0, continued through the kink of
///   |x| at 0 with matching value and slope, giving π[P Ai(y) − Q Bi(y)] for
///   x > 0 where P = (Ai Bi)'(κ²) and Q = 2 Ai(κ²) Ai'(κ²).
/// * `right` vanishes at the plate: Ai(y_a) Bi(y) − Bi(y_a) Ai(y) for x ≥ 0,
///   continued to x < 0 the same way.
struct BelowBasis {
    kappa: f64,
    cfg: PlateConfig,
    s: f64,
    p: Scaled,
    q: Scaled,
    ai_a: Scaled,
    bi_a: Scaled,
    c1: Scaled,
    c2: Scaled,
}

/// (value, d/dx)
type Branch = (Scaled, Scaled);

impl BelowBasis {
    fn new(kappa: f64, cfg: &PlateConfig) -> Result<Self> {
        let v0 = airy_eval(kappa * kappa)?;
        let va = airy_eval(cfg.airy_arg(kappa, cfg.a))?;
        let p = Scaled::real(v0.ai_s * v0.bip_s + v0.aip_s * v0.bi_s);
        let q = Scaled::new(2.0 * v0.ai_s * v0.aip_s, -2.0 * v0.zeta);
        let ai_a = Scaled::ai(&va);
        let bi_a = Scaled::bi(&va);
        let c1 = (ai_a * Scaled::bi(&v0) * Scaled::bip(&v0) * 2.0 - bi_a * p) * PI;
        let c2 = (bi_a * q - ai_a * p) * PI;
        Ok(BelowBasis {
            kappa,
            cfg: *cfg,
            s: cfg.airy_scale(),
            p,
            q,
            ai_a,
            bi_a,
            c1,
            c2,
        })
    }

    fn airy_at(&self, x: f64) -> Result<AiryValues> {
        airy_eval(self.cfg.airy_arg(self.kappa, x))
    }

    fn left(&self, x: f64) -> Result<Branch> {
        let v = self.airy_at(x)?;
        let (ai, aip, bi, bip) = (Scaled::ai(&v), Scaled::aip(&v), Scaled::bi(&v), Scaled::bip(&v));
        Ok(if x <= 0.0 {
            (ai, aip * -self.s)
        } else {
            (
                (self.p * ai - self.q * bi) * PI,
                (self.p * aip - self.q * bip) * (PI * self.s),
            )
        })
    }

    fn right(&self, x: f64) -> Result<Branch> {
        let v = self.airy_at(x)?;
        let (ai, aip, bi, bip) = (Scaled::ai(&v), Scaled::aip(&v), Scaled::bi(&v), Scaled::bip(&v));
        Ok(if x >= 0.0 {
            (
                self.ai_a * bi - self.bi_a * ai,
                (self.ai_a * bip - self.bi_a * aip) * self.s,
            )
        } else {
            (self.c1 * ai + self.c2 * bi, (self.c1 * aip + self.c2 * bip) * -self.s)
        })
    }

    /// Wronskian left·right' − left'·right in x (constant).
    fn wronskian(&self) -> Result<Scaled> {
        let (l, lp) = self.left(self.cfg.a)?;
        let (r, rp) = self.right(self.cfg.a)?;
        Ok(l * rp - lp * r)
    }
}

/// Airy Green's function below the plate (x, x' ≤ a, either side of 0),
/// decaying as x → −∞ and vanishing at the plate.
pub fn greens_linear_below(x: f64, xp: f64, kappa: f64, cfg: &PlateConfig) -> Result<f64> {
    check_kappa(kappa)?;
    check_linear(cfg)?;
    let (lo, hi) = ordered(x, xp);
    if hi > cfg.a || !lo.is_finite() {
        return Err(domain(format!("points ({x}, {xp}) not in (−∞, {}]", cfg.a)));
    }
    let basis = BelowBasis::new(kappa, cfg)?;
    let (l, _) = basis.left(lo)?;
    let (r, _) = basis.right(hi)?;
    Ok((-(l * r) / basis.wronskian()?).value())
}

/// ∂x∂x' G at x = x' → a⁺, from the factors of [`greens_linear_above`].
pub fn coincident_mixed_derivative_above(kappa: f64, cfg: &PlateConfig) -> Result<f64> {
    check_kappa(kappa)?;
    check_linear(cfg)?;
    let s = cfg.airy_scale();
    let va = airy_eval(cfg.airy_arg(kappa, cfg.a))?;
    let (ai, aip, bi, bip) = (Scaled::ai(&va), Scaled::aip(&va), Scaled::bi(&va), Scaled::bip(&va));
    // G = C Ai(y_far) u(y_near), C = π b^{-1/3} / Ai(y_a), u = Ai(y_a) Bi − Ai Bi(y_a).
    let c = Scaled::real(PI / s) / ai;
    let du = (ai * bip - aip * bi) * s;
    Ok((c * du * aip * s).value())
}

/// ∂x∂x' G at x = x' → a⁻, from the factors of [`greens_linear_below`].
pub fn coincident_mixed_derivative_below(kappa: f64, cfg: &PlateConfig) -> Result<f64> {
    check_kappa(kappa)?;
    check_linear(cfg)?;
    let basis = BelowBasis::new(kappa, cfg)?;
    let (_, lp) = basis.left(cfg.a)?;
    let (_, rp) = basis.right(cfg.a)?;
    Ok((-(lp * rp) / basis.wronskian()?).value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(eta: f64) -> PlateConfig {
        PlateConfig::from_eta(eta, 1.0).unwrap()
    }

    #[test]
    fn plate_config_invariants() {
        let c = PlateConfig::new(2.0, 0.5).unwrap();
        assert_eq!(c.eta(), 4.0);
        assert!(PlateConfig::new(0.0, 1.0).is_err());
        assert!(PlateConfig::new(1.0, -1.0).is_err());
        assert!(PlateConfig::new(f64::NAN, 1.0).is_err());
        let e = PlateConfig::from_eta(3.0, 1.5).unwrap();
        assert_eq!(e.eta(), e.b() * 1.5 * 1.5 * 1.5);
        assert!((e.eta() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn free_between_examples() {
        let g = greens_free_between(1.0, 1.0, 1.0, 2.0).unwrap();
        assert!((g - 1f64.tanh() / 2.0).abs() < 1e-15);
        assert!((g - 0.380_797_0).abs() < 1e-7);
        assert_eq!(greens_free_between(0.7, 0.0, 3.0, 2.0).unwrap(), 0.0);
        assert_eq!(greens_free_between(2.0, 0.4, 3.0, 2.0).unwrap(), 0.0);
        let direct = (1.2f64).sinh() * (1.6f64).sinh() / (2.0 * (4.0f64).sinh());
        assert!((greens_free_between(1.2, 0.6, 2.0, 2.0).unwrap() / direct - 1.0).abs() < 1e-14);
        assert!(greens_free_between(2.5, 1.0, 1.0, 2.0).is_err());
        // huge K does not overflow
        assert!(greens_free_between(1.0, 1.0, 1e4, 2.0).unwrap().is_finite());
    }

    #[test]
    fn free_above_examples() {
        assert_eq!(greens_free_above(3.0, 3.0, 1.0, 3.0).unwrap(), 0.0);
        let g = greens_free_above(4.0, 4.0, 1.0, 3.0).unwrap();
        assert!((g - (-1f64).exp() * 1f64.sinh()).abs() < 1e-15);
        assert!((g - 0.432_332_4).abs() < 1e-7);
        let mut prev = f64::INFINITY;
        for i in 0..20 {
            let xp = 1.5 + i as f64;
            let v = greens_free_above(1.5, xp, 0.7, 1.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(greens_free_above(0.5, 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn symmetric_under_swap() {
        let c = cfg(2.0);
        for (x, xp) in [(1.2, 1.9), (1.0, 3.0), (2.5, 1.1)] {
            let g1 = greens_linear_above(x, xp, 0.8, &c).unwrap();
            let g2 = greens_linear_above(xp, x, 0.8, &c).unwrap();
            assert_eq!(g1, g2);
        }
        for (x, xp) in [(-1.2, 0.4), (0.3, 0.9), (-2.0, -0.5)] {
            let g1 = greens_linear_below(x, xp, 0.8, &c).unwrap();
            let g2 = greens_linear_below(xp, x, 0.8, &c).unwrap();
            assert!((g1 - g2).abs() <= 1e-12 * g1.abs());
        }
    }

    #[test]
    fn dirichlet_at_plate() {
        let c = cfg(5.0);
        for x in [1.0, 1.5, 4.0] {
            assert_eq!(greens_linear_above(x, 1.0, 1.3, &c).unwrap(), 0.0);
        }
        for x in [-3.0, 0.0, 0.5] {
            assert!(greens_linear_below(x, 1.0, 1.3, &c).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn eta_zero_is_rejected_for_airy_forms() {
        let c = cfg(0.0);
        assert!(greens_linear_above(1.5, 2.0, 1.0, &c).is_err());
        assert!(greens_linear_below(0.5, 0.2, 1.0, &c).is_err());
    }

    fn jump(g: impl Fn(f64) -> f64, xp: f64) -> f64 {
        // One-sided derivatives with Richardson refinement.
        let d = |h: f64| (g(xp + h) - g(xp)) / h - (g(xp) - g(xp - h)) / h;
        let (h1, h2) = (1e-4, 5e-5);
        (2.0 * d(h2) - d(h1)) / 1.0
    }

    #[test]
    fn unit_derivative_jump() {
        let c = cfg(1.0);
        let j = jump(|x| greens_linear_above(x, 1.7, 0.6, &c).unwrap(), 1.7);
        assert!((j + 1.0).abs() < 1e-6, "above jump {j}");
        for xp in [-0.8, 0.3, 0.7] {
            let j = jump(|x| greens_linear_below(x, xp, 0.6, &c).unwrap(), xp);
            assert!((j + 1.0).abs() < 1e-6, "below jump {j} at {xp}");
        }
        let j = jump(|x| greens_free_between(x, 0.9, 1.4, 2.0).unwrap(), 0.9);
        assert!((j + 1.0).abs() < 1e-6);
        let j = jump(|x| greens_free_above(x, 2.5, 1.4, 2.0).unwrap(), 2.5);
        assert!((j + 1.0).abs() < 1e-6);
    }

    #[test]
    fn below_is_smooth_through_origin() {
        // value and slope continuous at x = 0 (the kink of |x|)
        let c = cfg(3.0);
        let g = |x: f64| greens_linear_below(x, 0.6, 0.4, &c).unwrap();
        let d = 1e-4;
        // one-sided second-order extrapolations of value and slope to x = 0
        let val_left = 2.0 * g(-d) - g(-2.0 * d);
        let val_right = 2.0 * g(d) - g(2.0 * d);
        assert!((val_left - g(0.0)).abs() < 1e-7 && (val_right - g(0.0)).abs() < 1e-7);
        let slope_left = (3.0 * g(0.0) - 4.0 * g(-d) + g(-2.0 * d)) / (2.0 * d);
        let slope_right = (-3.0 * g(0.0) + 4.0 * g(d) - g(2.0 * d)) / (2.0 * d);
        assert!((slope_left - slope_right).abs() < 1e-6, "{slope_left} {slope_right}");
    }

    #[test]
    fn decays_away_from_plate() {
        let c = cfg(1.0);
        let mut prev = f64::INFINITY;
        for i in 0..30 {
            let x = 2.0 + 0.5 * i as f64;
            let v = greens_linear_above(x, 1.5, 0.5, &c).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for i in 0..30 {
            let x = -0.5 - 0.5 * i as f64;
            let v = greens_linear_below(x, 0.0, 0.5, &c).unwrap();
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
    }

    #[test]
    fn reduces_to_free_form_at_small_eta() {
        let eta = 1e-6;
        let c = cfg(eta);
        for kappa_scaled in [0.5, 1.0, 2.0] {
            // K = b^{1/3} κ held fixed
            let k_big = kappa_scaled;
            let kappa = k_big / c.airy_scale();
            for (x, xp) in [(1.2, 1.5), (1.0, 2.0), (1.7, 1.7)] {
                let lin = greens_linear_above(x, xp, kappa, &c).unwrap();
                let free = greens_free_above(x, xp, k_big, 1.0).unwrap();
                assert!((lin - free).abs() < 1e-4, "{lin} vs {free}");
            }
        }
    }

    #[test]
    fn coincident_derivatives_match_log_derivative_forms() {
        for eta in [0.3, 1.0, 8.0] {
            let c = cfg(eta);
            for kappa in [0.0, 0.5, 2.0, 12.0] {
                let s = c.airy_scale();
                let above = coincident_mixed_derivative_above(kappa, &c).unwrap() / s;
                let ld = crate::airy::log_deriv_ai(c.airy_arg(kappa, 1.0)).unwrap();
                assert!((above - ld).abs() < 1e-12 * ld.abs().max(1.0));
                let below = coincident_mixed_derivative_below(kappa, &c).unwrap();
                assert!(below.is_finite() && below < 0.0);
            }
        }
    }
}
