//! Stress integrands at the plate and the forces built from them.
//!
//! With k = i b^{1/3} κ the coincident-limit stress on either face of the
//! plate is (b^{2/3}/2π)∫dκ of a log-derivative ratio:
//!
//! * above: Ai'(z₂)/Ai(z₂)
//! * below: N/D with
//!   N = 2 Ai(z₁)Ai'(z₁)Bi'(z₂) − Ai'(z₂)P,  D = Ai(z₂)P − 2 Ai(z₁)Ai'(z₁)Bi(z₂),
//!   P = Ai'(z₁)Bi(z₁) + Ai(z₁)Bi'(z₁),
//!
//! where z₁ = κ² and z₂ = κ² + η^{1/3}. Each ratio behaves like −κ at large κ
//! and their separate integrals diverge; only the difference
//! net = below − above ~ 1/(2(κ² + η^{1/3})) is integrated, up to a cutoff
//! κ_max beyond which that model is integrated analytically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::airy::{airy_eval, log_deriv_ai, product_derivative, AiryValues};
use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::quadrature::{try_integrate_finite, try_integrate_from, KappaMaxPolicy, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressIntegrandSample {
    pub kappa: f64,
    pub above: f64,
    pub below: f64,
    /// below − above
    pub net: f64,
}

/// f(η) in T^{xx} = (ħc/a²) f(η), with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceResult {
    pub eta: f64,
    pub f_eta: f64,
    pub err_est: f64,
    pub kappa_max: f64,
    pub n_evals: usize,
}

/// First-order-in-b integrands in physical momentum K.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbativeSample {
    pub below: f64,
    pub above: f64,
    pub net: f64,
}

/// Relative deviation of net from the tail model above which the model is
/// rejected.
pub const TAIL_MODEL_MAX_DEVIATION: f64 = 0.01;
const KAPPA_MAX_LIMIT: f64 = 1e7;

fn check_inputs(kappa: f64, eta: f64) -> Result<()> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(domain(format!("kappa must be finite and >= 0, got {kappa}")));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(domain(format!("eta must be finite and > 0, got {eta}")));
    }
    Ok(())
}

/// Ai'/Ai at κ² + η^{1/3}.
pub fn integrand_above(kappa: f64, eta: f64) -> Result<f64> {
    check_inputs(kappa, eta)?;
    log_deriv_ai(kappa * kappa + eta.cbrt())
}

/// Airy data at z₁ = κ² and z₂ = κ² + η^{1/3}, in the compensated form of
/// the below-plate ratio.
///
/// N and D both carry e^{ζ₂−2ζ₁}; dividing it out leaves
/// N ∝ Q₁ bip₂ − P₁ aip₂ E and D ∝ P₁ ai₂ E − Q₁ bi₂ with scaled Airy values,
/// Q = 2 ai·aip, P = (Ai·Bi)', and E = e^{−2(ζ₂−ζ₁)} ≤ 1.
struct BelowParts {
    v2: AiryValues,
    q1: f64,
    p1: f64,
    e: f64,
    num: f64,
    den: f64,
}

impl BelowParts {
    fn new(kappa: f64, eta: f64) -> Result<Self> {
        check_inputs(kappa, eta)?;
        let z1 = kappa * kappa;
        let v1 = airy_eval(z1)?;
        let v2 = airy_eval(z1 + eta.cbrt())?;
        let q1 = 2.0 * v1.ai_s * v1.aip_s;
        let p1 = product_derivative(&v1);
        let e = (-2.0 * (v2.zeta - v1.zeta)).exp();
        let num = q1 * v2.bip_s - p1 * v2.aip_s * e;
        let den = p1 * v2.ai_s * e - q1 * v2.bi_s;
        if den == 0.0 || !den.is_finite() {
            return Err(Error::Singular { kappa, eta });
        }
        Ok(BelowParts {
            v2,
            q1,
            p1,
            e,
            num,
            den,
        })
    }
}

/// N/D below the plate.
pub fn integrand_below(kappa: f64, eta: f64) -> Result<f64> {
    let b = BelowParts::new(kappa, eta)?;
    Ok(b.num / b.den)
}

/// Both integrands and their difference.
///
/// Each face grows like −κ while net falls like 1/(2κ²), so subtracting the
/// two ratios would lose about 3·log10(κ) digits. Over a common denominator
/// the Wronskian terms drop out and
/// net = (Q₁P₂ − P₁Q₂E)/(D ai₂), which equals below − above up to rounding
/// in the two ratios and keeps full relative precision at large κ.
///
/// At η = 0 the two faces see the same free field, so net is 0 identically;
/// above and below then hold the free value −κ and no Airy function is
/// evaluated.
pub fn integrand_net(kappa: f64, eta: f64) -> Result<StressIntegrandSample> {
    if eta == 0.0 {
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(domain(format!("kappa must be finite and >= 0, got {kappa}")));
        }
        return Ok(StressIntegrandSample {
            kappa,
            above: -kappa,
            below: -kappa,
            net: 0.0,
        });
    }
    let b = BelowParts::new(kappa, eta)?;
    let v2 = &b.v2;
    let above = v2.aip_s / v2.ai_s;
    let below = b.num / b.den;
    let q2 = 2.0 * v2.ai_s * v2.aip_s;
    let p2 = product_derivative(v2);
    let net = (b.q1 * p2 - b.p1 * q2 * b.e) / (b.den * v2.ai_s);
    Ok(StressIntegrandSample {
        kappa,
        above,
        below,
        net,
    })
}

/// Large-κ model of the net integrand, 1/(2(κ² + η^{1/3})).
pub fn net_model(kappa: f64, eta: f64) -> f64 {
    0.5 / (kappa * kappa + eta.cbrt())
}

/// ∫_{κmax}^∞ dκ/2π · net_model = η^{-1/6}/(4π) · arctan(η^{1/6}/κmax).
///
/// Written with the complementary angle so the value keeps full relative
/// precision at large κmax.
pub fn tail_integral(kappa_max: f64, eta: f64) -> f64 {
    let r = eta.powf(1.0 / 6.0);
    (r / kappa_max).atan() / (4.0 * PI * r)
}

/// Relative deviation |net − model|/net at `kappa_max`.
pub fn tail_deviation(kappa_max: f64, eta: f64) -> Result<f64> {
    let s = integrand_net(kappa_max, eta)?;
    Ok(((s.net - net_model(kappa_max, eta)) / s.net).abs())
}

/// The analytic tail, provided the model is admissible at `kappa_max`.
pub fn tail_model(kappa_max: f64, eta: f64) -> Result<f64> {
    if !(kappa_max > 0.0 && kappa_max.is_finite()) {
        return Err(domain(format!("kappa_max must be > 0, got {kappa_max}")));
    }
    check_inputs(kappa_max, eta)?;
    let deviation = tail_deviation(kappa_max, eta)?;
    if !(deviation < TAIL_MODEL_MAX_DEVIATION) {
        return Err(Error::TailInadmissible { kappa_max, deviation });
    }
    Ok(tail_integral(kappa_max, eta))
}

fn net_density(eta: f64) -> impl Fn(f64) -> Result<f64> + Sync {
    move |k| Ok(integrand_net(k, eta)?.net / (2.0 * PI))
}

/// f(η), evaluated sequentially.
pub fn force_exact(eta: f64, spec: &QuadratureSpec) -> Result<ForceResult> {
    force_exact_with(eta, spec, Execution::Sequential)
}

/// f(η) = η^{2/3} [∫₀^{κmax} dκ/2π net + tail].
///
/// With the adaptive policy κmax starts at 10·max(1, η^{1/6}) and doubles
/// until the model is admissible and its error bound (twice the measured
/// relative deviation times the tail) is below 0.1·rel_tol of the total.
pub fn force_exact_with(eta: f64, spec: &QuadratureSpec, exec: Execution) -> Result<ForceResult> {
    spec.validate()?;
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(domain(format!("eta must be finite and >= 0, got {eta}")));
    }
    if eta == 0.0 {
        return Ok(ForceResult {
            eta,
            f_eta: 0.0,
            err_est: 0.0,
            kappa_max: 0.0,
            n_evals: 0,
        });
    }
    let density = net_density(eta);
    let (mut kmax, adaptive) = match spec.kappa_max_policy {
        KappaMaxPolicy::Fixed(k) => (k, false),
        KappaMaxPolicy::Adaptive => (10.0 * eta.powf(1.0 / 6.0).max(1.0), true),
    };

    let first = try_integrate_finite(&density, 0.0, kmax, spec, exec)?;
    let (mut body, mut body_err, mut n_evals) = (first.value, first.err_est, first.n_evals);
    let mut converged = first.converged;
    let (tail, tail_err) = loop {
        let deviation = tail_deviation(kmax, eta)?;
        n_evals += 1;
        let tail = tail_integral(kmax, eta);
        let tail_err = 2.0 * deviation * tail;
        let admissible = deviation < TAIL_MODEL_MAX_DEVIATION;
        let small = tail_err <= 0.1 * spec.rel_tol * (body + tail).abs();
        if admissible && (small || !adaptive) {
            break (tail, tail_err);
        }
        if !adaptive || 2.0 * kmax > KAPPA_MAX_LIMIT {
            return Err(Error::TailInadmissible {
                kappa_max: kmax,
                deviation,
            });
        }
        let more = try_integrate_finite(&density, kmax, 2.0 * kmax, spec, exec)?;
        body += more.value;
        body_err += more.err_est;
        n_evals += more.n_evals;
        converged &= more.converged;
        kmax *= 2.0;
    };

    let scale = eta.powf(2.0 / 3.0);
    let f_eta = scale * (body + tail);
    let err_est = scale * (body_err + tail_err);
    if !converged || !f_eta.is_finite() {
        return Err(Error::Tolerance {
            value: f_eta,
            err_est,
            n_evals,
        });
    }
    Ok(ForceResult {
        eta,
        f_eta,
        err_est,
        kappa_max: kmax,
        n_evals,
    })
}

/// Two-plate force per unit area with plate separation `a`:
/// −∫₀^∞ dK/2π · K(coth Ka − 1), the difference of the coincident-limit
/// stresses of the between-plates and outside Green's functions. Equals
/// −π/(24a²).
pub fn force_classic(a: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(domain(format!("plate separation a must be > 0, got {a}")));
    }
    let kernel = move |k: f64| -> Result<f64> {
        // K(coth Ka − 1) = 2K/(e^{2Ka} − 1) → 1/a as K → 0
        if k == 0.0 {
            Ok(1.0 / a)
        } else {
            Ok(2.0 * k / (2.0 * k * a).exp_m1())
        }
    };
    let r = try_integrate_from(kernel, 0.0, spec, None, Execution::Sequential)?;
    if !r.converged {
        return Err(Error::Tolerance {
            value: r.value,
            err_est: r.err_est,
            n_evals: r.n_evals,
        });
    }
    Ok(-r.value / (2.0 * PI))
}

/// Stress integrands to first order in b just below and above a plate at
/// height `a`, and their difference b(1 − e^{−2Ka})/(2K²).
pub fn perturbative_integrands(k: f64, a: f64, b: f64) -> Result<PerturbativeSample> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(domain(format!("K must be > 0, got {k}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(domain(format!("a must be > 0, got {a}")));
    }
    if !(b >= 0.0 && b.is_finite()) {
        return Err(domain(format!("b must be >= 0, got {b}")));
    }
    let ka = k * a;
    let k2 = k * k;
    let decay = (-2.0 * ka).exp();
    let below = -k + b * (1.0 - 2.0 * ka - 2.0 * decay) / (4.0 * k2);
    let above = -k - b * (1.0 + 2.0 * ka) / (4.0 * k2);
    let net = b * -(-2.0 * ka).exp_m1() / (2.0 * k2);
    Ok(PerturbativeSample { below, above, net })
}

/// b∫_{k_min}^∞ dK/2π (1 − e^{−2Ka})/(2K²). The integrand goes like a b/K
/// for K ≪ 1/a, so the result grows like (ab/2π) ln(1/k_min) as the cutoff
/// is removed.
pub fn force_perturbative(a: f64, b: f64, k_min: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(k_min > 0.0 && k_min.is_finite()) {
        return Err(domain(format!("k_min must be > 0, got {k_min}")));
    }
    perturbative_integrands(k_min, a, b)?;
    if b == 0.0 {
        return Ok(0.0);
    }
    // Integrate in u = ln K, where the IR region is a flat plateau.
    let lo = k_min.ln();
    let density = move |u: f64| -> Result<f64> {
        let k = u.exp();
        Ok(k * perturbative_integrands(k, a, b)?.net / (2.0 * PI))
    };
    // Past K = 40/a, e^{−2Ka} < e^{−80} and the rest integrates to b/(4πK).
    let k_split = (40.0 / a).max(k_min);
    let body = try_integrate_finite(density, lo, k_split.ln(), spec, Execution::Sequential)?;
    let tail = b / (4.0 * PI * k_split);
    let value = body.value + tail;
    if !body.converged || !value.is_finite() {
        return Err(Error::Tolerance {
            value,
            err_est: body.err_est,
            n_evals: body.n_evals,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::log_deriv_bi;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn above_is_a_log_derivative() {
        assert_eq!(integrand_above(0.0, 1.0).unwrap(), log_deriv_ai(1.0).unwrap());
        assert_eq!(integrand_above(2.0, 8.0).unwrap(), log_deriv_ai(6.0).unwrap());
        let k: f64 = 10.0;
        let expansion = -k - 1.0 / (2.0 * k) - 1.0 / (4.0 * k * k);
        assert!((integrand_above(k, 1.0).unwrap() - expansion).abs() < 1e-3);
        assert!(integrand_above(-1.0, 1.0).is_err());
        assert!(integrand_above(1.0, 0.0).is_err());
    }

    #[test]
    fn below_at_zero_momentum_is_minus_bi_log_derivative() {
        // Ai'(0)Bi(0) + Ai(0)Bi'(0) = 0 removes the Bi' and Ai terms.
        for eta in [0.01f64, 1.0, 27.0, 500.0] {
            let want = -log_deriv_bi(eta.cbrt()).unwrap();
            assert!(rel(integrand_below(0.0, eta).unwrap(), want) < 1e-13, "eta={eta}");
        }
    }

    #[test]
    fn below_matches_expansion() {
        let k: f64 = 10.0;
        let expansion = -k - 1.0 / (2.0 * k) + 1.0 / (4.0 * k * k);
        assert!((integrand_below(k, 1.0).unwrap() - expansion).abs() < 1e-3);
    }

    #[test]
    fn faces_agree_as_eta_vanishes() {
        // d(N/D)/dz₂ = (N/D)² − z₂ while d(Ai'/Ai)/dz = z − (Ai'/Ai)², so the
        // faces separate at first order: below − above ≈ 2(L² − κ²)η^{1/3}
        // with L = Ai'/Ai(κ²).
        // references from a 50-digit evaluation at η = 1e-12
        let refs = [
            (0.1f64, 1.058_335_541_358_447e-4),
            (1.0, 7.673_667_488_304_707e-5),
            (5.0, 1.991_098_461_071_731e-5),
            (20.0, 4.989_700_881_442_108e-6),
        ];
        for (k, want) in refs {
            let d = |eta: f64| integrand_below(k, eta).unwrap() - integrand_above(k, eta).unwrap();
            assert!((d(1e-12) - want).abs() < 1e-13, "k={k}: {}", d(1e-12));
            let l = log_deriv_ai(k * k).unwrap();
            assert!(rel(want, 2.0 * (l * l - k * k) * 1e-4) < 1e-2);
            assert!(d(1e-36).abs() < 1e-9);
        }
    }

    #[test]
    fn net_is_exactly_zero_without_potential() {
        for k in [0.0, 0.1, 1.0, 3.7, 5.0, 20.0] {
            let s = integrand_net(k, 0.0).unwrap();
            assert_eq!(s.net, 0.0);
            assert_eq!(s.above, s.below);
        }
    }

    #[test]
    fn net_at_zero_momentum() {
        let v = airy_eval(1.0).unwrap();
        let want = -v.bip / v.bi - v.aip / v.ai;
        let s = integrand_net(0.0, 1.0).unwrap();
        assert!(rel(s.net, want) < 1e-13);
        assert!(s.net > 0.0);
    }

    #[test]
    fn net_agrees_with_difference_of_faces() {
        for eta in [1e-3, 0.5, 1.0, 30.0] {
            for k in [0.0, 0.3, 1.0, 4.0, 9.0] {
                let s = integrand_net(k, eta).unwrap();
                let diff = s.below - s.above;
                let slack = 1e-14 * s.above.abs().max(1.0);
                assert!((s.net - diff).abs() <= slack, "eta={eta} k={k}: {} vs {diff}", s.net);
            }
        }
    }

    #[test]
    fn net_approaches_tail_model() {
        let s = integrand_net(10.0, 1.0).unwrap();
        assert!((s.net - net_model(10.0, 1.0)).abs() < 2e-3);
        for eta in [1e-2, 1.0, 100.0] {
            assert!(tail_deviation(200.0, eta).unwrap() < 1e-3);
        }
    }

    #[test]
    fn tail_values() {
        assert!((tail_integral(1.0, 1.0) - 0.0625).abs() < 1e-15);
        assert!(tail_integral(1e300, 1.0) < 1e-300);
        for (k, eta) in [(5.0, 0.1), (20.0, 1.0), (100.0, 1e3)] {
            assert!(tail_integral(k, eta) < 1.0 / (4.0 * PI * k));
        }
        assert!(tail_model(40.0, 1.0).is_ok());
        assert!(matches!(tail_model(0.5, 1e-4), Err(Error::TailInadmissible { .. })));
    }

    #[test]
    fn force_vanishes_without_potential() {
        let r = force_exact(0.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.f_eta, 0.0);
        assert_eq!(r.err_est, 0.0);
    }

    #[test]
    fn force_is_repulsive() {
        let spec = QuadratureSpec::default();
        for eta in [1e-3, 1.0, 10.0] {
            let r = force_exact(eta, &spec).unwrap();
            assert!(r.f_eta > 0.0 && r.err_est >= 0.0);
            assert!(r.err_est <= spec.rel_tol * r.f_eta);
        }
    }

    #[test]
    fn fixed_cutoff_policy() {
        let adaptive = force_exact(1.0, &QuadratureSpec::default()).unwrap();
        let spec = QuadratureSpec {
            kappa_max_policy: KappaMaxPolicy::Fixed(30.0),
            ..Default::default()
        };
        let fixed = force_exact(1.0, &spec).unwrap();
        assert_eq!(fixed.kappa_max, 30.0);
        assert!(rel(fixed.f_eta, adaptive.f_eta) < 1e-7);
        let spec = QuadratureSpec {
            kappa_max_policy: KappaMaxPolicy::Fixed(0.1),
            ..Default::default()
        };
        assert!(matches!(force_exact(1e-3, &spec), Err(Error::TailInadmissible { .. })));
    }

    #[test]
    fn classic_force() {
        let spec = QuadratureSpec::default();
        assert!(rel(force_classic(1.0, &spec).unwrap(), -PI / 24.0) < 1e-8);
        assert!(rel(force_classic(2.0, &spec).unwrap(), -PI / 96.0) < 1e-8);
        assert!(force_classic(0.0, &spec).is_err());
    }

    #[test]
    fn perturbative_identity() {
        for (k, a, b) in [(0.3, 1.0, 1.0), (2.0, 0.5, 3.0), (10.0, 2.0, 0.1)] {
            let s = perturbative_integrands(k, a, b).unwrap();
            // relative to the operands of the subtraction
            let scale = s.below.abs().max(s.above.abs());
            assert!(((s.below - s.above) - s.net).abs() <= 1e-12 * scale);
        }
        let s = perturbative_integrands(1.5, 1.0, 0.0).unwrap();
        assert_eq!((s.below, s.above, s.net), (-1.5, -1.5, 0.0));
        let k = 1e-6;
        let s = perturbative_integrands(k, 2.0, 0.5).unwrap();
        assert!(rel(s.net, 0.5 * 2.0 / k) < 1e-5);
    }

    #[test]
    fn perturbative_force_diverges_logarithmically() {
        let spec = QuadratureSpec::default();
        let f1 = force_perturbative(1.0, 1.0, 1e-2, &spec).unwrap();
        let f2 = force_perturbative(1.0, 1.0, 5e-3, &spec).unwrap();
        let want = 2f64.ln() / (2.0 * PI);
        assert!(f1 > 0.0 && f2 > f1);
        assert!(rel(f2 - f1, want) < 0.05);
        assert!(force_perturbative(1.0, 1.0, 1e6, &spec).unwrap() < 1e-7);
        assert_eq!(force_perturbative(1.0, 0.0, 1e-2, &spec).unwrap(), 0.0);
        assert!(force_perturbative(1.0, 1.0, 0.0, &spec).is_err());
    }
}
