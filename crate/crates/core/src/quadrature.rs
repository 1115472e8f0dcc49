//! Deterministic adaptive Gauss–Kronrod (7/15 → 10/21) quadrature.
//!
//! Globally adaptive bisection: the panel with the largest error estimate is
//! split (ties go to the leftmost), panels are kept in spatial order, and the
//! totals are re-summed left to right, so identical inputs give bit-identical
//! results. Node evaluations inside a panel may fan out through
//! [`Execution`]; they are combined in a fixed order afterwards.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exec::Execution;

/// Where the κ integral is cut before the analytic tail takes over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaMaxPolicy {
    Fixed(f64),
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub kappa_max_policy: KappaMaxPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            kappa_max_policy: KappaMaxPolicy::Adaptive,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(domain(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(domain(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if self.max_subdivisions == 0 {
            return Err(domain("max_subdivisions must be >= 1"));
        }
        if let KappaMaxPolicy::Fixed(k) = self.kappa_max_policy {
            if !(k > 0.0 && k.is_finite()) {
                return Err(domain(format!("fixed kappa_max must be > 0, got {k}")));
            }
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_est: f64,
    pub n_evals: usize,
    pub converged: bool,
}

/// Analytic continuation of an integral beyond `cutoff`, with the caller's
/// bound on the model error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSplit {
    pub cutoff: f64,
    pub value: f64,
    pub err_bound: f64,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_215_438,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// 10-point Gauss weights for XGK[1], XGK[3], …, XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const NODES_PER_PANEL: usize = 21;

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

fn gk21<F>(f: &F, lo: f64, hi: f64, exec: Execution) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    // Order: center, then (c - h x_j, c + h x_j) for j = 0..10.
    let mut xs = [center; NODES_PER_PANEL];
    for j in 0..10 {
        xs[1 + 2 * j] = center - half * XGK[j];
        xs[2 + 2 * j] = center + half * XGK[j];
    }
    let evals = exec.map(&xs, |&x| f(x));
    let mut fv = [0.0; NODES_PER_PANEL];
    for (i, r) in evals.into_iter().enumerate() {
        let v = r?;
        if !v.is_finite() {
            return Err(Error::NonFinite(xs[i]));
        }
        fv[i] = v;
    }

    let fc = fv[0];
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    for j in 0..10 {
        let (f1, f2) = (fv[1 + 2 * j], fv[2 + 2 * j]);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv[1 + 2 * j] - mean).abs() + (fv[2 + 2 * j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { lo, hi, value, err })
}

fn adaptive<F>(f: &F, lo: f64, hi: f64, spec: &QuadratureSpec, exec: Execution) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(domain(format!("invalid interval [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            err_est: 0.0,
            n_evals: 0,
            converged: true,
        });
    }

    let mut panels = vec![gk21(f, lo, hi, exec)?];
    let mut n_evals = NODES_PER_PANEL;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let done = err <= spec.tolerance(value);
        if done || panels.len() >= spec.max_subdivisions {
            return Ok(QuadResult {
                value,
                err_est: err,
                n_evals,
                converged: done,
            });
        }

        let (worst, _) =
            panels.iter().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |(bi, be), (i, p)| if p.err > be { (i, p.err) } else { (bi, be) },
            );
        let p = panels[worst];
        let mid = 0.5 * (p.lo + p.hi);
        if !(mid > p.lo && mid < p.hi) {
            // Panel is at the resolution limit of f64.
            return Ok(QuadResult {
                value,
                err_est: err,
                n_evals,
                converged: false,
            });
        }
        let left = gk21(f, p.lo, mid, exec)?;
        let right = gk21(f, mid, p.hi, exec)?;
        n_evals += 2 * NODES_PER_PANEL;
        panels[worst] = left;
        panels.insert(worst + 1, right);
    }
}

/// ∫_lo^hi f for an infallible integrand, evaluated sequentially.
pub fn integrate_finite<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    adaptive(&|x| Ok(f(x)), lo, hi, spec, Execution::Sequential)
}

/// ∫_lo^hi f for a fallible integrand; the first integrand error aborts.
pub fn try_integrate_finite<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec, exec: Execution) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    adaptive(&f, lo, hi, spec, exec)
}

/// ∫_0^∞ f. With `tail`, integrates [0, cutoff] and adds the tail model;
/// without, maps [0, ∞) onto (0, 1] by κ = (1 − t)/t, which requires f to
/// decay faster than κ^{-1-δ}.
pub fn integrate_semi_infinite<F>(f: F, spec: &QuadratureSpec, tail: Option<TailSplit>) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    try_integrate_from(|x| Ok(f(x)), 0.0, spec, tail, Execution::Sequential)
}

/// ∫_lo^∞ f for a fallible integrand, with the same tail handling as
/// [`integrate_semi_infinite`].
pub fn try_integrate_from<F>(
    f: F,
    lo: f64,
    spec: &QuadratureSpec,
    tail: Option<TailSplit>,
    exec: Execution,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !lo.is_finite() {
        return Err(domain(format!("lower limit must be finite, got {lo}")));
    }
    match tail {
        Some(t) => {
            if !(t.cutoff >= lo && t.cutoff.is_finite()) || !(t.err_bound >= 0.0) {
                return Err(domain(format!("invalid tail split {t:?}")));
            }
            let body = adaptive(&f, lo, t.cutoff, spec, exec)?;
            let value = body.value + t.value;
            let err_est = body.err_est + t.err_bound;
            Ok(QuadResult {
                value,
                err_est,
                n_evals: body.n_evals,
                converged: body.converged && err_est <= spec.tolerance(value),
            })
        }
        None => {
            let mapped = |t: f64| -> Result<f64> {
                let x = lo + (1.0 - t) / t;
                Ok(f(x)? / (t * t))
            };
            adaptive(&mapped, 0.0, 1.0, spec, exec)
        }
    }
}
