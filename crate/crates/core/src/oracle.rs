//! Finite-difference oracle for the mode equation
//!
//! ```text
//!     G'' − q(x) G = −δ(x − x'),     q(x) = K² + b|x|,
//! ```
//!
//! solved in physical x without any Airy function. K = b^{1/3} κ when b > 0
//! and K = κ/a when b = 0 (the free field, where κ has no other scale).
//!
//! Discretization on a uniform grid:
//!
//! * 3-point stencil, or Numerov (q values weighted 1/12, 10/12, 1/12).
//! * The source sits on the node nearest x' as a unit flux jump. The row's
//!   right-hand side carries the jump of G''' = (qG)' across the source,
//!   −h(1 + h²q/6) for 3-point and −h(1 + h²q/12) for Numerov, so the row is
//!   as accurate as a regular one.
//! * When x = 0 is a node, the kink of |x| makes G''' jump by 2bG there; the
//!   diagonal picks up −(h³/6)·2b or −(h³/12)·2b for the same reason.
//! * Dirichlet zero at the plate; at the far edge the WKB closure
//!   G' = ∓√q G, discretized one-sided. G is ~e^{−40} of its peak there.
//!
//! Each solve is repeated on grids with n, 2n − 1 and 4n − 3 nodes and
//! Richardson-extrapolated on the coarse nodes; disagreement of the two
//! first-level extrapolants beyond 1e−5 of max|G| is reported as
//! [`Error::GridTooCoarse`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::greens::PlateConfig;
use crate::quadrature::{try_integrate_finite, QuadratureSpec};
use crate::stress::{net_model, tail_integral, ForceResult, TAIL_MODEL_MAX_DEVIATION};

/// Smallest admissible grid.
pub const MIN_NODES: usize = 1000;
/// Allowed gap between the two first-level Richardson extrapolants,
/// relative to max|G|.
pub const RICHARDSON_LIMIT: f64 = 1e-5;
/// Decay exponent ∫√q dx covered by the default truncation.
const DECAY: f64 = 40.0;
/// q at the far edge of default grids is at least this.
const EDGE_Q: f64 = 25.0;
/// Halvings of ε in the coincident-limit extrapolation.
const EPS_LEVELS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stencil {
    /// 3-point, second order.
    Second,
    /// Numerov, fourth order.
    Fourth,
}

impl Stencil {
    pub fn order(self) -> u32 {
        match self {
            Stencil::Second => 2,
            Stencil::Fourth => 4,
        }
    }

    pub fn from_order(order: u32) -> Result<Self> {
        match order {
            2 => Ok(Stencil::Second),
            4 => Ok(Stencil::Fourth),
            _ => Err(domain(format!("stencil order must be 2 or 4, got {order}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n: usize,
    pub stencil: Stencil,
}

impl GridSpec {
    pub fn new(x_lo: f64, x_hi: f64, n: usize, stencil: Stencil) -> Result<Self> {
        let g = GridSpec { x_lo, x_hi, n, stencil };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_lo.is_finite() && self.x_hi.is_finite() && self.x_lo < self.x_hi) {
            return Err(domain(format!(
                "grid bounds must satisfy x_lo < x_hi, got [{}, {}]",
                self.x_lo, self.x_hi
            )));
        }
        if self.n < MIN_NODES {
            return Err(domain(format!("grid needs at least {MIN_NODES} nodes, got {}", self.n)));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_lo + i as f64 * self.h()
    }

    /// Index of the node nearest `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.x_lo) / self.h()).round();
        i.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Index of `x` if it lies on a node (to 1e−9 of a cell).
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let i = self.nearest(x);
        ((self.node(i) - x).abs() <= 1e-9 * self.h()).then_some(i)
    }

    fn refined(&self, level: u32) -> GridSpec {
        GridSpec {
            n: (self.n - 1) * (1 << level) + 1,
            ..*self
        }
    }

    /// Grid on [a, X] with spacing `spacing`, long enough for the
    /// solution with momentum `kappa` to decay by e^{−40} and for q(X) ≥ 25.
    pub fn above(cfg: &PlateConfig, kappa: f64, spacing: f64, stencil: Stencil) -> Result<Self> {
        check_spacing(spacing)?;
        let a = cfg.a();
        let len = decay_length(q0(kappa, cfg)?, cfg.b(), a)?;
        let n = ((len / spacing).ceil() as usize + 1).max(MIN_NODES);
        GridSpec::new(a, a + (n - 1) as f64 * spacing, n, stencil)
    }

    /// Grid on [−X, a] with spacing a/⌈a/spacing⌉ (so x = 0 is a node) and
    /// the same decay requirement towards −X.
    pub fn full(cfg: &PlateConfig, kappa: f64, spacing: f64, stencil: Stencil) -> Result<Self> {
        check_spacing(spacing)?;
        let a = cfg.a();
        let len = decay_length(q0(kappa, cfg)?, cfg.b(), 0.0)?;
        let m = (a / spacing).ceil() as usize;
        let h = a / m as f64;
        let left = ((len / h).ceil() as usize).max(MIN_NODES.saturating_sub(m + 1));
        GridSpec::new(-(left as f64) * h, a, m + left + 1, stencil)
    }
}

fn check_spacing(spacing: f64) -> Result<()> {
    if spacing > 0.0 && spacing.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("grid spacing must be > 0, got {spacing}")))
    }
}

/// Length beyond `start` over which ∫√(q0 + b x) dx reaches DECAY and q
/// reaches EDGE_Q.
fn decay_length(q0: f64, b: f64, start: f64) -> Result<f64> {
    if b == 0.0 {
        if q0 <= 0.0 {
            return Err(domain("free-field oracle needs kappa > 0"));
        }
        return Ok(DECAY / q0.sqrt());
    }
    let q_start = q0 + b * start;
    let q_end = (q_start.powf(1.5) + 1.5 * b * DECAY).powf(2.0 / 3.0).max(EDGE_Q);
    Ok((q_end - q_start) / b)
}

/// Momentum unit: b^{1/3}, or 1/a in the free field.
fn momentum_unit(cfg: &PlateConfig) -> f64 {
    if cfg.b() > 0.0 {
        cfg.airy_scale()
    } else {
        1.0 / cfg.a()
    }
}

fn q0(kappa: f64, cfg: &PlateConfig) -> Result<f64> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(domain(format!("kappa must be finite and >= 0, got {kappa}")));
    }
    let k = kappa * momentum_unit(cfg);
    Ok(k * k)
}

/// Which end of the grid carries the Dirichlet plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Plate {
    Lo,
    Hi,
}

/// Which face of the plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Above,
    Below,
}

/// G(x, x') on the nodes of the requested grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BvpSolution {
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    /// Node carrying the source.
    pub source: usize,
    /// Gap between the first-level Richardson extrapolants relative to
    /// max|G| (0 for single-grid solves).
    pub richardson_gap: f64,
}

impl BvpSolution {
    /// Value at `x` if it is a node of the grid.
    pub fn at(&self, x: f64) -> Option<f64> {
        let n = self.x.len();
        let h = (self.x[n - 1] - self.x[0]) / (n - 1) as f64;
        let i = ((x - self.x[0]) / h).round();
        if !(0.0..n as f64).contains(&i) {
            return None;
        }
        let i = i as usize;
        ((self.x[i] - x).abs() <= 1e-9 * h).then(|| self.g[i])
    }
}

struct Problem {
    q0: f64,
    b: f64,
    plate: Plate,
}

impl Problem {
    fn q(&self, x: f64) -> f64 {
        self.q0 + self.b * x.abs()
    }

    /// One tridiagonal solve on `grid` with the source on node `src`.
    fn solve(&self, grid: &GridSpec, src: usize) -> Vec<f64> {
        let n = grid.n;
        let h = grid.h();
        let h2 = h * h;
        let fourth = grid.stencil == Stencil::Fourth;
        let (w_side, w_mid, kink) = if fourth {
            (h2 / 12.0, 10.0 * h2 / 12.0, h2 * h / 12.0)
        } else {
            (0.0, h2, h2 * h / 6.0)
        };
        let q: Vec<f64> = (0..n).map(|i| self.q(grid.node(i))).collect();
        let kink_node = if self.b > 0.0 { grid.node_index(0.0) } else { None };

        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            sub[i] = 1.0 - w_side * q[i - 1];
            sup[i] = 1.0 - w_side * q[i + 1];
            diag[i] = -2.0 - w_mid * q[i];
            if Some(i) == kink_node {
                diag[i] -= kink * 2.0 * self.b;
            }
        }
        let correction = if fourth { 12.0 } else { 6.0 };
        rhs[src] = -h * (1.0 + h2 * q[src] / correction);

        // Plate: G = 0. Far edge: one-sided WKB decay.
        match self.plate {
            Plate::Lo => {
                diag[0] = 1.0;
                sup[0] = 0.0;
                sub[n - 1] = 1.0;
                diag[n - 1] = -(1.0 + h * q[n - 1].sqrt());
            }
            Plate::Hi => {
                diag[n - 1] = 1.0;
                sub[n - 1] = 0.0;
                sup[0] = 1.0;
                diag[0] = -(1.0 + h * q[0].sqrt());
            }
        }
        thomas(&sub, &diag, &sup, &mut rhs);
        rhs
    }

    fn solve_extrapolated(&self, grid: &GridSpec, src: usize) -> Result<BvpSolution> {
        let levels: Vec<Vec<f64>> = (0..3u32)
            .map(|l| {
                let fine = grid.refined(l);
                let g = self.solve(&fine, src << l);
                (0..grid.n).map(|i| g[i << l]).collect()
            })
            .collect();
        let p = grid.stencil.order() as i32;
        let r1 = 2f64.powi(p) - 1.0;
        let r2 = 2f64.powi(p + 2) - 1.0;
        let scale = levels[2].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut gap = 0.0f64;
        let g: Vec<f64> = (0..grid.n)
            .map(|i| {
                let e12 = levels[1][i] + (levels[1][i] - levels[0][i]) / r1;
                let e23 = levels[2][i] + (levels[2][i] - levels[1][i]) / r1;
                gap = gap.max((e23 - e12).abs());
                e23 + (e23 - e12) / r2
            })
            .collect();
        let gap = if scale > 0.0 { gap / scale } else { 0.0 };
        if !(gap <= RICHARDSON_LIMIT) {
            return Err(Error::GridTooCoarse {
                gap,
                limit: RICHARDSON_LIMIT,
            });
        }
        let x = (0..grid.n).map(|i| grid.node(i)).collect();
        Ok(BvpSolution {
            x,
            g,
            source: src,
            richardson_gap: gap,
        })
    }
}

/// In-place tridiagonal solve; `rhs` becomes the solution.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    c[0] = sup[0] / beta;
    rhs[0] /= beta;
    for i in 1..n {
        beta = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / beta;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

fn above_problem(kappa: f64, cfg: &PlateConfig, xp: f64, grid: &GridSpec) -> Result<(Problem, usize)> {
    grid.validate()?;
    let a = cfg.a();
    if (grid.x_lo - a).abs() > 1e-12 * a.max(1.0) {
        return Err(domain(format!(
            "above-plate grid must start at the plate a = {a}, got {}",
            grid.x_lo
        )));
    }
    let src = grid.nearest(xp);
    if !(xp > a && xp < grid.x_hi) || src == 0 || src == grid.n - 1 {
        return Err(domain(format!(
            "source {xp} must lie strictly inside ({a}, {})",
            grid.x_hi
        )));
    }
    Ok((
        Problem {
            q0: q0(kappa, cfg)?,
            b: cfg.b(),
            plate: Plate::Lo,
        },
        src,
    ))
}

fn full_problem(kappa: f64, cfg: &PlateConfig, xp: f64, grid: &GridSpec) -> Result<(Problem, usize)> {
    grid.validate()?;
    let a = cfg.a();
    if (grid.x_hi - a).abs() > 1e-12 * a.max(1.0) {
        return Err(domain(format!(
            "below-plate grid must end at the plate a = {a}, got {}",
            grid.x_hi
        )));
    }
    let src = grid.nearest(xp);
    if !(xp < a && xp > grid.x_lo) || src == 0 || src == grid.n - 1 {
        return Err(domain(format!(
            "source {xp} must lie strictly inside ({}, {a})",
            grid.x_lo
        )));
    }
    Ok((
        Problem {
            q0: q0(kappa, cfg)?,
            b: cfg.b(),
            plate: Plate::Hi,
        },
        src,
    ))
}

/// G(·, x') above the plate on `grid` = [a, X_far], extrapolated over three
/// refinements.
pub fn solve_bvp_above(kappa: f64, cfg: &PlateConfig, xp: f64, grid: &GridSpec) -> Result<BvpSolution> {
    let (p, src) = above_problem(kappa, cfg, xp, grid)?;
    p.solve_extrapolated(grid, src)
}

/// G(·, x') below the plate on `grid` = [−X_far, a], extrapolated over three
/// refinements. The kink of b|x| at 0 is handled by the stencil alone.
pub fn solve_bvp_full(kappa: f64, cfg: &PlateConfig, xp: f64, grid: &GridSpec) -> Result<BvpSolution> {
    let (p, src) = full_problem(kappa, cfg, xp, grid)?;
    p.solve_extrapolated(grid, src)
}

/// [`solve_bvp_above`] on the given grid only, without extrapolation.
pub fn solve_bvp_above_single(kappa: f64, cfg: &PlateConfig, xp: f64, grid: &GridSpec) -> Result<BvpSolution> {
    let (p, src) = above_problem(kappa, cfg, xp, grid)?;
    let g = p.solve(grid, src);
    Ok(BvpSolution {
        x: (0..grid.n).map(|i| grid.node(i)).collect(),
        g,
        source: src,
        richardson_gap: 0.0,
    })
}

/// [`solve_bvp_full`] on the given grid only, without extrapolation.
pub fn solve_bvp_full_single(kappa: f64, cfg: &PlateConfig, xp: f64, grid: &GridSpec) -> Result<BvpSolution> {
    let (p, src) = full_problem(kappa, cfg, xp, grid)?;
    let g = p.solve(grid, src);
    Ok(BvpSolution {
        x: (0..grid.n).map(|i| grid.node(i)).collect(),
        g,
        source: src,
        richardson_gap: 0.0,
    })
}

/// Polynomial extrapolation of (x_i, y_i) to x = 0 (Neville).
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let m = xs.len();
    for k in 1..m {
        for i in 0..m - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}

/// Coincident-limit mixed derivative ∂x∂x'G at the plate face, in units of
/// the momentum scale (b^{1/3}, or 1/a when b = 0), so it compares directly
/// with the closed-form stress integrands.
///
/// Near the Dirichlet plate G(a ± ε, a ± ε) = ε + ε² ∂x∂x'G + O(ε³), so
/// D(ε) = (G − ε)/ε² is evaluated at ε = eps·2^{−m}, m = 0..4 (each a solve
/// with the source at a ± ε, snapped to the grid), and extrapolated to ε = 0.
pub fn integrand_from_fd(kappa: f64, cfg: &PlateConfig, side: Side, grid: &GridSpec, eps: f64) -> Result<f64> {
    grid.validate()?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(domain(format!("eps must be > 0, got {eps}")));
    }
    let unit = momentum_unit(cfg);
    if eps * unit > 0.5 {
        return Err(Error::Resolution(format!(
            "eps = {eps} is not small against the length scale {}",
            1.0 / unit
        )));
    }
    let h = grid.h();
    let a = cfg.a();
    let sign = match side {
        Side::Above => 1.0,
        Side::Below => -1.0,
    };
    let mut steps = Vec::with_capacity(EPS_LEVELS);
    for m in 0..EPS_LEVELS {
        let j = (eps / (h * (1u32 << m) as f64)).round() as usize;
        if j == 0 || steps.last() == Some(&j) {
            return Err(Error::Resolution(format!(
                "eps = {eps} does not resolve {EPS_LEVELS} distinct halvings on spacing {h}"
            )));
        }
        steps.push(j);
    }

    let mut xs = Vec::with_capacity(EPS_LEVELS);
    let mut ds = Vec::with_capacity(EPS_LEVELS);
    for &j in &steps {
        let e = j as f64 * h;
        let xp = a + sign * e;
        let sol = match side {
            Side::Above => solve_bvp_above(kappa, cfg, xp, grid)?,
            Side::Below => solve_bvp_full(kappa, cfg, xp, grid)?,
        };
        let g = sol.g[sol.source];
        xs.push(e);
        ds.push((g - e) / (e * e));
    }
    let d = extrapolate_to_zero(&xs, &ds) / unit;
    if !d.is_finite() {
        return Err(Error::Resolution(format!(
            "non-finite coincident limit at kappa = {kappa}"
        )));
    }
    Ok(d)
}

/// Settings of the finite-difference force pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdPipeline {
    pub stencil: Stencil,
    /// Grid spacing in units of a.
    pub spacing: f64,
    /// Largest ε of the coincident-limit extrapolation, in grid cells.
    pub eps_cells: usize,
    /// Cutoff of the κ integral; the analytic tail takes over beyond it.
    pub kappa_max: f64,
    pub rel_tol: f64,
}

impl Default for FdPipeline {
    fn default() -> Self {
        FdPipeline {
            stencil: Stencil::Fourth,
            spacing: 2.5e-3,
            eps_cells: 16,
            kappa_max: 10.0,
            rel_tol: 1e-7,
        }
    }
}

/// f(η) with a = 1 from [`integrand_from_fd`] on both faces, integrated by
/// the adaptive quadrature up to `kappa_max`, plus the analytic tail. The
/// grids are fixed over κ (sized for κ = 0, the slowest decay) so that the
/// integrand is a smooth function of κ. The tail is accepted only if the FD
/// net integrand at `kappa_max` is within 1% of the tail model.
pub fn force_from_fd(eta: f64, pipeline: &FdPipeline, exec: Execution) -> Result<ForceResult> {
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
    let cfg = PlateConfig::from_eta(eta, 1.0)?;
    let above = GridSpec::above(&cfg, 0.0, pipeline.spacing, pipeline.stencil)?;
    let below = GridSpec::full(&cfg, 0.0, pipeline.spacing, pipeline.stencil)?;
    let eps = pipeline.eps_cells as f64 * above.h().max(below.h());
    let net = |k: f64| -> Result<f64> {
        let up = integrand_from_fd(k, &cfg, Side::Above, &above, eps)?;
        let down = integrand_from_fd(k, &cfg, Side::Below, &below, eps)?;
        Ok(down - up)
    };
    let spec = QuadratureSpec {
        rel_tol: pipeline.rel_tol,
        ..QuadratureSpec::default()
    };
    let body = try_integrate_finite(|k| Ok(net(k)? / (2.0 * PI)), 0.0, pipeline.kappa_max, &spec, exec)?;

    let kmax = pipeline.kappa_max;
    let at_cut = net(kmax)?;
    let deviation = ((at_cut - net_model(kmax, eta)) / at_cut).abs();
    if !(deviation < TAIL_MODEL_MAX_DEVIATION) {
        return Err(Error::TailInadmissible {
            kappa_max: kmax,
            deviation,
        });
    }
    let tail = tail_integral(kmax, eta);
    let scale = eta.powf(2.0 / 3.0);
    let f_eta = scale * (body.value + tail);
    let err_est = scale * (body.err_est + 2.0 * deviation * tail);
    if !body.converged {
        return Err(Error::Tolerance {
            value: f_eta,
            err_est,
            n_evals: body.n_evals,
        });
    }
    Ok(ForceResult {
        eta,
        f_eta,
        err_est,
        kappa_max: kmax,
        n_evals: body.n_evals + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::log_deriv_bi;
    use crate::greens::{greens_linear_above, greens_linear_below};
    use crate::stress::integrand_above;

    fn cfg(eta: f64) -> PlateConfig {
        PlateConfig::from_eta(eta, 1.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(0.0, 1.0, 999, Stencil::Second).is_err());
        assert!(GridSpec::new(1.0, 1.0, 1000, Stencil::Second).is_err());
        assert!(Stencil::from_order(3).is_err());
        let g = GridSpec::new(1.0, 2.0, 1001, Stencil::Fourth).unwrap();
        assert_eq!(g.node_index(1.5), Some(500));
        assert_eq!(g.node_index(1.5005), None);
        let f = GridSpec::full(&cfg(1.0), 0.5, 0.01, Stencil::Second).unwrap();
        assert!(f.node_index(0.0).is_some());
        assert_eq!(f.x_hi, 1.0);
    }

    #[test]
    fn neville_is_exact_on_polynomials() {
        let xs = [0.4, 0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x + 0.5 * x * x * x).collect();
        assert!((extrapolate_to_zero(&xs, &ys) - 3.0).abs() < 1e-13);
    }

    #[test]
    fn dirichlet_and_unit_jump() {
        let c = cfg(1.0);
        let g = GridSpec::above(&c, 0.7, 0.01, Stencil::Second).unwrap();
        let s = solve_bvp_above(0.7, &c, 1.6, &g).unwrap();
        assert_eq!(s.g[0], 0.0);
        let (j, h) = (s.source, g.h());
        let right = (-3.0 * s.g[j] + 4.0 * s.g[j + 1] - s.g[j + 2]) / (2.0 * h);
        let left = (3.0 * s.g[j] - 4.0 * s.g[j - 1] + s.g[j - 2]) / (2.0 * h);
        assert!((right - left + 1.0).abs() < 1e-4, "{}", right - left);

        let f = GridSpec::full(&c, 0.7, 0.01, Stencil::Fourth).unwrap();
        let s = solve_bvp_full(0.7, &c, -0.3, &f).unwrap();
        assert_eq!(s.g[f.n - 1], 0.0);
    }

    #[test]
    fn full_solution_is_symmetric() {
        let c = cfg(5.0);
        let f = GridSpec::full(&c, 1.0, 0.01, Stencil::Second).unwrap();
        let pts = [-0.8, -0.2, 0.0, 0.3, 0.9];
        let sols: Vec<BvpSolution> = pts.iter().map(|&p| solve_bvp_full(1.0, &c, p, &f).unwrap()).collect();
        for (i, &x) in pts.iter().enumerate() {
            for (j, &xp) in pts.iter().enumerate() {
                let (g1, g2) = (sols[j].at(x).unwrap(), sols[i].at(xp).unwrap());
                assert!((g1 - g2).abs() < 1e-5 * g1.abs().max(1e-3));
            }
        }
    }

    #[test]
    fn matches_closed_forms() {
        let c = cfg(0.5);
        let g = GridSpec::above(&c, 1.0, 0.01, Stencil::Fourth).unwrap();
        let s = solve_bvp_above(1.0, &c, 1.5, &g).unwrap();
        for x in [1.1, 1.5, 2.0, 3.0] {
            let want = greens_linear_above(x, 1.5, 1.0, &c).unwrap();
            assert!(((s.at(x).unwrap() - want) / want).abs() < 1e-5);
        }
        let f = GridSpec::full(&c, 1.0, 0.01, Stencil::Second).unwrap();
        let s = solve_bvp_full(1.0, &c, 0.5, &f).unwrap();
        for x in [-2.0, -0.4, 0.0, 0.5, 0.8] {
            let want = greens_linear_below(x, 0.5, 1.0, &c).unwrap();
            assert!(((s.at(x).unwrap() - want) / want).abs() < 1e-5);
        }
    }

    #[test]
    fn second_order_convergence() {
        let c = cfg(1.0);
        let coarse = GridSpec::new(1.0, 20.0, 1000, Stencil::Second).unwrap();
        let fine = GridSpec { n: 1999, ..coarse };
        let xp = coarse.node(100);
        let err = |g: &GridSpec| {
            let s = solve_bvp_above_single(0.5, &c, xp, g).unwrap();
            [20usize, 100, 300]
                .iter()
                .map(|&i| {
                    let x = coarse.node(i);
                    let want = greens_linear_above(x, xp, 0.5, &c).unwrap();
                    ((s.at(x).unwrap() - want) / want).abs()
                })
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(&coarse), err(&fine));
        assert!(e1 / e2 >= 3.0, "{e1:e} -> {e2:e}");
    }

    #[test]
    fn coarse_grid_is_reported() {
        let c = cfg(5.0);
        let g = GridSpec::new(1.0, 400.0, 1000, Stencil::Second).unwrap();
        let r = solve_bvp_above(3.0, &c, g.node(2), &g);
        assert!(matches!(r, Err(Error::GridTooCoarse { .. })), "{r:?}");
    }

    #[test]
    fn stress_integrands_without_airy_functions() {
        let c = cfg(1.0);
        let up = GridSpec::above(&c, 0.0, 5e-3, Stencil::Fourth).unwrap();
        let down = GridSpec::full(&c, 0.0, 5e-3, Stencil::Fourth).unwrap();
        let v = integrand_from_fd(1.0, &c, Side::Above, &up, 16.0 * up.h()).unwrap();
        assert!((v - integrand_above(1.0, 1.0).unwrap()).abs() < 1e-4);
        let v = integrand_from_fd(0.0, &c, Side::Below, &down, 16.0 * down.h()).unwrap();
        assert!((v + log_deriv_bi(1.0).unwrap()).abs() < 1e-4);
        assert!(matches!(
            integrand_from_fd(0.0, &c, Side::Below, &down, 2.0 * down.h()),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn free_field_faces_agree() {
        let c = cfg(0.0);
        for kappa in [0.5, 2.0] {
            let up = GridSpec::above(&c, kappa, 5e-3, Stencil::Fourth).unwrap();
            let down = GridSpec::full(&c, kappa, 5e-3, Stencil::Fourth).unwrap();
            let u = integrand_from_fd(kappa, &c, Side::Above, &up, 16.0 * up.h()).unwrap();
            let d = integrand_from_fd(kappa, &c, Side::Below, &down, 16.0 * down.h()).unwrap();
            assert!((u - d).abs() < 1e-6, "{u} {d}");
            assert!((u + kappa).abs() < 1e-6);
        }
    }
}
