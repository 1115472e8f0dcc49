//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode, Stdio};
use std::time::Instant;

use casimir_plate::airy::{airy_eval, airy_via_ode_oracle};
use casimir_plate::checks::{curve_grid, cusp_slopes, greens_oracle_gap_above, greens_oracle_gap_below};
use casimir_plate::oracle::{force_from_fd, FdPipeline};
use casimir_plate::quadrature::QuadratureSpec;
use casimir_plate::stress::{
    force_exact, force_perturbative, integrand_above, integrand_below, integrand_net, perturbative_integrands,
};
use casimir_plate::Execution;

struct Verdict {
    ok: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Verdict);

fn verdict(ok: bool, detail: String) -> Verdict {
    Verdict { ok, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_casimir-plate"));
    c.env_remove("CASIMIR_REL_TOL").env_remove("CASIMIR_KAPPA_MAX");
    c
}

fn classic_benchmark() -> Verdict {
    let t = Instant::now();
    let o = bin().args(["classic", "--a", "1", "--json"]).output().unwrap();
    let secs = t.elapsed().as_secs_f64();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let numeric = v["numeric"].as_f64().unwrap();
    let r = rel(numeric, -PI / 24.0);
    verdict(
        o.status.success() && r < 1e-8 && secs < 1.0,
        format!("classic --a 1 = {numeric}, rel err {r:.2e} (< 1e-8), {secs:.3} s (< 1 s)"),
    )
}

fn cancellation_at_zero() -> Verdict {
    let algebraic = [0.1, 1.0, 5.0, 20.0]
        .iter()
        .all(|&k| integrand_net(k, 0.0).unwrap().net == 0.0);
    let gap = [0.1f64, 1.0, 5.0, 20.0]
        .iter()
        .map(|&k| (integrand_below(k, 1e-12).unwrap() - integrand_above(k, 1e-12).unwrap()).abs())
        .fold(0.0, f64::max);
    let f0 = force_exact(0.0, &QuadratureSpec::default()).unwrap().f_eta;
    verdict(
        algebraic && gap < 1e-9 && f0 == 0.0,
        format!("net(k, 0) == 0: {algebraic}; max |below - above| at eta=1e-12 = {gap:.3e} (< 1e-9); f(0) = {f0}"),
    )
}

fn greens_oracle() -> Verdict {
    let t = Instant::now();
    let up = greens_oracle_gap_above(Execution::Parallel);
    let down = greens_oracle_gap_below(Execution::Parallel);
    let secs = t.elapsed().as_secs_f64();
    match (up, down) {
        (Ok(u), Ok(d)) => verdict(
            u < 1e-5 && d < 1e-5 && secs < 30.0,
            format!("max rel gap above {u:.2e}, below {d:.2e} (< 1e-5) over 3 kappa x 2 eta x >=6 points, {secs:.1} s (< 30 s)"),
        ),
        (u, d) => verdict(false, format!("oracle failed: {u:?} / {d:?}")),
    }
}

fn force_oracle() -> Verdict {
    let exact = force_exact(1.0, &QuadratureSpec::default()).unwrap();
    match force_from_fd(1.0, &FdPipeline::default(), Execution::Parallel) {
        Ok(fd) => {
            let r = rel(fd.f_eta, exact.f_eta);
            verdict(
                r < 1e-4,
                format!(
                    "f(1) = {} vs FD pipeline {}, rel gap {r:.2e} (< 1e-4)",
                    exact.f_eta, fd.f_eta
                ),
            )
        }
        Err(e) => verdict(false, format!("FD pipeline failed: {e}")),
    }
}

fn figure_shape() -> Verdict {
    let t = Instant::now();
    let spec = QuadratureSpec::default();
    let etas = curve_grid();
    let fs: Vec<f64> = Execution::Parallel.map(&etas, |&e| force_exact(e, &spec).unwrap().f_eta);
    let positive = fs.iter().all(|&f| f > 0.0);
    let g: Vec<f64> = fs.iter().zip(&etas).map(|(f, e)| f / e.powf(2.0 / 3.0)).collect();
    let first_drop = g.windows(2).position(|w| w[1] < w[0]);
    let slopes = cusp_slopes(&spec, Execution::Parallel).unwrap();
    let (lo, hi) = slopes
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.1), h.max(p.1)));
    let cusp = lo > 0.0 && hi < 1.0;
    let secs = t.elapsed().as_secs_f64();
    let mono = match first_drop {
        None => "eta^(-2/3) f nondecreasing".to_string(),
        Some(i) => format!(
            "eta^(-2/3) f decreases from eta = {:.4} (g = {:.5}) to {:.4} (g = {:.5}), ends at g({}) = {:.5}",
            etas[i],
            g[i],
            etas[i + 1],
            g[i + 1],
            etas[24],
            g[24]
        ),
    };
    verdict(
        positive && first_drop.is_none() && cusp && secs < 60.0,
        format!(
            "all 25 f > 0: {positive}; {mono}; cusp slope p in [{lo:.3}, {hi:.3}] (must be in (0, 1)); {secs:.1} s"
        ),
    )
}

fn expansions() -> Verdict {
    let k = 10.0;
    let up = (integrand_above(k, 1.0).unwrap() - (-k - 0.5 / k - 0.25 / (k * k))).abs();
    let down = (integrand_below(k, 1.0).unwrap() - (-k - 0.5 / k + 0.25 / (k * k))).abs();
    verdict(
        up < 1e-3 && down < 1e-3,
        format!("|above - 3-term| = {up:.2e}, |below - 3-term| = {down:.2e} (< 1e-3) at kappa=10, eta=1"),
    )
}

fn infrared() -> Verdict {
    let spec = QuadratureSpec::default();
    let target = 2f64.ln() / (2.0 * PI);
    let worst = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&k| {
            let d =
                force_perturbative(1.0, 1.0, k / 2.0, &spec).unwrap() - force_perturbative(1.0, 1.0, k, &spec).unwrap();
            rel(d, target)
        })
        .fold(0.0, f64::max);
    let identity = [(0.01, 1.0, 1.0), (0.3, 1.0, 1.0), (2.0, 1.0, 1.0), (10.0, 2.0, 0.1)]
        .iter()
        .map(|&(k, a, b)| {
            let s = perturbative_integrands(k, a, b).unwrap();
            ((s.below - s.above) - s.net).abs() / s.below.abs().max(s.above.abs())
        })
        .fold(0.0, f64::max);
    verdict(
        worst < 0.05 && identity < 1e-12,
        format!("halving k_min shifts f by ln2/2pi within {:.2}% (< 5%); integrand identity residual {identity:.1e} (< 1e-12)", 100.0 * worst),
    )
}

fn special_functions() -> Verdict {
    let wr = std::iter::once(0.0)
        .chain((0..=400).map(|i| 10f64.powf(-4.0 + 8.0 * i as f64 / 400.0)))
        .map(|z| (airy_eval(z).unwrap().wronskian() - 1.0 / PI).abs())
        .fold(0.0, f64::max);
    let oracle = (0..=200)
        .map(|i| {
            let z = 10.0 * i as f64 / 200.0;
            let (v, o) = (airy_eval(z).unwrap(), airy_via_ode_oracle(z).unwrap());
            [
                rel(v.ai_s, o.ai_s),
                rel(v.aip_s, o.aip_s),
                rel(v.bi_s, o.bi_s),
                rel(v.bip_s, o.bip_s),
            ]
            .into_iter()
            .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    verdict(
        wr < 1e-10 && oracle < 1e-10,
        format!("Wronskian err {wr:.1e} on [0, 1e4]; ODE oracle rel gap {oracle:.1e} on [0, 10] (< 1e-10)"),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n);
    let cache = p("cache.json");
    let runs: [(&str, Vec<&str>); 5] = [
        ("t1.csv", vec!["--threads", "1"]),
        ("t8.csv", vec!["--threads", "8"]),
        ("seq.csv", vec!["--sequential"]),
        ("cold.csv", vec!["--cache", cache.to_str().unwrap()]),
        ("warm.csv", vec!["--cache", cache.to_str().unwrap()]),
    ];
    let mut files = Vec::new();
    for (name, extra) in &runs {
        let out = p(name);
        let st = bin()
            .args([
                "curve",
                "--eta-min",
                "0.01",
                "--eta-max",
                "100",
                "--points",
                "25",
                "--spacing",
                "log",
                "--out",
            ])
            .arg(&out)
            .args(extra)
            .stdout(Stdio::null())
            .status()
            .unwrap();
        if !st.success() {
            return verdict(false, format!("curve run {name} failed"));
        }
        files.push(fs::read(&out).unwrap());
    }
    let identical = files.windows(2).all(|w| w[0] == w[1]);
    let cached: serde_json::Map<String, serde_json::Value> =
        serde_json::from_slice(&fs::read(&cache).unwrap()).unwrap();
    let spec = QuadratureSpec::default();
    let bitwise = cached.values().all(|v| {
        let r: casimir_plate::stress::ForceResult = serde_json::from_value(v.clone()).unwrap();
        let fresh = force_exact(r.eta, &spec).unwrap();
        r.f_eta.to_bits() == fresh.f_eta.to_bits() && r.err_est.to_bits() == fresh.err_est.to_bits() && r == fresh
    });
    verdict(
        identical && bitwise && cached.len() == 25,
        format!("5 curve runs (1/8 threads, sequential, cold/warm cache) byte-identical: {identical}; {} cache entries bit-identical to recomputation: {bitwise}", cached.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("classic two-plate benchmark", classic_benchmark),
        ("exact cancellation at eta = 0", cancellation_at_zero),
        ("Green's functions vs FD oracle", greens_oracle),
        ("force vs FD pipeline", force_oracle),
        ("force curve shape", figure_shape),
        ("large-kappa expansions", expansions),
        ("perturbative infrared divergence", infrared),
        ("special-function conformance", special_functions),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        failed += usize::from(!v.ok);
        println!(
            "criterion {} [{}] {name}: {}",
            i + 1,
            if v.ok { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
