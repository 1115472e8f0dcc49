mod cache;
mod curve;
mod plot;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use casimir_plate::checks::{all_passed, run_suite, Status, Suite};
use casimir_plate::quadrature::{KappaMaxPolicy, QuadratureSpec};
use casimir_plate::stress::{force_classic, force_exact, force_perturbative};
use casimir_plate::Execution;

use crate::curve::{Format, Spacing};
use crate::plot::Scale;

#[derive(Parser, Debug)]
#[command(
    name = "casimir-plate",
    version,
    about = "Casimir force on a Dirichlet plate in a linear potential"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Relative quadrature tolerance.
    #[arg(long, global = true, env = "CASIMIR_REL_TOL")]
    rel_tol: Option<f64>,
    /// Fixed dimensionless momentum cutoff (adaptive when unset).
    #[arg(long, global = true, env = "CASIMIR_KAPPA_MAX")]
    kappa_max: Option<f64>,
    /// Worker threads for parallel sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// f(η) for one configuration.
    Exact {
        #[arg(long, conflicts_with_all = ["a", "b"], required_unless_present_all = ["a", "b"])]
        eta: Option<f64>,
        /// Plate height.
        #[arg(long, requires = "b")]
        a: Option<f64>,
        /// Potential slope.
        #[arg(long, requires = "a")]
        b: Option<f64>,
    },
    /// Sweep f(η) over a grid and write it to a file.
    Curve {
        #[arg(long)]
        eta_min: f64,
        #[arg(long)]
        eta_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Log)]
        spacing: Spacing,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// JSON results cache keyed by η and quadrature settings.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Evaluate rows one after another.
        #[arg(long)]
        sequential: bool,
    },
    /// Two-plate benchmark against −π/(24a²).
    Classic {
        #[arg(long)]
        a: f64,
    },
    /// First-order-in-b force with an infrared cutoff, at k_min and k_min/2.
    Perturb {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        k_min: f64,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Render a curve CSV as an SVG line chart.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = Scale::Log)]
        x_scale: Scale,
        #[arg(long, value_enum, default_value_t = Scale::Lin)]
        y_scale: Scale,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Airy,
    Greens,
    Stress,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Airy => Suite::Airy,
            SuiteArg::Greens => Suite::Greens,
            SuiteArg::Stress => Suite::Stress,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or input files: exit 2.
    Usage(anyhow::Error),
    /// Tolerance or verification failure: exit 1.
    Numerical(anyhow::Error),
}

impl From<casimir_plate::Error> for Failure {
    fn from(e: casimir_plate::Error) -> Failure {
        match e {
            casimir_plate::Error::Domain(_) => Failure::Usage(e.into()),
            _ => Failure::Numerical(e.into()),
        }
    }
}

pub type Outcome = Result<(), Failure>;

pub fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow::anyhow!("{msg}"))
}

fn quadrature_spec(g: &Global) -> Result<QuadratureSpec, Failure> {
    let mut spec = QuadratureSpec::default();
    if let Some(t) = g.rel_tol {
        spec.rel_tol = t;
    }
    if let Some(k) = g.kappa_max {
        spec.kappa_max_policy = KappaMaxPolicy::Fixed(k);
    }
    spec.validate().map_err(usage)?;
    Ok(spec)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn non_negative(name: &str, v: f64) -> Result<f64, Failure> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be finite and >= 0, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be finite and > 0, got {v}")))
    }
}

fn cmd_exact(g: &Global, eta: Option<f64>, a: Option<f64>, b: Option<f64>) -> Outcome {
    let spec = quadrature_spec(g)?;
    let (eta, a) = match (eta, a, b) {
        (Some(eta), None, None) => (non_negative("eta", eta)?, None),
        (None, Some(a), Some(b)) => {
            let (a, b) = (non_negative("a", a)?, non_negative("b", b)?);
            (b * a * a * a, Some(a))
        }
        _ => return Err(usage("give exactly one of --eta or the pair --a/--b")),
    };
    let r = force_exact(eta, &spec)?;
    if g.json {
        print_json(&r);
        return Ok(());
    }
    println!("eta       = {}", r.eta);
    println!("f(eta)    = {}", r.f_eta);
    println!("err_est   = {:e}", r.err_est);
    println!("kappa_max = {}", r.kappa_max);
    println!("n_evals   = {}", r.n_evals);
    match a {
        Some(a) if a > 0.0 => println!("T^xx      = {}  (hbar = c = 1, units of 1/length^2)", r.f_eta / (a * a)),
        Some(_) => println!("T^xx      = undefined at a = 0"),
        None => {}
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassicReport {
    a: f64,
    numeric: f64,
    analytic: f64,
    rel_diff: f64,
}

const CLASSIC_TOLERANCE: f64 = 1e-8;

fn cmd_classic(g: &Global, a: f64) -> Outcome {
    let spec = quadrature_spec(g)?;
    let a = positive("a", a)?;
    let numeric = force_classic(a, &spec)?;
    let analytic = -PI / (24.0 * a * a);
    let rep = ClassicReport {
        a,
        numeric,
        analytic,
        rel_diff: ((numeric - analytic) / analytic).abs(),
    };
    if g.json {
        print_json(&rep);
    } else {
        println!("numeric  = {}", rep.numeric);
        println!("analytic = {}  (-pi/(24 a^2))", rep.analytic);
        println!("rel diff = {:e}", rep.rel_diff);
    }
    if rep.rel_diff > CLASSIC_TOLERANCE {
        return Err(Failure::Numerical(anyhow::anyhow!(
            "relative difference {:e} exceeds {CLASSIC_TOLERANCE:e}",
            rep.rel_diff
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct PerturbReport {
    a: f64,
    b: f64,
    k_min: f64,
    force_at_k_min: f64,
    force_at_half_k_min: f64,
    difference: f64,
    leading_log: f64,
}

fn cmd_perturb(g: &Global, a: f64, b: f64, k_min: f64) -> Outcome {
    let spec = quadrature_spec(g)?;
    let (a, b, k_min) = (positive("a", a)?, non_negative("b", b)?, positive("k-min", k_min)?);
    let f1 = force_perturbative(a, b, k_min, &spec)?;
    let f2 = force_perturbative(a, b, k_min / 2.0, &spec)?;
    let rep = PerturbReport {
        a,
        b,
        k_min,
        force_at_k_min: f1,
        force_at_half_k_min: f2,
        difference: f2 - f1,
        leading_log: a * b * 2f64.ln() / (2.0 * PI),
    };
    if g.json {
        print_json(&rep);
    } else {
        println!("{:>14}  {:>22}", "cutoff", "force");
        println!("{:>14e}  {:>22}", k_min, f1);
        println!("{:>14e}  {:>22}", k_min / 2.0, f2);
        println!("difference = {}  (ab ln2 / 2pi = {})", rep.difference, rep.leading_log);
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    suite: Suite,
    passed: bool,
    checks: Vec<casimir_plate::checks::Check>,
}

fn cmd_verify(g: &Global, suite: Suite, exec: Execution) -> Outcome {
    let checks = run_suite(suite, exec);
    let passed = all_passed(&checks);
    if g.json {
        print_json(&VerifyReport {
            suite,
            passed,
            checks: checks.clone(),
        });
    } else {
        for c in &checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            println!(
                "{tag} {:<32} measured {:<12.3e} tol {:<8.1e} {}",
                c.name, c.measured, c.tolerance, c.detail
            );
        }
        let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
        println!("{} checks, {failed} failed", checks.len());
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Numerical(anyhow::anyhow!("verification failed")))
    }
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match cli.command {
        Command::Exact { eta, a, b } => cmd_exact(g, eta, a, b),
        Command::Curve {
            eta_min,
            eta_max,
            points,
            spacing,
            out,
            format,
            cache,
            sequential,
        } => {
            let spec = quadrature_spec(g)?;
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let req = curve::CurveRequest {
                eta_min,
                eta_max,
                points,
                spacing,
            };
            curve::run(&req, &spec, exec, &out, format, cache.as_deref(), g.json)
        }
        Command::Classic { a } => cmd_classic(g, a),
        Command::Perturb { a, b, k_min } => cmd_perturb(g, a, b, k_min),
        Command::Verify { suite } => cmd_verify(g, suite.into(), Execution::Parallel),
        Command::Plot {
            input,
            output,
            x_scale,
            y_scale,
        } => plot::run(&input, &output, x_scale, y_scale),
    }
}

#[cfg(feature = "parallel")]
fn with_threads(threads: usize, f: impl FnOnce() -> Outcome + Send) -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Usage(e.into()))?;
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_threads(_threads: usize, f: impl FnOnce() -> Outcome + Send) -> Outcome {
    f()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_threads(cli.global.threads, || run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
