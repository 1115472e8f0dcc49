use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use casimir_plate::quadrature::QuadratureSpec;
use casimir_plate::stress::{force_exact, ForceResult};
use casimir_plate::Execution;

use crate::cache::{write_atomic, Cache};
use crate::{usage, Failure, Outcome};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Lin,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// One line of a curve file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub eta: f64,
    pub f_eta: f64,
    pub err_est: f64,
    pub kappa_max: f64,
    pub n_evals: usize,
}

impl From<ForceResult> for CurveRow {
    fn from(r: ForceResult) -> Self {
        CurveRow {
            eta: r.eta,
            f_eta: r.f_eta,
            err_est: r.err_est,
            kappa_max: r.kappa_max,
            n_evals: r.n_evals,
        }
    }
}

pub const CSV_HEADER: [&str; 5] = ["eta", "f_eta", "err_est", "kappa_max", "n_evals"];

pub struct CurveRequest {
    pub eta_min: f64,
    pub eta_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl CurveRequest {
    pub fn grid(&self) -> Result<Vec<f64>, Failure> {
        let (lo, hi, n) = (self.eta_min, self.eta_max, self.points);
        if !(lo >= 0.0 && lo < hi && hi.is_finite()) {
            return Err(usage(format!("need 0 <= eta-min < eta-max, got {lo} and {hi}")));
        }
        if n < 2 {
            return Err(usage(format!("--points must be >= 2, got {n}")));
        }
        if self.spacing == Spacing::Log && lo <= 0.0 {
            return Err(usage("log spacing needs eta-min > 0"));
        }
        let last = (n - 1) as f64;
        let mut etas: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Log => lo * (hi / lo).powf(t),
                    Spacing::Lin => lo + (hi - lo) * t,
                }
            })
            .collect();
        etas[0] = lo;
        etas[n - 1] = hi;
        if etas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(usage("grid points are not strictly increasing; use fewer points"));
        }
        Ok(etas)
    }
}

pub fn to_csv(rows: &[CurveRow]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(vec![]);
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            format_float(r.eta),
            format_float(r.f_eta),
            format_float(r.err_est),
            format_float(r.kappa_max),
            r.n_evals.to_string(),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Shortest decimal that parses back to the same bits.
pub fn format_float(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

pub fn read_csv(path: &Path) -> Result<Vec<CurveRow>, Failure> {
    let mut r = csv::ReaderBuilder::new()
        .from_path(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let header = r.headers().map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(usage(format!(
            "{}: header must be {}",
            path.display(),
            CSV_HEADER.join(",")
        )));
    }
    let rows = r
        .deserialize()
        .collect::<Result<Vec<CurveRow>, _>>()
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if rows.is_empty() {
        return Err(usage(format!("{}: no rows", path.display())));
    }
    if rows.iter().any(|r| !(r.eta.is_finite() && r.f_eta.is_finite())) {
        return Err(usage(format!("{}: non-finite values", path.display())));
    }
    if rows.windows(2).any(|w| w[0].eta >= w[1].eta) {
        return Err(usage(format!("{}: eta must be strictly increasing", path.display())));
    }
    Ok(rows)
}

pub fn run(
    req: &CurveRequest,
    spec: &QuadratureSpec,
    exec: Execution,
    out: &Path,
    format: Format,
    cache_path: Option<&Path>,
    json: bool,
) -> Outcome {
    let etas = req.grid()?;
    let mut cache = cache_path.map(|p| Cache::open(p, spec)).transpose()?;

    let results = exec.map(&etas, |&eta| match cache.as_ref().and_then(|c| c.get(eta)) {
        Some(hit) => Ok((hit, true)),
        None => force_exact(eta, spec).map(|r| (r, false)),
    });
    let mut rows = Vec::with_capacity(results.len());
    let mut hits = 0;
    for (eta, res) in etas.iter().zip(results) {
        let (r, hit) = res.map_err(|e| Failure::from(e).context(format!("eta = {eta}")))?;
        hits += usize::from(hit);
        if let (Some(c), false) = (cache.as_mut(), hit) {
            c.insert(r);
        }
        rows.push(CurveRow::from(r));
    }

    let bytes = match format {
        Format::Csv => to_csv(&rows),
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(&rows).expect("rows serialize");
            b.push(b'\n');
            b
        }
    };
    write_atomic(out, &bytes).map_err(Failure::Numerical)?;
    if let Some(c) = &cache {
        c.save()?;
    }
    if json {
        println!(
            "{}",
            serde_json::json!({ "out": out.display().to_string(), "rows": rows.len(), "cache_hits": hits })
        );
    } else {
        println!("wrote {} rows to {} ({hits} from cache)", rows.len(), out.display());
    }
    Ok(())
}

impl Failure {
    fn context(self, msg: String) -> Failure {
        match self {
            Failure::Usage(e) => Failure::Usage(e.context(msg)),
            Failure::Numerical(e) => Failure::Numerical(e.context(msg)),
        }
    }
}
