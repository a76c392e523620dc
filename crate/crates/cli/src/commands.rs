use crate::grid::parse_grid;
use crate::{Command, Format, Method};
use serde_json::{json, Map, Value};
use std::fmt;
use std::path::Path;
use uncontrol::mc::{estimate_cap_measure, estimate_p_eps, estimate_p_eps_b, sweep_with, SweepRow};
use uncontrol::numerics::{sphere_area, Tolerance};
use uncontrol::report::{csv_line, fmt_opt, fmt_real, growth_csv, sweep_csv};
use uncontrol::sampling::InputVector;
use uncontrol::theory::{self, BoundValue, CapSpec};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
const SCHEMA_VERSION: u64 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            // an unwritable output is reported like a bad --out argument
            CliError::Io(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<uncontrol::Error> for CliError {
    fn from(e: uncontrol::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone)]
enum Field {
    Real(f64),
    OptReal(Option<f64>),
    Int(u64),
    OptInt(Option<u64>),
    Text(String),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Real(x) => fmt_real(*x),
            Field::OptReal(x) => fmt_opt(*x),
            Field::Int(i) => i.to_string(),
            Field::OptInt(i) => i.map(|v| v.to_string()).unwrap_or_default(),
            Field::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Real(x) => json!(x),
            Field::OptReal(x) => x.map_or(Value::Null, |v| json!(v)),
            Field::Int(i) => json!(i),
            Field::OptInt(i) => json!(i),
            Field::Text(s) => json!(s),
        }
    }
}

/// One flat output record. CSV gets a header plus one row; JSON gets the
/// same keys plus `schema_version` (and `seed` where a seed was used).
struct Record {
    fields: Vec<(&'static str, Field)>,
    seed: Option<u64>,
}

impl Record {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let header: Vec<String> = self.fields.iter().map(|(k, _)| k.to_string()).collect();
                let row: Vec<String> = self.fields.iter().map(|(_, v)| v.csv()).collect();
                csv_line(&header) + &csv_line(&row)
            }
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
                if let Some(seed) = self.seed {
                    obj.insert("seed".into(), json!(seed));
                }
                for (k, v) in &self.fields {
                    obj.insert((*k).into(), v.json());
                }
                Value::Object(obj).to_string() + "\n"
            }
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| {
            let _ = std::fs::remove_file(path);
            CliError::Io(format!("cannot write {}: {e}", path.display()))
        }),
    }
}

fn tolerance(abs_tol: f64) -> CliResult<Tolerance> {
    Ok(Tolerance::absolute(abs_tol)?)
}

fn bound_record(n: usize, eps: f64, b_norm: Option<f64>, v: BoundValue) -> Record {
    Record {
        fields: vec![
            ("kind", Field::Text(v.kind.label().to_string())),
            ("n", Field::Int(n as u64)),
            ("epsilon", Field::Real(eps)),
            ("b_norm", Field::OptReal(b_norm)),
            ("clamped", Field::Real(v.clamped)),
            ("raw", Field::Real(v.raw)),
        ],
        seed: None,
    }
}

pub fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Estimate {
            n,
            epsilon,
            trials,
            seed,
            b,
            workers,
            format,
        } => {
            let seed = seed.seed;
            let (est, b_norm) = match b {
                Some(components) => {
                    let b = InputVector::new(components)?;
                    let norm = b.norm();
                    (
                        estimate_p_eps_b(n, epsilon, &b, trials, seed, workers)?,
                        Some(norm),
                    )
                }
                None => (estimate_p_eps(n, epsilon, trials, seed, workers)?, None),
            };
            let rec = Record {
                fields: vec![
                    ("n", Field::Int(n as u64)),
                    ("epsilon", Field::Real(epsilon)),
                    ("b_norm", Field::OptReal(b_norm)),
                    ("p_hat", Field::Real(est.p_hat)),
                    ("successes", Field::Int(est.successes)),
                    ("trials", Field::Int(est.trials)),
                    ("std_err", Field::Real(est.std_err)),
                    ("ci_lo", Field::Real(est.ci95_lo)),
                    ("ci_hi", Field::Real(est.ci95_hi)),
                    ("resampled", Field::Int(est.resampled)),
                ],
                seed: Some(seed),
            };
            emit(&rec.render(format), None)
        }
        Command::Exact2 {
            epsilon,
            b_norm,
            tol,
            format,
        } => {
            let v = match b_norm {
                Some(norm) => theory::p_eps_b_exact_n2(epsilon, norm)?,
                None => theory::p_eps_exact_n2(epsilon, &tolerance(tol.tol)?)?,
            };
            emit(&bound_record(2, epsilon, b_norm, v).render(format), None)
        }
        Command::Bound {
            method,
            n,
            epsilon,
            b_norm,
            tol,
            format,
        } => {
            let v = match method {
                Method::PerB => {
                    let norm = b_norm.ok_or_else(|| {
                        CliError::Usage("--method per-b requires --b-norm".into())
                    })?;
                    theory::p_eps_b_bound(epsilon, norm, n)?
                }
                Method::Integral => theory::p_eps_bound_integral(epsilon, n, &tolerance(tol.tol)?)?,
                Method::Poly => theory::p_eps_bound_poly(epsilon, n)?,
            };
            let b_norm = if method == Method::PerB { b_norm } else { None };
            emit(&bound_record(n, epsilon, b_norm, v).render(format), None)
        }
        Command::Caps {
            n,
            height,
            trials,
            seed,
            format,
        } => {
            if n < 2 {
                return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
            }
            let spec = CapSpec::from_height(n, height)?;
            let area = sphere_area(n)?;
            let exact = theory::cap_measure_exact(n, height)?;
            let upper = theory::cap_area_upper(&spec)? / area;
            let lower = theory::cap_area_lower(&spec)? / area;
            let est = trials
                .map(|t| estimate_cap_measure(n, height, t, seed.seed))
                .transpose()?;
            let rec = Record {
                fields: vec![
                    ("n", Field::Int(n as u64)),
                    ("height", Field::Real(height)),
                    ("chord_radius", Field::Real(spec.chord_radius)),
                    ("exact", Field::Real(exact)),
                    ("upper", Field::Real(upper)),
                    ("lower", Field::Real(lower)),
                    ("sphere_area", Field::Real(area)),
                    ("estimate", Field::OptReal(est.map(|e| e.p_hat))),
                    ("std_err", Field::OptReal(est.map(|e| e.std_err))),
                    ("trials", Field::OptInt(est.map(|e| e.trials))),
                ],
                seed: est.map(|_| seed.seed),
            };
            emit(&rec.render(format), None)
        }
        Command::Sweep {
            n_list,
            eps_grid,
            trials,
            seed,
            workers,
            tol,
            out,
            format,
        } => {
            let grid = parse_grid(&eps_grid).map_err(CliError::Usage)?;
            if n_list.is_empty() {
                return Err(CliError::Usage("--n-list must not be empty".into()));
            }
            let rows = sweep_with(
                &n_list,
                &grid,
                trials,
                seed.seed,
                workers,
                &tolerance(tol.tol)?,
            )?;
            let text = match format {
                Format::Csv => sweep_csv(&rows),
                Format::Json => sweep_json(&rows, seed.seed, trials),
            };
            emit(&text, out.as_deref())
        }
        Command::Growth { n_max, out, format } => {
            if n_max < 2 {
                return Err(CliError::Usage(format!(
                    "--n-max must be at least 2, got {n_max}"
                )));
            }
            let values = (2..=n_max)
                .map(|n| Ok((n, theory::growth_rate_bound(n)?)))
                .collect::<CliResult<Vec<_>>>()?;
            let text = match format {
                Format::Csv => growth_csv(&values),
                Format::Json => {
                    let rows: Vec<Value> = values
                        .iter()
                        .map(|(n, g)| json!({ "n": n, "growth_bound": g }))
                        .collect();
                    json!({ "schema_version": SCHEMA_VERSION, "rows": rows }).to_string() + "\n"
                }
            };
            emit(&text, out.as_deref())
        }
    }
}

fn sweep_json(rows: &[SweepRow], seed: u64, trials: u64) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "epsilon": r.epsilon,
                "estimate": r.estimate,
                "std_err": r.std_err,
                "ci_lo": r.ci_lo,
                "ci_hi": r.ci_hi,
                "bound_poly": r.bound_poly,
                "bound_integral": r.bound_integral,
                "bound_per_b": r.bound_per_b,
                "exact_n2": r.exact_n2,
                "trials": r.trials,
                "raw_bound_poly": r.raw_bound_poly,
                "raw_bound_integral": r.raw_bound_integral,
                "raw_bound_per_b": r.raw_bound_per_b,
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "trials": trials,
        "rows": rows,
    })
    .to_string()
        + "\n"
}
