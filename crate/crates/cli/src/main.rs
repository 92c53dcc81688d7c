//! `wigx` command-line front end.
//!
//! Operators travel as JSON documents. Results that are not operators go to stdout as JSON.
//! Exit status is 2 for malformed input and 1 when a computation fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wigx::cli_io::{
    log_grid, linear_grid, parse_complex, parse_spec, read_operator, reproduce_fig5, reproduce_fig7, trajectory_csv,
    default_coordinates, OperatorDocument,
};
use wigx::extremes::{find_t0_detailed, generate_extreme_wps, max_fock_fidelity, vertigo_trajectory, GaussianStep, TChoice};
use wigx::positivity::{certify_wigner, classify, CertifyConfig};
use wigx::state_zoo::{binomial_state, bs_state_fock, motzkin_quasistate};
use wigx::{FockOperator, WigxError, C64};

#[derive(Parser)]
#[command(name = "wigx", version, about = "Wigner-positive states of a single bosonic mode")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify or refute positivity of the Wigner function of an operator.
    Certify {
        input: PathBuf,
        /// Numeric search grid as RADIIxANGLES.
        #[arg(long)]
        grid: Option<String>,
        /// Absolute tolerance on the polynomial part.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Beam-splitter state built from the Fock states |m> and |n>.
    BsState {
        m: usize,
        n: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Binomial state sigma(n, 0).
    Binomial {
        n: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// The Motzkin quasi-state.
    Motzkin {
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Trace-normalized Vertigo map.
    Vertigo {
        input: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Parameter at which the Vertigo trajectory enters the state cone.
    FindT0 {
        input: PathBuf,
        #[arg(long, default_value_t = 1e8)]
        t_max: f64,
        /// PSD tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Vertigo trajectory with per-point diagnostics, written as CSV.
    Trajectory {
        input: PathBuf,
        #[arg(long)]
        t_start: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        log_scale: bool,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Generate an extreme Wigner-positive state from an extreme radial spec.
    GenExtreme {
        /// Spec of the form "k:K;lambdas:L1,L2".
        #[arg(long)]
        mu: String,
        /// "auto" or a Vertigo parameter.
        #[arg(long, default_value = "auto")]
        t: String,
        /// Displacement as RE,IM.
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Largest Fock-state fidelity reachable by a Wigner-positive state.
    FidelityMax {
        n: usize,
        /// Also write the optimal state here.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Regenerate a figure dataset as CSV files.
    Reproduce {
        figure: Figure,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig5,
    Fig7,
}

/// Failures sorted by exit status.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<WigxError> for Failure {
    fn from(e: WigxError) -> Self {
        match e {
            WigxError::Parse(_)
            | WigxError::InvalidInput(_)
            | WigxError::InvalidSpec(_)
            | WigxError::InvalidOrder(_)
            | WigxError::NonHermitian { .. }
            | WigxError::DimensionMismatch { .. }
            | WigxError::IndexOutOfRange { .. }
            | WigxError::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn emit_operator(a: &FockOperator, meta: BTreeMap<String, Value>, output: Option<&Path>) -> Outcome {
    let text = OperatorDocument::from_operator(a, meta).to_json()?;
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<FockOperator, Failure> {
    read_operator(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn meta(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn parse_grid(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("grid must look like 400x256, got {s:?}"));
    let (r, a) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    if r == 0 || a == 0 {
        return Err(bad());
    }
    Ok((r, a))
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Certify { input, grid, tol } => {
            let a = load(&input)?;
            let mut cfg = CertifyConfig::default();
            if let Some(g) = grid {
                (cfg.radii, cfg.angles) = parse_grid(&g)?;
            }
            if let Some(t) = tol {
                if !(t > 0.0) {
                    return Err(Failure::Usage(format!("tolerance must be positive, got {t}")));
                }
                cfg.tol = t;
            }
            let cert = certify_wigner(&a, &cfg);
            let class = classify(&a, &cfg);
            let mut out = serde_json::to_value(&cert).map_err(|e| Failure::Compute(e.to_string()))?;
            out["is_state"] = json!(class.is_state);
            out["phase_invariant"] = json!(class.phase_invariant);
            out["in_a_sigma"] = json!(class.in_a_sigma);
            out["support_degree"] = json!(class.support_degree);
            out["trace"] = json!(class.trace);
            out["min_eigenvalue"] = json!(class.min_eigenvalue);
            emit_json(&out);
            Ok(())
        }
        Command::BsState { m, n, output } => {
            let a = bs_state_fock(m, n);
            emit_operator(&a, meta(&[("state", json!(format!("sigma({m},{n})")))]), output.as_deref())
        }
        Command::Binomial { n, output } => {
            emit_operator(&binomial_state(n), meta(&[("state", json!(format!("binomial({n})")))]), output.as_deref())
        }
        Command::Motzkin { output } => emit_operator(&motzkin_quasistate(), meta(&[("state", json!("motzkin"))]), output.as_deref()),
        Command::Vertigo { input, t, output } => {
            if !(t > 0.0) {
                return Err(Failure::Usage(format!("t must be positive, got {t}")));
            }
            let a = load(&input)?;
            let v = wigx::channels::vertigo_norm(&a, t)?;
            emit_operator(&v, meta(&[("vertigo_t", json!(t))]), output.as_deref())
        }
        Command::FindT0 { input, t_max, tol } => {
            if !(t_max > 0.0) || !(tol >= 0.0) {
                return Err(Failure::Usage("t-max must be positive and tol non-negative".into()));
            }
            let a = load(&input)?;
            let s = find_t0_detailed(&a, t_max, tol)?;
            emit_json(&json!({ "t0": s.t0, "multi_crossing": s.multi_crossing, "t_max": t_max, "tol": tol }));
            Ok(())
        }
        Command::Trajectory { input, t_start, t_end, steps, log_scale, output } => {
            if steps == 0 || !(t_start > 0.0) || !(t_end > 0.0) {
                return Err(Failure::Usage("need steps >= 1 and positive t-start, t-end".into()));
            }
            let a = load(&input)?;
            let grid = if log_scale { log_grid(t_start, t_end, steps) } else { linear_grid(t_start, t_end, steps) };
            let rec = vertigo_trajectory(&a, &grid, &CertifyConfig::default())?;
            let text = trajectory_csv(&rec, &default_coordinates)?;
            std::fs::write(&output, text).map_err(|e| Failure::Usage(format!("{}: {e}", output.display())))?;
            emit_json(&json!({ "rows": rec.t_values.len(), "entered_d_at": rec.entered_d_at, "output": output }));
            Ok(())
        }
        Command::GenExtreme { mu, t, beta, theta, output } => {
            let spec = parse_spec(&mu)?;
            let choice = if t.trim().eq_ignore_ascii_case("auto") {
                TChoice::Auto
            } else {
                let v: f64 = t.trim().parse().map_err(|_| Failure::Usage(format!("t must be auto or a number, got {t:?}")))?;
                if !(v > 0.0) {
                    return Err(Failure::Usage(format!("t must be positive, got {v}")));
                }
                TChoice::Fixed(v)
            };
            let beta = match beta {
                Some(b) => parse_complex(&b)?,
                None => C64::new(0.0, 0.0),
            };
            let gaussian = theta.map(|th| GaussianStep { theta: th, alpha: C64::new(0.0, 0.0), xi: C64::new(0.0, 0.0) });
            let g = generate_extreme_wps(&spec, choice, beta, gaussian)?;
            let log = serde_json::to_value(&g.log).map_err(|e| Failure::Compute(e.to_string()))?;
            let m = meta(&[("spec", json!(mu)), ("t_used", json!(g.t_used)), ("provenance", log)]);
            emit_operator(&g.operator, m, Some(&output))?;
            emit_json(&json!({ "t_used": g.t_used, "dim": g.operator.dim(), "output": output }));
            Ok(())
        }
        Command::FidelityMax { n, output } => {
            if n == 0 {
                return Err(Failure::Usage("n must be at least 1".into()));
            }
            let (value, state) = max_fock_fidelity(n);
            let (m, k) = (n - n / 2, n / 2);
            if let Some(p) = &output {
                emit_operator(&state, meta(&[("state", json!(format!("sigma({m},{k})")))]), Some(p))?;
            }
            emit_json(&json!({ "n": n, "max_fidelity": value, "state": format!("sigma({m},{k})") }));
            Ok(())
        }
        Command::Reproduce { figure, output } => {
            let cfg = CertifyConfig::default();
            let files = match figure {
                Figure::Fig5 => reproduce_fig5(&output, &cfg)?,
                Figure::Fig7 => reproduce_fig7(&output, &cfg)?,
            };
            emit_json(&json!({ "directory": output, "files": files }));
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("WIGX_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("WIGX_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Compute(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
