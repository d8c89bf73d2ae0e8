use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use calogero::dunkl::{run_all, DunklContext, Suite, SuiteReport};
use calogero::exactalg::Rational;
use calogero::laxdyn::{integrate, PhasePoint, TRACKED_TRACES};
use calogero::symbolcalc::{run_symbol_suite, SymbolSuiteReport};
use calogero::transport::{
    build_local_system_with, max_abs_diff, random_chamber_point, transport_dyson, transport_ode,
    verify_flatness, ChamberPath, FlatnessReport, Momentum, TransportReport,
};
use calogero::Error;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

mod config;

use config::*;

#[derive(Parser, Debug)]
#[command(
    name = "calogero",
    version,
    about = "Dunkl identity suites, transport and Calogero dynamics"
)]
struct Cli {
    /// Worker threads for the parallel suites
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,

    /// Write the JSON report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the exact operator identities on a monomial spanning set
    Verify(VerifyArgs),
    /// Parallel transport of the vectorized local system along a path
    Transport(TransportArgs),
    /// Integrate the classical Calogero flow and track the Lax traces
    Simulate(SimulateArgs),
    /// Check exchange realizations and the symbol calculus
    Symbols(SymbolsArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    /// Spanning-set degree [default: 6, or 4 when N ≥ 4]
    #[arg(long)]
    deg: Option<u32>,
    /// all, zerocurv, intertwining, sumsq, permrel or restriction
    #[arg(long, default_value = "all")]
    suite: String,
    /// `formal` or an exact rational
    #[arg(long, default_value = "formal", value_parser = Coupling::parse, allow_hyphen_values = true)]
    coupling: Coupling,
}

#[derive(Args, Debug)]
struct TransportArgs {
    /// JSON file {N, margin, waypoints}
    #[arg(long)]
    path: PathBuf,
    /// Comma-separated rational momenta
    #[arg(long, value_parser = parse_rational_arg, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    momenta: Vec<Rational>,
    #[arg(long, default_value = "1", value_parser = parse_rational_arg, allow_hyphen_values = true)]
    coupling: Rational,
    /// Exchange weight in front of the pole terms [default: the coupling]
    #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    prefactor: Option<Rational>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Overrides the margin stored in the path file
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Also sum the Dyson series to order M with S Simpson steps per segment
    #[arg(long, num_args = 2, value_names = ["M", "S"])]
    compare_dyson: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_HOLONOMY_TOL)]
    holonomy_tol: f64,
    #[arg(long, default_value_t = DEFAULT_DYSON_TOL)]
    dyson_tol: f64,
    /// Exact flatness check at this many random chamber points
    #[arg(long, default_value_t = 0)]
    flatness_points: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    x: Vec<f64>,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    p: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    g2: f64,
    #[arg(long, default_value_t = 0.0)]
    omega: f64,
    #[arg(long = "T", default_value_t = 10.0)]
    duration: f64,
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    /// Keep every k-th step in the CSV
    #[arg(long, default_value_t = 100)]
    sample_every: usize,
    /// Trajectory CSV (t, x, p, H, I1..I4)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Largest accepted relative drift of a conserved quantity
    #[arg(long, default_value_t = DEFAULT_DRIFT_TOL)]
    drift_tol: f64,
}

#[derive(Args, Debug)]
struct SymbolsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    deg: Option<u32>,
}

type Outcome = Result<(String, bool), Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(exit::USAGE);
        }
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    let outcome = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Transport(a) => transport(a),
        Command::Simulate(a) => simulate(a),
        Command::Symbols(a) => symbols(a),
    };
    match outcome {
        Ok((json, passed)) => {
            if let Err(e) = emit(cli.output.as_ref(), &json) {
                eprintln!("error: {e}");
                return ExitCode::from(exit::USAGE);
            }
            ExitCode::from(if passed { exit::OK } else { exit::FAILED })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(target: Option<&PathBuf>, json: &str) -> std::io::Result<()> {
    match target {
        Some(p) => std::fs::write(p, format!("{json}\n")),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{json}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

fn render<C: Serialize, B: Serialize>(
    command: &'static str,
    config: C,
    body: B,
    passed: bool,
) -> Outcome {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        config,
        body,
        passed,
    };
    let json = serde_json::to_string_pretty(&env).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((json, passed))
}

#[derive(Serialize)]
struct VerifyConfig {
    #[serde(rename = "N")]
    n: usize,
    degree: u32,
    suite: String,
    coupling: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyBody {
    case_count: usize,
    failure_count: usize,
    reports: Vec<SuiteReport>,
}

fn verify(a: &VerifyArgs) -> Outcome {
    let degree = a.deg.unwrap_or_else(|| default_degree(a.n));
    let ctx = DunklContext::new(a.n, degree)?.with_coupling(a.coupling.poly());
    let reports = if a.suite == "all" {
        run_all(&ctx)
    } else {
        Suite::parse(&a.suite)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{}`", a.suite)))?
            .run(&ctx)
    };
    let body = VerifyBody {
        case_count: reports.iter().map(|r| r.case_count).sum(),
        failure_count: reports.iter().map(|r| r.failures.len()).sum(),
        reports,
    };
    let passed = body.failure_count == 0;
    let config = VerifyConfig {
        n: a.n,
        degree,
        suite: a.suite.clone(),
        coupling: a.coupling.to_string(),
    };
    render("verify", config, body, passed)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TransportConfig {
    path: String,
    margin: f64,
    tol: f64,
    holonomy_tol: f64,
    dyson_tol: f64,
    cap: usize,
    flatness_points: usize,
    seed: u64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DysonComparison {
    order: usize,
    steps: usize,
    deviation: f64,
    dyson: TransportReport,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TransportBody {
    transport: TransportReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    dyson_comparison: Option<DysonComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flatness: Option<FlatnessReport>,
}

fn transport(a: &TransportArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", a.path.display())))?;
    let mut path = ChamberPath::from_json(&text)?;
    if let Some(m) = a.margin {
        path.margin = m;
        path.validate()?;
    }
    let p = Momentum::new(a.momenta.clone());
    let omega = build_local_system_with(path.n, &p, &a.coupling, a.prefactor.as_ref(), a.cap)?;
    let ode = transport_ode(&omega, &path, a.tol)?;
    let transport = TransportReport::new(&omega, &path, &ode);
    let mut passed = transport
        .holonomy_deviation
        .is_none_or(|d| d <= a.holonomy_tol);

    let dyson_comparison = match a.compare_dyson.as_deref() {
        Some(&[order, steps]) => {
            let d = transport_dyson(&omega, &path, order, steps)?;
            let deviation = max_abs_diff(&d.matrix, &ode.matrix);
            passed &= deviation <= a.dyson_tol;
            Some(DysonComparison {
                order,
                steps,
                deviation,
                dyson: TransportReport::new(&omega, &path, &d),
            })
        }
        _ => None,
    };

    let flatness = if a.flatness_points > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let points: Vec<_> = (0..a.flatness_points)
            .map(|_| random_chamber_point(&mut rng, path.n))
            .collect();
        let r = verify_flatness(&omega, &points)?;
        passed &= r.passed();
        Some(r)
    } else {
        None
    };

    let config = TransportConfig {
        path: a.path.display().to_string(),
        margin: path.margin,
        tol: a.tol,
        holonomy_tol: a.holonomy_tol,
        dyson_tol: a.dyson_tol,
        cap: a.cap,
        flatness_points: a.flatness_points,
        seed: a.seed,
    };
    let body = TransportBody {
        transport,
        dyson_comparison,
        flatness,
    };
    render("transport", config, body, passed)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SimulateConfig {
    x: Vec<f64>,
    p: Vec<f64>,
    g2: f64,
    omega: f64,
    #[serde(rename = "T")]
    duration: f64,
    dt: f64,
    sample_every: usize,
    drift_tol: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SimulateBody {
    steps: usize,
    /// Relative drift of H and I1..I4.
    max_drift: serde_json::Map<String, serde_json::Value>,
    /// Quantities held to the drift tolerance.
    checked: Vec<String>,
    final_x: Vec<f64>,
    final_p: Vec<f64>,
}

fn simulate(a: &SimulateArgs) -> Outcome {
    let start = PhasePoint {
        x: a.x.clone(),
        p: a.p.clone(),
        g2: a.g2,
        omega: a.omega,
    };
    let tr = integrate(&start, a.duration, a.dt, a.sample_every)?;
    if let Some(csv) = &a.csv {
        std::fs::write(csv, tr.to_csv())
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", csv.display())))?;
    }
    let mut max_drift = serde_json::Map::new();
    max_drift.insert("H".into(), tr.drift.energy.into());
    for (i, d) in tr.drift.traces.iter().enumerate() {
        max_drift.insert(format!("I{}", i + 1), (*d).into());
    }
    // the unit Lax matrix is only conserved for g² = 1 without the trap
    let mut checked = vec!["H".to_string()];
    if a.omega == 0.0 && a.g2 == 1.0 {
        checked.extend((1..=TRACKED_TRACES).map(|i| format!("I{i}")));
    }
    let passed = checked
        .iter()
        .all(|k| max_drift[k].as_f64().is_some_and(|d| d <= a.drift_tol));
    let last = tr.last();
    let body = SimulateBody {
        steps: tr.drift.steps,
        max_drift,
        checked,
        final_x: last.x.clone(),
        final_p: last.p.clone(),
    };
    let config = SimulateConfig {
        x: a.x.clone(),
        p: a.p.clone(),
        g2: a.g2,
        omega: a.omega,
        duration: a.duration,
        dt: a.dt,
        sample_every: a.sample_every,
        drift_tol: a.drift_tol,
    };
    render("simulate", config, body, passed)
}

#[derive(Serialize)]
struct SymbolsConfig {
    #[serde(rename = "N")]
    n: usize,
    degree: u32,
}

fn symbols(a: &SymbolsArgs) -> Outcome {
    if a.n < 2 {
        return Err(Error::InvalidArgument(format!("need N ≥ 2, got {}", a.n)));
    }
    let degree = a.deg.unwrap_or_else(|| default_degree(a.n));
    let report: SymbolSuiteReport = run_symbol_suite(a.n, degree);
    let passed = report.passed();
    render("symbols", SymbolsConfig { n: a.n, degree }, report, passed)
}
