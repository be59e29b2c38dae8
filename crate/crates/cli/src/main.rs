mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use oscsat::system_two::{nae_energy_levels, table_csv};
use oscsat::trace::TraceFormat;
use oscsat::{
    brute_force_with_cap, check_gradients, clause_energy_table, emit_trace, eval_assignment,
    generate_random_3sat, parse_dimacs, restart_trace, run_solve, serialize_dimacs, Formula,
    Objective, SystemParams,
};

use config::{ConfigError, Layer};

const LOG_ENV: &str = "OSCSAT_LOG";

#[derive(Parser)]
#[command(name = "oscsat", version, about = "Oscillator-inspired SAT and Max-NAE-SAT solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a system with restarts and report the best assignment.
    Solve(SolveArgs),
    /// Exhaustive optimum of a formula.
    Oracle(OracleArgs),
    /// Write a random 3-SAT instance in DIMACS form.
    Gen(GenArgs),
    /// Corner energies of a single three-literal clause.
    Table(TableArgs),
    /// Compare analytic gradients with finite differences.
    Gradcheck(GradcheckArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS CNF file.
    cnf: PathBuf,
    /// key=value settings file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inline overrides, e.g. `A=1.6,As=0.002,omega=6.28,an=5e-4,dt=1e-3`.
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    system: Option<String>,
    /// sat, max_sat or max_nae.
    #[arg(long)]
    objective: Option<String>,
    /// System II dynamics: full, printed or gradient.
    #[arg(long)]
    mode: Option<String>,
    /// Drop the constant factors of absent variables from every kernel.
    #[arg(long)]
    normalized: bool,
    #[arg(long)]
    restarts: Option<usize>,
    /// Integration time per restart, in periods.
    #[arg(long)]
    periods: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Skip the exhaustive oracle; max objectives then target every clause.
    #[arg(long)]
    no_oracle: bool,
    /// Write the trajectory of the best restart here.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    trace_format: Format,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OracleArgs {
    cnf: PathBuf,
    #[arg(long, default_value = "sat")]
    objective: String,
    #[arg(long, default_value_t = oscsat::oracle::DEFAULT_ORACLE_CAP)]
    cap: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    vars: usize,
    #[arg(long)]
    clauses: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long = "A", default_value_t = 1.0)]
    a: f64,
    #[arg(long = "As", default_value_t = 0.0)]
    a_s: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GradcheckArgs {
    /// Check this formula instead of a random ensemble.
    cnf: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    instances: usize,
    #[arg(long, default_value_t = 10)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3e-4)]
    step: f64,
    #[arg(long)]
    normalized: bool,
}

enum Failure {
    Input(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<oscsat::Error> for Failure {
    fn from(e: oscsat::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Input(e.0)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn read_formula(path: &Path) -> Result<Formula, Failure> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_dimacs(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(io_err(p)),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn solve(args: &SolveArgs) -> Result<u8, Failure> {
    let file_layer = match &args.config {
        Some(p) => Layer::parse_file(&Layer::load(p).map_err(io_err(p))?)?,
        None => Layer::default(),
    };
    let inline = match &args.params {
        Some(s) => Layer::parse_inline(s)?,
        None => Layer::default(),
    };
    let mut flags = Vec::new();
    let mut flag = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            flags.push((k.to_string(), v));
        }
    };
    flag("system", args.system.clone());
    flag("objective", args.objective.clone());
    flag("mode", args.mode.clone());
    flag("normalized", args.normalized.then(|| "true".into()));
    flag("restarts", args.restarts.map(|v| v.to_string()));
    flag("periods", args.periods.map(|v| v.to_string()));
    flag("seed", args.seed.map(|v| v.to_string()));
    flag("workers", args.workers.map(|v| v.to_string()));
    flag("oracle", args.no_oracle.then(|| "false".into()));
    let flags = Layer(flags);
    let cfg = config::resolve(&[&file_layer, &inline, &flags])?;

    let f = read_formula(&args.cnf)?;
    info!(
        "solving {} ({} vars, {} clauses) with system {}, {} restarts",
        args.cnf.display(),
        f.num_vars(),
        f.num_clauses(),
        cfg.system,
        cfg.restarts
    );
    let report = run_solve(&f, &cfg)?;
    for r in &report.restarts {
        info!(
            "restart {} seed {}: best {} after {} steps",
            r.index, r.seed, r.best_value, r.steps
        );
    }

    if let Some(path) = &args.trace {
        let best = report
            .restarts
            .iter()
            .find(|r| r.best_value == report.best_value)
            .expect("best value comes from some restart");
        let trace = restart_trace(&f, &cfg, best.index)?;
        let format = match args.trace_format {
            Format::Csv => TraceFormat::Csv,
            Format::Json => TraceFormat::Json,
        };
        emit_trace(&trace, format, path).map_err(io_err(path))?;
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &args.report {
        std::fs::write(path, &json).map_err(io_err(path))?;
    }
    if args.json {
        println!("{json}");
    } else {
        let stats = eval_assignment(&f, &report.best_assignment)?;
        println!("status: {}", serde_json::to_value(report.status).unwrap().as_str().unwrap());
        println!("objective: {}", report.objective);
        println!("best_value: {} (target {})", report.best_value, report.target_value);
        println!("sat_count: {}/{}", stats.sat_count, f.num_clauses());
        println!("nae_count: {}/{}", stats.nae_count, f.num_clauses());
        println!("assignment: {}", report.best_assignment);
        println!(
            "restarts: {}, steps: {}, wall time: {:.3} s",
            report.restarts_used, report.total_steps, report.wall_time
        );
    }
    Ok(report.exit_code() as u8)
}

fn oracle(args: &OracleArgs) -> Result<u8, Failure> {
    let objective: Objective = args.objective.parse()?;
    let f = read_formula(&args.cnf)?;
    let r = brute_force_with_cap(&f, objective, args.cap)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&r).expect("result serializes"));
    } else {
        println!("objective: {}", r.objective);
        println!("best_value: {}/{}", r.best_value, f.num_clauses());
        println!("optimal_assignments: {}", r.optimal_count);
        println!("assignment: {}", r.best_assignment);
        println!("satisfiable: {}", r.satisfiable);
    }
    Ok(0)
}

fn gen(args: &GenArgs) -> Result<u8, Failure> {
    let f = generate_random_3sat(args.vars, args.clauses, args.seed)?;
    write_out(args.output.as_deref(), &serialize_dimacs(&f))?;
    Ok(0)
}

fn table(args: &TableArgs) -> Result<u8, Failure> {
    let params = SystemParams {
        a: args.a,
        a_s: args.a_s,
        ..SystemParams::default()
    };
    params.validate()?;
    let (e1, e2) = nae_energy_levels(&params);
    info!("E1 = {e1}, E2 = {e2}");
    write_out(args.output.as_deref(), &table_csv(&clause_energy_table(&params)))?;
    Ok(0)
}

fn gradcheck(args: &GradcheckArgs) -> Result<u8, Failure> {
    let params = SystemParams {
        a_s: 0.05,
        kernel_normalized: args.normalized,
        ..SystemParams::default()
    };
    let formulas = match &args.cnf {
        Some(p) => vec![read_formula(p)?],
        None => (0..args.instances as u64)
            .map(|k| {
                let n = 3 + (k % 6) as usize;
                let m = 1 + (k * 7 % 20) as usize;
                generate_random_3sat(n, m, args.seed.wrapping_add(k))
            })
            .collect::<oscsat::Result<_>>()?,
    };
    let (mut one, mut two) = (0.0f64, None::<f64>);
    for (k, f) in formulas.iter().enumerate() {
        let r = check_gradients(f, &params, args.points, args.seed.wrapping_add(k as u64), args.step)?;
        one = one.max(r.system_one.max_rel_error);
        if let Some(g) = r.averaged_gradient {
            two = Some(two.unwrap_or(0.0).max(g.max_rel_error));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "instances: {}", formulas.len());
    let _ = writeln!(out, "grad_v max_rel_error: {one:.3e}");
    match two {
        Some(v) => {
            let _ = writeln!(out, "averaged_gradient max_rel_error: {v:.3e}");
        }
        None => out.push_str("averaged_gradient: skipped (not strict 3-SAT)\n"),
    }
    print!("{out}");
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Oracle(a) => oracle(a),
        Command::Gen(a) => gen(a),
        Command::Table(a) => table(a),
        Command::Gradcheck(a) => gradcheck(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let (Failure::Input(msg) | Failure::Io(msg)) = &e;
            eprintln!("error: {msg}");
            ExitCode::from(e.code())
        }
    }
}
