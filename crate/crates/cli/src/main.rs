//! `strucrec` command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage and validation errors (bad flags,
//! unreadable or invalid inputs), 2 when a validated run fails.

use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use strucrec_core::bounds::{self, BoundInputs, BoundReport};
use strucrec_core::constraints::structure_value;
use strucrec_core::geometry::{descent_cone_width, gaussian_width_mc, WidthEstimate, WidthSet};
use strucrec_core::harness::{
    self, read_records_csv, read_records_json, run_experiment, tuned_radius, verify_bounds_with,
    with_threads, write_phase_table_csv, write_records_csv, write_records_json, BoundConstants,
    CoverageSummary, ExperimentConfig, ExperimentOutput,
};
use strucrec_core::measurement::{gaussian_matrix, make_noise, measure_linear, measure_magnitude};
use strucrec_core::solvers::{self, sign_invariant_error};
use strucrec_core::{
    DenseMatrix, FeasibleSet, InitPolicy, MeasurementKind, NoiseSpec, RngSpec, SignalVector,
    SolverOptions, StructureKind,
};

#[derive(Parser)]
#[command(name = "strucrec", version, about = "Structured signal recovery toolkit")]
struct Cli {
    /// Master seed. Overrides `master_seed` in experiment configs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format. Without it, experiment and verify write CSV and the
    /// other commands write plain text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for experiments and width estimation.
    #[arg(long, global = true, env = "STRUCREC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a sparse unit-norm signal and, with --m, Gaussian measurements of it.
    Gen(GenArgs),
    /// Recover a signal from a problem file written by `gen`.
    Solve(SolveArgs),
    /// Monte Carlo Gaussian width of a set.
    Width(WidthArgs),
    /// Evaluate a recovery bound.
    Bound(BoundArgs),
    /// Run an experiment config.
    Experiment(ExperimentArgs),
    /// Check bound coverage of experiment records.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    s: usize,
    /// Number of measurements; omit to write the signal only.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum, default_value_t = Measurement::Linear)]
    measurement: Measurement,
    /// Standard deviation of additive Gaussian noise.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Measurement {
    Linear,
    Magnitude,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, value_enum)]
    constraint: Constraint,
    /// Constraint radius. Takes precedence over --eta-ratio.
    #[arg(long)]
    eta: Option<f64>,
    /// Radius as a multiple of f(x*); needs x_star in the problem file.
    #[arg(long)]
    eta_ratio: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long, value_enum)]
    init: Option<Init>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Cls,
    Clad,
    Cnls,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Constraint {
    L0,
    L1,
    L2,
}

impl From<Constraint> for StructureKind {
    fn from(c: Constraint) -> Self {
        match c {
            Constraint::L0 => StructureKind::L0,
            Constraint::L1 => StructureKind::L1,
            Constraint::L2 => StructureKind::L2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Init {
    Zero,
    Spectral,
}

#[derive(Args)]
struct WidthArgs {
    #[arg(long, value_enum)]
    set: WidthKind,
    #[arg(long)]
    n: usize,
    /// Sparsity for l1-cap and the anchor support of the cone sets.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WidthKind {
    L2Ball,
    Sphere,
    L1Cap,
    ConeL0,
    ConeL1,
    ConeL2,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    theorem: Theorem,
    #[arg(long)]
    m: Option<f64>,
    /// Uses this rate directly instead of deriving it from --m0/--m1.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    m0: Option<f64>,
    #[arg(long)]
    m1: Option<f64>,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long)]
    rho_multiplier: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, value_enum)]
    kind: Option<Constraint>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    f_star: Option<f64>,
    #[arg(long)]
    norm_x_star: Option<f64>,
    #[arg(long)]
    proj_gap: Option<f64>,
    #[arg(long)]
    noise_l2: Option<f64>,
    #[arg(long)]
    noise_l1: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Cls1,
    Cls2,
    ClsDelta1,
    ClsDelta2,
    Clad1,
    Clad2,
    Cnls1,
    Cnls2,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Where a phase-transition run writes its success-rate table; standard
    /// error when absent.
    #[arg(long)]
    phase_table: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Records as CSV, or JSON when the file name ends in `.json`.
    #[arg(long)]
    records: PathBuf,
    /// Experiment config whose bound constants produced the records.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Problem file written by `gen` and read by `solve`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Problem {
    seed: u64,
    x_star: Option<SignalVector>,
    measurement: Option<MeasurementKind>,
    a: Option<DenseMatrix>,
    y: Option<Vec<f64>>,
}

struct Failure {
    code: u8,
    msg: String,
}

fn invalid(e: impl Display) -> Failure {
    Failure {
        code: 1,
        msg: e.to_string(),
    }
}

fn runtime(e: impl Display) -> Failure {
    Failure {
        code: 2,
        msg: e.to_string(),
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version go to stdout and are not failures.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    if cli.threads == Some(0) {
        return Err(invalid("--threads must be >= 1"));
    }
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a),
        Command::Solve(a) => cmd_solve(cli, a),
        Command::Width(a) => cmd_width(cli, a),
        Command::Bound(a) => cmd_bound(cli, a),
        Command::Experiment(a) => cmd_experiment(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
    }
}

fn open_out(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| runtime(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn emit(cli: &Cli, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult<()> {
    let mut out = open_out(cli.out.as_deref())?;
    body(&mut out).and_then(|_| out.flush()).map_err(runtime)
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> CliResult<()> {
    emit(cli, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)
    })
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> CliResult<()> {
    if cli.format == Some(Format::Csv) {
        return Err(invalid("gen writes JSON problem files only"));
    }
    let seed = cli.seed.unwrap_or(0);
    let root = RngSpec::new(seed, 0);
    let x_star = harness::gen_ground_truth(args.n, args.s, &root.substream(1)).map_err(invalid)?;
    let mut problem = Problem {
        seed,
        x_star: Some(x_star.clone()),
        measurement: None,
        a: None,
        y: None,
    };
    if let Some(m) = args.m {
        let noise = if args.sigma == 0.0 {
            NoiseSpec::None
        } else {
            NoiseSpec::Gaussian { sigma: args.sigma }
        };
        noise.validate().map_err(invalid)?;
        let a = gaussian_matrix(m, args.n, &root.substream(2)).map_err(invalid)?;
        let e = make_noise(&noise, m, &root.substream(3)).map_err(invalid)?;
        let set = match args.measurement {
            Measurement::Linear => measure_linear(a, &x_star, &e),
            Measurement::Magnitude => measure_magnitude(a, &x_star, &e),
        }
        .map_err(invalid)?;
        problem.measurement = Some(set.kind());
        problem.y = Some(set.y().to_vec());
        problem.a = Some(set.matrix().as_ref().clone());
    }
    emit_json(cli, &problem)
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    model: &'a str,
    eta: f64,
    objective: f64,
    iterations: usize,
    converged: bool,
    error: Option<f64>,
    warnings: &'a [String],
    x_hat: &'a SignalVector,
}

fn cmd_solve(cli: &Cli, args: &SolveArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.problem)
        .map_err(|e| invalid(format!("cannot read problem {}: {e}", args.problem.display())))?;
    let problem: Problem = serde_json::from_str(&text).map_err(invalid)?;
    let (Some(a), Some(y)) = (&problem.a, &problem.y) else {
        return Err(invalid("problem file has no measurements; rerun gen with --m"));
    };
    let kind = StructureKind::from(args.constraint);
    let eta = match (args.eta, &problem.x_star) {
        (Some(eta), _) => eta,
        (None, Some(x)) => tuned_radius(
            kind,
            args.eta_ratio.unwrap_or(1.0),
            structure_value(kind, x),
            x.len(),
        ),
        (None, None) => return Err(invalid("need --eta when the problem has no x_star")),
    };
    let k = FeasibleSet::new(kind, eta).map_err(invalid)?;
    let defaults = SolverOptions::default();
    let opts = SolverOptions {
        max_iters: args.max_iters.unwrap_or(defaults.max_iters),
        rel_tol: args.rel_tol.unwrap_or(defaults.rel_tol),
        init_policy: args.init.map(|i| match i {
            Init::Zero => InitPolicy::Zero,
            Init::Spectral => InitPolicy::Spectral,
        }),
        ..defaults
    };
    opts.validate().map_err(invalid)?;
    let expected = match args.model {
        Model::Cnls => MeasurementKind::Magnitude,
        _ => MeasurementKind::Linear,
    };
    if problem.measurement.is_some_and(|k| k != expected) {
        eprintln!("warning: model and measurement kind do not match");
    }
    let (name, res) = match args.model {
        Model::Cls => ("cls", solvers::solve_cls(a, y, &k, &opts)),
        Model::Clad => ("clad", solvers::solve_clad(a, y, &k, &opts)),
        Model::Cnls => ("cnls", solvers::solve_cnls(a, y, &k, &opts)),
    };
    let res = res.map_err(runtime)?;
    for w in &res.warnings {
        eprintln!("warning: {w}");
    }
    let error = match &problem.x_star {
        Some(x) if args.model == Model::Cnls => Some(sign_invariant_error(&res.x_hat, x).map_err(invalid)?),
        Some(x) => Some(res.x_hat.distance(x).map_err(invalid)?),
        None => None,
    };
    let out = SolveOutput {
        model: name,
        eta,
        objective: res.objective,
        iterations: res.iterations,
        converged: res.converged,
        error,
        warnings: &res.warnings,
        x_hat: &res.x_hat,
    };
    match cli.format {
        Some(Format::Json) => emit_json(cli, &out),
        Some(Format::Csv) => emit(cli, |w| {
            writeln!(w, "index,x_hat")?;
            for (i, v) in res.x_hat.as_slice().iter().enumerate() {
                writeln!(w, "{i},{v:.16e}")?;
            }
            Ok(())
        }),
        None => emit(cli, |w| {
            writeln!(w, "model      {name}")?;
            writeln!(w, "eta        {eta}")?;
            writeln!(w, "objective  {}", res.objective)?;
            writeln!(w, "iterations {}", res.iterations)?;
            writeln!(w, "converged  {}", res.converged)?;
            if let Some(e) = error {
                writeln!(w, "error      {e}")?;
            }
            Ok(())
        }),
    }
}

fn cmd_width(cli: &Cli, args: &WidthArgs) -> CliResult<()> {
    let rng = RngSpec::new(cli.seed.unwrap_or(0), 0);
    let need_s = || args.s.ok_or_else(|| invalid("this set needs --s"));
    let estimate = |set: WidthSet| gaussian_width_mc(&set, args.samples, &rng);
    let run = || -> strucrec_core::Result<WidthEstimate> {
        match args.set {
            WidthKind::L2Ball => estimate(WidthSet::EuclideanBall { n: args.n }),
            WidthKind::Sphere => estimate(WidthSet::Sphere { n: args.n }),
            WidthKind::L1Cap => estimate(WidthSet::L1Cap { s: args.s.unwrap_or(0), n: args.n }),
            WidthKind::ConeL0 => descent_cone_width(StructureKind::L0, args.n, args.s.unwrap_or(0), args.samples, &rng),
            WidthKind::ConeL1 => descent_cone_width(StructureKind::L1, args.n, args.s.unwrap_or(0), args.samples, &rng),
            WidthKind::ConeL2 => descent_cone_width(StructureKind::L2, args.n, args.s.unwrap_or(0), args.samples, &rng),
        }
    };
    if args.set != WidthKind::L2Ball && args.set != WidthKind::Sphere {
        need_s()?;
    }
    let est = with_threads(cli.threads, run).map_err(invalid)?.map_err(invalid)?;
    match cli.format {
        Some(Format::Json) => emit_json(cli, &est),
        Some(Format::Csv) => emit(cli, |w| {
            writeln!(w, "set,mean,stderr,samples")?;
            writeln!(w, "\"{}\",{:.16e},{:.16e},{}", est.set_label, est.mean, est.stderr, est.samples)
        }),
        None => emit(cli, |w| {
            writeln!(w, "{:.4} +/- {:.4} ({} samples, {})", est.mean, est.stderr, est.samples, est.set_label)
        }),
    }
}

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> CliResult<()> {
    let d = BoundInputs::default();
    let inp = BoundInputs {
        m: args.m.unwrap_or(d.m),
        m0: args.m0.unwrap_or(d.m0),
        m1: args.m1.unwrap_or(d.m1),
        u: args.u.unwrap_or(d.u),
        rho_multiplier: args.rho_multiplier.unwrap_or(d.rho_multiplier),
        rho: args.rho,
        delta: args.delta.unwrap_or(d.delta),
        gamma: args.gamma.unwrap_or(d.gamma),
        beta: args.beta.unwrap_or(d.beta),
        kind: args.kind.map_or(d.kind, StructureKind::from),
        eta: args.eta.unwrap_or(d.eta),
        f_star: args.f_star.unwrap_or(d.f_star),
        norm_x_star: args.norm_x_star.unwrap_or(d.norm_x_star),
        proj_gap: args.proj_gap.unwrap_or(d.proj_gap),
        noise_l2: args.noise_l2.unwrap_or(d.noise_l2),
        noise_l1: args.noise_l1.unwrap_or(d.noise_l1),
        ..d
    };
    let eval: fn(&BoundInputs) -> strucrec_core::Result<BoundReport> = match args.theorem {
        Theorem::Cls1 => bounds::bound_cls_case1,
        Theorem::Cls2 => bounds::bound_cls_case2,
        Theorem::ClsDelta1 => bounds::bound_cls_delta_case1,
        Theorem::ClsDelta2 => bounds::bound_cls_delta_case2,
        Theorem::Clad1 => bounds::bound_clad_case1,
        Theorem::Clad2 => bounds::bound_clad_case2,
        Theorem::Cnls1 => bounds::bound_cnls_case1,
        Theorem::Cnls2 => bounds::bound_cnls_case2,
    };
    let rep = eval(&inp).map_err(invalid)?;
    match cli.format {
        Some(Format::Json) => emit_json(cli, &rep),
        Some(Format::Csv) => emit(cli, |w| {
            writeln!(w, "value,mismatch_term,noise_term,rho,case,theorem,confidence")?;
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{},{},{:.16e}",
                rep.value, rep.mismatch_term, rep.noise_term, rep.rho, rep.case_tag, rep.theorem_tag, rep.confidence
            )
        }),
        None => emit(cli, |w| writeln!(w, "{:.4}", rep.value)),
    }
}

fn load_config(path: &Path) -> CliResult<ExperimentConfig> {
    if !path.exists() {
        return Err(invalid(format!("config file not found: {}", path.display())));
    }
    ExperimentConfig::load(path).map_err(invalid)
}

fn cmd_experiment(cli: &Cli, args: &ExperimentArgs) -> CliResult<()> {
    let mut cfg = load_config(&args.config)?;
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    let output = with_threads(cli.threads, || run_experiment(&cfg))
        .map_err(invalid)?
        .map_err(runtime)?;
    let records = output.records();
    emit(cli, |w| {
        match cli.format.unwrap_or(Format::Csv) {
            Format::Csv => write_records_csv(&mut *w, records),
            Format::Json => write_records_json(&mut *w, records),
        }
        .map_err(io::Error::other)
    })?;
    if let ExperimentOutput::PhaseTransition(table) = &output {
        let write = |w: &mut dyn Write| write_phase_table_csv(w, table).map_err(runtime);
        match &args.phase_table {
            Some(p) => {
                let mut out = open_out(Some(p))?;
                write(&mut out)?;
                out.flush().map_err(runtime)?;
            }
            None => write(&mut io::stderr().lock())?,
        }
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> CliResult<()> {
    let file = File::open(&args.records)
        .map_err(|e| invalid(format!("cannot read records {}: {e}", args.records.display())))?;
    let is_json = args.records.extension().is_some_and(|e| e == "json");
    let records = if is_json {
        read_records_json(file)
    } else {
        read_records_csv(file)
    }
    .map_err(invalid)?;
    let constants = match &args.config {
        Some(p) => load_config(p)?.bound_constants,
        None => BoundConstants::default(),
    };
    let summary = verify_bounds_with(&records, &constants);
    match cli.format.unwrap_or(Format::Csv) {
        Format::Json => emit_json(cli, &summary)?,
        Format::Csv => emit(cli, |w| write_coverage_csv(w, &summary))?,
    }
    eprintln!("{} of {} cells flagged", summary.flagged, summary.cells.len());
    Ok(())
}

fn write_coverage_csv(w: &mut dyn Write, s: &CoverageSummary) -> io::Result<()> {
    writeln!(w, "model,m,eta_ratio,trials,applicable,covered,coverage,confidence,flagged")?;
    for c in &s.cells {
        let cov = c.coverage.map_or("NA".to_string(), |v| format!("{v:.6}"));
        writeln!(
            w,
            "{},{},{:.6},{},{},{},{},{:.6},{}",
            c.model, c.m, c.eta_ratio, c.trials, c.applicable, c.covered, cov, c.confidence, c.flagged
        )?;
    }
    Ok(())
}
