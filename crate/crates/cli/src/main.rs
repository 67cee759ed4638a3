//! `gft`: batch front end for identity generation, exact cancellation
//! checks, spot checks and the random-matrix experiments.
//!
//! Exit codes: 0 success, 1 I/O, 2 invalid arguments or input files,
//! 3 verification failed, 4 numerical failure.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gft_exact::{parse_solution, solution_to_text, solve, verify, EliminationOptions, LinearSystem, PivotStrategy};
use gft_rmt::{ExperimentConfig, Tw1};
use gft_symbolic::assemble::{assemble, provenance_json};
use gft_symbolic::cancellation::{sha256_hex, verify_cancellation, CancellationConfig};
use gft_symbolic::flow::{leading_target, FlowSign};
use gft_symbolic::generate::{generate_all, GenerateConfig};
use gft_symbolic::spotcheck::hand_checks;
use gft_symbolic::Case;
use serde_json::json;

use output::{default_out_dir, RunDir};

#[derive(Parser, Debug)]
#[command(name = "gft", version, about = "Cancellation identities and edge statistics for sparse random matrices")]
struct Cli {
    /// Output root; defaults to $GFT_OUT_DIR, then ./gft-out.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CaseArg {
    #[value(name = "m")]
    M,
    #[value(name = "F", alias = "f")]
    F,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::M => Case::M,
            CaseArg::F => Case::F,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Smallest,
    First,
}

impl From<StrategyArg> for PivotStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Smallest => PivotStrategy::SmallestPivot,
            StrategyArg::First => PivotStrategy::FirstNonzero,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Derived,
    Flipped,
}

impl From<SignArg> for FlowSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Derived => FlowSign::Derived,
            SignArg::Flipped => FlowSign::Flipped,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpotcheckName {
    #[value(name = "appendixB")]
    AppendixB,
}

#[derive(clap::Args, Debug)]
struct CaseOpts {
    #[arg(long, value_enum)]
    case: CaseArg,
    /// Largest number of summation indices in a start term.
    #[arg(long, default_value_t = 4)]
    nmax: u32,
    /// Sign convention of the observable-case flow derivative.
    #[arg(long, value_enum, default_value = "derived")]
    sign: SignArg,
}

impl CaseOpts {
    fn config(&self, strategy: Option<StrategyArg>) -> CancellationConfig {
        let base = match self.case {
            CaseArg::M => CancellationConfig { n_max: self.nmax, ..CancellationConfig::m_case() },
            CaseArg::F => CancellationConfig::f_case(self.nmax),
        };
        CancellationConfig {
            sign: self.sign.into(),
            strategy: strategy.map(Into::into),
            ..base
        }
    }

    fn label(&self) -> String {
        let c: Case = self.case.into();
        format!("{}-n{}", c.name(), self.nmax)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate identities and write the assembled system.
    Generate {
        #[command(flatten)]
        case: CaseOpts,
    },
    /// Solve a system file exactly.
    Solve {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
    },
    /// Generate, solve and exact-verify; or check external files with --cross.
    Verify {
        #[command(flatten)]
        case: CaseOpts,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Directory holding system.txt and solution.txt to verify instead.
        #[arg(long)]
        cross: Option<PathBuf>,
    },
    /// Re-derive the two worked identities and compare term by term.
    Spotcheck {
        #[arg(value_enum)]
        which: SpotcheckName,
    },
    /// Run a Tracy-Widom convergence experiment from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Tabulate F1 on the points listed in a file, one per line.
    Tw {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value_t = 96)]
        nodes: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Input(String),
    Verification(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Input(_) => 2,
            Failure::Verification(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Input(m) | Failure::Verification(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn symbolic_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Numerical(e.to_string())
}

fn rmt_failure(e: gft_rmt::RmtError) -> Failure {
    use gft_rmt::RmtError::*;
    match e {
        Param(_) | TooFewSamples(_) | Json(_) => Failure::Input(e.to_string()),
        Io(_) | Csv(_) => Failure::Io(e.to_string()),
        _ => Failure::Numerical(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(f) = configure_jobs(cli.jobs) {
        eprintln!("error: {}", f.message());
        return ExitCode::from(f.code());
    }
    let out = cli.out.clone().unwrap_or_else(default_out_dir);
    match run(cli.command, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn configure_jobs(jobs: Option<usize>) -> Result<(), Failure> {
    let Some(k) = jobs else { return Ok(()) };
    if k == 0 {
        return Err(Failure::Input("--jobs must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| Failure::Input(e.to_string()))?;
    Ok(())
}

fn run(command: Command, out: &Path) -> Result<(), Failure> {
    match command {
        Command::Generate { case } => generate(&case, out),
        Command::Solve { system, strategy } => solve_file(&system, strategy, out),
        Command::Verify { case, strategy, cross: None } => verify_case(&case, strategy, out),
        Command::Verify { case, cross: Some(dir), .. } => cross_verify(&case, &dir, out),
        Command::Spotcheck { which: SpotcheckName::AppendixB } => spotcheck(out),
        Command::Simulate { config } => simulate(&config, out),
        Command::Tw { grid, nodes } => tabulate(&grid, nodes, out),
    }
}

fn generate(opts: &CaseOpts, out: &Path) -> Result<(), Failure> {
    let cfg = opts.config(None);
    let generated = generate_all(GenerateConfig::new(cfg.case, cfg.n_max)).map_err(symbolic_failure)?;
    let target = leading_target(cfg.case, cfg.sign).map_err(symbolic_failure)?;
    let assembled = assemble(&generated, &target, cfg.policy).map_err(symbolic_failure)?;
    let system = assembled.to_linear_system();
    let mut run = RunDir::new(
        out.join(format!("generate-{}", opts.label())),
        "generate",
        json!({"case": cfg.case.name(), "n_max": cfg.n_max, "sign": format!("{:?}", cfg.sign)}),
    )?;
    let path = run.write("system.txt", &system.to_text())?;
    let mut prov = serde_json::to_string_pretty(&provenance_json(&generated)).expect("json");
    prov.push('\n');
    run.write("provenance.json", &prov)?;
    let mut stats = serde_json::to_string_pretty(&generated.stats).expect("json");
    stats.push('\n');
    run.write("stats.json", &stats)?;
    run.finish()?;
    println!(
        "{} identities over {} basis terms, {} nonzeros -> {}",
        system.matrix.ncols(),
        system.matrix.nrows(),
        system.matrix.nnz(),
        path.display()
    );
    Ok(())
}

fn solve_file(path: &Path, strategy: Option<StrategyArg>, out: &Path) -> Result<(), Failure> {
    let system = LinearSystem::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let strategy: PivotStrategy =
        strategy.map_or_else(|| PivotStrategy::auto(system.matrix.ncols()), Into::into);
    let rep = solve(&system.matrix, &system.rhs, EliminationOptions::new(strategy)).map_err(symbolic_failure)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("system");
    let mut run = RunDir::new(
        out.join(format!("solve-{stem}")),
        "solve",
        json!({"system": path.display().to_string(), "system_sha256": sha256_hex(system.to_text().as_bytes()), "strategy": strategy.name()}),
    )?;
    let solution_text = rep.solution().map(|x| solution_to_text(x, system.matrix.ncols()));
    if let Some(t) = &solution_text {
        run.write("solution.txt", t)?;
    }
    let report = json!({
        "rows": system.matrix.nrows(),
        "cols": system.matrix.ncols(),
        "rank": rep.rank,
        "strategy": strategy.name(),
        "solved": rep.is_solved(),
        "nonzero_multipliers": rep.solution().map_or(0, |x| x.nnz()),
        "solution_sha256": solution_text.as_deref().map(|t| sha256_hex(t.as_bytes())),
    });
    run.write("report.json", &(serde_json::to_string_pretty(&report).expect("json") + "\n"))?;
    run.finish()?;
    println!("rank {} of {}x{}, solved: {}", rep.rank, system.matrix.nrows(), system.matrix.ncols(), rep.is_solved());
    if rep.is_solved() {
        Ok(())
    } else {
        Err(Failure::Verification("no solution: target outside the column space".into()))
    }
}

fn verify_case(opts: &CaseOpts, strategy: Option<StrategyArg>, out: &Path) -> Result<(), Failure> {
    let cfg = opts.config(strategy);
    let run_result = verify_cancellation(&cfg).map_err(symbolic_failure)?;
    let report = &run_result.report;
    let mut run = RunDir::new(
        out.join(format!("verify-{}", opts.label())),
        "verify",
        json!({"case": cfg.case.name(), "n_max": cfg.n_max, "sign": format!("{:?}", cfg.sign), "strategy": report.strategy}),
    )?;
    run.write("system.txt", &run_result.system_text())?;
    if let Some(s) = run_result.solution_text() {
        run.write("solution.txt", &s)?;
    }
    run.write("provenance.json", &run_result.provenance_text())?;
    run.write("report.json", &report.to_json())?;
    run.finish()?;
    print!("{}", report.to_human());
    if report.solved {
        Ok(())
    } else {
        Err(Failure::Verification(format!("case {} not solved", report.case)))
    }
}

/// One-based positions and values published for the `m` solution.
const M_POSITIONAL: [(usize, i64); 2] = [(3, -1824), (54, -12)];
const M_NONZEROS: usize = 62;

fn cross_verify(opts: &CaseOpts, dir: &Path, out: &Path) -> Result<(), Failure> {
    let sys_path = dir.join("system.txt");
    let sol_path = dir.join("solution.txt");
    let system =
        LinearSystem::parse(&read(&sys_path)?).map_err(|e| Failure::Input(format!("{}: {e}", sys_path.display())))?;
    let (x, cols) =
        parse_solution(&read(&sol_path)?).map_err(|e| Failure::Input(format!("{}: {e}", sol_path.display())))?;
    if cols != system.matrix.ncols() {
        return Err(Failure::Input(format!("solution has {cols} entries, system has {} columns", system.matrix.ncols())));
    }
    let ok = verify(&system.matrix, &x, &system.rhs).map_err(|e| Failure::Input(e.to_string()))?;
    let integers = x.iter().all(|(_, v)| v.is_integer());
    let mut report = json!({
        "system": sys_path.display().to_string(),
        "solution": sol_path.display().to_string(),
        "rows": system.matrix.nrows(),
        "cols": system.matrix.ncols(),
        "verified": ok,
        "nonzero_multipliers": x.nnz(),
        "integers_only": integers,
    });
    if matches!(opts.case, CaseArg::M) {
        let positional: Vec<_> = M_POSITIONAL
            .iter()
            .map(|&(pos, want)| {
                let got = x.get(pos - 1);
                json!({"position": pos, "expected": want, "found": got.to_string(), "ok": got == gft_exact::Rational::from_integer(want)})
            })
            .collect();
        report["positional"] = json!(positional);
        report["expected_nonzeros"] = json!(M_NONZEROS);
        report["nonzeros_ok"] = json!(x.nnz() == M_NONZEROS);
    }
    let mut run = RunDir::new(
        out.join(format!("cross-{}", opts.label())),
        "verify --cross",
        json!({"dir": dir.display().to_string()}),
    )?;
    run.write("report.json", &(serde_json::to_string_pretty(&report).expect("json") + "\n"))?;
    run.finish()?;
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification("A x != b".into()))
    }
}

fn spotcheck(out: &Path) -> Result<(), Failure> {
    let checks = hand_checks().map_err(symbolic_failure)?;
    let mut run = RunDir::new(out.join("spotcheck-appendixB"), "spotcheck appendixB", json!({}))?;
    run.write("spotcheck.json", &(serde_json::to_string_pretty(&checks).expect("json") + "\n"))?;
    run.finish()?;
    let mut all = true;
    for c in &checks {
        println!(
            "{}: {} (coefficients {{{}}})",
            c.name,
            if c.passed() { "ok" } else { "MISMATCH" },
            c.computed_multiset.join(", ")
        );
        all &= c.passed();
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Verification("spot check mismatch".into()))
    }
}

fn simulate(path: &Path, out: &Path) -> Result<(), Failure> {
    let text = read(path)?;
    let cfg = ExperimentConfig::from_json(&text).map_err(rmt_failure)?;
    let result = gft_rmt::run_experiment(&cfg).map_err(rmt_failure)?;
    let mut run = RunDir::new(out.join("simulate"), "simulate", serde_json::to_value(&cfg).expect("json"))?;
    let table = result.rows_csv().map_err(rmt_failure)?;
    run.write("ks.csv", &table)?;
    run.write("samples.csv", &result.samples_csv().map_err(rmt_failure)?)?;
    run.write("warnings.json", &(serde_json::to_string_pretty(&result.warnings).expect("json") + "\n"))?;
    run.finish()?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    print!("{table}");
    Ok(())
}

fn tabulate(path: &Path, nodes: usize, out: &Path) -> Result<(), Failure> {
    if nodes < 4 {
        return Err(Failure::Input("--nodes must be at least 4".into()));
    }
    let text = read(path)?;
    let mut rs = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        rs.push(line.parse::<f64>().map_err(|e| Failure::Input(format!("{}:{}: {e}", path.display(), k + 1)))?);
    }
    let tw = Tw1::new(nodes);
    let mut csv = String::from("r,F1\n");
    for r in rs {
        let v = tw.cdf(r).map_err(rmt_failure)?;
        csv.push_str(&format!("{r},{v:.15e}\n"));
    }
    let mut run = RunDir::new(out.join("tw"), "tw", json!({"grid": path.display().to_string(), "nodes": nodes}))?;
    run.write("tw.csv", &csv)?;
    run.finish()?;
    print!("{csv}");
    Ok(())
}
