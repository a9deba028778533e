use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use pvflow::flow::{check_feasible, value, value_unchecked, Violation};
use pvflow::harness::batch;
use pvflow::harness::{
    generate, oracle_maxflow, parse_flow, parse_instance, write_flow, write_instance, GenParams,
    Instance, Regime,
};
use pvflow::solver::{solve_bounded, solve_k3, solve_scaling, Solution};
use pvflow::{FlowNetwork, Q};

/// Largest vertex capacity for which `--algo auto` picks the bounded solver.
const AUTO_BOUNDED_LIMIT: i128 = 16;

#[derive(Parser)]
#[command(name = "pvflow", version, about = "Planar max flow with vertex capacities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    /// Integer capacities, best for small vertex capacities.
    Bounded,
    /// Integer capacities of any size.
    Scaling,
    /// Exactly three terminals, rational capacities.
    K3,
    /// k3 when there are three terminals, otherwise bounded when every
    /// finite vertex capacity is at most 16, otherwise scaling.
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Integer,
    Rational,
}

#[derive(clap::Args, Clone)]
struct GenArgs {
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long = "U", default_value_t = 8)]
    u: i128,
    #[arg(long, value_enum, default_value = "integer")]
    regime: RegimeArg,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Allow terminals anywhere, not only on the outer face.
    #[arg(long)]
    inner_terminals: bool,
    /// Attach each source by a single arc to an interior vertex.
    #[arg(long)]
    pendant_sources: bool,
}

impl GenArgs {
    fn params(&self) -> GenParams {
        GenParams {
            n: self.n,
            k: self.k,
            u: self.u,
            regime: match self.regime {
                RegimeArg::Integer => Regime::Integer,
                RegimeArg::Rational => Regime::Rational,
            },
            density: self.density,
            inner_terminals: self.inner_terminals,
            pendant_sources: self.pendant_sources,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print its value.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        algo: Algo,
        /// Write the flow dump here (`-` for standard output).
        #[arg(long)]
        flow: Option<PathBuf>,
    },
    /// Solve with the vertex-splitting reference.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        flow: Option<PathBuf>,
    },
    /// Check a flow dump against an instance.
    Check { file: PathBuf, flow: PathBuf },
    /// Write a random instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        params: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every applicable solver against the reference. Takes instance
    /// files, or generates `--seeds` instances.
    Compare {
        files: Vec<PathBuf>,
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        #[command(flatten)]
        params: GenArgs,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

/// A command failed because its input was bad.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| InputError(e).into())
}

fn bad_input(message: String) -> anyhow::Error {
    InputError(anyhow!(message)).into()
}

fn load(path: &Path) -> Result<Instance> {
    input((|| {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
    })())
}

fn emit(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}

fn pick(net: &FlowNetwork, algo: Algo) -> Algo {
    match algo {
        Algo::Auto if net.k() == 3 => Algo::K3,
        Algo::Auto if net.max_vertex_cap() <= Q::from_integer(AUTO_BOUNDED_LIMIT) => Algo::Bounded,
        Algo::Auto => Algo::Scaling,
        a => a,
    }
}

fn algo_name(a: Algo) -> &'static str {
    match a {
        Algo::Bounded => "bounded",
        Algo::Scaling => "scaling",
        Algo::K3 => "k3",
        Algo::Auto => "auto",
    }
}

fn run_solver(net: &FlowNetwork, algo: Algo) -> Result<Solution> {
    Ok(match algo {
        Algo::Bounded => solve_bounded(net)?.0,
        Algo::Scaling => solve_scaling(net)?.0,
        Algo::K3 => solve_k3(net)?.0,
        Algo::Auto => unreachable!("resolved by pick"),
    })
}

fn applicable(net: &FlowNetwork) -> Vec<Algo> {
    let mut out = Vec::new();
    if net.is_integral() {
        out.extend([Algo::Bounded, Algo::Scaling]);
    }
    if net.k() == 3 {
        out.push(Algo::K3);
    }
    out
}

fn describe(v: &Violation) -> String {
    match v {
        Violation::Conservation { vertex, imbalance } => {
            format!("vertex {vertex}: inflow minus outflow is {imbalance}")
        }
        Violation::ArcCapacity { dart, by } => format!(
            "arc {}{}: over capacity by {by}",
            dart.edge(),
            if dart.is_forward() { "" } else { " reversed" }
        ),
        Violation::VertexCapacity { vertex, by } => {
            format!("vertex {vertex}: over capacity by {by}")
        }
    }
}

/// One line per solver; the bool is false on any disagreement.
fn compare_one(label: &str, net: &FlowNetwork) -> (bool, Vec<String>) {
    let oracle = match oracle_maxflow(net) {
        Ok(o) => o,
        Err(e) => return (false, vec![format!("{label}: oracle failed: {e}")]),
    };
    let mut ok = true;
    let mut lines = vec![format!("{label}: oracle {}", oracle.value)];
    for algo in applicable(net) {
        let line = match run_solver(net, algo) {
            Ok(sol) => {
                let feasible = check_feasible(net, &sol.flow).is_feasible();
                let agree = sol.value == oracle.value && feasible;
                ok &= agree;
                format!(
                    "{label}: {} {}{}",
                    algo_name(algo),
                    sol.value,
                    if agree {
                        ""
                    } else if feasible {
                        "  MISMATCH"
                    } else {
                        "  INFEASIBLE"
                    }
                )
            }
            Err(e) => {
                ok = false;
                format!("{label}: {} failed: {e}", algo_name(algo))
            }
        };
        lines.push(line);
    }
    (ok, lines)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { file, algo, flow } => {
            let inst = load(&file)?;
            let net = &inst.network;
            let algo = pick(net, algo);
            if algo == Algo::K3 && net.k() != 3 {
                return Err(bad_input(format!(
                    "k3 needs exactly three terminals, the instance has {}",
                    net.k()
                )));
            }
            if matches!(algo, Algo::Bounded | Algo::Scaling) && !net.is_integral() {
                return Err(bad_input(format!("{} needs integer capacities", algo_name(algo))));
            }
            let sol = run_solver(net, algo)?;
            println!("{}", sol.value);
            if let Some(path) = flow {
                emit(&path, &write_flow(net, &sol.flow))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { file, flow } => {
            let inst = load(&file)?;
            let o = oracle_maxflow(&inst.network)?;
            println!("{}", o.value);
            if let Some(path) = flow {
                emit(&path, &write_flow(&inst.network, &o.flow))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { file, flow } => {
            let inst = load(&file)?;
            let net = &inst.network;
            let f = input((|| {
                let text =
                    fs::read_to_string(&flow).with_context(|| format!("reading {}", flow.display()))?;
                parse_flow(net, &text).with_context(|| format!("parsing {}", flow.display()))
            })())?;
            let report = check_feasible(net, &f);
            if report.is_feasible() {
                println!("feasible, value {}", value(net, &f)?);
                Ok(ExitCode::SUCCESS)
            } else {
                println!("infeasible, value {}", value_unchecked(net, &f));
                for v in &report.violations {
                    println!("  {}", describe(v));
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::Gen { seed, params, out } => {
            let inst = input(generate(seed, &params.params()).map_err(Into::into))?;
            let text = write_instance(&inst);
            match out {
                Some(path) => emit(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare {
            files,
            seeds,
            first_seed,
            params,
            jobs,
        } => {
            let mut cases: Vec<(String, FlowNetwork)> = Vec::new();
            for path in &files {
                cases.push((path.display().to_string(), load(path)?.network));
            }
            if let Some(count) = seeds {
                let p = params.params();
                for seed in first_seed..first_seed + count {
                    let inst = input(generate(seed, &p).map_err(Into::into))?;
                    cases.push((format!("seed {seed}"), inst.network));
                }
            }
            if cases.is_empty() {
                return Err(bad_input("nothing to compare".into()));
            }
            let results = batch::map_with_jobs(&cases, jobs, |(label, net)| compare_one(label, net));
            let mut bad = 0;
            for (ok, lines) in &results {
                for line in lines {
                    println!("{line}");
                }
                bad += usize::from(!ok);
            }
            println!("{} instances, {bad} with disagreements", results.len());
            Ok(if bad == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
