use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mgsynth::{cmd_bench, cmd_evaluate, cmd_evolve, cmd_render, cmd_tree, emit, CliError, Manifest, TreeFile};

/// Default worker count when `--workers` is absent.
const WORKERS_ENV: &str = "MGSYNTH_WORKERS";

#[derive(Parser)]
#[command(name = "mgsynth", version, about = "Evolve, evaluate and inspect multigrid solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the evolutionary search and write its artifacts.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        generations: Option<usize>,
        #[arg(long)]
        mu: Option<usize>,
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(long)]
        initial_population: Option<usize>,
        /// Generations between level increases.
        #[arg(long)]
        interval: Option<usize>,
        /// Front members re-evaluated into best.csv.
        #[arg(long)]
        top: Option<usize>,
        /// Continue from the newest checkpoint in `<out>/checkpoints`.
        #[arg(long)]
        resume: bool,
        #[arg(long, short)]
        quiet: bool,
    },
    /// Solve with a stored tree and print one report row.
    Evaluate {
        tree: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run reference cycles and print a table.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Comma separated, e.g. `V(1,0),V(1,1)`.
        #[arg(long, default_value = "V(1,1)")]
        cycles: String,
        #[arg(long, default_value = "rbgs")]
        smoother: String,
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Print the cycle diagram of a stored tree in DOT.
    Render {
        tree: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Print the expression graph instead of the cycle diagram.
        #[arg(long)]
        graph: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a reference cycle as a tree file.
    Tree {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "V(1,1)")]
        cycle: String,
        #[arg(long, default_value = "rbgs")]
        smoother: String,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML run manifest.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Finest levels, comma separated; the last one is used outside `evolve`.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    wavenumber: Option<f64>,
    /// `wall` or `model`.
    #[arg(long)]
    timing: Option<String>,
    #[arg(long)]
    max_iterations: Option<usize>,
}

impl Common {
    fn manifest(&self) -> Result<Manifest, CliError> {
        let mut m = match &self.config {
            Some(p) => Manifest::load(p)?,
            None => Manifest::default(),
        };
        if let Some(p) = &self.problem {
            m.problem.name = p.clone();
        }
        if let Some(l) = &self.levels {
            m.problem.levels = l.clone();
        }
        m.problem.epsilon = self.epsilon.or(m.problem.epsilon);
        m.problem.wavenumber = self.wavenumber.or(m.problem.wavenumber);
        if let Some(s) = self.seed {
            m.search.seed = s;
        }
        match self.workers {
            Some(w) => m.search.workers = w,
            None if self.config.is_none() => {
                if let Ok(v) = std::env::var(WORKERS_ENV) {
                    m.search.workers =
                        v.parse().map_err(|_| CliError::Config(format!("{WORKERS_ENV}=`{v}` is not a count")))?;
                }
            }
            None => {}
        }
        if let Some(t) = &self.timing {
            m.evaluation.timing = t.clone();
        }
        m.evaluation.max_iterations = self.max_iterations.or(m.evaluation.max_iterations);
        Ok(m)
    }

    fn level(&self) -> Option<usize> {
        self.levels.as_ref().and_then(|l| l.last().copied())
    }
}

/// Smoother weight used by the reference tables when none is given.
fn default_omega(m: &Manifest) -> f64 {
    if m.problem.name == "poisson2d" {
        1.15
    } else {
        1.25
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Evolve { common, out, generations, mu, lambda, initial_population, interval, top, resume, quiet } => {
            let mut m = common.manifest()?;
            let s = &mut m.search;
            s.generations = generations.unwrap_or(s.generations);
            s.mu = mu.unwrap_or(s.mu);
            s.lambda = lambda.unwrap_or(s.lambda);
            s.initial_population_size = initial_population.unwrap_or(s.initial_population_size);
            s.generalization_interval = interval.unwrap_or(s.generalization_interval);
            s.top = top.unwrap_or(s.top);
            let outcome = cmd_evolve(&m, &out, resume, |g| {
                if !quiet {
                    eprintln!(
                        "generation {:>4}  level {}  evaluations {:>6}  front {:>3}  best t {:.3e}  best objective {:.4}",
                        g.generation, g.level, g.evaluations, g.front_size, g.best[0], g.best[1]
                    );
                }
            })?;
            if !quiet {
                eprintln!("wrote {} front members to {}", outcome.front.len(), out.join("front.csv").display());
            }
            Ok(())
        }
        Command::Evaluate { tree, common } => {
            let m = common.manifest()?;
            let (_, row) = cmd_evaluate(&m, &TreeFile::load(&tree)?, common.level())?;
            emit(None, &format!("{}\n{row}\n", mg_evaluator::CSV_HEADER))
        }
        Command::Bench { common, cycles, smoother, omega } => {
            let m = common.manifest()?;
            let list: Vec<String> = split_cycles(&cycles);
            let w = omega.unwrap_or_else(|| default_omega(&m));
            let (_, table) = cmd_bench(&m, common.level(), &list, &smoother, w)?;
            emit(None, &table)
        }
        Command::Render { tree, common, graph, out } => {
            let m = common.manifest()?;
            let dot = cmd_render(&m, &TreeFile::load(&tree)?, graph)?;
            emit(out.as_deref(), &dot)
        }
        Command::Tree { common, cycle, smoother, omega, out } => {
            let m = common.manifest()?;
            let w = omega.unwrap_or_else(|| default_omega(&m));
            let file = cmd_tree(&m, common.level(), &cycle, &smoother, w)?;
            emit(out.as_deref(), &file.render())
        }
    }
}

/// `V(1,0),V(1,1)` splits on commas outside parentheses.
fn split_cycles(s: &str) -> Vec<String> {
    let (mut out, mut cur, mut depth) = (vec![], String::new(), 0);
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter().map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mgsynth: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
