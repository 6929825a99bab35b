use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use bench_problems::{build, level_for_wavenumber, reference_program, AnyProblem, CycleKind, CycleSpec, ProblemConfig};
use gp_engine::{evolve, Checkpoint, EvolveResult, Fitness, GenerationStats, Stage};
use mg_components::{block_shapes, omega, CoarseSolverSpec, SmootherKind, OMEGA_COUNT};
use mg_evaluator::{
    csv_row, cycle_tree, rank_metric, Objectives, Prepared, ProblemEvaluator, RunOptions, SolveReport, Timing, CSV_HEADER,
};
use mg_grammar::{compile, compile_program, generate_grammar, DerivationTree, GrammarConfig, PrimitiveSet};
use mg_ir::{to_dot, Coloring};

use crate::{cycle_diagram, CliError, Manifest};

/// Column names of the Pareto-front CSV.
pub const FRONT_HEADER: [&str; 5] = ["key", "level", "time_per_iteration", "objective", "rank_metric"];
pub const BENCH_HEADER: [&str; 6] = ["cycle", "iterations", "time_per_iteration", "convergence_factor", "converged", "rank_metric"];

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

fn config<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

fn problem_config(m: &Manifest, level: Option<usize>) -> ProblemConfig {
    ProblemConfig {
        name: m.problem.name.clone(),
        l_max: level.map(|l| l as u32),
        wavenumber: if level.is_some() { None } else { m.problem.wavenumber },
        depth: None,
    }
}

/// Schedule levels, falling back to the problem's default size.
pub fn schedule_levels(m: &Manifest) -> Result<Vec<usize>, CliError> {
    if !m.problem.levels.is_empty() {
        return Ok(m.problem.levels.clone());
    }
    if let (true, Some(k)) = (m.is_helmholtz(), m.problem.wavenumber) {
        return Ok(vec![level_for_wavenumber(k).map_err(config)? as usize]);
    }
    Ok(vec![build(&problem_config(m, None)).map_err(config)?.l_max() as usize])
}

fn load_problem(m: &Manifest, level: usize) -> Result<AnyProblem, CliError> {
    let mut p = build(&problem_config(m, Some(level))).map_err(config)?;
    if let Some(e) = m.problem.epsilon {
        p.set_epsilon(e);
    }
    Ok(p)
}

fn coarse_spec(p: &AnyProblem) -> CoarseSolverSpec {
    match p {
        AnyProblem::Real(p) => p.coarse_spec(),
        AnyProblem::Complex(p) => p.coarse_spec(),
    }
}

fn grammar(m: &Manifest, p: &AnyProblem, smoothers: Vec<SmootherKind>) -> Result<PrimitiveSet, CliError> {
    let mut cfg = GrammarConfig::new(p.depth(), smoothers);
    cfg.early_solve = m.grammar.early_solve;
    if let Some(o) = &m.grammar.omegas {
        cfg.omegas = o.clone();
    }
    cfg.coarse_solver = coarse_spec(p);
    generate_grammar(&cfg).map_err(config)
}

/// Every smoother the grammar knows, so any stored tree parses.
fn full_menu(dim: usize) -> Vec<SmootherKind> {
    let mut v = vec![SmootherKind::Jacobi, SmootherKind::RbGaussSeidel, SmootherKind::Collective];
    v.extend(block_shapes(dim, 6).into_iter().map(SmootherKind::Block));
    v
}

fn run_options(m: &Manifest) -> Result<RunOptions, CliError> {
    Ok(RunOptions::new(m.problem.epsilon.unwrap_or(0.0), m.max_iterations())
        .repeats(m.evaluation.repeats)
        .timing(m.timing()?))
}

/// One row of the Pareto front with its estimated solving time.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontRow {
    pub key: String,
    pub level: usize,
    pub fitness: Fitness,
    pub rank: f64,
}

#[derive(Debug)]
pub struct EvolveOutcome {
    pub result: EvolveResult,
    pub front: Vec<FrontRow>,
    /// Rank metric of every initial individual, on the first schedule level.
    pub initial_ranks: Vec<f64>,
    pub out: PathBuf,
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(runtime)?;
    w.write_record(header).map_err(runtime)?;
    for r in rows {
        w.write_record(&r).map_err(runtime)?;
    }
    w.flush().map_err(runtime)
}

/// Runs the search and writes `front.csv`, `population.csv`, `archive.csv`,
/// `history.csv`, per-generation checkpoints and, with `search.top > 0`,
/// `best.csv` with full reports of the most promising front members.
pub fn cmd_evolve(
    m: &Manifest,
    out: &Path,
    resume: bool,
    mut progress: impl FnMut(&GenerationStats),
) -> Result<EvolveOutcome, CliError> {
    m.validate()?;
    let levels = schedule_levels(m)?;
    let problems: Vec<AnyProblem> = levels.iter().map(|&l| load_problem(m, l)).collect::<Result<_, _>>()?;
    let depth = problems[0].depth();
    if problems.iter().any(|p| p.depth() != depth) {
        return Err(CliError::Config(format!("levels {levels:?} do not share a hierarchy depth")));
    }
    let pset = Arc::new(grammar(m, &problems[0], m.smoothers()?)?);
    let schedule: Vec<Stage> = levels.iter().map(|&level| Stage { level, pset: pset.clone() }).collect();
    let objectives = m.objectives()?;
    let evaluator = ProblemEvaluator::new(&problem_config(m, None), &levels, objectives, run_options(m)?)
        .map_err(config)?
        .with_epsilon(m.problem.epsilon);

    let ckpt_dir = out.join("checkpoints");
    fs::create_dir_all(&ckpt_dir).map_err(runtime)?;
    let mut search = m.search_config();
    search.checkpoint_dir = Some(ckpt_dir.clone());
    let start = match resume {
        true => Checkpoint::latest(&ckpt_dir).map_err(runtime)?.map(|p| Checkpoint::load(&p)).transpose().map_err(runtime)?,
        false => None,
    };
    let result = evolve(&search, &schedule, &evaluator, start, &mut progress).map_err(runtime)?;

    let eps = |level| evaluator.epsilon(level).unwrap_or(1e-12);
    let final_level = result.final_level;
    let mut front: Vec<FrontRow> = result
        .front()
        .into_iter()
        .map(|i| FrontRow {
            key: i.key.clone(),
            level: final_level,
            fitness: i.fitness,
            rank: rank_metric(&i.fitness, objectives, eps(final_level)),
        })
        .collect();
    front.sort_by(|a, b| a.rank.total_cmp(&b.rank).then_with(|| a.key.cmp(&b.key)));
    let initial_ranks = result.initial_fitnesses().iter().map(|f| rank_metric(f, objectives, eps(levels[0]))).collect();

    let row = |key: &str, level: usize, f: &Fitness, rank: f64| {
        vec![key.to_string(), level.to_string(), fmt(f.objectives[0]), fmt(f.objectives[1]), fmt(rank)]
    };
    write_csv(&out.join("front.csv"), &FRONT_HEADER, front.iter().map(|r| row(&r.key, r.level, &r.fitness, r.rank)))?;
    write_csv(
        &out.join("population.csv"),
        &FRONT_HEADER,
        result.population.iter().map(|i| row(&i.key, final_level, &i.fitness, rank_metric(&i.fitness, objectives, eps(final_level)))),
    )?;
    write_csv(
        &out.join("archive.csv"),
        &["key", "generation", "level", "time_per_iteration", "objective"],
        result.archive.iter().map(|a| {
            vec![a.key.clone(), a.generation.to_string(), a.level.to_string(), fmt(a.fitness.objectives[0]), fmt(a.fitness.objectives[1])]
        }),
    )?;
    write_csv(
        &out.join("history.csv"),
        &["generation", "level", "evaluations", "front_size", "best_time", "best_objective"],
        result.history.iter().map(|h| {
            vec![
                h.generation.to_string(),
                h.level.to_string(),
                h.evaluations.to_string(),
                h.front_size.to_string(),
                fmt(h.best[0]),
                fmt(h.best[1]),
            ]
        }),
    )?;
    if m.search.top > 0 {
        let mut text = format!("{CSV_HEADER}\n");
        let stage = Stage { level: final_level, pset: pset.clone() };
        for r in front.iter().filter(|r| !r.fitness.is_failed()).take(m.search.top) {
            let tree = DerivationTree::parse(&pset, &r.key).map_err(runtime)?;
            if let Some(rep) = evaluator.report(&tree, &stage).map_err(runtime)? {
                let f = mg_evaluator::fitness_of(&rep, objectives);
                text.push_str(&csv_row(&r.key, final_level, &rep, rank_metric(&f, objectives, eps(final_level))));
                text.push('\n');
            }
        }
        fs::write(out.join("best.csv"), text).map_err(runtime)?;
    }
    Ok(EvolveOutcome { result, front, initial_ranks, out: out.to_path_buf() })
}

/// A stored derivation tree with the context needed to check it.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeFile {
    pub problem: Option<String>,
    pub depth: Option<usize>,
    pub tree: String,
}

impl TreeFile {
    /// `# key: value` header lines followed by the token string.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut f = TreeFile { problem: None, depth: None, tree: String::new() };
        let mut body = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(h) = line.strip_prefix('#') {
                let Some((k, v)) = h.split_once(':') else { continue };
                match k.trim() {
                    "problem" => f.problem = Some(v.trim().to_string()),
                    "depth" => f.depth = Some(v.trim().parse().map_err(|_| CliError::Config(format!("bad depth `{}`", v.trim())))?),
                    _ => {}
                }
            } else {
                body.push(line);
            }
        }
        f.tree = body.join(" ");
        if f.tree.is_empty() {
            return Err(CliError::Config("tree file holds no tokens".into()));
        }
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        if let Some(p) = &self.problem {
            s += &format!("# problem: {p}\n");
        }
        if let Some(d) = self.depth {
            s += &format!("# depth: {d}\n");
        }
        s + &self.tree + "\n"
    }
}

fn parse_tree(m: &Manifest, p: &AnyProblem, file: &TreeFile) -> Result<(PrimitiveSet, DerivationTree), CliError> {
    if let Some(d) = file.depth {
        if d != p.depth() {
            return Err(CliError::Config(format!("tree was built for {d} levels, the problem has {}", p.depth())));
        }
    }
    let pset = grammar(m, p, full_menu(p.dim()))?;
    let tree = DerivationTree::parse(&pset, &file.tree).map_err(config)?;
    Ok((pset, tree))
}

/// Runs a stored tree on the problem's finest level `level` and returns the
/// report together with its CSV row.
pub fn cmd_evaluate(m: &Manifest, file: &TreeFile, level: Option<usize>) -> Result<(SolveReport, String), CliError> {
    m.validate()?;
    let level = match level {
        Some(l) => l,
        None => *schedule_levels(m)?.last().expect("nonempty"),
    };
    let p = load_problem(m, level)?;
    let (pset, tree) = parse_tree(m, &p, file)?;
    let program = compile_program(&tree, &pset).map_err(config)?;
    let eps = p.epsilon();
    let prepared = Prepared::new(p).map_err(runtime)?;
    let opts = RunOptions { epsilon: eps, ..run_options(m)? };
    let report = prepared.solve(&program, &opts).map_err(runtime)?;
    let objectives = m.objectives()?;
    let rank = rank_metric(&mg_evaluator::fitness_of(&report, objectives), objectives, eps);
    let row = csv_row(&file.tree, level, &report, rank);
    Ok((report, row))
}

/// `V(1,1)`, `w(2,0)`, `F(1,1)`.
pub fn parse_cycle(s: &str) -> Result<(CycleKind, usize, usize), CliError> {
    let bad = || CliError::Config(format!("cannot read cycle `{s}`, expected e.g. V(1,1)"));
    let s = s.trim();
    let kind = CycleKind::parse(s.get(..1).ok_or_else(bad)?).ok_or_else(bad)?;
    let inner = s[1..].trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    Ok((kind, a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// Index of a relaxation factor in the table.
pub fn omega_index(w: f64) -> Result<usize, CliError> {
    (0..OMEGA_COUNT)
        .find(|&i| (omega(i) - w).abs() < 1e-9)
        .ok_or_else(|| CliError::Config(format!("ω = {w} is not in the table 0.1, 0.15, ..., 1.9")))
}

/// Cycle description from command-line pieces.
pub fn cycle_spec(cycle: &str, smoother: &str, w: f64, p: &AnyProblem) -> Result<CycleSpec, CliError> {
    let (kind, pre, post) = parse_cycle(cycle)?;
    let sm = SmootherKind::parse(smoother).ok_or_else(|| CliError::Config(format!("unknown smoother `{smoother}`")))?;
    Ok(CycleSpec::new(kind, pre, post).smoother(sm, Coloring::None).omega_index(omega_index(w)?).coarse(coarse_spec(p)))
}

/// Reference cycles on one problem instance; CSV text with one row per cycle.
pub fn cmd_bench(
    m: &Manifest,
    level: Option<usize>,
    cycles: &[String],
    smoother: &str,
    w: f64,
) -> Result<(Vec<SolveReport>, String), CliError> {
    m.validate()?;
    let level = match level {
        Some(l) => l,
        None => *schedule_levels(m)?.last().expect("nonempty"),
    };
    let p = load_problem(m, level)?;
    let eps = p.epsilon();
    let objectives = m.objectives()?;
    let specs: Vec<CycleSpec> = cycles.iter().map(|c| cycle_spec(c, smoother, w, &p)).collect::<Result<_, _>>()?;
    let depth = p.depth();
    let prepared = Prepared::new(p).map_err(runtime)?;
    let opts = RunOptions { epsilon: eps, ..run_options(m)? };
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(BENCH_HEADER).map_err(runtime)?;
    let mut reports = vec![];
    for (label, spec) in cycles.iter().zip(&specs) {
        let program = reference_program(depth, spec).map_err(runtime)?;
        let r = prepared.solve(&program, &opts).map_err(runtime)?;
        let rank = rank_metric(&mg_evaluator::fitness_of(&r, objectives), objectives, eps);
        w.write_record([
            label.trim().to_string(),
            r.iterations.to_string(),
            fmt(r.time_per_iteration),
            fmt(r.convergence_factor),
            r.converged.to_string(),
            fmt(rank),
        ])
        .map_err(runtime)?;
        reports.push(r);
    }
    let text = String::from_utf8(w.into_inner().map_err(runtime)?).map_err(runtime)?;
    Ok((reports, text))
}

/// Cycle diagram of a stored tree, or the raw expression graph with `raw`.
pub fn cmd_render(m: &Manifest, file: &TreeFile, raw: bool) -> Result<String, CliError> {
    let mut m = m.clone();
    if let Some(p) = &file.problem {
        m.problem.name = p.clone();
    }
    m.validate()?;
    // the grammar only depends on the depth, so any instance of that depth will do
    let depth = file.depth.unwrap_or(5);
    let p = load_problem(&m, depth.max(2))?;
    let (pset, tree) = parse_tree(&m, &p, file)?;
    if raw {
        let (ir, state) = compile(&tree, &pset).map_err(config)?;
        Ok(to_dot(&ir, state.x))
    } else {
        Ok(cycle_diagram(&compile_program(&tree, &pset).map_err(config)?))
    }
}

/// Tree file spelling out a reference cycle for the problem's hierarchy.
pub fn cmd_tree(m: &Manifest, level: Option<usize>, cycle: &str, smoother: &str, w: f64) -> Result<TreeFile, CliError> {
    m.validate()?;
    let level = match level {
        Some(l) => l,
        None => *schedule_levels(m)?.last().expect("nonempty"),
    };
    let p = load_problem(m, level)?;
    let spec = cycle_spec(cycle, smoother, w, &p)?;
    Ok(TreeFile { problem: Some(m.problem.name.clone()), depth: Some(p.depth()), tree: cycle_tree(p.depth(), &spec) })
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(runtime),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(runtime),
    }
}

pub fn timing_name(t: Timing) -> &'static str {
    match t {
        Timing::Wall => "wall",
        Timing::Model => "model",
    }
}

pub fn objectives_name(o: Objectives) -> &'static str {
    match o {
        Objectives::TimeRho => "t,rho",
        Objectives::TimeIterations => "t,n",
    }
}
