use crate::init::gen_grow;
use crate::nsga2::{nsga2_fronts, select_elitist, select_parents};
use crate::variation::{crossover_subtree, mutate_subtree, VariationConfig};
use crate::{Fitness, GpError, Result};
use mg_grammar::{DerivationTree, PrimitiveSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

/// Stream index reserved for per-generation selection draws.
const SELECT_STREAM: u32 = u32::MAX;
const SURVIVE_STREAM: u32 = u32::MAX - 1;

/// Independent random stream for (run seed, generation, slot), so results do
/// not depend on how work is spread over threads.
pub fn rng_for(seed: u64, generation: usize, slot: u32) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((generation as u64) << 32) | slot as u64);
    r
}

/// Problem size and grammar active for a stretch of generations.
#[derive(Clone, Debug)]
pub struct Stage {
    pub level: usize,
    pub pset: Arc<PrimitiveSet>,
}

/// Scores a tree on a stage's problem. Must be safe to call from several threads.
pub trait Evaluator: Sync {
    fn evaluate(&self, tree: &DerivationTree, stage: &Stage) -> Fitness;
}

impl<F: Fn(&DerivationTree, &Stage) -> Fitness + Sync> Evaluator for F {
    fn evaluate(&self, tree: &DerivationTree, stage: &Stage) -> Fitness {
        self(tree, stage)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub mu: usize,
    pub lambda: usize,
    pub generations: usize,
    pub initial_population_size: usize,
    pub crossover_probability: f64,
    pub grow_depth: (usize, usize),
    pub variation: VariationConfig,
    /// Generations per schedule stage; 0 keeps the first stage forever.
    pub generalization_interval: usize,
    pub seed: u64,
    pub workers: usize,
    /// Replace variation by fresh random trees.
    pub random_search: bool,
    pub checkpoint_dir: Option<PathBuf>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mu: 256,
            lambda: 256,
            generations: 100,
            initial_population_size: 2048,
            crossover_probability: 2.0 / 3.0,
            grow_depth: (8, 30),
            variation: VariationConfig::default(),
            generalization_interval: 0,
            seed: 0,
            workers: 1,
            random_search: false,
            checkpoint_dir: None,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(GpError::Config(m.into()));
        if self.mu == 0 || self.lambda == 0 || self.initial_population_size == 0 {
            return bad("mu, lambda and the initial population size must be positive");
        }
        if self.initial_population_size < self.mu {
            return bad("initial population smaller than mu");
        }
        for p in [self.crossover_probability, self.variation.terminal_mutation_probability] {
            if !(0.0..=1.0).contains(&p) {
                return bad("probabilities must lie in [0, 1]");
            }
        }
        if self.grow_depth.0 > self.grow_depth.1 || self.variation.mutation_depth.0 > self.variation.mutation_depth.1 {
            return bad("depth interval is empty");
        }
        if self.workers == 0 {
            return bad("need at least one worker");
        }
        Ok(())
    }

    fn stage_index(&self, generation: usize, stages: usize) -> usize {
        match self.generalization_interval {
            0 => 0,
            m => (generation / m).min(stages - 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub tree: DerivationTree,
    pub key: String,
    pub fitness: Fitness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub key: String,
    pub generation: usize,
    pub level: usize,
    pub fitness: Fitness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub level: usize,
    pub evaluations: usize,
    pub front_size: usize,
    pub best: [f64; 2],
}

/// Everything needed to continue a run after `generation`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub seed: u64,
    pub generation: usize,
    pub stage: usize,
    pub level: usize,
    pub population: Vec<(String, Fitness)>,
    pub archive: Vec<ArchiveEntry>,
    pub seen: Vec<String>,
    pub evaluations: usize,
    pub history: Vec<GenerationStats>,
}

impl Checkpoint {
    pub fn path(dir: &Path, generation: usize) -> PathBuf {
        dir.join(format!("checkpoint_{generation:04}.json"))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let p = Self::path(dir, self.generation);
        let tmp = p.with_extension("json.tmp");
        std::fs::write(&tmp, serde_json::to_string(self)?)?;
        std::fs::rename(&tmp, &p)?;
        Ok(p)
    }

    /// Most recent checkpoint in `dir`, if any.
    pub fn latest(dir: &Path) -> Result<Option<PathBuf>> {
        if !dir.exists() {
            return Ok(None);
        }
        let mut best = None;
        for e in std::fs::read_dir(dir)? {
            let p = e?.path();
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.starts_with("checkpoint_") && name.ends_with(".json") && best.as_ref().is_none_or(|b| &p > b) {
                best = Some(p);
            }
        }
        Ok(best)
    }
}

#[derive(Clone, Debug)]
pub struct EvolveResult {
    pub population: Vec<Individual>,
    pub archive: Vec<ArchiveEntry>,
    pub evaluations: usize,
    pub history: Vec<GenerationStats>,
    pub final_level: usize,
}

impl EvolveResult {
    /// First non-dominated front of the final population.
    pub fn front(&self) -> Vec<&Individual> {
        let fits: Vec<Fitness> = self.population.iter().map(|i| i.fitness).collect();
        nsga2_fronts(&fits).first().map_or(vec![], |f| f.iter().map(|&i| &self.population[i]).collect())
    }

    /// Fitnesses measured on the initial random population.
    pub fn initial_fitnesses(&self) -> Vec<Fitness> {
        self.archive.iter().filter(|e| e.generation == 0).map(|e| e.fitness).collect()
    }
}

struct Run<'a, E: Evaluator> {
    cfg: &'a SearchConfig,
    evaluator: &'a E,
    pool: rayon::ThreadPool,
    seen: HashSet<String>,
    archive: Vec<ArchiveEntry>,
    evaluations: AtomicUsize,
}

impl<E: Evaluator> Run<'_, E> {
    fn evaluate(&self, trees: &[DerivationTree], stage: &Stage) -> Vec<Fitness> {
        let ev = self.evaluator;
        let count = &self.evaluations;
        self.pool.install(|| {
            trees
                .par_iter()
                .map(|t| {
                    count.fetch_add(1, Ordering::Relaxed);
                    ev.evaluate(t, stage).sanitized()
                })
                .collect()
        })
    }

    fn record(&mut self, inds: &[Individual], generation: usize, level: usize) {
        self.archive.extend(inds.iter().map(|i| ArchiveEntry {
            key: i.key.clone(),
            generation,
            level,
            fitness: i.fitness,
        }));
    }

    fn novel(&mut self, tree: &DerivationTree, pset: &PrimitiveSet) -> Option<String> {
        let key = tree.serialize(pset);
        self.seen.insert(key.clone()).then_some(key)
    }

    fn fresh(&mut self, pset: &PrimitiveSet, rng: &mut ChaCha8Rng) -> (DerivationTree, String) {
        let (lo, hi) = self.cfg.grow_depth;
        let mut last = None;
        for _ in 0..10_000 {
            let t = gen_grow(pset, lo, hi, self.cfg.variation.max_size, rng);
            if let Some(k) = self.novel(&t, pset) {
                return (t, k);
            }
            last = Some(t);
        }
        // grammar too small to keep producing new trees; accept a repeat
        let t = last.expect("at least one attempt");
        let k = t.serialize(pset);
        (t, k)
    }

    fn offspring(&mut self, parents: &[&DerivationTree], pair: usize, g: usize, pset: &PrimitiveSet) -> Vec<(DerivationTree, String)> {
        let cfg = self.cfg;
        let mut rng = rng_for(cfg.seed, g, pair as u32);
        let want = parents.len();
        let mut out = Vec::with_capacity(want);
        if !cfg.random_search {
            for _ in 0..64 {
                let kids: Vec<DerivationTree> = if want == 2 && rng.random::<f64>() < cfg.crossover_probability {
                    let (a, b, _) = crossover_subtree(parents[0], parents[1], pset, cfg.variation.max_size, &mut rng);
                    vec![a, b]
                } else {
                    parents.iter().map(|p| mutate_subtree(p, pset, &cfg.variation, &mut rng).0).collect()
                };
                for k in kids {
                    if out.len() < want {
                        if let Some(key) = self.novel(&k, pset) {
                            out.push((k, key));
                        }
                    }
                }
                if out.len() == want {
                    return out;
                }
            }
        }
        while out.len() < want {
            out.push(self.fresh(pset, &mut rng));
        }
        out
    }
}

fn stats(pop: &[Individual], generation: usize, level: usize, evaluations: usize) -> GenerationStats {
    let fits: Vec<Fitness> = pop.iter().map(|i| i.fitness).collect();
    let front_size = nsga2_fronts(&fits).first().map_or(0, |f| f.len());
    let best = [0, 1].map(|k| fits.iter().map(|f| f.objectives[k]).fold(f64::INFINITY, f64::min));
    GenerationStats { generation, level, evaluations, front_size, best }
}

/// (mu + lambda) search with NSGA-II survival. With several stages, the
/// whole population is re-evaluated whenever the schedule moves on.
pub fn evolve<E: Evaluator>(
    cfg: &SearchConfig,
    schedule: &[Stage],
    evaluator: &E,
    resume: Option<Checkpoint>,
    mut on_generation: impl FnMut(&GenerationStats),
) -> Result<EvolveResult> {
    cfg.validate()?;
    if schedule.is_empty() {
        return Err(GpError::Config("empty level schedule".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| GpError::Pool(e.to_string()))?;
    let mut run =
        Run { cfg, evaluator, pool, seen: HashSet::new(), archive: vec![], evaluations: AtomicUsize::new(0) };

    let (mut pop, mut stage_idx, start, mut history) = match resume {
        Some(ck) => {
            if ck.seed != cfg.seed {
                return Err(GpError::Config(format!("checkpoint seed {} differs from {}", ck.seed, cfg.seed)));
            }
            let pset = &schedule[ck.stage.min(schedule.len() - 1)].pset;
            let mut pop = Vec::with_capacity(ck.population.len());
            for (key, fitness) in ck.population {
                pop.push(Individual { tree: DerivationTree::parse(pset, &key)?, key, fitness });
            }
            run.seen = ck.seen.into_iter().collect();
            run.archive = ck.archive;
            run.evaluations.store(ck.evaluations, Ordering::Relaxed);
            (pop, ck.stage, ck.generation + 1, ck.history)
        }
        None => {
            let stage = &schedule[0];
            let mut trees = Vec::with_capacity(cfg.initial_population_size);
            for i in 0..cfg.initial_population_size {
                let mut rng = rng_for(cfg.seed, 0, i as u32);
                trees.push(run.fresh(&stage.pset, &mut rng));
            }
            let (trees, keys): (Vec<_>, Vec<_>) = trees.into_iter().unzip();
            let fits = run.evaluate(&trees, stage);
            let all: Vec<Individual> = trees
                .into_iter()
                .zip(keys)
                .zip(fits)
                .map(|((tree, key), fitness)| Individual { tree, key, fitness })
                .collect();
            run.record(&all, 0, stage.level);
            let pop = survive(&all, cfg.mu, &mut rng_for(cfg.seed, 0, SURVIVE_STREAM));
            let st = stats(&pop, 0, stage.level, run.evaluations.load(Ordering::Relaxed));
            on_generation(&st);
            let history = vec![st];
            checkpoint(&run, cfg, &pop, 0, 0, stage.level, &history)?;
            (pop, 0, 1, history)
        }
    };

    for g in start..=cfg.generations {
        let next_stage = cfg.stage_index(g, schedule.len());
        if next_stage != stage_idx {
            stage_idx = next_stage;
            let stage = &schedule[stage_idx];
            // trees keep their identity; only the measured fitness changes
            let mut trees = Vec::with_capacity(pop.len());
            for ind in &pop {
                trees.push(DerivationTree::parse(&stage.pset, &ind.key)?);
            }
            let fits = run.evaluate(&trees, stage);
            for ((ind, t), f) in pop.iter_mut().zip(trees).zip(fits) {
                ind.tree = t;
                ind.fitness = f;
            }
            run.record(&pop, g, stage.level);
        }
        let stage = &schedule[stage_idx];
        let fits: Vec<Fitness> = pop.iter().map(|i| i.fitness).collect();
        let parents = select_parents(&fits, cfg.lambda, &mut rng_for(cfg.seed, g, SELECT_STREAM));
        let mut kids = Vec::with_capacity(cfg.lambda);
        for (pair, chunk) in parents.chunks(2).enumerate() {
            let ps: Vec<&DerivationTree> = chunk.iter().map(|&i| &pop[i].tree).collect();
            kids.extend(run.offspring(&ps, pair, g, &stage.pset));
        }
        let (trees, keys): (Vec<_>, Vec<_>) = kids.into_iter().unzip();
        let kfits = run.evaluate(&trees, stage);
        let children: Vec<Individual> = trees
            .into_iter()
            .zip(keys)
            .zip(kfits)
            .map(|((tree, key), fitness)| Individual { tree, key, fitness })
            .collect();
        run.record(&children, g, stage.level);
        let mut union = pop;
        union.extend(children);
        pop = survive(&union, cfg.mu, &mut rng_for(cfg.seed, g, SURVIVE_STREAM));
        let st = stats(&pop, g, stage.level, run.evaluations.load(Ordering::Relaxed));
        on_generation(&st);
        history.push(st);
        checkpoint(&run, cfg, &pop, g, stage_idx, stage.level, &history)?;
    }

    Ok(EvolveResult {
        population: pop,
        evaluations: run.evaluations.load(Ordering::Relaxed),
        archive: run.archive,
        history,
        final_level: schedule[stage_idx].level,
    })
}

fn survive(all: &[Individual], mu: usize, rng: &mut ChaCha8Rng) -> Vec<Individual> {
    let fits: Vec<Fitness> = all.iter().map(|i| i.fitness).collect();
    select_elitist(&fits, mu, rng).into_iter().map(|i| all[i].clone()).collect()
}

fn checkpoint<E: Evaluator>(
    run: &Run<'_, E>,
    cfg: &SearchConfig,
    pop: &[Individual],
    generation: usize,
    stage: usize,
    level: usize,
    history: &[GenerationStats],
) -> Result<()> {
    let Some(dir) = &cfg.checkpoint_dir else { return Ok(()) };
    let mut seen: Vec<String> = run.seen.iter().cloned().collect();
    seen.sort();
    Checkpoint {
        seed: cfg.seed,
        generation,
        stage,
        level,
        population: pop.iter().map(|i| (i.key.clone(), i.fitness)).collect(),
        archive: run.archive.clone(),
        seen,
        evaluations: run.evaluations.load(Ordering::Relaxed),
        history: history.to_vec(),
    }
    .save(dir)?;
    Ok(())
}
