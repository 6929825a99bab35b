use gp_engine::*;
use mg_components::SmootherKind;
use mg_grammar::{generate_grammar, GrammarConfig, SymbolKind};
use std::collections::HashSet;
use std::sync::{Arc, Mutex};

fn stage(level: usize) -> Stage {
    let g = GrammarConfig::new(3, vec![SmootherKind::Jacobi, SmootherKind::RbGaussSeidel]);
    Stage { level, pset: Arc::new(generate_grammar(&g).unwrap()) }
}

/// Cheap stand-in objective: small trees with many smoothing steps,
/// shifted by the level so that stages differ.
fn toy(t: &DerivationTree, s: &Stage) -> Fitness {
    let smooth = t.count_kind(&s.pset, |k| matches!(k, SymbolKind::Smooth { .. })) as f64;
    let w: usize = t
        .nodes
        .iter()
        .filter_map(|&n| match s.pset.symbol(n).kind {
            SymbolKind::Omega(w) => Some(w),
            _ => None,
        })
        .sum();
    Fitness::new(t.len() as f64 + s.level as f64, 1.0 / (1.0 + smooth) + (w % 7) as f64 * 0.01)
}

fn cfg(seed: u64) -> SearchConfig {
    SearchConfig {
        mu: 12,
        lambda: 12,
        generations: 6,
        initial_population_size: 40,
        grow_depth: (4, 12),
        seed,
        ..Default::default()
    }
}

fn keys(r: &EvolveResult) -> Vec<(String, Fitness)> {
    r.population.iter().map(|i| (i.key.clone(), i.fitness)).collect()
}

#[test]
fn zero_generations_selects_from_initial_population() {
    let c = SearchConfig { generations: 0, ..cfg(1) };
    let r = evolve(&c, &[stage(5)], &toy, None, |_| {}).unwrap();
    assert_eq!(r.population.len(), 12);
    assert_eq!(r.evaluations, 40);
    assert_eq!(r.initial_fitnesses().len(), 40);
    assert_eq!(r.history.len(), 1);
}

#[test]
fn no_tree_is_evaluated_twice() {
    let seen = Mutex::new(HashSet::new());
    let calls = Mutex::new(0usize);
    let ev = |t: &DerivationTree, s: &Stage| {
        *calls.lock().unwrap() += 1;
        assert!(seen.lock().unwrap().insert(t.serialize(&s.pset)), "duplicate evaluation");
        toy(t, s)
    };
    let c = SearchConfig { generations: 10, ..cfg(2) };
    let r = evolve(&c, &[stage(5)], &ev, None, |_| {}).unwrap();
    assert_eq!(r.evaluations, 40 + 10 * 12);
    assert_eq!(*calls.lock().unwrap(), r.evaluations);
    assert_eq!(r.archive.len(), r.evaluations);
}

#[test]
fn runs_are_reproducible_across_worker_counts() {
    let a = evolve(&cfg(3), &[stage(5)], &toy, None, |_| {}).unwrap();
    let b = evolve(&cfg(3), &[stage(5)], &toy, None, |_| {}).unwrap();
    let c = evolve(&SearchConfig { workers: 4, ..cfg(3) }, &[stage(5)], &toy, None, |_| {}).unwrap();
    assert_eq!(keys(&a), keys(&b));
    assert_eq!(keys(&a), keys(&c));
    assert_eq!(a.archive, c.archive);
    let d = evolve(&cfg(4), &[stage(5)], &toy, None, |_| {}).unwrap();
    assert_ne!(keys(&a), keys(&d));
}

#[test]
fn elitism_never_loses_the_best() {
    let c = SearchConfig { generations: 12, ..cfg(5) };
    let r = evolve(&c, &[stage(5)], &toy, None, |_| {}).unwrap();
    for w in r.history.windows(2) {
        assert!(w[1].best[0] <= w[0].best[0] && w[1].best[1] <= w[0].best[1], "{w:?}");
    }
}

#[test]
fn checkpoint_restart_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let c = SearchConfig { checkpoint_dir: Some(dir.path().to_path_buf()), ..cfg(6) };
    let full = evolve(&c, &[stage(5)], &toy, None, |_| {}).unwrap();
    assert_eq!(Checkpoint::latest(dir.path()).unwrap().unwrap(), Checkpoint::path(dir.path(), 6));
    let ck = Checkpoint::load(&Checkpoint::path(dir.path(), 3)).unwrap();
    assert_eq!(ck.generation, 3);
    let other = tempfile::tempdir().unwrap();
    let c2 = SearchConfig { checkpoint_dir: Some(other.path().to_path_buf()), ..cfg(6) };
    let resumed = evolve(&c2, &[stage(5)], &toy, Some(ck), |_| {}).unwrap();
    assert_eq!(keys(&full), keys(&resumed));
    assert_eq!(full.archive, resumed.archive);
    assert_eq!(full.evaluations, resumed.evaluations);
    let a = std::fs::read(Checkpoint::path(dir.path(), 6)).unwrap();
    let b = std::fs::read(Checkpoint::path(other.path(), 6)).unwrap();
    assert_eq!(a, b);
    // a checkpoint from another seed is refused
    let ck = Checkpoint::load(&Checkpoint::path(dir.path(), 3)).unwrap();
    assert!(evolve(&cfg(7), &[stage(5)], &toy, Some(ck), |_| {}).is_err());
}

#[test]
fn schedule_reevaluates_population_at_each_boundary() {
    let per_level = Mutex::new(vec![0usize; 8]);
    let ev = |t: &DerivationTree, s: &Stage| {
        per_level.lock().unwrap()[s.level] += 1;
        toy(t, s)
    };
    let c = SearchConfig { generations: 7, generalization_interval: 3, ..cfg(8) };
    let mut levels = vec![];
    let r = evolve(&c, &[stage(5), stage(6), stage(7)], &ev, None, |s| levels.push(s.level)).unwrap();
    assert_eq!(levels, vec![5, 5, 5, 6, 6, 6, 7, 7]);
    let counts = per_level.lock().unwrap().clone();
    // level 5: initial population and generations 1-2
    assert_eq!(counts[5], 40 + 2 * 12);
    // later levels: one full re-evaluation of mu plus lambda per generation
    assert_eq!(counts[6], 12 + 3 * 12);
    assert_eq!(counts[7], 12 + 2 * 12);
    assert_eq!(r.final_level, 7);
    assert!(r.population.iter().all(|i| i.fitness.objectives[0] >= 7.0));
}

#[test]
fn random_search_mode() {
    let c = SearchConfig { random_search: true, ..cfg(9) };
    let r = evolve(&c, &[stage(5)], &toy, None, |_| {}).unwrap();
    assert_eq!(r.evaluations, 40 + 6 * 12);
    let distinct: HashSet<_> = r.archive.iter().map(|e| &e.key).collect();
    assert_eq!(distinct.len(), r.archive.len());
}

#[test]
fn failed_evaluations_become_sentinels() {
    let ev = |t: &DerivationTree, s: &Stage| {
        if t.len() % 2 == 0 {
            Fitness::new(f64::NAN, 1.0)
        } else {
            toy(t, s)
        }
    };
    let r = evolve(&cfg(10), &[stage(5)], &ev, None, |_| {}).unwrap();
    assert!(r.archive.iter().all(|e| e.fitness.objectives.iter().all(|v| v.is_finite())));
    assert!(r.archive.iter().any(|e| e.fitness == Fitness::failed()));
}

#[test]
fn invalid_configs_are_rejected() {
    for c in [
        SearchConfig { mu: 0, ..cfg(1) },
        SearchConfig { crossover_probability: 1.5, ..cfg(1) },
        SearchConfig { initial_population_size: 4, ..cfg(1) },
        SearchConfig { workers: 0, ..cfg(1) },
        SearchConfig { grow_depth: (5, 2), ..cfg(1) },
    ] {
        assert!(evolve(&c, &[stage(5)], &toy, None, |_| {}).is_err());
    }
    assert!(evolve(&cfg(1), &[], &toy, None, |_| {}).is_err());
}
