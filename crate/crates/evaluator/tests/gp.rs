//! Derivation trees scored through the evaluator.

use std::sync::Arc;

use bench_problems::*;
use gp_engine::{Evaluator, Stage};
use grid_core::GridFunction;
use mg_components::SmootherKind;
use mg_evaluator::*;
use mg_grammar::{compile_program, generate_grammar, DerivationTree, GrammarConfig, PrimitiveSet};
use mg_ir::{execute, level_name, Coloring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Token string of a textbook cycle with Jacobi/red-black smoothing.
fn handwritten_tree(depth: usize, gamma: usize, pre: usize, post: usize, w: usize, rb: bool) -> String {
    fn residual(l: usize, s: String) -> String {
        format!("residual_{} {s}", level_name(l))
    }
    fn smooth(l: usize, w: usize, rb: bool, c: String) -> String {
        let n = level_name(l);
        format!("smooth_{n} w{w} {} jacobi_{n} {c}", if rb { "rb" } else { "none" })
    }
    // `state` is an s_l term, or a c_l term when `is_c`
    fn cycle(l: usize, d: usize, g: usize, nu: (usize, usize), w: usize, rb: bool, state: String, is_c: bool) -> String {
        let mut c = if is_c { Some(state.clone()) } else { None };
        let mut s = state;
        for _ in 0..nu.0 {
            let cc = c.take().unwrap_or_else(|| residual(l, s.clone()));
            s = smooth(l, w, rb, cc);
        }
        let cc = c.take().unwrap_or_else(|| residual(l, s.clone()));
        if l + 2 == d {
            s = format!("cgs_{} w18 {cc}", level_name(l));
        } else {
            let mut inner = format!("coarsening_{} {cc}", level_name(l + 1));
            let mut inner_is_c = true;
            for _ in 0..g {
                inner = cycle(l + 1, d, g, nu, w, rb, inner, inner_is_c);
                inner_is_c = false;
            }
            s = format!("cgc_{} w18 {inner}", level_name(l));
        }
        for _ in 0..nu.1 {
            s = smooth(l, w, rb, residual(l, s));
        }
        s
    }
    cycle(0, depth, gamma, (pre, post), w, rb, "x0_h".into(), false)
}

fn pset(depth: usize) -> Arc<PrimitiveSet> {
    let cfg = GrammarConfig::new(depth, vec![SmootherKind::Jacobi, SmootherKind::RbGaussSeidel]);
    Arc::new(generate_grammar(&cfg).unwrap())
}

#[test]
fn trees_match_reference_cycles() {
    let p = poisson_2d(6).unwrap();
    let ps = pset(p.depth());
    let h = Hierarchy::new(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (gamma, kind, pre, post) in [(1, CycleKind::V, 1, 1), (1, CycleKind::V, 2, 2), (2, CycleKind::W, 1, 1)] {
        let text = handwritten_tree(p.depth(), gamma, pre, post, 21, true);
        let tree = DerivationTree::parse(&ps, &text).unwrap();
        let from_tree = compile_program(&tree, &ps).unwrap();
        let spec = CycleSpec::new(kind, pre, post).smoother(SmootherKind::RbGaussSeidel, Coloring::None).omega_index(21);
        assert_eq!(mg_evaluator::cycle_tree(p.depth(), &spec), text);
        let reference = reference_program(p.depth(), &spec).unwrap();
        for _ in 0..3 {
            let x0 = GridFunction::from_fn(&p.rhs.grid, 1, |_, _| rng.random_range(-1.0..1.0));
            let b = GridFunction::from_fn(&p.rhs.grid, 1, |_, _| rng.random_range(-1.0..1.0));
            let u = execute(&from_tree, &mut h.session(), &x0, &b).unwrap();
            let v = execute(&reference, &mut h.session(), &x0, &b).unwrap();
            let mut d = u.clone();
            d.axpy(-1.0, &v);
            assert!(d.norm() <= 1e-12 * v.norm(), "{kind:?}({pre},{post})");
        }
    }
}

#[test]
fn evaluator_scores_trees() {
    let ev = ProblemEvaluator::new(
        &ProblemConfig::named("poisson2d"),
        &[5, 6],
        Objectives::TimeRho,
        RunOptions::new(1e-12, 30).timing(Timing::Model),
    )
    .unwrap();
    let ps = pset(5);
    let tree = DerivationTree::parse(&ps, &handwritten_tree(5, 1, 2, 2, 21, true)).unwrap();
    for level in [5, 6] {
        let stage = Stage { level, pset: ps.clone() };
        let f = ev.evaluate(&tree, &stage);
        assert!(!f.is_failed(), "{f:?}");
        assert!(f.objectives[1] < 0.1);
        assert_eq!(f, ev.evaluate(&tree, &stage));
    }
    // a lone smoothing step misses the 30-iteration budget
    let weak = DerivationTree::parse(&ps, "cgs_h w18 residual_h x0_h").unwrap();
    let f = ev.evaluate(&weak, &Stage { level: 5, pset: ps.clone() });
    assert!(f.is_failed());
    // unknown stage level
    assert!(ev.evaluate(&tree, &Stage { level: 9, pset: ps }).is_failed());
}

#[test]
fn helmholtz_scored_as_preconditioner() {
    let ev = ProblemEvaluator::new(
        &ProblemConfig::named("helmholtz2d"),
        &[5],
        Objectives::TimeIterations,
        RunOptions::new(1e-7, 2000).timing(Timing::Model),
    )
    .unwrap();
    let ps = Arc::new(
        generate_grammar(&GrammarConfig {
            coarse_solver: mg_components::CoarseSolverSpec::new(mg_components::CoarseSolverKind::Bicgstab),
            ..GrammarConfig::new(5, vec![SmootherKind::Jacobi, SmootherKind::RbGaussSeidel])
        })
        .unwrap(),
    );
    let tree = DerivationTree::parse(&ps, &handwritten_tree(5, 1, 0, 1, 23, true)).unwrap();
    let f = ev.evaluate(&tree, &Stage { level: 5, pset: ps });
    assert!(!f.is_failed());
    assert_eq!(f.objectives[1].fract(), 0.0);
}

#[test]
fn library_cycle_trees_compile_to_reference_cycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for depth in 2..=4 {
        let p = poisson_2d(5).unwrap().truncate(depth).unwrap();
        let ps = pset(depth);
        let h = Hierarchy::new(&p).unwrap();
        for kind in [CycleKind::V, CycleKind::W, CycleKind::F] {
            for (smoother, coloring) in [(SmootherKind::Jacobi, Coloring::None), (SmootherKind::Jacobi, Coloring::RedBlack)] {
                let spec = CycleSpec::new(kind, 1, 2).smoother(smoother, coloring).omega_index(14);
                let tree = DerivationTree::parse(&ps, &mg_evaluator::cycle_tree(depth, &spec)).unwrap();
                let from_tree = compile_program(&tree, &ps).unwrap();
                let reference = reference_program(depth, &spec).unwrap();
                let x0 = GridFunction::from_fn(&p.rhs.grid, 1, |_, _| rng.random_range(-1.0..1.0));
                let u = execute(&from_tree, &mut h.session(), &x0, &p.rhs).unwrap();
                let v = execute(&reference, &mut h.session(), &x0, &p.rhs).unwrap();
                let mut d = u.clone();
                d.axpy(-1.0, &v);
                assert!(d.norm() <= 1e-12 * v.norm(), "{kind:?} depth {depth}");
            }
        }
    }
}
