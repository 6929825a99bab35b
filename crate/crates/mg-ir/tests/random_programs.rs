mod common;

use common::Dense;
use mg_components::{CoarseSolverKind, CoarseSolverSpec, RestrictionKind, SmootherKind};
use mg_ir::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

const LEVELS: usize = 4;

/// Random walk over the transitions that always ends in a finished state.
fn random_method(rng: &mut ChaCha8Rng, ir: &mut Ir) -> State {
    let mut s = ir.initial_state();
    let steps = rng.random_range(0..40);
    for _ in 0..steps {
        s = step(rng, ir, s);
    }
    loop {
        if s.level == 0 && s.c.is_none() && rng.random_bool(0.5) {
            return s;
        }
        s = match s.c {
            Some(_) => ir.update(rng.random_range(0..37), Coloring::None, s).unwrap(),
            None if s.predecessor.is_some() => ir.cgc(s).unwrap(),
            None => step(rng, ir, s),
        };
    }
}

fn step(rng: &mut ChaCha8Rng, ir: &mut Ir, s: State) -> State {
    let w = rng.random_range(0..37);
    match s.c {
        None => {
            if s.predecessor.is_some() && rng.random_bool(0.3) {
                ir.cgc(s).unwrap()
            } else {
                ir.residual(s).unwrap()
            }
        }
        Some(_) => {
            let lowest = s.level + 2 >= LEVELS;
            match rng.random_range(0..5) {
                0 | 1 => {
                    let local = matches!(ir.node(s.c.unwrap()), Node::Residual { .. });
                    let s = ir.apply(Op::Smoother(SmootherKind::Jacobi), s).unwrap();
                    let col = if local && rng.random_bool(0.5) { Coloring::RedBlack } else { Coloring::None };
                    ir.update(w, col, s).unwrap()
                }
                2 if !lowest => {
                    let s = ir.apply(Op::Restrict(RestrictionKind::FullWeighting), s).unwrap();
                    ir.coarsening(s).unwrap()
                }
                3 if s.level + 1 < LEVELS => {
                    let spec = CoarseSolverSpec::new(CoarseSolverKind::Cg);
                    let s = ir.coarse_grid_solver(spec, RestrictionKind::FullWeighting, s).unwrap();
                    ir.update(w, Coloring::None, s).unwrap()
                }
                _ => ir.update(w, Coloring::None, s).unwrap(),
            }
        }
    }
}

fn reachable(ir: &Ir, root: NodeId) -> HashSet<NodeId> {
    let mut seen = HashSet::new();
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        if seen.insert(n) {
            stack.extend(ir.children(n));
        }
    }
    seen
}

#[test]
fn program_matches_recursive_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (x0, b) = {
        let n = common::size(LEVELS, 0);
        (
            nalgebra::DVector::from_fn(n, |i, _| (i as f64 * 1.3).cos()),
            nalgebra::DVector::from_fn(n, |i, _| 10.0 * (i as f64 * 0.4).sin()),
        )
    };
    let mut total = 0;
    for _ in 0..100 {
        let mut ir = Ir::new();
        let s = random_method(&mut rng, &mut ir);
        let p = generate_program(&ir, &s).unwrap();
        p.validate().unwrap();

        // one assignment per distinct solution and right-hand side
        let live = reachable(&ir, s.x);
        let updates = live.iter().filter(|&&n| matches!(ir.node(n), Node::Update { .. })).count();
        let rhs: HashSet<_> = live
            .iter()
            .filter_map(|&n| match ir.node(n) {
                Node::Residual { b, .. } if !matches!(ir.node(*b), Node::Input { .. }) => Some(*b),
                _ => None,
            })
            .collect();
        assert_eq!(p.instrs.len(), updates + rhs.len());
        total += p.instrs.len();

        // levels: restriction goes down one, prolongation up one
        for &n in &live {
            if let Node::Apply { op, level, arg } = ir.node(n) {
                assert_eq!(ir.level(*arg), *level);
                match op {
                    Op::Restrict(_) => assert_eq!(ir.level(n), level + 1),
                    Op::Prolong => assert_eq!(ir.level(n) + 1, *level),
                    _ => assert_eq!(ir.level(n), *level),
                }
            }
        }
        assert_eq!(ir.level(s.x), 0);

        let got = execute(&p, &mut Dense::new(LEVELS), &x0, &b).unwrap();
        let again = execute(&p, &mut Dense::new(LEVELS), &x0, &b).unwrap();
        assert_eq!(got, again);
        let oracle = eval_recursive(&ir, s.x, &mut Dense::new(LEVELS), &x0, &b).unwrap();
        let scale = oracle.norm().max(1.0);
        assert!((&got - &oracle).norm() <= 1e-12 * scale, "{}", p.render());
    }
    assert!(total > 200, "walks too short: {total}");
}
