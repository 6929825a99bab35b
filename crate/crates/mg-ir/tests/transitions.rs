mod common;

use common::{red, size, Dense};
use mg_components::{CoarseSolverKind, CoarseSolverSpec, RestrictionKind, SmootherKind};
use mg_ir::*;
use nalgebra::DVector;

const FW: RestrictionKind = RestrictionKind::FullWeighting;
const W1: usize = 18;
const W06: usize = 10;

fn cgs() -> CoarseSolverSpec {
    CoarseSolverSpec::new(CoarseSolverKind::Cg)
}

fn jacobi() -> Op {
    Op::Smoother(SmootherKind::Jacobi)
}

fn inputs(levels: usize) -> (DVector<f64>, DVector<f64>) {
    let n = size(levels, 0);
    let x0 = DVector::from_fn(n, |i, _| ((i * 37 % 11) as f64 - 5.0) * 0.1);
    let b = DVector::from_fn(n, |i, _| (i as f64 * 0.7).sin() * 50.0);
    (x0, b)
}

/// Smooth on 2h after an exact solve on 4h, then correct the finest level.
fn three_grid(ir: &mut Ir) -> State {
    let s = ir.initial_state();
    let s = ir.residual(s).unwrap();
    let s = ir.apply(Op::Restrict(FW), s).unwrap();
    let s = ir.coarsening(s).unwrap();
    let s = ir.coarse_grid_solver(cgs(), FW, s).unwrap();
    let s = ir.update(W1, Coloring::None, s).unwrap();
    let s = ir.residual(s).unwrap();
    let s = ir.apply(jacobi(), s).unwrap();
    let s = ir.update(W06, Coloring::None, s).unwrap();
    let s = ir.cgc(s).unwrap();
    ir.update(W1, Coloring::None, s).unwrap()
}

#[test]
fn three_grid_example_generates_four_instructions() {
    let mut ir = Ir::new();
    let s = three_grid(&mut ir);
    let p = generate_program(&ir, &s).unwrap();
    assert_eq!(p.instrs.len(), 4);
    let expected = "\
t_2h_0 = R_h (b_h - A_h x0_h)  # b_2h
t_2h_1 = x0_2h + 1 * P_4h inv(A_4h) R_2h (t_2h_0 - A_2h x0_2h)  # x_2h
t_2h_2 = t_2h_1 + 0.6 * inv(D_2h) (t_2h_0 - A_2h t_2h_1)  # x_2h
t_h_0 = x0_h + 1 * P_2h t_2h_2  # x_h
return t_h_0
";
    assert_eq!(p.render(), expected);

    // dense oracle of the same three-grid method
    let d = Dense::new(5);
    let (x0, b) = inputs(5);
    let b2 = d.r(0) * (&b - d.a(0) * &x0);
    let x2 = d.p(1) * d.a(2).lu().solve(&(d.r(1) * &b2)).unwrap();
    let x2 = &x2 + 0.6 * (&b2 - d.a(1) * &x2).component_div(&d.a(1).diagonal());
    let oracle = &x0 + d.p(0) * x2;
    let got = execute(&p, &mut Dense::new(5), &x0, &b).unwrap();
    assert!((got - oracle).norm() < 1e-10);
}

#[test]
fn initial_state_returns_guess() {
    let mut ir = Ir::new();
    let s = ir.initial_state();
    let p = generate_program(&ir, &s).unwrap();
    assert!(p.instrs.is_empty());
    assert_eq!(p.output, Field::X0(0));
    let (x0, b) = inputs(3);
    assert_eq!(execute(&p, &mut Dense::new(3), &x0, &b).unwrap(), x0);
}

#[test]
fn precondition_errors() {
    let mut ir = Ir::new();
    let s = ir.initial_state();
    assert_eq!(ir.apply(jacobi(), s.clone()), Err(IrError::CorrectionMissing));
    assert_eq!(ir.update(W1, Coloring::None, s.clone()), Err(IrError::CorrectionMissing));
    assert_eq!(ir.cgc(s.clone()), Err(IrError::NoPredecessor));
    assert_eq!(ir.coarsening(s.clone()), Err(IrError::CorrectionMissing));
    let r = ir.residual(s).unwrap();
    assert_eq!(ir.residual(r.clone()), Err(IrError::CorrectionPresent));
    assert_eq!(ir.coarsening(r.clone()), Err(IrError::LevelMismatch { expected: 1, found: 0 }));
    assert_eq!(ir.apply(Op::Prolong, r.clone()), Err(IrError::ProlongFromFinest));
    assert_eq!(generate_program(&ir, &r), Err(IrError::NotFinished));
    let c = ir.apply(Op::Restrict(FW), r).unwrap();
    assert_eq!(ir.update(W1, Coloring::None, c.clone()), Err(IrError::LevelMismatch { expected: 0, found: 1 }));
    let coarse = ir.coarsening(c).unwrap();
    assert_eq!(ir.cgc(coarse.clone()), Err(IrError::CorrectionPresent));
    let u = ir.update(W1, Coloring::None, coarse).unwrap();
    assert_eq!(generate_program(&ir, &u), Err(IrError::NotFinished));
}

#[test]
fn residual_of_exact_solution_vanishes() {
    let mut ir = Ir::new();
    let s = ir.initial_state();
    let r = ir.residual(s).unwrap();
    let d = Dense::new(4);
    let b = inputs(4).1;
    let exact = d.a(0).lu().solve(&b).unwrap();
    let v = eval_recursive(&ir, r.c.unwrap(), &mut Dense::new(4), &exact, &b).unwrap();
    assert!(v.norm() < 1e-9 * b.norm());
}

#[test]
fn jacobi_correction_and_update() {
    let mut ir = Ir::new();
    let s = ir.initial_state();
    let s = ir.residual(s).unwrap();
    let s = ir.apply(jacobi(), s).unwrap();
    assert_eq!(ir.level(s.c.unwrap()), 0);
    let c = s.c.unwrap();
    let u = ir.update(W1, Coloring::None, s).unwrap();
    let d = Dense::new(4);
    let (x0, b) = inputs(4);
    let expect_c = (&b - d.a(0) * &x0).component_div(&d.a(0).diagonal());
    let got = eval_recursive(&ir, c, &mut Dense::new(4), &x0, &b).unwrap();
    assert!((got - &expect_c).norm() < 1e-12);
    let p = generate_program(&ir, &u).unwrap();
    let got = execute(&p, &mut Dense::new(4), &x0, &b).unwrap();
    assert!((got - (&x0 + &expect_c)).norm() < 1e-12);
}

#[test]
fn red_black_update_is_gauss_seidel() {
    let mut ir = Ir::new();
    let s = ir.initial_state();
    let s = ir.residual(s).unwrap();
    let s = ir.apply(jacobi(), s).unwrap();
    let s = ir.update(W1, Coloring::RedBlack, s).unwrap();
    let p = generate_program(&ir, &s).unwrap();
    let (x0, b) = inputs(3);
    let a = Dense::new(3).a(0);
    let mut x = x0.clone();
    for colour in [true, false] {
        let x_old = x.clone();
        for i in (0..x.len()).filter(|&i| red(i) == colour) {
            let s: f64 = (0..x.len()).filter(|&j| j != i).map(|j| a[(i, j)] * x_old[j]).sum();
            x[i] = (b[i] - s) / a[(i, i)];
        }
    }
    let got = execute(&p, &mut Dense::new(3), &x0, &b).unwrap();
    assert!((&got - &x).norm() < 1e-12);
    let rec = eval_recursive(&ir, s.x, &mut Dense::new(3), &x0, &b).unwrap();
    assert!((rec - x).norm() < 1e-12);
}

#[test]
fn coarsening_and_cgc_move_one_level() {
    let mut ir = Ir::new();
    let s = ir.initial_state();
    let s = ir.residual(s).unwrap();
    let s = ir.apply(Op::Restrict(FW), s).unwrap();
    assert_eq!(ir.level(s.c.unwrap()), 1);
    let rhs = s.c.unwrap();
    let c = ir.coarsening(s).unwrap();
    assert_eq!((c.level, c.depth()), (1, 1));
    assert_eq!(c.b, rhs);
    // with a zero initial guess the first coarse residual is the rhs itself
    let (x0, b) = inputs(4);
    let v = eval_recursive(&ir, c.c.unwrap(), &mut Dense::new(4), &x0, &b).unwrap();
    let w = eval_recursive(&ir, rhs, &mut Dense::new(4), &x0, &b).unwrap();
    assert_eq!(v, w);
    // zero coarse solution: cgc then update leaves x untouched
    let mut ir2 = Ir::new();
    let s = ir2.initial_state();
    let s = ir2.residual(s).unwrap();
    let s = ir2.apply(Op::Restrict(FW), s).unwrap();
    let s = ir2.coarsening(s).unwrap();
    let s = State { c: None, ..s };
    let s = ir2.cgc(s).unwrap();
    assert_eq!((s.level, s.depth()), (0, 0));
    let s = ir2.update(W1, Coloring::None, s).unwrap();
    let p = generate_program(&ir2, &s).unwrap();
    assert_eq!(execute(&p, &mut Dense::new(4), &x0, &b).unwrap(), x0);
}

#[test]
fn two_grid_step_reduces_residual() {
    // 7 points coarsened to 3
    let mut ir = Ir::new();
    let s = ir.initial_state();
    let s = ir.residual(s).unwrap();
    let s = ir.coarse_grid_solver(cgs(), FW, s).unwrap();
    let s = ir.update(W1, Coloring::None, s).unwrap();
    let p = generate_program(&ir, &s).unwrap();
    let d = Dense::new(3);
    let (x0, b) = inputs(3);
    let x1 = execute(&p, &mut Dense::new(3), &x0, &b).unwrap();
    let r0 = &b - d.a(0) * &x0;
    let oracle = &x0 + d.p(0) * d.a(1).lu().solve(&(d.r(0) * &r0)).unwrap();
    assert!((&x1 - oracle).norm() < 1e-10);
    assert!((&b - d.a(0) * &x1).norm() < r0.norm());
}

#[test]
fn red_black_must_be_local() {
    let mut ir = Ir::new();
    let s = ir.initial_state();
    let s = ir.residual(s).unwrap();
    let s = ir.coarse_grid_solver(cgs(), FW, s).unwrap();
    let s = ir.update(W1, Coloring::RedBlack, s).unwrap();
    assert!(matches!(generate_program(&ir, &s), Err(IrError::Malformed(_))));
}

#[test]
fn dot_lists_reachable_nodes() {
    let mut ir = Ir::new();
    let s = three_grid(&mut ir);
    let dot = to_dot(&ir, s.x);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("x0_h") && dot.contains("solve 4h") && dot.contains("0.6"));
    assert_eq!(dot.matches("shape=doubleoctagon").count(), 3);
}

#[test]
fn level_names() {
    assert_eq!(level_name(0), "h");
    assert_eq!(level_name(1), "2h");
    assert_eq!(level_name(4), "16h");
}
