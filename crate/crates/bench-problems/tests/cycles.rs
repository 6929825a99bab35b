use bench_problems::*;
use mg_components::SmootherKind;
use mg_ir::{Coloring, Expr, Op, Program};

#[derive(Default, Debug, PartialEq)]
struct Counts {
    smooth: usize,
    solve: usize,
    restrict: usize,
    prolong: usize,
}

fn walk(e: &Expr, c: &mut Counts) {
    match e {
        Expr::Field(_) => {}
        Expr::Residual { x, b, .. } => {
            walk(x, c);
            walk(b, c);
        }
        Expr::Apply { op, arg, .. } => {
            match op {
                Op::Smoother(_) => c.smooth += 1,
                Op::CoarseSolve(_) => c.solve += 1,
                Op::Restrict(_) => c.restrict += 1,
                Op::Prolong => c.prolong += 1,
            }
            walk(arg, c);
        }
        Expr::Update { c: corr, .. } => walk(corr, c),
    }
}

fn counts(p: &Program) -> Counts {
    let mut c = Counts::default();
    for i in &p.instrs {
        walk(&i.expr, &mut c);
    }
    c
}

/// Visits of level `l` in a cycle with `gamma` descents per level.
fn visits(gamma: usize, depth: usize) -> usize {
    (0..depth - 1).map(|l| gamma.pow(l as u32)).sum()
}

#[test]
fn v_and_w_patterns() {
    let v = reference_program(3, &CycleSpec::new(CycleKind::V, 1, 1)).unwrap();
    let w = reference_program(3, &CycleSpec::new(CycleKind::W, 1, 1)).unwrap();
    assert_eq!(counts(&v).solve, 1);
    assert_eq!(counts(&w).solve, 2);
    for depth in 2..=5 {
        for (kind, gamma) in [(CycleKind::V, 1), (CycleKind::W, 2)] {
            for (pre, post) in [(0, 1), (1, 1), (2, 1), (3, 3)] {
                let p = reference_program(depth, &CycleSpec::new(kind, pre, post)).unwrap();
                p.validate().unwrap();
                let c = counts(&p);
                let v = visits(gamma, depth);
                assert_eq!(c.smooth, (pre + post) * v, "{kind:?}({pre},{post}) depth {depth}");
                assert_eq!(c.solve, gamma.pow(depth as u32 - 2));
                assert_eq!(c.restrict, v);
                assert_eq!(c.prolong, v);
            }
        }
    }
}

#[test]
fn f_cycle_is_w_then_v() {
    // F(l) = F(l+1) followed by V(l+1), so one more coarse solve per extra level
    let solves = |d| counts(&reference_program(d, &CycleSpec::new(CycleKind::F, 1, 1)).unwrap()).solve;
    for d in 2..=6 {
        assert_eq!(solves(d), d - 1);
    }
    // with three levels it coincides with the W-cycle
    let f = reference_program(3, &CycleSpec::new(CycleKind::F, 1, 1)).unwrap();
    let w = reference_program(3, &CycleSpec::new(CycleKind::W, 1, 1)).unwrap();
    assert_eq!(f, w);
}

#[test]
fn two_grid_is_the_textbook_method() {
    let p = reference_program(2, &CycleSpec::new(CycleKind::V, 1, 1).omega_index(10)).unwrap();
    let want = "\
t_h_0 = x0_h + 0.6 * inv(D_h) (b_h - A_h x0_h)  # x_h
t_h_1 = t_h_0 + 1 * P_2h inv(A_2h) R_h (b_h - A_h t_h_0)  # x_h
t_h_2 = t_h_1 + 0.6 * inv(D_h) (b_h - A_h t_h_1)  # x_h
return t_h_2";
    assert_eq!(p.render().trim_end(), want);
}

#[test]
fn red_black_smoother_is_colored_jacobi() {
    let spec = CycleSpec::new(CycleKind::V, 2, 2).smoother(SmootherKind::RbGaussSeidel, Coloring::None);
    assert_eq!((spec.smoother.clone(), spec.coloring), (SmootherKind::Jacobi, Coloring::RedBlack));
    let p = reference_program(4, &spec).unwrap();
    let colored = p.instrs.iter().filter(|i| matches!(i.expr, Expr::Update { coloring: Coloring::RedBlack, .. })).count();
    assert_eq!(colored, 4 * 3);
}

#[test]
fn invalid_cycles_rejected() {
    assert!(reference_cycle(1, &CycleSpec::new(CycleKind::V, 1, 1)).is_err());
    assert!(reference_cycle(3, &CycleSpec::new(CycleKind::V, 1, 1).omega_index(37)).is_err());
    assert_eq!(CycleKind::parse("w"), Some(CycleKind::W));
}
