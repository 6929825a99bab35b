//! Cycle diagrams: one node per smoothing step placed on its level's rank,
//! a filled black node per coarse solve, and coarse-grid corrections drawn
//! as upward edges labelled with their relaxation factor.

use std::fmt::Write;

use mg_components::omega;
use mg_ir::{level_name, Coloring, Expr, Op, Program};

enum Step {
    Smooth { level: usize, label: String },
    Solve { level: usize },
}

fn find_op(e: &Expr, pred: &impl Fn(&Op) -> bool) -> Option<(Op, usize)> {
    match e {
        Expr::Field(_) => None,
        Expr::Residual { x, b, .. } => find_op(x, pred).or_else(|| find_op(b, pred)),
        Expr::Apply { op, level, arg } => {
            if pred(op) {
                Some((op.clone(), *level))
            } else {
                find_op(arg, pred)
            }
        }
        Expr::Update { c, .. } => find_op(c, pred),
    }
}

pub fn cycle_diagram(p: &Program) -> String {
    // (step, label of the incoming edge)
    let mut steps: Vec<(Step, Option<String>)> = Vec::new();
    // corrections applied since the last drawn step
    let mut pending: Vec<String> = Vec::new();
    let take = |p: &mut Vec<String>| (!p.is_empty()).then(|| std::mem::take(p).join(", "));
    for ins in &p.instrs {
        let Expr::Update { level, c, omega_index, coloring, .. } = &ins.expr else { continue };
        let w = omega(*omega_index);
        if let Some((_, l)) = find_op(c, &|o| matches!(o, Op::CoarseSolve(_))) {
            steps.push((Step::Solve { level: l }, take(&mut pending)));
            pending.push(format!("{w}"));
        } else if find_op(c, &|o| matches!(o, Op::Prolong)).is_some() {
            pending.push(format!("{w}"));
        } else if let Some((Op::Smoother(kind), _)) = find_op(c, &|o| matches!(o, Op::Smoother(_))) {
            let name = match (kind.name().as_str(), coloring) {
                ("jacobi", Coloring::RedBlack) => "rbgs".to_string(),
                (n, Coloring::RedBlack) => format!("{n} rb"),
                (n, Coloring::None) => n.to_string(),
            };
            steps.push((Step::Smooth { level: *level, label: format!("{name} ω={w}") }, take(&mut pending)));
        }
    }
    let mut out = String::from("digraph cycle {\n  rankdir=TB;\n  node [fontname=\"Helvetica\"];\n");
    let mut by_level: Vec<Vec<usize>> = Vec::new();
    for (i, (step, _)) in steps.iter().enumerate() {
        let level = match step {
            Step::Smooth { level, label } => {
                let _ = writeln!(out, "  s{i} [label=\"{label}\", shape=circle];");
                *level
            }
            Step::Solve { level } => {
                let _ = writeln!(out, "  s{i} [label=\"\", shape=circle, style=filled, fillcolor=black, class=solve];");
                *level
            }
        };
        if by_level.len() <= level {
            by_level.resize(level + 1, vec![]);
        }
        by_level[level].push(i);
    }
    let pending = take(&mut pending);
    if pending.is_some() {
        let _ = writeln!(out, "  s{} [label=\"x\", shape=point];", steps.len());
        by_level.resize(by_level.len().max(1), vec![]);
        by_level[0].push(steps.len());
    }
    for (l, ids) in by_level.iter().enumerate() {
        let names: Vec<String> = ids.iter().map(|i| format!("s{i}")).collect();
        let _ = writeln!(out, "  subgraph level_{} {{ rank=same; {} }}", level_name(l), names.join("; "));
    }
    let edges = steps.iter().skip(1).map(|(_, l)| l.clone()).chain(pending.map(Some));
    for (i, label) in edges.enumerate() {
        match label {
            Some(w) => {
                let _ = writeln!(out, "  s{i} -> s{} [label=\"{w}\"];", i + 1);
            }
            None => {
                let _ = writeln!(out, "  s{i} -> s{};", i + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}
