use crate::ir::{level_name, Coloring, Input, Ir, Node, NodeId, Op};
use mg_components::omega;
use std::collections::HashSet;
use std::fmt::Write;

/// Graphviz rendering of the subgraph reachable from `root`.
pub fn to_dot(ir: &Ir, root: NodeId) -> String {
    let mut out = String::from("digraph solver {\n  rankdir=BT;\n  node [fontname=\"monospace\"];\n");
    let mut seen = HashSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if !seen.insert(id) {
            continue;
        }
        let (label, shape) = match ir.node(id) {
            Node::Input { kind: Input::X0, level } => (format!("x0_{}", level_name(*level)), "box"),
            Node::Input { kind: Input::Rhs, level } => (format!("b_{}", level_name(*level)), "box"),
            Node::Residual { level, .. } => (format!("b - A_{} x", level_name(*level)), "ellipse"),
            Node::Apply { op, level, .. } => {
                let l = level_name(*level);
                let s = match op {
                    Op::Smoother(k) => format!("{}^-1 {l}", k.name()),
                    Op::Restrict(_) => format!("restrict {l}"),
                    Op::Prolong => format!("prolong {l}"),
                    Op::CoarseSolve(_) => format!("solve {l}"),
                };
                (s, "ellipse")
            }
            Node::Update { level, omega_index, coloring, .. } => {
                let rb = if *coloring == Coloring::RedBlack { " rb" } else { "" };
                (format!("x_{} + {} c{rb}", level_name(*level), omega(*omega_index)), "doubleoctagon")
            }
        };
        let _ = writeln!(out, "  n{} [label=\"{label}\", shape={shape}];", id.0);
        for c in ir.children(id) {
            let _ = writeln!(out, "  n{} -> n{};", c.0, id.0);
            stack.push(c);
        }
    }
    out.push_str("}\n");
    out
}
