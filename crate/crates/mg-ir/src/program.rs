use crate::ir::{level_name, Coloring, Input, Ir, Node, NodeId, Op, State};
use crate::{IrError, Result};
use mg_components::{omega, SmootherKind};
use std::collections::{HashMap, HashSet};
use std::fmt;

/// A named grid field. Temporaries are single-assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// Initial guess; zero on every level but the finest.
    X0(usize),
    /// Finest right-hand side.
    Rhs,
    Temp { level: usize, id: usize },
}

impl Field {
    pub fn level(&self) -> usize {
        match self {
            Field::X0(l) => *l,
            Field::Rhs => 0,
            Field::Temp { level, .. } => *level,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::X0(l) => write!(f, "x0_{}", level_name(*l)),
            Field::Rhs => write!(f, "b_h"),
            Field::Temp { level, id } => write!(f, "t_{}_{}", level_name(*level), id),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Field(Field),
    Residual { level: usize, x: Box<Expr>, b: Box<Expr> },
    Apply { op: Op, level: usize, arg: Box<Expr> },
    Update { level: usize, x: Field, c: Box<Expr>, omega_index: usize, coloring: Coloring },
}

impl Expr {
    pub fn visit_fields(&self, f: &mut impl FnMut(Field)) {
        match self {
            Expr::Field(x) => f(*x),
            Expr::Residual { x, b, .. } => {
                x.visit_fields(f);
                b.visit_fields(f);
            }
            Expr::Apply { arg, .. } => arg.visit_fields(f),
            Expr::Update { x, c, .. } => {
                f(*x);
                c.visit_fields(f);
            }
        }
    }
}

fn op_name(op: &Op, level: usize) -> String {
    let l = level_name(level);
    match op {
        Op::Smoother(SmootherKind::Jacobi | SmootherKind::RbGaussSeidel) => format!("inv(D_{l})"),
        Op::Smoother(SmootherKind::Collective) => format!("inv(Dc_{l})"),
        Op::Smoother(SmootherKind::Block(s)) => {
            let s: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            format!("inv(D{}_{l})", s.join("x"))
        }
        Op::Restrict(_) => format!("R_{l}"),
        Op::Prolong => format!("P_{l}"),
        Op::CoarseSolve(_) => format!("inv(A_{l})"),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Field(x) => write!(f, "{x}"),
            Expr::Residual { level, x, b } => write!(f, "({b} - A_{} {x})", level_name(*level)),
            Expr::Apply { op, level, arg } => write!(f, "{} {arg}", op_name(op, *level)),
            Expr::Update { x, c, omega_index, coloring, .. } => {
                write!(f, "{x} + {} * {c}", omega(*omega_index))?;
                if *coloring == Coloring::RedBlack {
                    write!(f, " [red-black]")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Solution,
    Rhs,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instr {
    pub dst: Field,
    pub role: Role,
    pub expr: Expr,
}

/// Straight-line solver: one assignment per approximate solution and
/// right-hand side, in execution order.
#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub instrs: Vec<Instr>,
    pub output: Field,
    /// Temporaries that are dead after instruction i.
    pub release: Vec<Vec<Field>>,
}

impl Program {
    /// Every field read has been written before or is an input.
    pub fn validate(&self) -> Result<()> {
        let mut written = HashSet::new();
        for ins in &self.instrs {
            let mut bad = None;
            ins.expr.visit_fields(&mut |f| {
                if matches!(f, Field::Temp { .. }) && !written.contains(&f) {
                    bad = Some(f);
                }
            });
            if let Some(f) = bad {
                return Err(IrError::Malformed(format!("{f} read before assignment")));
            }
            if !written.insert(ins.dst) {
                return Err(IrError::Malformed(format!("{} assigned twice", ins.dst)));
            }
        }
        match self.output {
            Field::Temp { .. } if !written.contains(&self.output) => Err(IrError::Malformed("output never assigned".into())),
            _ => Ok(()),
        }
    }

    /// Plain-text listing, one assignment per line.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for ins in &self.instrs {
            let role = match ins.role {
                Role::Solution => "x",
                Role::Rhs => "b",
            };
            s += &format!("{} = {}  # {role}_{}\n", ins.dst, ins.expr, level_name(ins.dst.level()));
        }
        s += &format!("return {}\n", self.output);
        s
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

struct Gen<'a> {
    ir: &'a Ir,
    rhs_nodes: HashSet<NodeId>,
    fields: HashMap<NodeId, Field>,
    counters: Vec<usize>,
    instrs: Vec<Instr>,
}

impl Gen<'_> {
    fn is_field(&self, id: NodeId) -> bool {
        matches!(self.ir.node(id), Node::Input { .. } | Node::Update { .. }) || self.rhs_nodes.contains(&id)
    }

    fn field(&mut self, id: NodeId) -> Result<Field> {
        if let Some(f) = self.fields.get(&id) {
            return Ok(*f);
        }
        let (expr, role) = match self.ir.node(id) {
            Node::Input { kind: Input::X0, level } => return Ok(self.memo(id, Field::X0(*level))),
            Node::Input { kind: Input::Rhs, level: 0 } => return Ok(self.memo(id, Field::Rhs)),
            Node::Input { kind: Input::Rhs, level } => {
                return Err(IrError::Malformed(format!("input right-hand side on level {level}")))
            }
            &Node::Update { level, x, c, omega_index, coloring } => {
                let xf = self.field(x)?;
                if coloring == Coloring::RedBlack {
                    self.check_local(c, x)?;
                }
                let c = Box::new(self.inline(c)?);
                (Expr::Update { level, x: xf, c, omega_index, coloring }, Role::Solution)
            }
            _ => (self.inline_node(id)?, Role::Rhs),
        };
        let level = self.ir.level(id);
        if self.counters.len() <= level {
            self.counters.resize(level + 1, 0);
        }
        let f = Field::Temp { level, id: self.counters[level] };
        self.counters[level] += 1;
        self.instrs.push(Instr { dst: f, role, expr });
        Ok(self.memo(id, f))
    }

    fn memo(&mut self, id: NodeId, f: Field) -> Field {
        self.fields.insert(id, f);
        f
    }

    fn inline(&mut self, id: NodeId) -> Result<Expr> {
        if self.is_field(id) {
            Ok(Expr::Field(self.field(id)?))
        } else {
            self.inline_node(id)
        }
    }

    fn inline_node(&mut self, id: NodeId) -> Result<Expr> {
        Ok(match self.ir.node(id) {
            &Node::Residual { level, x, b } => {
                Expr::Residual { level, x: Box::new(self.inline(x)?), b: Box::new(self.inline(b)?) }
            }
            Node::Apply { op, level, arg } => {
                let (op, level, arg) = (op.clone(), *level, *arg);
                Expr::Apply { op, level, arg: Box::new(self.inline(arg)?) }
            }
            n => return Err(IrError::Malformed(format!("unexpected node {n:?}"))),
        })
    }

    /// A colour-wise update re-evaluates its correction with a partially
    /// updated x, so the correction may read no other solution field.
    fn check_local(&self, c: NodeId, x: NodeId) -> Result<()> {
        let mut stack = vec![c];
        while let Some(n) = stack.pop() {
            if n == x || self.rhs_nodes.contains(&n) {
                continue;
            }
            match self.ir.node(n) {
                Node::Update { .. } => {
                    return Err(IrError::Malformed("red-black correction reads another solution".into()))
                }
                Node::Apply { op: Op::CoarseSolve(_) | Op::Restrict(_) | Op::Prolong, .. } => {
                    return Err(IrError::Malformed("red-black correction must be a local smoother".into()))
                }
                _ => stack.extend(self.ir.children(n)),
            }
        }
        Ok(())
    }
}

/// Lowers the graph behind a finished finest-level state into a program that
/// computes every approximate solution and right-hand side exactly once.
pub fn generate_program(ir: &Ir, state: &State) -> Result<Program> {
    if state.level != 0 || state.c.is_some() || state.predecessor.is_some() {
        return Err(IrError::NotFinished);
    }
    let mut rhs_nodes = HashSet::new();
    for n in ir.nodes() {
        if let Node::Residual { b, .. } = n {
            if !matches!(ir.node(*b), Node::Input { .. }) {
                rhs_nodes.insert(*b);
            }
        }
    }
    let mut g = Gen { ir, rhs_nodes, fields: HashMap::new(), counters: vec![], instrs: vec![] };
    let output = g.field(state.x)?;
    if output.level() != 0 {
        return Err(IrError::Malformed("final solution is not on the finest level".into()));
    }
    let instrs = g.instrs;
    let mut last = HashMap::new();
    for (i, ins) in instrs.iter().enumerate() {
        ins.expr.visit_fields(&mut |f| {
            last.insert(f, i);
        });
    }
    let mut release = vec![vec![]; instrs.len()];
    for (f, i) in last {
        if matches!(f, Field::Temp { .. }) && f != output {
            release[i].push(f);
        }
    }
    for r in &mut release {
        r.sort();
    }
    let p = Program { instrs, output, release };
    p.validate()?;
    Ok(p)
}
