use crate::{IrError, Result};
use mg_components::{CoarseSolverSpec, RestrictionKind, SmootherKind};

/// Index into the node arena of an [`Ir`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Input {
    /// Initial guess. On coarse levels this is the zero field.
    X0,
    /// Right-hand side of the finest level.
    Rhs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Coloring {
    #[default]
    None,
    RedBlack,
}

/// A linear operator that can be applied to a correction term.
#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    /// Inverse of the smoother's splitting matrix.
    Smoother(SmootherKind),
    Restrict(RestrictionKind),
    Prolong,
    /// Approximate inverse of the system operator by a Krylov solve.
    CoarseSolve(CoarseSolverSpec),
}

impl Op {
    /// Level of the result when applied on `level`.
    pub fn target(&self, level: usize) -> Result<usize> {
        match self {
            Op::Restrict(_) => Ok(level + 1),
            Op::Prolong => level.checked_sub(1).ok_or(IrError::ProlongFromFinest),
            _ => Ok(level),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Input { kind: Input, level: usize },
    /// b - A x
    Residual { level: usize, x: NodeId, b: NodeId },
    /// op applied to a term living on `level`.
    Apply { op: Op, level: usize, arg: NodeId },
    /// x + omega * c, possibly per colour.
    Update { level: usize, x: NodeId, c: NodeId, omega_index: usize, coloring: Coloring },
}

/// Spells a level the way grid spacings are usually written: h, 2h, 4h, ...
pub fn level_name(level: usize) -> String {
    if level == 0 {
        "h".into()
    } else {
        format!("{}h", 1u64 << level)
    }
}

/// Quadruple (x, b, c, predecessor) on one level.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub x: NodeId,
    pub b: NodeId,
    pub c: Option<NodeId>,
    pub predecessor: Option<Box<State>>,
    pub level: usize,
}

impl State {
    pub fn depth(&self) -> usize {
        self.predecessor.as_ref().map_or(0, |p| p.depth() + 1)
    }
}

/// Arena holding the expression DAG. Transitions append nodes; nothing is
/// ever removed, so a `NodeId` stays valid for the arena's lifetime.
#[derive(Clone, Debug, Default)]
pub struct Ir {
    nodes: Vec<Node>,
}

impl Ir {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        NodeId(self.nodes.len() as u32 - 1)
    }

    /// Grid level on which the node's value lives.
    pub fn level(&self, id: NodeId) -> usize {
        match self.node(id) {
            Node::Input { level, .. } | Node::Residual { level, .. } | Node::Update { level, .. } => *level,
            // targets were validated on construction
            Node::Apply { op, level, .. } => op.target(*level).unwrap_or(0),
        }
    }

    /// Finest-level state (x0, b, -, -).
    pub fn initial_state(&mut self) -> State {
        let x = self.push(Node::Input { kind: Input::X0, level: 0 });
        let b = self.push(Node::Input { kind: Input::Rhs, level: 0 });
        State { x, b, c: None, predecessor: None, level: 0 }
    }

    pub fn residual(&mut self, state: State) -> Result<State> {
        if state.c.is_some() {
            return Err(IrError::CorrectionPresent);
        }
        let c = self.push(Node::Residual { level: state.level, x: state.x, b: state.b });
        Ok(State { c: Some(c), ..state })
    }

    pub fn apply(&mut self, op: Op, state: State) -> Result<State> {
        let c = state.c.ok_or(IrError::CorrectionMissing)?;
        let level = self.level(c);
        op.target(level)?;
        let c = self.push(Node::Apply { op, level, arg: c });
        Ok(State { c: Some(c), ..state })
    }

    pub fn update(&mut self, omega_index: usize, coloring: Coloring, state: State) -> Result<State> {
        let c = state.c.ok_or(IrError::CorrectionMissing)?;
        self.expect_level(c, state.level)?;
        let x = self.push(Node::Update { level: state.level, x: state.x, c, omega_index, coloring });
        Ok(State { x, c: None, ..state })
    }

    /// Moves to the error equation on the next coarser level. The restricted
    /// correction becomes the right-hand side; the initial guess there is zero.
    pub fn coarsening(&mut self, state: State) -> Result<State> {
        let c = state.c.ok_or(IrError::CorrectionMissing)?;
        let level = state.level + 1;
        self.expect_level(c, level)?;
        let x = self.push(Node::Input { kind: Input::X0, level });
        let r = self.push(Node::Residual { level, x, b: c });
        Ok(State { x, b: c, c: Some(r), predecessor: Some(Box::new(State { c: None, ..state })), level })
    }

    /// Returns to the finer level with the prolongated coarse solution as correction.
    pub fn cgc(&mut self, state: State) -> Result<State> {
        if state.c.is_some() {
            return Err(IrError::CorrectionPresent);
        }
        let prev = *state.predecessor.ok_or(IrError::NoPredecessor)?;
        let c = self.push(Node::Apply { op: Op::Prolong, level: state.level, arg: state.x });
        Ok(State { c: Some(c), ..prev })
    }

    /// Replaces c by P A^{-1} R c, the solve taking place one level down.
    pub fn coarse_grid_solver(&mut self, solver: CoarseSolverSpec, restriction: RestrictionKind, state: State) -> Result<State> {
        let c = state.c.ok_or(IrError::CorrectionMissing)?;
        self.expect_level(c, state.level)?;
        let s = self.apply(Op::Restrict(restriction), state)?;
        let s = self.apply(Op::CoarseSolve(solver), s)?;
        self.apply(Op::Prolong, s)
    }

    fn expect_level(&self, id: NodeId, expected: usize) -> Result<()> {
        let found = self.level(id);
        if found == expected {
            Ok(())
        } else {
            Err(IrError::LevelMismatch { expected, found })
        }
    }

    /// Operands in evaluation order.
    pub fn children(&self, id: NodeId) -> Vec<NodeId> {
        match self.node(id) {
            Node::Input { .. } => vec![],
            Node::Residual { x, b, .. } => vec![*x, *b],
            Node::Apply { arg, .. } => vec![*arg],
            Node::Update { x, c, .. } => vec![*x, *c],
        }
    }

    /// Whether `id` transitively reads `target`.
    pub fn depends_on(&self, id: NodeId, target: NodeId) -> bool {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            if n == target {
                return true;
            }
            if seen.insert(n) {
                stack.extend(self.children(n));
            }
        }
        false
    }
}
