use crate::ir::{Coloring, Input, Ir, Node, NodeId, Op};
use crate::program::{Expr, Field, Program};
use crate::IrError;
use mg_components::{omega, Partition, SmootherKind};
use std::collections::HashMap;

/// Numerical kernels a program is executed against.
pub trait Backend {
    type Value: Clone;
    type Error: From<IrError>;

    fn zero(&mut self, level: usize) -> Result<Self::Value, Self::Error>;
    fn residual(&mut self, level: usize, x: &Self::Value, b: &Self::Value) -> Result<Self::Value, Self::Error>;
    fn apply(&mut self, op: &Op, level: usize, v: &Self::Value) -> Result<Self::Value, Self::Error>;
    /// x + omega * c on the points of `part` (and only for `component`, if
    /// given); x elsewhere.
    fn update(
        &mut self,
        level: usize,
        x: &Self::Value,
        c: &Self::Value,
        omega: f64,
        part: Partition,
        component: Option<usize>,
    ) -> Result<Self::Value, Self::Error>;

    /// Unknowns per grid point on `level`.
    fn components(&self, _level: usize) -> usize {
        1
    }
}

/// Sub-steps of a red-black update. A pointwise smoother on a system sweeps
/// the components one after another within each colour, like Gauss-Seidel
/// does; any other smoother updates all components of a colour at once.
fn phases(pointwise: bool, components: usize) -> Vec<(Partition, Option<usize>)> {
    let mut out = Vec::new();
    for part in [Partition::Red, Partition::Black] {
        if pointwise && components > 1 {
            out.extend((0..components).map(|k| (part, Some(k))));
        } else {
            out.push((part, None));
        }
    }
    out
}

fn is_pointwise(op: &Op) -> bool {
    matches!(op, Op::Smoother(SmootherKind::Jacobi | SmootherKind::RbGaussSeidel))
}

struct Env<'a, B: Backend> {
    be: &'a mut B,
    x0: &'a B::Value,
    b: &'a B::Value,
    temps: HashMap<Field, B::Value>,
}

impl<B: Backend> Env<'_, B> {
    fn read(&mut self, f: Field, ov: Option<(Field, &B::Value)>) -> Result<B::Value, B::Error> {
        if let Some((g, v)) = ov {
            if g == f {
                return Ok(v.clone());
            }
        }
        match f {
            Field::X0(0) => Ok(self.x0.clone()),
            Field::X0(l) => self.be.zero(l),
            Field::Rhs => Ok(self.b.clone()),
            Field::Temp { .. } => {
                self.temps.get(&f).cloned().ok_or_else(|| IrError::Malformed(format!("{f} unset")).into())
            }
        }
    }

    fn eval(&mut self, e: &Expr, ov: Option<(Field, &B::Value)>) -> Result<B::Value, B::Error> {
        match e {
            Expr::Field(f) => self.read(*f, ov),
            Expr::Residual { level, x, b } => {
                let x = self.eval(x, ov)?;
                let b = self.eval(b, ov)?;
                self.be.residual(*level, &x, &b)
            }
            Expr::Apply { op, level, arg } => {
                let v = self.eval(arg, ov)?;
                self.be.apply(op, *level, &v)
            }
            Expr::Update { level, x, c, omega_index, coloring } => {
                let w = omega(*omega_index);
                let xv = self.read(*x, ov)?;
                match coloring {
                    Coloring::None => {
                        let cv = self.eval(c, ov)?;
                        self.be.update(*level, &xv, &cv, w, Partition::All, None)
                    }
                    Coloring::RedBlack => {
                        let pointwise = matches!(&**c, Expr::Apply { op, .. } if is_pointwise(op));
                        let mut cur = xv;
                        for (part, comp) in phases(pointwise, self.be.components(*level)) {
                            let cv = self.eval(c, Some((*x, &cur)))?;
                            cur = self.be.update(*level, &cur, &cv, w, part, comp)?;
                        }
                        Ok(cur)
                    }
                }
            }
        }
    }
}

/// Runs the program on (x0, b) and returns the final approximation.
pub fn execute<B: Backend>(p: &Program, be: &mut B, x0: &B::Value, b: &B::Value) -> Result<B::Value, B::Error> {
    let mut env = Env { be, x0, b, temps: HashMap::new() };
    for (ins, dead) in p.instrs.iter().zip(&p.release) {
        let v = env.eval(&ins.expr, None)?;
        env.temps.insert(ins.dst, v);
        for f in dead {
            env.temps.remove(f);
        }
    }
    env.read(p.output, None)
}

/// Evaluates a node by walking the graph directly, without a program.
/// Kept independent of [`execute`] so the two can check each other.
pub fn eval_recursive<B: Backend>(
    ir: &Ir,
    id: NodeId,
    be: &mut B,
    x0: &B::Value,
    b: &B::Value,
) -> Result<B::Value, B::Error> {
    let mut memo = HashMap::new();
    rec(ir, id, be, x0, b, &mut memo, None)
}

fn rec<B: Backend>(
    ir: &Ir,
    id: NodeId,
    be: &mut B,
    x0: &B::Value,
    b: &B::Value,
    memo: &mut HashMap<NodeId, B::Value>,
    ov: Option<(NodeId, &B::Value)>,
) -> Result<B::Value, B::Error> {
    if let Some((n, v)) = ov {
        if n == id {
            return Ok(v.clone());
        }
    }
    let cacheable = ov.is_none_or(|(n, _)| !ir.depends_on(id, n));
    if cacheable {
        if let Some(v) = memo.get(&id) {
            return Ok(v.clone());
        }
    }
    let v = match ir.node(id) {
        Node::Input { kind: Input::X0, level: 0 } => x0.clone(),
        Node::Input { kind: Input::X0, level } => be.zero(*level)?,
        Node::Input { kind: Input::Rhs, .. } => b.clone(),
        &Node::Residual { level, x, b: rhs } => {
            let xv = rec(ir, x, be, x0, b, memo, ov)?;
            let bv = rec(ir, rhs, be, x0, b, memo, ov)?;
            be.residual(level, &xv, &bv)?
        }
        Node::Apply { op, level, arg } => {
            let v = rec(ir, *arg, be, x0, b, memo, ov)?;
            be.apply(op, *level, &v)?
        }
        &Node::Update { level, x, c, omega_index, coloring } => {
            let w = omega(omega_index);
            let xv = rec(ir, x, be, x0, b, memo, ov)?;
            match coloring {
                Coloring::None => {
                    let cv = rec(ir, c, be, x0, b, memo, ov)?;
                    be.update(level, &xv, &cv, w, Partition::All, None)?
                }
                Coloring::RedBlack => {
                    let pointwise = matches!(ir.node(c), Node::Apply { op, .. } if is_pointwise(op));
                    let mut cur = xv;
                    for (part, comp) in phases(pointwise, be.components(level)) {
                        let cv = rec(ir, c, be, x0, b, memo, Some((x, &cur)))?;
                        cur = be.update(level, &cur, &cv, w, part, comp)?;
                    }
                    cur
                }
            }
        }
    };
    if cacheable {
        memo.insert(id, v.clone());
    }
    Ok(v)
}
