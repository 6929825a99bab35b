use crate::grammar::{PrimitiveSet, SymbolKind, TypeId};
use crate::{GrammarError, Result};
use mg_ir::{generate_program, Coloring, Ir, Op, Program, State};

/// Derivation tree as symbol indices in depth-first (prefix) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivationTree {
    pub nodes: Vec<u32>,
}

impl DerivationTree {
    pub fn new(nodes: Vec<u32>) -> Self {
        DerivationTree { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// One past the last node of the subtree rooted at `i`.
    pub fn subtree_end(&self, pset: &PrimitiveSet, i: usize) -> usize {
        let mut open = 1usize;
        let mut j = i;
        while open > 0 && j < self.nodes.len() {
            open = open + pset.symbol(self.nodes[j]).arity() - 1;
            j += 1;
        }
        j
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self, pset: &PrimitiveSet) -> usize {
        let mut stack: Vec<usize> = vec![];
        let mut max = 0;
        for &n in &self.nodes {
            let d = stack.pop().unwrap_or(0);
            max = max.max(d);
            for _ in 0..pset.symbol(n).arity() {
                stack.push(d + 1);
            }
        }
        max
    }

    /// Parent-to-child depth of each node.
    pub fn node_depths(&self, pset: &PrimitiveSet) -> Vec<usize> {
        let mut stack: Vec<usize> = vec![];
        let mut out = Vec::with_capacity(self.nodes.len());
        for &n in &self.nodes {
            let d = stack.pop().unwrap_or(0);
            out.push(d);
            for _ in 0..pset.symbol(n).arity() {
                stack.push(d + 1);
            }
        }
        out
    }

    /// Whitespace-separated symbol names; also the cache key.
    pub fn serialize(&self, pset: &PrimitiveSet) -> String {
        let names: Vec<&str> = self.nodes.iter().map(|&n| pset.symbol(n).name.as_str()).collect();
        names.join(" ")
    }

    /// Inverse of [`serialize`](Self::serialize). Guard versions are
    /// inferred bottom-up from the argument types.
    pub fn parse(pset: &PrimitiveSet, s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let mut nodes = Vec::with_capacity(tokens.len());
        let mut pos = 0;
        parse_node(pset, &tokens, &mut pos, &mut nodes)?;
        if pos != tokens.len() {
            return Err(GrammarError::Trailing { index: pos, count: tokens.len() - pos });
        }
        Ok(DerivationTree { nodes })
    }

    /// Checks arities, argument types and the root type. Returns every
    /// problem found rather than stopping at the first.
    pub fn type_check(&self, pset: &PrimitiveSet) -> (bool, Vec<String>) {
        let mut diags = vec![];
        // expected types of pending argument slots, last on top
        let mut expect: Vec<TypeId> = vec![pset.start];
        for (i, &n) in self.nodes.iter().enumerate() {
            if n as usize >= pset.symbols.len() {
                diags.push(format!("node {i}: symbol index {n} out of range"));
                return (false, diags);
            }
            let sym = pset.symbol(n);
            let Some(want) = expect.pop() else {
                diags.push(format!("node {i} `{}` is past the end of the tree", sym.name));
                return (false, diags);
            };
            if sym.ret != want {
                diags.push(format!(
                    "node {i} `{}` yields {} where {} is required",
                    sym.name,
                    pset.type_tag(sym.ret),
                    pset.type_tag(want)
                ));
            }
            expect.extend(sym.args.iter().rev());
        }
        if !expect.is_empty() {
            diags.push(format!("{} argument slots left unfilled", expect.len()));
        }
        (diags.is_empty(), diags)
    }

    pub fn count_kind(&self, pset: &PrimitiveSet, pred: impl Fn(&SymbolKind) -> bool) -> usize {
        self.nodes.iter().filter(|&&n| pred(&pset.symbol(n).kind)).count()
    }
}

fn parse_node(pset: &PrimitiveSet, tokens: &[&str], pos: &mut usize, out: &mut Vec<u32>) -> Result<TypeId> {
    let index = *pos;
    let name = *tokens.get(index).ok_or(GrammarError::Truncated(index))?;
    *pos += 1;
    let versions = pset.versions(name);
    let first = *versions.first().ok_or_else(|| GrammarError::UnknownSymbol { index, name: name.into() })?;
    let slot = out.len();
    out.push(first);
    let arity = pset.symbol(first).arity();
    let mut args = Vec::with_capacity(arity);
    for _ in 0..arity {
        args.push(parse_node(pset, tokens, pos, out)?);
    }
    let chosen = versions.iter().copied().find(|&v| pset.symbol(v).args == args).ok_or_else(|| {
        let shown: Vec<String> = args.iter().map(|&a| pset.type_tag(a).to_string()).collect();
        GrammarError::NoMatchingVersion { index, name: name.into(), args: shown.join(", ") }
    })?;
    out[slot] = chosen;
    Ok(pset.symbol(chosen).ret)
}

enum Value {
    State(State),
    Omega(usize),
    Coloring(Coloring),
    Smoother(mg_components::SmootherKind),
}

/// Builds the multigrid state the tree denotes.
pub fn compile(tree: &DerivationTree, pset: &PrimitiveSet) -> Result<(Ir, State)> {
    let (ok, diags) = tree.type_check(pset);
    if !ok {
        return Err(GrammarError::TypeCheck(diags.join("; ")));
    }
    let mut ir = Ir::new();
    let mut pos = 0;
    match build(tree, pset, &mut ir, &mut pos)? {
        Value::State(s) => Ok((ir, s)),
        _ => Err(GrammarError::TypeCheck("root is not a state".into())),
    }
}

/// [`compile`] followed by program generation.
pub fn compile_program(tree: &DerivationTree, pset: &PrimitiveSet) -> Result<Program> {
    let (ir, s) = compile(tree, pset)?;
    Ok(generate_program(&ir, &s)?)
}

fn build(tree: &DerivationTree, pset: &PrimitiveSet, ir: &mut Ir, pos: &mut usize) -> Result<Value> {
    let sym = pset.symbol(tree.nodes[*pos]);
    *pos += 1;
    let mut args = Vec::with_capacity(sym.arity());
    for _ in 0..sym.arity() {
        args.push(build(tree, pset, ir, pos)?);
    }
    let cfg = &pset.config;
    let bad = || GrammarError::TypeCheck(format!("arguments of `{}` do not match", sym.name));
    Ok(match (&sym.kind, args.as_mut_slice()) {
        (SymbolKind::Initial, []) => Value::State(ir.initial_state()),
        (SymbolKind::Omega(w), []) => Value::Omega(*w),
        (SymbolKind::Partition(c), []) => Value::Coloring(*c),
        (SymbolKind::Smoother { kind, .. }, []) => Value::Smoother(kind.clone()),
        (SymbolKind::Residual { .. }, [Value::State(s)]) => Value::State(ir.residual(take(s))?),
        (SymbolKind::Coarsening { .. }, [Value::State(s)]) => {
            let s = ir.apply(Op::Restrict(cfg.restriction), take(s))?;
            Value::State(ir.coarsening(s)?)
        }
        (SymbolKind::Smooth { .. }, [Value::Omega(w), Value::Coloring(p), Value::Smoother(k), Value::State(s)]) => {
            let s = ir.apply(Op::Smoother(k.clone()), take(s))?;
            Value::State(ir.update(*w, *p, s)?)
        }
        (SymbolKind::Cgc { .. }, [Value::Omega(w), Value::State(s)]) => {
            let s = ir.cgc(take(s))?;
            Value::State(ir.update(*w, Coloring::None, s)?)
        }
        (SymbolKind::Cgs { .. }, [Value::Omega(w), Value::State(s)]) => {
            let s = ir.coarse_grid_solver(cfg.coarse_solver, cfg.restriction, take(s))?;
            Value::State(ir.update(*w, Coloring::None, s)?)
        }
        _ => return Err(bad()),
    })
}

fn take(s: &mut State) -> State {
    std::mem::replace(s, State { x: s.x, b: s.b, c: None, predecessor: None, level: 0 })
}
