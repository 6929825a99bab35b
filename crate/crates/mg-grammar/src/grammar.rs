use crate::{GrammarError, Result};
use mg_components::{CoarseSolverKind, CoarseSolverSpec, RestrictionKind, SmootherKind, OMEGA_COUNT};
use mg_ir::{level_name, Coloring};
use std::collections::HashMap;
use std::fmt;

/// A grammar variable. The guard flag marks the part of a derivation that
/// lies before the first coarse-grid solve.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeTag {
    pub identifier: String,
    pub guard: bool,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.identifier, if self.guard { "!" } else { "" })
    }
}

/// Index into [`PrimitiveSet::types`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(pub u16);

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolKind {
    /// update(w, P, apply(B, c))
    Smooth { level: usize },
    /// residual(s)
    Residual { level: usize },
    /// coarsening(apply(R, c)) from the next finer level
    Coarsening { level: usize },
    /// update(w, cgc(P, s)) from the next coarser level
    Cgc { level: usize },
    /// update(w, P A^-1 R c), the solve happening one level down
    Cgs { level: usize },
    /// (x0, b) on the finest level
    Initial,
    Omega(usize),
    Partition(Coloring),
    Smoother { level: usize, kind: SmootherKind },
}

/// A production (arity > 0) or terminal.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    pub name: String,
    pub args: Vec<TypeId>,
    pub ret: TypeId,
    pub kind: SymbolKind,
}

impl Symbol {
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_terminal(&self) -> bool {
        self.args.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrammarConfig {
    /// Number of grid levels, coarsest included.
    pub depth: usize,
    /// `RbGaussSeidel` adds the red-black partition on top of pointwise Jacobi.
    pub smoothers: Vec<SmootherKind>,
    pub omegas: Vec<usize>,
    /// Offer coarse solves on intermediate levels as well.
    pub early_solve: bool,
    pub coarse_solver: CoarseSolverSpec,
    pub restriction: RestrictionKind,
}

impl GrammarConfig {
    pub fn new(depth: usize, smoothers: Vec<SmootherKind>) -> Self {
        GrammarConfig {
            depth,
            smoothers,
            omegas: (0..OMEGA_COUNT).collect(),
            early_solve: true,
            coarse_solver: CoarseSolverSpec::new(CoarseSolverKind::Cg),
            restriction: RestrictionKind::FullWeighting,
        }
    }
}

/// All productions and terminals of one grammar instance. Immutable once built.
#[derive(Clone, Debug)]
pub struct PrimitiveSet {
    pub config: GrammarConfig,
    pub types: Vec<TypeTag>,
    pub symbols: Vec<Symbol>,
    pub start: TypeId,
    by_type: Vec<(Vec<u32>, Vec<u32>)>,
    by_name: HashMap<String, Vec<u32>>,
}

impl PrimitiveSet {
    pub fn symbol(&self, id: u32) -> &Symbol {
        &self.symbols[id as usize]
    }

    pub fn type_tag(&self, t: TypeId) -> &TypeTag {
        &self.types[t.0 as usize]
    }

    pub fn type_id(&self, identifier: &str, guard: bool) -> Option<TypeId> {
        self.types.iter().position(|t| t.identifier == identifier && t.guard == guard).map(|i| TypeId(i as u16))
    }

    /// Productions (arity > 0) producing `t`.
    pub fn primitives(&self, t: TypeId) -> &[u32] {
        &self.by_type[t.0 as usize].0
    }

    pub fn terminals(&self, t: TypeId) -> &[u32] {
        &self.by_type[t.0 as usize].1
    }

    /// All versions sharing a name (guarded and unguarded).
    pub fn versions(&self, name: &str) -> &[u32] {
        self.by_name.get(name).map_or(&[], |v| v.as_slice())
    }

    pub fn depth(&self) -> usize {
        self.config.depth
    }

    /// Types for which some finite derivation exists.
    pub fn productive_types(&self) -> Vec<bool> {
        let mut ok = vec![false; self.types.len()];
        loop {
            let mut changed = false;
            for s in &self.symbols {
                if !ok[s.ret.0 as usize] && s.args.iter().all(|a| ok[a.0 as usize]) {
                    ok[s.ret.0 as usize] = true;
                    changed = true;
                }
            }
            if !changed {
                return ok;
            }
        }
    }

    /// Types reachable from the start type.
    pub fn reachable_types(&self) -> Vec<bool> {
        let mut seen = vec![false; self.types.len()];
        let mut stack = vec![self.start];
        while let Some(t) = stack.pop() {
            if std::mem::replace(&mut seen[t.0 as usize], true) {
                continue;
            }
            for &s in self.primitives(t) {
                stack.extend(self.symbol(s).args.iter().copied());
            }
        }
        seen
    }
}

struct Builder {
    types: Vec<TypeTag>,
    symbols: Vec<Symbol>,
}

impl Builder {
    fn ty(&mut self, identifier: String, guard: bool) -> TypeId {
        if let Some(i) = self.types.iter().position(|t| t.identifier == identifier && t.guard == guard) {
            return TypeId(i as u16);
        }
        self.types.push(TypeTag { identifier, guard });
        TypeId(self.types.len() as u16 - 1)
    }

    fn add(&mut self, name: String, args: Vec<TypeId>, ret: TypeId, kind: SymbolKind) {
        self.symbols.push(Symbol { name, args, ret, kind });
    }
}

/// Builds the grammar level by level. Every state production exists in an
/// unguarded and a guarded version; only the coarse solve maps a guarded
/// argument to an unguarded result. The start type is unguarded and the
/// initial state is guarded, so every complete derivation solves at least once.
pub fn generate_grammar(config: &GrammarConfig) -> Result<PrimitiveSet> {
    let d = config.depth;
    if d < 2 {
        return Err(GrammarError::TooShallow(d));
    }
    if config.smoothers.is_empty() {
        return Err(GrammarError::EmptyMenu("smoothers"));
    }
    if config.omegas.is_empty() {
        return Err(GrammarError::EmptyMenu("relaxation factors"));
    }
    let mut b = Builder { types: vec![], symbols: vec![] };
    let s = |b: &mut Builder, l: usize, g: bool| b.ty(format!("s_{}", level_name(l)), g);
    let c = |b: &mut Builder, l: usize, g: bool| b.ty(format!("c_{}", level_name(l)), g);
    let start = s(&mut b, 0, false);
    let omega_t = b.ty("omega".into(), false);
    let part_t = b.ty("P".into(), false);

    let init = s(&mut b, 0, true);
    b.add("x0_h".into(), vec![], init, SymbolKind::Initial);
    let mut omegas = config.omegas.clone();
    omegas.sort_unstable();
    omegas.dedup();
    for &w in &omegas {
        b.add(format!("w{w}"), vec![], omega_t, SymbolKind::Omega(w));
    }
    b.add("none".into(), vec![], part_t, SymbolKind::Partition(Coloring::None));
    if config.smoothers.contains(&SmootherKind::RbGaussSeidel) {
        b.add("rb".into(), vec![], part_t, SymbolKind::Partition(Coloring::RedBlack));
    }
    let mut kinds: Vec<SmootherKind> = config
        .smoothers
        .iter()
        .map(|k| if *k == SmootherKind::RbGaussSeidel { SmootherKind::Jacobi } else { k.clone() })
        .collect();
    kinds.sort();
    kinds.dedup();

    for l in 0..d - 1 {
        let ln = level_name(l);
        let b_t = b.ty(format!("B_{ln}"), false);
        for k in &kinds {
            b.add(format!("{}_{ln}", k.name()), vec![], b_t, SymbolKind::Smoother { level: l, kind: k.clone() });
        }
        for g in [false, true] {
            let (sl, cl) = (s(&mut b, l, g), c(&mut b, l, g));
            b.add(format!("smooth_{ln}"), vec![omega_t, part_t, b_t, cl], sl, SymbolKind::Smooth { level: l });
            b.add(format!("residual_{ln}"), vec![sl], cl, SymbolKind::Residual { level: l });
            if l >= 1 {
                let cf = c(&mut b, l - 1, g);
                b.add(format!("coarsening_{ln}"), vec![cf], cl, SymbolKind::Coarsening { level: l });
            }
            if l + 2 < d {
                let sc = s(&mut b, l + 1, g);
                b.add(format!("cgc_{ln}"), vec![omega_t, sc], sl, SymbolKind::Cgc { level: l });
            }
        }
        if l + 2 == d || config.early_solve {
            let su = s(&mut b, l, false);
            for g in [false, true] {
                let cl = c(&mut b, l, g);
                b.add(format!("cgs_{ln}"), vec![omega_t, cl], su, SymbolKind::Cgs { level: l });
            }
        }
    }

    let mut by_type = vec![(vec![], vec![]); b.types.len()];
    let mut by_name: HashMap<String, Vec<u32>> = HashMap::new();
    for (i, sym) in b.symbols.iter().enumerate() {
        let e = &mut by_type[sym.ret.0 as usize];
        if sym.is_terminal() { &mut e.1 } else { &mut e.0 }.push(i as u32);
        by_name.entry(sym.name.clone()).or_default().push(i as u32);
    }
    Ok(PrimitiveSet { config: config.clone(), types: b.types, symbols: b.symbols, start, by_type, by_name })
}
