use mg_grammar::{DerivationTree, PrimitiveSet, TypeId};
use rand::seq::IndexedRandom;
use rand::Rng;

/// Share of terminals among all symbols; the chance of stopping early.
pub fn terminal_ratio(pset: &PrimitiveSet) -> f64 {
    let t = pset.symbols.iter().filter(|s| s.is_terminal()).count();
    t as f64 / pset.symbols.len() as f64
}

/// Grows one subtree of type `ty` whose root sits at depth `depth0`.
/// Returns `None` when it exceeds `max_size` nodes.
pub(crate) fn grow_from(
    pset: &PrimitiveSet,
    ty: TypeId,
    depth0: usize,
    min_depth: usize,
    max_depth: usize,
    max_size: usize,
    rng: &mut impl Rng,
) -> Option<Vec<u32>> {
    let height = rng.random_range(min_depth..=max_depth);
    let ratio = terminal_ratio(pset);
    let mut out = vec![];
    let mut stack = vec![(depth0, ty)];
    while let Some((depth, t)) = stack.pop() {
        // every pending slot needs at least one more node
        if out.len() + stack.len() + 1 > max_size {
            return None;
        }
        let terms = pset.terminals(t);
        let prims = pset.primitives(t);
        let want_terminal = depth >= height || (depth >= min_depth && rng.random::<f64>() < ratio);
        // fall back to the other kind when the preferred one is unavailable
        let pool = match (want_terminal && !terms.is_empty()) || prims.is_empty() {
            true => terms,
            false => prims,
        };
        let &sym = pool.choose(rng)?;
        out.push(sym);
        for &a in pset.symbol(sym).args.iter().rev() {
            stack.push((depth + 1, a));
        }
    }
    Some(out)
}

/// Random tree of the start type, depth target drawn from
/// `[min_depth, max_depth]`. Regrows until the tree has at most `max_size` nodes.
pub fn gen_grow(
    pset: &PrimitiveSet,
    min_depth: usize,
    max_depth: usize,
    max_size: usize,
    rng: &mut impl Rng,
) -> DerivationTree {
    loop {
        if let Some(nodes) = grow_from(pset, pset.start, 0, min_depth, max_depth, max_size, rng) {
            return DerivationTree::new(nodes);
        }
    }
}
