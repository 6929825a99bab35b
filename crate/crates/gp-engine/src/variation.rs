use crate::init::grow_from;
use mg_grammar::{DerivationTree, PrimitiveSet, TypeId};
use rand::seq::IndexedRandom;
use rand::Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct VariationConfig {
    pub terminal_mutation_probability: f64,
    /// Depth interval for subtrees grown by mutation.
    pub mutation_depth: (usize, usize),
    pub max_size: usize,
}

impl Default for VariationConfig {
    fn default() -> Self {
        VariationConfig { terminal_mutation_probability: 1.0 / 3.0, mutation_depth: (1, 8), max_size: 150 }
    }
}

fn node_type(pset: &PrimitiveSet, tree: &DerivationTree, i: usize) -> TypeId {
    pset.symbol(tree.nodes[i]).ret
}

fn splice(tree: &DerivationTree, at: usize, end: usize, with: &[u32]) -> DerivationTree {
    let mut nodes = Vec::with_capacity(tree.len() - (end - at) + with.len());
    nodes.extend_from_slice(&tree.nodes[..at]);
    nodes.extend_from_slice(with);
    nodes.extend_from_slice(&tree.nodes[end..]);
    DerivationTree::new(nodes)
}

/// Redraws one terminal from its type's alternatives.
fn mutate_terminal(tree: &DerivationTree, pset: &PrimitiveSet, rng: &mut impl Rng) -> Option<DerivationTree> {
    let candidates: Vec<usize> = (0..tree.len())
        .filter(|&i| pset.symbol(tree.nodes[i]).is_terminal() && pset.terminals(node_type(pset, tree, i)).len() > 1)
        .collect();
    let &i = candidates.choose(rng)?;
    let alts: Vec<u32> =
        pset.terminals(node_type(pset, tree, i)).iter().copied().filter(|&t| t != tree.nodes[i]).collect();
    let mut out = tree.clone();
    out.nodes[i] = *alts.choose(rng)?;
    Some(out)
}

/// Grows a subtree in place of a random node. If the new subtree contains a
/// slot of the replaced node's type, the old subtree is grafted there
/// (insertion); otherwise it is dropped (replacement).
fn mutate_structure(
    tree: &DerivationTree,
    pset: &PrimitiveSet,
    cfg: &VariationConfig,
    rng: &mut impl Rng,
) -> Option<DerivationTree> {
    let depths = tree.node_depths(pset);
    let i = rng.random_range(0..tree.len());
    let ty = node_type(pset, tree, i);
    if pset.primitives(ty).is_empty() && pset.terminals(ty).len() <= 1 {
        return None;
    }
    let end = tree.subtree_end(pset, i);
    let (lo, hi) = cfg.mutation_depth;
    let budget = cfg.max_size.checked_sub(tree.len() - (end - i))?;
    let new = grow_from(pset, ty, depths[i], depths[i] + lo, depths[i] + hi, budget, rng)?;
    let new_tree = DerivationTree::new(new);
    let holes: Vec<usize> = (1..new_tree.len()).filter(|&j| node_type(pset, &new_tree, j) == ty).collect();
    let sub = match holes.choose(rng) {
        Some(&j) => {
            let old = &tree.nodes[i..end];
            let hole_end = new_tree.subtree_end(pset, j);
            splice(&new_tree, j, hole_end, old).nodes
        }
        None => new_tree.nodes,
    };
    let out = splice(tree, i, end, &sub);
    (out.len() <= cfg.max_size && out != *tree).then_some(out)
}

/// Returns the mutant and whether anything changed. Gives up after a few
/// attempts and hands back the input unchanged.
pub fn mutate_subtree(
    tree: &DerivationTree,
    pset: &PrimitiveSet,
    cfg: &VariationConfig,
    rng: &mut impl Rng,
) -> (DerivationTree, bool) {
    for _ in 0..16 {
        let res = if rng.random::<f64>() < cfg.terminal_mutation_probability {
            mutate_terminal(tree, pset, rng)
        } else {
            mutate_structure(tree, pset, cfg, rng)
        };
        if let Some(t) = res {
            return (t, true);
        }
    }
    (tree.clone(), false)
}

/// Swaps two subtrees whose roots share a type. A child that would exceed
/// `max_size` is replaced by its parent. The flag is false when no common
/// type exists.
pub fn crossover_subtree(
    a: &DerivationTree,
    b: &DerivationTree,
    pset: &PrimitiveSet,
    max_size: usize,
    rng: &mut impl Rng,
) -> (DerivationTree, DerivationTree, bool) {
    let mut types: Vec<TypeId> = (0..a.len()).map(|i| node_type(pset, a, i)).collect();
    types.sort();
    types.dedup();
    let in_b: Vec<TypeId> = (0..b.len()).map(|i| node_type(pset, b, i)).collect();
    types.retain(|t| in_b.contains(t));
    let Some(&t) = types.choose(rng) else {
        return (a.clone(), b.clone(), false);
    };
    let ia: Vec<usize> = (0..a.len()).filter(|&i| node_type(pset, a, i) == t).collect();
    let ib: Vec<usize> = (0..b.len()).filter(|&i| in_b[i] == t).collect();
    let i = *ia.choose(rng).unwrap();
    let j = *ib.choose(rng).unwrap();
    let (ea, eb) = (a.subtree_end(pset, i), b.subtree_end(pset, j));
    let ca = splice(a, i, ea, &b.nodes[j..eb]);
    let cb = splice(b, j, eb, &a.nodes[i..ea]);
    let ca = if ca.len() <= max_size { ca } else { a.clone() };
    let cb = if cb.len() <= max_size { cb } else { b.clone() };
    (ca, cb, true)
}
