//! Generation of all stable types with a given number of leaves.
//!
//! Subtrees are generated bottom-up by leaf count. An uncolored subtree is a leaf or an
//! uncolored vertex with at least two uncolored subtrees. A colored subtree (one whose every
//! leaf path meets exactly one colored vertex) is a colored vertex over at least one uncolored
//! subtree, or an uncolored vertex over at least two colored subtrees. Each planar type arises
//! exactly once, so no deduplication is needed.

use alloc::vec;
use alloc::vec::Vec;

use super::{Node, RibbonTree, TreeError, TreeKind};

/// All stable types with `d` leaves, sorted by their nested form.
pub fn enumerate_strata(d: usize, kind: TreeKind) -> Result<Vec<RibbonTree>, TreeError> {
    if d == 0 {
        return Err(TreeError::NoLeaves);
    }
    if kind == TreeKind::Uncolored && d < 2 {
        return Err(TreeError::TooFewLeaves);
    }
    let uncolored = uncolored_table(d);
    let mut nodes = match kind {
        TreeKind::Uncolored => uncolored[d].clone(),
        TreeKind::Colored => colored_table(d, &uncolored).swap_remove(d),
    };
    nodes.sort();
    nodes.iter().map(RibbonTree::from_node).collect()
}

fn uncolored_table(d: usize) -> Vec<Vec<Node>> {
    let mut table: Vec<Vec<Node>> = vec![Vec::new(), vec![Node::Leaf]];
    for n in 2..=d {
        let nodes = sequences(n, 2, &table)
            .into_iter()
            .map(Node::uncolored)
            .collect();
        table.push(nodes);
    }
    table
}

fn colored_table(d: usize, uncolored: &[Vec<Node>]) -> Vec<Vec<Node>> {
    let mut table: Vec<Vec<Node>> = vec![Vec::new()];
    for n in 1..=d {
        let mut nodes: Vec<Node> = sequences(n, 1, uncolored)
            .into_iter()
            .map(Node::colored)
            .collect();
        nodes.extend(sequences(n, 2, &table).into_iter().map(Node::uncolored));
        table.push(nodes);
    }
    table
}

/// Ordered sequences of at least `min_parts` nodes drawn from `table` (indexed by leaf count)
/// whose leaf counts sum to `n`. Only entries `table[1..n]` are consulted, plus `table[n]`
/// when `min_parts <= 1`.
fn sequences(n: usize, min_parts: usize, table: &[Vec<Node>]) -> Vec<Vec<Node>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(
        remaining: usize,
        min_parts: usize,
        table: &[Vec<Node>],
        current: &mut Vec<Node>,
        out: &mut Vec<Vec<Node>>,
    ) {
        if remaining == 0 {
            if current.len() >= min_parts {
                out.push(current.clone());
            }
            return;
        }
        for first in 1..=remaining {
            // A single part covering everything would recurse into the table being built.
            if current.is_empty() && first == remaining && min_parts > 1 {
                continue;
            }
            for node in &table[first] {
                current.push(node.clone());
                go(remaining - first, min_parts, table, current, out);
                current.pop();
            }
        }
    }
    go(n, min_parts, table, &mut current, &mut out);
    out
}

/// The Catalan number `C_n`, computed by the product formula.
pub fn catalan(n: u64) -> u64 {
    let mut c: u64 = 1;
    for k in 0..n {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}
