//! Cutting, grafting and contracting.

use alloc::vec::Vec;

use super::{Edge, Node, RibbonTree, Slot, TreeError};

/// Result of cutting one finite edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    /// The part containing the root; the cut edge became its leaf `leaf`.
    pub lower: RibbonTree,
    /// The part above the cut; the cut edge became its root edge.
    pub upper: RibbonTree,
    pub leaf: usize,
}

/// Cuts `edge`. The edge becomes leaf `i + 1` of the lower tree, where `i` counts the leaves to
/// its left, and the root edge of the upper tree.
pub fn cut_edge(tree: &RibbonTree, edge: Edge) -> Result<Cut, TreeError> {
    if !tree.contains_edge(edge) {
        return Err(TreeError::NoSuchEdge(edge));
    }
    let upper = RibbonTree::from_node(&tree.subtree_node(edge.child))?;
    let leaf = *tree.leaf_range(edge.child).start();
    let mut lower = tree.to_node();
    *node_at_mut(&mut lower, edge.child) = Node::Leaf;
    Ok(Cut {
        lower: RibbonTree::from_node(&lower)?,
        upper,
        leaf,
    })
}

/// Attaches the root edge of `upper` to leaf `leaf` of `lower`.
///
/// The result may be partially colored (some paths without a colored vertex); that is the
/// intermediate state of a Type 2 reassembly. Two colored vertices on one path are rejected.
pub fn graft(lower: &RibbonTree, leaf: usize, upper: &RibbonTree) -> Result<RibbonTree, TreeError> {
    if leaf == 0 || leaf > lower.d() {
        return Err(TreeError::LeafOutOfRange { leaf, d: lower.d() });
    }
    if upper.has_colored() && lower.colored_counts()[leaf - 1] > 0 {
        return Err(TreeError::ColoringViolation);
    }
    let mut node = lower.to_node();
    let mut seen = 0;
    replace_leaf(&mut node, leaf, &mut seen, upper.to_node());
    RibbonTree::from_node(&node)
}

/// Contracts a single finite edge, merging the child into the parent.
///
/// The merged vertex is colored if either endpoint was. The contraction is legal when every
/// leaf keeps its number of colored vertices on the root path; in particular an uncolored parent
/// cannot absorb a colored child this way (see [`contract_layer`]).
pub fn contract_edge(tree: &RibbonTree, edge: Edge) -> Result<RibbonTree, TreeError> {
    if !tree.contains_edge(edge) {
        return Err(TreeError::NoSuchEdge(edge));
    }
    let mut node = tree.to_node();
    let parent = node_at_mut(&mut node, edge.parent);
    let Node::Vertex { colored, children } = parent else {
        unreachable!()
    };
    let pos = tree
        .vertex(edge.parent)
        .slots
        .iter()
        .position(|s| *s == Slot::Child(edge.child))
        .expect("edge checked");
    let Node::Vertex {
        colored: child_colored,
        children: grand,
    } = children.remove(pos)
    else {
        unreachable!()
    };
    *colored |= child_colored;
    for (k, g) in grand.into_iter().enumerate() {
        children.insert(pos + k, g);
    }
    let result = RibbonTree::from_node(&node)?;
    if result.colored_counts() != tree.colored_counts() {
        return Err(TreeError::IllegalContraction);
    }
    Ok(result)
}

/// Contracts all edges from an uncolored vertex to its children at once, when every child is a
/// colored vertex. The merged vertex is colored.
///
/// Admissibility forces these edges to have equal length, so they shrink to zero together.
pub fn contract_layer(tree: &RibbonTree, vertex: usize) -> Result<RibbonTree, TreeError> {
    if vertex >= tree.vertex_count() {
        return Err(TreeError::NoSuchVertex(vertex));
    }
    let v = tree.vertex(vertex);
    let is_layer = !v.colored
        && v.slots
            .iter()
            .all(|s| matches!(s, Slot::Child(c) if tree.is_colored(*c)));
    if !is_layer {
        return Err(TreeError::NotALayer(vertex));
    }
    let mut node = tree.to_node();
    let target = node_at_mut(&mut node, vertex);
    let Node::Vertex { children, .. } = target else {
        unreachable!()
    };
    let mut merged = Vec::new();
    for child in children.drain(..) {
        let Node::Vertex {
            children: grand, ..
        } = child
        else {
            unreachable!()
        };
        merged.extend(grand);
    }
    *target = Node::colored(merged);
    RibbonTree::from_node(&node)
}

/// All trees reachable by one legal contraction step, sorted and deduplicated.
///
/// For stable colored trees these are exactly the types whose stratum has this one in its
/// boundary with codimension one.
pub fn contractions(tree: &RibbonTree) -> Vec<RibbonTree> {
    let mut out: Vec<RibbonTree> = tree
        .edges()
        .into_iter()
        .filter_map(|e| contract_edge(tree, e).ok())
        .collect();
    out.extend((0..tree.vertex_count()).filter_map(|v| contract_layer(tree, v).ok()));
    out.sort();
    out.dedup();
    out
}

/// The subtree rooted at preorder id `target`.
fn node_at_mut(node: &mut Node, target: usize) -> &mut Node {
    fn go<'a>(node: &'a mut Node, target: usize, counter: &mut usize) -> Option<&'a mut Node> {
        if matches!(node, Node::Leaf) {
            return None;
        }
        if *counter == target {
            return Some(node);
        }
        *counter += 1;
        let Node::Vertex { children, .. } = node else {
            unreachable!()
        };
        for child in children.iter_mut() {
            if let Some(found) = go(child, target, counter) {
                return Some(found);
            }
        }
        None
    }
    let mut counter = 0;
    go(node, target, &mut counter).expect("vertex id in range")
}

fn replace_leaf(node: &mut Node, leaf: usize, seen: &mut usize, with: Node) -> Option<Node> {
    let mut with = Some(with);
    fn go(node: &mut Node, leaf: usize, seen: &mut usize, with: &mut Option<Node>) {
        match node {
            Node::Leaf => {
                *seen += 1;
                if *seen == leaf {
                    *node = with.take().expect("replaced once");
                }
            }
            Node::Vertex { children, .. } => {
                for c in children.iter_mut() {
                    if with.is_none() {
                        return;
                    }
                    go(c, leaf, seen, with);
                }
            }
        }
    }
    go(node, leaf, seen, &mut with);
    with
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{enumerate_strata, TreeKind};
    use alloc::vec;

    fn tree(node: Node) -> RibbonTree {
        RibbonTree::from_node(&node).unwrap()
    }

    #[test]
    fn type1_cut_and_regraft() {
        // Colored root with the uncolored vertex at slot 2 (i = 1) carrying e = 2 leaves.
        let t = tree(Node::colored(vec![Node::Leaf, Node::corolla(2)]));
        let cut = cut_edge(
            &t,
            Edge {
                parent: 0,
                child: 1,
            },
        )
        .unwrap();
        assert_eq!(cut.lower.to_node(), Node::colored_corolla(2));
        assert_eq!(cut.upper.to_node(), Node::corolla(2));
        assert_eq!(cut.leaf, 2);
        assert_eq!(graft(&cut.lower, cut.leaf, &cut.upper).unwrap(), t);
    }

    #[test]
    fn type2_cut_all_edges() {
        let t = tree(Node::uncolored(vec![
            Node::colored_corolla(1),
            Node::colored_corolla(2),
        ]));
        let second = cut_edge(
            &t,
            Edge {
                parent: 0,
                child: 2,
            },
        )
        .unwrap();
        assert_eq!(second.leaf, 2);
        let first = cut_edge(
            &second.lower,
            Edge {
                parent: 0,
                child: 1,
            },
        )
        .unwrap();
        assert_eq!(first.leaf, 1);
        assert_eq!(first.lower.to_node(), Node::corolla(2));
        assert_eq!(first.upper.to_node(), Node::colored_corolla(1));
        assert_eq!(second.upper.to_node(), Node::colored_corolla(2));
        let back = graft(&first.lower, 1, &first.upper).unwrap();
        let back = graft(&back, 2, &second.upper).unwrap();
        assert_eq!(back, t);
        assert!(back.is_valid(TreeKind::Colored));
    }

    #[test]
    fn graft_rejects_double_coloring() {
        let lower = tree(Node::colored_corolla(2));
        let upper = tree(Node::colored_corolla(2));
        assert_eq!(graft(&lower, 1, &upper), Err(TreeError::ColoringViolation));
        assert!(matches!(
            graft(&lower, 3, &upper),
            Err(TreeError::LeafOutOfRange { .. })
        ));
    }

    #[test]
    fn contract_binary_tree() {
        let t = tree(Node::uncolored(vec![Node::corolla(2), Node::Leaf]));
        let c = contract_edge(
            &t,
            Edge {
                parent: 0,
                child: 1,
            },
        )
        .unwrap();
        assert_eq!(c.to_node(), Node::corolla(3));
    }

    #[test]
    fn contract_everything_gives_corolla() {
        for d in 2..=6 {
            for t in enumerate_strata(d, TreeKind::Uncolored).unwrap() {
                let mut t = t;
                while let Some(e) = t.edges().first().copied() {
                    t = contract_edge(&t, e).unwrap();
                }
                assert_eq!(t.to_node(), Node::corolla(d));
            }
        }
    }

    #[test]
    fn uncolored_parent_cannot_absorb_colored_child() {
        let t = tree(Node::uncolored(vec![
            Node::colored_corolla(1),
            Node::colored_corolla(1),
        ]));
        assert_eq!(
            contract_edge(
                &t,
                Edge {
                    parent: 0,
                    child: 1
                }
            ),
            Err(TreeError::IllegalContraction)
        );
        let c = contract_layer(&t, 0).unwrap();
        assert_eq!(c.to_node(), Node::colored_corolla(2));
    }

    #[test]
    fn contractions_raise_dimension_by_one() {
        for d in 1..=5 {
            for t in enumerate_strata(d, TreeKind::Colored).unwrap() {
                for c in contractions(&t) {
                    assert!(c.is_valid(TreeKind::Colored));
                    assert_eq!(c.stratum_dim(), t.stratum_dim() + 1);
                }
            }
        }
    }

    #[test]
    fn missing_edge() {
        let t = tree(Node::corolla(3));
        let e = Edge {
            parent: 0,
            child: 1,
        };
        assert_eq!(cut_edge(&t, e), Err(TreeError::NoSuchEdge(e)));
        assert_eq!(contract_edge(&t, e), Err(TreeError::NoSuchEdge(e)));
    }
}
