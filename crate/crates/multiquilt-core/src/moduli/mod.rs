//! Metric trees: edge lengths, the admissibility cone, domain gluing and the face poset.

mod gluing;
mod lattice;
mod relations;
mod sample;

use alloc::vec::Vec;
use core::fmt;

use crate::trees::{Edge, Node, RibbonTree, TreeError, TreeKind};

pub use gluing::{glue_type1, glue_type2, type2_lengths, GluingParameter};
pub use lattice::{face_lattice, FaceLattice, MAX_LATTICE_LEAVES};
pub use relations::{relations, RelationSystem, Q};
pub use sample::random_admissible;

/// Absolute tolerance for comparing root distances.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

/// Length of a finite edge; `Infinite` marks a node (broken edge).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Length {
    Finite(f64),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<f64> {
        match self {
            Length::Finite(x) => Some(x),
            Length::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Length::Infinite)
    }
}

impl core::ops::Add for Length {
    type Output = Length;
    fn add(self, rhs: Length) -> Length {
        match (self, rhs) {
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
            _ => Length::Infinite,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(x) => write!(f, "{x}"),
            Length::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ModuliError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("expected {expected} edge lengths, got {got}")]
    LengthCount { expected: usize, got: usize },
    #[error("edge length {0} is negative or not a number")]
    BadLength(f64),
    #[error("input tree is not admissible")]
    NotAdmissible,
    #[error("input tree must be uncolored")]
    ExpectedUncolored,
    #[error("input tree is not a stable {0:?} tree")]
    Unstable(TreeKind),
    #[error("expected {expected} parts, got {got}")]
    PartCount { expected: usize, got: usize },
    #[error("root distances must be finite for this operation")]
    InfiniteDepth,
    #[error("gluing length too small: edge {part} would get length {length}")]
    GluingLengthTooSmall { part: usize, length: f64 },
    #[error("gluing parameter must satisfy 0 < delta < 1 (got {0})")]
    BadDelta(f64),
    #[error("gluing length must be positive and finite (got {0})")]
    BadGluingLength(f64),
    #[error("face lattices are supported for 1 <= d <= {max} (got {d})")]
    LatticeRange { d: usize, max: usize },
}

/// A tree with a length on each finite edge.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTree {
    tree: RibbonTree,
    lengths: Vec<Length>,
}

/// Nested form carrying edge lengths; `children[k].1` is the length of the edge to a vertex
/// child and is ignored for leaves.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricNode {
    Leaf,
    Vertex {
        colored: bool,
        children: Vec<(MetricNode, Length)>,
    },
}

impl MetricTree {
    /// `lengths[k]` is the length of `tree.edges()[k]`, i.e. of the edge above vertex `k + 1`.
    pub fn new(tree: RibbonTree, lengths: Vec<Length>) -> Result<MetricTree, ModuliError> {
        if lengths.len() != tree.edge_count() {
            return Err(ModuliError::LengthCount {
                expected: tree.edge_count(),
                got: lengths.len(),
            });
        }
        for l in &lengths {
            if let Length::Finite(x) = l {
                if x.is_nan() || *x < 0.0 {
                    return Err(ModuliError::BadLength(*x));
                }
            }
        }
        Ok(MetricTree { tree, lengths })
    }

    /// Every edge gets the same finite length.
    pub fn uniform(tree: RibbonTree, length: f64) -> Result<MetricTree, ModuliError> {
        let n = tree.edge_count();
        MetricTree::new(tree, alloc::vec![Length::Finite(length); n])
    }

    pub fn tree(&self) -> &RibbonTree {
        &self.tree
    }

    pub fn lengths(&self) -> &[Length] {
        &self.lengths
    }

    /// Length of the edge above vertex `child`.
    pub fn length_above(&self, child: usize) -> Length {
        self.lengths[child - 1]
    }

    pub fn length(&self, edge: Edge) -> Option<Length> {
        self.tree
            .contains_edge(edge)
            .then(|| self.lengths[edge.child - 1])
    }

    /// Sum of lengths from the root to vertex `v`.
    pub fn root_distance(&self, v: usize) -> Length {
        self.tree
            .root_path(v)
            .into_iter()
            .fold(Length::Finite(0.0), |acc, c| acc + self.lengths[c - 1])
    }

    /// All colored vertices are at the same distance from the root (infinite distances compare
    /// equal), within [`ADMISSIBILITY_TOL`].
    pub fn is_admissible(&self) -> bool {
        let depths: Vec<Length> = self
            .tree
            .colored_vertices()
            .into_iter()
            .map(|v| self.root_distance(v))
            .collect();
        let Some(&first) = depths.first() else {
            return true;
        };
        depths.iter().all(|&d| match (first, d) {
            (Length::Infinite, Length::Infinite) => true,
            (Length::Finite(a), Length::Finite(b)) => libm::fabs(a - b) <= ADMISSIBILITY_TOL,
            _ => false,
        })
    }

    /// Common root distance of the colored vertices (zero when there are none).
    pub fn colored_depth(&self) -> Length {
        self.tree
            .colored_vertices()
            .first()
            .map_or(Length::Finite(0.0), |&v| self.root_distance(v))
    }

    pub fn to_metric_node(&self) -> MetricNode {
        self.node_at(0)
    }

    fn node_at(&self, v: usize) -> MetricNode {
        let vertex = self.tree.vertex(v);
        let children = vertex
            .slots
            .iter()
            .map(|s| match s {
                crate::trees::Slot::Leaf(_) => (MetricNode::Leaf, Length::Finite(0.0)),
                crate::trees::Slot::Child(c) => (self.node_at(*c), self.lengths[c - 1]),
            })
            .collect();
        MetricNode::Vertex {
            colored: vertex.colored,
            children,
        }
    }

    pub fn from_metric_node(node: &MetricNode) -> Result<MetricTree, ModuliError> {
        fn shape(node: &MetricNode) -> Node {
            match node {
                MetricNode::Leaf => Node::Leaf,
                MetricNode::Vertex { colored, children } => Node::Vertex {
                    colored: *colored,
                    children: children.iter().map(|(c, _)| shape(c)).collect(),
                },
            }
        }
        fn collect(node: &MetricNode, out: &mut Vec<Length>) {
            if let MetricNode::Vertex { children, .. } = node {
                for (c, len) in children {
                    if matches!(c, MetricNode::Vertex { .. }) {
                        out.push(*len);
                        collect(c, out);
                    }
                }
            }
        }
        let tree = RibbonTree::from_node(&shape(node))?;
        let mut lengths = Vec::new();
        collect(node, &mut lengths);
        MetricTree::new(tree, lengths)
    }

    /// Cuts `edge`, returning `(lower, upper, leaf)` with the lengths carried along.
    pub fn cut(&self, edge: Edge) -> Result<(MetricTree, MetricTree, usize), ModuliError> {
        let cut = crate::trees::cut_edge(&self.tree, edge)?;
        let range_lo = edge.child;
        let range_hi = edge.child + cut.upper.vertex_count();
        let upper_lengths = self.lengths[range_lo..range_hi - 1].to_vec();
        let mut lower_lengths = self.lengths[..range_lo - 1].to_vec();
        lower_lengths.extend_from_slice(&self.lengths[range_hi - 1..]);
        Ok((
            MetricTree::new(cut.lower, lower_lengths)?,
            MetricTree::new(cut.upper, upper_lengths)?,
            cut.leaf,
        ))
    }

    /// Color-forgetting map on metric trees. Splicing a bivalent vertex adds the two incident
    /// lengths; a bivalent vertex next to a semi-infinite edge is absorbed into it.
    pub fn forget_colors(&self) -> Result<MetricTree, ModuliError> {
        if self.tree.d() < 2 {
            return Err(TreeError::TooFewLeaves.into());
        }
        // Returns the stripped subtree and the length to add to the edge above it.
        fn strip(node: &MetricNode) -> (MetricNode, Length) {
            match node {
                MetricNode::Leaf => (MetricNode::Leaf, Length::Finite(0.0)),
                MetricNode::Vertex { children, .. } => {
                    let mut kids: Vec<(MetricNode, Length)> = children
                        .iter()
                        .map(|(c, len)| {
                            let (c, extra) = strip(c);
                            (c, *len + extra)
                        })
                        .collect();
                    if kids.len() == 1 {
                        let (c, len) = kids.pop().expect("one child");
                        match c {
                            MetricNode::Leaf => (MetricNode::Leaf, Length::Finite(0.0)),
                            _ => (c, len),
                        }
                    } else {
                        (
                            MetricNode::Vertex {
                                colored: false,
                                children: kids,
                            },
                            Length::Finite(0.0),
                        )
                    }
                }
            }
        }
        let (node, _) = strip(&self.to_metric_node());
        MetricTree::from_metric_node(&node)
    }

    /// Dimension of the metric cone of this tree, `|E| − k + 1`.
    pub fn cone_dim(&self) -> isize {
        cone_dim(&self.tree)
    }
}

/// `|E(T)| − k + 1` where `k` is the number of colored vertices.
///
/// This counts metric degrees of freedom of one fixed tree, including the overall scale; it is
/// not the dimension of the stratum (see [`RibbonTree::stratum_dim`]).
pub fn cone_dim(tree: &RibbonTree) -> isize {
    tree.edge_count() as isize - tree.colored_vertices().len() as isize + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn figure_tree() -> RibbonTree {
        // Interior edges in preorder: l1 (root→A), l2 (A→B), l3, l4, l5 (B→colored), l6 (A→C6),
        // l8 (C6→U), l7 (root→C7).
        let b = Node::uncolored(vec![Node::colored_corolla(1); 3]);
        let c6 = Node::colored(vec![Node::corolla(2)]);
        let a = Node::uncolored(vec![b, c6]);
        RibbonTree::from_node(&Node::uncolored(vec![a, Node::colored_corolla(1)])).unwrap()
    }

    #[test]
    fn figure_tree_is_stable() {
        let t = figure_tree();
        assert!(t.is_valid(TreeKind::Colored));
        assert_eq!(t.edge_count(), 8);
        assert_eq!(t.colored_vertices().len(), 5);
        assert_eq!(cone_dim(&t), 4);
    }

    #[test]
    fn admissibility_examples() {
        let t = figure_tree();
        // Preorder children: 1=A, 2=B, 3..5 colored under B, 6=C6, 7=U, 8=C7.
        let f = Length::Finite;
        let good = vec![
            f(1.0),
            f(1.0),
            f(1.0),
            f(1.0),
            f(1.0),
            f(2.0),
            f(5.0),
            f(3.0),
        ];
        let mt = MetricTree::new(t.clone(), good.clone()).unwrap();
        assert!(mt.is_admissible());
        let mut bad = good;
        bad[2] = f(1.5);
        assert!(!MetricTree::new(t.clone(), bad).unwrap().is_admissible());
        assert!(MetricTree::uniform(t.clone(), 0.0).unwrap().is_admissible());
        let mut inf = vec![f(1.0); 8];
        inf[0] = Length::Infinite;
        inf[7] = Length::Infinite;
        assert!(MetricTree::new(t, inf).unwrap().is_admissible());
    }

    #[test]
    fn metric_node_round_trip_and_cut() {
        let t = figure_tree();
        let lens: Vec<Length> = (1..=8).map(|k| Length::Finite(k as f64)).collect();
        let mt = MetricTree::new(t, lens).unwrap();
        assert_eq!(
            MetricTree::from_metric_node(&mt.to_metric_node()).unwrap(),
            mt
        );
        let (lower, upper, leaf) = mt
            .cut(Edge {
                parent: 1,
                child: 2,
            })
            .unwrap();
        assert_eq!(leaf, 1);
        assert_eq!(
            upper.lengths(),
            &[
                Length::Finite(3.0),
                Length::Finite(4.0),
                Length::Finite(5.0)
            ]
        );
        assert_eq!(lower.lengths(), &[1.0, 6.0, 7.0, 8.0].map(Length::Finite));
    }

    #[test]
    fn metric_forget_adds_spliced_lengths() {
        // Uncolored root over a bivalent colored vertex over a corolla, plus a leaf.
        let node = MetricNode::Vertex {
            colored: false,
            children: vec![
                (
                    MetricNode::Vertex {
                        colored: true,
                        children: vec![(
                            MetricNode::Vertex {
                                colored: false,
                                children: vec![(MetricNode::Leaf, Length::Finite(0.0)); 2],
                            },
                            Length::Finite(2.5),
                        )],
                    },
                    Length::Finite(1.0),
                ),
                (MetricNode::Leaf, Length::Finite(0.0)),
            ],
        };
        let mt = MetricTree::from_metric_node(&node).unwrap();
        let forgotten = mt.forget_colors().unwrap();
        assert_eq!(
            forgotten.tree().to_node(),
            Node::uncolored(vec![Node::corolla(2), Node::Leaf])
        );
        assert_eq!(forgotten.lengths(), &[Length::Finite(3.5)]);
    }

    #[test]
    fn rejects_negative_lengths() {
        let t =
            RibbonTree::from_node(&Node::uncolored(vec![Node::corolla(2), Node::Leaf])).unwrap();
        assert_eq!(
            MetricTree::new(t, vec![Length::Finite(-1.0)]),
            Err(ModuliError::BadLength(-1.0))
        );
    }
}
