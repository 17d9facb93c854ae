//! Rooted planar (ribbon) trees with an optional set of colored vertices.
//!
//! A tree with `d` leaves describes the combinatorial type of a (nodal) disk with `d + 1`
//! boundary markings. The root carries the outgoing semi-infinite edge `e_0`; the leaves are the
//! incoming edges `e_1 .. e_d`. Coloring a layer of vertices turns the disk into a quilted disk,
//! provided every root-to-leaf path meets exactly one colored vertex.
//!
//! [`RibbonTree`] is always stored in canonical form: vertex ids are assigned in depth-first
//! preorder with children visited in slot order, so the root is vertex `0` and structural
//! equality coincides with isomorphism of planar trees. Input that may be malformed (dangling
//! references, cycles, misnumbered leaves) goes through [`RawTree`] and [`validate`].

mod enumerate;
mod surgery;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use enumerate::{catalan, enumerate_strata};
pub use surgery::{contract_edge, contract_layer, contractions, cut_edge, graft, Cut};

/// One position in the ordered child list of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// A semi-infinite leaf edge with its index in `1..=d`.
    Leaf(usize),
    /// A finite edge to the child vertex with this id.
    Child(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: usize,
    pub colored: bool,
    pub slots: Vec<Slot>,
}

/// A finite edge, identified by its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub parent: usize,
    pub child: usize,
}

/// Which stability and coloring rules apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    /// No colored vertices; every vertex has valency at least 3.
    Uncolored,
    /// Every root-to-leaf path meets exactly one colored vertex; colored vertices need valency
    /// at least 2, uncolored ones at least 3.
    Colored,
}

/// A violated invariant found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    DuplicateVertexId(usize),
    UnknownRoot(usize),
    DanglingChild {
        vertex: usize,
        child: usize,
    },
    MultipleParents(usize),
    RootHasParent,
    Unreachable(usize),
    LeafOutOfRange(usize),
    LeafMissing(usize),
    LeafRepeated(usize),
    LeavesOutOfOrder,
    Unstable {
        vertex: usize,
        valency: usize,
        required: usize,
    },
    ColoredCount {
        leaf: usize,
        count: usize,
    },
    ColoredVertexInUncoloredTree(usize),
}

impl Diagnostic {
    /// Whether the diagnostic concerns the shape of the data rather than stability or coloring.
    pub fn is_structural(&self) -> bool {
        !matches!(
            self,
            Diagnostic::Unstable { .. }
                | Diagnostic::ColoredCount { .. }
                | Diagnostic::ColoredVertexInUncoloredTree(_)
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateVertexId(v) => write!(f, "vertex id {v} appears more than once"),
            Diagnostic::UnknownRoot(v) => write!(f, "root id {v} is not a vertex"),
            Diagnostic::DanglingChild { vertex, child } => {
                write!(f, "vertex {vertex} refers to missing child {child}")
            }
            Diagnostic::MultipleParents(v) => write!(f, "vertex {v} has more than one parent"),
            Diagnostic::RootHasParent => write!(f, "the root appears as a child"),
            Diagnostic::Unreachable(v) => write!(f, "vertex {v} is not reachable from the root"),
            Diagnostic::LeafOutOfRange(l) => write!(f, "leaf index {l} is outside 1..=d"),
            Diagnostic::LeafMissing(l) => write!(f, "leaf {l} does not occur"),
            Diagnostic::LeafRepeated(l) => write!(f, "leaf {l} occurs more than once"),
            Diagnostic::LeavesOutOfOrder => {
                write!(f, "leaves are not numbered left to right in slot order")
            }
            Diagnostic::Unstable {
                vertex,
                valency,
                required,
            } => {
                write!(f, "vertex {vertex} has valency {valency} < {required}")
            }
            Diagnostic::ColoredCount { leaf, count } => {
                write!(
                    f,
                    "path from the root to leaf {leaf} meets {count} colored vertices"
                )
            }
            Diagnostic::ColoredVertexInUncoloredTree(v) => {
                write!(f, "vertex {v} is colored in an uncolored tree")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TreeError {
    #[error("malformed tree: {0:?}")]
    Malformed(Vec<Diagnostic>),
    #[error("d = 0 is not allowed")]
    NoLeaves,
    #[error("uncolored trees need at least two leaves")]
    TooFewLeaves,
    #[error("edge {0:?} is not an edge of the tree")]
    NoSuchEdge(Edge),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("leaf index {leaf} is outside 1..={d}")]
    LeafOutOfRange { leaf: usize, d: usize },
    #[error("operation would put two colored vertices on one root-to-leaf path")]
    ColoringViolation,
    #[error("contraction changes the number of colored vertices on some path")]
    IllegalContraction,
    #[error(
        "vertex {0} is colored or has a leaf slot or a non-colored child; no layer to contract"
    )]
    NotALayer(usize),
}

/// A tree as supplied by a caller; ids are arbitrary and nothing is checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTree {
    pub d: usize,
    pub root: usize,
    pub vertices: Vec<Vertex>,
}

/// Nested form of a tree. Used for construction, enumeration and surgery.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf,
    Vertex { colored: bool, children: Vec<Node> },
}

impl Node {
    pub fn uncolored(children: Vec<Node>) -> Node {
        Node::Vertex {
            colored: false,
            children,
        }
    }

    pub fn colored(children: Vec<Node>) -> Node {
        Node::Vertex {
            colored: true,
            children,
        }
    }

    /// An uncolored vertex whose slots are all leaves.
    pub fn corolla(leaves: usize) -> Node {
        Node::uncolored(vec![Node::Leaf; leaves])
    }

    /// A colored vertex whose slots are all leaves.
    pub fn colored_corolla(leaves: usize) -> Node {
        Node::colored(vec![Node::Leaf; leaves])
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Vertex { children, .. } => children.iter().map(Node::leaf_count).sum(),
        }
    }

    pub fn has_colored(&self) -> bool {
        match self {
            Node::Leaf => false,
            Node::Vertex { colored, children } => {
                *colored || children.iter().any(Node::has_colored)
            }
        }
    }
}

/// A structurally well-formed planar rooted tree in canonical preorder numbering.
///
/// Stability and the coloring rule are not enforced; use [`RibbonTree::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonTree {
    d: usize,
    vertices: Vec<Vertex>,
    parent: Vec<Option<usize>>,
}

impl PartialOrd for RibbonTree {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RibbonTree {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.to_node().cmp(&other.to_node())
    }
}

impl RibbonTree {
    /// Builds the canonical tree of a nested description. The root must be a vertex.
    pub fn from_node(node: &Node) -> Result<RibbonTree, TreeError> {
        if matches!(node, Node::Leaf) {
            return Err(TreeError::NoLeaves);
        }
        let mut vertices = Vec::new();
        let mut parent = Vec::new();
        let mut next_leaf = 1;
        fn walk(
            node: &Node,
            up: Option<usize>,
            vertices: &mut Vec<Vertex>,
            parent: &mut Vec<Option<usize>>,
            next_leaf: &mut usize,
        ) -> usize {
            let Node::Vertex { colored, children } = node else {
                unreachable!("leaves are handled by the caller");
            };
            let id = vertices.len();
            vertices.push(Vertex {
                id,
                colored: *colored,
                slots: Vec::with_capacity(children.len()),
            });
            parent.push(up);
            for child in children {
                let slot = match child {
                    Node::Leaf => {
                        *next_leaf += 1;
                        Slot::Leaf(*next_leaf - 1)
                    }
                    Node::Vertex { .. } => {
                        Slot::Child(walk(child, Some(id), vertices, parent, next_leaf))
                    }
                };
                vertices[id].slots.push(slot);
            }
            id
        }
        walk(node, None, &mut vertices, &mut parent, &mut next_leaf);
        Ok(RibbonTree {
            d: next_leaf - 1,
            vertices,
            parent,
        })
    }

    /// Canonicalizes a raw tree. Fails only on structural problems; stability and coloring are
    /// left to [`validate`].
    pub fn from_raw(raw: &RawTree) -> Result<RibbonTree, TreeError> {
        let structural: Vec<Diagnostic> = structural_diagnostics(raw)
            .into_iter()
            .filter(Diagnostic::is_structural)
            .collect();
        if !structural.is_empty() {
            return Err(TreeError::Malformed(structural));
        }
        let index = |id: usize| {
            raw.vertices
                .iter()
                .position(|v| v.id == id)
                .expect("checked")
        };
        fn build(raw: &RawTree, at: usize, index: &dyn Fn(usize) -> usize) -> Node {
            let v = &raw.vertices[at];
            let children = v
                .slots
                .iter()
                .map(|s| match s {
                    Slot::Leaf(_) => Node::Leaf,
                    Slot::Child(c) => build(raw, index(*c), index),
                })
                .collect();
            Node::Vertex {
                colored: v.colored,
                children,
            }
        }
        RibbonTree::from_node(&build(raw, index(raw.root), &index))
    }

    pub fn to_raw(&self) -> RawTree {
        RawTree {
            d: self.d,
            root: 0,
            vertices: self.vertices.clone(),
        }
    }

    pub fn to_node(&self) -> Node {
        self.subtree_node(0)
    }

    /// Nested form of the subtree hanging from vertex `v`.
    pub fn subtree_node(&self, v: usize) -> Node {
        let vertex = &self.vertices[v];
        let children = vertex
            .slots
            .iter()
            .map(|s| match s {
                Slot::Leaf(_) => Node::Leaf,
                Slot::Child(c) => self.subtree_node(*c),
            })
            .collect();
        Node::Vertex {
            colored: vertex.colored,
            children,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn is_colored(&self, v: usize) -> bool {
        self.vertices[v].colored
    }

    pub fn valency(&self, v: usize) -> usize {
        self.vertices[v].slots.len() + 1
    }

    pub fn has_colored(&self) -> bool {
        self.vertices.iter().any(|v| v.colored)
    }

    pub fn colored_vertices(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .filter(|v| v.colored)
            .map(|v| v.id)
            .collect()
    }

    /// Finite edges ordered by child id. Edge `k` of this list has child `k + 1`.
    pub fn edges(&self) -> Vec<Edge> {
        (1..self.vertices.len())
            .map(|c| Edge {
                parent: self.parent[c].expect("non-root"),
                child: c,
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        e.child < self.vertices.len() && e.child != 0 && self.parent[e.child] == Some(e.parent)
    }

    /// Child ids of the edges from the root down to `v`, starting at the root.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut path = Vec::new();
        let mut at = v;
        while let Some(p) = self.parent[at] {
            path.push(at);
            at = p;
        }
        path.reverse();
        path
    }

    /// Id of the vertex whose slot holds leaf `leaf`.
    pub fn leaf_parent(&self, leaf: usize) -> Option<usize> {
        self.vertices
            .iter()
            .find(|v| v.slots.contains(&Slot::Leaf(leaf)))
            .map(|v| v.id)
    }

    /// Number of leaves in the subtree of `v`.
    pub fn leaves_below(&self, v: usize) -> usize {
        self.vertices[v]
            .slots
            .iter()
            .map(|s| match s {
                Slot::Leaf(_) => 1,
                Slot::Child(c) => self.leaves_below(*c),
            })
            .sum()
    }

    /// Leaf indices of the subtree of `v`, in order.
    pub fn leaf_range(&self, v: usize) -> core::ops::RangeInclusive<usize> {
        let first = self.first_leaf(v);
        first..=first + self.leaves_below(v) - 1
    }

    fn first_leaf(&self, v: usize) -> usize {
        match self.vertices[v].slots[0] {
            Slot::Leaf(l) => l,
            Slot::Child(c) => self.first_leaf(c),
        }
    }

    /// Whether `v` is uncolored and has a colored descendant.
    pub fn is_below_colored_layer(&self, v: usize) -> bool {
        !self.vertices[v].colored && self.subtree_node(v).has_colored()
    }

    pub fn validate(&self, kind: TreeKind) -> Vec<Diagnostic> {
        validate(&self.to_raw(), kind)
    }

    pub fn is_valid(&self, kind: TreeKind) -> bool {
        self.validate(kind).is_empty()
    }

    /// Number of colored vertices on the path from the root to each leaf, indexed by leaf − 1.
    pub fn colored_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.d];
        fn walk(t: &RibbonTree, v: usize, above: usize, counts: &mut [usize]) {
            let here = above + usize::from(t.vertices[v].colored);
            for s in &t.vertices[v].slots {
                match s {
                    Slot::Leaf(l) => counts[l - 1] = here,
                    Slot::Child(c) => walk(t, *c, here, counts),
                }
            }
        }
        walk(self, 0, 0, &mut counts);
        counts
    }

    /// Dimension of the stratum of this combinatorial type.
    ///
    /// Each uncolored vertex contributes `valency − 3` and each colored vertex `valency − 2`.
    /// This is the cone dimension `|E| − k + 1` summed over the components obtained by cutting
    /// the tree at its nodes.
    pub fn stratum_dim(&self) -> usize {
        self.vertices
            .iter()
            .map(|v| {
                let val = v.slots.len() + 1;
                if v.colored {
                    val.saturating_sub(2)
                } else {
                    val.saturating_sub(3)
                }
            })
            .sum()
    }

    /// Which codimension-one facet of the multiplihedron this type is, if any.
    pub fn facet_label(&self) -> FacetLabel {
        let root = &self.vertices[0];
        let child_slots: Vec<(usize, usize)> = root
            .slots
            .iter()
            .enumerate()
            .filter_map(|(k, s)| match s {
                Slot::Child(c) => Some((k, *c)),
                Slot::Leaf(_) => None,
            })
            .collect();
        let only_leaves = |v: usize| {
            self.vertices[v]
                .slots
                .iter()
                .all(|s| matches!(s, Slot::Leaf(_)))
        };
        if root.colored && self.vertices.len() == 2 && child_slots.len() == 1 {
            let (pos, c) = child_slots[0];
            if !self.vertices[c].colored && only_leaves(c) {
                return FacetLabel::Type1 {
                    e: self.vertices[c].slots.len(),
                    i: pos,
                };
            }
        }
        if !root.colored
            && root.slots.len() >= 2
            && child_slots.len() == root.slots.len()
            && self.vertices.len() == root.slots.len() + 1
            && child_slots
                .iter()
                .all(|&(_, c)| self.vertices[c].colored && only_leaves(c))
        {
            let parts = child_slots
                .iter()
                .map(|&(_, c)| self.vertices[c].slots.len())
                .collect();
            return FacetLabel::Type2 { parts };
        }
        FacetLabel::NotCodimOne
    }

    /// Removes colors and splices out the vertices that become bivalent.
    pub fn forget_colors(&self) -> Result<RibbonTree, TreeError> {
        if self.d < 2 {
            return Err(TreeError::TooFewLeaves);
        }
        fn strip(node: &Node) -> Node {
            match node {
                Node::Leaf => Node::Leaf,
                Node::Vertex { children, .. } => {
                    let mut children: Vec<Node> = children.iter().map(strip).collect();
                    if children.len() == 1 {
                        children.pop().expect("one child")
                    } else {
                        Node::uncolored(children)
                    }
                }
            }
        }
        RibbonTree::from_node(&strip(&self.to_node()))
    }
}

/// Labels of the codimension-one boundary pieces, plus the two Floer breakings that appear in
/// the functor relations but not among tree strata.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FacetLabel {
    /// A colored vertex below an uncolored vertex carrying leaves `i + 1 ..= i + e`.
    Type1 {
        e: usize,
        i: usize,
    },
    /// An uncolored root whose children are colored vertices with `parts[k]` leaves each.
    Type2 {
        parts: Vec<usize>,
    },
    /// Breaking of a Floer trajectory at input `i`.
    FloerIncoming(usize),
    /// Breaking of a Floer trajectory at the output.
    FloerOutgoing,
    NotCodimOne,
}

impl FacetLabel {
    /// All Type 1 and Type 2 labels for `d` leaves: `(e, i)` pairs first, then compositions.
    pub fn all_codim_one(d: usize) -> Vec<FacetLabel> {
        let mut out = Vec::new();
        for e in 2..=d {
            for i in 0..=d - e {
                out.push(FacetLabel::Type1 { e, i });
            }
        }
        for parts in compositions(d) {
            if parts.len() >= 2 {
                out.push(FacetLabel::Type2 { parts });
            }
        }
        out
    }

    /// The tree realizing a Type 1 or Type 2 label.
    pub fn tree(&self, d: usize) -> Option<RibbonTree> {
        let node = match self {
            FacetLabel::Type1 { e, i } => {
                if *e < 2 || i + e > d {
                    return None;
                }
                let mut children = vec![Node::Leaf; d - e + 1];
                children[*i] = Node::corolla(*e);
                Node::colored(children)
            }
            FacetLabel::Type2 { parts } => {
                if parts.len() < 2 || parts.iter().sum::<usize>() != d || parts.contains(&0) {
                    return None;
                }
                Node::uncolored(parts.iter().map(|&s| Node::colored_corolla(s)).collect())
            }
            _ => return None,
        };
        RibbonTree::from_node(&node).ok()
    }
}

/// All compositions of `n` into positive parts, in lexicographic order.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Checks every invariant of a (possibly malformed) tree of the given kind.
///
/// Stability diagnostics are reported even when the structure is broken; the path rule is only
/// evaluated on structurally sound input.
pub fn validate(raw: &RawTree, kind: TreeKind) -> Vec<Diagnostic> {
    let mut diags = structural_diagnostics(raw);
    for v in &raw.vertices {
        let valency = v.slots.len() + 1;
        let required = if v.colored && kind == TreeKind::Colored {
            2
        } else {
            3
        };
        if valency < required {
            diags.push(Diagnostic::Unstable {
                vertex: v.id,
                valency,
                required,
            });
        }
        if v.colored && kind == TreeKind::Uncolored {
            diags.push(Diagnostic::ColoredVertexInUncoloredTree(v.id));
        }
    }
    if kind == TreeKind::Colored && diags.iter().all(|d| !d.is_structural()) {
        if let Ok(tree) = RibbonTree::from_raw(raw) {
            for (k, &count) in tree.colored_counts().iter().enumerate() {
                if count != 1 {
                    diags.push(Diagnostic::ColoredCount { leaf: k + 1, count });
                }
            }
        }
    }
    diags
}

fn structural_diagnostics(raw: &RawTree) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let n = raw.vertices.len();
    let mut index = alloc::collections::BTreeMap::new();
    for (k, v) in raw.vertices.iter().enumerate() {
        if index.insert(v.id, k).is_some() {
            diags.push(Diagnostic::DuplicateVertexId(v.id));
        }
    }
    let Some(&root) = index.get(&raw.root) else {
        diags.push(Diagnostic::UnknownRoot(raw.root));
        return diags;
    };
    let mut parents = vec![0usize; n];
    for v in &raw.vertices {
        for s in &v.slots {
            if let Slot::Child(c) = s {
                match index.get(c) {
                    None => diags.push(Diagnostic::DanglingChild {
                        vertex: v.id,
                        child: *c,
                    }),
                    Some(&k) => parents[k] += 1,
                }
            }
        }
    }
    if parents[root] > 0 {
        diags.push(Diagnostic::RootHasParent);
    }
    for (k, &p) in parents.iter().enumerate() {
        if p > 1 {
            diags.push(Diagnostic::MultipleParents(raw.vertices[k].id));
        }
    }
    // Depth-first traversal in slot order; a vertex is entered at most once so cycles and
    // shared children cannot loop.
    let mut seen = vec![false; n];
    let mut leaves = Vec::new();
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(k) = stack.pop() {
        for s in raw.vertices[k].slots.iter().rev() {
            if let Slot::Child(c) = s {
                if let Some(&ck) = index.get(c) {
                    if !seen[ck] {
                        seen[ck] = true;
                        stack.push(ck);
                    }
                }
            }
        }
    }
    for (k, &s) in seen.iter().enumerate() {
        if !s {
            diags.push(Diagnostic::Unreachable(raw.vertices[k].id));
        }
    }
    fn collect(
        raw: &RawTree,
        k: usize,
        index: &alloc::collections::BTreeMap<usize, usize>,
        guard: &mut [bool],
        leaves: &mut Vec<usize>,
    ) {
        if guard[k] {
            return;
        }
        guard[k] = true;
        for s in &raw.vertices[k].slots {
            match s {
                Slot::Leaf(l) => leaves.push(*l),
                Slot::Child(c) => {
                    if let Some(&ck) = index.get(c) {
                        collect(raw, ck, index, guard, leaves);
                    }
                }
            }
        }
    }
    let mut guard = vec![false; n];
    collect(raw, root, &index, &mut guard, &mut leaves);
    // Leaves hanging from unreachable vertices still count towards "repeated"/"missing".
    for k in 0..n {
        if !seen[k] {
            for s in &raw.vertices[k].slots {
                if let Slot::Leaf(l) = s {
                    leaves.push(*l);
                }
            }
        }
    }
    let mut count = vec![0usize; raw.d + 1];
    for &l in &leaves {
        if l == 0 || l > raw.d {
            diags.push(Diagnostic::LeafOutOfRange(l));
        } else {
            count[l] += 1;
        }
    }
    for (l, &c) in count.iter().enumerate().skip(1) {
        match c {
            0 => diags.push(Diagnostic::LeafMissing(l)),
            1 => {}
            _ => diags.push(Diagnostic::LeafRepeated(l)),
        }
    }
    let in_range: Vec<usize> = leaves
        .iter()
        .copied()
        .filter(|&l| l >= 1 && l <= raw.d)
        .collect();
    if in_range.windows(2).any(|w| w[0] >= w[1]) {
        diags.push(Diagnostic::LeavesOutOfOrder);
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(d: usize, root: usize, vs: &[(usize, bool, &[Slot])]) -> RawTree {
        RawTree {
            d,
            root,
            vertices: vs
                .iter()
                .map(|(id, colored, slots)| Vertex {
                    id: *id,
                    colored: *colored,
                    slots: slots.to_vec(),
                })
                .collect(),
        }
    }

    #[test]
    fn colored_corolla_with_two_leaves_is_valid() {
        let t = RibbonTree::from_node(&Node::colored_corolla(2)).unwrap();
        assert!(t.validate(TreeKind::Colored).is_empty());
    }

    #[test]
    fn bivalent_uncolored_vertex_fails_twice() {
        let r = raw(1, 0, &[(0, false, &[Slot::Leaf(1)])]);
        let diags = validate(&r, TreeKind::Colored);
        assert!(diags.contains(&Diagnostic::Unstable {
            vertex: 0,
            valency: 2,
            required: 3
        }));
        assert!(diags.contains(&Diagnostic::ColoredCount { leaf: 1, count: 0 }));
        assert_eq!(diags.len(), 2);
    }

    #[test]
    fn dangling_reference_is_a_diagnostic() {
        let r = raw(
            2,
            0,
            &[(0, true, &[Slot::Leaf(1), Slot::Child(7), Slot::Leaf(2)])],
        );
        let diags = validate(&r, TreeKind::Colored);
        assert!(diags.contains(&Diagnostic::DanglingChild {
            vertex: 0,
            child: 7
        }));
        assert!(RibbonTree::from_raw(&r).is_err());
    }

    #[test]
    fn cycles_and_shared_children_are_reported() {
        let r = raw(
            2,
            0,
            &[
                (0, false, &[Slot::Child(1), Slot::Child(2)]),
                (1, false, &[Slot::Leaf(1), Slot::Child(2)]),
                (2, false, &[Slot::Leaf(2), Slot::Child(1)]),
            ],
        );
        let diags = validate(&r, TreeKind::Uncolored);
        assert!(diags.contains(&Diagnostic::MultipleParents(1)));
        assert!(diags.contains(&Diagnostic::MultipleParents(2)));
    }

    #[test]
    fn leaf_order_is_checked() {
        let r = raw(2, 5, &[(5, false, &[Slot::Leaf(2), Slot::Leaf(1)])]);
        assert_eq!(
            validate(&r, TreeKind::Uncolored),
            vec![Diagnostic::LeavesOutOfOrder]
        );
    }

    #[test]
    fn raw_ids_are_canonicalized() {
        let r = raw(
            3,
            9,
            &[
                (4, false, &[Slot::Leaf(2), Slot::Leaf(3)]),
                (9, false, &[Slot::Leaf(1), Slot::Child(4)]),
            ],
        );
        let t = RibbonTree::from_raw(&r).unwrap();
        assert_eq!(
            t.to_node(),
            Node::uncolored(vec![Node::Leaf, Node::corolla(2)])
        );
        assert_eq!(
            t.edges(),
            vec![Edge {
                parent: 0,
                child: 1
            }]
        );
        assert_eq!(RibbonTree::from_raw(&t.to_raw()).unwrap(), t);
    }

    #[test]
    fn stratum_dimensions() {
        let top = RibbonTree::from_node(&Node::colored_corolla(3)).unwrap();
        assert_eq!(top.stratum_dim(), 2);
        for d in 2..=6 {
            for label in FacetLabel::all_codim_one(d) {
                let t = label.tree(d).unwrap();
                assert_eq!(t.stratum_dim(), d - 2, "{label:?}");
                assert_eq!(t.facet_label(), label);
            }
        }
        let vertex = Node::uncolored(vec![
            Node::colored_corolla(1),
            Node::uncolored(vec![Node::colored_corolla(1), Node::colored_corolla(1)]),
        ]);
        assert_eq!(RibbonTree::from_node(&vertex).unwrap().stratum_dim(), 0);
    }

    #[test]
    fn facet_label_examples() {
        let t = RibbonTree::from_node(&Node::colored(vec![Node::Leaf, Node::corolla(2)])).unwrap();
        assert_eq!(t.facet_label(), FacetLabel::Type1 { e: 2, i: 1 });
        let t = RibbonTree::from_node(&Node::uncolored(vec![Node::colored_corolla(1); 3])).unwrap();
        assert_eq!(
            t.facet_label(),
            FacetLabel::Type2 {
                parts: vec![1, 1, 1]
            }
        );
        let t = RibbonTree::from_node(&Node::colored_corolla(3)).unwrap();
        assert_eq!(t.facet_label(), FacetLabel::NotCodimOne);
    }

    #[test]
    fn forget_colors_examples() {
        let t = RibbonTree::from_node(&Node::colored_corolla(4)).unwrap();
        assert_eq!(t.forget_colors().unwrap().to_node(), Node::corolla(4));
        let t = RibbonTree::from_node(&Node::uncolored(vec![Node::colored_corolla(1); 2])).unwrap();
        assert_eq!(t.forget_colors().unwrap().to_node(), Node::corolla(2));
        let t = RibbonTree::from_node(&Node::colored_corolla(1)).unwrap();
        assert_eq!(t.forget_colors(), Err(TreeError::TooFewLeaves));
    }

    #[test]
    fn compositions_count() {
        for n in 1..=8 {
            assert_eq!(compositions(n).len(), 1 << (n - 1));
        }
    }

    #[test]
    fn leaf_ranges() {
        let t = RibbonTree::from_node(&Node::uncolored(vec![
            Node::Leaf,
            Node::uncolored(vec![Node::Leaf, Node::corolla(2)]),
        ]))
        .unwrap();
        assert_eq!(t.leaf_range(1), 2..=4);
        assert_eq!(t.leaf_range(2), 3..=4);
        assert_eq!(t.leaf_parent(3), Some(2));
        assert_eq!(t.root_path(2), vec![1, 2]);
    }
}
