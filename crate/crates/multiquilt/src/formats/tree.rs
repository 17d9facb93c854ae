use std::collections::BTreeMap;

use multiquilt_core::moduli::{Length, MetricNode, MetricTree};
use multiquilt_core::trees::{RawTree, RibbonTree, Slot, TreeKind, Vertex};
use serde::{Deserialize, Serialize};

use super::FormatError;

/// `{"d", "root", "vertices": [{"id", "colored", "slots"}], "lambda"?}`.
///
/// Trees written by this crate use canonical preorder ids with the root at 0. On input the
/// ids are arbitrary; `lambda`, when present, names edges by those ids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub d: usize,
    pub root: usize,
    pub vertices: Vec<VertexDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<LengthDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: usize,
    pub colored: bool,
    pub slots: Vec<SlotDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotDoc {
    Child(usize),
    Leaf(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthDoc {
    pub edge: [usize; 2],
    pub len: LengthValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthValue {
    Finite(f64),
    Infinite(Inf),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Inf {
    #[serde(rename = "inf")]
    Inf,
}

impl From<Length> for LengthValue {
    fn from(l: Length) -> LengthValue {
        match l {
            Length::Finite(x) => LengthValue::Finite(x),
            Length::Infinite => LengthValue::Infinite(Inf::Inf),
        }
    }
}

impl From<LengthValue> for Length {
    fn from(l: LengthValue) -> Length {
        match l {
            LengthValue::Finite(x) => Length::Finite(x),
            LengthValue::Infinite(_) => Length::Infinite,
        }
    }
}

impl TreeDoc {
    pub fn from_tree(tree: &RibbonTree) -> TreeDoc {
        let raw = tree.to_raw();
        TreeDoc {
            d: raw.d,
            root: raw.root,
            vertices: raw
                .vertices
                .iter()
                .map(|v| VertexDoc {
                    id: v.id,
                    colored: v.colored,
                    slots: v
                        .slots
                        .iter()
                        .map(|s| match *s {
                            Slot::Leaf(l) => SlotDoc::Leaf(l),
                            Slot::Child(c) => SlotDoc::Child(c),
                        })
                        .collect(),
                })
                .collect(),
            lambda: None,
        }
    }

    pub fn from_metric(mt: &MetricTree) -> TreeDoc {
        let mut doc = TreeDoc::from_tree(mt.tree());
        doc.lambda = Some(
            mt.tree()
                .edges()
                .iter()
                .zip(mt.lengths())
                .map(|(e, l)| LengthDoc {
                    edge: [e.parent, e.child],
                    len: (*l).into(),
                })
                .collect(),
        );
        doc
    }

    pub fn to_raw(&self) -> RawTree {
        RawTree {
            d: self.d,
            root: self.root,
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    id: v.id,
                    colored: v.colored,
                    slots: v
                        .slots
                        .iter()
                        .map(|s| match *s {
                            SlotDoc::Leaf(l) => Slot::Leaf(l),
                            SlotDoc::Child(c) => Slot::Child(c),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// The canonical tree. Structural problems, stability and the coloring rule are all
    /// reported as diagnostics.
    pub fn to_tree(&self) -> Result<RibbonTree, FormatError> {
        let raw = self.to_raw();
        let tree = RibbonTree::from_raw(&raw)?;
        let kind = if tree.has_colored() {
            TreeKind::Colored
        } else {
            TreeKind::Uncolored
        };
        let diags = multiquilt_core::trees::validate(&raw, kind);
        if !diags.is_empty() {
            return Err(FormatError::Diagnostics(diags));
        }
        Ok(tree)
    }

    /// The metric tree. Without `lambda`, every edge gets `default_length`.
    pub fn to_metric(&self, default_length: f64) -> Result<MetricTree, FormatError> {
        let tree = self.to_tree()?;
        let Some(lambda) = &self.lambda else {
            return Ok(MetricTree::uniform(tree, default_length)?);
        };
        let mut lengths = BTreeMap::new();
        for l in lambda {
            if lengths
                .insert((l.edge[0], l.edge[1]), Length::from(l.len))
                .is_some()
            {
                return Err(FormatError::Lambda(format!(
                    "edge {:?} is listed twice",
                    l.edge
                )));
            }
        }
        let by_id: BTreeMap<usize, &VertexDoc> = self.vertices.iter().map(|v| (v.id, v)).collect();
        let node = metric_node(self.root, &by_id, &mut lengths)?;
        if let Some((e, _)) = lengths.into_iter().next() {
            return Err(FormatError::Lambda(format!(
                "edge {:?} is not an edge of the tree",
                [e.0, e.1]
            )));
        }
        Ok(MetricTree::from_metric_node(&node)?)
    }
}

fn metric_node(
    id: usize,
    by_id: &BTreeMap<usize, &VertexDoc>,
    lengths: &mut BTreeMap<(usize, usize), Length>,
) -> Result<MetricNode, FormatError> {
    let v = by_id[&id];
    let mut children = Vec::with_capacity(v.slots.len());
    for s in &v.slots {
        children.push(match *s {
            SlotDoc::Leaf(_) => (MetricNode::Leaf, Length::Finite(0.0)),
            SlotDoc::Child(c) => {
                let len = lengths.remove(&(id, c)).ok_or_else(|| {
                    FormatError::Lambda(format!("no length for edge [{id}, {c}]"))
                })?;
                (metric_node(c, by_id, lengths)?, len)
            }
        });
    }
    Ok(MetricNode::Vertex {
        colored: v.colored,
        children,
    })
}
