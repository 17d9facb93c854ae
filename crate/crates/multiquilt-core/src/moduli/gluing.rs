//! Domain-side gluing of metric trees along a facet.

use alloc::vec::Vec;

use super::{Length, MetricNode, MetricTree, ModuliError};
use crate::trees::{TreeError, TreeKind};

/// A gluing parameter `δ ∈ (0, 1)` and its gluing length `R = −ln δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GluingParameter {
    delta: f64,
    length: f64,
}

impl GluingParameter {
    pub fn from_delta(delta: f64) -> Result<GluingParameter, ModuliError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(ModuliError::BadDelta(delta));
        }
        Ok(GluingParameter {
            delta,
            length: -libm::log(delta),
        })
    }

    pub fn from_length(length: f64) -> Result<GluingParameter, ModuliError> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(ModuliError::BadGluingLength(length));
        }
        Ok(GluingParameter {
            delta: libm::exp(-length),
            length,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The gluing length `R(δ)`.
    pub fn length(&self) -> f64 {
        self.length
    }
}

/// Grafts `r2` onto leaf `i + 1` of `r1` with a new edge of length `R`.
pub fn glue_type1(
    r1: &MetricTree,
    r2: &MetricTree,
    i: usize,
    g: GluingParameter,
) -> Result<MetricTree, ModuliError> {
    if !r1.tree().is_valid(TreeKind::Colored) {
        return Err(ModuliError::Unstable(TreeKind::Colored));
    }
    if r2.tree().has_colored() {
        return Err(ModuliError::ExpectedUncolored);
    }
    if !r2.tree().is_valid(TreeKind::Uncolored) {
        return Err(ModuliError::Unstable(TreeKind::Uncolored));
    }
    if !r1.is_admissible() {
        return Err(ModuliError::NotAdmissible);
    }
    let d = r1.tree().d();
    if i >= d {
        return Err(TreeError::LeafOutOfRange { leaf: i + 1, d }.into());
    }
    let mut node = r1.to_metric_node();
    graft_metric(
        &mut node,
        i + 1,
        r2.to_metric_node(),
        Length::Finite(g.length()),
    );
    MetricTree::from_metric_node(&node)
}

/// Grafts the colored `parts[j]` onto leaf `j + 1` of the uncolored `r0`, choosing the new edge
/// lengths `ν_j = R + a_j` so that the result is admissible (`a_1 = 0`).
pub fn glue_type2(
    r0: &MetricTree,
    parts: &[MetricTree],
    g: GluingParameter,
) -> Result<MetricTree, ModuliError> {
    if r0.tree().has_colored() {
        return Err(ModuliError::ExpectedUncolored);
    }
    if !r0.tree().is_valid(TreeKind::Uncolored) {
        return Err(ModuliError::Unstable(TreeKind::Uncolored));
    }
    if parts.len() != r0.tree().d() {
        return Err(ModuliError::PartCount {
            expected: r0.tree().d(),
            got: parts.len(),
        });
    }
    for p in parts {
        if !p.tree().is_valid(TreeKind::Colored) {
            return Err(ModuliError::Unstable(TreeKind::Colored));
        }
        if !p.is_admissible() {
            return Err(ModuliError::NotAdmissible);
        }
    }
    let lengths = type2_lengths(r0, parts, g)?;
    let mut node = r0.to_metric_node();
    // Graft right to left so earlier leaf indices stay valid.
    for (j, part) in parts.iter().enumerate().rev() {
        graft_metric(
            &mut node,
            j + 1,
            part.to_metric_node(),
            Length::Finite(lengths[j]),
        );
    }
    MetricTree::from_metric_node(&node)
}

/// The admissible new edge lengths `ν_j` of a Type 2 gluing.
pub fn type2_lengths(
    r0: &MetricTree,
    parts: &[MetricTree],
    g: GluingParameter,
) -> Result<Vec<f64>, ModuliError> {
    let depth = |j: usize| -> Result<f64, ModuliError> {
        let at = r0.tree().leaf_parent(j + 1).expect("leaf exists");
        let att = r0
            .root_distance(at)
            .finite()
            .ok_or(ModuliError::InfiniteDepth)?;
        let cd = parts[j]
            .colored_depth()
            .finite()
            .ok_or(ModuliError::InfiniteDepth)?;
        Ok(att + cd)
    };
    let base = depth(0)?;
    let mut out = Vec::with_capacity(parts.len());
    for j in 0..parts.len() {
        let nu = g.length() + (base - depth(j)?);
        if nu <= 0.0 {
            return Err(ModuliError::GluingLengthTooSmall {
                part: j + 1,
                length: nu,
            });
        }
        out.push(nu);
    }
    Ok(out)
}

fn graft_metric(node: &mut MetricNode, leaf: usize, upper: MetricNode, len: Length) {
    fn go(
        node: &mut MetricNode,
        leaf: usize,
        seen: &mut usize,
        upper: &mut Option<MetricNode>,
        len: Length,
    ) {
        let MetricNode::Vertex { children, .. } = node else {
            return;
        };
        for (child, l) in children.iter_mut() {
            if upper.is_none() {
                return;
            }
            match child {
                MetricNode::Leaf => {
                    *seen += 1;
                    if *seen == leaf {
                        *child = upper.take().expect("grafted once");
                        *l = len;
                    }
                }
                MetricNode::Vertex { .. } => go(child, leaf, seen, upper, len),
            }
        }
    }
    let mut upper = Some(upper);
    go(node, leaf, &mut 0, &mut upper, len);
    debug_assert!(upper.is_none(), "leaf {leaf} not found");
}
