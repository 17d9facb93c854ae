//! Strip thickening of metric trees.

use alloc::vec;
use alloc::vec::Vec;

use super::{
    Arc, End, Identification, Joint, PatchKind, QuiltSurface, Rect, RectSource, Seam, SeamKind,
    SeamPoint, Side, SurfaceError, SurfaceParts, SEAM_HIGH, SEAM_LOW,
};
use crate::moduli::{Length, MetricTree};
use crate::trees::Slot;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Plain,
    Colored,
    LayerBase,
}

/// Strip thickening of an uncolored metric tree, without seams.
pub fn surface_from_tree(mt: &MetricTree) -> Result<QuiltSurface, SurfaceError> {
    if mt.tree().has_colored() {
        return Err(SurfaceError::ExpectedUncolored);
    }
    build(mt, Mode::Plain)
}

/// Strip thickening of an admissible colored metric tree with its seams.
///
/// Strips below the colored layer carry two seam lines at `t = 1/3, 2/3`; the strip entering a
/// colored vertex carries a cap closing those lines off before the vertex.
pub fn surface_from_colored_tree(mt: &MetricTree) -> Result<QuiltSurface, SurfaceError> {
    if !mt.is_admissible() {
        return Err(SurfaceError::NotAdmissible);
    }
    build(mt, Mode::Colored)
}

/// An uncolored tree treated as lying entirely below the colored layer: every strip, leaves
/// included, carries the two seam lines. This is the base piece of a Type 2 gluing.
pub fn surface_from_layer_base(mt: &MetricTree) -> Result<QuiltSurface, SurfaceError> {
    if mt.tree().has_colored() {
        return Err(SurfaceError::ExpectedUncolored);
    }
    build(mt, Mode::LayerBase)
}

struct StripRef {
    rect: usize,
    outward: bool,
}

fn build(mt: &MetricTree, mode: Mode) -> Result<QuiltSurface, SurfaceError> {
    let tree = mt.tree();
    let n = tree.vertex_count();
    let mut lengths = vec![0.0; n];
    for c in 1..n {
        lengths[c] = match mt.length_above(c) {
            Length::Finite(x) => x,
            Length::Infinite => return Err(SurfaceError::InfiniteLength(c)),
        };
    }

    let mut parts = SurfaceParts {
        patches: vec![PatchKind::Surface],
        ..SurfaceParts::default()
    };
    let end_rect = |label: usize| Rect {
        source: RectSource::End(label),
        s_lo: 0.0,
        s_hi: f64::INFINITY,
        patch: 0,
        thin: true,
    };
    parts.rects.push(end_rect(0));
    parts.ends.push(End {
        label: 0,
        rect: 0,
        dir: 1,
        origin: 0.0,
    });
    // edge_rect[c]: rectangle of the edge above c (index 0 is the root end).
    let mut edge_rect = vec![0usize; n];
    let mut leaf_rect = vec![0usize; tree.d() + 1];
    for v in tree.vertices() {
        for slot in &v.slots {
            let k = parts.rects.len();
            match *slot {
                Slot::Leaf(l) => {
                    parts.rects.push(end_rect(l));
                    parts.ends.push(End {
                        label: l,
                        rect: k,
                        dir: 1,
                        origin: 0.0,
                    });
                    leaf_rect[l] = k;
                }
                Slot::Child(c) => {
                    parts.rects.push(Rect {
                        source: RectSource::Edge(c),
                        s_lo: 0.0,
                        s_hi: lengths[c],
                        patch: 0,
                        thin: lengths[c] >= 1.0,
                    });
                    edge_rect[c] = k;
                }
            }
        }
    }
    parts.ends.sort_by_key(|e| e.label);

    let colored_mode = mode == Mode::Colored;
    let below =
        |v: usize| mode == Mode::LayerBase || (colored_mode && tree.is_below_colored_layer(v));

    for v in tree.vertices() {
        let mut strips = vec![StripRef {
            rect: edge_rect[v.id],
            outward: v.id == 0,
        }];
        for slot in &v.slots {
            let rect = match *slot {
                Slot::Leaf(l) => leaf_rect[l],
                Slot::Child(c) => edge_rect[c],
            };
            strips.push(StripRef {
                rect,
                outward: true,
            });
        }
        let side_s = |st: &StripRef| -> (Side, f64) {
            if st.outward {
                (Side::SLo, parts.rects[st.rect].s_lo)
            } else {
                (Side::SHi, parts.rects[st.rect].s_hi)
            }
        };
        let k = strips.len();
        if k == 2 {
            let (sa, _) = side_s(&strips[0]);
            let (sb, _) = side_s(&strips[1]);
            parts.identifications.push(Identification {
                a: Arc {
                    rect: strips[0].rect,
                    side: sa,
                    lo: 0.0,
                    hi: 1.0,
                },
                b: Arc {
                    rect: strips[1].rect,
                    side: sb,
                    lo: 0.0,
                    hi: 1.0,
                },
                flip: strips[0].outward == strips[1].outward,
                vertex: None,
            });
        } else {
            let disk = parts.patches.len();
            parts.patches.push(PatchKind::VertexDisk { valency: k });
            for m in 0..k {
                let (x, y) = (&strips[m], &strips[(m + 1) % k]);
                let upper = if x.outward { (0.5, 1.0) } else { (0.0, 0.5) };
                let lower = if y.outward { (0.0, 0.5) } else { (0.5, 1.0) };
                parts.identifications.push(Identification {
                    a: Arc {
                        rect: x.rect,
                        side: side_s(x).0,
                        lo: upper.0,
                        hi: upper.1,
                    },
                    b: Arc {
                        rect: y.rect,
                        side: side_s(y).0,
                        lo: lower.0,
                        hi: lower.1,
                    },
                    flip: x.outward == y.outward,
                    vertex: Some(disk),
                });
            }
        }
        if below(v.id) {
            for m in 0..k {
                let (x, y) = (&strips[m], &strips[(m + 1) % k]);
                let prime = |st: &StripRef, tp: f64| if st.outward { tp } else { 1.0 - tp };
                parts.joints.push(Joint {
                    a: SeamPoint {
                        rect: x.rect,
                        s: side_s(x).1,
                        t: prime(x, SEAM_HIGH),
                    },
                    b: SeamPoint {
                        rect: y.rect,
                        s: side_s(y).1,
                        t: prime(y, SEAM_LOW),
                    },
                });
            }
        }
    }

    if mode != Mode::Plain {
        // (rect, child vertex or None for a leaf end)
        let mut strips: Vec<(usize, Option<usize>)> = vec![(0, Some(0))];
        strips.extend((1..n).map(|c| (edge_rect[c], Some(c))));
        strips.extend((1..=tree.d()).map(|l| (leaf_rect[l], None)));
        for (rect, child) in strips {
            let r = parts.rects[rect];
            match child {
                Some(c) if colored_mode && tree.is_colored(c) => {
                    parts.seams.push(Seam {
                        kind: SeamKind::Branch,
                        rect,
                        points: cap(r.s_hi),
                    });
                }
                _ if child.map_or(mode == Mode::LayerBase, below) => {
                    for t in [SEAM_LOW, SEAM_HIGH] {
                        parts.seams.push(Seam {
                            kind: SeamKind::Trunk,
                            rect,
                            points: vec![(r.s_lo, t), (r.s_hi, t)],
                        });
                    }
                }
                _ => {}
            }
        }
    }
    Ok(QuiltSurface::from_parts_unchecked(parts))
}

/// The cap closing off the two seam lines before the far end of a strip `[0, len]` (the colored
/// vertex). On the root end (`len = ∞`) it sits at distance 1/2 to 1 from the root vertex.
fn cap(len: f64) -> Vec<(f64, f64)> {
    if len.is_infinite() {
        vec![
            (len, SEAM_LOW),
            (1.0, SEAM_LOW),
            (0.5, 0.5),
            (1.0, SEAM_HIGH),
            (len, SEAM_HIGH),
        ]
    } else {
        let w = f64::min(1.0, len / 2.0);
        vec![
            (0.0, SEAM_LOW),
            (len - w, SEAM_LOW),
            (len - w / 2.0, 0.5),
            (len - w, SEAM_HIGH),
            (0.0, SEAM_HIGH),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{Node, RibbonTree};

    fn metric(node: Node, lengths: &[f64]) -> MetricTree {
        MetricTree::new(
            RibbonTree::from_node(&node).unwrap(),
            lengths.iter().map(|&x| Length::Finite(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn trivalent_vertex() {
        let s = surface_from_tree(&metric(Node::corolla(2), &[])).unwrap();
        assert_eq!(s.rects().len(), 3);
        assert_eq!(s.identifications().len(), 3);
        assert_eq!(s.vertex_disk_count(), 1);
        assert!(s.rects().iter().all(|r| r.s_hi.is_infinite()));
    }

    #[test]
    fn corolla_counts() {
        for d in 2..=6 {
            let s = surface_from_tree(&metric(Node::corolla(d), &[])).unwrap();
            assert_eq!(s.rects().len(), d + 1);
            assert_eq!(s.identifications().len(), d + 1);
        }
    }

    #[test]
    fn binary_three_leaf_tree() {
        let s = surface_from_tree(&metric(
            Node::uncolored(vec![Node::corolla(2), Node::Leaf]),
            &[2.0],
        ))
        .unwrap();
        let infinite = s.rects().iter().filter(|r| !r.is_bounded()).count();
        let finite: Vec<f64> = s
            .rects()
            .iter()
            .filter(|r| r.is_bounded())
            .map(|r| r.length())
            .collect();
        assert_eq!(infinite, 4);
        assert_eq!(finite, vec![2.0]);
        assert_eq!(s.identifications().len(), 6);
    }

    #[test]
    fn basic_piece_has_one_capped_seam() {
        let s = surface_from_colored_tree(&metric(Node::colored_corolla(1), &[])).unwrap();
        assert_eq!(s.seams().len(), 1);
        assert_eq!(s.seams()[0].kind, SeamKind::Branch);
        assert_eq!(s.vertex_disk_count(), 0);
        // The seam stays at distance >= 1/2 from the colored vertex.
        assert!(s.seams()[0].points.iter().all(|&(x, _)| x >= 0.5));
    }

    #[test]
    fn colored_corolla_root_branch_only() {
        let s = surface_from_colored_tree(&metric(Node::colored_corolla(3), &[])).unwrap();
        assert_eq!(s.seam_count(SeamKind::Branch), 1);
        assert_eq!(s.seam_count(SeamKind::Trunk), 0);
        assert!(s.joints().is_empty());
    }

    #[test]
    fn type2_tree_has_branch_per_colored_vertex() {
        let s = surface_from_colored_tree(&metric(
            Node::uncolored(vec![Node::colored_corolla(1), Node::colored_corolla(2)]),
            &[3.0, 3.0],
        ))
        .unwrap();
        assert_eq!(s.seam_count(SeamKind::Branch), 2);
        assert_eq!(s.seam_count(SeamKind::Trunk), 2);
        assert_eq!(s.joints().len(), 3);
    }

    #[test]
    fn rejects_inadmissible_and_colored_plain() {
        let bad = metric(
            Node::uncolored(vec![Node::colored_corolla(1), Node::colored_corolla(1)]),
            &[1.0, 2.0],
        );
        assert_eq!(
            surface_from_colored_tree(&bad),
            Err(SurfaceError::NotAdmissible)
        );
        assert_eq!(
            surface_from_tree(&bad),
            Err(SurfaceError::ExpectedUncolored)
        );
    }
}
