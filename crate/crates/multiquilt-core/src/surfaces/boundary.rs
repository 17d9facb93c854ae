//! Tracing true boundary components.

use alloc::vec::Vec;

use super::{PatchKind, QuiltSurface, Side};

/// A piece of a boundary component lying on one `t`-side of a rectangle. `T0` is traversed in
/// the direction of increasing `s`, `T1` of decreasing `s`. `sigma_lo..sigma_hi` is the
/// arclength interval the piece covers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySegment {
    pub rect: usize,
    pub side: Side,
    pub lo: f64,
    pub hi: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
}

/// The boundary arc from `ζ_start` to the next end.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryComponent {
    pub start: usize,
    pub finish: Option<usize>,
    pub segments: Vec<BoundarySegment>,
}

impl BoundaryComponent {
    /// Total length of the finite segments.
    pub fn finite_length(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.hi - s.lo)
            .filter(|l| l.is_finite())
            .sum()
    }
}

impl QuiltSurface {
    /// Free boundary components of the underlying surface, one per end that has not had strips
    /// attached, ordered by starting end.
    pub fn boundary_components(&self) -> Vec<BoundaryComponent> {
        let mut ends: Vec<_> = self.ends().to_vec();
        ends.sort_by_key(|e| e.label);
        ends.iter()
            .filter(|e| !self.parts().consumed.contains(&e.label))
            .map(|e| self.trace(e.label))
            .collect()
    }

    fn trace(&self, label: usize) -> BoundaryComponent {
        let p = self.parts();
        let end = *self.end(label).expect("end exists");
        let on_surface = |r: usize| p.patches[p.rects[r].patch] == PatchKind::Surface;
        let mut segments = Vec::new();
        // Current position: rectangle and the side we run along.
        let (mut rect, mut side) = (end.rect, if end.dir > 0 { Side::T1 } else { Side::T0 });
        let mut sigma = f64::NEG_INFINITY;
        let mut finish = None;
        for _ in 0..4 * p.rects.len() + 4 {
            let r = p.rects[rect];
            let (lo, hi) = (r.s_lo, r.s_hi);
            let (sigma_lo, sigma_hi) = if segments.is_empty() {
                // σ = −s_end along the first end.
                let exit = if side == Side::T1 { lo } else { hi };
                let s_end = if end.dir > 0 {
                    exit - end.origin
                } else {
                    end.origin - exit
                };
                (f64::NEG_INFINITY, -s_end)
            } else {
                (sigma, sigma + (hi - lo))
            };
            segments.push(BoundarySegment {
                rect,
                side,
                lo,
                hi,
                sigma_lo,
                sigma_hi,
            });
            sigma = sigma_hi;
            // Corner reached at the far end of the traversal.
            let (corner_side, corner_t, exit_s) = if side == Side::T0 {
                (Side::SHi, 0.0, hi)
            } else {
                (Side::SLo, 1.0, lo)
            };
            if exit_s.is_infinite() {
                let dir = if side == Side::T0 { 1 } else { -1 };
                finish = p
                    .ends
                    .iter()
                    .find(|e| e.rect == rect && e.dir == dir)
                    .map(|e| e.label);
                break;
            }
            let next = p.identifications.iter().find_map(|id| {
                [*id, id.reversed()].into_iter().find(|id| {
                    id.a.rect == rect
                        && id.a.side == corner_side
                        && on_surface(id.b.rect)
                        && (id.a.lo == corner_t || id.a.hi == corner_t)
                })
            });
            let Some(id) = next else { break };
            let t = id.map(corner_t);
            side = match (id.b.side, t) {
                (Side::SLo, 0.0) => Side::T0,
                (Side::SHi, 1.0) => Side::T1,
                _ => break,
            };
            rect = id.b.rect;
        }
        BoundaryComponent {
            start: label,
            finish,
            segments,
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::moduli::{Length, MetricTree};
    use crate::surfaces::{surface_from_tree, QuiltSurface, Side};
    use crate::trees::{Node, RibbonTree};
    use alloc::vec;

    #[test]
    fn standard_strip_components() {
        let c = QuiltSurface::standard_strip().boundary_components();
        assert_eq!(c.len(), 2);
        assert_eq!((c[0].start, c[0].finish), (0, Some(1)));
        assert_eq!(c[0].segments[0].side, Side::T0);
        assert_eq!((c[1].start, c[1].finish), (1, Some(0)));
    }

    #[test]
    fn components_run_between_consecutive_ends() {
        let t = RibbonTree::from_node(&Node::uncolored(vec![
            Node::corolla(2),
            Node::Leaf,
            Node::corolla(2),
        ]))
        .unwrap();
        let mt = MetricTree::new(t, vec![Length::Finite(1.5), Length::Finite(2.0)]).unwrap();
        let s = surface_from_tree(&mt).unwrap();
        let comps = s.boundary_components();
        assert_eq!(comps.len(), 6);
        for c in &comps {
            assert_eq!(c.finish, Some((c.start + 1) % 6));
        }
        let total: f64 = comps.iter().map(|c| c.finite_length()).sum();
        // Each finite edge contributes both of its sides.
        assert_eq!(total, 2.0 * (1.5 + 2.0));
        let seg = &comps[2].segments;
        assert_eq!(seg.len(), 3);
        assert_eq!((seg[0].sigma_lo, seg[0].sigma_hi), (f64::NEG_INFINITY, 0.0));
        assert_eq!((seg[1].sigma_lo, seg[1].sigma_hi), (0.0, 1.5));
        assert_eq!((seg[2].sigma_lo, seg[2].sigma_hi), (1.5, f64::INFINITY));
    }
}
