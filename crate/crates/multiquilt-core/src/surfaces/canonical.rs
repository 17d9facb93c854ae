//! Canonical form: rectangles joined along a whole vertical side are fused, bookkeeping labels
//! are dropped and everything is renumbered from `ζ_0`.
//!
//! Two constructions of the same surface with the same coordinates have equal canonical forms.
//! The fused rectangle keeps the coordinates of its lowest-index constituent.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{
    cmp_points, Arc, Identification, Joint, PatchKind, QuiltSurface, RectSource, Seam, SeamKind,
    SeamPoint, Side, SurfaceParts,
};

/// Coordinate change taking rectangle `b` into the frame of rectangle `a`.
#[derive(Clone, Copy)]
enum Fusion {
    /// `a.hi` meets `b.lo`: `s ↦ a.hi + (s − b.lo)`.
    HiLo { a: f64, b: f64 },
    /// `a.hi` meets `b.hi`: `s ↦ (a.hi + b.hi) − s`, `t ↦ 1 − t`.
    HiHi { a: f64, b: f64 },
    /// `a.lo` meets `b.lo`: `s ↦ a.lo − (s − b.lo)`, `t ↦ 1 − t`.
    LoLo { a: f64, b: f64 },
    /// `a.lo` meets `b.hi`: `s ↦ a.lo − (b.hi − s)`.
    LoHi { a: f64, b: f64 },
}

impl Fusion {
    fn s(self, s: f64) -> f64 {
        match self {
            Fusion::HiLo { a, b } => a + (s - b),
            Fusion::HiHi { a, b } => (a + b) - s,
            Fusion::LoLo { a, b } => a - (s - b),
            Fusion::LoHi { a, b } => a - (b - s),
        }
    }

    fn reverses(self) -> bool {
        matches!(self, Fusion::HiHi { .. } | Fusion::LoLo { .. })
    }

    fn t(self, t: f64) -> f64 {
        if self.reverses() {
            1.0 - t
        } else {
            t
        }
    }

    fn side(self, side: Side) -> Side {
        if !self.reverses() {
            return side;
        }
        match side {
            Side::T0 => Side::T1,
            Side::T1 => Side::T0,
            Side::SLo => Side::SHi,
            Side::SHi => Side::SLo,
        }
    }

    fn arc(self, arc: Arc, into: usize) -> Arc {
        let (x, y) = if arc.side.is_horizontal() {
            (self.s(arc.lo), self.s(arc.hi))
        } else {
            (self.t(arc.lo), self.t(arc.hi))
        };
        Arc {
            rect: into,
            side: self.side(arc.side),
            lo: x.min(y),
            hi: x.max(y),
        }
    }
}

impl QuiltSurface {
    pub fn canonical(&self) -> QuiltSurface {
        let mut p = self.parts().clone();
        while fuse_one(&mut p) {}
        merge_surface_patches(&mut p);
        for r in &mut p.rects {
            r.source = RectSource::Unlabeled;
        }
        merge_seams(&mut p);
        renumber_rects(&mut p);
        sort_and_renumber_patches(&mut p);
        QuiltSurface::from_parts_unchecked(p)
    }
}

fn fuse_one(p: &mut SurfaceParts) -> bool {
    let found = p.identifications.iter().enumerate().find_map(|(k, id)| {
        let full = |a: &Arc| !a.side.is_horizontal() && a.lo == 0.0 && a.hi == 1.0;
        if id.a.rect == id.b.rect || !full(&id.a) || !full(&id.b) {
            return None;
        }
        let id = if id.a.rect < id.b.rect {
            *id
        } else {
            id.reversed()
        };
        let (ra, rb) = (&p.rects[id.a.rect], &p.rects[id.b.rect]);
        let fusion = match (id.a.side, id.b.side, id.flip) {
            (Side::SHi, Side::SLo, false) => Fusion::HiLo {
                a: ra.s_hi,
                b: rb.s_lo,
            },
            (Side::SHi, Side::SHi, true) => Fusion::HiHi {
                a: ra.s_hi,
                b: rb.s_hi,
            },
            (Side::SLo, Side::SLo, true) => Fusion::LoLo {
                a: ra.s_lo,
                b: rb.s_lo,
            },
            (Side::SLo, Side::SHi, false) => Fusion::LoHi {
                a: ra.s_lo,
                b: rb.s_hi,
            },
            _ => return None,
        };
        Some((k, id.a.rect, id.b.rect, fusion))
    });
    let Some((k, a, b, f)) = found else {
        return false;
    };
    p.identifications.remove(k);

    let rb = p.rects[b];
    let (x, y) = (f.s(rb.s_lo), f.s(rb.s_hi));
    let ra = &mut p.rects[a];
    ra.s_lo = ra.s_lo.min(x.min(y));
    ra.s_hi = ra.s_hi.max(x.max(y));
    ra.thin |= rb.thin;

    let shift = |r: usize| if r > b { r - 1 } else { r };
    for id in &mut p.identifications {
        let mut toggles = false;
        for arc in [&mut id.a, &mut id.b] {
            if arc.rect == b {
                *arc = f.arc(*arc, a);
                toggles ^= f.reverses();
            }
            arc.rect = shift(arc.rect);
        }
        id.flip ^= toggles;
    }
    for seam in &mut p.seams {
        if seam.rect == b {
            seam.rect = a;
            for q in &mut seam.points {
                *q = (f.s(q.0), f.t(q.1));
            }
        }
        seam.rect = shift(seam.rect);
    }
    for j in &mut p.joints {
        for q in [&mut j.a, &mut j.b] {
            if q.rect == b {
                *q = SeamPoint {
                    rect: a,
                    s: f.s(q.s),
                    t: f.t(q.t),
                };
            }
            q.rect = shift(q.rect);
        }
    }
    for e in &mut p.ends {
        if e.rect == b {
            e.rect = a;
            e.origin = f.s(e.origin);
            if f.reverses() {
                e.dir = -e.dir;
            }
        }
        e.rect = shift(e.rect);
    }
    p.rects.remove(b);
    true
}

fn merge_surface_patches(p: &mut SurfaceParts) {
    let Some(first) = p.patches.iter().position(|k| *k == PatchKind::Surface) else {
        return;
    };
    let map: Vec<usize> = (0..p.patches.len())
        .map(|k| {
            if p.patches[k] == PatchKind::Surface {
                first
            } else {
                k
            }
        })
        .collect();
    for r in &mut p.rects {
        r.patch = map[r.patch];
    }
    // Unused Surface patches are dropped in the renumbering step.
}

fn merge_seams(p: &mut SurfaceParts) {
    loop {
        let mut merged = false;
        'outer: for i in 0..p.seams.len() {
            for j in i + 1..p.seams.len() {
                if let Some(joined) = join(&p.seams[i], &p.seams[j]) {
                    p.seams[i] = joined;
                    p.seams.remove(j);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    for seam in &mut p.seams {
        simplify(&mut seam.points);
        let mut rev = seam.points.clone();
        rev.reverse();
        if cmp_points(&rev, &seam.points) == Ordering::Less {
            seam.points = rev;
        }
    }
}

fn join(x: &Seam, y: &Seam) -> Option<Seam> {
    if x.rect != y.rect || (x.kind == SeamKind::Attach) != (y.kind == SeamKind::Attach) {
        return None;
    }
    let closed = |s: &Seam| s.points.first() == s.points.last();
    if closed(x) || closed(y) {
        return None;
    }
    let (xf, xl) = (x.points[0], *x.points.last()?);
    let (yf, yl) = (y.points[0], *y.points.last()?);
    let mut a = x.points.clone();
    let mut b = y.points.clone();
    if xl == yf {
    } else if xl == yl {
        b.reverse();
    } else if xf == yl {
        core::mem::swap(&mut a, &mut b);
    } else if xf == yf {
        a.reverse();
    } else {
        return None;
    }
    a.extend_from_slice(&b[1..]);
    Some(Seam {
        kind: x.kind.max(y.kind),
        rect: x.rect,
        points: a,
    })
}

/// Drops repeated points and interior points on a straight continuation.
fn simplify(points: &mut Vec<(f64, f64)>) {
    points.dedup();
    let mut k = 1;
    while k + 1 < points.len() {
        let (p, q, r) = (points[k - 1], points[k], points[k + 1]);
        let horizontal =
            p.1 == q.1 && q.1 == r.1 && ((p.0 < q.0 && q.0 < r.0) || (p.0 > q.0 && q.0 > r.0));
        let straight = [p.0, q.0, r.0].iter().all(|x| x.is_finite()) && {
            let cross = (q.0 - p.0) * (r.1 - q.1) - (q.1 - p.1) * (r.0 - q.0);
            let dot = (q.0 - p.0) * (r.0 - q.0) + (q.1 - p.1) * (r.1 - q.1);
            cross == 0.0 && dot > 0.0
        };
        if horizontal || straight {
            points.remove(k);
        } else {
            k += 1;
        }
    }
}

fn renumber_rects(p: &mut SurfaceParts) {
    let n = p.rects.len();
    let mut neighbours: Vec<Vec<(Side, f64, usize)>> = vec![Vec::new(); n];
    for id in &p.identifications {
        neighbours[id.a.rect].push((id.a.side, id.a.lo, id.b.rect));
        neighbours[id.b.rect].push((id.b.side, id.b.lo, id.a.rect));
    }
    for list in &mut neighbours {
        list.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)));
    }
    let start = p.ends.iter().find(|e| e.label == 0).map_or(0, |e| e.rect);
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in core::iter::once(start).chain(0..n) {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(r) = queue.pop_front() {
            order.push(r);
            for &(_, _, m) in &neighbours[r] {
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
    }
    let mut new_index = vec![0; n];
    for (k, &old) in order.iter().enumerate() {
        new_index[old] = k;
    }
    p.rects = order.iter().map(|&old| p.rects[old]).collect();
    for id in &mut p.identifications {
        id.a.rect = new_index[id.a.rect];
        id.b.rect = new_index[id.b.rect];
    }
    for seam in &mut p.seams {
        seam.rect = new_index[seam.rect];
    }
    for j in &mut p.joints {
        j.a.rect = new_index[j.a.rect];
        j.b.rect = new_index[j.b.rect];
    }
    for e in &mut p.ends {
        e.rect = new_index[e.rect];
    }
}

fn cmp_point(a: &SeamPoint, b: &SeamPoint) -> Ordering {
    a.rect
        .cmp(&b.rect)
        .then(a.s.total_cmp(&b.s))
        .then(a.t.total_cmp(&b.t))
}

fn sort_and_renumber_patches(p: &mut SurfaceParts) {
    for id in &mut p.identifications {
        if id.b.key_cmp(&id.a) == Ordering::Less {
            *id = id.reversed();
        }
    }
    let cmp_id = |x: &Identification, y: &Identification| {
        x.a.key_cmp(&y.a)
            .then(x.b.key_cmp(&y.b))
            .then(x.flip.cmp(&y.flip))
    };
    p.identifications.sort_by(cmp_id);

    // New patch order: used Surface patches, vertex disks by first use, everything else sorted.
    let mut order: Vec<usize> = Vec::new();
    let push = |k: usize, order: &mut Vec<usize>| {
        if !order.contains(&k) {
            order.push(k);
        }
    };
    for r in &p.rects {
        if p.patches[r.patch] == PatchKind::Surface {
            push(r.patch, &mut order);
        }
    }
    for id in &p.identifications {
        if let Some(v) = id.vertex {
            push(v, &mut order);
        }
    }
    let mut rest: Vec<usize> = (0..p.patches.len())
        .filter(|k| !order.contains(k) && p.patches[*k] != PatchKind::Surface)
        .collect();
    rest.sort_by_key(|&k| p.patches[k]);
    for k in rest {
        push(k, &mut order);
    }
    let mut map = vec![usize::MAX; p.patches.len()];
    for (new, &old) in order.iter().enumerate() {
        map[old] = new;
    }
    p.patches = order.iter().map(|&old| p.patches[old]).collect();
    for r in &mut p.rects {
        r.patch = map[r.patch];
    }
    for id in &mut p.identifications {
        id.vertex = id.vertex.map(|v| map[v]);
    }

    p.seams.sort_by(|x, y| {
        x.rect
            .cmp(&y.rect)
            .then(x.kind.cmp(&y.kind))
            .then(cmp_points(&x.points, &y.points))
    });
    for j in &mut p.joints {
        if cmp_point(&j.b, &j.a) == Ordering::Less {
            *j = Joint { a: j.b, b: j.a };
        }
    }
    p.joints
        .sort_by(|x, y| cmp_point(&x.a, &y.a).then(cmp_point(&x.b, &y.b)));
    p.ends.sort_by_key(|e| e.label);
    p.consumed.sort_unstable();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{Length, MetricTree};
    use crate::surfaces::surface_from_colored_tree;
    use crate::trees::{Node, RibbonTree};

    #[test]
    fn basic_piece_is_one_strip() {
        let mt = MetricTree::new(
            RibbonTree::from_node(&Node::colored_corolla(1)).unwrap(),
            vec![],
        )
        .unwrap();
        let c = surface_from_colored_tree(&mt).unwrap().canonical();
        assert_eq!(c.rects().len(), 1);
        assert_eq!(
            (c.rects()[0].s_lo, c.rects()[0].s_hi),
            (f64::NEG_INFINITY, f64::INFINITY)
        );
        assert!(c.identifications().is_empty());
        assert_eq!(c.ends().len(), 2);
        assert_eq!((c.ends()[0].dir, c.ends()[1].dir), (1, -1));
        // The seam avoids the half of the strip facing the input end.
        assert!(c.seams()[0].points.iter().all(|&(s, _)| s >= 0.5));
    }

    #[test]
    fn canonical_is_idempotent() {
        let t = RibbonTree::from_node(&Node::uncolored(vec![
            Node::colored(vec![Node::corolla(2)]),
            Node::colored_corolla(1),
        ]))
        .unwrap();
        let mt = MetricTree::new(t, [2.0, 1.5, 2.0].map(Length::Finite).to_vec()).unwrap();
        let c = surface_from_colored_tree(&mt).unwrap().canonical();
        assert_eq!(c.canonical(), c);
    }

    #[test]
    fn simplify_removes_straight_points() {
        let mut pts = vec![(0.0, 0.5), (1.0, 0.5), (1.0, 0.5), (f64::INFINITY, 0.5)];
        simplify(&mut pts);
        assert_eq!(pts, vec![(0.0, 0.5), (f64::INFINITY, 0.5)]);
        let mut bent = vec![(0.0, 0.0), (1.0, 0.5), (0.0, 1.0)];
        simplify(&mut bent);
        assert_eq!(bent.len(), 3);
    }
}
