//! Truncation of strip-like ends and strip attaching.

use alloc::vec;
use alloc::vec::Vec;

use super::{
    Arc, End, Identification, PatchKind, QuiltSurface, Rect, RectSource, Seam, SeamKind, Side,
    SurfaceError, SurfaceParts,
};

/// Cuts end `end_a` of `a` and end `end_b` of `b` at end-local `s = r` and identifies the two
/// cut sides by `ε_a(r, t) ~ ε_b(r, 1 − t)`. The neck has length `2r`.
///
/// Ends are relabeled in boundary order: the ends of `a` before `end_a`, then those of `b`
/// following `end_b` cyclically, then the remaining ends of `a`.
pub fn truncate_and_identify(
    a: &QuiltSurface,
    end_a: usize,
    b: &QuiltSurface,
    end_b: usize,
    r: f64,
) -> Result<QuiltSurface, SurfaceError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(SurfaceError::BadTruncation(r));
    }
    let mut pa = a.parts().clone();
    let mut pb = b.parts().clone();
    let ea = truncate(&mut pa, end_a, r)?;
    let eb = truncate(&mut pb, end_b, r)?;

    let rect_offset = pa.rects.len();
    let patch_map: Vec<usize> = {
        let mut next = pa.patches.len();
        let surface = pa.patches.iter().position(|p| *p == PatchKind::Surface);
        pb.patches
            .iter()
            .map(|p| match (p, surface) {
                (PatchKind::Surface, Some(s)) => s,
                _ => {
                    pa.patches.push(*p);
                    next += 1;
                    next - 1
                }
            })
            .collect()
    };
    for rect in &pb.rects {
        pa.rects.push(Rect {
            patch: patch_map[rect.patch],
            ..*rect
        });
    }
    for id in &pb.identifications {
        let mut id = *id;
        id.a.rect += rect_offset;
        id.b.rect += rect_offset;
        id.vertex = id.vertex.map(|v| patch_map[v]);
        pa.identifications.push(id);
    }
    for seam in &pb.seams {
        pa.seams.push(Seam {
            rect: seam.rect + rect_offset,
            ..seam.clone()
        });
    }
    for j in &pb.joints {
        let mut j = *j;
        j.a.rect += rect_offset;
        j.b.rect += rect_offset;
        pa.joints.push(j);
    }

    let neck_side = |e: &End| if e.dir > 0 { Side::SHi } else { Side::SLo };
    // In end-local coordinates the gluing flips t; a reversed end already flips it once.
    let flip = (ea.dir > 0) == (eb.dir > 0);
    pa.identifications.push(Identification {
        a: Arc {
            rect: ea.rect,
            side: neck_side(&ea),
            lo: 0.0,
            hi: 1.0,
        },
        b: Arc {
            rect: eb.rect + rect_offset,
            side: neck_side(&eb),
            lo: 0.0,
            hi: 1.0,
        },
        flip,
        vertex: None,
    });

    let mut b_ends: Vec<End> = pb
        .ends
        .iter()
        .map(|e| End {
            rect: e.rect + rect_offset,
            ..*e
        })
        .collect();
    b_ends.sort_by_key(|e| (e.label + (pb.ends.len() + 1) - end_b - 1) % (pb.ends.len() + 1));
    let a_before: Vec<End> = pa
        .ends
        .iter()
        .filter(|e| e.label < end_a)
        .copied()
        .collect();
    let a_after: Vec<End> = pa
        .ends
        .iter()
        .filter(|e| e.label > end_a)
        .copied()
        .collect();
    let mut ends = a_before;
    ends.extend(b_ends);
    ends.extend(a_after);
    for (k, e) in ends.iter_mut().enumerate() {
        e.label = k;
    }
    pa.ends = ends;
    pa.consumed.clear();
    Ok(QuiltSurface::from_parts_unchecked(pa))
}

/// Removes end `label`, shortening its rectangle to end-local length `r`. Returns the removed
/// end.
fn truncate(p: &mut SurfaceParts, label: usize, r: f64) -> Result<End, SurfaceError> {
    let pos = p
        .ends
        .iter()
        .position(|e| e.label == label)
        .ok_or(SurfaceError::NoSuchEnd(label))?;
    let end = p.ends.remove(pos);
    let cut = end.s_at(r);
    let keep = |s: f64| if end.dir > 0 { s <= cut } else { s >= cut };
    let too_short = SurfaceError::TruncationTooShort {
        end: label,
        length: r,
    };
    let rect = &mut p.rects[end.rect];
    let inner = if end.dir > 0 { rect.s_lo } else { rect.s_hi };
    if !keep(inner) || inner == cut {
        return Err(too_short);
    }
    if end.dir > 0 {
        rect.s_hi = cut;
    } else {
        rect.s_lo = cut;
    }
    rect.source = RectSource::Unlabeled;
    rect.thin = true;
    for id in &p.identifications {
        for arc in [id.a, id.b] {
            if arc.rect == end.rect && arc.side.is_horizontal() && !(keep(arc.lo) && keep(arc.hi)) {
                return Err(too_short);
            }
        }
    }
    for j in &p.joints {
        for q in [j.a, j.b] {
            if q.rect == end.rect && !keep(q.s) {
                return Err(too_short);
            }
        }
    }
    let mut seams = Vec::with_capacity(p.seams.len());
    for seam in p.seams.drain(..) {
        if seam.rect != end.rect {
            seams.push(seam);
            continue;
        }
        for points in clip(&seam.points, cut, end.dir) {
            seams.push(Seam {
                points,
                ..seam.clone()
            });
        }
    }
    p.seams = seams;
    Ok(end)
}

/// Pieces of a polyline inside `s <= cut` (`dir > 0`) or `s >= cut`.
fn clip(points: &[(f64, f64)], cut: f64, dir: i8) -> Vec<Vec<(f64, f64)>> {
    let inside = |p: (f64, f64)| if dir > 0 { p.0 <= cut } else { p.0 >= cut };
    let cross = |p: (f64, f64), q: (f64, f64)| -> (f64, f64) {
        let t = if p.1 == q.1 {
            p.1
        } else if !p.0.is_finite() {
            q.1
        } else if !q.0.is_finite() {
            p.1
        } else {
            p.1 + (q.1 - p.1) * (cut - p.0) / (q.0 - p.0)
        };
        (cut, t)
    };
    let mut out = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for (k, &q) in points.iter().enumerate() {
        if k > 0 {
            let p = points[k - 1];
            match (inside(p), inside(q)) {
                (true, false) => {
                    current.push(cross(p, q));
                    out.push(core::mem::take(&mut current));
                }
                (false, true) => current.push(cross(p, q)),
                _ => {}
            }
        }
        if inside(q) && current.last() != Some(&q) {
            current.push(q);
        }
    }
    if current.len() >= 2 {
        out.push(current);
    }
    out.retain(|piece| piece.len() >= 2);
    out
}

/// Attaches `n` layers of unit strips along the free boundary component running from `ζ_k` to
/// `ζ_{k+1}`.
///
/// The first strip is glued along its `t = 1` side with the arclength coordinate of the
/// component, normalized so that `σ = 0` at the point where the end-local coordinate of `ζ_k`
/// vanishes. Each further strip is glued to the `t = 0` side of the previous one.
pub fn attach_strips(s: &QuiltSurface, k: usize, n: usize) -> Result<QuiltSurface, SurfaceError> {
    let component = s
        .boundary_components()
        .into_iter()
        .find(|c| c.start == k)
        .ok_or(SurfaceError::NoSuchComponent(k))?;
    if n == 0 {
        return Ok(s.clone());
    }
    let mut p = s.parts().clone();
    let mut prev: Option<usize> = None;
    for layer in 1..=n {
        let patch = p.patches.len();
        p.patches.push(PatchKind::AttachedStrip {
            component: k,
            layer,
        });
        let rect = p.rects.len();
        p.rects.push(Rect {
            source: RectSource::Strip {
                component: k,
                layer,
            },
            s_lo: f64::NEG_INFINITY,
            s_hi: f64::INFINITY,
            patch,
            thin: false,
        });
        match prev {
            None => {
                for seg in &component.segments {
                    p.identifications.push(Identification {
                        a: Arc {
                            rect: seg.rect,
                            side: seg.side,
                            lo: seg.lo,
                            hi: seg.hi,
                        },
                        b: Arc {
                            rect,
                            side: Side::T1,
                            lo: seg.sigma_lo,
                            hi: seg.sigma_hi,
                        },
                        flip: seg.side == Side::T1,
                        vertex: None,
                    });
                }
            }
            Some(q) => p.identifications.push(Identification {
                a: Arc {
                    rect: q,
                    side: Side::T0,
                    lo: f64::NEG_INFINITY,
                    hi: f64::INFINITY,
                },
                b: Arc {
                    rect,
                    side: Side::T1,
                    lo: f64::NEG_INFINITY,
                    hi: f64::INFINITY,
                },
                flip: false,
                vertex: None,
            }),
        }
        p.seams.push(Seam {
            kind: SeamKind::Attach,
            rect,
            points: vec![(f64::NEG_INFINITY, 1.0), (f64::INFINITY, 1.0)],
        });
        prev = Some(rect);
    }
    p.consumed.push(k);
    p.consumed.sort_unstable();
    Ok(QuiltSurface::from_parts_unchecked(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{Length, MetricTree};
    use crate::surfaces::surface_from_tree;
    use crate::trees::{Node, RibbonTree};

    #[test]
    fn two_half_strips_make_a_finite_strip() {
        let h = QuiltSurface::half_strip();
        let g = truncate_and_identify(&h, 0, &h, 0, 3.0).unwrap();
        assert_eq!(g.rects().len(), 2);
        assert_eq!(g.identifications().len(), 1);
        assert!(g.ends().is_empty());
        let total: f64 = g.rects().iter().map(Rect::length).sum();
        assert_eq!(total, 6.0);
        let c = g.canonical();
        assert_eq!(c.rects().len(), 1);
        assert_eq!((c.rects()[0].s_lo, c.rects()[0].s_hi), (0.0, 6.0));
        assert!(c.rects()[0].thin);
    }

    #[test]
    fn clipping() {
        let u = vec![
            (f64::INFINITY, 1.0 / 3.0),
            (1.0, 1.0 / 3.0),
            (0.5, 0.5),
            (1.0, 2.0 / 3.0),
            (f64::INFINITY, 2.0 / 3.0),
        ];
        assert_eq!(
            1.0 - (1.0 - crate::surfaces::SEAM_LOW),
            crate::surfaces::SEAM_LOW
        );
        let c = clip(&u, 3.0, 1);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0][0], (3.0, 1.0 / 3.0));
        assert_eq!(c[0][4], (3.0, 2.0 / 3.0));
        let c = clip(&u, 0.75, 1);
        assert_eq!(c.len(), 1);
        let expected = [(0.75, 5.0 / 12.0), (0.5, 0.5), (0.75, 7.0 / 12.0)];
        for (p, q) in c[0].iter().zip(expected) {
            assert_eq!(p.0, q.0);
            assert!((p.1 - q.1).abs() < 1e-15);
        }
    }

    #[test]
    fn truncation_errors() {
        let h = QuiltSurface::half_strip();
        assert_eq!(
            truncate_and_identify(&h, 1, &h, 0, 1.0),
            Err(SurfaceError::NoSuchEnd(1))
        );
        assert_eq!(
            truncate_and_identify(&h, 0, &h, 0, 0.0),
            Err(SurfaceError::BadTruncation(0.0))
        );
        // A strip whose end rectangle begins at s = 2 cannot be cut at end-local 1.
        let mut p = h.into_parts();
        p.rects[0].s_lo = 2.0;
        let bad = QuiltSurface::from_parts(p).unwrap();
        assert!(matches!(
            truncate_and_identify(&bad, 0, &QuiltSurface::half_strip(), 0, 1.0),
            Err(SurfaceError::TruncationTooShort { .. })
        ));
    }

    #[test]
    fn attaching_to_the_standard_strip() {
        let s = QuiltSurface::standard_strip();
        assert_eq!(attach_strips(&s, 0, 0).unwrap(), s);
        let q = attach_strips(&s, 0, 1).unwrap();
        assert_eq!(q.patches().len(), 2);
        assert_eq!(q.seam_count(SeamKind::Attach), 1);
        assert_eq!(
            attach_strips(&q, 0, 1),
            Err(SurfaceError::NoSuchComponent(0))
        );
        assert!(attach_strips(&q, 1, 1).is_ok());
    }

    #[test]
    fn attaching_three_strips_to_a_disk() {
        let t = RibbonTree::from_node(&Node::corolla(2)).unwrap();
        let disk = surface_from_tree(&MetricTree::new(t, Vec::<Length>::new()).unwrap()).unwrap();
        let q = attach_strips(&disk, 0, 3).unwrap();
        let strips = q
            .patches()
            .iter()
            .filter(|p| matches!(p, PatchKind::AttachedStrip { .. }))
            .count();
        assert_eq!(strips, 3);
        assert_eq!(q.seam_count(SeamKind::Attach), 3);
        // Component 0 crosses two strips and one vertex corner: two arcs, then two strip-strip gluings.
        assert_eq!(q.identifications().len(), 3 + 2 + 2);
        assert_eq!(q.boundary_components().len(), 2);
    }
}
