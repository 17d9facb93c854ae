//! Quilted surfaces assembled from strips.
//!
//! A surface is a list of rectangles `[s_lo, s_hi] × [0, 1]` (either bound may be infinite)
//! together with identifications between arcs on their sides. Sides `T0` (`t = 0`) and `T1`
//! (`t = 1`) carry `s`-intervals; sides `SLo` and `SHi` (the vertical sides at finite `s_lo`,
//! `s_hi`) carry `t`-intervals. Vertex holes of the strip thickening are kept as vertex-disk
//! patches that are never filled.
//!
//! Seams are polylines in rectangle coordinates. Seam ends that meet at a vertex hole are
//! connected by [`Joint`] records.

mod boundary;
mod build;
mod canonical;
mod fold;
mod glue;

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::moduli::ModuliError;
use crate::trees::TreeError;

pub use boundary::{BoundaryComponent, BoundarySegment};
pub use build::{surface_from_colored_tree, surface_from_layer_base, surface_from_tree};
pub use fold::{fold_quilted_strip, FoldMap};
pub use glue::{attach_strips, truncate_and_identify};

/// Seam levels of the quilted ends, `1/3` and `2/3`. `SEAM_LOW` is defined as `1 − SEAM_HIGH`
/// (one ulp above the nearest double to 1/3) so that `t ↦ 1 − t` swaps them exactly.
pub const SEAM_HIGH: f64 = 2.0 / 3.0;
pub const SEAM_LOW: f64 = 1.0 - SEAM_HIGH;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    T0,
    T1,
    SLo,
    SHi,
}

impl Side {
    pub fn is_horizontal(self) -> bool {
        matches!(self, Side::T0 | Side::T1)
    }
}

/// What a rectangle was built from. Canonical forms erase this.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RectSource {
    /// The strip of the semi-infinite edge `e_k`.
    End(usize),
    /// The strip of the finite edge above tree vertex `child`.
    Edge(usize),
    /// An attached strip.
    Strip {
        component: usize,
        layer: usize,
    },
    Unlabeled,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub source: RectSource,
    pub s_lo: f64,
    pub s_hi: f64,
    pub patch: usize,
    pub thin: bool,
}

impl Rect {
    pub fn length(&self) -> f64 {
        self.s_hi - self.s_lo
    }

    pub fn is_bounded(&self) -> bool {
        self.s_lo.is_finite() && self.s_hi.is_finite()
    }
}

/// An interval on one side of a rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub rect: usize,
    pub side: Side,
    pub lo: f64,
    pub hi: f64,
}

impl Arc {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    fn key_cmp(&self, other: &Arc) -> Ordering {
        (self.rect, self.side)
            .cmp(&(other.rect, other.side))
            .then(self.lo.total_cmp(&other.lo))
            .then(self.hi.total_cmp(&other.hi))
    }
}

/// Glues arc `a` to arc `b` by a translation (`flip = false`, `a.lo ↦ b.lo`) or a reflection
/// (`flip = true`, `a.lo ↦ b.hi`). `vertex` is the vertex-disk patch the gluing surrounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Identification {
    pub a: Arc,
    pub b: Arc,
    pub flip: bool,
    pub vertex: Option<usize>,
}

impl Identification {
    /// Image in `b` of the coordinate `x` on `a`.
    pub fn map(&self, x: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        if self.flip {
            if a.hi.is_finite() && b.lo.is_finite() {
                b.lo + (a.hi - x)
            } else {
                b.hi - (x - a.lo)
            }
        } else if a.lo.is_finite() && b.lo.is_finite() {
            b.lo + (x - a.lo)
        } else {
            b.hi - (a.hi - x)
        }
    }

    /// The same gluing read from `b` to `a`.
    pub fn reversed(&self) -> Identification {
        Identification {
            a: self.b,
            b: self.a,
            flip: self.flip,
            vertex: self.vertex,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SeamKind {
    /// A pair of parallel lines below the colored layer.
    Trunk,
    /// The closed-up seam around a colored vertex.
    Branch,
    /// The gluing line of an attached strip.
    Attach,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Seam {
    pub kind: SeamKind,
    pub rect: usize,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeamPoint {
    pub rect: usize,
    pub s: f64,
    pub t: f64,
}

/// Two seam endpoints joined across a vertex hole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Joint {
    pub a: SeamPoint,
    pub b: SeamPoint,
}

/// Strip-like end `ζ_label`: end-local coordinates are `s_end = dir·(s − origin)` and
/// `t_end = t` (`dir = 1`) or `1 − t` (`dir = −1`); the end is at `s_end → +∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct End {
    pub label: usize,
    pub rect: usize,
    pub dir: i8,
    pub origin: f64,
}

impl End {
    /// Rectangle `s` coordinate of end-local `s_end`.
    pub fn s_at(&self, s_end: f64) -> f64 {
        if self.dir > 0 {
            self.origin + s_end
        } else {
            self.origin - s_end
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PatchKind {
    Surface,
    VertexDisk { valency: usize },
    AttachedStrip { component: usize, layer: usize },
}

/// The raw contents of a surface; see [`QuiltSurface::from_parts`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SurfaceParts {
    pub patches: Vec<PatchKind>,
    pub rects: Vec<Rect>,
    pub identifications: Vec<Identification>,
    pub seams: Vec<Seam>,
    pub joints: Vec<Joint>,
    pub ends: Vec<End>,
    /// Boundary components (by starting end label) that strips were attached to.
    pub consumed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuiltSurface {
    parts: SurfaceParts,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
    #[error("finite edge above vertex {0} has infinite length; glue or cut it first")]
    InfiniteLength(usize),
    #[error("metric tree is not admissible")]
    NotAdmissible,
    #[error("tree must be uncolored")]
    ExpectedUncolored,
    #[error("no end labeled {0}")]
    NoSuchEnd(usize),
    #[error("truncation length must be positive and finite (got {0})")]
    BadTruncation(f64),
    #[error("truncating end {end} at {length} cuts into the rest of the surface")]
    TruncationTooShort { end: usize, length: f64 },
    #[error("no free boundary component starting at end {0}")]
    NoSuchComponent(usize),
    #[error("invalid surface: {0}")]
    Invalid(&'static str),
}

impl QuiltSurface {
    /// Checks index ranges, arc placement and arc lengths.
    pub fn from_parts(parts: SurfaceParts) -> Result<QuiltSurface, SurfaceError> {
        let s = QuiltSurface { parts };
        s.check()?;
        Ok(s)
    }

    pub(crate) fn from_parts_unchecked(parts: SurfaceParts) -> QuiltSurface {
        let s = QuiltSurface { parts };
        debug_assert_eq!(s.check(), Ok(()));
        s
    }

    pub fn parts(&self) -> &SurfaceParts {
        &self.parts
    }

    pub fn into_parts(self) -> SurfaceParts {
        self.parts
    }

    pub fn patches(&self) -> &[PatchKind] {
        &self.parts.patches
    }

    pub fn rects(&self) -> &[Rect] {
        &self.parts.rects
    }

    pub fn identifications(&self) -> &[Identification] {
        &self.parts.identifications
    }

    pub fn seams(&self) -> &[Seam] {
        &self.parts.seams
    }

    pub fn joints(&self) -> &[Joint] {
        &self.parts.joints
    }

    pub fn ends(&self) -> &[End] {
        &self.parts.ends
    }

    pub fn end(&self, label: usize) -> Option<&End> {
        self.parts.ends.iter().find(|e| e.label == label)
    }

    pub fn vertex_disk_count(&self) -> usize {
        self.parts
            .patches
            .iter()
            .filter(|p| matches!(p, PatchKind::VertexDisk { .. }))
            .count()
    }

    pub fn seam_count(&self, kind: SeamKind) -> usize {
        self.parts.seams.iter().filter(|s| s.kind == kind).count()
    }

    /// `ζ_0` alone on the half strip `[0, ∞) × [0, 1]`.
    pub fn half_strip() -> QuiltSurface {
        QuiltSurface::from_parts_unchecked(SurfaceParts {
            patches: alloc::vec![PatchKind::Surface],
            rects: alloc::vec![Rect {
                source: RectSource::End(0),
                s_lo: 0.0,
                s_hi: f64::INFINITY,
                patch: 0,
                thin: true,
            }],
            ends: alloc::vec![End {
                label: 0,
                rect: 0,
                dir: 1,
                origin: 0.0
            }],
            ..SurfaceParts::default()
        })
    }

    /// The strip `ℝ × [0, 1]` with `ζ_0` at `s → −∞` and `ζ_1` at `s → +∞`.
    pub fn standard_strip() -> QuiltSurface {
        QuiltSurface::from_parts_unchecked(SurfaceParts {
            patches: alloc::vec![PatchKind::Surface],
            rects: alloc::vec![Rect {
                source: RectSource::Unlabeled,
                s_lo: f64::NEG_INFINITY,
                s_hi: f64::INFINITY,
                patch: 0,
                thin: true,
            }],
            ends: alloc::vec![
                End {
                    label: 0,
                    rect: 0,
                    dir: -1,
                    origin: 0.0
                },
                End {
                    label: 1,
                    rect: 0,
                    dir: 1,
                    origin: 0.0
                },
            ],
            ..SurfaceParts::default()
        })
    }

    fn check(&self) -> Result<(), SurfaceError> {
        let p = &self.parts;
        let nrect = p.rects.len();
        for r in &p.rects {
            if r.s_lo.is_nan() || r.s_hi.is_nan() || r.s_lo > r.s_hi {
                return Err(SurfaceError::Invalid("rectangle with empty or NaN s-range"));
            }
            if r.patch >= p.patches.len() {
                return Err(SurfaceError::Invalid("rectangle refers to a missing patch"));
            }
        }
        let arc_ok = |a: &Arc| -> bool {
            if a.rect >= nrect || !(a.lo <= a.hi) {
                return false;
            }
            let r = &p.rects[a.rect];
            match a.side {
                Side::T0 | Side::T1 => a.lo >= r.s_lo && a.hi <= r.s_hi,
                Side::SLo => r.s_lo.is_finite() && a.lo >= 0.0 && a.hi <= 1.0,
                Side::SHi => r.s_hi.is_finite() && a.lo >= 0.0 && a.hi <= 1.0,
            }
        };
        for id in &p.identifications {
            if !arc_ok(&id.a) || !arc_ok(&id.b) {
                return Err(SurfaceError::Invalid("identification arc out of range"));
            }
            if id.a.side.is_horizontal() != id.b.side.is_horizontal() {
                return Err(SurfaceError::Invalid("identification mixes s- and t-arcs"));
            }
            let (la, lb) = (id.a.length(), id.b.length());
            let same = la == lb || (la.is_infinite() && lb.is_infinite());
            if !same {
                return Err(SurfaceError::Invalid("identified arcs differ in length"));
            }
            if let Some(v) = id.vertex {
                if !matches!(p.patches.get(v), Some(PatchKind::VertexDisk { .. })) {
                    return Err(SurfaceError::Invalid(
                        "identification names a non-disk patch",
                    ));
                }
            }
        }
        let point_ok = |rect: usize, s: f64, t: f64| {
            rect < nrect
                && s >= p.rects[rect].s_lo
                && s <= p.rects[rect].s_hi
                && (0.0..=1.0).contains(&t)
        };
        for seam in &p.seams {
            if seam.points.len() < 2 || !seam.points.iter().all(|&(s, t)| point_ok(seam.rect, s, t))
            {
                return Err(SurfaceError::Invalid("seam point outside its rectangle"));
            }
        }
        for j in &p.joints {
            if !point_ok(j.a.rect, j.a.s, j.a.t) || !point_ok(j.b.rect, j.b.s, j.b.t) {
                return Err(SurfaceError::Invalid("joint outside its rectangle"));
            }
        }
        for e in &p.ends {
            let r = p
                .rects
                .get(e.rect)
                .ok_or(SurfaceError::Invalid("end refers to a missing rectangle"))?;
            let unbounded = if e.dir > 0 {
                r.s_hi == f64::INFINITY
            } else {
                r.s_lo == f64::NEG_INFINITY
            };
            if e.dir == 0 || !unbounded || !e.origin.is_finite() {
                return Err(SurfaceError::Invalid(
                    "end does not point into an unbounded direction",
                ));
            }
        }
        Ok(())
    }
}

pub(crate) fn cmp_points(a: &[(f64, f64)], b: &[(f64, f64)]) -> Ordering {
    for (p, q) in a.iter().zip(b) {
        let c = p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1));
        if c != Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}
