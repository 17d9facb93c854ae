use multiquilt_core::surfaces::{
    Arc, End, Identification, Joint, PatchKind, QuiltSurface, Rect, RectSource, Seam, SeamKind,
    SeamPoint, Side, SurfaceParts,
};
use serde::{Deserialize, Serialize};

use super::{extended, FormatError};

/// Lossless JSON form of a [`QuiltSurface`]. Infinite rectangle bounds are written as `"inf"`
/// and `"-inf"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDoc {
    pub patches: Vec<PatchDoc>,
    pub rects: Vec<RectDoc>,
    pub identifications: Vec<IdentificationDoc>,
    pub seams: Vec<SeamDoc>,
    pub joints: Vec<JointDoc>,
    pub ends: Vec<EndDoc>,
    pub consumed: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PatchDoc {
    Surface,
    VertexDisk { valency: usize },
    AttachedStrip { component: usize, layer: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceDoc {
    End(usize),
    Edge(usize),
    Strip { component: usize, layer: usize },
    Unlabeled,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectDoc {
    pub source: SourceDoc,
    #[serde(with = "extended")]
    pub s_lo: f64,
    #[serde(with = "extended")]
    pub s_hi: f64,
    pub patch: usize,
    pub thin: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDoc {
    pub rect: usize,
    pub side: SideDoc,
    #[serde(with = "extended")]
    pub lo: f64,
    #[serde(with = "extended")]
    pub hi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideDoc {
    T0,
    T1,
    SLo,
    SHi,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentificationDoc {
    pub a: ArcDoc,
    pub b: ArcDoc,
    pub flip: bool,
    pub vertex: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeamKindDoc {
    Trunk,
    Branch,
    Attach,
}

/// A seam vertex coordinate; seams running into an end reach `s = ±∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coord(#[serde(with = "extended")] pub f64);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeamDoc {
    pub kind: SeamKindDoc,
    pub rect: usize,
    pub points: Vec<[Coord; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeamPointDoc {
    pub rect: usize,
    #[serde(with = "extended")]
    pub s: f64,
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointDoc {
    pub a: SeamPointDoc,
    pub b: SeamPointDoc,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndDoc {
    pub label: usize,
    pub rect: usize,
    pub dir: i8,
    #[serde(with = "extended")]
    pub origin: f64,
}

fn side_doc(s: Side) -> SideDoc {
    match s {
        Side::T0 => SideDoc::T0,
        Side::T1 => SideDoc::T1,
        Side::SLo => SideDoc::SLo,
        Side::SHi => SideDoc::SHi,
    }
}

fn side(s: SideDoc) -> Side {
    match s {
        SideDoc::T0 => Side::T0,
        SideDoc::T1 => Side::T1,
        SideDoc::SLo => Side::SLo,
        SideDoc::SHi => Side::SHi,
    }
}

fn arc_doc(a: &Arc) -> ArcDoc {
    ArcDoc {
        rect: a.rect,
        side: side_doc(a.side),
        lo: a.lo,
        hi: a.hi,
    }
}

fn arc(a: &ArcDoc) -> Arc {
    Arc {
        rect: a.rect,
        side: side(a.side),
        lo: a.lo,
        hi: a.hi,
    }
}

fn point_doc(p: &SeamPoint) -> SeamPointDoc {
    SeamPointDoc {
        rect: p.rect,
        s: p.s,
        t: p.t,
    }
}

fn point(p: &SeamPointDoc) -> SeamPoint {
    SeamPoint {
        rect: p.rect,
        s: p.s,
        t: p.t,
    }
}

impl SurfaceDoc {
    pub fn from_surface(s: &QuiltSurface) -> SurfaceDoc {
        let p = s.parts();
        SurfaceDoc {
            patches: p
                .patches
                .iter()
                .map(|k| match *k {
                    PatchKind::Surface => PatchDoc::Surface,
                    PatchKind::VertexDisk { valency } => PatchDoc::VertexDisk { valency },
                    PatchKind::AttachedStrip { component, layer } => {
                        PatchDoc::AttachedStrip { component, layer }
                    }
                })
                .collect(),
            rects: p
                .rects
                .iter()
                .map(|r| RectDoc {
                    source: match r.source {
                        RectSource::End(k) => SourceDoc::End(k),
                        RectSource::Edge(v) => SourceDoc::Edge(v),
                        RectSource::Strip { component, layer } => {
                            SourceDoc::Strip { component, layer }
                        }
                        RectSource::Unlabeled => SourceDoc::Unlabeled,
                    },
                    s_lo: r.s_lo,
                    s_hi: r.s_hi,
                    patch: r.patch,
                    thin: r.thin,
                })
                .collect(),
            identifications: p
                .identifications
                .iter()
                .map(|id| IdentificationDoc {
                    a: arc_doc(&id.a),
                    b: arc_doc(&id.b),
                    flip: id.flip,
                    vertex: id.vertex,
                })
                .collect(),
            seams: p
                .seams
                .iter()
                .map(|s| SeamDoc {
                    kind: match s.kind {
                        SeamKind::Trunk => SeamKindDoc::Trunk,
                        SeamKind::Branch => SeamKindDoc::Branch,
                        SeamKind::Attach => SeamKindDoc::Attach,
                    },
                    rect: s.rect,
                    points: s
                        .points
                        .iter()
                        .map(|&(a, b)| [Coord(a), Coord(b)])
                        .collect(),
                })
                .collect(),
            joints: p
                .joints
                .iter()
                .map(|j| JointDoc {
                    a: point_doc(&j.a),
                    b: point_doc(&j.b),
                })
                .collect(),
            ends: p
                .ends
                .iter()
                .map(|e| EndDoc {
                    label: e.label,
                    rect: e.rect,
                    dir: e.dir,
                    origin: e.origin,
                })
                .collect(),
            consumed: p.consumed.clone(),
        }
    }

    pub fn to_surface(&self) -> Result<QuiltSurface, FormatError> {
        let parts = SurfaceParts {
            patches: self
                .patches
                .iter()
                .map(|k| match *k {
                    PatchDoc::Surface => PatchKind::Surface,
                    PatchDoc::VertexDisk { valency } => PatchKind::VertexDisk { valency },
                    PatchDoc::AttachedStrip { component, layer } => {
                        PatchKind::AttachedStrip { component, layer }
                    }
                })
                .collect(),
            rects: self
                .rects
                .iter()
                .map(|r| Rect {
                    source: match r.source {
                        SourceDoc::End(k) => RectSource::End(k),
                        SourceDoc::Edge(v) => RectSource::Edge(v),
                        SourceDoc::Strip { component, layer } => {
                            RectSource::Strip { component, layer }
                        }
                        SourceDoc::Unlabeled => RectSource::Unlabeled,
                    },
                    s_lo: r.s_lo,
                    s_hi: r.s_hi,
                    patch: r.patch,
                    thin: r.thin,
                })
                .collect(),
            identifications: self
                .identifications
                .iter()
                .map(|id| Identification {
                    a: arc(&id.a),
                    b: arc(&id.b),
                    flip: id.flip,
                    vertex: id.vertex,
                })
                .collect(),
            seams: self
                .seams
                .iter()
                .map(|s| Seam {
                    kind: match s.kind {
                        SeamKindDoc::Trunk => SeamKind::Trunk,
                        SeamKindDoc::Branch => SeamKind::Branch,
                        SeamKindDoc::Attach => SeamKind::Attach,
                    },
                    rect: s.rect,
                    points: s.points.iter().map(|p| (p[0].0, p[1].0)).collect(),
                })
                .collect(),
            joints: self
                .joints
                .iter()
                .map(|j| Joint {
                    a: point(&j.a),
                    b: point(&j.b),
                })
                .collect(),
            ends: self
                .ends
                .iter()
                .map(|e| End {
                    label: e.label,
                    rect: e.rect,
                    dir: e.dir,
                    origin: e.origin,
                })
                .collect(),
            consumed: self.consumed.clone(),
        };
        Ok(QuiltSurface::from_parts(parts)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_bounds_are_strings() {
        let doc = SurfaceDoc::from_surface(&QuiltSurface::standard_strip());
        let text = serde_json::to_string(&doc.rects[0]).unwrap();
        assert_eq!(
            text,
            r#"{"source":"unlabeled","s_lo":"-inf","s_hi":"inf","patch":0,"thin":true}"#
        );
        let back: SurfaceDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back.to_surface().unwrap(), QuiltSurface::standard_strip());
    }

    #[test]
    fn invalid_parts_are_rejected() {
        let mut doc = SurfaceDoc::from_surface(&QuiltSurface::half_strip());
        doc.rects[0].patch = 5;
        assert!(matches!(doc.to_surface(), Err(FormatError::Surface(_))));
    }
}
