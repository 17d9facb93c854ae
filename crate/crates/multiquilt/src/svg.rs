//! SVG 1.1 rendering of quilted surfaces.
//!
//! Each rectangle is drawn in its own row with `s` horizontal and `t` pointing up. Unbounded
//! sides are cut off `clip` units past the finite side (or at `±clip` when both are infinite).
//! Thin rectangles are shaded lighter than thick ones. Identified arcs share a colour index,
//! seams are polylines of class `seam`, joints are dashed, and every end gets an arrow pointing
//! into its unbounded direction.

use std::fmt::Write;

use multiquilt_core::surfaces::{Arc, QuiltSurface, SeamKind, Side};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    pub clip: f64,
    /// Pixels per unit length.
    pub scale: f64,
}

impl Default for SvgOptions {
    fn default() -> SvgOptions {
        SvgOptions {
            clip: 10.0,
            scale: 40.0,
        }
    }
}

const MARGIN: f64 = 20.0;
const GAP: f64 = 0.5;
const PALETTE: [&str; 6] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02",
];

struct Layout {
    s_min: f64,
    ranges: Vec<(f64, f64)>,
    scale: f64,
}

impl Layout {
    fn new(surface: &QuiltSurface, opts: &SvgOptions) -> Layout {
        let ranges: Vec<(f64, f64)> = surface
            .rects()
            .iter()
            .map(|r| clipped(r.s_lo, r.s_hi, opts.clip))
            .collect();
        let s_min = ranges.iter().map(|r| r.0).fold(0.0, f64::min);
        Layout {
            s_min,
            ranges,
            scale: opts.scale,
        }
    }

    fn x(&self, s: f64) -> f64 {
        MARGIN + (s - self.s_min) * self.scale
    }

    fn y(&self, rect: usize, t: f64) -> f64 {
        MARGIN + (rect as f64 * (1.0 + GAP) + (1.0 - t)) * self.scale
    }

    fn clamp(&self, rect: usize, s: f64) -> f64 {
        let (lo, hi) = self.ranges[rect];
        s.clamp(lo, hi)
    }

    fn width(&self) -> f64 {
        let hi = self.ranges.iter().map(|r| r.1).fold(self.s_min, f64::max);
        2.0 * MARGIN + (hi - self.s_min) * self.scale
    }

    fn height(&self) -> f64 {
        let n = self.ranges.len().max(1) as f64;
        2.0 * MARGIN + (n * (1.0 + GAP) - GAP) * self.scale
    }

    /// Endpoints of an arc in pixels.
    fn arc(&self, a: &Arc) -> (f64, f64, f64, f64) {
        let (lo, hi) = self.ranges[a.rect];
        match a.side {
            Side::T0 | Side::T1 => {
                let t = if a.side == Side::T0 { 0.0 } else { 1.0 };
                let (s0, s1) = (self.clamp(a.rect, a.lo), self.clamp(a.rect, a.hi));
                (self.x(s0), self.y(a.rect, t), self.x(s1), self.y(a.rect, t))
            }
            Side::SLo | Side::SHi => {
                let s = if a.side == Side::SLo { lo } else { hi };
                (
                    self.x(s),
                    self.y(a.rect, a.lo),
                    self.x(s),
                    self.y(a.rect, a.hi),
                )
            }
        }
    }
}

fn clipped(lo: f64, hi: f64, clip: f64) -> (f64, f64) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (true, false) => (lo, lo + clip),
        (false, true) => (hi - clip, hi),
        (false, false) => (-clip, clip),
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders `surface`; `metadata` is embedded verbatim (escaped) in a `<metadata>` element.
pub fn render_svg(surface: &QuiltSurface, opts: &SvgOptions, metadata: Option<&str>) -> String {
    let lay = Layout::new(surface, opts);
    let mut out = String::new();
    let (w, h) = (lay.width(), lay.height());
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.3}\" height=\"{h:.3}\" viewBox=\"0 0 {w:.3} {h:.3}\">"
    );
    if let Some(m) = metadata {
        let _ = writeln!(out, "<metadata>{}</metadata>", escape(m));
    }
    out.push_str(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333\"/></marker></defs>\n",
    );

    out.push_str("<g id=\"rects\">\n");
    for (k, r) in surface.rects().iter().enumerate() {
        let (lo, hi) = lay.ranges[k];
        let (fill, class) = if r.thin {
            ("#e8eef7", "rect thin")
        } else {
            ("#b7c7e0", "rect thick")
        };
        let _ = writeln!(
            out,
            "<rect class=\"{class}\" data-rect=\"{k}\" data-patch=\"{}\" x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{fill}\" stroke=\"#555\" stroke-width=\"0.5\"/>",
            r.patch,
            lay.x(lo),
            lay.y(k, 1.0),
            (hi - lo) * lay.scale,
            lay.scale,
        );
    }
    out.push_str("</g>\n<g id=\"identifications\">\n");
    for (k, id) in surface.identifications().iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        for a in [&id.a, &id.b] {
            let (x1, y1, x2, y2) = lay.arc(a);
            let _ = writeln!(
                out,
                "<line class=\"identification\" data-pair=\"{k}\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"{colour}\" stroke-width=\"2\"/>"
            );
        }
    }
    out.push_str("</g>\n<g id=\"seams\">\n");
    for seam in surface.seams() {
        let kind = match seam.kind {
            SeamKind::Trunk => "trunk",
            SeamKind::Branch => "branch",
            SeamKind::Attach => "attach",
        };
        let points: Vec<String> = seam
            .points
            .iter()
            .map(|&(s, t)| {
                format!(
                    "{:.3},{:.3}",
                    lay.x(lay.clamp(seam.rect, s)),
                    lay.y(seam.rect, t)
                )
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline class=\"seam {kind}\" points=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>",
            points.join(" ")
        );
    }
    out.push_str("</g>\n<g id=\"joints\">\n");
    for j in surface.joints() {
        let _ = writeln!(
            out,
            "<line class=\"joint\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#c0392b\" stroke-dasharray=\"3,3\" stroke-width=\"0.75\"/>",
            lay.x(lay.clamp(j.a.rect, j.a.s)),
            lay.y(j.a.rect, j.a.t),
            lay.x(lay.clamp(j.b.rect, j.b.s)),
            lay.y(j.b.rect, j.b.t),
        );
    }
    out.push_str("</g>\n<g id=\"ends\">\n");
    let mut ends = surface.ends().to_vec();
    ends.sort_by_key(|e| e.label);
    for e in &ends {
        let (lo, hi) = lay.ranges[e.rect];
        let y = lay.y(e.rect, 0.5);
        let step = 0.6 * lay.scale;
        let (x1, x2) = if e.dir > 0 {
            (lay.x(hi) - step, lay.x(hi))
        } else {
            (lay.x(lo) + step, lay.x(lo))
        };
        let _ = writeln!(
            out,
            "<line class=\"end\" data-end=\"{}\" x1=\"{x1:.3}\" y1=\"{y:.3}\" x2=\"{x2:.3}\" y2=\"{y:.3}\" stroke=\"#333\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>",
            e.label
        );
        let _ = writeln!(
            out,
            "<text class=\"end-label\" x=\"{:.3}\" y=\"{:.3}\" font-size=\"10\" text-anchor=\"middle\">&#950;{}</text>",
            0.5 * (x1 + x2),
            y - 4.0,
            e.label
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_has_two_ends_and_no_seams() {
        let svg = render_svg(
            &QuiltSurface::standard_strip(),
            &SvgOptions::default(),
            None,
        );
        assert_eq!(svg.matches("class=\"end\"").count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 0);
        assert!(svg.contains("width=\"840.000\""));
    }

    #[test]
    fn metadata_is_escaped() {
        let svg = render_svg(
            &QuiltSurface::half_strip(),
            &SvgOptions::default(),
            Some("a<b"),
        );
        assert!(svg.contains("<metadata>a&lt;b</metadata>"));
    }

    #[test]
    fn clipping() {
        assert_eq!(clipped(f64::NEG_INFINITY, 2.0, 5.0), (-3.0, 2.0));
        assert_eq!(clipped(1.0, f64::INFINITY, 5.0), (1.0, 6.0));
        assert_eq!(clipped(f64::NEG_INFINITY, f64::INFINITY, 5.0), (-5.0, 5.0));
    }
}
