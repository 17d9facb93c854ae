use multiquilt_core::moduli::{
    face_lattice, glue_type1, glue_type2, relations as relation_system, type2_lengths,
    GluingParameter, MetricTree,
};
use multiquilt_core::surfaces::{
    attach_strips, surface_from_colored_tree, surface_from_layer_base, surface_from_tree,
    truncate_and_identify, QuiltSurface, SeamKind, SurfaceError,
};
use multiquilt_core::trees::{catalan, enumerate_strata, FacetLabel, RibbonTree, TreeKind};
use serde::Serialize;
use serde_json::{json, Value};

use super::{read_input, to_value, write_file};
use crate::cli::{CliError, EnumerateArgs, FacesArgs, GlueArgs, RelationsArgs, SurfaceArgs};
use crate::formats::{SurfaceDoc, TreeDoc};
use crate::svg::{render_svg, SvgOptions};

fn facet_value(label: &FacetLabel) -> Value {
    match label {
        FacetLabel::Type1 { e, i } => json!({"type1": {"e": e, "i": i}}),
        FacetLabel::Type2 { parts } => json!({"type2": {"parts": parts}}),
        FacetLabel::FloerIncoming(i) => json!({"floer_incoming": i}),
        FacetLabel::FloerOutgoing => json!("floer_outgoing"),
        FacetLabel::NotCodimOne => Value::Null,
    }
}

#[derive(Serialize)]
struct Stratum {
    dim: usize,
    facet: Value,
    tree: TreeDoc,
}

fn stratum(t: &RibbonTree) -> Stratum {
    Stratum {
        dim: t.stratum_dim(),
        facet: facet_value(&t.facet_label()),
        tree: TreeDoc::from_tree(t),
    }
}

pub fn enumerate(a: &EnumerateArgs) -> Result<Value, CliError> {
    let kind = if a.uncolored {
        TreeKind::Uncolored
    } else {
        TreeKind::Colored
    };
    let all = enumerate_strata(a.d, kind).map_err(|e| CliError::domain("trees", e))?;
    let top = all.iter().map(RibbonTree::stratum_dim).max().unwrap_or(0);
    let mut by_dimension = vec![0usize; top + 1];
    for t in &all {
        by_dimension[t.stratum_dim()] += 1;
    }
    let strata: Vec<Stratum> = all
        .iter()
        .filter(|t| a.dim.is_none_or(|k| t.stratum_dim() == k))
        .map(stratum)
        .collect();
    let catalan_check = a.uncolored.then(|| {
        json!({
            "binary_trees": by_dimension[0],
            "catalan": catalan(a.d as u64 - 1),
        })
    });
    to_value(json!({
        "d": a.d,
        "kind": if a.uncolored { "uncolored" } else { "colored" },
        "count": all.len(),
        "by_dimension": by_dimension,
        "catalan_check": catalan_check,
        "strata": strata,
    }))
}

pub fn faces(a: &FacesArgs) -> Result<Value, CliError> {
    let lattice = face_lattice(a.d).map_err(|e| CliError::domain("moduli", e))?;
    let elements: Vec<Stratum> = lattice.elements().iter().map(stratum).collect();
    let d = a.d as u64;
    to_value(json!({
        "d": a.d,
        "dim": lattice.dim(),
        "f_vector": lattice.f_vector(),
        "euler_characteristic": lattice.euler_characteristic(),
        "codim_one": lattice.codim_one().len(),
        "codim_one_expected": d * (d - 1) / 2 + (1u64 << (d - 1)) - 1,
        "top": lattice.top(),
        "elements": elements,
        "covers": lattice.covers(),
    }))
}

fn read_metric(path: &std::path::Path, default_length: f64) -> Result<MetricTree, CliError> {
    let doc: TreeDoc = read_input(path)?;
    doc.to_metric(default_length)
        .map_err(|e| CliError::domain("tree", e))
}

pub fn relations(a: &RelationsArgs) -> Result<Value, CliError> {
    let doc: TreeDoc = read_input(&a.tree)?;
    let tree = doc.to_tree().map_err(|e| CliError::domain("tree", e))?;
    let system = relation_system(&tree);
    let residual = if doc.lambda.is_some() {
        let mt = doc
            .to_metric(1.0)
            .map_err(|e| CliError::domain("tree", e))?;
        let finite: Option<Vec<f64>> = mt.lengths().iter().map(|l| l.finite()).collect();
        finite.map(|x| system.residual(&x))
    } else {
        None
    };
    let variables: Vec<[usize; 2]> = system
        .variables()
        .iter()
        .map(|e| [e.parent, e.child])
        .collect();
    to_value(json!({
        "tree": TreeDoc::from_tree(&tree),
        "variables": variables,
        "equations": system.equations(),
        "rank": system.rank(),
        "cone_dim": multiquilt_core::moduli::cone_dim(&tree),
        "stratum_dim": tree.stratum_dim(),
        "residual": residual,
    }))
}

pub fn glue(a: &GlueArgs) -> Result<Value, CliError> {
    let g = match (a.delta, a.length) {
        (Some(d), _) => GluingParameter::from_delta(d),
        (None, Some(r)) => GluingParameter::from_length(r),
        (None, None) => unreachable!("clap requires one of them"),
    }
    .map_err(|e| CliError::domain("moduli", e))?;
    let base = read_metric(&a.base, a.default_length)?;
    let parts = a
        .part
        .iter()
        .map(|p| read_metric(p, a.default_length))
        .collect::<Result<Vec<_>, _>>()?;
    let moduli = |e| CliError::domain("moduli", e);
    let (glued, new_lengths, check) = if a.kind == 1 {
        let [part] = parts.as_slice() else {
            return Err(CliError::Usage(String::from(
                "a Type 1 gluing takes exactly one --part",
            )));
        };
        let glued = glue_type1(&base, part, a.i, g).map_err(moduli)?;
        let check = (|| -> Result<bool, SurfaceError> {
            let direct = surface_from_colored_tree(&glued)?.canonical();
            let spliced = truncate_and_identify(
                &surface_from_colored_tree(&base)?,
                a.i + 1,
                &surface_from_tree(part)?,
                0,
                g.length() / 2.0,
            )?;
            Ok(direct == spliced.canonical())
        })();
        (glued, vec![g.length()], check)
    } else {
        let glued = glue_type2(&base, &parts, g).map_err(moduli)?;
        let nus = type2_lengths(&base, &parts, g).map_err(moduli)?;
        let check = (|| -> Result<bool, SurfaceError> {
            let direct = surface_from_colored_tree(&glued)?.canonical();
            let mut s = surface_from_layer_base(&base)?;
            for j in (0..parts.len()).rev() {
                let b = surface_from_colored_tree(&parts[j])?;
                s = truncate_and_identify(&s, j + 1, &b, 0, nus[j] / 2.0)?;
            }
            Ok(direct == s.canonical())
        })();
        (glued, nus, check)
    };
    let surface_check = match check {
        Ok(same) => json!({"matches_truncated_gluing": same}),
        Err(e) => json!({"error": e.to_string()}),
    };
    to_value(json!({
        "type": a.kind,
        "delta": g.delta(),
        "length": g.length(),
        "new_edge_lengths": new_lengths,
        "admissible": glued.is_admissible(),
        "tree": TreeDoc::from_metric(&glued),
        "surface_check": surface_check,
    }))
}

fn summary(s: &QuiltSurface) -> Value {
    json!({
        "rects": s.rects().len(),
        "patches": s.patches().len(),
        "vertex_disks": s.vertex_disk_count(),
        "identifications": s.identifications().len(),
        "seams": {
            "trunk": s.seam_count(SeamKind::Trunk),
            "branch": s.seam_count(SeamKind::Branch),
            "attach": s.seam_count(SeamKind::Attach),
        },
        "ends": s.ends().len(),
        "boundary_lengths": s
            .boundary_components()
            .iter()
            // `+ 0.0` turns an empty sum's `-0.0` into `0.0`.
            .map(|c| json!({"start": c.start, "finish": c.finish, "finite_length": c.finite_length() + 0.0}))
            .collect::<Vec<_>>(),
    })
}

pub fn surface(a: &SurfaceArgs, provenance: &str) -> Result<Value, CliError> {
    let mt = read_metric(&a.tree, a.default_length)?;
    let err = |e: SurfaceError| CliError::domain("surface", e);
    let mut s = if mt.tree().has_colored() {
        surface_from_colored_tree(&mt).map_err(err)?
    } else {
        surface_from_tree(&mt).map_err(err)?
    };
    if let (Some(k), Some(n)) = (a.attach, a.strips) {
        s = attach_strips(&s, k, n).map_err(err)?;
    }
    if let Some(path) = &a.svg {
        if !(a.clip > 0.0 && a.clip.is_finite()) {
            return Err(CliError::Usage(format!(
                "--clip must be positive and finite (got {})",
                a.clip
            )));
        }
        let opts = SvgOptions {
            clip: a.clip,
            ..SvgOptions::default()
        };
        write_file(path, &render_svg(&s, &opts, Some(provenance)))?;
    }
    to_value(json!({
        "summary": summary(&s),
        "surface": SurfaceDoc::from_surface(&s),
    }))
}
