//! JSON documents for trees, metric trees, surfaces and A∞ data.
//!
//! Every document type converts to and from the corresponding core value. Field order is fixed
//! by the struct definitions, and floats are written in shortest round-trip form, so
//! serializing the same value always gives the same bytes.

mod ainfty;
mod surface;
mod tree;

use multiquilt_core::ainfty::AInftyError;
use multiquilt_core::moduli::ModuliError;
use multiquilt_core::surfaces::SurfaceError;
use multiquilt_core::trees::{Diagnostic, TreeError};
use serde::de::DeserializeOwned;
use serde_json::Value;

pub use ainfty::{AInftyDoc, EntryDoc, FunctorDoc, GeneratorDoc};
pub use surface::{
    ArcDoc, Coord, EndDoc, IdentificationDoc, JointDoc, PatchDoc, RectDoc, SeamDoc, SeamPointDoc,
    SourceDoc, SurfaceDoc,
};
pub use tree::{LengthDoc, LengthValue, SlotDoc, TreeDoc, VertexDoc};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("tree is malformed: {}", join(.0))]
    Diagnostics(Vec<Diagnostic>),
    #[error(transparent)]
    Tree(TreeError),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    AInfty(#[from] AInftyError),
    #[error("lambda: {0}")]
    Lambda(String),
    #[error("coefficient {0:?} is not a rational number")]
    Coefficient(String),
}

impl From<TreeError> for FormatError {
    fn from(e: TreeError) -> FormatError {
        match e {
            TreeError::Malformed(d) => FormatError::Diagnostics(d),
            other => FormatError::Tree(other),
        }
    }
}

fn join(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Parses a document that is either bare or wrapped in a report envelope (its `result`).
pub fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let value: Value = serde_json::from_str(text)?;
    let inner = match value {
        Value::Object(mut map) if map.contains_key("tool") && map.contains_key("result") => {
            map.remove("result").expect("checked")
        }
        v => v,
    };
    Ok(serde_json::from_value(inner)?)
}

/// Floats that may be infinite, written as numbers or as `"inf"` / `"-inf"`.
pub(crate) mod extended {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *x == f64::INFINITY {
            s.serialize_str("inf")
        } else if *x == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Text(t) if t == "-inf" => Ok(f64::NEG_INFINITY),
            Raw::Text(t) => Err(de::Error::custom(format!("expected a number, got {t:?}"))),
        }
    }
}
