use std::str::FromStr;

use multiquilt_core::ainfty::{AInftyData, FunctorData, Generator, Multilinear, Q};
use serde::{Deserialize, Serialize};

use super::FormatError;

/// `{"objects", "generators": [{"source", "target", "degree"}], "mu": [entry]}` where the
/// arity of an entry is the length of its `inputs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AInftyDoc {
    pub objects: usize,
    pub generators: Vec<GeneratorDoc>,
    pub mu: Vec<EntryDoc>,
}

/// `{"object_map": [..], "phi": [entry]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub object_map: Vec<usize>,
    pub phi: Vec<EntryDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub source: usize,
    pub target: usize,
    pub degree: i32,
}

/// One coefficient: `map(inputs) ∋ coeff · output`. Coefficients are integers or strings such
/// as `"-3/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub inputs: Vec<usize>,
    pub output: usize,
    pub coeff: Coeff,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn from_q(q: Q) -> Coeff {
        if *q.denom() == 1 {
            if let Ok(n) = i64::try_from(*q.numer()) {
                return Coeff::Int(n);
            }
        }
        Coeff::Text(q.to_string())
    }

    fn to_q(&self) -> Result<Q, FormatError> {
        match self {
            Coeff::Int(n) => Ok(Q::from_integer(i128::from(*n))),
            Coeff::Text(t) => {
                Q::from_str(t.trim()).map_err(|_| FormatError::Coefficient(t.clone()))
            }
        }
    }
}

fn entries_of(maps: impl Iterator<Item = Multilinear>) -> Vec<EntryDoc> {
    let mut out = Vec::new();
    for m in maps {
        for (inputs, v) in m.entries() {
            for (&g, &c) in v {
                out.push(EntryDoc {
                    inputs: inputs.clone(),
                    output: g,
                    coeff: Coeff::from_q(c),
                });
            }
        }
    }
    out
}

fn maps_of(entries: &[EntryDoc]) -> Result<Vec<Multilinear>, FormatError> {
    let mut maps: Vec<Multilinear> = Vec::new();
    for e in entries {
        let n = e.inputs.len();
        if n == 0 {
            return Err(FormatError::Coefficient(String::from(
                "entry with no inputs",
            )));
        }
        if maps.len() < n {
            maps.resize(n, Multilinear::new());
        }
        maps[n - 1].add(e.inputs.clone(), e.output, e.coeff.to_q()?);
    }
    Ok(maps)
}

impl AInftyDoc {
    pub fn from_data(a: &AInftyData) -> AInftyDoc {
        AInftyDoc {
            objects: a.objects(),
            generators: a
                .generators()
                .iter()
                .map(|g| GeneratorDoc {
                    source: g.source,
                    target: g.target,
                    degree: g.degree,
                })
                .collect(),
            mu: entries_of((1..=a.max_arity()).map(|n| a.mu(n).clone())),
        }
    }

    pub fn to_data(&self) -> Result<AInftyData, FormatError> {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator {
                source: g.source,
                target: g.target,
                degree: g.degree,
            })
            .collect();
        Ok(AInftyData::new(
            self.objects,
            generators,
            maps_of(&self.mu)?,
        )?)
    }
}

impl FunctorDoc {
    pub fn from_data(f: &FunctorData) -> FunctorDoc {
        FunctorDoc {
            object_map: f.object_map().to_vec(),
            phi: entries_of((1..=f.max_arity()).map(|n| f.phi(n).clone())),
        }
    }

    pub fn to_data(&self, a: &AInftyData, b: &AInftyData) -> Result<FunctorData, FormatError> {
        Ok(FunctorData::new(
            a,
            b,
            self.object_map.clone(),
            maps_of(&self.phi)?,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use multiquilt_core::ainfty::{exterior_dga, exterior_dga_morphism};

    #[test]
    fn round_trip_of_the_exterior_algebra() {
        let a = exterior_dga().to_ainfty();
        let doc = AInftyDoc::from_data(&a);
        let text = serde_json::to_string(&doc).unwrap();
        let back: AInftyDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_data().unwrap(), a);
        let f = exterior_dga_morphism()
            .to_functor(&exterior_dga(), &exterior_dga())
            .unwrap();
        let fd = FunctorDoc::from_data(&f);
        assert_eq!(fd.to_data(&a, &a).unwrap(), f);
    }

    #[test]
    fn rational_coefficients() {
        assert_eq!(Coeff::Text("-3/6".into()).to_q().unwrap(), Q::new(-1, 2));
        assert_eq!(Coeff::from_q(Q::new(1, 3)), Coeff::Text("1/3".into()));
        assert_eq!(Coeff::from_q(Q::from_integer(-2)), Coeff::Int(-2));
        assert!(Coeff::Text("x".into()).to_q().is_err());
    }
}
