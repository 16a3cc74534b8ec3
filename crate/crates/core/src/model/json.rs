//! JSON form of a network with explicit indices.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{Complex, Network, Reaction, SpeciesId};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermDocument {
    pub species: usize,
    /// Rational written as `"p"` or `"p/q"`.
    pub coefficient: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComplexDocument {
    pub index: usize,
    pub terms: Vec<TermDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReactionDocument {
    pub index: usize,
    pub reactant: usize,
    pub product: usize,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NetworkDocument {
    pub species: Vec<SpeciesId>,
    pub complexes: Vec<ComplexDocument>,
    pub reactions: Vec<ReactionDocument>,
}

impl From<&Network> for NetworkDocument {
    fn from(net: &Network) -> Self {
        NetworkDocument {
            species: net.species.clone(),
            complexes: net
                .complexes
                .iter()
                .enumerate()
                .map(|(index, c)| ComplexDocument {
                    index,
                    terms: c
                        .terms()
                        .map(|(species, coef)| TermDocument {
                            species,
                            coefficient: coef.to_string(),
                        })
                        .collect(),
                })
                .collect(),
            reactions: net
                .reactions
                .iter()
                .enumerate()
                .map(|(index, r)| ReactionDocument {
                    index,
                    reactant: r.reactant,
                    product: r.product,
                    label: r.label.clone(),
                })
                .collect(),
        }
    }
}

fn check_dense(what: &str, indices: impl Iterator<Item = usize>) -> Result<()> {
    for (expected, found) in indices.enumerate() {
        if expected != found {
            return Err(Error::InvalidNetwork(format!(
                "{what} index {found} found where {expected} was expected"
            )));
        }
    }
    Ok(())
}

impl TryFrom<NetworkDocument> for Network {
    type Error = Error;

    fn try_from(doc: NetworkDocument) -> Result<Network> {
        check_dense("species", doc.species.iter().map(|s| s.index))?;
        check_dense("complex", doc.complexes.iter().map(|c| c.index))?;
        check_dense("reaction", doc.reactions.iter().map(|r| r.index))?;
        let complexes = doc
            .complexes
            .into_iter()
            .map(|c| {
                let terms = c
                    .terms
                    .into_iter()
                    .map(|t| {
                        let q: Rational = t.coefficient.parse().map_err(|_| {
                            Error::InvalidNetwork(format!("bad coefficient '{}'", t.coefficient))
                        })?;
                        if q.is_negative() {
                            return Err(Error::InvalidNetwork("negative coefficient".into()));
                        }
                        Ok((t.species, q))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Complex::from_terms(terms)
            })
            .collect::<Result<Vec<_>>>()?;
        let reactions = doc
            .reactions
            .into_iter()
            .map(|r| Reaction {
                reactant: r.reactant,
                product: r.product,
                label: r.label,
            })
            .collect();
        Network::new(
            doc.species.into_iter().map(|s| s.name).collect(),
            complexes,
            reactions,
        )
    }
}

impl Network {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(NetworkDocument::from(self)).expect("network document serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Network> {
        let doc: NetworkDocument = serde_json::from_str(s)?;
        Network::try_from(doc)
    }
}
