//! Immutable reaction network representation.
//!
//! A [`Network`] holds species, deduplicated complexes and reactions in
//! canonical order: species and complexes by first appearance, reactions
//! in insertion order. Every constructor validates the structural
//! invariants (no loops, no duplicate reactions, no isolated complexes, no
//! unused species), so downstream analysis can rely on them.

mod json;
mod parse;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::{Rational, RationalMatrix};

pub use json::NetworkDocument;
pub use parse::{parse_network, serialize_network};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpeciesId {
    pub index: usize,
    pub name: String,
}

/// Sparse nonnegative combination of species. The empty map is the zero complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Complex {
    coefficients: BTreeMap<usize, Rational>,
}

impl Complex {
    pub fn zero() -> Self {
        Complex::default()
    }

    /// Builds a complex from `(species, coefficient)` terms; repeated species
    /// accumulate and zero results are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let mut coefficients: BTreeMap<usize, Rational> = BTreeMap::new();
        for (s, c) in terms {
            if c.is_negative() {
                return Err(Error::InvalidNetwork(format!(
                    "negative coefficient {c} for species {s}"
                )));
            }
            *coefficients.entry(s).or_insert_with(Rational::zero) += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        Ok(Complex { coefficients })
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, species: usize) -> Rational {
        self.coefficients
            .get(&species)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coefficients.iter().map(|(&s, c)| (s, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coefficients.keys().copied()
    }

    /// Dense species-space vector of length `m`.
    pub fn to_vector(&self, m: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); m];
        for (&s, c) in &self.coefficients {
            v[s] = c.clone();
        }
        v
    }

    fn remap(&self, map: impl Fn(usize) -> usize) -> Complex {
        Complex {
            coefficients: self
                .coefficients
                .iter()
                .map(|(&s, c)| (map(s), c.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reaction {
    pub reactant: usize,
    pub product: usize,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    species: Vec<SpeciesId>,
    complexes: Vec<Complex>,
    reactions: Vec<Reaction>,
}

impl Network {
    /// Assembles and validates a network from its parts.
    pub fn new(
        species: Vec<String>,
        complexes: Vec<Complex>,
        reactions: Vec<Reaction>,
    ) -> Result<Self> {
        let species: Vec<SpeciesId> = species
            .into_iter()
            .enumerate()
            .map(|(index, name)| SpeciesId { index, name })
            .collect();
        let net = Network {
            species,
            complexes,
            reactions,
        };
        net.validate()?;
        Ok(net)
    }

    fn validate(&self) -> Result<()> {
        if self.reactions.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let mut names = HashSet::new();
        for s in &self.species {
            if s.name.is_empty() {
                return Err(Error::InvalidNetwork("empty species name".into()));
            }
            if !names.insert(s.name.as_str()) {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate species name {}",
                    s.name
                )));
            }
        }
        let m = self.species.len();
        let mut seen_complexes = HashSet::new();
        let mut species_used = vec![false; m];
        for c in &self.complexes {
            if !seen_complexes.insert(c) {
                return Err(Error::InvalidNetwork(format!(
                    "complex {} listed twice",
                    self.format_complex(c)
                )));
            }
            for (s, coef) in c.terms() {
                if s >= m {
                    return Err(Error::InvalidNetwork(format!("unknown species index {s}")));
                }
                if coef.is_negative() {
                    return Err(Error::InvalidNetwork("negative coefficient".into()));
                }
                species_used[s] = true;
            }
        }
        let n = self.complexes.len();
        let mut complex_used = vec![false; n];
        let mut pairs = HashSet::new();
        for r in &self.reactions {
            if r.reactant >= n || r.product >= n {
                return Err(Error::InvalidNetwork(
                    "reaction refers to unknown complex".into(),
                ));
            }
            if r.reactant == r.product {
                return Err(Error::LoopReaction {
                    reaction: self.format_pair(r.reactant, r.product),
                });
            }
            if !pairs.insert((r.reactant, r.product)) {
                return Err(Error::DuplicateReaction {
                    reaction: self.format_pair(r.reactant, r.product),
                });
            }
            complex_used[r.reactant] = true;
            complex_used[r.product] = true;
        }
        if let Some(i) = complex_used.iter().position(|u| !u) {
            return Err(Error::InvalidNetwork(format!(
                "complex {} occurs in no reaction",
                self.format_complex(&self.complexes[i])
            )));
        }
        if let Some(s) = species_used.iter().position(|u| !u) {
            return Err(Error::InvalidNetwork(format!(
                "species {} occurs in no complex",
                self.species[s].name
            )));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.species.len()
    }

    pub fn n(&self) -> usize {
        self.complexes.len()
    }

    pub fn r(&self) -> usize {
        self.reactions.len()
    }

    pub fn species(&self) -> &[SpeciesId] {
        &self.species
    }

    pub fn species_names(&self) -> Vec<String> {
        self.species.iter().map(|s| s.name.clone()).collect()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn reaction_index_by_label(&self, label: &str) -> Option<usize> {
        self.reactions
            .iter()
            .position(|r| r.label.as_deref() == Some(label))
    }

    /// Index of the zero complex, if the network has one.
    pub fn zero_complex(&self) -> Option<usize> {
        self.complexes.iter().position(Complex::is_zero)
    }

    pub fn complex_vector(&self, i: usize) -> Vec<Rational> {
        self.complexes[i].to_vector(self.m())
    }

    /// Product complex minus reactant complex of reaction `j`.
    pub fn reaction_vector(&self, j: usize) -> Vec<Rational> {
        let r = &self.reactions[j];
        let mut v = self.complex_vector(r.product);
        for (s, c) in self.complexes[r.reactant].terms() {
            v[s] -= c;
        }
        v
    }

    pub fn reaction_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.r()).map(|j| self.reaction_vector(j)).collect()
    }

    /// Index of the reaction that reverses `j`, if present.
    pub fn reverse_of(&self, j: usize) -> Option<usize> {
        let r = &self.reactions[j];
        self.reactions
            .iter()
            .position(|o| o.reactant == r.product && o.product == r.reactant)
    }

    /// Distinct reactant complexes in first-use order.
    pub fn reactant_complexes(&self) -> Vec<usize> {
        let mut seen = HashSet::new();
        self.reactions
            .iter()
            .filter_map(|r| seen.insert(r.reactant).then_some(r.reactant))
            .collect()
    }

    /// Stoichiometric matrix N (m x r).
    pub fn stoichiometric_matrix(&self) -> RationalMatrix {
        Matrix::from_columns(&self.reaction_vectors(), self.m())
            .expect("reaction vectors have species dimension")
    }

    /// Incidence matrix I_a (n x r): -1 at the reactant, +1 at the product.
    pub fn incidence_matrix(&self) -> RationalMatrix {
        let mut m = Matrix::zeros(self.n(), self.r());
        for (j, r) in self.reactions.iter().enumerate() {
            m[(r.reactant, j)] = -Rational::one();
            m[(r.product, j)] = Rational::one();
        }
        m
    }

    /// Map of complexes Y (m x n): column i is complex i.
    pub fn map_of_complexes(&self) -> RationalMatrix {
        let cols: Vec<Vec<Rational>> = (0..self.n()).map(|i| self.complex_vector(i)).collect();
        Matrix::from_columns(&cols, self.m()).expect("complex vectors have species dimension")
    }

    /// Subnetwork spanned by the listed reactions, keeping this network's
    /// relative order of species, complexes and reactions.
    pub fn restrict(&self, reactions: &[usize]) -> Result<Network> {
        if reactions.is_empty() {
            return Err(Error::EmptyBlock(0));
        }
        let mut rs: Vec<usize> = reactions.to_vec();
        rs.sort_unstable();
        rs.dedup();
        if let Some(&bad) = rs.iter().find(|&&j| j >= self.r()) {
            return Err(Error::InvalidDecomposition(format!(
                "unknown reaction index {bad}"
            )));
        }
        let mut complex_keep = vec![false; self.n()];
        for &j in &rs {
            complex_keep[self.reactions[j].reactant] = true;
            complex_keep[self.reactions[j].product] = true;
        }
        let mut species_keep = vec![false; self.m()];
        for (i, c) in self.complexes.iter().enumerate() {
            if complex_keep[i] {
                for s in c.support() {
                    species_keep[s] = true;
                }
            }
        }
        let species_map = dense_map(&species_keep);
        let complex_map = dense_map(&complex_keep);
        let species = (0..self.m())
            .filter(|&s| species_keep[s])
            .map(|s| self.species[s].name.clone())
            .collect();
        let complexes = (0..self.n())
            .filter(|&i| complex_keep[i])
            .map(|i| self.complexes[i].remap(|s| species_map[s].unwrap()))
            .collect();
        let reactions = rs
            .iter()
            .map(|&j| {
                let r = &self.reactions[j];
                Reaction {
                    reactant: complex_map[r.reactant].unwrap(),
                    product: complex_map[r.product].unwrap(),
                    label: r.label.clone(),
                }
            })
            .collect();
        Network::new(species, complexes, reactions)
    }

    pub fn format_complex(&self, c: &Complex) -> String {
        if c.is_zero() {
            return "0".to_string();
        }
        c.terms()
            .map(|(s, coef)| {
                let name = self
                    .species
                    .get(s)
                    .map_or_else(|| format!("#{s}"), |sp| sp.name.clone());
                if coef.is_one() {
                    name
                } else {
                    format!("{coef} {name}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn format_pair(&self, reactant: usize, product: usize) -> String {
        let fmt = |i: usize| {
            self.complexes
                .get(i)
                .map_or_else(|| format!("#{i}"), |c| self.format_complex(c))
        };
        format!("{} -> {}", fmt(reactant), fmt(product))
    }

    pub fn format_reaction(&self, j: usize) -> String {
        let r = &self.reactions[j];
        self.format_pair(r.reactant, r.product)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_network(self))
    }
}

fn dense_map(keep: &[bool]) -> Vec<Option<usize>> {
    let mut next = 0;
    keep.iter()
        .map(|&k| {
            k.then(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// Incremental construction by species name with complex deduplication.
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    species: Vec<String>,
    species_index: HashMap<String, usize>,
    complexes: Vec<Complex>,
    complex_index: HashMap<Complex, usize>,
    reactions: Vec<Reaction>,
    pairs: HashSet<(usize, usize)>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn species(&mut self, name: &str) -> usize {
        if let Some(&i) = self.species_index.get(name) {
            return i;
        }
        let i = self.species.len();
        self.species.push(name.to_string());
        self.species_index.insert(name.to_string(), i);
        i
    }

    pub fn complex<'a>(
        &mut self,
        terms: impl IntoIterator<Item = (&'a str, Rational)>,
    ) -> Result<usize> {
        let terms: Vec<(usize, Rational)> = terms
            .into_iter()
            .map(|(name, c)| (self.species(name), c))
            .collect();
        let c = Complex::from_terms(terms)?;
        Ok(self.intern(c))
    }

    fn intern(&mut self, c: Complex) -> usize {
        if let Some(&i) = self.complex_index.get(&c) {
            return i;
        }
        let i = self.complexes.len();
        self.complexes.push(c.clone());
        self.complex_index.insert(c, i);
        i
    }

    /// Adds a reaction between two already-interned complexes.
    pub fn reaction(
        &mut self,
        reactant: usize,
        product: usize,
        label: Option<String>,
    ) -> Result<usize> {
        if reactant == product {
            return Err(Error::LoopReaction {
                reaction: self.describe(reactant, product),
            });
        }
        if !self.pairs.insert((reactant, product)) {
            return Err(Error::DuplicateReaction {
                reaction: self.describe(reactant, product),
            });
        }
        self.reactions.push(Reaction {
            reactant,
            product,
            label,
        });
        Ok(self.reactions.len() - 1)
    }

    /// Like [`reaction`](Self::reaction) but silently skips a reaction
    /// already present. Returns the index of the existing or new reaction.
    pub fn reaction_or_existing(
        &mut self,
        reactant: usize,
        product: usize,
        label: Option<String>,
    ) -> Result<(usize, bool)> {
        if let Some(j) = self
            .reactions
            .iter()
            .position(|r| r.reactant == reactant && r.product == product)
        {
            return Ok((j, false));
        }
        self.reaction(reactant, product, label).map(|j| (j, true))
    }

    /// Copies species and complexes of `net` (in its order) into the builder,
    /// returning the complex index map.
    fn absorb_parts(&mut self, net: &Network) -> Vec<usize> {
        let smap: Vec<usize> = net.species.iter().map(|s| self.species(&s.name)).collect();
        net.complexes
            .iter()
            .map(|c| self.intern(c.remap(|s| smap[s])))
            .collect()
    }

    fn describe(&self, reactant: usize, product: usize) -> String {
        let fmt = |i: usize| {
            let c = &self.complexes[i];
            if c.is_zero() {
                return "0".to_string();
            }
            c.terms()
                .map(|(s, coef)| {
                    if coef.is_one() {
                        self.species[s].clone()
                    } else {
                        format!("{coef} {}", self.species[s])
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{} -> {}", fmt(reactant), fmt(product))
    }

    pub fn build(self) -> Result<Network> {
        Network::new(self.species, self.complexes, self.reactions)
    }
}

/// Set union of networks; species are identified by name and complexes
/// by their species combination.
pub fn union(nets: &[Network]) -> Result<Network> {
    let mut b = NetworkBuilder::new();
    for net in nets {
        let cmap = b.absorb_parts(net);
        for r in &net.reactions {
            b.reaction_or_existing(cmap[r.reactant], cmap[r.product], r.label.clone())?;
        }
    }
    b.build()
}
