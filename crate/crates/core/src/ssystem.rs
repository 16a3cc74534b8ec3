//! S-system models, their network realizations, and species-coverable
//! network analysis.
//!
//! An S-system `dX_i/dt = alpha_i prod X_j^g_ij - beta_i prod X_j^h_ij` is
//! realized by one inflow/outflow reaction pair per species:
//!
//! ```text
//! X_rho + R  ->  X_i + R        (rate alpha_i, orders g_i)
//! X_i + P    ->  X_pi + P       (rate beta_i,  orders h_i)
//! ```
//!
//! Regulator sets `R`, `P` enter with coefficient one. Independent species
//! get the pair `0 -> X_j`, `X_j -> 0` with identical rate functions so
//! their net rate is zero.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::decomposition::{classify, finest_independent_decomposition, Decomposition};
use crate::error::{Error, Result};
use crate::kinetics::PowerLawKinetics;
use crate::model::{Network, NetworkBuilder};
use crate::structure::deficiency;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SSystemModel {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub dependent: Vec<bool>,
    /// Either one entry per species or one per dependent species.
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub g: Vec<Vec<f64>>,
    pub h: Vec<Vec<f64>>,
    /// Values substituted for independent species in the embedded
    /// realization (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independent_values: Option<Vec<f64>>,
}

impl SSystemModel {
    pub fn validate(&self) -> Result<()> {
        let m = self.m;
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if m == 0 {
            return bad("model has no species".into());
        }
        if self.dependent.len() != m {
            return bad(format!(
                "\"dependent\" has {} entries, expected {m}",
                self.dependent.len()
            ));
        }
        let m_dep = self.dependent.iter().filter(|d| **d).count();
        for (name, v) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if v.len() != m && v.len() != m_dep {
                return bad(format!(
                    "\"{name}\" has {} entries, expected {m} or {m_dep}",
                    v.len()
                ));
            }
            if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return bad(format!("\"{name}\" must be finite and nonnegative"));
            }
        }
        for (name, mat) in [("g", &self.g), ("h", &self.h)] {
            if mat.len() != m || mat.iter().any(|row| row.len() != m) {
                return bad(format!("\"{name}\" must be {m}x{m}"));
            }
            if mat.iter().flatten().any(|x| !x.is_finite()) {
                return bad(format!("\"{name}\" must be finite"));
            }
        }
        if let Some(names) = &self.names {
            let unique: BTreeSet<&String> = names.iter().collect();
            if names.len() != m || unique.len() != m || names.iter().any(String::is_empty) {
                return bad("\"names\" must be m distinct nonempty names".into());
            }
        }
        if let Some(v) = &self.independent_values {
            if v.len() != m || v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return bad("\"independent_values\" must be m positive numbers".into());
            }
        }
        for i in self.dependent_species() {
            if self.alpha(i) == 0.0 && self.beta(i) == 0.0 {
                return bad(format!("species {i} has both rate constants zero"));
            }
        }
        Ok(())
    }

    pub fn species_names(&self) -> Vec<String> {
        self.names
            .clone()
            .unwrap_or_else(|| (1..=self.m).map(|i| format!("X{i}")).collect())
    }

    pub fn dependent_species(&self) -> Vec<usize> {
        (0..self.m).filter(|&i| self.dependent[i]).collect()
    }

    fn rate_of(&self, v: &[f64], i: usize) -> f64 {
        if v.len() == self.m {
            v[i]
        } else {
            let pos = self.dependent[..i].iter().filter(|d| **d).count();
            v[pos]
        }
    }

    pub fn alpha(&self, i: usize) -> f64 {
        self.rate_of(&self.alpha, i)
    }

    pub fn beta(&self, i: usize) -> f64 {
        self.rate_of(&self.beta, i)
    }

    fn independent_value(&self, j: usize) -> f64 {
        self.independent_values.as_ref().map_or(1.0, |v| v[j])
    }

    /// The model's own right-hand side; independent species have `dX/dt = 0`.
    pub fn ode(&self) -> SymbolicOde {
        let mut equations = vec![Vec::new(); self.m];
        for i in self.dependent_species() {
            equations[i].push(Monomial::new(self.alpha(i), self.g[i].clone()));
            equations[i].push(Monomial::new(-self.beta(i), self.h[i].clone()));
        }
        SymbolicOde::from_terms(self.species_names(), equations)
    }

    /// Right-hand side for dependent species with independent species
    /// fixed at [`independent_values`](Self::independent_values).
    pub fn embedded_ode(&self) -> SymbolicOde {
        let dep = self.dependent_species();
        let names = self.species_names();
        let equations = dep
            .iter()
            .map(|&i| {
                let (a, g) = self.lump(self.alpha(i), &self.g[i], &dep);
                let (b, h) = self.lump(self.beta(i), &self.h[i], &dep);
                vec![Monomial::new(a, g), Monomial::new(-b, h)]
            })
            .collect();
        SymbolicOde::from_terms(dep.iter().map(|&i| names[i].clone()).collect(), equations)
    }

    fn lump(&self, rate: f64, row: &[f64], dep: &[usize]) -> (f64, Vec<f64>) {
        let factor: f64 = (0..self.m)
            .filter(|j| !self.dependent[*j] && row[*j] != 0.0)
            .map(|j| self.independent_value(j).powf(row[j]))
            .product();
        (rate * factor, dep.iter().map(|&j| row[j]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coefficient: f64,
    pub exponents: Vec<f64>,
}

impl Monomial {
    pub fn new(coefficient: f64, exponents: Vec<f64>) -> Self {
        Monomial {
            coefficient,
            exponents,
        }
    }
}

/// Polynomial-like right-hand side: per species, a sum of signed
/// power-law monomials with like terms combined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolicOde {
    pub species: Vec<String>,
    pub equations: Vec<Vec<Monomial>>,
}

fn cmp_exponents(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

impl SymbolicOde {
    fn from_terms(species: Vec<String>, equations: Vec<Vec<Monomial>>) -> Self {
        let equations = equations
            .into_iter()
            .map(|terms| {
                let mut combined: Vec<Monomial> = Vec::new();
                for t in terms {
                    match combined.iter_mut().find(|c| c.exponents == t.exponents) {
                        Some(c) => c.coefficient += t.coefficient,
                        None => combined.push(t),
                    }
                }
                combined.retain(|c| c.coefficient != 0.0);
                combined.sort_by(|a, b| cmp_exponents(&a.exponents, &b.exponents));
                combined
            })
            .collect();
        SymbolicOde { species, equations }
    }

    /// Assembles `dx/dt = N K(x)` term by term.
    pub fn from_kinetic_system(net: &Network, kin: &PowerLawKinetics<f64>) -> Self {
        let mut equations = vec![Vec::new(); net.m()];
        for j in 0..net.r() {
            for (s, c) in net.reaction_vector(j).iter().enumerate() {
                if !c.is_zero() {
                    equations[s].push(Monomial::new(
                        crate::Scalar::to_f64(c) * kin.rates()[j],
                        kin.orders()[j].clone(),
                    ));
                }
            }
        }
        SymbolicOde::from_terms(net.species_names(), equations)
    }

    /// Term-by-term equality: identical species, identical exponent
    /// vectors, coefficients equal to relative tolerance `rel_tol`.
    pub fn matches(&self, other: &SymbolicOde, rel_tol: f64) -> bool {
        self.species == other.species
            && self.equations.len() == other.equations.len()
            && self.equations.iter().zip(&other.equations).all(|(a, b)| {
                a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| {
                        x.exponents == y.exponents
                            && (x.coefficient - y.coefficient).abs()
                                <= rel_tol * x.coefficient.abs().max(y.coefficient.abs())
                    })
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealizationKind {
    Independent,
    Embedded,
    Subnetwork,
    Total,
}

/// Species reference in a realization spec: index, name, or `"0"`/`null`
/// for the zero complex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpeciesRef {
    Index(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationSpec {
    pub kind: RealizationKind,
    /// Per species `X_rho`; used by the subnetwork kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<Option<SpeciesRef>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<Vec<Option<SpeciesRef>>>,
    /// Per species inflow regulator set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<Vec<SpeciesRef>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<Vec<SpeciesRef>>>,
}

impl RealizationSpec {
    pub fn of_kind(kind: RealizationKind) -> Self {
        RealizationSpec {
            kind,
            rho: None,
            pi: None,
            r: None,
            p: None,
        }
    }
}

/// Resolved per-species inflow/outflow template.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairChoice {
    pub rho: Option<usize>,
    pub pi: Option<usize>,
    pub r: Vec<usize>,
    pub p: Vec<usize>,
}

fn resolve(r: &SpeciesRef, names: &[String]) -> Result<Option<usize>> {
    match r {
        SpeciesRef::Index(i) if *i < names.len() => Ok(Some(*i)),
        SpeciesRef::Index(i) => Err(Error::InvalidChoice(format!(
            "species index {i} out of range"
        ))),
        SpeciesRef::Name(s) if s == "0" => Ok(None),
        SpeciesRef::Name(s) => names
            .iter()
            .position(|n| n == s)
            .map(Some)
            .ok_or_else(|| Error::InvalidChoice(format!("unknown species '{s}'"))),
    }
}

fn resolve_set(refs: &[SpeciesRef], names: &[String]) -> Result<Vec<usize>> {
    let mut out = BTreeSet::new();
    for r in refs {
        match resolve(r, names)? {
            Some(i) => {
                out.insert(i);
            }
            None => {
                return Err(Error::InvalidChoice(
                    "zero complex in a regulator set".into(),
                ))
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairRole {
    Inflow,
    Outflow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesPair {
    pub species: usize,
    pub inflow: Option<usize>,
    pub outflow: Option<usize>,
}

/// A pair member that coincided with an already-created reaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedReaction {
    pub reaction: usize,
    pub species: usize,
    pub role: PairRole,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub kind: RealizationKind,
    pub network: Network,
    pub kinetics: PowerLawKinetics<f64>,
    pub pairs: Vec<SpeciesPair>,
    pub merged: Vec<MergedReaction>,
}

impl Realization {
    /// Blocks of the species pairs. Overlapping pairs give a covering.
    pub fn species_covering(&self) -> Result<Decomposition> {
        let blocks = self
            .pairs
            .iter()
            .map(|p| p.inflow.into_iter().chain(p.outflow).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        Decomposition::covering(blocks, self.network.r())
    }

    /// The ODE this realization is expected to reproduce.
    pub fn target_ode(&self, model: &SSystemModel) -> SymbolicOde {
        match self.kind {
            RealizationKind::Embedded => model.embedded_ode(),
            _ => model.ode(),
        }
    }
}

struct Assembler {
    builder: NetworkBuilder,
    rates: Vec<f64>,
    orders: Vec<Vec<f64>>,
    merged: Vec<MergedReaction>,
}

impl Assembler {
    fn new(names: &[String]) -> Self {
        let mut builder = NetworkBuilder::new();
        for n in names {
            builder.species(n);
        }
        Assembler {
            builder,
            rates: Vec::new(),
            orders: Vec::new(),
            merged: Vec::new(),
        }
    }

    fn complex(&mut self, names: &[String], base: Option<usize>, set: &[usize]) -> Result<usize> {
        let terms: Vec<(&str, Rational)> = base
            .into_iter()
            .chain(set.iter().copied())
            .map(|s| (names[s].as_str(), Rational::one()))
            .collect();
        self.builder.complex(terms)
    }

    #[allow(clippy::too_many_arguments)]
    fn reaction(
        &mut self,
        names: &[String],
        lhs: (Option<usize>, &[usize]),
        rhs: (Option<usize>, &[usize]),
        rate: f64,
        orders: Vec<f64>,
        species: usize,
        role: PairRole,
    ) -> Result<usize> {
        let a = self.complex(names, lhs.0, lhs.1)?;
        let b = self.complex(names, rhs.0, rhs.1)?;
        let label = format!(
            "{}_{}",
            match role {
                PairRole::Inflow => "in",
                PairRole::Outflow => "out",
            },
            names[species]
        );
        let (j, fresh) = self.builder.reaction_or_existing(a, b, Some(label))?;
        if fresh {
            self.rates.push(rate);
            self.orders.push(orders);
        } else {
            self.merged.push(MergedReaction {
                reaction: j,
                species,
                role,
            });
        }
        Ok(j)
    }
}

/// Builds the requested realization of an S-system.
pub fn realize(model: &SSystemModel, spec: &RealizationSpec) -> Result<Realization> {
    model.validate()?;
    let names = model.species_names();
    let m = model.m;
    let choices: Vec<PairChoice> = match spec.kind {
        RealizationKind::Subnetwork => subnetwork_choices(model, spec, &names)?,
        _ => (0..m)
            .map(|i| PairChoice {
                rho: None,
                pi: None,
                r: (0..m).filter(|&j| model.g[i][j] != 0.0).collect(),
                p: (0..m).filter(|&j| model.h[i][j] != 0.0).collect(),
            })
            .collect(),
    };

    if spec.kind == RealizationKind::Embedded {
        return realize_embedded(model, &names, &choices);
    }

    let mut asm = Assembler::new(&names);
    let mut pairs = Vec::with_capacity(m);
    for i in 0..m {
        let mut pair = SpeciesPair {
            species: i,
            inflow: None,
            outflow: None,
        };
        if model.dependent[i] {
            let c = &choices[i];
            if model.alpha(i) > 0.0 {
                pair.inflow = Some(asm.reaction(
                    &names,
                    (c.rho, &c.r),
                    (Some(i), &c.r),
                    model.alpha(i),
                    model.g[i].clone(),
                    i,
                    PairRole::Inflow,
                )?);
            }
            if model.beta(i) > 0.0 {
                pair.outflow = Some(asm.reaction(
                    &names,
                    (Some(i), &c.p),
                    (c.pi, &c.p),
                    model.beta(i),
                    model.h[i].clone(),
                    i,
                    PairRole::Outflow,
                )?);
            }
        } else {
            let mut unit = vec![0.0; m];
            unit[i] = 1.0;
            pair.inflow = Some(asm.reaction(
                &names,
                (None, &[]),
                (Some(i), &[]),
                1.0,
                unit.clone(),
                i,
                PairRole::Inflow,
            )?);
            pair.outflow = Some(asm.reaction(
                &names,
                (Some(i), &[]),
                (None, &[]),
                1.0,
                unit,
                i,
                PairRole::Outflow,
            )?);
        }
        pairs.push(pair);
    }
    let network = asm.builder.build()?;
    let kinetics = PowerLawKinetics::new(&network, asm.rates, asm.orders)?;
    Ok(Realization {
        kind: spec.kind,
        network,
        kinetics,
        pairs,
        merged: asm.merged,
    })
}

fn subnetwork_choices(
    model: &SSystemModel,
    spec: &RealizationSpec,
    names: &[String],
) -> Result<Vec<PairChoice>> {
    let m = model.m;
    let take = |v: &Option<Vec<Option<SpeciesRef>>>, what: &str| -> Result<Vec<Option<usize>>> {
        match v {
            None => Ok(vec![None; m]),
            Some(v) if v.len() == m => v
                .iter()
                .map(|r| r.as_ref().map_or(Ok(None), |r| resolve(r, names)))
                .collect(),
            Some(v) => Err(Error::InvalidChoice(format!(
                "\"{what}\" has {} entries, expected {m}",
                v.len()
            ))),
        }
    };
    let sets = |v: &Option<Vec<Vec<SpeciesRef>>>, what: &str| -> Result<Vec<Vec<usize>>> {
        match v {
            None => Ok(vec![Vec::new(); m]),
            Some(v) if v.len() == m => v.iter().map(|s| resolve_set(s, names)).collect(),
            Some(v) => Err(Error::InvalidChoice(format!(
                "\"{what}\" has {} entries, expected {m}",
                v.len()
            ))),
        }
    };
    let rho = take(&spec.rho, "rho")?;
    let pi = take(&spec.pi, "pi")?;
    let r = sets(&spec.r, "r")?;
    let p = sets(&spec.p, "p")?;
    (0..m)
        .map(|i| {
            if rho[i] == Some(i) || pi[i] == Some(i) {
                return Err(Error::InvalidChoice(format!(
                    "species {} cannot be its own inflow source or outflow target",
                    names[i]
                )));
            }
            Ok(PairChoice {
                rho: rho[i],
                pi: pi[i],
                r: r[i].clone(),
                p: p[i].clone(),
            })
        })
        .collect()
}

fn realize_embedded(
    model: &SSystemModel,
    names: &[String],
    choices: &[PairChoice],
) -> Result<Realization> {
    let dep = model.dependent_species();
    let dep_names: Vec<String> = dep.iter().map(|&i| names[i].clone()).collect();
    let local = |s: usize| dep.iter().position(|&d| d == s);
    let project = |set: &[usize]| -> Vec<usize> { set.iter().filter_map(|&s| local(s)).collect() };

    let mut asm = Assembler::new(&dep_names);
    let mut pairs = Vec::with_capacity(dep.len());
    for (li, &i) in dep.iter().enumerate() {
        let c = &choices[i];
        let (r, p) = (project(&c.r), project(&c.p));
        let mut pair = SpeciesPair {
            species: li,
            inflow: None,
            outflow: None,
        };
        if model.alpha(i) > 0.0 {
            let (a, g) = model.lump(model.alpha(i), &model.g[i], &dep);
            pair.inflow = Some(asm.reaction(
                &dep_names,
                (None, &r),
                (Some(li), &r),
                a,
                g,
                li,
                PairRole::Inflow,
            )?);
        }
        if model.beta(i) > 0.0 {
            let (b, h) = model.lump(model.beta(i), &model.h[i], &dep);
            pair.outflow = Some(asm.reaction(
                &dep_names,
                (Some(li), &p),
                (None, &p),
                b,
                h,
                li,
                PairRole::Outflow,
            )?);
        }
        pairs.push(pair);
    }
    let network = asm.builder.build()?;
    let kinetics = PowerLawKinetics::new(&network, asm.rates, asm.orders)?;
    Ok(Realization {
        kind: RealizationKind::Embedded,
        network,
        kinetics,
        pairs,
        merged: asm.merged,
    })
}

/// One species' pair in a covering found by [`coverability`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeciesCover {
    pub species: usize,
    pub name: String,
    pub inflow: usize,
    pub outflow: usize,
    pub rho: Option<usize>,
    pub pi: Option<usize>,
    pub r: Vec<usize>,
    pub p: Vec<usize>,
    /// `X_rho = X_pi` and `R = P`: the pair is a reversible reaction pair.
    pub reversible: bool,
    pub independent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverabilityReport {
    pub species_coverable: bool,
    pub species_decomposable: bool,
    pub covering: Vec<SpeciesCover>,
    pub is_decomposition: bool,
    pub m: usize,
    pub m_rev: usize,
    pub m_dep: usize,
    pub delta: i64,
    pub delta_bound: i64,
    /// `delta <= delta_bound`.
    pub bound_holds: bool,
    /// `delta == delta_bound`.
    pub bound_tight: bool,
    pub bi_independent: Option<bool>,
    /// Search budget ran out before the search space was exhausted.
    pub search_truncated: bool,
}

#[derive(Debug, Clone)]
struct Template {
    reaction: usize,
    other: Option<usize>,
    set: Vec<usize>,
}

/// `complex - e_base` as a 0/1 species set, if it is one.
fn as_unit_set(c: &crate::model::Complex, base: Option<usize>) -> Option<Vec<usize>> {
    let mut set = Vec::new();
    let mut base_seen = base.is_none();
    for (s, coef) in c.terms() {
        let mut v = coef.clone();
        if Some(s) == base {
            v -= Rational::one();
            base_seen = true;
        }
        if v.is_zero() {
            continue;
        }
        if v.is_one() {
            set.push(s);
        } else {
            return None;
        }
    }
    base_seen.then_some(set)
}

/// Inflow and outflow templates per species.
fn templates(net: &Network) -> (Vec<Vec<Template>>, Vec<Vec<Template>>) {
    let m = net.m();
    let mut inflows = vec![Vec::new(); m];
    let mut outflows = vec![Vec::new(); m];
    for j in 0..net.r() {
        let v = net.reaction_vector(j);
        let pos: Vec<usize> = (0..m).filter(|&s| v[s].is_positive()).collect();
        let neg: Vec<usize> = (0..m).filter(|&s| v[s].is_negative()).collect();
        let reactant = &net.complexes()[net.reactions()[j].reactant];
        let unit = |s: &[usize]| s.len() <= 1 && s.iter().all(|&k| v[k].abs().is_one());
        if pos.len() == 1 && v[pos[0]].is_one() && unit(&neg) {
            let rho = neg.first().copied();
            if let Some(set) = as_unit_set(reactant, rho) {
                inflows[pos[0]].push(Template {
                    reaction: j,
                    other: rho,
                    set,
                });
            }
        }
        if neg.len() == 1 && (-v[neg[0]].clone()).is_one() && unit(&pos) {
            let i = neg[0];
            if let Some(set) = as_unit_set(reactant, Some(i)) {
                outflows[i].push(Template {
                    reaction: j,
                    other: pos.first().copied(),
                    set,
                });
            }
        }
    }
    (inflows, outflows)
}

type Pair<'a> = (&'a Template, &'a Template);

struct Search<'a> {
    options: Vec<Vec<(&'a Template, &'a Template)>>,
    coverers: Vec<Vec<usize>>,
    r: usize,
    disjoint: bool,
    budget: Option<usize>,
    nodes: usize,
    truncated: bool,
}

impl<'a> Search<'a> {
    fn run(
        &mut self,
        accept: &mut dyn FnMut(&[Pair<'a>]) -> bool,
    ) -> Option<Vec<(&'a Template, &'a Template)>> {
        let mut chosen = Vec::with_capacity(self.options.len());
        let mut count = vec![0usize; self.r];
        self.dfs(0, &mut chosen, &mut count, accept)
            .then_some(chosen)
    }

    fn dfs(
        &mut self,
        i: usize,
        chosen: &mut Vec<(&'a Template, &'a Template)>,
        count: &mut Vec<usize>,
        accept: &mut dyn FnMut(&[Pair<'a>]) -> bool,
    ) -> bool {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            self.truncated = true;
            return false;
        }
        let m = self.options.len();
        if i == m {
            return count.iter().all(|&c| c > 0) && accept(chosen);
        }
        // every uncovered reaction still needs a species at or after i
        let uncovered = count.iter().filter(|&&c| c == 0).count();
        if uncovered > 2 * (m - i) {
            return false;
        }
        for (j, c) in count.iter().enumerate() {
            if *c == 0 && !self.coverers[j].iter().any(|&s| s >= i) {
                return false;
            }
        }
        for k in 0..self.options[i].len() {
            let (a, b) = self.options[i][k];
            if self.disjoint && (count[a.reaction] > 0 || count[b.reaction] > 0) {
                continue;
            }
            count[a.reaction] += 1;
            count[b.reaction] += 1;
            chosen.push((a, b));
            if self.dfs(i + 1, chosen, count, accept) {
                return true;
            }
            chosen.pop();
            count[a.reaction] -= 1;
            count[b.reaction] -= 1;
            if self.truncated {
                return false;
            }
        }
        false
    }
}

/// Default node budget of the covering search.
pub const COVERING_SEARCH_BUDGET: usize = 200_000;

/// Searches for a species covering by matching reactions against the
/// inflow/outflow templates.
///
/// Coverings that are independent decompositions are preferred, then any
/// partition, then any covering; within each stage the first covering in
/// canonical (species, reaction index) order wins. `exhaustive` removes the
/// node budget.
pub fn coverability(net: &Network, exhaustive: bool) -> CoverabilityReport {
    let m = net.m();
    let (inflows, outflows) = templates(net);
    let options: Vec<Vec<(&Template, &Template)>> = (0..m)
        .map(|i| {
            inflows[i]
                .iter()
                .flat_map(|a| outflows[i].iter().map(move |b| (a, b)))
                .collect()
        })
        .collect();
    let mut coverers = vec![Vec::new(); net.r()];
    for (i, opts) in options.iter().enumerate() {
        for (a, b) in opts {
            coverers[a.reaction].push(i);
            coverers[b.reaction].push(i);
        }
    }
    let delta = deficiency(net);
    let mut report = CoverabilityReport {
        species_coverable: false,
        species_decomposable: false,
        covering: Vec::new(),
        is_decomposition: false,
        m,
        m_rev: 0,
        m_dep: 0,
        delta,
        delta_bound: 0,
        bound_holds: false,
        bound_tight: false,
        bi_independent: None,
        search_truncated: false,
    };

    let budget = (!exhaustive).then_some(COVERING_SEARCH_BUDGET);
    let mut found = None;
    let mut truncated = false;
    for stage in 0..3 {
        let mut search = Search {
            options: options.clone(),
            coverers: coverers.clone(),
            r: net.r(),
            disjoint: stage < 2,
            budget,
            nodes: 0,
            truncated: false,
        };
        let result = if stage == 0 {
            search.run(&mut |chosen| {
                let blocks = chosen
                    .iter()
                    .map(|(a, b)| vec![a.reaction, b.reaction])
                    .collect();
                Decomposition::partition(blocks, net.r())
                    .and_then(|d| classify(net, &d))
                    .is_ok_and(|rep| rep.independent)
            })
        } else {
            search.run(&mut |_| true)
        };
        truncated |= search.truncated;
        if let Some(r) = result {
            found = Some(r);
            break;
        }
    }
    report.search_truncated = truncated;
    let Some(chosen) = found else {
        return report;
    };

    let names = net.species_names();
    report.species_coverable = true;
    report.covering = chosen
        .iter()
        .enumerate()
        .map(|(i, (a, b))| SpeciesCover {
            species: i,
            name: names[i].clone(),
            inflow: a.reaction,
            outflow: b.reaction,
            rho: a.other,
            pi: b.other,
            r: a.set.clone(),
            p: b.set.clone(),
            reversible: a.other == b.other && a.set == b.set,
            independent: a.other.is_none()
                && b.other.is_none()
                && a.set.is_empty()
                && b.set.is_empty(),
        })
        .collect();
    report.m_rev = report.covering.iter().filter(|c| c.reversible).count();
    report.m_dep = report.covering.iter().filter(|c| !c.independent).count();
    report.delta_bound = m as i64 - report.m_rev as i64;
    report.bound_holds = delta <= report.delta_bound;
    report.bound_tight = delta == report.delta_bound;

    let blocks: Vec<Vec<usize>> = report
        .covering
        .iter()
        .map(|c| vec![c.inflow, c.outflow])
        .collect();
    if let Ok(d) = Decomposition::partition(blocks, net.r()) {
        report.is_decomposition = true;
        if let Ok(rep) = classify(net, &d) {
            report.species_decomposable = rep.independent;
            report.bi_independent = Some(rep.bi_independent);
        }
    }
    report
}

/// The species decomposition of a species decomposable network.
pub fn species_decomposition(net: &Network, report: &CoverabilityReport) -> Result<Decomposition> {
    if !report.species_decomposable {
        return Err(Error::NotSpeciesDecomposable);
    }
    Decomposition::partition(
        report
            .covering
            .iter()
            .map(|c| vec![c.inflow, c.outflow])
            .collect(),
        net.r(),
    )
}

/// Whether the finest independent decomposition equals the species
/// decomposition. Errors unless the network is species decomposable.
pub fn verify_species_decomposition_theorem(net: &Network) -> Result<bool> {
    let report = coverability(net, false);
    let species = species_decomposition(net, &report)?;
    Ok(finest_independent_decomposition(net).same_partition(&species))
}
