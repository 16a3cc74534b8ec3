//! Seeded random networks, S-systems and decompositions.

use std::collections::HashSet;

use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::kinetics::PowerLawKinetics;
use crate::model::{Network, NetworkBuilder};
use crate::ssystem::{realize, RealizationKind, RealizationSpec, SSystemModel};
use crate::{Rational, Scalar};

pub const MAX_SPECIES: usize = 20;
pub const MAX_REACTIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    WeaklyReversible,
    SpeciesDecomposable,
    CDecomposed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub kind: GeneratorKind,
    /// Upper bound on the number of species.
    pub species: usize,
    /// Target number of reactions (an upper bound).
    pub reactions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub network: Network,
    pub kinetics: PowerLawKinetics<f64>,
    pub decomposition: Decomposition,
    pub ssystem: Option<SSystemModel>,
    /// A known positive complex balanced equilibrium, when the generator
    /// constructs one.
    pub equilibrium: Option<Vec<f64>>,
}

pub fn check_size(species: usize, reactions: usize) -> Result<()> {
    if species == 0 || species > MAX_SPECIES {
        return Err(Error::SizeLimit(format!(
            "species must be in 1..={MAX_SPECIES}, got {species}"
        )));
    }
    if reactions == 0 || reactions > MAX_REACTIONS {
        return Err(Error::SizeLimit(format!(
            "reactions must be in 1..={MAX_REACTIONS}, got {reactions}"
        )));
    }
    Ok(())
}

pub fn generate(cfg: &GeneratorConfig, seed: u64) -> Result<Generated> {
    check_size(cfg.species, cfg.reactions)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match cfg.kind {
        GeneratorKind::WeaklyReversible => weakly_reversible(&mut rng, cfg.species, cfg.reactions),
        GeneratorKind::SpeciesDecomposable => {
            if 2 * cfg.species > cfg.reactions {
                return Err(Error::SizeLimit(format!(
                    "a species-decomposable network on {} species needs {} reactions",
                    cfg.species,
                    2 * cfg.species
                )));
            }
            let model = random_ssystem(&mut rng, cfg.species);
            let real = realize(
                &model,
                &RealizationSpec::of_kind(RealizationKind::Independent),
            )?;
            let decomposition = real.species_covering()?;
            Ok(Generated {
                network: real.network,
                kinetics: real.kinetics,
                decomposition,
                ssystem: Some(model),
                equilibrium: None,
            })
        }
        GeneratorKind::CDecomposed => {
            let complexes = (cfg.reactions + 1).min(2 * cfg.species + 2).max(2);
            let network = random_network(&mut rng, cfg.species, complexes, cfg.reactions);
            let decomposition = random_coarsening(&mut rng, &Decomposition::linkage(&network));
            let kinetics = random_mass_action(&mut rng, &network);
            Ok(Generated {
                network,
                kinetics,
                decomposition,
                ssystem: None,
                equilibrium: None,
            })
        }
    }
}

fn names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("X{i}")).collect()
}

fn random_complex(rng: &mut ChaCha8Rng, m: usize) -> Vec<u8> {
    let p = (1.5 / m as f64).min(0.6);
    (0..m)
        .map(|_| {
            if rng.gen_bool(p) {
                rng.gen_range(1..=2)
            } else {
                0
            }
        })
        .collect()
}

fn intern(b: &mut NetworkBuilder, names: &[String], c: &[u8]) -> usize {
    let terms = c.iter().enumerate().filter(|(_, v)| **v > 0).map(|(s, v)| {
        (
            names[s].as_str(),
            Rational::from_integer((*v as i64).into()),
        )
    });
    b.complex(terms).expect("coefficients are positive")
}

/// A random network over at most `species` species drawn from a pool of
/// `complexes` distinct complexes, with up to `reactions` distinct
/// reactions. Only complexes that take part in a reaction are kept.
pub fn random_network(
    rng: &mut ChaCha8Rng,
    species: usize,
    complexes: usize,
    reactions: usize,
) -> Network {
    let names = names(species.max(1));
    let mut pool: Vec<Vec<u8>> = Vec::new();
    let mut seen = HashSet::new();
    let mut attempts = 0;
    while pool.len() < complexes.max(2) && attempts < 1000 {
        attempts += 1;
        let c = random_complex(rng, names.len());
        if seen.insert(c.clone()) {
            pool.push(c);
        }
    }
    if pool.len() < 2 {
        pool = vec![vec![0; names.len()], {
            let mut e = vec![0; names.len()];
            e[0] = 1;
            e
        }];
    }
    let mut b = NetworkBuilder::new();
    let mut pairs = HashSet::new();
    let max_pairs = pool.len() * (pool.len() - 1);
    let target = reactions.max(1).min(max_pairs);
    while pairs.len() < target {
        let i = rng.gen_range(0..pool.len());
        let j = rng.gen_range(0..pool.len());
        if i == j || !pairs.insert((i, j)) {
            continue;
        }
        let a = intern(&mut b, &names, &pool[i]);
        let c = intern(&mut b, &names, &pool[j]);
        b.reaction(a, c, None).expect("distinct fresh pair");
    }
    b.build().expect("generated network is valid")
}

pub fn random_mass_action(rng: &mut ChaCha8Rng, net: &Network) -> PowerLawKinetics<f64> {
    let rates = (0..net.r()).map(|_| rng.gen_range(0.5..2.0)).collect();
    PowerLawKinetics::mass_action(net, rates).expect("positive rates")
}

/// Disjoint cycles (some with reverse edges) on fresh complexes, with
/// mass-action rates chosen so that a random positive state is complex
/// balanced. The returned decomposition is the linkage decomposition.
pub fn weakly_reversible(
    rng: &mut ChaCha8Rng,
    species: usize,
    reactions: usize,
) -> Result<Generated> {
    check_size(species, reactions)?;
    if reactions < 2 {
        return Err(Error::SizeLimit(
            "a weakly reversible network needs at least 2 reactions".into(),
        ));
    }
    let names = names(species);
    let log_state: Vec<f64> = (0..species).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut seen = HashSet::new();
    let mut b = NetworkBuilder::new();
    // (reactant complex vector, flux) per reaction
    let mut fluxes: Vec<(Vec<u8>, f64)> = Vec::new();
    let mut remaining = reactions;
    let mut stalled = 0;
    while remaining >= 2 && stalled < 50 {
        let len = rng.gen_range(2..=4).min(remaining);
        let mut cycle = Vec::with_capacity(len);
        let mut attempts = 0;
        while cycle.len() < len && attempts < 200 {
            attempts += 1;
            let c = random_complex(rng, species);
            if !seen.contains(&c) && !cycle.contains(&c) {
                cycle.push(c);
            }
        }
        if cycle.len() < len {
            stalled += 1;
            continue;
        }
        for c in &cycle {
            seen.insert(c.clone());
        }
        let ids: Vec<usize> = cycle.iter().map(|c| intern(&mut b, &names, c)).collect();
        let base = rng.gen_range(0.5..2.0);
        let mut edges: Vec<(usize, usize, f64)> = Vec::new();
        if len == 2 {
            edges.push((0, 1, base));
            edges.push((1, 0, base));
        } else {
            for k in 0..len {
                edges.push((k, (k + 1) % len, base));
            }
            let mut extra = remaining - len;
            for k in 0..len {
                if extra > 0 && rng.gen_bool(0.3) {
                    let w = rng.gen_range(0.5..2.0);
                    edges[k].2 += w;
                    edges.push(((k + 1) % len, k, w));
                    extra -= 1;
                }
            }
        }
        for (a, c, f) in edges {
            b.reaction(ids[a], ids[c], None)?;
            fluxes.push((cycle[a].clone(), f));
            remaining -= 1;
        }
    }
    let network = b.build()?;
    let state: Vec<f64> = (0..network.m())
        .map(|s| {
            let name = &network.species()[s].name;
            let idx = names.iter().position(|n| n == name).expect("known species");
            log_state[idx].exp()
        })
        .collect();
    let rates = fluxes
        .iter()
        .map(|(y, f)| {
            let mono: f64 = y
                .iter()
                .enumerate()
                .filter(|(_, v)| **v > 0)
                .map(|(s, v)| log_state[s] * *v as f64)
                .sum::<f64>()
                .exp();
            f / mono
        })
        .collect();
    let kinetics = PowerLawKinetics::mass_action(&network, rates)?;
    let decomposition = Decomposition::linkage(&network);
    Ok(Generated {
        network,
        kinetics,
        decomposition,
        ssystem: None,
        equilibrium: Some(state),
    })
}

/// Random S-system on `m` species with small half-integer kinetic orders.
pub fn random_ssystem(rng: &mut ChaCha8Rng, m: usize) -> SSystemModel {
    let mut dependent: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.8)).collect();
    if !dependent.iter().any(|d| *d) {
        dependent[0] = true;
    }
    let mut alpha = vec![0.0; m];
    let mut beta = vec![0.0; m];
    let order = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.6) {
            0.0
        } else {
            let v = rng.gen_range(-2..=4) as f64 / 2.0;
            if v == 0.0 {
                1.0
            } else {
                v
            }
        }
    };
    let mut g = vec![vec![0.0; m]; m];
    let mut h = vec![vec![0.0; m]; m];
    for i in 0..m {
        if !dependent[i] {
            continue;
        }
        alpha[i] = rng.gen_range(0.5..2.0);
        beta[i] = rng.gen_range(0.5..2.0);
        for j in 0..m {
            g[i][j] = order(rng);
            h[i][j] = order(rng);
        }
        if h[i][i] == 0.0 && rng.gen_bool(0.7) {
            h[i][i] = 1.0;
        }
    }
    SSystemModel {
        m,
        names: None,
        dependent,
        alpha,
        beta,
        g,
        h,
        independent_values: None,
    }
}

/// Random coarsening: blocks of `d` are merged into randomly chosen groups.
pub fn random_coarsening(rng: &mut ChaCha8Rng, d: &Decomposition) -> Decomposition {
    let k = d.k();
    let groups = rng.gen_range(1..=k.max(1));
    let mut merged = vec![Vec::new(); groups];
    for b in d.blocks() {
        merged[rng.gen_range(0..groups)].extend(b.iter().copied());
    }
    merged.retain(|b| !b.is_empty());
    let r = d.blocks().iter().map(Vec::len).sum();
    Decomposition::partition(merged, r).expect("coarsening of a partition")
}

/// Random C*-decomposition: the zero linkage class is split into its
/// branches at the zero complex, and branches and the remaining linkage
/// classes are distributed over random blocks.
pub fn random_c_star_decomposition(rng: &mut ChaCha8Rng, net: &Network) -> Decomposition {
    let zero = net.zero_complex();
    let mut uf = UnionFind::<usize>::new(net.n());
    for r in net.reactions() {
        if Some(r.reactant) != zero && Some(r.product) != zero {
            uf.union(r.reactant, r.product);
        }
    }
    let mut units: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (j, r) in net.reactions().iter().enumerate() {
        let anchor = if Some(r.reactant) == zero {
            r.product
        } else {
            r.reactant
        };
        units.entry(uf.find(anchor)).or_default().push(j);
    }
    let mut units: Vec<Vec<usize>> = units.into_values().collect();
    units.shuffle(rng);
    let k = rng.gen_range(1..=units.len());
    let mut blocks = vec![Vec::new(); k];
    for u in units {
        blocks[rng.gen_range(0..k)].extend(u);
    }
    blocks.retain(|b| !b.is_empty());
    Decomposition::partition(blocks, net.r()).expect("units partition the reactions")
}

/// Random rational matrix with small integer numerators and denominators.
pub fn random_rational_matrix(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
) -> crate::RationalMatrix {
    let data = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        Rational::from_i64(0)
                    } else {
                        crate::scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))
                    }
                })
                .collect()
        })
        .collect();
    crate::RationalMatrix::from_rows(data, cols).expect("consistent shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{classify, is_c_star_decomposition};
    use crate::kinetics::evaluate;
    use crate::structure::is_weakly_reversible;

    #[test]
    fn size_limits() {
        let cfg = GeneratorConfig {
            kind: GeneratorKind::WeaklyReversible,
            species: 21,
            reactions: 10,
        };
        assert!(matches!(generate(&cfg, 0), Err(Error::SizeLimit(_))));
        let cfg = GeneratorConfig {
            species: 3,
            reactions: 61,
            ..cfg
        };
        assert!(matches!(generate(&cfg, 0), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn weakly_reversible_has_known_equilibrium() {
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = weakly_reversible(&mut rng, 4, 10).unwrap();
            assert!(is_weakly_reversible(&g.network));
            let x = g.equilibrium.unwrap();
            let ev = evaluate(&g.network, &g.kinetics, &x).unwrap();
            assert!(
                ev.complex_rates.iter().all(|v| v.abs() < 1e-9),
                "seed {seed}"
            );
            assert!(
                classify(&g.network, &g.decomposition)
                    .unwrap()
                    .incidence_independent
            );
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in [
            GeneratorKind::WeaklyReversible,
            GeneratorKind::SpeciesDecomposable,
            GeneratorKind::CDecomposed,
        ] {
            let cfg = GeneratorConfig {
                kind,
                species: 4,
                reactions: 12,
            };
            assert_eq!(generate(&cfg, 7).unwrap(), generate(&cfg, 7).unwrap());
        }
    }

    #[test]
    fn c_star_generator() {
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = random_network(&mut rng, 3, 6, 6);
            let d = random_c_star_decomposition(&mut rng, &n);
            assert!(is_c_star_decomposition(&n, &d));
        }
    }
}
