//! Network decompositions: construction, classification and the canonical
//! decompositions (linkage classes, S-decomposition, finest independent).
//!
//! A decomposition is a partition of the reaction index set; a covering
//! may have overlapping blocks. Every test in this module is an exact
//! rational rank or set computation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{self, sum_is_direct, Matrix};
use crate::model::Network;
use crate::structure::{linkage_classes, reaction_linkage_class};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    blocks: Vec<Vec<usize>>,
    covering: bool,
}

fn check_blocks(blocks: &[Vec<usize>], r: usize) -> Result<Vec<Vec<usize>>> {
    let mut seen = vec![false; r];
    let mut out = Vec::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(Error::EmptyBlock(i));
        }
        let mut b = b.clone();
        b.sort_unstable();
        b.dedup();
        for &j in &b {
            if j >= r {
                return Err(Error::InvalidDecomposition(format!(
                    "reaction index {j} out of range (r = {r})"
                )));
            }
            seen[j] = true;
        }
        out.push(b);
    }
    if let Some(j) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidDecomposition(format!(
            "reaction {j} is in no block"
        )));
    }
    Ok(out)
}

impl Decomposition {
    /// A partition of `0..r`; overlapping blocks are rejected.
    pub fn partition(blocks: Vec<Vec<usize>>, r: usize) -> Result<Self> {
        let blocks = check_blocks(&blocks, r)?;
        if blocks.iter().map(Vec::len).sum::<usize>() != r {
            return Err(Error::CoveringNotPartition);
        }
        Ok(Decomposition {
            blocks,
            covering: false,
        })
    }

    /// A covering of `0..r`. The covering flag is set only when blocks
    /// actually overlap.
    pub fn covering(blocks: Vec<Vec<usize>>, r: usize) -> Result<Self> {
        let blocks = check_blocks(&blocks, r)?;
        let covering = blocks.iter().map(Vec::len).sum::<usize>() != r;
        Ok(Decomposition { blocks, covering })
    }

    /// Linkage-class decomposition.
    pub fn linkage(net: &Network) -> Self {
        let lc = reaction_linkage_class(net);
        let l = linkage_classes(net).len();
        let mut blocks = vec![Vec::new(); l];
        for (j, &k) in lc.iter().enumerate() {
            blocks[k].push(j);
        }
        Decomposition {
            blocks,
            covering: false,
        }
    }

    pub fn single(net: &Network) -> Self {
        Decomposition {
            blocks: vec![(0..net.r()).collect()],
            covering: false,
        }
    }

    pub fn discrete(net: &Network) -> Self {
        Decomposition {
            blocks: (0..net.r()).map(|j| vec![j]).collect(),
            covering: false,
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_covering(&self) -> bool {
        self.covering
    }

    /// Blocks sorted by smallest member, for order-independent comparison.
    pub fn canonical_blocks(&self) -> Vec<Vec<usize>> {
        let mut b = self.blocks.clone();
        b.sort();
        b
    }

    pub fn same_partition(&self, other: &Decomposition) -> bool {
        self.canonical_blocks() == other.canonical_blocks()
    }

    /// Whether every block of `self` lies inside exactly one block of `coarser`.
    pub fn is_refinement_of(&self, coarser: &Decomposition) -> bool {
        self.blocks.iter().all(|b| {
            coarser
                .blocks
                .iter()
                .filter(|c| b.iter().all(|j| c.binary_search(j).is_ok()))
                .count()
                == 1
        })
    }

    /// Reads `{ "blocks": [[label-or-index, ...], ...] }`.
    pub fn from_json(value: &Value, net: &Network) -> Result<Self> {
        let blocks = value
            .get("blocks")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidDecomposition("missing \"blocks\" array".into()))?;
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            let items = b
                .as_array()
                .ok_or_else(|| Error::InvalidDecomposition("block is not an array".into()))?;
            let mut block = Vec::with_capacity(items.len());
            for it in items {
                let j = match it {
                    Value::Number(n) => n
                        .as_u64()
                        .map(|v| v as usize)
                        .ok_or_else(|| Error::InvalidDecomposition(format!("bad index {n}")))?,
                    Value::String(s) => net.reaction_index_by_label(s).ok_or_else(|| {
                        Error::InvalidDecomposition(format!("unknown reaction label '{s}'"))
                    })?,
                    other => {
                        return Err(Error::InvalidDecomposition(format!(
                            "bad block entry {other}"
                        )))
                    }
                };
                block.push(j);
            }
            out.push(block);
        }
        Decomposition::covering(out, net.r())
    }

    /// Writes blocks by label when every reaction is labelled, else by index.
    pub fn to_json(&self, net: &Network) -> Value {
        let labelled = net.reactions().iter().all(|r| r.label.is_some());
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| {
                Value::Array(
                    b.iter()
                        .map(|&j| match (&net.reactions()[j].label, labelled) {
                            (Some(l), true) => Value::String(l.clone()),
                            _ => Value::from(j),
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "blocks": blocks })
    }
}

/// Subnetwork induced by a reaction block.
pub fn subnetwork(net: &Network, block: &[usize]) -> Result<Network> {
    net.restrict(block)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub reactions: Vec<usize>,
    pub n: usize,
    pub l: usize,
    pub s: usize,
    pub delta: i64,
    pub contains_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub k: usize,
    pub blocks: Vec<BlockSummary>,
    pub n: usize,
    pub l: usize,
    pub s: usize,
    pub delta: i64,
    pub independent: bool,
    pub incidence_independent: bool,
    pub bi_independent: bool,
    #[serde(rename = "is_C")]
    pub is_c: bool,
    #[serde(rename = "is_C_star")]
    pub is_c_star: bool,
    /// Number of blocks containing the zero complex.
    pub k0: usize,
    pub sum_block_deficiency: i64,
    /// `delta - sum(delta_i)`; nonnegative for incidence independent decompositions.
    pub deficiency_slack_low: i64,
    /// `sum(delta_i) - delta`; nonnegative for independent decompositions.
    pub deficiency_slack_high: i64,
}

fn complex_sets(net: &Network, d: &Decomposition) -> Vec<BTreeSet<usize>> {
    d.blocks
        .iter()
        .map(|b| {
            b.iter()
                .flat_map(|&j| {
                    let r = &net.reactions()[j];
                    [r.reactant, r.product]
                })
                .collect()
        })
        .collect()
}

fn pairwise_disjoint(sets: &[BTreeSet<usize>], skip: Option<usize>) -> bool {
    let mut owner = HashMap::new();
    for (i, s) in sets.iter().enumerate() {
        for &c in s {
            if Some(c) == skip {
                continue;
            }
            if owner.insert(c, i).is_some() {
                return false;
            }
        }
    }
    true
}

/// Whether the blocks have pairwise disjoint complex sets.
pub fn is_c_decomposition(net: &Network, d: &Decomposition) -> bool {
    !d.covering && pairwise_disjoint(&complex_sets(net, d), None)
}

/// Whether the blocks have pairwise disjoint nonzero complex sets.
pub fn is_c_star_decomposition(net: &Network, d: &Decomposition) -> bool {
    !d.covering && pairwise_disjoint(&complex_sets(net, d), net.zero_complex())
}

/// Whether every linkage class lies entirely inside one block.
pub fn linkage_refines(net: &Network, d: &Decomposition) -> bool {
    Decomposition::linkage(net).is_refinement_of(d)
}

fn count_linkage(
    n: usize,
    edges: impl Iterator<Item = (usize, usize)>,
    nodes: &BTreeSet<usize>,
) -> usize {
    let mut uf = UnionFind::<usize>::new(n);
    for (a, b) in edges {
        uf.union(a, b);
    }
    nodes
        .iter()
        .map(|&i| uf.find(i))
        .collect::<BTreeSet<_>>()
        .len()
}

pub fn classify(net: &Network, d: &Decomposition) -> Result<DecompositionReport> {
    if d.covering {
        return Err(Error::CoveringNotPartition);
    }
    let m = net.m();
    let vectors = net.reaction_vectors();
    let incidence = net.incidence_matrix();
    let sets = complex_sets(net, d);
    let zero = net.zero_complex();

    let mut blocks = Vec::with_capacity(d.k());
    let mut stoich_spans = Vec::with_capacity(d.k());
    let mut incidence_spans = Vec::with_capacity(d.k());
    for (b, cs) in d.blocks.iter().zip(&sets) {
        let span: Vec<Vec<Rational>> = b.iter().map(|&j| vectors[j].clone()).collect();
        let s = linalg::span_rank(&span, m)?;
        let l = count_linkage(
            net.n(),
            b.iter()
                .map(|&j| (net.reactions()[j].reactant, net.reactions()[j].product)),
            cs,
        );
        let n = cs.len();
        blocks.push(BlockSummary {
            reactions: b.clone(),
            n,
            l,
            s,
            delta: n as i64 - l as i64 - s as i64,
            contains_zero: zero.is_some_and(|z| cs.contains(&z)),
        });
        stoich_spans.push(span);
        incidence_spans.push(b.iter().map(|&j| incidence.column(j)).collect::<Vec<_>>());
    }

    let n = net.n();
    let l = linkage_classes(net).len();
    let s = linalg::span_rank(&vectors, m)?;
    let delta = n as i64 - l as i64 - s as i64;
    let independent = sum_is_direct(&stoich_spans, m)?;
    let incidence_independent = sum_is_direct(&incidence_spans, n)?;
    let sum_block_deficiency: i64 = blocks.iter().map(|b| b.delta).sum();
    let k0 = blocks.iter().filter(|b| b.contains_zero).count();

    Ok(DecompositionReport {
        k: d.k(),
        blocks,
        n,
        l,
        s,
        delta,
        independent,
        incidence_independent,
        bi_independent: independent && incidence_independent,
        is_c: pairwise_disjoint(&sets, None),
        is_c_star: pairwise_disjoint(&sets, zero),
        k0,
        sum_block_deficiency,
        deficiency_slack_low: delta - sum_block_deficiency,
        deficiency_slack_high: sum_block_deficiency - delta,
    })
}

/// Merges blocks according to `grouping`, which must partition `0..k`.
pub fn coarsen(d: &Decomposition, grouping: &[Vec<usize>]) -> Result<Decomposition> {
    let mut seen = vec![false; d.k()];
    for g in grouping {
        if g.is_empty() {
            return Err(Error::InvalidGrouping("empty group".into()));
        }
        for &i in g {
            if i >= d.k() {
                return Err(Error::InvalidGrouping(format!(
                    "block index {i} out of range"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidGrouping(format!("block {i} grouped twice")));
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidGrouping(format!("block {i} not grouped")));
    }
    let blocks = grouping
        .iter()
        .map(|g| {
            let mut b: Vec<usize> = g
                .iter()
                .flat_map(|&i| d.blocks[i].iter().copied())
                .collect();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    Ok(Decomposition {
        blocks,
        covering: d.covering,
    })
}

/// Checks that being a C-decomposition coincides with the linkage-class
/// decomposition refining `d`. Both sides are evaluated independently.
pub fn verify_c_structure(net: &Network, d: &Decomposition) -> bool {
    is_c_decomposition(net, d) == linkage_refines(net, d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CStarCheck {
    pub holds: bool,
    pub k0: usize,
    /// The zero-linkage parts of the blocks partition the nonzero complexes
    /// of the zero linkage class.
    pub zero_class_partitioned: bool,
    /// The remaining parts form a C-decomposition of the rest of the network.
    pub remainder_is_c: bool,
    /// `sum(l_i) - l == k0 - 1`; `None` when `k0 == 0`.
    pub count_identity: Option<bool>,
}

pub fn verify_cstar_structure(net: &Network, d: &Decomposition) -> Result<CStarCheck> {
    if d.covering {
        return Err(Error::CoveringNotPartition);
    }
    if !is_c_star_decomposition(net, d) {
        return Err(Error::NotCStar);
    }
    let Some(zero) = net.zero_complex() else {
        let ok = verify_c_structure(net, d);
        return Ok(CStarCheck {
            holds: ok,
            k0: 0,
            zero_class_partitioned: true,
            remainder_is_c: ok,
            count_identity: None,
        });
    };

    let lc = reaction_linkage_class(net);
    let zero_class = {
        let classes = linkage_classes(net);
        classes
            .iter()
            .position(|c| c.contains(&zero))
            .expect("zero complex is in a class")
    };
    let l0_reactions: BTreeSet<usize> = (0..net.r()).filter(|&j| lc[j] == zero_class).collect();
    let l0_nonzero: BTreeSet<usize> = l0_reactions
        .iter()
        .flat_map(|&j| [net.reactions()[j].reactant, net.reactions()[j].product])
        .filter(|&c| c != zero)
        .collect();

    let mut zero_parts: Vec<BTreeSet<usize>> = Vec::new();
    let mut remainders: Vec<Vec<usize>> = Vec::new();
    let mut k0 = 0;
    let mut sum_l = 0;
    for b in &d.blocks {
        let mut uf = UnionFind::<usize>::new(net.n());
        let mut nodes = BTreeSet::new();
        for &j in b {
            let r = &net.reactions()[j];
            uf.union(r.reactant, r.product);
            nodes.insert(r.reactant);
            nodes.insert(r.product);
        }
        sum_l += nodes
            .iter()
            .map(|&c| uf.find(c))
            .collect::<BTreeSet<_>>()
            .len();
        let zero_root = nodes.contains(&zero).then(|| uf.find(zero));
        if zero_root.is_some() {
            k0 += 1;
        }
        let (in_zero, rest): (Vec<usize>, Vec<usize>) = b
            .iter()
            .partition(|&&j| Some(uf.find(net.reactions()[j].reactant)) == zero_root);
        if !in_zero.is_empty() {
            zero_parts.push(
                in_zero
                    .iter()
                    .flat_map(|&j| [net.reactions()[j].reactant, net.reactions()[j].product])
                    .filter(|&c| c != zero)
                    .collect(),
            );
        }
        if !rest.is_empty() {
            remainders.push(rest);
        }
    }

    let covered: BTreeSet<usize> = zero_parts.iter().flatten().copied().collect();
    let zero_class_partitioned = pairwise_disjoint(&zero_parts, None) && covered == l0_nonzero;

    let remainder_reactions: BTreeSet<usize> = remainders.iter().flatten().copied().collect();
    let expected_rest: BTreeSet<usize> =
        (0..net.r()).filter(|j| !l0_reactions.contains(j)).collect();
    let remainder_sets: Vec<BTreeSet<usize>> = remainders
        .iter()
        .map(|b| {
            b.iter()
                .flat_map(|&j| [net.reactions()[j].reactant, net.reactions()[j].product])
                .collect()
        })
        .collect();
    let remainder_is_c =
        remainder_reactions == expected_rest && pairwise_disjoint(&remainder_sets, None);

    let l = linkage_classes(net).len();
    let count_identity = (k0 > 0).then(|| sum_l as i64 - l as i64 == k0 as i64 - 1);

    Ok(CStarCheck {
        holds: zero_class_partitioned && remainder_is_c && count_identity != Some(false),
        k0,
        zero_class_partitioned,
        remainder_is_c,
        count_identity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SDecomposition {
    pub decomposition: Decomposition,
    pub s_complexes: Vec<usize>,
    pub s_reactions: Vec<usize>,
    pub ns_reactions: Vec<usize>,
}

/// Splits reactions into those whose endpoints lie in the stoichiometric
/// subspace and the rest.
pub fn s_decomposition(net: &Network) -> Result<SDecomposition> {
    let span = net.reaction_vectors();
    let mut in_s = vec![false; net.n()];
    for (i, flag) in in_s.iter_mut().enumerate() {
        *flag = linalg::member(&net.complex_vector(i), &span)?;
    }
    let mut s_reactions = Vec::new();
    let mut ns_reactions = Vec::new();
    for (j, r) in net.reactions().iter().enumerate() {
        match (in_s[r.reactant], in_s[r.product]) {
            (true, true) => s_reactions.push(j),
            (false, false) => ns_reactions.push(j),
            _ => return Err(Error::MixedSReaction { reaction: j }),
        }
    }
    let blocks: Vec<Vec<usize>> = [s_reactions.clone(), ns_reactions.clone()]
        .into_iter()
        .filter(|b| !b.is_empty())
        .collect();
    Ok(SDecomposition {
        decomposition: Decomposition::partition(blocks, net.r())?,
        s_complexes: (0..net.n()).filter(|&i| in_s[i]).collect(),
        s_reactions,
        ns_reactions,
    })
}

/// Finest independent decomposition from the kernel coordinate graph of
/// an orientation.
///
/// The orientation keeps every irreversible reaction and the lower-indexed
/// member of each reversible pair. Two oriented reactions are joined when
/// they share support in a kernel basis vector of the oriented reaction
/// vector matrix; the basis used is the fundamental-circuit basis from the
/// reduced echelon form, so the components are exactly the connected
/// components of the column matroid. Omitted reverse reactions join their
/// partner's block.
pub fn finest_independent_decomposition(net: &Network) -> Decomposition {
    let r = net.r();
    let mut partner: Vec<Option<usize>> = vec![None; r];
    let mut oriented = Vec::new();
    for (j, slot) in partner.iter_mut().enumerate() {
        match net.reverse_of(j) {
            Some(i) if i < j => *slot = Some(i),
            _ => oriented.push(j),
        }
    }
    let cols: Vec<Vec<Rational>> = oriented.iter().map(|&j| net.reaction_vector(j)).collect();
    let l_o = Matrix::from_columns(&cols, net.m()).expect("species dimension");

    let mut uf = UnionFind::<usize>::new(oriented.len());
    for v in l_o.kernel_basis() {
        let support: Vec<usize> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
            .map(|(i, _)| i)
            .collect();
        for w in support.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let position: HashMap<usize, usize> =
        oriented.iter().enumerate().map(|(p, &j)| (j, p)).collect();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for j in 0..r {
        let p = position[&partner[j].unwrap_or(j)];
        groups.entry(uf.find(p)).or_default().push(j);
    }
    let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
    blocks.sort();
    Decomposition {
        blocks,
        covering: false,
    }
}
