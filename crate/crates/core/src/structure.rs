//! Graph and deficiency analysis of a single network.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, sum_is_direct};
use crate::model::Network;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NetworkClass {
    /// Stoichiometric subspace contains the reactant subspace.
    SRS,
    /// Reactant subspace contains the stoichiometric subspace.
    RSS,
    /// Reactant and stoichiometric subspaces form a direct sum.
    TRS,
    /// None of the above.
    NRN,
}

/// Refinement of [`NetworkClass::RSS`]: `RES` when every complex is an
/// S-complex, `RSP` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RssSubclass {
    RES,
    RSP,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub m: usize,
    pub r: usize,
    pub n: usize,
    pub n_r: usize,
    pub l: usize,
    pub sl: usize,
    pub t: usize,
    pub s: usize,
    pub q: usize,
    /// Dimension of the image of the map of complexes.
    pub c: usize,
    pub delta: i64,
    pub delta_p: i64,
    pub weakly_reversible: bool,
    pub t_minimal: bool,
    pub linkage_classes: Vec<Vec<usize>>,
    pub strong_classes: Vec<Vec<usize>>,
    pub terminal_strong_classes: Vec<Vec<usize>>,
    pub per_linkage_deficiency: Vec<i64>,
    pub network_class: NetworkClass,
    pub network_subclass: Option<RssSubclass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongClasses {
    pub strong: Vec<Vec<usize>>,
    pub terminal: Vec<Vec<usize>>,
}

fn canonical(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

/// Connected components of the undirected reaction graph, as sorted
/// complex index lists ordered by their smallest member.
pub fn linkage_classes(net: &Network) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::<usize>::new(net.n());
    for r in net.reactions() {
        uf.union(r.reactant, r.product);
    }
    let labels = uf.into_labeling();
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, root) in labels.into_iter().enumerate() {
        groups.entry(root).or_default().push(i);
    }
    canonical(groups.into_values().collect())
}

/// Linkage class index of every reaction, consistent with [`linkage_classes`].
pub fn reaction_linkage_class(net: &Network) -> Vec<usize> {
    let classes = linkage_classes(net);
    let mut of_complex = vec![0; net.n()];
    for (k, c) in classes.iter().enumerate() {
        for &i in c {
            of_complex[i] = k;
        }
    }
    net.reactions()
        .iter()
        .map(|r| of_complex[r.reactant])
        .collect()
}

/// Strongly connected components and the terminal ones among them (sinks
/// of the condensation).
pub fn strong_and_terminal_classes(net: &Network) -> StrongClasses {
    let mut g = DiGraph::<(), ()>::with_capacity(net.n(), net.r());
    let nodes: Vec<_> = (0..net.n()).map(|_| g.add_node(())).collect();
    for r in net.reactions() {
        g.add_edge(nodes[r.reactant], nodes[r.product], ());
    }
    let strong = canonical(
        tarjan_scc(&g)
            .into_iter()
            .map(|c| c.into_iter().map(|v| v.index()).collect())
            .collect(),
    );
    let mut comp = vec![0; net.n()];
    for (k, c) in strong.iter().enumerate() {
        for &i in c {
            comp[i] = k;
        }
    }
    let mut has_exit = vec![false; strong.len()];
    for r in net.reactions() {
        if comp[r.reactant] != comp[r.product] {
            has_exit[comp[r.reactant]] = true;
        }
    }
    let terminal = strong
        .iter()
        .enumerate()
        .filter(|(k, _)| !has_exit[*k])
        .map(|(_, c)| c.clone())
        .collect();
    StrongClasses { strong, terminal }
}

pub fn is_weakly_reversible(net: &Network) -> bool {
    strong_and_terminal_classes(net).strong.len() == linkage_classes(net).len()
}

/// Rank of the stoichiometric subspace.
pub fn stoichiometric_rank(net: &Network) -> usize {
    net.stoichiometric_matrix().rank()
}

/// Network deficiency `n - l - s`.
pub fn deficiency(net: &Network) -> i64 {
    net.n() as i64 - linkage_classes(net).len() as i64 - stoichiometric_rank(net) as i64
}

/// Indices of complexes lying in the stoichiometric subspace.
pub fn s_complexes(net: &Network) -> Vec<usize> {
    let span = net.reaction_vectors();
    (0..net.n())
        .filter(|&i| linalg::member(&net.complex_vector(i), &span).expect("species dimension"))
        .collect()
}

pub fn analyze(net: &Network) -> StructuralReport {
    let m = net.m();
    let n = net.n();
    let linkage = linkage_classes(net);
    let classes = strong_and_terminal_classes(net);
    let l = linkage.len();
    let sl = classes.strong.len();
    let t = classes.terminal.len();

    let reaction_vectors = net.reaction_vectors();
    let s = linalg::span_rank(&reaction_vectors, m).expect("species dimension");
    let reactants = net.reactant_complexes();
    let reactant_vectors: Vec<Vec<Rational>> =
        reactants.iter().map(|&i| net.complex_vector(i)).collect();
    let q = linalg::span_rank(&reactant_vectors, m).expect("species dimension");
    let c = net.map_of_complexes().rank();

    let lc_of_reaction = reaction_linkage_class(net);
    let per_linkage_deficiency = linkage
        .iter()
        .enumerate()
        .map(|(k, cls)| {
            let vecs: Vec<Vec<Rational>> = (0..net.r())
                .filter(|&j| lc_of_reaction[j] == k)
                .map(|j| reaction_vectors[j].clone())
                .collect();
            let s_i = linalg::span_rank(&vecs, m).expect("species dimension");
            cls.len() as i64 - 1 - s_i as i64
        })
        .collect();

    let (network_class, network_subclass) = if c == s {
        (NetworkClass::SRS, None)
    } else if c == q {
        let all_s = s_complexes(net).len() == n;
        let sub = if all_s {
            RssSubclass::RES
        } else {
            RssSubclass::RSP
        };
        (NetworkClass::RSS, Some(sub))
    } else if c == q + s
        && sum_is_direct(&[reactant_vectors, reaction_vectors], m).expect("species dimension")
    {
        (NetworkClass::TRS, None)
    } else {
        (NetworkClass::NRN, None)
    };

    StructuralReport {
        m,
        r: net.r(),
        n,
        n_r: reactants.len(),
        l,
        sl,
        t,
        s,
        q,
        c,
        delta: n as i64 - l as i64 - s as i64,
        delta_p: reactants.len() as i64 - q as i64,
        weakly_reversible: sl == l,
        t_minimal: t == l,
        linkage_classes: linkage,
        strong_classes: classes.strong,
        terminal_strong_classes: classes.terminal,
        per_linkage_deficiency,
        network_class,
        network_subclass,
    }
}
