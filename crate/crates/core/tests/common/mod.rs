#![allow(dead_code)]

use std::collections::BTreeSet;

use crn_decomp::{Network, NetworkBuilder, Rational};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Determinant by cofactor expansion along the first row.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut total = Rational::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = m[0][c].clone() * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << n))
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

/// Rank as the size of the largest nonvanishing minor.
pub fn minor_rank(m: &[Vec<Rational>], cols: usize) -> usize {
    let rows = m.len();
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<Rational>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                    .collect();
                if !det(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

/// Strong classes and terminal classes from explicit reachability by
/// enumerating simple paths.
pub fn path_classes(n: usize, edges: &[(usize, usize)]) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    fn walk(
        v: usize,
        edges: &[(usize, usize)],
        on_path: &mut Vec<bool>,
        reached: &mut BTreeSet<usize>,
    ) {
        reached.insert(v);
        for &(a, b) in edges {
            if a == v && !on_path[b] {
                on_path[b] = true;
                walk(b, edges, on_path, reached);
                on_path[b] = false;
            }
        }
    }
    let reach: Vec<BTreeSet<usize>> = (0..n)
        .map(|s| {
            let mut on_path = vec![false; n];
            on_path[s] = true;
            let mut reached = BTreeSet::new();
            walk(s, edges, &mut on_path, &mut reached);
            reached
        })
        .collect();
    let mut strong: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let class: Vec<usize> = (0..n)
            .filter(|&j| reach[i].contains(&j) && reach[j].contains(&i))
            .collect();
        for &j in &class {
            assigned[j] = true;
        }
        strong.push(class);
    }
    let terminal = strong
        .iter()
        .filter(|c| reach[c[0]].iter().all(|j| c.contains(j)))
        .cloned()
        .collect();
    (strong, terminal)
}

/// Network whose complexes are single distinct species, one per node, for
/// a random digraph on up to `max_nodes` nodes.
pub fn random_graph_network(rng: &mut ChaCha8Rng, max_nodes: usize) -> Network {
    let nodes = rng.gen_range(2..=max_nodes);
    let p = rng.gen_range(0.1..0.5);
    let mut b = NetworkBuilder::new();
    let mut any = false;
    for a in 0..nodes {
        for c in 0..nodes {
            if a != c && rng.gen_bool(p) {
                let x = b
                    .complex([(format!("C{a}").as_str(), Rational::one())])
                    .unwrap();
                let y = b
                    .complex([(format!("C{c}").as_str(), Rational::one())])
                    .unwrap();
                b.reaction(x, y, None).unwrap();
                any = true;
            }
        }
    }
    if !any {
        let x = b.complex([("C0", Rational::one())]).unwrap();
        let y = b.complex([("C1", Rational::one())]).unwrap();
        b.reaction(x, y, None).unwrap();
    }
    b.build().unwrap()
}

pub fn matrix_rows(m: &crn_decomp::RationalMatrix) -> Vec<Vec<Rational>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}
