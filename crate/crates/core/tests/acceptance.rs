//! Acceptance criteria, one line of output per criterion.

mod common;

use std::time::{Duration, Instant};

use crn_decomp::decomposition::{
    classify, coarsen, finest_independent_decomposition, is_c_decomposition, Decomposition,
};
use crn_decomp::generate::{
    random_c_star_decomposition, random_coarsening, random_network, random_rational_matrix,
    random_ssystem, weakly_reversible,
};
use crn_decomp::kinetics::{verify_equilibria_theorems, SolverOptions};
use crn_decomp::ssystem::{
    coverability, realize, RealizationKind, RealizationSpec, SSystemModel, SpeciesRef, SymbolicOde,
};
use crn_decomp::structure::{analyze, linkage_classes, strong_and_terminal_classes};
use crn_decomp::{parse_network, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    violations: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            violations: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
        }
    }
}

fn run(name: &str, limit: Duration, body: impl FnOnce(&mut Outcome)) -> bool {
    let mut out = Outcome::new();
    let start = Instant::now();
    body(&mut out);
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let pass = out.violations.is_empty() && in_time;
    println!(
        "{} {name}: {} violations, {:.2?} (limit {:?})",
        if pass { "PASS" } else { "FAIL" },
        out.violations.len(),
        elapsed,
        limit
    );
    for v in out.violations.iter().take(10) {
        println!("    {v}");
    }
    pass
}

fn deficiency_one_example(out: &mut Outcome) {
    let net = parse_network("X1 -> 2 X1 + X2\nX2 -> 2 X2 + X1").unwrap();
    let rep = analyze(&net);
    out.check((rep.n, rep.l, rep.s, rep.delta) == (4, 2, 1, 1), || {
        format!("n, l, s, delta = {:?}", (rep.n, rep.l, rep.s, rep.delta))
    });
    let lin = classify(&net, &Decomposition::linkage(&net)).unwrap();
    out.check(lin.blocks.iter().all(|b| b.delta == 0), || {
        "linkage block deficiencies nonzero".into()
    });
    out.check(!lin.independent, || {
        "linkage decomposition reported independent".into()
    });
    out.check(lin.incidence_independent, || {
        "linkage decomposition not incidence independent".into()
    });
    out.check(finest_independent_decomposition(&net).k() == 1, || {
        "finest independent decomposition has more than one block".into()
    });
}

fn chain_realization(out: &mut Outcome) {
    let model = SSystemModel {
        m: 3,
        names: Some(vec!["X".into(), "Y".into(), "Z".into()]),
        dependent: vec![true; 3],
        alpha: vec![1.0, 2.0, 3.0],
        beta: vec![2.0, 3.0, 4.0],
        g: vec![vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]],
        h: vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ],
        independent_values: None,
    };
    let n = |s: &str| Some(SpeciesRef::Name(s.into()));
    let spec = RealizationSpec {
        kind: RealizationKind::Subnetwork,
        rho: Some(vec![n("0"), n("X"), n("Y")]),
        pi: Some(vec![n("Y"), n("Z"), n("0")]),
        r: None,
        p: None,
    };
    let real = realize(&model, &spec).unwrap();
    let expected = parse_network("0 -> X\nX -> Y\nY -> Z\nZ -> 0").unwrap();
    out.check(real.network.r() == 4, || {
        format!("{} reactions", real.network.r())
    });
    let same = (0..expected.r()).all(|j| {
        let text = expected.format_reaction(j);
        (0..real.network.r()).any(|k| real.network.format_reaction(k) == text)
    });
    out.check(same, || format!("unexpected network:\n{}", real.network));
    let cov = real.species_covering().unwrap();
    out.check(cov.is_covering(), || {
        "species covering flagged as a decomposition".into()
    });
}

fn random_partition(rng: &mut ChaCha8Rng, r: usize) -> Decomposition {
    let k = rng.gen_range(1..=r);
    let mut blocks = vec![Vec::new(); k];
    for j in 0..r {
        blocks[rng.gen_range(0..k)].push(j);
    }
    blocks.retain(|b: &Vec<usize>| !b.is_empty());
    Decomposition::partition(blocks, r).unwrap()
}

fn random_grouping(rng: &mut ChaCha8Rng, k: usize) -> Vec<Vec<usize>> {
    let g = rng.gen_range(1..=k);
    let mut groups = vec![Vec::new(); g];
    for i in 0..k {
        groups[rng.gen_range(0..g)].push(i);
    }
    groups.retain(|b: &Vec<usize>| !b.is_empty());
    groups
}

fn check_deficiency_bounds(out: &mut Outcome, seed: u64, net: &Network, d: &Decomposition) {
    let rep = classify(net, d).unwrap();
    if rep.independent {
        out.check(rep.delta <= rep.sum_block_deficiency, || {
            format!("seed {seed}: independent but delta > sum")
        });
    }
    if rep.incidence_independent {
        out.check(rep.delta >= rep.sum_block_deficiency, || {
            format!("seed {seed}: incidence independent but delta < sum")
        });
    }
}

fn property_suite(out: &mut Outcome) {
    let mut with_zero = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=5);
        let complexes = rng.gen_range(2..=8);
        let r = rng.gen_range(1..=10);
        let net = random_network(&mut rng, m, complexes, r);
        let l = linkage_classes(&net).len();

        // (a)
        let rank = net.incidence_matrix().rank();
        out.check(rank == net.n() - l, || {
            format!("seed {seed}: rank(I_a) = {rank}, n - l = {}", net.n() - l)
        });

        // (b)
        for _ in 0..3 {
            let d = random_coarsening(&mut rng, &Decomposition::linkage(&net));
            out.check(is_c_decomposition(&net, &d), || {
                format!("seed {seed}: coarsened linkage is not C")
            });
            let rep = classify(&net, &d).unwrap();
            out.check(rep.incidence_independent && rep.k <= l, || {
                format!(
                    "seed {seed}: C-decomposition incidence_independent={} k={} l={l}",
                    rep.incidence_independent, rep.k
                )
            });
            check_deficiency_bounds(out, seed, &net, &d);
        }

        // (c)
        for _ in 0..3 {
            let d = random_c_star_decomposition(&mut rng, &net);
            let rep = classify(&net, &d).unwrap();
            out.check(rep.is_c_star && rep.incidence_independent, || {
                format!("seed {seed}: C* decomposition not incidence independent")
            });
            if rep.k0 > 0 {
                with_zero += 1;
                let sum_l: usize = rep.blocks.iter().map(|b| b.l).sum();
                out.check(sum_l as i64 - l as i64 == rep.k0 as i64 - 1, || {
                    format!("seed {seed}: sum l_i = {sum_l}, l = {l}, k0 = {}", rep.k0)
                });
            }
            check_deficiency_bounds(out, seed, &net, &d);
        }

        // (d) and (e)
        let starts = [
            random_partition(&mut rng, net.r()),
            finest_independent_decomposition(&net),
            Decomposition::linkage(&net),
        ];
        for d in starts {
            check_deficiency_bounds(out, seed, &net, &d);
            let rep = classify(&net, &d).unwrap();
            let grouping = random_grouping(&mut rng, d.k());
            let coarse = coarsen(&d, &grouping).unwrap();
            let crep = classify(&net, &coarse).unwrap();
            check_deficiency_bounds(out, seed, &net, &coarse);
            out.check(!rep.independent || crep.independent, || {
                format!("seed {seed}: coarsening lost independence")
            });
            out.check(
                !rep.incidence_independent || crep.incidence_independent,
                || format!("seed {seed}: coarsening lost incidence independence"),
            );
        }
    }
    out.check(with_zero >= 100, || {
        format!("only {with_zero} C*-decompositions contained the zero complex")
    });
}

fn ssystem_suite(out: &mut Outcome) {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=6);
        let model = random_ssystem(&mut rng, m);
        let real = realize(
            &model,
            &RealizationSpec::of_kind(RealizationKind::Independent),
        )
        .unwrap();
        let net = &real.network;
        let species = real.species_covering().unwrap();
        out.check(!species.is_covering() && real.merged.is_empty(), || {
            format!("seed {seed}: species pairs overlap")
        });
        let rep = classify(net, &species).unwrap();
        out.check(rep.independent, || {
            format!("seed {seed}: species decomposition not independent")
        });

        let m_rev = real
            .pairs
            .iter()
            .filter(|p| match (p.inflow, p.outflow) {
                (Some(a), Some(b)) => net.reverse_of(a) == Some(b),
                _ => false,
            })
            .count() as i64;
        let bound = m as i64 - m_rev;
        out.check(rep.delta <= bound, || {
            format!("seed {seed}: delta {} > m - m_rev = {bound}", rep.delta)
        });
        if rep.bi_independent {
            out.check(rep.delta == bound, || {
                format!(
                    "seed {seed}: bi-independent but delta {} != {bound}",
                    rep.delta
                )
            });
        }

        let cov = coverability(net, false);
        out.check(cov.species_decomposable, || {
            format!("seed {seed}: coverability search missed the species decomposition")
        });
        out.check(cov.bound_holds, || {
            format!("seed {seed}: search covering violates the deficiency bound")
        });

        out.check(finest_independent_decomposition(net).same_partition(&species), || {
            format!("seed {seed}: finest independent decomposition differs from species decomposition")
        });

        let ode = SymbolicOde::from_kinetic_system(net, &real.kinetics);
        out.check(ode.matches(&model.ode(), 1e-12), || {
            format!("seed {seed}: ODE mismatch")
        });
    }
}

fn equilibria_suite(out: &mut Outcome) {
    let opts = SolverOptions::default();
    let mut existence_checked = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(2..=4);
        let r = rng.gen_range(4..=9);
        let g = weakly_reversible(&mut rng, m, r).unwrap();
        let d = random_coarsening(&mut rng, &g.decomposition);
        let rep = verify_equilibria_theorems(&g.network, &g.kinetics, &d, 8, seed, &opts).unwrap();
        out.check(rep.incidence_independent, || {
            format!("seed {seed}: decomposition not incidence independent")
        });
        out.check(!rep.whole_cb_witnesses.is_empty(), || {
            format!("seed {seed}: no whole-network CB witness found")
        });
        out.check(!rep.joint_cb_witnesses.is_empty(), || {
            format!("seed {seed}: no joint block CB witness found")
        });
        for c in &rep.checks {
            out.check(c.violations == 0, || {
                format!("seed {seed}: {} has {} violations", c.name, c.violations)
            });
            if c.name == "cb_existence" {
                out.check(c.applicable && c.checked == 1, || {
                    format!("seed {seed}: cb_existence not exercised")
                });
                existence_checked += c.checked;
            }
        }
    }
    out.check(existence_checked == 20, || {
        format!("existence checked on {existence_checked} of 20 networks")
    });
}

fn oracle_suite(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..500 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let m = random_rational_matrix(&mut rng, rows, cols);
        let exact = m.rank();
        let oracle = common::minor_rank(&common::matrix_rows(&m), cols);
        out.check(exact == oracle, || {
            format!("matrix {i}: rank {exact}, minors {oracle}")
        });
    }
    for i in 0..300 {
        let net = common::random_graph_network(&mut rng, 8);
        let edges: Vec<(usize, usize)> = net
            .reactions()
            .iter()
            .map(|r| (r.reactant, r.product))
            .collect();
        let (strong, terminal) = common::path_classes(net.n(), &edges);
        let got = strong_and_terminal_classes(&net);
        out.check(got.strong == strong && got.terminal == terminal, || {
            format!(
                "graph {i}: {:?} vs {:?}",
                (got.strong.clone(), got.terminal.clone()),
                (strong.clone(), terminal.clone())
            )
        });
    }
}

fn main() {
    let results = [
        run(
            "deficiency-one example",
            Duration::from_secs(1),
            deficiency_one_example,
        ),
        run(
            "chain subnetwork realization",
            Duration::from_secs(1),
            chain_realization,
        ),
        run(
            "decomposition property suite (200 networks)",
            Duration::from_secs(30),
            property_suite,
        ),
        run(
            "S-system suite (100 models)",
            Duration::from_secs(30),
            ssystem_suite,
        ),
        run(
            "equilibria suite (20 networks)",
            Duration::from_secs(120),
            equilibria_suite,
        ),
        run("oracle equivalence", Duration::from_secs(60), oracle_suite),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
