use crn_decomp::decomposition::{
    classify, coarsen, finest_independent_decomposition, is_c_star_decomposition,
    verify_c_structure, Decomposition,
};
use crn_decomp::generate::{
    random_c_star_decomposition, random_coarsening, random_network, random_rational_matrix,
};
use crn_decomp::structure::{analyze, linkage_classes};
use crn_decomp::{parse_network, serialize_network, Network};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn network(seed: u64, m: usize, complexes: usize, r: usize) -> Network {
    random_network(&mut ChaCha8Rng::seed_from_u64(seed), m, complexes, r)
}

prop_compose! {
    fn arb_network()(seed in any::<u64>(), m in 1usize..6, complexes in 2usize..9, r in 1usize..12) -> Network {
        network(seed, m, complexes, r)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incidence_rank_is_n_minus_l(net in arb_network()) {
        prop_assert_eq!(net.incidence_matrix().rank(), net.n() - linkage_classes(&net).len());
    }

    #[test]
    fn report_invariants(net in arb_network()) {
        let rep = analyze(&net);
        prop_assert!(rep.delta >= 0);
        prop_assert!(rep.delta_p >= 0);
        prop_assert!(rep.sl >= rep.t && rep.t >= rep.l);
        prop_assert!(rep.s <= rep.m && rep.q <= rep.n_r);
        prop_assert!(rep.c <= rep.q + rep.s);
        prop_assert!(rep.per_linkage_deficiency.iter().all(|d| *d >= 0));
        prop_assert!(rep.per_linkage_deficiency.iter().sum::<i64>() <= rep.delta);
        prop_assert_eq!(rep.weakly_reversible, rep.sl == rep.l);
    }

    #[test]
    fn text_round_trip(net in arb_network()) {
        prop_assert_eq!(parse_network(&serialize_network(&net)).unwrap(), net);
    }

    #[test]
    fn json_round_trip(net in arb_network()) {
        let text = net.to_json().to_string();
        prop_assert_eq!(Network::from_json_str(&text).unwrap(), net);
    }

    #[test]
    fn c_decompositions_are_incidence_independent(net in arb_network(), seed in any::<u64>()) {
        let d = random_coarsening(&mut ChaCha8Rng::seed_from_u64(seed), &Decomposition::linkage(&net));
        let rep = classify(&net, &d).unwrap();
        prop_assert!(rep.is_c && rep.incidence_independent);
        prop_assert!(rep.k <= linkage_classes(&net).len());
        prop_assert!(rep.deficiency_slack_low >= 0);
        prop_assert!(verify_c_structure(&net, &d));
    }

    #[test]
    fn c_star_count_identity(net in arb_network(), seed in any::<u64>()) {
        let d = random_c_star_decomposition(&mut ChaCha8Rng::seed_from_u64(seed), &net);
        prop_assert!(is_c_star_decomposition(&net, &d));
        let rep = classify(&net, &d).unwrap();
        prop_assert!(rep.incidence_independent);
        if rep.k0 > 0 {
            let sum_l: usize = rep.blocks.iter().map(|b| b.l).sum();
            prop_assert_eq!(sum_l + 1, linkage_classes(&net).len() + rep.k0);
        }
    }

    #[test]
    fn finest_independent_is_independent_and_finest(net in arb_network()) {
        let d = finest_independent_decomposition(&net);
        let rep = classify(&net, &d).unwrap();
        prop_assert!(rep.independent);
        prop_assert!(rep.deficiency_slack_high >= 0);
        // splitting off any reaction from a block loses independence
        for (i, b) in d.blocks().iter().enumerate() {
            if b.len() < 2 {
                continue;
            }
            let mut blocks: Vec<Vec<usize>> = d.blocks().to_vec();
            let moved = blocks[i].pop().unwrap();
            blocks.push(vec![moved]);
            let split = Decomposition::partition(blocks, net.r()).unwrap();
            prop_assert!(!classify(&net, &split).unwrap().independent);
        }
    }

    #[test]
    fn coarsening_preserves_independence(net in arb_network(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = finest_independent_decomposition(&net);
        let coarse = random_coarsening(&mut rng, &base);
        prop_assert!(classify(&net, &coarse).unwrap().independent);
        let lin = Decomposition::linkage(&net);
        let grouping: Vec<Vec<usize>> = (0..lin.k()).map(|i| vec![i]).collect();
        prop_assert!(coarsen(&lin, &grouping).unwrap().same_partition(&lin));
    }

    #[test]
    fn rank_is_transpose_invariant(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let m = random_rational_matrix(&mut ChaCha8Rng::seed_from_u64(seed), rows, cols);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert!(m.rank() <= rows.min(cols));
    }
}
