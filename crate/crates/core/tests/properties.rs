//! Module-level invariants checked over randomized instances: the
//! classical-graph layer against quadratic reference checks, walk
//! arithmetic, partition uniqueness, state-graph consistency, and
//! document round-trips.

mod support;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hkernel_core::generate::{blob_dag, blob_path, random_colored, random_equivalence, run_ring};
use hkernel_core::{
    brute_force_kl_kernels, construct_prop44, h_walk_reachable, kernel_by_paths, min_h_length,
    validate_partition, verify_l_absorbent_by_walks, ArcStateGraph, ClassDigraph, ColoredDigraph,
    HClassPartition, InstanceDocument, SearchMode,
};

fn small_random(seed: u64) -> ColoredDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = [0.2, 0.5, 0.8][rng.gen_range(0..3)];
    random_colored(&mut rng, 6, 10, 3, density)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn condensation_is_acyclic_and_partitions_vertices(seed in any::<u64>()) {
        let d = small_random(seed);
        let g = d.digraph();
        let sc = g.strong_components();
        prop_assert!(sc.condensation.topological_order().is_some());
        let mut seen = BTreeSet::new();
        for comp in &sc.components {
            for v in comp {
                prop_assert!(seen.insert(v.clone()), "components overlap");
            }
        }
        prop_assert_eq!(seen.len(), g.vertex_count());
    }

    #[test]
    fn unilateral_matches_pairwise_reachability(seed in any::<u64>()) {
        let d = small_random(seed);
        let g = d.digraph();
        if g.is_empty() {
            return Ok(());
        }
        let dist = support::dist_matrix(g);
        let n = g.vertex_count();
        let expected = (0..n).all(|i| {
            (0..n).all(|j| i == j || dist[i][j].is_some() || dist[j][i].is_some())
        });
        prop_assert_eq!(g.is_unilateral(), expected);
    }

    #[test]
    fn min_cycle_matches_enumeration(seed in any::<u64>()) {
        let d = small_random(seed);
        let g = d.digraph();
        prop_assert_eq!(g.min_nonloop_cycle_length(), support::enumerated_min_cycle(g));
    }

    #[test]
    fn concatenating_a_clean_walk_adds_at_most_one(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_colored(&mut rng, 7, 14, 3, 0.5);
        let Some(t) = support::random_walk(&mut rng, &d, 5) else { return Ok(()) };
        let Some(t2) = support::random_clean_walk(&mut rng, &d, t.last(), 4) else {
            return Ok(());
        };
        let (u, v, w) = (t.first(), t.last(), t2.last());
        if u == v || v == w || u == w {
            return Ok(());
        }
        prop_assert!(d.is_h_walk(&t2).unwrap());
        let joined = t.concat(&t2).unwrap();
        let obs_t = d.obstructions(&t).unwrap();
        let obs_joined = d.obstructions(&joined).unwrap();
        prop_assert!(obs_t.is_subset(&obs_joined));
        let mut allowed = obs_t.clone();
        allowed.insert(t.len());
        prop_assert!(obs_joined.is_subset(&allowed));
        let (a, b) = (d.h_length(&t).unwrap(), d.h_length(&joined).unwrap());
        prop_assert!(b == a || b == a + 1);
    }

    #[test]
    fn arcless_pattern_degenerates_to_ordinary_length(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_colored(&mut rng, 6, 10, 3, 0.0);
        if let Some(w) = support::random_walk(&mut rng, &d, 6) {
            prop_assert_eq!(d.h_length(&w).unwrap(), w.len());
        }
        let g = d.digraph();
        for u in g.vertices() {
            for v in g.vertices() {
                if u != v {
                    prop_assert_eq!(
                        min_h_length(&d, u, v).unwrap(),
                        g.shortest_walk_length(u, v).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn zero_weight_state_moves_stay_inside_one_class(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_equivalence(&mut rng, 7, false);
        let f = HClassPartition::finest(&d).into_partition().unwrap();
        let arcs: Vec<(String, String)> = d
            .arcs()
            .map(|(u, v, _)| (u.to_string(), v.to_string()))
            .collect();
        let asg = ArcStateGraph::build(&d);
        for a in 0..asg.state_count() {
            let ca = f.class_of_arc(&d, &arcs[a].0, &arcs[a].1).unwrap();
            for &(b, wgt) in asg.transitions_of(a) {
                let cb = f.class_of_arc(&d, &arcs[b].0, &arcs[b].1).unwrap();
                // weight-0 transitions are exactly the union steps
                prop_assert_eq!(wgt == 0, ca == cb);
            }
        }
    }

    #[test]
    fn clean_reach_triangle_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_colored(&mut rng, 6, 12, 3, 0.5);
        let g = d.digraph();
        for u in g.vertices() {
            for v in g.vertices() {
                if u == v {
                    continue;
                }
                let Some(uv) = min_h_length(&d, u, v).unwrap() else { continue };
                for w in h_walk_reachable(&d, v).unwrap() {
                    if w != u && w != v {
                        let uw = min_h_length(&d, u, &w).unwrap();
                        prop_assert!(uw.is_some_and(|x| x <= uv + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn brute_force_21_matches_direct_kernel_definition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_colored(&mut rng, 5, 10, 2, 0.5);
        let g = d.digraph();
        let ids: Vec<String> = g.vertices().map(|v| v.to_string()).collect();
        let n = ids.len();
        let mut direct = Vec::new();
        for mask in 0..(1u32 << n) {
            let s: BTreeSet<String> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| ids[i].clone())
                .collect();
            let independent = s
                .iter()
                .all(|u| g.out_neighbors(u).unwrap().all(|v| v == u || !s.contains(v)));
            let absorbent = ids
                .iter()
                .filter(|v| !s.contains(*v))
                .all(|v| g.out_neighbors(v).unwrap().any(|w| s.contains(w)));
            if independent && absorbent {
                direct.push(s);
            }
        }
        direct.sort_by_key(|s| (s.len(), s.iter().cloned().collect::<Vec<_>>()));
        let brute = brute_force_kl_kernels(g, 2, 1, SearchMode::All, 15).unwrap();
        prop_assert_eq!(brute, direct);
    }

    #[test]
    fn instance_documents_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_equivalence(&mut rng, 7, false);
        let f = HClassPartition::finest(&d).into_partition().unwrap();
        let with_partition = rng.gen_bool(0.5);
        let doc = InstanceDocument::from_colored_digraph(
            &d,
            with_partition.then_some(&f),
            None,
        )
        .canonicalize();
        let bytes = hkernel_core::emit_instance(&doc);
        let parsed = hkernel_core::parse_instance(&bytes).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(hkernel_core::emit_instance(&parsed), bytes);
        prop_assert_eq!(parsed.digest(), doc.digest());
    }
}

#[test]
fn every_valid_partition_coarsens_the_finest() {
    // all partitions of up to 5 arcs, exhaustively
    fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for item in 0..n {
            let mut next = Vec::new();
            for p in &out {
                for target in 0..=p.len() {
                    let mut q = p.clone();
                    if target == p.len() {
                        q.push(vec![item]);
                    } else {
                        q[target].push(item);
                    }
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 40 {
        let d = random_colored(&mut rng, 5, 5, 3, 0.5);
        let arcs: Vec<(String, String)> = d
            .arcs()
            .map(|(u, v, _)| (u.to_string(), v.to_string()))
            .collect();
        if arcs.is_empty() {
            continue;
        }
        let finest = HClassPartition::finest(&d);
        let mut any_valid = false;
        for candidate in set_partitions(arcs.len()) {
            let classes: Vec<Vec<(String, String)>> = candidate
                .iter()
                .map(|c| c.iter().map(|&i| arcs[i].clone()).collect())
                .collect();
            let valid = validate_partition(&d, &classes).unwrap().is_none();
            if !valid {
                continue;
            }
            any_valid = true;
            let finest = finest
                .partition()
                .expect("a valid partition exists, so the finest must too");
            // each candidate class must be a union of finest classes:
            // equivalently, two arcs in one finest class never split
            for class in &classes {
                let names: BTreeSet<String> = class
                    .iter()
                    .map(|(u, v)| finest.class_of_arc(&d, u, v).unwrap())
                    .collect();
                for name in names {
                    for (u, v) in finest.class_arcs(&d, &name).unwrap() {
                        assert!(
                            class.contains(&(u.clone(), v.clone())),
                            "a finest class is split by a valid partition"
                        );
                    }
                }
            }
        }
        if matches!(finest, hkernel_core::PartitionOutcome::NoPartition(_)) {
            assert!(!any_valid, "finest failed but a valid partition exists");
        }
        checked += 1;
    }
}

#[test]
fn dp_oracle_agrees_with_true_enumeration_on_tiny_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let d = random_colored(&mut rng, 4, 5, 2, 0.5);
        let cutoff = 2 * d.digraph().arc_count().max(1);
        for u in d.digraph().vertices() {
            let dp = support::dp_min_costs(&d, u, cutoff);
            for (vi, v) in d.digraph().vertices().enumerate() {
                if u == v {
                    continue;
                }
                let direct = support::enumerated_min_cost(&d, u, v, cutoff);
                assert_eq!(dp[vi], direct, "dp vs enumeration at ({u},{v})");
            }
        }
    }
}

#[test]
fn union_kernels_are_absorbent_within_class_radius_plus_one() {
    // the walk-preservative absorbency transfer, on two targeted families
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..60 {
        let g = if trial % 2 == 0 {
            let k = rng.gen_range(2..=4);
            run_ring(&mut rng, k)
        } else {
            blob_dag(&mut rng, false)
        };
        let d1 = g
            .partition
            .union_subdigraph(&g.digraph, &g.class_kernel)
            .unwrap();
        let kernel = kernel_by_paths(&d1).unwrap();
        assert!(
            verify_l_absorbent_by_walks(&g.digraph, &kernel, g.l + 1)
                .unwrap()
                .is_none(),
            "union kernel must absorb within l+1"
        );
    }
}

#[test]
fn two_blob_bridge_cost_matches_enumeration() {
    // crossing the bridge from the far side of one triangle to the far
    // side of the other costs exactly three
    let fx = hkernel_core::fixtures();
    let (d, _) = fx["two-blob"].build().unwrap();
    let cutoff = 2 * d.digraph().arc_count();
    let by_dp = support::dp_min_costs(&d, "a2", cutoff);
    let zi = d.digraph().vertices().position(|v| v == "z").unwrap();
    assert_eq!(by_dp[zi], Some(3));
    assert_eq!(min_h_length(&d, "a2", "z").unwrap(), Some(3));
}

#[test]
fn clean_walk_kernel_collapses_to_path_kernel_on_clean_digraphs() {
    // when the whole digraph is obstruction-free the reachability digraph
    // mirrors plain reachability, so both constructions agree
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let d = hkernel_core::generate::h_digraph(&mut rng, 6, false);
        if d.digraph().is_empty() {
            continue;
        }
        let clean = hkernel_core::kernel_by_h_walks(&d).unwrap();
        let paths = kernel_by_paths(d.digraph()).unwrap();
        assert_eq!(clean, paths);
    }
}

#[test]
fn all_path_kernels_of_clean_digraphs_appear_in_exhaustive_lists() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..25 {
        let d = hkernel_core::generate::h_digraph(&mut rng, 5, false);
        let g = d.digraph();
        if g.is_empty() {
            continue;
        }
        let all = hkernel_core::exhaustive_klh_kernels(&d, 3, 2, 15).unwrap();
        let ids: Vec<String> = g.vertices().map(|v| v.to_string()).collect();
        for mask in 0u32..(1 << ids.len()) {
            let s: BTreeSet<String> = (0..ids.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| ids[i].clone())
                .collect();
            if hkernel_core::verify_kernel_by_paths(g, &s)
                .unwrap()
                .is_none()
            {
                assert!(
                    all.contains(&s),
                    "path kernel {s:?} of a clean digraph missing from the (3,2) list"
                );
            }
        }
    }
}

#[test]
fn certificates_weaken_and_reverify() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..20 {
        let blobs = rng.gen_range(2..=4);
        let g = blob_path(&mut rng, blobs);
        let c = ClassDigraph::build(&g.digraph, &g.partition);
        let cert = construct_prop44(&g.digraph, &g.partition, &c, &g.class_kernel, 3, 2).unwrap();
        assert!(cert.verified());
        let weak = cert.weaken(&g.digraph, 2, cert.l + 2).unwrap();
        assert!(weak.verified(), "weakened certificates must still verify");
    }
}
