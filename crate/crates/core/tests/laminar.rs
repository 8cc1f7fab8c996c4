mod common;

use std::collections::BTreeSet;

use asmtree::assembly::{
    count_level_assignments, count_timed_trees, count_trees, enumerate_trees, validate, AssemblyTree, GluingRule,
};
use asmtree::graph::Graph;
use asmtree::Natural;
use rand::SeedableRng;

use common::{brute_level_assignments, family_obeys, laminar_families, random_connected};

fn family_of(t: &AssemblyTree, n: usize) -> Vec<u64> {
    let full = (1u64 << n) - 1;
    let mut sets: Vec<u64> =
        t.labels().into_iter().map(|s| s.bits()).filter(|&s| s != full && s.count_ones() >= 2).collect();
    sets.sort_unstable();
    sets
}

fn rule_name(rule: GluingRule) -> &'static str {
    match rule {
        GluingRule::None => "none",
        GluingRule::Connected => "connected",
        GluingRule::Edge => "edge",
    }
}

fn graphs(max_n: usize) -> Vec<Graph> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let mut out = Vec::new();
    for n in 2..=max_n {
        out.push(Graph::path(n).unwrap());
        out.push(Graph::star(n).unwrap());
        out.push(Graph::complete(n).unwrap());
        if n >= 3 {
            out.push(Graph::cycle(n).unwrap());
        }
        for density in [0.2, 0.5] {
            out.push(random_connected(&mut rng, n, density));
        }
    }
    out
}

#[test]
fn enumeration_matches_laminar_families() {
    let families: Vec<Vec<Vec<u64>>> = (0..=6).map(|n| if n < 2 { vec![] } else { laminar_families(n) }).collect();
    // unrestricted counts are the total partition numbers
    let totals: Vec<usize> = (2..=6).map(|n| families[n].len()).collect();
    assert_eq!(totals, [1, 4, 26, 236, 2752]);
    for g in graphs(6) {
        let n = g.n();
        for rule in GluingRule::ALL {
            let expected: BTreeSet<Vec<u64>> = families[n]
                .iter()
                .filter(|f| family_obeys(&g, f, rule_name(rule)))
                .map(|f| {
                    let mut f = f.clone();
                    f.sort_unstable();
                    f
                })
                .collect();
            let trees = enumerate_trees(&g, rule).unwrap();
            let got: BTreeSet<Vec<u64>> = trees.iter().map(|t| family_of(t, n)).collect();
            assert_eq!(got.len(), trees.len(), "duplicate trees for {:?} {rule}", g.edges());
            assert_eq!(got, expected, "{:?} {rule}", g.edges());
            assert_eq!(count_trees(&g, rule).unwrap(), Natural::from(trees.len()));
            assert!(trees.iter().all(|t| validate(&g, t, rule).is_valid()));
        }
    }
}

#[test]
fn level_assignments_match_brute_force() {
    for n in 2..=5 {
        let g = Graph::complete(n).unwrap();
        let mut timed_total = 0u64;
        for t in enumerate_trees(&g, GluingRule::None).unwrap() {
            let brute = brute_level_assignments(n, &family_of(&t, n));
            assert_eq!(count_level_assignments(&t), Natural::from(brute), "{}", t.to_json());
            timed_total += brute;
        }
        assert_eq!(count_timed_trees(&g, GluingRule::None).unwrap(), Natural::from(timed_total));
    }
}
