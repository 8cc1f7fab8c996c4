#![allow(dead_code)]

use std::collections::BTreeSet;

use asmtree::graph::Graph;
use rand::seq::SliceRandom;
use rand::Rng;

/// A random connected graph: a random spanning tree plus extra edges.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, density: f64) -> Graph {
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let (u, v) = (parent.min(order[i]), parent.max(order[i]));
        edges.insert((u, v));
    }
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(density) {
                edges.insert((u, v));
            }
        }
    }
    Graph::new(n, &edges.into_iter().collect::<Vec<_>>()).unwrap()
}

/// Every laminar family of proper subsets of `{1..n}` with at least two
/// elements, as bitmasks. Together with the singletons and the full set each
/// one is the label set of exactly one assembly tree.
pub fn laminar_families(n: usize) -> Vec<Vec<u64>> {
    let full = (1u64 << n) - 1;
    let candidates: Vec<u64> = (1..full).filter(|s: &u64| s.count_ones() >= 2).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    extend(&candidates, 0, &mut chosen, &mut out);
    out
}

fn extend(candidates: &[u64], from: usize, chosen: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    out.push(chosen.clone());
    for i in from..candidates.len() {
        let s = candidates[i];
        let compatible = chosen.iter().all(|&c| c & s == 0 || c & s == c || c & s == s);
        if compatible {
            chosen.push(s);
            extend(candidates, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// Children of every non-singleton set in the completed family.
pub fn children_of(n: usize, family: &[u64]) -> Vec<(u64, Vec<u64>)> {
    let full = (1u64 << n) - 1;
    let mut sets: Vec<u64> = family.to_vec();
    sets.push(full);
    let singles: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    let all: Vec<u64> = sets.iter().copied().chain(singles.iter().copied()).collect();
    sets.iter()
        .map(|&s| {
            let below: Vec<u64> = all.iter().copied().filter(|&c| c != s && c & s == c).collect();
            let maximal: Vec<u64> =
                below.iter().copied().filter(|&c| !below.iter().any(|&d| d != c && d & c == c)).collect();
            (s, maximal)
        })
        .collect()
}

fn induced_connected(g: &Graph, s: u64) -> bool {
    let verts: Vec<usize> = (1..=g.n()).filter(|v| s >> (v - 1) & 1 == 1).collect();
    let mut seen = vec![verts[0]];
    let mut i = 0;
    while i < seen.len() {
        let u = seen[i];
        for &v in &verts {
            if !seen.contains(&v) && g.has_edge(u, v) {
                seen.push(v);
            }
        }
        i += 1;
    }
    seen.len() == verts.len()
}

/// Whether the completed family satisfies `rule` ("none", "connected",
/// "edge") on `g`, checked straight from the definitions.
pub fn family_obeys(g: &Graph, family: &[u64], rule: &str) -> bool {
    let nodes = children_of(g.n(), family);
    match rule {
        "none" => true,
        "connected" => nodes.iter().all(|&(s, _)| induced_connected(g, s)),
        "edge" => nodes.iter().all(|(_, kids)| {
            kids.len() == 2
                && g.edges().iter().any(|&(u, v)| {
                    let (bu, bv) = (1u64 << (u - 1), 1u64 << (v - 1));
                    (kids[0] & bu != 0 && kids[1] & bv != 0) || (kids[0] & bv != 0 && kids[1] & bu != 0)
                })
        }),
        other => panic!("unknown rule {other}"),
    }
}

/// Number of ways to stamp the internal nodes of the completed family with
/// times `1..=m` for some `m`, strictly increasing towards the root and
/// using every time, by trying all stampings.
pub fn brute_level_assignments(n: usize, family: &[u64]) -> u64 {
    let nodes = children_of(n, family);
    let k = nodes.len();
    let mut total = 0;
    for m in 1..=k {
        let mut times = vec![1usize; k];
        loop {
            let surjective = (1..=m).all(|t| times.contains(&t));
            let increasing = nodes.iter().enumerate().all(|(i, (_, kids))| {
                kids.iter().all(|&c| match nodes.iter().position(|&(s, _)| s == c) {
                    Some(j) => times[j] < times[i],
                    None => true,
                })
            });
            if surjective && increasing {
                total += 1;
            }
            let mut pos = 0;
            while pos < k && times[pos] == m {
                times[pos] = 1;
                pos += 1;
            }
            if pos == k {
                break;
            }
            times[pos] += 1;
        }
    }
    total
}
