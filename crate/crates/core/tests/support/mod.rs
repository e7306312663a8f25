#![allow(dead_code)]
//! Shared helpers for the integration suites: reference implementations
//! kept deliberately independent from the library's search paths, plus
//! small random-object builders.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use hkernel_core::{ArcStateGraph, ColoredDigraph, Digraph, Walk};

/// Minimum walk cost from `u` to every vertex over walks of at most
/// `cutoff` arcs, by dynamic programming over exact walk length. This is
/// the bounded exhaustive-enumeration oracle: entry j of the table ranges
/// over every walk with j arcs.
pub fn dp_min_costs(d: &ColoredDigraph, u: &str, cutoff: usize) -> Vec<Option<usize>> {
    let arcs: Vec<(String, String)> = d
        .arcs()
        .map(|(a, b, _)| (a.to_string(), b.to_string()))
        .collect();
    let verts: Vec<&str> = d.digraph().vertices().collect();
    let vertex_pos = |name: &str| verts.iter().position(|v| *v == name).unwrap();
    let asg = ArcStateGraph::build(d);
    let m = asg.state_count();
    let mut best_vertex: Vec<Option<usize>> = vec![None; verts.len()];
    // walks with one arc
    let mut cur: Vec<Option<usize>> = (0..m)
        .map(|a| if arcs[a].0 == u { Some(0) } else { None })
        .collect();
    for _step in 1..=cutoff {
        for (a, cost) in cur.iter().enumerate() {
            if let Some(c) = cost {
                let head = vertex_pos(&arcs[a].1);
                if best_vertex[head].is_none_or(|b| *c < b) {
                    best_vertex[head] = Some(*c);
                }
            }
        }
        let mut next: Vec<Option<usize>> = vec![None; m];
        for (a, cost) in cur.iter().enumerate() {
            if let Some(c) = cost {
                for &(b, w) in asg.transitions_of(a) {
                    let nc = c + w as usize;
                    if next[b].is_none_or(|old| nc < old) {
                        next[b] = Some(nc);
                    }
                }
            }
        }
        cur = next;
    }
    best_vertex.into_iter().map(|o| o.map(|c| c + 1)).collect()
}

/// Truly exhaustive walk enumeration for very small instances: depth-first
/// over all walks of at most `max_len` arcs, counting obstructions from
/// the colors directly. Independent of the arc-state machinery.
pub fn enumerated_min_cost(d: &ColoredDigraph, u: &str, v: &str, max_len: usize) -> Option<usize> {
    fn go(
        d: &ColoredDigraph,
        target: &str,
        walk: &mut Vec<String>,
        obstructions: usize,
        remaining: usize,
        best: &mut Option<usize>,
    ) {
        let here = walk.last().unwrap().clone();
        if here == target && walk.len() > 1 && best.is_none_or(|b| obstructions + 1 < b) {
            *best = Some(obstructions + 1);
        }
        if remaining == 0 {
            return;
        }
        let outs: Vec<String> = d
            .digraph()
            .out_neighbors(&here)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        for w in outs {
            let extra = if walk.len() >= 2 {
                let prev = &walk[walk.len() - 2];
                let c1 = d.color_of(prev, &here).unwrap().to_string();
                let c2 = d.color_of(&here, &w).unwrap().to_string();
                usize::from(!d.pattern().has_arc(&c1, &c2))
            } else {
                0
            };
            walk.push(w);
            go(d, target, walk, obstructions + extra, remaining - 1, best);
            walk.pop();
        }
    }
    let mut best = None;
    let mut walk = vec![u.to_string()];
    go(d, v, &mut walk, 0, max_len, &mut best);
    best
}

/// All simple non-loop cycle lengths by DFS path enumeration; returns the
/// minimum, used against the library's BFS-based computation.
pub fn enumerated_min_cycle(g: &Digraph) -> Option<usize> {
    fn go(g: &Digraph, start: &str, path: &mut Vec<String>, best: &mut Option<usize>) {
        let here = path.last().unwrap().clone();
        let outs: Vec<String> = g
            .out_neighbors(&here)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        for w in outs {
            if w == start && path.len() >= 2 {
                if best.is_none_or(|b| path.len() < b) {
                    *best = Some(path.len());
                }
            } else if w != start && !path.contains(&w) && w.as_str() > start {
                path.push(w);
                go(g, start, path, best);
                path.pop();
            }
        }
    }
    let mut best = None;
    for s in g.vertices() {
        // only cycles whose smallest vertex is s, to avoid duplicates
        let mut path = vec![s.to_string()];
        go(g, s, &mut path, &mut best);
    }
    best
}

/// A uniformly seeded random walk of 1..=max_len arcs, if the digraph has
/// any arc leaving a sampled start.
pub fn random_walk(rng: &mut impl Rng, d: &ColoredDigraph, max_len: usize) -> Option<Walk> {
    let verts: Vec<String> = d.digraph().vertices().map(|v| v.to_string()).collect();
    let start = verts.choose(rng)?.clone();
    let mut seq = vec![start];
    let target = rng.gen_range(1..=max_len);
    for _ in 0..target {
        let here = seq.last().unwrap();
        let outs: Vec<String> = d
            .digraph()
            .out_neighbors(here)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        match outs.choose(rng) {
            Some(w) => seq.push(w.clone()),
            None => break,
        }
    }
    (seq.len() >= 2).then(|| Walk::new(seq).unwrap())
}

/// Extend from `start` along compatible arcs only, producing a clean walk
/// when one exists.
pub fn random_clean_walk(
    rng: &mut impl Rng,
    d: &ColoredDigraph,
    start: &str,
    max_len: usize,
) -> Option<Walk> {
    let mut seq = vec![start.to_string()];
    let target = rng.gen_range(1..=max_len);
    for _ in 0..target {
        let here = seq.last().unwrap().clone();
        let prev_color = if seq.len() >= 2 {
            Some(d.color_of(&seq[seq.len() - 2], &here).unwrap().to_string())
        } else {
            None
        };
        let outs: Vec<String> = d
            .digraph()
            .out_neighbors(&here)
            .unwrap()
            .filter(|w| match &prev_color {
                None => true,
                Some(c1) => {
                    let c2 = d.color_of(&here, w).unwrap();
                    d.pattern().has_arc(c1, c2)
                }
            })
            .map(|w| w.to_string())
            .collect();
        match outs.choose(rng) {
            Some(w) => seq.push(w.clone()),
            None => break,
        }
    }
    (seq.len() >= 2).then(|| Walk::new(seq).unwrap())
}

/// All-pairs shortest path lengths keyed by vertex id order.
pub fn dist_matrix(g: &Digraph) -> Vec<Vec<Option<usize>>> {
    g.vertices()
        .map(|u| {
            g.vertices()
                .map(|v| g.shortest_walk_length(u, v).unwrap())
                .collect()
        })
        .collect()
}

/// Greedy maximal k-independent set following the given insertion order.
pub fn greedy_k_independent(g: &Digraph, k: usize, order: &[String]) -> BTreeSet<String> {
    let mut chosen: BTreeSet<String> = BTreeSet::new();
    for v in order {
        let ok = chosen.iter().all(|s| {
            let a = g.shortest_walk_length(v, s).unwrap();
            let b = g.shortest_walk_length(s, v).unwrap();
            a.is_none_or(|d| d >= k) && b.is_none_or(|d| d >= k)
        });
        if ok {
            chosen.insert(v.clone());
        }
    }
    chosen
}
