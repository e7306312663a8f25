//! Reproducible instance generators: a general random family, a family
//! whose pattern is an equivalence on colors (so a valid partition always
//! exists), and targeted families that satisfy the hypotheses of the
//! individual constructions. All randomness flows through the caller's
//! seeded RNG.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coloring::{loops_only_pattern, ColoredDigraph, PatternDigraph};
use crate::digraph::Digraph;
use crate::hclass::{ClassDigraph, HClassPartition};
use crate::instance::{InstanceDocument, Metadata};

/// A generated instance with a guaranteed-valid finest partition and a
/// suggested class kernel for the family's target construction.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub digraph: ColoredDigraph,
    pub partition: HClassPartition,
    pub class_digraph: ClassDigraph,
    pub class_kernel: BTreeSet<String>,
    pub k: usize,
    pub l: usize,
}

fn finest(d: ColoredDigraph) -> (ColoredDigraph, HClassPartition, ClassDigraph) {
    let f = HClassPartition::finest(&d)
        .into_partition()
        .expect("generated family admits a partition");
    let c = ClassDigraph::build(&d, &f);
    (d, f, c)
}

/// Random loopless digraph with up to `max_n` vertices and `max_arcs`
/// arcs, colored with up to `max_colors` colors; the pattern draws each
/// color pair (loops included) with probability `h_density`. No structural
/// guarantees at all.
pub fn random_colored(
    rng: &mut impl Rng,
    max_n: usize,
    max_arcs: usize,
    max_colors: usize,
    h_density: f64,
) -> ColoredDigraph {
    let n = rng.gen_range(1..=max_n);
    let ncolors = rng.gen_range(1..=max_colors);
    let colors: Vec<String> = (0..ncolors).map(|i| format!("c{i}")).collect();
    let mut pattern_arcs = Vec::new();
    for a in &colors {
        for b in &colors {
            if rng.gen_bool(h_density) {
                pattern_arcs.push((a.clone(), b.clone()));
            }
        }
    }
    let pattern = PatternDigraph::new(colors.clone(), pattern_arcs).unwrap();
    let verts: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    slots.shuffle(rng);
    let narcs = rng.gen_range(0..=slots.len().min(max_arcs));
    let arcs: Vec<(String, String, String)> = slots[..narcs]
        .iter()
        .map(|&(u, v)| {
            (
                verts[u].clone(),
                verts[v].clone(),
                colors[rng.gen_range(0..ncolors)].clone(),
            )
        })
        .collect();
    ColoredDigraph::new(verts, arcs, pattern).unwrap()
}

/// Random colored digraph whose pattern is an equivalence on colors
/// (complete looped blocks), so compatibility is "same block" and the
/// finest partition always exists. Optionally forces strong connectivity
/// by threading a spanning cycle.
pub fn random_equivalence(
    rng: &mut impl Rng,
    max_n: usize,
    strongly_connected: bool,
) -> ColoredDigraph {
    let n = rng.gen_range(2..=max_n.max(2));
    let ncolors = rng.gen_range(1..=4usize);
    let colors: Vec<String> = (0..ncolors).map(|i| format!("c{i}")).collect();
    // random block structure on colors
    let nblocks = rng.gen_range(1..=ncolors);
    let block_of: Vec<usize> = (0..ncolors).map(|_| rng.gen_range(0..nblocks)).collect();
    let mut pattern_arcs = Vec::new();
    for a in 0..ncolors {
        for b in 0..ncolors {
            if block_of[a] == block_of[b] {
                pattern_arcs.push((colors[a].clone(), colors[b].clone()));
            }
        }
    }
    let pattern = PatternDigraph::new(colors.clone(), pattern_arcs).unwrap();
    let verts: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arcs: BTreeSet<(usize, usize)> = BTreeSet::new();
    if strongly_connected {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        for i in 0..n {
            arcs.insert((order[i], order[(i + 1) % n]));
        }
    }
    let extra = rng.gen_range(0..=2 * n);
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            arcs.insert((u, v));
        }
    }
    let colored: Vec<(String, String, String)> = arcs
        .into_iter()
        .map(|(u, v)| {
            (
                verts[u].clone(),
                verts[v].clone(),
                colors[rng.gen_range(0..ncolors)].clone(),
            )
        })
        .collect();
    ColoredDigraph::new(verts, colored, pattern).unwrap()
}

/// Random symmetric loopless digraph on up to `max_n` vertices.
pub fn random_symmetric(rng: &mut impl Rng, max_n: usize) -> Digraph {
    let n = rng.gen_range(1..=max_n);
    let verts: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(0.35) {
                arcs.push((verts[u].clone(), verts[v].clone()));
                arcs.push((verts[v].clone(), verts[u].clone()));
            }
        }
    }
    Digraph::new(verts, arcs, false).unwrap()
}

/// Every-pair-compatible instance: the pattern is complete with loops, so
/// the whole digraph is obstruction-free. Optionally strongly connected.
pub fn h_digraph(rng: &mut impl Rng, max_n: usize, strongly_connected: bool) -> ColoredDigraph {
    let d = random_equivalence(rng, max_n, strongly_connected);
    let colors: Vec<String> = d.pattern().colors().map(|c| c.to_string()).collect();
    let mut pattern_arcs = Vec::new();
    for a in &colors {
        for b in &colors {
            pattern_arcs.push((a.clone(), b.clone()));
        }
    }
    let pattern = PatternDigraph::new(colors, pattern_arcs).unwrap();
    let verts = d.digraph().vertices().map(|v| v.to_string()).collect();
    let arcs = d
        .arcs()
        .map(|(u, v, c)| (u.to_string(), v.to_string(), c.to_string()))
        .collect();
    ColoredDigraph::new(verts, arcs, pattern).unwrap()
}

/// Spacing between consecutive class-kernel members around a ring: at
/// least max(k, 3), so the in-neighborhood condition holds at every
/// junction.
fn ring_gaps(rng: &mut impl Rng, k: usize) -> Vec<usize> {
    let members = rng.gen_range(1..=2usize);
    let base = k.max(3);
    (0..members)
        .map(|_| base + rng.gen_range(0..=2usize))
        .collect()
}

/// Directed ring of monochromatic runs. Classes are the runs; the class
/// digraph is a directed cycle whose length is the number of runs, plus
/// loops at runs of length two or more. The returned class kernel is the
/// set of run classes at the starts of the gaps; it is a (k, max gap - 1)
/// kernel of the class digraph and all hypotheses of the swap construction
/// hold.
pub fn run_ring(rng: &mut impl Rng, k: usize) -> GeneratedInstance {
    let gaps = ring_gaps(rng, k);
    let m: usize = gaps.iter().sum();
    let run_len: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=3usize)).collect();
    let total: usize = run_len.iter().sum();
    let verts: Vec<String> = (0..total).map(|i| format!("v{i:03}")).collect();
    let colors: Vec<String> = (0..m).map(|i| format!("c{i:02}")).collect();
    let color_refs: Vec<&str> = colors.iter().map(|s| s.as_str()).collect();
    let pattern = loops_only_pattern(&color_refs).unwrap();
    let mut arcs = Vec::new();
    let mut pos = 0;
    for (run, &len) in run_len.iter().enumerate() {
        for _ in 0..len {
            arcs.push((
                verts[pos].clone(),
                verts[(pos + 1) % total].clone(),
                colors[run].clone(),
            ));
            pos += 1;
        }
    }
    let d = ColoredDigraph::new(verts, arcs, pattern).unwrap();
    let (d, f, c) = finest(d);
    assert_eq!(f.class_count(), m);
    // the run starting at position sum(gaps[..i]) is a kernel member
    let mut class_kernel = BTreeSet::new();
    let mut at = 0;
    let l = gaps.iter().map(|g| g - 1).max().unwrap();
    for g in &gaps {
        // class of the first arc of that run
        let first_vertex: usize = run_len[..at].iter().sum();
        let u = format!("v{first_vertex:03}");
        let w = format!("v{:03}", (first_vertex + 1) % total);
        class_kernel.insert(f.class_of_arc(&d, &u, &w).unwrap());
        at += g;
    }
    GeneratedInstance {
        digraph: d,
        partition: f,
        class_digraph: c,
        class_kernel,
        k,
        l,
    }
}

/// Ring of monochromatic cycles where each bridge arc borrows the color of
/// the next cycle, so every class is that cycle plus an incoming tail:
/// unilateral and sink-free, and the class digraph is again a directed
/// ring. Kernel members spaced like [`run_ring`].
pub fn cycle_ring(rng: &mut impl Rng, k: usize) -> GeneratedInstance {
    let gaps = ring_gaps(rng, k);
    let m: usize = gaps.iter().sum();
    let sizes: Vec<usize> = (0..m).map(|_| rng.gen_range(2..=4usize)).collect();
    let colors: Vec<String> = (0..m).map(|i| format!("c{i:02}")).collect();
    let color_refs: Vec<&str> = colors.iter().map(|s| s.as_str()).collect();
    let pattern = loops_only_pattern(&color_refs).unwrap();
    let mut verts = Vec::new();
    let mut arcs = Vec::new();
    // bridge leaves blob b at a random cycle position
    let exits: Vec<usize> = sizes.iter().map(|&s| rng.gen_range(0..s)).collect();
    for b in 0..m {
        let v = |j: usize| format!("b{b:02}n{j}");
        for j in 0..sizes[b] {
            verts.push(v(j));
            arcs.push((v(j), v((j + 1) % sizes[b]), colors[b].clone()));
        }
        let next = (b + 1) % m;
        arcs.push((v(exits[b]), format!("b{next:02}n0"), colors[next].clone()));
    }
    let d = ColoredDigraph::new(verts, arcs, pattern).unwrap();
    let (d, f, c) = finest(d);
    assert_eq!(f.class_count(), m);
    let mut class_kernel = BTreeSet::new();
    let mut at = 0;
    let l = gaps.iter().map(|g| g - 1).max().unwrap();
    for g in &gaps {
        let u = format!("b{at:02}n0");
        let w = format!("b{at:02}n1");
        class_kernel.insert(f.class_of_arc(&d, &u, &w).unwrap());
        at += g;
    }
    GeneratedInstance {
        digraph: d,
        partition: f,
        class_digraph: c,
        class_kernel,
        k,
        l,
    }
}

/// Layered monochromatic cycles with fresh-colored single-arc bridges
/// flowing towards the last layer. The terminal classes form an
/// independent absorbent set with empty proper out-neighborhood; the
/// returned l is the exact absorbency radius in the class digraph.
/// Optionally pads the digraph with isolated vertices.
pub fn blob_dag(rng: &mut impl Rng, with_isolated: bool) -> GeneratedInstance {
    let layers = rng.gen_range(2..=3usize);
    let width = rng.gen_range(1..=2usize);
    blob_dag_sized(rng, layers, width, with_isolated)
}

/// [`blob_dag`] with explicit shape: `layers` levels of up to `width`
/// cycles each.
pub fn blob_dag_sized(
    rng: &mut impl Rng,
    layers: usize,
    width: usize,
    with_isolated: bool,
) -> GeneratedInstance {
    let layers = layers.max(2);
    let width = width.max(1);
    let per_layer: Vec<usize> = (0..layers).map(|_| rng.gen_range(1..=width)).collect();
    let mut colors = Vec::new();
    let mut verts = Vec::new();
    let mut arcs: Vec<(String, String, String)> = Vec::new();
    let mut blob_names: Vec<Vec<String>> = Vec::new(); // first vertex per blob
    let mut blob_sizes: Vec<Vec<usize>> = Vec::new();
    for (layer, &count) in per_layer.iter().enumerate() {
        let mut names = Vec::new();
        let mut szs = Vec::new();
        for b in 0..count {
            let color = format!("c{layer}{b}");
            colors.push(color.clone());
            let size = rng.gen_range(2..=4usize);
            let v = |j: usize| format!("t{layer}{b}n{j}");
            for j in 0..size {
                verts.push(v(j));
                arcs.push((v(j), v((j + 1) % size), color.clone()));
            }
            names.push(v(0));
            szs.push(size);
        }
        blob_names.push(names);
        blob_sizes.push(szs);
    }
    let mut bridge = 0;
    for layer in 0..layers - 1 {
        for b in 0..per_layer[layer] {
            let targets = rng.gen_range(1..=per_layer[layer + 1]);
            let mut picks: Vec<usize> = (0..per_layer[layer + 1]).collect();
            picks.shuffle(rng);
            for &t in picks.iter().take(targets) {
                let color = format!("d{bridge}");
                bridge += 1;
                colors.push(color.clone());
                let from = format!("t{layer}{b}n{}", rng.gen_range(0..blob_sizes[layer][b]));
                let to = format!("t{}{}n0", layer + 1, t);
                arcs.push((from, to, color.clone()));
            }
        }
    }
    if with_isolated {
        for i in 0..rng.gen_range(1..=2usize) {
            verts.push(format!("zi{i}"));
        }
    }
    let color_refs: Vec<&str> = colors.iter().map(|s| s.as_str()).collect();
    let pattern = loops_only_pattern(&color_refs).unwrap();
    let d = ColoredDigraph::new(verts, arcs, pattern).unwrap();
    let (d, f, c) = finest(d);
    // terminal classes: no outgoing non-loop arcs
    let cg = c.digraph();
    let class_kernel: BTreeSet<String> = f
        .class_names()
        .into_iter()
        .filter(|n| cg.out_neighbors(n).unwrap().all(|g| g == n))
        .collect();
    let l = f
        .class_names()
        .into_iter()
        .filter(|n| !class_kernel.contains(n))
        .map(|n| {
            class_kernel
                .iter()
                .filter_map(|s| cg.shortest_walk_length(&n, s).unwrap())
                .min()
                .expect("every class reaches a terminal class")
        })
        .max()
        .unwrap_or(1)
        .max(1);
    let k = rng.gen_range(2..=5);
    GeneratedInstance {
        digraph: d,
        partition: f,
        class_digraph: c,
        class_kernel,
        k,
        l,
    }
}

/// Path of monochromatic cycles joined by two-way bridges through a fresh
/// middle vertex. Every class induces a strongly connected digraph and
/// keeps at least one vertex clear of bridges, so every class has an
/// obstruction-free vertex. The suggested kernel takes every second blob:
/// a (4,2)-kernel of the class digraph (usable for any k <= 4).
pub fn blob_path(rng: &mut impl Rng, blobs: usize) -> GeneratedInstance {
    let blobs = blobs.max(2);
    let mut colors: Vec<String> = (0..blobs).map(|i| format!("c{i:02}")).collect();
    colors.extend((0..blobs - 1).map(|i| format!("d{i:02}")));
    let color_refs: Vec<&str> = colors.iter().map(|s| s.as_str()).collect();
    let pattern = loops_only_pattern(&color_refs).unwrap();
    let mut verts = Vec::new();
    let mut arcs = Vec::new();
    let sizes: Vec<usize> = (0..blobs).map(|_| rng.gen_range(3..=4usize)).collect();
    for b in 0..blobs {
        let v = |j: usize| format!("b{b:02}n{j}");
        for j in 0..sizes[b] {
            verts.push(v(j));
            arcs.push((v(j), v((j + 1) % sizes[b]), format!("c{b:02}")));
        }
    }
    // bridges attach at fixed distinct positions: exit at n1, entry at n0,
    // leaving at least one untouched vertex per blob
    for b in 0..blobs - 1 {
        let mid = format!("m{b:02}");
        verts.push(mid.clone());
        let from = format!("b{b:02}n1");
        let to = format!("b{:02}n0", b + 1);
        let col = format!("d{b:02}");
        arcs.push((from.clone(), mid.clone(), col.clone()));
        arcs.push((mid.clone(), from, col.clone()));
        arcs.push((mid.clone(), to.clone(), col.clone()));
        arcs.push((to, mid, col));
    }
    let d = ColoredDigraph::new(verts, arcs, pattern).unwrap();
    let (d, f, c) = finest(d);
    let mut class_kernel = BTreeSet::new();
    for b in (0..blobs).step_by(2) {
        let u = format!("b{b:02}n0");
        let w = format!("b{b:02}n1");
        class_kernel.insert(f.class_of_arc(&d, &u, &w).unwrap());
    }
    GeneratedInstance {
        digraph: d,
        partition: f,
        class_digraph: c,
        class_kernel,
        k: 3,
        l: 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenFamily {
    Blobs,
    SymmetricClasses,
    Random,
}

impl GenFamily {
    pub fn parse(s: &str) -> Option<GenFamily> {
        Some(match s {
            "blobs" => GenFamily::Blobs,
            "symmetric-classes" => GenFamily::SymmetricClasses,
            "random" => GenFamily::Random,
            _ => return None,
        })
    }
}

/// CLI entry point: (family, seed, size) fully determines the document.
pub fn generate(family: GenFamily, seed: u64, size: usize) -> InstanceDocument {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let meta = |name: String| {
        Some(Metadata {
            name: Some(name),
            provenance: Some(format!("generated: seed {seed}")),
        })
    };
    match family {
        GenFamily::Random => {
            let d = random_colored(&mut rng, size.clamp(1, 30), 2 * size.max(1), 4, 0.5);
            InstanceDocument::from_colored_digraph(&d, None, meta(format!("random-{seed}")))
                .canonicalize()
        }
        GenFamily::Blobs => {
            let layers = if size <= 4 { 2 } else { 3 };
            let width = (size / layers).clamp(1, 4);
            let g = blob_dag_sized(&mut rng, layers, width, false);
            InstanceDocument::from_colored_digraph(
                &g.digraph,
                Some(&g.partition),
                meta(format!("blobs-{seed}")),
            )
            .canonicalize()
        }
        GenFamily::SymmetricClasses => {
            let g = blob_path(&mut rng, size.clamp(2, 12));
            InstanceDocument::from_colored_digraph(
                &g.digraph,
                Some(&g.partition),
                meta(format!("symmetric-classes-{seed}")),
            )
            .canonicalize()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hclass::walk_preservative_violation;

    #[test]
    fn generators_are_deterministic() {
        let a = generate(GenFamily::Random, 7, 8);
        let b = generate(GenFamily::Random, 7, 8);
        assert_eq!(a, b);
        let c = generate(GenFamily::Random, 8, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn targeted_families_have_valid_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 2..=4 {
            let g = run_ring(&mut rng, k);
            assert!(
                walk_preservative_violation(&g.digraph, &g.partition, &g.class_digraph).is_none()
            );
            assert!(g.class_digraph.digraph().sinks().is_empty());
        }
        for k in 3..=4 {
            let g = cycle_ring(&mut rng, k);
            assert!(
                walk_preservative_violation(&g.digraph, &g.partition, &g.class_digraph).is_none()
            );
            assert!(g.class_digraph.digraph().sinks().is_empty());
        }
        let g = blob_dag(&mut rng, true);
        assert!(!g.class_kernel.is_empty());
        assert!(!g.digraph.digraph().isolated_vertices().is_empty());
        let g = blob_path(&mut rng, 4);
        assert!(g.class_digraph.digraph().is_symmetric());
    }

    #[test]
    fn equivalence_family_always_partitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let d = random_equivalence(&mut rng, 8, false);
            assert!(HClassPartition::finest(&d).partition().is_some());
        }
        for _ in 0..20 {
            let d = random_equivalence(&mut rng, 6, true);
            assert!(d.digraph().is_strongly_connected().unwrap());
            assert!(HClassPartition::finest(&d).partition().is_some());
        }
    }

    #[test]
    fn h_digraph_family_is_obstruction_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let d = h_digraph(&mut rng, 6, false);
            let all: BTreeSet<_> = d
                .digraph()
                .arcs()
                .map(|(u, v)| (u.to_string(), v.to_string()))
                .collect();
            assert!(d.is_h_digraph(&all).unwrap());
        }
    }
}
