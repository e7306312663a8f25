//! Kernel machinery on plain digraphs: kernels by paths, brute-force
//! (k,l)-kernels, maximal k-independent sets of symmetric digraphs, and
//! the swap procedure that relocates a path kernel into the out-classes
//! of an independent class set.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::coloring::ColoredDigraph;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::hclass::{ClassDigraph, HClassPartition};

pub type VertexSet = BTreeSet<String>;

/// Default vertex bound for subset enumeration.
pub const DEFAULT_BRUTE_BOUND: usize = 15;

/// One vertex per terminal strong component, smallest id first. The result
/// is independent by paths and absorbent by paths.
pub fn kernel_by_paths(g: &Digraph) -> Result<VertexSet> {
    if g.is_empty() {
        return Err(Error::EmptyDigraph);
    }
    // components are named after their smallest member, so the sinks of the
    // condensation are exactly the smallest-id representatives we want
    Ok(g.strong_components().condensation.sinks())
}

/// Why a candidate set is not a kernel by paths.
#[derive(Debug, Clone, Serialize)]
pub enum PathKernelViolation {
    /// A path joins two distinct members.
    Independence { from: String, to: String },
    /// An outside vertex reaches no member.
    Absorbency { vertex: String },
}

/// Check path-independence and path-absorbency; `None` means both hold.
pub fn verify_kernel_by_paths(g: &Digraph, s: &VertexSet) -> Result<Option<PathKernelViolation>> {
    for v in s {
        if !g.has_vertex(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    for u in s {
        let reach = g.reachable_set(&BTreeSet::from([u.clone()]))?;
        if let Some(v) = s.iter().find(|v| *v != u && reach.contains(*v)) {
            return Ok(Some(PathKernelViolation::Independence {
                from: u.clone(),
                to: v.clone(),
            }));
        }
    }
    // backward reachability from s
    let mut absorbed: BTreeSet<&str> = s.iter().map(|v| v.as_str()).collect();
    let mut queue: VecDeque<&str> = absorbed.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for u in g.in_neighbors(v)? {
            if absorbed.insert(u) {
                queue.push_back(u);
            }
        }
    }
    match g.vertices().find(|v| !absorbed.contains(*v)) {
        Some(x) => Ok(Some(PathKernelViolation::Absorbency {
            vertex: x.to_string(),
        })),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    First,
    All,
}

/// Enumerate (k,l)-kernels of a plain digraph by exhaustive subset search,
/// in size-then-lexicographic order. An empty result means no kernel
/// exists. Walk minima equal path minima, so independence is checked with
/// shortest path distances.
pub fn brute_force_kl_kernels(
    g: &Digraph,
    k: usize,
    l: usize,
    mode: SearchMode,
    bound: usize,
) -> Result<Vec<VertexSet>> {
    if k < 2 || l < 1 {
        return Err(Error::Precondition(format!(
            "(k,l)-kernels require k >= 2 and l >= 1, got ({k},{l})"
        )));
    }
    let n = g.vertex_count();
    if n > bound {
        return Err(Error::SizeBound { n, bound });
    }
    let ids: Vec<&str> = g.vertices().collect();
    let dist = all_pairs_dist(g);
    let mut found = Vec::new();
    let mut pick = Vec::new();
    for size in 0..=n {
        pick.clear();
        if combos(&ids, &dist, k, l, size, 0, &mut pick, &mut found, mode)
            && mode == SearchMode::First
        {
            break;
        }
    }
    Ok(found)
}

fn all_pairs_dist(g: &Digraph) -> Vec<Vec<Option<usize>>> {
    g.vertices()
        .map(|v| {
            let mut dv = Vec::with_capacity(g.vertex_count());
            for w in g.vertices() {
                dv.push(g.shortest_walk_length(v, w).unwrap());
            }
            dv
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn combos(
    ids: &[&str],
    dist: &[Vec<Option<usize>>],
    k: usize,
    l: usize,
    size: usize,
    start: usize,
    pick: &mut Vec<usize>,
    found: &mut Vec<VertexSet>,
    mode: SearchMode,
) -> bool {
    if pick.len() == size {
        if is_kl_kernel(dist, k, l, pick) {
            found.push(pick.iter().map(|&i| ids[i].to_string()).collect());
            return true;
        }
        return false;
    }
    for i in start..=(ids.len() - (size - pick.len())) {
        // prune: the new member must keep pairwise distances >= k
        if pick
            .iter()
            .any(|&j| dist[j][i].is_some_and(|d| d < k) || dist[i][j].is_some_and(|d| d < k))
        {
            continue;
        }
        pick.push(i);
        let hit = combos(ids, dist, k, l, size, i + 1, pick, found, mode);
        pick.pop();
        if hit && mode == SearchMode::First {
            return true;
        }
    }
    false
}

fn is_kl_kernel(dist: &[Vec<Option<usize>>], _k: usize, l: usize, members: &[usize]) -> bool {
    // pairwise independence is enforced during enumeration; check absorbency
    let n = dist.len();
    (0..n).all(|x| {
        members.contains(&x) || members.iter().any(|&s| dist[x][s].is_some_and(|d| d <= l))
    })
}

/// Greedily grow a maximal k-independent set of a symmetric digraph in
/// vertex-id order. By the symmetric-digraph theorem the result is a
/// k-kernel, hence a (k,l)-kernel for every l >= k-1.
pub fn symmetric_k_kernel(g: &Digraph, k: usize) -> Result<VertexSet> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "k-kernels require k >= 2, got {k}"
        )));
    }
    if let Some((u, v)) = g
        .arcs()
        .find(|(u, v)| !g.has_arc(v, u))
        .map(|(u, v)| (u.to_string(), v.to_string()))
    {
        return Err(Error::NotSymmetric(u, v));
    }
    let mut kernel = VertexSet::new();
    for v in g.vertices() {
        let ok = kernel.iter().all(|s| {
            let d = g.shortest_walk_length(v, s).unwrap();
            d.is_none_or(|d| d >= k)
        });
        if ok {
            kernel.insert(v.to_string());
        }
    }
    Ok(kernel)
}

/// Kernel of a transitive digraph: one vertex per terminal strong
/// component (smallest id). Transitivity is validated on distinct
/// endpoints: (u,v),(v,w) with u != w must imply (u,w).
pub fn transitive_kernel(g: &Digraph) -> Result<VertexSet> {
    if g.is_empty() {
        return Err(Error::EmptyDigraph);
    }
    for (u, v) in g.arcs() {
        for w in g.out_neighbors(v)? {
            if u != w && !g.has_arc(u, w) {
                return Err(Error::NotTransitive(
                    u.to_string(),
                    v.to_string(),
                    w.to_string(),
                ));
            }
        }
    }
    Ok(g.strong_components().condensation.sinks())
}

/// Result of the relocation loop: a kernel by paths of the subdigraph
/// induced by the class set, contained in the subdigraph induced by the
/// proper out-neighborhood, plus the number of swaps performed.
#[derive(Debug, Clone)]
pub struct ConstrainedKernel {
    pub kernel: VertexSet,
    pub swaps: usize,
}

/// Find a kernel by paths of `D1 = D<union of S>` contained in
/// `V(D2) = V(D<union of N+(S)>)` by repeated single-vertex swaps.
///
/// Requires: the partition is walk-preservative, the class digraph has no
/// sinks, and `s` is a nonempty independent set of classes. Each swap
/// strictly shrinks the part of the kernel outside V(D2), so the loop
/// terminates within |V(D1)| iterations.
pub fn constrained_kernel_by_paths(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
) -> Result<ConstrainedKernel> {
    if s.is_empty() {
        return Err(Error::Precondition("class set must be nonempty".into()));
    }
    if let Some(v) = crate::hclass::walk_preservative_violation(d, f, c) {
        return Err(Error::Precondition(format!(
            "partition is not walk-preservative: vertex {} of {} cannot reach {}",
            v.vertex, v.from, v.to
        )));
    }
    if let Some(f0) = c.digraph().sinks().iter().next() {
        return Err(Error::Precondition(format!(
            "class digraph has a sink ({f0})"
        )));
    }
    if !c.is_independent(s)? {
        return Err(Error::Precondition(
            "class set is not independent in the class digraph".into(),
        ));
    }
    let d1 = f.union_subdigraph(d, s)?;
    let out = c.proper_out_neighborhood(s)?;
    let d2_vertices: VertexSet = f
        .union_subdigraph(d, &out)?
        .vertices()
        .map(|v| v.to_string())
        .collect();

    let mut kernel = kernel_by_paths(&d1)?;
    let limit = d1.vertex_count();
    let mut swaps = 0;
    loop {
        let x0 = match kernel.iter().find(|x| !d2_vertices.contains(*x)) {
            Some(x) => x.clone(),
            None => break,
        };
        assert!(swaps < limit, "swap loop failed to terminate");
        let z = swap_target(d, f, c, s, &x0, &d2_vertices)?;
        kernel.remove(&x0);
        kernel.insert(z);
        swaps += 1;
    }
    Ok(ConstrainedKernel { kernel, swaps })
}

/// Pick the replacement vertex for `x0`: take the smallest class F of `s`
/// whose subdigraph contains x0, the smallest class arc (F,G) with G != F,
/// and the smallest junction vertex of F and G at minimum distance from x0
/// inside the subdigraph of F.
fn swap_target(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    x0: &str,
    d2_vertices: &VertexSet,
) -> Result<String> {
    for fname in s {
        let sub = f.class_subdigraph(d, fname)?;
        if !sub.has_vertex(x0) {
            continue;
        }
        for gname in c.digraph().out_neighbors(fname)? {
            if gname == fname {
                continue;
            }
            let gsub = f.class_subdigraph(d, gname)?;
            // BFS inside D<F> from x0, nearest-then-smallest junction
            let mut dist: BTreeMap<String, usize> = BTreeMap::from([(x0.to_string(), 0)]);
            let mut queue = VecDeque::from([x0.to_string()]);
            let mut best: Option<(usize, String)> = None;
            while let Some(v) = queue.pop_front() {
                let dv = dist[&v];
                if let Some((bd, _)) = best {
                    if dv >= bd {
                        continue;
                    }
                }
                for w in sub.out_neighbors(&v)? {
                    if !dist.contains_key(w) {
                        dist.insert(w.to_string(), dv + 1);
                        if gsub.has_vertex(w) {
                            let cand = (dv + 1, w.to_string());
                            if best.as_ref().is_none_or(|b| cand < *b) {
                                best = Some(cand);
                            }
                        }
                        queue.push_back(w.to_string());
                    }
                }
            }
            if let Some((_, z)) = best {
                debug_assert!(d2_vertices.contains(&z));
                return Ok(z);
            }
        }
    }
    Err(Error::Precondition(format!(
        "no relocation target found for {x0}; hypotheses violated"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dg(vs: &[&str], arcs: &[(&str, &str)]) -> Digraph {
        Digraph::from_refs(vs, arcs, false).unwrap()
    }

    fn set(items: &[&str]) -> VertexSet {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn kernel_by_paths_basics() {
        assert_eq!(
            kernel_by_paths(&dg(&["a", "b", "c"], &[("a", "b"), ("b", "c")])).unwrap(),
            set(&["c"])
        );
        let two_cycles = dg(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")],
        );
        assert_eq!(kernel_by_paths(&two_cycles).unwrap(), set(&["a", "c"]));
        let strong = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(kernel_by_paths(&strong).unwrap().len(), 1);
        assert!(kernel_by_paths(&dg(&[], &[])).is_err());
    }

    #[test]
    fn verify_kernel_by_paths_reports() {
        let g = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        let k = kernel_by_paths(&g).unwrap();
        assert!(verify_kernel_by_paths(&g, &k).unwrap().is_none());
        assert!(matches!(
            verify_kernel_by_paths(&g, &set(&["a", "b"])).unwrap(),
            Some(PathKernelViolation::Independence { .. })
        ));
        assert!(matches!(
            verify_kernel_by_paths(&g, &set(&[])).unwrap(),
            Some(PathKernelViolation::Absorbency { .. })
        ));
    }

    #[test]
    fn brute_force_on_cycles() {
        // directed 4-cycle, k=2, l=1: the two antipodal pairs
        let c4 = dg(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        );
        let found = brute_force_kl_kernels(&c4, 2, 1, SearchMode::All, 15).unwrap();
        assert_eq!(found, vec![set(&["a", "c"]), set(&["b", "d"])]);

        // directed 3-cycle, k=2, l=1: none
        let c3 = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert!(brute_force_kl_kernels(&c3, 2, 1, SearchMode::All, 15)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn brute_force_arcless_takes_everything() {
        let g = dg(&["a", "b", "c"], &[]);
        let found = brute_force_kl_kernels(&g, 3, 2, SearchMode::All, 15).unwrap();
        assert_eq!(found, vec![set(&["a", "b", "c"])]);
        let first = brute_force_kl_kernels(&g, 3, 2, SearchMode::First, 15).unwrap();
        assert_eq!(first, vec![set(&["a", "b", "c"])]);
    }

    #[test]
    fn brute_force_respects_bound() {
        let g = dg(&["a", "b"], &[("a", "b")]);
        assert!(matches!(
            brute_force_kl_kernels(&g, 2, 1, SearchMode::All, 1),
            Err(Error::SizeBound { .. })
        ));
    }

    #[test]
    fn symmetric_greedy_kernels() {
        let path = dg(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")],
        );
        assert_eq!(symmetric_k_kernel(&path, 2).unwrap(), set(&["a", "c"]));
        assert_eq!(symmetric_k_kernel(&path, 3).unwrap(), set(&["a"]));
        assert_eq!(
            symmetric_k_kernel(&dg(&["v"], &[]), 2).unwrap(),
            set(&["v"])
        );
        assert!(matches!(
            symmetric_k_kernel(&dg(&["a", "b"], &[("a", "b")]), 2),
            Err(Error::NotSymmetric(_, _))
        ));
    }

    #[test]
    fn transitive_kernels() {
        let tt = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(transitive_kernel(&tt).unwrap(), set(&["c"]));
        let complete = dg(
            &["a", "b", "c"],
            &[
                ("a", "b"),
                ("b", "a"),
                ("a", "c"),
                ("c", "a"),
                ("b", "c"),
                ("c", "b"),
            ],
        );
        assert_eq!(transitive_kernel(&complete).unwrap().len(), 1);
        let two_tts = dg(&["a", "b", "x", "y"], &[("a", "b"), ("x", "y")]);
        assert_eq!(transitive_kernel(&two_tts).unwrap(), set(&["b", "y"]));
        assert!(matches!(
            transitive_kernel(&dg(&["a", "b", "c"], &[("a", "b"), ("b", "c")])),
            Err(Error::NotTransitive(_, _, _))
        ));
    }
}
