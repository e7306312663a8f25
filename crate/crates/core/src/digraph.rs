//! Plain directed graphs and the classical algorithms the rest of the
//! crate is built on: strong components, condensation, reachability,
//! unilaterality, girth-like cycle bounds.
//!
//! Vertex identifiers are opaque strings supplied by the caller. The
//! dense internal numbering is an implementation detail and never leaks
//! through the public interface.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// A finite digraph without parallel arcs. Loops are permitted only when
/// the digraph was constructed with `loops_allowed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    ids: Vec<String>,
    pos: BTreeMap<String, usize>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    arc_offset: Vec<usize>,
    narcs: usize,
    loops_allowed: bool,
}

impl Digraph {
    pub fn new(
        vertices: Vec<String>,
        arcs: Vec<(String, String)>,
        loops_allowed: bool,
    ) -> Result<Self> {
        let mut ids: Vec<String> = vertices;
        ids.sort();
        ids.dedup();
        let pos: BTreeMap<String, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let n = ids.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for (u, v) in &arcs {
            let ui = *pos.get(u).ok_or_else(|| Error::UnknownVertex(u.clone()))?;
            let vi = *pos.get(v).ok_or_else(|| Error::UnknownVertex(v.clone()))?;
            if ui == vi && !loops_allowed {
                return Err(Error::LoopNotAllowed(u.clone()));
            }
            if out[ui].contains(&vi) {
                return Err(Error::ParallelArc(u.clone(), v.clone()));
            }
            out[ui].push(vi);
            inn[vi].push(ui);
        }
        for adj in out.iter_mut().chain(inn.iter_mut()) {
            adj.sort_unstable();
        }
        let mut arc_offset = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for adj in &out {
            arc_offset.push(acc);
            acc += adj.len();
        }
        arc_offset.push(acc);
        Ok(Digraph {
            ids,
            pos,
            out,
            inn,
            arc_offset,
            narcs: acc,
            loops_allowed,
        })
    }

    /// Convenience constructor for literals in tests and fixtures.
    pub fn from_refs(
        vertices: &[&str],
        arcs: &[(&str, &str)],
        loops_allowed: bool,
    ) -> Result<Self> {
        Digraph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            arcs.iter()
                .map(|(u, v)| (u.to_string(), v.to_string()))
                .collect(),
            loops_allowed,
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn arc_count(&self) -> usize {
        self.narcs
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn loops_allowed(&self) -> bool {
        self.loops_allowed
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.pos.contains_key(v)
    }

    pub fn has_arc(&self, u: &str, v: &str) -> bool {
        match (self.pos.get(u), self.pos.get(v)) {
            (Some(&ui), Some(&vi)) => self.out[ui].binary_search(&vi).is_ok(),
            _ => false,
        }
    }

    /// Vertex ids in sorted order.
    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(|s| s.as_str())
    }

    /// Arcs in canonical (lexicographic) order.
    pub fn arcs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.out.iter().enumerate().flat_map(move |(u, adj)| {
            adj.iter()
                .map(move |&v| (self.ids[u].as_str(), self.ids[v].as_str()))
        })
    }

    pub fn out_neighbors(&self, v: &str) -> Result<impl Iterator<Item = &str>> {
        let vi = self.idx(v)?;
        Ok(self.out[vi].iter().map(move |&w| self.ids[w].as_str()))
    }

    pub fn in_neighbors(&self, v: &str) -> Result<impl Iterator<Item = &str>> {
        let vi = self.idx(v)?;
        Ok(self.inn[vi].iter().map(move |&w| self.ids[w].as_str()))
    }

    pub fn out_degree(&self, v: &str) -> Result<usize> {
        Ok(self.out[self.idx(v)?].len())
    }

    pub fn in_degree(&self, v: &str) -> Result<usize> {
        Ok(self.inn[self.idx(v)?].len())
    }

    /// Vertices with no incident arcs at all.
    pub fn isolated_vertices(&self) -> BTreeSet<String> {
        (0..self.n())
            .filter(|&v| self.out[v].is_empty() && self.inn[v].is_empty())
            .map(|v| self.ids[v].clone())
            .collect()
    }

    // ----- internal dense-index view (crate private) -----

    pub(crate) fn n(&self) -> usize {
        self.ids.len()
    }

    pub(crate) fn idx(&self, v: &str) -> Result<usize> {
        self.pos
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub(crate) fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub(crate) fn out_idx(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub(crate) fn in_idx(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// Canonical index of arc (u,v); arcs are numbered in lexicographic order.
    pub(crate) fn arc_index(&self, u: usize, v: usize) -> Option<usize> {
        self.out[u]
            .binary_search(&v)
            .ok()
            .map(|r| self.arc_offset[u] + r)
    }

    /// Endpoints of the arc with the given canonical index.
    pub(crate) fn arc_endpoints(&self, a: usize) -> (usize, usize) {
        let u = match self.arc_offset.binary_search(&a) {
            Ok(mut i) => {
                // skip vertices with empty out-lists sharing the offset
                while self.out[i].is_empty() {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        };
        (u, self.out[u][a - self.arc_offset[u]])
    }

    /// BFS distances (arc counts) from one vertex; `None` marks unreachable.
    pub(crate) fn dist_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &w in &self.out[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    // ----- algorithms -----

    /// Strong components and the condensation. Components are ordered by
    /// their smallest member and each condensation vertex is named after
    /// that smallest member.
    pub fn strong_components(&self) -> StrongComponents {
        let comp_of = self.tarjan();
        let ncomp = comp_of.iter().copied().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); ncomp];
        for v in 0..self.n() {
            members[comp_of[v]].push(v);
        }
        // vertices are visited in id order, so members are already sorted;
        // order components by smallest member id
        let mut order: Vec<usize> = (0..ncomp).collect();
        order.sort_by(|&a, &b| self.ids[members[a][0]].cmp(&self.ids[members[b][0]]));
        let mut rank = vec![0; ncomp];
        for (r, &c) in order.iter().enumerate() {
            rank[c] = r;
        }

        let components: Vec<BTreeSet<String>> = order
            .iter()
            .map(|&c| members[c].iter().map(|&v| self.ids[v].clone()).collect())
            .collect();
        let names: Vec<String> = order
            .iter()
            .map(|&c| self.ids[members[c][0]].clone())
            .collect();
        let mut cond_arcs = BTreeSet::new();
        for u in 0..self.n() {
            for &v in &self.out[u] {
                let (cu, cv) = (rank[comp_of[u]], rank[comp_of[v]]);
                if cu != cv {
                    cond_arcs.insert((names[cu].clone(), names[cv].clone()));
                }
            }
        }
        let condensation = Digraph::new(names.clone(), cond_arcs.into_iter().collect(), false)
            .expect("condensation is loop-free by construction");
        let component_of = (0..self.n())
            .map(|v| (self.ids[v].clone(), names[rank[comp_of[v]]].clone()))
            .collect();
        StrongComponents {
            components,
            condensation,
            component_of,
        }
    }

    /// Iterative Tarjan; returns the component index of every vertex.
    fn tarjan(&self) -> Vec<usize> {
        let n = self.n();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut comp_of = vec![usize::MAX; n];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut ncomp = 0;
        // call frames: (vertex, next child position)
        let mut frames: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            frames.push((root, 0));
            while let Some(&mut (v, ref mut ci)) = frames.last_mut() {
                if *ci == 0 {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if let Some(&w) = self.out[v].get(*ci) {
                    *ci += 1;
                    if index[w] == usize::MAX {
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    frames.pop();
                    if let Some(&(p, _)) = frames.last() {
                        low[p] = low[p].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp_of[w] = ncomp;
                            if w == v {
                                break;
                            }
                        }
                        ncomp += 1;
                    }
                }
            }
        }
        comp_of
    }

    /// Whether every ordered pair of vertices is joined by paths both ways.
    /// Undefined (an error) on the empty digraph; a single vertex counts as
    /// strongly connected.
    pub fn is_strongly_connected(&self) -> Result<bool> {
        if self.is_empty() {
            return Err(Error::EmptyDigraph);
        }
        Ok(self.strong_components().components.len() == 1)
    }

    /// Whether every pair of vertices is joined by a path in at least one
    /// direction. Checked on the condensation: a DAG has a Hamiltonian path
    /// exactly when consecutive vertices of a topological order are joined.
    pub fn is_unilateral(&self) -> bool {
        let cond = self.strong_components().condensation;
        let order = cond.topological_order().expect("condensation is acyclic");
        order.windows(2).all(|w| cond.has_arc(&w[0], &w[1]))
    }

    /// Kahn topological order with smallest-id tie-break; `None` if cyclic.
    pub fn topological_order(&self) -> Option<Vec<String>> {
        let n = self.n();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.inn[v].len()).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(self.ids[v].clone());
            for &w in &self.out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Vertices whose out-arcs are contained in their own loop. With loops
    /// disallowed this is the usual "no out-arc" sink.
    pub fn sinks(&self) -> BTreeSet<String> {
        (0..self.n())
            .filter(|&v| self.out[v].iter().all(|&w| w == v))
            .map(|v| self.ids[v].clone())
            .collect()
    }

    /// Everything reachable from `sources` by a path of length >= 0.
    pub fn reachable_set(&self, sources: &BTreeSet<String>) -> Result<BTreeSet<String>> {
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::new();
        for s in sources {
            let si = self.idx(s)?;
            if !seen[si] {
                seen[si] = true;
                queue.push_back(si);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.out[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        Ok((0..self.n())
            .filter(|&v| seen[v])
            .map(|v| self.ids[v].clone())
            .collect())
    }

    /// Length of the shortest cycle that is not a loop; `None` when no such
    /// cycle exists. Computed as min over arcs (u,v), u != v, of
    /// dist(v,u) + 1.
    pub fn min_nonloop_cycle_length(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.n() {
            if self.inn[v].iter().all(|&u| u == v) {
                continue;
            }
            let dist = self.dist_from(v);
            for &u in &self.inn[v] {
                if u == v {
                    continue;
                }
                if let Some(d) = dist[u] {
                    let cyc = d + 1;
                    if best.is_none_or(|b| cyc < b) {
                        best = Some(cyc);
                    }
                }
            }
        }
        best
    }

    /// Whether (u,v) in arcs implies (v,u) in arcs.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|u| {
            self.out[u]
                .iter()
                .all(|&v| self.out[v].binary_search(&u).is_ok())
        })
    }

    /// Shortest walk (= shortest path) length from u to v; 0 when u = v,
    /// `None` when unreachable.
    pub fn shortest_walk_length(&self, u: &str, v: &str) -> Result<Option<usize>> {
        let ui = self.idx(u)?;
        let vi = self.idx(v)?;
        Ok(self.dist_from(ui)[vi])
    }

    /// The subdigraph induced by a vertex set (arcs with both endpoints kept).
    pub fn induced_subdigraph(&self, keep: &BTreeSet<String>) -> Result<Digraph> {
        for v in keep {
            self.idx(v)?;
        }
        let arcs = self
            .arcs()
            .filter(|(u, v)| keep.contains(*u) && keep.contains(*v))
            .map(|(u, v)| (u.to_string(), v.to_string()))
            .collect();
        Digraph::new(keep.iter().cloned().collect(), arcs, self.loops_allowed)
    }
}

/// Result of [`Digraph::strong_components`].
#[derive(Debug, Clone)]
pub struct StrongComponents {
    /// Components ordered by smallest member id.
    pub components: Vec<BTreeSet<String>>,
    /// Acyclic digraph on component representatives (smallest member id).
    pub condensation: Digraph,
    /// Vertex id -> representative id of its component.
    pub component_of: BTreeMap<String, String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dg(vs: &[&str], arcs: &[(&str, &str)]) -> Digraph {
        Digraph::from_refs(vs, arcs, false).unwrap()
    }

    #[test]
    fn rejects_parallel_arcs_and_loops() {
        assert!(matches!(
            Digraph::from_refs(&["a", "b"], &[("a", "b"), ("a", "b")], false),
            Err(Error::ParallelArc(_, _))
        ));
        assert!(matches!(
            Digraph::from_refs(&["a"], &[("a", "a")], false),
            Err(Error::LoopNotAllowed(_))
        ));
        assert!(Digraph::from_refs(&["a"], &[("a", "a")], true).is_ok());
    }

    #[test]
    fn strong_components_identity_cases() {
        let g = dg(&["a"], &[]);
        let sc = g.strong_components();
        assert_eq!(sc.components.len(), 1);
        assert_eq!(sc.condensation.vertex_count(), 1);

        let cyc = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(cyc.strong_components().components.len(), 1);

        let path = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let sc = path.strong_components();
        assert_eq!(sc.components.len(), 3);
        let cond = &sc.condensation;
        assert_eq!(cond.arc_count(), 2);
        assert!(cond.has_arc("a", "b") && cond.has_arc("b", "c"));
    }

    #[test]
    fn strongly_connected_and_empty() {
        let cyc = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert!(cyc.is_strongly_connected().unwrap());
        let path = dg(&["a", "b"], &[("a", "b")]);
        assert!(!path.is_strongly_connected().unwrap());
        let two = dg(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")],
        );
        assert!(!two.is_strongly_connected().unwrap());
        let empty = dg(&[], &[]);
        assert_eq!(empty.is_strongly_connected(), Err(Error::EmptyDigraph));
    }

    #[test]
    fn unilateral_cases() {
        assert!(dg(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).is_unilateral());
        assert!(!dg(&["a", "b"], &[]).is_unilateral());
        assert!(!dg(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).is_unilateral());
        assert!(dg(&["a"], &[]).is_unilateral());
    }

    #[test]
    fn sinks_with_and_without_loops() {
        assert_eq!(
            dg(&["a", "b"], &[("a", "b")]).sinks(),
            BTreeSet::from(["b".to_string()])
        );
        let looped = Digraph::from_refs(&["v", "w"], &[("v", "v"), ("v", "w")], true).unwrap();
        assert_eq!(looped.sinks(), BTreeSet::from(["w".to_string()]));
        let only_loop = Digraph::from_refs(&["v"], &[("v", "v")], true).unwrap();
        assert_eq!(only_loop.sinks(), BTreeSet::from(["v".to_string()]));
        let cyc = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert!(cyc.sinks().is_empty());
    }

    #[test]
    fn reachability() {
        let path = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let from_a = path
            .reachable_set(&BTreeSet::from(["a".to_string()]))
            .unwrap();
        assert_eq!(from_a.len(), 3);
        let from_c = path
            .reachable_set(&BTreeSet::from(["c".to_string()]))
            .unwrap();
        assert_eq!(from_c, BTreeSet::from(["c".to_string()]));
        assert!(path
            .reachable_set(&BTreeSet::from(["zz".to_string()]))
            .is_err());
    }

    #[test]
    fn min_nonloop_cycle() {
        let dag = dg(&["a", "b", "c"], &[("a", "b"), ("a", "c"), ("b", "c")]);
        assert_eq!(dag.min_nonloop_cycle_length(), None);
        let digon = dg(&["u", "v"], &[("u", "v"), ("v", "u")]);
        assert_eq!(digon.min_nonloop_cycle_length(), Some(2));
        let tri_loop = Digraph::from_refs(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "c"), ("c", "a"), ("a", "a")],
            true,
        )
        .unwrap();
        assert_eq!(tri_loop.min_nonloop_cycle_length(), Some(3));
    }

    #[test]
    fn symmetry() {
        assert!(dg(&["u", "v"], &[("u", "v"), ("v", "u")]).is_symmetric());
        assert!(!dg(&["u", "v"], &[("u", "v")]).is_symmetric());
        assert!(dg(&["u", "v"], &[]).is_symmetric());
    }

    #[test]
    fn walk_lengths() {
        let path = dg(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert_eq!(path.shortest_walk_length("a", "c").unwrap(), Some(2));
        assert_eq!(path.shortest_walk_length("c", "a").unwrap(), None);
        assert_eq!(path.shortest_walk_length("a", "a").unwrap(), Some(0));
        assert!(path.shortest_walk_length("a", "zz").is_err());
    }

    #[test]
    fn arc_indexing_roundtrip() {
        let g = dg(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "c"), ("d", "a")],
        );
        for ai in 0..g.arc_count() {
            let (u, v) = g.arc_endpoints(ai);
            assert_eq!(g.arc_index(u, v), Some(ai));
        }
        let listed: Vec<_> = g.arcs().collect();
        assert_eq!(listed, vec![("a", "b"), ("a", "c"), ("b", "c"), ("d", "a")]);
    }
}
