//! Arc-colored digraphs. The colors of a digraph `D` are the vertices of
//! a pattern digraph `H` (loops allowed); a pair of consecutive arcs of
//! `D` is *compatible* when their color pair is an arc of `H`, and a walk
//! picks up an *obstruction* at every interior vertex where the incoming
//! and outgoing colors are incompatible.

use std::collections::BTreeSet;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// The pattern digraph. Its vertices are the colors; it may have loops
/// and it may have no arcs at all (in which case every color change and
/// even every color repetition obstructs, and walk "cost" degenerates to
/// ordinary length).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternDigraph {
    underlying: Digraph,
}

impl PatternDigraph {
    pub fn new(colors: Vec<String>, arcs: Vec<(String, String)>) -> Result<Self> {
        if colors.is_empty() {
            return Err(Error::EmptyColorSet);
        }
        Ok(PatternDigraph {
            underlying: Digraph::new(colors, arcs, true)?,
        })
    }

    pub fn from_refs(colors: &[&str], arcs: &[(&str, &str)]) -> Result<Self> {
        PatternDigraph::new(
            colors.iter().map(|s| s.to_string()).collect(),
            arcs.iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
    }

    pub fn colors(&self) -> impl Iterator<Item = &str> {
        self.underlying.vertices()
    }

    pub fn color_count(&self) -> usize {
        self.underlying.vertex_count()
    }

    pub fn has_color(&self, c: &str) -> bool {
        self.underlying.has_vertex(c)
    }

    /// Whether the ordered color pair (a, b) is an arc of the pattern.
    pub fn has_arc(&self, a: &str, b: &str) -> bool {
        self.underlying.has_arc(a, b)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.underlying.arcs()
    }

    pub(crate) fn digraph(&self) -> &Digraph {
        &self.underlying
    }
}

/// Pattern with exactly all loops: walks without obstructions are the
/// monochromatic walks.
pub fn loops_only_pattern(colors: &[&str]) -> Result<PatternDigraph> {
    PatternDigraph::new(
        colors.iter().map(|s| s.to_string()).collect(),
        colors
            .iter()
            .map(|c| (c.to_string(), c.to_string()))
            .collect(),
    )
}

/// Complete loopless pattern: walks without obstructions are the properly
/// colored (alternating) walks.
pub fn alternation_pattern(colors: &[&str]) -> Result<PatternDigraph> {
    let mut arcs = Vec::new();
    for a in colors {
        for b in colors {
            if a != b {
                arcs.push((a.to_string(), b.to_string()));
            }
        }
    }
    PatternDigraph::new(colors.iter().map(|s| s.to_string()).collect(), arcs)
}

/// A loopless digraph together with a total arc coloring into the pattern's
/// colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredDigraph {
    underlying: Digraph,
    pattern: PatternDigraph,
    /// color index (into sorted pattern colors) per canonical arc index
    arc_color: Vec<usize>,
}

impl ColoredDigraph {
    pub fn new(
        vertices: Vec<String>,
        arcs: Vec<(String, String, String)>,
        pattern: PatternDigraph,
    ) -> Result<Self> {
        let plain: Vec<(String, String)> = arcs
            .iter()
            .map(|(u, v, _)| (u.clone(), v.clone()))
            .collect();
        let underlying = Digraph::new(vertices, plain, false)?;
        let mut arc_color = vec![usize::MAX; underlying.arc_count()];
        for (u, v, c) in &arcs {
            let ci = pattern
                .digraph()
                .idx(c)
                .map_err(|_| Error::UnknownColor(c.clone()))?;
            let ui = underlying.idx(u)?;
            let vi = underlying.idx(v)?;
            let ai = underlying
                .arc_index(ui, vi)
                .expect("arc present by construction");
            arc_color[ai] = ci;
        }
        Ok(ColoredDigraph {
            underlying,
            pattern,
            arc_color,
        })
    }

    pub fn from_refs(
        vertices: &[&str],
        arcs: &[(&str, &str, &str)],
        pattern: PatternDigraph,
    ) -> Result<Self> {
        ColoredDigraph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            arcs.iter()
                .map(|(u, v, c)| (u.to_string(), v.to_string(), c.to_string()))
                .collect(),
            pattern,
        )
    }

    pub fn digraph(&self) -> &Digraph {
        &self.underlying
    }

    pub fn pattern(&self) -> &PatternDigraph {
        &self.pattern
    }

    pub fn color_of(&self, u: &str, v: &str) -> Result<&str> {
        let ui = self.underlying.idx(u)?;
        let vi = self.underlying.idx(v)?;
        let ai = self
            .underlying
            .arc_index(ui, vi)
            .ok_or_else(|| Error::NoSuchArc(u.to_string(), v.to_string()))?;
        Ok(self.pattern.digraph().id(self.arc_color[ai]))
    }

    /// Arcs in canonical order as (from, to, color).
    pub fn arcs(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.underlying
            .arcs()
            .enumerate()
            .map(move |(ai, (u, v))| (u, v, self.pattern.digraph().id(self.arc_color[ai])))
    }

    /// Whether consecutive arcs `a` then `b` (canonical indices) are
    /// compatible, i.e. their color pair is an arc of the pattern.
    pub(crate) fn compatible(&self, a: usize, b: usize) -> bool {
        self.pattern
            .digraph()
            .has_arc_idx(self.arc_color[a], self.arc_color[b])
    }

    pub(crate) fn walk_arc_indices(&self, w: &Walk) -> Result<Vec<usize>> {
        let verts = w.vertices();
        let mut out = Vec::with_capacity(verts.len() - 1);
        for pair in verts.windows(2) {
            let ui = self.underlying.idx(&pair[0])?;
            let vi = self.underlying.idx(&pair[1])?;
            let ai = self.underlying.arc_index(ui, vi).ok_or_else(|| {
                Error::NotAWalk(
                    verts.to_vec(),
                    format!("({},{}) is not an arc", pair[0], pair[1]),
                )
            })?;
            out.push(ai);
        }
        Ok(out)
    }

    /// Obstruction index set of a walk: position i is present when the
    /// color pair around the i-th vertex is not a pattern arc. Interior
    /// positions 1..n-1 for open walks; closed walks also test position 0
    /// against the walk's final arc.
    pub fn obstructions(&self, w: &Walk) -> Result<BTreeSet<usize>> {
        let arcs = self.walk_arc_indices(w)?;
        let mut obs = BTreeSet::new();
        for i in 1..arcs.len() {
            if !self.compatible(arcs[i - 1], arcs[i]) {
                obs.insert(i);
            }
        }
        if w.is_closed() && !self.compatible(arcs[arcs.len() - 1], arcs[0]) {
            obs.insert(0);
        }
        Ok(obs)
    }

    /// Cost of a walk: |obstructions| + 1 for open walks, |obstructions|
    /// for closed ones.
    pub fn h_length(&self, w: &Walk) -> Result<usize> {
        let obs = self.obstructions(w)?;
        Ok(if w.is_closed() {
            obs.len()
        } else {
            obs.len() + 1
        })
    }

    pub fn is_h_walk(&self, w: &Walk) -> Result<bool> {
        Ok(self.obstructions(w)?.is_empty())
    }

    /// Vertices where every (in-arc, out-arc) color pair is a pattern arc.
    /// Vertices missing in-arcs or out-arcs qualify vacuously.
    pub fn obstruction_free_vertices(&self) -> BTreeSet<String> {
        let g = &self.underlying;
        (0..g.n())
            .filter(|&v| self.is_obstruction_free_idx(v))
            .map(|v| g.id(v).to_string())
            .collect()
    }

    pub fn is_obstruction_free(&self, v: &str) -> Result<bool> {
        Ok(self.is_obstruction_free_idx(self.underlying.idx(v)?))
    }

    pub(crate) fn is_obstruction_free_idx(&self, v: usize) -> bool {
        let g = &self.underlying;
        g.in_idx(v).iter().all(|&u| {
            let a = g.arc_index(u, v).unwrap();
            g.out_idx(v).iter().all(|&w| {
                let b = g.arc_index(v, w).unwrap();
                self.compatible(a, b)
            })
        })
    }

    /// Whether every consecutive arc pair inside the arc-induced subdigraph
    /// is compatible.
    pub fn is_h_digraph(&self, arc_subset: &BTreeSet<(String, String)>) -> Result<bool> {
        let g = &self.underlying;
        let mut idxs = BTreeSet::new();
        for (u, v) in arc_subset {
            let ui = g.idx(u)?;
            let vi = g.idx(v)?;
            let ai = g
                .arc_index(ui, vi)
                .ok_or_else(|| Error::NoSuchArc(u.clone(), v.clone()))?;
            idxs.insert(ai);
        }
        Ok(self.is_h_digraph_idx(&idxs))
    }

    pub(crate) fn is_h_digraph_idx(&self, arc_idxs: &BTreeSet<usize>) -> bool {
        let g = &self.underlying;
        for &a in arc_idxs {
            let (_, v) = g.arc_endpoints(a);
            for &w in g.out_idx(v) {
                let b = g.arc_index(v, w).unwrap();
                if arc_idxs.contains(&b) && !self.compatible(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Consecutive arc pairs (a, b) in canonical-index order, where the head
    /// of arc a is the tail of arc b.
    pub(crate) fn consecutive_pairs(&self) -> Vec<(usize, usize)> {
        let g = &self.underlying;
        let mut pairs = Vec::new();
        for a in 0..g.arc_count() {
            let (_, v) = g.arc_endpoints(a);
            for &w in g.out_idx(v) {
                pairs.push((a, g.arc_index(v, w).unwrap()));
            }
        }
        pairs
    }

    /// The same colored digraph restricted to a vertex subset.
    pub fn induced_subdigraph(&self, keep: &BTreeSet<String>) -> Result<ColoredDigraph> {
        for v in keep {
            self.underlying.idx(v)?;
        }
        let arcs = self
            .arcs()
            .filter(|(u, v, _)| keep.contains(*u) && keep.contains(*v))
            .map(|(u, v, c)| (u.to_string(), v.to_string(), c.to_string()))
            .collect();
        ColoredDigraph::new(keep.iter().cloned().collect(), arcs, self.pattern.clone())
    }

    /// Colors actually used on arcs.
    pub fn used_colors(&self) -> BTreeSet<String> {
        self.arcs().map(|(_, _, c)| c.to_string()).collect()
    }
}

impl Digraph {
    pub(crate) fn has_arc_idx(&self, u: usize, v: usize) -> bool {
        self.out_idx(u).binary_search(&v).is_ok()
    }
}

/// A walk: a vertex sequence with at least one arc. Whether it is closed
/// (first = last vertex) is derived, never user-set. Vertices and arcs may
/// repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    vertices: Vec<String>,
}

impl Walk {
    pub fn new(vertices: Vec<String>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::NotAWalk(
                vertices,
                "a walk has at least one arc".to_string(),
            ));
        }
        Ok(Walk { vertices })
    }

    pub fn from_refs(vertices: &[&str]) -> Result<Self> {
        Walk::new(vertices.iter().map(|s| s.to_string()).collect())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn first(&self) -> &str {
        &self.vertices[0]
    }

    pub fn last(&self) -> &str {
        self.vertices.last().unwrap()
    }

    pub fn is_closed(&self) -> bool {
        self.first() == self.last()
    }

    /// Number of arcs.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Concatenation; requires `self.last() == other.first()`.
    pub fn concat(&self, other: &Walk) -> Result<Walk> {
        if self.last() != other.first() {
            return Err(Error::NotAWalk(
                other.vertices.clone(),
                format!("does not start at {}", self.last()),
            ));
        }
        let mut verts = self.vertices.clone();
        verts.extend(other.vertices[1..].iter().cloned());
        Walk::new(verts)
    }
}
