//! Class partitions of the arc set. A partition is valid when two
//! consecutive arcs are compatible exactly if they lie in the same class.
//! The finest such partition is computed by union-find over compatible
//! consecutive pairs; the class digraph records which classes meet.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::coloring::ColoredDigraph;
use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// A valid class partition of the arcs of a colored digraph. Classes are
/// named `F1`, `F2`, ... — by order of smallest arc for the computed finest
/// partition, by position for user-supplied partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HClassPartition {
    /// sorted canonical arc indices per class
    classes: Vec<Vec<usize>>,
    /// arc index -> class index
    class_of: Vec<usize>,
}

/// Outcome of the finest-partition construction. `NoPartition` is a
/// meaningful result, not an error: it proves that *no* valid partition
/// exists, by exhibiting an incompatible consecutive pair whose arcs are
/// forced into one class by a chain of compatible pairs.
#[derive(Debug, Clone)]
pub enum PartitionOutcome {
    Partition(HClassPartition),
    NoPartition(NoPartitionEvidence),
}

impl PartitionOutcome {
    pub fn partition(&self) -> Option<&HClassPartition> {
        match self {
            PartitionOutcome::Partition(p) => Some(p),
            PartitionOutcome::NoPartition(_) => None,
        }
    }

    pub fn into_partition(self) -> Option<HClassPartition> {
        match self {
            PartitionOutcome::Partition(p) => Some(p),
            PartitionOutcome::NoPartition(_) => None,
        }
    }
}

/// Why no valid partition exists: `first` and `second` are consecutive and
/// incompatible, yet the merge chain links them through compatible pairs.
#[derive(Debug, Clone, Serialize)]
pub struct NoPartitionEvidence {
    pub first: (String, String),
    pub second: (String, String),
    pub first_color: String,
    pub second_color: String,
    /// Merge steps connecting `first` to `second`: each step records two
    /// arcs that were forced together because they are compatible and
    /// consecutive at `junction`.
    pub chain: Vec<MergeStep>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MergeStep {
    pub from_arc: (String, String),
    pub to_arc: (String, String),
    pub junction: String,
}

impl NoPartitionEvidence {
    pub fn render(&self) -> String {
        let mut s = format!(
            "no valid class partition: arcs ({},{}) [{}] and ({},{}) [{}] are consecutive and incompatible, \
             but compatible pairs force them into one class:\n",
            self.first.0, self.first.1, self.first_color,
            self.second.0, self.second.1, self.second_color,
        );
        for step in &self.chain {
            s.push_str(&format!(
                "  ({},{}) ~ ({},{})  [compatible at {}]\n",
                step.from_arc.0, step.from_arc.1, step.to_arc.0, step.to_arc.1, step.junction
            ));
        }
        s
    }
}

/// A violation of the defining biconditional found while validating a
/// candidate partition.
#[derive(Debug, Clone, Serialize)]
pub enum BiconditionalViolation {
    /// Compatible consecutive arcs placed in different classes.
    SplitButCompatible {
        first: (String, String),
        second: (String, String),
    },
    /// Incompatible consecutive arcs placed in the same class.
    MergedButIncompatible {
        first: (String, String),
        second: (String, String),
    },
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl HClassPartition {
    /// The finest valid partition, or evidence that none exists.
    ///
    /// Every compatible consecutive pair is merged; any valid partition
    /// must coarsen the result, so if the merged components still contain
    /// an incompatible consecutive pair, no valid partition exists at all.
    pub fn finest(d: &ColoredDigraph) -> PartitionOutcome {
        let m = d.digraph().arc_count();
        let mut uf = UnionFind::new(m);
        // merge edges kept for chain reconstruction
        let mut merge_adj: Vec<Vec<usize>> = vec![Vec::new(); m];
        let pairs = d.consecutive_pairs();
        for &(a, b) in &pairs {
            if d.compatible(a, b) {
                uf.union(a, b);
                merge_adj[a].push(b);
                merge_adj[b].push(a);
            }
        }
        for &(a, b) in &pairs {
            if !d.compatible(a, b) && uf.find(a) == uf.find(b) {
                return PartitionOutcome::NoPartition(Self::evidence(d, &merge_adj, a, b));
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for a in 0..m {
            groups.entry(uf.find(a)).or_default().push(a);
        }
        // roots are minimal members, so BTreeMap order = smallest-arc order
        let classes: Vec<Vec<usize>> = groups.into_values().collect();
        let mut class_of = vec![usize::MAX; m];
        for (ci, arcs) in classes.iter().enumerate() {
            for &a in arcs {
                class_of[a] = ci;
            }
        }
        PartitionOutcome::Partition(HClassPartition { classes, class_of })
    }

    fn evidence(
        d: &ColoredDigraph,
        merge_adj: &[Vec<usize>],
        from: usize,
        to: usize,
    ) -> NoPartitionEvidence {
        // BFS through merge edges from `from` to `to`
        let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &y in &merge_adj[x] {
                if seen.insert(y) {
                    prev.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[&cur];
            path.push(cur);
        }
        path.reverse();
        let g = d.digraph();
        let name = |a: usize| {
            let (u, v) = g.arc_endpoints(a);
            (g.id(u).to_string(), g.id(v).to_string())
        };
        let chain = path
            .windows(2)
            .map(|w| {
                let (x, y) = (w[0], w[1]);
                let (_, xh) = g.arc_endpoints(x);
                let (yt, _) = g.arc_endpoints(y);
                // the shared junction is head of one and tail of the other
                let junction = if xh == yt {
                    xh
                } else {
                    let (xt, _) = g.arc_endpoints(x);
                    debug_assert_eq!(xt, { g.arc_endpoints(y).1 });
                    xt
                };
                MergeStep {
                    from_arc: name(x),
                    to_arc: name(y),
                    junction: g.id(junction).to_string(),
                }
            })
            .collect();
        let (u, v) = name(from);
        let (x, y) = name(to);
        NoPartitionEvidence {
            first_color: d.color_of(&u, &v).unwrap().to_string(),
            second_color: d.color_of(&x, &y).unwrap().to_string(),
            first: (u, v),
            second: (x, y),
            chain,
        }
    }

    /// Build a partition from user-supplied classes (lists of arcs). The
    /// classes keep their given order for naming. Fails if the classes do
    /// not partition the arc set or the biconditional does not hold.
    pub fn from_classes(
        d: &ColoredDigraph,
        classes: &[Vec<(String, String)>],
    ) -> Result<HClassPartition> {
        let candidate = Self::candidate_from_arc_lists(d, classes)?;
        if let Some(v) = candidate.biconditional_violation(d) {
            return Err(Error::NotAPartition(format!("{v:?}")));
        }
        Ok(candidate)
    }

    fn candidate_from_arc_lists(
        d: &ColoredDigraph,
        classes: &[Vec<(String, String)>],
    ) -> Result<HClassPartition> {
        let g = d.digraph();
        let m = g.arc_count();
        let mut class_of = vec![usize::MAX; m];
        let mut idx_classes = Vec::with_capacity(classes.len());
        for (ci, arcs) in classes.iter().enumerate() {
            if arcs.is_empty() {
                return Err(Error::NotAPartition(format!("class {} is empty", ci + 1)));
            }
            let mut idxs = Vec::with_capacity(arcs.len());
            for (u, v) in arcs {
                let ui = g.idx(u)?;
                let vi = g.idx(v)?;
                let ai = g
                    .arc_index(ui, vi)
                    .ok_or_else(|| Error::NoSuchArc(u.clone(), v.clone()))?;
                if class_of[ai] != usize::MAX {
                    return Err(Error::NotAPartition(format!(
                        "arc ({u},{v}) appears in more than one class"
                    )));
                }
                class_of[ai] = ci;
                idxs.push(ai);
            }
            idxs.sort_unstable();
            idx_classes.push(idxs);
        }
        if let Some(a) = class_of.iter().position(|&c| c == usize::MAX) {
            let (u, v) = g.arc_endpoints(a);
            return Err(Error::NotAPartition(format!(
                "arc ({},{}) is not covered",
                g.id(u),
                g.id(v)
            )));
        }
        Ok(HClassPartition {
            classes: idx_classes,
            class_of,
        })
    }

    fn biconditional_violation(&self, d: &ColoredDigraph) -> Option<BiconditionalViolation> {
        let g = d.digraph();
        let name = |a: usize| {
            let (u, v) = g.arc_endpoints(a);
            (g.id(u).to_string(), g.id(v).to_string())
        };
        for (a, b) in d.consecutive_pairs() {
            let same = self.class_of[a] == self.class_of[b];
            match (d.compatible(a, b), same) {
                (true, false) => {
                    return Some(BiconditionalViolation::SplitButCompatible {
                        first: name(a),
                        second: name(b),
                    })
                }
                (false, true) => {
                    return Some(BiconditionalViolation::MergedButIncompatible {
                        first: name(a),
                        second: name(b),
                    })
                }
                _ => {}
            }
        }
        None
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_name(&self, ci: usize) -> String {
        format!("F{}", ci + 1)
    }

    pub fn class_names(&self) -> Vec<String> {
        (0..self.classes.len())
            .map(|i| self.class_name(i))
            .collect()
    }

    pub(crate) fn index_of_name(&self, name: &str) -> Result<usize> {
        let ci = name
            .strip_prefix('F')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&i| 1 <= i && i <= self.classes.len())
            .ok_or_else(|| Error::UnknownClass(name.to_string()))?;
        Ok(ci - 1)
    }

    pub(crate) fn class_arcs_idx(&self, ci: usize) -> &[usize] {
        &self.classes[ci]
    }

    pub(crate) fn class_of_idx(&self, arc: usize) -> usize {
        self.class_of[arc]
    }

    /// Arcs of a class as (from, to) pairs in canonical order.
    pub fn class_arcs(&self, d: &ColoredDigraph, name: &str) -> Result<Vec<(String, String)>> {
        let ci = self.index_of_name(name)?;
        let g = d.digraph();
        Ok(self.classes[ci]
            .iter()
            .map(|&a| {
                let (u, v) = g.arc_endpoints(a);
                (g.id(u).to_string(), g.id(v).to_string())
            })
            .collect())
    }

    /// Name of the class containing arc (u, v).
    pub fn class_of_arc(&self, d: &ColoredDigraph, u: &str, v: &str) -> Result<String> {
        let g = d.digraph();
        let ai = g
            .arc_index(g.idx(u)?, g.idx(v)?)
            .ok_or_else(|| Error::NoSuchArc(u.to_string(), v.to_string()))?;
        Ok(self.class_name(self.class_of[ai]))
    }

    /// The subdigraph arc-induced by one class: its arcs are the class and
    /// its vertices are the endpoints of those arcs.
    pub fn class_subdigraph(&self, d: &ColoredDigraph, name: &str) -> Result<Digraph> {
        let ci = self.index_of_name(name)?;
        Ok(self.subdigraph_of_idx_classes(d, &[ci]))
    }

    /// The subdigraph arc-induced by a union of classes.
    pub fn union_subdigraph(
        &self,
        d: &ColoredDigraph,
        names: &BTreeSet<String>,
    ) -> Result<Digraph> {
        let cis: Vec<usize> = names
            .iter()
            .map(|n| self.index_of_name(n))
            .collect::<Result<_>>()?;
        Ok(self.subdigraph_of_idx_classes(d, &cis))
    }

    pub(crate) fn subdigraph_of_idx_classes(&self, d: &ColoredDigraph, cis: &[usize]) -> Digraph {
        let g = d.digraph();
        let mut verts = BTreeSet::new();
        let mut arcs = Vec::new();
        for &ci in cis {
            for &a in &self.classes[ci] {
                let (u, v) = g.arc_endpoints(a);
                verts.insert(g.id(u).to_string());
                verts.insert(g.id(v).to_string());
                arcs.push((g.id(u).to_string(), g.id(v).to_string()));
            }
        }
        Digraph::new(verts.into_iter().collect(), arcs, false)
            .expect("class arcs form a loopless digraph")
    }

    pub(crate) fn class_vertex_sets(&self, d: &ColoredDigraph) -> Vec<BTreeSet<usize>> {
        let g = d.digraph();
        self.classes
            .iter()
            .map(|arcs| {
                arcs.iter()
                    .flat_map(|&a| {
                        let (u, v) = g.arc_endpoints(a);
                        [u, v]
                    })
                    .collect()
            })
            .collect()
    }

    /// In-, out-, and full class neighborhoods of a vertex: the classes
    /// holding an arc into x, out of x, and their union.
    pub fn neighborhoods(
        &self,
        d: &ColoredDigraph,
        x: &str,
    ) -> Result<(BTreeSet<String>, BTreeSet<String>, BTreeSet<String>)> {
        let g = d.digraph();
        let xi = g.idx(x)?;
        let inn: BTreeSet<String> = g
            .in_idx(xi)
            .iter()
            .map(|&u| self.class_name(self.class_of[g.arc_index(u, xi).unwrap()]))
            .collect();
        let out: BTreeSet<String> = g
            .out_idx(xi)
            .iter()
            .map(|&v| self.class_name(self.class_of[g.arc_index(xi, v).unwrap()]))
            .collect();
        let all = inn.union(&out).cloned().collect();
        Ok((inn, out, all))
    }

    /// As lists of arc-index lists (canonical indices), e.g. for documents.
    pub fn as_arc_index_lists(&self) -> Vec<Vec<usize>> {
        self.classes.clone()
    }
}

/// Validate a candidate partition (given as arc lists) against the
/// biconditional. `Ok(None)` means valid; `Ok(Some(v))` reports the first
/// violation; `Err` means the candidate is not a partition of the arcs.
pub fn validate_partition(
    d: &ColoredDigraph,
    classes: &[Vec<(String, String)>],
) -> Result<Option<BiconditionalViolation>> {
    let candidate = HClassPartition::candidate_from_arc_lists(d, classes)?;
    Ok(candidate.biconditional_violation(d))
}

/// An arc of the host digraph named by its endpoints.
pub type ArcPair = (String, String);

/// The class digraph: one vertex per class, an arc (F, G) whenever some arc
/// of F is followed by some arc of G, and a witnessing consecutive pair for
/// every such arc. Loops are allowed and arise exactly from compatible
/// pairs inside one class.
#[derive(Debug, Clone)]
pub struct ClassDigraph {
    digraph: Digraph,
    witness: BTreeMap<(String, String), (ArcPair, ArcPair)>,
}

impl ClassDigraph {
    pub fn build(d: &ColoredDigraph, f: &HClassPartition) -> ClassDigraph {
        let g = d.digraph();
        let name = |a: usize| {
            let (u, v) = g.arc_endpoints(a);
            (g.id(u).to_string(), g.id(v).to_string())
        };
        let mut witness = BTreeMap::new();
        for (a, b) in d.consecutive_pairs() {
            let key = (
                f.class_name(f.class_of_idx(a)),
                f.class_name(f.class_of_idx(b)),
            );
            witness.entry(key).or_insert_with(|| (name(a), name(b)));
        }
        let digraph = Digraph::new(f.class_names(), witness.keys().cloned().collect(), true)
            .expect("class names are distinct");
        ClassDigraph { digraph, witness }
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// One consecutive arc pair of D realizing the class arc (f, g).
    pub fn witness(&self, f: &str, g: &str) -> Option<&(ArcPair, ArcPair)> {
        self.witness.get(&(f.to_string(), g.to_string()))
    }

    /// Proper out-neighborhood of a class set: classes outside `s` that
    /// receive an arc from `s`.
    pub fn proper_out_neighborhood(&self, s: &BTreeSet<String>) -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for f in s {
            for g in self.digraph.out_neighbors(f)? {
                if !s.contains(g) {
                    out.insert(g.to_string());
                }
            }
        }
        Ok(out)
    }

    /// Whether `s` is independent: no arc joins two distinct members.
    pub fn is_independent(&self, s: &BTreeSet<String>) -> Result<bool> {
        for f in s {
            for g in self.digraph.out_neighbors(f)? {
                if g != f && s.contains(g) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A walk-preservative failure: vertex `vertex` of the class `from` cannot
/// reach the junction with class `to` inside the subdigraph of `from`.
#[derive(Debug, Clone, Serialize)]
pub struct WalkPreservativeViolation {
    pub from: String,
    pub to: String,
    pub vertex: String,
}

/// Check walk-preservativity: for every class arc (F, G) with F != G, every
/// vertex of the subdigraph of F must reach, inside that subdigraph, some
/// vertex shared with the subdigraph of G. Length-0 paths count; loops are
/// trivially satisfied. `None` means the partition is walk-preservative.
pub fn walk_preservative_violation(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
) -> Option<WalkPreservativeViolation> {
    let g = d.digraph();
    let vertex_sets = f.class_vertex_sets(d);
    for fi in 0..f.class_count() {
        let fname = f.class_name(fi);
        // in-class adjacency, reversed, for backward reachability
        let mut radj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &a in f.class_arcs_idx(fi) {
            let (u, v) = g.arc_endpoints(a);
            radj.entry(v).or_default().push(u);
        }
        for gname in c.digraph().out_neighbors(&fname).unwrap() {
            if gname == fname {
                continue;
            }
            let gi = f.index_of_name(gname).unwrap();
            let targets: BTreeSet<usize> = vertex_sets[fi]
                .intersection(&vertex_sets[gi])
                .copied()
                .collect();
            let mut reached = targets.clone();
            let mut queue: VecDeque<usize> = targets.iter().copied().collect();
            while let Some(v) = queue.pop_front() {
                if let Some(preds) = radj.get(&v) {
                    for &u in preds {
                        if reached.insert(u) {
                            queue.push_back(u);
                        }
                    }
                }
            }
            if let Some(&z) = vertex_sets[fi].difference(&reached).next() {
                return Some(WalkPreservativeViolation {
                    from: fname,
                    to: gname.to_string(),
                    vertex: g.id(z).to_string(),
                });
            }
        }
    }
    None
}

/// Structural facts about one class, as used by the theorem hypotheses.
/// Obstruction-freeness is evaluated in the whole digraph, not in the
/// class subdigraph.
#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub class: String,
    pub strongly_connected: bool,
    pub unilateral: bool,
    pub has_sink: bool,
    pub obstruction_free_in_d: BTreeSet<String>,
}

pub fn class_predicates(d: &ColoredDigraph, f: &HClassPartition) -> Vec<ClassReport> {
    let free = d.obstruction_free_vertices();
    (0..f.class_count())
        .map(|ci| {
            let sub = f.subdigraph_of_idx_classes(d, &[ci]);
            ClassReport {
                class: f.class_name(ci),
                strongly_connected: sub.is_strongly_connected().unwrap_or(false),
                unilateral: sub.is_unilateral(),
                has_sink: !sub.sinks().is_empty(),
                obstruction_free_in_d: sub
                    .vertices()
                    .filter(|v| free.contains(*v))
                    .map(|v| v.to_string())
                    .collect(),
            }
        })
        .collect()
}
