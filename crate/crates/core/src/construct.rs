//! The constructive results: given a colored digraph, a class partition,
//! and a kernel of the class digraph, build a kernel by walks of the host
//! digraph with an explicit, oracle-verified certificate. Every
//! constructor checks its own hypotheses and refuses rather than emitting
//! an unverified set; an unchecked variant exists for experimentation and
//! still runs the oracle before certifying.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::ColoredDigraph;
use crate::error::Error as CoreError;
use crate::hclass::{
    class_predicates, walk_preservative_violation, ClassDigraph, ClassReport, HClassPartition,
    PartitionOutcome,
};
use crate::kernels::{
    brute_force_kl_kernels, constrained_kernel_by_paths, kernel_by_paths, symmetric_k_kernel,
    transitive_kernel, SearchMode, VertexSet, DEFAULT_BRUTE_BOUND,
};
use crate::oracle::{
    exhaustive_klh_kernels, min_obstructions_to_vertices, verify_k_independent_by_walks,
    verify_l_absorbent_by_walks, ArcStateGraph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremTag {
    ClassLema,
    Prop41,
    Prop42,
    Prop43,
    Prop44,
    Thm51,
    Thm52,
    Thm53,
    Thm54,
    Thm55,
    Brute,
}

impl TheoremTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremTag::ClassLema => "classlema",
            TheoremTag::Prop41 => "prop41",
            TheoremTag::Prop42 => "prop42",
            TheoremTag::Prop43 => "prop43",
            TheoremTag::Prop44 => "prop44",
            TheoremTag::Thm51 => "thm51",
            TheoremTag::Thm52 => "thm52",
            TheoremTag::Thm53 => "thm53",
            TheoremTag::Thm54 => "thm54",
            TheoremTag::Thm55 => "thm55",
            TheoremTag::Brute => "brute",
        }
    }

    /// Parse a method name; `thm35` is the CLI alias for the kernel by
    /// clean walks.
    pub fn parse(s: &str) -> Option<TheoremTag> {
        Some(match s {
            "thm35" | "classlema" => TheoremTag::ClassLema,
            "prop41" => TheoremTag::Prop41,
            "prop42" => TheoremTag::Prop42,
            "prop43" => TheoremTag::Prop43,
            "prop44" => TheoremTag::Prop44,
            "thm51" => TheoremTag::Thm51,
            "thm52" => TheoremTag::Thm52,
            "thm53" => TheoremTag::Thm53,
            "thm54" => TheoremTag::Thm54,
            "thm55" => TheoremTag::Thm55,
            "brute" => TheoremTag::Brute,
            _ => return None,
        })
    }
}

impl std::fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Failure modes of the constructors. A hypothesis failure names the first
/// violated hypothesis together with a witness.
#[derive(Debug, Clone, Error)]
pub enum ConstructError {
    #[error("hypothesis `{hypothesis}` failed: {witness}")]
    Hypothesis { hypothesis: String, witness: String },
    #[error("not found: {0}")]
    NotFound(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

fn hyp(hypothesis: &str, witness: impl Into<String>) -> ConstructError {
    ConstructError::Hypothesis {
        hypothesis: hypothesis.to_string(),
        witness: witness.into(),
    }
}

fn precondition(msg: impl Into<String>) -> ConstructError {
    ConstructError::Core(CoreError::Precondition(msg.into()))
}

/// Oracle outcome recorded in every certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationOutcome {
    pub independent: bool,
    pub absorbent: bool,
    pub counterexample: Option<String>,
}

impl VerificationOutcome {
    pub fn verified(&self) -> bool {
        self.independent && self.absorbent
    }
}

/// A candidate kernel with its parameters, the result used to build it,
/// and the oracle verdict.
#[derive(Debug, Clone, Serialize)]
pub struct KernelCertificate {
    pub kernel: VertexSet,
    pub k: usize,
    pub l: usize,
    pub theorem: TheoremTag,
    pub class_kernel: Option<BTreeSet<String>>,
    pub isolated_appended: VertexSet,
    /// which partition backed the construction ("finest" or "supplied")
    pub partition_source: Option<String>,
    pub verification: VerificationOutcome,
}

impl KernelCertificate {
    pub fn verified(&self) -> bool {
        self.verification.verified()
    }

    /// Weaken the claim to smaller independence or larger absorbency and
    /// re-verify: a (k,_)-independent set is (k',_)-independent for k' <= k
    /// and an (_,l)-absorbent set is (_,l')-absorbent for l' >= l.
    pub fn weaken(
        &self,
        d: &ColoredDigraph,
        k: usize,
        l: usize,
    ) -> Result<KernelCertificate, ConstructError> {
        if k > self.k || l < self.l {
            return Err(precondition(format!(
                "({k},{l}) does not weaken ({},{})",
                self.k, self.l
            )));
        }
        let mut cert = self.clone();
        cert.k = k;
        cert.l = l;
        cert.verification = run_verification(d, &cert.kernel, k, l);
        Ok(cert)
    }
}

fn run_verification(
    d: &ColoredDigraph,
    kernel: &VertexSet,
    k: usize,
    l: usize,
) -> VerificationOutcome {
    let ind = verify_k_independent_by_walks(d, kernel, k).expect("kernel members are vertices");
    let abs = verify_l_absorbent_by_walks(d, kernel, l).expect("kernel members are vertices");
    VerificationOutcome {
        independent: ind.is_none(),
        absorbent: abs.is_none(),
        counterexample: ind.or(abs).map(|v| v.render()),
    }
}

#[allow(clippy::too_many_arguments)]
fn certify(
    d: &ColoredDigraph,
    kernel: VertexSet,
    k: usize,
    l: usize,
    theorem: TheoremTag,
    class_kernel: Option<BTreeSet<String>>,
    isolated_appended: VertexSet,
    partition_source: Option<String>,
) -> KernelCertificate {
    let verification = run_verification(d, &kernel, k, l);
    KernelCertificate {
        kernel,
        k,
        l,
        theorem,
        class_kernel,
        isolated_appended,
        partition_source,
        verification,
    }
}

// ----- shared hypothesis checks -----

fn check_kl(k: usize, l: usize, kmin: usize, lmin: usize) -> Result<(), ConstructError> {
    if k < kmin || l < lmin {
        return Err(precondition(format!(
            "requires k >= {kmin} and l >= {lmin}, got ({k},{l})"
        )));
    }
    Ok(())
}

fn check_walk_preservative(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
) -> Result<(), ConstructError> {
    if let Some(v) = walk_preservative_violation(d, f, c) {
        return Err(hyp(
            "walk-preservative",
            format!(
                "vertex {} of {} cannot reach {} inside its class",
                v.vertex, v.from, v.to
            ),
        ));
    }
    Ok(())
}

fn check_no_isolated(d: &ColoredDigraph) -> Result<(), ConstructError> {
    if let Some(v) = d.digraph().isolated_vertices().into_iter().next() {
        return Err(hyp(
            "no-isolated-vertices",
            format!("vertex {v} is isolated"),
        ));
    }
    Ok(())
}

fn resolve_classes(f: &HClassPartition, s: &BTreeSet<String>) -> Result<(), ConstructError> {
    for name in s {
        f.index_of_name(name).map_err(ConstructError::Core)?;
    }
    Ok(())
}

/// S must be a (k,l)-kernel of the class digraph: pairwise distances of
/// distinct members at least k in both directions, and every class outside
/// S within distance l of S.
fn check_class_kernel(
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
) -> Result<(), ConstructError> {
    let g = c.digraph();
    for u in s {
        for v in s {
            if u != v {
                if let Some(dist) = g.shortest_walk_length(u, v).map_err(ConstructError::Core)? {
                    if dist < k {
                        return Err(hyp(
                            "class-kernel-independence",
                            format!("classes {u} and {v} at distance {dist} < {k}"),
                        ));
                    }
                }
            }
        }
    }
    check_class_absorbency(c, s, l)
}

fn check_class_absorbency(
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    l: usize,
) -> Result<(), ConstructError> {
    let g = c.digraph();
    for x in g.vertices() {
        if s.contains(x) {
            continue;
        }
        let best = s
            .iter()
            .filter_map(|m| g.shortest_walk_length(x, m).unwrap())
            .min();
        if best.is_none_or(|b| b > l) {
            return Err(hyp(
                "class-kernel-absorbency",
                format!("class {x} is not within distance {l} of the class set"),
            ));
        }
    }
    Ok(())
}

fn check_class_independent(c: &ClassDigraph, s: &BTreeSet<String>) -> Result<(), ConstructError> {
    if !c.is_independent(s).map_err(ConstructError::Core)? {
        return Err(hyp(
            "class-set-independence",
            "an arc joins two distinct members of the class set",
        ));
    }
    Ok(())
}

// ----- kernel by clean walks (the transitive-closure construction) -----

/// A kernel by walks without obstructions. Requires every vertex to be
/// obstruction-free or to reach an obstruction-free vertex by a clean
/// walk. Builds the reachability digraph on obstruction-free vertices,
/// validates that it is transitive, and takes its kernel.
pub fn kernel_by_h_walks(d: &ColoredDigraph) -> Result<VertexSet, ConstructError> {
    let g = d.digraph();
    if g.is_empty() {
        return Ok(VertexSet::new());
    }
    let free = d.obstruction_free_vertices();
    let asg = ArcStateGraph::build(d);
    let mut arcs: Vec<(String, String)> = Vec::new();
    for u in g.vertices() {
        let ui = g.idx(u).unwrap();
        let best = min_obstructions_to_vertices(d, &asg, ui);
        let clean: Vec<&str> = (0..g.n())
            .filter(|&v| v != ui && best[v] == Some(0) && free.contains(g.id(v)))
            .map(|v| g.id(v))
            .collect();
        if free.contains(u) {
            for v in &clean {
                arcs.push((u.to_string(), v.to_string()));
            }
        } else if clean.is_empty() {
            return Err(hyp(
                "reaches-obstruction-free",
                format!("vertex {u} has no clean walk to an obstruction-free vertex"),
            ));
        }
    }
    let reach = crate::digraph::Digraph::new(free.iter().cloned().collect(), arcs, false)
        .map_err(ConstructError::Core)?;
    transitive_kernel(&reach).map_err(ConstructError::Core)
}

/// Certificate wrapper for [`kernel_by_h_walks`]: the result is a
/// (2,1)-kernel by walks.
pub fn construct_classlema(d: &ColoredDigraph) -> Result<KernelCertificate, ConstructError> {
    let kernel = kernel_by_h_walks(d)?;
    Ok(certify(
        d,
        kernel,
        2,
        1,
        TheoremTag::ClassLema,
        None,
        VertexSet::new(),
        None,
    ))
}

// ----- builders shared by the checked constructors and the unchecked mode -----

fn build_swap_kernel(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
) -> Result<VertexSet, ConstructError> {
    Ok(constrained_kernel_by_paths(d, f, c, s)
        .map_err(ConstructError::Core)?
        .kernel)
}

fn build_union_kernel(
    d: &ColoredDigraph,
    f: &HClassPartition,
    s: &BTreeSet<String>,
) -> Result<VertexSet, ConstructError> {
    let d1 = f.union_subdigraph(d, s).map_err(ConstructError::Core)?;
    kernel_by_paths(&d1).map_err(ConstructError::Core)
}

/// One obstruction-free vertex per class, smallest id each.
fn build_obstruction_free_reps(
    d: &ColoredDigraph,
    f: &HClassPartition,
    s: &BTreeSet<String>,
) -> Result<VertexSet, ConstructError> {
    let free = d.obstruction_free_vertices();
    let mut reps = VertexSet::new();
    for name in s {
        let sub = f.class_subdigraph(d, name).map_err(ConstructError::Core)?;
        let z = sub.vertices().find(|v| free.contains(*v)).ok_or_else(|| {
            hyp(
                "class-has-obstruction-free-vertex",
                format!("class {name} has no obstruction-free vertex"),
            )
        })?;
        assert!(
            reps.insert(z.to_string()),
            "distinct classes of an independent set share an obstruction-free vertex"
        );
    }
    Ok(reps)
}

fn append(mut kernel: VertexSet, extra: &VertexSet) -> VertexSet {
    kernel.extend(extra.iter().cloned());
    kernel
}

// ----- the four section-4 constructors -----

/// Swap-relocated kernel: needs a walk-preservative partition, a sinkless
/// class digraph whose non-loop cycles have length at least k, a
/// (k,l)-kernel S of the class digraph, and the in-neighborhood condition
/// on vertices touching both S and its proper out-neighborhood. Yields a
/// (k, l+1)-kernel by walks.
pub fn construct_prop41(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
) -> Result<KernelCertificate, ConstructError> {
    prop41_inner(d, f, c, s, k, l, TheoremTag::Prop41, true)
}

#[allow(clippy::too_many_arguments)]
fn prop41_inner(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
    tag: TheoremTag,
    check_cycles: bool,
) -> Result<KernelCertificate, ConstructError> {
    check_kl(k, l, 2, 1)?;
    resolve_classes(f, s)?;
    check_walk_preservative(d, f, c)?;
    check_class_kernel(c, s, k, l)?;
    // hypothesis (a)
    if let Some(f0) = c.digraph().sinks().into_iter().next() {
        return Err(hyp(
            "no-sinks-in-class-digraph",
            format!("class {f0} is a sink"),
        ));
    }
    if check_cycles {
        if let Some(len) = c.digraph().min_nonloop_cycle_length() {
            if len < k {
                return Err(hyp(
                    "class-cycles-at-least-k",
                    format!("a non-loop cycle of length {len} < {k} exists"),
                ));
            }
        }
    }
    // hypothesis (b)
    let out = c.proper_out_neighborhood(s).map_err(ConstructError::Core)?;
    for x in d.digraph().vertices() {
        let (inn, _, all) = f.neighborhoods(d, x).map_err(ConstructError::Core)?;
        if !all.is_disjoint(s) && !all.is_disjoint(&out) && !inn.is_subset(s) {
            return Err(hyp(
                "in-neighborhood-contained-in-class-kernel",
                format!("vertex {x} touches the class set and its out-neighborhood but has an in-class outside it"),
            ));
        }
    }
    let isolated = d.digraph().isolated_vertices();
    let kernel = if d.digraph().arc_count() == 0 {
        isolated.clone()
    } else {
        append(build_swap_kernel(d, f, c, s)?, &isolated)
    };
    Ok(certify(
        d,
        kernel,
        k,
        l + 1,
        tag,
        Some(s.clone()),
        isolated,
        None,
    ))
}

/// Terminal class set: S independent, l-absorbent, with empty proper
/// out-neighborhood. Any kernel by paths of the union subdigraph is a
/// (k, l+1)-kernel by walks for every k >= 2.
pub fn construct_prop42(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
) -> Result<KernelCertificate, ConstructError> {
    check_no_isolated(d)?;
    prop42_inner(d, f, c, s, k, l, TheoremTag::Prop42)
}

fn prop42_inner(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
    tag: TheoremTag,
) -> Result<KernelCertificate, ConstructError> {
    check_kl(k, l, 2, 1)?;
    resolve_classes(f, s)?;
    let isolated = d.digraph().isolated_vertices();
    if d.digraph().arc_count() == 0 {
        return Ok(certify(
            d,
            isolated.clone(),
            k,
            l + 1,
            tag,
            Some(s.clone()),
            isolated,
            None,
        ));
    }
    check_walk_preservative(d, f, c)?;
    check_class_independent(c, s)?;
    check_class_absorbency(c, s, l)?;
    let out = c.proper_out_neighborhood(s).map_err(ConstructError::Core)?;
    if let Some(g) = out.into_iter().next() {
        return Err(hyp(
            "empty-proper-out-neighborhood",
            format!("class {g} is a proper out-neighbor of the class set"),
        ));
    }
    let kernel = append(build_union_kernel(d, f, s)?, &isolated);
    Ok(certify(
        d,
        kernel,
        k,
        l + 1,
        tag,
        Some(s.clone()),
        isolated,
        None,
    ))
}

/// Unilateral sink-free classes: S a (k,l)-kernel of the class digraph
/// with k >= 3, every class of S unilateral and sink-free. Any kernel by
/// paths of the union subdigraph is a (k-1, l+1)-kernel by walks.
pub fn construct_prop43(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
) -> Result<KernelCertificate, ConstructError> {
    check_no_isolated(d)?;
    prop43_inner(d, f, c, s, k, l, TheoremTag::Prop43)
}

fn prop43_inner(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
    tag: TheoremTag,
) -> Result<KernelCertificate, ConstructError> {
    check_kl(k, l, 3, 1)?;
    resolve_classes(f, s)?;
    if d.digraph().arc_count() == 0 {
        // isolated-tolerant callers on an arcless digraph: everything is
        // isolated and the whole vertex set is the kernel
        let isolated = d.digraph().isolated_vertices();
        return Ok(certify(
            d,
            isolated.clone(),
            k - 1,
            l + 1,
            tag,
            Some(s.clone()),
            isolated,
            None,
        ));
    }
    check_walk_preservative(d, f, c)?;
    check_class_kernel(c, s, k, l)?;
    for name in s {
        let sub = f.class_subdigraph(d, name).map_err(ConstructError::Core)?;
        if !sub.is_unilateral() {
            return Err(hyp(
                "classes-unilateral",
                format!("class {name} is not unilateral"),
            ));
        }
        if let Some(v) = sub.sinks().into_iter().next() {
            return Err(hyp(
                "classes-sink-free",
                format!("class {name} has sink {v}"),
            ));
        }
    }
    let isolated = d.digraph().isolated_vertices();
    let kernel = append(build_union_kernel(d, f, s)?, &isolated);
    Ok(certify(
        d,
        kernel,
        k - 1,
        l + 1,
        tag,
        Some(s.clone()),
        isolated,
        None,
    ))
}

/// Strongly connected classes with obstruction-free vertices: S a
/// (k,l)-kernel of the class digraph with k >= 3; picking the smallest
/// obstruction-free vertex of each class yields a (k+1, l+1)-kernel by
/// walks. The partition must additionally be walk-preservative — the
/// absorbency transfer needs it, and without it 4-vertex counterexamples
/// exist (a class that strands a vertex away from every junction).
pub fn construct_prop44(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
) -> Result<KernelCertificate, ConstructError> {
    check_kl(k, l, 3, 1)?;
    prop44_inner(d, f, c, s, k, l, TheoremTag::Prop44)
}

fn prop44_inner(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
    tag: TheoremTag,
) -> Result<KernelCertificate, ConstructError> {
    check_kl(k, l, 2, 1)?;
    resolve_classes(f, s)?;
    check_walk_preservative(d, f, c)?;
    check_class_kernel(c, s, k, l)?;
    for name in s {
        let sub = f.class_subdigraph(d, name).map_err(ConstructError::Core)?;
        if !sub.is_strongly_connected().unwrap_or(false) {
            return Err(hyp(
                "classes-strongly-connected",
                format!("class {name} does not induce a strongly connected digraph"),
            ));
        }
    }
    let isolated = d.digraph().isolated_vertices();
    let kernel = append(build_obstruction_free_reps(d, f, s)?, &isolated);
    Ok(certify(
        d,
        kernel,
        k + 1,
        l + 1,
        tag,
        Some(s.clone()),
        isolated,
        None,
    ))
}

// ----- the section-5 wrappers -----

/// Isolated-vertex-tolerant variant of [`construct_prop42`].
pub fn construct_thm51(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
) -> Result<KernelCertificate, ConstructError> {
    prop42_inner(d, f, c, s, k, l, TheoremTag::Thm51)
}

/// Strongly connected host digraph with the cycle and in-neighborhood
/// conditions. Sinklessness of the class digraph is derived: either the
/// whole digraph is obstruction-free (then any kernel by paths certifies
/// the requested parameters directly), or the class digraph is
/// non-trivially strongly connected and so has no sinks.
pub fn construct_thm52(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
) -> Result<KernelCertificate, ConstructError> {
    check_kl(k, l, 2, 1)?;
    if !d
        .digraph()
        .is_strongly_connected()
        .map_err(ConstructError::Core)?
    {
        return Err(precondition("digraph is not strongly connected"));
    }
    let all_arcs: BTreeSet<usize> = (0..d.digraph().arc_count()).collect();
    if d.is_h_digraph_idx(&all_arcs) {
        let kernel = kernel_by_paths(d.digraph()).map_err(ConstructError::Core)?;
        return Ok(certify(
            d,
            kernel,
            k,
            l,
            TheoremTag::Thm52,
            None,
            VertexSet::new(),
            None,
        ));
    }
    debug_assert!(
        c.digraph().sinks().is_empty(),
        "class digraph of a strongly connected non-clean digraph has no sinks"
    );
    prop41_inner(d, f, c, s, k, l, TheoremTag::Thm52, true)
}

/// Every class unilateral and sink-free; the (k,l)-kernel of the class
/// digraph is found here (greedy when symmetric with l >= k-1, brute
/// force otherwise). Isolated-vertex tolerant.
pub fn construct_thm53(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    k: usize,
    l: usize,
    brute_bound: usize,
) -> Result<KernelCertificate, ConstructError> {
    check_kl(k, l, 3, 1)?;
    for name in f.class_names() {
        let sub = f.class_subdigraph(d, &name).map_err(ConstructError::Core)?;
        if !sub.is_unilateral() {
            return Err(hyp(
                "classes-unilateral",
                format!("class {name} is not unilateral"),
            ));
        }
        if let Some(v) = sub.sinks().into_iter().next() {
            return Err(hyp(
                "classes-sink-free",
                format!("class {name} has sink {v}"),
            ));
        }
    }
    let s = find_class_kernel(c, k, l, brute_bound)?;
    prop43_inner(d, f, c, &s, k, l, TheoremTag::Thm53)
}

/// Obtain a (k,l)-kernel of the class digraph: the greedy maximal
/// k-independent set when the digraph is symmetric and l >= k-1, otherwise
/// exhaustive search up to the bound.
fn find_class_kernel(
    c: &ClassDigraph,
    k: usize,
    l: usize,
    brute_bound: usize,
) -> Result<BTreeSet<String>, ConstructError> {
    let g = c.digraph();
    if g.is_symmetric() && l >= k.saturating_sub(1) {
        return symmetric_k_kernel(g, k).map_err(ConstructError::Core);
    }
    let found = brute_force_kl_kernels(g, k, l, SearchMode::First, brute_bound)
        .map_err(ConstructError::Core)?;
    found
        .into_iter()
        .next()
        .ok_or_else(|| ConstructError::NotFound(format!("class digraph has no ({k},{l})-kernel")))
}

/// Every class strongly connected: for k >= 2 and l >= k+1 the class
/// digraph is symmetric, its greedy (k+1)-kernel is a (k+1, l-1)-kernel,
/// and the unilateral construction turns it into a (k, l)-kernel by walks.
pub fn construct_thm54(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    k: usize,
    l: usize,
) -> Result<KernelCertificate, ConstructError> {
    if k < 2 || l < k + 1 {
        return Err(precondition(format!(
            "requires k >= 2 and l >= k+1, got ({k},{l})"
        )));
    }
    check_strongly_connected_classes(d, f)?;
    assert!(
        c.digraph().is_symmetric(),
        "strongly connected classes give a symmetric class digraph"
    );
    let s = symmetric_k_kernel(c.digraph(), k + 1).map_err(ConstructError::Core)?;
    let cert = prop43_inner(d, f, c, &s, k + 1, l - 1, TheoremTag::Thm54)?;
    debug_assert_eq!((cert.k, cert.l), (k, l));
    Ok(cert)
}

/// Every class strongly connected with an obstruction-free vertex: for
/// every k >= 2 there is a (k, k-1)-kernel by walks. k = 2 goes through
/// the clean-walk construction (its hypothesis is implied but still
/// verified); k >= 3 takes a greedy (k-1)-kernel of the symmetric class
/// digraph and picks obstruction-free representatives.
pub fn construct_thm55(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    k: usize,
) -> Result<KernelCertificate, ConstructError> {
    if k < 2 {
        return Err(precondition(format!("requires k >= 2, got {k}")));
    }
    check_strongly_connected_classes(d, f)?;
    let free = d.obstruction_free_vertices();
    for name in f.class_names() {
        let sub = f.class_subdigraph(d, &name).map_err(ConstructError::Core)?;
        if !sub.vertices().any(|v| free.contains(v)) {
            return Err(hyp(
                "class-has-obstruction-free-vertex",
                format!("class {name} has no obstruction-free vertex"),
            ));
        }
    }
    if k == 2 {
        let kernel = kernel_by_h_walks(d)?;
        return Ok(certify(
            d,
            kernel,
            2,
            1,
            TheoremTag::Thm55,
            None,
            VertexSet::new(),
            None,
        ));
    }
    assert!(
        c.digraph().is_symmetric(),
        "strongly connected classes give a symmetric class digraph"
    );
    let s = symmetric_k_kernel(c.digraph(), k - 1).map_err(ConstructError::Core)?;
    let cert = prop44_inner(
        d,
        f,
        c,
        &s,
        k - 1,
        k.saturating_sub(2).max(1),
        TheoremTag::Thm55,
    )?;
    debug_assert_eq!((cert.k, cert.l), (k, k - 1));
    Ok(cert)
}

fn check_strongly_connected_classes(
    d: &ColoredDigraph,
    f: &HClassPartition,
) -> Result<(), ConstructError> {
    for name in f.class_names() {
        let sub = f.class_subdigraph(d, &name).map_err(ConstructError::Core)?;
        if !sub.is_strongly_connected().unwrap_or(false) {
            return Err(hyp(
                "classes-strongly-connected",
                format!("class {name} does not induce a strongly connected digraph"),
            ));
        }
    }
    Ok(())
}

/// Exhaustive search certificate: the first (k,l)-kernel by walks in
/// size-then-lexicographic order.
pub fn construct_brute(
    d: &ColoredDigraph,
    k: usize,
    l: usize,
    bound: usize,
) -> Result<KernelCertificate, ConstructError> {
    let found = exhaustive_klh_kernels(d, k, l, bound).map_err(ConstructError::Core)?;
    let kernel = found
        .into_iter()
        .next()
        .ok_or_else(|| ConstructError::NotFound(format!("no ({k},{l})-kernel by walks exists")))?;
    Ok(certify(
        d,
        kernel,
        k,
        l,
        TheoremTag::Brute,
        None,
        VertexSet::new(),
        None,
    ))
}

/// Experimentation mode: skip the hypothesis checks, run the construction
/// for the given method anyway, and let the oracle speak in the
/// certificate's verification block.
pub fn construct_unchecked(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    tag: TheoremTag,
    s: &BTreeSet<String>,
    k: usize,
    l: usize,
) -> Result<KernelCertificate, ConstructError> {
    resolve_classes(f, s)?;
    let isolated = d.digraph().isolated_vertices();
    let (kernel, class_kernel) = match tag {
        TheoremTag::ClassLema => (kernel_by_h_walks(d)?, None),
        TheoremTag::Brute => {
            return construct_brute(d, k, l, DEFAULT_BRUTE_BOUND);
        }
        TheoremTag::Prop41 => (
            append(build_swap_kernel(d, f, c, s)?, &isolated),
            Some(s.clone()),
        ),
        TheoremTag::Prop42
        | TheoremTag::Prop43
        | TheoremTag::Thm51
        | TheoremTag::Thm52
        | TheoremTag::Thm53
        | TheoremTag::Thm54 => (
            append(build_union_kernel(d, f, s)?, &isolated),
            Some(s.clone()),
        ),
        TheoremTag::Prop44 | TheoremTag::Thm55 => (
            append(build_obstruction_free_reps(d, f, s)?, &isolated),
            Some(s.clone()),
        ),
    };
    Ok(certify(d, kernel, k, l, tag, class_kernel, isolated, None))
}

// ----- the analyzer -----

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub vertex_count: usize,
    pub arc_count: usize,
    pub strongly_connected: bool,
    pub is_h_digraph: bool,
    pub obstruction_free: BTreeSet<String>,
    pub isolated: BTreeSet<String>,
    pub partition_source: Option<String>,
    pub partition: Option<PartitionSummary>,
    pub no_partition: Option<String>,
    pub class_digraph: Option<ClassDigraphSummary>,
    pub walk_preservative: Option<bool>,
    pub walk_preservative_witness: Option<String>,
    pub classes: Vec<ClassReport>,
    pub theorems: Vec<TheoremStatus>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionSummary {
    pub class_count: usize,
    pub classes: Vec<Vec<(String, String)>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassDigraphSummary {
    pub arcs: Vec<(String, String)>,
    pub symmetric: bool,
    pub sinks: BTreeSet<String>,
    pub min_nonloop_cycle: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremStatus {
    pub theorem: TheoremTag,
    pub status: Applicability,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Applicability {
    Applicable,
    NeedsClassKernel,
    NotApplicable,
}

/// Evaluate every structural predicate and report which constructions
/// apply. Uses the supplied partition when one is given, the finest
/// otherwise; a missing partition is reported, not raised.
pub fn analyze(d: &ColoredDigraph, supplied: Option<&HClassPartition>) -> AnalysisReport {
    let g = d.digraph();
    let free = d.obstruction_free_vertices();
    let all_arcs: BTreeSet<usize> = (0..g.arc_count()).collect();
    let mut report = AnalysisReport {
        vertex_count: g.vertex_count(),
        arc_count: g.arc_count(),
        strongly_connected: g.is_strongly_connected().unwrap_or(false),
        is_h_digraph: d.is_h_digraph_idx(&all_arcs),
        obstruction_free: free,
        isolated: g.isolated_vertices(),
        partition_source: None,
        partition: None,
        no_partition: None,
        class_digraph: None,
        walk_preservative: None,
        walk_preservative_witness: None,
        classes: Vec::new(),
        theorems: Vec::new(),
    };

    let owned;
    let f = match supplied {
        Some(f) => {
            report.partition_source = Some("supplied".to_string());
            f
        }
        None => match HClassPartition::finest(d) {
            PartitionOutcome::Partition(p) => {
                report.partition_source = Some("finest".to_string());
                owned = p;
                &owned
            }
            PartitionOutcome::NoPartition(ev) => {
                report.no_partition = Some(ev.render());
                report.theorems = vec![classlema_status(d)];
                return report;
            }
        },
    };

    let c = ClassDigraph::build(d, f);
    let classes: Vec<Vec<(String, String)>> = f
        .class_names()
        .iter()
        .map(|n| f.class_arcs(d, n).unwrap())
        .collect();
    report.partition = Some(PartitionSummary {
        class_count: f.class_count(),
        classes,
    });
    let cg = c.digraph();
    report.class_digraph = Some(ClassDigraphSummary {
        arcs: cg
            .arcs()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        symmetric: cg.is_symmetric(),
        sinks: cg.sinks(),
        min_nonloop_cycle: cg.min_nonloop_cycle_length(),
    });
    let wp = walk_preservative_violation(d, f, &c);
    report.walk_preservative = Some(wp.is_none());
    report.walk_preservative_witness = wp.map(|v| {
        format!(
            "vertex {} of {} cannot reach {} inside its class",
            v.vertex, v.from, v.to
        )
    });
    report.classes = class_predicates(d, f);
    report.theorems = theorem_statuses(d, f, &c, &report);
    report
}

fn classlema_status(d: &ColoredDigraph) -> TheoremStatus {
    match kernel_by_h_walks(d) {
        Ok(_) => TheoremStatus {
            theorem: TheoremTag::ClassLema,
            status: Applicability::Applicable,
            detail: "every vertex reaches an obstruction-free vertex by a clean walk".to_string(),
        },
        Err(e) => TheoremStatus {
            theorem: TheoremTag::ClassLema,
            status: Applicability::NotApplicable,
            detail: e.to_string(),
        },
    }
}

fn theorem_statuses(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    report: &AnalysisReport,
) -> Vec<TheoremStatus> {
    let mut out = vec![classlema_status(d)];
    let wp = report.walk_preservative == Some(true);
    let wp_witness = report.walk_preservative_witness.clone().unwrap_or_default();
    let no_isolated = report.isolated.is_empty();
    let cg = report.class_digraph.as_ref().unwrap();
    let all_unilateral_sinkfree = report.classes.iter().all(|r| r.unilateral && !r.has_sink);
    let all_strong = report.classes.iter().all(|r| r.strongly_connected);
    let all_strong_free = all_strong
        && report
            .classes
            .iter()
            .all(|r| !r.obstruction_free_in_d.is_empty());

    let mut push = |theorem, status, detail: String| {
        out.push(TheoremStatus {
            theorem,
            status,
            detail,
        })
    };

    // prop41 and thm52: structural part is the sink and cycle condition
    if !wp {
        push(
            TheoremTag::Prop41,
            Applicability::NotApplicable,
            wp_witness.clone(),
        );
    } else if !cg.sinks.is_empty() {
        push(
            TheoremTag::Prop41,
            Applicability::NotApplicable,
            format!("class digraph has sinks: {:?}", cg.sinks),
        );
    } else {
        match try_small_class_kernels(d, f, c, TheoremTag::Prop41) {
            Some((s, k, l)) => push(
                TheoremTag::Prop41,
                Applicability::Applicable,
                format!("S={s:?} is a ({k},{l})-kernel of the class digraph"),
            ),
            None => push(
                TheoremTag::Prop41,
                Applicability::NeedsClassKernel,
                format!(
                    "needs a (k,l)-kernel of the class digraph with k <= {} satisfying the in-neighborhood condition",
                    cg.min_nonloop_cycle.map_or("inf".to_string(), |c| c.to_string())
                ),
            ),
        }
    }

    for (tag, extra_ok, extra_msg) in [
        (TheoremTag::Prop42, no_isolated, "isolated vertices present"),
        (TheoremTag::Prop43, no_isolated, "isolated vertices present"),
    ] {
        if !wp {
            push(tag, Applicability::NotApplicable, wp_witness.clone());
        } else if !extra_ok {
            push(tag, Applicability::NotApplicable, extra_msg.to_string());
        } else {
            match try_small_class_kernels(d, f, c, tag) {
                Some((s, k, l)) => push(
                    tag,
                    Applicability::Applicable,
                    format!("S={s:?} works with (k,l)=({k},{l})"),
                ),
                None => push(
                    tag,
                    Applicability::NeedsClassKernel,
                    "no suitable small class kernel found automatically".to_string(),
                ),
            }
        }
    }

    match try_small_class_kernels(d, f, c, TheoremTag::Prop44) {
        Some((s, k, l)) => push(
            TheoremTag::Prop44,
            Applicability::Applicable,
            format!("S={s:?} is a ({k},{l})-kernel of strongly connected classes with obstruction-free vertices"),
        ),
        None => push(
            TheoremTag::Prop44,
            Applicability::NeedsClassKernel,
            "needs a (k,l)-kernel (k >= 3) of strongly connected classes with obstruction-free vertices"
                .to_string(),
        ),
    }

    if !wp {
        push(
            TheoremTag::Thm51,
            Applicability::NotApplicable,
            wp_witness.clone(),
        );
    } else {
        match try_small_class_kernels(d, f, c, TheoremTag::Thm51) {
            Some((s, k, l)) => push(
                TheoremTag::Thm51,
                Applicability::Applicable,
                format!("S={s:?} works with (k,l)=({k},{l})"),
            ),
            None => push(
                TheoremTag::Thm51,
                Applicability::NeedsClassKernel,
                "needs an independent l-absorbent class set with empty proper out-neighborhood"
                    .to_string(),
            ),
        }
    }

    if !report.strongly_connected {
        push(
            TheoremTag::Thm52,
            Applicability::NotApplicable,
            "digraph is not strongly connected".to_string(),
        );
    } else if report.is_h_digraph {
        push(
            TheoremTag::Thm52,
            Applicability::Applicable,
            "whole digraph is obstruction-free: any kernel by paths works for every (k,l)"
                .to_string(),
        );
    } else if !wp {
        push(
            TheoremTag::Thm52,
            Applicability::NotApplicable,
            wp_witness.clone(),
        );
    } else {
        match try_small_class_kernels(d, f, c, TheoremTag::Prop41) {
            Some((s, k, l)) => push(
                TheoremTag::Thm52,
                Applicability::Applicable,
                format!("S={s:?} is a ({k},{l})-kernel of the class digraph"),
            ),
            None => push(
                TheoremTag::Thm52,
                Applicability::NeedsClassKernel,
                "needs a (k,l)-kernel of the class digraph".to_string(),
            ),
        }
    }

    if !wp {
        push(
            TheoremTag::Thm53,
            Applicability::NotApplicable,
            wp_witness.clone(),
        );
    } else if all_unilateral_sinkfree {
        push(
            TheoremTag::Thm53,
            Applicability::Applicable,
            "all classes unilateral and sink-free; class kernels are searched automatically (k >= 3)"
                .to_string(),
        );
    } else {
        push(
            TheoremTag::Thm53,
            Applicability::NotApplicable,
            "some class is not unilateral or has a sink".to_string(),
        );
    }

    if all_strong {
        push(
            TheoremTag::Thm54,
            Applicability::Applicable,
            "all classes strongly connected: every k >= 2 with l >= k+1".to_string(),
        );
    } else {
        push(
            TheoremTag::Thm54,
            Applicability::NotApplicable,
            "some class is not strongly connected".to_string(),
        );
    }

    if all_strong_free {
        push(
            TheoremTag::Thm55,
            Applicability::Applicable,
            "all classes strongly connected with obstruction-free vertices: every k >= 2"
                .to_string(),
        );
    } else {
        push(
            TheoremTag::Thm55,
            Applicability::NotApplicable,
            "some class lacks strong connectivity or an obstruction-free vertex".to_string(),
        );
    }

    out
}

/// Search a small grid of (k,l) for a class kernel that makes the given
/// construction's per-S hypotheses pass. Only used for reporting.
fn try_small_class_kernels(
    d: &ColoredDigraph,
    f: &HClassPartition,
    c: &ClassDigraph,
    tag: TheoremTag,
) -> Option<(BTreeSet<String>, usize, usize)> {
    if c.digraph().vertex_count() > 12 {
        return None;
    }
    let kmin = match tag {
        TheoremTag::Prop43 | TheoremTag::Prop44 => 3,
        _ => 2,
    };
    for k in kmin..=4 {
        for l in 1..=4 {
            let kernels = brute_force_kl_kernels(c.digraph(), k, l, SearchMode::All, 12).ok()?;
            for s in kernels.into_iter().take(20) {
                let ok = match tag {
                    TheoremTag::Prop41 => prop41_inner(d, f, c, &s, k, l, tag, true).is_ok(),
                    TheoremTag::Prop42 => construct_prop42(d, f, c, &s, k, l).is_ok(),
                    TheoremTag::Prop43 => construct_prop43(d, f, c, &s, k, l).is_ok(),
                    TheoremTag::Prop44 => construct_prop44(d, f, c, &s, k, l).is_ok(),
                    TheoremTag::Thm51 => construct_thm51(d, f, c, &s, k, l).is_ok(),
                    _ => false,
                };
                if ok {
                    return Some((s, k, l));
                }
            }
        }
    }
    None
}
