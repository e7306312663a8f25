//! Kernels by walks in arc-colored digraphs.
//!
//! A digraph `D` is colored by the vertices of a pattern digraph `H`; a
//! walk in `D` picks up an obstruction wherever consecutive arc colors are
//! not an arc of `H`, and the cost of an open walk is its obstruction
//! count plus one. A (k,l)-kernel by walks is a vertex set that no walk of
//! cost below k joins internally and that every outside vertex reaches at
//! cost at most l.
//!
//! The crate computes the finest class partition of the arc set (two
//! consecutive arcs share a class exactly when their colors are
//! compatible), builds the class digraph, and applies a family of
//! constructive results that turn kernels of the class digraph into
//! kernels by walks of the host digraph, certifying every output against
//! an independent brute-force oracle.

pub mod coloring;
pub mod construct;
pub mod digraph;
pub mod error;
pub mod generate;
pub mod hclass;
pub mod instance;
pub mod kernels;
pub mod oracle;

pub use coloring::{alternation_pattern, loops_only_pattern, ColoredDigraph, PatternDigraph, Walk};
pub use construct::{
    analyze, construct_brute, construct_classlema, construct_prop41, construct_prop42,
    construct_prop43, construct_prop44, construct_thm51, construct_thm52, construct_thm53,
    construct_thm54, construct_thm55, construct_unchecked, kernel_by_h_walks, AnalysisReport,
    Applicability, ConstructError, KernelCertificate, TheoremTag, VerificationOutcome,
};
pub use digraph::{Digraph, StrongComponents};
pub use error::{Error, Result};
pub use generate::{generate, GenFamily, GeneratedInstance};
pub use hclass::{
    class_predicates, validate_partition, walk_preservative_violation, ArcPair,
    BiconditionalViolation, ClassDigraph, ClassReport, HClassPartition, NoPartitionEvidence,
    PartitionOutcome, WalkPreservativeViolation,
};
pub use instance::{
    class_digraph_dot, emit_certificate, emit_instance, fixtures, parse_certificate,
    parse_instance, CertificateDocument, InstanceDocument, InstanceError, Metadata,
};
pub use kernels::{
    brute_force_kl_kernels, constrained_kernel_by_paths, kernel_by_paths, symmetric_k_kernel,
    transitive_kernel, verify_kernel_by_paths, ConstrainedKernel, PathKernelViolation, SearchMode,
    VertexSet, DEFAULT_BRUTE_BOUND,
};
pub use oracle::{
    exhaustive_klh_kernels, h_walk_reachable, min_h_length, verify_k_independent_by_walks,
    verify_klh_kernel, verify_l_absorbent_by_walks, ArcStateGraph, KernelViolation,
};
