//! File formats: the JSON instance document (pattern + colored digraph +
//! optional explicit partition), the certificate document, and the shipped
//! fixture instances.
//!
//! The canonical form of an instance sorts colors, pattern arcs, vertices
//! and arcs lexicographically and remaps partition indices accordingly;
//! partition classes keep their given order, since class names are
//! positional. Parsing always returns the canonical form, so parse after
//! emit is the identity.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coloring::{ColoredDigraph, PatternDigraph};
use crate::construct::{KernelCertificate, TheoremTag, VerificationOutcome};
use crate::error::Error as CoreError;
use crate::hclass::{ClassDigraph, HClassPartition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub pattern: PatternSection,
    pub digraph: DigraphSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSection {
    pub colors: Vec<String>,
    pub arcs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphSection {
    pub vertices: Vec<String>,
    pub arcs: Vec<ArcRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcRecord {
    pub from: String,
    pub to: String,
    pub color: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// Errors raised by documents: syntactic (with position) or semantic
/// (with a stable machine-readable code).
#[derive(Debug, Clone, Error)]
pub enum InstanceError {
    #[error("[parse] line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("[{code}] {message}")]
    Semantic { code: &'static str, message: String },
}

impl InstanceError {
    pub fn code(&self) -> &'static str {
        match self {
            InstanceError::Parse { .. } => "parse",
            InstanceError::Semantic { code, .. } => code,
        }
    }

    fn semantic(code: &'static str, message: impl Into<String>) -> Self {
        InstanceError::Semantic {
            code,
            message: message.into(),
        }
    }
}

fn core_to_semantic(e: CoreError) -> InstanceError {
    let code = match &e {
        CoreError::LoopNotAllowed(_) => "loop-arc",
        CoreError::UnknownColor(_) => "unknown-color",
        CoreError::ParallelArc(_, _) => "parallel-arc",
        CoreError::UnknownVertex(_) => "unknown-vertex",
        CoreError::EmptyColorSet => "empty-colors",
        CoreError::NotAPartition(_) => "bad-partition",
        _ => "invalid-instance",
    };
    InstanceError::semantic(code, e.to_string())
}

impl InstanceDocument {
    /// Construct the colored digraph and, when the document carries an
    /// explicit partition, validate and return it as well.
    pub fn build(&self) -> Result<(ColoredDigraph, Option<HClassPartition>), InstanceError> {
        let pattern = PatternDigraph::new(self.pattern.colors.clone(), self.pattern.arcs.clone())
            .map_err(|e| match e {
                // pattern vertices are colors, so name the code accordingly
                CoreError::UnknownVertex(c) => InstanceError::semantic(
                    "unknown-color",
                    format!("pattern arc uses unknown color `{c}`"),
                ),
                other => core_to_semantic(other),
            })?;
        let arcs: Vec<(String, String, String)> = self
            .digraph
            .arcs
            .iter()
            .map(|a| (a.from.clone(), a.to.clone(), a.color.clone()))
            .collect();
        let d = ColoredDigraph::new(self.digraph.vertices.clone(), arcs, pattern)
            .map_err(core_to_semantic)?;
        let partition = match &self.partition {
            None => None,
            Some(classes) => {
                let mut seen = BTreeSet::new();
                let as_arcs: Vec<Vec<(String, String)>> = classes
                    .iter()
                    .map(|class| {
                        class
                            .iter()
                            .map(|&i| {
                                let rec = self.digraph.arcs.get(i).ok_or_else(|| {
                                    InstanceError::semantic(
                                        "bad-partition",
                                        format!("arc index {i} out of range"),
                                    )
                                })?;
                                if !seen.insert(i) {
                                    return Err(InstanceError::semantic(
                                        "bad-partition",
                                        format!("arc index {i} appears twice"),
                                    ));
                                }
                                Ok((rec.from.clone(), rec.to.clone()))
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                if seen.len() != self.digraph.arcs.len() {
                    return Err(InstanceError::semantic(
                        "bad-partition",
                        "partition does not cover every arc",
                    ));
                }
                Some(HClassPartition::from_classes(&d, &as_arcs).map_err(core_to_semantic)?)
            }
        };
        Ok((d, partition))
    }

    /// Canonical form: sorted colors, pattern arcs, vertices and arcs;
    /// partition indices remapped to the sorted arc order (class order is
    /// preserved, inner lists sorted).
    pub fn canonicalize(&self) -> InstanceDocument {
        let mut doc = self.clone();
        doc.pattern.colors.sort();
        doc.pattern.colors.dedup();
        doc.pattern.arcs.sort();
        doc.pattern.arcs.dedup();
        doc.digraph.vertices.sort();
        doc.digraph.vertices.dedup();
        // stable mapping old arc index -> new arc index
        let mut order: Vec<usize> = (0..doc.digraph.arcs.len()).collect();
        order.sort_by(|&a, &b| doc.digraph.arcs[a].cmp(&doc.digraph.arcs[b]));
        let mut new_pos = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_pos[old] = new;
        }
        doc.digraph.arcs.sort();
        if let Some(partition) = &mut doc.partition {
            for class in partition.iter_mut() {
                for i in class.iter_mut() {
                    *i = new_pos[*i];
                }
                class.sort_unstable();
            }
        }
        doc
    }

    /// Content digest of the canonical form.
    pub fn digest(&self) -> String {
        let bytes = emit_instance(&self.canonicalize());
        hex::encode(Sha256::digest(&bytes))
    }

    /// Build a document from a colored digraph (canonical form).
    pub fn from_colored_digraph(
        d: &ColoredDigraph,
        partition: Option<&HClassPartition>,
        metadata: Option<Metadata>,
    ) -> InstanceDocument {
        InstanceDocument {
            pattern: PatternSection {
                colors: d.pattern().colors().map(|c| c.to_string()).collect(),
                arcs: d
                    .pattern()
                    .arcs()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect(),
            },
            digraph: DigraphSection {
                vertices: d.digraph().vertices().map(|v| v.to_string()).collect(),
                arcs: d
                    .arcs()
                    .map(|(u, v, c)| ArcRecord {
                        from: u.to_string(),
                        to: v.to_string(),
                        color: c.to_string(),
                    })
                    .collect(),
            },
            partition: partition.map(|p| p.as_arc_index_lists()),
            metadata,
        }
    }
}

/// Parse, validate, and canonicalize an instance document.
pub fn parse_instance(bytes: &[u8]) -> Result<InstanceDocument, InstanceError> {
    let doc: InstanceDocument =
        serde_json::from_slice(bytes).map_err(|e| InstanceError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    doc.build()?;
    Ok(doc.canonicalize())
}

/// Deterministic serialization: pretty JSON with a trailing newline.
pub fn emit_instance(doc: &InstanceDocument) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("documents serialize");
    out.push(b'\n');
    out
}

/// The certificate file: the instance digest it refers to, the parameters
/// and method, the kernel, and the oracle's verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub instance_digest: String,
    pub theorem: TheoremTag,
    pub k: usize,
    pub l: usize,
    pub kernel: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_kernel: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub isolated_appended: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition_source: Option<String>,
    pub verification: VerificationOutcome,
}

impl CertificateDocument {
    pub fn from_certificate(cert: &KernelCertificate, instance_digest: String) -> Self {
        CertificateDocument {
            instance_digest,
            theorem: cert.theorem,
            k: cert.k,
            l: cert.l,
            kernel: cert.kernel.iter().cloned().collect(),
            class_kernel: cert
                .class_kernel
                .as_ref()
                .map(|s| s.iter().cloned().collect()),
            isolated_appended: cert.isolated_appended.iter().cloned().collect(),
            partition_source: cert.partition_source.clone(),
            verification: cert.verification.clone(),
        }
    }
}

pub fn emit_certificate(cert: &CertificateDocument) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(cert).expect("certificates serialize");
    out.push(b'\n');
    out
}

pub fn parse_certificate(bytes: &[u8]) -> Result<CertificateDocument, InstanceError> {
    serde_json::from_slice(bytes).map_err(|e| InstanceError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// DOT rendering of a class digraph (convenience view; JSON is normative).
pub fn class_digraph_dot(c: &ClassDigraph) -> String {
    let mut s = String::from("digraph classes {\n");
    for v in c.digraph().vertices() {
        s.push_str(&format!("  \"{v}\";\n"));
    }
    for (a, b) in c.digraph().arcs() {
        s.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
    }
    s.push_str("}\n");
    s
}

fn doc(
    name: &str,
    provenance: &str,
    colors: &[&str],
    pattern_arcs: &[(&str, &str)],
    vertices: &[&str],
    arcs: &[(&str, &str, &str)],
    partition_by_color: bool,
) -> InstanceDocument {
    let mut document = InstanceDocument {
        pattern: PatternSection {
            colors: colors.iter().map(|c| c.to_string()).collect(),
            arcs: pattern_arcs
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        },
        digraph: DigraphSection {
            vertices: vertices.iter().map(|v| v.to_string()).collect(),
            arcs: arcs
                .iter()
                .map(|(u, v, c)| ArcRecord {
                    from: u.to_string(),
                    to: v.to_string(),
                    color: c.to_string(),
                })
                .collect(),
        },
        partition: None,
        metadata: Some(Metadata {
            name: Some(name.to_string()),
            provenance: Some(provenance.to_string()),
        }),
    };
    if partition_by_color {
        // one class per color, ordered like the color list
        let classes: Vec<Vec<usize>> = colors
            .iter()
            .map(|c| {
                arcs.iter()
                    .enumerate()
                    .filter(|(_, (_, _, ac))| ac == c)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        document.partition = Some(classes);
    }
    document.canonicalize()
}

/// The shipped instances:
///
/// * `fig1-style`: six single-color classes forming two chains into F6;
///   the singleton class set {F6} is 3-absorbent in the class digraph and
///   the kernel by paths of its class subdigraph absorbs only at cost 4.
/// * `fig2-style`: a valid but not walk-preservative partition (the class
///   F2 strands x3) whose class set {F5} is 4-absorbent while no kernel by
///   paths of the F5 subdigraph absorbs at cost 5.
/// * `two-blob`: two monochromatic triangles and one off-color bridge;
///   the strongly connected class F2 carries obstruction-free vertices.
/// * `conflict-triangle`: a colored 3-cycle whose arcs cannot be
///   partitioned at all.
pub fn fixtures() -> BTreeMap<String, InstanceDocument> {
    let reconstructed = "reconstructed to stated properties";
    let mut out = BTreeMap::new();
    out.insert(
        "fig1-style".to_string(),
        doc(
            "fig1-style",
            reconstructed,
            &["c1", "c2", "c3", "c4", "c5", "c6"],
            &[
                ("c1", "c1"),
                ("c2", "c2"),
                ("c3", "c3"),
                ("c4", "c4"),
                ("c5", "c5"),
                ("c6", "c6"),
            ],
            &["v0", "v1", "v2", "w0", "x4", "v5", "v6"],
            &[
                ("v0", "v1", "c1"),
                ("v1", "v2", "c2"),
                ("v2", "w0", "c3"),
                ("v5", "v6", "c4"),
                ("v6", "w0", "c5"),
                ("w0", "x4", "c6"),
            ],
            true,
        ),
    );
    out.insert(
        "fig2-style".to_string(),
        doc(
            "fig2-style",
            reconstructed,
            &["c1", "c2", "c3", "c4", "c5"],
            &[
                ("c1", "c1"),
                ("c2", "c2"),
                ("c3", "c3"),
                ("c4", "c4"),
                ("c5", "c5"),
            ],
            &["x1", "x2", "x3", "y", "z", "w", "x5"],
            &[
                ("x1", "x2", "c1"),
                ("x2", "x3", "c2"),
                ("x2", "y", "c2"),
                ("y", "z", "c3"),
                ("z", "w", "c4"),
                ("w", "x5", "c5"),
            ],
            true,
        ),
    );
    out.insert(
        "two-blob".to_string(),
        doc(
            "two-blob",
            "synthetic demo",
            &["1", "2", "3"],
            &[("1", "1"), ("2", "2"), ("3", "3")],
            &["a1", "a2", "a3", "w", "x", "z"],
            &[
                ("a1", "a2", "1"),
                ("a2", "a3", "1"),
                ("a3", "a1", "1"),
                ("w", "x", "2"),
                ("x", "z", "2"),
                ("z", "w", "2"),
                ("a1", "w", "3"),
            ],
            true,
        ),
    );
    out.insert(
        "conflict-triangle".to_string(),
        doc(
            "conflict-triangle",
            "synthetic demo",
            &["1", "2"],
            &[("1", "2"), ("2", "1")],
            &["a", "b", "c"],
            &[("a", "b", "1"), ("b", "c", "2"), ("c", "a", "1")],
            false,
        ),
    );
    out
}
