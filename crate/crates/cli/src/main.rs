//! Command-line front end: validate and inspect instances, compute class
//! partitions and class digraphs, report which constructions apply, build
//! certified kernels, and verify candidate sets.
//!
//! Exit codes: 0 success / property holds; 1 property fails, hypothesis
//! failure, no partition, or nothing found; 2 malformed input or invalid
//! parameters.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hkernel_core::{
    analyze, class_digraph_dot, construct_brute, construct_classlema, construct_prop41,
    construct_prop42, construct_prop43, construct_prop44, construct_thm51, construct_thm52,
    construct_thm53, construct_thm54, construct_thm55, construct_unchecked, emit_certificate,
    emit_instance, fixtures, generate, parse_instance, verify_klh_kernel, CertificateDocument,
    ClassDigraph, ColoredDigraph, ConstructError, Error as CoreError, GenFamily, HClassPartition,
    InstanceDocument, KernelCertificate, PartitionOutcome, SearchMode, TheoremTag,
    DEFAULT_BRUTE_BOUND,
};

#[derive(Parser)]
#[command(
    name = "hkernel",
    about = "Kernels by walks in arc-colored digraphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance file and report whether it is well-formed.
    Validate { file: PathBuf },
    /// Print the class partition (the file's own, or the finest computed one).
    Partition { file: PathBuf },
    /// Print the class digraph, optionally as DOT text.
    ClassDigraph {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Report every structural predicate and which constructions apply.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build a kernel by walks with the given method and write a certificate.
    Kernel {
        file: PathBuf,
        #[arg(long)]
        method: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Comma-separated class names (e.g. F6,F9) to use as the class kernel.
        #[arg(long)]
        class_kernel: Option<String>,
        /// Skip hypothesis checks; the oracle still fills the verification block.
        #[arg(long)]
        unchecked: bool,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a candidate vertex set against the kernel properties.
    Verify {
        file: PathBuf,
        /// Comma-separated vertex ids.
        #[arg(long)]
        set: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    /// Fixture instances.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
    /// Emit a reproducible generated instance.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    /// Write every fixture instance into a directory.
    Emit { dir: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

const OK: u8 = 0;
const FAIL: u8 = 1;
const INPUT: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            INPUT
        }
    };
    ExitCode::from(code)
}

fn brute_bound() -> usize {
    std::env::var("HKERNEL_BRUTE_BOUND")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BRUTE_BOUND)
}

fn load(file: &Path) -> Result<InstanceDocument, String> {
    let bytes = fs::read(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_instance(&bytes).map_err(|e| e.to_string())
}

/// The partition the instance designates: its own when present, the
/// finest otherwise. The error carries the no-partition explanation.
fn instance_partition(
    d: &ColoredDigraph,
    supplied: Option<HClassPartition>,
) -> Result<(HClassPartition, &'static str), String> {
    if let Some(p) = supplied {
        return Ok((p, "supplied"));
    }
    match HClassPartition::finest(d) {
        PartitionOutcome::Partition(p) => Ok((p, "finest")),
        PartitionOutcome::NoPartition(ev) => Err(ev.render()),
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Validate { file } => {
            let doc = load(&file)?;
            let (d, partition) = doc.build().map_err(|e| e.to_string())?;
            println!(
                "valid instance: {} vertices, {} arcs, {} colors{}",
                d.digraph().vertex_count(),
                d.digraph().arc_count(),
                d.pattern().color_count(),
                if partition.is_some() {
                    ", explicit partition"
                } else {
                    ""
                },
            );
            Ok(OK)
        }
        Command::Partition { file } => {
            let doc = load(&file)?;
            let (d, supplied) = doc.build().map_err(|e| e.to_string())?;
            match instance_partition(&d, supplied) {
                Ok((p, source)) => {
                    println!("{source} partition with {} classes:", p.class_count());
                    for name in p.class_names() {
                        let arcs = p.class_arcs(&d, &name).unwrap();
                        let rendered: Vec<String> =
                            arcs.iter().map(|(u, v)| format!("({u},{v})")).collect();
                        println!("  {name}: {}", rendered.join(" "));
                    }
                    Ok(OK)
                }
                Err(explanation) => {
                    println!("{explanation}");
                    Ok(FAIL)
                }
            }
        }
        Command::ClassDigraph { file, dot } => {
            let doc = load(&file)?;
            let (d, supplied) = doc.build().map_err(|e| e.to_string())?;
            match instance_partition(&d, supplied) {
                Ok((p, _)) => {
                    let c = ClassDigraph::build(&d, &p);
                    if dot {
                        print!("{}", class_digraph_dot(&c));
                    } else {
                        println!("classes: {}", p.class_names().join(" "));
                        for (a, b) in c.digraph().arcs() {
                            let w = c.witness(a, b).unwrap();
                            println!(
                                "  {a} -> {b}   [({},{}) then ({},{})]",
                                w.0 .0, w.0 .1, w.1 .0, w.1 .1
                            );
                        }
                    }
                    Ok(OK)
                }
                Err(explanation) => {
                    println!("{explanation}");
                    Ok(FAIL)
                }
            }
        }
        Command::Analyze { file, format } => {
            let doc = load(&file)?;
            let (d, supplied) = doc.build().map_err(|e| e.to_string())?;
            let report = analyze(&d, supplied.as_ref());
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
                Format::Text => render_report(&report),
            }
            Ok(OK)
        }
        Command::Kernel {
            file,
            method,
            k,
            l,
            class_kernel,
            unchecked,
            output,
        } => {
            let doc = load(&file)?;
            let method =
                TheoremTag::parse(&method).ok_or_else(|| format!("unknown method `{method}`"))?;
            let (d, supplied) = doc.build().map_err(|e| e.to_string())?;
            run_kernel(
                &doc,
                &d,
                supplied,
                method,
                k,
                l,
                class_kernel,
                unchecked,
                output,
            )
        }
        Command::Verify { file, set, k, l } => {
            let doc = load(&file)?;
            let (d, _) = doc.build().map_err(|e| e.to_string())?;
            let set: BTreeSet<String> = set.split(',').map(|s| s.trim().to_string()).collect();
            match verify_klh_kernel(&d, &set, k, l).map_err(|e| e.to_string())? {
                None => {
                    println!("({k},{l})-kernel by walks: yes");
                    Ok(OK)
                }
                Some(violation) => {
                    println!("({k},{l})-kernel by walks: no — {}", violation.render());
                    Ok(FAIL)
                }
            }
        }
        Command::Fixtures { action } => match action {
            FixturesAction::Emit { dir } => {
                fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
                for (name, doc) in fixtures() {
                    let path = dir.join(format!("{name}.json"));
                    fs::write(&path, emit_instance(&doc)).map_err(|e| e.to_string())?;
                    println!("wrote {}", path.display());
                }
                Ok(OK)
            }
        },
        Command::Gen {
            family,
            seed,
            size,
            output,
        } => {
            let family =
                GenFamily::parse(&family).ok_or_else(|| format!("unknown family `{family}`"))?;
            let doc = generate(family, seed, size);
            let bytes = emit_instance(&doc);
            match output {
                Some(path) => fs::write(&path, bytes).map_err(|e| e.to_string())?,
                None => print!("{}", String::from_utf8(bytes).unwrap()),
            }
            Ok(OK)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_kernel(
    doc: &InstanceDocument,
    d: &ColoredDigraph,
    supplied: Option<HClassPartition>,
    method: TheoremTag,
    k: Option<usize>,
    l: Option<usize>,
    class_kernel: Option<String>,
    unchecked: bool,
    output: Option<PathBuf>,
) -> Result<u8, String> {
    let k = k.unwrap_or(2);
    let l = l.unwrap_or(match method {
        TheoremTag::Thm54 => k + 1,
        _ => 1,
    });
    let finds_own_kernel = matches!(
        method,
        TheoremTag::ClassLema
            | TheoremTag::Brute
            | TheoremTag::Thm53
            | TheoremTag::Thm54
            | TheoremTag::Thm55
    );
    if class_kernel.is_some() && finds_own_kernel {
        return Err(format!(
            "method {method} derives its own class kernel; drop --class-kernel"
        ));
    }
    // methods that bypass the partition machinery
    let bare = matches!(method, TheoremTag::ClassLema | TheoremTag::Brute);
    let (partition, source) = if bare {
        (None, None)
    } else {
        match instance_partition(d, supplied) {
            Ok((p, source)) => (Some(p), Some(source)),
            Err(explanation) => {
                println!("{explanation}");
                return Ok(FAIL);
            }
        }
    };

    let result: Result<KernelCertificate, ConstructError> = match method {
        TheoremTag::ClassLema => construct_classlema(d),
        TheoremTag::Brute => construct_brute(d, k, l, brute_bound()),
        _ => {
            let f = partition.as_ref().unwrap();
            let c = ClassDigraph::build(d, f);
            let s = match &class_kernel {
                Some(names) => names.split(',').map(|s| s.trim().to_string()).collect(),
                None => auto_class_kernel(&c, method, k, l)?,
            };
            if unchecked {
                construct_unchecked(d, f, &c, method, &s, k, l)
            } else {
                match method {
                    TheoremTag::Prop41 => construct_prop41(d, f, &c, &s, k, l),
                    TheoremTag::Prop42 => construct_prop42(d, f, &c, &s, k, l),
                    TheoremTag::Prop43 => construct_prop43(d, f, &c, &s, k, l),
                    TheoremTag::Prop44 => construct_prop44(d, f, &c, &s, k, l),
                    TheoremTag::Thm51 => construct_thm51(d, f, &c, &s, k, l),
                    TheoremTag::Thm52 => construct_thm52(d, f, &c, &s, k, l),
                    TheoremTag::Thm53 => construct_thm53(d, f, &c, k, l, brute_bound()),
                    TheoremTag::Thm54 => construct_thm54(d, f, &c, k, l),
                    TheoremTag::Thm55 => construct_thm55(d, f, &c, k),
                    TheoremTag::ClassLema | TheoremTag::Brute => unreachable!(),
                }
            }
        }
    };

    match result {
        Ok(mut cert) => {
            cert.partition_source = source.map(|s| s.to_string());
            let cert_doc = CertificateDocument::from_certificate(&cert, doc.digest());
            let bytes = emit_certificate(&cert_doc);
            match output {
                Some(path) => {
                    fs::write(&path, &bytes).map_err(|e| e.to_string())?;
                    println!(
                        "certificate: ({},{})-kernel by walks via {} — verified: {}",
                        cert.k,
                        cert.l,
                        cert.theorem,
                        cert.verified()
                    );
                }
                None => print!("{}", String::from_utf8(bytes).unwrap()),
            }
            Ok(if cert.verified() { OK } else { FAIL })
        }
        Err(ConstructError::Hypothesis {
            hypothesis,
            witness,
        }) => {
            println!("hypothesis failed: {hypothesis}: {witness}");
            Ok(FAIL)
        }
        Err(ConstructError::NotFound(msg)) => {
            println!("not found: {msg}");
            Ok(FAIL)
        }
        Err(ConstructError::Core(e)) => match e {
            CoreError::Precondition(msg) => Err(format!("precondition: {msg}")),
            other => Err(other.to_string()),
        },
    }
}

/// Pick a class kernel when none is supplied: terminal classes for the
/// empty-out-neighborhood constructions, the greedy symmetric kernel when
/// the class digraph is symmetric, exhaustive search otherwise.
fn auto_class_kernel(
    c: &ClassDigraph,
    method: TheoremTag,
    k: usize,
    l: usize,
) -> Result<BTreeSet<String>, String> {
    let g = c.digraph();
    match method {
        TheoremTag::Prop42 | TheoremTag::Thm51 => Ok(g
            .vertices()
            .filter(|v| g.out_neighbors(v).unwrap().all(|w| w == *v))
            .map(|v| v.to_string())
            .collect()),
        TheoremTag::Thm53 | TheoremTag::Thm54 | TheoremTag::Thm55 => Ok(BTreeSet::new()),
        _ => {
            if g.is_symmetric() && l >= k.saturating_sub(1) {
                return hkernel_core::symmetric_k_kernel(g, k).map_err(|e| e.to_string());
            }
            let found =
                hkernel_core::brute_force_kl_kernels(g, k, l, SearchMode::First, brute_bound())
                    .map_err(|e| e.to_string())?;
            found
                .into_iter()
                .next()
                .ok_or_else(|| format!("class digraph has no ({k},{l})-kernel to use as S"))
        }
    }
}

fn render_report(report: &hkernel_core::AnalysisReport) {
    println!(
        "instance: {} vertices, {} arcs; strongly connected: {}; obstruction-free digraph: {}",
        report.vertex_count, report.arc_count, report.strongly_connected, report.is_h_digraph
    );
    println!(
        "obstruction-free vertices: {}",
        render_set(&report.obstruction_free)
    );
    if !report.isolated.is_empty() {
        println!("isolated vertices: {}", render_set(&report.isolated));
    }
    match (&report.partition, &report.no_partition) {
        (Some(p), _) => {
            println!(
                "partition ({}): {} classes",
                report.partition_source.as_deref().unwrap_or("?"),
                p.class_count
            );
        }
        (None, Some(explanation)) => {
            println!("{explanation}");
        }
        _ => {}
    }
    if let Some(cg) = &report.class_digraph {
        println!(
            "class digraph: {} arcs; symmetric: {}; sinks: {}; min non-loop cycle: {}",
            cg.arcs.len(),
            cg.symmetric,
            render_set(&cg.sinks),
            cg.min_nonloop_cycle
                .map_or("none".to_string(), |c| c.to_string())
        );
    }
    if let Some(wp) = report.walk_preservative {
        match &report.walk_preservative_witness {
            Some(witness) => println!("walk-preservative: {wp} ({witness})"),
            None => println!("walk-preservative: {wp}"),
        }
    }
    for class in &report.classes {
        println!(
            "  {}: strongly connected: {}, unilateral: {}, has sink: {}, obstruction-free: {}",
            class.class,
            class.strongly_connected,
            class.unilateral,
            class.has_sink,
            render_set(&class.obstruction_free_in_d)
        );
    }
    println!("constructions:");
    for t in &report.theorems {
        let status = match t.status {
            hkernel_core::Applicability::Applicable => "applicable",
            hkernel_core::Applicability::NeedsClassKernel => "needs-class-kernel",
            hkernel_core::Applicability::NotApplicable => "not-applicable",
        };
        println!("  {:9} {status}: {}", t.theorem.to_string(), t.detail);
    }
}

fn render_set(s: &BTreeSet<String>) -> String {
    if s.is_empty() {
        "(none)".to_string()
    } else {
        s.iter().cloned().collect::<Vec<_>>().join(",")
    }
}
