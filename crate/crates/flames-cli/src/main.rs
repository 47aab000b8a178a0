//! Command-line driver: builds minimum connectivity-preserving flames with
//! certificates, verifies certificates, analyzes separations and regions,
//! generates random instances, and runs the lemma checkers.
//!
//! Exit codes: 0 on success/pass, 1 on verification failure, 2 on
//! usage/parse/input errors.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flames::digraph::{RootedDigraph, Vid};
use flames::errors::Error;
use flames::io::{self, Format};
use flames::oracle::{self, LemmaId, LemmaVerdict};

#[derive(Parser)]
#[command(name = "flames", version, about = "Minimum connectivity-preserving spanning subdigraphs with per-vertex separator certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or verify large vertex-flames.
    Flame {
        #[command(subcommand)]
        cmd: FlameCmd,
    },
    /// Inspect separations and regions of single vertices.
    Analyze {
        #[command(subcommand)]
        cmd: AnalyzeCmd,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        cmd: GenCmd,
    },
    /// Run the exhaustive lemma checkers.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
}

#[derive(Subcommand)]
enum FlameCmd {
    /// Reduce the input to a minimum flame, run the stepwise constructor,
    /// certify, and print a run report.
    Build {
        input: PathBuf,
        /// Vertex order for the constructor: comma-separated ids or
        /// `seed:<n>` for a seeded shuffle (default: id order).
        #[arg(long)]
        order: Option<String>,
        /// Write the certificate JSON here.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
        /// Write a DOT rendering (deleted edges dashed, certificate paths
        /// colored) here.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        format: String,
    },
    /// Verify a certificate against a digraph, independently of how it was
    /// produced.
    Verify {
        input: PathBuf,
        cert: PathBuf,
        #[arg(long, default_value = "auto")]
        format: String,
    },
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Print κ and the extreme separations of a vertex.
    Seps {
        input: PathBuf,
        vertex: String,
        #[arg(long, default_value = "auto")]
        format: String,
    },
    /// Print the largest bubble and smallest anti-bubble of a vertex.
    Bubbles {
        input: PathBuf,
        vertex: String,
        #[arg(long, default_value = "auto")]
        format: String,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Seeded random rooted digraph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Check one lemma on seeded random instances.
    Check {
        /// One of: no_collapse, bubble_unite, pym_shape, aug_walk,
        /// g_quasi_add_one, linked_preserved, quasi_preserved,
        /// largest_emsep.
        #[arg(long)]
        lemma: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        /// Number of seeds to try (seeds 0..count).
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
}

fn detect_format(path: &Path, flag: &str) -> Result<Format, Error> {
    match flag {
        "json" => Ok(Format::Json),
        "edgelist" => Ok(Format::EdgeList),
        "auto" => Ok(match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::EdgeList,
        }),
        other => Err(Error::PreconditionViolated(format!(
            "unknown format {other} (expected json, edgelist or auto)"
        ))),
    }
}

fn read_digraph(path: &Path, flag: &str) -> Result<RootedDigraph, Error> {
    let format = detect_format(path, flag)?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
    io::parse_digraph(&text, format)
}

fn parse_order(d: &RootedDigraph, spec: Option<&str>) -> Result<Vec<Vid>, Error> {
    let default: Vec<Vid> = d.vids_except_root().collect();
    let Some(spec) = spec else { return Ok(default) };
    if let Some(seed) = spec.strip_prefix("seed:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| Error::PreconditionViolated(format!("bad order seed {seed}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order = default;
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        return Ok(order);
    }
    spec.split(',')
        .map(|name| d.vid(name.trim()))
        .collect::<Result<Vec<Vid>, Error>>()
}

fn names(d: &RootedDigraph, set: &BTreeSet<Vid>) -> String {
    format!("{{{}}}", d.names_of(set).join(","))
}

fn cmd_build(
    input: &Path,
    order: Option<&str>,
    emit_cert: Option<&Path>,
    emit_dot: Option<&Path>,
    format: &str,
) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let d = read_digraph(input, format)?;
    let reduced = flames::flame::lovasz_reduce(&d)?;
    let order = parse_order(&reduced, order)?;
    let (l_final, _state) = flames::flame::omega_construct(&reduced, &order)?;
    let cert = flames::flame::certify(&d, &l_final)?;
    let verification = flames::flame::verify_certificate(&cert);
    let report = io::RunReport::build(&d, &l_final, &verification, started.elapsed())?;
    if let Some(path) = emit_cert {
        std::fs::write(path, io::serialize_certificate(&cert))
            .map_err(|e| Error::Internal(format!("writing {}: {e}", path.display())))?;
    }
    if let Some(path) = emit_dot {
        std::fs::write(path, io::dot_certificate(&cert))
            .map_err(|e| Error::Internal(format!("writing {}: {e}", path.display())))?;
    }
    println!("{}", report.to_json());
    if verification.pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("certificate verification failed");
        Ok(ExitCode::from(1))
    }
}

fn cmd_verify(input: &Path, cert: &Path, format: &str) -> Result<ExitCode, Error> {
    let d = read_digraph(input, format)?;
    let text = std::fs::read_to_string(cert)
        .map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", cert.display()) })?;
    let report = io::verify_certificate_text(&d, &text)?;
    for problem in &report.global {
        println!("global: FAIL ({problem})");
    }
    for (&v, verdict) in &report.per_vertex {
        if verdict.ok {
            println!("{}: ok", d.name(v));
        } else {
            let reason = verdict.failure.as_deref().unwrap_or("invalid");
            match &verdict.evidence {
                Some(path) => {
                    let shown: Vec<&str> = path.iter().map(|&u| d.name(u)).collect();
                    println!("{}: FAIL ({reason}; {})", d.name(v), shown.join("->"));
                }
                None => println!("{}: FAIL ({reason})", d.name(v)),
            }
        }
    }
    if report.pass() {
        println!("certificate: pass");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("certificate: FAIL");
        Ok(ExitCode::from(1))
    }
}

fn cmd_seps(input: &Path, vertex: &str, format: &str) -> Result<ExitCode, Error> {
    let d = read_digraph(input, format)?;
    let v = d.vid(vertex)?;
    let result = flames::menger::kappa_and_system(&d, v)?;
    println!(
        "v={} kappa={} S={} T={}",
        vertex,
        result.kappa,
        names(&d, &result.near_root.set),
        names(&d, &result.near_sink.set),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_bubbles(input: &Path, vertex: &str, format: &str) -> Result<ExitCode, Error> {
    let d = read_digraph(input, format)?;
    let v = d.vid(vertex)?;
    let bubble = flames::bubbles::largest_bubble(&d, v)?;
    let anti = flames::bubbles::smallest_anti_bubble(&d, v)?;
    println!(
        "v={} B={} A={}",
        vertex,
        names(&d, &bubble.set),
        names(&d, &anti.set),
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(n: usize, p: f64, seed: u64, out: Option<&Path>, format: &str) -> Result<ExitCode, Error> {
    let format = match format {
        "json" => Format::Json,
        "edgelist" => Format::EdgeList,
        other => {
            return Err(Error::PreconditionViolated(format!(
                "unknown format {other} (expected json or edgelist)"
            )))
        }
    };
    let d = oracle::gen_random(n, p, seed)?;
    let text = io::serialize_digraph(&d, format);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Internal(format!("writing {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(lemma: &str, n: usize, seeds: u64) -> Result<ExitCode, Error> {
    let id: LemmaId = lemma.parse()?;
    let mut passed = 0u64;
    let mut skipped = 0u64;
    for seed in 0..seeds {
        let instance = match oracle::sample_instance(id, n, seed)? {
            Some(inst) => inst,
            None => {
                skipped += 1;
                continue;
            }
        };
        match oracle::lemma_check(&instance) {
            Ok(LemmaVerdict::Pass) => passed += 1,
            Ok(LemmaVerdict::Fail { note }) => {
                eprintln!("seed {seed}: FAIL: {note}");
                eprintln!(
                    "counterexample digraph: {}",
                    io::serialize_digraph(instance.digraph(), Format::Json)
                );
                println!("lemma {}: FAIL at seed {seed}", id.name());
                return Ok(ExitCode::from(1));
            }
            Err(Error::HypothesisViolated(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    println!("lemma {}: {passed} pass, {skipped} skip", id.name());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Flame { cmd } => match cmd {
            FlameCmd::Build { input, order, emit_cert, emit_dot, format } => cmd_build(
                &input,
                order.as_deref(),
                emit_cert.as_deref(),
                emit_dot.as_deref(),
                &format,
            ),
            FlameCmd::Verify { input, cert, format } => cmd_verify(&input, &cert, &format),
        },
        Cmd::Analyze { cmd } => match cmd {
            AnalyzeCmd::Seps { input, vertex, format } => cmd_seps(&input, &vertex, &format),
            AnalyzeCmd::Bubbles { input, vertex, format } => {
                cmd_bubbles(&input, &vertex, &format)
            }
        },
        Cmd::Gen { cmd } => match cmd {
            GenCmd::Random { n, p, seed, out, format } => {
                cmd_gen(n, p, seed, out.as_deref(), &format)
            }
        },
        Cmd::Oracle { cmd } => match cmd {
            OracleCmd::Check { lemma, n, seeds } => cmd_oracle(&lemma, n, seeds),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
