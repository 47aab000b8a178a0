//! Parsing, serialization, DOT export, and run reports.
//!
//! Digraph JSON: `{"root": "<id>", "vertices": ["<id>", ...], "edges":
//! [["u","v"], ...]}` with vertices and edges in canonical (sorted) order.
//! Edge-list text: first line `root <id>`, then one `u v` per line;
//! isolated non-root vertices are carried by `vertex <id>` lines so both
//! formats round-trip exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::digraph::{build_digraph, RootedDigraph, Vid};
use crate::errors::{Error, Result};
use crate::flame::{
    CertificateEntry, FlameCertificate, VerificationReport, VertexVerdict,
};
use crate::path::{Mode, Path, PathSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    EdgeList,
}

#[derive(Serialize, Deserialize)]
struct DigraphDoc {
    root: String,
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

fn json_error(e: &serde_json::Error) -> Error {
    Error::Parse { line: e.line(), msg: e.to_string() }
}

/// Parses a digraph; syntax errors carry line information, semantic errors
/// are those of `build_digraph`.
pub fn parse_digraph(input: &str, format: Format) -> Result<RootedDigraph> {
    match format {
        Format::Json => {
            let doc: DigraphDoc = serde_json::from_str(input).map_err(|e| json_error(&e))?;
            build_digraph(doc.vertices, &doc.edges, &doc.root)
        }
        Format::EdgeList => {
            let mut root: Option<String> = None;
            let mut vertices: BTreeSet<String> = BTreeSet::new();
            let mut edges = Vec::new();
            for (idx, line) in input.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let tokens: Vec<&str> = line.split_whitespace().collect();
                match (root.is_none(), tokens.as_slice()) {
                    (true, ["root", id]) => {
                        root = Some(id.to_string());
                        vertices.insert(id.to_string());
                    }
                    (true, _) => {
                        return Err(Error::Parse {
                            line: idx + 1,
                            msg: "expected first line 'root <id>'".into(),
                        })
                    }
                    (false, ["vertex", id]) => {
                        vertices.insert(id.to_string());
                    }
                    (false, [u, v]) => {
                        vertices.insert(u.to_string());
                        vertices.insert(v.to_string());
                        edges.push((u.to_string(), v.to_string()));
                    }
                    (false, _) => {
                        return Err(Error::Parse {
                            line: idx + 1,
                            msg: format!("expected 'u v', got '{line}'"),
                        })
                    }
                }
            }
            let root = root.ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
            build_digraph(vertices, &edges, &root)
        }
    }
}

/// Canonical serialization; `parse_digraph` inverts it bit-exactly.
pub fn serialize_digraph(d: &RootedDigraph, format: Format) -> String {
    let vertices: Vec<String> = d.vids().map(|v| d.name(v).to_string()).collect();
    let edges: Vec<(String, String)> = d
        .edges()
        .map(|(u, v)| (d.name(u).to_string(), d.name(v).to_string()))
        .collect();
    match format {
        Format::Json => {
            let doc = DigraphDoc { root: d.name(d.root()).to_string(), vertices, edges };
            serde_json::to_string(&doc).expect("digraph serializes")
        }
        Format::EdgeList => {
            let mut out = format!("root {}\n", d.name(d.root()));
            let incident: BTreeSet<Vid> = d.edges().flat_map(|(u, v)| [u, v]).collect();
            for v in d.vids() {
                if v != d.root() && !incident.contains(&v) {
                    out.push_str(&format!("vertex {}\n", d.name(v)));
                }
            }
            for (u, v) in d.edges() {
                out.push_str(&format!("{} {}\n", d.name(u), d.name(v)));
            }
            out
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    vertex: String,
    separator: Vec<String>,
    rv: bool,
    paths: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    root: String,
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    entries: Vec<EntryDoc>,
}

/// Serializes a certificate: the flame's edges plus one entry per vertex in
/// stable id order.
pub fn serialize_certificate(cert: &FlameCertificate) -> String {
    let l = &cert.flame;
    let entries = cert
        .entries
        .iter()
        .map(|(&v, entry)| EntryDoc {
            vertex: l.name(v).to_string(),
            separator: l.names_of(&entry.separator),
            rv: entry.rv_present,
            paths: entry
                .paths
                .iter()
                .map(|p| p.vertices().iter().map(|&u| l.name(u).to_string()).collect())
                .collect(),
        })
        .collect();
    let doc = CertificateDoc {
        root: l.name(l.root()).to_string(),
        vertices: l.vids().map(|v| l.name(v).to_string()).collect(),
        edges: l
            .edges()
            .map(|(u, v)| (l.name(u).to_string(), l.name(v).to_string()))
            .collect(),
        entries,
    };
    serde_json::to_string_pretty(&doc).expect("certificate serializes")
}

/// Parses and verifies a certificate against a base digraph. Malformed
/// entries (unknown vertices, paths leaving the subdigraph) become
/// verification failures rather than parse errors; only JSON syntax errors
/// are parse errors.
pub fn verify_certificate_text(d: &RootedDigraph, input: &str) -> Result<VerificationReport> {
    let doc: CertificateDoc = serde_json::from_str(input).map_err(|e| json_error(&e))?;
    let mut report = VerificationReport::default();
    let expected: BTreeSet<String> = d.vids().map(|v| d.name(v).to_string()).collect();
    let given: BTreeSet<String> = doc.vertices.iter().cloned().collect();
    if expected != given || doc.root != d.name(d.root()) {
        report.global.push("certificate vertex set differs from the base digraph".into());
        return Ok(report);
    }
    let mut edges = BTreeSet::new();
    for (u, v) in &doc.edges {
        let (Ok(uu), Ok(vv)) = (d.vid(u), d.vid(v)) else {
            report.global.push(format!("unknown edge endpoint {u} or {v}"));
            return Ok(report);
        };
        if !d.has_edge(uu, vv) {
            report.global.push(format!("edge {u} -> {v} is not in the base digraph"));
            return Ok(report);
        }
        edges.insert((uu, vv));
    }
    let edge_pairs: Vec<(String, String)> = doc.edges.clone();
    let l = match build_digraph(
        d.vids().map(|v| d.name(v).to_string()),
        &edge_pairs,
        d.name(d.root()),
    ) {
        Ok(l) => l,
        Err(e) => {
            report.global.push(format!("flame digraph is malformed: {e}"));
            return Ok(report);
        }
    };
    let mut cert = FlameCertificate {
        digraph: d.clone(),
        flame: l.clone(),
        entries: BTreeMap::new(),
    };
    let mut broken: BTreeMap<Vid, VertexVerdict> = BTreeMap::new();
    let mut seen_entries: BTreeSet<Vid> = BTreeSet::new();
    for entry in &doc.entries {
        let Ok(v) = d.vid(&entry.vertex) else {
            report.global.push(format!("entry for unknown vertex {}", entry.vertex));
            continue;
        };
        if !seen_entries.insert(v) {
            report.global.push(format!("duplicate entry for {}", entry.vertex));
            continue;
        }
        let verdict = assemble_entry(&l, entry).map(|e| cert.entries.insert(v, e));
        if let Err(reason) = verdict {
            broken.insert(
                v,
                VertexVerdict { ok: false, failure: Some(reason), evidence: None },
            );
        }
    }
    let mut verified = crate::flame::verify_certificate(&cert);
    for (v, verdict) in broken {
        verified.per_vertex.insert(v, verdict);
        // An entry that failed to assemble still counts as present.
        verified.global.retain(|g| g != &format!("missing entry for {}", d.name(v)));
    }
    verified.global.extend(report.global);
    Ok(verified)
}

fn assemble_entry(
    l: &RootedDigraph,
    entry: &EntryDoc,
) -> std::result::Result<CertificateEntry, String> {
    let mut separator = BTreeSet::new();
    for name in &entry.separator {
        separator.insert(l.vid(name).map_err(|_| format!("unknown separator vertex {name}"))?);
    }
    let mut paths = Vec::new();
    for verts in &entry.paths {
        let vids: std::result::Result<Vec<Vid>, String> = verts
            .iter()
            .map(|n| l.vid(n).map_err(|_| format!("unknown path vertex {n}")))
            .collect();
        let path =
            Path::new(l, vids?).map_err(|e| format!("witness path leaves the subdigraph: {e}"))?;
        paths.push(path);
    }
    let system = PathSystem::new(paths, Mode::RootShared(l.root()))
        .map_err(|e| format!("witness paths share an internal vertex: {e}"))?;
    Ok(CertificateEntry { separator, paths: system, rv_present: entry.rv })
}

/// Stable color palette for certificate path classes, indexed by the
/// entry's rank in vertex order.
const PALETTE: [&str; 12] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
    "#1f78b4", "#b2df8a", "#fb9a99", "#cab2d6",
];

fn quote(name: &str) -> String {
    format!("\"{}\"", name.replace('"', "\\\""))
}

/// DOT export of a digraph; the root is double-circled.
pub fn dot_digraph(d: &RootedDigraph) -> String {
    let mut out = String::from("digraph flames {\n");
    out.push_str(&format!("  {} [shape=doublecircle];\n", quote(d.name(d.root()))));
    for v in d.vids() {
        if v != d.root() {
            out.push_str(&format!("  {};\n", quote(d.name(v))));
        }
    }
    for (u, v) in d.edges() {
        out.push_str(&format!("  {} -> {};\n", quote(d.name(u)), quote(d.name(v))));
    }
    out.push_str("}\n");
    out
}

/// DOT export of a spanning subdigraph: kept edges solid, deleted edges
/// dashed.
pub fn dot_flame(d: &RootedDigraph, l: &RootedDigraph) -> String {
    let mut out = String::from("digraph flames {\n");
    out.push_str(&format!("  {} [shape=doublecircle];\n", quote(d.name(d.root()))));
    for v in d.vids() {
        if v != d.root() {
            out.push_str(&format!("  {};\n", quote(d.name(v))));
        }
    }
    for (u, v) in d.edges() {
        let style = if l.has_edge(u, v) { "" } else { " [style=dashed]" };
        out.push_str(&format!("  {} -> {}{};\n", quote(d.name(u)), quote(d.name(v)), style));
    }
    out.push_str("}\n");
    out
}

/// DOT export of a certificate: deleted edges dashed; edges on a vertex
/// entry's path system take that entry's color class (first entry in vertex
/// order wins when paths overlap).
pub fn dot_certificate(cert: &FlameCertificate) -> String {
    let d = &cert.digraph;
    let l = &cert.flame;
    let mut color_of: BTreeMap<(Vid, Vid), &str> = BTreeMap::new();
    for (rank, entry) in cert.entries.values().enumerate() {
        let color = PALETTE[rank % PALETTE.len()];
        for e in entry.paths.edge_union() {
            color_of.entry(e).or_insert(color);
        }
    }
    let mut out = String::from("digraph flames {\n");
    out.push_str(&format!("  {} [shape=doublecircle];\n", quote(d.name(d.root()))));
    for v in d.vids() {
        if v != d.root() {
            out.push_str(&format!("  {};\n", quote(d.name(v))));
        }
    }
    for (u, v) in d.edges() {
        let mut attrs: Vec<String> = Vec::new();
        if !l.has_edge(u, v) {
            attrs.push("style=dashed".into());
        } else if let Some(color) = color_of.get(&(u, v)) {
            attrs.push(format!("color=\"{color}\""));
        }
        let suffix = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        out.push_str(&format!("  {} -> {}{};\n", quote(d.name(u)), quote(d.name(v)), suffix));
    }
    out.push_str("}\n");
    out
}

/// Summary of one pipeline run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub input: InputSummary,
    pub output: OutputSummary,
    pub certificate_ok: BTreeMap<String, bool>,
    pub timing_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct InputSummary {
    pub vertices: usize,
    pub edges: usize,
    pub kappa: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputSummary {
    pub edges_kept: usize,
    pub edges_deleted: usize,
    pub kappa_sum: usize,
}

impl RunReport {
    pub fn build(
        d: &RootedDigraph,
        l: &RootedDigraph,
        report: &VerificationReport,
        elapsed: Duration,
    ) -> Result<Self> {
        let mut kappa = BTreeMap::new();
        let mut kappa_sum = 0usize;
        for v in d.vids_except_root() {
            let k = crate::menger::kappa_minus_rv(d, v)?
                + usize::from(d.has_edge(d.root(), v));
            kappa.insert(d.name(v).to_string(), k);
            kappa_sum += k;
        }
        let run = RunReport {
            input: InputSummary {
                vertices: d.vertex_count(),
                edges: d.edge_count(),
                kappa,
            },
            output: OutputSummary {
                edges_kept: l.edge_count(),
                edges_deleted: d.edge_count() - l.edge_count(),
                kappa_sum,
            },
            certificate_ok: report
                .per_vertex
                .iter()
                .map(|(&v, verdict)| (d.name(v).to_string(), verdict.ok))
                .collect(),
            timing_ms: elapsed.as_millis(),
        };
        if run.output.edges_kept + run.output.edges_deleted != run.input.edges {
            return Err(Error::Internal("edge accounting is off".into()));
        }
        if report.pass() && run.output.edges_kept != run.output.kappa_sum {
            return Err(Error::Internal("kept edges differ from the connectivity sum".into()));
        }
        Ok(run)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::fixtures::*;

    #[test]
    fn json_round_trip_is_bit_exact() {
        for d in [star(), chain(), chainz(), diamond(), extra(), cross()] {
            let text = serialize_digraph(&d, Format::Json);
            let back = parse_digraph(&text, Format::Json).unwrap();
            assert_eq!(back, d);
            assert_eq!(serialize_digraph(&back, Format::Json), text);
        }
        let d = parse_digraph(
            r#"{"root":"r","vertices":["r","a"],"edges":[["r","a"]]}"#,
            Format::Json,
        )
        .unwrap();
        assert_eq!(d.vertex_count(), 2);
    }

    #[test]
    fn edgelist_round_trip_is_bit_exact() {
        for d in [star(), chain(), chainz(), diamond(), extra(), cross()] {
            let text = serialize_digraph(&d, Format::EdgeList);
            let back = parse_digraph(&text, Format::EdgeList).unwrap();
            assert_eq!(back, d);
            assert_eq!(serialize_digraph(&back, Format::EdgeList), text);
        }
        let d = parse_digraph("root r\nr a\nr b", Format::EdgeList).unwrap();
        assert_eq!(d, star());
    }

    #[test]
    fn parse_errors_carry_positions_and_semantics() {
        let err = parse_digraph("root r\nr a b c", Format::EdgeList);
        assert!(matches!(err, Err(Error::Parse { line: 2, .. })));
        let err = parse_digraph("{not json", Format::Json);
        assert!(matches!(err, Err(Error::Parse { .. })));
        let err = parse_digraph(
            r#"{"root":"r","vertices":["r"],"edges":[["r","r"]]}"#,
            Format::Json,
        );
        assert!(matches!(err, Err(Error::LoopEdge(_))));
    }

    #[test]
    fn certificate_text_round_trip() {
        let d = diamond();
        let cert = crate::flame::certify(&d, &d).unwrap();
        let text = serialize_certificate(&cert);
        let report = verify_certificate_text(&d, &text).unwrap();
        assert!(report.pass());
        // The diamond certificate lists two paths for t.
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        let entries = doc["entries"].as_array().unwrap();
        let t_entry = entries.iter().find(|e| e["vertex"] == "t").unwrap();
        assert_eq!(t_entry["paths"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn tampered_certificate_text_fails() {
        let d = diamond();
        let cert = crate::flame::certify(&d, &d).unwrap();
        let text = serialize_certificate(&cert);
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        let entries = doc["entries"].as_array_mut().unwrap();
        let t_entry = entries.iter_mut().find(|e| e["vertex"] == "t").unwrap();
        t_entry["separator"] = serde_json::json!(["a"]);
        let report = verify_certificate_text(&d, &doc.to_string()).unwrap();
        assert!(!report.pass());
        let t = d.vid("t").unwrap();
        assert_eq!(
            report.per_vertex[&t].failure.as_deref(),
            Some("uncut r->v path")
        );
    }

    #[test]
    fn dot_exports() {
        let d = star();
        let dot = dot_digraph(&d);
        assert!(dot.contains("\"r\" -> \"a\""));
        assert!(!dot.contains("dashed"));

        let d = extra();
        let l = crate::flame::lovasz_reduce(&d).unwrap();
        let dot = dot_flame(&d, &l);
        assert_eq!(dot.matches("style=dashed").count(), 1);

        let cert = crate::flame::certify(&d, &l).unwrap();
        let dot = dot_certificate(&cert);
        assert!(dot.contains("color="));
        assert_eq!(dot.matches("style=dashed").count(), 1);
    }

    #[test]
    fn run_report_accounting() {
        let d = extra();
        let l = crate::flame::lovasz_reduce(&d).unwrap();
        let cert = crate::flame::certify(&d, &l).unwrap();
        let ver = crate::flame::verify_certificate(&cert);
        let report = RunReport::build(&d, &l, &ver, Duration::from_millis(1)).unwrap();
        assert_eq!(report.input.edges, 4);
        assert_eq!(report.output.edges_kept, 3);
        assert_eq!(report.output.edges_deleted, 1);
        assert_eq!(report.output.kappa_sum, 3);
        assert!(report.certificate_ok.values().all(|&ok| ok));
    }
}
