//! Extraction of minimum connectivity-preserving spanning subdigraphs
//! ("large vertex-flames") from finite rooted digraphs, with per-vertex
//! separator certificates and exponential-time oracles that ground the fast
//! operations at desk scale.
//!
//! A rooted digraph is a simple digraph with a distinguished root r that has
//! no in-edges. For every other vertex v, the local connectivity κ(r,v) is
//! the maximum number of internally disjoint r->v paths.
//! [`flame::lovasz_reduce`] extracts a spanning subdigraph L in which the
//! in-degree of every vertex equals both κ_L(r,v) and κ_D(r,v), so
//! |E(L)| = Σ_v κ_D(r,v) is minimum possible; [`flame::certify`] attaches to
//! every vertex a separator and an orthogonal path system covering all of
//! its surviving in-edges, and [`flame::verify_certificate`] re-checks those
//! bundles from first principles without trusting construction.

pub mod bubbles;
pub mod digraph;
pub mod errors;
pub mod flame;
pub mod io;
pub mod linkage;
pub mod menger;
pub mod oracle;
pub mod path;

pub use digraph::{build_digraph, RootedDigraph, Vid};
pub use errors::{Error, Result};
pub use flame::{certify, lovasz_reduce, verify_certificate, FlameCertificate};
pub use menger::{extreme_separations, kappa_and_system, MengerResult, Separation};
pub use path::{concat_paths, Mode, Path, PathSystem};
