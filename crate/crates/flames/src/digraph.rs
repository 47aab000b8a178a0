//! Rooted digraphs: simple directed graphs with a distinguished root that has
//! no in-edges. Vertex ids are opaque strings; internally vertices are dense
//! indices into a name table sorted by id, so index order is the global vertex
//! order used for tie-breaking everywhere downstream.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::errors::{Error, Result};

/// Dense vertex index into a digraph's name table.
pub type Vid = usize;

/// A simple digraph with a root vertex that has no in-edges.
///
/// Values are immutable after construction; restriction and deletion return
/// new values sharing the same name table, so indices stay compatible across
/// a digraph and all its subdigraphs.
#[derive(Clone)]
pub struct RootedDigraph {
    names: Arc<Vec<String>>,
    root: Vid,
    edges: BTreeSet<(Vid, Vid)>,
    out_adj: Vec<Vec<Vid>>,
    in_adj: Vec<Vec<Vid>>,
}

impl PartialEq for RootedDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.root == other.root && self.edges == other.edges
    }
}
impl Eq for RootedDigraph {}

impl std::fmt::Debug for RootedDigraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RootedDigraph(root={}, ", self.name(self.root))?;
        let mut first = true;
        for &(u, v) in &self.edges {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", self.name(u), self.name(v))?;
            first = false;
        }
        write!(f, ")")
    }
}

/// Validated constructor for [`RootedDigraph`].
///
/// Rejects duplicate edges, loops, in-edges of the root and unknown
/// endpoints.
pub fn build_digraph<S: Into<String>>(
    vertices: impl IntoIterator<Item = S>,
    edges: &[(String, String)],
    root: &str,
) -> Result<RootedDigraph> {
    let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
    names.sort();
    names.dedup();
    let lookup = |s: &str| -> Result<Vid> {
        names
            .binary_search_by(|n| n.as_str().cmp(s))
            .map_err(|_| Error::UnknownEndpoint(s.to_string()))
    };
    let root_vid = names
        .binary_search_by(|n| n.as_str().cmp(root))
        .map_err(|_| Error::UnknownVertex(root.to_string()))?;
    let mut edge_set = BTreeSet::new();
    for (u, v) in edges {
        let uv = lookup(u)?;
        let vv = lookup(v)?;
        if uv == vv {
            return Err(Error::LoopEdge(u.clone()));
        }
        if vv == root_vid {
            return Err(Error::RootHasInEdge(u.clone()));
        }
        if !edge_set.insert((uv, vv)) {
            return Err(Error::DuplicateEdge(u.clone(), v.clone()));
        }
    }
    Ok(RootedDigraph::from_parts(Arc::new(names), root_vid, edge_set))
}

impl RootedDigraph {
    fn from_parts(names: Arc<Vec<String>>, root: Vid, edges: BTreeSet<(Vid, Vid)>) -> Self {
        let n = names.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        // BTreeSet iteration leaves out_adj sorted; in_adj needs a sort.
        for l in &mut in_adj {
            l.sort_unstable();
        }
        RootedDigraph { names, root, edges, out_adj, in_adj }
    }

    fn with_edges(&self, edges: BTreeSet<(Vid, Vid)>) -> Self {
        RootedDigraph::from_parts(Arc::clone(&self.names), self.root, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn root(&self) -> Vid {
        self.root
    }

    pub fn name(&self, v: Vid) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &Arc<Vec<String>> {
        &self.names
    }

    pub fn vid(&self, name: &str) -> Result<Vid> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .map_err(|_| Error::UnknownVertex(name.to_string()))
    }

    /// All vertices in global (id) order.
    pub fn vids(&self) -> impl Iterator<Item = Vid> + '_ {
        0..self.names.len()
    }

    /// All vertices except the root, in global order.
    pub fn vids_except_root(&self) -> impl Iterator<Item = Vid> + '_ {
        let r = self.root;
        (0..self.names.len()).filter(move |&v| v != r)
    }

    pub fn has_edge(&self, u: Vid, v: Vid) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vid, Vid)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<(Vid, Vid)> {
        &self.edges
    }

    pub fn out_neighbors(&self, v: Vid) -> &[Vid] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: Vid) -> &[Vid] {
        &self.in_adj[v]
    }

    /// in_D(v) as an edge set.
    pub fn in_edges(&self, v: Vid) -> BTreeSet<(Vid, Vid)> {
        self.in_adj[v].iter().map(|&u| (u, v)).collect()
    }

    pub fn in_degree(&self, v: Vid) -> usize {
        self.in_adj[v].len()
    }

    pub fn out_degree(&self, v: Vid) -> usize {
        self.out_adj[v].len()
    }

    pub fn same_table(&self, other: &Self) -> bool {
        self.names == other.names
    }

    /// True when `self` has the same vertices and root as `host` and its edge
    /// set is contained in `host`'s.
    pub fn is_spanning_subdigraph_of(&self, host: &Self) -> bool {
        self.same_table(host)
            && self.root == host.root
            && self.edges.is_subset(&host.edges)
    }

    /// D restricted at v: in(v) becomes I, except that the edge rv is never
    /// deleted. Edges with head != v are untouched.
    pub fn restrict_in(&self, v: Vid, keep: &BTreeSet<(Vid, Vid)>) -> Result<Self> {
        if v == self.root {
            return Err(Error::PreconditionViolated(
                "restrict_in target may not be the root".into(),
            ));
        }
        for &(a, b) in keep {
            if b != v || !self.edges.contains(&(a, b)) {
                return Err(Error::EdgeNotIngoing(
                    self.name(a).to_string(),
                    self.name(b).to_string(),
                    self.name(v).to_string(),
                ));
            }
        }
        let root = self.root;
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| b != v || a == root || keep.contains(&(a, b)))
            .collect();
        Ok(self.with_edges(edges))
    }

    /// General edge-deletion plumbing (absent edges are ignored). D − rv is
    /// expressed as `delete_edges(&[(r, v)])`.
    pub fn delete_edges(&self, remove: &[(Vid, Vid)]) -> Self {
        let mut edges = self.edges.clone();
        for e in remove {
            edges.remove(e);
        }
        self.with_edges(edges)
    }

    /// D − rv, the host for all separation work at v.
    pub fn without_root_edge(&self, v: Vid) -> Self {
        self.delete_edges(&[(self.root, v)])
    }

    /// Edge-wise intersection of two digraphs over the same vertex table
    /// and root.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if !self.same_table(other) || self.root != other.root {
            return Err(Error::PreconditionViolated(
                "intersection requires the same vertex table and root".into(),
            ));
        }
        let edges = self.edges.intersection(&other.edges).copied().collect();
        Ok(self.with_edges(edges))
    }

    /// Induced subdigraph D\[U\]: same vertex table, edges restricted to U x U.
    pub fn induced(&self, keep: &BTreeSet<Vid>) -> Self {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| keep.contains(&a) && keep.contains(&b))
            .collect();
        self.with_edges(edges)
    }

    /// Entrance and interior of X: ent = members of X with an in-edge from
    /// outside X, int = the rest. Requires r not in X.
    pub fn boundary(&self, x: &BTreeSet<Vid>) -> Result<(BTreeSet<Vid>, BTreeSet<Vid>)> {
        if x.contains(&self.root) {
            return Err(Error::RootInSet);
        }
        let mut ent = BTreeSet::new();
        let mut int = BTreeSet::new();
        for &v in x {
            if self.in_adj[v].iter().any(|u| !x.contains(u)) {
                ent.insert(v);
            } else {
                int.insert(v);
            }
        }
        Ok((ent, int))
    }

    /// ent_D(X) alone.
    pub fn entrance(&self, x: &BTreeSet<Vid>) -> Result<BTreeSet<Vid>> {
        Ok(self.boundary(x)?.0)
    }

    /// Vertices reachable from `start` while avoiding the vertex set
    /// `avoid` (`start` itself is reachable unless avoided).
    pub fn reachable_avoiding(&self, start: Vid, avoid: &BTreeSet<Vid>) -> BTreeSet<Vid> {
        let mut seen = BTreeSet::new();
        if avoid.contains(&start) {
            return seen;
        }
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(u) = stack.pop() {
            for &w in &self.out_adj[u] {
                if !avoid.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn reachable_from_root(&self) -> BTreeSet<Vid> {
        self.reachable_avoiding(self.root, &BTreeSet::new())
    }

    /// N⁻ of a single vertex as a set.
    pub fn in_neighbor_set(&self, v: Vid) -> BTreeSet<Vid> {
        self.in_adj[v].iter().copied().collect()
    }

    pub fn names_of(&self, set: &BTreeSet<Vid>) -> Vec<String> {
        set.iter().map(|&v| self.name(v).to_string()).collect()
    }

    pub fn set_of_names(&self, names: &[&str]) -> Result<BTreeSet<Vid>> {
        names.iter().map(|n| self.vid(n)).collect()
    }
}

/// Canonical test graphs used across the crate and its consumers.
pub mod fixtures {
    use super::{build_digraph, RootedDigraph};

    fn g(vertices: &[&str], edges: &[(&str, &str)], root: &str) -> RootedDigraph {
        let e: Vec<(String, String)> = edges
            .iter()
            .map(|&(u, v)| (u.to_string(), v.to_string()))
            .collect();
        build_digraph(vertices.iter().map(|s| s.to_string()), &e, root).expect("fixture is valid")
    }

    /// r -> a, r -> b.
    pub fn star() -> RootedDigraph {
        g(&["r", "a", "b"], &[("r", "a"), ("r", "b")], "r")
    }

    /// r -> x -> y -> t.
    pub fn chain() -> RootedDigraph {
        g(&["r", "x", "y", "t"], &[("r", "x"), ("x", "y"), ("y", "t")], "r")
    }

    /// chain plus y -> z.
    pub fn chainz() -> RootedDigraph {
        g(
            &["r", "x", "y", "t", "z"],
            &[("r", "x"), ("x", "y"), ("y", "t"), ("y", "z")],
            "r",
        )
    }

    /// Two internally disjoint r -> t paths through a and b.
    pub fn diamond() -> RootedDigraph {
        g(
            &["r", "a", "b", "t"],
            &[("r", "a"), ("r", "b"), ("a", "t"), ("b", "t")],
            "r",
        )
    }

    /// r -> a -> b -> t with shortcut a -> t; a is a cut vertex for t.
    pub fn extra() -> RootedDigraph {
        g(
            &["r", "a", "b", "t"],
            &[("r", "a"), ("a", "b"), ("b", "t"), ("a", "t")],
            "r",
        )
    }

    /// X = {x1,x2}, Y = {y1,y2} crossing at a; hosted with an isolated dummy
    /// root for unrooted linkage tests.
    pub fn cross() -> RootedDigraph {
        g(
            &["r", "x1", "x2", "a", "y1", "y2"],
            &[("x1", "a"), ("x2", "a"), ("a", "y1"), ("a", "y2")],
            "r",
        )
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn build_rejects_invariant_violations() {
        let e = |u: &str, v: &str| (u.to_string(), v.to_string());
        assert!(matches!(
            build_digraph(["r", "a"], &[e("a", "r")], "r"),
            Err(Error::RootHasInEdge(_))
        ));
        assert!(matches!(
            build_digraph(["r"], &[e("r", "r")], "r"),
            Err(Error::LoopEdge(_))
        ));
        assert!(matches!(
            build_digraph(["r", "a"], &[e("r", "a"), e("r", "a")], "r"),
            Err(Error::DuplicateEdge(_, _))
        ));
        assert!(matches!(
            build_digraph(["r", "a"], &[e("r", "q")], "r"),
            Err(Error::UnknownEndpoint(_))
        ));
        let d = build_digraph(["r", "a", "b"], &[e("r", "a"), e("r", "b")], "r").unwrap();
        assert_eq!(d, star());
    }

    #[test]
    fn restrict_in_drops_only_unlisted_in_edges() {
        let d = extra();
        let (b, t) = (d.vid("b").unwrap(), d.vid("t").unwrap());
        let keep: BTreeSet<_> = [(b, t)].into_iter().collect();
        let restricted = d.restrict_in(t, &keep).unwrap();
        let expected = build_digraph(
            ["r", "a", "b", "t"],
            &[
                ("r".into(), "a".into()),
                ("a".into(), "b".into()),
                ("b".into(), "t".into()),
            ],
            "r",
        )
        .unwrap();
        assert_eq!(restricted, expected);
    }

    #[test]
    fn restrict_in_identity_and_idempotence() {
        let d = chain();
        let (y, t) = (d.vid("y").unwrap(), d.vid("t").unwrap());
        let keep: BTreeSet<_> = [(y, t)].into_iter().collect();
        let once = d.restrict_in(t, &keep).unwrap();
        assert_eq!(once, d);
        let twice = once.restrict_in(t, &keep).unwrap();
        assert_eq!(twice, once);
    }

    #[test]
    fn restrict_in_never_deletes_the_root_edge() {
        let d = star();
        let a = d.vid("a").unwrap();
        let restricted = d.restrict_in(a, &BTreeSet::new()).unwrap();
        // in(a) = {r->a} is retained because rv is exempt.
        assert_eq!(restricted, d);
    }

    #[test]
    fn restrict_in_rejects_foreign_edges() {
        let d = chain();
        let (x, y, t) = (d.vid("x").unwrap(), d.vid("y").unwrap(), d.vid("t").unwrap());
        let keep: BTreeSet<_> = [(x, y)].into_iter().collect();
        assert!(matches!(d.restrict_in(t, &keep), Err(Error::EdgeNotIngoing(..))));
    }

    #[test]
    fn boundary_on_chain() {
        let d = chain();
        let set = d.set_of_names(&["y", "t"]).unwrap();
        let (ent, int) = d.boundary(&set).unwrap();
        assert_eq!(d.names_of(&ent), ["y"]);
        assert_eq!(d.names_of(&int), ["t"]);

        let set = d.set_of_names(&["x", "y", "t"]).unwrap();
        let (ent, int) = d.boundary(&set).unwrap();
        assert_eq!(d.names_of(&ent), ["x"]);
        assert_eq!(d.names_of(&int), ["t", "y"]);

        let (ent, int) = d.boundary(&BTreeSet::new()).unwrap();
        assert!(ent.is_empty() && int.is_empty());
    }

    #[test]
    fn boundary_rejects_root() {
        let d = chain();
        let set: BTreeSet<_> = [d.root()].into_iter().collect();
        assert!(matches!(d.boundary(&set), Err(Error::RootInSet)));
    }

    #[test]
    fn intersection_is_edgewise() {
        let d = extra();
        let (a, b, t) = (d.vid("a").unwrap(), d.vid("b").unwrap(), d.vid("t").unwrap());
        let left = d.delete_edges(&[(a, t)]);
        let right = d.delete_edges(&[(b, t)]);
        let meet = left.intersect(&right).unwrap();
        assert_eq!(meet.edge_count(), 2);
        assert!(!meet.has_edge(a, t) && !meet.has_edge(b, t));
        assert!(star().intersect(&d).is_err());
    }

    #[test]
    fn delete_edges_tolerates_absent_edges() {
        let d = chain();
        let t = d.vid("t").unwrap();
        assert_eq!(d.without_root_edge(t), d);
        let x = d.vid("x").unwrap();
        let dropped = d.delete_edges(&[(d.root(), x)]);
        assert_eq!(dropped.edge_count(), d.edge_count() - 1);
    }
}
