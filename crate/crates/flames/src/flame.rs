//! Flame predicates, largeness, the greedy minimum-reduction, the stepwise
//! constructor with protected-edge bookkeeping, and per-vertex certificates
//! proving flameness and largeness simultaneously.

use std::collections::{BTreeMap, BTreeSet};

use crate::digraph::{RootedDigraph, Vid};
use crate::errors::{Error, Result};
use crate::linkage::cover_extension;
use crate::menger::{
    extreme_separations, kappa_minus_rv, orthogonal_system, realize_last_edges, GOutcome,
};
use crate::path::PathSystem;

/// Per-vertex outcome of the flame test: a covering system or a deficiency.
pub type GMembership = GOutcome;

/// I ∈ 𝒢_D(v)? Returns a witness with E⁺ exactly I, or a Menger deficiency
/// certificate in D↾_v(I−rv) minus rv.
pub fn g_membership(
    d: &RootedDigraph,
    v: Vid,
    i_set: &BTreeSet<(Vid, Vid)>,
) -> Result<GMembership> {
    for &(a, b) in i_set {
        if b != v || !d.has_edge(a, b) {
            return Err(Error::EdgeNotIngoing(
                d.name(a).to_string(),
                d.name(b).to_string(),
                d.name(v).to_string(),
            ));
        }
    }
    realize_last_edges(d, v, i_set)
}

/// Report of `flame_check`: per-vertex 𝒢-membership of the full in-edge
/// set. For finite digraphs the quasi-flame property coincides with the
/// flame property (𝒢 is closed under subsets).
pub struct FlameReport {
    pub per_vertex: BTreeMap<Vid, GMembership>,
}

impl FlameReport {
    pub fn is_flame(&self) -> bool {
        self.per_vertex.values().all(|g| matches!(g, GOutcome::Witness(_)))
    }

    /// Identical to `is_flame` in the finite setting.
    pub fn is_quasi_flame(&self) -> bool {
        self.is_flame()
    }

    pub fn failing(&self) -> Vec<Vid> {
        self.per_vertex
            .iter()
            .filter(|(_, g)| matches!(g, GOutcome::Refusal { .. }))
            .map(|(&v, _)| v)
            .collect()
    }
}

/// Tests the vertex-flame property at every v: in_D(v) ∈ 𝒢_D(v).
pub fn flame_check(d: &RootedDigraph) -> Result<FlameReport> {
    let mut per_vertex = BTreeMap::new();
    for v in d.vids_except_root() {
        per_vertex.insert(v, g_membership(d, v, &d.in_edges(v))?);
    }
    Ok(FlameReport { per_vertex })
}

/// Verdict and diagnostics of the largeness test, evaluated both as local
/// connectivity preservation and via the bubble criterion (every deleted
/// edge's tail lies in the largest bubble of its head); the two must agree.
pub struct LargenessReport {
    pub large: bool,
    pub root_edges_kept: bool,
    /// v -> (κ_D(r,v), κ_L(r,v)).
    pub kappa: BTreeMap<Vid, (usize, usize)>,
    pub bubble_criterion: bool,
    /// Deleted edges whose tail escapes the largest bubble of the head.
    pub offending_edges: Vec<(Vid, Vid)>,
}

fn kappa_of(d: &RootedDigraph, v: Vid) -> Result<usize> {
    Ok(kappa_minus_rv(d, v)? + usize::from(d.has_edge(d.root(), v)))
}

pub fn largeness_check(d: &RootedDigraph, l: &RootedDigraph) -> Result<LargenessReport> {
    if !l.is_spanning_subdigraph_of(d) {
        return Err(Error::NotSpanning("L must span D with E(L) ⊆ E(D)".into()));
    }
    let root_edges_kept = d
        .out_neighbors(d.root())
        .iter()
        .all(|&w| l.has_edge(d.root(), w));
    let mut kappa = BTreeMap::new();
    let mut preserved = true;
    for v in d.vids_except_root() {
        let kd = kappa_of(d, v)?;
        let kl = kappa_of(l, v)?;
        preserved &= kd == kl;
        kappa.insert(v, (kd, kl));
    }
    let large = root_edges_kept && preserved;
    let deleted: Vec<(Vid, Vid)> = d.edges().filter(|e| !l.edge_set().contains(e)).collect();
    let mut bubble_criterion = true;
    let mut offending_edges = Vec::new();
    let mut bubble_cache: BTreeMap<Vid, BTreeSet<Vid>> = BTreeMap::new();
    for (u, v) in deleted {
        if u == d.root() {
            bubble_criterion = false;
            offending_edges.push((u, v));
            continue;
        }
        if let std::collections::btree_map::Entry::Vacant(slot) = bubble_cache.entry(v) {
            slot.insert(largest_bubble_set(l, v)?);
        }
        if !bubble_cache[&v].contains(&u) {
            bubble_criterion = false;
            offending_edges.push((u, v));
        }
    }
    if bubble_criterion != large {
        return Err(Error::Internal(
            "bubble criterion disagrees with connectivity preservation".into(),
        ));
    }
    Ok(LargenessReport { large, root_edges_kept, kappa, bubble_criterion, offending_edges })
}

/// Largest-bubble vertex set without witness construction: the near-root
/// cut plus everything it separates from r in D−rv.
fn largest_bubble_set(d: &RootedDigraph, v: Vid) -> Result<BTreeSet<Vid>> {
    let (near_root, _) = extreme_separations(d, v)?;
    let h = d.without_root_edge(v);
    let reach = h.reachable_avoiding(h.root(), &near_root.set);
    Ok(d.vids()
        .filter(|&u| u != d.root() && (near_root.set.contains(&u) || !reach.contains(&u)))
        .collect())
}

/// A minimum connectivity-preserving spanning subdigraph: for every v,
/// indeg_L(v) = κ_L(r,v) = κ_D(r,v), hence |E(L)| = Σ_v κ_D(r,v) and L is
/// edge-minimal. Greedy: scan vertices in global order for indeg > κ, try
/// that vertex's in-edges in tail order, delete the first whose removal
/// keeps every local connectivity (tested through the single-edge bubble
/// criterion), repeat to the fixed point.
pub fn lovasz_reduce(d: &RootedDigraph) -> Result<RootedDigraph> {
    let mut kappa = BTreeMap::new();
    for v in d.vids_except_root() {
        kappa.insert(v, kappa_of(d, v)?);
    }
    let mut current = d.clone();
    'outer: loop {
        for v in d.vids_except_root() {
            if current.in_degree(v) <= kappa[&v] {
                continue;
            }
            for &u in current.in_neighbors(v) {
                if u == d.root() {
                    continue; // deleting rv always drops κ(r,v)
                }
                let candidate = current.delete_edges(&[(u, v)]);
                // Single-edge largeness: κ is preserved for every vertex
                // iff the deleted tail lies in the head's largest bubble of
                // the remainder.
                if largest_bubble_set(&candidate, v)?.contains(&u) {
                    current = candidate;
                    continue 'outer;
                }
            }
            return Err(Error::Internal(format!(
                "no deletable in-edge at oversaturated vertex {}",
                d.name(v)
            )));
        }
        break;
    }
    for v in d.vids_except_root() {
        if current.in_degree(v) != kappa[&v] || kappa_of(&current, v)? != kappa[&v] {
            return Err(Error::Internal("reduction missed the degree identity".into()));
        }
    }
    Ok(current)
}

/// One restriction step at v: any 𝒬_v ∈ 𝔓_L(v, S_{L,v}) yields
/// L′ = L↾_v E⁺(𝒬_v) which is large w.r.t. L and leaves every S_{·,u}
/// unchanged; both postconditions are asserted.
pub fn no_collapse_step(l: &RootedDigraph, v: Vid) -> Result<(RootedDigraph, PathSystem)> {
    if v == l.root() {
        return Err(Error::PreconditionViolated("target may not be the root".into()));
    }
    let (near_root, _) = extreme_separations(l, v)?;
    let witness = orthogonal_system(l, v, &near_root.set)?;
    let keep = witness.e_plus().unwrap_or_default();
    let restricted = l.restrict_in(v, &keep)?;
    let report = largeness_check(l, &restricted)?;
    if !report.large {
        return Err(Error::Internal("restriction step broke largeness".into()));
    }
    for u in l.vids_except_root() {
        let before = extreme_separations(l, u)?.0.set;
        let after = extreme_separations(&restricted, u)?.0.set;
        if before != after {
            return Err(Error::Internal(format!(
                "separation nearest the root moved at {}",
                l.name(u)
            )));
        }
    }
    Ok((restricted, witness))
}

/// One committed step of the incremental construction.
#[derive(Clone, Debug)]
pub struct OmegaStep {
    pub vertex: Vid,
    pub separator: BTreeSet<Vid>,
    pub witness: PathSystem,
    /// Protected edges at this vertex when the step ran: last edges that
    /// earlier witnesses contributed at it.
    pub protected: BTreeSet<(Vid, Vid)>,
}

/// Recursion state: step index, current digraph, committed witnesses, and
/// the protected-edge ledger mapping each vertex to the in-edges earlier
/// witnesses use there.
#[derive(Clone, Debug)]
pub struct OmegaRecursionState {
    pub step: usize,
    pub current: RootedDigraph,
    pub committed: Vec<OmegaStep>,
    pub ledger: BTreeMap<Vid, BTreeSet<(Vid, Vid)>>,
}

/// Processes the vertices of a flame in the given order: at each step the
/// separation nearest the root is computed, the protected in-edges of the
/// vertex are covered by a fresh orthogonal system, and the digraph is
/// restricted to that system's last edges. Committed witnesses are never
/// broken by later steps.
pub fn omega_construct(
    d: &RootedDigraph,
    order: &[Vid],
) -> Result<(RootedDigraph, OmegaRecursionState)> {
    let expected: BTreeSet<Vid> = d.vids_except_root().collect();
    let given: BTreeSet<Vid> = order.iter().copied().collect();
    if given != expected || order.len() != expected.len() {
        return Err(Error::PreconditionViolated(
            "order must enumerate the non-root vertices exactly once".into(),
        ));
    }
    let report = flame_check(d)?;
    if !report.is_flame() {
        let names: Vec<&str> = report.failing().iter().map(|&v| d.name(v)).collect();
        return Err(Error::NotAFlame(format!(
            "input fails the flame property at {}",
            names.join(", ")
        )));
    }
    let mut state = OmegaRecursionState {
        step: 0,
        current: d.clone(),
        committed: Vec::new(),
        ledger: BTreeMap::new(),
    };
    for &v in order {
        let current = &state.current;
        let protected = state.ledger.get(&v).cloned().unwrap_or_default();
        if !protected.is_subset(&current.in_edges(v)) {
            return Err(Error::Internal("a protected edge was deleted".into()));
        }
        if let GOutcome::Refusal { achieved, required, .. } =
            realize_last_edges(current, v, &protected)?
        {
            return Err(Error::LedgerNotInG(format!(
                "{} of {} protected edges realizable at {}",
                achieved,
                required,
                current.name(v)
            )));
        }
        let (near_root, _) = extreme_separations(current, v)?;
        let witness = cover_extension(current, v, &near_root.set, &protected)?;
        let keep = witness.e_plus().unwrap_or_default();
        let next = current.restrict_in(v, &keep)?;
        for (head, edges) in crate::path::in_edges_by_head(&witness) {
            state.ledger.entry(head).or_default().extend(edges);
        }
        state.committed.push(OmegaStep {
            vertex: v,
            separator: near_root.set,
            witness,
            protected,
        });
        state.current = next;
        state.step += 1;
    }
    for step in &state.committed {
        for edge in step.witness.edge_union() {
            if !state.current.edge_set().contains(&edge) {
                return Err(Error::Internal(format!(
                    "committed witness edge {} -> {} was broken",
                    d.name(edge.0),
                    d.name(edge.1)
                )));
            }
        }
    }
    let final_digraph = state.current.clone();
    if !largeness_check(d, &final_digraph)?.large {
        return Err(Error::Internal("construction lost largeness".into()));
    }
    Ok((final_digraph, state))
}

/// Per-vertex certificate entry: the separator, the orthogonal system
/// covering all surviving in-edges minus rv, and the rv marker.
#[derive(Clone, Debug)]
pub struct CertificateEntry {
    pub separator: BTreeSet<Vid>,
    pub paths: PathSystem,
    pub rv_present: bool,
}

/// Per-vertex bundles (S_v, 𝒫_v, rv) over a base digraph D and a spanning
/// subdigraph L, proving simultaneously that L is a vertex-flame and large:
/// choosing from each path its S_v-vertex, plus the edge rv when present,
/// meets every r->v path of D.
#[derive(Clone, Debug)]
pub struct FlameCertificate {
    pub digraph: RootedDigraph,
    pub flame: RootedDigraph,
    pub entries: BTreeMap<Vid, CertificateEntry>,
}

/// Builds the certificate of a large vertex-flame L of D.
pub fn certify(d: &RootedDigraph, l: &RootedDigraph) -> Result<FlameCertificate> {
    let largeness = largeness_check(d, l)?;
    if !largeness.large {
        return Err(Error::NotLarge("subdigraph drops a local connectivity".into()));
    }
    let report = flame_check(l)?;
    if !report.is_flame() {
        let names: Vec<&str> = report.failing().iter().map(|&v| l.name(v)).collect();
        return Err(Error::NotAFlame(format!(
            "subdigraph fails the flame property at {}",
            names.join(", ")
        )));
    }
    let r = d.root();
    let mut entries = BTreeMap::new();
    for v in d.vids_except_root() {
        let (near_root, _) = extreme_separations(l, v)?;
        let paths = cover_extension(l, v, &near_root.set, &l.in_edges(v))?;
        let mut required = l.in_edges(v);
        required.remove(&(r, v));
        if paths.e_plus().unwrap_or_default() != required {
            return Err(Error::Internal("certificate system misses an in-edge".into()));
        }
        // The separator must cut in the original digraph, not merely in L.
        let h = d.without_root_edge(v);
        if h.reachable_avoiding(r, &near_root.set).contains(&v) {
            return Err(Error::Internal("separator fails in the base digraph".into()));
        }
        entries.insert(
            v,
            CertificateEntry {
                separator: near_root.set,
                paths,
                rv_present: l.has_edge(r, v),
            },
        );
    }
    Ok(FlameCertificate { digraph: d.clone(), flame: l.clone(), entries })
}

/// Outcome of verifying one certificate entry.
#[derive(Clone, Debug)]
pub struct VertexVerdict {
    pub ok: bool,
    pub failure: Option<String>,
    /// An offending path (the first failing witness path, or an uncut r->v
    /// path of D).
    pub evidence: Option<Vec<Vid>>,
}

/// Full verification report; `global` carries defects that are not tied to
/// one vertex (spanning violations, unknown entries).
#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub global: Vec<String>,
    pub per_vertex: BTreeMap<Vid, VertexVerdict>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.global.is_empty() && self.per_vertex.values().all(|v| v.ok)
    }
}

fn fail(reason: &str, evidence: Option<Vec<Vid>>) -> VertexVerdict {
    VertexVerdict { ok: false, failure: Some(reason.to_string()), evidence }
}

/// Checks every certificate invariant from first principles: path validity
/// in L, internal disjointness, exact E⁺ coverage, the orthogonality
/// bijection, and separation tested against D by reachability. Construction
/// is not trusted anywhere.
pub fn verify_certificate(cert: &FlameCertificate) -> VerificationReport {
    let d = &cert.digraph;
    let l = &cert.flame;
    let r = d.root();
    let mut report = VerificationReport::default();
    if !l.is_spanning_subdigraph_of(d) {
        report.global.push("flame is not a spanning subdigraph of the base".into());
        return report;
    }
    for v in d.vids_except_root() {
        if !cert.entries.contains_key(&v) {
            report.global.push(format!("missing entry for {}", d.name(v)));
        }
    }
    for (&v, entry) in &cert.entries {
        if v == r || v >= d.vertex_count() {
            report.global.push(format!("entry for invalid vertex #{v}"));
            continue;
        }
        report.per_vertex.insert(v, verify_entry(d, l, v, entry));
    }
    report
}

fn verify_entry(
    d: &RootedDigraph,
    l: &RootedDigraph,
    v: Vid,
    entry: &CertificateEntry,
) -> VertexVerdict {
    let r = d.root();
    if entry.rv_present != l.has_edge(r, v) {
        return fail("rv marker disagrees with the subdigraph", None);
    }
    if d.has_edge(r, v) && !entry.rv_present {
        // The single-edge path rv is hit by neither the separator nor the
        // marker, so the selection misses it.
        return fail("uncut r->v path", Some(vec![r, v]));
    }
    if entry.separator.contains(&r) || entry.separator.contains(&v) {
        return fail("separator contains r or the target", None);
    }
    // Path validity inside L.
    for p in entry.paths.iter() {
        let verts = p.vertices();
        if verts.len() < 2 || p.first() != r || p.last() != v {
            return fail("witness path is not a nontrivial r->v path", Some(verts.to_vec()));
        }
        for w in verts.windows(2) {
            if !l.has_edge(w[0], w[1]) {
                return fail("witness path leaves the subdigraph", Some(verts.to_vec()));
            }
        }
        let distinct: BTreeSet<Vid> = verts.iter().copied().collect();
        if distinct.len() != verts.len() {
            return fail("witness path repeats a vertex", Some(verts.to_vec()));
        }
    }
    // Internal disjointness: paths share only r and v.
    let paths = entry.paths.paths();
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            let pv: BTreeSet<Vid> = paths[i].vertices().iter().copied().collect();
            for &u in paths[j].vertices() {
                if u != r && u != v && pv.contains(&u) {
                    return fail(
                        "witness paths share an internal vertex",
                        Some(paths[j].vertices().to_vec()),
                    );
                }
            }
        }
    }
    // E⁺ coverage: exactly the surviving in-edges minus rv.
    let mut last_edges = BTreeSet::new();
    for p in entry.paths.iter() {
        if let Some(e) = p.last_edge() {
            last_edges.insert(e);
        }
    }
    let mut required = l.in_edges(v);
    required.remove(&(r, v));
    if last_edges != required {
        return fail("E+ coverage", None);
    }
    // Separation against the base digraph, by reachability.
    let h = d.without_root_edge(v);
    let reach = h.reachable_avoiding(r, &entry.separator);
    if reach.contains(&v) {
        let path = extract_path(&h, &entry.separator, v);
        return fail("uncut r->v path", path);
    }
    // Orthogonality bijection.
    let mut chosen = BTreeSet::new();
    for p in entry.paths.iter() {
        let meets: Vec<Vid> = p
            .internal_vertices()
            .iter()
            .copied()
            .filter(|u| entry.separator.contains(u))
            .collect();
        if meets.len() != 1 || !chosen.insert(meets[0]) {
            return fail("orthogonality", Some(p.vertices().to_vec()));
        }
    }
    if chosen != entry.separator {
        return fail("orthogonality", None);
    }
    VertexVerdict { ok: true, failure: None, evidence: None }
}

/// A concrete r->v path avoiding `avoid`, as failure evidence.
fn extract_path(h: &RootedDigraph, avoid: &BTreeSet<Vid>, v: Vid) -> Option<Vec<Vid>> {
    let mut parent: BTreeMap<Vid, Vid> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([h.root()]);
    let mut seen: BTreeSet<Vid> = [h.root()].into_iter().collect();
    while let Some(u) = queue.pop_front() {
        if u == v {
            break;
        }
        for &w in h.out_neighbors(u) {
            if !avoid.contains(&w) && seen.insert(w) {
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    if !seen.contains(&v) {
        return None;
    }
    let mut path = vec![v];
    let mut cur = v;
    while cur != h.root() {
        cur = parent[&cur];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::fixtures::*;

    fn set(d: &RootedDigraph, names: &[&str]) -> BTreeSet<Vid> {
        d.set_of_names(names).unwrap()
    }

    #[test]
    fn g_membership_on_fixtures() {
        let d = diamond();
        let t = d.vid("t").unwrap();
        let i = d.in_edges(t);
        assert!(matches!(g_membership(&d, t, &i).unwrap(), GOutcome::Witness(_)));

        let d = extra();
        let t = d.vid("t").unwrap();
        let i = d.in_edges(t);
        match g_membership(&d, t, &i).unwrap() {
            GOutcome::Refusal { achieved, required, .. } => {
                assert_eq!((achieved, required), (1, 2));
            }
            GOutcome::Witness(_) => panic!("a is a cut vertex"),
        }
        assert!(matches!(
            g_membership(&d, t, &BTreeSet::new()).unwrap(),
            GOutcome::Witness(w) if w.is_empty()
        ));
    }

    #[test]
    fn g_membership_agrees_with_oracle() {
        for d in [star(), chain(), chainz(), diamond(), extra()] {
            for v in d.vids_except_root() {
                let family = crate::oracle::brute_g(&d, v).unwrap();
                let edges: Vec<(Vid, Vid)> = d.in_edges(v).into_iter().collect();
                for mask in 0u32..(1 << edges.len()) {
                    let i: BTreeSet<(Vid, Vid)> = edges
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| mask >> k & 1 == 1)
                        .map(|(_, &e)| e)
                        .collect();
                    let fast = matches!(g_membership(&d, v, &i).unwrap(), GOutcome::Witness(_));
                    assert_eq!(fast, family.contains(&i));
                }
            }
        }
    }

    #[test]
    fn flame_check_on_fixtures() {
        assert!(flame_check(&diamond()).unwrap().is_flame());
        assert!(flame_check(&star()).unwrap().is_flame());
        let report = flame_check(&extra()).unwrap();
        assert!(!report.is_flame());
        let t = extra().vid("t").unwrap();
        assert_eq!(report.failing(), vec![t]);
    }

    #[test]
    fn largeness_on_fixtures() {
        let d = extra();
        let (a, b, t) = (d.vid("a").unwrap(), d.vid("b").unwrap(), d.vid("t").unwrap());
        let l = d.delete_edges(&[(a, t)]);
        assert!(largeness_check(&d, &l).unwrap().large);
        let l = d.delete_edges(&[(b, t)]);
        assert!(largeness_check(&d, &l).unwrap().large);

        let d = diamond();
        let (a, t) = (d.vid("a").unwrap(), d.vid("t").unwrap());
        let l = d.delete_edges(&[(a, t)]);
        let report = largeness_check(&d, &l).unwrap();
        assert!(!report.large);
        assert_eq!(report.kappa[&t], (2, 1));
        assert_eq!(report.offending_edges, vec![(a, t)]);
    }

    #[test]
    fn lovasz_reduce_on_fixtures() {
        let d = extra();
        let l = lovasz_reduce(&d).unwrap();
        assert_eq!(l.edge_count(), 3);
        assert!(largeness_check(&d, &l).unwrap().large);
        assert!(flame_check(&l).unwrap().is_flame());

        assert_eq!(lovasz_reduce(&diamond()).unwrap(), diamond());
        assert_eq!(lovasz_reduce(&star()).unwrap(), star());
    }

    #[test]
    fn lovasz_identity_and_edge_minimality() {
        for seed in 0..20 {
            let d = crate::oracle::gen_random(9, 0.35, seed).unwrap();
            let l = lovasz_reduce(&d).unwrap();
            let mut total = 0;
            for v in d.vids_except_root() {
                let kd = kappa_of(&d, v).unwrap();
                assert_eq!(l.in_degree(v), kd);
                assert_eq!(kappa_of(&l, v).unwrap(), kd);
                total += kd;
            }
            assert_eq!(l.edge_count(), total);
            // Any further deletion breaks some local connectivity.
            for e in l.edges() {
                let smaller = l.delete_edges(&[e]);
                assert!(!largeness_check(&d, &smaller).unwrap().large);
            }
        }
    }

    #[test]
    fn no_collapse_on_fixtures() {
        let d = extra();
        let t = d.vid("t").unwrap();
        let (l2, _q) = no_collapse_step(&d, t).unwrap();
        assert_eq!(l2.in_degree(t), 1);
        let a = d.vid("a").unwrap();
        assert_eq!(extreme_separations(&l2, t).unwrap().0.set, [a].into_iter().collect());

        let d = diamond();
        let t = d.vid("t").unwrap();
        let (l2, q) = no_collapse_step(&d, t).unwrap();
        assert_eq!(l2, d);
        assert_eq!(q.len(), 2);

        let d = chain();
        let t = d.vid("t").unwrap();
        let (l2, q) = no_collapse_step(&d, t).unwrap();
        assert_eq!(l2, d);
        assert_eq!(q.iter().next().unwrap().display(), "r->x->y->t");
    }

    #[test]
    fn omega_on_fixtures() {
        let d = lovasz_reduce(&extra()).unwrap();
        let order: Vec<Vid> = d.vids_except_root().collect();
        let (l_final, state) = omega_construct(&d, &order).unwrap();
        assert_eq!(l_final, d);
        let t = d.vid("t").unwrap();
        let a = d.vid("a").unwrap();
        let step = state.committed.iter().find(|s| s.vertex == t).unwrap();
        assert_eq!(step.separator, [a].into_iter().collect());

        let d = diamond();
        let order: Vec<Vid> = d.vids_except_root().collect();
        let (l_final, _) = omega_construct(&d, &order).unwrap();
        assert_eq!(l_final, d);

        let d = star();
        let order: Vec<Vid> = d.vids_except_root().collect();
        let (l_final, _) = omega_construct(&d, &order).unwrap();
        assert_eq!(l_final, d);
    }

    #[test]
    fn omega_rejects_non_flames() {
        let d = extra();
        let order: Vec<Vid> = d.vids_except_root().collect();
        assert!(matches!(omega_construct(&d, &order), Err(Error::NotAFlame(_))));
    }

    #[test]
    fn certify_on_fixtures() {
        let d = extra();
        let a = d.vid("a").unwrap();
        let t = d.vid("t").unwrap();
        let l = d.delete_edges(&[(a, t)]);
        let cert = certify(&d, &l).unwrap();
        let entry = &cert.entries[&t];
        assert_eq!(entry.separator, [a].into_iter().collect());
        assert_eq!(entry.paths.iter().next().unwrap().display(), "r->a->b->t");

        let d = diamond();
        let t = d.vid("t").unwrap();
        let cert = certify(&d, &d).unwrap();
        assert_eq!(cert.entries[&t].separator, set(&d, &["a", "b"]));
        assert_eq!(cert.entries[&t].paths.len(), 2);

        let d = chain();
        let t = d.vid("t").unwrap();
        let cert = certify(&d, &d).unwrap();
        assert_eq!(cert.entries[&t].separator, set(&d, &["x"]));
        assert_eq!(cert.entries[&t].paths.iter().next().unwrap().display(), "r->x->y->t");
    }

    #[test]
    fn verify_round_trip_and_tampering() {
        let d = diamond();
        let t = d.vid("t").unwrap();
        let cert = certify(&d, &d).unwrap();
        assert!(verify_certificate(&cert).pass());

        // Remove one path: E+ coverage must fail at t.
        let mut tampered = cert.clone();
        let entry = tampered.entries.get_mut(&t).unwrap();
        let one = entry.paths.iter().next().unwrap().clone();
        entry.paths = PathSystem::new(vec![one], crate::path::Mode::RootShared(d.root())).unwrap();
        entry.separator = set(&d, &["a"]);
        let report = verify_certificate(&tampered);
        assert!(!report.pass());
        assert_eq!(report.per_vertex[&t].failure.as_deref(), Some("E+ coverage"));

        // Shrink the separator: the uncut r->b->t path is the evidence.
        let mut tampered = cert.clone();
        tampered.entries.get_mut(&t).unwrap().separator = set(&d, &["a"]);
        let report = verify_certificate(&tampered);
        assert!(!report.pass());
        let verdict = &report.per_vertex[&t];
        assert_eq!(verdict.failure.as_deref(), Some("uncut r->v path"));
        let b = d.vid("b").unwrap();
        assert_eq!(verdict.evidence.as_deref(), Some(&[d.root(), b, t][..]));
    }

    #[test]
    fn certify_after_reduce_verifies_on_random_instances() {
        for seed in 0..15 {
            let d = crate::oracle::gen_random(10, 0.3, seed).unwrap();
            let l = lovasz_reduce(&d).unwrap();
            let cert = certify(&d, &l).unwrap();
            assert!(verify_certificate(&cert).pass(), "seed {seed}");
        }
    }
}
