//! Pym-style linkage merges: combining two path systems into one that keeps
//! the first system's starts and the second system's ends, every output path
//! being an input path or a single splice of one path from each side.

use std::collections::{BTreeSet, VecDeque};

use crate::digraph::{RootedDigraph, Vid};
use crate::errors::{Error, Result};
use crate::menger::{check_em_separation, orthogonal_system, realize_last_edges, GOutcome};
use crate::path::{assert_infan, assert_xy_paths, Mode, Path, PathSystem};

#[derive(Clone, Copy)]
enum Origin {
    PureP(usize),
    PureQ,
    /// Prefix of p-path `p` up to `p_len` vertices, then a q-suffix.
    Splice { p: usize, p_len: usize },
}

struct RPath {
    verts: Vec<Vid>,
    origin: Origin,
}

/// Iterative merge: start from the P-system; for each Q-path whose terminal
/// is uncovered, splice it onto the current system at the last vertex it
/// shares with it. The meeting vertex always lies on a P-prefix (Q-paths are
/// pairwise disjoint), so every output path stays a single splice, and each
/// steal moves that P-path's switch point strictly towards its start, which
/// bounds the number of iterations.
///
/// `shared_first` is a vertex exempt from disjointness at starts (the root
/// in the root-shared variant); `verts` are stripped of any common terminal
/// by the caller.
fn merge_engine(
    p_paths: &[Vec<Vid>],
    q_paths: &[Vec<Vid>],
    shared_first: Option<Vid>,
) -> Result<Vec<Vec<Vid>>> {
    let mut rs: Vec<RPath> = p_paths
        .iter()
        .enumerate()
        .map(|(i, p)| RPath { verts: p.clone(), origin: Origin::PureP(i) })
        .collect();
    let mut queue: VecDeque<usize> = (0..q_paths.len()).collect();
    // Q-paths have pairwise distinct terminals, so a path's coverage can be
    // traced back to the one Q-path that needs it.
    let term_of_q: std::collections::BTreeMap<Vid, usize> = q_paths
        .iter()
        .enumerate()
        .map(|(i, q)| (*q.last().unwrap(), i))
        .collect();
    let total_len: usize = p_paths.iter().map(Vec::len).sum::<usize>() + 1;
    let mut budget = (total_len + q_paths.len() + 1) * (q_paths.len() + 2);
    while let Some(qi) = queue.pop_front() {
        if budget == 0 {
            return Err(Error::Internal("merge engine exceeded its budget".into()));
        }
        budget -= 1;
        let q = &q_paths[qi];
        let term = *q.last().unwrap();
        if rs.iter().any(|rp| rp.verts.last() == Some(&term)) {
            continue;
        }
        let mut meet: Option<(usize, usize, usize)> = None;
        'scan: for j in (0..q.len()).rev() {
            let w = q[j];
            if Some(w) == shared_first {
                continue;
            }
            for (ri, rp) in rs.iter().enumerate() {
                if let Some(pos) = rp.verts.iter().position(|&u| u == w) {
                    meet = Some((j, ri, pos));
                    break 'scan;
                }
            }
        }
        match meet {
            None => rs.push(RPath { verts: q.clone(), origin: Origin::PureQ }),
            Some((j, ri, pos)) => {
                let (p_origin, p_len) = match rs[ri].origin {
                    Origin::PureP(p) => (p, rs[ri].verts.len()),
                    Origin::Splice { p, p_len } => (p, p_len),
                    Origin::PureQ => {
                        return Err(Error::Internal("q-paths are not disjoint".into()))
                    }
                };
                if pos >= p_len {
                    return Err(Error::Internal("meeting vertex on a q-segment".into()));
                }
                // The rerouted path stops covering its old terminal; any
                // Q-path relying on that terminal (via a shared last edge or
                // an earlier splice) must be reconsidered.
                if let Some(&displaced) = rs[ri].verts.last().and_then(|t| term_of_q.get(t)) {
                    queue.push_back(displaced);
                }
                let mut verts = rs[ri].verts[..=pos].to_vec();
                verts.extend_from_slice(&q[j + 1..]);
                rs[ri] = RPath {
                    verts,
                    origin: Origin::Splice { p: p_origin, p_len: pos + 1 },
                };
            }
        }
    }
    Ok(rs.into_iter().map(|rp| rp.verts).collect())
}

/// Structural shape check: every output path is an input path or an input
/// P-prefix spliced to an input Q-suffix at a single switch vertex.
pub fn has_pym_shape(out: &Path, ps: &PathSystem, qs: &PathSystem) -> bool {
    if ps.paths().contains(out) || qs.paths().contains(out) {
        return true;
    }
    let ov = out.vertices();
    for p in ps.iter() {
        let pv = p.vertices();
        let common = ov.iter().zip(pv.iter()).take_while(|(a, b)| a == b).count();
        for i in 0..common {
            let switch = ov[i];
            for q in qs.iter() {
                if let Some(pos) = q.position(switch) {
                    if q.vertices()[pos..] == ov[i..] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn check_shape(out: &PathSystem, ps: &PathSystem, qs: &PathSystem) -> Result<()> {
    for path in out.iter() {
        if !has_pym_shape(path, ps, qs) {
            return Err(Error::Internal(format!(
                "output path {} is neither an input nor a single splice",
                path.display()
            )));
        }
    }
    Ok(())
}

/// Exhaustive splice-assignment search over all input paths and single
/// splices; the oracle-grade fallback should the iterative engine ever fail
/// its postcondition.
fn exhaustive_merge(
    d: &RootedDigraph,
    ps: &PathSystem,
    qs: &PathSystem,
    shareable: &BTreeSet<Vid>,
    need_starts: &BTreeSet<Vid>,
    need_ends: &BTreeSet<Vid>,
    need_last_edges: &BTreeSet<(Vid, Vid)>,
) -> Result<Vec<Path>> {
    if ps.len() + qs.len() > 12 {
        return Err(Error::Internal("fallback search too large".into()));
    }
    let mut candidates: Vec<Path> = Vec::new();
    candidates.extend(ps.iter().cloned());
    candidates.extend(qs.iter().cloned());
    for p in ps.iter() {
        for q in qs.iter() {
            for &w in p.vertices() {
                if q.contains(w) {
                    if let Ok(spliced) = crate::path::concat_paths(d, p, q, w) {
                        candidates.push(spliced);
                    }
                }
            }
        }
    }
    struct Need<'a> {
        starts: &'a BTreeSet<Vid>,
        ends: &'a BTreeSet<Vid>,
        last_edges: &'a BTreeSet<(Vid, Vid)>,
    }
    fn satisfied(picked: &[Path], need: &Need) -> bool {
        let starts: BTreeSet<Vid> = picked.iter().map(Path::first).collect();
        let ends: BTreeSet<Vid> = picked.iter().map(Path::last).collect();
        let last_edges: BTreeSet<(Vid, Vid)> =
            picked.iter().filter_map(Path::last_edge).collect();
        need.starts.is_subset(&starts)
            && need.ends.is_subset(&ends)
            && need.last_edges.is_subset(&last_edges)
    }
    fn rec(
        candidates: &[Path],
        shareable: &BTreeSet<Vid>,
        idx: usize,
        used: &mut BTreeSet<Vid>,
        picked: &mut Vec<Path>,
        need: &Need,
    ) -> bool {
        if satisfied(picked, need) {
            return true;
        }
        if idx == candidates.len() {
            return false;
        }
        if rec(candidates, shareable, idx + 1, used, picked, need) {
            return true;
        }
        let cand = &candidates[idx];
        if cand
            .vertices()
            .iter()
            .all(|w| shareable.contains(w) || !used.contains(w))
        {
            let added: Vec<Vid> = cand
                .vertices()
                .iter()
                .copied()
                .filter(|w| !shareable.contains(w) && used.insert(*w))
                .collect();
            picked.push(cand.clone());
            if rec(candidates, shareable, idx + 1, used, picked, need) {
                return true;
            }
            picked.pop();
            for w in added {
                used.remove(&w);
            }
        }
        false
    }
    let need = Need { starts: need_starts, ends: need_ends, last_edges: need_last_edges };
    let mut used = BTreeSet::new();
    let mut picked = Vec::new();
    if rec(&candidates, shareable, 0, &mut used, &mut picked, &need) {
        Ok(picked)
    } else {
        Err(Error::Internal("exhaustive merge found no valid system".into()))
    }
}

fn revalidate_in(d: &RootedDigraph, sys: &PathSystem) -> Result<()> {
    for p in sys.iter() {
        Path::new(d, p.vertices().to_vec())?;
    }
    Ok(())
}

fn check_pairwise_disjoint(sys: &PathSystem, label: &str) -> Result<()> {
    let paths = sys.paths();
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            let pv: BTreeSet<Vid> = paths[i].vertices().iter().copied().collect();
            if paths[j].vertices().iter().any(|u| pv.contains(u)) {
                return Err(Error::NotDisjoint(format!(
                    "{label}: {} and {}",
                    paths[i].display(),
                    paths[j].display()
                )));
            }
        }
    }
    Ok(())
}

/// The linkage theorem as an operation: given disjoint systems P, Q of
/// X -> Y paths, produce a disjoint X -> Y system covering V⁻(P) and V⁺(Q)
/// whose members are input paths or single splices. The shape and coverage
/// are verified before returning.
pub fn pym_merge(
    d: &RootedDigraph,
    p_sys: &PathSystem,
    q_sys: &PathSystem,
    x: &BTreeSet<Vid>,
    y: &BTreeSet<Vid>,
) -> Result<PathSystem> {
    revalidate_in(d, p_sys)?;
    revalidate_in(d, q_sys)?;
    check_pairwise_disjoint(p_sys, "P")?;
    check_pairwise_disjoint(q_sys, "Q")?;
    assert_xy_paths(p_sys, x, y).map_err(|e| match e {
        Error::NotXYPaths(m) => Error::NotXYPaths(format!("P: {m}")),
        other => other,
    })?;
    assert_xy_paths(q_sys, x, y).map_err(|e| match e {
        Error::NotXYPaths(m) => Error::NotXYPaths(format!("Q: {m}")),
        other => other,
    })?;
    let p_raw: Vec<Vec<Vid>> = p_sys.iter().map(|p| p.vertices().to_vec()).collect();
    let q_raw: Vec<Vec<Vid>> = q_sys.iter().map(|p| p.vertices().to_vec()).collect();
    let merged = merge_engine(&p_raw, &q_raw, None)?;
    let build = |raw: Vec<Vec<Vid>>| -> Result<PathSystem> {
        let paths: Result<Vec<Path>> = raw.into_iter().map(|v| Path::new(d, v)).collect();
        PathSystem::new(paths?, Mode::Disjoint)
    };
    let result = build(merged);
    let validate = |sys: &PathSystem| -> Result<()> {
        assert_xy_paths(sys, x, y)?;
        if !sys.v_minus().is_superset(&p_sys.v_minus()) {
            return Err(Error::Internal("merge lost a start".into()));
        }
        if !sys.v_plus().is_superset(&q_sys.v_plus()) {
            return Err(Error::Internal("merge lost an end".into()));
        }
        check_shape(sys, p_sys, q_sys)
    };
    let primary = result.and_then(|sys| {
        validate(&sys)?;
        Ok(sys)
    });
    match primary {
        Ok(sys) => Ok(sys),
        Err(first) => {
            let rescue = exhaustive_merge(
                d,
                p_sys,
                q_sys,
                &BTreeSet::new(),
                &p_sys.v_minus(),
                &q_sys.v_plus(),
                &BTreeSet::new(),
            )
            .and_then(|picked| {
                let sys = PathSystem::new(picked, Mode::Disjoint)?;
                validate(&sys)?;
                Ok(sys)
            });
            rescue.map_err(|second| {
                Error::Internal(format!("merge failed ({first}); fallback failed ({second})"))
            })
        }
    }
}

fn strip_terminal(sys: &PathSystem, v: Vid) -> Result<Vec<Vec<Vid>>> {
    let mut out = Vec::new();
    for p in sys.iter() {
        let verts = p.vertices();
        if verts.len() < 2 || p.last() != v {
            return Err(Error::NotXYPaths(format!(
                "path {} does not end at the shared terminal",
                p.display()
            )));
        }
        out.push(verts[..verts.len() - 1].to_vec());
    }
    Ok(out)
}

fn rebuild_infan(
    d: &RootedDigraph,
    raw: Vec<Vec<Vid>>,
    v: Vid,
    shared: Vid,
) -> Result<PathSystem> {
    let paths: Result<Vec<Path>> = raw
        .into_iter()
        .map(|mut verts| {
            verts.push(v);
            Path::new(d, verts)
        })
        .collect();
    PathSystem::new(paths?, Mode::RootShared(shared))
}

/// Infan variant: P links S to v and Q is a v-infan touching S only at its
/// starts; the result is a v-infan with V⁻ = S covering E⁺(Q).
pub fn pym_infan(
    d: &RootedDigraph,
    p_sys: &PathSystem,
    q_sys: &PathSystem,
    v: Vid,
    s: &BTreeSet<Vid>,
) -> Result<PathSystem> {
    revalidate_in(d, p_sys)?;
    revalidate_in(d, q_sys)?;
    assert_infan(p_sys, v)?;
    assert_infan(q_sys, v)?;
    if s.contains(&v) {
        return Err(Error::PreconditionViolated("terminal may not lie in S".into()));
    }
    if p_sys.v_minus() != *s {
        return Err(Error::NotXYPaths("P does not link S to the terminal".into()));
    }
    let q_touch: BTreeSet<Vid> = q_sys
        .vertex_set()
        .intersection(s)
        .copied()
        .collect();
    if q_touch != q_sys.v_minus() {
        return Err(Error::NotXYPaths("Q must meet S exactly at its starts".into()));
    }
    let p_raw = strip_terminal(p_sys, v)?;
    let q_raw = strip_terminal(q_sys, v)?;
    let merged = merge_engine(&p_raw, &q_raw, None)?;
    let result = rebuild_infan(d, merged, v, v);
    let validate = |sys: &PathSystem| -> Result<()> {
        assert_infan(sys, v)?;
        if sys.v_minus() != *s {
            return Err(Error::Internal("infan merge lost a start".into()));
        }
        let covered = sys.e_plus()?;
        if !covered.is_superset(&q_sys.e_plus()?) {
            return Err(Error::Internal("infan merge lost a last edge".into()));
        }
        check_shape(sys, p_sys, q_sys)
    };
    let primary = result.and_then(|sys| {
        validate(&sys)?;
        Ok(sys)
    });
    match primary {
        Ok(sys) => Ok(sys),
        Err(first) => {
            let shareable: BTreeSet<Vid> = [v].into_iter().collect();
            let needed_edges = q_sys.e_plus().unwrap_or_default();
            let rescue =
                exhaustive_merge(d, p_sys, q_sys, &shareable, s, &BTreeSet::new(), &needed_edges)
                    .and_then(|picked| {
                        let sys = PathSystem::new(picked, Mode::RootShared(v))?;
                        validate(&sys)?;
                        Ok(sys)
                    });
            rescue.map_err(|second| {
                Error::Internal(format!("merge failed ({first}); fallback failed ({second})"))
            })
        }
    }
}

/// Root-shared variant: P is a system of S -> v paths pairwise meeting only
/// in {r} besides v (several may start at r); the result covers
/// V⁻(P) ∪ E⁺(Q). The root split of the classical reduction is realized by
/// exempting r from disjointness inside the merge.
pub fn pym_rooted(
    d: &RootedDigraph,
    p_sys: &PathSystem,
    q_sys: &PathSystem,
    s: &BTreeSet<Vid>,
    v: Vid,
) -> Result<PathSystem> {
    revalidate_in(d, p_sys)?;
    revalidate_in(d, q_sys)?;
    if s.contains(&v) {
        return Err(Error::PreconditionViolated("terminal may not lie in S".into()));
    }
    let r = d.root();
    let target: BTreeSet<Vid> = [v].into_iter().collect();
    assert_xy_paths(p_sys, s, &target)?;
    for (i, p) in p_sys.iter().enumerate() {
        for q in p_sys.iter().skip(i + 1) {
            let pv: BTreeSet<Vid> = p.vertices().iter().copied().collect();
            for &u in q.vertices() {
                if u != v && u != r && pv.contains(&u) {
                    return Err(Error::NotDisjoint(format!(
                        "P paths share {} besides r and the terminal",
                        d.name(u)
                    )));
                }
            }
        }
    }
    assert_infan(q_sys, v)?;
    let q_touch: BTreeSet<Vid> = q_sys.vertex_set().intersection(s).copied().collect();
    if q_touch != q_sys.v_minus() {
        return Err(Error::NotXYPaths("Q must meet S exactly at its starts".into()));
    }
    let p_raw = strip_terminal(p_sys, v)?;
    let q_raw = strip_terminal(q_sys, v)?;
    let merged = merge_engine(&p_raw, &q_raw, Some(r))?;
    let sys = rebuild_infan(d, merged, v, r)?;
    assert_xy_paths(&sys, s, &target)?;
    if !sys.v_minus().is_superset(&p_sys.v_minus()) {
        return Err(Error::Internal("rooted merge lost a start".into()));
    }
    if !sys.e_plus()?.is_superset(&q_sys.e_plus()?) {
        return Err(Error::Internal("rooted merge lost a last edge".into()));
    }
    check_shape(&sys, p_sys, q_sys)?;
    Ok(sys)
}

/// An 𝓡 ∈ 𝔓_D(v,S) with I−rv ⊆ E⁺(𝓡): terminal segments of the
/// I-witness from their last S-intersection are merged with the terminal
/// segments of an orthogonal system, then extended backwards along the
/// orthogonal system's initial segments.
pub fn cover_extension(
    d: &RootedDigraph,
    v: Vid,
    s: &BTreeSet<Vid>,
    i_set: &BTreeSet<(Vid, Vid)>,
) -> Result<PathSystem> {
    check_em_separation(d, v, s)?;
    for &(a, b) in i_set {
        if b != v || !d.has_edge(a, b) {
            return Err(Error::EdgeNotIngoing(
                d.name(a).to_string(),
                d.name(b).to_string(),
                d.name(v).to_string(),
            ));
        }
    }
    let witness = match realize_last_edges(d, v, i_set)? {
        GOutcome::Witness(w) => w,
        GOutcome::Refusal { achieved, required, .. } => {
            return Err(Error::NotInG(format!(
                "only {achieved} of {required} last edges realizable"
            )))
        }
    };
    let r = d.root();
    let orth = orthogonal_system(d, v, s)?;
    let mut prefix_of = std::collections::BTreeMap::new();
    let mut p_tails = Vec::new();
    for p in orth.iter() {
        let meeting = p
            .internal_vertices()
            .iter()
            .copied()
            .find(|u| s.contains(u))
            .ok_or_else(|| Error::Internal("orthogonal path misses separator".into()))?;
        prefix_of.insert(meeting, p.prefix_to(meeting).unwrap());
        p_tails.push(p.suffix_from(meeting).unwrap());
    }
    let mut q_tails = Vec::new();
    for q in witness.iter() {
        if q.edge_len() == 1 && q.first() == r {
            continue; // the rv path needs no covering
        }
        let last_s = q
            .vertices()
            .iter()
            .rposition(|u| s.contains(u))
            .ok_or_else(|| Error::Internal("witness path avoids the separator".into()))?;
        q_tails.push(q.suffix_from(q.vertices()[last_s]).unwrap());
    }
    let p_sys = PathSystem::new(p_tails, Mode::RootShared(v))?;
    let q_sys = PathSystem::new(q_tails, Mode::RootShared(v))?;
    let merged = pym_infan(d, &p_sys, &q_sys, v, s)?;
    let mut full = Vec::new();
    for tail in merged.iter() {
        let start = tail.first();
        let prefix = prefix_of
            .get(&start)
            .ok_or_else(|| Error::Internal("merged path starts off the separator".into()))?;
        let mut verts = prefix.vertices().to_vec();
        verts.extend_from_slice(&tail.vertices()[1..]);
        full.push(Path::new(d, verts)?);
    }
    let result = PathSystem::new(full, Mode::RootShared(r))?;
    crate::menger::check_orthogonal(d, v, s, &result)?;
    let needed: BTreeSet<(Vid, Vid)> =
        i_set.iter().copied().filter(|&(a, _)| a != r).collect();
    if !result.e_plus()?.is_superset(&needed) {
        return Err(Error::Internal("cover extension misses a required edge".into()));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::fixtures::*;
    use crate::digraph::build_digraph;

    fn set(d: &RootedDigraph, names: &[&str]) -> BTreeSet<Vid> {
        d.set_of_names(names).unwrap()
    }

    fn sys(d: &RootedDigraph, mode: Mode, paths: &[&[&str]]) -> PathSystem {
        let ps: Vec<Path> = paths.iter().map(|p| Path::from_names(d, p).unwrap()).collect();
        PathSystem::new(ps, mode).unwrap()
    }

    #[test]
    fn merge_on_cross() {
        let d = cross();
        let x = set(&d, &["x1", "x2"]);
        let y = set(&d, &["y1", "y2"]);
        let p = sys(&d, Mode::Disjoint, &[&["x1", "a", "y1"]]);
        let q = sys(&d, Mode::Disjoint, &[&["x2", "a", "y2"]]);
        let merged = pym_merge(&d, &p, &q, &x, &y).unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged.iter().next().unwrap().display(), "x1->a->y2");
    }

    #[test]
    fn merge_is_idempotent_and_tolerates_empty() {
        let d = cross();
        let x = set(&d, &["x1", "x2"]);
        let y = set(&d, &["y1", "y2"]);
        let p = sys(&d, Mode::Disjoint, &[&["x1", "a", "y1"]]);
        assert_eq!(pym_merge(&d, &p, &p, &x, &y).unwrap(), p);
        let empty = PathSystem::empty(Mode::Disjoint);
        assert_eq!(pym_merge(&d, &empty, &p, &x, &y).unwrap(), p);
        assert_eq!(pym_merge(&d, &p, &empty, &x, &y).unwrap(), p);
    }

    #[test]
    fn infan_on_diamond() {
        let d = diamond();
        let t = d.vid("t").unwrap();
        let s = set(&d, &["a", "b"]);
        let p = sys(&d, Mode::RootShared(t), &[&["a", "t"], &["b", "t"]]);
        let q = sys(&d, Mode::RootShared(t), &[&["a", "t"]]);
        let merged = pym_infan(&d, &p, &q, t, &s).unwrap();
        assert_eq!(merged.v_minus(), s);
        assert!(merged.e_plus().unwrap().is_superset(&q.e_plus().unwrap()));
    }

    #[test]
    fn infan_tolerates_empty_q_and_degenerate_splice() {
        let d = diamond();
        let t = d.vid("t").unwrap();
        let s = set(&d, &["a", "b"]);
        let p = sys(&d, Mode::RootShared(t), &[&["a", "t"], &["b", "t"]]);
        let empty = PathSystem::empty(Mode::RootShared(t));
        assert_eq!(pym_infan(&d, &p, &empty, t, &s).unwrap(), p);

        let d = chain();
        let t = d.vid("t").unwrap();
        let s = set(&d, &["x"]);
        let p = sys(&d, Mode::RootShared(t), &[&["x", "y", "t"]]);
        let q = sys(&d, Mode::RootShared(t), &[&["y", "t"]]);
        // q's start y is not in S, so the precondition fails loudly...
        assert!(pym_infan(&d, &p, &q, t, &s).is_err());
        // ...whereas a q starting on S degenerates to p.
        let q = sys(&d, Mode::RootShared(t), &[&["x", "y", "t"]]);
        let merged = pym_infan(&d, &p, &q, t, &s).unwrap();
        assert_eq!(merged, p);
    }

    #[test]
    fn rooted_variant_covers_starts_and_edges() {
        let e = |u: &str, v: &str| (u.to_string(), v.to_string());
        let d = build_digraph(
            ["r", "a", "b", "c"],
            &[e("r", "a"), e("r", "b"), e("a", "c"), e("b", "c")],
            "r",
        )
        .unwrap();
        let c = d.vid("c").unwrap();
        let s = set(&d, &["r"]);
        let p = sys(&d, Mode::RootShared(d.root()), &[&["r", "a", "c"], &["r", "b", "c"]]);
        let q = sys(&d, Mode::RootShared(c), &[&["a", "c"]]);
        // q's start a is not in S = {r}: precondition violation.
        assert!(pym_rooted(&d, &p, &q, &s, c).is_err());
        let q = sys(&d, Mode::RootShared(c), &[&["r", "a", "c"]]);
        let merged = pym_rooted(&d, &p, &q, &s, c).unwrap();
        assert!(merged.v_minus().is_superset(&p.v_minus()));
        assert!(merged.e_plus().unwrap().is_superset(&q.e_plus().unwrap()));

        let d2 = diamond();
        let t = d2.vid("t").unwrap();
        let s = set(&d2, &["r"]);
        let p = sys(&d2, Mode::RootShared(d2.root()), &[&["r", "a", "t"], &["r", "b", "t"]]);
        let q = sys(&d2, Mode::RootShared(t), &[&["r", "b", "t"]]);
        let merged = pym_rooted(&d2, &p, &q, &s, t).unwrap();
        assert_eq!(merged.v_minus(), s);
        assert!(merged.e_plus().unwrap().is_superset(&q.e_plus().unwrap()));
        let empty = PathSystem::empty(Mode::RootShared(t));
        assert_eq!(pym_rooted(&d2, &p, &empty, &s, t).unwrap(), p);
    }

    #[test]
    fn steal_requeues_paths_covered_by_shared_last_edges() {
        // Q1's last edge u->v is initially covered by P1 = a->w->u->v; Q2
        // then reroutes P1 at w, so Q1 must be revisited or its edge is
        // silently dropped.
        let e = |u: &str, v: &str| (u.to_string(), v.to_string());
        let d = build_digraph(
            ["r", "a", "b", "u", "w", "y", "v"],
            &[
                e("a", "w"),
                e("w", "u"),
                e("u", "v"),
                e("b", "v"),
                e("a", "u"),
                e("b", "w"),
                e("w", "y"),
                e("y", "v"),
            ],
            "r",
        )
        .unwrap();
        let v = d.vid("v").unwrap();
        let s = set(&d, &["a", "b"]);
        let p = sys(&d, Mode::RootShared(v), &[&["a", "w", "u", "v"], &["b", "v"]]);
        let q = sys(&d, Mode::RootShared(v), &[&["a", "u", "v"], &["b", "w", "y", "v"]]);
        let merged = pym_infan(&d, &p, &q, v, &s).unwrap();
        assert_eq!(merged.v_minus(), s);
        assert!(merged.e_plus().unwrap().is_superset(&q.e_plus().unwrap()));
    }

    #[test]
    fn cover_extension_on_fixtures() {
        let d = diamond();
        let t = d.vid("t").unwrap();
        let (a, b) = (d.vid("a").unwrap(), d.vid("b").unwrap());
        let i: BTreeSet<_> = [(a, t), (b, t)].into_iter().collect();
        let sys = cover_extension(&d, t, &set(&d, &["a", "b"]), &i).unwrap();
        let shown: Vec<String> = sys.iter().map(Path::display).collect();
        assert_eq!(shown, ["r->a->t", "r->b->t"]);

        let d = chain();
        let t = d.vid("t").unwrap();
        let sys = cover_extension(&d, t, &set(&d, &["y"]), &BTreeSet::new()).unwrap();
        assert_eq!(sys.iter().next().unwrap().display(), "r->x->y->t");

        let d = extra();
        let t = d.vid("t").unwrap();
        let b = d.vid("b").unwrap();
        let i: BTreeSet<_> = [(b, t)].into_iter().collect();
        let sys = cover_extension(&d, t, &set(&d, &["a"]), &i).unwrap();
        assert_eq!(sys.iter().next().unwrap().display(), "r->a->b->t");
    }

    #[test]
    fn cover_extension_rejects_bad_inputs() {
        let d = extra();
        let t = d.vid("t").unwrap();
        let (a, b) = (d.vid("a").unwrap(), d.vid("b").unwrap());
        // {b} is not a separator of EXTRA at t.
        let i: BTreeSet<_> = [(b, t)].into_iter().collect();
        assert!(matches!(
            cover_extension(&d, t, &set(&d, &["b"]), &i),
            Err(Error::NotAnEMSeparation(_))
        ));
        // {(a,t),(b,t)} is not realizable in EXTRA.
        let i: BTreeSet<_> = [(a, t), (b, t)].into_iter().collect();
        assert!(matches!(
            cover_extension(&d, t, &set(&d, &["a"]), &i),
            Err(Error::NotInG(_))
        ));
    }
}
