//! Exponential-time reference implementations at desk scale: exhaustive
//! separation/region/last-edge-set enumeration, lemma checkers, and seeded
//! random instance generation. Everything here is independent of the flow
//! machinery it cross-checks; searches are plain backtracking over simple
//! paths with canonical ordering.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{build_digraph, RootedDigraph, Vid};
use crate::errors::{Error, Result};

/// Hard size guard for subset enumerations (|V − r|).
pub const MAX_BRUTE_VERTICES: usize = 16;
/// Hard size guards for brute_g.
pub const MAX_BRUTE_G_INDEGREE: usize = 8;
pub const MAX_BRUTE_G_VERTICES: usize = 12;

fn guard(actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::TooLarge(actual, limit));
    }
    Ok(())
}

/// All simple `from -> to` paths avoiding `banned`, in canonical DFS order.
pub fn all_simple_paths(
    d: &RootedDigraph,
    from: Vid,
    to: Vid,
    banned: &BTreeSet<Vid>,
) -> Vec<Vec<Vid>> {
    let mut out = Vec::new();
    if banned.contains(&from) || banned.contains(&to) {
        return out;
    }
    let mut stack = vec![from];
    let mut on_path = BTreeSet::from([from]);
    fn dfs(
        d: &RootedDigraph,
        to: Vid,
        banned: &BTreeSet<Vid>,
        stack: &mut Vec<Vid>,
        on_path: &mut BTreeSet<Vid>,
        out: &mut Vec<Vec<Vid>>,
    ) {
        let u = *stack.last().unwrap();
        if u == to {
            out.push(stack.clone());
            return;
        }
        for &w in d.out_neighbors(u) {
            if banned.contains(&w) || on_path.contains(&w) {
                continue;
            }
            stack.push(w);
            on_path.insert(w);
            dfs(d, to, banned, stack, on_path, out);
            stack.pop();
            on_path.remove(&w);
        }
    }
    dfs(d, to, banned, &mut stack, &mut on_path, &mut out);
    out
}

/// Backtracking search for one path per requirement, pairwise sharing only
/// the vertices in `shareable`. Each requirement is a list of candidate
/// vertex sequences; the chosen paths must not overlap outside `shareable`.
fn assign_disjoint(
    requirements: &[Vec<Vec<Vid>>],
    shareable: &BTreeSet<Vid>,
) -> Option<Vec<Vec<Vid>>> {
    fn rec(
        requirements: &[Vec<Vec<Vid>>],
        shareable: &BTreeSet<Vid>,
        idx: usize,
        used: &mut BTreeSet<Vid>,
        picked: &mut Vec<Vec<Vid>>,
    ) -> bool {
        if idx == requirements.len() {
            return true;
        }
        'cand: for cand in &requirements[idx] {
            for v in cand {
                if used.contains(v) && !shareable.contains(v) {
                    continue 'cand;
                }
            }
            let added: Vec<Vid> = cand
                .iter()
                .copied()
                .filter(|v| !shareable.contains(v) && used.insert(*v))
                .collect();
            picked.push(cand.clone());
            if rec(requirements, shareable, idx + 1, used, picked) {
                return true;
            }
            picked.pop();
            for v in added {
                used.remove(&v);
            }
        }
        false
    }
    let mut used = BTreeSet::new();
    let mut picked = Vec::new();
    rec(requirements, shareable, 0, &mut used, &mut picked).then_some(picked)
}

/// Exhaustively decides whether an internally disjoint r->v system
/// orthogonal to S exists in D−rv (|S| paths, path i meeting S exactly at
/// its assigned vertex).
fn orthogonal_exists(h: &RootedDigraph, v: Vid, s: &BTreeSet<Vid>) -> bool {
    let r = h.root();
    let shareable: BTreeSet<Vid> = [r, v].into_iter().collect();
    let mut requirements = Vec::new();
    for &s_i in s {
        let others: BTreeSet<Vid> = s.iter().copied().filter(|&w| w != s_i).collect();
        let mut cands = Vec::new();
        for prefix in all_simple_paths(h, r, s_i, &others) {
            let mut banned = others.clone();
            banned.extend(prefix.iter().copied().filter(|&w| w != s_i));
            for suffix in all_simple_paths(h, s_i, v, &banned) {
                let mut whole = prefix.clone();
                whole.extend_from_slice(&suffix[1..]);
                cands.push(whole);
            }
        }
        if cands.is_empty() {
            return false;
        }
        requirements.push(cands);
    }
    assign_disjoint(&requirements, &shareable).is_some()
}

/// Maximum number of internally disjoint r->v paths in `h`, by exhaustive
/// search over simple paths.
pub fn brute_kappa(h: &RootedDigraph, v: Vid) -> usize {
    let r = h.root();
    let paths = all_simple_paths(h, r, v, &BTreeSet::new());
    let shareable: BTreeSet<Vid> = [r, v].into_iter().collect();
    fn best(
        paths: &[Vec<Vid>],
        shareable: &BTreeSet<Vid>,
        idx: usize,
        used: &mut BTreeSet<Vid>,
        size: usize,
    ) -> usize {
        if idx == paths.len() {
            return size;
        }
        let mut result = best(paths, shareable, idx + 1, used, size);
        let cand = &paths[idx];
        if cand.iter().all(|w| shareable.contains(w) || !used.contains(w)) {
            let added: Vec<Vid> = cand
                .iter()
                .copied()
                .filter(|w| !shareable.contains(w) && used.insert(*w))
                .collect();
            result = result.max(best(paths, shareable, idx + 1, used, size + 1));
            for w in added {
                used.remove(&w);
            }
        }
        result
    }
    best(&paths, &shareable, 0, &mut BTreeSet::new(), 0)
}

/// Exhaustively decides whether `targets` is linked from r (an r-fan with
/// V⁺ = targets).
pub fn fan_exists(d: &RootedDigraph, targets: &BTreeSet<Vid>) -> bool {
    if targets.contains(&d.root()) {
        return false;
    }
    let shareable: BTreeSet<Vid> = [d.root()].into_iter().collect();
    let mut requirements = Vec::new();
    for &u in targets {
        let others: BTreeSet<Vid> = targets.iter().copied().filter(|&w| w != u).collect();
        let cands = all_simple_paths(d, d.root(), u, &others);
        if cands.is_empty() {
            return false;
        }
        requirements.push(cands);
    }
    assign_disjoint(&requirements, &shareable).is_some()
}

/// Exhaustively decides whether X is linked to v (a v-infan with V⁻ = X).
pub fn infan_exists(d: &RootedDigraph, x: &BTreeSet<Vid>, v: Vid) -> bool {
    if x.contains(&v) {
        return false;
    }
    let shareable: BTreeSet<Vid> = [v].into_iter().collect();
    let mut requirements = Vec::new();
    for &u in x {
        let others: BTreeSet<Vid> = x.iter().copied().filter(|&w| w != u).collect();
        let cands = all_simple_paths(d, u, v, &others);
        if cands.is_empty() {
            return false;
        }
        requirements.push(cands);
    }
    assign_disjoint(&requirements, &shareable).is_some()
}

/// Subsets of a slice in canonical (binary counting) order.
fn subsets<T: Copy + Ord>(items: &[T]) -> impl Iterator<Item = BTreeSet<T>> + '_ {
    (0u64..(1u64 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &t)| t)
            .collect()
    })
}

/// The full set 𝔖_D(v) with its order-theoretic extremes.
#[derive(Clone, Debug)]
pub struct BruteSeparations {
    pub all: Vec<BTreeSet<Vid>>,
    pub min: BTreeSet<Vid>,
    pub max: BTreeSet<Vid>,
}

/// Enumerates all of 𝔖_D(v): subsets of V−r−v that separate r from v in
/// D−rv and admit an orthogonal system, found by exhaustive path-system
/// search. Returns the set plus its minimum and maximum under "S separates
/// T from r".
pub fn brute_separations(d: &RootedDigraph, v: Vid) -> Result<BruteSeparations> {
    guard(d.vertex_count() - 1, MAX_BRUTE_VERTICES)?;
    if v == d.root() {
        return Err(Error::PreconditionViolated("target may not be the root".into()));
    }
    let h = d.without_root_edge(v);
    let candidates: Vec<Vid> = d.vids().filter(|&u| u != d.root() && u != v).collect();
    let target: BTreeSet<Vid> = [v].into_iter().collect();
    let mut all = Vec::new();
    for s in subsets(&candidates) {
        if !crate::menger::separates(&h, &s, &target) {
            continue;
        }
        if orthogonal_exists(&h, v, &s) {
            all.push(s);
        }
    }
    let below = |s: &BTreeSet<Vid>, t: &BTreeSet<Vid>| crate::menger::separates(&h, s, t);
    let min = all
        .iter()
        .find(|s| all.iter().all(|t| below(s, t)))
        .cloned()
        .ok_or_else(|| Error::Internal("no minimum separation".into()))?;
    let max = all
        .iter()
        .find(|s| all.iter().all(|t| below(t, s)))
        .cloned()
        .ok_or_else(|| Error::Internal("no maximum separation".into()))?;
    Ok(BruteSeparations { all, min, max })
}

/// All bubbles, all anti-bubbles, the largest bubble and the smallest
/// anti-bubble for a target vertex, by full subset enumeration with witness
/// search.
#[derive(Clone, Debug)]
pub struct BruteRegions {
    pub bubbles: Vec<BTreeSet<Vid>>,
    pub anti_bubbles: Vec<BTreeSet<Vid>>,
    pub largest_bubble: BTreeSet<Vid>,
    pub smallest_anti_bubble: BTreeSet<Vid>,
}

/// Decides bubble-hood by the definition: an infan from ent_D(B)−v to v
/// inside D\[B\], paths sharing only v.
pub fn is_bubble_brute(d: &RootedDigraph, v: Vid, b: &BTreeSet<Vid>) -> Result<bool> {
    if b.contains(&d.root()) {
        return Err(Error::RootInSet);
    }
    if !b.contains(&v) {
        return Ok(false);
    }
    let (ent, _) = d.boundary(b)?;
    let x: BTreeSet<Vid> = ent.into_iter().filter(|&u| u != v).collect();
    let induced = d.induced(b);
    Ok(infan_exists(&induced, &x, v))
}

/// Decides anti-bubble-hood by the definition: ent_D(A) is linked from r.
pub fn is_anti_bubble_brute(d: &RootedDigraph, a: &BTreeSet<Vid>) -> Result<bool> {
    if a.contains(&d.root()) {
        return Err(Error::RootInSet);
    }
    let (ent, _) = d.boundary(a)?;
    Ok(fan_exists(d, &ent))
}

pub fn brute_regions(d: &RootedDigraph, v: Vid) -> Result<BruteRegions> {
    guard(d.vertex_count() - 1, MAX_BRUTE_VERTICES)?;
    if v == d.root() {
        return Err(Error::PreconditionViolated("target may not be the root".into()));
    }
    let candidates: Vec<Vid> = d.vids().filter(|&u| u != d.root()).collect();
    let mut bubbles = Vec::new();
    let mut anti_bubbles = Vec::new();
    for set in subsets(&candidates) {
        if set.contains(&v) && is_bubble_brute(d, v, &set)? {
            bubbles.push(set.clone());
        }
        if is_anti_bubble_brute(d, &set)? {
            anti_bubbles.push(set);
        }
    }
    let largest_bubble: BTreeSet<Vid> =
        bubbles.iter().flat_map(|b| b.iter().copied()).collect();
    if !bubbles.contains(&largest_bubble) {
        return Err(Error::Internal("bubble union is not a bubble".into()));
    }
    let h = d.without_root_edge(v);
    let mut seed: BTreeSet<Vid> = h.in_neighbor_set(v);
    seed.insert(v);
    let containing: Vec<&BTreeSet<Vid>> =
        anti_bubbles.iter().filter(|a| seed.is_subset(a)).collect();
    if containing.is_empty() {
        return Err(Error::Internal("no anti-bubble contains the seed".into()));
    }
    let mut smallest: BTreeSet<Vid> = containing[0].clone();
    for a in &containing[1..] {
        smallest = smallest.intersection(a).copied().collect();
    }
    if !is_anti_bubble_brute(d, &smallest)? {
        return Err(Error::Internal("anti-bubble intersection is not an anti-bubble".into()));
    }
    Ok(BruteRegions { bubbles, anti_bubbles, largest_bubble, smallest_anti_bubble: smallest })
}

/// Exhaustively decides whether I is realizable as the exact last-edge set
/// of an internally disjoint r->v system.
pub fn g_realizable_brute(d: &RootedDigraph, v: Vid, i_set: &BTreeSet<(Vid, Vid)>) -> bool {
    let r = d.root();
    let shareable: BTreeSet<Vid> = [r, v].into_iter().collect();
    let tails: BTreeSet<Vid> = i_set
        .iter()
        .filter(|&&(a, _)| a != r)
        .map(|&(a, _)| a)
        .collect();
    let mut requirements = Vec::new();
    for &(u, _) in i_set {
        if u == r {
            // The single-edge rv path carries the last edge rv.
            requirements.push(vec![vec![r, v]]);
            continue;
        }
        let banned: BTreeSet<Vid> = tails
            .iter()
            .copied()
            .filter(|&w| w != u)
            .chain([v])
            .collect();
        let mut cands = Vec::new();
        for mut prefix in all_simple_paths(d, r, u, &banned) {
            prefix.push(v);
            cands.push(prefix);
        }
        if cands.is_empty() {
            return false;
        }
        requirements.push(cands);
    }
    // Paths may not enter v except by their last edge, which the banned set
    // already enforces; distinct tails force distinct last edges.
    assign_disjoint(&requirements, &shareable).is_some()
}

/// All I ∈ 𝒢_D(v), by exhaustive search; verifies downward closure.
pub fn brute_g(d: &RootedDigraph, v: Vid) -> Result<Vec<BTreeSet<(Vid, Vid)>>> {
    guard(d.in_degree(v), MAX_BRUTE_G_INDEGREE)?;
    guard(d.vertex_count(), MAX_BRUTE_G_VERTICES)?;
    if v == d.root() {
        return Err(Error::PreconditionViolated("target may not be the root".into()));
    }
    let in_edges: Vec<(Vid, Vid)> = d.in_edges(v).into_iter().collect();
    let mut family = Vec::new();
    for i_set in subsets(&in_edges) {
        if g_realizable_brute(d, v, &i_set) {
            family.push(i_set);
        }
    }
    for i_set in &family {
        for dropped in i_set.iter() {
            let smaller: BTreeSet<(Vid, Vid)> =
                i_set.iter().copied().filter(|e| e != dropped).collect();
            if !family.contains(&smaller) {
                return Err(Error::Internal("family is not downward closed".into()));
            }
        }
    }
    Ok(family)
}

/// Strict infan existence for the augmenting-walk discipline: paths from
/// `starts` to v sharing only v and avoiding all of `x_all` except their own
/// start.
fn strict_infan_exists(
    d: &RootedDigraph,
    starts: &BTreeSet<Vid>,
    x_all: &BTreeSet<Vid>,
    v: Vid,
) -> bool {
    let shareable: BTreeSet<Vid> = [v].into_iter().collect();
    let mut requirements = Vec::new();
    for &u in starts {
        let banned: BTreeSet<Vid> = x_all
            .union(starts)
            .copied()
            .filter(|&w| w != u)
            .collect();
        let cands = all_simple_paths(d, u, v, &banned);
        if cands.is_empty() {
            return false;
        }
        requirements.push(cands);
    }
    assign_disjoint(&requirements, &shareable).is_some()
}

/// The supported lemma checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaId {
    NoCollapse,
    BubbleUnite,
    PymShape,
    AugWalk,
    GQuasiAddOne,
    LinkedPreserved,
    QuasiPreserved,
    LargestEmsep,
}

impl LemmaId {
    pub const ALL: [LemmaId; 8] = [
        LemmaId::NoCollapse,
        LemmaId::BubbleUnite,
        LemmaId::PymShape,
        LemmaId::AugWalk,
        LemmaId::GQuasiAddOne,
        LemmaId::LinkedPreserved,
        LemmaId::QuasiPreserved,
        LemmaId::LargestEmsep,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LemmaId::NoCollapse => "no_collapse",
            LemmaId::BubbleUnite => "bubble_unite",
            LemmaId::PymShape => "pym_shape",
            LemmaId::AugWalk => "aug_walk",
            LemmaId::GQuasiAddOne => "g_quasi_add_one",
            LemmaId::LinkedPreserved => "linked_preserved",
            LemmaId::QuasiPreserved => "quasi_preserved",
            LemmaId::LargestEmsep => "largest_emsep",
        }
    }
}

impl std::str::FromStr for LemmaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::PreconditionViolated(format!("unknown lemma id {s}")))
    }
}

/// A lemma id plus the concrete inputs its hypotheses speak about.
#[derive(Clone, Debug)]
pub enum LemmaInstance {
    NoCollapse { d: RootedDigraph, v: Vid },
    BubbleUnite { d: RootedDigraph, chain: Vec<(BTreeSet<Vid>, Vid)> },
    PymShape {
        d: RootedDigraph,
        p: crate::path::PathSystem,
        q: crate::path::PathSystem,
        x: BTreeSet<Vid>,
        y: BTreeSet<Vid>,
    },
    AugWalk { d: RootedDigraph, x: BTreeSet<Vid>, v: Vid, infan: crate::path::PathSystem },
    GQuasiAddOne { d: RootedDigraph, w: Vid, edge: (Vid, Vid) },
    LinkedPreserved { d: RootedDigraph, u_set: BTreeSet<Vid> },
    QuasiPreserved { d: RootedDigraph },
    LargestEmsep { d: RootedDigraph, v: Vid, i_set: BTreeSet<(Vid, Vid)> },
}

impl LemmaInstance {
    pub fn id(&self) -> LemmaId {
        match self {
            LemmaInstance::NoCollapse { .. } => LemmaId::NoCollapse,
            LemmaInstance::BubbleUnite { .. } => LemmaId::BubbleUnite,
            LemmaInstance::PymShape { .. } => LemmaId::PymShape,
            LemmaInstance::AugWalk { .. } => LemmaId::AugWalk,
            LemmaInstance::GQuasiAddOne { .. } => LemmaId::GQuasiAddOne,
            LemmaInstance::LinkedPreserved { .. } => LemmaId::LinkedPreserved,
            LemmaInstance::QuasiPreserved { .. } => LemmaId::QuasiPreserved,
            LemmaInstance::LargestEmsep { .. } => LemmaId::LargestEmsep,
        }
    }

    pub fn digraph(&self) -> &RootedDigraph {
        match self {
            LemmaInstance::NoCollapse { d, .. }
            | LemmaInstance::BubbleUnite { d, .. }
            | LemmaInstance::PymShape { d, .. }
            | LemmaInstance::AugWalk { d, .. }
            | LemmaInstance::GQuasiAddOne { d, .. }
            | LemmaInstance::LinkedPreserved { d, .. }
            | LemmaInstance::QuasiPreserved { d }
            | LemmaInstance::LargestEmsep { d, .. } => d,
        }
    }
}

/// Outcome of a lemma check: a failure is a full counterexample and signals
/// an implementation bug, never a theory bug; suites must abort on it.
#[derive(Clone, Debug)]
pub enum LemmaVerdict {
    Pass,
    Fail { note: String },
}

impl LemmaVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, LemmaVerdict::Pass)
    }
}

fn fail(note: impl Into<String>) -> LemmaVerdict {
    LemmaVerdict::Fail { note: note.into() }
}

/// Evaluates a lemma's conclusion by brute force after validating its
/// hypotheses.
pub fn lemma_check(instance: &LemmaInstance) -> Result<LemmaVerdict> {
    match instance {
        LemmaInstance::NoCollapse { d, v } => check_no_collapse(d, *v),
        LemmaInstance::BubbleUnite { d, chain } => check_bubble_unite(d, chain),
        LemmaInstance::PymShape { d, p, q, x, y } => check_pym_shape(d, p, q, x, y),
        LemmaInstance::AugWalk { d, x, v, infan } => check_aug_walk(d, x, *v, infan),
        LemmaInstance::GQuasiAddOne { d, w, edge } => check_g_quasi_add_one(d, *w, *edge),
        LemmaInstance::LinkedPreserved { d, u_set } => check_linked_preserved(d, u_set),
        LemmaInstance::QuasiPreserved { d } => check_quasi_preserved(d),
        LemmaInstance::LargestEmsep { d, v, i_set } => check_largest_emsep(d, *v, i_set),
    }
}

fn check_no_collapse(d: &RootedDigraph, v: Vid) -> Result<LemmaVerdict> {
    if v == d.root() || v >= d.vertex_count() {
        return Err(Error::HypothesisViolated("v must be a non-root vertex".into()));
    }
    let before: std::collections::BTreeMap<Vid, BruteSeparations> = d
        .vids_except_root()
        .map(|u| Ok((u, brute_separations(d, u)?)))
        .collect::<Result<_>>()?;
    let (restricted, witness) = crate::flame::no_collapse_step(d, v)?;
    // Witness lies in 𝔓_L(v, S_{L,v}) with S taken from the oracle.
    crate::menger::check_orthogonal(d, v, &before[&v].min, &witness)?;
    for u in d.vids_except_root() {
        if brute_kappa(d, u) != brute_kappa(&restricted, u) {
            return Ok(fail(format!(
                "restriction dropped the connectivity of {}",
                d.name(u)
            )));
        }
        let after = brute_separations(&restricted, u)?;
        if after.min != before[&u].min {
            return Ok(fail(format!(
                "separation nearest the root moved at {}",
                d.name(u)
            )));
        }
    }
    Ok(LemmaVerdict::Pass)
}

fn check_bubble_unite(
    d: &RootedDigraph,
    chain: &[(BTreeSet<Vid>, Vid)],
) -> Result<LemmaVerdict> {
    if chain.is_empty() {
        return Err(Error::HypothesisViolated("empty chain".into()));
    }
    let v0 = chain[0].1;
    let mut union: BTreeSet<Vid> = BTreeSet::new();
    for (idx, (b, v)) in chain.iter().enumerate() {
        if !is_bubble_brute(d, *v, b)? {
            return Err(Error::HypothesisViolated(format!(
                "chain member {idx} is not a bubble"
            )));
        }
        if idx > 0 && *v != v0 {
            let (_, interior) = d.boundary(&union)?;
            if !interior.contains(v) {
                return Err(Error::HypothesisViolated(format!(
                    "chain member {idx} violates the interior condition"
                )));
            }
        }
        union.extend(b.iter().copied());
    }
    if !is_bubble_brute(d, v0, &union)? {
        return Ok(fail("union is not a bubble"));
    }
    let merged = crate::bubbles::unite_bubbles(d, chain)?;
    if merged.set != union {
        return Ok(fail("unite_bubbles returned a different set"));
    }
    Ok(LemmaVerdict::Pass)
}

fn check_pym_shape(
    d: &RootedDigraph,
    p: &crate::path::PathSystem,
    q: &crate::path::PathSystem,
    x: &BTreeSet<Vid>,
    y: &BTreeSet<Vid>,
) -> Result<LemmaVerdict> {
    crate::path::assert_xy_paths(p, x, y).map_err(|e| Error::HypothesisViolated(e.to_string()))?;
    crate::path::assert_xy_paths(q, x, y).map_err(|e| Error::HypothesisViolated(e.to_string()))?;
    let merged = crate::linkage::pym_merge(d, p, q, x, y)?;
    if !merged.v_minus().is_superset(&p.v_minus()) {
        return Ok(fail("merge lost a start"));
    }
    if !merged.v_plus().is_superset(&q.v_plus()) {
        return Ok(fail("merge lost an end"));
    }
    for path in merged.iter() {
        if !crate::linkage::has_pym_shape(path, p, q) {
            return Ok(fail(format!("path {} breaks the splice shape", path.display())));
        }
    }
    Ok(LemmaVerdict::Pass)
}

fn check_aug_walk(
    d: &RootedDigraph,
    x: &BTreeSet<Vid>,
    v: Vid,
    infan: &crate::path::PathSystem,
) -> Result<LemmaVerdict> {
    let outcome = crate::menger::augmenting_step(d, x, v, infan).map_err(|e| match e {
        Error::PreconditionViolated(m) => Error::HypothesisViolated(m),
        other => other,
    })?;
    // A strictly larger disciplined infan exists iff some start-superset of
    // size |P|+1 is strictly linkable.
    let starts = infan.v_minus();
    let free: Vec<Vid> = x.iter().copied().filter(|u| !starts.contains(u)).collect();
    let bigger_exists = free.iter().any(|&extra| {
        let mut w = starts.clone();
        w.insert(extra);
        strict_infan_exists(d, &w, x, v)
    });
    match outcome {
        crate::menger::AugmentOutcome::Augmented(bigger) => {
            if bigger.len() != infan.len() + 1 {
                return Ok(fail("augmented system has the wrong size"));
            }
            if !bigger.v_minus().is_superset(&starts) {
                return Ok(fail("augmented system lost a start"));
            }
            let new_paths = bigger.iter().filter(|p| !infan.paths().contains(p)).count();
            let old_paths = infan.iter().filter(|p| !bigger.paths().contains(p)).count();
            if new_paths != old_paths + 1 {
                return Ok(fail("difference cardinalities are off"));
            }
            if !bigger_exists {
                return Ok(fail("augmentation succeeded where brute search finds none"));
            }
            Ok(LemmaVerdict::Pass)
        }
        crate::menger::AugmentOutcome::Separator { chosen, set } => {
            if chosen.len() != infan.len() {
                return Ok(fail("selection is not one vertex per path"));
            }
            for (p, &w) in infan.iter().zip(chosen.iter()) {
                if !p.contains(w) || w == v {
                    return Ok(fail("selected vertex is off its path"));
                }
            }
            let reach = crate::menger::multi_reach_avoiding(d, x, &set);
            if reach.contains(&v) {
                return Ok(fail("selection does not separate"));
            }
            if bigger_exists {
                return Ok(fail("separator returned although a larger infan exists"));
            }
            Ok(LemmaVerdict::Pass)
        }
    }
}

fn check_g_quasi_add_one(d: &RootedDigraph, w: Vid, edge: (Vid, Vid)) -> Result<LemmaVerdict> {
    let (u, v) = edge;
    if u == d.root() || v == w || !d.has_edge(u, v) {
        return Err(Error::HypothesisViolated("edge must satisfy u != r, v != w".into()));
    }
    guard(d.in_degree(w), MAX_BRUTE_G_INDEGREE)?;
    guard(d.vertex_count(), MAX_BRUTE_G_VERTICES)?;
    let full = d.in_edges(w);
    if !g_realizable_brute(d, w, &full) {
        return Err(Error::HypothesisViolated("in(w) is not realizable".into()));
    }
    let smaller = d.delete_edges(&[edge]);
    if g_realizable_brute(&smaller, w, &full) {
        return Err(Error::HypothesisViolated(
            "deleting the edge does not break realizability".into(),
        ));
    }
    // Search for S ∋ v linked from r whose fan ends one path with the edge
    // uv, separating N⁻(v) − u from r.
    let candidates: Vec<Vid> = d.vids_except_root().filter(|&z| z != v).collect();
    let shareable: BTreeSet<Vid> = [d.root()].into_iter().collect();
    let into_v: BTreeSet<Vid> = d.in_neighbor_set(v).into_iter().filter(|&z| z != u).collect();
    for rest in subsets(&candidates) {
        let mut s = rest;
        s.insert(v);
        // S separates N⁻(v) − u from r in D.
        let reach = d.reachable_avoiding(d.root(), &s);
        if into_v.iter().any(|z| !s.contains(z) && reach.contains(z)) {
            continue;
        }
        // Fan onto S whose v-path arrives along uv.
        let mut requirements = Vec::new();
        let mut feasible = true;
        for &target in &s {
            let others: BTreeSet<Vid> = s.iter().copied().filter(|&z| z != target).collect();
            let cands = if target == v {
                let mut banned = others.clone();
                banned.insert(v);
                all_simple_paths(d, d.root(), u, &banned)
                    .into_iter()
                    .map(|mut p| {
                        p.push(v);
                        p
                    })
                    .collect()
            } else {
                all_simple_paths(d, d.root(), target, &others)
            };
            if cands.is_empty() {
                feasible = false;
                break;
            }
            requirements.push(cands);
        }
        if feasible && assign_disjoint(&requirements, &shareable).is_some() {
            return Ok(LemmaVerdict::Pass);
        }
    }
    Ok(fail("no linked separator with the promised last edge exists"))
}

fn check_linked_preserved(d: &RootedDigraph, u_set: &BTreeSet<Vid>) -> Result<LemmaVerdict> {
    if u_set.contains(&d.root()) {
        return Err(Error::HypothesisViolated("U must avoid the root".into()));
    }
    if !fan_exists(d, u_set) {
        return Err(Error::HypothesisViolated("U is not linked in the base digraph".into()));
    }
    let l = crate::flame::lovasz_reduce(d)?;
    if !fan_exists(&l, u_set) {
        return Ok(fail("linkage lost in the reduced subdigraph"));
    }
    Ok(LemmaVerdict::Pass)
}

fn check_quasi_preserved(d: &RootedDigraph) -> Result<LemmaVerdict> {
    let l = crate::flame::lovasz_reduce(d)?;
    if !crate::flame::flame_check(&l)?.is_flame() {
        return Ok(fail("reduction is not a flame"));
    }
    // A flame is its own unique large subdigraph: every single-edge
    // deletion must break some local connectivity, so every large L ⊆ l is
    // l itself and trivially a (quasi-)flame.
    for e in l.edges() {
        let smaller = l.delete_edges(&[e]);
        let broke = l
            .vids_except_root()
            .any(|u| brute_kappa(&smaller, u) != brute_kappa(&l, u));
        if !broke {
            return Ok(fail(format!(
                "deleting {} -> {} keeps all connectivities",
                l.name(e.0),
                l.name(e.1)
            )));
        }
    }
    Ok(LemmaVerdict::Pass)
}

fn check_largest_emsep(
    d: &RootedDigraph,
    v: Vid,
    i_set: &BTreeSet<(Vid, Vid)>,
) -> Result<LemmaVerdict> {
    if v == d.root() {
        return Err(Error::HypothesisViolated("v must not be the root".into()));
    }
    for &(a, b) in i_set {
        if b != v || !d.has_edge(a, b) {
            return Err(Error::HypothesisViolated("I must consist of in-edges of v".into()));
        }
    }
    let t_sep = brute_separations(d, v)?.max;
    let keep: BTreeSet<(Vid, Vid)> =
        i_set.iter().copied().filter(|&(a, _)| a != d.root()).collect();
    let restricted = d.restrict_in(v, &keep)?;
    if !infan_exists(&restricted, &t_sep, v) {
        return Err(Error::HypothesisViolated(
            "the separation nearest the sink is not linked after restriction".into(),
        ));
    }
    for u in d.vids_except_root() {
        for s in brute_separations(d, u)?.all {
            if !infan_exists(&restricted, &s, u) {
                return Ok(fail(format!(
                    "a separation of {} is no longer linked",
                    d.name(u)
                )));
            }
        }
    }
    Ok(LemmaVerdict::Pass)
}

/// Builds a lemma instance from a seeded random digraph, or None when the
/// draw fails the lemma's hypotheses (callers move on to the next seed).
pub fn sample_instance(id: LemmaId, n: usize, seed: u64) -> Result<Option<LemmaInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(id as u64));
    let p = [0.2, 0.35, 0.5][(seed % 3) as usize];
    let d = gen_random(n.max(2), p, seed)?;
    let non_root: Vec<Vid> = d.vids_except_root().collect();
    let pick = |rng: &mut ChaCha8Rng, items: &[Vid]| items[rng.gen_range(0..items.len())];
    let instance = match id {
        LemmaId::NoCollapse => {
            let v = pick(&mut rng, &non_root);
            Some(LemmaInstance::NoCollapse { d, v })
        }
        LemmaId::QuasiPreserved => Some(LemmaInstance::QuasiPreserved { d }),
        LemmaId::LinkedPreserved => {
            let mut found = None;
            for _ in 0..8 {
                let size = 1 + rng.gen_range(0..4usize.min(non_root.len()));
                let mut u_set = BTreeSet::new();
                while u_set.len() < size {
                    u_set.insert(pick(&mut rng, &non_root));
                }
                if fan_exists(&d, &u_set) {
                    found = Some(u_set);
                    break;
                }
            }
            found.map(|u_set| LemmaInstance::LinkedPreserved { d, u_set })
        }
        LemmaId::LargestEmsep => {
            let v = pick(&mut rng, &non_root);
            if d.in_degree(v) > MAX_BRUTE_G_INDEGREE {
                return Ok(None);
            }
            let edges: Vec<(Vid, Vid)> = d.in_edges(v).into_iter().collect();
            let i_set: BTreeSet<(Vid, Vid)> = edges
                .into_iter()
                .filter(|_| rng.gen_bool(0.6))
                .collect();
            let t_sep = brute_separations(&d, v)?.max;
            let keep: BTreeSet<(Vid, Vid)> =
                i_set.iter().copied().filter(|&(a, _)| a != d.root()).collect();
            let restricted = d.restrict_in(v, &keep)?;
            if !infan_exists(&restricted, &t_sep, v) {
                return Ok(None);
            }
            Some(LemmaInstance::LargestEmsep { d, v, i_set })
        }
        LemmaId::GQuasiAddOne => {
            if d.vertex_count() > MAX_BRUTE_G_VERTICES {
                return Ok(None);
            }
            let mut found = None;
            'scan: for w in d.vids_except_root() {
                if d.in_degree(w) > MAX_BRUTE_G_INDEGREE {
                    continue;
                }
                let full = d.in_edges(w);
                if !g_realizable_brute(&d, w, &full) {
                    continue;
                }
                for (u, v) in d.edges() {
                    if u == d.root() || v == w {
                        continue;
                    }
                    let smaller = d.delete_edges(&[(u, v)]);
                    if !g_realizable_brute(&smaller, w, &full) {
                        found = Some((w, (u, v)));
                        break 'scan;
                    }
                }
            }
            found.map(|(w, edge)| LemmaInstance::GQuasiAddOne { d, w, edge })
        }
        LemmaId::BubbleUnite => {
            let v0 = pick(&mut rng, &non_root);
            let regions = brute_regions(&d, v0)?;
            let mut chain: Vec<(BTreeSet<Vid>, Vid)> = Vec::new();
            let picks = 1 + rng.gen_range(0..2usize);
            for _ in 0..picks {
                let b = &regions.bubbles[rng.gen_range(0..regions.bubbles.len())];
                chain.push((b.clone(), v0));
            }
            // Occasionally extend with a bubble of an interior vertex.
            let union: BTreeSet<Vid> =
                chain.iter().flat_map(|(b, _)| b.iter().copied()).collect();
            let (_, interior) = d.boundary(&union)?;
            let inner: Vec<Vid> = interior.into_iter().filter(|&u| u != v0).collect();
            if !inner.is_empty() && rng.gen_bool(0.5) {
                let v1 = pick(&mut rng, &inner);
                let more = brute_regions(&d, v1)?;
                let candidates: Vec<&BTreeSet<Vid>> =
                    more.bubbles.iter().filter(|b| b.contains(&v1)).collect();
                if !candidates.is_empty() {
                    let b = candidates[rng.gen_range(0..candidates.len())].clone();
                    chain.push((b, v1));
                }
            }
            Some(LemmaInstance::BubbleUnite { d, chain })
        }
        LemmaId::PymShape => {
            let verts: Vec<Vid> = d.vids().collect();
            let mut x = BTreeSet::new();
            let mut y = BTreeSet::new();
            for _ in 0..(1 + rng.gen_range(0..3usize)) {
                x.insert(pick(&mut rng, &verts));
            }
            for _ in 0..(1 + rng.gen_range(0..3usize)) {
                let w = pick(&mut rng, &verts);
                if !x.contains(&w) {
                    y.insert(w);
                }
            }
            if y.is_empty() {
                return Ok(None);
            }
            let mut candidates: Vec<Vec<Vid>> = Vec::new();
            for &from in &x {
                for &to in &y {
                    for path in all_simple_paths(&d, from, to, &BTreeSet::new()) {
                        let inner_ok = path.iter().enumerate().all(|(i, u)| {
                            (i == 0 || !x.contains(u)) && (i == path.len() - 1 || !y.contains(u))
                        });
                        if inner_ok {
                            candidates.push(path);
                        }
                    }
                }
            }
            let greedy_pick = |rng: &mut ChaCha8Rng| -> Vec<crate::path::Path> {
                let mut order: Vec<usize> = (0..candidates.len()).collect();
                for i in (1..order.len()).rev() {
                    order.swap(i, rng.gen_range(0..=i));
                }
                let mut used: BTreeSet<Vid> = BTreeSet::new();
                let mut picked = Vec::new();
                for idx in order {
                    let cand = &candidates[idx];
                    if cand.iter().all(|u| !used.contains(u)) {
                        used.extend(cand.iter().copied());
                        picked.push(crate::path::Path::new(&d, cand.clone()).unwrap());
                    }
                }
                picked
            };
            let p_paths = greedy_pick(&mut rng);
            let q_paths = greedy_pick(&mut rng);
            match (
                crate::path::PathSystem::disjoint(p_paths),
                crate::path::PathSystem::disjoint(q_paths),
            ) {
                (Ok(p), Ok(q)) => Some(LemmaInstance::PymShape { d, p, q, x, y }),
                _ => None,
            }
        }
        LemmaId::AugWalk => {
            let v = pick(&mut rng, &non_root);
            let others: Vec<Vid> = d.vids().filter(|&u| u != v).collect();
            let mut x = BTreeSet::new();
            for _ in 0..(1 + rng.gen_range(0..4usize)) {
                x.insert(pick(&mut rng, &others));
            }
            let mut used: BTreeSet<Vid> = BTreeSet::new();
            let mut paths = Vec::new();
            for &u in &x {
                if rng.gen_bool(0.3) {
                    continue; // leave room for augmentation
                }
                let banned: BTreeSet<Vid> = x
                    .iter()
                    .copied()
                    .filter(|&w| w != u)
                    .chain(used.iter().copied())
                    .collect();
                if let Some(raw) = all_simple_paths(&d, u, v, &banned).into_iter().next() {
                    used.extend(raw.iter().copied().filter(|&w| w != v));
                    paths.push(crate::path::Path::new(&d, raw).unwrap());
                }
            }
            match crate::path::PathSystem::new(paths, crate::path::Mode::RootShared(v)) {
                Ok(infan) => Some(LemmaInstance::AugWalk { d, x, v, infan }),
                Err(_) => None,
            }
        }
    };
    Ok(instance)
}

/// Collects `count` hypothesis-satisfying instances for a lemma by scanning
/// seeds from 0 upward (hard-capped); draws failing the hypotheses are
/// skipped.
pub fn realize_instances(
    id: LemmaId,
    n: usize,
    count: usize,
    seed_cap: u64,
) -> Result<Vec<LemmaInstance>> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count && seed < seed_cap {
        if let Some(inst) = sample_instance(id, n, seed)? {
            out.push(inst);
        }
        seed += 1;
    }
    Ok(out)
}

/// Deterministic-for-seed simple rooted digraph. Vertices are the root "r"
/// plus zero-padded "vNNN" labels; each ordered non-loop pair with head
/// other than r is included independently with probability p.
pub fn gen_random(n: usize, p: f64, seed: u64) -> Result<RootedDigraph> {
    if n < 1 {
        return Err(Error::PreconditionViolated("need at least one vertex".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::PreconditionViolated("p must lie in [0,1]".into()));
    }
    let mut names = vec!["r".to_string()];
    for i in 1..n {
        names.push(format!("v{i:03}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let sorted = {
        let mut s = names.clone();
        s.sort();
        s
    };
    for u in &sorted {
        for w in &sorted {
            if u == w || w == "r" {
                continue;
            }
            if rng.gen::<f64>() < p {
                edges.push((u.clone(), w.clone()));
            }
        }
    }
    build_digraph(names, &edges, "r")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::fixtures::*;

    fn set(d: &RootedDigraph, names: &[&str]) -> BTreeSet<Vid> {
        d.set_of_names(names).unwrap()
    }

    #[test]
    fn brute_separations_on_fixtures() {
        let d = chain();
        let t = d.vid("t").unwrap();
        let res = brute_separations(&d, t).unwrap();
        assert_eq!(res.all, vec![set(&d, &["x"]), set(&d, &["y"])]);
        assert_eq!(res.min, set(&d, &["x"]));
        assert_eq!(res.max, set(&d, &["y"]));

        let d = diamond();
        let t = d.vid("t").unwrap();
        let res = brute_separations(&d, t).unwrap();
        assert_eq!(res.all, vec![set(&d, &["a", "b"])]);

        // Degenerate: no r->a path remains in D−ra.
        let d = star();
        let a = d.vid("a").unwrap();
        let res = brute_separations(&d, a).unwrap();
        assert_eq!(res.all, vec![BTreeSet::new()]);
        assert!(res.min.is_empty() && res.max.is_empty());
    }

    #[test]
    fn brute_regions_on_fixtures() {
        let d = chain();
        let t = d.vid("t").unwrap();
        let res = brute_regions(&d, t).unwrap();
        assert_eq!(res.largest_bubble, set(&d, &["x", "y", "t"]));
        assert_eq!(res.smallest_anti_bubble, set(&d, &["y", "t"]));

        let d = chainz();
        let t = d.vid("t").unwrap();
        let res = brute_regions(&d, t).unwrap();
        assert_eq!(res.smallest_anti_bubble, set(&d, &["y", "t"]));

        let d = diamond();
        let t = d.vid("t").unwrap();
        let res = brute_regions(&d, t).unwrap();
        assert_eq!(res.largest_bubble, set(&d, &["a", "b", "t"]));
        assert_eq!(res.smallest_anti_bubble, set(&d, &["a", "b", "t"]));
    }

    #[test]
    fn brute_g_on_fixtures() {
        let d = diamond();
        let t = d.vid("t").unwrap();
        let family = brute_g(&d, t).unwrap();
        assert_eq!(family.len(), 4);

        let d = extra();
        let t = d.vid("t").unwrap();
        let family = brute_g(&d, t).unwrap();
        let (a, b) = (d.vid("a").unwrap(), d.vid("b").unwrap());
        assert_eq!(family.len(), 3);
        assert!(family.contains(&BTreeSet::new()));
        assert!(family.contains(&[(a, t)].into_iter().collect()));
        assert!(family.contains(&[(b, t)].into_iter().collect()));

        let d = chain();
        let t = d.vid("t").unwrap();
        assert_eq!(brute_g(&d, t).unwrap().len(), 2);
    }

    #[test]
    fn brute_kappa_matches_flow_on_fixtures() {
        for d in [star(), chain(), chainz(), diamond(), extra()] {
            for v in d.vids_except_root() {
                let fast = crate::menger::kappa_and_system(&d, v).unwrap().kappa;
                assert_eq!(brute_kappa(&d, v), fast, "kappa mismatch at {}", d.name(v));
            }
        }
    }

    #[test]
    fn gen_random_edge_counts() {
        let d = gen_random(1, 0.5, 7).unwrap();
        assert_eq!(d.vertex_count(), 1);
        assert_eq!(d.edge_count(), 0);

        let d = gen_random(4, 0.0, 1).unwrap();
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(d.edge_count(), 0);

        // Complete digraph minus in(r) minus loops: n(n−1) − (n−1).
        let d = gen_random(5, 1.0, 3).unwrap();
        assert_eq!(d.edge_count(), 16);

        // Determinism for a fixed seed.
        assert_eq!(gen_random(8, 0.4, 11).unwrap(), gen_random(8, 0.4, 11).unwrap());
        assert_ne!(gen_random(8, 0.4, 11).unwrap(), gen_random(8, 0.4, 12).unwrap());
    }

    #[test]
    fn lemma_checkers_pass_on_seeded_instances() {
        for id in LemmaId::ALL {
            let mut ran = 0;
            let mut seed = 0u64;
            while ran < 10 && seed < 200 {
                seed += 1;
                let inst = match sample_instance(id, 7, seed) {
                    Ok(Some(inst)) => inst,
                    Ok(None) => continue,
                    Err(e) => panic!("{}: sampling failed: {e}", id.name()),
                };
                match lemma_check(&inst) {
                    Ok(LemmaVerdict::Pass) => ran += 1,
                    Ok(LemmaVerdict::Fail { note }) =>

                        panic!("{} failed on seed {seed}: {note}\n{:?}", id.name(), inst.digraph()),
                    Err(Error::HypothesisViolated(_)) => continue,
                    Err(e) => panic!("{} errored on seed {seed}: {e}", id.name()),
                }
            }
            assert!(ran >= 5, "{}: only {ran} instances found", id.name());
        }
    }

    #[test]
    fn lemma_fixture_examples() {
        let d = extra();
        let t = d.vid("t").unwrap();
        let inst = LemmaInstance::NoCollapse { d, v: t };
        assert!(lemma_check(&inst).unwrap().passed());

        let d = cross();
        let x = set(&d, &["x1", "x2"]);
        let y = set(&d, &["y1", "y2"]);
        let p = crate::path::PathSystem::disjoint(vec![
            crate::path::Path::from_names(&d, &["x1", "a", "y1"]).unwrap(),
        ])
        .unwrap();
        let q = crate::path::PathSystem::disjoint(vec![
            crate::path::Path::from_names(&d, &["x2", "a", "y2"]).unwrap(),
        ])
        .unwrap();
        let inst = LemmaInstance::PymShape { d, p, q, x, y };
        assert!(lemma_check(&inst).unwrap().passed());
    }

    #[test]
    fn lemma_check_validates_hypotheses_first() {
        // EXTRA fails the flame property at t, so the hypothesis check of
        // the add-one lemma rejects it outright.
        let d = extra();
        let t = d.vid("t").unwrap();
        let (a, b) = (d.vid("a").unwrap(), d.vid("b").unwrap());
        let inst = LemmaInstance::GQuasiAddOne { d, w: t, edge: (a, b) };
        assert!(matches!(lemma_check(&inst), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn size_guards_are_hard_errors() {
        let d = gen_random(20, 0.2, 5).unwrap();
        let v = d.vid("v001").unwrap();
        assert!(matches!(brute_separations(&d, v), Err(Error::TooLarge(..))));
        assert!(matches!(brute_regions(&d, v), Err(Error::TooLarge(..))));
        assert!(matches!(brute_g(&d, v), Err(Error::TooLarge(..))));
    }
}
