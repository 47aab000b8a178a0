//! Maximum internally disjoint r->v path systems and Erdős–Menger
//! separations via unit vertex capacities (vertex splitting) over an
//! integral augmenting-path max-flow.
//!
//! Conventions: all separation work happens in D−rv; `kappa_and_system`
//! works in D and counts the rv path. The minimum cut nearest the root is
//! obtained from residual reachability, the one nearest the sink from
//! residual co-reachability; both are unique and independent of the maximum
//! flow found.

use std::collections::{BTreeSet, VecDeque};

use crate::digraph::{RootedDigraph, Vid};
use crate::errors::{Error, Result};
use crate::path::{assert_fan, assert_infan, Mode, Path, PathSystem};

const INF: u32 = u32::MAX / 4;

/// Integral max-flow over an explicit arc list (Edmonds–Karp). Arc ids come
/// in forward/reverse pairs; adjacency preserves insertion order, which makes
/// augmentation and decomposition deterministic.
struct FlowNet {
    to: Vec<u32>,
    cap: Vec<u32>,
    adj: Vec<Vec<u32>>,
    src: usize,
    dst: usize,
}

impl FlowNet {
    fn new(nodes: usize, src: usize, dst: usize) -> Self {
        FlowNet { to: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); nodes], src, dst }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: u32) -> usize {
        let id = self.to.len();
        self.to.push(to as u32);
        self.cap.push(cap);
        self.adj[from].push(id as u32);
        self.to.push(from as u32);
        self.cap.push(0);
        self.adj[to].push((id + 1) as u32);
        id
    }

    fn arc_from(&self, id: usize) -> usize {
        self.to[id ^ 1] as usize
    }

    /// Flow currently on a forward arc.
    fn flow_on(&self, id: usize) -> u32 {
        debug_assert_eq!(id % 2, 0);
        self.cap[id ^ 1]
    }

    /// One shortest augmenting path of one unit; returns false when the sink
    /// is unreachable in the residual.
    fn augment_once(&mut self) -> bool {
        let mut pred: Vec<Option<u32>> = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[self.src] = true;
        let mut queue = VecDeque::new();
        queue.push_back(self.src);
        'bfs: while let Some(u) = queue.pop_front() {
            for &aid in &self.adj[u] {
                let aid = aid as usize;
                if self.cap[aid] == 0 {
                    continue;
                }
                let w = self.to[aid] as usize;
                if !seen[w] {
                    seen[w] = true;
                    pred[w] = Some(aid as u32);
                    if w == self.dst {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if !seen[self.dst] {
            return false;
        }
        let mut node = self.dst;
        while node != self.src {
            let aid = pred[node].unwrap() as usize;
            self.cap[aid] -= 1;
            self.cap[aid ^ 1] += 1;
            node = self.arc_from(aid);
        }
        true
    }

    fn max_flow(&mut self) -> usize {
        let mut value = 0;
        while self.augment_once() {
            value += 1;
        }
        value
    }

    /// Nodes reachable from the source in the residual network.
    fn residual_from_src(&self) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[self.src] = true;
        let mut queue = VecDeque::from([self.src]);
        while let Some(u) = queue.pop_front() {
            for &aid in &self.adj[u] {
                let aid = aid as usize;
                if self.cap[aid] == 0 {
                    continue;
                }
                let w = self.to[aid] as usize;
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Nodes that can reach the sink in the residual network.
    fn residual_to_dst(&self) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[self.dst] = true;
        let mut queue = VecDeque::from([self.dst]);
        while let Some(w) = queue.pop_front() {
            // adj[w] holds the mate of every arc entering w: for mate id
            // `rid`, the forward arc rid^1 runs to[rid] -> w.
            for &rid in &self.adj[w] {
                let rid = rid as usize;
                let fwd = rid ^ 1;
                if self.cap[fwd] == 0 {
                    continue;
                }
                let u = self.to[rid] as usize;
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }
}

/// Network shape over the vertex-split graph.
///
/// - `RootToVertex`: single source, single sink; the classical κ(r,v) core.
/// - `SetToVertex`: super source over X, single sink v. With `strict`, the
///   in-edges of X are dropped so X-vertices appear only as path starts
///   (the augmenting-walk discipline V(P) ∩ X = V⁻(P)); without it, paths
///   may pass through X-members that are not used as starts, which is the
///   right semantics for per-subset Menger values.
/// - `RootToSet`: single source, super sink over U; terminal exits sit
///   behind the split so a vertex is either a terminal or passed through,
///   never both.
enum NetKind<'a> {
    RootToVertex { src: Vid, dst: Vid },
    SetToVertex { sources: &'a BTreeSet<Vid>, dst: Vid, strict: bool },
    RootToSet { src: Vid, sinks: &'a BTreeSet<Vid> },
}

/// Vertex-split network over a digraph's edge set. Split vertices get an
/// in-copy and an out-copy joined by a unit arc; edge arcs are effectively
/// uncapacitated so every minimum cut consists of split arcs only.
struct SplitNet {
    net: FlowNet,
    in_node: Vec<usize>,
    out_node: Vec<usize>,
    split: Vec<bool>,
    source_vertex: Option<Vid>,
    super_source_arcs: Vec<(Vid, usize)>,
}

impl SplitNet {
    fn build(n: usize, edges: &BTreeSet<(Vid, Vid)>, kind: NetKind) -> Self {
        let (single_src, single_dst) = match kind {
            NetKind::RootToVertex { src, dst } => (Some(src), Some(dst)),
            NetKind::SetToVertex { dst, .. } => (None, Some(dst)),
            NetKind::RootToSet { src, .. } => (Some(src), None),
        };
        let mut split = vec![true; n];
        if let Some(s) = single_src {
            split[s] = false;
        }
        if let Some(t) = single_dst {
            split[t] = false;
        }
        let mut in_node = vec![0usize; n];
        let mut out_node = vec![0usize; n];
        let mut next = 0usize;
        for v in 0..n {
            in_node[v] = next;
            if split[v] {
                out_node[v] = next + 1;
                next += 2;
            } else {
                out_node[v] = next;
                next += 1;
            }
        }
        let super_source = matches!(kind, NetKind::SetToVertex { .. }).then_some(next);
        let super_sink = matches!(kind, NetKind::RootToSet { .. })
            .then_some(next + super_source.is_some() as usize);
        let nodes = next + super_source.is_some() as usize + super_sink.is_some() as usize;
        let src_node = super_source.unwrap_or_else(|| in_node[single_src.unwrap()]);
        let dst_node = super_sink.unwrap_or_else(|| in_node[single_dst.unwrap()]);
        let mut net = FlowNet::new(nodes, src_node, dst_node);
        for v in 0..n {
            if split[v] {
                net.add_arc(in_node[v], out_node[v], 1);
            }
        }
        let mut super_source_arcs = Vec::new();
        if let NetKind::SetToVertex { sources, .. } = kind {
            let sigma = super_source.unwrap();
            for &x in sources {
                let id = net.add_arc(sigma, in_node[x], 1);
                super_source_arcs.push((x, id));
            }
        }
        if let NetKind::RootToSet { sinks, .. } = kind {
            let tau = super_sink.unwrap();
            for &u in sinks {
                net.add_arc(out_node[u], tau, 1);
            }
        }
        let drop_into: Option<&BTreeSet<Vid>> = match kind {
            NetKind::SetToVertex { sources, strict: true, .. } => Some(sources),
            _ => None,
        };
        for &(a, b) in edges {
            if Some(a) == single_dst || Some(b) == single_src {
                continue;
            }
            if drop_into.is_some_and(|set| set.contains(&b)) {
                continue;
            }
            net.add_arc(out_node[a], in_node[b], INF);
        }
        SplitNet { net, in_node, out_node, split, source_vertex: single_src, super_source_arcs }
    }

    /// Push one unit along a vertex path (used to seed augmenting_step).
    fn seed_path(&mut self, verts: &[Vid]) -> Result<()> {
        let mut arcs: Vec<usize> = Vec::new();
        if self.source_vertex.is_none() {
            let x = verts[0];
            let arc = self
                .super_source_arcs
                .iter()
                .find(|&&(v, _)| v == x)
                .map(|&(_, id)| id)
                .ok_or_else(|| Error::Internal(format!("vertex #{x} is not a source")))?;
            arcs.push(arc);
        }
        for (i, &v) in verts.iter().enumerate() {
            if self.split[v] {
                arcs.push(self.find_arc(self.in_node[v], self.out_node[v])?);
            }
            if i + 1 < verts.len() {
                arcs.push(self.find_arc(self.out_node[v], self.in_node[verts[i + 1]])?);
            }
        }
        for id in arcs {
            if self.net.cap[id] == 0 {
                return Err(Error::Internal("seed path exceeds capacity".into()));
            }
            self.net.cap[id] -= 1;
            self.net.cap[id ^ 1] += 1;
        }
        Ok(())
    }

    fn find_arc(&self, from: usize, to: usize) -> Result<usize> {
        self.net.adj[from]
            .iter()
            .map(|&a| a as usize)
            .find(|&a| a % 2 == 0 && self.net.to[a] as usize == to)
            .ok_or_else(|| Error::Internal("missing arc".into()))
    }

    /// Decomposes the current flow into vertex paths from the source side to
    /// the sink, in deterministic arc order. Residual cycles are ignored.
    fn decompose(&self) -> Vec<Vec<Vid>> {
        let mut used = vec![0u32; self.net.to.len()];
        let start_arcs: Vec<usize> = self.net.adj[self.net.src]
            .iter()
            .map(|&a| a as usize)
            .filter(|&a| a % 2 == 0 && self.net.flow_on(a) > 0)
            .collect();
        let node_vertex: Vec<Option<Vid>> = {
            let mut map = vec![None; self.net.adj.len()];
            for v in 0..self.in_node.len() {
                map[self.in_node[v]] = Some(v);
            }
            map
        };
        let mut paths = Vec::new();
        for first in start_arcs {
            let mut path: Vec<Vid> = Vec::new();
            if let Some(v) = self.source_vertex {
                path.push(v);
            }
            let mut arc = first;
            loop {
                used[arc] += 1;
                let node = self.net.to[arc] as usize;
                if node == self.net.dst {
                    if let Some(v) = node_vertex[node] {
                        path.push(v);
                    }
                    break;
                }
                if let Some(v) = node_vertex[node] {
                    path.push(v);
                }
                arc = self.net.adj[node]
                    .iter()
                    .map(|&a| a as usize)
                    .find(|&a| a % 2 == 0 && self.net.flow_on(a) > used[a])
                    .expect("flow conservation");
            }
            paths.push(path);
        }
        paths
    }

    /// Split vertices whose in-copy is residual-reachable but whose out-copy
    /// is not: the minimum cut nearest the source.
    fn near_source_cut(&self) -> BTreeSet<Vid> {
        let reach = self.net.residual_from_src();
        (0..self.in_node.len())
            .filter(|&v| self.split[v] && reach[self.in_node[v]] && !reach[self.out_node[v]])
            .collect()
    }

    /// Split vertices whose out-copy reaches the sink in the residual but
    /// whose in-copy does not: the minimum cut nearest the sink.
    fn near_sink_cut(&self) -> BTreeSet<Vid> {
        let co = self.net.residual_to_dst();
        (0..self.in_node.len())
            .filter(|&v| self.split[v] && co[self.out_node[v]] && !co[self.in_node[v]])
            .collect()
    }
}

/// A vertex set attached to a target v that separates r from v in D−rv,
/// optionally carrying an orthogonal witness system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub target: Vid,
    pub set: BTreeSet<Vid>,
    pub witness: Option<PathSystem>,
}

/// κ_D(r,v) together with a maximum internally disjoint r->v system and the
/// two extreme minimum cuts of D−rv.
#[derive(Clone, Debug)]
pub struct MengerResult {
    pub kappa: usize,
    pub system: PathSystem,
    pub near_root: Separation,
    pub near_sink: Separation,
}

/// Outcome of the order test between two Erdős–Menger separations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SepOrder {
    /// S ≤ T and T ≤ S.
    Equal,
    /// S ≤ T only (S separates T from r).
    Below,
    /// T ≤ S only.
    Above,
    Incomparable,
}

/// Certificate that a requested linkage does not exist: a subset whose
/// Menger value falls short of its size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkageRefusal {
    pub violating: BTreeSet<Vid>,
    pub max_linkable: usize,
}

#[derive(Clone, Debug)]
pub enum FanOutcome {
    Fan(PathSystem),
    Refusal(LinkageRefusal),
}

#[derive(Clone, Debug)]
pub enum InfanOutcome {
    Infan(PathSystem),
    Refusal(LinkageRefusal),
}

/// Result of one augmenting-walk step: either a strictly larger infan or a
/// selection of one vertex per input path separating v from X.
#[derive(Clone, Debug)]
pub enum AugmentOutcome {
    Augmented(PathSystem),
    Separator { chosen: Vec<Vid>, set: BTreeSet<Vid> },
}

fn core(h: &RootedDigraph, v: Vid) -> (usize, SplitNet) {
    let mut sn = SplitNet::build(
        h.vertex_count(),
        h.edge_set(),
        NetKind::RootToVertex { src: h.root(), dst: v },
    );
    let value = sn.net.max_flow();
    (value, sn)
}

fn system_from_paths(h: &RootedDigraph, shared: Vid, raw: Vec<Vec<Vid>>) -> Result<PathSystem> {
    let paths: Result<Vec<Path>> = raw.into_iter().map(|p| Path::new(h, p)).collect();
    PathSystem::new(paths?, Mode::RootShared(shared))
}

/// κ_{D−rv}(r,v) alone; cheaper than building the full result.
pub fn kappa_minus_rv(d: &RootedDigraph, v: Vid) -> Result<usize> {
    if v == d.root() {
        return Err(Error::PreconditionViolated("target may not be the root".into()));
    }
    let h = d.without_root_edge(v);
    Ok(core(&h, v).0)
}

/// κ_D(r,v) with a maximum internally disjoint r->v system; the rv path is a
/// member whenever rv ∈ E(D). Unreachable targets yield κ = 0 and empty
/// extremes.
pub fn kappa_and_system(d: &RootedDigraph, v: Vid) -> Result<MengerResult> {
    if v == d.root() {
        return Err(Error::PreconditionViolated("target may not be the root".into()));
    }
    let r = d.root();
    let h = d.without_root_edge(v);
    let (_, sn) = core(&h, v);
    let near_root = sn.near_source_cut();
    let near_sink = sn.near_sink_cut();
    let raw = sn.decompose();
    let witness = system_from_paths(&h, r, raw.clone())?;
    let mut raw = raw;
    if d.has_edge(r, v) {
        raw.push(vec![r, v]);
    }
    let system = system_from_paths(d, r, raw)?;
    Ok(MengerResult {
        kappa: system.len(),
        system,
        near_root: Separation { target: v, set: near_root, witness: Some(witness.clone()) },
        near_sink: Separation { target: v, set: near_sink, witness: Some(witness) },
    })
}

/// True when every r->t path of `h` with t ∈ `targets` meets `s` (targets
/// inside `s` are trivially separated).
pub fn separates(h: &RootedDigraph, s: &BTreeSet<Vid>, targets: &BTreeSet<Vid>) -> bool {
    let reach = h.reachable_avoiding(h.root(), s);
    targets.iter().all(|t| s.contains(t) || !reach.contains(t))
}

/// Validates S ∈ 𝔖_D(v): S ⊆ V−r−v, S separates r from v in D−rv, and
/// |S| equals κ_{D−rv}(r,v) (finite Erdős–Menger separations are exactly the
/// minimum cuts).
pub fn check_em_separation(d: &RootedDigraph, v: Vid, s: &BTreeSet<Vid>) -> Result<()> {
    if s.contains(&d.root()) || s.contains(&v) {
        return Err(Error::NotAnEMSeparation(
            "separator may not contain r or the target".into(),
        ));
    }
    let h = d.without_root_edge(v);
    if !separates(&h, s, &[v].into_iter().collect()) {
        return Err(Error::NotAnEMSeparation("set does not separate".into()));
    }
    let kappa = core(&h, v).0;
    if s.len() != kappa {
        return Err(Error::NotAnEMSeparation(format!(
            "size {} differs from kappa {}",
            s.len(),
            kappa
        )));
    }
    Ok(())
}

/// Checks that `system` ∈ 𝔓_D(v,S): internally disjoint r->v paths of D−rv,
/// each meeting S in exactly one internal vertex, the choices enumerating S.
pub fn check_orthogonal(
    d: &RootedDigraph,
    v: Vid,
    s: &BTreeSet<Vid>,
    system: &PathSystem,
) -> Result<()> {
    let r = d.root();
    if system.len() != s.len() {
        return Err(Error::NotAnEMSeparation(format!(
            "witness has {} paths for separator of size {}",
            system.len(),
            s.len()
        )));
    }
    let mut hit = BTreeSet::new();
    for p in system.iter() {
        if p.first() != r || p.last() != v {
            return Err(Error::NotAnEMSeparation("witness path is not r->v".into()));
        }
        if p.edge_len() == 1 {
            return Err(Error::NotAnEMSeparation(
                "single-edge path cannot be orthogonal".into(),
            ));
        }
        let meets: Vec<Vid> = p
            .internal_vertices()
            .iter()
            .copied()
            .filter(|u| s.contains(u))
            .collect();
        if meets.len() != 1 {
            return Err(Error::NotAnEMSeparation(format!(
                "path {} meets separator {} times",
                p.display(),
                meets.len()
            )));
        }
        if !hit.insert(meets[0]) {
            return Err(Error::NotAnEMSeparation("separator vertex chosen twice".into()));
        }
    }
    if &hit != s {
        return Err(Error::NotAnEMSeparation("choices do not enumerate separator".into()));
    }
    let paths = system.paths();
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            let pv: BTreeSet<Vid> = paths[i].vertices().iter().copied().collect();
            for &u in paths[j].vertices() {
                if u != r && u != v && pv.contains(&u) {
                    return Err(Error::NotAnEMSeparation(format!(
                        "witness paths share internal vertex #{u}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// S_{D,v} (nearest root) and T_{D,v} (nearest sink), each carrying an
/// orthogonal witness.
pub fn extreme_separations(d: &RootedDigraph, v: Vid) -> Result<(Separation, Separation)> {
    if v == d.root() {
        return Err(Error::PreconditionViolated("target may not be the root".into()));
    }
    let h = d.without_root_edge(v);
    let (_, sn) = core(&h, v);
    let s = sn.near_source_cut();
    let t = sn.near_sink_cut();
    let witness = system_from_paths(&h, h.root(), sn.decompose())?;
    debug_assert!(check_orthogonal(d, v, &s, &witness).is_ok());
    debug_assert!(check_orthogonal(d, v, &t, &witness).is_ok());
    Ok((
        Separation { target: v, set: s, witness: Some(witness.clone()) },
        Separation { target: v, set: t, witness: Some(witness) },
    ))
}

/// A system in 𝔓_D(v,S) for a given S ∈ 𝔖_D(v). Any maximum internally
/// disjoint system of D−rv is orthogonal to every Erdős–Menger separation,
/// so the canonical maximum system is returned after validating S.
pub fn orthogonal_system(d: &RootedDigraph, v: Vid, s: &BTreeSet<Vid>) -> Result<PathSystem> {
    if v == d.root() {
        return Err(Error::PreconditionViolated("target may not be the root".into()));
    }
    check_em_separation(d, v, s)?;
    let h = d.without_root_edge(v);
    let (_, sn) = core(&h, v);
    let system = system_from_paths(&h, h.root(), sn.decompose())?;
    check_orthogonal(d, v, s, &system)?;
    Ok(system)
}

/// Evaluates "S separates T from r in D−rv" literally in both directions.
pub fn classify_separation(
    d: &RootedDigraph,
    v: Vid,
    s: &BTreeSet<Vid>,
    t: &BTreeSet<Vid>,
) -> Result<SepOrder> {
    check_em_separation(d, v, s)?;
    check_em_separation(d, v, t)?;
    let h = d.without_root_edge(v);
    let s_below = separates(&h, s, t);
    let t_below = separates(&h, t, s);
    Ok(match (s_below, t_below) {
        (true, true) => SepOrder::Equal,
        (true, false) => SepOrder::Below,
        (false, true) => SepOrder::Above,
        (false, false) => SepOrder::Incomparable,
    })
}

/// An r-fan onto U (paths share only r, last vertices enumerate U), or a
/// refusal naming a deficient subset of U together with its Menger value.
pub fn linked_from_root(d: &RootedDigraph, u_set: &BTreeSet<Vid>) -> Result<FanOutcome> {
    if u_set.contains(&d.root()) {
        return Err(Error::PreconditionViolated("U must avoid the root".into()));
    }
    if u_set.is_empty() {
        return Ok(FanOutcome::Fan(PathSystem::empty(Mode::RootShared(d.root()))));
    }
    let mut sn = SplitNet::build(
        d.vertex_count(),
        d.edge_set(),
        NetKind::RootToSet { src: d.root(), sinks: u_set },
    );
    let value = sn.net.max_flow();
    if value == u_set.len() {
        let raw = sn.decompose();
        let system = system_from_paths(d, d.root(), raw)?;
        assert_fan(&system, d.root())?;
        debug_assert_eq!(&system.v_plus(), u_set);
        return Ok(FanOutcome::Fan(system));
    }
    // Deficient: every fan path onto W = {u : u_out not residual-reachable}
    // must pass a saturated split vertex on the reachable boundary, of which
    // there are |W| − (deficiency) many.
    let reach = sn.net.residual_from_src();
    let violating: BTreeSet<Vid> = u_set
        .iter()
        .copied()
        .filter(|&u| !reach[sn.out_node[u]])
        .collect();
    let mut check = SplitNet::build(
        d.vertex_count(),
        d.edge_set(),
        NetKind::RootToSet { src: d.root(), sinks: &violating },
    );
    let max_linkable = check.net.max_flow();
    if max_linkable >= violating.len() {
        return Err(Error::Internal("deficient subset is linkable".into()));
    }
    Ok(FanOutcome::Refusal(LinkageRefusal { violating, max_linkable }))
}

/// A v-infan with V⁻ = X (paths share only v), or a refusal with a Menger
/// certificate.
pub fn link_set_to_vertex(d: &RootedDigraph, x: &BTreeSet<Vid>, v: Vid) -> Result<InfanOutcome> {
    if x.contains(&v) {
        return Err(Error::PreconditionViolated("target may not lie in X".into()));
    }
    if x.is_empty() {
        return Ok(InfanOutcome::Infan(PathSystem::empty(Mode::RootShared(v))));
    }
    let mut sn = SplitNet::build(
        d.vertex_count(),
        d.edge_set(),
        NetKind::SetToVertex { sources: x, dst: v, strict: false },
    );
    let value = sn.net.max_flow();
    if value == x.len() {
        let raw = sn.decompose();
        let paths: Result<Vec<Path>> = raw.into_iter().map(|p| Path::new(d, p)).collect();
        let system = PathSystem::new(paths?, Mode::RootShared(v))?;
        assert_infan(&system, v)?;
        debug_assert_eq!(&system.v_minus(), x);
        return Ok(InfanOutcome::Infan(system));
    }
    let reach = sn.net.residual_from_src();
    let violating: BTreeSet<Vid> = x
        .iter()
        .copied()
        .filter(|&u| reach[sn.in_node[u]])
        .collect();
    let mut check = SplitNet::build(
        d.vertex_count(),
        d.edge_set(),
        NetKind::SetToVertex { sources: &violating, dst: v, strict: false },
    );
    let max_linkable = check.net.max_flow();
    if max_linkable >= violating.len() {
        return Err(Error::Internal("deficient subset is linkable".into()));
    }
    Ok(InfanOutcome::Refusal(LinkageRefusal { violating, max_linkable }))
}

/// One augmenting-walk step. Either the infan grows by exactly one path
/// without losing any start (successful case), or a selection of one vertex
/// per input path separates v from X (unsuccessful case).
pub fn augmenting_step(
    d: &RootedDigraph,
    x: &BTreeSet<Vid>,
    v: Vid,
    infan: &PathSystem,
) -> Result<AugmentOutcome> {
    if x.contains(&v) {
        return Err(Error::PreconditionViolated("target may not lie in X".into()));
    }
    assert_infan(infan, v)?;
    for p in infan.iter() {
        if !x.contains(&p.first()) {
            return Err(Error::PreconditionViolated(format!(
                "path {} does not start in X",
                p.display()
            )));
        }
        for &u in &p.vertices()[1..] {
            if x.contains(&u) {
                return Err(Error::PreconditionViolated(format!(
                    "path {} touches X internally",
                    p.display()
                )));
            }
        }
        Path::new(d, p.vertices().to_vec())?;
    }
    if x.is_empty() {
        return Ok(AugmentOutcome::Separator { chosen: Vec::new(), set: BTreeSet::new() });
    }
    let mut sn = SplitNet::build(
        d.vertex_count(),
        d.edge_set(),
        NetKind::SetToVertex { sources: x, dst: v, strict: true },
    );
    for p in infan.iter() {
        sn.seed_path(p.vertices())?;
    }
    if sn.net.augment_once() {
        let raw = sn.decompose();
        let paths: Result<Vec<Path>> = raw.into_iter().map(|p| Path::new(d, p)).collect();
        let bigger = PathSystem::new(paths?, Mode::RootShared(v))?;
        assert_infan(&bigger, v)?;
        if bigger.len() != infan.len() + 1 || !bigger.v_minus().is_superset(&infan.v_minus()) {
            return Err(Error::Internal("augmentation lost a start".into()));
        }
        return Ok(AugmentOutcome::Augmented(bigger));
    }
    // Unsuccessful: each seeded path crosses the residual-reachable boundary
    // exactly once; the crossing vertices form the selection.
    let reach = sn.net.residual_from_src();
    let mut chosen = Vec::new();
    for p in infan.iter() {
        let verts = p.vertices();
        let start = verts[0];
        let mut pick = None;
        if !reach[sn.in_node[start]] {
            pick = Some(start);
        } else {
            for &w in verts.iter() {
                if w == v {
                    break;
                }
                if reach[sn.in_node[w]] && !reach[sn.out_node[w]] {
                    pick = Some(w);
                    break;
                }
            }
        }
        let w = pick.ok_or_else(|| Error::Internal("no boundary crossing on path".into()))?;
        chosen.push(w);
    }
    let set: BTreeSet<Vid> = chosen.iter().copied().collect();
    if set.len() != infan.len() {
        return Err(Error::Internal("selection is not one vertex per path".into()));
    }
    let reach_avoiding = multi_reach_avoiding(d, x, &set);
    if reach_avoiding.contains(&v) {
        return Err(Error::Internal("selection fails to separate".into()));
    }
    Ok(AugmentOutcome::Separator { chosen, set })
}

/// Outcome of trying to realize an edge set I ⊆ in_D(v) as the exact
/// last-edge set of an internally disjoint r->v system.
#[derive(Clone, Debug)]
pub enum GOutcome {
    /// A system with E⁺ exactly I (the rv path included when rv ∈ I).
    Witness(PathSystem),
    /// Deficiency certificate in D↾_v(I−rv) minus rv.
    Refusal { achieved: usize, required: usize, cut: BTreeSet<Vid> },
}

/// Decides I ∈ 𝒢_D(v) constructively: in the digraph restricted so that
/// in(v) = I−rv (and without rv), a full system exists iff κ equals
/// |I−rv|.
pub fn realize_last_edges(
    d: &RootedDigraph,
    v: Vid,
    i_set: &BTreeSet<(Vid, Vid)>,
) -> Result<GOutcome> {
    if v == d.root() {
        return Err(Error::PreconditionViolated("target may not be the root".into()));
    }
    let r = d.root();
    let keep: BTreeSet<(Vid, Vid)> = i_set.iter().copied().filter(|&(a, _)| a != r).collect();
    let restricted = d.restrict_in(v, &keep)?;
    let h = restricted.without_root_edge(v);
    let (value, sn) = core(&h, v);
    if value < keep.len() {
        return Ok(GOutcome::Refusal {
            achieved: value,
            required: keep.len(),
            cut: sn.near_source_cut(),
        });
    }
    let mut raw = sn.decompose();
    if i_set.contains(&(r, v)) {
        raw.push(vec![r, v]);
    }
    let system = system_from_paths(d, r, raw)?;
    debug_assert_eq!(&system.e_plus().unwrap_or_default(), i_set);
    Ok(GOutcome::Witness(system))
}

/// Vertices reachable from any member of `starts` while avoiding `avoid`.
pub fn multi_reach_avoiding(
    d: &RootedDigraph,
    starts: &BTreeSet<Vid>,
    avoid: &BTreeSet<Vid>,
) -> BTreeSet<Vid> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<Vid> = Vec::new();
    for &s in starts {
        if !avoid.contains(&s) && seen.insert(s) {
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for &w in d.out_neighbors(u) {
            if !avoid.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}
