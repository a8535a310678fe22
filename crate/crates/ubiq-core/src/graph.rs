//! Finite graphs, lazy locally finite generators and their windows.
//!
//! Vertices are dense integer ids. Windows assign ids in breadth-first
//! discovery order from the generator root, so smaller windows are always
//! induced subgraphs of larger ones with identical ids.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type VSet = BTreeSet<usize>;

/// Undirected simple graph with stable vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGraph {
    adj: BTreeMap<usize, BTreeSet<usize>>,
}

impl FiniteGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Path 0-1-...-(n-1). Test and fixture helper.
    pub fn path(n: usize) -> Self {
        let mut g = Self::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n > 2 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new();
        for v in 0..n {
            g.add_vertex(v);
            for u in 0..v {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Self::new();
        for v in 0..a + b {
            g.add_vertex(v);
        }
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new();
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self, v: usize) {
        self.adj.entry(v).or_default();
    }

    /// Inserts both endpoints. Self-loops are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "self-loops not allowed");
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn remove_vertex(&mut self, v: usize) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for u in nbrs {
                self.adj.get_mut(&u).map(|s| s.remove(&v));
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj.get_mut(&u).map(|s| s.remove(&v));
        self.adj.get_mut(&v).map(|s| s.remove(&u));
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(&u).map_or(false, |s| s.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VSet {
        self.adj.keys().copied().collect()
    }

    /// Edges as (u, v) with u < v, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (&u, nbrs) in &self.adj {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    /// Induced subgraph on `keep`, retaining original ids.
    pub fn induced(&self, keep: &VSet) -> FiniteGraph {
        let mut g = FiniteGraph::new();
        for &v in keep {
            if self.has_vertex(v) {
                g.add_vertex(v);
            }
        }
        for &v in keep {
            for u in self.neighbors(v) {
                if u < v && keep.contains(&u) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Induced subgraph on the complement of `drop`.
    pub fn without(&self, drop: &VSet) -> FiniteGraph {
        let keep: VSet = self.vertices().filter(|v| !drop.contains(v)).collect();
        self.induced(&keep)
    }

    /// Connected components, sorted by their smallest vertex.
    pub fn components(&self) -> Vec<VSet> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let comp = self.reachable_from(&BTreeSet::from([v]));
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn reachable_from(&self, start: &VSet) -> VSet {
        let mut seen: VSet = start.iter().filter(|v| self.has_vertex(**v)).copied().collect();
        let mut queue: VecDeque<usize> = seen.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        match self.adj.keys().next() {
            None => true,
            Some(&v) => self.reachable_from(&BTreeSet::from([v])).len() == self.vertex_count(),
        }
    }

    /// BFS distances from a set of sources; unreachable vertices are absent.
    pub fn distances_from(&self, start: &VSet) -> BTreeMap<usize, usize> {
        let mut dist = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &v in start {
            if self.has_vertex(v) {
                dist.insert(v, 0);
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for u in self.neighbors(v) {
                if !dist.contains_key(&u) {
                    dist.insert(u, d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Shortest path between two vertex sets avoiding `forbidden`, as a
    /// vertex sequence, or None. Deterministic (smallest-id tie breaks).
    pub fn shortest_path(&self, from: &VSet, to: &VSet, forbidden: &VSet) -> Option<Vec<usize>> {
        let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &v in from {
            if self.has_vertex(v) && !forbidden.contains(&v) {
                if to.contains(&v) {
                    return Some(vec![v]);
                }
                prev.insert(v, v);
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if forbidden.contains(&u) || prev.contains_key(&u) {
                    continue;
                }
                prev.insert(u, v);
                if to.contains(&u) {
                    let mut path = vec![u];
                    let mut cur = v;
                    loop {
                        path.push(cur);
                        if prev[&cur] == cur {
                            break;
                        }
                        cur = prev[&cur];
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(u);
            }
        }
        None
    }

    /// Checks that `seq` is a path in the graph: consecutive vertices
    /// adjacent, no repeats.
    pub fn is_path(&self, seq: &[usize]) -> bool {
        if seq.is_empty() {
            return false;
        }
        let distinct: VSet = seq.iter().copied().collect();
        if distinct.len() != seq.len() {
            return false;
        }
        seq.iter().all(|v| self.has_vertex(*v))
            && seq.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }
}

/// A separation (A, B) of a graph: A ∪ B = V with no edge between B∖A and A∖B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub a: VSet,
    pub b: VSet,
}

impl Separation {
    pub fn separator(&self) -> VSet {
        self.a.intersection(&self.b).copied().collect()
    }
}

/// True iff (a, b) is a separation of g.
pub fn is_separation(g: &FiniteGraph, a: &VSet, b: &VSet) -> bool {
    let all: VSet = a.union(b).copied().collect();
    if all != g.vertex_set() {
        return false;
    }
    for (u, v) in g.edges() {
        let u_strict_a = a.contains(&u) && !b.contains(&u);
        let v_strict_a = a.contains(&v) && !b.contains(&v);
        let u_strict_b = b.contains(&u) && !a.contains(&u);
        let v_strict_b = b.contains(&v) && !a.contains(&v);
        if (u_strict_a && v_strict_b) || (u_strict_b && v_strict_a) {
            return false;
        }
    }
    true
}

/// Nestedness of two separations.
pub fn are_nested(s1: &Separation, s2: &Separation) -> bool {
    let sub = |x: &VSet, y: &VSet| x.is_subset(y);
    (sub(&s1.a, &s2.a) && sub(&s2.b, &s1.b))
        || (sub(&s1.b, &s2.a) && sub(&s2.b, &s1.a))
        || (sub(&s1.a, &s2.b) && sub(&s2.a, &s1.b))
        || (sub(&s1.b, &s2.b) && sub(&s2.a, &s1.a))
}

/// Result of removing a vertex set: the component decomposition of g − X and
/// the designated component C(X, ε-proxy) maximizing boundary overlap.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentsReport {
    pub components: Vec<VSet>,
    /// Index into `components`, None when g − X is empty.
    pub designated: Option<usize>,
}

impl ComponentsReport {
    pub fn designated_set(&self) -> VSet {
        self.designated
            .map(|i| self.components[i].clone())
            .unwrap_or_default()
    }
}

/// Components of g − X with the boundary-richest one designated,
/// the finite-window stand-in for C(X, ε). Ties break to the component
/// with the smallest vertex id.
pub fn components_after_removal(g: &FiniteGraph, x: &VSet, boundary: &VSet) -> ComponentsReport {
    let rest = g.without(x);
    let components = rest.components();
    let designated = components
        .iter()
        .enumerate()
        .max_by(|(_, c1), (_, c2)| {
            let o1 = c1.intersection(boundary).count();
            let o2 = c2.intersection(boundary).count();
            // larger overlap wins; tie: smaller min id wins
            o1.cmp(&o2)
                .then_with(|| c2.iter().next().cmp(&c1.iter().next()))
        })
        .map(|(i, _)| i);
    ComponentsReport {
        components,
        designated,
    }
}

/// Generator label: a point in the generator's own coordinate system.
pub type Label = (i64, i64);

/// Finite presentations of locally finite infinite graphs.
///
/// The neighbor oracle is symmetric and every degree is finite, which the
/// window construction re-checks on the visited region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    /// One-way infinite path on (i, 0), i ≥ 0.
    Ray,
    /// Two-way infinite path on (i, 0), i ∈ ℤ.
    DoubleRay,
    /// Two rays (i, 0), (i, 1), i ≥ 0, with rungs.
    Ladder,
    /// The grid ℤ × ℤ.
    Grid,
    /// The half-grid: ℤ × ℕ (y ≥ 0). Columns x = c are its natural rays.
    HalfGrid,
    /// Root joined to expanding complete-bipartite layers; its end admits
    /// dense ray graphs (pebbly-suspect fixture). Label (k, i) = layer k,
    /// index i, with layer k holding k + 1 vertices.
    Fan,
    /// Copies of a guest graph hung off half-grid columns; see
    /// `tribes::synth_tribe`. The guest is encoded in the label's y < 0 part.
    Custom { name: String, edges: Vec<(Label, Label)> },
}

impl Generator {
    pub fn from_name(name: &str) -> Result<Generator> {
        match name {
            "ray" => Ok(Generator::Ray),
            "double-ray" => Ok(Generator::DoubleRay),
            "ladder" => Ok(Generator::Ladder),
            "grid" => Ok(Generator::Grid),
            "half-grid" => Ok(Generator::HalfGrid),
            "fan" => Ok(Generator::Fan),
            other => Err(Error::Parse(format!("unknown generator '{other}'"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Generator::Ray => "ray".into(),
            Generator::DoubleRay => "double-ray".into(),
            Generator::Ladder => "ladder".into(),
            Generator::Grid => "grid".into(),
            Generator::HalfGrid => "half-grid".into(),
            Generator::Fan => "fan".into(),
            Generator::Custom { name, .. } => name.clone(),
        }
    }

    pub fn root(&self) -> Label {
        (0, 0)
    }

    /// Neighbor oracle. Sorted output keeps window ids reproducible.
    pub fn oracle(&self, v: Label) -> Vec<Label> {
        let (x, y) = v;
        let mut out: Vec<Label> = match self {
            Generator::Ray => {
                let mut n = vec![(x + 1, 0)];
                if x > 0 {
                    n.push((x - 1, 0));
                }
                n
            }
            Generator::DoubleRay => vec![(x - 1, 0), (x + 1, 0)],
            Generator::Ladder => {
                let mut n = vec![(x + 1, y), (x, 1 - y)];
                if x > 0 {
                    n.push((x - 1, y));
                }
                n
            }
            Generator::Grid => vec![(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)],
            Generator::HalfGrid => {
                let mut n = vec![(x - 1, y), (x + 1, y), (x, y + 1)];
                if y > 0 {
                    n.push((x, y - 1));
                }
                n
            }
            Generator::Fan => {
                // layer k has k + 1 vertices; complete bipartite between layers
                let (k, i) = (x, y);
                let mut n = Vec::new();
                if k > 0 && i <= k {
                    for j in 0..k {
                        n.push((k - 1, j));
                    }
                }
                for j in 0..k + 2 {
                    n.push((k + 1, j));
                }
                n
            }
            Generator::Custom { edges, .. } => {
                let mut n = Vec::new();
                for &(a, b) in edges {
                    if a == v {
                        n.push(b);
                    }
                    if b == v {
                        n.push(a);
                    }
                }
                n
            }
        };
        out.sort();
        out.dedup();
        out
    }
}

/// A finite induced ball of a generator: the stand-in for the infinite graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowedGraph {
    pub graph: FiniteGraph,
    pub root: usize,
    pub radius: usize,
    /// Vertices at distance exactly `radius` from the root.
    pub boundary: VSet,
    /// id → distance from root.
    pub dist: Vec<usize>,
    /// id → generator label.
    pub labels: Vec<Label>,
    pub generator: String,
}

impl WindowedGraph {
    pub fn id_of(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }

    pub fn label_of(&self, id: usize) -> Label {
        self.labels[id]
    }

    /// Ball of radius `r` around the root, as a vertex set of ids.
    pub fn ball(&self, r: usize) -> VSet {
        (0..self.labels.len()).filter(|&v| self.dist[v] <= r).collect()
    }

    /// Vertices whose distance from the root is at most radius − ⌈radius/4⌉.
    /// Claims about end behaviour are restricted to this region; the
    /// outermost shell is boundary artefact.
    pub fn trusted(&self) -> VSet {
        self.ball(self.trusted_radius())
    }

    pub fn trusted_radius(&self) -> usize {
        self.radius - self.radius.div_ceil(4)
    }
}

/// Builds the induced ball of the oracle around its root.
///
/// Vertex ids are assigned in breadth-first discovery order with neighbors
/// visited in label order, so `window(gen, r)` is an induced subgraph of
/// `window(gen, r')` for r < r' with identical ids.
pub fn window(gen: &Generator, radius: usize) -> Result<WindowedGraph> {
    let root_label = gen.root();
    let mut labels = vec![root_label];
    let mut id_of: BTreeMap<Label, usize> = BTreeMap::from([(root_label, 0)]);
    let mut dist = vec![0usize];
    let mut graph = FiniteGraph::new();
    graph.add_vertex(0);

    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if dist[v] == radius {
            continue;
        }
        for nl in gen.oracle(labels[v]) {
            let u = *id_of.entry(nl).or_insert_with(|| {
                labels.push(nl);
                dist.push(dist[v] + 1);
                graph.add_vertex(labels.len() - 1);
                queue.push_back(labels.len() - 1);
                labels.len() - 1
            });
            graph.add_edge(v, u);
        }
    }

    // oracle symmetry on the visited region
    for v in 0..labels.len() {
        for nl in gen.oracle(labels[v]) {
            if let Some(&u) = id_of.get(&nl) {
                if !gen.oracle(labels[u]).contains(&labels[v]) {
                    return Err(Error::GeneratorInvalid(format!(
                        "oracle asymmetric between {:?} and {:?}",
                        labels[v], labels[u]
                    )));
                }
            }
        }
    }

    let boundary: VSet = (0..labels.len()).filter(|&v| dist[v] == radius).collect();
    Ok(WindowedGraph {
        graph,
        root: 0,
        radius,
        boundary,
        dist,
        labels,
        generator: gen.name(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_radius_zero_is_single_vertex() {
        let w = window(&Generator::Grid, 0).unwrap();
        assert_eq!(w.graph.vertex_count(), 1);
        assert_eq!(w.graph.edge_count(), 0);
        assert_eq!(w.boundary, BTreeSet::from([0]));
    }

    #[test]
    fn grid_radius_one_ball() {
        // enumerating the oracle ball: root + 4 neighbors, edges only to root
        let w = window(&Generator::Grid, 1).unwrap();
        assert_eq!(w.graph.vertex_count(), 5);
        assert_eq!(w.graph.edge_count(), 4);
    }

    #[test]
    fn half_grid_radius_one_ball() {
        let w = window(&Generator::HalfGrid, 1).unwrap();
        assert_eq!(w.graph.vertex_count(), 4);
        assert_eq!(w.graph.edge_count(), 3);
    }

    #[test]
    fn windows_nest_as_induced_subgraphs() {
        for gen in [
            Generator::Ray,
            Generator::DoubleRay,
            Generator::Ladder,
            Generator::Grid,
            Generator::HalfGrid,
            Generator::Fan,
        ] {
            let small = window(&gen, 3).unwrap();
            let large = window(&gen, 5).unwrap();
            for v in small.graph.vertices() {
                assert_eq!(small.labels[v], large.labels[v], "{:?}", gen);
            }
            let induced = large.graph.induced(&small.graph.vertex_set());
            assert_eq!(induced, small.graph, "{:?}", gen);
        }
    }

    #[test]
    fn components_designation_prefers_boundary() {
        // path a-b-c as ids 0-1-2; removing the middle leaves {0} and {2}
        let g = FiniteGraph::path(3);
        let rep = components_after_removal(&g, &BTreeSet::from([1]), &BTreeSet::from([2]));
        assert_eq!(rep.components.len(), 2);
        assert_eq!(rep.designated_set(), BTreeSet::from([2]));
    }

    #[test]
    fn components_empty_removal_is_identity() {
        let g = FiniteGraph::path(4);
        let rep = components_after_removal(&g, &BTreeSet::new(), &BTreeSet::new());
        assert_eq!(rep.components.len(), 1);
        assert_eq!(rep.designated_set(), g.vertex_set());
    }

    #[test]
    fn separation_checks() {
        let g = FiniteGraph::path(3);
        let v = g.vertex_set();
        assert!(is_separation(&g, &v, &v));
        assert!(is_separation(
            &g,
            &BTreeSet::from([0, 1]),
            &BTreeSet::from([1, 2])
        ));
        let e = FiniteGraph::from_edges(&[(0, 1)]);
        assert!(!is_separation(
            &e,
            &BTreeSet::from([0]),
            &BTreeSet::from([1])
        ));
    }

    #[test]
    fn asymmetric_oracle_rejected() {
        let gen = Generator::Custom {
            name: "broken".into(),
            edges: vec![((0, 0), (1, 0))],
        };
        // symmetric as written; break it by hand
        let mut edges = match gen {
            Generator::Custom { edges, .. } => edges,
            _ => unreachable!(),
        };
        edges.push(((1, 0), (2, 0)));
        // a one-directional custom oracle cannot be expressed through the
        // edge list, so emulate by checking the symmetric case passes
        let ok = Generator::Custom {
            name: "ok".into(),
            edges,
        };
        assert!(window(&ok, 2).is_ok());
    }
}
