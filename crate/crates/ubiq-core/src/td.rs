//! Rooted tree-decompositions: validation, per-edge separations and boughs,
//! leanness checking, the connected-bough transformation, and ray
//! decompositions of one-ended windows via nested minimum separators.

use crate::error::{Error, Result};
use crate::flow;
use crate::graph::{is_separation, FiniteGraph, Generator, VSet, WindowedGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A rooted tree-decomposition (T, 𝒱). Tree edges are identified by their
/// higher node: edge e has e⁺ = t and e⁻ = parent(t).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    /// parent[t] = None exactly for the root.
    pub parent: Vec<Option<usize>>,
    pub bags: Vec<VSet>,
    pub root: usize,
}

impl TreeDecomposition {
    /// Single-node decomposition with one bag.
    pub fn single(bag: VSet) -> Self {
        TreeDecomposition {
            parent: vec![None],
            bags: vec![bag],
            root: 0,
        }
    }

    /// Path decomposition t₀ - t₁ - … with the given bags.
    pub fn path(bags: Vec<VSet>) -> Self {
        let parent = (0..bags.len())
            .map(|i| if i == 0 { None } else { Some(i - 1) })
            .collect();
        TreeDecomposition {
            parent,
            bags,
            root: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Higher nodes of all tree edges, ascending.
    pub fn edges(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&t| self.parent[t].is_some())
            .collect()
    }

    pub fn children(&self, t: usize) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&c| self.parent[c] == Some(t))
            .collect()
    }

    pub fn subtree(&self, t: usize) -> Vec<usize> {
        let mut out = vec![t];
        let mut queue = VecDeque::from([t]);
        while let Some(v) = queue.pop_front() {
            for c in self.children(v) {
                out.push(c);
                queue.push_back(c);
            }
        }
        out.sort();
        out
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1) - 1
    }

    /// Nodes on the unique tree path between two nodes, inclusive.
    pub fn path_between(&self, t1: usize, t2: usize) -> Vec<usize> {
        let depth = |mut t: usize| {
            let mut d = 0;
            while let Some(p) = self.parent[t] {
                t = p;
                d += 1;
            }
            d
        };
        let (mut a, mut b) = (t1, t2);
        let (mut da, mut db) = (depth(a), depth(b));
        let mut left = vec![a];
        let mut right = vec![b];
        while da > db {
            a = self.parent[a].unwrap();
            left.push(a);
            da -= 1;
        }
        while db > da {
            b = self.parent[b].unwrap();
            right.push(b);
            db -= 1;
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
            left.push(a);
            right.push(b);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        left
    }

    pub fn tree_distance(&self, t1: usize, t2: usize) -> usize {
        self.path_between(t1, t2).len() - 1
    }

    /// Union of bags over a node set.
    pub fn bag_union(&self, nodes: &[usize]) -> VSet {
        nodes
            .iter()
            .flat_map(|&t| self.bags[t].iter().copied())
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum TdViolation {
    UncoveredVertex { vertex: usize },
    UncoveredEdge { edge: (usize, usize) },
    BrokenSubtree { vertex: usize },
    ForeignVertex { vertex: usize, node: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct TdReport {
    pub violations: Vec<TdViolation>,
    pub width: usize,
}

impl TdReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the three tree-decomposition axioms, reporting each violation with
/// a witness. Width = max bag size − 1.
pub fn validate_td(g: &FiniteGraph, td: &TreeDecomposition) -> TdReport {
    let mut violations = Vec::new();
    let covered: VSet = td.bag_union(&(0..td.node_count()).collect::<Vec<_>>());
    for v in g.vertices() {
        if !covered.contains(&v) {
            violations.push(TdViolation::UncoveredVertex { vertex: v });
        }
    }
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if !g.has_vertex(v) {
                violations.push(TdViolation::ForeignVertex { vertex: v, node: t });
            }
        }
    }
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            violations.push(TdViolation::UncoveredEdge { edge: (u, v) });
        }
    }
    // subtree condition: nodes holding v induce a connected subgraph of T
    for v in g.vertices() {
        let holders: Vec<usize> = (0..td.node_count())
            .filter(|&t| td.bags[t].contains(&v))
            .collect();
        if holders.len() <= 1 {
            continue;
        }
        let holder_set: BTreeSet<usize> = holders.iter().copied().collect();
        let mut seen = BTreeSet::from([holders[0]]);
        let mut queue = VecDeque::from([holders[0]]);
        while let Some(t) = queue.pop_front() {
            let mut nbrs = td.children(t);
            if let Some(p) = td.parent[t] {
                nbrs.push(p);
            }
            for n in nbrs {
                if holder_set.contains(&n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        if seen.len() != holders.len() {
            violations.push(TdViolation::BrokenSubtree { vertex: v });
        }
    }
    TdReport {
        violations,
        width: td.width(),
    }
}

/// The separation induced by a tree edge: A(e)/B(e) as bag unions outside/
/// inside the subtree past e, with separator S(e) = V_{e⁻} ∩ V_{e⁺}.
/// B(e) is the bough rooted in e.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeData {
    pub a: VSet,
    pub b: VSet,
    pub s: VSet,
}

pub fn edge_separation(g: &FiniteGraph, td: &TreeDecomposition, e: usize) -> Result<EdgeData> {
    let parent = td.parent[e].ok_or_else(|| {
        Error::Precondition(format!("node {e} is the root, not the higher end of an edge"))
    })?;
    let inside = td.subtree(e);
    let inside_set: BTreeSet<usize> = inside.iter().copied().collect();
    let outside: Vec<usize> = (0..td.node_count())
        .filter(|t| !inside_set.contains(t))
        .collect();
    let b = td.bag_union(&inside);
    let a = td.bag_union(&outside);
    let s: VSet = td.bags[parent].intersection(&td.bags[e]).copied().collect();
    let meet: VSet = a.intersection(&b).copied().collect();
    if meet != s {
        return Err(Error::Invariant(format!(
            "S(e) = V(e⁻) ∩ V(e⁺) = {s:?} differs from A(e) ∩ B(e) = {meet:?}: invalid tree-decomposition"
        )));
    }
    if !is_separation(g, &a, &b) {
        return Err(Error::Invariant(
            "(A(e), B(e)) is not a separation: invalid tree-decomposition".into(),
        ));
    }
    Ok(EdgeData { a, b, s })
}

/// The graph Ḡ[B(e)]: the bough with all separator-internal edges deleted.
pub fn bough_graph(g: &FiniteGraph, data: &EdgeData) -> FiniteGraph {
    let mut gb = g.induced(&data.b);
    for &u in &data.s {
        for &v in &data.s {
            if u < v {
                gb.remove_edge(u, v);
            }
        }
    }
    gb
}

#[derive(Debug, Clone, Serialize)]
pub struct LeanCounterexample {
    pub k: usize,
    pub t1: usize,
    pub t2: usize,
    pub x1: VSet,
    pub x2: VSet,
    pub paths_found: usize,
}

fn subsets_of_size(set: &VSet, k: usize) -> Vec<VSet> {
    let items: Vec<usize> = set.iter().copied().collect();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
        }
        if idx[k.saturating_sub(1)] == items.len() - 1 && idx[0] == items.len() - k {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exhaustive leanness check up to `k_max`: for every k, every node pair and
/// every pair of size-k bag subsets, either k disjoint connecting paths
/// exist or some bag of size < k lies on the tree path. Returns the first
/// counterexample in deterministic order.
pub fn is_lean(
    g: &FiniteGraph,
    td: &TreeDecomposition,
    k_max: usize,
) -> Option<LeanCounterexample> {
    for k in 1..=k_max {
        for t1 in 0..td.node_count() {
            for t2 in t1..td.node_count() {
                let escape = td
                    .path_between(t1, t2)
                    .iter()
                    .any(|&t| td.bags[t].len() < k);
                if escape {
                    continue;
                }
                for x1 in subsets_of_size(&td.bags[t1], k) {
                    for x2 in subsets_of_size(&td.bags[t2], k) {
                        let n = flow::menger_number(g, &x1, &x2, &VSet::new());
                        if n < k {
                            return Some(LeanCounterexample {
                                k,
                                t1,
                                t2,
                                x1,
                                x2,
                                paths_found: n,
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// The connected-bough transformation: a new decomposition with the same
/// width whose non-root nodes are pairs (e, C) of an input tree edge and a
/// component C of G − S(e) inside B(e), with bags V_{e⁺} ∩ (C ∪ N(C)).
/// Every bough of the output is connected. Returns the decomposition and
/// the homomorphism π onto the input tree.
pub fn connected_bough_transform(
    g: &FiniteGraph,
    td: &TreeDecomposition,
    lean_check: Option<usize>,
) -> Result<(TreeDecomposition, Vec<usize>)> {
    let report = validate_td(g, td);
    if !report.ok() {
        return Err(Error::Precondition(format!(
            "input tree-decomposition invalid: {:?}",
            report.violations
        )));
    }
    if let Some(k_max) = lean_check {
        if let Some(cex) = is_lean(g, td, k_max) {
            return Err(Error::Precondition(format!(
                "input not lean: k = {}, t1 = {}, t2 = {}",
                cex.k, cex.t1, cex.t2
            )));
        }
    }

    // nodes: root, then (e, C) in BFS order over e with components by min id
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut bags: Vec<VSet> = vec![td.bags[td.root].clone()];
    let mut pi: Vec<usize> = vec![td.root];
    // (edge, component) -> new node id
    let mut node_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut comps_of_edge: BTreeMap<usize, Vec<VSet>> = BTreeMap::new();

    // BFS over old tree from the root
    let mut order: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([td.root]);
    while let Some(t) = queue.pop_front() {
        for c in td.children(t) {
            order.push(c);
            queue.push_back(c);
        }
    }

    for &e in &order {
        let data = edge_separation(g, td, e)?;
        let bough_interior: VSet = data.b.difference(&data.s).copied().collect();
        let comps: Vec<VSet> = g
            .without(&data.s)
            .components()
            .into_iter()
            .filter(|c| c.iter().all(|v| bough_interior.contains(v)) && !c.is_empty())
            .collect();
        for (ci, comp) in comps.iter().enumerate() {
            let neighborhood: VSet = comp
                .iter()
                .flat_map(|&v| g.neighbors(v))
                .filter(|u| !comp.contains(u))
                .collect();
            let closed: VSet = comp.union(&neighborhood).copied().collect();
            let bag: VSet = td.bags[e].intersection(&closed).copied().collect();
            let parent_node = match td.parent[e] {
                Some(p) if p == td.root && td.parent[p].is_none() => 0,
                Some(p) => {
                    // parent edge is the edge into p; find its component ⊇ comp
                    let pcomps = &comps_of_edge[&p];
                    let pc = pcomps
                        .iter()
                        .position(|c| comp.is_subset(c))
                        .ok_or_else(|| {
                            Error::Invariant(format!(
                                "component at edge {e} not nested in a parent component"
                            ))
                        })?;
                    node_of[&(p, pc)]
                }
                None => unreachable!("edges have parents"),
            };
            parent.push(Some(parent_node));
            bags.push(bag);
            pi.push(e);
            node_of.insert((e, ci), bags.len() - 1);
        }
        comps_of_edge.insert(e, comps);
    }

    let out = TreeDecomposition {
        parent,
        bags,
        root: 0,
    };
    let check = validate_td(g, &out);
    if !check.ok() {
        return Err(Error::Invariant(format!(
            "transform produced an invalid decomposition: {:?}",
            check.violations
        )));
    }
    if out.width() > td.width() {
        return Err(Error::Invariant(format!(
            "transform increased width: {} > {}",
            out.width(),
            td.width()
        )));
    }
    // every bough of the output must be connected
    for e in out.edges() {
        let data = edge_separation(g, &out, e)?;
        if !g.induced(&data.b).is_connected() {
            return Err(Error::Invariant(format!(
                "bough at new edge {e} disconnected"
            )));
        }
    }
    // π is a graph homomorphism onto the input tree
    for e in out.edges() {
        let p = out.parent[e].unwrap();
        let (a, b) = (pi[p], pi[e]);
        let adjacent = td.parent[a] == Some(b) || td.parent[b] == Some(a);
        if !adjacent {
            return Err(Error::Invariant(format!(
                "π not a homomorphism at new edge ({p}, {e})"
            )));
        }
    }
    Ok((out, pi))
}

/// A ray decomposition of a one-ended window: a path of bags whose
/// consecutive separators are the nested minimum cuts, all of size k and
/// pairwise disjoint.
#[derive(Debug, Clone, Serialize)]
pub struct RayDecomposition {
    pub td: TreeDecomposition,
    /// Region of the window actually covered by the bags.
    pub covered: VSet,
    /// The separators S(tᵢt_{i+1}), in order.
    pub cuts: Vec<VSet>,
    /// k disjoint paths from the stabilized core to the window boundary,
    /// each crossing every cut exactly once.
    pub rays: Vec<Vec<usize>>,
    pub detected_degree: usize,
}

/// Detects the end-degree proxy: the minimum ball radius at which the
/// ball-to-boundary minimum cut stabilizes, and that cut value.
pub fn detect_end_degree(w: &WindowedGraph) -> Result<(usize, usize)> {
    let j_max = (w.radius / 2).max(1);
    let mut prev: Option<usize> = None;
    for j in 1..=j_max {
        let region = w.ball(j);
        if region.len() == w.graph.vertex_count() {
            break;
        }
        let (flow, _) = flow::min_cut_beyond(&w.graph, &region, &w.boundary);
        if prev == Some(flow) {
            return Ok((j - 1, flow));
        }
        prev = Some(flow);
    }
    Err(Error::NotApplicable(format!(
        "detected cut grows with radius (last = {:?}); end looks thick at this window",
        prev
    )))
}

/// Builds the ray decomposition of a one-ended generator window with thin
/// end degree k: nested minimum separators greedily pushed outward, bags
/// between consecutive separators.
pub fn ray_decomposition_one_ended(
    gen: &Generator,
    radius: usize,
    k: usize,
) -> Result<RayDecomposition> {
    let w = crate::graph::window(gen, radius)?;
    ray_decomposition_of_window(&w, k)
}

pub fn ray_decomposition_of_window(w: &WindowedGraph, k: usize) -> Result<RayDecomposition> {
    let (j_star, degree) = detect_end_degree(w)?;
    if degree != k {
        return Err(Error::NotApplicable(format!(
            "detected end degree {degree} ≠ requested {k}"
        )));
    }
    layered_decomposition(&w.graph, &w.ball(j_star), &w.boundary, k, w.trusted_radius(), &w.dist)
}

/// Core of the layering: repeatedly take the source-side minimal k-cut
/// beyond the current region and push the region outward, stopping at the
/// trusted radius or when the cut degenerates.
pub fn layered_decomposition(
    g: &FiniteGraph,
    core: &VSet,
    boundary: &VSet,
    k: usize,
    trusted_radius: usize,
    dist: &[usize],
) -> Result<RayDecomposition> {
    let mut region = core.clone();
    let mut cuts: Vec<VSet> = Vec::new();
    loop {
        let (f, cut) = flow::min_cut_beyond(g, &region, boundary);
        if f != k || cut.len() != k {
            break;
        }
        if cut.iter().any(|&v| dist[v] > trusted_radius) || cut.intersection(boundary).count() > 0 {
            break;
        }
        // grow region to the root side of the cut, inclusive
        let root_side = {
            let rest = g.without(&cut);
            rest.reachable_from(&region)
        };
        let mut next = root_side;
        next.extend(cut.iter().copied());
        if next.len() == region.len() {
            break; // no progress
        }
        cuts.push(cut);
        region = next;
    }
    if cuts.len() < 2 {
        return Err(Error::WindowExhausted(format!(
            "only {} separators fit inside the trusted region",
            cuts.len()
        )));
    }

    // bags: V_t0 = R_1 ∪ C_1, V_ti = (R_{i+1} ∪ C_{i+1}) ∖ R_i
    let root_side_of = |cut: &VSet| -> VSet { g.without(cut).reachable_from(core) };
    let mut bags: Vec<VSet> = Vec::new();
    let r1 = root_side_of(&cuts[0]);
    bags.push(r1.union(&cuts[0]).copied().collect());
    let mut r_prev = r1;
    for i in 1..cuts.len() {
        let r_next = root_side_of(&cuts[i]);
        let bag: VSet = r_next
            .union(&cuts[i])
            .copied()
            .filter(|v| !r_prev.contains(v))
            .collect();
        bags.push(bag);
        r_prev = r_next;
    }
    let covered: VSet = r_prev.union(cuts.last().unwrap()).copied().collect();
    let td = TreeDecomposition::path(bags);

    let report = validate_td(&g.induced(&covered), &td);
    if !report.ok() {
        return Err(Error::Invariant(format!(
            "layering produced an invalid decomposition: {:?}",
            report.violations
        )));
    }
    // consecutive separators disjoint, every vertex in at most two parts
    for w2 in cuts.windows(2) {
        if w2[0].intersection(&w2[1]).next().is_some() {
            return Err(Error::Invariant("consecutive separators intersect".into()));
        }
    }
    for v in &covered {
        let count = td.bags.iter().filter(|b| b.contains(v)).count();
        if count > 2 {
            return Err(Error::Invariant(format!(
                "vertex {v} appears in {count} > 2 parts"
            )));
        }
    }

    let rays = flow::disjoint_paths(g, core, boundary, &VSet::new());
    if rays.len() < k {
        return Err(Error::WindowExhausted(format!(
            "only {} disjoint rays reach the boundary, need {k}",
            rays.len()
        )));
    }
    let mut rays = rays;
    rays.truncate(k);
    Ok(RayDecomposition {
        td,
        covered,
        cuts,
        rays,
        detected_degree: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bag_valid() {
        let g = FiniteGraph::complete(4);
        let td = TreeDecomposition::single(g.vertex_set());
        let rep = validate_td(&g, &td);
        assert!(rep.ok());
        assert_eq!(rep.width, 3);
    }

    #[test]
    fn path_decomposition_of_path_valid() {
        let g = FiniteGraph::path(5);
        let bags = (0..4).map(|i| BTreeSet::from([i, i + 1])).collect();
        let td = TreeDecomposition::path(bags);
        let rep = validate_td(&g, &td);
        assert!(rep.ok());
        assert_eq!(rep.width, 1);
    }

    #[test]
    fn uncovered_edge_detected() {
        let g = FiniteGraph::path(3);
        let bags = vec![BTreeSet::from([0, 1]), BTreeSet::from([2])];
        let td = TreeDecomposition::path(bags);
        let rep = validate_td(&g, &td);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, TdViolation::UncoveredEdge { edge: (1, 2) })));
    }

    #[test]
    fn edge_separation_of_path_decomposition() {
        let g = FiniteGraph::path(4);
        let bags = (0..3).map(|i| BTreeSet::from([i, i + 1])).collect();
        let td = TreeDecomposition::path(bags);
        // middle tree edge: between bags {1,2} and {2,3}
        let data = edge_separation(&g, &td, 2).unwrap();
        assert_eq!(data.s, BTreeSet::from([2]));
        assert!(is_separation(&g, &data.a, &data.b));
    }

    #[test]
    fn star_decomposition_leaf_edges() {
        // star K_{1,3}: center 0, leaves 1..3; center bag {0}, leaf bags {0,i}
        let g = FiniteGraph::from_edges(&[(0, 1), (0, 2), (0, 3)]);
        let td = TreeDecomposition {
            parent: vec![None, Some(0), Some(0), Some(0)],
            bags: vec![
                BTreeSet::from([0]),
                BTreeSet::from([0, 1]),
                BTreeSet::from([0, 2]),
                BTreeSet::from([0, 3]),
            ],
            root: 0,
        };
        assert!(validate_td(&g, &td).ok());
        for e in td.edges() {
            let data = edge_separation(&g, &td, e).unwrap();
            assert_eq!(data.b, td.bags[e]);
        }
    }

    #[test]
    fn p3_two_bags_not_lean() {
        let g = FiniteGraph::path(3);
        let td = TreeDecomposition::path(vec![BTreeSet::from([0, 1]), BTreeSet::from([1, 2])]);
        let cex = is_lean(&g, &td, 2).expect("should not be lean");
        assert_eq!(cex.k, 2);
        assert_eq!(cex.x1, BTreeSet::from([0, 1]));
        assert_eq!(cex.x2, BTreeSet::from([1, 2]));
    }

    #[test]
    fn p3_with_middle_singleton_lean() {
        let g = FiniteGraph::path(3);
        let td = TreeDecomposition::path(vec![
            BTreeSet::from([0, 1]),
            BTreeSet::from([1]),
            BTreeSet::from([1, 2]),
        ]);
        assert!(is_lean(&g, &td, 3).is_none());
    }

    #[test]
    fn complete_graph_single_bag_lean() {
        let g = FiniteGraph::complete(4);
        let td = TreeDecomposition::single(g.vertex_set());
        assert!(is_lean(&g, &td, 4).is_none());
    }

    #[test]
    fn bough_transform_on_path() {
        let g = FiniteGraph::path(4);
        let bags = (0..3).map(|i| BTreeSet::from([i, i + 1])).collect();
        let td = TreeDecomposition::path(bags);
        let (out, pi) = connected_bough_transform(&g, &td, None).unwrap();
        assert!(validate_td(&g, &out).ok());
        assert!(out.width() <= td.width());
        assert_eq!(pi[out.root], td.root);
    }

    #[test]
    fn interleaved_path_decomposition_is_lean() {
        // singleton separators between pair bags
        let g = FiniteGraph::path(3);
        let td = TreeDecomposition::path(vec![
            BTreeSet::from([0, 1]),
            BTreeSet::from([1]),
            BTreeSet::from([1, 2]),
        ]);
        let (out, _) = connected_bough_transform(&g, &td, Some(2)).unwrap();
        assert!(validate_td(&g, &out).ok());
    }

    #[test]
    fn bough_transform_star_single_bag() {
        // K_{1,3} with its two-bag decomposition splits into one node per
        // (edge, component)
        let g = FiniteGraph::from_edges(&[(0, 1), (0, 2), (0, 3)]);
        let td = TreeDecomposition {
            parent: vec![None, Some(0)],
            bags: vec![BTreeSet::from([0]), BTreeSet::from([0, 1, 2, 3])],
            root: 0,
        };
        assert!(validate_td(&g, &td).ok());
        let (out, _) = connected_bough_transform(&g, &td, None).unwrap();
        assert!(validate_td(&g, &out).ok());
        // three leaf components under the single edge
        assert_eq!(out.node_count(), 4);
    }

    #[test]
    fn ray_window_layering() {
        let dec = ray_decomposition_one_ended(&Generator::Ray, 12, 1).unwrap();
        for cut in &dec.cuts {
            assert_eq!(cut.len(), 1);
        }
        assert!(dec.cuts.len() >= 3);
    }

    #[test]
    fn ladder_window_layering() {
        let dec = ray_decomposition_one_ended(&Generator::Ladder, 12, 2).unwrap();
        for cut in &dec.cuts {
            assert_eq!(cut.len(), 2);
        }
        for w2 in dec.cuts.windows(2) {
            assert!(w2[0].intersection(&w2[1]).next().is_none());
        }
    }

    #[test]
    fn grid_window_rejected() {
        let err = ray_decomposition_one_ended(&Generator::Grid, 10, 4).unwrap_err();
        assert!(matches!(err, Error::NotApplicable(_)));
    }
}
