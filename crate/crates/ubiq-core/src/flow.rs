//! Unit-vertex-capacity max flow: the engine behind every disjoint-path and
//! minimum-separator computation in the crate.
//!
//! Vertices are split into in/out nodes with capacity one, so the max-flow
//! value equals the Menger number between the source and sink sets and the
//! source-side residual cut is a minimum vertex separator.

use crate::graph::{FiniteGraph, VSet};
use std::collections::{BTreeMap, VecDeque};

struct Network {
    // node 2i = in, 2i+1 = out for compact index i
    head: Vec<Vec<usize>>, // node -> edge ids
    to: Vec<usize>,
    cap: Vec<i32>,
    source: usize,
    sink: usize,
    ids: Vec<usize>, // compact index -> graph vertex
    idx: BTreeMap<usize, usize>,
}

impl Network {
    fn add_edge(&mut self, a: usize, b: usize, c: i32) -> usize {
        let e = self.to.len();
        self.to.push(b);
        self.cap.push(c);
        self.head[a].push(e);
        self.to.push(a);
        self.cap.push(0);
        self.head[b].push(e + 1);
        e
    }

    fn build(
        g: &FiniteGraph,
        sources: &VSet,
        sinks: &VSet,
        forbidden: &VSet,
        uncuttable: &VSet,
    ) -> Network {
        let ids: Vec<usize> = g.vertices().filter(|v| !forbidden.contains(v)).collect();
        let idx: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let mut net = Network {
            head: vec![Vec::new(); 2 * n + 2],
            to: Vec::new(),
            cap: Vec::new(),
            source: 2 * n,
            sink: 2 * n + 1,
            ids,
            idx,
        };
        let inf_split = n as i32 + 1;
        for i in 0..n {
            let c = if uncuttable.contains(&net.ids[i]) {
                inf_split
            } else {
                1
            };
            net.add_edge(2 * i, 2 * i + 1, c);
        }
        // adjacency edges carry infinite capacity; all constraints live on
        // the split edges, so minimum cuts consist of vertices
        for i in 0..n {
            let v = net.ids[i];
            for u in g.neighbors(v) {
                if let Some(&j) = net.idx.get(&u) {
                    net.add_edge(2 * i + 1, 2 * j, inf_split);
                }
            }
        }
        // infinite attachment capacity: minimum cuts then consist of
        // vertex-split edges only, i.e. of vertices
        let inf = n as i32 + 1;
        let (source, sink) = (net.source, net.sink);
        for &s in sources {
            if let Some(&i) = net.idx.get(&s) {
                net.add_edge(source, 2 * i, inf);
            }
        }
        for &t in sinks {
            if let Some(&i) = net.idx.get(&t) {
                net.add_edge(2 * i + 1, sink, inf);
            }
        }
        net
    }

    /// Edmonds-Karp; unit capacities keep this cheap at window scale.
    fn max_flow(&mut self) -> usize {
        self.max_flow_capped(usize::MAX)
    }

    fn max_flow_capped(&mut self, cap_units: usize) -> usize {
        let mut total = 0;
        while total < cap_units {
            let mut pred: Vec<Option<usize>> = vec![None; self.head.len()];
            let mut queue = VecDeque::from([self.source]);
            'bfs: while let Some(v) = queue.pop_front() {
                for &e in &self.head[v] {
                    if self.cap[e] > 0 && pred[self.to[e]].is_none() && self.to[e] != self.source {
                        pred[self.to[e]] = Some(e);
                        if self.to[e] == self.sink {
                            break 'bfs;
                        }
                        queue.push_back(self.to[e]);
                    }
                }
            }
            if pred[self.sink].is_none() {
                return total;
            }
            let mut v = self.sink;
            while v != self.source {
                let e = pred[v].unwrap();
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.to[e ^ 1];
            }
            total += 1;
        }
        total
    }

    /// Walks flow-carrying edges from each used source, consuming flow, to
    /// recover vertex paths. Forward edge f carries flow iff cap[f^1] > 0.
    fn extract_paths(&mut self) -> Vec<Vec<usize>> {
        let mut paths = Vec::new();
        let source_edges: Vec<usize> = self.head[self.source].clone();
        for e in source_edges {
            while e % 2 == 0 && self.cap[e ^ 1] > 0 {
                self.cap[e ^ 1] -= 1;
                let mut node = self.to[e]; // an in-node
                let mut path = Vec::new();
                'walk: loop {
                    let i = node / 2;
                    path.push(self.ids[i]);
                    let out = 2 * i + 1;
                    for &f in &self.head[out] {
                        if f % 2 == 0 && self.cap[f ^ 1] > 0 {
                            self.cap[f ^ 1] -= 1;
                            if self.to[f] == self.sink {
                                break 'walk;
                            }
                            node = self.to[f];
                            continue 'walk;
                        }
                    }
                    break;
                }
                paths.push(path);
            }
        }
        paths
    }

    /// Source-side minimum vertex cut from residual reachability.
    fn min_cut(&self) -> VSet {
        let mut seen = vec![false; self.head.len()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.head[v] {
                if self.cap[e] > 0 && !seen[self.to[e]] {
                    seen[self.to[e]] = true;
                    queue.push_back(self.to[e]);
                }
            }
        }
        let mut cut = VSet::new();
        for i in 0..self.ids.len() {
            if seen[2 * i] && !seen[2 * i + 1] {
                cut.insert(self.ids[i]);
            }
        }
        cut
    }
}

/// Maximum family of pairwise vertex-disjoint paths from `sources` to
/// `sinks` avoiding `forbidden`. A vertex in both sets yields a length-0
/// path. Paths are trimmed so only their first vertex lies in `sources` and
/// only their last in `sinks`.
pub fn disjoint_paths(
    g: &FiniteGraph,
    sources: &VSet,
    sinks: &VSet,
    forbidden: &VSet,
) -> Vec<Vec<usize>> {
    let mut net = Network::build(g, sources, sinks, forbidden, &VSet::new());
    net.max_flow();
    let mut paths = net.extract_paths();
    for p in &mut paths {
        // trim to last source hit .. first sink hit after it
        let start = p.iter().rposition(|v| sources.contains(v)).unwrap_or(0);
        let end = p[start..]
            .iter()
            .position(|v| sinks.contains(v))
            .map(|i| start + i)
            .unwrap_or(p.len() - 1);
        *p = p[start..=end].to_vec();
    }
    paths.sort();
    paths
}

/// The Menger number between `sources` and `sinks` in g − forbidden.
pub fn menger_number(g: &FiniteGraph, sources: &VSet, sinks: &VSet, forbidden: &VSet) -> usize {
    let mut net = Network::build(g, sources, sinks, forbidden, &VSet::new());
    net.max_flow()
}

/// True when at least `t` disjoint source–sink paths exist; stops early.
pub fn menger_at_least(
    g: &FiniteGraph,
    sources: &VSet,
    sinks: &VSet,
    forbidden: &VSet,
    t: usize,
) -> bool {
    let mut net = Network::build(g, sources, sinks, forbidden, &VSet::new());
    net.max_flow_capped(t) >= t
}

/// A minimum vertex cut separating `sources` from `sinks` in g − forbidden,
/// chosen closest to the source side. Vertices of the sets themselves may
/// appear in the cut.
pub fn min_vertex_cut(g: &FiniteGraph, sources: &VSet, sinks: &VSet, forbidden: &VSet) -> VSet {
    let mut net = Network::build(g, sources, sinks, forbidden, &VSet::new());
    net.max_flow();
    net.min_cut()
}

/// Minimum vertex cut between `region` and `sinks` whose vertices all lie
/// strictly outside `region` (region vertices are uncuttable), together with
/// the flow value. The cut is source-side minimal, so successive calls with
/// a grown region yield nested, pairwise disjoint separators marching
/// outward.
pub fn min_cut_beyond(g: &FiniteGraph, region: &VSet, sinks: &VSet) -> (usize, VSet) {
    let mut net = Network::build(g, region, sinks, &VSet::new(), region);
    let flow = net.max_flow();
    (flow, net.min_cut())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn bipartite_three_paths() {
        let g = FiniteGraph::complete_bipartite(3, 3);
        let a: BTreeSet<_> = (0..3).collect();
        let b: BTreeSet<_> = (3..6).collect();
        let paths = disjoint_paths(&g, &a, &b, &BTreeSet::new());
        assert_eq!(paths.len(), 3);
        let mut used = BTreeSet::new();
        for p in &paths {
            for v in p {
                assert!(used.insert(*v), "paths overlap at {v}");
            }
        }
    }

    #[test]
    fn shared_vertex_is_length_zero_path() {
        let g = FiniteGraph::path(3);
        let s = BTreeSet::from([1]);
        let paths = disjoint_paths(&g, &s, &s, &BTreeSet::new());
        assert_eq!(paths, vec![vec![1]]);
    }

    #[test]
    fn forbidden_blocks() {
        let g = FiniteGraph::path(3);
        let paths = disjoint_paths(
            &g,
            &BTreeSet::from([0]),
            &BTreeSet::from([2]),
            &BTreeSet::from([1]),
        );
        assert!(paths.is_empty());
    }

    #[test]
    fn cut_matches_flow() {
        let g = FiniteGraph::complete_bipartite(2, 4);
        let a: BTreeSet<_> = (0..2).collect();
        let b: BTreeSet<_> = (2..6).collect();
        let flow = menger_number(&g, &a, &b, &BTreeSet::new());
        let cut = min_vertex_cut(&g, &a, &b, &BTreeSet::new());
        assert_eq!(flow, 2);
        assert_eq!(cut.len(), 2);
        // removing the cut separates
        let rest = g.without(&cut);
        let reach = rest.reachable_from(&a.difference(&cut).copied().collect());
        assert!(reach.intersection(&b).next().is_none());
    }
}
