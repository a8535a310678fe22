//! Ray families in windows and their end structure: ray graphs, linkages
//! and transition functions, transition boxes, end classification, core
//! rays with the ≤ order, buffered families, preserving linkages and the
//! grid-like cyclic order.
//!
//! An in-window "ray" is a boundary-reaching path; "infinitely many disjoint
//! paths" becomes a threshold t of disjoint paths inside the window. Results
//! carry the window radius and threshold they were computed at.

use crate::error::{Error, Result};
use crate::flow;
use crate::graph::{FiniteGraph, Generator, Label, VSet, WindowedGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_THRESHOLD: usize = 3;

/// An indexed family of pairwise disjoint boundary-reaching paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayFamily {
    pub rays: Vec<Vec<usize>>,
}

impl RayFamily {
    pub fn new(w: &WindowedGraph, rays: Vec<Vec<usize>>, min_len: usize) -> Result<Self> {
        let mut used = VSet::new();
        for (i, ray) in rays.iter().enumerate() {
            if !w.graph.is_path(ray) {
                return Err(Error::Precondition(format!("ray {i} is not a path")));
            }
            if ray.len() < min_len {
                return Err(Error::Precondition(format!(
                    "ray {i} shorter than the configured depth {min_len}"
                )));
            }
            let last = *ray.last().unwrap();
            if !w.boundary.contains(&last) {
                return Err(Error::Precondition(format!(
                    "ray {i} does not end on the window boundary"
                )));
            }
            for &v in ray {
                if !used.insert(v) {
                    return Err(Error::Precondition(format!(
                        "rays intersect at vertex {v}"
                    )));
                }
            }
        }
        Ok(RayFamily { rays })
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn inits(&self) -> Vec<usize> {
        self.rays.iter().map(|r| r[0]).collect()
    }

    pub fn vertex_set(&self) -> VSet {
        self.rays.iter().flatten().copied().collect()
    }

    pub fn subfamily(&self, indices: &[usize]) -> RayFamily {
        RayFamily {
            rays: indices.iter().map(|&i| self.rays[i].clone()).collect(),
        }
    }

    /// Tails after X: each ray cut past its last X-hit.
    pub fn tails_after(&self, x: &VSet) -> Vec<Vec<usize>> {
        self.rays
            .iter()
            .map(|r| {
                let cut = r.iter().rposition(|v| x.contains(v)).map_or(0, |p| p + 1);
                r[cut.min(r.len() - 1)..].to_vec()
            })
            .collect()
    }
}

/// Vertical column rays of a half-grid window: column x = c runs from
/// (c, 0) upward to the boundary.
pub fn column_rays(w: &WindowedGraph, columns: &[i64]) -> Result<RayFamily> {
    if w.generator != Generator::HalfGrid.name() {
        return Err(Error::Precondition(
            "column rays are defined on half-grid windows".into(),
        ));
    }
    let r = w.radius as i64;
    let mut rays = Vec::new();
    for &c in columns {
        if c.unsigned_abs() as usize >= w.radius {
            return Err(Error::WindowExhausted(format!(
                "column {c} does not reach depth in a radius-{} window",
                w.radius
            )));
        }
        let mut ray = Vec::new();
        for y in 0..=(r - c.abs()) {
            let id = w
                .id_of((c, y))
                .ok_or_else(|| Error::WindowExhausted(format!("({c},{y}) outside window")))?;
            ray.push(id);
        }
        rays.push(ray);
    }
    RayFamily::new(w, rays, 2)
}

/// Staircase spoke rays of a grid window: k disjoint monotone lattice paths
/// from near the origin out to the boundary, one per direction 2πj/k,
/// indexed counterclockwise.
pub fn spoke_rays(w: &WindowedGraph, k: usize) -> Result<RayFamily> {
    if w.generator != Generator::Grid.name() {
        return Err(Error::Precondition(
            "spoke rays are defined on grid windows".into(),
        ));
    }
    if k < 3 {
        return Err(Error::Precondition("need at least 3 spokes".into()));
    }
    'outer: for r0 in 2..=(w.radius / 2).max(2) {
        let mut rays: Vec<Vec<usize>> = Vec::new();
        let mut used = VSet::new();
        for j in 0..k {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            let (dx, dy) = (theta.cos(), theta.sin());
            let mut pts: Vec<Label> = Vec::new();
            let steps = (w.radius * 3) as i64;
            let mut rho = r0 as f64;
            while (rho as i64) < steps {
                let p = ((rho * dx).round() as i64, (rho * dy).round() as i64);
                if pts.last() != Some(&p) {
                    pts.push(p);
                }
                rho += 0.4;
            }
            // rasterize into a lattice path (x first, then y)
            let mut path: Vec<Label> = vec![pts[0]];
            for win in pts.windows(2) {
                let (mut x, mut y) = win[0];
                let (tx, ty) = win[1];
                while x != tx {
                    x += (tx - x).signum();
                    path.push((x, y));
                }
                while y != ty {
                    y += (ty - y).signum();
                    path.push((x, y));
                }
            }
            // map to ids, stop at the boundary
            let mut ray = Vec::new();
            for p in path {
                match w.id_of(p) {
                    Some(id) => {
                        ray.push(id);
                        if w.boundary.contains(&id) {
                            break;
                        }
                    }
                    None => break,
                }
            }
            if ray.is_empty() || !w.boundary.contains(ray.last().unwrap()) {
                continue 'outer;
            }
            // simple-path check and disjointness against previous spokes
            let distinct: VSet = ray.iter().copied().collect();
            if distinct.len() != ray.len() || distinct.intersection(&used).next().is_some() {
                continue 'outer;
            }
            used.extend(distinct);
            rays.push(ray);
        }
        if let Ok(fam) = RayFamily::new(w, rays, 2) {
            return Ok(fam);
        }
    }
    Err(Error::WindowExhausted(format!(
        "could not place {k} disjoint spokes in a radius-{} grid window",
        w.radius
    )))
}

/// Detects the radius at which the ball-to-boundary cut stabilizes and
/// returns a maximum disjoint family from that ball; with `from` given,
/// paths start in `from` instead.
pub fn max_disjoint_rays(w: &WindowedGraph, from: Option<&VSet>) -> Result<RayFamily> {
    let sources: VSet = match from {
        Some(set) => {
            if set.intersection(&w.boundary).next().is_some() {
                return Err(Error::Precondition(
                    "start set intersects the window boundary".into(),
                ));
            }
            set.clone()
        }
        None => {
            let j = stabilized_ball(w);
            w.ball(j)
        }
    };
    let paths = flow::disjoint_paths(&w.graph, &sources, &w.boundary, &VSet::new());
    RayFamily::new(w, paths, 1)
}

fn stabilized_ball(w: &WindowedGraph) -> usize {
    let j_max = (w.radius / 2).max(1);
    let mut prev = None;
    for j in 1..=j_max {
        let f = flow::menger_number(&w.graph, &w.ball(j), &w.boundary, &VSet::new());
        if prev == Some(f) {
            return j - 1;
        }
        prev = Some(f);
    }
    j_max
}

/// The ray graph RG(ℛ): vertices are ray indices, an edge ij means at least
/// `threshold` disjoint Rᵢ–Rⱼ paths avoiding every other ray of the family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayGraph {
    pub n: usize,
    pub adj: Vec<BTreeSet<usize>>,
    pub threshold: usize,
}

impl RayGraph {
    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(&j)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for &j in &self.adj[i] {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = BTreeSet::from([0usize]);
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == self.n
    }

    pub fn components_without(&self, removed: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let mut seen: BTreeSet<usize> = removed.clone();
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if !seen.contains(&u) {
                        seen.insert(u);
                        comp.insert(u);
                        stack.push(u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_cycle(&self) -> bool {
        self.n >= 3 && self.is_connected() && (0..self.n).all(|v| self.degree(v) == 2)
    }

    /// The cycle in its correct orientation: starts at the smallest vertex
    /// and proceeds toward that vertex's smaller neighbor.
    pub fn oriented_cycle(&self) -> Option<Vec<usize>> {
        if !self.is_cycle() {
            return None;
        }
        let mut order = vec![0usize];
        let mut prev = 0;
        let mut cur = *self.adj[0].iter().next().unwrap();
        while cur != 0 {
            order.push(cur);
            let next = *self.adj[cur].iter().find(|&&u| u != prev).unwrap();
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    /// Longest bare path (all inner vertices of degree 2), oriented from its
    /// lexicographically smaller endpoint. Ties break to the smaller vertex
    /// sequence.
    pub fn longest_bare_path(&self) -> Vec<usize> {
        if self.n == 0 {
            return Vec::new();
        }
        let mut best: Vec<usize> = vec![(0..self.n).min().unwrap()];
        for u in 0..self.n {
            for &v in &self.adj[u] {
                let mut path = vec![u, v];
                let mut in_path: BTreeSet<usize> = path.iter().copied().collect();
                loop {
                    let last = *path.last().unwrap();
                    if self.degree(last) != 2 {
                        break;
                    }
                    let prev = path[path.len() - 2];
                    let next = *self.adj[last].iter().find(|&&x| x != prev).unwrap();
                    if !in_path.insert(next) {
                        break;
                    }
                    path.push(next);
                }
                let canon = canonical_orientation(&path);
                if canon.len() > best.len() || (canon.len() == best.len() && canon < best) {
                    best = canon;
                }
            }
        }
        best
    }
}

fn canonical_orientation(path: &[usize]) -> Vec<usize> {
    let fwd = path.to_vec();
    let mut rev = fwd.clone();
    rev.reverse();
    if fwd.first() <= rev.first() {
        fwd
    } else {
        rev
    }
}

/// Computes the ray graph of a family inside a window (or any ambient
/// graph): edge ij iff ≥ t disjoint Rᵢ–Rⱼ paths avoid all other rays.
pub fn ray_graph_in(g: &FiniteGraph, fam: &RayFamily, t: usize) -> RayGraph {
    let n = fam.len();
    let sets: Vec<VSet> = fam.rays.iter().map(|r| r.iter().copied().collect()).collect();
    let mut adj = vec![BTreeSet::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let mut forbidden = VSet::new();
            for (k, set) in sets.iter().enumerate() {
                if k != i && k != j {
                    forbidden.extend(set.iter().copied());
                }
            }
            if flow::menger_at_least(g, &sets[i], &sets[j], &forbidden, t) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    RayGraph {
        n,
        adj,
        threshold: t,
    }
}

pub fn ray_graph(w: &WindowedGraph, fam: &RayFamily, t: usize) -> RayGraph {
    ray_graph_in(&w.graph, fam, t)
}

/// A linkage from ℛ to 𝒮: per-ray connecting paths P_i from a vertex on R_i
/// to a vertex on S_{σ(i)}, after the set `after`.
#[derive(Debug, Clone, Serialize)]
pub struct Linkage {
    /// paths[i] links ray i of the source family; first vertex on R_i, last
    /// on S_{σ(i)}. A single shared vertex is a length-0 path.
    pub paths: Vec<Vec<usize>>,
    pub sigma: BTreeMap<usize, usize>,
    pub after: VSet,
}

impl Linkage {
    /// The transitioned family ℛ∘_𝒫𝒮: prefix of each R_i up to the path
    /// start, the path, then the matched S-ray from the landing vertex on.
    pub fn members(&self, r: &RayFamily, s: &RayFamily) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for (i, path) in self.paths.iter().enumerate() {
            let j = *self
                .sigma
                .get(&i)
                .ok_or_else(|| Error::Invariant(format!("σ undefined at {i}")))?;
            let z = path[0];
            let y = *path.last().unwrap();
            let zi = r.rays[i]
                .iter()
                .position(|&v| v == z)
                .ok_or_else(|| Error::Invariant(format!("path {i} does not start on R_{i}")))?;
            let yj = s.rays[j]
                .iter()
                .position(|&v| v == y)
                .ok_or_else(|| Error::Invariant(format!("path {i} does not end on S_{j}")))?;
            let mut member: Vec<usize> = r.rays[i][..=zi].to_vec();
            member.extend(path[1..].iter().copied());
            member.extend(s.rays[j][yj + 1..].iter().copied());
            out.push(member);
        }
        Ok(out)
    }

    /// Restriction to a subset of source indices; a sub-linkage of a
    /// transitional linkage stays transitional.
    pub fn sub_linkage(&self, keep: &[usize]) -> Linkage {
        Linkage {
            paths: keep.iter().map(|&i| self.paths[i].clone()).collect(),
            sigma: keep
                .iter()
                .enumerate()
                .map(|(new, &old)| (new, self.sigma[&old]))
                .collect(),
            after: self.after.clone(),
        }
    }
}

/// Asserts every clause of the linkage definition: σ injective, paths sit
/// on their rays, the transitioned family is pairwise disjoint
/// boundary-reaching paths, and the "after X" clause holds verbatim
/// (X ∩ V(R_i) inside the kept prefix, no other X vertex used).
pub fn verify_linkage(
    w: &WindowedGraph,
    r: &RayFamily,
    s: &RayFamily,
    linkage: &Linkage,
) -> Result<()> {
    if linkage.paths.len() != r.len() {
        return Err(Error::Invariant(format!(
            "linkage has {} paths for {} rays",
            linkage.paths.len(),
            r.len()
        )));
    }
    let mut images = BTreeSet::new();
    for (&i, &j) in &linkage.sigma {
        if i >= r.len() || j >= s.len() {
            return Err(Error::Invariant(format!("σ({i}) = {j} out of range")));
        }
        if !images.insert(j) {
            return Err(Error::Invariant(format!("σ not injective at image {j}")));
        }
    }
    let members = linkage.members(r, s)?;
    let mut used = VSet::new();
    for (i, member) in members.iter().enumerate() {
        if !w.graph.is_path(member) {
            return Err(Error::Invariant(format!("member {i} is not a path")));
        }
        if !w.boundary.contains(member.last().unwrap()) {
            return Err(Error::Invariant(format!(
                "member {i} does not reach the window boundary"
            )));
        }
        for &v in member {
            if !used.insert(v) {
                return Err(Error::Invariant(format!("members intersect at {v}")));
            }
        }
    }
    // after clause
    for (i, path) in linkage.paths.iter().enumerate() {
        let z = path[0];
        let zi = r.rays[i].iter().position(|&v| v == z).unwrap();
        let prefix: VSet = r.rays[i][..=zi].iter().copied().collect();
        for &v in &r.rays[i] {
            if linkage.after.contains(&v) && !prefix.contains(&v) {
                return Err(Error::Invariant(format!(
                    "after-set vertex {v} on R_{i} beyond the kept prefix"
                )));
            }
        }
        for &v in &members[i] {
            if linkage.after.contains(&v) && !prefix.contains(&v) {
                return Err(Error::Invariant(format!(
                    "member {i} meets the after-set at {v} outside its prefix"
                )));
            }
        }
    }
    Ok(())
}

/// Auxiliary routing graph for linkage search: free space plus one virtual
/// node per source ray and per target ray. Ray interiors are not traversable;
/// paths leave a source tail and enter a target ray directly.
struct LinkageNet {
    aux: FiniteGraph,
    vs: BTreeMap<usize, usize>,
    vt: BTreeMap<usize, usize>,
    /// contact aux-node -> (source index, target index, tail vertex, target vertex)
    contact: BTreeMap<usize, (usize, usize, usize, usize)>,
    tails: Vec<Vec<usize>>,
    free: VSet,
}

impl LinkageNet {
    fn build(
        g: &FiniteGraph,
        r: &RayFamily,
        s: &RayFamily,
        after: &VSet,
        sources: &[usize],
        targets: &[usize],
        excluded: &VSet,
    ) -> LinkageNet {
        let tails = r.tails_after(after);
        let all_rays: VSet = r
            .vertex_set()
            .union(&s.vertex_set())
            .copied()
            .collect();
        let free: VSet = g
            .vertices()
            .filter(|v| !all_rays.contains(v) && !after.contains(v) && !excluded.contains(v))
            .collect();
        let mut aux = g.induced(&free);
        let base = g.vertices().max().unwrap_or(0) + 1;
        let mut vs = BTreeMap::new();
        let mut vt = BTreeMap::new();
        for (pos, &i) in sources.iter().enumerate() {
            let vid = base + pos;
            aux.add_vertex(vid);
            vs.insert(i, vid);
            for &z in &tails[i] {
                if excluded.contains(&z) {
                    continue;
                }
                for u in g.neighbors(z) {
                    if free.contains(&u) {
                        aux.add_edge(vid, u);
                    }
                }
            }
        }
        let tbase = base + sources.len();
        for (pos, &j) in targets.iter().enumerate() {
            let vid = tbase + pos;
            aux.add_vertex(vid);
            vt.insert(j, vid);
            for &y in &s.rays[j] {
                if excluded.contains(&y) {
                    continue;
                }
                for u in g.neighbors(y) {
                    if free.contains(&u) {
                        aux.add_edge(vid, u);
                    }
                }
            }
        }
        // direct contacts: a tail vertex adjacent to (or equal to) a target
        // ray vertex, one shortcut node per (source, target) pair
        let mut contact = BTreeMap::new();
        let mut cbase = tbase + targets.len();
        for &i in sources {
            for &j in targets {
                let sset: VSet = s.rays[j].iter().copied().collect();
                let mut found: Option<(usize, usize)> = None;
                for &z in &tails[i] {
                    if excluded.contains(&z) {
                        continue;
                    }
                    if sset.contains(&z) {
                        found = Some((z, z));
                        break;
                    }
                    if let Some(y) = g
                        .neighbors(z)
                        .filter(|y| sset.contains(y) && !excluded.contains(y))
                        .next()
                    {
                        found = Some((z, y));
                        break;
                    }
                }
                if let Some((z, y)) = found {
                    let cid = cbase;
                    cbase += 1;
                    aux.add_vertex(cid);
                    aux.add_edge(vs[&i], cid);
                    aux.add_edge(cid, vt[&j]);
                    contact.insert(cid, (i, j, z, y));
                }
            }
        }
        LinkageNet {
            aux,
            vs,
            vt,
            contact,
            tails,
            free,
        }
    }

    /// Decodes an aux path [vs_i, …, vt_j] into (i, j, connecting path).
    fn decode(&self, g: &FiniteGraph, s: &RayFamily, aux_path: &[usize]) -> (usize, usize, Vec<usize>) {
        let i = *self
            .vs
            .iter()
            .find(|(_, &v)| v == aux_path[0])
            .map(|(k, _)| k)
            .unwrap();
        let j = *self
            .vt
            .iter()
            .find(|(_, &v)| v == *aux_path.last().unwrap())
            .map(|(k, _)| k)
            .unwrap();
        let inner = &aux_path[1..aux_path.len() - 1];
        if inner.len() == 1 {
            if let Some(&(_, _, z, y)) = self.contact.get(&inner[0]) {
                let path = if z == y { vec![z] } else { vec![z, y] };
                return (i, j, path);
            }
        }
        // inner vertices are free; pick the smallest tail/target attachments
        let first = inner[0];
        let last = *inner.last().unwrap();
        let z = *self.tails[i]
            .iter()
            .find(|&&z| g.neighbors(z).any(|u| u == first))
            .expect("vs edge came from a tail vertex");
        let y = *s.rays[j]
            .iter()
            .find(|&&y| g.neighbors(y).any(|u| u == last))
            .expect("vt edge came from a target vertex");
        let mut path = vec![z];
        path.extend(inner.iter().copied());
        path.push(y);
        (i, j, path)
    }
}

/// Finds a linkage from ℛ to 𝒮 after `after`. When `avoid` is given, the
/// candidates are tried in index order and the returned linkage's
/// transitioned family avoids the chosen region entirely (strong linking).
pub struct AvoidRegion {
    pub vertices: VSet,
    /// index into 𝒮 of the ray this region carries
    pub ray_index: usize,
}

pub fn find_linkage(
    w: &WindowedGraph,
    r: &RayFamily,
    s: &RayFamily,
    after: &VSet,
    avoid: Option<&[AvoidRegion]>,
) -> Result<(Linkage, Option<usize>)> {
    if r.len() > s.len() {
        return Err(Error::Precondition(format!(
            "|ℛ| = {} exceeds |𝒮| = {}",
            r.len(),
            s.len()
        )));
    }
    for (j, ray) in s.rays.iter().enumerate() {
        if ray.iter().any(|v| after.contains(v)) {
            return Err(Error::Precondition(format!(
                "target ray {j} meets the after-set"
            )));
        }
    }
    match avoid {
        None => attempt_linkage(w, r, s, after, &VSet::new(), None).map(|l| (l, None)),
        Some(regions) => {
            let mut last_err = None;
            for (ell, region) in regions.iter().enumerate() {
                match attempt_linkage(w, r, s, after, &region.vertices, Some(region.ray_index)) {
                    Ok(l) => return Ok((l, Some(ell))),
                    Err(e) => last_err = Some(e),
                }
            }
            Err(last_err.unwrap_or_else(|| {
                Error::WindowExhausted("no avoid candidates supplied".into())
            }))
        }
    }
}

fn attempt_linkage(
    w: &WindowedGraph,
    r: &RayFamily,
    s: &RayFamily,
    after: &VSet,
    excluded: &VSet,
    excluded_ray: Option<usize>,
) -> Result<Linkage> {
    let g = &w.graph;
    // identity pre-pass: a source ray equal to a target ray links to itself
    // with a length-0 path at its last after-hit
    let mut sigma: BTreeMap<usize, usize> = BTreeMap::new();
    let mut paths: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut taken_targets = BTreeSet::new();
    for (i, ray) in r.rays.iter().enumerate() {
        if let Some(j) = s.rays.iter().position(|sr| sr == ray) {
            if excluded_ray == Some(j) || ray.iter().any(|v| excluded.contains(v)) {
                continue;
            }
            let zi = ray.iter().rposition(|v| after.contains(v)).unwrap_or(0);
            sigma.insert(i, j);
            paths.insert(i, vec![ray[zi]]);
            taken_targets.insert(j);
        }
    }
    let pending: Vec<usize> = (0..r.len()).filter(|i| !sigma.contains_key(i)).collect();
    let open_targets: Vec<usize> = (0..s.len())
        .filter(|j| {
            !taken_targets.contains(j)
                && excluded_ray != Some(*j)
                && s.rays[*j].iter().all(|v| !excluded.contains(v))
        })
        .collect();
    if !pending.is_empty() {
        if open_targets.len() < pending.len() {
            return Err(Error::WindowExhausted(
                "not enough disjoint targets outside the excluded region".into(),
            ));
        }
        // matched members occupy their rays fully; exclude them
        let mut occupied = excluded.clone();
        for (&i, _) in &sigma {
            occupied.extend(r.rays[i].iter().copied());
        }
        let net = LinkageNet::build(g, r, s, after, &pending, &open_targets, &occupied);
        let vs_set: VSet = net.vs.values().copied().collect();
        let vt_set: VSet = net.vt.values().copied().collect();
        let found = flow::disjoint_paths(&net.aux, &vs_set, &vt_set, &VSet::new());
        if found.len() < pending.len() {
            return Err(Error::WindowExhausted(format!(
                "linked only {} of {} rays",
                found.len(),
                pending.len()
            )));
        }
        for aux_path in &found {
            let (i, j, path) = net.decode(g, s, aux_path);
            sigma.insert(i, j);
            paths.insert(i, path);
        }
    }
    let linkage = Linkage {
        paths: (0..r.len()).map(|i| paths[&i].clone()).collect(),
        sigma,
        after: after.clone(),
    };
    verify_linkage(w, r, s, &linkage)?;
    if !excluded.is_empty() {
        let members = linkage.members(r, s)?;
        for m in &members {
            if m.iter().any(|v| excluded.contains(v)) {
                return Err(Error::WindowExhausted(
                    "transitioned family touches the avoided region".into(),
                ));
            }
        }
    }
    Ok(linkage)
}

/// Routes one connecting path per prescribed (source, target) pair,
/// greedily in the given order with shortest aux paths; retries in reverse
/// order before giving up.
pub fn route_prescribed(
    w: &WindowedGraph,
    r: &RayFamily,
    s: &RayFamily,
    after: &VSet,
    pairs: &[(usize, usize)],
) -> Result<Linkage> {
    let g = &w.graph;
    let try_order = |order: &[usize]| -> Result<Linkage> {
        let sources: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let targets: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let net = LinkageNet::build(g, r, s, after, &sources, &targets, &VSet::new());
        let mut used = VSet::new();
        let mut sigma = BTreeMap::new();
        let mut paths: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &pi in order {
            let (i, j) = pairs[pi];
            let from = BTreeSet::from([net.vs[&i]]);
            let to = BTreeSet::from([net.vt[&j]]);
            // other pairs' virtual nodes are implicitly avoided: they are
            // only reachable through their own attachments
            let forbidden: VSet = used
                .union(
                    &net.contact
                        .iter()
                        .filter(|(_, &(ci, cj, _, _))| (ci, cj) != (i, j))
                        .map(|(&cid, _)| cid)
                        .collect(),
                )
                .copied()
                .collect();
            let aux_path = net
                .aux
                .shortest_path(&from, &to, &forbidden)
                .ok_or_else(|| {
                    Error::WindowExhausted(format!("no route for pair ({i} → {j})"))
                })?;
            let (di, dj, path) = net.decode(g, s, &aux_path);
            for &v in &aux_path[1..aux_path.len() - 1] {
                used.insert(v);
            }
            // reserve the actual junction vertices too
            used.insert(path[0]);
            used.insert(*path.last().unwrap());
            sigma.insert(di, dj);
            paths.insert(di, path);
        }
        let linkage = Linkage {
            paths: (0..r.len())
                .map(|i| paths.get(&i).cloned().unwrap_or_default())
                .collect(),
            sigma,
            after: after.clone(),
        };
        Ok(linkage)
    };

    let forward: Vec<usize> = (0..pairs.len()).collect();
    let backward: Vec<usize> = (0..pairs.len()).rev().collect();
    for order in [forward, backward] {
        if let Ok(linkage) = try_order(&order) {
            if verify_linkage(w, r, s, &linkage).is_ok() {
                return Ok(linkage);
            }
        }
    }
    Err(Error::WindowExhausted(format!(
        "could not route {} prescribed pairs",
        pairs.len()
    )))
}

/// Concatenation of linkages: l1 links ℛ to 𝒮, l2 links ℛ∘𝒮 to 𝒯; the
/// composite links ℛ to 𝒯 with σ = σ₂∘σ₁ and is re-verified in full.
pub fn concatenate(
    w: &WindowedGraph,
    r: &RayFamily,
    s: &RayFamily,
    t: &RayFamily,
    l1: &Linkage,
    l2: &Linkage,
) -> Result<Linkage> {
    let mid = RayFamily {
        rays: l1.members(r, s)?,
    };
    let members2 = l2.members(&mid, t)?;
    let mut paths = Vec::new();
    for (i, member2) in members2.iter().enumerate() {
        // longest common prefix with R_i marks where the composite departs
        let ri = &r.rays[i];
        let mut q = 0;
        while q < member2.len() && q < ri.len() && member2[q] == ri[q] {
            q += 1;
        }
        if q == 0 {
            return Err(Error::Invariant(format!(
                "composite member {i} does not start on R_{i}"
            )));
        }
        // landing vertex on T_{σ2(i)}
        let j = l2.sigma[&i];
        let y = *l2.paths[i].last().unwrap();
        let ypos = member2.iter().position(|&v| v == y).unwrap();
        let path = member2[q - 1..=ypos].to_vec();
        let _ = j;
        paths.push(path);
    }
    let sigma = l2.sigma.clone();
    let composite = Linkage {
        paths,
        sigma,
        after: l1.after.clone(),
    };
    verify_linkage(w, r, t, &composite)?;
    Ok(composite)
}

/// End verdicts at window scale. Pebbly is only ever "suspect": the pebble
/// game itself is out of scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndVerdict {
    GridLike,
    HalfGridLike,
    PebblySuspect,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub radius: usize,
    pub size: usize,
    pub is_cycle: bool,
    pub bare_path: Vec<usize>,
    pub junk: usize,
    /// Central path (or cycle) in its correct orientation.
    pub oriented: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndClassification {
    pub verdict: EndVerdict,
    pub n_param: usize,
    pub samples: Vec<SampleReport>,
    pub threshold: usize,
    pub diagnostics: Vec<String>,
}

/// Samples ray graphs across window radii and family sizes and classifies
/// the end: all cycles → grid-like; bare paths with a stable junk count →
/// half-grid-like; anything inconsistent → pebbly-suspect.
pub fn classify_end(
    gen: &Generator,
    radii: &[usize],
    sizes: &[usize],
    t: usize,
) -> Result<EndClassification> {
    if radii.len() < 2 {
        return Err(Error::Precondition(
            "classification needs at least two window radii".into(),
        ));
    }
    let mut samples = Vec::new();
    let mut diagnostics = Vec::new();
    for &radius in radii {
        let w = crate::graph::window(gen, radius)?;
        let full = max_disjoint_rays(&w, None)?;
        for &k in sizes {
            if k > full.len() {
                diagnostics.push(format!(
                    "radius {radius}: only {} disjoint rays, skipping size {k}",
                    full.len()
                ));
                continue;
            }
            let fam = pick_spread(&w, &full, k);
            let rg = ray_graph(&w, &fam, t);
            let bare = rg.longest_bare_path();
            samples.push(SampleReport {
                radius,
                size: k,
                is_cycle: rg.is_cycle(),
                junk: k - bare.len(),
                oriented: if rg.is_cycle() {
                    rg.oriented_cycle().unwrap()
                } else {
                    bare.clone()
                },
                bare_path: bare,
            });
        }
    }
    if samples.is_empty() {
        return Err(Error::WindowExhausted(
            "no samples could be drawn at the given radii".into(),
        ));
    }
    let all_cycles = samples.iter().all(|s| s.is_cycle);
    if all_cycles {
        return Ok(EndClassification {
            verdict: EndVerdict::GridLike,
            n_param: 1,
            samples,
            threshold: t,
            diagnostics,
        });
    }
    let any_cycle = samples.iter().any(|s| s.is_cycle);
    let junks: BTreeSet<usize> = samples.iter().map(|s| s.junk).collect();
    let n_param = *junks.iter().max().unwrap();
    // half-grid-like requires the junk count to be stable: independent of
    // the sample size and radius
    if !any_cycle && junks.len() == 1 {
        return Ok(EndClassification {
            verdict: EndVerdict::HalfGridLike,
            n_param,
            samples,
            threshold: t,
            diagnostics,
        });
    }
    diagnostics.push(format!(
        "inconsistent shapes: junk counts {junks:?}, cycles present: {any_cycle}"
    ));
    Ok(EndClassification {
        verdict: EndVerdict::PebblySuspect,
        n_param,
        samples,
        threshold: t,
        diagnostics,
    })
}

/// Evenly spread k rays out of a maximum family, ordered by the label of
/// their boundary endpoint.
fn pick_spread(w: &WindowedGraph, full: &RayFamily, k: usize) -> RayFamily {
    let mut order: Vec<usize> = (0..full.len()).collect();
    order.sort_by_key(|&i| w.label_of(*full.rays[i].last().unwrap()));
    let m = full.len();
    let picks: Vec<usize> = if k == 1 {
        vec![order[0]]
    } else {
        (0..k)
            .map(|i| order[(i * (m - 1)) / (k - 1)])
            .collect()
    };
    full.subfamily(&picks)
}

/// Core-ray analysis of a family in a half-grid-like window.
#[derive(Debug, Clone, Serialize)]
pub struct CoreOrderReport {
    pub core: Vec<bool>,
    /// Core ray indices in ≤ order (positions along the oriented central path).
    pub order: Vec<usize>,
    /// For each core ray: the ray indices in its ⊤ side and ⊥ side.
    pub top_bottom: BTreeMap<usize, (BTreeSet<usize>, BTreeSet<usize>)>,
    pub n_param: usize,
}

/// Flags core rays (removal splits the ray graph into two components of
/// size ≥ N+1, witnessed by the family or a one-ray-dropped subfamily) and
/// computes the induced linear order along the oriented central path.
pub fn core_order(
    w: &WindowedGraph,
    fam: &RayFamily,
    n_param: usize,
    t: usize,
) -> Result<CoreOrderReport> {
    let rg = ray_graph(w, fam, t);
    if rg.is_cycle() {
        return Err(Error::Precondition(
            "family has a cycle ray graph; core order is for half-grid-like ends".into(),
        ));
    }
    let k = fam.len();
    let mut core = vec![false; k];
    for c in 0..k {
        if witnesses_core(&rg, c, n_param) {
            core[c] = true;
            continue;
        }
        // search one-ray-dropped subfamilies for a witness
        for drop in 0..k {
            if drop == c {
                continue;
            }
            let keep: Vec<usize> = (0..k).filter(|&i| i != drop).collect();
            let sub = fam.subfamily(&keep);
            let sub_rg = ray_graph(w, &sub, t);
            let c_pos = keep.iter().position(|&i| i == c).unwrap();
            if witnesses_core(&sub_rg, c_pos, n_param) {
                core[c] = true;
                break;
            }
        }
    }
    let central = rg.longest_bare_path();
    let pos: BTreeMap<usize, usize> = central.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut order: Vec<usize> = (0..k).filter(|&i| core[i] && pos.contains_key(&i)).collect();
    order.sort_by_key(|i| pos[i]);
    let mut top_bottom = BTreeMap::new();
    for &c in &order {
        let comps = rg.components_without(&BTreeSet::from([c]));
        let mut top = BTreeSet::new();
        let mut bottom = BTreeSet::new();
        for comp in comps {
            let before = comp
                .iter()
                .filter(|i| pos.get(i).is_some_and(|p| *p < pos[&c]))
                .count();
            let after = comp
                .iter()
                .filter(|i| pos.get(i).is_some_and(|p| *p > pos[&c]))
                .count();
            if before >= after {
                top.extend(comp);
            } else {
                bottom.extend(comp);
            }
        }
        top_bottom.insert(c, (top, bottom));
    }
    Ok(CoreOrderReport {
        core,
        order,
        top_bottom,
        n_param,
    })
}

fn witnesses_core(rg: &RayGraph, c: usize, n_param: usize) -> bool {
    let comps = rg.components_without(&BTreeSet::from([c]));
    comps.len() == 2 && comps.iter().all(|comp| comp.len() >= n_param + 1)
}

/// Extends a family of core rays by N+1 disjoint flanking rays on each
/// side, so that every original ray is an inner vertex of the central path
/// with both sides of size ≥ N+1. Returns the extended family and the
/// positions of the original rays within it.
pub fn buffer_family(
    w: &WindowedGraph,
    fam: &RayFamily,
    n_param: usize,
    t: usize,
) -> Result<(RayFamily, Vec<usize>)> {
    if fam.is_empty() {
        return Err(Error::Precondition("cannot buffer an empty family".into()));
    }
    let need = n_param + 1;
    // candidate rays disjoint from the family
    let occupied = fam.vertex_set();
    let reduced = w.graph.without(&occupied);
    let mut sources = VSet::new();
    for j in 1..=(w.radius / 2).max(1) {
        sources = w
            .ball(j)
            .into_iter()
            .filter(|v| !occupied.contains(v))
            .collect();
        let f = flow::menger_number(&reduced, &sources, &w.boundary, &VSet::new());
        if f >= 2 * need + 2 {
            break;
        }
    }
    let candidate_paths = flow::disjoint_paths(&reduced, &sources, &w.boundary, &VSet::new());
    let candidates: Vec<Vec<usize>> = candidate_paths
        .into_iter()
        .filter(|p| p.len() >= 2)
        .collect();
    if candidates.len() < 2 * need {
        return Err(Error::WindowExhausted(format!(
            "only {} flanking candidates, need {}",
            candidates.len(),
            2 * need
        )));
    }
    // position everyone on the central path of the combined ray graph
    let mut all = fam.rays.clone();
    all.extend(candidates.iter().cloned());
    let combined = RayFamily { rays: all };
    let rg = ray_graph(w, &combined, t);
    let central = rg.longest_bare_path();
    let pos: BTreeMap<usize, usize> = central.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let originals: Vec<usize> = (0..fam.len()).collect();
    for &i in &originals {
        if !pos.contains_key(&i) {
            return Err(Error::WindowExhausted(format!(
                "original ray {i} fell off the central path among candidates"
            )));
        }
    }
    let min_pos = originals.iter().map(|i| pos[i]).min().unwrap();
    let max_pos = originals.iter().map(|i| pos[i]).max().unwrap();
    let mut left: Vec<usize> = (fam.len()..combined.len())
        .filter(|i| pos.get(i).is_some_and(|p| *p < min_pos))
        .collect();
    let mut right: Vec<usize> = (fam.len()..combined.len())
        .filter(|i| pos.get(i).is_some_and(|p| *p > max_pos))
        .collect();
    left.sort_by_key(|i| std::cmp::Reverse(pos[i])); // nearest first
    right.sort_by_key(|i| pos[i]);
    if left.len() < need || right.len() < need {
        return Err(Error::WindowExhausted(format!(
            "flanks too thin: {} left, {} right, need {need} each",
            left.len(),
            right.len()
        )));
    }
    let mut chosen: Vec<usize> = originals.clone();
    chosen.extend(left[..need].iter().copied());
    chosen.extend(right[..need].iter().copied());
    let buffered = combined.subfamily(&chosen);
    let original_positions: Vec<usize> = (0..fam.len()).collect();

    // assertions from the definition of the buffered family
    if buffered.len() != fam.len() + 2 * n_param + 2 {
        return Err(Error::Invariant("buffered family has wrong size".into()));
    }
    let brg = ray_graph(w, &buffered, t);
    let bcentral = brg.longest_bare_path();
    let bpos: BTreeMap<usize, usize> =
        bcentral.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    for &i in &original_positions {
        let p = bpos.get(&i).ok_or_else(|| {
            Error::Invariant(format!("original ray {i} not on the buffered central path"))
        })?;
        if *p == 0 || *p + 1 == bcentral.len() {
            return Err(Error::Invariant(format!(
                "original ray {i} is an endpoint of the buffered central path"
            )));
        }
        if !witnesses_core(&brg, i, n_param) {
            return Err(Error::Invariant(format!(
                "removal of original ray {i} does not leave two sides of size ≥ {}",
                n_param + 1
            )));
        }
    }
    Ok((buffered, original_positions))
}

/// A preserving linkage: links ℛ into exactly the requested subfamily 𝒮′
/// of 𝒮, with the ≤ order preserved. Realized by buffering both families
/// and routing the unique order-preserving matching.
pub fn find_preserving_linkage(
    w: &WindowedGraph,
    r: &RayFamily,
    s: &RayFamily,
    s_prime: &[usize],
    after: &VSet,
    n_param: usize,
    t: usize,
) -> Result<Linkage> {
    if s_prime.len() != r.len() {
        return Err(Error::Precondition(format!(
            "|𝒮′| = {} must equal |ℛ| = {}",
            s_prime.len(),
            r.len()
        )));
    }
    let (r_buf, r_orig) = buffer_family(w, r, n_param, t)?;
    let (s_buf, s_orig) = buffer_family(w, s, n_param, t)?;
    // T := (S̄ ∖ S) ∪ S′, ordered along the buffered central path
    let keep: Vec<usize> = (0..s_buf.len())
        .filter(|i| !s_orig.contains(i) || s_prime.contains(&s_orig[*i]))
        .collect();
    let target = s_buf.subfamily(&keep);

    let r_rg = ray_graph(w, &r_buf, t);
    let t_rg = ray_graph(w, &target, t);
    let r_central = r_rg.longest_bare_path();
    let t_central = t_rg.longest_bare_path();
    if r_central.len() != r_buf.len() || t_central.len() != target.len() {
        return Err(Error::WindowExhausted(
            "buffered families do not form clean central paths".into(),
        ));
    }
    // unique order-preserving bijection between the central paths
    let pairs: Vec<(usize, usize)> = r_central
        .iter()
        .zip(t_central.iter())
        .map(|(&a, &b)| (a, b))
        .collect();
    let linkage_buf = route_prescribed(w, &r_buf, &target, after, &pairs)?;

    // restrict to the original rays of ℛ
    let sub = linkage_buf.sub_linkage(&r_orig);
    verify_linkage(w, &r.clone(), &target, &sub)?;
    // translate target indices back into 𝒮 indices
    let mut sigma = BTreeMap::new();
    let mut hit: BTreeSet<usize> = BTreeSet::new();
    for (&i, &jt) in &sub.sigma {
        let in_sbuf = keep[jt];
        let j = s_orig
            .iter()
            .position(|&o| o == in_sbuf)
            .ok_or_else(|| Error::Invariant(format!("ray {i} linked to a buffer ray")))?;
        sigma.insert(i, j);
        hit.insert(j);
    }
    let wanted: BTreeSet<usize> = s_prime.iter().copied().collect();
    if hit != wanted {
        return Err(Error::Invariant(format!(
            "linked into {hit:?} instead of the requested {wanted:?}"
        )));
    }
    // the order must be preserved: σ monotone along the central paths
    let spos: BTreeMap<usize, usize> = s
        .rays
        .iter()
        .enumerate()
        .map(|(j, _)| (j, t_central.iter().position(|&x| keep[x] == s_orig[j]).unwrap_or(usize::MAX)))
        .collect();
    let mut prev = None;
    for &i in &r_orig {
        let p = spos[&sigma[&i]];
        if let Some(q) = prev {
            if p <= q {
                return Err(Error::Invariant("linkage reverses the ≤ order".into()));
            }
        }
        prev = Some(p);
    }
    Ok(Linkage {
        paths: sub.paths,
        sigma,
        after: after.clone(),
    })
}

/// The grid-like partial cyclic order: [a, b, c] iff b lies on the oriented
/// arc from a to c of the family's cycle ray graph, computed through the
/// component split of the ray graph minus {a, c}.
pub fn cyclic_triple(
    w: &WindowedGraph,
    fam: &RayFamily,
    a: usize,
    b: usize,
    c: usize,
    t: usize,
) -> Result<bool> {
    if a == b || b == c || a == c {
        return Err(Error::Precondition("triple indices must be distinct".into()));
    }
    let rg = ray_graph(w, fam, t);
    let cycle = rg
        .oriented_cycle()
        .ok_or_else(|| Error::Precondition("ray graph is not a cycle".into()))?;
    let pos: BTreeMap<usize, usize> = cycle.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    for &i in &[a, b, c] {
        if !pos.contains_key(&i) {
            return Err(Error::Precondition(format!("index {i} not in the family")));
        }
    }
    let n = cycle.len();
    // the oriented successor of a opens the ⊤(a, c) arc
    let succ = cycle[(pos[&a] + 1) % n];
    if succ == c {
        return Ok(false); // empty arc between a and c
    }
    let comps = rg.components_without(&BTreeSet::from([a, c]));
    let top_arc = comps
        .iter()
        .find(|comp| comp.contains(&succ))
        .cloned()
        .unwrap_or_default();
    Ok(top_arc.contains(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::window;

    #[test]
    fn single_ray_family() {
        let w = window(&Generator::Ray, 8).unwrap();
        let fam = max_disjoint_rays(&w, None).unwrap();
        assert_eq!(fam.len(), 1);
        let rg = ray_graph(&w, &fam, 3);
        assert_eq!(rg.n, 1);
        assert!(rg.edges().is_empty());
    }

    #[test]
    fn ladder_two_rays() {
        let w = window(&Generator::Ladder, 10).unwrap();
        let fam = max_disjoint_rays(&w, None).unwrap();
        assert_eq!(fam.len(), 2);
    }

    #[test]
    fn half_grid_columns_give_path_ray_graph() {
        let w = window(&Generator::HalfGrid, 12).unwrap();
        let fam = column_rays(&w, &[-2, 0, 2]).unwrap();
        let rg = ray_graph(&w, &fam, 3);
        let bare = rg.longest_bare_path();
        assert_eq!(bare.len(), 3, "expected P3, got {:?}", rg.edges());
        assert!(!rg.is_cycle());
    }

    #[test]
    fn grid_spokes_give_cycle() {
        let w = window(&Generator::Grid, 12).unwrap();
        let fam = spoke_rays(&w, 4).unwrap();
        let rg = ray_graph(&w, &fam, 3);
        assert!(rg.is_cycle(), "expected C4, got {:?}", rg.edges());
    }

    #[test]
    fn trivial_linkage_identity() {
        let w = window(&Generator::HalfGrid, 10).unwrap();
        let fam = column_rays(&w, &[-1, 1]).unwrap();
        let (l, _) = find_linkage(&w, &fam, &fam, &VSet::new(), None).unwrap();
        assert_eq!(l.sigma, BTreeMap::from([(0, 0), (1, 1)]));
        for p in &l.paths {
            assert_eq!(p.len(), 1);
        }
    }

    #[test]
    fn shifted_columns_linkage_after_ball() {
        let w = window(&Generator::HalfGrid, 12).unwrap();
        let r = column_rays(&w, &[-1, 1]).unwrap();
        let s = column_rays(&w, &[-3, 3]).unwrap();
        let after = w.ball(2);
        let (l, _) = find_linkage(&w, &r, &s, &after, None).unwrap();
        verify_linkage(&w, &r, &s, &l).unwrap();
    }

    #[test]
    fn linkage_avoiding_a_bundle() {
        let w = window(&Generator::HalfGrid, 12).unwrap();
        let r = column_rays(&w, &[0]).unwrap();
        let s = column_rays(&w, &[-4, 2, 5]).unwrap();
        let regions: Vec<AvoidRegion> = (0..3)
            .map(|j| AvoidRegion {
                vertices: s.rays[j].iter().copied().collect(),
                ray_index: j,
            })
            .collect();
        let (l, ell) = find_linkage(&w, &r, &s, &w.ball(1), Some(&regions)).unwrap();
        let ell = ell.unwrap();
        let members = l.members(&r, &s).unwrap();
        for m in &members {
            assert!(m.iter().all(|v| !regions[ell].vertices.contains(v)));
        }
    }

    #[test]
    fn concatenate_two_shifts() {
        let w = window(&Generator::HalfGrid, 14).unwrap();
        let r = column_rays(&w, &[0]).unwrap();
        let s = column_rays(&w, &[2]).unwrap();
        let t = column_rays(&w, &[4]).unwrap();
        let (l1, _) = find_linkage(&w, &r, &s, &w.ball(1), None).unwrap();
        let mid = RayFamily {
            rays: l1.members(&r, &s).unwrap(),
        };
        let after2: VSet = l1
            .paths
            .iter()
            .flatten()
            .copied()
            .chain(w.ball(1))
            .collect();
        let (l2, _) = find_linkage(&w, &mid, &t, &after2, None).unwrap();
        let comp = concatenate(&w, &r, &s, &t, &l1, &l2).unwrap();
        assert_eq!(comp.sigma[&0], 0);
    }

    #[test]
    fn classify_grid_and_half_grid_and_fan() {
        let grid = classify_end(&Generator::Grid, &[10, 12], &[4, 5], 3).unwrap();
        assert_eq!(grid.verdict, EndVerdict::GridLike);
        let hg = classify_end(&Generator::HalfGrid, &[10, 12], &[3, 4], 3).unwrap();
        assert_eq!(hg.verdict, EndVerdict::HalfGridLike);
        assert_eq!(hg.n_param, 0);
        let fan = classify_end(&Generator::Fan, &[8, 10], &[4, 5], 3).unwrap();
        assert_eq!(fan.verdict, EndVerdict::PebblySuspect);
    }

    #[test]
    fn middle_column_is_core() {
        let w = window(&Generator::HalfGrid, 12).unwrap();
        // N = 0: 3 columns, middle must be core, flanks not
        let fam = column_rays(&w, &[-2, 0, 2]).unwrap();
        let rep = core_order(&w, &fam, 0, 3).unwrap();
        assert!(rep.core[1]);
        assert_eq!(rep.order, vec![1]);
    }

    #[test]
    fn leftmost_column_not_core_with_n1() {
        let w = window(&Generator::HalfGrid, 12).unwrap();
        let fam = column_rays(&w, &[-2, 0, 2]).unwrap();
        let rep = core_order(&w, &fam, 1, 3).unwrap();
        // with N = 1 each side needs ≥ 2 rays; no ray of a 3-family qualifies
        assert!(!rep.core[0]);
        assert!(!rep.core[1]);
    }

    #[test]
    fn buffer_middle_column() {
        let w = window(&Generator::HalfGrid, 12).unwrap();
        let fam = column_rays(&w, &[0]).unwrap();
        let (buf, orig) = buffer_family(&w, &fam, 0, 3).unwrap();
        assert_eq!(buf.len(), 3);
        assert_eq!(orig, vec![0]);
    }

    #[test]
    fn empty_family_buffer_rejected() {
        let w = window(&Generator::HalfGrid, 10).unwrap();
        let fam = RayFamily { rays: Vec::new() };
        assert!(buffer_family(&w, &fam, 0, 3).is_err());
    }

    #[test]
    fn preserving_linkage_hits_requested_targets() {
        let w = window(&Generator::HalfGrid, 14).unwrap();
        let r = column_rays(&w, &[-1, 1]).unwrap();
        let s = column_rays(&w, &[-6, -4, 3, 5, 7]).unwrap();
        let l = find_preserving_linkage(&w, &r, &s, &[1, 2], &w.ball(1), 0, 3).unwrap();
        assert_eq!(l.sigma[&0], 1);
        assert_eq!(l.sigma[&1], 2);
    }

    #[test]
    fn cyclic_triples_on_spokes() {
        let w = window(&Generator::Grid, 12).unwrap();
        let fam = spoke_rays(&w, 5).unwrap();
        // rotation: [a,b,c] ⇒ [b,c,a]; antisymmetry: not [c,b,a]
        let mut found = false;
        for (a, b, c) in [(0usize, 1usize, 2usize), (0, 2, 4), (1, 3, 4)] {
            let abc = cyclic_triple(&w, &fam, a, b, c, 3).unwrap();
            if abc {
                found = true;
                assert!(cyclic_triple(&w, &fam, b, c, a, 3).unwrap());
                assert!(!cyclic_triple(&w, &fam, c, b, a, 3).unwrap());
            }
        }
        assert!(found);
    }
}
