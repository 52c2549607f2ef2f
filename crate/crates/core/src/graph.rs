//! Multigraphs, graph maps between them, and the structural predicates used by
//! the rest of the pipeline.
//!
//! Vertices and edges are addressed by dense indices assigned in order of
//! first appearance. That order is the canonical order: every tie-break
//! downstream (component representatives, branching, enumeration) derives
//! from it.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub ends: (usize, usize),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    pub fn touches(&self, v: usize) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }
}

/// A finite multigraph. Loops and parallel edges are allowed.
#[derive(Debug, Clone, Default)]
pub struct MultiGraph {
    vertices: Vec<String>,
    vertex_ids: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_ids: HashMap<String, usize>,
}

impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for MultiGraph {}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.vertex_ids.contains_key(&name) {
            return Err(Error::DuplicateIdentifier {
                name,
                line: 0,
                column: 0,
            });
        }
        let id = self.vertices.len();
        self.vertex_ids.insert(name.clone(), id);
        self.vertices.push(name);
        Ok(id)
    }

    pub fn add_edge(&mut self, name: impl Into<String>, u: usize, v: usize) -> Result<usize> {
        let name = name.into();
        if self.edge_ids.contains_key(&name) {
            return Err(Error::DuplicateIdentifier {
                name,
                line: 0,
                column: 0,
            });
        }
        for w in [u, v] {
            if w >= self.vertices.len() {
                return Err(Error::UnknownIdentifier {
                    name: format!("#{w}"),
                    line: 0,
                    column: 0,
                });
            }
        }
        let id = self.edges.len();
        self.edge_ids.insert(name.clone(), id);
        self.edges.push(Edge { name, ends: (u, v) });
        Ok(id)
    }

    /// Adds an edge between two named vertices.
    pub fn add_edge_by_name(&mut self, name: impl Into<String>, u: &str, v: &str) -> Result<usize> {
        let lookup = |g: &Self, n: &str| {
            g.vertex_id(n).ok_or_else(|| Error::UnknownIdentifier {
                name: n.to_string(),
                line: 0,
                column: 0,
            })
        };
        let (u, v) = (lookup(self, u)?, lookup(self, v)?);
        self.add_edge(name, u, v)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_ids.get(name).copied()
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edge_ids.get(name).copied()
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.ends.0 == v) as usize + (e.ends.1 == v) as usize)
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.ends.0] += 1;
            deg[e.ends.1] += 1;
        }
        deg
    }

    /// Edges incident to `v`, each listed once (a loop appears once).
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].touches(v))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.ends.0].push(e.ends.1);
            adj[e.ends.1].push(e.ends.0);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n
    }

    /// Connected, loop-free, and |E| = |V| - 1. The empty graph is not a tree.
    pub fn is_tree(&self) -> bool {
        !self.vertices.is_empty()
            && self.edges.iter().all(|e| !e.is_loop())
            && self.edges.len() + 1 == self.vertices.len()
            && self.is_connected()
    }

    /// A tree whose vertices all have degree at most two.
    pub fn is_path(&self) -> bool {
        self.is_tree() && self.degrees().into_iter().all(|d| d <= 2)
    }
}

/// A multigraph homomorphism `G -> H`. Edges always map to edges, so
/// non-degeneracy holds by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMap {
    domain: MultiGraph,
    codomain: MultiGraph,
    vmap: Vec<usize>,
    emap: Vec<usize>,
}

impl GraphMap {
    /// Builds and validates a map.
    pub fn new(
        domain: MultiGraph,
        codomain: MultiGraph,
        vmap: Vec<usize>,
        emap: Vec<usize>,
    ) -> Result<Self> {
        let m = Self::from_parts(domain, codomain, vmap, emap)?;
        m.validate()?;
        Ok(m)
    }

    /// Builds a map without checking the homomorphism condition. Table sizes
    /// and index ranges are still checked.
    pub fn from_parts(
        domain: MultiGraph,
        codomain: MultiGraph,
        vmap: Vec<usize>,
        emap: Vec<usize>,
    ) -> Result<Self> {
        if vmap.len() < domain.vertex_count() {
            return Err(Error::Unmapped {
                kind: "vertex",
                name: domain.vertex_name(vmap.len()).to_string(),
            });
        }
        if emap.len() < domain.edge_count() {
            return Err(Error::Unmapped {
                kind: "edge",
                name: domain.edge(emap.len()).name.clone(),
            });
        }
        if vmap.len() > domain.vertex_count() || emap.len() > domain.edge_count() {
            return Err(Error::Internal("map table longer than the domain".into()));
        }
        if let Some(&w) = vmap.iter().find(|&&w| w >= codomain.vertex_count()) {
            return Err(Error::UnknownIdentifier {
                name: format!("#{w}"),
                line: 0,
                column: 0,
            });
        }
        if let Some(&c) = emap.iter().find(|&&c| c >= codomain.edge_count()) {
            return Err(Error::UnknownIdentifier {
                name: format!("#{c}"),
                line: 0,
                column: 0,
            });
        }
        Ok(Self {
            domain,
            codomain,
            vmap,
            emap,
        })
    }

    /// The identity map of `g`.
    pub fn identity(g: &MultiGraph) -> Self {
        Self {
            domain: g.clone(),
            codomain: g.clone(),
            vmap: (0..g.vertex_count()).collect(),
            emap: (0..g.edge_count()).collect(),
        }
    }

    /// Checks that every edge lands on an edge joining the images of its endpoints.
    pub fn validate(&self) -> Result<()> {
        for (e, edge) in self.domain.edges().iter().enumerate() {
            let (u, v) = edge.ends;
            let target = self.codomain.edge(self.emap[e]).ends;
            let (fu, fv) = (self.vmap[u], self.vmap[v]);
            let matches = (fu, fv) == target || (fv, fu) == target;
            if !matches {
                return Err(Error::EndpointMismatch {
                    edge: edge.name.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> &MultiGraph {
        &self.domain
    }

    pub fn codomain(&self) -> &MultiGraph {
        &self.codomain
    }

    pub fn vmap(&self) -> &[usize] {
        &self.vmap
    }

    pub fn emap(&self) -> &[usize] {
        &self.emap
    }

    pub fn image_vertex(&self, v: usize) -> usize {
        self.vmap[v]
    }

    pub fn image_edge(&self, e: usize) -> usize {
        self.emap[e]
    }

    /// Endpoints of a domain edge, ordered so that they follow the
    /// parametrisation of the image edge: the first endpoint lies over the
    /// image's first endpoint. Over a loop the declared order is used.
    pub fn oriented_ends(&self, e: usize) -> (usize, usize) {
        let (p, q) = self.domain.edge(e).ends;
        let (x, _) = self.codomain.edge(self.emap[e]).ends;
        if self.codomain.edge(self.emap[e]).is_loop() || self.vmap[p] == x {
            (p, q)
        } else {
            (q, p)
        }
    }

    pub fn fibers(&self) -> FiberIndex {
        let mut vertex = vec![Vec::new(); self.codomain.vertex_count()];
        let mut position = vec![0; self.domain.vertex_count()];
        for (v, &w) in self.vmap.iter().enumerate() {
            position[v] = vertex[w].len();
            vertex[w].push(v);
        }
        let mut edge = vec![Vec::new(); self.codomain.edge_count()];
        for (e, &c) in self.emap.iter().enumerate() {
            edge[c].push(e);
        }
        FiberIndex {
            vertex,
            edge,
            position,
        }
    }

    /// First pair of same-image edges with identical oriented endpoints, if any.
    /// Such edges coincide under every integer-height lifting.
    pub fn coincident_edges(&self) -> Option<(usize, usize)> {
        let fibers = self.fibers();
        for fiber in &fibers.edge {
            for (i, &e) in fiber.iter().enumerate() {
                for &g in &fiber[i + 1..] {
                    if self.oriented_ends(e) == self.oriented_ends(g) {
                        return Some((e, g));
                    }
                }
            }
        }
        None
    }

    /// Restriction to the preimage of the multiple points: edges whose image
    /// has at least two preimages, their endpoints, and every vertex whose
    /// image has at least two preimages. The codomain shrinks to the image.
    pub fn restrict_multiple(&self) -> GraphMap {
        let fibers = self.fibers();
        let keep_edge: Vec<bool> = self
            .emap
            .iter()
            .map(|&c| fibers.edge[c].len() >= 2)
            .collect();
        let mut keep_vertex: Vec<bool> = self
            .vmap
            .iter()
            .map(|&w| fibers.vertex[w].len() >= 2)
            .collect();
        for (e, edge) in self.domain.edges().iter().enumerate() {
            if keep_edge[e] {
                keep_vertex[edge.ends.0] = true;
                keep_vertex[edge.ends.1] = true;
            }
        }

        let mut keep_h_vertex = vec![false; self.codomain.vertex_count()];
        let mut keep_h_edge = vec![false; self.codomain.edge_count()];
        for v in (0..self.domain.vertex_count()).filter(|&v| keep_vertex[v]) {
            keep_h_vertex[self.vmap[v]] = true;
        }
        for e in (0..self.domain.edge_count()).filter(|&e| keep_edge[e]) {
            keep_h_edge[self.emap[e]] = true;
        }

        let (codomain, h_vertex_new, h_edge_new) =
            induced(&self.codomain, &keep_h_vertex, &keep_h_edge);
        let (domain, g_vertex_new, g_edge_new) = induced(&self.domain, &keep_vertex, &keep_edge);

        let mut vmap = vec![0; domain.vertex_count()];
        for (old, new) in g_vertex_new.iter().enumerate() {
            if let Some(new) = new {
                vmap[*new] = h_vertex_new[self.vmap[old]].expect("image vertex kept");
            }
        }
        let mut emap = vec![0; domain.edge_count()];
        for (old, new) in g_edge_new.iter().enumerate() {
            if let Some(new) = new {
                emap[*new] = h_edge_new[self.emap[old]].expect("image edge kept");
            }
        }
        GraphMap {
            domain,
            codomain,
            vmap,
            emap,
        }
    }

    /// A vertex is regular when the map is a bijection from its star onto the
    /// star of its image: equal degrees and pairwise distinct edge images.
    pub fn is_regular(&self, v: usize) -> bool {
        if self.domain.degree(v) != self.codomain.degree(self.vmap[v]) {
            return false;
        }
        let mut images: Vec<usize> = self
            .domain
            .incident_edges(v)
            .into_iter()
            .map(|e| self.emap[e])
            .collect();
        let n = images.len();
        images.sort_unstable();
        images.dedup();
        images.len() == n
    }

    /// Stability check. On failure returns the first violating codomain vertex.
    pub fn is_stable(&self) -> (bool, Option<usize>) {
        let fibers = self.fibers();
        for w in 0..self.codomain.vertex_count() {
            let irregular = fibers.vertex[w]
                .iter()
                .filter(|&&v| !self.is_regular(v))
                .count();
            let allowed = if self.codomain.degree(w) == 2 { 1 } else { 0 };
            if irregular > allowed {
                return (false, Some(w));
            }
        }
        (true, None)
    }

    /// Returns a copy with renamed vertices and edges of both graphs.
    pub fn relabel(
        &self,
        domain_vertex: impl Fn(&str) -> String,
        domain_edge: impl Fn(&str) -> String,
        codomain_vertex: impl Fn(&str) -> String,
        codomain_edge: impl Fn(&str) -> String,
    ) -> Result<GraphMap> {
        let rename = |g: &MultiGraph, fv: &dyn Fn(&str) -> String, fe: &dyn Fn(&str) -> String| {
            let mut out = MultiGraph::new();
            for name in g.vertex_names() {
                out.add_vertex(fv(name))?;
            }
            for edge in g.edges() {
                out.add_edge(fe(&edge.name), edge.ends.0, edge.ends.1)?;
            }
            Ok::<_, Error>(out)
        };
        Ok(GraphMap {
            domain: rename(&self.domain, &domain_vertex, &domain_edge)?,
            codomain: rename(&self.codomain, &codomain_vertex, &codomain_edge)?,
            vmap: self.vmap.clone(),
            emap: self.emap.clone(),
        })
    }
}

type Reindex = Vec<Option<usize>>;

fn induced(g: &MultiGraph, keep_v: &[bool], keep_e: &[bool]) -> (MultiGraph, Reindex, Reindex) {
    let mut out = MultiGraph::new();
    let mut vnew = vec![None; g.vertex_count()];
    for v in 0..g.vertex_count() {
        if keep_v[v] {
            vnew[v] = Some(out.add_vertex(g.vertex_name(v)).expect("unique names"));
        }
    }
    let mut enew = vec![None; g.edge_count()];
    for (e, edge) in g.edges().iter().enumerate() {
        if keep_e[e] {
            let (u, v) = edge.ends;
            enew[e] = Some(
                out.add_edge(&edge.name, vnew[u].unwrap(), vnew[v].unwrap())
                    .expect("unique names"),
            );
        }
    }
    (out, vnew, enew)
}

/// Preimages of every codomain vertex and edge, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberIndex {
    /// `vertex[w]`: domain vertices over `w`, ascending.
    pub vertex: Vec<Vec<usize>>,
    /// `edge[c]`: domain edges over `c`, ascending.
    pub edge: Vec<Vec<usize>>,
    /// `position[v]`: index of `v` inside its vertex fiber.
    pub position: Vec<usize>,
}

impl FiberIndex {
    pub fn vertex_fiber_of(&self, m: &GraphMap, v: usize) -> &[usize] {
        &self.vertex[m.image_vertex(v)]
    }
}
