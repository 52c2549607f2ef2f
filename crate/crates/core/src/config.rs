//! Ordered configuration graphs K^(n)_f.
//!
//! A vertex is an ordered n-tuple of pairwise distinct domain vertices with a
//! common image. An edge joins two tuples when n distinct domain edges over one
//! codomain edge carry the first tuple to the second coordinate-wise. The
//! symmetric group acts by permuting coordinates; for n = 2 the transposition
//! is the involution τ.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::GraphMap;

/// Caps on configuration-graph construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_arity: usize,
    pub max_config_vertices: usize,
}

impl Limits {
    /// Largest arity any flag can unlock.
    pub const HARD_MAX_ARITY: usize = 5;
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_arity: 3,
            max_config_vertices: 2_000_000,
        }
    }
}

/// A permutation of `0..n`, stored as its image list: `i ↦ self.0[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Internal(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// `i ↦ i + 1 mod n`: moves each entry one slot to the right, so a tuple
    /// (x1, ..., xn) becomes (xn, x1, ..., x(n-1)).
    pub fn right_shift(n: usize) -> Self {
        Self((0..n).map(|i| (i + 1) % n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for i in 0..n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }

    /// Moves the entry at coordinate i to coordinate σ(i).
    pub fn apply<T: Copy>(&self, tuple: &[T]) -> Vec<T> {
        let mut out = tuple.to_vec();
        for (i, &x) in tuple.iter().enumerate() {
            out[self.0[i]] = x;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigEdge {
    pub tail: usize,
    pub head: usize,
    /// Codomain edge shared by all coordinates.
    pub image: usize,
    /// One domain edge per coordinate, each oriented from `tail[j]` to `head[j]`.
    pub domain_edges: Vec<usize>,
}

impl ConfigEdge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

const ABSENT: u32 = u32::MAX;

/// The ordered configuration multigraph of a map for a fixed arity.
#[derive(Debug, Clone)]
pub struct ConfigGraph {
    arity: usize,
    tuples: Vec<u32>,
    edges: Vec<ConfigEdge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    // dense lookup: offset[w] + Σ position[t_i]·k^(n-1-i)
    vmap: Vec<usize>,
    position: Vec<usize>,
    fiber_len: Vec<usize>,
    offset: Vec<usize>,
    slots: Vec<u32>,
}

fn falling(k: usize, n: usize) -> u128 {
    (0..n).map(|i| k.saturating_sub(i) as u128).product()
}

/// Σ_w |K_w|·(|K_w|−1)···(|K_w|−n+1).
pub fn expected_vertex_count(m: &GraphMap, n: usize) -> u128 {
    m.fibers().vertex.iter().map(|f| falling(f.len(), n)).sum()
}

impl ConfigGraph {
    pub fn build(m: &GraphMap, n: usize, limits: &Limits) -> Result<Self> {
        if n < 2 || n > limits.max_arity.min(Limits::HARD_MAX_ARITY) {
            return Err(Error::ResourceCap(format!(
                "arity {n} outside 2..={}",
                limits.max_arity.min(Limits::HARD_MAX_ARITY)
            )));
        }
        let fibers = m.fibers();
        let vertex_count = expected_vertex_count(m, n);
        if vertex_count > limits.max_config_vertices as u128 {
            return Err(Error::ResourceCap(format!(
                "K^({n}) would have {vertex_count} vertices (limit {})",
                limits.max_config_vertices
            )));
        }
        let edge_estimate: u128 = fibers
            .edge
            .iter()
            .map(|f| (f.len() as u128).pow(n as u32))
            .sum();
        if edge_estimate > 10 * limits.max_config_vertices as u128 {
            return Err(Error::ResourceCap(format!(
                "K^({n}) edge enumeration bound {edge_estimate} exceeds {}",
                10 * limits.max_config_vertices
            )));
        }

        let fiber_len: Vec<usize> = fibers.vertex.iter().map(Vec::len).collect();
        let mut offset = Vec::with_capacity(fiber_len.len());
        let mut total = 0usize;
        for &k in &fiber_len {
            offset.push(total);
            total += if k >= n { k.pow(n as u32) } else { 0 };
        }
        let mut graph = ConfigGraph {
            arity: n,
            tuples: Vec::with_capacity(vertex_count as usize * n),
            edges: Vec::new(),
            adjacency: Vec::new(),
            vmap: m.vmap().to_vec(),
            position: fibers.position.clone(),
            fiber_len,
            offset,
            slots: vec![ABSENT; total],
        };

        // lexicographic order of tuples over domain vertex ids
        let mut cur = Vec::with_capacity(n);
        for v in 0..m.domain().vertex_count() {
            let fiber = &fibers.vertex[m.image_vertex(v)];
            if fiber.len() < n {
                continue;
            }
            cur.clear();
            cur.push(v);
            graph.extend_tuples(fiber, &mut cur);
        }
        debug_assert_eq!(graph.vertex_count() as u128, vertex_count);
        graph.adjacency = vec![Vec::new(); graph.vertex_count()];

        let oriented: Vec<(usize, usize)> = (0..m.domain().edge_count())
            .map(|e| m.oriented_ends(e))
            .collect();
        for (c, fiber) in fibers.edge.iter().enumerate() {
            if fiber.len() < n {
                continue;
            }
            let mut chosen = Vec::with_capacity(n);
            graph.extend_edges(c, fiber, &oriented, &mut chosen);
        }
        Ok(graph)
    }

    fn extend_tuples(&mut self, fiber: &[usize], cur: &mut Vec<usize>) {
        if cur.len() == self.arity {
            let id = self.vertex_count() as u32;
            let slot = self.slot(cur);
            self.slots[slot] = id;
            self.tuples.extend(cur.iter().map(|&v| v as u32));
            return;
        }
        for &w in fiber {
            if !cur.contains(&w) {
                cur.push(w);
                self.extend_tuples(fiber, cur);
                cur.pop();
            }
        }
    }

    fn extend_edges(
        &mut self,
        image: usize,
        fiber: &[usize],
        oriented: &[(usize, usize)],
        chosen: &mut Vec<usize>,
    ) {
        if chosen.len() == self.arity {
            let tails: Vec<usize> = chosen.iter().map(|&e| oriented[e].0).collect();
            let heads: Vec<usize> = chosen.iter().map(|&e| oriented[e].1).collect();
            let tail = self.index_of(&tails).expect("tail tuple present");
            let head = self.index_of(&heads).expect("head tuple present");
            let id = self.edges.len();
            self.edges.push(ConfigEdge {
                tail,
                head,
                image,
                domain_edges: chosen.clone(),
            });
            self.adjacency[tail].push((id, head));
            if head != tail {
                self.adjacency[head].push((id, tail));
            }
            return;
        }
        for &e in fiber {
            let (t, h) = oriented[e];
            let clash = chosen
                .iter()
                .any(|&g| oriented[g].0 == t || oriented[g].1 == h);
            if !clash {
                chosen.push(e);
                self.extend_edges(image, fiber, oriented, chosen);
                chosen.pop();
            }
        }
    }

    fn slot(&self, tuple: &[usize]) -> usize {
        let w = self.vmap[tuple[0]];
        let k = self.fiber_len[w];
        self.offset[w] + tuple.iter().fold(0, |acc, &v| acc * k + self.position[v])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn vertex_count(&self) -> usize {
        self.tuples.len() / self.arity
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn tuple(&self, id: usize) -> Vec<usize> {
        self.tuples[id * self.arity..(id + 1) * self.arity]
            .iter()
            .map(|&v| v as usize)
            .collect()
    }

    pub fn edges(&self) -> &[ConfigEdge] {
        &self.edges
    }

    /// `(edge id, other endpoint)` pairs; a loop is listed once.
    pub fn neighbors(&self, id: usize) -> &[(usize, usize)] {
        &self.adjacency[id]
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, id: usize) -> usize {
        self.adjacency[id]
            .iter()
            .map(|&(e, _)| if self.edges[e].is_loop() { 2 } else { 1 })
            .sum()
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.arity || tuple.iter().any(|&v| v >= self.vmap.len()) {
            return None;
        }
        let w = self.vmap[tuple[0]];
        if tuple.iter().any(|&v| self.vmap[v] != w) || self.fiber_len[w] < self.arity {
            return None;
        }
        match self.slots[self.slot(tuple)] {
            ABSENT => None,
            id => Some(id as usize),
        }
    }

    /// Connected components by breadth-first search in vertex order, so
    /// component ids follow their least member tuple.
    pub fn components(&self) -> ComponentMap {
        let n = self.vertex_count();
        let mut of = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        let mut least = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if of[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            of[start] = id;
            least.push(start);
            let mut size = 0;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &(_, w) in &self.adjacency[v] {
                    if of[w] == usize::MAX {
                        of[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        ComponentMap { of, sizes, least }
    }

    /// The coordinate action of σ on vertices.
    pub fn act_on_vertex(&self, sigma: &Permutation, id: usize) -> usize {
        let image = sigma.apply(&self.tuple(id));
        self.index_of(&image).expect("S_n preserves the vertex set")
    }

    /// The action of σ on vertices and the induced action on components.
    pub fn act(&self, sigma: &Permutation, comps: &ComponentMap) -> Result<GroupAction> {
        if sigma.len() != self.arity {
            return Err(Error::Internal(format!(
                "permutation of {} points acting on arity {}",
                sigma.len(),
                self.arity
            )));
        }
        let vertex: Vec<usize> = (0..self.vertex_count())
            .map(|v| self.act_on_vertex(sigma, v))
            .collect();
        let mut component = vec![usize::MAX; comps.count()];
        for (v, &img) in vertex.iter().enumerate() {
            let (c, d) = (comps.of[v], comps.of[img]);
            if component[c] == usize::MAX {
                component[c] = d;
            } else if component[c] != d {
                return Err(Error::Internal(format!(
                    "component {c} is not mapped to a single component"
                )));
            }
        }
        Ok(GroupAction { vertex, component })
    }

    /// A component fixed by some non-identity σ, if any.
    pub fn fixed_component(&self, comps: &ComponentMap) -> Option<(usize, Permutation)> {
        let perms: Vec<Permutation> = Permutation::all(self.arity)
            .into_iter()
            .filter(|p| !p.is_identity())
            .collect();
        for (c, &rep) in comps.least.iter().enumerate() {
            for sigma in &perms {
                if comps.of[self.act_on_vertex(sigma, rep)] == c {
                    return Some((c, sigma.clone()));
                }
            }
        }
        None
    }

    /// Shortest path from `from` to `to`, as a vertex sequence.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        self.bfs_path(from, to, usize::MAX).map(|(p, _)| p)
    }

    fn bfs_path(&self, from: usize, to: usize, budget: usize) -> Option<(Vec<usize>, usize)> {
        let mut parent = vec![usize::MAX; self.vertex_count()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        let mut visited = 0;
        while let Some(v) = queue.pop_front() {
            visited += 1;
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some((path, visited));
            }
            if visited > budget {
                return None;
            }
            for &(_, w) in &self.adjacency[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Shortest path from some tuple to its right cyclic shift.
    ///
    /// Every tuple whose component also holds its shift is a candidate. They
    /// are tried in canonical order, keeping the shortest path found, until
    /// the search budget runs out.
    pub fn find_obstructor(&self, comps: &ComponentMap) -> Option<ObstructorWitness> {
        const BUDGET: usize = 4_000_000;
        let shift = Permutation::right_shift(self.arity);
        let mut best: Option<Vec<usize>> = None;
        let mut spent = 0usize;
        for v in 0..self.vertex_count() {
            let target = self.act_on_vertex(&shift, v);
            if comps.of[v] != comps.of[target] {
                continue;
            }
            let limit = match &best {
                Some(_) if spent >= BUDGET => break,
                _ => BUDGET.saturating_sub(spent).max(self.vertex_count()),
            };
            if let Some((path, visited)) = self.bfs_path(v, target, limit) {
                spent += visited;
                if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                    best = Some(path);
                }
            } else {
                spent += limit;
            }
            if best.as_ref().is_some_and(|b| b.len() == 2) {
                break;
            }
        }
        best.map(|path| ObstructorWitness {
            arity: self.arity,
            path: path.into_iter().map(|v| self.tuple(v)).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentMap {
    /// Component id of every configuration vertex.
    pub of: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Least member vertex of every component.
    pub least: Vec<usize>,
}

impl ComponentMap {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.of
            .iter()
            .enumerate()
            .filter(move |&(_, &d)| d == c)
            .map(|(v, _)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    pub vertex: Vec<usize>,
    pub component: Vec<usize>,
}

/// A path in K^(n)_f from a tuple to its right cyclic shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructorWitness {
    pub arity: usize,
    /// Tuples of domain vertex ids.
    pub path: Vec<Vec<usize>>,
}

impl ObstructorWitness {
    /// Replays the witness against the map itself, without any configuration graph.
    pub fn validate(&self, m: &GraphMap) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(format!("invalid obstructor: {msg}")));
        let n = self.arity;
        let (Some(first), Some(last)) = (self.path.first(), self.path.last()) else {
            return fail("empty path".into());
        };
        if n < 2 {
            return fail(format!("arity {n}"));
        }
        for t in &self.path {
            if t.len() != n || t.iter().any(|&v| v >= m.domain().vertex_count()) {
                return fail(format!("malformed tuple {t:?}"));
            }
            let w = m.image_vertex(t[0]);
            for (i, &x) in t.iter().enumerate() {
                if m.image_vertex(x) != w || t[..i].contains(&x) {
                    return fail(format!("tuple {t:?} is not a configuration vertex"));
                }
            }
        }
        if *last != Permutation::right_shift(n).apply(first) {
            return fail("last tuple is not the right shift of the first".into());
        }
        if first == last {
            return fail("endpoints coincide".into());
        }
        for step in self.path.windows(2) {
            if !step_exists(m, &step[0], &step[1]) && !step_exists(m, &step[1], &step[0]) {
                return fail(format!("no edge from {:?} to {:?}", step[0], step[1]));
            }
        }
        Ok(())
    }

    /// `obstructor <n>` followed by one `step (v1,...,vn)` line per tuple.
    pub fn render(&self, m: &GraphMap) -> String {
        let mut out = format!("obstructor {}\n", self.arity);
        for t in &self.path {
            let names: Vec<&str> = t.iter().map(|&v| m.domain().vertex_name(v)).collect();
            let _ = writeln!(out, "step ({})", names.join(","));
        }
        out
    }
}

/// Whether some codomain edge carries `from` to `to` through distinct domain
/// edges with the image orientation.
fn step_exists(m: &GraphMap, from: &[usize], to: &[usize]) -> bool {
    let fibers = m.fibers();
    fibers.edge.iter().any(|fiber| {
        let mut used = Vec::new();
        from.iter().zip(to).all(|(&a, &b)| {
            match fiber
                .iter()
                .find(|&&e| m.oriented_ends(e) == (a, b) && !used.contains(&e))
            {
                Some(&e) => {
                    used.push(e);
                    true
                }
                None => false,
            }
        })
    })
}

pub fn build_config(m: &GraphMap, n: usize, limits: &Limits) -> Result<ConfigGraph> {
    ConfigGraph::build(m, n, limits)
}

pub fn find_obstructor(
    m: &GraphMap,
    n: usize,
    limits: &Limits,
) -> Result<Option<ObstructorWitness>> {
    let k = ConfigGraph::build(m, n, limits)?;
    let comps = k.components();
    Ok(k.find_obstructor(&comps))
}

/// Whether S_n acts freely on the components of K^(n)_f.
pub fn p_trivial(m: &GraphMap, n: usize, limits: &Limits) -> Result<bool> {
    let k = ConfigGraph::build(m, n, limits)?;
    let comps = k.components();
    Ok(k.fixed_component(&comps).is_none())
}
