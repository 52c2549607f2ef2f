//! Order collections, integer-height liftings and the brute-force oracle.
//!
//! A lifting assigns every domain vertex a height in 1..=|K_w| within its
//! fiber. It is an embedding exactly when no two same-image edges cross or
//! coincide, which only depends on the sign pattern of paired endpoints.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gamma::GammaFormula;
use crate::graph::GraphMap;

/// Two same-image domain edges whose endpoints are ordered inconsistently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeConflict {
    pub first: usize,
    pub second: usize,
}

impl EdgeConflict {
    pub fn into_error(self, m: &GraphMap) -> Error {
        Error::Inadmissible {
            first: m.domain().edge(self.first).name.clone(),
            second: m.domain().edge(self.second).name.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingFailure {
    /// Heights over this codomain vertex are not 1..=|K_w|.
    NotBijective {
        vertex: usize,
    },
    Crossing(EdgeConflict),
}

/// A strict total order on every vertex fiber, listed ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderCollection {
    orders: Vec<Vec<usize>>,
}

impl OrderCollection {
    /// Checks that `orders[w]` lists the fiber over `w` exactly once.
    pub fn new(m: &GraphMap, orders: Vec<Vec<usize>>) -> Result<Self> {
        let fibers = m.fibers().vertex;
        if orders.len() != fibers.len() {
            return Err(Error::Internal(format!(
                "{} orders for {} codomain vertices",
                orders.len(),
                fibers.len()
            )));
        }
        for (w, (order, fiber)) in orders.iter().zip(&fibers).enumerate() {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if &sorted != fiber {
                return Err(Error::Internal(format!(
                    "order over `{}` is not a permutation of its fiber",
                    m.codomain().vertex_name(w)
                )));
            }
        }
        Ok(Self { orders })
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    /// 1-based position of every domain vertex within its fiber.
    pub fn ranks(&self, domain_vertices: usize) -> Vec<usize> {
        let mut rank = vec![0; domain_vertices];
        for order in &self.orders {
            for (i, &v) in order.iter().enumerate() {
                rank[v] = i + 1;
            }
        }
        rank
    }

    /// `order <w> v1 v2 ...` for every nonempty fiber.
    pub fn render(&self, m: &GraphMap) -> String {
        let mut out = String::new();
        for (w, order) in self.orders.iter().enumerate() {
            if order.is_empty() {
                continue;
            }
            let _ = write!(out, "order {}", m.codomain().vertex_name(w));
            for &v in order {
                let _ = write!(out, " {}", m.domain().vertex_name(v));
            }
            out.push('\n');
        }
        out
    }
}

/// Heights of domain vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifting {
    pub heights: Vec<usize>,
}

impl Lifting {
    /// `height <v> <h>` per domain vertex.
    pub fn render(&self, m: &GraphMap) -> String {
        let mut out = String::new();
        for (v, h) in self.heights.iter().enumerate() {
            let _ = writeln!(out, "height {} {h}", m.domain().vertex_name(v));
        }
        out
    }
}

/// Two same-image edges with their paired endpoints (tail, tail') and (head, head').
type EdgePair = (usize, usize, [(usize, usize); 2]);

/// Every unordered pair of distinct same-image edges.
fn same_image_pairs(m: &GraphMap) -> Vec<EdgePair> {
    let mut out = Vec::new();
    for fiber in m.fibers().edge {
        for (i, &e) in fiber.iter().enumerate() {
            let (te, he) = m.oriented_ends(e);
            for &g in &fiber[i + 1..] {
                let (tg, hg) = m.oriented_ends(g);
                out.push((e, g, [(te, tg), (he, hg)]));
            }
        }
    }
    out
}

/// False on opposite strict signs or on all-zero signs.
fn consistent(key: &[usize], ends: &[(usize, usize); 2]) -> bool {
    let s1 = key[ends[0].0].cmp(&key[ends[0].1]);
    let s2 = key[ends[1].0].cmp(&key[ends[1].1]);
    !matches!(
        (s1, s2),
        (Ordering::Equal, Ordering::Equal)
            | (Ordering::Less, Ordering::Greater)
            | (Ordering::Greater, Ordering::Less)
    )
}

pub fn is_admissible(m: &GraphMap, o: &OrderCollection) -> std::result::Result<(), EdgeConflict> {
    let rank = o.ranks(m.domain().vertex_count());
    for (first, second, ends) in same_image_pairs(m) {
        if !consistent(&rank, &ends) {
            return Err(EdgeConflict { first, second });
        }
    }
    Ok(())
}

/// The order on each fiber read off a satisfying assignment of Γ_f:
/// x ≺ y iff the literal of the component holding (x, y) is true.
pub fn assignment_to_orders(m: &GraphMap, g: &GammaFormula, a: &[bool]) -> Result<OrderCollection> {
    let mut orders = Vec::new();
    for (w, fiber) in m.fibers().vertex.into_iter().enumerate() {
        // in a strict total order the number of predecessors is the position
        let mut slots: Vec<Option<usize>> = vec![None; fiber.len()];
        for &x in &fiber {
            let mut below = 0;
            for &y in &fiber {
                if x != y {
                    let lit = g
                        .pair_literal(y, x)
                        .ok_or_else(|| Error::Internal("assignment from a different map".into()))?;
                    if lit.eval(a) {
                        below += 1;
                    }
                }
            }
            if slots[below].replace(x).is_some() {
                return Err(Error::Internal(format!(
                    "assignment does not induce a total order over `{}`",
                    m.codomain().vertex_name(w)
                )));
            }
        }
        orders.push(slots.into_iter().map(Option::unwrap).collect());
    }
    OrderCollection::new(m, orders)
}

pub fn orders_to_lifting(m: &GraphMap, o: &OrderCollection) -> Result<Lifting> {
    is_admissible(m, o).map_err(|c| c.into_error(m))?;
    Ok(Lifting {
        heights: o.ranks(m.domain().vertex_count()),
    })
}

pub fn lifting_to_orders(m: &GraphMap, l: &Lifting) -> Result<OrderCollection> {
    let orders = m
        .fibers()
        .vertex
        .into_iter()
        .map(|mut fiber| {
            fiber.sort_by_key(|&v| l.heights[v]);
            fiber
        })
        .collect();
    OrderCollection::new(m, orders)
}

/// Checks the lifting directly from heights, independent of how it was made.
pub fn verify_embedding(m: &GraphMap, l: &Lifting) -> std::result::Result<(), EmbeddingFailure> {
    if l.heights.len() != m.domain().vertex_count() {
        return Err(EmbeddingFailure::NotBijective { vertex: 0 });
    }
    for (w, fiber) in m.fibers().vertex.iter().enumerate() {
        let mut hs: Vec<usize> = fiber.iter().map(|&v| l.heights[v]).collect();
        hs.sort_unstable();
        if hs.iter().enumerate().any(|(i, &h)| h != i + 1) {
            return Err(EmbeddingFailure::NotBijective { vertex: w });
        }
    }
    for (first, second, [(a, b), (c, d)]) in same_image_pairs(m) {
        let h = |v: usize| l.heights[v] as i64;
        let (d1, d2) = (h(a) - h(b), h(c) - h(d));
        if d1 * d2 < 0 || (d1 == 0 && d2 == 0) {
            return Err(EmbeddingFailure::Crossing(EdgeConflict { first, second }));
        }
    }
    Ok(())
}

/// Number of order collections, Π |K_w|!.
pub fn collection_count(m: &GraphMap) -> u128 {
    m.fibers()
        .vertex
        .iter()
        .map(|f| (1..=f.len() as u128).product::<u128>())
        .fold(1u128, |acc, x| acc.saturating_mul(x))
}

pub const DEFAULT_ORACLE_BOUND: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForce {
    pub count: u64,
    /// The first `cap` admissible collections in enumeration order.
    pub collections: Vec<OrderCollection>,
}

struct Enumerator<'a> {
    fibers: Vec<Vec<usize>>,
    // pairs to check once fiber i is complete
    checks: Vec<Vec<[(usize, usize); 2]>>,
    rank: Vec<usize>,
    current: Vec<Vec<usize>>,
    used: Vec<bool>,
    cap: usize,
    out: &'a mut BruteForce,
}

impl Enumerator<'_> {
    fn fiber(&mut self, i: usize) {
        if i == self.fibers.len() {
            self.out.count += 1;
            if self.out.collections.len() < self.cap {
                self.out.collections.push(OrderCollection {
                    orders: self.current.clone(),
                });
            }
            return;
        }
        self.place(i, 0);
    }

    fn place(&mut self, i: usize, pos: usize) {
        let len = self.fibers[i].len();
        if pos == len {
            if self.checks[i]
                .iter()
                .all(|ends| consistent(&self.rank, ends))
            {
                self.fiber(i + 1);
            }
            return;
        }
        for k in 0..len {
            let v = self.fibers[i][k];
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.rank[v] = pos + 1;
            self.current[i].push(v);
            self.place(i, pos + 1);
            self.current[i].pop();
            self.used[v] = false;
        }
    }
}

/// Every admissible order collection, by exhaustive search over per-fiber
/// permutations in lexicographic order. Refuses when Π |K_w|! exceeds `bound`.
pub fn brute_force_liftings(m: &GraphMap, cap: usize, bound: u128) -> Result<BruteForce> {
    let needed = collection_count(m);
    if needed > bound {
        return Err(Error::BoundExceeded { needed, bound });
    }
    let fibers = m.fibers().vertex;
    let mut checks = vec![Vec::new(); fibers.len()];
    for (_, _, ends) in same_image_pairs(m) {
        let last = ends
            .iter()
            .map(|&(x, _)| m.image_vertex(x))
            .max()
            .expect("two endpoints");
        checks[last].push(ends);
    }
    let mut out = BruteForce {
        count: 0,
        collections: Vec::new(),
    };
    let n = m.domain().vertex_count();
    let mut e = Enumerator {
        current: vec![Vec::new(); fibers.len()],
        fibers,
        checks,
        rank: vec![0; n],
        used: vec![false; n],
        cap,
        out: &mut out,
    };
    e.fiber(0);
    Ok(out)
}
