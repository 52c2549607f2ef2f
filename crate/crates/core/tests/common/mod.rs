//! Random instance generators and oracles that share no code with the library.
#![allow(dead_code)]

use graphlift::graph::{GraphMap, MultiGraph};
use graphlift::realize::CnfSpec;
use graphlift::sat::Lit;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// A map with at most `max_h` codomain vertices, fibers of size 1..=4, and
/// at most `max_orders` order collections. Same-image edges never coincide.
pub fn random_map<R: Rng>(rng: &mut R, max_h: usize, max_orders: u128) -> GraphMap {
    let nh = rng.gen_range(1..=max_h);
    let mut h = MultiGraph::new();
    for i in 0..nh {
        h.add_vertex(format!("w{i}")).unwrap();
    }
    let mut sizes = Vec::with_capacity(nh);
    let mut orders = 1u128;
    for _ in 0..nh {
        let mut k = rng.gen_range(1..=4usize);
        while k > 1 && orders * factorial(k) > max_orders {
            k -= 1;
        }
        orders *= factorial(k);
        sizes.push(k);
    }
    let nc = rng.gen_range(0..=2 * nh);
    for i in 0..nc {
        let u = rng.gen_range(0..nh);
        // loops are rarer than ordinary edges
        let v = if rng.gen_bool(0.1) {
            u
        } else {
            rng.gen_range(0..nh)
        };
        h.add_edge(format!("c{i}"), u, v).unwrap();
    }

    let mut g = MultiGraph::new();
    let mut fiber: Vec<Vec<usize>> = Vec::new();
    let mut vmap = Vec::new();
    for (w, &k) in sizes.iter().enumerate() {
        let mut ids = Vec::new();
        for j in 0..k {
            ids.push(g.add_vertex(format!("p{w}_{j}")).unwrap());
            vmap.push(w);
        }
        fiber.push(ids);
    }
    let mut emap = Vec::new();
    for c in 0..nc {
        let (x, y) = h.edge(c).ends;
        let most = fiber[x].len().max(fiber[y].len()) + 1;
        let count = rng.gen_range(0..=most);
        let mut used = Vec::new();
        for _ in 0..count {
            let a = *fiber[x].choose(rng).unwrap();
            let b = *fiber[y].choose(rng).unwrap();
            if used.contains(&(a, b)) {
                continue;
            }
            used.push((a, b));
            g.add_edge(format!("e{}", g.edge_count()), a, b).unwrap();
            emap.push(c);
        }
    }
    GraphMap::new(g, h, vmap, emap).unwrap()
}

/// Number of height assignments (one bijection onto 1..=|K_w| per fiber)
/// under which no two same-image segments cross or coincide.
pub fn count_embeddings(m: &GraphMap) -> u64 {
    let nv = m.domain().vertex_count();
    let mut fibers: Vec<Vec<usize>> = vec![Vec::new(); m.codomain().vertex_count()];
    for v in 0..nv {
        fibers[m.vmap()[v]].push(v);
    }
    // segments over one codomain edge, as (height at its first end, height at its second)
    let segments: Vec<Vec<(usize, usize)>> = {
        let mut s = vec![Vec::new(); m.codomain().edge_count()];
        for (e, edge) in m.domain().edges().iter().enumerate() {
            let c = m.emap()[e];
            let (a, b) = edge.ends;
            let first = m.codomain().edge(c).ends.0;
            // over a loop both ends qualify and the declared order stands
            s[c].push(if m.vmap()[a] == first { (a, b) } else { (b, a) });
        }
        s
    };
    let mut perms: Vec<Vec<Vec<usize>>> = fibers.iter().map(|f| permutations(f.len())).collect();
    for p in perms.iter_mut() {
        if p.is_empty() {
            p.push(Vec::new());
        }
    }
    let mut choice = vec![0usize; fibers.len()];
    let mut height = vec![0usize; nv];
    let mut count = 0;
    loop {
        for (w, f) in fibers.iter().enumerate() {
            for (i, &v) in f.iter().enumerate() {
                height[v] = perms[w][choice[w]][i] + 1;
            }
        }
        let ok = segments.iter().all(|segs| {
            segs.iter().enumerate().all(|(i, &(a, b))| {
                segs[i + 1..].iter().all(|&(c, d)| {
                    let d1 = height[a] as i64 - height[c] as i64;
                    let d2 = height[b] as i64 - height[d] as i64;
                    let crossing = d1 * d2 < 0;
                    let coincident = d1 == 0 && d2 == 0;
                    !crossing && !coincident
                })
            })
        });
        if ok {
            count += 1;
        }
        // odometer
        let mut w = 0;
        loop {
            if w == fibers.len() {
                return count;
            }
            choice[w] += 1;
            if choice[w] < perms[w].len() {
                break;
            }
            choice[w] = 0;
            w += 1;
        }
    }
}

/// All permutations of 0..k as image lists.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![];
    }
    let mut out = vec![vec![0]];
    for n in 1..k {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=n {
                let mut q = p.clone();
                q.insert(pos, n);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// A closed implication formula with distinct variables per implication.
pub fn random_spec<R: Rng>(rng: &mut R, max_vars: usize, max_pairs: usize) -> CnfSpec {
    let num_vars = rng.gen_range(3..=max_vars);
    let pairs = rng.gen_range(0..=max_pairs);
    let mut firsts = Vec::new();
    for _ in 0..pairs {
        let vars: Vec<usize> = rand::seq::index::sample(rng, num_vars, 3).into_vec();
        let t = [0, 1, 2].map(|i| Lit {
            var: vars[i],
            negated: rng.gen_bool(0.5),
        });
        firsts.push(t);
    }
    let mut triples = Vec::new();
    for t in &firsts {
        triples.push(*t);
        triples.push([!t[0], !t[1], !t[2]]);
    }
    // the twin need not follow its partner directly
    if rng.gen_bool(0.5) {
        triples.shuffle(rng);
    }
    CnfSpec {
        num_vars,
        triples,
        warnings: Vec::new(),
    }
}

/// Assignments satisfying every implication (α ∧ β) → γ.
pub fn truth_table_models(c: &CnfSpec) -> Vec<Vec<bool>> {
    let val = |l: Lit, a: &[bool]| a[l.var] != l.negated;
    (0..1u32 << c.num_vars)
        .map(|bits| {
            (0..c.num_vars)
                .map(|i| bits >> i & 1 == 1)
                .collect::<Vec<bool>>()
        })
        .filter(|a| {
            c.triples
                .iter()
                .all(|t| !(val(t[0], a) && val(t[1], a)) || val(t[2], a))
        })
        .collect()
}

/// Adds a monotone chain from `from` through every level strictly between
/// `lo` and `hi`, ending at `to` or at a new vertex on the far level.
fn chain(
    level: &mut Vec<usize>,
    edges: &mut Vec<(usize, usize)>,
    from: usize,
    to: Option<usize>,
    lo: usize,
    hi: usize,
) {
    let ascending = level[from] == lo;
    let inner: Vec<usize> = if ascending {
        (lo + 1..hi).collect()
    } else {
        (lo + 1..hi).rev().collect()
    };
    let mut prev = from;
    for l in inner {
        level.push(l);
        let v = level.len() - 1;
        edges.push((prev, v));
        prev = v;
    }
    let end = to.unwrap_or_else(|| {
        level.push(if ascending { hi } else { lo });
        level.len() - 1
    });
    edges.push((prev, end));
}

/// A stable map from a tree onto a path x0 - ... - xn.
///
/// Non-regular vertices ("turns") sit at interior levels, at most one per
/// level, with u edges going up and d going down. Monotone chains of regular
/// vertices join an up-stub to a higher down-stub or run to a path end.
pub fn random_stable_tree_map<R: Rng>(rng: &mut R, max_vertices: usize) -> Option<GraphMap> {
    const TURNS: [(usize, usize); 7] = [(0, 1), (1, 0), (2, 0), (0, 2), (2, 1), (1, 2), (2, 2)];
    let n = rng.gen_range(2..=7usize);
    let mut level: Vec<usize> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut ups = Vec::new();
    let mut downs = Vec::new();
    for l in 1..n {
        if rng.gen_bool(0.85) {
            let (u, d) = *TURNS.choose(rng).unwrap();
            let v = level.len();
            level.push(l);
            ups.extend(std::iter::repeat_n((v, l), u));
            downs.extend(std::iter::repeat_n((v, l), d));
        }
    }
    if level.is_empty() {
        level.push(0);
        chain(&mut level, &mut edges, 0, None, 0, n);
    }
    ups.shuffle(rng);
    for (a, la) in ups {
        let open: Vec<usize> = (0..downs.len()).filter(|&k| downs[k].1 > la).collect();
        // one extra slot for running to the top end
        let pick = rng.gen_range(0..=open.len());
        if pick < open.len() {
            let (b, lb) = downs.remove(open[pick]);
            chain(&mut level, &mut edges, a, Some(b), la, lb);
        } else {
            chain(&mut level, &mut edges, a, None, la, n);
        }
    }
    for (b, lb) in downs {
        chain(&mut level, &mut edges, b, None, 0, lb);
    }

    let nv = level.len();
    if nv > max_vertices || edges.len() + 1 != nv {
        return None;
    }
    // connected with |E| = |V| - 1 means tree
    let mut seen = vec![false; nv];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in &edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return None;
    }

    let mut h = MultiGraph::new();
    for l in 0..=n {
        h.add_vertex(format!("x{l}")).unwrap();
    }
    for l in 0..n {
        h.add_edge(format!("s{l}"), l, l + 1).unwrap();
    }
    let mut g = MultiGraph::new();
    for v in 0..nv {
        g.add_vertex(format!("t{v}")).unwrap();
    }
    let mut emap = Vec::new();
    for (i, &(a, b)) in edges.iter().enumerate() {
        g.add_edge(format!("f{i}"), a, b).unwrap();
        emap.push(level[a].min(level[b]));
    }
    GraphMap::new(g, h, level, emap).ok()
}
