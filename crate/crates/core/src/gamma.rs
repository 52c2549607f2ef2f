//! The formula Γ_f over τ-orbits of pair components, plus the μ₂ and ν₃ invariants.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::config::{p_trivial, ComponentMap, ConfigGraph, Limits, Permutation};
use crate::error::{Error, Result};
use crate::graph::GraphMap;
use crate::sat::{self, Cnf, Enumeration, Lit};

/// Γ_f together with the pair space it was read from.
#[derive(Debug, Clone)]
pub struct GammaFormula {
    config: ConfigGraph,
    comps: ComponentMap,
    tau: Vec<usize>,
    literal: Vec<Lit>,
    representatives: Vec<usize>,
    clauses: Vec<[Lit; 3]>,
    provenance: Vec<[usize; 3]>,
}

/// Ordered triples of distinct domain vertices sharing an image.
pub(crate) fn fiber_triples(m: &GraphMap) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for fiber in m.fibers().vertex {
        for &a in &fiber {
            for &b in &fiber {
                for &c in &fiber {
                    if a != b && b != c && a != c {
                        out.push([a, b, c]);
                    }
                }
            }
        }
    }
    out
}

/// K^(2)_f, its components and the component permutation induced by τ.
fn pair_space(m: &GraphMap, limits: &Limits) -> Result<(ConfigGraph, ComponentMap, Vec<usize>)> {
    let config = ConfigGraph::build(m, 2, limits)?;
    let comps = config.components();
    let tau = config.act(&Permutation::right_shift(2), &comps)?.component;
    Ok((config, comps, tau))
}

fn pair_component(config: &ConfigGraph, comps: &ComponentMap, a: usize, b: usize) -> usize {
    comps.of[config.index_of(&[a, b]).expect("distinct same-image pair")]
}

fn clause_key(c: &[Lit; 3]) -> [Lit; 3] {
    let mut k = *c;
    k.sort();
    k
}

impl GammaFormula {
    pub fn build(m: &GraphMap, limits: &Limits) -> Result<Self> {
        let (config, comps, tau) = pair_space(m, limits)?;
        if tau.iter().enumerate().any(|(c, &t)| c == t) {
            return Err(Error::GammaUndefined);
        }

        // components are numbered by least pair, so the first of an orbit met
        // in id order holds the orbit's least pair
        let mut literal: Vec<Option<Lit>> = vec![None; comps.count()];
        let mut representatives = Vec::new();
        for c in 0..comps.count() {
            if literal[c].is_none() {
                let var = representatives.len();
                representatives.push(c);
                literal[c] = Some(Lit::pos(var));
                literal[tau[c]] = Some(Lit::neg(var));
            }
        }
        let literal: Vec<Lit> = literal.into_iter().map(Option::unwrap).collect();

        let mut seen = HashSet::new();
        let mut clauses = Vec::new();
        let mut provenance = Vec::new();
        for [a, b, c] in fiber_triples(m) {
            let cc = pair_component(&config, &comps, a, b);
            let dd = pair_component(&config, &comps, b, c);
            let ee = pair_component(&config, &comps, a, c);
            if cc == ee || dd == ee {
                continue;
            }
            let clause = [!literal[cc], !literal[dd], literal[ee]];
            if seen.insert(clause_key(&clause)) {
                clauses.push(clause);
                provenance.push([a, b, c]);
            }
        }

        Ok(Self {
            config,
            comps,
            tau,
            literal,
            representatives,
            clauses,
            provenance,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.representatives.len()
    }

    pub fn clauses(&self) -> &[[Lit; 3]] {
        &self.clauses
    }

    /// One witnessing vertex triple (a, b, c) per clause.
    pub fn provenance(&self) -> &[[usize; 3]] {
        &self.provenance
    }

    /// Component holding each variable's positive literal.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn config(&self) -> &ConfigGraph {
        &self.config
    }

    pub fn components(&self) -> &ComponentMap {
        &self.comps
    }

    /// Component permutation induced by swapping coordinates.
    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    pub fn literal_of_component(&self, c: usize) -> Lit {
        self.literal[c]
    }

    /// Literal asserting `a ≺ b`.
    pub fn pair_literal(&self, a: usize, b: usize) -> Option<Lit> {
        self.config
            .index_of(&[a, b])
            .map(|v| self.literal[self.comps.of[v]])
    }

    /// Every clause's fully negated twin is present too.
    pub fn is_closed(&self) -> bool {
        let keys: HashSet<[Lit; 3]> = self.clauses.iter().map(clause_key).collect();
        self.clauses
            .iter()
            .all(|c| keys.contains(&clause_key(&[!c[0], !c[1], !c[2]])))
    }

    pub fn to_cnf(&self) -> Cnf {
        Cnf {
            num_vars: self.num_vars(),
            clauses: self.clauses.iter().map(|c| c.to_vec()).collect(),
        }
    }

    pub fn solve(&self) -> Option<Vec<bool>> {
        sat::solve(&self.to_cnf())
    }

    pub fn enumerate_models(&self, cap: usize) -> Enumeration {
        sat::enumerate_models(&self.to_cnf(), cap)
    }

    /// `clause l1 l2 l3` lines with signed 1-based variables.
    pub fn render_clauses(&self) -> String {
        let mut out = String::new();
        for [a, b, c] in &self.clauses {
            let _ = writeln!(out, "clause {a} {b} {c}");
        }
        out
    }
}

pub fn build_gamma(m: &GraphMap, limits: &Limits) -> Result<GammaFormula> {
    GammaFormula::build(m, limits)
}

/// μ₂ vanishes exactly when the pair covering is trivial.
pub fn mu2_vanishes(m: &GraphMap, limits: &Limits) -> Result<bool> {
    p_trivial(m, 2, limits)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merge {
    /// Domain vertices (a, b, c) whose pairs (a,b), (b,c) shared a class.
    pub cause: [usize; 3],
    /// Components of (a, b) and (a, c) at the time of the merge.
    pub merged: (usize, usize),
}

/// The smallest τ-compatible, transitively closed coarsening of the pair
/// component partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuPartition {
    /// Class of every component, named by its least member component.
    pub class_of: Vec<usize>,
    pub tau: Vec<usize>,
    pub merges: Vec<Merge>,
    /// No triple with (a,b) ∼ (b,c) ∼ (c,a).
    pub vanishes: bool,
    pub cyclic_triple: Option<[usize; 3]>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            cur = std::mem::replace(&mut self.0[cur], root);
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller id as root so class names are canonical
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

pub fn nu3_closure(m: &GraphMap, limits: &Limits) -> Result<NuPartition> {
    let (config, comps, tau) = pair_space(m, limits)?;
    let triples: Vec<([usize; 3], [usize; 3])> = fiber_triples(m)
        .into_iter()
        .map(|[a, b, c]| {
            let comp = |x, y| pair_component(&config, &comps, x, y);
            ([a, b, c], [comp(a, b), comp(b, c), comp(a, c)])
        })
        .collect();

    let mut uf = UnionFind((0..comps.count()).collect());
    let mut merges = Vec::new();
    loop {
        let mut changed = false;
        for &(cause, [cc, dd, ee]) in &triples {
            if uf.find(cc) == uf.find(dd) && uf.find(ee) != uf.find(cc) {
                uf.union(cc, ee);
                uf.union(tau[cc], tau[ee]);
                merges.push(Merge {
                    cause,
                    merged: (cc, ee),
                });
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let class_of: Vec<usize> = (0..comps.count()).map(|c| uf.find(c)).collect();
    let cyclic_triple = fiber_triples(m).into_iter().find(|&[a, b, c]| {
        let ab = class_of[pair_component(&config, &comps, a, b)];
        ab == class_of[pair_component(&config, &comps, b, c)]
            && ab == class_of[pair_component(&config, &comps, c, a)]
    });
    Ok(NuPartition {
        class_of,
        tau,
        merges,
        vanishes: cyclic_triple.is_none(),
        cyclic_triple,
    })
}

impl NuPartition {
    /// `mu2`/`nu3` lines plus the merge log, for the CLI.
    pub fn render(&self, m: &GraphMap, mu2_vanishes: bool) -> String {
        let bit = |vanishes: bool| if vanishes { 0 } else { 1 };
        let mut out = format!(
            "mu2: {}\nnu3: {}\nmerges: {}\n",
            bit(mu2_vanishes),
            bit(self.vanishes),
            self.merges.len()
        );
        let name = |v: usize| m.domain().vertex_name(v);
        for mg in &self.merges {
            let [a, b, c] = mg.cause;
            let _ = writeln!(
                out,
                "merge ({},{},{}) {} {}",
                name(a),
                name(b),
                name(c),
                mg.merged.0,
                mg.merged.1
            );
        }
        if let Some([a, b, c]) = self.cyclic_triple {
            let _ = writeln!(out, "cyclic ({},{},{})", name(a), name(b), name(c));
        }
        out
    }
}
