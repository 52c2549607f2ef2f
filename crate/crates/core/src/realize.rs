//! Compiling implication formulas into graph maps whose Γ_f is the formula.
//!
//! GCNF v1:
//!
//! ```text
//! gcnf 1
//! vars 3
//! imp 1 2 3      # (x1 ∧ x2) → x3
//! imp -1 -2 -3
//! end
//! ```
//!
//! Each twin pair of implications becomes a codomain vertex with three
//! preimages. Every variable x collects one ordered pair of those preimages
//! per occurrence, and the pairs of x are chained into a cycle of edge pairs,
//! so the pair component of x is exactly that cycle.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::config::{p_trivial, Limits};
use crate::error::{Error, Result};
use crate::gamma::build_gamma;
use crate::gmap::{syntax, tokenize};
use crate::graph::{GraphMap, MultiGraph};
use crate::sat::Lit;

/// Implications (α ∧ β) → γ over `num_vars` variables, stored as [α, β, γ].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfSpec {
    pub num_vars: usize,
    pub triples: Vec<[Lit; 3]>,
    /// Repairs made by permissive shape validation.
    pub warnings: Vec<String>,
}

fn negated(t: &[Lit; 3]) -> [Lit; 3] {
    [!t[0], !t[1], !t[2]]
}

fn render_triple(t: &[Lit; 3]) -> String {
    format!("{} {} {}", t[0], t[1], t[2])
}

impl CnfSpec {
    /// The clause (¬α ∨ ¬β ∨ γ) of each implication.
    pub fn clauses(&self) -> Vec<[Lit; 3]> {
        self.triples.iter().map(|t| [!t[0], !t[1], t[2]]).collect()
    }

    /// Splits the implications into twin pairs, matching each one with the
    /// earliest unmatched fully negated implication. Returns the first member
    /// of every pair, in order, and the indices left without a twin.
    pub fn twin_pairs(&self) -> (Vec<[Lit; 3]>, Vec<usize>) {
        let mut open: Vec<usize> = Vec::new();
        let mut firsts: Vec<(usize, [Lit; 3])> = Vec::new();
        for (i, t) in self.triples.iter().enumerate() {
            let twin = negated(t);
            match open.iter().position(|&k| self.triples[k] == twin) {
                Some(p) => {
                    let k = open.remove(p);
                    firsts.push((k, self.triples[k]));
                }
                None => open.push(i),
            }
        }
        firsts.sort_by_key(|&(k, _)| k);
        (firsts.into_iter().map(|(_, t)| t).collect(), open)
    }

    /// GCNF v1 text.
    pub fn to_gcnf(&self) -> String {
        let mut out = format!("gcnf 1\nvars {}\n", self.num_vars);
        for t in &self.triples {
            let _ = writeln!(out, "imp {}", render_triple(t));
        }
        out.push_str("end\n");
        out
    }
}

pub fn parse_cnf(text: &str) -> Result<CnfSpec> {
    let lines = tokenize(text);
    let mut it = lines.iter();
    let header = it.next().ok_or_else(|| Error::Syntax {
        line: 1,
        column: 1,
        message: "empty input, expected `gcnf 1`".into(),
    })?;
    if header.len() != 2 || header[0].text != "gcnf" || header[1].text != "1" {
        return Err(syntax(&header[0], "expected header `gcnf 1`"));
    }
    let mut num_vars = None;
    let mut triples = Vec::new();
    let mut ended = false;
    for line in it {
        let head = &line[0];
        if ended {
            return Err(syntax(head, "content after `end`"));
        }
        match head.text {
            "vars" => {
                if num_vars.is_some() {
                    return Err(syntax(head, "`vars` given twice"));
                }
                if line.len() != 2 {
                    return Err(syntax(head, "`vars` takes one argument"));
                }
                let n = line[1]
                    .text
                    .parse::<usize>()
                    .map_err(|_| syntax(&line[1], "expected a variable count"))?;
                num_vars = Some(n);
            }
            "imp" => {
                let n = num_vars.ok_or_else(|| syntax(head, "`imp` before `vars`"))?;
                if line.len() != 4 {
                    return Err(syntax(head, "`imp` takes three literals"));
                }
                let mut t = [Lit::pos(0); 3];
                for (slot, tok) in t.iter_mut().zip(&line[1..]) {
                    let v: i64 = tok
                        .text
                        .parse()
                        .map_err(|_| syntax(tok, format!("`{}` is not a literal", tok.text)))?;
                    let lit = Lit::from_signed(v).ok_or_else(|| syntax(tok, "zero literal"))?;
                    if lit.var >= n {
                        return Err(syntax(
                            tok,
                            format!("variable {} out of range 1..={n}", lit.var + 1),
                        ));
                    }
                    *slot = lit;
                }
                triples.push(t);
            }
            "end" => {
                if line.len() != 1 {
                    return Err(syntax(&line[1], "`end` takes no arguments"));
                }
                ended = true;
            }
            other => return Err(syntax(head, format!("unknown keyword `{other}`"))),
        }
    }
    if !ended {
        let line = lines.last().map_or(1, |l| l[0].line);
        return Err(Error::Syntax {
            line,
            column: 1,
            message: "missing `end`".into(),
        });
    }
    Ok(CnfSpec {
        num_vars: num_vars.unwrap_or(0),
        triples,
        warnings: Vec::new(),
    })
}

/// Enforces distinct variables per implication and twin closure. In
/// permissive mode a missing twin is appended with a warning.
pub fn validate_shape(mut c: CnfSpec, strict: bool) -> Result<CnfSpec> {
    for (i, t) in c.triples.iter().enumerate() {
        if t[0].var == t[1].var || t[1].var == t[2].var || t[0].var == t[2].var {
            return Err(Error::Shape(format!(
                "implication {} ({}) repeats a variable",
                i + 1,
                render_triple(t)
            )));
        }
    }
    let (_, unmatched) = c.twin_pairs();
    for i in unmatched {
        let t = c.triples[i];
        if strict {
            return Err(Error::Shape(format!(
                "implication {} ({}) has no negated twin",
                i + 1,
                render_triple(&t)
            )));
        }
        let twin = negated(&t);
        c.warnings.push(format!(
            "implication {} ({}) has no negated twin; appended ({})",
            i + 1,
            render_triple(&t),
            render_triple(&twin)
        ));
        c.triples.push(twin);
    }
    Ok(c)
}

/// Names for the j-th gadget (1-based): its three domain vertices and its hub.
pub struct Naming {
    pub vertex: Box<dyn Fn(usize, usize) -> String>,
    pub hub: Box<dyn Fn(usize) -> String>,
}

impl Default for Naming {
    fn default() -> Self {
        Self {
            vertex: Box::new(|j, i| format!("v{j}_{i}")),
            hub: Box::new(|j| format!("v{j}")),
        }
    }
}

impl Naming {
    /// Gadgets a, b, c, ... with vertices a1, a2, a3.
    pub fn letters() -> Self {
        let letter = |j: usize| char::from(b'a' + (j - 1) as u8);
        Self {
            vertex: Box::new(move |j, i| format!("{}{i}", letter(j))),
            hub: Box::new(move |j| letter(j).to_string()),
        }
    }
}

/// One ordered pair (v^j_i, v^j_k) of a literal set, with 1-based j, i, k.
pub type SetEntry = (usize, usize, usize);

/// The literal sets S(x) in insertion order, indexed by variable.
pub fn literal_sets(c: &CnfSpec) -> Vec<Vec<SetEntry>> {
    let (firsts, _) = c.twin_pairs();
    let mut sets = vec![Vec::new(); c.num_vars];
    for (j0, t) in firsts.iter().enumerate() {
        let j = j0 + 1;
        for (lit, (i, k)) in t.iter().zip([(1, 2), (2, 3), (1, 3)]) {
            let entry = if lit.negated { (j, k, i) } else { (j, i, k) };
            sets[lit.var].push(entry);
        }
    }
    sets
}

/// The gadget graphs before any edges are added over a set.
pub(crate) struct Skeleton {
    pub g: MultiGraph,
    pub h: MultiGraph,
    pub vmap: Vec<usize>,
    pub emap: Vec<usize>,
}

impl Skeleton {
    fn vertex(&self, naming: &Naming, j: usize, i: usize) -> usize {
        self.g
            .vertex_id(&(naming.vertex)(j, i))
            .expect("gadget vertex exists")
    }

    /// Adds a codomain edge between the hubs of two gadgets and one domain
    /// edge over it per `(from, to)` vertex pair, given as (gadget, index).
    pub fn add_pair(
        &mut self,
        naming: &Naming,
        name: &str,
        ends: [((usize, usize), (usize, usize)); 2],
        domain_names: [String; 2],
    ) -> Result<()> {
        let ((ja, _), (jb, _)) = ends[0];
        let c = self.h.add_edge(name, ja - 1, jb - 1)?;
        for ((from, to), dname) in ends.into_iter().zip(domain_names) {
            let a = self.vertex(naming, from.0, from.1);
            let b = self.vertex(naming, to.0, to.1);
            self.g.add_edge(dname, a, b)?;
            self.emap.push(c);
        }
        Ok(())
    }

    pub fn finish(self) -> Result<GraphMap> {
        GraphMap::new(self.g, self.h, self.vmap, self.emap)
    }
}

/// Builds the gadgets and edge chains. Without `close_cycles` each literal set
/// yields a path of edge pairs instead of a cycle.
pub(crate) fn construct(c: &CnfSpec, close_cycles: bool, naming: &Naming) -> Result<Skeleton> {
    let (firsts, unmatched) = c.twin_pairs();
    if !unmatched.is_empty() {
        return Err(Error::Shape("formula is not closed under negation".into()));
    }
    let mut sk = Skeleton {
        g: MultiGraph::new(),
        h: MultiGraph::new(),
        vmap: Vec::new(),
        emap: Vec::new(),
    };
    for j in 1..=firsts.len() {
        let hub = sk.h.add_vertex((naming.hub)(j))?;
        for i in 1..=3 {
            sk.g.add_vertex((naming.vertex)(j, i))?;
            sk.vmap.push(hub);
        }
    }
    for (x, set) in literal_sets(c).iter().enumerate() {
        let l = x + 1;
        let s = set.len();
        let steps = if close_cycles { s } else { s.saturating_sub(1) };
        for r in 0..steps {
            let (ja, ia, ka) = set[r];
            let (jb, ib, kb) = set[(r + 1) % s];
            let name = format!("e{l}_{}", r + 1);
            sk.add_pair(
                naming,
                &name,
                [((ja, ia), (jb, ib)), ((ja, ka), (jb, kb))],
                [format!("{name}_1"), format!("{name}_2")],
            )?;
        }
    }
    Ok(sk)
}

/// The map of the realisation construction for a shape-valid formula.
pub fn realize(c: &CnfSpec) -> Result<GraphMap> {
    realize_with(c, &Naming::default())
}

pub fn realize_with(c: &CnfSpec, naming: &Naming) -> Result<GraphMap> {
    let c = validate_shape(c.clone(), true)?;
    construct(&c, true, naming)?.finish()
}

/// Variables that occur in no implication.
pub fn unused_variables(c: &CnfSpec) -> Vec<usize> {
    literal_sets(c)
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_empty())
        .map(|(x, _)| x)
        .collect()
}

/// Outcome of auditing a map against the seven structural properties.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RealizationReport {
    pub p2_trivial: bool,
    pub gamma_equivalent: bool,
    pub edge_preimages_two: bool,
    pub vertex_preimages_three: bool,
    pub domain_degree_four: bool,
    pub codomain_degree_six: bool,
    pub pairs_two_regular: bool,
    /// (formula variable, Γ_f variable, complemented) for every used variable.
    pub correspondence: Vec<(usize, usize, bool)>,
    /// Formula variables with no graph material.
    pub dropped: Vec<usize>,
    pub notes: Vec<String>,
}

impl RealizationReport {
    pub fn properties(&self) -> [(&'static str, bool); 7] {
        [
            ("p2_trivial", self.p2_trivial),
            ("gamma_equivalent", self.gamma_equivalent),
            ("edge_preimages_two", self.edge_preimages_two),
            ("vertex_preimages_three", self.vertex_preimages_three),
            ("domain_degree_four", self.domain_degree_four),
            ("codomain_degree_six", self.codomain_degree_six),
            ("pairs_two_regular", self.pairs_two_regular),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.properties().iter().all(|&(_, ok)| ok)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (key, ok) in self.properties() {
            let _ = writeln!(out, "{key}: {}", if ok { "pass" } else { "fail" });
        }
        for &(x, v, flip) in &self.correspondence {
            let _ = writeln!(
                out,
                "variable x{} -> gamma {}{}",
                x + 1,
                if flip { "-" } else { "" },
                v + 1
            );
        }
        for &x in &self.dropped {
            let _ = writeln!(out, "dropped x{}", x + 1);
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}

pub fn verify_realization(m: &GraphMap, c: &CnfSpec) -> RealizationReport {
    verify_realization_with(m, c, &Naming::default())
}

/// Audits `m` against `c`. The correspondence between formula variables and
/// Γ_f variables is read off the construction's vertex names.
pub fn verify_realization_with(m: &GraphMap, c: &CnfSpec, naming: &Naming) -> RealizationReport {
    let limits = Limits::default();
    let fibers = m.fibers();
    let mut r = RealizationReport {
        edge_preimages_two: fibers.edge.iter().all(|f| f.len() == 2),
        vertex_preimages_three: fibers.vertex.iter().all(|f| f.len() == 3),
        domain_degree_four: m.domain().degrees().iter().all(|&d| d == 4),
        codomain_degree_six: m.codomain().degrees().iter().all(|&d| d == 6),
        dropped: unused_variables(c),
        ..Default::default()
    };
    match p_trivial(m, 2, &limits) {
        Ok(t) => r.p2_trivial = t,
        Err(e) => r.notes.push(e.to_string()),
    }
    match crate::config::build_config(m, 2, &limits) {
        Ok(k) => r.pairs_two_regular = (0..k.vertex_count()).all(|v| k.degree(v) == 2),
        Err(e) => r.notes.push(e.to_string()),
    }
    match gamma_correspondence(m, c, naming) {
        Ok(corr) => {
            r.correspondence = corr;
            r.gamma_equivalent = true;
        }
        Err(note) => r.notes.push(note),
    }
    r
}

fn gamma_correspondence(
    m: &GraphMap,
    c: &CnfSpec,
    naming: &Naming,
) -> std::result::Result<Vec<(usize, usize, bool)>, String> {
    let gamma = build_gamma(m, &Limits::default()).map_err(|e| e.to_string())?;
    let id = |j: usize, i: usize| {
        let name = (naming.vertex)(j, i);
        m.domain()
            .vertex_id(&name)
            .ok_or_else(|| format!("no domain vertex `{name}`"))
    };

    let mut to_input: HashMap<usize, (usize, bool)> = HashMap::new();
    let mut corr = Vec::new();
    for (x, set) in literal_sets(c).iter().enumerate() {
        let Some(&(j, i, k)) = set.first() else {
            continue;
        };
        let lit = gamma
            .pair_literal(id(j, i)?, id(j, k)?)
            .ok_or_else(|| format!("pair of x{} is not a configuration vertex", x + 1))?;
        for &(j, i, k) in set {
            if gamma.pair_literal(id(j, i)?, id(j, k)?) != Some(lit) {
                return Err(format!("pairs of x{} span several components", x + 1));
            }
        }
        if to_input.insert(lit.var, (x, lit.negated)).is_some() {
            return Err(format!(
                "Γ_f variable {} serves two formula variables",
                lit.var + 1
            ));
        }
        corr.push((x, lit.var, lit.negated));
    }
    if to_input.len() != gamma.num_vars() {
        return Err(format!(
            "Γ_f has {} variables but the formula uses {}",
            gamma.num_vars(),
            to_input.len()
        ));
    }

    let canonical = |clause: [Lit; 3]| {
        let mut k = clause;
        k.sort();
        k
    };
    let translated: BTreeSet<[Lit; 3]> = gamma
        .clauses()
        .iter()
        .map(|cl| {
            canonical(cl.map(|l| {
                let (x, flip) = to_input[&l.var];
                Lit {
                    var: x,
                    negated: l.negated != flip,
                }
            }))
        })
        .collect();
    let expected: BTreeSet<[Lit; 3]> = c.clauses().into_iter().map(canonical).collect();
    if translated != expected {
        return Err(format!(
            "Γ_f has {} distinct clauses, formula has {}, and they differ",
            translated.len(),
            expected.len()
        ));
    }
    Ok(corr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::nu3_closure;

    const EXAMPLE: &str = "gcnf 1
vars 3
imp 1 2 3
imp -1 -2 -3
imp 1 2 -3
imp -1 -2 3
imp 1 -3 2
imp -1 3 -2
imp 1 -2 -3
imp -1 2 3
end
";

    #[test]
    fn parses_example() {
        let c = parse_cnf(EXAMPLE).unwrap();
        assert_eq!((c.num_vars, c.triples.len()), (3, 8));
        assert_eq!(c.triples[4], [Lit::pos(0), Lit::neg(2), Lit::pos(1)]);
        let same = validate_shape(c.clone(), true).unwrap();
        assert_eq!(same, c);
        assert_eq!(parse_cnf(&c.to_gcnf()).unwrap(), c);
    }

    #[test]
    fn parse_errors() {
        let bad = |s: &str| parse_cnf(s).unwrap_err();
        assert!(matches!(
            bad("gcnf 2\nend\n"),
            Error::Syntax { line: 1, .. }
        ));
        assert!(matches!(
            bad("gcnf 1\nvars 2\nimp 1 2 3\nend\n"),
            Error::Syntax {
                line: 3,
                column: 9,
                ..
            }
        ));
        assert!(matches!(
            bad("gcnf 1\nvars 3\nimp 1 0 3\nend\n"),
            Error::Syntax {
                line: 3,
                column: 7,
                ..
            }
        ));
        assert!(matches!(bad("gcnf 1\nvars 3\n"), Error::Syntax { .. }));
        assert!(matches!(
            bad("gcnf 1\nimp 1 2 3\nend\n"),
            Error::Syntax { line: 2, .. }
        ));
        assert!(matches!(
            bad("gcnf 1\nvars 3\nend\nvars 2\n"),
            Error::Syntax { line: 4, .. }
        ));
    }

    #[test]
    fn empty_spec_realizes_to_empty_graphs() {
        let c = parse_cnf("gcnf 1\nvars 0\nend\n").unwrap();
        let m = realize(&c).unwrap();
        assert_eq!(m.domain().vertex_count(), 0);
        assert_eq!(m.codomain().vertex_count(), 0);
        assert!(verify_realization(&m, &c).all_pass());
    }

    #[test]
    fn shape_checks() {
        let rep = parse_cnf("gcnf 1\nvars 2\nimp 1 1 2\nimp -1 -1 -2\nend\n").unwrap();
        assert!(matches!(
            validate_shape(rep.clone(), true),
            Err(Error::Shape(_))
        ));
        assert!(matches!(validate_shape(rep, false), Err(Error::Shape(_))));

        let full = parse_cnf(EXAMPLE).unwrap();
        let mut half = full.clone();
        half.triples = full.triples.iter().step_by(2).copied().collect();
        assert!(matches!(
            validate_shape(half.clone(), true),
            Err(Error::Shape(_))
        ));
        let fixed = validate_shape(half, false).unwrap();
        assert_eq!(fixed.triples.len(), 8);
        assert_eq!(fixed.warnings.len(), 4);
        let a: BTreeSet<_> = fixed.triples.iter().collect();
        let b: BTreeSet<_> = full.triples.iter().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn single_twin_pair_uses_loops() {
        let c = parse_cnf("gcnf 1\nvars 3\nimp 1 2 3\nimp -1 -2 -3\nend\n").unwrap();
        let m = realize(&c).unwrap();
        assert_eq!(m.domain().vertex_count(), 3);
        assert_eq!(m.domain().edge_count(), 6);
        assert!(m.domain().edges().iter().all(|e| e.is_loop()));
        assert_eq!(m.codomain().vertex_count(), 1);
        assert_eq!(m.codomain().edge_count(), 3);
        let k = crate::config::build_config(&m, 2, &Limits::default()).unwrap();
        assert_eq!(k.vertex_count(), 6);
        assert!(k.edges().iter().all(|e| e.is_loop()));
        let report = verify_realization(&m, &c);
        assert!(report.all_pass(), "{}", report.render());
    }

    #[test]
    fn example_formula_round_trips() {
        let c = parse_cnf(EXAMPLE).unwrap();
        let m = realize(&c).unwrap();
        assert_eq!(m.domain().vertex_count(), 12);
        assert_eq!(m.codomain().vertex_count(), 4);
        let report = verify_realization(&m, &c);
        assert!(report.all_pass(), "{}", report.render());
        assert_eq!(report.correspondence.len(), 3);

        let g = build_gamma(&m, &Limits::default()).unwrap();
        assert_eq!((g.num_vars(), g.clauses().len()), (3, 8));
        assert_eq!(g.solve(), None);
        let nu = nu3_closure(&m, &Limits::default()).unwrap();
        assert!(nu.merges.is_empty() && nu.vanishes);
    }

    #[test]
    fn letter_naming_reproduces_closing_edges() {
        let c = parse_cnf(EXAMPLE).unwrap();
        let m = realize_with(&c, &Naming::letters()).unwrap();
        let closing: Vec<(String, String)> =
            ["e1_4_1", "e1_4_2", "e2_4_1", "e2_4_2", "e3_4_1", "e3_4_2"]
                .iter()
                .map(|n| {
                    let e = m.domain().edge(m.domain().edge_id(n).unwrap());
                    (
                        m.domain().vertex_name(e.ends.0).to_string(),
                        m.domain().vertex_name(e.ends.1).to_string(),
                    )
                })
                .collect();
        let want = [
            ("d1", "a1"),
            ("d2", "a2"),
            ("d3", "a2"),
            ("d2", "a3"),
            ("d3", "a1"),
            ("d1", "a3"),
        ];
        let want: Vec<(String, String)> = want
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(closing, want);
        assert!(verify_realization_with(&m, &c, &Naming::letters()).all_pass());
    }

    #[test]
    fn unused_variables_are_dropped() {
        let c = parse_cnf("gcnf 1\nvars 5\nimp 1 -2 4\nimp -1 2 -4\nend\n").unwrap();
        let m = realize(&c).unwrap();
        let report = verify_realization(&m, &c);
        assert!(report.all_pass(), "{}", report.render());
        assert_eq!(report.dropped, vec![2, 4]);
    }

    #[test]
    fn audit_flags_broken_preimage_count() {
        let c = parse_cnf("gcnf 1\nvars 3\nimp 1 2 3\nimp -1 -2 -3\nend\n").unwrap();
        let m = realize(&c).unwrap();
        // drop one domain edge: its codomain edge now has a single preimage
        let mut g = MultiGraph::new();
        for name in m.domain().vertex_names() {
            g.add_vertex(name.clone()).unwrap();
        }
        for e in &m.domain().edges()[1..] {
            g.add_edge(e.name.clone(), e.ends.0, e.ends.1).unwrap();
        }
        let broken = GraphMap::new(
            g,
            m.codomain().clone(),
            m.vmap().to_vec(),
            m.emap()[1..].to_vec(),
        )
        .unwrap();
        let report = verify_realization(&broken, &c);
        assert!(!report.edge_preimages_two);
        assert!(!report.all_pass());
    }
}
