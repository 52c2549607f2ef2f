//! Built-in instances.

use crate::error::Result;
use crate::graph::{GraphMap, MultiGraph};
use crate::realize::{construct, parse_cnf, realize, Naming};

pub const NAMES: [&str; 5] = [
    "sieklucki",
    "tripod18",
    "double-cover",
    "nontrivial-gamma",
    "counterexample-cycles",
];

/// The eight implications over three variables whose Γ_f-realisation is
/// unsatisfiable while μ₂ and ν₃ vanish.
pub const NONTRIVIAL_GAMMA_GCNF: &str = "gcnf 1
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

pub fn corpus(name: &str) -> Option<GraphMap> {
    let m = match name {
        "sieklucki" => sieklucki(),
        "tripod18" => tripod18(),
        "double-cover" => double_cover(),
        "nontrivial-gamma" => nontrivial_gamma(),
        "counterexample-cycles" => counterexample_cycles(),
        _ => return None,
    };
    Some(m.expect("corpus instances are well-formed"))
}

fn graph(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<MultiGraph> {
    let mut g = MultiGraph::new();
    for v in vertices {
        g.add_vertex(*v)?;
    }
    for (name, u, v) in edges {
        g.add_edge_by_name(*name, u, v)?;
    }
    Ok(g)
}

/// Maps every domain vertex to the codomain vertex named by its first letter,
/// and every edge to the codomain edge joining the images of its ends.
fn by_letter(g: MultiGraph, h: MultiGraph) -> Result<GraphMap> {
    let vmap: Vec<usize> = g
        .vertex_names()
        .iter()
        .map(|n| h.vertex_id(&n[..1]).expect("letter vertex"))
        .collect();
    let emap = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (vmap[e.ends.0], vmap[e.ends.1]);
            h.edges()
                .iter()
                .position(|c| c.ends == (a, b) || c.ends == (b, a))
                .expect("image edge")
        })
        .collect();
    GraphMap::new(g, h, vmap, emap)
}

fn sieklucki() -> Result<GraphMap> {
    let h = graph(
        &["a", "b", "c", "d"],
        &[("ab", "a", "b"), ("bc", "b", "c"), ("cd", "c", "d")],
    )?;
    let g = graph(
        &[
            "a1", "a2", "a3", "b1", "b2", "b3", "b4", "c1", "c2", "c3", "c4", "d1", "d2", "d3",
        ],
        &[
            ("a3b4", "a3", "b4"),
            ("b4c4", "b4", "c4"),
            ("c4d3", "c4", "d3"),
            ("d3c3", "d3", "c3"),
            ("c3b3", "c3", "b3"),
            ("b3a1", "b3", "a1"),
            ("a1b1", "a1", "b1"),
            ("b1c1", "b1", "c1"),
            ("c1d1", "c1", "d1"),
            ("c3b2", "c3", "b2"),
            ("b2a2", "b2", "a2"),
            ("b2c2", "b2", "c2"),
            ("c2d2", "c2", "d2"),
        ],
    )?;
    by_letter(g, h)
}

/// C₁₈ wound three times around a hexagon that walks around a tripod.
fn tripod18() -> Result<GraphMap> {
    let h = graph(
        &["O", "a", "b", "c"],
        &[("Oa", "O", "a"), ("Ob", "O", "b"), ("Oc", "O", "c")],
    )?;
    let hexagon = [1, 0, 2, 0, 3, 0];
    let mut g = MultiGraph::new();
    for i in 0..18 {
        g.add_vertex(format!("k{i}"))?;
    }
    let mut emap = Vec::new();
    for i in 0..18 {
        g.add_edge(format!("k{i}k{}", (i + 1) % 18), i, (i + 1) % 18)?;
        let leaf = hexagon[i % 6].max(hexagon[(i + 1) % 6]);
        emap.push(leaf - 1);
    }
    let vmap = (0..18).map(|i| hexagon[i % 6]).collect();
    GraphMap::new(g, h, vmap, emap)
}

fn double_cover() -> Result<GraphMap> {
    let h = graph(&["u", "v"], &[("c", "u", "v")])?;
    let g = graph(
        &["u1", "v1", "u2", "v2"],
        &[("e1", "u1", "v1"), ("e2", "u2", "v2")],
    )?;
    by_letter(g, h)
}

fn nontrivial_gamma() -> Result<GraphMap> {
    realize(&parse_cnf(NONTRIVIAL_GAMMA_GCNF)?)
}

/// The open form of the same construction, whose pair components are
/// segments, closed up by three extra codomain edges from a to d.
fn counterexample_cycles() -> Result<GraphMap> {
    let spec = parse_cnf(NONTRIVIAL_GAMMA_GCNF)?;
    let naming = Naming::letters();
    let mut sk = construct(&spec, false, &naming)?;
    let closing = [
        ("e1", [("a1", "d1"), ("a2", "d2")]),
        ("e2", [("a2", "d3"), ("a3", "d2")]),
        ("e3", [("a1", "d3"), ("a3", "d1")]),
    ];
    let (a, d) = (
        sk.h.vertex_id("a").expect("hub a"),
        sk.h.vertex_id("d").expect("hub d"),
    );
    for (name, pairs) in closing {
        let c = sk.h.add_edge(name, a, d)?;
        for (k, (x, y)) in pairs.into_iter().enumerate() {
            sk.g.add_edge_by_name(format!("{name}.{}", k + 1), x, y)?;
            sk.emap.push(c);
        }
    }
    sk.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{build_config, find_obstructor, p_trivial, Limits};
    use crate::gamma::{build_gamma, nu3_closure};
    use crate::realize::verify_realization_with;

    #[test]
    fn every_name_resolves() {
        for name in NAMES {
            assert!(corpus(name).is_some(), "{name}");
        }
        assert!(corpus("nope").is_none());
    }

    #[test]
    fn sieklucki_shape() {
        let m = corpus("sieklucki").unwrap();
        assert_eq!(m.domain().vertex_count(), 14);
        assert_eq!(m.domain().edge_count(), 13);
        assert!(m.domain().is_tree());
        assert!(m.codomain().is_path());
        let sizes: Vec<usize> = m.fibers().edge.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 5, 4]);
        let k = build_config(&m, 2, &Limits::default()).unwrap();
        assert_eq!(k.vertex_count(), 36);
        let w = find_obstructor(&m, 2, &Limits::default()).unwrap().unwrap();
        w.validate(&m).unwrap();
    }

    #[test]
    fn tripod_shape() {
        let m = corpus("tripod18").unwrap();
        let sizes: Vec<usize> = m.fibers().vertex.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![9, 3, 3, 3]);
        let k = build_config(&m, 3, &Limits::default()).unwrap();
        assert_eq!(k.vertex_count(), 9 * 8 * 7 + 3 * 6);
        assert!(p_trivial(&m, 2, &Limits::default()).unwrap());
        assert!(!p_trivial(&m, 3, &Limits::default()).unwrap());
    }

    #[test]
    fn counterexample_cycles_keeps_the_formula() {
        let m = corpus("counterexample-cycles").unwrap();
        let spec = parse_cnf(NONTRIVIAL_GAMMA_GCNF).unwrap();
        let report = verify_realization_with(&m, &spec, &Naming::letters());
        assert!(report.all_pass(), "{}", report.render());
        let g = build_gamma(&m, &Limits::default()).unwrap();
        assert_eq!((g.num_vars(), g.clauses().len()), (3, 8));
        assert!(g.solve().is_none());
        assert!(nu3_closure(&m, &Limits::default()).unwrap().vanishes);
    }

    #[test]
    fn open_form_has_segment_components() {
        let spec = parse_cnf(NONTRIVIAL_GAMMA_GCNF).unwrap();
        let m = construct(&spec, false, &Naming::letters())
            .unwrap()
            .finish()
            .unwrap();
        let k = build_config(&m, 2, &Limits::default()).unwrap();
        let comps = k.components();
        assert_eq!(comps.count(), 6);
        // each component is a path on four pairs: two ends of degree 1
        let ends = (0..k.vertex_count()).filter(|&v| k.degree(v) == 1).count();
        assert_eq!(ends, 12);
    }
}
