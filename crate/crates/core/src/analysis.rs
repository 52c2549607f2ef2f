//! The full lifting decision: obstructor test, then Γ_f, then heights.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::config::{ConfigGraph, Limits, ObstructorWitness};
use crate::error::{Error, Result};
use crate::gamma::build_gamma;
use crate::graph::GraphMap;
use crate::lifting::{
    assignment_to_orders, lifting_to_orders, orders_to_lifting, verify_embedding, Lifting,
    OrderCollection,
};

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// Work on the multiple-point part of the map.
    pub restrict: bool,
    /// Also search for obstructors of every arity 3..=this.
    pub max_obstructor_arity: usize,
    /// Count models up to this cap.
    pub count: Option<usize>,
    /// Decide stable tree→path maps from the 2-obstructor test alone.
    pub stable_shortcut: bool,
    /// Accepted for the shortcut. A liftable verdict still needs heights,
    /// which come from Γ_f, so the cross-check always happens.
    pub fast: bool,
    pub limits: Limits,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            restrict: true,
            max_obstructor_arity: 2,
            count: None,
            stable_shortcut: false,
            fast: false,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Liftable,
    Unliftable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    TwoObstructor,
    GammaUnsat,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaStatus {
    Sat,
    Unsat,
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shortcut {
    NotRequested,
    NotApplicable,
    /// Verdict taken from the obstructor test; `checked` if Γ_f confirmed it.
    Applied {
        checked: bool,
    },
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub verdict: Verdict,
    pub reason: Reason,
    pub p2_trivial: bool,
    pub restricted: bool,
    pub gamma_vars: Option<usize>,
    pub gamma_clauses: Option<usize>,
    pub gamma_status: GammaStatus,
    /// Model count and whether the cap cut it short.
    pub model_count: Option<(usize, bool)>,
    /// Heights on the original map.
    pub lifting: Option<Lifting>,
    pub orders: Option<OrderCollection>,
    /// Obstructor witnesses in domain vertex ids of the original map.
    pub witnesses: Vec<ObstructorWitness>,
    pub shortcut: Shortcut,
    pub elapsed: Duration,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Liftable => "liftable",
            Verdict::Unliftable => "unliftable",
        }
    }
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::TwoObstructor => "two-obstructor",
            Reason::GammaUnsat => "gamma-unsat",
            Reason::None => "none",
        }
    }
}

impl GammaStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            GammaStatus::Sat => "sat",
            GammaStatus::Unsat => "unsat",
            GammaStatus::Undefined => "undefined",
        }
    }
}

/// Translates tuples of `work` vertex ids into ids of `m` by name.
fn to_original(m: &GraphMap, work: &GraphMap, w: ObstructorWitness) -> ObstructorWitness {
    let id = |v: usize| {
        m.domain()
            .vertex_id(work.domain().vertex_name(v))
            .expect("restriction keeps names")
    };
    ObstructorWitness {
        arity: w.arity,
        path: w
            .path
            .iter()
            .map(|t| t.iter().map(|&v| id(v)).collect())
            .collect(),
    }
}

pub fn analyze(m: &GraphMap, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let start = Instant::now();
    m.validate()?;
    if let Some((e, g)) = m.coincident_edges() {
        return Err(Error::CoincidentEdges {
            first: m.domain().edge(e).name.clone(),
            second: m.domain().edge(g).name.clone(),
        });
    }
    let work = if opts.restrict {
        m.restrict_multiple()
    } else {
        m.clone()
    };

    let pairs = ConfigGraph::build(&work, 2, &opts.limits)?;
    let comps = pairs.components();
    let two = pairs.find_obstructor(&comps);
    let p2_trivial = pairs.fixed_component(&comps).is_none();
    if p2_trivial != two.is_none() {
        return Err(Error::Internal(
            "free-action test and obstructor search disagree".into(),
        ));
    }
    let mut witnesses = Vec::new();
    if let Some(w) = two {
        witnesses.push(to_original(m, &work, w));
    }
    if opts.max_obstructor_arity >= 3 {
        let limits = Limits {
            max_arity: opts.max_obstructor_arity.max(opts.limits.max_arity),
            ..opts.limits
        };
        for n in 3..=opts.max_obstructor_arity {
            let k = ConfigGraph::build(&work, n, &limits)?;
            if let Some(w) = k.find_obstructor(&k.components()) {
                witnesses.push(to_original(m, &work, w));
            }
        }
    }
    for w in &witnesses {
        w.validate(m)?;
    }

    let shortcut_applies =
        opts.stable_shortcut && m.is_stable().0 && m.domain().is_tree() && m.codomain().is_path();
    let mut report = AnalysisReport {
        verdict: Verdict::Unliftable,
        reason: Reason::TwoObstructor,
        p2_trivial,
        restricted: opts.restrict,
        gamma_vars: None,
        gamma_clauses: None,
        gamma_status: GammaStatus::Undefined,
        model_count: None,
        lifting: None,
        orders: None,
        witnesses,
        shortcut: match (opts.stable_shortcut, shortcut_applies) {
            (false, _) => Shortcut::NotRequested,
            (true, false) => Shortcut::NotApplicable,
            (true, true) => Shortcut::Applied { checked: false },
        },
        elapsed: Duration::ZERO,
    };

    if !p2_trivial {
        report.elapsed = start.elapsed();
        return Ok(report);
    }
    let gamma = build_gamma(&work, &opts.limits)?;
    report.gamma_vars = Some(gamma.num_vars());
    report.gamma_clauses = Some(gamma.clauses().len());
    if let Some(cap) = opts.count {
        let e = gamma.enumerate_models(cap);
        report.model_count = Some((e.models.len(), e.truncated));
    }
    match gamma.solve() {
        None => {
            report.gamma_status = GammaStatus::Unsat;
            report.reason = Reason::GammaUnsat;
        }
        Some(a) => {
            report.gamma_status = GammaStatus::Sat;
            let orders = assignment_to_orders(&work, &gamma, &a)?;
            let partial = orders_to_lifting(&work, &orders)?;
            let mut heights = vec![1; m.domain().vertex_count()];
            for (v, &h) in partial.heights.iter().enumerate() {
                let id = m
                    .domain()
                    .vertex_id(work.domain().vertex_name(v))
                    .expect("restriction keeps names");
                heights[id] = h;
            }
            let lifting = Lifting { heights };
            verify_embedding(m, &lifting).map_err(|f| {
                Error::Internal(format!("constructed lifting fails verification: {f:?}"))
            })?;
            report.orders = Some(lifting_to_orders(m, &lifting)?);
            report.lifting = Some(lifting);
            report.verdict = Verdict::Liftable;
            report.reason = Reason::None;
        }
    }
    if shortcut_applies {
        // stable tree→path maps without 2-obstructors always lift
        if report.verdict != Verdict::Liftable {
            return Err(Error::Internal(
                "stable tree→path map without 2-obstructors has unsatisfiable Γ_f".into(),
            ));
        }
        report.shortcut = Shortcut::Applied { checked: true };
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

impl AnalysisReport {
    /// Line-oriented `key: value` report; byte-identical for identical input.
    pub fn render(&self, m: &GraphMap, with_orders: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        let _ = writeln!(out, "reason: {}", self.reason.as_str());
        let _ = writeln!(out, "p2_trivial: {}", self.p2_trivial);
        let _ = writeln!(out, "restricted: {}", self.restricted);
        if let Some(v) = self.gamma_vars {
            let _ = writeln!(out, "gamma_vars: {v}");
        }
        if let Some(c) = self.gamma_clauses {
            let _ = writeln!(out, "gamma_clauses: {c}");
        }
        let _ = writeln!(out, "gamma_status: {}", self.gamma_status.as_str());
        if let Some((n, truncated)) = self.model_count {
            let _ = writeln!(out, "model_count: {n}{}", if truncated { "+" } else { "" });
        }
        match self.shortcut {
            Shortcut::NotRequested => {}
            Shortcut::NotApplicable => out.push_str("stable_shortcut: not-applicable\n"),
            Shortcut::Applied { checked } => {
                let _ = writeln!(
                    out,
                    "stable_shortcut: applied{}",
                    if checked { ", cross-checked" } else { "" }
                );
            }
        }
        for w in &self.witnesses {
            out.push_str(&w.render(m));
        }
        if let Some(l) = &self.lifting {
            out.push_str(&l.render(m));
        }
        if with_orders {
            if let Some(o) = &self.orders {
                out.push_str(&o.render(m));
            }
        }
        out
    }
}
