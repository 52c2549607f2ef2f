//! A small complete DPLL solver with unit propagation and model enumeration.
//!
//! Branching is on the lowest unassigned variable, `true` first, so the model
//! order is fully determined by the variable numbering.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    /// Signed 1-based form, as in DIMACS.
    pub fn from_signed(l: i64) -> Option<Self> {
        match l {
            0 => None,
            l if l > 0 => Some(Self::pos(l as usize - 1)),
            l => Some(Self::neg((-l) as usize - 1)),
        }
    }

    pub fn signed(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit {
            var: self.var,
            negated: !self.negated,
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed())
    }
}

/// A formula in conjunctive normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars
            && self
                .clauses
                .iter()
                .all(|c| c.iter().any(|l| l.eval(assignment)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub models: Vec<Vec<bool>>,
    /// More models exist beyond the cap.
    pub truncated: bool,
}

enum Status {
    Satisfied,
    Conflict,
    Unit(Lit),
    Open,
}

struct Search {
    clauses: Vec<Vec<Lit>>,
    occurs: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
}

impl Search {
    fn new(cnf: &Cnf) -> Self {
        let clauses: Vec<Vec<Lit>> = cnf
            .clauses
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort();
                c.dedup();
                c
            })
            .collect();
        let mut occurs = vec![Vec::new(); cnf.num_vars];
        for (i, c) in clauses.iter().enumerate() {
            for l in c {
                if occurs[l.var].last() != Some(&i) {
                    occurs[l.var].push(i);
                }
            }
        }
        Self {
            clauses,
            occurs,
            value: vec![None; cnf.num_vars],
            trail: Vec::new(),
        }
    }

    fn status(&self, c: usize) -> Status {
        let mut unassigned = None;
        let mut open = 0;
        for &l in &self.clauses[c] {
            match self.value[l.var] {
                Some(v) if v != l.negated => return Status::Satisfied,
                Some(_) => {}
                None => {
                    open += 1;
                    unassigned = Some(l);
                }
            }
        }
        match (open, unassigned) {
            (0, _) => Status::Conflict,
            (1, Some(l)) => Status::Unit(l),
            _ => Status::Open,
        }
    }

    fn assign(&mut self, l: Lit) {
        self.value[l.var] = Some(!l.negated);
        self.trail.push(l.var);
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.value[v] = None;
        }
    }

    /// Propagates units implied by assignments from `head` on; false on conflict.
    fn propagate(&mut self, mut head: usize) -> bool {
        while head < self.trail.len() {
            let var = self.trail[head];
            head += 1;
            for k in 0..self.occurs[var].len() {
                let c = self.occurs[var][k];
                match self.status(c) {
                    Status::Conflict => return false,
                    Status::Unit(l) => self.assign(l),
                    _ => {}
                }
            }
        }
        true
    }

    fn initial(&mut self) -> bool {
        for c in 0..self.clauses.len() {
            match self.status(c) {
                Status::Conflict => return false,
                Status::Unit(l) => {
                    let mark = self.trail.len();
                    self.assign(l);
                    if !self.propagate(mark) {
                        return false;
                    }
                }
                _ => {}
            }
        }
        true
    }

    fn all_satisfied(&self) -> bool {
        (0..self.clauses.len()).all(|c| matches!(self.status(c), Status::Satisfied))
    }

    fn snapshot(&self) -> Vec<bool> {
        self.value.iter().map(|v| v.unwrap_or(false)).collect()
    }

    fn first(&mut self) -> Option<Vec<bool>> {
        if self.all_satisfied() {
            return Some(self.snapshot());
        }
        let var = self.value.iter().position(Option::is_none)?;
        for lit in [Lit::pos(var), Lit::neg(var)] {
            let mark = self.trail.len();
            self.assign(lit);
            if self.propagate(mark) {
                if let Some(model) = self.first() {
                    return Some(model);
                }
            }
            self.undo(mark);
        }
        None
    }

    /// Returns false once the cap is exceeded.
    fn all(&mut self, cap: usize, out: &mut Vec<Vec<bool>>) -> bool {
        let Some(var) = self.value.iter().position(Option::is_none) else {
            if out.len() == cap {
                return false;
            }
            out.push(self.snapshot());
            return true;
        };
        for lit in [Lit::pos(var), Lit::neg(var)] {
            let mark = self.trail.len();
            self.assign(lit);
            let go_on = !self.propagate(mark) || self.all(cap, out);
            self.undo(mark);
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// The first model in branch order, with variables left free by the search set
/// to false; `None` if unsatisfiable.
pub fn solve(cnf: &Cnf) -> Option<Vec<bool>> {
    let mut s = Search::new(cnf);
    if !s.initial() {
        return None;
    }
    s.first()
}

/// Every model in branch order, stopping after `cap`.
pub fn enumerate_models(cnf: &Cnf, cap: usize) -> Enumeration {
    let mut s = Search::new(cnf);
    let mut models = Vec::new();
    if !s.initial() {
        return Enumeration {
            models,
            truncated: false,
        };
    }
    let complete = s.all(cap, &mut models);
    Enumeration {
        models,
        truncated: !complete,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(num_vars: usize, clauses: &[&[i64]]) -> Cnf {
        Cnf {
            num_vars,
            clauses: clauses
                .iter()
                .map(|c| c.iter().map(|&l| Lit::from_signed(l).unwrap()).collect())
                .collect(),
        }
    }

    fn truth_table(c: &Cnf) -> Vec<Vec<bool>> {
        (0..1u32 << c.num_vars)
            .map(|bits| {
                (0..c.num_vars)
                    .map(|i| bits >> i & 1 == 1)
                    .collect::<Vec<_>>()
            })
            .filter(|a| c.satisfied_by(a))
            .collect()
    }

    #[test]
    fn empty_formula_gives_all_false() {
        assert_eq!(solve(&cnf(3, &[])), Some(vec![false; 3]));
        assert_eq!(enumerate_models(&cnf(2, &[]), 10).models.len(), 4);
    }

    #[test]
    fn repeated_literal_pair_is_unsat() {
        let f = cnf(1, &[&[-1, -1, -1], &[1, 1, 1]]);
        assert_eq!(solve(&f), None);
        assert!(enumerate_models(&f, 5).models.is_empty());
    }

    #[test]
    fn branch_order_is_true_first() {
        let f = cnf(2, &[&[1, 2]]);
        assert_eq!(solve(&f), Some(vec![true, false]));
        let all = enumerate_models(&f, 10).models;
        assert_eq!(
            all,
            vec![vec![true, true], vec![true, false], vec![false, true]]
        );
    }

    #[test]
    fn cap_truncates() {
        let e = enumerate_models(&cnf(3, &[]), 5);
        assert_eq!(e.models.len(), 5);
        assert!(e.truncated);
        let e = enumerate_models(&cnf(2, &[]), 4);
        assert!(!e.truncated);
    }

    #[test]
    fn literal_forms() {
        assert_eq!(Lit::from_signed(-3), Some(Lit::neg(2)));
        assert_eq!(Lit::from_signed(0), None);
        assert_eq!((!Lit::pos(4)).to_string(), "-5");
    }

    #[test]
    fn matches_truth_table_on_random_formulas() {
        use proptest::prelude::*;
        proptest!(|(n in 1usize..7, raw in proptest::collection::vec(
            proptest::collection::vec((0usize..7, any::<bool>()), 1..4), 0..20))| {
            let clauses: Vec<Vec<Lit>> = raw
                .iter()
                .map(|c| c.iter().map(|&(v, s)| Lit { var: v % n, negated: s }).collect())
                .collect();
            let f = Cnf { num_vars: n, clauses };
            let expected = truth_table(&f);
            let got = enumerate_models(&f, 1 << n);
            let mut sorted = got.models.clone();
            sorted.sort();
            let mut want = expected.clone();
            want.sort();
            prop_assert_eq!(sorted, want);
            match solve(&f) {
                Some(m) => prop_assert!(f.satisfied_by(&m)),
                None => prop_assert!(expected.is_empty()),
            }
        });
    }
}
