//! Satisfaction of team-logic formulae by K-teams, and the relational
//! (classical) team semantics used as a reference.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::atoms::eval_atom_direct_in_structure;
use crate::error::{Error, Result};
use crate::formula::{DependencyAtom, Literal, TeamFormula};
use crate::interpretation::Structure;
use crate::kteam::KTeam;
use crate::semiring::{decompositions, SemiringSpec, Value};

/// How the checker searches for the teams witnessing `∨` and `∃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitStrategy {
    /// Enumerate every decomposition; needs a finitely decomposable semiring.
    ExactFinite,
    /// Draw split weights from the grid of rationals with denominator at
    /// most `d` (ignored for finitely decomposable semirings).
    Denominator(u64),
    /// Refuse to search; the caller exports the existential query instead.
    ExportOnly,
}

impl FromStr for SplitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SplitStrategy::ExactFinite),
            "export" => Ok(SplitStrategy::ExportOnly),
            _ => {
                let d = s
                    .strip_prefix("denom:")
                    .and_then(|d| d.parse::<u64>().ok())
                    .filter(|&d| d > 0)
                    .ok_or_else(|| {
                        Error::Input(format!("unknown strategy {s:?}; use exact, denom:<d> or export"))
                    })?;
                Ok(SplitStrategy::Denominator(d))
            }
        }
    }
}

impl fmt::Display for SplitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitStrategy::ExactFinite => write!(f, "exact"),
            SplitStrategy::Denominator(d) => write!(f, "denom:{d}"),
            SplitStrategy::ExportOnly => write!(f, "export"),
        }
    }
}

/// The witnesses found for a satisfied formula, shaped like the formula.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckTrace {
    Literal,
    Atom {
        value: Value,
    },
    And(Box<CheckTrace>, Box<CheckTrace>),
    Or {
        left_team: KTeam,
        right_team: KTeam,
        left: Box<CheckTrace>,
        right: Box<CheckTrace>,
    },
    Exists {
        var: String,
        team: KTeam,
        inner: Box<CheckTrace>,
    },
    Forall {
        var: String,
        team: KTeam,
        inner: Box<CheckTrace>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub verdict: bool,
    /// False when a negative verdict only covers part of the search space.
    pub complete: bool,
    pub trace: Option<CheckTrace>,
}

pub(crate) fn needs_search(f: &TeamFormula) -> bool {
    match f {
        TeamFormula::Lit(_) | TeamFormula::Atom(_) => false,
        TeamFormula::Or(..) | TeamFormula::Exists(..) => true,
        TeamFormula::And(a, b) => needs_search(a) || needs_search(b),
        TeamFormula::Forall(_, a) => needs_search(a),
    }
}

/// The denominator bound to search with, or the reason no search is possible.
pub(crate) fn search_bound(spec: &SemiringSpec, strat: SplitStrategy, needed: bool) -> Result<Option<u64>> {
    if spec.flags().finitely_decomposable && strat != SplitStrategy::ExportOnly {
        return Ok(None);
    }
    match strat {
        SplitStrategy::ExactFinite if needed => Err(Error::InfiniteSearch(format!(
            "{spec} is not finitely decomposable; use a denominator bound or export"
        ))),
        SplitStrategy::ExportOnly if needed => Err(Error::InfiniteSearch(
            "export-only strategy: use the existential export for this formula".into(),
        )),
        SplitStrategy::Denominator(d) => Ok(Some(d)),
        _ => Ok(None),
    }
}

pub(crate) fn prepare(x_domain: &[String], f: &TeamFormula) -> Result<TeamFormula> {
    if let Some(v) = f.free_vars().into_iter().find(|v| !x_domain.contains(v)) {
        return Err(Error::UnknownVariable(v));
    }
    Ok(f.rename_apart(&x_domain.iter().cloned().collect()))
}

/// `𝔄 ⊨_𝕏 φ`. Bound variables that clash with the team domain are renamed
/// first; the trace refers to the renamed formula.
pub fn check(a: &Structure, x: &KTeam, f: &TeamFormula, strat: SplitStrategy) -> Result<CheckResult> {
    let f = prepare(x.domain(), f)?;
    let finite = x.spec().flags().finitely_decomposable;
    let bound = search_bound(x.spec(), strat, needs_search(&f))?;
    if a.universe() != x.universe() {
        return Err(Error::Input("structure and team have different universes".into()));
    }
    let mut checker = Checker {
        a,
        bound,
        memo: HashMap::new(),
    };
    let trace = checker.sat(x, &f)?;
    Ok(CheckResult {
        verdict: trace.is_some(),
        complete: trace.is_some() || finite,
        trace,
    })
}

/// The domain extended by `var`, and the position `var` takes in it.
pub(crate) fn extended_domain(domain: &[String], var: &str) -> (Vec<String>, usize) {
    let mut d = domain.to_vec();
    d.push(var.to_string());
    let sorted = crate::kteam::VarOrder::sorted(&d);
    let at = sorted.iter().position(|v| v == var).unwrap();
    (sorted, at)
}

pub(crate) fn insert_at(row: &[usize], at: usize, value: usize) -> Vec<usize> {
    let mut r = row.to_vec();
    r.insert(at, value);
    r
}

pub(crate) fn literal_holds(a: &Structure, domain: &[String], row: &[usize], lit: &Literal) -> Result<bool> {
    let pos = |v: &String| -> Result<usize> {
        domain
            .iter()
            .position(|d| d == v)
            .ok_or_else(|| Error::UnknownVariable(v.clone()))
    };
    match lit {
        Literal::Rel { name, args, negated } => {
            a.vocabulary().check(name, args.len())?;
            let tuple: Vec<usize> = args
                .iter()
                .map(|v| pos(v).map(|p| row[p]))
                .collect::<Result<_>>()?;
            Ok(a.holds(name, &tuple) != *negated)
        }
        Literal::Eq { left, right, negated } => Ok((row[pos(left)?] == row[pos(right)?]) != *negated),
    }
}

/// Rows whose weight may be split: the support, or for semirings where
/// zero has nontrivial decompositions, every assignment.
pub(crate) fn split_rows(x: &KTeam) -> Vec<Vec<usize>> {
    if x.spec().is_plus_positive() {
        x.iter().map(|(r, _)| r.clone()).collect()
    } else {
        x.all_rows().collect()
    }
}

/// Calls `visit` on each element of the product of `choices`, stopping at
/// the first `Some`.
fn search_product<T>(
    choices: &[Vec<Vec<Value>>],
    mut visit: impl FnMut(&[usize]) -> Result<Option<T>>,
) -> Result<Option<T>> {
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        if let Some(t) = visit(&idx)? {
            return Ok(Some(t));
        }
        let mut i = idx.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

type MemoKey = (usize, Vec<(Vec<usize>, Value)>);

struct Checker<'a> {
    a: &'a Structure,
    bound: Option<u64>,
    memo: HashMap<MemoKey, Option<CheckTrace>>,
}

impl Checker<'_> {
    fn sat(&mut self, x: &KTeam, f: &TeamFormula) -> Result<Option<CheckTrace>> {
        let key: MemoKey = (
            f as *const TeamFormula as usize,
            x.iter().map(|(r, w)| (r.clone(), w.clone())).collect(),
        );
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let out = self.sat_uncached(x, f)?;
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn sat_uncached(&mut self, x: &KTeam, f: &TeamFormula) -> Result<Option<CheckTrace>> {
        match f {
            TeamFormula::Lit(l) => {
                for (row, _) in x.iter() {
                    if !literal_holds(self.a, x.domain(), row, l)? {
                        return Ok(None);
                    }
                }
                Ok(Some(CheckTrace::Literal))
            }
            TeamFormula::Atom(atom) => {
                let value = eval_atom_direct_in_structure(self.a, x, atom)?;
                Ok((!value.is_zero()).then_some(CheckTrace::Atom { value }))
            }
            TeamFormula::And(l, r) => {
                let Some(lt) = self.sat(x, l)? else {
                    return Ok(None);
                };
                Ok(self
                    .sat(x, r)?
                    .map(|rt| CheckTrace::And(Box::new(lt), Box::new(rt))))
            }
            TeamFormula::Or(l, r) => {
                let rows = split_rows(x);
                let choices: Vec<Vec<Vec<Value>>> = rows
                    .iter()
                    .map(|row| decompositions(&x.weight(row), 2, self.bound))
                    .collect::<Result<_>>()?;
                let empty = KTeam::new(x.domain(), x.universe().clone(), x.spec().clone())?;
                search_product(&choices, |idx| {
                    let mut left_team = empty.clone();
                    let mut right_team = empty.clone();
                    for ((row, c), &i) in rows.iter().zip(&choices).zip(idx) {
                        left_team.set(row.clone(), c[i][0].clone())?;
                        right_team.set(row.clone(), c[i][1].clone())?;
                    }
                    let Some(lt) = self.sat(&left_team, l)? else {
                        return Ok(None);
                    };
                    Ok(self.sat(&right_team, r)?.map(|rt| CheckTrace::Or {
                        left_team,
                        right_team,
                        left: Box::new(lt),
                        right: Box::new(rt),
                    }))
                })
            }
            TeamFormula::Exists(var, body) => {
                let (domain, at) = extended_domain(x.domain(), var);
                let n = x.universe().len();
                let rows = split_rows(x);
                let choices: Vec<Vec<Vec<Value>>> = rows
                    .iter()
                    .map(|row| decompositions(&x.weight(row), n, self.bound))
                    .collect::<Result<_>>()?;
                let empty = KTeam::new(&domain, x.universe().clone(), x.spec().clone())?;
                search_product(&choices, |idx| {
                    let mut team = empty.clone();
                    for ((row, c), &i) in rows.iter().zip(&choices).zip(idx) {
                        for (e, w) in c[i].iter().enumerate() {
                            team.set(insert_at(row, at, e), w.clone())?;
                        }
                    }
                    Ok(self.sat(&team, body)?.map(|inner| CheckTrace::Exists {
                        var: var.clone(),
                        team,
                        inner: Box::new(inner),
                    }))
                })
            }
            TeamFormula::Forall(var, body) => {
                let team = duplicate(x, var)?;
                Ok(self.sat(&team, body)?.map(|inner| CheckTrace::Forall {
                    var: var.clone(),
                    team,
                    inner: Box::new(inner),
                }))
            }
        }
    }
}

/// The unique team with `𝕐(s[a/x]) = 𝕏(s)` for every `s` and `a`.
pub(crate) fn duplicate(x: &KTeam, var: &str) -> Result<KTeam> {
    let (domain, at) = extended_domain(x.domain(), var);
    let mut team = KTeam::new(&domain, x.universe().clone(), x.spec().clone())?;
    for (row, w) in x.iter() {
        for e in 0..x.universe().len() {
            team.set(insert_at(row, at, e), w.clone())?;
        }
    }
    Ok(team)
}

/// Re-verifies a trace returned by [`check`] for the same inputs.
pub fn replay(a: &Structure, x: &KTeam, f: &TeamFormula, trace: &CheckTrace) -> Result<bool> {
    let f = prepare(x.domain(), f)?;
    replay_node(a, x, &f, trace)
}

fn replay_node(a: &Structure, x: &KTeam, f: &TeamFormula, trace: &CheckTrace) -> Result<bool> {
    match (f, trace) {
        (TeamFormula::Lit(l), CheckTrace::Literal) => {
            for (row, _) in x.iter() {
                if !literal_holds(a, x.domain(), row, l)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (TeamFormula::Atom(atom), CheckTrace::Atom { value }) => {
            let v = eval_atom_direct_in_structure(a, x, atom)?;
            Ok(!v.is_zero() && v == *value)
        }
        (TeamFormula::And(l, r), CheckTrace::And(lt, rt)) => {
            Ok(replay_node(a, x, l, lt)? && replay_node(a, x, r, rt)?)
        }
        (
            TeamFormula::Or(l, r),
            CheckTrace::Or {
                left_team,
                right_team,
                left,
                right,
            },
        ) => {
            if left_team.domain() != x.domain() || right_team.domain() != x.domain() {
                return Ok(false);
            }
            let rows: BTreeSet<Vec<usize>> = x
                .support()
                .into_iter()
                .chain(left_team.support())
                .chain(right_team.support())
                .collect();
            for row in rows {
                if left_team.weight(&row).add(&right_team.weight(&row))? != x.weight(&row) {
                    return Ok(false);
                }
            }
            Ok(replay_node(a, left_team, l, left)? && replay_node(a, right_team, r, right)?)
        }
        (TeamFormula::Exists(v, body), CheckTrace::Exists { var, team, inner }) => {
            let (domain, at) = extended_domain(x.domain(), v);
            if v != var || team.domain() != domain.as_slice() {
                return Ok(false);
            }
            let rows: BTreeSet<Vec<usize>> = x
                .support()
                .into_iter()
                .chain(team.iter().map(|(r, _)| {
                    let mut r = r.clone();
                    r.remove(at);
                    r
                }))
                .collect();
            for row in rows {
                let ws: Vec<Value> = (0..x.universe().len())
                    .map(|e| team.weight(&insert_at(&row, at, e)))
                    .collect();
                if x.spec().sum(ws.iter())? != x.weight(&row) {
                    return Ok(false);
                }
            }
            replay_node(a, team, body, inner)
        }
        (TeamFormula::Forall(v, body), CheckTrace::Forall { var, team, inner }) => {
            Ok(v == var && *team == duplicate(x, v)? && replay_node(a, team, body, inner)?)
        }
        _ => Ok(false),
    }
}

/// Relational team semantics over the support of `x` (weights ignored).
pub fn check_classical(a: &Structure, x: &KTeam, f: &TeamFormula) -> Result<bool> {
    let f = prepare(x.domain(), f)?;
    let mut c = Classical {
        a,
        n: x.universe().len(),
        memo: HashMap::new(),
    };
    c.sat(x.domain(), &x.support(), &f)
}

struct Classical<'a> {
    a: &'a Structure,
    n: usize,
    memo: HashMap<(usize, BTreeSet<Vec<usize>>), bool>,
}

impl Classical<'_> {
    fn sat(&mut self, domain: &[String], x: &BTreeSet<Vec<usize>>, f: &TeamFormula) -> Result<bool> {
        let key = (f as *const TeamFormula as usize, x.clone());
        if let Some(&hit) = self.memo.get(&key) {
            return Ok(hit);
        }
        let out = self.sat_uncached(domain, x, f)?;
        self.memo.insert(key, out);
        Ok(out)
    }

    fn sat_uncached(&mut self, domain: &[String], x: &BTreeSet<Vec<usize>>, f: &TeamFormula) -> Result<bool> {
        match f {
            TeamFormula::Lit(l) => {
                for row in x {
                    if !literal_holds(self.a, domain, row, l)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            TeamFormula::Atom(atom) => classical_atom(self.a, domain, x, atom),
            TeamFormula::And(l, r) => Ok(self.sat(domain, x, l)? && self.sat(domain, x, r)?),
            TeamFormula::Or(l, r) => {
                // Y ∪ Z = X: each row goes left, right or both.
                let rows: Vec<&Vec<usize>> = x.iter().collect();
                let mut code = vec![0u8; rows.len()];
                loop {
                    let pick = |side: u8| -> BTreeSet<Vec<usize>> {
                        rows.iter()
                            .zip(&code)
                            .filter(|(_, &c)| c == side || c == 2)
                            .map(|(r, _)| (*r).clone())
                            .collect()
                    };
                    let (y, z) = (pick(0), pick(1));
                    if self.sat(domain, &y, l)? && self.sat(domain, &z, r)? {
                        return Ok(true);
                    }
                    let mut i = 0;
                    loop {
                        if i == code.len() {
                            return Ok(false);
                        }
                        code[i] += 1;
                        if code[i] < 3 {
                            break;
                        }
                        code[i] = 0;
                        i += 1;
                    }
                }
            }
            TeamFormula::Exists(var, body) => {
                // F: X → nonempty subsets of A.
                let (ext, at) = extended_domain(domain, var);
                let rows: Vec<&Vec<usize>> = x.iter().collect();
                let full = (1u64 << self.n) - 1;
                let mut masks = vec![1u64; rows.len()];
                loop {
                    let y: BTreeSet<Vec<usize>> = rows
                        .iter()
                        .zip(&masks)
                        .flat_map(|(r, &m)| {
                            (0..self.n)
                                .filter(move |e| m >> e & 1 == 1)
                                .map(move |e| insert_at(r, at, e))
                        })
                        .collect();
                    if self.sat(&ext, &y, body)? {
                        return Ok(true);
                    }
                    let mut i = 0;
                    loop {
                        if i == masks.len() {
                            return Ok(false);
                        }
                        masks[i] += 1;
                        if masks[i] <= full {
                            break;
                        }
                        masks[i] = 1;
                        i += 1;
                    }
                }
            }
            TeamFormula::Forall(var, body) => {
                let (ext, at) = extended_domain(domain, var);
                let y: BTreeSet<Vec<usize>> = x
                    .iter()
                    .flat_map(|r| (0..self.n).map(move |e| insert_at(r, at, e)))
                    .collect();
                self.sat(&ext, &y, body)
            }
        }
    }
}

/// The relational reading of a dependency atom on a set of assignments.
pub fn classical_atom(
    a: &Structure,
    domain: &[String],
    x: &BTreeSet<Vec<usize>>,
    atom: &DependencyAtom,
) -> Result<bool> {
    let pos = |vars: &[String]| -> Result<Vec<usize>> {
        vars.iter()
            .map(|v| {
                domain
                    .iter()
                    .position(|d| d == v)
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect()
    };
    let proj = |row: &[usize], p: &[usize]| -> Vec<usize> { p.iter().map(|&i| row[i]).collect() };
    match atom {
        DependencyAtom::Dep { from, to } => {
            let (i, j) = (pos(from)?, pos(to)?);
            Ok(x.iter().all(|s| {
                x.iter()
                    .all(|t| proj(s, &i) != proj(t, &i) || proj(s, &j) == proj(t, &j))
            }))
        }
        DependencyAtom::Indep { given, left, right } => {
            let (i, j, k) = (pos(given)?, pos(left)?, pos(right)?);
            let ij = [i.clone(), j].concat();
            Ok(x.iter().all(|s| {
                x.iter().all(|t| {
                    proj(s, &i) != proj(t, &i)
                        || x.iter()
                            .any(|r| proj(r, &ij) == proj(s, &ij) && proj(r, &k) == proj(t, &k))
                })
            }))
        }
        DependencyAtom::Inc { sub, sup } => {
            if sub.len() != sup.len() {
                return Err(Error::LengthMismatch(format!(
                    "inclusion atom needs equal tuple lengths, got {} and {}",
                    sub.len(),
                    sup.len()
                )));
            }
            let (i, j) = (pos(sub)?, pos(sup)?);
            Ok(x.iter().all(|s| x.iter().any(|t| proj(s, &i) == proj(t, &j))))
        }
        DependencyAtom::Lit(l) => {
            for row in x {
                if !literal_holds(a, domain, row, l)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// The K-team verdict next to the verdict for the possibilistic collapse.
pub fn collapse_check(
    a: &Structure,
    x: &KTeam,
    f: &TeamFormula,
    strat: SplitStrategy,
) -> Result<(bool, bool)> {
    if !x.spec().is_positive() {
        return Err(Error::UnsupportedSpec(format!(
            "{} is not positive; the collapse comparison needs a positive semiring",
            x.spec()
        )));
    }
    Ok((check(a, x, f, strat)?.verdict, check_classical(a, x, f)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_team, Vocabulary};
    use crate::interpretation::Universe;
    use std::sync::Arc;

    fn setup(spec: SemiringSpec, weights: &[&str]) -> (Structure, KTeam) {
        let u = Arc::new(Universe::new(["a", "b"]).unwrap());
        let mut s = Structure::new(u.clone(), Vocabulary::new().with("S", 1));
        s.insert("S", vec![0]).unwrap();
        let rows = weights
            .iter()
            .enumerate()
            .map(|(i, w)| (vec![i], spec.parse_value(w).unwrap()));
        let x = KTeam::from_rows(&["x"], u, spec.clone(), rows).unwrap();
        (s, x)
    }

    fn f(s: &Structure, text: &str) -> TeamFormula {
        parse_team(text, s.vocabulary()).unwrap()
    }

    #[test]
    fn boolean_split_is_found() {
        let (s, x) = setup(SemiringSpec::Boolean, &["1", "1"]);
        let phi = f(&s, "S(x) | !S(x)");
        let r = check(&s, &x, &phi, SplitStrategy::ExactFinite).unwrap();
        assert!(r.verdict && r.complete);
        let Some(CheckTrace::Or {
            left_team,
            right_team,
            ..
        }) = &r.trace
        else {
            panic!("expected a split")
        };
        assert_eq!(left_team.support(), [vec![0]].into_iter().collect());
        assert_eq!(right_team.support(), [vec![1]].into_iter().collect());
        assert!(replay(&s, &x, &phi, r.trace.as_ref().unwrap()).unwrap());
        assert!(
            !check(&s, &x, &f(&s, "S(x)"), SplitStrategy::ExactFinite)
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn natural_split() {
        let (s, x) = setup(SemiringSpec::Natural, &["2", "3"]);
        let r = check(&s, &x, &f(&s, "S(x) | !S(x)"), SplitStrategy::ExactFinite).unwrap();
        assert!(r.verdict);
    }

    #[test]
    fn quantifiers() {
        let (s, x) = setup(SemiringSpec::Natural, &["2", "3"]);
        let r = check(
            &s,
            &x,
            &f(&s, "exists y. S(y) & dep(x;y)"),
            SplitStrategy::ExactFinite,
        )
        .unwrap();
        assert!(r.verdict);
        let all = check(&s, &x, &f(&s, "forall y. S(y)"), SplitStrategy::ExactFinite).unwrap();
        assert!(!all.verdict);
        let r = check(
            &s,
            &x,
            &f(&s, "forall y. S(y) | !S(y)"),
            SplitStrategy::ExactFinite,
        )
        .unwrap();
        assert!(r.verdict);
        assert!(replay(
            &s,
            &x,
            &f(&s, "forall y. S(y) | !S(y)"),
            r.trace.as_ref().unwrap()
        )
        .unwrap());
    }

    #[test]
    fn clashing_binder_is_renamed() {
        let (s, x) = setup(SemiringSpec::Boolean, &["1", "1"]);
        let phi = f(&s, "exists x. S(x)");
        assert!(check(&s, &x, &phi, SplitStrategy::ExactFinite).unwrap().verdict);
        assert!(check_classical(&s, &x, &phi).unwrap());
    }

    #[test]
    fn strategies() {
        let (s, x) = setup(SemiringSpec::Rational, &["1/2", "1/2"]);
        let phi = f(&s, "S(x) | !S(x)");
        assert_eq!(
            check(&s, &x, &phi, SplitStrategy::ExactFinite)
                .unwrap_err()
                .code(),
            "InfiniteSearch"
        );
        assert_eq!(
            check(&s, &x, &phi, SplitStrategy::ExportOnly).unwrap_err().code(),
            "InfiniteSearch"
        );
        let r = check(&s, &x, &phi, SplitStrategy::Denominator(1)).unwrap();
        assert!(r.verdict);
        let r = check(&s, &x, &f(&s, "S(x)"), SplitStrategy::Denominator(2)).unwrap();
        assert!(!r.verdict);
        assert!(!r.complete);
        assert_eq!(
            "denom:12".parse::<SplitStrategy>().unwrap(),
            SplitStrategy::Denominator(12)
        );
        assert!("denom:0".parse::<SplitStrategy>().is_err());
    }

    #[test]
    fn empty_team_satisfies_everything() {
        let (s, x) = setup(SemiringSpec::Natural, &["0", "0"]);
        for text in ["S(x)", "!S(x) & S(x)", "exists y. x != x", "forall y. dep(;y)"] {
            assert!(
                check(&s, &x, &f(&s, text), SplitStrategy::ExactFinite)
                    .unwrap()
                    .verdict
            );
            assert!(check_classical(&s, &x, &f(&s, text)).unwrap());
        }
    }

    #[test]
    fn ring_splits_range_over_all_rows() {
        // Zero decomposes nontrivially in ℤ₂, so unsupported rows take part.
        let (_, x) = setup(SemiringSpec::int_mod(2).unwrap(), &["1", "0"]);
        assert_eq!(split_rows(&x), vec![vec![0], vec![1]]);
        let (_, y) = setup(SemiringSpec::Natural, &["1", "0"]);
        assert_eq!(split_rows(&y), vec![vec![0]]);
        // dep(;x) is a power of 1 + 1 = 0 here, so no split can satisfy it.
        let (s, x) = setup(SemiringSpec::int_mod(2).unwrap(), &["1", "0"]);
        let phi = f(&s, "dep(;x) | x = x");
        assert!(!check(&s, &x, &phi, SplitStrategy::ExactFinite).unwrap().verdict);
        assert!(
            check(&s, &x, &f(&s, "indep(;x;x) | x = x"), SplitStrategy::ExactFinite)
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn collapse_needs_positive() {
        let (s, x) = setup(SemiringSpec::int_mod(4).unwrap(), &["1", "1"]);
        let e = collapse_check(&s, &x, &f(&s, "S(x)"), SplitStrategy::ExactFinite).unwrap_err();
        assert_eq!(e.code(), "UnsupportedSpec");
    }
}
