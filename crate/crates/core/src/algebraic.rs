//! Constrained polynomials: team formulae compiled to terms over semiring
//! constants, team variables and equality characteristics `χ`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::atoms::{atom_sentence, simplify};
use crate::error::{Error, Result};
use crate::formula::{CmpOp, DependencyAtom, Formula, Literal, TeamFormula};
use crate::interpretation::{Structure, Universe};
use crate::kteam::{fresh_relation_name, KTeam, VarOrder};
use crate::semiring::{decompositions, SemiringSpec, Value};
use crate::team_semantics::{
    extended_domain, insert_at, literal_holds, needs_search, prepare, search_bound, split_rows, SplitStrategy,
};

/// The weight of one assignment in one team family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TeamVar {
    pub family: usize,
    pub row: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CPoly {
    Const(Value),
    Var(TeamVar),
    Add(Vec<CPoly>),
    Mul(Vec<CPoly>),
    /// `χ[lhs op rhs]`: one if the comparison holds, zero otherwise.
    Chi(Box<CPoly>, CmpOp, Box<CPoly>),
}

impl CPoly {
    fn add(spec: &SemiringSpec, parts: Vec<CPoly>) -> Result<CPoly> {
        let mut constant = spec.zero();
        let mut rest = Vec::new();
        for p in parts {
            match p {
                CPoly::Const(c) => constant = constant.add(&c)?,
                CPoly::Add(inner) => rest.extend(inner),
                other => rest.push(other),
            }
        }
        if !constant.is_zero() {
            rest.push(CPoly::Const(constant));
        }
        Ok(match rest.len() {
            0 => CPoly::Const(spec.zero()),
            1 => rest.pop().unwrap(),
            _ => CPoly::Add(rest),
        })
    }

    fn mul(spec: &SemiringSpec, parts: Vec<CPoly>) -> Result<CPoly> {
        let mut constant = spec.one();
        let mut rest = Vec::new();
        for p in parts {
            match p {
                CPoly::Const(c) => constant = constant.mul(&c)?,
                CPoly::Mul(inner) => rest.extend(inner),
                other => rest.push(other),
            }
        }
        if constant.is_zero() {
            return Ok(CPoly::Const(constant));
        }
        if !constant.is_one() {
            rest.push(CPoly::Const(constant));
        }
        Ok(match rest.len() {
            0 => CPoly::Const(spec.one()),
            1 => rest.pop().unwrap(),
            _ => CPoly::Mul(rest),
        })
    }

    fn chi(spec: &SemiringSpec, l: CPoly, op: CmpOp, r: CPoly) -> Result<CPoly> {
        if let (CPoly::Const(a), CPoly::Const(b)) = (&l, &r) {
            return Ok(CPoly::Const(spec.indicator(compare(a, op, b)?)));
        }
        Ok(CPoly::Chi(Box::new(l), op, Box::new(r)))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            CPoly::Const(_) | CPoly::Var(_) => 1,
            CPoly::Add(ps) | CPoly::Mul(ps) => 1 + ps.iter().map(CPoly::size).sum::<usize>(),
            CPoly::Chi(l, _, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn chi_count(&self) -> usize {
        match self {
            CPoly::Const(_) | CPoly::Var(_) => 0,
            CPoly::Add(ps) | CPoly::Mul(ps) => ps.iter().map(CPoly::chi_count).sum(),
            CPoly::Chi(l, _, r) => 1 + l.chi_count() + r.chi_count(),
        }
    }

    /// Team variables occurring in the polynomial.
    pub fn vars(&self) -> BTreeSet<TeamVar> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&TeamVar)) {
        match self {
            CPoly::Const(_) => {}
            CPoly::Var(v) => f(v),
            CPoly::Add(ps) | CPoly::Mul(ps) => ps.iter().for_each(|p| p.visit_vars(f)),
            CPoly::Chi(l, _, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
        }
    }
}

fn compare(a: &Value, op: CmpOp, b: &Value) -> Result<bool> {
    Ok(match op {
        CmpOp::Eq => a == b,
        CmpOp::Neq => a != b,
        CmpOp::Le => a.nat_leq(b)?,
        CmpOp::Nle => !a.nat_leq(b)?,
    })
}

/// How literal subformulae are expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiteralMode {
    /// `Π_s (χ[𝕏(s)=0] + χ[𝕏(s)≠0]·T(s))`.
    Indicator,
    /// `Π_s (χ[𝕏(s)=0] + 𝕏(s)·T(s))`, letting the weights flow into the value.
    Provenance,
}

/// A team family: the input team (index 0) or a team introduced by a
/// disjunction or quantifier.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub name: String,
    pub domain: Vec<String>,
}

#[derive(Debug, Clone)]
enum Node {
    Literal {
        poly: CPoly,
        family: usize,
        failing: Vec<Vec<usize>>,
    },
    Atom {
        poly: CPoly,
    },
    And(Box<Node>, Box<Node>),
    Or {
        left_family: usize,
        right_family: usize,
        constraint: CPoly,
        left: Box<Node>,
        right: Box<Node>,
    },
    Exists {
        family: usize,
        at: usize,
        constraint: CPoly,
        inner: Box<Node>,
    },
    Forall {
        family: usize,
        at: usize,
        constraint: CPoly,
        inner: Box<Node>,
    },
}

/// A compiled formula: the polynomial, kept in the shape of the formula so
/// that witness search can follow the constraints top-down.
#[derive(Debug, Clone)]
pub struct Compiled {
    universe: Arc<Universe>,
    spec: SemiringSpec,
    families: Vec<Family>,
    root: Node,
    needs_search: bool,
}

/// Compiles `f` for input teams over `domain`.
pub fn compile(
    a: &Structure,
    f: &TeamFormula,
    domain: &[String],
    spec: &SemiringSpec,
    mode: LiteralMode,
) -> Result<Compiled> {
    let domain = VarOrder::sorted(domain);
    let f = prepare(&domain, f)?;
    let mut c = Compiler {
        a,
        spec,
        mode,
        rel: fresh_relation_name(a.vocabulary()),
        families: vec![Family {
            name: "X".into(),
            domain,
        }],
    };
    let root = c.node(&f, 0)?;
    Ok(Compiled {
        universe: a.universe().clone(),
        spec: spec.clone(),
        families: c.families,
        root,
        needs_search: needs_search(&f),
    })
}

struct Compiler<'a> {
    a: &'a Structure,
    spec: &'a SemiringSpec,
    mode: LiteralMode,
    rel: String,
    families: Vec<Family>,
}

impl Compiler<'_> {
    fn fresh(&mut self, domain: Vec<String>) -> usize {
        let i = self.families.len();
        self.families.push(Family {
            name: format!("Y{i}"),
            domain,
        });
        i
    }

    fn rows(&self, family: usize) -> Vec<Vec<usize>> {
        self.a
            .universe()
            .tuples(self.families[family].domain.len())
            .collect()
    }

    fn var(family: usize, row: Vec<usize>) -> CPoly {
        CPoly::Var(TeamVar { family, row })
    }

    fn node(&mut self, f: &TeamFormula, fam: usize) -> Result<Node> {
        let spec = self.spec;
        match f {
            TeamFormula::Lit(l) | TeamFormula::Atom(DependencyAtom::Lit(l)) => self.literal(l, fam),
            TeamFormula::Atom(atom) => {
                let sentence = simplify(&atom_sentence(atom, &self.families[fam].domain, &self.rel)?);
                let poly = self.ground(&sentence.nnf(), &mut Vec::new(), fam)?;
                Ok(Node::Atom { poly })
            }
            TeamFormula::And(l, r) => Ok(Node::And(
                Box::new(self.node(l, fam)?),
                Box::new(self.node(r, fam)?),
            )),
            TeamFormula::Or(l, r) => {
                let domain = self.families[fam].domain.clone();
                let y = self.fresh(domain.clone());
                let z = self.fresh(domain);
                let mut chis = Vec::new();
                for row in self.rows(fam) {
                    let sum = CPoly::add(spec, vec![Self::var(y, row.clone()), Self::var(z, row.clone())])?;
                    chis.push(CPoly::chi(spec, sum, CmpOp::Eq, Self::var(fam, row))?);
                }
                let constraint = CPoly::mul(spec, chis)?;
                let left = Box::new(self.node(l, y)?);
                let right = Box::new(self.node(r, z)?);
                Ok(Node::Or {
                    left_family: y,
                    right_family: z,
                    constraint,
                    left,
                    right,
                })
            }
            TeamFormula::Exists(x, body) | TeamFormula::Forall(x, body) => {
                let (domain, at) = extended_domain(&self.families[fam].domain, x);
                let y = self.fresh(domain);
                let n = self.a.universe().len();
                let mut chis = Vec::new();
                for row in self.rows(fam) {
                    let ext = (0..n).map(|e| Self::var(y, insert_at(&row, at, e)));
                    if matches!(f, TeamFormula::Exists(..)) {
                        let sum = CPoly::add(spec, ext.collect())?;
                        chis.push(CPoly::chi(spec, Self::var(fam, row), CmpOp::Eq, sum)?);
                    } else {
                        for v in ext {
                            chis.push(CPoly::chi(spec, Self::var(fam, row.clone()), CmpOp::Eq, v)?);
                        }
                    }
                }
                let constraint = CPoly::mul(spec, chis)?;
                let inner = Box::new(self.node(body, y)?);
                Ok(if matches!(f, TeamFormula::Exists(..)) {
                    Node::Exists {
                        family: y,
                        at,
                        constraint,
                        inner,
                    }
                } else {
                    Node::Forall {
                        family: y,
                        at,
                        constraint,
                        inner,
                    }
                })
            }
        }
    }

    fn literal(&mut self, l: &Literal, fam: usize) -> Result<Node> {
        let spec = self.spec;
        let domain = self.families[fam].domain.clone();
        let mut factors = Vec::new();
        let mut failing = Vec::new();
        for row in self.rows(fam) {
            let holds = literal_holds(self.a, &domain, &row, l)?;
            if !holds {
                failing.push(row.clone());
            }
            let t = CPoly::Const(spec.indicator(holds));
            let x = Self::var(fam, row);
            let is_zero = CPoly::chi(spec, x.clone(), CmpOp::Eq, CPoly::Const(spec.zero()))?;
            let flow = match self.mode {
                LiteralMode::Indicator => CPoly::chi(spec, x, CmpOp::Neq, CPoly::Const(spec.zero()))?,
                LiteralMode::Provenance => x,
            };
            factors.push(CPoly::add(spec, vec![is_zero, CPoly::mul(spec, vec![flow, t])?])?);
        }
        Ok(Node::Literal {
            poly: CPoly::mul(spec, factors)?,
            family: fam,
            failing,
        })
    }

    /// Grounds an atom sentence over the universe; the team relation
    /// becomes team variables and structure facts become constants.
    fn ground(&self, f: &Formula, env: &mut Vec<(String, usize)>, fam: usize) -> Result<CPoly> {
        let spec = self.spec;
        let lookup = |env: &[(String, usize)], v: &str| -> Result<usize> {
            env.iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|(_, e)| *e)
                .ok_or_else(|| Error::UnboundVariable(v.to_string()))
        };
        let n = self.a.universe().len();
        match f {
            Formula::Rel { name, args, negated } => {
                let tuple: Vec<usize> = args.iter().map(|v| lookup(env, v)).collect::<Result<_>>()?;
                if *name == self.rel {
                    let x = Self::var(fam, tuple);
                    if *negated {
                        CPoly::chi(spec, x, CmpOp::Eq, CPoly::Const(spec.zero()))
                    } else {
                        Ok(x)
                    }
                } else {
                    self.a.vocabulary().check(name, args.len())?;
                    Ok(CPoly::Const(
                        spec.indicator(self.a.holds(name, &tuple) != *negated),
                    ))
                }
            }
            Formula::Eq { left, right, negated } => Ok(CPoly::Const(
                spec.indicator((lookup(env, left)? == lookup(env, right)?) != *negated),
            )),
            Formula::Bot => Ok(CPoly::Const(spec.zero())),
            Formula::Top => Ok(CPoly::Const(spec.one())),
            Formula::And(l, r) => {
                let l = self.ground(l, env, fam)?;
                let r = self.ground(r, env, fam)?;
                CPoly::mul(spec, vec![l, r])
            }
            Formula::Or(l, r) => {
                let l = self.ground(l, env, fam)?;
                let r = self.ground(r, env, fam)?;
                CPoly::add(spec, vec![l, r])
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                let mut parts = Vec::with_capacity(n);
                for e in 0..n {
                    env.push((x.clone(), e));
                    let p = self.ground(body, env, fam);
                    env.pop();
                    parts.push(p?);
                }
                if matches!(f, Formula::Exists(..)) {
                    CPoly::add(spec, parts)
                } else {
                    CPoly::mul(spec, parts)
                }
            }
            Formula::Cmp(l, op, r) => {
                let l = self.ground(l, env, fam)?;
                let r = self.ground(r, env, fam)?;
                CPoly::chi(spec, l, *op, r)
            }
            Formula::Not(_) => Err(Error::Input("negation outside negation normal form".into())),
        }
    }
}

impl Node {
    fn poly(&self, spec: &SemiringSpec) -> Result<CPoly> {
        match self {
            Node::Literal { poly, .. } | Node::Atom { poly } => Ok(poly.clone()),
            Node::And(l, r) => CPoly::mul(spec, vec![l.poly(spec)?, r.poly(spec)?]),
            Node::Or {
                constraint,
                left,
                right,
                ..
            } => CPoly::mul(
                spec,
                vec![left.poly(spec)?, right.poly(spec)?, constraint.clone()],
            ),
            Node::Exists {
                constraint, inner, ..
            }
            | Node::Forall {
                constraint, inner, ..
            } => CPoly::mul(spec, vec![inner.poly(spec)?, constraint.clone()]),
        }
    }
}

/// Teams assigned to families.
#[derive(Debug, Clone, Default)]
pub struct Valuation {
    teams: BTreeMap<usize, KTeam>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, family: usize, team: KTeam) -> Self {
        self.teams.insert(family, team);
        self
    }

    pub fn insert(&mut self, family: usize, team: KTeam) {
        self.teams.insert(family, team);
    }

    pub fn get(&self, family: usize) -> Option<&KTeam> {
        self.teams.get(&family)
    }
}

/// Bottom-up evaluation; every family occurring in `p` must be bound.
pub fn evaluate(p: &CPoly, v: &Valuation, spec: &SemiringSpec) -> Result<Value> {
    match p {
        CPoly::Const(c) => Ok(c.clone()),
        CPoly::Var(TeamVar { family, row }) => v
            .teams
            .get(family)
            .map(|t| t.weight(row))
            .ok_or_else(|| Error::MissingVariable(format!("team family {family}"))),
        CPoly::Add(ps) => {
            let vals: Vec<Value> = ps.iter().map(|q| evaluate(q, v, spec)).collect::<Result<_>>()?;
            spec.sum(vals.iter())
        }
        CPoly::Mul(ps) => {
            let mut acc = spec.one();
            for q in ps {
                acc = acc.mul(&evaluate(q, v, spec)?)?;
                if acc.is_zero() {
                    break;
                }
            }
            Ok(acc)
        }
        CPoly::Chi(l, op, r) => {
            Ok(spec.indicator(compare(&evaluate(l, v, spec)?, *op, &evaluate(r, v, spec)?)?))
        }
    }
}

/// Multiset of polynomial values over the witness valuations.
pub type ValueCounts = HashMap<Value, u128>;

impl Compiled {
    pub fn spec(&self) -> &SemiringSpec {
        &self.spec
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn poly(&self) -> Result<CPoly> {
        self.root.poly(&self.spec)
    }

    /// S-expression rendering with team variables written `Y3(a,b)`.
    pub fn render(&self, p: &CPoly) -> String {
        let mut out = String::new();
        self.render_into(p, &mut out);
        out
    }

    fn render_into(&self, p: &CPoly, out: &mut String) {
        match p {
            CPoly::Const(c) => {
                let _ = write!(out, "{c}");
            }
            CPoly::Var(v) => {
                let _ = write!(
                    out,
                    "{}({})",
                    self.families[v.family].name,
                    self.universe.format_tuple(&v.row)
                );
            }
            CPoly::Add(ps) | CPoly::Mul(ps) => {
                out.push_str(if matches!(p, CPoly::Add(_)) { "(+" } else { "(*" });
                for q in ps {
                    out.push(' ');
                    self.render_into(q, out);
                }
                out.push(')');
            }
            CPoly::Chi(l, op, r) => {
                let _ = write!(out, "(chi{} ", op.symbol());
                self.render_into(l, out);
                out.push(' ');
                self.render_into(r, out);
                out.push(')');
            }
        }
    }

    fn check_input(&self, x: &KTeam) -> Result<()> {
        if x.domain() != self.families[0].domain.as_slice() {
            return Err(Error::Input(format!(
                "team domain {:?} differs from the compiled domain {:?}",
                x.domain(),
                self.families[0].domain
            )));
        }
        if *x.spec() != self.spec {
            return Err(Error::SpecMismatch {
                left: x.spec().to_string(),
                right: self.spec.to_string(),
            });
        }
        if **x.universe() != *self.universe {
            return Err(Error::Input("team universe differs from the structure".into()));
        }
        Ok(())
    }

    /// The values the polynomial takes at every valuation of the fresh
    /// families that satisfies its `χ` constraints, with multiplicities.
    pub fn witness_values(&self, x: &KTeam, strat: SplitStrategy) -> Result<ValueCounts> {
        self.check_input(x)?;
        let bound = search_bound(&self.spec, strat, self.needs_search)?;
        let mut v = Valuation::new().with(0, x.clone());
        let mut s = Search { c: self, bound };
        s.values(&self.root, 0, &mut v)
    }

    /// Whether the polynomial takes a nonzero value once `x` is fixed.
    pub fn range_nonzero(&self, x: &KTeam, strat: SplitStrategy) -> Result<bool> {
        Ok(self.witness_values(x, strat)?.keys().any(|v| !v.is_zero()))
    }

    /// Number of witness valuations with a nonzero value; a formula without
    /// fresh families has the single empty valuation.
    pub fn count_witnesses(&self, x: &KTeam, strat: SplitStrategy) -> Result<u128> {
        Ok(self
            .witness_values(x, strat)?
            .iter()
            .filter(|(v, _)| !v.is_zero())
            .map(|(_, c)| c)
            .sum())
    }
}

struct Search<'a> {
    c: &'a Compiled,
    bound: Option<u64>,
}

fn combine(l: &ValueCounts, r: &ValueCounts, extra: &Value, out: &mut ValueCounts) -> Result<()> {
    for (lv, lc) in l {
        for (rv, rc) in r {
            let v = lv.mul(rv)?.mul(extra)?;
            *out.entry(v).or_default() += lc * rc;
        }
    }
    Ok(())
}

impl Search<'_> {
    fn empty(&self, family: usize) -> Result<KTeam> {
        KTeam::new(
            &self.c.families[family].domain,
            self.c.universe.clone(),
            self.c.spec.clone(),
        )
    }

    fn values(&mut self, node: &Node, fam: usize, v: &mut Valuation) -> Result<ValueCounts> {
        let spec = &self.c.spec;
        let one = |x: Value| -> ValueCounts { [(x, 1)].into_iter().collect() };
        match node {
            Node::Literal { poly, .. } | Node::Atom { poly } => Ok(one(evaluate(poly, v, spec)?)),
            Node::And(l, r) => {
                let lv = self.values(l, fam, v)?;
                let rv = self.values(r, fam, v)?;
                let mut out = ValueCounts::new();
                combine(&lv, &rv, &spec.one(), &mut out)?;
                Ok(out)
            }
            Node::Or {
                left_family,
                right_family,
                constraint,
                left,
                right,
            } => {
                let x = v.teams[&fam].clone();
                let rows = split_rows(&x);
                let choices: Vec<Vec<Vec<Value>>> = rows
                    .iter()
                    .map(|row| decompositions(&x.weight(row), 2, self.bound))
                    .collect::<Result<_>>()?;
                let mut out = ValueCounts::new();
                for idx in product_indices(&choices) {
                    let mut y = self.empty(*left_family)?;
                    let mut z = self.empty(*right_family)?;
                    for ((row, c), &i) in rows.iter().zip(&choices).zip(&idx) {
                        y.set(row.clone(), c[i][0].clone())?;
                        z.set(row.clone(), c[i][1].clone())?;
                    }
                    v.insert(*left_family, y);
                    v.insert(*right_family, z);
                    let chi = evaluate(constraint, v, spec)?;
                    if chi.is_zero() {
                        continue;
                    }
                    let lv = self.values(left, *left_family, v)?;
                    let rv = self.values(right, *right_family, v)?;
                    combine(&lv, &rv, &chi, &mut out)?;
                }
                v.teams.remove(left_family);
                v.teams.remove(right_family);
                Ok(out)
            }
            Node::Exists {
                family,
                at,
                constraint,
                inner,
            } => {
                let x = v.teams[&fam].clone();
                let rows = split_rows(&x);
                let n = self.c.universe.len();
                let choices: Vec<Vec<Vec<Value>>> = rows
                    .iter()
                    .map(|row| decompositions(&x.weight(row), n, self.bound))
                    .collect::<Result<_>>()?;
                let mut out = ValueCounts::new();
                for idx in product_indices(&choices) {
                    let mut y = self.empty(*family)?;
                    for ((row, c), &i) in rows.iter().zip(&choices).zip(&idx) {
                        for (e, w) in c[i].iter().enumerate() {
                            y.set(insert_at(row, *at, e), w.clone())?;
                        }
                    }
                    v.insert(*family, y);
                    let chi = evaluate(constraint, v, spec)?;
                    if chi.is_zero() {
                        continue;
                    }
                    let iv = self.values(inner, *family, v)?;
                    combine(&iv, &one(spec.one()), &chi, &mut out)?;
                }
                v.teams.remove(family);
                Ok(out)
            }
            Node::Forall {
                family,
                at,
                constraint,
                inner,
            } => {
                let x = v.teams[&fam].clone();
                let mut y = self.empty(*family)?;
                for (row, w) in x.iter() {
                    for e in 0..self.c.universe.len() {
                        y.set(insert_at(row, *at, e), w.clone())?;
                    }
                }
                v.insert(*family, y);
                let chi = evaluate(constraint, v, spec)?;
                let out = if chi.is_zero() {
                    ValueCounts::new()
                } else {
                    let iv = self.values(inner, *family, v)?;
                    let mut out = ValueCounts::new();
                    combine(&iv, &one(spec.one()), &chi, &mut out)?;
                    out
                };
                v.teams.remove(family);
                Ok(out)
            }
        }
    }
}

/// Every index vector into the product of `choices`, in odometer order.
fn product_indices(choices: &[Vec<Vec<Value>>]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let mut next = if choices.iter().any(|c| c.is_empty()) {
        None
    } else {
        Some(vec![0usize; choices.len()])
    };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut idx = cur.clone();
        let mut i = idx.len();
        while i > 0 {
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                next = Some(idx);
                break;
            }
            idx[i] = 0;
        }
        Some(cur)
    })
}

/// Number of teams over `domain` with weights drawn from `candidates` that
/// satisfy `f`.
pub fn count_satisfying_teams(
    a: &Structure,
    f: &TeamFormula,
    domain: &[String],
    spec: &SemiringSpec,
    candidates: &[Value],
    strat: SplitStrategy,
) -> Result<u128> {
    if !candidates.iter().any(Value::is_zero) {
        return Err(Error::Input("weight candidates must include zero".into()));
    }
    if let Some(c) = candidates.iter().find(|c| c.spec() != *spec) {
        return Err(Error::SpecMismatch {
            left: c.spec().to_string(),
            right: spec.to_string(),
        });
    }
    let compiled = compile(a, f, domain, spec, LiteralMode::Indicator)?;
    let base = KTeam::new(domain, a.universe().clone(), spec.clone())?;
    let rows: Vec<Vec<usize>> = base.all_rows().collect();
    let choices: Vec<Vec<Vec<Value>>> = rows
        .iter()
        .map(|_| candidates.iter().map(|c| vec![c.clone()]).collect())
        .collect();
    let mut count = 0u128;
    for idx in product_indices(&choices) {
        let mut team = base.clone();
        for (row, &i) in rows.iter().zip(&idx) {
            team.set(row.clone(), candidates[i].clone())?;
        }
        if compiled.range_nonzero(&team, strat)? {
            count += 1;
        }
    }
    Ok(count)
}

/// An SMT-LIB2 query over the fresh team variables, with the input team
/// inlined as constants; it is satisfiable iff the polynomial has a nonzero
/// value. Only the natural and nonnegative rational semirings are
/// supported.
pub fn export_existential(c: &Compiled, x: &KTeam) -> Result<String> {
    c.check_input(x)?;
    let (sort, linear, nonlinear) = match c.spec {
        SemiringSpec::Natural => ("Int", "QF_LIA", "QF_NIA"),
        SemiringSpec::Rational => ("Real", "QF_LRA", "QF_NRA"),
        _ => {
            return Err(Error::UnsupportedSpec(format!(
                "{} has no existential export; use nat or rat",
                c.spec
            )))
        }
    };
    let ex = Exporter { c, x };
    let body = ex.node(&c.root)?;
    let mut vars: Vec<TeamVar> = Vec::new();
    for (i, fam) in c.families.iter().enumerate().skip(1) {
        for row in c.universe.tuples(fam.domain.len()) {
            vars.push(TeamVar { family: i, row });
        }
    }
    let mut out = String::new();
    let has_atoms = has_atom(&c.root);
    let _ = writeln!(out, "(set-logic {})", if has_atoms { nonlinear } else { linear });
    for v in &vars {
        let _ = writeln!(out, "(declare-const {} {sort})", ex.var_name(v));
    }
    for v in &vars {
        let _ = writeln!(out, "(assert (>= {} 0))", ex.var_name(v));
    }
    let _ = writeln!(out, "(assert {body})");
    out.push_str("(check-sat)\n");
    Ok(out)
}

fn has_atom(n: &Node) -> bool {
    match n {
        Node::Atom { .. } => true,
        Node::Literal { .. } => false,
        Node::And(l, r)
        | Node::Or {
            left: l, right: r, ..
        } => has_atom(l) || has_atom(r),
        Node::Exists { inner, .. } | Node::Forall { inner, .. } => has_atom(inner),
    }
}

struct Exporter<'a> {
    c: &'a Compiled,
    x: &'a KTeam,
}

impl Exporter<'_> {
    fn var_name(&self, v: &TeamVar) -> String {
        let mut s = format!("y{}", v.family);
        for &e in &v.row {
            s.push('_');
            s.push_str(self.c.universe.name(e));
        }
        s
    }

    fn constant(v: &Value) -> String {
        match v.to_rational() {
            Some(r) if !r.is_integer() => format!("(/ {} {})", r.numer(), r.denom()),
            Some(r) => r.numer().to_string(),
            None => v.to_string(),
        }
    }

    fn term(&self, p: &CPoly) -> String {
        match p {
            CPoly::Const(c) => Self::constant(c),
            CPoly::Var(v) if v.family == 0 => Self::constant(&self.x.weight(&v.row)),
            CPoly::Var(v) => self.var_name(v),
            CPoly::Add(ps) | CPoly::Mul(ps) => {
                let op = if matches!(p, CPoly::Add(_)) { "+" } else { "*" };
                let args: Vec<String> = ps.iter().map(|q| self.term(q)).collect();
                format!("({op} {})", args.join(" "))
            }
            CPoly::Chi(l, op, r) => format!("(ite {} 1 0)", self.relation(l, *op, r)),
        }
    }

    fn relation(&self, l: &CPoly, op: CmpOp, r: &CPoly) -> String {
        let (l, r) = (self.term(l), self.term(r));
        match op {
            CmpOp::Eq => format!("(= {l} {r})"),
            CmpOp::Neq => format!("(distinct {l} {r})"),
            CmpOp::Le => format!("(<= {l} {r})"),
            CmpOp::Nle => format!("(not (<= {l} {r}))"),
        }
    }

    /// Constraint products are conjunctions of their `χ` conditions.
    fn constraint(&self, p: &CPoly) -> Vec<String> {
        match p {
            CPoly::Mul(ps) => ps.iter().flat_map(|q| self.constraint(q)).collect(),
            CPoly::Chi(l, op, r) => vec![self.relation(l, *op, r)],
            CPoly::Const(c) if c.is_one() => vec![],
            other => vec![format!("(distinct {} 0)", self.term(other))],
        }
    }

    fn node(&self, n: &Node) -> Result<String> {
        let parts: Vec<String> = match n {
            Node::Literal { family, failing, .. } => failing
                .iter()
                .map(|row| {
                    let v = TeamVar {
                        family: *family,
                        row: row.clone(),
                    };
                    format!("(= {} 0)", self.term(&CPoly::Var(v)))
                })
                .collect(),
            Node::Atom { poly } => vec![format!("(distinct {} 0)", self.term(poly))],
            Node::And(l, r) => vec![self.node(l)?, self.node(r)?],
            Node::Or {
                constraint,
                left,
                right,
                ..
            } => {
                let mut v = self.constraint(constraint);
                v.push(self.node(left)?);
                v.push(self.node(right)?);
                v
            }
            Node::Exists {
                constraint, inner, ..
            }
            | Node::Forall {
                constraint, inner, ..
            } => {
                let mut v = self.constraint(constraint);
                v.push(self.node(inner)?);
                v
            }
        };
        Ok(match parts.len() {
            0 => "true".to_string(),
            1 => parts.into_iter().next().unwrap(),
            _ => format!("(and {})", parts.join(" ")),
        })
    }
}
