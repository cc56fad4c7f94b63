//! Syntax of first-order logic with formula (in)equalities, and of team
//! logic with dependency atoms.

mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parser::{parse_atom, parse_atoms, parse_fo, parse_team};

/// Relation symbols with their arities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    relations: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, arity: usize) -> Self {
        self.insert(name, arity).expect("duplicate relation symbol");
        self
    }

    pub fn insert(&mut self, name: &str, arity: usize) -> Result<()> {
        if self.relations.contains_key(name) {
            return Err(Error::Input(format!("duplicate relation symbol {name}")));
        }
        self.relations.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.relations.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub(crate) fn check(&self, name: &str, found: usize) -> Result<()> {
        match self.arity(name) {
            None => Err(Error::UnknownSymbol(name.to_string())),
            Some(expected) if expected != found => Err(Error::Arity {
                name: name.to_string(),
                expected,
                found,
            }),
            Some(_) => Ok(()),
        }
    }
}

/// Comparison operators between formulae.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Neq,
    Le,
    Nle,
}

impl CmpOp {
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Neq,
            CmpOp::Neq => CmpOp::Eq,
            CmpOp::Le => CmpOp::Nle,
            CmpOp::Nle => CmpOp::Le,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Neq => "!=",
            CmpOp::Le => "<=",
            CmpOp::Nle => "!<=",
        }
    }
}

/// The comparison forms that may be admitted in `FO(C)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpKind {
    /// `φ = ⊥`
    IsBot,
    /// `φ != ⊥`
    NonBot,
    Eq,
    Neq,
    Le,
    Nle,
}

/// A first-order literal: a possibly negated relational or equality atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Literal {
    Rel {
        name: String,
        args: Vec<String>,
        negated: bool,
    },
    Eq {
        left: String,
        right: String,
        negated: bool,
    },
}

impl Literal {
    pub fn rel(name: &str, args: &[&str]) -> Self {
        Literal::Rel {
            name: name.to_string(),
            args: args.iter().map(|s| s.to_string()).collect(),
            negated: false,
        }
    }

    pub fn negated(self) -> Self {
        match self {
            Literal::Rel { name, args, negated } => Literal::Rel {
                name,
                args,
                negated: !negated,
            },
            Literal::Eq { left, right, negated } => Literal::Eq {
                left,
                right,
                negated: !negated,
            },
        }
    }

    pub fn vars(&self) -> Vec<&str> {
        match self {
            Literal::Rel { args, .. } => args.iter().map(String::as_str).collect(),
            Literal::Eq { left, right, .. } => vec![left, right],
        }
    }

    pub fn into_formula(self) -> Formula {
        match self {
            Literal::Rel { name, args, negated } => Formula::Rel { name, args, negated },
            Literal::Eq { left, right, negated } => Formula::Eq { left, right, negated },
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Rel { name, args, negated } => write!(
                f,
                "{}{}({})",
                if *negated { "!" } else { "" },
                name,
                args.join(",")
            ),
            Literal::Eq { left, right, negated } => {
                write!(f, "{} {} {}", left, if *negated { "!=" } else { "=" }, right)
            }
        }
    }
}

/// First-order formulae extended with `⊥`, `⊤` and formula comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Rel {
        name: String,
        args: Vec<String>,
        negated: bool,
    },
    Eq {
        left: String,
        right: String,
        negated: bool,
    },
    Bot,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    Cmp(Box<Formula>, CmpOp, Box<Formula>),
}

impl Formula {
    pub fn rel<S: AsRef<str>>(name: &str, args: &[S]) -> Formula {
        Formula::Rel {
            name: name.to_string(),
            args: args.iter().map(|s| s.as_ref().to_string()).collect(),
            negated: false,
        }
    }

    pub fn neg_rel<S: AsRef<str>>(name: &str, args: &[S]) -> Formula {
        Formula::Rel {
            name: name.to_string(),
            args: args.iter().map(|s| s.as_ref().to_string()).collect(),
            negated: true,
        }
    }

    pub fn eq(left: &str, right: &str) -> Formula {
        Formula::Eq {
            left: left.to_string(),
            right: right.to_string(),
            negated: false,
        }
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn exists(x: &str, body: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(body))
    }

    pub fn forall(x: &str, body: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(body))
    }

    /// `∃x_1 ... ∃x_n body`, innermost last.
    pub fn exists_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    pub fn forall_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v.as_ref(), acc))
    }

    /// Left-nested conjunction; `⊤` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    pub fn cmp(a: Formula, op: CmpOp, b: Formula) -> Formula {
        Formula::Cmp(Box::new(a), op, Box::new(b))
    }

    /// `φ = ⊥`
    pub fn is_bot(a: Formula) -> Formula {
        Formula::cmp(a, CmpOp::Eq, Formula::Bot)
    }

    /// `φ != ⊥`
    pub fn non_bot(a: Formula) -> Formula {
        Formula::cmp(a, CmpOp::Neq, Formula::Bot)
    }

    /// `¬φ ∨ ψ`
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut add = |v: &'a str, bound: &Vec<&'a str>| {
            if !bound.contains(&v) {
                out.insert(v.to_string());
            }
        };
        match self {
            Formula::Rel { args, .. } => args.iter().for_each(|a| add(a, bound)),
            Formula::Eq { left, right, .. } => {
                add(left, bound);
                add(right, bound);
            }
            Formula::Bot | Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Cmp(a, _, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Negation normal form; negated comparisons flip their operator.
    pub fn nnf(&self) -> Formula {
        match self {
            Formula::Not(a) => a.negation_nnf(),
            Formula::And(a, b) => Formula::and(a.nnf(), b.nnf()),
            Formula::Or(a, b) => Formula::or(a.nnf(), b.nnf()),
            Formula::Exists(x, a) => Formula::exists(x, a.nnf()),
            Formula::Forall(x, a) => Formula::forall(x, a.nnf()),
            Formula::Cmp(a, op, b) => Formula::cmp(a.nnf(), *op, b.nnf()),
            lit => lit.clone(),
        }
    }

    /// `nnf(¬self)`
    pub fn negation_nnf(&self) -> Formula {
        match self {
            Formula::Rel { name, args, negated } => Formula::Rel {
                name: name.clone(),
                args: args.clone(),
                negated: !negated,
            },
            Formula::Eq { left, right, negated } => Formula::Eq {
                left: left.clone(),
                right: right.clone(),
                negated: !negated,
            },
            Formula::Bot => Formula::Top,
            Formula::Top => Formula::Bot,
            Formula::And(a, b) => Formula::or(a.negation_nnf(), b.negation_nnf()),
            Formula::Or(a, b) => Formula::and(a.negation_nnf(), b.negation_nnf()),
            Formula::Not(a) => a.nnf(),
            Formula::Exists(x, a) => Formula::forall(x, a.negation_nnf()),
            Formula::Forall(x, a) => Formula::exists(x, a.negation_nnf()),
            Formula::Cmp(a, op, b) => Formula::cmp(a.nnf(), op.negate(), b.nnf()),
        }
    }

    pub fn contains_cmp(&self) -> bool {
        match self {
            Formula::Cmp(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.contains_cmp() || b.contains_cmp(),
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.contains_cmp(),
            _ => false,
        }
    }

    /// Whether the formula belongs to `FO(allowed)`: every comparison uses an
    /// admitted form, sits under an even number of negations, and has
    /// comparison-free operands.
    pub fn check_foc(&self, allowed: &[CmpKind]) -> bool {
        self.foc(allowed, false)
    }

    fn foc(&self, allowed: &[CmpKind], under_odd: bool) -> bool {
        match self {
            Formula::Cmp(a, op, b) => {
                if under_odd || a.contains_cmp() || b.contains_cmp() {
                    return false;
                }
                let general = match op {
                    CmpOp::Eq => CmpKind::Eq,
                    CmpOp::Neq => CmpKind::Neq,
                    CmpOp::Le => CmpKind::Le,
                    CmpOp::Nle => CmpKind::Nle,
                };
                let against_bot = **a == Formula::Bot || **b == Formula::Bot;
                let bot_form = match op {
                    CmpOp::Eq if against_bot => Some(CmpKind::IsBot),
                    CmpOp::Neq if against_bot => Some(CmpKind::NonBot),
                    _ => None,
                };
                allowed.contains(&general) || bot_form.is_some_and(|k| allowed.contains(&k))
            }
            Formula::And(a, b) | Formula::Or(a, b) => a.foc(allowed, under_odd) && b.foc(allowed, under_odd),
            Formula::Not(a) => a.foc(allowed, !under_odd),
            Formula::Exists(_, a) | Formula::Forall(_, a) => a.foc(allowed, under_odd),
            _ => true,
        }
    }

    /// Nesting depth of connectives and quantifiers.
    pub fn depth(&self) -> usize {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Cmp(a, _, b) => 1 + a.depth().max(b.depth()),
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + a.depth(),
            _ => 0,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Rel { name, args, negated } => write!(
                f,
                "{}{}({})",
                if *negated { "!" } else { "" },
                name,
                args.join(",")
            ),
            Formula::Eq { left, right, negated } => {
                write!(f, "{} {} {}", left, if *negated { "!=" } else { "=" }, right)
            }
            Formula::Bot => write!(f, "bot"),
            Formula::Top => write!(f, "top"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Not(a) => write!(f, "!({a})"),
            Formula::Exists(x, a) => write!(f, "(exists {x}. {a})"),
            Formula::Forall(x, a) => write!(f, "(forall {x}. {a})"),
            Formula::Cmp(a, op, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

/// A dependency atom over team variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DependencyAtom {
    /// `dep(x̄; ȳ)`: the values of `x̄` determine those of `ȳ`.
    Dep { from: Vec<String>, to: Vec<String> },
    /// `indep(x̄; ȳ; z̄)`: `ȳ` and `z̄` are independent given `x̄`.
    Indep {
        given: Vec<String>,
        left: Vec<String>,
        right: Vec<String>,
    },
    /// `inc(x̄; ȳ)`: `x̄` is included in `ȳ`.
    Inc { sub: Vec<String>, sup: Vec<String> },
    /// A first-order literal read as an atom.
    Lit(Literal),
}

fn owned(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl DependencyAtom {
    pub fn dep(from: &[&str], to: &[&str]) -> Self {
        DependencyAtom::Dep {
            from: owned(from),
            to: owned(to),
        }
    }

    pub fn indep(given: &[&str], left: &[&str], right: &[&str]) -> Self {
        DependencyAtom::Indep {
            given: owned(given),
            left: owned(left),
            right: owned(right),
        }
    }

    pub fn inc(sub: &[&str], sup: &[&str]) -> Result<Self> {
        if sub.len() != sup.len() {
            return Err(Error::LengthMismatch(format!(
                "inclusion atom needs equal tuple lengths, got {} and {}",
                sub.len(),
                sup.len()
            )));
        }
        Ok(DependencyAtom::Inc {
            sub: owned(sub),
            sup: owned(sup),
        })
    }

    pub fn vars(&self) -> BTreeSet<String> {
        match self {
            DependencyAtom::Dep { from, to } => from.iter().chain(to).cloned().collect(),
            DependencyAtom::Indep { given, left, right } => {
                given.iter().chain(left).chain(right).cloned().collect()
            }
            DependencyAtom::Inc { sub, sup } => sub.iter().chain(sup).cloned().collect(),
            DependencyAtom::Lit(l) => l.vars().into_iter().map(String::from).collect(),
        }
    }
}

impl fmt::Display for DependencyAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DependencyAtom::Dep { from, to } => write!(f, "dep({};{})", from.join(","), to.join(",")),
            DependencyAtom::Indep { given, left, right } => write!(
                f,
                "indep({};{};{})",
                given.join(","),
                left.join(","),
                right.join(",")
            ),
            DependencyAtom::Inc { sub, sup } => write!(f, "inc({};{})", sub.join(","), sup.join(",")),
            DependencyAtom::Lit(l) => write!(f, "{l}"),
        }
    }
}

/// Team-logic formulae in negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TeamFormula {
    Lit(Literal),
    Atom(DependencyAtom),
    And(Box<TeamFormula>, Box<TeamFormula>),
    Or(Box<TeamFormula>, Box<TeamFormula>),
    Exists(String, Box<TeamFormula>),
    Forall(String, Box<TeamFormula>),
}

impl TeamFormula {
    pub fn lit(l: Literal) -> Self {
        TeamFormula::Lit(l)
    }

    pub fn atom(a: DependencyAtom) -> Self {
        TeamFormula::Atom(a)
    }

    pub fn and(a: TeamFormula, b: TeamFormula) -> Self {
        TeamFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: TeamFormula, b: TeamFormula) -> Self {
        TeamFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, a: TeamFormula) -> Self {
        TeamFormula::Exists(x.to_string(), Box::new(a))
    }

    pub fn forall(x: &str, a: TeamFormula) -> Self {
        TeamFormula::Forall(x.to_string(), Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            TeamFormula::Lit(l) => l.vars().into_iter().map(String::from).collect(),
            TeamFormula::Atom(a) => a.vars(),
            TeamFormula::And(a, b) | TeamFormula::Or(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            TeamFormula::Exists(x, a) | TeamFormula::Forall(x, a) => {
                let mut s = a.free_vars();
                s.remove(x);
                s
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TeamFormula::Lit(_) | TeamFormula::Atom(_) => 0,
            TeamFormula::And(a, b) | TeamFormula::Or(a, b) => 1 + a.depth().max(b.depth()),
            TeamFormula::Exists(_, a) | TeamFormula::Forall(_, a) => 1 + a.depth(),
        }
    }

    /// Renames bound variables so that no quantifier rebinds a variable of
    /// `outer` or of an enclosing quantifier. Names are chosen as `x1`, `x2`,
    /// ... style suffixes of the original name.
    pub fn rename_apart(&self, outer: &BTreeSet<String>) -> TeamFormula {
        let mut taken: BTreeSet<String> = outer.clone();
        taken.extend(self.all_var_names());
        self.rename_inner(&BTreeMap::new(), outer.clone(), &mut taken)
    }

    fn all_var_names(&self) -> BTreeSet<String> {
        match self {
            TeamFormula::Lit(_) | TeamFormula::Atom(_) => self.free_vars(),
            TeamFormula::And(a, b) | TeamFormula::Or(a, b) => {
                let mut s = a.all_var_names();
                s.extend(b.all_var_names());
                s
            }
            TeamFormula::Exists(x, a) | TeamFormula::Forall(x, a) => {
                let mut s = a.all_var_names();
                s.insert(x.clone());
                s
            }
        }
    }

    fn rename_inner(
        &self,
        sub: &BTreeMap<String, String>,
        bound: BTreeSet<String>,
        taken: &mut BTreeSet<String>,
    ) -> TeamFormula {
        let r = |v: &String| sub.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            TeamFormula::Lit(l) => TeamFormula::Lit(rename_literal(l, &r)),
            TeamFormula::Atom(a) => TeamFormula::Atom(match a {
                DependencyAtom::Dep { from, to } => DependencyAtom::Dep {
                    from: from.iter().map(r).collect(),
                    to: to.iter().map(r).collect(),
                },
                DependencyAtom::Indep { given, left, right } => DependencyAtom::Indep {
                    given: given.iter().map(r).collect(),
                    left: left.iter().map(r).collect(),
                    right: right.iter().map(r).collect(),
                },
                DependencyAtom::Inc { sub: s, sup } => DependencyAtom::Inc {
                    sub: s.iter().map(r).collect(),
                    sup: sup.iter().map(r).collect(),
                },
                DependencyAtom::Lit(l) => DependencyAtom::Lit(rename_literal(l, &r)),
            }),
            TeamFormula::And(a, b) => TeamFormula::and(
                a.rename_inner(sub, bound.clone(), taken),
                b.rename_inner(sub, bound, taken),
            ),
            TeamFormula::Or(a, b) => TeamFormula::or(
                a.rename_inner(sub, bound.clone(), taken),
                b.rename_inner(sub, bound, taken),
            ),
            TeamFormula::Exists(x, a) | TeamFormula::Forall(x, a) => {
                let fresh = if bound.contains(x) {
                    let name = fresh_name(x, taken);
                    taken.insert(name.clone());
                    name
                } else {
                    x.clone()
                };
                let mut sub = sub.clone();
                sub.insert(x.clone(), fresh.clone());
                let mut bound = bound;
                bound.insert(fresh.clone());
                let body = a.rename_inner(&sub, bound, taken);
                match self {
                    TeamFormula::Exists(..) => TeamFormula::Exists(fresh, Box::new(body)),
                    _ => TeamFormula::Forall(fresh, Box::new(body)),
                }
            }
        }
    }
}

fn rename_literal(l: &Literal, r: &impl Fn(&String) -> String) -> Literal {
    match l {
        Literal::Rel { name, args, negated } => Literal::Rel {
            name: name.clone(),
            args: args.iter().map(r).collect(),
            negated: *negated,
        },
        Literal::Eq { left, right, negated } => Literal::Eq {
            left: r(left),
            right: r(right),
            negated: *negated,
        },
    }
}

/// `base1`, `base2`, ... avoiding `taken`.
pub(crate) fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.contains(n))
        .expect("infinite supply")
}

impl fmt::Display for TeamFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TeamFormula::Lit(l) => write!(f, "{l}"),
            TeamFormula::Atom(a) => write!(f, "{a}"),
            TeamFormula::And(a, b) => write!(f, "({a} & {b})"),
            TeamFormula::Or(a, b) => write!(f, "({a} | {b})"),
            TeamFormula::Exists(x, a) => write!(f, "(exists {x}. {a})"),
            TeamFormula::Forall(x, a) => write!(f, "(forall {x}. {a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::new()
            .with("R", 2)
            .with("S", 2)
            .with("P", 1)
            .with("Q", 1)
    }

    #[test]
    fn nnf_flips_comparisons() {
        let v = Vocabulary::new().with("R", 1).with("S", 1);
        let f = parse_fo("!(R(x) = S(x))", &v).unwrap();
        assert_eq!(f.nnf(), parse_fo("R(x) != S(x)", &v).unwrap());
        let g = parse_fo("!(R(x) <= !S(x))", &v).unwrap();
        assert_eq!(
            g.nnf(),
            Formula::cmp(
                Formula::rel("R", &["x"]),
                CmpOp::Nle,
                Formula::neg_rel("S", &["x"])
            )
        );
    }

    #[test]
    fn double_negation_vanishes() {
        let v = Vocabulary::new().with("R", 1);
        let f = Formula::not(Formula::not(Formula::rel("R", &["x"])));
        assert_eq!(f.nnf(), parse_fo("R(x)", &v).unwrap());
        assert_eq!(Formula::not(Formula::Bot).nnf(), Formula::Top);
    }

    #[test]
    fn free_variables_of_comparisons() {
        let f = parse_fo("R(x,y) = S(y,z)", &vocab()).unwrap();
        assert_eq!(
            f.free_vars(),
            ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
        );
        let g = parse_fo("forall x. exists y. R(x,y)", &vocab()).unwrap();
        assert!(g.free_vars().is_empty());
        assert!(Formula::Bot.free_vars().is_empty());
    }

    #[test]
    fn foc_membership() {
        let v = Vocabulary::new().with("R", 2);
        let indep = parse_fo(
            "forall u,v. (exists y. R(u,y)) & (exists x. R(x,v)) = (exists x,y. R(x,y)) & R(u,v)",
            &v,
        )
        .unwrap();
        assert!(indep.check_foc(&[CmpKind::Eq]));
        assert!(!indep.check_foc(&[CmpKind::Le]));
        let nested = Formula::cmp(
            Formula::cmp(Formula::rel("R", &["x", "y"]), CmpOp::Eq, Formula::Bot),
            CmpOp::Eq,
            Formula::Bot,
        );
        assert!(!nested.check_foc(&[CmpKind::Eq, CmpKind::IsBot]));
        let negative = parse_fo("!(R(x,y) = R(y,x))", &v).unwrap();
        assert!(!negative.check_foc(&[CmpKind::Eq, CmpKind::Neq]));
        let twice = Formula::not(Formula::not(Formula::is_bot(Formula::rel("R", &["x", "y"]))));
        assert!(twice.check_foc(&[CmpKind::IsBot]));
        assert!(!twice.check_foc(&[CmpKind::NonBot]));
    }

    #[test]
    fn nnf_is_idempotent_and_keeps_free_vars() {
        let v = vocab();
        let f = parse_fo("!(exists y. (R(x,y) & !(P(y) | y = z)) <= Q(x))", &v).unwrap();
        let n = f.nnf();
        assert_eq!(n.nnf(), n);
        assert_eq!(n.free_vars(), f.free_vars());
    }

    #[test]
    fn rename_apart_avoids_team_domain() {
        let f = parse_team("exists x. forall x. P(x)", &vocab()).unwrap();
        let outer: BTreeSet<String> = ["x".to_string()].into();
        let g = f.rename_apart(&outer);
        assert_eq!(g.to_string(), "(exists x1. (forall x2. P(x2)))");
        assert_eq!(g.free_vars(), BTreeSet::new());
    }
}
