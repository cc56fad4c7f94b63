//! Provenance tracking: each assignment of a team carries its own
//! indeterminate, and formulae evaluate to polynomials in those tokens.

use std::collections::BTreeMap;

use crate::algebraic::{compile, Compiled, LiteralMode};
use crate::error::{Error, Result};
use crate::formula::{Literal, TeamFormula};
use crate::interpretation::Structure;
use crate::kteam::KTeam;
use crate::semiring::{Homomorphism, SemiringSpec, Value};
use crate::team_semantics::{literal_holds, SplitStrategy};

/// A team over `N[p1, ..., pn]` whose support weights are the tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedTeam {
    pub team: KTeam,
    pub tokens: BTreeMap<Vec<usize>, String>,
    /// The weights the tokens stand for.
    pub original: KTeam,
}

/// Tokens `p1, p2, ...` in row order of the support.
pub fn annotate(x: &KTeam) -> Result<AnnotatedTeam> {
    let names: Vec<String> = (1..=x.support_size()).map(|i| format!("p{i}")).collect();
    let spec = SemiringSpec::prov_poly(names.clone())?;
    let mut team = KTeam::new(x.domain(), x.universe().clone(), spec.clone())?;
    let mut tokens = BTreeMap::new();
    for ((row, _), name) in x.iter().zip(&names) {
        team.set(row.clone(), spec.parse_value(name)?)?;
        tokens.insert(row.clone(), name.clone());
    }
    Ok(AnnotatedTeam {
        team,
        tokens,
        original: x.clone(),
    })
}

impl AnnotatedTeam {
    pub fn spec(&self) -> &SemiringSpec {
        self.team.spec()
    }

    /// Token ↦ original weight.
    pub fn original_binding(&self) -> BTreeMap<String, Value> {
        self.tokens
            .iter()
            .map(|(row, t)| (t.clone(), self.original.weight(row)))
            .collect()
    }
}

/// `Π_s (χ[𝕏(s)=0] + 𝕏(s)·T(s))` over the annotated team.
pub fn eval_prov_literal(lit: &Literal, a: &Structure, ax: &AnnotatedTeam) -> Result<Value> {
    if let Literal::Rel { name, args, .. } = lit {
        a.vocabulary().check(name, args.len())?;
    }
    let spec = ax.spec();
    let mut acc = spec.one();
    for row in ax.team.all_rows() {
        let w = ax.team.weight(&row);
        let factor = if w.is_zero() {
            spec.one()
        } else {
            w.mul(&spec.indicator(literal_holds(a, ax.team.domain(), &row, lit)?))?
        };
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// Compilation with provenance literals, over the annotated team's semiring.
pub fn compile_prov(a: &Structure, f: &TeamFormula, ax: &AnnotatedTeam) -> Result<Compiled> {
    compile(a, f, ax.team.domain(), ax.spec(), LiteralMode::Provenance)
}

/// Provenance polynomials over the witness valuations, with multiplicities,
/// sorted by their printed form.
pub fn provenance_polynomials(
    a: &Structure,
    f: &TeamFormula,
    ax: &AnnotatedTeam,
    strat: SplitStrategy,
) -> Result<Vec<(Value, u128)>> {
    let c = compile_prov(a, f, ax)?;
    let mut out: Vec<(Value, u128)> = c.witness_values(&ax.team, strat)?.into_iter().collect();
    out.sort_by_key(|(v, _)| (v.is_zero(), v.to_string()));
    Ok(out)
}

/// Image of a provenance polynomial under `token ↦ sub[token]`.
pub fn specialize(p: &Value, sub: &BTreeMap<String, Value>, target: &SemiringSpec) -> Result<Value> {
    if p.as_poly().is_none() {
        return Err(Error::UnsupportedSpec(format!(
            "{} is not a provenance semiring",
            p.spec()
        )));
    }
    Homomorphism::poly_evaluation(p.spec(), target.clone(), sub.clone())?.apply(p)
}

/// Parses bindings such as `p1=2,p2=5`.
pub fn parse_binding(text: &str, target: &SemiringSpec) -> Result<BTreeMap<String, Value>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("binding {item:?} is not of the form token=value")))?;
            Ok((k.trim().to_string(), target.parse_value(v)?))
        })
        .collect()
}
