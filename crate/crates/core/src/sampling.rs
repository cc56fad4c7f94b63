//! Seeded random generation of semiring values, interpretations,
//! structures, formulae and teams.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{CmpOp, DependencyAtom, Formula, Literal, TeamFormula, Vocabulary};
use crate::interpretation::{KInterpretation, Structure, Universe};
use crate::kteam::KTeam;
use crate::semiring::{Polynomial, SemiringSpec, Tropical, Value};

pub struct Sampler {
    rng: ChaCha8Rng,
    fresh: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            fresh: 0,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    fn small_rational(&mut self, max_num: i64, max_den: i64) -> BigRational {
        let q = self.rng.gen_range(1..=max_den);
        let p = self.rng.gen_range(0..=max_num);
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    /// A value of `spec`, zero with probability about one in four.
    pub fn value(&mut self, spec: &SemiringSpec) -> Value {
        if self.chance(0.25) {
            return spec.zero();
        }
        self.nonzero_value(spec)
    }

    pub fn nonzero_value(&mut self, spec: &SemiringSpec) -> Value {
        match spec {
            SemiringSpec::Boolean => Value::Bool(true),
            SemiringSpec::Natural => Value::natural(self.rng.gen_range(1u32..=4)),
            SemiringSpec::Rational => loop {
                let r = self.small_rational(8, 4);
                if r != BigRational::from_integer(0.into()) {
                    return Value::Rat(r);
                }
            },
            SemiringSpec::Tropical => Value::Trop(Tropical::Finite(self.small_rational(8, 4))),
            SemiringSpec::Lukasiewicz => {
                let q = self.rng.gen_range(1..=4i64);
                let p = self.rng.gen_range(1..=q);
                Value::Luk(BigRational::new(p.into(), q.into()))
            }
            SemiringSpec::IntMod(n) => Value::residue(*n, self.rng.gen_range(1..*n)),
            SemiringSpec::ProvPoly(vars) => {
                let terms: Vec<(Vec<u32>, BigUint)> = (0..self.rng.gen_range(1..=2))
                    .map(|_| {
                        let mono: Vec<u32> = vars.iter().map(|_| self.rng.gen_range(0..=2)).collect();
                        (mono, BigUint::from(self.rng.gen_range(1u32..=3)))
                    })
                    .collect();
                Value::Poly(Polynomial::from_terms(vars.clone(), terms))
            }
        }
    }

    pub fn universe(&mut self, max: usize) -> Arc<Universe> {
        Arc::new(Universe::of_size(self.rng.gen_range(1..=max)))
    }

    pub fn structure(&mut self, universe: Arc<Universe>, vocab: &Vocabulary) -> Structure {
        let mut s = Structure::new(universe.clone(), vocab.clone());
        for (name, arity) in vocab.iter() {
            for t in universe.tuples(arity) {
                if self.chance(0.5) {
                    s.insert(name, t).unwrap();
                }
            }
        }
        s
    }

    /// Each fact or its negation, never both, gets a nonzero value.
    pub fn model_defining(
        &mut self,
        universe: Arc<Universe>,
        vocab: &Vocabulary,
        spec: &SemiringSpec,
    ) -> KInterpretation {
        KInterpretation::from_fn(universe, vocab.clone(), spec.clone(), |_, _, _| spec.zero())
            .map(|mut pi| {
                let facts: Vec<(String, Vec<usize>)> =
                    pi.facts().map(|(n, t, _, _)| (n.to_string(), t)).collect();
                for (name, t) in facts {
                    let positive = self.chance(0.5);
                    let v = self.nonzero_value(spec);
                    pi.set(&name, &t, !positive, v).unwrap();
                }
                pi
            })
            .unwrap()
    }

    /// Arbitrary values on both facts and negated facts.
    pub fn interpretation(
        &mut self,
        universe: Arc<Universe>,
        vocab: &Vocabulary,
        spec: &SemiringSpec,
    ) -> KInterpretation {
        let mut pi =
            KInterpretation::from_fn(universe, vocab.clone(), spec.clone(), |_, _, _| spec.zero()).unwrap();
        let facts: Vec<(String, Vec<usize>)> = pi.facts().map(|(n, t, _, _)| (n.to_string(), t)).collect();
        for (name, t) in facts {
            for negated in [false, true] {
                let v = self.value(spec);
                pi.set(&name, &t, negated, v).unwrap();
            }
        }
        pi
    }

    fn fresh_var(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    /// A sentence of depth at most `depth`; comparisons, when allowed, only
    /// join comparison-free subformulae.
    pub fn sentence(&mut self, vocab: &Vocabulary, depth: usize, comparisons: bool) -> Formula {
        self.formula(vocab, depth, &mut Vec::new(), comparisons)
    }

    pub fn formula(
        &mut self,
        vocab: &Vocabulary,
        depth: usize,
        scope: &mut Vec<String>,
        comparisons: bool,
    ) -> Formula {
        if depth == 0 || self.chance(0.2) {
            return self.fo_literal(vocab, scope);
        }
        let choices = if comparisons { 7 } else { 6 };
        match self.below(choices) {
            0 => Formula::and(
                self.formula(vocab, depth - 1, scope, comparisons),
                self.formula(vocab, depth - 1, scope, comparisons),
            ),
            1 => Formula::or(
                self.formula(vocab, depth - 1, scope, comparisons),
                self.formula(vocab, depth - 1, scope, comparisons),
            ),
            2 => Formula::not(self.formula(vocab, depth - 1, scope, comparisons)),
            3 | 4 => {
                let x = self.fresh_var();
                scope.push(x.clone());
                let body = self.formula(vocab, depth - 1, scope, comparisons);
                scope.pop();
                if self.chance(0.5) {
                    Formula::exists(&x, body)
                } else {
                    Formula::forall(&x, body)
                }
            }
            5 => self.fo_literal(vocab, scope),
            _ => {
                let op = [CmpOp::Eq, CmpOp::Neq, CmpOp::Le, CmpOp::Nle][self.below(4)];
                Formula::cmp(
                    self.formula(vocab, depth - 1, scope, false),
                    op,
                    self.formula(vocab, depth - 1, scope, false),
                )
            }
        }
    }

    fn fo_literal(&mut self, vocab: &Vocabulary, scope: &[String]) -> Formula {
        let rels: Vec<(&str, usize)> = vocab
            .iter()
            .filter(|&(_, a)| a == 0 || !scope.is_empty())
            .collect();
        if rels.is_empty() || (!scope.is_empty() && self.chance(0.15)) {
            if scope.is_empty() {
                return if self.chance(0.5) {
                    Formula::Top
                } else {
                    Formula::Bot
                };
            }
            let l = scope.choose(&mut self.rng).unwrap().clone();
            let r = scope.choose(&mut self.rng).unwrap().clone();
            let negated = self.chance(0.5);
            return Formula::Eq {
                left: l,
                right: r,
                negated,
            };
        }
        let (name, arity) = *rels.choose(&mut self.rng).unwrap();
        let args: Vec<String> = (0..arity)
            .map(|_| scope.choose(&mut self.rng).unwrap().clone())
            .collect();
        Formula::Rel {
            name: name.to_string(),
            args,
            negated: self.chance(0.3),
        }
    }

    /// A team over `domain` with at most `max_rows` support rows.
    pub fn team(
        &mut self,
        domain: &[&str],
        universe: Arc<Universe>,
        spec: &SemiringSpec,
        max_rows: usize,
    ) -> KTeam {
        let mut t = KTeam::new(domain, universe, spec.clone()).unwrap();
        let mut rows: Vec<Vec<usize>> = t.all_rows().collect();
        rows.shuffle(&mut self.rng);
        let n = self.rng.gen_range(0..=max_rows.min(rows.len()));
        for row in rows.into_iter().take(n) {
            let v = self.nonzero_value(spec);
            t.set(row, v).unwrap();
        }
        t
    }

    /// As [`Sampler::team`] with natural weights in `1..=max_weight`.
    pub fn natural_team(
        &mut self,
        domain: &[&str],
        universe: Arc<Universe>,
        max_rows: usize,
        max_weight: u32,
    ) -> KTeam {
        let mut t = self.team(domain, universe, &SemiringSpec::Natural, max_rows);
        let rows: Vec<Vec<usize>> = t.support().into_iter().collect();
        for row in rows {
            let w = Value::natural(self.rng.gen_range(1..=max_weight));
            t.set(row, w).unwrap();
        }
        t
    }

    /// A dependency atom over the given variables.
    pub fn atom(&mut self, vars: &[String], kinds: &[AtomKind]) -> DependencyAtom {
        let pick = |s: &mut Self, max: usize| -> Vec<String> {
            let n = s.rng.gen_range(0..=max.min(vars.len()));
            (0..n).map(|_| vars.choose(&mut s.rng).unwrap().clone()).collect()
        };
        match kinds.choose(&mut self.rng).copied().unwrap_or(AtomKind::Dep) {
            AtomKind::Dep => DependencyAtom::Dep {
                from: pick(self, 2),
                to: pick(self, 2),
            },
            AtomKind::Indep => DependencyAtom::Indep {
                given: pick(self, 1),
                left: pick(self, 2),
                right: pick(self, 2),
            },
            AtomKind::Inc => {
                let sub = pick(self, 2);
                let sup = (0..sub.len())
                    .map(|_| vars.choose(&mut self.rng).unwrap().clone())
                    .collect();
                DependencyAtom::Inc { sub, sup }
            }
        }
    }

    /// A team-logic formula whose free variables lie in `scope`.
    pub fn team_formula(
        &mut self,
        vocab: &Vocabulary,
        depth: usize,
        scope: &mut Vec<String>,
        kinds: &[AtomKind],
    ) -> TeamFormula {
        if depth == 0 || self.chance(0.25) {
            return self.team_leaf(vocab, scope, kinds);
        }
        match self.below(4) {
            0 => TeamFormula::and(
                self.team_formula(vocab, depth - 1, scope, kinds),
                self.team_formula(vocab, depth - 1, scope, kinds),
            ),
            1 => TeamFormula::or(
                self.team_formula(vocab, depth - 1, scope, kinds),
                self.team_formula(vocab, depth - 1, scope, kinds),
            ),
            _ => {
                let x = self.fresh_var();
                scope.push(x.clone());
                let body = self.team_formula(vocab, depth - 1, scope, kinds);
                scope.pop();
                if self.chance(0.5) {
                    TeamFormula::exists(&x, body)
                } else {
                    TeamFormula::forall(&x, body)
                }
            }
        }
    }

    fn team_leaf(&mut self, vocab: &Vocabulary, scope: &[String], kinds: &[AtomKind]) -> TeamFormula {
        if !kinds.is_empty() && !scope.is_empty() && self.chance(0.4) {
            return TeamFormula::atom(self.atom(scope, kinds));
        }
        match self.fo_literal(vocab, scope) {
            Formula::Rel { name, args, negated } => TeamFormula::lit(Literal::Rel { name, args, negated }),
            Formula::Eq { left, right, negated } => TeamFormula::lit(Literal::Eq { left, right, negated }),
            // Only reachable with an empty scope; an empty dependence atom
            // holds on every team.
            _ => TeamFormula::atom(DependencyAtom::Dep {
                from: vec![],
                to: vec![],
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Dep,
    Indep,
    Inc,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let vocab = Vocabulary::new().with("P", 1).with("E", 2);
        let a = Sampler::new(7).sentence(&vocab, 4, true);
        let b = Sampler::new(7).sentence(&vocab, 4, true);
        assert_eq!(a, b);
    }

    #[test]
    fn generated_objects_are_well_formed() {
        let vocab = Vocabulary::new().with("P", 1).with("E", 2);
        let mut s = Sampler::new(1);
        for _ in 0..200 {
            let f = s.sentence(&vocab, 4, true);
            assert!(f.is_sentence(), "{f}");
            assert!(f.depth() <= 5);
            let u = s.universe(3);
            assert!(s
                .model_defining(u.clone(), &vocab, &SemiringSpec::Natural)
                .is_model_defining());
            let t = s.team(&["x", "y"], u, &SemiringSpec::Rational, 4);
            assert!(t.support_size() <= 4);
            let mut scope = vec!["x".to_string(), "y".to_string()];
            let g = s.team_formula(
                &vocab,
                3,
                &mut scope,
                &[AtomKind::Dep, AtomKind::Indep, AtomKind::Inc],
            );
            assert!(g.free_vars().iter().all(|v| v == "x" || v == "y"), "{g}");
        }
    }
}
