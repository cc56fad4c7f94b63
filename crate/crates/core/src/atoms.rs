//! Dependency atoms over K-teams: their defining sentences, evaluation
//! through those sentences, and a direct evaluation via marginal sums.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::{fresh_name, CmpOp, DependencyAtom, Formula, Literal};
use crate::interpretation::Structure;
use crate::kteam::{fresh_relation_name, KTeam, TEAM_RELATION};
use crate::semiring::Value;

/// `∃x̄ (R(x̄) ∧ x̄[i₁] = ū₁ ∧ ... ∧ x̄[iₙ] = ūₙ)`.
///
/// Each part pairs 0-based positions of `rel` with the variables they must
/// equal. Bound variables are named `x1..xk`, renamed apart from the part
/// variables when needed.
pub fn theta(rel: &str, arity: usize, parts: &[(Vec<usize>, Vec<String>)]) -> Result<Formula> {
    let used: BTreeSet<String> = parts.iter().flat_map(|(_, vs)| vs.iter().cloned()).collect();
    let mut taken = used.clone();
    let bound: Vec<String> = (1..=arity)
        .map(|i| {
            let name = format!("x{i}");
            let name = if taken.contains(&name) {
                fresh_name(&format!("{name}_"), &taken)
            } else {
                name
            };
            taken.insert(name.clone());
            name
        })
        .collect();
    let mut conj = vec![Formula::rel(rel, &bound)];
    for (positions, vars) in parts {
        if positions.len() != vars.len() {
            return Err(Error::LengthMismatch(format!(
                "{} positions for {} variables",
                positions.len(),
                vars.len()
            )));
        }
        for (&p, v) in positions.iter().zip(vars) {
            let x = bound
                .get(p)
                .ok_or_else(|| Error::LengthMismatch(format!("position {p} outside arity {arity}")))?;
            conj.push(Formula::eq(x, v));
        }
    }
    Ok(Formula::exists_all(&bound, Formula::conjunction(conj)))
}

fn fresh_vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn tuple_eq(a: &[String], b: &[String]) -> Formula {
    Formula::conjunction(a.iter().zip(b).map(|(x, y)| Formula::eq(x, y)))
}

/// The defining sentence of `atom` over the team relation `rel`, whose
/// argument positions follow `domain` (sorted by the variable order).
///
/// Literal atoms refer to a structure relation; the other atoms mention
/// only `rel`.
pub fn atom_sentence(atom: &DependencyAtom, domain: &[String], rel: &str) -> Result<Formula> {
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
    let k = domain.len();
    let th = |parts: Vec<(Vec<usize>, Vec<String>)>| theta(rel, k, &parts);
    match atom {
        DependencyAtom::Dep { from, to } => {
            let (i, j) = (pos(from)?, pos(to)?);
            let u = fresh_vars("u", i.len());
            let v = fresh_vars("v", j.len());
            let w = fresh_vars("w", j.len());
            let both = Formula::and(
                th(vec![(i.clone(), u.clone()), (j.clone(), v.clone())])?,
                th(vec![(i, u.clone()), (j, w.clone())])?,
            );
            let body = Formula::or(Formula::is_bot(both), Formula::non_bot(tuple_eq(&v, &w)));
            Ok(Formula::forall_all(&[u, v, w].concat(), body))
        }
        DependencyAtom::Indep { given, left, right } => {
            let (i, j, kk) = (pos(given)?, pos(left)?, pos(right)?);
            let u = fresh_vars("u", i.len());
            let v = fresh_vars("v", j.len());
            let w = fresh_vars("w", kk.len());
            let lhs = Formula::and(
                th(vec![(i.clone(), u.clone()), (j.clone(), v.clone())])?,
                th(vec![(i.clone(), u.clone()), (kk.clone(), w.clone())])?,
            );
            let rhs = Formula::and(
                th(vec![(i.clone(), u.clone())])?,
                th(vec![(i, u.clone()), (j, v.clone()), (kk, w.clone())])?,
            );
            Ok(Formula::forall_all(
                &[u, v, w].concat(),
                Formula::cmp(lhs, CmpOp::Eq, rhs),
            ))
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
            let u = fresh_vars("u", i.len());
            let body = Formula::cmp(th(vec![(i, u.clone())])?, CmpOp::Le, th(vec![(j, u.clone())])?);
            Ok(Formula::forall_all(&u, body))
        }
        DependencyAtom::Lit(lit) => {
            let xs = fresh_vars("x", k);
            let at = |v: &String| -> Result<String> { Ok(xs[pos(std::slice::from_ref(v))?[0]].clone()) };
            let inner = match lit {
                Literal::Rel { name, args, negated } => Formula::Rel {
                    name: name.clone(),
                    args: args.iter().map(at).collect::<Result<_>>()?,
                    negated: *negated,
                },
                Literal::Eq { left, right, negated } => Formula::Eq {
                    left: at(left)?,
                    right: at(right)?,
                    negated: *negated,
                },
            };
            let r = Formula::rel(rel, &xs);
            let body = Formula::or(
                Formula::is_bot(r.clone()),
                Formula::and(Formula::non_bot(r), inner),
            );
            Ok(Formula::forall_all(&xs, body))
        }
    }
}

/// Inlines equality constraints on existentially bound variables:
/// `∃x̄ (R(x̄) ∧ x₁ = u ∧ ...)` becomes `∃x₂... R(u, x₂, ...)`. The result
/// denotes the same sum in every semiring.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Exists(..) => {
            let mut vars = Vec::new();
            let mut body = f;
            while let Formula::Exists(x, b) = body {
                vars.push(x.clone());
                body = b;
            }
            let body = simplify(body);
            if let Some(done) = inline_equalities(&vars, &body) {
                return done;
            }
            Formula::exists_all(&vars, body)
        }
        Formula::Forall(x, a) => Formula::forall(x, simplify(a)),
        Formula::And(a, b) => Formula::and(simplify(a), simplify(b)),
        Formula::Or(a, b) => Formula::or(simplify(a), simplify(b)),
        Formula::Not(a) => Formula::not(simplify(a)),
        Formula::Cmp(a, op, b) => Formula::cmp(simplify(a), *op, simplify(b)),
        lit => lit.clone(),
    }
}

fn flatten_literal_conjunction(f: &Formula, out: &mut Vec<Formula>) -> bool {
    match f {
        Formula::And(a, b) => flatten_literal_conjunction(a, out) && flatten_literal_conjunction(b, out),
        Formula::Rel { .. } | Formula::Eq { .. } => {
            out.push(f.clone());
            true
        }
        _ => false,
    }
}

fn rename_var(f: &Formula, from: &str, to: &str) -> Formula {
    let r = |v: &String| if v == from { to.to_string() } else { v.clone() };
    match f {
        Formula::Rel { name, args, negated } => Formula::Rel {
            name: name.clone(),
            args: args.iter().map(r).collect(),
            negated: *negated,
        },
        Formula::Eq { left, right, negated } => Formula::Eq {
            left: r(left),
            right: r(right),
            negated: *negated,
        },
        other => other.clone(),
    }
}

fn inline_equalities(vars: &[String], body: &Formula) -> Option<Formula> {
    let distinct: BTreeSet<&String> = vars.iter().collect();
    if distinct.len() != vars.len() {
        return None;
    }
    let mut conj = Vec::new();
    if !flatten_literal_conjunction(body, &mut conj) {
        return None;
    }
    let mut bound: Vec<String> = vars.to_vec();
    let mut changed = false;
    loop {
        let hit = conj.iter().enumerate().find_map(|(idx, c)| match c {
            Formula::Eq {
                left,
                right,
                negated: false,
            } => {
                if bound.contains(left) {
                    Some((idx, left.clone(), right.clone()))
                } else if bound.contains(right) {
                    Some((idx, right.clone(), left.clone()))
                } else {
                    None
                }
            }
            _ => None,
        });
        let Some((idx, x, t)) = hit else { break };
        conj.remove(idx);
        if x != t {
            conj = conj.iter().map(|c| rename_var(c, &x, &t)).collect();
            bound.retain(|b| *b != x);
        }
        changed = true;
    }
    if !changed {
        return None;
    }
    Some(Formula::exists_all(&bound, Formula::conjunction(conj)))
}

/// `⟦atom⟧` over the team encoding. Literal atoms need a structure; see
/// [`eval_atom_in_structure`].
pub fn eval_atom(team: &KTeam, atom: &DependencyAtom) -> Result<Value> {
    if let DependencyAtom::Lit(Literal::Rel { name, .. }) = atom {
        return Err(Error::UnknownSymbol(name.clone()));
    }
    let sentence = simplify(&atom_sentence(atom, team.domain(), TEAM_RELATION)?);
    team.to_interpretation().eval_sentence(&sentence)
}

/// As [`eval_atom`] but evaluating the defining sentence without
/// simplification.
pub fn eval_atom_unsimplified(team: &KTeam, atom: &DependencyAtom) -> Result<Value> {
    if let DependencyAtom::Lit(Literal::Rel { name, .. }) = atom {
        return Err(Error::UnknownSymbol(name.clone()));
    }
    let sentence = atom_sentence(atom, team.domain(), TEAM_RELATION)?;
    team.to_interpretation().eval_sentence(&sentence)
}

pub fn satisfies(team: &KTeam, atom: &DependencyAtom) -> Result<bool> {
    Ok(!eval_atom(team, atom)?.is_zero())
}

/// `⟦atom⟧` over the joint encoding of a structure and the team.
pub fn eval_atom_in_structure(a: &Structure, team: &KTeam, atom: &DependencyAtom) -> Result<Value> {
    let rel = fresh_relation_name(a.vocabulary());
    let sentence = simplify(&atom_sentence(atom, team.domain(), &rel)?);
    team.to_joint_interpretation(a, &rel)?.eval_sentence(&sentence)
}

pub fn satisfies_in_structure(a: &Structure, team: &KTeam, atom: &DependencyAtom) -> Result<bool> {
    Ok(!eval_atom_in_structure(a, team, atom)?.is_zero())
}

/// Sum of weights of support rows `r` with `r[p] = values[i]` for every
/// `(i, p)`; positions may repeat.
fn marginal_at(team: &KTeam, pos: &[usize], values: &[usize]) -> Result<Value> {
    team.spec().sum(
        team.iter()
            .filter(|(row, _)| pos.iter().zip(values).all(|(&p, &v)| row[p] == v))
            .map(|(_, w)| w),
    )
}

fn project(row: &[usize], pos: &[usize]) -> Vec<usize> {
    pos.iter().map(|&p| row[p]).collect()
}

/// The value of `atom` computed from marginal sums over the support. It
/// equals [`eval_atom`] exactly; literal atoms need
/// [`eval_atom_direct_in_structure`].
pub fn eval_atom_direct(team: &KTeam, atom: &DependencyAtom) -> Result<Value> {
    let spec = team.spec();
    match atom {
        DependencyAtom::Dep { from, to } => {
            let i = team.positions(from)?;
            let j = team.positions(to)?;
            let ij = [i.clone(), j.clone()].concat();
            // Realized (u, v) pairs with their marginal weight.
            let mut realized: BTreeMap<Vec<usize>, BTreeMap<Vec<usize>, Value>> = BTreeMap::new();
            for (row, _) in team.iter() {
                let u = project(row, &i);
                let v = project(row, &j);
                if realized.get(&u).is_some_and(|m| m.contains_key(&v)) {
                    continue;
                }
                let m = marginal_at(team, &ij, &[u.clone(), v.clone()].concat())?;
                realized.entry(u).or_default().insert(v, m);
            }
            // Pairs (u, v) with m(u, v)² = 0 contribute a factor 1 + 1 from
            // the diagonal v = w; unrealized pairs all fall in this case.
            let all_pairs = team
                .universe()
                .len()
                .checked_pow(ij.len() as u32)
                .and_then(|n| u64::try_from(n).ok())
                .ok_or_else(|| Error::Input("tuple space too large".into()))?;
            let mut square_nonzero = 0u64;
            let mut off_diagonal_ok = true;
            for by_v in realized.values() {
                for (v, m) in by_v {
                    if !m.mul(m)?.is_zero() {
                        square_nonzero += 1;
                    }
                    for (w, m2) in by_v {
                        if v != w && !m.mul(m2)?.is_zero() {
                            off_diagonal_ok = false;
                        }
                    }
                }
            }
            if !off_diagonal_ok {
                return Ok(spec.zero());
            }
            let two = spec.one().add(&spec.one())?;
            Ok(two.pow(all_pairs - square_nonzero))
        }
        DependencyAtom::Indep { given, left, right } => {
            let i = team.positions(given)?;
            let j = team.positions(left)?;
            let k = team.positions(right)?;
            let ij = [i.clone(), j.clone()].concat();
            let ik = [i.clone(), k.clone()].concat();
            let ijk = [i.clone(), j.clone(), k.clone()].concat();
            let mut by_u: BTreeMap<Vec<usize>, (BTreeSet<Vec<usize>>, BTreeSet<Vec<usize>>)> =
                BTreeMap::new();
            for (row, _) in team.iter() {
                let e = by_u.entry(project(row, &i)).or_default();
                e.0.insert(project(row, &j));
                e.1.insert(project(row, &k));
            }
            for (u, (vs, ws)) in &by_u {
                let mu = marginal_at(team, &i, u)?;
                for v in vs {
                    let muv = marginal_at(team, &ij, &[u.clone(), v.clone()].concat())?;
                    for w in ws {
                        let muw = marginal_at(team, &ik, &[u.clone(), w.clone()].concat())?;
                        let muvw = marginal_at(team, &ijk, &[u.clone(), v.clone(), w.clone()].concat())?;
                        if muv.mul(&muw)? != mu.mul(&muvw)? {
                            return Ok(spec.zero());
                        }
                    }
                }
            }
            Ok(spec.one())
        }
        DependencyAtom::Inc { sub, sup } => {
            if sub.len() != sup.len() {
                return Err(Error::LengthMismatch(format!(
                    "inclusion atom needs equal tuple lengths, got {} and {}",
                    sub.len(),
                    sup.len()
                )));
            }
            if !spec.flags().naturally_ordered {
                return Err(Error::NotOrdered(spec.to_string()));
            }
            let i = team.positions(sub)?;
            let j = team.positions(sup)?;
            let lower = team.marginals_at(&i)?;
            let upper = team.marginals_at(&j)?;
            for (u, m) in &lower {
                let bound = upper.get(u).cloned().unwrap_or_else(|| spec.zero());
                if !m.nat_leq(&bound)? {
                    return Ok(spec.zero());
                }
            }
            Ok(spec.one())
        }
        DependencyAtom::Lit(Literal::Rel { name, .. }) => Err(Error::UnknownSymbol(name.clone())),
        DependencyAtom::Lit(Literal::Eq { left, right, negated }) => {
            let a = team.positions(std::slice::from_ref(left))?[0];
            let b = team.positions(std::slice::from_ref(right))?[0];
            let ok = team.iter().all(|(row, _)| (row[a] == row[b]) != *negated);
            Ok(spec.indicator(ok))
        }
    }
}

/// Direct evaluation with literal atoms read against a structure.
pub fn eval_atom_direct_in_structure(a: &Structure, team: &KTeam, atom: &DependencyAtom) -> Result<Value> {
    match atom {
        DependencyAtom::Lit(Literal::Rel { name, args, negated }) => {
            a.vocabulary().check(name, args.len())?;
            let pos = team.positions(args)?;
            let ok = team
                .iter()
                .all(|(row, _)| a.holds(name, &project(row, &pos)) != *negated);
            Ok(team.spec().indicator(ok))
        }
        _ => eval_atom_direct(team, atom),
    }
}

/// Whether a dependence atom evaluates to zero although the possibilistic
/// collapse satisfies it. This happens only in semirings where `1 + 1` or
/// its powers vanish.
pub fn dep_zero_divisor_anomaly(team: &KTeam, atom: &DependencyAtom) -> Result<bool> {
    if !matches!(atom, DependencyAtom::Dep { .. }) {
        return Ok(false);
    }
    Ok(eval_atom_direct(team, atom)?.is_zero()
        && !eval_atom_direct(&team.possibilistic_collapse(), atom)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::{parse_atom, parse_fo, Vocabulary};
    use crate::semiring::SemiringSpec;

    fn atom(text: &str) -> DependencyAtom {
        parse_atom(text).unwrap()
    }

    #[test]
    fn theta_shapes() {
        let v = Vocabulary::new().with("R", 3);
        let t = theta("R", 3, &[(vec![0, 1], vec!["u".into(), "v".into()])]).unwrap();
        assert_eq!(
            t,
            parse_fo("exists x1,x2,x3. R(x1,x2,x3) & x1 = u & x2 = v", &v).unwrap()
        );
        assert_eq!(
            theta("R", 3, &[]).unwrap(),
            parse_fo("exists x1,x2,x3. R(x1,x2,x3)", &v).unwrap()
        );
        let one = theta("R", 3, &[(vec![0], vec!["u".into()])]).unwrap();
        assert_eq!(simplify(&one), parse_fo("exists x2,x3. R(u,x2,x3)", &v).unwrap());
        assert_eq!(
            theta("R", 3, &[(vec![0], vec![])]).unwrap_err().code(),
            "LengthMismatch"
        );
    }

    #[test]
    fn simplification_examples() {
        let v = Vocabulary::new().with("R", 3).with("S", 2);
        let f = parse_fo("exists x1,x2,x3. R(x1,x2,x3) & x1 = u & x2 = v & x3 = w", &v).unwrap();
        assert_eq!(simplify(&f), parse_fo("R(u,v,w)", &v).unwrap());
        let g = parse_fo("exists x1,x2. S(x1,x2) & x1 = u", &v).unwrap();
        assert_eq!(simplify(&g), parse_fo("exists x2. S(u,x2)", &v).unwrap());
        let h = parse_fo("forall x. exists y. S(x,y) | x = y", &v).unwrap();
        assert_eq!(simplify(&h), h);
    }

    #[test]
    fn pure_independence_sentence_matches_the_worked_example() {
        let domain = vec!["x".to_string(), "y".to_string()];
        let s = simplify(&atom_sentence(&atom("indep(;x;y)"), &domain, "R").unwrap());
        let v = Vocabulary::new().with("R", 2);
        let expected = parse_fo(
            "forall v1,w1. (exists x2. R(v1,x2)) & (exists x1. R(x1,w1)) = (exists x1,x2. R(x1,x2)) & R(v1,w1)",
            &v,
        )
        .unwrap();
        assert_eq!(s, expected);
        assert!(s.check_foc(&[crate::formula::CmpKind::Eq]));
    }

    #[test]
    fn inclusion_sentence_shape() {
        let domain = vec!["x".to_string(), "y".to_string()];
        let s = simplify(&atom_sentence(&atom("inc(x;y)"), &domain, "R").unwrap());
        let v = Vocabulary::new().with("R", 2);
        assert_eq!(
            s,
            parse_fo("forall u1. (exists x2. R(u1,x2)) <= (exists x1. R(x1,u1))", &v).unwrap()
        );
    }

    #[test]
    fn worked_example_verdicts() {
        let indep = atom("indep(;x;y)");
        let dep = atom("dep(x;y)");
        let x1 = fixtures::example_team();
        let x2 = fixtures::example_multiteam();
        let x3 = fixtures::example_probabilistic();
        assert_eq!(eval_atom(&x1, &indep).unwrap(), Value::Bool(true));
        assert!(satisfies(&x3, &indep).unwrap());
        assert!(!satisfies(&x2, &indep).unwrap());
        assert!(satisfies(&x2, &dep).unwrap());
        assert!(!satisfies(&x1, &dep).unwrap());
        assert!(!satisfies(&x3, &dep).unwrap());
        for t in [&x1, &x2, &x3] {
            for a in [&indep, &dep, &atom("inc(x;y)"), &atom("dep(x;x)")] {
                assert_eq!(eval_atom(t, a).unwrap(), eval_atom_direct(t, a).unwrap(), "{a}");
                assert_eq!(
                    eval_atom(t, a).unwrap(),
                    eval_atom_unsimplified(t, a).unwrap(),
                    "{a}"
                );
            }
        }
    }

    #[test]
    fn dependence_values_exceed_one() {
        // Two unrealized (u, v) pairs, each contributing 1 + 1.
        let x2 = fixtures::example_multiteam();
        assert_eq!(eval_atom(&x2, &atom("dep(x;y)")).unwrap(), Value::natural(4u32));
    }

    #[test]
    fn mixing_counterexample() {
        let t = fixtures::zmod4_mixing_team();
        assert!(satisfies(&t, &atom("indep(;x;y)")).unwrap());
        assert!(satisfies(&t, &atom("indep(;x,y;z)")).unwrap());
        assert!(!satisfies(&t, &atom("indep(;x;y,z)")).unwrap());
        for a in ["indep(;x;y)", "indep(;x,y;z)", "indep(;x;y,z)"] {
            assert_eq!(
                eval_atom_direct(&t, &atom(a)).unwrap(),
                eval_atom(&t, &atom(a)).unwrap()
            );
        }
    }

    #[test]
    fn zero_divisor_dependence_anomaly() {
        let t = fixtures::zmod4_mixing_team();
        let a = atom("dep(x,y;z)");
        assert!(satisfies(&t.possibilistic_collapse(), &a).unwrap());
        assert!(eval_atom(&t, &a).unwrap().is_zero());
        assert!(dep_zero_divisor_anomaly(&t, &a).unwrap());
        assert!(!dep_zero_divisor_anomaly(&fixtures::example_multiteam(), &atom("dep(x;y)")).unwrap());
    }

    #[test]
    fn zero_team_satisfies_everything() {
        let u = fixtures::example_team().universe().clone();
        let zero = KTeam::new(&["x", "y"], u, SemiringSpec::Natural).unwrap();
        for a in ["dep(x;y)", "indep(;x;y)", "inc(x;y)", "indep(x;y;y)", "x = y"] {
            assert!(satisfies(&zero, &atom(a)).unwrap(), "{a}");
        }
    }

    #[test]
    fn literal_atoms_against_a_structure() {
        let x1 = fixtures::example_team();
        let u = x1.universe().clone();
        let mut s = Structure::new(u, Vocabulary::new().with("S", 1));
        s.insert("S", vec![0]).unwrap();
        let pos = atom("S(x)");
        let neg = atom("!S(y)");
        assert!(satisfies_in_structure(&s, &x1, &pos).unwrap());
        assert!(!satisfies_in_structure(&s, &x1, &neg).unwrap());
        assert!(!satisfies_in_structure(&s, &x1, &atom("S(y)")).unwrap());
        for a in [&pos, &neg, &atom("dep(x;y)")] {
            assert_eq!(
                eval_atom_in_structure(&s, &x1, a).unwrap(),
                eval_atom_direct_in_structure(&s, &x1, a).unwrap()
            );
        }
        assert_eq!(eval_atom(&x1, &pos).unwrap_err().code(), "UnknownSymbol");
        let mut clash = Structure::new(x1.universe().clone(), Vocabulary::new().with("R", 1));
        clash.insert("R", vec![1]).unwrap();
        assert!(satisfies_in_structure(&clash, &x1, &atom("!R(x)")).unwrap());
    }

    #[test]
    fn inclusion_needs_order() {
        let t = fixtures::zmod4_mixing_team();
        assert_eq!(eval_atom(&t, &atom("inc(x;y)")).unwrap_err().code(), "NotOrdered");
        assert_eq!(
            eval_atom_direct(&t, &atom("inc(x;y)")).unwrap_err().code(),
            "NotOrdered"
        );
    }
}
