//! Distances between K-teams, a non-independence measure, and exhaustive
//! minimal-repair search.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::atoms::eval_atom_direct;
use crate::error::{Error, Result};
use crate::formula::DependencyAtom;
use crate::kteam::KTeam;
use crate::semiring::{SemiringSpec, Value};

/// The semiring in which distances and measures are reported: booleans
/// embed into the naturals via 0/1, so boolean distances count assignments.
pub fn distance_spec(spec: &SemiringSpec) -> Result<SemiringSpec> {
    match spec {
        SemiringSpec::Boolean | SemiringSpec::Natural => Ok(SemiringSpec::Natural),
        SemiringSpec::Rational => Ok(SemiringSpec::Rational),
        other => Err(Error::UnsupportedSpec(format!(
            "{other} has no embedding into an ordered ring"
        ))),
    }
}

fn embed(v: &Value) -> Result<BigRational> {
    match v {
        Value::Bool(b) => Ok(BigRational::from_integer(BigInt::from(u8::from(*b)))),
        Value::Nat(_) | Value::Rat(_) => Ok(v.to_rational().expect("numeric value")),
        _ => Err(Error::UnsupportedSpec(format!(
            "{} has no embedding into an ordered ring",
            v.spec()
        ))),
    }
}

fn import(r: &BigRational, spec: &SemiringSpec) -> Result<Value> {
    match spec {
        SemiringSpec::Boolean => Ok(Value::Bool(!r.is_zero())),
        SemiringSpec::Natural => Ok(Value::natural(
            r.to_integer()
                .to_biguint()
                .ok_or_else(|| Error::Input("negative difference".into()))?,
        )),
        SemiringSpec::Rational => Value::rational(r.clone()),
        other => Err(Error::UnsupportedSpec(other.to_string())),
    }
}

/// `(𝕏 △ 𝕐)(s) = |𝕏(s) − 𝕐(s)|`.
pub fn symdiff(x: &KTeam, y: &KTeam) -> Result<KTeam> {
    x.same_shape(y)?;
    distance_spec(x.spec())?;
    let mut out = KTeam::new(x.domain(), x.universe().clone(), x.spec().clone())?;
    let rows: std::collections::BTreeSet<Vec<usize>> = x.support().into_iter().chain(y.support()).collect();
    for row in rows {
        let d = (embed(&x.weight(&row))? - embed(&y.weight(&row))?).abs();
        out.set(row, import(&d, x.spec())?)?;
    }
    Ok(out)
}

fn dist_exact(x: &KTeam, y: &KTeam) -> Result<BigRational> {
    let d = symdiff(x, y)?;
    let total = d
        .iter()
        .try_fold(BigRational::zero(), |acc, (_, w)| Ok(acc + embed(w)?));
    total
}

/// `Σ_s (𝕏 △ 𝕐)(s)`, in [`distance_spec`].
pub fn dist(x: &KTeam, y: &KTeam) -> Result<Value> {
    import(&dist_exact(x, y)?, &distance_spec(x.spec())?)
}

fn marginal(x: &KTeam, pos: &[usize], values: &[usize]) -> Result<BigRational> {
    x.iter()
        .filter(|(row, _)| pos.iter().zip(values).all(|(&p, &v)| row[p] == v))
        .try_fold(BigRational::zero(), |acc, (_, w)| Ok(acc + embed(w)?))
}

fn nonindep_exact<S: AsRef<str>>(x: &KTeam, xvars: &[S], yvars: &[S]) -> Result<BigRational> {
    distance_spec(x.spec())?;
    let i = x.positions(xvars)?;
    let j = x.positions(yvars)?;
    let ij = [i.clone(), j.clone()].concat();
    let total = marginal(x, &[], &[])?;
    let u = x.universe();
    let mut acc = BigRational::zero();
    for a in u.tuples(i.len()) {
        let ma = marginal(x, &i, &a)?;
        for b in u.tuples(j.len()) {
            let joint = marginal(x, &ij, &[a.clone(), b.clone()].concat())?;
            let mb = marginal(x, &j, &b)?;
            acc += (&total * joint - &ma * mb).abs();
        }
    }
    Ok(acc)
}

/// `Σ_{ā,b̄} |total·𝕏(x̄ȳ = āb̄) − 𝕏(x̄ = ā)·𝕏(ȳ = b̄)|` over all tuples of
/// the universe, in [`distance_spec`].
pub fn nonindep<S: AsRef<str>>(x: &KTeam, xvars: &[S], yvars: &[S]) -> Result<Value> {
    import(&nonindep_exact(x, xvars, yvars)?, &distance_spec(x.spec())?)
}

/// Finite candidate space for repairs: every team whose weights on `rows`
/// come from `weights` and which is zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct RepairSpace {
    pub weights: Vec<Value>,
    /// Defaults to every assignment of the domain.
    pub rows: Option<Vec<Vec<usize>>>,
}

impl RepairSpace {
    pub fn new(weights: Vec<Value>) -> Self {
        RepairSpace { weights, rows: None }
    }

    /// Largest number of candidate teams scanned.
    pub const LIMIT: u64 = 5_000_000;

    fn candidates(&self, x: &KTeam) -> Result<Vec<KTeam>> {
        if !self.weights.iter().any(Value::is_zero) {
            return Err(Error::Input("repair weights must include zero".into()));
        }
        if let Some(w) = self.weights.iter().find(|w| w.spec() != *x.spec()) {
            return Err(Error::SpecMismatch {
                left: w.spec().to_string(),
                right: x.spec().to_string(),
            });
        }
        let mut weights = self.weights.clone();
        weights.sort_by_key(|w| w.to_string());
        weights.dedup();
        let rows: Vec<Vec<usize>> = match &self.rows {
            Some(r) => r.clone(),
            None => x.all_rows().collect(),
        };
        let size = (weights.len() as u64)
            .checked_pow(rows.len() as u32)
            .filter(|&n| n <= Self::LIMIT)
            .ok_or_else(|| {
                Error::Input(format!(
                    "repair space of {}^{} teams is too large",
                    weights.len(),
                    rows.len()
                ))
            })?;
        let base = KTeam::new(x.domain(), x.universe().clone(), x.spec().clone())?;
        let mut out = Vec::with_capacity(size as usize);
        let mut idx = vec![0usize; rows.len()];
        loop {
            let mut t = base.clone();
            for (row, &i) in rows.iter().zip(&idx) {
                t.set(row.clone(), weights[i].clone())?;
            }
            out.push(t);
            let mut k = idx.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < weights.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairNotion {
    Symmetric,
    Subteam,
    Superteam,
    MinNonindep,
}

impl FromStr for RepairNotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" | "symmetric" => Ok(RepairNotion::Symmetric),
            "sub" | "subteam" => Ok(RepairNotion::Subteam),
            "super" | "superteam" => Ok(RepairNotion::Superteam),
            "nonindep" => Ok(RepairNotion::MinNonindep),
            _ => Err(Error::Input(format!(
                "unknown repair notion {s:?}; use sym, sub, super or nonindep"
            ))),
        }
    }
}

impl fmt::Display for RepairNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepairNotion::Symmetric => "sym",
            RepairNotion::Subteam => "sub",
            RepairNotion::Superteam => "super",
            RepairNotion::MinNonindep => "nonindep",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepairResult {
    /// All minimisers, in canonical order.
    pub teams: Vec<KTeam>,
    /// The minimal distance, or the minimal measure for `MinNonindep`.
    pub distance: Value,
    pub notion: RepairNotion,
    /// Whether the whole candidate space was scanned.
    pub exhaustive: bool,
    pub candidates: usize,
}

fn satisfies_all(y: &KTeam, constraints: &[DependencyAtom]) -> Result<bool> {
    for c in constraints {
        if eval_atom_direct(y, c)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn canonical_key(t: &KTeam) -> Vec<(Vec<usize>, String)> {
    t.iter().map(|(r, w)| (r.clone(), w.to_string())).collect()
}

fn minimise(
    x: &KTeam,
    candidates: Vec<KTeam>,
    notion: RepairNotion,
    mut admissible: impl FnMut(&KTeam) -> Result<bool>,
    mut score: impl FnMut(&KTeam) -> Result<BigRational>,
) -> Result<RepairResult> {
    let scanned = candidates.len();
    let mut best: Option<BigRational> = None;
    let mut teams = Vec::new();
    for y in candidates {
        if !admissible(&y)? {
            continue;
        }
        let d = score(&y)?;
        match best.as_ref().map(|b| d.cmp(b)) {
            Some(Ordering::Greater) => {}
            Some(Ordering::Equal) => teams.push(y),
            _ => {
                best = Some(d);
                teams = vec![y];
            }
        }
    }
    let best = best.ok_or(Error::EmptySpace)?;
    teams.sort_by_key(canonical_key);
    Ok(RepairResult {
        teams,
        distance: import(&best, &distance_spec(x.spec())?)?,
        notion,
        exhaustive: true,
        candidates: scanned,
    })
}

/// Teams in the space satisfying every constraint at minimal distance from
/// `x`.
pub fn repair_symmetric(
    x: &KTeam,
    constraints: &[DependencyAtom],
    space: &RepairSpace,
) -> Result<RepairResult> {
    distance_spec(x.spec())?;
    let cands = space.candidates(x)?;
    minimise(
        x,
        cands,
        RepairNotion::Symmetric,
        |y| satisfies_all(y, constraints),
        |y| dist_exact(x, y),
    )
}

fn ordered(x: &KTeam) -> Result<()> {
    distance_spec(x.spec())?;
    if !x.spec().flags().naturally_ordered {
        return Err(Error::NotOrdered(x.spec().to_string()));
    }
    Ok(())
}

/// As [`repair_symmetric`], restricted to subteams of `x`.
pub fn repair_subteam(
    x: &KTeam,
    constraints: &[DependencyAtom],
    space: &RepairSpace,
) -> Result<RepairResult> {
    ordered(x)?;
    let cands = space.candidates(x)?;
    minimise(
        x,
        cands,
        RepairNotion::Subteam,
        |y| Ok(y.is_subteam(x)? && satisfies_all(y, constraints)?),
        |y| dist_exact(x, y),
    )
}

/// As [`repair_symmetric`], restricted to superteams of `x`.
pub fn repair_superteam(
    x: &KTeam,
    constraints: &[DependencyAtom],
    space: &RepairSpace,
) -> Result<RepairResult> {
    ordered(x)?;
    let cands = space.candidates(x)?;
    minimise(
        x,
        cands,
        RepairNotion::Superteam,
        |y| Ok(x.is_subteam(y)? && satisfies_all(y, constraints)?),
        |y| dist_exact(x, y),
    )
}

/// Teams `𝕐` in the space minimising `nonindep(𝕏 △ 𝕐)`.
pub fn repair_min_nonindep<S: AsRef<str>>(
    x: &KTeam,
    xvars: &[S],
    yvars: &[S],
    space: &RepairSpace,
) -> Result<RepairResult> {
    distance_spec(x.spec())?;
    let cands = space.candidates(x)?;
    minimise(
        x,
        cands,
        RepairNotion::MinNonindep,
        |_| Ok(true),
        |y| nonindep_exact(&symdiff(x, y)?, xvars, yvars),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::parse_atom;
    use crate::interpretation::Universe;
    use std::sync::Arc;

    fn boolean_team(rows: &[[usize; 2]]) -> KTeam {
        let u = Arc::new(Universe::new(["a", "b"]).unwrap());
        KTeam::from_rows(
            &["x", "y"],
            u,
            SemiringSpec::Boolean,
            rows.iter().map(|r| (r.to_vec(), Value::Bool(true))),
        )
        .unwrap()
    }

    #[test]
    fn distances() {
        let x2 = fixtures::example_multiteam();
        let zero = KTeam::new(x2.domain(), x2.universe().clone(), SemiringSpec::Natural).unwrap();
        assert!(symdiff(&x2, &x2).unwrap().is_zero());
        assert_eq!(symdiff(&x2, &zero).unwrap(), x2);
        assert_eq!(dist(&x2, &zero).unwrap(), Value::natural(7u32));
        assert!(dist(&x2, &x2).unwrap().is_zero());
        let p = boolean_team(&[[0, 0], [0, 1]]);
        let q = boolean_team(&[[0, 1], [1, 1]]);
        assert_eq!(
            symdiff(&p, &q).unwrap().support(),
            boolean_team(&[[0, 0], [1, 1]]).support()
        );
        assert_eq!(dist(&p, &q).unwrap(), Value::natural(2u32));
        assert_eq!(
            symdiff(&fixtures::zmod4_mixing_team(), &fixtures::zmod4_mixing_team())
                .unwrap_err()
                .code(),
            "UnsupportedSpec"
        );
    }

    #[test]
    fn non_independence() {
        let x = ["x"];
        let y = ["y"];
        assert_eq!(
            nonindep(&fixtures::example_multiteam(), &x, &y).unwrap(),
            Value::natural(40u32)
        );
        assert!(nonindep(&fixtures::example_probabilistic(), &x, &y)
            .unwrap()
            .is_zero());
        let x2 = fixtures::example_multiteam();
        let zero = KTeam::new(x2.domain(), x2.universe().clone(), SemiringSpec::Natural).unwrap();
        assert!(nonindep(&zero, &x, &y).unwrap().is_zero());
    }

    #[test]
    fn dependence_repairs() {
        let x = boolean_team(&[[0, 0], [0, 1]]);
        let dep = [parse_atom("dep(x;y)").unwrap()];
        let space = RepairSpace::new(vec![Value::Bool(false), Value::Bool(true)]);
        let r = repair_symmetric(&x, &dep, &space).unwrap();
        assert_eq!(r.candidates, 16);
        assert_eq!(r.distance, Value::natural(1u32));
        assert_eq!(r.teams, vec![boolean_team(&[[0, 0]]), boolean_team(&[[0, 1]])]);
        let s = repair_subteam(&x, &dep, &space).unwrap();
        assert_eq!(s.teams, r.teams);
        let ok = boolean_team(&[[0, 0], [1, 1]]);
        let r = repair_symmetric(&ok, &dep, &space).unwrap();
        assert_eq!(r.teams, vec![ok]);
        assert!(r.distance.is_zero());
    }

    #[test]
    fn superteam_inclusion_repair() {
        // inc(x;y) on {(a,b):1} needs some assignment with y = a.
        let u = Arc::new(Universe::new(["a", "b"]).unwrap());
        let x = KTeam::from_rows(
            &["x", "y"],
            u,
            SemiringSpec::Natural,
            [(vec![0, 1], Value::natural(1u32))],
        )
        .unwrap();
        let inc = [parse_atom("inc(x;y)").unwrap()];
        let space = RepairSpace::new((0u32..3).map(Value::natural).collect());
        let r = repair_superteam(&x, &inc, &space).unwrap();
        assert_eq!(r.distance, Value::natural(1u32));
        for t in &r.teams {
            assert!(x.is_subteam(t).unwrap());
            assert!(!eval_atom_direct(t, &inc[0]).unwrap().is_zero());
        }
        // Adding (a,a) would also raise the x-marginal of a.
        assert_eq!(r.teams.len(), 1);
        assert_eq!(r.teams[0].weight(&[1, 0]), Value::natural(1u32));
    }

    #[test]
    fn nonindep_repair_keeps_the_input() {
        let x = boolean_team(&[[0, 0], [1, 1]]);
        let space = RepairSpace::new(vec![Value::Bool(false), Value::Bool(true)]);
        let r = repair_min_nonindep(&x, &["x"], &["y"], &space).unwrap();
        assert!(r.distance.is_zero());
        assert!(r.teams.contains(&x));
    }

    #[test]
    fn empty_space_and_bad_specs() {
        let x = boolean_team(&[[0, 0]]);
        let never = [parse_atom("x != x").unwrap()];
        let space = RepairSpace {
            weights: vec![Value::Bool(false), Value::Bool(true)],
            rows: Some(vec![vec![0, 0]]),
        };
        let r = repair_symmetric(&x, &never, &space).unwrap();
        assert!(r.teams[0].is_zero());
        let none = RepairSpace::new(vec![Value::Bool(true)]);
        assert!(repair_symmetric(&x, &never, &none).is_err());
        let t = fixtures::zmod4_mixing_team();
        let zs = RepairSpace::new(vec![Value::residue(4, 0)]);
        assert_eq!(
            repair_symmetric(&t, &[], &zs).unwrap_err().code(),
            "UnsupportedSpec"
        );
    }
}
