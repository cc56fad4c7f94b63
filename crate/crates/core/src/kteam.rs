//! K-teams: weight functions from assignments to semiring values.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::Vocabulary;
use crate::interpretation::{truth_interpretation, Assignment, KInterpretation, Structure, Universe};
use crate::semiring::{SemiringSpec, Value};

/// Relation symbol used for the team when encoding it as an interpretation.
pub const TEAM_RELATION: &str = "R";

/// The fixed total order on variable names: lexicographic.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VarOrder;

impl VarOrder {
    pub fn sorted<S: AsRef<str>>(vars: &[S]) -> Vec<String> {
        let mut v: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        v.sort();
        v
    }
}

/// A K-team over a finite variable domain, stored sparsely: assignments
/// are rows of universe indices aligned with the sorted domain, and only
/// nonzero weights are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTeam {
    domain: Vec<String>,
    universe: Arc<Universe>,
    spec: SemiringSpec,
    weights: BTreeMap<Vec<usize>, Value>,
}

impl KTeam {
    /// The zero team.
    pub fn new<S: AsRef<str>>(domain: &[S], universe: Arc<Universe>, spec: SemiringSpec) -> Result<Self> {
        let sorted = VarOrder::sorted(domain);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("duplicate variable in team domain".into()));
        }
        Ok(KTeam {
            domain: sorted,
            universe,
            spec,
            weights: BTreeMap::new(),
        })
    }

    /// Builds a team from rows given in the order of `domain` (which need
    /// not be sorted).
    pub fn from_rows<S: AsRef<str>>(
        domain: &[S],
        universe: Arc<Universe>,
        spec: SemiringSpec,
        rows: impl IntoIterator<Item = (Vec<usize>, Value)>,
    ) -> Result<Self> {
        let mut team = KTeam::new(domain, universe, spec)?;
        let perm: Vec<usize> = team
            .domain
            .iter()
            .map(|v| domain.iter().position(|d| d.as_ref() == v).unwrap())
            .collect();
        let mut seen = BTreeSet::new();
        for (row, w) in rows {
            if row.len() != domain.len() {
                return Err(Error::LengthMismatch(format!(
                    "row of length {} for domain of size {}",
                    row.len(),
                    domain.len()
                )));
            }
            let sorted: Vec<usize> = perm.iter().map(|&i| row[i]).collect();
            if !seen.insert(sorted.clone()) {
                return Err(Error::Input(format!(
                    "duplicate assignment {}",
                    team.universe.format_tuple(&sorted)
                )));
            }
            team.set(sorted, w)?;
        }
        Ok(team)
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn spec(&self) -> &SemiringSpec {
        &self.spec
    }

    /// Sets the weight of an assignment given as a row aligned with the
    /// sorted domain.
    pub fn set(&mut self, row: Vec<usize>, w: Value) -> Result<()> {
        if row.len() != self.domain.len() {
            return Err(Error::LengthMismatch(format!(
                "row of length {} for domain of size {}",
                row.len(),
                self.domain.len()
            )));
        }
        if row.iter().any(|&e| e >= self.universe.len()) {
            return Err(Error::Input("assignment value outside the universe".into()));
        }
        if w.spec() != self.spec {
            return Err(Error::SpecMismatch {
                left: w.spec().to_string(),
                right: self.spec.to_string(),
            });
        }
        if w.is_zero() {
            self.weights.remove(&row);
        } else {
            self.weights.insert(row, w);
        }
        Ok(())
    }

    pub fn weight(&self, row: &[usize]) -> Value {
        self.weights.get(row).cloned().unwrap_or_else(|| self.spec.zero())
    }

    /// Nonzero rows with their weights, in lexicographic row order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Value)> {
        self.weights.iter()
    }

    pub fn support(&self) -> BTreeSet<Vec<usize>> {
        self.weights.keys().cloned().collect()
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    /// Every assignment of the domain over the universe, as rows.
    pub fn all_rows(&self) -> impl Iterator<Item = Vec<usize>> {
        self.universe.tuples(self.domain.len())
    }

    pub fn assignment(&self, row: &[usize]) -> Assignment {
        self.domain.iter().cloned().zip(row.iter().copied()).collect()
    }

    pub fn position(&self, var: &str) -> Option<usize> {
        self.domain.iter().position(|v| v == var)
    }

    /// Domain positions of `vars`.
    pub fn positions<S: AsRef<str>>(&self, vars: &[S]) -> Result<Vec<usize>> {
        vars.iter()
            .map(|v| {
                self.position(v.as_ref())
                    .ok_or_else(|| Error::UnknownVariable(v.as_ref().to_string()))
            })
            .collect()
    }

    pub(crate) fn same_shape(&self, other: &KTeam) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                left: self.spec.to_string(),
                right: other.spec.to_string(),
            });
        }
        if self.domain != other.domain || self.universe != other.universe {
            return Err(Error::Input("teams differ in domain or universe".into()));
        }
        Ok(())
    }

    /// `self(s) ≤ other(s)` for every assignment.
    pub fn is_subteam(&self, other: &KTeam) -> Result<bool> {
        self.same_shape(other)?;
        if !self.spec.flags().naturally_ordered {
            return Err(Error::NotOrdered(self.spec.to_string()));
        }
        for (row, w) in &self.weights {
            if !w.nat_leq(&other.weight(row))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The Boolean team `s ↦ χ(self(s))`.
    pub fn possibilistic_collapse(&self) -> KTeam {
        KTeam {
            domain: self.domain.clone(),
            universe: self.universe.clone(),
            spec: SemiringSpec::Boolean,
            weights: self
                .weights
                .keys()
                .map(|r| (r.clone(), Value::Bool(true)))
                .collect(),
        }
    }

    /// Applies `f` to every weight, producing a team over `spec`.
    pub fn map_weights(
        &self,
        spec: SemiringSpec,
        mut f: impl FnMut(&Value) -> Result<Value>,
    ) -> Result<KTeam> {
        let mut out = KTeam {
            domain: self.domain.clone(),
            universe: self.universe.clone(),
            spec,
            weights: BTreeMap::new(),
        };
        for (row, w) in &self.weights {
            out.set(row.clone(), f(w)?)?;
        }
        Ok(out)
    }

    /// Sum of the weights of assignments mapping `vars` to `values`.
    pub fn marginal<S: AsRef<str>>(&self, vars: &[S], values: &[usize]) -> Result<Value> {
        let pos = self.positions(vars)?;
        if pos.len() != values.len() {
            return Err(Error::LengthMismatch(format!(
                "{} variables but {} values",
                pos.len(),
                values.len()
            )));
        }
        self.spec.sum(
            self.weights
                .iter()
                .filter(|(row, _)| pos.iter().zip(values).all(|(&p, &v)| row[p] == v))
                .map(|(_, w)| w),
        )
    }

    /// All marginal sums over `vars`, keyed by value tuple; tuples with no
    /// supporting assignment are absent.
    pub fn marginals<S: AsRef<str>>(&self, vars: &[S]) -> Result<BTreeMap<Vec<usize>, Value>> {
        let pos = self.positions(vars)?;
        self.marginals_at(&pos)
    }

    pub(crate) fn marginals_at(&self, pos: &[usize]) -> Result<BTreeMap<Vec<usize>, Value>> {
        let mut out: BTreeMap<Vec<usize>, Value> = BTreeMap::new();
        for (row, w) in &self.weights {
            let key: Vec<usize> = pos.iter().map(|&p| row[p]).collect();
            match out.get_mut(&key) {
                Some(acc) => *acc = acc.add(w)?,
                None => {
                    out.insert(key, w.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn total(&self) -> Result<Value> {
        self.spec.sum(self.weights.values())
    }

    /// Scales a rational team to total weight 1; the zero team is returned
    /// unchanged.
    pub fn normalized(&self) -> Result<KTeam> {
        if self.spec != SemiringSpec::Rational {
            return Err(Error::UnsupportedSpec(self.spec.to_string()));
        }
        let total = self.total()?.to_rational().expect("rational weights");
        if self.is_zero() {
            return Ok(self.clone());
        }
        self.map_weights(SemiringSpec::Rational, |w| {
            Value::rational(w.to_rational().unwrap() / total.clone())
        })
    }

    /// The encoding `π_𝕏` with the team relation named [`TEAM_RELATION`].
    pub fn to_interpretation(&self) -> KInterpretation {
        self.to_interpretation_named(TEAM_RELATION)
    }

    /// Team facts carry the team weights; negated facts get the
    /// complementary 0/1 values so the result is model-defining.
    pub fn to_interpretation_named(&self, rel: &str) -> KInterpretation {
        let vocab = Vocabulary::new().with(rel, self.domain.len());
        KInterpretation::from_fn(
            self.universe.clone(),
            vocab,
            self.spec.clone(),
            |_, t, negated| self.team_literal(t, negated),
        )
        .expect("team weights share the spec")
    }

    fn team_literal(&self, t: &[usize], negated: bool) -> Value {
        match (self.weights.get(t), negated) {
            (Some(w), false) => w.clone(),
            (Some(_), true) => self.spec.zero(),
            (None, false) => self.spec.zero(),
            (None, true) => self.spec.one(),
        }
    }

    /// The joint encoding of a structure and the team: structure facts as
    /// 0/1 truth values and the team relation `rel` as in
    /// [`KTeam::to_interpretation_named`].
    pub fn to_joint_interpretation(&self, a: &Structure, rel: &str) -> Result<KInterpretation> {
        if a.vocabulary().contains(rel) {
            return Err(Error::VocabularyClash(rel.to_string()));
        }
        if **a.universe() != *self.universe {
            return Err(Error::Input("structure and team universes differ".into()));
        }
        let truth = truth_interpretation(a, &self.spec);
        let mut vocab = a.vocabulary().clone();
        vocab.insert(rel, self.domain.len())?;
        KInterpretation::from_fn(
            self.universe.clone(),
            vocab,
            self.spec.clone(),
            |name, t, negated| {
                if name == rel {
                    self.team_literal(t, negated)
                } else {
                    truth.get(name, t, negated).unwrap().clone()
                }
            },
        )
    }

    /// Reads the CSV team format: a header naming the variables and a
    /// `weight` column, then one row per assignment. Without a universe,
    /// elements are collected from the rows in order of appearance.
    pub fn read_csv(text: &str, universe: Option<Arc<Universe>>, spec: &SemiringSpec) -> Result<KTeam> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| Error::Input(e.to_string()))?.clone();
        let weight_col = headers
            .iter()
            .position(|h| h == "weight")
            .ok_or_else(|| Error::Input("missing weight column".into()))?;
        let vars: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != weight_col)
            .map(|(_, h)| h.to_string())
            .collect();
        let mut raw = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Input(e.to_string()))?;
            let elems: Vec<String> = rec
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != weight_col)
                .map(|(_, v)| v.to_string())
                .collect();
            let weight = spec.parse_value(rec.get(weight_col).unwrap_or(""))?;
            raw.push((elems, weight));
        }
        let universe = match universe {
            Some(u) => u,
            None => {
                let mut names: Vec<String> = Vec::new();
                for (elems, _) in &raw {
                    for e in elems {
                        if !names.contains(e) {
                            names.push(e.clone());
                        }
                    }
                }
                Arc::new(Universe::new(names)?)
            }
        };
        let rows = raw
            .into_iter()
            .map(|(elems, w)| {
                let row = elems
                    .iter()
                    .map(|e| universe.lookup(e))
                    .collect::<Result<Vec<_>>>()?;
                Ok((row, w))
            })
            .collect::<Result<Vec<_>>>()?;
        KTeam::from_rows(&vars, universe, spec.clone(), rows)
    }

    /// Writes the nonzero rows in the CSV team format.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = self.domain.iter().map(String::as_str).collect();
        header.push("weight");
        w.write_record(&header).expect("in-memory write");
        for (row, v) in &self.weights {
            let mut rec: Vec<String> = row.iter().map(|&e| self.universe.name(e).to_string()).collect();
            rec.push(v.to_string());
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }
}

/// A relation name not in `vocab`: [`TEAM_RELATION`] if free, otherwise
/// `R1`, `R2`, ...
pub fn fresh_relation_name(vocab: &Vocabulary) -> String {
    if !vocab.contains(TEAM_RELATION) {
        return TEAM_RELATION.to_string();
    }
    (1..)
        .map(|i| format!("{TEAM_RELATION}{i}"))
        .find(|n| !vocab.contains(n))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn supports_of_the_three_example_teams() {
        let x2 = fixtures::example_multiteam();
        assert_eq!(x2.support(), [vec![0, 0], vec![1, 1]].into());
        let x3 = fixtures::example_probabilistic();
        assert_eq!(x3.support(), [vec![0, 0], vec![0, 1]].into());
        let zero = KTeam::new(&["x"], x3.universe().clone(), SemiringSpec::Natural).unwrap();
        assert!(zero.support().is_empty());
    }

    #[test]
    fn collapse_of_probabilistic_team_is_the_plain_team() {
        assert_eq!(
            fixtures::example_probabilistic().possibilistic_collapse(),
            fixtures::example_team()
        );
        let x1 = fixtures::example_team();
        assert_eq!(x1.possibilistic_collapse(), x1);
        let c2 = fixtures::example_multiteam().possibilistic_collapse();
        assert_eq!(c2.weight(&[0, 0]), Value::Bool(true));
        assert_eq!(c2.weight(&[1, 1]), Value::Bool(true));
        assert_eq!(c2.support_size(), 2);
    }

    #[test]
    fn marginals() {
        let x3 = fixtures::example_probabilistic();
        assert_eq!(x3.marginal(&["x"], &[0]).unwrap(), Value::ratio(1, 1));
        assert_eq!(x3.marginal::<&str>(&[], &[]).unwrap(), Value::ratio(1, 1));
        let x2 = fixtures::example_multiteam();
        assert_eq!(x2.marginal(&["y"], &[1]).unwrap(), Value::natural(5u32));
        assert_eq!(
            x2.marginal(&["z"], &[0]).unwrap_err(),
            Error::UnknownVariable("z".into())
        );
    }

    #[test]
    fn subteams() {
        let x2 = fixtures::example_multiteam();
        assert!(x2.is_subteam(&x2).unwrap());
        let zero = KTeam::new(&["x", "y"], x2.universe().clone(), SemiringSpec::Natural).unwrap();
        assert!(zero.is_subteam(&x2).unwrap());
        let mut three = zero.clone();
        three.set(vec![0, 0], Value::natural(3u32)).unwrap();
        assert!(!three.is_subteam(&x2).unwrap());
        let t2 = fixtures::zmod4_mixing_team();
        assert_eq!(t2.is_subteam(&t2).unwrap_err().code(), "NotOrdered");
    }

    #[test]
    fn team_encodings() {
        let x1 = fixtures::example_team();
        let pi = x1.to_interpretation();
        let t = Value::Bool(true);
        let f = Value::Bool(false);
        assert_eq!(pi.get("R", &[0, 0], false).unwrap(), &t);
        assert_eq!(pi.get("R", &[0, 1], false).unwrap(), &t);
        assert_eq!(pi.get("R", &[1, 0], false).unwrap(), &f);
        assert_eq!(pi.get("R", &[1, 1], false).unwrap(), &f);
        assert!(pi.is_model_defining());

        let pi2 = fixtures::example_multiteam().to_interpretation();
        assert_eq!(pi2.get("R", &[0, 0], false).unwrap(), &Value::natural(2u32));
        assert_eq!(pi2.get("R", &[0, 0], true).unwrap(), &Value::natural(0u32));
        assert!(pi2.is_model_defining());

        let u = x1.universe().clone();
        let mut s = Structure::new(u.clone(), Vocabulary::new().with("S", 1));
        s.insert("S", vec![0]).unwrap();
        let team = KTeam::from_rows(
            &["x"],
            u,
            SemiringSpec::Natural,
            [(vec![0], Value::natural(4u32))],
        )
        .unwrap();
        let joint = team.to_joint_interpretation(&s, "R").unwrap();
        assert_eq!(joint.get("S", &[0], false).unwrap(), &Value::natural(1u32));
        assert_eq!(joint.get("S", &[1], false).unwrap(), &Value::natural(0u32));
        assert_eq!(joint.get("R", &[0], false).unwrap(), &Value::natural(4u32));
        assert_eq!(
            team.to_joint_interpretation(&s, "S").unwrap_err().code(),
            "VocabularyClash"
        );
        assert_eq!(fresh_relation_name(s.vocabulary()), "R");
        assert_eq!(fresh_relation_name(&Vocabulary::new().with("R", 1)), "R1");
    }

    #[test]
    fn csv_round_trip_and_reordering() {
        let text = "y,x,weight\nb,a,3/4\na,a,1/4\n";
        let t = KTeam::read_csv(text, None, &SemiringSpec::Rational).unwrap();
        assert_eq!(t.domain(), ["x", "y"]);
        let a = t.universe().index("a").unwrap();
        let b = t.universe().index("b").unwrap();
        assert_eq!(t.weight(&[a, b]), Value::ratio(3, 4));
        let again =
            KTeam::read_csv(&t.to_csv(), Some(t.universe().clone()), &SemiringSpec::Rational).unwrap();
        assert_eq!(again, t);
        assert!(KTeam::read_csv("x,weight\na,1\na,2\n", None, &SemiringSpec::Natural).is_err());
        assert!(KTeam::read_csv("x,y\na,b\n", None, &SemiringSpec::Natural).is_err());
    }

    #[test]
    fn normalization() {
        let u = Arc::new(Universe::of_size(2));
        let t = KTeam::from_rows(
            &["x"],
            u,
            SemiringSpec::Rational,
            [(vec![0], Value::ratio(1, 1)), (vec![1], Value::ratio(3, 1))],
        )
        .unwrap();
        let n = t.normalized().unwrap();
        assert_eq!(n.weight(&[1]), Value::ratio(3, 4));
        assert_eq!(n.total().unwrap(), Value::ratio(1, 1));
    }
}
