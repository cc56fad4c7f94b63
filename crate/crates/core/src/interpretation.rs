//! Finite structures, K-interpretations and the compositional evaluation of
//! first-order formulae with formula comparisons.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{CmpOp, Formula, Vocabulary};
use crate::semiring::{Homomorphism, SemiringSpec, Value};

/// An ordered, nonempty list of distinct element names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    names: Vec<String>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Input("universe must be nonempty".into()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || ",|()".contains(c)) {
                return Err(Error::Input(format!("invalid element name {n:?}")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::Input(format!("duplicate element {n}")));
            }
        }
        Ok(Universe { names })
    }

    /// `a, b, c, ...` for small sizes, `e0, e1, ...` beyond 26.
    pub fn of_size(n: usize) -> Self {
        assert!(n > 0, "universe must be nonempty");
        let names = (0..n)
            .map(|i| {
                if n <= 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("e{i}")
                }
            })
            .collect();
        Universe { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub(crate) fn lookup(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::Input(format!("{name} is not an element of the universe")))
    }

    /// All tuples of the given length in lexicographic order.
    pub fn tuples(&self, arity: usize) -> TupleIter {
        TupleIter::new(self.len(), arity)
    }

    pub(crate) fn tuple_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &e| acc * self.len() + e)
    }

    pub(crate) fn tuple_count(&self, arity: usize) -> usize {
        self.len()
            .checked_pow(arity as u32)
            .expect("tuple space too large")
    }

    pub fn format_tuple(&self, tuple: &[usize]) -> String {
        tuple.iter().map(|&e| self.name(e)).collect::<Vec<_>>().join(",")
    }
}

/// Odometer over `{0..base}^len`.
#[derive(Debug, Clone)]
pub struct TupleIter {
    base: usize,
    current: Option<Vec<usize>>,
}

impl TupleIter {
    fn new(base: usize, len: usize) -> Self {
        TupleIter {
            base,
            current: if base == 0 && len > 0 {
                None
            } else {
                Some(vec![0; len])
            },
        }
    }
}

impl Iterator for TupleIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.base {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}

/// Variable assignment: variable name to universe index.
pub type Assignment = BTreeMap<String, usize>;

/// A classical structure over a finite universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    universe: Arc<Universe>,
    vocab: Vocabulary,
    relations: BTreeMap<String, BTreeSet<Vec<usize>>>,
}

impl Structure {
    pub fn new(universe: Arc<Universe>, vocab: Vocabulary) -> Self {
        let relations = vocab
            .iter()
            .map(|(n, _)| (n.to_string(), BTreeSet::new()))
            .collect();
        Structure {
            universe,
            vocab,
            relations,
        }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn insert(&mut self, name: &str, tuple: Vec<usize>) -> Result<()> {
        self.vocab.check(name, tuple.len())?;
        if tuple.iter().any(|&e| e >= self.universe.len()) {
            return Err(Error::Input(format!("tuple of {name} outside the universe")));
        }
        self.relations.get_mut(name).unwrap().insert(tuple);
        Ok(())
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> bool {
        self.relations.get(name).is_some_and(|r| r.contains(tuple))
    }

    pub fn relation(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.relations.get(name)
    }

    /// Parses the line-oriented structure format:
    ///
    /// ```text
    /// universe: a b c
    /// rel S/1: a | b
    /// rel R/2: a a | a b
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let doc = Document::parse(text)?;
        if !doc.lits.is_empty() || doc.default.is_some() {
            return Err(Error::Input(
                "literal values belong in an interpretation file".into(),
            ));
        }
        doc.structure()
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "universe: {}", self.universe.names().join(" "))?;
        for (name, arity) in self.vocab.iter() {
            let tuples: Vec<String> = self.relations[name]
                .iter()
                .map(|t| {
                    if t.is_empty() {
                        "()".to_string()
                    } else {
                        t.iter()
                            .map(|&e| self.universe.name(e))
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            writeln!(f, "rel {name}/{arity}: {}", tuples.join(" | "))?;
        }
        Ok(())
    }
}

/// A total map from facts and negated facts over a finite universe to
/// values of one semiring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KInterpretation {
    universe: Arc<Universe>,
    vocab: Vocabulary,
    spec: SemiringSpec,
    /// Per relation: values of positive and negated facts, indexed by
    /// [`Universe::tuple_index`].
    facts: BTreeMap<String, [Vec<Value>; 2]>,
}

impl KInterpretation {
    /// Builds an interpretation from `value(relation, tuple, negated)`.
    pub fn from_fn(
        universe: Arc<Universe>,
        vocab: Vocabulary,
        spec: SemiringSpec,
        mut value: impl FnMut(&str, &[usize], bool) -> Value,
    ) -> Result<Self> {
        let mut facts = BTreeMap::new();
        for (name, arity) in vocab.iter() {
            let mut pos = Vec::with_capacity(universe.tuple_count(arity));
            let mut neg = Vec::with_capacity(universe.tuple_count(arity));
            for t in universe.tuples(arity) {
                for (negated, out) in [(false, &mut pos), (true, &mut neg)] {
                    let v = value(name, &t, negated);
                    if v.spec() != spec {
                        return Err(Error::SpecMismatch {
                            left: v.spec().to_string(),
                            right: spec.to_string(),
                        });
                    }
                    out.push(v);
                }
            }
            facts.insert(name.to_string(), [pos, neg]);
        }
        Ok(KInterpretation {
            universe,
            vocab,
            spec,
            facts,
        })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn spec(&self) -> &SemiringSpec {
        &self.spec
    }

    pub fn get(&self, name: &str, tuple: &[usize], negated: bool) -> Result<&Value> {
        self.vocab.check(name, tuple.len())?;
        let idx = self.universe.tuple_index(tuple);
        Ok(&self.facts[name][usize::from(negated)][idx])
    }

    pub fn set(&mut self, name: &str, tuple: &[usize], negated: bool, value: Value) -> Result<()> {
        self.vocab.check(name, tuple.len())?;
        if value.spec() != self.spec {
            return Err(Error::SpecMismatch {
                left: value.spec().to_string(),
                right: self.spec.to_string(),
            });
        }
        let idx = self.universe.tuple_index(tuple);
        self.facts.get_mut(name).unwrap()[usize::from(negated)][idx] = value;
        Ok(())
    }

    /// Every fact paired with its value and the value of its negation.
    pub fn facts(&self) -> impl Iterator<Item = (&str, Vec<usize>, &Value, &Value)> + '_ {
        self.vocab.iter().flat_map(move |(name, arity)| {
            let [pos, neg] = &self.facts[name];
            self.universe
                .tuples(arity)
                .enumerate()
                .map(move |(i, t)| (name, t, &pos[i], &neg[i]))
        })
    }

    /// Exactly one of each fact and its negation is mapped to zero.
    pub fn is_model_defining(&self) -> bool {
        self.facts
            .values()
            .all(|[pos, neg]| pos.iter().zip(neg).all(|(p, n)| p.is_zero() != n.is_zero()))
    }

    /// The literal-wise image under a homomorphism.
    pub fn transport(&self, h: &Homomorphism) -> Result<KInterpretation> {
        if self.spec != h.source {
            return Err(Error::SpecMismatch {
                left: self.spec.to_string(),
                right: h.source.to_string(),
            });
        }
        let mut facts = BTreeMap::new();
        for (name, [pos, neg]) in &self.facts {
            let map = |vs: &Vec<Value>| vs.iter().map(|v| h.apply(v)).collect::<Result<Vec<_>>>();
            facts.insert(name.clone(), [map(pos)?, map(neg)?]);
        }
        Ok(KInterpretation {
            universe: self.universe.clone(),
            vocab: self.vocab.clone(),
            spec: h.target.clone(),
            facts,
        })
    }

    /// Evaluates `f` under the assignment `s`. Negation is evaluated through
    /// the negation normal form.
    pub fn eval(&self, s: &Assignment, f: &Formula) -> Result<Value> {
        let f = f.nnf();
        let mut ev = Evaluator {
            pi: self,
            env: s.iter().map(|(k, &v)| (k.clone(), vec![v])).collect(),
            closed: HashSet::new(),
            cache: HashMap::new(),
        };
        mark_closed(&f, &mut ev.closed);
        ev.eval(&f)
    }

    pub fn eval_sentence(&self, f: &Formula) -> Result<Value> {
        self.eval(&Assignment::new(), f)
    }

    /// Parses the interpretation file format: the structure format plus
    /// optional `semiring:` and `default:` headers and `lit` lines.
    ///
    /// ```text
    /// semiring: nat
    /// universe: a b
    /// rel R/1: a
    /// default: 0
    /// lit R(a) = 3
    /// lit !R(b) = 2
    /// ```
    ///
    /// Literals not listed take the default value when one is declared and
    /// otherwise follow the canonical truth of the listed relation tuples.
    /// A `semiring:` header must agree with `spec` when both are given.
    pub fn parse(text: &str, spec: Option<&SemiringSpec>) -> Result<Self> {
        let doc = Document::parse(text)?;
        let spec = match (&doc.spec, spec) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::SpecMismatch {
                    left: a.to_string(),
                    right: b.to_string(),
                })
            }
            (Some(a), _) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => SemiringSpec::Boolean,
        };
        let structure = doc.structure()?;
        let default = doc.default.as_deref().map(|t| spec.parse_value(t)).transpose()?;
        let mut pi = KInterpretation::from_fn(
            structure.universe.clone(),
            structure.vocab.clone(),
            spec.clone(),
            |name, t, negated| match &default {
                Some(d) => d.clone(),
                None => spec.indicator(structure.holds(name, t) != negated),
            },
        )?;
        for (line, name, args, negated, value) in &doc.lits {
            let tuple = args
                .iter()
                .map(|a| structure.universe.lookup(a))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Input(format!("line {line}: {e}")))?;
            let v = spec.parse_value(value)?;
            pi.set(name, &tuple, *negated, v)?;
        }
        Ok(pi)
    }
}

impl fmt::Display for KInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "semiring: {}", self.spec)?;
        writeln!(f, "universe: {}", self.universe.names().join(" "))?;
        for (name, arity) in self.vocab.iter() {
            writeln!(f, "rel {name}/{arity}:")?;
        }
        writeln!(f, "default: 0")?;
        for (name, t, pos, neg) in self.facts() {
            let args = self.universe.format_tuple(&t);
            if !pos.is_zero() {
                writeln!(f, "lit {name}({args}) = {pos}")?;
            }
            if !neg.is_zero() {
                writeln!(f, "lit !{name}({args}) = {neg}")?;
            }
        }
        Ok(())
    }
}

/// The canonical truth interpretation of a structure over the Boolean
/// semiring.
pub fn canonical_interpretation(a: &Structure) -> KInterpretation {
    truth_interpretation(a, &SemiringSpec::Boolean)
}

/// Facts of `a` mapped to the spec's 1 or 0, negated facts complementary.
pub fn truth_interpretation(a: &Structure, spec: &SemiringSpec) -> KInterpretation {
    KInterpretation::from_fn(
        a.universe.clone(),
        a.vocab.clone(),
        spec.clone(),
        |name, t, negated| spec.indicator(a.holds(name, t) != negated),
    )
    .expect("indicator values share the spec")
}

/// Sampling parameters for [`k_equivalent_sample`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    pub max_universe: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0,
            samples: 200,
            max_universe: 3,
        }
    }
}

/// Whether `f` and `g` take the same value on every sampled model-defining
/// interpretation over `vocab` (free variables get sampled values too).
/// A `false` is a refutation; a `true` is only evidence. Evaluation errors
/// count as values, compared by error code.
pub fn k_equivalent_sample(
    f: &Formula,
    g: &Formula,
    vocab: &Vocabulary,
    spec: &SemiringSpec,
    cfg: &SampleConfig,
) -> bool {
    let mut sampler = crate::sampling::Sampler::new(cfg.seed);
    let free: BTreeSet<String> = f.free_vars().union(&g.free_vars()).cloned().collect();
    let key = |r: Result<Value>| r.map_err(|e| e.code());
    for _ in 0..cfg.samples {
        let u = sampler.universe(cfg.max_universe.max(1));
        let pi = sampler.model_defining(u.clone(), vocab, spec);
        let s: Assignment = free.iter().map(|x| (x.clone(), sampler.below(u.len()))).collect();
        if key(pi.eval(&s, f)) != key(pi.eval(&s, g)) {
            return false;
        }
    }
    true
}

struct Evaluator<'a> {
    pi: &'a KInterpretation,
    env: HashMap<String, Vec<usize>>,
    closed: HashSet<*const Formula>,
    cache: HashMap<*const Formula, Value>,
}

/// Records the addresses of sentence subformulae and returns the free
/// variables of `f`.
fn mark_closed<'a>(f: &'a Formula, closed: &mut HashSet<*const Formula>) -> BTreeSet<&'a str> {
    let free: BTreeSet<&str> = match f {
        Formula::Rel { args, .. } => args.iter().map(String::as_str).collect(),
        Formula::Eq { left, right, .. } => [left.as_str(), right.as_str()].into(),
        Formula::Bot | Formula::Top => BTreeSet::new(),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Cmp(a, _, b) => {
            let mut s = mark_closed(a, closed);
            s.extend(mark_closed(b, closed));
            s
        }
        Formula::Not(a) => mark_closed(a, closed),
        Formula::Exists(x, a) | Formula::Forall(x, a) => {
            let mut s = mark_closed(a, closed);
            s.remove(x.as_str());
            s
        }
    };
    if free.is_empty() {
        closed.insert(f as *const Formula);
    }
    free
}

impl Evaluator<'_> {
    fn lookup(&self, x: &str) -> Result<usize> {
        self.env
            .get(x)
            .and_then(|stack| stack.last().copied())
            .ok_or_else(|| Error::UnboundVariable(x.to_string()))
    }

    fn eval(&mut self, f: &Formula) -> Result<Value> {
        let key = f as *const Formula;
        let closed = self.closed.contains(&key);
        if closed {
            if let Some(v) = self.cache.get(&key) {
                return Ok(v.clone());
            }
        }
        let v = self.eval_uncached(f)?;
        if closed {
            self.cache.insert(key, v.clone());
        }
        Ok(v)
    }

    fn eval_uncached(&mut self, f: &Formula) -> Result<Value> {
        let spec = &self.pi.spec;
        match f {
            Formula::Rel { name, args, negated } => {
                let tuple = args.iter().map(|a| self.lookup(a)).collect::<Result<Vec<_>>>()?;
                self.pi.get(name, &tuple, *negated).cloned()
            }
            Formula::Eq { left, right, negated } => {
                let same = self.lookup(left)? == self.lookup(right)?;
                Ok(spec.indicator(same != *negated))
            }
            Formula::Bot => Ok(spec.zero()),
            Formula::Top => Ok(spec.one()),
            Formula::And(a, b) => self.eval(a)?.mul(&self.eval(b)?),
            Formula::Or(a, b) => self.eval(a)?.add(&self.eval(b)?),
            Formula::Not(a) => {
                let n = a.negation_nnf();
                self.eval_owned(&n)
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let mut acc = if universal { spec.one() } else { spec.zero() };
                for e in 0..self.pi.universe.len() {
                    self.env.entry(x.clone()).or_default().push(e);
                    let v = self.eval(body);
                    self.env.get_mut(x).unwrap().pop();
                    let v = v?;
                    acc = if universal { acc.mul(&v)? } else { acc.add(&v)? };
                }
                Ok(acc)
            }
            Formula::Cmp(a, op, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                let holds = match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Neq => x != y,
                    CmpOp::Le => x.nat_leq(&y)?,
                    CmpOp::Nle => !x.nat_leq(&y)?,
                };
                Ok(spec.indicator(holds))
            }
        }
    }

    /// Evaluates a formula not owned by the evaluated tree, bypassing the
    /// address-keyed cache.
    fn eval_owned(&mut self, f: &Formula) -> Result<Value> {
        let saved = std::mem::take(&mut self.closed);
        let v = self.eval_uncached(f);
        self.closed = saved;
        v
    }
}

/// Parsed line-oriented document shared by structure and interpretation
/// files.
struct Document {
    spec: Option<SemiringSpec>,
    universe: Option<Vec<String>>,
    relations: Vec<(usize, String, usize, Vec<Vec<String>>)>,
    default: Option<String>,
    lits: Vec<(usize, String, Vec<String>, bool, String)>,
}

impl Document {
    fn parse(text: &str) -> Result<Self> {
        let mut doc = Document {
            spec: None,
            universe: None,
            relations: Vec::new(),
            default: None,
            lits: Vec::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let bad = |msg: &str| Error::Input(format!("line {n}: {msg}"));
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("semiring:") {
                doc.spec = Some(rest.trim().parse()?);
            } else if let Some(rest) = line.strip_prefix("universe:") {
                doc.universe = Some(rest.split_whitespace().map(String::from).collect());
            } else if let Some(rest) = line.strip_prefix("default:") {
                doc.default = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("rel ") {
                let (head, body) = rest.split_once(':').ok_or_else(|| bad("missing ':'"))?;
                let (name, arity) = head
                    .trim()
                    .split_once('/')
                    .ok_or_else(|| bad("expected R/arity"))?;
                let arity: usize = arity.trim().parse().map_err(|_| bad("invalid arity"))?;
                let mut tuples = Vec::new();
                for part in body.split('|').map(str::trim).filter(|p| !p.is_empty()) {
                    let elems: Vec<String> = if part == "()" {
                        Vec::new()
                    } else {
                        part.split(|c: char| c.is_whitespace() || c == ',')
                            .filter(|e| !e.is_empty())
                            .map(String::from)
                            .collect()
                    };
                    if elems.len() != arity {
                        return Err(Error::Arity {
                            name: name.trim().to_string(),
                            expected: arity,
                            found: elems.len(),
                        });
                    }
                    tuples.push(elems);
                }
                doc.relations.push((n, name.trim().to_string(), arity, tuples));
            } else if let Some(rest) = line.strip_prefix("lit ") {
                let (lhs, value) = rest.split_once('=').ok_or_else(|| bad("missing '='"))?;
                let lhs = lhs.trim();
                let (negated, lhs) = match lhs.strip_prefix('!') {
                    Some(l) => (true, l.trim()),
                    None => (false, lhs),
                };
                let (name, args) = lhs.split_once('(').ok_or_else(|| bad("expected R(...)"))?;
                let args = args.strip_suffix(')').ok_or_else(|| bad("missing ')'"))?;
                let args: Vec<String> = args
                    .split(',')
                    .map(str::trim)
                    .filter(|a| !a.is_empty())
                    .map(String::from)
                    .collect();
                doc.lits.push((
                    n,
                    name.trim().to_string(),
                    args,
                    negated,
                    value.trim().to_string(),
                ));
            } else {
                return Err(bad("unrecognised line"));
            }
        }
        Ok(doc)
    }

    fn structure(&self) -> Result<Structure> {
        let names = self
            .universe
            .clone()
            .ok_or_else(|| Error::Input("missing universe: line".into()))?;
        let universe = Arc::new(Universe::new(names)?);
        let mut vocab = Vocabulary::new();
        for (_, name, arity, _) in &self.relations {
            vocab.insert(name, *arity)?;
        }
        let mut s = Structure::new(universe.clone(), vocab);
        for (line, name, _, tuples) in &self.relations {
            for t in tuples {
                let idx = t
                    .iter()
                    .map(|e| universe.lookup(e))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::Input(format!("line {line}: {e}")))?;
                s.insert(name, idx)?;
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_fo;

    fn unary_structure() -> Structure {
        let u = Arc::new(Universe::new(["a", "b"]).unwrap());
        let mut s = Structure::new(u, Vocabulary::new().with("R", 1));
        s.insert("R", vec![0]).unwrap();
        s
    }

    #[test]
    fn canonical_truth_values() {
        let pi = canonical_interpretation(&unary_structure());
        assert_eq!(pi.get("R", &[0], false).unwrap(), &Value::Bool(true));
        assert_eq!(pi.get("R", &[0], true).unwrap(), &Value::Bool(false));
        assert_eq!(pi.get("R", &[1], false).unwrap(), &Value::Bool(false));
        assert_eq!(pi.get("R", &[1], true).unwrap(), &Value::Bool(true));
        assert!(pi.is_model_defining());
        let v = Vocabulary::new().with("R", 1);
        assert_eq!(
            pi.eval_sentence(&parse_fo("exists x. R(x)", &v).unwrap())
                .unwrap(),
            Value::Bool(true)
        );
        assert_eq!(
            pi.eval_sentence(&parse_fo("forall x. R(x)", &v).unwrap())
                .unwrap(),
            Value::Bool(false)
        );
    }

    #[test]
    fn tropical_existential_is_a_minimum() {
        let u = Arc::new(Universe::new(["a", "b"]).unwrap());
        let v = Vocabulary::new().with("R", 1);
        let pi = KInterpretation::from_fn(u, v.clone(), SemiringSpec::Tropical, |_, t, neg| {
            match (t[0], neg) {
                (0, false) => SemiringSpec::Tropical.parse_value("2").unwrap(),
                (1, false) => SemiringSpec::Tropical.parse_value("5").unwrap(),
                _ => SemiringSpec::Tropical.zero(),
            }
        })
        .unwrap();
        let f = parse_fo("exists x. R(x)", &v).unwrap();
        assert_eq!(
            pi.eval_sentence(&f).unwrap(),
            SemiringSpec::Tropical.parse_value("2").unwrap()
        );
    }

    #[test]
    fn equality_atom_and_unbound_variables() {
        let pi = canonical_interpretation(&unary_structure());
        let v = Vocabulary::new().with("R", 1);
        let s: Assignment = [("x".to_string(), 1)].into();
        assert_eq!(
            pi.eval(&s, &parse_fo("x = x", &v).unwrap()).unwrap(),
            Value::Bool(true)
        );
        let err = pi.eval(&s, &parse_fo("R(y)", &v).unwrap()).unwrap_err();
        assert_eq!(err, Error::UnboundVariable("y".into()));
        let err = pi.eval(&s, &parse_fo("bot & R(y)", &v).unwrap()).unwrap_err();
        assert_eq!(err.code(), "UnboundVariable");
    }

    #[test]
    fn model_defining_detection() {
        let u = Arc::new(Universe::new(["a"]).unwrap());
        let v = Vocabulary::new().with("R", 1);
        let both_zero = KInterpretation::from_fn(u.clone(), v.clone(), SemiringSpec::Natural, |_, _, _| {
            Value::natural(0u32)
        })
        .unwrap();
        assert!(!both_zero.is_model_defining());
        let both_nonzero = KInterpretation::from_fn(u, v, SemiringSpec::Natural, |_, _, neg| {
            Value::natural(if neg { 3u32 } else { 2u32 })
        })
        .unwrap();
        assert!(!both_nonzero.is_model_defining());
    }

    #[test]
    fn order_comparison_needs_ordered_semiring() {
        let u = Arc::new(Universe::new(["a"]).unwrap());
        let v = Vocabulary::new().with("R", 1);
        let spec = SemiringSpec::int_mod(4).unwrap();
        let pi =
            KInterpretation::from_fn(u, v.clone(), spec.clone(), |_, _, neg| spec.indicator(!neg)).unwrap();
        let f = parse_fo("(exists x. R(x)) <= (forall x. R(x))", &v).unwrap();
        assert_eq!(pi.eval_sentence(&f).unwrap_err().code(), "NotOrdered");
    }

    #[test]
    fn negation_goes_through_nnf() {
        let u = Arc::new(Universe::new(["a", "b"]).unwrap());
        let v = Vocabulary::new().with("R", 1);
        let pi = KInterpretation::from_fn(u, v.clone(), SemiringSpec::Natural, |_, t, neg| {
            Value::natural(if neg { 0u32 } else { t[0] as u32 + 2 })
        })
        .unwrap();
        let f = parse_fo("!(exists x. !R(x))", &v).unwrap();
        assert_eq!(pi.eval_sentence(&f).unwrap(), Value::natural(6u32));
        let g = parse_fo("!((exists x. R(x)) = bot)", &v).unwrap();
        assert_eq!(pi.eval_sentence(&g).unwrap(), Value::natural(1u32));
    }

    #[test]
    fn file_formats_round_trip() {
        let text =
            "semiring: nat\nuniverse: a b\nrel R/2: a a | a b\ndefault: 0\nlit R(a,a) = 3\nlit !R(b,b) = 2\n";
        let pi = KInterpretation::parse(text, None).unwrap();
        assert_eq!(pi.get("R", &[0, 0], false).unwrap(), &Value::natural(3u32));
        assert_eq!(pi.get("R", &[0, 1], false).unwrap(), &Value::natural(0u32));
        assert_eq!(pi.get("R", &[1, 1], true).unwrap(), &Value::natural(2u32));
        let again = KInterpretation::parse(&pi.to_string(), None).unwrap();
        assert_eq!(pi, again);

        let canonical =
            KInterpretation::parse("universe: a b\nrel R/1: a\n", Some(&SemiringSpec::Natural)).unwrap();
        assert_eq!(canonical.get("R", &[0], false).unwrap(), &Value::natural(1u32));
        assert_eq!(canonical.get("R", &[1], true).unwrap(), &Value::natural(1u32));

        let s = unary_structure();
        assert_eq!(Structure::parse(&s.to_string()).unwrap(), s);
        assert!(Structure::parse("universe: a\nrel R/1: b\n").is_err());
        assert!(Structure::parse("rel R/1: a\n").is_err());
        assert!(
            KInterpretation::parse("semiring: nat\nuniverse: a\n", Some(&SemiringSpec::Boolean)).is_err()
        );
    }

    #[test]
    fn tuple_enumeration_order() {
        let u = Universe::of_size(2);
        let all: Vec<Vec<usize>> = u.tuples(2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(u.tuples(0).count(), 1);
        for (i, t) in u.tuples(3).enumerate() {
            assert_eq!(u.tuple_index(&t), i);
        }
    }

    #[test]
    fn sampled_equivalence() {
        let vocab = Vocabulary::new().with("R", 1).with("P", 0);
        let cfg = SampleConfig::default();
        let le = parse_fo("(exists x. R(x)) <= P()", &vocab).unwrap();
        let imp = parse_fo("(exists x. R(x)) -> P()", &vocab).unwrap();
        assert!(k_equivalent_sample(
            &le,
            &imp,
            &vocab,
            &SemiringSpec::Boolean,
            &cfg
        ));
        assert!(k_equivalent_sample(
            &le,
            &le,
            &vocab,
            &SemiringSpec::Natural,
            &cfg
        ));
        let twice = parse_fo("R(x) | R(x)", &vocab).unwrap();
        let once = parse_fo("R(x)", &vocab).unwrap();
        assert!(k_equivalent_sample(
            &twice,
            &once,
            &vocab,
            &SemiringSpec::Boolean,
            &cfg
        ));
        assert!(!k_equivalent_sample(
            &twice,
            &once,
            &vocab,
            &SemiringSpec::Natural,
            &cfg
        ));
    }
}
