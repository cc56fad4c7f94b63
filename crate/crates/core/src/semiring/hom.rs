use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{SemiringSpec, Value};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomKind {
    Identity,
    /// `a ↦ 0 if a = 0 else 1` into the Boolean semiring.
    Characteristic,
    /// `N → Z_n` (or `Z_m → Z_n` when `n | m`).
    ModReduction,
    /// `N → Q≥0`.
    NaturalInclusion,
    /// Substitution of a target value for every indeterminate of `N[X]`.
    PolyEvaluation(BTreeMap<String, Value>),
}

/// A map between two semirings.
///
/// The characteristic map is only a homomorphism when the source is
/// positive; it is still accepted for other sources so that the failure can
/// be observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: SemiringSpec,
    pub target: SemiringSpec,
    pub kind: HomKind,
}

impl Homomorphism {
    pub fn identity(spec: SemiringSpec) -> Self {
        Homomorphism {
            source: spec.clone(),
            target: spec,
            kind: HomKind::Identity,
        }
    }

    pub fn characteristic(source: SemiringSpec) -> Self {
        Homomorphism {
            source,
            target: SemiringSpec::Boolean,
            kind: HomKind::Characteristic,
        }
    }

    pub fn mod_reduction(source: SemiringSpec, n: u64) -> Result<Self> {
        let target = SemiringSpec::int_mod(n)?;
        match source {
            SemiringSpec::Natural => {}
            SemiringSpec::IntMod(m) if m % n == 0 => {}
            other => return Err(Error::UnsupportedSpec(other.to_string())),
        }
        Ok(Homomorphism {
            source,
            target,
            kind: HomKind::ModReduction,
        })
    }

    pub fn natural_inclusion() -> Self {
        Homomorphism {
            source: SemiringSpec::Natural,
            target: SemiringSpec::Rational,
            kind: HomKind::NaturalInclusion,
        }
    }

    /// Substitution homomorphism `N[X] → target`. Every indeterminate of the
    /// source must be bound to a value of `target`.
    pub fn poly_evaluation(
        source: SemiringSpec,
        target: SemiringSpec,
        sub: BTreeMap<String, Value>,
    ) -> Result<Self> {
        let SemiringSpec::ProvPoly(vars) = &source else {
            return Err(Error::UnsupportedSpec(source.to_string()));
        };
        for v in vars.iter() {
            let value = sub.get(v).ok_or_else(|| Error::MissingIndeterminate(v.clone()))?;
            if value.spec() != target {
                return Err(Error::SpecMismatch {
                    left: value.spec().to_string(),
                    right: target.to_string(),
                });
            }
        }
        Ok(Homomorphism {
            source,
            target,
            kind: HomKind::PolyEvaluation(sub),
        })
    }

    pub fn apply(&self, a: &Value) -> Result<Value> {
        if a.spec() != self.source {
            return Err(Error::SpecMismatch {
                left: a.spec().to_string(),
                right: self.source.to_string(),
            });
        }
        match &self.kind {
            HomKind::Identity => Ok(a.clone()),
            HomKind::Characteristic => Ok(a.characteristic()),
            HomKind::ModReduction => {
                let SemiringSpec::IntMod(n) = self.target else {
                    unreachable!()
                };
                match a {
                    Value::Nat(x) => Ok(self.target.from_natural(x)),
                    Value::Mod { residue, .. } => Ok(Value::residue(n, *residue)),
                    _ => unreachable!("source checked"),
                }
            }
            HomKind::NaturalInclusion => match a {
                Value::Nat(x) => Ok(Value::Rat(BigRational::from_integer(BigInt::from(x.clone())))),
                _ => unreachable!("source checked"),
            },
            HomKind::PolyEvaluation(sub) => {
                let p = a.as_poly().expect("source checked");
                let mut acc = self.target.zero();
                for (mono, coeff) in p.terms() {
                    let mut term = self.target.from_natural(coeff);
                    for (name, &e) in p.vars().iter().zip(mono) {
                        if e > 0 {
                            let v = sub
                                .get(name)
                                .ok_or_else(|| Error::MissingIndeterminate(name.clone()))?;
                            term = term.mul(&v.pow(u64::from(e)))?;
                        }
                    }
                    acc = acc.add(&term)?;
                }
                Ok(acc)
            }
        }
    }
}
