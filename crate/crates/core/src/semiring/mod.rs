//! Commutative semirings with exact arithmetic.
//!
//! A [`SemiringSpec`] names one of the shipped carriers; a [`Value`] is an
//! element of such a carrier in canonical form. Values of different specs
//! never mix: every binary operation checks that both operands share a
//! spec and reports [`Error::SpecMismatch`] otherwise.

mod decompose;
mod hom;
mod poly;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use decompose::decompositions;
pub use hom::{HomKind, Homomorphism};
pub use poly::Polynomial;

/// Capability flags of a semiring, fixed per kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flags {
    /// `+`-positive and free of zero divisors.
    pub positive: bool,
    /// `a + b = 0` only when `a = b = 0`.
    pub plus_positive: bool,
    /// `a <= b iff exists c: a + c = b` is antisymmetric.
    pub naturally_ordered: bool,
    /// Every nonzero element is a sum of two nonzero elements.
    pub plus_dense: bool,
    /// Every element has finitely many additive decompositions.
    pub finitely_decomposable: bool,
}

/// One of the shipped commutative semirings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SemiringSpec {
    Boolean,
    Natural,
    /// Non-negative rationals with the usual operations.
    Rational,
    /// `(Q ∪ {∞}, min, +, ∞, 0)`.
    Tropical,
    /// `([0,1], max, max(0, a+b-1), 0, 1)`.
    Lukasiewicz,
    /// Integers modulo `n >= 2`.
    IntMod(u64),
    /// `N[X]` over an ordered list of indeterminates.
    ProvPoly(Arc<[String]>),
}

impl SemiringSpec {
    pub fn int_mod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input(format!("modulus must be at least 2, got {n}")));
        }
        Ok(SemiringSpec::IntMod(n))
    }

    pub fn prov_poly<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            if !is_identifier(n) {
                return Err(Error::Input(format!("invalid indeterminate name {n:?}")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::Input(format!("duplicate indeterminate {n}")));
            }
        }
        Ok(SemiringSpec::ProvPoly(names.into()))
    }

    pub fn flags(&self) -> Flags {
        let f = |positive, naturally_ordered, plus_dense, finitely_decomposable| Flags {
            positive,
            // Every shipped kind except the residue rings.
            plus_positive: !matches!(self, SemiringSpec::IntMod(_)),
            naturally_ordered,
            plus_dense,
            finitely_decomposable,
        };
        match self {
            SemiringSpec::Boolean => f(true, true, true, true),
            SemiringSpec::Natural => f(true, true, false, true),
            SemiringSpec::Rational => f(true, true, true, false),
            SemiringSpec::Tropical => f(true, true, true, false),
            // 1/2 · 1/2 = 0.
            SemiringSpec::Lukasiewicz => f(false, true, true, false),
            SemiringSpec::IntMod(_) => f(false, false, false, true),
            SemiringSpec::ProvPoly(_) => f(true, true, false, true),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.flags().positive
    }

    pub fn is_plus_positive(&self) -> bool {
        self.flags().plus_positive
    }

    pub fn zero(&self) -> Value {
        match self {
            SemiringSpec::Boolean => Value::Bool(false),
            SemiringSpec::Natural => Value::Nat(BigUint::zero()),
            SemiringSpec::Rational => Value::Rat(BigRational::zero()),
            SemiringSpec::Tropical => Value::Trop(Tropical::Infinity),
            SemiringSpec::Lukasiewicz => Value::Luk(BigRational::zero()),
            SemiringSpec::IntMod(n) => Value::Mod {
                modulus: *n,
                residue: 0,
            },
            SemiringSpec::ProvPoly(vars) => Value::Poly(Polynomial::zero(vars.clone())),
        }
    }

    pub fn one(&self) -> Value {
        match self {
            SemiringSpec::Boolean => Value::Bool(true),
            SemiringSpec::Natural => Value::Nat(BigUint::one()),
            SemiringSpec::Rational => Value::Rat(BigRational::one()),
            SemiringSpec::Tropical => Value::Trop(Tropical::Finite(BigRational::zero())),
            SemiringSpec::Lukasiewicz => Value::Luk(BigRational::one()),
            SemiringSpec::IntMod(n) => Value::Mod {
                modulus: *n,
                residue: 1,
            },
            SemiringSpec::ProvPoly(vars) => Value::Poly(Polynomial::constant(vars.clone(), 1u32)),
        }
    }

    /// `1` if `b` holds, `0` otherwise.
    pub fn indicator(&self, b: bool) -> Value {
        if b {
            self.one()
        } else {
            self.zero()
        }
    }

    /// The `n`-fold sum `1 + ... + 1`.
    pub fn from_natural(&self, n: &BigUint) -> Value {
        match self {
            SemiringSpec::Boolean => Value::Bool(!n.is_zero()),
            SemiringSpec::Natural => Value::Nat(n.clone()),
            SemiringSpec::Rational => Value::Rat(BigRational::from_integer(BigInt::from(n.clone()))),
            SemiringSpec::Tropical => {
                if n.is_zero() {
                    self.zero()
                } else {
                    self.one()
                }
            }
            SemiringSpec::Lukasiewicz => Value::Luk(if n.is_zero() {
                BigRational::zero()
            } else {
                BigRational::one()
            }),
            SemiringSpec::IntMod(m) => Value::Mod {
                modulus: *m,
                residue: (n % BigUint::from(*m)).to_u64().unwrap_or(0),
            },
            SemiringSpec::ProvPoly(vars) => Value::Poly(Polynomial::constant(vars.clone(), n.clone())),
        }
    }

    pub fn sum<'a, I>(&self, values: I) -> Result<Value>
    where
        I: IntoIterator<Item = &'a Value>,
    {
        values.into_iter().try_fold(self.zero(), |acc, v| acc.add(v))
    }

    pub fn product<'a, I>(&self, values: I) -> Result<Value>
    where
        I: IntoIterator<Item = &'a Value>,
    {
        values.into_iter().try_fold(self.one(), |acc, v| acc.mul(v))
    }

    /// Parses a value literal in this semiring's syntax.
    pub fn parse_value(&self, text: &str) -> Result<Value> {
        let text = text.trim();
        let invalid = || Error::InvalidValue {
            literal: text.to_string(),
            spec: self.to_string(),
        };
        match self {
            SemiringSpec::Boolean => match text {
                "0" | "false" => Ok(Value::Bool(false)),
                "1" | "true" => Ok(Value::Bool(true)),
                _ => Err(invalid()),
            },
            SemiringSpec::Natural => BigUint::from_str(text).map(Value::Nat).map_err(|_| invalid()),
            SemiringSpec::Rational => {
                let r = parse_rational(text).ok_or_else(invalid)?;
                Value::rational(r).map_err(|_| invalid())
            }
            SemiringSpec::Tropical => {
                if matches!(text, "inf" | "∞" | "+inf") {
                    Ok(Value::Trop(Tropical::Infinity))
                } else {
                    parse_rational(text)
                        .map(|r| Value::Trop(Tropical::Finite(r)))
                        .ok_or_else(invalid)
                }
            }
            SemiringSpec::Lukasiewicz => {
                let r = parse_rational(text).ok_or_else(invalid)?;
                Value::lukasiewicz(r).map_err(|_| invalid())
            }
            SemiringSpec::IntMod(n) => {
                let r: u64 = text.parse().map_err(|_| invalid())?;
                if r >= *n {
                    return Err(invalid());
                }
                Ok(Value::Mod {
                    modulus: *n,
                    residue: r,
                })
            }
            SemiringSpec::ProvPoly(vars) => Polynomial::parse(vars.clone(), text)
                .map(Value::Poly)
                .map_err(|_| invalid()),
        }
    }

    fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SemiringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringSpec::Boolean => write!(f, "boolean"),
            SemiringSpec::Natural => write!(f, "nat"),
            SemiringSpec::Rational => write!(f, "rat"),
            SemiringSpec::Tropical => write!(f, "tropical"),
            SemiringSpec::Lukasiewicz => write!(f, "lukasiewicz"),
            SemiringSpec::IntMod(n) => write!(f, "zmod:{n}"),
            SemiringSpec::ProvPoly(vars) => write!(f, "poly:{}", vars.join(",")),
        }
    }
}

impl FromStr for SemiringSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "boolean" | "bool" => return Ok(SemiringSpec::Boolean),
            "nat" | "natural" => return Ok(SemiringSpec::Natural),
            "rat" | "rational" => return Ok(SemiringSpec::Rational),
            "tropical" => return Ok(SemiringSpec::Tropical),
            "lukasiewicz" => return Ok(SemiringSpec::Lukasiewicz),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("zmod:") {
            let n: u64 = n
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("invalid modulus in {s:?}")))?;
            return SemiringSpec::int_mod(n);
        }
        if let Some(names) = s.strip_prefix("poly:") {
            let names: Vec<&str> = names
                .split(',')
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .collect();
            return SemiringSpec::prov_poly(names);
        }
        Err(Error::Input(format!("unknown semiring {s:?}")))
    }
}

/// Tropical element: a rational or `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tropical {
    Finite(BigRational),
    Infinity,
}

/// A semiring element in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Nat(BigUint),
    Rat(BigRational),
    Trop(Tropical),
    Luk(BigRational),
    Mod { modulus: u64, residue: u64 },
    Poly(Polynomial),
}

impl Value {
    pub fn natural(n: impl Into<BigUint>) -> Value {
        Value::Nat(n.into())
    }

    pub fn rational(r: BigRational) -> Result<Value> {
        if r.is_negative() {
            return Err(Error::InvalidValue {
                literal: r.to_string(),
                spec: "rat".into(),
            });
        }
        Ok(Value::Rat(r))
    }

    /// Shorthand for the non-negative rational `num/den`.
    pub fn ratio(num: u64, den: u64) -> Value {
        Value::Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn lukasiewicz(r: BigRational) -> Result<Value> {
        if r.is_negative() || r > BigRational::one() {
            return Err(Error::InvalidValue {
                literal: r.to_string(),
                spec: "lukasiewicz".into(),
            });
        }
        Ok(Value::Luk(r))
    }

    pub fn tropical(r: BigRational) -> Value {
        Value::Trop(Tropical::Finite(r))
    }

    pub fn residue(modulus: u64, r: u64) -> Value {
        Value::Mod {
            modulus,
            residue: r % modulus,
        }
    }

    pub fn spec(&self) -> SemiringSpec {
        match self {
            Value::Bool(_) => SemiringSpec::Boolean,
            Value::Nat(_) => SemiringSpec::Natural,
            Value::Rat(_) => SemiringSpec::Rational,
            Value::Trop(_) => SemiringSpec::Tropical,
            Value::Luk(_) => SemiringSpec::Lukasiewicz,
            Value::Mod { modulus, .. } => SemiringSpec::IntMod(*modulus),
            Value::Poly(p) => SemiringSpec::ProvPoly(p.vars().clone()),
        }
    }

    fn same_spec(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Bool(_), Value::Bool(_))
            | (Value::Nat(_), Value::Nat(_))
            | (Value::Rat(_), Value::Rat(_))
            | (Value::Trop(_), Value::Trop(_))
            | (Value::Luk(_), Value::Luk(_)) => true,
            (Value::Mod { modulus: m, .. }, Value::Mod { modulus: n, .. }) => m == n,
            (Value::Poly(p), Value::Poly(q)) => p.vars() == q.vars(),
            _ => false,
        }
    }

    pub(crate) fn check_spec(&self, other: &Value) -> Result<()> {
        if self.same_spec(other) {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                left: self.spec().name(),
                right: other.spec().name(),
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Bool(b) => !b,
            Value::Nat(n) => n.is_zero(),
            Value::Rat(r) | Value::Luk(r) => r.is_zero(),
            Value::Trop(t) => matches!(t, Tropical::Infinity),
            Value::Mod { residue, .. } => *residue == 0,
            Value::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.spec().one()
    }

    pub fn add(&self, other: &Value) -> Result<Value> {
        self.check_spec(other)?;
        Ok(match (self, other) {
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a || *b),
            (Value::Nat(a), Value::Nat(b)) => Value::Nat(a + b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Trop(a), Value::Trop(b)) => Value::Trop(match (a, b) {
                (Tropical::Infinity, x) | (x, Tropical::Infinity) => x.clone(),
                (Tropical::Finite(x), Tropical::Finite(y)) => Tropical::Finite(x.min(y).clone()),
            }),
            (Value::Luk(a), Value::Luk(b)) => Value::Luk(a.max(b).clone()),
            (Value::Mod { modulus, residue: a }, Value::Mod { residue: b, .. }) => Value::Mod {
                modulus: *modulus,
                residue: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
            },
            (Value::Poly(a), Value::Poly(b)) => Value::Poly(a.add(b)),
            _ => unreachable!("spec checked"),
        })
    }

    pub fn mul(&self, other: &Value) -> Result<Value> {
        self.check_spec(other)?;
        Ok(match (self, other) {
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a && *b),
            (Value::Nat(a), Value::Nat(b)) => Value::Nat(a * b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (Value::Trop(a), Value::Trop(b)) => Value::Trop(match (a, b) {
                (Tropical::Finite(x), Tropical::Finite(y)) => Tropical::Finite(x + y),
                _ => Tropical::Infinity,
            }),
            (Value::Luk(a), Value::Luk(b)) => {
                let s = a + b - BigRational::one();
                Value::Luk(if s.is_negative() { BigRational::zero() } else { s })
            }
            (Value::Mod { modulus, residue: a }, Value::Mod { residue: b, .. }) => Value::Mod {
                modulus: *modulus,
                residue: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
            },
            (Value::Poly(a), Value::Poly(b)) => Value::Poly(a.mul(b)),
            _ => unreachable!("spec checked"),
        })
    }

    /// `self^exp` by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Value {
        let mut base = self.clone();
        let mut acc = self.spec().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same spec");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same spec");
            }
        }
        acc
    }

    /// The natural preorder `a <= b iff exists c: a + c = b`.
    pub fn nat_leq(&self, other: &Value) -> Result<bool> {
        self.check_spec(other)?;
        Ok(match (self, other) {
            (Value::Bool(a), Value::Bool(b)) => a <= b,
            (Value::Nat(a), Value::Nat(b)) => a <= b,
            (Value::Rat(a), Value::Rat(b)) | (Value::Luk(a), Value::Luk(b)) => a <= b,
            (Value::Trop(a), Value::Trop(b)) => match (a, b) {
                (_, Tropical::Infinity) => matches!(a, Tropical::Infinity),
                (Tropical::Infinity, Tropical::Finite(_)) => true,
                (Tropical::Finite(x), Tropical::Finite(y)) => y <= x,
            },
            (Value::Mod { modulus, .. }, _) => {
                return Err(Error::NotOrdered(SemiringSpec::IntMod(*modulus).name()))
            }
            (Value::Poly(a), Value::Poly(b)) => a.coefficientwise_leq(b),
            _ => unreachable!("spec checked"),
        })
    }

    /// The characteristic map into the Boolean semiring.
    pub fn characteristic(&self) -> Value {
        Value::Bool(!self.is_zero())
    }

    /// Whether `a·b = a·c` implies `b = c` for all `b`, `c`.
    pub fn is_cancellative(&self) -> bool {
        match self {
            Value::Bool(b) => *b,
            Value::Nat(_) | Value::Rat(_) | Value::Trop(_) | Value::Poly(_) => !self.is_zero(),
            // a < 1 sends every b <= 1 - a to 0.
            Value::Luk(r) => r.is_one(),
            Value::Mod { modulus, residue } => residue.gcd(modulus) == 1,
        }
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        match self {
            Value::Poly(p) => Some(p),
            _ => None,
        }
    }

    /// Exact rational view for the ordered numeric kinds.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Value::Bool(b) => Some(if *b {
                BigRational::one()
            } else {
                BigRational::zero()
            }),
            Value::Nat(n) => Some(BigRational::from_integer(BigInt::from(n.clone()))),
            Value::Rat(r) | Value::Luk(r) => Some(r.clone()),
            Value::Trop(Tropical::Finite(r)) => Some(r.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{}", u8::from(*b)),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Rat(r) | Value::Luk(r) => write_rational(f, r),
            Value::Trop(Tropical::Infinity) => write!(f, "inf"),
            Value::Trop(Tropical::Finite(r)) => write_rational(f, r),
            Value::Mod { residue, .. } => write!(f, "{residue}"),
            Value::Poly(p) => write!(f, "{p}"),
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `0.25`.
pub(crate) fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part = BigInt::from_str(if int.is_empty() || int == "-" { "0" } else { int }).ok()?;
        let frac_part = BigInt::from_str(frac).ok()?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let mut r = BigRational::from_integer(int_part.abs()) + BigRational::new(frac_part, scale);
        if negative {
            r = -r;
        }
        return Some(r);
    }
    BigInt::from_str(text).ok().map(BigRational::from_integer)
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(spec: &SemiringSpec, s: &str) -> Value {
        spec.parse_value(s).unwrap()
    }

    #[test]
    fn tropical_addition_is_min() {
        let t = SemiringSpec::Tropical;
        assert_eq!(v(&t, "3").add(&v(&t, "5")).unwrap(), v(&t, "3"));
        assert_eq!(v(&t, "3").add(&t.zero()).unwrap(), v(&t, "3"));
        assert_eq!(v(&t, "inf").mul(&v(&t, "-2")).unwrap(), t.zero());
    }

    #[test]
    fn zmod4_two_is_a_zero_divisor() {
        let z = SemiringSpec::IntMod(4);
        assert_eq!(v(&z, "2").add(&v(&z, "2")).unwrap(), z.zero());
        assert_eq!(v(&z, "2").mul(&v(&z, "2")).unwrap(), z.zero());
    }

    #[test]
    fn lukasiewicz_one_is_identity() {
        let l = SemiringSpec::Lukasiewicz;
        assert_eq!(l.one().mul(&l.one()).unwrap(), l.one());
        assert_eq!(v(&l, "3/4").mul(&l.one()).unwrap(), v(&l, "3/4"));
        assert_eq!(v(&l, "1/4").mul(&v(&l, "1/2")).unwrap(), l.zero());
        assert_eq!(v(&l, "3/4").mul(&v(&l, "1/2")).unwrap(), v(&l, "1/4"));
    }

    #[test]
    fn spec_mismatch_is_reported() {
        let err = Value::natural(1u32).add(&Value::Bool(true)).unwrap_err();
        assert_eq!(err.code(), "SpecMismatch");
        let a = SemiringSpec::IntMod(4).one();
        let b = SemiringSpec::IntMod(5).one();
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn natural_order_per_kind() {
        let n = SemiringSpec::Natural;
        assert!(v(&n, "2").nat_leq(&v(&n, "5")).unwrap());
        let t = SemiringSpec::Tropical;
        assert!(v(&t, "5").nat_leq(&v(&t, "3")).unwrap());
        assert!(!v(&t, "3").nat_leq(&v(&t, "5")).unwrap());
        assert!(t.zero().nat_leq(&v(&t, "7")).unwrap());
        let q = SemiringSpec::Rational;
        assert!(!v(&q, "3/4").nat_leq(&v(&q, "1/4")).unwrap());
        let z = SemiringSpec::IntMod(4);
        assert_eq!(z.one().nat_leq(&z.one()).unwrap_err().code(), "NotOrdered");
    }

    #[test]
    fn characteristic_map() {
        let q = SemiringSpec::Rational;
        assert_eq!(v(&q, "3/4").characteristic(), Value::Bool(true));
        assert_eq!(q.zero().characteristic(), Value::Bool(false));
        let p = SemiringSpec::prov_poly(["p", "q"]).unwrap();
        assert_eq!(v(&p, "2*p + q").characteristic(), Value::Bool(true));
    }

    #[test]
    fn positivity_table() {
        assert!(SemiringSpec::Boolean.is_positive());
        assert!(!SemiringSpec::IntMod(2).is_positive());
        assert!(!SemiringSpec::IntMod(4).is_positive());
        assert!(!SemiringSpec::Natural.flags().plus_dense);
        assert!(!SemiringSpec::Rational.flags().finitely_decomposable);
    }

    #[test]
    fn cancellative_elements() {
        let z = SemiringSpec::IntMod(4);
        assert!(!v(&z, "2").is_cancellative());
        assert!(v(&z, "3").is_cancellative());
        assert!(v(&SemiringSpec::Natural, "3").is_cancellative());
        for spec in [
            SemiringSpec::Boolean,
            SemiringSpec::Natural,
            SemiringSpec::Tropical,
            z,
        ] {
            assert!(spec.one().is_cancellative());
        }
    }

    #[test]
    fn natural_three_cancellative_exhaustive() {
        let n = SemiringSpec::Natural;
        let three = v(&n, "3");
        for b in 0u32..=20 {
            for c in 0u32..=20 {
                let lhs = three.mul(&Value::natural(b)).unwrap();
                let rhs = three.mul(&Value::natural(c)).unwrap();
                assert_eq!(lhs == rhs, b == c);
            }
        }
    }

    #[test]
    fn literal_round_trip() {
        let cases = [
            ("boolean", "1"),
            ("nat", "12345678901234567890"),
            ("rat", "3/4"),
            ("tropical", "inf"),
            ("tropical", "-5/2"),
            ("lukasiewicz", "1/3"),
            ("zmod:7", "6"),
            ("poly:p1,p2,q", "2*p1*p2 + q"),
        ];
        for (spec, lit) in cases {
            let spec: SemiringSpec = spec.parse().unwrap();
            let value = spec.parse_value(lit).unwrap();
            assert_eq!(value.to_string(), lit);
            assert_eq!(spec.parse_value(&value.to_string()).unwrap(), value);
        }
        assert_eq!(
            SemiringSpec::Rational.parse_value("0.25").unwrap(),
            Value::ratio(1, 4)
        );
    }

    #[test]
    fn out_of_carrier_literals_rejected() {
        assert!(SemiringSpec::Rational.parse_value("-1").is_err());
        assert!(SemiringSpec::Lukasiewicz.parse_value("3/2").is_err());
        assert!(SemiringSpec::IntMod(4).parse_value("4").is_err());
        assert!(SemiringSpec::Boolean.parse_value("2").is_err());
        assert!("zmod:1".parse::<SemiringSpec>().is_err());
        assert!("poly:p,p".parse::<SemiringSpec>().is_err());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "boolean",
            "nat",
            "rat",
            "tropical",
            "lukasiewicz",
            "zmod:4",
            "poly:p1,p2",
        ] {
            let spec: SemiringSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }

    #[test]
    fn pow_matches_repeated_product() {
        let z = SemiringSpec::IntMod(4);
        assert_eq!(v(&z, "2").pow(2), z.zero());
        assert_eq!(v(&z, "3").pow(0), z.one());
        let n = SemiringSpec::Natural;
        assert_eq!(v(&n, "2").pow(10), v(&n, "1024"));
    }
}
