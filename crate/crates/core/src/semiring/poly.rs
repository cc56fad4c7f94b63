use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// A polynomial in `N[X]` over a fixed, ordered list of indeterminates.
///
/// Monomials are exponent vectors indexed like `vars`; zero coefficients are
/// never stored, so the zero polynomial has no monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Arc<[String]>,
    terms: BTreeMap<Vec<u32>, BigUint>,
}

impl Polynomial {
    pub fn zero(vars: Arc<[String]>) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<[String]>, c: impl Into<BigUint>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        Polynomial { vars, terms }
    }

    /// The polynomial consisting of a single indeterminate.
    pub fn indeterminate(vars: Arc<[String]>, name: &str) -> Option<Self> {
        let idx = vars.iter().position(|v| v == name)?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigUint::one());
        Some(Polynomial { vars, terms })
    }

    pub fn from_terms(vars: Arc<[String]>, terms: impl IntoIterator<Item = (Vec<u32>, BigUint)>) -> Self {
        let mut p = Polynomial::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), p.vars.len(), "exponent vector length");
            if !c.is_zero() {
                *p.terms.entry(exps).or_insert_with(BigUint::zero) += c;
            }
        }
        p
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigUint)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_insert_with(BigUint::zero) += c;
        }
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut terms: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                *terms.entry(m).or_insert_with(BigUint::zero) += c1 * c2;
            }
        }
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// The natural order of `N[X]`: every coefficient of `self` is at most
    /// the matching coefficient of `other`.
    pub fn coefficientwise_leq(&self, other: &Polynomial) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| other.terms.get(m).is_some_and(|d| c <= d))
    }

    /// Indeterminates with a positive exponent in some monomial.
    pub fn occurring_vars(&self) -> Vec<&str> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m[i] > 0))
            .map(|i| self.vars[i].as_str())
            .collect()
    }

    pub(crate) fn parse(vars: Arc<[String]>, text: &str) -> Result<Self, String> {
        let text = text.trim();
        if text.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut terms = Vec::new();
        for term in text.split('+') {
            let mut coeff = BigUint::one();
            let mut exps = vec![0u32; vars.len()];
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(format!("empty factor in {term:?}"));
                }
                if factor.chars().all(|c| c.is_ascii_digit()) {
                    coeff *= BigUint::from_str(factor).map_err(|e| e.to_string())?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|e| e.to_string())?),
                    None => (factor, 1),
                };
                let idx = vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| format!("undeclared indeterminate {name}"))?;
                exps[idx] += exp;
            }
            terms.push((exps, coeff));
        }
        Ok(Polynomial::from_terms(vars, terms))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !c.is_one() || m.iter().all(|&e| e == 0) {
                factors.push(c.to_string());
            }
            for (name, &e) in self.vars.iter().zip(m) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Arc<[String]> {
        vec!["p".to_string(), "q".to_string()].into()
    }

    #[test]
    fn canonical_form_merges_monomials() {
        let a = Polynomial::parse(vars(), "p*q + q*p + 3").unwrap();
        assert_eq!(a.to_string(), "2*p*q + 3");
        let b = Polynomial::parse(vars(), "p^2 + p*p").unwrap();
        assert_eq!(b.to_string(), "2*p^2");
    }

    #[test]
    fn product_distributes() {
        let a = Polynomial::parse(vars(), "p + q").unwrap();
        let sq = a.mul(&a);
        assert_eq!(sq, Polynomial::parse(vars(), "p^2 + 2*p*q + q^2").unwrap());
        assert!(a.mul(&Polynomial::zero(vars())).is_zero());
    }

    #[test]
    fn order_is_coefficientwise() {
        let a = Polynomial::parse(vars(), "p").unwrap();
        let b = Polynomial::parse(vars(), "2*p + q").unwrap();
        assert!(a.coefficientwise_leq(&b));
        assert!(!b.coefficientwise_leq(&a));
        assert!(Polynomial::zero(vars()).coefficientwise_leq(&a));
    }

    #[test]
    fn undeclared_names_rejected() {
        assert!(Polynomial::parse(vars(), "r").is_err());
        assert!(Polynomial::parse(vars(), "p +").is_err());
    }
}
