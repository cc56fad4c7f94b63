use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Polynomial, SemiringSpec, Tropical, Value};
use crate::error::{Error, Result};

/// All tuples `(b_1, ..., b_parts)` with `b_1 + ... + b_parts = a`.
///
/// Finitely decomposable kinds are enumerated exactly and `bound` is
/// ignored. For the dense kinds `bound` is a maximum denominator `d`: parts
/// are drawn from `{0, a}` together with the rationals `p/q`, `q <= d`,
/// that can occur in a decomposition of `a` (for the tropical semiring,
/// offsets `a + p/q` below `a + 1`, plus `∞`). Growing `d` only adds
/// candidates.
///
/// The zero of a `+`-positive kind only decomposes into zeros, which is
/// returned even without a bound.
pub fn decompositions(a: &Value, parts: usize, bound: Option<u64>) -> Result<Vec<Vec<Value>>> {
    let spec = a.spec();
    if parts == 0 {
        return Ok(if a.is_zero() { vec![vec![]] } else { vec![] });
    }
    if parts == 1 {
        return Ok(vec![vec![a.clone()]]);
    }
    if a.is_zero() && spec.is_plus_positive() {
        return Ok(vec![vec![spec.zero(); parts]]);
    }
    match a {
        Value::Bool(b) => Ok(boolean(*b, parts)),
        Value::Nat(n) => {
            let n = n
                .to_u64()
                .ok_or_else(|| Error::InfiniteSearch(format!("natural {n} is too large to enumerate")))?;
            Ok(compositions(n, parts)
                .into_iter()
                .map(|c| c.into_iter().map(|x| Value::Nat(BigUint::from(x))).collect())
                .collect())
        }
        Value::Mod { modulus, residue } => Ok(int_mod(*modulus, *residue, parts)),
        Value::Poly(p) => Ok(polynomial(p, parts)),
        Value::Rat(r) => {
            let d = require_bound(&spec, bound)?;
            let mut cands: BTreeSet<BigRational> = grid_open(&BigRational::zero(), r, d);
            cands.insert(BigRational::zero());
            cands.insert(r.clone());
            let cands: Vec<BigRational> = cands.into_iter().collect();
            let mut out = Vec::new();
            rational_sums(&cands, r, parts, &mut Vec::new(), &mut out);
            Ok(out
                .into_iter()
                .map(|t| t.into_iter().map(Value::Rat).collect())
                .collect())
        }
        Value::Luk(r) => {
            let d = require_bound(&spec, bound)?;
            let mut cands: BTreeSet<BigRational> = grid_open(&BigRational::zero(), r, d);
            cands.insert(BigRational::zero());
            cands.insert(r.clone());
            let cands: Vec<Value> = cands.into_iter().map(Value::Luk).collect();
            Ok(filter_product(&cands, parts, a))
        }
        Value::Trop(t) => {
            let d = require_bound(&spec, bound)?;
            let Tropical::Finite(r) = t else {
                unreachable!("tropical zero handled above")
            };
            let upper = r + BigRational::one();
            let mut cands: Vec<Value> = grid_open(r, &upper, d)
                .into_iter()
                .map(|x| Value::Trop(Tropical::Finite(x)))
                .collect();
            cands.push(a.clone());
            cands.push(Value::Trop(Tropical::Infinity));
            Ok(filter_product(&cands, parts, a))
        }
    }
}

fn require_bound(spec: &SemiringSpec, bound: Option<u64>) -> Result<u64> {
    match bound {
        Some(d) if d >= 1 => Ok(d),
        Some(_) => Err(Error::Input("denominator bound must be positive".into())),
        None => Err(Error::InfiniteSearch(format!(
            "{spec} is not finitely decomposable; supply a denominator bound"
        ))),
    }
}

fn boolean(a: bool, parts: usize) -> Vec<Vec<Value>> {
    let mut out = Vec::new();
    for mask in 0u64..(1 << parts) {
        if (mask != 0) == a {
            out.push((0..parts).map(|i| Value::Bool(mask >> i & 1 == 1)).collect());
        }
    }
    out
}

/// Weak compositions of `n` into `parts` parts, lexicographic.
fn compositions(n: u64, parts: usize) -> Vec<Vec<u64>> {
    fn go(n: u64, parts: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if parts == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=n {
            prefix.push(first);
            go(n - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

fn int_mod(modulus: u64, residue: u64, parts: usize) -> Vec<Vec<Value>> {
    let mut out = Vec::new();
    let mut prefix = vec![0u64; parts - 1];
    loop {
        let s = prefix.iter().fold(0u128, |acc, &x| acc + x as u128) % modulus as u128;
        let last = (residue as u128 + modulus as u128 - s) % modulus as u128;
        let mut t: Vec<Value> = prefix.iter().map(|&r| Value::residue(modulus, r)).collect();
        t.push(Value::residue(modulus, last as u64));
        out.push(t);
        // odometer
        let mut i = prefix.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            prefix[i] += 1;
            if prefix[i] < modulus {
                break;
            }
            prefix[i] = 0;
        }
    }
}

fn polynomial(p: &Polynomial, parts: usize) -> Vec<Vec<Value>> {
    let vars = p.vars().clone();
    let mut acc: Vec<Vec<Vec<(Vec<u32>, BigUint)>>> = vec![vec![Vec::new(); parts]];
    for (mono, coeff) in p.terms() {
        let c = coeff.to_u64().expect("coefficient too large to enumerate");
        let splits = compositions(c, parts);
        let mut next = Vec::with_capacity(acc.len() * splits.len());
        for partial in &acc {
            for split in &splits {
                let mut t = partial.clone();
                for (slot, &k) in t.iter_mut().zip(split) {
                    if k > 0 {
                        slot.push((mono.clone(), BigUint::from(k)));
                    }
                }
                next.push(t);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|t| {
            t.into_iter()
                .map(|terms| Value::Poly(Polynomial::from_terms(vars.clone(), terms)))
                .collect()
        })
        .collect()
}

/// Rationals `p/q` with `1 <= q <= d` strictly between `lo` and `hi`.
fn grid_open(lo: &BigRational, hi: &BigRational, d: u64) -> BTreeSet<BigRational> {
    let mut out = BTreeSet::new();
    for q in 1..=d {
        let qb = BigInt::from(q);
        let start: BigInt = (lo * BigRational::from_integer(qb.clone())).floor().to_integer() + 1;
        let mut p = start;
        loop {
            let x = BigRational::new(p.clone(), qb.clone());
            if &x >= hi {
                break;
            }
            if &x > lo {
                out.insert(x);
            }
            p += 1;
        }
    }
    out
}

fn rational_sums(
    cands: &[BigRational],
    remaining: &BigRational,
    parts: usize,
    prefix: &mut Vec<BigRational>,
    out: &mut Vec<Vec<BigRational>>,
) {
    if parts == 1 {
        if cands.binary_search(remaining).is_ok() {
            prefix.push(remaining.clone());
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    for c in cands {
        if c > remaining {
            break;
        }
        prefix.push(c.clone());
        rational_sums(cands, &(remaining - c), parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Every tuple over `cands` whose sum is `target`.
fn filter_product(cands: &[Value], parts: usize, target: &Value) -> Vec<Vec<Value>> {
    let spec = target.spec();
    let mut out = Vec::new();
    let mut idx = vec![0usize; parts];
    loop {
        let tuple: Vec<Value> = idx.iter().map(|&i| cands[i].clone()).collect();
        if spec.sum(&tuple).is_ok_and(|s| &s == target) {
            out.push(tuple);
        }
        let mut i = parts;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < cands.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_strings(ds: &[Vec<Value>]) -> BTreeSet<Vec<String>> {
        ds.iter()
            .map(|t| t.iter().map(|v| v.to_string()).collect())
            .collect()
    }

    fn set(items: &[&[&str]]) -> BTreeSet<Vec<String>> {
        items
            .iter()
            .map(|t| t.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn natural_two_into_two() {
        let d = decompositions(&Value::natural(2u32), 2, None).unwrap();
        assert_eq!(as_strings(&d), set(&[&["0", "2"], &["1", "1"], &["2", "0"]]));
    }

    #[test]
    fn zero_of_positive_kinds() {
        for spec in [
            SemiringSpec::Boolean,
            SemiringSpec::Natural,
            SemiringSpec::Rational,
            SemiringSpec::Tropical,
            SemiringSpec::Lukasiewicz,
        ] {
            let d = decompositions(&spec.zero(), 2, None).unwrap();
            assert_eq!(d, vec![vec![spec.zero(), spec.zero()]]);
        }
    }

    #[test]
    fn zmod4_one_into_two() {
        let d = decompositions(&Value::residue(4, 1), 2, None).unwrap();
        assert_eq!(
            as_strings(&d),
            set(&[&["0", "1"], &["1", "0"], &["2", "3"], &["3", "2"]])
        );
    }

    #[test]
    fn dense_kinds_need_a_bound() {
        let err = decompositions(&Value::ratio(1, 2), 2, None).unwrap_err();
        assert_eq!(err.code(), "InfiniteSearch");
        let d = decompositions(&Value::ratio(1, 2), 2, Some(2)).unwrap();
        assert_eq!(as_strings(&d), set(&[&["0", "1/2"], &["1/2", "0"]]));
        let d = decompositions(&Value::ratio(1, 2), 2, Some(4)).unwrap();
        assert_eq!(
            as_strings(&d),
            set(&[&["0", "1/2"], &["1/2", "0"], &["1/4", "1/4"]])
        );
    }

    #[test]
    fn off_grid_weights_keep_trivial_splits() {
        let d = decompositions(&Value::ratio(1, 7), 2, Some(2)).unwrap();
        assert_eq!(as_strings(&d), set(&[&["0", "1/7"], &["1/7", "0"]]));
    }

    #[test]
    fn boolean_one_into_two() {
        let d = decompositions(&Value::Bool(true), 2, None).unwrap();
        assert_eq!(as_strings(&d), set(&[&["0", "1"], &["1", "0"], &["1", "1"]]));
    }

    #[test]
    fn polynomial_splits_coefficients() {
        let spec = SemiringSpec::prov_poly(["p", "q"]).unwrap();
        let a = spec.parse_value("2*p + q").unwrap();
        let d = decompositions(&a, 2, None).unwrap();
        // 3 ways to split 2*p times 2 ways to split q
        assert_eq!(d.len(), 6);
        for t in &d {
            assert_eq!(t[0].add(&t[1]).unwrap(), a);
        }
    }

    #[test]
    fn tropical_and_lukasiewicz_grids() {
        let t = SemiringSpec::Tropical.parse_value("1").unwrap();
        let d = decompositions(&t, 2, Some(2)).unwrap();
        // {1, 3/2, inf} for the other part, one part fixed to 1
        assert_eq!(d.len(), 5);
        for x in &d {
            assert_eq!(x[0].add(&x[1]).unwrap(), t);
        }
        let l = SemiringSpec::Lukasiewicz.parse_value("1/2").unwrap();
        let d = decompositions(&l, 2, Some(2)).unwrap();
        assert_eq!(
            as_strings(&d),
            set(&[&["0", "1/2"], &["1/2", "0"], &["1/2", "1/2"]])
        );
    }

    #[test]
    fn three_parts_sum_back() {
        let a = Value::natural(3u32);
        let d = decompositions(&a, 3, None).unwrap();
        assert_eq!(d.len(), 10);
        let z = Value::residue(4, 2);
        let d = decompositions(&z, 3, None).unwrap();
        assert_eq!(d.len(), 16);
        for t in d {
            assert_eq!(SemiringSpec::IntMod(4).sum(&t).unwrap(), z);
        }
    }
}
