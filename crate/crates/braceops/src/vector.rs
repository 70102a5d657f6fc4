//! Rational linear combinations of brace trees.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{BraceTree, ParseError, Sector};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// `"p/q"` text form used in reports and fixtures.
pub fn q_to_string(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational `{0}`")]
pub struct RationalError(pub String);

/// Accepts `p`, `p/q`, with an optional leading `+` or `-`.
pub fn parse_q(s: &str) -> Result<Q, RationalError> {
    let err = || RationalError(s.to_string());
    let body = s.strip_prefix('+').unwrap_or(s);
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a, b),
        None => (body, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Q::new(num, den))
}

#[derive(Clone, Default, PartialEq, Eq)]
pub struct TreeVector {
    terms: BTreeMap<BraceTree, Q>,
}

impl TreeVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tree(t: BraceTree) -> Self {
        let mut v = Self::new();
        v.add_term(t, Q::one());
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (BraceTree, Q)>>(terms: I) -> Self {
        let mut v = Self::new();
        for (t, c) in terms {
            v.add_term(t, c);
        }
        v
    }

    pub fn add_term(&mut self, t: BraceTree, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `sign * t` with `sign` in `{-1, 1}`.
    pub fn add_signed(&mut self, t: BraceTree, sign: i8) {
        self.add_term(t, q_int(sign as i64));
    }

    pub fn add_scaled(&mut self, other: &TreeVector, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (t, v) in &other.terms {
            self.add_term(t.clone(), v * c);
        }
    }

    pub fn add(&mut self, other: &TreeVector) {
        self.add_scaled(other, &Q::one());
    }

    pub fn sub(&mut self, other: &TreeVector) {
        self.add_scaled(other, &-Q::one());
    }

    pub fn scaled(&self, c: &Q) -> TreeVector {
        let mut v = TreeVector::new();
        v.add_scaled(self, c);
        v
    }

    pub fn neg(&self) -> TreeVector {
        self.scaled(&-Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: &BraceTree) -> Q {
        self.terms.get(t).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BraceTree, &Q)> {
        self.terms.iter()
    }

    /// Applies a linear map given on basis trees.
    pub fn map_linear(&self, f: impl Fn(&BraceTree) -> TreeVector) -> TreeVector {
        let mut out = TreeVector::new();
        for (t, c) in &self.terms {
            out.add_scaled(&f(t), c);
        }
        out
    }

    pub fn restrict(&self, keep: impl Fn(&BraceTree) -> bool) -> TreeVector {
        TreeVector {
            terms: self.terms.iter().filter(|(t, _)| keep(t)).map(|(t, c)| (t.clone(), c.clone())).collect(),
        }
    }

    pub fn sector_part(&self, s: Sector) -> TreeVector {
        self.restrict(|t| t.sector() == s)
    }

    /// Standard pairing making the tree basis orthonormal.
    pub fn pairing(&self, other: &TreeVector) -> Q {
        let mut acc = Q::zero();
        for (t, c) in &self.terms {
            if let Some(d) = other.terms.get(t) {
                acc += c * d;
            }
        }
        acc
    }

    /// Terms ordered by canonical text, the order used for printing.
    pub fn sorted_terms(&self) -> Vec<(String, Q)> {
        let mut v: Vec<(String, Q)> = self.terms.iter().map(|(t, c)| (t.canonical(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.sorted_terms().into_iter().map(|(tree, c)| TermJson { tree, coeff: q_to_string(&c) }).collect()
    }

    pub fn from_json(terms: &[TermJson]) -> Result<TreeVector, VectorParseError> {
        let mut v = TreeVector::new();
        for t in terms {
            v.add_term(t.tree.parse()?, parse_q(&t.coeff)?);
        }
        Ok(v)
    }

    /// Parses lines or a bracketed list of `coeff tree` pairs, e.g.
    /// `[+1 (r (1 (2))) -1/2 (r (2 (1)))]`.
    pub fn parse_terms(s: &str) -> Result<TreeVector, VectorParseError> {
        let body = s.trim();
        let body = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(body);
        let mut v = TreeVector::new();
        let mut rest = body.trim_start();
        while !rest.is_empty() {
            let end = rest.find(|c: char| c.is_whitespace() || c == '(').unwrap_or(rest.len());
            let coeff = parse_q(&rest[..end])?;
            rest = rest[end..].trim_start();
            let len = balanced_prefix(rest).ok_or(VectorParseError::Unbalanced)?;
            v.add_term(rest[..len].parse()?, coeff);
            rest = rest[len..].trim_start();
        }
        Ok(v)
    }
}

/// Length of the leading balanced parenthesised group of `s`.
pub(crate) fn balanced_prefix(s: &str) -> Option<usize> {
    if !s.starts_with('(') {
        return None;
    }
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            _ => {}
        }
    }
    None
}

#[derive(Debug, Error)]
pub enum VectorParseError {
    #[error(transparent)]
    Tree(#[from] ParseError),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error("unbalanced parentheses")]
    Unbalanced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub tree: String,
    pub coeff: String,
}

impl fmt::Display for TreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            write!(f, "{sign}{} {t}", c.abs())?;
        }
        Ok(())
    }
}

impl fmt::Debug for TreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_string().replace('\n', " "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_and_print() {
        assert_eq!(parse_q("-1/4").unwrap(), q(-1, 4));
        assert_eq!(parse_q("+3").unwrap(), q_int(3));
        assert_eq!(q_to_string(&q(2, -4)), "-1/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn terms_cancel_and_parse() {
        let v = TreeVector::parse_terms("[+1 (r (1 (2))) -1/2 (r (2 (1))) -1 (r (1 (2)))]").unwrap();
        assert_eq!(v.len(), 1);
        let t: BraceTree = "(r (2 (1)))".parse().unwrap();
        assert_eq!(v.coeff(&t), q(-1, 2));
        let back = TreeVector::from_json(&v.to_json()).unwrap();
        assert_eq!(back, v);
    }
}
