//! Operadic structure on brace trees and the map from `Ger`.
//!
//! `T ∘_i S` replaces vertex `i` of `T` by `S`, grafting the root edge of `S`
//! into the slot of `i`, and hands the children of `i` to the corners of `S`
//! in every order-preserving way. The sign reorders the reference monomial
//! (edges of `T`, then edges of `S`) into the pre-order of the result.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{reorder_sign, Arena};
use crate::calibration::calibrated;
use crate::sign::SignConvention;
use crate::tree::{permutations, BraceTree, NEUTRAL};
use crate::vector::{q, q_int, TreeVector, Q};

/// A permutation of `1..=n`, stored as its images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<u8>);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid permutation: {0}")]
pub struct PermutationError(String);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self, PermutationError> {
        let mut seen = images.clone();
        seen.sort_unstable();
        if seen.iter().enumerate().any(|(i, &v)| v as usize != i + 1) {
            return Err(PermutationError(format!("{images:?}")));
        }
        Ok(Permutation(images))
    }

    /// Parses cycle notation such as `(1,2,3)` or `(1 2)(3 4)` on `1..=n`.
    pub fn from_cycles(n: usize, s: &str) -> Result<Self, PermutationError> {
        let mut images: Vec<u8> = (1..=n as u8).collect();
        let err = || PermutationError(s.to_string());
        for cycle in s.split(')').map(|c| c.trim()).filter(|c| !c.is_empty()) {
            let body = cycle.strip_prefix('(').ok_or_else(err)?;
            let elems: Vec<u8> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|e| !e.is_empty())
                .map(|e| e.parse::<u8>().map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            for (k, &e) in elems.iter().enumerate() {
                if e == 0 || e as usize > n {
                    return Err(err());
                }
                images[e as usize - 1] = elems[(k + 1) % elems.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn all(n: usize) -> Vec<Permutation> {
        permutations(n).into_iter().map(Permutation).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.0[i as usize - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u8 + 1;
        }
        Permutation(inv)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.apply(i)).collect())
    }

    pub fn inversions(&self) -> usize {
        let mut c = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn sign(&self) -> i8 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Relabels every vertex `l` to `σ(l)`; no sign.
pub fn act(sigma: &Permutation, t: &BraceTree) -> BraceTree {
    assert_eq!(sigma.len(), t.arity(), "permutation size must match arity");
    t.relabel(|l| sigma.apply(l))
}

pub fn act_vec(sigma: &Permutation, v: &TreeVector) -> TreeVector {
    TreeVector::from_terms(v.iter().map(|(t, c)| (act(sigma, t), c.clone())))
}

/// `T ∘_i S` under an explicit convention.
pub fn insert_in(conv: &SignConvention, t: &BraceTree, i: usize, s: &BraceTree) -> TreeVector {
    let (nt, ns) = (t.arity(), s.arity());
    assert!(i >= 1 && i <= nt, "insertion index {i} out of range 1..={nt}");
    let (mt, ms) = (t.edge_count() as u32, s.edge_count() as u32);
    let host = Arena::from_tree(t, 0);
    let guest = Arena::from_tree(s, mt);
    let target = host.label.iter().position(|&l| l == i as u8).expect("label present");
    let reference: Vec<u32> =
        if conv.guest_first { (mt..mt + ms).chain(0..mt).collect() } else { (0..mt + ms).collect() };

    // merged arena: host vertices, then guest vertices shifted by `off`
    let off = host.label.len();
    let mut base = host.clone();
    for l in base.label.iter_mut() {
        if *l != NEUTRAL && *l as usize > i {
            *l += ns as u8 - 1;
        }
    }
    for v in 0..guest.label.len() {
        let l = guest.label[v];
        let label = if l == NEUTRAL { l } else { l + i as u8 - 1 };
        let children = guest.children[v].iter().map(|c| c + off).collect();
        let tag = if v == guest.top { host.tag[target] } else { guest.tag[v] };
        base.push(label, children, tag);
    }
    let guest_top = off + guest.top;
    if base.top == target {
        base.top = guest_top;
    } else {
        let (p, k) = base.parent_of(target).expect("parent");
        base.children[p][k] = guest_top;
    }
    base.children[target].clear();

    // corners of the guest in contour order
    let mut corners = Vec::new();
    contour(&base, guest_top, &mut corners);
    let orphans = host.children[target].clone();

    let mut out = TreeVector::new();
    let mut choice = vec![0usize; orphans.len()];
    loop {
        let mut arena = base.clone();
        // insert from the last orphan backwards so earlier slots stay valid
        let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (o, &c) in orphans.iter().zip(&choice) {
            grouped.entry(c).or_default().push(*o);
        }
        for (&c, group) in grouped.iter().rev() {
            let (v, slot) = corners[c];
            let ch = &mut arena.children[v];
            let tail = ch.split_off(slot);
            ch.extend_from_slice(group);
            ch.extend(tail);
        }
        if let Some((tree, tags)) = arena.encode() {
            out.add_signed(tree, reorder_sign(&reference, &tags));
        }
        if !next_weak_increasing(&mut choice, corners.len()) {
            break;
        }
    }
    out
}

fn contour(arena: &Arena, v: usize, out: &mut Vec<(usize, usize)>) {
    out.push((v, 0));
    for (k, &c) in arena.children[v].iter().enumerate() {
        contour(arena, c, out);
        out.push((v, k + 1));
    }
}

/// Advances a weakly increasing sequence with values in `0..bound`.
fn next_weak_increasing(seq: &mut [usize], bound: usize) -> bool {
    for i in (0..seq.len()).rev() {
        if seq[i] + 1 < bound {
            let v = seq[i] + 1;
            for x in seq[i..].iter_mut() {
                *x = v;
            }
            return true;
        }
    }
    false
}

pub fn insert_vec_in(conv: &SignConvention, t: &TreeVector, i: usize, s: &TreeVector) -> TreeVector {
    let mut out = TreeVector::new();
    for (a, ca) in t.iter() {
        for (b, cb) in s.iter() {
            out.add_scaled(&insert_in(conv, a, i, b), &(ca * cb));
        }
    }
    out
}

pub fn insert(t: &BraceTree, i: usize, s: &BraceTree) -> TreeVector {
    insert_in(calibrated(), t, i, s)
}

pub fn insert_vec(t: &TreeVector, i: usize, s: &TreeVector) -> TreeVector {
    insert_vec_in(calibrated(), t, i, s)
}

fn vec_arity(v: &TreeVector) -> usize {
    v.iter().next().map(|(t, _)| t.arity()).unwrap_or(0)
}

/// `μ(T; S_1, ..., S_t)`: insert `S_1` at 1, then `S_2` at the next free
/// label, and so on. Zero arguments are skipped only if `T` is zero.
pub fn compose_in(conv: &SignConvention, t: &TreeVector, args: &[TreeVector]) -> TreeVector {
    let mut cur = t.clone();
    let mut offset = 0;
    for a in args {
        if a.is_zero() || cur.is_zero() {
            return TreeVector::new();
        }
        cur = insert_vec_in(conv, &cur, offset + 1, a);
        offset += vec_arity(a);
    }
    cur
}

pub fn compose(t: &TreeVector, args: &[TreeVector]) -> TreeVector {
    compose_in(calibrated(), t, args)
}

fn tv(terms: &[(&str, Q)]) -> TreeVector {
    TreeVector::from_terms(terms.iter().map(|(s, c)| (s.parse().expect("literal tree"), c.clone())))
}

/// `(r (1 (2)))`.
pub fn t12() -> TreeVector {
    tv(&[("(r (1 (2)))", Q::one())])
}

/// `(r (* (1) (2)))`.
pub fn t_cup() -> TreeVector {
    tv(&[("(r (* (1) (2)))", Q::one())])
}

/// `(r (* (2) (1)))`.
pub fn t_cup_opp() -> TreeVector {
    tv(&[("(r (* (2) (1)))", Q::one())])
}

/// Image of the bracket: `(r (1 (2))) + (r (2 (1)))`.
pub fn t_bracket() -> TreeVector {
    tv(&[("(r (1 (2)))", Q::one()), ("(r (2 (1)))", Q::one())])
}

/// Image of the product: `½ (r (* (1) (2))) + ½ (r (* (2) (1)))`.
pub fn t_product() -> TreeVector {
    tv(&[("(r (* (1) (2)))", q(1, 2)), ("(r (* (2) (1)))", q(1, 2))])
}

/// A monomial in `Ger(n)`: a product of right-nested bracket words.
///
/// Text form `{1 2}{3}` stands for `{a1,a2} a3`; a block `{i1 i2 ... ip}`
/// is `{a_i1, {a_i2, ... a_ip}}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GerMonomial {
    pub blocks: Vec<Vec<u8>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid Ger monomial `{0}`")]
pub struct MonomialError(String);

impl GerMonomial {
    pub fn arity(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn degree(&self) -> i32 {
        -((self.arity() - self.blocks.len()) as i32)
    }

    /// Basis shape: each block ends with its maximum; blocks ordered by that maximum.
    pub fn is_basis(&self) -> bool {
        self.blocks.iter().all(|b| b.last() == b.iter().max())
            && self.blocks.windows(2).all(|w| w[0].last() < w[1].last())
    }
}

impl FromStr for GerMonomial {
    type Err = MonomialError;

    fn from_str(s: &str) -> Result<Self, MonomialError> {
        let err = || MonomialError(s.to_string());
        let mut blocks = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('{').ok_or_else(err)?;
            let end = body.find('}').ok_or_else(err)?;
            let block: Vec<u8> = body[..end]
                .split_whitespace()
                .map(|e| e.parse::<u8>().map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            if block.is_empty() {
                return Err(err());
            }
            blocks.push(block);
            rest = body[end + 1..].trim_start();
        }
        let mut all: Vec<u8> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.is_empty() || all.iter().enumerate().any(|(i, &v)| v as usize != i + 1) {
            return Err(err());
        }
        Ok(GerMonomial { blocks })
    }
}

impl fmt::Display for GerMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let inner: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", inner.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for GerMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Set partitions of `1..=n`, blocks listed by increasing minimum.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<Vec<u8>>> {
    let mut out = vec![Vec::new()];
    for x in 1..=n as u8 {
        let mut next = Vec::new();
        for p in out {
            for k in 0..p.len() {
                let mut q: Vec<Vec<u8>> = p.clone();
                q[k].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// Orderings of `block` ending with its maximum.
fn lie_words(block: &[u8]) -> Vec<Vec<u8>> {
    let max = *block.iter().max().expect("nonempty block");
    let rest: Vec<u8> = block.iter().copied().filter(|&x| x != max).collect();
    permutations(rest.len())
        .into_iter()
        .map(|p| {
            let mut w: Vec<u8> = p.iter().map(|&k| rest[k as usize - 1]).collect();
            w.push(max);
            w
        })
        .collect()
}

/// The monomial basis of `Ger(n)`, sorted.
pub fn ger_basis(n: usize) -> Vec<GerMonomial> {
    let mut out = Vec::new();
    for p in set_partitions(n) {
        let mut blocks = p.clone();
        blocks.sort_by_key(|b| *b.iter().max().unwrap());
        let mut acc: Vec<Vec<Vec<u8>>> = vec![Vec::new()];
        for b in &blocks {
            let words = lie_words(b);
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    words.iter().map(move |w| {
                        let mut x = prefix.clone();
                        x.push(w.clone());
                        x
                    })
                })
                .collect();
        }
        out.extend(acc.into_iter().map(|blocks| GerMonomial { blocks }));
    }
    out.sort();
    out
}

/// `degree -> dim Ger(n)^degree`.
pub fn ger_dims(n: usize) -> BTreeMap<i32, usize> {
    let mut dims = BTreeMap::new();
    for m in ger_basis(n) {
        *dims.entry(m.degree()).or_insert(0) += 1;
    }
    dims
}

fn j_standard(conv: &SignConvention, p: usize) -> TreeVector {
    static CACHE: OnceLock<Mutex<BTreeMap<(SignConvention, usize), TreeVector>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&(*conv, p)) {
        return v.clone();
    }
    let v = if p == 1 {
        TreeVector::from_tree(BraceTree::unit())
    } else {
        compose_in(conv, &t_bracket(), &[TreeVector::from_tree(BraceTree::unit()), j_standard(conv, p - 1)])
    };
    cache.lock().unwrap().insert((*conv, p), v.clone());
    v
}

/// Image of the right-nested word `{a_w1, {a_w2, ... a_wp}}` in `Br(p)`.
/// The word must be a permutation of `1..=p`.
pub fn j_in(conv: &SignConvention, word: &[u8]) -> TreeVector {
    let sigma = Permutation::from_images(word.to_vec()).expect("word must use 1..=p once each");
    act_vec(&sigma, &j_standard(conv, word.len()))
}

pub fn j(word: &[u8]) -> TreeVector {
    j_in(calibrated(), word)
}

/// `M_t`: the unit for `t = 1`, the product for `t = 2`, then `M_{t-1} ∘_1 M_2`.
pub fn m_t_in(conv: &SignConvention, t: usize) -> TreeVector {
    assert!(t >= 1);
    match t {
        1 => TreeVector::from_tree(BraceTree::unit()),
        2 => t_product(),
        _ => insert_vec_in(conv, &m_t_in(conv, t - 1), 1, &t_product()),
    }
}

pub fn m_t(t: usize) -> TreeVector {
    m_t_in(calibrated(), t)
}

/// `Ψ(m) = σ · μ(M_t; j(w_1), ..., j(w_t))` with standard words `w_k`.
pub fn psi_in(conv: &SignConvention, m: &GerMonomial) -> TreeVector {
    let args: Vec<TreeVector> = m.blocks.iter().map(|b| j_standard(conv, b.len())).collect();
    let standard = compose_in(conv, &m_t_in(conv, m.blocks.len()), &args);
    let sigma = Permutation::from_images(m.blocks.iter().flatten().copied().collect()).expect("monomial labels");
    act_vec(&sigma, &standard)
}

pub fn psi(m: &GerMonomial) -> TreeVector {
    psi_in(calibrated(), m)
}

/// `Ψ` extended linearly to integer combinations of monomials.
pub fn psi_combination(terms: &[(GerMonomial, i64)]) -> TreeVector {
    let mut out = TreeVector::new();
    for (m, c) in terms {
        out.add_scaled(&psi(m), &q_int(*c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ger_dims_small() {
        assert_eq!(ger_dims(2), BTreeMap::from([(-1, 1), (0, 1)]));
        assert_eq!(ger_dims(3), BTreeMap::from([(-2, 2), (-1, 3), (0, 1)]));
        assert_eq!(ger_dims(4), BTreeMap::from([(-3, 6), (-2, 11), (-1, 6), (0, 1)]));
        assert!(ger_basis(4).iter().all(|m| m.is_basis()));
    }

    #[test]
    fn monomial_text_round_trip() {
        let m: GerMonomial = "{1 2}{3 4}".parse().unwrap();
        assert_eq!(m.to_string(), "{1 2}{3 4}");
        assert_eq!(m.degree(), -2);
        assert!("{1}{3}".parse::<GerMonomial>().is_err());
        assert!("{}".parse::<GerMonomial>().is_err());
    }

    #[test]
    fn cycles() {
        let c = Permutation::from_cycles(3, "(1,2,3)").unwrap();
        assert_eq!(c.images(), &[2, 3, 1]);
        assert_eq!(c.sign(), 1);
        assert_eq!(c.compose(&c.inverse()), Permutation::identity(3));
        let t = Permutation::from_cycles(4, "(1 2)(3 4)").unwrap();
        assert_eq!(t.images(), &[2, 1, 4, 3]);
    }

    #[test]
    fn weak_sequences_count() {
        let mut s = vec![0usize; 2];
        let mut count = 1;
        while next_weak_increasing(&mut s, 5) {
            count += 1;
        }
        // multisets of size 2 from 5 corners
        assert_eq!(count, 15);
    }

    #[test]
    fn partitions_count() {
        assert_eq!(set_partitions(4).len(), 15);
        assert_eq!(ger_basis(4).len(), 24);
    }
}
