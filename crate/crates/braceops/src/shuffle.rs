//! Words in odd letters `X_1, ..., X_n` and the shuffle model of the dual
//! complex.
//!
//! `f` sends a neutral-free tree with lowest vertex `j` and subtrees
//! `T_1, ..., T_k` to `X_j (f(T_1) ● ... ● f(T_k))`; `g` agrees with `f` on
//! neutral-free trees and vanishes on the rest.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::arena::Arena;
use crate::linalg::{rank_of, SparseVec};
use crate::operad::{set_partitions, Permutation};
use crate::tree::{permutations, BraceTree, NEUTRAL};
use crate::vector::{q, q_int, TreeVector, Q};

pub type Word = Vec<u8>;

#[derive(Clone, Default, PartialEq, Eq)]
pub struct WordVector {
    terms: BTreeMap<Word, Q>,
}

impl WordVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn word(w: Word) -> Self {
        let mut v = Self::new();
        v.add_term(w, Q::one());
        v
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_scaled(&mut self, other: &WordVector, c: &Q) {
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    /// Prepends a letter to every word.
    pub fn prefixed(&self, letter: u8) -> WordVector {
        let mut out = WordVector::new();
        for (w, c) in &self.terms {
            let mut x = vec![letter];
            x.extend_from_slice(w);
            out.add_term(x, c.clone());
        }
        out
    }
}

/// `X2.X3.X4` text form.
pub fn word_text(w: &[u8]) -> String {
    w.iter().map(|x| format!("X{x}")).collect::<Vec<_>>().join(".")
}

impl fmt::Debug for WordVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c} {}", word_text(w))).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Signed shuffles of two words in odd letters; the sign counts the pairs
/// in which a letter of `v` overtakes a letter of `u`.
pub fn shuffle_words(u: &[u8], v: &[u8]) -> WordVector {
    let mut out = WordVector::new();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    fn go(u: &[u8], v: &[u8], inversions: usize, buf: &mut Vec<u8>, out: &mut WordVector) {
        if u.is_empty() && v.is_empty() {
            out.add_term(buf.clone(), q_int(if inversions.is_multiple_of(2) { 1 } else { -1 }));
            return;
        }
        if let Some((&a, rest)) = u.split_first() {
            buf.push(a);
            go(rest, v, inversions, buf, out);
            buf.pop();
        }
        if let Some((&b, rest)) = v.split_first() {
            buf.push(b);
            go(u, rest, inversions + u.len(), buf, out);
            buf.pop();
        }
    }
    go(u, v, 0, &mut buf, &mut out);
    out
}

pub fn shuffle(a: &WordVector, b: &WordVector) -> WordVector {
    let mut out = WordVector::new();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            out.add_scaled(&shuffle_words(u, v), &(cu * cv));
        }
    }
    out
}

/// Shuffle product of several factors, the empty product being the empty word.
pub fn shuffle_all(factors: &[WordVector]) -> WordVector {
    factors.iter().fold(WordVector::word(Vec::new()), |acc, f| shuffle(&acc, f))
}

fn f_vertex(a: &Arena, v: usize) -> WordVector {
    let parts: Vec<WordVector> = a.children[v].iter().map(|&c| f_vertex(a, c)).collect();
    shuffle_all(&parts).prefixed(a.label[v])
}

/// `f(T)`; `None` when `T` has a neutral vertex.
pub fn f_tree(t: &BraceTree) -> Option<WordVector> {
    if t.neutral_count() > 0 {
        return None;
    }
    let a = Arena::from_tree(t, 0);
    Some(f_vertex(&a, a.top))
}

pub fn g(v: &TreeVector) -> WordVector {
    let mut out = WordVector::new();
    for (t, c) in v.iter() {
        if let Some(w) = f_tree(t) {
            out.add_scaled(&w, c);
        }
    }
    out
}

/// Product of `f` over the subtrees of the lowest vertex, when `T` has a
/// single neutral vertex and it is lowest; zero otherwise.
pub fn branch_shuffle(t: &BraceTree) -> WordVector {
    if t.neutral_count() != 1 || t.code()[0].0 != NEUTRAL {
        return WordVector::new();
    }
    let a = Arena::from_tree(t, 0);
    let parts: Vec<WordVector> = a.children[a.top].iter().map(|&c| f_vertex(&a, c)).collect();
    shuffle_all(&parts)
}

fn chain(labels: &[u8]) -> String {
    let mut s = String::new();
    for l in labels {
        s.push_str(&format!("({l} "));
    }
    s = s.trim_end().to_string();
    s.push_str(&")".repeat(labels.len()));
    s
}

/// The string tree `λ(1) - λ(2) - ... - λ(n)`, `λ(1)` lowest.
pub fn string_tree(lambda: &[u8]) -> BraceTree {
    format!("(r {})", chain(lambda)).parse().expect("string tree")
}

/// A neutral vertex carrying the given strings as branches, left to right.
pub fn fork_tree(branches: &[&[u8]]) -> BraceTree {
    let inner: Vec<String> = branches.iter().map(|b| chain(b)).collect();
    format!("(r (* {}))", inner.join(" ")).parse().expect("fork tree")
}

/// The two-branch fork `σ(1..r) | σ(r+1..n)`, or its mirror image.
pub fn two_fork(sigma: &Permutation, r: usize, opposite: bool) -> BraceTree {
    let s = sigma.images();
    let (a, b) = s.split_at(r);
    if opposite {
        fork_tree(&[b, a])
    } else {
        fork_tree(&[a, b])
    }
}

/// `(r (* (1) ... (q)))`, or with `i + 1` placed on top of `i` when `i` is given.
pub fn corolla_tree(q: usize, stacked: Option<usize>) -> BraceTree {
    let mut branches: Vec<Vec<u8>> = Vec::new();
    let mut k = 1u8;
    while k as usize <= q {
        if stacked == Some(k as usize) {
            branches.push(vec![k, k + 1]);
            k += 2;
        } else {
            branches.push(vec![k]);
            k += 1;
        }
    }
    let refs: Vec<&[u8]> = branches.iter().map(|b| b.as_slice()).collect();
    fork_tree(&refs)
}

/// Koszul sign of permuting blocks of the given parities into `order`.
fn block_sign(lengths: &[usize], order: &[usize]) -> i8 {
    let mut s = 1;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] && lengths[order[i]] % 2 == 1 && lengths[order[j]] % 2 == 1 {
                s = -s;
            }
        }
    }
    s
}

/// `(1/k!) Σ_τ ±τ_*(T)` for the fork with the given branches.
pub fn symmetrized_fork(branches: &[Vec<u8>]) -> TreeVector {
    let k = branches.len();
    let lengths: Vec<usize> = branches.iter().map(|b| b.len()).collect();
    let mut out = TreeVector::new();
    let weight = q(1, (1..=k as i64).product());
    for p in permutations(k) {
        let order: Vec<usize> = p.iter().map(|&x| x as usize - 1).collect();
        let permuted: Vec<&[u8]> = order.iter().map(|&m| branches[m].as_slice()).collect();
        let sign = block_sign(&lengths, &order);
        out.add_term(fork_tree(&permuted), &weight * q_int(sign as i64));
    }
    out
}

/// Generators of the complement of the shuffle image: symmetrized forks whose
/// branches start with their minimum, first letters increasing.
pub fn xi_generators(n: usize) -> Vec<TreeVector> {
    let mut out = Vec::new();
    for p in set_partitions(n) {
        if p.len() < 2 {
            continue;
        }
        let mut acc: Vec<Vec<Vec<u8>>> = vec![Vec::new()];
        for block in &p {
            let (first, rest) = block.split_first().expect("nonempty");
            let orders: Vec<Vec<u8>> = permutations(rest.len())
                .into_iter()
                .map(|perm| std::iter::once(*first).chain(perm.iter().map(|&i| rest[i as usize - 1])).collect())
                .collect();
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    orders.iter().map(move |o| {
                        let mut x = prefix.clone();
                        x.push(o.clone());
                        x
                    })
                })
                .collect();
        }
        out.extend(acc.iter().map(|branches| symmetrized_fork(branches)));
    }
    out
}

fn word_index(n: usize) -> BTreeMap<Word, usize> {
    permutations(n).into_iter().enumerate().map(|(i, w)| (w, i)).collect()
}

pub fn word_vec_sparse(v: &WordVector, index: &BTreeMap<Word, usize>) -> SparseVec {
    crate::linalg::from_entries(v.iter().map(|(w, c)| (index[w], c.clone())))
}

/// `n! - rank` of the span of all shuffles `u ● v` of complementary
/// nonempty words; equals `(n-1)!`.
pub fn colie_dim(n: usize) -> usize {
    let index = word_index(n);
    let mut vectors = Vec::new();
    for w in permutations(n) {
        for cut in 1..n {
            let (u, v) = w.split_at(cut);
            // each unordered split once: keep u containing the letter 1
            if u.contains(&1) {
                vectors.push(word_vec_sparse(&shuffle_words(u, v), &index));
            }
        }
    }
    index.len() - rank_of(&vectors)
}

/// Rank of `g ∘ δ*` on the given vectors, as word vectors of length `n`.
pub fn shuffle_rank(n: usize, images: &[WordVector]) -> usize {
    let index = word_index(n);
    let vectors: Vec<SparseVec> = images.iter().map(|v| word_vec_sparse(v, &index)).collect();
    rank_of(&vectors)
}
