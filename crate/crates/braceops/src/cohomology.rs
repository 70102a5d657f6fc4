//! Complexes built from brace trees, their cohomology, and the structural
//! checks on the two sectors.
//!
//! Degrees follow the trees: `Br(n)` lives in degrees `1-n ..= 0` and `δ`
//! raises degree by one. Dual complexes use the dual degree `-deg`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{cohomology_dims, from_entries, kernel, rank_of, Echelon, Insertion, GradedComplex, SparseMatrix, SparseVec};
use crate::operad::{act_vec, compose, ger_basis, ger_dims, j, psi, GerMonomial, Permutation};
use crate::shuffle::{corolla_tree, string_tree, two_fork};
use crate::sign::{delta, delta_dual};
use crate::tree::{enumerate, permutations, BraceTree, Sector};
use crate::vector::{q, q_int, TermJson, TreeVector, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Br,
    Vcirc,
    Vbul,
}

impl Which {
    fn keeps(self, t: &BraceTree) -> bool {
        match self {
            Which::Br => true,
            Which::Vcirc => t.sector() == Sector::Vcirc,
            Which::Vbul => t.sector() == Sector::Vbul,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Which::Br => "br",
            Which::Vcirc => "vcirc",
            Which::Vbul => "vbul",
        }
    }
}

impl FromStr for Which {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "br" => Ok(Which::Br),
            "vcirc" => Ok(Which::Vcirc),
            "vbul" => Ok(Which::Vbul),
            other => Err(format!("unknown complex `{other}` (expected br, vcirc or vbul)")),
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered basis of trees with reverse lookup.
#[derive(Clone, Debug, Default)]
pub struct Basis {
    pub trees: Vec<BraceTree>,
    index: HashMap<BraceTree, usize>,
}

impl Basis {
    pub fn new(trees: Vec<BraceTree>) -> Self {
        let index = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Basis { trees, index }
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn position(&self, t: &BraceTree) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Coordinates of `v`; terms outside the basis are dropped.
    pub fn project(&self, v: &TreeVector) -> SparseVec {
        from_entries(v.iter().filter_map(|(t, c)| self.position(t).map(|i| (i, c.clone()))))
    }

    /// Coordinates of `v`, which must lie in the span of the basis.
    pub fn coords(&self, v: &TreeVector) -> SparseVec {
        from_entries(v.iter().map(|(t, c)| (self.position(t).unwrap_or_else(|| panic!("{t} not in basis")), c.clone())))
    }

    pub fn vector(&self, x: &[(usize, Q)]) -> TreeVector {
        TreeVector::from_terms(x.iter().map(|(i, c)| (self.trees[*i].clone(), c.clone())))
    }

    pub fn restrict(&self, keep: impl Fn(&BraceTree) -> bool) -> Basis {
        Basis::new(self.trees.iter().filter(|t| keep(t)).cloned().collect())
    }
}

/// Matrix of `f` from `src` to `dst`, dropping terms outside `dst`.
pub fn matrix_of(src: &Basis, dst: &Basis, f: impl Fn(&BraceTree) -> TreeVector + Sync) -> SparseMatrix {
    let cols = src.trees.par_iter().map(|t| dst.project(&f(t))).collect();
    SparseMatrix::new(dst.len(), cols)
}

/// Trees of one arity together with their differentials, shared between checks.
pub struct ArityData {
    pub n: usize,
    pub by_degree: BTreeMap<i32, Basis>,
    delta: HashMap<BraceTree, TreeVector>,
    dual: HashMap<BraceTree, TreeVector>,
}

impl ArityData {
    fn build(n: usize) -> Self {
        let by_degree: BTreeMap<i32, Basis> = crate::tree::degrees(n).into_iter().map(|d| (d, Basis::new(enumerate(n, d)))).collect();
        let all: Vec<BraceTree> = by_degree.values().flat_map(|b| b.trees.iter().cloned()).collect();
        let delta = all.par_iter().map(|t| (t.clone(), delta(t))).collect();
        let dual = all.par_iter().map(|t| (t.clone(), delta_dual(t))).collect();
        ArityData { n, by_degree, delta, dual }
    }

    pub fn get(n: usize) -> Arc<ArityData> {
        static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<ArityData>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(a) = cache.lock().unwrap().get(&n) {
            return a.clone();
        }
        let a = Arc::new(ArityData::build(n));
        cache.lock().unwrap().insert(n, a.clone());
        a
    }

    pub fn delta(&self, t: &BraceTree) -> &TreeVector {
        &self.delta[t]
    }

    pub fn delta_dual(&self, t: &BraceTree) -> &TreeVector {
        &self.dual[t]
    }

    pub fn delta_vec(&self, v: &TreeVector) -> TreeVector {
        v.map_linear(|t| self.delta[t].clone())
    }

    pub fn basis(&self, degree: i32, which: Which) -> Basis {
        self.by_degree.get(&degree).map(|b| b.restrict(|t| which.keeps(t))).unwrap_or_default()
    }

    pub fn all_trees(&self) -> impl Iterator<Item = &BraceTree> {
        self.by_degree.values().flat_map(|b| b.trees.iter())
    }
}

/// A complex of trees with its bases.
pub struct Complex {
    pub n: usize,
    pub which: Which,
    pub dual: bool,
    pub bases: BTreeMap<i32, Basis>,
    pub graded: GradedComplex,
}

/// Assembles `Br(n)`, `Vcirc(n)` or `Vbul(n)` with `δ` (projected to the
/// sector), or the dual with the transposed differential.
pub fn assemble(n: usize, which: Which, dual: bool) -> Complex {
    let data = ArityData::get(n);
    let mut bases = BTreeMap::new();
    for &d in data.by_degree.keys() {
        let b = data.basis(d, which);
        if !b.is_empty() {
            bases.insert(if dual { -d } else { d }, b);
        }
    }
    let mut graded = GradedComplex::default();
    for (&k, b) in &bases {
        graded.dims.insert(k, b.len());
    }
    for (&k, src) in &bases {
        if let Some(dst) = bases.get(&(k + 1)) {
            let m = if dual {
                matrix_of(src, dst, |t| data.delta_dual(t).clone())
            } else {
                matrix_of(src, dst, |t| data.delta(t).clone())
            };
            graded.d.insert(k, m);
        }
    }
    Complex { n, which, dual, bases, graded }
}

pub fn cohomology(n: usize, which: Which, dual: bool) -> BTreeMap<i32, usize> {
    cohomology_dims(&assemble(n, which, dual).graded)
}

pub fn chain_dims(n: usize, which: Which, dual: bool) -> BTreeMap<i32, usize> {
    assemble(n, which, dual).graded.dims
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Unsigned Stirling numbers of the first kind.
pub fn stirling1(n: usize, k: usize) -> usize {
    let mut c = vec![vec![0usize; n + 1]; n + 1];
    c[0][0] = 1;
    for m in 1..=n {
        for j in 1..=m {
            c[m][j] = c[m - 1][j - 1] + (m - 1) * c[m - 1][j];
        }
    }
    if k > n {
        0
    } else {
        c[n][k]
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `Ger(n)` restricted to products of at least two brackets.
pub fn ger_products(n: usize) -> BTreeMap<i32, usize> {
    let mut dims = ger_dims(n);
    dims.remove(&(1 - n as i32));
    dims.retain(|_, v| *v > 0);
    dims
}

/// Expected cohomology of `(Vbul(n), δ₀)`.
pub fn h_vbul_prediction(n: usize) -> BTreeMap<i32, usize> {
    if n < 2 {
        return BTreeMap::new();
    }
    let mut dims = ger_products(n);
    *dims.entry(2 - n as i32).or_insert(0) += factorial(n) - factorial(n - 1);
    dims
}

/// Compositions of `n` into `q` positive parts.
fn compositions(n: usize, q: usize) -> Vec<Vec<usize>> {
    if q == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(q - 1) {
        for mut rest in compositions(n - first, q - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// First page predicted from the associated graded: ordered set partitions
/// of `1..=n` into `q` blocks, each carrying `Ger`, shifted by `2 - q`.
pub fn e1_prediction(n: usize) -> BTreeMap<(usize, i32), usize> {
    let ger: Vec<BTreeMap<i32, usize>> = (0..=n).map(ger_dims).collect();
    let mut out = BTreeMap::new();
    for q in 2..=n {
        for comp in compositions(n, q) {
            let mut ways = 1usize;
            let mut left = n;
            for &p in &comp {
                ways *= binomial(left, p);
                left -= p;
            }
            let mut poly: BTreeMap<i32, usize> = BTreeMap::from([(0, 1)]);
            for &p in &comp {
                let mut next = BTreeMap::new();
                for (a, x) in &poly {
                    for (b, y) in &ger[p] {
                        *next.entry(a + b).or_insert(0) += x * y;
                    }
                }
                poly = next;
            }
            for (d, c) in poly {
                *out.entry((q, d + 2 - q as i32)).or_insert(0) += ways * c;
            }
        }
    }
    out.retain(|_, v| *v > 0);
    out
}

/// Second page: products of brackets at `q = 2`, and `c(n, q)` classes in
/// degree `2 - n` for every `q ≥ 2`.
pub fn e2_prediction(n: usize) -> BTreeMap<(usize, i32), usize> {
    let mut out = BTreeMap::new();
    for (d, v) in ger_products(n) {
        out.insert((2, d), v);
    }
    for q in 2..=n {
        *out.entry((q, 2 - n as i32)).or_insert(0) += stirling1(n, q);
    }
    out.retain(|_, v| *v > 0);
    out
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PageEntry {
    pub q: usize,
    pub degree: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Page {
    /// `"1"`, `"2"`, ..., or `"inf"`.
    pub r: String,
    pub entries: Vec<PageEntry>,
}

impl Page {
    pub fn as_map(&self) -> BTreeMap<(usize, i32), usize> {
        self.entries.iter().filter(|e| e.dim > 0).map(|e| ((e.q, e.degree), e.dim)).collect()
    }
}

/// Filtration of `Vbul(n)` by the number of children of the lowest vertex.
///
/// Every page is read off from ranks `rk_d(a, b)` of `δ_d` restricted to
/// sources of level `≤ a` and targets of level `> b`. With sources sorted by
/// ascending level, targets likewise, and leading-index reduction, the
/// pivots of one reduction per degree determine all of these ranks.
pub struct Filtered {
    pub n: usize,
    /// Basis size per (degree, level).
    graded: BTreeMap<(i32, usize), usize>,
    /// (source level, target level) of each pivot of `δ_d`.
    pivots: BTreeMap<i32, Vec<(usize, usize)>>,
}

impl Filtered {
    pub fn new(n: usize) -> Self {
        let data = ArityData::get(n);
        let level = |t: &BraceTree| t.filtration_level().expect("Vbul tree");
        let sorted = |d: i32| {
            let mut trees = data.basis(d, Which::Vbul).trees;
            trees.sort_by_key(|t| level(t));
            Basis::new(trees)
        };
        let degrees: Vec<i32> = data.by_degree.keys().copied().collect();
        let mut graded = BTreeMap::new();
        for &d in &degrees {
            for t in sorted(d).trees {
                *graded.entry((d, level(&t))).or_insert(0) += 1;
            }
        }
        let pivots = degrees
            .par_iter()
            .map(|&d| {
                let (src, dst) = (sorted(d), sorted(d + 1));
                let mut ech = Echelon::new();
                let mut levels = Vec::new();
                for t in &src.trees {
                    if ech.insert(&dst.coords(data.delta(t))) == Insertion::Independent {
                        levels.push(level(t));
                    }
                }
                let pairs = levels.into_iter().zip(ech.pivots().map(|row| level(&dst.trees[row]))).collect();
                (d, pairs)
            })
            .collect();
        Filtered { n, graded, pivots }
    }

    fn gr(&self, d: i32, q: usize) -> usize {
        self.graded.get(&(d, q)).copied().unwrap_or(0)
    }

    fn rk(&self, d: i32, a: i64, b: i64) -> usize {
        self.pivots
            .get(&d)
            .map(|p| p.iter().filter(|&&(s, t)| s as i64 <= a && t as i64 > b).count())
            .unwrap_or(0)
    }

    /// `dim Z^q_r / (Z^{q-1}_{r-1} + δ Z^{q+r-1}_{r-1})` in degree `d`.
    pub fn page_dim(&self, d: i32, q: usize, r: usize) -> usize {
        self.entry(d, q, (q as i64 + r as i64 - 1, q as i64 - r as i64))
    }

    /// `dim (Z ∩ F^q) / (Z ∩ F^{q-1} + B ∩ F^q)` in degree `d`.
    pub fn infinity_dim(&self, d: i32, q: usize) -> usize {
        self.entry(d, q, (i64::MAX, i64::MIN))
    }

    fn entry(&self, d: i32, q: usize, (top, bottom): (i64, i64)) -> usize {
        let q = q as i64;
        let dim = self.gr(d, q as usize) + self.rk(d, q - 1, bottom) + self.rk(d - 1, top, q);
        let cut = self.rk(d, q, bottom) + self.rk(d - 1, top, q - 1);
        dim - cut
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.graded.keys().map(|k| k.0).collect();
        d.dedup();
        d
    }

    pub fn page(&self, r: usize) -> Page {
        let mut entries = Vec::new();
        for d in self.degrees() {
            for q in 2..=self.n {
                entries.push(PageEntry { q, degree: d, dim: self.page_dim(d, q, r) });
            }
        }
        Page { r: r.to_string(), entries }
    }

    pub fn infinity_page(&self) -> Page {
        let mut entries = Vec::new();
        for d in self.degrees() {
            for q in 2..=self.n {
                entries.push(PageEntry { q, degree: d, dim: self.infinity_dim(d, q) });
            }
        }
        Page { r: "inf".into(), entries }
    }
}

/// Pages `E_1 ..= E_{n-1}` and `E_∞` of the filtration on `Vbul(n)`.
pub fn spectral_pages(n: usize) -> Vec<Page> {
    if n < 2 {
        return Vec::new();
    }
    let f = Filtered::new(n);
    let mut pages: Vec<Page> = (1..n.max(2)).map(|r| f.page(r)).collect();
    pages.push(f.infinity_page());
    pages
}

/// Result of a membership test with its witness.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub holds: bool,
    pub preimage: Vec<TermJson>,
}

/// Whether `v` (homogeneous of degree `d` in `Br(n)`) lies in `δ(Br(n)^{d-1})`.
pub fn in_image_of_delta(n: usize, v: &TreeVector) -> Witness {
    let Some((t, _)) = v.iter().next() else {
        return Witness { holds: true, preimage: vec![] };
    };
    let d = t.degree();
    let data = ArityData::get(n);
    let src = data.basis(d - 1, Which::Br);
    let dst = data.basis(d, Which::Br);
    let m = matrix_of(&src, &dst, |t| data.delta(t).clone());
    match crate::linalg::solve_membership(&m, &dst.coords(v)) {
        Some(x) => {
            let pre = src.vector(&x);
            let holds = data.delta_vec(&pre) == *v;
            Witness { holds, preimage: pre.to_json() }
        }
        None => Witness { holds: false, preimage: vec![] },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StringClassReport {
    pub n: usize,
    pub dims: BTreeMap<i32, usize>,
    pub concentrated: bool,
    pub string_rank_mod_image: usize,
    pub witnesses_checked: usize,
    pub witnesses_ok: usize,
    pub sample_witness: Option<(String, Vec<TermJson>, Vec<TermJson>)>,
}

/// The dual of `Vcirc(n)`: cohomology only in dual degree `n-1`, spanned by
/// the `n!` string trees; every neutral-free tree is a string combination
/// modulo `δ₀*`, checked on `samples` random trees with explicit witnesses.
pub fn vcirc_string_classes(n: usize, samples: usize, seed: u64) -> StringClassReport {
    let c = assemble(n, Which::Vcirc, true);
    let dims = cohomology_dims(&c.graded);
    let top = n as i32 - 1;
    let factorial_n = factorial(n);
    let concentrated = dims.iter().all(|(&k, &v)| if k == top { v == factorial_n } else { v == 0 });
    let top_basis = c.bases[&top].clone();
    let image_cols: Vec<SparseVec> = c.graded.d.get(&(top - 1)).map(|m| m.cols.clone()).unwrap_or_default();
    let strings: Vec<BraceTree> = permutations(n).iter().map(|p| string_tree(p)).collect();
    let string_cols: Vec<SparseVec> = strings.iter().map(|s| vec![(top_basis.position(s).unwrap(), Q::one())]).collect();

    let mut ech = Echelon::tracking();
    for col in &image_cols {
        ech.insert(col);
    }
    let image_rank = ech.rank();
    for col in &string_cols {
        ech.insert(col);
    }
    let string_rank_mod_image = ech.rank() - image_rank;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0;
    let mut sample_witness = None;
    let data = ArityData::get(n);
    let lower = c.bases.get(&(top - 1)).cloned().unwrap_or_default();
    for _ in 0..samples {
        let t = top_basis.trees.choose(&mut rng).expect("nonempty").clone();
        let Some(x) = ech.solve(&[(top_basis.position(&t).unwrap(), Q::one())]) else { continue };
        let m = image_cols.len();
        let pre = lower.vector(&x.iter().filter(|(i, _)| *i < m).cloned().collect::<Vec<_>>());
        let mut combo = TreeVector::new();
        for (i, coef) in x.iter().filter(|(i, _)| *i >= m) {
            combo.add_term(strings[i - m].clone(), coef.clone());
        }
        // recheck: t - δ₀*(pre) == combo
        let mut lhs = TreeVector::from_tree(t.clone());
        lhs.sub(&pre.map_linear(|s| data.delta_dual(s).sector_part(Sector::Vcirc)));
        if lhs == combo {
            ok += 1;
            if sample_witness.is_none() {
                sample_witness = Some((t.canonical(), pre.to_json(), combo.to_json()));
            }
        }
    }
    StringClassReport { n, dims, concentrated, string_rank_mod_image, witnesses_checked: samples, witnesses_ok: ok, sample_witness }
}

/// `u_q` for standard bracket words of the given lengths.
///
/// `(1/q!) Σ_σ sgn σ · μ(σ T•_q; j(v)) + (1/q!) Σ_i Σ_{σ(i)<σ(i+1)} sgn σ · μ(σ T•_{q,i}; j(v))`.
pub fn u_q(lengths: &[usize]) -> TreeVector {
    let words: Vec<Vec<u8>> = lengths.iter().map(|&p| (1..=p as u8).collect()).collect();
    u_q_words(&words)
}

/// `u_q` with arbitrary bracket words (each a permutation of `1..=p_k`).
pub fn u_q_words(words: &[Vec<u8>]) -> TreeVector {
    let q = words.len();
    let args: Vec<TreeVector> = words.iter().map(|w| j(w)).collect();
    let weight = q_frac(1, factorial(q));
    let mut out = TreeVector::new();
    let flat = TreeVector::from_tree(corolla_tree(q, None));
    for sigma in Permutation::all(q) {
        let s = q_int(sigma.sign() as i64) * &weight;
        out.add_scaled(&compose(&act_vec(&sigma, &flat), &args), &s);
        // for q = 2 the stacked corolla has a univalent neutral vertex
        for i in (1..q).filter(|_| q >= 3) {
            if sigma.apply(i as u8) < sigma.apply(i as u8 + 1) {
                let stacked = TreeVector::from_tree(corolla_tree(q, Some(i)));
                out.add_scaled(&compose(&act_vec(&sigma, &stacked), &args), &s);
            }
        }
    }
    out
}

fn q_frac(a: usize, b: usize) -> Q {
    q(a as i64, b as i64)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaCheck {
    pub n: usize,
    pub q: usize,
    pub lengths: Vec<usize>,
    /// Largest filtration level among the terms of `δ₀ u_q` (0 if it vanishes).
    pub delta_level: usize,
    pub in_lower_filtration: bool,
    pub completion_found: bool,
    pub completion_terms: usize,
}

/// `δ₀ u_q ∈ F^{q-2}` and a correction `x ∈ F^{q-1}` with `δ₀(u_q + x) = 0`.
pub fn check_corolla_cocycle(lengths: &[usize]) -> (CorollaCheck, Option<TreeVector>) {
    let q = lengths.len();
    let n: usize = lengths.iter().sum();
    let u = u_q(lengths);
    let (check, fixed) = complete_cocycle(n, q, &u);
    (CorollaCheck { lengths: lengths.to_vec(), ..check }, fixed)
}

/// Checks `δ₀ u ∈ F^{q-2}` and solves for `x ∈ F^{q-1}` with `δ₀(u + x) = 0`.
pub fn complete_cocycle(n: usize, q: usize, u: &TreeVector) -> (CorollaCheck, Option<TreeVector>) {
    let data = ArityData::get(n);
    let du = data.delta_vec(u);
    let delta_level = du.iter().map(|(t, _)| t.filtration_level().unwrap_or(usize::MAX)).max().unwrap_or(0);
    let in_lower = delta_level == 0 || delta_level + 2 <= q;
    let d = 2 - n as i32;
    let src = data.basis(d, Which::Vbul).restrict(|t| t.filtration_level().unwrap() < q);
    let dst = data.basis(d + 1, Which::Vbul);
    let fixed = if du.is_zero() {
        Some(u.clone())
    } else {
        let m = matrix_of(&src, &dst, |t| data.delta(t).clone());
        let rhs: SparseVec = dst.coords(&du).into_iter().map(|(i, c)| (i, -c)).collect();
        crate::linalg::solve_membership(&m, &rhs).map(|x| {
            let mut v = u.clone();
            v.add(&src.vector(&x));
            v
        })
    };
    let ok = fixed.as_ref().is_some_and(|v| data.delta_vec(v).is_zero() && !v.is_zero());
    let check = CorollaCheck {
        n,
        q,
        lengths: vec![],
        delta_level,
        in_lower_filtration: in_lower,
        completion_found: ok,
        completion_terms: fixed.as_ref().map(|v| v.len()).unwrap_or(0),
    };
    (check, fixed)
}

/// Cocycle representatives of the part of `H(Vbul(n))` in degree `2-n` not
/// coming from products of brackets: one completed `u_q` for each set
/// partition into `q ≥ 2` blocks and each choice of bracket words.
pub fn corolla_representatives(n: usize) -> Vec<TreeVector> {
    let mut out = Vec::new();
    for p in crate::operad::set_partitions(n) {
        let q = p.len();
        if q < 2 {
            continue;
        }
        let lengths: Vec<usize> = p.iter().map(|b| b.len()).collect();
        // local words ending with the block maximum
        let mut choices: Vec<Vec<Vec<u8>>> = vec![vec![]];
        for &len in &lengths {
            let words: Vec<Vec<u8>> = permutations(len - 1)
                .into_iter()
                .map(|mut w| {
                    w.push(len as u8);
                    w
                })
                .collect();
            choices = choices
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
        let relabel = Permutation::from_images(p.iter().flatten().copied().collect()).expect("partition");
        for words in choices {
            let u = u_q_words(&words);
            let (_, fixed) = complete_cocycle(n, q, &u);
            if let Some(v) = fixed {
                out.push(act_vec(&relabel, &v));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ForkCheck {
    pub n: usize,
    pub r: usize,
    pub sigma: Vec<u8>,
    pub cocycle: bool,
    pub orthogonal_to_products: bool,
    pub relation_holds: bool,
}

/// For the two-branch fork `T = σ(1..r) | σ(r+1..n)` and its mirror:
/// `F = ½(T + (-1)^{r(n-r)} T^opp)` is a `δ₀*`-cocycle orthogonal to the
/// images of products of brackets, and `δ₁* F` agrees with the signed
/// shuffle sum of string trees modulo `δ₀*(Vcirc*)`.
pub fn fork_checks(n: usize) -> Vec<ForkCheck> {
    let data = ArityData::get(n);
    let top = n as i32 - 1;
    let circ = assemble(n, Which::Vcirc, true);
    let top_basis = circ.bases[&top].clone();
    let mut ech = Echelon::new();
    if let Some(m) = circ.graded.d.get(&(top - 1)) {
        for c in &m.cols {
            ech.insert(c);
        }
    }
    let products: Vec<TreeVector> = ger_basis(n).into_iter().filter(|m| m.blocks.len() == 2).map(|m| psi(&m)).collect();
    let mut out = Vec::new();
    for r in 1..n {
        let sign = if (r * (n - r)).is_multiple_of(2) { 1 } else { -1 };
        for sigma in Permutation::all(n) {
            let mut f = TreeVector::new();
            f.add_term(two_fork(&sigma, r, false), q(1, 2));
            f.add_term(two_fork(&sigma, r, true), q(sign, 2));
            let df = f.map_linear(|t| data.delta_dual(t).clone());
            let cocycle = df.sector_part(Sector::Vbul).is_zero();
            let orthogonal = products.iter().all(|p| p.pairing(&f).is_zero());
            let mut rel = df.sector_part(Sector::Vcirc);
            for tau in Permutation::all(n) {
                let images = tau.images();
                if !(images[..r].windows(2).all(|w| w[0] < w[1]) && images[r..].windows(2).all(|w| w[0] < w[1])) {
                    continue;
                }
                let lambda = sigma.compose(&tau.inverse());
                rel.add_term(string_tree(lambda.images()), q_int(-(tau.sign() as i64)));
            }
            let relation_holds = ech.contains(&top_basis.coords(&rel));
            out.push(ForkCheck { n, r, sigma: sigma.images().to_vec(), cocycle, orthogonal_to_products: orthogonal, relation_holds });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Assembly {
    pub n: usize,
    pub h_vcirc: BTreeMap<i32, usize>,
    pub h_vbul: BTreeMap<i32, usize>,
    /// Rank of the connecting map `H^d(Vcirc) → H^{d+1}(Vbul)`.
    pub connecting_rank: BTreeMap<i32, usize>,
    pub kernel: BTreeMap<i32, usize>,
    pub cokernel: BTreeMap<i32, usize>,
    pub h_br: BTreeMap<i32, usize>,
}

/// `H(Br) = ker ⊕ coker` of the map induced by `δ₁`.
pub fn assembly(n: usize) -> Assembly {
    let data = ArityData::get(n);
    let circ = assemble(n, Which::Vcirc, false);
    let bul = assemble(n, Which::Vbul, false);
    let h_vcirc = cohomology_dims(&circ.graded);
    let h_vbul = cohomology_dims(&bul.graded);
    let mut connecting_rank = BTreeMap::new();
    for (&d, src) in &circ.bases {
        let z: Vec<SparseVec> = match circ.graded.d.get(&d) {
            Some(m) => kernel(m),
            None => (0..src.len()).map(|i| vec![(i, Q::one())]).collect(),
        };
        let Some(dst) = bul.bases.get(&(d + 1)) else {
            connecting_rank.insert(d, 0);
            continue;
        };
        let boundaries: Vec<SparseVec> = bul.graded.d.get(&d).map(|m| m.cols.clone()).unwrap_or_default();
        let images: Vec<SparseVec> =
            z.iter().map(|x| dst.project(&data.delta_vec(&src.vector(x)))).collect();
        let base = rank_of(&boundaries);
        let mut all = boundaries;
        all.extend(images);
        connecting_rank.insert(d, rank_of(&all) - base);
    }
    let mut kernel_dims = BTreeMap::new();
    let mut cokernel_dims = BTreeMap::new();
    let mut h_br = BTreeMap::new();
    for d in crate::tree::degrees(n) {
        let k = h_vcirc.get(&d).copied().unwrap_or(0) - connecting_rank.get(&d).copied().unwrap_or(0);
        let c = h_vbul.get(&d).copied().unwrap_or(0) - connecting_rank.get(&(d - 1)).copied().unwrap_or(0);
        kernel_dims.insert(d, k);
        cokernel_dims.insert(d, c);
        h_br.insert(d, k + c);
    }
    Assembly { n, h_vcirc, h_vbul, connecting_rank, kernel: kernel_dims, cokernel: cokernel_dims, h_br }
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiCheck {
    pub n: usize,
    pub all_cocycles: bool,
    /// degree -> (number of monomials, rank of their classes)
    pub ranks: BTreeMap<i32, (usize, usize)>,
}

/// Images of the monomial basis are cocycles with independent classes.
pub fn psi_classes(n: usize) -> PsiCheck {
    let data = ArityData::get(n);
    let c = assemble(n, Which::Br, false);
    let mut by_degree: BTreeMap<i32, Vec<GerMonomial>> = BTreeMap::new();
    for m in ger_basis(n) {
        by_degree.entry(m.degree()).or_default().push(m);
    }
    let mut all_cocycles = true;
    let mut ranks = BTreeMap::new();
    for (d, monos) in by_degree {
        let basis = &c.bases[&d];
        let boundaries: Vec<SparseVec> = c.graded.d.get(&(d - 1)).map(|m| m.cols.clone()).unwrap_or_default();
        let base = rank_of(&boundaries);
        let mut all = boundaries;
        for m in &monos {
            let v = psi(m);
            all_cocycles &= data.delta_vec(&v).is_zero();
            all.push(basis.coords(&v));
        }
        ranks.insert(d, (monos.len(), rank_of(&all) - base));
    }
    PsiCheck { n, all_cocycles, ranks }
}

/// Rank of the completed `u_q` representatives together with the product
/// classes, against `dim H^{2-n}(Vbul(n))`.
pub fn vbul_span_check(n: usize) -> (usize, usize, usize) {
    let d = 2 - n as i32;
    let data = ArityData::get(n);
    let basis = data.basis(d, Which::Vbul);
    let mut vectors: Vec<SparseVec> = ger_basis(n).iter().filter(|m| m.blocks.len() == 2).map(|m| basis.coords(&psi(m))).collect();
    let reps = corolla_representatives(n);
    let count = reps.len();
    vectors.extend(reps.iter().map(|v| basis.coords(v)));
    let expected = h_vbul_prediction(n).get(&d).copied().unwrap_or(0);
    (count, rank_of(&vectors), expected)
}

/// `Σ (-1)^d dim`.
pub fn euler(dims: &BTreeMap<i32, usize>) -> i64 {
    dims.iter().map(|(&d, &v)| if d.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) }).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_numbers() {
        assert_eq!(stirling1(4, 1), 6);
        assert_eq!(stirling1(4, 2), 11);
        assert_eq!(stirling1(4, 3), 6);
        assert_eq!(stirling1(4, 4), 1);
    }

    #[test]
    fn predictions_small() {
        assert_eq!(h_vbul_prediction(2), BTreeMap::from([(0, 2)]));
        assert_eq!(h_vbul_prediction(3), BTreeMap::from([(-1, 7), (0, 1)]));
        let e2 = e2_prediction(3);
        assert_eq!(e2, BTreeMap::from([((2, -1), 6), ((2, 0), 1), ((3, -1), 1)]));
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 2).len(), 3);
        assert_eq!(compositions(4, 4).len(), 1);
    }
}
