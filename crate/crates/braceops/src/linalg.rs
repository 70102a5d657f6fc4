//! Exact sparse linear algebra over `Q`.
//!
//! Vectors are sorted `(index, value)` lists without zeros. [`Echelon`]
//! keeps a basis in echelon form keyed by leading (largest) index and can
//! record how each basis vector was obtained from the inserted vectors,
//! which yields kernels and solutions of linear systems.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::vector::{parse_q, q_to_string, Q};

pub type SparseVec = Vec<(usize, Q)>;

/// `y + a * x`.
pub fn axpy(y: &[(usize, Q)], a: &Q, x: &[(usize, Q)]) -> SparseVec {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, a * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + a * &x[j].1;
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(x: &[(usize, Q)], a: &Q) -> SparseVec {
    if a.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, v * a)).collect()
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn from_entries(entries: impl IntoIterator<Item = (usize, Q)>) -> SparseVec {
    let mut m: BTreeMap<usize, Q> = BTreeMap::new();
    for (i, v) in entries {
        *m.entry(i).or_insert_with(Q::zero) += v;
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<SparseVec>,
}

#[derive(Debug, Error)]
pub enum MatrixParseError {
    #[error("line {0}: expected `row col p/q`")]
    Line(usize),
    #[error("line {line}: entry ({row}, {col}) outside {rows}x{cols}")]
    Bounds { line: usize, row: usize, col: usize, rows: usize, cols: usize },
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.iter().all(|(i, _)| *i < rows)));
        SparseMatrix { rows, cols }
    }

    pub fn zero(rows: usize, ncols: usize) -> Self {
        SparseMatrix { rows, cols: vec![Vec::new(); ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> Q {
        self.cols[col].iter().find(|(r, _)| *r == row).map(|(_, v)| v.clone()).unwrap_or_else(Q::zero)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((c, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols.len(), cols }
    }

    pub fn mul_vec(&self, x: &[(usize, Q)]) -> SparseVec {
        let mut acc = Vec::new();
        for (c, v) in x {
            acc = axpy(&acc, v, &self.cols[*c]);
        }
        acc
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.rows);
        SparseMatrix { rows: self.rows, cols: other.cols.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Text dump: a `# rows R cols C` header, then one `row col p/q` line per entry.
    pub fn dump(&self) -> String {
        let mut s = format!("# rows {} cols {}\n", self.rows, self.ncols());
        let mut entries: Vec<(usize, usize, &Q)> = Vec::with_capacity(self.nnz());
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                entries.push((*r, c, v));
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        for (r, c, v) in entries {
            let _ = writeln!(s, "{r} {c} {}", q_to_string(v));
        }
        s
    }

    pub fn parse_dump(text: &str) -> Result<SparseMatrix, MatrixParseError> {
        let mut rows = 0;
        let mut ncols = 0;
        let mut entries = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(h) = line.strip_prefix('#') {
                let parts: Vec<&str> = h.split_whitespace().collect();
                if let ["rows", r, "cols", c] = parts.as_slice() {
                    rows = r.parse().map_err(|_| MatrixParseError::Line(k + 1))?;
                    ncols = c.parse().map_err(|_| MatrixParseError::Line(k + 1))?;
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [r, c, v] = parts.as_slice() else { return Err(MatrixParseError::Line(k + 1)) };
            let r: usize = r.parse().map_err(|_| MatrixParseError::Line(k + 1))?;
            let c: usize = c.parse().map_err(|_| MatrixParseError::Line(k + 1))?;
            let v = parse_q(v).map_err(|_| MatrixParseError::Line(k + 1))?;
            entries.push((k + 1, r, c, v));
        }
        let mut cols = vec![Vec::new(); ncols];
        for (line, r, c, v) in entries {
            if r >= rows || c >= ncols {
                return Err(MatrixParseError::Bounds { line, row: r, col: c, rows, cols: ncols });
            }
            cols[c].push((r, v));
        }
        let cols = cols.into_iter().map(from_entries).collect();
        Ok(SparseMatrix { rows, cols })
    }
}

/// Outcome of [`Echelon::insert`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Independent,
    /// Coefficients over previously inserted vectors (empty unless tracking).
    Dependent(SparseVec),
}

/// Incremental echelon basis.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivot_of: HashMap<usize, usize>,
    basis: Vec<SparseVec>,
    track: bool,
    combos: Vec<SparseVec>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records, for each basis vector, its expression in the inserted vectors.
    pub fn tracking() -> Self {
        Echelon { track: true, ..Self::default() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Leading index of each basis vector, in insertion order.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.basis.iter().map(|v| v.last().expect("nonempty").0)
    }

    /// Returns the residual of `v` and the multipliers of used basis vectors.
    fn reduce_full(&self, v: &[(usize, Q)]) -> (SparseVec, Vec<(usize, Q)>) {
        let mut v = v.to_vec();
        let mut used = Vec::new();
        while let Some((lead, c)) = v.last().cloned() {
            let Some(&slot) = self.pivot_of.get(&lead) else { break };
            v = axpy(&v, &-c.clone(), &self.basis[slot]);
            used.push((slot, c));
        }
        (v, used)
    }

    pub fn reduce(&self, v: &[(usize, Q)]) -> SparseVec {
        self.reduce_full(v).0
    }

    pub fn contains(&self, v: &[(usize, Q)]) -> bool {
        self.reduce(v).is_empty()
    }

    fn combination(&self, used: &[(usize, Q)]) -> SparseVec {
        let mut acc = Vec::new();
        for (slot, c) in used {
            acc = axpy(&acc, c, &self.combos[*slot]);
        }
        acc
    }

    pub fn insert(&mut self, v: &[(usize, Q)]) -> Insertion {
        let index = self.inserted;
        self.inserted += 1;
        let (res, used) = self.reduce_full(v);
        if res.is_empty() {
            return Insertion::Dependent(if self.track { self.combination(&used) } else { Vec::new() });
        }
        let lead = res.last().expect("nonempty").1.clone();
        let inv = Q::one() / &lead;
        if self.track {
            // basis = (v - Σ c_k basis_k) / lead
            let mut combo = self.combination(&used);
            combo = axpy(&[(index, Q::one())], &-Q::one(), &combo);
            self.combos.push(scale(&combo, &inv));
        }
        self.pivot_of.insert(res.last().unwrap().0, self.basis.len());
        self.basis.push(scale(&res, &inv));
        Insertion::Independent
    }

    /// Coefficients `x` over inserted vectors with `Σ x_i v_i = target`.
    pub fn solve(&self, target: &[(usize, Q)]) -> Option<SparseVec> {
        assert!(self.track, "solve needs a tracking echelon");
        let (res, used) = self.reduce_full(target);
        res.is_empty().then(|| self.combination(&used))
    }
}

pub fn rank_of(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

pub fn rank(m: &SparseMatrix) -> usize {
    rank_of(&m.cols)
}

/// Basis of `{x : m x = 0}` as vectors over column indices.
pub fn kernel(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut e = Echelon::tracking();
    let mut out = Vec::new();
    for (j, c) in m.cols.iter().enumerate() {
        if let Insertion::Dependent(comb) = e.insert(c) {
            out.push(axpy(&[(j, Q::one())], &-Q::one(), &comb));
        }
    }
    out
}

/// Some `x` with `m x = b`, if one exists.
pub fn solve_membership(m: &SparseMatrix, b: &[(usize, Q)]) -> Option<SparseVec> {
    let mut e = Echelon::tracking();
    for c in &m.cols {
        e.insert(c);
    }
    e.solve(b)
}

/// Vectors of `ambient` completing a basis of `span(sub)` to one of
/// `span(sub) + span(ambient)`, chosen greedily in order.
pub fn quotient_basis(sub: &[SparseVec], ambient: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for v in sub {
        e.insert(v);
    }
    ambient.iter().filter(|v| e.insert(v) == Insertion::Independent).cloned().collect()
}

/// A cochain complex of finite-dimensional spaces: `d[k]` maps degree
/// `k` to degree `k + 1`.
#[derive(Clone, Debug, Default)]
pub struct GradedComplex {
    pub dims: BTreeMap<i32, usize>,
    pub d: BTreeMap<i32, SparseMatrix>,
}

impl GradedComplex {
    pub fn dim(&self, k: i32) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    /// Ranks of all differentials, computed in parallel.
    pub fn ranks(&self) -> BTreeMap<i32, usize> {
        let items: Vec<(&i32, &SparseMatrix)> = self.d.iter().collect();
        items.par_iter().map(|(k, m)| (**k, rank(m))).collect()
    }

    /// Checks `d[k+1] * d[k] = 0` for every `k`.
    pub fn squares_to_zero(&self) -> bool {
        self.d.iter().all(|(k, m)| self.d.get(&(k + 1)).is_none_or(|next| next.mul(m).is_zero()))
    }
}

pub fn cohomology_dims(c: &GradedComplex) -> BTreeMap<i32, usize> {
    let ranks = c.ranks();
    c.dims
        .keys()
        .map(|&k| {
            let out = ranks.get(&k).copied().unwrap_or(0);
            let inc = ranks.get(&(k - 1)).copied().unwrap_or(0);
            (k, c.dim(k) - out - inc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::{q, q_int};

    fn col(entries: &[(usize, i64)]) -> SparseVec {
        from_entries(entries.iter().map(|&(i, v)| (i, q_int(v))))
    }

    #[test]
    fn rank_kernel_solve() {
        // columns: e0 + e1, e1 + e2, e0 - e2 (dependent: c0 - c1)
        let m = SparseMatrix::new(3, vec![col(&[(0, 1), (1, 1)]), col(&[(1, 1), (2, 1)]), col(&[(0, 1), (2, -1)])]);
        assert_eq!(rank(&m), 2);
        let k = kernel(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).is_empty());
        let b = col(&[(0, 2), (1, 3), (2, 1)]);
        let x = solve_membership(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert!(solve_membership(&m, &col(&[(0, 1)])).is_none());
    }

    #[test]
    fn fractional_pivots() {
        let m = SparseMatrix::new(2, vec![vec![(0, q(1, 3)), (1, q(2, 3))], vec![(0, q(1, 2)), (1, q(1, 1))]]);
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn dump_round_trip() {
        let m = SparseMatrix::new(2, vec![vec![(1, q(-3, 4))], vec![], vec![(0, q(5, 1))]]);
        let back = SparseMatrix::parse_dump(&m.dump()).unwrap();
        assert_eq!(back, m);
        assert!(SparseMatrix::parse_dump("# rows 1 cols 1\n3 0 1/1\n").is_err());
    }

    #[test]
    fn quotient() {
        let sub = vec![col(&[(0, 1)])];
        let amb = vec![col(&[(0, 2)]), col(&[(1, 1)]), col(&[(0, 1), (1, 1)])];
        assert_eq!(quotient_basis(&sub, &amb), vec![col(&[(1, 1)])]);
    }

    #[test]
    fn two_term_complex() {
        let mut c = GradedComplex::default();
        c.dims.insert(0, 2);
        c.dims.insert(1, 2);
        c.d.insert(0, SparseMatrix::new(2, vec![col(&[(0, 1)]), col(&[(0, 1)])]));
        assert_eq!(cohomology_dims(&c), BTreeMap::from([(0, 1), (1, 1)]));
        assert!(c.squares_to_zero());
    }
}
