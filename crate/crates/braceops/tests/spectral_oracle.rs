//! Pages computed straight from the subspaces
//! `A^q_r = {x ∈ F^q : δx ∈ F^{q-r}}` and
//! `E^q_r = A^q_r / (δ A^{q+r-1}_{r-1} + A^{q-1}_{r-1})`,
//! compared with the pivot-count implementation.

use std::collections::BTreeMap;

use braceops::cohomology::{spectral_pages, ArityData, Basis, Which};
use braceops::linalg::{from_entries, kernel, rank_of, SparseVec};
use braceops::{BraceTree, SparseMatrix};
use num_traits::One;

struct Direct {
    data: std::sync::Arc<ArityData>,
    bases: BTreeMap<i32, Basis>,
}

fn level(t: &BraceTree) -> usize {
    t.filtration_level().unwrap()
}

impl Direct {
    fn new(n: usize) -> Self {
        let data = ArityData::get(n);
        let bases = (-(n as i32) - 1..=2).map(|d| (d, data.basis(d, Which::Vbul))).collect();
        Direct { data, bases }
    }

    /// `A^q_r` in degree `d`; `r = None` means cycles.
    fn a(&self, d: i32, q: usize, r: Option<usize>) -> Vec<SparseVec> {
        let src = &self.bases[&d];
        let dst = &self.bases[&(d + 1)];
        let idx: Vec<usize> = (0..src.len()).filter(|&i| level(&src.trees[i]) <= q).collect();
        let bound = r.map(|r| q as i64 - r as i64).unwrap_or(i64::MIN);
        let cols = idx
            .iter()
            .map(|&i| {
                from_entries(
                    self.data.delta(&src.trees[i]).iter().filter(|(t, _)| level(t) as i64 > bound).map(|(t, c)| (dst.position(t).unwrap(), c.clone())),
                )
            })
            .collect();
        kernel(&SparseMatrix::new(dst.len(), cols)).into_iter().map(|k| k.into_iter().map(|(j, c)| (idx[j], c)).collect()).collect()
    }

    fn delta(&self, d: i32, x: &[(usize, braceops::Q)]) -> SparseVec {
        self.bases[&(d + 1)].coords(&self.data.delta_vec(&self.bases[&d].vector(x)))
    }

    fn page(&self, d: i32, q: usize, r: usize) -> usize {
        let num = if r == 0 { vec![] } else { self.a(d, q, Some(r)) };
        let mut den: Vec<SparseVec> = self.a(d - 1, q + r - 1, Some(r - 1)).iter().map(|x| self.delta(d - 1, x)).collect();
        den.extend(self.a(d, q - 1, Some(r - 1)));
        num.len() - rank_of(&den)
    }

    fn infinity(&self, d: i32, q: usize) -> usize {
        let prev = &self.bases[&(d - 1)];
        let boundaries: Vec<SparseVec> = (0..prev.len()).map(|i| self.delta(d - 1, &[(i, braceops::Q::one())])).collect();
        let span = |l: usize| {
            let mut v = boundaries.clone();
            v.extend(self.a(d, l, None));
            rank_of(&v)
        };
        span(q) - span(q - 1)
    }
}

#[test]
fn pivot_counts_agree_with_subspace_definition() {
    for n in 2..=4 {
        let direct = Direct::new(n);
        for page in spectral_pages(n) {
            for e in &page.entries {
                let want = match page.r.as_str() {
                    "inf" => direct.infinity(e.degree, e.q),
                    r => direct.page(e.degree, e.q, r.parse().unwrap()),
                };
                assert_eq!(e.dim, want, "n={n} E_{} q={} degree={}", page.r, e.q, e.degree);
            }
        }
    }
}
