//! Pointer-free mutable view of a brace tree used by the tree surgeries.
//!
//! Every vertex remembers a tag naming the edge that enters it. Re-encoding
//! in pre-order yields the tags of the non-root edges in their new order,
//! from which Koszul signs are read off.

use crate::tree::{BraceTree, NEUTRAL};

/// Tag of the edge entering the lowest vertex (not an odd variable).
pub(crate) const ROOT_TAG: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Arena {
    pub label: Vec<u8>,
    pub children: Vec<Vec<usize>>,
    pub tag: Vec<u32>,
    pub top: usize,
}

impl Arena {
    /// Vertices are indexed in pre-order; the edge into vertex `v > 0`
    /// gets tag `offset + v - 1`.
    pub fn from_tree(t: &BraceTree, offset: u32) -> Arena {
        let code = t.code();
        let mut label = Vec::with_capacity(code.len());
        let mut children = vec![Vec::new(); code.len()];
        let mut tag = Vec::with_capacity(code.len());
        let mut stack: Vec<(usize, u8)> = Vec::new();
        for (v, &(l, c)) in code.iter().enumerate() {
            label.push(l);
            tag.push(if v == 0 { ROOT_TAG } else { offset + v as u32 - 1 });
            if let Some(top) = stack.last_mut() {
                children[top.0].push(v);
                top.1 -= 1;
            }
            while matches!(stack.last(), Some(&(_, 0))) {
                stack.pop();
            }
            if c > 0 {
                stack.push((v, c));
            }
        }
        Arena { label, children, tag, top: 0 }
    }

    pub fn push(&mut self, label: u8, children: Vec<usize>, tag: u32) -> usize {
        self.label.push(label);
        self.children.push(children);
        self.tag.push(tag);
        self.label.len() - 1
    }

    pub fn parent_of(&self, v: usize) -> Option<(usize, usize)> {
        self.children.iter().enumerate().find_map(|(p, ch)| ch.iter().position(|&c| c == v).map(|k| (p, k)))
    }

    /// Re-encodes the tree reachable from `top`; returns it with the tags of
    /// its non-root edges in pre-order. Returns `None` when a neutral vertex
    /// has fewer than two children.
    pub fn encode(&self) -> Option<(BraceTree, Vec<u32>)> {
        let mut code = Vec::with_capacity(self.label.len());
        let mut tags = Vec::with_capacity(self.label.len());
        let mut stack = vec![self.top];
        while let Some(v) = stack.pop() {
            let ch = &self.children[v];
            if self.label[v] == NEUTRAL && ch.len() < 2 {
                return None;
            }
            code.push((self.label[v], ch.len() as u8));
            if v != self.top {
                tags.push(self.tag[v]);
            }
            stack.extend(ch.iter().rev());
        }
        Some((BraceTree::from_code(code), tags))
    }
}

/// Sign of the permutation taking `reference` to `actual` (same tag sets).
pub(crate) fn reorder_sign(reference: &[u32], actual: &[u32]) -> i8 {
    debug_assert_eq!(reference.len(), actual.len());
    let rank: Vec<usize> = actual
        .iter()
        .map(|a| reference.iter().position(|r| r == a).expect("tag missing from reference"))
        .collect();
    let mut inversions = 0usize;
    for i in 0..rank.len() {
        for j in i + 1..rank.len() {
            if rank[i] > rank[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arena_round_trip() {
        for s in ["(r (1))", "(r (3 (* (1) (* (6) (5)) (4)) (2)))", "(r (* (1 (2)) (3)))"] {
            let t: BraceTree = s.parse().unwrap();
            let a = Arena::from_tree(&t, 0);
            let (back, tags) = a.encode().unwrap();
            assert_eq!(back, t);
            assert_eq!(tags, (0..t.edge_count() as u32).collect::<Vec<_>>());
        }
    }

    #[test]
    fn reorder_sign_counts_inversions() {
        assert_eq!(reorder_sign(&[0, 1, 2], &[0, 1, 2]), 1);
        assert_eq!(reorder_sign(&[0, 1, 2], &[1, 0, 2]), -1);
        assert_eq!(reorder_sign(&[0, 1, 2], &[2, 0, 1]), 1);
    }
}
