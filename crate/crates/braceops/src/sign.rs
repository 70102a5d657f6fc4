//! The differential on brace trees and its transpose.
//!
//! Non-root edges are odd variables ordered by pre-order of their upper
//! vertex. A term of `δ` is obtained by blowing one vertex up into a branch
//! of two vertices joined by a new edge; its sign is the sign of the
//! permutation reordering the reference monomial (new edge, old edges) into
//! the pre-order of the new tree. The old edge entering the blown-up vertex
//! enters the lower vertex of the branch.
//!
//! `SignConvention` collects the remaining binary choices. The admissible
//! assignment is fixed by [`crate::calibration`].

use serde::Serialize;

use crate::arena::{reorder_sign, Arena, ROOT_TAG};
use crate::tree::{BraceTree, Sector, NEUTRAL};
use crate::vector::TreeVector;

const NEW_TAG: u32 = ROOT_TAG - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignConvention {
    /// Negate the terms with a neutral vertex below a labeled one.
    pub flip_lower: bool,
    /// Negate the terms with a labeled vertex below a neutral one.
    pub flip_upper: bool,
    /// Negate the terms splitting a neutral vertex.
    pub flip_neutral: bool,
    /// Put the new edge last instead of first in the reference monomial.
    pub new_edge_last: bool,
    /// In `T ∘_i S`, list the edges of `S` before those of `T`.
    pub guest_first: bool,
}

impl SignConvention {
    pub const STANDARD: SignConvention = SignConvention {
        flip_lower: false,
        flip_upper: false,
        flip_neutral: false,
        new_edge_last: false,
        guest_first: false,
    };

    /// All 32 candidate assignments, in a fixed order.
    pub fn candidates() -> Vec<SignConvention> {
        (0u8..32)
            .map(|b| SignConvention {
                flip_lower: b & 1 != 0,
                flip_upper: b & 2 != 0,
                flip_neutral: b & 4 != 0,
                new_edge_last: b & 8 != 0,
                guest_first: b & 16 != 0,
            })
            .collect()
    }

    pub fn describe(&self) -> String {
        format!(
            "edges=preorder new_edge={} host_guest={} flips(lower,upper,neutral)=({},{},{})",
            if self.new_edge_last { "last" } else { "first" },
            if self.guest_first { "guest-first" } else { "host-first" },
            self.flip_lower as u8,
            self.flip_upper as u8,
            self.flip_neutral as u8,
        )
    }

    fn family_sign(&self, kind: Split) -> i8 {
        let flip = match kind {
            Split::NeutralBelow => self.flip_lower,
            Split::NeutralAbove => self.flip_upper,
            Split::Neutral => self.flip_neutral,
        };
        if flip {
            -1
        } else {
            1
        }
    }
}

/// The three families of terms of the differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    /// A labeled vertex `j` becomes neutral-below-`j`.
    NeutralBelow,
    /// A labeled vertex `j` becomes `j`-below-neutral.
    NeutralAbove,
    /// A neutral vertex becomes two neutral vertices.
    Neutral,
}

/// Calls `emit(tree, sign)` for every term of `δ(t)`.
pub fn for_each_delta_term(conv: &SignConvention, t: &BraceTree, mut emit: impl FnMut(BraceTree, i8, Split)) {
    let base = Arena::from_tree(t, 0);
    let m = t.edge_count() as u32;
    let reference: Vec<u32> = if conv.new_edge_last {
        (0..m).chain(std::iter::once(NEW_TAG)).collect()
    } else {
        std::iter::once(NEW_TAG).chain(0..m).collect()
    };
    for x in 0..base.label.len() {
        let ch = base.children[x].clone();
        let p = ch.len();
        for a in 0..=p {
            for b in a..=p {
                let block = b - a;
                let outer = p - block;
                let kinds: &[Split] = if base.label[x] == NEUTRAL {
                    &[Split::Neutral]
                } else {
                    &[Split::NeutralBelow, Split::NeutralAbove]
                };
                for &kind in kinds {
                    let mut arena = base.clone();
                    match kind {
                        // neutral vertex takes x's place, x sits on top with the block
                        Split::NeutralBelow => {
                            if outer + 1 < 2 {
                                continue;
                            }
                            let mut lower: Vec<usize> = ch[..a].to_vec();
                            lower.push(x);
                            lower.extend_from_slice(&ch[b..]);
                            let n = arena.push(NEUTRAL, lower, arena.tag[x]);
                            arena.children[x] = ch[a..b].to_vec();
                            arena.tag[x] = NEW_TAG;
                            replace_in_parent(&mut arena, x, n);
                        }
                        Split::NeutralAbove | Split::Neutral => {
                            if block < 2 || (kind == Split::Neutral && outer + 1 < 2) {
                                continue;
                            }
                            let n = arena.push(NEUTRAL, ch[a..b].to_vec(), NEW_TAG);
                            let mut lower: Vec<usize> = ch[..a].to_vec();
                            lower.push(n);
                            lower.extend_from_slice(&ch[b..]);
                            arena.children[x] = lower;
                        }
                    }
                    if let Some((tree, tags)) = arena.encode() {
                        let sign = reorder_sign(&reference, &tags) * conv.family_sign(kind);
                        emit(tree, sign, kind);
                    }
                }
            }
        }
    }
}

fn replace_in_parent(arena: &mut Arena, old: usize, new: usize) {
    if arena.top == old {
        arena.top = new;
    } else {
        let (p, k) = arena.parent_of(old).expect("non-top vertex has a parent");
        arena.children[p][k] = new;
    }
}

pub fn delta_in(conv: &SignConvention, t: &BraceTree) -> TreeVector {
    let mut out = TreeVector::new();
    for_each_delta_term(conv, t, |tree, sign, _| out.add_signed(tree, sign));
    out
}

/// `(δ₀ t, δ₁ t)`: the sector-preserving part and the part leaving `Vcirc`.
pub fn delta_split_in(conv: &SignConvention, t: &BraceTree) -> (TreeVector, TreeVector) {
    let d = delta_in(conv, t);
    let own = t.sector();
    (d.restrict(|s| s.sector() == own), d.restrict(|s| s.sector() != own))
}

/// Transpose of `δ`, computed directly: contract each edge touching a
/// neutral vertex, with sign `(-1)^(position of the edge)` adjusted by the
/// convention.
pub fn delta_dual_in(conv: &SignConvention, t: &BraceTree) -> TreeVector {
    let base = Arena::from_tree(t, 0);
    let m = t.edge_count();
    let mut out = TreeVector::new();
    for u in 0..base.label.len() {
        for (k, &v) in base.children[u].iter().enumerate() {
            let (lu, lv) = (base.label[u], base.label[v]);
            let kind = match (lu == NEUTRAL, lv == NEUTRAL) {
                (false, false) => continue,
                (false, true) => Split::NeutralAbove,
                (true, false) => Split::NeutralBelow,
                (true, true) => Split::Neutral,
            };
            let mut arena = base.clone();
            let mut merged = base.children[u][..k].to_vec();
            merged.extend_from_slice(&base.children[v]);
            merged.extend_from_slice(&base.children[u][k + 1..]);
            arena.children[u] = merged;
            arena.label[u] = if lu == NEUTRAL { lv } else { lu };
            // edge into v sits at pre-order position v - 1
            let pos = v - 1;
            let moves = if conv.new_edge_last { m - 1 - pos } else { pos };
            let sign = if moves % 2 == 0 { 1 } else { -1 } * conv.family_sign(kind);
            let (tree, _) = arena.encode().expect("contraction keeps neutral valency");
            out.add_signed(tree, sign);
        }
    }
    out
}

/// `(δ₀* t, δ₁* t)`.
pub fn delta_dual_split_in(conv: &SignConvention, t: &BraceTree) -> (TreeVector, TreeVector) {
    let d = delta_dual_in(conv, t);
    let own = t.sector();
    (d.restrict(|s| s.sector() == own), d.restrict(|s| s.sector() != own))
}

pub fn delta(t: &BraceTree) -> TreeVector {
    delta_in(crate::calibration::calibrated(), t)
}

pub fn delta_split(t: &BraceTree) -> (TreeVector, TreeVector) {
    delta_split_in(crate::calibration::calibrated(), t)
}

pub fn delta_dual(t: &BraceTree) -> TreeVector {
    delta_dual_in(crate::calibration::calibrated(), t)
}

pub fn delta_dual_split(t: &BraceTree) -> (TreeVector, TreeVector) {
    delta_dual_split_in(crate::calibration::calibrated(), t)
}

pub fn delta_vec(v: &TreeVector) -> TreeVector {
    v.map_linear(delta)
}

/// `δ₀` extended linearly: each term keeps only its own sector.
pub fn delta0_vec(v: &TreeVector) -> TreeVector {
    v.map_linear(|t| delta_split(t).0)
}

pub fn delta_dual_vec(v: &TreeVector) -> TreeVector {
    v.map_linear(delta_dual)
}

pub fn delta0_dual_vec(v: &TreeVector) -> TreeVector {
    v.map_linear(|t| delta_dual_split(t).0)
}

pub fn delta1_dual_vec(v: &TreeVector) -> TreeVector {
    v.map_linear(|t| if t.sector() == Sector::Vbul { delta_dual_split(t).1 } else { TreeVector::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> BraceTree {
        s.parse().unwrap()
    }

    #[test]
    fn delta_of_two_vertex_string() {
        let d = delta_in(&SignConvention::STANDARD, &t("(r (1 (2)))"));
        let want = TreeVector::parse_terms("[+1 (r (* (1) (2))) -1 (r (* (2) (1)))]").unwrap();
        assert_eq!(d, want);
    }

    #[test]
    fn univalent_and_binary_corollas_are_closed() {
        let c = SignConvention::STANDARD;
        assert!(delta_in(&c, &t("(r (1))")).is_zero());
        assert!(delta_in(&c, &t("(r (* (1) (2)))")).is_zero());
    }

    #[test]
    fn dual_of_cup() {
        let d = delta_dual_in(&SignConvention::STANDARD, &t("(r (* (1) (2)))"));
        let want = TreeVector::parse_terms("[+1 (r (1 (2))) -1 (r (2 (1)))]").unwrap();
        assert_eq!(d, want);
    }

    #[test]
    fn candidates_are_distinct() {
        let mut c = SignConvention::candidates();
        c.sort();
        c.dedup();
        assert_eq!(c.len(), 32);
    }
}
