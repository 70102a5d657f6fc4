use braceops::linalg::{kernel, rank, solve_membership, Echelon};
use braceops::vector::q;
use braceops::SparseMatrix;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = SparseMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=3), r), c).prop_map(move |cols| {
            let cols = cols
                .into_iter()
                .map(|col| col.into_iter().enumerate().filter(|(_, (a, _))| *a != 0).map(|(i, (a, b))| (i, q(a, b))).collect())
                .collect();
            SparseMatrix::new(r, cols)
        })
    })
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(m in matrix()) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn kernel_has_complementary_dimension(m in matrix()) {
        let k = kernel(&m);
        prop_assert_eq!(k.len() + rank(&m), m.ncols());
        for v in &k {
            prop_assert!(m.mul_vec(v).is_empty());
        }
    }

    #[test]
    fn images_are_solvable(m in matrix(), x in prop::collection::vec(-2i64..=2, 6)) {
        let x: Vec<_> = x.into_iter().take(m.ncols()).enumerate().filter(|(_, a)| *a != 0).map(|(i, a)| (i, q(a, 1))).collect();
        let b = m.mul_vec(&x);
        let sol = solve_membership(&m, &b);
        prop_assert!(sol.is_some());
        prop_assert_eq!(m.mul_vec(&sol.unwrap()), b);
    }

    #[test]
    fn dump_round_trips(m in matrix()) {
        prop_assert_eq!(SparseMatrix::parse_dump(&m.dump()).unwrap(), m);
    }

    #[test]
    fn echelon_rank_matches(m in matrix()) {
        let mut e = Echelon::new();
        for c in &m.cols {
            e.insert(c);
        }
        prop_assert_eq!(e.rank(), rank(&m));
    }
}
