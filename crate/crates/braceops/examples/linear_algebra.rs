//! Exact sparse linear algebra over the rationals.

use braceops::linalg::{cohomology_dims, Insertion, kernel, rank, solve_membership, GradedComplex};
use braceops::vector::{q, q_int, q_to_string};
use braceops::{Echelon, SparseMatrix};
use std::collections::BTreeMap;

fn main() {
    // columns (1, 2, 3), (2, 4, 6), (0, 1, 1/2)
    let m = SparseMatrix::new(
        3,
        vec![
            vec![(0, q_int(1)), (1, q_int(2)), (2, q_int(3))],
            vec![(0, q_int(2)), (1, q_int(4)), (2, q_int(6))],
            vec![(1, q_int(1)), (2, q(1, 2))],
        ],
    );
    print!("{}", m.dump());
    println!("rank {}", rank(&m));
    for k in kernel(&m) {
        println!("kernel vector {:?}", k.iter().map(|(i, c)| format!("{i}:{}", q_to_string(c))).collect::<Vec<_>>());
    }

    let target = vec![(0, q_int(1)), (1, q_int(3)), (2, q(7, 2))];
    println!("solution {:?}", solve_membership(&m, &target).map(|x| x.len()));

    let mut e = Echelon::tracking();
    for col in &m.cols {
        match e.insert(col) {
            Insertion::Independent => println!("insert -> independent"),
            Insertion::Dependent(c) => {
                println!("insert -> dependent {:?}", c.iter().map(|(i, x)| format!("{}*v{i}", q_to_string(x))).collect::<Vec<_>>())
            }
        }
    }

    // a two-term complex Q -> Q^2 -> Q with d^2 = 0
    let mut d = BTreeMap::new();
    d.insert(0, SparseMatrix::new(2, vec![vec![(0, q_int(1)), (1, q_int(1))]]));
    d.insert(1, SparseMatrix::new(1, vec![vec![(0, q_int(1))], vec![(0, q_int(-1))]]));
    let c = GradedComplex { dims: BTreeMap::from([(0, 1), (1, 2), (2, 1)]), d };
    println!("squares to zero {}, cohomology {:?}", c.squares_to_zero(), cohomology_dims(&c));
}
