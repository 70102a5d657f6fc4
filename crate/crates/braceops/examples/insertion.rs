//! Operadic insertion, the symmetric group action and the map from Ger.

use braceops::operad::{act_vec, ger_basis, insert_vec, psi, t_bracket, t_cup, Permutation};
use braceops::sign::delta_vec;
use braceops::{GerMonomial, TreeVector};

fn show(label: &str, v: &TreeVector) {
    println!("{label} ({} terms)", v.len());
    for (t, c) in v.sorted_terms() {
        println!("  {:>5} {t}", braceops::vector::q_to_string(&c));
    }
}

fn main() {
    show("bracket o_1 bracket", &insert_vec(&t_bracket(), 1, &t_bracket()));

    // Jacobi: the cyclic sum of the nested bracket vanishes
    let nested = insert_vec(&t_bracket(), 1, &t_bracket());
    let mut jacobi = nested.clone();
    for cycle in ["(1,2,3)", "(1,3,2)"] {
        jacobi.add(&act_vec(&Permutation::from_cycles(3, cycle).unwrap(), &nested));
    }
    println!("Jacobi sum is zero: {}\n", jacobi.is_zero());

    show("cup o_2 cup", &insert_vec(&t_cup(), 2, &t_cup()));

    let m: GerMonomial = "{1 2}{3}".parse().unwrap();
    let image = psi(&m);
    show(&format!("\nimage of {m}"), &image);
    println!("closed: {}", delta_vec(&image).is_zero());

    println!("\nGer(3) basis: {}", ger_basis(3).iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "));
}
