//! The signed differential, its sector split and the dual contraction map.

use braceops::sign::{delta, delta_dual, delta_split, delta_vec};
use braceops::BraceTree;

fn show(label: &str, v: &braceops::TreeVector) {
    println!("{label}:");
    for (t, c) in v.sorted_terms() {
        println!("  {:>5} {t}", braceops::vector::q_to_string(&c));
    }
}

fn main() {
    let t: BraceTree = "(r (3 (* (1) (* (6) (5)) (4)) (2)))".parse().unwrap();
    let d = delta(&t);
    show(&format!("delta {t}"), &d);
    println!("delta^2 vanishes: {}", delta_vec(&d).is_zero());

    let fork: BraceTree = "(r (1 (2) (3)))".parse().unwrap();
    let (d0, d1) = delta_split(&fork);
    show("sector-preserving part", &d0);
    show("sector-raising part", &d1);

    let cup: BraceTree = "(r (* (1) (2)))".parse().unwrap();
    show(&format!("dual differential of {cup}"), &delta_dual(&cup));
}
