//! Signed shuffles of odd letters and the evaluation of trees into words.

use braceops::shuffle::{branch_shuffle, colie_dim, f_tree, shuffle_words, word_text, xi_generators};
use braceops::BraceTree;

fn main() {
    let s = shuffle_words(&[1, 2], &[3]);
    println!("X1.X2 * X3 =");
    for (w, c) in s.iter() {
        println!("  {:>3} {}", braceops::vector::q_to_string(c), word_text(w));
    }

    let t: BraceTree = "(r (1 (2 (3))))".parse().unwrap();
    let f = f_tree(&t).expect("neutral-free");
    println!("\nf{t} = {:?}", f.iter().map(|(w, c)| format!("{} {}", c, word_text(w))).collect::<Vec<_>>());

    let fork: BraceTree = "(r (* (1 (2)) (3)))".parse().unwrap();
    println!("branch shuffle of {fork}:");
    for (w, c) in branch_shuffle(&fork).iter() {
        println!("  {:>3} {}", braceops::vector::q_to_string(c), word_text(w));
    }

    for n in 2..=5 {
        println!("n={n}: coLie dim {}, fork generators {}", colie_dim(n), xi_generators(n).len());
    }
}
