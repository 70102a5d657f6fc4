//! Parse brace trees, read off their gradings, and enumerate a basis.

use braceops::tree::{degrees, enumerate, enumerate_all};
use braceops::BraceTree;

fn main() {
    let t: BraceTree = "(r (3 (* (1) (* (6) (5)) (4)) (2)))".parse().expect("valid tree");
    println!("tree      {t}");
    println!("arity     {}", t.arity());
    println!("neutral   {}", t.neutral_count());
    println!("degree    {}", t.degree());
    println!("sector    {:?}", t.sector());

    let fork: BraceTree = "(r (* (1 (3)) (2)))".parse().unwrap();
    println!("\n{fork} sits in {:?} at filtration level {:?}", fork.sector(), fork.filtration_level());

    for bad in ["(r (* (1)))", "(r (1) (2))", "(r (1 (1)))"] {
        println!("reject {bad:<14} {}", bad.parse::<BraceTree>().unwrap_err());
    }

    for n in 1..=4 {
        let sizes: Vec<String> = degrees(n).into_iter().map(|d| format!("{d}:{}", enumerate(n, d).len())).collect();
        println!("Br({n}) has {} trees, by degree {}", enumerate_all(n).len(), sizes.join(" "));
    }

    println!("\narity 2:");
    for t in enumerate_all(2) {
        println!("  {t:<24} degree {}", t.degree());
    }
}
