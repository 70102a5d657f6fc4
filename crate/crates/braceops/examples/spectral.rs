//! Pages of the spectral sequence of the child-count filtration.

use braceops::cohomology::{e1_prediction, e2_prediction, spectral_pages};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    for p in spectral_pages(n) {
        println!("E_{}:", p.r);
        for e in p.entries.iter().filter(|e| e.dim > 0) {
            println!("  q={} degree={} dim={}", e.q, e.degree, e.dim);
        }
    }
    println!("predicted E_1 {:?}", e1_prediction(n));
    println!("predicted E_2 {:?}", e2_prediction(n));
}
