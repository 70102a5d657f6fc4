//! Cohomology of the brace complex and its two sectors, against Ger.

use braceops::cohomology::{assembly, cohomology, h_vbul_prediction, Which};
use braceops::operad::ger_dims;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    for k in 1..=n {
        let h = cohomology(k, Which::Br, false);
        let nonzero: Vec<_> = h.iter().filter(|(_, v)| **v > 0).collect();
        println!("H(Br({k}))     {nonzero:?}");
        println!("Ger({k})       {:?}", ger_dims(k).iter().collect::<Vec<_>>());
        let dual: Vec<_> = cohomology(k, Which::Vcirc, true).into_iter().filter(|(_, v)| *v > 0).collect();
        println!("H(Vcirc*({k})) {dual:?}");
        if k >= 2 {
            let vb: Vec<_> = cohomology(k, Which::Vbul, false).into_iter().filter(|(_, v)| *v > 0).collect();
            println!("H(Vbul({k}))   {vb:?} predicted {:?}", h_vbul_prediction(k));
        }
        let a = assembly(k);
        println!("connecting map: kernel {:?} cokernel {:?}\n", a.kernel, a.cokernel);
    }
}
