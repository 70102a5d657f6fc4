//! Sign calibration against the reference fixtures, and evaluation of
//! ad hoc expressions.

use braceops::calibration::calibrate;
use braceops::expr::eval;
use braceops::fixtures::{builtin, check_all};

fn main() {
    let cal = calibrate().expect("calibration");
    println!("convention: {}", cal.convention.describe());
    println!("rejected candidates: {}", cal.rejected.len());
    for o in check_all(&builtin(), &cal.convention) {
        println!("{} {}", if o.pass { "ok  " } else { "FAIL" }, o.name);
    }
    let v = eval("(insert (r (* (1) (2))) 1 (r (1 (2))))").expect("expression");
    println!("\ncup o_1 string = {}", v.sorted_terms().iter().map(|(t, c)| format!("{c} {t}")).collect::<Vec<_>>().join(" + "));
}
