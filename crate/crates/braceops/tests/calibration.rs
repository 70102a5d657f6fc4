use braceops::calibration::calibrate;
use braceops::fixtures::{builtin, check_all};
use braceops::SignConvention;

#[test]
fn unique_convention_reproduces_every_fixture() {
    let cal = calibrate().expect("calibration");
    assert_eq!(cal.convention, SignConvention::STANDARD);
    for out in check_all(&builtin(), &cal.convention) {
        assert!(out.pass, "{} differs by {:?} ({:?})", out.name, out.difference, out.error);
    }
}
