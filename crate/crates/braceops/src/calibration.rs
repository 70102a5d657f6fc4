//! Selection of the sign convention.
//!
//! Every candidate [`SignConvention`] is run against the calibrating
//! fixtures; exactly one must reproduce all of them. Anything else is a
//! hard error.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::fixtures::{builtin, Fixture};
use crate::sign::SignConvention;

#[derive(Clone, Debug, Error, Serialize)]
pub enum CalibrationError {
    #[error("no sign convention reproduces the reference fixtures; closest candidate fails {failing:?}")]
    NoMatch { failing: Vec<String> },
    #[error("{0} sign conventions reproduce the reference fixtures; refusing to choose")]
    Ambiguous(usize),
    #[error("reference fixture could not be evaluated: {0}")]
    Broken(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub convention: SignConvention,
    pub fixtures: Vec<String>,
    /// Number of fixtures each rejected candidate fails, in candidate order.
    pub rejected: Vec<usize>,
}

pub fn calibrate_with(fixtures: &[Fixture]) -> Result<Calibration, CalibrationError> {
    let used: Vec<&Fixture> = fixtures.iter().filter(|f| f.calibrate).collect();
    let mut winners = Vec::new();
    let mut rejected = Vec::new();
    let mut closest: Option<Vec<String>> = None;
    for conv in SignConvention::candidates() {
        let mut failing = Vec::new();
        for f in &used {
            if !f.holds(&conv).map_err(|e| CalibrationError::Broken(e.to_string()))? {
                failing.push(f.name.clone());
            }
        }
        if failing.is_empty() {
            winners.push(conv);
        } else {
            rejected.push(failing.len());
            if closest.as_ref().is_none_or(|c| failing.len() < c.len()) {
                closest = Some(failing);
            }
        }
    }
    match winners.len() {
        1 => Ok(Calibration {
            convention: winners[0],
            fixtures: used.iter().map(|f| f.name.clone()).collect(),
            rejected,
        }),
        0 => Err(CalibrationError::NoMatch { failing: closest.unwrap_or_default() }),
        k => Err(CalibrationError::Ambiguous(k)),
    }
}

pub fn calibrate() -> Result<Calibration, CalibrationError> {
    static RESULT: OnceLock<Result<Calibration, CalibrationError>> = OnceLock::new();
    RESULT.get_or_init(|| calibrate_with(&builtin())).clone()
}

/// The calibrated convention. Panics if calibration fails, since no result
/// computed with an unverified convention is meaningful.
pub fn calibrated() -> &'static SignConvention {
    static CONV: OnceLock<SignConvention> = OnceLock::new();
    CONV.get_or_init(|| match calibrate() {
        Ok(c) => c.convention,
        Err(e) => panic!("sign calibration failed: {e}"),
    })
}
