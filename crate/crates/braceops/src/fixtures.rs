//! Hand-transcribed reference identities stored as text files.
//!
//! A fixture file holds `key: value` entries; a value continues on following
//! lines while its parentheses or brackets are unbalanced. Lines starting
//! with `#` are comments.
//!
//! ```text
//! name: delta_string_pair
//! calibrate: yes
//! input: (delta (r (1 (2))))
//! expect: [ +1 (r (* (1) (2)))
//!           -1 (r (* (2) (1))) ]
//! ```

use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::expr::{eval_in, ExprError};
use crate::sign::SignConvention;
use crate::vector::{TermJson, TreeVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub input: String,
    pub expect: String,
    /// Whether the fixture takes part in choosing the sign convention.
    pub calibrate: bool,
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("no fixture files (*.fix) in {0}")]
    Empty(String),
    #[error("{name}: {source}")]
    Eval { name: String, source: ExprError },
}

fn depth_change(s: &str) -> i32 {
    s.chars().map(|c| match c {
        '(' | '[' => 1,
        ')' | ']' => -1,
        _ => 0,
    }).sum()
}

impl Fixture {
    pub fn parse(origin: &str, text: &str) -> Result<Fixture, FixtureError> {
        let err = |msg: String| FixtureError::Format { path: origin.to_string(), msg };
        let mut entries: Vec<(String, String)> = Vec::new();
        let mut depth = 0;
        for line in text.lines() {
            let trimmed = line.trim();
            if depth == 0 && (trimmed.is_empty() || trimmed.starts_with('#')) {
                continue;
            }
            if depth > 0 {
                let last = entries.last_mut().expect("continuation follows an entry");
                last.1.push('\n');
                last.1.push_str(trimmed);
            } else {
                let (k, v) = trimmed.split_once(':').ok_or_else(|| err(format!("expected `key: value`, got `{trimmed}`")))?;
                entries.push((k.trim().to_string(), v.trim().to_string()));
            }
            depth += depth_change(trimmed);
            if depth < 0 {
                return Err(err("unbalanced parentheses".into()));
            }
        }
        if depth != 0 {
            return Err(err("unterminated value".into()));
        }
        let get = |key: &str| {
            entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone()).ok_or_else(|| err(format!("missing `{key}`")))
        };
        for (k, _) in &entries {
            if !["name", "input", "expect", "calibrate"].contains(&k.as_str()) {
                return Err(err(format!("unknown key `{k}`")));
            }
        }
        let calibrate = match entries.iter().find(|(k, _)| k == "calibrate").map(|(_, v)| v.as_str()) {
            None | Some("no") => false,
            Some("yes") => true,
            Some(other) => return Err(err(format!("calibrate must be yes/no, got `{other}`"))),
        };
        Ok(Fixture { name: get("name")?, input: get("input")?, expect: get("expect")?, calibrate })
    }

    /// `(input, expected)` evaluated under `conv`.
    pub fn evaluate(&self, conv: &SignConvention) -> Result<(TreeVector, TreeVector), FixtureError> {
        let wrap = |source| FixtureError::Eval { name: self.name.clone(), source };
        Ok((eval_in(conv, &self.input).map_err(wrap)?, eval_in(conv, &self.expect).map_err(wrap)?))
    }

    pub fn holds(&self, conv: &SignConvention) -> Result<bool, FixtureError> {
        let (a, b) = self.evaluate(conv)?;
        Ok(a == b)
    }
}

/// The fixtures shipped with the crate, compiled in.
pub fn builtin() -> Vec<Fixture> {
    macro_rules! fix {
        ($($f:literal),* $(,)?) => {
            vec![$(Fixture::parse($f, include_str!(concat!("../fixtures/", $f))).expect("builtin fixture parses")),*]
        };
    }
    fix![
        "delta_string_pair.fix",
        "dual_cup.fix",
        "delta_six_labels.fix",
        "insert_string_into_cup.fix",
        "product_square.fix",
        "psi_product_bracket.fix",
        "bracket_square.fix",
        "delta_fork.fix",
        "bracket_insert_cup.fix",
        "cup_insert_bracket.fix",
        "swapped_cup_insert_bracket.fix",
        "delta_corolla3.fix",
        "leibniz_bracket_cup.fix",
        "jacobi.fix",
    ]
}

pub fn load_dir(dir: &Path) -> Result<Vec<Fixture>, FixtureError> {
    let io = |source| FixtureError::Io { path: dir.display().to_string(), source };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "fix"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(FixtureError::Empty(dir.display().to_string()));
    }
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|source| FixtureError::Io { path: p.display().to_string(), source })?;
            Fixture::parse(&p.display().to_string(), &text)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub pass: bool,
    /// `computed - expected`, empty on success.
    pub difference: Vec<TermJson>,
    pub error: Option<String>,
}

pub fn check_all(fixtures: &[Fixture], conv: &SignConvention) -> Vec<FixtureOutcome> {
    fixtures
        .iter()
        .map(|f| match f.evaluate(conv) {
            Ok((mut a, b)) => {
                a.sub(&b);
                FixtureOutcome { name: f.name.clone(), pass: a.is_zero(), difference: a.to_json(), error: None }
            }
            Err(e) => FixtureOutcome { name: f.name.clone(), pass: false, difference: vec![], error: Some(e.to_string()) },
        })
        .collect()
}

pub fn check_dir(dir: &Path, conv: &SignConvention) -> Result<Vec<FixtureOutcome>, FixtureError> {
    Ok(check_all(&load_dir(dir)?, conv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiline_values() {
        let f = Fixture::parse("t", "# c\nname: x\ninput: (delta\n  (r (1 (2))))\nexpect: [\n +1 (r (* (1) (2)))\n -1 (r (* (2) (1)))\n]\n").unwrap();
        assert_eq!(f.name, "x");
        assert!(!f.calibrate);
        assert!(f.holds(&SignConvention::STANDARD).unwrap());
    }

    #[test]
    fn rejects_malformed() {
        assert!(Fixture::parse("t", "name: x\ninput: (delta (r (1))\n").is_err());
        assert!(Fixture::parse("t", "name: x\ninput: (r (1))\n").is_err());
        assert!(Fixture::parse("t", "name: x\ncolour: red\ninput: (r (1))\nexpect: (r (1))\n").is_err());
    }

    #[test]
    fn empty_dir_is_an_error() {
        let d = tempfile::tempdir().unwrap();
        assert!(matches!(load_dir(d.path()), Err(FixtureError::Empty(_))));
    }
}
