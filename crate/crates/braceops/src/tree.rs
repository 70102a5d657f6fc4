//! Brace trees.
//!
//! A brace tree is a planar rooted tree whose root has a single child. Its
//! other vertices are either labeled `1..=n` or neutral; neutral vertices
//! carry at least two children. Trees are stored as the pre-order sequence of
//! `(label, child count)` pairs of the non-root vertices, label `0` meaning
//! neutral. The canonical text form is
//!
//! ```text
//! tree  := "(" "r" node ")"
//! node  := "(" label node* ")"
//! label := positive-int | "*"
//! ```
//!
//! rendered with single spaces, e.g. `(r (3 (* (1) (* (6) (5)) (4)) (2)))`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

/// Label value used for neutral vertices in the compact encoding.
pub const NEUTRAL: u8 = 0;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraceTree {
    code: Vec<(u8, u8)>,
}

/// The two summands of `Br(n)`: lowest vertex labeled (`Vcirc`) or neutral (`Vbul`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Vcirc,
    Vbul,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{token}` at offset {offset}")]
    UnexpectedToken { token: String, offset: usize },
    #[error("invalid label `{0}`")]
    BadLabel(String),
    #[error("neutral vertex with {0} children (needs at least 2)")]
    NeutralArity(usize),
    #[error("labels must be exactly 1..={n}, found {found:?}")]
    Labels { n: usize, found: Vec<u8> },
    #[error("trailing input at offset {0}")]
    Trailing(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(s: &str) -> Vec<(usize, Token)> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((i, Token::Open));
                chars.next();
            }
            ')' => {
                out.push((i, Token::Close));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut atom = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c == '(' || c == ')' || c.is_whitespace() {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                }
                out.push((i, Token::Atom(atom)));
            }
        }
    }
    out
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn next(&mut self) -> Result<(usize, Token), ParseError> {
        let t = self.tokens.get(self.pos).cloned().ok_or(ParseError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn expect_open(&mut self) -> Result<(), ParseError> {
        match self.next()? {
            (_, Token::Open) => Ok(()),
            (offset, t) => Err(unexpected(offset, t)),
        }
    }

    fn node(&mut self, code: &mut Vec<(u8, u8)>) -> Result<(), ParseError> {
        self.expect_open()?;
        let label = match self.next()? {
            (_, Token::Atom(a)) if a == "*" => NEUTRAL,
            (_, Token::Atom(a)) => match a.parse::<u8>() {
                Ok(v) if v > 0 => v,
                _ => return Err(ParseError::BadLabel(a)),
            },
            (offset, t) => return Err(unexpected(offset, t)),
        };
        let slot = code.len();
        code.push((label, 0));
        let mut children = 0usize;
        while self.peek() == Some(&Token::Open) {
            self.node(code)?;
            children += 1;
        }
        match self.next()? {
            (_, Token::Close) => {}
            (offset, t) => return Err(unexpected(offset, t)),
        }
        if label == NEUTRAL && children < 2 {
            return Err(ParseError::NeutralArity(children));
        }
        code[slot].1 = u8::try_from(children).map_err(|_| ParseError::NeutralArity(children))?;
        Ok(())
    }
}

fn unexpected(offset: usize, t: Token) -> ParseError {
    let token = match t {
        Token::Open => "(".to_string(),
        Token::Close => ")".to_string(),
        Token::Atom(a) => a,
    };
    ParseError::UnexpectedToken { token, offset }
}

impl FromStr for BraceTree {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = Parser { tokens: tokenize(s), pos: 0 };
        p.expect_open()?;
        match p.next()? {
            (_, Token::Atom(a)) if a == "r" => {}
            (offset, t) => return Err(unexpected(offset, t)),
        }
        let mut code = Vec::new();
        p.node(&mut code)?;
        match p.next()? {
            (_, Token::Close) => {}
            (offset, t) => return Err(unexpected(offset, t)),
        }
        if let Some((offset, _)) = p.tokens.get(p.pos) {
            return Err(ParseError::Trailing(*offset));
        }
        let mut found: Vec<u8> = code.iter().map(|c| c.0).filter(|&l| l != NEUTRAL).collect();
        found.sort_unstable();
        let n = found.len();
        if found.iter().enumerate().any(|(i, &l)| l as usize != i + 1) {
            return Err(ParseError::Labels { n, found });
        }
        Ok(BraceTree { code })
    }
}

impl BraceTree {
    /// Builds a tree from its pre-order `(label, child count)` encoding.
    /// The caller guarantees the encoding is well formed.
    pub(crate) fn from_code(code: Vec<(u8, u8)>) -> Self {
        debug_assert!(Self::code_is_valid(&code));
        BraceTree { code }
    }

    fn code_is_valid(code: &[(u8, u8)]) -> bool {
        let mut open = 1usize;
        for (i, &(l, c)) in code.iter().enumerate() {
            if open == 0 || (l == NEUTRAL && c < 2) {
                return false;
            }
            open = open - 1 + c as usize;
            if open == 0 && i + 1 != code.len() {
                return false;
            }
        }
        open == 0
    }

    /// The unit of the operad, `(r (1))`.
    pub fn unit() -> Self {
        BraceTree { code: vec![(1, 0)] }
    }

    pub fn code(&self) -> &[(u8, u8)] {
        &self.code
    }

    pub fn arity(&self) -> usize {
        self.code.iter().filter(|c| c.0 != NEUTRAL).count()
    }

    pub fn neutral_count(&self) -> usize {
        self.code.iter().filter(|c| c.0 == NEUTRAL).count()
    }

    /// Number of edges not adjacent to the root.
    pub fn edge_count(&self) -> usize {
        self.code.len() - 1
    }

    /// `2 * #neutral - #edges`, always in `1 - n ..= 0`.
    pub fn degree(&self) -> i32 {
        2 * self.neutral_count() as i32 - self.edge_count() as i32
    }

    pub fn dual_degree(&self) -> i32 {
        -self.degree()
    }

    pub fn sector(&self) -> Sector {
        if self.code[0].0 == NEUTRAL {
            Sector::Vbul
        } else {
            Sector::Vcirc
        }
    }

    /// Number of children of the lowest vertex when it is neutral.
    pub fn filtration_level(&self) -> Option<usize> {
        match self.sector() {
            Sector::Vbul => Some(self.code[0].1 as usize),
            Sector::Vcirc => None,
        }
    }

    pub fn canonical(&self) -> String {
        let mut out = String::with_capacity(4 * self.code.len() + 4);
        out.push_str("(r ");
        let mut pos = 0;
        render(&self.code, &mut pos, &mut out);
        out.push(')');
        out
    }

    /// Applies `f` to every label.
    pub fn relabel(&self, f: impl Fn(u8) -> u8) -> BraceTree {
        BraceTree {
            code: self
                .code
                .iter()
                .map(|&(l, c)| if l == NEUTRAL { (l, c) } else { (f(l), c) })
                .collect(),
        }
    }
}

fn render(code: &[(u8, u8)], pos: &mut usize, out: &mut String) {
    let (label, children) = code[*pos];
    *pos += 1;
    out.push('(');
    if label == NEUTRAL {
        out.push('*');
    } else {
        out.push_str(&label.to_string());
    }
    for _ in 0..children {
        out.push(' ');
        render(code, pos, out);
    }
    out.push(')');
}

impl fmt::Display for BraceTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl fmt::Debug for BraceTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Unlabeled planar shapes: pre-order `(is_neutral, child count)`.
type Shape = Vec<(bool, u8)>;

#[derive(Default)]
struct ShapeTables {
    trees: HashMap<(usize, usize), Vec<Shape>>,
    forests: HashMap<(usize, usize), Vec<(Shape, usize)>>,
}

impl ShapeTables {
    /// Trees with `labeled` labeled and `neutral` neutral vertices.
    fn trees(&mut self, labeled: usize, neutral: usize) -> Vec<Shape> {
        if let Some(v) = self.trees.get(&(labeled, neutral)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if labeled > 0 {
            for (forest, len) in self.forests(labeled - 1, neutral) {
                let mut s = vec![(false, len as u8)];
                s.extend(forest);
                out.push(s);
            }
        }
        if neutral > 0 {
            for (forest, len) in self.forests(labeled, neutral - 1) {
                if len >= 2 {
                    let mut s = vec![(true, len as u8)];
                    s.extend(forest);
                    out.push(s);
                }
            }
        }
        self.trees.insert((labeled, neutral), out.clone());
        out
    }

    /// Ordered forests with the given totals, paired with their tree count.
    fn forests(&mut self, labeled: usize, neutral: usize) -> Vec<(Shape, usize)> {
        if let Some(v) = self.forests.get(&(labeled, neutral)) {
            return v.clone();
        }
        let mut out = vec![];
        if labeled == 0 && neutral == 0 {
            out.push((Vec::new(), 0));
        }
        for l in 0..=labeled {
            for k in 0..=neutral {
                if l + k == 0 {
                    continue;
                }
                let heads = self.trees(l, k);
                if heads.is_empty() {
                    continue;
                }
                let tails = self.forests(labeled - l, neutral - k);
                for h in &heads {
                    for (t, len) in &tails {
                        let mut s = h.clone();
                        s.extend(t.iter().copied());
                        out.push((s, len + 1));
                    }
                }
            }
        }
        self.forests.insert((labeled, neutral), out.clone());
        out
    }
}

fn shapes(labeled: usize, neutral: usize) -> Vec<Shape> {
    static TABLES: OnceLock<Mutex<ShapeTables>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    tables.lock().expect("shape table poisoned").trees(labeled, neutral)
}

/// All permutations of `1..=n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..current.len().saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
        else {
            break;
        };
        let j = (i + 1..current.len()).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

/// All brace trees of arity `n` and the given degree, sorted by canonical form.
pub fn enumerate(n: usize, degree: i32) -> Vec<BraceTree> {
    let k = degree + n as i32 - 1;
    if n == 0 || k < 0 || degree > 0 {
        return Vec::new();
    }
    let perms = permutations(n);
    let mut out: Vec<BraceTree> = Vec::new();
    for shape in shapes(n, k as usize) {
        for p in &perms {
            let mut next = 0;
            let code = shape
                .iter()
                .map(|&(neutral, c)| {
                    if neutral {
                        (NEUTRAL, c)
                    } else {
                        next += 1;
                        (p[next - 1], c)
                    }
                })
                .collect();
            out.push(BraceTree { code });
        }
    }
    out.sort_by_cached_key(|t| t.canonical());
    out.dedup();
    out
}

/// Degrees in which `Br(n)` is nonzero, ascending.
pub fn degrees(n: usize) -> Vec<i32> {
    if n == 0 {
        return Vec::new();
    }
    (1 - n as i32..=0).collect()
}

/// All brace trees of arity `n`, grouped by ascending degree.
pub fn enumerate_all(n: usize) -> Vec<BraceTree> {
    degrees(n).into_iter().flat_map(|d| enumerate(n, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_degree() {
        let s = "(r (3 (* (1) (* (6) (5)) (4)) (2)))";
        let t: BraceTree = s.parse().unwrap();
        assert_eq!(t.canonical(), s);
        assert_eq!(t.degree(), -3);
        assert_eq!(t.arity(), 6);
        let spaced: BraceTree = " ( r(3(*(1)(* (6)(5))(4))\n(2)) ) ".parse().unwrap();
        assert_eq!(spaced, t);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert_eq!("(r (* (1)))".parse::<BraceTree>(), Err(ParseError::NeutralArity(1)));
        assert!(matches!("(r (1 (3)))".parse::<BraceTree>(), Err(ParseError::Labels { .. })));
        assert!(matches!("(r (1) (2))".parse::<BraceTree>(), Err(ParseError::UnexpectedToken { .. })));
        assert!(matches!("(r (0))".parse::<BraceTree>(), Err(ParseError::BadLabel(_))));
        assert!(matches!("(r (1)".parse::<BraceTree>(), Err(ParseError::UnexpectedEnd)));
        assert!(matches!("(r (1)) x".parse::<BraceTree>(), Err(ParseError::Trailing(_))));
    }

    #[test]
    fn sectors_and_filtration() {
        let t: BraceTree = "(r (* (1) (2 (3))))".parse().unwrap();
        assert_eq!(t.sector(), Sector::Vbul);
        assert_eq!(t.filtration_level(), Some(2));
        let u: BraceTree = "(r (1 (* (2) (3))))".parse().unwrap();
        assert_eq!(u.sector(), Sector::Vcirc);
        assert_eq!(u.filtration_level(), None);
    }

    #[test]
    fn small_enumerations() {
        let two: Vec<String> = enumerate_all(2).iter().map(|t| t.canonical()).collect();
        assert_eq!(two, ["(r (1 (2)))", "(r (2 (1)))", "(r (* (1) (2)))", "(r (* (2) (1)))"]);
        assert_eq!(enumerate(3, -2).len(), 12);
        assert!(enumerate(3, 1).is_empty());
        assert!(enumerate(3, -3).is_empty());
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![1, 2, 3]);
        assert_eq!(p[5], vec![3, 2, 1]);
    }
}
