//! A small prefix language for tree-vector expressions, used by fixtures.
//!
//! ```text
//! expr := tree | "[" (coeff tree)* "]" | "(" op arg* ")"
//! op   := delta | delta0 | delta1 | dual | insert | compose | act
//!       | add | sub | scale | j | m | psi
//! ```
//!
//! `(insert E i E)`, `(compose E E ...)`, `(act [2 1 3] E)`, `(scale -1/2 E)`,
//! `(j 1 2 3)`, `(m 3)`, `(psi {1}{2}{3 4})`. Trees are written `(r ...)`.

use thiserror::Error;

use crate::operad::{act_vec, compose_in, insert_vec_in, j_in, m_t_in, psi_in, GerMonomial, Permutation};
use crate::sign::{delta_dual_in, delta_in, delta_split_in, SignConvention};
use crate::tree::BraceTree;
use crate::vector::{balanced_prefix, parse_q, TreeVector};

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("unexpected end of expression")]
    End,
    #[error("unexpected `{0}`")]
    Unexpected(String),
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    LBracket,
    RBracket,
    Atom(String),
    Tree(String),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ExprError> {
    let mut out = Vec::new();
    let mut i = 0;
    let b = s.as_bytes();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            let rest = s[i + 1..].trim_start();
            if rest.starts_with("r ") || rest.starts_with("r(") {
                let len = balanced_prefix(&s[i..]).ok_or_else(|| ExprError::Invalid("unbalanced tree".into()))?;
                out.push(Tok::Tree(s[i..i + len].to_string()));
                i += len;
            } else {
                out.push(Tok::Open);
                i += 1;
            }
        } else if c == ')' {
            out.push(Tok::Close);
            i += 1;
        } else if c == '[' {
            out.push(Tok::LBracket);
            i += 1;
        } else if c == ']' {
            out.push(Tok::RBracket);
            i += 1;
        } else if c == '{' {
            // a monomial: consecutive brace groups form one atom
            let start = i;
            while i < b.len() && b[i] == b'{' {
                let end = s[i..].find('}').ok_or_else(|| ExprError::Invalid("unclosed brace".into()))?;
                i += end + 1;
            }
            out.push(Tok::Atom(s[start..i].to_string()));
        } else {
            let start = i;
            while i < b.len() && !(b[i] as char).is_whitespace() && !b"()[]{}".contains(&b[i]) {
                i += 1;
            }
            out.push(Tok::Atom(s[start..i].to_string()));
        }
    }
    Ok(out)
}

struct Eval<'a> {
    toks: Vec<Tok>,
    pos: usize,
    conv: &'a SignConvention,
}

impl Eval<'_> {
    fn next(&mut self) -> Result<Tok, ExprError> {
        let t = self.toks.get(self.pos).cloned().ok_or(ExprError::End)?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn atom(&mut self) -> Result<String, ExprError> {
        match self.next()? {
            Tok::Atom(a) => Ok(a),
            t => Err(ExprError::Unexpected(format!("{t:?}"))),
        }
    }

    fn tree(s: &str) -> Result<BraceTree, ExprError> {
        s.parse().map_err(|e| ExprError::Invalid(format!("{e}")))
    }

    fn expr(&mut self) -> Result<TreeVector, ExprError> {
        match self.next()? {
            Tok::Tree(s) => Ok(TreeVector::from_tree(Self::tree(&s)?)),
            Tok::LBracket => {
                let mut v = TreeVector::new();
                loop {
                    match self.next()? {
                        Tok::RBracket => return Ok(v),
                        Tok::Atom(c) => {
                            let c = parse_q(&c).map_err(|e| ExprError::Invalid(e.to_string()))?;
                            match self.next()? {
                                Tok::Tree(s) => v.add_term(Self::tree(&s)?, c),
                                t => return Err(ExprError::Unexpected(format!("{t:?}"))),
                            }
                        }
                        t => return Err(ExprError::Unexpected(format!("{t:?}"))),
                    }
                }
            }
            Tok::Open => {
                let op = self.atom()?;
                let v = self.op(&op)?;
                match self.next()? {
                    Tok::Close => Ok(v),
                    t => Err(ExprError::Unexpected(format!("{t:?}"))),
                }
            }
            t => Err(ExprError::Unexpected(format!("{t:?}"))),
        }
    }

    fn rest_exprs(&mut self) -> Result<Vec<TreeVector>, ExprError> {
        let mut out = Vec::new();
        while !matches!(self.peek(), Some(Tok::Close) | None) {
            out.push(self.expr()?);
        }
        Ok(out)
    }

    fn int(&mut self) -> Result<usize, ExprError> {
        let a = self.atom()?;
        a.parse().map_err(|_| ExprError::Invalid(format!("expected integer, got `{a}`")))
    }

    fn op(&mut self, op: &str) -> Result<TreeVector, ExprError> {
        let conv = self.conv;
        Ok(match op {
            "delta" => self.expr()?.map_linear(|t| delta_in(conv, t)),
            "delta0" => self.expr()?.map_linear(|t| delta_split_in(conv, t).0),
            "delta1" => self.expr()?.map_linear(|t| delta_split_in(conv, t).1),
            "dual" => self.expr()?.map_linear(|t| delta_dual_in(conv, t)),
            "insert" => {
                let t = self.expr()?;
                let i = self.int()?;
                let s = self.expr()?;
                insert_vec_in(conv, &t, i, &s)
            }
            "compose" => {
                let t = self.expr()?;
                let args = self.rest_exprs()?;
                compose_in(conv, &t, &args)
            }
            "act" => {
                if self.next()? != Tok::LBracket {
                    return Err(ExprError::Invalid("act expects [images]".into()));
                }
                let mut images = Vec::new();
                while self.peek() != Some(&Tok::RBracket) {
                    images.push(self.int()? as u8);
                }
                self.next()?;
                let sigma = Permutation::from_images(images).map_err(|e| ExprError::Invalid(e.to_string()))?;
                act_vec(&sigma, &self.expr()?)
            }
            "add" => {
                let mut v = TreeVector::new();
                for x in self.rest_exprs()? {
                    v.add(&x);
                }
                v
            }
            "sub" => {
                let mut v = self.expr()?;
                v.sub(&self.expr()?);
                v
            }
            "scale" => {
                let c = parse_q(&self.atom()?).map_err(|e| ExprError::Invalid(e.to_string()))?;
                self.expr()?.scaled(&c)
            }
            "j" => {
                let mut word = Vec::new();
                while !matches!(self.peek(), Some(Tok::Close) | None) {
                    word.push(self.int()? as u8);
                }
                let mut sorted = word.clone();
                sorted.sort_unstable();
                if sorted.iter().enumerate().any(|(i, &v)| v as usize != i + 1) {
                    return Err(ExprError::Invalid(format!("bad word {word:?}")));
                }
                j_in(conv, &word)
            }
            "m" => {
                let t = self.int()?;
                if t == 0 {
                    return Err(ExprError::Invalid("m needs t >= 1".into()));
                }
                m_t_in(conv, t)
            }
            "psi" => {
                let m: GerMonomial = self.atom()?.parse().map_err(|e: crate::operad::MonomialError| ExprError::Invalid(e.to_string()))?;
                psi_in(conv, &m)
            }
            other => return Err(ExprError::UnknownOp(other.to_string())),
        })
    }
}

/// Evaluates `src` under the given convention.
pub fn eval_in(conv: &SignConvention, src: &str) -> Result<TreeVector, ExprError> {
    let mut e = Eval { toks: tokenize(src)?, pos: 0, conv };
    let v = e.expr()?;
    if e.pos != e.toks.len() {
        return Err(ExprError::Unexpected(format!("{:?}", e.toks[e.pos])));
    }
    Ok(v)
}

pub fn eval(src: &str) -> Result<TreeVector, ExprError> {
    eval_in(crate::calibration::calibrated(), src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_and_ops() {
        let c = SignConvention::STANDARD;
        let v = eval_in(&c, "(sub (r (1 (2))) [1/2 (r (1 (2)))])").unwrap();
        assert_eq!(v, TreeVector::parse_terms("[1/2 (r (1 (2)))]").unwrap());
        let w = eval_in(&c, "(act [2 1] (r (1 (2))))").unwrap();
        assert_eq!(w, TreeVector::parse_terms("[1 (r (2 (1)))]").unwrap());
        assert!(eval_in(&c, "(frobnicate (r (1)))").is_err());
        assert!(eval_in(&c, "(r (1)) (r (1))").is_err());
    }

    #[test]
    fn psi_atom_with_spaces() {
        let c = SignConvention::STANDARD;
        let v = eval_in(&c, "(psi {1 2})").unwrap();
        assert_eq!(v, eval_in(&c, "(add (r (1 (2))) (r (2 (1))))").unwrap());
    }
}
