//! Typed expressions and their surface syntax.
//!
//! ```text
//! expr   := horiz ('o' horiz)*
//! horiz  := action ('*' action)*
//! action := perm '.' action | atom ('.' perm)*
//! atom   := IDENT | '(' expr ')'
//! perm   := '[' INT+ ']'
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{Permutation, Profile};

use super::Signature;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Gen(usize),
    /// `f ∘ g`: the outputs of `g` feed the inputs of `f`.
    Vert(Box<Expression>, Box<Expression>),
    Horiz(Box<Expression>, Box<Expression>),
    Left(Permutation, Box<Expression>),
    Right(Box<Expression>, Permutation),
}

/// An expression annotated with its profiles and total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expression {
    node: Node,
    out: Profile,
    input: Profile,
    degree: u32,
    text: String,
}

impl Expression {
    pub fn generator(sig: &Signature, name: &str) -> Result<Self> {
        let i = sig.index_of(name)?;
        let g = sig.get(i);
        Ok(Expression { node: Node::Gen(i), out: g.out.clone(), input: g.input.clone(), degree: g.degree, text: g.name.clone() })
    }

    pub fn vert(f: Expression, g: Expression) -> Result<Self> {
        if f.input != g.out {
            return Err(Error::Type(format!(
                "cannot compose {} o {}: input profile {} ≠ output profile {}",
                f.text,
                g.text,
                f.input.display(),
                g.out.display()
            )));
        }
        let text = format!("({} o {})", f.text, g.text);
        Ok(Expression { out: f.out.clone(), input: g.input.clone(), degree: f.degree + g.degree, text, node: Node::Vert(Box::new(f), Box::new(g)) })
    }

    pub fn horiz(f: Expression, g: Expression) -> Result<Self> {
        let out = f.out.concat(&g.out)?;
        let input = f.input.concat(&g.input)?;
        let text = format!("({} * {})", f.text, g.text);
        Ok(Expression { out, input, degree: f.degree + g.degree, text, node: Node::Horiz(Box::new(f), Box::new(g)) })
    }

    pub fn left(sigma: Permutation, e: Expression) -> Result<Self> {
        if sigma.len() != e.out.len() {
            return Err(Error::Type(format!(
                "permutation of length {} cannot act on output profile {} of {}",
                sigma.len(),
                e.out.display(),
                e.text
            )));
        }
        let text = format!("({} . {})", perm_text(&sigma), e.text);
        Ok(Expression { out: e.out.left(&sigma), input: e.input.clone(), degree: e.degree, text, node: Node::Left(sigma, Box::new(e)) })
    }

    pub fn right(e: Expression, tau: Permutation) -> Result<Self> {
        if tau.len() != e.input.len() {
            return Err(Error::Type(format!(
                "permutation of length {} cannot act on input profile {} of {}",
                tau.len(),
                e.input.display(),
                e.text
            )));
        }
        let text = format!("({} . {})", e.text, perm_text(&tau));
        Ok(Expression { out: e.out.clone(), input: e.input.right(&tau), degree: e.degree, text, node: Node::Right(Box::new(e), tau) })
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn out(&self) -> &Profile {
        &self.out
    }

    pub fn input(&self) -> &Profile {
        &self.input
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

fn perm_text(p: &Permutation) -> String {
    let parts: Vec<String> = p.one_line().iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

/// Fully parenthesized; parses back to the same expression.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(usize),
    Compose,
    Tensor,
    Dot,
    LBracket,
    RBracket,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '*' => Some(Token::Tensor),
            '.' => Some(Token::Dot),
            '[' => Some(Token::LBracket),
            ']' => Some(Token::RBracket),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((start, t));
            i += 1;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })?;
            out.push((start, Token::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            out.push((start, if word == "o" { Token::Compose } else { Token::Ident(word.to_string()) }));
        } else {
            return Err(Error::Parse { pos: start, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut acc = self.horiz()?;
        while self.peek() == Some(&Token::Compose) {
            self.pos += 1;
            let rhs = self.horiz()?;
            acc = Expression::vert(acc, rhs)?;
        }
        Ok(acc)
    }

    fn horiz(&mut self) -> Result<Expression> {
        let mut acc = self.action()?;
        while self.peek() == Some(&Token::Tensor) {
            self.pos += 1;
            let rhs = self.action()?;
            acc = Expression::horiz(acc, rhs)?;
        }
        Ok(acc)
    }

    fn action(&mut self) -> Result<Expression> {
        if self.peek() == Some(&Token::LBracket) {
            let sigma = self.perm()?;
            self.expect(Token::Dot, "'.' after a permutation")?;
            let e = self.action()?;
            return Expression::left(sigma, e);
        }
        let mut acc = self.atom()?;
        while self.peek() == Some(&Token::Dot) {
            self.pos += 1;
            if self.peek() != Some(&Token::LBracket) {
                return self.fail("expected a permutation after '.'");
            }
            let tau = self.perm()?;
            acc = Expression::right(acc, tau)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Expression> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                let at = self.offset();
                self.pos += 1;
                Expression::generator(self.sig, &name).map_err(|e| match e {
                    Error::UnknownGenerator(n) => Error::Parse { pos: at, msg: format!("unknown generator {n:?}") },
                    other => other,
                })
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(e)
            }
            _ => self.fail("expected a generator or '('"),
        }
    }

    fn perm(&mut self) -> Result<Permutation> {
        let at = self.offset();
        self.expect(Token::LBracket, "'['")?;
        let mut images = Vec::new();
        while let Some(Token::Int(n)) = self.peek() {
            images.push(*n);
            self.pos += 1;
        }
        self.expect(Token::RBracket, "']'")?;
        Permutation::from_one_line(&images).map_err(|_| Error::Parse { pos: at, msg: format!("{images:?} is not a permutation") })
    }
}

pub fn parse(text: &str, sig: &Signature) -> Result<Expression> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, end: text.len(), sig };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(e)
}

/// Reads `[i1 i2 …]` or a bare list of 1-based images.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let body = text.trim().trim_start_matches('[').trim_end_matches(']');
    let images = body
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| Error::Parse { pos: 0, msg: format!("not an index: {s:?}") }))
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_one_line(&images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Generator;
    use crate::profile::Palette;

    fn sig() -> Signature {
        let p = Palette::new(["c"]).unwrap();
        let c1 = Profile::from_names(&p, &["c"]).unwrap();
        let c2 = Profile::from_names(&p, &["c", "c"]).unwrap();
        Signature::new(&p, vec![Generator::new("mu", c1.clone(), c2.clone(), 0).unwrap(), Generator::new("i", c1.clone(), c1, 0).unwrap()]).unwrap()
    }

    #[test]
    fn typing() {
        let s = sig();
        let e = parse("mu o (mu * i)", &s).unwrap();
        assert!(matches!(e.node(), Node::Vert(..)));
        assert_eq!((e.out().len(), e.input().len()), (1, 3));
        assert!(matches!(parse("mu o mu", &s), Err(Error::Type(_))));
        let e = parse("[2 1] . (mu * mu)", &s).unwrap();
        assert!(matches!(e.node(), Node::Left(..)));
        assert!(matches!(parse("[2 1] . mu", &s), Err(Error::Type(_))));
        assert!(matches!(parse("mu . [2 1]", &s).unwrap().node(), Node::Right(..)));
    }

    #[test]
    fn precedence_and_round_trip() {
        let s = sig();
        let e = parse("mu * i o mu", &s);
        // `*` binds tighter than `o`: (mu * i) o mu is ill-typed
        assert!(matches!(e, Err(Error::Type(_))));
        let e = parse("mu o mu . [2 1] * i", &s).unwrap();
        assert_eq!(parse(&e.to_string(), &s).unwrap(), e);
    }

    #[test]
    fn errors_carry_positions() {
        let s = sig();
        assert_eq!(parse("mu o nu", &s), Err(Error::Parse { pos: 5, msg: "unknown generator \"nu\"".into() }));
        assert!(matches!(parse("mu o", &s), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse("mu $", &s), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse("[1 1] . mu", &s), Err(Error::Parse { pos: 0, .. })));
    }
}
