//! Selection predicates over an [`InvariantBundle`].
//!
//! ```text
//! pred   := or
//! or     := and (("||" | "or") and)*
//! and    := not (("&&" | "and") not)*
//! not    := ("!" | "not") not | cmp
//! cmp    := sum (("<" | "<=" | ">" | ">=" | "==" | "!=") sum)?
//! sum    := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary | atom)*     juxtaposition multiplies: 4g
//! unary  := "-" unary | atom
//! atom   := integer | identifier | "(" pred ")"
//! ```
//!
//! `−`, `·`, `≤`, `≥` and `≠` are accepted as spellings. Arithmetic is exact.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{FiberError, Result};
use crate::invariants::{InvariantBundle, FIELD_NAMES};
use crate::rational::Rational;

const ALIASES: [&str; 3] = ["N", "c1sq", "c2"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(&'static str),
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Num(Rational),
    Var(String),
    Neg(Box<Node>),
    Arith(char, Box<Node>, Box<Node>),
    Cmp(&'static str, Box<Node>, Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Not(Box<Node>),
}

enum Value {
    Num(Rational),
    Bool(bool),
}

/// A parsed predicate; evaluate with [`Predicate::eval`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    source: String,
    root: Node,
}

fn err(msg: impl Into<String>) -> FiberError {
    FiberError::InvalidArgument(format!("predicate: {}", msg.into()))
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push(match word.as_str() {
                "and" => Tok::Op("&&"),
                "or" => Tok::Op("||"),
                "not" => Tok::Op("!"),
                _ => Tok::Ident(word),
            });
        } else if let Some(op) = ["<=", ">=", "==", "!=", "&&", "||"].into_iter().find(|o| *o == two) {
            out.push(Tok::Op(op));
            i += 2;
        } else {
            out.push(match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '+' => Tok::Op("+"),
                '-' | '−' => Tok::Op("-"),
                '*' | '·' => Tok::Op("*"),
                '/' => Tok::Op("/"),
                '<' => Tok::Op("<"),
                '>' => Tok::Op(">"),
                '≤' => Tok::Op("<="),
                '≥' => Tok::Op(">="),
                '≠' => Tok::Op("!="),
                '!' => Tok::Op("!"),
                other => return Err(err(format!("unexpected character `{other}`"))),
            });
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, ops: &[&'static str]) -> Option<&'static str> {
        match self.peek() {
            Some(Tok::Op(o)) if ops.contains(o) => {
                let o = *o;
                self.pos += 1;
                Some(o)
            }
            _ => None,
        }
    }

    fn or(&mut self) -> Result<Node> {
        let mut l = self.and()?;
        while self.eat_op(&["||"]).is_some() {
            l = Node::Or(Box::new(l), Box::new(self.and()?));
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Node> {
        let mut l = self.not()?;
        while self.eat_op(&["&&"]).is_some() {
            l = Node::And(Box::new(l), Box::new(self.not()?));
        }
        Ok(l)
    }

    fn not(&mut self) -> Result<Node> {
        if self.eat_op(&["!"]).is_some() {
            return Ok(Node::Not(Box::new(self.not()?)));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Node> {
        let l = self.sum()?;
        match self.eat_op(&["<", "<=", ">", ">=", "==", "!="]) {
            Some(op) => Ok(Node::Cmp(op, Box::new(l), Box::new(self.sum()?))),
            None => Ok(l),
        }
    }

    fn sum(&mut self) -> Result<Node> {
        let mut l = self.term()?;
        while let Some(op) = self.eat_op(&["+", "-"]) {
            let r = self.term()?;
            l = Node::Arith(op.chars().next().expect("op"), Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn term(&mut self) -> Result<Node> {
        let mut l = self.unary()?;
        loop {
            if let Some(op) = self.eat_op(&["*", "/"]) {
                let r = self.unary()?;
                l = Node::Arith(op.chars().next().expect("op"), Box::new(l), Box::new(r));
            } else if matches!(self.peek(), Some(Tok::Ident(_) | Tok::LParen)) {
                let r = self.atom()?;
                l = Node::Arith('*', Box::new(l), Box::new(r));
            } else {
                return Ok(l);
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat_op(&["-"]).is_some() {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Node> {
        let tok = self.peek().cloned().ok_or_else(|| err("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Node::Num(Rational::from_integer(n))),
            Tok::Ident(name) => {
                if FIELD_NAMES.contains(&name.as_str()) || ALIASES.contains(&name.as_str()) {
                    Ok(Node::Var(name))
                } else {
                    Err(err(format!("unknown field `{name}`")))
                }
            }
            Tok::LParen => {
                let inner = self.or()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(err("missing `)`")),
                }
            }
            other => Err(err(format!("unexpected token {other:?}"))),
        }
    }
}

fn eval(n: &Node, b: &InvariantBundle) -> Result<Value> {
    let num = |n: &Node| -> Result<Rational> {
        match eval(n, b)? {
            Value::Num(q) => Ok(q),
            Value::Bool(_) => Err(err("boolean used as a number")),
        }
    };
    let boolean = |n: &Node| -> Result<bool> {
        match eval(n, b)? {
            Value::Bool(v) => Ok(v),
            Value::Num(_) => Err(err("number used as a condition")),
        }
    };
    Ok(match n {
        Node::Num(q) => Value::Num(q.clone()),
        Node::Var(name) => Value::Num(b.get(name).expect("checked at parse time")),
        Node::Neg(x) => Value::Num(-num(x)?),
        Node::Arith(op, l, r) => {
            let (l, r) = (num(l)?, num(r)?);
            Value::Num(match op {
                '+' => l + r,
                '-' => l - r,
                '*' => l * r,
                _ if r.is_zero() => return Err(err("division by zero")),
                _ => l / r,
            })
        }
        Node::Cmp(op, l, r) => {
            let (l, r) = (num(l)?, num(r)?);
            Value::Bool(match *op {
                "<" => l < r,
                "<=" => l <= r,
                ">" => l > r,
                ">=" => l >= r,
                "==" => l == r,
                _ => l != r,
            })
        }
        Node::And(l, r) => Value::Bool(boolean(l)? && boolean(r)?),
        Node::Or(l, r) => Value::Bool(boolean(l)? || boolean(r)?),
        Node::Not(x) => Value::Bool(!boolean(x)?),
    })
}

impl Predicate {
    pub fn parse(source: &str) -> Result<Predicate> {
        let mut p = Parser {
            toks: lex(source)?,
            pos: 0,
        };
        let root = p.or()?;
        if p.pos != p.toks.len() {
            return Err(err(format!("trailing input at token {}", p.pos + 1)));
        }
        Ok(Predicate {
            source: source.to_string(),
            root,
        })
    }

    pub fn eval(&self, b: &InvariantBundle) -> Result<bool> {
        match eval(&self.root, b)? {
            Value::Bool(v) => Ok(v),
            Value::Num(_) => Err(err("expression is a number, not a condition")),
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;
    use crate::invariants::compute_invariants;
    use crate::rational::{int, ratio};

    fn bundle(key: &str) -> InvariantBundle {
        compute_invariants(&lookup(key).unwrap().graph).unwrap()
    }

    #[test]
    fn theorem_lines() {
        let e9 = bundle("thm1.3/9");
        let above = Predicate::parse("c1sq_min > 4*g - 11/2").unwrap();
        assert!(above.eval(&e9).unwrap());
        let unicode = Predicate::parse("c1sq_min > 4g − 11/2").unwrap();
        assert!(unicode.eval(&e9).unwrap());
        let boundary = bundle("example1.6/g=3");
        assert!(!above.eval(&boundary).unwrap());
        assert!(Predicate::parse("c1sq == 4g - 11/2").unwrap().eval(&boundary).unwrap());
        let gap = Predicate::parse("2·c2_min − c1sq_min < 6").unwrap();
        assert!(gap.eval(&bundle("thm1.4/case2")).unwrap());
        assert!(!gap.eval(&e9).unwrap());
    }

    #[test]
    fn precedence_and_logic() {
        let b = bundle("thm1.3/9");
        assert_eq!(b.g, 2);
        for (src, want) in [
            ("1 + 2 * 3 == 7", true),
            ("(1 + 2) * 3 == 9", true),
            ("-g + 3 == 1", true),
            ("2(g + 1) == 6", true),
            ("g == 2 && N > 100 || chi == 3/2", true),
            ("not g == 2 or false_field", false),
            ("!(g != 2)", true),
            ("g ≤ 2 and g ≥ 2 and g ≠ 3", true),
        ] {
            match Predicate::parse(src) {
                Ok(p) => assert_eq!(p.eval(&b).unwrap(), want, "{src}"),
                Err(_) => assert!(src.contains("false_field")),
            }
        }
        assert_eq!(b.chi, ratio(3, 2));
        assert_eq!(b.get("c1sq").unwrap(), int(3));
    }

    #[test]
    fn errors() {
        let b = bundle("thm1.3/9");
        for src in ["", "g >", "(g == 2", "g == 2 )", "gg > 1", "g $ 2", "g"] {
            let res = Predicate::parse(src).and_then(|p| p.eval(&b));
            assert!(res.is_err(), "{src}");
        }
        assert!(Predicate::parse("g / 0 > 1").unwrap().eval(&b).is_err());
        assert!(Predicate::parse("(g > 1) + 1 > 0").unwrap().eval(&b).is_err());
    }
}
