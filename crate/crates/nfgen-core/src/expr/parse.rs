//! Recursive-descent parser with standard precedence:
//! `^` (right-assoc) > unary `-` > `*` `/` > `+` `-`.

use std::fmt;

use super::{BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Syntax {
        offset: usize,
        message: String,
    },
    UnknownIdentifier {
        offset: usize,
        name: String,
    },
    ArityMismatch {
        offset: usize,
        name: String,
        expected: usize,
        got: usize,
    },
    /// The order parameter of an incomplete-gamma call must be a constant.
    NonConstParameter {
        offset: usize,
        name: String,
    },
}

impl fmt::Display for ParseError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { offset, message } => {
                write!(out, "syntax error at offset {offset}: {message}")
            }
            ParseError::UnknownIdentifier { offset, name } => {
                write!(out, "unknown identifier `{name}` at offset {offset}")
            }
            ParseError::ArityMismatch {
                offset,
                name,
                expected,
                got,
            } => {
                write!(
                    out,
                    "`{name}` at offset {offset} takes {expected} argument(s), got {got}"
                )
            }
            ParseError::NonConstParameter { offset, name } => {
                write!(
                    out,
                    "first argument of `{name}` at offset {offset} must be a constant"
                )
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Result<Option<(Tok, usize)>, ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = bytes[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' | b'.' => return self.lex_number(start).map(Some),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < bytes.len()
                    && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                return Ok(Some((
                    Tok::Ident(self.src[start..self.pos].to_string()),
                    start,
                )));
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        self.pos += 1;
        Ok(Some((tok, start)))
    }

    fn lex_number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < bytes.len() && bytes[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        // exponent only when followed by digits (else `e` is Euler's number)
        if self.pos < bytes.len() && (bytes[self.pos] == b'e' || bytes[self.pos] == b'E') {
            let mut probe = self.pos + 1;
            if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                probe += 1;
            }
            if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                self.pos = probe;
                while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = &self.src[start..self.pos];
        text.parse::<f64>()
            .map(|v| (Tok::Num(v), start))
            .map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("bad numeric literal `{text}`"),
            })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut lexer = Lexer { src: text, pos: 0 };
    let mut toks = Vec::new();
    while let Some(t) = lexer.next_token()? {
        toks.push(t);
    }
    let mut parser = Parser {
        toks,
        idx: 0,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if let Some((_, off)) = parser.peek() {
        return Err(ParseError::Syntax {
            offset: off,
            message: "trailing input".into(),
        });
    }
    Ok(expr)
}

impl Parser {
    fn peek(&self) -> Option<(&Tok, usize)> {
        self.toks.get(self.idx).map(|(t, o)| (t, *o))
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.bump() {
            Some((t, _)) if t == want => Ok(()),
            Some((_, o)) => Err(ParseError::Syntax {
                offset: o,
                message: format!("expected {what}"),
            }),
            None => Err(ParseError::Syntax {
                offset: self.end,
                message: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some((Tok::Plus, _)) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(self.term()?));
                }
                Some((Tok::Minus, _)) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some((Tok::Star, _)) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(self.unary()?));
                }
                Some((Tok::Slash, _)) => {
                    self.bump();
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some((Tok::Caret, _)) = self.peek() {
            self.bump();
            // right-associative; exponent may carry a unary minus
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.bump() {
            Some((Tok::Num(v), _)) => Ok(Expr::Num(v)),
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some((Tok::Ident(name), offset)) => self.ident(name, offset),
            Some((_, o)) => Err(ParseError::Syntax {
                offset: o,
                message: "expected expression".into(),
            }),
            None => Err(ParseError::Syntax {
                offset: self.end,
                message: "expected expression".into(),
            }),
        }
    }

    fn ident(&mut self, name: String, offset: usize) -> Result<Expr, ParseError> {
        // Bare names: the variable and the two constants.
        if !matches!(self.peek(), Some((Tok::LParen, _))) {
            return match name.as_str() {
                "x" => Ok(Expr::Var),
                "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                "e" => Ok(Expr::Num(std::f64::consts::E)),
                _ => Err(ParseError::UnknownIdentifier { offset, name }),
            };
        }
        self.bump(); // consume `(`
        let mut args = vec![self.expr()?];
        while let Some((Tok::Comma, _)) = self.peek() {
            self.bump();
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        self.call(name, offset, args)
    }

    fn call(&mut self, name: String, offset: usize, args: Vec<Expr>) -> Result<Expr, ParseError> {
        // Platform-marker aliases from generated configs carry no distinct
        // semantics here; they resolve to the plain builtins.
        let base = name.strip_prefix("mpc_").unwrap_or(&name);
        if base == "reci" {
            check_arity(&name, offset, &args, 1)?;
            let mut it = args.into_iter();
            return Ok(Expr::Bin(
                BinOp::Div,
                Box::new(Expr::Num(1.0)),
                Box::new(it.next().unwrap()),
            ));
        }
        let (func, arity) = match base {
            "exp" => (Func::Exp, 1),
            "ln" | "log" => (Func::Ln, 1),
            "log2" => (Func::Log2, 1),
            "sqrt" => (Func::Sqrt, 1),
            "abs" => (Func::Abs, 1),
            "tanh" => (Func::Tanh, 1),
            "erf" => (Func::Erf, 1),
            "sign" => (Func::Sign, 1),
            "floor" => (Func::Floor, 1),
            "normal_cdf" => (Func::NormalCdf, 1),
            "normal_pdf" => (Func::NormalPdf, 1),
            "min" => (Func::Min, 2),
            "max" => (Func::Max, 2),
            "pow" => (Func::Pow, 2),
            "ite" => (Func::Ite, 3),
            "lower_inc_gamma" | "upper_inc_gamma" => {
                check_arity(&name, offset, &args, 2)?;
                let z = const_value(&args[0]).ok_or(ParseError::NonConstParameter {
                    offset,
                    name: name.clone(),
                })?;
                let func = if base == "lower_inc_gamma" {
                    Func::LowerIncGamma { z }
                } else {
                    Func::UpperIncGamma { z }
                };
                return Ok(Expr::Call(func, vec![args.into_iter().nth(1).unwrap()]));
            }
            _ => return Err(ParseError::UnknownIdentifier { offset, name }),
        };
        check_arity(&name, offset, &args, arity)?;
        Ok(Expr::Call(func, args))
    }
}

fn check_arity(
    name: &str,
    offset: usize,
    args: &[Expr],
    expected: usize,
) -> Result<(), ParseError> {
    if args.len() != expected {
        return Err(ParseError::ArityMismatch {
            offset,
            name: name.to_string(),
            expected,
            got: args.len(),
        });
    }
    Ok(())
}

/// Fold a constant subtree to its value (partial application of the gamma
/// order parameter happens at parse time).
fn const_value(e: &Expr) -> Option<f64> {
    if !e.is_const() {
        return None;
    }
    super::eval::eval(e, f64::NAN, &super::EvalContext::default()).ok()
}
