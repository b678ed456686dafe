//! Recursive-descent parser.
//!
//! Grammar (EBNF):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          right-associative
//! atom   := NUMBER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//! Unary minus binds looser than `^`, so `-x^2` parses as `-(x^2)`.

use super::lex::{Spanned, Tok};
use super::{BinOp, Expr, Func, ParseError};

pub struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: u32,
    end_col: u32,
}

impl Parser {
    pub fn new(toks: Vec<Spanned>, source: &str) -> Self {
        let mut line = 1u32;
        let mut col = 1u32;
        for c in source.chars() {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Self { toks, pos: 0, end_line: line, end_col: col }
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> ParseError {
        match self.peek() {
            Some(s) => ParseError { line: s.line, col: s.col, message },
            None => ParseError {
                line: self.end_line,
                col: self.end_col,
                message: format!("{message} (unexpected end of input)"),
            },
        }
    }

    pub fn parse_expr_complete(&mut self) -> Result<Expr, ParseError> {
        let e = self.expr()?;
        if let Some(s) = self.peek() {
            return Err(ParseError {
                line: s.line,
                col: s.col,
                message: format!("unexpected token `{}` after expression", s.tok),
            });
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(s) = self.peek() {
            let op = match s.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(s) = self.peek() {
            let op = match s.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some(Spanned { tok: Tok::Minus, .. })) {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Spanned { tok: Tok::Caret, .. })) {
            self.bump();
            // Right-associative; the exponent may carry a sign: `x^-2`.
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(s) = self.peek().cloned() else {
            return Err(self.error_here("expected an expression".to_string()));
        };
        match s.tok {
            Tok::Number(x) => {
                self.bump();
                Ok(Expr::Number(x))
            }
            Tok::Ident(ref name) => {
                self.bump();
                if matches!(self.peek(), Some(Spanned { tok: Tok::LParen, .. })) {
                    self.bump();
                    let args = self.call_args()?;
                    let func = Func::by_name(name).ok_or(ParseError {
                        line: s.line,
                        col: s.col,
                        message: format!("unknown function `{name}`"),
                    })?;
                    if args.len() != func.arity() {
                        return Err(ParseError {
                            line: s.line,
                            col: s.col,
                            message: format!(
                                "function `{name}` takes {} argument(s), got {}",
                                func.arity(),
                                args.len()
                            ),
                        });
                    }
                    Ok(Expr::Call(func, args))
                } else {
                    Ok(Expr::Variable(name.clone()))
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            ref other => Err(ParseError {
                line: s.line,
                col: s.col,
                message: format!("unexpected token `{other}`"),
            }),
        }
    }

    fn call_args(&mut self) -> Result<Vec<Expr>, ParseError> {
        let mut args = vec![self.expr()?];
        loop {
            match self.peek() {
                Some(Spanned { tok: Tok::Comma, .. }) => {
                    self.bump();
                    args.push(self.expr()?);
                }
                Some(Spanned { tok: Tok::RParen, .. }) => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.error_here("expected `,` or `)`".to_string())),
            }
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Spanned { tok: Tok::RParen, .. }) => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error_here("expected `)`".to_string())),
        }
    }
}
