//! Tokenizer for the expression language.

use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Number(f64),
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

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Number(x) => write!(f, "{x}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
        }
    }
}

/// A token together with its 1-based source position.
#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

struct Cursor<'a> {
    rest: std::str::Chars<'a>,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.rest.clone().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.rest.clone();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.rest.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

pub fn tokenize(source: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut cur = Cursor { rest: source.chars(), line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        let (line, col) = (cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let tok = match c {
            '+' => {
                cur.bump();
                Tok::Plus
            }
            '-' => {
                cur.bump();
                Tok::Minus
            }
            '*' => {
                cur.bump();
                Tok::Star
            }
            '/' => {
                cur.bump();
                Tok::Slash
            }
            '^' => {
                cur.bump();
                Tok::Caret
            }
            '(' => {
                cur.bump();
                Tok::LParen
            }
            ')' => {
                cur.bump();
                Tok::RParen
            }
            ',' => {
                cur.bump();
                Tok::Comma
            }
            '0'..='9' => lex_number(&mut cur, line, col)?,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(c) = cur.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(name)
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character `{other}`"),
                });
            }
        };
        out.push(Spanned { tok, line, col });
    }
    Ok(out)
}

fn lex_number(cur: &mut Cursor, line: u32, col: u32) -> Result<Tok, ParseError> {
    let mut text = String::new();
    while matches!(cur.peek(), Some('0'..='9')) {
        text.push(cur.bump().unwrap());
    }
    if cur.peek() == Some('.') {
        text.push(cur.bump().unwrap());
        while matches!(cur.peek(), Some('0'..='9')) {
            text.push(cur.bump().unwrap());
        }
    }
    // Exponent only when it is unambiguously part of the number, so that
    // `2*e` still lexes `e` as an identifier.
    if matches!(cur.peek(), Some('e' | 'E')) {
        let next = cur.peek2();
        let has_digits = matches!(next, Some('0'..='9'))
            || (matches!(next, Some('+' | '-')) && {
                let mut it = cur.rest.clone();
                it.next();
                it.next();
                matches!(it.next(), Some('0'..='9'))
            });
        if has_digits {
            text.push(cur.bump().unwrap());
            if matches!(cur.peek(), Some('+' | '-')) {
                text.push(cur.bump().unwrap());
            }
            while matches!(cur.peek(), Some('0'..='9')) {
                text.push(cur.bump().unwrap());
            }
        }
    }
    text.parse::<f64>().map(Tok::Number).map_err(|_| ParseError {
        line,
        col,
        message: format!("malformed number `{text}`"),
    })
}
