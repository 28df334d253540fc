//! S-expression reader with source positions.

use std::fmt;

use super::FrontendError;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    Symbol(String),
    Keyword(String),
    Numeral(String),
    Decimal(String),
    /// `#x…` literal: hex digits, bit width.
    Hex(String),
    /// `#b…` literal.
    Binary(String),
    Str(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SExpr {
    Atom(Atom, Pos),
    List(Vec<SExpr>, Pos),
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Atom(_, p) | SExpr::List(_, p) => *p,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            SExpr::Atom(Atom::Symbol(s), _) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(items, _) => Some(items),
            _ => None,
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(a, _) => match a {
                Atom::Symbol(s) | Atom::Numeral(s) | Atom::Decimal(s) => f.write_str(s),
                Atom::Keyword(s) => write!(f, ":{s}"),
                Atom::Hex(s) => write!(f, "#x{s}"),
                Atom::Binary(s) => write!(f, "#b{s}"),
                Atom::Str(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            },
            SExpr::List(items, _) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        Reader {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, column: 1 },
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn syntax(&self, pos: Pos, msg: impl Into<String>) -> FrontendError {
        FrontendError::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    fn read(&mut self) -> Result<SExpr, FrontendError> {
        self.skip_trivia();
        let start = self.pos;
        match self.peek() {
            None => Err(self.syntax(start, "unexpected end of input")),
            Some(')') => Err(self.syntax(start, "unexpected ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => return Err(self.syntax(start, "unclosed '('")),
                        Some(')') => {
                            self.bump();
                            return Ok(SExpr::List(items, start));
                        }
                        _ => items.push(self.read()?),
                    }
                }
            }
            Some('"') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.syntax(start, "unterminated string literal")),
                        Some('"') if self.peek() == Some('"') => {
                            self.bump();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                    }
                }
                Ok(SExpr::Atom(Atom::Str(s), start))
            }
            Some('|') => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.syntax(start, "unterminated quoted symbol")),
                        Some('|') => break,
                        Some(c) => s.push(c),
                    }
                }
                Ok(SExpr::Atom(Atom::Symbol(s), start))
            }
            Some(_) => {
                let mut tok = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' || c == '"' {
                        break;
                    }
                    tok.push(c);
                    self.bump();
                }
                classify(tok, start)
            }
        }
    }
}

fn classify(tok: String, pos: Pos) -> Result<SExpr, FrontendError> {
    let atom = if let Some(rest) = tok.strip_prefix("#x") {
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(FrontendError::Syntax {
                pos,
                msg: format!("malformed hexadecimal literal '{tok}'"),
            });
        }
        Atom::Hex(rest.to_string())
    } else if let Some(rest) = tok.strip_prefix("#b") {
        if rest.is_empty() || !rest.chars().all(|c| c == '0' || c == '1') {
            return Err(FrontendError::Syntax {
                pos,
                msg: format!("malformed binary literal '{tok}'"),
            });
        }
        Atom::Binary(rest.to_string())
    } else if let Some(rest) = tok.strip_prefix(':') {
        Atom::Keyword(rest.to_string())
    } else if tok.chars().all(|c| c.is_ascii_digit()) {
        Atom::Numeral(tok)
    } else if is_decimal(&tok) {
        Atom::Decimal(tok)
    } else {
        Atom::Symbol(tok)
    };
    Ok(SExpr::Atom(atom, pos))
}

fn is_decimal(tok: &str) -> bool {
    match tok.split_once('.') {
        Some((int, frac)) => {
            !int.is_empty()
                && !frac.is_empty()
                && int.chars().all(|c| c.is_ascii_digit())
                && frac.chars().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}

/// Reads every top-level s-expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<SExpr>, FrontendError> {
    let mut reader = Reader::new(text);
    let mut out = Vec::new();
    loop {
        reader.skip_trivia();
        if reader.peek().is_none() {
            return Ok(out);
        }
        out.push(reader.read()?);
    }
}
