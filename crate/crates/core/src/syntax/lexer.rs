use std::fmt;

use num_bigint::BigInt;

use super::{Pos, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase-initial (or `$`/`_`) dotted identifier: symbols, function
    /// names, labels and keywords.
    Ident(String),
    /// Uppercase-initial identifier.
    Var(String),
    Int(BigInt),
    Str(String),
    /// `@name`, e.g. `@rule` or `@builtin-int`.
    Directive(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Slash,
    Arrow,
    EqEq,
    MapsTo,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Var(s) => write!(f, "variable `{s}`"),
            Tok::Int(z) => write!(f, "integer `{z}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Directive(s) => write!(f, "`@{s}`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Arrow => f.write_str("`=>`"),
            Tok::EqEq => f.write_str("`==`"),
            Tok::MapsTo => f.write_str("`|->`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn take_while(&mut self, out: &mut String, pred: impl Fn(char) -> bool) {
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            out.push(c);
            self.bump();
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '$')
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cur = Cursor {
        chars: src.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();

    loop {
        while cur.peek().is_some_and(char::is_whitespace) {
            cur.bump();
        }
        let pos = cur.pos;
        let Some(c) = cur.peek() else {
            out.push(Token { tok: Tok::Eof, pos });
            return Ok(out);
        };

        let tok = match c {
            '/' => {
                cur.bump();
                if cur.peek() == Some('*') {
                    cur.bump();
                    skip_comment(&mut cur, pos)?;
                    continue;
                }
                Tok::Slash
            }
            '[' => single(&mut cur, Tok::LBrack),
            ']' => single(&mut cur, Tok::RBrack),
            '(' => single(&mut cur, Tok::LParen),
            ')' => single(&mut cur, Tok::RParen),
            ',' => single(&mut cur, Tok::Comma),
            ';' => single(&mut cur, Tok::Semi),
            ':' => single(&mut cur, Tok::Colon),
            '=' => {
                cur.bump();
                match cur.bump() {
                    Some('>') => Tok::Arrow,
                    Some('=') => Tok::EqEq,
                    _ => return Err(SyntaxError::new(pos, "expected `=>` or `==`")),
                }
            }
            '|' => {
                cur.bump();
                if cur.bump() == Some('-') && cur.bump() == Some('>') {
                    Tok::MapsTo
                } else {
                    return Err(SyntaxError::new(pos, "expected `|->`"));
                }
            }
            '@' => {
                cur.bump();
                let mut name = String::new();
                cur.take_while(&mut name, |c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_'));
                if name.is_empty() {
                    return Err(SyntaxError::new(pos, "expected a directive name after `@`"));
                }
                Tok::Directive(name)
            }
            '"' => {
                cur.bump();
                Tok::Str(lex_string(&mut cur, pos)?)
            }
            '-' | '0'..='9' => {
                let mut digits = String::new();
                if c == '-' {
                    digits.push('-');
                    cur.bump();
                }
                cur.take_while(&mut digits, |c| c.is_ascii_digit());
                match digits.parse::<BigInt>() {
                    Ok(z) => Tok::Int(z),
                    Err(_) => return Err(SyntaxError::new(pos, "malformed integer literal")),
                }
            }
            c if c.is_ascii_uppercase() => {
                let mut name = String::new();
                cur.take_while(&mut name, |c| c.is_ascii_alphanumeric() || c == '_');
                Tok::Var(name)
            }
            c if c.is_ascii_lowercase() || c == '_' || c == '$' => {
                let mut name = String::new();
                cur.take_while(&mut name, is_ident_char);
                Tok::Ident(name)
            }
            other => {
                return Err(SyntaxError::new(pos, format!("unexpected character `{other}`")));
            }
        };
        out.push(Token { tok, pos });
    }
}

fn single(cur: &mut Cursor<'_>, tok: Tok) -> Tok {
    cur.bump();
    tok
}

fn skip_comment(cur: &mut Cursor<'_>, start: Pos) -> Result<(), SyntaxError> {
    loop {
        match cur.bump() {
            Some('*') if cur.peek() == Some('/') => {
                cur.bump();
                return Ok(());
            }
            Some(_) => {}
            None => return Err(SyntaxError::new(start, "unterminated comment")),
        }
    }
}

fn lex_string(cur: &mut Cursor<'_>, start: Pos) -> Result<String, SyntaxError> {
    let mut s = String::new();
    loop {
        match cur.bump() {
            Some('"') => return Ok(s),
            Some('\\') => {
                let esc_pos = cur.pos;
                match cur.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some('r') => s.push('\r'),
                    _ => return Err(SyntaxError::new(esc_pos, "unknown escape sequence")),
                }
            }
            Some(c) => s.push(c),
            None => return Err(SyntaxError::new(start, "unterminated string literal")),
        }
    }
}
