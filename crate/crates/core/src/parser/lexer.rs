use super::{ParseError, SourceSpan};
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    TyVar(String),
    /// Quoted inner text together with the position of its first character.
    Str(String, usize, usize),
    Colon,
    DoubleColon,
    Eq,
    Bar,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::TyVar(s) => format!("type variable `{s}`"),
            Tok::Str(..) => "quoted string".into(),
            Tok::Colon => "`:`".into(),
            Tok::DoubleColon => "`::`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned<T> {
    pub tok: T,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, col: usize) -> Self {
        Cursor { chars: src.chars().peekable(), line, col }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else if c != '\r' {
            self.col += 1;
        }
        Some(c)
    }
}

/// Tokenizes the outer declaration syntax.
pub(crate) fn lex_outer(src: &str, file: &Path) -> Result<Vec<Spanned<Tok>>, ParseError> {
    let mut cur = Cursor::new(src, 1, 1);
    let mut out = Vec::new();
    let err = |line, col, msg: String| ParseError::new(SourceSpan::new(file, line, col), msg, vec![]);
    loop {
        while cur.peek().is_some_and(char::is_whitespace) {
            cur.bump();
        }
        let (line, col) = (cur.line, cur.col);
        let Some(c) = cur.peek() else {
            out.push(Spanned { tok: Tok::Eof, line, col });
            return Ok(out);
        };
        let tok = if c == '(' {
            cur.bump();
            if cur.peek() != Some('*') {
                return Err(err(line, col, "unexpected `(` outside quotes".into()));
            }
            cur.bump();
            let mut prev = ' ';
            loop {
                match cur.bump() {
                    Some(')') if prev == '*' => break,
                    Some(ch) => prev = ch,
                    None => return Err(err(line, col, "unterminated comment".into())),
                }
            }
            continue;
        } else if c == '"' {
            cur.bump();
            let (sl, sc) = (cur.line, cur.col);
            let mut s = String::new();
            loop {
                match cur.bump() {
                    Some('"') => break,
                    Some(ch) => s.push(ch),
                    None => return Err(err(line, col, "unterminated string".into())),
                }
            }
            Tok::Str(s, sl, sc)
        } else if c == ':' {
            cur.bump();
            if cur.peek() == Some(':') {
                cur.bump();
                Tok::DoubleColon
            } else {
                Tok::Colon
            }
        } else if c == '=' {
            cur.bump();
            Tok::Eq
        } else if c == '|' {
            cur.bump();
            Tok::Bar
        } else if c == '\'' {
            cur.bump();
            let mut s = String::from("'");
            while cur.peek().is_some_and(is_ident_char) {
                s.push(cur.bump().unwrap());
            }
            if s.len() == 1 {
                return Err(err(line, col, "empty type variable name".into()));
            }
            Tok::TyVar(s)
        } else if is_ident_start(c) {
            let mut s = String::new();
            while cur.peek().is_some_and(|c| is_ident_char(c) || c == '.') {
                s.push(cur.bump().unwrap());
            }
            Tok::Ident(s)
        } else {
            return Err(err(line, col, format!("unexpected character `{c}`")));
        };
        out.push(Spanned { tok, line, col });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ITok {
    Ident(String),
    TyVar(String),
    Schematic(String),
    Num(u32),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Eq,
    Hash,
    At,
    Imp,
    Arrow,
    Eof,
}

impl ITok {
    pub(crate) fn describe(&self) -> String {
        match self {
            ITok::Ident(s) => format!("`{s}`"),
            ITok::TyVar(s) => format!("`{s}`"),
            ITok::Schematic(s) => format!("`?{s}`"),
            ITok::Num(n) => format!("`{n}`"),
            ITok::LParen => "`(`".into(),
            ITok::RParen => "`)`".into(),
            ITok::LBrack => "`[`".into(),
            ITok::RBrack => "`]`".into(),
            ITok::Comma => "`,`".into(),
            ITok::Eq => "`=`".into(),
            ITok::Hash => "`#`".into(),
            ITok::At => "`@`".into(),
            ITok::Imp => "`==>`".into(),
            ITok::Arrow => "`=>`".into(),
            ITok::Eof => "end of quoted text".into(),
        }
    }
}

/// Tokenizes the inner syntax of a quoted string that starts at
/// `(line, col)`.
pub(crate) fn lex_inner(src: &str, file: &Path, line: usize, col: usize) -> Result<Vec<Spanned<ITok>>, ParseError> {
    let mut cur = Cursor::new(src, line, col);
    let mut out = Vec::new();
    let err = |line, col, msg: String| ParseError::new(SourceSpan::new(file, line, col), msg, vec![]);
    loop {
        while cur.peek().is_some_and(char::is_whitespace) {
            cur.bump();
        }
        let (line, col) = (cur.line, cur.col);
        let Some(c) = cur.peek() else {
            out.push(Spanned { tok: ITok::Eof, line, col });
            return Ok(out);
        };
        let tok = match c {
            '(' => {
                cur.bump();
                ITok::LParen
            }
            ')' => {
                cur.bump();
                ITok::RParen
            }
            '[' => {
                cur.bump();
                ITok::LBrack
            }
            ']' => {
                cur.bump();
                ITok::RBrack
            }
            ',' => {
                cur.bump();
                ITok::Comma
            }
            '#' => {
                cur.bump();
                ITok::Hash
            }
            '@' => {
                cur.bump();
                ITok::At
            }
            '⟹' => {
                cur.bump();
                ITok::Imp
            }
            '⇒' => {
                cur.bump();
                ITok::Arrow
            }
            '=' => {
                cur.bump();
                if cur.peek() == Some('=') {
                    cur.bump();
                    if cur.peek() != Some('>') {
                        return Err(err(line, col, "expected `==>`".into()));
                    }
                    cur.bump();
                    ITok::Imp
                } else if cur.peek() == Some('>') {
                    cur.bump();
                    ITok::Arrow
                } else {
                    ITok::Eq
                }
            }
            '?' => {
                cur.bump();
                let mut s = String::new();
                while cur.peek().is_some_and(is_ident_char) {
                    s.push(cur.bump().unwrap());
                }
                if s.is_empty() {
                    return Err(err(line, col, "empty schematic variable name".into()));
                }
                ITok::Schematic(s)
            }
            '\'' => {
                cur.bump();
                let mut s = String::from("'");
                while cur.peek().is_some_and(is_ident_char) {
                    s.push(cur.bump().unwrap());
                }
                if s.len() == 1 {
                    return Err(err(line, col, "empty type variable name".into()));
                }
                ITok::TyVar(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(cur.bump().unwrap());
                }
                match s.parse::<u32>() {
                    Ok(n) if n <= 64 => ITok::Num(n),
                    _ => return Err(err(line, col, format!("numeral `{s}` too large"))),
                }
            }
            c if is_ident_start(c) => {
                let mut s = String::new();
                while cur.peek().is_some_and(is_ident_char) {
                    s.push(cur.bump().unwrap());
                }
                ITok::Ident(s)
            }
            other => return Err(err(line, col, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned { tok, line, col });
    }
}
