//! Tokenizer for the scenario file format. `#` starts a comment running
//! to end of line; whitespace is insignificant outside strings.

use crate::diag::Diagnostic;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Ident(String),
    Str(String),
    Int(i64),
    Float(f64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Comma,
    Semi,
    Eq,
    Arrow,
    Slash,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Str(s) => format!("string \"{s}\""),
            TokenKind::Int(v) => format!("integer {v}"),
            TokenKind::Float(v) => format!("number {v}"),
            TokenKind::LBrace => "`{`".to_string(),
            TokenKind::RBrace => "`}`".to_string(),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
            TokenKind::Colon => "`:`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Semi => "`;`".to_string(),
            TokenKind::Eq => "`=`".to_string(),
            TokenKind::Arrow => "`->`".to_string(),
            TokenKind::Slash => "`/`".to_string(),
            TokenKind::Eof => "end of file".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.pos + 1).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

pub fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut lx = Lexer {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();
    loop {
        // skip whitespace and comments
        loop {
            match lx.peek() {
                Some(c) if c.is_whitespace() => {
                    lx.bump();
                }
                Some('#') => {
                    while let Some(c) = lx.peek() {
                        if c == '\n' {
                            break;
                        }
                        lx.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (lx.line, lx.col);
        let Some(c) = lx.peek() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                line,
                col,
            });
            return Ok(tokens);
        };
        let kind = match c {
            '{' => {
                lx.bump();
                TokenKind::LBrace
            }
            '}' => {
                lx.bump();
                TokenKind::RBrace
            }
            '(' => {
                lx.bump();
                TokenKind::LParen
            }
            ')' => {
                lx.bump();
                TokenKind::RParen
            }
            ':' => {
                lx.bump();
                TokenKind::Colon
            }
            ',' => {
                lx.bump();
                TokenKind::Comma
            }
            ';' => {
                lx.bump();
                TokenKind::Semi
            }
            '=' => {
                lx.bump();
                TokenKind::Eq
            }
            '/' => {
                lx.bump();
                TokenKind::Slash
            }
            '"' => {
                lx.bump();
                let mut s = String::new();
                loop {
                    match lx.bump() {
                        Some('"') => break,
                        Some('\\') => match lx.bump() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => {
                                return Err(Diagnostic::new(
                                    lx.line,
                                    lx.col,
                                    "unsupported escape in string",
                                )
                                .with_hint("only \\\" and \\\\ are recognized"))
                            }
                        },
                        Some(ch) => s.push(ch),
                        None => {
                            return Err(Diagnostic::new(line, col, "unterminated string")
                                .with_hint("close the scenario name with `\"`"))
                        }
                    }
                }
                TokenKind::Str(s)
            }
            '-' if lx.peek2() == Some('>') => {
                lx.bump();
                lx.bump();
                TokenKind::Arrow
            }
            '-' | '+' => {
                if matches!(lx.peek2(), Some(d) if d.is_ascii_digit()) {
                    lex_number(&mut lx, line, col)?
                } else {
                    return Err(Diagnostic::new(line, col, format!("stray `{c}`"))
                        .with_hint("a sign must be followed by digits; edges use `->`"));
                }
            }
            d if d.is_ascii_digit() => lex_number(&mut lx, line, col)?,
            a if a.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(ch) = lx.peek() {
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        s.push(ch);
                        lx.bump();
                    } else {
                        break;
                    }
                }
                TokenKind::Ident(s)
            }
            other => {
                return Err(Diagnostic::new(
                    line,
                    col,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        tokens.push(Token { kind, line, col });
    }
}

fn lex_number(lx: &mut Lexer, line: usize, col: usize) -> Result<TokenKind, Diagnostic> {
    let mut s = String::new();
    if matches!(lx.peek(), Some('-' | '+')) {
        s.push(lx.bump().unwrap());
    }
    while matches!(lx.peek(), Some(d) if d.is_ascii_digit()) {
        s.push(lx.bump().unwrap());
    }
    let mut is_float = false;
    if lx.peek() == Some('.') {
        is_float = true;
        s.push(lx.bump().unwrap());
        if !matches!(lx.peek(), Some(d) if d.is_ascii_digit()) {
            return Err(Diagnostic::new(line, col, "malformed number")
                .with_hint("digits must follow the decimal point"));
        }
        while matches!(lx.peek(), Some(d) if d.is_ascii_digit()) {
            s.push(lx.bump().unwrap());
        }
    }
    if matches!(lx.peek(), Some('e' | 'E')) {
        is_float = true;
        s.push(lx.bump().unwrap());
        if matches!(lx.peek(), Some('-' | '+')) {
            s.push(lx.bump().unwrap());
        }
        if !matches!(lx.peek(), Some(d) if d.is_ascii_digit()) {
            return Err(Diagnostic::new(line, col, "malformed number")
                .with_hint("digits must follow the exponent"));
        }
        while matches!(lx.peek(), Some(d) if d.is_ascii_digit()) {
            s.push(lx.bump().unwrap());
        }
    }
    if is_float {
        s.parse::<f64>()
            .map(TokenKind::Float)
            .map_err(|_| Diagnostic::new(line, col, format!("bad number `{s}`")))
    } else {
        s.parse::<i64>().map(TokenKind::Int).map_err(|_| {
            Diagnostic::new(line, col, format!("integer `{s}` is too large"))
                .with_hint("use a float if the magnitude is intentional")
        })
    }
}
