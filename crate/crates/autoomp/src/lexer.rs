//! Free-form Fortran lexer, scoped to what the loop analysis needs.
//!
//! The lexer is lossless: every token records its byte offset into the
//! source, and the bytes between consecutive tokens are whitespace only.
//! Comments and character literals are kept as single opaque tokens so
//! identifiers inside them never reach the analysis.

use crate::error::{Error, Result};

/// Keywords the statement parser recognizes. Everything else lexes as a
/// plain identifier.
pub const KEYWORDS: &[&str] = &["DO", "END", "CALL", "IF", "THEN", "ELSE", "ENDIF", "ENDDO"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Keyword,
    IntegerLiteral,
    RealLiteral,
    StringLiteral,
    Operator,
    Punctuation,
    Continuation,
    Comment,
    EndOfLine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based source line.
    pub line: u32,
    /// 1-based source column.
    pub column: u32,
    /// Byte offset into the original source.
    pub offset: usize,
}

impl Token {
    pub fn is_keyword(&self, kw: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text.eq_ignore_ascii_case(kw)
    }

    pub fn is_operator(&self, op: &str) -> bool {
        self.kind == TokenKind::Operator && self.text == op
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punctuation && self.text == p
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    column: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<u8> {
        self.src.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn token(&self, kind: TokenKind, start: usize, line: u32, column: u32) -> Token {
        Token {
            kind,
            text: String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
            line,
            column,
            offset: start,
        }
    }
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn is_exponent_letter(c: u8) -> bool {
    matches!(c, b'e' | b'E' | b'd' | b'D')
}

/// Lex a free-form Fortran fragment into a token stream.
pub fn tokenize(source_text: &str) -> Result<Vec<Token>> {
    let mut lx = Lexer::new(source_text);
    let mut tokens = Vec::new();

    while let Some(c) = lx.peek() {
        let (start, line, column) = (lx.pos, lx.line, lx.column);
        match c {
            b' ' | b'\t' | b'\r' => {
                lx.bump();
            }
            b'\n' => {
                lx.bump();
                tokens.push(lx.token(TokenKind::EndOfLine, start, line, column));
            }
            b'!' => {
                while lx.peek().is_some_and(|c| c != b'\n') {
                    lx.bump();
                }
                tokens.push(lx.token(TokenKind::Comment, start, line, column));
            }
            b'&' => {
                lx.bump();
                tokens.push(lx.token(TokenKind::Continuation, start, line, column));
            }
            b'\'' | b'"' => {
                let quote = c;
                lx.bump();
                let mut closed = false;
                while let Some(c) = lx.peek() {
                    if c == b'\n' {
                        break;
                    }
                    lx.bump();
                    if c == quote {
                        // doubled quote is an escaped quote
                        if lx.peek() == Some(quote) {
                            lx.bump();
                        } else {
                            closed = true;
                            break;
                        }
                    }
                }
                if !closed {
                    return Err(Error::UnterminatedString { line, column });
                }
                tokens.push(lx.token(TokenKind::StringLiteral, start, line, column));
            }
            c if is_ident_start(c) => {
                while lx.peek().is_some_and(is_ident_char) {
                    lx.bump();
                }
                let text = &source_text[start..lx.pos];
                let kind = if KEYWORDS.iter().any(|k| text.eq_ignore_ascii_case(k)) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Identifier
                };
                tokens.push(lx.token(kind, start, line, column));
            }
            c if c.is_ascii_digit() => {
                tokens.push(lex_number(&mut lx, start, line, column));
            }
            b'.' => {
                // Either a dot-operator (.lt. .and. ...), or a real literal .5
                if lx.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
                    lx.bump(); // '.'
                    tokens.push(lex_number(&mut lx, start, line, column));
                } else if lx.peek_at(1).is_some_and(|c| c.is_ascii_alphabetic()) {
                    lx.bump(); // '.'
                    while lx.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                        lx.bump();
                    }
                    if lx.peek() == Some(b'.') {
                        lx.bump();
                        tokens.push(lx.token(TokenKind::Operator, start, line, column));
                    } else {
                        return Err(Error::IllegalCharacter {
                            ch: '.',
                            line,
                            column,
                        });
                    }
                } else {
                    return Err(Error::IllegalCharacter {
                        ch: '.',
                        line,
                        column,
                    });
                }
            }
            b'*' => {
                lx.bump();
                if lx.peek() == Some(b'*') {
                    lx.bump();
                }
                tokens.push(lx.token(TokenKind::Operator, start, line, column));
            }
            b'/' => {
                lx.bump();
                // '//' concat and '/=' not-equal are single tokens
                if matches!(lx.peek(), Some(b'/') | Some(b'=')) {
                    lx.bump();
                }
                tokens.push(lx.token(TokenKind::Operator, start, line, column));
            }
            b'<' | b'>' | b'=' => {
                lx.bump();
                if lx.peek() == Some(b'=') {
                    lx.bump();
                }
                tokens.push(lx.token(TokenKind::Operator, start, line, column));
            }
            b'+' | b'-' => {
                lx.bump();
                tokens.push(lx.token(TokenKind::Operator, start, line, column));
            }
            b'(' | b')' | b',' | b':' | b';' | b'%' => {
                lx.bump();
                tokens.push(lx.token(TokenKind::Punctuation, start, line, column));
            }
            other => {
                return Err(Error::IllegalCharacter {
                    ch: other as char,
                    line,
                    column,
                });
            }
        }
    }
    Ok(tokens)
}

fn lex_number(lx: &mut Lexer<'_>, start: usize, line: u32, column: u32) -> Token {
    let mut real = lx.src[start] == b'.';
    while lx.peek().is_some_and(|c| c.is_ascii_digit()) {
        lx.bump();
    }
    if !real && lx.peek() == Some(b'.') {
        // '1.lt.' must stay integer + dot-operator
        let dot_op = lx.peek_at(1).is_some_and(|c| c.is_ascii_alphabetic());
        if !dot_op {
            real = true;
            lx.bump();
            while lx.peek().is_some_and(|c| c.is_ascii_digit()) {
                lx.bump();
            }
        }
    }
    if lx.peek().is_some_and(is_exponent_letter) {
        let mut ahead = 1;
        if matches!(lx.peek_at(ahead), Some(b'+') | Some(b'-')) {
            ahead += 1;
        }
        if lx.peek_at(ahead).is_some_and(|c| c.is_ascii_digit()) {
            real = true;
            for _ in 0..=ahead {
                lx.bump();
            }
            while lx.peek().is_some_and(|c| c.is_ascii_digit()) {
                lx.bump();
            }
        }
    }
    let kind = if real {
        TokenKind::RealLiteral
    } else {
        TokenKind::IntegerLiteral
    };
    lx.token(kind, start, line, column)
}
