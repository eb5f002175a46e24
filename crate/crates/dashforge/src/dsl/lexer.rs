//! Lexer for the `.dash` syntax.
//!
//! The lexical layer is deliberately small: bare keywords, double-quoted
//! strings with `\"` and `\\` as the only escapes, braces, and `#` comments
//! running to end of line. CRLF input is accepted; positions are 1-based
//! line/column pairs counted in characters.

use super::{ParseError, SourceLocation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// A bare word; the parser decides which are keywords.
    Word(String),
    /// A decoded string literal.
    Str(String),
    LBrace,
    RBrace,
    Eof,
}

impl TokenKind {
    /// The lexeme as it should appear in error messages.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("\"{w}\""),
            TokenKind::Str(_) => "string".to_string(),
            TokenKind::LBrace => "\"{\"".to_string(),
            TokenKind::RBrace => "\"}\"".to_string(),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub location: SourceLocation,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn here(&self) -> SourceLocation {
        SourceLocation {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        match c {
            '\n' => {
                self.line += 1;
                self.column = 1;
            }
            '\r' => {
                // CRLF counts as one newline; a lone CR is treated the same.
                if self.chars.peek() != Some(&'\n') {
                    self.line += 1;
                    self.column = 1;
                }
            }
            _ => self.column += 1,
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' || c == '\r' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn string(&mut self, start: SourceLocation) -> Result<Token, ParseError> {
        self.bump(); // opening quote
        let mut value = String::new();
        loop {
            let at = self.here();
            match self.bump() {
                None => {
                    return Err(ParseError {
                        location: at,
                        expected: "closing '\"'".into(),
                        found: "end of input".into(),
                    })
                }
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some('"') => value.push('"'),
                    Some('\\') => value.push('\\'),
                    Some(other) => {
                        return Err(ParseError {
                            location: at,
                            expected: "escape sequence \\\" or \\\\".into(),
                            found: format!("\"\\{other}\""),
                        })
                    }
                    None => {
                        return Err(ParseError {
                            location: at,
                            expected: "escape sequence \\\" or \\\\".into(),
                            found: "end of input".into(),
                        })
                    }
                },
                Some(c) => value.push(c),
            }
        }
        Ok(Token {
            kind: TokenKind::Str(value),
            location: start,
        })
    }

    fn word(&mut self, start: SourceLocation) -> Token {
        let mut word = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Token {
            kind: TokenKind::Word(word),
            location: start,
        }
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let at = self.here();
        match self.chars.peek() {
            None => Ok(Token {
                kind: TokenKind::Eof,
                location: at,
            }),
            Some('"') => self.string(at),
            Some('{') => {
                self.bump();
                Ok(Token {
                    kind: TokenKind::LBrace,
                    location: at,
                })
            }
            Some('}') => {
                self.bump();
                Ok(Token {
                    kind: TokenKind::RBrace,
                    location: at,
                })
            }
            Some(&c) if c.is_alphabetic() || c == '_' => Ok(self.word(at)),
            Some(&c) => Err(ParseError {
                location: at,
                expected: "keyword, string, \"{\", or \"}\"".into(),
                found: format!("\"{c}\""),
            }),
        }
    }
}

/// Tokenize the whole input, ending with a single `Eof` token.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    loop {
        let token = lexer.next_token()?;
        let done = token.kind == TokenKind::Eof;
        tokens.push(token);
        if done {
            return Ok(tokens);
        }
    }
}
