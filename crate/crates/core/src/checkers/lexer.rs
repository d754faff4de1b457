//! Lossless C lexer. Concatenating the text of every token gives back the
//! input exactly. No preprocessing happens; a directive line (including its
//! line splices and any comments on it) is a single `PpDirective` token.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Identifier,
    Keyword,
    Number,
    String,
    CharConst,
    Punctuator,
    PpDirective,
    Comment,
    Whitespace,
    Newline,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub column: u32,
}

impl Token {
    pub fn is_trivia(&self) -> bool {
        matches!(
            self.kind,
            TokenKind::Whitespace | TokenKind::Newline | TokenKind::Comment
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LexErrorKind {
    UnterminatedComment,
    UnterminatedLiteral,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexError {
    pub kind: LexErrorKind,
    pub line: u32,
    pub column: u32,
}

const KEYWORDS: &[&str] = &[
    "auto",
    "break",
    "case",
    "char",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extern",
    "float",
    "for",
    "goto",
    "if",
    "inline",
    "int",
    "long",
    "register",
    "restrict",
    "return",
    "short",
    "signed",
    "sizeof",
    "static",
    "struct",
    "switch",
    "typedef",
    "union",
    "unsigned",
    "void",
    "volatile",
    "while",
    "_Alignas",
    "_Alignof",
    "_Atomic",
    "_Bool",
    "_Complex",
    "_Generic",
    "_Imaginary",
    "_Noreturn",
    "_Static_assert",
    "_Thread_local",
];

// Longest first within each length class.
const PUNCTUATORS: &[&str] = &[
    "...", "<<=", ">>=", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "*=",
    "/=", "%=", "+=", "-=", "&=", "^=", "|=", "##", "[", "]", "(", ")", "{", "}", ".", "&", "*",
    "+", "-", "~", "!", "/", "%", "<", ">", "^", "|", "?", ":", ";", "=", ",", "#",
];

pub fn is_keyword(text: &str) -> bool {
    KEYWORDS.contains(&text)
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Length in bytes of a newline at the start of `s` (`\n` or `\r\n`).
fn newline_len(s: &str) -> Option<usize> {
    if s.starts_with('\n') {
        Some(1)
    } else if s.starts_with("\r\n") {
        Some(2)
    } else {
        None
    }
}

/// Length of a backslash-newline splice at the start of `s`.
fn splice_len(s: &str) -> Option<usize> {
    s.strip_prefix('\\').and_then(newline_len).map(|n| n + 1)
}

pub struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    column: u32,
    at_line_start: bool,
    tokens: Vec<Token>,
    errors: Vec<LexError>,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Self {
            src,
            pos: 0,
            line: 1,
            column: 1,
            at_line_start: true,
            tokens: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn tokenize(mut self) -> (Vec<Token>, Vec<LexError>) {
        while self.pos < self.src.len() {
            let (kind, len) = self.next_token();
            self.emit(kind, len);
        }
        (self.tokens, self.errors)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn error(&mut self, kind: LexErrorKind) {
        self.errors.push(LexError {
            kind,
            line: self.line,
            column: self.column,
        });
    }

    fn emit(&mut self, kind: TokenKind, len: usize) {
        let text = &self.src[self.pos..self.pos + len];
        self.tokens.push(Token {
            kind,
            text: text.to_string(),
            line: self.line,
            column: self.column,
        });
        for c in text.chars() {
            if c == '\n' {
                self.line += 1;
                self.column = 1;
            } else {
                self.column += 1;
            }
        }
        self.pos += len;
        match kind {
            TokenKind::Newline => self.at_line_start = true,
            TokenKind::Whitespace | TokenKind::Comment => {}
            _ => self.at_line_start = false,
        }
    }

    fn next_token(&mut self) -> (TokenKind, usize) {
        let rest = self.rest();
        let c = rest.chars().next().expect("not at end");
        if let Some(n) = newline_len(rest) {
            return (TokenKind::Newline, n);
        }
        if let Some(n) = splice_len(rest) {
            return (TokenKind::Whitespace, n);
        }
        if matches!(c, ' ' | '\t' | '\x0b' | '\x0c' | '\r') {
            let n = rest
                .char_indices()
                .find(|&(i, c)| {
                    !matches!(c, ' ' | '\t' | '\x0b' | '\x0c' | '\r')
                        || newline_len(&rest[i..]).is_some()
                })
                .map_or(rest.len(), |(i, _)| i);
            return (TokenKind::Whitespace, n);
        }
        if rest.starts_with("/*") {
            return (TokenKind::Comment, self.block_comment_len(rest));
        }
        if rest.starts_with("//") {
            return (TokenKind::Comment, line_comment_len(rest));
        }
        if c == '#' && self.at_line_start {
            return (TokenKind::PpDirective, self.directive_len(rest));
        }
        if is_ident_start(c) {
            let n = rest
                .find(|c: char| !is_ident_continue(c))
                .unwrap_or(rest.len());
            let word = &rest[..n];
            if matches!(word, "L" | "u" | "U" | "u8") {
                match rest[n..].chars().next() {
                    Some('"') => return (TokenKind::String, n + self.literal_len(&rest[n..], '"')),
                    Some('\'') if word != "u8" => {
                        return (TokenKind::CharConst, n + self.literal_len(&rest[n..], '\''))
                    }
                    _ => {}
                }
            }
            let kind = if is_keyword(word) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            return (kind, n);
        }
        if c.is_ascii_digit() || (c == '.' && rest[1..].starts_with(|d: char| d.is_ascii_digit())) {
            return (TokenKind::Number, pp_number_len(rest));
        }
        if c == '"' {
            return (TokenKind::String, self.literal_len(rest, '"'));
        }
        if c == '\'' {
            return (TokenKind::CharConst, self.literal_len(rest, '\''));
        }
        if let Some(p) = PUNCTUATORS.iter().find(|p| rest.starts_with(**p)) {
            return (TokenKind::Punctuator, p.len());
        }
        (TokenKind::Punctuator, c.len_utf8())
    }

    fn block_comment_len(&mut self, rest: &str) -> usize {
        match rest[2..].find("*/") {
            Some(i) => i + 4,
            None => {
                self.error(LexErrorKind::UnterminatedComment);
                rest.len()
            }
        }
    }

    /// String or character literal. An unterminated literal stops before the
    /// end of the line and is reported.
    fn literal_len(&mut self, rest: &str, quote: char) -> usize {
        let mut i = 1;
        while i < rest.len() {
            let tail = &rest[i..];
            if let Some(n) = splice_len(tail) {
                i += n;
                continue;
            }
            if newline_len(tail).is_some() {
                break;
            }
            let c = tail.chars().next().expect("in bounds");
            if c == '\\' {
                i += 1;
                if let Some(next) = rest[i..].chars().next() {
                    if newline_len(&rest[i..]).is_none() {
                        i += next.len_utf8();
                    }
                }
                continue;
            }
            i += c.len_utf8();
            if c == quote {
                return i;
            }
        }
        self.error(LexErrorKind::UnterminatedLiteral);
        i.min(rest.len())
    }

    /// A directive runs to the end of its logical line. Block comments that
    /// start on the line are swallowed whole, even across lines.
    fn directive_len(&mut self, rest: &str) -> usize {
        let mut i = 1;
        while i < rest.len() {
            let tail = &rest[i..];
            if let Some(n) = splice_len(tail) {
                i += n;
            } else if newline_len(tail).is_some() {
                break;
            } else if tail.starts_with("/*") {
                i += self.block_comment_len(tail);
            } else if tail.starts_with("//") {
                i += line_comment_len(tail);
                break;
            } else if tail.starts_with('"') || tail.starts_with('\'') {
                i += quoted_len_lenient(tail);
            } else {
                i += tail.chars().next().expect("in bounds").len_utf8();
            }
        }
        i
    }
}

fn line_comment_len(rest: &str) -> usize {
    let mut i = 2;
    while i < rest.len() {
        let tail = &rest[i..];
        if let Some(n) = splice_len(tail) {
            i += n;
        } else if newline_len(tail).is_some() {
            break;
        } else {
            i += tail.chars().next().expect("in bounds").len_utf8();
        }
    }
    i
}

/// Quoted run inside a directive; stops at the closing quote or line end
/// without reporting (`#error don't` is legal).
fn quoted_len_lenient(rest: &str) -> usize {
    let quote = rest.chars().next().expect("starts with a quote");
    let mut i = 1;
    while i < rest.len() {
        let tail = &rest[i..];
        if let Some(n) = splice_len(tail) {
            i += n;
            continue;
        }
        if newline_len(tail).is_some() {
            return i;
        }
        let c = tail.chars().next().expect("in bounds");
        i += c.len_utf8();
        if c == quote {
            return i;
        }
        if c == '\\' {
            if let Some(next) = rest[i..]
                .chars()
                .next()
                .filter(|_| newline_len(&rest[i..]).is_none())
            {
                i += next.len_utf8();
            }
        }
    }
    rest.len()
}

fn pp_number_len(rest: &str) -> usize {
    let bytes = rest.as_bytes();
    let mut i = 1;
    while i < bytes.len() {
        let b = bytes[i];
        let sign = matches!(b, b'+' | b'-') && matches!(bytes[i - 1], b'e' | b'E' | b'p' | b'P');
        if sign || b.is_ascii_alphanumeric() || b == b'_' || b == b'.' {
            i += 1;
        } else {
            break;
        }
    }
    i
}

/// Directive text with splices removed and comments replaced by one space.
/// Also returns, for each byte of the logical text, its offset in the raw text.
pub fn directive_logical_text(raw: &str) -> (String, Vec<usize>) {
    let mut text = String::new();
    let mut offsets = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        let tail = &raw[i..];
        if let Some(n) = splice_len(tail) {
            i += n;
        } else if let Some(body) = tail.strip_prefix("/*") {
            text.push(' ');
            offsets.push(i);
            i += body.find("*/").map_or(tail.len(), |j| j + 4);
        } else if tail.starts_with("//") {
            break;
        } else {
            let c = tail.chars().next().expect("in bounds");
            for _ in 0..c.len_utf8() {
                offsets.push(i);
            }
            text.push(c);
            i += c.len_utf8();
        }
    }
    (text, offsets)
}

/// Decodes file bytes: UTF-8 when valid, otherwise one char per byte
/// (Latin-1), so any 8-bit input lexes.
pub fn decode_source(bytes: &[u8]) -> String {
    match std::str::from_utf8(bytes) {
        Ok(s) => s.to_string(),
        Err(_) => bytes.iter().map(|&b| b as char).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lex(src: &str) -> Vec<(TokenKind, String)> {
        Lexer::new(src)
            .tokenize()
            .0
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    fn kinds(src: &str) -> Vec<TokenKind> {
        lex(src).into_iter().map(|(k, _)| k).collect()
    }

    #[test]
    fn minimal_declaration() {
        use TokenKind::*;
        assert_eq!(
            lex("int x;"),
            vec![
                (Keyword, "int".into()),
                (Whitespace, " ".into()),
                (Identifier, "x".into()),
                (Punctuator, ";".into())
            ]
        );
    }

    #[test]
    fn directive_inside_comment_is_inert() {
        assert_eq!(kinds("/* #define _A */"), [TokenKind::Comment]);
        assert_eq!(kinds("// #define _A"), [TokenKind::Comment]);
    }

    #[test]
    fn string_contents_are_opaque() {
        assert_eq!(kinds("\"_not_an_id\""), [TokenKind::String]);
        assert_eq!(
            kinds("L\"wide\" u8\"x\" U'c' 'a'"),
            [
                TokenKind::String,
                TokenKind::Whitespace,
                TokenKind::String,
                TokenKind::Whitespace,
                TokenKind::CharConst,
                TokenKind::Whitespace,
                TokenKind::CharConst
            ]
        );
        assert_eq!(kinds(r#""a\"b""#), [TokenKind::String]);
    }

    #[test]
    fn directives_span_splices_and_comments() {
        let src = "#define X \\\n  1 /* a\n b */ + 2\nint y;";
        let tokens = Lexer::new(src).tokenize().0;
        assert_eq!(tokens[0].kind, TokenKind::PpDirective);
        assert_eq!(tokens[0].text, "#define X \\\n  1 /* a\n b */ + 2");
        assert_eq!(tokens[1].kind, TokenKind::Newline);
        assert_eq!(tokens[2].line, 4);
        let (logical, _) = directive_logical_text(&tokens[0].text);
        assert_eq!(logical, "#define X   1   + 2");
    }

    #[test]
    fn hash_mid_line_is_punctuation() {
        assert_eq!(kinds("a # b")[2], TokenKind::Punctuator);
        assert_eq!(kinds("  # include <x.h>\n")[1], TokenKind::PpDirective);
        assert_eq!(kinds("/* c */ #pragma once")[2], TokenKind::PpDirective);
    }

    #[test]
    fn numbers_and_punctuators() {
        use TokenKind::*;
        assert_eq!(lex("1.5e+10f"), vec![(Number, "1.5e+10f".into())]);
        assert_eq!(lex(".5"), vec![(Number, ".5".into())]);
        assert_eq!(lex("a<<=b")[1], (Punctuator, "<<=".into()));
        assert_eq!(lex("p->q")[1], (Punctuator, "->".into()));
        assert_eq!(lex("x...")[1], (Punctuator, "...".into()));
        assert_eq!(lex("@")[0], (Punctuator, "@".into()));
    }

    #[test]
    fn keywords_include_underscore_forms() {
        assert_eq!(
            kinds("_Bool _Static_assert _foo"),
            [
                TokenKind::Keyword,
                TokenKind::Whitespace,
                TokenKind::Keyword,
                TokenKind::Whitespace,
                TokenKind::Identifier
            ]
        );
    }

    #[test]
    fn errors_are_reported_and_lexing_continues() {
        let (tokens, errors) = Lexer::new("/* open").tokenize();
        assert_eq!(tokens.len(), 1);
        assert_eq!(errors[0].kind, LexErrorKind::UnterminatedComment);

        let (tokens, errors) = Lexer::new("x = \"open\nint y;").tokenize();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].kind, LexErrorKind::UnterminatedLiteral);
        assert_eq!(errors[0].line, 1);
        let y = tokens.iter().find(|t| t.text == "y").unwrap();
        assert_eq!((y.line, y.column, y.kind), (2, 5, TokenKind::Identifier));
    }

    #[test]
    fn positions_and_crlf() {
        let tokens = Lexer::new("int a;\r\n  b").tokenize().0;
        assert_eq!(tokens[4].kind, TokenKind::Newline);
        assert_eq!(tokens[4].text, "\r\n");
        let b = tokens.last().unwrap();
        assert_eq!((b.line, b.column), (2, 3));
    }

    #[test]
    fn latin1_fallback() {
        let bytes = b"/* caf\xe9 */ int x;";
        let text = decode_source(bytes);
        assert_eq!(text.chars().count(), bytes.len());
        let joined: String = Lexer::new(&text)
            .tokenize()
            .0
            .iter()
            .map(|t| t.text.as_str())
            .collect();
        assert_eq!(joined, text);
    }

    proptest! {
        #[test]
        fn lexing_is_lossless(src in "[a-z_0-9 #/*\"'\\\\\n\r\t.+<=>;(){}é]{0,120}") {
            let (tokens, _) = Lexer::new(&src).tokenize();
            let joined: String = tokens.iter().map(|t| t.text.as_str()).collect();
            prop_assert_eq!(joined, src);
            prop_assert!(tokens.iter().all(|t| !t.text.is_empty()));
        }
    }
}
