//! Token-level reference checkers. They do no preprocessing, parsing or
//! type analysis, and emit findings in the same format as external tools.

pub mod lexer;

use serde::Serialize;

use crate::findings::Finding;
use crate::guideline_db::GuidelineId;
pub use lexer::{
    decode_source, directive_logical_text, LexError, LexErrorKind, Lexer, Token, TokenKind,
};

pub const CHECKER_TOOL: &str = "builtin";

const R21_1: GuidelineId = GuidelineId::rule(21, 1);
const R21_2: GuidelineId = GuidelineId::rule(21, 2);
const D4_10: GuidelineId = GuidelineId::directive(4, 10);

/// Identifiers the implementation predefines; using them is not a declaration.
const PREDEFINED: &[&str] = &[
    "__FILE__",
    "__LINE__",
    "__DATE__",
    "__TIME__",
    "__STDC__",
    "__STDC_VERSION__",
    "__STDC_HOSTED__",
    "__func__",
    "__VA_ARGS__",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PpDirective {
    /// Directive name after `#`, empty for the null directive.
    pub name: String,
    /// Rest of the logical line, trimmed, comments blanked.
    pub args: String,
    pub line: u32,
    /// Index of the `PpDirective` token in the token stream.
    pub token: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TranslationUnitView {
    pub path: String,
    pub tokens: Vec<Token>,
    pub pp_directives: Vec<PpDirective>,
    pub errors: Vec<LexError>,
}

impl TranslationUnitView {
    pub fn from_source(path: impl Into<String>, source: &str) -> Self {
        let (tokens, errors) = Lexer::new(source).tokenize();
        let pp_directives = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.kind == TokenKind::PpDirective)
            .map(|(i, t)| {
                let (logical, _) = directive_logical_text(&t.text);
                let body = logical[1..].trim_start();
                let name_len = body
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(body.len());
                PpDirective {
                    name: body[..name_len].to_string(),
                    args: body[name_len..].trim().to_string(),
                    line: t.line,
                    token: i,
                }
            })
            .collect();
        Self {
            path: path.into(),
            tokens,
            pp_directives,
            errors,
        }
    }

    pub fn from_bytes(path: impl Into<String>, bytes: &[u8]) -> Self {
        Self::from_source(path, &decode_source(bytes))
    }

    fn directive_at(&self, token: usize) -> Option<&PpDirective> {
        self.pp_directives.iter().find(|d| d.token == token)
    }

    fn finding(&self, guideline: GuidelineId, line: u32, column: u32, message: String) -> Finding {
        Finding {
            tool: CHECKER_TOOL.to_string(),
            guideline,
            file: self.path.clone(),
            line,
            column: Some(column),
            message,
        }
    }
}

fn leading_identifier(s: &str) -> &str {
    let s = s.trim_start();
    if !s.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
        return "";
    }
    let n = s
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(s.len());
    &s[..n]
}

/// Line and column of byte `offset` within a token.
fn position_in(token: &Token, offset: usize) -> (u32, u32) {
    let (mut line, mut column) = (token.line, token.column);
    for c in token.text[..offset].chars() {
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    (line, column)
}

/// R21.1: `#define` of a name with a leading underscore.
/// R21.2: any other identifier token with a leading underscore, except the
/// predefined names. Text in comments, strings and other directives is ignored.
pub fn check_reserved_identifiers(tu: &TranslationUnitView) -> Vec<Finding> {
    let mut findings = Vec::new();
    for d in tu.pp_directives.iter().filter(|d| d.name == "define") {
        let name = leading_identifier(&d.args);
        if !name.starts_with('_') {
            continue;
        }
        let token = &tu.tokens[d.token];
        let (logical, offsets) = directive_logical_text(&token.text);
        let after_define = logical.find("define").expect("define directive") + "define".len();
        let at = after_define
            + logical[after_define..]
                .find(name)
                .expect("name follows define");
        let (line, column) = position_in(token, offsets[at]);
        findings.push(tu.finding(
            R21_1,
            line,
            column,
            format!("#define of reserved identifier `{name}`"),
        ));
    }
    for t in &tu.tokens {
        if t.kind == TokenKind::Identifier
            && t.text.starts_with('_')
            && !PREDEFINED.contains(&t.text.as_str())
        {
            findings.push(tu.finding(
                R21_2,
                t.line,
                t.column,
                format!("reserved identifier `{}`", t.text),
            ));
        }
    }
    findings.sort_by_key(|f| (f.line, f.column));
    findings
}

fn is_header(path: &str) -> bool {
    path.rsplit_once('.')
        .is_some_and(|(_, ext)| ext.eq_ignore_ascii_case("h"))
}

/// Name guarded by `#ifndef N`, `#if !defined(N)` or `#if !defined N`.
fn guard_name(d: &PpDirective) -> Option<&str> {
    let name = match d.name.as_str() {
        "ifndef" => d.args.as_str(),
        "if" => {
            let rest = d
                .args
                .strip_prefix('!')?
                .trim_start()
                .strip_prefix("defined")?
                .trim();
            match rest.strip_prefix('(') {
                Some(inner) => inner.strip_suffix(')')?.trim(),
                None => rest,
            }
        }
        _ => return None,
    };
    (!name.is_empty() && leading_identifier(name) == name).then_some(name)
}

fn has_include_guard(tu: &TranslationUnitView) -> bool {
    let significant: Vec<usize> = (0..tu.tokens.len())
        .filter(|&i| !tu.tokens[i].is_trivia())
        .collect();
    let Some(first) = significant.first().and_then(|&i| tu.directive_at(i)) else {
        return false;
    };
    if first.name == "pragma" && first.args.split_whitespace().eq(["once"]) {
        return true;
    }
    let Some(name) = guard_name(first) else {
        return false;
    };
    match significant.get(1).and_then(|&i| tu.directive_at(i)) {
        Some(d) if d.name == "define" && leading_identifier(&d.args) == name => {}
        _ => return false,
    }
    let mut depth = 1usize;
    for (pos, &i) in significant.iter().enumerate().skip(1) {
        let Some(d) = tu.directive_at(i) else {
            continue;
        };
        match d.name.as_str() {
            "if" | "ifdef" | "ifndef" => depth += 1,
            "else" | "elif" | "elifdef" | "elifndef" if depth == 1 => return false,
            "endif" => {
                depth -= 1;
                if depth == 0 {
                    return pos == significant.len() - 1;
                }
            }
            _ => {}
        }
    }
    false
}

/// D4.10: a header must be wrapped in an include guard or start with
/// `#pragma once`. Non-header paths produce nothing.
pub fn check_include_guards(tu: &TranslationUnitView) -> Vec<Finding> {
    if !is_header(&tu.path) || has_include_guard(tu) {
        return Vec::new();
    }
    vec![tu.finding(D4_10, 1, 1, "header has no include guard".to_string())]
}

/// Every built-in checker over one translation unit.
pub fn check_all(tu: &TranslationUnitView) -> Vec<Finding> {
    let mut findings = check_reserved_identifiers(tu);
    findings.extend(check_include_guards(tu));
    findings.sort_by_key(|f| (f.line, f.column, f.guideline));
    findings
}
