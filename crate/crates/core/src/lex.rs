//! Heuristic C++ lexer for style measurement.
//!
//! Comments and string/char literals are recognized first so their contents
//! never leak into keyword, brace, ternary or macro counts. The tokenizer is
//! total: any input produces a summary, with an `unbalanced_braces` flag when
//! the brace structure does not close.

use std::collections::HashSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexError {
    #[error("source text is empty")]
    EmptySource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Keyword,
    NumericLiteral,
    StringLiteral,
    CharLiteral,
    OperatorPunct,
    PreprocessorDirective,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub spelling: String,
    /// 1-based line of the token's first character.
    pub line: usize,
    /// 1-based column (in characters) of the token's first character.
    pub column: usize,
}

/// One open brace outside comments and literals.
#[derive(Debug, Clone, Copy)]
pub struct BraceEvent {
    /// Index of the `{` token in `LexSummary::tokens`.
    pub token_index: usize,
    /// True iff only whitespace appears between the start of the brace's
    /// line and the brace itself (Allman placement).
    pub preceded_by_newline: bool,
    /// True iff the brace opens an `if`/`else`/`for`/`while`/`do`/`switch`
    /// body (nearest preceding token, skipping one balanced paren group).
    pub is_control_block: bool,
}

#[derive(Debug, Clone)]
pub struct LexSummary {
    pub tokens: Vec<Token>,
    pub line_comment_count: usize,
    pub block_comment_count: usize,
    /// Preprocessor directives; backslash-continued lines count once.
    pub macro_directive_count: usize,
    pub lines: Vec<String>,
    pub brace_events: Vec<BraceEvent>,
    pub unbalanced_braces: bool,
}

/// C++ keyword inventory (through C++20, plus the alternative operator
/// spellings). Used only to separate `Keyword` from `Identifier` tokens.
pub const KEYWORDS: &[&str] = &[
    "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor", "bool", "break",
    "case", "catch", "char", "char16_t", "char32_t", "char8_t", "class", "co_await", "co_return",
    "co_yield", "compl", "concept", "const", "const_cast", "consteval", "constexpr", "constinit",
    "continue", "decltype", "default", "delete", "do", "double", "dynamic_cast", "else", "enum",
    "explicit", "export", "extern", "false", "float", "for", "friend", "goto", "if", "inline",
    "int", "long", "mutable", "namespace", "new", "noexcept", "not", "not_eq", "nullptr",
    "operator", "or", "or_eq", "private", "protected", "public", "register", "reinterpret_cast",
    "requires", "return", "short", "signed", "sizeof", "static", "static_assert", "static_cast",
    "struct", "switch", "template", "this", "thread_local", "throw", "true", "try", "typedef",
    "typeid", "typename", "union", "unsigned", "using", "virtual", "void", "volatile", "wchar_t",
    "while", "xor", "xor_eq",
];

const CONTROL_KEYWORDS: &[&str] = &["if", "else", "for", "while", "do", "switch"];

const OPS3: &[&str] = &["<<=", ">>=", "<=>", "...", "->*"];
const OPS2: &[&str] = &[
    "::", "++", "--", "->", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", ".*",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.binary_search(&s).is_ok()
}

pub fn is_control_keyword(s: &str) -> bool {
    CONTROL_KEYWORDS.contains(&s)
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    /// Whether the current line has any non-whitespace character so far.
    line_has_content: bool,
    tokens: Vec<Token>,
    line_comments: usize,
    block_comments: usize,
    directives: usize,
    braces: Vec<(usize, bool)>, // (token index, preceded_by_newline)
}

impl Lexer {
    fn new(text: &str) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            line_has_content: false,
            tokens: Vec::new(),
            line_comments: 0,
            block_comments: 0,
            directives: 0,
            braces: Vec::new(),
        }
    }

    fn eof(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
            self.line_has_content = false;
        } else {
            self.col += 1;
            if !c.is_whitespace() {
                self.line_has_content = true;
            }
        }
        c
    }

    fn push(&mut self, kind: TokenKind, spelling: String, line: usize, column: usize) {
        self.tokens.push(Token {
            kind,
            spelling,
            line,
            column,
        });
    }

    fn run(&mut self) {
        while !self.eof() {
            let c = self.peek(0).unwrap();
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' && !self.line_has_content {
                self.lex_directive();
                continue;
            }
            match c {
                '/' if self.peek(1) == Some('/') => self.lex_line_comment(),
                '/' if self.peek(1) == Some('*') => self.lex_block_comment(),
                '"' => self.lex_quoted('"', TokenKind::StringLiteral, String::new()),
                '\'' => self.lex_quoted('\'', TokenKind::CharLiteral, String::new()),
                _ if c.is_ascii_digit() => self.lex_number(),
                '.' if self.peek(1).is_some_and(|d| d.is_ascii_digit()) => self.lex_number(),
                _ if c == '_' || c.is_alphabetic() => self.lex_word(),
                _ => self.lex_operator(),
            }
        }
    }

    fn lex_line_comment(&mut self) {
        self.line_comments += 1;
        while let Some(c) = self.peek(0) {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }

    /// Consumes a `/* ... */` unit; unterminated comments run to EOF.
    fn lex_block_comment(&mut self) {
        self.block_comments += 1;
        self.bump();
        self.bump();
        while !self.eof() {
            if self.peek(0) == Some('*') && self.peek(1) == Some('/') {
                self.bump();
                self.bump();
                return;
            }
            self.bump();
        }
    }

    /// One logical directive line: `#` first on its line, backslash-newline
    /// continues it, `//` ends it (comment lexed separately), `/* */` inside
    /// it is consumed as a comment.
    fn lex_directive(&mut self) {
        let (line, col) = (self.line, self.col);
        self.directives += 1;
        let mut text = String::new();
        while let Some(c) = self.peek(0) {
            if c == '\n' {
                break;
            }
            if c == '\\' && self.peek(1) == Some('\n') {
                self.bump();
                self.bump();
                text.push(' ');
                continue;
            }
            if c == '/' && self.peek(1) == Some('/') {
                break;
            }
            if c == '/' && self.peek(1) == Some('*') {
                self.lex_block_comment();
                continue;
            }
            text.push(self.bump());
        }
        let spelling = text.trim_end().to_string();
        self.push(TokenKind::PreprocessorDirective, spelling, line, col);
    }

    /// Quoted literal starting at the current quote char; `prefix` carries an
    /// encoding prefix such as `L` or `u8`. Unterminated literals end at
    /// newline or EOF.
    fn lex_quoted(&mut self, quote: char, kind: TokenKind, prefix: String) {
        let col = self.col - prefix.chars().count();
        let line = self.line;
        let mut s = prefix;
        s.push(self.bump());
        while let Some(c) = self.peek(0) {
            if c == '\\' {
                s.push(self.bump());
                if !self.eof() {
                    s.push(self.bump());
                }
                continue;
            }
            if c == '\n' {
                break;
            }
            s.push(self.bump());
            if c == quote {
                break;
            }
        }
        self.push(kind, s, line, col);
    }

    /// Raw string literal `R"delim( ... )delim"`, `prefix` holds everything
    /// up to and including the `R`.
    fn lex_raw_string(&mut self, prefix: String) {
        let col = self.col - prefix.chars().count();
        let line = self.line;
        let mut s = prefix;
        s.push(self.bump()); // opening quote
        let mut delim = String::new();
        while let Some(c) = self.peek(0) {
            if c == '(' {
                break;
            }
            delim.push(self.bump());
        }
        if !self.eof() {
            s.push_str(&delim);
            s.push(self.bump()); // '('
        }
        let closer: Vec<char> = format!("){delim}\"").chars().collect();
        'scan: while !self.eof() {
            if self.peek(0) == Some(')') {
                for (k, &cc) in closer.iter().enumerate() {
                    if self.peek(k) != Some(cc) {
                        s.push(self.bump());
                        continue 'scan;
                    }
                }
                for _ in 0..closer.len() {
                    s.push(self.bump());
                }
                break;
            }
            s.push(self.bump());
        }
        self.push(TokenKind::StringLiteral, s, line, col);
    }

    /// Preprocessing-number flavored scan: handles hex/binary prefixes,
    /// exponents with signs, digit separators and suffixes as one token.
    fn lex_number(&mut self) {
        let (line, col) = (self.line, self.col);
        let mut s = String::new();
        s.push(self.bump());
        while let Some(c) = self.peek(0) {
            if matches!(c, 'e' | 'E' | 'p' | 'P') && matches!(self.peek(1), Some('+') | Some('-'))
            {
                s.push(self.bump());
                s.push(self.bump());
                continue;
            }
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                s.push(self.bump());
                continue;
            }
            if c == '\'' && self.peek(1).is_some_and(|d| d.is_ascii_alphanumeric()) {
                s.push(self.bump());
                s.push(self.bump());
                continue;
            }
            break;
        }
        self.push(TokenKind::NumericLiteral, s, line, col);
    }

    fn lex_word(&mut self) {
        let (line, col) = (self.line, self.col);
        let mut s = String::new();
        while let Some(c) = self.peek(0) {
            if c == '_' || c.is_alphanumeric() {
                s.push(self.bump());
            } else {
                break;
            }
        }
        // Encoding prefixes glue onto a following quote or raw string.
        if matches!(s.as_str(), "R" | "LR" | "uR" | "UR" | "u8R") && self.peek(0) == Some('"') {
            self.lex_raw_string(s);
            return;
        }
        if matches!(s.as_str(), "L" | "u" | "U" | "u8") {
            match self.peek(0) {
                Some('"') => {
                    self.lex_quoted('"', TokenKind::StringLiteral, s);
                    return;
                }
                Some('\'') => {
                    self.lex_quoted('\'', TokenKind::CharLiteral, s);
                    return;
                }
                _ => {}
            }
        }
        let kind = if is_keyword(&s) {
            TokenKind::Keyword
        } else {
            TokenKind::Identifier
        };
        self.push(kind, s, line, col);
    }

    fn lex_operator(&mut self) {
        let (line, col) = (self.line, self.col);
        let window3: String = (0..3).filter_map(|k| self.peek(k)).collect();
        for op in OPS3 {
            if window3 == *op {
                for _ in 0..3 {
                    self.bump();
                }
                self.push(TokenKind::OperatorPunct, (*op).to_string(), line, col);
                return;
            }
        }
        let window2: String = (0..2).filter_map(|k| self.peek(k)).collect();
        for op in OPS2 {
            if window2 == *op {
                for _ in 0..2 {
                    self.bump();
                }
                self.push(TokenKind::OperatorPunct, (*op).to_string(), line, col);
                return;
            }
        }
        let preceded_by_newline = !self.line_has_content;
        let c = self.bump();
        self.push(TokenKind::OperatorPunct, c.to_string(), line, col);
        if c == '{' {
            self.braces.push((self.tokens.len() - 1, preceded_by_newline));
        }
    }
}

/// Index of the token matching the `(` at `open`, if any.
pub(crate) fn match_paren_forward(tokens: &[Token], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (i, tok) in tokens.iter().enumerate().skip(open) {
        match tok.spelling.as_str() {
            "(" => depth += 1,
            ")" => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Index of the token matching the `)` at `close`, walking backwards.
fn match_paren_backward(tokens: &[Token], close: usize) -> Option<usize> {
    let mut depth = 0usize;
    for i in (0..=close).rev() {
        match tokens[i].spelling.as_str() {
            ")" => depth += 1,
            "(" => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn classify_braces(tokens: &[Token], braces: &[(usize, bool)]) -> Vec<BraceEvent> {
    braces
        .iter()
        .map(|&(token_index, preceded_by_newline)| {
            let mut prev = token_index.checked_sub(1);
            if let Some(p) = prev {
                if tokens[p].spelling == ")" {
                    prev = match_paren_backward(tokens, p).and_then(|open| open.checked_sub(1));
                }
            }
            let is_control_block = prev.is_some_and(|p| {
                tokens[p].kind == TokenKind::Keyword && is_control_keyword(&tokens[p].spelling)
            });
            BraceEvent {
                token_index,
                preceded_by_newline,
                is_control_block,
            }
        })
        .collect()
}

/// Lexes C++ source text into tokens, comment/directive counts, raw lines
/// and brace placement events.
pub fn lex(text: &str) -> Result<LexSummary, LexError> {
    if text.is_empty() {
        return Err(LexError::EmptySource);
    }
    let mut lexer = Lexer::new(text);
    lexer.run();
    let brace_events = classify_braces(&lexer.tokens, &lexer.braces);
    // Balance check over the token stream; a close without an open or any
    // leftover opens mark the summary as unbalanced.
    let mut open = 0i64;
    let mut unbalanced = false;
    for tok in &lexer.tokens {
        match tok.spelling.as_str() {
            "{" => open += 1,
            "}" => {
                open -= 1;
                if open < 0 {
                    unbalanced = true;
                    open = 0;
                }
            }
            _ => {}
        }
    }
    if open != 0 {
        unbalanced = true;
    }
    Ok(LexSummary {
        tokens: lexer.tokens,
        line_comment_count: lexer.line_comments,
        block_comment_count: lexer.block_comments,
        macro_directive_count: lexer.directives,
        lines: text.lines().map(str::to_string).collect(),
        brace_events,
        unbalanced_braces: unbalanced,
    })
}

impl LexSummary {
    /// Distinct token spellings.
    pub fn unique_spellings(&self) -> usize {
        self.tokens
            .iter()
            .map(|t| t.spelling.as_str())
            .collect::<HashSet<_>>()
            .len()
    }
}
