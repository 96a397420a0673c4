//! The 30 layout/lexical style features of one C++ source file.
//!
//! Conventions that make every feature total and bounded:
//!
//! * `.../len` features divide by the file length in characters (not bytes).
//! * `new_line_before_open_brace` and `tabs_lead_lines` are proportions
//!   a/(a+b), defined as 0 when a+b = 0.
//! * An `else` immediately followed by `if` counts once as else-if and
//!   contributes to neither the `if` nor the `else` count.
//! * Keyword, ternary, brace and macro counts never see comment or literal
//!   contents (the lexer strips them first).
//! * An empty line is a line whose characters are all whitespace.
//! * Standard deviations are population deviations; parameter statistics are
//!   0 when no functions are detected.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::corpus::{Corpus, Round, SourceFile};
use crate::lex::{self, LexSummary, Token, TokenKind};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("source text is empty")]
    EmptySource,
    #[error("no files selected for extraction")]
    EmptySelection,
    #[error("feature CSV schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("feature CSV parse error at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Feature names in canonical (CSV column) order.
pub const FEATURE_NAMES: [&str; 30] = [
    "num_tabs_per_len",
    "num_spaces_per_len",
    "num_empty_lines_per_len",
    "whitespace_ratio",
    "new_line_before_open_brace",
    "tabs_lead_lines",
    "avg_line_length",
    "std_dev_line_length",
    "kw_if_per_len",
    "kw_else_per_len",
    "kw_elseif_per_len",
    "kw_for_per_len",
    "kw_while_per_len",
    "kw_do_per_len",
    "kw_break_per_len",
    "kw_continue_per_len",
    "kw_switch_per_len",
    "kw_case_per_len",
    "num_ternary_per_len",
    "num_tokens_per_len",
    "num_unique_tokens_per_len",
    "num_comments_per_len",
    "num_line_comments_per_len",
    "num_block_comments_per_len",
    "num_literals_per_len",
    "num_macros_per_len",
    "nesting_depth",
    "num_functions_per_len",
    "avg_params",
    "std_dev_num_params",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StyleFeatures<S> {
    pub num_tabs_per_len: S,
    pub num_spaces_per_len: S,
    pub num_empty_lines_per_len: S,
    pub whitespace_ratio: S,
    pub new_line_before_open_brace: S,
    pub tabs_lead_lines: S,
    pub avg_line_length: S,
    pub std_dev_line_length: S,
    pub kw_if_per_len: S,
    pub kw_else_per_len: S,
    pub kw_elseif_per_len: S,
    pub kw_for_per_len: S,
    pub kw_while_per_len: S,
    pub kw_do_per_len: S,
    pub kw_break_per_len: S,
    pub kw_continue_per_len: S,
    pub kw_switch_per_len: S,
    pub kw_case_per_len: S,
    pub num_ternary_per_len: S,
    pub num_tokens_per_len: S,
    pub num_unique_tokens_per_len: S,
    pub num_comments_per_len: S,
    pub num_line_comments_per_len: S,
    pub num_block_comments_per_len: S,
    pub num_literals_per_len: S,
    pub num_macros_per_len: S,
    /// Highest depth of control statements and loops (integer-valued).
    pub nesting_depth: S,
    pub num_functions_per_len: S,
    pub avg_params: S,
    pub std_dev_num_params: S,
}

impl<S: Scalar> StyleFeatures<S> {
    pub fn to_vec(&self) -> Vec<S> {
        vec![
            self.num_tabs_per_len,
            self.num_spaces_per_len,
            self.num_empty_lines_per_len,
            self.whitespace_ratio,
            self.new_line_before_open_brace,
            self.tabs_lead_lines,
            self.avg_line_length,
            self.std_dev_line_length,
            self.kw_if_per_len,
            self.kw_else_per_len,
            self.kw_elseif_per_len,
            self.kw_for_per_len,
            self.kw_while_per_len,
            self.kw_do_per_len,
            self.kw_break_per_len,
            self.kw_continue_per_len,
            self.kw_switch_per_len,
            self.kw_case_per_len,
            self.num_ternary_per_len,
            self.num_tokens_per_len,
            self.num_unique_tokens_per_len,
            self.num_comments_per_len,
            self.num_line_comments_per_len,
            self.num_block_comments_per_len,
            self.num_literals_per_len,
            self.num_macros_per_len,
            self.nesting_depth,
            self.num_functions_per_len,
            self.avg_params,
            self.std_dev_num_params,
        ]
    }

    pub fn from_slice(v: &[S]) -> Option<Self> {
        if v.len() != 30 {
            return None;
        }
        Some(Self {
            num_tabs_per_len: v[0],
            num_spaces_per_len: v[1],
            num_empty_lines_per_len: v[2],
            whitespace_ratio: v[3],
            new_line_before_open_brace: v[4],
            tabs_lead_lines: v[5],
            avg_line_length: v[6],
            std_dev_line_length: v[7],
            kw_if_per_len: v[8],
            kw_else_per_len: v[9],
            kw_elseif_per_len: v[10],
            kw_for_per_len: v[11],
            kw_while_per_len: v[12],
            kw_do_per_len: v[13],
            kw_break_per_len: v[14],
            kw_continue_per_len: v[15],
            kw_switch_per_len: v[16],
            kw_case_per_len: v[17],
            num_ternary_per_len: v[18],
            num_tokens_per_len: v[19],
            num_unique_tokens_per_len: v[20],
            num_comments_per_len: v[21],
            num_line_comments_per_len: v[22],
            num_block_comments_per_len: v[23],
            num_literals_per_len: v[24],
            num_macros_per_len: v[25],
            nesting_depth: v[26],
            num_functions_per_len: v[27],
            avg_params: v[28],
            std_dev_num_params: v[29],
        })
    }
}

/// Proportion a/(a+b), 0 when both are 0.
fn proportion<S: Scalar>(a: usize, b: usize) -> S {
    if a + b == 0 {
        S::zero()
    } else {
        S::from_n(a) / S::from_n(a + b)
    }
}

fn population_stats<S: Scalar>(values: &[usize]) -> (S, S) {
    if values.is_empty() {
        return (S::zero(), S::zero());
    }
    let n = S::from_n(values.len());
    let mean = values.iter().map(|&v| S::from_n(v)).sum::<S>() / n;
    let var = values
        .iter()
        .map(|&v| {
            let d = S::from_n(v) - mean;
            d * d
        })
        .sum::<S>()
        / n;
    (mean, var.sqrt())
}

#[derive(Debug, Default, Clone, Copy)]
struct KeywordCounts {
    kw_if: usize,
    kw_else: usize,
    kw_elseif: usize,
    kw_for: usize,
    kw_while: usize,
    kw_do: usize,
    kw_break: usize,
    kw_continue: usize,
    kw_switch: usize,
    kw_case: usize,
}

/// Disjoint keyword counts: `else` + `if` pairs count once as else-if.
fn count_keywords(tokens: &[Token]) -> KeywordCounts {
    let mut c = KeywordCounts::default();
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        if tok.kind == TokenKind::Keyword {
            match tok.spelling.as_str() {
                "else" => {
                    if tokens
                        .get(i + 1)
                        .is_some_and(|t| t.kind == TokenKind::Keyword && t.spelling == "if")
                    {
                        c.kw_elseif += 1;
                        i += 2;
                        continue;
                    }
                    c.kw_else += 1;
                }
                "if" => c.kw_if += 1,
                "for" => c.kw_for += 1,
                "while" => c.kw_while += 1,
                "do" => c.kw_do += 1,
                "break" => c.kw_break += 1,
                "continue" => c.kw_continue += 1,
                "switch" => c.kw_switch += 1,
                "case" => c.kw_case += 1,
                _ => {}
            }
        }
        i += 1;
    }
    c
}

#[derive(Debug, Clone, Copy)]
enum Scope {
    Brace { control: bool },
    Braceless,
}

/// Scans the token stream for control nesting.
///
/// A control brace or a braceless control body opens one level; a braceless
/// body closes at the next `;` at paren depth 0 or when its enclosing braced
/// statement closes. Returns the maximum depth and, per token, the number of
/// control scopes open just before it (used by function detection).
fn control_scan(summary: &LexSummary) -> (usize, Vec<usize>) {
    let tokens = &summary.tokens;
    let control_brace: BTreeMap<usize, bool> = summary
        .brace_events
        .iter()
        .map(|e| (e.token_index, e.is_control_block))
        .collect();

    // Pre-mark token positions where a braceless control body begins.
    let mut braceless_starts = vec![0usize; tokens.len() + 1];
    for (i, tok) in tokens.iter().enumerate() {
        if tok.kind != TokenKind::Keyword {
            continue;
        }
        match tok.spelling.as_str() {
            "if" | "for" | "while" | "switch" => {
                let mut j = i + 1;
                if tokens.get(j).is_some_and(|t| t.spelling == "(") {
                    match lex::match_paren_forward(tokens, j) {
                        Some(close) => j = close + 1,
                        None => continue,
                    }
                }
                if tokens.get(j).is_some_and(|t| t.spelling != "{") {
                    braceless_starts[j] += 1;
                }
            }
            "else" => {
                if tokens
                    .get(i + 1)
                    .is_some_and(|t| t.spelling != "{" && t.spelling != "if")
                {
                    braceless_starts[i + 1] += 1;
                }
            }
            "do" => {
                if tokens.get(i + 1).is_some_and(|t| t.spelling != "{") {
                    braceless_starts[i + 1] += 1;
                }
            }
            _ => {}
        }
    }

    let mut stack: Vec<Scope> = Vec::new();
    let mut control_open = 0usize;
    let mut max_depth = 0usize;
    let mut control_at = vec![0usize; tokens.len()];
    let mut paren_depth = 0usize;
    for (idx, tok) in tokens.iter().enumerate() {
        for _ in 0..braceless_starts[idx] {
            stack.push(Scope::Braceless);
            control_open += 1;
            max_depth = max_depth.max(control_open);
        }
        control_at[idx] = control_open;
        match tok.spelling.as_str() {
            "(" => paren_depth += 1,
            ")" => paren_depth = paren_depth.saturating_sub(1),
            "{" => {
                let control = control_brace.get(&idx).copied().unwrap_or(false);
                stack.push(Scope::Brace { control });
                if control {
                    control_open += 1;
                    max_depth = max_depth.max(control_open);
                }
            }
            "}" => {
                // Close the brace, along with any stranded braceless scopes.
                while let Some(top) = stack.pop() {
                    match top {
                        Scope::Braceless => control_open -= 1,
                        Scope::Brace { control } => {
                            if control {
                                control_open -= 1;
                            }
                            break;
                        }
                    }
                }
                // A braced statement also terminates enclosing braceless
                // bodies, unless an `else` continues the statement.
                let else_next = tokens.get(idx + 1).is_some_and(|t| t.spelling == "else");
                if !else_next {
                    while matches!(stack.last(), Some(Scope::Braceless)) {
                        stack.pop();
                        control_open -= 1;
                    }
                }
            }
            ";" if paren_depth == 0 => {
                while matches!(stack.last(), Some(Scope::Braceless)) {
                    stack.pop();
                    control_open -= 1;
                }
            }
            _ => {}
        }
    }
    (max_depth, control_at)
}

/// Function definitions by shape: identifier, balanced parens, optional
/// qualifier / trailing-return tokens, then `{` outside any control scope.
/// Returns the parameter count per detected function.
fn detect_functions(summary: &LexSummary, control_at: &[usize]) -> Vec<usize> {
    let tokens = &summary.tokens;
    let mut params = Vec::new();
    for i in 0..tokens.len() {
        if tokens[i].kind != TokenKind::Identifier {
            continue;
        }
        if !tokens.get(i + 1).is_some_and(|t| t.spelling == "(") {
            continue;
        }
        let Some(close) = lex::match_paren_forward(tokens, i + 1) else {
            continue;
        };
        let mut k = close + 1;
        loop {
            match tokens.get(k).map(|t| t.spelling.as_str()) {
                Some("const") | Some("override") | Some("final") => k += 1,
                Some("noexcept") => {
                    k += 1;
                    if tokens.get(k).is_some_and(|t| t.spelling == "(") {
                        match lex::match_paren_forward(tokens, k) {
                            Some(c) => k = c + 1,
                            None => break,
                        }
                    }
                }
                Some("->") => {
                    k += 1;
                    while tokens
                        .get(k)
                        .is_some_and(|t| !matches!(t.spelling.as_str(), "{" | ";" | "}" | ")"))
                    {
                        k += 1;
                    }
                }
                _ => break,
            }
        }
        let opens_body = tokens.get(k).is_some_and(|t| t.spelling == "{");
        if opens_body && control_at[k] == 0 {
            params.push(count_params(&tokens[i + 2..close]));
        }
    }
    params
}

/// Top-level comma-separated segments between the parameter parens;
/// `()` and `(void)` count as zero.
fn count_params(inner: &[Token]) -> usize {
    if inner.is_empty() {
        return 0;
    }
    if inner.len() == 1 && inner[0].spelling == "void" {
        return 0;
    }
    let mut depth = 0usize;
    let mut commas = 0usize;
    for tok in inner {
        match tok.spelling.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth = depth.saturating_sub(1),
            "," if depth == 0 => commas += 1,
            _ => {}
        }
    }
    commas + 1
}

/// Computes all 30 features for one source text.
pub fn extract_from_text<S: Scalar>(text: &str) -> Result<StyleFeatures<S>, FeatureError> {
    let summary = lex::lex(text).map_err(|_| FeatureError::EmptySource)?;
    let len = text.chars().count();
    let len_s = S::from_n(len);
    let per_len = |count: usize| S::from_n(count) / len_s;

    let tabs = text.chars().filter(|&c| c == '\t').count();
    let spaces = text.chars().filter(|&c| c == ' ').count();
    let newlines = text.chars().filter(|&c| c == '\n').count();
    let ws = tabs + spaces + newlines;
    let non_ws = len - ws;
    let whitespace_ratio = if non_ws == 0 {
        S::zero()
    } else {
        S::from_n(ws) / S::from_n(non_ws)
    };

    let empty_lines = summary
        .lines
        .iter()
        .filter(|l| l.chars().all(char::is_whitespace))
        .count();
    let tab_led = summary
        .lines
        .iter()
        .filter(|l| !l.chars().all(char::is_whitespace) && l.starts_with('\t'))
        .count();
    let other_led = summary
        .lines
        .iter()
        .filter(|l| !l.chars().all(char::is_whitespace) && !l.starts_with('\t'))
        .count();

    let line_lengths: Vec<usize> = summary.lines.iter().map(|l| l.chars().count()).collect();
    let (avg_line_length, std_dev_line_length) = population_stats::<S>(&line_lengths);

    let newline_braces = summary
        .brace_events
        .iter()
        .filter(|e| e.preceded_by_newline)
        .count();
    let inline_braces = summary.brace_events.len() - newline_braces;

    let kw = count_keywords(&summary.tokens);
    let ternary = summary
        .tokens
        .iter()
        .filter(|t| t.kind == TokenKind::OperatorPunct && t.spelling == "?")
        .count();
    let literals = summary
        .tokens
        .iter()
        .filter(|t| {
            matches!(
                t.kind,
                TokenKind::NumericLiteral | TokenKind::StringLiteral | TokenKind::CharLiteral
            )
        })
        .count();

    let (nesting_depth, control_at) = control_scan(&summary);
    let fn_params = detect_functions(&summary, &control_at);
    let (avg_params, std_dev_num_params) = population_stats::<S>(&fn_params);

    Ok(StyleFeatures {
        num_tabs_per_len: per_len(tabs),
        num_spaces_per_len: per_len(spaces),
        num_empty_lines_per_len: per_len(empty_lines),
        whitespace_ratio,
        new_line_before_open_brace: proportion(newline_braces, inline_braces),
        tabs_lead_lines: proportion(tab_led, other_led),
        avg_line_length,
        std_dev_line_length,
        kw_if_per_len: per_len(kw.kw_if),
        kw_else_per_len: per_len(kw.kw_else),
        kw_elseif_per_len: per_len(kw.kw_elseif),
        kw_for_per_len: per_len(kw.kw_for),
        kw_while_per_len: per_len(kw.kw_while),
        kw_do_per_len: per_len(kw.kw_do),
        kw_break_per_len: per_len(kw.kw_break),
        kw_continue_per_len: per_len(kw.kw_continue),
        kw_switch_per_len: per_len(kw.kw_switch),
        kw_case_per_len: per_len(kw.kw_case),
        num_ternary_per_len: per_len(ternary),
        num_tokens_per_len: per_len(summary.tokens.len()),
        num_unique_tokens_per_len: per_len(summary.unique_spellings()),
        num_comments_per_len: per_len(summary.line_comment_count + summary.block_comment_count),
        num_line_comments_per_len: per_len(summary.line_comment_count),
        num_block_comments_per_len: per_len(summary.block_comment_count),
        num_literals_per_len: per_len(literals),
        num_macros_per_len: per_len(summary.macro_directive_count),
        nesting_depth: S::from_n(nesting_depth),
        num_functions_per_len: per_len(fn_params.len()),
        avg_params,
        std_dev_num_params,
    })
}

/// Computes the feature vector of one corpus file.
pub fn extract_features<S: Scalar>(file: &SourceFile) -> Result<StyleFeatures<S>, FeatureError> {
    extract_from_text(&file.text)
}

#[derive(Debug)]
pub struct BatchFeatures<S> {
    pub features: BTreeMap<String, StyleFeatures<S>>,
    /// Files dropped because their text was empty.
    pub skipped_empty: usize,
}

/// Extracts features for every file of one `(year, round, problem)`
/// selection. Empty files are dropped with a warning count; the result is
/// independent of file order.
pub fn extract_batch<S: Scalar>(
    corpus: &Corpus,
    year: i32,
    round: Round,
    problem_id: &str,
) -> Result<BatchFeatures<S>, FeatureError> {
    use rayon::prelude::*;
    let files = corpus.select(year, round, problem_id);
    if files.is_empty() {
        return Err(FeatureError::EmptySelection);
    }
    let results: Vec<(String, Option<StyleFeatures<S>>)> = files
        .par_iter()
        .map(|f| (f.author_id.clone(), extract_features(f).ok()))
        .collect();
    let mut features = BTreeMap::new();
    let mut skipped = 0;
    for (author, feats) in results {
        match feats {
            Some(f) => {
                features.insert(author, f);
            }
            None => skipped += 1,
        }
    }
    Ok(BatchFeatures {
        features,
        skipped_empty: skipped,
    })
}

/// One row of the feature-matrix CSV.
#[derive(Debug, Clone)]
pub struct FeatureRow<S> {
    pub author_id: String,
    pub problem_id: String,
    pub label: bool,
    pub features: StyleFeatures<S>,
}

/// Parsed feature-matrix CSV.
#[derive(Debug)]
pub struct FeatureTable<S> {
    pub author_ids: Vec<String>,
    pub problem_ids: Vec<String>,
    pub labels: Vec<bool>,
    pub matrix: Matrix<S>,
}

fn csv_header() -> Vec<String> {
    let mut h = vec![
        "author_id".to_string(),
        "problem_id".to_string(),
        "label".to_string(),
    ];
    h.extend(FEATURE_NAMES.iter().map(|s| s.to_string()));
    h
}

/// Serializes rows to the feature-matrix CSV. Floats carry 9 significant
/// digits.
pub fn features_csv_to_string<S: Scalar>(rows: &[FeatureRow<S>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header()).expect("in-memory write");
    for row in rows {
        let mut rec = vec![
            row.author_id.clone(),
            row.problem_id.clone(),
            if row.label { "1" } else { "0" }.to_string(),
        ];
        rec.extend(row.features.to_vec().iter().map(|v| fmt_sig9(v.to_f64_c())));
        w.write_record(rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Scientific notation with 9 significant digits.
pub fn fmt_sig9(v: f64) -> String {
    format!("{v:.8e}")
}

/// Parses a feature-matrix CSV produced by [`features_csv_to_string`].
pub fn parse_features_csv<S: Scalar>(text: &str) -> Result<FeatureTable<S>, FeatureError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| FeatureError::SchemaMismatch(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if headers != csv_header() {
        return Err(FeatureError::SchemaMismatch(format!(
            "unexpected header: {}",
            headers.join(",")
        )));
    }
    let mut author_ids = Vec::new();
    let mut problem_ids = Vec::new();
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| FeatureError::Malformed {
            line,
            reason: e.to_string(),
        })?;
        if record.len() != 33 {
            return Err(FeatureError::Malformed {
                line,
                reason: format!("expected 33 fields, got {}", record.len()),
            });
        }
        author_ids.push(record[0].to_string());
        problem_ids.push(record[1].to_string());
        labels.push(match &record[2] {
            "1" | "true" => true,
            "0" | "false" => false,
            other => {
                return Err(FeatureError::Malformed {
                    line,
                    reason: format!("bad label {other:?}"),
                })
            }
        });
        let mut row = Vec::with_capacity(30);
        for field in record.iter().skip(3) {
            let v: f64 = field.parse().map_err(|_| FeatureError::Malformed {
                line,
                reason: format!("bad float {field:?}"),
            })?;
            row.push(S::from_f(v));
        }
        rows.push(row);
    }
    Ok(FeatureTable {
        author_ids,
        problem_ids,
        labels,
        matrix: Matrix::from_rows(&rows),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_identifier_features() {
        let f: StyleFeatures<f64> = extract_from_text("abc").unwrap();
        assert_eq!(f.whitespace_ratio, 0.0);
        assert_eq!(f.num_tabs_per_len, 0.0);
        assert!((f.num_tokens_per_len - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.nesting_depth, 0.0);
        assert_eq!(f.avg_line_length, 3.0);
    }

    #[test]
    fn else_if_counts_are_disjoint() {
        let f: StyleFeatures<f64> = extract_from_text("if(a)x;else if(b)y;").unwrap();
        assert!((f.kw_if_per_len - 1.0 / 19.0).abs() < 1e-15);
        assert!((f.kw_elseif_per_len - 1.0 / 19.0).abs() < 1e-15);
        assert_eq!(f.kw_else_per_len, 0.0);
    }

    #[test]
    fn golden_snippet_hand_counts() {
        // 6 lines, 51 chars: hand-counted tab/space/line/keyword/token values.
        let text = "int main() {\n\tif (x) {\n\t\treturn 1;\n\t}\n\treturn 0;\n}\n";
        assert_eq!(text.chars().count(), 51);
        let f: StyleFeatures<f64> = extract_from_text(text).unwrap();
        assert!((f.num_tabs_per_len - 5.0 / 51.0).abs() < 1e-12);
        assert!((f.num_spaces_per_len - 6.0 / 51.0).abs() < 1e-12);
        assert_eq!(f.num_empty_lines_per_len, 0.0);
        assert!((f.whitespace_ratio - 0.5).abs() < 1e-12);
        assert_eq!(f.new_line_before_open_brace, 0.0);
        assert!((f.tabs_lead_lines - 4.0 / 6.0).abs() < 1e-12);
        assert!((f.avg_line_length - 7.5).abs() < 1e-12);
        let var: f64 = [12.0f64, 9.0, 11.0, 2.0, 10.0, 1.0]
            .iter()
            .map(|l| (l - 7.5) * (l - 7.5))
            .sum::<f64>()
            / 6.0;
        assert!((f.std_dev_line_length - var.sqrt()).abs() < 1e-12);
        assert!((f.kw_if_per_len - 1.0 / 51.0).abs() < 1e-12);
        assert!((f.num_tokens_per_len - 18.0 / 51.0).abs() < 1e-12);
        assert!((f.num_unique_tokens_per_len - 12.0 / 51.0).abs() < 1e-12);
        assert!((f.num_literals_per_len - 2.0 / 51.0).abs() < 1e-12);
        assert_eq!(f.nesting_depth, 1.0);
        assert!((f.num_functions_per_len - 1.0 / 51.0).abs() < 1e-12);
        assert_eq!(f.avg_params, 0.0);
        assert_eq!(f.std_dev_num_params, 0.0);
    }

    #[test]
    fn braceless_bodies_count_toward_nesting() {
        let f: StyleFeatures<f64> = extract_from_text("void g() {\nif (a)\nif (b)\nx = 1;\n}\n").unwrap();
        assert_eq!(f.nesting_depth, 2.0);
    }

    #[test]
    fn function_braces_do_not_nest() {
        let f: StyleFeatures<f64> =
            extract_from_text("int f() { return 0; }\nint g() { return 1; }\n").unwrap();
        assert_eq!(f.nesting_depth, 0.0);
        assert!((f.num_functions_per_len * 44.0 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn parameter_statistics() {
        let text = "int f(int a, int b) { return a; }\nint g(void) { return 0; }\n";
        let f: StyleFeatures<f64> = extract_from_text(text).unwrap();
        let len = text.chars().count() as f64;
        assert!((f.num_functions_per_len - 2.0 / len).abs() < 1e-12);
        assert!((f.avg_params - 1.0).abs() < 1e-12);
        assert!((f.std_dev_num_params - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trailing_newline_changes_only_denominators() {
        let base = "if (x) { y = 1; } // done";
        let a = lex::lex(base).unwrap();
        let b = lex::lex(&format!("{base}\n")).unwrap();
        assert_eq!(a.tokens.len(), b.tokens.len());
        assert_eq!(a.line_comment_count, b.line_comment_count);
        assert_eq!(a.brace_events.len(), b.brace_events.len());
    }

    #[test]
    fn extraction_is_idempotent() {
        let text = "int main() {\n\tfor (int i = 0; i < 3; i++) x += i;\n\treturn 0;\n}\n";
        let a: StyleFeatures<f64> = extract_from_text(text).unwrap();
        let b: StyleFeatures<f64> = extract_from_text(text).unwrap();
        assert_eq!(a.to_vec(), b.to_vec());
    }

    #[test]
    fn csv_roundtrip_preserves_values() {
        let f: StyleFeatures<f64> = extract_from_text("int main() { return 0; }\n").unwrap();
        let rows = vec![FeatureRow {
            author_id: "alice".into(),
            problem_id: "p1".into(),
            label: true,
            features: f,
        }];
        let csv = features_csv_to_string(&rows);
        let table: FeatureTable<f64> = parse_features_csv(&csv).unwrap();
        assert_eq!(table.author_ids, vec!["alice"]);
        assert_eq!(table.labels, vec![true]);
        for (got, want) in table.matrix.row(0).iter().zip(f.to_vec()) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn schema_mismatch_is_detected() {
        let err = parse_features_csv::<f64>("a,b,c\n1,2,3\n").unwrap_err();
        assert!(matches!(err, FeatureError::SchemaMismatch(_)));
    }
}
