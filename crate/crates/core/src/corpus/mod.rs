//! Contest corpus ingestion.
//!
//! On-disk layout: `<root>/<year>/<Q|1A|1B|1C|2|3|F>/<problem_id>/<author_id>.cpp`,
//! joined with a manifest CSV `author_id,year,max_round`. A programmer is
//! labeled "good" iff their maximum reached round is Round 3 or the World
//! Finals.
//!
//! Decoding: UTF-8 first, Latin-1 as fallback; files whose decoded text still
//! contains C0 control characters other than tab/newline/carriage-return are
//! rejected and counted, as are empty files. Authors on disk but missing from
//! the manifest are skipped with a warning count rather than failing the run.

pub mod synth;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::features::StyleFeatures;
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("manifest not found: {0}")]
    MissingManifest(PathBuf),
    #[error("manifest row {line} malformed: {reason}")]
    ManifestRowMalformed { line: usize, reason: String },
    #[error("unknown round name: {0:?}")]
    UnknownRoundName(String),
    #[error("no feature vector for author {0:?}")]
    MissingFeatures(String),
    #[error("no files for year {year}, round {round}, problem {problem:?}")]
    EmptySelection {
        year: i32,
        round: Round,
        problem: String,
    },
    #[error("positive rate must be in (0, 1), got {0}")]
    InvalidRate(f64),
    #[error("skill-style coupling must be in [0, 1], got {0}")]
    InvalidCoupling(f64),
    #[error("style profile count must be at least 1")]
    NoProfiles,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Contest round. Ranks order rounds by contest progression; the three
/// Round-1 variants share a rank and are mutually unordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Round {
    Qualification,
    Round1A,
    Round1B,
    Round1C,
    Round2,
    Round3,
    WorldFinals,
}

impl Round {
    pub const ALL: [Round; 7] = [
        Round::Qualification,
        Round::Round1A,
        Round::Round1B,
        Round::Round1C,
        Round::Round2,
        Round::Round3,
        Round::WorldFinals,
    ];

    pub fn rank(self) -> u8 {
        match self {
            Round::Qualification => 0,
            Round::Round1A | Round::Round1B | Round::Round1C => 1,
            Round::Round2 => 2,
            Round::Round3 => 3,
            Round::WorldFinals => 4,
        }
    }

    /// Short token used in manifests and directory names.
    pub fn token(self) -> &'static str {
        match self {
            Round::Qualification => "Q",
            Round::Round1A => "1A",
            Round::Round1B => "1B",
            Round::Round1C => "1C",
            Round::Round2 => "2",
            Round::Round3 => "3",
            Round::WorldFinals => "F",
        }
    }

    pub fn parse_token(s: &str) -> Result<Round, CorpusError> {
        match s {
            "Q" => Ok(Round::Qualification),
            "1A" => Ok(Round::Round1A),
            "1B" => Ok(Round::Round1B),
            "1C" => Ok(Round::Round1C),
            "2" => Ok(Round::Round2),
            "3" => Ok(Round::Round3),
            "F" => Ok(Round::WorldFinals),
            other => Err(CorpusError::UnknownRoundName(other.to_string())),
        }
    }

    /// The good-programmer labeling rule: reached at least Round 3.
    pub fn is_good(self) -> bool {
        self.rank() >= Round::Round3.rank()
    }
}

impl PartialOrd for Round {
    fn partial_cmp(&self, other: &Round) -> Option<Ordering> {
        if self == other {
            return Some(Ordering::Equal);
        }
        match self.rank().cmp(&other.rank()) {
            // Distinct Round-1 variants are unordered peers.
            Ordering::Equal => None,
            ord => Some(ord),
        }
    }
}

impl fmt::Display for Round {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgrammerRecord {
    pub author_id: String,
    pub year: i32,
    pub max_round: Round,
}

#[derive(Debug, Clone)]
pub struct SourceFile {
    pub author_id: String,
    pub problem_id: String,
    pub round: Round,
    pub year: i32,
    pub text: String,
    /// Length in decoded characters, not bytes.
    pub char_length: usize,
}

#[derive(Debug, Clone, Default)]
pub struct LoadStats {
    pub loaded: usize,
    /// Files rejected for undecodable or empty content.
    pub skipped_encoding: usize,
    /// Files whose author has no manifest record.
    pub skipped_unknown_author: usize,
    /// Loaded file counts keyed by round token.
    pub per_round: BTreeMap<String, usize>,
}

impl LoadStats {
    pub fn skipped(&self) -> usize {
        self.skipped_encoding + self.skipped_unknown_author
    }
}

/// Source files joined with their programmer records.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub files: Vec<SourceFile>,
    records: HashMap<(String, i32), Round>,
    pub stats: LoadStats,
}

impl Corpus {
    /// Builds a corpus from in-memory parts (synthetic generation, tests).
    pub fn from_parts(mut files: Vec<SourceFile>, manifest: &[ProgrammerRecord]) -> Self {
        files.sort_by(|a, b| {
            (a.year, a.round.token(), &a.problem_id, &a.author_id).cmp(&(
                b.year,
                b.round.token(),
                &b.problem_id,
                &b.author_id,
            ))
        });
        let records = manifest
            .iter()
            .map(|r| ((r.author_id.clone(), r.year), r.max_round))
            .collect();
        let mut stats = LoadStats {
            loaded: files.len(),
            ..LoadStats::default()
        };
        for f in &files {
            *stats.per_round.entry(f.round.token().to_string()).or_insert(0) += 1;
        }
        Self {
            files,
            records,
            stats,
        }
    }

    pub fn max_round(&self, author_id: &str, year: i32) -> Option<Round> {
        self.records.get(&(author_id.to_string(), year)).copied()
    }

    /// Files for one `(year, round, problem)` selection, in author order.
    pub fn select(&self, year: i32, round: Round, problem_id: &str) -> Vec<&SourceFile> {
        self.files
            .iter()
            .filter(|f| f.year == year && f.round == round && f.problem_id == problem_id)
            .collect()
    }
}

/// Decodes raw bytes: UTF-8, then Latin-1; `None` when the decoded text
/// contains C0 controls other than tab/newline/carriage-return.
pub fn decode_source(bytes: &[u8]) -> Option<String> {
    let text = match std::str::from_utf8(bytes) {
        Ok(s) => s.to_string(),
        Err(_) => bytes.iter().map(|&b| b as char).collect(),
    };
    let clean = text
        .chars()
        .all(|c| c >= '\u{20}' || matches!(c, '\t' | '\n' | '\r'));
    clean.then_some(text)
}

/// Reads the manifest CSV (`author_id,year,max_round`).
pub fn read_manifest(path: &Path) -> Result<Vec<ProgrammerRecord>, CorpusError> {
    if !path.exists() {
        return Err(CorpusError::MissingManifest(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CorpusError::ManifestRowMalformed {
            line: 1,
            reason: e.to_string(),
        })?;
    let mut records = Vec::new();
    let mut seen: HashMap<(String, i32), usize> = HashMap::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let malformed = |reason: String| CorpusError::ManifestRowMalformed { line, reason };
        let row = row.map_err(|e| malformed(e.to_string()))?;
        if row.len() != 3 {
            return Err(malformed(format!("expected 3 fields, got {}", row.len())));
        }
        let author_id = row[0].to_string();
        if author_id.is_empty() {
            return Err(malformed("empty author_id".to_string()));
        }
        let year: i32 = row[1]
            .parse()
            .map_err(|_| malformed(format!("bad year {:?}", &row[1])))?;
        let max_round = Round::parse_token(&row[2])?;
        if seen.insert((author_id.clone(), year), line).is_some() {
            return Err(malformed(format!(
                "duplicate author {author_id:?} for year {year}"
            )));
        }
        records.push(ProgrammerRecord {
            author_id,
            year,
            max_round,
        });
    }
    Ok(records)
}

fn sorted_dir_entries(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    entries.sort();
    Ok(entries)
}

enum FileOutcome {
    Loaded(SourceFile),
    BadEncoding,
    UnknownAuthor,
}

/// Loads every decodable source file under `root` and joins it with the
/// manifest. Decoding runs in parallel; results are deterministic because
/// the matched paths are processed in sorted order.
pub fn load_corpus(root: &Path, manifest_path: &Path) -> Result<Corpus, CorpusError> {
    let manifest = read_manifest(manifest_path)?;
    let records: HashMap<(String, i32), Round> = manifest
        .iter()
        .map(|r| ((r.author_id.clone(), r.year), r.max_round))
        .collect();

    // Collect paths matching <root>/<year>/<round>/<problem>/<author>.cpp.
    let mut matched: Vec<(PathBuf, i32, Round, String, String)> = Vec::new();
    for year_dir in sorted_dir_entries(root)? {
        if !year_dir.is_dir() {
            continue;
        }
        let Some(year) = year_dir
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.parse::<i32>().ok())
        else {
            continue;
        };
        for round_dir in sorted_dir_entries(&year_dir)? {
            if !round_dir.is_dir() {
                continue;
            }
            let Some(round) = round_dir
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(|n| Round::parse_token(n).ok())
            else {
                continue;
            };
            for problem_dir in sorted_dir_entries(&round_dir)? {
                if !problem_dir.is_dir() {
                    continue;
                }
                let Some(problem) = problem_dir.file_name().and_then(|n| n.to_str()) else {
                    continue;
                };
                let problem = problem.to_string();
                for file in sorted_dir_entries(&problem_dir)? {
                    if file.extension().and_then(|e| e.to_str()) != Some("cpp") {
                        continue;
                    }
                    let Some(author) = file.file_stem().and_then(|n| n.to_str()) else {
                        continue;
                    };
                    matched.push((
                        file.clone(),
                        year,
                        round,
                        problem.clone(),
                        author.to_string(),
                    ));
                }
            }
        }
    }

    let outcomes: Vec<std::io::Result<FileOutcome>> = matched
        .par_iter()
        .map(|(path, year, round, problem, author)| {
            let bytes = fs::read(path)?;
            let Some(text) = decode_source(&bytes) else {
                return Ok(FileOutcome::BadEncoding);
            };
            let char_length = text.chars().count();
            if char_length == 0 {
                return Ok(FileOutcome::BadEncoding);
            }
            if !records.contains_key(&(author.clone(), *year)) {
                return Ok(FileOutcome::UnknownAuthor);
            }
            Ok(FileOutcome::Loaded(SourceFile {
                author_id: author.clone(),
                problem_id: problem.clone(),
                round: *round,
                year: *year,
                text,
                char_length,
            }))
        })
        .collect();

    let mut files = Vec::new();
    let mut stats = LoadStats::default();
    for outcome in outcomes {
        match outcome? {
            FileOutcome::Loaded(f) => {
                *stats.per_round.entry(f.round.token().to_string()).or_insert(0) += 1;
                stats.loaded += 1;
                files.push(f);
            }
            FileOutcome::BadEncoding => stats.skipped_encoding += 1,
            FileOutcome::UnknownAuthor => stats.skipped_unknown_author += 1,
        }
    }
    files.sort_by(|a, b| {
        (a.year, a.round.token(), &a.problem_id, &a.author_id).cmp(&(
            b.year,
            b.round.token(),
            &b.problem_id,
            &b.author_id,
        ))
    });
    Ok(Corpus {
        files,
        records,
        stats,
    })
}

#[derive(Debug, Clone)]
pub struct LabeledRow<S> {
    pub author_id: String,
    pub features: StyleFeatures<S>,
    pub label: bool,
}

/// Feature rows of one problem joined with good-programmer labels.
#[derive(Debug, Clone)]
pub struct LabeledDataset<S> {
    pub rows: Vec<LabeledRow<S>>,
    pub problem_id: String,
    pub round: Round,
    pub year: i32,
}

/// One row per author with a file for the selection; label = reached at
/// least Round 3.
pub fn label_dataset<S: Scalar>(
    corpus: &Corpus,
    year: i32,
    round: Round,
    problem_id: &str,
    features: &BTreeMap<String, StyleFeatures<S>>,
) -> Result<LabeledDataset<S>, CorpusError> {
    let files = corpus.select(year, round, problem_id);
    if files.is_empty() {
        return Err(CorpusError::EmptySelection {
            year,
            round,
            problem: problem_id.to_string(),
        });
    }
    let mut rows = Vec::with_capacity(files.len());
    for file in files {
        let feats = features
            .get(&file.author_id)
            .ok_or_else(|| CorpusError::MissingFeatures(file.author_id.clone()))?;
        let max_round = corpus
            .max_round(&file.author_id, year)
            .ok_or_else(|| CorpusError::MissingFeatures(file.author_id.clone()))?;
        rows.push(LabeledRow {
            author_id: file.author_id.clone(),
            features: *feats,
            label: max_round.is_good(),
        });
    }
    rows.sort_by(|a, b| a.author_id.cmp(&b.author_id));
    Ok(LabeledDataset {
        rows,
        problem_id: problem_id.to_string(),
        round,
        year,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_ordering_follows_ranks() {
        use Round::*;
        assert!(Qualification < Round1A);
        assert!(Round1A < Round2);
        assert!(Round2 < Round3);
        assert!(Round3 < WorldFinals);
        // Round-1 variants are unordered peers.
        assert_eq!(Round1A.partial_cmp(&Round1B), None);
        assert_eq!(Round1B.partial_cmp(&Round1C), None);
        assert_eq!(Round1A.partial_cmp(&Round1A), Some(Ordering::Equal));
    }

    #[test]
    fn labeling_rule_is_round3_or_finals() {
        assert!(Round::WorldFinals.is_good());
        assert!(Round::Round3.is_good());
        assert!(!Round::Round2.is_good());
        assert!(!Round::Qualification.is_good());
    }

    #[test]
    fn round_tokens_roundtrip() {
        for r in Round::ALL {
            assert_eq!(Round::parse_token(r.token()).unwrap(), r);
        }
        assert!(Round::parse_token("R5").is_err());
    }

    #[test]
    fn decode_rejects_control_bytes() {
        assert!(decode_source(b"int main() {}\n").is_some());
        // Latin-1 salvage: 0xE9 is e-acute.
        let latin = decode_source(b"// caf\xe9\n").unwrap();
        assert!(latin.contains('\u{e9}'));
        // NUL byte rejected regardless of encoding path.
        assert!(decode_source(b"int\x00main").is_none());
        assert!(decode_source(b"\x01\x02").is_none());
    }

    #[test]
    fn labels_from_mixed_rounds() {
        let manifest = vec![
            ProgrammerRecord {
                author_id: "a".into(),
                year: 2016,
                max_round: Round::Round2,
            },
            ProgrammerRecord {
                author_id: "b".into(),
                year: 2016,
                max_round: Round::Round3,
            },
            ProgrammerRecord {
                author_id: "c".into(),
                year: 2016,
                max_round: Round::Qualification,
            },
        ];
        let files = ["a", "b", "c"]
            .iter()
            .map(|id| SourceFile {
                author_id: (*id).to_string(),
                problem_id: "p".into(),
                round: Round::Qualification,
                year: 2016,
                text: "int x;".into(),
                char_length: 6,
            })
            .collect();
        let corpus = Corpus::from_parts(files, &manifest);
        let mut feats = BTreeMap::new();
        for id in ["a", "b", "c"] {
            feats.insert(
                id.to_string(),
                crate::features::extract_from_text::<f64>("int x;").unwrap(),
            );
        }
        let ds = label_dataset(&corpus, 2016, Round::Qualification, "p", &feats).unwrap();
        let labels: Vec<bool> = ds.rows.iter().map(|r| r.label).collect();
        assert_eq!(labels, vec![false, true, false]);
        let positives = labels.iter().filter(|&&l| l).count();
        assert_eq!(positives, 1);
    }

    #[test]
    fn missing_features_is_an_error() {
        let manifest = vec![ProgrammerRecord {
            author_id: "a".into(),
            year: 2016,
            max_round: Round::Round3,
        }];
        let files = vec![SourceFile {
            author_id: "a".into(),
            problem_id: "p".into(),
            round: Round::Qualification,
            year: 2016,
            text: "int x;".into(),
            char_length: 6,
        }];
        let corpus = Corpus::from_parts(files, &manifest);
        let feats: BTreeMap<String, StyleFeatures<f64>> = BTreeMap::new();
        assert!(matches!(
            label_dataset(&corpus, 2016, Round::Qualification, "p", &feats),
            Err(CorpusError::MissingFeatures(_))
        ));
    }
}
