//! Seeded synthetic corpus generation.
//!
//! Renders plausible contest-style C++ files in a configurable number of
//! distinct style profiles (tab vs. space indentation, newline vs. same-line
//! braces, comment density) and assigns each author a good/bad label. The
//! `skill_style_coupling` knob interpolates between style independent of
//! skill (0) and perfectly informative style (1):
//!
//! * good authors draw profile 0 with probability `coupling`, otherwise
//!   uniformly over all profiles;
//! * bad authors avoid profile 0 with probability `coupling`, otherwise draw
//!   uniformly over all profiles.
//!
//! At coupling 1 the corpus is exactly label-separable by style; at 0 the
//! two are independent. Everything is a pure function of the seed.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Corpus, CorpusError, ProgrammerRecord, Round, SourceFile};
use crate::random::{derive_rng, unit, ChaCha8Rng};

/// Round-3 over qualification participation, the observed contest skew.
pub const DEFAULT_POSITIVE_RATE: f64 = 296.0 / 11401.0;

pub const SYNTH_YEAR: i32 = 2016;
pub const SYNTH_ROUND: Round = Round::Qualification;
pub const SYNTH_PROBLEM: &str = "0001";

const STREAM_LABELS: u64 = 0;
const STREAM_PROFILES: u64 = 1;
const STREAM_ROUNDS: u64 = 2;
const STREAM_CONTENT_BASE: u64 = 16;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_authors: usize,
    pub positive_rate: f64,
    pub style_profiles: usize,
    pub skill_style_coupling: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub author_id: String,
    pub label: bool,
    pub profile: usize,
}

#[derive(Debug)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    pub manifest: Vec<ProgrammerRecord>,
    pub ground_truth: Vec<GroundTruth>,
}

/// Positive count by the largest-remainder rule; ties go to the positive
/// class.
fn positive_count(n: usize, rate: f64) -> usize {
    let ideal_pos = n as f64 * rate;
    let ideal_neg = n as f64 * (1.0 - rate);
    let floor_pos = ideal_pos.floor() as usize;
    let floor_neg = ideal_neg.floor() as usize;
    let mut pos = floor_pos;
    if floor_pos + floor_neg < n && (ideal_pos - floor_pos as f64) >= (ideal_neg - floor_neg as f64)
    {
        pos += 1;
    }
    pos
}

struct StyleProfile {
    indent_unit: &'static str,
    brace_newline: bool,
    dense_comments: bool,
}

fn profile_style(p: usize) -> StyleProfile {
    StyleProfile {
        indent_unit: if p % 2 == 0 { "\t" } else { "  " },
        brace_newline: (p / 2) % 2 == 0,
        dense_comments: (p / 4) % 2 == 1,
    }
}

pub fn gen_synthetic_corpus(cfg: &SynthConfig) -> Result<SyntheticCorpus, CorpusError> {
    if !(cfg.positive_rate > 0.0 && cfg.positive_rate < 1.0) {
        return Err(CorpusError::InvalidRate(cfg.positive_rate));
    }
    if !(0.0..=1.0).contains(&cfg.skill_style_coupling) {
        return Err(CorpusError::InvalidCoupling(cfg.skill_style_coupling));
    }
    if cfg.style_profiles == 0 {
        return Err(CorpusError::NoProfiles);
    }
    let n = cfg.n_authors;
    let k = cfg.style_profiles;
    let width = n.to_string().len().max(4);

    let n_pos = positive_count(n, cfg.positive_rate);
    let mut labels = vec![false; n];
    for l in labels.iter_mut().take(n_pos) {
        *l = true;
    }
    labels.shuffle(&mut derive_rng(cfg.seed, STREAM_LABELS));

    let mut profile_rng = derive_rng(cfg.seed, STREAM_PROFILES);
    let profiles: Vec<usize> = labels
        .iter()
        .map(|&good| {
            let coupled = unit::<f64>(&mut profile_rng) < cfg.skill_style_coupling;
            if k == 1 {
                0
            } else if good && coupled {
                0
            } else if !good && coupled {
                1 + profile_rng.gen_range(0..k - 1)
            } else {
                profile_rng.gen_range(0..k)
            }
        })
        .collect();

    let mut round_rng = derive_rng(cfg.seed, STREAM_ROUNDS);
    let bad_rounds = [
        Round::Qualification,
        Round::Round1A,
        Round::Round1B,
        Round::Round1C,
        Round::Round2,
    ];
    let mut manifest = Vec::with_capacity(n);
    let mut ground_truth = Vec::with_capacity(n);
    let mut files = Vec::with_capacity(n);
    for i in 0..n {
        let author_id = format!("a{i:0width$}");
        let max_round = if labels[i] {
            if unit::<f64>(&mut round_rng) < 0.9 {
                Round::Round3
            } else {
                Round::WorldFinals
            }
        } else {
            bad_rounds[round_rng.gen_range(0..bad_rounds.len())]
        };
        manifest.push(ProgrammerRecord {
            author_id: author_id.clone(),
            year: SYNTH_YEAR,
            max_round,
        });
        ground_truth.push(GroundTruth {
            author_id: author_id.clone(),
            label: labels[i],
            profile: profiles[i],
        });
        let mut content_rng = derive_rng(cfg.seed, STREAM_CONTENT_BASE + i as u64);
        let text = render_solution(profiles[i], &mut content_rng);
        let char_length = text.chars().count();
        files.push(SourceFile {
            author_id,
            problem_id: SYNTH_PROBLEM.to_string(),
            round: SYNTH_ROUND,
            year: SYNTH_YEAR,
            text,
            char_length,
        });
    }
    Ok(SyntheticCorpus {
        corpus: Corpus::from_parts(files, &manifest),
        manifest,
        ground_truth,
    })
}

/// Manifest CSV bytes (`author_id,year,max_round`).
pub fn manifest_csv_bytes(manifest: &[ProgrammerRecord]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["author_id", "year", "max_round"])
        .expect("in-memory write");
    for rec in manifest {
        w.write_record([
            rec.author_id.as_str(),
            &rec.year.to_string(),
            rec.max_round.token(),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Ground-truth CSV bytes (`author_id,label,profile`).
pub fn ground_truth_csv_bytes(truth: &[GroundTruth]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["author_id", "label", "profile"])
        .expect("in-memory write");
    for gt in truth {
        w.write_record([
            gt.author_id.as_str(),
            if gt.label { "1" } else { "0" },
            &gt.profile.to_string(),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Relative path of one corpus file under a corpus root.
pub fn corpus_relative_path(file: &SourceFile) -> std::path::PathBuf {
    std::path::PathBuf::from(file.year.to_string())
        .join(file.round.token())
        .join(&file.problem_id)
        .join(format!("{}.cpp", file.author_id))
}

/// Writes the corpus tree plus `manifest.csv` and `ground_truth.csv` under
/// `dir`; `dir` becomes a valid `load_corpus` root.
pub fn write_corpus_tree(dir: &Path, synth: &SyntheticCorpus) -> Result<(), CorpusError> {
    for file in &synth.corpus.files {
        let path = dir.join(corpus_relative_path(file));
        fs::create_dir_all(path.parent().expect("corpus paths have parents"))?;
        fs::write(path, file.text.as_bytes())?;
    }
    fs::write(dir.join("manifest.csv"), manifest_csv_bytes(&synth.manifest))?;
    fs::write(
        dir.join("ground_truth.csv"),
        ground_truth_csv_bytes(&synth.ground_truth),
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// C++ rendering

struct Renderer {
    indent: &'static str,
    brace_newline: bool,
    comment_rate: f64,
    out: String,
}

const VAR_NAMES: &[&str] = &[
    "n", "m", "x", "y", "z", "acc", "cnt", "best", "sum", "tmp", "lo", "hi", "res", "val",
];
const PHRASES: &[&str] = &[
    "read input",
    "accumulate",
    "main loop",
    "edge case",
    "update best",
    "scan cases",
    "reset state",
    "final answer",
];

impl Renderer {
    fn pad(&self, depth: usize) -> String {
        self.indent.repeat(depth)
    }

    fn line(&mut self, depth: usize, text: &str) {
        self.out.push_str(&self.pad(depth));
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn blank(&mut self) {
        self.out.push('\n');
    }

    fn open(&mut self, depth: usize, header: &str) {
        if self.brace_newline {
            self.line(depth, header);
            self.line(depth, "{");
        } else {
            self.line(depth, &format!("{header} {{"));
        }
    }

    fn close(&mut self, depth: usize) {
        self.line(depth, "}");
    }

    fn comment(&mut self, rng: &mut ChaCha8Rng, index: usize, depth: usize) {
        let phrase = PHRASES[rng.gen_range(0..PHRASES.len())];
        if index == 2 {
            self.line(depth, &format!("/* {phrase} */"));
        } else {
            self.line(depth, &format!("// {phrase}"));
        }
    }

    /// `do { ... } while (cond);` closer, following the brace style.
    fn open_do(&mut self, depth: usize) {
        if self.brace_newline {
            self.line(depth, "do");
            self.line(depth, "{");
        } else {
            self.line(depth, "do {");
        }
    }

    fn close_do(&mut self, depth: usize, cond: &str) {
        self.line(depth, &format!("}} while ({cond});"));
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    pool[rng.gen_range(0..pool.len())]
}

/// Emits `budget` statements from a fixed cycle of statement kinds, so
/// keyword and token densities track file length rather than chance; the rng
/// only varies names, constants and comment phrasing.
fn emit_statements(r: &mut Renderer, rng: &mut ChaCha8Rng, depth: usize, budget: usize) {
    let n_comments = (budget as f64 * r.comment_rate).round() as usize;
    let comment_every = if n_comments > 0 {
        (budget / n_comments).max(1)
    } else {
        usize::MAX
    };
    for s in 0..budget {
        if s % comment_every == 0 && s / comment_every < n_comments {
            r.comment(rng, s / comment_every, depth);
        }
        match s % 12 {
            0 | 7 => {
                let v = pick(rng, VAR_NAMES);
                r.line(depth, &format!("int {v} = {};", rng.gen_range(0..100)));
            }
            1 => {
                let v = pick(rng, VAR_NAMES);
                r.open(depth, &format!("if ({v} > {})", rng.gen_range(0..20)));
                r.line(depth + 1, &format!("best += {v};"));
                if r.brace_newline {
                    r.close(depth);
                    r.open(depth, "else");
                } else {
                    r.line(depth, "} else {");
                }
                r.line(depth + 1, "best -= 1;");
                r.close(depth);
            }
            2 => {
                r.open(
                    depth,
                    &format!("for (int i = 0; i < {}; ++i)", rng.gen_range(2..30)),
                );
                r.line(depth + 1, "acc += i;");
                r.line(depth + 1, &format!("if (i == {}) break;", rng.gen_range(0..9)));
                r.close(depth);
            }
            3 | 9 => {
                let v = pick(rng, VAR_NAMES);
                let op = pick(rng, &["+=", "-=", "*=", "^="]);
                r.line(depth, &format!("{v} {op} {};", rng.gen_range(1..50)));
            }
            4 => {
                let v = pick(rng, VAR_NAMES);
                let a = rng.gen_range(0..50);
                let b = rng.gen_range(0..50);
                r.line(depth, &format!("int {v} = best > {a} ? {a} : {b};"));
            }
            5 => {
                let v = pick(rng, VAR_NAMES);
                r.open(depth, &format!("while ({v} > 0)"));
                r.line(depth + 1, &format!("{v} -= {};", rng.gen_range(1..5)));
                r.line(depth + 1, &format!("if ({v} == 2) continue;"));
                r.close(depth);
            }
            6 | 11 => {
                r.line(
                    depth,
                    &format!("cout << best + {} << \"\\n\";", rng.gen_range(0..9)),
                );
            }
            8 => {
                let v = pick(rng, VAR_NAMES);
                r.open(depth, &format!("switch ({v} % 3)"));
                r.line(depth + 1, "case 0:");
                r.line(depth + 2, "best += 1;");
                r.line(depth + 2, "break;");
                r.line(depth + 1, "case 1:");
                r.line(depth + 2, "best -= 1;");
                r.line(depth + 2, "break;");
                r.line(depth + 1, "default:");
                r.line(depth + 2, "break;");
                r.close(depth);
            }
            _ => {
                r.open_do(depth);
                r.line(depth + 1, &format!("best -= {};", rng.gen_range(1..4)));
                r.close_do(depth, "best > 100");
            }
        }
    }
}

/// Renders one synthetic solution file in the given style profile.
pub fn render_solution(profile: usize, rng: &mut ChaCha8Rng) -> String {
    let style = profile_style(profile);
    let comment_rate = if style.dense_comments { 0.33 } else { 0.14 };
    let mut r = Renderer {
        indent: style.indent_unit,
        brace_newline: style.brace_newline,
        comment_rate,
        out: String::new(),
    };

    r.line(0, "#include <bits/stdc++.h>");
    r.line(0, &format!("#define LIMIT {}", rng.gen_range(100..100000)));
    r.line(0, "using namespace std;");
    r.blank();

    let helpers: [(&str, usize); 2] = [("solve", 2), ("calc", 1)];
    for (name, n_params) in helpers {
        let params: Vec<String> = (0..n_params).map(|j| format!("int p{j}")).collect();
        let header = format!("int {name}({})", params.join(", "));
        r.open(0, &header);
        if n_params >= 2 {
            let op = pick(rng, &["+", "*", "-", "^"]);
            r.line(1, &format!("return p0 {op} p1;"));
        } else {
            r.line(1, &format!("return p0 + {};", rng.gen_range(1..9)));
        }
        r.close(0);
        r.blank();
    }

    r.open(0, "int main()");
    r.line(1, "int t;");
    r.line(1, "cin >> t;");
    r.blank();
    r.line(1, "int best = 0;");
    r.line(1, "int acc = 0;");
    r.open(1, "while (t--)");
    let budget = 24;
    emit_statements(&mut r, rng, 2, budget);
    r.close(1);
    r.line(1, "best += solve(best, 2) + calc(acc);");
    r.line(1, "cout << best + acc << endl;");
    r.line(1, "return 0;");
    r.close(0);
    r.out
}
